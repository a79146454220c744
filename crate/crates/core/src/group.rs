//! Finite abelian groups as products of cyclic factors, together with
//! subgroups, quotients, dual groups, annihilators and Haar weights.
//!
//! Measure conventions, fixed once for the whole crate:
//! * `G`, `H` and `G/H` carry counting measure with weight 1, which makes
//!   the fiber-sum formula over cosets an exact identity;
//! * the dual of `G` carries weight `1/|G|` (Plancherel dual of counting);
//! * the annihilator, viewed as the dual of `G/H`, carries weight `1/|G/H|`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A positive rational Haar weight for a single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    num: u64,
    den: u64,
}

impl Weight {
    pub const ONE: Weight = Weight { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Weight> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidFactors(format!(
                "point weight must be positive, got {num}/{den}"
            )));
        }
        let g = gcd(num, den);
        Ok(Weight {
            num: num / g,
            den: den / g,
        })
    }

    /// `1/n`.
    pub fn unit_over(n: u64) -> Weight {
        Weight::new(1, n).expect("n > 0")
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn times(self, other: Weight) -> Weight {
        Weight::new(self.num * other.num, self.den * other.den).expect("positive")
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Element of a finite abelian group, stored as one residue per cyclic factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u32>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    pub fn is_identity(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Finite abelian group `Z_{n_1} x ... x Z_{n_k}` with a per-point Haar weight.
///
/// The factor list is kept in the order supplied (no normal-form reduction),
/// so element coordinates stay stable across runs and reports.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    factors: Vec<u32>,
    order: usize,
    // Mixed-radix strides: index = sum_j residues[j] * strides[j].
    strides: Vec<usize>,
    point_weight: Weight,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors && self.point_weight == other.point_weight
    }
}

impl FiniteGroup {
    /// Build a group from cyclic factor sizes. An empty list is the trivial
    /// group of order 1.
    pub fn new(factors: &[u32], point_weight: Weight) -> Result<Arc<FiniteGroup>> {
        let mut order: usize = 1;
        for (j, &n) in factors.iter().enumerate() {
            if n == 0 {
                return Err(Error::InvalidFactors(format!("factor {j} is zero")));
            }
            order = order.checked_mul(n as usize).ok_or_else(|| {
                Error::InvalidFactors("group order overflows usize".to_string())
            })?;
        }
        let mut strides = vec![0usize; factors.len()];
        let mut s = 1usize;
        for j in (0..factors.len()).rev() {
            strides[j] = s;
            s *= factors[j] as usize;
        }
        Ok(Arc::new(FiniteGroup {
            factors: factors.to_vec(),
            order,
            strides,
            point_weight,
        }))
    }

    /// Counting-weight group, the default for `G`, `H` and `G/H`.
    pub fn counting(factors: &[u32]) -> Result<Arc<FiniteGroup>> {
        FiniteGroup::new(factors, Weight::ONE)
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn point_weight(&self) -> f64 {
        self.point_weight.value()
    }

    pub fn point_weight_rational(&self) -> Weight {
        self.point_weight
    }

    /// Total Haar mass, `order * point_weight`.
    pub fn total_mass(&self) -> f64 {
        self.order as f64 * self.point_weight.value()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.factors.len()],
        }
    }

    /// Build an element from signed coordinates, reducing each mod `n_j`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                self.factors.len(),
                coords.len()
            )));
        }
        let residues = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u32)
            .collect();
        Ok(GroupElement { residues })
    }

    /// Check that `el`'s residues are already reduced for this group.
    pub fn contains(&self, el: &GroupElement) -> bool {
        el.residues.len() == self.factors.len()
            && el.residues.iter().zip(&self.factors).all(|(&r, &n)| r < n)
    }

    fn check(&self, el: &GroupElement) -> Result<()> {
        if self.contains(el) {
            Ok(())
        } else {
            Err(Error::InvalidElement(format!(
                "{el:?} does not lie in a group with factors {:?}",
                self.factors
            )))
        }
    }

    /// Canonical mixed-radix index of an element. Indices sort elements
    /// lexicographically by residue tuple.
    pub fn index_of(&self, el: &GroupElement) -> usize {
        debug_assert!(self.contains(el));
        el.residues
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| r as usize * s)
            .sum()
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        let residues = self
            .strides
            .iter()
            .map(|&s| {
                let digit = (index / s) as u32;
                index %= s;
                digit
            })
            .collect();
        GroupElement { residues }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    /// Digitwise `i + j` on canonical indices, without building elements.
    pub fn add_indices(&self, mut i: usize, mut j: usize) -> usize {
        let mut out = 0usize;
        for k in 0..self.factors.len() {
            let n = self.factors[k] as usize;
            let s = self.strides[k];
            let a = i / s;
            let b = j / s;
            i %= s;
            j %= s;
            let mut d = a + b;
            if d >= n {
                d -= n;
            }
            out += d * s;
        }
        out
    }

    /// Digitwise `-i` on canonical indices.
    pub fn neg_index(&self, mut i: usize) -> usize {
        let mut out = 0usize;
        for k in 0..self.factors.len() {
            let n = self.factors[k] as usize;
            let s = self.strides[k];
            let a = i / s;
            i %= s;
            if a != 0 {
                out += (n - a) * s;
            }
        }
        out
    }

    /// Digitwise `i - j` on canonical indices.
    pub fn sub_indices(&self, i: usize, j: usize) -> usize {
        self.add_indices(i, self.neg_index(j))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| {
                let s = x + y;
                if s >= n {
                    s - n
                } else {
                    s
                }
            })
            .collect();
        GroupElement { residues }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| if x == 0 { 0 } else { n - x })
            .collect();
        GroupElement { residues }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// Exact character phase numerator: `sum_j x_j k_j (order / n_j) mod order`.
    /// The pairing value is `exp(2 pi i * phase / order)`.
    pub fn character_phase(&self, k: &GroupElement, x: &GroupElement) -> u64 {
        let order = self.order as u128;
        let mut acc: u128 = 0;
        for j in 0..self.factors.len() {
            let n = self.factors[j] as u128;
            let term = (x.residues[j] as u128) * (k.residues[j] as u128) % n;
            acc = (acc + term * (order / n)) % order;
        }
        acc as u64
    }

    /// Character pairing `<x, chi_k> = exp(2 pi i sum_j x_j k_j / n_j)`.
    pub(crate) fn pair(&self, k: &GroupElement, x: &GroupElement) -> Complex64 {
        let phase = self.character_phase(k, x);
        let angle = 2.0 * std::f64::consts::PI * phase as f64 / self.order as f64;
        Complex64::new(angle.cos(), angle.sin())
    }

    /// Validated character evaluation: `<x, chi_k>`.
    pub fn eval_character(&self, k: &GroupElement, x: &GroupElement) -> Result<Complex64> {
        self.check(k)?;
        self.check(x)?;
        Ok(self.pair(k, x))
    }
}

/// Subgroup generated inside a parent group, with canonically ordered elements.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<GroupElement>,
    generators: Vec<GroupElement>,
    member: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        *self.parent == *other.parent && self.elements == other.elements
    }
}

impl Subgroup {
    /// Smallest subgroup containing `generators`, by closure iteration.
    pub fn generate(parent: &Arc<FiniteGroup>, generators: &[GroupElement]) -> Result<Subgroup> {
        for g in generators {
            parent.check(g)?;
        }
        let mut member = vec![false; parent.order()];
        member[parent.index_of(&parent.identity())] = true;
        let mut frontier = vec![parent.identity()];
        while let Some(el) = frontier.pop() {
            for g in generators {
                for step in [g.clone(), parent.neg(g)] {
                    let next = parent.add(&el, &step);
                    let idx = parent.index_of(&next);
                    if !member[idx] {
                        member[idx] = true;
                        frontier.push(next);
                    }
                }
            }
        }
        let elements = (0..parent.order())
            .filter(|&i| member[i])
            .map(|i| parent.element_at(i))
            .collect();
        Ok(Subgroup {
            parent: Arc::clone(parent),
            elements,
            generators: generators.to_vec(),
            member,
        })
    }

    /// The whole parent group as a subgroup of itself.
    pub fn full(parent: &Arc<FiniteGroup>) -> Subgroup {
        let gens: Vec<GroupElement> = (0..parent.factors().len())
            .map(|j| {
                let mut coords = vec![0i64; parent.factors().len()];
                coords[j] = 1;
                parent.element(&coords).expect("valid coords")
            })
            .collect();
        Subgroup::generate(parent, &gens).expect("generators are valid")
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn contains(&self, el: &GroupElement) -> bool {
        self.parent.contains(el) && self.member[self.parent.index_of(el)]
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.member[index]
    }

    /// Haar weight of a single point of `H` (counting measure).
    pub fn point_weight(&self) -> f64 {
        1.0
    }

    /// Exhaustive closure check, used by tests and debug assertions.
    pub fn verify_closed(&self) -> bool {
        if !self.contains(&self.parent.identity()) {
            return false;
        }
        self.elements.iter().all(|a| {
            self.contains(&self.parent.neg(a))
                && self
                    .elements
                    .iter()
                    .all(|b| self.contains(&self.parent.add(a, b)))
        })
    }
}

/// Quotient `G/H` with one canonical (lexicographically smallest)
/// representative per coset and counting weight 1.
#[derive(Debug, Clone)]
pub struct Quotient {
    parent: Arc<FiniteGroup>,
    subgroup: Arc<Subgroup>,
    reps: Vec<GroupElement>,
    // parent element index -> coset (representative) index
    coset_of: Vec<usize>,
    // diff[i * len + j] = coset index of reps[i] - reps[j]
    diff: Vec<usize>,
    point_weight: Weight,
}

impl PartialEq for Quotient {
    fn eq(&self, other: &Self) -> bool {
        *self.parent == *other.parent && self.subgroup.elements() == other.subgroup.elements()
    }
}

impl Quotient {
    pub fn new(parent: &Arc<FiniteGroup>, subgroup: &Arc<Subgroup>) -> Result<Quotient> {
        if *subgroup.parent().as_ref() != *parent.as_ref() {
            return Err(Error::Mismatch(
                "subgroup was generated in a different group".to_string(),
            ));
        }
        let order = parent.order();
        let mut coset_of = vec![usize::MAX; order];
        let mut reps = Vec::new();
        // Scanning indices in increasing order makes the first unassigned
        // element of each coset its lexicographic minimum.
        for idx in 0..order {
            if coset_of[idx] != usize::MAX {
                continue;
            }
            let rep = parent.element_at(idx);
            let coset = reps.len();
            for h in subgroup.elements() {
                let member = parent.add(&rep, h);
                coset_of[parent.index_of(&member)] = coset;
            }
            reps.push(rep);
        }
        let len = reps.len();
        debug_assert_eq!(len * subgroup.order(), order);
        let mut diff = vec![0usize; len * len];
        for i in 0..len {
            for j in 0..len {
                let d = parent.sub(&reps[i], &reps[j]);
                diff[i * len + j] = coset_of[parent.index_of(&d)];
            }
        }
        Ok(Quotient {
            parent: Arc::clone(parent),
            subgroup: Arc::clone(subgroup),
            reps,
            coset_of,
            diff,
            point_weight: Weight::ONE,
        })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn subgroup(&self) -> &Arc<Subgroup> {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[GroupElement] {
        &self.reps
    }

    pub fn rep_at(&self, coset: usize) -> &GroupElement {
        &self.reps[coset]
    }

    pub fn point_weight(&self) -> f64 {
        self.point_weight.value()
    }

    /// Coset index of a parent element given by its canonical index.
    pub fn coset_of_index(&self, parent_index: usize) -> usize {
        self.coset_of[parent_index]
    }

    pub fn coset_of(&self, el: &GroupElement) -> Result<usize> {
        self.parent.check(el)?;
        Ok(self.coset_of[self.parent.index_of(el)])
    }

    /// Coset index of `reps[i] - reps[j]` (table lookup).
    pub fn coset_sub(&self, i: usize, j: usize) -> usize {
        self.diff[i * self.reps.len() + j]
    }

    /// Coset index of `reps[i] + reps[j]`.
    pub fn coset_add(&self, i: usize, j: usize) -> usize {
        let s = self.parent.add(&self.reps[i], &self.reps[j]);
        self.coset_of[self.parent.index_of(&s)]
    }

    /// Coset index of `-reps[i]`.
    pub fn coset_neg(&self, i: usize) -> usize {
        let n = self.parent.neg(&self.reps[i]);
        self.coset_of[self.parent.index_of(&n)]
    }
}

/// Dual group: same cyclic factors, Plancherel weight `1/|G|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGroup {
    base: Arc<FiniteGroup>,
}

impl DualGroup {
    pub fn of(group: &Arc<FiniteGroup>) -> DualGroup {
        let base = FiniteGroup::new(
            group.factors(),
            Weight::unit_over(group.order() as u64),
        )
        .expect("factors already validated");
        DualGroup { base }
    }

    /// Index group of the characters (same factors as the primal group).
    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.order()
    }

    pub fn is_empty(&self) -> bool {
        self.base.order() == 0
    }

    pub fn point_weight(&self) -> f64 {
        self.base.point_weight()
    }

    /// `<x, chi_k>` where `x` lives in the primal group.
    pub fn pair(&self, x: &GroupElement, k: &GroupElement) -> Complex64 {
        self.base.pair(k, x)
    }
}

/// Annihilator `{k : <h, chi_k> = 1 for all h in H}`, computed with exact
/// integer arithmetic (no floating point enters the membership test).
pub fn annihilator(
    group: &Arc<FiniteGroup>,
    subgroup: &Subgroup,
    dual: &DualGroup,
) -> Result<Subgroup> {
    if *subgroup.parent().as_ref() != *group.as_ref() {
        return Err(Error::Mismatch(
            "subgroup was generated in a different group".to_string(),
        ));
    }
    let base = dual.base();
    let members: Vec<GroupElement> = base
        .elements()
        .filter(|k| {
            subgroup
                .elements()
                .iter()
                .all(|h| group.character_phase(k, h) == 0)
        })
        .collect();
    // The annihilator is closed under addition, so regenerating from the
    // member list reuses the subgroup plumbing (ordering, membership table).
    Subgroup::generate(base, &members)
}

/// Everything tied to one `(G, H)` pair: quotient, dual, annihilator and the
/// cached character table. Immutable after construction.
#[derive(Debug)]
pub struct Context {
    group: Arc<FiniteGroup>,
    subgroup: Arc<Subgroup>,
    quotient: Arc<Quotient>,
    dual: Arc<DualGroup>,
    annihilator: Arc<Subgroup>,
    // chars[k * |G| + x] = <x, chi_k>
    chars: Vec<Complex64>,
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.subgroup.elements() == other.subgroup.elements()
    }
}

impl Context {
    pub fn new(factors: &[u32], subgroup_generators: &[Vec<i64>]) -> Result<Arc<Context>> {
        let group = FiniteGroup::counting(factors)?;
        let gens = subgroup_generators
            .iter()
            .map(|c| group.element(c))
            .collect::<Result<Vec<_>>>()?;
        Context::from_group(&group, &gens)
    }

    pub fn from_group(
        group: &Arc<FiniteGroup>,
        subgroup_generators: &[GroupElement],
    ) -> Result<Arc<Context>> {
        let subgroup = Arc::new(Subgroup::generate(group, subgroup_generators)?);
        let quotient = Arc::new(Quotient::new(group, &subgroup)?);
        let dual = Arc::new(DualGroup::of(group));
        let ann = Arc::new(annihilator(group, &subgroup, &dual)?);
        let n = group.order();
        let mut chars = vec![Complex64::new(0.0, 0.0); n * n];
        for (ki, k) in dual.base().elements().enumerate() {
            for (xi, x) in group.elements().enumerate() {
                chars[ki * n + xi] = group.pair(&k, &x);
            }
        }
        Ok(Arc::new(Context {
            group: Arc::clone(group),
            subgroup,
            quotient,
            dual,
            annihilator: ann,
            chars,
        }))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroup(&self) -> &Arc<Subgroup> {
        &self.subgroup
    }

    pub fn quotient(&self) -> &Arc<Quotient> {
        &self.quotient
    }

    pub fn dual(&self) -> &Arc<DualGroup> {
        &self.dual
    }

    pub fn annihilator(&self) -> &Arc<Subgroup> {
        &self.annihilator
    }

    /// Weight of one point of the annihilator viewed as the dual of `G/H`.
    pub fn annihilator_weight(&self) -> f64 {
        1.0 / self.quotient.len() as f64
    }

    /// Cached `<x, chi_k>` by canonical indices.
    pub fn character(&self, k_index: usize, x_index: usize) -> Complex64 {
        self.chars[k_index * self.group.order() + x_index]
    }

    /// Grid size `|dual| * |quotient|`.
    pub fn grid_len(&self) -> usize {
        self.dual.len() * self.quotient.len()
    }

    pub fn type_label(&self) -> String {
        let fs: Vec<String> = self.group.factors().iter().map(|f| f.to_string()).collect();
        let hs: Vec<String> = self
            .subgroup
            .generators()
            .iter()
            .map(|g| format!("{g:?}"))
            .collect();
        format!("Z[{}]/<{}>", fs.join("x"), hs.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> Arc<FiniteGroup> {
        FiniteGroup::counting(&[n]).unwrap()
    }

    #[test]
    fn build_group_orders() {
        assert_eq!(z(4).order(), 4);
        let g = FiniteGroup::counting(&[2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        let trivial = FiniteGroup::counting(&[]).unwrap();
        assert_eq!(trivial.order(), 1);
        assert!(FiniteGroup::counting(&[0]).is_err());
        assert!(FiniteGroup::counting(&[4, 0, 2]).is_err());
    }

    #[test]
    fn total_mass_is_order_times_weight() {
        let g = FiniteGroup::new(&[6], Weight::unit_over(6)).unwrap();
        assert!((g.total_mass() - 1.0).abs() < 1e-15);
        assert!((z(5).total_mass() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn element_reduction_is_idempotent() {
        let g = FiniteGroup::counting(&[2, 4]).unwrap();
        let e = g.element(&[-1, 7]).unwrap();
        assert_eq!(e.residues(), &[1, 3]);
        let again = g
            .element(&[e.residues()[0] as i64, e.residues()[1] as i64])
            .unwrap();
        assert_eq!(e, again);
        assert!(g.element(&[1]).is_err());
    }

    #[test]
    fn index_roundtrip_and_lex_order() {
        let g = FiniteGroup::counting(&[2, 3]).unwrap();
        let mut prev: Option<GroupElement> = None;
        for i in 0..g.order() {
            let e = g.element_at(i);
            assert_eq!(g.index_of(&e), i);
            if let Some(p) = prev {
                assert!(p < e, "indices must sort lexicographically");
            }
            prev = Some(e);
        }
    }

    #[test]
    fn index_arithmetic_matches_element_arithmetic() {
        let g = FiniteGroup::counting(&[2, 3, 4]).unwrap();
        for i in 0..g.order() {
            let a = g.element_at(i);
            assert_eq!(g.neg_index(i), g.index_of(&g.neg(&a)));
            for j in 0..g.order() {
                let b = g.element_at(j);
                assert_eq!(g.add_indices(i, j), g.index_of(&g.add(&a, &b)));
                assert_eq!(g.sub_indices(i, j), g.index_of(&g.sub(&a, &b)));
            }
        }
    }

    #[test]
    fn generate_subgroup_examples() {
        // Z_4, gens {2} -> {0, 2}
        let g = z(4);
        let h = Subgroup::generate(&g, &[g.element(&[2]).unwrap()]).unwrap();
        let got: Vec<u32> = h.elements().iter().map(|e| e.residues()[0]).collect();
        assert_eq!(got, vec![0, 2]);

        // Z_4, no generators -> {0}
        let t = Subgroup::generate(&g, &[]).unwrap();
        assert_eq!(t.order(), 1);
        assert!(t.elements()[0].is_identity());

        // Z_2 x Z_2, gens {(1,0)} -> {(0,0),(1,0)}
        let g22 = FiniteGroup::counting(&[2, 2]).unwrap();
        let h2 = Subgroup::generate(&g22, &[g22.element(&[1, 0]).unwrap()]).unwrap();
        let got: Vec<&[u32]> = h2.elements().iter().map(|e| e.residues()).collect();
        assert_eq!(got, vec![&[0u32, 0][..], &[1u32, 0][..]]);

        assert!(Subgroup::generate(&g, &[g22.element(&[1, 1]).unwrap()]).is_err());
    }

    #[test]
    fn subgroups_are_closed_and_satisfy_lagrange() {
        let g = FiniteGroup::counting(&[2, 4]).unwrap();
        for gen_coords in [vec![0i64, 1], vec![1, 2], vec![1, 1], vec![0, 2]] {
            let h = Subgroup::generate(&g, &[g.element(&gen_coords).unwrap()]).unwrap();
            assert!(h.verify_closed());
            assert_eq!(g.order() % h.order(), 0, "Lagrange violated");
        }
    }

    #[test]
    fn quotient_examples() {
        // Z_4 / {0,2}: 2 cosets with reps {0, 1}
        let g = z(4);
        let h = Arc::new(Subgroup::generate(&g, &[g.element(&[2]).unwrap()]).unwrap());
        let q = Quotient::new(&g, &h).unwrap();
        assert_eq!(q.len(), 2);
        let reps: Vec<u32> = q.reps().iter().map(|e| e.residues()[0]).collect();
        assert_eq!(reps, vec![0, 1]);
        assert!(q.reps()[0].is_identity());

        // G / G -> one coset
        let full = Arc::new(Subgroup::full(&g));
        let q1 = Quotient::new(&g, &full).unwrap();
        assert_eq!(q1.len(), 1);

        // G / {0} -> |G| cosets, reps = all elements
        let triv = Arc::new(Subgroup::generate(&g, &[]).unwrap());
        let qg = Quotient::new(&g, &triv).unwrap();
        assert_eq!(qg.len(), g.order());
        for (i, rep) in qg.reps().iter().enumerate() {
            assert_eq!(g.index_of(rep), i);
        }
    }

    #[test]
    fn quotient_rejects_foreign_subgroup() {
        let g = z(4);
        let other = z(8);
        let h = Arc::new(Subgroup::generate(&other, &[other.element(&[4]).unwrap()]).unwrap());
        assert!(Quotient::new(&g, &h).is_err());
    }

    #[test]
    fn quotient_cosets_partition_parent() {
        let g = FiniteGroup::counting(&[2, 4]).unwrap();
        let h = Arc::new(Subgroup::generate(&g, &[g.element(&[1, 2]).unwrap()]).unwrap());
        let q = Quotient::new(&g, &h).unwrap();
        assert_eq!(q.len() * h.order(), g.order());
        let mut seen = vec![0usize; q.len()];
        for i in 0..g.order() {
            seen[q.coset_of_index(i)] += 1;
        }
        assert!(seen.iter().all(|&c| c == h.order()));
        // Each rep is the lexicographic minimum of its coset.
        for (ci, rep) in q.reps().iter().enumerate() {
            for h_el in h.elements() {
                let member = g.add(rep, h_el);
                assert_eq!(q.coset_of_index(g.index_of(&member)), ci);
                assert!(rep <= &member);
            }
        }
    }

    #[test]
    fn character_examples() {
        // Z_4: <1, chi_1> = i
        let g = z(4);
        let one = g.element(&[1]).unwrap();
        let v = g.eval_character(&one, &one).unwrap();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);

        // trivial character is identically 1
        let k0 = g.identity();
        for x in g.elements() {
            let v = g.eval_character(&k0, &x).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }

        // Z_2 x Z_2: <(1,1), chi_(1,1)> = (-1)(-1) = 1
        let g22 = FiniteGroup::counting(&[2, 2]).unwrap();
        let e = g22.element(&[1, 1]).unwrap();
        let v = g22.eval_character(&e, &e).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        assert!(g.eval_character(&one, &g22.element(&[0, 0]).unwrap()).is_err());
    }

    #[test]
    fn characters_have_unit_modulus_and_multiply() {
        let g = FiniteGroup::counting(&[3, 4]).unwrap();
        let els: Vec<GroupElement> = g.elements().collect();
        for k in &els {
            for x in &els {
                let v = g.pair(k, x);
                assert!((v.norm() - 1.0).abs() < 1e-15);
            }
        }
        // bicharacter identities on a grid of triples
        for k in &els {
            for x in &els {
                for y in &els {
                    let lhs = g.pair(k, &g.add(x, y));
                    let rhs = g.pair(k, x) * g.pair(k, y);
                    assert!((lhs - rhs).norm() < 1e-12);
                    let lhs2 = g.pair(&g.add(k, x), y);
                    let rhs2 = g.pair(k, y) * g.pair(x, y);
                    assert!((lhs2 - rhs2).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        let g = FiniteGroup::counting(&[2, 3]).unwrap();
        let n = g.order();
        for k in g.elements() {
            for m in g.elements() {
                let mut s = Complex64::new(0.0, 0.0);
                for x in g.elements() {
                    s += g.pair(&k, &x) * g.pair(&m, &x).conj();
                }
                let expect = if k == m { n as f64 } else { 0.0 };
                assert!((s - Complex64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn annihilator_examples() {
        let g = z(4);
        let dual = DualGroup::of(&g);
        // H = {0,2} -> annihilator {0,2}
        let h = Subgroup::generate(&g, &[g.element(&[2]).unwrap()]).unwrap();
        let ann = annihilator(&g, &h, &dual).unwrap();
        let got: Vec<u32> = ann.elements().iter().map(|e| e.residues()[0]).collect();
        assert_eq!(got, vec![0, 2]);

        // H = {0} -> everything
        let triv = Subgroup::generate(&g, &[]).unwrap();
        let ann = annihilator(&g, &triv, &dual).unwrap();
        assert_eq!(ann.order(), g.order());

        // H = G -> {0}
        let full = Subgroup::full(&g);
        let ann = annihilator(&g, &full, &dual).unwrap();
        assert_eq!(ann.order(), 1);
    }

    #[test]
    fn annihilator_duality_and_sizes() {
        for (factors, gens) in [
            (vec![4u32], vec![vec![2i64]]),
            (vec![6], vec![vec![3]]),
            (vec![2, 4], vec![vec![1, 2]]),
            (vec![2, 4], vec![vec![0, 1]]),
            (vec![3, 3], vec![vec![1, 1]]),
            (vec![8], vec![vec![2]]),
        ] {
            let g = FiniteGroup::counting(&factors).unwrap();
            let gens: Vec<GroupElement> = gens.iter().map(|c| g.element(c).unwrap()).collect();
            let h = Subgroup::generate(&g, &gens).unwrap();
            let dual = DualGroup::of(&g);
            let ann = annihilator(&g, &h, &dual).unwrap();
            assert_eq!(ann.order() * h.order(), g.order());

            // (H^perp)^perp = H, computed entirely in integers
            let dd = DualGroup::of(dual.base());
            let back = annihilator(dual.base(), &ann, &dd).unwrap();
            assert_eq!(back.elements(), h.elements());
        }
    }

    #[test]
    fn context_weights_follow_the_normalization() {
        let ctx = Context::new(&[6], &[vec![3]]).unwrap();
        assert_eq!(ctx.group().point_weight(), 1.0);
        assert_eq!(ctx.quotient().point_weight(), 1.0);
        assert!((ctx.dual().point_weight() - 1.0 / 6.0).abs() < 1e-15);
        assert!((ctx.annihilator_weight() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(ctx.annihilator().order(), 3);
    }
}
