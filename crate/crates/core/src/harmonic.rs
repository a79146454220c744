//! Measured function spaces and Fourier analysis on them: transforms on the
//! group and on the quotient, the periodization map, and the ordinary
//! short-time Fourier transform.
//!
//! The direct `O(N^2)` summation is the definition of every transform here;
//! [`fourier_fft`] is a per-factor fast path that must agree with it.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::group::{annihilator, DualGroup, FiniteGroup, GroupElement, Quotient, Subgroup};

/// Index space a function lives on, together with its per-point Haar weight.
#[derive(Debug, Clone)]
pub enum Space {
    /// Functions on `G` (counting weight from the group).
    Group(Arc<FiniteGroup>),
    /// Functions on the dual of `G` (weight `1/|G|`).
    Dual(Arc<DualGroup>),
    /// Functions on `G/H`, indexed by canonical coset representatives.
    Quotient(Arc<Quotient>),
    /// Functions on the annihilator viewed as the dual of `G/H`
    /// (weight `1/|G/H|`).
    DualQuotient {
        quotient: Arc<Quotient>,
        ann: Arc<Subgroup>,
    },
}

impl Space {
    pub fn len(&self) -> usize {
        match self {
            Space::Group(g) => g.order(),
            Space::Dual(d) => d.len(),
            Space::Quotient(q) => q.len(),
            Space::DualQuotient { ann, .. } => ann.order(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point_weight(&self) -> f64 {
        match self {
            Space::Group(g) => g.point_weight(),
            Space::Dual(d) => d.point_weight(),
            Space::Quotient(q) => q.point_weight(),
            Space::DualQuotient { quotient, .. } => 1.0 / quotient.len() as f64,
        }
    }

    /// Structural compatibility; `Arc` identity is not required.
    pub fn same_as(&self, other: &Space) -> bool {
        match (self, other) {
            (Space::Group(a), Space::Group(b)) => **a == **b,
            (Space::Dual(a), Space::Dual(b)) => **a == **b,
            (Space::Quotient(a), Space::Quotient(b)) => **a == **b,
            (
                Space::DualQuotient { quotient: a, .. },
                Space::DualQuotient { quotient: b, .. },
            ) => **a == **b,
            _ => false,
        }
    }
}

/// Complex-valued function on a measured space, stored in canonical index
/// order.
#[derive(Debug, Clone)]
pub struct GroupFunction {
    space: Space,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(space: Space, values: Vec<Complex64>) -> Result<GroupFunction> {
        if values.len() != space.len() {
            return Err(Error::Mismatch(format!(
                "expected {} values for this space, got {}",
                space.len(),
                values.len()
            )));
        }
        Ok(GroupFunction { space, values })
    }

    pub fn zeros(space: Space) -> GroupFunction {
        let n = space.len();
        GroupFunction {
            space,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn constant(space: Space, value: Complex64) -> GroupFunction {
        let n = space.len();
        GroupFunction {
            space,
            values: vec![value; n],
        }
    }

    /// Point mass at one canonical index.
    pub fn delta(space: Space, index: usize) -> GroupFunction {
        let mut f = GroupFunction::zeros(space);
        f.values[index] = Complex64::new(1.0, 0.0);
        f
    }

    /// Indicator of an index set.
    pub fn indicator(space: Space, indices: &[usize]) -> GroupFunction {
        let mut f = GroupFunction::zeros(space);
        for &i in indices {
            f.values[i] = Complex64::new(1.0, 0.0);
        }
        f
    }

    pub fn from_fn(space: Space, mut f: impl FnMut(usize) -> Complex64) -> GroupFunction {
        let values = (0..space.len()).map(&mut f).collect();
        GroupFunction { space, values }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Measure-weighted `L^p` norm, `p >= 1` or `f64::INFINITY`.
    pub fn norm(&self, p: f64) -> f64 {
        lp_norm(&self.values, self.space.point_weight(), p)
    }

    /// `<self, other> = sum self * conj(other) * w`.
    pub fn inner(&self, other: &GroupFunction) -> Result<Complex64> {
        if !self.space.same_as(&other.space) {
            return Err(Error::Mismatch(
                "inner product between different spaces".to_string(),
            ));
        }
        let w = self.space.point_weight();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.values.iter().zip(&other.values) {
            acc += a * b.conj();
        }
        Ok(acc * w)
    }

    pub fn scale(&self, c: Complex64) -> GroupFunction {
        GroupFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn conj(&self) -> GroupFunction {
        GroupFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn add(&self, other: &GroupFunction) -> Result<GroupFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GroupFunction) -> Result<GroupFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul_pointwise(&self, other: &GroupFunction) -> Result<GroupFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    fn zip_with(
        &self,
        other: &GroupFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<GroupFunction> {
        if !self.space.same_as(&other.space) {
            return Err(Error::Mismatch("functions live on different spaces".to_string()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(GroupFunction {
            space: self.space.clone(),
            values,
        })
    }

    /// Largest relative deviation from `other`, floored absolutely at 1e-14.
    pub fn rel_distance(&self, other: &GroupFunction) -> f64 {
        rel_distance(&self.values, &other.values)
    }
}

/// Weighted `l^p` norm of raw values with a uniform point weight.
pub fn lp_norm(values: &[Complex64], weight: f64, p: f64) -> f64 {
    debug_assert!(p >= 1.0);
    if p.is_infinite() {
        values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    } else {
        let s: f64 = values.iter().map(|v| v.norm().powf(p)).sum();
        (weight * s).powf(1.0 / p)
    }
}

/// Scale-free distance: max |a-b| relative to the larger magnitude in play,
/// with absolute floor 1e-14.
pub fn rel_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = a
        .iter()
        .chain(b.iter())
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(1e-14);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Relative gap between two scalars with the same floor convention.
pub fn rel_scalar(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm()).max(1e-14);
    (a - b).norm() / scale
}

/// Lazy modulation/translation pair. Translation is applied first, then
/// modulation: `(M T f)(x) = <x, m> f(x - t)`.
///
/// Which kind of element each slot accepts depends on the space:
/// group functions are modulated by dual elements and translated by group
/// elements; dual functions the other way around; quotient functions are
/// translated by (any representative of) a coset and modulated by
/// annihilator elements; annihilator functions are modulated by cosets.
#[derive(Debug, Clone, Default)]
pub struct ModulationTranslation {
    pub modulation: Option<GroupElement>,
    pub translation: Option<GroupElement>,
}

impl ModulationTranslation {
    pub fn modulation(m: GroupElement) -> Self {
        ModulationTranslation {
            modulation: Some(m),
            translation: None,
        }
    }

    pub fn translation(t: GroupElement) -> Self {
        ModulationTranslation {
            modulation: None,
            translation: Some(t),
        }
    }

    pub fn apply(&self, f: &GroupFunction) -> Result<GroupFunction> {
        let mut out = f.clone();
        if let Some(t) = &self.translation {
            out = translate(&out, t)?;
        }
        if let Some(m) = &self.modulation {
            out = modulate(&out, m)?;
        }
        Ok(out)
    }
}

/// `(M_m f)(x) = <x, m> f(x)` in the pairing appropriate for `f`'s space.
pub fn modulate(f: &GroupFunction, m: &GroupElement) -> Result<GroupFunction> {
    let values = match f.space() {
        Space::Group(g) => {
            let d = DualGroup::of(g);
            if !d.base().contains(m) {
                return Err(Error::InvalidElement(format!("{m:?} is not a character index")));
            }
            (0..g.order())
                .map(|x| f.values()[x] * d.pair(&g.element_at(x), m))
                .collect()
        }
        Space::Dual(d) => {
            // modulation of a dual function by a primal element
            let g = d.base();
            if !g.contains(m) {
                return Err(Error::InvalidElement(format!("{m:?} is not a group element")));
            }
            (0..d.len())
                .map(|k| f.values()[k] * g.pair(&g.element_at(k), m))
                .collect()
        }
        Space::Quotient(q) => {
            // modulation by an annihilator element, evaluated on representatives
            let g = q.parent();
            if !g.contains(m) {
                return Err(Error::InvalidElement(format!("{m:?} is not a character index")));
            }
            (0..q.len())
                .map(|i| f.values()[i] * g.pair(m, q.rep_at(i)))
                .collect()
        }
        Space::DualQuotient { quotient, ann } => {
            // modulation by a coset zH: F(eta) <z, eta>
            let g = quotient.parent();
            if !g.contains(m) {
                return Err(Error::InvalidElement(format!("{m:?} is not a group element")));
            }
            ann.elements()
                .iter()
                .enumerate()
                .map(|(i, eta)| f.values()[i] * g.pair(eta, m))
                .collect()
        }
    };
    GroupFunction::new(f.space().clone(), values)
}

/// `(T_t f)(x) = f(x - t)`.
pub fn translate(f: &GroupFunction, t: &GroupElement) -> Result<GroupFunction> {
    let values = match f.space() {
        Space::Group(g) => {
            if !g.contains(t) {
                return Err(Error::InvalidElement(format!("{t:?} is not a group element")));
            }
            (0..g.order())
                .map(|x| {
                    let src = g.sub(&g.element_at(x), t);
                    f.values()[g.index_of(&src)]
                })
                .collect()
        }
        Space::Dual(d) => {
            let g = d.base();
            if !g.contains(t) {
                return Err(Error::InvalidElement(format!("{t:?} is not a character index")));
            }
            (0..g.order())
                .map(|x| {
                    let src = g.sub(&g.element_at(x), t);
                    f.values()[g.index_of(&src)]
                })
                .collect()
        }
        Space::Quotient(q) => {
            let zc = q.coset_of(t)?;
            (0..q.len())
                .map(|i| f.values()[q.coset_sub(i, zc)])
                .collect()
        }
        Space::DualQuotient { .. } => {
            return Err(Error::Mismatch(
                "translation on annihilator functions is not supported".to_string(),
            ))
        }
    };
    GroupFunction::new(f.space().clone(), values)
}

/// Fourier transform by direct summation. Group functions map to the dual,
/// quotient functions to the annihilator (as the dual of `G/H`).
pub fn fourier(f: &GroupFunction) -> Result<GroupFunction> {
    match f.space() {
        Space::Group(g) => {
            let dual = Arc::new(DualGroup::of(g));
            let w = g.point_weight();
            let values = dual
                .base()
                .elements()
                .map(|k| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (xi, x) in g.elements().enumerate() {
                        acc += f.values()[xi] * g.pair(&k, &x).conj();
                    }
                    acc * w
                })
                .collect();
            GroupFunction::new(Space::Dual(dual), values)
        }
        Space::Quotient(q) => {
            let g = q.parent();
            let dual = DualGroup::of(g);
            let h = q.subgroup();
            let ann = Arc::new(annihilator(g, h, &dual)?);
            let w = q.point_weight();
            let values = ann
                .elements()
                .iter()
                .map(|eta| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i, rep) in q.reps().iter().enumerate() {
                        acc += f.values()[i] * g.pair(eta, rep).conj();
                    }
                    acc * w
                })
                .collect();
            GroupFunction::new(
                Space::DualQuotient {
                    quotient: Arc::clone(q),
                    ann,
                },
                values,
            )
        }
        _ => Err(Error::Mismatch(
            "fourier is defined for group and quotient functions".to_string(),
        )),
    }
}

/// Inverse Fourier transform: dual functions back to the group, annihilator
/// functions back to the quotient.
pub fn inverse_fourier(f: &GroupFunction) -> Result<GroupFunction> {
    match f.space() {
        Space::Dual(d) => {
            let g = Arc::clone(d.base());
            let w = d.point_weight();
            let group = FiniteGroup::counting(g.factors())?;
            let values = group
                .elements()
                .map(|x| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (ki, k) in g.elements().enumerate() {
                        acc += f.values()[ki] * g.pair(&k, &x);
                    }
                    acc * w
                })
                .collect();
            GroupFunction::new(Space::Group(group), values)
        }
        Space::DualQuotient { quotient, ann } => {
            let g = quotient.parent();
            let w = 1.0 / quotient.len() as f64;
            let values = quotient
                .reps()
                .iter()
                .map(|rep| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i, eta) in ann.elements().iter().enumerate() {
                        acc += f.values()[i] * g.pair(eta, rep);
                    }
                    acc * w
                })
                .collect();
            GroupFunction::new(Space::Quotient(Arc::clone(quotient)), values)
        }
        _ => Err(Error::Mismatch(
            "inverse_fourier is defined for dual and annihilator functions".to_string(),
        )),
    }
}

/// FFT fast path for group functions: one Cooley-Tukey pass per cyclic
/// factor. Must agree with [`fourier`] to 1e-12; the direct sum stays the
/// definition.
pub fn fourier_fft(f: &GroupFunction) -> Result<GroupFunction> {
    let g = match f.space() {
        Space::Group(g) => g,
        _ => {
            return Err(Error::Mismatch(
                "the fast path is only implemented for group functions".to_string(),
            ))
        }
    };
    let n = g.order();
    let mut buf: Vec<Complex64> = f.values().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    // Transform along each factor axis in turn; strides follow the canonical
    // mixed-radix layout.
    let factors = g.factors().to_vec();
    let mut stride = 1usize;
    for j in (0..factors.len()).rev() {
        let len = factors[j] as usize;
        if len > 1 {
            let fft = planner.plan_fft_forward(len);
            let mut line = vec![Complex64::new(0.0, 0.0); len];
            let block = stride * len;
            for base in (0..n).step_by(block) {
                for off in 0..stride {
                    for (i, slot) in line.iter_mut().enumerate() {
                        *slot = buf[base + off + i * stride];
                    }
                    fft.process(&mut line);
                    for (i, slot) in line.iter().enumerate() {
                        buf[base + off + i * stride] = *slot;
                    }
                }
            }
        }
        stride *= len;
    }
    let w = g.point_weight();
    for v in &mut buf {
        *v *= w;
    }
    GroupFunction::new(Space::Dual(Arc::new(DualGroup::of(g))), buf)
}

/// Fiber sums over `H`-cosets: `(R f)(xH) = sum_{h in H} f(x + h)`.
pub fn periodize(f: &GroupFunction, quotient: &Arc<Quotient>) -> Result<GroupFunction> {
    let g = match f.space() {
        Space::Group(g) if **g == **quotient.parent() => g,
        _ => {
            return Err(Error::Mismatch(
                "periodize needs a group function over the quotient's parent".to_string(),
            ))
        }
    };
    let mut out = vec![Complex64::new(0.0, 0.0); quotient.len()];
    // Each parent element contributes to exactly one coset; m_H has weight 1.
    for xi in 0..g.order() {
        out[quotient.coset_of_index(xi)] += f.values()[xi];
    }
    GroupFunction::new(Space::Quotient(Arc::clone(quotient)), out)
}

/// Short-time Fourier transform on `G x dual(G)`, stored row-major with the
/// dual index first.
#[derive(Debug, Clone)]
pub struct StftGrid {
    pub group: Arc<FiniteGroup>,
    pub dual: Arc<DualGroup>,
    /// `values[w * |G| + x] = V(x, w)`.
    pub values: Vec<Complex64>,
}

impl StftGrid {
    pub fn value(&self, x_index: usize, w_index: usize) -> Complex64 {
        self.values[w_index * self.group.order() + x_index]
    }

    /// `L^2` norm under the product measure `m_G x m_dual`.
    pub fn norm2(&self) -> f64 {
        let w = self.group.point_weight() * self.dual.point_weight();
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (w * s).sqrt()
    }
}

/// `V_g f(x, w) = sum_y f(y) conj(g(y - x)) conj(<y, chi_w>)`.
pub fn stft(f: &GroupFunction, window: &GroupFunction) -> Result<StftGrid> {
    let g = match (f.space(), window.space()) {
        (Space::Group(a), Space::Group(b)) if **a == **b => a,
        _ => {
            return Err(Error::Mismatch(
                "stft needs two functions on the same group".to_string(),
            ))
        }
    };
    let n = g.order();
    let dual = Arc::new(DualGroup::of(g));
    let wg = g.point_weight();
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let els: Vec<GroupElement> = g.elements().collect();
    for (wi, k) in els.iter().enumerate() {
        for (xi, x) in els.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (yi, y) in els.iter().enumerate() {
                let shifted = g.sub(y, x);
                acc += f.values()[yi]
                    * window.values()[g.index_of(&shifted)].conj()
                    * g.pair(k, y).conj();
            }
            values[wi * n + xi] = acc * wg;
        }
    }
    Ok(StftGrid {
        group: Arc::clone(g),
        dual,
        values,
    })
}
