//! Line subgroups of `Z_n x Z_n`, line-sum projections, and the directional
//! transform: project an image along a cyclic line through the origin, then
//! run the quotient-window analysis on what is left.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Context, FiniteGroup, Subgroup};
use crate::harmonic::{periodize, GroupFunction, Space};
use crate::transform::{analyze, TimeFreqFunction};

/// The plane `Z_n x Z_n`.
pub fn plane(n: u32) -> Result<Arc<FiniteGroup>> {
    if n == 0 {
        return Err(Error::InvalidFactors("plane modulus must be positive".to_string()));
    }
    FiniteGroup::counting(&[n, n])
}

/// Cyclic line through the origin with direction `d`, as a subgroup of
/// `Z_n x Z_n`.
pub fn line_subgroup(n: u32, d: (i64, i64)) -> Result<Subgroup> {
    let g = plane(n)?;
    let gen = g.element(&[d.0, d.1])?;
    if gen.is_identity() {
        return Err(Error::InvalidElement(
            "line direction must be nonzero".to_string(),
        ));
    }
    Subgroup::generate(&g, &[gen])
}

/// Full analysis context for one direction: the plane, the line subgroup,
/// its quotient and dual structure.
pub fn line_context(n: u32, d: (i64, i64)) -> Result<Arc<Context>> {
    let g = plane(n)?;
    let gen = g.element(&[d.0, d.1])?;
    if gen.is_identity() {
        return Err(Error::InvalidElement(
            "line direction must be nonzero".to_string(),
        ));
    }
    Context::from_group(&g, &[gen])
}

/// An image as a function on the plane: `rows[i][j]` sits at element `(i, j)`.
pub fn image_function(n: u32, rows: &[Vec<f64>]) -> Result<GroupFunction> {
    let g = plane(n)?;
    if rows.len() != n as usize || rows.iter().any(|r| r.len() != n as usize) {
        return Err(Error::Mismatch(format!("image must be {n} x {n}")));
    }
    let values = rows
        .iter()
        .flat_map(|r| r.iter().map(|&v| num_complex::Complex64::new(v, 0.0)))
        .collect();
    GroupFunction::new(Space::Group(g), values)
}

/// Line sums: the fiber sums of `f` over the cosets of the line in
/// direction `d`. Each output value is the sum of `f` along one line.
pub fn discrete_radon(f: &GroupFunction, d: (i64, i64)) -> Result<GroupFunction> {
    let n = plane_modulus(f)?;
    let ctx = line_context(n, d)?;
    periodize(f, ctx.quotient())
}

/// The directional transform: quotient-window analysis with the line
/// subgroup in direction `d`. The window lives on the quotient of
/// [`line_context`] for the same `(n, d)`.
pub fn directional_dstft(
    f: &GroupFunction,
    d: (i64, i64),
    window: &GroupFunction,
) -> Result<TimeFreqFunction> {
    let n = plane_modulus(f)?;
    let ctx = line_context(n, d)?;
    analyze(&ctx, f, window)
}

fn plane_modulus(f: &GroupFunction) -> Result<u32> {
    match f.space() {
        Space::Group(g) if g.factors().len() == 2 && g.factors()[0] == g.factors()[1] => {
            Ok(g.factors()[0])
        }
        _ => Err(Error::Mismatch(
            "expected an image on Z_n x Z_n".to_string(),
        )),
    }
}

/// All nonzero directions of the `n x n` plane.
pub fn all_directions(n: u32) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in 0..n as i64 {
        for b in 0..n as i64 {
            if a != 0 || b != 0 {
                out.push((a, b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::transform::reconstruct;
    use num_complex::Complex64;

    fn seeded_image(n: u32, seed: u64) -> GroupFunction {
        let mut rng = SplitMix64::new(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.next_symmetric()).collect())
            .collect();
        image_function(n, &rows).unwrap()
    }

    #[test]
    fn line_subgroup_examples() {
        let h = line_subgroup(4, (1, 0)).unwrap();
        assert_eq!(h.order(), 4);
        for e in h.elements() {
            assert_eq!(e.residues()[1], 0);
        }
        let v = line_subgroup(4, (0, 1)).unwrap();
        assert_eq!(v.order(), 4);
        let half = line_subgroup(4, (2, 0)).unwrap();
        assert_eq!(half.order(), 2);
        let got: Vec<&[u32]> = half.elements().iter().map(|e| e.residues()).collect();
        assert_eq!(got, vec![&[0u32, 0][..], &[2u32, 0][..]]);
        assert!(line_subgroup(4, (0, 0)).is_err());
    }

    #[test]
    fn line_order_matches_closure_enumeration() {
        for n in [3u32, 4, 5, 6] {
            let g = plane(n).unwrap();
            for d in all_directions(n) {
                let h = line_subgroup(n, d).unwrap();
                // independent closure oracle: walk multiples of d until the
                // identity returns
                let gen = g.element(&[d.0, d.1]).unwrap();
                let mut count = 1usize;
                let mut cur = gen.clone();
                while !cur.is_identity() {
                    cur = g.add(&cur, &gen);
                    count += 1;
                }
                assert_eq!(h.order(), count, "n = {n}, d = {d:?}");
            }
        }
    }

    #[test]
    fn radon_of_point_mass_hits_one_coset() {
        let n = 4;
        let f = GroupFunction::delta(Space::Group(plane(n).unwrap()), 0);
        let r = discrete_radon(&f, (1, 0)).unwrap();
        assert!((r.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for v in &r.values()[1..] {
            assert!(v.norm() < 1e-15);
        }
    }

    #[test]
    fn radon_of_constant_image_sums_line_length() {
        let n = 4;
        let c = 2.5;
        let rows = vec![vec![c; n as usize]; n as usize];
        let f = image_function(n, &rows).unwrap();
        let r = discrete_radon(&f, (1, 0)).unwrap();
        for v in r.values() {
            assert!((v - Complex64::new(4.0 * c, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn radon_matches_direct_line_sum_oracle() {
        let n = 4u32;
        let f = seeded_image(n, 71);
        let g = plane(n).unwrap();
        for d in [(1i64, 0i64), (0, 1), (1, 1), (2, 1), (2, 2)] {
            let ctx = line_context(n, d).unwrap();
            let r = discrete_radon(&f, d).unwrap();
            // independent double loop: sum f over each coset explicitly
            for (ci, rep) in ctx.quotient().reps().iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for h in ctx.subgroup().elements() {
                    let el = g.add(rep, h);
                    acc += f.values()[g.index_of(&el)];
                }
                assert!((r.values()[ci] - acc).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn directional_transform_of_delta_with_unit_window() {
        let n = 4u32;
        let d = (1i64, 0i64);
        let ctx = line_context(n, d).unwrap();
        let f = GroupFunction::delta(Space::Group(plane(n).unwrap()), 0);
        let g1 = GroupFunction::constant(
            Space::Quotient(Arc::clone(ctx.quotient())),
            Complex64::new(1.0, 0.0),
        );
        let coeffs = directional_dstft(&f, d, &g1).unwrap();
        // trivial character row: value 1 on every coset shift
        for z in 0..ctx.quotient().len() {
            assert!((coeffs.value(0, z) - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn directional_transform_matches_unrolled_triple_sum() {
        let n = 4u32;
        let f = seeded_image(n, 73);
        let g = plane(n).unwrap();
        for d in [(1i64, 1i64), (1, 0), (2, 1)] {
            let ctx = line_context(n, d).unwrap();
            let mut rng = SplitMix64::new(75);
            let window = GroupFunction::from_fn(
                Space::Quotient(Arc::clone(ctx.quotient())),
                |_| rng.next_unit_disc(),
            );
            let coeffs = directional_dstft(&f, d, &window).unwrap();
            // unrolled oracle: sum_x f(x) conj(w(x)) conj(g(coset(x) - z))
            let q = ctx.quotient();
            for w in 0..ctx.dual().len() {
                for z in 0..q.len() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for xi in 0..g.order() {
                        let cx = q.coset_of_index(xi);
                        acc += f.values()[xi]
                            * ctx.character(w, xi).conj()
                            * window.values()[q.coset_sub(cx, z)].conj();
                    }
                    assert!((coeffs.value(w, z) - acc).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn image_reconstructs_from_directional_coefficients() {
        let n = 4u32;
        let d = (1i64, 1i64);
        let ctx = line_context(n, d).unwrap();
        let f = seeded_image(n, 77);
        let mut rng = SplitMix64::new(79);
        let window = GroupFunction::from_fn(Space::Quotient(Arc::clone(ctx.quotient())), |_| {
            rng.next_unit_disc()
        });
        let back = reconstruct(&ctx, &f, &window, &window).unwrap();
        assert!(f.rel_distance(&back) < 1e-10);
    }

    #[test]
    fn image_shape_is_validated() {
        assert!(image_function(4, &vec![vec![0.0; 4]; 3]).is_err());
        assert!(image_function(4, &vec![vec![0.0; 3]; 4]).is_err());
    }

    #[test]
    fn analysis_identities_hold_on_small_planes() {
        // odd-modulus planes exercise non-dyadic quotients
        for (n, d) in [(3u32, (1i64, 2i64)), (5, (2, 1)), (5, (1, 0))] {
            let ctx = line_context(n, d).unwrap();
            let f = seeded_image(n, 81 + n as u64);
            let mut rng = SplitMix64::new(83);
            let g1 = GroupFunction::from_fn(
                Space::Quotient(Arc::clone(ctx.quotient())),
                |_| rng.next_unit_disc(),
            );
            let g2 = GroupFunction::from_fn(
                Space::Quotient(Arc::clone(ctx.quotient())),
                |_| rng.next_unit_disc(),
            );
            let coeffs = crate::transform::analyze(&ctx, &f, &g1).unwrap();
            let lhs = coeffs.norm(2.0);
            let rhs = g1.norm(2.0) * f.norm(2.0);
            assert!((lhs - rhs).abs() <= 1e-10 * rhs, "n = {n}, d = {d:?}");
            if g2.inner(&g1).unwrap().norm() > 1e-3 {
                let back = reconstruct(&ctx, &f, &g1, &g2).unwrap();
                assert!(f.rel_distance(&back) < 1e-10);
            }
        }
    }
}
