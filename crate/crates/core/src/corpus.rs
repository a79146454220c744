//! Seeded input presets shared by the randomized suites, the CLI, and the
//! acceptance tests. Every draw comes from [`crate::rng::SplitMix64`], so a
//! (seed, label) pair pins the corpus byte for byte.

use std::sync::Arc;

use num_complex::Complex64;

use crate::group::Context;
use crate::harmonic::{GroupFunction, Space};
use crate::rng::SplitMix64;
use crate::transform::TimeFreqFunction;

/// Input shapes available to the suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Point mass at the identity.
    Delta,
    /// Constant one.
    Constant,
    /// Indicator of a seeded random subset containing the identity.
    Indicator,
    /// Independent draws from the closed complex unit disc.
    Random,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Delta,
        Preset::Constant,
        Preset::Indicator,
        Preset::Random,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Delta => "delta",
            Preset::Constant => "constant",
            Preset::Indicator => "indicator",
            Preset::Random => "random",
        }
    }

    pub fn parse(name: &str) -> Option<Preset> {
        match name {
            "delta" => Some(Preset::Delta),
            "constant" => Some(Preset::Constant),
            "indicator" => Some(Preset::Indicator),
            "random" | "seeded-random-complex" => Some(Preset::Random),
            _ => None,
        }
    }
}

fn fill(len: usize, preset: Preset, rng: &mut SplitMix64) -> Vec<Complex64> {
    match preset {
        Preset::Delta => {
            let mut v = vec![Complex64::new(0.0, 0.0); len];
            v[0] = Complex64::new(1.0, 0.0);
            v
        }
        Preset::Constant => vec![Complex64::new(1.0, 0.0); len],
        Preset::Indicator => {
            // always contains the identity so the draw is usable as a region
            (0..len)
                .map(|i| {
                    let inside = i == 0 || rng.next_f64() < 0.5;
                    Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
                })
                .collect()
        }
        Preset::Random => (0..len).map(|_| rng.next_unit_disc()).collect(),
    }
}

/// Function on the context group.
pub fn group_function(ctx: &Context, preset: Preset, rng: &mut SplitMix64) -> GroupFunction {
    let space = Space::Group(Arc::clone(ctx.group()));
    let values = fill(space.len(), preset, rng);
    GroupFunction::new(space, values).expect("sized to the space")
}

/// Window on the context quotient.
pub fn quotient_function(ctx: &Context, preset: Preset, rng: &mut SplitMix64) -> GroupFunction {
    let space = Space::Quotient(Arc::clone(ctx.quotient()));
    let values = fill(space.len(), preset, rng);
    GroupFunction::new(space, values).expect("sized to the space")
}

/// Symbol on the coefficient grid.
pub fn grid_function(ctx: &Context, preset: Preset, rng: &mut SplitMix64) -> TimeFreqFunction {
    let values = fill(ctx.grid_len(), preset, rng);
    let q = ctx.quotient().len();
    TimeFreqFunction::from_fn(ctx, |w, z| values[w * q + z])
}

/// Nonzero random function (re-drawn until the 2-norm clears a floor), for
/// places that need invertible windows.
pub fn nonzero_quotient_function(ctx: &Context, rng: &mut SplitMix64) -> GroupFunction {
    loop {
        let f = quotient_function(ctx, Preset::Random, rng);
        if f.norm(2.0) > 1e-3 {
            return f;
        }
    }
}

/// Random subset of `0..len` containing index 0, usable as a localization
/// region.
pub fn random_region(len: usize, rng: &mut SplitMix64) -> Vec<usize> {
    let mut out = vec![0usize];
    for i in 1..len {
        if rng.next_f64() < 0.5 {
            out.push(i);
        }
    }
    out
}

/// The default corpus of `(factors, subgroup generators)` pairs: mixed
/// cyclic and product groups, subgroups proper, trivial and full.
pub fn default_group_specs() -> Vec<(Vec<u32>, Vec<Vec<i64>>)> {
    vec![
        (vec![4], vec![vec![2]]),
        (vec![6], vec![vec![3]]),
        (vec![8], vec![vec![4]]),
        (vec![2, 4], vec![vec![1, 2]]),
        (vec![3, 3], vec![vec![1, 1]]),
        (vec![12], vec![vec![4]]),
    ]
}

/// Contexts for [`default_group_specs`].
pub fn default_contexts() -> Vec<Arc<Context>> {
    default_group_specs()
        .iter()
        .map(|(factors, gens)| Context::new(factors, gens).expect("default specs are valid"))
        .collect()
}
