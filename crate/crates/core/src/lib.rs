//! Windowed Fourier analysis on finite abelian groups.
//!
//! The central object is an analysis transform that pairs a function on a
//! group `G` against windows living on a quotient `G/H`, producing
//! coefficients on the grid `dual(G) x G/H`. Around it the crate provides:
//!
//! * [`group`]: groups, subgroups, quotients, duals, annihilators, Haar
//!   weights;
//! * [`harmonic`]: measured function spaces, Fourier transforms,
//!   periodization, and the plain short-time Fourier transform;
//! * [`transform`]: the quotient-window analysis/synthesis pair, its
//!   equivalent forms, and inversion;
//! * [`operators`]: the generalized multiplier and the two-wavelet
//!   multiplier in grid, matrix, and integral-kernel form;
//! * [`spectral`]: Schatten and `L^p -> L^p` norms, traces, and the
//!   norm-bound report suite;
//! * [`lps`]: grid/time localization projections and the concentration
//!   (Landau–Pollak–Slepian type) operator with its multiplier equivalence;
//! * [`radon`]: line subgroups of `Z_n x Z_n`, line-sum projections, and
//!   the directional transform;
//! * [`rng`], [`corpus`]: the portable seeded generator and input presets
//!   used by every randomized suite.

pub mod corpus;
pub mod error;
pub mod group;
pub mod harmonic;
pub mod lps;
pub mod operators;
pub mod radon;
pub mod rng;
pub mod spectral;
pub mod transform;

pub use error::{Error, Result};
pub use group::{Context, DualGroup, FiniteGroup, GroupElement, Quotient, Subgroup, Weight};
pub use harmonic::{GroupFunction, Space};
pub use transform::TimeFreqFunction;
