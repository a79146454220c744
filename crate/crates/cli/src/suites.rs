//! Suite execution: each suite walks the configured groups, draws seeded
//! inputs from the presets, runs its checks, and emits one record per
//! check. Records are keyed by (suite, group, check) so report output is
//! independent of execution order.

use std::sync::Arc;

use num_complex::Complex64;

use qstft_core::corpus::{self, Preset};
use qstft_core::group::Context;
use qstft_core::harmonic::{
    self, fourier, fourier_fft, inverse_fourier, modulate, periodize, rel_scalar, stft, translate,
    GroupFunction, Space,
};
use qstft_core::lps::{
    equivalence_check, lps_operator, p_project_matrix, q_project_matrix, LocalizationRegions,
};
use qstft_core::operators::{
    apply_generalized_multiplier, apply_two_wavelet, kernel_matrix, kernel_schur_sums,
    two_wavelet_matrix, weak_form, MultiplierSpec,
};
use qstft_core::radon;
use qstft_core::rng::{fnv1a64, SplitMix64};
use qstft_core::spectral::{
    bound_report, schatten_norm, trace, two_wavelet_trace_formula, TheoremId,
};
use qstft_core::transform::{
    analyze, analyze_fourier_form, analyze_quotient_form, reconstruct, synthesize,
    AtomFamily, TimeFreqFunction,
};
use qstft_core::Error;

use crate::config::{RegionEntry, Suite, SuiteConfig};
use crate::report::{CheckRecord, Report};

/// Run every configured suite and assemble the report.
pub fn run_suite(config: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    let contexts: Vec<Arc<Context>> = config
        .groups
        .iter()
        .map(|g| g.build().expect("validated at parse time"))
        .collect();
    for suite in &config.suites {
        match suite {
            Suite::Weil => weil_suite(config, &contexts, &mut checks),
            Suite::Slice => slice_suite(config, &contexts, &mut checks),
            Suite::Stft => stft_suite(config, &contexts, &mut checks),
            Suite::DstftOrtho => dstft_ortho_suite(config, &contexts, &mut checks),
            Suite::Inversion => inversion_suite(config, &contexts, &mut checks),
            Suite::Multiplier => multiplier_suite(config, &contexts, &mut checks),
            Suite::Schatten => schatten_suite(config, &contexts, &mut checks),
            Suite::LpBounds => lp_bounds_suite(config, &contexts, &mut checks),
            Suite::Schur => schur_suite(config, &contexts, &mut checks),
            Suite::Trace => trace_suite(config, &contexts, &mut checks),
            Suite::Lps => lps_suite(config, &contexts, &mut checks),
            Suite::Radon => radon_suite(config, &mut checks),
        }
    }
    Report::assemble(config.echo.clone(), checks)
}

// ---------------------------------------------------------------------------
// helpers

fn case_rng(config: &SuiteConfig, suite: Suite, label: &str, case: usize) -> SplitMix64 {
    SplitMix64::derive(
        config.seed,
        &format!("{}/{}/case{}", suite.name(), label, case),
    )
}

struct Digest(u64);

impl Digest {
    fn new(label: &str) -> Digest {
        Digest(fnv1a64(label.as_bytes()))
    }

    fn mix(&mut self, bytes: &[u8]) {
        let mut h = self.0;
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        self.0 = h;
    }

    fn add_values(&mut self, values: &[Complex64]) -> &mut Self {
        for v in values {
            self.mix(&v.re.to_le_bytes());
            self.mix(&v.im.to_le_bytes());
        }
        self
    }

    fn add_fn(&mut self, f: &GroupFunction) -> &mut Self {
        self.add_values(f.values())
    }

    fn add_grid(&mut self, f: &TimeFreqFunction) -> &mut Self {
        self.add_values(f.values())
    }

    fn add_indices(&mut self, idx: &[usize]) -> &mut Self {
        for &i in idx {
            self.mix(&(i as u64).to_le_bytes());
        }
        self
    }

    fn hex(&self) -> String {
        format!("{:016x}", self.0)
    }
}

/// Identity check: `residual` (already relative) against a tolerance.
#[allow(clippy::too_many_arguments)]
fn identity_check(
    suite: Suite,
    group: &str,
    check: String,
    anchor: &str,
    digest: &Digest,
    lhs: f64,
    rhs: f64,
    residual: f64,
    tolerance: f64,
) -> CheckRecord {
    CheckRecord {
        suite: suite.name().to_string(),
        group: group.to_string(),
        check,
        anchor: anchor.to_string(),
        inputs_digest: digest.hex(),
        lhs,
        rhs,
        residual,
        tolerance,
        pass: residual <= tolerance,
    }
}

/// Bound check: pass iff `lhs <= rhs (1 + 1e-9) + 1e-12`.
fn bound_check(
    suite: Suite,
    group: &str,
    check: String,
    anchor: &str,
    digest: &Digest,
    lhs: f64,
    rhs: f64,
) -> CheckRecord {
    let pass = qstft_core::spectral::bound_passes(lhs, rhs);
    CheckRecord {
        suite: suite.name().to_string(),
        group: group.to_string(),
        check,
        anchor: anchor.to_string(),
        inputs_digest: digest.hex(),
        lhs,
        rhs,
        residual: ((lhs - rhs) / rhs.abs().max(1e-14)).max(0.0),
        tolerance: 1e-9,
        pass,
    }
}

fn random_signal(ctx: &Arc<Context>, rng: &mut SplitMix64) -> GroupFunction {
    corpus::group_function(ctx, Preset::Random, rng)
}

fn window_from(
    ctx: &Arc<Context>,
    presets: &[Preset],
    case: usize,
    rng: &mut SplitMix64,
) -> GroupFunction {
    let preset = presets[case % presets.len()];
    if preset == Preset::Random {
        corpus::nonzero_quotient_function(ctx, rng)
    } else {
        corpus::quotient_function(ctx, preset, rng)
    }
}

fn spec_from_presets(
    ctx: &Arc<Context>,
    config: &SuiteConfig,
    case: usize,
    rng: &mut SplitMix64,
) -> MultiplierSpec {
    let sigma = corpus::grid_function(ctx, config.symbols[case % config.symbols.len()], rng);
    let wavelet_preset = config.wavelets[case % config.wavelets.len()];
    let u = corpus::group_function(ctx, wavelet_preset, rng);
    let v = corpus::group_function(ctx, wavelet_preset, rng);
    let g = window_from(ctx, &config.windows, case, rng);
    MultiplierSpec::new(ctx, sigma, u, v, g).expect("presets share the context")
}

// ---------------------------------------------------------------------------
// suites

fn weil_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol = config.tolerance("weil", 1e-12);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Weil, &label, case);
            let f = random_signal(ctx, &mut rng);
            let fibers = periodize(&f, ctx.quotient()).expect("same context");
            let lhs: Complex64 = fibers.values().iter().sum();
            let rhs: Complex64 = f.values().iter().sum();
            let mut digest = Digest::new(&label);
            digest.add_fn(&f);
            out.push(identity_check(
                Suite::Weil,
                &label,
                format!("total_mass[case={case}]"),
                "fiber sums over cosets preserve total mass",
                &digest,
                lhs.norm(),
                rhs.norm(),
                rel_scalar(lhs, rhs),
                tol,
            ));
        }
        // point-mass edge case
        let delta = GroupFunction::delta(Space::Group(Arc::clone(ctx.group())), 0);
        let fibers = periodize(&delta, ctx.quotient()).expect("same context");
        let expect = GroupFunction::delta(Space::Quotient(Arc::clone(ctx.quotient())), 0);
        let mut digest = Digest::new(&label);
        digest.add_fn(&delta);
        out.push(identity_check(
            Suite::Weil,
            &label,
            "point_mass".to_string(),
            "fiber sums send a point mass to its coset's point mass",
            &digest,
            1.0,
            1.0,
            fibers.rel_distance(&expect),
            tol,
        ));
    }
}

fn slice_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol = config.tolerance("slice", 1e-12);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Slice, &label, case);
            let f = random_signal(ctx, &mut rng);
            let fhat = fourier(&f).expect("group function");
            let rhat =
                fourier(&periodize(&f, ctx.quotient()).expect("same context")).expect("quotient");
            let base = ctx.dual().base();
            let mut worst = 0.0f64;
            for (i, eta) in ctx.annihilator().elements().iter().enumerate() {
                let full = fhat.values()[base.index_of(eta)];
                worst = worst.max(rel_scalar(full, rhat.values()[i]));
            }
            let mut digest = Digest::new(&label);
            digest.add_fn(&f);
            out.push(identity_check(
                Suite::Slice,
                &label,
                format!("restriction[case={case}]"),
                "transform of fiber sums equals the transform on the annihilator",
                &digest,
                rhat.norm(2.0),
                rhat.norm(2.0),
                worst,
                tol,
            ));
        }
    }
}

fn stft_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol_norm = config.tolerance("stft", 1e-10);
    let tol_exact = config.tolerance("plancherel", 1e-12);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Stft, &label, case);
            let f = random_signal(ctx, &mut rng);
            let g = random_signal(ctx, &mut rng);
            let mut digest = Digest::new(&label);
            digest.add_fn(&f).add_fn(&g);

            let grid = stft(&f, &g).expect("same group");
            let lhs = grid.norm2();
            let rhs = f.norm(2.0) * g.norm(2.0);
            out.push(identity_check(
                Suite::Stft,
                &label,
                format!("energy_identity[case={case}]"),
                "windowed transform preserves energy up to the window norm",
                &digest,
                lhs,
                rhs,
                (lhs - rhs).abs() / rhs.max(1e-14),
                tol_norm,
            ));

            let fhat = fourier(&f).expect("group function");
            out.push(identity_check(
                Suite::Stft,
                &label,
                format!("plancherel[case={case}]"),
                "transform preserves the 2-norm under the dual weight",
                &digest,
                fhat.norm(2.0),
                f.norm(2.0),
                (fhat.norm(2.0) - f.norm(2.0)).abs() / f.norm(2.0).max(1e-14),
                tol_exact,
            ));

            let fast = fourier_fft(&f).expect("group function");
            out.push(identity_check(
                Suite::Stft,
                &label,
                format!("fft_agreement[case={case}]"),
                "per-factor fast path agrees with the direct sum",
                &digest,
                fast.norm(2.0),
                fhat.norm(2.0),
                fast.rel_distance(&fhat),
                tol_exact,
            ));

            let back = inverse_fourier(&fhat).expect("dual function");
            out.push(identity_check(
                Suite::Stft,
                &label,
                format!("roundtrip[case={case}]"),
                "inverse transform undoes the transform",
                &digest,
                back.norm(2.0),
                f.norm(2.0),
                back.rel_distance(&f),
                tol_exact,
            ));

            let n = ctx.group().order();
            let m_el = ctx.group().element_at(rng.next_index(n));
            let t_el = ctx.group().element_at(rng.next_index(n));
            let shifted = translate(&modulate(&f, &m_el).expect("el"), &t_el).expect("el");
            out.push(identity_check(
                Suite::Stft,
                &label,
                format!("isometry[case={case}]"),
                "modulation and translation preserve the 2-norm",
                &digest,
                shifted.norm(2.0),
                f.norm(2.0),
                (shifted.norm(2.0) - f.norm(2.0)).abs() / f.norm(2.0).max(1e-14),
                tol_exact,
            ));

            let lhs_fn = fourier(&modulate(&f, &m_el).expect("el")).expect("group");
            let rhs_fn = translate(&fhat, &m_el).expect("el");
            out.push(identity_check(
                Suite::Stft,
                &label,
                format!("exchange[case={case}]"),
                "transform swaps modulation with translation",
                &digest,
                lhs_fn.norm(2.0),
                rhs_fn.norm(2.0),
                lhs_fn.rel_distance(&rhs_fn),
                tol_exact,
            ));
        }
    }
}

fn dstft_ortho_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol_quot = config.tolerance("three_form_quotient", 1e-12);
    let tol_four = config.tolerance("three_form_fourier", 1e-10);
    let tol_ortho = config.tolerance("orthogonality", 1e-10);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::DstftOrtho, &label, case);
            let f = random_signal(ctx, &mut rng);
            let g = window_from(ctx, &config.windows, case, &mut rng);
            let mut digest = Digest::new(&label);
            digest.add_fn(&f).add_fn(&g);

            let direct = analyze(ctx, &f, &g).expect("same context");
            let via_quot = analyze_quotient_form(ctx, &f, &g).expect("same context");
            let via_four = analyze_fourier_form(ctx, &f, &g).expect("same context");
            out.push(identity_check(
                Suite::DstftOrtho,
                &label,
                format!("route_quotient[case={case}]"),
                "direct sum equals the demodulate-project-convolve route",
                &digest,
                direct.norm(2.0),
                via_quot.norm(2.0),
                direct.rel_distance(&via_quot),
                tol_quot,
            ));
            out.push(identity_check(
                Suite::DstftOrtho,
                &label,
                format!("route_fourier[case={case}]"),
                "direct sum equals the annihilator-side pairing",
                &digest,
                direct.norm(2.0),
                via_four.norm(2.0),
                direct.rel_distance(&via_four),
                tol_four,
            ));

            let f2 = random_signal(ctx, &mut rng);
            let g2 = window_from(ctx, &config.windows, case + 1, &mut rng);
            let d2 = analyze(ctx, &f2, &g2).expect("same context");
            let lhs = direct.inner(&d2).expect("same grid");
            let rhs = f.inner(&f2).expect("space") * g2.inner(&g).expect("space");
            let mut digest2 = Digest::new(&label);
            digest2.add_fn(&f).add_fn(&f2).add_fn(&g).add_fn(&g2);
            out.push(identity_check(
                Suite::DstftOrtho,
                &label,
                format!("orthogonality[case={case}]"),
                "two-window coefficient pairing factorizes",
                &digest2,
                lhs.norm(),
                rhs.norm(),
                rel_scalar(lhs, rhs),
                tol_ortho,
            ));

            let norm_lhs = direct.norm(2.0);
            let norm_rhs = g.norm(2.0) * f.norm(2.0);
            out.push(identity_check(
                Suite::DstftOrtho,
                &label,
                format!("energy_identity[case={case}]"),
                "coefficient energy equals window energy times signal energy",
                &digest,
                norm_lhs,
                norm_rhs,
                (norm_lhs - norm_rhs).abs() / norm_rhs.max(1e-14),
                tol_ortho,
            ));

            let sup_lhs = direct.norm(f64::INFINITY);
            let sup_rhs = g.norm(f64::INFINITY) * f.norm(1.0);
            out.push(CheckRecord {
                suite: Suite::DstftOrtho.name().to_string(),
                group: label.clone(),
                check: format!("sup_bound[case={case}]"),
                anchor: "coefficient sup bounded by window sup times signal l1".to_string(),
                inputs_digest: digest.hex(),
                lhs: sup_lhs,
                rhs: sup_rhs,
                residual: (sup_lhs - sup_rhs).max(0.0),
                tolerance: 1e-12,
                pass: sup_lhs <= sup_rhs + 1e-12,
            });

            for p in [2.0, 3.0, 4.0, f64::INFINITY] {
                let pc = qstft_core::spectral::conjugate_exponent(p);
                let lhs_p = direct.norm(p);
                let rhs_p = g.norm(p) * f.norm(pc);
                let tag = if p.is_infinite() { "inf".to_string() } else { format!("{p}") };
                out.push(bound_check(
                    Suite::DstftOrtho,
                    &label,
                    format!("lp_bound[p={tag}][case={case}]"),
                    "coefficient p-norm bounded by window p-norm times conjugate signal norm",
                    &digest,
                    lhs_p,
                    rhs_p,
                ));
            }

            let atoms = AtomFamily::new(ctx, &g).expect("window on quotient");
            let w_idx = rng.next_index(ctx.dual().len());
            let z_idx = rng.next_index(ctx.quotient().len());
            let atom = atoms.atom(w_idx, z_idx);
            let expect = (ctx.subgroup().order() as f64).sqrt() * g.norm(2.0);
            out.push(identity_check(
                Suite::DstftOrtho,
                &label,
                format!("atom_norm[case={case}]"),
                "atoms carry the window norm scaled by the fiber size",
                &digest,
                atom.norm(2.0),
                expect,
                (atom.norm(2.0) - expect).abs() / expect.max(1e-14),
                tol_quot,
            ));
        }
    }
}

fn inversion_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol = config.tolerance("inversion", 1e-10);
    let tol_adj = config.tolerance("adjoint_pairing", 1e-12);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Inversion, &label, case);
            let f = random_signal(ctx, &mut rng);
            let g = window_from(ctx, &config.windows, case, &mut rng);
            let mut digest = Digest::new(&label);
            digest.add_fn(&f).add_fn(&g);

            let back = reconstruct(ctx, &f, &g, &g).expect("nonzero window");
            out.push(identity_check(
                Suite::Inversion,
                &label,
                format!("round_trip[case={case}]"),
                "analysis followed by windowed synthesis recovers the signal",
                &digest,
                back.norm(2.0),
                f.norm(2.0),
                back.rel_distance(&f),
                tol,
            ));

            let mut g2 = corpus::nonzero_quotient_function(ctx, &mut rng);
            while g2.inner(&g).expect("space").norm() <= 1e-3 {
                g2 = corpus::nonzero_quotient_function(ctx, &mut rng);
            }
            let back2 = reconstruct(ctx, &f, &g, &g2).expect("pair is usable");
            let mut digest2 = Digest::new(&label);
            digest2.add_fn(&f).add_fn(&g).add_fn(&g2);
            out.push(identity_check(
                Suite::Inversion,
                &label,
                format!("round_trip_pair[case={case}]"),
                "two distinct non-orthogonal windows still invert",
                &digest2,
                back2.norm(2.0),
                f.norm(2.0),
                back2.rel_distance(&f),
                tol,
            ));

            let ones = TimeFreqFunction::constant(ctx, Complex64::new(1.0, 0.0));
            let mf = apply_generalized_multiplier(ctx, &ones, &g, &f).expect("nonzero window");
            out.push(identity_check(
                Suite::Inversion,
                &label,
                format!("unit_symbol_identity[case={case}]"),
                "the unit-symbol multiplier is the identity",
                &digest,
                mf.norm(2.0),
                f.norm(2.0),
                mf.rel_distance(&f),
                tol,
            ));

            let mut grng = rng;
            let grid = TimeFreqFunction::from_fn(ctx, |_, _| grng.next_unit_disc());
            let lhs = analyze(ctx, &f, &g)
                .expect("context")
                .inner(&grid)
                .expect("grid");
            let rhs = f
                .inner(&synthesize(ctx, &grid, &g).expect("context"))
                .expect("space");
            let mut digest3 = Digest::new(&label);
            digest3.add_fn(&f).add_fn(&g).add_grid(&grid);
            out.push(identity_check(
                Suite::Inversion,
                &label,
                format!("adjoint_pairing[case={case}]"),
                "synthesis is the measure-correct adjoint of analysis",
                &digest3,
                lhs.norm(),
                rhs.norm(),
                rel_scalar(lhs, rhs),
                tol_adj,
            ));
        }

        // orthogonal windows must be rejected (needs at least two cosets)
        if ctx.quotient().len() >= 2 {
            let g1 = GroupFunction::delta(Space::Quotient(Arc::clone(ctx.quotient())), 0);
            let g2 = GroupFunction::delta(Space::Quotient(Arc::clone(ctx.quotient())), 1);
            let f = GroupFunction::delta(Space::Group(Arc::clone(ctx.group())), 0);
            let rejected = matches!(
                reconstruct(ctx, &f, &g1, &g2),
                Err(Error::NonInvertibleWindowPair(_))
            );
            let mut digest = Digest::new(&label);
            digest.add_fn(&g1).add_fn(&g2);
            out.push(CheckRecord {
                suite: Suite::Inversion.name().to_string(),
                group: label.clone(),
                check: "orthogonal_pair_rejected".to_string(),
                anchor: "orthogonal window pairs cannot invert".to_string(),
                inputs_digest: digest.hex(),
                lhs: if rejected { 1.0 } else { 0.0 },
                rhs: 1.0,
                residual: if rejected { 0.0 } else { 1.0 },
                tolerance: 0.5,
                pass: rejected,
            });
        }
    }
}

fn multiplier_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol = config.tolerance("multiplier", 1e-10);
    let tol_exact = config.tolerance("multiplier_exact", 1e-12);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Multiplier, &label, case);
            let spec = spec_from_presets(ctx, config, case, &mut rng);
            let f = random_signal(ctx, &mut rng);
            let h = random_signal(ctx, &mut rng);
            let mut digest = Digest::new(&label);
            digest
                .add_grid(spec.sigma())
                .add_fn(spec.u())
                .add_fn(spec.v())
                .add_fn(spec.window())
                .add_fn(&f)
                .add_fn(&h);

            let pf = apply_two_wavelet(&spec, &f).expect("context");
            let weak = weak_form(&spec, &f, &h).expect("context");
            let paired = pf.inner(&h).expect("space");
            out.push(identity_check(
                Suite::Multiplier,
                &label,
                format!("weak_form[case={case}]"),
                "grid path agrees with the weak-form pairing",
                &digest,
                weak.norm(),
                paired.norm(),
                rel_scalar(weak, paired),
                tol,
            ));

            let m = two_wavelet_matrix(&spec).expect("context");
            let via_matrix = m.apply(f.values());
            out.push(identity_check(
                Suite::Multiplier,
                &label,
                format!("matrix_apply[case={case}]"),
                "matrix assembled from basis vectors reproduces the apply path",
                &digest,
                harmonic::lp_norm(&via_matrix, 1.0, 2.0),
                pf.norm(2.0),
                harmonic::rel_distance(&via_matrix, pf.values()),
                tol_exact,
            ));

            let k = kernel_matrix(&spec).expect("context");
            out.push(identity_check(
                Suite::Multiplier,
                &label,
                format!("kernel_agreement[case={case}]"),
                "integral kernel agrees with the assembled matrix",
                &digest,
                1.0,
                1.0,
                m.rel_distance(&k),
                tol,
            ));

            let adj_lhs = m.adjoint();
            let adj_rhs = two_wavelet_matrix(&spec.adjoint_spec()).expect("context");
            out.push(identity_check(
                Suite::Multiplier,
                &label,
                format!("adjoint_identity[case={case}]"),
                "adjoint swaps the windows and conjugates the symbol",
                &digest,
                1.0,
                1.0,
                adj_lhs.rel_distance(&adj_rhs),
                tol_exact,
            ));

            // linearity in the symbol
            let mut rng2 = rng;
            let sigma2 = TimeFreqFunction::from_fn(ctx, |_, _| rng2.next_unit_disc());
            let a = Complex64::new(0.6, -0.3);
            let b = Complex64::new(-0.8, 0.25);
            let combined = MultiplierSpec::new(
                ctx,
                spec.sigma().scale(a).add(&sigma2.scale(b)).expect("grid"),
                spec.u().clone(),
                spec.v().clone(),
                spec.window().clone(),
            )
            .expect("context");
            let spec2 = MultiplierSpec::new(
                ctx,
                sigma2,
                spec.u().clone(),
                spec.v().clone(),
                spec.window().clone(),
            )
            .expect("context");
            let lhs_lin = apply_two_wavelet(&combined, &f).expect("context");
            let rhs_lin = apply_two_wavelet(&spec, &f)
                .expect("context")
                .scale(a)
                .add(&apply_two_wavelet(&spec2, &f).expect("context").scale(b))
                .expect("space");
            out.push(identity_check(
                Suite::Multiplier,
                &label,
                format!("symbol_linearity[case={case}]"),
                "operator is linear in the symbol",
                &digest,
                lhs_lin.norm(2.0),
                rhs_lin.norm(2.0),
                lhs_lin.rel_distance(&rhs_lin),
                tol_exact,
            ));

            // relation to the conjugated generalized multiplier
            let uf = spec.u().mul_pointwise(&f).expect("space");
            let mult =
                apply_generalized_multiplier(ctx, spec.sigma(), spec.window(), &uf)
                    .expect("window nonzero");
            let energy = Complex64::new(spec.window().norm(2.0).powi(2), 0.0);
            let relation_rhs = spec
                .v()
                .conj()
                .mul_pointwise(&mult)
                .expect("space")
                .scale(energy)
                .inner(&h)
                .expect("space");
            out.push(identity_check(
                Suite::Multiplier,
                &label,
                format!("multiplier_relation[case={case}]"),
                "two-wavelet operator factors through the generalized multiplier",
                &digest,
                paired.norm(),
                relation_rhs.norm(),
                rel_scalar(paired, relation_rhs),
                tol,
            ));

            // unit symbol collapse
            let ones = MultiplierSpec::new(
                ctx,
                TimeFreqFunction::constant(ctx, Complex64::new(1.0, 0.0)),
                spec.u().clone(),
                spec.v().clone(),
                spec.window().clone(),
            )
            .expect("context");
            let collapsed = apply_two_wavelet(&ones, &f).expect("context");
            let expect = spec
                .v()
                .conj()
                .mul_pointwise(spec.u())
                .expect("space")
                .mul_pointwise(&f)
                .expect("space")
                .scale(energy);
            out.push(identity_check(
                Suite::Multiplier,
                &label,
                format!("unit_symbol_collapse[case={case}]"),
                "unit symbol collapses to a windowed pointwise product",
                &digest,
                collapsed.norm(2.0),
                expect.norm(2.0),
                collapsed.rel_distance(&expect),
                tol,
            ));
        }
    }
}

fn schatten_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let theorems: Vec<TheoremId> = vec![
        TheoremId::OpNormSymbolL1,
        TheoremId::OpNormSymbolLinf,
        TheoremId::OpNormSymbolLp { p: 1.0 },
        TheoremId::OpNormSymbolLp { p: 1.5 },
        TheoremId::OpNormSymbolLp { p: 2.0 },
        TheoremId::OpNormSymbolLp { p: 3.0 },
        TheoremId::OpNormSymbolLp { p: f64::INFINITY },
        TheoremId::HilbertSchmidtSymbolL1,
        TheoremId::TraceClassSymbolL1,
        TheoremId::SchattenSymbolLp { p: 1.0 },
        TheoremId::SchattenSymbolLp { p: 1.5 },
        TheoremId::SchattenSymbolLp { p: 2.0 },
        TheoremId::SchattenSymbolLp { p: 3.0 },
        TheoremId::SchattenSymbolLp { p: f64::INFINITY },
    ];
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Schatten, &label, case);
            let spec = spec_from_presets(ctx, config, case, &mut rng);
            let normalized = match spec.normalized_windows() {
                Ok(s) => s,
                Err(_) => continue, // degenerate preset draw; skip the case
            };
            let mut digest = Digest::new(&label);
            digest
                .add_grid(normalized.sigma())
                .add_fn(normalized.u())
                .add_fn(normalized.v())
                .add_fn(normalized.window());
            for th in &theorems {
                let report =
                    bound_report(&normalized, *th, config.trials, config.seed).expect("in range");
                out.push(bound_check(
                    Suite::Schatten,
                    &label,
                    format!("{}[case={case}]", report.theorem.tag()),
                    "singular-value class bound from the stated symbol class",
                    &digest,
                    report.computed_lhs,
                    report.stated_rhs,
                ));
            }
            // ordering of the Schatten scale
            let m = two_wavelet_matrix(&normalized).expect("context");
            let s_inf = schatten_norm(&m, f64::INFINITY).expect("p >= 1");
            let s_2 = schatten_norm(&m, 2.0).expect("p >= 1");
            let s_1 = schatten_norm(&m, 1.0).expect("p >= 1");
            out.push(CheckRecord {
                suite: Suite::Schatten.name().to_string(),
                group: label.clone(),
                check: format!("schatten_monotonicity[case={case}]"),
                anchor: "schatten norms decrease as the exponent grows".to_string(),
                inputs_digest: digest.hex(),
                lhs: s_inf,
                rhs: s_1,
                residual: ((s_inf - s_2).max(s_2 - s_1) / s_1.max(1e-14)).max(0.0),
                tolerance: 1e-12,
                pass: s_inf <= s_2 * (1.0 + 1e-12) && s_2 <= s_1 * (1.0 + 1e-12),
            });
        }
    }
}

fn lp_bounds_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let theorems: Vec<TheoremId> = vec![
        TheoremId::BoundedOnL1,
        TheoremId::BoundedOnLinf,
        TheoremId::InterpolatedOnLp { p: 1.0 },
        TheoremId::InterpolatedOnLp { p: 2.0 },
        TheoremId::InterpolatedOnLp { p: 3.0 },
        TheoremId::InterpolatedOnLp { p: f64::INFINITY },
        TheoremId::DualPairOnLp { p: 1.0 },
        TheoremId::DualPairOnLp { p: 2.0 },
        TheoremId::DualPairOnLp { p: 4.0 },
        TheoremId::WindowLrOnLp { r: 1.0, p: 2.0 },
        TheoremId::WindowLrOnLp { r: 4.0 / 3.0, p: 2.0 },
        TheoremId::WindowLrOnLp { r: 4.0 / 3.0, p: 4.0 },
        TheoremId::WindowLrOnLp { r: 1.5, p: 3.0 },
    ];
    // The bilinear-interpolation statement inherits the unit-energy
    // hypothesis on u, v from the endpoint it interpolates.
    let normalized_theorems: Vec<TheoremId> = vec![
        TheoremId::SymbolLrOnLp { r: 1.0, p: 2.0 },
        TheoremId::SymbolLrOnLp { r: 4.0 / 3.0, p: 2.0 },
        TheoremId::SymbolLrOnLp { r: 4.0 / 3.0, p: 4.0 },
        TheoremId::SymbolLrOnLp { r: 1.5, p: 1.5 },
        TheoremId::SymbolLrOnLp { r: 2.0, p: 2.0 },
    ];
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::LpBounds, &label, case);
            let spec = spec_from_presets(ctx, config, case, &mut rng);
            let mut digest = Digest::new(&label);
            digest
                .add_grid(spec.sigma())
                .add_fn(spec.u())
                .add_fn(spec.v())
                .add_fn(spec.window());
            for th in &theorems {
                let report =
                    bound_report(&spec, *th, config.trials, config.seed).expect("in range");
                out.push(bound_check(
                    Suite::LpBounds,
                    &label,
                    format!("{}[case={case}]", report.theorem.tag()),
                    "operator norm bound on the stated Lebesgue scale",
                    &digest,
                    report.computed_lhs,
                    report.stated_rhs,
                ));
            }
            if let Ok(normalized) = spec.normalized_windows() {
                for th in &normalized_theorems {
                    let report = bound_report(&normalized, *th, config.trials, config.seed)
                        .expect("in range");
                    out.push(bound_check(
                        Suite::LpBounds,
                        &label,
                        format!("{}[case={case}]", report.theorem.tag()),
                        "bilinear-interpolation bound under unit-energy windows",
                        &digest,
                        report.computed_lhs,
                        report.stated_rhs,
                    ));
                }
            }
        }
    }
}

fn schur_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol = config.tolerance("schur_kernel", 1e-10);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Schur, &label, case);
            let spec = spec_from_presets(ctx, config, case, &mut rng);
            let mut digest = Digest::new(&label);
            digest
                .add_grid(spec.sigma())
                .add_fn(spec.u())
                .add_fn(spec.v())
                .add_fn(spec.window());

            let kernel = kernel_matrix(&spec).expect("context");
            let m = two_wavelet_matrix(&spec).expect("context");
            out.push(identity_check(
                Suite::Schur,
                &label,
                format!("kernel_matrix_agreement[case={case}]"),
                "integral kernel reproduces the operator",
                &digest,
                1.0,
                1.0,
                kernel.rel_distance(&m),
                tol,
            ));

            let (sup_t_over_s, sup_s_over_t) = kernel_schur_sums(&kernel);
            let g_inf = spec.window().norm(f64::INFINITY);
            let sig1 = spec.sigma().norm(1.0);
            let bound_t =
                spec.u().norm(f64::INFINITY) * g_inf * g_inf * spec.v().norm(1.0) * sig1;
            let bound_s =
                spec.u().norm(1.0) * g_inf * g_inf * spec.v().norm(f64::INFINITY) * sig1;
            out.push(bound_check(
                Suite::Schur,
                &label,
                format!("kernel_t_integral[case={case}]"),
                "kernel column mass bounded via the post-window l1 norm",
                &digest,
                sup_s_over_t,
                bound_t,
            ));
            out.push(bound_check(
                Suite::Schur,
                &label,
                format!("kernel_s_integral[case={case}]"),
                "kernel row mass bounded via the pre-window l1 norm",
                &digest,
                sup_t_over_s,
                bound_s,
            ));

            for p in [1.0, 2.0, 5.0] {
                let report = bound_report(
                    &spec,
                    TheoremId::SchurKernelOnLp { p },
                    config.trials,
                    config.seed,
                )
                .expect("in range");
                out.push(bound_check(
                    Suite::Schur,
                    &label,
                    format!("{}[case={case}]", report.theorem.tag()),
                    "kernel-test operator bound on every Lebesgue exponent",
                    &digest,
                    report.computed_lhs,
                    report.stated_rhs,
                ));
            }
        }
    }
}

fn trace_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol = config.tolerance("trace", 1e-10);
    let tol_eig = config.tolerance("trace_eigensum", 1e-8);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Trace, &label, case);
            let spec = spec_from_presets(ctx, config, case, &mut rng);
            let mut digest = Digest::new(&label);
            digest
                .add_grid(spec.sigma())
                .add_fn(spec.u())
                .add_fn(spec.v())
                .add_fn(spec.window());
            let m = two_wavelet_matrix(&spec).expect("context");
            let lhs = trace(&m).expect("square");
            let rhs = two_wavelet_trace_formula(&spec).expect("context");
            out.push(identity_check(
                Suite::Trace,
                &label,
                format!("formula[case={case}]"),
                "matrix trace equals the atomwise trace formula",
                &digest,
                lhs.norm(),
                rhs.norm(),
                rel_scalar(lhs, rhs),
                tol,
            ));

            // self-adjoint instance: u = v, real symbol
            let mut rng2 = rng;
            let sigma_re = TimeFreqFunction::from_fn(ctx, |_, _| {
                Complex64::new(rng2.next_symmetric(), 0.0)
            });
            let sa = MultiplierSpec::new(
                ctx,
                sigma_re,
                spec.u().clone(),
                spec.u().clone(),
                spec.window().clone(),
            )
            .expect("context");
            let msa = two_wavelet_matrix(&sa).expect("context");
            let tsa = trace(&msa).expect("square");
            let eig_sum: f64 = qstft_core::spectral::hermitian_eigenvalues(&msa)
                .expect("square")
                .iter()
                .sum();
            out.push(identity_check(
                Suite::Trace,
                &label,
                format!("eigenvalue_sum[case={case}]"),
                "trace equals the eigenvalue sum for self-adjoint instances",
                &digest,
                tsa.re,
                eig_sum,
                (tsa.re - eig_sum).abs() / eig_sum.abs().max(1.0),
                tol_eig,
            ));
        }
    }

    // fixed closed-form instance: rank-one projector with trace exactly 1
    let ctx = Context::new(&[4], &[vec![2]]).expect("static spec");
    let sigma = TimeFreqFunction::constant(&ctx, Complex64::new(1.0, 0.0));
    let u = GroupFunction::delta(Space::Group(Arc::clone(ctx.group())), 0);
    let g = GroupFunction::delta(Space::Quotient(Arc::clone(ctx.quotient())), 0);
    let spec = MultiplierSpec::new(&ctx, sigma, u.clone(), u, g).expect("context");
    let m = two_wavelet_matrix(&spec).expect("context");
    let t = trace(&m).expect("square");
    let mut digest = Digest::new("closed-form");
    digest.add_fn(spec.u()).add_fn(spec.window());
    out.push(identity_check(
        Suite::Trace,
        &ctx.type_label(),
        "closed_form".to_string(),
        "point-mass windows with unit symbol give a rank-one projector",
        &digest,
        t.re,
        1.0,
        (t - Complex64::new(1.0, 0.0)).norm(),
        tol,
    ));
}

fn lps_suite(config: &SuiteConfig, contexts: &[Arc<Context>], out: &mut Vec<CheckRecord>) {
    let tol_proj = config.tolerance("lps_projection", 1e-10);
    let tol_equiv = config.tolerance("lps_equivalence", 1e-9);
    for ctx in contexts {
        let label = ctx.type_label();
        for case in 0..config.cases {
            let mut rng = case_rng(config, Suite::Lps, &label, case);
            let g = window_from(ctx, &config.windows, case, &mut rng);
            let regions = match &config.regions {
                Some(spec) => {
                    // indices pass through; tuples resolve against the
                    // relevant space, with failures surfacing as an
                    // out-of-range index the region validator rejects
                    let group_idx = |entries: &[RegionEntry]| -> Vec<usize> {
                        entries
                            .iter()
                            .map(|e| match e {
                                RegionEntry::Index(i) => *i,
                                RegionEntry::Tuple(c) => ctx
                                    .group()
                                    .element(c)
                                    .map(|el| ctx.group().index_of(&el))
                                    .unwrap_or(usize::MAX),
                            })
                            .collect()
                    };
                    let d: Vec<usize> = spec
                        .d
                        .iter()
                        .map(|e| match e {
                            RegionEntry::Index(i) => *i,
                            RegionEntry::Tuple(c) => ctx
                                .group()
                                .element(c)
                                .ok()
                                .and_then(|el| ctx.quotient().coset_of(&el).ok())
                                .unwrap_or(usize::MAX),
                        })
                        .collect();
                    let omega: Vec<usize> = spec
                        .omega
                        .iter()
                        .map(|e| match e {
                            RegionEntry::Index(i) => *i,
                            RegionEntry::Tuple(c) => ctx
                                .dual()
                                .base()
                                .element(c)
                                .map(|el| ctx.dual().base().index_of(&el))
                                .unwrap_or(usize::MAX),
                        })
                        .collect();
                    LocalizationRegions::new(ctx, group_idx(&spec.c1), group_idx(&spec.c2), d, omega)
                }
                None => LocalizationRegions::new(
                    ctx,
                    corpus::random_region(ctx.group().order(), &mut rng),
                    corpus::random_region(ctx.group().order(), &mut rng),
                    corpus::random_region(ctx.quotient().len(), &mut rng),
                    corpus::random_region(ctx.dual().len(), &mut rng),
                ),
            };
            let regions = match regions {
                Ok(r) => r,
                Err(e) => {
                    out.push(CheckRecord {
                        suite: Suite::Lps.name().to_string(),
                        group: label.clone(),
                        check: format!("region_validation[case={case}]"),
                        anchor: "localization regions must be valid".to_string(),
                        inputs_digest: Digest::new(&label).hex(),
                        lhs: 0.0,
                        rhs: 1.0,
                        residual: 1.0,
                        tolerance: 0.5,
                        pass: false,
                    });
                    let _ = e;
                    continue;
                }
            };
            let mut digest = Digest::new(&label);
            digest
                .add_fn(&g)
                .add_indices(regions.c1())
                .add_indices(regions.c2())
                .add_indices(regions.d())
                .add_indices(regions.omega());

            let q = q_project_matrix(ctx, &regions).expect("context");
            out.push(identity_check(
                Suite::Lps,
                &label,
                format!("q_idempotent[case={case}]"),
                "grid restriction is an idempotent",
                &digest,
                1.0,
                1.0,
                q.compose(&q).expect("same space").rel_distance(&q),
                tol_proj,
            ));
            out.push(identity_check(
                Suite::Lps,
                &label,
                format!("q_self_adjoint[case={case}]"),
                "grid restriction is self-adjoint on the weighted grid",
                &digest,
                1.0,
                1.0,
                q.rel_distance(&q.adjoint()),
                tol_proj,
            ));

            let p1 = p_project_matrix(ctx, regions.c1(), &g).expect("window nonzero");
            out.push(identity_check(
                Suite::Lps,
                &label,
                format!("p_idempotent[case={case}]"),
                "time localization is an idempotent",
                &digest,
                1.0,
                1.0,
                p1.compose(&p1).expect("same space").rel_distance(&p1),
                tol_proj,
            ));
            out.push(identity_check(
                Suite::Lps,
                &label,
                format!("p_self_adjoint[case={case}]"),
                "time localization is self-adjoint on the weighted grid",
                &digest,
                1.0,
                1.0,
                p1.rel_distance(&p1.adjoint()),
                tol_proj,
            ));

            let report = equivalence_check(ctx, &regions, &g).expect("window nonzero");
            let scale = report.lhs_norm.max(report.rhs_norm).max(1e-14);
            out.push(identity_check(
                Suite::Lps,
                &label,
                format!("equivalence_full[case={case}]"),
                "concentration operator matches the conjugated multiplier",
                &digest,
                report.lhs_norm,
                report.rhs_norm,
                report.residual_full / scale,
                tol_equiv,
            ));
            out.push(identity_check(
                Suite::Lps,
                &label,
                format!("equivalence_range[case={case}]"),
                "equivalence restricted to the analysis range",
                &digest,
                report.lhs_norm,
                report.rhs_norm,
                report.residual_range / scale,
                tol_equiv,
            ));

            let alpha_expected =
                ((regions.c1().len() * regions.c2().len()) as f64).sqrt();
            out.push(identity_check(
                Suite::Lps,
                &label,
                format!("alpha[case={case}]"),
                "scaling constant is the geometric mean of the region masses",
                &digest,
                report.alpha,
                alpha_expected,
                (report.alpha - alpha_expected).abs(),
                1e-15,
            ));

            let lps = lps_operator(ctx, &regions, &g).expect("window nonzero");
            let top = schatten_norm(&lps, f64::INFINITY).expect("p >= 1");
            out.push(bound_check(
                Suite::Lps,
                &label,
                format!("contraction[case={case}]"),
                "concentration operator is a contraction",
                &digest,
                top,
                1.0,
            ));
        }
    }
}

fn radon_suite(config: &SuiteConfig, out: &mut Vec<CheckRecord>) {
    let tol_exact = config.tolerance("radon_oracle", 1e-12);
    let tol_recon = config.tolerance("radon_reconstruction", 1e-10);
    let (n, image) = match &config.image {
        Some(rows) => (rows.len() as u32, rows.clone()),
        None => {
            let n = 4u32;
            let mut rng = SplitMix64::derive(config.seed, "radon/image");
            let rows = (0..n)
                .map(|_| (0..n).map(|_| rng.next_symmetric()).collect())
                .collect();
            (n, rows)
        }
    };
    let f = match radon::image_function(n, &image) {
        Ok(f) => f,
        Err(_) => return,
    };
    let g = radon::plane(n).expect("positive n");
    for d in radon::all_directions(n) {
        let ctx = radon::line_context(n, d).expect("nonzero direction");
        let label = ctx.type_label();
        let check_tag = format!("[d=({},{})]", d.0, d.1);
        let mut digest = Digest::new(&label);
        digest.add_fn(&f);

        // subgroup order against an independent closure walk
        let gen = g.element(&[d.0, d.1]).expect("in range");
        let mut count = 1usize;
        let mut cur = gen.clone();
        while !cur.is_identity() {
            cur = g.add(&cur, &gen);
            count += 1;
        }
        out.push(identity_check(
            Suite::Radon,
            &label,
            format!("line_order{check_tag}"),
            "line subgroup order matches the closure walk",
            &digest,
            ctx.subgroup().order() as f64,
            count as f64,
            (ctx.subgroup().order() as f64 - count as f64).abs(),
            0.5,
        ));

        // line sums against an explicit double loop
        let r = radon::discrete_radon(&f, d).expect("plane image");
        let mut worst = 0.0f64;
        for (ci, rep) in ctx.quotient().reps().iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for h in ctx.subgroup().elements() {
                let el = g.add(rep, h);
                acc += f.values()[g.index_of(&el)];
            }
            worst = worst.max(rel_scalar(r.values()[ci], acc));
        }
        out.push(identity_check(
            Suite::Radon,
            &label,
            format!("line_sums{check_tag}"),
            "projection equals explicit sums along each line",
            &digest,
            r.norm(2.0),
            r.norm(2.0),
            worst,
            tol_exact,
        ));

        // analysis path against the unrolled triple sum
        let mut rng = SplitMix64::derive(config.seed, &format!("radon/window/{:?}", d));
        let window = corpus::nonzero_quotient_function(&ctx, &mut rng);
        let coeffs = radon::directional_dstft(&f, d, &window).expect("plane image");
        let q = ctx.quotient();
        let mut worst = 0.0f64;
        for w in 0..ctx.dual().len() {
            for z in 0..q.len() {
                let mut acc = Complex64::new(0.0, 0.0);
                for xi in 0..g.order() {
                    let cx = q.coset_of_index(xi);
                    acc += f.values()[xi]
                        * ctx.character(w, xi).conj()
                        * window.values()[q.coset_sub(cx, z)].conj();
                }
                worst = worst.max(rel_scalar(coeffs.value(w, z), acc));
            }
        }
        let mut digest2 = Digest::new(&label);
        digest2.add_fn(&f).add_fn(&window);
        out.push(identity_check(
            Suite::Radon,
            &label,
            format!("unrolled_oracle{check_tag}"),
            "directional analysis equals the unrolled triple sum",
            &digest2,
            coeffs.norm(2.0),
            coeffs.norm(2.0),
            worst,
            tol_exact,
        ));

        // reconstruction round trip
        let back = reconstruct(&ctx, &f, &window, &window).expect("window nonzero");
        out.push(identity_check(
            Suite::Radon,
            &label,
            format!("reconstruction{check_tag}"),
            "image is recovered from its directional coefficients",
            &digest2,
            back.norm(2.0),
            f.norm(2.0),
            back.rel_distance(&f),
            tol_recon,
        ));
    }
}
