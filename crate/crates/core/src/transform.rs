//! The quotient-window analysis transform and its synthesis pair.
//!
//! Analysis pairs a function `f` on `G` against the modulated, quotient-
//! translated window family `g_{w,zH}(x) = g(xH - zH) <x, chi_w>` built from
//! a window `g` on `G/H`:
//!
//! ```text
//! analyze(f, g)(w, zH) = sum_x f(x) conj(<x, chi_w>) conj(g(xH - zH))
//! ```
//!
//! Coefficients live on the grid `dual(G) x G/H` with the product measure.
//! Three algebraically equivalent routes are implemented (the direct sum,
//! the periodize-and-convolve route on the quotient, and the Fourier-side
//! route over the annihilator) plus the measure-correct adjoint
//! (`synthesize`) and two-window inversion.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Context, DualGroup, Quotient};
use crate::harmonic::{self, lp_norm, GroupFunction, Space};

/// Complex function on the grid `dual(G) x G/H`, stored row-major with the
/// dual index first: `values[w * |G/H| + z]`.
#[derive(Debug, Clone)]
pub struct TimeFreqFunction {
    dual: Arc<DualGroup>,
    quotient: Arc<Quotient>,
    values: Vec<Complex64>,
}

impl TimeFreqFunction {
    pub fn new(
        dual: Arc<DualGroup>,
        quotient: Arc<Quotient>,
        values: Vec<Complex64>,
    ) -> Result<TimeFreqFunction> {
        if values.len() != dual.len() * quotient.len() {
            return Err(Error::Mismatch(format!(
                "grid needs {} x {} values, got {}",
                dual.len(),
                quotient.len(),
                values.len()
            )));
        }
        Ok(TimeFreqFunction {
            dual,
            quotient,
            values,
        })
    }

    pub fn zeros(ctx: &Context) -> TimeFreqFunction {
        let n = ctx.grid_len();
        TimeFreqFunction {
            dual: Arc::clone(ctx.dual()),
            quotient: Arc::clone(ctx.quotient()),
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn constant(ctx: &Context, value: Complex64) -> TimeFreqFunction {
        let mut f = TimeFreqFunction::zeros(ctx);
        f.values.fill(value);
        f
    }

    pub fn delta(ctx: &Context, w_index: usize, z_index: usize) -> TimeFreqFunction {
        let mut f = TimeFreqFunction::zeros(ctx);
        let q = f.quotient.len();
        f.values[w_index * q + z_index] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn from_fn(
        ctx: &Context,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> TimeFreqFunction {
        let q = ctx.quotient().len();
        let n = ctx.dual().len();
        let values = (0..n * q).map(|i| f(i / q, i % q)).collect();
        TimeFreqFunction {
            dual: Arc::clone(ctx.dual()),
            quotient: Arc::clone(ctx.quotient()),
            values,
        }
    }

    pub fn dual(&self) -> &Arc<DualGroup> {
        &self.dual
    }

    pub fn quotient(&self) -> &Arc<Quotient> {
        &self.quotient
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

    pub fn value(&self, w_index: usize, z_index: usize) -> Complex64 {
        self.values[w_index * self.quotient.len() + z_index]
    }

    /// Product-measure weight of one grid cell.
    pub fn point_weight(&self) -> f64 {
        self.dual.point_weight() * self.quotient.point_weight()
    }

    /// `L^p` norm under the product measure.
    pub fn norm(&self, p: f64) -> f64 {
        lp_norm(&self.values, self.point_weight(), p)
    }

    pub fn inner(&self, other: &TimeFreqFunction) -> Result<Complex64> {
        if !self.same_grid(other) {
            return Err(Error::Mismatch("grids do not match".to_string()));
        }
        let w = self.point_weight();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.values.iter().zip(&other.values) {
            acc += a * b.conj();
        }
        Ok(acc * w)
    }

    pub fn same_grid(&self, other: &TimeFreqFunction) -> bool {
        *self.dual == *other.dual && *self.quotient == *other.quotient
    }

    pub fn scale(&self, c: Complex64) -> TimeFreqFunction {
        TimeFreqFunction {
            dual: Arc::clone(&self.dual),
            quotient: Arc::clone(&self.quotient),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn conj(&self) -> TimeFreqFunction {
        TimeFreqFunction {
            dual: Arc::clone(&self.dual),
            quotient: Arc::clone(&self.quotient),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn add(&self, other: &TimeFreqFunction) -> Result<TimeFreqFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TimeFreqFunction) -> Result<TimeFreqFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul_pointwise(&self, other: &TimeFreqFunction) -> Result<TimeFreqFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    fn zip_with(
        &self,
        other: &TimeFreqFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<TimeFreqFunction> {
        if !self.same_grid(other) {
            return Err(Error::Mismatch("grids do not match".to_string()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(TimeFreqFunction {
            dual: Arc::clone(&self.dual),
            quotient: Arc::clone(&self.quotient),
            values,
        })
    }

    pub fn rel_distance(&self, other: &TimeFreqFunction) -> f64 {
        harmonic::rel_distance(&self.values, &other.values)
    }
}

pub(crate) fn ensure_group_fn(ctx: &Context, f: &GroupFunction, what: &str) -> Result<()> {
    match f.space() {
        Space::Group(g) if **g == **ctx.group() => Ok(()),
        _ => Err(Error::Mismatch(format!("{what} must live on the context group"))),
    }
}

pub(crate) fn ensure_quotient_fn(ctx: &Context, f: &GroupFunction, what: &str) -> Result<()> {
    match f.space() {
        Space::Quotient(q) if **q == **ctx.quotient() => Ok(()),
        _ => Err(Error::Mismatch(format!("{what} must live on the context quotient"))),
    }
}

pub(crate) fn ensure_grid(ctx: &Context, f: &TimeFreqFunction, what: &str) -> Result<()> {
    if **f.dual() == **ctx.dual() && **f.quotient() == **ctx.quotient() {
        Ok(())
    } else {
        Err(Error::Mismatch(format!("{what} must live on the context grid")))
    }
}

/// The window family `g_{w,zH}(x) = g(xH - zH) <x, chi_w>`, built on demand.
pub struct AtomFamily<'a> {
    ctx: &'a Context,
    window: &'a GroupFunction,
}

impl<'a> AtomFamily<'a> {
    pub fn new(ctx: &'a Context, window: &'a GroupFunction) -> Result<AtomFamily<'a>> {
        ensure_quotient_fn(ctx, window, "window")?;
        Ok(AtomFamily { ctx, window })
    }

    pub fn atom(&self, w_index: usize, z_index: usize) -> GroupFunction {
        let g = self.ctx.group();
        let q = self.ctx.quotient();
        let n = g.order();
        let values = (0..n)
            .map(|x| {
                let cx = q.coset_of_index(x);
                self.window.values()[q.coset_sub(cx, z_index)] * self.ctx.character(w_index, x)
            })
            .collect();
        GroupFunction::new(Space::Group(Arc::clone(g)), values).expect("sized to the group")
    }
}

/// Direct-sum analysis: the defining formula, used as the oracle for the
/// other two routes.
pub fn analyze(
    ctx: &Context,
    f: &GroupFunction,
    window: &GroupFunction,
) -> Result<TimeFreqFunction> {
    ensure_group_fn(ctx, f, "signal")?;
    ensure_quotient_fn(ctx, window, "window")?;
    let g = ctx.group();
    let q = ctx.quotient();
    let n = g.order();
    let qn = q.len();
    let wg = g.point_weight();
    let cosets: Vec<usize> = (0..n).map(|x| q.coset_of_index(x)).collect();
    let mut values = vec![Complex64::new(0.0, 0.0); n * qn];
    for w in 0..n {
        for z in 0..qn {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, &cx) in cosets.iter().enumerate() {
                acc += f.values()[x]
                    * ctx.character(w, x).conj()
                    * window.values()[q.coset_sub(cx, z)].conj();
            }
            values[w * qn + z] = acc * wg;
        }
    }
    TimeFreqFunction::new(Arc::clone(ctx.dual()), Arc::clone(ctx.quotient()), values)
}

/// Convolution on the quotient: `(a * b)(xH) = sum_y a(yH) b(xH - yH)`.
pub fn quotient_convolution(a: &GroupFunction, b: &GroupFunction) -> Result<GroupFunction> {
    let q = match (a.space(), b.space()) {
        (Space::Quotient(qa), Space::Quotient(qb)) if **qa == **qb => qa,
        _ => {
            return Err(Error::Mismatch(
                "convolution needs two functions on the same quotient".to_string(),
            ))
        }
    };
    let w = q.point_weight();
    let len = q.len();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (x, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for y in 0..len {
            acc += a.values()[y] * b.values()[q.coset_sub(x, y)];
        }
        *slot = acc * w;
    }
    GroupFunction::new(Space::Quotient(Arc::clone(q)), out)
}

/// Quotient route: demodulate, take fiber sums, then convolve on `G/H`.
///
/// Row `w` equals `(R(M_{-w} f) * g~)(zH)` where `g~(xH) = conj(g(-xH))`;
/// the involution is what turns the convolution into the inner product
/// `<R(M_{-w} f), T_{zH} g>` for complex windows.
pub fn analyze_quotient_form(
    ctx: &Context,
    f: &GroupFunction,
    window: &GroupFunction,
) -> Result<TimeFreqFunction> {
    ensure_group_fn(ctx, f, "signal")?;
    ensure_quotient_fn(ctx, window, "window")?;
    let g = ctx.group();
    let q = ctx.quotient();
    let n = g.order();
    let qn = q.len();
    let involuted = GroupFunction::from_fn(Space::Quotient(Arc::clone(q)), |c| {
        window.values()[q.coset_neg(c)].conj()
    });
    let mut values = vec![Complex64::new(0.0, 0.0); n * qn];
    for w in 0..n {
        let demodulated = GroupFunction::from_fn(Space::Group(Arc::clone(g)), |x| {
            f.values()[x] * ctx.character(w, x).conj()
        });
        let fibers = harmonic::periodize(&demodulated, q)?;
        let row = quotient_convolution(&fibers, &involuted)?;
        values[w * qn..(w + 1) * qn].copy_from_slice(row.values());
    }
    TimeFreqFunction::new(Arc::clone(ctx.dual()), Arc::clone(ctx.quotient()), values)
}

/// Fourier-side route: pair the shifted transform of `f` against the
/// modulated transform of the window over the annihilator,
///
/// ```text
/// analyze(f, g)(w, zH)
///   = (1/|G/H|) sum_{eta in ann} fhat(w + eta) <z, eta> conj(ghat(eta))
/// ```
pub fn analyze_fourier_form(
    ctx: &Context,
    f: &GroupFunction,
    window: &GroupFunction,
) -> Result<TimeFreqFunction> {
    ensure_group_fn(ctx, f, "signal")?;
    ensure_quotient_fn(ctx, window, "window")?;
    let g = ctx.group();
    let q = ctx.quotient();
    let dual_base = ctx.dual().base();
    let n = g.order();
    let qn = q.len();
    let fhat = harmonic::fourier(f)?;
    let ghat = harmonic::fourier(window)?;
    let ann = ctx.annihilator();
    let w_ann = ctx.annihilator_weight();
    let ann_indices: Vec<usize> = ann.elements().iter().map(|e| dual_base.index_of(e)).collect();
    let mut values = vec![Complex64::new(0.0, 0.0); n * qn];
    for w in 0..n {
        for z in 0..qn {
            let rep = q.rep_at(z);
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, eta) in ann.elements().iter().enumerate() {
                let shifted = dual_base.add_indices(w, ann_indices[i]);
                acc += fhat.values()[shifted] * g.pair(eta, rep) * ghat.values()[i].conj();
            }
            values[w * qn + z] = acc * w_ann;
        }
    }
    TimeFreqFunction::new(Arc::clone(ctx.dual()), Arc::clone(ctx.quotient()), values)
}

/// Measure-correct adjoint of [`analyze`]:
/// `(S F)(x) = sum_{w,z} F(w,z) <x, chi_w> g(xH - zH) * w_dual * w_quot`.
pub fn synthesize(
    ctx: &Context,
    coeffs: &TimeFreqFunction,
    window: &GroupFunction,
) -> Result<GroupFunction> {
    ensure_grid(ctx, coeffs, "coefficients")?;
    ensure_quotient_fn(ctx, window, "window")?;
    let g = ctx.group();
    let q = ctx.quotient();
    let n = g.order();
    let qn = q.len();
    let wcell = coeffs.point_weight();
    let values = (0..n)
        .map(|x| {
            let cx = q.coset_of_index(x);
            let mut acc = Complex64::new(0.0, 0.0);
            for w in 0..n {
                let chr = ctx.character(w, x);
                for z in 0..qn {
                    acc += coeffs.values()[w * qn + z] * chr * window.values()[q.coset_sub(cx, z)];
                }
            }
            acc * wcell
        })
        .collect();
    GroupFunction::new(Space::Group(Arc::clone(g)), values)
}

/// Left inverse of [`analyze`]: `synthesize(., g) / ||g||^2`. On grid
/// functions outside the analysis range this acts as the pseudo-inverse
/// assembled from the adjoint.
pub fn left_inverse(
    ctx: &Context,
    coeffs: &TimeFreqFunction,
    window: &GroupFunction,
) -> Result<GroupFunction> {
    let energy = window.norm(2.0).powi(2);
    if energy <= 1e-24 {
        return Err(Error::DegenerateWindow(energy.sqrt()));
    }
    Ok(synthesize(ctx, coeffs, window)?.scale(Complex64::new(1.0 / energy, 0.0)))
}

/// Two-window inversion: `f = synthesize(analyze(f, g1), g2) / <g2, g1>`.
pub fn reconstruct(
    ctx: &Context,
    f: &GroupFunction,
    g1: &GroupFunction,
    g2: &GroupFunction,
) -> Result<GroupFunction> {
    ensure_quotient_fn(ctx, g1, "analysis window")?;
    ensure_quotient_fn(ctx, g2, "synthesis window")?;
    let ip = g2.inner(g1)?;
    if ip.norm() <= 1e-12 {
        return Err(Error::NonInvertibleWindowPair(ip.norm()));
    }
    let coeffs = analyze(ctx, f, g1)?;
    let back = synthesize(ctx, &coeffs, g2)?;
    Ok(back.scale(Complex64::new(1.0, 0.0) / ip))
}
