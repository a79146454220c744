//! Time-frequency multiplier operators.
//!
//! `apply_generalized_multiplier` conjugates a pointwise symbol by the
//! analysis transform; `apply_two_wavelet` surrounds it with a pre-window
//! `u` and a conjugated post-window `v`:
//!
//! ```text
//! P f(t) = conj(v(t)) sum_{w,zH} sigma(w,zH) analyze(u f)(w,zH) g_{w,zH}(t) * w_cell
//! ```
//!
//! The conjugated-`v` form is the one consistent with the weak-form pairing
//! `<P f, h> = sum sigma * analyze(u f) * conj(analyze(v h))` and with the
//! adjoint swap `P(sigma,u,v)^* = P(conj sigma, v, u)`; both are enforced by
//! tests. Matrices are assembled by applying the operator to basis vectors,
//! so the matrix path can never drift from the apply path.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Context, DualGroup, FiniteGroup, Quotient};
use crate::harmonic::{GroupFunction, Space};
use crate::transform::{
    analyze, ensure_grid, ensure_group_fn, ensure_quotient_fn, left_inverse, synthesize,
    TimeFreqFunction,
};

/// Measured index space an operator maps between.
#[derive(Debug, Clone)]
pub enum OperatorSpace {
    Group(Arc<FiniteGroup>),
    Grid {
        dual: Arc<DualGroup>,
        quotient: Arc<Quotient>,
    },
}

impl OperatorSpace {
    pub fn len(&self) -> usize {
        match self {
            OperatorSpace::Group(g) => g.order(),
            OperatorSpace::Grid { dual, quotient } => dual.len() * quotient.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point_weight(&self) -> f64 {
        match self {
            OperatorSpace::Group(g) => g.point_weight(),
            OperatorSpace::Grid { dual, quotient } => {
                dual.point_weight() * quotient.point_weight()
            }
        }
    }

    pub fn same_as(&self, other: &OperatorSpace) -> bool {
        match (self, other) {
            (OperatorSpace::Group(a), OperatorSpace::Group(b)) => **a == **b,
            (
                OperatorSpace::Grid {
                    dual: da,
                    quotient: qa,
                },
                OperatorSpace::Grid {
                    dual: db,
                    quotient: qb,
                },
            ) => **da == **db && **qa == **qb,
            _ => false,
        }
    }
}

/// Complex matrix between two measured spaces. Application is the plain
/// matrix-vector product; measure weights enter through the adjoint, traces
/// and norms. On weight-1 group spaces the entries coincide with the
/// integral kernel.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    row_space: OperatorSpace,
    col_space: OperatorSpace,
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(
        row_space: OperatorSpace,
        col_space: OperatorSpace,
        entries: DMatrix<Complex64>,
    ) -> Result<OperatorMatrix> {
        if entries.nrows() != row_space.len() || entries.ncols() != col_space.len() {
            return Err(Error::Mismatch(format!(
                "matrix is {}x{} but spaces are {}x{}",
                entries.nrows(),
                entries.ncols(),
                row_space.len(),
                col_space.len()
            )));
        }
        Ok(OperatorMatrix {
            row_space,
            col_space,
            entries,
        })
    }

    /// Assemble column-by-column from the action on canonical basis vectors.
    pub fn from_columns(
        row_space: OperatorSpace,
        col_space: OperatorSpace,
        mut column: impl FnMut(usize) -> Vec<Complex64>,
    ) -> OperatorMatrix {
        let rows = row_space.len();
        let cols = col_space.len();
        let mut entries = DMatrix::zeros(rows, cols);
        for j in 0..cols {
            let col = column(j);
            debug_assert_eq!(col.len(), rows);
            for i in 0..rows {
                entries[(i, j)] = col[i];
            }
        }
        OperatorMatrix {
            row_space,
            col_space,
            entries,
        }
    }

    pub fn row_space(&self) -> &OperatorSpace {
        &self.row_space
    }

    pub fn col_space(&self) -> &OperatorSpace {
        &self.col_space
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.ncols());
        let mut out = vec![Complex64::new(0.0, 0.0); self.nrows()];
        for (j, xj) in x.iter().enumerate() {
            if xj.norm_sqr() == 0.0 {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                *slot += self.entries[(i, j)] * xj;
            }
        }
        out
    }

    /// Measure-weighted adjoint: `A*(i,j) = conj(A(j,i)) * w_row(j) / w_col(i)`.
    pub fn adjoint(&self) -> OperatorMatrix {
        let wr = self.row_space.point_weight();
        let wc = self.col_space.point_weight();
        let ratio = wr / wc;
        let mut entries = DMatrix::zeros(self.ncols(), self.nrows());
        for i in 0..self.ncols() {
            for j in 0..self.nrows() {
                entries[(i, j)] = self.entries[(j, i)].conj() * ratio;
            }
        }
        OperatorMatrix {
            row_space: self.col_space.clone(),
            col_space: self.row_space.clone(),
            entries,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if !self.col_space.same_as(&other.row_space) {
            return Err(Error::Mismatch(
                "composition spaces do not line up".to_string(),
            ));
        }
        Ok(OperatorMatrix {
            row_space: self.row_space.clone(),
            col_space: other.col_space.clone(),
            entries: &self.entries * &other.entries,
        })
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_shape(other)?;
        Ok(OperatorMatrix {
            row_space: self.row_space.clone(),
            col_space: self.col_space.clone(),
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_shape(other)?;
        Ok(OperatorMatrix {
            row_space: self.row_space.clone(),
            col_space: self.col_space.clone(),
            entries: &self.entries - &other.entries,
        })
    }

    pub fn scale(&self, c: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            row_space: self.row_space.clone(),
            col_space: self.col_space.clone(),
            entries: self.entries.map(|e| e * c),
        }
    }

    fn check_same_shape(&self, other: &OperatorMatrix) -> Result<()> {
        if self.row_space.same_as(&other.row_space) && self.col_space.same_as(&other.col_space) {
            Ok(())
        } else {
            Err(Error::Mismatch("matrices act on different spaces".to_string()))
        }
    }

    /// Largest entrywise deviation from `other`, relative to the larger
    /// entry magnitude in play.
    pub fn rel_distance(&self, other: &OperatorMatrix) -> f64 {
        let scale = self
            .entries
            .iter()
            .chain(other.entries.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            .max(1e-14);
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }
}

/// Symbol, pre/post windows, and quotient window sharing one context.
#[derive(Debug, Clone)]
pub struct MultiplierSpec {
    ctx: Arc<Context>,
    sigma: TimeFreqFunction,
    u: GroupFunction,
    v: GroupFunction,
    window: GroupFunction,
}

impl MultiplierSpec {
    pub fn new(
        ctx: &Arc<Context>,
        sigma: TimeFreqFunction,
        u: GroupFunction,
        v: GroupFunction,
        window: GroupFunction,
    ) -> Result<MultiplierSpec> {
        ensure_grid(ctx, &sigma, "symbol")?;
        ensure_group_fn(ctx, &u, "pre-window u")?;
        ensure_group_fn(ctx, &v, "post-window v")?;
        ensure_quotient_fn(ctx, &window, "window g")?;
        Ok(MultiplierSpec {
            ctx: Arc::clone(ctx),
            sigma,
            u,
            v,
            window,
        })
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn sigma(&self) -> &TimeFreqFunction {
        &self.sigma
    }

    pub fn u(&self) -> &GroupFunction {
        &self.u
    }

    pub fn v(&self) -> &GroupFunction {
        &self.v
    }

    pub fn window(&self) -> &GroupFunction {
        &self.window
    }

    /// Same spec with `u`, `v` swapped and the symbol conjugated: the
    /// adjoint's parameters.
    pub fn adjoint_spec(&self) -> MultiplierSpec {
        MultiplierSpec {
            ctx: Arc::clone(&self.ctx),
            sigma: self.sigma.conj(),
            u: self.v.clone(),
            v: self.u.clone(),
            window: self.window.clone(),
        }
    }

    /// Spec with `u`, `v` scaled to unit `L^2` norm (the normalization the
    /// Schatten-bound statements assume).
    pub fn normalized_windows(&self) -> Result<MultiplierSpec> {
        let nu = self.u.norm(2.0);
        let nv = self.v.norm(2.0);
        if nu <= 1e-300 || nv <= 1e-300 {
            return Err(Error::DegenerateWindow(nu.min(nv)));
        }
        Ok(MultiplierSpec {
            ctx: Arc::clone(&self.ctx),
            sigma: self.sigma.clone(),
            u: self.u.scale(Complex64::new(1.0 / nu, 0.0)),
            v: self.v.scale(Complex64::new(1.0 / nv, 0.0)),
            window: self.window.clone(),
        })
    }

    pub fn group_space(&self) -> OperatorSpace {
        OperatorSpace::Group(Arc::clone(self.ctx.group()))
    }
}

/// `M_{sigma,g} f = left_inverse(sigma . analyze(f, g), g)`. The symbol acts
/// pointwise on the coefficient grid.
pub fn apply_generalized_multiplier(
    ctx: &Context,
    sigma: &TimeFreqFunction,
    window: &GroupFunction,
    f: &GroupFunction,
) -> Result<GroupFunction> {
    ensure_grid(ctx, sigma, "symbol")?;
    let coeffs = analyze(ctx, f, window)?;
    let filtered = sigma.mul_pointwise(&coeffs)?;
    left_inverse(ctx, &filtered, window)
}

/// Two-wavelet multiplier, grid path.
pub fn apply_two_wavelet(spec: &MultiplierSpec, f: &GroupFunction) -> Result<GroupFunction> {
    ensure_group_fn(&spec.ctx, f, "signal")?;
    let uf = spec.u.mul_pointwise(f)?;
    let coeffs = analyze(&spec.ctx, &uf, &spec.window)?;
    let filtered = spec.sigma.mul_pointwise(&coeffs)?;
    let spread = synthesize(&spec.ctx, &filtered, &spec.window)?;
    spread.mul_pointwise(&spec.v.conj())
}

/// Weak-form pairing `<P f, h> = sum sigma * analyze(u f) * conj(analyze(v h)) * w_cell`.
pub fn weak_form(
    spec: &MultiplierSpec,
    f: &GroupFunction,
    h: &GroupFunction,
) -> Result<Complex64> {
    ensure_group_fn(&spec.ctx, f, "signal")?;
    ensure_group_fn(&spec.ctx, h, "test function")?;
    let duf = analyze(&spec.ctx, &spec.u.mul_pointwise(f)?, &spec.window)?;
    let dvh = analyze(&spec.ctx, &spec.v.mul_pointwise(h)?, &spec.window)?;
    let w = duf.point_weight();
    let mut acc = Complex64::new(0.0, 0.0);
    for ((s, a), b) in spec.sigma.values().iter().zip(duf.values()).zip(dvh.values()) {
        acc += s * a * b.conj();
    }
    Ok(acc * w)
}

/// Matrix of the two-wavelet multiplier on `L^2(G)`, column `j` being the
/// image of the `j`-th basis vector.
pub fn two_wavelet_matrix(spec: &MultiplierSpec) -> Result<OperatorMatrix> {
    let space = spec.group_space();
    let group_space = Space::Group(Arc::clone(spec.ctx.group()));
    let mut failure: Option<Error> = None;
    let matrix = OperatorMatrix::from_columns(space.clone(), space, |j| {
        let basis = GroupFunction::delta(group_space.clone(), j);
        match apply_two_wavelet(spec, &basis) {
            Ok(col) => col.values().to_vec(),
            Err(e) => {
                failure = Some(e);
                vec![Complex64::new(0.0, 0.0); spec.ctx.group().order()]
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(matrix),
    }
}

/// Integral-kernel form
/// `N(t;s) = u(s) conj(v(t)) sum_{w,z} sigma(w,z) conj(g_{w,z}(s)) g_{w,z}(t) w_cell`,
/// as a matrix on the weight-1 group space (entries equal kernel values).
pub fn kernel_matrix(spec: &MultiplierSpec) -> Result<OperatorMatrix> {
    let ctx = &spec.ctx;
    let g = ctx.group();
    let q = ctx.quotient();
    let n = g.order();
    let qn = q.len();
    let wcell = spec.sigma.point_weight();
    let cosets: Vec<usize> = (0..n).map(|x| q.coset_of_index(x)).collect();
    let mut entries = DMatrix::zeros(n, n);
    for t in 0..n {
        let ct = cosets[t];
        for s in 0..n {
            let cs = cosets[s];
            let mut acc = Complex64::new(0.0, 0.0);
            for w in 0..n {
                // chi_w(t) conj(chi_w(s)) = chi_w(t - s)
                let phase = ctx.character(w, g.sub_indices(t, s));
                for z in 0..qn {
                    acc += spec.sigma.values()[w * qn + z]
                        * spec.window.values()[q.coset_sub(cs, z)].conj()
                        * spec.window.values()[q.coset_sub(ct, z)]
                        * phase;
                }
            }
            entries[(t, s)] = spec.u.values()[s] * spec.v.values()[t].conj() * acc * wcell;
        }
    }
    let space = spec.group_space();
    OperatorMatrix::new(space.clone(), space, entries)
}

/// Weighted absolute row sums of an integral kernel,
/// `sup_t int |N(t;s)| ds` and `sup_s int |N(t;s)| dt`.
pub fn kernel_schur_sums(kernel: &OperatorMatrix) -> (f64, f64) {
    let wc = kernel.col_space().point_weight();
    let wr = kernel.row_space().point_weight();
    let mut max_row = 0.0f64;
    for i in 0..kernel.nrows() {
        let mut s = 0.0;
        for j in 0..kernel.ncols() {
            s += kernel.entry(i, j).norm() * wc;
        }
        max_row = max_row.max(s);
    }
    let mut max_col = 0.0f64;
    for j in 0..kernel.ncols() {
        let mut s = 0.0;
        for i in 0..kernel.nrows() {
            s += kernel.entry(i, j).norm() * wr;
        }
        max_col = max_col.max(s);
    }
    (max_row, max_col)
}
