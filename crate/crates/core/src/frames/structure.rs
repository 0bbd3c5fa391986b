use std::fmt;
use std::ops::Neg;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::ode::{rk45, OdeOptions};
use super::{reorthonormalize, Frame, FrameField};
use crate::curve::{CurveJets, JetMatrix};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{rational_from_f64, Rational, Scalar};
use crate::spaceform::{GeometryKind, SpaceForm};

/// Connection matrix `K` of the structure equation `E′ = E·K` for `n = 2`;
/// column `j` holds the frame coordinates of `e_j′`.
pub fn structure_matrix<T: Scalar>(delta: T, kappa: &[T; 3]) -> [[T; 4]; 4] {
    structure_matrix_with(T::zero(), T::one(), delta, kappa)
}

fn structure_matrix_with<T: Clone + Neg<Output = T>>(z: T, one: T, delta: T, kappa: &[T; 3]) -> [[T; 4]; 4] {
    let [k1, k2, k3] = kappa.clone();
    [
        [z.clone(), -delta, z.clone(), z.clone()],
        [one, z.clone(), -k1.clone(), -k2.clone()],
        [z.clone(), k1, z.clone(), -k3.clone()],
        [z.clone(), k2, k3, z],
    ]
}

type KappaFn = dyn Fn(f64) -> f64 + Send + Sync;

/// One curvature function of arc length.
#[derive(Clone)]
pub enum CurvatureFn {
    Poly(Poly<Rational>),
    Closure(Arc<KappaFn>),
    /// Piecewise-linear table over increasing abscissae.
    Table { s: Vec<f64>, v: Vec<f64> },
}

impl fmt::Debug for CurvatureFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureFn::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            CurvatureFn::Closure(_) => f.write_str("Closure"),
            CurvatureFn::Table { s, .. } => write!(f, "Table({} rows)", s.len()),
        }
    }
}

const FD_STEP: f64 = 1e-4;

impl CurvatureFn {
    pub fn constant(c: f64) -> Self {
        CurvatureFn::Poly(Poly::constant(rational_from_f64(c)))
    }

    pub fn closure(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CurvatureFn::Closure(Arc::new(f))
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            CurvatureFn::Poly(p) => p.to_f64().eval(&s),
            CurvatureFn::Closure(f) => f(s),
            CurvatureFn::Table { s: xs, v } => {
                if xs.len() == 1 {
                    return v[0];
                }
                let i = match xs.partition_point(|&x| x <= s) {
                    0 => 0,
                    k if k >= xs.len() => xs.len() - 2,
                    k => k - 1,
                };
                let w = (s - xs[i]) / (xs[i + 1] - xs[i]);
                v[i] * (1.0 - w) + v[i + 1] * w
            }
        }
    }

    /// `k`-th derivative (`k ≤ 2` for non-polynomial data).
    pub fn derivative(&self, s: f64, k: usize) -> f64 {
        match (self, k) {
            (_, 0) => self.eval(s),
            (CurvatureFn::Poly(p), _) => {
                let mut q = p.to_f64();
                for _ in 0..k {
                    q = q.derivative();
                }
                q.eval(&s)
            }
            (_, 1) => (self.eval(s + FD_STEP) - self.eval(s - FD_STEP)) / (2.0 * FD_STEP),
            _ => (self.eval(s + FD_STEP) - 2.0 * self.eval(s) + self.eval(s - FD_STEP)) / (FD_STEP * FD_STEP),
        }
    }

    pub fn as_poly(&self) -> Option<&Poly<Rational>> {
        match self {
            CurvatureFn::Poly(p) => Some(p),
            _ => None,
        }
    }
}

/// Geometry plus the curvatures `(κ₁, κ₂, κ₃)` of an adapted frame, `n = 2`.
#[derive(Clone, Debug)]
pub struct CurvatureData {
    pub kind: GeometryKind,
    pub kappa: [CurvatureFn; 3],
}

impl CurvatureData {
    pub fn new(kind: GeometryKind, kappa: [CurvatureFn; 3]) -> Self {
        Self { kind, kappa }
    }

    pub fn constant(kind: GeometryKind, kappa: [f64; 3]) -> Self {
        Self::new(kind, kappa.map(CurvatureFn::constant))
    }

    pub fn polynomial(kind: GeometryKind, kappa: [Poly<Rational>; 3]) -> Self {
        Self::new(kind, kappa.map(CurvatureFn::Poly))
    }

    pub fn delta(&self) -> f64 {
        self.kind.delta()
    }

    pub fn k_matrix(&self, s: f64) -> DMatrix<f64> {
        let k = structure_matrix(self.delta(), &[0, 1, 2].map(|i| self.kappa[i].eval(s)));
        DMatrix::from_fn(4, 4, |i, j| k[i][j])
    }

    pub fn k_derivative(&self, s: f64) -> DMatrix<f64> {
        let k = structure_matrix(0.0, &[0, 1, 2].map(|i| self.kappa[i].derivative(s, 1)));
        let mut m = DMatrix::from_fn(4, 4, |i, j| k[i][j]);
        m[(1, 0)] = 0.0;
        m
    }

    /// The polynomial model, when every curvature is a polynomial.
    pub fn as_structure_curve(&self) -> Option<StructureCurve> {
        let p = [self.kappa[0].as_poly()?, self.kappa[1].as_poly()?, self.kappa[2].as_poly()?];
        Some(StructureCurve::new(self.kind, p.map(Clone::clone)))
    }
}

fn check_frame(init: &Frame, curv: &CurvatureData) -> Result<()> {
    let sf = init.space_form();
    if sf.n() != 2 {
        return Err(Error::Dimension { expected: 2, got: sf.n() });
    }
    if sf.kind() != curv.kind {
        return Err(Error::Config(format!("curvature data for {:?} used with a {:?} frame", curv.kind, sf.kind())));
    }
    Ok(())
}

fn integrate(init: &Frame, curv: &CurvatureData, grid: &[f64], tol: f64, record_all: bool) -> Result<FrameField> {
    check_frame(init, curv)?;
    let sf = init.space_form();
    let d = sf.ambient_dim();
    let rhs = |s: f64, y: &DVector<f64>| {
        let e = DMatrix::from_column_slice(d, d, y.as_slice());
        let de = e * curv.k_matrix(s);
        DVector::from_column_slice(de.as_slice())
    };
    let project = |y: &DVector<f64>| {
        let e = DMatrix::from_column_slice(d, d, y.as_slice());
        reorthonormalize(&sf, &e).map(|m| DVector::from_column_slice(m.as_slice()))
    };
    let opts = OdeOptions { tol, ..OdeOptions::default() };
    let y0 = DVector::from_column_slice(init.matrix().as_slice());
    let (ts, ys) = rk45(rhs, project, grid, y0, &opts, record_all)?;
    Ok(field_from_states(sf, curv, ts, ys))
}

fn field_from_states(sf: SpaceForm, curv: &CurvatureData, ts: Vec<f64>, ys: Vec<DVector<f64>>) -> FrameField {
    let d = sf.ambient_dim();
    let mut frames = Vec::with_capacity(ts.len());
    let mut derivs = Vec::with_capacity(ts.len());
    let mut second = Vec::with_capacity(ts.len());
    for (&s, y) in ts.iter().zip(&ys) {
        let e = DMatrix::from_column_slice(d, d, y.as_slice());
        let k = curv.k_matrix(s);
        let dk = curv.k_derivative(s);
        derivs.push(&e * &k);
        second.push(&e * (&k * &k + dk));
        frames.push(e);
    }
    FrameField::new(sf, ts, frames, derivs, second).expect("lengths agree")
}

/// Integrates `E′ = E·K(s)` over `span`, recording every accepted step.
pub fn integrate_structure_equation(init: &Frame, curv: &CurvatureData, span: (f64, f64), tol: f64) -> Result<FrameField> {
    integrate(init, curv, &[span.0, span.1], tol, true)
}

/// Integrates `E′ = E·K(s)` and reports the frame at each node of `grid`.
pub fn integrate_on_grid(init: &Frame, curv: &CurvatureData, grid: &[f64], tol: f64) -> Result<FrameField> {
    integrate(init, curv, grid, tol, false)
}

/// Which curve's jets to express in frame coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetKind {
    /// The base curve `γ = e₀`.
    Curve,
    /// The dual functional `ℓ` with `ℓ(e_i) = δ_{i,n+1}`, i.e. the frame dual.
    Dual,
}

/// Jets of `γ` or of its frame dual written in frame coordinates, as
/// polynomials in arc length. Column `k` is `c_k` with `c₀` a basis vector
/// and `c_{k+1} = K·c_k + c_k′` (curve) or `c_{k+1} = −Kᵀ·c_k + c_k′` (dual).
/// Since the frame matrix is invertible, ranks agree with ambient ranks.
pub fn frame_coordinate_jets<T: Scalar>(delta: T, kappa: &[Poly<T>; 3], which: JetKind, r: usize) -> Vec<Vec<Poly<T>>> {
    let zero = Poly::<T>::zero();
    let one = Poly::constant(T::one());
    let kp = structure_matrix_with(zero.clone(), one.clone(), Poly::constant(delta), kappa);
    let mut c: Vec<Poly<T>> = vec![zero.clone(); 4];
    match which {
        JetKind::Curve => c[0] = one,
        JetKind::Dual => c[3] = one,
    }
    let mut out = Vec::with_capacity(r + 1);
    out.push(c.clone());
    for _ in 0..r {
        let next: Vec<Poly<T>> = (0..4)
            .map(|i| {
                let mut acc = c[i].derivative();
                for (j, cj) in c.iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    let coef = match which {
                        JetKind::Curve => kp[i][j].clone(),
                        JetKind::Dual => -kp[j][i].clone(),
                    };
                    if !coef.is_zero() {
                        acc = acc + &coef * cj;
                    }
                }
                acc
            })
            .collect();
        c = next;
        out.push(c.clone());
    }
    out
}

/// Adapted framed curve with polynomial curvatures: exact jets in frame
/// coordinates without integrating the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureCurve {
    pub kind: GeometryKind,
    pub kappa: [Poly<Rational>; 3],
}

impl StructureCurve {
    pub fn new(kind: GeometryKind, kappa: [Poly<Rational>; 3]) -> Self {
        Self { kind, kappa }
    }

    pub fn curve_jets(&self) -> FrameJets {
        FrameJets { curve: self.clone(), which: JetKind::Curve }
    }

    pub fn dual_jets(&self) -> FrameJets {
        FrameJets { curve: self.clone(), which: JetKind::Dual }
    }

    pub fn curvature_data(&self) -> CurvatureData {
        CurvatureData::polynomial(self.kind, self.kappa.clone())
    }
}

/// Jet provider over frame coordinates of a [`StructureCurve`].
#[derive(Clone, Debug)]
pub struct FrameJets {
    curve: StructureCurve,
    which: JetKind,
}

impl FrameJets {
    pub fn kind(&self) -> JetKind {
        self.which
    }

    pub fn jet_polys(&self, r: usize) -> Vec<Vec<Poly<Rational>>> {
        let delta = Rational::from_i64(self.curve.kind.delta_i64());
        frame_coordinate_jets(delta, &self.curve.kappa, self.which, r)
    }
}

impl CurveJets for FrameJets {
    fn ambient_dim(&self) -> usize {
        4
    }

    fn max_order(&self) -> Option<usize> {
        None
    }

    fn jet(&self, t: f64, r: usize) -> Result<JetMatrix> {
        Ok(JetMatrix::Exact(self.jet_exact(&rational_from_f64(t), r).expect("exact provider")))
    }

    fn jet_exact(&self, t: &Rational, r: usize) -> Option<Vec<Vec<Rational>>> {
        Some(self.jet_polys(r).iter().map(|col| col.iter().map(|p| p.eval(t)).collect()).collect())
    }
}
