//! Curve jet providers: the only way curves enter the system.
//!
//! A provider returns the jet matrix `(γ, γ′, …, γ^{(r)})` at a parameter.
//! Polynomial providers answer exactly in rational arithmetic; closed-form
//! providers return analytic floating derivatives; sampled providers use
//! finite differences and are trusted only up to order 4.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{rational_from_f64, Rational, Scalar};

/// Jet matrix with column `k` holding the `k`-th derivative.
#[derive(Clone, Debug, PartialEq)]
pub enum JetMatrix {
    Exact(Vec<Vec<Rational>>),
    Float(DMatrix<f64>),
}

impl JetMatrix {
    pub fn nrows(&self) -> usize {
        match self {
            JetMatrix::Exact(cols) => cols.first().map_or(0, Vec::len),
            JetMatrix::Float(m) => m.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            JetMatrix::Exact(cols) => cols.len(),
            JetMatrix::Float(m) => m.ncols(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, JetMatrix::Exact(_))
    }

    pub fn to_float(&self) -> DMatrix<f64> {
        match self {
            JetMatrix::Exact(cols) => {
                let rows = self.nrows();
                DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].to_f64())
            }
            JetMatrix::Float(m) => m.clone(),
        }
    }

    pub fn column(&self, k: usize) -> DVector<f64> {
        match self {
            JetMatrix::Exact(cols) => DVector::from_iterator(cols[k].len(), cols[k].iter().map(|q| q.to_f64())),
            JetMatrix::Float(m) => m.column(k).into_owned(),
        }
    }
}

pub trait CurveJets: Send + Sync {
    fn ambient_dim(&self) -> usize;

    /// Highest derivative order available; `None` when unbounded.
    fn max_order(&self) -> Option<usize>;

    /// Jet matrix of size `ambient_dim × (r + 1)` at `t`.
    fn jet(&self, t: f64, r: usize) -> Result<JetMatrix>;

    /// Exact jet at a rational parameter, when the provider supports it.
    fn jet_exact(&self, _t: &Rational, _r: usize) -> Option<Vec<Vec<Rational>>> {
        None
    }

    fn point(&self, t: f64) -> Result<DVector<f64>> {
        Ok(self.jet(t, 0)?.column(0))
    }
}

/// Curve whose coordinates are polynomials with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCurve {
    components: Vec<Poly<Rational>>,
}

impl PolyCurve {
    pub fn new(components: Vec<Poly<Rational>>) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &[Poly<Rational>] {
        &self.components
    }

    /// Monomial curve `(1, t^{a₁}/a₁!, …, t^{a_{n+1}}/a_{n+1}!)`.
    pub fn monomial(a: &[u32]) -> Self {
        let mut comps = vec![Poly::constant(Rational::from_i64(1))];
        for &k in a {
            let c = Rational::from_i64(1) / crate::scalar::factorial(k);
            comps.push(Poly::monomial(c, k as usize));
        }
        Self::new(comps)
    }

    pub fn exact_jet_at(&self, t: &Rational, r: usize) -> Vec<Vec<Rational>> {
        let mut cur: Vec<Poly<Rational>> = self.components.clone();
        let mut cols = Vec::with_capacity(r + 1);
        for _ in 0..=r {
            cols.push(cur.iter().map(|p| p.eval(t)).collect());
            cur = cur.iter().map(Poly::derivative).collect();
        }
        cols
    }

    /// Applies an ambient linear map given by rational rows.
    pub fn transformed(&self, rows: &[Vec<Rational>]) -> Self {
        let comps = rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.components)
                    .fold(Poly::zero(), |acc, (a, p)| acc + p.scale(a))
            })
            .collect();
        Self::new(comps)
    }

    /// Reparametrizes by a polynomial `φ`: returns `γ ∘ φ`.
    pub fn reparametrized(&self, phi: &Poly<Rational>) -> Self {
        let comps = self
            .components
            .iter()
            .map(|p| {
                let mut acc = Poly::zero();
                for c in p.coeffs().iter().rev() {
                    acc = &acc * phi + Poly::constant(c.clone());
                }
                acc
            })
            .collect();
        Self::new(comps)
    }
}

impl CurveJets for PolyCurve {
    fn ambient_dim(&self) -> usize {
        self.components.len()
    }

    fn max_order(&self) -> Option<usize> {
        None
    }

    fn jet(&self, t: f64, r: usize) -> Result<JetMatrix> {
        Ok(JetMatrix::Exact(self.exact_jet_at(&rational_from_f64(t), r)))
    }

    fn jet_exact(&self, t: &Rational, r: usize) -> Option<Vec<Vec<Rational>>> {
        Some(self.exact_jet_at(t, r))
    }
}

type DerivFn = dyn Fn(f64, usize) -> DVector<f64> + Send + Sync;

/// Curve given by an analytic derivative oracle `(t, k) ↦ γ^{(k)}(t)`.
#[derive(Clone)]
pub struct ClosedFormCurve {
    dim: usize,
    max_order: Option<usize>,
    deriv: Arc<DerivFn>,
}

impl fmt::Debug for ClosedFormCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedFormCurve").field("dim", &self.dim).field("max_order", &self.max_order).finish()
    }
}

impl ClosedFormCurve {
    pub fn new(dim: usize, max_order: Option<usize>, deriv: impl Fn(f64, usize) -> DVector<f64> + Send + Sync + 'static) -> Self {
        Self { dim, max_order, deriv: Arc::new(deriv) }
    }

    pub fn derivative(&self, t: f64, k: usize) -> DVector<f64> {
        (self.deriv)(t, k)
    }

    /// Unit-speed helix `(cos t, sin t, t)/√2` in `E³`, embedded with leading 1.
    pub fn helix() -> Self {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(4, None, move |t, k| {
            let u = t * c;
            // derivatives of cos(u), sin(u) with respect to t
            let s = c.powi(k as i32);
            let (cos_k, sin_k) = match k % 4 {
                0 => (u.cos(), u.sin()),
                1 => (-u.sin(), u.cos()),
                2 => (-u.cos(), -u.sin()),
                _ => (u.sin(), -u.cos()),
            };
            let lead = if k == 0 { 1.0 } else { 0.0 };
            let z = match k {
                0 => t * c,
                1 => c,
                _ => 0.0,
            };
            DVector::from_vec(vec![lead, s * cos_k, s * sin_k, z])
        })
    }

    /// Unit circle `(cos t, sin t, 0)` in the plane `x₃ = 0` of `E³`.
    pub fn unit_circle() -> Self {
        Self::new(4, None, |t, k| {
            let (c, s) = match k % 4 {
                0 => (t.cos(), t.sin()),
                1 => (-t.sin(), t.cos()),
                2 => (-t.cos(), -t.sin()),
                _ => (t.sin(), -t.cos()),
            };
            let lead = if k == 0 { 1.0 } else { 0.0 };
            DVector::from_vec(vec![lead, c, s, 0.0])
        })
    }

    /// `(A cos t, A sin t, B cos 2t, B sin 2t)` on `S³` with `A² + B² = 1`.
    pub fn clifford(b: f64) -> Self {
        let a = (1.0 - b * b).sqrt();
        Self::new(4, None, move |t, k| {
            let (c1, s1) = trig_derivative(t, 1.0, k);
            let (c2, s2) = trig_derivative(t, 2.0, k);
            DVector::from_vec(vec![a * c1, a * s1, b * c2, b * s2])
        })
    }

    /// `(A cosh t, A sinh t, B cos t, B sin t)` on `H³` with `A² − B² = 1`.
    pub fn hyperbolic_spiral(b: f64) -> Self {
        let a = (1.0 + b * b).sqrt();
        Self::new(4, None, move |t, k| {
            let (ch, sh) = if k % 2 == 0 { (t.cosh(), t.sinh()) } else { (t.sinh(), t.cosh()) };
            let (c, s) = trig_derivative(t, 1.0, k);
            DVector::from_vec(vec![a * ch, a * sh, b * c, b * s])
        })
    }
}

/// `k`-th derivatives of `(cos ωt, sin ωt)`.
fn trig_derivative(t: f64, w: f64, k: usize) -> (f64, f64) {
    let (s, c) = (w * t).sin_cos();
    let f = w.powi(k as i32);
    let (dc, ds) = match k % 4 {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    (f * dc, f * ds)
}

impl CurveJets for ClosedFormCurve {
    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn max_order(&self) -> Option<usize> {
        self.max_order
    }

    fn jet(&self, t: f64, r: usize) -> Result<JetMatrix> {
        if let Some(max) = self.max_order {
            if r > max {
                return Err(Error::Capability { order: r, max });
            }
        }
        let mut m = DMatrix::zeros(self.dim, r + 1);
        for k in 0..=r {
            m.set_column(k, &(self.deriv)(t, k));
        }
        Ok(JetMatrix::Float(m))
    }
}

/// Uniformly sampled curve with finite-difference jets.
#[derive(Clone, Debug)]
pub struct SampledCurve {
    t0: f64,
    h: f64,
    samples: Vec<DVector<f64>>,
    accuracy: usize,
}

/// Highest derivative order trusted from finite differences.
pub const SAMPLED_MAX_ORDER: usize = 4;

impl SampledCurve {
    /// `samples[i]` is the curve at `t0 + i·h`. `accuracy` is the declared
    /// order of the finite-difference stencils.
    pub fn new(t0: f64, h: f64, samples: Vec<DVector<f64>>, accuracy: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        let dim = samples[0].len();
        if let Some(bad) = samples.iter().find(|s| s.len() != dim) {
            return Err(Error::Dimension { expected: dim, got: bad.len() });
        }
        Ok(Self { t0, h, samples, accuracy: accuracy.max(2) })
    }

    pub fn samples(&self) -> &[DVector<f64>] {
        &self.samples
    }

    fn nodes_for(&self, t: f64, count: usize) -> Vec<usize> {
        let n = self.samples.len();
        let count = count.min(n);
        let center = ((t - self.t0) / self.h).round();
        let center = center.clamp(0.0, (n - 1) as f64) as usize;
        let mut lo = center.saturating_sub(count / 2);
        if lo + count > n {
            lo = n - count;
        }
        (lo..lo + count).collect()
    }
}

/// Finite-difference weights for derivatives `0..=m` at `z` from nodes `x`
/// (Fornberg's recursion). Returns `w[k][j]`.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

impl CurveJets for SampledCurve {
    fn ambient_dim(&self) -> usize {
        self.samples[0].len()
    }

    fn max_order(&self) -> Option<usize> {
        Some(SAMPLED_MAX_ORDER)
    }

    fn jet(&self, t: f64, r: usize) -> Result<JetMatrix> {
        if r > SAMPLED_MAX_ORDER {
            return Err(Error::Capability { order: r, max: SAMPLED_MAX_ORDER });
        }
        let nodes = self.nodes_for(t, r + self.accuracy + 1);
        let xs: Vec<f64> = nodes.iter().map(|&i| self.t0 + i as f64 * self.h).collect();
        let w = fornberg_weights(t, &xs, r);
        let dim = self.ambient_dim();
        let mut m = DMatrix::zeros(dim, r + 1);
        for (k, wk) in w.iter().enumerate() {
            let mut col = DVector::zeros(dim);
            for (j, &i) in nodes.iter().enumerate() {
                col += &self.samples[i] * wk[j];
            }
            m.set_column(k, &col);
        }
        Ok(JetMatrix::Float(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn monomial_jet_is_exact_identity() {
        let c = PolyCurve::monomial(&[1, 2, 3]);
        let JetMatrix::Exact(cols) = c.jet(0.0, 3).unwrap() else { panic!() };
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                assert_eq!(*v, if i == j { rat(1, 1) } else { rat(0, 1) });
            }
        }
    }

    #[test]
    fn helix_derivatives_match_finite_differences() {
        let h = ClosedFormCurve::helix();
        let t = 0.7;
        let eps = 1e-5;
        let d = (h.derivative(t + eps, 0) - h.derivative(t - eps, 0)) / (2.0 * eps);
        assert!((d - h.derivative(t, 1)).norm() < 1e-9);
        let d3 = (h.derivative(t + eps, 2) - h.derivative(t - eps, 2)) / (2.0 * eps);
        assert!((d3 - h.derivative(t, 3)).norm() < 1e-9);
        assert!((h.derivative(t, 1).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sampled_jets_recover_polynomial_derivatives() {
        let f = |t: f64| DVector::from_vec(vec![1.0, t, t * t / 2.0, t.powi(3) / 6.0]);
        let h = 0.01;
        let samples: Vec<_> = (0..201).map(|i| f(-1.0 + i as f64 * h)).collect();
        let c = SampledCurve::new(-1.0, h, samples, 6).unwrap();
        let JetMatrix::Float(m) = c.jet(0.0, 3).unwrap() else { panic!() };
        let expect = DMatrix::<f64>::identity(4, 4);
        assert!((m - expect).amax() < 1e-8);
        assert!(matches!(c.jet(0.0, 5), Err(Error::Capability { .. })));
    }

    #[test]
    fn reparametrize_and_transform() {
        let c = PolyCurve::monomial(&[1, 2]);
        let phi = Poly::new(vec![rat(0, 1), rat(2, 1)]);
        let r = c.reparametrized(&phi);
        assert_eq!(r.components()[2], Poly::monomial(rat(2, 1), 2));
        let t = c.transformed(&[vec![rat(1, 1), rat(0, 1), rat(0, 1)], vec![rat(0, 1), rat(0, 1), rat(1, 1)], vec![rat(0, 1), rat(1, 1), rat(0, 1)]]);
        assert_eq!(t.components()[1], Poly::monomial(rat(1, 2), 2));
    }
}
