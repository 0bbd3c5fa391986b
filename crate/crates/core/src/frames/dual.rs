use nalgebra::{DMatrix, DVector};

use super::gram_schmidt::cross_complement;
use super::FrameField;
use crate::curve::{CurveJets, JetMatrix, PolyCurve, SampledCurve};
use crate::error::{Error, Result};
use crate::poly::{poly_det, Poly};
use crate::scalar::{factorial_f64, rational_from_f64, Rational, Scalar};
use crate::spaceform::{GeometryKind, SpaceForm};

/// Samples of the frame dual `γ̂` with two derivatives: `e_{n+1}` on the
/// sphere and in de Sitter space, `(−γ·e_{n+1}, e_{n+1})` in the Euclidean case.
#[derive(Clone, Debug)]
pub struct DualCurve {
    sf: SpaceForm,
    t: Vec<f64>,
    values: Vec<DVector<f64>>,
    first: Vec<DVector<f64>>,
    second: Vec<DVector<f64>>,
}

impl DualCurve {
    pub fn params(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[DVector<f64>] {
        &self.values
    }

    pub fn first(&self) -> &[DVector<f64>] {
        &self.first
    }

    pub fn second(&self) -> &[DVector<f64>] {
        &self.second
    }

    pub fn space_form(&self) -> SpaceForm {
        self.sf
    }

    /// Largest violation of the dual-space normalization over all samples.
    pub fn model_defect(&self) -> f64 {
        self.values
            .iter()
            .map(|y| match self.sf.kind() {
                GeometryKind::Euclidean => (y.rows(1, y.len() - 1).norm() - 1.0).abs(),
                _ => (self.sf.form().dot_unchecked(y.as_slice(), y.as_slice()) - 1.0).abs(),
            })
            .fold(0.0, f64::max)
    }

    /// Finite-difference jet provider over the samples (uniform grids only).
    pub fn sampled(&self, accuracy: usize) -> Result<SampledCurve> {
        let n = self.t.len();
        if n < 2 {
            return Err(Error::Dimension { expected: 2, got: n });
        }
        let h = (self.t[n - 1] - self.t[0]) / (n - 1) as f64;
        SampledCurve::new(self.t[0], h, self.values.clone(), accuracy)
    }
}

/// Frame dual of a framed curve, with derivatives taken from the frame field.
pub fn frame_dual(field: &FrameField) -> DualCurve {
    let sf = field.space_form();
    let last = sf.ambient_dim() - 1;
    let mut values = Vec::with_capacity(field.len());
    let mut first = Vec::with_capacity(field.len());
    let mut second = Vec::with_capacity(field.len());
    for i in 0..field.len() {
        let (e, d, dd) = (field.matrix(i), field.derivative(i), field.second_derivative(i));
        let mut y = e.column(last).into_owned();
        let mut y1 = d.column(last).into_owned();
        let mut y2 = dd.column(last).into_owned();
        if sf.kind() == GeometryKind::Euclidean {
            let dot = |a: &DMatrix<f64>, b: &DMatrix<f64>, ca: usize, cb: usize| {
                sf.metric_dot(a.column(ca).as_slice(), b.column(cb).as_slice())
            };
            y[0] = -dot(e, e, 0, last);
            y1[0] = -(dot(d, e, 0, last) + dot(e, d, 0, last));
            y2[0] = -(dot(dd, e, 0, last) + 2.0 * dot(d, d, 0, last) + dot(e, dd, 0, last));
        }
        values.push(y);
        first.push(y1);
        second.push(y2);
    }
    DualCurve { sf, t: field.params().to_vec(), values, first, second }
}

/// `|ê(t)·γ′(t)|` per node, with `γ′` taken from the curve's own jets and
/// `ê = e_{n+1}` from the frame field. Zero exactly for integral lifts.
pub fn legendre_residuals(gamma: &dyn CurveJets, field: &FrameField) -> Result<Vec<f64>> {
    let sf = field.space_form();
    let last = sf.ambient_dim() - 1;
    field
        .params()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let v = gamma.jet(t, 1)?.column(1);
            let e = field.matrix(i).column(last).into_owned();
            Ok(sf.metric_dot(v.as_slice(), e.as_slice()).abs())
        })
        .collect()
}

/// Dual of a curve through its osculating hyperplanes: the vector
/// `w = ⋆(γ ∧ γ′ ∧ … ∧ γ^{(n)})`, which is proportional to the osculating
/// frame dual wherever the curve is ordinary. For polynomial curves the jets
/// are exact and common factors `(t − t₀)^m` are removed, which extends the
/// dual through special points.
#[derive(Clone)]
pub struct OsculatingDual<'a> {
    curve: &'a dyn CurveJets,
    sf: SpaceForm,
}

impl std::fmt::Debug for OsculatingDual<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OsculatingDual").field("sf", &self.sf).finish_non_exhaustive()
    }
}

impl<'a> OsculatingDual<'a> {
    pub fn new(curve: &'a dyn CurveJets, sf: SpaceForm) -> Self {
        Self { curve, sf }
    }

    /// Polynomial dual of a polynomial curve, before factor removal.
    pub fn polynomial(curve: &PolyCurve, sf: &SpaceForm) -> Vec<Poly<Rational>> {
        let d = curve.components().len();
        let mut cols: Vec<Vec<Poly<Rational>>> = Vec::with_capacity(d - 1);
        let mut cur = curve.components().to_vec();
        for _ in 0..d - 1 {
            cols.push(cur.clone());
            cur = cur.iter().map(Poly::derivative).collect();
        }
        let form = sf.form();
        (0..d)
            .map(|i| {
                let m: Vec<Vec<Poly<Rational>>> = (0..d)
                    .map(|row| {
                        let mut r: Vec<Poly<Rational>> = cols.iter().map(|c| c[row].clone()).collect();
                        r.push(if row == i { Poly::constant(Rational::from_i64(1)) } else { Poly::zero() });
                        r
                    })
                    .collect();
                poly_det(&m).scale(&Rational::from_i64(form.sign(i) as i64))
            })
            .collect()
    }

    fn exact_jet(&self, t: &Rational, r: usize) -> Option<Vec<Vec<Rational>>> {
        // The curve's exact jet of high enough order is its Taylor polynomial.
        let d = self.curve.ambient_dim();
        let order = r + 2 * d + 8;
        let cols = self.curve.jet_exact(t, order)?;
        let comps: Vec<Poly<Rational>> = (0..d)
            .map(|i| {
                Poly::new(
                    cols.iter()
                        .enumerate()
                        .map(|(k, c)| c[i].clone() / crate::scalar::factorial(k as u32))
                        .collect(),
                )
            })
            .collect();
        let w = Self::polynomial(&PolyCurve::new(comps), &self.sf);
        let m = w.iter().filter_map(Poly::valuation).min()?;
        let w: Vec<Poly<Rational>> = w.iter().map(|p| p.shift_down(m)).collect();
        let mut out = Vec::with_capacity(r + 1);
        let mut cur = w;
        for _ in 0..=r {
            out.push(cur.iter().map(|p| p.coeff(0)).collect());
            cur = cur.iter().map(Poly::derivative).collect();
        }
        Some(out)
    }

    fn float_jet(&self, t: f64, r: usize) -> Result<DMatrix<f64>> {
        let d = self.curve.ambient_dim();
        let n = d - 2;
        let g = self.curve.jet(t, n + r)?.to_float();
        let form = self.sf.form();
        let mut out = DMatrix::zeros(d, r + 1);
        for m in 0..=r {
            let mut acc = DVector::zeros(d);
            for_each_composition(m, n + 1, &mut |ks| {
                let coef = factorial_f64(m as u32) / ks.iter().map(|&k| factorial_f64(k as u32)).product::<f64>();
                let vs: Vec<DVector<f64>> = ks.iter().enumerate().map(|(slot, &k)| g.column(slot + k).into_owned()).collect();
                acc += cross_complement(&vs, &form) * coef;
            });
            out.set_column(m, &acc);
        }
        Ok(out)
    }
}

/// Calls `f` with every vector of `parts` naturals summing to `total`.
fn for_each_composition(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(rest: usize, k: usize, cur: &mut Vec<usize>, parts: usize, f: &mut dyn FnMut(&[usize])) {
        if k + 1 == parts {
            cur.push(rest);
            f(cur);
            cur.pop();
            return;
        }
        for v in 0..=rest {
            cur.push(v);
            rec(rest - v, k + 1, cur, parts, f);
            cur.pop();
        }
    }
    rec(total, 0, &mut Vec::with_capacity(parts), parts, f);
}

impl CurveJets for OsculatingDual<'_> {
    fn ambient_dim(&self) -> usize {
        self.curve.ambient_dim()
    }

    fn max_order(&self) -> Option<usize> {
        let n = self.curve.ambient_dim() - 2;
        self.curve.max_order().map(|m| m.saturating_sub(n))
    }

    fn jet(&self, t: f64, r: usize) -> Result<JetMatrix> {
        if let Some(cols) = self.exact_jet(&rational_from_f64(t), r) {
            return Ok(JetMatrix::Exact(cols));
        }
        Ok(JetMatrix::Float(self.float_jet(t, r)?))
    }

    fn jet_exact(&self, t: &Rational, r: usize) -> Option<Vec<Vec<Rational>>> {
        self.exact_jet(t, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::ClosedFormCurve;
    use crate::frames::{integrate_on_grid, CurvatureData, Frame};
    use crate::jets::{detect_type, dual_type, TypeVector};

    #[test]
    fn circle_with_radial_frame() {
        // e₁ = T, e₃ outward radial, e₂ = binormal: κ = (0, −1, 0).
        let sf = SpaceForm::euclidean(2);
        let mut init = DMatrix::zeros(4, 4);
        init[(0, 0)] = 1.0;
        init[(1, 0)] = 1.0;
        init[(2, 1)] = 1.0;
        init[(3, 2)] = 1.0;
        init[(1, 3)] = 1.0;
        let init = Frame::new(sf, init).unwrap();
        assert!(init.determinant() > 0.0);
        let curv = CurvatureData::constant(GeometryKind::Euclidean, [0.0, -1.0, 0.0]);
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
        let field = integrate_on_grid(&init, &curv, &grid, 1e-10).unwrap();
        let dual = frame_dual(&field);
        for (y, &t) in dual.values().iter().zip(&grid) {
            let want = DVector::from_vec(vec![-1.0, t.cos(), t.sin(), 0.0]);
            assert!((y - want).amax() < 1e-8);
        }
        assert!(dual.model_defect() < 1e-9);
    }

    #[test]
    fn great_circle_with_fixed_pole_has_constant_dual() {
        let sf = SpaceForm::spherical(2);
        let curv = CurvatureData::constant(GeometryKind::Spherical, [0.0; 3]);
        let field = integrate_on_grid(&Frame::standard(sf), &curv, &[0.0, 0.5, 1.0], 1e-10).unwrap();
        let dual = frame_dual(&field);
        for y in dual.first() {
            assert!(y.amax() < 1e-12);
        }
    }

    #[test]
    fn helix_dual_is_immersed() {
        let helix = ClosedFormCurve::helix();
        let dual = OsculatingDual::new(&helix, SpaceForm::euclidean(2));
        for t in [0.0, 1.0, 2.5] {
            assert_eq!(detect_type(&dual, t, 8, 1e-8).unwrap().ty, TypeVector::ordinary(2));
        }
    }

    #[test]
    fn exact_dual_of_monomials() {
        let sf = SpaceForm::euclidean(2);
        for a in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 2, 5]] {
            let c = PolyCurve::monomial(&a);
            let dual = OsculatingDual::new(&c, sf);
            let ty = TypeVector::new(a.to_vec()).unwrap();
            assert_eq!(detect_type(&dual, 0.0, 10, 1e-8).unwrap().ty, dual_type(&ty), "a = {a:?}");
        }
    }

    #[test]
    fn witness_frame_violates_legendre_condition() {
        let sf = SpaceForm::euclidean(2);
        let curv = CurvatureData::constant(GeometryKind::Euclidean, [1.0, 0.0, 0.5]);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let field = integrate_on_grid(&Frame::standard(sf), &curv, &grid, 1e-10).unwrap();
        let samples = field.points();
        let gamma = SampledCurve::new(0.0, 0.1, samples, 6).unwrap();
        let ok = legendre_residuals(&gamma, &field).unwrap();
        assert!(ok.iter().all(|&r| r < 1e-6));
        let bad = legendre_residuals(&gamma, &field.with_column_replaced(3, 1)).unwrap();
        assert!(bad.iter().all(|&r| (r - 1.0).abs() < 1e-3));
    }
}
