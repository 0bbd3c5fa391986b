//! The three space-form models and their ambient bilinear forms.
//!
//! Points of `E^{n+1}` are embedded in `R^{n+2}` with leading coordinate 1 and
//! Euclidean tangent vectors with leading coordinate 0. `S^{n+1}` is the unit
//! sphere of the positive-definite form and `H^{n+1}` the upper sheet of the
//! Lorentz quadric `x·x = -1`, `x₀ > 0`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Signature {
    PositiveDefinite,
    /// One negative direction at index 0.
    Lorentz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmbientForm {
    dimension: usize,
    signature: Signature,
}

impl AmbientForm {
    pub fn new(dimension: usize, signature: Signature) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Dimension { expected: 3, got: dimension });
        }
        Ok(Self { dimension, signature })
    }

    pub fn euclidean(dimension: usize) -> Self {
        Self { dimension, signature: Signature::PositiveDefinite }
    }

    pub fn lorentz(dimension: usize) -> Self {
        Self { dimension, signature: Signature::Lorentz }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Sign of the form on the `i`-th standard basis vector.
    pub fn sign(&self, i: usize) -> f64 {
        match (self.signature, i) {
            (Signature::Lorentz, 0) => -1.0,
            _ => 1.0,
        }
    }

    /// Diagonal Gram matrix `J`.
    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dimension, self.dimension, |i, j| if i == j { self.sign(i) } else { 0.0 })
    }

    pub fn dot(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != self.dimension {
            return Err(Error::Dimension { expected: self.dimension, got: u.len() });
        }
        if v.len() != self.dimension {
            return Err(Error::Dimension { expected: self.dimension, got: v.len() });
        }
        Ok(self.dot_unchecked(u, v))
    }

    pub(crate) fn dot_unchecked(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, (a, b)) in u.iter().zip(v).enumerate() {
            acc += self.sign(i) * a * b;
        }
        acc
    }
}

/// Symmetric bilinear value of `u` and `v` under `form`.
pub fn inner_product(u: &[f64], v: &[f64], form: &AmbientForm) -> Result<f64> {
    form.dot(u, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryKind {
    Euclidean,
    Spherical,
    Hyperbolic,
}

impl GeometryKind {
    /// Curvature sign appearing in the structure equation.
    pub fn delta(self) -> f64 {
        match self {
            GeometryKind::Euclidean => 0.0,
            GeometryKind::Spherical => 1.0,
            GeometryKind::Hyperbolic => -1.0,
        }
    }

    pub fn delta_i64(self) -> i64 {
        self.delta() as i64
    }
}

/// Model hosting the frame duals of each geometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualKind {
    /// `R × S^n`, oriented affine hyperplanes.
    AffineGrassmannian,
    Sphere,
    DeSitter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceForm {
    kind: GeometryKind,
    n: usize,
}

impl SpaceForm {
    pub fn new(kind: GeometryKind, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Dimension { expected: 1, got: n });
        }
        Ok(Self { kind, n })
    }

    pub fn euclidean(n: usize) -> Self {
        Self { kind: GeometryKind::Euclidean, n }
    }

    pub fn spherical(n: usize) -> Self {
        Self { kind: GeometryKind::Spherical, n }
    }

    pub fn hyperbolic(n: usize) -> Self {
        Self { kind: GeometryKind::Hyperbolic, n }
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient dimension `n + 2`.
    pub fn ambient_dim(&self) -> usize {
        self.n + 2
    }

    pub fn form(&self) -> AmbientForm {
        match self.kind {
            GeometryKind::Hyperbolic => AmbientForm::lorentz(self.ambient_dim()),
            _ => AmbientForm::euclidean(self.ambient_dim()),
        }
    }

    pub fn dual_kind(&self) -> DualKind {
        match self.kind {
            GeometryKind::Euclidean => DualKind::AffineGrassmannian,
            GeometryKind::Spherical => DualKind::Sphere,
            GeometryKind::Hyperbolic => DualKind::DeSitter,
        }
    }

    pub fn delta(&self) -> f64 {
        self.kind.delta()
    }

    /// Pairing used for tangent vectors and conormals. In the Euclidean case
    /// only the spatial coordinates contribute.
    pub fn metric_dot(&self, u: &[f64], v: &[f64]) -> f64 {
        match self.kind {
            GeometryKind::Euclidean => u.iter().zip(v).skip(1).map(|(a, b)| a * b).sum(),
            _ => self.form().dot_unchecked(u, v),
        }
    }

    /// Residual of the model equation at `x` (0 on the model).
    pub fn model_residual(&self, x: &[f64]) -> f64 {
        match self.kind {
            GeometryKind::Euclidean => x[0] - 1.0,
            GeometryKind::Spherical => self.form().dot_unchecked(x, x) - 1.0,
            GeometryKind::Hyperbolic => self.form().dot_unchecked(x, x) + 1.0,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(Error::Dimension { expected: self.ambient_dim(), got: x.len() });
        }
        Ok(())
    }
}

/// Scales `x` onto the model of `sf`.
pub fn normalize_to_model(x: &[f64], sf: &SpaceForm) -> Result<DVector<f64>> {
    sf.check_dim(x)?;
    let v = DVector::from_column_slice(x);
    match sf.kind() {
        GeometryKind::Euclidean => {
            if x[0] == 0.0 || !x[0].is_finite() {
                return Err(Error::Domain {
                    model: "euclidean",
                    detail: "leading coordinate must be non-zero".into(),
                });
            }
            let mut p = v / x[0];
            p[0] = 1.0;
            Ok(p)
        }
        GeometryKind::Spherical => {
            let q = sf.form().dot_unchecked(x, x);
            if q <= 0.0 || !q.is_finite() {
                return Err(Error::Domain { model: "sphere", detail: "zero vector".into() });
            }
            Ok(v / q.sqrt())
        }
        GeometryKind::Hyperbolic => {
            let q = sf.form().dot_unchecked(x, x);
            if q >= 0.0 || !q.is_finite() {
                return Err(Error::Domain {
                    model: "hyperboloid",
                    detail: format!("x·x = {q} is not negative"),
                });
            }
            let s = (-q).sqrt();
            let sign = if x[0] < 0.0 { -1.0 } else { 1.0 };
            Ok(v * (sign / s))
        }
    }
}

/// Totally geodesic hyperplane `{x : x·ê = 0}`, or `{x : x·ê + r = 0}` in the
/// Euclidean case.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub conormal: DVector<f64>,
    pub offset: f64,
}

impl Hyperplane {
    pub fn new(conormal: DVector<f64>, offset: f64) -> Self {
        Self { conormal, offset }
    }

    /// The hyperplane through `point` with conormal `conormal`.
    pub fn through(point: &[f64], conormal: DVector<f64>, sf: &SpaceForm) -> Self {
        let offset = match sf.kind() {
            GeometryKind::Euclidean => -sf.metric_dot(point, conormal.as_slice()),
            _ => 0.0,
        };
        Self { conormal, offset }
    }

    /// Signed normalization residual of the conormal.
    pub fn conormal_residual(&self, sf: &SpaceForm) -> f64 {
        let e = self.conormal.as_slice();
        match sf.kind() {
            GeometryKind::Euclidean => e[0].abs() + (sf.metric_dot(e, e) - 1.0).abs(),
            _ => sf.form().dot_unchecked(e, e) - 1.0,
        }
    }
}

/// Incidence residual of `x` with `h`; zero exactly on the hyperplane.
pub fn hyperplane_eval(x: &[f64], h: &Hyperplane, sf: &SpaceForm) -> Result<f64> {
    sf.check_dim(x)?;
    sf.check_dim(h.conormal.as_slice())?;
    Ok(match sf.kind() {
        GeometryKind::Euclidean => sf.metric_dot(x, h.conormal.as_slice()) + h.offset,
        _ => sf.form().dot_unchecked(x, h.conormal.as_slice()),
    })
}

/// Zero exactly when `v` is tangent to the model at `x`.
pub fn tangent_residual(x: &[f64], v: &[f64], sf: &SpaceForm) -> Result<f64> {
    sf.check_dim(x)?;
    sf.check_dim(v)?;
    Ok(match sf.kind() {
        GeometryKind::Euclidean => v[0],
        _ => sf.form().dot_unchecked(x, v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    #[test]
    fn inner_product_examples() {
        let l = AmbientForm::lorentz(3);
        assert_eq!(inner_product(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &l).unwrap(), -1.0);
        assert_eq!(inner_product(&[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0], &l).unwrap(), 1.0);
        let e = AmbientForm::euclidean(2);
        assert_eq!(inner_product(&[1.0, 2.0], &[3.0, 4.0], &e).unwrap(), 11.0);
        assert!(matches!(
            inner_product(&[1.0, 2.0], &[3.0, 4.0, 5.0], &e),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn normalize_examples() {
        let s = SpaceForm::spherical(2);
        assert_eq!(normalize_to_model(&[2.0, 0.0, 0.0, 0.0], &s).unwrap(), dvector![1.0, 0.0, 0.0, 0.0]);
        let h = SpaceForm::hyperbolic(2);
        assert_eq!(normalize_to_model(&[-2.0, 0.0, 0.0, 0.0], &h).unwrap(), dvector![1.0, 0.0, 0.0, 0.0]);
        let err = normalize_to_model(&[0.0, 1.0, 0.0, 0.0], &h).unwrap_err();
        assert!(matches!(err, Error::Domain { model: "hyperboloid", .. }));
        assert!(normalize_to_model(&[0.0; 4], &s).is_err());
        let e = SpaceForm::euclidean(2);
        assert_eq!(normalize_to_model(&[2.0, 2.0, 4.0, 0.0], &e).unwrap(), dvector![1.0, 1.0, 2.0, 0.0]);
        assert!(normalize_to_model(&[0.0, 1.0, 0.0, 0.0], &e).is_err());
    }

    #[test]
    fn hyperplane_and_tangent_examples() {
        let s = SpaceForm::spherical(2);
        let h = Hyperplane::new(dvector![0.0, 0.0, 0.0, 1.0], 0.0);
        assert_eq!(hyperplane_eval(&[1.0, 0.0, 0.0, 0.0], &h, &s).unwrap(), 0.0);
        let h = Hyperplane::new(dvector![0.0, 1.0, 0.0, 0.0], 0.0);
        assert_eq!(hyperplane_eval(&[1.0, 0.0, 0.0, 0.0], &h, &s).unwrap(), 0.0);
        let e = SpaceForm::euclidean(2);
        let plane = Hyperplane::new(dvector![0.0, 1.0, 0.0, 0.0], -1.0);
        assert_eq!(hyperplane_eval(&[1.0, 1.0, 0.0, 0.0], &plane, &e).unwrap(), 0.0);

        assert_eq!(tangent_residual(&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &s).unwrap(), 0.0);
        assert_eq!(tangent_residual(&[1.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0], &s).unwrap(), 1.0);
        let h3 = SpaceForm::hyperbolic(2);
        assert_eq!(tangent_residual(&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &h3).unwrap(), 0.0);
    }

    #[test]
    fn dual_kinds_and_deltas() {
        assert_eq!(SpaceForm::euclidean(2).dual_kind(), DualKind::AffineGrassmannian);
        assert_eq!(SpaceForm::spherical(2).dual_kind(), DualKind::Sphere);
        assert_eq!(SpaceForm::hyperbolic(2).dual_kind(), DualKind::DeSitter);
        assert_eq!(SpaceForm::hyperbolic(2).delta(), -1.0);
        assert_eq!(SpaceForm::hyperbolic(2).form().signature(), Signature::Lorentz);
    }
}
