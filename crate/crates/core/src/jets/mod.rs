//! Finite-type detection and the codimension calculus of type vectors.

mod codim;
mod rank;
mod types;

pub use codim::{
    codim_adapted, codim_osculating, dual_type, enumerate_generic_types, enumeration_csv, schubert_number, EnumMode,
};
pub use rank::{rank_exact, rank_float, singular_values};
pub use types::TypeVector;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveJets, JetMatrix};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Default relative singular-value threshold of the floating rank decision.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Minimum ratio between the last accepted and first rejected singular value
/// for a floating rank decision to count as well separated.
pub const GAP_CERTIFICATE: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    Exact,
    High,
    Low,
}

impl Confidence {
    pub fn as_str(self) -> &'static str {
        match self {
            Confidence::Exact => "exact",
            Confidence::High => "high",
            Confidence::Low => "low",
        }
    }

    /// The weaker of two labels.
    pub fn min(self, other: Confidence) -> Confidence {
        use Confidence::*;
        match (self, other) {
            (Low, _) | (_, Low) => Low,
            (High, _) | (_, High) => High,
            _ => Exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeDetection {
    pub ty: TypeVector,
    pub confidence: Confidence,
    /// Smallest rank-gap ratio met along the way (floating path only).
    pub min_gap: Option<f64>,
}

/// Jet matrix `(γ, γ′, …, γ^{(r)})` at `t`.
pub fn jet_matrix(curve: &dyn CurveJets, t: f64, r: usize) -> Result<JetMatrix> {
    if let Some(max) = curve.max_order() {
        if r > max {
            return Err(Error::Capability { order: r, max });
        }
    }
    curve.jet(t, r)
}

/// Detects the type of a curve at `t`, reading ranks of growing jet matrices.
pub fn detect_type(curve: &dyn CurveJets, t: f64, r_max: usize, rank_tol: f64) -> Result<TypeDetection> {
    let r_top = match curve.max_order() {
        Some(max) => r_max.min(max),
        None => r_max,
    };
    let jet = jet_matrix(curve, t, r_top)?;
    let det = detect_type_from_jet(&jet, rank_tol)?;
    if det.is_none() && r_top < r_max {
        return Err(Error::Capability { order: r_max, max: r_top });
    }
    det.ok_or_else(|| Error::FiniteType { r_max, rank: jet_rank(&jet, rank_tol) })
}

/// Exact detection at a rational parameter, for providers that support it.
pub fn detect_type_exact(curve: &dyn CurveJets, t: &Rational, r_max: usize) -> Result<TypeDetection> {
    let cols = curve
        .jet_exact(t, r_max)
        .ok_or(Error::Capability { order: r_max, max: 0 })?;
    let jet = JetMatrix::Exact(cols);
    detect_type_from_jet(&jet, DEFAULT_RANK_TOL)?.ok_or_else(|| Error::FiniteType { r_max, rank: jet_rank(&jet, 0.0) })
}

fn jet_rank(jet: &JetMatrix, rank_tol: f64) -> usize {
    match jet {
        JetMatrix::Exact(cols) => rank_exact(cols),
        JetMatrix::Float(m) => rank_float(m, rank_tol).0,
    }
}

/// Type read off a full jet matrix; `None` when the rank never becomes full.
pub fn detect_type_from_jet(jet: &JetMatrix, rank_tol: f64) -> Result<Option<TypeDetection>> {
    let dim = jet.nrows();
    if dim < 3 {
        return Err(Error::Dimension { expected: 3, got: dim });
    }
    let mut a = Vec::with_capacity(dim - 1);
    let mut rank_prev = 0;
    let mut min_gap: Option<f64> = None;
    for r in 0..jet.ncols() {
        let (rank, gap) = match jet {
            JetMatrix::Exact(cols) => (rank_exact(&cols[..=r]), None),
            JetMatrix::Float(m) => rank_float(&m.columns(0, r + 1).into_owned(), rank_tol),
        };
        if let Some(g) = gap {
            min_gap = Some(min_gap.map_or(g, |m| m.min(g)));
        }
        if r == 0 && rank == 0 {
            return Ok(None);
        }
        // A rank can grow by at most one per added column.
        for _ in rank_prev.max(1)..rank {
            a.push(r as u32);
        }
        rank_prev = rank;
        if rank == dim {
            let confidence = if jet.is_exact() {
                Confidence::Exact
            } else if min_gap.is_some_and(|g| g < GAP_CERTIFICATE) {
                Confidence::Low
            } else {
                Confidence::High
            };
            return Ok(Some(TypeDetection { ty: TypeVector::new(a)?, confidence, min_gap }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ClosedFormCurve, PolyCurve};
    use crate::poly::Poly;
    use crate::scalar::rat;
    use nalgebra::DVector;

    #[test]
    fn monomial_types() {
        for a in [[1, 2, 3], [1, 3, 4], [2, 3, 4], [1, 2, 5]] {
            let c = PolyCurve::monomial(&a);
            let d = detect_type(&c, 0.0, 9, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(d.ty.as_slice(), &a);
            assert_eq!(d.confidence, Confidence::Exact);
        }
    }

    #[test]
    fn constant_curve_has_rank_one() {
        let c = PolyCurve::new(vec![Poly::constant(rat(1, 1)), Poly::constant(rat(2, 1)), Poly::zero(), Poly::zero()]);
        let JetMatrix::Exact(cols) = jet_matrix(&c, 0.3, 4).unwrap() else { panic!() };
        assert_eq!(rank_exact(&cols), 1);
        assert!(matches!(detect_type(&c, 0.0, 6, 1e-8), Err(Error::FiniteType { rank: 1, .. })));
    }

    #[test]
    fn helix_is_ordinary() {
        let h = ClosedFormCurve::helix();
        let JetMatrix::Float(m) = jet_matrix(&h, 0.0, 3).unwrap() else { panic!() };
        assert_eq!(rank_float(&m, 1e-8).0, 4);
        let d = detect_type(&h, 0.0, 6, 1e-8).unwrap();
        assert_eq!(d.ty, TypeVector::ordinary(2));
        assert_eq!(d.confidence, Confidence::High);
    }

    #[test]
    fn planar_circle_dual_is_not_finite_type() {
        let c = ClosedFormCurve::new(4, None, |t, k| {
            let (c, s) = match k % 4 {
                0 => (t.cos(), t.sin()),
                1 => (-t.sin(), t.cos()),
                2 => (-t.cos(), -t.sin()),
                _ => (t.sin(), -t.cos()),
            };
            DVector::from_vec(vec![if k == 0 { -1.0 } else { 0.0 }, c, s, 0.0])
        });
        assert!(matches!(detect_type(&c, 0.4, 8, 1e-8), Err(Error::FiniteType { rank: 3, .. })));
    }
}
