use nalgebra::{DMatrix, DVector};

use super::gram_schmidt::gram_schmidt_signed;
use super::{Frame, FrameField};
use crate::curve::CurveJets;
use crate::error::{Error, Result};
use crate::jets::{detect_type, TypeVector};
use crate::spaceform::{AmbientForm, GeometryKind, SpaceForm};

/// Frame whose leading spans are the osculating flag `⟨γ, γ^{(a₁)}, …⟩` at
/// `t`. Each `e_k` (k ≤ n) is positively aligned with `γ^{(a_k)}`; `e_{n+1}`
/// is signed so that the frame has positive determinant.
pub fn osculating_frame(curve: &dyn CurveJets, t: f64, sf: &SpaceForm, r_max: usize, rank_tol: f64) -> Result<Frame> {
    let ty = detect_type(curve, t, r_max, rank_tol)?.ty;
    let jet = curve.jet(t, ty.last() as usize)?.to_float();
    frame_from_jet(&jet, &ty, sf)
}

fn frame_from_jet(jet: &DMatrix<f64>, ty: &TypeVector, sf: &SpaceForm) -> Result<Frame> {
    let d = sf.ambient_dim();
    if jet.nrows() != d {
        return Err(Error::Dimension { expected: d, got: jet.nrows() });
    }
    let gamma = jet.column(0).into_owned();
    let picks: Vec<DVector<f64>> = ty.as_slice().iter().map(|&a| jet.column(a as usize).into_owned()).collect();
    let mut cols: Vec<DVector<f64>> = match sf.kind() {
        GeometryKind::Euclidean => {
            let spatial: Vec<DVector<f64>> = picks.iter().map(|v| v.rows(1, d - 1).into_owned()).collect();
            let q = gram_schmidt_signed(&spatial, &AmbientForm::euclidean(d - 1), &[])
                .map_err(|e| shift_index(e, 1))?;
            let mut cols = vec![gamma];
            for v in q {
                let mut full = DVector::zeros(d);
                full.rows_mut(1, d - 1).copy_from(&v);
                cols.push(full);
            }
            cols
        }
        _ => {
            let mut all = vec![gamma];
            all.extend(picks);
            gram_schmidt_signed(&all, &sf.form(), &[])?
        }
    };
    let m = DMatrix::from_columns(&cols);
    if m.determinant() < 0.0 {
        let last = cols.len() - 1;
        cols[last] = -cols[last].clone();
    }
    Frame::from_columns(*sf, &cols)
}

fn shift_index(e: Error, by: usize) -> Error {
    match e {
        Error::Degenerate { index } => Error::Degenerate { index: index + by },
        other => other,
    }
}

/// Osculating frame at `t` together with its first parameter derivative.
/// At ordinary points the derivative is exact in the jets; at special points
/// it falls back to a central difference of the frame field.
pub fn osculating_frame_with_derivative(
    curve: &dyn CurveJets,
    t: f64,
    sf: &SpaceForm,
    r_max: usize,
    rank_tol: f64,
) -> Result<(Frame, DMatrix<f64>)> {
    let ty = detect_type(curve, t, r_max, rank_tol)?.ty;
    let top = ty.last() as usize;
    let jet = curve.jet(t, top + 1)?.to_float();
    let frame = frame_from_jet(&jet, &ty, sf)?;
    if !ty.is_ordinary() {
        let h = 1e-5;
        let mut fp = osculating_frame(curve, t + h, sf, r_max, rank_tol)?.matrix().clone();
        let mut fm = osculating_frame(curve, t - h, sf, r_max, rank_tol)?.matrix().clone();
        align_columns(frame.matrix(), &mut fp, sf);
        align_columns(frame.matrix(), &mut fm, sf);
        return Ok((frame, (fp - fm) / (2.0 * h)));
    }
    let d = sf.ambient_dim();
    let e = frame.matrix();
    let e_inv = e.clone().try_inverse().ok_or(Error::Degenerate { index: d - 1 })?;
    let a = DMatrix::from_columns(&(0..d).map(|k| jet.column(k).into_owned()).collect::<Vec<_>>());
    let a_next = DMatrix::from_columns(&(1..=d).map(|k| jet.column(k).into_owned()).collect::<Vec<_>>());
    let r = &e_inv * &a;
    let r_inv = r.try_inverse().ok_or(Error::Degenerate { index: d - 1 })?;
    let x = &e_inv * a_next * r_inv;
    // K = E⁻¹E′ agrees with X below the diagonal; the rest follows from the
    // frame constraints.
    let form = sf.form();
    let mut k = DMatrix::zeros(d, d);
    for j in 0..d {
        for i in j + 1..d {
            k[(i, j)] = x[(i, j)];
            k[(j, i)] = match (sf.kind(), j) {
                (GeometryKind::Euclidean, 0) => 0.0,
                _ => -form.sign(i) * form.sign(j) * x[(i, j)],
            };
        }
    }
    Ok((frame.clone(), e * k))
}

fn align_columns(reference: &DMatrix<f64>, m: &mut DMatrix<f64>, sf: &SpaceForm) {
    align_columns_with(reference, m, &mut [], sf);
}

fn align_columns_with(reference: &DMatrix<f64>, m: &mut DMatrix<f64>, extra: &mut [&mut DMatrix<f64>], sf: &SpaceForm) {
    for k in 1..m.ncols() {
        let dot = sf.metric_dot(reference.column(k).as_slice(), m.column(k).as_slice());
        if dot < 0.0 {
            m.column_mut(k).neg_mut();
            for x in extra.iter_mut() {
                x.column_mut(k).neg_mut();
            }
        }
    }
}

/// Osculating frames on a grid, with column signs propagated continuously
/// from the first node so the field stays smooth through special points.
pub fn osculating_frame_field(
    curve: &dyn CurveJets,
    grid: &[f64],
    sf: &SpaceForm,
    r_max: usize,
    rank_tol: f64,
) -> Result<FrameField> {
    let mut frames: Vec<DMatrix<f64>> = Vec::with_capacity(grid.len());
    let mut derivs: Vec<DMatrix<f64>> = Vec::with_capacity(grid.len());
    for &t in grid {
        let (f, mut d) = osculating_frame_with_derivative(curve, t, sf, r_max, rank_tol)?;
        let mut m = f.matrix().clone();
        if let Some(prev) = frames.last() {
            align_columns_with(prev, &mut m, &mut [&mut d], sf);
        }
        frames.push(m);
        derivs.push(d);
    }
    let h = 1e-4;
    let mut second = Vec::with_capacity(grid.len());
    for (i, &t) in grid.iter().enumerate() {
        let (fp, mut dp) = osculating_frame_with_derivative(curve, t + h, sf, r_max, rank_tol)?;
        let (fm, mut dm) = osculating_frame_with_derivative(curve, t - h, sf, r_max, rank_tol)?;
        let mut fp = fp.matrix().clone();
        let mut fm = fm.matrix().clone();
        align_columns_with(&frames[i], &mut fp, &mut [&mut dp], sf);
        align_columns_with(&frames[i], &mut fm, &mut [&mut dm], sf);
        second.push((dp - dm) / (2.0 * h));
    }
    FrameField::new(*sf, grid.to_vec(), frames, derivs, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ClosedFormCurve, PolyCurve};

    #[test]
    fn monomial_frame_is_identity() {
        let sf = SpaceForm::euclidean(2);
        let f = osculating_frame(&PolyCurve::monomial(&[1, 2, 3]), 0.0, &sf, 8, 1e-8).unwrap();
        assert!((f.matrix() - DMatrix::identity(4, 4)).amax() < 1e-15);
    }

    #[test]
    fn helix_principal_normal() {
        let sf = SpaceForm::euclidean(2);
        let helix = ClosedFormCurve::helix();
        for t in [0.0, 0.4, 2.0] {
            let f = osculating_frame(&helix, t, &sf, 8, 1e-8).unwrap();
            let u = t * std::f64::consts::FRAC_1_SQRT_2;
            let e2 = f.column(2);
            assert!((e2[1] + u.cos()).abs() < 1e-12 && (e2[2] + u.sin()).abs() < 1e-12 && e2[3].abs() < 1e-12);
            assert!(f.determinant() > 0.0);
        }
    }

    #[test]
    fn special_point_field_is_continuous() {
        let sf = SpaceForm::euclidean(2);
        let c = PolyCurve::monomial(&[1, 3, 4]);
        let grid: Vec<f64> = (-4..=4).map(|i| i as f64 * 0.01).collect();
        let field = osculating_frame_field(&c, &grid, &sf, 8, 1e-8).unwrap();
        for i in 1..field.len() {
            assert!((field.matrix(i) - field.matrix(i - 1)).amax() < 0.05);
        }
        assert!(field.max_gram_defect() < 1e-12);
    }

    #[test]
    fn analytic_derivative_matches_difference() {
        let sf = SpaceForm::euclidean(2);
        let helix = ClosedFormCurve::helix();
        let (_, d) = osculating_frame_with_derivative(&helix, 0.3, &sf, 8, 1e-8).unwrap();
        let h = 1e-5;
        let fp = osculating_frame(&helix, 0.3 + h, &sf, 8, 1e-8).unwrap();
        let fm = osculating_frame(&helix, 0.3 - h, &sf, 8, 1e-8).unwrap();
        let fd = (fp.matrix() - fm.matrix()) / (2.0 * h);
        assert!((d - fd).amax() < 1e-8);
    }
}
