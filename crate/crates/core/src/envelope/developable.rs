use nalgebra::DVector;
use rayon::prelude::*;

use super::{EnvelopeMesh, VertexMark};
use crate::curve::CurveJets;
use crate::error::{Error, Result};
use crate::jets::{detect_type, rank_float};
use crate::spaceform::{GeometryKind, SpaceForm};

/// Tangent geodesic at `t`: base point and unit direction of the first
/// derivative independent of `γ`, plus whether the curve is of finite type there.
fn tangent_at(curve: &dyn CurveJets, sf: &SpaceForm, t: f64, r_max: usize, rank_tol: f64) -> Result<(DVector<f64>, DVector<f64>, bool)> {
    let jet = curve.jet(t, r_max)?.to_float();
    let finite = match detect_type(curve, t, r_max, rank_tol) {
        Ok(_) => true,
        Err(Error::FiniteType { .. }) => false,
        Err(e) => return Err(e),
    };
    let gamma = jet.column(0).into_owned();
    let a1 = (1..=r_max)
        .find(|&k| rank_float(&jet.select_columns(&[0, k]), rank_tol).0 == 2)
        .ok_or(Error::FiniteType { r_max, rank: 1 })?;
    let v = jet.column(a1).into_owned();
    let d = sf.ambient_dim();
    let dir = match sf.kind() {
        GeometryKind::Euclidean => {
            let mut w = v.clone();
            w[0] = 0.0;
            let n = w.norm();
            w / n
        }
        _ => {
            let form = sf.form();
            let gg = form.dot_unchecked(gamma.as_slice(), gamma.as_slice());
            let w = &v - &gamma * (form.dot_unchecked(gamma.as_slice(), v.as_slice()) / gg);
            let q = form.dot_unchecked(w.as_slice(), w.as_slice());
            if q <= 0.0 {
                return Err(Error::Degenerate { index: a1.min(d - 1) });
            }
            w / q.sqrt()
        }
    };
    Ok((gamma, dir, finite))
}

/// The union of tangent geodesics `s ↦ exp_{γ(t)}(s·T)` over the grid.
/// Nodes where the curve is not of finite type are kept but marked degenerate.
pub fn tangent_developable_mesh(
    curve: &dyn CurveJets,
    sf: &SpaceForm,
    t_grid: &[f64],
    s_grid: &[f64],
    r_max: usize,
    rank_tol: f64,
) -> Result<EnvelopeMesh> {
    if curve.ambient_dim() != sf.ambient_dim() {
        return Err(Error::Dimension { expected: sf.ambient_dim(), got: curve.ambient_dim() });
    }
    let strips: Vec<(DVector<f64>, DVector<f64>, bool)> =
        t_grid.par_iter().map(|&t| tangent_at(curve, sf, t, r_max, rank_tol)).collect::<Result<_>>()?;
    let mut mesh = EnvelopeMesh {
        kind: sf.kind(),
        vertices: Vec::with_capacity(t_grid.len() * s_grid.len()),
        faces: Vec::new(),
        params: Vec::new(),
        residuals: None,
        marks: Vec::new(),
        degenerate_params: Vec::new(),
    };
    for (&t, (g, dir, finite)) in t_grid.iter().zip(&strips) {
        for &s in s_grid {
            let x = match sf.kind() {
                GeometryKind::Euclidean => g + dir * s,
                GeometryKind::Spherical => g * s.cos() + dir * s.sin(),
                GeometryKind::Hyperbolic => g * s.cosh() + dir * s.sinh(),
            };
            mesh.vertices.push(x);
            mesh.params.push((t, s));
            mesh.marks.push(if *finite { VertexMark::Regular } else { VertexMark::Degenerate });
        }
    }
    let nodes: Vec<usize> = (0..t_grid.len()).collect();
    mesh.faces = EnvelopeMesh::strips_to_faces(&nodes, s_grid.len());
    Ok(mesh)
}
