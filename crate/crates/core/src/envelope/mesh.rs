use nalgebra::{DVector, Matrix2, Vector2};
use rayon::prelude::*;

use super::{EnvelopeMesh, HyperplaneFamily, VertexMark};
use crate::error::{Error, Result};
use crate::frames::cross_complement;
use crate::spaceform::{GeometryKind, SpaceForm};

/// Rank threshold for the pair of incidence conditions at a node.
pub(crate) const RANK_TOL: f64 = 1e-10;

/// The solution set at one node: a line, circle or hyperbola through `foot`
/// with unit tangent `dir` there.
#[derive(Clone, Debug)]
pub(crate) struct SolutionCurve {
    pub kind: GeometryKind,
    pub foot: DVector<f64>,
    pub dir: DVector<f64>,
}

impl SolutionCurve {
    pub fn at(&self, s: f64) -> DVector<f64> {
        match self.kind {
            GeometryKind::Euclidean => &self.foot + &self.dir * s,
            GeometryKind::Spherical => &self.foot * s.cos() + &self.dir * s.sin(),
            GeometryKind::Hyperbolic => &self.foot * s.cosh() + &self.dir * s.sinh(),
        }
    }
}

fn form_dot(sf: &SpaceForm, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    sf.form().dot_unchecked(u.as_slice(), v.as_slice())
}

/// Solves `F = F_t = 0` at node `i`; `None` when the system drops rank or
/// has no real solution on the model.
pub(crate) fn solve_node(fam: &HyperplaneFamily, i: usize) -> Option<SolutionCurve> {
    let sf = fam.sf;
    let d = sf.ambient_dim();
    let (e0, e1) = (&fam.e[i][0], &fam.e[i][1]);
    let reference = fam.points.as_ref().map(|p| p[i].clone());
    match sf.kind() {
        GeometryKind::Euclidean => {
            let v = e0.rows(1, d - 1).into_owned();
            let w = e1.rows(1, d - 1).into_owned();
            let dir = v.cross(&w);
            let scale = v.norm() * w.norm().max(1.0);
            if dir.norm() <= RANK_TOL * scale.max(f64::MIN_POSITIVE) || d != 4 {
                return None;
            }
            let p = reference.map(|x| x.rows(1, d - 1).into_owned()).unwrap_or_else(|| DVector::zeros(d - 1));
            let g = Matrix2::new(v.dot(&v), v.dot(&w), w.dot(&v), w.dot(&w));
            let b = Vector2::new(-fam.r[i][0] - v.dot(&p), -fam.r[i][1] - w.dot(&p));
            let c = g.try_inverse()? * b;
            let x = p + &v * c[0] + &w * c[1];
            let mut foot = DVector::zeros(d);
            foot[0] = 1.0;
            foot.rows_mut(1, d - 1).copy_from(&x);
            let mut full = DVector::zeros(d);
            full.rows_mut(1, d - 1).copy_from(&(dir.normalize()));
            Some(SolutionCurve { kind: sf.kind(), foot, dir: full })
        }
        GeometryKind::Spherical | GeometryKind::Hyperbolic => {
            let g = Matrix2::new(form_dot(&sf, e0, e0), form_dot(&sf, e0, e1), form_dot(&sf, e1, e0), form_dot(&sf, e1, e1));
            // the orthogonal plane carries a circle/hyperbola only if span{ê, ê′} is spacelike
            if g.determinant() <= RANK_TOL * g.amax().max(1.0) || g[(0, 0)] <= 0.0 {
                return None;
            }
            let gi = g.try_inverse()?;
            let project = |x: &DVector<f64>| {
                let b = Vector2::new(form_dot(&sf, e0, x), form_dot(&sf, e1, x));
                let c = gi * b;
                x - e0 * c[0] - e1 * c[1]
            };
            let start = reference.unwrap_or_else(|| {
                let mut x = DVector::zeros(d);
                x[0] = 1.0;
                x
            });
            let mut foot = project(&start);
            let mut q = form_dot(&sf, &foot, &foot);
            let want = if sf.kind() == GeometryKind::Spherical { 1.0 } else { -1.0 };
            if q * want <= RANK_TOL {
                // pick any suitable vector in the plane
                foot = (0..d)
                    .map(|k| {
                        let mut x = DVector::zeros(d);
                        x[k] = 1.0;
                        project(&x)
                    })
                    .find(|x| form_dot(&sf, x, x) * want > 1e-6)?;
                q = form_dot(&sf, &foot, &foot);
            }
            foot /= (q * want).sqrt();
            if sf.kind() == GeometryKind::Hyperbolic && foot[0] < 0.0 {
                foot = -foot;
            }
            let mut dir = cross_complement(&[e0.clone(), e1.clone(), foot.clone()], &sf.form());
            let qd = form_dot(&sf, &dir, &dir);
            if qd <= RANK_TOL {
                return None;
            }
            dir /= qd.sqrt();
            Some(SolutionCurve { kind: sf.kind(), foot, dir })
        }
    }
}

/// Solution curves at every node, with line orientations made continuous.
pub(crate) fn solve_nodes(fam: &HyperplaneFamily) -> Vec<Option<SolutionCurve>> {
    let mut sols: Vec<Option<SolutionCurve>> = (0..fam.len()).into_par_iter().map(|i| solve_node(fam, i)).collect();
    let mut prev: Option<DVector<f64>> = None;
    for sol in sols.iter_mut().flatten() {
        if let Some(p) = &prev {
            if sol.dir.dot(p) < 0.0 {
                sol.dir = -&sol.dir;
            }
        }
        prev = Some(sol.dir.clone());
    }
    sols
}

/// Meshes the envelope of `fam` with strips parametrized by signed arc length
/// `s` from the foot point nearest the reference curve.
pub fn envelope_mesh(fam: &HyperplaneFamily, s_grid: &[f64], tol: f64) -> Result<EnvelopeMesh> {
    if fam.sf.ambient_dim() != 4 {
        return Err(Error::Config("envelope meshes require n = 2".into()));
    }
    let sols = solve_nodes(fam);
    let mut mesh = EnvelopeMesh {
        kind: fam.sf.kind(),
        vertices: Vec::new(),
        faces: Vec::new(),
        params: Vec::new(),
        residuals: Some(Vec::new()),
        marks: Vec::new(),
        degenerate_params: Vec::new(),
    };
    let mut strip_nodes = Vec::new();
    let mut residuals = Vec::new();
    for (i, sol) in sols.iter().enumerate() {
        let Some(sol) = sol else {
            mesh.degenerate_params.push(fam.t[i]);
            continue;
        };
        strip_nodes.push(i);
        for &s in s_grid {
            let x = sol.at(s);
            let [f, ft, ftt] = fam.incidence(i, x.as_slice());
            mesh.marks.push(if ftt.abs() <= tol { VertexMark::SingularLocus } else { VertexMark::Regular });
            residuals.push([f, ft]);
            mesh.params.push((fam.t[i], s));
            mesh.vertices.push(x);
        }
    }
    if strip_nodes.is_empty() {
        return Err(Error::DegenerateEnvelope(format!("incidence rank < 2 at all {} nodes", fam.len())));
    }
    mesh.residuals = Some(residuals);
    mesh.faces = EnvelopeMesh::strips_to_faces(&strip_nodes, s_grid.len());
    Ok(mesh)
}
