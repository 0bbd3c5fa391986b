//! Envelopes of tangent-hyperplane families, normal-form discriminants,
//! tangent developables and singular loci, with mesh export.

mod developable;
mod discriminant;
mod export;
mod locus;
mod mesh;

pub use developable::tangent_developable_mesh;
pub use discriminant::{discriminant_mesh, discriminant_point_exact, NormalFormFamily};
pub use export::{project_point, write_atomic, write_locus_obj, write_mesh_obj, Projection};
pub use locus::{singular_locus, LocusSource, Polyline};
pub use mesh::envelope_mesh;

use nalgebra::DVector;
use serde::Serialize;

use crate::frames::FrameField;
use crate::spaceform::{GeometryKind, Hyperplane, SpaceForm};

/// Default half-width of the `s` window around the foot point.
pub const DEFAULT_S_WINDOW: f64 = 1.5;

/// Tangent hyperplanes `x·ê(t) + r(t) = 0` with two parameter derivatives.
/// `r` vanishes identically outside the Euclidean case.
#[derive(Clone, Debug)]
pub struct HyperplaneFamily {
    pub sf: SpaceForm,
    pub t: Vec<f64>,
    pub e: Vec<[DVector<f64>; 3]>,
    pub r: Vec<[f64; 3]>,
    /// Reference points `γ(t)` used to pick the foot point of each solution line.
    pub points: Option<Vec<DVector<f64>>>,
}

impl HyperplaneFamily {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn hyperplane(&self, i: usize) -> Hyperplane {
        Hyperplane::new(self.e[i][0].clone(), self.r[i][0])
    }

    /// `(F, F_t, F_tt)` at an ambient point for node `i`.
    pub fn incidence(&self, i: usize, x: &[f64]) -> [f64; 3] {
        let f = |k: usize| self.sf.metric_dot(x, self.e[i][k].as_slice()) + self.r[i][k];
        [f(0), f(1), f(2)]
    }

    /// Samples an analytic family `t ↦ ([ê, ê′, ê″], [r, r′, r″])`.
    pub fn from_fn(sf: SpaceForm, grid: &[f64], f: impl Fn(f64) -> ([DVector<f64>; 3], [f64; 3])) -> Self {
        let (e, r) = grid.iter().map(|&t| f(t)).unzip();
        Self { sf, t: grid.to_vec(), e, r, points: None }
    }
}

/// The family of hyperplanes conormal to `e_{n+1}` along a framed curve.
pub fn hyperplane_family(field: &FrameField) -> HyperplaneFamily {
    let sf = field.space_form();
    let last = sf.ambient_dim() - 1;
    let mut e = Vec::with_capacity(field.len());
    let mut r = Vec::with_capacity(field.len());
    let mut points = Vec::with_capacity(field.len());
    for i in 0..field.len() {
        let (m, d, dd) = (field.matrix(i), field.derivative(i), field.second_derivative(i));
        let ek = [m.column(last).into_owned(), d.column(last).into_owned(), dd.column(last).into_owned()];
        let g = [m.column(0).into_owned(), d.column(0).into_owned(), dd.column(0).into_owned()];
        let rk = if sf.kind() == GeometryKind::Euclidean {
            let dot = |a: usize, b: usize| sf.metric_dot(g[a].as_slice(), ek[b].as_slice());
            [-dot(0, 0), -(dot(1, 0) + dot(0, 1)), -(dot(2, 0) + 2.0 * dot(1, 1) + dot(0, 2))]
        } else {
            [0.0; 3]
        };
        e.push(ek);
        r.push(rk);
        points.push(g[0].clone());
    }
    HyperplaneFamily { sf, t: field.params().to_vec(), e, r, points: Some(points) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexMark {
    Regular,
    SingularLocus,
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct EnvelopeMesh {
    pub kind: GeometryKind,
    /// Ambient model points (Euclidean points carry leading coordinate 1).
    pub vertices: Vec<DVector<f64>>,
    /// Quads of 0-based vertex indices.
    pub faces: Vec<[usize; 4]>,
    pub params: Vec<(f64, f64)>,
    /// `(F, F_t)` per vertex; absent for surfaces not built from a family.
    pub residuals: Option<Vec<[f64; 2]>>,
    pub marks: Vec<VertexMark>,
    /// Parameters of nodes excluded because the incidence system drops rank.
    pub degenerate_params: Vec<f64>,
}

impl EnvelopeMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals
            .as_ref()
            .map(|r| r.iter().flat_map(|x| x.iter()).fold(0.0f64, |m, v| m.max(v.abs())))
            .unwrap_or(0.0)
    }

    pub fn max_model_residual(&self) -> f64 {
        let sf = SpaceForm::new(self.kind, 2).expect("n = 2 is valid");
        self.vertices.iter().fold(0.0f64, |m, v| m.max(sf.model_residual(v.as_slice()).abs()))
    }

    /// Quads assembled from consecutive strips of `ns` vertices each; strips
    /// whose node indices are not adjacent are not joined.
    fn strips_to_faces(strip_nodes: &[usize], ns: usize) -> Vec<[usize; 4]> {
        let mut faces = Vec::new();
        for k in 1..strip_nodes.len() {
            if strip_nodes[k] != strip_nodes[k - 1] + 1 {
                continue;
            }
            let (a, b) = ((k - 1) * ns, k * ns);
            for j in 0..ns.saturating_sub(1) {
                faces.push([a + j, b + j, b + j + 1, a + j + 1]);
            }
        }
        faces
    }
}

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;

    use super::*;
    use crate::curve::{ClosedFormCurve, PolyCurve};
    use crate::error::Error;
    use crate::frames::osculating_frame_field;
    use crate::jets::TypeVector;
    use crate::poly::Poly;
    use crate::scalar::rat;

    fn cols(c: [[f64; 4]; 4]) -> DMatrix<f64> {
        DMatrix::from_fn(4, 4, |i, j| c[j][i])
    }

    fn circle_field(grid: &[f64]) -> FrameField {
        FrameField::circle_radial(grid)
    }

    fn grid(n: usize, a: f64, b: f64) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn circle_family_values() {
        let fam = hyperplane_family(&circle_field(&[0.3]));
        assert!((fam.r[0][0] + 1.0).abs() < 1e-15);
        assert!((&fam.e[0][0] - DVector::from_vec(vec![0.0, 0.3f64.cos(), 0.3f64.sin(), 0.0])).amax() < 1e-15);
    }

    #[test]
    fn circle_envelope_is_cylinder() {
        let fam = hyperplane_family(&circle_field(&grid(40, 0.0, 6.0)));
        let mesh = envelope_mesh(&fam, &grid(11, -1.5, 1.5), 1e-9).unwrap();
        for v in &mesh.vertices {
            assert!((v[1].hypot(v[2]) - 1.0).abs() < 1e-12);
        }
        assert!(mesh.max_residual() < 1e-12);
        assert!(mesh.degenerate_params.is_empty());
        assert!(singular_locus(LocusSource::Family(&fam), (-1.5, 1.5), 1e-9).is_empty());
    }

    #[test]
    fn constant_conormal_is_degenerate() {
        let fam = HyperplaneFamily::from_fn(SpaceForm::euclidean(2), &grid(5, 0.0, 1.0), |_| {
            ([DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]), DVector::zeros(4), DVector::zeros(4)], [0.0; 3])
        });
        assert!(matches!(envelope_mesh(&fam, &[0.0, 1.0], 1e-9), Err(Error::DegenerateEnvelope(_))));
    }

    #[test]
    fn helix_envelope_is_tangent_developable() {
        let sf = SpaceForm::euclidean(2);
        let helix = ClosedFormCurve::helix();
        let ts = grid(30, -1.0, 1.0);
        let field = osculating_frame_field(&helix, &ts, &sf, 6, 1e-8).unwrap();
        let mesh = envelope_mesh(&hyperplane_family(&field), &grid(7, -1.0, 1.0), 1e-9).unwrap();
        let dev = tangent_developable_mesh(&helix, &sf, &ts, &grid(7, -1.0, 1.0), 6, 1e-8).unwrap();
        let worst = mesh
            .vertices
            .iter()
            .zip(&mesh.params)
            .map(|(v, &(t, s))| {
                let i = ts.iter().position(|&x| x == t).unwrap();
                let j = (s + 1.0) / (2.0 / 6.0);
                let k = 6 - j.round() as usize;
                (v - &dev.vertices[i * 7 + j.round() as usize]).amax().min((v - &dev.vertices[i * 7 + k]).amax())
            })
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-10, "{worst}");
        assert!(mesh.max_residual() < 1e-12);
    }

    #[test]
    fn spherical_and_hyperbolic_models() {
        for sf in [SpaceForm::spherical(2), SpaceForm::hyperbolic(2)] {
            let hyp = sf.kind() == GeometryKind::Hyperbolic;
            let field = FrameField::from_fn(sf, &grid(9, 0.0, 1.0), |t| {
                let (s, c) = t.sin_cos();
                let (g, dg) = if hyp { ([t.cosh(), t.sinh(), 0.0, 0.0], [t.sinh(), t.cosh(), 0.0, 0.0]) } else { ([c, s, 0.0, 0.0], [-s, c, 0.0, 0.0]) };
                let e = cols([g, dg, [0.0, 0.0, -s, c], [0.0, 0.0, c, s]]);
                let d = cols([dg, g, [0.0, 0.0, -c, -s], [0.0, 0.0, -s, c]]);
                let dd = cols([g, dg, [0.0, 0.0, s, -c], [0.0, 0.0, -c, -s]]);
                (e, d, dd)
            });
            let mesh = envelope_mesh(&hyperplane_family(&field), &grid(7, -1.5, 1.5), 1e-9).unwrap();
            assert!(mesh.max_model_residual() < 1e-10);
            assert!(mesh.max_residual() < 1e-12);
            for v in &mesh.vertices {
                assert!(v[2].abs() < 1e-12 && v[3].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cuspidal_edge_locus() {
        let nf = NormalFormFamily::new(TypeVector::new(vec![1, 2, 3]).unwrap()).unwrap();
        let ts = grid(11, -1.0, 1.0);
        let lines = singular_locus(LocusSource::NormalForm { nf: &nf, t_grid: &ts }, (-2.0, 2.0), 1e-12);
        assert_eq!(lines.len(), 1);
        for &(t, s) in &lines[0].params {
            assert!((s + t).abs() < 1e-14);
        }
        let nf = NormalFormFamily::new(TypeVector::new(vec![2, 3, 4]).unwrap()).unwrap();
        let lines = singular_locus(LocusSource::NormalForm { nf: &nf, t_grid: &ts }, (-2.0, 2.0), 1e-12);
        assert!(lines.iter().flat_map(|l| &l.points).any(|p| p.rows(1, 3).amax() < 1e-14));
    }

    #[test]
    fn developable_lies_on_discriminant() {
        let sf = SpaceForm::euclidean(2);
        let edge = PolyCurve::new(vec![
            Poly::constant(rat(1, 1)),
            Poly::new(vec![rat(0, 1), rat(-1, 1)]),
            Poly::new(vec![rat(0, 1), rat(0, 1), rat(1, 2)]),
            Poly::new(vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(-1, 6)]),
        ]);
        let nf = NormalFormFamily::new(TypeVector::new(vec![1, 2, 3]).unwrap()).unwrap();
        let dev = tangent_developable_mesh(&edge, &sf, &grid(9, -1.0, 1.0), &grid(5, -1.0, 1.0), 6, 1e-8).unwrap();
        for (v, &(t, _)) in dev.vertices.iter().zip(&dev.params) {
            let x = [v[1], v[2], v[3]];
            assert!(nf.derivative(0, &t, &x).abs() < 1e-14 && nf.derivative(1, &t, &x).abs() < 1e-14);
        }
    }

    #[test]
    fn obj_export() {
        let nf = NormalFormFamily::new(TypeVector::new(vec![1, 2, 3]).unwrap()).unwrap();
        let mesh = discriminant_mesh(&nf, &grid(3, -1.0, 1.0), &grid(4, -1.0, 1.0), 1e-12);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.obj");
        write_mesh_obj(&mesh, &path, true).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 12);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 12);
        assert_eq!(text.lines().filter(|l| l.starts_with("# param ")).count(), 12);
        assert_eq!(text.lines().filter(|l| l.starts_with("# ambient ")).count(), 12);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let lines = singular_locus(LocusSource::NormalForm { nf: &nf, t_grid: &grid(5, -1.0, 1.0) }, (-2.0, 2.0), 1e-12);
        let lpath = dir.path().join("l.obj");
        write_locus_obj(&lines, GeometryKind::Euclidean, &lpath).unwrap();
        let text = std::fs::read_to_string(&lpath).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("l ")).count(), 4);
        assert!(text.contains("l 1 2"));
    }
}
