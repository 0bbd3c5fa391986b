use nalgebra::DVector;

use super::{EnvelopeMesh, VertexMark};
use crate::error::{Error, Result};
use crate::jets::TypeVector;
use crate::scalar::{factorial, Rational, Scalar};
use crate::spaceform::GeometryKind;

/// `F(t, x) = t^{a₃}/a₃! + x₁t^{a₃−a₁}/(a₃−a₁)! + x₂t^{a₃−a₂}/(a₃−a₂)! + x₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormFamily {
    pub a: TypeVector,
}

fn pow<T: Scalar>(t: &T, k: u32) -> T {
    (0..k).fold(T::one(), |acc, _| acc * t.clone())
}

/// `d^m/dt^m (t^k/k!)`.
fn monomial_derivative<T: Scalar>(t: &T, k: u32, m: u32) -> T {
    if m > k {
        return T::zero();
    }
    pow(t, k - m) / T::from_rational(&factorial(k - m))
}

impl NormalFormFamily {
    pub fn new(a: TypeVector) -> Result<Self> {
        if a.n() != 2 {
            return Err(Error::InvalidType(format!("normal forms need three entries, got {a}")));
        }
        Ok(Self { a })
    }

    fn exponents(&self) -> [u32; 4] {
        let [a1, a2, a3] = [self.a.as_slice()[0], self.a.as_slice()[1], self.a.as_slice()[2]];
        [a3, a3 - a1, a3 - a2, 0]
    }

    /// The `m`-th `t`-derivative of `F`.
    pub fn derivative<T: Scalar>(&self, m: u32, t: &T, x: &[T; 3]) -> T {
        let k = self.exponents();
        monomial_derivative(t, k[0], m)
            + x[0].clone() * monomial_derivative(t, k[1], m)
            + x[1].clone() * monomial_derivative(t, k[2], m)
            + x[2].clone() * monomial_derivative(t, k[3], m)
    }

    /// The point of `{F = F_t = 0}` over `t` with `x₁ = s`.
    pub fn discriminant_point<T: Scalar>(&self, t: &T, s: &T) -> [T; 3] {
        let [a1, a2, a3] = [self.a.as_slice()[0], self.a.as_slice()[1], self.a.as_slice()[2]];
        let f = |k: u32| T::from_rational(&factorial(k));
        // F_t = 0 divided through by t^{a₃−a₂−1}, which also covers t = 0
        let x2 = -(f(a3 - a2 - 1))
            * (pow(t, a2) / f(a3 - 1) + s.clone() * pow(t, a2 - a1) / f(a3 - a1 - 1));
        let x3 = -(pow(t, a3) / f(a3) + s.clone() * pow(t, a3 - a1) / f(a3 - a1) + x2.clone() * pow(t, a3 - a2) / f(a3 - a2));
        [s.clone(), x2, x3]
    }
}

/// Exact discriminant point, for oracle comparisons.
pub fn discriminant_point_exact(nf: &NormalFormFamily, t: &Rational, s: &Rational) -> [Rational; 3] {
    nf.discriminant_point(t, s)
}

/// Meshes `{F = F_t = 0}` with `x₁ = s`. Vertices are written in the
/// Euclidean model as `(1, x₁, x₂, x₃)`.
pub fn discriminant_mesh(nf: &NormalFormFamily, t_grid: &[f64], s_grid: &[f64], tol: f64) -> EnvelopeMesh {
    let mut vertices = Vec::with_capacity(t_grid.len() * s_grid.len());
    let mut params = Vec::with_capacity(vertices.capacity());
    let mut residuals = Vec::with_capacity(vertices.capacity());
    let mut marks = Vec::with_capacity(vertices.capacity());
    for &t in t_grid {
        for &s in s_grid {
            let x = nf.discriminant_point(&t, &s);
            residuals.push([nf.derivative(0, &t, &x), nf.derivative(1, &t, &x)]);
            let ftt = nf.derivative(2, &t, &x);
            marks.push(if ftt.abs() <= tol { VertexMark::SingularLocus } else { VertexMark::Regular });
            params.push((t, s));
            vertices.push(DVector::from_vec(vec![1.0, x[0], x[1], x[2]]));
        }
    }
    let nodes: Vec<usize> = (0..t_grid.len()).collect();
    EnvelopeMesh {
        kind: GeometryKind::Euclidean,
        faces: EnvelopeMesh::strips_to_faces(&nodes, s_grid.len()),
        vertices,
        params,
        residuals: Some(residuals),
        marks,
        degenerate_params: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn nf(a: [u32; 3]) -> NormalFormFamily {
        NormalFormFamily::new(TypeVector::new(a.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn spot_values() {
        let p = discriminant_point_exact(&nf([1, 2, 3]), &rat(1, 1), &rat(0, 1));
        assert_eq!(p, [rat(0, 1), rat(-1, 2), rat(1, 3)]);
        let p = discriminant_point_exact(&nf([2, 3, 4]), &rat(1, 1), &rat(0, 1));
        assert_eq!(p, [rat(0, 1), rat(-1, 6), rat(1, 8)]);
        for a in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 2, 5]] {
            let p = discriminant_point_exact(&nf(a), &rat(0, 1), &rat(3, 7));
            assert_eq!(p, [rat(3, 7), rat(0, 1), rat(0, 1)]);
        }
    }

    #[test]
    fn exact_points_satisfy_both_equations() {
        for a in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 2, 5], [3, 4, 5]] {
            let f = nf(a);
            for (t, s) in [(rat(1, 2), rat(-3, 1)), (rat(-5, 3), rat(2, 9))] {
                let x = f.discriminant_point(&t, &s);
                assert_eq!(f.derivative(0, &t, &x), rat(0, 1));
                assert_eq!(f.derivative(1, &t, &x), rat(0, 1));
            }
        }
    }

    #[test]
    fn mesh_layout() {
        let t: Vec<f64> = (0..5).map(|i| i as f64 * 0.25 - 0.5).collect();
        let s: Vec<f64> = (0..3).map(|i| i as f64 - 1.0).collect();
        let m = discriminant_mesh(&nf([1, 2, 3]), &t, &s, 1e-12);
        assert_eq!(m.vertex_count(), 15);
        assert_eq!(m.faces.len(), 8);
        assert!(m.max_residual() < 1e-15);
        // F_tt = t + x₁ vanishes on s = −t
        let sing: Vec<(f64, f64)> = m.params.iter().zip(&m.marks).filter(|(_, &k)| k == VertexMark::SingularLocus).map(|(p, _)| *p).collect();
        assert_eq!(sing, vec![(0.0, 0.0)]);
    }
}
