use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::spaceform::{AmbientForm, Signature};

/// Relative size below which a projected vector counts as null.
const DEGENERACY_TOL: f64 = 1e-12;

/// Signed Gram–Schmidt: orthonormalizes `vectors` for `form`, keeping the
/// flag of leading spans. Vector `i` is expected to have square `form.sign(i)`
/// after projection (timelike first in the Lorentz case); `orientation[i] < 0`
/// flips the output vector.
pub fn gram_schmidt_signed(vectors: &[DVector<f64>], form: &AmbientForm, orientation: &[f64]) -> Result<Vec<DVector<f64>>> {
    let dim = form.dimension();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    let mut squares: Vec<f64> = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::Dimension { expected: dim, got: v.len() });
        }
        let mut w = v.clone();
        // two passes keep the projection accurate for nearly dependent inputs
        for _ in 0..2 {
            for (u, &e) in out.iter().zip(&squares) {
                let c = form.dot_unchecked(w.as_slice(), u.as_slice()) * e;
                w.axpy(-c, u, 1.0);
            }
        }
        let q = form.dot_unchecked(w.as_slice(), w.as_slice());
        let scale = v.norm_squared().max(f64::MIN_POSITIVE);
        let expected = match form.signature() {
            Signature::PositiveDefinite => 1.0,
            Signature::Lorentz => form.sign(i.min(dim - 1)),
        };
        if q.abs() <= DEGENERACY_TOL * scale || q.signum() != expected {
            return Err(Error::Degenerate { index: i });
        }
        w /= q.abs().sqrt();
        if orientation.get(i).is_some_and(|&s| s < 0.0) {
            w = -w;
        }
        squares.push(expected);
        out.push(w);
    }
    Ok(out)
}

/// Generalized cross product: the vector `w` with `w·x = det[v₀, …, v_{d−2}, x]`
/// for the given form, so `det[v₀, …, v_{d−2}, w] = w·w`.
pub fn cross_complement(vectors: &[DVector<f64>], form: &AmbientForm) -> DVector<f64> {
    let dim = form.dimension();
    assert_eq!(vectors.len() + 1, dim, "need dimension − 1 vectors");
    let mut w = DVector::zeros(dim);
    let mut m = nalgebra::DMatrix::zeros(dim, dim);
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    for i in 0..dim {
        let mut e = DVector::zeros(dim);
        e[i] = 1.0;
        m.set_column(dim - 1, &e);
        // cofactor of entry (i, last); the form sign turns it into a vector
        w[i] = m.determinant() * form.sign(i);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn lorentz_projection() {
        let f = AmbientForm::lorentz(3);
        let out = gram_schmidt_signed(&[v(&[1.0, 0.0, 0.0]), v(&[0.5, 1.0, 0.0])], &f, &[]).unwrap();
        assert!((&out[0] - v(&[1.0, 0.0, 0.0])).norm() < 1e-15);
        assert!((&out[1] - v(&[0.0, 1.0, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn euclidean_plane() {
        let f = AmbientForm::euclidean(2);
        let out = gram_schmidt_signed(&[v(&[2.0, 0.0]), v(&[1.0, 3.0])], &f, &[1.0, 1.0]).unwrap();
        assert!((&out[0] - v(&[1.0, 0.0])).norm() < 1e-15);
        assert!((&out[1] - v(&[0.0, 1.0])).norm() < 1e-15);
        let flipped = gram_schmidt_signed(&[v(&[2.0, 0.0]), v(&[1.0, 3.0])], &f, &[1.0, -1.0]).unwrap();
        assert!((&flipped[1] + v(&[0.0, 1.0])).norm() < 1e-15);
    }

    #[test]
    fn null_leading_vector_is_degenerate() {
        let f = AmbientForm::lorentz(3);
        let err = gram_schmidt_signed(&[v(&[1.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])], &f, &[]).unwrap_err();
        assert!(matches!(err, Error::Degenerate { index: 0 }));
    }

    #[test]
    fn cross_complement_is_orthogonal() {
        let f = AmbientForm::lorentz(4);
        let vs = [v(&[2.0, 0.3, 0.1, 0.0]), v(&[0.1, 1.0, 0.2, 0.3]), v(&[0.0, 0.4, 1.0, -0.2])];
        let w = cross_complement(&vs, &f);
        for x in &vs {
            assert!(f.dot_unchecked(w.as_slice(), x.as_slice()).abs() < 1e-12);
        }
        let mut m = nalgebra::DMatrix::zeros(4, 4);
        for (j, x) in vs.iter().chain(std::iter::once(&w)).enumerate() {
            m.set_column(j, x);
        }
        assert!((m.determinant() - f.dot_unchecked(w.as_slice(), w.as_slice())).abs() < 1e-12);
    }
}
