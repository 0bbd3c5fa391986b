//! Adapted and osculating frames along curves in space forms.

mod dual;
mod gram_schmidt;
mod ode;
mod osculating;
mod structure;

pub use dual::{frame_dual, legendre_residuals, DualCurve, OsculatingDual};
pub use gram_schmidt::{cross_complement, gram_schmidt_signed};
pub use ode::{rk45, OdeOptions};
pub use osculating::{osculating_frame, osculating_frame_field, osculating_frame_with_derivative};
pub use structure::{
    frame_coordinate_jets, integrate_on_grid, integrate_structure_equation, structure_matrix, CurvatureData, CurvatureFn,
    FrameJets, JetKind, StructureCurve,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spaceform::{AmbientForm, GeometryKind, SpaceForm};

/// Ordered basis `(e₀, …, e_{n+1})` stored as matrix columns. In the
/// Euclidean case `e₀ = (1, p)` is the base point and `e_i = (0, v_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    sf: SpaceForm,
    m: DMatrix<f64>,
}

impl Frame {
    pub fn new(sf: SpaceForm, m: DMatrix<f64>) -> Result<Self> {
        let d = sf.ambient_dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Dimension { expected: d, got: m.ncols() });
        }
        Ok(Self { sf, m })
    }

    /// The standard basis, based at `(1, 0, …, 0)`.
    pub fn standard(sf: SpaceForm) -> Self {
        let d = sf.ambient_dim();
        Self { sf, m: DMatrix::identity(d, d) }
    }

    pub fn from_columns(sf: SpaceForm, cols: &[DVector<f64>]) -> Result<Self> {
        let d = sf.ambient_dim();
        if cols.len() != d {
            return Err(Error::Dimension { expected: d, got: cols.len() });
        }
        Self::new(sf, DMatrix::from_columns(cols))
    }

    pub fn space_form(&self) -> SpaceForm {
        self.sf
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn column(&self, i: usize) -> DVector<f64> {
        self.m.column(i).into_owned()
    }

    pub fn point(&self) -> DVector<f64> {
        self.column(0)
    }

    /// The last column `e_{n+1}`.
    pub fn conormal(&self) -> DVector<f64> {
        self.column(self.m.ncols() - 1)
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }

    /// `‖EᵀJE − J‖∞`, with the affine convention in the Euclidean case.
    pub fn gram_defect(&self) -> f64 {
        gram_defect(&self.sf, &self.m)
    }

    /// Re-projects onto the frame group by signed Gram–Schmidt.
    pub fn orthonormalize(&self) -> Result<Frame> {
        Ok(Self { sf: self.sf, m: reorthonormalize(&self.sf, &self.m)? })
    }
}

pub(crate) fn gram_defect(sf: &SpaceForm, m: &DMatrix<f64>) -> f64 {
    let d = m.ncols();
    match sf.kind() {
        GeometryKind::Euclidean => {
            let mut worst = (m[(0, 0)] - 1.0).abs();
            for j in 1..d {
                worst = worst.max(m[(0, j)].abs());
                for k in 1..d {
                    let g: f64 = (1..d).map(|i| m[(i, j)] * m[(i, k)]).sum();
                    let target = if j == k { 1.0 } else { 0.0 };
                    worst = worst.max((g - target).abs());
                }
            }
            worst
        }
        _ => {
            let j = sf.form().gram();
            (m.transpose() * &j * m - j).amax()
        }
    }
}

pub(crate) fn reorthonormalize(sf: &SpaceForm, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = m.ncols();
    match sf.kind() {
        GeometryKind::Euclidean => {
            let spatial: Vec<DVector<f64>> = (1..d).map(|j| m.column(j).rows(1, d - 1).into_owned()).collect();
            let q = gram_schmidt_signed(&spatial, &AmbientForm::euclidean(d - 1), &[])?;
            let mut out = DMatrix::zeros(d, d);
            out[(0, 0)] = 1.0;
            for i in 1..d {
                out[(i, 0)] = m[(i, 0)];
            }
            for (j, v) in q.iter().enumerate() {
                out.column_mut(j + 1).rows_mut(1, d - 1).copy_from(v);
            }
            Ok(out)
        }
        _ => {
            let cols: Vec<DVector<f64>> = m.column_iter().map(|c| c.into_owned()).collect();
            let q = gram_schmidt_signed(&cols, &sf.form(), &[])?;
            Ok(DMatrix::from_columns(&q))
        }
    }
}

/// Frames sampled on a parameter grid together with their derivatives.
#[derive(Clone, Debug)]
pub struct FrameField {
    sf: SpaceForm,
    t: Vec<f64>,
    frames: Vec<DMatrix<f64>>,
    derivs: Vec<DMatrix<f64>>,
    second: Vec<DMatrix<f64>>,
}

impl FrameField {
    /// `frames[i]` is the frame at `t[i]`; `derivs` and `second` hold its
    /// first and second parameter derivatives.
    pub fn new(
        sf: SpaceForm,
        t: Vec<f64>,
        frames: Vec<DMatrix<f64>>,
        derivs: Vec<DMatrix<f64>>,
        second: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        if frames.len() != t.len() || derivs.len() != t.len() || second.len() != t.len() {
            return Err(Error::Dimension { expected: t.len(), got: frames.len() });
        }
        Ok(Self { sf, t, frames, derivs, second })
    }

    /// Unit circle in the plane `x₃ = 0` of `E³` with `e₃` radial: the
    /// tangent planes of the unit cylinder.
    pub fn circle_radial(grid: &[f64]) -> Self {
        let cols = |c: [[f64; 4]; 4]| DMatrix::from_fn(4, 4, |i, j| c[j][i]);
        Self::from_fn(SpaceForm::euclidean(2), grid, |t| {
            let (s, c) = t.sin_cos();
            let e = cols([[1.0, c, s, 0.0], [0.0, -s, c, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, c, s, 0.0]]);
            let d = cols([[0.0, -s, c, 0.0], [0.0, -c, -s, 0.0], [0.0; 4], [0.0, -s, c, 0.0]]);
            let dd = cols([[0.0, -c, -s, 0.0], [0.0, s, -c, 0.0], [0.0; 4], [0.0, -c, -s, 0.0]]);
            (e, d, dd)
        })
    }

    /// Samples an analytic frame field `t ↦ (E, E′, E″)` on a grid.
    pub fn from_fn(sf: SpaceForm, grid: &[f64], f: impl Fn(f64) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)) -> Self {
        let mut frames = Vec::with_capacity(grid.len());
        let mut derivs = Vec::with_capacity(grid.len());
        let mut second = Vec::with_capacity(grid.len());
        for &t in grid {
            let (e, d, dd) = f(t);
            frames.push(e);
            derivs.push(d);
            second.push(dd);
        }
        Self { sf, t: grid.to_vec(), frames, derivs, second }
    }

    pub fn space_form(&self) -> SpaceForm {
        self.sf
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.t
    }

    pub fn matrix(&self, i: usize) -> &DMatrix<f64> {
        &self.frames[i]
    }

    pub fn derivative(&self, i: usize) -> &DMatrix<f64> {
        &self.derivs[i]
    }

    pub fn second_derivative(&self, i: usize) -> &DMatrix<f64> {
        &self.second[i]
    }

    pub fn frame(&self, i: usize) -> Frame {
        Frame { sf: self.sf, m: self.frames[i].clone() }
    }

    /// `E⁻¹E′` at node `i`.
    pub fn connection(&self, i: usize) -> Option<DMatrix<f64>> {
        self.frames[i].clone().try_inverse().map(|inv| inv * &self.derivs[i])
    }

    pub fn max_gram_defect(&self) -> f64 {
        self.frames.iter().map(|m| gram_defect(&self.sf, m)).fold(0.0, f64::max)
    }

    /// Base-point samples `γ(t_i) = e₀(t_i)`.
    pub fn points(&self) -> Vec<DVector<f64>> {
        self.frames.iter().map(|m| m.column(0).into_owned()).collect()
    }

    /// Reorders the columns of every frame (and its derivatives) so that
    /// new column `i` is old column `perm[i]`.
    pub fn with_columns_permuted(&self, perm: &[usize]) -> Self {
        let apply = |ms: &[DMatrix<f64>]| ms.iter().map(|m| m.select_columns(perm)).collect::<Vec<_>>();
        Self {
            sf: self.sf,
            t: self.t.clone(),
            frames: apply(&self.frames),
            derivs: apply(&self.derivs),
            second: apply(&self.second),
        }
    }

    /// Replaces column `j` of every frame (and its derivatives) by column `k`.
    /// Used to build deliberately non-adapted witnesses.
    pub fn with_column_replaced(&self, j: usize, k: usize) -> Self {
        let swap = |ms: &[DMatrix<f64>]| {
            ms.iter()
                .map(|m| {
                    let mut m = m.clone();
                    let c = m.column(k).into_owned();
                    m.set_column(j, &c);
                    m
                })
                .collect::<Vec<_>>()
        };
        Self {
            sf: self.sf,
            t: self.t.clone(),
            frames: swap(&self.frames),
            derivs: swap(&self.derivs),
            second: swap(&self.second),
        }
    }
}
