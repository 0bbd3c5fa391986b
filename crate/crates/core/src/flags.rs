//! Lower-triangular coordinates on the flag manifold near a base frame,
//! the integrality residuals of the canonical and pseudo-contact
//! distributions, and reconstruction of C-integral curves from their
//! diagonal entries.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::curve::PolyCurve;
use crate::error::{Error, Result};
use crate::frames::{rk45, Frame, FrameField, OdeOptions};
use crate::jets::TypeVector;
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

/// Relative pivot size below which a frame is considered outside the chart.
const CHART_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub enum FlagCoords {
    /// Lower-unitriangular matrix of polynomials, `x[i][j] = x_i^j`.
    Series(Vec<Vec<Poly<Rational>>>),
    /// Coordinates and their parameter derivatives at sample nodes.
    Samples { t: Vec<f64>, x: Vec<DMatrix<f64>>, dx: Vec<DMatrix<f64>> },
}

/// A curve in the flag manifold written in the chart centred at `base`.
#[derive(Clone, Debug)]
pub struct FlagCurve {
    pub base: DMatrix<f64>,
    pub coords: FlagCoords,
}

impl FlagCurve {
    pub fn dim(&self) -> usize {
        self.base.nrows()
    }

    /// `(t, L, L′)` at the sample nodes, or at `grid` for polynomial coordinates.
    pub fn states(&self, grid: &[f64]) -> Vec<(f64, DMatrix<f64>, DMatrix<f64>)> {
        match &self.coords {
            FlagCoords::Samples { t, x, dx } => {
                t.iter().zip(x).zip(dx).map(|((&t, x), dx)| (t, x.clone(), dx.clone())).collect()
            }
            FlagCoords::Series(s) => {
                let d = s.len();
                let f: Vec<Vec<Poly<f64>>> = s.iter().map(|r| r.iter().map(Poly::to_f64).collect()).collect();
                grid.iter()
                    .map(|&t| {
                        let x = DMatrix::from_fn(d, d, |i, j| f[i][j].eval(&t));
                        let dx = DMatrix::from_fn(d, d, |i, j| f[i][j].derivative().eval(&t));
                        (t, x, dx)
                    })
                    .collect()
            }
        }
    }

    /// `γ = π₁`: the first column `(1, x_1^0, …, x_{n+1}^0)` of a polynomial flag.
    pub fn projected_curve(&self) -> Option<PolyCurve> {
        let FlagCoords::Series(s) = &self.coords else { return None };
        Some(PolyCurve::new(s.iter().map(|row| row[0].clone()).collect()))
    }

    /// The dual curve `(1, x_{n+1}^n, …, x_{n+1}^0)` read off the last row.
    pub fn dual_curve(&self) -> Option<PolyCurve> {
        let FlagCoords::Series(s) = &self.coords else { return None };
        let last = &s[s.len() - 1];
        Some(PolyCurve::new(last.iter().rev().cloned().collect()))
    }

    /// The hyperplane covector of `V_{n+1}`: the last row of `L⁻¹`.
    pub fn dual_covector(&self) -> Option<PolyCurve> {
        let FlagCoords::Series(s) = &self.coords else { return None };
        Some(PolyCurve::new(last_row_of_inverse(s)))
    }
}

/// Last row of the inverse of a lower-unitriangular polynomial matrix.
pub fn last_row_of_inverse<T: Scalar>(l: &[Vec<Poly<T>>]) -> Vec<Poly<T>> {
    let d = l.len();
    // ℓ L = e_{d−1}ᵀ, solved from the right.
    let mut row: Vec<Poly<T>> = vec![Poly::zero(); d];
    row[d - 1] = Poly::constant(T::one());
    for j in (0..d - 1).rev() {
        let mut acc = Poly::zero();
        for k in j + 1..d {
            acc = acc + &row[k] * &l[k][j];
        }
        row[j] = -acc;
    }
    row
}

/// Doolittle factorization `M = L·U` without pivoting.
fn lu_unpivoted(m: &DMatrix<f64>) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let d = m.nrows();
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let mut l = DMatrix::identity(d, d);
    let mut u = m.clone();
    for k in 0..d {
        let p = u[(k, k)];
        if p.abs() <= CHART_TOL * scale {
            return None;
        }
        for i in k + 1..d {
            let f = u[(i, k)] / p;
            l[(i, k)] = f;
            for j in k..d {
                u[(i, j)] -= f * u[(k, j)];
            }
        }
    }
    Some((l, u))
}

fn strict_lower(m: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| if i > j { m[(i, j)] } else { 0.0 })
}

/// Chart coordinates of one frame and its derivative.
fn chart_point(b_inv: &DMatrix<f64>, e: &DMatrix<f64>, de: &DMatrix<f64>) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let m = b_inv * e;
    let (l, u) = lu_unpivoted(&m)?;
    let l_inv = l.clone().try_inverse()?;
    let u_inv = u.try_inverse()?;
    // L′ = L·A with A the strictly lower part of L⁻¹M′U⁻¹.
    let a = strict_lower(&(l_inv * b_inv * de * u_inv));
    let dl = &l * a;
    Some((l, dl))
}

/// Flag coordinates of a frame field in the chart centred at `base`.
pub fn flag_from_frame(field: &FrameField, base: &Frame) -> Result<FlagCurve> {
    let b = base.matrix().clone();
    let b_inv = b.clone().try_inverse().ok_or(Error::Degenerate { index: 0 })?;
    let mut x = Vec::with_capacity(field.len());
    let mut dx = Vec::with_capacity(field.len());
    for (i, &t) in field.params().iter().enumerate() {
        let (l, dl) = chart_point(&b_inv, field.matrix(i), field.derivative(i)).ok_or(Error::ChartExit { t })?;
        x.push(l);
        dx.push(dl);
    }
    Ok(FlagCurve { base: b, coords: FlagCoords::Samples { t: field.params().to_vec(), x, dx } })
}

/// Like [`flag_from_frame`] but re-centres the chart at the current frame
/// whenever the field leaves it, returning one segment per chart.
pub fn flag_from_frame_recentered(field: &FrameField, base: &Frame) -> Result<Vec<FlagCurve>> {
    let mut segments = Vec::new();
    let mut b = base.matrix().clone();
    let mut b_inv = b.clone().try_inverse().ok_or(Error::Degenerate { index: 0 })?;
    let (mut ts, mut xs, mut dxs) = (Vec::new(), Vec::new(), Vec::new());
    for (i, &t) in field.params().iter().enumerate() {
        let point = match chart_point(&b_inv, field.matrix(i), field.derivative(i)) {
            Some(p) => p,
            None => {
                if !ts.is_empty() {
                    segments.push(FlagCurve {
                        base: b.clone(),
                        coords: FlagCoords::Samples { t: std::mem::take(&mut ts), x: std::mem::take(&mut xs), dx: std::mem::take(&mut dxs) },
                    });
                }
                b = field.matrix(i).clone();
                b_inv = b.clone().try_inverse().ok_or(Error::ChartExit { t })?;
                chart_point(&b_inv, field.matrix(i), field.derivative(i)).ok_or(Error::ChartExit { t })?
            }
        };
        ts.push(t);
        xs.push(point.0);
        dxs.push(point.1);
    }
    if !ts.is_empty() {
        segments.push(FlagCurve { base: b, coords: FlagCoords::Samples { t: ts, x: xs, dx: dxs } });
    }
    Ok(segments)
}

/// `max |dx_i^j − x_i^{j+1} dx_{j+1}^j|` over `0 ≤ j`, `j + 1 < i`, per node.
pub fn c_integrality_residual(fc: &FlagCurve, grid: &[f64]) -> Vec<f64> {
    fc.states(grid)
        .iter()
        .map(|(_, x, dx)| {
            let d = x.nrows();
            let mut worst: f64 = 0.0;
            for j in 0..d {
                for i in j + 2..d {
                    worst = worst.max((dx[(i, j)] - x[(i, j + 1)] * dx[(j + 1, j)]).abs());
                }
            }
            worst
        })
        .collect()
}

/// The pseudo-contact form `(L⁻¹dL)_{n+1,0}` per node: last row of `L⁻¹`
/// applied to the derivative of the first column.
pub fn d_integrality_residual(fc: &FlagCurve, grid: &[f64]) -> Vec<f64> {
    fc.states(grid)
        .iter()
        .map(|(_, x, dx)| {
            let d = x.nrows();
            let l_inv = x.clone().try_inverse().unwrap_or_else(|| DMatrix::zeros(d, d));
            let row = l_inv.row(d - 1);
            let col = dx.column(0);
            (row * col)[(0, 0)].abs()
        })
        .collect()
}

type DiagFn = dyn Fn(f64) -> (f64, f64) + Send + Sync;

/// Diagonal entries `x_j^{j−1}`, `1 ≤ j ≤ n+1`.
#[derive(Clone)]
pub enum DiagonalData {
    Poly(Vec<Poly<Rational>>),
    /// Functions returning `(value, derivative)`, reconstructed on `grid`.
    Fn { funcs: Vec<Arc<DiagFn>>, grid: Vec<f64> },
}

impl fmt::Debug for DiagonalData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagonalData::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            DiagonalData::Fn { funcs, grid } => write!(f, "Fn({} functions on {} nodes)", funcs.len(), grid.len()),
        }
    }
}

impl DiagonalData {
    /// Monomial diagonal `(t^{d₁}, …, t^{d_{n+1}})`.
    pub fn monomial(orders: &[u32]) -> Self {
        DiagonalData::Poly(orders.iter().map(|&k| Poly::monomial(crate::scalar::rat(1, 1), k as usize)).collect())
    }

    /// Orders of vanishing of `x_j^{j−1}(t) − x_j^{j−1}(0)` at `t = 0`.
    pub fn orders(&self) -> Option<Vec<u32>> {
        let DiagonalData::Poly(p) = self else { return None };
        p.iter()
            .map(|q| {
                let centred = q.clone() - Poly::constant(q.coeff(0));
                centred.valuation().map(|v| v as u32)
            })
            .collect()
    }
}

/// Solves `dx_i^j = x_i^{j+1} dx_{j+1}^j` by integrating in increasing
/// `i − j`, starting from zero at `t = 0`.
pub fn reconstruct_series<T: Scalar>(diag: &[Poly<T>]) -> Vec<Vec<Poly<T>>> {
    let d = diag.len() + 1;
    let mut x: Vec<Vec<Poly<T>>> = vec![vec![Poly::zero(); d]; d];
    for (i, row) in x.iter_mut().enumerate() {
        row[i] = Poly::constant(T::one());
    }
    for j in 0..d - 1 {
        x[j + 1][j] = diag[j].clone();
    }
    for gap in 2..d {
        for j in 0..d - gap {
            let i = j + gap;
            let integrand = &x[i][j + 1] * &x[j + 1][j].derivative();
            x[i][j] = integrand.integral();
        }
    }
    x
}

/// The C-integral flag curve through the base with the given diagonal.
pub fn c_integral_reconstruct(diag: &DiagonalData, tol: f64) -> Result<FlagCurve> {
    match diag {
        DiagonalData::Poly(p) => {
            let d = p.len() + 1;
            Ok(FlagCurve { base: DMatrix::identity(d, d), coords: FlagCoords::Series(reconstruct_series(p)) })
        }
        DiagonalData::Fn { funcs, grid } => {
            let d = funcs.len() + 1;
            let pairs: Vec<(usize, usize)> =
                (2..d).flat_map(|gap| (0..d - gap).map(move |j| (j + gap, j))).collect();
            let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j));
            let rhs = |t: f64, y: &DVector<f64>| {
                let diag: Vec<(f64, f64)> = funcs.iter().map(|f| f(t)).collect();
                let val = |i: usize, j: usize| if i == j + 1 { diag[j].0 } else { y[index(i, j).expect("pair")] };
                DVector::from_iterator(pairs.len(), pairs.iter().map(|&(i, j)| val(i, j + 1) * diag[j].1))
            };
            let opts = OdeOptions { tol, ..OdeOptions::default() };
            // integrate from 0 to each side so the flag passes through the base at t = 0
            let mut ts_all: Vec<f64> = Vec::new();
            let mut ys_all: Vec<DVector<f64>> = Vec::new();
            let (neg, pos): (Vec<f64>, Vec<f64>) = grid.iter().partition(|&&t| t < 0.0);
            let y0 = DVector::zeros(pairs.len());
            if !neg.is_empty() {
                let mut g = vec![0.0];
                g.extend(neg.iter().rev());
                let (ts, ys) = rk45(rhs, |y| Ok(y.clone()), &g, y0.clone(), &opts, false)?;
                for (t, y) in ts.into_iter().zip(ys).skip(1).rev() {
                    ts_all.push(t);
                    ys_all.push(y);
                }
            }
            if !pos.is_empty() {
                let mut g = vec![0.0];
                g.extend(pos.iter().filter(|&&t| t > 0.0));
                let (ts, ys) = rk45(rhs, |y| Ok(y.clone()), &g, y0, &opts, false)?;
                let skip = if pos[0] == 0.0 { 0 } else { 1 };
                for (t, y) in ts.into_iter().zip(ys).skip(skip) {
                    ts_all.push(t);
                    ys_all.push(y);
                }
            }
            let mut xs = Vec::with_capacity(ts_all.len());
            let mut dxs = Vec::with_capacity(ts_all.len());
            for (&t, y) in ts_all.iter().zip(&ys_all) {
                let diag: Vec<(f64, f64)> = funcs.iter().map(|f| f(t)).collect();
                let mut x = DMatrix::identity(d, d);
                let mut dx = DMatrix::zeros(d, d);
                for j in 0..d - 1 {
                    x[(j + 1, j)] = diag[j].0;
                    dx[(j + 1, j)] = diag[j].1;
                }
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    x[(i, j)] = y[k];
                }
                for &(i, j) in &pairs {
                    dx[(i, j)] = x[(i, j + 1)] * diag[j].1;
                }
                xs.push(x);
                dxs.push(dx);
            }
            Ok(FlagCurve { base: DMatrix::identity(d, d), coords: FlagCoords::Samples { t: ts_all, x: xs, dx: dxs } })
        }
    }
}

/// `a_i = d₁ + … + d_i`.
pub fn type_from_diagonal_orders(orders: &[u32]) -> Result<TypeVector> {
    let a: Vec<u32> = orders
        .iter()
        .scan(0, |acc, &d| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    TypeVector::new(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveJets;
    use crate::frames::{integrate_on_grid, osculating_frame_field, CurvatureData};
    use crate::jets::detect_type;
    use crate::scalar::rat;
    use crate::spaceform::{GeometryKind, SpaceForm};

    fn p(c: &[(i64, i64)]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn orders_to_types() {
        assert_eq!(type_from_diagonal_orders(&[1, 1, 1]).unwrap().as_slice(), &[1, 2, 3]);
        assert_eq!(type_from_diagonal_orders(&[1, 2, 1]).unwrap().as_slice(), &[1, 3, 4]);
        assert_eq!(type_from_diagonal_orders(&[3, 1, 1]).unwrap().as_slice(), &[3, 4, 5]);
    }

    #[test]
    fn reconstruction_closed_forms() {
        let fc = c_integral_reconstruct(&DiagonalData::monomial(&[1, 1, 1]), 1e-10).unwrap();
        let FlagCoords::Series(s) = &fc.coords else { panic!() };
        assert_eq!(s[2][0], p(&[(0, 1), (0, 1), (1, 2)]));
        assert_eq!(s[3][0], p(&[(0, 1), (0, 1), (0, 1), (1, 6)]));
        let fc = c_integral_reconstruct(&DiagonalData::monomial(&[1, 2, 1]), 1e-10).unwrap();
        let FlagCoords::Series(s) = &fc.coords else { panic!() };
        assert_eq!(s[2][0].valuation(), Some(3));
        assert_eq!(s[3][0].valuation(), Some(4));
        let ty = detect_type(&fc.projected_curve().unwrap(), 0.0, 8, 1e-8).unwrap().ty;
        assert_eq!(ty.as_slice(), &[1, 3, 4]);
        let zero = DiagonalData::Poly(vec![Poly::zero(); 3]);
        let fc = c_integral_reconstruct(&zero, 1e-10).unwrap();
        assert!(c_integrality_residual(&fc, &[0.0, 0.5]).iter().all(|&r| r == 0.0));
        let FlagCoords::Series(s) = &fc.coords else { panic!() };
        assert!(s[3][0].is_zero());
    }

    #[test]
    fn remark_dual_of_124() {
        let fc = c_integral_reconstruct(&DiagonalData::monomial(&[1, 1, 2]), 1e-10).unwrap();
        let g = fc.projected_curve().unwrap();
        assert_eq!(g.components()[3], p(&[(0, 1), (0, 1), (0, 1), (0, 1), (1, 12)]));
        let dual = fc.dual_curve().unwrap();
        assert_eq!(detect_type(&dual, 0.0, 8, 1e-8).unwrap().ty.as_slice(), &[2, 3, 4]);
        let cov = fc.dual_covector().unwrap();
        assert_eq!(detect_type(&cov, 0.0, 8, 1e-8).unwrap().ty.as_slice(), &[2, 3, 4]);
    }

    #[test]
    fn function_diagonal_matches_series() {
        let funcs: Vec<Arc<DiagFn>> = vec![Arc::new(|t| (t, 1.0)), Arc::new(|t| (t * t, 2.0 * t)), Arc::new(|t| (t, 1.0))];
        let grid: Vec<f64> = (-5..=5).map(|i| i as f64 * 0.1).collect();
        let fc = c_integral_reconstruct(&DiagonalData::Fn { funcs, grid: grid.clone() }, 1e-12).unwrap();
        let exact = c_integral_reconstruct(&DiagonalData::monomial(&[1, 2, 1]), 0.0).unwrap();
        let a = fc.states(&grid);
        let b = exact.states(&grid);
        assert_eq!(a.len(), grid.len());
        for ((ta, xa, _), (tb, xb, _)) in a.iter().zip(&b) {
            assert_eq!(ta, tb);
            assert!((xa - xb).amax() < 1e-10);
        }
        assert!(c_integrality_residual(&fc, &grid).iter().all(|&r| r < 1e-12));
    }

    #[test]
    fn osculating_lift_of_cubic() {
        let sf = SpaceForm::euclidean(2);
        let c = crate::curve::PolyCurve::monomial(&[1, 2, 3]);
        let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.01).collect();
        let field = osculating_frame_field(&c, &grid, &sf, 8, 1e-8).unwrap();
        let fc = flag_from_frame(&field, &field.frame(0)).unwrap();
        let states = fc.states(&[]);
        assert!(states[0].1.clone().lower_triangle().amax() <= 1.0 + 1e-15);
        // diagonal entries grow linearly: order 1 each
        for j in 0..3 {
            let r = states[8].1[(j + 1, j)] / states[4].1[(j + 1, j)];
            assert!((r - 2.0).abs() < 0.05, "entry {j}: ratio {r}");
        }
        assert!(c_integrality_residual(&fc, &[]).iter().all(|&r| r < 1e-9));
        assert!(d_integrality_residual(&fc, &[]).iter().all(|&r| r < 1e-9));
        assert_eq!(c.ambient_dim(), 4);
    }

    #[test]
    fn adapted_lift_is_d_but_not_c_integral() {
        let sf = SpaceForm::euclidean(2);
        let curv = CurvatureData::constant(GeometryKind::Euclidean, [1.0, 0.7, 0.3]);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.05).collect();
        let field = integrate_on_grid(&Frame::standard(sf), &curv, &grid, 1e-10).unwrap();
        let fc = flag_from_frame(&field, &Frame::standard(sf)).unwrap();
        assert!(d_integrality_residual(&fc, &[]).iter().all(|&r| r < 1e-12));
        assert!(c_integrality_residual(&fc, &[]).iter().all(|&r| r > 0.1));
    }

    #[test]
    fn chart_exit_and_recentering() {
        let sf = SpaceForm::spherical(2);
        let curv = CurvatureData::constant(GeometryKind::Spherical, [0.0; 3]);
        let grid: Vec<f64> = (0..=4).map(|i| i as f64 * std::f64::consts::FRAC_PI_4).collect();
        let field = integrate_on_grid(&Frame::standard(sf), &curv, &grid, 1e-12).unwrap();
        assert!(matches!(flag_from_frame(&field, &Frame::standard(sf)), Err(Error::ChartExit { .. })));
        let segs = flag_from_frame_recentered(&field, &Frame::standard(sf)).unwrap();
        // quarter turns leave each successive chart
        assert_eq!(segs.len(), 3);
        let nodes: usize = segs.iter().map(|s| s.states(&[]).len()).sum();
        assert_eq!(nodes, grid.len());
    }
}
