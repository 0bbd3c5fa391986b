use nalgebra::DVector;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    /// Mixed absolute/relative error target per step.
    pub tol: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { tol: 1e-10, h_min: 1e-12, h_max: 0.5, max_steps: 2_000_000 }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince integration of `y′ = f(t, y)` through the nodes of
/// `grid` (which must be monotone). `project` is applied after every accepted
/// step. Returns the parameters and states at every grid node, plus every
/// intermediate step when `record_all` is set.
pub fn rk45<F, P>(
    f: F,
    project: P,
    grid: &[f64],
    y0: DVector<f64>,
    opts: &OdeOptions,
    record_all: bool,
) -> Result<(Vec<f64>, Vec<DVector<f64>>)>
where
    F: Fn(f64, &DVector<f64>) -> DVector<f64>,
    P: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let Some(&t0) = grid.first() else {
        return Ok((Vec::new(), Vec::new()));
    };
    let mut ts = vec![t0];
    let mut ys = vec![y0.clone()];
    let mut t = t0;
    let mut y = y0;
    let mut h = (opts.tol.powf(0.2) * 0.1).min(opts.h_max);
    let mut steps = 0;
    for &target in &grid[1..] {
        let dir = if target >= t { 1.0 } else { -1.0 };
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::Integration { last_good: t, reason: "step budget exhausted".into() });
            }
            let remaining = (target - t).abs();
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            let (y_new, err) = dp_step(&f, t, &y, step * dir);
            let scale = y.amax().max(y_new.amax()) + 1.0;
            let ratio = err / (opts.tol * scale);
            if !ratio.is_finite() {
                return Err(Error::Integration { last_good: t, reason: "non-finite state".into() });
            }
            if ratio <= 1.0 {
                t = if last { target } else { t + step * dir };
                y = project(&y_new).map_err(|e| Error::Integration { last_good: t, reason: e.to_string() })?;
                if record_all && !last {
                    ts.push(t);
                    ys.push(y.clone());
                }
            }
            let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            if !(last && ratio <= 1.0) {
                h = (step * factor).min(opts.h_max);
            }
            if h < opts.h_min {
                return Err(Error::Integration { last_good: t, reason: format!("step size underflow ({h:e})") });
            }
        }
        ts.push(t);
        ys.push(y.clone());
    }
    Ok((ts, ys))
}

fn dp_step<F>(f: &F, t: f64, y: &DVector<f64>, h: f64) -> (DVector<f64>, f64)
where
    F: Fn(f64, &DVector<f64>) -> DVector<f64>,
{
    let mut k: Vec<DVector<f64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let mut yi = y.clone();
        for (j, kj) in k.iter().enumerate() {
            if A[s][j] != 0.0 {
                yi.axpy(h * A[s][j], kj, 1.0);
            }
        }
        k.push(f(t + C[s] * h, &yi));
    }
    let mut y5 = y.clone();
    let mut diff = DVector::zeros(y.len());
    for s in 0..7 {
        y5.axpy(h * B5[s], &k[s], 1.0);
        diff.axpy(h * (B5[s] - B4[s]), &k[s], 1.0);
    }
    (y5, diff.amax())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let opts = OdeOptions::default();
        let (ts, ys) = rk45(|_, y| -y, |y| Ok(y.clone()), &[0.0, 1.0, 2.0], DVector::from_element(1, 1.0), &opts, false).unwrap();
        assert_eq!(ts, vec![0.0, 1.0, 2.0]);
        assert!((ys[2][0] - (-2.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        let opts = OdeOptions::default();
        let f = |_: f64, y: &DVector<f64>| DVector::from_vec(vec![y[1], -y[0]]);
        let (_, ys) = rk45(f, |y| Ok(y.clone()), &[0.0, -3.0], DVector::from_vec(vec![0.0, 1.0]), &opts, true).unwrap();
        let last = ys.last().unwrap();
        assert!((last[0] - (-3.0f64).sin()).abs() < 1e-9);
        assert!(ys.len() > 2);
    }
}
