use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DVector;

use super::mesh::solve_nodes;
use super::{HyperplaneFamily, NormalFormFamily};
use crate::spaceform::GeometryKind;

#[derive(Clone, Copy, Debug)]
pub enum LocusSource<'a> {
    Family(&'a HyperplaneFamily),
    NormalForm { nf: &'a NormalFormFamily, t_grid: &'a [f64] },
}

/// Points chained along `t`, with their `(t, s)` parameters.
#[derive(Clone, Debug, Default)]
pub struct Polyline {
    pub points: Vec<DVector<f64>>,
    pub params: Vec<(f64, f64)>,
}

/// Roots of `A + B·s`, `A cos s + B sin s` or `A cosh s + B sinh s` in the window.
fn roots(kind: GeometryKind, a: f64, b: f64, window: (f64, f64), tol: f64) -> Vec<f64> {
    if b.abs() <= tol * (1.0 + a.abs()) {
        return Vec::new();
    }
    let inside = |s: &f64| *s >= window.0 && *s <= window.1;
    match kind {
        GeometryKind::Euclidean => Some(-a / b).into_iter().filter(inside).collect(),
        GeometryKind::Spherical => {
            let s0 = (-a / b).atan();
            let lo = ((window.0 - s0) / PI).ceil() as i64;
            let hi = ((window.1 - s0) / PI).floor() as i64;
            (lo..=hi).map(|k| s0 + k as f64 * PI).filter(inside).collect()
        }
        GeometryKind::Hyperbolic => {
            let q = -a / b;
            if q.abs() < 1.0 {
                Some(q.atanh()).into_iter().filter(inside).collect()
            } else {
                Vec::new()
            }
        }
    }
}

/// Points with `F = F_t = F_tt = 0` inside the `s` window, chained into
/// polylines along consecutive `t` nodes.
/// Parameter of a node and the `(s, point)` crossings found on its line.
type NodeCrossings = (f64, Vec<(f64, DVector<f64>)>);

pub fn singular_locus(source: LocusSource<'_>, s_window: (f64, f64), tol: f64) -> Vec<Polyline> {
    // per node: list of (s, point)
    let per_node: Vec<NodeCrossings> = match source {
        LocusSource::NormalForm { nf, t_grid } => t_grid
            .iter()
            .map(|&t| {
                let p0 = nf.discriminant_point(&t, &0.0);
                let p1 = nf.discriminant_point(&t, &1.0);
                let a = nf.derivative(2, &t, &p0);
                let b = nf.derivative(2, &t, &p1) - a;
                let pts = roots(GeometryKind::Euclidean, a, b, s_window, tol)
                    .into_iter()
                    .map(|s| {
                        let x = nf.discriminant_point(&t, &s);
                        (s, DVector::from_vec(vec![1.0, x[0], x[1], x[2]]))
                    })
                    .collect();
                (t, pts)
            })
            .collect(),
        LocusSource::Family(fam) => solve_nodes(fam)
            .into_iter()
            .enumerate()
            .map(|(i, sol)| {
                let pts = match sol {
                    None => Vec::new(),
                    Some(sol) => {
                        let e2 = fam.e[i][2].as_slice();
                        let a = fam.sf.metric_dot(sol.foot.as_slice(), e2) + fam.r[i][2];
                        let b = fam.sf.metric_dot(sol.dir.as_slice(), e2);
                        roots(sol.kind, a, b, s_window, tol)
                            .into_iter()
                            .map(|s| (s, sol.at(s)))
                            .filter(|(_, x)| fam.incidence(i, x.as_slice()).iter().all(|v| v.abs() <= tol.max(1e-9)))
                            .collect()
                    }
                };
                (fam.t[i], pts)
            })
            .collect(),
    };
    let mut done = Vec::new();
    let mut open: BTreeMap<usize, (usize, Polyline)> = BTreeMap::new();
    for (i, (t, pts)) in per_node.into_iter().enumerate() {
        for (k, (s, x)) in pts.into_iter().enumerate() {
            let entry = open.remove(&k);
            let mut line = match entry {
                Some((last, line)) if last + 1 == i => line,
                Some((_, line)) => {
                    done.push(line);
                    Polyline::default()
                }
                None => Polyline::default(),
            };
            line.points.push(x);
            line.params.push((t, s));
            open.insert(k, (i, line));
        }
        let stale: Vec<usize> = open.iter().filter(|(_, (last, _))| *last != i).map(|(&k, _)| k).collect();
        for k in stale {
            done.push(open.remove(&k).expect("present").1);
        }
    }
    done.extend(open.into_values().map(|(_, l)| l));
    done.retain(|l| !l.points.is_empty());
    done
}
