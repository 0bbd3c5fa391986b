use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{class_of_type, SingularityClass};
use crate::curve::JetMatrix;
use crate::flags::{last_row_of_inverse, reconstruct_series};
use crate::frames::{frame_coordinate_jets, JetKind};
use crate::jets::{
    codim_adapted, codim_osculating, detect_type_from_jet, dual_type, rank_exact, schubert_number, Confidence, TypeVector,
};
use crate::poly::{poly_det, BiPoly, Poly};
use crate::scalar::{snap_rational, Rational, Scalar};
use crate::spaceform::GeometryKind;

pub const EVENTS_CSV_HEADER: &str = "lambda,t,a1,a2,a3,class,codim_D,codim_C,schubert,confidence";

/// A one-parameter family of framed curves (`n = 2`) that can hand out the
/// jet columns `c_0, …, c_r` of its frame dual as polynomials in `t`.
pub trait ScanFamily: Sync {
    fn dual_jet_polys(&self, lambda: f64, r: usize) -> Vec<Vec<Poly<f64>>>;
    fn dual_jet_polys_exact(&self, lambda: &Rational, r: usize) -> Vec<Vec<Poly<Rational>>>;
}

/// Adapted framed curves given by polynomial curvatures `κ_i(t, λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureFamily {
    pub kind: GeometryKind,
    pub kappa: [BiPoly; 3],
}

impl StructureFamily {
    fn jets<T: Scalar>(&self, lambda: &T, r: usize) -> Vec<Vec<Poly<T>>> {
        let kappa = [self.kappa[0].at_lambda(lambda), self.kappa[1].at_lambda(lambda), self.kappa[2].at_lambda(lambda)];
        frame_coordinate_jets(T::from_i64(self.kind.delta_i64()), &kappa, JetKind::Dual, r)
    }
}

impl ScanFamily for StructureFamily {
    fn dual_jet_polys(&self, lambda: f64, r: usize) -> Vec<Vec<Poly<f64>>> {
        self.jets(&lambda, r)
    }

    fn dual_jet_polys_exact(&self, lambda: &Rational, r: usize) -> Vec<Vec<Poly<Rational>>> {
        self.jets(lambda, r)
    }
}

/// Osculating framed curves given by the diagonal flag coordinates
/// `x_j^{j−1}(t, λ)` of a C-integral lift; the frame dual is the last row of `L⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalFamily {
    pub diag: Vec<BiPoly>,
}

impl DiagonalFamily {
    fn jets<T: Scalar>(&self, lambda: &T, r: usize) -> Vec<Vec<Poly<T>>> {
        let diag: Vec<Poly<T>> = self.diag.iter().map(|d| d.at_lambda(lambda)).collect();
        let mut col = last_row_of_inverse(&reconstruct_series(&diag));
        let mut cols = Vec::with_capacity(r + 1);
        for _ in 0..=r {
            let next = col.iter().map(Poly::derivative).collect();
            cols.push(std::mem::replace(&mut col, next));
        }
        cols
    }
}

impl ScanFamily for DiagonalFamily {
    fn dual_jet_polys(&self, lambda: f64, r: usize) -> Vec<Vec<Poly<f64>>> {
        self.jets(&lambda, r)
    }

    fn dual_jet_polys_exact(&self, lambda: &Rational, r: usize) -> Vec<Vec<Poly<Rational>>> {
        self.jets(lambda, r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanOptions {
    pub t_range: (f64, f64),
    pub t_count: usize,
    pub lambda_range: (f64, f64),
    pub lambda_count: usize,
    pub r_max: usize,
    pub rank_tol: f64,
    /// Upper bound on the width of refined parameter brackets.
    pub refine_tol: f64,
    pub snap_max_den: i64,
    pub snap_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            t_range: (-1.0, 1.0),
            t_count: 400,
            lambda_range: (-0.1, 0.1),
            lambda_count: 81,
            r_max: 8,
            rank_tol: crate::jets::DEFAULT_RANK_TOL,
            refine_tol: 1e-6,
            snap_max_den: 1000,
            snap_tol: 1e-6,
        }
    }
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![range.0];
    }
    (0..n).map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// A sample of a codim-1 stratum curve in the `(t, λ)` plane.
    Stratum,
    /// An isolated event.
    Momentary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BifurcationEvent {
    pub t: f64,
    pub lambda: f64,
    /// Type of the frame dual.
    #[serde(rename = "type")]
    pub ty: Option<TypeVector>,
    pub dual_type: Option<TypeVector>,
    pub class: SingularityClass,
    #[serde(rename = "codim_D")]
    pub codim_d: Option<u32>,
    #[serde(rename = "codim_C")]
    pub codim_c: Option<u32>,
    pub schubert: Option<u32>,
    pub confidence: Confidence,
    pub kind: EventKind,
}

/// A stratum curve traced across `λ` rows, as `(λ, t)` points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stratum {
    pub class: SingularityClass,
    pub points: Vec<(f64, f64)>,
}

/// A `λ` row on which the detector vanishes identically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerateRegion {
    pub lambda: f64,
    pub t_range: (f64, f64),
    pub class: SingularityClass,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub options: ScanOptions,
    pub events: Vec<BifurcationEvent>,
    pub strata: Vec<Stratum>,
    pub degenerate: Vec<DegenerateRegion>,
}

impl ScanResult {
    pub fn momentary(&self) -> impl Iterator<Item = &BifurcationEvent> {
        self.events.iter().filter(|e| e.kind == EventKind::Momentary)
    }

    /// Strata containing a point on the given `λ` row.
    pub fn strata_at(&self, lambda: f64) -> Vec<&Stratum> {
        self.strata.iter().filter(|s| s.points.iter().any(|p| (p.0 - lambda).abs() < 1e-12)).collect()
    }
}

/// The pivotal minor `det[c_0, c_1, c_2, c_3]` of the frame-dual jet.
fn detector(cols: &[Vec<Poly<f64>>]) -> Poly<f64> {
    let rows: Vec<Vec<Poly<f64>>> = (0..4).map(|i| (0..4).map(|k| cols[k][i].clone()).collect()).collect();
    poly_det(&rows)
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Minimizer and minimum of `f` on `[a, b]` by golden-section search.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

struct Row {
    lambda: f64,
    roots: Vec<f64>,
    degenerate: bool,
}

fn scan_row(fam: &dyn ScanFamily, lambda: f64, ts: &[f64], opts: &ScanOptions) -> Row {
    let cols = fam.dual_jet_polys(lambda, 3);
    // at rational λ the detector is exact and its square-free part has simple roots
    let exact = snap_rational(lambda, opts.snap_max_den, opts.snap_tol).map(|l| {
        let cols = fam.dual_jet_polys_exact(&l, 3);
        let rows: Vec<Vec<Poly<Rational>>> = (0..4).map(|i| (0..4).map(|k| cols[k][i].clone()).collect()).collect();
        poly_det(&rows)
    });
    let d = match &exact {
        Some(e) if e.is_zero() => return Row { lambda, roots: Vec::new(), degenerate: true },
        Some(e) => e.square_free().to_f64(),
        None => detector(&cols),
    };
    let values: Vec<f64> = ts.iter().map(|t| d.eval(t)).collect();
    if exact.is_none() {
        let scale = ts
            .iter()
            .map(|t| cols.iter().map(|c| c.iter().map(|p| p.eval(t).powi(2)).sum::<f64>().sqrt()).product::<f64>())
            .fold(0.0f64, f64::max);
        let dmax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if dmax <= 1e-13 * scale || scale == 0.0 {
            return Row { lambda, roots: Vec::new(), degenerate: true };
        }
    }
    let mut roots = Vec::new();
    for i in 0..ts.len() {
        if values[i] == 0.0 {
            roots.push(ts[i]);
        } else if i + 1 < ts.len() && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
            roots.push(bisect(|t| d.eval(&t), ts[i], ts[i + 1]));
        }
    }
    Row { lambda, roots, degenerate: false }
}

/// Type of the frame dual at `(t, λ)`: exact when both parameters snap to
/// rationals at which the detector vanishes exactly (the event then moves to
/// the snapped point), floating otherwise.
fn classify_at(fam: &dyn ScanFamily, t: f64, lambda: f64, opts: &ScanOptions) -> BifurcationEvent {
    let (t, lambda, ty, conf) = type_at(fam, t, lambda, opts);
    make_event(t, lambda, ty, conf, None)
}

fn type_at(fam: &dyn ScanFamily, t: f64, lambda: f64, opts: &ScanOptions) -> (f64, f64, Option<TypeVector>, Confidence) {
    let snapped = snap_rational(t, opts.snap_max_den, opts.snap_tol).zip(snap_rational(lambda, opts.snap_max_den, opts.snap_tol));
    if let Some((ts, ls)) = snapped {
        let cols = fam.dual_jet_polys_exact(&ls, opts.r_max);
        let jet: Vec<Vec<Rational>> = cols.iter().map(|c| c.iter().map(|p| p.eval(&ts)).collect()).collect();
        if rank_exact(&jet[..4]) < 4 {
            let ty = match detect_type_from_jet(&JetMatrix::Exact(jet), 0.0) {
                Ok(Some(d)) => Some(d.ty),
                _ => None,
            };
            return (Scalar::to_f64(&ts), Scalar::to_f64(&ls), ty, Confidence::Exact);
        }
    }
    let cols = fam.dual_jet_polys(lambda, opts.r_max);
    let m = DMatrix::from_fn(4, cols.len(), |i, k| cols[k][i].eval(&t));
    let jet = JetMatrix::Float(m);
    match detect_type_from_jet(&jet, opts.rank_tol) {
        Ok(Some(d)) if !d.ty.is_ordinary() => (t, lambda, Some(d.ty), d.confidence),
        // the point is a detector root, so an ordinary reading is a tolerance artifact
        _ => match detect_type_from_jet(&jet, opts.rank_tol.max(opts.refine_tol)) {
            Ok(Some(d)) => (t, lambda, Some(d.ty), Confidence::Low),
            _ => (t, lambda, None, Confidence::Low),
        },
    }
}

fn make_event(t: f64, lambda: f64, ty: Option<TypeVector>, confidence: Confidence, kind: Option<EventKind>) -> BifurcationEvent {
    let class = ty.as_ref().map(class_of_type).unwrap_or(SingularityClass::Degenerate);
    let codim_c = ty.as_ref().map(codim_osculating);
    let kind = kind.unwrap_or(if codim_c.unwrap_or(0) >= 2 { EventKind::Momentary } else { EventKind::Stratum });
    BifurcationEvent {
        t,
        lambda,
        dual_type: ty.as_ref().map(dual_type),
        codim_d: ty.as_ref().map(codim_adapted),
        codim_c,
        schubert: ty.as_ref().map(schubert_number),
        ty,
        class,
        confidence,
        kind,
    }
}

/// Adjacent root pairs of `more` with no root of `fewer` between them, the
/// narrowest first, at most `count` of them.
fn fold_pairs(more: &[f64], fewer: &[f64], count: usize) -> Vec<usize> {
    let mut cand: Vec<usize> = (0..more.len().saturating_sub(1))
        .filter(|&k| !fewer.iter().any(|&r| r >= more[k] && r <= more[k + 1]))
        .collect();
    cand.sort_by(|&a, &b| (more[a + 1] - more[a]).total_cmp(&(more[b + 1] - more[b])));
    let mut chosen: Vec<usize> = Vec::new();
    for k in cand {
        if chosen.len() == count {
            break;
        }
        if chosen.iter().all(|&c| c + 1 < k || k + 1 < c) {
            chosen.push(k);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Locates the `λ` where two roots merge between rows `λ_in` (roots present)
/// and `λ_out` (absent), and the `t` where they meet.
fn refine_fold(fam: &dyn ScanFamily, window: (f64, f64), lambda_in: f64, lambda_out: f64) -> (f64, f64) {
    let outside_sign = {
        let d = detector(&fam.dual_jet_polys(lambda_in, 3));
        if d.eval(&window.0) < 0.0 { -1.0 } else { 1.0 }
    };
    let probe = |lambda: f64| {
        let d = detector(&fam.dual_jet_polys(lambda, 3));
        golden_min(|t| outside_sign * d.eval(&t), window.0, window.1)
    };
    let (mut a, mut b) = (lambda_in, lambda_out);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        if probe(m).1 < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let lambda = 0.5 * (a + b);
    (probe(lambda).0, lambda)
}

/// Scans `fam` over the `(t, λ)` grid for points where the frame-dual type
/// departs from `(1,2,3)`.
pub fn scan_family(fam: &dyn ScanFamily, opts: &ScanOptions) -> ScanResult {
    let ts = linspace(opts.t_range, opts.t_count);
    let ls = linspace(opts.lambda_range, opts.lambda_count);
    let h = ts.get(1).map_or(0.0, |t1| t1 - ts[0]);
    let rows: Vec<Row> = ls.par_iter().map(|&l| scan_row(fam, l, &ts, opts)).collect();

    // one classified event per detector root, indexed like `rows[j].roots`
    let root_events: Vec<Vec<BifurcationEvent>> = rows
        .par_iter()
        .map(|row| row.roots.iter().map(|&t| classify_at(fam, t, row.lambda, opts)).collect())
        .collect();

    let degenerate = rows
        .iter()
        .filter(|r| r.degenerate)
        .map(|r| DegenerateRegion { lambda: r.lambda, t_range: opts.t_range, class: SingularityClass::Degenerate })
        .collect();

    // fold refinement and stratum chaining between consecutive rows
    let mut folds = Vec::new();
    let mut strata: Vec<Stratum> = Vec::new();
    let mut generic: Vec<bool> = Vec::new();
    let mut open: Vec<Option<usize>> = rows.first().map(|r| vec![None; r.roots.len()]).unwrap_or_default();
    for (j, row) in rows.iter().enumerate() {
        let mut next_open = vec![None; row.roots.len()];
        if j > 0 {
            let prev = &rows[j - 1];
            let (more, fewer, prev_has_more) = if prev.roots.len() >= row.roots.len() {
                (&prev.roots, &row.roots, true)
            } else {
                (&row.roots, &prev.roots, false)
            };
            let pairs = fold_pairs(more, fewer, (more.len() - fewer.len()) / 2);
            if !prev.degenerate && !row.degenerate {
                for &k in &pairs {
                    let window = ((more[k] - h).max(opts.t_range.0), (more[k + 1] + h).min(opts.t_range.1));
                    let (l_in, l_out) = if prev_has_more { (prev.lambda, row.lambda) } else { (row.lambda, prev.lambda) };
                    folds.push(refine_fold(fam, window, l_in, l_out));
                }
            }
            // the remaining roots continue by order
            let survivors: Vec<usize> = (0..more.len()).filter(|i| !pairs.iter().any(|&k| *i == k || *i == k + 1)).collect();
            for (rank, &i) in survivors.iter().enumerate() {
                if rank >= fewer.len() {
                    break;
                }
                let (pi, ri) = if prev_has_more { (i, rank) } else { (rank, i) };
                if let Some(Some(s)) = open.get(pi) {
                    next_open[ri] = Some(*s);
                }
            }
        }
        for (i, &t) in row.roots.iter().enumerate() {
            let s = match next_open[i] {
                Some(s) => s,
                None => {
                    strata.push(Stratum { class: root_events[j][i].class.clone(), points: Vec::new() });
                    generic.push(root_events[j][i].kind == EventKind::Stratum);
                    strata.len() - 1
                }
            };
            // a stratum is labelled by its codim-1 points, not by the fold it may start at
            if !generic[s] && root_events[j][i].kind == EventKind::Stratum {
                strata[s].class = root_events[j][i].class.clone();
                generic[s] = true;
            }
            strata[s].points.push((row.lambda, t));
            next_open[i] = Some(s);
        }
        open = next_open;
    }

    let mut events: Vec<BifurcationEvent> = root_events.into_iter().flatten().collect();
    let fold_events: Vec<BifurcationEvent> = folds
        .par_iter()
        .map(|&(t, l)| BifurcationEvent { kind: EventKind::Momentary, ..classify_at(fam, t, l, opts) })
        .collect();
    for e in fold_events {
        let duplicate = events
            .iter()
            .any(|m| m.kind == EventKind::Momentary && (m.t - e.t).abs() <= 1e-4 && (m.lambda - e.lambda).abs() <= 1e-4);
        if !duplicate {
            events.push(e);
        }
    }
    events.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.t.total_cmp(&b.t)));
    ScanResult { options: opts.clone(), events, strata, degenerate }
}

/// The same scan over osculating framed curves given by diagonal flag data.
pub fn classify_osculating_scan(fam: &DiagonalFamily, opts: &ScanOptions) -> ScanResult {
    scan_family(fam, opts)
}

fn csv_num(x: f64) -> String {
    let s = format!("{x:.12}");
    if s == "-0.000000000000" { "0.000000000000".into() } else { s }
}

pub fn events_csv(events: &[BifurcationEvent]) -> String {
    let mut out = String::from(EVENTS_CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
    for e in events {
        let a: Vec<String> = match &e.ty {
            Some(ty) if ty.as_slice().len() == 3 => ty.as_slice().iter().map(u32::to_string).collect(),
            _ => vec![String::new(); 3],
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_num(e.lambda),
            csv_num(e.t),
            a[0],
            a[1],
            a[2],
            e.class.name(),
            opt(e.codim_d),
            opt(e.codim_c),
            opt(e.schubert),
            e.confidence.as_str()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn frenet(k3: BiPoly) -> StructureFamily {
        StructureFamily { kind: GeometryKind::Euclidean, kappa: [BiPoly::constant(rat(1, 1)), BiPoly::zero(), k3] }
    }

    fn small(t_count: usize, l_count: usize) -> ScanOptions {
        ScanOptions { t_count, lambda_count: l_count, ..ScanOptions::default() }
    }

    #[test]
    fn no_zeros_no_events() {
        let r = scan_family(&frenet(BiPoly::constant(rat(1, 1))), &small(50, 5));
        assert!(r.events.is_empty() && r.strata.is_empty() && r.degenerate.is_empty());
    }

    #[test]
    fn linear_torsion_stratum() {
        // κ₃ = t − λ
        let k3 = BiPoly::from_terms(&[(1, 0, rat(1, 1)), (0, 1, rat(-1, 1))]);
        let r = scan_family(&frenet(k3), &small(100, 9));
        assert_eq!(r.strata.len(), 1);
        assert_eq!(r.strata[0].points.len(), 9);
        assert_eq!(r.momentary().count(), 0);
        for e in &r.events {
            assert!((e.t - e.lambda).abs() < 1e-12);
            assert_eq!(e.ty.as_ref().unwrap().as_slice(), &[2, 3, 4]);
            assert_eq!(e.confidence, Confidence::Exact);
        }
    }

    #[test]
    fn quadratic_torsion_fold() {
        let k3 = BiPoly::from_terms(&[(2, 0, rat(1, 1)), (0, 1, rat(-1, 1))]);
        let r = scan_family(&frenet(k3), &small(100, 21));
        let m: Vec<_> = r.momentary().collect();
        assert_eq!(m.len(), 1);
        assert!(m[0].t.abs() < 1e-4 && m[0].lambda.abs() < 1e-4);
        assert_eq!(m[0].ty.as_ref().unwrap().as_slice(), &[3, 4, 5]);
        assert_eq!(m[0].dual_type.as_ref().unwrap().as_slice(), &[1, 2, 5]);
        assert_eq!(r.strata_at(0.1).len(), 2);
        assert_eq!(r.strata_at(-0.1).len(), 0);
    }

    #[test]
    fn fold_found_between_irrational_rows() {
        let k3 = BiPoly::from_terms(&[(2, 0, rat(1, 1)), (0, 1, rat(-1, 1))]);
        let r = scan_family(&frenet(k3), &small(101, 80));
        let m: Vec<_> = r.momentary().collect();
        assert_eq!(m.len(), 1);
        assert!(m[0].t.abs() < 1e-4 && m[0].lambda.abs() < 1e-4);
        for e in r.events.iter().filter(|e| e.kind == EventKind::Stratum) {
            assert!((e.t * e.t - e.lambda).abs() < 1e-6, "{e:?}");
        }
    }

    #[test]
    fn planar_rows_are_degenerate() {
        let r = scan_family(&frenet(BiPoly::zero()), &small(20, 3));
        assert_eq!(r.degenerate.len(), 3);
    }

    #[test]
    fn osculating_butterfly_event() {
        // diagonal (t, t, t³ − λt)
        let t = BiPoly::from_terms(&[(1, 0, rat(1, 1))]);
        let d3 = BiPoly::from_terms(&[(3, 0, rat(1, 1)), (1, 1, rat(-1, 1))]);
        let fam = DiagonalFamily { diag: vec![t.clone(), t, d3] };
        let r = classify_osculating_scan(&fam, &small(100, 21));
        let m: Vec<_> = r.momentary().collect();
        assert_eq!(m.len(), 1, "{:?}", r.events);
        assert_eq!(m[0].dual_type.as_ref().unwrap().as_slice(), &[1, 2, 5]);
        assert_eq!(m[0].class, SingularityClass::Unresolved(TypeVector::new(vec![3, 4, 5]).unwrap()));
        assert_eq!(r.strata_at(0.1).len(), 2);
    }

    #[test]
    fn csv_format() {
        let k3 = BiPoly::from_terms(&[(1, 0, rat(1, 1)), (0, 1, rat(-1, 1))]);
        let r = scan_family(&frenet(k3), &small(20, 2));
        let csv = events_csv(&r.events);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(EVENTS_CSV_HEADER));
        assert_eq!(lines.next(), Some("-0.100000000000,-0.100000000000,2,3,4,full-folded-umbrella,2,1,3,exact"));
    }
}
