//! The acceptance suite: each criterion checks the library against an
//! oracle computed independently of the code under test.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{scan_family, ScanOptions, SingularityClass, StructureFamily};
use crate::curve::{ClosedFormCurve, CurveJets, PolyCurve};
use crate::envelope::{discriminant_mesh, discriminant_point_exact, envelope_mesh, hyperplane_family, NormalFormFamily};
use crate::error::Result;
use crate::flags::{
    c_integral_reconstruct, c_integrality_residual, d_integrality_residual, flag_from_frame_recentered, DiagonalData,
    FlagCurve,
};
use crate::frames::{integrate_on_grid, integrate_structure_equation, osculating_frame_field, CurvatureData, Frame, FrameField};
use crate::jets::{
    codim_adapted, codim_osculating, detect_type, detect_type_exact, dual_type, enumerate_generic_types, schubert_number,
    EnumMode, TypeVector,
};
use crate::poly::BiPoly;
use crate::scalar::{rat, Rational};
use crate::spaceform::{GeometryKind, SpaceForm};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Wall-clock seconds; left out of serialized output so reports stay reproducible.
    #[serde(skip)]
    pub elapsed: f64,
    pub budget: f64,
}

type Check = fn(u64) -> Result<(bool, String)>;

const CRITERIA: [(u32, &str, f64, Check); 8] = [
    (1, "type detection oracle equivalence", 30.0, type_detection),
    (2, "dual-type involution and dual curves", 60.0, duality),
    (3, "codimension chain and generic type lists", 1.0, codimension_lists),
    (4, "frame integrity", 5.0, frame_integrity),
    (5, "envelope closed forms", 10.0, envelope_closed_forms),
    (6, "discriminant normal forms", 1.0, discriminant_normal_forms),
    (7, "bifurcation scan", 30.0, bifurcation_scan),
    (8, "integrality residuals", 5.0, integrality_residuals),
];

pub fn criterion_ids() -> Vec<u32> {
    CRITERIA.iter().map(|c| c.0).collect()
}

/// Runs one criterion; `None` for an unknown id.
pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionOutcome> {
    let &(id, name, budget, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let result = check(seed);
    let elapsed = start.elapsed().as_secs_f64();
    let (ok, detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let on_time = elapsed <= budget;
    let detail = if on_time { detail } else { format!("{detail}; over budget {elapsed:.2}s > {budget}s") };
    Some(CriterionOutcome { id, name, passed: ok && on_time, detail, elapsed, budget })
}

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    criterion_ids().into_iter().filter_map(|id| run_criterion(id, seed)).collect()
}

pub fn summary_line(o: &CriterionOutcome) -> String {
    let verdict = if o.passed { "PASS" } else { "FAIL" };
    format!("{verdict} [{}] {} ({:.2}s): {}", o.id, o.name, o.elapsed, o.detail)
}

fn tv(a: &[u32]) -> TypeVector {
    TypeVector::new(a.to_vec()).expect("increasing entries")
}

fn increasing(len: usize, top: u32) -> Vec<Vec<u32>> {
    fn go(cur: &mut Vec<u32>, len: usize, from: u32, top: u32, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in from..=top {
            cur.push(v);
            go(cur, len, v + 1, top, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), len, 1, top, &mut out);
    out
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn type_detection(_: u64) -> Result<(bool, String)> {
    let zero = rat(0, 1);
    let mut failures = Vec::new();
    let triples = increasing(3, 7);
    for a in &triples {
        let curve = PolyCurve::monomial(a);
        let exact = detect_type_exact(&curve, &zero, 7)?.ty;
        if exact.as_slice() != a.as_slice() {
            failures.push(format!("exact {a:?} -> {exact}"));
        }
        if a[2] <= 5 {
            let float = detect_type(&curve, 0.0, 7, 1e-8)?.ty;
            if float.as_slice() != a.as_slice() {
                failures.push(format!("float {a:?} -> {float}"));
            }
        }
    }
    Ok((failures.is_empty(), format!("{} triples, mismatches: {:?}", triples.len(), failures)))
}

fn duality(_: u64) -> Result<(bool, String)> {
    let mut count = 0;
    let mut failures = Vec::new();
    for n in 1..=4 {
        for a in increasing(n + 1, 9) {
            count += 1;
            let a = tv(&a);
            if dual_type(&dual_type(&a)) != a {
                failures.push(format!("involution {a}"));
            }
        }
    }
    let zero = rat(0, 1);
    let mut lifts = 0;
    for a in increasing(3, 6) {
        lifts += 1;
        let orders = [a[0], a[1] - a[0], a[2] - a[1]];
        let fc = c_integral_reconstruct(&DiagonalData::monomial(&orders), 0.0)?;
        let expected = dual_type(&tv(&a));
        let projected = fc.projected_curve().expect("series");
        let dual = fc.dual_curve().expect("series");
        let covector = fc.dual_covector().expect("series");
        if detect_type_exact(&projected, &zero, 10)?.ty.as_slice() != a.as_slice() {
            failures.push(format!("projection of lift {a:?}"));
        }
        for (label, c) in [("dual", &dual), ("covector", &covector)] {
            let got = detect_type_exact(c, &zero, 10)?.ty;
            if got != expected {
                failures.push(format!("{label} of {a:?}: {got} != {expected}"));
            }
        }
    }
    Ok((failures.is_empty(), format!("{count} involutions, {lifts} lifts, failures: {failures:?}")))
}

/// Lists as printed in the source, for `n = 2`.
const ORDINARY_LIST: &str = "(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4)";
const ADAPTED_LIST: &str = "(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4), (2, 3, 4)";
const OSCULATING_LIST: &str =
    "(1, 2, 3); (1, 2, 4), (1, 3, 4), (2, 3, 4); (1, 2, 5), (1, 3, 5), (1, 4, 5), (2, 3, 5), (2, 4, 5), (3, 4, 5)";

fn render(types: &[TypeVector]) -> String {
    types
        .iter()
        .map(|t| format!("({})", t.as_slice().iter().map(u32::to_string).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join(", ")
}

fn codimension_lists(_: u64) -> Result<(bool, String)> {
    let mut chain_failures = Vec::new();
    for n in 1..=4 {
        for a in increasing(n + 1, 9) {
            let a = tv(&a);
            if !(codim_osculating(&a) <= codim_adapted(&a) && codim_adapted(&a) <= schubert_number(&a)) {
                chain_failures.push(a.to_string());
            }
        }
    }
    let mut list_failures = Vec::new();
    for (mode, expected) in
        [(EnumMode::Ordinary, ORDINARY_LIST), (EnumMode::Adapted, ADAPTED_LIST), (EnumMode::Osculating, OSCULATING_LIST)]
    {
        let got = render(&enumerate_generic_types(2, 2, mode));
        if got != expected.replace(';', ",") {
            list_failures.push(format!("{mode}: {got}"));
        }
    }
    Ok((
        chain_failures.is_empty() && list_failures.is_empty(),
        format!("chain violations: {chain_failures:?}, list mismatches: {list_failures:?}"),
    ))
}

fn frame_integrity(_: u64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for kind in [GeometryKind::Euclidean, GeometryKind::Spherical, GeometryKind::Hyperbolic] {
        let sf = SpaceForm::new(kind, 2)?;
        let curv = CurvatureData::constant(kind, [2.0, 0.0, 0.5]);
        let field = integrate_structure_equation(&Frame::standard(sf), &curv, (0.0, 20.0), 1e-10)?;
        let d = field.max_gram_defect();
        worst = worst.max(d);
        let big = (0..field.len()).map(|i| field.matrix(i).amax()).fold(0.0, f64::max);
        parts.push(format!("{kind:?} {d:.2e} (max entry {big:.1e})"));
    }
    Ok((worst <= 1e-8, format!("max Gram defect {}", parts.join(", "))))
}

/// Symmetric Hausdorff distance between two finite point sets.
fn hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let one_sided = |p: &[[f64; 3]], q: &[[f64; 3]]| {
        p.iter()
            .map(|x| {
                q.iter()
                    .map(|y| (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
            .sqrt()
    };
    one_sided(a, b).max(one_sided(b, a))
}

fn envelope_closed_forms(_: u64) -> Result<(bool, String)> {
    let ts = linspace(0.0, std::f64::consts::TAU, 200);
    let ss = linspace(-1.5, 1.5, 50);
    let fam = hyperplane_family(&FrameField::circle_radial(&ts));
    let mesh = envelope_mesh(&fam, &ss, 1e-9)?;
    let cylinder = mesh.vertices.iter().map(|v| (v[1].hypot(v[2]) - 1.0).abs()).fold(0.0f64, f64::max);

    let sf = SpaceForm::euclidean(2);
    let helix = ClosedFormCurve::helix();
    let ts = linspace(-2.0, 2.0, 200);
    let field = osculating_frame_field(&helix, &ts, &sf, 6, 1e-8)?;
    let mesh = envelope_mesh(&hyperplane_family(&field), &ss, 1e-9)?;
    let ours: Vec<[f64; 3]> = mesh.vertices.iter().map(|v| [v[1], v[2], v[3]]).collect();
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let mut analytic = Vec::with_capacity(ours.len());
    for &t in &ts {
        let u = t * c;
        let (p, v) = ([u.cos(), u.sin(), u], [-u.sin() * c, u.cos() * c, c]);
        for &s in &ss {
            analytic.push([p[0] + s * v[0], p[1] + s * v[1], p[2] + s * v[2]]);
        }
    }
    let h = hausdorff(&ours, &analytic);
    Ok((
        cylinder <= 1e-9 && h <= 1e-6 && ours.len() == 200 * 50,
        format!("cylinder distance {cylinder:.2e}, developable Hausdorff {h:.2e} over {} vertices", ours.len()),
    ))
}

fn pow(t: &Rational, k: u32) -> Rational {
    (0..k).fold(rat(1, 1), |acc, _| acc * t)
}

fn fact(k: u32) -> Rational {
    (1..=k as i64).fold(rat(1, 1), |acc, i| acc * rat(i, 1))
}

/// Solves `F = F_t = 0` for `(x₂, x₃)` with `x₁ = s` by Cramer's rule, where
/// `F = Σ c_k t^{e_k}/e_k!` over the monomials `t^{a₃}`, `x₁t^{a₃−a₁}`,
/// `x₂t^{a₃−a₂}`, `x₃`.
fn cramer_discriminant(a: [u32; 3], t: &Rational, s: &Rational) -> Option<(Rational, Rational)> {
    let term = |e: u32, d: u32| if d > e { rat(0, 1) } else { pow(t, e - d) / fact(e - d) };
    let (e0, e1, e2) = (a[2], a[2] - a[0], a[2] - a[1]);
    // rows: F, F_t; unknowns x₂, x₃
    let (m11, m12, b1) = (term(e2, 0), rat(1, 1), -(term(e0, 0) + s * term(e1, 0)));
    let (m21, m22, b2) = (term(e2, 1), rat(0, 1), -(term(e0, 1) + s * term(e1, 1)));
    let det = &m11 * &m22 - &m12 * &m21;
    if det == rat(0, 1) {
        return None;
    }
    let x2 = (&b1 * &m22 - &m12 * &b2) / &det;
    let x3 = (&m11 * &b2 - &b1 * &m21) / &det;
    Some((x2, x3))
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn discriminant_normal_forms(seed: u64) -> Result<(bool, String)> {
    let types = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [1, 2, 5], [2, 3, 4]];
    let t_int: Vec<i64> = (-16..=16).collect();
    let s_int: Vec<i64> = (-8..=8).collect();
    let ts: Vec<f64> = t_int.iter().map(|&i| i as f64 / 16.0).collect();
    let ss: Vec<f64> = s_int.iter().map(|&j| j as f64 / 4.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut exact_mismatch = 0;
    let mut compared = 0;
    for a in types {
        let nf = NormalFormFamily::new(tv(&a))?;
        let mesh = discriminant_mesh(&nf, &ts, &ss, 1e-12);
        for (v, &(t, s)) in mesh.vertices.iter().zip(&mesh.params) {
            let tr = rat((t * 16.0).round() as i64, 16);
            let sr = rat((s * 4.0).round() as i64, 4);
            if let Some((x2, x3)) = cramer_discriminant(a, &tr, &sr) {
                compared += 1;
                worst = worst.max((v[1] - s).abs()).max((v[2] - to_f64(&x2)).abs()).max((v[3] - to_f64(&x3)).abs());
            }
        }
        for _ in 0..50 {
            let t = rat(rng.gen_range(-60..=60), rng.gen_range(1..=20));
            let s = rat(rng.gen_range(-60..=60), rng.gen_range(1..=20));
            if let Some((x2, x3)) = cramer_discriminant(a, &t, &s) {
                if discriminant_point_exact(&nf, &t, &s) != [s.clone(), x2, x3] {
                    exact_mismatch += 1;
                }
            }
        }
    }
    let spot = |a: [u32; 3]| -> Result<[Rational; 3]> {
        Ok(discriminant_point_exact(&NormalFormFamily::new(tv(&a))?, &rat(1, 1), &rat(0, 1)))
    };
    let spots_ok = spot([1, 2, 3])? == [rat(0, 1), rat(-1, 2), rat(1, 3)] && spot([2, 3, 4])? == [rat(0, 1), rat(-1, 6), rat(1, 8)];
    Ok((
        worst <= 1e-12 && exact_mismatch == 0 && spots_ok,
        format!("{compared} mesh vertices max deviation {worst:.2e}, exact mismatches {exact_mismatch}, spot values ok: {spots_ok}"),
    ))
}

fn bifurcation_scan(_: u64) -> Result<(bool, String)> {
    let kappa3 = BiPoly::from_terms(&[(2, 0, rat(1, 1)), (0, 1, rat(-1, 1))]);
    let fam = StructureFamily { kind: GeometryKind::Euclidean, kappa: [BiPoly::constant(rat(1, 1)), BiPoly::zero(), kappa3] };
    let opts = ScanOptions { t_count: 400, lambda_count: 81, ..ScanOptions::default() };
    let result = scan_family(&fam, &opts);
    let events: Vec<_> = result.momentary().filter(|e| e.codim_c == Some(2)).collect();
    let one = events.len() == 1;
    let e = events.first();
    let located = e.is_some_and(|e| e.t.abs() <= 1e-4 && e.lambda.abs() <= 1e-4);
    let carrier = e.is_some_and(|e| e.dual_type.as_ref().map(TypeVector::as_slice) == Some(&[1, 2, 5]));
    let butterfly = e.is_some_and(|e| e.class == SingularityClass::CuspidalButterfly);
    let plus = result.strata_at(0.1);
    let two_branches = plus.len() == 2;
    let swallowtails = two_branches && plus.iter().all(|s| s.class == SingularityClass::Swallowtail);
    let none_below = result.strata_at(-0.1).is_empty();
    let label = |e: Option<&&crate::classify::BifurcationEvent>| match e {
        Some(e) => format!("{} at ({:.2e}, {:.2e})", e.class, e.t, e.lambda),
        None => "none".into(),
    };
    let branch_classes: Vec<String> = plus.iter().map(|s| s.class.to_string()).collect();
    let checks = [
        ("single codim-2 event", one),
        ("localized", located),
        ("carrier (1,2,5)", carrier),
        ("cuspidal butterfly", butterfly),
        ("two branches at +0.1", two_branches),
        ("branches swallowtail", swallowtails),
        ("none at -0.1", none_below),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Ok((
        failed.is_empty(),
        format!("event {}, branches {:?}, failed sub-checks {:?}", label(e), branch_classes, failed),
    ))
}

fn max_residual(segments: &[FlagCurve], f: fn(&FlagCurve, &[f64]) -> Vec<f64>) -> f64 {
    segments.iter().flat_map(|s| f(s, &[])).fold(0.0, f64::max)
}

fn integrality_residuals(_: u64) -> Result<(bool, String)> {
    let grid = linspace(-0.5, 0.5, 21);
    let curves: Vec<(&str, Box<dyn CurveJets>, SpaceForm)> = vec![
        ("helix", Box::new(ClosedFormCurve::helix()), SpaceForm::euclidean(2)),
        ("twisted cubic", Box::new(PolyCurve::monomial(&[1, 2, 3])), SpaceForm::euclidean(2)),
        ("clifford", Box::new(ClosedFormCurve::clifford(0.6)), SpaceForm::spherical(2)),
        ("hyperbolic spiral", Box::new(ClosedFormCurve::hyperbolic_spiral(0.75)), SpaceForm::hyperbolic(2)),
    ];
    let mut worst_c: f64 = 0.0;
    for (_, curve, sf) in &curves {
        let field = osculating_frame_field(curve.as_ref(), &grid, sf, 6, 1e-8)?;
        let segs = flag_from_frame_recentered(&field, &field.frame(0))?;
        worst_c = worst_c.max(max_residual(&segs, c_integrality_residual));
    }
    let grid = linspace(0.0, 2.0, 41);
    let mut worst_d: f64 = 0.0;
    let mut adapted_e = None;
    for kind in [GeometryKind::Euclidean, GeometryKind::Spherical, GeometryKind::Hyperbolic] {
        let sf = SpaceForm::new(kind, 2)?;
        let curv = CurvatureData::constant(kind, [1.0, 0.7, 0.3]);
        let field = integrate_on_grid(&Frame::standard(sf), &curv, &grid, 1e-10)?;
        let segs = flag_from_frame_recentered(&field, &field.frame(0))?;
        worst_d = worst_d.max(max_residual(&segs, d_integrality_residual));
        if kind == GeometryKind::Euclidean {
            adapted_e = Some(field);
        }
    }
    let adapted = adapted_e.expect("euclidean field");
    let c_witness = max_residual(&flag_from_frame_recentered(&adapted, &adapted.frame(0))?, c_integrality_residual);
    // cyclic relabelling keeps the orientation and makes the tangent the conormal
    let swapped = adapted.with_columns_permuted(&[0, 2, 3, 1]);
    let d_witness = max_residual(&flag_from_frame_recentered(&swapped, &swapped.frame(0))?, d_integrality_residual);
    Ok((
        worst_c <= 1e-8 && worst_d <= 1e-8 && c_witness > 0.1 && d_witness > 0.1,
        format!(
            "osculating C residual {worst_c:.2e}, adapted D residual {worst_d:.2e}, witnesses C {c_witness:.2e} D {d_witness:.2e}"
        ),
    ))
}
