//! Envelope singularity classes read off frame-dual types, and bifurcation
//! scans over one-parameter families.

mod scan;

pub use scan::{
    classify_osculating_scan, events_csv, scan_family, BifurcationEvent, DegenerateRegion, DiagonalFamily, EventKind,
    ScanFamily, ScanOptions, ScanResult, Stratum, StructureFamily, EVENTS_CSV_HEADER,
};

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::curve::CurveJets;
use crate::error::{Error, Result};
use crate::frames::{frame_dual, FrameField, OsculatingDual, StructureCurve};
use crate::jets::{detect_type, dual_type, Confidence, TypeVector};
use crate::spaceform::SpaceForm;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SingularityClass {
    Regular,
    CuspidalEdge,
    Swallowtail,
    /// Also known as the Mond surface.
    CuspidalBeaks,
    CuspidalButterfly,
    FullFoldedUmbrella,
    /// A finite type outside the five-class table.
    Unresolved(TypeVector),
    /// No finite type within the derivative budget.
    Degenerate,
}

impl SingularityClass {
    /// Kebab-case name without the carried type.
    pub fn name(&self) -> &'static str {
        match self {
            SingularityClass::Regular => "regular",
            SingularityClass::CuspidalEdge => "cuspidal-edge",
            SingularityClass::Swallowtail => "swallowtail",
            SingularityClass::CuspidalBeaks => "cuspidal-beaks",
            SingularityClass::CuspidalButterfly => "cuspidal-butterfly",
            SingularityClass::FullFoldedUmbrella => "full-folded-umbrella",
            SingularityClass::Unresolved(_) => "unresolved",
            SingularityClass::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityClass::Unresolved(ty) => write!(f, "unresolved {ty}"),
            other => f.write_str(&other.name().replace('-', " ")),
        }
    }
}

impl FromStr for SingularityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.trim().to_lowercase().chars().filter(|c| c.is_ascii_alphabetic()).collect();
        Ok(match key.as_str() {
            "regular" => SingularityClass::Regular,
            "cuspidaledge" => SingularityClass::CuspidalEdge,
            "swallowtail" => SingularityClass::Swallowtail,
            "cuspidalbeaks" | "cuspidalbreaks" | "mond" | "mondsurface" => SingularityClass::CuspidalBeaks,
            "cuspidalbutterfly" | "butterfly" => SingularityClass::CuspidalButterfly,
            "fullfoldedumbrella" => SingularityClass::FullFoldedUmbrella,
            "degenerate" => SingularityClass::Degenerate,
            _ => {
                let rest = s.trim().strip_prefix("unresolved").map(str::trim);
                match rest.and_then(|r| r.parse::<TypeVector>().ok()) {
                    Some(ty) => SingularityClass::Unresolved(ty),
                    None => return Err(Error::Config(format!("unknown singularity class '{s}'"))),
                }
            }
        })
    }
}

impl Serialize for SingularityClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The five-class table for frame-dual types with `n = 2`.
pub fn class_of_type(ty: &TypeVector) -> SingularityClass {
    match ty.as_slice() {
        [1, 2, 3] => SingularityClass::CuspidalEdge,
        [1, 2, 4] => SingularityClass::Swallowtail,
        [1, 3, 4] => SingularityClass::CuspidalBeaks,
        [1, 2, 5] => SingularityClass::CuspidalButterfly,
        [2, 3, 4] => SingularityClass::FullFoldedUmbrella,
        _ => SingularityClass::Unresolved(ty.clone()),
    }
}

/// Type of the curve whose tangent developable models the envelope for each
/// of the five frame-dual types.
pub fn developable_attribution(ty: &TypeVector) -> Option<TypeVector> {
    let a: &[u32] = match ty.as_slice() {
        [1, 2, 3] => &[1, 2, 3],
        [1, 2, 4] => &[2, 3, 4],
        [1, 2, 5] => &[3, 4, 5],
        [1, 3, 4] => &[1, 3, 4],
        [2, 3, 4] => &[1, 2, 4],
        _ => return None,
    };
    Some(TypeVector::new(a.to_vec()).expect("table entries are valid"))
}

/// Class of a frame-dual type with its dual type. Fails if the dual type
/// contradicts the developable attribution of the five-class table.
pub fn consistency_check(type_of_dual: &TypeVector) -> Result<(SingularityClass, TypeVector)> {
    let dual = dual_type(type_of_dual);
    if let Some(expected) = developable_attribution(type_of_dual) {
        if expected != dual {
            return Err(Error::InvalidType(format!("dual of {type_of_dual} is {dual}, table says {expected}")));
        }
    }
    Ok((class_of_type(type_of_dual), dual))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointClassification {
    pub class: SingularityClass,
    pub dual_curve_type: Option<TypeVector>,
    pub confidence: Option<Confidence>,
    pub diagnostic: Option<String>,
}

/// Where the frame dual of a framed curve comes from.
#[derive(Clone, Copy)]
pub enum FramedSource<'a> {
    /// Polynomial curvatures: exact frame-coordinate jets.
    Structure(&'a StructureCurve),
    /// A curve with its osculating frame.
    Osculating { curve: &'a dyn CurveJets, sf: SpaceForm },
    /// A sampled frame field (finite-difference jets, order ≤ 4).
    Field(&'a FrameField),
    /// A jet provider for the frame dual itself.
    Dual(&'a dyn CurveJets),
}

/// Classifies the envelope point over `t` by the type of the frame dual.
pub fn classify_point(source: FramedSource<'_>, t: f64, r_max: usize, rank_tol: f64) -> PointClassification {
    let detection = match source {
        FramedSource::Structure(sc) => detect_type(&sc.dual_jets(), t, r_max, rank_tol),
        FramedSource::Osculating { curve, sf } => detect_type(&OsculatingDual::new(curve, sf), t, r_max, rank_tol),
        FramedSource::Field(field) => frame_dual(field).sampled(4).and_then(|d| detect_type(&d, t, r_max.min(4), rank_tol)),
        FramedSource::Dual(d) => detect_type(d, t, r_max, rank_tol),
    };
    match detection {
        Ok(det) => PointClassification {
            class: class_of_type(&det.ty),
            dual_curve_type: Some(det.ty),
            confidence: Some(det.confidence),
            diagnostic: None,
        },
        Err(e) => PointClassification { class: SingularityClass::Degenerate, dual_curve_type: None, confidence: None, diagnostic: Some(e.to_string()) },
    }
}
