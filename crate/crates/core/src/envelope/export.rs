use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use super::{EnvelopeMesh, Polyline, VertexMark};
use crate::error::Result;
use crate::spaceform::GeometryKind;

/// Chart used to draw model points in 3D: the affine slice for E, central
/// projection for S and the Beltrami–Klein chart for H.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Affine,
    Gnomonic,
    Klein,
}

impl Projection {
    pub fn for_kind(kind: GeometryKind) -> Self {
        match kind {
            GeometryKind::Euclidean => Projection::Affine,
            GeometryKind::Spherical => Projection::Gnomonic,
            GeometryKind::Hyperbolic => Projection::Klein,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Projection::Affine => "affine",
            Projection::Gnomonic => "gnomonic",
            Projection::Klein => "klein",
        }
    }
}

/// `(x₁, x₂, x₃)/x₀`. Points on the equator of S³ are sent far out along
/// their direction.
pub fn project_point(x: &[f64]) -> [f64; 3] {
    let x0 = if x[0].abs() < 1e-12 { 1e-12f64.copysign(x[0]) } else { x[0] };
    [x[1] / x0, x[2] / x0, x[3] / x0]
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn mark_name(m: VertexMark) -> &'static str {
    match m {
        VertexMark::Regular => "regular",
        VertexMark::SingularLocus => "singular-locus",
        VertexMark::Degenerate => "degenerate",
    }
}

fn ambient_line(out: &mut String, x: &[f64]) {
    out.push_str("# ambient");
    for v in x {
        let _ = write!(out, " {v:.17e}");
    }
    out.push('\n');
}

pub fn mesh_obj_string(mesh: &EnvelopeMesh, triangulate: bool) -> String {
    let proj = Projection::for_kind(mesh.kind);
    let mut out = String::new();
    let _ = writeln!(out, "# geometry {:?} projection {}", mesh.kind, proj.name());
    let _ = writeln!(out, "# vertices {} faces {}", mesh.vertex_count(), mesh.faces.len());
    for t in &mesh.degenerate_params {
        let _ = writeln!(out, "# degenerate t {t:.17e}");
    }
    for (i, x) in mesh.vertices.iter().enumerate() {
        let [a, b, c] = project_point(x.as_slice());
        let _ = writeln!(out, "v {a:.17e} {b:.17e} {c:.17e}");
        let (t, s) = mesh.params[i];
        let _ = writeln!(out, "# param {t:.17e} {s:.17e}");
        ambient_line(&mut out, x.as_slice());
        let _ = writeln!(out, "# mark {}", mark_name(mesh.marks[i]));
    }
    for f in &mesh.faces {
        let [a, b, c, d] = f.map(|i| i + 1);
        if triangulate {
            let _ = writeln!(out, "f {a} {b} {c}");
            let _ = writeln!(out, "f {a} {c} {d}");
        } else {
            let _ = writeln!(out, "f {a} {b} {c} {d}");
        }
    }
    out
}

pub fn write_mesh_obj(mesh: &EnvelopeMesh, path: &Path, triangulate: bool) -> Result<()> {
    write_atomic(path, mesh_obj_string(mesh, triangulate).as_bytes())
}

pub fn locus_obj_string(lines: &[Polyline], kind: GeometryKind) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# singular locus, geometry {:?} projection {}", kind, Projection::for_kind(kind).name());
    let mut index = 0usize;
    let mut segments = Vec::new();
    for line in lines {
        for (k, (x, (t, s))) in line.points.iter().zip(&line.params).enumerate() {
            let [a, b, c] = project_point(x.as_slice());
            let _ = writeln!(out, "v {a:.17e} {b:.17e} {c:.17e}");
            let _ = writeln!(out, "# param {t:.17e} {s:.17e}");
            ambient_line(&mut out, x.as_slice());
            index += 1;
            if k > 0 {
                segments.push((index - 1, index));
            }
        }
    }
    for (i, j) in segments {
        let _ = writeln!(out, "l {i} {j}");
    }
    out
}

pub fn write_locus_obj(lines: &[Polyline], kind: GeometryKind, path: &Path) -> Result<()> {
    write_atomic(path, locus_obj_string(lines, kind).as_bytes())
}
