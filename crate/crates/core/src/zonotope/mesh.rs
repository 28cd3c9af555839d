//! Wavefront OBJ export: vertices plus 2-face polygons.

use std::fmt::Write as _;
use std::path::Path;

use super::Zonotope;
use crate::error::{Error, Result};
use crate::vectorset::{PointIndex, Vector};

fn fmt_coord(x: f64) -> String {
    // avoid "-0" so output is stable under sign noise
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12}")
}

/// OBJ text for a 3-D zonotope (vertices in semi-star order, one `f` record
/// per 2-face) or a 2-D zonogon (one polygon, `z = 0`).
pub fn obj_string(z: &Zonotope) -> Result<String> {
    let mut out = String::new();
    match z.dim() {
        2 => {
            let cycle = z.whole().polygon(z.generators())?;
            writeln!(out, "# zonogon: {} vertices, 1 face", cycle.len()).unwrap();
            for v in &cycle {
                writeln!(out, "v {} {} {}", fmt_coord(v[0]), fmt_coord(v[1]), fmt_coord(0.0)).unwrap();
            }
            let idx: Vec<String> = (1..=cycle.len()).map(|i| i.to_string()).collect();
            writeln!(out, "f {}", idx.join(" ")).unwrap();
        }
        3 => {
            let vertices = z.vertices()?;
            let faces = z.all_faces(2)?;
            let index = PointIndex::new(3, vertices.iter().map(|v| v.0.as_slice()));
            writeln!(out, "# zonotope: {} vertices, {} faces", vertices.len(), faces.len()).unwrap();
            for v in &vertices {
                writeln!(out, "v {} {} {}", fmt_coord(v[0]), fmt_coord(v[1]), fmt_coord(v[2])).unwrap();
            }
            for face in &faces {
                let cycle: Vec<Vector> = face.polygon(z.generators())?;
                let mut ids = Vec::with_capacity(cycle.len());
                for p in &cycle {
                    let i = index.find(p, z.generators().tol()).ok_or_else(|| {
                        Error::Consistency(format!("face corner {p} is not a vertex"))
                    })?;
                    ids.push((i + 1).to_string());
                }
                writeln!(out, "f {}", ids.join(" ")).unwrap();
            }
        }
        d => {
            return Err(Error::UnsupportedDimension {
                dim: d,
                what: "mesh export (needs 2 or 3)",
            })
        }
    }
    Ok(out)
}

pub fn write_obj(z: &Zonotope, path: &Path) -> Result<()> {
    let text = obj_string(z)?;
    std::fs::write(path, text)?;
    Ok(())
}
