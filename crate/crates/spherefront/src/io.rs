//! Deterministic file exports: OBJ meshes and polylines, CSV curves and
//! fields, JSON reports. No timestamps go into data files; identical inputs
//! produce identical bytes.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use serde::Serialize;

use crate::config::Projection;
use crate::transforms::{central_point, stereographic_point};
use crate::{Error, Result};

/// Shortest round-trip decimal formatting (Rust's float `Display`), shared
/// by every writer so outputs stay byte-stable.
fn fmt(v: f64) -> String {
    if v == 0.0 {
        "0".into() // collapse -0 so algebraically equal outputs match
    } else {
        format!("{v}")
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Meshes
// ---------------------------------------------------------------------------

/// Mesh statistics echoed into summaries.
#[derive(Debug, Clone, Serialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub faces: usize,
    pub dropped_vertices: usize,
    pub dropped_faces: usize,
}

fn project_vertex(p: &DVector<f64>, projection: Projection) -> Option<Vec<f64>> {
    match projection {
        Projection::Stereographic => stereographic_point(p).map(|v| v.to_vec()),
        Projection::Central => central_point(p).map(|v| v.to_vec()),
        Projection::None => Some(p.iter().cloned().collect()),
    }
}

/// Write a quad-grid surface triangulated with consistent winding.
///
/// `pos(i, t)` evaluates the surface at grid row `i` and arbitrary ruling
/// angle `t`. Closed tubes are sealed with the frame's holonomy shear
/// `t ↦ t − α·s/L`, so the last ring meets the first exactly. Vertices in a
/// projection's excluded zone are dropped together with their faces and
/// counted in the returned stats.
#[allow(clippy::too_many_arguments)]
pub fn write_surface_mesh(
    path: &Path,
    m_s: usize,
    t_values: &[f64],
    closed: bool,
    holonomy_angle: f64,
    pos: &dyn Fn(usize, f64) -> DVector<f64>,
    projection: Projection,
) -> Result<MeshStats> {
    let m_x = t_values.len();
    let mut verts: Vec<Option<Vec<f64>>> = Vec::with_capacity(m_s * m_x);
    for i in 0..m_s {
        let shear = if closed {
            -holonomy_angle * i as f64 / m_s as f64
        } else {
            0.0
        };
        for &t in t_values {
            verts.push(project_vertex(&pos(i, t + shear), projection));
        }
    }
    let rows = if closed { m_s } else { m_s - 1 };
    let mut faces: Vec<[usize; 3]> = Vec::with_capacity(2 * rows * m_x);
    let mut dropped_faces = 0usize;
    for i in 0..rows {
        let inext = (i + 1) % m_s;
        for j in 0..m_x {
            let jn = (j + 1) % m_x;
            let q = [i * m_x + j, inext * m_x + j, inext * m_x + jn, i * m_x + jn];
            for tri in [[q[0], q[1], q[2]], [q[0], q[2], q[3]]] {
                if tri.iter().all(|&v| verts[v].is_some()) {
                    faces.push(tri);
                } else {
                    dropped_faces += 1;
                }
            }
        }
    }
    // Compact the index space over surviving vertices.
    let mut remap = vec![usize::MAX; verts.len()];
    let mut kept = 0usize;
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# surface mesh ({} x {} grid)", m_s, m_x)?;
    for (idx, v) in verts.iter().enumerate() {
        if let Some(coords) = v {
            remap[idx] = kept;
            kept += 1;
            let line: Vec<String> = coords.iter().map(|c| fmt(*c)).collect();
            writeln!(w, "v {}", line.join(" "))?;
        }
    }
    for f in &faces {
        writeln!(w, "f {} {} {}", remap[f[0]] + 1, remap[f[1]] + 1, remap[f[2]] + 1)?;
    }
    w.flush()?;
    let dropped_vertices = verts.len() - kept;
    Ok(MeshStats { vertices: kept, faces: faces.len(), dropped_vertices, dropped_faces })
}

/// Write polylines as an OBJ (`v` + `l` elements); dropped vertices split
/// the polyline.
pub fn write_polylines_obj(
    path: &Path,
    polylines: &[Vec<DVector<f64>>],
    projection: Projection,
) -> Result<MeshStats> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# polylines")?;
    let mut count = 0usize;
    let mut dropped = 0usize;
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for pl in polylines {
        let mut current: Vec<usize> = Vec::new();
        for p in pl {
            match project_vertex(p, projection) {
                Some(coords) => {
                    let line: Vec<String> = coords.iter().map(|c| fmt(*c)).collect();
                    writeln!(w, "v {}", line.join(" "))?;
                    count += 1;
                    current.push(count);
                }
                None => {
                    dropped += 1;
                    if current.len() > 1 {
                        lines.push(std::mem::take(&mut current));
                    } else {
                        current.clear();
                    }
                }
            }
        }
        if current.len() > 1 {
            lines.push(current);
        }
    }
    for l in &lines {
        let idx: Vec<String> = l.iter().map(|i| i.to_string()).collect();
        writeln!(w, "l {}", idx.join(" "))?;
    }
    w.flush()?;
    Ok(MeshStats {
        vertices: count,
        faces: 0,
        dropped_vertices: dropped,
        dropped_faces: lines.len(),
    })
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Write a CSV with a mandatory header row.
pub fn write_csv(path: &Path, header: &[&str], rows: &mut dyn Iterator<Item = Vec<f64>>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt(*v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Curve export: columns `s, x_1..x_d`.
pub fn write_curve_csv(path: &Path, s: &[f64], points: &[DVector<f64>]) -> Result<()> {
    let dim = points[0].len();
    let mut header = vec!["s".to_string()];
    header.extend((1..=dim).map(|k| format!("x{k}")));
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut rows = s.iter().zip(points).map(|(si, p)| {
        let mut row = vec![*si];
        row.extend(p.iter().cloned());
        row
    });
    write_csv(path, &header_refs, &mut rows)
}

/// Curve import: header `s, x_1..x_d` is mandatory, the `s` column must be
/// uniform. Returns samples and the domain length `m·h` (samples cover
/// `[0, domain)`).
pub fn read_curve_csv(path: &Path) -> Result<(Vec<DVector<f64>>, f64)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CsvFormat("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(|c| c.trim()).collect();
    if cols.first() != Some(&"s") || cols.len() < 3 {
        return Err(Error::CsvFormat(
            "header must be `s,x1,...,xd` (header row is mandatory)".into(),
        ));
    }
    let dim = cols.len() - 1;
    let mut s_vals = Vec::new();
    let mut points = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != dim + 1 {
            return Err(Error::CsvFormat(format!("row {} has {} cells", ln + 2, cells.len())));
        }
        let mut nums = Vec::with_capacity(dim + 1);
        for c in &cells {
            nums.push(
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::CsvFormat(format!("bad number `{c}` in row {}", ln + 2)))?,
            );
        }
        s_vals.push(nums[0]);
        points.push(DVector::from_vec(nums[1..].to_vec()));
    }
    if points.len() < 2 {
        return Err(Error::CsvFormat("need at least 2 samples".into()));
    }
    let h = s_vals[1] - s_vals[0];
    for k in 1..s_vals.len() {
        if ((s_vals[k] - s_vals[k - 1]) - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(Error::CsvFormat("`s` column must be uniformly spaced".into()));
        }
    }
    Ok((points, h * s_vals.len() as f64))
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

/// Pretty JSON with a trailing newline; field order follows the struct.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::Config(format!("json: {e}")))?;
    writeln!(w)?;
    w.flush()?;
    Ok(path.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Projection;

    #[test]
    fn curve_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.csv");
        let s: Vec<f64> = (0..64).map(|i| i as f64 * 0.1).collect();
        let pts: Vec<DVector<f64>> = s
            .iter()
            .map(|&si| DVector::from_vec(vec![si.cos(), si.sin(), 0.25 * si, 1.0]))
            .collect();
        write_curve_csv(&path, &s, &pts).unwrap();
        let (back, domain) = read_curve_csv(&path).unwrap();
        assert_eq!(back.len(), 64);
        assert!((domain - 6.4).abs() < 1e-12);
        for (a, b) in back.iter().zip(&pts) {
            assert!((a - b).norm() == 0.0, "exact decimal round trip");
        }
    }

    #[test]
    fn csv_rejects_missing_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "0,1,0,0,0\n0.1,1,0,0,0\n").unwrap();
        assert!(read_curve_csv(&path).is_err());
    }

    #[test]
    fn mesh_writer_counts_and_indices() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.obj");
        // Unit-sphere band; project=None keeps all vertices.
        let pos = |i: usize, t: f64| {
            let s = i as f64 * 0.2;
            DVector::from_vec(vec![s.cos() * t.cos(), s.cos() * t.sin(), s.sin(), 0.0])
        };
        let t_values: Vec<f64> = (0..8).map(|j| j as f64 * std::f64::consts::TAU / 8.0).collect();
        let stats =
            write_surface_mesh(&path, 6, &t_values, false, 0.0, &pos, Projection::None).unwrap();
        assert_eq!(stats.vertices, 48);
        assert_eq!(stats.faces, 2 * 5 * 8);
        let text = std::fs::read_to_string(&path).unwrap();
        // 1-based face indices referencing existing vertices.
        for line in text.lines().filter(|l| l.starts_with("f ")) {
            for tok in line[2..].split_whitespace() {
                let idx: usize = tok.parse().unwrap();
                assert!(idx >= 1 && idx <= stats.vertices);
            }
        }
    }

    #[test]
    fn projection_dropping_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("clip.obj");
        // A band passing through the central projection's excluded zone.
        let pos = |i: usize, t: f64| {
            let s = (i as f64 - 3.0) * 0.35;
            DVector::from_vec(vec![0.5 * t.cos(), 0.5 * t.sin(), s.sin() * 0.5, s.cos() * 0.7])
        };
        let t_values: Vec<f64> = (0..8).map(|j| j as f64 * std::f64::consts::TAU / 8.0).collect();
        let stats =
            write_surface_mesh(&path, 10, &t_values, false, 0.0, &pos, Projection::Central)
                .unwrap();
        assert!(stats.dropped_vertices > 0);
        assert!(stats.dropped_faces > 0);
    }
}
