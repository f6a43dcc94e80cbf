//! CSV meshes and atomic file output.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use rwlab_core::analysis::Grid;
use rwlab_core::surface::pointwise_forms;
use rwlab_core::{GeometryOptions, Immersion};

use crate::RunError;

pub const COORDINATES: [&str; 4] = ["t", "x", "y", "z"];
pub const FORM_COLUMNS: [&str; 9] = ["theta", "h311", "h312", "h322", "h411", "h412", "h422", "H3", "H4"];

/// Writes `bytes` to a temporary file next to `path` and renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| RunError::Io(format!("cannot create a file in {}: {e}", dir.display())))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| RunError::Io(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Parses `t,x,y` style projections into coordinate indices.
pub fn parse_projection(s: &str) -> Result<[usize; 3], RunError> {
    let idx: Vec<usize> = s
        .split(',')
        .map(|c| {
            COORDINATES
                .iter()
                .position(|n| *n == c.trim())
                .ok_or_else(|| RunError::Config(format!("unknown coordinate `{c}` in projection, expected t, x, y or z")))
        })
        .collect::<Result<_, _>>()?;
    match idx.as_slice() {
        [a, b, c] if a != b && b != c && a != c => Ok([*a, *b, *c]),
        _ => Err(RunError::Config(format!("projection `{s}` must name three distinct coordinates"))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Mesh {
    /// Rows whose every entry is finite.
    pub fn finite_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.iter().all(|x| x.is_finite())).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:?}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Samples `imm` on `grid` in row-major order. Points where the position
/// or the forms cannot be evaluated get `NaN` entries.
pub fn sample<I: Immersion + Sync + ?Sized>(
    imm: &I,
    grid: &Grid,
    opts: &GeometryOptions,
    forms: bool,
    projection: Option<[usize; 3]>,
) -> Mesh {
    let coords: Vec<usize> = projection.map(|p| p.to_vec()).unwrap_or_else(|| vec![0, 1, 2, 3]);
    let mut columns: Vec<String> = vec!["u".into(), "v".into()];
    columns.extend(coords.iter().map(|&i| COORDINATES[i].to_string()));
    if forms {
        columns.extend(FORM_COLUMNS.iter().map(|s| s.to_string()));
    }
    let rows = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (u, v) = grid.point(k);
            let mut row = vec![u, v];
            let pos = imm.position(u, v).unwrap_or([f64::NAN; 4]);
            row.extend(coords.iter().map(|&i| pos[i]));
            if forms {
                match pointwise_forms(imm, u, v, opts) {
                    Ok(p) => row.extend([
                        p.frame.theta,
                        p.h3[0][0],
                        p.h3[0][1],
                        p.h3[1][1],
                        p.h4[0][0],
                        p.h4[0][1],
                        p.h4[1][1],
                        p.mean3,
                        p.mean4,
                    ]),
                    Err(_) => row.extend([f64::NAN; 9]),
                }
            }
            row
        })
        .collect();
    Mesh { columns, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projections() {
        assert_eq!(parse_projection("t,x,y").unwrap(), [0, 1, 2]);
        assert_eq!(parse_projection("z, t ,x").unwrap(), [3, 0, 1]);
        assert!(parse_projection("t,t,x").is_err());
        assert!(parse_projection("t,x").is_err());
        assert!(parse_projection("t,x,w").is_err());
    }

    #[test]
    fn csv_is_plain_decimal() {
        let m = Mesh {
            columns: vec!["u".into(), "v".into()],
            rows: vec![vec![0.5, 1e-20], vec![f64::NAN, -2.0]],
        };
        assert_eq!(m.to_csv(), "u,v\n0.5,1e-20\nNaN,-2.0\n");
        assert_eq!(m.finite_rows(), 1);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
