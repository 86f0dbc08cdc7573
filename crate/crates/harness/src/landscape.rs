//! Rotation and shift files for the rotated benchmarks.
//!
//! `landscapes/F13_d3_s0_rotation.txt` holds one matrix row per line and
//! `..._shift.txt` one line with the shift vector; values are
//! whitespace-separated in `{:.16e}` so they read back bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use upbo_core::benchmarks::{generate_landscape, landscape_seed, Benchmark, FunctionId, Landscape};
use upbo_core::linalg::RotationMatrix;

use crate::error::{HarnessError, Result};

pub fn landscape_paths(dir: &Path, id: FunctionId, dimension: usize, seed: u64) -> (PathBuf, PathBuf) {
    let stem = format!("{id}_d{dimension}_s{seed}");
    (dir.join(format!("{stem}_rotation.txt")), dir.join(format!("{stem}_shift.txt")))
}

fn format_row(values: &[f64]) -> String {
    let mut line = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        write!(line, "{v:.16e}").expect("string write");
    }
    line.push('\n');
    line
}

fn parse_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, line)| {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| HarnessError::format(path, format!("line {}: bad number '{tok}'", n + 1)))
                })
                .collect()
        })
        .collect()
}

pub fn write_landscape(dir: &Path, id: FunctionId, seed: u64, landscape: &Landscape) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let d = landscape.rotation.dimension();
    let (rot_path, shift_path) = landscape_paths(dir, id, d, seed);
    let rot: String = landscape.rotation.rows().map(format_row).collect();
    fs::write(&rot_path, rot).map_err(|e| HarnessError::io(&rot_path, e))?;
    fs::write(&shift_path, format_row(&landscape.shift)).map_err(|e| HarnessError::io(&shift_path, e))?;
    Ok(())
}

pub fn read_landscape(dir: &Path, id: FunctionId, dimension: usize, seed: u64) -> Result<Landscape> {
    let (rot_path, shift_path) = landscape_paths(dir, id, dimension, seed);
    let rows = parse_rows(&rot_path)?;
    if rows.len() != dimension || rows.iter().any(|r| r.len() != dimension) {
        return Err(HarnessError::format(&rot_path, format!("expected a {dimension}x{dimension} matrix")));
    }
    let rotation = RotationMatrix::from_rows(rows, landscape_seed(id, dimension, seed))
        .map_err(|e| HarnessError::format(&rot_path, e.to_string()))?;
    let shift = parse_rows(&shift_path)?.into_iter().flatten().collect::<Vec<f64>>();
    if shift.len() != dimension {
        return Err(HarnessError::format(&shift_path, format!("expected {dimension} shift values")));
    }
    Ok(Landscape { rotation, shift })
}

/// Loads the stored landscape if present, otherwise generates and stores it.
/// Unrotated functions need no files.
pub fn benchmark_for(dir: &Path, id: FunctionId, dimension: usize, seed: u64) -> Result<Benchmark> {
    if !id.is_rotated() {
        return Ok(Benchmark::new(id, dimension, seed)?);
    }
    let (rot_path, _) = landscape_paths(dir, id, dimension, seed);
    let landscape = if rot_path.exists() {
        read_landscape(dir, id, dimension, seed)?
    } else {
        let l = generate_landscape(id, dimension, seed)?;
        write_landscape(dir, id, seed, &l)?;
        l
    };
    Ok(Benchmark::with_landscape(id, dimension, Some(landscape))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        for (id, d) in [(FunctionId::F13, 3), (FunctionId::F19, 10), (FunctionId::F12, 30)] {
            let l = generate_landscape(id, d, 7).unwrap();
            write_landscape(dir.path(), id, 7, &l).unwrap();
            assert_eq!(read_landscape(dir.path(), id, d, 7).unwrap(), l);
        }
    }

    #[test]
    fn stored_files_are_reused() {
        let dir = tempfile::tempdir().unwrap();
        let a = benchmark_for(dir.path(), FunctionId::F18, 4, 1).unwrap();
        let (rot, shift) = landscape_paths(dir.path(), FunctionId::F18, 4, 1);
        assert!(rot.exists() && shift.exists());
        let b = benchmark_for(dir.path(), FunctionId::F18, 4, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.evaluate(&b.optimum_point()), b.optimum_value());
        assert!(!landscape_paths(dir.path(), FunctionId::F2, 4, 1).0.exists());
        benchmark_for(dir.path(), FunctionId::F2, 4, 1).unwrap();
        assert!(!landscape_paths(dir.path(), FunctionId::F2, 4, 1).0.exists());
    }

    #[test]
    fn malformed_files_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let l = generate_landscape(FunctionId::F13, 3, 0).unwrap();
        write_landscape(dir.path(), FunctionId::F13, 0, &l).unwrap();
        let (rot, _) = landscape_paths(dir.path(), FunctionId::F13, 3, 0);
        fs::write(&rot, "1 0 0\n0 1 0\n").unwrap();
        assert!(matches!(read_landscape(dir.path(), FunctionId::F13, 3, 0), Err(HarnessError::Format { .. })));
        fs::write(&rot, "1 0 0\n0 1 0\n0 0 x\n").unwrap();
        assert!(read_landscape(dir.path(), FunctionId::F13, 3, 0).is_err());
        fs::write(&rot, "1 0 0\n0 1 0\n0 0 2\n").unwrap();
        assert!(read_landscape(dir.path(), FunctionId::F13, 3, 0).is_err());
    }
}
