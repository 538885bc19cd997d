//! File output helpers.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename, so readers never observe a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::env::current_dir()?,
    };
    fs::create_dir_all(&dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{Grid, WaveSample};
    use num_complex::Complex64;

    #[test]
    fn replaces_content_and_leaves_no_temporaries() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nested").join("a.txt");
        atomic_write(&p, b"first").unwrap();
        atomic_write(&p, b"second").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"second");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn wave_sample_file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("psi.csv");
        let grid = Grid::new(-1.0, 1.0, 16).unwrap();
        let values = (0..16).map(|k| Complex64::new(k as f64, -0.5 * k as f64)).collect();
        let s = WaveSample::new(grid, values).unwrap();
        s.write(&p, &serde_json::json!({ "label": "ramp" })).unwrap();
        let back = WaveSample::<f64>::from_csv(&fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(back, s);
        let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("psi.csv.json")).unwrap()).unwrap();
        assert_eq!(meta["label"], "ramp");
        assert_eq!(meta["grid"]["n_points"], 16);
    }
}
