use std::path::{Path, PathBuf};

use maslov_core::flow::FlowResult;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Emit {
    #[default]
    Csv,
    Json,
}

/// Eigenvalues in a run-independent order: by argument, then modulus.
fn sorted(eig: &[Complex64]) -> Vec<Complex64> {
    let mut v = eig.to_vec();
    v.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    v
}

/// One row per evaluated sample: s, re/im of each eigenvalue, rank P_{N⁻} and the segment index.
pub fn flow_csv(flow: &FlowResult) -> CliResult<Vec<u8>> {
    let width = flow.samples.iter().map(|p| p.eigenvalues.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["s".to_string()];
    for k in 0..width {
        header.push(format!("re_eig_{k}"));
        header.push(format!("im_eig_{k}"));
    }
    header.push("rank_P_Nminus".into());
    header.push("segment_id".into());
    w.write_record(&header)?;
    for p in &flow.samples {
        let mut row = vec![p.s.to_string()];
        let eig = sorted(&p.eigenvalues);
        for k in 0..width {
            match eig.get(k) {
                Some(z) => {
                    row.push(z.re.to_string());
                    row.push(z.im.to_string());
                }
                None => {
                    row.push(String::new());
                    row.push(String::new());
                }
            }
        }
        row.push(p.rank_minus.to_string());
        row.push(p.segment_id.to_string());
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| CliError::io("flushing csv", e.into_error()))
}

pub fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Invalid(format!("serializing report: {e}")))?;
    v.push(b'\n');
    Ok(v)
}

/// Files are collected first and written together at the end of a command.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn write_all(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        if self.files.is_empty() {
            return Ok(Vec::new());
        }
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        let mut written = Vec::new();
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_order_ignores_input_order() {
        let a = [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)];
        let mut b = a;
        b.reverse();
        assert_eq!(sorted(&a), sorted(&b));
        assert_eq!(sorted(&a)[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn outputs_land_in_the_directory() {
        let dir = tempfile::tempdir().unwrap();
        let mut o = Outputs::default();
        o.add("a.json", json_bytes(&[1, 2]).unwrap());
        let files = o.write_all(&dir.path().join("sub")).unwrap();
        assert_eq!(std::fs::read_to_string(&files[0]).unwrap(), "[\n  1,\n  2\n]\n");
        assert!(Outputs::default().write_all(dir.path()).unwrap().is_empty());
    }
}
