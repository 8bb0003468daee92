use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Categorical data, stored by column. Category codes index into the sorted
/// list of distinct labels of each column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    names: Vec<String>,
    levels: Vec<Vec<String>>,
    columns: Vec<Vec<u32>>,
    rows: usize,
}

impl Dataset {
    /// Reads a comma-separated file with a header row. Every cell is a
    /// category label; empty cells are rejected.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let names: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let width = names.len();
        let mut raw: Vec<Vec<String>> = vec![Vec::new(); width];
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != width {
                return Err(Error::Dataset(format!("row {} has {} cells, expected {width}", line + 1, rec.len())));
            }
            for (c, cell) in rec.iter().enumerate() {
                if cell.trim().is_empty() {
                    return Err(Error::Dataset(format!("missing value in row {}, column {:?}", line + 1, names[c])));
                }
                raw[c].push(cell.to_string());
            }
        }
        let mut levels = Vec::with_capacity(width);
        let mut columns = Vec::with_capacity(width);
        for col in raw {
            let codes: BTreeMap<&str, u32> = {
                let mut m: BTreeMap<&str, u32> = col.iter().map(|s| (s.as_str(), 0)).collect();
                for (i, v) in m.values_mut().enumerate() {
                    *v = i as u32;
                }
                m
            };
            columns.push(col.iter().map(|s| codes[s.as_str()]).collect());
            levels.push(codes.keys().map(|s| s.to_string()).collect());
        }
        let rows = columns.first().map_or(0, Vec::len);
        Dataset::checked(names, levels, columns, rows)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    /// Builds a dataset from integer codes; column `c` has levels
    /// `0..=max(c)`.
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<u32>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::Dataset(format!("{} names for {} columns", names.len(), columns.len())));
        }
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dataset("columns differ in length".into()));
        }
        let levels = columns
            .iter()
            .map(|c| {
                let r = c.iter().max().map_or(1, |m| m + 1);
                (0..r).map(|v| v.to_string()).collect()
            })
            .collect();
        Dataset::checked(names, levels, columns, rows)
    }

    fn checked(names: Vec<String>, levels: Vec<Vec<String>>, columns: Vec<Vec<u32>>, rows: usize) -> Result<Self> {
        if names.len() < 2 {
            return Err(Error::Dataset(format!("need at least 2 columns, got {}", names.len())));
        }
        if rows == 0 {
            return Err(Error::Dataset("no data rows".into()));
        }
        Ok(Dataset { names, levels, columns, rows })
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of categories of column `v`.
    pub fn arity(&self, v: usize) -> usize {
        self.levels[v].len()
    }

    pub fn level_labels(&self, v: usize) -> &[String] {
        &self.levels[v]
    }

    pub fn column(&self, v: usize) -> &[u32] {
        &self.columns[v]
    }

    /// The rows at `indices` (repeats allowed), keeping the category sets.
    pub fn resample(&self, indices: &[usize]) -> Dataset {
        Dataset {
            names: self.names.clone(),
            levels: self.levels.clone(),
            columns: self.columns.iter().map(|c| indices.iter().map(|&i| c[i]).collect()).collect(),
            rows: indices.len(),
        }
    }

    /// Stable 64-bit FNV-1a digest of names, categories and values, as hex.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for (name, levels) in self.names.iter().zip(&self.levels) {
            eat(name.as_bytes());
            eat(&[0xff]);
            for l in levels {
                eat(l.as_bytes());
                eat(&[0xfe]);
            }
        }
        for col in &self.columns {
            for v in col {
                eat(&v.to_le_bytes());
            }
        }
        format!("{h:016x}")
    }

    /// Binary Markov chain `X1 -> X2 -> ... -> Xvars`: `X1` is a fair coin and
    /// each later variable copies its predecessor, flipped with probability
    /// `flip`.
    pub fn simulate_chain(vars: usize, rows: usize, flip: f64, seed: u64) -> Result<Dataset> {
        if !(0.0..=1.0).contains(&flip) {
            return Err(Error::InvalidArgument(format!("flip probability must lie in [0, 1], got {flip}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut columns = vec![Vec::with_capacity(rows); vars];
        for _ in 0..rows {
            let mut x = u32::from(rng.gen_bool(0.5));
            columns[0].push(x);
            for col in columns.iter_mut().skip(1) {
                if rng.gen_bool(flip) {
                    x ^= 1;
                }
                col.push(x);
            }
        }
        Dataset::from_columns(default_names(vars), columns)
    }

    /// Mutually independent uniform columns with `arity` categories each.
    pub fn simulate_independent(vars: usize, rows: usize, arity: u32, seed: u64) -> Result<Dataset> {
        if arity == 0 {
            return Err(Error::InvalidArgument("arity must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let columns = (0..vars).map(|_| (0..rows).map(|_| rng.gen_range(0..arity)).collect()).collect();
        Dataset::from_columns(default_names(vars), columns)
    }
}

fn default_names(vars: usize) -> Vec<String> {
    (1..=vars).map(|i| format!("X{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_csv() {
        let d = Dataset::from_reader("a,b,c\nx,1,lo\ny,1,hi\nx,2,hi\n".as_bytes()).unwrap();
        assert_eq!(d.n_vars(), 3);
        assert_eq!(d.n_rows(), 3);
        assert_eq!(d.column(0), &[0, 1, 0]);
        assert_eq!(d.level_labels(2), &["hi".to_string(), "lo".to_string()]);
        assert_eq!(d.column(2), &[1, 0, 0]);
        assert_eq!(d.arity(1), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Dataset::from_reader("a\nx\n".as_bytes()).is_err());
        assert!(Dataset::from_reader("a,b\n".as_bytes()).is_err());
        assert!(Dataset::from_reader("a,b\nx,\n".as_bytes()).is_err());
        assert!(Dataset::from_reader("a,b\nx,y,z\n".as_bytes()).is_err());
        assert!(Dataset::from_columns(vec!["a".into()], vec![vec![0]]).is_err());
    }

    #[test]
    fn fingerprint_tracks_content() {
        let a = Dataset::simulate_chain(3, 50, 0.2, 1).unwrap();
        assert_eq!(a.fingerprint(), Dataset::simulate_chain(3, 50, 0.2, 1).unwrap().fingerprint());
        assert_ne!(a.fingerprint(), Dataset::simulate_chain(3, 50, 0.2, 2).unwrap().fingerprint());
        let idx: Vec<usize> = (0..50).collect();
        assert_eq!(a.resample(&idx), a);
    }
}
