use std::fmt::Write as _;

use faer::sparse::{SparseColMat, Triplet};

use crate::error::{Error, Result};

/// Square sparse matrix as merged coordinate entries sorted by `(row, col)`.
///
/// Duplicates are summed in the order they were supplied, so the result is
/// reproducible whenever the input order is.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseMatrix {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len() / 2);
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        SparseMatrix { n, entries }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries
            .binary_search_by_key(&(r, c), |e| (e.0, e.1))
            .map(|i| self.entries[i].2)
            .unwrap_or(0.0)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// `y^T A x`.
    pub fn bilinear(&self, y: &[f64], x: &[f64]) -> f64 {
        self.entries.iter().map(|&(r, c, v)| y[r] * v * x[c]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.2.abs()))
    }

    /// `max |A - A^T|`.
    pub fn asymmetry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, &(r, c, v)| m.max((v - self.get(c, r)).abs()))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for &(r, c, v) in &self.entries {
            d[r][c] += v;
        }
        d
    }

    pub fn to_faer(&self) -> Result<SparseColMat<usize, f64>> {
        let trip: Vec<Triplet<usize, usize, f64>> = self.entries.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
        SparseColMat::try_new_from_triplets(self.n, self.n, &trip).map_err(|e| Error::Solver(format!("{e:?}")))
    }

    /// Matrix Market coordinate format, one-based indices.
    pub fn to_matrix_market(&self) -> String {
        let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
        let _ = writeln!(out, "{} {} {}", self.n, self.n, self.entries.len());
        for &(r, c, v) in &self.entries {
            let _ = writeln!(out, "{} {} {:.17e}", r + 1, c + 1, v);
        }
        out
    }
}

/// One value per line.
pub fn vector_text(v: &[f64]) -> String {
    let mut out = String::with_capacity(v.len() * 24);
    for x in v {
        let _ = writeln!(out, "{x:.17e}");
    }
    out
}
