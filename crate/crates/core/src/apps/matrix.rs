//! Sparse matrices with row- and column-major access, and Matrix Market I/O.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{ReadCounter, Scope};
use crate::error::{invalid, Error, Result};

/// Compressed sparse storage along one axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Compressed {
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<f64>,
}

impl Compressed {
    /// Builds from `(major, minor, value)` triplets sorted by `(major, minor)`.
    fn from_sorted(n_major: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut ptr = vec![0; n_major + 1];
        for (r, _, _) in triplets {
            ptr[r + 1] += 1;
        }
        for i in 0..n_major {
            ptr[i + 1] += ptr[i];
        }
        Self {
            ptr,
            idx: triplets.iter().map(|t| t.1).collect(),
            val: triplets.iter().map(|t| t.2).collect(),
        }
    }

    fn lane(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.ptr[i], self.ptr[i + 1]);
        (&self.idx[a..b], &self.val[a..b])
    }

    fn lane_len(&self, i: usize) -> usize {
        self.ptr[i + 1] - self.ptr[i]
    }
}

/// Game matrix `A = ‖a_ij‖` held in both CSR and CSC form.
///
/// Rows belong to the maximizing player, columns to the minimizing one.
/// Explicit zeros are dropped and duplicate coordinates summed on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseGameMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Compressed,
    cols: Compressed,
    bound: f64,
}

impl SparseGameMatrix {
    /// Builds from `(row, col, value)` triplets with 0-based indices.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        let mut t: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, v) in triplets {
            if i >= n_rows || j >= n_cols {
                return invalid(format!("entry ({i}, {j}) outside {n_rows}x{n_cols}"));
            }
            if !v.is_finite() {
                return invalid(format!("entry ({i}, {j}) is not finite"));
            }
            t.push((i, j, v));
        }
        t.sort_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(t.len());
        for (i, j, v) in t {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|e| e.2 != 0.0);
        let rows = Compressed::from_sorted(n_rows, &merged);
        let mut transposed: Vec<(usize, usize, f64)> =
            merged.iter().map(|&(i, j, v)| (j, i, v)).collect();
        transposed.sort_by_key(|e| (e.0, e.1));
        let cols = Compressed::from_sorted(n_cols, &transposed);
        let bound = merged.iter().map(|e| e.2.abs()).fold(0.0, f64::max);
        Ok(Self {
            n_rows,
            n_cols,
            rows,
            cols,
            bound,
        })
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return invalid("dense rows have inconsistent lengths");
        }
        Self::from_triplets(
            n_rows,
            n_cols,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, *v))),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.val.len()
    }

    /// `M = max |a_ij|` over stored entries (0 for the zero matrix).
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Average nonzeros per row and per column, whichever is larger.
    pub fn sparsity(&self) -> f64 {
        let nnz = self.nnz() as f64;
        (nnz / self.n_rows as f64).max(nnz / self.n_cols as f64)
    }

    /// Largest number of nonzeros in any single row or column.
    pub fn max_lane_nnz(&self) -> usize {
        let r = (0..self.n_rows)
            .map(|i| self.rows.lane_len(i))
            .max()
            .unwrap_or(0);
        let c = (0..self.n_cols)
            .map(|j| self.cols.lane_len(j))
            .max()
            .unwrap_or(0);
        r.max(c)
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.rows.lane_len(i)
    }

    pub fn col_nnz(&self, j: usize) -> usize {
        self.cols.lane_len(j)
    }

    /// Row `i` as `(column indices, values)`; counts its nonzeros as reads.
    pub fn row(&self, i: usize, counter: &mut ReadCounter, scope: Scope) -> (&[usize], &[f64]) {
        let lane = self.rows.lane(i);
        counter.record(scope, lane.0.len() as u64);
        lane
    }

    /// Column `j` as `(row indices, values)`; counts its nonzeros as reads.
    pub fn col(&self, j: usize, counter: &mut ReadCounter, scope: Scope) -> (&[usize], &[f64]) {
        let lane = self.cols.lane(j);
        counter.record(scope, lane.0.len() as u64);
        lane
    }

    /// Every stored entry in row-major order, counted as reads.
    pub fn entries<'a>(
        &'a self,
        counter: &mut ReadCounter,
        scope: Scope,
    ) -> impl Iterator<Item = (usize, usize, f64)> + 'a {
        counter.record(scope, self.nnz() as u64);
        (0..self.n_rows).flat_map(move |i| {
            let (idx, val) = self.rows.lane(i);
            idx.iter().zip(val).map(move |(j, v)| (i, *j, *v))
        })
    }

    /// Uncounted entry lookup; for tests and small-matrix utilities.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (idx, val) = self.rows.lane(i);
        idx.binary_search(&j).map_or(0.0, |p| val[p])
    }

    /// Uncounted `(i, j, a_ij)` list in row-major order.
    pub fn to_triplets(&self) -> Vec<(usize, usize, f64)> {
        self.entries(&mut ReadCounter::new(), Scope::Verify)
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_cols]; self.n_rows];
        let mut sink = ReadCounter::new();
        for (i, j, v) in self.entries(&mut sink, Scope::Verify) {
            out[i][j] = v;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            bound: self.bound,
        }
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.rows.val.iter_mut().for_each(|v| *v *= factor);
        out.cols.val.iter_mut().for_each(|v| *v *= factor);
        out.bound *= factor.abs();
        out
    }

    /// Checks the row and column layouts hold the same entry set.
    pub fn layouts_agree(&self) -> bool {
        let mut sink = ReadCounter::new();
        let mut from_cols: Vec<(usize, usize, f64)> = (0..self.n_cols)
            .flat_map(|j| {
                let (idx, val) = self.cols.lane(j);
                idx.iter()
                    .zip(val)
                    .map(move |(i, v)| (*i, j, *v))
                    .collect::<Vec<_>>()
            })
            .collect();
        from_cols.sort_by_key(|e| (e.0, e.1));
        let from_rows: Vec<_> = self.entries(&mut sink, Scope::Verify).collect();
        from_rows == from_cols
    }

    /// Validates that the matrix is square, nonnegative and row-stochastic.
    pub fn check_row_stochastic(&self, tol: f64) -> Result<()> {
        if self.n_rows != self.n_cols {
            return invalid("stochastic matrix must be square");
        }
        for i in 0..self.n_rows {
            let (_, val) = self.rows.lane(i);
            if val.iter().any(|v| *v < 0.0) {
                return invalid(format!("row {i} has a negative entry"));
            }
            let sum: f64 = val.iter().sum();
            if (sum - 1.0).abs() > tol {
                return invalid(format!("row {i} sums to {sum}, not 1"));
            }
        }
        Ok(())
    }

    /// Reads a Matrix Market `coordinate` file (`real` or `integer`, `general`).
    pub fn read_matrix_market<R: Read>(reader: R) -> Result<Self> {
        let mut lines = BufReader::new(reader).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty Matrix Market file".into()))??;
        let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
        if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
            return Err(Error::Parse(format!(
                "bad Matrix Market banner: {header:?}"
            )));
        }
        if fields[2] != "coordinate" {
            return Err(Error::Parse(format!("unsupported format {:?}", fields[2])));
        }
        if fields[3] != "real" && fields[3] != "integer" {
            return Err(Error::Parse(format!("unsupported field {:?}", fields[3])));
        }
        if fields[4] != "general" {
            return Err(Error::Parse(format!(
                "unsupported symmetry {:?}",
                fields[4]
            )));
        }
        let mut size: Option<(usize, usize, usize)> = None;
        let mut triplets = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse_usize = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
            };
            match size {
                None => {
                    if parts.len() != 3 {
                        return Err(Error::Parse(format!("bad size line {line:?}")));
                    }
                    size = Some((
                        parse_usize(parts[0])?,
                        parse_usize(parts[1])?,
                        parse_usize(parts[2])?,
                    ));
                }
                Some((r, c, _)) => {
                    if parts.len() != 3 {
                        return Err(Error::Parse(format!("bad entry line {line:?}")));
                    }
                    let (i, j) = (parse_usize(parts[0])?, parse_usize(parts[1])?);
                    if i == 0 || j == 0 || i > r || j > c {
                        return Err(Error::Parse(format!("entry ({i}, {j}) outside {r}x{c}")));
                    }
                    let v = parts[2]
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad value {:?}: {e}", parts[2])))?;
                    triplets.push((i - 1, j - 1, v));
                }
            }
        }
        let (r, c, nnz) = size.ok_or_else(|| Error::Parse("missing size line".into()))?;
        if triplets.len() != nnz {
            return Err(Error::Parse(format!(
                "size line declares {nnz} entries, found {}",
                triplets.len()
            )));
        }
        Self::from_triplets(r, c, triplets)
    }

    pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_matrix_market(std::fs::File::open(path)?)
    }

    pub fn write_matrix_market<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(out, "{} {} {}", self.n_rows, self.n_cols, self.nnz())?;
        let mut sink = ReadCounter::new();
        for (i, j, v) in self.entries(&mut sink, Scope::Verify) {
            writeln!(out, "{} {} {v:e}", i + 1, j + 1)?;
        }
        Ok(())
    }
}
