//! Incremental row reduction for systems with far more equations than
//! unknowns.
//!
//! Equations arrive as sparse coefficient lists and are buffered; when the
//! buffer exceeds the batch size it is deduplicated and folded into a basis
//! kept in fully reduced row-echelon form. Rows are stored only on a *frame*
//! of columns, the columns that were free at the last compaction; columns
//! pivoted before that are implicit (1 on their own row, 0 elsewhere). As
//! the rank grows the frame is periodically shrunk, so reducing an equation
//! against the basis costs `O(terms × frame)` instead of `O(terms × ncols)`.

use super::kernel::{axpy, scale};
use super::matrix::check_vector;
use super::{Fp, RrefBasis};
use crate::error::{arg, Result};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct StreamingSolver {
    fp: Fp,
    ncols: usize,
    batch_size: usize,
    pending_terms: Vec<(u32, u8)>,
    pending_ends: Vec<usize>,
    frame: Vec<u32>,
    frame_pos: Vec<u32>,
    pivot_row: Vec<u32>,
    rows: Vec<Vec<u8>>,
    row_pivot: Vec<u32>,
    frame_pivots: usize,
    equations_seen: u64,
    scratch: Vec<u8>,
    norm: Vec<(u32, u8)>,
}

impl StreamingSolver {
    /// Batch size defaults to `4 × ncols`.
    pub fn new(fp: Fp, ncols: usize) -> Self {
        Self::with_batch_size(fp, ncols, 4 * ncols.max(1))
    }

    pub fn with_batch_size(fp: Fp, ncols: usize, batch_size: usize) -> Self {
        assert!(ncols < NONE as usize, "too many columns");
        Self {
            fp,
            ncols,
            batch_size: batch_size.max(1),
            pending_terms: Vec::new(),
            pending_ends: Vec::new(),
            frame: (0..ncols as u32).collect(),
            frame_pos: (0..ncols as u32).collect(),
            pivot_row: vec![NONE; ncols],
            rows: Vec::new(),
            row_pivot: Vec::new(),
            frame_pivots: 0,
            equations_seen: 0,
            scratch: Vec::new(),
            norm: Vec::new(),
        }
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn equations_seen(&self) -> u64 {
        self.equations_seen
    }

    /// Adds a dense equation.
    pub fn ingest(&mut self, equation: &[u8]) -> Result<()> {
        check_vector(self.fp, self.ncols, equation)?;
        let terms: Vec<(usize, i64)> = equation
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| (i, a as i64))
            .collect();
        self.ingest_sparse(&terms)
    }

    /// Adds `Σ coeff·x[col] = 0`. Repeated columns are summed; coefficients
    /// may be negative.
    pub fn ingest_sparse(&mut self, terms: &[(usize, i64)]) -> Result<()> {
        let fp = self.fp;
        let mut norm = std::mem::take(&mut self.norm);
        norm.clear();
        for &(c, a) in terms {
            if c >= self.ncols {
                self.norm = norm;
                return arg(format!("column {c} out of range 0..{}", self.ncols));
            }
            let a = fp.reduce(a);
            if a != 0 {
                norm.push((c as u32, a));
            }
        }
        self.equations_seen += 1;
        norm.sort_unstable_by_key(|t| t.0);
        let mut merged: usize = 0;
        for i in 0..norm.len() {
            if merged > 0 && norm[merged - 1].0 == norm[i].0 {
                norm[merged - 1].1 = fp.add(norm[merged - 1].1, norm[i].1);
            } else {
                norm[merged] = norm[i];
                merged += 1;
            }
        }
        norm.truncate(merged);
        norm.retain(|t| t.1 != 0);
        if let Some(&(_, lead)) = norm.first() {
            let s = fp.inv(lead);
            for t in norm.iter_mut() {
                t.1 = fp.mul(t.1, s);
            }
            self.pending_terms.extend_from_slice(&norm);
            self.pending_ends.push(self.pending_terms.len());
            if self.pending_ends.len() > self.batch_size {
                self.flush();
            }
        }
        self.norm = norm;
        Ok(())
    }

    /// Folds all buffered equations into the basis.
    pub fn flush(&mut self) {
        if self.pending_ends.is_empty() {
            return;
        }
        let terms = std::mem::take(&mut self.pending_terms);
        let ends = std::mem::take(&mut self.pending_ends);
        let mut eqs: Vec<&[(u32, u8)]> = Vec::with_capacity(ends.len());
        let mut start = 0;
        for &end in &ends {
            eqs.push(&terms[start..end]);
            start = end;
        }
        eqs.sort_unstable();
        eqs.dedup();
        for eq in eqs {
            if self.reduce_into_scratch(eq) {
                self.insert_scratch();
            }
        }
        self.pending_terms = terms;
        self.pending_terms.clear();
        self.pending_ends = ends;
        self.pending_ends.clear();
    }

    /// Leaves the reduced equation (over the frame) in `scratch`; returns
    /// whether it is nonzero.
    fn reduce_into_scratch(&mut self, eq: &[(u32, u8)]) -> bool {
        let fp = self.fp;
        let mut w = std::mem::take(&mut self.scratch);
        w.clear();
        w.resize(self.frame.len(), 0);
        for &(c, a) in eq {
            let pos = self.frame_pos[c as usize];
            if pos == NONE {
                let r = self.pivot_row[c as usize] as usize;
                axpy(fp, &mut w, &self.rows[r], fp.neg(a));
            } else {
                let pos = pos as usize;
                w[pos] = fp.add(w[pos], a);
            }
        }
        // Fully reduced rows vanish on every other pivot, so only the direct
        // terms can hit pivots that live inside the frame.
        for &(c, _) in eq {
            let pos = self.frame_pos[c as usize];
            let r = self.pivot_row[c as usize];
            if pos != NONE && r != NONE {
                let v = w[pos as usize];
                if v != 0 {
                    axpy(fp, &mut w, &self.rows[r as usize], fp.neg(v));
                }
            }
        }
        let nonzero = w.iter().any(|&x| x != 0);
        self.scratch = w;
        nonzero
    }

    fn insert_scratch(&mut self) {
        let fp = self.fp;
        let mut w = std::mem::take(&mut self.scratch);
        let pos = w.iter().position(|&x| x != 0).expect("nonzero residue");
        let lead = w[pos];
        scale(fp, &mut w, fp.inv(lead));
        for row in self.rows.iter_mut() {
            let c = row[pos];
            if c != 0 {
                axpy(fp, row, &w, fp.neg(c));
            }
        }
        let col = self.frame[pos];
        self.pivot_row[col as usize] = self.rows.len() as u32;
        self.row_pivot.push(col);
        self.rows.push(w);
        self.frame_pivots += 1;
        if self.frame_pivots * 4 >= self.frame.len() {
            self.compact();
        }
    }

    fn compact(&mut self) {
        let keep: Vec<usize> = (0..self.frame.len())
            .filter(|&i| self.pivot_row[self.frame[i] as usize] == NONE)
            .collect();
        for &c in &self.frame {
            self.frame_pos[c as usize] = NONE;
        }
        let frame: Vec<u32> = keep.iter().map(|&i| self.frame[i]).collect();
        for (i, &c) in frame.iter().enumerate() {
            self.frame_pos[c as usize] = i as u32;
        }
        for row in self.rows.iter_mut() {
            *row = keep.iter().map(|&i| row[i]).collect();
        }
        self.frame = frame;
        self.frame_pivots = 0;
    }

    pub fn rank(&mut self) -> usize {
        self.flush();
        self.rows.len()
    }

    /// Reduced row-echelon basis of the row space of everything ingested.
    pub fn basis(&mut self) -> RrefBasis {
        self.flush();
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&r| self.row_pivot[r]);
        let mut rows = Vec::with_capacity(order.len());
        let mut pivots = Vec::with_capacity(order.len());
        for r in order {
            let mut v = vec![0u8; self.ncols];
            for (pos, &c) in self.frame.iter().enumerate() {
                v[c as usize] = self.rows[r][pos];
            }
            v[self.row_pivot[r] as usize] = 1;
            rows.push(v);
            pivots.push(self.row_pivot[r] as usize);
        }
        RrefBasis {
            fp: self.fp,
            ncols: self.ncols,
            rows,
            pivots,
        }
    }

    /// Solution space of the ingested homogeneous system.
    pub fn nullspace(&mut self) -> RrefBasis {
        self.flush();
        let fp = self.fp;
        let free: Vec<usize> = (0..self.frame.len())
            .filter(|&i| self.pivot_row[self.frame[i] as usize] == NONE)
            .collect();
        let vectors: Vec<Vec<u8>> = free
            .iter()
            .map(|&pos| {
                let mut v = vec![0u8; self.ncols];
                v[self.frame[pos] as usize] = 1;
                for (row, &c) in self.rows.iter().zip(&self.row_pivot) {
                    v[c as usize] = fp.neg(row[pos]);
                }
                v
            })
            .collect();
        RrefBasis::span(fp, self.ncols, vectors).expect("well-formed vectors")
    }

    /// Ingests the basis of another solver over the same field and width.
    pub fn merge(&mut self, mut other: StreamingSolver) -> Result<()> {
        if other.fp != self.fp || other.ncols != self.ncols {
            return arg("cannot merge solvers of different shape");
        }
        let seen = self.equations_seen + other.equations_seen;
        for row in other.basis().rows() {
            self.ingest(row)?;
        }
        self.equations_seen = seen;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GfMatrix;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn zero_and_repeated_equations() {
        let mut s = StreamingSolver::new(f3(), 4);
        s.ingest(&[0, 0, 0, 0]).unwrap();
        assert_eq!(s.rank(), 0);
        s.ingest(&[1, 2, 0, 1]).unwrap();
        s.ingest(&[1, 2, 0, 1]).unwrap();
        s.ingest(&[2, 1, 0, 2]).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.equations_seen(), 4);
        assert!(s.ingest(&[1, 2, 0]).is_err());
        assert!(s.ingest_sparse(&[(4, 1)]).is_err());
    }

    #[test]
    fn sparse_terms_are_combined() {
        let mut s = StreamingSolver::new(f3(), 3);
        // x0 + x1 - x0 - x1 = 0 is trivial
        s.ingest_sparse(&[(0, 1), (1, 1), (0, -1), (1, -1)]).unwrap();
        assert_eq!(s.rank(), 0);
        s.ingest_sparse(&[(2, 4), (0, -1)]).unwrap();
        let b = s.basis();
        assert_eq!(b.rows(), &[vec![1, 0, 2]]);
    }

    #[test]
    fn matches_batch_rref_with_tiny_batches() {
        let rows = vec![
            vec![1, 1, 0, 2, 0],
            vec![0, 2, 1, 1, 1],
            vec![1, 0, 2, 0, 1],
            vec![2, 1, 1, 1, 2],
        ];
        let batch = GfMatrix::new(f3(), 5, rows.clone()).unwrap().rref();
        let mut s = StreamingSolver::with_batch_size(f3(), 5, 1);
        for r in &rows {
            s.ingest(r).unwrap();
        }
        assert_eq!(s.basis(), batch);
        assert_eq!(s.nullspace(), batch.nullspace());
    }
}
