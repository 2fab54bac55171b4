use super::kernel::{axpy, is_zero, scale};
use super::Fp;
use crate::error::{arg, Error, Result};
use crate::loops::text::parse_header_and_rows;

/// A list of coefficient rows over GF(p), all of length `ncols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfMatrix {
    fp: Fp,
    ncols: usize,
    rows: Vec<Vec<u8>>,
}

impl GfMatrix {
    pub fn new(fp: Fp, ncols: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        for r in &rows {
            check_vector(fp, ncols, r)?;
        }
        Ok(Self { fp, ncols, rows })
    }

    pub fn zero(fp: Fp, nrows: usize, ncols: usize) -> Self {
        Self {
            fp,
            ncols,
            rows: vec![vec![0; ncols]; nrows],
        }
    }

    pub fn identity(fp: Fp, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        Self { fp, ncols: n, rows }
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<u8>) -> Result<()> {
        check_vector(self.fp, self.ncols, &row)?;
        self.rows.push(row);
        Ok(())
    }

    /// Gauss–Jordan elimination to reduced row-echelon form.
    pub fn rref(&self) -> RrefBasis {
        let fp = self.fp;
        let mut rows: Vec<Vec<u8>> = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.ncols {
            let Some(found) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, found);
            let lead = rows[rank][col];
            scale(fp, &mut rows[rank], fp.inv(lead));
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let c = fp.neg(row[col]);
                    axpy(fp, row, &pivot_row, c);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        RrefBasis {
            fp,
            ncols: self.ncols,
            rows,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self) -> RrefBasis {
        self.rref().nullspace()
    }
}

pub(crate) fn check_vector(fp: Fp, ncols: usize, v: &[u8]) -> Result<()> {
    if v.len() != ncols {
        return arg(format!("vector has length {}, expected {ncols}", v.len()));
    }
    if v.iter().any(|&x| x >= fp.p()) {
        return arg(format!("vector entry out of range for p = {}", fp.p()));
    }
    Ok(())
}

/// A subspace given by a basis in reduced row-echelon form.
///
/// Rows are nonzero, pivots strictly increase, each pivot entry is 1 and
/// every other row is 0 in that column. Two bases of the same subspace are
/// therefore identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RrefBasis {
    pub(crate) fp: Fp,
    pub(crate) ncols: usize,
    pub(crate) rows: Vec<Vec<u8>>,
    pub(crate) pivots: Vec<usize>,
}

impl RrefBasis {
    pub fn empty(fp: Fp, ncols: usize) -> Self {
        Self {
            fp,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Row-reduces arbitrary spanning vectors.
    pub fn span(fp: Fp, ncols: usize, vectors: Vec<Vec<u8>>) -> Result<Self> {
        Ok(GfMatrix::new(fp, ncols, vectors)?.rref())
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> GfMatrix {
        GfMatrix {
            fp: self.fp,
            ncols: self.ncols,
            rows: self.rows.clone(),
        }
    }

    /// Canonical representative of `v + rowspace`: the unique element of the
    /// coset that vanishes on every pivot column.
    pub fn reduce_mod(&self, v: &[u8]) -> Result<Vec<u8>> {
        check_vector(self.fp, self.ncols, v)?;
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        Ok(w)
    }

    pub(crate) fn reduce_in_place(&self, w: &mut [u8]) {
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let c = w[col];
            if c != 0 {
                axpy(self.fp, w, row, self.fp.neg(c));
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> Result<bool> {
        Ok(is_zero(&self.reduce_mod(v)?))
    }

    pub fn is_subspace_of(&self, other: &RrefBasis) -> bool {
        self.fp == other.fp
            && self.ncols == other.ncols
            && self.rows.iter().all(|r| other.contains(r).unwrap_or(false))
    }

    /// Solutions of the homogeneous system whose equations are these rows.
    pub fn nullspace(&self) -> RrefBasis {
        let fp = self.fp;
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let vectors: Vec<Vec<u8>> = (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u8; self.ncols];
                v[f] = 1;
                for (row, &c) in self.rows.iter().zip(&self.pivots) {
                    v[c] = fp.neg(row[f]);
                }
                v
            })
            .collect();
        GfMatrix {
            fp,
            ncols: self.ncols,
            rows: vectors,
        }
        .rref()
    }

    /// Text dump: header `gfbasis p ncols`, then one row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("gfbasis {} {}\n", self.fp.p(), self.ncols);
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (header, rows) = parse_header_and_rows(text)?;
        let bad = || Error::Parse {
            line: 1,
            msg: "expected `gfbasis p ncols`".into(),
        };
        let [kind, p, ncols] = header.as_slice() else {
            return Err(bad());
        };
        if kind != "gfbasis" {
            return Err(bad());
        }
        let p: u32 = p.parse().map_err(|_| bad())?;
        let ncols: usize = ncols.parse().map_err(|_| bad())?;
        let fp = Fp::new(p)?;
        let rows: Vec<Vec<u8>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.min(255) as u8).collect())
            .collect();
        let basis = RrefBasis::span(fp, ncols, rows.clone())?;
        if basis.rows != rows {
            return arg("gfbasis rows are not in reduced row-echelon form");
        }
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn rref_examples() {
        let z = GfMatrix::zero(f3(), 2, 3).rref();
        assert_eq!(z.rank(), 0);
        let id = GfMatrix::identity(f3(), 3);
        assert_eq!(id.rref().rows(), id.rows());
        let m = GfMatrix::new(f3(), 3, vec![vec![1, 1, 0], vec![2, 2, 0]]).unwrap();
        let b = m.rref();
        assert_eq!(b.rows(), &[vec![1, 1, 0]]);
        assert_eq!(b.rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        let empty = GfMatrix::new(f3(), 4, vec![]).unwrap();
        assert_eq!(empty.nullspace().dim(), 4);
        let m = GfMatrix::new(f3(), 3, vec![vec![1, 1, 0]]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.dim(), 2);
        for v in ns.rows() {
            assert_eq!((v[0] + v[1]) % 3, 0);
        }
    }

    #[test]
    fn reduce_mod_examples() {
        let b = RrefBasis::span(f3(), 3, vec![vec![1, 1, 0]]).unwrap();
        assert_eq!(b.reduce_mod(&[2, 0, 1]).unwrap(), vec![0, 1, 1]);
        assert_eq!(b.reduce_mod(&[2, 2, 0]).unwrap(), vec![0, 0, 0]);
        let e = RrefBasis::empty(f3(), 3);
        assert_eq!(e.reduce_mod(&[2, 0, 1]).unwrap(), vec![2, 0, 1]);
        assert!(b.reduce_mod(&[1, 1]).is_err());
    }

    #[test]
    fn text_dump_round_trip() {
        let b = RrefBasis::span(f3(), 4, vec![vec![1, 2, 0, 1], vec![0, 0, 1, 2]]).unwrap();
        let text = b.to_text();
        assert_eq!(text, "gfbasis 3 4\n1 2 0 1\n0 0 1 2\n");
        assert_eq!(RrefBasis::from_text(&text).unwrap(), b);
        assert!(RrefBasis::from_text("gfbasis 3 2\n0 1\n1 0\n").is_err());
    }
}
