//! Finite loops and quandles as Cayley tables.
//!
//! Elements are the indices `0..n`. A [`LoopTable`] always has its identity
//! at index 0; a [`QuandleTable`] has no identity. Both wrap a plain
//! [`CayleyTable`], which is also usable on its own for structures that are
//! neither (e.g. a left quasigroup that is not latin).

mod predicates;
mod structure;
pub mod text;

pub use predicates::InnerKind;

use crate::error::{arg, Error, Result};
use crate::perm::Permutation;

/// An `n × n` multiplication table over `0..n`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CayleyTable {
    n: usize,
    cells: Vec<u16>,
}

impl CayleyTable {
    pub fn new(n: usize, cells: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return arg("table order must be positive");
        }
        if n > u16::MAX as usize {
            return arg(format!("table order {n} too large"));
        }
        if cells.len() != n * n {
            return arg(format!("expected {} cells, got {}", n * n, cells.len()));
        }
        if let Some(bad) = cells.iter().find(|&&c| c >= n) {
            return arg(format!("entry {bad} out of range 0..{n}"));
        }
        Ok(Self {
            n,
            cells: cells.into_iter().map(|c| c as u16).collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut cells = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                cells.push(f(x, y));
            }
        }
        Self::new(n, cells)
    }

    pub(crate) fn from_raw(n: usize, cells: Vec<u16>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        Self { n, cells }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y] as usize
    }

    pub fn row(&self, x: usize) -> &[u16] {
        &self.cells[x * self.n..(x + 1) * self.n]
    }

    pub fn cells(&self) -> &[u16] {
        &self.cells
    }

    pub fn check_index(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            arg(format!("element {x} out of range 0..{}", self.n))
        }
    }

    pub fn rows_are_permutations(&self) -> bool {
        (0..self.n).all(|x| is_bijective(self.n, (0..self.n).map(|y| self.mul(x, y))))
    }

    pub fn columns_are_permutations(&self) -> bool {
        (0..self.n).all(|y| is_bijective(self.n, (0..self.n).map(|x| self.mul(x, y))))
    }

    /// Table of the isomorphic copy under `phi`: `phi(x) * phi(y) = phi(x * y)`.
    pub fn relabel(&self, phi: &Permutation) -> CayleyTable {
        let n = self.n;
        let mut cells = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                cells[phi.apply(x) * n + phi.apply(y)] = phi.apply(self.mul(x, y)) as u16;
            }
        }
        CayleyTable { n, cells }
    }

    /// Whether `phi` is an isomorphism from `self` onto `other`.
    pub fn is_isomorphism_onto(&self, other: &CayleyTable, phi: &Permutation) -> bool {
        self.n == other.n
            && phi.degree() == self.n
            && (0..self.n).all(|x| {
                (0..self.n)
                    .all(|y| phi.apply(self.mul(x, y)) == other.mul(phi.apply(x), phi.apply(y)))
            })
    }
}

fn is_bijective(n: usize, it: impl Iterator<Item = usize>) -> bool {
    let mut seen = vec![false; n];
    for v in it {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Common read access to anything backed by a Cayley table.
pub trait Magma {
    fn cayley(&self) -> &CayleyTable;

    fn order(&self) -> usize {
        self.cayley().order()
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.cayley().mul(x, y)
    }

    /// `L_x : y ↦ x·y`.
    fn left_translation(&self, x: usize) -> Result<Permutation> {
        let t = self.cayley();
        t.check_index(x)?;
        Permutation::from_images((0..t.order()).map(|y| t.mul(x, y)).collect())
            .map_err(|_| Error::Unsupported(format!("left translation by {x} is not a bijection")))
    }

    /// `R_x : y ↦ y·x`.
    fn right_translation(&self, x: usize) -> Result<Permutation> {
        let t = self.cayley();
        t.check_index(x)?;
        Permutation::from_images((0..t.order()).map(|y| t.mul(y, x)).collect()).map_err(|_| {
            Error::Unsupported(format!("right translation by {x} is not a bijection"))
        })
    }

    /// `x\y`, the unique `z` with `x·z = y`.
    fn left_divide(&self, x: usize, y: usize) -> Result<usize> {
        let t = self.cayley();
        t.check_index(x)?;
        t.check_index(y)?;
        unique(
            (0..t.order()).filter(|&z| t.mul(x, z) == y),
            || format!("{x}\\{y} is not uniquely defined"),
        )
    }

    /// `y/x`, the unique `z` with `z·x = y`.
    fn right_divide(&self, y: usize, x: usize) -> Result<usize> {
        let t = self.cayley();
        t.check_index(x)?;
        t.check_index(y)?;
        unique(
            (0..t.order()).filter(|&z| t.mul(z, x) == y),
            || format!("{y}/{x} is not uniquely defined (not a right quasigroup)"),
        )
    }
}

fn unique(mut it: impl Iterator<Item = usize>, msg: impl FnOnce() -> String) -> Result<usize> {
    match (it.next(), it.next()) {
        (Some(z), None) => Ok(z),
        _ => Err(Error::Unsupported(msg())),
    }
}

impl Magma for CayleyTable {
    fn cayley(&self) -> &CayleyTable {
        self
    }
}

/// A finite loop with identity element 0.
///
/// Division tables and (when every element has one) two-sided inverses are
/// computed once at construction.
#[derive(Clone, Debug)]
pub struct LoopTable {
    table: CayleyTable,
    ldiv: Vec<u16>,
    rdiv: Vec<u16>,
    inverses: Option<Vec<u16>>,
}

impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for LoopTable {}

impl std::hash::Hash for LoopTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.table.hash(state);
    }
}

impl LoopTable {
    /// Validates the loop axioms with 0 as the identity.
    pub fn new(table: CayleyTable) -> Result<Self> {
        let n = table.order();
        if !table.rows_are_permutations() {
            return Err(Error::Precondition("some left translation is not a bijection".into()));
        }
        if !table.columns_are_permutations() {
            return Err(Error::Precondition("some right translation is not a bijection".into()));
        }
        if (0..n).any(|x| table.mul(0, x) != x || table.mul(x, 0) != x) {
            return Err(Error::Precondition("element 0 is not a two-sided identity".into()));
        }
        Ok(Self::from_valid(table))
    }

    pub fn from_cells(n: usize, cells: Vec<usize>) -> Result<Self> {
        Self::new(CayleyTable::new(n, cells)?)
    }

    /// Accepts any loop table, moving its identity element to index 0 by
    /// swapping labels.
    pub fn new_relabeled(table: CayleyTable) -> Result<Self> {
        let n = table.order();
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table.mul(e, x) == x && table.mul(x, e) == x))
            .ok_or_else(|| Error::Precondition("table has no two-sided identity".into()))?;
        if e == 0 {
            return Self::new(table);
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, e);
        let swap = Permutation::from_images(swap)?;
        Self::new(table.relabel(&swap))
    }

    pub(crate) fn from_valid(table: CayleyTable) -> Self {
        let n = table.order();
        let mut ldiv = vec![0u16; n * n];
        let mut rdiv = vec![0u16; n * n];
        for x in 0..n {
            for z in 0..n {
                let y = table.mul(x, z);
                ldiv[x * n + y] = z as u16;
                rdiv[y * n + z] = x as u16;
            }
        }
        let mut inverses = Vec::with_capacity(n);
        let mut all = true;
        for x in 0..n {
            let r = ldiv[x * n] as usize; // x·r = 0
            if table.mul(r, x) == 0 {
                inverses.push(r as u16);
            } else {
                all = false;
                break;
            }
        }
        Self {
            table,
            ldiv,
            rdiv,
            inverses: all.then_some(inverses),
        }
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Self {
        Self::abelian(&[n])
    }

    /// The abelian group `Z_{m1} × … × Z_{mk}`, elements encoded in mixed
    /// radix with the first factor most significant.
    pub fn abelian(moduli: &[usize]) -> Self {
        let n: usize = moduli.iter().product();
        let digits = |mut v: usize| {
            let mut d = vec![0; moduli.len()];
            for (i, &m) in moduli.iter().enumerate().rev() {
                d[i] = v % m;
                v /= m;
            }
            d
        };
        let table = CayleyTable::from_fn(n, |x, y| {
            let (dx, dy) = (digits(x), digits(y));
            moduli
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &m)| acc * m + (dx[i] + dy[i]) % m)
        })
        .expect("abelian group table is well formed");
        Self::from_valid(table)
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    #[inline]
    pub fn ldiv(&self, x: usize, y: usize) -> usize {
        self.ldiv[x * self.table.order() + y] as usize
    }

    /// `y/x`.
    #[inline]
    pub fn rdiv(&self, y: usize, x: usize) -> usize {
        self.rdiv[y * self.table.order() + x] as usize
    }

    /// Two-sided inverses, if every element has one.
    pub fn inverses(&self) -> Option<&[u16]> {
        self.inverses.as_deref()
    }

    pub fn two_sided_inverses(&self) -> Result<&[u16]> {
        self.inverses()
            .ok_or_else(|| Error::Unsupported("some element has no two-sided inverse".into()))
    }

    /// Isomorphic copy under `phi`, which must fix the identity.
    pub fn relabel(&self, phi: &Permutation) -> Result<LoopTable> {
        if phi.degree() != self.order() {
            return arg("relabeling has the wrong degree");
        }
        if phi.apply(0) != 0 {
            return arg("relabeling must fix the identity");
        }
        Ok(Self::from_valid(self.table.relabel(phi)))
    }
}

impl Magma for LoopTable {
    fn cayley(&self) -> &CayleyTable {
        &self.table
    }

    fn left_divide(&self, x: usize, y: usize) -> Result<usize> {
        self.table.check_index(x)?;
        self.table.check_index(y)?;
        Ok(self.ldiv(x, y))
    }

    fn right_divide(&self, y: usize, x: usize) -> Result<usize> {
        self.table.check_index(x)?;
        self.table.check_index(y)?;
        Ok(self.rdiv(y, x))
    }
}

/// An involutory latin quandle.
///
/// Construction verifies all five axioms: left quasigroup, idempotence,
/// left distributivity, `L_x² = 1`, and the latin (column) property.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuandleTable {
    table: CayleyTable,
}

impl QuandleTable {
    pub fn new(table: CayleyTable) -> Result<Self> {
        Self::check_axioms(&table)?;
        Ok(Self { table })
    }

    pub fn from_cells(n: usize, cells: Vec<usize>) -> Result<Self> {
        Self::new(CayleyTable::new(n, cells)?)
    }

    /// Names the first failing axiom.
    pub fn check_axioms(t: &CayleyTable) -> Result<()> {
        let n = t.order();
        let fail = |what: &str| Err(Error::Precondition(format!("not a quandle table: {what}")));
        if !t.rows_are_permutations() {
            return fail("some left translation is not a bijection");
        }
        if (0..n).any(|x| t.mul(x, x) != x) {
            return fail("not idempotent");
        }
        if (0..n).any(|x| (0..n).any(|y| t.mul(x, t.mul(x, y)) != y)) {
            return fail("not involutory");
        }
        for x in 0..n {
            for y in 0..n {
                let xy = t.mul(x, y);
                for z in 0..n {
                    if t.mul(x, t.mul(y, z)) != t.mul(xy, t.mul(x, z)) {
                        return fail("not left distributive");
                    }
                }
            }
        }
        if !t.columns_are_permutations() {
            return fail("not latin");
        }
        Ok(())
    }

    /// The dihedral quandle on `Z_n`: `x·y = 2x − y`. Involutory latin for odd `n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        Self::new(CayleyTable::from_fn(n, |x, y| (2 * x + n - y) % n)?)
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn relabel(&self, phi: &Permutation) -> Result<QuandleTable> {
        if phi.degree() != self.table.order() {
            return arg("relabeling has the wrong degree");
        }
        Ok(Self {
            table: self.table.relabel(phi),
        })
    }
}

impl Magma for QuandleTable {
    fn cayley(&self) -> &CayleyTable {
        &self.table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translations_of_cyclic_groups() {
        let z3 = LoopTable::cyclic(3);
        assert!(z3.left_translation(0).unwrap().is_identity());
        assert_eq!(z3.left_translation(1).unwrap().to_vec(), vec![1, 2, 0]);
        assert!(z3.left_translation(3).is_err());

        let z9 = LoopTable::cyclic(9);
        let l3 = z9.left_translation(3).unwrap();
        assert_eq!(l3.cycle_type(), vec![3, 3, 3]);
    }

    #[test]
    fn divisions() {
        let z9 = LoopTable::cyclic(9);
        assert_eq!(z9.left_divide(2, 0).unwrap(), 7);
        for x in 0..9 {
            for y in 0..9 {
                assert_eq!(z9.left_divide(x, z9.mul(x, y)).unwrap(), y);
                assert_eq!(z9.right_divide(z9.mul(y, x), x).unwrap(), y);
            }
        }
        let q = QuandleTable::dihedral(3).unwrap();
        assert_eq!(q.right_divide(1, 0).unwrap(), 2);
        assert_eq!(q.mul(2, 0), 1);
    }

    #[test]
    fn right_divide_needs_latin_property() {
        // x·y = y: a left quasigroup whose columns are constant.
        let t = CayleyTable::from_fn(3, |_, y| y).unwrap();
        assert!(t.left_divide(1, 2).is_ok());
        assert!(matches!(t.right_divide(1, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn loop_validation_and_relabeling() {
        // Z_3 with identity stored at index 2.
        let t = CayleyTable::from_fn(3, |x, y| (x + y + 1) % 3).unwrap();
        assert!(LoopTable::new(t.clone()).is_err());
        let l = LoopTable::new_relabeled(t).unwrap();
        assert_eq!(l.mul(1, 0), 1);
        assert_eq!(l.inverses().unwrap().len(), 3);
    }

    #[test]
    fn quandle_axioms_are_named() {
        let t = CayleyTable::from_fn(3, |x, _| x).unwrap();
        let err = QuandleTable::new(t).unwrap_err().to_string();
        assert!(err.contains("left translation"), "{err}");
        // Z_3 is not idempotent.
        let err = QuandleTable::new(LoopTable::cyclic(3).table().clone()).unwrap_err();
        assert!(err.to_string().contains("idempotent"));
        assert!(QuandleTable::dihedral(9).is_ok());
        // Dihedral on Z_4 is not latin.
        assert!(QuandleTable::dihedral(4).unwrap_err().to_string().contains("latin"));
    }
}
