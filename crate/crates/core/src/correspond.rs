//! Correspondences between involutory latin quandles, uniquely 2-divisible
//! left Bruck loops and Γ-loops.
//!
//! All conversions are elementwise on the same underlying set; the only
//! relabeling is the swap that moves a quandle's chosen base point to 0.

use crate::error::{Error, Result};
use crate::loops::{CayleyTable, LoopTable, Magma, QuandleTable};
use crate::perm::Permutation;

fn require_odd(n: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::Unsupported(format!("order {n} is even")));
    }
    Ok(())
}

/// The unique `y` with `y·y = x`, computed as `x^((m+1)/2)` with `m = |x|`.
pub fn element_sqrt(q: &LoopTable, x: usize) -> Result<usize> {
    require_odd(q.order())?;
    let m = q.element_order(x)?;
    if m % 2 == 0 {
        return Err(Error::Unsupported(format!("element {x} has even order {m}")));
    }
    let y = q.left_power(x, m.div_ceil(2));
    if q.mul(y, y) != x {
        return Err(Error::Unsupported(format!("element {x} has no square root among its powers")));
    }
    if (0..q.order()).filter(|&z| q.mul(z, z) == x).count() != 1 {
        return Err(Error::Unsupported(format!("element {x} has several square roots")));
    }
    Ok(y)
}

/// Square roots of all elements, checking that squaring is a bijection.
fn sqrt_table(q: &LoopTable) -> Result<Vec<usize>> {
    require_odd(q.order())?;
    let n = q.order();
    let mut root = vec![usize::MAX; n];
    for y in 0..n {
        let s = q.mul(y, y);
        if root[s] != usize::MAX {
            return Err(Error::Unsupported(format!("element {s} has several square roots")));
        }
        root[s] = y;
    }
    for x in 0..n {
        let m = q.element_order(x)?;
        if m % 2 == 0 || q.left_power(x, m.div_ceil(2)) != root[x] {
            return Err(Error::Unsupported(format!("square root of {x} is not one of its powers")));
        }
    }
    Ok(root)
}

/// `σ^((m+1)/2)` for `σ` of odd order `m`: the square root of `σ` in `⟨σ⟩`.
pub fn permutation_sqrt(sigma: &Permutation) -> Result<Permutation> {
    let m = sigma.order();
    if m.is_multiple_of(2) {
        return Err(Error::Unsupported(format!("permutation has even order {m}")));
    }
    Ok(sigma.pow(m.div_ceil(2)))
}

fn base_swap(n: usize, e: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.swap(0, e);
    Permutation::from_images(images).expect("a transposition")
}

/// The left Bruck loop `x + y = (x/e)(ey)` of a quandle with base point `e`,
/// relabeled so that `e` becomes 0.
pub fn quandle_to_bruck(q: &QuandleTable, e: usize) -> Result<LoopTable> {
    let n = q.order();
    q.table().check_index(e)?;
    QuandleTable::check_axioms(q.table())?;
    let t = q.table();
    // x/e: the unique z with z·e = x
    let mut div_e = vec![0usize; n];
    for z in 0..n {
        div_e[t.mul(z, e)] = z;
    }
    let sum = CayleyTable::from_fn(n, |x, y| t.mul(div_e[x], t.mul(e, y)))?;
    let swap = base_swap(n, e);
    let b = LoopTable::new(sum.relabel(&swap))
        .map_err(|err| Error::Internal(format!("quandle sum is not a loop: {err}")))?;
    if !b.is_left_bruck() {
        return Err(Error::Internal("quandle sum is not a left Bruck loop".into()));
    }
    Ok(b)
}

/// The involutory latin quandle `x·y = (x + x) + (−y)` of a uniquely
/// 2-divisible left Bruck loop.
pub fn bruck_to_quandle(b: &LoopTable) -> Result<QuandleTable> {
    require_odd(b.order())?;
    if let Some((x, y, z)) = b.left_bol_violation() {
        return Err(Error::Precondition(format!("left Bol identity fails at x={x}, y={y}, z={z}")));
    }
    if !b.has_automorphic_inverse_property()? {
        return Err(Error::Precondition("automorphic inverse property fails".into()));
    }
    sqrt_table(b).map_err(|e| Error::Precondition(format!("not uniquely 2-divisible: {e}")))?;
    let inv = b.two_sided_inverses()?;
    let t = CayleyTable::from_fn(b.order(), |x, y| b.mul(b.mul(x, x), inv[y] as usize))?;
    QuandleTable::new(t).map_err(|e| Error::Internal(format!("core is not a quandle: {e}")))
}

/// The Γ-loop `x·y = σ^(1/2)(y + x)` with `σ = L_x L_y L_x⁻¹ L_y⁻¹`.
pub fn bruck_to_gamma(b: &LoopTable) -> Result<LoopTable> {
    let n = b.order();
    require_odd(n)?;
    if !b.is_left_bruck() {
        return Err(Error::Precondition("loop is not left Bruck".into()));
    }
    let mut cells = Vec::with_capacity(n * n);
    let mut sigma = vec![0usize; n];
    let mut seen = vec![false; n];
    for x in 0..n {
        for y in 0..n {
            for (z, s) in sigma.iter_mut().enumerate() {
                *s = b.mul(x, b.mul(y, b.ldiv(x, b.ldiv(y, z))));
            }
            let mut m: u64 = 1;
            seen.iter_mut().for_each(|s| *s = false);
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                let mut len = 0u64;
                let mut c = start;
                while !seen[c] {
                    seen[c] = true;
                    c = sigma[c];
                    len += 1;
                }
                m = crate::perm::lcm(m, len);
            }
            if m.is_multiple_of(2) {
                return Err(Error::Internal(format!("commutator at ({x}, {y}) has even order {m}")));
            }
            let mut z = b.mul(y, x);
            let mut len = 1u64;
            let mut c = sigma[z];
            while c != z {
                c = sigma[c];
                len += 1;
            }
            for _ in 0..m.div_ceil(2) % len {
                z = sigma[z];
            }
            cells.push(z);
        }
    }
    let g = LoopTable::from_cells(n, cells)
        .map_err(|e| Error::Internal(format!("Γ-product is not a loop: {e}")))?;
    if !g.is_gamma_loop()? {
        return Err(Error::Internal("Γ-product is not a Γ-loop".into()));
    }
    Ok(g)
}

/// The left Bruck loop `x + y = (x⁻¹\(y²x))^(1/2)` of a Γ-loop.
pub fn gamma_to_bruck(g: &LoopTable) -> Result<LoopTable> {
    let n = g.order();
    require_odd(n)?;
    if !g.is_gamma_loop()? {
        return Err(Error::Precondition("loop is not a Γ-loop".into()));
    }
    let root = sqrt_table(g)?;
    let inv = g.two_sided_inverses()?;
    let t = CayleyTable::from_fn(n, |x, y| {
        root[g.ldiv(inv[x] as usize, g.mul(g.mul(y, y), x))]
    })?;
    let b = LoopTable::new(t).map_err(|e| Error::Internal(format!("Bruck sum is not a loop: {e}")))?;
    if !b.is_left_bruck() {
        return Err(Error::Internal("Bruck sum is not a left Bruck loop".into()));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots() {
        let z9 = LoopTable::cyclic(9);
        assert_eq!(element_sqrt(&z9, 0).unwrap(), 0);
        assert_eq!(element_sqrt(&z9, 1).unwrap(), 5);
        assert!(element_sqrt(&LoopTable::cyclic(4), 1).is_err());
    }

    #[test]
    fn permutation_square_roots() {
        assert!(permutation_sqrt(&Permutation::identity(4)).unwrap().is_identity());
        let c3 = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(permutation_sqrt(&c3).unwrap(), c3.pow(2));
        let s = Permutation::from_images(vec![1, 2, 0, 4, 5, 6, 7, 3]).unwrap();
        let r = permutation_sqrt(&s).unwrap();
        assert_eq!(r, s.pow(8));
        assert_eq!(r.compose(&r), s);
        assert!(permutation_sqrt(&Permutation::from_images(vec![1, 0]).unwrap()).is_err());
    }

    #[test]
    fn dihedral_quandles_give_cyclic_groups() {
        for n in [3, 9] {
            let q = QuandleTable::dihedral(n).unwrap();
            assert_eq!(quandle_to_bruck(&q, 0).unwrap(), LoopTable::cyclic(n));
            assert_eq!(bruck_to_quandle(&LoopTable::cyclic(n)).unwrap(), q);
        }
    }

    #[test]
    fn base_point_is_moved_to_zero() {
        let q = QuandleTable::dihedral(9).unwrap();
        let b = quandle_to_bruck(&q, 4).unwrap();
        assert!(crate::iso::are_isomorphic(&b, &LoopTable::cyclic(9)).is_some());
    }

    #[test]
    fn abelian_groups_are_fixed_by_gamma_maps() {
        let g = LoopTable::abelian(&[3, 9]);
        assert_eq!(bruck_to_gamma(&g).unwrap(), g);
        assert_eq!(gamma_to_bruck(&g).unwrap(), g);
    }
}
