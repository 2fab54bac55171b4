//! Row kernels. The small primes get monomorphized loops so the reduction
//! `% P` compiles to multiply-shift and vectorizes.

use super::Fp;

/// `dst += c · src (mod p)`.
#[inline]
pub(crate) fn axpy(fp: Fp, dst: &mut [u8], src: &[u8], c: u8) {
    debug_assert_eq!(dst.len(), src.len());
    if c == 0 {
        return;
    }
    match fp.p() {
        3 => axpy3(dst, src, c),
        2 => axpy_const::<2>(dst, src, c),
        5 => axpy_const::<5>(dst, src, c),
        7 => axpy_const::<7>(dst, src, c),
        11 => axpy_const::<11>(dst, src, c),
        13 => axpy_const::<13>(dst, src, c),
        p => axpy_dyn(p as u16, dst, src, c),
    }
}

fn axpy3(dst: &mut [u8], src: &[u8], c: u8) {
    // entries are < 3, so d + c·s ≤ 6
    for (d, &s) in dst.iter_mut().zip(src) {
        let mut t = *d + c * s;
        t -= if t >= 3 { 3 } else { 0 };
        t -= if t >= 3 { 3 } else { 0 };
        *d = t;
    }
}

fn axpy_const<const P: u16>(dst: &mut [u8], src: &[u8], c: u8) {
    let c = c as u16;
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u16 + c * s as u16) % P) as u8;
    }
}

fn axpy_dyn(p: u16, dst: &mut [u8], src: &[u8], c: u8) {
    let c = c as u16;
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u16 + c * s as u16) % p) as u8;
    }
}

/// `v *= c (mod p)`.
pub(crate) fn scale(fp: Fp, v: &mut [u8], c: u8) {
    for x in v.iter_mut() {
        *x = fp.mul(*x, c);
    }
}

#[inline]
pub(crate) fn is_zero(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_agree_with_scalar_arithmetic() {
        for p in [2u32, 3, 5, 7, 11, 13, 17, 251] {
            let fp = Fp::new(p).unwrap();
            let src: Vec<u8> = (0..200).map(|i| (i * 7 % p as usize) as u8).collect();
            for c in 0..p as u8 {
                let mut dst: Vec<u8> = (0..200).map(|i| (i * 13 % p as usize) as u8).collect();
                let expected: Vec<u8> =
                    dst.iter().zip(&src).map(|(&d, &s)| fp.add(d, fp.mul(c, s))).collect();
                axpy(fp, &mut dst, &src, c);
                assert_eq!(dst, expected, "p = {p}, c = {c}");
            }
        }
    }
}
