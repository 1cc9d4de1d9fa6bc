use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Largest order accepted by the factorial-time oracle.
pub const NAIVE_LIMIT: usize = 10;
/// Largest order accepted by the Ryser evaluator.
pub const RYSER_LIMIT: usize = 30;

fn check_square(m: &ComplexMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "permanent needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.rows())
}

/// Permanent by direct enumeration of all `n!` permutations (Heap's algorithm).
///
/// This is the reference oracle for [`permanent_ryser`] and refuses `n > 10`.
pub fn permanent_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = check_square(m)?;
    if n > NAIVE_LIMIT {
        return Err(Error::SizeGuard { size: n, limit: NAIVE_LIMIT });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let term = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| m[(i, j)]).product::<Complex64>();
    let mut total = term(&perm);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += term(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// Permanent by Ryser's inclusion–exclusion formula, visiting column subsets
/// in Gray-code order so each step updates the row sums by a single column.
/// Cost is `O(2ⁿ·n)`.
pub fn permanent_ryser(m: &ComplexMatrix) -> Result<Complex64> {
    let n = check_square(m)?;
    if n > RYSER_LIMIT {
        return Err(Error::SizeGuard { size: n, limit: RYSER_LIMIT });
    }
    Ok(ryser(m.entries(), n))
}

/// Dispatches to the cheapest exact method for the order at hand.
pub fn permanent(m: &ComplexMatrix) -> Result<Complex64> {
    let n = check_square(m)?;
    let a = m.entries();
    match n {
        1 => Ok(a[0]),
        2 => Ok(a[0] * a[3] + a[1] * a[2]),
        _ => permanent_ryser(m),
    }
}

pub(crate) fn ryser(a: &[Complex64], n: usize) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let mut row_sums = [zero; RYSER_LIMIT];
    let row_sums = &mut row_sums[..n];
    let mut total = zero;
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        let mask = 1u64 << bit;
        gray ^= mask;
        if gray & mask != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[i * n + bit];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[i * n + bit];
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}
