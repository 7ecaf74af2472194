//! Dimensional conventions and permutation symbols.
//!
//! The base space is four-dimensional with signature `(+,-,-,-)`; the target
//! is a two-dimensional Riemannian surface. Levi-Civita objects are weighted
//! tensors, not bare symbols: the target area form carries `sqrt(det h)` and
//! the base volume form carries `sqrt(-det g)`. This weighting is what makes
//! the square of the pullback two-form equal `2 sigma_2`.

/// Base-space dimension (one time plus three space directions).
pub const BASE_DIM: usize = 4;

/// Target-space dimension.
pub const TARGET_DIM: usize = 2;

/// Permutation symbol on two indices, `[01] = +1`.
#[inline]
pub fn perm_sign_2(a: usize, b: usize) -> f64 {
    debug_assert!(a < TARGET_DIM && b < TARGET_DIM);
    if a == b {
        0.0
    } else if a < b {
        1.0
    } else {
        -1.0
    }
}

/// Permutation symbol on four indices, `[0123] = +1`.
pub fn perm_sign_4(indices: [usize; 4]) -> f64 {
    let mut seen = [false; BASE_DIM];
    for &index in &indices {
        if index >= BASE_DIM || seen[index] {
            return 0.0;
        }
        seen[index] = true;
    }
    let mut sign = 1.0;
    for i in 0..BASE_DIM {
        for j in (i + 1)..BASE_DIM {
            if indices[i] > indices[j] {
                sign = -sign;
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_index_symbol() {
        assert_eq!(perm_sign_2(0, 1), 1.0);
        assert_eq!(perm_sign_2(1, 0), -1.0);
        assert_eq!(perm_sign_2(0, 0), 0.0);
        assert_eq!(perm_sign_2(1, 1), 0.0);
    }

    #[test]
    fn four_index_symbol() {
        assert_eq!(perm_sign_4([0, 1, 2, 3]), 1.0);
        assert_eq!(perm_sign_4([1, 0, 2, 3]), -1.0);
        assert_eq!(perm_sign_4([0, 3, 1, 2]), 1.0);
        assert_eq!(perm_sign_4([0, 3, 2, 1]), -1.0);
        assert_eq!(perm_sign_4([0, 0, 2, 3]), 0.0);
    }

    #[test]
    fn symbol_squares_sum_to_factorial() {
        let mut total = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        total += perm_sign_4([a, b, c, d]).powi(2);
                    }
                }
            }
        }
        assert_eq!(total, 24.0);
    }
}
