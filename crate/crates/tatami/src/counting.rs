//! Closed-form tiling counts, plus the integer-composition quantities that
//! cross-check them through an independent route.
//!
//! Everything here is exact big-integer arithmetic; the formulas overflow 64
//! bits near `n = 60`.

use num_bigint::BigUint;

fn big(v: i64) -> BigUint {
    BigUint::from(v as u64)
}

/// Number of tatami tilings of the `n x n` grid with exactly `m` monomers:
/// `m*2^m + (m+1)*2^(m+1)` for `m < n` of matching parity, `n*2^(n-1)` for
/// `m = n`, and zero otherwise.
pub fn count_tilings(n: i32, m: i32) -> BigUint {
    assert!(n >= 1, "grid side must be positive");
    assert!(m >= 0, "monomer count must be non-negative");
    if m == n {
        return big(n as i64) << (n - 1) as usize;
    }
    if m > n || (n - m) % 2 != 0 {
        return BigUint::ZERO;
    }
    (big(m as i64) << m as usize) + (big(m as i64 + 1) << (m + 1) as usize)
}

/// Total number of tatami tilings of the `n x n` grid: `2^(n-1)*(3n-4) + 2`.
pub fn total_tilings(n: i32) -> BigUint {
    assert!(n >= 1, "grid side must be positive");
    if n == 1 {
        // 3n - 4 is negative only here; the formula still evaluates to 1.
        return big(1);
    }
    (big(3 * n as i64 - 4) << (n - 1) as usize) + big(2)
}

/// Number of tilings whose unique bidimer or vortex sits at distance
/// `(k+1)/2` from the boundary: `(n-k)*2^(n-k)` for `1 <= k <= n-1`.
pub fn count_at_distance(n: i32, k: i32) -> BigUint {
    assert!(n >= 1, "grid side must be positive");
    assert!(1 <= k && k <= n - 1, "distance index out of range: k={k}, n={n}");
    big((n - k) as i64) << (n - k) as usize
}

/// Sum of the squares of all parts over all `2^(n-1)` compositions of `n`,
/// computed by direct enumeration. Independent oracle for the count/total
/// correspondence, so it deliberately shares no code with the closed forms.
pub fn composition_square_sum(n: i32) -> BigUint {
    assert!(
        (1..=25).contains(&n),
        "direct enumeration walks 2^(n-1) compositions; n={n} unsupported"
    );
    let gaps = (n - 1) as u32;
    let mut total: u128 = 0;
    for mask in 0u32..(1u32 << gaps) {
        // bit i set = a cut after position i+1
        let mut part: u128 = 1;
        for i in 0..gaps {
            if mask & (1 << i) != 0 {
                total += part * part;
                part = 1;
            } else {
                part += 1;
            }
        }
        total += part * part;
    }
    BigUint::from(total)
}

/// Number of times a summand of size `i` occurs over all compositions of
/// `n`: `(n+3-i)*2^(n-2-i)` for `i < n`, and 1 for `i = n`.
pub fn summand_count(n: i32, i: i32) -> BigUint {
    assert!(n >= 2, "defined for n >= 2");
    assert!(1 <= i && i <= n, "summand size out of range: i={i}, n={n}");
    if i == n {
        big(1)
    } else if i == n - 1 {
        // exponent -1: (n+3-i) = 4 halves exactly
        big(2)
    } else {
        big((n + 3 - i) as i64) << (n - 2 - i) as usize
    }
}

/// Size of the k-th off-diagonal class of squared-part boxes:
/// `2(n-k) + sum_{i=k+1}^{n-1} (n+3-i)(i-k)*2^(n-1-i)`.
///
/// Evaluated literally, term by term; equality with
/// [`count_at_distance`] is checked in tests rather than assumed.
pub fn red_box_class_size(n: i32, k: i32) -> BigUint {
    assert!(n >= 1, "grid side must be positive");
    assert!(1 <= k && k <= n - 1, "class index out of range: k={k}, n={n}");
    let mut total = big(2 * (n - k) as i64);
    for i in (k + 1)..=(n - 1) {
        total += big(((n + 3 - i) * (i - k)) as i64) << (n - 1 - i) as usize;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_examples() {
        assert_eq!(count_tilings(8, 2), big(32));
        assert_eq!(count_tilings(4, 4), big(32));
        assert_eq!(count_tilings(5, 2), BigUint::ZERO);
        assert_eq!(count_tilings(2, 4), BigUint::ZERO);
        assert_eq!(count_tilings(1, 1), big(1));
        assert_eq!(count_tilings(4, 0), big(2));
    }

    #[test]
    fn totals() {
        let expect = [1u64, 6, 22, 66, 178];
        for (n, e) in (1..=5).zip(expect) {
            assert_eq!(total_tilings(n), big(e as i64));
        }
    }

    #[test]
    fn total_is_sum_over_monomer_counts() {
        for n in 1..=60 {
            let sum: BigUint = (0..=n).map(|m| count_tilings(n, m)).sum();
            assert_eq!(sum, total_tilings(n), "n={n}");
        }
    }

    #[test]
    fn distance_examples_and_identity() {
        assert_eq!(count_at_distance(4, 1), big(24));
        assert_eq!(count_at_distance(4, 3), big(2));
        for n in 2..=20 {
            let sum: BigUint =
                (1..n).map(|k| count_at_distance(n, k)).sum::<BigUint>() + count_tilings(n, n);
            assert_eq!(sum, total_tilings(n), "n={n}");
        }
    }

    #[test]
    fn composition_square_sums() {
        assert_eq!(composition_square_sum(1), big(1));
        assert_eq!(composition_square_sum(2), big(6));
        assert_eq!(composition_square_sum(5), big(178));
        for n in 1..=14 {
            assert_eq!(composition_square_sum(n), total_tilings(n), "n={n}");
        }
    }

    #[test]
    fn summand_counts() {
        // compositions of 3: (3), (1,2), (2,1), (1,1,1)
        assert_eq!(summand_count(3, 1), big(5));
        assert_eq!(summand_count(3, 2), big(2));
        for n in 2..=12 {
            assert_eq!(summand_count(n, n), big(1));
        }
    }

    #[test]
    fn squares_weighted_by_summand_counts() {
        for n in 2..=14 {
            let sum: BigUint = (1..=n)
                .map(|i| big((i * i) as i64) * summand_count(n, i))
                .sum();
            assert_eq!(sum, composition_square_sum(n), "n={n}");
        }
    }

    #[test]
    fn red_box_classes() {
        assert_eq!(red_box_class_size(4, 3), big(2));
        assert_eq!(red_box_class_size(4, 1), big(24));
        for n in 2..=20 {
            for k in 1..n {
                assert_eq!(red_box_class_size(n, k), count_at_distance(n, k), "n={n} k={k}");
            }
        }
    }
}
