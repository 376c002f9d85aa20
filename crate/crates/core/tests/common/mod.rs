#![allow(dead_code)]

use affchar::QSeries;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Partition counts p(0..=n).
pub fn partitions(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p
}

/// Visits every partition of `n` as a non-increasing list of parts.
pub fn for_each_partition(n: usize, visit: &mut impl FnMut(&[usize])) {
    fn go(rest: usize, max: usize, parts: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if rest == 0 {
            visit(parts);
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            parts.push(p);
            go(rest - p, p, parts, visit);
            parts.pop();
        }
    }
    go(n, n, &mut Vec::new(), visit);
}

/// Number of partitions of each m <= n whose parts are all odd, by listing
/// every partition and filtering.
pub fn odd_part_partitions_by_filter(n: usize) -> Vec<i64> {
    (0..=n)
        .map(|m| {
            let mut count = 0;
            for_each_partition(m, &mut |parts| {
                if parts.iter().all(|p| p % 2 == 1) {
                    count += 1;
                }
            });
            count
        })
        .collect()
}

pub fn big(c: i64) -> BigInt {
    BigInt::from(c)
}

pub fn series(low: i64, coeffs: Vec<i64>, order: i64) -> QSeries {
    QSeries::new(low, coeffs.into_iter().map(BigInt::from).collect(), order)
}

/// Truncated Laurent series with small coefficients.
pub fn arb_series() -> impl Strategy<Value = QSeries> {
    (-3i64..4, prop::collection::vec(-20i64..21, 0..10), 0i64..4)
        .prop_map(|(low, coeffs, extra)| {
            let order = low + coeffs.len() as i64 - 1 + extra;
            series(low, coeffs, order)
        })
}

/// Series with constant term +-1 and nonnegative exponents.
pub fn arb_unit_series() -> impl Strategy<Value = QSeries> {
    (prop::bool::ANY, prop::collection::vec(-20i64..21, 0..10), 0i64..10).prop_map(|(neg, rest, order)| {
        let mut coeffs = vec![if neg { -1 } else { 1 }];
        coeffs.extend(rest);
        coeffs.truncate(order as usize + 1);
        series(0, coeffs, order)
    })
}
