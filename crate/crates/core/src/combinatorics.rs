//! Exact binomial arithmetic.
//!
//! Everything here is integer or rational; nothing rounds. Pascal rows are
//! memoized because the optimal-throw formulas keep revisiting row `2N`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use num_rational::BigRational;

/// Maximum number of Pascal rows kept in the shared cache.
const ROW_CACHE_CAPACITY: usize = 64;

fn row_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    // acc * (n - k + i) is always divisible by i after the previous step.
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `n!`
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Row `m` of Pascal's triangle, `[C(m,0), ..., C(m,m)]`.
pub fn pascal_row(m: u64) -> Arc<Vec<BigInt>> {
    if let Some(row) = row_cache().lock().expect("row cache poisoned").get(&m) {
        return Arc::clone(row);
    }
    let row = Arc::new(compute_row(m));
    let mut cache = row_cache().lock().expect("row cache poisoned");
    if cache.len() >= ROW_CACHE_CAPACITY {
        cache.clear();
    }
    cache.insert(m, Arc::clone(&row));
    row
}

fn compute_row(m: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut cur = BigInt::one();
    row.push(cur.clone());
    for k in 0..m {
        cur = cur * (m - k) / (k + 1);
        row.push(cur.clone());
    }
    row
}

/// `sum_{j=0}^{t} C(m, j)`; zero for `t < 0` and `2^m` once `t >= m`.
pub fn prefix_sum_row(m: u64, t: i64) -> BigInt {
    if t < 0 {
        return BigInt::zero();
    }
    if t as u64 >= m {
        return BigInt::one() << m;
    }
    pascal_row(m)[..=t as usize].iter().sum()
}

/// Exact rational `num / den`, reduced.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}
