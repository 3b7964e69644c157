//! Permutation strategies for player 2 and their structural predicates.
//!
//! A strategy `π` sends player 2's `i`-th worst card against player 1's
//! `π(i)`-th worst card. In the trick matrix this selects one entry per row
//! and column, so the expected number of tricks (times `C(2N,N)`) is
//! `F(π) = sum_i p_{i,π(i)}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::matrix::TrickMatrix;

/// Default largest `N` for [`enumerate_shape_candidates`].
pub const DEFAULT_SHAPE_CAP: usize = 20;

/// A permutation of `1..=N`, stored as its 1-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Strategy {
    map: Vec<usize>,
}

impl Strategy {
    /// Validate that `map` is a bijection on `1..=map.len()`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidStrategy("empty permutation".into()));
        }
        let mut seen = vec![false; n + 1];
        for (i, &v) in map.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::InvalidStrategy(format!("image {v} of {} is outside 1..={n}", i + 1)));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidStrategy(format!("image {v} repeated")));
            }
        }
        Ok(Strategy { map })
    }

    pub fn identity(n: usize) -> Self {
        Strategy { map: (1..=n).collect() }
    }

    /// Build from disjoint cycles, e.g. `&[&[1, 5, 4, 3, 2]]` for `1→5→4→3→2→1`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n + 1];
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n || std::mem::replace(&mut touched[a], true) {
                    return Err(Error::InvalidStrategy(format!("bad cycle element {a}")));
                }
                map[a - 1] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Strategy::new(map)
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// `π(i)`, 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// The selected cells `(i, π(i))`.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().enumerate().map(|(i, &c)| (i + 1, c))
    }

    pub fn inverse(&self) -> Strategy {
        let mut inv = vec![0; self.n()];
        for (i, c) in self.points() {
            inv[c - 1] = i;
        }
        Strategy { map: inv }
    }

    /// `ρ π^{-1} ρ` with `ρ(i) = N+1-i`: the strategy mirrored in the
    /// anti-main diagonal.
    pub fn reflect(&self) -> Strategy {
        let n = self.n();
        let inv = self.inverse();
        Strategy { map: (1..=n).map(|i| n + 1 - inv.image(n + 1 - i)).collect() }
    }

    /// `(ρπ)^2 = id`, i.e. the selected cells are symmetric about the
    /// anti-main diagonal.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        let rho_pi = |i: usize| n + 1 - self.image(i);
        (1..=n).all(|i| rho_pi(rho_pi(i)) == i)
    }

    /// No fixed points; the cells below the main diagonal run from north-west
    /// to south-east and the cells above it run from north-east to south-west.
    pub fn is_shape_valid(&self) -> bool {
        let mut last_below = 0;
        let mut last_above = usize::MAX;
        for (i, c) in self.points() {
            if c == i {
                return false;
            }
            if c < i {
                if c <= last_below {
                    return false;
                }
                last_below = c;
            } else {
                if c >= last_above {
                    return false;
                }
                last_above = c;
            }
        }
        true
    }
}

impl From<Strategy> for Vec<usize> {
    fn from(s: Strategy) -> Self {
        s.map
    }
}

impl TryFrom<Vec<usize>> for Strategy {
    type Error = Error;

    fn try_from(map: Vec<usize>) -> Result<Self> {
        Strategy::new(map)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Accepts `[7,1,6,5,2,3,4]`, `7,1,6,5,2,3,4` or whitespace separated images.
impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let map = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Strategy::new(map)
    }
}

/// `F(π) = sum_i p_{i,π(i)}`, scaled by `C(2N,N)`.
pub fn objective(p: &TrickMatrix, s: &Strategy) -> Result<BigInt> {
    if p.n() != s.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), got: s.n() });
    }
    Ok(s.points().map(|(i, c)| p.get(i, c)).sum())
}

/// Which of the first `⌊N/2⌋` rows throw their trick on the anti-main diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThrowString {
    n: usize,
    bits: Vec<bool>,
}

impl ThrowString {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != n / 2 {
            return Err(Error::Parse(format!("throw string for N={n} needs {} bits, got {}", n / 2, bits.len())));
        }
        Ok(ThrowString { n, bits })
    }

    /// Parse a bare bit string such as `"1101"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let bits = text
            .trim()
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::Parse(format!("throw string contains `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, bits)
    }

    /// The string read off a strategy's anti-main-diagonal occupancy.
    pub fn of(s: &Strategy) -> Self {
        let n = s.n();
        ThrowString { n, bits: (1..=n / 2).map(|i| s.image(i) == n + 1 - i).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of thrown tricks.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// All ones precede all zeros.
    pub fn is_gap_free(&self) -> bool {
        self.bits.windows(2).all(|w| w[0] || !w[1])
    }
}

impl fmt::Display for ThrowString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.iter().try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

/// Throw on the anti-main diagonal where the string says so, then pair the
/// remaining rows with the remaining columns in increasing order.
pub fn strategy_from_string(t: &ThrowString) -> Strategy {
    let n = t.n;
    let mut map = vec![0; n];
    let mut used = vec![false; n + 1];
    for (idx, _) in t.bits.iter().enumerate().filter(|(_, &b)| b) {
        let i = idx + 1;
        map[i - 1] = n + 1 - i;
        used[n + 1 - i] = true;
    }
    let mut free_cols = (1..=n).filter(|&c| !used[c]);
    for slot in map.iter_mut().filter(|v| **v == 0) {
        *slot = free_cols.next().expect("as many free columns as free rows");
    }
    Strategy { map }
}

/// `π_k`: throw the worst `k` cards against the opponent's best `k`, play the
/// rest in order.
pub fn no_gap_strategy(n: usize, k: usize) -> Result<Strategy> {
    if n == 0 || k > n / 2 {
        return Err(domain(format!("no-gap strategy needs 0 <= k <= N/2 (N={n}, k={k})")));
    }
    Ok(Strategy { map: (1..=n).map(|i| if i <= k { n + 1 - i } else { i - k }).collect() })
}

/// For `N = 2n+1`: throw `n` tricks and play the top `n+1` cards straight.
pub fn majority_strategy(n: usize) -> Result<Strategy> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(domain(format!("the majority strategy needs an odd N >= 3, got {n}")));
    }
    no_gap_strategy(n, n / 2)
}

/// Every permutation passing [`Strategy::is_shape_valid`], in lexicographic
/// order, for `3 <= N <= cap`.
pub fn enumerate_shape_candidates(n: usize, cap: usize) -> Result<Vec<Strategy>> {
    if n < 3 {
        return Err(domain(format!("shape enumeration needs N >= 3, got {n}")));
    }
    if n > cap {
        return Err(Error::CapExceeded { what: "shape enumeration", n, cap });
    }
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    shape_search(n, &mut map, &mut used, 0, n + 1, &mut out);
    Ok(out)
}

fn shape_search(n: usize, map: &mut Vec<usize>, used: &mut [bool], below: usize, above: usize, out: &mut Vec<Strategy>) {
    let i = map.len() + 1;
    if i > n {
        out.push(Strategy { map: map.clone() });
        return;
    }
    for c in 1..=n {
        if used[c] || c == i || (c < i && c <= below) || (c > i && c >= above) {
            continue;
        }
        used[c] = true;
        map.push(c);
        let (b, a) = if c < i { (c, above) } else { (below, c) };
        shape_search(n, map, used, b, a, out);
        map.pop();
        used[c] = false;
    }
}

/// The multiset of cells chosen by `left` equals the one chosen by `right`,
/// which forces `F` to agree on the two sides; the sums are also compared.
pub fn verify_splice_identity(p: &TrickMatrix, left: [&Strategy; 3], right: [&Strategy; 3]) -> Result<bool> {
    let cells = |side: [&Strategy; 3]| {
        let mut v: Vec<(usize, usize)> = side.iter().flat_map(|s| s.points()).collect();
        v.sort_unstable();
        v
    };
    let total = |side: [&Strategy; 3]| -> Result<BigInt> { side.iter().map(|s| objective(p, s)).sum() };
    let same_cells = cells(left) == cells(right);
    Ok(same_cells && total(left)? == total(right)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, Just};
    use proptest::strategy::Strategy as _;

    fn s(map: &[usize]) -> Strategy {
        Strategy::new(map.to_vec()).unwrap()
    }

    #[test]
    fn construction_and_parsing() {
        assert!(Strategy::new(vec![1, 1]).is_err());
        assert!(Strategy::new(vec![0, 1]).is_err());
        assert!(Strategy::new(vec![]).is_err());
        assert_eq!("[7,1,6,5,2,3,4]".parse::<Strategy>().unwrap(), s(&[7, 1, 6, 5, 2, 3, 4]));
        assert_eq!("3 1 2".parse::<Strategy>().unwrap().to_string(), "[3,1,2]");
        assert!("[1,x]".parse::<Strategy>().is_err());
        assert_eq!(serde_json::to_string(&s(&[3, 1, 2])).unwrap(), "[3,1,2]");
        assert!(serde_json::from_str::<Strategy>("[1,1]").is_err());
        assert_eq!(Strategy::from_cycles(5, &[&[1, 5, 4, 3, 2]]).unwrap(), s(&[5, 1, 2, 3, 4]));
        assert_eq!(Strategy::from_cycles(5, &[&[1, 5, 3], &[2, 4]]).unwrap(), s(&[5, 4, 1, 2, 3]));
    }

    #[test]
    fn objective_examples() {
        let p3 = TrickMatrix::stern(3).unwrap();
        assert_eq!(objective(&p3, &Strategy::identity(3)).unwrap(), BigInt::from(30));
        assert_eq!(objective(&p3, &s(&[3, 1, 2])).unwrap(), BigInt::from(33));
        let p7 = TrickMatrix::stern(7).unwrap();
        assert_eq!(objective(&p7, &s(&[7, 1, 6, 5, 2, 3, 4])).unwrap(), BigInt::from(13657));
        assert_eq!(objective(&p7, &no_gap_strategy(7, 2).unwrap()).unwrap(), BigInt::from(15148));
        assert_eq!(objective(&p3, &Strategy::identity(4)).unwrap_err(), Error::DimensionMismatch { expected: 3, got: 4 });
    }

    #[test]
    fn reflection() {
        let pi = s(&[7, 1, 6, 5, 2, 3, 4]);
        assert_eq!(pi.reflect(), s(&[7, 5, 4, 1, 2, 3, 6]));
        assert_eq!(Strategy::identity(6).reflect(), Strategy::identity(6));
        let p7 = TrickMatrix::stern(7).unwrap();
        assert_eq!(objective(&p7, &pi.reflect()).unwrap(), BigInt::from(13657));
    }

    #[test]
    fn shape_predicate_examples() {
        assert!(Strategy::from_cycles(5, &[&[1, 5, 4, 3, 2]]).unwrap().is_shape_valid());
        assert!(!Strategy::identity(5).is_shape_valid());
        let t = ThrowString::parse(9, "1101").unwrap();
        assert!(strategy_from_string(&t).is_shape_valid());
    }

    #[test]
    fn shape_candidates() {
        assert_eq!(enumerate_shape_candidates(3, DEFAULT_SHAPE_CAP).unwrap(), vec![s(&[3, 1, 2])]);
        let five = enumerate_shape_candidates(5, DEFAULT_SHAPE_CAP).unwrap();
        assert_eq!(five.len(), 4);
        for cycles in [&[&[1usize, 5, 4, 3, 2][..]][..], &[&[1, 5, 3], &[2, 4]], &[&[1, 5, 4, 2, 3]], &[&[1, 5, 3, 4, 2]]] {
            assert!(five.contains(&Strategy::from_cycles(5, cycles).unwrap()), "{cycles:?}");
        }
        assert_eq!(enumerate_shape_candidates(6, DEFAULT_SHAPE_CAP).unwrap().len(), 8);
        assert!(enumerate_shape_candidates(2, DEFAULT_SHAPE_CAP).is_err());
        assert!(matches!(enumerate_shape_candidates(21, DEFAULT_SHAPE_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn shape_candidates_match_filtered_permutations() {
        use itertools::Itertools;
        for n in 3..=8 {
            let filtered: Vec<Strategy> = (1..=n).permutations(n).map(|m| s(&m)).filter(|p| p.is_shape_valid()).collect();
            assert_eq!(enumerate_shape_candidates(n, DEFAULT_SHAPE_CAP).unwrap(), filtered, "N={n}");
        }
    }

    #[test]
    fn symmetry() {
        let t = ThrowString::parse(9, "1101").unwrap();
        assert!(strategy_from_string(&t).is_symmetric());
        let n5: Vec<bool> = [&[&[1usize, 5, 4, 3, 2][..]][..], &[&[1, 5, 3], &[2, 4]], &[&[1, 5, 4, 2, 3]], &[&[1, 5, 3, 4, 2]]]
            .iter()
            .map(|c| Strategy::from_cycles(5, c).unwrap().is_symmetric())
            .collect();
        assert_eq!(n5, vec![true, true, false, false]);
        for n in 1..=12 {
            assert!(no_gap_strategy(n, 0).unwrap().is_symmetric());
        }
    }

    #[test]
    fn throw_strings() {
        let t = ThrowString::parse(9, "1101").unwrap();
        assert_eq!(strategy_from_string(&t), s(&[9, 8, 1, 6, 2, 3, 4, 5, 7]));
        assert_eq!(t.to_string(), "1101");
        assert!(!t.is_gap_free());
        assert_eq!(t.count(), 3);
        assert_eq!(ThrowString::of(&strategy_from_string(&t)), t);
        assert_eq!(strategy_from_string(&ThrowString::parse(5, "10").unwrap()), s(&[5, 1, 2, 3, 4]));
        assert_eq!(strategy_from_string(&ThrowString::parse(6, "000").unwrap()), Strategy::identity(6));
        assert!(ThrowString::parse(9, "110").is_err());
        assert!(ThrowString::parse(4, "1a").is_err());
        assert!(ThrowString::parse(5, "11").unwrap().is_gap_free());
        // A leading zero leaves row 1 on the main diagonal.
        assert!(!strategy_from_string(&ThrowString::parse(4, "01").unwrap()).is_shape_valid());
    }

    #[test]
    fn no_gap_family() {
        assert_eq!(no_gap_strategy(5, 1).unwrap(), s(&[5, 1, 2, 3, 4]));
        assert_eq!(no_gap_strategy(7, 0).unwrap(), Strategy::identity(7));
        assert_eq!(no_gap_strategy(7, 2).unwrap(), s(&[7, 6, 1, 2, 3, 4, 5]));
        assert!(no_gap_strategy(7, 4).is_err());
        for n in 1..=15 {
            for k in 0..=n / 2 {
                let bits = (0..n / 2).map(|i| i < k).collect();
                assert_eq!(strategy_from_string(&ThrowString::new(n, bits).unwrap()), no_gap_strategy(n, k).unwrap());
            }
        }
    }

    #[test]
    fn majority() {
        assert_eq!(majority_strategy(3).unwrap(), s(&[3, 1, 2]));
        assert_eq!(majority_strategy(5).unwrap(), s(&[5, 4, 1, 2, 3]));
        assert!(majority_strategy(4).is_err());
        assert!(majority_strategy(1).is_err());
    }

    #[test]
    fn splice_identity() {
        let p7 = TrickMatrix::stern(7).unwrap();
        let pi = s(&[7, 1, 6, 5, 2, 3, 4]);
        let pi_prime = pi.reflect();
        let sigma = s(&[7, 6, 5, 4, 2, 3, 1]);
        let t1 = s(&[7, 6, 5, 1, 2, 3, 4]);
        let t2 = s(&[7, 1, 4, 5, 2, 3, 6]);
        let t3 = s(&[7, 5, 6, 4, 2, 3, 1]);
        let values: Vec<i64> = [&pi, &pi_prime, &sigma, &t1, &t2, &t3]
            .iter()
            .map(|x| objective(&p7, x).unwrap().try_into().unwrap())
            .collect();
        assert_eq!(values, vec![13657, 13657, 12201, 13678, 13825, 12012]);
        assert!(verify_splice_identity(&p7, [&pi, &pi_prime, &sigma], [&t1, &t2, &t3]).unwrap());
        assert!(verify_splice_identity(&p7, [&pi, &pi, &pi], [&pi, &pi, &pi]).unwrap());
        let other = s(&[7, 5, 6, 4, 2, 1, 3]);
        assert!(!verify_splice_identity(&p7, [&pi, &pi_prime, &sigma], [&t1, &t2, &other]).unwrap());
    }

    fn permutation(max_n: usize) -> impl proptest::strategy::Strategy<Value = super::Strategy> {
        (1..=max_n).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|m| Strategy::new(m).unwrap())
    }

    proptest! {
        #[test]
        fn reflect_is_an_involution_preserving_objective(pi in permutation(12)) {
            prop_assert_eq!(pi.reflect().reflect(), pi.clone());
            let p = TrickMatrix::stern(pi.n()).unwrap();
            prop_assert_eq!(objective(&p, &pi).unwrap(), objective(&p, &pi.reflect()).unwrap());
            prop_assert_eq!(pi.is_symmetric(), pi.reflect() == pi);
        }

        #[test]
        fn every_throw_string_gives_a_symmetric_strategy(n in 1usize..=20, seed in any::<u32>()) {
            let bits: Vec<bool> = (0..n / 2).map(|i| seed >> (i % 32) & 1 == 1).collect();
            let t = ThrowString::new(n, bits).unwrap();
            let st = strategy_from_string(&t);
            prop_assert!(st.is_symmetric());
            prop_assert_eq!(ThrowString::of(&st), t.clone());
            if n >= 3 && t.bits()[0] {
                prop_assert!(st.is_shape_valid());
            }
        }
    }
}
