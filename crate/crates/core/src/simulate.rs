//! Monte Carlo play.
//!
//! Deal `d` of a run is drawn from its own ChaCha stream (`seed`, stream `d`),
//! and the tallies are integers, so a report depends only on its config and
//! never on how the deals were spread over threads.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, BigRational};
use crate::error::{domain, Error, Result};
use crate::optimal::{k_approx, k_exact, no_gap_values};
use crate::strategy::Strategy;

/// What to simulate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    n: usize,
    strategy: Strategy,
    deals: u64,
    seed: u64,
}

impl SimConfig {
    pub fn new(strategy: Strategy, deals: u64, seed: u64) -> Result<Self> {
        if deals == 0 {
            return Err(domain("a simulation needs at least one deal"));
        }
        Ok(SimConfig { n: strategy.n(), strategy, deals, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn deals(&self) -> u64 {
        self.deals
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub n: usize,
    pub mean_tricks: f64,
    pub stderr: f64,
    /// Share of deals in which player 2 took strictly more than `N/2` tricks.
    pub majority_win_rate: f64,
    pub deals: u64,
    pub seed: u64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    sum: u64,
    sum_sq: u64,
    majority: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally { sum: self.sum + other.sum, sum_sq: self.sum_sq + other.sum_sq, majority: self.majority + other.majority }
    }
}

const CHUNK: u64 = 4096;

fn play(n: usize, map: &[usize], rng: &mut ChaCha8Rng, cards: &mut [usize]) -> usize {
    for (slot, v) in cards.iter_mut().zip(1..) {
        *slot = v;
    }
    // Partial Fisher-Yates: the first N positions become player 2's hand.
    for i in 0..n {
        let j = rng.random_range(i..2 * n);
        cards.swap(i, j);
    }
    let (hand2, hand1) = cards.split_at_mut(n);
    hand2.sort_unstable();
    hand1.sort_unstable();
    map.iter().enumerate().filter(|&(i, &c)| hand2[i] > hand1[c - 1]).count()
}

/// Play `cfg.deals()` random deals with the configured strategy.
pub fn simulate(cfg: &SimConfig) -> Result<SimReport> {
    let n = cfg.n;
    let map = cfg.strategy.as_slice();
    let chunks = cfg.deals.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut cards = vec![0usize; 2 * n];
            let mut t = Tally::default();
            for d in c * CHUNK..((c + 1) * CHUNK).min(cfg.deals) {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(d);
                let won = play(n, map, &mut rng, &mut cards) as u64;
                t.sum += won;
                t.sum_sq += won * won;
                if 2 * won > n as u64 {
                    t.majority += 1;
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    let d = cfg.deals as f64;
    let mean = tally.sum as f64 / d;
    let var = (tally.sum_sq as f64 / d - mean * mean).max(0.0);
    Ok(SimReport {
        n,
        mean_tricks: mean,
        stderr: (var / d).sqrt(),
        majority_win_rate: tally.majority as f64 / d,
        deals: cfg.deals,
        seed: cfg.seed,
    })
}

/// [`simulate`] on a dedicated pool of `threads` workers.
pub fn simulate_with_threads(cfg: &SimConfig, threads: usize) -> Result<SimReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    pool.install(|| simulate(cfg))
}

/// How to pick the number of throws in [`sweep_loss_fraction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KRule {
    Exact,
    Approx,
}

/// Expected tricks lost by the no-gap strategy at one `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossRow {
    pub n: usize,
    pub k: usize,
    /// `N - F(π_k) / C(2N,N)`, exact.
    pub expected_losses: BigRational,
    pub sqrt_half_nlogn: f64,
}

pub fn sweep_loss_fraction(ns: &[usize], rule: KRule) -> Result<Vec<LossRow>> {
    ns.par_iter()
        .map(|&n| {
            let k = match rule {
                KRule::Exact => k_exact(n)?,
                KRule::Approx => k_approx(n)?,
            };
            let f = no_gap_values(n)?.swap_remove(k);
            let c = binomial(2 * n as u64, n as i64);
            let losses = BigRational::new(BigInt::from(n) * &c - f, c);
            let nf = n as f64;
            Ok(LossRow { n, k, expected_losses: losses, sqrt_half_nlogn: (nf * nf.ln() / 2.0).sqrt() })
        })
        .collect()
}

/// `n,expected_losses,sqrt_half_nlogn`, losses as decimals.
pub fn loss_rows_to_csv(rows: &[LossRow]) -> String {
    let mut out = String::from("n,expected_losses,sqrt_half_nlogn\n");
    for r in rows {
        let losses = r.expected_losses.to_f64().unwrap_or(f64::NAN);
        out.push_str(&format!("{},{:.6},{:.6}\n", r.n, losses, r.sqrt_half_nlogn));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{majority_strategy, no_gap_strategy};

    fn cfg(s: Strategy, deals: u64, seed: u64) -> SimConfig {
        SimConfig::new(s, deals, seed).unwrap()
    }

    #[test]
    fn zero_deals_rejected() {
        assert!(SimConfig::new(Strategy::identity(3), 0, 1).is_err());
    }

    #[test]
    fn means_match_exact_values() {
        let sun_bin = simulate(&cfg(no_gap_strategy(3, 1).unwrap(), 100_000, 7)).unwrap();
        assert!((sun_bin.mean_tricks - 1.65).abs() < 4.0 * sun_bin.stderr, "{sun_bin:?}");
        let identity = simulate(&cfg(Strategy::identity(3), 100_000, 7)).unwrap();
        assert!((identity.mean_tricks - 1.5).abs() < 4.0 * identity.stderr, "{identity:?}");
        assert!((0.0..=1.0).contains(&identity.majority_win_rate));
    }

    #[test]
    fn deterministic_across_threads() {
        let c = cfg(majority_strategy(5).unwrap(), 20_000, 42);
        let a = simulate_with_threads(&c, 1).unwrap();
        let b = simulate_with_threads(&c, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, simulate(&c).unwrap());
        assert_ne!(a, simulate(&cfg(majority_strategy(5).unwrap(), 20_000, 43)).unwrap());
    }

    #[test]
    fn even_n_ties_are_not_majorities() {
        // With N = 2 and the identity, hands {2,4} and {3,4} take both tricks;
        // the two 1-1 splits must not count.
        let r = simulate(&cfg(Strategy::identity(2), 10_000, 3)).unwrap();
        assert!((r.majority_win_rate - 1.0 / 3.0).abs() < 0.02, "{r:?}");
    }

    #[test]
    fn sweep_examples() {
        let rows = sweep_loss_fraction(&[3, 7, 60], KRule::Exact).unwrap();
        assert_eq!(rows[0].expected_losses, BigRational::new(27.into(), 20.into()));
        assert_eq!(rows[1].expected_losses, BigRational::new((7 * 3432 - 15148).into(), 3432.into()));
        let csv = loss_rows_to_csv(&rows);
        assert!(csv.starts_with("n,expected_losses,sqrt_half_nlogn\n3,1.350000,"));
        assert_eq!(csv.lines().count(), 4);
        assert!(sweep_loss_fraction(&[2], KRule::Exact).is_err());
    }
}
