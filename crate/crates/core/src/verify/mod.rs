//! Checking that a network sorts, and exact brute-force values of sorting
//! and routing numbers on tiny graphs.

mod oracle;

pub use oracle::{
    all_matchings, connected_graphs_up_to_iso, exact_rt, exact_rt_p, exact_rt_partial, exact_st, exact_st_all_orders,
    sandwich_check, OracleResult, Quantity, SandwichReport, SearchStats, StOptions, Witness,
};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::SortingNetwork;

/// Default largest `n` for which all `2^n` binary inputs are tried.
pub const ZERO_ONE_CAP: usize = 20;
/// Hard ceiling that no override may exceed.
pub const ZERO_ONE_HARD_CAP: usize = 28;
pub const EXHAUSTIVE_CAP: usize = 8;
/// Environment variable that raises the zero-one cap.
pub const CAP_ENV: &str = "MATCHNET_CAP_OVERRIDE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ZeroOne,
    Exhaustive,
    Randomized { trials: u64, seed: u64 },
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::ZeroOne => write!(f, "zero-one"),
            Method::Exhaustive => write!(f, "exhaustive"),
            Method::Randomized { trials, seed } => write!(f, "random({trials},{seed})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub method: Method,
    pub verdict: Verdict,
    /// Input (key per vertex) that the network fails to sort.
    pub counterexample: Option<Vec<u32>>,
    pub inputs_checked: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Re-runs the counterexample; `Some(true)` when it still fails.
    pub fn replay(&self, net: &SortingNetwork) -> Option<bool> {
        let input = self.counterexample.as_ref()?;
        let out = net.execute(input).ok()?;
        Some(!net.is_sorted(&out))
    }

    fn new(method: Method, counterexample: Option<Vec<u32>>, inputs_checked: u64) -> Self {
        let verdict = if counterexample.is_some() { Verdict::Fail } else { Verdict::Pass };
        VerificationReport { method, verdict, counterexample, inputs_checked }
    }
}

/// The zero-one cap in force: [`ZERO_ONE_CAP`] unless the override variable
/// holds a number, which must not exceed [`ZERO_ONE_HARD_CAP`].
pub fn zero_one_cap() -> Result<usize> {
    match std::env::var(CAP_ENV) {
        Err(_) => Ok(ZERO_ONE_CAP),
        Ok(s) => {
            let cap: usize = s.trim().parse().map_err(|_| Error::Param(format!("{CAP_ENV} must be an integer")))?;
            if cap > ZERO_ONE_HARD_CAP {
                return Err(Error::Param(format!("{CAP_ENV} may not exceed {ZERO_ONE_HARD_CAP}")));
            }
            Ok(cap)
        }
    }
}

/// Runs the network on every binary input, under the configured cap.
pub fn verify_zero_one(net: &SortingNetwork) -> Result<VerificationReport> {
    verify_zero_one_capped(net, zero_one_cap()?)
}

/// Runs the network on every binary input, 64 inputs per machine word.
/// Input `x` puts bit `v` of `x` on vertex `v`.
pub fn verify_zero_one_capped(net: &SortingNetwork, cap: usize) -> Result<VerificationReport> {
    let n = net.n();
    if n > cap.min(ZERO_ONE_HARD_CAP) {
        return Err(Error::Cap { n, cap: cap.min(ZERO_ONE_HARD_CAP), what: "zero-one verification" });
    }
    let total: u64 = 1 << n;
    let chunks = total.div_ceil(64);
    let by_rank = net.order.vertices_by_rank();
    let bad = (0..chunks).into_par_iter().find_map_first(|chunk| {
        let mut words: Vec<u64> = (0..n)
            .map(|v| {
                if v < 6 {
                    // bit v of the lane index b
                    (0..64u64).filter(|b| (b >> v) & 1 == 1).fold(0, |w, b| w | 1 << b)
                } else if (chunk >> (v - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        for s in &net.stages {
            s.apply_words(&mut words);
        }
        let lanes = if total < 64 { (1u64 << total) - 1 } else { u64::MAX };
        let mut viol = 0;
        for w in by_rank.windows(2) {
            viol |= words[w[0]] & !words[w[1]];
        }
        viol &= lanes;
        (viol != 0).then(|| chunk * 64 + viol.trailing_zeros() as u64)
    });
    let counterexample = bad.map(|x| (0..n).map(|v| ((x >> v) & 1) as u32).collect());
    Ok(VerificationReport::new(Method::ZeroOne, counterexample, total))
}

/// Runs the network on all `n!` permutations of `0..n`.
pub fn verify_exhaustive(net: &SortingNetwork) -> Result<VerificationReport> {
    let n = net.n();
    if n > EXHAUSTIVE_CAP {
        return Err(Error::Cap { n, cap: EXHAUSTIVE_CAP, what: "exhaustive verification" });
    }
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut checked = 0;
    loop {
        checked += 1;
        if !net.is_sorted(&net.execute(&perm)?) {
            return Ok(VerificationReport::new(Method::Exhaustive, Some(perm), checked));
        }
        if !next_permutation(&mut perm) {
            return Ok(VerificationReport::new(Method::Exhaustive, None, checked));
        }
    }
}

/// Lexicographic successor; false once the last permutation is reached.
pub fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Sampling check for networks too large to certify: `trials` random
/// permutations and `trials` random bit vectors from a seeded generator.
/// A pass proves nothing; a failure comes with its input.
pub fn verify_randomized(net: &SortingNetwork, trials: u64, seed: u64) -> Result<VerificationReport> {
    let n = net.n();
    let method = Method::Randomized { trials, seed };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for k in 0..trials {
        perm.shuffle(&mut rng);
        if !net.is_sorted(&net.execute(&perm)?) {
            return Ok(VerificationReport::new(method, Some(perm), k + 1));
        }
    }
    // bit vectors, 64 lanes at a time
    let by_rank = net.order.vertices_by_rank();
    let mut done = 0;
    while done < trials {
        let lanes = (trials - done).min(64);
        let mask = if lanes == 64 { u64::MAX } else { (1 << lanes) - 1 };
        let input: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & mask).collect();
        let mut words = input.clone();
        for s in &net.stages {
            s.apply_words(&mut words);
        }
        let viol = by_rank.windows(2).fold(0, |acc, w| acc | (words[w[0]] & !words[w[1]])) & mask;
        if viol != 0 {
            let b = viol.trailing_zeros();
            let ce = input.iter().map(|w| ((w >> b) & 1) as u32).collect();
            return Ok(VerificationReport::new(method, Some(ce), trials + done + b as u64 + 1));
        }
        done += lanes;
    }
    Ok(VerificationReport::new(method, None, 2 * trials))
}

/// Zero-one when under the cap, sampling otherwise.
pub fn verify_auto(net: &SortingNetwork, seed: u64) -> Result<VerificationReport> {
    if net.n() <= zero_one_cap()? {
        verify_zero_one(net)
    } else {
        verify_randomized(net, 100_000, seed)
    }
}
