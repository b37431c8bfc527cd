//! Random and exhaustive searches for QM / MWS codes, and Monte-Carlo
//! estimates of the averaged criterion sum over random codes.
//!
//! Every random trial draws from its own ChaCha8 stream keyed by the seed,
//! the length and the trial index, so results do not depend on how trials
//! are spread over worker threads. When several trials succeed, the one with
//! the smallest index is reported.
//!
//! Exhaustive mode only visits systematic generators `[I | A]`. Any
//! full-rank generator can be row-reduced and column-permuted into that form,
//! and neither operation changes the multiset of codeword weights or the
//! support structure, so a negative exhaustive verdict is definitive.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::code::{checked_pow, rank, EnumGuard, LinearCode};
use crate::error::{Error, Result};
use crate::gf::{FieldInfo, FieldSpec};
use crate::matrix::write_matrix;

/// Default number of random trials per length.
pub const DEFAULT_TRIALS: u64 = 10_000;
/// Default ceiling on `q^(k(n-k))` systematic generators per length.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Random,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Qm,
    Mws,
}

/// Which check accepted a QM witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptPath {
    SufficientDn,
    SupportCheck,
    Weights,
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}

fn default_exhaustive_limit() -> u128 {
    DEFAULT_EXHAUSTIVE_LIMIT
}

fn default_enum_limit() -> u128 {
    crate::code::DEFAULT_ENUM_LIMIT
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub q: u64,
    pub k: usize,
    pub n_lo: usize,
    pub n_hi: usize,
    pub mode: SearchMode,
    #[serde(default = "default_trials")]
    pub trials: u64,
    pub seed: u64,
    pub target: Target,
    /// Worker threads; 0 uses the ambient rayon pool.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_exhaustive_limit")]
    pub exhaustive_limit: u128,
    #[serde(default = "default_enum_limit")]
    pub enum_limit: u128,
}

impl SearchConfig {
    pub fn new(q: u64, k: usize, lengths: std::ops::RangeInclusive<usize>, mode: SearchMode, target: Target) -> Self {
        SearchConfig {
            q,
            k,
            n_lo: *lengths.start(),
            n_hi: *lengths.end(),
            mode,
            trials: DEFAULT_TRIALS,
            seed: 0,
            target,
            workers: 0,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            enum_limit: crate::code::DEFAULT_ENUM_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be positive".into()));
        }
        if self.n_lo == 0 || self.n_lo > self.n_hi {
            return Err(Error::InvalidConfig(format!(
                "invalid length range {}..{}",
                self.n_lo, self.n_hi
            )));
        }
        if self.mode == SearchMode::Random && self.trials == 0 {
            return Err(Error::InvalidConfig("random mode needs at least one trial".into()));
        }
        Ok(())
    }

    fn guard(&self) -> EnumGuard {
        EnumGuard::new(self.enum_limit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Found,
    /// Random mode: nothing found within the trial budget.
    NotFound,
    /// Exhaustive mode: no code of this length has the property.
    NoneExists,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// Trial index (random) or systematic-matrix index (exhaustive).
    pub index: u64,
    pub generator: Vec<Vec<u32>>,
    pub matrix: String,
    pub zero_columns: Vec<usize>,
    pub accepted_by: AcceptPath,
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthOutcome {
    pub n: usize,
    pub verdict: Verdict,
    pub candidates_examined: u64,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub field: FieldInfo,
    pub q: u64,
    pub k: usize,
    pub mode: SearchMode,
    pub target: Target,
    pub seed: u64,
    pub trials: u64,
    pub outcomes: Vec<LengthOutcome>,
    pub shortest_success: Option<usize>,
    /// The only field that varies between identical runs.
    pub wall_clock_ms: u64,
}

impl SearchReport {
    pub fn outcome(&self, n: usize) -> Option<&LengthOutcome> {
        self.outcomes.iter().find(|o| o.n == n)
    }

    pub fn witness_codes(&self) -> Result<Vec<LinearCode>> {
        self.outcomes
            .iter()
            .filter_map(|o| o.witness.as_ref())
            .map(|w| crate::matrix::parse_matrix(&w.matrix))
            .collect()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// RNG for trial `trial` at length `n`.
pub fn trial_rng(seed: u64, n: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(n as u64)));
    rng.set_stream(trial);
    rng
}

/// Uniform `k x n` matrix over GF(q), redrawn until it has rank k.
pub fn random_code<R: Rng + ?Sized>(field: &Arc<FieldSpec>, k: usize, n: usize, rng: &mut R) -> Result<LinearCode> {
    if k == 0 || n < k {
        return Err(Error::InvalidConfig(format!("no [{n}, {k}] code exists")));
    }
    let q = field.order();
    loop {
        let g: Vec<u32> = (0..k * n).map(|_| rng.gen_range(0..q)).collect();
        if rank(field, k, n, &g) == k {
            return LinearCode::from_raw(field.clone(), k, n, g, vec![BigUint::one(); n]);
        }
    }
}

/// Runs the target predicate; returns how the code was accepted.
pub fn accepts(code: &LinearCode, target: Target, guard: &EnumGuard) -> Result<Option<AcceptPath>> {
    match target {
        Target::Mws => Ok(code.is_mws(guard)?.then_some(AcceptPath::Weights)),
        Target::Qm => {
            if code.qm_sufficient_dn(guard)? {
                Ok(Some(AcceptPath::SufficientDn))
            } else if code.is_qm(guard)? {
                Ok(Some(AcceptPath::SupportCheck))
            } else {
                Ok(None)
            }
        }
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

fn systematic_code(field: &Arc<FieldSpec>, k: usize, n: usize, mut index: u128) -> Result<LinearCode> {
    let q = u128::from(field.order());
    let mut g = vec![0u32; k * n];
    for i in 0..k {
        g[i * n + i] = 1;
    }
    for i in (0..k).rev() {
        for j in (k..n).rev() {
            g[i * n + j] = (index % q) as u32;
            index /= q;
        }
    }
    LinearCode::from_raw(field.clone(), k, n, g, vec![BigUint::one(); n])
}

type Hit = (u64, LinearCode, AcceptPath);

fn first_hit(
    count: u64,
    make: impl Fn(u64) -> Result<LinearCode> + Sync,
    target: Target,
    guard: &EnumGuard,
) -> Result<Option<Hit>> {
    (0..count)
        .into_par_iter()
        .map(|i| -> Result<Option<Hit>> {
            let code = make(i)?;
            Ok(accepts(&code, target, guard)?.map(|p| (i, code, p)))
        })
        .find_first(|r| !matches!(r, Ok(None)))
        .transpose()
        .map(Option::flatten)
}

fn outcome(n: usize, hit: Option<Hit>, examined_if_none: u64, none: Verdict) -> LengthOutcome {
    match hit {
        Some((index, code, accepted_by)) => LengthOutcome {
            n,
            verdict: Verdict::Found,
            candidates_examined: index + 1,
            witness: Some(Witness {
                index,
                generator: code.index_rows(),
                matrix: write_matrix(&code),
                zero_columns: code.zero_columns(),
                accepted_by,
            }),
        },
        None => LengthOutcome {
            n,
            verdict: none,
            candidates_examined: examined_if_none,
            witness: None,
        },
    }
}

fn search_length(config: &SearchConfig, field: &Arc<FieldSpec>, n: usize) -> Result<LengthOutcome> {
    let guard = config.guard();
    let k = config.k;
    guard.check(field.order(), k)?;
    if n < k {
        let none = match config.mode {
            SearchMode::Exhaustive => Verdict::NoneExists,
            SearchMode::Random => Verdict::NotFound,
        };
        return Ok(outcome(n, None, 0, none));
    }
    match config.mode {
        SearchMode::Random => {
            let hit = first_hit(
                config.trials,
                |t| random_code(field, k, n, &mut trial_rng(config.seed, n, t)),
                config.target,
                &guard,
            )?;
            Ok(outcome(n, hit, config.trials, Verdict::NotFound))
        }
        SearchMode::Exhaustive => {
            let total = checked_pow(u128::from(field.order()), k * (n - k))
                .filter(|&t| t <= config.exhaustive_limit)
                .ok_or_else(|| Error::SearchSpaceTooLarge {
                    count: checked_pow(u128::from(field.order()), k * (n - k)).unwrap_or(u128::MAX),
                    limit: config.exhaustive_limit,
                })? as u64;
            let hit = first_hit(
                total,
                |i| systematic_code(field, k, n, u128::from(i)),
                config.target,
                &guard,
            )?;
            Ok(outcome(n, hit, total, Verdict::NoneExists))
        }
    }
}

pub fn search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let field = crate::constructions::field(config.q)?;
    let start = Instant::now();
    let outcomes = with_pool(config.workers, || {
        (config.n_lo..=config.n_hi)
            .map(|n| search_length(config, &field, n))
            .collect::<Result<Vec<_>>>()
    })??;
    let shortest_success = outcomes
        .iter()
        .find(|o| o.verdict == Verdict::Found)
        .map(|o| o.n);
    Ok(SearchReport {
        field: field.info(),
        q: config.q,
        k: config.k,
        mode: config.mode,
        target: config.target,
        seed: config.seed,
        trials: if config.mode == SearchMode::Random { config.trials } else { 0 },
        outcomes,
        shortest_success,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

/// Random QM search at the GV-guaranteed length `ceil(k * lambda_q)`.
pub fn gv_qm_search(q: u64, k: usize, trials: u64, seed: u64, workers: usize) -> Result<SearchReport> {
    let n = (k as f64 * bounds::lambda_q(q)?).ceil() as usize;
    let mut config = SearchConfig::new(q, k, n..=n, SearchMode::Random, Target::Qm);
    config.trials = trials;
    config.seed = seed;
    config.workers = workers;
    search(&config)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactRatio {
    pub numerator: String,
    pub denominator: String,
}

/// Monte-Carlo estimate of `E[sum_w A_w (A_w - (q-1))]` over random codes.
#[derive(Clone, Debug, Serialize)]
pub struct ExpectationEstimate {
    pub field: FieldInfo,
    pub q: u64,
    pub k: usize,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    /// `q^(2k-2n) sum_w C(n,w)^2 (q-1)^(2w)`.
    pub bound: f64,
    pub bound_exact: ExactRatio,
    pub mws_hits: u64,
    pub mws_fraction: f64,
    /// `mean <= bound + 4 stderr`.
    pub within_bound: bool,
    pub wall_clock_ms: u64,
}

// Keeps Monte-Carlo streams apart from search streams with the same seed.
const ESTIMATE_SALT: u64 = 0x6d6f_6e74_6563_6172;

pub fn estimate_expectation(
    q: u64,
    k: usize,
    n: usize,
    samples: u64,
    seed: u64,
    workers: usize,
    guard: &EnumGuard,
) -> Result<ExpectationEstimate> {
    if samples == 0 {
        return Err(Error::InvalidConfig("need at least one sample".into()));
    }
    let field = crate::constructions::field(q)?;
    guard.check(field.order(), k)?;
    let start = Instant::now();
    let values = with_pool(workers, || {
        (0..samples)
            .into_par_iter()
            .map(|t| -> Result<u128> {
                let mut rng = trial_rng(seed ^ ESTIMATE_SALT, n, t);
                let code = random_code(&field, k, n, &mut rng)?;
                Ok(code.weight_spectrum(guard)?.mws_criterion_sum())
            })
            .collect::<Result<Vec<u128>>>()
    })??;

    let s = (q - 1) as u128;
    let threshold = 2 * s * s;
    let mws_hits = values.iter().filter(|&&v| v < threshold).count() as u64;
    let count = samples as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / count;
    let var = if samples > 1 {
        values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    let stderr = (var / count).sqrt();
    let (num, den) = bounds::eqbound_lhs(q, k as u32, n as u64);
    let bound = bounds::ratio_f64(&num, &den);
    Ok(ExpectationEstimate {
        field: field.info(),
        q,
        k,
        n,
        samples,
        seed,
        mean,
        stderr,
        bound,
        bound_exact: ExactRatio {
            numerator: num.to_string(),
            denominator: den.to_string(),
        },
        mws_hits,
        mws_fraction: mws_hits as f64 / count,
        within_bound: mean <= bound + 4.0 * stderr,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}
