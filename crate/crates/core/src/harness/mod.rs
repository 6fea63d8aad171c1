//! Experiment driver: simulate, record, analyze, CHSH runs and verification.
//!
//! Trials are cut into fixed chunks of [`CHUNK_TRIALS`] independent of the
//! worker count. Each chunk is reduced into its own accumulator and the
//! partials are merged in chunk order, so the output bits depend only on the
//! seed and the configuration.

pub mod config;
pub mod report;
pub mod triallog;
pub mod verify;

use rayon::prelude::*;
use rayon::ThreadPoolBuilder;
use thiserror::Error;

use crate::chsh::{chsh_separate, variance_bound_from_mean, ChshConfig, ChshError, SingleAverage, VarianceBound};
use crate::estimators::{EstimatorError, PairAccumulator, PairEstimate};
use crate::ga::Direction;
use crate::spin::{measure_a, measure_b, raw_sign_a, raw_sign_b, TrialRecord};

pub use config::{AngleSweep, ConfigError, ExperimentConfig, OutputFormat, Settings};
pub use report::{KeyValueReport, ReportRow};
pub use triallog::{TrialLog, TrialLogError};

pub const CHUNK_TRIALS: u64 = 8192;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Chsh(#[from] ChshError),
    #[error(transparent)]
    TrialLog(#[from] TrialLogError),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
    #[error("a CHSH run needs four settings (--a, --a-prime, --b, --b-prime)")]
    NotAQuadruple,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Something that can absorb trials and be merged with a partial of the same shape.
pub trait TrialSink: Send {
    fn push(&mut self, trial: &TrialRecord);
    fn merge(&mut self, other: &Self);
}

impl TrialSink for Vec<PairAccumulator> {
    fn push(&mut self, trial: &TrialRecord) {
        for acc in self.iter_mut() {
            acc.push(trial);
        }
    }

    fn merge(&mut self, other: &Self) {
        for (acc, o) in self.iter_mut().zip(other) {
            acc.merge(o);
        }
    }
}

/// Feeds trials `0..n` into fresh sinks, one per chunk, and merges the chunks in order.
pub fn reduce_trials<S, New, Trial>(n: u64, workers: usize, new_sink: New, trial: Trial) -> Result<S, HarnessError>
where
    S: TrialSink,
    New: Fn() -> S + Sync,
    Trial: Fn(u64) -> TrialRecord + Sync,
{
    let pool = ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let chunks = n.div_ceil(CHUNK_TRIALS);
    let partials: Vec<S> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut sink = new_sink();
                for k in c * CHUNK_TRIALS..n.min((c + 1) * CHUNK_TRIALS) {
                    sink.push(&trial(k));
                }
                sink
            })
            .collect()
    });
    let mut total = new_sink();
    for p in &partials {
        total.merge(p);
    }
    Ok(total)
}

fn score_pairs<Trial>(config: &ExperimentConfig, trial: Trial) -> Result<Vec<ReportRow>, HarnessError>
where
    Trial: Fn(u64) -> TrialRecord + Sync,
{
    config.validate()?;
    let pairs = config.settings.pairs();
    let accs = reduce_trials(
        config.trials,
        config.workers,
        || pairs.iter().map(|&(_, a, b)| PairAccumulator::new(a, b)).collect::<Vec<_>>(),
        trial,
    )?;
    pairs
        .iter()
        .zip(&accs)
        .map(|(&(theta, _, _), acc)| {
            let est = acc.finalize()?;
            let mean_lambda = acc.standard.mean_lambda().unwrap_or(0.0);
            Ok(ReportRow::from_estimate(theta, &est, mean_lambda, &config.pipelines))
        })
        .collect()
}

/// Runs `config.trials` fresh trials per setting pair and reports every pipeline.
pub fn simulate(config: &ExperimentConfig) -> Result<Vec<ReportRow>, HarnessError> {
    let seed = config.seed;
    score_pairs(config, |k| TrialRecord::generate(seed, k))
}

/// Draws the trials of `config` without scoring them.
pub fn record(config: &ExperimentConfig) -> Result<TrialLog, HarnessError> {
    config.validate()?;
    Ok(TrialLog::generate(config.seed, config.trials))
}

/// Scores a stored log. `config.trials` and `config.seed` are taken from the log.
pub fn analyze(log: &TrialLog, config: &ExperimentConfig) -> Result<Vec<ReportRow>, HarnessError> {
    let config = ExperimentConfig {
        trials: log.records.len() as u64,
        seed: log.seed,
        ..config.clone()
    };
    score_pairs(&config, |k| log.records[k as usize])
}

pub fn render_rows(rows: &[ReportRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => report::rows_to_csv(rows),
        OutputFormat::Json => report::rows_to_json(rows),
    }
}

/// Four setting pairs scored from shared trials, plus both single averages.
#[derive(Debug, Clone)]
struct ChshSink {
    config: ChshConfig,
    pairs: Vec<PairAccumulator>,
    single_sign: SingleAverage,
    single_lambda: SingleAverage,
}

impl ChshSink {
    fn new(config: ChshConfig) -> Self {
        Self {
            config,
            pairs: config.pairs().iter().map(|&(a, b)| PairAccumulator::new(a, b)).collect(),
            single_sign: SingleAverage::default(),
            single_lambda: SingleAverage::default(),
        }
    }
}

impl TrialSink for ChshSink {
    fn push(&mut self, t: &TrialRecord) {
        TrialSink::push(&mut self.pairs, t);
        let c = &self.config;
        let signs = [
            raw_sign_a(t.s, c.a).value,
            raw_sign_a(t.s, c.a_prime).value,
            raw_sign_b(t.s, c.b).value,
            raw_sign_b(t.s, c.b_prime).value,
        ];
        self.single_sign.push(signs).expect("signs are +-1");
        let lam = t.orientation;
        let limits = [
            measure_a(c.a, lam),
            measure_a(c.a_prime, lam),
            measure_b(c.b, lam),
            measure_b(c.b_prime, lam),
        ];
        self.single_lambda.push(limits).expect("limit outcomes are +-1");
    }

    fn merge(&mut self, other: &Self) {
        TrialSink::merge(&mut self.pairs, &other.pairs);
        self.single_sign.merge(&other.single_sign);
        self.single_lambda.merge(&other.single_lambda);
    }
}

/// Seed of the independent trial stream used for setting pair `pair` under
/// strict sampling.
pub fn strict_seed(seed: u64, pair: usize) -> u64 {
    // splitmix64 finalizer over (seed, pair)
    let mut z = seed ^ (pair as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshRunReport {
    pub n: u64,
    pub strict_sampling: bool,
    /// Per pair in CHSH order (ab, ab', a'b, a'b').
    pub estimates: [PairEstimate; 4],
    pub separate_standard: f64,
    pub separate_raw_sign: f64,
    pub separate_raw_lambda: f64,
    /// `None` under strict sampling, where no trial carries all four scores.
    pub single_average_raw_sign: Option<f64>,
    pub single_average_raw_lambda: Option<f64>,
    pub variance: VarianceBound,
}

impl ChshRunReport {
    pub fn to_key_value(&self) -> KeyValueReport {
        let mut r = KeyValueReport::default();
        r.push("n", self.n as f64);
        r.push("strict_sampling", if self.strict_sampling { 1.0 } else { 0.0 });
        for (label, est) in ["ab", "ab'", "a'b", "a'b'"].iter().zip(&self.estimates) {
            r.push(format!("E_{label}_standard"), est.standard.scalar);
            r.push(format!("E_{label}_standard_bivector_norm"), est.standard.bivector.norm());
            r.push(format!("E_{label}_raw_sign"), est.raw_sign.value);
            r.push(format!("E_{label}_raw_lambda"), est.raw_lambda.value);
        }
        r.push("chsh_separate_standard", self.separate_standard);
        r.push("chsh_separate_raw_sign", self.separate_raw_sign);
        r.push("chsh_separate_raw_lambda", self.separate_raw_lambda);
        r.push("chsh_single_average_raw_sign", self.single_average_raw_sign);
        r.push("chsh_single_average_raw_lambda", self.single_average_raw_lambda);
        let v = &self.variance;
        r.push("variance_lhs", v.lhs);
        r.push("variance_rhs", v.rhs);
        r.push("variance_rhs_limit", v.rhs_limit);
        r.push("variance_rhs_opposite_torsion_order", v.rhs_opposite_torsion_order);
        r.push("variance_holds", if v.holds { 1.0 } else { 0.0 });
        r.push("cross_dot", v.cross_dot);
        r.push("mean_lambda", v.mean_lambda);
        r.push("variance_bivector_remainder_norm", v.bivector_remainder.norm());
        r.push(
            "sign_ties",
            self.estimates.iter().map(|e| e.sign_ties).sum::<u64>() as f64,
        );
        r
    }
}

/// CHSH run over a quadruple of settings.
pub fn chsh_run(config: &ExperimentConfig) -> Result<ChshRunReport, HarnessError> {
    config.validate()?;
    let Settings::Quad(quad) = config.settings else {
        return Err(HarnessError::NotAQuadruple);
    };
    let n = config.trials;
    let seed = config.seed;

    let (pairs, single_sign, single_lambda) = if config.strict_sampling {
        let mut pairs = Vec::with_capacity(4);
        for (p, &(a, b)) in quad.pairs().iter().enumerate() {
            let s = strict_seed(seed, p);
            let acc = reduce_trials(n, config.workers, || vec![PairAccumulator::new(a, b)], |k| TrialRecord::generate(s, k))?;
            pairs.extend(acc);
        }
        (pairs, None, None)
    } else {
        let sink = reduce_trials(n, config.workers, || ChshSink::new(quad), |k| TrialRecord::generate(seed, k))?;
        (sink.pairs, sink.single_sign.mean(), sink.single_lambda.mean())
    };

    let estimates: Vec<PairEstimate> = pairs.iter().map(|p| p.finalize()).collect::<Result<_, _>>()?;
    let estimates: [PairEstimate; 4] = estimates.try_into().expect("four setting pairs");
    let sep = |f: fn(&PairEstimate) -> f64| {
        let [e1, e2, e3, e4] = estimates.each_ref().map(f);
        chsh_separate(e1, e2, e3, e4)
    };
    // orientation samples of the a-b pair drive the finite-n bound
    let mean_lambda = pairs[0].standard.mean_lambda().unwrap_or(0.0);

    Ok(ChshRunReport {
        n,
        strict_sampling: config.strict_sampling,
        separate_standard: sep(|e| e.standard.scalar),
        separate_raw_sign: sep(|e| e.raw_sign.value),
        separate_raw_lambda: sep(|e| e.raw_lambda.value),
        single_average_raw_sign: single_sign,
        single_average_raw_lambda: single_lambda,
        variance: variance_bound_from_mean(&quad, mean_lambda)?,
        estimates,
    })
}

/// Default CHSH settings: planar 0, 90, 45 and -45 degrees.
pub fn default_quadruple() -> ChshConfig {
    ChshConfig::planar(0.0, 90.0, 45.0, -45.0)
}

pub fn direction_pair_settings(a: Direction, b: Direction) -> Settings {
    Settings::Pair { a, b }
}
