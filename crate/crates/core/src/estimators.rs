//! Streaming correlation estimators.
//!
//! Three pipelines read the same trial records:
//!
//! * `standard`: mean of the oriented spin products `L(a, lambda) L(b, lambda)`,
//!   kept as a full multivector so the bivector remainder is observable;
//! * `raw-sign`: mean of `sign(+s.a) sign(-s.b)`;
//! * `raw-lambda`: mean of the limit outcomes `A = lambda`, `B = -lambda`.
//!
//! All accumulators are mergeable. Merging partial accumulators in a fixed
//! order reproduces the same bits regardless of how the partials were computed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ga::{unit_bivector, Direction, Multivector, Orientation, EXACT_TOL};
use crate::spin::{
    measure_a, measure_b, oriented_spin_product, raw_sign_a, raw_sign_b, SpinBivector, TrialRecord,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("estimator needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: u64, got: u64 },
    #[error("correlation undefined: zero variance in {0}")]
    ZeroVariance(&'static str),
    #[error("score {0} is not +1 or -1")]
    NotUnitScore(i64),
    #[error("sample axes differ from the requested direction")]
    AxisMismatch,
    #[error("sigma is degenerate: {0}")]
    DegenerateSigma(&'static str),
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.compensation += other.compensation;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Running multivector sum of per-trial products.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorrelationAccumulator {
    sum: [CompensatedSum; 8],
    count: u64,
    lambda_sum: i64,
}

impl CorrelationAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn lambda_sum(&self) -> i64 {
        self.lambda_sum
    }

    pub fn push(&mut self, orientation: Orientation, product: &Multivector) {
        for (acc, c) in self.sum.iter_mut().zip(product.coefficients()) {
            acc.add(c);
        }
        self.count += 1;
        self.lambda_sum += i64::from(orientation.sign());
    }

    pub fn merge(&mut self, other: &Self) {
        for (acc, o) in self.sum.iter_mut().zip(other.sum.iter()) {
            acc.merge(o);
        }
        self.count += other.count;
        self.lambda_sum += other.lambda_sum;
    }

    pub fn sum(&self) -> Multivector {
        Multivector::new(self.sum.map(|s| s.value()))
    }

    pub fn mean(&self) -> Option<Multivector> {
        (self.count > 0).then(|| self.sum().scale(1.0 / self.count as f64))
    }

    pub fn mean_lambda(&self) -> Option<f64> {
        (self.count > 0).then(|| self.lambda_sum as f64 / self.count as f64)
    }
}

/// Adds one trial's oriented spin product.
pub fn accumulate_standard(acc: &mut CorrelationAccumulator, orientation: Orientation, a: Direction, b: Direction) {
    acc.push(orientation, &oriented_spin_product(orientation, a, b));
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub scalar: f64,
    pub bivector: Multivector,
    pub stderr: f64,
}

impl CorrelationEstimate {
    pub fn value(&self) -> Multivector {
        Multivector::scalar(self.scalar) + self.bivector
    }
}

/// Sample standard deviation of `n` values of `+-1` whose sum is `sum`.
fn sign_sample_std(sum: i64, n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let n_f = n as f64;
    let ss = n_f - (sum as f64) * (sum as f64) / n_f;
    (ss.max(0.0) / (n_f - 1.0)).sqrt()
}

pub fn finalize_standard(acc: &CorrelationAccumulator, a: Direction, b: Direction) -> Result<CorrelationEstimate, EstimatorError> {
    let mean = acc.mean().ok_or(EstimatorError::TooFewSamples { needed: 1, got: 0 })?;
    let n = acc.count();
    let stderr = a.cross(b).norm() * sign_sample_std(acc.lambda_sum(), n) / (n as f64).sqrt();
    Ok(CorrelationEstimate {
        scalar: mean.scalar_part(),
        bivector: mean.grade(2),
        stderr,
    })
}

/// Exact running sums for a stream of `+-1` values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SignStream {
    count: u64,
    sum: i64,
}

impl SignStream {
    pub fn push(&mut self, value: i8) -> Result<(), EstimatorError> {
        if value != 1 && value != -1 {
            return Err(EstimatorError::NotUnitScore(value.into()));
        }
        self.count += 1;
        self.sum += i64::from(value);
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.sum += other.sum;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum as f64 / self.count as f64)
    }
}

/// Sample standard error of a `+-1` stream.
pub fn stderr_scalar(stream: &SignStream) -> Result<f64, EstimatorError> {
    if stream.count < 2 {
        return Err(EstimatorError::TooFewSamples { needed: 2, got: stream.count });
    }
    Ok(sign_sample_std(stream.sum, stream.count) / (stream.count as f64).sqrt())
}

/// Sums of two `+-1` score streams.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PearsonStats {
    pub n: u64,
    pub sum_a: i64,
    pub sum_b: i64,
    pub sum_ab: i64,
    pub sum_a2: i64,
    pub sum_b2: i64,
}

impl PearsonStats {
    pub fn push(&mut self, a: i8, b: i8) -> Result<(), EstimatorError> {
        for v in [a, b] {
            if v != 1 && v != -1 {
                return Err(EstimatorError::NotUnitScore(v.into()));
            }
        }
        let (a, b) = (i64::from(a), i64::from(b));
        self.n += 1;
        self.sum_a += a;
        self.sum_b += b;
        self.sum_ab += a * b;
        self.sum_a2 += a * a;
        self.sum_b2 += b * b;
        Ok(())
    }

    pub fn merge(&mut self, o: &Self) {
        self.n += o.n;
        self.sum_a += o.sum_a;
        self.sum_b += o.sum_b;
        self.sum_ab += o.sum_ab;
        self.sum_a2 += o.sum_a2;
        self.sum_b2 += o.sum_b2;
    }
}

/// Product-moment correlation with population moments.
pub fn pearson_raw(stats: &PearsonStats) -> Result<f64, EstimatorError> {
    if stats.n < 2 {
        return Err(EstimatorError::TooFewSamples { needed: 2, got: stats.n });
    }
    let n = stats.n as f64;
    let (mean_a, mean_b) = (stats.sum_a as f64 / n, stats.sum_b as f64 / n);
    let var_a = stats.sum_a2 as f64 / n - mean_a * mean_a;
    let var_b = stats.sum_b2 as f64 / n - mean_b * mean_b;
    if var_a <= 0.0 {
        return Err(EstimatorError::ZeroVariance("A"));
    }
    if var_b <= 0.0 {
        return Err(EstimatorError::ZeroVariance("B"));
    }
    let cov = stats.sum_ab as f64 / n - mean_a * mean_b;
    Ok(cov / (var_a * var_b).sqrt())
}

/// Bivector standard deviation: a signed detector bivector times a scalar spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaEstimate {
    pub detector: Multivector,
    pub spread: f64,
}

impl SigmaEstimate {
    pub fn value(&self) -> Multivector {
        self.detector.scale(self.spread)
    }
}

/// Spread of a set of spin bivectors about their mean, paired with
/// `sign * D(n_dir)` as the bivector scale of the raw score.
pub fn bivector_sigma(samples: &[SpinBivector], sign: i8, n_dir: Direction) -> Result<SigmaEstimate, EstimatorError> {
    if samples.is_empty() {
        return Err(EstimatorError::TooFewSamples { needed: 1, got: 0 });
    }
    if samples
        .iter()
        .any(|s| (s.axis.vector() - n_dir.vector()).norm() > EXACT_TOL)
    {
        return Err(EstimatorError::AxisMismatch);
    }
    let n = samples.len() as f64;
    let mean = samples
        .iter()
        .fold(Multivector::ZERO, |m, s| m + s.value)
        .scale(1.0 / n);
    let spread_sq = samples.iter().map(|s| (s.value - mean).norm_sq()).sum::<f64>() / n;
    Ok(SigmaEstimate {
        detector: unit_bivector(n_dir).scale(f64::from(sign.signum())),
        spread: spread_sq.sqrt(),
    })
}

/// Left-divides a raw product by its bivector sigma.
pub fn standardize(raw_product: &Multivector, sigma: &SigmaEstimate) -> Result<Multivector, EstimatorError> {
    if !(sigma.spread > 0.0) {
        return Err(EstimatorError::DegenerateSigma("zero spread"));
    }
    let d = sigma.detector;
    if (d.grade(2) - d).max_abs() > EXACT_TOL || (d.norm_sq() - 1.0).abs() > EXACT_TOL {
        return Err(EstimatorError::DegenerateSigma("detector factor is not a unit bivector"));
    }
    // inverse of a unit bivector is its negation
    let inverse = (-d).scale(1.0 / sigma.spread);
    Ok(inverse * *raw_product)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Standard,
    RawSign,
    RawLambda,
}

impl Pipeline {
    pub const ALL: [Self; 3] = [Self::Standard, Self::RawSign, Self::RawLambda];

    pub fn name(self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::RawSign => "raw-sign",
            Self::RawLambda => "raw-lambda",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown pipeline '{s}', expected standard, raw-sign or raw-lambda"))
    }
}

/// All three pipelines for one pair of settings.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAccumulator {
    pub a: Direction,
    pub b: Direction,
    pub standard: CorrelationAccumulator,
    pub raw_sign: SignStream,
    pub raw_lambda: SignStream,
    pub sign_ties: u64,
}

impl PairAccumulator {
    pub fn new(a: Direction, b: Direction) -> Self {
        Self {
            a,
            b,
            standard: CorrelationAccumulator::new(),
            raw_sign: SignStream::default(),
            raw_lambda: SignStream::default(),
            sign_ties: 0,
        }
    }

    pub fn push(&mut self, trial: &TrialRecord) {
        let lam = trial.orientation;
        accumulate_standard(&mut self.standard, lam, self.a, self.b);

        let (sa, sb) = (raw_sign_a(trial.s, self.a), raw_sign_b(trial.s, self.b));
        self.sign_ties += u64::from(sa.tie) + u64::from(sb.tie);
        self.raw_sign.push(sa.value * sb.value).expect("signs are +-1");

        let limit = measure_a(self.a, lam) * measure_b(self.b, lam);
        self.raw_lambda.push(limit).expect("limit outcomes are +-1");
    }

    pub fn merge(&mut self, other: &Self) {
        self.standard.merge(&other.standard);
        self.raw_sign.merge(&other.raw_sign);
        self.raw_lambda.merge(&other.raw_lambda);
        self.sign_ties += other.sign_ties;
    }

    pub fn count(&self) -> u64 {
        self.standard.count()
    }

    pub fn finalize(&self) -> Result<PairEstimate, EstimatorError> {
        let scalar = |s: &SignStream| -> Result<ScalarEstimate, EstimatorError> {
            Ok(ScalarEstimate {
                value: s.mean().ok_or(EstimatorError::TooFewSamples { needed: 1, got: 0 })?,
                stderr: if s.count() >= 2 { stderr_scalar(s)? } else { 0.0 },
            })
        };
        Ok(PairEstimate {
            n: self.count(),
            standard: finalize_standard(&self.standard, self.a, self.b)?,
            raw_sign: scalar(&self.raw_sign)?,
            raw_lambda: scalar(&self.raw_lambda)?,
            sign_ties: self.sign_ties,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarEstimate {
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairEstimate {
    pub n: u64,
    pub standard: CorrelationEstimate,
    pub raw_sign: ScalarEstimate,
    pub raw_lambda: ScalarEstimate,
    pub sign_ties: u64,
}
