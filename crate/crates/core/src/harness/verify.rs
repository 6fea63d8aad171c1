//! Invariant suites behind `spinorsim verify`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chsh::{dispute_eval, subalgebra_residual, torsion_residual};
use crate::estimators::{bivector_sigma, standardize, SigmaEstimate};
use crate::ga::{oriented_product, unit_bivector, Direction, Multivector, Orientation, EXACT_TOL};
use crate::spin::{
    appendix_c_residuals, measure_a_product, measure_b_product, sample_direction, sample_orientation, spin_of,
    trial_quaternion, ProductMode, SpinBivector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Subalgebra,
    BivectorIdentity,
    Torsion,
    AppendixC,
    GillClaims,
    Sigma,
}

impl Suite {
    pub const ALL: [Self; 6] = [
        Self::Subalgebra,
        Self::BivectorIdentity,
        Self::Torsion,
        Self::AppendixC,
        Self::GillClaims,
        Self::Sigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Subalgebra => "subalgebra",
            Self::BivectorIdentity => "bivector-identity",
            Self::Torsion => "torsion",
            Self::AppendixC => "appendix-c",
            Self::GillClaims => "gill-claims",
            Self::Sigma => "sigma",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite '{0}', expected one of subalgebra, bivector-identity, torsion, appendix-c, gill-claims, sigma")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;
    fn from_str(s: &str) -> Result<Self, UnknownSuite> {
        Self::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub case: String,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: u64,
    pub max_residual: f64,
    pub passed: bool,
    pub failures: Vec<Failure>,
    /// Extra reported quantities, e.g. the dispute numbers.
    #[serde(serialize_with = "ordered_map")]
    pub values: Vec<(String, f64)>,
}

fn ordered_map<S: serde::Serializer>(values: &[(String, f64)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(values.iter().map(|(k, v)| (k, v)))
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("verify report serializes");
        s.push('\n');
        s
    }
}

#[derive(Default)]
struct Checker {
    cases: u64,
    max_residual: f64,
    failures: Vec<Failure>,
    values: Vec<(String, f64)>,
}

impl Checker {
    fn check(&mut self, case: impl FnOnce() -> String, residual: f64, tolerance: f64) {
        self.cases += 1;
        // NaN counts as a failure
        if !(residual <= tolerance) {
            self.failures.push(Failure { case: case(), residual, tolerance });
        }
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = residual;
        }
    }

    fn value(&mut self, name: impl Into<String>, v: f64) {
        self.values.push((name.into(), v));
    }

    fn finish(self, suite: Suite, seed: u64) -> VerifyReport {
        VerifyReport {
            suite,
            seed,
            cases: self.cases,
            max_residual: self.max_residual,
            passed: self.failures.is_empty(),
            failures: self.failures,
            values: self.values,
        }
    }
}

fn suite_rng(seed: u64, suite: Suite) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1 + suite as u64);
    rng
}

/// Runs one suite. `samples` sizes the randomized suites; enumerated suites ignore it.
pub fn verify(suite: Suite, samples: u64, seed: u64) -> VerifyReport {
    let mut rng = suite_rng(seed, suite);
    let mut c = Checker::default();
    match suite {
        Suite::Subalgebra => {
            for mu in 1..=3 {
                for nu in 1..=3 {
                    for o in Orientation::BOTH {
                        let r = subalgebra_residual(mu, nu, o).expect("indices in range");
                        c.check(|| format!("mu={mu} nu={nu} lambda={o}"), r, EXACT_TOL);
                    }
                }
            }
        }
        Suite::BivectorIdentity => {
            for k in 0..samples {
                let (a, b) = (sample_direction(&mut rng), sample_direction(&mut rng));
                for o in Orientation::BOTH {
                    let (la, lb) = (SpinBivector::new(a, o).value, SpinBivector::new(b, o).value);
                    let target = Multivector::scalar(-a.dot(b)) - spin_of(a.cross(b), o);
                    let r = (oriented_product(o, &la, &lb) - target).max_abs();
                    c.check(|| format!("sample={k} lambda={o} a={a:?} b={b:?}"), r, EXACT_TOL);
                }
            }
        }
        Suite::Torsion => {
            for k in 0..samples {
                let (n, m) = (sample_direction(&mut rng), sample_direction(&mut rng));
                for o in Orientation::BOTH {
                    let r = torsion_residual(o, n, m);
                    c.check(|| format!("sample={k} lambda={o} n={n:?} n'={m:?}"), r, EXACT_TOL);
                }
            }
        }
        Suite::AppendixC => {
            let mut max_gap = 0.0_f64;
            for k in 0..samples {
                let a = sample_direction(&mut rng);
                let b = sample_direction(&mut rng);
                let o = sample_orientation(&mut rng);
                let s = sample_direction(&mut rng);
                let report = appendix_c_residuals(a, b, o, ProductMode::Oriented);
                for step in &report.steps {
                    c.check(|| format!("sample={k} lambda={o} step={:?}", step.step), step.residual, EXACT_TOL);
                }
                max_gap = max_gap.max(report.split_limit_gap);
                let q = trial_quaternion(a, b, s, o);
                c.check(|| format!("sample={k} lambda={o} quaternion norm"), (q.norm_sq() - 1.0).abs(), EXACT_TOL);
            }
            c.value("max_split_limit_gap", max_gap);
        }
        Suite::GillClaims => {
            for mu in 1..=3 {
                for nu in (1..=3).filter(|&nu| nu != mu) {
                    let d = dispute_eval(mu, nu).expect("distinct indices");
                    let tag = format!("mu={mu} nu={nu}");
                    c.check(|| format!("{tag} naive residual == 2"), (d.naive_residual - 2.0).abs(), EXACT_TOL);
                    c.check(|| format!("{tag} oriented residual == 0"), d.oriented_residual, EXACT_TOL);
                    c.check(|| format!("{tag} zero-claim norm == 2"), (d.zero_claim_norm - 2.0).abs(), EXACT_TOL);
                    c.check(|| format!("{tag} oriented contraction"), d.contraction_oriented, EXACT_TOL);
                    c.value(format!("{tag} naive_residual"), d.naive_residual);
                    c.value(format!("{tag} oriented_residual"), d.oriented_residual);
                    c.value(format!("{tag} zero_claim_norm"), d.zero_claim_norm);
                    c.value(format!("{tag} contraction_naive"), d.contraction_naive);
                }
            }
        }
        Suite::Sigma => sigma_suite(&mut c, &mut rng, samples),
    }
    c.finish(suite, seed)
}

/// Constructed samples with known up/down counts, then the standardization round trip.
fn sigma_suite(c: &mut Checker, rng: &mut ChaCha8Rng, samples: u64) {
    const COUNTS: [(usize, usize); 6] = [(1, 0), (1, 1), (3, 1), (5, 2), (7, 9), (100, 1)];
    let axes = [Direction::X, Direction::Y, Direction::Z];
    let random: Vec<Direction> = (0..samples.min(100)).map(|_| sample_direction(rng)).collect();
    for (i, &axis) in axes.iter().chain(&random).enumerate() {
        for (up, down) in COUNTS {
            let spins: Vec<_> = std::iter::repeat_n(Orientation::Right, up)
                .chain(std::iter::repeat_n(Orientation::Left, down))
                .map(|o| SpinBivector::new(axis, o))
                .collect();
            let sigma = bivector_sigma(&spins, 1, axis).expect("matching axes");
            let n = (up + down) as f64;
            let mean = (up as f64 - down as f64) / n;
            let expected = (1.0 - mean * mean).sqrt();
            // basis axes have coefficients exactly +-1, so only rounding of the mean remains
            let tol = if i < 3 { 4.0 * f64::EPSILON } else { EXACT_TOL };
            c.check(|| format!("axis={axis:?} up={up} down={down}"), (sigma.spread - expected).abs(), tol);
        }
    }
    for k in 0..samples {
        let (a, b) = (sample_direction(rng), sample_direction(rng));
        let sig_a = SigmaEstimate { detector: -unit_bivector(a), spread: 1.0 };
        let sig_b = SigmaEstimate { detector: unit_bivector(b), spread: 1.0 };
        for o in Orientation::BOTH {
            let got = standardize(&measure_a_product(a, o), &sig_a).expect("unit detector");
            let r = (got - SpinBivector::new(a, o).value).max_abs();
            c.check(|| format!("sample={k} lambda={o} standardize A"), r, EXACT_TOL);
            let got = standardize(&measure_b_product(b, o), &sig_b).expect("unit detector");
            let r = (got - SpinBivector::new(b, o).value).max_abs();
            c.check(|| format!("sample={k} lambda={o} standardize B"), r, EXACT_TOL);
        }
    }
}
