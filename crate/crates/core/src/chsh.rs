//! CHSH strings, torsion commutators, the variance-bound chain and the
//! numeric evaluator for the basis-bivector sign dispute.
//!
//! Nothing here returns a verdict; every function reports numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ga::{
    basis_bivector, dual, geometric_product, kronecker, levi_civita, oriented_product, Direction,
    GaError, Multivector, Orientation, Vector3,
};
use crate::spin::{oriented_spin_product, sample_direction, spin_of, SpinBivector};

/// Slack on `|(a x a') . (b' x b)| <= 1`.
pub const CROSS_DOT_TOL: f64 = 1e-12;
/// Slack on `lhs <= rhs` in [`variance_bound`].
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChshError {
    #[error("score {0} is not +1 or -1")]
    NotUnitScore(i8),
    #[error("per-trial CHSH combination {0} is not +-2")]
    BadCombination(i8),
    #[error("no samples supplied")]
    Empty,
    #[error("indices must differ, got mu = nu = {0}")]
    EqualIndices(usize),
    #[error(transparent)]
    Index(#[from] GaError),
    #[error("(a x a').(b' x b) = {0} lies outside [-1, 1]")]
    CrossDotOutOfRange(f64),
}

/// Four unit settings `a, a', b, b'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshConfig {
    pub a: Direction,
    pub a_prime: Direction,
    pub b: Direction,
    pub b_prime: Direction,
}

impl ChshConfig {
    /// Settings in the xy-plane, angles in degrees from +x.
    pub fn planar(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        Self {
            a: Direction::planar(a),
            a_prime: Direction::planar(a_prime),
            b: Direction::planar(b),
            b_prime: Direction::planar(b_prime),
        }
    }

    /// The four (alice, bob) pairs in CHSH order: ab, ab', a'b, a'b'.
    pub fn pairs(&self) -> [(Direction, Direction); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }

    /// `(a x a') . (b' x b)`.
    pub fn cross_dot(&self) -> f64 {
        self.a.cross(self.a_prime).dot(self.b_prime.cross(self.b))
    }

    /// `z = (a x a') x (b' x b)`.
    pub fn z(&self) -> Vector3 {
        self.a.cross(self.a_prime).cross(self.b_prime.cross(self.b))
    }
}

/// `E(a,b) + E(a,b') + E(a',b) - E(a',b')`.
pub fn chsh_separate(e_ab: f64, e_ab_prime: f64, e_a_prime_b: f64, e_a_prime_b_prime: f64) -> f64 {
    e_ab + e_ab_prime + e_a_prime_b - e_a_prime_b_prime
}

/// Per-trial raw scores `(A_a, A_a', B_b, B_b')`.
pub type ScoreQuad = [i8; 4];

/// `A_a (B_b + B_b') + A_a' (B_b - B_b')` for one trial; always `+-2`.
pub fn single_trial_combination(q: ScoreQuad) -> Result<i8, ChshError> {
    if let Some(&bad) = q.iter().find(|&&v| v != 1 && v != -1) {
        return Err(ChshError::NotUnitScore(bad));
    }
    let [aa, aap, bb, bbp] = q;
    let value = aa * (bb + bbp) + aap * (bb - bbp);
    if value.abs() != 2 {
        return Err(ChshError::BadCombination(value));
    }
    Ok(value)
}

/// Streaming single-average CHSH.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SingleAverage {
    count: u64,
    sum: i64,
}

impl SingleAverage {
    pub fn push(&mut self, q: ScoreQuad) -> Result<i8, ChshError> {
        let v = single_trial_combination(q)?;
        self.count += 1;
        self.sum += i64::from(v);
        Ok(v)
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

pub fn chsh_single_average(trials: &[ScoreQuad]) -> Result<f64, ChshError> {
    let mut acc = SingleAverage::default();
    for &q in trials {
        acc.push(q)?;
    }
    acc.mean().ok_or(ChshError::Empty)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorsionBivector {
    pub value: Multivector,
    pub pair: (Direction, Direction),
}

/// Half the oriented commutator of two spins, `1/2 [L(n), L(n')]`.
pub fn torsion(orientation: Orientation, n: Direction, n_prime: Direction) -> TorsionBivector {
    let l = SpinBivector::new(n, orientation).value;
    let lp = SpinBivector::new(n_prime, orientation).value;
    let value = (oriented_product(orientation, &l, &lp) - oriented_product(orientation, &lp, &l)).scale(0.5);
    TorsionBivector { value, pair: (n, n_prime) }
}

/// Both sides of the CHSH variance bound at finite sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceBound {
    /// `|CHSH|` from the scalar parts of the four standard correlations.
    pub lhs: f64,
    /// `2 sqrt(1 - (a x a').(b' x b) - mean(lambda) |z|)`.
    pub rhs: f64,
    /// `2 sqrt(1 - (a x a').(b' x b))`, the `n -> infinity` value of `rhs`.
    pub rhs_limit: f64,
    /// `2 sqrt(1 - (a x a').(b x b'))`, the same bound with the torsion of
    /// the `b` pair taken in the opposite order.
    pub rhs_opposite_torsion_order: f64,
    pub cross_dot: f64,
    pub mean_lambda: f64,
    /// `-4 mean(lambda) D(z)`: the bivector-valued term under the root.
    pub bivector_remainder: Multivector,
    /// `lhs <= rhs + BOUND_TOL`.
    pub holds: bool,
}

pub fn variance_bound(config: &ChshConfig, lambdas: &[Orientation]) -> Result<VarianceBound, ChshError> {
    if lambdas.is_empty() {
        return Err(ChshError::Empty);
    }
    let mean_lambda = lambdas.iter().map(|l| l.value()).sum::<f64>() / lambdas.len() as f64;
    variance_bound_from_mean(config, mean_lambda)
}

/// [`variance_bound`] from an already averaged orientation.
pub fn variance_bound_from_mean(config: &ChshConfig, mean_lambda: f64) -> Result<VarianceBound, ChshError> {
    // the scalar part of every oriented product is -n.m, whatever the orientation
    let [e1, e2, e3, e4] = config
        .pairs()
        .map(|(x, y)| oriented_spin_product(Orientation::Right, x, y).scalar_part());
    let lhs = chsh_separate(e1, e2, e3, e4).abs();

    let cross_dot = config.cross_dot();
    if cross_dot.abs() > 1.0 + CROSS_DOT_TOL {
        return Err(ChshError::CrossDotOutOfRange(cross_dot));
    }
    let z = config.z();
    let rhs = 2.0 * (1.0 - cross_dot - mean_lambda * z.norm()).max(0.0).sqrt();
    let rhs_limit = 2.0 * (1.0 - cross_dot).max(0.0).sqrt();
    let rhs_opposite_torsion_order = 2.0 * (1.0 + cross_dot).max(0.0).sqrt();

    Ok(VarianceBound {
        lhs,
        rhs,
        rhs_limit,
        rhs_opposite_torsion_order,
        cross_dot,
        mean_lambda,
        bivector_remainder: dual(z).scale(-4.0 * mean_lambda),
        holds: lhs <= rhs + BOUND_TOL,
    })
}

/// Numbers for the basis-bivector sign dispute at one index pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisputeReport {
    pub mu: usize,
    pub nu: usize,
    /// `|LHS - RHS|` of the difference of the sub-algebra at both orientations,
    /// both products evaluated with the plain right-handed product.
    pub naive_residual: f64,
    /// The same residual with oriented products.
    pub oriented_residual: f64,
    /// `|-2 sum_rho eps L_rho(+1)|`.
    pub zero_claim_norm: f64,
    /// Max over sample pairs and orientations of
    /// `|L(a) o L(b) + a.b + L(a x b)|` with oriented products.
    pub contraction_oriented: f64,
    /// The same quantity with plain products.
    pub contraction_naive: f64,
}

const CONTRACTION_SAMPLES: usize = 64;
const CONTRACTION_SEED: u64 = 0x5eed_c0de;

pub fn dispute_eval(mu: usize, nu: usize) -> Result<DisputeReport, ChshError> {
    if mu == nu {
        return Err(ChshError::EqualIndices(mu));
    }
    let l = |i: usize, o: Orientation| basis_bivector(i, o).map(|b| b.value);
    let (right, left) = (Orientation::Right, Orientation::Left);

    let mut eps_sum = [Multivector::ZERO; 2];
    for rho in 1..=3 {
        for (k, o) in [right, left].into_iter().enumerate() {
            eps_sum[k] += l(rho, o)?.scale(levi_civita(mu, nu, rho));
        }
    }
    let rhs = -eps_sum[0] + eps_sum[1];

    let naive_lhs = geometric_product(&l(mu, right)?, &l(nu, right)?) - geometric_product(&l(mu, left)?, &l(nu, left)?);
    let oriented_lhs = oriented_product(right, &l(mu, right)?, &l(nu, right)?)
        - oriented_product(left, &l(mu, left)?, &l(nu, left)?);

    let mut rng = ChaCha8Rng::seed_from_u64(CONTRACTION_SEED);
    let (mut contraction_oriented, mut contraction_naive) = (0.0_f64, 0.0_f64);
    for _ in 0..CONTRACTION_SAMPLES {
        let (a, b) = (sample_direction(&mut rng), sample_direction(&mut rng));
        for o in Orientation::BOTH {
            let (la, lb) = (SpinBivector::new(a, o).value, SpinBivector::new(b, o).value);
            let target = Multivector::scalar(-a.dot(b)) - spin_of(a.cross(b), o);
            contraction_oriented = contraction_oriented.max((oriented_product(o, &la, &lb) - target).max_abs());
            contraction_naive = contraction_naive.max((geometric_product(&la, &lb) - target).max_abs());
        }
    }

    Ok(DisputeReport {
        mu,
        nu,
        naive_residual: (naive_lhs - rhs).norm(),
        oriented_residual: (oriented_lhs - rhs).norm(),
        zero_claim_norm: eps_sum[0].scale(-2.0).norm(),
        contraction_oriented,
        contraction_naive,
    })
}

/// `(1/n) sum L(a x b, lambda_k)`.
pub fn third_spin_average(a: Direction, b: Direction, lambdas: &[Orientation]) -> Result<Multivector, ChshError> {
    if lambdas.is_empty() {
        return Err(ChshError::Empty);
    }
    let axis = a.cross(b);
    let sum = lambdas
        .iter()
        .fold(Multivector::ZERO, |acc, &o| acc + spin_of(axis, o));
    Ok(sum.scale(1.0 / lambdas.len() as f64))
}

/// Exact check of the oriented sub-algebra at one `(mu, nu, lambda)`.
pub fn subalgebra_residual(mu: usize, nu: usize, orientation: Orientation) -> Result<f64, ChshError> {
    let l = |i: usize| basis_bivector(i, orientation).map(|b| b.value);
    let lhs = oriented_product(orientation, &l(mu)?, &l(nu)?);
    let mut rhs = Multivector::scalar(-kronecker(mu, nu));
    for rho in 1..=3 {
        rhs = rhs - l(rho)?.scale(levi_civita(mu, nu, rho));
    }
    Ok((lhs - rhs).max_abs())
}

/// `|1/2 [L(n), L(n')] + L(n x n')|` under oriented products.
pub fn torsion_residual(orientation: Orientation, n: Direction, n_prime: Direction) -> f64 {
    let t = torsion(orientation, n, n_prime);
    (t.value + spin_of(n.cross(n_prime), orientation)).max_abs()
}
