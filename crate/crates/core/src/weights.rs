//! Weight sets and degree distributions.

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};

const PROB_TOL: f64 = 1e-12;

/// The primes whose reciprocals form the default weight set.
pub const RECIPROCAL_PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Exact rational form of a weight set, kept alongside the float values when
/// the set was built from ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactWeights {
    pub values: Vec<Rational64>,
    pub probs: Vec<Rational64>,
}

/// Positive, pairwise distinct edge weights `a_1..a_f` with selection
/// probabilities `q_1..q_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    values: Vec<f64>,
    probs: Vec<f64>,
    exact: Option<ExactWeights>,
}

impl WeightSet {
    pub fn new(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let ws = WeightSet {
            values,
            probs,
            exact: None,
        };
        ws.validate()?;
        Ok(ws)
    }

    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let f = values.len();
        Self::new(values, vec![1.0 / f.max(1) as f64; f])
    }

    /// Exact set with uniform probabilities.
    pub fn from_rationals(values: Vec<Rational64>) -> Result<Self> {
        let f = values.len();
        if f == 0 {
            return Err(Error::InvalidWeightSet("empty".into()));
        }
        let probs = vec![Rational64::new(1, f as i64); f];
        Self::from_rationals_with_probs(values, probs)
    }

    pub fn from_rationals_with_probs(
        values: Vec<Rational64>,
        probs: Vec<Rational64>,
    ) -> Result<Self> {
        if probs.len() != values.len() {
            return Err(Error::InvalidWeightSet(
                "values and probs differ in length".into(),
            ));
        }
        if probs.iter().sum::<Rational64>() != Rational64::from_integer(1) {
            return Err(Error::InvalidWeightSet(
                "exact probabilities do not sum to 1".into(),
            ));
        }
        let ws = WeightSet {
            values: values
                .iter()
                .map(|r| r.to_f64().unwrap_or(f64::NAN))
                .collect(),
            probs: probs
                .iter()
                .map(|r| r.to_f64().unwrap_or(f64::NAN))
                .collect(),
            exact: Some(ExactWeights { values, probs }),
        };
        ws.validate()?;
        Ok(ws)
    }

    /// `{1/2, 1/3, 1/5, 1/7, 1/11, 1/13, 1/17, 1/19}` with uniform selection.
    pub fn reciprocal_primes() -> Self {
        Self::from_rationals(
            RECIPROCAL_PRIMES
                .iter()
                .map(|&p| Rational64::new(1, p))
                .collect(),
        )
        .expect("reciprocal primes form a valid set")
    }

    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidWeightSet("empty".into()));
        }
        if self.values.len() != self.probs.len() {
            return Err(Error::InvalidWeightSet(
                "values and probs differ in length".into(),
            ));
        }
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidWeightSet(format!(
                "weight {v} is not a positive real"
            )));
        }
        for (i, a) in self.values.iter().enumerate() {
            if self.values[..i].contains(a) {
                return Err(Error::InvalidWeightSet(format!("weight {a} repeated")));
            }
        }
        if let Some(exact) = &self.exact {
            for (i, a) in exact.values.iter().enumerate() {
                if exact.values[..i].contains(a) {
                    return Err(Error::InvalidWeightSet(format!("weight {a} repeated")));
                }
            }
        }
        if self.probs.iter().any(|q| !(*q >= 0.0)) {
            return Err(Error::InvalidWeightSet("negative probability".into()));
        }
        let total: f64 = self.probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidWeightSet(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn exact(&self) -> Option<&ExactWeights> {
        self.exact.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        let q = 1.0 / self.len() as f64;
        self.probs.iter().all(|p| (p - q).abs() <= PROB_TOL)
    }

    /// Second moment `σ_s² = Σ q_i a_i²` of one signed edge term `w·b`.
    ///
    /// Equals `(1/f) Σ a_i²` for uniform selection.
    pub fn second_moment(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.probs)
            .map(|(a, q)| q * a * a)
            .sum()
    }

    /// Index of a weight drawn according to `q`.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let x: f64 = rng.random();
        let mut acc = 0.0;
        for (i, q) in self.probs.iter().enumerate() {
            acc += q;
            if x < acc {
                return i;
            }
        }
        self.probs.iter().rposition(|q| *q > 0.0).unwrap_or(0)
    }
}

/// Degree distribution `Ω(x) = Σ Ω_d x^d`, stored as `omega[d - 1] = Ω_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    omega: Vec<f64>,
    mu: f64,
}

impl DegreeDistribution {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::InvalidDegreeDistribution("empty".into()));
        }
        if omega.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidDegreeDistribution(
                "negative coefficient".into(),
            ));
        }
        let total: f64 = omega.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDegreeDistribution(format!(
                "coefficients sum to {total}"
            )));
        }
        let mu = omega
            .iter()
            .enumerate()
            .map(|(i, w)| (i + 1) as f64 * w)
            .sum();
        Ok(DegreeDistribution { omega, mu })
    }

    /// `Ω(x) = x^d`.
    pub fn fixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDegreeDistribution(
                "degree must be at least 1".into(),
            ));
        }
        let mut omega = vec![0.0; d];
        omega[d - 1] = 1.0;
        Self::new(omega)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// Average degree `μ`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn max_degree(&self) -> usize {
        self.omega
            .iter()
            .rposition(|w| *w > 0.0)
            .map_or(self.omega.len(), |i| i + 1)
    }

    /// Draws a degree `d` with probability `Ω_d`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let x: f64 = rng.random();
        let mut acc = 0.0;
        for (i, w) in self.omega.iter().enumerate() {
            acc += w;
            if x < acc {
                return i + 1;
            }
        }
        self.max_degree()
    }
}
