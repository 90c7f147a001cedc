//! Qubit statistics generation (ideal and depolarized) on the real-amplitude
//! Bloch circle, and the rank auditor that lower-bounds how many measurements
//! a tomographically complete set must contain for a candidate model to stay
//! preparation noncontextual.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::OntologicalModel;
use crate::numerics::{Rational, RationalMatrix};
use crate::scenario::{FloatTable, StatisticsTable};

/// Pure-state preparations and projective measurements on the Bloch circle,
/// with optional depolarizing noise mixed into every probability.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QubitScenario {
    pub state_angles: Vec<f64>,
    pub measurement_angles: Vec<f64>,
    pub noise: f64,
}

impl QubitScenario {
    pub fn new(state_angles: Vec<f64>, measurement_angles: Vec<f64>, noise: f64) -> Result<Self> {
        if !state_angles
            .iter()
            .chain(&measurement_angles)
            .all(|a| a.is_finite())
        {
            return Err(Error::Invalid("angles must be finite".into()));
        }
        if !(0.0..=1.0).contains(&noise) {
            return Err(Error::ProbabilityRange {
                value: noise.to_string(),
            });
        }
        Ok(QubitScenario {
            state_angles,
            measurement_angles,
            noise,
        })
    }

    /// 2^k states at angles i·π/(2^k + 1) for i = 1..2^k, pairwise
    /// non-orthogonal, with the measurements projecting onto those states.
    pub fn equally_spaced(k: u32) -> Result<Self> {
        if k == 0 || k > 10 {
            return Err(Error::Invalid("k must lie in 1..=10".into()));
        }
        let n = 1usize << k;
        let step = PI / (n as f64 + 1.0);
        let angles: Vec<f64> = (1..=n).map(|i| i as f64 * step).collect();
        QubitScenario::new(angles.clone(), angles, 0.0)
    }

    pub fn with_noise(mut self, noise: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&noise) {
            return Err(Error::ProbabilityRange {
                value: noise.to_string(),
            });
        }
        self.noise = noise;
        Ok(self)
    }

    /// P(0|Pᵢ,Mⱼ) = cos²((θᵢ−φⱼ)/2), mixed with noise ε as (1−ε)p + ε/2.
    pub fn statistics(&self) -> FloatTable {
        let prob0 = self
            .state_angles
            .iter()
            .map(|&theta| {
                self.measurement_angles
                    .iter()
                    .map(|&phi| {
                        let p = ((theta - phi) / 2.0).cos().powi(2);
                        (1.0 - self.noise) * p + self.noise / 2.0
                    })
                    .collect()
            })
            .collect();
        FloatTable {
            preparations: (0..self.state_angles.len())
                .map(|i| format!("P{i}"))
                .collect(),
            measurements: (0..self.measurement_angles.len())
                .map(|j| format!("M{j}"))
                .collect(),
            unknown_count: 0,
            prob0,
        }
    }
}

/// Pentagon position angle: (n/5 + 1/20)·2π.
pub fn pentagon_angle(position: usize) -> f64 {
    (position as f64 / 5.0 + 1.0 / 20.0) * 2.0 * PI
}

/// Measurement angles for the pentagon columns (X, Z, W).
pub fn pentagon_measurement_angles() -> [f64; 3] {
    [PI / 2.0, 0.0, PI / 5.0]
}

/// The pentagon scenario at a given depolarizing noise level.
pub fn pentagon_scenario(noise: f64) -> Result<QubitScenario> {
    QubitScenario::new(
        (0..5).map(pentagon_angle).collect(),
        pentagon_measurement_angles().to_vec(),
        noise,
    )
}

/// The canonical 5×3 pentagon table: columns X (angle π/2), Z (angle 0), and
/// W (angle π/5, i.e. a measurement offset 3π/10 from X), one declared
/// unknown measurement.
pub fn pentagon_ideal() -> FloatTable {
    let scenario = pentagon_scenario(0.0).expect("fixed angles are finite");
    let mut t = scenario.statistics();
    t.measurements = vec!["X".into(), "Z".into(), "W".into()];
    t.unknown_count = 1;
    t
}

/// Rationalizes a float table entrywise to the best approximations within
/// the declared denominator bound, clamped into [0, 1].
pub fn rationalize(t: &FloatTable, max_denominator: u64) -> Result<StatisticsTable> {
    let mut rows = Vec::with_capacity(t.n());
    for row in &t.prob0 {
        let mut out = Vec::with_capacity(row.len());
        for &p in row {
            let exact = Rational::from_f64_exact(p)?;
            let mut approx = exact.approximate_with_denominator(max_denominator)?;
            if approx.is_negative() {
                approx = Rational::zero();
            } else if approx > Rational::one() {
                approx = Rational::one();
            }
            out.push(approx);
        }
        rows.push(out);
    }
    StatisticsTable::with_labels(
        t.preparations.clone(),
        t.measurements.clone(),
        t.unknown_count,
        rows,
    )
}

/// Minimum cross-projection failure probability min_{i≠j} P(1|Pᵢ,Mⱼ).
pub fn eta(t: &StatisticsTable) -> Result<Rational> {
    if t.n() != t.m() {
        return Err(Error::DimensionMismatch(
            "eta needs one measurement per preparation".into(),
        ));
    }
    let mut best: Option<Rational> = None;
    for i in 0..t.n() {
        for j in 0..t.m() {
            if i == j {
                continue;
            }
            let fail = Rational::one() - &t.prob0[i][j];
            if best.as_ref().is_none_or(|b| fail < *b) {
                best = Some(fail);
            }
        }
    }
    best.ok_or(Error::EmptyInput("eta needs at least two preparations"))
}

/// Maximum self-projection failure probability max_i P(1|Pᵢ,Mᵢ).
pub fn epsilon_observed(t: &StatisticsTable) -> Result<Rational> {
    if t.n() != t.m() {
        return Err(Error::DimensionMismatch(
            "epsilon needs one measurement per preparation".into(),
        ));
    }
    (0..t.n())
        .map(|i| Rational::one() - &t.prob0[i][i])
        .max()
        .ok_or(Error::EmptyInput("epsilon needs at least one preparation"))
}

/// Binary indicator per measurement of the ontic states where that
/// measurement's failure probability stays below η/2.
pub fn support_vectors(model: &OntologicalModel, eta: &Rational) -> Vec<Vec<u8>> {
    let half_eta = eta * &Rational::ratio(1, 2);
    model
        .response
        .iter()
        .map(|table| {
            table
                .iter()
                .map(|dist| u8::from(dist[1] < half_eta))
                .collect()
        })
        .collect()
}

/// Rank bound check: a 0/1 matrix with rank k has at most 2^k distinct rows.
pub fn distinct_rows_bound(rows: &[Vec<u8>]) -> Result<bool> {
    if rows.iter().flatten().any(|&v| v > 1) {
        return Err(Error::Invalid("matrix entries must be 0 or 1".into()));
    }
    let mut distinct: Vec<&Vec<u8>> = rows.iter().collect();
    distinct.sort();
    distinct.dedup();
    let rational_rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Rational::from_int(v as i64)).collect())
        .collect();
    let rank = RationalMatrix::from_rows(rational_rows)?.rank();
    if rank >= usize::BITS as usize {
        return Ok(true);
    }
    Ok(distinct.len() <= 1usize << rank)
}

/// Successful audit: the noise gate passed and the rank bound is in force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCertificate {
    pub eta: Rational,
    pub epsilon: Rational,
    pub support_vectors: Vec<Vec<u8>>,
    pub vectors_distinct: bool,
    /// η/2 + 2ε/η < η, re-derived on every audit; equivalent to the gate.
    pub chain_check: bool,
    /// Rank of the support-vector matrix: any preparation-noncontextual model
    /// for these statistics needs a tomographically complete set at least
    /// this large.
    pub k_lower: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AuditOutcome {
    Applicable(AuditCertificate),
    /// ε ≥ η²/4: the noise-tolerant bound does not apply at this noise level.
    Inapplicable {
        eta: Rational,
        epsilon: Rational,
    },
}

/// Audits a candidate model against square statistics (measurement i projects
/// onto preparation i's state).
///
/// The model must reproduce `t` exactly and keep every self-projection
/// failure within the declared ε (defaulting to the observed maximum).
pub fn audit(
    t: &StatisticsTable,
    model: &OntologicalModel,
    declared_epsilon: Option<&Rational>,
) -> Result<AuditOutcome> {
    if t.n() != t.m() {
        return Err(Error::DimensionMismatch(
            "audit needs one measurement per preparation".into(),
        ));
    }
    let predicted = model.predicted_statistics()?;
    if predicted.prob0 != t.prob0 {
        return Err(Error::ModelMismatch(
            "model does not reproduce the statistics".into(),
        ));
    }
    let observed = epsilon_observed(t)?;
    let epsilon = match declared_epsilon {
        Some(e) => {
            if observed > *e {
                return Err(Error::ModelMismatch(format!(
                    "self-projection failure {observed} exceeds declared epsilon {e}"
                )));
            }
            e.clone()
        }
        None => observed,
    };
    let eta = eta(t)?;

    // Gate: ε < η²/4.
    let quarter_eta_sq = &(&eta * &eta) * &Rational::ratio(1, 4);
    if epsilon >= quarter_eta_sq {
        return Ok(AuditOutcome::Inapplicable { eta, epsilon });
    }

    let vectors = support_vectors(model, &eta);
    let mut distinct = true;
    'outer: for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            if vectors[i] == vectors[j] {
                distinct = false;
                break 'outer;
            }
        }
    }

    let chain_check = {
        let lhs = &(&eta * &Rational::ratio(1, 2)) + &(&(&epsilon * &Rational::from_int(2)) / &eta);
        lhs < eta
    };

    let rational_rows: Vec<Vec<Rational>> = vectors
        .iter()
        .map(|r| r.iter().map(|&v| Rational::from_int(v as i64)).collect())
        .collect();
    let k_lower = RationalMatrix::from_rows(rational_rows)?.rank();

    Ok(AuditOutcome::Applicable(AuditCertificate {
        eta,
        epsilon,
        support_vectors: vectors,
        vectors_distinct: distinct,
        chain_check,
        k_lower,
    }))
}
