//! Finite ontological models: construction, statistics reproduction, and the
//! exact noncontextuality check on operational equivalences. Includes the
//! one-more-preparation extension and the trivial product model over
//! deterministic assignments, both used as adversarial oracles elsewhere.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::assignment::{enumerate_assignments, Assignment, MAX_MEASUREMENTS};
use crate::error::{Error, Result};
use crate::numerics::{affine_dimension, Rational, RationalMatrix};
use crate::scenario::{MixturePair, StatisticsTable};

/// Finite ontological model: explicit ontic states, per-preparation
/// distributions μ(λ|P), and binary response functions P(k|λ,M).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OntologicalModel {
    pub states: Vec<String>,
    pub preparations: Vec<String>,
    pub measurements: Vec<String>,
    /// mu[i][l] = μ(λ_l | P_i)
    pub mu: Vec<Vec<Rational>>,
    /// response[j][l] = [P(0|λ_l,M_j), P(1|λ_l,M_j)]
    pub response: Vec<Vec<[Rational; 2]>>,
}

impl OntologicalModel {
    pub fn validate(&self) -> Result<()> {
        let s = self.states.len();
        if self.mu.len() != self.preparations.len() {
            return Err(Error::ModelMismatch("mu rows vs preparations".into()));
        }
        for row in &self.mu {
            if row.len() != s {
                return Err(Error::ModelMismatch("mu row length vs states".into()));
            }
            if row.iter().any(Rational::is_negative) {
                return Err(Error::ModelMismatch("negative μ".into()));
            }
            if row.iter().sum::<Rational>() != Rational::one() {
                return Err(Error::ModelMismatch("μ does not sum to one".into()));
            }
        }
        if self.response.len() != self.measurements.len() {
            return Err(Error::ModelMismatch("response vs measurements".into()));
        }
        for table in &self.response {
            if table.len() != s {
                return Err(Error::ModelMismatch("response rows vs states".into()));
            }
            for dist in table {
                if dist.iter().any(Rational::is_negative) {
                    return Err(Error::ModelMismatch("negative response".into()));
                }
                if &dist[0] + &dist[1] != Rational::one() {
                    return Err(Error::ModelMismatch(
                        "response row is not a distribution".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// The exact statistics the model predicts, P(0|Pᵢ,Mⱼ) = Σ_λ μ·response.
    pub fn predicted_statistics(&self) -> Result<StatisticsTable> {
        self.validate()?;
        let rows = self
            .mu
            .iter()
            .map(|mu| {
                self.response
                    .iter()
                    .map(|table| {
                        mu.iter()
                            .zip(table)
                            .map(|(w, dist)| w * &dist[0])
                            .sum::<Rational>()
                    })
                    .collect()
            })
            .collect();
        StatisticsTable::with_labels(
            self.preparations.clone(),
            self.measurements.clone(),
            0,
            rows,
        )
    }

    /// μ vectors as rows, for affine-dimension arguments.
    pub fn mu_vectors(&self) -> Vec<Vec<Rational>> {
        self.mu.clone()
    }
}

/// Serialized form: response keyed by measurement name, rationals as "p/q".
#[derive(Serialize, Deserialize)]
struct ModelRepr {
    states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preparations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measurements: Option<Vec<String>>,
    mu: Vec<Vec<Rational>>,
    response: IndexMap<String, Vec<Vec<Rational>>>,
}

impl Serialize for OntologicalModel {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let response = self
            .measurements
            .iter()
            .zip(&self.response)
            .map(|(name, table)| {
                (
                    name.clone(),
                    table
                        .iter()
                        .map(|dist| vec![dist[0].clone(), dist[1].clone()])
                        .collect(),
                )
            })
            .collect();
        ModelRepr {
            states: self.states.clone(),
            preparations: Some(self.preparations.clone()),
            measurements: Some(self.measurements.clone()),
            mu: self.mu.clone(),
            response,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OntologicalModel {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = ModelRepr::deserialize(deserializer)?;
        let measurements: Vec<String> = repr
            .measurements
            .unwrap_or_else(|| repr.response.keys().cloned().collect());
        let mut response = Vec::with_capacity(measurements.len());
        for name in &measurements {
            let table = repr.response.get(name).ok_or_else(|| {
                serde::de::Error::custom(format!("missing response for {name:?}"))
            })?;
            let mut rows = Vec::with_capacity(table.len());
            for dist in table {
                match dist.as_slice() {
                    [p0, p1] => rows.push([p0.clone(), p1.clone()]),
                    [p0] => rows.push([p0.clone(), Rational::one() - p0]),
                    _ => {
                        return Err(serde::de::Error::custom(
                            "response rows must list one or two outcome probabilities",
                        ))
                    }
                }
            }
            response.push(rows);
        }
        let preparations = repr
            .preparations
            .unwrap_or_else(|| (0..repr.mu.len()).map(|i| format!("P{i}")).collect());
        let model = OntologicalModel {
            states: repr.states,
            preparations,
            measurements,
            mu: repr.mu,
            response,
        };
        model.validate().map_err(serde::de::Error::custom)?;
        Ok(model)
    }
}

/// Checks the ontological-equivalence condition: the pair's two mixtures must
/// induce identical distributions over ontic states.
///
/// Errors unless the pair is an operational equivalence of the model's own
/// predicted statistics (the definition's precondition).
pub fn check_noncontextual(model: &OntologicalModel, pair: &MixturePair) -> Result<bool> {
    let stats = model.predicted_statistics()?;
    let rows = stats.row_points();
    pair.left.validate()?;
    pair.right.validate()?;
    if pair.left.evaluate(&rows)? != pair.right.evaluate(&rows)? {
        return Err(Error::NotEquivalent);
    }
    let mix = |c: &crate::geometry::ConvexCombination| -> Result<Vec<Rational>> {
        let mut acc = vec![Rational::zero(); model.state_count()];
        for (&i, w) in c.indices.iter().zip(&c.weights) {
            let mu = model.mu.get(i).ok_or(Error::IndexRange {
                index: i,
                len: model.mu.len(),
            })?;
            for (slot, v) in acc.iter_mut().zip(mu) {
                *slot += &(w * v);
            }
        }
        Ok(acc)
    };
    Ok(mix(&pair.left)? == mix(&pair.right)?)
}

/// Extends a model for the first n−1 preparations with one more preparation
/// and one extra binary measurement that singles it out.
///
/// The new measurement returns outcome 0 on every old ontic state and
/// outcome 1 on the new state; the new state responds to old measurements
/// with the new preparation's statistics. Returns the extended model together
/// with the extended table (old columns plus the new measurement's column).
pub fn extend_with_flag_measurement(
    base: &OntologicalModel,
    base_table: &StatisticsTable,
    new_row: &[Rational],
    new_preparation: &str,
    new_measurement: &str,
) -> Result<(OntologicalModel, StatisticsTable)> {
    let predicted = base.predicted_statistics()?;
    if predicted.prob0 != base_table.prob0 {
        return Err(Error::ModelMismatch(
            "base model does not reproduce the base statistics".into(),
        ));
    }
    if new_row.len() != base.measurements.len() {
        return Err(Error::DimensionMismatch(
            "new preparation row length vs measurements".into(),
        ));
    }
    for p in new_row {
        if p.is_negative() || *p > Rational::one() {
            return Err(Error::ProbabilityRange {
                value: p.to_string(),
            });
        }
    }

    let mut states = base.states.clone();
    let star = format!("lambda_{new_preparation}");
    states.push(star);

    let mut mu = base.mu.clone();
    for row in mu.iter_mut() {
        row.push(Rational::zero());
    }
    let mut new_mu = vec![Rational::zero(); base.state_count()];
    new_mu.push(Rational::one());
    mu.push(new_mu);

    let mut response = Vec::with_capacity(base.response.len() + 1);
    for (table, p_new) in base.response.iter().zip(new_row) {
        let mut table = table.clone();
        table.push([p_new.clone(), Rational::one() - p_new]);
        response.push(table);
    }
    let mut flag_table = vec![[Rational::one(), Rational::zero()]; base.state_count()];
    flag_table.push([Rational::zero(), Rational::one()]);
    response.push(flag_table);

    let mut preparations = base.preparations.clone();
    preparations.push(new_preparation.to_string());
    let mut measurements = base.measurements.clone();
    measurements.push(new_measurement.to_string());

    let model = OntologicalModel {
        states,
        preparations,
        measurements,
        mu,
        response,
    };
    let table = model.predicted_statistics()?;
    debug_assert!(table
        .prob0
        .iter()
        .take(base_table.n())
        .zip(&base_table.prob0)
        .all(|(ext, old)| &ext[..old.len()] == old.as_slice()));
    Ok((model, table))
}

/// The trivial model over all 2^m deterministic assignments with the product
/// distribution per preparation. Reproduces any table exactly.
///
/// With `with_discriminators`, also emits the 2^m − 1 measurements that ask
/// "is the ontic state λ?" for each state but the last; the known columns are
/// linear functions of those.
pub fn trivial_product_model(
    t: &StatisticsTable,
    with_discriminators: bool,
) -> Result<OntologicalModel> {
    let m = t.m();
    if m == 0 || m > MAX_MEASUREMENTS {
        return Err(Error::MeasurementGuard {
            m,
            max: MAX_MEASUREMENTS,
        });
    }
    let assignments = enumerate_assignments(m)?;
    let states: Vec<String> = assignments.iter().map(Assignment::label).collect();

    let mu: Vec<Vec<Rational>> = (0..t.n())
        .map(|i| crate::assignment::product_distribution(t, i))
        .collect::<Result<_>>()?;

    let mut measurements = t.measurements.clone();
    let mut response: Vec<Vec<[Rational; 2]>> = (0..m)
        .map(|j| {
            assignments
                .iter()
                .map(|a| {
                    if a.outcome(j) == 0 {
                        [Rational::one(), Rational::zero()]
                    } else {
                        [Rational::zero(), Rational::one()]
                    }
                })
                .collect()
        })
        .collect();

    if with_discriminators {
        for (target, a) in assignments.iter().enumerate().take(assignments.len() - 1) {
            measurements.push(format!("D{}", a.label()));
            response.push(
                (0..assignments.len())
                    .map(|l| {
                        if l == target {
                            [Rational::one(), Rational::zero()]
                        } else {
                            [Rational::zero(), Rational::one()]
                        }
                    })
                    .collect(),
            );
        }
    }

    Ok(OntologicalModel {
        states,
        preparations: t.preparations.clone(),
        measurements,
        mu,
        response,
    })
}

/// Exact check that the known columns lie in the linear span of the
/// discriminator columns plus the constant column.
pub fn discriminators_span_known_columns(t: &StatisticsTable) -> Result<bool> {
    let model = trivial_product_model(t, true)?;
    let stats = model.predicted_statistics()?;
    let m = t.m();
    let n = t.n();
    let disc_count = stats.m() - m;
    let base: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = stats.prob0[i][m..m + disc_count].to_vec();
            row.push(Rational::one());
            row
        })
        .collect();
    let full: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = base[i].clone();
            row.extend_from_slice(&stats.prob0[i][..m]);
            row
        })
        .collect();
    // Span comparison happens column-wise, so rank the transposes.
    let rank_of_cols = |rows: &[Vec<Rational>]| -> Result<usize> {
        let cols = rows[0].len();
        let t: Vec<Vec<Rational>> = (0..cols)
            .map(|c| rows.iter().map(|r| r[c].clone()).collect())
            .collect();
        Ok(RationalMatrix::from_rows(t)?.rank())
    };
    Ok(rank_of_cols(&base)? == rank_of_cols(&full)?)
}

/// Affine dimension of the set of μ vectors: a lower bound on the size of any
/// tomographically complete measurement set for which the model could be
/// preparation noncontextual.
pub fn mu_affine_dimension(model: &OntologicalModel) -> Result<usize> {
    affine_dimension(&model.mu_vectors())
}
