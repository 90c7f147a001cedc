//! Randomized model constructors backing the property suites: noncontextual
//! assignment models built from affinely independent basis distributions, and
//! a constrained random search for models that reproduce a given table
//! exactly.

use rand::Rng;

use crate::assignment::enumerate_assignments;
use crate::error::{Error, Result};
use crate::models::OntologicalModel;
use crate::numerics::{affine_dimension, Rational};
use crate::scenario::StatisticsTable;

/// Random rational in [0, 1] with denominator at most `denom`.
pub fn random_unit_rational<R: Rng>(rng: &mut R, denom: u64) -> Rational {
    let d = rng.random_range(1..=denom) as i64;
    let n = rng.random_range(0..=d);
    Rational::ratio(n, d)
}

/// Random rational distribution over `len` slots.
pub fn random_distribution<R: Rng>(rng: &mut R, len: usize, denom: u64) -> Vec<Rational> {
    loop {
        let raw: Vec<i64> = (0..len)
            .map(|_| rng.random_range(0..=denom as i64))
            .collect();
        let total: i64 = raw.iter().sum();
        if total == 0 {
            continue;
        }
        return raw.into_iter().map(|v| Rational::ratio(v, total)).collect();
    }
}

fn marginals(mu: &[Rational], m: usize) -> Vec<Rational> {
    (0..m)
        .map(|j| {
            mu.iter()
                .enumerate()
                .filter(|(idx, _)| (idx >> j) & 1 == 0)
                .map(|(_, v)| v.clone())
                .sum()
        })
        .collect()
}

/// A distribution-over-assignments model that is preparation noncontextual
/// by construction: every preparation's distribution is a convex mixture of
/// at most m+1 basis distributions whose statistics rows are affinely
/// independent. Any operational equivalence then forces equal mixtures of the
/// basis distributions, hence equal ontic distributions.
pub fn random_noncontextual_assignment_model<R: Rng>(
    rng: &mut R,
    m: usize,
    n_prep: usize,
    n_basis: usize,
) -> Result<OntologicalModel> {
    if n_basis == 0 || n_basis > m + 1 {
        return Err(Error::Invalid(format!(
            "basis size {n_basis} must lie in 1..={}",
            m + 1
        )));
    }
    let assignments = enumerate_assignments(m)?;
    let states = assignments.len();

    let basis: Vec<Vec<Rational>> = loop {
        let candidate: Vec<Vec<Rational>> = (0..n_basis)
            .map(|_| random_distribution(rng, states, 6))
            .collect();
        let rows: Vec<Vec<Rational>> = candidate.iter().map(|mu| marginals(mu, m)).collect();
        if n_basis == 1 || affine_dimension(&rows)? == n_basis - 1 {
            break candidate;
        }
    };

    let mu: Vec<Vec<Rational>> = (0..n_prep)
        .map(|_| {
            let coeffs = if n_basis > 1 && rng.random_bool(0.3) {
                let pick = rng.random_range(0..n_basis);
                (0..n_basis)
                    .map(|a| {
                        if a == pick {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            } else {
                random_distribution(rng, n_basis, 6)
            };
            let mut acc = vec![Rational::zero(); states];
            for (c, b) in coeffs.iter().zip(&basis) {
                for (slot, v) in acc.iter_mut().zip(b) {
                    *slot += &(c * v);
                }
            }
            acc
        })
        .collect();

    let response = (0..m)
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

    Ok(OntologicalModel {
        states: assignments.iter().map(|a| a.label()).collect(),
        preparations: (0..n_prep).map(|i| format!("P{i}")).collect(),
        measurements: (0..m).map(|j| format!("M{j}")).collect(),
        mu,
        response,
    })
}

/// Zero-marginal perturbation pattern correlating measurements j and k on the
/// residual row probabilities: sign(λⱼ)·sign(λₖ)·Π_{l∉{j,k}} p_l(λ_l).
fn correlation_pattern(row: &[Rational], j: usize, k: usize) -> Vec<Rational> {
    let m = row.len();
    let states = 1usize << m;
    (0..states)
        .map(|idx| {
            let mut v = Rational::one();
            for (l, p) in row.iter().enumerate() {
                if l == j || l == k {
                    if (idx >> l) & 1 == 1 {
                        v = -v;
                    }
                } else if (idx >> l) & 1 == 0 {
                    v *= p;
                } else {
                    v *= &(Rational::one() - p);
                }
            }
            v
        })
        .collect()
}

/// Constrained random search for ontological models reproducing `t` exactly:
/// starts from the product distribution of a residual table, adds random
/// marginal-preserving correlations, and optionally routes a random weight
/// through one extra state with non-deterministic responses.
pub fn random_reproducing_model<R: Rng>(
    rng: &mut R,
    t: &StatisticsTable,
) -> Result<OntologicalModel> {
    let m = t.m();
    let n = t.n();
    let assignments = enumerate_assignments(m)?;
    let states = assignments.len();

    // Optional extra state with response c, fed weight w by every preparation.
    let mix = if rng.random_bool(0.5) {
        let c: Vec<Rational> = (0..m).map(|_| random_unit_rational(rng, 8)).collect();
        let mut w_max = Rational::one();
        for row in &t.prob0 {
            for (p, cj) in row.iter().zip(&c) {
                if cj.is_positive() {
                    let bound = p / cj;
                    if bound < w_max {
                        w_max = bound.clone();
                    }
                }
                let rest = Rational::one() - cj;
                if rest.is_positive() {
                    let bound = &(Rational::one() - p) / &rest;
                    if bound < w_max {
                        w_max = bound.clone();
                    }
                }
            }
        }
        if w_max.is_positive() {
            let rho = Rational::ratio(rng.random_range(1..8), 8);
            let w = &w_max * &rho;
            if w.is_positive() && w < Rational::one() {
                Some((w, c))
            } else {
                None
            }
        } else {
            None
        }
    } else {
        None
    };

    let residual_rows: Vec<Vec<Rational>> = match &mix {
        Some((w, c)) => {
            let scale = (Rational::one() - w).recip()?;
            t.prob0
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(c)
                        .map(|(p, cj)| &(p - &(w * cj)) * &scale)
                        .collect()
                })
                .collect()
        }
        None => t.prob0.clone(),
    };

    let mut mu_rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for row in &residual_rows {
        // Product distribution of the residual row.
        let mut mu: Vec<Rational> = (0..states)
            .map(|idx| {
                let mut p = Rational::one();
                for (j, prob0) in row.iter().enumerate() {
                    if (idx >> j) & 1 == 0 {
                        p *= prob0;
                    } else {
                        p *= &(Rational::one() - prob0);
                    }
                }
                p
            })
            .collect();
        if m >= 2 {
            for _ in 0..rng.random_range(1..=3) {
                let j = rng.random_range(0..m);
                let k = (j + rng.random_range(1..m)) % m;
                let pattern = correlation_pattern(row, j, k);
                let mut delta_max: Option<Rational> = None;
                for (v, e) in mu.iter().zip(&pattern) {
                    if e.is_negative() {
                        let bound = v / &(-e);
                        if delta_max.as_ref().is_none_or(|d| bound < *d) {
                            delta_max = Some(bound);
                        }
                    }
                }
                if let Some(dm) = delta_max {
                    if dm.is_positive() {
                        let delta = &dm * &Rational::ratio(rng.random_range(0..8), 8);
                        for (v, e) in mu.iter_mut().zip(&pattern) {
                            *v += &(&delta * e);
                        }
                    }
                }
            }
        }
        mu_rows.push(mu);
    }

    let mut state_labels: Vec<String> = assignments.iter().map(|a| a.label()).collect();
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

    let mu = match &mix {
        Some((w, c)) => {
            state_labels.push("mix".into());
            for (j, table) in response.iter_mut().enumerate() {
                table.push([c[j].clone(), Rational::one() - &c[j]]);
            }
            mu_rows
                .into_iter()
                .map(|row| {
                    let keep = Rational::one() - w;
                    let mut out: Vec<Rational> = row.iter().map(|v| &keep * v).collect();
                    out.push(w.clone());
                    out
                })
                .collect()
        }
        None => mu_rows,
    };

    let model = OntologicalModel {
        states: state_labels,
        preparations: t.preparations.clone(),
        measurements: t.measurements.clone(),
        mu,
        response,
    };
    let predicted = model.predicted_statistics()?;
    if predicted.prob0 != t.prob0 {
        return Err(Error::ModelMismatch(
            "random search produced a non-reproducing model".into(),
        ));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_distribution_sums_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let d = random_distribution(&mut rng, 5, 9);
            assert_eq!(d.iter().sum::<Rational>(), Rational::one());
            assert!(d.iter().all(|v| !v.is_negative()));
        }
    }

    #[test]
    fn nc_model_is_valid_and_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let model = random_noncontextual_assignment_model(&mut rng, 2, 4, 3).unwrap();
            model.validate().unwrap();
            let t = model.predicted_statistics().unwrap();
            assert_eq!(t.n(), 4);
            assert_eq!(t.m(), 2);
        }
    }

    #[test]
    fn random_search_reproduces_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let t = StatisticsTable::new(
            vec![
                vec![
                    Rational::ratio(1, 3),
                    Rational::ratio(2, 5),
                    Rational::ratio(1, 2),
                ],
                vec![
                    Rational::ratio(2, 3),
                    Rational::ratio(1, 5),
                    Rational::ratio(1, 4),
                ],
            ],
            0,
        )
        .unwrap();
        for _ in 0..20 {
            let model = random_reproducing_model(&mut rng, &t).unwrap();
            model.validate().unwrap();
            assert_eq!(model.predicted_statistics().unwrap().prob0, t.prob0);
        }
    }
}
