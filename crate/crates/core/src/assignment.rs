//! Deterministic-assignment ontic space and the certification scan: one
//! polytope of consistent assignment distributions per preparation, then a
//! hull-intersection test over every pair of disjoint preparation subsets.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{enumerate_vertices, hulls_intersect, HPolytope, PointSet};
use crate::numerics::{Rational, RationalMatrix};
use crate::report::Verdict;
use crate::scenario::{disjoint_subset_pairs, StatisticsTable};

/// Hard cap on known measurements; the ontic space has 2^m states.
pub const MAX_MEASUREMENTS: usize = 20;

/// A deterministic map from known-measurement indices to binary outcomes.
///
/// Canonical index: Σⱼ outcome(j)·2ʲ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub outcomes: Vec<u8>,
}

impl Assignment {
    pub fn from_index(index: usize, m: usize) -> Self {
        Assignment {
            outcomes: (0..m).map(|j| ((index >> j) & 1) as u8).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.outcomes
            .iter()
            .enumerate()
            .map(|(j, &k)| (k as usize) << j)
            .sum()
    }

    pub fn outcome(&self, measurement: usize) -> u8 {
        self.outcomes[measurement]
    }

    /// Label such as "010" listing outcomes per measurement in order.
    pub fn label(&self) -> String {
        self.outcomes.iter().map(|k| k.to_string()).collect()
    }
}

/// All 2^m assignments in canonical index order.
pub fn enumerate_assignments(m: usize) -> Result<Vec<Assignment>> {
    if m == 0 || m > MAX_MEASUREMENTS {
        return Err(Error::MeasurementGuard {
            m,
            max: MAX_MEASUREMENTS,
        });
    }
    Ok((0..1usize << m)
        .map(|idx| Assignment::from_index(idx, m))
        .collect())
}

/// The polytope of distributions over assignments consistent with one
/// preparation's known statistics: μ ≥ 0, Σμ = 1, and for every measurement
/// the outcome-0 mass equals the observed probability.
#[derive(Debug)]
pub struct AssignmentPolytope {
    pub preparation: usize,
    pub h: HPolytope,
    cache: OnceLock<PointSet>,
}

impl AssignmentPolytope {
    /// Vertices via double description, computed on first use and cached.
    pub fn vertices(&self) -> Result<&PointSet> {
        if let Some(v) = self.cache.get() {
            return Ok(v);
        }
        let v = enumerate_vertices(&self.h)?;
        Ok(self.cache.get_or_init(|| v))
    }
}

/// Builds the consistency polytope for preparation `i`.
pub fn build_polytope(t: &StatisticsTable, i: usize) -> Result<AssignmentPolytope> {
    let m = t.m();
    if m == 0 || m > MAX_MEASUREMENTS {
        return Err(Error::MeasurementGuard {
            m,
            max: MAX_MEASUREMENTS,
        });
    }
    let row = t.row(i)?;
    let states = 1usize << m;
    let mut rows = Vec::with_capacity(m + 1);
    let mut rhs = Vec::with_capacity(m + 1);
    for (j, prob0) in row.iter().enumerate() {
        let mut constraint = vec![Rational::zero(); states];
        for (idx, slot) in constraint.iter_mut().enumerate() {
            if (idx >> j) & 1 == 0 {
                *slot = Rational::one();
            }
        }
        rows.push(constraint);
        rhs.push(prob0.clone());
    }
    rows.push(vec![Rational::one(); states]);
    rhs.push(Rational::one());
    Ok(AssignmentPolytope {
        preparation: i,
        h: HPolytope::new(RationalMatrix::from_rows(rows)?, rhs)?,
        cache: OnceLock::new(),
    })
}

/// The product distribution μ(λ) = Πⱼ P(λ(Mⱼ)|Pᵢ,Mⱼ); always a member of the
/// consistency polytope.
pub fn product_distribution(t: &StatisticsTable, i: usize) -> Result<Vec<Rational>> {
    let m = t.m();
    if m == 0 || m > MAX_MEASUREMENTS {
        return Err(Error::MeasurementGuard {
            m,
            max: MAX_MEASUREMENTS,
        });
    }
    let row = t.row(i)?;
    let states = 1usize << m;
    let mut mu = Vec::with_capacity(states);
    for idx in 0..states {
        let mut p = Rational::one();
        for (j, prob0) in row.iter().enumerate() {
            let factor = if (idx >> j) & 1 == 0 {
                prob0.clone()
            } else {
                Rational::one() - prob0
            };
            p *= &factor;
        }
        mu.push(p);
    }
    Ok(mu)
}

/// One preparation's contribution to an intersection witness: its mixture
/// weight and the exact assignment distribution it contributes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSideComponent {
    pub preparation: usize,
    pub weight: Rational,
    pub mu: Vec<Rational>,
}

/// Exact witness that two disjoint subsets' polytope hulls share a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionWitness {
    pub left_set: Vec<usize>,
    pub right_set: Vec<usize>,
    pub point: Vec<Rational>,
    pub left: Vec<ScanSideComponent>,
    pub right: Vec<ScanSideComponent>,
}

/// Result of the full disjoint-subset scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n: usize,
    pub m: usize,
    pub unknown_count: usize,
    /// n ≥ m + u + 2, the hypothesis under which a no-intersection outcome
    /// certifies contextuality.
    pub soundness_gate: bool,
    pub pairs_tested: usize,
    pub intersections: Vec<IntersectionWitness>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ScanOptions {
    /// Stop after the first intersecting pair. The verdict is unaffected
    /// (CONTEXTUAL still requires exhausting every pair), but an
    /// INCONCLUSIVE report then lists only the first witness.
    pub stop_at_first_intersection: bool,
}

/// Scans every pair of disjoint nonempty preparation subsets, intersecting
/// the hulls of the unions of their polytope vertex lists.
///
/// Verdict is CONTEXTUAL only when no pair intersects and the preparation
/// count satisfies the soundness gate; otherwise INCONCLUSIVE, with every
/// intersecting pair listed alongside exact witnesses.
pub fn scan(t: &StatisticsTable) -> Result<ScanReport> {
    scan_with(t, ScanOptions::default())
}

/// [`scan`] with explicit options.
pub fn scan_with(t: &StatisticsTable, options: ScanOptions) -> Result<ScanReport> {
    let n = t.n();
    let m = t.m();
    if n == 0 {
        return Err(Error::EmptyInput("scan needs at least one preparation"));
    }
    let polytopes: Vec<AssignmentPolytope> = (0..n)
        .map(|i| build_polytope(t, i))
        .collect::<Result<_>>()?;
    let states = 1usize << m;

    // Union-of-vertices hull per subset, remembering each vertex's owner.
    let gather = |set: &[usize]| -> Result<(PointSet, Vec<usize>)> {
        let mut points = Vec::new();
        let mut owners = Vec::new();
        for &i in set {
            let vs = polytopes[i].vertices()?;
            for v in &vs.points {
                points.push(v.clone());
                owners.push(i);
            }
        }
        Ok((PointSet::new(states, points)?, owners))
    };

    let side_components = |combo: &crate::geometry::ConvexCombination,
                           owners: &[usize],
                           points: &PointSet|
     -> Vec<ScanSideComponent> {
        let mut weight = std::collections::BTreeMap::<usize, Rational>::new();
        let mut mix = std::collections::BTreeMap::<usize, Vec<Rational>>::new();
        for (&vi, w) in combo.indices.iter().zip(&combo.weights) {
            let prep = owners[vi];
            let entry = weight.entry(prep).or_insert_with(Rational::zero);
            *entry += w;
            let acc = mix
                .entry(prep)
                .or_insert_with(|| vec![Rational::zero(); states]);
            for (slot, coord) in acc.iter_mut().zip(&points.points[vi]) {
                *slot += &(w * coord);
            }
        }
        weight
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(prep, w)| {
                let inv = w.recip().expect("nonzero weight");
                let mu = mix[&prep].iter().map(|c| c * &inv).collect();
                ScanSideComponent {
                    preparation: prep,
                    weight: w,
                    mu,
                }
            })
            .collect()
    };

    let pairs = disjoint_subset_pairs(n);
    let pairs_tested = pairs.len();
    let mut intersections = Vec::new();
    for (left_set, right_set) in pairs {
        let (pa, owners_a) = gather(&left_set)?;
        let (pb, owners_b) = gather(&right_set)?;
        if pa.is_empty() || pb.is_empty() {
            continue;
        }
        if let Some(hit) = hulls_intersect(&pa, &pb)? {
            intersections.push(IntersectionWitness {
                left_set,
                right_set,
                left: side_components(&hit.left, &owners_a, &pa),
                right: side_components(&hit.right, &owners_b, &pb),
                point: hit.point,
            });
            if options.stop_at_first_intersection {
                break;
            }
        }
    }

    let soundness_gate = n >= m + t.unknown_count + 2;
    let verdict = if intersections.is_empty() && soundness_gate {
        Verdict::Contextual
    } else {
        Verdict::Inconclusive
    };
    Ok(ScanReport {
        n,
        m,
        unknown_count: t.unknown_count,
        soundness_gate,
        pairs_tested,
        intersections,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    #[test]
    fn assignments_in_canonical_order() {
        let one = enumerate_assignments(1).unwrap();
        assert_eq!(
            one.iter().map(|x| x.outcomes.clone()).collect::<Vec<_>>(),
            vec![vec![0], vec![1]]
        );
        let a = enumerate_assignments(2).unwrap();
        let outcomes: Vec<Vec<u8>> = a.iter().map(|x| x.outcomes.clone()).collect();
        assert_eq!(
            outcomes,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
        );
        for (i, x) in a.iter().enumerate() {
            assert_eq!(x.index(), i);
        }
        assert_eq!(enumerate_assignments(3).unwrap().len(), 8);
        assert!(enumerate_assignments(0).is_err());
        assert!(enumerate_assignments(21).is_err());
    }

    #[test]
    fn polytope_vertices_for_unbiased_row() {
        let t = StatisticsTable::new(vec![vec![r(1, 2), r(1, 2)]], 0).unwrap();
        let p = build_polytope(&t, 0).unwrap();
        let vs = p.vertices().unwrap();
        assert_eq!(
            vs.points,
            vec![
                vec![r(0, 1), r(1, 2), r(1, 2), r(0, 1)],
                vec![r(1, 2), r(0, 1), r(0, 1), r(1, 2)],
            ]
        );
    }

    #[test]
    fn deterministic_rows_have_point_mass_polytopes() {
        let t = StatisticsTable::new(vec![vec![r(1, 1)]], 0).unwrap();
        let p = build_polytope(&t, 0).unwrap();
        assert_eq!(p.vertices().unwrap().points, vec![vec![r(1, 1), r(0, 1)]]);

        let t = StatisticsTable::new(vec![vec![r(1, 1), r(0, 1)]], 0).unwrap();
        let p = build_polytope(&t, 0).unwrap();
        // prob0 = (1, 0) pins the assignment (0, 1), canonical index 2.
        assert_eq!(
            p.vertices().unwrap().points,
            vec![vec![r(0, 1), r(0, 1), r(1, 1), r(0, 1)]]
        );
    }

    #[test]
    fn product_distribution_examples() {
        let t = StatisticsTable::new(vec![vec![r(1, 2), r(1, 2)]], 0).unwrap();
        assert_eq!(
            product_distribution(&t, 0).unwrap(),
            vec![r(1, 4), r(1, 4), r(1, 4), r(1, 4)]
        );

        let t = StatisticsTable::new(vec![vec![r(1, 1), r(1, 1)]], 0).unwrap();
        assert_eq!(
            product_distribution(&t, 0).unwrap(),
            vec![r(1, 1), r(0, 1), r(0, 1), r(0, 1)]
        );

        let t = StatisticsTable::new(vec![vec![r(1, 2), r(1, 3)]], 0).unwrap();
        assert_eq!(
            product_distribution(&t, 0).unwrap(),
            vec![r(1, 6), r(1, 6), r(1, 3), r(1, 3)]
        );
    }

    #[test]
    fn vertices_reproduce_statistics() {
        let t =
            StatisticsTable::new(vec![vec![r(1, 3), r(2, 5)], vec![r(1, 2), r(1, 7)]], 0).unwrap();
        for i in 0..t.n() {
            let p = build_polytope(&t, i).unwrap();
            for v in &p.vertices().unwrap().points {
                assert!(p.h.contains(v).unwrap());
            }
            let prod = product_distribution(&t, i).unwrap();
            assert!(p.h.contains(&prod).unwrap());
        }
    }

    #[test]
    fn twin_rows_intersect() {
        let t =
            StatisticsTable::new(vec![vec![r(1, 3), r(1, 4)], vec![r(1, 3), r(1, 4)]], 0).unwrap();
        let report = scan(&t).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert!(report
            .intersections
            .iter()
            .any(|w| w.left_set == vec![0] && w.right_set == vec![1]));
    }

    #[test]
    fn deterministic_corners_are_contextual() {
        // Rows (1,1), (0,0), (1,0), (0,1): the diagonal mixtures are
        // operationally equivalent but the assignment polytopes are the four
        // point masses, so no disjoint hulls intersect.
        let t = StatisticsTable::new(
            vec![
                vec![r(1, 1), r(1, 1)],
                vec![r(0, 1), r(0, 1)],
                vec![r(1, 1), r(0, 1)],
                vec![r(0, 1), r(1, 1)],
            ],
            0,
        )
        .unwrap();
        let report = scan(&t).unwrap();
        assert!(report.soundness_gate);
        assert!(report.intersections.is_empty());
        assert_eq!(report.verdict, Verdict::Contextual);
    }

    #[test]
    fn gate_failure_blocks_contextual_verdict() {
        let t = StatisticsTable::new(
            vec![
                vec![r(1, 1), r(1, 1)],
                vec![r(0, 1), r(0, 1)],
                vec![r(1, 1), r(0, 1)],
                vec![r(0, 1), r(1, 1)],
            ],
            1,
        )
        .unwrap();
        let report = scan(&t).unwrap();
        assert!(!report.soundness_gate);
        assert_eq!(report.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn witnesses_verify_by_substitution() {
        let t = StatisticsTable::new(
            vec![
                vec![r(1, 2), r(1, 2)],
                vec![r(1, 4), r(3, 4)],
                vec![r(3, 4), r(1, 4)],
            ],
            0,
        )
        .unwrap();
        let report = scan(&t).unwrap();
        assert!(!report.intersections.is_empty());
        for w in &report.intersections {
            for side in [&w.left, &w.right] {
                let total: Rational = side.iter().map(|c| c.weight.clone()).sum();
                assert_eq!(total, r(1, 1));
                let mut mixed = vec![r(0, 1); w.point.len()];
                for c in side {
                    let p = build_polytope(&t, c.preparation).unwrap();
                    assert!(p.h.contains(&c.mu).unwrap());
                    for (slot, coord) in mixed.iter_mut().zip(&c.mu) {
                        *slot += &(&c.weight * coord);
                    }
                }
                assert_eq!(mixed, w.point);
            }
        }
    }
}
