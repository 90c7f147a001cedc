//! The operational data model: preparations, binary known measurements, a
//! declared budget of unknown measurements, exact statistics tables, mixtures,
//! and operational equivalences between preparation mixtures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hulls_intersect, ConvexCombination, PointSet};
use crate::numerics::Rational;

/// n×m table of exact outcome-0 probabilities, plus the declared number of
/// unknown binary measurements in the tomographically complete set.
///
/// Row i is the statistics vector of preparation i; outcome-1 probabilities
/// are implicit as 1 − prob0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatisticsTable {
    pub preparations: Vec<String>,
    pub measurements: Vec<String>,
    pub unknown_count: usize,
    pub prob0: Vec<Vec<Rational>>,
}

impl StatisticsTable {
    pub fn new(prob0: Vec<Vec<Rational>>, unknown_count: usize) -> Result<Self> {
        let n = prob0.len();
        let m = prob0.first().map_or(0, Vec::len);
        Self::with_labels(
            (0..n).map(|i| format!("P{i}")).collect(),
            (0..m).map(|j| format!("M{j}")).collect(),
            unknown_count,
            prob0,
        )
    }

    pub fn with_labels(
        preparations: Vec<String>,
        measurements: Vec<String>,
        unknown_count: usize,
        prob0: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if prob0.len() != preparations.len() {
            return Err(Error::DimensionMismatch(
                "preparation labels disagree with row count".into(),
            ));
        }
        for row in &prob0 {
            if row.len() != measurements.len() {
                return Err(Error::DimensionMismatch(
                    "measurement labels disagree with column count".into(),
                ));
            }
            for p in row {
                if p.is_negative() || *p > Rational::one() {
                    return Err(Error::ProbabilityRange {
                        value: p.to_string(),
                    });
                }
            }
        }
        Ok(StatisticsTable {
            preparations,
            measurements,
            unknown_count,
            prob0,
        })
    }

    pub fn n(&self) -> usize {
        self.prob0.len()
    }

    pub fn m(&self) -> usize {
        self.measurements.len()
    }

    pub fn row(&self, i: usize) -> Result<&[Rational]> {
        self.prob0
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::IndexRange {
                index: i,
                len: self.n(),
            })
    }

    /// The rows as points in the m-dimensional statistics space.
    pub fn row_points(&self) -> PointSet {
        PointSet {
            dimension: self.m(),
            points: self.prob0.clone(),
        }
    }

    pub fn to_float(&self) -> FloatTable {
        FloatTable {
            preparations: self.preparations.clone(),
            measurements: self.measurements.clone(),
            unknown_count: self.unknown_count,
            prob0: self
                .prob0
                .iter()
                .map(|row| row.iter().map(Rational::to_f64).collect())
                .collect(),
        }
    }

    /// Keeps the first `m` columns, counting the dropped ones as unknown.
    pub fn restrict_known(&self, m: usize) -> Result<StatisticsTable> {
        if m > self.m() {
            return Err(Error::IndexRange {
                index: m,
                len: self.m(),
            });
        }
        let dropped = self.m() - m;
        StatisticsTable::with_labels(
            self.preparations.clone(),
            self.measurements[..m].to_vec(),
            self.unknown_count + dropped,
            self.prob0.iter().map(|row| row[..m].to_vec()).collect(),
        )
    }
}

/// Float-valued statistics, for pipelines where the ideal entries are
/// irrational (the inequality and qubit modules).
#[derive(Clone, Debug, PartialEq)]
pub struct FloatTable {
    pub preparations: Vec<String>,
    pub measurements: Vec<String>,
    pub unknown_count: usize,
    pub prob0: Vec<Vec<f64>>,
}

impl FloatTable {
    pub fn n(&self) -> usize {
        self.prob0.len()
    }

    pub fn m(&self) -> usize {
        self.measurements.len()
    }

    pub fn column(&self, label: &str) -> Option<usize> {
        self.measurements.iter().position(|m| m == label)
    }
}

/// Exact mixture of table rows under a convex combination of preparations.
pub fn mixture_statistics(t: &StatisticsTable, c: &ConvexCombination) -> Result<Vec<Rational>> {
    c.validate()?;
    c.evaluate(&t.row_points())
}

/// An operational equivalence: two disjoint preparation mixtures with equal
/// statistics on every known measurement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixturePair {
    pub left: ConvexCombination,
    pub right: ConvexCombination,
}

/// All unordered pairs of disjoint nonempty subsets of {0..n−1}, in canonical
/// order: within a pair the lexicographically smaller sorted index set comes
/// first, and pairs are sorted lexicographically. There are
/// (3ⁿ − 2·2ⁿ + 1)/2 of them.
pub fn disjoint_subset_pairs(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    assert!(n <= 16, "subset-pair enumeration guard");
    let indices = |mask: u32| -> Vec<usize> { (0..n).filter(|&i| mask & (1 << i) != 0).collect() };
    let mut pairs = Vec::new();
    for a in 1u32..(1 << n) {
        for b in 1u32..(1 << n) {
            if a & b != 0 {
                continue;
            }
            let ia = indices(a);
            let ib = indices(b);
            if ia < ib {
                pairs.push((ia, ib));
            }
        }
    }
    pairs.sort();
    pairs
}

/// Finds every operational equivalence between disjoint preparation subsets
/// by testing whether the corresponding statistics-row hulls intersect.
pub fn find_equivalences(t: &StatisticsTable) -> Result<Vec<MixturePair>> {
    let rows = t.row_points();
    let mut out = Vec::new();
    for (left_set, right_set) in disjoint_subset_pairs(t.n()) {
        let a = PointSet::new(
            t.m(),
            left_set.iter().map(|&i| t.prob0[i].clone()).collect(),
        )?;
        let b = PointSet::new(
            t.m(),
            right_set.iter().map(|&i| t.prob0[i].clone()).collect(),
        )?;
        if let Some(hit) = hulls_intersect(&a, &b)? {
            let relabel = |c: &ConvexCombination, set: &[usize]| ConvexCombination {
                indices: c.indices.iter().map(|&i| set[i]).collect(),
                weights: c.weights.clone(),
            };
            let pair = MixturePair {
                left: relabel(&hit.left, &left_set),
                right: relabel(&hit.right, &right_set),
            };
            debug_assert_eq!(pair.left.evaluate(&rows)?, pair.right.evaluate(&rows)?);
            out.push(pair);
        }
    }
    Ok(out)
}

/// Scenario file schema. Probabilities are strings: either exact `"p/q"`
/// form, or decimal form, in which case `denominator_bound` must be declared
/// for the exact pipeline (decimals are rationalized to the best
/// continued-fraction convergent within the bound).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preparations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurements: Option<Vec<String>>,
    #[serde(default)]
    pub unknown_count: usize,
    pub prob0: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator_bound: Option<u64>,
}

impl ScenarioFile {
    pub fn from_table(t: &StatisticsTable) -> Self {
        ScenarioFile {
            preparations: Some(t.preparations.clone()),
            measurements: Some(t.measurements.clone()),
            unknown_count: t.unknown_count,
            prob0: t
                .prob0
                .iter()
                .map(|row| row.iter().map(Rational::to_string).collect())
                .collect(),
            denominator_bound: None,
        }
    }

    pub fn from_float_table(t: &FloatTable) -> Self {
        ScenarioFile {
            preparations: Some(t.preparations.clone()),
            measurements: Some(t.measurements.clone()),
            unknown_count: t.unknown_count,
            prob0: t
                .prob0
                .iter()
                .map(|row| row.iter().map(|p| format!("{p}")).collect())
                .collect(),
            denominator_bound: None,
        }
    }

    fn labels(&self) -> (Vec<String>, Vec<String>) {
        let n = self.prob0.len();
        let m = self.prob0.first().map_or(0, Vec::len);
        let preps = self
            .preparations
            .clone()
            .unwrap_or_else(|| (0..n).map(|i| format!("P{i}")).collect());
        let meas = self
            .measurements
            .clone()
            .unwrap_or_else(|| (0..m).map(|j| format!("M{j}")).collect());
        (preps, meas)
    }

    /// Exact ingestion. Decimal entries without a declared denominator bound
    /// are rejected so the exact/approximate boundary stays visible.
    pub fn to_exact(&self) -> Result<StatisticsTable> {
        let (preps, meas) = self.labels();
        let mut rows = Vec::with_capacity(self.prob0.len());
        for raw_row in &self.prob0 {
            let mut row = Vec::with_capacity(raw_row.len());
            for entry in raw_row {
                row.push(self.parse_exact_entry(entry)?);
            }
            rows.push(row);
        }
        StatisticsTable::with_labels(preps, meas, self.unknown_count, rows)
    }

    fn parse_exact_entry(&self, entry: &str) -> Result<Rational> {
        if entry.contains('/') {
            return entry.parse();
        }
        let exact = Rational::parse_decimal(entry)?;
        if exact.is_integer() {
            return Ok(exact);
        }
        match self.denominator_bound {
            Some(bound) => exact.approximate_with_denominator(bound),
            None => Err(Error::Parse(format!(
                "decimal probability {entry:?} requires a declared denominator_bound"
            ))),
        }
    }

    /// Float ingestion for the inequality pipeline; accepts both forms.
    pub fn to_float(&self) -> Result<FloatTable> {
        let (preps, meas) = self.labels();
        let mut rows = Vec::with_capacity(self.prob0.len());
        for raw_row in &self.prob0 {
            let mut row = Vec::with_capacity(raw_row.len());
            for entry in raw_row {
                let v = if entry.contains('/') {
                    entry.parse::<Rational>()?.to_f64()
                } else {
                    entry
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad probability {entry:?}")))?
                };
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::ProbabilityRange {
                        value: entry.clone(),
                    });
                }
                row.push(v);
            }
            rows.push(row);
        }
        Ok(FloatTable {
            preparations: preps,
            measurements: meas,
            unknown_count: self.unknown_count,
            prob0: rows,
        })
    }
}
