//! The pentagon certifier: five preparations on the real-amplitude Bloch
//! circle, three known measurement columns (X, Z, and one offset by 3π/10),
//! and a determinant inequality checked over the five possible equivalence
//! configurations an unknown measurement could leave intact.
//!
//! This module is the one place floating point decides anything: the ideal
//! inputs are irrational, so exactness lives in the assignment scan instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Verdict;
use crate::scenario::FloatTable;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// ±1-scaled coordinates of one preparation under one case's measurement
/// pairing: x = P(0) − P(1) on the designated column.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XyPoint {
    pub x: f64,
    pub y: f64,
}

/// The three known measurement columns: X and Z, plus the measurement W
/// offset 3π/10 from X.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Column {
    X,
    Z,
    W,
}

impl Column {
    pub fn label(self) -> &'static str {
        match self {
            Column::X => "X",
            Column::Z => "Z",
            Column::W => "W",
        }
    }
}

/// Which measurement column feeds a coordinate, and whether its outcome is
/// flipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateSource {
    pub column: Column,
    pub flip: bool,
}

/// One of the five clockwise equivalence configurations: the vertex labels
/// (n_a, n_b, n_α, n_β, n_γ) and the coordinate recipe for that case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PentagonCase {
    pub anchor: usize,
    pub ordering: [usize; 5],
    pub x_source: CoordinateSource,
    pub y_source: CoordinateSource,
}

impl PentagonCase {
    pub fn a(&self) -> usize {
        self.ordering[0]
    }
    pub fn b(&self) -> usize {
        self.ordering[1]
    }
    pub fn alpha(&self) -> usize {
        self.ordering[2]
    }
    pub fn beta(&self) -> usize {
        self.ordering[3]
    }
    pub fn gamma(&self) -> usize {
        self.ordering[4]
    }
}

use Column::{W, X, Z};

fn case_table(rotation: usize) -> [PentagonCase; 5] {
    let rot = |base: [usize; 5]| -> [usize; 5] {
        let mut out = base;
        for v in out.iter_mut() {
            *v = (*v + rotation) % 5;
        }
        out
    };
    let src = |column, flip| CoordinateSource { column, flip };
    [
        PentagonCase {
            anchor: 1,
            ordering: rot([1, 3, 4, 0, 2]),
            x_source: src(X, false),
            y_source: src(Z, false),
        },
        PentagonCase {
            anchor: 2,
            ordering: rot([2, 4, 0, 1, 3]),
            x_source: src(Z, true),
            y_source: src(X, false),
        },
        PentagonCase {
            anchor: 3,
            ordering: rot([3, 0, 1, 2, 4]),
            x_source: src(X, true),
            y_source: src(Z, true),
        },
        PentagonCase {
            anchor: 4,
            ordering: rot([4, 1, 2, 3, 0]),
            x_source: src(Z, false),
            y_source: src(X, true),
        },
        PentagonCase {
            anchor: 0,
            ordering: rot([0, 2, 3, 4, 1]),
            x_source: src(W, false),
            y_source: src(Z, false),
        },
    ]
}

/// The five cases in anchor order 1, 2, 3, 4, 0, for the canonical labeling
/// where preparation i sits at pentagon position i.
pub fn pentagon_cases() -> [PentagonCase; 5] {
    case_table(0)
}

/// Case table for data whose preparation labels are rotated by `rotation`
/// pentagon steps relative to the canonical labeling.
pub fn pentagon_cases_rotated(rotation: usize) -> [PentagonCase; 5] {
    case_table(rotation % 5)
}

/// Coordinates of preparation `i` under a case's measurement pairing.
pub fn xy_coords(t: &FloatTable, case: &PentagonCase, i: usize) -> Result<XyPoint> {
    if i >= t.n() {
        return Err(Error::IndexRange {
            index: i,
            len: t.n(),
        });
    }
    let fetch = |source: &CoordinateSource| -> Result<f64> {
        let col = t.column(source.column.label()).ok_or_else(|| {
            Error::Invalid(format!("missing measurement column {:?}", source.column))
        })?;
        let v = 2.0 * t.prob0[i][col] - 1.0;
        Ok(if source.flip { -v } else { v })
    };
    Ok(XyPoint {
        x: fetch(&case.x_source)?,
        y: fetch(&case.y_source)?,
    })
}

fn cross(o: XyPoint, a: XyPoint, b: XyPoint) -> f64 {
    (a.x - o.x) * (b.y - a.y) - (a.y - o.y) * (b.x - a.x)
}

/// True iff the four points are vertices of a convex quadrilateral traversed
/// clockwise: every consecutive turn has signed area below −tolerance.
pub fn clockwise_convex(q: [XyPoint; 4], tolerance: f64) -> bool {
    (0..4).all(|i| cross(q[i], q[(i + 1) % 4], q[(i + 2) % 4]) < -tolerance)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let mut det = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for (r, row) in m[1..].iter().enumerate() {
            let mut cc = 0;
            for (c, &v) in row.iter().enumerate() {
                if c == col {
                    continue;
                }
                minor[r][cc] = v;
                cc += 1;
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][col] * det3(minor);
    }
    det
}

/// The 4×4 determinant whose positivity (at both segment endpoints) rules out
/// a noncontextual assignment for the case's equivalence.
pub fn v_determinant(pa: XyPoint, pg: XyPoint, pi: XyPoint, pb: XyPoint) -> f64 {
    det4([
        [pa.x, pa.y, pa.x + pa.y - 1.0, 1.0],
        [pg.x, pg.y, -pg.x + pg.y + 1.0, 1.0],
        [pi.x, pi.y, pi.x - pi.y + 1.0, 1.0],
        [pb.x, pb.y, -pb.x - pb.y - 1.0, 1.0],
    ])
}

/// Outcome of one case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub anchor: usize,
    pub ordering: [usize; 5],
    pub v_alpha: f64,
    pub v_beta: f64,
    pub quadrilateral_ok: bool,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PentagonReport {
    pub tolerance: f64,
    pub cases: Vec<CaseResult>,
    pub verdict: Verdict,
}

fn evaluate_case(t: &FloatTable, case: &PentagonCase, tolerance: f64) -> Result<CaseResult> {
    let pa = xy_coords(t, case, case.a())?;
    let pb = xy_coords(t, case, case.b())?;
    let palpha = xy_coords(t, case, case.alpha())?;
    let pbeta = xy_coords(t, case, case.beta())?;
    let pgamma = xy_coords(t, case, case.gamma())?;

    // The quadrilateral (a, γ, b, αβ) must be clockwise convex for every
    // mixture on the α–β segment; each orientation test is affine in the
    // mixture point, so checking the two endpoints suffices.
    let quadrilateral_ok = clockwise_convex([pa, pgamma, pb, palpha], tolerance)
        && clockwise_convex([pa, pgamma, pb, pbeta], tolerance);
    let v_alpha = v_determinant(pa, pgamma, palpha, pb);
    let v_beta = v_determinant(pa, pgamma, pbeta, pb);
    let violated = quadrilateral_ok && v_alpha > 0.0 && v_beta > 0.0;
    Ok(CaseResult {
        anchor: case.anchor,
        ordering: case.ordering,
        v_alpha,
        v_beta,
        quadrilateral_ok,
        violated,
    })
}

/// Runs all five cases with an explicit case table.
pub fn certify_pentagon_with_cases(
    t: &FloatTable,
    cases: &[PentagonCase; 5],
    tolerance: f64,
) -> Result<PentagonReport> {
    if t.n() != 5 {
        return Err(Error::DimensionMismatch(format!(
            "pentagon certification needs 5 preparations, got {}",
            t.n()
        )));
    }
    for source in [X, Z, W] {
        if t.column(source.label()).is_none() {
            return Err(Error::Invalid(format!(
                "missing measurement column {source:?}"
            )));
        }
    }
    let results: Vec<CaseResult> = cases
        .iter()
        .map(|c| evaluate_case(t, c, tolerance))
        .collect::<Result<_>>()?;
    let verdict = if results.iter().all(|r| r.violated) {
        Verdict::Contextual
    } else {
        Verdict::Inconclusive
    };
    Ok(PentagonReport {
        tolerance,
        cases: results,
        verdict,
    })
}

/// CONTEXTUAL iff every one of the five cases has a clockwise-convex
/// quadrilateral and strictly positive determinants at both endpoints.
pub fn certify_pentagon(t: &FloatTable, tolerance: f64) -> Result<PentagonReport> {
    certify_pentagon_with_cases(t, &pentagon_cases(), tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> XyPoint {
        XyPoint { x, y }
    }

    #[test]
    fn clockwise_square() {
        let cw = [p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(1.0, 0.0)];
        assert!(clockwise_convex(cw, DEFAULT_TOLERANCE));
        let ccw = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        assert!(!clockwise_convex(ccw, DEFAULT_TOLERANCE));
    }

    #[test]
    fn degenerate_points_fail_clockwise() {
        let same = [p(0.0, 0.0); 4];
        assert!(!clockwise_convex(same, DEFAULT_TOLERANCE));
    }

    #[test]
    fn determinant_of_repeated_rows_is_zero() {
        let q = p(0.3, -0.2);
        assert!(v_determinant(q, q, q, q).abs() < 1e-15);
    }

    #[test]
    fn determinant_affine_in_third_row() {
        let pa = p(0.9, 0.1);
        let pg = p(0.2, -0.8);
        let pb = p(-0.7, -0.3);
        let pi0 = p(-0.5, 0.6);
        let pi1 = p(0.1, 0.8);
        for k in 0..=10 {
            let w = k as f64 / 10.0;
            let mix = p(w * pi0.x + (1.0 - w) * pi1.x, w * pi0.y + (1.0 - w) * pi1.y);
            let direct = v_determinant(pa, pg, mix, pb);
            let blended =
                w * v_determinant(pa, pg, pi0, pb) + (1.0 - w) * v_determinant(pa, pg, pi1, pb);
            assert!((direct - blended).abs() < 1e-12);
        }
    }

    #[test]
    fn case_table_shape() {
        let cases = pentagon_cases();
        assert_eq!(cases.len(), 5);
        let anchors: Vec<usize> = cases.iter().map(|c| c.anchor).collect();
        assert_eq!(anchors, vec![1, 2, 3, 4, 0]);
        for c in &cases {
            // (a, γ, b, α, β) clockwise means consecutive pentagon positions
            // a, a+1, a+2, a+3, a+4.
            assert_eq!(c.gamma(), (c.a() + 1) % 5);
            assert_eq!(c.b(), (c.a() + 2) % 5);
            assert_eq!(c.alpha(), (c.a() + 3) % 5);
            assert_eq!(c.beta(), (c.a() + 4) % 5);
        }
        let hard = &cases[4];
        assert_eq!(hard.anchor, 0);
        assert_eq!(
            hard.x_source,
            CoordinateSource {
                column: Column::W,
                flip: false
            }
        );
    }

    #[test]
    fn xy_extremes() {
        let t = FloatTable {
            preparations: vec!["P0".into()],
            measurements: vec!["X".into(), "Z".into(), "W".into()],
            unknown_count: 1,
            prob0: vec![vec![1.0, 1.0, 1.0]],
        };
        let cases = pentagon_cases();
        let case = &cases[0];
        let q = xy_coords(&t, case, 0).unwrap();
        assert_eq!((q.x, q.y), (1.0, 1.0));

        let unbiased = FloatTable {
            prob0: vec![vec![0.5, 0.5, 0.5]],
            ..t
        };
        let q = xy_coords(&unbiased, case, 0).unwrap();
        assert_eq!((q.x, q.y), (0.0, 0.0));
    }

    #[test]
    fn ideal_quadrilateral_clockwise_along_whole_segment() {
        // Orientation tests are affine in the mixture point, so endpoint
        // checks suffice; verified here at eleven mixture weights.
        let t = crate::quantum::pentagon_ideal();
        let cases = pentagon_cases();
        let case = &cases[0];
        let pa = xy_coords(&t, case, case.a()).unwrap();
        let pg = xy_coords(&t, case, case.gamma()).unwrap();
        let pb = xy_coords(&t, case, case.b()).unwrap();
        let palpha = xy_coords(&t, case, case.alpha()).unwrap();
        let pbeta = xy_coords(&t, case, case.beta()).unwrap();
        for k in 0..=10 {
            let w = k as f64 / 10.0;
            let mix = p(
                w * palpha.x + (1.0 - w) * pbeta.x,
                w * palpha.y + (1.0 - w) * pbeta.y,
            );
            assert!(clockwise_convex([pa, pg, pb, mix], DEFAULT_TOLERANCE));
        }
    }

    #[test]
    fn depolarized_table_inconclusive() {
        let t = FloatTable {
            preparations: (0..5).map(|i| format!("P{i}")).collect(),
            measurements: vec!["X".into(), "Z".into(), "W".into()],
            unknown_count: 1,
            prob0: vec![vec![0.5; 3]; 5],
        };
        let report = certify_pentagon(&t, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        for case in &report.cases {
            assert!(!case.quadrilateral_ok);
            assert_eq!(case.v_alpha, 0.0);
            assert_eq!(case.v_beta, 0.0);
        }
    }

    #[test]
    fn wrong_shape_rejected() {
        let t = FloatTable {
            preparations: vec!["P0".into()],
            measurements: vec!["X".into(), "Z".into(), "W".into()],
            unknown_count: 1,
            prob0: vec![vec![0.5; 3]],
        };
        assert!(certify_pentagon(&t, DEFAULT_TOLERANCE).is_err());
    }
}
