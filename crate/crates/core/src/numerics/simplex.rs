use super::matrix::RationalMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Feasibility problem in standard form: A·z = b, z ≥ 0.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub a: RationalMatrix,
    pub b: Vec<Rational>,
}

impl LpProblem {
    pub fn new(a: RationalMatrix, b: Vec<Rational>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "constraint matrix has {} rows, rhs has {}",
                a.rows(),
                b.len()
            )));
        }
        Ok(LpProblem { a, b })
    }
}

/// Outcome of an exact feasibility solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// z ≥ 0 with A·z = b exactly.
    Feasible(Vec<Rational>),
    /// Farkas certificate y with yᵀA ≥ 0 componentwise and yᵀb < 0.
    Infeasible(Vec<Rational>),
}

/// Exact phase-one simplex with Bland's anti-cycling rule.
///
/// The entering variable is the lowest-index column with a negative reduced
/// cost; the leaving row breaks ratio ties toward the lowest basic variable
/// index. Degenerate problems with b = 0 return z = 0 immediately.
pub fn lp_feasible(p: &LpProblem) -> Result<LpOutcome> {
    let m = p.a.rows();
    let n = p.a.cols();
    if p.b.len() != m {
        return Err(Error::DimensionMismatch("rhs length".into()));
    }
    if p.b.iter().all(Rational::is_zero) {
        return Ok(LpOutcome::Feasible(vec![Rational::zero(); n]));
    }

    // Flip rows so the rhs is nonnegative; remember the signs.
    let signs: Vec<bool> = p.b.iter().map(Rational::is_negative).collect();
    let rhs_col = n + m;
    let mut tab: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(n + m + 1);
            for j in 0..n {
                let v = p.a.at(i, j);
                row.push(if signs[i] { -v } else { v.clone() });
            }
            for j in 0..m {
                row.push(if j == i {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
            row.push(if signs[i] { -&p.b[i] } else { p.b[i].clone() });
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced-cost row for min Σ artificials: r_j = c_j − Σ_i tab[i][j],
    // with −objective kept in the rhs slot.
    let mut cost: Vec<Rational> = (0..=n + m)
        .map(|j| {
            let col_sum: Rational = (0..m).map(|i| tab[i][j].clone()).sum();
            let c_j = if (n..n + m).contains(&j) {
                Rational::one()
            } else {
                Rational::zero()
            };
            c_j - col_sum
        })
        .collect();

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][rhs_col] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            // Phase one is bounded below by zero, so this cannot occur.
            return Err(Error::Invalid(
                "phase-one simplex reported unbounded".into(),
            ));
        };

        // Pivot on (l, enter).
        let inv = tab[l][enter].recip()?;
        for v in tab[l].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = std::mem::take(&mut tab[l]);
        for (i, row) in tab.iter_mut().enumerate() {
            if i != l && !row[enter].is_zero() {
                let factor = row[enter].clone();
                for (slot, pv) in row.iter_mut().zip(&pivot_row) {
                    *slot -= &(&factor * pv);
                }
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for (slot, pv) in cost.iter_mut().zip(&pivot_row) {
                *slot -= &(&factor * pv);
            }
        }
        tab[l] = pivot_row;
        basis[l] = enter;
    }

    let objective = -cost[rhs_col].clone();
    if objective.is_positive() {
        // Simplex multipliers: reduced cost of artificial i is 1 − y_i.
        let mut y = Vec::with_capacity(m);
        for i in 0..m {
            let yi = Rational::one() - &cost[n + i];
            // Undo the row flip, then negate to match the y·A ≥ 0, y·b < 0 form.
            y.push(if signs[i] { yi } else { -yi });
        }
        debug_assert!({
            let ya = p.a.vec_mul(&y).unwrap();
            let yb: Rational = y.iter().zip(&p.b).map(|(u, v)| u * v).sum();
            ya.iter().all(|v| !v.is_negative()) && yb.is_negative()
        });
        return Ok(LpOutcome::Infeasible(y));
    }

    let mut z = vec![Rational::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            z[basis[i]] = tab[i][rhs_col].clone();
        }
    }
    debug_assert_eq!(p.a.mul_vec(&z).unwrap(), p.b);
    Ok(LpOutcome::Feasible(z))
}

/// Checks a claimed Farkas certificate exactly.
pub fn verify_infeasibility_certificate(p: &LpProblem, y: &[Rational]) -> Result<bool> {
    let ya = p.a.vec_mul(y)?;
    let yb: Rational = y.iter().zip(&p.b).map(|(u, v)| u * v).sum();
    Ok(ya.iter().all(|v| !v.is_negative()) && yb.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn problem(rows: Vec<Vec<Rational>>, b: Vec<Rational>) -> LpProblem {
        LpProblem::new(RationalMatrix::from_rows(rows).unwrap(), b).unwrap()
    }

    #[test]
    fn simplex_feasible() {
        // z1 + z2 = 1
        let p = problem(vec![vec![r(1, 1), r(1, 1)]], vec![r(1, 1)]);
        match lp_feasible(&p).unwrap() {
            LpOutcome::Feasible(z) => {
                assert_eq!(&z[0] + &z[1], r(1, 1));
                assert!(z.iter().all(|v| !v.is_negative()));
            }
            LpOutcome::Infeasible(_) => panic!("should be feasible"),
        }
    }

    #[test]
    fn simplex_infeasible_sign() {
        // z1 = −1 with z1 ≥ 0
        let p = problem(vec![vec![r(1, 1)]], vec![r(-1, 1)]);
        match lp_feasible(&p).unwrap() {
            LpOutcome::Infeasible(y) => {
                assert!(verify_infeasibility_certificate(&p, &y).unwrap());
            }
            LpOutcome::Feasible(_) => panic!("should be infeasible"),
        }
    }

    #[test]
    fn simplex_zero_rhs() {
        let p = problem(
            vec![vec![r(1, 1), r(-2, 1)], vec![r(3, 1), r(5, 1)]],
            vec![r(0, 1), r(0, 1)],
        );
        assert_eq!(
            lp_feasible(&p).unwrap(),
            LpOutcome::Feasible(vec![r(0, 1), r(0, 1)])
        );
    }

    #[test]
    fn simplex_redundant_rows() {
        // Same constraint twice stays feasible.
        let p = problem(
            vec![vec![r(1, 1), r(1, 1)], vec![r(2, 1), r(2, 1)]],
            vec![r(1, 1), r(2, 1)],
        );
        assert!(matches!(lp_feasible(&p).unwrap(), LpOutcome::Feasible(_)));
        // Contradictory duplicates are infeasible with an exact certificate.
        let q = problem(
            vec![vec![r(1, 1), r(1, 1)], vec![r(1, 1), r(1, 1)]],
            vec![r(1, 1), r(2, 1)],
        );
        match lp_feasible(&q).unwrap() {
            LpOutcome::Infeasible(y) => {
                assert!(verify_infeasibility_certificate(&q, &y).unwrap())
            }
            LpOutcome::Feasible(_) => panic!("should be infeasible"),
        }
    }
}
