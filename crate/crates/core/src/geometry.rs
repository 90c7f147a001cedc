//! Convex-geometric primitives over exact rationals: hull-intersection
//! testing, constructive Carathéodory reduction, splitting a point cloud into
//! two disjoint sub-hulls that share a point, and vertex enumeration for
//! H-polytopes via the double description method.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    affine_dimension, lp_feasible, LpOutcome, LpProblem, Rational, RationalMatrix,
};

/// A finite set of rational points in a fixed ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub dimension: usize,
    pub points: Vec<Vec<Rational>>,
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if points.iter().any(|p| p.len() != dimension) {
            return Err(Error::DimensionMismatch(
                "point length differs from ambient dimension".into(),
            ));
        }
        Ok(PointSet { dimension, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn affine_dimension(&self) -> Result<usize> {
        affine_dimension(&self.points)
    }
}

/// A convex combination over a point set, indexed into that set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexCombination {
    pub indices: Vec<usize>,
    pub weights: Vec<Rational>,
}

impl ConvexCombination {
    pub fn new(indices: Vec<usize>, weights: Vec<Rational>) -> Result<Self> {
        let c = ConvexCombination { indices, weights };
        c.validate()?;
        Ok(c)
    }

    pub fn point_mass(index: usize) -> Self {
        ConvexCombination {
            indices: vec![index],
            weights: vec![Rational::one()],
        }
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("uniform combination over zero points"));
        }
        let w = Rational::ratio(1, n as i64);
        ConvexCombination::new((0..n).collect(), vec![w; n])
    }

    pub fn validate(&self) -> Result<()> {
        if self.indices.len() != self.weights.len() {
            return Err(Error::InvalidCombination(
                "index and weight lists differ in length".into(),
            ));
        }
        if self.indices.is_empty() {
            return Err(Error::InvalidCombination("empty support".into()));
        }
        let mut seen = self.indices.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.indices.len() {
            return Err(Error::InvalidCombination("repeated index".into()));
        }
        if self.weights.iter().any(Rational::is_negative) {
            return Err(Error::InvalidCombination("negative weight".into()));
        }
        let total: Rational = self.weights.iter().sum();
        if total != Rational::one() {
            return Err(Error::InvalidCombination(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(())
    }

    /// The weight attached to a point index (zero when absent).
    pub fn weight_of(&self, index: usize) -> Rational {
        self.indices
            .iter()
            .position(|&i| i == index)
            .map(|pos| self.weights[pos].clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Σ wᵢ·pᵢ over the given point set.
    pub fn evaluate(&self, points: &PointSet) -> Result<Vec<Rational>> {
        let mut acc = vec![Rational::zero(); points.dimension];
        for (&i, w) in self.indices.iter().zip(&self.weights) {
            let p = points.points.get(i).ok_or(Error::IndexRange {
                index: i,
                len: points.len(),
            })?;
            for (a, x) in acc.iter_mut().zip(p) {
                *a += &(w * x);
            }
        }
        Ok(acc)
    }

    /// Support sorted by point index, with zero-weight entries removed.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .indices
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| !w.is_zero())
            .map(|(&i, _)| i)
            .collect();
        s.sort_unstable();
        s
    }

    fn sorted_by_index(mut self) -> Self {
        let mut order: Vec<usize> = (0..self.indices.len()).collect();
        order.sort_by_key(|&k| self.indices[k]);
        let indices = order.iter().map(|&k| self.indices[k]).collect();
        let weights = order.iter().map(|&k| self.weights[k].clone()).collect();
        self.indices = indices;
        self.weights = weights;
        self
    }
}

/// Polytope in standard form: A·z = b together with z ≥ 0.
#[derive(Clone, Debug)]
pub struct HPolytope {
    pub a: RationalMatrix,
    pub b: Vec<Rational>,
}

impl HPolytope {
    pub fn new(a: RationalMatrix, b: Vec<Rational>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch(
                "constraint matrix and rhs disagree".into(),
            ));
        }
        Ok(HPolytope { a, b })
    }

    pub fn ambient_dimension(&self) -> usize {
        self.a.cols()
    }

    /// Exact membership test.
    pub fn contains(&self, z: &[Rational]) -> Result<bool> {
        if z.iter().any(Rational::is_negative) {
            return Ok(false);
        }
        Ok(self.a.mul_vec(z)? == self.b)
    }
}

/// A common point of two hulls with exact convex weights on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullIntersection {
    pub point: Vec<Rational>,
    pub left: ConvexCombination,
    pub right: ConvexCombination,
}

/// Decides whether conv(A) and conv(B) meet, returning a witness if they do.
///
/// Reduces to exact LP feasibility of Σλᵢaᵢ − Σνⱼbⱼ = 0, Σλ = 1, Σν = 1 with
/// λ, ν ≥ 0.
pub fn hulls_intersect(a: &PointSet, b: &PointSet) -> Result<Option<HullIntersection>> {
    if a.dimension != b.dimension {
        return Err(Error::DimensionMismatch(
            "hulls live in different ambient dimensions".into(),
        ));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("hulls_intersect needs nonempty sets"));
    }
    let d = a.dimension;
    let na = a.len();
    let nb = b.len();
    let mut rows = Vec::with_capacity(d + 2);
    for k in 0..d {
        let mut row = Vec::with_capacity(na + nb);
        for p in &a.points {
            row.push(p[k].clone());
        }
        for p in &b.points {
            row.push(-&p[k]);
        }
        rows.push(row);
    }
    let mut lam_row = vec![Rational::zero(); na + nb];
    for v in lam_row.iter_mut().take(na) {
        *v = Rational::one();
    }
    rows.push(lam_row);
    let mut nu_row = vec![Rational::zero(); na + nb];
    for v in nu_row.iter_mut().skip(na) {
        *v = Rational::one();
    }
    rows.push(nu_row);

    let mut rhs = vec![Rational::zero(); d];
    rhs.push(Rational::one());
    rhs.push(Rational::one());

    let problem = LpProblem::new(RationalMatrix::from_rows(rows)?, rhs)?;
    match lp_feasible(&problem)? {
        LpOutcome::Infeasible(_) => Ok(None),
        LpOutcome::Feasible(z) => {
            let collect = |offset: usize, count: usize| -> ConvexCombination {
                let mut indices = Vec::new();
                let mut weights = Vec::new();
                for i in 0..count {
                    if !z[offset + i].is_zero() {
                        indices.push(i);
                        weights.push(z[offset + i].clone());
                    }
                }
                ConvexCombination { indices, weights }
            };
            let left = collect(0, na);
            let right = collect(na, nb);
            let point = left.evaluate(a)?;
            debug_assert_eq!(point, right.evaluate(b)?);
            Ok(Some(HullIntersection { point, left, right }))
        }
    }
}

/// Rewrites a convex representation of `x` over `s` so that its support is
/// affinely independent, hence of size at most affine_dimension(s) + 1.
///
/// Each round finds an affine dependence among the support points and shifts
/// weight along it until a weight reaches zero; when several reach zero
/// together, the smallest point index is dropped.
pub fn caratheodory_reduce(
    s: &PointSet,
    x: &[Rational],
    c: &ConvexCombination,
) -> Result<ConvexCombination> {
    c.validate()?;
    if x.len() != s.dimension {
        return Err(Error::DimensionMismatch("target point length".into()));
    }
    if c.evaluate(s)? != x {
        return Err(Error::CombinationMismatch);
    }

    let mut indices = c.indices.clone();
    let mut weights = c.weights.clone();

    loop {
        // Affine dependence: Σ αᵢ pᵢ = 0 with Σ αᵢ = 0, α ≠ 0.
        let mut rows = Vec::with_capacity(s.dimension + 1);
        for k in 0..s.dimension {
            rows.push(
                indices
                    .iter()
                    .map(|&i| s.points[i][k].clone())
                    .collect::<Vec<_>>(),
            );
        }
        rows.push(vec![Rational::one(); indices.len()]);
        let Some(mut alpha) = RationalMatrix::from_rows(rows)?.nullspace_vector() else {
            break;
        };
        // Normalize so the first nonzero entry is positive.
        if let Some(first) = alpha.iter().find(|v| !v.is_zero()) {
            if first.is_negative() {
                for v in alpha.iter_mut() {
                    *v = -v.clone();
                }
            }
        }
        let step = alpha
            .iter()
            .zip(&weights)
            .filter(|(a, _)| a.is_positive())
            .map(|(a, w)| w / a)
            .min()
            .expect("normalized dependence has a positive entry");
        let mut hit_zero: Vec<usize> = Vec::new();
        for (pos, (w, a)) in weights.iter_mut().zip(&alpha).enumerate() {
            *w -= &(&step * a);
            if w.is_zero() && a.is_positive() {
                hit_zero.push(pos);
            }
        }
        let drop_pos = hit_zero
            .into_iter()
            .min_by_key(|&pos| indices[pos])
            .expect("the ratio-minimizing weight reaches zero");
        indices.remove(drop_pos);
        weights.remove(drop_pos);
    }

    let reduced = ConvexCombination { indices, weights };
    reduced.validate()?;
    debug_assert_eq!(reduced.evaluate(s)?, x);
    Ok(reduced)
}

/// Two convex combinations with disjoint supports that represent the same
/// point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub left: ConvexCombination,
    pub right: ConvexCombination,
    pub point: Vec<Rational>,
}

/// Disjoint decomposition seeded from an explicit starting combination:
/// reduce it, subtract the componentwise minima of the two weight vectors,
/// renormalize, and reduce each side.
pub fn disjoint_decomposition_from(
    s: &PointSet,
    start: &ConvexCombination,
) -> Result<Decomposition> {
    start.validate()?;
    let x = start.evaluate(s)?;
    let reduced = caratheodory_reduce(s, &x, start)?;

    let mut left_idx = Vec::new();
    let mut left_w = Vec::new();
    let mut right_idx = Vec::new();
    let mut right_w = Vec::new();
    let mut total = Rational::zero();
    for i in 0..s.len() {
        let w0 = start.weight_of(i);
        let w1 = reduced.weight_of(i);
        if w0 > w1 {
            let d = &w0 - &w1;
            total += &d;
            left_idx.push(i);
            left_w.push(d);
        } else if w1 > w0 {
            right_idx.push(i);
            right_w.push(&w1 - &w0);
        }
    }
    if total.is_zero() {
        return Err(Error::DegenerateStart);
    }
    let inv = total.recip()?;
    for w in left_w.iter_mut() {
        *w *= &inv;
    }
    for w in right_w.iter_mut() {
        *w *= &inv;
    }
    let left = ConvexCombination::new(left_idx, left_w)?;
    let right = ConvexCombination::new(right_idx, right_w)?;
    let point = left.evaluate(s)?;
    debug_assert_eq!(point, right.evaluate(s)?);

    let left = caratheodory_reduce(s, &point, &left)?.sorted_by_index();
    let right = caratheodory_reduce(s, &point, &right)?.sorted_by_index();
    Ok(Decomposition { left, right, point })
}

/// For n ≥ d+2 points in ambient dimension d, produces two disjoint subsets
/// of at most d+1 points each whose convex hulls share an explicit point.
///
/// Starts from the uniform centroid; if the reduction happens to return the
/// start unchanged, retries once from a deterministic perturbation (weight
/// 1/(2n) moved from the first point to the last).
pub fn disjoint_decomposition(s: &PointSet) -> Result<Decomposition> {
    let n = s.len();
    if n < s.dimension + 2 {
        return Err(Error::TooFewPoints {
            need: s.dimension + 2,
            dim: s.dimension,
            got: n,
        });
    }
    let uniform = ConvexCombination::uniform(n)?;
    match disjoint_decomposition_from(s, &uniform) {
        Err(Error::DegenerateStart) => {
            let shift = Rational::ratio(1, 2 * n as i64);
            let mut weights = vec![Rational::ratio(1, n as i64); n];
            weights[0] = &weights[0] - &shift;
            weights[n - 1] = &weights[n - 1] + &shift;
            let perturbed = ConvexCombination::new((0..n).collect(), weights)?;
            disjoint_decomposition_from(s, &perturbed)
        }
        other => other,
    }
}

/// Primitive integer ray: scaled so entries are coprime integers.
fn canonical_ray(mut ray: Vec<Rational>) -> Vec<Rational> {
    let lcm = ray.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut gcd = BigInt::zero();
    let ints: Vec<BigInt> = ray.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    for (slot, int) in ray.iter_mut().zip(ints) {
        *slot = Rational::from_bigint(int / &gcd);
    }
    ray
}

fn zero_set(ray: &[Rational]) -> Vec<bool> {
    ray.iter().map(Rational::is_zero).collect()
}

/// Enumerates all vertices of {z ≥ 0, A·z = b} with the double description
/// method on the homogenization cone {x ≥ 0, [A | −b]·x = 0}.
///
/// Constraints are inserted in input order. Errors with `Unbounded` when the
/// polyhedron is nonempty but has a recession direction; an empty polytope
/// yields an empty point set.
pub fn enumerate_vertices(p: &HPolytope) -> Result<PointSet> {
    let n = p.ambient_dimension();
    let cone_dim = n + 1;

    // Extreme rays of the nonnegative orthant: unit vectors.
    let mut rays: Vec<Vec<Rational>> = (0..cone_dim)
        .map(|i| {
            let mut r = vec![Rational::zero(); cone_dim];
            r[i] = Rational::one();
            r
        })
        .collect();

    for row in 0..p.a.rows() {
        let constraint: Vec<Rational> = (0..n)
            .map(|c| p.a.at(row, c).clone())
            .chain(std::iter::once(-&p.b[row]))
            .collect();
        let dots: Vec<Rational> = rays
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&constraint)
                    .map(|(a, b)| a * b)
                    .sum::<Rational>()
            })
            .collect();

        let pos: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_negative()).collect();
        let zero: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_zero()).collect();

        let zero_sets: Vec<Vec<bool>> = rays.iter().map(|r| zero_set(r)).collect();
        let adjacent = |i: usize, j: usize| -> bool {
            let common: Vec<usize> = (0..cone_dim)
                .filter(|&k| zero_sets[i][k] && zero_sets[j][k])
                .collect();
            !(0..rays.len()).any(|t| t != i && t != j && common.iter().all(|&k| zero_sets[t][k]))
        };

        let mut next: Vec<Vec<Rational>> = zero.iter().map(|&i| rays[i].clone()).collect();
        for &ip in &pos {
            for &im in &neg {
                if !adjacent(ip, im) {
                    continue;
                }
                // dots[ip]·ray[im] − dots[im]·ray[ip] is a nonnegative
                // combination lying on the new hyperplane.
                let combo: Vec<Rational> = rays[ip]
                    .iter()
                    .zip(&rays[im])
                    .map(|(rp, rm)| &(&dots[ip] * rm) - &(&dots[im] * rp))
                    .collect();
                let combo = canonical_ray(combo);
                if !next.contains(&combo) {
                    next.push(combo);
                }
            }
        }
        rays = next;
        if rays.is_empty() {
            break;
        }
    }

    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    let mut recession = false;
    for ray in &rays {
        let t = &ray[n];
        if t.is_zero() {
            recession = true;
        } else {
            let inv = t.recip()?;
            let v: Vec<Rational> = ray[..n].iter().map(|c| c * &inv).collect();
            if !vertices.contains(&v) {
                vertices.push(v);
            }
        }
    }
    if recession && !vertices.is_empty() {
        return Err(Error::Unbounded);
    }
    vertices.sort();
    PointSet::new(n, vertices)
}
