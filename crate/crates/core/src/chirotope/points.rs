//! Labelled planar point sets and their (realizable) chirotopes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::{Chirotope, Label, Sign};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

impl Point<BigRational> {
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(
            BigRational::from_integer(BigInt::from(x)),
            BigRational::from_integer(BigInt::from(y)),
        )
    }
}

/// Twice the signed area of `(p, q, r)`; positive iff counterclockwise.
pub fn orient_det<T: Scalar>(p: &Point<T>, q: &Point<T>, r: &Point<T>) -> T {
    let a = q.x.clone() - p.x.clone();
    let b = q.y.clone() - p.y.clone();
    let c = r.x.clone() - p.x.clone();
    let d = r.y.clone() - p.y.clone();
    a * d - b * c
}

/// Orientation of three points; `None` when collinear.
pub fn orient<T: Scalar>(p: &Point<T>, q: &Point<T>, r: &Point<T>) -> Option<Sign> {
    let det = orient_det(p, q, r);
    if det.is_zero() {
        None
    } else {
        Some(Sign::from_positive(det.is_positive()))
    }
}

/// Labelled points in general position; label = index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet<T> {
    points: Vec<Point<T>>,
}

impl<T: Scalar> PointSet<T> {
    /// Validates general position (no three points collinear).
    pub fn new(points: Vec<Point<T>>) -> Result<Self> {
        let n = points.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if orient(&points[i], &points[j], &points[k]).is_none() {
                        return Err(Error::GeneralPositionViolation([i, j, k]));
                    }
                }
            }
        }
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn orient(&self, a: Label, b: Label, c: Label) -> Result<Sign> {
        orient(&self.points[a], &self.points[b], &self.points[c])
            .ok_or(Error::GeneralPositionViolation([a, b, c]))
    }

    pub fn chirotope(&self) -> Result<Chirotope> {
        if self.len() < 3 {
            return Err(Error::TooSmall {
                what: "point set",
                min: 3,
                got: self.len(),
            });
        }
        let mut err = None;
        let chi = Chirotope::from_fn(self.len(), |i, j, k| match self.orient(i, j, k) {
            Ok(s) => s,
            Err(e) => {
                err.get_or_insert(e);
                Sign::Pos
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(chi),
        }
    }

    /// Convex hull vertices in counterclockwise order, starting from the
    /// leftmost-then-lowest point (monotone chain).
    pub fn hull(&self) -> Vec<Label> {
        let n = self.len();
        if n < 3 {
            return (0..n).collect();
        }
        let mut order: Vec<Label> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let (pa, pb) = (&self.points[a], &self.points[b]);
            pa.x.partial_cmp(&pb.x)
                .unwrap()
                .then(pa.y.partial_cmp(&pb.y).unwrap())
        });
        let ccw = |a: Label, b: Label, c: Label| {
            orient(&self.points[a], &self.points[b], &self.points[c]) == Some(Sign::Pos)
        };
        let mut lower: Vec<Label> = Vec::new();
        for &p in &order {
            while lower.len() >= 2 && !ccw(lower[lower.len() - 2], lower[lower.len() - 1], p) {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Label> = Vec::new();
        for &p in order.iter().rev() {
            while upper.len() >= 2 && !ccw(upper[upper.len() - 2], upper[upper.len() - 1], p) {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        lower
    }

    pub fn hull_set(&self) -> BTreeSet<Label> {
        self.hull().into_iter().collect()
    }

    /// Applies a relabelling: point `l` moves to label `perm[l]`.
    pub fn permuted(&self, perm: &[Label]) -> Self {
        let mut slots: Vec<Option<Point<T>>> = vec![None; self.len()];
        for (old, &new) in perm.iter().enumerate() {
            slots[new] = Some(self.points[old].clone());
        }
        PointSet {
            points: slots.into_iter().map(|p| p.expect("permutation")).collect(),
        }
    }
}

/// Uniform random integer points in `[0, bound)²`, resampled until in
/// general position.
pub fn random_general_position<R: Rng + ?Sized>(
    n: usize,
    bound: i64,
    rng: &mut R,
) -> PointSet<BigRational> {
    loop {
        let mut pts: Vec<Point<i64>> = Vec::with_capacity(n);
        'grow: while pts.len() < n {
            let p = Point::new(rng.gen_range(0..bound), rng.gen_range(0..bound));
            for i in 0..pts.len() {
                if pts[i] == p {
                    continue 'grow;
                }
                for j in i + 1..pts.len() {
                    if orient(&pts[i], &pts[j], &p).is_none() {
                        continue 'grow;
                    }
                }
            }
            pts.push(p);
        }
        let exact = pts.into_iter().map(|p| Point::from_ints(p.x, p.y)).collect();
        if let Ok(ps) = PointSet::new(exact) {
            return ps;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(coords: &[(i64, i64)]) -> PointSet<BigRational> {
        PointSet::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn orient_examples() {
        let p = |x, y| Point::from_ints(x, y);
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), Some(Sign::Pos));
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 0)), Some(Sign::Neg));
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(2, 0)), None);
        // generic over integer scalars too
        assert_eq!(
            orient(&Point::new(0i64, 0), &Point::new(1, 0), &Point::new(0, 1)),
            Some(Sign::Pos)
        );
    }

    #[test]
    fn collinear_sets_are_rejected() {
        let pts = vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(2, 0),
        ];
        assert_eq!(
            PointSet::new(pts).unwrap_err(),
            Error::GeneralPositionViolation([0, 1, 2])
        );
        let two = ps(&[(0, 0), (1, 0)]);
        assert!(matches!(two.chirotope(), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn chirotopes_of_small_sets() {
        let tri = ps(&[(0, 0), (4, 0), (0, 4)]).chirotope().unwrap();
        assert_eq!(tri.signs(), &[Sign::Pos]);

        let square = ps(&[(0, 0), (1, 0), (1, 1), (0, 1)]).chirotope().unwrap();
        assert!(square.signs().iter().all(|s| s.is_positive()));

        let chi1 = ps(&[(0, 0), (4, 0), (2, 3), (2, 1)]);
        let chi = chi1.chirotope().unwrap();
        assert!(chi.check_axioms().is_empty());
        assert_eq!(chi.extreme_elements(), [0, 1, 2].into_iter().collect());
        assert_eq!(chi1.hull(), vec![0, 1, 2]);
    }

    #[test]
    fn hull_is_ccw() {
        let sq = ps(&[(1, 2), (0, 0), (4, 0), (4, 4), (0, 4)]);
        assert_eq!(sq.hull(), vec![1, 2, 3, 4]);
    }
}
