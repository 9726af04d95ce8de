//! Join, twist and meet of rooted chirotopes, and the generator families
//! built from them.
//!
//! Result labelling for a join or meet of `(χ₁,u₁)` and `(χ₂,u₂)`: the
//! elements of `X₁ ∖ {u₁⁻}` in increasing order, then those of
//! `X₂ ∖ {u₂⁺}`, then the merged element `x₀ = u₁⁻ = u₂⁺`, then the root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::chirotope::points::{orient, Point, PointSet};
use crate::chirotope::{Chirotope, Label, RootedChirotope, Sign};
use crate::error::{Error, Result};

/// Highest Koch level [`koch`] will materialize (34 elements).
pub const KOCH_MATERIALIZE_CAP: usize = 5;

/// Where each operand label ended up in a join or meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    /// Indexed by left-operand label.
    pub from_left: Vec<Label>,
    /// Indexed by right-operand label.
    pub from_right: Vec<Label>,
    pub x0: Label,
    pub new_root: Label,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Left(Label),
    Right(Label),
    Merged,
    Root,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Join,
    Meet,
}

struct Operand<'a> {
    chi: &'a Chirotope,
    root: Label,
    /// u₁⁻ for the left operand, u₂⁺ for the right one.
    merged: Label,
}

fn check_operand(rc: &RootedChirotope) -> Result<(Label, Label)> {
    if rc.len() < 3 {
        return Err(Error::TooSmall {
            what: "join/meet operand",
            min: 3,
            got: rc.len(),
        });
    }
    rc.hull_neighbors()
}

/// Rotates a triple cyclically (an even permutation) so that `pos` comes
/// first.
fn rotate_to_front<T: Copy>(t: [T; 3], pos: usize) -> [T; 3] {
    [t[pos], t[(pos + 1) % 3], t[(pos + 2) % 3]]
}

fn compose(rc1: &RootedChirotope, rc2: &RootedChirotope, kind: Kind) -> Result<(RootedChirotope, LabelMap)> {
    let (_, u1_minus) = check_operand(rc1)?;
    let (u2_plus, _) = check_operand(rc2)?;
    let left = Operand {
        chi: rc1.chi(),
        root: rc1.root(),
        merged: u1_minus,
    };
    let right = Operand {
        chi: rc2.chi(),
        root: rc2.root(),
        merged: u2_plus,
    };

    let mut origins = Vec::with_capacity(rc1.len() + rc2.len() - 2);
    let mut from_left = vec![0; rc1.len()];
    let mut from_right = vec![0; rc2.len()];
    for a in (0..rc1.len()).filter(|&a| a != left.root && a != left.merged) {
        from_left[a] = origins.len();
        origins.push(Origin::Left(a));
    }
    for b in (0..rc2.len()).filter(|&b| b != right.root && b != right.merged) {
        from_right[b] = origins.len();
        origins.push(Origin::Right(b));
    }
    let x0 = origins.len();
    origins.push(Origin::Merged);
    let new_root = origins.len();
    origins.push(Origin::Root);
    from_left[left.merged] = x0;
    from_right[right.merged] = x0;
    from_left[left.root] = new_root;
    from_right[right.root] = new_root;

    let n = origins.len();
    let chi = Chirotope::from_fn(n, |i, j, k| {
        composed_sign([origins[i], origins[j], origins[k]], &left, &right, kind)
    })?;
    let map = LabelMap {
        from_left,
        from_right,
        x0,
        new_root,
    };
    Ok((RootedChirotope::new_unchecked(chi, new_root), map))
}

fn in_left(o: Origin, op: &Operand) -> Option<Label> {
    match o {
        Origin::Left(a) => Some(a),
        Origin::Merged => Some(op.merged),
        _ => None,
    }
}

fn in_right(o: Origin, op: &Operand) -> Option<Label> {
    match o {
        Origin::Right(b) => Some(b),
        Origin::Merged => Some(op.merged),
        _ => None,
    }
}

fn composed_sign(t: [Origin; 3], left: &Operand, right: &Operand, kind: Kind) -> Sign {
    // Triples through the new root.
    if let Some(pos) = t.iter().position(|&o| o == Origin::Root) {
        let [_, x, y] = rotate_to_front(t, pos);
        if let (Some(a), Some(b)) = (in_left(x, left), in_left(y, left)) {
            return left.chi.sign_unchecked(a, b, left.root);
        }
        if let (Some(a), Some(b)) = (in_right(x, right), in_right(y, right)) {
            return right.chi.sign_unchecked(a, b, right.root);
        }
        return match (x, y) {
            (Origin::Left(_), Origin::Right(_)) => Sign::Pos,
            (Origin::Right(_), Origin::Left(_)) => Sign::Neg,
            _ => unreachable!("root triple {t:?}"),
        };
    }

    let lefts = t.iter().filter(|o| matches!(o, Origin::Left(_))).count();
    let rights = t.iter().filter(|o| matches!(o, Origin::Right(_))).count();
    let twist = match kind {
        Kind::Join => Sign::Pos,
        Kind::Meet => Sign::Neg,
    };
    if rights == 0 {
        let [a, b, c] = t.map(|o| in_left(o, left).unwrap());
        return left.chi.sign_unchecked(a, b, c);
    }
    if lefts == 0 {
        let [a, b, c] = t.map(|o| in_right(o, right).unwrap());
        return right.chi.sign_unchecked(a, b, c);
    }
    if rights == 1 {
        // x, y ∈ X₁ and z ∈ X₂ ∖ {u₂⁺}: χ₁(x, y, u₁)
        let pos = t.iter().position(|o| matches!(o, Origin::Right(_))).unwrap();
        let [_, x, y] = rotate_to_front(t, pos);
        let (a, b) = (in_left(x, left).unwrap(), in_left(y, left).unwrap());
        return twist * left.chi.sign_unchecked(a, b, left.root);
    }
    // x ∈ X₁ ∖ {u₁⁻} and y, z ∈ X₂: χ₂(u₂, y, z)
    let pos = t.iter().position(|o| matches!(o, Origin::Left(_))).unwrap();
    let [_, y, z] = rotate_to_front(t, pos);
    let (b, c) = (in_right(y, right).unwrap(), in_right(z, right).unwrap());
    twist * right.chi.sign_unchecked(right.root, b, c)
}

/// The join `(χ₁,u₁) ∨ (χ₂,u₂)`.
pub fn join(rc1: &RootedChirotope, rc2: &RootedChirotope) -> Result<(RootedChirotope, LabelMap)> {
    compose(rc1, rc2, Kind::Join)
}

/// Replaces the root `u` by the opposite element `v`, keeping its label:
/// every triple through the root changes sign.
pub fn twist(rc: &RootedChirotope) -> RootedChirotope {
    let u = rc.root();
    let chi = rc.chi();
    let twisted = Chirotope::from_fn(chi.len(), |i, j, k| {
        let s = chi.sorted_sign(i, j, k);
        if i == u || j == u || k == u {
            -s
        } else {
            s
        }
    })
    .expect("same size as a valid chirotope");
    RootedChirotope::new_unchecked(twisted, u)
}

/// The meet, built directly: the join with the mixed-triple cases negated.
pub fn meet(rc1: &RootedChirotope, rc2: &RootedChirotope) -> Result<(RootedChirotope, LabelMap)> {
    let (out, map) = compose(rc1, rc2, Kind::Meet)?;
    debug_assert_eq!(
        meet_via_twists(rc1, rc2).map(|(m, _)| m).as_ref(),
        Ok(&out),
        "direct and twisted meet disagree"
    );
    Ok((out, map))
}

/// The meet as a twisted join of twists, relabelled to [`meet`]'s
/// convention.
///
/// Twisting swaps the hull neighbours of the root (`v⁺ = u⁻`), so the inner
/// join takes the operands in reverse order; that is what makes the merged
/// element `u₁⁻ = u₂⁺` match the direct construction.
pub fn meet_via_twists(
    rc1: &RootedChirotope,
    rc2: &RootedChirotope,
) -> Result<(RootedChirotope, LabelMap)> {
    let (joined, inner) = join(&twist(rc2), &twist(rc1))?;
    let met = twist(&joined);

    // Same label convention as the direct construction.
    let (_, u1_minus) = rc1.hull_neighbors()?;
    let (u2_plus, _) = rc2.hull_neighbors()?;
    let mut from_left = vec![0; rc1.len()];
    let mut from_right = vec![0; rc2.len()];
    let mut next = 0;
    for a in (0..rc1.len()).filter(|&a| a != rc1.root() && a != u1_minus) {
        from_left[a] = next;
        next += 1;
    }
    for b in (0..rc2.len()).filter(|&b| b != rc2.root() && b != u2_plus) {
        from_right[b] = next;
        next += 1;
    }
    let x0 = next;
    let new_root = next + 1;
    from_left[u1_minus] = x0;
    from_right[u2_plus] = x0;
    from_left[rc1.root()] = new_root;
    from_right[rc2.root()] = new_root;

    let mut perm = vec![0; met.len()];
    for a in 0..rc1.len() {
        perm[inner.from_right[a]] = from_left[a];
    }
    for b in 0..rc2.len() {
        perm[inner.from_left[b]] = from_right[b];
    }
    let chi = met.chi().relabel(&perm)?;
    let map = LabelMap {
        from_left,
        from_right,
        x0,
        new_root,
    };
    Ok((RootedChirotope::new_unchecked(chi, new_root), map))
}

/// Convex `n`-gon labelled counterclockwise, rooted at 0.
pub fn convex(n: usize) -> Result<RootedChirotope> {
    if n < 3 {
        return Err(Error::TooSmall {
            what: "convex polygon",
            min: 3,
            got: n,
        });
    }
    let chi = Chirotope::from_fn(n, |_, _, _| Sign::Pos)?;
    Ok(RootedChirotope::new_unchecked(chi, 0))
}

pub fn triangle() -> RootedChirotope {
    convex(3).expect("n = 3")
}

/// Four elements, one inside the triangle of the others, rooted at a hull
/// vertex: the meet of two triangles.
pub fn chi1() -> RootedChirotope {
    meet(&triangle(), &triangle()).expect("triangles are valid operands").0
}

/// `χ_k = χ_{k-1} ∨ χ_1`, with `2k + 2` elements.
pub fn chi_k(k: usize) -> Result<RootedChirotope> {
    if k < 1 {
        return Err(Error::OutOfRange {
            what: "chi_k index",
            value: k.to_string(),
        });
    }
    let base = chi1();
    let mut acc = base.clone();
    for _ in 1..k {
        acc = join(&acc, &base)?.0;
    }
    Ok(acc)
}

/// Koch level `i`: a rooted triangle at level 0, then joins at odd levels
/// and meets at even levels, both operands being the previous level.
pub fn koch(i: usize) -> Result<RootedChirotope> {
    if i > KOCH_MATERIALIZE_CAP {
        return Err(Error::TooLarge {
            what: "Koch level",
            size: i,
            cap: KOCH_MATERIALIZE_CAP,
            hint: "use the polynomial pipeline for higher levels",
        });
    }
    let mut acc = triangle();
    for level in 1..=i {
        acc = if level % 2 == 1 {
            join(&acc, &acc)?.0
        } else {
            meet(&acc, &acc)?.0
        };
    }
    Ok(acc)
}

fn rational(v: f64, den: i64) -> BigRational {
    BigRational::new(BigInt::from((v * den as f64).round() as i64), BigInt::from(den))
}

/// Exact rational double circle with `2k` points.
///
/// Labels `0..k` are on the unit circle in counterclockwise order; label
/// `k + j` sits just inside the hull edge `(j, j+1 mod k)`, at the edge
/// midpoint pulled towards the centroid by ε. Starting at ε = 2⁻²⁰, ε is
/// halved until no line through two other points separates an inner point
/// from its edge midpoint.
pub fn double_circle_points(k: usize) -> Result<PointSet<BigRational>> {
    if !(3..=12).contains(&k) {
        return Err(Error::OutOfRange {
            what: "double circle size",
            value: k.to_string(),
        });
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let outer: Vec<Point<BigRational>> = (0..k)
        .map(|j| {
            let theta = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / k as f64;
            let t = rational((theta / 2.0).tan(), 1000);
            let t2 = &t * &t;
            let den = &one + &t2;
            Point::new((&one - &t2) / &den, (&two * &t) / &den)
        })
        .collect();
    let kk = BigRational::from_integer(BigInt::from(k as i64));
    let cx = outer.iter().map(|p| p.x.clone()).fold(BigRational::from_integer(0.into()), |a, b| a + b) / &kk;
    let cy = outer.iter().map(|p| p.y.clone()).fold(BigRational::from_integer(0.into()), |a, b| a + b) / &kk;
    let mids: Vec<Point<BigRational>> = (0..k)
        .map(|j| {
            let (a, b) = (&outer[j], &outer[(j + 1) % k]);
            Point::new((&a.x + &b.x) / &two, (&a.y + &b.y) / &two)
        })
        .collect();

    let mut eps = BigRational::new(BigInt::one(), BigInt::one() << 20usize);
    for _ in 0..40 {
        let mut pts = outer.clone();
        pts.extend(mids.iter().map(|m| {
            Point::new(&m.x + (&cx - &m.x) * &eps, &m.y + (&cy - &m.y) * &eps)
        }));
        if let Ok(ps) = PointSet::new(pts) {
            if double_circle_valid(&ps, &mids, k)? {
                return Ok(ps);
            }
        }
        eps /= &two;
    }
    Err(Error::ConstructionFailed(format!(
        "no ε ≥ 2^-60 gives a valid double circle for k={k}"
    )))
}

fn double_circle_valid(ps: &PointSet<BigRational>, mids: &[Point<BigRational>], k: usize) -> Result<bool> {
    let chi = ps.chirotope()?;
    let outer: std::collections::BTreeSet<Label> = (0..k).collect();
    if chi.extreme_elements() != outer {
        return Ok(false);
    }
    let pts = ps.points();
    for (j, m) in mids.iter().enumerate() {
        let p = k + j;
        for a in 0..2 * k {
            for b in a + 1..2 * k {
                if a == p || b == p {
                    continue;
                }
                if let Some(side) = orient(&pts[a], &pts[b], m) {
                    if orient(&pts[a], &pts[b], &pts[p]) != Some(side) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The double circle `DC_k` as a rooted chirotope, rooted at outer label 0.
pub fn double_circle(k: usize) -> Result<RootedChirotope> {
    let chi = double_circle_points(k)?.chirotope()?;
    RootedChirotope::new(chi, 0)
}
