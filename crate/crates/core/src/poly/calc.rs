//! The counting recursions on `P` and `Q` polynomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{BivarPoly, UnivarPoly};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComposeKind {
    Join,
    Meet,
}

fn pascal() -> &'static RwLock<Vec<Vec<BigInt>>> {
    static ROWS: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();
    ROWS.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]))
}

/// Binomial coefficient from a cached Pascal triangle.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    {
        let rows = pascal().read().unwrap();
        if let Some(row) = rows.get(n) {
            return row[k].clone();
        }
    }
    let mut rows = pascal().write().unwrap();
    while rows.len() <= n {
        let prev = rows.last().unwrap();
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(BigInt::one());
        for w in prev.windows(2) {
            row.push(&w[0] + &w[1]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    rows[n][k].clone()
}

type DenseN = Arc<Vec<BigInt>>;

fn n_dense(d1: u32, d2: u32) -> DenseN {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), DenseN>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(d1, d2)) {
        return hit.clone();
    }
    let (a, b) = (d1 as usize, d2 as usize);
    let mut coeffs = vec![BigInt::zero(); a + b];
    coeffs[a + b - 1] = BigInt::one();
    for i1 in 1..a {
        for i2 in 1..b {
            coeffs[i1 + i2] += binomial(a - i1 + b - i2 - 2, a - i1 - 1);
        }
    }
    let dense = Arc::new(coeffs);
    cache.lock().unwrap().insert((d1, d2), dense.clone());
    dense
}

/// `N_{d1,d2}(u) = u^{d1+d2−1} + Σ_{i1<d1, i2<d2} C(d1−i1+d2−i2−2, d1−i1−1) u^{i1+i2}`.
pub fn n_poly(d1: u32, d2: u32) -> Result<UnivarPoly> {
    for d in [d1, d2] {
        if d < 2 {
            return Err(Error::OutOfRange {
                what: "root degree",
                value: d.to_string(),
            });
        }
    }
    Ok(UnivarPoly::from_dense((*n_dense(d1, d2)).clone()))
}

/// `N_{d1,d2}(1) = C(d1+d2−2, d1−1)`.
pub fn n_at_one(d1: u32, d2: u32) -> BigInt {
    binomial((d1 + d2 - 2) as usize, (d1 - 1) as usize)
}

fn check_min_exp(min: Option<u32>, what: &'static str) -> Result<()> {
    match min {
        None => Err(Error::EmptyInput(what)),
        Some(e) if e < 2 => Err(Error::OutOfRange {
            what,
            value: format!("exponent {e} < 2"),
        }),
        Some(_) => Ok(()),
    }
}

/// Rows `[u^d] P` as dense vectors in `v`, together with the smallest
/// `v` exponent they start at.
fn rows_by_u(p: &BivarPoly) -> (Vec<(u32, Vec<BigInt>)>, u32) {
    let lo = p.min_v_exp().unwrap_or(0);
    let hi = p.max_v_exp().unwrap_or(0);
    let mut rows: Vec<(u32, Vec<BigInt>)> = Vec::new();
    for ((a, b), c) in p.terms() {
        if rows.last().map(|(d, _)| *d) != Some(a) {
            rows.push((a, vec![BigInt::zero(); (hi - lo + 1) as usize]));
        }
        rows.last_mut().unwrap().1[(b - lo) as usize] = c.clone();
    }
    (rows, lo)
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn add_dense(mut a: Vec<Vec<BigInt>>, b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y;
        }
    }
    a
}

/// `Σ [u^{d1}]P1 · [u^{d2}]P2 · N_{d1,d2}(u) · v⁻¹`.
pub fn join_p(p1: &BivarPoly, p2: &BivarPoly) -> Result<BivarPoly> {
    check_min_exp(p1.min_u_exp(), "left P polynomial")?;
    check_min_exp(p2.min_u_exp(), "right P polynomial")?;
    let (rows1, lo1) = rows_by_u(p1);
    let (rows2, lo2) = rows_by_u(p2);
    let u_len = (p1.max_u_exp().unwrap() + p2.max_u_exp().unwrap()) as usize;
    let v_len = rows1[0].1.len() + rows2[0].1.len() - 1;

    let acc = rows1
        .par_iter()
        .map(|(d1, a)| {
            let mut acc = vec![vec![BigInt::zero(); v_len]; u_len];
            for (d2, b) in &rows2 {
                let ab = convolve(a, b);
                let n = n_dense(*d1, *d2);
                for (e, ne) in n.iter().enumerate() {
                    if ne.is_zero() {
                        continue;
                    }
                    for (w, c) in ab.iter().enumerate() {
                        if !c.is_zero() {
                            acc[e][w] += ne * c;
                        }
                    }
                }
            }
            acc
        })
        .reduce(|| vec![vec![BigInt::zero(); v_len]; u_len], add_dense);

    // v⁻¹: the product starts at v^{lo1+lo2}; shift down by one.
    let base = lo1 + lo2;
    if base == 0 {
        if let Some(e) = acc.iter().position(|row| !row[0].is_zero()) {
            return Err(Error::InternalInvariantViolation(format!(
                "join_P product has a v^0 term at u^{e}"
            )));
        }
    }
    let mut terms = Vec::new();
    for (e, row) in acc.into_iter().enumerate() {
        for (w, c) in row.into_iter().enumerate() {
            if !c.is_zero() {
                terms.push(((e as u32, base + w as u32 - 1), c));
            }
        }
    }
    Ok(BivarPoly::from_terms(terms))
}

pub fn swap_vars(p: &BivarPoly) -> BivarPoly {
    p.swap_vars()
}

/// The meet recursion: roles of `u` and `v` exchanged.
pub fn meet_p(p1: &BivarPoly, p2: &BivarPoly) -> Result<BivarPoly> {
    Ok(join_p(&p1.swap_vars(), &p2.swap_vars())?.swap_vars())
}

pub fn compose_p(p1: &BivarPoly, p2: &BivarPoly, kind: ComposeKind) -> Result<BivarPoly> {
    match kind {
        ComposeKind::Join => join_p(p1, p2),
        ComposeKind::Meet => meet_p(p1, p2),
    }
}

/// The slice of `P` at its smallest `v` exponent.
pub fn q_from_p(p: &BivarPoly) -> Result<UnivarPoly> {
    let m = p.min_v_exp().ok_or(Error::EmptyInput("P polynomial"))?;
    Ok(p.v_slice(m))
}

/// `Σ [u^{d1}]Q1 · [u^{d2}]Q2 · N_{d1,d2}(u)`.
pub fn join_q(q1: &UnivarPoly, q2: &UnivarPoly) -> Result<UnivarPoly> {
    check_min_exp(q1.min_exp(), "left Q polynomial")?;
    check_min_exp(q2.min_exp(), "right Q polynomial")?;
    let top = (q1.max_exp().unwrap() + q2.max_exp().unwrap()) as usize;
    let terms1: Vec<(u32, &BigInt)> = q1.terms().collect();
    let acc = terms1
        .par_iter()
        .map(|&(d1, a)| {
            let mut acc = vec![BigInt::zero(); top];
            for (d2, b) in q2.terms() {
                let ab = a * b;
                for (e, ne) in n_dense(d1, d2).iter().enumerate() {
                    if !ne.is_zero() {
                        acc[e] += ne * &ab;
                    }
                }
            }
            acc
        })
        .reduce(
            || vec![BigInt::zero(); top],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(UnivarPoly::from_dense(acc))
}

/// Total weak-triangulation count of the composed rooted chirotope, from
/// the `u`-marginals of the operands (the `v`-marginals for a meet).
pub fn count_weak_join(p1: &BivarPoly, p2: &BivarPoly, kind: ComposeKind) -> Result<BigInt> {
    let (a, b) = match kind {
        ComposeKind::Join => (p1.u_marginal(), p2.u_marginal()),
        ComposeKind::Meet => (p1.v_marginal(), p2.v_marginal()),
    };
    check_min_exp(a.min_exp(), "left P polynomial")?;
    check_min_exp(b.min_exp(), "right P polynomial")?;
    let mut total = BigInt::zero();
    for (d1, x) in a.terms() {
        for (d2, y) in b.terms() {
            total += x * y * n_at_one(d1, d2);
        }
    }
    Ok(total)
}

/// Factors `P = U(u)·V(v)` when its coefficient matrix has rank one.
/// `V` is primitive with a positive leading coefficient.
pub fn try_split(p: &BivarPoly) -> Option<(UnivarPoly, UnivarPoly)> {
    let first = p.min_u_exp()?;
    let row0 = p.u_slice(first);
    let content = row0
        .terms()
        .fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
    let lead_sign = row0.terms().last().map(|(_, c)| c.sign())?;
    let unit = if lead_sign == num_bigint::Sign::Minus {
        -content
    } else {
        content
    };
    let v_poly = UnivarPoly::from_terms(row0.terms().map(|(e, c)| (e, c / &unit)));
    let (pivot_e, pivot_c) = v_poly.terms().next().map(|(e, c)| (e, c.clone()))?;

    let mut u_terms = Vec::new();
    let mut eu = None;
    for ((a, _), _) in p.terms() {
        if eu == Some(a) {
            continue;
        }
        eu = Some(a);
        let row = p.u_slice(a);
        let (lambda, rem) = row.coeff(pivot_e).div_rem(&pivot_c);
        if !rem.is_zero() || row != v_poly.scale(&lambda) {
            return None;
        }
        u_terms.push((a, lambda));
    }
    Some((UnivarPoly::from_terms(u_terms), v_poly))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Univariate;

    fn up(terms: &[(u32, i64)]) -> UnivarPoly {
        Univariate::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    fn bp(terms: &[((u32, u32), i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn n_polynomials() {
        assert_eq!(n_poly(2, 2).unwrap(), up(&[(2, 1), (3, 1)]));
        assert_eq!(n_poly(3, 3).unwrap(), up(&[(2, 2), (3, 2), (4, 1), (5, 1)]));
        assert!(n_poly(1, 3).is_err());
        for d1 in 2..=10 {
            for d2 in 2..=10 {
                assert_eq!(n_poly(d1, d2).unwrap(), n_poly(d2, d1).unwrap());
                assert_eq!(n_poly(d1, d2).unwrap().eval_at_one(), n_at_one(d1, d2));
            }
        }
    }

    #[test]
    fn n_with_three_matches_unrolled_sum() {
        for d in 2..=8u32 {
            let mut terms = vec![(d + 2, 1i64)];
            for i in 1..d {
                terms.push((i + 1, (d - i) as i64));
                terms.push((i + 2, 1));
            }
            assert_eq!(n_poly(d, 3).unwrap(), up(&terms), "d = {d}");
        }
    }

    #[test]
    fn join_and_meet_of_small_p() {
        let tri = bp(&[((2, 2), 1)]);
        assert_eq!(join_p(&tri, &tri).unwrap(), bp(&[((2, 3), 1), ((3, 3), 1)]));
        assert_eq!(meet_p(&tri, &tri).unwrap(), bp(&[((3, 2), 1), ((3, 3), 1)]));
        let chi1 = bp(&[((3, 2), 1), ((3, 3), 1)]);
        let expected = BivarPoly::outer(&up(&[(2, 2), (3, 2), (4, 1), (5, 1)]), &up(&[(3, 1), (4, 2), (5, 1)]));
        assert_eq!(join_p(&chi1, &chi1).unwrap(), expected);
        assert_eq!(q_from_p(&meet_p(&tri, &tri).unwrap()).unwrap(), up(&[(3, 1)]));
    }

    #[test]
    fn v_shift_must_be_exact() {
        let bad = bp(&[((2, 0), 1)]);
        assert!(matches!(
            join_p(&bad, &bad),
            Err(Error::InternalInvariantViolation(_))
        ));
        assert!(matches!(join_p(&bp(&[((1, 2), 1)]), &bad), Err(Error::OutOfRange { .. })));
        assert!(matches!(join_p(&BivarPoly::zero(), &bad), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn q_operations() {
        assert_eq!(join_q(&up(&[(2, 1)]), &up(&[(2, 1)])).unwrap(), n_poly(2, 2).unwrap());
        assert_eq!(join_q(&up(&[(3, 1)]), &up(&[(3, 1)])).unwrap(), n_poly(3, 3).unwrap());
        assert!(join_q(&up(&[(1, 1)]), &up(&[(3, 1)])).is_err());
        assert_eq!(q_from_p(&bp(&[((2, 2), 1)])).unwrap(), up(&[(2, 1)]));
        assert!(matches!(q_from_p(&BivarPoly::zero()), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn marginal_counts() {
        let tri = bp(&[((2, 2), 1)]);
        assert_eq!(count_weak_join(&tri, &tri, ComposeKind::Join).unwrap(), BigInt::from(2));
        let chi1 = bp(&[((3, 2), 1), ((3, 3), 1)]);
        for kind in [ComposeKind::Join, ComposeKind::Meet] {
            let full = compose_p(&chi1, &chi1, kind).unwrap().eval_at_one();
            assert_eq!(count_weak_join(&chi1, &chi1, kind).unwrap(), full);
        }
    }

    #[test]
    fn rank_one_split() {
        let (u, v) = try_split(&bp(&[((3, 2), 1), ((3, 3), 1)])).unwrap();
        assert_eq!(u, up(&[(3, 1)]));
        assert_eq!(v, up(&[(2, 1), (3, 1)]));
        assert!(try_split(&bp(&[((2, 2), 1), ((3, 3), 1)])).is_none());
        let p = BivarPoly::outer(&up(&[(2, 3), (4, -2)]), &up(&[(1, 2), (2, 4)]));
        let (u, v) = try_split(&p).unwrap();
        assert_eq!(BivarPoly::outer(&u, &v), p);
        assert!(try_split(&BivarPoly::zero()).is_none());
    }
}
