//! The `Q_k` polynomials of the `χ_k` family and exact double-circle counts.

pub mod analytics;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::calc::join_q;
use crate::poly::{u_pow, UnivarPoly};

/// `Q_1..Q_kmax` with `Q_k(1)`, `[u²]Q_k` and `Q_k′(1)` cached.
#[derive(Clone, Debug)]
pub struct QkTable {
    polys: Vec<UnivarPoly>,
    at_one: Vec<BigInt>,
    u2: Vec<BigInt>,
    deriv: Vec<BigInt>,
}

impl QkTable {
    pub fn kmax(&self) -> usize {
        self.polys.len()
    }

    fn idx(&self, k: usize) -> usize {
        assert!(
            (1..=self.kmax()).contains(&k),
            "k = {k} outside 1..={}",
            self.kmax()
        );
        k - 1
    }

    pub fn q(&self, k: usize) -> &UnivarPoly {
        &self.polys[self.idx(k)]
    }

    pub fn at_one(&self, k: usize) -> &BigInt {
        &self.at_one[self.idx(k)]
    }

    pub fn u2_coeff(&self, k: usize) -> &BigInt {
        &self.u2[self.idx(k)]
    }

    pub fn deriv_at_one(&self, k: usize) -> &BigInt {
        &self.deriv[self.idx(k)]
    }

    fn push(&mut self, q: UnivarPoly) {
        self.at_one.push(q.eval_at_one());
        self.u2.push(q.coeff(2));
        self.deriv.push(q.derivative_at_one());
        self.polys.push(q);
    }

    /// Extends the table in place up to `kmax`.
    pub fn extend_to(&mut self, kmax: usize) -> Result<()> {
        let seed = u_pow(3);
        while self.kmax() < kmax {
            let next = join_q(self.polys.last().unwrap(), &seed)?;
            self.push(next);
        }
        Ok(())
    }
}

/// `Q_1 = u³`, `Q_{k+1} = Σ_d [u^d]Q_k · N_{d,3}`.
pub fn qk_sequence(kmax: usize) -> Result<QkTable> {
    if kmax < 1 {
        return Err(Error::OutOfRange {
            what: "kmax",
            value: kmax.to_string(),
        });
    }
    let mut table = QkTable {
        polys: Vec::with_capacity(kmax),
        at_one: Vec::with_capacity(kmax),
        u2: Vec::with_capacity(kmax),
        deriv: Vec::with_capacity(kmax),
    };
    table.push(u_pow(3));
    table.extend_to(kmax)?;
    Ok(table)
}

/// Exact division by `u − 1`; `None` when the remainder is nonzero.
fn div_by_u_minus_one(dense: &[BigInt]) -> Option<Vec<BigInt>> {
    if dense.is_empty() {
        return Some(Vec::new());
    }
    let n = dense.len() - 1;
    let mut quot = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (1..=n).rev() {
        carry += &dense[i];
        quot[i - 1] = carry.clone();
    }
    (carry + &dense[0]).is_zero().then_some(quot)
}

/// The next `Q` from the rational closed form
/// `[Q(u)(u²(u−1)²+u³) − Q(1)(u⁴−u³+u²) − Q′(1)u²(u−1)] / (u−1)²`.
pub fn qk_step_closedform(q: &UnivarPoly) -> Result<UnivarPoly> {
    let poly = |terms: &[(u32, i64)]| UnivarPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))));
    let factor = poly(&[(4, 1), (3, -2), (2, 1)]);
    let factor = &factor + &poly(&[(3, 1)]);
    let num = &(q * &factor) - &poly(&[(4, 1), (3, -1), (2, 1)]).scale(&q.eval_at_one());
    let num = &num - &poly(&[(3, 1), (2, -1)]).scale(&q.derivative_at_one());
    let quot = div_by_u_minus_one(&num.to_dense())
        .and_then(|once| div_by_u_minus_one(&once))
        .ok_or_else(|| {
            Error::InternalInvariantViolation("closed-form numerator not divisible by (u-1)^2".into())
        })?;
    Ok(UnivarPoly::from_dense(quot))
}

/// Triangulations of the double circle on `2k` points:
/// `Q_{k−1}(1) − [u²]Q_{k−1}`.
pub fn dc_count(table: &QkTable, k: usize) -> Result<BigInt> {
    if k < 3 {
        return Err(Error::OutOfRange {
            what: "double circle size",
            value: k.to_string(),
        });
    }
    if k - 1 > table.kmax() {
        return Err(Error::OutOfRange {
            what: "double circle size beyond the Q table",
            value: k.to_string(),
        });
    }
    Ok(table.at_one(k - 1) - table.u2_coeff(k - 1))
}

/// [`dc_count`] with a fresh table.
pub fn dc_count_for(k: usize) -> Result<BigInt> {
    let table = qk_sequence(k.saturating_sub(1).max(1))?;
    dc_count(&table, k)
}

/// `Q_k′(1) − Q_k(1)`, which must equal `[u²]Q_{k+1}`.
pub fn second_slice_prediction(table: &QkTable, k: usize) -> BigInt {
    table.deriv_at_one(k) - table.at_one(k)
}
