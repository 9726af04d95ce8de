//! Sparse polynomials in `u` (and `v`) with exact coefficients.
//!
//! JSON form: `{"terms":[[e,"c"],…]}` for univariate and
//! `{"terms":[[eu,ev,"c"],…]}` for bivariate, exponents ascending.

pub mod calc;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, ToBigInt};
use num_traits::{FromPrimitive, Num, One, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Coefficient ring for sparse polynomials.
pub trait Coeff:
    Clone + Num + Signed + Ord + fmt::Debug + fmt::Display + FromStr + ToBigInt + FromPrimitive + Send + Sync
{
}

impl<C> Coeff for C where
    C: Clone + Num + Signed + Ord + fmt::Debug + fmt::Display + FromStr + ToBigInt + FromPrimitive + Send + Sync
{
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Univariate<C> {
    terms: BTreeMap<u32, C>,
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bivariate<C> {
    terms: BTreeMap<(u32, u32), C>,
}

fn accumulate<K: Ord, C: Coeff>(terms: &mut BTreeMap<K, C>, k: K, c: C) {
    if c.is_zero() {
        return;
    }
    match terms.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get().clone() + c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

impl<C: Coeff> Univariate<C> {
    pub fn zero() -> Self {
        Univariate {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(e: u32, c: C) -> Self {
        Self::from_terms([(e, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, C)>) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            accumulate(&mut map, e, c);
        }
        Univariate { terms: map }
    }

    /// Coefficients listed from exponent 0 upwards.
    pub fn from_dense(coeffs: Vec<C>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(e, c)| (e as u32, c)))
    }

    /// Dense coefficients from exponent 0 to the top degree.
    pub fn to_dense(&self) -> Vec<C> {
        let mut out = vec![C::zero(); self.max_exp().map_or(0, |d| d as usize + 1)];
        for (&e, c) in &self.terms {
            out[e as usize] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: u32) -> C {
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &C)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn eval_at_one(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.clone())
    }

    /// Value of the derivative at 1.
    pub fn derivative_at_one(&self) -> C {
        self.terms.iter().fold(C::zero(), |acc, (&e, c)| {
            acc + c.clone() * C::from_u32(e).expect("exponent fits the coefficient type")
        })
    }

    /// Horner evaluation in a real scalar type.
    pub fn eval<T: Real>(&self, x: &T) -> T {
        let Some(top) = self.max_exp() else {
            return T::zero();
        };
        let dense = self.to_dense();
        let mut acc = T::zero();
        for e in (0..=top as usize).rev() {
            acc = acc * x.clone() + T::from_bigint(&dense[e].to_bigint().expect("integral"));
        }
        acc
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (e, c.clone() * k.clone())))
    }

    pub fn shift(&self, by: u32) -> Self {
        Univariate {
            terms: self.terms.iter().map(|(&e, c)| (e + by, c.clone())).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms.iter().map(|(e, c)| json!([e, c.to_string()])).collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let terms = json_terms(v)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            match t.as_array().map(Vec::as_slice) {
                Some([e, c]) => out.push((json_exp(e)?, json_coeff(c)?)),
                _ => return Err(json_err("expected [exp, \"coeff\"]")),
            }
        }
        Ok(Self::from_terms(out))
    }
}

impl<C: Coeff> Bivariate<C> {
    pub fn zero() -> Self {
        Bivariate {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(eu: u32, ev: u32, c: C) -> Self {
        Self::from_terms([((eu, ev), c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), C)>) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            accumulate(&mut map, e, c);
        }
        Bivariate { terms: map }
    }

    /// `U(u)·V(v)`.
    pub fn outer(u: &Univariate<C>, v: &Univariate<C>) -> Self {
        Self::from_terms(
            u.terms()
                .flat_map(|(a, p)| v.terms().map(move |(b, q)| ((a, b), p.clone() * q.clone()))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, eu: u32, ev: u32) -> C {
        self.terms.get(&(eu, ev)).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &C)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_u_exp(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, _)| a).min()
    }

    pub fn min_v_exp(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, b)| b).min()
    }

    pub fn max_u_exp(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, _)| a).max()
    }

    pub fn max_v_exp(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, b)| b).max()
    }

    /// `[v^ev] P` as a polynomial in `u`.
    pub fn v_slice(&self, ev: u32) -> Univariate<C> {
        Univariate::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, b), _)| b == ev)
                .map(|(&(a, _), c)| (a, c.clone())),
        )
    }

    /// `[u^eu] P` as a polynomial in `v`.
    pub fn u_slice(&self, eu: u32) -> Univariate<C> {
        Univariate::from_terms(
            self.terms
                .iter()
                .filter(|(&(a, _), _)| a == eu)
                .map(|(&(_, b), c)| (b, c.clone())),
        )
    }

    /// `P(u, 1)`.
    pub fn u_marginal(&self) -> Univariate<C> {
        Univariate::from_terms(self.terms.iter().map(|(&(a, _), c)| (a, c.clone())))
    }

    /// `P(1, v)`.
    pub fn v_marginal(&self) -> Univariate<C> {
        Univariate::from_terms(self.terms.iter().map(|(&(_, b), c)| (b, c.clone())))
    }

    pub fn eval_at_one(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.clone())
    }

    pub fn swap_vars(&self) -> Self {
        Bivariate {
            terms: self.terms.iter().map(|(&(a, b), c)| ((b, a), c.clone())).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((a, b), c)| json!([a, b, c.to_string()]))
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let terms = json_terms(v)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            match t.as_array().map(Vec::as_slice) {
                Some([a, b, c]) => out.push(((json_exp(a)?, json_exp(b)?), json_coeff(c)?)),
                _ => return Err(json_err("expected [uExp, vExp, \"coeff\"]")),
            }
        }
        Ok(Self::from_terms(out))
    }
}

fn json_err(msg: &str) -> Error {
    Error::Parse {
        line: 0,
        msg: msg.to_string(),
    }
}

fn json_terms(v: &Value) -> Result<&Vec<Value>> {
    v.get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| json_err("missing `terms` array"))
}

fn json_exp(v: &Value) -> Result<u32> {
    v.as_u64()
        .and_then(|e| u32::try_from(e).ok())
        .ok_or_else(|| json_err("exponent must be a non-negative integer"))
}

fn json_coeff<C: Coeff>(v: &Value) -> Result<C> {
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| json_err("coefficient must be a decimal string"))
}

impl<C: Coeff> Add for &Univariate<C> {
    type Output = Univariate<C>;
    fn add(self, rhs: Self) -> Univariate<C> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            accumulate(&mut out.terms, e, c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &Univariate<C> {
    type Output = Univariate<C>;
    fn neg(self) -> Univariate<C> {
        Univariate {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Sub for &Univariate<C> {
    type Output = Univariate<C>;
    fn sub(self, rhs: Self) -> Univariate<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Mul for &Univariate<C> {
    type Output = Univariate<C>;
    fn mul(self, rhs: Self) -> Univariate<C> {
        let mut out = BTreeMap::new();
        for (&a, p) in &self.terms {
            for (&b, q) in &rhs.terms {
                accumulate(&mut out, a + b, p.clone() * q.clone());
            }
        }
        Univariate { terms: out }
    }
}

impl<C: Coeff> Add for &Bivariate<C> {
    type Output = Bivariate<C>;
    fn add(self, rhs: Self) -> Bivariate<C> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            accumulate(&mut out.terms, e, c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &Bivariate<C> {
    type Output = Bivariate<C>;
    fn mul(self, rhs: Self) -> Bivariate<C> {
        let mut out = BTreeMap::new();
        for (&(a, b), p) in &self.terms {
            for (&(c, d), q) in &rhs.terms {
                accumulate(&mut out, (a + c, b + d), p.clone() * q.clone());
            }
        }
        Bivariate { terms: out }
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, c: &dyn fmt::Display, is_one: bool, vars: &[(&str, u32)]) -> fmt::Result {
    let factors: Vec<String> = vars
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(x, e)| if *e == 1 { x.to_string() } else { format!("{x}^{e}") })
        .collect();
    match (factors.is_empty(), is_one) {
        (true, _) => write!(f, "{c}"),
        (false, true) => write!(f, "{}", factors.join("*")),
        (false, false) => write!(f, "{c}*{}", factors.join("*")),
    }
}

impl<C: Coeff> fmt::Display for Univariate<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            fmt_monomial(f, c, c.is_one(), &[("u", e)])?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Display for Bivariate<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(a, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            fmt_monomial(f, c, c.is_one(), &[("u", a), ("v", b)])?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Univariate<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> fmt::Debug for Bivariate<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type UnivarPoly = Univariate<BigInt>;
pub type BivarPoly = Bivariate<BigInt>;

/// `u^e` with coefficient 1.
pub fn u_pow(e: u32) -> UnivarPoly {
    Univariate::monomial(e, BigInt::one())
}
