//! Kernel-method numerics for `F(x, u) = Σ_k Q_k(u) x^k`.
//!
//! Everything is generic over [`Real`]: `f64` for quick sweeps,
//! `BigRational` when the precision has to exceed a double.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{dc_count, QkTable};
use crate::error::{Error, Result};
use crate::scalar::{bisect, effective_bits, Real};

/// The two small roots of the kernel at `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelPoint<T> {
    pub x: T,
    /// In `(1, 2)`.
    pub u1: T,
    /// In `(0, 1)`.
    pub u2: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticConstants<T> {
    pub c1: T,
    pub c2: T,
    pub d1: T,
    pub d2: T,
    /// `9 c2 / (2√π)`.
    pub theorem_constant: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticRow<T> {
    pub k: usize,
    pub exact: BigInt,
    pub estimate: T,
    pub ratio: T,
}

fn int<T: Real>(v: i64) -> T {
    T::from_i64(v).expect("small integer")
}

/// `K(x, u) = (u−1)²(1 − x u²) − x u³`.
pub fn kernel<T: Real>(x: &T, u: &T) -> T {
    let um1 = u.clone() - T::one();
    let u2 = u.clone() * u.clone();
    um1.clone() * um1 * (T::one() - x.clone() * u2.clone()) - x.clone() * u2 * u.clone()
}

/// Brackets the kernel roots in `(0, 1)` and `(1, 2)` by bisection.
pub fn small_roots<T: Real>(x: &T, bits: u32) -> Result<KernelPoint<T>> {
    if !(x > &T::zero() && x.clone() * int::<T>(12) < T::one()) {
        return Err(Error::OutOfRange {
            what: "x (must lie in (0, 1/12))",
            value: format!("{:?}", x.to_f64()),
        });
    }
    let bits = effective_bits::<T>(bits.max(128)) + 8;
    let k = |u: &T| kernel(x, u);
    let u2 = bisect(T::zero(), T::one(), bits, k);
    let u1 = bisect(T::one(), int(2), bits, k);
    Ok(KernelPoint { x: x.clone(), u1, u2 })
}

/// `F(x, 1)` and `∂_u F(x, 1)` from the kernel roots.
pub fn f_closed<T: Real>(kp: &KernelPoint<T>) -> Result<(T, T)> {
    let (u1, u2) = (kp.u1.clone(), kp.u2.clone());
    let one = T::one();
    let two = int::<T>(2);
    let den = u1.clone() + u2.clone() - u1.clone() * u2.clone();
    let guard = T::from_f64(1e-20).unwrap();
    if den.clone().abs() < guard {
        return Err(Error::NumericalInstability(format!(
            "u1 + u2 - u1*u2 vanishes at x = {:?}",
            kp.x.to_f64()
        )));
    }
    let f = (u1.clone() - one.clone()) * (one.clone() - u2.clone()) * (u1.clone() + u2.clone() - one.clone())
        / den.clone();
    let p = u1.clone() * u2.clone();
    let df = (p.clone() * (p - u1.clone() - u2.clone() + two.clone()) + u1.clone() * u1.clone()
        + u2.clone() * u2.clone()
        - two.clone() * u1
        - two * u2
        + one)
        / den;
    Ok((f, df))
}

/// The singular-expansion constants, with `√21` and `√π` at `bits`.
pub fn constants<T: Real>(bits: u32) -> AsymptoticConstants<T> {
    let bits = effective_bits::<T>(bits) + 16;
    let s = int::<T>(21).sqrt_prec(bits);
    let seven_minus = int::<T>(7) - s.clone();
    let c1 = (s.clone() * int(3) - int(13)) / seven_minus.clone();
    let c2 = int::<T>(12) * s.clone() * (int::<T>(5) - s.clone())
        / (int::<T>(7) * seven_minus.clone() * seven_minus.clone());
    let d1 = (int::<T>(53) - s * int(11)) / seven_minus;
    let d2 = c2.clone() * int(4);
    let sqrt_pi = T::pi(bits).sqrt_prec(bits);
    let theorem_constant = c2.clone() * int(9) / (int::<T>(2) * sqrt_pi);
    AsymptoticConstants {
        c1,
        c2,
        d1,
        d2,
        theorem_constant,
    }
}

/// `Q_k` divided by `12^k`, so that series sums stay in range for `f64`.
pub struct ScaledSeries<T> {
    scaled: Vec<Vec<T>>,
}

impl<T: Real> ScaledSeries<T> {
    pub fn new(table: &QkTable, terms: usize) -> Self {
        let terms = terms.min(table.kmax());
        let mut pow = BigInt::one();
        let scaled = (1..=terms)
            .map(|k| {
                pow *= 12;
                table
                    .q(k)
                    .to_dense()
                    .iter()
                    .map(|c| if c.is_zero() { T::zero() } else { T::from_ratio(c, &pow) })
                    .collect()
            })
            .collect();
        ScaledSeries { scaled }
    }

    pub fn terms(&self) -> usize {
        self.scaled.len()
    }

    /// `Σ_{k ≤ terms} Q_k(u) x^k`.
    pub fn f(&self, x: &T, u: &T) -> T {
        let y = x.clone() * int(12);
        let mut sum = T::zero();
        let mut yk = T::one();
        for coeffs in &self.scaled {
            yk = yk * y.clone();
            let mut q = T::zero();
            for c in coeffs.iter().rev() {
                q = q * u.clone() + c.clone();
            }
            sum = sum + yk.clone() * q;
        }
        sum
    }
}

/// `Σ_{k ≤ terms} Q_k(1) x^k`.
pub fn f_series_at_one<T: Real>(table: &QkTable, x: &T, terms: usize) -> T {
    power_series(x, (1..=terms.min(table.kmax())).map(|k| table.at_one(k)))
}

/// `Σ_{k ≤ terms} Q_k′(1) x^k`.
pub fn df_series_at_one<T: Real>(table: &QkTable, x: &T, terms: usize) -> T {
    power_series(x, (1..=terms.min(table.kmax())).map(|k| table.deriv_at_one(k)))
}

fn power_series<'a, T: Real>(x: &T, coeffs: impl Iterator<Item = &'a BigInt>) -> T {
    let mut sum = T::zero();
    let mut xk = T::one();
    for c in coeffs {
        xk = xk * x.clone();
        sum = sum + xk.clone() * T::from_bigint(c);
    }
    sum
}

/// `F·K − [u³(u−1)²x − (u⁴−u³+u²)x F(x,1) − x u²(u−1) ∂_uF(x,1)]` with the
/// truncated series for `F(x, u)`.
pub fn functional_residual<T: Real>(series: &ScaledSeries<T>, x: &T, u: &T, f1: &T, df1: &T) -> T {
    let um1 = u.clone() - T::one();
    let u2 = u.clone() * u.clone();
    let u3 = u2.clone() * u.clone();
    let u4 = u3.clone() * u.clone();
    let lhs = series.f(x, u) * kernel(x, u);
    let rhs = u3.clone() * um1.clone() * um1.clone() * x.clone()
        - (u4 - u3 + u2.clone()) * x.clone() * f1.clone()
        - x.clone() * u2 * um1 * df1.clone();
    lhs - rhs
}

/// Exact counts against `C·12^{k−2}·k^{−3/2}`.
pub fn asymptotic_report<T: Real>(
    table: &QkTable,
    ks: &[usize],
    consts: &AsymptoticConstants<T>,
    bits: u32,
) -> Result<Vec<AsymptoticRow<T>>> {
    let bits = effective_bits::<T>(bits);
    ks.iter()
        .map(|&k| {
            let exact = dc_count(table, k)?;
            let pow = BigInt::from(12).pow(k as u32 - 2);
            let kt = int::<T>(k as i64);
            let k32 = kt.clone() * kt.sqrt_prec(bits);
            let scaled = consts.theorem_constant.clone() / k32;
            let estimate = scaled.clone() * T::from_bigint(&pow);
            let ratio = T::from_ratio(&exact, &pow) / scaled;
            Ok(AsymptoticRow {
                k,
                exact,
                estimate,
                ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double_circle::qk_sequence;
    use num_rational::BigRational;
    use num_traits::{Signed, ToPrimitive};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn kernel_special_values() {
        let x = rat(1, 20);
        assert_eq!(kernel(&x, &rat(0, 1)), rat(1, 1));
        assert_eq!(kernel(&x, &rat(1, 1)), -x.clone());
        assert_eq!(kernel(&x, &rat(2, 1)), rat(1, 1) - x * rat(12, 1));
    }

    #[test]
    fn roots_are_bracketed_and_tight() {
        let x = rat(1, 20);
        let kp = small_roots(&x, 200).unwrap();
        let tol = BigRational::new(1.into(), BigInt::from(10).pow(30));
        assert!(kernel(&x, &kp.u1).abs() < tol);
        assert!(kernel(&x, &kp.u2).abs() < tol);
        assert!(kp.u2 > rat(0, 1) && kp.u2 < rat(1, 1));
        assert!(kp.u1 > rat(1, 1) && kp.u1 < rat(2, 1));
        assert!((kp.u1.to_f64().unwrap() - 1.38196601125).abs() < 1e-10);
        assert!((kp.u2.to_f64().unwrap() - 0.82842712475).abs() < 1e-10);
        assert!(small_roots(&rat(1, 12), 64).is_err());
        assert!(small_roots(&rat(0, 1), 64).is_err());
    }

    #[test]
    fn roots_near_zero() {
        let x = 1e-8f64;
        let kp = small_roots(&x, 64).unwrap();
        assert!(((kp.u1 - 1.0) / x.sqrt() - 1.0).abs() < 1e-3);
        assert!(((1.0 - kp.u2) / x.sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn closed_forms_match_series() {
        let table = qk_sequence(80).unwrap();
        let x = 0.05f64;
        let (f, df) = f_closed(&small_roots(&x, 64).unwrap()).unwrap();
        assert!((f - f_series_at_one(&table, &x, 80)).abs() < 1e-10);
        assert!((df - df_series_at_one(&table, &x, 80)).abs() < 1e-9);
    }

    #[test]
    fn constant_values() {
        let c: AsymptoticConstants<BigRational> = constants(200);
        assert_eq!(c.c1.to_decimal(12), "0.309307341416");
        assert_eq!(c.d1.to_decimal(11), "1.07207797575");
        assert_eq!(c.d2, &c.c2 * rat(4, 1));
        assert_eq!(c.theorem_constant.to_decimal(15), "1.424631015686868");
        let f: AsymptoticConstants<f64> = constants(64);
        assert!((f.c2 - 0.561131717750).abs() < 1e-11);
    }

    #[test]
    fn residual_is_small() {
        let table = qk_sequence(200).unwrap();
        let series = ScaledSeries::<f64>::new(&table, 200);
        let x = 0.05f64;
        let (f1, df1) = f_closed(&small_roots(&x, 64).unwrap()).unwrap();
        for u in [0.3, 0.9, 1.5] {
            assert!(functional_residual(&series, &x, &u, &f1, &df1).abs() < 1e-12);
        }
    }
}
