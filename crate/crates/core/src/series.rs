//! Truncated power series with integer coefficients, and the arc-state
//! generating functions f (Catalan), e (central binomial) and f̃ (Motzkin).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::states::binomial;

pub const DEFAULT_ORDER: usize = 40;

/// Coefficients of z^0 .. z^(order-1); everything from z^order on is unknown.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![BigInt::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order > 0 {
            s.coeffs[0] = BigInt::one();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of z^i. Panics past the truncation order rather than
    /// returning a value that is not actually known.
    pub fn coeff(&self, i: usize) -> BigInt {
        assert!(i < self.order(), "coefficient z^{} beyond truncation order {}", i, self.order());
        self.coeffs[i].clone()
    }

    pub fn get(&self, i: usize) -> Option<&BigInt> {
        self.coeffs.get(i)
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series { coeffs: (0..order).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn scale(&self, c: i64) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order];
        for (i, a) in self.coeffs.iter().enumerate().take(order) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order - i) {
                out[i + j] += a * b;
            }
        }
        Series { coeffs: out }
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: usize) -> Series {
        let order = self.order();
        let mut out = vec![BigInt::zero(); order];
        for i in k..order {
            out[i] = self.coeffs[i - k].clone();
        }
        Series { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut out = Series::one(self.order());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse; requires constant term ±1 so that the result
    /// stays integral.
    pub fn inverse(&self) -> Option<Series> {
        let c0 = self.coeffs.first()?;
        if !c0.abs().is_one() {
            return None;
        }
        let order = self.order();
        let mut out = vec![BigInt::zero(); order];
        out[0] = c0.clone();
        for i in 1..order {
            let mut acc = BigInt::zero();
            for j in 1..=i {
                acc += &self.coeffs[j] * &out[i - j];
            }
            out[i] = -acc * c0;
        }
        Some(Series { coeffs: out })
    }
}

/// f = 1 + z f², iterated to a fixed point.
pub fn series_f(order: usize) -> Series {
    let mut f = Series::one(order);
    for _ in 0..order {
        f = Series::one(order).add(&f.mul(&f).shift(1));
    }
    f
}

/// e = 1 + 2 z f e.
pub fn series_e(order: usize) -> Series {
    let f = series_f(order);
    let zf2 = f.shift(1).scale(2);
    let mut e = Series::one(order);
    for _ in 0..order {
        e = Series::one(order).add(&zf2.mul(&e));
    }
    e
}

/// f̃ = 1 + z̃ f̃ + z̃² f̃².
pub fn series_f_dilute(order: usize) -> Series {
    let mut f = Series::one(order);
    for _ in 0..order {
        f = Series::one(order).add(&f.shift(1)).add(&f.mul(&f).shift(2));
    }
    f
}

/// Catalan numbers (2j)!/(j!(j+1)!).
pub fn catalan_closed(order: usize) -> Series {
    Series::from_coeffs(
        (0..order as i64)
            .map(|j| BigInt::from(binomial(2 * j, j) / (j as u128 + 1)))
            .collect(),
    )
}

pub fn central_binomial_closed(order: usize) -> Series {
    Series::from_coeffs((0..order as i64).map(|j| BigInt::from(binomial(2 * j, j))).collect())
}

/// Motzkin numbers via M_j = Σ_k C(j, 2k) Catalan_k.
pub fn motzkin_closed(order: usize) -> Series {
    Series::from_coeffs(
        (0..order as i64)
            .map(|j| {
                (0..=j / 2)
                    .map(|k| BigInt::from(binomial(j, 2 * k)) * BigInt::from(binomial(2 * k, k) / (k as u128 + 1)))
                    .sum()
            })
            .collect(),
    )
}

/// The generating functions shared by every E family.
#[derive(Clone, Debug)]
pub struct SeriesCtx {
    pub order: usize,
    pub f: Series,
    pub e: Series,
    pub f_inv: Series,
    pub f_dilute: Series,
    /// 1/(1-4z)
    pub geom4: Series,
}

impl SeriesCtx {
    pub fn new(order: usize) -> Self {
        let f = series_f(order);
        let f_inv = f.inverse().expect("f has constant term 1");
        let geom4 = Series::from_coeffs((0..order).map(|i| BigInt::from(4).pow(i as u32)).collect());
        SeriesCtx {
            order,
            e: series_e(order),
            f_dilute: series_f_dilute(order),
            f,
            f_inv,
            geom4,
        }
    }

    /// f^p for any integer p.
    pub fn f_pow(&self, p: i64) -> Series {
        if p >= 0 {
            self.f.pow(p as u32)
        } else {
            self.f_inv.pow((-p) as u32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &Series, n: usize) -> Vec<i64> {
        (0..n).map(|i| i64::try_from(s.coeff(i)).unwrap()).collect()
    }

    #[test]
    fn known_prefixes() {
        assert_eq!(ints(&series_f(10), 6), vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(ints(&series_e(10), 5), vec![1, 2, 6, 20, 70]);
        assert_eq!(ints(&series_f_dilute(10), 7), vec![1, 1, 2, 4, 9, 21, 51]);
    }

    #[test]
    fn iteration_matches_closed_forms() {
        let n = DEFAULT_ORDER;
        assert_eq!(series_f(n), catalan_closed(n));
        assert_eq!(series_e(n), central_binomial_closed(n));
        assert_eq!(series_f_dilute(n), motzkin_closed(n));
    }

    #[test]
    fn inverse_of_f_is_one_minus_zf() {
        let ctx = SeriesCtx::new(20);
        let one_minus_zf = Series::one(20).add(&ctx.f.shift(1).scale(-1));
        assert_eq!(ctx.f_inv, one_minus_zf);
        assert_eq!(ctx.f.mul(&ctx.f_inv), Series::one(20));
        // e^2 = 1/(1-4z)
        assert_eq!(ctx.e.mul(&ctx.e), ctx.geom4);
    }

    #[test]
    #[should_panic]
    fn reading_past_truncation_panics() {
        series_f(5).coeff(5);
    }
}
