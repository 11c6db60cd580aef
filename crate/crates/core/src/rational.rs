//! Exact rationals used for Lebesgue measures and diagonal state weights.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::math;

pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-exp` exactly.
pub fn pow2_neg(exp: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << exp as usize)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits: String = [whole.trim_start_matches('-'), frac].concat();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Canonical `"p/q"` text (`"p"` for integers).
pub fn format(r: &Rational) -> String {
    use alloc::string::ToString;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(if n.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

pub fn to_f64(r: &Rational) -> f64 {
    // Scale numerator and denominator separately so tiny dyadic values do not
    // flush to zero before the division.
    let nb = r.numer().bits();
    let db = r.denom().bits();
    if nb < 1000 && db < 1000 {
        return bigint_to_f64(r.numer()) / bigint_to_f64(r.denom());
    }
    let l = log2_abs(r);
    let s = if r.is_negative() { -1.0 } else { 1.0 };
    s * math::exp2(l)
}

fn log2_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n.abs() >> shift as usize).to_f64().unwrap_or(f64::INFINITY);
    math::log2(top) + shift as f64
}

fn log2_abs(r: &Rational) -> f64 {
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}

/// `log2(r)` for `r > 0`, exact when `r` is a power of two. Returns `-inf` for zero.
pub fn log2(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    if let (Some(a), Some(b)) = (power_of_two(r.numer()), power_of_two(r.denom())) {
        return a as f64 - b as f64;
    }
    log2_abs(r)
}

fn power_of_two(n: &BigInt) -> Option<u64> {
    if !n.is_positive() {
        return None;
    }
    let tz = n.trailing_zeros()?;
    if n.bits() == tz + 1 {
        Some(tz)
    } else {
        None
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued fractions). Small-denominator rationals are recovered exactly.
pub fn approximate(x: f64, max_den: u64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let neg = x < 0.0;
    let mut v = math::abs(x);
    let (mut p0, mut q0, mut p1, mut q1): (u128, u128, u128, u128) = (0, 1, 1, 0);
    for _ in 0..64 {
        let a = libm::floor(v);
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as u128 {
            // Semiconvergent check: pick the closer of the last convergent and
            // the largest admissible semiconvergent.
            let k = (max_den as u128 - q0) / q1.max(1);
            let ps = k * p1 + p0;
            let qs = k * q1 + q0;
            let target = math::abs(x);
            let e1 = math::abs(p1 as f64 / q1.max(1) as f64 - target);
            let es = math::abs(ps as f64 / qs.max(1) as f64 - target);
            if qs > 0 && es < e1 {
                p1 = ps;
                q1 = qs;
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - libm::floor(v);
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::zero();
    }
    let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -r
    } else {
        r
    }
}

/// Least common multiple of the denominators.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, r| acc + r)
}

pub fn to_f64_vec(values: &[Rational]) -> Vec<f64> {
    values.iter().map(to_f64).collect()
}
