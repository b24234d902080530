//! Exact arithmetic primitives shared by every module.
//!
//! All bound values are arbitrary-precision rationals kept in lowest terms
//! with a positive denominator; nothing in the pipeline ever rounds.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Shorthand for small integer literals.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Rational from an integer.
pub fn rat_int(v: impl Into<Int>) -> Rational {
    Rational::from_integer(v.into())
}

/// Rational p/q. Panics on q = 0.
pub fn rat(p: impl Into<Int>, q: impl Into<Int>) -> Rational {
    Rational::new(p.into(), q.into())
}

/// n^e for a signed exponent, as an exact rational. `0^negative` panics.
pub fn rational_pow(base: &Int, exp: i64) -> Rational {
    if exp >= 0 {
        rat_int(base.pow(exp as u32))
    } else {
        Rational::new(Int::one(), base.pow((-exp) as u32))
    }
}

/// Serialize as `p/q`; round-trips exactly through `parse_exact`.
pub fn to_exact_string(r: &Rational) -> String {
    // the denominator is always spelled out, so integers read "28/1"
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse the `to_exact_string` form.
pub fn parse_exact(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.parse().ok()?;
            let q: Int = q.parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Decimal approximation with `sig` significant digits, computed by exact
/// long division (round half away from zero). Labeled approximate by callers.
pub fn to_decimal_string(r: &Rational, sig: usize) -> String {
    let sig = sig.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let p = r.numer().abs();
    let q = r.denom().clone();

    // decimal exponent: number of digits before the point, may be <= 0
    let mut exp10: i64 = (digits10(&p) as i64) - (digits10(&q) as i64);
    // refine: p/q in [10^(exp10-1), 10^exp10)
    if pow10_cmp(&p, &q, exp10) {
        exp10 += 1;
    }

    // mantissa = round(p * 10^(sig - exp10) / q), an integer with `sig` digits
    let shift = sig as i64 - exp10;
    let (num, den) = if shift >= 0 {
        (p * Int::from(10u32).pow(shift as u32), q)
    } else {
        (p, q * Int::from(10u32).pow((-shift) as u32))
    };
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    let mut mantissa = quot;
    if &rem * 2 >= den {
        mantissa += 1;
    }
    let mut digits = mantissa.to_string();
    if digits.len() > sig {
        // rounding carried over (e.g. 999.9 -> 1000)
        digits.truncate(sig);
        exp10 += 1;
    }

    let body = format_mantissa(&digits, exp10);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn format_mantissa(digits: &str, exp10: i64) -> String {
    let sig = digits.len() as i64;
    if !(-6..=21).contains(&exp10) {
        // scientific form for extreme magnitudes
        let mut m = String::new();
        m.push_str(&digits[..1]);
        let frac = digits[1..].trim_end_matches('0');
        if !frac.is_empty() {
            m.push('.');
            m.push_str(frac);
        }
        format!("{m}e{}", exp10 - 1)
    } else if exp10 >= sig {
        format!("{digits}{}", "0".repeat((exp10 - sig) as usize))
    } else if exp10 >= 1 {
        let (int_part, frac_part) = digits.split_at(exp10 as usize);
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    } else {
        let frac = digits.trim_end_matches('0');
        format!("0.{}{}", "0".repeat((-exp10) as usize), frac)
    }
}

/// Number of decimal digits of a positive integer.
fn digits10(v: &Int) -> usize {
    v.to_string().trim_start_matches('-').len()
}

/// true iff p/q >= 10^exp10
fn pow10_cmp(p: &Int, q: &Int, exp10: i64) -> bool {
    if exp10 >= 0 {
        *p >= q * Int::from(10u32).pow(exp10 as u32)
    } else {
        p * Int::from(10u32).pow((-exp10) as u32) >= *q
    }
}

/// Natural log of a positive rational, robust to magnitudes beyond f64 range.
pub fn ln_approx(r: &Rational) -> f64 {
    assert!(r.is_positive(), "ln of a non-positive rational");
    ln_int(r.numer()) - ln_int(r.denom())
}

fn ln_int(v: &Int) -> f64 {
    debug_assert!(v.sign() == Sign::Plus);
    let bits = v.bits();
    if bits <= 52 {
        return v.to_f64().unwrap().ln();
    }
    // v = top * 2^(bits-52) with top holding the leading 52 bits
    let top = (v >> (bits - 52)).to_f64().unwrap();
    top.ln() + (bits - 52) as f64 * std::f64::consts::LN_2
}
