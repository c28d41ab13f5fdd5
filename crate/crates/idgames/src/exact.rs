//! Exact rational arithmetic helpers.
//!
//! All optimal classical and no-signaling values in this crate are small
//! rationals and are kept exact end to end; floating point only enters on the
//! quantum side. `Rational` is arbitrary precision so that linear-programming
//! pivots can never overflow or round.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rational {
    Rational::from(BigInt::from(num))
}

/// Renders a rational in decimal.
///
/// Terminating expansions (denominator of the form 2^a * 5^b) are printed in
/// full; everything else is rounded half-up to six decimal places. This is
/// the convention used for histogram keys in reports, e.g. 7/16 -> "0.4375"
/// and 7/24 -> "0.291667".
pub fn render_decimal(r: &Rational) -> String {
    let num = r.numer().clone();
    let den = r.denom().clone();
    let neg = num.is_negative();
    let num = num.abs();

    // Number of decimal digits needed for an exact expansion, if one
    // exists: max of the 2- and 5-adic valuations of the denominator.
    let mut d = den.clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    let terminating = d == BigInt::from(1);
    let places = if terminating { twos.max(fives) } else { 6 };

    let scale = BigInt::from(10).pow(places);
    let scaled = &num * &scale;
    let mut q = &scaled / &den;
    let rem = &scaled % &den;
    // Round half-up on the digit after the last kept place.
    if !terminating && &rem * 2 >= den {
        q += 1;
    }

    let digits_str = q.to_string();
    let places = places as usize;
    let s = if places == 0 {
        digits_str
    } else if digits_str.len() <= places {
        format!("0.{:0>width$}", digits_str, width = places)
    } else {
        let (int_part, frac_part) = digits_str.split_at(digits_str.len() - places);
        format!("{int_part}.{frac_part}")
    };
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

/// Serialization form for exact fractions: numerator/denominator as strings
/// (JSON numbers cannot hold big integers) plus a decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionDoc {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl FractionDoc {
    pub fn of(r: &Rational) -> Self {
        FractionDoc {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: render_decimal(r),
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(num, den))
    }
}

/// Lossy conversion for reporting; exact values in scope are tiny.
pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
