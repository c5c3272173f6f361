//! Exact fractions. Everything numeric in this crate is a [`Rational`];
//! floating point never appears outside of optional display rendering.

use num::BigInt;

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator. Construction through `Rational::new` (or [`rat`]) reduces;
/// text form is `p/q`, a bare integer when the denominator is 1, `0` for
/// zero. Parsing accepts both forms.
pub type Rational = num::BigRational;

/// Shorthand constructor from machine integers.
///
/// Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// n/1 as a rational.
pub fn rat_int(n: i64) -> Rational {
    rat(n, 1)
}

/// count/total where both are unsigned (prefix counts, indices).
pub fn rat_u(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Truncated decimal rendering with `digits` places, sign-aware.
/// A display aid only: the engine never computes in decimal.
pub fn decimal_string(q: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (q.numer() * &scale) / q.denom();
    let neg = scaled < BigInt::from(0);
    let abs = if neg { -scaled } else { scaled };
    let (int_part, frac_part) = (&abs / &scale, &abs % &scale);
    let mut frac = frac_part.to_string();
    while (frac.len() as u32) < digits {
        frac.insert(0, '0');
    }
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}
