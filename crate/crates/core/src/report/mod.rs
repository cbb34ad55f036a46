//! File formats, rate tables and the command-line front end.

pub mod cli;
pub mod plan_file;
pub mod tables;
pub mod trace_file;

use num_traits::{Signed, Zero};

use crate::array::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Ties round away from zero.
    HalfUp,
    Truncate,
}

/// Fixed-point rendering of an exact rational with `places` decimals.
pub fn format_decimal(value: Rational, places: u32, mode: Rounding) -> String {
    let scale = 10i64.pow(places);
    let magnitude = value.abs() * Rational::from_integer(scale);
    let mut units = magnitude.trunc().to_integer();
    if mode == Rounding::HalfUp && magnitude.fract() >= Rational::new(1, 2) {
        units += 1;
    }
    let sign = if value.is_negative() && !units.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{units}");
    }
    let int = units / scale;
    let frac = units % scale;
    format!("{sign}{int}.{frac:0width$}", width = places as usize)
}

/// Like [`format_decimal`] but integers print without a fraction.
pub fn format_printed(value: Rational, places: u32, mode: Rounding) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format_decimal(value, places, mode)
    }
}

/// `p/q`, or `p` when the denominator is 1.
pub fn format_ratio(value: Rational) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `12`, `12.5` or `25/2`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let bad = || format!("'{text}' is not a number");
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    match text.split_once('.') {
        None => text.parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
        Some((int, frac)) => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int: i64 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let scale = 10i64.pow(frac.len() as u32);
            let frac: i64 = frac.parse().map_err(|_| bad())?;
            let magnitude = Rational::from_integer(int.abs()) + Rational::new(frac, scale);
            Ok(if negative { -magnitude } else { magnitude })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rounding_modes() {
        assert_eq!(format_decimal(q(800, 9), 2, Rounding::HalfUp), "88.89");
        assert_eq!(format_decimal(q(6400, 23), 1, Rounding::HalfUp), "278.3");
        assert_eq!(format_decimal(q(17, 16), 3, Rounding::Truncate), "1.062");
        assert_eq!(format_decimal(q(17, 16), 3, Rounding::HalfUp), "1.063");
        assert_eq!(format_decimal(q(65, 64), 3, Rounding::Truncate), "1.015");
        assert_eq!(format_decimal(q(9, 8), 3, Rounding::Truncate), "1.125");
        assert_eq!(format_decimal(q(-5, 4), 1, Rounding::HalfUp), "-1.3");
        assert_eq!(format_decimal(q(-1, 1000), 2, Rounding::HalfUp), "0.00");
        assert_eq!(format_decimal(q(7, 2), 0, Rounding::HalfUp), "4");
        assert_eq!(format_decimal(q(1, 50), 2, Rounding::Truncate), "0.02");
    }

    #[test]
    fn printed_integers() {
        assert_eq!(format_printed(q(100, 1), 2, Rounding::HalfUp), "100");
        assert_eq!(format_printed(q(33, 10), 2, Rounding::HalfUp), "3.30");
        assert_eq!(format_ratio(q(64, 23)), "64/23");
        assert_eq!(format_ratio(q(4, 2)), "2");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("100").unwrap(), q(100, 1));
        assert_eq!(parse_rational("12.5").unwrap(), q(25, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("25/2").unwrap(), q(25, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }
}
