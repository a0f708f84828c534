//! Exact positive rationals used as repetition exponents and power bounds.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{invalid, Error, Result};

/// A positive rational `num/den`, always stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    num: u64,
    den: u64,
}

impl Exponent {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(invalid(format!("exponent {num}/{den} is not positive")));
        }
        let g = num.gcd(&den);
        Ok(Exponent {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    /// Exponent of a factor of length `len` with period `period`.
    pub fn of_length(len: usize, period: usize) -> Self {
        Self::new(len as u64, period as u64).expect("length and period are positive")
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn floor(&self) -> u64 {
        self.num / self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// `self * len`, if that is an integer.
    pub fn times_len(&self, len: usize) -> Option<usize> {
        let prod = self.num as u128 * len as u128;
        if !prod.is_multiple_of(self.den as u128) {
            return None;
        }
        usize::try_from(prod / self.den as u128).ok()
    }

    /// Compares `self` with `len / period` without building a new value.
    pub fn cmp_ratio(&self, len: usize, period: usize) -> Ordering {
        (self.num as u128 * period as u128).cmp(&(len as u128 * self.den as u128))
    }

    /// `self - n` for a non-negative integer `n`, when the result is still positive.
    pub fn minus_integer(&self, n: u64) -> Option<Self> {
        let sub = n.checked_mul(self.den)?;
        if self.num <= sub {
            return None;
        }
        Some(Exponent::new(self.num - sub, self.den).expect("positive"))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| invalid(format!("malformed exponent {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Exponent::new(parse(n)?, parse(d)?),
            None => Exponent::new(parse(s)?, 1),
        }
    }
}

/// A repetition threshold: a plain bound forbids exponents `>= threshold`,
/// a plus bound forbids exponents `> threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PowerBound {
    pub threshold: Exponent,
    pub plus: bool,
}

impl PowerBound {
    pub fn plain(threshold: Exponent) -> Self {
        PowerBound {
            threshold,
            plus: false,
        }
    }

    pub fn plus(threshold: Exponent) -> Self {
        PowerBound {
            threshold,
            plus: true,
        }
    }

    pub fn forbids(&self, beta: Exponent) -> bool {
        match beta.cmp(&self.threshold) {
            Ordering::Greater => true,
            Ordering::Equal => !self.plus,
            Ordering::Less => false,
        }
    }

    /// Same as [`forbids`](Self::forbids) for the exponent `len / period`.
    pub fn forbids_ratio(&self, len: usize, period: usize) -> bool {
        match self.threshold.cmp_ratio(len, period) {
            Ordering::Less => true,
            Ordering::Equal => !self.plus,
            Ordering::Greater => false,
        }
    }

    /// True when every word that is free for `self` is also free for `other`.
    pub fn implies(&self, other: &PowerBound) -> bool {
        match self.threshold.cmp(&other.threshold) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => !self.plus || other.plus,
        }
    }
}

impl fmt::Display for PowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.threshold, if self.plus { "+" } else { "" })
    }
}

impl FromStr for PowerBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_suffix('+') {
            Some(rest) => Ok(PowerBound::plus(rest.parse()?)),
            None => Ok(PowerBound::plain(s.parse()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_on_construction() {
        let a = Exponent::new(10, 4).unwrap();
        assert_eq!((a.num(), a.den()), (5, 2));
        assert_eq!(a, "5/2".parse().unwrap());
        assert!(Exponent::new(0, 3).is_err());
        assert!(Exponent::new(3, 0).is_err());
    }

    #[test]
    fn parses_text_forms() {
        assert_eq!("7/2".parse::<Exponent>().unwrap().to_string(), "7/2");
        assert_eq!("5".parse::<PowerBound>().unwrap().to_string(), "5");
        let b: PowerBound = "2+".parse().unwrap();
        assert!(b.plus);
        assert_eq!(b.threshold, Exponent::integer(2).unwrap());
        for bad in ["", "x", "1/0", "0", "2++", "-3", "3/"] {
            assert!(bad.parse::<PowerBound>().is_err(), "{bad}");
        }
    }

    #[test]
    fn plain_and_plus_differ_only_at_threshold() {
        let two = Exponent::integer(2).unwrap();
        assert!(PowerBound::plain(two).forbids(two));
        assert!(!PowerBound::plus(two).forbids(two));
        assert!(PowerBound::plus(two).forbids_ratio(5, 2));
        assert!(!PowerBound::plain(two).forbids_ratio(3, 2));
    }

    #[test]
    fn implication_order() {
        let b = |s: &str| s.parse::<PowerBound>().unwrap();
        assert!(b("2+").implies(&b("5")));
        assert!(b("5").implies(&b("5+")));
        assert!(!b("5+").implies(&b("5")));
        assert!(!b("3").implies(&b("2+")));
    }

    #[test]
    fn arithmetic_helpers() {
        let a: Exponent = "7/4".parse().unwrap();
        assert_eq!(a.times_len(4), Some(7));
        assert_eq!(a.times_len(3), None);
        assert_eq!(a.minus_integer(1).unwrap().to_string(), "3/4");
        assert_eq!(a.minus_integer(2), None);
    }
}
