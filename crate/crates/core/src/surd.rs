//! Exact sums of square roots of rationals.
//!
//! Euclidean norms of rational vectors are generally irrational. They are
//! carried as `sqrt(q)` with `q` rational, and sums of them as a
//! [`SurdSum`]: terms are grouped into classes whose radicands differ by a
//! rational square factor. Square roots from distinct classes are linearly
//! independent over Q, so a nonzero canonical sum is never zero and the sign
//! can always be settled by refining a rational enclosure.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// `sqrt(sq)` for a nonnegative rational `sq`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Magnitude {
    sq: Rational,
}

impl Magnitude {
    pub fn from_squared(sq: Rational) -> Self {
        assert!(!sq.is_negative(), "squared magnitude must be nonnegative");
        Magnitude { sq }
    }

    pub fn from_rational(x: &Rational) -> Self {
        Magnitude { sq: x * x }
    }

    pub fn zero() -> Self {
        Magnitude {
            sq: Rational::zero(),
        }
    }

    pub fn squared(&self) -> &Rational {
        &self.sq
    }

    pub fn as_rational(&self) -> Option<Rational> {
        rational::exact_sqrt(&self.sq)
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.sq).sqrt()
    }

    pub fn to_surd(&self) -> SurdSum {
        SurdSum::sqrt(self.sq.clone())
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_surd().fmt(f)
    }
}

/// `sum_i c_i * sqrt(r_i)` in canonical class form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdSum {
    // (coefficient, radicand); radicand 1 is the rational class
    terms: Vec<(Rational, Rational)>,
}

impl Default for SurdSum {
    fn default() -> Self {
        Self::zero()
    }
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum { terms: Vec::new() }
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut s = Self::zero();
        s.push(q, Rational::one());
        s
    }

    pub fn sqrt(radicand: Rational) -> Self {
        let mut s = Self::zero();
        s.push(Rational::one(), radicand);
        s
    }

    /// `coef * sqrt(radicand)`.
    pub fn term(coef: Rational, radicand: Rational) -> Self {
        let mut s = Self::zero();
        s.push(coef, radicand);
        s
    }

    fn push(&mut self, coef: Rational, radicand: Rational) {
        assert!(!radicand.is_negative(), "negative radicand");
        if coef.is_zero() || radicand.is_zero() {
            return;
        }
        let (coef, radicand) = match rational::exact_sqrt(&radicand) {
            Some(root) => (coef * root, Rational::one()),
            None => (coef, radicand),
        };
        let class = self
            .terms
            .iter()
            .enumerate()
            .find_map(|(i, (_, r))| rational::exact_sqrt(&(&radicand / r)).map(|k| (i, k)));
        match class {
            Some((i, ratio)) => {
                self.terms[i].0 += coef * ratio;
                if self.terms[i].0.is_zero() {
                    self.terms.remove(i);
                }
            }
            None => self.terms.push((coef, radicand)),
        }
    }

    pub fn add(&self, other: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        for (c, r) in &other.terms {
            out.push(c.clone(), r.clone());
        }
        out
    }

    pub fn sub(&self, other: &SurdSum) -> SurdSum {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> SurdSum {
        if k.is_zero() {
            return Self::zero();
        }
        SurdSum {
            terms: self.terms.iter().map(|(c, r)| (c * k, r.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(c, r)] if r.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// A rational interval containing the value, with radicand roots
    /// resolved to `bits` binary digits.
    pub fn enclosure(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (c, r) in &self.terms {
            let (rl, rh) = sqrt_enclosure(r, bits);
            if c.is_negative() {
                lo += c * &rh;
                hi += c * &rl;
            } else {
                lo += c * &rl;
                hi += c * &rh;
            }
        }
        (lo, hi)
    }

    pub fn signum(&self) -> Ordering {
        match self.terms.as_slice() {
            [] => return Ordering::Equal,
            [(c, _)] => return c.cmp(&Rational::zero()),
            _ => {}
        }
        let mut bits = 32;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn cmp_exact(&self, other: &SurdSum) -> Ordering {
        self.sub(other).signum()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(c, r)| rational::to_f64(c) * rational::to_f64(r).sqrt())
            .sum()
    }
}

fn sqrt_enclosure(r: &Rational, bits: u32) -> (Rational, Rational) {
    if r.is_one() {
        return (Rational::one(), Rational::one());
    }
    let nd: BigInt = r.numer() * r.denom();
    let scaled = nd << (2 * bits as usize);
    let s = scaled.sqrt();
    let denom = r.denom() << (bits as usize);
    (
        Rational::new(s.clone(), denom.clone()),
        Rational::new(s + 1, denom),
    )
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, r)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if r.is_one() {
                write!(f, "{}", rational::format(&mag))?;
            } else if mag.is_one() {
                write!(f, "sqrt({})", rational::format(r))?;
            } else {
                write!(
                    f,
                    "{}*sqrt({})",
                    rational::format(&mag),
                    rational::format(r)
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn groups_commensurable_radicands() {
        // sqrt(8) - 2 sqrt(2) = 0
        let s = SurdSum::sqrt(int(8)).sub(&SurdSum::term(int(2), int(2)));
        assert!(s.is_zero());
        assert_eq!(SurdSum::sqrt(frac(9, 4)).as_rational(), Some(frac(3, 2)));
    }

    #[test]
    fn decides_sign_of_mixed_sums() {
        // sqrt(2) + sqrt(3) vs sqrt(10): 3.146 > 3.162 is false
        let lhs = SurdSum::sqrt(int(2)).add(&SurdSum::sqrt(int(3)));
        assert_eq!(lhs.cmp_exact(&SurdSum::sqrt(int(10))), Ordering::Less);
        assert_eq!(
            lhs.cmp_exact(&SurdSum::from_rational(int(3))),
            Ordering::Greater
        );
        let near = SurdSum::sqrt(int(2)).sub(&SurdSum::from_rational(frac(
            1414213562373095,
            1000000000000000,
        )));
        assert_eq!(near.signum(), Ordering::Greater);
    }

    #[test]
    fn magnitude_basics() {
        let m = Magnitude::from_squared(int(25));
        assert_eq!(m.as_rational(), Some(int(5)));
        assert!((Magnitude::from_squared(int(2)).to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Magnitude::from_squared(int(2)).to_string(), "sqrt(2)");
        let mixed = SurdSum::from_rational(frac(3, 2)).sub(&SurdSum::term(int(2), int(5)));
        assert_eq!(mixed.to_string(), "3/2 - 2*sqrt(5)");
    }
}
