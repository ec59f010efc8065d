use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Dense univariate polynomial with rational coefficients, lowest degree
/// first. Trailing zeros are always trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `c0 + c1 x` from small integers; handy in tests.
    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational::to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational::int(k as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![Rational::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / rational::int(k as i64 + 1)),
        );
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Poly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + other.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p(x - shift)` expanded in powers of `x`.
    pub fn shifted(&self, shift: &Rational) -> Poly {
        let base = Poly::new(vec![-shift.clone(), Rational::one()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&base).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Upper bound on `|p'(x)|` for `x` in `[lo, hi]`, from the absolute
    /// coefficient sum of the derivative at the larger endpoint magnitude.
    pub fn lipschitz_bound(&self, lo: &Rational, hi: &Rational) -> Rational {
        let m = rational::max(&lo.abs(), &hi.abs());
        let mut acc = Rational::zero();
        for c in self.derivative().coeffs.iter().rev() {
            acc = acc * &m + c.abs();
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
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
    fn calculus() {
        let p = Poly::from_ints(&[1, 2, 3]); // 1 + 2x + 3x^2
        assert_eq!(p.eval(&int(2)), int(17));
        assert_eq!(p.derivative(), Poly::from_ints(&[2, 6]));
        assert_eq!(p.antiderivative().derivative(), p);
        assert_eq!(
            Poly::from_ints(&[0, 0, 1]).antiderivative().eval(&int(1)),
            frac(1, 3)
        );
    }

    #[test]
    fn shift_and_products() {
        let p = Poly::from_ints(&[0, 0, 1]);
        let s = p.shifted(&int(1)); // (x-1)^2
        assert_eq!(s, Poly::from_ints(&[1, -2, 1]));
        assert_eq!(Poly::x().pow(3), Poly::from_ints(&[0, 0, 0, 1]));
        assert!(Poly::from_ints(&[1, -1])
            .add(&Poly::from_ints(&[-1, 1]))
            .is_zero());
    }

    #[test]
    fn lipschitz_bound_of_square() {
        assert_eq!(
            Poly::from_ints(&[0, 0, 1]).lipschitz_bound(&int(0), &int(2)),
            int(4)
        );
    }
}
