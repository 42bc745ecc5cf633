//! Univariate polynomials over an exact field and in-field root finding.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Prime fields up to this size are scanned exhaustively for roots.
pub const ROOT_SCAN_LIMIT: u64 = 1 << 24;

/// Coefficients are stored lowest degree first with trailing zeros trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
        let mut p = Polynomial { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn zero(field: FieldSpec) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    /// The monic linear polynomial `x - root`.
    pub fn linear(root: &Scalar) -> Self {
        let f = root.field();
        Polynomial {
            field: f,
            coeffs: vec![-root, f.one()],
        }
    }

    /// Builds a polynomial from small integer coefficients, lowest degree first.
    pub fn from_i64s(field: FieldSpec, coeffs: &[i64]) -> Self {
        let mut p = Polynomial {
            field,
            coeffs: coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a + b
            })
            .collect();
        let mut p = Polynomial {
            field: self.field,
            coeffs,
        };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let mut p = Polynomial {
            field: self.field,
            coeffs,
        };
        p.trim();
        p
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut p = Polynomial {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        };
        p.trim();
        p
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Synthetic division by `x - r`: returns the quotient and remainder.
    pub fn divide_linear(&self, r: &Scalar) -> (Polynomial, Scalar) {
        if self.is_zero() {
            return (self.clone(), self.field.zero());
        }
        let n = self.coeffs.len();
        let mut quotient = vec![self.field.zero(); n - 1];
        let mut carry = self.field.zero();
        for i in (0..n).rev() {
            let cur = &self.coeffs[i] + &(&carry * r);
            if i == 0 {
                carry = cur;
            } else {
                quotient[i - 1] = cur.clone();
                carry = cur;
            }
        }
        let mut q = Polynomial {
            field: self.field,
            coeffs: quotient,
        };
        q.trim();
        (q, carry)
    }

    /// Multiplicity of `r` as a root, by repeated synthetic division.
    pub fn root_multiplicity(&self, r: &Scalar) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, rem) = p.divide_linear(r);
            if !rem.is_zero() {
                return Ok(m);
            }
            m += 1;
            p = q;
        }
    }

    /// Distinct roots lying in the field, sorted by the scalar ordering.
    ///
    /// Over GF(p) every element is evaluated. Over Q the polynomial is
    /// cleared to integer coefficients and rational root candidates
    /// `±r/s` (r | constant term, s | leading term) are tested.
    pub fn roots_in_field(&self) -> Result<Vec<Scalar>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut roots = match self.field {
            FieldSpec::Prime(p) => {
                if p > ROOT_SCAN_LIMIT {
                    return Err(Error::FieldTooLargeForRootSearch(p));
                }
                (0..p)
                    .map(|i| self.field.element(i))
                    .filter(|x| self.eval(x).is_zero())
                    .collect()
            }
            FieldSpec::Rationals => self.rational_roots(),
        };
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    /// Roots with their multiplicities.
    pub fn roots_with_multiplicity(&self) -> Result<Vec<(Scalar, usize)>> {
        self.roots_in_field()?
            .into_iter()
            .map(|r| {
                let m = self.root_multiplicity(&r)?;
                Ok((r, m))
            })
            .collect()
    }

    fn rational_roots(&self) -> Vec<Scalar> {
        let mut ints = self.integer_coefficients();
        let mut roots = Vec::new();
        // Zero roots first; strip the factor x.
        let zeros = ints.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            roots.push(self.field.zero());
            ints.drain(..zeros);
        }
        if ints.len() <= 1 {
            return roots;
        }
        let constant = ints[0].abs();
        let leading = ints[ints.len() - 1].abs();
        // Cauchy bound on |root|: 1 + max |a_i / a_n|.
        let max_ratio = ints[..ints.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let bound_num = &leading + &max_ratio;
        for s in divisors(&leading) {
            for r in divisors(&constant) {
                // |r/s| <= (leading + max)/leading  <=>  r*leading <= s*(leading + max)
                if &r * &leading > &s * &bound_num {
                    continue;
                }
                if !r.gcd(&s).is_one() {
                    continue;
                }
                for num in [r.clone(), -r.clone()] {
                    let x = self
                        .field
                        .from_fraction(&num, &s)
                        .expect("nonzero denominator");
                    if eval_integer_poly(&ints, &num, &s).is_zero() {
                        roots.push(x);
                    }
                }
            }
        }
        roots
    }

    /// Integer multiple of a rational polynomial (multiplied by the lcm of
    /// denominators).
    fn integer_coefficients(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .map(|c| {
                c.as_rational()
                    .expect("rational coefficient")
                    .denom()
                    .clone()
            })
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        self.coeffs
            .iter()
            .map(|c| {
                let r = c.as_rational().expect("rational coefficient");
                r.numer() * (&lcm / r.denom())
            })
            .collect()
    }
}

/// Evaluates `s^n * f(r/s)` exactly in integers.
fn eval_integer_poly(coeffs: &[BigInt], r: &BigInt, s: &BigInt) -> BigInt {
    let n = coeffs.len() - 1;
    let mut acc = BigInt::zero();
    let mut s_pow = BigInt::one();
    // Horner on homogenized form: sum a_i r^i s^(n-i).
    let mut r_pows = Vec::with_capacity(n + 1);
    let mut rp = BigInt::one();
    for _ in 0..=n {
        r_pows.push(rp.clone());
        rp *= r;
    }
    for i in (0..=n).rev() {
        acc += &coeffs[i] * &r_pows[i] * &s_pow;
        s_pow *= s;
    }
    acc
}

/// Positive divisors of `n` (n > 0), by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let q = n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) if self.field == FieldSpec::Rationals => (true, m.to_string()),
                _ => (false, text),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coeff_shown = mag != "1" || i == 0;
            if coeff_shown {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn show(v: &[Scalar]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn x_squared_plus_one() {
        let gf5 = FieldSpec::Prime(5);
        let p = Polynomial::from_i64s(gf5, &[1, 0, 1]);
        assert_eq!(show(&p.roots_in_field().unwrap()), ["2", "3"]);
        let p = Polynomial::from_i64s(Q, &[1, 0, 1]);
        assert!(p.roots_in_field().unwrap().is_empty());
    }

    #[test]
    fn quadratic_over_q() {
        let p = Polynomial::from_i64s(Q, &[6, -5, 1]);
        assert_eq!(show(&p.roots_in_field().unwrap()), ["2", "3"]);
    }

    #[test]
    fn rational_and_zero_roots() {
        // x (2x - 1)(3x + 2) = 6x^3 + x^2 - 2x
        let p = Polynomial::from_i64s(Q, &[0, -2, 1, 6]);
        let roots = p.roots_in_field().unwrap();
        assert_eq!(show(&roots), ["-2/3", "0", "1/2"]);
        // fractional coefficients: x^2 - 1/4
        let p = Polynomial::new(
            Q,
            vec![Scalar::parse("-1/4", Q).unwrap(), Q.zero(), Q.one()],
        )
        .unwrap();
        assert_eq!(show(&p.roots_in_field().unwrap()), ["-1/2", "1/2"]);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert_eq!(
            Polynomial::zero(Q).roots_in_field(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn multiplicity() {
        // (x - 1)^3 (x + 2)
        let one = Q.one();
        let p = Polynomial::linear(&one)
            .mul(&Polynomial::linear(&one))
            .mul(&Polynomial::linear(&one))
            .mul(&Polynomial::linear(&Q.from_i64(-2)));
        let rm = p.roots_with_multiplicity().unwrap();
        assert_eq!(rm, vec![(Q.from_i64(-2), 1), (one, 3)]);
    }

    #[test]
    fn gf_roots_match_exhaustive_evaluation() {
        let f = FieldSpec::Prime(7);
        // (x-1)(x-3)(x^2+1): x^2+1 has no roots mod 7
        let p = Polynomial::linear(&f.from_i64(1))
            .mul(&Polynomial::linear(&f.from_i64(3)))
            .mul(&Polynomial::from_i64s(f, &[1, 0, 1]));
        assert_eq!(show(&p.roots_in_field().unwrap()), ["1", "3"]);
    }

    #[test]
    fn display() {
        let p = Polynomial::from_i64s(Q, &[6, -5, 1]);
        assert_eq!(p.to_string(), "x^2 - 5x + 6");
        let p = Polynomial::from_i64s(FieldSpec::Prime(2), &[1, 0, 1]);
        assert_eq!(p.to_string(), "x^2 + 1");
    }
}
