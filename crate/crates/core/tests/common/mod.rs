//! Test-side oracles that share no code with the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Polynomials with coefficients low-first, over either Q or Z/p.
#[derive(Clone, Copy)]
pub enum Coeffs {
    Rational,
    Mod(i64),
}

pub type Poly = Vec<BigRational>;

impl Coeffs {
    fn reduce(self, x: BigRational) -> BigRational {
        match self {
            Coeffs::Rational => x,
            Coeffs::Mod(p) => {
                assert!(x.is_integer());
                let p = BigInt::from(p);
                BigRational::from_integer(((x.to_integer() % &p) + &p) % &p)
            }
        }
    }

    fn add(self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                self.reduce(x + y)
            })
            .collect()
    }

    fn mul(self, a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![BigRational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.reduce(&out[i + j] + x * y);
            }
        }
        out
    }

    fn neg(self, a: &Poly) -> Poly {
        a.iter().map(|x| self.reduce(-x.clone())).collect()
    }

    /// `det(x I - A)` by cofactor expansion along the first row.
    pub fn det(self, m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut total = vec![BigRational::zero()];
        for c in 0..n {
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let term = self.mul(&m[0][c], &self.det(&minor));
            total = self.add(&total, &if c % 2 == 0 { term } else { self.neg(&term) });
        }
        total
    }

    pub fn char_poly(self, a: &[Vec<i64>]) -> Poly {
        let n = a.len();
        let m: Vec<Vec<Poly>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let k = self.reduce(BigRational::from_integer((-a[r][c]).into()));
                        if r == c {
                            vec![k, BigRational::one()]
                        } else {
                            vec![k]
                        }
                    })
                    .collect()
            })
            .collect();
        let mut p = self.det(&m);
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }
}
