//! Truncated univariate power series over any [`Coeff`] ring.

use crate::error::Result;
use crate::scalar::Coeff;

/// `Σ_{k ≤ order} c_k t^k`, always stored with exactly `order + 1` slots.
#[derive(Clone, Debug)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c0 + c1·t`.
    pub fn linear(c0: C, c1: C, order: usize) -> Self {
        let mut s = Series::constant(c0, order);
        if order >= 1 {
            s.coeffs[1] = c1;
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn plus(&self, rhs: &Self) -> Self {
        Series {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn minus(&self, rhs: &Self) -> Self {
        Series {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.times(c)).collect(),
        }
    }

    pub fn times(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Series { coeffs: out }
    }

    /// Division by a series whose constant term is invertible.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let inv0 = rhs.coeffs[0].inv()?;
        let n = self.coeffs.len();
        let mut out: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                if !rhs.coeffs[j].is_zero() {
                    acc = acc.minus(&rhs.coeffs[j].times(&out[k - j]));
                }
            }
            out.push(acc.times(&inv0));
        }
        Ok(Series { coeffs: out })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::constant(C::one(), self.order());
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn geometric_series() {
        let one_minus_t = Series::linear(Scalar::one(), Scalar::from_int(-1), 5);
        let one = Series::constant(Scalar::one(), 5);
        let q = one.div(&one_minus_t).unwrap();
        assert!(q.coeffs().iter().all(|c| c.is_one()));
        let back = q.times(&one_minus_t);
        assert!(back.coeff(0).is_one());
        assert!((1..=5).all(|k| back.coeff(k).is_zero()));
    }

    #[test]
    fn division_by_zero_constant_fails() {
        let t = Series::linear(Scalar::zero(), Scalar::one(), 3);
        assert!(Series::constant(Scalar::one(), 3).div(&t).is_err());
    }
}
