use num_traits::Zero;

use super::{Rational, RationalPolynomial};
use crate::{Error, Result};

/// Power series in `z`, truncated at an explicit order `K`, with coefficients
/// in the polynomial ring over `t`. Operations never read past the order; the
/// order of a binary result is the smaller operand order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    order: usize,
    coeffs: Vec<RationalPolynomial>, // index = power of z, length order + 1
}

impl FormalSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![RationalPolynomial::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = RationalPolynomial::one();
        s
    }

    /// The series `z`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = RationalPolynomial::one();
        }
        s
    }

    /// Builds from coefficients, truncating or zero-padding to the order.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<RationalPolynomial>) -> Self {
        coeffs.resize(order + 1, RationalPolynomial::zero());
        coeffs.truncate(order + 1);
        Self { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `z^i` (zero past the truncation order).
    pub fn coeff(&self, i: usize) -> RationalPolynomial {
        self.coeffs.get(i).cloned().unwrap_or_else(RationalPolynomial::zero)
    }

    pub fn coeffs(&self) -> &[RationalPolynomial] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, c: RationalPolynomial) {
        assert!(i <= self.order, "coefficient index past truncation order");
        self.coeffs[i] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalPolynomial::is_zero)
    }

    /// Truncates (or zero-extends) to a new order.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(order, self.coeffs.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        Self::from_coeffs(order, (0..=order).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        Self::from_coeffs(order, (0..=order).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![RationalPolynomial::zero(); order + 1];
        for i in 0..=order.min(self.order) {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..=(order - i).min(rhs.order) {
                let b = &rhs.coeffs[j];
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Self { order, coeffs }
    }

    pub fn scale_poly(&self, c: &RationalPolynomial) -> Self {
        Self::from_coeffs(self.order, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.scale_poly(&RationalPolynomial::constant(c.clone()))
    }

    /// Multiplies by `z^d` (shifting coefficients up, truncating at the order).
    pub fn shift_up(&self, d: usize) -> Self {
        let mut s = Self::zero(self.order);
        for i in d..=self.order {
            s.coeffs[i] = self.coeff(i - d);
        }
        s
    }

    /// Divides by `z^d`; the low `d` coefficients must vanish. The order drops
    /// by `d` since nothing is known about the shifted-in tail.
    pub fn shift_down(&self, d: usize) -> Result<Self> {
        if (0..d.min(self.order + 1)).any(|i| !self.coeffs[i].is_zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order.saturating_sub(d);
        Ok(Self::from_coeffs(
            order,
            (0..=order).map(|i| self.coeff(i + d)).collect(),
        ))
    }

    /// Substitution `self(inner)`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order.min(inner.order);
        let mut acc = Self::zero(order);
        for i in (0..=self.order).rev() {
            acc = acc.mul(&inner.truncate(order));
            acc.coeffs[0] = &acc.coeffs[0] + &self.coeffs[i];
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be a unit of the
    /// coefficient ring (a nonzero rational constant).
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        let lead = c0.as_constant().filter(|c| !c.is_zero()).ok_or(Error::NonInvertibleLeadingTerm)?;
        let inv_lead = RationalPolynomial::constant(lead.recip());
        let mut out = Self::zero(self.order);
        out.coeffs[0] = inv_lead.clone();
        for n in 1..=self.order {
            let mut acc = RationalPolynomial::zero();
            for j in 1..=n {
                acc = &acc + &(&self.coeff(j) * &out.coeffs[n - j]);
            }
            out.coeffs[n] = &(-&acc) * &inv_lead;
        }
        Ok(out)
    }

    /// Compositional inverse: the series `g` with `self(g) = z` up to the
    /// truncation order. Requires zero constant term and a linear coefficient
    /// that is a unit (nonzero rational constant).
    pub fn compose_inverse(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let a1 = self
            .coeff(1)
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or(Error::NonInvertibleLeadingTerm)?;
        let order = self.order;
        let mut inv = Self::zero(order);
        if order >= 1 {
            inv.coeffs[1] = RationalPolynomial::constant(a1.recip());
        }
        // One new coefficient per pass: with g correct through z^m, the z^{m+1}
        // residual of self(g) is linear in the missing coefficient.
        for m in 2..=order {
            let residual = self.compose(&inv)?.coeff(m);
            if residual.is_zero() {
                continue;
            }
            inv.coeffs[m] = residual.scale(&-a1.clone().recip());
        }
        Ok(inv)
    }
}
