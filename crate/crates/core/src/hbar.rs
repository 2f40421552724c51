//! Truncated power series in the deformation parameter.
//!
//! A series of order `N` stores coefficients of `hbar^0 .. hbar^N`; all ring
//! operations drop terms beyond `hbar^N` uniformly, so arithmetic is exact in
//! the quotient ring.

use crate::error::Result;
use crate::fourier::{DegreeCap, FourierPolynomial};
use crate::rational::{GaussianRational, Rat};
use crate::symbol::SymbolFunction;
use serde::{Deserialize, Serialize};

/// Coefficient ring interface for [`HbarSeries`].
pub trait Coefficient: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    /// Product; the degree cap only constrains coefficient types with an
    /// internal notion of total degree.
    fn try_mul(&self, rhs: &Self, cap: DegreeCap) -> Result<Self>;
    fn scale(&self, c: &GaussianRational) -> Self;
}

impl Coefficient for FourierPolynomial {
    fn zero() -> Self {
        FourierPolynomial::zero()
    }
    fn one() -> Self {
        FourierPolynomial::one()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn try_mul(&self, rhs: &Self, cap: DegreeCap) -> Result<Self> {
        self.try_mul(rhs, cap)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self.scale(c)
    }
}

impl Coefficient for SymbolFunction {
    fn zero() -> Self {
        SymbolFunction::zero()
    }
    fn one() -> Self {
        SymbolFunction::one()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn try_mul(&self, rhs: &Self, _cap: DegreeCap) -> Result<Self> {
        Ok(self.mul(rhs))
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self.scale(c)
    }
}

impl Coefficient for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn try_mul(&self, rhs: &Self, _cap: DegreeCap) -> Result<Self> {
        Ok(self * rhs)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self * c
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct HbarSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> HbarSeries<T> {
    /// The zero series truncated at `hbar^order`.
    pub fn zero(order: usize) -> Self {
        HbarSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty());
        HbarSeries { coeffs }
    }

    /// A constant series (coefficient at order zero).
    pub fn constant(value: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// `value · hbar^n` as a series of the given order.
    pub fn single(value: T, n: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = value;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, value: T) {
        self.coeffs[n] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(T::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        HbarSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-&GaussianRational::one()))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        HbarSeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, rhs: &Self, cap: DegreeCap) -> Result<Self> {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        let order = self.order();
        let mut out = Self::zero(order);
        for a in 0..=order {
            if self.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..=(order - a) {
                if rhs.coeffs[b].is_zero() {
                    continue;
                }
                let prod = self.coeffs[a].try_mul(&rhs.coeffs[b], cap)?;
                out.coeffs[a + b] = out.coeffs[a + b].add(&prod);
            }
        }
        Ok(out)
    }

    /// Multiply by `hbar^k` (coefficients beyond the order fall off the end).
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for n in 0..=order {
            if n + k <= order {
                out.coeffs[n + k] = self.coeffs[n].clone();
            }
        }
        out
    }

    /// Exponential of a series with vanishing constant term.
    pub fn exp(&self, cap: DegreeCap) -> Result<Self> {
        assert!(
            self.coeffs[0].is_zero(),
            "exp requires a vanishing constant term"
        );
        let order = self.order();
        let mut out = Self::constant(T::one(), order);
        let mut power = out.clone();
        let mut factorial = Rat::from_integer(1.into());
        for k in 1..=order {
            power = power.try_mul(self, cap)?;
            if power.is_zero() {
                break;
            }
            factorial *= Rat::from_integer(k.into());
            let inv = GaussianRational::from_rat(Rat::from_integer(1.into()) / factorial.clone());
            out = out.add(&power.scale(&inv));
        }
        Ok(out)
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> HbarSeries<U> {
        HbarSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Re-truncate (extend with zeros or drop high orders).
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, T::zero());
        coeffs.truncate(order + 1);
        HbarSeries { coeffs }
    }
}

impl HbarSeries<FourierPolynomial> {
    /// Identity element for series over Fourier polynomials.
    pub fn one(order: usize) -> Self {
        Self::constant(FourierPolynomial::one(), order)
    }

    /// Apply the argument shift `q -> q + hbar(u+u')/2` to every radial
    /// coefficient, Taylor-expanding and regrading by the shift's power of
    /// `hbar`.
    pub fn taylor_shift(&self, cap: DegreeCap) -> Result<Self> {
        let order = self.order();
        let mut out = Self::zero(order);
        for n in 0..=order {
            let poly = &self.coeffs[n];
            if poly.is_zero() {
                continue;
            }
            for k in 0..=(order - n) as u16 {
                let mut shifted = FourierPolynomial::zero();
                for (key, c) in poly.terms() {
                    let t = crate::fourier::taylor_term(c, k);
                    if t.is_zero() {
                        continue;
                    }
                    let mono =
                        FourierPolynomial::monomial(*key, crate::radial::RadialFunction::one());
                    shifted = shifted.add(&t.try_mul(&mono, cap)?);
                }
                if !shifted.is_zero() {
                    let slot = n + k as usize;
                    let merged = out.coeff(slot).add(&shifted);
                    out.set_coeff(slot, merged);
                }
            }
        }
        Ok(out)
    }
}

/// Taylor expansion of a single radial function under the shift
/// `q -> q + hbar(u+u')/2`, through `hbar^order`.
pub fn taylor_shift_radial(
    c: &crate::radial::RadialFunction,
    order: usize,
    cap: DegreeCap,
) -> Result<HbarSeries<FourierPolynomial>> {
    HbarSeries::constant(FourierPolynomial::from_radial(c.clone()), order).taylor_shift(cap)
}

/// `exp(i·hbar·(u·v' - v·u')/2)` as a truncated series: the symplectic phase
/// factor of the composite multiplier.
pub fn symplectic_phase(order: usize, cap: DegreeCap) -> Result<HbarSeries<FourierPolynomial>> {
    let mut phase = FourierPolynomial::zero();
    let half_i = &GaussianRational::i() * &GaussianRational::from_ratio(1, 2);
    for i in 0..3 {
        let uvp = FourierPolynomial::u(i).try_mul(&FourierPolynomial::vp(i), cap)?;
        let vup = FourierPolynomial::v(i).try_mul(&FourierPolynomial::up(i), cap)?;
        phase = phase.add(&uvp.sub(&vup).scale(&half_i));
    }
    HbarSeries::single(phase, 1, order).exp(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn truncated_product() {
        // (1 + h)·(1 - h + h^2) = 1 + h^3 -> truncates to 1 at order 2.
        let one = GaussianRational::one();
        let a = HbarSeries::from_coeffs(vec![one.clone(), one.clone(), GaussianRational::zero()]);
        let b = HbarSeries::from_coeffs(vec![one.clone(), -&one, one.clone()]);
        let prod = a.try_mul(&b, DegreeCap::default()).unwrap();
        assert_eq!(
            prod,
            HbarSeries::from_coeffs(vec![
                one.clone(),
                GaussianRational::zero(),
                GaussianRational::zero()
            ])
        );
    }

    #[test]
    fn exp_of_linear_term() {
        // exp(c·h) = Σ c^k h^k / k!
        let c = gr(3, 2);
        let s = HbarSeries::single(c.clone(), 1, 4);
        let e = s.exp(DegreeCap::default()).unwrap();
        assert_eq!(e.coeff(0), &GaussianRational::one());
        assert_eq!(e.coeff(1), &c);
        assert_eq!(e.coeff(2), &(&(&c * &c) * &gr(1, 2)));
        assert_eq!(e.coeff(4), &(&(&(&c * &c) * &(&c * &c)) * &gr(1, 24)));
    }

    #[test]
    fn symplectic_phase_leading_orders() {
        let phase = symplectic_phase(2, DegreeCap::default()).unwrap();
        assert_eq!(phase.coeff(0), &FourierPolynomial::one());
        // Order 1: (i/2)(u·v' - v·u')
        let mut expected = FourierPolynomial::zero();
        for i in 0..3 {
            let uvp = FourierPolynomial::u(i)
                .try_mul(&FourierPolynomial::vp(i), DegreeCap::default())
                .unwrap();
            let vup = FourierPolynomial::v(i)
                .try_mul(&FourierPolynomial::up(i), DegreeCap::default())
                .unwrap();
            expected = expected.add(&uvp.sub(&vup));
        }
        expected = expected.scale(&(&GaussianRational::i() * &gr(1, 2)));
        assert_eq!(phase.coeff(1), &expected);
    }

    #[test]
    fn taylor_shift_of_constant_is_identity() {
        let s = HbarSeries::constant(FourierPolynomial::one(), 3);
        assert_eq!(s.taylor_shift(DegreeCap::default()).unwrap(), s);
    }
}
