//! Polynomials in the Fourier dual variables `u, v, u', v'` (three components
//! each) with exact radial coefficients in `q`.
//!
//! These carry the multiplier expansion before it is turned into
//! bidifferential operators. Multiplication enforces a configurable total
//! degree cap: blowing past it is an error, never a silent truncation.

use crate::error::{Error, Result};
use crate::multiindex::{self, Idx3};
use crate::quaternion::Vec3;
use crate::radial::RadialFunction;
use crate::rational::{GaussianRational, Rat};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Total-degree bound for intermediate Fourier polynomials.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DegreeCap(pub u32);

impl Default for DegreeCap {
    fn default() -> Self {
        DegreeCap(24)
    }
}

/// Exponents of `(u, v, u', v')`, ordered lexicographically in that sequence.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct FourierKey {
    pub u: Idx3,
    pub v: Idx3,
    pub up: Idx3,
    pub vp: Idx3,
}

impl FourierKey {
    pub fn total_degree(&self) -> u32 {
        multiindex::total(&self.u)
            + multiindex::total(&self.v)
            + multiindex::total(&self.up)
            + multiindex::total(&self.vp)
    }

    pub fn combine(&self, o: &FourierKey) -> FourierKey {
        FourierKey {
            u: multiindex::add(&self.u, &o.u),
            v: multiindex::add(&self.v, &o.v),
            up: multiindex::add(&self.up, &o.up),
            vp: multiindex::add(&self.vp, &o.vp),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FourierPolynomial {
    terms: BTreeMap<FourierKey, RadialFunction>,
}

impl FourierPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_radial(RadialFunction::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_radial(RadialFunction::constant(c))
    }

    pub fn from_radial(rf: RadialFunction) -> Self {
        let mut p = FourierPolynomial::default();
        if !rf.is_zero() {
            p.terms.insert(FourierKey::default(), rf);
        }
        p
    }

    pub fn monomial(key: FourierKey, rf: RadialFunction) -> Self {
        let mut p = FourierPolynomial::default();
        if !rf.is_zero() {
            p.terms.insert(key, rf);
        }
        p
    }

    /// Variable constructors, 0-based component index.
    pub fn u(i: usize) -> Self {
        Self::monomial(
            FourierKey {
                u: multiindex::unit(i),
                ..Default::default()
            },
            RadialFunction::one(),
        )
    }

    pub fn v(i: usize) -> Self {
        Self::monomial(
            FourierKey {
                v: multiindex::unit(i),
                ..Default::default()
            },
            RadialFunction::one(),
        )
    }

    pub fn up(i: usize) -> Self {
        Self::monomial(
            FourierKey {
                up: multiindex::unit(i),
                ..Default::default()
            },
            RadialFunction::one(),
        )
    }

    pub fn vp(i: usize) -> Self {
        Self::monomial(
            FourierKey {
                vp: multiindex::unit(i),
                ..Default::default()
            },
            RadialFunction::one(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FourierKey, &RadialFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.total_degree())
            .max()
            .unwrap_or(0)
    }

    fn insert(&mut self, key: FourierKey, rf: RadialFunction) {
        if rf.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(rf);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&rf);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &FourierPolynomial) -> FourierPolynomial {
        let mut out = self.clone();
        for (k, rf) in &rhs.terms {
            out.insert(*k, rf.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &FourierPolynomial) -> FourierPolynomial {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FourierPolynomial {
        let mut out = FourierPolynomial::default();
        for (k, rf) in &self.terms {
            out.terms.insert(*k, rf.neg());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> FourierPolynomial {
        if c.is_zero() {
            return FourierPolynomial::zero();
        }
        let mut out = FourierPolynomial::default();
        for (k, rf) in &self.terms {
            let scaled = rf.scale(c);
            if !scaled.is_zero() {
                out.terms.insert(*k, scaled);
            }
        }
        out
    }

    pub fn scale_radial(&self, rf: &RadialFunction) -> FourierPolynomial {
        let mut out = FourierPolynomial::default();
        for (k, v) in &self.terms {
            out.insert(*k, v.mul(rf));
        }
        out
    }

    /// Product with the degree cap enforced on every resulting monomial.
    pub fn try_mul(&self, rhs: &FourierPolynomial, cap: DegreeCap) -> Result<FourierPolynomial> {
        let mut out = FourierPolynomial::default();
        for (ka, ra) in &self.terms {
            for (kb, rb) in &rhs.terms {
                let key = ka.combine(kb);
                let degree = key.total_degree();
                if degree > cap.0 {
                    return Err(Error::DegreeCapExceeded { degree, cap: cap.0 });
                }
                out.insert(key, ra.mul(rb));
            }
        }
        Ok(out)
    }

    /// Derivative along `q^i` acting on the radial coefficients.
    pub fn diff_q(&self, i: usize) -> FourierPolynomial {
        let mut out = FourierPolynomial::default();
        for (k, rf) in &self.terms {
            out.insert(*k, rf.diff(i));
        }
        out
    }

    /// Identify `u'` with `u` (used by antisymmetry checks).
    pub fn identify_up_with_u(&self) -> FourierPolynomial {
        let mut out = FourierPolynomial::default();
        for (k, rf) in &self.terms {
            let key = FourierKey {
                u: multiindex::add(&k.u, &k.up),
                v: k.v,
                up: multiindex::ZERO,
                vp: k.vp,
            };
            out.insert(key, rf.clone());
        }
        out
    }

    /// Numeric evaluation with `mu` bound to `mu_value`.
    pub fn eval(
        &self,
        u: &Vec3,
        v: &Vec3,
        up: &Vec3,
        vp: &Vec3,
        x: &Vec3,
        mu_value: f64,
    ) -> Complex64 {
        let (ua, va, upa, vpa, xa) = (
            u.as_array(),
            v.as_array(),
            up.as_array(),
            vp.as_array(),
            x.as_array(),
        );
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, rf) in &self.terms {
            let scale = multiindex::eval_pow(&k.u, &ua)
                * multiindex::eval_pow(&k.v, &va)
                * multiindex::eval_pow(&k.up, &upa)
                * multiindex::eval_pow(&k.vp, &vpa);
            acc += rf.eval(&xa, mu_value) * scale;
        }
        acc
    }
}

/// Order-`k` term of the Taylor expansion of `c(q + h(u+u')/2)` in the shift
/// scale `h`: `Σ_{|sigma|=k} (1/sigma!) ∂^sigma c · ((u+u')/2)^sigma`.
pub fn taylor_term(c: &RadialFunction, k: u16) -> FourierPolynomial {
    let mut out = FourierPolynomial::default();
    let half_pow = Rat::new(BigInt::from(1), BigInt::from(2).pow(k as u32));
    for sigma in multiindex::of_total_degree(k as u32) {
        let deriv = c.diff_multi(&sigma);
        if deriv.is_zero() {
            continue;
        }
        let inv_fact =
            Rat::new(BigInt::from(1), BigInt::from(1)) / multiindex::multi_factorial(&sigma);
        let scale = GaussianRational::from_rat(&half_pow * &inv_fact);
        let deriv = deriv.scale(&scale);
        // Expand ((u+u')/2)^sigma = Σ binom(sigma, kappa) u^kappa u'^(sigma-kappa) / 2^|sigma|
        // (the 1/2^|sigma| factor is already in `scale`).
        for k0 in 0..=sigma[0] {
            for k1 in 0..=sigma[1] {
                for k2 in 0..=sigma[2] {
                    let kappa = [k0, k1, k2];
                    let lambda = multiindex::checked_sub(&sigma, &kappa).unwrap();
                    let binom = multiindex::binomial(sigma[0], k0)
                        * multiindex::binomial(sigma[1], k1)
                        * multiindex::binomial(sigma[2], k2);
                    let coeff = deriv.scale(&GaussianRational::from_rat(Rat::from_integer(binom)));
                    out.insert(
                        FourierKey {
                            u: kappa,
                            up: lambda,
                            ..Default::default()
                        },
                        coeff,
                    );
                }
            }
        }
    }
    out
}

impl fmt::Display for FourierPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = [
            ["u1", "u2", "u3"],
            ["v1", "v2", "v3"],
            ["u'1", "u'2", "u'3"],
            ["v'1", "v'2", "v'3"],
        ];
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(k, rf)| {
                let blocks = [k.u, k.v, k.up, k.vp];
                let mut factors = vec![format!("[{rf}]")];
                for (b, block) in blocks.iter().enumerate() {
                    for axis in 0..3 {
                        match block[axis] {
                            0 => {}
                            1 => factors.push(names[b][axis].to_string()),
                            n => factors.push(format!("{}^{n}", names[b][axis])),
                        }
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct FourierTermRepr {
    coeff: RadialFunction,
    u: Idx3,
    v: Idx3,
    up: Idx3,
    vp: Idx3,
}

impl Serialize for FourierPolynomial {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<FourierTermRepr> = self
            .terms
            .iter()
            .map(|(k, rf)| FourierTermRepr {
                coeff: rf.clone(),
                u: k.u,
                v: k.v,
                up: k.up,
                vp: k.vp,
            })
            .collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourierPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let v = Vec::<FourierTermRepr>::deserialize(deserializer)?;
        let mut p = FourierPolynomial::default();
        for t in v {
            p.insert(
                FourierKey {
                    u: t.u,
                    v: t.v,
                    up: t.up,
                    vp: t.vp,
                },
                t.coeff,
            );
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_cap_rejects_blowup() {
        let u0 = FourierPolynomial::u(0);
        let mut p = FourierPolynomial::one();
        let cap = DegreeCap(3);
        for _ in 0..3 {
            p = p.try_mul(&u0, cap).unwrap();
        }
        assert!(matches!(
            p.try_mul(&u0, cap),
            Err(Error::DegreeCapExceeded { degree: 4, cap: 3 })
        ));
    }

    #[test]
    fn taylor_first_order_of_field_entry() {
        // c(q + h(u+u')/2) at order h^1: (1/2) Σ_i (u_i + u'_i) ∂_i c
        let c = RadialFunction::beta(0, 1);
        let t1 = taylor_term(&c, 1);
        let mut expected = FourierPolynomial::zero();
        for i in 0..3 {
            let d = c.diff(i).scale(&GaussianRational::from_ratio(1, 2));
            expected = expected.add(&FourierPolynomial::u(i).scale_radial(&d));
            expected = expected.add(&FourierPolynomial::up(i).scale_radial(&d));
        }
        assert_eq!(t1, expected);
    }

    #[test]
    fn taylor_zeroth_order_is_identity() {
        let c = RadialFunction::beta(1, 2);
        assert_eq!(taylor_term(&c, 0), FourierPolynomial::from_radial(c));
    }

    #[test]
    fn identify_dual_translation_variables() {
        // u·v' monomial keeps v'; u'·v' monomial folds into u·v'.
        let p = FourierPolynomial::u(0)
            .try_mul(&FourierPolynomial::vp(1), DegreeCap::default())
            .unwrap();
        let q = FourierPolynomial::up(0)
            .try_mul(&FourierPolynomial::vp(1), DegreeCap::default())
            .unwrap();
        assert_eq!(p.identify_up_with_u(), q.identify_up_with_u());
    }

    #[test]
    fn eval_monomials() {
        let p = FourierPolynomial::u(0)
            .try_mul(&FourierPolynomial::vp(2), DegreeCap::default())
            .unwrap()
            .scale_radial(&RadialFunction::inverse_radius(1));
        let u = Vec3::new(2.0, 0.0, 0.0);
        let vp = Vec3::new(0.0, 0.0, 3.0);
        let x = Vec3::new(0.0, 4.0, 0.0);
        let val = p.eval(&u, &Vec3::zero(), &Vec3::zero(), &vp, &x, 1.0);
        assert!((val.re - 2.0 * 3.0 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn serde_round_trip() {
        let p = FourierPolynomial::u(0)
            .try_mul(&FourierPolynomial::up(1), DegreeCap::default())
            .unwrap()
            .scale_radial(&RadialFunction::beta(0, 1));
        let json = serde_json::to_string(&p).unwrap();
        let back: FourierPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
