//! Exact position-dependent coefficients: finite sums of
//! `c · mu^s · q^alpha · |q|^(-m)` with Gaussian-rational `c`.
//!
//! The class is closed under addition, multiplication and partial
//! differentiation, which is everything the expansion pipeline needs: the
//! magnetic field entries are `mu ε_ijk q^k |q|^-3` and differentiation obeys
//! `∂_i (q^alpha |q|^-m) = alpha_i q^(alpha-e_i) |q|^-m - m q^(alpha+e_i) |q|^-(m+2)`.
//!
//! Values are kept in a canonical form so that structural equality coincides
//! with equality as functions on `R^3 \ {0}`: within each `(mu-power, m mod 2)`
//! class all terms are brought over the common denominator `|q|^M`, the
//! numerators are combined as a polynomial, and `|q|^2 = Σ_i (q^i)^2` is
//! divided out as often as it divides the numerator. Classes of different
//! `m`-parity cannot mix because `|q|` is not a rational function of `q`.

use crate::multiindex::{self, Idx3};
use crate::rational::GaussianRational;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Term key ordered lexicographically by `(mu_power, m, alpha)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct RadialKey {
    pub mu: u32,
    pub m: u32,
    pub alpha: Idx3,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RadialFunction {
    terms: BTreeMap<RadialKey, GaussianRational>,
}

type Poly = BTreeMap<Idx3, GaussianRational>;

fn poly_insert(poly: &mut Poly, alpha: Idx3, c: GaussianRational) {
    if c.is_zero() {
        return;
    }
    match poly.entry(alpha) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// Multiply a polynomial in `q` by `|q|^2 = q1^2 + q2^2 + q3^2`.
fn poly_mul_sq(poly: &Poly) -> Poly {
    let mut out = Poly::new();
    for (alpha, c) in poly {
        for axis in 0..3 {
            let mut a = *alpha;
            a[axis] += 2;
            poly_insert(&mut out, a, c.clone());
        }
    }
    out
}

/// Exact division by `q1^2 + q2^2 + q3^2`, or `None` when it does not divide.
///
/// Single-divisor division with the lexicographic monomial order: the leading
/// monomial of any multiple must be divisible by the divisor's leading
/// monomial `q1^2`, so a non-divisible leading monomial proves inexactness.
fn poly_div_exact_sq(poly: &Poly) -> Option<Poly> {
    let mut rem = poly.clone();
    let mut quot = Poly::new();
    while let Some((&alpha, c)) = rem.iter().next_back() {
        if alpha[0] < 2 {
            return None;
        }
        let c = c.clone();
        let base = [alpha[0] - 2, alpha[1], alpha[2]];
        poly_insert(&mut quot, base, c.clone());
        for axis in 0..3 {
            let mut a = base;
            a[axis] += 2;
            poly_insert(&mut rem, a, -&c);
        }
    }
    Some(quot)
}

impl RadialFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_term(0, 0, multiindex::ZERO, c)
    }

    /// A single term `c · mu^s · q^alpha · |q|^-m`.
    pub fn from_term(mu: u32, m: u32, alpha: Idx3, c: GaussianRational) -> Self {
        let mut rf = RadialFunction::default();
        if !c.is_zero() {
            rf.terms.insert(RadialKey { mu, m, alpha }, c);
        }
        rf.normalize();
        rf
    }

    /// The coordinate function `q^i` (0-based axis).
    pub fn coordinate(i: usize) -> Self {
        Self::from_term(0, 0, multiindex::unit(i), GaussianRational::one())
    }

    /// `|q|^-m`.
    pub fn inverse_radius(m: u32) -> Self {
        Self::from_term(0, m, multiindex::ZERO, GaussianRational::one())
    }

    /// The coupling parameter `mu` as a function.
    pub fn mu() -> Self {
        Self::from_term(1, 0, multiindex::ZERO, GaussianRational::one())
    }

    /// Magnetic field entry `beta_ij = mu ε_ijk q^k |q|^-3` (0-based `i`, `j`).
    pub fn beta(i: usize, j: usize) -> Self {
        if i == j {
            return Self::zero();
        }
        let k = 3 - i - j;
        // ε_ijk with (i,j,k) a permutation of (0,1,2).
        let sign = if (i + 1) % 3 == j { 1 } else { -1 };
        Self::from_term(1, 3, multiindex::unit(k), GaussianRational::from_int(sign))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RadialKey, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest power of `mu` appearing.
    pub fn max_mu_power(&self) -> u32 {
        self.terms.keys().map(|k| k.mu).max().unwrap_or(0)
    }

    /// The part with `mu`-power exactly `s` (still carrying its `mu^s` factor).
    pub fn mu_component(&self, s: u32) -> RadialFunction {
        let mut rf = RadialFunction::default();
        for (k, c) in &self.terms {
            if k.mu == s {
                rf.terms.insert(*k, c.clone());
            }
        }
        rf
    }

    /// Drop every term carrying a positive power of `mu`.
    pub fn without_mu(&self) -> RadialFunction {
        self.mu_component(0)
    }

    /// Replace `mu^s` by `factor^s`, erasing the `mu` grading.
    pub fn substitute_mu(&self, factor: &GaussianRational) -> RadialFunction {
        let mut out = RadialFunction::default();
        for (k, c) in &self.terms {
            let mut scaled = c.clone();
            for _ in 0..k.mu {
                scaled = &scaled * factor;
            }
            let key = RadialKey { mu: 0, ..*k };
            poly_like_insert(&mut out.terms, key, scaled);
        }
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        // Terms grouped by (mu power, parity of the radius exponent); within a
        // group every term can be brought to the common denominator |q|^m_max.
        type ParityGroups = BTreeMap<(u32, u32), Vec<(u32, Idx3, GaussianRational)>>;
        if self.terms.is_empty() {
            return;
        }
        let mut groups: ParityGroups = BTreeMap::new();
        for (k, c) in std::mem::take(&mut self.terms) {
            if c.is_zero() {
                continue;
            }
            groups
                .entry((k.mu, k.m % 2))
                .or_default()
                .push((k.m, k.alpha, c));
        }
        for ((mu, _parity), items) in groups {
            let mut m_max = items.iter().map(|(m, _, _)| *m).max().unwrap_or(0);
            let mut poly = Poly::new();
            for (m, alpha, c) in items {
                let lifts = (m_max - m) / 2;
                let mut mono = Poly::new();
                poly_insert(&mut mono, alpha, c);
                for _ in 0..lifts {
                    mono = poly_mul_sq(&mono);
                }
                for (a, c) in mono {
                    poly_insert(&mut poly, a, c);
                }
            }
            while m_max >= 2 && !poly.is_empty() {
                match poly_div_exact_sq(&poly) {
                    Some(q) => {
                        poly = q;
                        m_max -= 2;
                    }
                    None => break,
                }
            }
            for (alpha, c) in poly {
                self.terms.insert(
                    RadialKey {
                        mu,
                        m: m_max,
                        alpha,
                    },
                    c,
                );
            }
        }
    }

    pub fn add(&self, rhs: &RadialFunction) -> RadialFunction {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            poly_like_insert(&mut out.terms, *k, c.clone());
        }
        out.normalize();
        out
    }

    pub fn sub(&self, rhs: &RadialFunction) -> RadialFunction {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RadialFunction {
        let mut out = RadialFunction::default();
        for (k, c) in &self.terms {
            out.terms.insert(*k, -c);
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> RadialFunction {
        if c.is_zero() {
            return RadialFunction::zero();
        }
        let mut out = RadialFunction::default();
        for (k, v) in &self.terms {
            out.terms.insert(*k, v * c);
        }
        out
    }

    pub fn mul(&self, rhs: &RadialFunction) -> RadialFunction {
        let mut out = RadialFunction::default();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let key = RadialKey {
                    mu: ka.mu + kb.mu,
                    m: ka.m + kb.m,
                    alpha: multiindex::add(&ka.alpha, &kb.alpha),
                };
                poly_like_insert(&mut out.terms, key, ca * cb);
            }
        }
        out.normalize();
        out
    }

    /// Partial derivative along `q^i` (0-based).
    pub fn diff(&self, i: usize) -> RadialFunction {
        let mut out = RadialFunction::default();
        for (k, c) in &self.terms {
            if k.alpha[i] > 0 {
                let mut alpha = k.alpha;
                alpha[i] -= 1;
                let key = RadialKey { alpha, ..*k };
                poly_like_insert(
                    &mut out.terms,
                    key,
                    c * &GaussianRational::from_int(k.alpha[i] as i64),
                );
            }
            if k.m > 0 {
                let mut alpha = k.alpha;
                alpha[i] += 1;
                let key = RadialKey {
                    m: k.m + 2,
                    alpha,
                    ..*k
                };
                poly_like_insert(
                    &mut out.terms,
                    key,
                    c * &GaussianRational::from_int(-(k.m as i64)),
                );
            }
        }
        out.normalize();
        out
    }

    /// Iterated derivative `∂^sigma`.
    pub fn diff_multi(&self, sigma: &Idx3) -> RadialFunction {
        let mut out = self.clone();
        for (axis, &count) in sigma.iter().enumerate() {
            for _ in 0..count {
                out = out.diff(axis);
            }
        }
        out
    }

    /// Numeric evaluation at `q = x` with `mu` bound to `mu_value`.
    pub fn eval(&self, x: &[f64; 3], mu_value: f64) -> Complex64 {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let r = r2.sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            let scale =
                mu_value.powi(k.mu as i32) * multiindex::eval_pow(&k.alpha, x) / r.powi(k.m as i32);
            acc += c.to_complex() * scale;
        }
        acc
    }
}

fn poly_like_insert(
    terms: &mut BTreeMap<RadialKey, GaussianRational>,
    key: RadialKey,
    c: GaussianRational,
) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

impl fmt::Display for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut factors = vec![format!("({c})")];
                if k.mu > 0 {
                    factors.push(if k.mu == 1 {
                        "mu".to_string()
                    } else {
                        format!("mu^{}", k.mu)
                    });
                }
                for (axis, name) in ["q1", "q2", "q3"].iter().enumerate() {
                    match k.alpha[axis] {
                        0 => {}
                        1 => factors.push(name.to_string()),
                        p => factors.push(format!("{name}^{p}")),
                    }
                }
                if k.m > 0 {
                    factors.push(format!("r^-{}", k.m));
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct RadialTermRepr {
    coeff: GaussianRational,
    mu: u32,
    m: u32,
    alpha: Idx3,
}

impl Serialize for RadialFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v: Vec<RadialTermRepr> = self
            .terms
            .iter()
            .map(|(k, c)| RadialTermRepr {
                coeff: c.clone(),
                mu: k.mu,
                m: k.m,
                alpha: k.alpha,
            })
            .collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RadialFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<RadialTermRepr>::deserialize(deserializer)?;
        let mut rf = RadialFunction::default();
        for t in v {
            poly_like_insert(
                &mut rf.terms,
                RadialKey {
                    mu: t.mu,
                    m: t.m,
                    alpha: t.alpha,
                },
                t.coeff,
            );
        }
        rf.normalize();
        Ok(rf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn sphere_relation_collapses_to_constant() {
        // q1^2/r^2 + q2^2/r^2 + q3^2/r^2 = 1
        let mut sum = RadialFunction::zero();
        for i in 0..3 {
            let mut alpha = multiindex::ZERO;
            alpha[i] = 2;
            sum = sum.add(&RadialFunction::from_term(0, 2, alpha, gr(1, 1)));
        }
        assert_eq!(sum, RadialFunction::one());
    }

    #[test]
    fn zero_test_is_canonical_not_structural() {
        // (q1^2 + q2^2 + q3^2)·r^-2 - 1 reduces to zero.
        let mut f = RadialFunction::from_term(0, 2, [2, 0, 0], gr(1, 1));
        f = f.add(&RadialFunction::from_term(0, 2, [0, 2, 0], gr(1, 1)));
        f = f.add(&RadialFunction::from_term(0, 2, [0, 0, 2], gr(1, 1)));
        f = f.sub(&RadialFunction::one());
        assert!(f.is_zero());
    }

    #[test]
    fn parity_classes_do_not_mix() {
        // 1 + r^-1 is nonzero and keeps both classes.
        let f = RadialFunction::one().add(&RadialFunction::inverse_radius(1));
        assert_eq!(f.num_terms(), 2);
        assert!(!f.is_zero());
    }

    #[test]
    fn derivative_of_inverse_radius() {
        // ∂_1 r^-3 = -3 q1 r^-5
        let d = RadialFunction::inverse_radius(3).diff(0);
        let expected = RadialFunction::from_term(0, 5, [1, 0, 0], gr(-3, 1));
        assert_eq!(d, expected);
    }

    #[test]
    fn field_divergence_vanishes() {
        // Σ_i ∂_i (mu q^i r^-3) = 0
        let mut div = RadialFunction::zero();
        for i in 0..3 {
            let fi = RadialFunction::from_term(1, 3, multiindex::unit(i), gr(1, 1));
            div = div.add(&fi.diff(i));
        }
        assert!(div.is_zero());
    }

    #[test]
    fn beta_is_antisymmetric_with_cyclic_entries() {
        for i in 0..3 {
            assert!(RadialFunction::beta(i, i).is_zero());
            for j in 0..3 {
                assert_eq!(RadialFunction::beta(i, j), RadialFunction::beta(j, i).neg());
            }
        }
        // beta_12 = mu q3 r^-3
        assert_eq!(
            RadialFunction::beta(0, 1),
            RadialFunction::from_term(1, 3, [0, 0, 1], gr(1, 1))
        );
    }

    #[test]
    fn mixed_partials_commute() {
        let f = RadialFunction::beta(0, 1).mul(&RadialFunction::coordinate(0));
        assert_eq!(f.diff(0).diff(2), f.diff(2).diff(0));
    }

    #[test]
    fn product_rule() {
        let f = RadialFunction::beta(1, 2);
        let g = RadialFunction::coordinate(1).add(&RadialFunction::inverse_radius(2));
        let lhs = f.mul(&g).diff(1);
        let rhs = f.diff(1).mul(&g).add(&f.mul(&g.diff(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_matches_closed_form() {
        let f = RadialFunction::beta(0, 1); // mu q3 r^-3
        let x = [0.3, -0.2, 0.9];
        let r = f64::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        let v = f.eval(&x, 0.5);
        assert!((v.re - 0.5 * x[2] / r.powi(3)).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn mu_substitution_binds_coupling() {
        let f = RadialFunction::beta(0, 1);
        let bound = f.substitute_mu(&gr(1, 2));
        assert_eq!(bound, RadialFunction::from_term(0, 3, [0, 0, 1], gr(1, 2)));
        let _ = rat(1, 2);
    }
}
