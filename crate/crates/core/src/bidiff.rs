//! Bidifferential operators acting on pairs of phase-space symbols.
//!
//! Each operator is a finite sum of terms `c(q) · (∂_p^a ∂_q^g ⊗ ∂_p^{a'}
//! ∂_q^{g'})` with radial-polynomial coefficients. Operators of this shape
//! are produced from Fourier-side polynomials by replacing each momentum
//! variable with `-i` times the matching derivative on the left or right
//! factor.

use crate::fourier::FourierPolynomial;
use crate::multiindex::{self, Idx3};
use crate::radial::RadialFunction;
use crate::rational::GaussianRational;
use crate::symbol::SymbolFunction;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Derivative multi-indices for the left and right factors.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct BidiffKey {
    pub left_p: Idx3,
    pub left_q: Idx3,
    pub right_p: Idx3,
    pub right_q: Idx3,
}

impl BidiffKey {
    pub const IDENTITY: BidiffKey = BidiffKey {
        left_p: multiindex::ZERO,
        left_q: multiindex::ZERO,
        right_p: multiindex::ZERO,
        right_q: multiindex::ZERO,
    };

    pub fn total_order(&self) -> u32 {
        multiindex::total(&self.left_p)
            + multiindex::total(&self.left_q)
            + multiindex::total(&self.right_p)
            + multiindex::total(&self.right_q)
    }
}

/// A bidifferential operator with radial-function coefficients.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct BidiffOperator {
    terms: BTreeMap<BidiffKey, RadialFunction>,
}

impl BidiffOperator {
    pub fn zero() -> Self {
        BidiffOperator::default()
    }

    /// The identity operator `(f, g) ↦ f·g`.
    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(BidiffKey::IDENTITY, RadialFunction::one());
        BidiffOperator { terms }
    }

    pub fn from_term(key: BidiffKey, coeff: RadialFunction) -> Self {
        let mut op = BidiffOperator::zero();
        op.insert(key, coeff);
        op
    }

    pub fn insert(&mut self, key: BidiffKey, coeff: RadialFunction) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BidiffKey, &RadialFunction)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &BidiffOperator) -> BidiffOperator {
        let mut out = self.clone();
        for (key, coeff) in &rhs.terms {
            out.insert(*key, coeff.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> BidiffOperator {
        if c.is_zero() {
            return BidiffOperator::zero();
        }
        BidiffOperator {
            terms: self.terms.iter().map(|(k, v)| (*k, v.scale(c))).collect(),
        }
    }

    /// Translate a Fourier-side polynomial into the operator it represents:
    /// each variable becomes `-i` times a derivative (`u`, `v` act on the
    /// left factor in `p` and `q`; `u'`, `v'` likewise on the right).
    pub fn from_fourier(fp: &FourierPolynomial) -> BidiffOperator {
        let mut op = BidiffOperator::zero();
        for (key, rf) in fp.terms() {
            let degree = key.total_degree();
            let factor = GaussianRational::minus_i_pow(degree);
            let bkey = BidiffKey {
                left_p: key.u,
                left_q: key.v,
                right_p: key.up,
                right_q: key.vp,
            };
            op.insert(bkey, rf.scale(&factor));
        }
        op
    }

    /// Highest derivative order taken in each of the four slots.
    pub fn max_orders(&self) -> DerivOrders {
        let mut orders = DerivOrders::default();
        for key in self.terms.keys() {
            orders.left_p = orders.left_p.max(multiindex::total(&key.left_p));
            orders.left_q = orders.left_q.max(multiindex::total(&key.left_q));
            orders.right_p = orders.right_p.max(multiindex::total(&key.right_p));
            orders.right_q = orders.right_q.max(multiindex::total(&key.right_q));
        }
        orders
    }

    /// Apply the operator to a pair of symbols directly.
    pub fn apply(&self, f: &SymbolFunction, g: &SymbolFunction) -> SymbolFunction {
        let mut out = SymbolFunction::zero();
        for (key, coeff) in &self.terms {
            let left = f.diff_p_multi(&key.left_p).diff_q_multi(&key.left_q);
            if left.is_zero() {
                continue;
            }
            let right = g.diff_p_multi(&key.right_p).diff_q_multi(&key.right_q);
            if right.is_zero() {
                continue;
            }
            out = out.add(&left.mul(&right).scale_radial(coeff));
        }
        out
    }

    /// Apply using precomputed derivative tables for both factors.
    pub fn apply_with_tables(&self, ft: &DerivTable, gt: &DerivTable) -> SymbolFunction {
        let mut out = SymbolFunction::zero();
        for (key, coeff) in &self.terms {
            let left = ft.get(&key.left_p, &key.left_q);
            if left.is_zero() {
                continue;
            }
            let right = gt.get(&key.right_p, &key.right_q);
            if right.is_zero() {
                continue;
            }
            out = out.add(&left.mul(right).scale_radial(coeff));
        }
        out
    }

    /// Bind the field-strength parameter to an explicit rational value in
    /// every coefficient.
    pub fn substitute_mu(&self, factor: &GaussianRational) -> BidiffOperator {
        let mut out = BidiffOperator::zero();
        for (key, coeff) in &self.terms {
            out.insert(*key, coeff.substitute_mu(factor));
        }
        out
    }

    pub fn max_mu_power(&self) -> u32 {
        self.terms
            .values()
            .map(|rf| rf.max_mu_power())
            .max()
            .unwrap_or(0)
    }
}

/// Maximum derivative order per slot, used to size derivative tables.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct DerivOrders {
    pub left_p: u32,
    pub left_q: u32,
    pub right_p: u32,
    pub right_q: u32,
}

impl DerivOrders {
    pub fn merge(&self, o: &DerivOrders) -> DerivOrders {
        DerivOrders {
            left_p: self.left_p.max(o.left_p),
            left_q: self.left_q.max(o.left_q),
            right_p: self.right_p.max(o.right_p),
            right_q: self.right_q.max(o.right_q),
        }
    }

    /// Orders needed when this operator's output feeds a left factor slot.
    pub fn as_left(&self) -> (u32, u32) {
        (self.left_p, self.left_q)
    }

    pub fn as_right(&self) -> (u32, u32) {
        (self.right_p, self.right_q)
    }
}

/// All mixed `p`/`q` derivatives of one symbol up to fixed total orders,
/// computed once and shared across many operator applications.
pub struct DerivTable {
    max_p: u32,
    max_q: u32,
    derivs: BTreeMap<(Idx3, Idx3), SymbolFunction>,
    empty: SymbolFunction,
}

impl DerivTable {
    pub fn build(f: &SymbolFunction, max_p: u32, max_q: u32) -> Self {
        let mut derivs: BTreeMap<(Idx3, Idx3), SymbolFunction> = BTreeMap::new();
        derivs.insert((multiindex::ZERO, multiindex::ZERO), f.clone());
        // Fill p-derivatives of the base, then q-derivatives of everything,
        // each new entry obtained from a parent by one more derivative.
        for k in 1..=max_p {
            for alpha in multiindex::of_total_degree(k) {
                let (parent, i) = parent_index(&alpha);
                let base = derivs[&(parent, multiindex::ZERO)].diff_p(i);
                derivs.insert((alpha, multiindex::ZERO), base);
            }
        }
        let p_indices: Vec<Idx3> = (0..=max_p).flat_map(multiindex::of_total_degree).collect();
        for k in 1..=max_q {
            for gamma in multiindex::of_total_degree(k) {
                let (parent, i) = parent_index(&gamma);
                for alpha in &p_indices {
                    let base = derivs[&(*alpha, parent)].diff_q(i);
                    derivs.insert((*alpha, gamma), base);
                }
            }
        }
        DerivTable {
            max_p,
            max_q,
            derivs,
            empty: SymbolFunction::zero(),
        }
    }

    pub fn get(&self, p: &Idx3, q: &Idx3) -> &SymbolFunction {
        debug_assert!(
            multiindex::total(p) <= self.max_p && multiindex::total(q) <= self.max_q,
            "derivative table too small: requested ({p:?}, {q:?})"
        );
        self.derivs.get(&(*p, *q)).unwrap_or(&self.empty)
    }
}

/// Split a nonzero multi-index into (index minus one unit, coordinate).
fn parent_index(alpha: &Idx3) -> (Idx3, usize) {
    for i in 0..3 {
        if alpha[i] > 0 {
            let mut parent = *alpha;
            parent[i] -= 1;
            return (parent, i);
        }
    }
    unreachable!("zero multi-index has no parent")
}

impl fmt::Display for BidiffOperator {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(fmt, "0");
        }
        let mut first = true;
        for (key, coeff) in &self.terms {
            if !first {
                write!(fmt, " + ")?;
            }
            first = false;
            write!(fmt, "({coeff})")?;
            let slots: [(&str, &Idx3); 4] = [
                ("Dp", &key.left_p),
                ("Dq", &key.left_q),
                ("Dp'", &key.right_p),
                ("Dq'", &key.right_q),
            ];
            for (name, idx) in slots {
                for (axis, &power) in idx.iter().enumerate() {
                    if power > 0 {
                        write!(fmt, " {name}{}^{power}", axis + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BidiffTermRepr {
    left_p: Idx3,
    left_q: Idx3,
    right_p: Idx3,
    right_q: Idx3,
    coefficient: RadialFunction,
}

impl Serialize for BidiffOperator {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let reprs: Vec<BidiffTermRepr> = self
            .terms
            .iter()
            .map(|(key, coeff)| BidiffTermRepr {
                left_p: key.left_p,
                left_q: key.left_q,
                right_p: key.right_p,
                right_q: key.right_q,
                coefficient: coeff.clone(),
            })
            .collect();
        reprs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BidiffOperator {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let reprs = Vec::<BidiffTermRepr>::deserialize(deserializer)?;
        let mut op = BidiffOperator::zero();
        for repr in reprs {
            let key = BidiffKey {
                left_p: repr.left_p,
                left_q: repr.left_q,
                right_p: repr.right_p,
                right_q: repr.right_q,
            };
            op.insert(key, repr.coefficient);
        }
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::DegreeCap;

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn fourier_monomial_becomes_signed_derivative_pair() {
        // u_1 v'_2 has degree 2, so the prefactor is (-i)^2 = -1.
        let fp = FourierPolynomial::u(0)
            .try_mul(&FourierPolynomial::vp(1), DegreeCap::default())
            .unwrap();
        let op = BidiffOperator::from_fourier(&fp);
        let f = SymbolFunction::p(0).mul(&SymbolFunction::p(0));
        let g = SymbolFunction::q(1);
        let result = op.apply(&f, &g);
        // -(∂_{p1} p1^2)(∂_{q2} q2) = -2 p1.
        let expected = SymbolFunction::p(0).scale(&gr(-2, 1));
        assert_eq!(result, expected);
    }

    #[test]
    fn identity_operator_multiplies() {
        let op = BidiffOperator::identity();
        let f = SymbolFunction::p(1).add(&SymbolFunction::q(2));
        let g = SymbolFunction::q(0);
        assert_eq!(op.apply(&f, &g), f.mul(&g));
    }

    #[test]
    fn radial_coefficient_multiplies_result() {
        let key = BidiffKey {
            left_p: multiindex::unit(0),
            left_q: multiindex::ZERO,
            right_p: multiindex::ZERO,
            right_q: multiindex::unit(0),
        };
        let op = BidiffOperator::from_term(key, RadialFunction::inverse_radius(1));
        let f = SymbolFunction::p(0);
        let g = SymbolFunction::q(0).mul(&SymbolFunction::q(0));
        let result = op.apply(&f, &g);
        // |q|^{-1} · 1 · 2 q1
        let expected =
            SymbolFunction::q(0).scale_radial(&RadialFunction::inverse_radius(1).scale(&gr(2, 1)));
        assert_eq!(result, expected);
    }

    #[test]
    fn derivative_table_matches_direct_differentiation() {
        let f = SymbolFunction::p(0)
            .mul(&SymbolFunction::p(1))
            .mul(&SymbolFunction::q(2))
            .add(&SymbolFunction::from_radial(
                RadialFunction::inverse_radius(1),
            ));
        let table = DerivTable::build(&f, 2, 2);
        for kp in 0..=2u32 {
            for alpha in multiindex::of_total_degree(kp) {
                for kq in 0..=2u32 {
                    for gamma in multiindex::of_total_degree(kq) {
                        let direct = f.diff_p_multi(&alpha).diff_q_multi(&gamma);
                        assert_eq!(table.get(&alpha, &gamma), &direct);
                    }
                }
            }
        }
    }

    #[test]
    fn apply_with_tables_matches_apply() {
        let fp = FourierPolynomial::u(0)
            .try_mul(&FourierPolynomial::vp(0), DegreeCap::default())
            .unwrap()
            .add(
                &FourierPolynomial::v(1)
                    .try_mul(&FourierPolynomial::up(1), DegreeCap::default())
                    .unwrap()
                    .scale_radial(&RadialFunction::beta(0, 1)),
            );
        let op = BidiffOperator::from_fourier(&fp);
        let f = SymbolFunction::p(0).mul(&SymbolFunction::q(1));
        let g = SymbolFunction::q(0).mul(&SymbolFunction::p(1));
        let orders = op.max_orders();
        let ft = DerivTable::build(&f, orders.left_p, orders.left_q);
        let gt = DerivTable::build(&g, orders.right_p, orders.right_q);
        assert_eq!(op.apply_with_tables(&ft, &gt), op.apply(&f, &g));
    }

    #[test]
    fn serde_round_trip() {
        let fp = FourierPolynomial::u(2)
            .try_mul(&FourierPolynomial::up(0), DegreeCap::default())
            .unwrap()
            .scale_radial(&RadialFunction::beta(1, 2));
        let op = BidiffOperator::from_fourier(&fp);
        let json = serde_json::to_string(&op).unwrap();
        let back: BidiffOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn mu_substitution_binds_coefficients() {
        let key = BidiffKey {
            left_p: multiindex::unit(0),
            left_q: multiindex::ZERO,
            right_p: multiindex::unit(1),
            right_q: multiindex::ZERO,
        };
        let op = BidiffOperator::from_term(key, RadialFunction::beta(0, 1));
        assert_eq!(op.max_mu_power(), 1);
        let bound = op.substitute_mu(&gr(1, 2));
        assert_eq!(bound.max_mu_power(), 0);
    }
}
