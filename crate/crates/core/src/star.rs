//! The deformed product on phase-space symbols.
//!
//! The product is represented as a truncated series `f ⋆ g = Σ_n h^n
//! B_n(f, g)` of bidifferential operators. The operators are produced by a
//! three-step pipeline: (1) expand the translation-multiplier exponent with
//! the exponential-splitting terms and map the radial imaginary unit to the
//! complex `i`; (2) substitute `q + h(u+u')/2` for the field argument and
//! expand in a Taylor series about `q`; (3) multiply by the symplectic phase
//! factor and replace Fourier variables by derivatives.

use crate::bidiff::{BidiffKey, BidiffOperator, DerivOrders, DerivTable};
use crate::error::Result;
use crate::fourier::{DegreeCap, FourierPolynomial};
use crate::hbar::{symplectic_phase, HbarSeries};
use crate::multiindex;
use crate::par;
use crate::radial::RadialFunction;
use crate::rational::{GaussianRational, Rat};
use crate::symbol::SymbolFunction;
use crate::zassenhaus::multiplier_exponent;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Fourier-side series for the composite translation multiplier, after the
/// argument shift and the symplectic phase factor have been applied. The
/// `n`-th coefficient, with variables replaced by derivatives, is `B_n`.
pub fn multiplier_full_expansion(
    order: usize,
    cap: DegreeCap,
) -> Result<HbarSeries<FourierPolynomial>> {
    let s = multiplier_exponent(order, cap)?;
    let complexified = s.scale(&GaussianRational::i());
    let m = complexified.exp(cap)?;
    let shifted = m.taylor_shift(cap)?;
    let phase = symplectic_phase(order, cap)?;
    shifted.try_mul(&phase, cap)
}

/// The bidifferential operators `B_0 ..= B_order` of the deformed product.
pub fn expansion_operators(order: usize, cap: DegreeCap) -> Result<Vec<BidiffOperator>> {
    let series = multiplier_full_expansion(order, cap)?;
    Ok(series
        .coeffs()
        .iter()
        .map(BidiffOperator::from_fourier)
        .collect())
}

/// A truncated deformed product together with precomputed derivative-order
/// bounds for sizing derivative tables.
#[derive(Clone, Debug)]
pub struct StarProduct {
    order: usize,
    ops: Vec<BidiffOperator>,
    orders: DerivOrders,
}

impl StarProduct {
    /// Construct the product truncated at the given series order.
    pub fn new(order: usize, cap: DegreeCap) -> Result<StarProduct> {
        Ok(StarProduct::from_operators(expansion_operators(
            order, cap,
        )?))
    }

    /// Wrap an explicit operator table (`ops[n]` acting at series order `n`).
    pub fn from_operators(ops: Vec<BidiffOperator>) -> StarProduct {
        assert!(!ops.is_empty());
        let orders = ops
            .iter()
            .map(BidiffOperator::max_orders)
            .fold(DerivOrders::default(), |acc, o| acc.merge(&o));
        StarProduct {
            order: ops.len() - 1,
            ops,
            orders,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn op(&self, n: usize) -> &BidiffOperator {
        &self.ops[n]
    }

    pub fn ops(&self) -> &[BidiffOperator] {
        &self.ops
    }

    /// Bind the field-strength parameter to an explicit value in every
    /// operator coefficient.
    pub fn bind_mu(&self, value: &GaussianRational) -> StarProduct {
        StarProduct::from_operators(self.ops.iter().map(|op| op.substitute_mu(value)).collect())
    }

    /// Derivative table for a symbol used as a left factor.
    pub fn left_table(&self, f: &SymbolFunction) -> DerivTable {
        let (p, q) = self.orders.as_left();
        DerivTable::build(f, p, q)
    }

    /// Derivative table for a symbol used as a right factor.
    pub fn right_table(&self, g: &SymbolFunction) -> DerivTable {
        let (p, q) = self.orders.as_right();
        DerivTable::build(g, p, q)
    }

    /// `f ⋆ g` as a coefficient series.
    pub fn star(&self, f: &SymbolFunction, g: &SymbolFunction) -> HbarSeries<SymbolFunction> {
        let ft = self.left_table(f);
        let gt = self.right_table(g);
        self.star_with_tables(&ft, &gt)
    }

    pub fn star_with_tables(&self, ft: &DerivTable, gt: &DerivTable) -> HbarSeries<SymbolFunction> {
        HbarSeries::from_coeffs(
            self.ops
                .iter()
                .map(|op| op.apply_with_tables(ft, gt))
                .collect(),
        )
    }

    /// Product of two coefficient series, truncated at the product's order:
    /// the order-`n` output collects `B_c(f_a, g_b)` over `a + b + c = n`.
    pub fn star_series(
        &self,
        f: &HbarSeries<SymbolFunction>,
        g: &HbarSeries<SymbolFunction>,
    ) -> HbarSeries<SymbolFunction> {
        let order = self.order;
        let ftabs: Vec<Option<DerivTable>> = (0..=order)
            .map(|a| {
                if a > f.order() || f.coeff(a).is_zero() {
                    None
                } else {
                    Some(self.left_table(f.coeff(a)))
                }
            })
            .collect();
        let gtabs: Vec<Option<DerivTable>> = (0..=order)
            .map(|b| {
                if b > g.order() || g.coeff(b).is_zero() {
                    None
                } else {
                    Some(self.right_table(g.coeff(b)))
                }
            })
            .collect();
        let mut out: HbarSeries<SymbolFunction> = HbarSeries::zero(order);
        for (a, ft) in ftabs.iter().enumerate() {
            let Some(ft) = ft else { continue };
            for (b, gt) in gtabs.iter().enumerate().take(order + 1 - a) {
                let Some(gt) = gt else { continue };
                for c in 0..=(order - a - b) {
                    let term = self.ops[c].apply_with_tables(ft, gt);
                    if !term.is_zero() {
                        let n = a + b + c;
                        out.set_coeff(n, out.coeff(n).add(&term));
                    }
                }
            }
        }
        out
    }

    /// `(f ⋆ g) ⋆ h − f ⋆ (g ⋆ h)`, truncated at the product's order.
    pub fn associator(
        &self,
        f: &SymbolFunction,
        g: &SymbolFunction,
        h: &SymbolFunction,
    ) -> HbarSeries<SymbolFunction> {
        let fg = self.star(f, g);
        let gh = self.star(g, h);
        let fs = HbarSeries::constant(f.clone(), self.order);
        let hs = HbarSeries::constant(h.clone(), self.order);
        self.star_series(&fg, &hs).sub(&self.star_series(&fs, &gh))
    }

    /// Exhaustive associativity check over all ordered triples from a family
    /// of symbols. Residuals are compared in exact arithmetic; a triple fails
    /// only if its associator has a nonzero coefficient within the truncation
    /// order. Work is organized around the middle element so that derivative
    /// tables are shared, and distributed over middle elements when
    /// `parallel` is set.
    pub fn check_associativity(&self, family: &[SymbolFunction], parallel: bool) -> AssocReport {
        let n = family.len();
        let order = self.order;
        let left: Vec<DerivTable> = par::run_map(parallel, family, |f| self.left_table(f));
        let right: Vec<DerivTable> = par::run_map(parallel, family, |g| self.right_table(g));
        let per_middle: Vec<Vec<[usize; 3]>> = par::run_map_indexed(parallel, n, |gi| {
            let mut fails = Vec::new();
            // Stage one: f ⋆ g for every f, and g ⋆ h for every h, with the
            // coefficients re-tabled for the outer application.
            let fg_tabs: Vec<Vec<Option<DerivTable>>> = (0..n)
                .map(|fi| {
                    (0..=order)
                        .map(|c| {
                            let coeff = self.ops[c].apply_with_tables(&left[fi], &right[gi]);
                            if coeff.is_zero() {
                                None
                            } else {
                                Some(self.left_table(&coeff))
                            }
                        })
                        .collect()
                })
                .collect();
            let gh_tabs: Vec<Vec<Option<DerivTable>>> = (0..n)
                .map(|hi| {
                    (0..=order)
                        .map(|c| {
                            let coeff = self.ops[c].apply_with_tables(&left[gi], &right[hi]);
                            if coeff.is_zero() {
                                None
                            } else {
                                Some(self.right_table(&coeff))
                            }
                        })
                        .collect()
                })
                .collect();
            for fi in 0..n {
                for hi in 0..n {
                    let mut ok = true;
                    'orders: for total in 0..=order {
                        let mut lhs = SymbolFunction::zero();
                        for (a, tab) in fg_tabs[fi].iter().enumerate().take(total + 1) {
                            if let Some(tab) = tab {
                                lhs = lhs
                                    .add(&self.ops[total - a].apply_with_tables(tab, &right[hi]));
                            }
                        }
                        let mut rhs = SymbolFunction::zero();
                        for (b, tab) in gh_tabs[hi].iter().enumerate().take(total + 1) {
                            if let Some(tab) = tab {
                                rhs =
                                    rhs.add(&self.ops[total - b].apply_with_tables(&left[fi], tab));
                            }
                        }
                        if lhs != rhs {
                            ok = false;
                            break 'orders;
                        }
                    }
                    if !ok {
                        fails.push([fi, gi, hi]);
                    }
                }
            }
            fails
        });
        let mut failing: Vec<[usize; 3]> = per_middle.into_iter().flatten().collect();
        failing.sort_unstable();
        let passed = failing.is_empty();
        failing.truncate(MAX_REPORTED_FAILURES);
        AssocReport {
            schema_version: crate::SCHEMA_VERSION,
            order,
            family_size: n,
            triples_checked: n * n * n,
            failing_triples: failing,
            passed,
        }
    }

    /// Sequential twin of [`StarProduct::check_associativity`].
    pub fn check_associativity_seq(&self, family: &[SymbolFunction]) -> AssocReport {
        self.check_associativity(family, false)
    }
}

const MAX_REPORTED_FAILURES: usize = 32;

/// Result of an exhaustive associativity check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AssocReport {
    pub schema_version: u32,
    pub order: usize,
    pub family_size: usize,
    pub triples_checked: usize,
    pub failing_triples: Vec<[usize; 3]>,
    pub passed: bool,
}

/// The field-corrected Poisson bracket: the canonical bracket plus the
/// field-strength contraction of the momentum derivatives.
pub fn poisson_bracket(f: &SymbolFunction, g: &SymbolFunction) -> SymbolFunction {
    let mut out = SymbolFunction::zero();
    for i in 0..3 {
        out = out.add(&f.diff_q(i).mul(&g.diff_p(i)));
        out = out.sub(&f.diff_p(i).mul(&g.diff_q(i)));
    }
    for i in 0..3 {
        for j in 0..3 {
            let beta = RadialFunction::beta(i, j);
            if beta.is_zero() {
                continue;
            }
            out = out.add(&f.diff_p(i).mul(&g.diff_p(j)).scale_radial(&beta));
        }
    }
    out
}

/// Closed-form order-`n` operator of the flat (field-free) product:
/// `(i/2)^n Σ_{|κ|+|λ|=n} (-1)^{|λ|}/(κ!λ!) ∂_q^κ∂_p^λ ⊗ ∂_p^κ∂_q^λ`.
pub fn moyal_operator(n: u32) -> BidiffOperator {
    let mut op = BidiffOperator::zero();
    let half_pow = Rat::new(BigInt::from(1), BigInt::from(2).pow(n));
    let half_i_pow = &GaussianRational::i_pow(n) * &GaussianRational::from_rat(half_pow);
    for k in 0..=n {
        for kappa in multiindex::of_total_degree(k) {
            for lambda in multiindex::of_total_degree(n - k) {
                let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
                let fact =
                    multiindex::multi_factorial(&kappa) * multiindex::multi_factorial(&lambda);
                let ratio = Rat::from_integer(BigInt::from(sign)) / fact;
                let coeff = &half_i_pow * &GaussianRational::from_rat(ratio);
                let key = BidiffKey {
                    left_p: lambda,
                    left_q: kappa,
                    right_p: kappa,
                    right_q: lambda,
                };
                op.insert(key, RadialFunction::constant(coeff));
            }
        }
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::reference::second_order_reference;

    fn cap() -> DegreeCap {
        DegreeCap::default()
    }

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn zeroth_operator_is_identity() {
        let star = StarProduct::new(2, cap()).unwrap();
        assert_eq!(star.op(0), &BidiffOperator::identity());
    }

    #[test]
    fn first_order_is_half_i_poisson_bracket() {
        let star = StarProduct::new(1, cap()).unwrap();
        let samples = [
            (SymbolFunction::p(0), SymbolFunction::q(0)),
            (SymbolFunction::p(0), SymbolFunction::p(1)),
            (
                SymbolFunction::p(2).mul(&SymbolFunction::q(1)),
                SymbolFunction::p(1),
            ),
            (
                SymbolFunction::from_radial(RadialFunction::inverse_radius(1)),
                SymbolFunction::p(0),
            ),
        ];
        let half_i = &gr(1, 2) * &GaussianRational::i();
        for (f, g) in &samples {
            let b1 = star.op(1).apply(f, g);
            let b1_swapped = star.op(1).apply(g, f);
            let bracket = poisson_bracket(f, g).scale(&half_i);
            assert_eq!(b1.sub(&b1_swapped), bracket.scale(&gr(2, 1)));
            assert_eq!(b1, bracket);
        }
    }

    #[test]
    fn expansion_matches_second_order_reference() {
        let star = StarProduct::new(2, cap()).unwrap();
        let reference = second_order_reference();
        for (n, expected) in reference.iter().enumerate() {
            assert_eq!(star.op(n), expected, "operator order {n}");
        }
    }

    #[test]
    fn field_free_limit_is_flat_product() {
        let star = StarProduct::new(3, cap()).unwrap().bind_mu(&gr(0, 1));
        for n in 0..=3u32 {
            assert_eq!(star.op(n as usize), &moyal_operator(n), "order {n}");
        }
    }

    fn index_pairs() -> Vec<(usize, usize)> {
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect()
    }

    #[test]
    fn momenta_star_commutator_reproduces_field() {
        // p_i ⋆ p_j − p_j ⋆ p_i = i h β_ij(q) exactly, with no higher terms.
        let star = StarProduct::new(2, cap()).unwrap();
        for (i, j) in index_pairs() {
            let fwd = star.star(&SymbolFunction::p(i), &SymbolFunction::p(j));
            let bwd = star.star(&SymbolFunction::p(j), &SymbolFunction::p(i));
            let comm = fwd.sub(&bwd);
            assert!(comm.coeff(0).is_zero());
            assert!(comm.coeff(2).is_zero());
            let expected = SymbolFunction::from_radial(RadialFunction::beta(i, j))
                .scale(&GaussianRational::i());
            assert_eq!(comm.coeff(1), &expected);
        }
    }

    #[test]
    fn star_series_matches_scalar_star_for_constant_series() {
        let star = StarProduct::new(2, cap()).unwrap();
        let f = SymbolFunction::p(0).mul(&SymbolFunction::q(2));
        let g = SymbolFunction::p(1);
        let fs = HbarSeries::constant(f.clone(), 2);
        let gs = HbarSeries::constant(g.clone(), 2);
        assert_eq!(star.star_series(&fs, &gs), star.star(&f, &g));
    }

    #[test]
    fn associator_vanishes_on_small_family() {
        let star = StarProduct::new(2, cap()).unwrap();
        let family = [
            SymbolFunction::p(0),
            SymbolFunction::q(1),
            SymbolFunction::from_radial(RadialFunction::inverse_radius(1)),
            SymbolFunction::p(1).mul(&SymbolFunction::p(2)),
        ];
        for f in &family {
            for g in &family {
                for h in &family {
                    let a = star.associator(f, g, h);
                    assert!(a.is_zero(), "associator nonzero for a triple");
                }
            }
        }
    }

    #[test]
    fn associativity_report_on_coordinate_family() {
        let star = StarProduct::new(2, cap()).unwrap();
        let family = families::coordinate_family();
        let report = star.check_associativity(&family, false);
        assert!(report.passed);
        assert_eq!(report.triples_checked, family.len().pow(3));
        assert!(report.failing_triples.is_empty());
    }

    #[test]
    fn parallel_and_sequential_reports_agree() {
        let star = StarProduct::new(1, cap()).unwrap();
        let family = families::coordinate_family();
        let par_report = star.check_associativity(&family, true);
        let seq_report = star.check_associativity_seq(&family);
        assert_eq!(par_report, seq_report);
    }

    #[test]
    fn broken_operator_table_fails_associativity() {
        // Perturb the second-order operator by a term that is not a Hochschild
        // cocycle (second derivative on the left, first on the right): its
        // coboundary is 2·β·∂f·∂g·∂h, so the exact check must flag it.
        // Note that derivation⊗derivation perturbations would NOT be caught at
        // this order — they are cocycles and leave the order-2 identity intact.
        let good = StarProduct::new(2, cap()).unwrap();
        let mut ops: Vec<BidiffOperator> = good.ops().to_vec();
        ops[2] = ops[2].add(&BidiffOperator::from_term(
            BidiffKey {
                left_p: [2, 0, 0],
                left_q: multiindex::ZERO,
                right_p: multiindex::unit(0),
                right_q: multiindex::ZERO,
            },
            RadialFunction::beta(0, 1),
        ));
        let bad = StarProduct::from_operators(ops);
        let family = vec![
            SymbolFunction::p(0),
            SymbolFunction::p(1),
            SymbolFunction::q(0),
        ];
        let report = bad.check_associativity(&family, false);
        assert!(!report.passed);
    }

    #[test]
    fn bracket_antisymmetry_and_leibniz() {
        let f = SymbolFunction::p(0).mul(&SymbolFunction::q(1));
        let g = SymbolFunction::p(2);
        let h = SymbolFunction::from_radial(RadialFunction::inverse_radius(1));
        assert_eq!(poisson_bracket(&f, &g), poisson_bracket(&g, &f).neg());
        // {f, gh} = {f, g} h + g {f, h}
        let lhs = poisson_bracket(&f, &g.mul(&h));
        let rhs = poisson_bracket(&f, &g)
            .mul(&h)
            .add(&g.mul(&poisson_bracket(&f, &h)));
        assert_eq!(lhs, rhs);
    }
}
