//! Independently assembled reference table for the deformed product through
//! second order.
//!
//! The operators here are written out term by term from the closed-form
//! second-order display of the product, with no use of the expansion
//! pipeline. They serve as the ground truth that the pipeline must reproduce
//! exactly, and are also embedded as a JSON data file so external consumers
//! can read the table without running the expansion.

use crate::bidiff::{BidiffKey, BidiffOperator};
use crate::multiindex::{self, Idx3};
use crate::radial::RadialFunction;
use crate::rational::GaussianRational;

fn gr(n: i64, d: i64) -> GaussianRational {
    GaussianRational::from_ratio(n, d)
}

fn gi(n: i64, d: i64) -> GaussianRational {
    &GaussianRational::from_ratio(n, d) * &GaussianRational::i()
}

fn key(left_p: Idx3, left_q: Idx3, right_p: Idx3, right_q: Idx3) -> BidiffKey {
    BidiffKey {
        left_p,
        left_q,
        right_p,
        right_q,
    }
}

fn e(i: usize) -> Idx3 {
    multiindex::unit(i)
}

fn e2(i: usize, j: usize) -> Idx3 {
    multiindex::add(&multiindex::unit(i), &multiindex::unit(j))
}

const Z: Idx3 = multiindex::ZERO;

/// `B_0`, `B_1`, `B_2` of the deformed product, assembled by hand.
pub fn second_order_reference() -> Vec<BidiffOperator> {
    vec![order_zero(), order_one(), order_two()]
}

fn order_zero() -> BidiffOperator {
    BidiffOperator::identity()
}

/// `(i/2) [∂_q·∂'_p − ∂_p·∂'_q + ∂_p·β ∂'_p]`.
fn order_one() -> BidiffOperator {
    let mut op = BidiffOperator::zero();
    for i in 0..3 {
        op.insert(key(Z, e(i), e(i), Z), RadialFunction::constant(gi(1, 2)));
        op.insert(key(e(i), Z, Z, e(i)), RadialFunction::constant(gi(-1, 2)));
    }
    for i in 0..3 {
        for j in 0..3 {
            let beta = RadialFunction::beta(i, j);
            if !beta.is_zero() {
                op.insert(key(e(i), Z, e(j), Z), beta.scale(&gi(1, 2)));
            }
        }
    }
    op
}

/// The four second-order groups: the squared flat part, the cross terms with
/// the field, the squared field contraction, and the field-gradient terms.
fn order_two() -> BidiffOperator {
    let mut op = BidiffOperator::zero();
    // -(1/8)(∂_q·∂'_p − ∂_p·∂'_q)^2 expanded into its three contractions.
    for i in 0..3 {
        for j in 0..3 {
            op.insert(
                key(Z, e2(i, j), e2(i, j), Z),
                RadialFunction::constant(gr(-1, 8)),
            );
            op.insert(
                key(e(j), e(i), e(i), e(j)),
                RadialFunction::constant(gr(1, 4)),
            );
            op.insert(
                key(e2(i, j), Z, Z, e2(i, j)),
                RadialFunction::constant(gr(-1, 8)),
            );
        }
    }
    // -(1/4) β_ij (∂_{q_k}∂_{p_i} ⊗ ∂_{p_k}∂_{p_j} − ∂_{p_k}∂_{p_i} ⊗ ∂_{q_k}∂_{p_j}).
    for i in 0..3 {
        for j in 0..3 {
            let beta = RadialFunction::beta(i, j);
            if beta.is_zero() {
                continue;
            }
            for k in 0..3 {
                op.insert(key(e(i), e(k), e2(k, j), Z), beta.scale(&gr(-1, 4)));
                op.insert(key(e2(k, i), Z, e(j), e(k)), beta.scale(&gr(1, 4)));
            }
        }
    }
    // -(1/8) β_ij β_kl ∂_{p_i}∂_{p_k} ⊗ ∂_{p_j}∂_{p_l}.
    for i in 0..3 {
        for j in 0..3 {
            let beta_ij = RadialFunction::beta(i, j);
            if beta_ij.is_zero() {
                continue;
            }
            for k in 0..3 {
                for l in 0..3 {
                    let beta_kl = RadialFunction::beta(k, l);
                    if beta_kl.is_zero() {
                        continue;
                    }
                    op.insert(
                        key(e2(i, k), Z, e2(j, l), Z),
                        beta_ij.mul(&beta_kl).scale(&gr(-1, 8)),
                    );
                }
            }
        }
    }
    // +(1/12) ∂_{q_k}β_ij (∂_{p_i}∂_{p_k} ⊗ ∂_{p_j} − ∂_{p_i} ⊗ ∂_{p_k}∂_{p_j}).
    for i in 0..3 {
        for j in 0..3 {
            let beta = RadialFunction::beta(i, j);
            if beta.is_zero() {
                continue;
            }
            for k in 0..3 {
                let grad = beta.diff(k);
                if grad.is_zero() {
                    continue;
                }
                op.insert(key(e2(i, k), Z, e(j), Z), grad.scale(&gr(1, 12)));
                op.insert(key(e(i), Z, e2(k, j), Z), grad.scale(&gr(-1, 12)));
            }
        }
    }
    op
}

/// The same table parsed from the embedded JSON artifact.
pub fn second_order_reference_from_data() -> Vec<BidiffOperator> {
    const DATA: &str = include_str!("../data/second_order_reference.json");
    serde_json::from_str(DATA).expect("embedded reference table must parse")
}
