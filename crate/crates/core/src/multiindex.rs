//! Three-component multi-indices for exponents of coordinate triples.

use crate::rational::Rat;
use num_bigint::BigInt;
use num_traits::One;

/// Exponent triple for one block of variables.
pub type Idx3 = [u16; 3];

pub const ZERO: Idx3 = [0, 0, 0];

/// Unit multi-index along axis `i` (0-based).
pub fn unit(i: usize) -> Idx3 {
    let mut e = ZERO;
    e[i] = 1;
    e
}

pub fn total(a: &Idx3) -> u32 {
    a[0] as u32 + a[1] as u32 + a[2] as u32
}

pub fn add(a: &Idx3, b: &Idx3) -> Idx3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Component-wise subtraction; `None` if any component would go negative.
pub fn checked_sub(a: &Idx3, b: &Idx3) -> Option<Idx3> {
    if a[0] >= b[0] && a[1] >= b[1] && a[2] >= b[2] {
        Some([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
    } else {
        None
    }
}

pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Multi-index factorial `a! = a1! a2! a3!` as a rational.
pub fn multi_factorial(a: &Idx3) -> Rat {
    let prod = factorial(a[0] as u32) * factorial(a[1] as u32) * factorial(a[2] as u32);
    Rat::from_integer(prod)
}

pub fn binomial(n: u16, k: u16) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All multi-indices with total degree exactly `k`, in lexicographic order.
pub fn of_total_degree(k: u32) -> Vec<Idx3> {
    let k = u16::try_from(k).expect("multi-index degree out of range");
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=(k - a) {
            out.push([a, b, k - a - b]);
        }
    }
    out
}

/// Evaluate `x^a` for a numeric point.
pub fn eval_pow(a: &Idx3, x: &[f64; 3]) -> f64 {
    x[0].powi(a[0] as i32) * x[1].powi(a[1] as i32) * x[2].powi(a[2] as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(of_total_degree(0), vec![[0, 0, 0]]);
        assert_eq!(of_total_degree(2).len(), 6);
        assert_eq!(of_total_degree(5).len(), 21);
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(5, 2).to_i64(), Some(10));
        assert_eq!(factorial(6).to_i64(), Some(720));
        assert_eq!(
            multi_factorial(&[2, 1, 3]),
            Rat::from_integer(BigInt::from(12))
        );
    }
}
