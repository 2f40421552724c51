//! Phase-space symbols: polynomials in the momentum `p` whose coefficients
//! are exact radial functions of the position `q`.

use crate::multiindex::{self, Idx3};
use crate::radial::RadialFunction;
use crate::rational::GaussianRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymbolFunction {
    terms: BTreeMap<Idx3, RadialFunction>,
}

impl SymbolFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_radial(RadialFunction::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_radial(RadialFunction::constant(c))
    }

    /// A position-only symbol.
    pub fn from_radial(rf: RadialFunction) -> Self {
        let mut s = SymbolFunction::default();
        if !rf.is_zero() {
            s.terms.insert(multiindex::ZERO, rf);
        }
        s
    }

    /// The momentum coordinate `p_i` (0-based).
    pub fn p(i: usize) -> Self {
        let mut s = SymbolFunction::default();
        s.terms.insert(multiindex::unit(i), RadialFunction::one());
        s
    }

    /// The position coordinate `q^i` (0-based).
    pub fn q(i: usize) -> Self {
        Self::from_radial(RadialFunction::coordinate(i))
    }

    pub fn monomial(p_alpha: Idx3, rf: RadialFunction) -> Self {
        let mut s = SymbolFunction::default();
        if !rf.is_zero() {
            s.terms.insert(p_alpha, rf);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Idx3, &RadialFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, key: Idx3, rf: RadialFunction) {
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

    pub fn add(&self, rhs: &SymbolFunction) -> SymbolFunction {
        let mut out = self.clone();
        for (k, rf) in &rhs.terms {
            out.insert(*k, rf.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &SymbolFunction) -> SymbolFunction {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SymbolFunction {
        let mut out = SymbolFunction::default();
        for (k, rf) in &self.terms {
            out.terms.insert(*k, rf.neg());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> SymbolFunction {
        if c.is_zero() {
            return SymbolFunction::zero();
        }
        let mut out = SymbolFunction::default();
        for (k, rf) in &self.terms {
            let scaled = rf.scale(c);
            if !scaled.is_zero() {
                out.terms.insert(*k, scaled);
            }
        }
        out
    }

    pub fn scale_radial(&self, rf: &RadialFunction) -> SymbolFunction {
        let mut out = SymbolFunction::default();
        for (k, v) in &self.terms {
            out.insert(*k, v.mul(rf));
        }
        out
    }

    pub fn mul(&self, rhs: &SymbolFunction) -> SymbolFunction {
        let mut out = SymbolFunction::default();
        for (ka, ra) in &self.terms {
            for (kb, rb) in &rhs.terms {
                out.insert(multiindex::add(ka, kb), ra.mul(rb));
            }
        }
        out
    }

    /// Partial derivative along `p_i`.
    pub fn diff_p(&self, i: usize) -> SymbolFunction {
        let mut out = SymbolFunction::default();
        for (k, rf) in &self.terms {
            if k[i] > 0 {
                let mut key = *k;
                key[i] -= 1;
                out.insert(key, rf.scale(&GaussianRational::from_int(k[i] as i64)));
            }
        }
        out
    }

    /// Partial derivative along `q^i`.
    pub fn diff_q(&self, i: usize) -> SymbolFunction {
        let mut out = SymbolFunction::default();
        for (k, rf) in &self.terms {
            out.insert(*k, rf.diff(i));
        }
        out
    }

    pub fn diff_p_multi(&self, alpha: &Idx3) -> SymbolFunction {
        let mut out = self.clone();
        for (axis, &count) in alpha.iter().enumerate() {
            for _ in 0..count {
                out = out.diff_p(axis);
            }
        }
        out
    }

    pub fn diff_q_multi(&self, gamma: &Idx3) -> SymbolFunction {
        let mut out = self.clone();
        for (axis, &count) in gamma.iter().enumerate() {
            for _ in 0..count {
                out = out.diff_q(axis);
            }
        }
        out
    }

    /// Largest power of `mu` appearing in any coefficient.
    pub fn max_mu_power(&self) -> u32 {
        self.terms
            .values()
            .map(|rf| rf.max_mu_power())
            .max()
            .unwrap_or(0)
    }

    /// The part whose coefficients carry `mu^s` exactly.
    pub fn mu_component(&self, s: u32) -> SymbolFunction {
        let mut out = SymbolFunction::default();
        for (k, rf) in &self.terms {
            let part = rf.mu_component(s);
            if !part.is_zero() {
                out.terms.insert(*k, part);
            }
        }
        out
    }

    /// Decompose by `mu`-degree; only nonzero components are returned.
    pub fn mu_components(&self) -> BTreeMap<u32, SymbolFunction> {
        let mut out = BTreeMap::new();
        for s in 0..=self.max_mu_power() {
            let part = self.mu_component(s);
            if !part.is_zero() {
                out.insert(s, part);
            }
        }
        out
    }
}

impl fmt::Display for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(k, rf)| {
                let mut factors = Vec::new();
                for (axis, name) in ["p1", "p2", "p3"].iter().enumerate() {
                    match k[axis] {
                        0 => {}
                        1 => factors.push(name.to_string()),
                        n => factors.push(format!("{name}^{n}")),
                    }
                }
                if factors.is_empty() {
                    format!("[{rf}]")
                } else {
                    format!("[{rf}]*{}", factors.join("*"))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolTermRepr {
    coeff: GaussianRational,
    mu: u32,
    m: u32,
    p_alpha: Idx3,
    q_alpha: Idx3,
}

impl Serialize for SymbolFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut v = Vec::new();
        for (p_alpha, rf) in &self.terms {
            for (rk, c) in rf.terms() {
                v.push(SymbolTermRepr {
                    coeff: c.clone(),
                    mu: rk.mu,
                    m: rk.m,
                    p_alpha: *p_alpha,
                    q_alpha: rk.alpha,
                });
            }
        }
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymbolFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<SymbolTermRepr>::deserialize(deserializer)?;
        let mut s = SymbolFunction::default();
        for t in v {
            s.insert(
                t.p_alpha,
                RadialFunction::from_term(t.mu, t.m, t.q_alpha, t.coeff),
            );
        }
        Ok(s)
    }
}
