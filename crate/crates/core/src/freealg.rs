//! Truncated free associative algebra over two generators, the exponential
//! splitting that factors `exp(X+Y)` as `exp(X)·exp(Y)·Π_n exp(C_n)`, and the
//! right-nested-bracket (Dynkin) projection used to certify that each `C_n`
//! is a Lie element.

use crate::error::{Error, Result};
use crate::rational::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Letter {
    X,
    Y,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X => write!(f, "X"),
            Letter::Y => write!(f, "Y"),
        }
    }
}

pub type Word = Vec<Letter>;

/// Element of the free algebra modulo words longer than `max_degree`.
#[derive(Clone, PartialEq, Debug)]
pub struct FreeAlgebraElement {
    max_degree: usize,
    terms: BTreeMap<Word, Rat>,
}

impl FreeAlgebraElement {
    pub fn zero(max_degree: usize) -> Self {
        FreeAlgebraElement {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(max_degree: usize) -> Self {
        let mut e = Self::zero(max_degree);
        e.terms.insert(Vec::new(), Rat::one());
        e
    }

    pub fn generator(letter: Letter, max_degree: usize) -> Self {
        let mut e = Self::zero(max_degree);
        if max_degree >= 1 {
            e.terms.insert(vec![letter], Rat::one());
        }
        e
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, word: Word, c: Rat) {
        if c.is_zero() || word.len() > self.max_degree {
            return;
        }
        match self.terms.entry(word) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.max_degree, rhs.max_degree);
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.max_degree);
        if c.is_zero() {
            return out;
        }
        for (w, v) in &self.terms {
            out.terms.insert(w.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.max_degree, rhs.max_degree);
        let mut out = Self::zero(self.max_degree);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                if wa.len() + wb.len() > self.max_degree {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.insert(w, ca * cb);
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Exponential of an element with no constant term.
    pub fn exp(&self) -> Self {
        assert!(
            !self.terms.contains_key(&Vec::new()),
            "exp requires a vanishing constant term"
        );
        let mut out = Self::one(self.max_degree);
        let mut power = Self::one(self.max_degree);
        let mut factorial = Rat::one();
        for k in 1..=self.max_degree {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            factorial *= Rat::from_integer(BigInt::from(k));
            out = out.add(&power.scale(&(Rat::one() / factorial.clone())));
        }
        out
    }

    /// The part of the element spanned by words of length exactly `n`.
    pub fn homogeneous(&self, n: usize) -> Self {
        let mut out = Self::zero(self.max_degree);
        for (w, c) in &self.terms {
            if w.len() == n {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).min()
    }
}

impl fmt::Display for FreeAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: String = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|l| l.to_string()).collect()
                };
                format!("({c})·{word}")
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Exponential splitting terms `C_2 .. C_n_max`:
/// `exp(X+Y) = exp(X)·exp(Y)·exp(C_2)·exp(C_3)·…` in the algebra truncated at
/// degree `n_max`. Extraction peels the lowest-degree homogeneous part of
/// `exp(-Y)·exp(-X)·exp(X+Y)` and divides it off, one degree at a time.
pub fn zassenhaus_terms(n_max: usize) -> Vec<FreeAlgebraElement> {
    let x = FreeAlgebraElement::generator(Letter::X, n_max);
    let y = FreeAlgebraElement::generator(Letter::Y, n_max);
    let mut rest = y
        .scale(&-Rat::one())
        .exp()
        .mul(&x.scale(&-Rat::one()).exp())
        .mul(&x.add(&y).exp());
    let mut out = Vec::new();
    for n in 2..=n_max {
        for lower in 0..n {
            debug_assert!(
                if lower == 0 {
                    rest.homogeneous(0) == FreeAlgebraElement::one(n_max)
                } else {
                    rest.homogeneous(lower).is_zero()
                },
                "unexpected low-degree remainder at degree {lower}"
            );
        }
        let c = rest.homogeneous(n);
        rest = c.scale(&-Rat::one()).exp().mul(&rest);
        out.push(c);
    }
    out
}

/// One summand of a right-nested commutator combination.
#[derive(Clone, PartialEq, Debug)]
pub struct NestedTerm {
    pub coeff: Rat,
    pub word: Word,
}

/// A rational combination of right-nested commutators
/// `[z_1,[z_2,…[z_{k-1},z_k]…]]`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct NestedCommutatorCombo {
    pub terms: Vec<NestedTerm>,
}

impl NestedCommutatorCombo {
    /// Expand all nested brackets back into the free algebra.
    pub fn expand(&self, max_degree: usize) -> FreeAlgebraElement {
        let mut out = FreeAlgebraElement::zero(max_degree);
        for t in &self.terms {
            out = out.add(&expand_nested(&t.word, max_degree).scale(&t.coeff));
        }
        out
    }
}

impl fmt::Display for NestedCommutatorCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("({})·{}", t.coeff, render_nested(&t.word)))
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

fn render_nested(word: &[Letter]) -> String {
    match word {
        [] => "1".to_string(),
        [z] => z.to_string(),
        [z, rest @ ..] => format!("[{},{}]", z, render_nested(rest)),
    }
}

fn expand_nested(word: &[Letter], max_degree: usize) -> FreeAlgebraElement {
    match word {
        [] => FreeAlgebraElement::zero(max_degree),
        [z] => FreeAlgebraElement::generator(*z, max_degree),
        [z, rest @ ..] => {
            let inner = expand_nested(rest, max_degree);
            FreeAlgebraElement::generator(*z, max_degree).commutator(&inner)
        }
    }
}

/// Project a homogeneous degree-`n` element onto right-nested commutators by
/// `z_1…z_n -> (1/n)[z_1,[z_2,…[z_{n-1},z_n]…]]`.
///
/// On Lie elements this map is the identity; the round-trip expansion is
/// compared against the input and a mismatch reports [`Error::NotLieElement`].
pub fn dynkin_project(e: &FreeAlgebraElement, n: usize) -> Result<NestedCommutatorCombo> {
    assert!(n >= 1);
    let mut combo = NestedCommutatorCombo::default();
    for (w, c) in e.terms() {
        assert_eq!(w.len(), n, "element is not homogeneous of degree {n}");
        combo.terms.push(NestedTerm {
            coeff: c / Rat::from_integer(BigInt::from(n)),
            word: w.clone(),
        });
    }
    if combo.expand(e.max_degree()) != *e {
        return Err(Error::NotLieElement(n));
    }
    Ok(combo)
}
