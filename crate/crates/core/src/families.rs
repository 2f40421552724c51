//! Named families of phase-space symbols used by the verification drivers
//! and the command-line surface.

use crate::multiindex;
use crate::radial::RadialFunction;
use crate::symbol::SymbolFunction;

/// The constant and the six coordinates: `{1, p_1, p_2, p_3, q^1, q^2, q^3}`.
pub fn coordinate_family() -> Vec<SymbolFunction> {
    let mut family = vec![SymbolFunction::one()];
    for i in 0..3 {
        family.push(SymbolFunction::p(i));
    }
    for i in 0..3 {
        family.push(SymbolFunction::q(i));
    }
    family
}

/// The 32-element family for the associativity and equivalence sweeps:
/// the constant, all coordinates, all quadratic monomials, the inverse
/// radius, and the inverse radius times each position coordinate.
pub fn quadratic_family() -> Vec<SymbolFunction> {
    let mut family = coordinate_family();
    for i in 0..3 {
        for j in i..3 {
            family.push(SymbolFunction::p(i).mul(&SymbolFunction::p(j)));
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            family.push(SymbolFunction::p(i).mul(&SymbolFunction::q(j)));
        }
    }
    for i in 0..3 {
        for j in i..3 {
            family.push(SymbolFunction::q(i).mul(&SymbolFunction::q(j)));
        }
    }
    family.push(SymbolFunction::from_radial(RadialFunction::inverse_radius(
        1,
    )));
    for i in 0..3 {
        family.push(SymbolFunction::from_radial(RadialFunction::from_term(
            0,
            1,
            multiindex::unit(i),
            crate::rational::GaussianRational::from_int(1),
        )));
    }
    family
}

/// Resolve a family by name. `None` for unknown names.
pub fn named_family(name: &str) -> Option<Vec<SymbolFunction>> {
    match name {
        "coordinate" => Some(coordinate_family()),
        "quadratic" => Some(quadratic_family()),
        _ => None,
    }
}

/// Names accepted by [`named_family`].
pub const FAMILY_NAMES: &[&str] = &["coordinate", "quadratic"];
