//! Second-order graph-expansion product for a variable Poisson matrix, and
//! the exact equivalence check against the operator-table product.
//!
//! Phase-space coordinates are ordered `(p1, p2, p3, q1, q2, q3)`. The
//! monopole structure is the block matrix `[[β(q), -I], [I, 0]]`.

use crate::hbar::HbarSeries;
use crate::par;
use crate::radial::RadialFunction;
use crate::rational::GaussianRational;
use crate::star::StarProduct;
use crate::symbol::SymbolFunction;
use serde::{Deserialize, Serialize};

pub const PHASE_DIM: usize = 6;

/// Antisymmetric matrix of symbol entries defining a Poisson structure.
#[derive(Clone, Debug)]
pub struct PoissonMatrix {
    entries: Vec<Vec<SymbolFunction>>,
}

/// Derivative along phase-space coordinate `a` in the fixed ordering.
fn deriv(f: &SymbolFunction, a: usize) -> SymbolFunction {
    if a < 3 {
        f.diff_p(a)
    } else {
        f.diff_q(a - 3)
    }
}

impl PoissonMatrix {
    /// Build from explicit entries; antisymmetry is enforced exactly.
    pub fn new(entries: Vec<Vec<SymbolFunction>>) -> PoissonMatrix {
        assert_eq!(entries.len(), PHASE_DIM, "phase-space dimension is fixed");
        for row in &entries {
            assert_eq!(row.len(), PHASE_DIM);
        }
        for (a, row) in entries.iter().enumerate() {
            assert!(row[a].is_zero(), "diagonal must vanish");
            for (b, entry) in row.iter().enumerate().skip(a + 1) {
                assert_eq!(
                    *entry,
                    entries[b][a].neg(),
                    "antisymmetry violated at ({a},{b})"
                );
            }
        }
        PoissonMatrix { entries }
    }

    pub fn entry(&self, a: usize, b: usize) -> &SymbolFunction {
        &self.entries[a][b]
    }

    /// Indices of nonzero entries, precomputed for contraction loops.
    fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..PHASE_DIM {
            for b in 0..PHASE_DIM {
                if !self.entries[a][b].is_zero() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Cyclic Jacobi contraction `Σ_d [P^{da}∂_d P^{bc} + P^{db}∂_d P^{ca} +
    /// P^{dc}∂_d P^{ab}]` for one index triple.
    pub fn jacobi_contraction(&self, a: usize, b: usize, c: usize) -> SymbolFunction {
        let mut acc = SymbolFunction::zero();
        for d in 0..PHASE_DIM {
            acc = acc.add(&self.entries[d][a].mul(&deriv(&self.entries[b][c], d)));
            acc = acc.add(&self.entries[d][b].mul(&deriv(&self.entries[c][a], d)));
            acc = acc.add(&self.entries[d][c].mul(&deriv(&self.entries[a][b], d)));
        }
        acc
    }

    /// True when every Jacobi contraction reduces to canonical zero.
    pub fn jacobi_holds(&self) -> bool {
        for a in 0..PHASE_DIM {
            for b in (a + 1)..PHASE_DIM {
                for c in (b + 1)..PHASE_DIM {
                    if !self.jacobi_contraction(a, b, c).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The monopole Poisson matrix `[[β(q), -I], [I, 0]]`.
pub fn block_poisson() -> PoissonMatrix {
    let mut entries = vec![vec![SymbolFunction::zero(); PHASE_DIM]; PHASE_DIM];
    for (i, row) in entries.iter_mut().take(3).enumerate() {
        for (j, cell) in row.iter_mut().take(3).enumerate() {
            *cell = SymbolFunction::from_radial(RadialFunction::beta(i, j));
        }
    }
    let minus_one = SymbolFunction::constant(GaussianRational::from_int(-1));
    let one = SymbolFunction::one();
    for i in 0..3 {
        entries[i][i + 3] = minus_one.clone();
        entries[i + 3][i] = one.clone();
    }
    PoissonMatrix::new(entries)
}

/// Constant flat symplectic matrix `[[0, -I], [I, 0]]` (field switched off).
pub fn flat_poisson() -> PoissonMatrix {
    let mut entries = vec![vec![SymbolFunction::zero(); PHASE_DIM]; PHASE_DIM];
    let minus_one = SymbolFunction::constant(GaussianRational::from_int(-1));
    let one = SymbolFunction::one();
    for i in 0..3 {
        entries[i][i + 3] = minus_one.clone();
        entries[i + 3][i] = one.clone();
    }
    PoissonMatrix::new(entries)
}

/// Second-order graph-expansion product:
/// `fg + (i h/2) P^{ab} ∂_a f ∂_b g
///  - (h²/8) P^{a1b1} P^{a2b2} ∂_{a1}∂_{a2} f ∂_{b1}∂_{b2} g
///  - (h²/12) P^{a1b1} ∂_{b1} P^{a2b2} (∂_{a1}∂_{a2} f ∂_{b2} g − ∂_{a2} f ∂_{a1}∂_{b2} g)`.
pub fn kontsevich_star2(
    f: &SymbolFunction,
    g: &SymbolFunction,
    p: &PoissonMatrix,
) -> HbarSeries<SymbolFunction> {
    let support = p.support();
    let half_i = &GaussianRational::from_ratio(1, 2) * &GaussianRational::i();

    let order0 = f.mul(g);

    let mut order1 = SymbolFunction::zero();
    for &(a, b) in &support {
        order1 = order1.add(&p.entry(a, b).mul(&deriv(f, a)).mul(&deriv(g, b)));
    }
    let order1 = order1.scale(&half_i);

    let mut double = SymbolFunction::zero();
    for &(a1, b1) in &support {
        for &(a2, b2) in &support {
            let left = deriv(&deriv(f, a1), a2);
            if left.is_zero() {
                continue;
            }
            let right = deriv(&deriv(g, b1), b2);
            if right.is_zero() {
                continue;
            }
            double = double.add(&p.entry(a1, b1).mul(p.entry(a2, b2)).mul(&left).mul(&right));
        }
    }
    let double = double.scale(&GaussianRational::from_ratio(-1, 8));

    let mut gradient = SymbolFunction::zero();
    for &(a1, b1) in &support {
        for &(a2, b2) in &support {
            let dp = deriv(p.entry(a2, b2), b1);
            if dp.is_zero() {
                continue;
            }
            let factor = p.entry(a1, b1).mul(&dp);
            let first = deriv(&deriv(f, a1), a2).mul(&deriv(g, b2));
            let second = deriv(f, a2).mul(&deriv(&deriv(g, b2), a1));
            gradient = gradient.add(&factor.mul(&first.sub(&second)));
        }
    }
    let gradient = gradient.scale(&GaussianRational::from_ratio(-1, 12));

    HbarSeries::from_coeffs(vec![order0, order1, double.add(&gradient)])
}

/// Report for the pairwise equivalence of the two second-order products.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct KontsevichReport {
    pub schema_version: u32,
    pub family_size: usize,
    pub pairs_checked: usize,
    pub failing_pairs: Vec<[usize; 2]>,
    pub jacobi_satisfied: bool,
    pub passed: bool,
}

/// Compare the graph-expansion product with the operator-table product on
/// every ordered pair from a family; both are exact, so equality is
/// coefficient-wise canonical equality. `star` must be truncated at order 2.
pub fn check_equivalence(
    family: &[SymbolFunction],
    star: &StarProduct,
    parallel: bool,
) -> KontsevichReport {
    assert_eq!(star.order(), 2, "equivalence is defined at second order");
    let p = block_poisson();
    let n = family.len();
    let per_left: Vec<Vec<[usize; 2]>> = par::run_map_indexed(parallel, n, |fi| {
        let f = &family[fi];
        let ft = star.left_table(f);
        let mut fails = Vec::new();
        for (gi, g) in family.iter().enumerate() {
            let gt = star.right_table(g);
            let via_table = star.star_with_tables(&ft, &gt);
            let via_graphs = kontsevich_star2(f, g, &p);
            if via_table != via_graphs {
                fails.push([fi, gi]);
            }
        }
        fails
    });
    let mut failing: Vec<[usize; 2]> = per_left.into_iter().flatten().collect();
    failing.sort_unstable();
    let jacobi_satisfied = p.jacobi_holds();
    let passed = failing.is_empty() && jacobi_satisfied;
    failing.truncate(32);
    KontsevichReport {
        schema_version: crate::SCHEMA_VERSION,
        family_size: n,
        pairs_checked: n * n,
        failing_pairs: failing,
        jacobi_satisfied,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::DegreeCap;
    use crate::star::moyal_operator;

    #[test]
    fn block_matrix_entries() {
        let p = block_poisson();
        assert_eq!(
            p.entry(0, 1),
            &SymbolFunction::from_radial(RadialFunction::beta(0, 1))
        );
        assert_eq!(
            p.entry(0, 3),
            &SymbolFunction::constant(GaussianRational::from_int(-1))
        );
        assert_eq!(p.entry(3, 0), &SymbolFunction::one());
        assert!(p.entry(4, 5).is_zero());
    }

    #[test]
    #[should_panic(expected = "antisymmetry")]
    fn constructor_rejects_symmetric_entries() {
        let mut entries = vec![vec![SymbolFunction::zero(); PHASE_DIM]; PHASE_DIM];
        entries[0][1] = SymbolFunction::one();
        entries[1][0] = SymbolFunction::one();
        PoissonMatrix::new(entries);
    }

    #[test]
    fn jacobi_identity_for_block_matrix() {
        assert!(block_poisson().jacobi_holds());
        assert!(flat_poisson().jacobi_holds());
    }

    #[test]
    fn jacobi_fails_for_divergent_field() {
        // Replacing the monopole entries by a non-divergence-free field must
        // break the Jacobi identity, confirming the check has teeth.
        let mut entries = vec![vec![SymbolFunction::zero(); PHASE_DIM]; PHASE_DIM];
        let q3 = SymbolFunction::q(2);
        entries[0][1] = q3.clone();
        entries[1][0] = q3.neg();
        let minus_one = SymbolFunction::constant(GaussianRational::from_int(-1));
        let one = SymbolFunction::one();
        for i in 0..3 {
            entries[i][i + 3] = minus_one.clone();
            entries[i + 3][i] = one.clone();
        }
        let p = PoissonMatrix::new(entries);
        assert!(!p.jacobi_holds());
    }

    #[test]
    fn momenta_product_at_first_order() {
        let p = block_poisson();
        let series = kontsevich_star2(&SymbolFunction::p(0), &SymbolFunction::p(1), &p);
        assert_eq!(
            series.coeff(0),
            &SymbolFunction::p(0).mul(&SymbolFunction::p(1))
        );
        let half_i = &GaussianRational::from_ratio(1, 2) * &GaussianRational::i();
        assert_eq!(
            series.coeff(1),
            &SymbolFunction::from_radial(RadialFunction::beta(0, 1)).scale(&half_i)
        );
    }

    #[test]
    fn flat_matrix_reproduces_flat_product() {
        let p = flat_poisson();
        let samples = [
            (
                SymbolFunction::p(0).mul(&SymbolFunction::p(0)),
                SymbolFunction::q(0).mul(&SymbolFunction::q(0)),
            ),
            (
                SymbolFunction::p(1).mul(&SymbolFunction::q(2)),
                SymbolFunction::p(2).mul(&SymbolFunction::q(1)),
            ),
        ];
        for (f, g) in &samples {
            let series = kontsevich_star2(f, g, &p);
            for n in 0..=2u32 {
                let expected = moyal_operator(n).apply(f, g);
                assert_eq!(series.coeff(n as usize), &expected, "order {n}");
            }
        }
    }

    #[test]
    fn first_order_antisymmetrization_identity() {
        let p = block_poisson();
        let f = SymbolFunction::p(0).mul(&SymbolFunction::q(1));
        let g = SymbolFunction::p(2);
        let fg = kontsevich_star2(&f, &g, &p);
        let gf = kontsevich_star2(&g, &f, &p);
        let lhs = fg.coeff(1).sub(gf.coeff(1));
        let mut contraction = SymbolFunction::zero();
        for a in 0..PHASE_DIM {
            for b in 0..PHASE_DIM {
                if p.entry(a, b).is_zero() {
                    continue;
                }
                let fwd = deriv(&f, a).mul(&deriv(&g, b));
                let bwd = deriv(&g, a).mul(&deriv(&f, b));
                contraction = contraction.add(&p.entry(a, b).mul(&fwd.sub(&bwd)));
            }
        }
        let half_i = &GaussianRational::from_ratio(1, 2) * &GaussianRational::i();
        assert_eq!(lhs, contraction.scale(&half_i));
    }

    #[test]
    fn equivalence_on_small_family() {
        let star = StarProduct::new(2, DegreeCap::default()).unwrap();
        let family = vec![
            SymbolFunction::one(),
            SymbolFunction::p(0),
            SymbolFunction::q(1),
            SymbolFunction::p(1).mul(&SymbolFunction::p(2)),
            SymbolFunction::from_radial(RadialFunction::inverse_radius(1)),
        ];
        let report = check_equivalence(&family, &star, false);
        assert!(report.passed);
        assert!(report.jacobi_satisfied);
        assert_eq!(report.pairs_checked, 25);
    }
}
