//! The subspace lattice `L(H)`: meet, join, orthocomplement, commutativity,
//! the frequency inequality `p(E₁) + p(E₂) − p(E₁∧E₂) ≤ 1`, and an explicit
//! pure state violating it for any non-commuting pair.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::hilbert::{
    gleason_measure, orthonormal_range, projector_onto_columns, CMatrix, DensityOperator, Projector,
    StateVector, TAU_OP, TAU_PROB,
};

/// Elements of `L(H)` are represented by their projectors.
pub type LatticeElement = Projector;

fn same_dim(e1: &Projector, e2: &Projector) -> Result<usize> {
    if e1.dim() != e2.dim() {
        return Err(Error::Dimension(format!("lattice operands have dims {} and {}", e1.dim(), e2.dim())));
    }
    Ok(e1.dim())
}

/// Projector onto the closed span of `range(E1) ∪ range(E2)`.
pub fn join(e1: &Projector, e2: &Projector) -> Result<Projector> {
    let dim = same_dim(e1, e2)?;
    let mut cols = CMatrix::zeros(dim, 2 * dim);
    cols.columns_mut(0, dim).copy_from(e1.matrix());
    cols.columns_mut(dim, dim).copy_from(e2.matrix());
    Projector::new(projector_onto_columns(&cols).matrix().clone())
}

/// `I − E`.
pub fn complement(e: &Projector) -> Projector {
    let dim = e.dim();
    let m = CMatrix::identity(dim, dim) - e.matrix();
    Projector::new(m).expect("complement of a valid projector is a projector")
}

/// Projector onto `range(E1) ∩ range(E2)`, computed as
/// `(E1^⊥ ∨ E2^⊥)^⊥` with a single SVD.
pub fn meet(e1: &Projector, e2: &Projector) -> Result<Projector> {
    same_dim(e1, e2)?;
    Ok(complement(&join(&complement(e1), &complement(e2))?))
}

/// `E1 ≤ E2` as subspaces.
pub fn is_below(e1: &Projector, e2: &Projector) -> Result<bool> {
    same_dim(e1, e2)?;
    let defect = (e2.matrix() * e1.matrix() - e1.matrix()).norm();
    Ok(defect <= TAU_OP)
}

/// Frobenius norm of the commutator `[E1, E2]`.
pub fn commutator_norm(e1: &Projector, e2: &Projector) -> Result<f64> {
    same_dim(e1, e2)?;
    let (a, b) = (e1.matrix(), e2.matrix());
    Ok((a * b - b * a).norm())
}

/// True iff `‖E1 E2 − E2 E1‖_F ≤ τ_op`.
pub fn commutes(e1: &Projector, e2: &Projector) -> Result<bool> {
    Ok(commutator_norm(e1, e2)? <= TAU_OP)
}

/// `p(E1) + p(E2) − p(E1 ∧ E2)` in state `W`. Exceeding 1 means the three
/// trace probabilities cannot be read as relative frequencies.
pub fn frequency_inequality_lhs(w: &DensityOperator, e1: &Projector, e2: &Projector) -> Result<f64> {
    let c = meet(e1, e2)?;
    Ok(gleason_measure(w, e1)? + gleason_measure(w, e2)? - gleason_measure(w, &c)?)
}

/// `p(E1 ∨ E2) − [p(E1) + p(E2) − p(E1 ∧ E2)]`; zero iff inclusion–exclusion
/// holds for this pair in this state.
pub fn modular_defect(w: &DensityOperator, e1: &Projector, e2: &Projector) -> Result<f64> {
    let j = join(e1, e2)?;
    Ok(gleason_measure(w, &j)? - frequency_inequality_lhs(w, e1, e2)?)
}

/// `E1 = C ∨ A`, `E2 = C ∨ B` with `C = E1 ∧ E2` and `A, B ⊥ C`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeDecomposition {
    pub common: Projector,
    pub first_rest: Projector,
    pub second_rest: Projector,
}

pub fn relative_decomposition(e1: &Projector, e2: &Projector) -> Result<RelativeDecomposition> {
    let c = meet(e1, e2)?;
    // C ≤ E1 and C ≤ E2, so the differences are projectors.
    let a = Projector::new(e1.matrix() - c.matrix())?;
    let b = Projector::new(e2.matrix() - c.matrix())?;
    Ok(RelativeDecomposition { common: c, first_rest: a, second_rest: b })
}

/// A pure state together with the three trace probabilities it assigns.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationWitness {
    pub state: StateVector,
    pub p1: f64,
    pub p2: f64,
    pub p12: f64,
    pub lhs: f64,
}

impl ViolationWitness {
    pub fn violates(&self) -> bool {
        self.lhs > 1.0 + TAU_PROB
    }
}

/// For a non-commuting pair, returns the unit vector `Ψ ∈ range(E1 − E1∧E2)`
/// maximizing `<Ψ, E2 Ψ>`. Then `p(E1) = 1`, `p(E1∧E2) = 0` and `p(E2) > 0`,
/// so the frequency inequality fails.
pub fn construct_violating_state(e1: &Projector, e2: &Projector) -> Result<ViolationWitness> {
    same_dim(e1, e2)?;
    if commutes(e1, e2)? {
        return Err(Error::Precondition(
            "projectors commute; the frequency inequality holds in every state".into(),
        ));
    }
    let dec = relative_decomposition(e1, e2)?;
    let basis = orthonormal_range(dec.first_rest.matrix());
    if basis.ncols() == 0 {
        return Err(Error::Numerical("E1 minus the meet is empty for a non-commuting pair".into()));
    }
    // Compress E2 to range(A): Q† E2 Q is Hermitian of size rank(A).
    let compressed = basis.adjoint() * e2.matrix() * &basis;
    let compressed = (&compressed + compressed.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(compressed);
    let top = eig.eigenvalues.imax();
    if eig.eigenvalues[top] <= TAU_PROB {
        return Err(Error::Numerical(format!(
            "largest overlap {} with E2 vanishes; E1 − E1∧E2 is orthogonal to E2",
            eig.eigenvalues[top]
        )));
    }
    let coords = eig.eigenvectors.column(top).into_owned();
    let psi = &basis * coords;
    let state = StateVector::normalized(psi.iter().copied().collect())?.with_canonical_phase();

    let w = DensityOperator::pure(&state);
    let p1 = gleason_measure(&w, e1)?;
    let p2 = gleason_measure(&w, e2)?;
    let p12 = gleason_measure(&w, &dec.common)?;
    Ok(ViolationWitness { state, p1, p2, p12, lhs: p1 + p2 - p12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::projector_from_span;

    fn line(v: &[f64]) -> Projector {
        projector_from_span(&[StateVector::from_real(v).unwrap()]).unwrap()
    }

    fn plane(a: &[f64], b: &[f64]) -> Projector {
        projector_from_span(&[StateVector::from_real(a).unwrap(), StateVector::from_real(b).unwrap()]).unwrap()
    }

    fn example_one(cos_sq: f64) -> (Projector, Projector) {
        let t = cos_sq.sqrt().acos();
        (line(&[t.cos(), t.sin()]), line(&[t.cos(), -t.sin()]))
    }

    #[test]
    fn example_one_lines_meet_in_zero_and_join_to_everything() {
        let (e1, e2) = example_one(0.9);
        let m = meet(&e1, &e2).unwrap();
        assert!(m.is_zero());
        let j = join(&e1, &e2).unwrap();
        assert_eq!(j.rank(), 2);
        assert!(!commutes(&e1, &e2).unwrap());
        assert!(commutator_norm(&e1, &e2).unwrap() > 0.1);
    }

    #[test]
    fn meet_in_three_dimensions() {
        let e = plane(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
        let f = plane(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]);
        let m = meet(&e, &f).unwrap();
        assert_eq!(m.rank(), 1);
        let e2 = StateVector::basis(3, 1).unwrap();
        assert!((e2.expectation(&m).unwrap() - 1.0).abs() < 1e-12);
        assert!(StateVector::basis(3, 0).unwrap().expectation(&m).unwrap().abs() < 1e-12);
        assert!(StateVector::basis(3, 2).unwrap().expectation(&m).unwrap().abs() < 1e-12);
    }

    #[test]
    fn idempotence_and_units() {
        let (e1, _) = example_one(0.7);
        assert!(meet(&e1, &e1).unwrap().approx_eq(&e1));
        assert!(join(&Projector::zero(2).unwrap(), &e1).unwrap().approx_eq(&e1));
        assert!(complement(&Projector::zero(2).unwrap()).approx_eq(&Projector::identity(2).unwrap()));
        assert!(complement(&Projector::identity(2).unwrap()).is_zero());
        assert!(complement(&complement(&e1)).approx_eq(&e1));
    }

    #[test]
    fn commuting_cases() {
        let x = line(&[1.0, 0.0, 0.0]);
        let y = line(&[0.0, 1.0, 0.0]);
        assert!(commutes(&x, &y).unwrap());
        let xy = plane(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
        assert!(commutes(&x, &xy).unwrap());
        assert!(is_below(&x, &xy).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = Projector::identity(2).unwrap();
        let b = Projector::identity(3).unwrap();
        assert!(matches!(meet(&a, &b), Err(Error::Dimension(_))));
        assert!(matches!(join(&a, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn frequency_lhs_example_one() {
        let (e1, e2) = example_one(0.9);
        let w = DensityOperator::pure(&StateVector::basis(2, 0).unwrap());
        let lhs = frequency_inequality_lhs(&w, &e1, &e2).unwrap();
        assert!((lhs - 1.8).abs() < 1e-9);
        // join is the identity, so defect = 1 - 1.8
        let d = modular_defect(&w, &e1, &e2).unwrap();
        assert!((d + 0.8).abs() < 1e-9);
    }

    #[test]
    fn orthocomplement_pair_has_no_defect() {
        let (e1, _) = example_one(0.3);
        let w = DensityOperator::pure(&StateVector::from_real(&[0.2, 0.9]).unwrap());
        assert!(modular_defect(&w, &e1, &complement(&e1)).unwrap().abs() < 1e-9);
    }

    #[test]
    fn decomposition_of_equal_and_disjoint_pairs() {
        let (e1, e2) = example_one(0.9);
        let d = relative_decomposition(&e1, &e1).unwrap();
        assert!(d.common.approx_eq(&e1));
        assert!(d.first_rest.is_zero() && d.second_rest.is_zero());
        let d = relative_decomposition(&e1, &e2).unwrap();
        assert!(d.common.is_zero());
        assert!(d.first_rest.approx_eq(&e1));
        assert!(d.second_rest.approx_eq(&e2));
    }

    #[test]
    fn decomposition_sharing_an_axis() {
        let s = 0.5f64.sqrt();
        let e1 = plane(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]);
        let e2 = plane(&[0.0, 0.0, 1.0], &[s, s, 0.0]);
        let d = relative_decomposition(&e1, &e2).unwrap();
        assert_eq!(d.common.rank(), 1);
        assert!(d.common.approx_eq(&line(&[0.0, 0.0, 1.0])));
        assert_eq!(d.first_rest.rank(), 1);
        assert_eq!(d.second_rest.rank(), 1);
        assert!((d.first_rest.matrix() * d.common.matrix()).norm() < 1e-9);
        assert!((d.second_rest.matrix() * d.common.matrix()).norm() < 1e-9);
    }

    #[test]
    fn witness_for_example_one() {
        let (e1, e2) = example_one(0.9);
        let w = construct_violating_state(&e1, &e2).unwrap();
        // Ψ is the E1 direction; ⟨e1,e2⟩ = cos 2θ = 0.8
        assert!((w.p1 - 1.0).abs() < 1e-9);
        assert!(w.p12.abs() < 1e-9);
        assert!((w.p2 - 0.64).abs() < 1e-9);
        assert!((w.lhs - 1.64).abs() < 1e-9);
        assert!(w.violates());
    }

    #[test]
    fn witness_with_nonzero_meet() {
        let s = 0.5f64.sqrt();
        let e1 = plane(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]);
        let e2 = plane(&[0.0, 0.0, 1.0], &[s, s, 0.0]);
        assert!(!meet(&e1, &e2).unwrap().is_zero());
        let w = construct_violating_state(&e1, &e2).unwrap();
        assert!(w.p12.abs() < 1e-9);
        assert!((w.p1 - 1.0).abs() < 1e-9);
        assert!(w.lhs > 1.0);
    }

    #[test]
    fn witness_rejects_commuting_and_degenerate_pairs() {
        let x = line(&[1.0, 0.0]);
        let y = line(&[0.0, 1.0]);
        assert!(matches!(construct_violating_state(&x, &y), Err(Error::Precondition(_))));
        assert!(matches!(
            construct_violating_state(&Projector::zero(2).unwrap(), &x),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn witness_lies_in_first_range_for_random_pairs() {
        for seed in 0..300u64 {
            let dim = 2 + (seed as usize % 5);
            let mut rng = crate::random::rng(seed);
            let (e1, e2) = crate::random::noncommuting_pair(&mut rng, dim);
            let w = construct_violating_state(&e1, &e2).unwrap();
            assert!((w.p1 - 1.0).abs() <= 1e-9, "seed {seed}: p(E1) = {}", w.p1);
            assert!(w.p12.abs() <= 1e-9, "seed {seed}: p(meet) = {}", w.p12);
            assert!(w.violates());
        }
    }
}
