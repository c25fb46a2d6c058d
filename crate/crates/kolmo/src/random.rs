//! Seeded generators for random instances: states, projectors, orthogonal
//! families, measurement setups and polytope members. Used by property
//! tests and by the CLI's `--seed` demos.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::extension::{Measurement, MeasurementSetup, SelectionDistribution, SelectionPattern};
use crate::hilbert::{projector_onto_columns, CMatrix, DensityOperator, Projector, StateVector};
use crate::lattice::commutes;
use crate::polytope::{vertices, CorrelationVector, PairSet};
use crate::rational::{ratio, Rational};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unit vector.
pub fn state_vector<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    StateVector::normalized((0..dim).map(|_| gaussian(rng)).collect()).expect("nonzero with probability one")
}

/// Unitary from the QR decomposition of a Gaussian matrix.
pub fn unitary<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    gaussian_matrix(rng, dim, dim).qr().q()
}

/// Projector onto the span of `rank` Gaussian vectors.
pub fn projector<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> Projector {
    let p = projector_onto_columns(&gaussian_matrix(rng, dim, rank));
    Projector::new(p.matrix().clone()).expect("valid projector")
}

/// Full-rank mixed state `G G† / tr(G G†)`.
pub fn density<R: Rng>(rng: &mut R, dim: usize) -> DensityOperator {
    let g = gaussian_matrix(rng, dim, dim);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m.unscale(tr);
    DensityOperator::new((&m + m.adjoint()).scale(0.5)).expect("valid density operator")
}

/// Either a pure or a mixed state.
pub fn any_state<R: Rng>(rng: &mut R, dim: usize) -> DensityOperator {
    if rng.random_bool(0.5) {
        DensityOperator::pure(&state_vector(rng, dim))
    } else {
        density(rng, dim)
    }
}

/// A pair of projectors (random ranks in `1..dim`) that do not commute.
pub fn noncommuting_pair<R: Rng>(rng: &mut R, dim: usize) -> (Projector, Projector) {
    assert!(dim >= 2, "no non-commuting projectors in dimension 1");
    loop {
        let r1 = rng.random_range(1..dim);
        let r2 = rng.random_range(1..dim);
        let (e1, e2) = (projector(rng, dim, r1), projector(rng, dim, r2));
        if !commutes(&e1, &e2).expect("same dim") {
            return (e1, e2);
        }
    }
}

/// A commuting pair sharing a random eigenbasis.
pub fn commuting_pair<R: Rng>(rng: &mut R, dim: usize) -> (Projector, Projector) {
    let u = unitary(rng, dim);
    let pick = |rng: &mut R| {
        let cols: Vec<usize> = (0..dim).filter(|_| rng.random_bool(0.5)).collect();
        columns_projector(&u, &cols)
    };
    (pick(rng), pick(rng))
}

fn columns_projector(u: &CMatrix, cols: &[usize]) -> Projector {
    let dim = u.nrows();
    if cols.is_empty() {
        return Projector::zero(dim).expect("dim");
    }
    let q = CMatrix::from_fn(dim, cols.len(), |r, c| u[(r, cols[c])]);
    Projector::new(&q * q.adjoint()).expect("orthonormal columns give a projector")
}

/// `k` pairwise orthogonal nonzero projectors (requires `k ≤ dim`), not
/// necessarily summing to the identity.
pub fn orthogonal_family<R: Rng>(rng: &mut R, dim: usize, k: usize) -> Vec<Projector> {
    assert!(k >= 1 && k <= dim);
    let u = unitary(rng, dim);
    let mut cols: Vec<usize> = (0..dim).collect();
    cols.shuffle(rng);
    let used = rng.random_range(k..=dim);
    let mut groups: Vec<Vec<usize>> = cols[..k].iter().map(|&c| vec![c]).collect();
    for &c in &cols[k..used] {
        let g = rng.random_range(0..k);
        groups[g].push(c);
    }
    groups.iter().map(|g| columns_projector(&u, g)).collect()
}

/// A convex combination of random vertices of `C(n, S)` with random
/// weights; always a member of the polytope.
pub fn member_vector<R: Rng>(rng: &mut R, layout: &PairSet) -> CorrelationVector<f64> {
    let verts = vertices(layout).expect("small n");
    let k = rng.random_range(1..=verts.len().min(6));
    let mut acc = vec![0.0; layout.len()];
    let weights: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let (_, v) = &verts[rng.random_range(0..verts.len())];
        for (a, x) in acc.iter_mut().zip(v.flat()) {
            *a += w / total * x;
        }
    }
    CorrelationVector::from_flat(layout.clone(), acc).expect("layout")
}

/// Uniform vector in `[0, 1]^{n+|S|}`.
pub fn unit_cube_vector<R: Rng>(rng: &mut R, layout: &PairSet) -> CorrelationVector<f64> {
    let values = (0..layout.len()).map(|_| rng.random::<f64>()).collect();
    CorrelationVector::from_flat(layout.clone(), values).expect("layout")
}

/// Size limits for [`setup`].
#[derive(Debug, Clone, Copy)]
pub struct SetupLimits {
    pub max_measurements: usize,
    pub max_dim: usize,
    pub max_outcomes: usize,
}

impl Default for SetupLimits {
    fn default() -> Self {
        SetupLimits { max_measurements: 4, max_dim: 8, max_outcomes: 3 }
    }
}

/// A valid measurement setup. Measurements are split into compatibility
/// groups; each group shares a random eigenbasis so its members commute,
/// and each measurement's outcomes partition that basis. `p̃` is supported
/// on random subsets of single groups with random rational weights.
pub fn setup<R: Rng>(rng: &mut R, limits: SetupLimits) -> MeasurementSetup {
    let dim = rng.random_range(2..=limits.max_dim);
    let n = rng.random_range(1..=limits.max_measurements);
    let groups = rng.random_range(1..=n);
    let assignment: Vec<usize> = (0..n).map(|i| if i < groups { i } else { rng.random_range(0..groups) }).collect();
    let bases: Vec<CMatrix> = (0..groups).map(|_| unitary(rng, dim)).collect();

    let measurements: Vec<Measurement> = assignment
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let k = rng.random_range(1..=limits.max_outcomes.min(dim));
            let mut cols: Vec<usize> = (0..dim).collect();
            cols.shuffle(rng);
            let mut parts: Vec<Vec<usize>> = cols[..k].iter().map(|&c| vec![c]).collect();
            for &c in &cols[k..] {
                let j = rng.random_range(0..k);
                parts[j].push(c);
            }
            let outcomes = parts
                .iter()
                .enumerate()
                .map(|(o, p)| (format!("o{o}"), columns_projector(&bases[g], p)))
                .collect();
            Measurement::new(format!("m{i}"), outcomes).expect("partition of an orthonormal basis")
        })
        .collect();

    let mut support: Vec<SelectionPattern> = Vec::new();
    for _ in 0..rng.random_range(1..=4) {
        let g = rng.random_range(0..groups);
        let bits: Vec<bool> = assignment.iter().map(|&a| a == g && rng.random_bool(0.7)).collect();
        let p = SelectionPattern::new(bits);
        if !support.contains(&p) {
            support.push(p);
        }
    }
    let raw: Vec<i64> = support.iter().map(|_| rng.random_range(1..=8)).collect();
    let total: i64 = raw.iter().sum();
    let weights: BTreeMap<SelectionPattern, Rational> =
        support.into_iter().zip(raw).map(|(p, w)| (p, ratio(w, total))).collect();

    MeasurementSetup::new(any_state(rng, dim), measurements, SelectionDistribution::new(weights))
}
