//! A single classical probability space for a family of quantum
//! measurements.
//!
//! Given a state `W`, `N` projective measurements and a distribution `p̃`
//! over which subsets of measurements are performed (patterns
//! `η ∈ {0,1}^N`, supported on mutually commuting subsets), the sample
//! space is the disjoint union over patterns of the outcome products of the
//! performed measurements. A point `(A_i)_{η_i=1}` gets weight
//! `tr(W ∏ P_{A_i}) · p̃(η)`. Quantum probabilities then reappear as
//! conditional probabilities given the pattern event.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classical::{Event, FiniteProbabilitySpace};
use crate::error::{Error, Result};
use crate::hilbert::{
    clamp_probability, embed_qubit_projector, matrix_from_pairs, spin_down_vector, spin_up_vector, xz_direction,
    CMatrix, DensityOperator, Projector, StateVector, TAU_OP, TAU_PROB,
};
use crate::lattice::commutes;
use crate::polytope::{CorrelationVector, PairSet};
use crate::rational::{format_rational, from_f64_exact, snap, Rational, RationalText};

/// Label used for measurements that were not performed.
pub const NOT_PERFORMED: &str = "none";

/// A projective measurement: ordered outcome labels and a resolution of the
/// identity into pairwise orthogonal projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    name: String,
    spectrum: Vec<String>,
    projectors: Vec<Projector>,
}

impl Measurement {
    pub fn new(name: impl Into<String>, outcomes: Vec<(String, Projector)>) -> Result<Self> {
        let name = name.into();
        check_label(&name, "measurement name")?;
        if outcomes.is_empty() {
            return Err(Error::Domain(format!("measurement {name:?} has no outcomes")));
        }
        let dim = outcomes[0].1.dim();
        let mut labels = BTreeSet::new();
        for (label, p) in &outcomes {
            check_label(label, "outcome label")?;
            if label == NOT_PERFORMED {
                return Err(Error::Domain(format!("outcome label {NOT_PERFORMED:?} is reserved")));
            }
            if !labels.insert(label.as_str()) {
                return Err(Error::Domain(format!("measurement {name:?} repeats outcome {label:?}")));
            }
            if p.dim() != dim {
                return Err(Error::Dimension(format!("measurement {name:?} mixes dims {dim} and {}", p.dim())));
            }
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for (i, (li, pi)) in outcomes.iter().enumerate() {
            sum += pi.matrix();
            for (lj, pj) in &outcomes[i + 1..] {
                let overlap = (pi.matrix() * pj.matrix()).norm();
                if overlap > TAU_OP {
                    return Err(Error::Domain(format!(
                        "measurement {name:?}: outcomes {li:?} and {lj:?} are not orthogonal"
                    )));
                }
            }
        }
        let defect = (sum - CMatrix::identity(dim, dim)).norm();
        if defect > TAU_OP {
            return Err(Error::Domain(format!(
                "measurement {name:?}: projectors do not sum to the identity (defect {defect:.3e})"
            )));
        }
        let (spectrum, projectors) = outcomes.into_iter().unzip();
        Ok(Measurement { name, spectrum, projectors })
    }

    /// Spin-½ along `direction` on qubit `factor` (0-based) of `factors`,
    /// with outcomes `up` and `down`.
    pub fn spin_half(name: impl Into<String>, direction: [f64; 3], factor: usize, factors: usize) -> Result<Self> {
        let up = spin_up_vector(direction)?.projector();
        let down = spin_down_vector(direction)?.projector();
        Measurement::new(
            name,
            vec![
                ("up".to_string(), embed_qubit_projector(&up, factor, factors)?),
                ("down".to_string(), embed_qubit_projector(&down, factor, factors)?),
            ],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spectrum(&self) -> &[String] {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.spectrum.iter().position(|l| l == label)
    }

    pub fn projector(&self, label: &str) -> Option<&Projector> {
        self.outcome_index(label).map(|i| &self.projectors[i])
    }

    /// Pairwise projector commutation.
    pub fn commutes_with(&self, other: &Measurement) -> Result<bool> {
        for p in &self.projectors {
            for q in &other.projectors {
                if !commutes(p, q)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn check_label(label: &str, what: &str) -> Result<()> {
    if label.is_empty() || label.chars().any(|c| c.is_whitespace() || c == '=' || c == ':') {
        return Err(Error::InvalidInput(format!("{what} {label:?} must be nonempty without spaces, '=' or ':'")));
    }
    Ok(())
}

/// `η ∈ {0,1}^N`: which measurements are performed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelectionPattern(Vec<bool>);

impl SelectionPattern {
    pub fn new(bits: Vec<bool>) -> Self {
        SelectionPattern(bits)
    }

    /// All `2^n` patterns in lexicographic order of their bit strings.
    pub fn all(n: usize) -> Vec<SelectionPattern> {
        (0..1u64 << n)
            .map(|k| SelectionPattern((0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect()))
            .collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn performs(&self, i: usize) -> bool {
        self.0.get(i).copied().unwrap_or(false)
    }

    pub fn performed(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }
}

impl fmt::Display for SelectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for SelectionPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidInput(format!("pattern {s:?} must be a string of 0s and 1s"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::InvalidInput("empty selection pattern".into()));
        }
        Ok(SelectionPattern(bits))
    }
}

/// `p̃`: probabilities of the selection patterns. Patterns not listed have
/// probability zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelectionDistribution {
    weights: BTreeMap<SelectionPattern, Rational>,
}

impl SelectionDistribution {
    pub fn new(weights: BTreeMap<SelectionPattern, Rational>) -> Self {
        SelectionDistribution { weights }
    }

    /// Point mass on one pattern.
    pub fn point_mass(pattern: SelectionPattern) -> Self {
        SelectionDistribution { weights: [(pattern, Rational::one())].into_iter().collect() }
    }

    pub fn weight(&self, pattern: &SelectionPattern) -> Rational {
        self.weights.get(pattern).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn weights(&self) -> &BTreeMap<SelectionPattern, Rational> {
        &self.weights
    }

    pub fn support(&self) -> impl Iterator<Item = (&SelectionPattern, &Rational)> {
        self.weights.iter().filter(|(_, w)| w.is_positive())
    }
}

/// State, measurements and selection distribution on a shared space.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetup {
    pub state: DensityOperator,
    pub measurements: Vec<Measurement>,
    pub selection: SelectionDistribution,
}

impl MeasurementSetup {
    pub fn new(state: DensityOperator, measurements: Vec<Measurement>, selection: SelectionDistribution) -> Self {
        MeasurementSetup { state, measurements, selection }
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn measurement_index(&self, name: &str) -> Option<usize> {
        self.measurements.iter().position(|m| m.name == name)
    }

    /// `tr(W ∏ P_{A_i})` with factors in ascending measurement index.
    pub fn joint_trace(&self, outcomes: &[(usize, usize)]) -> Result<f64> {
        let mut sorted = outcomes.to_vec();
        sorted.sort_unstable();
        let product = self.product(sorted.iter())?;
        clamp_probability(self.state.trace_with(&product)?)
    }

    fn product<'a>(&self, outcomes: impl Iterator<Item = &'a (usize, usize)>) -> Result<CMatrix> {
        let dim = self.dim();
        let mut acc = CMatrix::identity(dim, dim);
        for &(m, o) in outcomes {
            let meas = self
                .measurements
                .get(m)
                .ok_or_else(|| Error::InvalidInput(format!("no measurement with index {m}")))?;
            let p = meas
                .projectors
                .get(o)
                .ok_or_else(|| Error::InvalidInput(format!("measurement {:?} has no outcome {o}", meas.name)))?;
            acc *= p.matrix();
        }
        Ok(acc)
    }
}

/// A problem found by [`validate_setup`].
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    NoMeasurements,
    DimensionMismatch { measurement: String, dim: usize, expected: usize },
    DuplicateName { measurement: String },
    PatternLength { pattern: String, expected: usize },
    NegativeWeight { pattern: String },
    Normalization { total: String },
    Incompatible { pattern: String, first: String, second: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoMeasurements => write!(f, "setup has no measurements"),
            Diagnostic::DimensionMismatch { measurement, dim, expected } => {
                write!(f, "measurement {measurement:?} acts on dim {dim}, state has dim {expected}")
            }
            Diagnostic::DuplicateName { measurement } => write!(f, "measurement name {measurement:?} is used twice"),
            Diagnostic::PatternLength { pattern, expected } => {
                write!(f, "pattern {pattern} has wrong length (expected {expected})")
            }
            Diagnostic::NegativeWeight { pattern } => write!(f, "pattern {pattern} has negative probability"),
            Diagnostic::Normalization { total } => write!(f, "selection probabilities sum to {total}, not 1"),
            Diagnostic::Incompatible { pattern, first, second } => write!(
                f,
                "pattern {pattern} has positive probability but measurements {first:?} and {second:?} do not commute"
            ),
        }
    }
}

/// Checks every setup invariant; an empty list means the setup is valid.
pub fn validate_setup(setup: &MeasurementSetup) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = setup.measurements.len();
    if n == 0 {
        out.push(Diagnostic::NoMeasurements);
    }
    let mut names = BTreeSet::new();
    for m in &setup.measurements {
        if m.dim() != setup.dim() {
            out.push(Diagnostic::DimensionMismatch { measurement: m.name.clone(), dim: m.dim(), expected: setup.dim() });
        }
        if !names.insert(m.name.as_str()) {
            out.push(Diagnostic::DuplicateName { measurement: m.name.clone() });
        }
    }
    let mut total = Rational::zero();
    for (pattern, w) in setup.selection.weights() {
        if pattern.len() != n {
            out.push(Diagnostic::PatternLength { pattern: pattern.to_string(), expected: n });
        }
        if w.is_negative() {
            out.push(Diagnostic::NegativeWeight { pattern: pattern.to_string() });
        }
        total += w;
    }
    if !total.is_one() {
        out.push(Diagnostic::Normalization { total: format_rational(&total) });
    }
    let dims_ok = !out.iter().any(|d| matches!(d, Diagnostic::DimensionMismatch { .. }));
    if dims_ok {
        for (pattern, _) in setup.selection.support() {
            if pattern.len() != n {
                continue;
            }
            let idx = pattern.performed();
            for (k, &i) in idx.iter().enumerate() {
                for &j in &idx[k + 1..] {
                    let (mi, mj) = (&setup.measurements[i], &setup.measurements[j]);
                    if !mi.commutes_with(mj).unwrap_or(false) {
                        out.push(Diagnostic::Incompatible {
                            pattern: pattern.to_string(),
                            first: mi.name.clone(),
                            second: mj.name.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// A point of the unified space: an outcome index per performed
/// measurement, `None` for the others.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnifiedPoint(Vec<Option<usize>>);

impl UnifiedPoint {
    pub fn outcomes(&self) -> &[Option<usize>] {
        &self.0
    }

    /// The pattern this point belongs to.
    pub fn pattern(&self) -> SelectionPattern {
        SelectionPattern(self.0.iter().map(Option::is_some).collect())
    }

    /// Space-separated outcome labels, e.g. `up none down none`.
    pub fn render(&self, measurements: &[Measurement]) -> String {
        self.0
            .iter()
            .zip(measurements)
            .map(|(o, m)| o.map_or(NOT_PERFORMED, |k| m.spectrum[k].as_str()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn pattern_event_name(pattern: &SelectionPattern) -> String {
    format!("pattern:{pattern}")
}

pub fn outcome_event_name(measurement: &str, outcome: &str) -> String {
    format!("{measurement}={outcome}")
}

pub fn performed_event_name(measurement: &str) -> String {
    format!("performed:{measurement}")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Keep the measure-zero blocks of patterns with `p̃(η) = 0`.
    pub include_zero_patterns: bool,
}

/// Output of [`build_unified_space`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnifiedSpace {
    pub space: FiniteProbabilitySpace,
    /// Points in the same order as `space.points()`.
    pub points: Vec<UnifiedPoint>,
    /// True when every trace snapped to a small-denominator rational.
    pub exact: bool,
}

impl UnifiedSpace {
    pub fn positive_points(&self) -> impl Iterator<Item = (&UnifiedPoint, &Rational)> {
        self.points
            .iter()
            .zip(self.space.weighted_points().map(|(_, w)| w))
            .filter(|(_, w)| w.is_positive())
    }
}

pub fn build_unified_space(setup: &MeasurementSetup) -> Result<UnifiedSpace> {
    build_unified_space_with(setup, BuildOptions::default())
}

pub fn build_unified_space_with(setup: &MeasurementSetup, options: BuildOptions) -> Result<UnifiedSpace> {
    let diagnostics = validate_setup(setup);
    if !diagnostics.is_empty() {
        let text: Vec<String> = diagnostics.iter().map(ToString::to_string).collect();
        return Err(Error::Precondition(format!("invalid setup: {}", text.join("; "))));
    }
    let n = setup.measurements.len();
    let patterns: Vec<SelectionPattern> = if options.include_zero_patterns {
        SelectionPattern::all(n)
    } else {
        setup.selection.support().map(|(p, _)| p.clone()).collect()
    };

    let mut labels: Vec<(String, Rational)> = Vec::new();
    let mut points = Vec::new();
    let mut exact = true;
    let mut events: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for m in &setup.measurements {
        events.entry(performed_event_name(&m.name)).or_default();
        for o in &m.spectrum {
            events.entry(outcome_event_name(&m.name, o)).or_default();
        }
    }

    for pattern in &patterns {
        let p_tilde = setup.selection.weight(pattern);
        let block = outcome_tuples(setup, pattern);
        let weights = if p_tilde.is_positive() {
            let (w, block_exact) = block_weights(setup, &block, &p_tilde)?;
            exact &= block_exact;
            w
        } else {
            vec![Rational::zero(); block.len()]
        };
        let mut pattern_members = BTreeSet::new();
        for (tuple, w) in block.into_iter().zip(weights) {
            let point = UnifiedPoint(
                (0..n).map(|i| tuple.iter().find(|(m, _)| *m == i).map(|&(_, o)| o)).collect(),
            );
            let label = point.render(&setup.measurements);
            pattern_members.insert(label.clone());
            for &(m, o) in &tuple {
                let meas = &setup.measurements[m];
                events.get_mut(&performed_event_name(&meas.name)).expect("seeded").insert(label.clone());
                events
                    .get_mut(&outcome_event_name(&meas.name, &meas.spectrum[o]))
                    .expect("seeded")
                    .insert(label.clone());
            }
            labels.push((label, w));
            points.push(point);
        }
        events.insert(pattern_event_name(pattern), pattern_members);
    }

    let named = events.into_iter().map(|(k, v)| (k, Event::new(v))).collect();
    let space = FiniteProbabilitySpace::new(labels, named)?;
    Ok(UnifiedSpace { space, points, exact })
}

/// Every outcome assignment of the performed measurements, lexicographic in
/// spectrum order with the lowest measurement index most significant.
fn outcome_tuples(setup: &MeasurementSetup, pattern: &SelectionPattern) -> Vec<Vec<(usize, usize)>> {
    let mut tuples: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for i in pattern.performed() {
        let k = setup.measurements[i].spectrum.len();
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |o| {
                    let mut t = t.clone();
                    t.push((i, o));
                    t
                })
            })
            .collect();
    }
    tuples
}

/// Weights `tr(W ∏ P) · p̃(η)` for one block, snapped to exact rationals when
/// possible. Otherwise the float traces are taken at their exact binary
/// value and rescaled so the block mass equals `p̃(η)` exactly.
fn block_weights(
    setup: &MeasurementSetup,
    block: &[Vec<(usize, usize)>],
    p_tilde: &Rational,
) -> Result<(Vec<Rational>, bool)> {
    let mut traces = Vec::with_capacity(block.len());
    for tuple in block {
        let forward = setup.state.trace_with(&setup.product(tuple.iter())?)?;
        let backward = setup.state.trace_with(&setup.product(tuple.iter().rev())?)?;
        if (forward - backward).norm() > TAU_PROB {
            return Err(Error::Numerical(format!(
                "trace depends on the product order ({forward} vs {backward}); measurements do not commute"
            )));
        }
        traces.push(clamp_probability(forward)?);
    }
    let total: f64 = traces.iter().sum();
    if (total - 1.0).abs() > TAU_PROB * block.len() as f64 {
        return Err(Error::Rationalization(format!("outcome probabilities of a block sum to {total}")));
    }
    let snapped: Option<Vec<Rational>> = traces.iter().map(|&t| snap(t)).collect();
    if let Some(s) = snapped {
        let sum: Rational = s.iter().sum();
        if sum.is_one() {
            return Ok((s.into_iter().map(|r| r * p_tilde).collect(), true));
        }
    }
    let raw = traces.iter().map(|&t| snap(t).map_or_else(|| from_f64_exact(t), Ok)).collect::<Result<Vec<_>>>()?;
    let sum: Rational = raw.iter().sum();
    if sum.is_zero() {
        return Err(Error::Rationalization("block has zero total trace".into()));
    }
    Ok((raw.into_iter().map(|r| r / &sum * p_tilde).collect(), false))
}

fn outcome_event(setup: &MeasurementSetup, unified: &UnifiedSpace, outcomes: &[(usize, usize)]) -> Result<Event> {
    let mut event = unified.space.whole();
    for &(m, o) in outcomes {
        let meas = setup
            .measurements
            .get(m)
            .ok_or_else(|| Error::InvalidInput(format!("no measurement with index {m}")))?;
        let label = meas
            .spectrum
            .get(o)
            .ok_or_else(|| Error::InvalidInput(format!("measurement {:?} has no outcome {o}", meas.name)))?;
        event = event.intersection(unified.space.event(&outcome_event_name(&meas.name, label))?);
    }
    Ok(event)
}

/// `p(X_{(A_i)} ∩ X_η) / p(X_η)` for outcomes of measurements performed in `η`.
pub fn reproduce_conditional(
    setup: &MeasurementSetup,
    unified: &UnifiedSpace,
    outcomes: &[(usize, usize)],
    pattern: &SelectionPattern,
) -> Result<Rational> {
    if let Some(&(m, _)) = outcomes.iter().find(|(m, _)| !pattern.performs(*m)) {
        return Err(Error::Precondition(format!("measurement {m} is not performed in pattern {pattern}")));
    }
    let given = match unified.space.event(&pattern_event_name(pattern)) {
        Ok(e) => e.clone(),
        Err(_) => return Err(Error::Conditioning(format!("pattern {pattern} has probability zero"))),
    };
    unified.space.conditional(&outcome_event(setup, unified, outcomes)?, &given)
}

/// `p(X_{A_i} | m_i performed)`, conditioning on the union of all patterns
/// that perform measurement `i`.
pub fn reproduce_performed_conditional(
    setup: &MeasurementSetup,
    unified: &UnifiedSpace,
    measurement: usize,
    outcome: usize,
) -> Result<Rational> {
    let meas = setup
        .measurements
        .get(measurement)
        .ok_or_else(|| Error::InvalidInput(format!("no measurement with index {measurement}")))?;
    let given = unified.space.event(&performed_event_name(&meas.name))?;
    unified.space.conditional(&outcome_event(setup, unified, &[(measurement, outcome)])?, given)
}

/// Pairs of measurements performed together with positive probability.
pub fn co_performed_pairs(setup: &MeasurementSetup) -> Result<PairSet> {
    let mut pairs = BTreeSet::new();
    for (pattern, _) in setup.selection.support() {
        let idx = pattern.performed();
        for (k, &i) in idx.iter().enumerate() {
            for &j in &idx[k + 1..] {
                pairs.insert((i + 1, j + 1));
            }
        }
    }
    PairSet::new(setup.measurements.len(), pairs)
}

/// Unconditional probabilities of the first listed outcome of each
/// measurement, with pairs for every co-performed pair of measurements.
pub fn observed_correlation_vector(setup: &MeasurementSetup, unified: &UnifiedSpace) -> Result<CorrelationVector<Rational>> {
    let outcomes: Vec<usize> = vec![0; setup.measurements.len()];
    observed_correlation_vector_for(setup, unified, &outcomes, &co_performed_pairs(setup)?)
}

/// As [`observed_correlation_vector`] with an explicit outcome per
/// measurement and explicit pair layout.
pub fn observed_correlation_vector_for(
    setup: &MeasurementSetup,
    unified: &UnifiedSpace,
    outcomes: &[usize],
    layout: &PairSet,
) -> Result<CorrelationVector<Rational>> {
    if outcomes.len() != setup.measurements.len() || layout.n() != outcomes.len() {
        return Err(Error::Layout("one outcome per measurement is required".into()));
    }
    let events = outcomes
        .iter()
        .enumerate()
        .map(|(m, &o)| outcome_event(setup, unified, &[(m, o)]))
        .collect::<Result<Vec<_>>>()?;
    crate::classical::correlation_vector_of(&unified.space, &events, layout)
}

// ---------------------------------------------------------------------------
// Setup files

/// State given either as a density matrix or as a pure state vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Matrix(Vec<Vec<[f64; 2]>>),
    Pure { pure: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeSpec {
    pub label: String,
    pub projector: Vec<Vec<[f64; 2]>>,
}

/// `spin-half direction [x,y,z] on factor k of m` (factor is 1-based).
/// The direction may instead be given as an angle in the x–z plane,
/// measured from +z toward +x.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinHalfSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xz_angle_deg: Option<f64>,
    pub factor: usize,
    pub factors: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurementSpec {
    Projectors { name: String, outcomes: Vec<OutcomeSpec> },
    SpinHalf { name: String, spin_half: SpinHalfSpec },
}

/// JSON setup file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetupFile {
    pub dim: usize,
    pub state: StateSpec,
    pub measurements: Vec<MeasurementSpec>,
    pub selection: BTreeMap<String, RationalText>,
}

impl SetupFile {
    pub fn to_setup(&self) -> Result<MeasurementSetup> {
        let state = match &self.state {
            StateSpec::Matrix(rows) => DensityOperator::new(matrix_from_pairs(rows)?)?,
            StateSpec::Pure { pure } => DensityOperator::pure(&StateVector::normalized(
                pure.iter().map(|&[re, im]| num_complex::Complex64::new(re, im)).collect(),
            )?),
        };
        if state.dim() != self.dim {
            return Err(Error::Dimension(format!("state has dim {}, file declares {}", state.dim(), self.dim)));
        }
        let measurements = self
            .measurements
            .iter()
            .map(|spec| match spec {
                MeasurementSpec::Projectors { name, outcomes } => {
                    let outs = outcomes
                        .iter()
                        .map(|o| Ok((o.label.clone(), Projector::new(matrix_from_pairs(&o.projector)?)?)))
                        .collect::<Result<Vec<_>>>()?;
                    Measurement::new(name.clone(), outs)
                }
                MeasurementSpec::SpinHalf { name, spin_half } => {
                    let dir = match (spin_half.direction, spin_half.xz_angle_deg) {
                        (Some(d), None) => {
                            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                            if norm == 0.0 {
                                return Err(Error::Domain(format!("measurement {name:?}: zero direction")));
                            }
                            [d[0] / norm, d[1] / norm, d[2] / norm]
                        }
                        (None, Some(deg)) => xz_direction(deg.to_radians()),
                        _ => {
                            return Err(Error::InvalidInput(format!(
                                "measurement {name:?}: give exactly one of direction or xz_angle_deg"
                            )))
                        }
                    };
                    if spin_half.factor == 0 {
                        return Err(Error::InvalidInput("spin_half.factor is 1-based".into()));
                    }
                    Measurement::spin_half(name.clone(), dir, spin_half.factor - 1, spin_half.factors)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let selection = self
            .selection
            .iter()
            .map(|(k, v)| Ok((k.parse::<SelectionPattern>()?, v.clone().into_rational()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(MeasurementSetup::new(state, measurements, SelectionDistribution::new(selection)))
    }
}
