//! Worked examples as executable fixtures. Each scenario returns a
//! [`ScenarioReport`] holding the computed quantities, the expected values
//! they are checked against, and a pass/fail verdict per expectation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::classical::{join_conditional_models, outcome_model, Event, FiniteProbabilitySpace};
use crate::error::{Error, Result};
use crate::extension::{
    build_unified_space, observed_correlation_vector_for, outcome_event_name, pattern_event_name,
    performed_event_name, reproduce_conditional, Measurement, MeasurementSetup, SelectionDistribution,
    SelectionPattern,
};
use crate::hilbert::{
    gleason_measure, projector_from_span, singlet, spin_down_vector, spin_up_vector, xz_direction, DensityOperator,
    Projector, StateVector, Tensor, TAU_PROB,
};
use crate::lattice::{commutator_norm, commutes, construct_violating_state, frequency_inequality_lhs, meet};
use crate::polytope::{
    all_satisfied, censorship_product, clauser_horne_check_exact, is_member, CorrelationVector, PairSet, TAU_LP,
};
use crate::rational::{format_float, format_rational, int, ratio, round_sig, snap, to_f64, Rational};

/// A computed or expected value.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Exact(Rational),
    Float(f64),
    Flag(bool),
    Text(String),
}

impl Quantity {
    fn as_f64(&self) -> Option<f64> {
        match self {
            Quantity::Exact(r) => Some(to_f64(r)),
            Quantity::Float(x) => Some(*x),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Quantity::Exact(r) => format_rational(r),
            Quantity::Float(x) => format_float(*x),
            Quantity::Flag(b) => b.to_string(),
            Quantity::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Quantity::Exact(r) => json!(format_rational(r)),
            Quantity::Float(x) => json!(round_sig(*x)),
            Quantity::Flag(b) => json!(b),
            Quantity::Text(s) => json!(s),
        }
    }

    /// Exact comparison between rationals, flags and text; `tolerance`
    /// whenever a float is involved.
    fn matches(&self, expected: &Quantity, tolerance: f64) -> bool {
        match (self, expected) {
            (Quantity::Exact(a), Quantity::Exact(b)) => a == b,
            (Quantity::Flag(a), Quantity::Flag(b)) => a == b,
            (Quantity::Text(a), Quantity::Text(b)) => a == b,
            _ => match (self.as_f64(), expected.as_f64()) {
                (Some(a), Some(b)) => (a - b).abs() <= tolerance,
                _ => false,
            },
        }
    }
}

impl From<Rational> for Quantity {
    fn from(r: Rational) -> Self {
        Quantity::Exact(r)
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Float(x)
    }
}

impl From<bool> for Quantity {
    fn from(b: bool) -> Self {
        Quantity::Flag(b)
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// A number published with the worked example.
    Reference,
    /// Obtained by an independent computation (direct arithmetic,
    /// enumeration, a second algebraic route).
    Derived,
    /// Follows immediately from a definition.
    Definition,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Reference => "reference",
            Basis::Derived => "derived",
            Basis::Definition => "definition",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub value: Quantity,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub name: String,
    pub quantities: BTreeMap<String, Quantity>,
    pub expectations: BTreeMap<String, Expectation>,
    pub verdicts: BTreeMap<String, bool>,
    pub narrative: Vec<String>,
    pub tolerance: f64,
}

impl ScenarioReport {
    pub fn new(name: impl Into<String>) -> Self {
        ScenarioReport {
            name: name.into(),
            quantities: BTreeMap::new(),
            expectations: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            narrative: Vec::new(),
            tolerance: TAU_PROB,
        }
    }

    pub fn record(&mut self, name: impl Into<String>, value: impl Into<Quantity>) {
        self.quantities.insert(name.into(), value.into());
    }

    /// Records `computed` and checks it against `expected`.
    pub fn expect(&mut self, name: impl Into<String>, computed: impl Into<Quantity>, expected: impl Into<Quantity>, basis: Basis) {
        let name = name.into();
        let computed = computed.into();
        let expected = expected.into();
        let pass = computed.matches(&expected, self.tolerance);
        self.quantities.insert(name.clone(), computed);
        self.expectations.insert(name.clone(), Expectation { value: expected, basis });
        self.verdicts.insert(name, pass);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.narrative.push(line.into());
    }

    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.verdicts.iter().filter(|(_, &v)| !v).map(|(k, _)| k.as_str()).collect()
    }

    /// Re-evaluates float verdicts with another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        for (name, exp) in &self.expectations {
            let pass = self.quantities[name].matches(&exp.value, tolerance);
            self.verdicts.insert(name.clone(), pass);
        }
        self
    }

    pub fn to_json(&self) -> Value {
        let quantities: serde_json::Map<String, Value> =
            self.quantities.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        let expectations: serde_json::Map<String, Value> = self
            .expectations
            .iter()
            .map(|(k, e)| {
                (k.clone(), json!({ "expected": e.value.to_json(), "basis": e.basis.as_str(), "pass": self.verdicts[k] }))
            })
            .collect();
        json!({
            "scenario": self.name,
            "passed": self.passed(),
            "tolerance": self.tolerance,
            "quantities": quantities,
            "expectations": expectations,
            "narrative": self.narrative,
        })
    }

    /// Aligned text table: one row per quantity.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<[String; 4]> = vec![["quantity".into(), "value".into(), "expected".into(), "verdict".into()]];
        for (k, v) in &self.quantities {
            let (expected, verdict) = match self.expectations.get(k) {
                Some(e) => (
                    format!("{} ({})", e.value.render(), e.basis.as_str()),
                    if self.verdicts[k] { "pass".to_string() } else { "FAIL".to_string() },
                ),
                None => (String::new(), String::new()),
            };
            rows.push([k.clone(), v.render(), expected, verdict]);
        }
        let widths: Vec<usize> = (0..4).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.name);
        for row in &rows {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "  {}", cells.join("  ").trim_end());
        }
        for line in &self.narrative {
            let _ = writeln!(out, "  - {line}");
        }
        let _ = writeln!(
            out,
            "result: {} ({} of {} checks passed)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.verdicts.values().filter(|&&v| v).count(),
            self.verdicts.len()
        );
        out
    }
}

/// Names accepted by [`run_scenario`].
pub const SCENARIOS: [&str; 4] = ["example-one", "double-slit", "coin", "epr"];

/// Runs a scenario with its default parameters.
pub fn run_scenario(name: &str) -> Result<ScenarioReport> {
    match name {
        "example-one" => example_one(example_one_theta(), None),
        "double-slit" => double_slit(&ratio(1, 10), &ratio(1, 10), &ratio(3, 10), None),
        "coin" => coin(),
        "epr" => epr(),
        other => Err(Error::InvalidInput(format!("unknown scenario {other:?}; known: {}", SCENARIOS.join(", ")))),
    }
}

// ---------------------------------------------------------------------------
// Two lines in a plane

/// The angle with `cos²θ = 0.9`.
pub fn example_one_theta() -> f64 {
    0.9f64.sqrt().acos()
}

/// `E1 = span{cosθ φ + sinθ ψ}`, `E2 = span{cosθ φ − sinθ ψ}` in `C²` with
/// `W = P_χ`, `χ = cosα φ + sinα ψ` (default `α = 0`, i.e. `W = P_φ`).
pub fn example_one(theta: f64, state_angle: Option<f64>) -> Result<ScenarioReport> {
    let alpha = state_angle.unwrap_or(0.0);
    let mut r = ScenarioReport::new("example-one");
    let e1 = projector_from_span(&[StateVector::from_real(&[theta.cos(), theta.sin()])?])?;
    let e2 = projector_from_span(&[StateVector::from_real(&[theta.cos(), -theta.sin()])?])?;
    let w = DensityOperator::pure(&StateVector::from_real(&[alpha.cos(), alpha.sin()])?);

    let p1 = gleason_measure(&w, &e1)?;
    let p2 = gleason_measure(&w, &e2)?;
    let m = meet(&e1, &e2)?;
    let p12 = gleason_measure(&w, &m)?;
    let lhs = frequency_inequality_lhs(&w, &e1, &e2)?;
    let commuting = commutes(&e1, &e2)?;

    // Independent closed forms: overlaps of real unit vectors.
    let same_line = (theta.sin() * theta.cos()).abs() < 1e-12;
    let x1 = (theta - alpha).cos().powi(2);
    let x2 = (theta + alpha).cos().powi(2);
    let x12 = if same_line { x1 } else { 0.0 };
    let published = (theta.cos().powi(2) - 0.9).abs() < 1e-12 && alpha == 0.0;
    let basis = if published { Basis::Reference } else { Basis::Derived };

    r.record("theta", theta);
    r.record("cos^2(theta)", theta.cos().powi(2));
    r.expect("p(E1)", p1, x1, basis);
    r.expect("p(E2)", p2, x2, basis);
    r.expect("p(E1^E2)", p12, x12, basis);
    r.expect("inequality lhs", lhs, x1 + x2 - x12, basis);
    r.record("rank(E1^E2)", int(m.rank() as i64));
    r.record("||[E1,E2]||", commutator_norm(&e1, &e2)?);
    r.expect("commutes", commuting, (4.0 * theta).sin().abs() < 1e-12, Basis::Derived);
    r.record("inequality violated", lhs > 1.0 + TAU_PROB);

    if commuting {
        r.note("E1 and E2 commute: the frequency inequality holds in every state, so no violating state exists");
    } else {
        let wit = construct_violating_state(&e1, &e2)?;
        let c2 = (2.0 * theta).cos().powi(2);
        r.expect("witness p(E1)", wit.p1, 1.0, Basis::Derived);
        r.expect("witness p(E1^E2)", wit.p12, 0.0, Basis::Derived);
        r.expect("witness p(E2)", wit.p2, c2, Basis::Derived);
        r.expect("witness lhs", wit.lhs, 1.0 + c2, Basis::Derived);
        let amps: Vec<String> = wit.state.amplitudes().iter().map(|z| format_float(z.re)).collect();
        r.record("witness state", Quantity::Text(format!("({})", amps.join(", "))));
        r.note("non-commuting pair: the witness state lies in E1, is orthogonal to E1^E2, and overlaps E2");
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Double slit

/// Three experimental conditions (slit 1 open, slit 2 open, both open) with
/// detection probabilities `pA`, `pB`, `pC` joined into one space.
/// `single_slit_mixing` is the probability of each single-slit condition
/// (default 1/3); the both-open condition gets the rest.
pub fn double_slit(
    p_a: &Rational,
    p_b: &Rational,
    p_c: &Rational,
    single_slit_mixing: Option<&Rational>,
) -> Result<ScenarioReport> {
    let unit = |x: &Rational, what: &str| {
        if x < &Rational::zero() || x > &Rational::one() {
            Err(Error::Domain(format!("{what} = {} is not a probability", format_rational(x))))
        } else {
            Ok(())
        }
    };
    unit(p_a, "pA")?;
    unit(p_b, "pB")?;
    unit(p_c, "pC")?;
    let m = single_slit_mixing.cloned().unwrap_or_else(|| ratio(1, 3));
    let both = Rational::one() - &m - &m;
    if m < Rational::zero() || both < Rational::zero() {
        return Err(Error::Domain(format!("single-slit mixing {} must lie in [0, 1/2]", format_rational(&m))));
    }
    let one = Rational::one();
    let model = |hit: &str, p: &Rational| outcome_model(&[(hit, p.clone()), ("miss", &one - p)]);
    let models = vec![
        ("slit1".to_string(), model("A", p_a)?),
        ("slit2".to_string(), model("B", p_b)?),
        ("both".to_string(), model("C", p_c)?),
    ];
    let mixing: BTreeMap<String, Rational> =
        [("slit1".to_string(), m.clone()), ("slit2".to_string(), m.clone()), ("both".to_string(), both.clone())]
            .into_iter()
            .collect();
    let space = join_conditional_models(&models, &mixing)?;

    let mut r = ScenarioReport::new("double-slit");
    let x = |n: &str| space.probability_of(n);
    let (xa, xb, xc) = (x("A")?, x("B")?, x("C")?);
    let union = space.probability(&space.event("A")?.union(space.event("B")?))?;

    r.record("mixing slit1", m.clone());
    r.record("mixing slit2", m.clone());
    r.record("mixing both", both.clone());
    r.expect("total mass", space.probability(&space.whole())?, int(1), Basis::Definition);
    r.expect("p(X_A)", xa.clone(), p_a * &m, Basis::Derived);
    r.expect("p(X_B)", xb.clone(), p_b * &m, Basis::Derived);
    r.expect("p(X_C)", xc.clone(), p_c * &both, Basis::Derived);
    r.expect("p(X_A or X_B)", union.clone(), &xa + &xb, Basis::Derived);
    r.record("p(X_A)+p(X_B)", &xa + &xb);
    r.record("p(X_A)+p(X_B) = p(X_C)", &xa + &xb == xc);
    for (hit, cond, p) in [("A", "slit1", p_a), ("B", "slit2", p_b), ("C", "both", p_c)] {
        if !mixing[cond].is_zero() {
            r.expect(format!("p(X_{hit} | {cond})"), space.conditional_of(hit, cond)?, p.clone(), Basis::Derived);
        }
    }
    r.expect("kolmogorov axioms hold", kolmogorov_axioms_hold(&space)?, true, Basis::Derived);

    // Version II: conditional probabilities under three different conditions.
    let naive = p_a + p_b;
    r.record("naive pA+pB", naive.clone());
    r.record("naive pA+pB = pC", &naive == p_c);
    r.note("version I: X_A, X_B, X_C live in one space on disjoint conditions, so p(X_A or X_B) = p(X_A) + p(X_B)");
    if &naive != p_c {
        r.note(
            "version II: pA + pB differs from pC, but pA, pB, pC are conditioned on different experimental \
             arrangements; adding them is a category error, not a violation of the classical rules",
        );
    } else {
        r.note("version II: pA + pB happens to equal pC (no interference term)");
    }
    Ok(r)
}

/// Additivity, monotonicity and the frequency inequality over every pair
/// of named events, plus `P(Ω) = 1`.
fn kolmogorov_axioms_hold(space: &FiniteProbabilitySpace) -> Result<bool> {
    if !space.probability(&space.whole())?.is_one() {
        return Ok(false);
    }
    let events: Vec<&Event> = space.named_events().values().collect();
    for e in &events {
        for f in &events {
            let pe = space.probability(e)?;
            let pf = space.probability(f)?;
            let pi = space.probability(&e.intersection(f))?;
            let pu = space.probability(&e.union(f))?;
            if pu != &pe + &pf - &pi {
                return Ok(false);
            }
            if e.is_subset(f) && pe > pf {
                return Ok(false);
            }
            if &pe + &pf - &pi > Rational::one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Magnetic coin

/// A coin tossed with a magnet off (H/T = 1/2, 1/2) or on (1/5, 4/5), each
/// with probability 1/2.
pub fn coin() -> Result<ScenarioReport> {
    let off = outcome_model(&[("H", ratio(1, 2)), ("T", ratio(1, 2))])?;
    let on = outcome_model(&[("H", ratio(1, 5)), ("T", ratio(4, 5))])?;
    let mixing: BTreeMap<String, Rational> =
        [("OFF".to_string(), ratio(1, 2)), ("ON".to_string(), ratio(1, 2))].into_iter().collect();
    let space = join_conditional_models(&[("OFF".into(), off.clone()), ("ON".into(), on.clone())], &mixing)?;

    let mut r = ScenarioReport::new("coin");
    let atom = |c: &str, o: &str| space.weight(&crate::classical::joined_label(c, o)).cloned().unwrap_or_default();
    r.expect("p(H^OFF)", atom("OFF", "H"), ratio(1, 4), Basis::Reference);
    r.expect("p(T^OFF)", atom("OFF", "T"), ratio(1, 4), Basis::Reference);
    r.expect("p(H^ON)", atom("ON", "H"), ratio(1, 10), Basis::Reference);
    r.expect("p(T^ON)", atom("ON", "T"), ratio(2, 5), Basis::Reference);
    r.expect("p(OFF)", space.probability_of("OFF")?, ratio(1, 2), Basis::Reference);
    r.expect("p(ON)", space.probability_of("ON")?, ratio(1, 2), Basis::Reference);
    r.expect("p(H)", space.probability_of("H")?, ratio(7, 20), Basis::Reference);
    r.expect("p(T)", space.probability_of("T")?, ratio(13, 20), Basis::Reference);
    r.expect("p(H|ON)", space.conditional_of("H", "ON")?, ratio(1, 5), Basis::Reference);
    r.expect("p(T|ON)", space.conditional_of("T", "ON")?, ratio(4, 5), Basis::Reference);
    r.expect("p(H|OFF)", space.conditional_of("H", "OFF")?, ratio(1, 2), Basis::Reference);
    r.expect("p(T|OFF)", space.conditional_of("T", "OFF")?, ratio(1, 2), Basis::Reference);

    // Each model on its own satisfies the frequency inequality.
    for (tag, model) in [("off", &off), ("on", &on)] {
        let (h, t) = (model.event("H")?, model.event("T")?);
        let lhs = model.probability(h)? + model.probability(t)? - model.probability(&h.intersection(t))?;
        r.expect(format!("inequality lhs ({tag} model)"), lhs, int(1), Basis::Derived);
    }
    r.expect("kolmogorov axioms hold", kolmogorov_axioms_hold(&space)?, true, Basis::Derived);

    // Formulas that mix probabilities from different conditions.
    let off_h_and_t = off.probability(&off.event("H")?.intersection(off.event("T")?))?;
    let absurd = off.probability_of("H")? + on.probability_of("T")? - off_h_and_t;
    r.expect("cross-condition p_off(H)+p_on(T)-p_off(H^T)", absurd.clone(), ratio(13, 10), Basis::Reference);
    r.record("cross-condition sum exceeds 1", absurd > Rational::one());
    let absurd2 = on.probability_of("H")? + off.probability_of("T")?;
    r.expect("cross-condition p_on(H)+p_off(T)", absurd2.clone(), ratio(7, 10), Basis::Reference);
    r.record("cross-condition sum equals 1", absurd2.is_one());
    r.note("cross-condition formulas combine probabilities from different conditions; they are misuse, not a Kolmogorov violation");
    Ok(r)
}

// ---------------------------------------------------------------------------
// EPR / Aspect

/// Directions in the x–z plane: a at 0°, b′ at 120°, a′ and b at 240°.
pub fn epr_directions() -> [(&'static str, f64); 4] {
    [("a", 0.0), ("a'", 240.0), ("b", 240.0), ("b'", 120.0)]
}

/// Selection: `p̃(1010) = p̃(1001) = p̃(0110) = p̃(0101) = 1/4` over
/// measurements in the order `a, a′, b, b′`.
pub fn epr_selection() -> SelectionDistribution {
    SelectionDistribution::new(
        ["1010", "1001", "0110", "0101"]
            .iter()
            .map(|p| (p.parse::<SelectionPattern>().expect("pattern"), ratio(1, 4)))
            .collect(),
    )
}

/// Singlet state, spin measurements `a, a′` on the left particle and
/// `b, b′` on the right one.
pub fn epr_setup() -> Result<MeasurementSetup> {
    let measurements = epr_directions()
        .iter()
        .map(|&(name, deg)| {
            let factor = if name.starts_with('a') { 0 } else { 1 };
            Measurement::spin_half(name, xz_direction(deg.to_radians()), factor, 2)
        })
        .collect::<Result<Vec<_>>>()?;
    let w = DensityOperator::pure(&singlet([0.0, 0.0, 1.0])?);
    Ok(MeasurementSetup::new(w, measurements, epr_selection()))
}

/// Snaps a trace to an exact rational, or fails.
fn exact_trace(x: f64, what: &str) -> Result<Rational> {
    snap(x).ok_or_else(|| Error::Numerical(format!("{what} = {x} is not a small-denominator rational")))
}

pub fn epr() -> Result<ScenarioReport> {
    let mut r = ScenarioReport::new("epr");

    // Outcome projectors built from spinors: A = P_span{ψ₊ₐ⊗ψ₊ₐ, ψ₊ₐ⊗ψ₋ₐ}.
    let dirs: BTreeMap<&str, [f64; 3]> =
        epr_directions().iter().map(|&(n, d)| (n, xz_direction(d.to_radians()))).collect();
    let left = |n: &str| -> Result<Projector> {
        let up = spin_up_vector(dirs[n])?;
        let down = spin_down_vector(dirs[n])?;
        projector_from_span(&[up.tensor(&up), up.tensor(&down)])
    };
    let right = |n: &str| -> Result<Projector> {
        let up = spin_up_vector(dirs[n])?;
        let down = spin_down_vector(dirs[n])?;
        projector_from_span(&[up.tensor(&up), down.tensor(&up)])
    };
    let (a, a2, b, b2) = (left("a")?, left("a'")?, right("b")?, right("b'")?);
    r.expect("rank(A)", int(a.rank() as i64), int(2), Basis::Derived);
    let psi = singlet(dirs["a"])?;
    r.expect("|Psi_s|", psi.amplitudes().norm(), 1.0, Basis::Definition);
    let w = DensityOperator::pure(&psi);

    let tr1 = |p: &Projector| gleason_measure(&w, p);
    let tr2 = |p: &Projector, q: &Projector| -> Result<f64> {
        crate::hilbert::clamp_probability(w.trace_with(&(p.matrix() * q.matrix()))?)
    };
    for (name, p) in [("A", &a), ("A'", &a2), ("B", &b), ("B'", &b2)] {
        r.expect(format!("tr(W{name})"), exact_trace(tr1(p)?, name)?, ratio(1, 2), Basis::Reference);
    }
    let pairs = [("A", &a, "B", &b, 3), ("A", &a, "B'", &b2, 3), ("A'", &a2, "B", &b, 0), ("A'", &a2, "B'", &b2, 3)];
    for (n1, p, n2, q, eighths) in pairs {
        let t = tr2(p, q)?;
        r.expect(format!("tr(W{n1}{n2})"), exact_trace(t, "joint trace")?, ratio(eighths, 8), Basis::Reference);
    }
    // ½ sin²∠ evaluated only at the angles that occur: 120° and 0°.
    let angle = |u: &str, v: &str| {
        let (x, y) = (dirs[u], dirs[v]);
        (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]).clamp(-1.0, 1.0).acos()
    };
    for (u, v, n1, n2, p, q) in [("a", "b", "A", "B", &a, &b), ("a'", "b", "A'", "B", &a2, &b)] {
        let formula = 0.5 * angle(u, v).sin().powi(2);
        r.expect(format!("1/2 sin^2({u},{v}) = tr(W{n1}{n2})"), formula, tr2(p, q)?, Basis::Reference);
    }
    for (u, v, deg) in [("a", "a'", 120.0), ("a'", "b", 0.0), ("a", "b'", 120.0), ("a", "b", 120.0), ("a'", "b'", 120.0)] {
        r.expect(format!("angle({u},{v}) deg"), angle(u, v).to_degrees(), deg, Basis::Reference);
    }

    // Unified space.
    let setup = epr_setup()?;
    let unified = build_unified_space(&setup)?;
    r.expect("unified space exact", unified.exact, true, Basis::Derived);
    r.expect("unified total mass", unified.space.probability(&unified.space.whole())?, int(1), Basis::Definition);
    let mut counts: BTreeMap<Rational, i64> = BTreeMap::new();
    for (_, wgt) in unified.positive_points() {
        *counts.entry(wgt.clone()).or_default() += 1;
    }
    r.expect("elementary events in selected blocks", int(unified.points.len() as i64), int(16), Basis::Reference);
    r.expect("strictly positive elementary events", int(unified.positive_points().count() as i64), int(14), Basis::Derived);
    for (value, count) in [(ratio(3, 32), 6), (ratio(1, 32), 6), (ratio(1, 8), 2)] {
        let got = counts.get(&value).copied().unwrap_or(0);
        r.expect(format!("events with weight {}", format_rational(&value)), int(got), int(count), Basis::Reference);
    }
    for (label, value) in [
        ("up none up none", ratio(3, 32)),
        ("up none none up", ratio(3, 32)),
        ("none up none up", ratio(3, 32)),
        ("down none down none", ratio(3, 32)),
        ("down none none down", ratio(3, 32)),
        ("none down none down", ratio(3, 32)),
        ("up none down none", ratio(1, 32)),
        ("up none none down", ratio(1, 32)),
        ("none up none down", ratio(1, 32)),
        ("down none up none", ratio(1, 32)),
        ("down none none up", ratio(1, 32)),
        ("none down none up", ratio(1, 32)),
        ("none down up none", ratio(1, 8)),
        ("none up down none", ratio(1, 8)),
    ] {
        let got = unified.space.weight(label).cloned().unwrap_or_default();
        r.expect(format!("p({label})"), got, value, Basis::Reference);
    }

    // Observed (unconditional) probabilities of the events A, A', B, B'
    // (outcome "up") and a, a', b, b' (setting selected).
    let sp = &unified.space;
    let outcome = |m: &str| sp.event(&outcome_event_name(m, "up")).cloned();
    let setting = |m: &str| sp.event(&performed_event_name(m)).cloned();
    let names = [("A", "a"), ("A'", "a'"), ("B", "b"), ("B'", "b'")];
    let mut ev: BTreeMap<String, Event> = BTreeMap::new();
    for (big, small) in names {
        ev.insert(big.to_string(), outcome(small)?);
        ev.insert(small.to_string(), setting(small)?);
    }
    let p = |x: &str| sp.probability(&ev[x]);
    let p_and = |x: &str, y: &str| sp.probability(&ev[x].intersection(&ev[y]));
    for (big, small) in names {
        r.expect(format!("p({big})"), p(big)?, ratio(1, 4), Basis::Reference);
        r.expect(format!("p({small})"), p(small)?, ratio(1, 2), Basis::Reference);
        r.expect(format!("p({big}^{small})"), p_and(big, small)?, ratio(1, 4), Basis::Reference);
    }
    for (x, y) in [("A", "a'"), ("A'", "a"), ("B", "b'"), ("B'", "b")] {
        r.expect(format!("p({x}^{y})"), p_and(x, y)?, int(0), Basis::Reference);
    }
    for (x, y, v) in [("A", "B", ratio(3, 32)), ("A", "B'", ratio(3, 32)), ("A'", "B'", ratio(3, 32)), ("A'", "B", int(0))] {
        r.expect(format!("p({x}^{y})"), p_and(x, y)?, v, Basis::Reference);
    }
    for (x, y) in [("a", "a'"), ("b", "b'")] {
        r.expect(format!("p({x}^{y})"), p_and(x, y)?, int(0), Basis::Reference);
    }
    for (x, y) in [("a", "b"), ("a", "b'"), ("a'", "b"), ("a'", "b'")] {
        r.expect(format!("p({x}^{y})"), p_and(x, y)?, ratio(1, 4), Basis::Reference);
    }
    for (x, y) in [("A", "b"), ("A", "b'"), ("A'", "b"), ("A'", "b'"), ("B", "a"), ("B", "a'"), ("B'", "a"), ("B'", "a'")] {
        r.expect(format!("p({x}^{y})"), p_and(x, y)?, ratio(1, 8), Basis::Reference);
    }

    // Quantum probabilities as conditionals.
    let ab: SelectionPattern = "1010".parse().expect("pattern");
    let cond = reproduce_conditional(&setup, &unified, &[(0, 0), (2, 0)], &ab)?;
    r.expect("p(X_A^X_B | X_a^X_b)", cond.clone(), ratio(3, 8), Basis::Reference);
    r.expect("p(X_A^X_B | X_a^X_b) = tr(WAB)", to_f64(&cond), tr2(&a, &b)?, Basis::Derived);
    r.expect("p(X_a^X_b)", sp.probability_of(&pattern_event_name(&ab))?, ratio(1, 4), Basis::Reference);
    r.expect("p(X_A | X_a)", sp.conditional(&ev["A"], &ev["a"])?, ratio(1, 2), Basis::Reference);
    r.expect(
        "X_A^X_B within X_a^X_b",
        ev["A"].intersection(&ev["B"]).is_subset(sp.event(&pattern_event_name(&ab))?),
        true,
        Basis::Reference,
    );

    // Substituting conditionals into the polytope test fails ...
    let s4 = PairSet::s4();
    let h = ratio(1, 2);
    let q = |x: f64| exact_trace(x, "joint trace");
    let naive = CorrelationVector::new(
        s4.clone(),
        vec![h.clone(), h.clone(), h.clone(), h],
        vec![q(tr2(&a, &b)?)?, q(tr2(&a, &b2)?)?, q(tr2(&a2, &b)?)?, q(tr2(&a2, &b2)?)?],
    )?;
    let naive_cert = is_member(&naive.to_f64())?;
    r.expect("naive vector member (LP)", naive_cert.member, false, Basis::Reference);
    let checks = clauser_horne_check_exact(&naive)?;
    r.expect("naive vector satisfies CH", all_satisfied(&checks), false, Basis::Reference);
    if let Some(worst) = checks.iter().max_by(|x, y| x.value.cmp(&y.value)) {
        r.record("naive violated facet", Quantity::Text(worst.name.clone()));
        r.expect("naive facet violation", worst.value.clone(), ratio(1, 8), Basis::Derived);
    }

    // ... while the observed probabilities are classical.
    let observed = observed_correlation_vector_for(&setup, &unified, &[0, 0, 0, 0], &s4)?;
    let selection = CorrelationVector::new(s4.clone(), vec![ratio(1, 2); 4], vec![ratio(1, 4); 4])?;
    let product = censorship_product(&naive, &selection)?;
    r.expect("observed vector = quantum x selection", observed == product, true, Basis::Derived);
    let expected_obs = [ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(3, 32), ratio(3, 32), int(0), ratio(3, 32)];
    for ((name, got), want) in s4.coordinate_names().iter().zip(observed.flat()).zip(expected_obs) {
        r.expect(format!("observed {name}"), got, want, Basis::Reference);
    }
    let cert = is_member(&observed.to_f64())?;
    r.expect("observed vector member (LP)", cert.member, true, Basis::Derived);
    let rebuilt = cert.reconstruct(&s4);
    let err = rebuilt.flat().iter().zip(observed.to_f64().flat()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    r.record("certificate reconstruction error", err);
    r.expect("certificate within tolerance", err <= TAU_LP, true, Basis::Derived);
    r.expect("observed vector satisfies CH", all_satisfied(&clauser_horne_check_exact(&observed)?), true, Basis::Derived);
    r.note("conditional probabilities violate the Clauser-Horne system; the observed unconditional ones do not");
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_default_scenarios_pass() {
        for name in SCENARIOS {
            let r = run_scenario(name).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures());
        }
        assert!(run_scenario("nope").is_err());
    }

    #[test]
    fn example_one_degenerate_angles() {
        let r = example_one(0.0, None).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r.quantities["commutes"], Quantity::Flag(true));
        assert!(matches!(r.quantities["p(E1^E2)"], Quantity::Float(x) if (x - 1.0).abs() < 1e-9));
        let r = example_one(std::f64::consts::FRAC_PI_4, None).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r.quantities["commutes"], Quantity::Flag(true));
        assert!(matches!(r.quantities["inequality lhs"], Quantity::Float(x) if (x - 1.0).abs() < 1e-9));
        let r = example_one(0.3, Some(1.1)).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn double_slit_variants() {
        let r = double_slit(&ratio(1, 10), &ratio(1, 10), &ratio(3, 10), None).unwrap();
        assert!(r.passed());
        assert_eq!(r.quantities["p(X_A)+p(X_B) = p(X_C)"], Quantity::Flag(false));
        let r = double_slit(&ratio(1, 10), &ratio(1, 5), &ratio(3, 10), None).unwrap();
        assert_eq!(r.quantities["naive pA+pB = pC"], Quantity::Flag(true));
        assert!(r.passed());
        let r = double_slit(&int(0), &int(0), &ratio(1, 2), Some(&ratio(1, 4))).unwrap();
        assert!(r.passed());
        assert_eq!(r.quantities["p(X_A)"], Quantity::Exact(int(0)));
        assert!(double_slit(&ratio(3, 2), &int(0), &int(0), None).is_err());
        assert!(double_slit(&int(0), &int(0), &int(0), Some(&ratio(2, 3))).is_err());
    }

    #[test]
    fn tolerance_override_reevaluates_float_verdicts() {
        let mut r = ScenarioReport::new("t");
        r.expect("x", 1.0 + 1e-6, 1.0, Basis::Derived);
        assert!(!r.passed());
        let r = r.with_tolerance(1e-3);
        assert!(r.passed());
    }

    #[test]
    fn reports_render() {
        let r = coin().unwrap();
        let text = r.to_text();
        assert!(text.contains("p(H|ON)"));
        assert!(text.contains("result: PASS"));
        let j = r.to_json();
        assert_eq!(j["quantities"]["p(H)"], "7/20");
        assert_eq!(j["expectations"]["p(H)"]["basis"], "reference");
    }
}
