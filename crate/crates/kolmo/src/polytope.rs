//! Classical correlation polytopes `C(n, S)`.
//!
//! A correlation vector lists single-event probabilities `p_i` followed by
//! joint probabilities `p_ij` for the pairs in `S`. It has a Kolmogorovian
//! representation iff it is a convex combination of the `2^n` deterministic
//! vertices `u^ε` (`u_i = ε_i`, `u_ij = ε_i ε_j`). Membership is decided by a
//! phase-one LP; for `n = 4, S = {13, 14, 23, 24}` the closed-form
//! Clauser–Horne system is also available and evaluates exactly over
//! rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational, RationalText};
use crate::simplex::{phase_one, Feasibility};

/// Tolerance for LP feasibility and certificate checks.
pub const TAU_LP: f64 = 1e-8;
/// Vertex enumeration cap.
pub const MAX_EVENTS: usize = 16;

/// `n` events and a set `S` of unordered pairs `{i, j}` (1-based), kept in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairSet {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairSet {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Layout("a correlation vector needs at least one event".into()));
        }
        let mut out = Vec::new();
        for (a, b) in pairs {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == j || i == 0 || j > n {
                return Err(Error::Layout(format!("pair {{{a},{b}}} is not a valid pair of indices in 1..={n}")));
            }
            out.push((i, j));
        }
        out.sort_unstable();
        let before = out.len();
        out.dedup();
        if out.len() != before {
            return Err(Error::Layout("duplicate pairs".into()));
        }
        Ok(PairSet { n, pairs: out })
    }

    /// `S₄ = {{1,3},{1,4},{2,3},{2,4}}`.
    pub fn s4() -> Self {
        PairSet::new(4, [(1, 3), (1, 4), (2, 3), (2, 4)]).expect("valid")
    }

    pub fn all_pairs(n: usize) -> Result<Self> {
        PairSet::new(n, (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))))
    }

    /// Parses `"1-3,1-4"` (also accepts spaces or semicolons as separators).
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in text.split([',', ';', ' ']).map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item
                .split_once(['-', ':'])
                .ok_or_else(|| Error::InvalidInput(format!("pair {item:?} is not of the form i-j")))?;
            let a: usize = a.trim().parse().map_err(|_| Error::InvalidInput(format!("bad index in {item:?}")))?;
            let b: usize = b.trim().parse().map_err(|_| Error::InvalidInput(format!("bad index in {item:?}")))?;
            pairs.push((a, b));
        }
        PairSet::new(n, pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Total coordinates `n + |S|`.
    pub fn len(&self) -> usize {
        self.n + self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_s4(&self) -> bool {
        *self == PairSet::s4()
    }

    pub fn pair_position(&self, i: usize, j: usize) -> Option<usize> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.pairs.binary_search(&key).ok()
    }

    /// Coordinate names in layout order: `p1 … pn, p13, …`.
    pub fn coordinate_names(&self) -> Vec<String> {
        (1..=self.n)
            .map(|i| format!("p{i}"))
            .chain(self.pairs.iter().map(|(i, j)| format!("p{i}{}{j}", if self.n > 9 { "_" } else { "" })))
            .collect()
    }
}

impl fmt::Display for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.pairs.iter().map(|(i, j)| format!("{i}-{j}")).collect();
        write!(f, "n={} S={{{}}}", self.n, items.join(","))
    }
}

/// `(p_1, …, p_n, …, p_ij, …)` laid out as singles then pairs in
/// lexicographic order. Generic over the scalar so exact rational vectors
/// share the layout logic.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationVector<T = f64> {
    layout: PairSet,
    singles: Vec<T>,
    pairs: Vec<T>,
}

impl<T: Clone> CorrelationVector<T> {
    pub fn new(layout: PairSet, singles: Vec<T>, pairs: Vec<T>) -> Result<Self> {
        if singles.len() != layout.n() || pairs.len() != layout.pairs().len() {
            return Err(Error::Layout(format!(
                "expected {} singles and {} pairs, got {} and {}",
                layout.n(),
                layout.pairs().len(),
                singles.len(),
                pairs.len()
            )));
        }
        Ok(CorrelationVector { layout, singles, pairs })
    }

    pub fn from_flat(layout: PairSet, values: Vec<T>) -> Result<Self> {
        if values.len() != layout.len() {
            return Err(Error::Layout(format!("expected {} coordinates, got {}", layout.len(), values.len())));
        }
        let mut singles = values;
        let pairs = singles.split_off(layout.n());
        Ok(CorrelationVector { layout, singles, pairs })
    }

    pub fn layout(&self) -> &PairSet {
        &self.layout
    }

    pub fn singles(&self) -> &[T] {
        &self.singles
    }

    pub fn pairs(&self) -> &[T] {
        &self.pairs
    }

    /// `p_i`, 1-based.
    pub fn single(&self, i: usize) -> &T {
        &self.singles[i - 1]
    }

    /// `p_ij` for `{i, j} ∈ S`.
    pub fn pair(&self, i: usize, j: usize) -> Option<&T> {
        self.layout.pair_position(i, j).map(|k| &self.pairs[k])
    }

    pub fn flat(&self) -> Vec<T> {
        self.singles.iter().chain(&self.pairs).cloned().collect()
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> CorrelationVector<U> {
        CorrelationVector {
            layout: self.layout.clone(),
            singles: self.singles.iter().map(&f).collect(),
            pairs: self.pairs.iter().map(&f).collect(),
        }
    }
}

impl CorrelationVector<Rational> {
    pub fn to_f64(&self) -> CorrelationVector<f64> {
        self.map(to_f64)
    }
}

/// `ε ∈ {0,1}^n`, displayed as a bit string `ε_1 ε_2 … ε_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel(Vec<bool>);

impl VertexLabel {
    pub fn new(bits: Vec<bool>) -> Self {
        VertexLabel(bits)
    }

    /// Bit `i` (0-based) of `index` becomes `ε_{i+1}`.
    pub fn from_index(n: usize, index: u64) -> Self {
        VertexLabel((0..n).map(|i| index >> i & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn to_index(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum()
    }

    /// `u^ε`.
    pub fn vertex(&self, layout: &PairSet) -> CorrelationVector<f64> {
        let e = |i: usize| if self.0[i - 1] { 1.0 } else { 0.0 };
        CorrelationVector {
            layout: layout.clone(),
            singles: (1..=layout.n()).map(e).collect(),
            pairs: layout.pairs().iter().map(|&(i, j)| e(i) * e(j)).collect(),
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// All `2^n` vertices of `C(n, S)`, ordered by the integer `Σ ε_i 2^{i-1}`.
pub fn vertices(layout: &PairSet) -> Result<Vec<(VertexLabel, CorrelationVector<f64>)>> {
    let n = layout.n();
    if n > MAX_EVENTS {
        return Err(Error::Size(format!("vertex enumeration is capped at n = {MAX_EVENTS}, got {n}")));
    }
    Ok((0..1u64 << n)
        .map(|k| {
            let label = VertexLabel::from_index(n, k);
            let v = label.vertex(layout);
            (label, v)
        })
        .collect())
}

/// One inequality of the Clauser–Horne system written as `value ≤ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck<T> {
    pub name: String,
    pub value: T,
    pub satisfied: bool,
}

/// Result of an LP membership query.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipCertificate {
    pub member: bool,
    /// Convex weights `λ_ε > 0` (only present for members).
    pub weights: BTreeMap<VertexLabel, f64>,
    /// `‖Σ λ_ε u^ε − p‖_∞` for members; the phase-one objective otherwise.
    pub residual: f64,
    /// Largest Clauser–Horne violation, reported for non-members of `C(4, S₄)`.
    pub violated_facet: Option<InequalityCheck<f64>>,
}

impl MembershipCertificate {
    /// Recomputes `Σ λ_ε u^ε`.
    pub fn reconstruct(&self, layout: &PairSet) -> CorrelationVector<f64> {
        let mut acc = vec![0.0; layout.len()];
        for (label, &w) in &self.weights {
            for (a, u) in acc.iter_mut().zip(label.vertex(layout).flat()) {
                *a += w * u;
            }
        }
        CorrelationVector::from_flat(layout.clone(), acc).expect("layout")
    }
}

/// Decides `p ∈ C(n, S)` by phase-one simplex over the vertex weights.
pub fn is_member(p: &CorrelationVector<f64>) -> Result<MembershipCertificate> {
    let layout = p.layout();
    if p.flat().iter().any(|x| !x.is_finite()) {
        return Err(Error::Layout("correlation vector has non-finite entries".into()));
    }
    let verts = vertices(layout)?;
    let cols: Vec<Vec<f64>> = verts.iter().map(|(_, v)| v.flat()).collect();
    // Rows: Σλ = 1, then one row per coordinate.
    let mut rows = vec![vec![1.0; cols.len()]];
    for k in 0..layout.len() {
        rows.push(cols.iter().map(|c| c[k]).collect());
    }
    let mut rhs = vec![1.0];
    rhs.extend(p.flat());

    match phase_one(&rows, &rhs, TAU_LP) {
        Feasibility::Feasible { x, residual } if residual <= TAU_LP => {
            let weights = verts
                .into_iter()
                .zip(x)
                .filter(|(_, w)| *w > 0.0)
                .map(|((label, _), w)| (label, w))
                .collect();
            Ok(MembershipCertificate { member: true, weights, residual, violated_facet: None })
        }
        Feasibility::Feasible { residual, .. } => Ok(non_member(p, residual)),
        Feasibility::Infeasible { infeasibility } => Ok(non_member(p, infeasibility)),
    }
}

fn non_member(p: &CorrelationVector<f64>, residual: f64) -> MembershipCertificate {
    let violated_facet = if p.layout().is_s4() {
        clauser_horne_check(p)
            .ok()
            .and_then(|checks| checks.into_iter().max_by(|a, b| a.value.total_cmp(&b.value)))
            .filter(|c| c.value > 0.0)
    } else {
        None
    };
    MembershipCertificate { member: false, weights: BTreeMap::new(), residual, violated_facet }
}

/// Scalars the Clauser–Horne system can be evaluated over.
pub trait ChScalar:
    Clone + PartialOrd + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}

impl<T> ChScalar for T where
    T: Clone + PartialOrd + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>
{
}

/// Evaluates the complete facet system of `C(4, S₄)`:
/// `0 ≤ p_ij ≤ p_i, p_j ≤ 1`, `p_i + p_j − p_ij ≤ 1` and the four two-sided
/// Clauser–Horne inequalities. Each entry is reported as `value ≤ 0`;
/// `satisfied` means `value ≤ tolerance`.
/// Plus-pairs, minus-pair and minus-singles of one Clauser–Horne form.
type ChForm = ([(usize, usize); 3], (usize, usize), [usize; 2]);

pub fn clauser_horne_check_with<T: ChScalar>(p: &CorrelationVector<T>, tolerance: &T) -> Result<Vec<InequalityCheck<T>>> {
    if !p.layout().is_s4() {
        return Err(Error::Precondition(format!(
            "the Clauser–Horne system applies to n=4 with S={{1-3,1-4,2-3,2-4}}, got {}",
            p.layout()
        )));
    }
    let s = |i: usize| p.single(i).clone();
    let q = |i: usize, j: usize| p.pair(i, j).expect("S4 pair").clone();
    let one = T::one();
    let zero = T::zero();
    let mut out: Vec<(String, T)> = Vec::new();

    for i in 1..=4 {
        out.push((format!("p{i} <= 1"), s(i) - one.clone()));
    }
    for &(i, j) in p.layout().pairs() {
        out.push((format!("0 <= p{i}{j}"), zero.clone() - q(i, j)));
        out.push((format!("p{i}{j} <= p{i}"), q(i, j) - s(i)));
        out.push((format!("p{i}{j} <= p{j}"), q(i, j) - s(j)));
        out.push((format!("p{i}+p{j}-p{i}{j} <= 1"), s(i) + s(j) - q(i, j) - one.clone()));
    }
    // (plus-pairs, minus-pair, minus-singles)
    let forms: [ChForm; 4] = [
        ([(1, 3), (1, 4), (2, 4)], (2, 3), [1, 4]),
        ([(2, 3), (2, 4), (1, 4)], (1, 3), [2, 4]),
        ([(1, 4), (1, 3), (2, 3)], (2, 4), [1, 3]),
        ([(2, 4), (2, 3), (1, 3)], (1, 4), [2, 3]),
    ];
    for (plus, minus, singles) in forms {
        let expr = plus.iter().fold(zero.clone(), |acc, &(i, j)| acc + q(i, j)) - q(minus.0, minus.1)
            - s(singles[0])
            - s(singles[1]);
        let text = format!(
            "p{}{}+p{}{}+p{}{}-p{}{}-p{}-p{}",
            plus[0].0, plus[0].1, plus[1].0, plus[1].1, plus[2].0, plus[2].1, minus.0, minus.1, singles[0], singles[1]
        );
        out.push((format!("{text} <= 0"), expr.clone()));
        out.push((format!("-1 <= {text}"), zero.clone() - one.clone() - expr));
    }
    Ok(out
        .into_iter()
        .map(|(name, value)| {
            let satisfied = value <= *tolerance;
            InequalityCheck { name, value, satisfied }
        })
        .collect())
}

/// Floating point evaluation with tolerance [`TAU_LP`].
pub fn clauser_horne_check(p: &CorrelationVector<f64>) -> Result<Vec<InequalityCheck<f64>>> {
    clauser_horne_check_with(p, &TAU_LP)
}

/// Exact evaluation (zero tolerance).
pub fn clauser_horne_check_exact(p: &CorrelationVector<Rational>) -> Result<Vec<InequalityCheck<Rational>>> {
    clauser_horne_check_with(p, &Rational::zero())
}

pub fn all_satisfied<T>(checks: &[InequalityCheck<T>]) -> bool {
    checks.iter().all(|c| c.satisfied)
}

/// Componentwise product `(π_i p̃_i, …, π_ij p̃_ij, …)` of quantum
/// conditional probabilities and selection probabilities.
pub fn censorship_product<T>(quantum: &CorrelationVector<T>, selection: &CorrelationVector<T>) -> Result<CorrelationVector<T>>
where
    T: Clone + Mul<Output = T>,
{
    if quantum.layout() != selection.layout() {
        return Err(Error::Layout(format!("layouts differ: {} vs {}", quantum.layout(), selection.layout())));
    }
    let mul = |a: &[T], b: &[T]| a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).collect::<Vec<T>>();
    CorrelationVector::new(
        quantum.layout().clone(),
        mul(quantum.singles(), selection.singles()),
        mul(quantum.pairs(), selection.pairs()),
    )
}

/// JSON query `{ "n": 4, "pairs": [[1,3],…], "singles": […], "pairwise": […] }`.
/// Entries may be numbers or `"num/den"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationQuery {
    pub n: usize,
    pub pairs: Vec<[usize; 2]>,
    pub singles: Vec<RationalText>,
    pub pairwise: Vec<RationalText>,
}

impl CorrelationQuery {
    /// Pairs are matched to `pairwise` entries in the order given in the file.
    pub fn to_vector(&self) -> Result<CorrelationVector<Rational>> {
        if self.pairs.len() != self.pairwise.len() {
            return Err(Error::Layout(format!(
                "{} pairs but {} pairwise values",
                self.pairs.len(),
                self.pairwise.len()
            )));
        }
        let layout = PairSet::new(self.n, self.pairs.iter().map(|p| (p[0], p[1])))?;
        let singles = self.singles.iter().cloned().map(RationalText::into_rational).collect::<Result<Vec<_>>>()?;
        let mut values = vec![Rational::zero(); layout.pairs().len()];
        for (p, v) in self.pairs.iter().zip(&self.pairwise) {
            let k = layout.pair_position(p[0], p[1]).expect("validated");
            values[k] = v.clone().into_rational()?;
        }
        CorrelationVector::new(layout, singles, values)
    }

    pub fn from_vector(p: &CorrelationVector<Rational>) -> Self {
        CorrelationQuery {
            n: p.layout().n(),
            pairs: p.layout().pairs().iter().map(|&(i, j)| [i, j]).collect(),
            singles: p.singles().iter().map(|r| RationalText::Text(format_rational(r))).collect(),
            pairwise: p.pairs().iter().map(|r| RationalText::Text(format_rational(r))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn naive_epr() -> CorrelationVector<Rational> {
        let h = ratio(1, 2);
        let t = ratio(3, 8);
        CorrelationVector::new(PairSet::s4(), vec![h.clone(); 4], vec![t.clone(), t.clone(), ratio(0, 1), t]).unwrap()
    }

    #[test]
    fn pair_set_validation() {
        assert!(PairSet::new(2, [(1, 1)]).is_err());
        assert!(PairSet::new(2, [(1, 3)]).is_err());
        assert!(PairSet::new(2, [(1, 2), (2, 1)]).is_err());
        assert!(PairSet::new(0, []).is_err());
        let s = PairSet::parse(4, "2-4, 1-3,1-4 2-3").unwrap();
        assert!(s.is_s4());
        assert_eq!(s.coordinate_names()[4], "p13");
    }

    #[test]
    fn small_vertex_sets() {
        let v = vertices(&PairSet::new(1, []).unwrap()).unwrap();
        assert_eq!(v.iter().map(|(_, x)| x.flat()).collect::<Vec<_>>(), vec![vec![0.0], vec![1.0]]);
        let v = vertices(&PairSet::new(2, [(1, 2)]).unwrap()).unwrap();
        let flat: Vec<Vec<f64>> = v.iter().map(|(_, x)| x.flat()).collect();
        assert_eq!(
            flat,
            vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 1.0]]
        );
        assert!(matches!(vertices(&PairSet::new(17, []).unwrap()), Err(Error::Size(_))));
    }

    #[test]
    fn s4_vertices_have_product_pair_coordinates() {
        let v = vertices(&PairSet::s4()).unwrap();
        assert_eq!(v.len(), 16);
        for (label, x) in &v {
            let b: Vec<u8> = label.bits().iter().map(|&b| b as u8).collect();
            // Independent recomputation of ε_i ε_j.
            let expected = [b[0] & b[2], b[0] & b[3], b[1] & b[2], b[1] & b[3]];
            for (k, e) in expected.iter().enumerate() {
                assert_eq!(x.pairs()[k], *e as f64);
            }
        }
    }

    #[test]
    fn uniform_point_is_member() {
        let p = CorrelationVector::new(PairSet::s4(), vec![0.5; 4], vec![0.25; 4]).unwrap();
        let cert = is_member(&p).unwrap();
        assert!(cert.member);
        let back = cert.reconstruct(p.layout());
        for (a, b) in back.flat().iter().zip(p.flat()) {
            assert!((a - b).abs() <= TAU_LP);
        }
        // Uniform weights over all 16 vertices also reproduce it.
        let mut acc = vec![0.0; 8];
        for (_, v) in vertices(&PairSet::s4()).unwrap() {
            for (a, x) in acc.iter_mut().zip(v.flat()) {
                *a += x / 16.0;
            }
        }
        assert_eq!(acc, p.flat());
    }

    #[test]
    fn vertex_is_member_with_point_mass() {
        let layout = PairSet::s4();
        let label = VertexLabel::from_index(4, 0b1011);
        let cert = is_member(&label.vertex(&layout)).unwrap();
        assert!(cert.member);
        assert_eq!(cert.weights.len(), 1);
        assert!((cert.weights[&label] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn naive_epr_vector_is_rejected_by_lp_and_closed_form() {
        let exact = naive_epr();
        let cert = is_member(&exact.to_f64()).unwrap();
        assert!(!cert.member);
        let facet = cert.violated_facet.expect("facet reported");
        assert_eq!(facet.name, "p13+p14+p24-p23-p1-p4 <= 0");
        assert!((facet.value - 0.125).abs() < 1e-12);

        let checks = clauser_horne_check_exact(&exact).unwrap();
        let violated: Vec<_> = checks.iter().filter(|c| !c.satisfied).collect();
        assert_eq!(violated.len(), 1);
        assert_eq!(violated[0].value, ratio(1, 8));
    }

    #[test]
    fn zero_vector_satisfies_everything() {
        let p = CorrelationVector::new(PairSet::s4(), vec![0.0; 4], vec![0.0; 4]).unwrap();
        assert!(all_satisfied(&clauser_horne_check(&p).unwrap()));
        assert!(is_member(&p).unwrap().member);
    }

    #[test]
    fn clauser_horne_requires_s4() {
        let p = CorrelationVector::new(PairSet::all_pairs(4).unwrap(), vec![0.0; 4], vec![0.0; 6]).unwrap();
        assert!(matches!(clauser_horne_check(&p), Err(Error::Precondition(_))));
        assert!(is_member(&p).unwrap().violated_facet.is_none());
    }

    #[test]
    fn censorship_product_of_epr_data() {
        let q = naive_epr();
        let sel = CorrelationVector::new(PairSet::s4(), vec![ratio(1, 2); 4], vec![ratio(1, 4); 4]).unwrap();
        let prod = censorship_product(&q, &sel).unwrap();
        assert_eq!(prod.singles(), &vec![ratio(1, 4); 4][..]);
        assert_eq!(prod.pairs(), &[ratio(3, 32), ratio(3, 32), ratio(0, 1), ratio(3, 32)][..]);
        assert!(is_member(&prod.to_f64()).unwrap().member);
        let ones = q.map(|_| ratio(1, 1));
        assert_eq!(censorship_product(&q, &ones).unwrap(), q);
        let other = CorrelationVector::new(PairSet::new(4, [(1, 2)]).unwrap(), vec![ratio(1, 1); 4], vec![ratio(1, 1)]).unwrap();
        assert!(matches!(censorship_product(&q, &other), Err(Error::Layout(_))));
    }

    #[test]
    fn layout_errors() {
        assert!(matches!(CorrelationVector::new(PairSet::s4(), vec![0.0; 3], vec![0.0; 4]), Err(Error::Layout(_))));
        let p = CorrelationVector::new(PairSet::s4(), vec![f64::NAN; 4], vec![0.0; 4]).unwrap();
        assert!(matches!(is_member(&p), Err(Error::Layout(_))));
    }

    #[test]
    fn query_json_round_trip() {
        let json = r#"{"n":4,"pairs":[[2,4],[1,3],[1,4],[2,3]],"singles":["1/2",0.5,"1/2","1/2"],"pairwise":["3/8","3/8",0.375,0]}"#;
        let q: CorrelationQuery = serde_json::from_str(json).unwrap();
        let v = q.to_vector().unwrap();
        assert_eq!(v, naive_epr());
        let again = CorrelationQuery::from_vector(&v).to_vector().unwrap();
        assert_eq!(again, v);
    }
}
