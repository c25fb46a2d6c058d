//! Finite Kolmogorov probability spaces with exact rational weights,
//! named events, conditional probability, and joining of models that
//! belong to different conditions into one space that also contains the
//! conditioning events.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{CorrelationVector, PairSet};
use crate::rational::{format_rational, parse_rational, Rational};

/// A set of sample-point labels. Membership in a particular space is
/// checked when the event is used.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Event {
    members: BTreeSet<String>,
}

impl Event {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Event { members: labels.into_iter().map(Into::into).collect() }
    }

    pub fn members(&self) -> &BTreeSet<String> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn intersection(&self, other: &Event) -> Event {
        Event { members: self.members.intersection(&other.members).cloned().collect() }
    }

    pub fn union(&self, other: &Event) -> Event {
        Event { members: self.members.union(&other.members).cloned().collect() }
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// `(Ω, 2^Ω, μ)` on a finite set of labeled points.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteProbabilitySpace {
    points: Vec<String>,
    weights: Vec<Rational>,
    index: HashMap<String, usize>,
    named_events: BTreeMap<String, Event>,
}

impl FiniteProbabilitySpace {
    /// Validates unique labels, nonnegative weights summing exactly to one,
    /// and that every named event only mentions known points.
    pub fn new(points: Vec<(String, Rational)>, named_events: BTreeMap<String, Event>) -> Result<Self> {
        let mut index = HashMap::with_capacity(points.len());
        let mut labels = Vec::with_capacity(points.len());
        let mut weights = Vec::with_capacity(points.len());
        for (i, (label, w)) in points.into_iter().enumerate() {
            if w.is_negative() {
                return Err(Error::Domain(format!("point {label:?} has negative weight {}", format_rational(&w))));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate sample point {label:?}")));
            }
            labels.push(label);
            weights.push(w);
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Normalization(format!("weights sum to {}", format_rational(&total))));
        }
        let space = FiniteProbabilitySpace { points: labels, weights, index, named_events: BTreeMap::new() };
        for (name, ev) in &named_events {
            space.check_owned(ev).map_err(|e| match e {
                Error::Ownership(m) => Error::Ownership(format!("named event {name:?}: {m}")),
                other => other,
            })?;
        }
        Ok(FiniteProbabilitySpace { named_events, ..space })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn weight(&self, label: &str) -> Option<&Rational> {
        self.index.get(label).map(|&i| &self.weights[i])
    }

    pub fn weighted_points(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.points.iter().map(String::as_str).zip(&self.weights)
    }

    pub fn named_events(&self) -> &BTreeMap<String, Event> {
        &self.named_events
    }

    pub fn event(&self, name: &str) -> Result<&Event> {
        self.named_events
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("no event named {name:?}")))
    }

    /// Ω.
    pub fn whole(&self) -> Event {
        Event::new(self.points.iter().cloned())
    }

    fn check_owned(&self, event: &Event) -> Result<()> {
        match event.members.iter().find(|m| !self.index.contains_key(*m)) {
            Some(foreign) => Err(Error::Ownership(format!("point {foreign:?} is not in the space"))),
            None => Ok(()),
        }
    }

    pub fn probability(&self, event: &Event) -> Result<Rational> {
        self.check_owned(event)?;
        Ok(event.members.iter().map(|m| &self.weights[self.index[m]]).sum())
    }

    /// `P(event | given) = P(event ∩ given) / P(given)`.
    pub fn conditional(&self, event: &Event, given: &Event) -> Result<Rational> {
        self.check_owned(event)?;
        let denom = self.probability(given)?;
        if denom.is_zero() {
            return Err(Error::Conditioning(format!("condition with {} points has probability zero", given.len())));
        }
        Ok(self.probability(&event.intersection(given))? / denom)
    }

    pub fn probability_of(&self, name: &str) -> Result<Rational> {
        self.probability(self.event(name)?)
    }

    pub fn conditional_of(&self, name: &str, given: &str) -> Result<Rational> {
        self.conditional(self.event(name)?, self.event(given)?)
    }

    pub fn to_json_model(&self) -> SpaceJson {
        SpaceJson {
            points: self
                .weighted_points()
                .map(|(label, w)| PointJson { label: label.to_string(), weight: format_rational(w) })
                .collect(),
            events: self
                .named_events
                .iter()
                .map(|(k, v)| (k.clone(), v.members.iter().cloned().collect()))
                .collect(),
        }
    }

    pub fn from_json_model(model: &SpaceJson) -> Result<Self> {
        let points = model
            .points
            .iter()
            .map(|p| Ok((p.label.clone(), parse_rational(&p.weight)?)))
            .collect::<Result<Vec<_>>>()?;
        let events = model.events.iter().map(|(k, v)| (k.clone(), Event::new(v.iter().cloned()))).collect();
        FiniteProbabilitySpace::new(points, events)
    }
}

/// Serialized form: points with `"num/den"` weights and named events as
/// label lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<PointJson>,
    pub events: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub label: String,
    pub weight: String,
}

/// Label of a point of a joined space.
pub fn joined_label(condition: &str, label: &str) -> String {
    format!("({condition}, {label})")
}

/// Disjoint union of per-condition models, each scaled by its mixing
/// weight. Every condition name becomes an event (its block); each outcome
/// event name becomes the union of its copies across blocks.
pub fn join_conditional_models(
    models: &[(String, FiniteProbabilitySpace)],
    mixing: &BTreeMap<String, Rational>,
) -> Result<FiniteProbabilitySpace> {
    let mut seen = BTreeSet::new();
    for (cond, _) in models {
        if !seen.insert(cond.as_str()) {
            return Err(Error::Domain(format!("condition {cond:?} appears twice")));
        }
    }
    if let Some(extra) = mixing.keys().find(|k| !seen.contains(k.as_str())) {
        return Err(Error::Domain(format!("mixing weight for unknown condition {extra:?}")));
    }
    let mut total = Rational::zero();
    for (cond, _) in models {
        let w = mixing
            .get(cond)
            .ok_or_else(|| Error::Normalization(format!("no mixing weight for condition {cond:?}")))?;
        if w.is_negative() {
            return Err(Error::Normalization(format!("negative mixing weight for {cond:?}")));
        }
        total += w;
    }
    if !total.is_one() {
        return Err(Error::Normalization(format!("mixing weights sum to {}", format_rational(&total))));
    }

    let mut points = Vec::new();
    let mut events: BTreeMap<String, Event> = BTreeMap::new();
    for (cond, model) in models {
        let w = &mixing[cond];
        let mut block = BTreeSet::new();
        for (label, pw) in model.weighted_points() {
            let joined = joined_label(cond, label);
            block.insert(joined.clone());
            points.push((joined, pw * w));
        }
        for (name, ev) in model.named_events() {
            let copies = Event::new(ev.members().iter().map(|m| joined_label(cond, m)));
            let slot = events.entry(name.clone()).or_default();
            *slot = slot.union(&copies);
        }
        if events.contains_key(cond) {
            return Err(Error::Domain(format!("condition name {cond:?} collides with an outcome event name")));
        }
        events.insert(cond.clone(), Event { members: block });
    }
    FiniteProbabilitySpace::new(points, events)
}

/// Singles `μ(X_i)` and pair intersections `μ(X_i ∩ X_j)` for `{i,j} ∈ S`.
pub fn correlation_vector_of(
    space: &FiniteProbabilitySpace,
    events: &[Event],
    layout: &PairSet,
) -> Result<CorrelationVector<Rational>> {
    if events.len() != layout.n() {
        return Err(Error::Layout(format!("{} events for a layout with n = {}", events.len(), layout.n())));
    }
    let singles = events.iter().map(|e| space.probability(e)).collect::<Result<Vec<_>>>()?;
    let pairs = layout
        .pairs()
        .iter()
        .map(|&(i, j)| space.probability(&events[i - 1].intersection(&events[j - 1])))
        .collect::<Result<Vec<_>>>()?;
    CorrelationVector::new(layout.clone(), singles, pairs)
}

/// Builds a space whose points are outcome names with the given weights,
/// and whose named events are the singleton outcomes.
pub fn outcome_model(outcomes: &[(&str, Rational)]) -> Result<FiniteProbabilitySpace> {
    let points = outcomes.iter().map(|(l, w)| (l.to_string(), w.clone())).collect();
    let events = outcomes.iter().map(|(l, _)| (l.to_string(), Event::new([*l]))).collect();
    FiniteProbabilitySpace::new(points, events)
}
