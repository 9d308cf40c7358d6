//! Backend-tagged points and finite partial maps between them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::vector::SparseVec;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Vector(SparseVec),
    /// Atom of the countable pure set.
    Atom(u32),
    /// Point of an explicit finite structure.
    Point(u32),
}

impl Element {
    pub fn as_vector(&self) -> Option<&SparseVec> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn index(&self) -> Option<u32> {
        match self {
            Element::Atom(a) | Element::Point(a) => Some(*a),
            Element::Vector(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("element serializes")
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Element::Vector(v) => {
                let coords: BTreeMap<String, u8> = v.coords().iter().map(|(i, c)| (i.to_string(), *c)).collect();
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("q", &v.q())?;
                m.serialize_entry("coords", &coords)?;
                m.end()
            }
            Element::Atom(a) | Element::Point(a) => s.serialize_u32(*a),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vector(v) => {
                if v.is_zero() {
                    return write!(f, "0");
                }
                let terms: Vec<String> = v
                    .coords()
                    .iter()
                    .map(|(i, c)| if *c == 1 { format!("e{i}") } else { format!("{c}e{i}") })
                    .collect();
                write!(f, "{}", terms.join("+"))
            }
            Element::Atom(a) => write!(f, "a{a}"),
            Element::Point(p) => write!(f, "p{p}"),
        }
    }
}

/// Parse a GF(q) element of the form {"q": q, "coords": {"i": c}}.
pub fn vector_from_json(v: &Value) -> Result<SparseVec> {
    let q = v.get("q").and_then(Value::as_u64).ok_or_else(|| Error::Invalid(format!("missing q in {v}")))? as u8;
    let coords = v
        .get("coords")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Invalid(format!("missing coords in {v}")))?;
    let mut pairs = Vec::new();
    for (k, c) in coords {
        let i: u32 = k.parse().map_err(|_| Error::Invalid(format!("bad index {k}")))?;
        let c = c.as_u64().ok_or_else(|| Error::Invalid(format!("bad coefficient {c}")))?;
        if c == 0 || c >= q as u64 {
            return Err(Error::Invalid(format!("coefficient {c} invalid for GF({q})")));
        }
        pairs.push((i, c as u8));
    }
    SparseVec::from_pairs(q, pairs)
}

/// A finite injective map between elements of one backend.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialMap {
    pairs: BTreeMap<Element, Element>,
}

impl PartialMap {
    pub fn new() -> Self {
        PartialMap::default()
    }

    /// Builds a map, rejecting conflicting or non-injective pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Element, Element)>) -> Result<Self> {
        let mut m = PartialMap::new();
        for (a, b) in pairs {
            m.insert(a, b)?;
        }
        Ok(m)
    }

    pub fn identity<'a>(dom: impl IntoIterator<Item = &'a Element>) -> Self {
        PartialMap { pairs: dom.into_iter().map(|x| (x.clone(), x.clone())).collect() }
    }

    pub fn insert(&mut self, a: Element, b: Element) -> Result<()> {
        if let Some(old) = self.pairs.get(&a) {
            if *old != b {
                return Err(Error::Invalid(format!("{a} mapped to both {old} and {b}")));
            }
            return Ok(());
        }
        if self.pairs.values().any(|x| *x == b) {
            return Err(Error::Invalid(format!("{b} hit twice")));
        }
        self.pairs.insert(a, b);
        Ok(())
    }

    pub fn get(&self, a: &Element) -> Option<&Element> {
        self.pairs.get(a)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &Element)> {
        self.pairs.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Element> {
        self.pairs.keys()
    }

    pub fn image(&self) -> impl Iterator<Item = &Element> {
        self.pairs.values()
    }

    pub fn domain_set(&self) -> BTreeSet<Element> {
        self.pairs.keys().cloned().collect()
    }

    pub fn image_set(&self) -> BTreeSet<Element> {
        self.pairs.values().cloned().collect()
    }

    pub fn inverse(&self) -> PartialMap {
        PartialMap { pairs: self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    /// `other` after `self`, defined where both steps are.
    pub fn then(&self, other: &PartialMap) -> PartialMap {
        PartialMap {
            pairs: self.pairs.iter().filter_map(|(a, b)| other.get(b).map(|c| (a.clone(), c.clone()))).collect(),
        }
    }

    /// Union of two maps if they agree on overlaps and stay injective.
    pub fn union(&self, other: &PartialMap) -> Option<PartialMap> {
        let mut m = self.clone();
        for (a, b) in other.iter() {
            m.insert(a.clone(), b.clone()).ok()?;
        }
        Some(m)
    }

    pub fn restrict<'a>(&self, dom: impl IntoIterator<Item = &'a Element>) -> PartialMap {
        PartialMap {
            pairs: dom.into_iter().filter_map(|a| self.pairs.get(a).map(|b| (a.clone(), b.clone()))).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.pairs.iter().map(|(a, b)| json!([a, b])).collect())
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
