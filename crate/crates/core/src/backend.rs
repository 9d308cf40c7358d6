//! Uniform access to the concrete structures: GF(q) vector spaces of
//! countable dimension, the countable pure set, and explicit finite
//! relational structures.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use serde_json::Value;

use crate::auto::{Automorphism, Semilinear};
use crate::element::{vector_from_json, Element, PartialMap};
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::finite::{aut_group_finite, FiniteStructure, Searcher, DEFAULT_SIZE_BOUND};
use crate::perm::{closure, Perm, PermGroup};
use crate::vector::{window_vectors, Matrix, SparseVec, Span};

/// Largest automorphism group that is ever enumerated element by element.
pub const ELEMENT_CAP: usize = 40_320;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureKind {
    Span,
    Trivial,
    FixedPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub has_infinite_domain: bool,
    pub closure_kind: ClosureKind,
    pub supports_rank: bool,
    pub field_order: Option<u8>,
}

/// Position of a closed set above the bottom element of the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Depth {
    Bottom,
    Level(usize),
}

impl Depth {
    pub fn level(self) -> usize {
        match self {
            Depth::Bottom => 0,
            Depth::Level(k) => k,
        }
    }
}

/// A finitely generated closed set with its full element enumeration.
#[derive(Clone, Debug)]
pub struct ClosedSet {
    pub generators: Vec<Element>,
    /// Sorted canonically.
    pub elements: Vec<Element>,
    pub rank: usize,
    pub depth: Depth,
}

impl PartialEq for ClosedSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for ClosedSet {}

impl std::hash::Hash for ClosedSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state)
    }
}

impl PartialOrd for ClosedSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ClosedSet {
    /// Rank first, then canonical element order.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank.cmp(&other.rank).then_with(|| self.elements.cmp(&other.elements))
    }
}

impl ClosedSet {
    pub fn contains(&self, x: &Element) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &ClosedSet) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_bottom(&self) -> bool {
        self.depth == Depth::Bottom
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    /// Permutation of element indices induced by a bijection of the set.
    pub fn perm_of(&self, p: &PartialMap) -> Result<Perm> {
        let mut out = Vec::with_capacity(self.len());
        for x in &self.elements {
            let y = p.get(x).ok_or_else(|| Error::Invalid(format!("map undefined at {x}")))?;
            out.push(self.index_of(y).ok_or_else(|| Error::Invalid(format!("{y} outside the closed set")))? as u32);
        }
        Ok(Perm(out))
    }

    pub fn map_of(&self, p: &Perm) -> PartialMap {
        PartialMap::from_pairs(self.elements.iter().zip(&p.0).map(|(x, &j)| (x.clone(), self.elements[j as usize].clone())))
            .expect("permutation is a bijection")
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({"generators": self.generators, "elements": self.elements.len(), "rank": self.rank, "depth": self.depth})
    }

    /// Short label: generators, or the element list for tiny sets.
    pub fn label(&self) -> String {
        let g: Vec<String> = self.generators.iter().map(|x| x.to_string()).collect();
        format!("<{}>", g.join(","))
    }
}

/// Orbit of an element inside a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orbit {
    Finite(Vec<Element>),
    Unbounded,
}

/// Explicit finite structure with its automorphism group data.
#[derive(Debug)]
pub struct FiniteBackend {
    pub structure: FiniteStructure,
    searcher: Searcher,
    pub generators: Vec<Perm>,
    pub order: u64,
    elements: OnceLock<Option<PermGroup>>,
    lattice: OnceLock<Vec<Vec<u32>>>,
}

impl FiniteBackend {
    pub fn new(structure: FiniteStructure) -> Result<Self> {
        Self::with_bound(structure, DEFAULT_SIZE_BOUND)
    }

    pub fn with_bound(structure: FiniteStructure, bound: usize) -> Result<Self> {
        let (generators, order) = aut_group_finite(&structure, bound)?;
        let searcher = Searcher::new(&structure);
        Ok(FiniteBackend { structure, searcher, generators, order, elements: OnceLock::new(), lattice: OnceLock::new() })
    }

    pub fn size(&self) -> usize {
        self.structure.size
    }

    pub fn searcher(&self) -> &Searcher {
        &self.searcher
    }

    /// Every element of Aut(S), when the order is at most `ELEMENT_CAP`.
    pub fn group(&self) -> Result<&PermGroup> {
        self.elements
            .get_or_init(|| {
                (self.order as usize <= ELEMENT_CAP)
                    .then(|| PermGroup::generated(self.size(), &self.generators, ELEMENT_CAP).expect("order checked"))
            })
            .as_ref()
            .ok_or(Error::SizeBound { what: "automorphism group".into(), size: self.order, bound: ELEMENT_CAP as u64 })
    }

    /// Points fixed by every automorphism fixing `a` pointwise.
    pub fn fixed_closure(&self, a: &[u32]) -> Vec<u32> {
        let fixed: Vec<(u32, u32)> = a.iter().map(|&x| (x, x)).collect();
        let mut out = Vec::new();
        for b in 0..self.size() as u32 {
            if a.contains(&b) {
                out.push(b);
                continue;
            }
            let moved = (0..self.size() as u32).filter(|&c| c != b).any(|c| {
                let mut pairs = fixed.clone();
                pairs.push((b, c));
                self.searcher.find_extension(&pairs).is_some()
            });
            if !moved {
                out.push(b);
            }
        }
        out
    }

    /// All closed sets, sorted by size then contents.
    pub fn lattice(&self) -> &Vec<Vec<u32>> {
        self.lattice.get_or_init(|| {
            let bottom = self.fixed_closure(&[]);
            let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([bottom.clone()]);
            let mut frontier = vec![bottom];
            while let Some(k) = frontier.pop() {
                for x in 0..self.size() as u32 {
                    if k.contains(&x) {
                        continue;
                    }
                    let mut gen = k.clone();
                    gen.push(x);
                    let c = self.fixed_closure(&gen);
                    if seen.insert(c.clone()) {
                        frontier.push(c);
                    }
                }
            }
            let mut v: Vec<Vec<u32>> = seen.into_iter().collect();
            v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            v
        })
    }

    /// Longest strict chain of closed sets from the bottom up to `k`.
    pub fn depth_of(&self, k: &[u32]) -> usize {
        let lattice = self.lattice();
        let below: Vec<&Vec<u32>> = lattice.iter().filter(|c| c.iter().all(|x| k.contains(x))).collect();
        // sizes strictly increase along chains, so process in size order
        let mut best: HashMap<&Vec<u32>, usize> = HashMap::new();
        for (i, c) in below.iter().enumerate() {
            let d = below[..i]
                .iter()
                .filter(|s| s.len() < c.len() && s.iter().all(|x| c.contains(x)))
                .map(|s| best[*s] + 1)
                .max()
                .unwrap_or(0);
            best.insert(c, d);
        }
        best.get(&k.to_vec()).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    Vector { q: u8 },
    PureSet,
    Finite(Arc<FiniteBackend>),
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl Backend {
    pub fn vector(q: u8) -> Result<Self> {
        Gf::get(q)?;
        Ok(Backend::Vector { q })
    }

    pub fn finite(s: FiniteStructure) -> Result<Self> {
        Ok(Backend::Finite(Arc::new(FiniteBackend::new(s)?)))
    }

    pub fn id(&self) -> String {
        match self {
            Backend::Vector { q } => format!("vector-gf{q}"),
            Backend::PureSet => "pure-set".into(),
            Backend::Finite(fb) => format!("finite-{}", fb.size()),
        }
    }

    pub fn capabilities(&self) -> Capabilities {
        match self {
            Backend::Vector { q } => Capabilities {
                has_infinite_domain: true,
                closure_kind: ClosureKind::Span,
                supports_rank: true,
                field_order: Some(*q),
            },
            Backend::PureSet => Capabilities {
                has_infinite_domain: true,
                closure_kind: ClosureKind::Trivial,
                supports_rank: true,
                field_order: None,
            },
            Backend::Finite(_) => Capabilities {
                has_infinite_domain: false,
                closure_kind: ClosureKind::FixedPoint,
                supports_rank: true,
                field_order: None,
            },
        }
    }

    pub fn q(&self) -> Option<u8> {
        match self {
            Backend::Vector { q } => Some(*q),
            _ => None,
        }
    }

    pub fn finite_backend(&self) -> Option<&FiniteBackend> {
        match self {
            Backend::Finite(fb) => Some(fb),
            _ => None,
        }
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        let ok = match (self, x) {
            (Backend::Vector { q }, Element::Vector(v)) => v.q() == *q,
            (Backend::PureSet, Element::Atom(_)) => true,
            (Backend::Finite(fb), Element::Point(i)) => (*i as usize) < fb.size(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BackendMismatch { expected: self.id(), found: x.to_string() })
        }
    }

    pub fn check_all<'a>(&self, xs: impl IntoIterator<Item = &'a Element>) -> Result<()> {
        xs.into_iter().try_for_each(|x| self.check(x))
    }

    pub fn element_from_json(&self, v: &Value) -> Result<Element> {
        let x = match self {
            Backend::Vector { .. } => Element::Vector(vector_from_json(v)?),
            Backend::PureSet => Element::Atom(v.as_u64().ok_or_else(|| Error::Invalid(format!("bad atom {v}")))? as u32),
            Backend::Finite(_) => Element::Point(v.as_u64().ok_or_else(|| Error::Invalid(format!("bad point {v}")))? as u32),
        };
        self.check(&x)?;
        Ok(x)
    }

    /// The generator pool of a window of the given size, canonically ordered.
    pub fn window_elements(&self, size: usize) -> Vec<Element> {
        match self {
            Backend::Vector { q } => window_vectors(*q, size).into_iter().map(Element::Vector).collect(),
            Backend::PureSet => (0..size as u32).map(Element::Atom).collect(),
            Backend::Finite(fb) => (0..fb.size() as u32).map(Element::Point).collect(),
        }
    }

    fn vectors(xs: &[Element]) -> Vec<SparseVec> {
        xs.iter().filter_map(|x| x.as_vector().cloned()).collect()
    }

    fn indices(xs: &[Element]) -> Vec<u32> {
        let mut v: Vec<u32> = xs.iter().filter_map(Element::index).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Closure of a finite set: span, the set itself, or the fixed points
    /// of its pointwise stabilizer.
    pub fn acl(&self, a: &[Element]) -> Result<ClosedSet> {
        self.check_all(a)?;
        let mut generators = a.to_vec();
        generators.sort();
        generators.dedup();
        Ok(match self {
            Backend::Vector { q } => {
                let span = Span::of(*q, &Self::vectors(a));
                let elements = span.elements().into_iter().map(Element::Vector).collect();
                let d = span.dim();
                ClosedSet { generators, elements, rank: d, depth: if d == 0 { Depth::Bottom } else { Depth::Level(d) } }
            }
            Backend::PureSet => {
                let n = generators.len();
                ClosedSet {
                    elements: generators.clone(),
                    generators,
                    rank: n,
                    depth: if n == 0 { Depth::Bottom } else { Depth::Level(n) },
                }
            }
            Backend::Finite(fb) => {
                let pts = fb.fixed_closure(&Self::indices(a));
                let d = fb.depth_of(&pts);
                ClosedSet {
                    generators,
                    elements: pts.iter().map(|&i| Element::Point(i)).collect(),
                    rank: pts.len(),
                    depth: if d == 0 { Depth::Bottom } else { Depth::Level(d) },
                }
            }
        })
    }

    /// Rank of a finite set: dimension of its span, or size of its closure.
    pub fn rank(&self, a: &[Element]) -> Result<usize> {
        Ok(match self {
            Backend::Vector { q } => Span::of(*q, &Self::vectors(a)).dim(),
            _ => self.acl(a)?.rank,
        })
    }

    /// A small generating set of a closed set: echelon basis for spans.
    pub fn basis(&self, k: &ClosedSet) -> Vec<Element> {
        match self {
            Backend::Vector { q } => Span::of(*q, &Self::vectors(&k.elements)).basis().into_iter().map(Element::Vector).collect(),
            _ => k.elements.clone(),
        }
    }

    pub fn bottom(&self) -> ClosedSet {
        self.acl(&[]).expect("empty set is valid")
    }

    /// Every closed set generated inside a window.
    pub fn closed_sets(&self, size: usize) -> Vec<ClosedSet> {
        let mut out: Vec<ClosedSet> = match self {
            Backend::Vector { q } => {
                let whole = Span::of(*q, &window_vectors(*q, size));
                whole
                    .subspaces()
                    .into_iter()
                    .map(|s| self.acl(&s.basis().into_iter().map(Element::Vector).collect::<Vec<_>>()).unwrap())
                    .collect()
            }
            Backend::PureSet => (0u64..1 << size)
                .map(|mask| {
                    let a: Vec<Element> = (0..size as u32).filter(|i| mask >> i & 1 == 1).map(Element::Atom).collect();
                    self.acl(&a).unwrap()
                })
                .collect(),
            Backend::Finite(fb) => fb
                .lattice()
                .iter()
                .map(|k| self.acl(&k.iter().map(|&i| Element::Point(i)).collect::<Vec<_>>()).unwrap())
                .collect(),
        };
        out.sort();
        out
    }

    /// Whether the partial map extends to an automorphism of the structure.
    pub fn extendable(&self, p: &PartialMap) -> bool {
        if self.check_all(p.domain()).is_err() || self.check_all(p.image()).is_err() {
            return false;
        }
        match self {
            Backend::Vector { q } => {
                // well defined and injective on the span iff the graph has
                // the same rank as both its domain and its image
                let pairs: Vec<(&SparseVec, &SparseVec)> =
                    p.iter().map(|(a, b)| (a.as_vector().unwrap(), b.as_vector().unwrap())).collect();
                let shift = pairs.iter().map(|(a, _)| a.extent()).max().unwrap_or(0) as u32;
                let graph: Vec<SparseVec> = pairs
                    .iter()
                    .map(|(a, b)| {
                        let mut v: Vec<(u32, u8)> = a.coords().iter().map(|(&i, &c)| (i, c)).collect();
                        v.extend(b.coords().iter().map(|(&i, &c)| (i + shift, c)));
                        SparseVec::from_pairs(*q, v).unwrap()
                    })
                    .collect();
                let dom: Vec<SparseVec> = pairs.iter().map(|(a, _)| (*a).clone()).collect();
                let img: Vec<SparseVec> = pairs.iter().map(|(_, b)| (*b).clone()).collect();
                let r = crate::vector::rank(*q, &graph);
                r == crate::vector::rank(*q, &dom) && r == crate::vector::rank(*q, &img)
            }
            Backend::PureSet => true,
            Backend::Finite(fb) => {
                let pairs: Vec<(u32, u32)> = p.iter().map(|(a, b)| (a.index().unwrap(), b.index().unwrap())).collect();
                fb.searcher().find_extension(&pairs).is_some()
            }
        }
    }

    /// Extends `p` to `a` by the first legal image in canonical order,
    /// trying `a` itself before anything else.
    pub fn extend_step(&self, p: &PartialMap, a: &Element) -> Result<PartialMap> {
        self.check(a)?;
        if !self.extendable(p) {
            return Err(Error::Precondition("map does not extend to an automorphism".into()));
        }
        if p.get(a).is_some() {
            return Err(Error::Precondition(format!("{a} already in the domain")));
        }
        let candidates: Vec<Element> = match self {
            Backend::Vector { q } => {
                let n = p.domain().chain(p.image()).chain([a]).filter_map(|x| x.as_vector()).map(|v| v.extent()).max().unwrap_or(0) + 1;
                window_vectors(*q, n).into_iter().map(Element::Vector).collect()
            }
            Backend::PureSet => {
                let n = p.domain().chain(p.image()).chain([a]).filter_map(Element::index).max().unwrap_or(0) + 2;
                (0..n).map(Element::Atom).collect()
            }
            Backend::Finite(fb) => (0..fb.size() as u32).map(Element::Point).collect(),
        };
        for c in std::iter::once(a.clone()).chain(candidates) {
            let mut q = p.clone();
            if q.insert(a.clone(), c).is_ok() && self.extendable(&q) {
                return Ok(q);
            }
        }
        Err(Error::Precondition("no legal image found".into()))
    }

    /// Identity on a generating set of `base`, as a partial map.
    fn fix_map(&self, base: &ClosedSet) -> PartialMap {
        PartialMap::identity(&self.basis(base))
    }

    /// Orbit of `a` under the pointwise stabilizer of `base`, computed inside
    /// windows of size `window` and `window + 1`.
    pub fn orbit(&self, a: &Element, base: &ClosedSet, window: usize) -> Result<Orbit> {
        self.check(a)?;
        if base.contains(a) {
            return Ok(Orbit::Finite(vec![a.clone()]));
        }
        let inside = |n: usize| -> Vec<Element> {
            self.window_elements(n)
                .into_iter()
                .filter(|v| {
                    let mut p = self.fix_map(base);
                    p.insert(a.clone(), v.clone()).is_ok() && self.extendable(&p)
                })
                .collect()
        };
        match self {
            Backend::Vector { .. } | Backend::PureSet => {
                let extent = |x: &Element| match x {
                    Element::Vector(v) => v.extent(),
                    Element::Atom(i) => *i as usize + 1,
                    Element::Point(_) => 0,
                };
                let needed = (base.rank + 2).max(base.generators.iter().chain([a]).map(extent).max().unwrap_or(0));
                if window < needed {
                    return Err(Error::InsufficientWindow { window, needed });
                }
                let small = inside(window);
                let large = inside(window + 1);
                Ok(if large.len() > small.len() { Orbit::Unbounded } else { Orbit::Finite(small) })
            }
            Backend::Finite(_) => Ok(Orbit::Finite(inside(0))),
        }
    }

    /// Whether some automorphism fixing `base` pointwise maps `s` to `t`.
    pub fn same_type(&self, s: &[Element], t: &[Element], base: &ClosedSet) -> Result<bool> {
        if s.len() != t.len() {
            return Err(Error::Arity(s.len(), t.len()));
        }
        self.check_all(s.iter().chain(t))?;
        let mut p = self.fix_map(base);
        for (a, b) in s.iter().zip(t) {
            if p.insert(a.clone(), b.clone()).is_err() {
                return Ok(false);
            }
        }
        Ok(self.extendable(&p))
    }

    /// Generators of the group of bijections of `k` that extend to
    /// automorphisms of the structure.
    pub fn aut_m_of(&self, k: &ClosedSet) -> Result<Vec<PartialMap>> {
        match self {
            Backend::Vector { q } => {
                let f = Gf::get(*q)?;
                let basis: Vec<SparseVec> = Self::vectors(&self.basis(k));
                let d = basis.len();
                let mut gens = Vec::new();
                let mut push = |images: Vec<SparseVec>| gens.push(span_map(*q, &basis, &images));
                if d >= 1 && *q > 2 {
                    let mut im = basis.clone();
                    im[0] = basis[0].scale(f.primitive());
                    push(im);
                }
                if d >= 2 {
                    let mut im = basis.clone();
                    im[0] = basis[0].add(&basis[1]);
                    push(im);
                    let mut im = basis.clone();
                    im.swap(0, 1);
                    push(im);
                }
                if d >= 3 {
                    let im: Vec<SparseVec> = (0..d).map(|i| basis[(i + 1) % d].clone()).collect();
                    push(im);
                }
                Ok(gens)
            }
            Backend::PureSet => {
                let xs = &k.elements;
                let mut gens = Vec::new();
                if xs.len() >= 2 {
                    let mut t: Vec<Element> = xs.clone();
                    t.swap(0, 1);
                    gens.push(PartialMap::from_pairs(xs.iter().cloned().zip(t)).unwrap());
                }
                if xs.len() >= 3 {
                    let c: Vec<Element> = (0..xs.len()).map(|i| xs[(i + 1) % xs.len()].clone()).collect();
                    gens.push(PartialMap::from_pairs(xs.iter().cloned().zip(c)).unwrap());
                }
                Ok(gens)
            }
            Backend::Finite(fb) => {
                let pts: Vec<u32> = Self::indices(&k.elements);
                let mut restrictions: BTreeSet<Perm> = BTreeSet::new();
                let mut assign: Vec<u32> = Vec::new();
                collect_restrictions(fb, &pts, &mut assign, &mut restrictions);
                let group = PermGroup::from_elements(pts.len(), restrictions.into_iter().collect());
                Ok(group.generators().iter().map(|p| k.map_of(p)).collect())
            }
        }
    }

    /// Group generated by `aut_m_of(k)` as permutations of k's indices.
    pub fn aut_m_group(&self, k: &ClosedSet, cap: usize) -> Result<PermGroup> {
        let gens: Vec<Perm> = self.aut_m_of(k)?.iter().map(|g| k.perm_of(g)).collect::<Result<_>>()?;
        PermGroup::generated(k.len(), &gens, cap)
    }

    /// Every automorphism of the window that maps the window onto itself,
    /// as finitely supported automorphisms (vector: GL of the window).
    pub fn window_automorphisms(&self, size: usize) -> Result<Vec<Automorphism>> {
        Ok(match self {
            Backend::Vector { q } => {
                crate::vector::general_linear(*q, size).into_iter().map(|m| Automorphism::Vector(Semilinear::linear(m))).collect()
            }
            Backend::PureSet => {
                let gens: Vec<Perm> = if size >= 2 {
                    let mut t: Vec<u32> = (0..size as u32).collect();
                    t.swap(0, 1);
                    vec![Perm(t), Perm((0..size as u32).map(|i| (i + 1) % size as u32).collect())]
                } else {
                    vec![]
                };
                closure(size, &gens, ELEMENT_CAP)?.into_iter().map(|p| atoms_from_perm(&p)).collect()
            }
            Backend::Finite(fb) => fb.group()?.elements.iter().cloned().map(Automorphism::Points).collect(),
        })
    }

    pub fn identity_automorphism(&self) -> Automorphism {
        match self {
            Backend::Vector { q } => Automorphism::Vector(Semilinear::identity(*q, 0)),
            Backend::PureSet => Automorphism::Atoms(BTreeMap::new()),
            Backend::Finite(fb) => Automorphism::Points(Perm::identity(fb.size())),
        }
    }

    /// Image of a closed set under an automorphism, as a closed set.
    pub fn image(&self, g: &Automorphism, k: &ClosedSet) -> Result<ClosedSet> {
        let gens: Vec<Element> = k.generators.iter().map(|x| g.apply(x)).collect();
        let img = self.acl(&gens)?;
        debug_assert_eq!(img.elements, g.apply_all(&k.elements));
        Ok(img)
    }
}

pub fn atoms_from_perm(p: &Perm) -> Automorphism {
    Automorphism::Atoms(p.0.iter().enumerate().filter(|(i, &j)| *i as u32 != j).map(|(i, &j)| (i as u32, j)).collect())
}

/// The linear map sending basis[i] to images[i], on every element of the span.
pub fn span_map(q: u8, basis: &[SparseVec], images: &[SparseVec]) -> PartialMap {
    let mut pairs = vec![(SparseVec::zero(q), SparseVec::zero(q))];
    for (b, im) in basis.iter().zip(images) {
        let mut next = Vec::with_capacity(pairs.len() * q as usize);
        for (x, y) in &pairs {
            for c in 0..q {
                next.push((x.axpy(c, b), y.axpy(c, im)));
            }
        }
        pairs = next;
    }
    PartialMap::from_pairs(pairs.into_iter().map(|(x, y)| (Element::Vector(x), Element::Vector(y)))).expect("images independent")
}

fn collect_restrictions(fb: &FiniteBackend, pts: &[u32], assign: &mut Vec<u32>, out: &mut BTreeSet<Perm>) {
    let i = assign.len();
    if i == pts.len() {
        out.insert(Perm(assign.iter().map(|img| pts.binary_search(img).unwrap() as u32).collect()));
        return;
    }
    for &y in pts {
        if assign.contains(&y) {
            continue;
        }
        assign.push(y);
        let pairs: Vec<(u32, u32)> = pts.iter().zip(assign.iter()).map(|(&a, &b)| (a, b)).collect();
        if fb.searcher().find_extension(&pairs).is_some() {
            collect_restrictions(fb, pts, assign, out);
        }
        assign.pop();
    }
}

/// Dense matrix of a linear automorphism from images of e_0..e_{n-1}.
pub fn matrix_from_images(q: u8, n: usize, images: &[SparseVec]) -> Matrix {
    Matrix::from_columns(q, n, images)
}
