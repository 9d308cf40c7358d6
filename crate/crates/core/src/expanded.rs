//! Finite windows of the expanded structure on triples (K, p, K'), its
//! predicates, isomorphism checking between windows, and the orbital
//! structure of acl-trivial backends.

use std::collections::HashMap;

use rand::Rng as _;
use serde::Serialize;
use serde_json::{json, Value};

use crate::backend::{span_map, Backend, ClosedSet};
use crate::element::{Element, PartialMap};
use crate::error::{Error, Result};
use crate::sample::rng;
use crate::stabilizer::SUBGROUP_CAP;

pub const DEFAULT_TRIPLE_CAP: usize = 100_000;
/// Pair and closure-predicate checks beyond this count are sampled.
const EXHAUSTIVE_PAIRS: usize = 4096;

/// p: dom -> cod, a bijection between closed sets that extends to an
/// automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub dom: ClosedSet,
    pub cod: ClosedSet,
    pub map: PartialMap,
}

impl Triple {
    pub fn identity(k: &ClosedSet) -> Self {
        Triple { dom: k.clone(), cod: k.clone(), map: PartialMap::identity(&k.elements) }
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.map.is_identity()
    }

    pub fn inverse(&self) -> Triple {
        Triple { dom: self.cod.clone(), cod: self.dom.clone(), map: self.map.inverse() }
    }

    /// `other` after `self`, when self's codomain is other's domain.
    pub fn then(&self, other: &Triple) -> Option<Triple> {
        (self.cod == other.dom).then(|| Triple { dom: self.dom.clone(), cod: other.cod.clone(), map: self.map.then(&other.map) })
    }

    pub fn to_json(&self) -> Value {
        json!({"dom": self.dom.generators, "cod": self.cod.generators, "map": self.map.to_json()})
    }
}

#[derive(Clone, Debug)]
pub struct ExpandedWindow {
    pub backend: Backend,
    pub k: usize,
    pub size: usize,
    /// The bottom element acl(∅), kept apart from the depth count.
    pub bottom: ClosedSet,
    pub closed_sets: Vec<ClosedSet>,
    /// Sorted by (dom, cod, map).
    pub triples: Vec<Triple>,
    index: HashMap<Triple, usize>,
}

/// Every bijection K -> K' that extends to an automorphism.
pub fn extendable_bijections(backend: &Backend, k: &ClosedSet, k2: &ClosedSet) -> Result<Vec<PartialMap>> {
    if k.len() != k2.len() || k.rank != k2.rank {
        return Ok(Vec::new());
    }
    let base = match backend {
        Backend::Vector { q } => {
            let vs = |s: &ClosedSet| -> Vec<_> { backend.basis(s).iter().filter_map(|x| x.as_vector().cloned()).collect() };
            span_map(*q, &vs(k), &vs(k2))
        }
        Backend::PureSet => PartialMap::from_pairs(k.elements.iter().cloned().zip(k2.elements.iter().cloned()))?,
        Backend::Finite(fb) => {
            let pts: Vec<u32> = k.elements.iter().filter_map(Element::index).collect();
            let target: Vec<u32> = k2.elements.iter().filter_map(Element::index).collect();
            let mut out: Vec<PartialMap> = fb
                .group()?
                .elements
                .iter()
                .filter(|g| g.image(&pts) == target)
                .map(|g| PartialMap::from_pairs(pts.iter().map(|&x| (Element::Point(x), Element::Point(g.apply(x))))).unwrap())
                .collect();
            out.sort();
            out.dedup();
            return Ok(out);
        }
    };
    let auts = backend.aut_m_group(k, SUBGROUP_CAP)?;
    let mut out: Vec<PartialMap> = auts.elements.iter().map(|a| k.map_of(a).then(&base)).collect();
    out.sort();
    Ok(out)
}

impl ExpandedWindow {
    /// Closed sets of depth 1..=k generated inside the window, and every
    /// extendable bijection between them.
    pub fn build(backend: &Backend, k: usize, size: usize, cap: usize) -> Result<Self> {
        let bottom = backend.bottom();
        let closed_sets: Vec<ClosedSet> =
            backend.closed_sets(size).into_iter().filter(|c| !c.is_bottom() && c.depth.level() <= k).collect();
        let mut triples = Vec::new();
        for a in &closed_sets {
            for b in &closed_sets {
                for map in extendable_bijections(backend, a, b)? {
                    triples.push(Triple { dom: a.clone(), cod: b.clone(), map });
                    if triples.len() > cap {
                        return Err(Error::SizeBound { what: "triple count".into(), size: triples.len() as u64, bound: cap as u64 });
                    }
                }
            }
        }
        Ok(Self::from_parts(backend, k, size, bottom, closed_sets, triples))
    }

    pub fn from_parts(backend: &Backend, k: usize, size: usize, bottom: ClosedSet, closed_sets: Vec<ClosedSet>, mut triples: Vec<Triple>) -> Self {
        triples.sort();
        triples.dedup();
        let index = triples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        ExpandedWindow { backend: backend.clone(), k, size, bottom, closed_sets, triples, index }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn index_of(&self, t: &Triple) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn identity_index(&self, k: &ClosedSet) -> Option<usize> {
        self.index_of(&Triple::identity(k))
    }

    pub fn identity_triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter().filter(|t| t.is_identity())
    }

    pub fn contains_set(&self, k: &ClosedSet) -> bool {
        self.closed_sets.binary_search(k).is_ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "size": self.size,
            "bottom": self.bottom.generators,
            "closed_sets": self.closed_sets.iter().map(|c| json!(c.generators)).collect::<Vec<_>>(),
            "triples": self.triples.iter().map(Triple::to_json).collect::<Vec<_>>(),
        })
    }
}

/// One automorphism jointly extending every listed map.
pub fn eval_en(w: &ExpandedWindow, ts: &[&Triple]) -> bool {
    let mut u = PartialMap::new();
    for t in ts {
        match u.union(&t.map) {
            Some(m) => u = m,
            None => return false,
        }
    }
    w.backend.extendable(&u)
}

pub fn eval_dom(t: &Triple, c: &ClosedSet) -> bool {
    t.dom == *c
}

pub fn eval_cod(t: &Triple, c: &ClosedSet) -> bool {
    t.cod == *c
}

/// A inside the closure of the union of the Bs.
pub fn eval_pn(w: &ExpandedWindow, a: &ClosedSet, bs: &[&ClosedSet]) -> Result<bool> {
    let gens: Vec<Element> = bs.iter().flat_map(|b| b.generators.iter().cloned()).collect();
    Ok(a.is_subset(&w.backend.acl(&gens)?))
}

/// t3 = t2 after t1.
pub fn eval_compose(t1: &Triple, t2: &Triple, t3: &Triple) -> bool {
    t1.cod == t2.dom && t1.dom == t3.dom && t2.cod == t3.cod && t3.map == t1.map.then(&t2.map)
}

/// t2 = t1^-1, so both composites are identity triples.
pub fn eval_inverse(t1: &Triple, t2: &Triple) -> bool {
    t2.dom == t1.cod && t2.cod == t1.dom && t2.map == t1.map.inverse() && t1.then(t2).is_some_and(|c| c.is_identity())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrityReport {
    pub closed_sets: usize,
    pub triples: usize,
    pub identity_triples: bool,
    pub inverse_closed: bool,
    pub singly_realized: bool,
    pub chains_checked: usize,
    pub associative: bool,
    pub composition_closed: bool,
}

impl IntegrityReport {
    pub fn ok(&self) -> bool {
        self.identity_triples && self.inverse_closed && self.singly_realized && self.associative && self.composition_closed
    }
}

/// Identity triples, inverse closure, E_1 on every triple, and groupoid
/// associativity on every chain t1, t2, t3.
pub fn integrity(w: &ExpandedWindow) -> IntegrityReport {
    let identity_triples = w.closed_sets.iter().all(|c| w.identity_index(c).is_some());
    let inverse_closed = w.triples.iter().all(|t| w.index_of(&t.inverse()).is_some_and(|j| eval_inverse(t, &w.triples[j])));
    let singly_realized = w.triples.iter().all(|t| eval_en(w, &[t]));
    let mut by_dom: HashMap<&ClosedSet, Vec<usize>> = HashMap::new();
    for (i, t) in w.triples.iter().enumerate() {
        by_dom.entry(&t.dom).or_default().push(i);
    }
    let mut chains = 0;
    let mut associative = true;
    let mut composition_closed = true;
    'outer: for t1 in &w.triples {
        for &j in by_dom.get(&t1.cod).into_iter().flatten() {
            let t2 = &w.triples[j];
            let t12 = t1.then(t2).unwrap();
            if w.index_of(&t12).is_none() {
                composition_closed = false;
                break 'outer;
            }
            for &l in by_dom.get(&t2.cod).into_iter().flatten() {
                let t3 = &w.triples[l];
                chains += 1;
                let left = t12.then(t3).unwrap();
                let right = t1.then(&t2.then(t3).unwrap()).unwrap();
                if left != right {
                    associative = false;
                    break 'outer;
                }
            }
        }
    }
    IntegrityReport {
        closed_sets: w.closed_sets.len(),
        triples: w.len(),
        identity_triples,
        inverse_closed,
        singly_realized,
        chains_checked: chains,
        associative,
        composition_closed,
    }
}

/// A total map from the triples of one window to those of another, by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WindowMap {
    pub images: Vec<usize>,
}

impl WindowMap {
    pub fn identity(w: &ExpandedWindow) -> Self {
        WindowMap { images: (0..w.len()).collect() }
    }

    /// Tabulates `f`; an image outside `dst` is a window overflow.
    pub fn from_fn(src: &ExpandedWindow, dst: &ExpandedWindow, f: impl Fn(&Triple) -> Result<Triple>) -> Result<Self> {
        let mut images = Vec::with_capacity(src.len());
        for t in &src.triples {
            let img = f(t)?;
            let j = dst.index_of(&img).ok_or_else(|| {
                Error::WindowOverflow(format!("image {} of {} is outside the window", img.to_json(), t.to_json()))
            })?;
            images.push(j);
        }
        Ok(WindowMap { images })
    }

    pub fn apply<'a>(&self, src: &ExpandedWindow, dst: &'a ExpandedWindow, t: &Triple) -> Option<&'a Triple> {
        src.index_of(t).map(|i| &dst.triples[self.images[i]])
    }

    /// self after other.
    pub fn after(&self, other: &WindowMap) -> WindowMap {
        WindowMap { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Option<WindowMap> {
        let mut inv = vec![usize::MAX; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            if j >= inv.len() || inv[j] != usize::MAX {
                return None;
            }
            inv[j] = i;
        }
        Some(WindowMap { images: inv })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The closed-set map induced through identity triples.
    pub fn on_sets(&self, src: &ExpandedWindow, dst: &ExpandedWindow, k: &ClosedSet) -> Option<ClosedSet> {
        let i = src.identity_index(k)?;
        let t = &dst.triples[self.images[i]];
        t.is_identity().then(|| t.dom.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoVerdict {
    pub holds: bool,
    pub violated: Option<String>,
    pub instance: Option<Value>,
}

impl IsoVerdict {
    fn pass() -> Self {
        IsoVerdict { holds: true, violated: None, instance: None }
    }

    fn fail(predicate: &str, instance: Value) -> Self {
        IsoVerdict { holds: false, violated: Some(predicate.to_string()), instance: Some(instance) }
    }
}

/// One direction of the predicate-preservation checks.
fn preserves(w1: &ExpandedWindow, w2: &ExpandedWindow, f: &WindowMap, seed: u64) -> Result<IsoVerdict> {
    let img = |i: usize| &w2.triples[f.images[i]];
    for (i, t) in w1.triples.iter().enumerate() {
        if t.is_identity() != img(i).is_identity() {
            return Ok(IsoVerdict::fail("identity", t.to_json()));
        }
    }
    // closed sets travel through their identity triples
    let mut set_image: HashMap<&ClosedSet, &ClosedSet> = HashMap::new();
    for c in &w1.closed_sets {
        let i = w1.identity_index(c).ok_or_else(|| Error::Invalid("window lacks an identity triple".into()))?;
        set_image.insert(c, &img(i).dom);
    }
    for (i, t) in w1.triples.iter().enumerate() {
        let s = img(i);
        for c in &w1.closed_sets {
            if eval_dom(t, c) != eval_dom(s, set_image[c]) {
                return Ok(IsoVerdict::fail("dom", json!({"triple": t.to_json(), "set": c.generators})));
            }
            if eval_cod(t, c) != eval_cod(s, set_image[c]) {
                return Ok(IsoVerdict::fail("cod", json!({"triple": t.to_json(), "set": c.generators})));
            }
        }
    }
    for (i, t) in w1.triples.iter().enumerate() {
        let inv = w1.index_of(&t.inverse()).ok_or_else(|| Error::Invalid("window is not inverse closed".into()))?;
        if !eval_inverse(img(i), img(inv)) {
            return Ok(IsoVerdict::fail("inverse", t.to_json()));
        }
    }
    let mut by_dom: HashMap<&ClosedSet, Vec<usize>> = HashMap::new();
    for (i, t) in w1.triples.iter().enumerate() {
        by_dom.entry(&t.dom).or_default().push(i);
    }
    for (i, t1) in w1.triples.iter().enumerate() {
        for &j in by_dom.get(&t1.cod).into_iter().flatten() {
            let t3 = t1.then(&w1.triples[j]).unwrap();
            let Some(l) = w1.index_of(&t3) else { continue };
            if !eval_compose(img(i), img(j), img(l)) {
                return Ok(IsoVerdict::fail("compose", json!([t1.to_json(), w1.triples[j].to_json()])));
            }
        }
    }
    let n = w1.len();
    let mut r = rng(seed);
    let pairs: Vec<(usize, usize)> = if n * n <= EXHAUSTIVE_PAIRS {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    } else {
        (0..EXHAUSTIVE_PAIRS).map(|_| (r.gen_range(0..n), r.gen_range(0..n))).collect()
    };
    for (i, j) in pairs {
        let (a, b) = (&w1.triples[i], &w1.triples[j]);
        if eval_en(w1, &[a, b]) != eval_en(w2, &[img(i), img(j)]) {
            return Ok(IsoVerdict::fail("E2", json!([a.to_json(), b.to_json()])));
        }
    }
    let sets = &w1.closed_sets;
    let m = sets.len();
    let trios: Vec<(usize, usize, usize)> = if m * m * m <= EXHAUSTIVE_PAIRS {
        (0..m).flat_map(|a| (0..m).flat_map(move |b| (0..m).map(move |c| (a, b, c)))).collect()
    } else {
        (0..EXHAUSTIVE_PAIRS).map(|_| (r.gen_range(0..m), r.gen_range(0..m), r.gen_range(0..m))).collect()
    };
    for (a, b, c) in trios {
        let (sa, sb, sc) = (&sets[a], &sets[b], &sets[c]);
        if eval_pn(w1, sa, &[sb])? != eval_pn(w2, set_image[sa], &[set_image[sb]])? {
            return Ok(IsoVerdict::fail("P1", json!([sa.generators, sb.generators])));
        }
        if eval_pn(w1, sa, &[sb, sc])? != eval_pn(w2, set_image[sa], &[set_image[sb], set_image[sc]])? {
            return Ok(IsoVerdict::fail("P2", json!([sa.generators, sb.generators, sc.generators])));
        }
    }
    Ok(IsoVerdict::pass())
}

/// f is a bijection preserving identity, Dom, Cod, inverse and compose
/// exhaustively, and E_2, P_1, P_2 exhaustively on small windows and by
/// seeded sampling above; checked in both directions.
pub fn iso_check(w1: &ExpandedWindow, w2: &ExpandedWindow, f: &WindowMap) -> Result<IsoVerdict> {
    if f.images.len() != w1.len() || w1.len() != w2.len() {
        return Ok(IsoVerdict::fail("bijection", json!({"domain": w1.len(), "codomain": w2.len()})));
    }
    let Some(inv) = f.inverse() else {
        return Ok(IsoVerdict::fail("bijection", json!({"images": f.images})));
    };
    let forward = preserves(w1, w2, f, 0)?;
    if !forward.holds {
        return Ok(forward);
    }
    preserves(w2, w1, &inv, 1)
}

/// Orbit classes of n-tuples over the window for n = 1..=max_arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitalStructure {
    pub domain: Vec<Element>,
    /// relations[n-1] lists the classes of n-tuples.
    pub relations: Vec<Vec<Vec<Vec<Element>>>>,
}

impl OrbitalStructure {
    pub fn class_counts(&self) -> Vec<usize> {
        self.relations.iter().map(Vec::len).collect()
    }
}

pub fn orbital_structure(backend: &Backend, window: usize, max_arity: usize) -> Result<OrbitalStructure> {
    let domain = backend.window_elements(window);
    if !backend.bottom().is_empty() {
        return Err(Error::Inapplicable("acl(∅) is not empty".into()));
    }
    for a in &domain {
        if backend.acl(std::slice::from_ref(a))?.elements != vec![a.clone()] {
            return Err(Error::Inapplicable(format!("acl({a}) is larger than the element itself")));
        }
    }
    let bottom = backend.bottom();
    let mut relations = Vec::new();
    let mut tuples: Vec<Vec<Element>> = vec![vec![]];
    for _ in 0..max_arity {
        tuples = tuples.iter().flat_map(|t| domain.iter().map(move |x| [t.clone(), vec![x.clone()]].concat())).collect();
        let mut classes: Vec<Vec<Vec<Element>>> = Vec::new();
        for t in &tuples {
            let mut placed = false;
            for class in classes.iter_mut() {
                if backend.same_type(&class[0], t, &bottom)? {
                    class.push(t.clone());
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![t.clone()]);
            }
        }
        relations.push(classes);
    }
    Ok(OrbitalStructure { domain, relations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteStructure;
    use crate::vector::SparseVec;

    fn e(q: u8, i: u32) -> Element {
        Element::Vector(SparseVec::basis(q, i))
    }

    #[test]
    fn gf2_line_window_counts() {
        let w = ExpandedWindow::build(&Backend::vector(2).unwrap(), 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
        assert_eq!(w.closed_sets.len(), 3);
        assert_eq!(w.identity_triples().count(), 3);
        assert_eq!(w.len(), 9);
        assert!(w.bottom.is_bottom());
    }

    /// Oracle: (3^2 - 1)/(3 - 1) = 4 lines, |GL(1,3)| = 2 maps per pair.
    #[test]
    fn gf3_line_window_counts() {
        let b = Backend::vector(3).unwrap();
        let w = ExpandedWindow::build(&b, 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
        assert_eq!(w.closed_sets.len(), 4);
        for c in &w.closed_sets {
            assert_eq!(w.triples.iter().filter(|t| t.dom == *c && t.cod == *c).count(), 2);
        }
        assert_eq!(w.len(), 32);
        assert!(integrity(&w).ok());
    }

    #[test]
    fn pure_set_window_counts() {
        let w = ExpandedWindow::build(&Backend::PureSet, 1, 3, DEFAULT_TRIPLE_CAP).unwrap();
        assert_eq!(w.closed_sets.len(), 3);
        assert_eq!(w.len(), 9);
    }

    #[test]
    fn joint_extension_examples() {
        let b = Backend::vector(2).unwrap();
        let w = ExpandedWindow::build(&b, 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
        let l0 = b.acl(&[e(2, 0)]).unwrap();
        let l1 = b.acl(&[e(2, 1)]).unwrap();
        let zero = Element::Vector(SparseVec::zero(2));
        let t = |a: &ClosedSet, c: &ClosedSet, x: Element, y: Element| Triple {
            dom: a.clone(),
            cod: c.clone(),
            map: PartialMap::from_pairs([(zero.clone(), zero.clone()), (x, y)]).unwrap(),
        };
        let p01 = t(&l0, &l1, e(2, 0), e(2, 1));
        let p00 = Triple::identity(&l0);
        let p10 = t(&l1, &l0, e(2, 1), e(2, 0));
        assert!(eval_en(&w, &[&p00]));
        assert!(!eval_en(&w, &[&p01, &p00]));
        assert!(eval_en(&w, &[&p01, &p10]));
        assert!(eval_dom(&p01, &l0) && !eval_cod(&p01, &l0) && eval_cod(&p01, &l1));
        assert!(eval_inverse(&p01, &p10));
        assert!(eval_compose(&p00, &p00, &p00));
        assert!(!eval_compose(&p01, &p01, &p00));
    }

    #[test]
    fn closure_predicate_examples() {
        let b = Backend::vector(2).unwrap();
        let w = ExpandedWindow::build(&b, 1, 3, DEFAULT_TRIPLE_CAP).unwrap();
        let l0 = b.acl(&[e(2, 0)]).unwrap();
        let l1 = b.acl(&[e(2, 1)]).unwrap();
        let diag = b.acl(&[Element::Vector(SparseVec::from_dense(2, &[1, 1]))]).unwrap();
        let l2 = b.acl(&[e(2, 2)]).unwrap();
        assert!(eval_pn(&w, &l0, &[&l0]).unwrap());
        assert!(eval_pn(&w, &diag, &[&l0, &l1]).unwrap());
        assert!(!eval_pn(&w, &l2, &[&l0, &l1]).unwrap());
    }

    #[test]
    fn identity_map_is_an_isomorphism_and_a_bad_swap_is_not() {
        let b = Backend::vector(3).unwrap();
        let w = ExpandedWindow::build(&b, 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
        assert!(iso_check(&w, &w, &WindowMap::identity(&w)).unwrap().holds);
        let id = w.triples.iter().position(|t| t.is_identity()).unwrap();
        let other = w.triples.iter().position(|t| !t.is_identity()).unwrap();
        let mut images: Vec<usize> = (0..w.len()).collect();
        images.swap(id, other);
        let v = iso_check(&w, &w, &WindowMap { images }).unwrap();
        assert!(!v.holds);
        assert_eq!(v.violated.as_deref(), Some("identity"));
    }

    #[test]
    fn groupoid_laws_on_a_plane_window() {
        let w = ExpandedWindow::build(&Backend::vector(2).unwrap(), 2, 3, DEFAULT_TRIPLE_CAP).unwrap();
        let r = integrity(&w);
        assert!(r.ok(), "{r:?}");
        assert_eq!(w.closed_sets.len(), 14);
    }

    #[test]
    fn triple_cap_is_enforced() {
        assert!(ExpandedWindow::build(&Backend::vector(3).unwrap(), 1, 2, 10).is_err());
    }

    #[test]
    fn orbital_examples() {
        let o = orbital_structure(&Backend::PureSet, 3, 2).unwrap();
        assert_eq!(o.class_counts(), vec![1, 2]);
        assert!(matches!(orbital_structure(&Backend::vector(2).unwrap(), 2, 1), Err(Error::Inapplicable(_))));
        let sym3 = Backend::finite(FiniteStructure::pure(3)).unwrap();
        assert_eq!(orbital_structure(&sym3, 0, 2).unwrap().class_counts(), vec![1, 2]);
    }

    #[test]
    fn window_json_is_deterministic() {
        let b = Backend::vector(3).unwrap();
        let w1 = ExpandedWindow::build(&b, 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
        let w2 = ExpandedWindow::build(&b, 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
        assert_eq!(w1.to_json().to_string(), w2.to_json().to_string());
    }
}
