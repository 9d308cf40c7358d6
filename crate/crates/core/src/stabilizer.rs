//! Generalized stabilizers G_(K,L), their subgroup and normality tests,
//! supports, and the two-part Lascar verifier.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::auto::{Automorphism, Semilinear};
use crate::backend::{atoms_from_perm, Backend, ClosedSet, Orbit};
use crate::element::{Element, PartialMap};
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::perm::{subgroups, Perm, PermGroup, Table};
use crate::vector::{window_vectors, Matrix, SparseVec, Span};

/// Largest group whose subgroup lattice is ever enumerated.
pub const SUBGROUP_CAP: usize = 5040;

/// G_(K,L): automorphisms preserving K setwise whose restriction lies in L.
/// L is held as permutations of K's (sorted) element indices.
#[derive(Clone, Debug)]
pub struct GsDescriptor {
    pub backend: String,
    pub k: ClosedSet,
    pub l_gens: Vec<Perm>,
}

impl GsDescriptor {
    pub fn l_group(&self) -> PermGroup {
        PermGroup::generated(self.k.len(), &self.l_gens, usize::MAX).expect("uncapped")
    }

    pub fn generator_maps(&self) -> Vec<PartialMap> {
        self.l_gens.iter().map(|p| self.k.map_of(p)).collect()
    }

    pub fn l_is_trivial(&self) -> bool {
        self.l_gens.iter().all(Perm::is_identity)
    }

    /// Same K and the same generated group.
    pub fn same_group(&self, other: &GsDescriptor) -> bool {
        self.backend == other.backend && self.k == other.k && self.l_group() == other.l_group()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "K": {"generators": self.k.generators},
            "L": self.generator_maps().iter().map(PartialMap::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(backend: &Backend, v: &Value) -> Result<Self> {
        let gens = v
            .pointer("/K/generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("descriptor needs K.generators".into()))?;
        let gens: Vec<Element> = gens.iter().map(|g| backend.element_from_json(g)).collect::<Result<_>>()?;
        let k = backend.acl(&gens)?;
        let mut l_gens = Vec::new();
        for m in v.get("L").and_then(Value::as_array).into_iter().flatten() {
            let pairs = m.as_array().ok_or_else(|| Error::Invalid("L entries are pair lists".into()))?;
            let mut map = PartialMap::new();
            for pair in pairs {
                let a = backend.element_from_json(&pair[0])?;
                let b = backend.element_from_json(&pair[1])?;
                map.insert(a, b)?;
            }
            if !backend.extendable(&map) {
                return Err(Error::Invalid(format!("generator {map} does not extend")));
            }
            l_gens.push(k.perm_of(&map)?);
        }
        Ok(GsDescriptor { backend: backend.id(), k, l_gens })
    }
}

pub fn pointwise(backend: &Backend, k: &ClosedSet) -> GsDescriptor {
    GsDescriptor { backend: backend.id(), k: k.clone(), l_gens: Vec::new() }
}

pub fn setwise(backend: &Backend, k: &ClosedSet) -> Result<GsDescriptor> {
    let l_gens = backend.aut_m_of(k)?.iter().map(|g| k.perm_of(g)).collect::<Result<_>>()?;
    Ok(GsDescriptor { backend: backend.id(), k: k.clone(), l_gens })
}

fn same_backend(h1: &GsDescriptor, h2: &GsDescriptor) -> Result<()> {
    if h1.backend != h2.backend {
        return Err(Error::BackendMismatch { expected: h1.backend.clone(), found: h2.backend.clone() });
    }
    Ok(())
}

/// G_(K1,L1) <= G_(K2,L2): K2 inside K1, and every element of L1 preserves
/// K2 with restriction in L2. The restriction map is a homomorphism on the
/// maps preserving K2, so checking generators of L1 is enough.
pub fn is_subgroup(h1: &GsDescriptor, h2: &GsDescriptor) -> Result<bool> {
    same_backend(h1, h2)?;
    if !h2.k.is_subset(&h1.k) {
        return Ok(false);
    }
    let idx: Vec<usize> = h2.k.elements.iter().map(|x| h1.k.index_of(x).unwrap()).collect();
    let l2 = h2.l_group();
    for f in &h1.l_gens {
        let mut restricted = Vec::with_capacity(idx.len());
        for &i in &idx {
            let img = &h1.k.elements[f.apply(i as u32) as usize];
            match h2.k.index_of(img) {
                Some(j) => restricted.push(j as u32),
                None => return Ok(false),
            }
        }
        if !l2.contains(&Perm(restricted)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// G_(K1,L1) normal in G_(K2,L2): K1 = K2 and L1 normal in L2.
pub fn is_normal_in(h1: &GsDescriptor, h2: &GsDescriptor) -> Result<bool> {
    same_backend(h1, h2)?;
    Ok(h1.k == h2.k && h1.l_group().is_normal_in(&h2.l_group()))
}

/// Either an explicit subgroup of a finite automorphism group or a descriptor.
#[derive(Clone, Debug)]
pub enum SubgroupHandle {
    Explicit(PermGroup),
    Descriptor(GsDescriptor),
}

fn finite_group(backend: &Backend) -> Result<&PermGroup> {
    backend
        .finite_backend()
        .ok_or_else(|| Error::Precondition("explicit subgroups need a finite backend".into()))?
        .group()
}

fn points(k: &ClosedSet) -> Vec<u32> {
    k.elements.iter().filter_map(Element::index).collect()
}

/// G_(K) inside a finite automorphism group.
pub fn pointwise_explicit(backend: &Backend, k: &ClosedSet) -> Result<PermGroup> {
    let g = finite_group(backend)?;
    let pts = points(k);
    Ok(PermGroup::from_elements(g.degree, g.elements.iter().filter(|p| pts.iter().all(|&x| p.fixes(x))).cloned().collect()))
}

/// G_{K} inside a finite automorphism group.
pub fn setwise_explicit(backend: &Backend, k: &ClosedSet) -> Result<PermGroup> {
    let g = finite_group(backend)?;
    let pts = points(k);
    Ok(PermGroup::from_elements(g.degree, g.elements.iter().filter(|p| p.image(&pts) == pts).cloned().collect()))
}

/// G_(K,L) inside a finite automorphism group, element by element.
pub fn descriptor_explicit(backend: &Backend, h: &GsDescriptor) -> Result<PermGroup> {
    let l = h.l_group();
    let setwise = setwise_explicit(backend, &h.k)?;
    let pts = points(&h.k);
    let els = setwise
        .elements
        .into_iter()
        .filter(|g| {
            let r = Perm(pts.iter().map(|&x| pts.binary_search(&g.apply(x)).unwrap() as u32).collect());
            l.contains(&r)
        })
        .collect();
    Ok(PermGroup::from_elements(setwise.degree, els))
}

/// Every closed set K with G_(K) <= H <= G_{K}.
pub fn supports_all(h: &SubgroupHandle, backend: &Backend) -> Result<Vec<ClosedSet>> {
    match h {
        SubgroupHandle::Descriptor(d) => Ok(vec![d.k.clone()]),
        SubgroupHandle::Explicit(group) => {
            let mut out = Vec::new();
            for k in backend.closed_sets(0) {
                if pointwise_explicit(backend, &k)?.is_subgroup_of(group) && group.is_subgroup_of(&setwise_explicit(backend, &k)?) {
                    out.push(k);
                }
            }
            Ok(out)
        }
    }
}

/// The sandwiching closed set, smallest in (rank, element) order when
/// several exist.
pub fn support(h: &SubgroupHandle, backend: &Backend) -> Result<ClosedSet> {
    let order = match h {
        SubgroupHandle::Explicit(g) => g.order(),
        SubgroupHandle::Descriptor(_) => 0,
    };
    supports_all(h, backend)?.into_iter().next().ok_or(Error::NoSupport { order })
}

/// (K, L) with L the restrictions of H to its support; checks H = G_(K,L).
pub fn sandwich_decompose(h: &SubgroupHandle, backend: &Backend) -> Result<GsDescriptor> {
    match h {
        SubgroupHandle::Descriptor(d) => Ok(d.clone()),
        SubgroupHandle::Explicit(group) => {
            let k = support(h, backend)?;
            let pts = points(&k);
            let restrictions: Vec<Perm> = group
                .elements
                .iter()
                .map(|g| Perm(pts.iter().map(|&x| pts.binary_search(&g.apply(x)).unwrap() as u32).collect()))
                .collect();
            let l = PermGroup::from_elements(k.len(), restrictions);
            let d = GsDescriptor { backend: backend.id(), k, l_gens: l.generators() };
            if descriptor_explicit(backend, &d)? != *group {
                return Err(Error::Invalid("subgroup differs from its sandwich descriptor".into()));
            }
            Ok(d)
        }
    }
}

/// g in G_(K) and h in G_(S) with g^-1 h g (S) != S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LascarWitness {
    pub g: Automorphism,
    pub h: Automorphism,
}

impl LascarWitness {
    pub fn to_json(&self) -> Value {
        json!({"g": self.g.to_json(), "h": self.h.to_json()})
    }
}

/// The linear automorphism of GF(q)^n sending basis[i] to images[i].
pub fn linear_from_basis(q: u8, n: usize, basis: &[SparseVec], images: &[SparseVec]) -> Automorphism {
    let p = Matrix::from_columns(q, n, basis);
    let img = Matrix::from_columns(q, n, images);
    Automorphism::Vector(Semilinear::linear(img.mul(&p.inverse().expect("basis is independent"))))
}

/// Checks a witness by direct image computation.
pub fn verify_condition1(k: &ClosedSet, s: &ClosedSet, w: &LascarWitness) -> bool {
    let g_fixes_k = k.elements.iter().all(|x| w.g.apply(x) == *x);
    let h_fixes_s = s.elements.iter().all(|x| w.h.apply(x) == *x);
    let conj = w.g.inverse().after(&w.h).after(&w.g);
    g_fixes_k && h_fixes_s && conj.apply_all(&s.elements) != s.elements
}

/// Constructs g in G_(K), h in G_(S) moving S off itself. On the vector
/// backend a basis of S over S∩K is sent to fresh vectors by g, and h sends
/// those fresh vectors to further fresh ones while fixing S; the pure set is
/// handled the same way with atoms. Finite backends are searched exhaustively.
pub fn lascar_condition1(backend: &Backend, k: &ClosedSet, s: &ClosedSet) -> Result<LascarWitness> {
    if s.is_subset(k) {
        return Err(Error::Precondition("S must not be contained in K".into()));
    }
    let w = match backend {
        Backend::Vector { q } => {
            let q = *q;
            let vecs = |c: &ClosedSet| -> Vec<SparseVec> { c.elements.iter().filter_map(|x| x.as_vector().cloned()).collect() };
            let ks = Span::of(q, &vecs(k));
            let ss = Span::of(q, &vecs(s));
            let n = ks.join(&ss).extent();
            let t = ss.complement_basis(&ss.meet(&ks));
            let m = t.len();
            let total = n + 2 * m;
            let fresh: Vec<SparseVec> = (0..m).map(|i| SparseVec::basis(q, (n + i) as u32)).collect();
            let fresh2: Vec<SparseVec> = (0..m).map(|i| SparseVec::basis(q, (n + m + i) as u32)).collect();
            let low = Span::of(q, &window_vectors(q, n));
            let complete = |start: Vec<SparseVec>| -> Vec<SparseVec> {
                let sp = Span::of(q, &start);
                let mut out = start;
                out.extend(low.complement_basis(&sp));
                out
            };
            // g: fix K and a complement, swap t_i <-> fresh_i, fix fresh2
            let mut gb = ks.basis();
            gb.extend(t.iter().cloned());
            let mut gbasis = complete(gb);
            let mut gimg = gbasis.clone();
            let kd = ks.dim();
            for i in 0..m {
                gimg[kd + i] = fresh[i].clone();
            }
            gbasis.extend(fresh.iter().cloned());
            gimg.extend(t.iter().cloned());
            gbasis.extend(fresh2.iter().cloned());
            gimg.extend(fresh2.iter().cloned());
            // h: fix S and a complement, swap fresh_i <-> fresh2_i
            let mut hbasis = complete(ss.basis());
            let mut himg = hbasis.clone();
            hbasis.extend(fresh.iter().cloned());
            himg.extend(fresh2.iter().cloned());
            hbasis.extend(fresh2.iter().cloned());
            himg.extend(fresh.iter().cloned());
            LascarWitness { g: linear_from_basis(q, total, &gbasis, &gimg), h: linear_from_basis(q, total, &hbasis, &himg) }
        }
        Backend::PureSet => {
            let t: Vec<u32> = s.elements.iter().filter(|x| !k.contains(x)).filter_map(Element::index).collect();
            let top = k.elements.iter().chain(&s.elements).filter_map(Element::index).max().unwrap_or(0) + 1;
            let m = t.len() as u32;
            let mut g = std::collections::BTreeMap::new();
            let mut h = std::collections::BTreeMap::new();
            for (i, &x) in t.iter().enumerate() {
                let f1 = top + i as u32;
                let f2 = top + m + i as u32;
                g.insert(x, f1);
                g.insert(f1, x);
                h.insert(f1, f2);
                h.insert(f2, f1);
            }
            LascarWitness { g: Automorphism::Atoms(g), h: Automorphism::Atoms(h) }
        }
        Backend::Finite(_) => {
            let gk = pointwise_explicit(backend, k)?;
            let gs = pointwise_explicit(backend, s)?;
            let pts = points(s);
            let mut found = None;
            'outer: for g in &gk.elements {
                let gi = g.inverse();
                for h in &gs.elements {
                    if gi.after(h).after(g).image(&pts) != pts {
                        found = Some(LascarWitness { g: Automorphism::Points(g.clone()), h: Automorphism::Points(h.clone()) });
                        break 'outer;
                    }
                }
            }
            found.ok_or_else(|| Error::NoWitness(format!("no pair for K={} S={}", k.label(), s.label())))?
        }
    };
    debug_assert!(verify_condition1(k, s, &w));
    Ok(w)
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupSupport {
    pub order: usize,
    /// Labels of every sandwiching closed set.
    pub supports: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition2Report {
    pub subgroups: usize,
    pub entries: Vec<SubgroupSupport>,
    pub unsupported: usize,
    /// Subgroups sandwiched by more than one closed set.
    pub non_unique: usize,
    pub verdict: bool,
}

/// Scans every subgroup of a finite automorphism group for a sandwiching
/// closed set.
pub fn lascar_condition2(backend: &Backend) -> Result<Condition2Report> {
    let fb = backend.finite_backend().ok_or_else(|| Error::Precondition("condition (2) scan needs a finite backend".into()))?;
    if fb.order as usize > SUBGROUP_CAP {
        return Err(Error::SizeBound { what: "automorphism group".into(), size: fb.order, bound: SUBGROUP_CAP as u64 });
    }
    let group = fb.group()?;
    let closed = backend.closed_sets(0);
    let pw: Vec<PermGroup> = closed.iter().map(|k| pointwise_explicit(backend, k)).collect::<Result<_>>()?;
    let sw: Vec<PermGroup> = closed.iter().map(|k| setwise_explicit(backend, k)).collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for h in subgroups(group, SUBGROUP_CAP)? {
        let supports = closed
            .iter()
            .enumerate()
            .filter(|(i, _)| pw[*i].is_subgroup_of(&h) && h.is_subgroup_of(&sw[*i]))
            .map(|(_, k)| k.label())
            .collect();
        entries.push(SubgroupSupport { order: h.order(), supports });
    }
    let unsupported = entries.iter().filter(|e| e.supports.is_empty()).count();
    let non_unique = entries.iter().filter(|e| e.supports.len() > 1).count();
    Ok(Condition2Report { subgroups: entries.len(), entries, unsupported, non_unique, verdict: unsupported == 0 })
}

/// Every descriptor (K, L) with K a closed set of the window and L a
/// subgroup of Aut_M(K), skipping K whose Aut_M(K) exceeds `cap`.
pub fn universe(backend: &Backend, window: usize, cap: usize) -> Result<Vec<GsDescriptor>> {
    let mut out = Vec::new();
    for k in backend.closed_sets(window) {
        let a = match backend.aut_m_group(&k, cap + 1) {
            Ok(a) if a.order() <= cap => a,
            _ => continue,
        };
        for l in subgroups(&a, cap)? {
            out.push(GsDescriptor { backend: backend.id(), k: k.clone(), l_gens: l.generators() });
        }
    }
    Ok(out)
}

/// No proper normal subgroup of H in the universe.
pub fn is_pointwise_stabilizer(h: &GsDescriptor, universe: &[GsDescriptor]) -> Result<bool> {
    for other in universe {
        if is_normal_in(other, h)? && is_subgroup(other, h)? && !other.same_group(h) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn depth_k(k: &ClosedSet) -> usize {
    k.depth.level()
}

/// Longest strict chain acl(a1) < ... < acl(ak) of singleton closures in
/// the window, over elements outside acl(∅).
pub fn k_m(backend: &Backend, window: usize) -> Result<usize> {
    let bottom = backend.bottom();
    let mut sets: Vec<ClosedSet> = Vec::new();
    for a in backend.window_elements(window) {
        if bottom.contains(&a) {
            continue;
        }
        let c = backend.acl(std::slice::from_ref(&a))?;
        if !sets.contains(&c) {
            sets.push(c);
        }
    }
    sets.sort_by_key(|c| c.len());
    let mut best = vec![1usize; sets.len()];
    for i in 0..sets.len() {
        for j in 0..i {
            if sets[j].len() < sets[i].len() && sets[j].is_subset(&sets[i]) {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    Ok(best.into_iter().max().unwrap_or(0))
}

/// Longest chain of pointwise stabilizers from G_(K) up to G in the universe.
pub fn pointwise_chain_length(h: &GsDescriptor, universe: &[GsDescriptor]) -> Result<usize> {
    let mut ps: Vec<&GsDescriptor> = universe.iter().filter(|d| d.l_is_trivial()).collect();
    ps.sort_by(|a, b| a.k.cmp(&b.k));
    // G_(K1) < G_(K2) iff K2 ⊊ K1; walk from the bottom set up to K
    let mut best: Vec<Option<usize>> = vec![None; ps.len()];
    for i in 0..ps.len() {
        if ps[i].k.is_bottom() {
            best[i] = Some(0);
            continue;
        }
        best[i] = (0..i)
            .filter(|&j| ps[j].k.len() < ps[i].k.len() && ps[j].k.is_subset(&ps[i].k))
            .filter_map(|j| best[j].map(|b| b + 1))
            .max();
    }
    let i = ps.iter().position(|d| d.k == h.k).ok_or_else(|| Error::Precondition("H not in the universe".into()))?;
    best[i].ok_or_else(|| Error::Precondition("no chain reaches G".into()))
}

/// Cosets of `normal` in `big` and the induced multiplication table.
pub fn quotient_table(big: &PermGroup, normal: &PermGroup) -> Table {
    let mut reps: Vec<Perm> = Vec::new();
    let mut coset_of: std::collections::HashMap<Perm, usize> = std::collections::HashMap::new();
    for g in &big.elements {
        if coset_of.contains_key(g) {
            continue;
        }
        let idx = reps.len();
        for n in &normal.elements {
            coset_of.insert(g.after(n), idx);
        }
        reps.push(g.clone());
    }
    let m = reps.len();
    let mut mul = vec![vec![0usize; m]; m];
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            mul[i][j] = coset_of[&a.after(b)];
        }
    }
    let identity = coset_of[&Perm::identity(big.degree)];
    Table { mul, identity }
}

/// For a pointwise stabilizer H = G_(K): the maximal H' in the universe
/// with H normal in H', and the table of H'/H, checked against Aut_M(K).
/// The quotient is read through the restriction map to K.
pub fn aut_m_k_iso_detect(backend: &Backend, h: &GsDescriptor, universe: &[GsDescriptor]) -> Result<Option<Table>> {
    if !is_pointwise_stabilizer(h, universe)? {
        return Err(Error::Precondition("H is not a pointwise stabilizer".into()));
    }
    let over: Vec<&GsDescriptor> = universe.iter().filter(|d| is_normal_in(h, d).unwrap_or(false)).collect();
    let mut maximal = None;
    for d in &over {
        let mut dominated = false;
        for e in &over {
            if !e.same_group(d) && is_subgroup(d, e)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            maximal = Some(*d);
            break;
        }
    }
    let Some(top) = maximal else { return Ok(None) };
    let quotient = quotient_table(&top.l_group(), &h.l_group());
    let aut = backend.aut_m_group(&h.k, SUBGROUP_CAP)?.table();
    if !quotient.isomorphic(&aut) {
        return Err(Error::Invalid("quotient is not isomorphic to Aut_M(K)".into()));
    }
    Ok(Some(quotient))
}

/// A_0 = A, A_{i+1} = A_i ∪ orbit(b_i / A) over an enumeration b_i of
/// acl(A); returned for inspection only.
pub fn ol_chain(backend: &Backend, a: &[Element], window: usize) -> Result<Vec<Vec<Element>>> {
    let k = backend.acl(a)?;
    let base = k.clone();
    let mut current: BTreeSet<Element> = a.iter().cloned().collect();
    let mut chain = vec![current.iter().cloned().collect::<Vec<_>>()];
    for b in &k.elements {
        match backend.orbit(b, &base, window)? {
            Orbit::Finite(o) => current.extend(o),
            Orbit::Unbounded => return Err(Error::Invalid(format!("{b} has an unbounded orbit over its closure"))),
        }
        chain.push(current.iter().cloned().collect());
    }
    Ok(chain)
}

/// Generators of the pointwise stabilizer of K inside GL(n, q): in a basis
/// extending one of K, transvections from the complement into K together
/// with generators of GL on the complement.
pub fn pointwise_window_generators(q: u8, k: &Span, n: usize) -> Result<Vec<Automorphism>> {
    let f = Gf::get(q)?;
    let whole = Span::of(q, &window_vectors(q, n));
    let b = k.basis();
    let c = whole.complement_basis(k);
    let mut basis = b.clone();
    basis.extend(c.iter().cloned());
    let d = b.len();
    let m = c.len();
    let mut gens = Vec::new();
    let mut push = |img: Vec<SparseVec>| gens.push(linear_from_basis(q, n, &basis, &img));
    for i in 0..d {
        for j in 0..m {
            let mut img = basis.clone();
            img[d + j] = c[j].add(&b[i]);
            push(img);
        }
    }
    if m >= 1 && q > 2 {
        let mut img = basis.clone();
        img[d] = c[0].scale(f.primitive());
        push(img);
    }
    if m >= 2 {
        let mut img = basis.clone();
        img[d] = c[0].add(&c[1]);
        push(img);
        let mut img = basis.clone();
        img.swap(d, d + 1);
        push(img);
        let mut img = basis.clone();
        for j in 0..m {
            img[d + j] = c[(j + 1) % m].clone();
        }
        push(img);
    }
    Ok(gens)
}

/// Galois round trip for one closed set: the fixed points of G_(K) are K,
/// and G_(fixed points) equals G_(K). Vector windows use generators of
/// G_(K) ∩ GL(n,q); finite backends use explicit groups. Infinite backends
/// widen the window to leave two free coordinates beyond K, since a
/// smaller window can lack the automorphisms that move points outside K.
pub fn galois_roundtrip(backend: &Backend, k: &ClosedSet, window: usize) -> Result<bool> {
    match backend {
        Backend::Vector { q } => {
            let span = Span::of(*q, &k.elements.iter().filter_map(|x| x.as_vector().cloned()).collect::<Vec<_>>());
            let window = window.max(span.extent() + 2);
            let gens = pointwise_window_generators(*q, &span, window)?;
            let fixed: Vec<Element> = backend
                .window_elements(window)
                .into_iter()
                .filter(|x| gens.iter().all(|g| g.apply(x) == *x))
                .collect();
            if fixed != k.elements {
                return Ok(false);
            }
            let fixed_span = Span::of(*q, &fixed.iter().filter_map(|x| x.as_vector().cloned()).collect::<Vec<_>>());
            let back = pointwise_window_generators(*q, &fixed_span, window)?;
            // mutual containment: generators of each fix the other's set
            Ok(back.iter().all(|g| k.elements.iter().all(|x| g.apply(x) == *x))
                && gens.iter().all(|g| fixed.iter().all(|x| g.apply(x) == *x)))
        }
        Backend::Finite(_) => {
            let gk = pointwise_explicit(backend, k)?;
            let fixed: Vec<u32> = (0..gk.degree as u32).filter(|&x| gk.elements.iter().all(|g| g.fixes(x))).collect();
            if fixed != points(k) {
                return Ok(false);
            }
            let kk = backend.acl(&fixed.iter().map(|&i| Element::Point(i)).collect::<Vec<_>>())?;
            Ok(pointwise_explicit(backend, &kk)? == gk)
        }
        Backend::PureSet => {
            let extent = k.elements.iter().filter_map(Element::index).max().map_or(0, |m| m as usize + 1);
            let window = window.max(extent + 2);
            let autos = backend.window_automorphisms(window)?;
            let gk: Vec<&Automorphism> = autos.iter().filter(|g| k.elements.iter().all(|x| g.apply(x) == *x)).collect();
            let fixed: Vec<Element> =
                backend.window_elements(window).into_iter().filter(|x| gk.iter().all(|g| g.apply(x) == *x)).collect();
            Ok(fixed == k.elements)
        }
    }
}

/// Pure-set witness helper used by tests: the permutation as an automorphism.
pub fn atoms(p: &Perm) -> Automorphism {
    atoms_from_perm(p)
}
