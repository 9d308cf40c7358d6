//! Conjugation actions as window maps and back, the induced maps on the
//! canonical geometry, kernel extraction for vector spaces, and semilinear
//! lifts of geometry automorphisms.

use rand::Rng as _;
use serde::Serialize;
use serde_json::{json, Value};

use crate::auto::{Automorphism, Semilinear};
use crate::backend::{span_map, Backend, ClosedSet};
use crate::element::{Element, PartialMap};
use crate::error::{Error, Result};
use crate::expanded::{iso_check, ExpandedWindow, Triple, WindowMap};
use crate::field::Gf;
use crate::geometry::{Geometry, GeometryAutomorphism};
use crate::sample::{random_invertible, Rng};
use crate::stabilizer::k_m;
use crate::vector::{general_linear, Matrix, SparseVec};

/// (K, p, K') -> (hK, h p h^-1, hK').
pub fn conjugate_triple(backend: &Backend, h: &Automorphism, t: &Triple) -> Result<Triple> {
    let map = PartialMap::from_pairs(t.map.iter().map(|(x, y)| (h.apply(x), h.apply(y))))?;
    Ok(Triple { dom: backend.image(h, &t.dom)?, cod: backend.image(h, &t.cod)?, map })
}

/// The window map induced by conjugation with h.
pub fn f_from_alpha(h: &Automorphism, w: &ExpandedWindow) -> Result<WindowMap> {
    WindowMap::from_fn(w, w, |t| conjugate_triple(&w.backend, h, t))
}

/// alpha(g) on the window: the union of the second components of
/// f(K, g|K, gK) over the window's closed sets.
pub fn alpha_from_f(f: &WindowMap, g: &Automorphism, w: &ExpandedWindow) -> Result<PartialMap> {
    let mut out = PartialMap::new();
    for k in &w.closed_sets {
        let image = w.backend.image(g, k)?;
        let t = Triple { dom: k.clone(), cod: image, map: g.restrict(&k.elements) };
        let i = w
            .index_of(&t)
            .ok_or_else(|| Error::WindowOverflow(format!("g moves {} outside the window", k.label())))?;
        let h_i = &w.triples[f.images[i]].map;
        out = out
            .union(h_i)
            .ok_or_else(|| Error::NotAnIsomorphism(format!("second components disagree at {}", k.label())))?;
    }
    Ok(out)
}

/// f_{b after a} = f_b after f_a, triple by triple.
pub fn check_functoriality(a: &Automorphism, b: &Automorphism, w: &ExpandedWindow) -> Result<bool> {
    let fa = f_from_alpha(a, w)?;
    let fb = f_from_alpha(b, w)?;
    Ok(f_from_alpha(&b.after(a), w)? == fb.after(&fa))
}

/// alpha_from_f(f_from_alpha(h), g) against h g h^-1 on the same domain.
pub fn round_trip(h: &Automorphism, g: &Automorphism, w: &ExpandedWindow) -> Result<bool> {
    let f = f_from_alpha(h, w)?;
    let got = alpha_from_f(&f, g, w)?;
    let expected = h.conjugate(g).restrict(got.domain());
    Ok(got == expected)
}

fn require_pregeometric(w: &ExpandedWindow) -> Result<()> {
    if w.k != 1 {
        return Err(Error::Inapplicable(format!("geometry maps need a depth-1 window, got depth {}", w.k)));
    }
    let km = k_m(&w.backend, w.size)?;
    if km != 1 {
        return Err(Error::Inapplicable(format!("k_M is {km}, not 1")));
    }
    Ok(())
}

/// The point map K -> K' read from f(K, id, K) = (K', id, K').
pub fn pi_map(f: &WindowMap, w: &ExpandedWindow, g: &Geometry) -> Result<GeometryAutomorphism> {
    require_pregeometric(w)?;
    let mut map = Vec::with_capacity(g.len());
    for p in &g.points {
        let img = f
            .on_sets(w, w, p)
            .ok_or_else(|| Error::NotAnIsomorphism(format!("identity triple of {} is not sent to an identity triple", p.label())))?;
        map.push(g.index_of(&img).ok_or_else(|| Error::WindowOverflow(format!("{} is not a geometry point", img.label())))?);
    }
    Ok(GeometryAutomorphism::new(g, map, 0))
}

/// K -> h(K) on geometry points.
pub fn phi_map(h: &Automorphism, g: &Geometry) -> Result<GeometryAutomorphism> {
    let mut map = Vec::with_capacity(g.len());
    for p in &g.points {
        let img = g.backend.image(h, p)?;
        map.push(g.index_of(&img).ok_or_else(|| Error::WindowOverflow(format!("h moves {} off the geometry", p.label())))?);
    }
    Ok(GeometryAutomorphism::new(g, map, 0))
}

/// Per-line scalar permutations f_i of the nonzero field elements, one per
/// basis line Ke_i of the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelElement {
    pub lines: Vec<Value>,
    /// tables[i][l - 1] = f_i(l) for l = 1..q-1.
    pub tables: Vec<Vec<u8>>,
    /// Whether f also fixes every closed set of the window, not just the
    /// basis lines.
    pub fixes_all: bool,
}

impl KernelElement {
    /// The common f_i, if every line agrees.
    pub fn shared(&self) -> Option<&Vec<u8>> {
        let first = self.tables.first()?;
        self.tables.iter().all(|t| t == first).then_some(first)
    }
}

fn line_generator(w: &ExpandedWindow, k: &ClosedSet) -> SparseVec {
    w.backend.basis(k)[0].as_vector().expect("vector backend").clone()
}

fn scalar_triple(q: u8, line: &ClosedSet, from: &SparseVec, to_line: &ClosedSet, to: &SparseVec, lambda: u8) -> Triple {
    Triple { dom: line.clone(), cod: to_line.clone(), map: span_map(q, std::slice::from_ref(from), &[to.scale(lambda)]) }
}

/// The scalar c with p(e) = c e' for a triple between lines.
fn read_scalar(t: &Triple, from: &SparseVec, to: &SparseVec) -> Result<u8> {
    let img = t.map.get(&Element::Vector(from.clone())).and_then(Element::as_vector).ok_or_else(|| Error::Invalid("line map lost its generator".into()))?;
    (1..from.q()).find(|&c| to.scale(c) == *img).ok_or_else(|| Error::Invalid("line map is not scalar".into()))
}

/// Reads f_i(l) from f(Ke_i, l, Ke_i) on each basis line, then checks f_i(1) = 1,
/// multiplicativity, inverses, and f_i = f_j through the composite
/// Ke_i -l-> Ke_i -1-> Ke_j -l^-1-> Ke_j -1-> Ke_i, whose image must be
/// an identity triple.
pub fn kernel_extract(f: &WindowMap, w: &ExpandedWindow) -> Result<KernelElement> {
    let q = w.backend.q().ok_or_else(|| Error::Inapplicable("kernel extraction runs on vector windows".into()))?;
    let field = Gf::get(q)?;
    let basis: Vec<ClosedSet> = (0..w.size).map(|i| w.backend.acl(&[Element::Vector(SparseVec::basis(q, i as u32))])).collect::<Result<_>>()?;
    for k in &basis {
        if f.on_sets(w, w, k).as_ref() != Some(k) {
            return Err(Error::Precondition(format!("f moves the basis line {}", k.label())));
        }
    }
    let fixes_all = w.closed_sets.iter().all(|k| f.on_sets(w, w, k).as_ref() == Some(k));
    let lines: Vec<&ClosedSet> = basis.iter().collect();
    let image = |t: &Triple| -> Result<&Triple> { f.apply(w, w, t).ok_or_else(|| Error::WindowOverflow(format!("{} is not in the window", t.to_json()))) };
    let mut tables = Vec::new();
    for line in &lines {
        let e = line_generator(w, line);
        let mut table = Vec::new();
        for l in 1..q {
            table.push(read_scalar(image(&scalar_triple(q, line, &e, line, &e, l))?, &e, &e)?);
        }
        let fi = |l: u8| table[l as usize - 1];
        if fi(1) != 1 {
            return Err(Error::NotAnIsomorphism(format!("f_i(1) = {} on {}", fi(1), line.label())));
        }
        for l in 1..q {
            for m in 1..q {
                if fi(field.mul(m, l)) != field.mul(fi(l), fi(m)) {
                    return Err(Error::NotAnIsomorphism(format!("f_i is not multiplicative at ({l}, {m}) on {}", line.label())));
                }
            }
            if fi(field.inv(l)) != field.inv(fi(l)) {
                return Err(Error::NotAnIsomorphism(format!("f_i does not respect the inverse of {l}")));
            }
        }
        tables.push(table);
    }
    for (i, li) in lines.iter().enumerate() {
        for (j, lj) in lines.iter().enumerate() {
            if i == j {
                continue;
            }
            let (ei, ej) = (line_generator(w, li), line_generator(w, lj));
            for l in 1..q {
                let chain = [
                    scalar_triple(q, li, &ei, li, &ei, l),
                    scalar_triple(q, li, &ei, lj, &ej, 1),
                    scalar_triple(q, lj, &ej, lj, &ej, field.inv(l)),
                    scalar_triple(q, lj, &ej, li, &ei, 1),
                ];
                let mut composite = image(&chain[0])?.clone();
                for t in &chain[1..] {
                    composite = composite.then(image(t)?).ok_or_else(|| Error::NotAnIsomorphism("image chain does not compose".into()))?;
                }
                if !composite.is_identity() {
                    return Err(Error::NotAnIsomorphism(format!("composite chain through {} and {} is not the identity", li.label(), lj.label())));
                }
            }
            if tables[i] != tables[j] {
                return Err(Error::NotAnIsomorphism(format!("f_i differs between {} and {}", li.label(), lj.label())));
            }
        }
    }
    Ok(KernelElement { lines: lines.iter().map(|l| json!(l.generators)).collect(), tables, fixes_all })
}

/// Every semilinear map of GF(q)^n that fixes each line.
pub fn geometry_kernel_maps(q: u8, n: usize, g: &Geometry) -> Result<Vec<Semilinear>> {
    let degree = Gf::get(q)?.degree as u32;
    let mut out = Vec::new();
    for m in general_linear(q, n) {
        for e in 0..degree {
            let s = Semilinear { frobenius: e, matrix: m.clone() };
            if phi_map(&Automorphism::Vector(s.clone()), g)?.is_identity() {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Every semilinear map of GF(q)^n that fixes each basis line: diagonal
/// matrices under every Frobenius power.
pub fn basis_fixing_maps(q: u8, n: usize) -> Result<Vec<Semilinear>> {
    let f = Gf::get(q)?;
    let mut diagonals: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..n {
        diagonals = diagonals.into_iter().flat_map(|d| f.nonzero().map(move |c| [d.clone(), vec![c]].concat())).collect();
    }
    let mut out = Vec::new();
    for e in 0..f.degree as u32 {
        for d in &diagonals {
            let mut m = Matrix::zero(q, n, n);
            for (i, &c) in d.iter().enumerate() {
                m.set(i, i, c);
            }
            out.push(Semilinear { frobenius: e, matrix: m });
        }
    }
    Ok(out)
}

/// A semilinear map inducing `g` on the lines of GF(q)^n: Frobenius
/// exponents in increasing order, columns solved from basis lines with the
/// all-ones line fixing the scalars, then checked on every point.
pub fn semilinear_search(g: &GeometryAutomorphism, geo: &Geometry, n: usize) -> Result<Option<Semilinear>> {
    let q = geo.backend.q().ok_or_else(|| Error::Inapplicable("semilinear search runs on vector windows".into()))?;
    let field = Gf::get(q)?;
    if n < 3 {
        return Ok(None);
    }
    let point_of = |v: &SparseVec| -> Result<usize> {
        let k = geo.backend.acl(&[Element::Vector(v.clone())])?;
        geo.index_of(&k).ok_or_else(|| Error::WindowOverflow(format!("{v:?} is outside the geometry")))
    };
    let rep = |i: usize| -> SparseVec { line_generator_of(&geo.points[i]).normalized_first() };
    let basis: Vec<SparseVec> = (0..n).map(|i| SparseVec::basis(q, i as u32)).collect();
    let ones = SparseVec::from_dense(q, &vec![1; n]);
    let w_i: Vec<SparseVec> = basis.iter().map(|b| Ok(rep(g.map[point_of(b)?]))).collect::<Result<_>>()?;
    let w = rep(g.map[point_of(&ones)?]);
    let wm = Matrix::from_columns(q, n, &w_i);
    let Some(inv) = wm.inverse() else { return Ok(None) };
    let c = inv.apply(&w);
    if (0..n).any(|i| c.get(i as u32) == 0) {
        return Ok(None);
    }
    let cols: Vec<SparseVec> = (0..n).map(|i| w_i[i].scale(c.get(i as u32))).collect();
    let m = Matrix::from_columns(q, n, &cols);
    for e in 0..field.degree as u32 {
        let s = Semilinear { frobenius: e, matrix: m.clone() };
        let ok = (0..geo.len()).all(|p| {
            let v = line_generator_of(&geo.points[p]);
            point_of(&s.apply(&v)).is_ok_and(|img| img == g.map[p])
        });
        if ok {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn line_generator_of(k: &ClosedSet) -> SparseVec {
    k.generators[0].as_vector().expect("vector point").clone()
}

trait FirstNormalized {
    fn normalized_first(&self) -> SparseVec;
}

impl FirstNormalized for SparseVec {
    /// Scaled so the lowest-index coordinate is 1.
    fn normalized_first(&self) -> SparseVec {
        self.normalized()
    }
}

/// A random semilinear automorphism of GF(q)^n.
pub fn random_semilinear(q: u8, n: usize, rng: &mut Rng) -> Result<Semilinear> {
    let degree = Gf::get(q)?.degree as u32;
    Ok(Semilinear { frobenius: rng.gen_range(0..degree), matrix: random_invertible(q, n, rng) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramReport {
    pub samples: usize,
    pub commuting: usize,
    pub section_samples: usize,
    pub section_ok: usize,
    pub failures: Vec<Value>,
}

impl DiagramReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.commuting == self.samples && self.section_ok == self.section_samples
    }
}

/// phi(h) against pi(f_from_alpha(h)) for each sample, and
/// pi(f_from_alpha(ĝ)) = g for geometry automorphisms g with ĝ found by
/// semilinear search.
pub fn diagram_check(samples: &[Automorphism], sections: &[GeometryAutomorphism], w: &ExpandedWindow, geo: &Geometry) -> Result<DiagramReport> {
    let mut commuting = 0;
    let mut failures = Vec::new();
    for h in samples {
        let direct = phi_map(h, geo)?;
        let via = pi_map(&f_from_alpha(h, w)?, w, geo)?;
        if direct.map == via.map && via.certified {
            commuting += 1;
        } else {
            failures.push(json!({"check": "commute", "h": h.to_json()}));
        }
    }
    let mut section_ok = 0;
    for g in sections {
        match semilinear_search(g, geo, w.size)? {
            Some(s) => {
                let pi = pi_map(&f_from_alpha(&Automorphism::Vector(s.clone()), w)?, w, geo)?;
                if pi.map == g.map {
                    section_ok += 1;
                } else {
                    failures.push(json!({"check": "section", "g": g.map, "lift": s.to_json()}));
                }
            }
            None => failures.push(json!({"check": "section", "g": g.map, "lift": null})),
        }
    }
    Ok(DiagramReport { samples: samples.len(), commuting, section_samples: sections.len(), section_ok, failures })
}

/// Every h in GL(n, q) acting trivially on the geometry, and whether all of
/// them are scalar.
pub fn phi_kernel_is_scalar(q: u8, n: usize, geo: &Geometry) -> Result<(usize, bool)> {
    let f = Gf::get(q)?;
    let mut count = 0;
    let mut scalar = true;
    for m in general_linear(q, n) {
        if phi_map(&Automorphism::Vector(Semilinear::linear(m.clone())), geo)?.is_identity() {
            count += 1;
            let c = m.get(0, 0);
            scalar &= f.nonzero().any(|x| x == c) && m == scale_identity(q, n, c);
        }
    }
    Ok((count, scalar))
}

fn scale_identity(q: u8, n: usize, c: u8) -> Matrix {
    let mut m = Matrix::zero(q, n, n);
    for i in 0..n {
        m.set(i, i, c);
    }
    m
}

/// Sampled input/output pairs of a map and whether its homomorphism law
/// held on every sampled pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomomorphismRecord {
    pub name: String,
    pub evaluations: Vec<(Value, Value)>,
    pub law_holds: bool,
}

/// Records for gamma (h -> f_h), pi on window maps, and phi, over
/// consecutive pairs of the samples.
pub fn homomorphism_records(samples: &[Automorphism], w: &ExpandedWindow, geo: &Geometry) -> Result<Vec<HomomorphismRecord>> {
    let mut gamma = HomomorphismRecord { name: "gamma".into(), evaluations: vec![], law_holds: true };
    let mut pi = HomomorphismRecord { name: "pi".into(), evaluations: vec![], law_holds: true };
    let mut phi = HomomorphismRecord { name: "phi".into(), evaluations: vec![], law_holds: true };
    for h in samples {
        let f = f_from_alpha(h, w)?;
        gamma.evaluations.push((h.to_json(), json!(f.images)));
        pi.evaluations.push((json!(f.images), json!(pi_map(&f, w, geo)?.map)));
        phi.evaluations.push((h.to_json(), json!(phi_map(h, geo)?.map)));
    }
    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (fa, fb) = (f_from_alpha(a, w)?, f_from_alpha(b, w)?);
        gamma.law_holds &= f_from_alpha(&b.after(a), w)? == fb.after(&fa);
        pi.law_holds &= pi_map(&fb.after(&fa), w, geo)?.map == pi_map(&fb, w, geo)?.after(&pi_map(&fa, w, geo)?).map;
        phi.law_holds &= phi_map(&b.after(a), geo)?.map == phi_map(b, geo)?.after(&phi_map(a, geo)?).map;
    }
    Ok(vec![gamma, pi, phi])
}

/// f_from_alpha output also passes the full isomorphism check.
pub fn induced_map_is_iso(h: &Automorphism, w: &ExpandedWindow) -> Result<bool> {
    Ok(iso_check(w, w, &f_from_alpha(h, w)?)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expanded::DEFAULT_TRIPLE_CAP;
    use crate::geometry::canonical_geometry;
    use crate::sample::{random_automorphism, rng};

    fn window(q: u8, n: usize) -> (ExpandedWindow, Geometry) {
        let b = Backend::vector(q).unwrap();
        (ExpandedWindow::build(&b, 1, n, DEFAULT_TRIPLE_CAP).unwrap(), canonical_geometry(&b, n).unwrap())
    }

    fn frobenius(q: u8, n: usize) -> Automorphism {
        Automorphism::Vector(Semilinear { frobenius: 1, matrix: Matrix::identity(q, n) })
    }

    fn swap01(q: u8, n: usize) -> Automorphism {
        let mut m = Matrix::identity(q, n);
        m.set(0, 0, 0);
        m.set(1, 1, 0);
        m.set(0, 1, 1);
        m.set(1, 0, 1);
        Automorphism::Vector(Semilinear::linear(m))
    }

    #[test]
    fn identity_action_gives_identity_map() {
        let (w, _) = window(2, 2);
        assert!(f_from_alpha(&Backend::vector(2).unwrap().identity_automorphism(), &w).unwrap().is_identity());
    }

    #[test]
    fn basis_swap_moves_line_identities() {
        let (w, _) = window(2, 2);
        let b = &w.backend;
        let l0 = b.acl(&[Element::Vector(SparseVec::basis(2, 0))]).unwrap();
        let l1 = b.acl(&[Element::Vector(SparseVec::basis(2, 1))]).unwrap();
        let f = f_from_alpha(&swap01(2, 2), &w).unwrap();
        assert_eq!(f.apply(&w, &w, &Triple::identity(&l0)).unwrap(), &Triple::identity(&l1));
        assert!(induced_map_is_iso(&swap01(2, 2), &w).unwrap());
    }

    /// Oracle: in GF(4), codes 2 and 3 are x and x+1 with x^2 = x+1, so
    /// squaring swaps them.
    #[test]
    fn frobenius_squares_line_scalars() {
        let (w, _) = window(4, 2);
        let b = &w.backend;
        let e0 = SparseVec::basis(4, 0);
        let l0 = b.acl(&[Element::Vector(e0.clone())]).unwrap();
        let f = f_from_alpha(&frobenius(4, 2), &w).unwrap();
        for (l, sq) in [(1u8, 1u8), (2, 3), (3, 2)] {
            let t = scalar_triple(4, &l0, &e0, &l0, &e0, l);
            assert_eq!(f.apply(&w, &w, &t).unwrap(), &scalar_triple(4, &l0, &e0, &l0, &e0, sq));
        }
        assert!(induced_map_is_iso(&frobenius(4, 2), &w).unwrap());
    }

    #[test]
    fn round_trip_and_functoriality() {
        let mut r = rng(11);
        for q in [2u8, 4] {
            let (w, _) = window(q, 2);
            for _ in 0..5 {
                let h = Automorphism::Vector(random_semilinear(q, 2, &mut r).unwrap());
                let g = random_automorphism(&w.backend, 2, &mut r).unwrap();
                assert!(round_trip(&h, &g, &w).unwrap());
                let h2 = Automorphism::Vector(random_semilinear(q, 2, &mut r).unwrap());
                assert!(check_functoriality(&h, &h2, &w).unwrap());
                assert!(check_functoriality(&h, &h.inverse(), &w).unwrap());
            }
        }
    }

    #[test]
    fn identity_window_map_reproduces_g() {
        let (w, _) = window(3, 2);
        let mut r = rng(2);
        let g = random_automorphism(&w.backend, 2, &mut r).unwrap();
        let got = alpha_from_f(&WindowMap::identity(&w), &g, &w).unwrap();
        assert_eq!(got, g.restrict(got.domain()));
    }

    #[test]
    fn inconsistent_window_map_is_rejected() {
        // two lines' identities both land on line 1, one of them scaled
        let (w, _) = window(3, 2);
        let b = &w.backend;
        let e0 = SparseVec::basis(3, 0);
        let e1 = SparseVec::basis(3, 1);
        let l0 = b.acl(&[Element::Vector(e0.clone())]).unwrap();
        let l1 = b.acl(&[Element::Vector(e1.clone())]).unwrap();
        let mut images: Vec<usize> = (0..w.len()).collect();
        images[w.index_of(&Triple::identity(&l0)).unwrap()] = w.index_of(&scalar_triple(3, &l1, &e1, &l1, &e1, 2)).unwrap();
        let f = WindowMap { images };
        let g = b.identity_automorphism();
        assert!(matches!(alpha_from_f(&f, &g, &w), Err(Error::NotAnIsomorphism(_))));
    }

    #[test]
    fn phi_examples() {
        let (_, geo) = window(3, 2);
        let scalar = Automorphism::Vector(Semilinear::linear(scale_identity(3, 2, 2)));
        assert!(phi_map(&scalar, &geo).unwrap().is_identity());
        let swap = phi_map(&swap01(3, 2), &geo).unwrap();
        assert_eq!(swap.map.iter().enumerate().filter(|(i, j)| i != *j).count(), 2);
    }

    #[test]
    fn pi_of_frobenius_on_gf4_plane() {
        let (w, geo) = window(4, 2);
        let pi = pi_map(&f_from_alpha(&frobenius(4, 2), &w).unwrap(), &w, &geo).unwrap();
        // lines through e0, e1 and (1,1) are Frobenius stable; (1,x), (1,x+1) swap
        assert_eq!(pi.map.iter().enumerate().filter(|(i, j)| i != *j).count(), 2);
        assert_eq!(pi.map, phi_map(&frobenius(4, 2), &geo).unwrap().map);
    }

    /// Applies `sigma` to the scalar of every line-to-line triple.
    fn scalar_twist(w: &ExpandedWindow, sigma: &[u8]) -> WindowMap {
        let q = w.backend.q().unwrap();
        WindowMap::from_fn(w, w, |t| {
            let (e, e2) = (line_generator(w, &t.dom), line_generator(w, &t.cod));
            let l = read_scalar(t, &e, &e2)?;
            Ok(scalar_triple(q, &t.dom, &e, &t.cod, &e2, sigma[l as usize - 1]))
        })
        .unwrap()
    }

    #[test]
    fn kernel_of_scalar_squaring_twist() {
        let (w, _) = window(4, 2);
        let k = kernel_extract(&WindowMap::identity(&w), &w).unwrap();
        assert_eq!(k.shared(), Some(&vec![1, 2, 3]));
        assert!(k.fixes_all);
        // squaring in GF(4): codes 2 and 3 are x and x+1 with x^2 = x+1
        let f = scalar_twist(&w, &[1, 3, 2]);
        assert!(iso_check(&w, &w, &f).unwrap().holds);
        let k = kernel_extract(&f, &w).unwrap();
        assert_eq!(k.shared(), Some(&vec![1, 3, 2]));
        assert!(k.fixes_all);
    }

    #[test]
    fn kernel_of_frobenius_is_squaring() {
        let (w, _) = window(4, 2);
        let k = kernel_extract(&f_from_alpha(&frobenius(4, 2), &w).unwrap(), &w).unwrap();
        assert_eq!(k.tables, vec![vec![1, 3, 2], vec![1, 3, 2]]);
        // (1, x) and (1, x+1) trade places
        assert!(!k.fixes_all);
        assert!(matches!(kernel_extract(&f_from_alpha(&swap01(4, 2), &w).unwrap(), &w), Err(Error::Precondition(_))));
    }

    #[test]
    fn gf2_kernel_is_trivial() {
        let (w, _) = window(2, 3);
        let k = kernel_extract(&WindowMap::identity(&w), &w).unwrap();
        assert_eq!(k.shared(), Some(&vec![1]));
    }

    #[test]
    fn non_multiplicative_twist_is_rejected() {
        // GF(7): swapping 2 and 4 alone breaks 3 * 3 = 2
        let (w, _) = window(7, 2);
        let f = scalar_twist(&w, &[1, 4, 3, 2, 5, 6]);
        assert!(matches!(kernel_extract(&f, &w), Err(Error::NotAnIsomorphism(_))));
    }

    /// Oracle: a semilinear map fixing every line of GF(q)^n (n >= 2) is
    /// scalar.
    #[test]
    fn line_fixing_maps_are_scalar() {
        let (w, geo) = window(4, 2);
        let maps = geometry_kernel_maps(4, 2, &geo).unwrap();
        assert_eq!(maps.len(), 3);
        for s in maps {
            let k = kernel_extract(&f_from_alpha(&Automorphism::Vector(s), &w).unwrap(), &w).unwrap();
            assert_eq!(k.shared(), Some(&vec![1, 2, 3]));
        }
    }

    /// Oracle: |Aut(Z/3)| = 2 bounds the tables over all 18 basis-fixing
    /// maps of GF(4)^2.
    #[test]
    fn realizable_kernel_tables_on_gf4() {
        let (w, _) = window(4, 2);
        let maps = basis_fixing_maps(4, 2).unwrap();
        assert_eq!(maps.len(), 18);
        let mut tables = std::collections::BTreeSet::new();
        for s in maps {
            let k = kernel_extract(&f_from_alpha(&Automorphism::Vector(s), &w).unwrap(), &w).unwrap();
            tables.insert(k.shared().unwrap().clone());
        }
        assert_eq!(tables.into_iter().collect::<Vec<_>>(), vec![vec![1, 2, 3], vec![1, 3, 2]]);
    }

    #[test]
    fn semilinear_search_examples() {
        let (w, geo) = window(4, 3);
        let id = GeometryAutomorphism::identity(geo.len());
        let s = semilinear_search(&id, &geo, 3).unwrap().unwrap();
        assert_eq!(s, Semilinear::identity(4, 3));
        let swap = phi_map(&swap01(4, 3), &geo).unwrap();
        let s = semilinear_search(&swap, &geo, 3).unwrap().unwrap();
        assert_eq!(Automorphism::Vector(s), swap01(4, 3));
        // Frobenius with identity matrix moves lines, so the search must
        // find exponent 1
        let frob = phi_map(&frobenius(4, 3), &geo).unwrap();
        let s = semilinear_search(&frob, &geo, 3).unwrap().unwrap();
        assert_eq!(s.frobenius, 1);
        assert!(s.matrix.is_identity());
        let _ = w;
    }

    #[test]
    fn diagram_commutes_on_samples() {
        let mut r = rng(5);
        for q in [2u8, 3, 4] {
            let (w, geo) = window(q, 3);
            let samples: Vec<Automorphism> = (0..4).map(|_| Automorphism::Vector(random_semilinear(q, 3, &mut r).unwrap())).collect();
            let sections: Vec<GeometryAutomorphism> = samples.iter().map(|h| phi_map(h, &geo).unwrap()).collect();
            let rep = diagram_check(&samples, &sections, &w, &geo).unwrap();
            assert!(rep.holds(), "{rep:?}");
            for rec in homomorphism_records(&samples, &w, &geo).unwrap() {
                assert!(rec.law_holds, "{}", rec.name);
            }
        }
    }

    #[test]
    fn phi_kernel_is_scalar_on_small_spaces() {
        let (_, geo) = window(3, 2);
        assert_eq!(phi_kernel_is_scalar(3, 2, &geo).unwrap(), (2, true));
        let (_, geo) = window(2, 3);
        assert_eq!(phi_kernel_is_scalar(2, 3, &geo).unwrap(), (1, true));
    }
}
