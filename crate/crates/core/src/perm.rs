//! Permutations of 0..n, generator closure, subgroup lattices and
//! multiplication tables of small groups.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    /// `self` after `other`: i -> self(other(i)).
    pub fn after(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn fixes(&self, i: u32) -> bool {
        self.apply(i) == i
    }

    /// Image of a set of points, sorted.
    pub fn image(&self, set: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = set.iter().map(|&i| self.apply(i)).collect();
        v.sort_unstable();
        v
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.clone();
        while !p.is_identity() {
            p = self.after(&p);
            k += 1;
        }
        k
    }
}

/// Breadth-first closure of `gens` under multiplication, with an order cap.
pub fn closure_by<T, F>(identity: T, gens: &[T], mul: F, cap: usize) -> Result<Vec<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut seen: HashSet<T> = HashSet::new();
    let mut out = vec![identity.clone()];
    seen.insert(identity);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let h = mul(&out[i], g);
            if seen.insert(h.clone()) {
                if out.len() >= cap {
                    return Err(Error::SizeBound { what: "group order".into(), size: out.len() as u64 + 1, bound: cap as u64 });
                }
                out.push(h);
                queue.push_back(out.len() - 1);
            }
        }
    }
    Ok(out)
}

/// All elements of the group generated by `gens` acting on 0..n, sorted.
pub fn closure(n: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let mut els = closure_by(Perm::identity(n), gens, |a, b| a.after(b), cap)?;
    els.sort();
    Ok(els)
}

/// An explicitly enumerated finite permutation group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    pub degree: usize,
    /// Sorted element list.
    pub elements: Vec<Perm>,
}

impl PermGroup {
    pub fn generated(degree: usize, gens: &[Perm], cap: usize) -> Result<Self> {
        Ok(PermGroup { degree, elements: closure(degree, gens, cap)? })
    }

    pub fn from_elements(degree: usize, mut elements: Vec<Perm>) -> Self {
        elements.sort();
        elements.dedup();
        PermGroup { degree, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    /// Literal normality test: self <= other and closed under conjugation.
    pub fn is_normal_in(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other)
            && other.elements.iter().all(|g| {
                let gi = g.inverse();
                self.elements.iter().all(|h| self.contains(&g.after(h).after(&gi)))
            })
    }

    /// A small generating set, picked greedily in element order.
    pub fn generators(&self) -> Vec<Perm> {
        let mut gens: Vec<Perm> = Vec::new();
        let mut span: HashSet<Perm> = HashSet::from([Perm::identity(self.degree)]);
        for p in &self.elements {
            if span.contains(p) {
                continue;
            }
            gens.push(p.clone());
            span = closure(self.degree, &gens, usize::MAX).expect("uncapped").into_iter().collect();
            if span.len() == self.elements.len() {
                break;
            }
        }
        gens
    }

    pub fn table(&self) -> Table {
        let index: HashMap<&Perm, usize> = self.elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = self.elements.len();
        let mut mul = vec![vec![0usize; n]; n];
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                mul[i][j] = index[&a.after(b)];
            }
        }
        let identity = index[&Perm::identity(self.degree)];
        Table { mul, identity }
    }
}

/// Every subgroup of `group`, by cyclic extension: starting from the
/// trivial group, repeatedly adjoin one element to a known subgroup.
/// Subgroups are deduplicated by their sorted element lists.
pub fn subgroups(group: &PermGroup, cap: usize) -> Result<Vec<PermGroup>> {
    if group.order() > cap {
        return Err(Error::SizeBound { what: "group order".into(), size: group.order() as u64, bound: cap as u64 });
    }
    let n = group.degree;
    // one representative per cyclic subgroup
    let mut cyclic_seen: BTreeSet<Vec<Perm>> = BTreeSet::new();
    let mut reps: Vec<Perm> = Vec::new();
    for g in &group.elements {
        if g.is_identity() {
            continue;
        }
        let c = closure(n, std::slice::from_ref(g), usize::MAX)?;
        if cyclic_seen.insert(c) {
            reps.push(g.clone());
        }
    }
    let trivial = vec![Perm::identity(n)];
    let mut seen: BTreeSet<Vec<Perm>> = BTreeSet::from([trivial.clone()]);
    let mut found: Vec<(Vec<Perm>, Vec<Perm>)> = vec![(trivial, Vec::new())];
    let mut i = 0;
    while i < found.len() {
        let (els, gens) = found[i].clone();
        let members: HashSet<&Perm> = els.iter().collect();
        for g in &reps {
            if members.contains(g) {
                continue;
            }
            let mut ext = gens.clone();
            ext.push(g.clone());
            let sub = closure(n, &ext, group.order())?;
            if seen.insert(sub.clone()) {
                found.push((sub, ext));
            }
        }
        i += 1;
    }
    let mut out: Vec<PermGroup> = found.into_iter().map(|(e, _)| PermGroup { degree: n, elements: e }).collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(out)
}

/// Multiplication table of a finite group on indices 0..order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl Table {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != self.identity {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span: BTreeSet<usize> = BTreeSet::from([self.identity]);
        for a in 0..self.order() {
            if span.contains(&a) {
                continue;
            }
            gens.push(a);
            span = self.span(&gens);
        }
        gens
    }

    fn span(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul[x][g];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Whether the two tables describe isomorphic groups; searches images
    /// of a generating set and checks the induced map is a bijective
    /// homomorphism.
    pub fn isomorphic(&self, other: &Table) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let mut orders_a: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        let mut orders_b: Vec<usize> = (0..other.order()).map(|a| other.element_order(a)).collect();
        orders_a.sort_unstable();
        orders_b.sort_unstable();
        if orders_a != orders_b {
            return false;
        }
        let gens = self.generators();
        let mut images = vec![0usize; gens.len()];
        self.search_images(other, &gens, &mut images, 0)
    }

    fn search_images(&self, other: &Table, gens: &[usize], images: &mut Vec<usize>, k: usize) -> bool {
        if k == gens.len() {
            return self.extends_to_iso(other, gens, images);
        }
        let want = self.element_order(gens[k]);
        for b in 0..other.order() {
            if other.element_order(b) != want {
                continue;
            }
            images[k] = b;
            if self.search_images(other, gens, images, k + 1) {
                return true;
            }
        }
        false
    }

    fn extends_to_iso(&self, other: &Table, gens: &[usize], images: &[usize]) -> bool {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[self.identity] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (g, &gi) in gens.iter().zip(images) {
                let y = self.mul[x][*g];
                let img = other.mul[map[x]][gi];
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push_back(y);
                } else if map[y] != img {
                    return false;
                }
            }
        }
        let hit: BTreeSet<usize> = map.iter().copied().collect();
        if hit.len() != n || hit.contains(&usize::MAX) {
            return false;
        }
        (0..n).all(|a| (0..n).all(|b| map[self.mul[a][b]] == other.mul[map[a]][map[b]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        if n > 1 {
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(Perm(t));
            gens.push(Perm((0..n as u32).map(|i| (i + 1) % n as u32).collect()));
        }
        PermGroup::generated(n, &gens, usize::MAX).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        assert_eq!(sym(3).order(), 6);
        assert_eq!(sym(5).order(), 120);
    }

    #[test]
    fn subgroup_counts_of_small_symmetric_groups() {
        // Known lattice sizes: Sym(3) has 6 subgroups, Sym(4) has 30.
        assert_eq!(subgroups(&sym(3), 5040).unwrap().len(), 6);
        assert_eq!(subgroups(&sym(4), 5040).unwrap().len(), 30);
    }

    #[test]
    fn normal_subgroups_of_sym4() {
        let g = sym(4);
        let normal = subgroups(&g, 5040).unwrap().into_iter().filter(|h| h.is_normal_in(&g)).count();
        // 1, Klein four, Alt(4), Sym(4)
        assert_eq!(normal, 4);
    }

    #[test]
    fn cyclic_and_symmetric_tables_of_order_six_differ() {
        let s3 = sym(3).table();
        let c6 = PermGroup::generated(6, &[Perm(vec![1, 2, 3, 4, 5, 0])], 100).unwrap().table();
        assert!(!s3.isomorphic(&c6));
        assert!(s3.isomorphic(&s3));
        assert!(!s3.is_abelian() && c6.is_abelian());
        // Sym(3) acting on 3 points and on the 6 arrangements agree
        let regular = PermGroup::from_elements(
            6,
            sym(3).elements.iter().map(|g| Perm(sym(3).elements.iter().map(|h| sym(3).elements.binary_search(&g.after(h)).unwrap() as u32).collect())).collect(),
        );
        assert!(regular.table().isomorphic(&s3));
    }

    #[test]
    fn closure_respects_the_cap() {
        assert!(closure(5, &sym(5).generators(), 100).is_err());
    }
}
