//! Sparse vectors over GF(q), reduced echelon spans, and dense matrices.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Gf;

/// A vector in the countable-dimensional space over GF(q), stored as
/// basis index -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVec {
    q: u8,
    coords: BTreeMap<u32, u8>,
}

impl SparseVec {
    pub fn zero(q: u8) -> Self {
        SparseVec { q, coords: BTreeMap::new() }
    }

    /// The basis vector e_i.
    pub fn basis(q: u8, i: u32) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(i, 1);
        SparseVec { q, coords }
    }

    pub fn from_pairs(q: u8, pairs: impl IntoIterator<Item = (u32, u8)>) -> Result<Self> {
        let f = Gf::get(q)?;
        let mut v = SparseVec::zero(q);
        for (i, c) in pairs {
            if c >= q {
                return Err(Error::Invalid(format!("coefficient {c} not in GF({q})")));
            }
            let old = v.get(i);
            v.set(i, f.add(old, c));
        }
        Ok(v)
    }

    pub fn from_dense(q: u8, dense: &[u8]) -> Self {
        let coords = dense.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i as u32, c)).collect();
        SparseVec { q, coords }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn coords(&self) -> &BTreeMap<u32, u8> {
        &self.coords
    }

    pub fn get(&self, i: u32) -> u8 {
        self.coords.get(&i).copied().unwrap_or(0)
    }

    fn set(&mut self, i: u32, c: u8) {
        if c == 0 {
            self.coords.remove(&i);
        } else {
            self.coords.insert(i, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.coords.keys().next_back().copied()
    }

    /// Number of coordinates needed to hold the vector densely.
    pub fn extent(&self) -> usize {
        self.max_index().map_or(0, |m| m as usize + 1)
    }

    pub fn dense(&self, n: usize) -> Vec<u8> {
        let mut d = vec![0u8; n];
        for (&i, &c) in &self.coords {
            d[i as usize] = c;
        }
        d
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(1, other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let f = Gf::get(self.q).unwrap();
        self.axpy(f.neg(1), other)
    }

    /// self + c * other
    pub fn axpy(&self, c: u8, other: &SparseVec) -> SparseVec {
        let f = Gf::get(self.q).unwrap();
        let mut out = self.clone();
        if c == 0 {
            return out;
        }
        for (&i, &x) in &other.coords {
            let v = f.add(out.get(i), f.mul(c, x));
            out.set(i, v);
        }
        out
    }

    pub fn scale(&self, c: u8) -> SparseVec {
        let f = Gf::get(self.q).unwrap();
        if c == 0 {
            return SparseVec::zero(self.q);
        }
        let coords = self.coords.iter().map(|(&i, &x)| (i, f.mul(c, x))).collect();
        SparseVec { q: self.q, coords }
    }

    /// Apply x -> x^(p^e) to every coordinate.
    pub fn frobenius(&self, e: u32) -> SparseVec {
        let f = Gf::get(self.q).unwrap();
        let coords = self.coords.iter().map(|(&i, &x)| (i, f.frobenius(x, e))).collect();
        SparseVec { q: self.q, coords }
    }

    /// Scale so the lowest-index coefficient is 1; zero stays zero.
    pub fn normalized(&self) -> SparseVec {
        let f = Gf::get(self.q).unwrap();
        match self.coords.values().next() {
            Some(&c) => self.scale(f.inv(c)),
            None => self.clone(),
        }
    }
}

impl Ord for SparseVec {
    /// Canonical enumeration order: by highest support index (zero first),
    /// then lexicographically by coefficients from index 0 upwards.
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |v: &SparseVec| v.max_index().map_or(-1i64, |m| m as i64);
        key(self).cmp(&key(other)).then_with(|| {
            let n = self.extent();
            self.dense(n).cmp(&other.dense(n))
        })
    }
}

impl PartialOrd for SparseVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All vectors supported on the first `n` coordinates, in canonical order.
pub fn window_vectors(q: u8, n: usize) -> Vec<SparseVec> {
    let mut out = vec![SparseVec::zero(q)];
    for top in 0..n {
        // vectors whose highest nonzero coordinate is `top`
        let lower = (q as usize).pow(top as u32);
        for lead in 1..q {
            for code in 0..lower {
                let mut d = vec![0u8; top + 1];
                let mut c = code;
                for slot in d.iter_mut().take(top) {
                    *slot = (c % q as usize) as u8;
                    c /= q as usize;
                }
                d[top] = lead;
                out.push(SparseVec::from_dense(q, &d));
            }
        }
    }
    out.sort();
    out
}

/// A subspace held as a reduced row echelon basis keyed by pivot, where
/// each pivot is the row's highest index and is cleared in all other rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    q: u8,
    rows: BTreeMap<u32, SparseVec>,
}

impl Span {
    pub fn new(q: u8) -> Self {
        Span { q, rows: BTreeMap::new() }
    }

    pub fn of<'a>(q: u8, vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut s = Span::new(q);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows.values().cloned().collect()
    }

    pub fn extent(&self) -> usize {
        self.rows.keys().next_back().map_or(0, |&m| m as usize + 1)
    }

    /// Residue of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let f = Gf::get(self.q).unwrap();
        let mut r = v.clone();
        for (&p, row) in self.rows.iter().rev() {
            let c = r.get(p);
            if c != 0 {
                r = r.axpy(f.neg(c), row);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let f = Gf::get(self.q).unwrap();
        let r = self.reduce(v);
        let Some(p) = r.max_index() else { return false };
        let r = r.scale(f.inv(r.get(p)));
        for row in self.rows.values_mut() {
            let c = row.get(p);
            if c != 0 {
                *row = row.axpy(f.neg(c), &r);
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        other.rows.values().all(|v| self.contains(v))
    }

    pub fn join(&self, other: &Span) -> Span {
        let mut s = self.clone();
        for v in other.rows.values() {
            s.insert(v);
        }
        s
    }

    /// Intersection via the kernel of the stacked bases.
    pub fn meet(&self, other: &Span) -> Span {
        // Rows (u, u) for u in self and (w, 0) for w in other, in a doubled
        // coordinate system; echelon rows with zero first half give the meet.
        let n = self.extent().max(other.extent()) as u32;
        let lift = |v: &SparseVec, keep: bool| {
            let mut pairs: Vec<(u32, u8)> = v.coords.iter().map(|(&i, &c)| (i + n, c)).collect();
            if keep {
                pairs.extend(v.coords.iter().map(|(&i, &c)| (i, c)));
            }
            SparseVec::from_pairs(self.q, pairs).unwrap()
        };
        let mut big = Span::new(self.q);
        for u in self.rows.values() {
            big.insert(&lift(u, true));
        }
        for w in other.rows.values() {
            big.insert(&lift(w, false));
        }
        let mut out = Span::new(self.q);
        for row in big.rows.values() {
            if row.max_index().is_some_and(|m| m < n) {
                out.insert(row);
            }
        }
        out
    }

    /// Every vector of the span, in canonical order.
    pub fn elements(&self) -> Vec<SparseVec> {
        let basis = self.basis();
        let mut out = vec![SparseVec::zero(self.q)];
        for b in &basis {
            let mut next = Vec::with_capacity(out.len() * self.q as usize);
            for v in &out {
                for c in 0..self.q {
                    next.push(v.axpy(c, b));
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// All subspaces of this span, sorted by dimension then basis.
    pub fn subspaces(&self) -> Vec<Span> {
        let elems = self.elements();
        let mut seen = std::collections::BTreeSet::new();
        let mut layer = vec![Span::new(self.q)];
        seen.insert(Span::new(self.q).key());
        let mut out = layer.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for s in &layer {
                for v in &elems {
                    if s.contains(v) {
                        continue;
                    }
                    let mut t = s.clone();
                    t.insert(v);
                    if seen.insert(t.key()) {
                        next.push(t);
                    }
                }
            }
            next.sort_by_key(|s| s.key());
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Canonical key: dimension then the echelon basis.
    pub fn key(&self) -> (usize, Vec<SparseVec>) {
        (self.dim(), self.basis())
    }

    /// Basis vectors of `self` extending a basis of `sub` (assumed contained).
    pub fn complement_basis(&self, sub: &Span) -> Vec<SparseVec> {
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for v in self.rows.values() {
            if acc.insert(v) {
                out.push(v.clone());
            }
        }
        out
    }
}

/// Rank of a list of vectors.
pub fn rank(q: u8, vs: &[SparseVec]) -> usize {
    Span::of(q, vs).dim()
}

/// Dense square or rectangular matrix over GF(q), row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    pub q: u8,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl Matrix {
    pub fn zero(q: u8, rows: usize, cols: usize) -> Self {
        Matrix { q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(q: u8, n: usize) -> Self {
        let mut m = Matrix::zero(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(q: u8, rows: &[Vec<u8>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|&x| x >= q) {
            return Err(Error::Invalid(format!("matrix entry outside GF({q})")));
        }
        Ok(Matrix { q, rows: r, cols: c, data: rows.concat() })
    }

    /// Matrix whose j-th column is `cols[j]` densified to `n` rows.
    pub fn from_columns(q: u8, n: usize, cols: &[SparseVec]) -> Self {
        let mut m = Matrix::zero(q, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (&i, &x) in c.coords() {
                m.set(i as usize, j, x);
            }
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> SparseVec {
        let d: Vec<u8> = (0..self.rows).map(|i| self.get(i, j)).collect();
        SparseVec::from_dense(self.q, &d)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let f = Gf::get(self.q).unwrap();
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zero(self.q, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Apply to a sparse vector; coordinates at or beyond `cols` pass through.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let f = Gf::get(self.q).unwrap();
        let mut out = vec![0u8; self.rows];
        let mut tail = Vec::new();
        for (&j, &c) in v.coords() {
            let j = j as usize;
            if j >= self.cols {
                tail.push((j as u32, c));
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(self.get(i, j), c));
            }
        }
        let mut r = SparseVec::from_dense(self.q, &out);
        for (j, c) in tail {
            r = r.axpy(c, &SparseVec::basis(self.q, j));
        }
        r
    }

    pub fn entrywise_frobenius(&self, e: u32) -> Matrix {
        let f = Gf::get(self.q).unwrap();
        Matrix { data: self.data.iter().map(|&x| f.frobenius(x, e)).collect(), ..self.clone() }
    }

    /// Square matrix padded with identity to size n >= rows.
    pub fn padded(&self, n: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        if n <= self.rows {
            return self.clone();
        }
        let mut m = Matrix::identity(self.q, n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    /// Gauss-Jordan inverse; None if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let f = Gf::get(self.q).unwrap();
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.q, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| a.get(r, col) != 0)?;
            if piv != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(piv, j));
                    a.set(col, j, y);
                    a.set(piv, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(piv, j));
                    inv.set(col, j, y);
                    inv.set(piv, j, x);
                }
            }
            let s = f.inv(a.get(col, col));
            for j in 0..n {
                a.set(col, j, f.mul(s, a.get(col, j)));
                inv.set(col, j, f.mul(s, inv.get(col, j)));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let c = a.get(r, col);
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(c, a.get(col, j))));
                    inv.set(r, j, f.sub(inv.get(r, j), f.mul(c, inv.get(col, j))));
                }
            }
        }
        Some(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.q, self.rows)
    }
}

/// Every invertible n x n matrix over GF(q), by brute force over all
/// q^(n*n) matrices. Intended for small ambient windows only.
pub fn general_linear(q: u8, n: usize) -> Vec<Matrix> {
    let total = (q as u64).pow((n * n) as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let data: Vec<u8> = (0..n * n)
            .map(|_| {
                let x = (c % q as u64) as u8;
                c /= q as u64;
                x
            })
            .collect();
        let m = Matrix { q, rows: n, cols: n, data };
        if m.inverse().is_some() {
            out.push(m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: u8, d: &[u8]) -> SparseVec {
        SparseVec::from_dense(q, d)
    }

    #[test]
    fn canonical_order_is_max_index_then_coefficients() {
        let w = window_vectors(2, 2);
        assert_eq!(w, vec![v(2, &[]), v(2, &[1]), v(2, &[0, 1]), v(2, &[1, 1])]);
        assert_eq!(window_vectors(3, 3).len(), 27);
    }

    #[test]
    fn span_of_two_basis_vectors_has_four_elements() {
        let s = Span::of(2, &[SparseVec::basis(2, 0), SparseVec::basis(2, 1)]);
        assert_eq!(s.elements(), vec![v(2, &[]), v(2, &[1]), v(2, &[0, 1]), v(2, &[1, 1])]);
    }

    #[test]
    fn meet_matches_brute_force_intersection() {
        for q in [2u8, 3] {
            let whole = Span::of(q, &window_vectors(q, 3));
            let subs = whole.subspaces();
            for a in &subs {
                for b in &subs {
                    let brute: Vec<SparseVec> =
                        a.elements().into_iter().filter(|x| b.contains(x)).collect();
                    assert_eq!(a.meet(b).elements(), brute);
                }
            }
        }
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // GF(2)^3: 1 + 7 + 7 + 1; GF(3)^2: 1 + 4 + 1; GF(3)^4: 1 + 40 + 130 + 40 + 1
        let count = |q: u8, n: usize| Span::of(q, &window_vectors(q, n)).subspaces().len();
        assert_eq!(count(2, 3), 16);
        assert_eq!(count(3, 2), 6);
        assert_eq!(count(3, 4), 212);
    }

    #[test]
    fn general_linear_orders() {
        assert_eq!(general_linear(2, 2).len(), 6);
        assert_eq!(general_linear(3, 2).len(), 48);
        assert_eq!(general_linear(2, 3).len(), 168);
        for m in general_linear(3, 2) {
            assert!(m.mul(&m.inverse().unwrap()).is_identity());
        }
    }

    #[test]
    fn apply_passes_high_coordinates_through() {
        let m = Matrix::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.apply(&v(2, &[1, 0, 1])), v(2, &[0, 1, 1]));
    }
}
