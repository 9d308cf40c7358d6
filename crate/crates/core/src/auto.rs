//! Finitely supported automorphisms of the backends, plus semilinear maps
//! of the vector space (which normalize its automorphism group).

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::element::{Element, PartialMap};
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::perm::Perm;
use crate::vector::{Matrix, SparseVec};

/// v -> M * tau(v), where tau raises every coordinate to the p^frobenius
/// power and M is identity on coordinates at or beyond its size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Semilinear {
    pub frobenius: u32,
    pub matrix: Matrix,
}

impl Semilinear {
    pub fn linear(matrix: Matrix) -> Self {
        Semilinear { frobenius: 0, matrix }
    }

    pub fn identity(q: u8, n: usize) -> Self {
        Semilinear::linear(Matrix::identity(q, n))
    }

    pub fn q(&self) -> u8 {
        self.matrix.q
    }

    pub fn size(&self) -> usize {
        self.matrix.rows
    }

    fn degree(&self) -> u32 {
        Gf::get(self.q()).unwrap().degree as u32
    }

    pub fn is_linear(&self) -> bool {
        self.frobenius % self.degree() == 0
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        self.matrix.apply(&v.frobenius(self.frobenius))
    }

    /// self after other.
    pub fn after(&self, other: &Semilinear) -> Semilinear {
        let n = self.size().max(other.size());
        let a = self.matrix.padded(n);
        let b = other.matrix.padded(n).entrywise_frobenius(self.frobenius);
        Semilinear { frobenius: (self.frobenius + other.frobenius) % self.degree(), matrix: a.mul(&b) }
    }

    pub fn inverse(&self) -> Semilinear {
        let d = self.degree();
        let back = (d - self.frobenius % d) % d;
        let inv = self.matrix.inverse().expect("semilinear maps are invertible");
        Semilinear { frobenius: back, matrix: inv.entrywise_frobenius(back) }
    }

    pub fn to_json(&self) -> Value {
        json!({"frobenius": self.frobenius, "matrix": self.matrix.to_rows()})
    }

    pub fn from_json(q: u8, v: &Value) -> Result<Self> {
        let e = v.get("frobenius").and_then(Value::as_u64).ok_or_else(|| Error::Invalid("missing frobenius".into()))?;
        let rows: Vec<Vec<u8>> =
            serde_json::from_value(v.get("matrix").cloned().unwrap_or(Value::Null)).map_err(|e| Error::Invalid(e.to_string()))?;
        let m = Matrix::from_rows(q, &rows)?;
        if m.rows != m.cols || m.inverse().is_none() {
            return Err(Error::Invalid("semilinear matrix must be square and invertible".into()));
        }
        Ok(Semilinear { frobenius: e as u32, matrix: m })
    }
}

/// A total automorphism of a backend structure, described finitely.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Automorphism {
    Vector(Semilinear),
    /// Permutation of atoms moving only the listed points.
    Atoms(BTreeMap<u32, u32>),
    Points(Perm),
}

impl Automorphism {
    pub fn apply(&self, x: &Element) -> Element {
        match (self, x) {
            (Automorphism::Vector(s), Element::Vector(v)) => Element::Vector(s.apply(v)),
            (Automorphism::Atoms(m), Element::Atom(a)) => Element::Atom(*m.get(a).unwrap_or(a)),
            (Automorphism::Points(p), Element::Point(i)) => Element::Point(p.apply(*i)),
            _ => panic!("automorphism applied to an element of another backend"),
        }
    }

    pub fn apply_all<'a>(&self, xs: impl IntoIterator<Item = &'a Element>) -> Vec<Element> {
        let mut v: Vec<Element> = xs.into_iter().map(|x| self.apply(x)).collect();
        v.sort();
        v
    }

    pub fn restrict<'a>(&self, xs: impl IntoIterator<Item = &'a Element>) -> PartialMap {
        PartialMap::from_pairs(xs.into_iter().map(|x| (x.clone(), self.apply(x)))).expect("automorphisms are injective")
    }

    /// self after other.
    pub fn after(&self, other: &Automorphism) -> Automorphism {
        match (self, other) {
            (Automorphism::Vector(a), Automorphism::Vector(b)) => Automorphism::Vector(a.after(b)),
            (Automorphism::Atoms(a), Automorphism::Atoms(b)) => {
                let mut m = BTreeMap::new();
                for &x in a.keys().chain(b.keys()) {
                    let y = *b.get(&x).unwrap_or(&x);
                    let z = *a.get(&y).unwrap_or(&y);
                    if z != x {
                        m.insert(x, z);
                    }
                }
                Automorphism::Atoms(m)
            }
            (Automorphism::Points(a), Automorphism::Points(b)) => Automorphism::Points(a.after(b)),
            _ => panic!("composing automorphisms of different backends"),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        match self {
            Automorphism::Vector(s) => Automorphism::Vector(s.inverse()),
            Automorphism::Atoms(m) => Automorphism::Atoms(m.iter().map(|(&a, &b)| (b, a)).collect()),
            Automorphism::Points(p) => Automorphism::Points(p.inverse()),
        }
    }

    /// Conjugate of g by self: self * g * self^-1.
    pub fn conjugate(&self, g: &Automorphism) -> Automorphism {
        self.after(g).after(&self.inverse())
    }

    pub fn to_json(&self) -> Value {
        match self {
            Automorphism::Vector(s) => s.to_json(),
            Automorphism::Atoms(m) => json!({"atoms": m.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()}),
            Automorphism::Points(p) => json!({"points": p.0}),
        }
    }

    /// Parses any of the three serializations; `q` is needed for matrices.
    pub fn from_json(q: Option<u8>, v: &Value) -> Result<Self> {
        if let Some(atoms) = v.get("atoms") {
            let pairs: Vec<(u32, u32)> = serde_json::from_value(atoms.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
            let m: BTreeMap<u32, u32> = pairs.into_iter().filter(|(a, b)| a != b).collect();
            let mut img: Vec<u32> = m.values().copied().collect();
            img.sort_unstable();
            if img != m.keys().copied().collect::<Vec<_>>() {
                return Err(Error::Invalid("atom map is not a permutation".into()));
            }
            return Ok(Automorphism::Atoms(m));
        }
        if let Some(points) = v.get("points") {
            let p: Vec<u32> = serde_json::from_value(points.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if sorted != (0..p.len() as u32).collect::<Vec<_>>() {
                return Err(Error::Invalid("point map is not a permutation".into()));
            }
            return Ok(Automorphism::Points(Perm(p)));
        }
        let q = q.ok_or_else(|| Error::Invalid("matrix automorphism needs a field".into()))?;
        Ok(Automorphism::Vector(Semilinear::from_json(q, v)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semilinear_composition_and_inverse() {
        let q = 4;
        let m = Matrix::from_rows(q, &[vec![1, 2], vec![0, 3]]).unwrap();
        let a = Semilinear { frobenius: 1, matrix: m };
        let b = Semilinear { frobenius: 1, matrix: Matrix::from_rows(q, &[vec![0, 1], vec![1, 1]]).unwrap() };
        let v = SparseVec::from_dense(q, &[2, 3, 1]);
        assert_eq!(a.after(&b).apply(&v), a.apply(&b.apply(&v)));
        assert_eq!(a.inverse().apply(&a.apply(&v)), v);
        assert_eq!(a.after(&a.inverse()), Semilinear::identity(q, 2));
    }

    #[test]
    fn semilinear_law_holds_for_frobenius() {
        // f(c1 v1 + c2 v2) = tau(c1) f(v1) + tau(c2) f(v2)
        let f = Gf::get(4).unwrap();
        let s = Semilinear { frobenius: 1, matrix: Matrix::identity(4, 2) };
        let v1 = SparseVec::from_dense(4, &[1, 2]);
        let v2 = SparseVec::from_dense(4, &[3, 0]);
        for c1 in f.elements() {
            for c2 in f.elements() {
                let lhs = s.apply(&v1.scale(c1).add(&v2.scale(c2)));
                let rhs = s.apply(&v1).scale(f.frobenius(c1, 1)).add(&s.apply(&v2).scale(f.frobenius(c2, 1)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn atom_permutations_compose() {
        let a = Automorphism::Atoms(BTreeMap::from([(1, 2), (2, 1)]));
        let b = Automorphism::Atoms(BTreeMap::from([(2, 3), (3, 2)]));
        let ab = a.after(&b);
        assert_eq!(ab.apply(&Element::Atom(2)), Element::Atom(3));
        assert_eq!(ab.apply(&Element::Atom(3)), Element::Atom(1));
        assert_eq!(ab.after(&ab.inverse()), Automorphism::Atoms(BTreeMap::new()));
    }

    #[test]
    fn json_round_trip() {
        let cases = [
            Automorphism::Atoms(BTreeMap::from([(1, 2), (2, 1)])),
            Automorphism::Points(Perm(vec![1, 0, 2])),
            Automorphism::Vector(Semilinear { frobenius: 1, matrix: Matrix::from_rows(4, &[vec![0, 1], vec![1, 0]]).unwrap() }),
        ];
        for a in cases {
            assert_eq!(Automorphism::from_json(Some(4), &a.to_json()).unwrap(), a);
        }
        assert!(Automorphism::from_json(None, &json!({"atoms": [[1, 2]]})).is_err());
    }
}
