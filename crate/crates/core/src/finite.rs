//! Explicit finite relational structures and backtracking automorphism search.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

pub const DEFAULT_SIZE_BOUND: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub tuples: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteStructure {
    pub size: usize,
    #[serde(default)]
    pub relations: Vec<Relation>,
}

impl FiniteStructure {
    pub fn pure(size: usize) -> Self {
        FiniteStructure { size, relations: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::Invalid("structure must have a nonempty domain".into()));
        }
        for r in &self.relations {
            for t in &r.tuples {
                if t.len() != r.arity {
                    return Err(Error::Invalid(format!("tuple {t:?} does not have arity {}", r.arity)));
                }
                if t.iter().any(|&x| x as usize >= self.size) {
                    return Err(Error::Invalid(format!("tuple {t:?} leaves the domain of size {}", self.size)));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let s: FiniteStructure = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }
}

/// Relation tables prepared for pruning during search.
#[derive(Debug)]
pub struct Searcher {
    size: usize,
    sets: Vec<HashSet<Vec<u32>>>,
    /// For each point, the (relation, tuple) pairs mentioning it.
    incident: Vec<Vec<(usize, Vec<u32>)>>,
}

impl Searcher {
    pub fn new(s: &FiniteStructure) -> Self {
        let sets: Vec<HashSet<Vec<u32>>> = s.relations.iter().map(|r| r.tuples.iter().cloned().collect()).collect();
        let mut incident = vec![Vec::new(); s.size];
        for (ri, r) in s.relations.iter().enumerate() {
            for t in &r.tuples {
                let mut pts: Vec<u32> = t.clone();
                pts.sort_unstable();
                pts.dedup();
                for p in pts {
                    incident[p as usize].push((ri, t.clone()));
                }
            }
        }
        Searcher { size: s.size, sets, incident }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Checks every tuple through `x` whose points are all assigned.
    fn consistent_at(&self, map: &[Option<u32>], x: u32) -> bool {
        self.incident[x as usize].iter().all(|(ri, t)| {
            let img: Option<Vec<u32>> = t.iter().map(|&p| map[p as usize]).collect();
            img.is_none_or(|img| self.sets[*ri].contains(&img))
        })
    }

    /// Some automorphism extending the given pairs, if one exists. Points
    /// are assigned in increasing order with the smallest image first.
    pub fn find_extension(&self, pairs: &[(u32, u32)]) -> Option<Perm> {
        let mut map = vec![None; self.size];
        let mut used = vec![false; self.size];
        for &(a, b) in pairs {
            if a as usize >= self.size || b as usize >= self.size {
                return None;
            }
            match map[a as usize] {
                Some(old) if old != b => return None,
                Some(_) => continue,
                None => {}
            }
            if used[b as usize] {
                return None;
            }
            map[a as usize] = Some(b);
            used[b as usize] = true;
        }
        for &(a, _) in pairs {
            if !self.consistent_at(&map, a) {
                return None;
            }
        }
        let mut out = None;
        self.search(&mut map, &mut used, 0, &mut |p| {
            out = Some(p);
            false
        });
        out
    }

    /// Calls `visit` on every automorphism extending the fixed pairs until it
    /// returns false.
    pub fn for_each_extension(&self, pairs: &[(u32, u32)], visit: &mut dyn FnMut(Perm) -> bool) {
        let mut map = vec![None; self.size];
        let mut used = vec![false; self.size];
        for &(a, b) in pairs {
            if map[a as usize].is_some_and(|old| old != b) || (map[a as usize].is_none() && used[b as usize]) {
                return;
            }
            map[a as usize] = Some(b);
            used[b as usize] = true;
        }
        if pairs.iter().any(|&(a, _)| !self.consistent_at(&map, a)) {
            return;
        }
        self.search(&mut map, &mut used, 0, visit);
    }

    fn search(&self, map: &mut Vec<Option<u32>>, used: &mut Vec<bool>, from: usize, visit: &mut dyn FnMut(Perm) -> bool) -> bool {
        let Some(x) = (from..self.size).find(|&i| map[i].is_none()) else {
            return visit(Perm(map.iter().map(|m| m.unwrap()).collect()));
        };
        for y in 0..self.size {
            if used[y] {
                continue;
            }
            map[x] = Some(y as u32);
            used[y] = true;
            if self.consistent_at(map, x as u32) && !self.search(map, used, x + 1, visit) {
                map[x] = None;
                used[y] = false;
                return false;
            }
            map[x] = None;
            used[y] = false;
        }
        true
    }

    /// Strong generators of Aut along the base 0, 1, ..., n-1: for each level
    /// i and each image j of i reachable while fixing 0..i, one witness.
    /// Also returns the group order as the product of basic orbit lengths.
    pub fn strong_generators(&self) -> (Vec<Perm>, u64) {
        let mut gens = Vec::new();
        let mut order: u64 = 1;
        for i in 0..self.size as u32 {
            let fixed: Vec<(u32, u32)> = (0..i).map(|k| (k, k)).collect();
            let mut orbit = 1u64;
            for j in 0..self.size as u32 {
                if j == i {
                    continue;
                }
                let mut pairs = fixed.clone();
                pairs.push((i, j));
                if let Some(p) = self.find_extension(&pairs) {
                    orbit += 1;
                    gens.push(p);
                }
            }
            order *= orbit;
        }
        (gens, order)
    }
}

/// Generators of Aut(S) and its order; errors when the domain exceeds `bound`.
pub fn aut_group_finite(s: &FiniteStructure, bound: usize) -> Result<(Vec<Perm>, u64)> {
    s.validate()?;
    if s.size > bound {
        return Err(Error::SizeBound { what: "structure size".into(), size: s.size as u64, bound: bound as u64 });
    }
    Ok(Searcher::new(s).strong_generators())
}
