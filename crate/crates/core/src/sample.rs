//! Seeded random instances: closed sets and automorphisms inside windows.

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::auto::{Automorphism, Semilinear};
use crate::backend::{atoms_from_perm, Backend, ClosedSet};
use crate::element::Element;
use crate::error::Result;
use crate::perm::Perm;
use crate::stabilizer::{pointwise_explicit, pointwise_window_generators};
use crate::vector::{Matrix, Span};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Closure of up to `max_gens` random window elements.
pub fn random_closed_set(b: &Backend, window: usize, max_gens: usize, rng: &mut Rng) -> ClosedSet {
    let pool = b.window_elements(window);
    let k = rng.gen_range(0..=max_gens.min(pool.len()));
    let gens: Vec<Element> = (0..k).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
    b.acl(&gens).expect("window elements are valid")
}

/// A closed set that is not contained in `k`, or None when the window has
/// nothing outside `k`.
pub fn random_closed_set_outside(b: &Backend, k: &ClosedSet, window: usize, max_gens: usize, rng: &mut Rng) -> Option<ClosedSet> {
    let outside: Vec<Element> = b.window_elements(window).into_iter().filter(|x| !k.contains(x)).collect();
    if outside.is_empty() {
        return None;
    }
    let pool = b.window_elements(window);
    let mut gens = vec![outside[rng.gen_range(0..outside.len())].clone()];
    for _ in 0..rng.gen_range(0..max_gens.max(1)) {
        gens.push(pool[rng.gen_range(0..pool.len())].clone());
    }
    Some(b.acl(&gens).expect("window elements are valid"))
}

pub fn random_invertible(q: u8, n: usize, rng: &mut Rng) -> Matrix {
    loop {
        let mut m = Matrix::zero(q, n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, rng.gen_range(0..q));
            }
        }
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// A uniformly random automorphism of the window (GL for vectors, Sym for
/// atoms, the whole group for finite structures).
pub fn random_automorphism(b: &Backend, window: usize, rng: &mut Rng) -> Result<Automorphism> {
    Ok(match b {
        Backend::Vector { q } => Automorphism::Vector(Semilinear::linear(random_invertible(*q, window, rng))),
        Backend::PureSet => {
            let mut p: Vec<u32> = (0..window as u32).collect();
            p.shuffle(rng);
            atoms_from_perm(&Perm(p))
        }
        Backend::Finite(fb) => {
            let g = fb.group()?;
            Automorphism::Points(g.elements[rng.gen_range(0..g.order())].clone())
        }
    })
}

/// A random automorphism fixing `base` pointwise and mapping the window
/// onto itself.
pub fn random_fixing(b: &Backend, base: &ClosedSet, window: usize, rng: &mut Rng) -> Result<Automorphism> {
    Ok(match b {
        Backend::Vector { q } => {
            let span = Span::of(*q, &base.elements.iter().filter_map(|x| x.as_vector().cloned()).collect::<Vec<_>>());
            let n = window.max(span.extent());
            let gens = pointwise_window_generators(*q, &span, n)?;
            let mut g = Automorphism::Vector(Semilinear::identity(*q, n));
            if !gens.is_empty() {
                for _ in 0..2 * n + 4 {
                    g = gens[rng.gen_range(0..gens.len())].after(&g);
                }
            }
            g
        }
        Backend::PureSet => {
            let free: Vec<u32> = (0..window as u32).filter(|i| !base.contains(&Element::Atom(*i))).collect();
            let mut shuffled = free.clone();
            shuffled.shuffle(rng);
            Automorphism::Atoms(free.into_iter().zip(shuffled).filter(|(a, b)| a != b).collect())
        }
        Backend::Finite(_) => {
            let g = pointwise_explicit(b, base)?;
            Automorphism::Points(g.elements[rng.gen_range(0..g.order())].clone())
        }
    })
}
