//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `KNOWN_FAILURES` are checked exactly as stated and are expected to print
//! FAIL; the target exits nonzero when any criterion's outcome differs from
//! its expectation, in either direction.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng as _;
use serde_json::json;

use lascar_core::expanded::{integrity, ExpandedWindow, DEFAULT_TRIPLE_CAP};
use lascar_core::finite::{FiniteStructure, Relation};
use lascar_core::geometry::{canonical_geometry, GeometryAutomorphism};
use lascar_core::rank::{check_stationary_axioms, generation_check, stationary_axiom_holds, StationaryInstance};
use lascar_core::reconstruction::{basis_fixing_maps, check_functoriality, diagram_check, f_from_alpha, kernel_extract, phi_map, random_semilinear, round_trip};
use lascar_core::report::{run, RunConfig};
use lascar_core::sample::{random_automorphism, random_closed_set, random_closed_set_outside, rng};
use lascar_core::stabilizer::{
    descriptor_explicit, galois_roundtrip, is_normal_in, is_pointwise_stabilizer, is_subgroup, k_m, lascar_condition1, pointwise_explicit, quotient_table, setwise_explicit, universe,
    verify_condition1, SUBGROUP_CAP,
};
use lascar_core::vector::{SparseVec, Span};
use lascar_core::{Automorphism, Backend, FiniteBackend, Matrix, RankFunction, Semilinear};

const KNOWN_FAILURES: [usize; 1] = [2];

const GALOIS_MAX_DIM: usize = 4;
const GALOIS_STRUCTURES: usize = 50;
const GALOIS_MAX_POINTS: usize = 6;
const GALOIS_MAX_RELATIONS: usize = 2;
const GALOIS_BUDGET: Duration = Duration::from_secs(60);
const NORMALITY_MAX_ORDER: usize = 120;
const NORMALITY_BUDGET: Duration = Duration::from_secs(120);
const QUOTIENT_MAX_ORDER: usize = 24;
const LASCAR_PAIRS: usize = 100;
const LASCAR_BUDGET: Duration = Duration::from_secs(30);
const STATIONARY_SAMPLES: usize = 500;
const GENERATION_BUDGET: Duration = Duration::from_secs(300);
const INNER_ACTIONS: usize = 20;
const SEMILINEAR_ACTIONS: usize = 5;
const RECONSTRUCTION_BUDGET: Duration = Duration::from_secs(60);
const DIAGRAM_SAMPLES: usize = 50;
const SECTION_SAMPLES: usize = 20;
const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn vector(q: u8) -> Backend {
    Backend::vector(q).unwrap()
}

fn finite(s: FiniteStructure) -> Backend {
    Backend::Finite(std::sync::Arc::new(FiniteBackend::new(s).unwrap()))
}

fn graph(size: usize, edges: &[(u32, u32)], directed: bool) -> FiniteStructure {
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    for &(a, b) in edges {
        tuples.push(vec![a, b]);
        if !directed {
            tuples.push(vec![b, a]);
        }
    }
    FiniteStructure { size, relations: vec![Relation { arity: 2, tuples }] }
}

/// Named finite backends with small automorphism groups.
fn named_finite() -> Vec<(&'static str, Backend)> {
    vec![
        ("pure-4", finite(FiniteStructure::pure(4))),
        ("pure-5", finite(FiniteStructure::pure(5))),
        ("4-cycle", finite(graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], false))),
        ("directed-3-cycle", finite(graph(3, &[(0, 1), (1, 2), (2, 0)], true))),
        ("path-4", finite(graph(4, &[(0, 1), (1, 2), (2, 3)], false))),
        ("star-3", finite(graph(4, &[(0, 1), (0, 2), (0, 3)], false))),
    ]
}

/// Random relational structures: up to six points, up to two binary
/// relations, each pair present with probability 1/3.
fn random_structures(n: usize, seed: u64) -> Vec<FiniteStructure> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let size = r.gen_range(1..=GALOIS_MAX_POINTS);
            let relations = (0..r.gen_range(0..=GALOIS_MAX_RELATIONS))
                .map(|_| {
                    let mut tuples = Vec::new();
                    for a in 0..size as u32 {
                        for b in 0..size as u32 {
                            if r.gen_range(0..3) == 0 {
                                tuples.push(vec![a, b]);
                            }
                        }
                    }
                    Relation { arity: 2, tuples }
                })
                .collect();
            FiniteStructure { size, relations }
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut sets = 0;
    for q in [2u8, 3] {
        let b = vector(q);
        for n in 1..=GALOIS_MAX_DIM {
            for k in b.closed_sets(n) {
                sets += 1;
                if !galois_roundtrip(&b, &k, n).unwrap() {
                    return outcome(false, format!("GF({q}) window {n}: round trip fails at {}", k.label()));
                }
            }
        }
    }
    for (i, s) in random_structures(GALOIS_STRUCTURES, SEED).into_iter().enumerate() {
        let size = s.size;
        let b = finite(s);
        for k in b.closed_sets(0) {
            sets += 1;
            if !galois_roundtrip(&b, &k, size).unwrap() {
                return outcome(false, format!("structure {i}: round trip fails at {}", k.label()));
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(elapsed < GALOIS_BUDGET, format!("{sets} closed sets over GF(2), GF(3) windows and {GALOIS_STRUCTURES} random structures in {:.1}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut pairs = 0usize;
    let mut mismatches = 0usize;
    let mut first = None;
    for (name, b) in named_finite() {
        let fb = b.finite_backend().unwrap();
        if fb.group().unwrap().order() > NORMALITY_MAX_ORDER {
            continue;
        }
        let u = universe(&b, fb.size(), SUBGROUP_CAP).unwrap();
        let explicit: Vec<_> = u.iter().map(|d| descriptor_explicit(&b, d).unwrap()).collect();
        for i in 0..u.len() {
            for j in 0..u.len() {
                pairs += 1;
                let literal_sub = explicit[i].is_subgroup_of(&explicit[j]);
                let literal_normal = literal_sub && explicit[i].is_normal_in(&explicit[j]);
                let sub = is_subgroup(&u[i], &u[j]).unwrap();
                let normal = is_normal_in(&u[i], &u[j]).unwrap();
                if sub != literal_sub || normal != literal_normal {
                    mismatches += 1;
                    first.get_or_insert_with(|| format!("{name}: {} vs {}", u[i].to_json(), u[j].to_json()));
                }
            }
        }
    }
    let elapsed = t.elapsed();
    let pass = mismatches == 0 && elapsed < NORMALITY_BUDGET;
    let mut detail = format!("{mismatches} of {pairs} descriptor pairs disagree with literal containment/normality in {:.1}s", elapsed.as_secs_f64());
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    outcome(pass, detail)
}

fn criterion_3() -> Outcome {
    let mut windows: Vec<(String, Backend, usize)> = vec![
        ("GF(2) window 2".into(), vector(2), 2),
        ("GF(2) window 3".into(), vector(2), 3),
        ("GF(3) window 2".into(), vector(3), 2),
        ("pure window 3".into(), Backend::PureSet, 3),
    ];
    for (name, b) in named_finite() {
        let n = b.finite_backend().unwrap().size();
        windows.push((name.into(), b, n));
    }
    let mut total = 0;
    for (name, b, n) in &windows {
        let u = universe(b, *n, SUBGROUP_CAP).unwrap();
        for d in &u {
            total += 1;
            if is_pointwise_stabilizer(d, &u).unwrap() != d.l_is_trivial() {
                return outcome(false, format!("{name}: {}", d.to_json()));
            }
        }
    }
    outcome(true, format!("{total} descriptors across {} windows", windows.len()))
}

fn criterion_4() -> Outcome {
    let mut backends = named_finite();
    for s in random_structures(GALOIS_STRUCTURES, SEED) {
        backends.push(("random", finite(s)));
    }
    let (mut sets, mut quotients) = (0, 0);
    for (name, b) in &backends {
        for k in b.closed_sets(0) {
            sets += 1;
            let (sw, pw) = (setwise_explicit(b, &k).unwrap(), pointwise_explicit(b, &k).unwrap());
            let aut = b.aut_m_group(&k, SUBGROUP_CAP).unwrap();
            if sw.order() != pw.order() * aut.order() {
                return outcome(false, format!("{name} {}: {} != {} * {}", k.label(), sw.order(), pw.order(), aut.order()));
            }
            if aut.order() <= QUOTIENT_MAX_ORDER {
                quotients += 1;
                if !quotient_table(&sw, &pw).isomorphic(&aut.table()) {
                    return outcome(false, format!("{name} {}: quotient not isomorphic to Aut_M(K)", k.label()));
                }
            }
        }
    }
    outcome(true, format!("{sets} closed sets on {} finite backends, {quotients} quotient tables", backends.len()))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut r = rng(SEED);
    for q in [2u8, 3] {
        let b = vector(q);
        let mut done = 0;
        while done < LASCAR_PAIRS {
            let k = random_closed_set(&b, 4, 3, &mut r);
            let Some(s) = random_closed_set_outside(&b, &k, 4, 2, &mut r) else { continue };
            done += 1;
            let w = lascar_condition1(&b, &k, &s).unwrap();
            if !verify_condition1(&k, &s, &w) {
                return outcome(false, format!("GF({q}) K={} S={}", k.label(), s.label()));
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(elapsed < LASCAR_BUDGET, format!("{LASCAR_PAIRS} pairs each over GF(2), GF(3) in {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_6() -> Outcome {
    for q in [2u8, 3] {
        for r in check_stationary_axioms(&RankFunction::new(vector(q)), STATIONARY_SAMPLES, SEED).unwrap() {
            if !r.passed() || r.samples < STATIONARY_SAMPLES {
                return outcome(false, format!("GF({q}) {}: {:?} after {} samples", r.axiom, r.status, r.samples));
            }
        }
    }
    let planted = RankFunction::planted(vector(2)).unwrap();
    let reports = check_stationary_axioms(&planted, STATIONARY_SAMPLES, SEED).unwrap();
    let mono = reports.iter().find(|r| r.axiom == "monotonicity").unwrap();
    let Some(cex) = &mono.counterexample else { return outcome(false, "fault not detected by monotonicity") };
    let inst = StationaryInstance::from_json(&planted.backend, cex).unwrap();
    let concrete = !stationary_axiom_holds(&planted, "monotonicity", &inst).unwrap();
    outcome(concrete, format!("8 axioms x {STATIONARY_SAMPLES} samples pass on GF(2), GF(3); planted fault breaks monotonicity at {cex}"))
}

/// |GL(n, q)| for prime q by counting matrices with nonzero determinant
/// via cofactor expansion.
fn gl_order_oracle(q: u64, n: usize) -> usize {
    fn det(m: &[Vec<u64>], q: u64) -> u64 {
        if m.len() == 1 {
            return m[0][0] % q;
        }
        let mut d = 0;
        for c in 0..m.len() {
            let minor: Vec<Vec<u64>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect()).collect();
            let term = m[0][c] * det(&minor, q) % q;
            d = if c % 2 == 0 { (d + term) % q } else { (d + q - term) % q };
        }
        d
    }
    let cells = n * n;
    (0..q.pow(cells as u32))
        .filter(|&code| {
            let m: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| code / q.pow((i * n + j) as u32) % q).collect()).collect();
            det(&m, q) != 0
        })
        .count()
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let mut pairs = 0;
    for (q, n) in [(2u8, 3usize), (3, 2)] {
        let whole = Span::of(q, &(0..n).map(|i| SparseVec::basis(q, i as u32)).collect::<Vec<_>>());
        let subs = whole.subspaces();
        for a in &subs {
            for b in &subs {
                pairs += 1;
                let cert = generation_check(q, n, a, b).unwrap();
                if !cert.equal {
                    return outcome(false, format!("GF({q})^{n}: generated {} vs G_(A n B) {}", cert.generated_order, cert.meet_order));
                }
            }
        }
    }
    let e = |i| SparseVec::basis(2, i);
    let lines = generation_check(2, 2, &Span::of(2, &[e(0)]), &Span::of(2, &[e(1)])).unwrap();
    let expected = gl_order_oracle(2, 2);
    let elapsed = t.elapsed();
    let pass = lines.generated_order == expected && elapsed < GENERATION_BUDGET;
    outcome(pass, format!("{pairs} subspace pairs equal; GF(2)^2 two lines generate order {} (|GL(2,2)| = {expected}) in {:.1}s", lines.generated_order, elapsed.as_secs_f64()))
}

fn criterion_8() -> Outcome {
    let q = 3usize;
    let expected_lines = (q * q - 1) / (q - 1);
    let expected_self_maps = q - 1;
    let w = ExpandedWindow::build(&vector(3), 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
    let lines: Vec<_> = w.closed_sets.iter().filter(|k| k.rank == 1).collect();
    let self_maps: BTreeSet<usize> = lines.iter().map(|k| w.triples.iter().filter(|t| t.dom == **k && t.cod == **k).count()).collect();
    let rep = integrity(&w);
    let pass = lines.len() == expected_lines && w.closed_sets.len() == expected_lines && self_maps == BTreeSet::from([expected_self_maps]) && rep.ok();
    outcome(pass, format!("{} lines (expected {expected_lines}), self-maps per line {self_maps:?} (expected {expected_self_maps}), {} chains checked", lines.len(), rep.chains_checked))
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let mut r = rng(SEED);
    let mut checked = (0, 0);
    for q in [2u8, 4] {
        let b = vector(q);
        let w = ExpandedWindow::build(&b, 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
        let mut actions: Vec<Automorphism> = (0..INNER_ACTIONS).map(|_| random_automorphism(&b, 2, &mut r).unwrap()).collect();
        actions.extend((0..SEMILINEAR_ACTIONS).map(|_| Automorphism::Vector(random_semilinear(q, 2, &mut r).unwrap())));
        for h in &actions {
            let g = random_automorphism(&b, 2, &mut r).unwrap();
            checked.0 += 1;
            if !round_trip(h, &g, &w).unwrap() {
                return outcome(false, format!("GF({q}) round trip fails for {}", h.to_json()));
            }
        }
        for a in &actions {
            for c in &actions {
                checked.1 += 1;
                if !check_functoriality(a, c, &w).unwrap() {
                    return outcome(false, format!("GF({q}) functoriality fails for {} then {}", a.to_json(), c.to_json()));
                }
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(elapsed < RECONSTRUCTION_BUDGET, format!("{} round trips and {} ordered pairs on GF(2), GF(4) windows in {:.1}s", checked.0, checked.1, elapsed.as_secs_f64()))
}

/// GF(4) as polynomials over GF(2) modulo x^2 + x + 1; code 2 is x and
/// code 3 is x + 1.
fn gf4_mul(a: u8, b: u8) -> u8 {
    let mut p = 0u8;
    for i in 0..2 {
        if b >> i & 1 == 1 {
            p ^= a << i;
        }
    }
    if p & 4 != 0 {
        p ^= 0b111;
    }
    p
}

/// Bijections of Z/n that preserve addition.
fn cyclic_automorphisms(n: usize) -> usize {
    (0..n).filter(|&g| (0..n).map(|k| k * g % n).collect::<BTreeSet<_>>().len() == n).count()
}

fn criterion_10() -> Outcome {
    let b = vector(4);
    let w = ExpandedWindow::build(&b, 1, 2, DEFAULT_TRIPLE_CAP).unwrap();
    let frob = Automorphism::Vector(Semilinear { frobenius: 1, matrix: Matrix::identity(4, 2) });
    let k = match kernel_extract(&f_from_alpha(&frob, &w).unwrap(), &w) {
        Ok(k) => k,
        Err(e) => return outcome(false, format!("extraction failed: {e}")),
    };
    let squaring: Vec<u8> = (1..4).map(|l| gf4_mul(l, l)).collect();
    let identical = k.tables.iter().all(|t| *t == squaring);
    let nontrivial = squaring != vec![1, 2, 3];
    let bound = cyclic_automorphisms(3);
    let mut realizable = BTreeSet::new();
    for s in basis_fixing_maps(4, 2).unwrap() {
        let ke = kernel_extract(&f_from_alpha(&Automorphism::Vector(s), &w).unwrap(), &w).unwrap();
        realizable.insert(ke.tables[0].clone());
    }
    let pass = identical && nontrivial && realizable.len() <= bound;
    outcome(pass, format!("f_i = {:?} on {} lines (squaring = {squaring:?}); {} realizable tables, bound |Aut(Z/3)| = {bound}", k.tables[0], k.tables.len(), realizable.len()))
}

fn criterion_11() -> Outcome {
    let mut r = rng(SEED);
    let mut totals = (0, 0);
    for q in [2u8, 3, 4] {
        let b = vector(q);
        let w = ExpandedWindow::build(&b, 1, 3, DEFAULT_TRIPLE_CAP).unwrap();
        let geo = canonical_geometry(&b, 3).unwrap();
        let mut samples: Vec<Automorphism> = (0..DIAGRAM_SAMPLES / 2).map(|_| random_automorphism(&b, 3, &mut r).unwrap()).collect();
        samples.extend((0..DIAGRAM_SAMPLES - DIAGRAM_SAMPLES / 2).map(|_| Automorphism::Vector(random_semilinear(q, 3, &mut r).unwrap())));
        let sections: Vec<GeometryAutomorphism> =
            (0..SECTION_SAMPLES).map(|_| phi_map(&Automorphism::Vector(random_semilinear(q, 3, &mut r).unwrap()), &geo).unwrap()).collect();
        let rep = diagram_check(&samples, &sections, &w, &geo).unwrap();
        totals.0 += rep.commuting;
        totals.1 += rep.section_ok;
        if !rep.holds() {
            return outcome(false, format!("GF({q}): {}", json!(rep.failures)));
        }
    }
    outcome(true, format!("{} commuting samples and {} sections over GF(2), GF(3), GF(4)", totals.0, totals.1))
}

fn criterion_12() -> Outcome {
    let mut tested = Vec::new();
    let cases: Vec<(String, Backend, Vec<usize>)> = vec![
        ("GF(2)".into(), vector(2), (1..=4).collect()),
        ("GF(3)".into(), vector(3), (1..=3).collect()),
        ("GF(4)".into(), vector(4), (1..=2).collect()),
        ("pure".into(), Backend::PureSet, (1..=6).collect()),
    ];
    for (name, b, sizes) in cases {
        for n in sizes {
            let km = k_m(&b, n).unwrap();
            if km != 1 {
                return outcome(false, format!("{name} window {n}: k_M = {km}"));
            }
            tested.push(format!("{name}/{n}"));
        }
    }
    outcome(true, format!("k_M = 1 on {} windows", tested.len()))
}

fn criterion_13() -> Outcome {
    let cfg = RunConfig::from_json(json!({
        "backend": "vector", "q": 3, "samples": 40, "seed": 7,
        "suites": ["galois-roundtrip", "lascar-verify", "rank-axioms", "stationary-axioms", "generation", "expanded-window", "reconstruction-roundtrip"]
    }))
    .unwrap();
    let (a, b) = (run(&cfg).unwrap(), run(&cfg).unwrap());
    let (ja, jb) = (a.canonical_json(), b.canonical_json());
    outcome(ja == jb, format!("{} canonical bytes, identical = {}", ja.len(), ja == jb))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 13] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
        (13, criterion_13),
    ];
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        let o = f();
        let word = if o.pass { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILURES.contains(&n);
        let note = if known { " [known failure]" } else { "" };
        println!("criterion {n}: {word}{note} ({})", o.detail);
        if o.pass == known {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcomes: {unexpected:?}");
        std::process::exit(1);
    }
}
