//! Named verification suites over a configured backend, with canonical JSON
//! and markdown reports and single-counterexample replay.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::auto::{Automorphism, Semilinear};
use crate::backend::{Backend, ClosedSet, ClosureKind, FiniteBackend};
use crate::error::{Error, Result};
use crate::expanded::{integrity, iso_check, orbital_structure, ExpandedWindow, WindowMap};
use crate::field::Gf;
use crate::finite::FiniteStructure;
use crate::geometry::{canonical_geometry, pregeometry_check, closure_axiom_holds, BackendClosure, ClosureInstance, ClosureOp, GeometryAutomorphism, PathConvexity};
use crate::rank::{self, canonical_base, check_rank_axioms, check_stationary_axioms, indep, noetherian_check, AxiomReport, RankFunction, RankInstance, StationaryInstance, Status};
use crate::reconstruction::{self as rec, basis_fixing_maps, f_from_alpha, kernel_extract, phi_map, random_semilinear};
use crate::sample::{random_automorphism, random_closed_set, random_closed_set_outside, rng};
use crate::stabilizer::{self as stab, descriptor_explicit, is_normal_in, is_pointwise_stabilizer, is_subgroup, lascar_condition1, pointwise_explicit, setwise_explicit, universe, verify_condition1, SUBGROUP_CAP};
use crate::vector::{Matrix, Span};

pub const SUITES: [(&str, &str); 13] = [
    ("galois-roundtrip", "Galois correspondence: Fix_M(Fix_G(K)) = K for every closed set of the window"),
    ("stab-characterizations", "Generalized stabilizers G_(K,L): subgroup/normality tests, pointwise stabilizers as trivial L, sandwich order |G_{K}| = |G_(K)||Aut_M(K)|, subgroup supports"),
    ("lascar-verify", "Conjugation separation: g in G_(K), h in G_(S) with g^-1 h g (S) != S whenever S is not inside K"),
    ("rank-axioms", "Dimension function: invariance, bounds, submodularity, strict monotonicity, finiteness, Noetherian chains"),
    ("stationary-axioms", "Stationary independence from the rank: invariance, monotonicity, transitivity, symmetry, existence, stationarity"),
    ("canonical-base", "Weak canonical bases: the least closed C inside B with A independent from B over C"),
    ("generation", "Generation of pointwise stabilizers: <G_(A) u G_(B)> = G_(A n B) in the ambient general linear group"),
    ("pregeometry", "Pregeometry: closure axioms with exchange, canonical geometry on singleton closures, k_M = 1"),
    ("expanded-window", "Expanded structure of closed sets and extendable maps: groupoid laws, predicate consistency"),
    ("reconstruction-roundtrip", "Automorphism actions as window maps: alpha -> f_alpha is a homomorphism and alpha is recovered from f_alpha"),
    ("kernel-cor16", "Kernel of the geometry action: per-line scalar automorphisms f_i are multiplicative and agree across lines"),
    ("diagram-thm13", "Commuting square: phi = pi . gamma on the canonical geometry, with semilinear lifts as a section of pi"),
    ("orbital", "Orbital structure: orbit equivalence relations on tuples for acl-trivial backends"),
];

pub fn list_suites() -> Vec<(&'static str, &'static str)> {
    SUITES.to_vec()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inject {
    /// Rank one too high on the closure of the first two window elements.
    Rank,
    /// Pregeometry suite runs on convexity of a path instead of the backend.
    Exchange,
}

impl std::str::FromStr for Inject {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank" | "monotonicity" | "submodularity" | "strict-monotonicity" => Ok(Inject::Rank),
            "exchange" => Ok(Inject::Exchange),
            _ => Err(Error::Invalid(format!("unknown fault '{s}' (expected rank or exchange)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "default_triples")]
    pub triples: usize,
    #[serde(default = "default_group_order")]
    pub group_order: usize,
    #[serde(default = "default_size_bound")]
    pub size_bound: usize,
}

fn default_triples() -> usize {
    crate::expanded::DEFAULT_TRIPLE_CAP
}
fn default_group_order() -> usize {
    SUBGROUP_CAP
}
fn default_size_bound() -> usize {
    crate::finite::DEFAULT_SIZE_BOUND
}
fn default_samples() -> usize {
    200
}

impl Default for Caps {
    fn default() -> Self {
        Caps { triples: default_triples(), group_order: default_group_order(), size_bound: default_size_bound() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// "vector", "pure" or "finite".
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Value>,
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inject: Option<Inject>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(backend: &str) -> Self {
        RunConfig {
            backend: backend.into(),
            q: None,
            structure: None,
            suites: vec![],
            window: None,
            samples: default_samples(),
            seed: 0,
            caps: Caps::default(),
            inject: None,
            workers: None,
        }
    }

    pub fn vector(q: u8) -> Self {
        RunConfig { q: Some(q), ..RunConfig::new("vector") }
    }

    pub fn from_json(v: Value) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_value(v).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_json(serde_json::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(format!("config: {m}")));
        if self.caps.triples == 0 || self.caps.group_order == 0 || self.caps.size_bound == 0 {
            return bad("caps must be positive".into());
        }
        if self.window == Some(0) {
            return bad("window must be positive".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be positive".into());
        }
        match self.backend.as_str() {
            "vector" => {
                let Some(q) = self.q else { return bad("vector backend needs q".into()) };
                Gf::get(q).map_err(|_| Error::Invalid(format!("config: unsupported field order {q}")))?;
            }
            "pure" => {}
            "finite" => {
                let Some(s) = &self.structure else { return bad("finite backend needs a structure".into()) };
                FiniteStructure::from_json(s).map_err(|e| Error::Invalid(format!("config: structure: {e}")))?;
            }
            other => return bad(format!("unknown backend kind '{other}'")),
        }
        for s in &self.suites {
            if !SUITES.iter().any(|(n, _)| n == s) {
                return bad(format!("unknown suite '{s}'"));
            }
        }
        Ok(())
    }

    pub fn build_backend(&self) -> Result<Backend> {
        match self.backend.as_str() {
            "vector" => Backend::vector(self.q.unwrap_or(2)),
            "pure" => Ok(Backend::PureSet),
            _ => {
                let s = FiniteStructure::from_json(self.structure.as_ref().ok_or_else(|| Error::Invalid("missing structure".into()))?)?;
                Ok(Backend::Finite(std::sync::Arc::new(FiniteBackend::with_bound(s, self.caps.size_bound)?)))
            }
        }
    }

    /// Suites to run, in declared order without repeats; all when empty.
    pub fn selected(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let src: Vec<String> = if self.suites.is_empty() { SUITES.iter().map(|(n, _)| n.to_string()).collect() } else { self.suites.clone() };
        for s in src {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub samples: usize,
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Check {
    fn new(name: &str, ok: bool, samples: usize) -> Self {
        Check { name: name.into(), status: Status::of(ok), samples, counterexample: None, detail: None }
    }

    fn with_cex(mut self, cex: Option<Value>) -> Self {
        if self.status == Status::Fail {
            self.counterexample = cex;
        }
        self
    }

    fn with_detail(mut self, d: Value) -> Self {
        self.detail = Some(d);
        self
    }

    fn from_axiom(r: AxiomReport, kind: &str) -> Self {
        let cex = r.counterexample.map(|i| json!({"kind": kind, "axiom": r.axiom, "instance": i}));
        let mut c = Check::new(&r.axiom, r.status == Status::Pass, r.samples).with_cex(cex);
        if let Some(n) = r.note {
            c.detail = Some(json!({"note": n}));
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub description: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteTiming {
    pub total_ms: f64,
    pub checks: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Canonical {
    pub config: RunConfig,
    pub backend: String,
    pub notes: Vec<String>,
    pub suites: Vec<SuiteReport>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub canonical: Canonical,
    pub timings: BTreeMap<String, SuiteTiming>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.canonical.verdict != Verdict::Fail
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// The byte-stable part of the report.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// First failing check with its counterexample, as a replay payload.
    pub fn first_failure(&self) -> Option<Value> {
        self.canonical.suites.iter().find_map(|s| {
            s.checks.iter().find(|c| c.status == Status::Fail).map(|c| {
                json!({"config": self.canonical.config, "suite": s.suite, "check": c.name, "counterexample": c.counterexample})
            })
        })
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.canonical;
        let mut out = format!("# lascar-lab report\n\nbackend: `{}`  \nseed: {}  \nsamples: {}  \nverdict: **{}**\n\n", c.backend, c.config.seed, c.config.samples, verdict_word(c.verdict));
        for n in &c.notes {
            out.push_str(&format!("> {n}\n"));
        }
        for s in &c.suites {
            let t = self.timings.get(&s.suite);
            out.push_str(&format!("\n## {} ({})\n\n{}\n\n", s.suite, verdict_word(s.verdict), s.description));
            if let Some(n) = &s.note {
                out.push_str(&format!("note: {n}\n\n"));
            }
            if s.checks.is_empty() {
                continue;
            }
            out.push_str("| check | status | samples | ms | counterexample |\n|---|---|---|---|---|\n");
            for ch in &s.checks {
                let ms = t.and_then(|t| t.checks.get(&ch.name)).copied().unwrap_or(0.0);
                let cex = ch.counterexample.as_ref().map(|v| format!("`{v}`")).unwrap_or_default();
                let status = if ch.status == Status::Pass { "pass" } else { "fail" };
                out.push_str(&format!("| {} | {} | {} | {:.1} | {} |\n", ch.name, status, ch.samples, ms, cex));
            }
        }
        out
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Skipped => "skipped",
    }
}

/// Shared state for one suite run: backend, windows, and per-check timing.
pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub backend: Backend,
    checks: Vec<Check>,
    times: BTreeMap<String, f64>,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a RunConfig, backend: Backend) -> Self {
        Ctx { cfg, backend, checks: vec![], times: BTreeMap::new() }
    }

    fn window(&self) -> usize {
        self.cfg.window.unwrap_or_else(|| match &self.backend {
            Backend::Vector { q } => {
                if *q <= 3 {
                    3
                } else {
                    2
                }
            }
            Backend::PureSet => 4,
            Backend::Finite(fb) => fb.size(),
        })
    }

    /// The configured window, clamped for suites whose cost grows with it.
    fn window_at_most(&self, cap: usize) -> usize {
        self.window().min(cap)
    }

    fn rank_function(&self) -> Result<RankFunction> {
        match self.cfg.inject {
            Some(Inject::Rank) => RankFunction::planted(self.backend.clone()),
            _ => Ok(RankFunction::new(self.backend.clone())),
        }
    }

    fn record(&mut self, name: &str, f: impl FnOnce(&Self) -> Result<Check>) -> Result<()> {
        let t = Instant::now();
        let mut c = f(self)?;
        c.name = name.into();
        self.times.insert(name.into(), t.elapsed().as_secs_f64() * 1000.0);
        self.checks.push(c);
        Ok(())
    }

    fn record_many(&mut self, f: impl FnOnce(&Self) -> Result<Vec<Check>>) -> Result<()> {
        let t = Instant::now();
        let cs = f(self)?;
        let ms = t.elapsed().as_secs_f64() * 1000.0 / cs.len().max(1) as f64;
        for c in cs {
            self.times.insert(c.name.clone(), ms);
            self.checks.push(c);
        }
        Ok(())
    }
}

fn set_json(k: &ClosedSet) -> Value {
    json!(k.generators)
}

fn set_from_json(b: &Backend, v: &Value) -> Result<ClosedSet> {
    let gens = v.as_array().ok_or_else(|| Error::Invalid(format!("expected generator list, got {v}")))?;
    b.acl(&gens.iter().map(|x| b.element_from_json(x)).collect::<Result<Vec<_>>>()?)
}

/// Scans `items` and reports the first failing one.
fn scan<T>(name: &str, items: impl IntoIterator<Item = T>, mut holds: impl FnMut(&T) -> Result<bool>, cex: impl Fn(&T) -> Value) -> Result<Check> {
    let mut n = 0;
    for it in items {
        n += 1;
        if !holds(&it)? {
            return Ok(Check::new(name, false, n).with_cex(Some(cex(&it))));
        }
    }
    Ok(Check::new(name, true, n))
}

fn rerun(seed: u64, suite: &str, extra: Value) -> Value {
    json!({"kind": "rerun", "suite": suite, "seed": seed, "data": extra})
}

fn galois_suite(ctx: &mut Ctx) -> Result<()> {
    let window = match ctx.backend {
        Backend::Vector { q } => ctx.window_at_most(if q <= 3 { 4 } else { 3 }),
        _ => ctx.window(),
    };
    ctx.record("fix-fix-roundtrip", |c| {
        let sets = c.backend.closed_sets(window);
        scan("", sets, |k| stab::galois_roundtrip(&c.backend, k, window), |k| json!({"kind": "galois", "set": set_json(k), "window": window}))
    })
}

fn stab_suite(ctx: &mut Ctx) -> Result<()> {
    let window = match ctx.backend {
        Backend::Vector { q: 2 } => ctx.window_at_most(3),
        Backend::Vector { .. } => ctx.window_at_most(2),
        _ => ctx.window_at_most(4),
    };
    let cap = ctx.cfg.caps.group_order.min(SUBGROUP_CAP);
    let u = universe(&ctx.backend, window, cap)?;
    ctx.record("ps-iff-trivial-l", |c| {
        scan("", &u, |d| Ok(is_pointwise_stabilizer(d, &u)? == d.l_is_trivial()), |d| json!({"kind": "rerun", "suite": "stab-characterizations", "descriptor": d.to_json(), "seed": c.cfg.seed}))
    })?;
    let finite = ctx.backend.finite_backend().is_some();
    if !finite {
        ctx.checks.last_mut().expect("recorded").detail = Some(json!({"universe": u.len(), "window": window}));
        return Ok(());
    }
    let order = ctx.backend.finite_backend().expect("finite").group()?.order();
    if order > 120 {
        ctx.checks.last_mut().expect("recorded").detail = Some(json!({"universe": u.len(), "note": "literal comparison needs |Aut(M)| <= 120"}));
    } else {
        let explicit: Vec<_> = u.iter().map(|d| descriptor_explicit(&ctx.backend, d)).collect::<Result<_>>()?;
        let pairs: Vec<(usize, usize)> = (0..u.len()).flat_map(|i| (0..u.len()).map(move |j| (i, j))).collect();
        ctx.record("subgroup-literal", |_| {
            scan("", &pairs, |&&(i, j)| Ok(is_subgroup(&u[i], &u[j])? == explicit[i].is_subgroup_of(&explicit[j])), |&&(i, j)| {
                json!({"kind": "descriptor-pair", "test": "subgroup", "h1": u[i].to_json(), "h2": u[j].to_json()})
            })
        })?;
        ctx.record("normal-literal", |_| {
            scan(
                "",
                &pairs,
                |&&(i, j)| Ok(is_normal_in(&u[i], &u[j])? == (explicit[i].is_subgroup_of(&explicit[j]) && explicit[i].is_normal_in(&explicit[j]))),
                |&&(i, j)| json!({"kind": "descriptor-pair", "test": "normal", "h1": u[i].to_json(), "h2": u[j].to_json()}),
            )
        })?;
    }
    let sets = ctx.backend.closed_sets(0);
    ctx.record("sandwich-order", |c| {
        scan(
            "",
            &sets,
            |k| {
                let (sw, pw) = (setwise_explicit(&c.backend, k)?, pointwise_explicit(&c.backend, k)?);
                Ok(sw.order() == pw.order() * c.backend.aut_m_group(k, SUBGROUP_CAP)?.order())
            },
            |k| json!({"kind": "rerun", "suite": "stab-characterizations", "set": set_json(k)}),
        )
    })?;
    ctx.record("quotient-iso", |c| {
        scan(
            "",
            sets.iter().filter(|k| c.backend.aut_m_group(k, 24).is_ok_and(|a| a.order() <= 24)),
            |k| {
                let q = stab::quotient_table(&setwise_explicit(&c.backend, k)?, &pointwise_explicit(&c.backend, k)?);
                Ok(q.isomorphic(&c.backend.aut_m_group(k, 24)?.table()))
            },
            |k| json!({"kind": "rerun", "suite": "stab-characterizations", "set": set_json(k)}),
        )
    })?;
    ctx.record("subgroup-supports", |c| {
        let r = stab::lascar_condition2(&c.backend)?;
        let detail = json!({"subgroups": r.subgroups, "unsupported": r.unsupported, "non_unique": r.non_unique});
        let cex = r.entries.iter().find(|e| e.supports.is_empty()).map(|e| json!({"kind": "rerun", "suite": "stab-characterizations", "order": e.order}));
        Ok(Check::new("", r.verdict, r.subgroups).with_cex(cex).with_detail(detail))
    })?;
    Ok(())
}

fn suite_seed(seed: u64, suite: &str) -> u64 {
    // FNV-1a over the suite name keeps suites independent of run order
    suite.bytes().fold(0xcbf2_9ce4_8422_2325u64 ^ seed, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

fn lascar_suite(ctx: &mut Ctx) -> Result<()> {
    let window = ctx.window_at_most(4);
    let samples = ctx.cfg.samples;
    let seed = suite_seed(ctx.cfg.seed, "lascar-verify");
    ctx.record("condition-1", |c| {
        let b = &c.backend;
        let mut r = rng(seed);
        let mut pairs = Vec::new();
        let mut attempts = 0;
        while pairs.len() < samples && attempts < samples * 20 + 20 {
            attempts += 1;
            let k = random_closed_set(b, window, window.saturating_sub(1), &mut r);
            if let Some(s) = random_closed_set_outside(b, &k, window, 2, &mut r) {
                pairs.push((k, s));
            }
        }
        scan(
            "",
            &pairs,
            |(k, s)| match lascar_condition1(b, k, s) {
                Ok(w) => Ok(verify_condition1(k, s, &w)),
                Err(Error::NoWitness(_)) => Ok(false),
                Err(e) => Err(e),
            },
            |(k, s)| json!({"kind": "lascar1", "k": set_json(k), "s": set_json(s)}),
        )
    })
}

fn rank_suite(ctx: &mut Ctx) -> Result<()> {
    let rf = ctx.rank_function()?;
    let (samples, seed) = (ctx.cfg.samples, suite_seed(ctx.cfg.seed, "rank-axioms"));
    ctx.record_many(|_| Ok(check_rank_axioms(&rf, samples, seed)?.into_iter().map(|r| Check::from_axiom(r, "rank")).collect()))?;
    let window = ctx.window_at_most(4);
    ctx.record("noetherian", |c| {
        let r = noetherian_check(&c.backend, window)?;
        Ok(Check::new("", r.status == Status::Pass, r.closed_sets).with_detail(json!({"longest_chain": r.longest_chain, "bound": r.bound, "window": window})))
    })
}

fn stationary_suite(ctx: &mut Ctx) -> Result<()> {
    let rf = ctx.rank_function()?;
    let (samples, seed) = (ctx.cfg.samples, suite_seed(ctx.cfg.seed, "stationary-axioms"));
    ctx.record_many(|_| Ok(check_stationary_axioms(&rf, samples, seed)?.into_iter().map(|r| Check::from_axiom(r, "stationary")).collect()))
}

/// In a vector space A is independent from B over C (C inside B) exactly
/// when A n B lies in C, so the canonical base is A n B.
fn canonical_base_suite(ctx: &mut Ctx) -> Result<()> {
    let rf = ctx.rank_function()?;
    if ctx.backend.q().is_none() {
        return Err(Error::NotAttempted("weak canonical bases are only searched on vector spaces".into()));
    }
    let window = ctx.window_at_most(4);
    let (samples, seed) = (ctx.cfg.samples, suite_seed(ctx.cfg.seed, "canonical-base"));
    let mut r = rng(seed);
    let pairs: Vec<(ClosedSet, ClosedSet)> = (0..samples).map(|_| (random_closed_set(&ctx.backend, window, 3, &mut r), random_closed_set(&ctx.backend, window, 3, &mut r))).collect();
    ctx.record("base-is-intersection", |c| {
        scan(
            "",
            &pairs,
            |(a, b)| match canonical_base(&rf, a, b) {
                Ok(cb) => Ok(cb.is_subset(b) && cb == rank::meet(&c.backend, a, b)? && indep(&rf, a, b, &cb)?.verdict),
                Err(Error::NonUnique(_)) => Ok(false),
                Err(e) => Err(e),
            },
            |(a, b)| json!({"kind": "canonical-base", "a": set_json(a), "b": set_json(b)}),
        )
    })
}

fn generation_suite(ctx: &mut Ctx) -> Result<()> {
    let q = ctx.backend.q().ok_or_else(|| Error::Inapplicable("generation is checked inside finite general linear groups".into()))?;
    let n = if q == 2 { ctx.window_at_most(3) } else { ctx.window_at_most(2) };
    let b = ctx.backend.clone();
    let subspaces: Vec<ClosedSet> = Span::of(q, &(0..n).map(|i| crate::vector::SparseVec::basis(q, i as u32)).collect::<Vec<_>>())
        .subspaces()
        .into_iter()
        .map(|s| b.acl(&s.basis().into_iter().map(crate::element::Element::Vector).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let mut certs = Vec::new();
    let mut bad: Option<Value> = None;
    let mut not_contained: Option<Value> = None;
    let t = Instant::now();
    for x in &subspaces {
        for y in &subspaces {
            let cert = rank::generation_check_sets(&b, n, x, y)?;
            let cex = json!({"kind": "generation", "n": n, "a": set_json(x), "b": set_json(y)});
            if !cert.equal && bad.is_none() {
                bad = Some(cex.clone());
            }
            if !cert.contained && not_contained.is_none() {
                not_contained = Some(cex);
            }
            certs.push(json!({"a": x.rank, "b": y.rank, "a_gens": set_json(x), "b_gens": set_json(y), "generated": cert.generated_order, "meet": cert.meet_order, "ambient": cert.ambient_order}));
        }
    }
    let ms = t.elapsed().as_secs_f64() * 1000.0;
    let count = certs.len();
    ctx.checks.push(Check::new("contained", not_contained.is_none(), count).with_cex(not_contained));
    ctx.checks.push(Check::new("generated-equals-meet", bad.is_none(), count).with_cex(bad).with_detail(json!({"ambient_dimension": n, "pairs": certs})));
    ctx.times.insert("contained".into(), ms / 2.0);
    ctx.times.insert("generated-equals-meet".into(), ms / 2.0);
    Ok(())
}

fn closure_op(ctx: &Ctx, window: usize) -> (Box<dyn ClosureOp + Send + Sync>, Value) {
    match ctx.cfg.inject {
        Some(Inject::Exchange) => (Box::new(PathConvexity { n: 4 }), json!({"path": 4})),
        _ => (Box::new(BackendClosure::new(&ctx.backend, window)), json!({"window": window})),
    }
}

fn pregeometry_suite(ctx: &mut Ctx) -> Result<()> {
    let window = ctx.window_at_most(3);
    let (op, desc) = closure_op(ctx, window);
    let (samples, seed) = (ctx.cfg.samples, suite_seed(ctx.cfg.seed, "pregeometry"));
    ctx.record_many(|_| {
        Ok(pregeometry_check(op.as_ref(), samples, seed)?
            .into_iter()
            .map(|r| {
                let mut c = Check::from_axiom(r, "closure");
                if let Some(cex) = c.counterexample.as_mut() {
                    cex["op"] = desc.clone();
                }
                c
            })
            .collect())
    })?;
    let exchange_ok = ctx.checks.iter().all(|c| c.status == Status::Pass);
    ctx.record("geometry-points-closed", |c| {
        let g = canonical_geometry(&c.backend, window)?;
        Ok(Check::new("", g.singletons_closed().is_none(), g.len()).with_detail(json!({"points": g.len(), "window": window})))
    })?;
    let pregeometric = ctx.backend.capabilities().closure_kind != ClosureKind::FixedPoint || exchange_ok;
    ctx.record("k-m", |c| {
        let km = stab::k_m(&c.backend, window)?;
        // k_M = 1 is asserted only where the closure is a pregeometry
        Ok(Check::new("", !pregeometric || km == 1, 1).with_detail(json!({"k_m": km, "pregeometry": pregeometric, "window": window})))
    })
}

fn expanded_window_size(ctx: &Ctx) -> usize {
    match ctx.backend {
        Backend::Vector { q: 2 } => ctx.window_at_most(3),
        Backend::Vector { .. } => ctx.window_at_most(2),
        Backend::PureSet => ctx.window_at_most(4),
        Backend::Finite(_) => ctx.window(),
    }
}

fn expanded_suite(ctx: &mut Ctx) -> Result<()> {
    let size = expanded_window_size(ctx);
    let w = ExpandedWindow::build(&ctx.backend, 1, size, ctx.cfg.caps.triples)?;
    let t = Instant::now();
    let rep = integrity(&w);
    let ms = t.elapsed().as_secs_f64() * 1000.0;
    let lines = w.closed_sets.iter().filter(|k| k.rank == 1).count();
    let self_maps: Vec<usize> = w.closed_sets.iter().map(|k| w.triples.iter().filter(|t| &t.dom == k && &t.cod == k).count()).collect();
    let detail = json!({"size": size, "closed_sets": rep.closed_sets, "rank_one_sets": lines, "triples": rep.triples, "chains_checked": rep.chains_checked, "self_maps": self_maps});
    let seed = ctx.cfg.seed;
    let cex = |what: &str| Some(rerun(seed, "expanded-window", json!({"property": what, "size": size})));
    for (name, ok) in [
        ("identity-triples", rep.identity_triples),
        ("inverse-closed", rep.inverse_closed),
        ("singly-realized", rep.singly_realized),
        ("associative", rep.associative),
        ("composition-closed", rep.composition_closed),
    ] {
        let mut c = Check::new(name, ok, rep.triples).with_cex(cex(name));
        if name == "identity-triples" {
            c.detail = Some(detail.clone());
        }
        ctx.times.insert(name.into(), ms / 5.0);
        ctx.checks.push(c);
    }
    ctx.record("identity-is-iso", |_| {
        let v = iso_check(&w, &w, &WindowMap::identity(&w))?;
        Ok(Check::new("", v.holds, 1).with_cex(v.instance.map(|i| json!({"kind": "rerun", "violated": v.violated, "instance": i}))))
    })
}

fn sample_actions(b: &Backend, window: usize, inner: usize, semilinear: usize, seed: u64) -> Result<Vec<Automorphism>> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for _ in 0..inner {
        out.push(random_automorphism(b, window, &mut r)?);
    }
    if let Some(q) = b.q() {
        for _ in 0..semilinear {
            out.push(Automorphism::Vector(random_semilinear(q, window, &mut r)?));
        }
    }
    Ok(out)
}

fn reconstruction_suite(ctx: &mut Ctx) -> Result<()> {
    let size = match ctx.backend {
        Backend::Vector { .. } => ctx.window_at_most(2),
        Backend::PureSet => ctx.window_at_most(3),
        Backend::Finite(_) => ctx.window(),
    };
    let w = ExpandedWindow::build(&ctx.backend, 1, size, ctx.cfg.caps.triples)?;
    let seed = suite_seed(ctx.cfg.seed, "reconstruction-roundtrip");
    let samples = ctx.cfg.samples;
    let actions = sample_actions(&ctx.backend, size, samples.min(20), samples.min(5), seed)?;
    let targets = sample_actions(&ctx.backend, size, actions.len(), 0, seed.wrapping_add(1))?;
    let cex = |h: &Automorphism, g: Option<&Automorphism>| json!({"kind": "rerun", "suite": "reconstruction-roundtrip", "h": h.to_json(), "g": g.map(Automorphism::to_json)});
    ctx.record("alpha-roundtrip", |_| scan("", actions.iter().zip(&targets), |(h, g)| rec::round_trip(h, g, &w), |(h, g)| cex(h, Some(g))))?;
    ctx.record("functoriality", |_| {
        let mut pairs: Vec<(&Automorphism, Automorphism)> = actions.windows(2).map(|p| (&p[0], p[1].clone())).collect();
        pairs.extend(actions.iter().map(|h| (h, h.inverse())));
        scan("", pairs, |(a, b)| rec::check_functoriality(a, b, &w), |(a, b)| cex(a, Some(b)))
    })?;
    ctx.record("induced-map-is-iso", |_| scan("", actions.iter().take(5), |h| rec::induced_map_is_iso(h, &w), |h| cex(h, None)))
}

fn euler_phi(n: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=n).filter(|&k| gcd(k, n) == 1).count()
}

fn kernel_suite(ctx: &mut Ctx) -> Result<()> {
    let q = ctx.backend.q().ok_or_else(|| Error::Inapplicable("kernel extraction runs on vector windows".into()))?;
    let field = Gf::get(q)?;
    let w = ExpandedWindow::build(&ctx.backend, 1, 2, ctx.cfg.caps.triples)?;
    let identity_table: Vec<u8> = (1..q).collect();
    ctx.record("identity-kernel", |_| {
        let k = kernel_extract(&WindowMap::identity(&w), &w)?;
        Ok(Check::new("", k.tables.iter().all(|t| *t == identity_table), k.tables.len()))
    })?;
    ctx.record("frobenius-kernel", |_| {
        let frob = Automorphism::Vector(Semilinear { frobenius: 1, matrix: Matrix::identity(q, 2) });
        let expected: Vec<u8> = (1..q).map(|l| field.pow(l, field.p as u32)).collect();
        let cex = json!({"kind": "rerun", "suite": "kernel-cor16", "map": frob.to_json()});
        Ok(match kernel_extract(&f_from_alpha(&frob, &w)?, &w) {
            Ok(k) => {
                let ok = k.shared() == Some(&expected);
                Check::new("", ok, k.tables.len()).with_cex(Some(cex)).with_detail(json!({"tables": k.tables, "expected": expected, "fixes_all": k.fixes_all}))
            }
            Err(e) => Check::new("", false, 0).with_cex(Some(cex)).with_detail(json!({"error": e.to_string()})),
        })
    })?;
    ctx.record("realizable-bound", |_| {
        let maps = basis_fixing_maps(q, 2)?;
        let mut tables = std::collections::BTreeSet::new();
        let mut failure = None;
        for s in &maps {
            let h = Automorphism::Vector(s.clone());
            match kernel_extract(&f_from_alpha(&h, &w)?, &w) {
                Ok(k) => match k.shared() {
                    Some(t) => {
                        tables.insert(t.clone());
                    }
                    None => failure = failure.or(Some(h.to_json())),
                },
                Err(_) => failure = failure.or(Some(h.to_json())),
            }
        }
        let bound = euler_phi(q as usize - 1);
        let ok = failure.is_none() && tables.len() <= bound;
        Ok(Check::new("", ok, maps.len())
            .with_cex(Some(json!({"kind": "rerun", "suite": "kernel-cor16", "map": failure})))
            .with_detail(json!({"tables": tables, "bound": bound})))
    })
}

fn diagram_suite(ctx: &mut Ctx) -> Result<()> {
    let q = ctx.backend.q().ok_or_else(|| Error::Inapplicable("the commuting square is checked on vector windows".into()))?;
    let n = 3;
    let w = ExpandedWindow::build(&ctx.backend, 1, n, ctx.cfg.caps.triples)?;
    let geo = canonical_geometry(&ctx.backend, n)?;
    let seed = suite_seed(ctx.cfg.seed, "diagram-thm13");
    let samples = ctx.cfg.samples.min(50);
    let actions = sample_actions(&ctx.backend, n, samples - samples / 2, samples / 2, seed)?;
    let sections: Vec<GeometryAutomorphism> = sample_actions(&ctx.backend, n, 0, ctx.cfg.samples.min(20), seed.wrapping_add(1))?
        .iter()
        .map(|h| phi_map(h, &geo))
        .collect::<Result<_>>()?;
    let t = Instant::now();
    let rep = rec::diagram_check(&actions, &sections, &w, &geo)?;
    let ms = t.elapsed().as_secs_f64() * 1000.0;
    let first = |what: &str| rep.failures.iter().find(|f| f["check"] == what).map(|f| json!({"kind": "rerun", "suite": "diagram-thm13", "failure": f}));
    ctx.checks.push(Check::new("commutes", rep.commuting == rep.samples, rep.samples).with_cex(first("commute")));
    ctx.checks.push(Check::new("section", rep.section_ok == rep.section_samples, rep.section_samples).with_cex(first("section")));
    ctx.times.insert("commutes".into(), ms / 2.0);
    ctx.times.insert("section".into(), ms / 2.0);
    ctx.record_many(|_| {
        Ok(rec::homomorphism_records(&actions, &w, &geo)?
            .into_iter()
            .map(|r| {
                let n = r.evaluations.len();
                Check::new(&format!("homomorphism-{}", r.name), r.law_holds, n).with_cex(Some(json!({"kind": "rerun", "suite": "diagram-thm13", "map": r.name})))
            })
            .collect())
    })?;
    ctx.record("phi-kernel-scalar", |c| {
        let plane = canonical_geometry(&c.backend, 2)?;
        let (count, scalar) = rec::phi_kernel_is_scalar(q, 2, &plane)?;
        Ok(Check::new("", scalar && count == q as usize - 1, count).with_detail(json!({"line_fixing": count, "scalars": q - 1})))
    })
}

fn orbital_suite(ctx: &mut Ctx) -> Result<()> {
    let window = ctx.window_at_most(4);
    let o = orbital_structure(&ctx.backend, window, 2)?;
    let d = o.domain.len();
    ctx.record("partition", |_| {
        let ok = o.relations.iter().enumerate().all(|(i, classes)| classes.iter().map(Vec::len).sum::<usize>() == d.pow(i as u32 + 1));
        Ok(Check::new("", ok, o.relations.len()).with_detail(json!({"class_counts": o.class_counts(), "domain": d})))
    })?;
    let seed = suite_seed(ctx.cfg.seed, "orbital");
    ctx.record("invariance", |c| {
        let gs = sample_actions(&c.backend, window, c.cfg.samples.min(20), 0, seed)?;
        let class_of: std::collections::HashMap<&Vec<crate::element::Element>, usize> =
            o.relations.iter().flat_map(|classes| classes.iter().enumerate().flat_map(|(i, cl)| cl.iter().map(move |t| (t, i)))).collect();
        scan(
            "",
            &gs,
            |g| {
                Ok(o.relations.iter().flatten().flatten().all(|t| {
                    let img: Vec<_> = t.iter().map(|x| g.apply(x)).collect();
                    class_of.get(&img) == class_of.get(t)
                }))
            },
            |g| json!({"kind": "rerun", "suite": "orbital", "g": g.to_json()}),
        )
    })
}

fn dispatch(ctx: &mut Ctx, suite: &str) -> Result<()> {
    match suite {
        "galois-roundtrip" => galois_suite(ctx),
        "stab-characterizations" => stab_suite(ctx),
        "lascar-verify" => lascar_suite(ctx),
        "rank-axioms" => rank_suite(ctx),
        "stationary-axioms" => stationary_suite(ctx),
        "canonical-base" => canonical_base_suite(ctx),
        "generation" => generation_suite(ctx),
        "pregeometry" => pregeometry_suite(ctx),
        "expanded-window" => expanded_suite(ctx),
        "reconstruction-roundtrip" => reconstruction_suite(ctx),
        "kernel-cor16" => kernel_suite(ctx),
        "diagram-thm13" => diagram_suite(ctx),
        "orbital" => orbital_suite(ctx),
        other => Err(Error::Invalid(format!("unknown suite '{other}'"))),
    }
}

/// Runs one suite. Inapplicable backends and exceeded caps skip the suite;
/// other errors become a failing `error` check.
pub fn run_suite(cfg: &RunConfig, suite: &str) -> Result<(SuiteReport, SuiteTiming)> {
    let description = SUITES.iter().find(|(n, _)| *n == suite).map(|(_, d)| d.to_string()).ok_or_else(|| Error::Invalid(format!("unknown suite '{suite}'")))?;
    let t = Instant::now();
    let mut ctx = Ctx::new(cfg, cfg.build_backend()?);
    let mut note = None;
    match dispatch(&mut ctx, suite) {
        Ok(()) => {}
        Err(e @ (Error::Inapplicable(_) | Error::NotAttempted(_) | Error::SizeBound { .. })) => note = Some(e.to_string()),
        Err(e) => ctx.checks.push(Check::new("error", false, 0).with_cex(Some(json!({"kind": "rerun", "suite": suite}))).with_detail(json!({"error": e.to_string()}))),
    }
    let verdict = if ctx.checks.is_empty() {
        Verdict::Skipped
    } else if ctx.checks.iter().any(|c| c.status == Status::Fail) {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    let timing = SuiteTiming { total_ms: t.elapsed().as_secs_f64() * 1000.0, checks: ctx.times };
    Ok((SuiteReport { suite: suite.into(), description, verdict, checks: ctx.checks, note }, timing))
}

pub const DEFAULT_WORKERS: usize = 4;

pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let backend = cfg.build_backend()?;
    let suites = cfg.selected();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(DEFAULT_WORKERS))
        .build()
        .map_err(|e| Error::Invalid(format!("worker pool: {e}")))?;
    let results: Vec<(SuiteReport, SuiteTiming)> = pool.install(|| suites.par_iter().map(|s| run_suite(cfg, s)).collect::<Result<_>>())?;
    let mut notes = vec!["finite windows have no countable normal chains, so OL(M) collapses into GS(M) here".to_string()];
    if let Some(f) = cfg.inject {
        notes.push(format!("fault injected: {}", serde_json::to_value(f).expect("serializes").as_str().unwrap_or("?")));
    }
    let mut timings = BTreeMap::new();
    let mut reports = Vec::new();
    for (r, t) in results {
        timings.insert(r.suite.clone(), t);
        reports.push(r);
    }
    let verdict = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if reports.iter().all(|r| r.verdict == Verdict::Skipped) {
        Verdict::Skipped
    } else {
        Verdict::Pass
    };
    Ok(RunReport { canonical: Canonical { config: cfg.clone(), backend: backend.id(), notes, suites: reports, verdict }, timings })
}

/// Outcome of re-evaluating one counterexample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplayOutcome {
    pub suite: String,
    pub check: String,
    /// The failure shows up again.
    pub reproduced: bool,
    pub detail: Value,
}

/// Accepts either a full report (its first failing check is replayed) or a
/// payload {"config", "suite", "check", "counterexample"}.
pub fn replay(payload: &Value) -> Result<ReplayOutcome> {
    let payload = if payload.get("canonical").is_some() {
        let report: &Value = &payload["canonical"];
        let failure = report["suites"]
            .as_array()
            .into_iter()
            .flatten()
            .find_map(|s| s["checks"].as_array().into_iter().flatten().find(|c| c["status"] == "fail").map(|c| (s["suite"].clone(), c.clone())))
            .ok_or_else(|| Error::Invalid("report has no failing check to replay".into()))?;
        json!({"config": report["config"], "suite": failure.0, "check": failure.1["name"], "counterexample": failure.1["counterexample"]})
    } else {
        payload.clone()
    };
    let cfg = RunConfig::from_json(payload["config"].clone())?;
    let suite = payload["suite"].as_str().ok_or_else(|| Error::Invalid("replay needs a suite".into()))?.to_string();
    let check = payload["check"].as_str().ok_or_else(|| Error::Invalid("replay needs a check".into()))?.to_string();
    let cex = &payload["counterexample"];
    let b = cfg.build_backend()?;
    let ctx = Ctx::new(&cfg, b.clone());
    let bad = |m: &str| Error::Invalid(format!("counterexample: {m}"));
    let (holds, detail) = match cex["kind"].as_str().unwrap_or("rerun") {
        "rank" => {
            let inst = RankInstance::from_json(&b, &cex["instance"])?;
            (rank::rank_axiom_holds(&ctx.rank_function()?, cex["axiom"].as_str().ok_or_else(|| bad("axiom"))?, &inst)?, cex.clone())
        }
        "stationary" => {
            let inst = StationaryInstance::from_json(&b, &cex["instance"])?;
            (rank::stationary_axiom_holds(&ctx.rank_function()?, cex["axiom"].as_str().ok_or_else(|| bad("axiom"))?, &inst)?, cex.clone())
        }
        "closure" => {
            let inst = ClosureInstance::from_json(&cex["instance"])?;
            let op: Box<dyn ClosureOp> = match (cex["op"]["path"].as_u64(), cex["op"]["window"].as_u64()) {
                (Some(n), _) => Box::new(PathConvexity { n: n as usize }),
                (None, Some(w)) => Box::new(BackendClosure::new(&b, w as usize)),
                _ => return Err(bad("closure operator")),
            };
            (closure_axiom_holds(op.as_ref(), cex["axiom"].as_str().ok_or_else(|| bad("axiom"))?, &inst)?, cex.clone())
        }
        "galois" => {
            let k = set_from_json(&b, &cex["set"])?;
            (stab::galois_roundtrip(&b, &k, cex["window"].as_u64().ok_or_else(|| bad("window"))? as usize)?, cex.clone())
        }
        "lascar1" => {
            let (k, s) = (set_from_json(&b, &cex["k"])?, set_from_json(&b, &cex["s"])?);
            match lascar_condition1(&b, &k, &s) {
                Ok(w) => (verify_condition1(&k, &s, &w), json!({"witness": w.to_json()})),
                Err(Error::NoWitness(m)) => (false, json!({"no_witness": m})),
                Err(e) => return Err(e),
            }
        }
        "generation" => {
            let (x, y) = (set_from_json(&b, &cex["a"])?, set_from_json(&b, &cex["b"])?);
            let cert = rank::generation_check_sets(&b, cex["n"].as_u64().ok_or_else(|| bad("n"))? as usize, &x, &y)?;
            let ok = if check == "contained" { cert.contained } else { cert.equal };
            (ok, serde_json::to_value(cert).expect("serializes"))
        }
        "canonical-base" => {
            let (x, y) = (set_from_json(&b, &cex["a"])?, set_from_json(&b, &cex["b"])?);
            let rf = ctx.rank_function()?;
            match canonical_base(&rf, &x, &y) {
                Ok(cb) => (cb == rank::meet(&b, &x, &y)? && indep(&rf, &x, &y, &cb)?.verdict, json!({"base": set_json(&cb)})),
                Err(e) => (false, json!({"error": e.to_string()})),
            }
        }
        "descriptor-pair" => {
            let h1 = stab::GsDescriptor::from_json(&b, &cex["h1"])?;
            let h2 = stab::GsDescriptor::from_json(&b, &cex["h2"])?;
            let (e1, e2) = (descriptor_explicit(&b, &h1)?, descriptor_explicit(&b, &h2)?);
            let (fast, literal) = if cex["test"] == "normal" {
                (is_normal_in(&h1, &h2)?, e1.is_subgroup_of(&e2) && e1.is_normal_in(&e2))
            } else {
                (is_subgroup(&h1, &h2)?, e1.is_subgroup_of(&e2))
            };
            (fast == literal, json!({"descriptor_test": fast, "literal": literal}))
        }
        _ => {
            let (r, _) = run_suite(&cfg, &suite)?;
            let c = r.checks.iter().find(|c| c.name == check).ok_or_else(|| bad("check not produced by the suite"))?;
            (c.status == Status::Pass, json!({"rerun": c}))
        }
    };
    Ok(ReplayOutcome { suite, check, reproduced: !holds, detail })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(v: Value) -> RunConfig {
        RunConfig::from_json(v).unwrap()
    }

    #[test]
    fn galois_suite_passes_on_gf2() {
        let r = run(&cfg(json!({"backend": "vector", "q": 2, "suites": ["galois-roundtrip"]}))).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.canonical.suites[0].verdict, Verdict::Pass);
        assert!(r.canonical.suites[0].checks[0].samples > 1);
    }

    #[test]
    fn schema_violations_are_rejected() {
        for bad in [
            json!({"backend": "vector", "q": 2, "suites": ["no-such-suite"]}),
            json!({"backend": "vector"}),
            json!({"backend": "vector", "q": 6}),
            json!({"backend": "torus", "q": 2}),
            json!({"backend": "vector", "q": 2, "caps": {"triples": 0}}),
            json!({"backend": "vector", "q": 2, "colour": "red"}),
        ] {
            assert!(matches!(RunConfig::from_json(bad), Err(Error::Invalid(_))));
        }
    }

    #[test]
    fn thirteen_described_suites() {
        let s = list_suites();
        assert_eq!(s.len(), 13);
        assert!(s.iter().all(|(_, d)| d.contains(':')));
    }

    #[test]
    fn injected_rank_fault_fails_and_replays() {
        let r = run(&cfg(json!({"backend": "vector", "q": 2, "suites": ["stationary-axioms"], "samples": 20, "inject": "rank"}))).unwrap();
        assert_eq!(r.exit_code(), 1);
        let failing: Vec<&str> = r.canonical.suites[0].checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.as_str()).collect();
        assert!(failing.contains(&"monotonicity"), "{failing:?}");
        let payload: Value = serde_json::from_str(&r.to_json()).unwrap();
        let out = replay(&payload).unwrap();
        assert!(out.reproduced);
        // the same instance holds once the fault is removed
        let mut clean = r.first_failure().unwrap();
        clean["config"]["inject"] = Value::Null;
        assert!(!replay(&clean).unwrap().reproduced);
    }

    #[test]
    fn injected_exchange_fault_fails_and_replays() {
        let r = run(&cfg(json!({"backend": "vector", "q": 2, "suites": ["pregeometry"], "samples": 50, "inject": "exchange"}))).unwrap();
        let ex = r.canonical.suites[0].checks.iter().find(|c| c.name == "exchange").unwrap();
        assert_eq!(ex.status, Status::Fail);
        let out = replay(&r.first_failure().unwrap()).unwrap();
        assert_eq!(out.check, "exchange");
        assert!(out.reproduced);
    }

    #[test]
    fn canonical_section_is_deterministic() {
        let c = cfg(json!({"backend": "vector", "q": 3, "suites": ["rank-axioms", "lascar-verify", "canonical-base"], "samples": 30, "seed": 9}));
        let (a, b) = (run(&c).unwrap(), run(&c).unwrap());
        assert_eq!(a.canonical_json(), b.canonical_json());
        let other = run(&RunConfig { seed: 10, ..c }).unwrap();
        assert_ne!(a.canonical_json(), other.canonical_json());
    }

    #[test]
    fn inapplicable_suites_are_skipped() {
        let r = run(&cfg(json!({"backend": "pure", "suites": ["kernel-cor16", "canonical-base", "orbital"], "samples": 10}))).unwrap();
        let v: Vec<Verdict> = r.canonical.suites.iter().map(|s| s.verdict).collect();
        assert_eq!(v, vec![Verdict::Skipped, Verdict::Skipped, Verdict::Pass]);
        assert_eq!(r.exit_code(), 0);
        let r = run(&cfg(json!({"backend": "vector", "q": 2, "suites": ["orbital"]}))).unwrap();
        assert_eq!(r.canonical.suites[0].verdict, Verdict::Skipped);
    }

    #[test]
    fn markdown_lists_every_check() {
        let r = run(&cfg(json!({"backend": "vector", "q": 2, "suites": ["expanded-window"]}))).unwrap();
        let md = r.to_markdown();
        for c in &r.canonical.suites[0].checks {
            assert!(md.contains(&format!("| {} |", c.name)));
        }
    }

    #[test]
    fn euler_phi_small_values() {
        assert_eq!((1..=10).map(euler_phi).collect::<Vec<_>>(), vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4]);
    }
}
