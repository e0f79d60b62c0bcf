//! Scalar-tracking rewrite engine over the rule catalogue.
//!
//! A [`RewriteState`] pairs a diagram with an exact scalar; every rule
//! multiplies the scalar by its factor `F` where `⟦before⟧ = F·⟦after⟧`,
//! so `scalar·⟦graph⟧` never changes.

mod catalogue;
mod gen;
mod scalars;
mod soundcheck;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::Cyclo;
use crate::diagram::{Colour, Diagram, Edge, EdgeKind, Phase, VertexKind};
use crate::error::{Error, Result};
use crate::interp::interp_raw;
use crate::modp::{inv_nz, Prime, Zp};

pub use catalogue::{catalogue, find_rule, Rule, RuleClass};
pub use gen::{dress, random_diagram, random_rewrites, RandomSpec};
pub use scalars::{add_hloop, add_r, add_w, zero_form};
pub use soundcheck::{soundcheck, Failure, RuleReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSite {
    pub rule: String,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub params: Vec<i64>,
}

impl RuleSite {
    pub fn new(rule: &str, vertices: Vec<usize>) -> RuleSite {
        RuleSite { rule: rule.to_string(), vertices, edges: vec![], params: vec![] }
    }

    pub fn with_edges(mut self, edges: Vec<usize>) -> RuleSite {
        self.edges = edges;
        self
    }

    pub fn with_params(mut self, params: Vec<i64>) -> RuleSite {
        self.params = params;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: String,
    pub vertices: Vec<usize>,
    pub factor: Cyclo,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{} [{}] {}", self.rule, ids.join(","), self.factor)
    }
}

#[derive(Clone, Debug)]
pub struct RewriteState {
    pub graph: Diagram,
    pub scalar: Cyclo,
    pub trace: Vec<TraceEntry>,
}

impl RewriteState {
    pub fn new(graph: Diagram) -> RewriteState {
        let scalar = Cyclo::one(graph.p);
        RewriteState { graph, scalar, trace: Vec::new() }
    }

    /// Record a step that has already transformed `graph` with factor `f`.
    pub fn record(&mut self, rule: &str, vertices: Vec<usize>, f: Cyclo) {
        self.scalar = &self.scalar * &f;
        self.trace.push(TraceEntry { rule: rule.to_string(), vertices, factor: f });
    }

    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|t| format!("{t}\n")).collect()
    }
}

/// Apply one rule at a site.
pub fn apply(state: &RewriteState, site: &RuleSite) -> Result<RewriteState> {
    let rule = find_rule(&site.rule)
        .ok_or_else(|| Error::Domain(format!("unknown rule {}", site.rule)))?;
    let mut next = state.clone();
    let f = (rule.apply)(&mut next.graph, site)?;
    next.record(rule.name, site.vertices.clone(), f);
    Ok(next)
}

pub fn apply_mut(state: &mut RewriteState, site: &RuleSite) -> Result<()> {
    *state = apply(state, site)?;
    Ok(())
}

// ----- edge-end algebra -----

/// Reverse an edge kind's orientation.
pub(crate) fn rev(k: EdgeKind) -> EdgeKind {
    match k {
        EdgeKind::Mul(z) => EdgeKind::Mul(inv_nz(z)),
        k => k,
    }
}

/// Edge from `O` to `A` followed by `H(c)` at `A`.
pub(crate) fn then_h(k: EdgeKind, c: Zp) -> EdgeKind {
    match k {
        EdgeKind::Plain => EdgeKind::H(c),
        EdgeKind::H(w) => EdgeKind::Mul(inv_nz(c) * w),
        EdgeKind::Mul(z) => EdgeKind::H(-(c * z)),
    }
}

/// Edge from `O` to `A` followed by `Mul(x)` at `A`; `None` means plain.
pub(crate) fn then_mul(k: EdgeKind, x: Zp) -> EdgeKind {
    let p = x.prime();
    match k {
        EdgeKind::Plain => plain_if_identity(EdgeKind::Mul(x), p),
        EdgeKind::H(w) => EdgeKind::H(-(w * inv_nz(x))),
        EdgeKind::Mul(z) => plain_if_identity(EdgeKind::Mul(-(x * z)), p),
    }
}

/// `Mul(-1)` is the identity; represent it as a plain edge.
pub(crate) fn plain_if_identity(k: EdgeKind, p: Prime) -> EdgeKind {
    match k {
        EdgeKind::Mul(z) if z == -p.one() => EdgeKind::Plain,
        k => k,
    }
}

/// Transform the end of `e` at `b` (if `at_b`) or at `a`.
pub(crate) fn map_end(e: &mut Edge, at_b: bool, f: &dyn Fn(EdgeKind) -> EdgeKind) {
    if at_b {
        e.kind = f(e.kind);
    } else {
        e.kind = rev(f(rev(e.kind)));
    }
}

/// Transform every edge end incident to `v`.
pub(crate) fn map_all_ends(d: &mut Diagram, v: usize, f: &dyn Fn(EdgeKind) -> EdgeKind) {
    for e in d.edges.iter_mut() {
        if e.b == v {
            map_end(e, true, f);
        }
        if e.a == v {
            map_end(e, false, f);
        }
    }
}

pub(crate) fn retarget(e: &mut Edge, from: usize, to: usize) {
    if e.a == from {
        e.a = to;
    } else if e.b == from {
        e.b = to;
    }
}

/// Colour-change the spider `v` in place: the phase is kept and every leg
/// picks up `H(1)` (green to red) or `H(-1)` (red to green).
pub fn colour_change_vertex(d: &mut Diagram, v: usize) -> Result<()> {
    let p = d.p;
    let (c, ph) = match d.kind(v) {
        VertexKind::Z(ph) => (p.one(), VertexKind::X(ph)),
        VertexKind::X(ph) => (-p.one(), VertexKind::Z(ph)),
        _ => return Err(Error::Domain(format!("vertex {v} is not a spider"))),
    };
    map_all_ends(d, v, &|k| then_h(k, c));
    d.vertices.insert(v, ph);
    Ok(())
}

/// The colour-change meta transform: every spider swaps colour and every
/// boundary wire picks up `H(1)` at its boundary end, so that
/// `⟦S(A)⟧ = H^{⊗n} ∘ ⟦A⟧ ∘ H^{⊗m}`.
pub fn colour_change_meta(d: &Diagram) -> Diagram {
    let mut out = d.clone();
    for v in d.spiders() {
        colour_change_vertex(&mut out, v).expect("spider");
    }
    let p = d.p;
    for v in d.inputs.iter().chain(&d.outputs) {
        map_all_ends(&mut out, *v, &|k| then_h(k, p.one()));
    }
    out
}

// ----- strategies -----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Fuse green spiders joined by plain edges.
    FuseAll,
    /// Remove degree-2 phase-free green spiders.
    IdentityCleanup,
    /// Reduce parallel plain edges between opposite colours modulo `p`.
    SpiderWars,
    /// All of the above to a fixed point.
    Basic,
}

fn measure(d: &Diagram) -> (usize, usize, usize) {
    let plain = d.edges.iter().filter(|e| e.kind == EdgeKind::Plain).count();
    let ids = d
        .spiders()
        .into_iter()
        .filter(|&v| d.phase(v).map_or(false, |ph| ph.is_zero()) && d.degree(v) == 2)
        .count();
    (d.vertices.len(), plain, ids)
}

fn next_site(d: &Diagram, s: Strategy) -> Option<RuleSite> {
    let fuse = || {
        d.edges.iter().enumerate().find_map(|(i, e)| {
            let ok = e.kind == EdgeKind::Plain
                && !e.is_loop()
                && d.kind(e.a).colour() == Some(Colour::Z)
                && d.kind(e.b).colour() == Some(Colour::Z);
            ok.then(|| RuleSite::new("fusion", vec![e.a.min(e.b), e.a.max(e.b)]).with_edges(vec![i]))
        })
    };
    let ident = || {
        d.spiders().into_iter().find_map(|v| {
            let ok = matches!(d.kind(v), VertexKind::Z(ph) if ph.is_zero())
                && d.degree(v) == 2
                && d.incident(v).len() == 2
                && d.incident(v).iter().any(|&i| d.edges[i].kind == EdgeKind::Plain);
            ok.then(|| RuleSite::new("g_elim", vec![v]))
        })
    };
    let wars = || {
        for v in d.spiders() {
            if d.kind(v).colour() != Some(Colour::X) {
                continue;
            }
            for u in d.neighbours(v) {
                if d.kind(u).colour() != Some(Colour::Z) {
                    continue;
                }
                let n = d
                    .edges_between(u, v)
                    .into_iter()
                    .filter(|&i| d.edges[i].kind == EdgeKind::Plain)
                    .count();
                if n as u64 >= d.p.get() {
                    return Some(RuleSite::new("spider_wars", vec![v, u]));
                }
            }
        }
        None
    };
    match s {
        Strategy::FuseAll => fuse(),
        Strategy::IdentityCleanup => ident(),
        Strategy::SpiderWars => wars(),
        Strategy::Basic => fuse().or_else(ident).or_else(wars),
    }
}

/// Run a strategy to its fixed point; each step strictly decreases the
/// measure (vertices, plain edges, identity spiders) lexicographically.
pub fn simplify(state: &RewriteState, s: Strategy) -> Result<RewriteState> {
    let mut st = state.clone();
    while let Some(site) = next_site(&st.graph, s) {
        let before = measure(&st.graph);
        st = apply(&st, &site)?;
        let after = measure(&st.graph);
        if after >= before {
            return Err(Error::Invariant(format!("{} did not decrease the measure", site.rule)));
        }
    }
    Ok(st)
}

// ----- random circuits -----

/// Gate-level building blocks.
pub mod gates {
    use super::*;

    /// `S|m⟩ = ω^{2^{-1}m(m+1)}|m⟩`.
    pub fn s_gate(p: Prime) -> Diagram {
        Diagram::spider(p, Colour::Z, 1, 1, Phase::of(p, 1, 1))
    }

    pub fn h_gate(p: Prime) -> Diagram {
        Diagram::hadamard(p)
    }

    /// `X|m⟩ = |m+1⟩`.
    pub fn x_gate(p: Prime) -> Diagram {
        let mut d = Diagram::empty(p);
        let i = d.add_input();
        let o = d.add_output();
        let r = d.add_x(-2, 0);
        d.plain(i, r);
        d.mul(r, o, 1);
        d
    }

    /// `Z|m⟩ = ω^m|m⟩`.
    pub fn z_gate(p: Prime) -> Diagram {
        Diagram::spider(p, Colour::Z, 1, 1, Phase::of(p, 2, 0))
    }

    /// `E|m⟩|n⟩ = ω^{mn}|m⟩|n⟩`, including the `√p` normalization.
    pub fn e_gate(p: Prime) -> Diagram {
        let mut d = Diagram::empty(p);
        let i0 = d.add_input();
        let i1 = d.add_input();
        let o0 = d.add_output();
        let o1 = d.add_output();
        let a = d.add_z(0, 0);
        let b = d.add_z(0, 0);
        d.plain(i0, a);
        d.plain(a, o0);
        d.plain(i1, b);
        d.plain(b, o1);
        d.h(a, b, 1);
        let (x, z) = (d.add_x(0, 0), d.add_z(0, 0));
        d.plain(x, z);
        d
    }

    /// A single-wire gate placed on wire `k` of `n`.
    pub fn on_wire(g: &Diagram, k: usize, n: usize) -> Diagram {
        let p = g.p;
        let w = g.inputs.len();
        let before = Diagram::identity(p, k);
        let after = Diagram::identity(p, n - k - w);
        before.tensor(g).unwrap().tensor(&after).unwrap()
    }
}

/// Random stabiliser circuit on `wires` qupits with `depth` gates.
pub fn random_clifford_diagram(p: Prime, wires: usize, depth: usize, seed: u64) -> Diagram {
    assert!(wires >= 1, "need at least one wire");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Diagram::identity(p, wires);
    for _ in 0..depth {
        let k = rng.gen_range(0..wires);
        let g = match rng.gen_range(0..8) {
            0 => gates::s_gate(p),
            1 | 2 => gates::h_gate(p),
            3 if wires >= 2 && k + 1 < wires => gates::e_gate(p),
            4 => gates::x_gate(p),
            5 => gates::z_gate(p),
            6 => Diagram::multiplier(p, p.zp(rng.gen_range(1..p.get() as i64))),
            _ => {
                // a measurement-like projection: effect then fresh basis state
                let mut g = Diagram::empty(p);
                let i = g.add_input();
                let o = g.add_output();
                let e = g.add_x(2 * rng.gen_range(0..p.get() as i64), 0);
                let s = g.add_x(2 * rng.gen_range(0..p.get() as i64), 0);
                g.plain(i, e);
                g.plain(s, o);
                g
            }
        };
        let g = gates::on_wire(&g, k, wires);
        d = d.compose(&g).expect("arity");
    }
    d
}

/// Check `⟦before⟧ = scalar·⟦after⟧` exactly for one application.
pub fn check_site(d: &Diagram, site: &RuleSite) -> Result<bool> {
    let st = RewriteState::new(d.clone());
    let after = apply(&st, site)?;
    after.graph.validate()?;
    let b = interp_raw(d)?;
    let a = interp_raw(&after.graph)?;
    Ok(b.scaled_eq(&Cyclo::one(d.p), &a, &after.scalar))
}
