//! Graph states with local Cliffords.
//!
//! An [`RGsLc`] is rendered from an affine-quadratic state parametrized by a
//! set of unmarked outputs `F`. With `ψ(o) = σ ω^{q(o_F)} [o_D = A o_F + b]`:
//!
//! * unmarked vertex `f` carries `Z(s_f, t_f)`;
//! * marked vertex `d` carries `X(0,1) ∘ Z(2 b_d, 1)` and is joined to each
//!   `f` by `H(A_df)`; the red part forces `o_d = A_d·o_F + b_d` and leaves
//!   a phase `ω^{-2^{-1} o_d²}`, which the unmarked phases and edges absorb.
//!
//! Marked vertices are never adjacent.

use std::fmt;

use crate::cyclo::{quadratic_gauss_sum, sqrt_p_pow, Cyclo};
use crate::diagram::{Diagram, EdgeKind, Phase, VertexKind};
use crate::error::{Error, Result};
use crate::graphstate::WeightedGraph;
use crate::modp::{half, Prime};
use crate::rules::{apply_mut, zero_form, RewriteState, RuleSite};

use super::aq::AqState;
use super::c1::{c1_normalize, C1Gen, C1NormalForm};

// ----- graph-like diagrams -----

fn is_boundary(d: &Diagram, v: usize) -> bool {
    d.kind(v).is_boundary()
}

fn graph_like_site(d: &Diagram) -> Option<RuleSite> {
    for (&v, k) in &d.vertices {
        if let VertexKind::X(_) = k {
            return Some(RuleSite::new("colour", vec![v]));
        }
    }
    for (i, e) in d.edges.iter().enumerate() {
        let (ba, bb) = (is_boundary(d, e.a), is_boundary(d, e.b));
        if !(ba || bb) {
            continue;
        }
        if e.kind != EdgeKind::Plain {
            let rule = if ba { "id_intro" } else { "mul_reverse" };
            return Some(RuleSite::new(rule, vec![]).with_edges(vec![i]));
        }
        if ba && bb {
            return Some(RuleSite::new("id_intro", vec![]).with_edges(vec![i]));
        }
    }
    for (i, e) in d.edges.iter().enumerate() {
        if let EdgeKind::Mul(_) = e.kind {
            return Some(RuleSite::new("hadamard_unfold", vec![]).with_edges(vec![i]));
        }
    }
    for (i, e) in d.edges.iter().enumerate() {
        if e.kind != EdgeKind::Plain || is_boundary(d, e.a) || is_boundary(d, e.b) {
            continue;
        }
        return Some(if e.is_loop() {
            RuleSite::new("loop", vec![e.a]).with_edges(vec![i])
        } else {
            RuleSite::new("fusion", vec![e.a, e.b]).with_edges(vec![i])
        });
    }
    for (i, e) in d.edges.iter().enumerate() {
        if e.is_loop() {
            return Some(RuleSite::new("h_loop", vec![e.a]).with_edges(vec![i]));
        }
    }
    for e in &d.edges {
        let hs = d.edges_between(e.a, e.b).len();
        if hs >= 2 {
            return Some(RuleSite::new("hadamard_sum", vec![e.a, e.b]));
        }
    }
    None
}

/// Whether `d` has only green spiders, plain edges only to boundaries,
/// at most one (Hadamard) edge per pair of spiders and no self-loops.
pub fn is_graph_like(d: &Diagram) -> bool {
    graph_like_site(d).is_none() && d.vertices.values().all(|k| matches!(k, VertexKind::Z(_)) || k.is_boundary())
}

/// Rewrite to graph-like form with the rule catalogue.
pub fn to_graph_like(d: &Diagram) -> Result<RewriteState> {
    if d.has_discard() {
        return Err(Error::Domain("graph-like form needs a discard-free diagram".into()));
    }
    let mut st = RewriteState::new(d.clone());
    while let Some(site) = graph_like_site(&st.graph) {
        apply_mut(&mut st, &site)?;
    }
    Ok(st)
}

/// Remove every spider without an output wire. The result is the
/// rendered rGS+LC diagram of the state; a state in which every spider
/// already touches a boundary is returned unchanged.
pub fn eliminate_internal(state: &RewriteState) -> Result<RewriteState> {
    let d = &state.graph;
    if !d.inputs.is_empty() {
        return Err(Error::Shape("eliminate_internal expects a state".into()));
    }
    let internal = d.spiders().into_iter().any(|v| d.neighbours(v).iter().all(|&u| !is_boundary(d, u)));
    if !internal {
        return Ok(state.clone());
    }
    let mut aq = AqState::from_diagram(d)?;
    aq.canonicalize();
    let r = RGsLc::from_canonical(aq);
    let mut next = RewriteState { graph: r.to_diagram(), scalar: state.scalar.clone(), trace: state.trace.clone() };
    for (step, f) in r.state.log.iter() {
        next.record(step, vec![], f.clone());
    }
    next.record("render", vec![], r.render_factor.clone());
    Ok(next)
}

// ----- rGS+LC -----

#[derive(Clone, Debug)]
pub struct RGsLc {
    pub p: Prime,
    pub graph: WeightedGraph,
    pub marked: Vec<bool>,
    /// Green phase of each vertex; marked vertices always have `t = 1`.
    pub phases: Vec<Phase>,
    pub scalar: Cyclo,
    pub zero: bool,
    state: AqState,
    render_factor: Cyclo,
}

impl RGsLc {
    fn from_canonical(state: AqState) -> RGsLc {
        let f = state.greedy_pivots();
        RGsLc::render(state, &f)
    }

    /// Render a state whose variables are exactly the outputs `f`.
    fn render(state: AqState, f: &[usize]) -> RGsLc {
        let p = state.p;
        let n = state.outs.len();
        let mut graph = WeightedGraph::empty(p, n);
        if state.zero {
            return RGsLc {
                p,
                graph,
                marked: vec![false; n],
                phases: vec![Phase::zero(p); n],
                scalar: Cyclo::zero(p),
                zero: true,
                render_factor: Cyclo::one(p),
                state,
            };
        }
        let h = half(p);
        let r = f.len();
        let mut q = state.q.clone();
        let mut l = state.l.clone();
        let mut c = state.c;
        let mut marked = vec![false; n];
        let mut phases = vec![Phase::zero(p); n];
        for (j, o) in state.outs.iter().enumerate() {
            if f.contains(&j) {
                continue;
            }
            marked[j] = true;
            phases[j] = Phase::new(p.zp(2) * o.b, p.one());
            for i in 0..r {
                l[i] += o.b * o.a[i];
                for k in 0..r {
                    q[i][k] += o.a[i] * o.a[k];
                }
                if !o.a[i].is_zero() {
                    graph.set(j, f[i], o.a[i]);
                }
            }
            c += h * o.b * o.b;
        }
        for i in 0..r {
            phases[f[i]] = Phase::new(p.zp(2) * l[i], q[i][i]);
            for k in i + 1..r {
                graph.set(f[i], f[k], q[i][k]);
            }
        }
        let m = marked.iter().filter(|&&x| x).count() as u64;
        let g1 = quadratic_gauss_sum(p.one()).expect("unit");
        let g1_inv = g1.inv_unit().expect("unit");
        let render_factor = &(&Cyclo::omega_pow(c) * &sqrt_p_pow(p, graph.edge_count() as i64))
            * &g1_inv.pow(m);
        let scalar = &state.sigma * &render_factor;
        RGsLc { p, graph, marked, phases, scalar, zero: false, state, render_factor }
    }

    pub fn outputs(&self) -> usize {
        self.marked.len()
    }

    fn pivots(&self) -> Vec<usize> {
        (0..self.outputs()).filter(|&j| !self.marked[j]).collect()
    }

    /// The diagram without its scalar: vertex `v` has id `v`, output `v`
    /// has id `n + v`, and red parts of marked vertices follow.
    pub fn to_diagram(&self) -> Diagram {
        let p = self.p;
        let n = self.outputs();
        if self.zero {
            return zero_form(p, 0, n);
        }
        let mut d = Diagram::empty(p);
        for v in 0..n {
            d.add_vertex(VertexKind::Z(self.phases[v]));
        }
        let outs: Vec<usize> = (0..n).map(|_| d.add_output()).collect();
        for v in 0..n {
            if self.marked[v] {
                let x = d.add_x(0, 1);
                d.plain(v, x);
                d.plain(x, outs[v]);
            } else {
                d.plain(v, outs[v]);
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                let x = self.graph.get(u, v);
                if !x.is_zero() {
                    d.add_edge(u, v, EdgeKind::H(x));
                }
            }
        }
        d
    }

    pub fn to_rewrite_state(&self) -> RewriteState {
        let mut st = RewriteState::new(self.to_diagram());
        st.scalar = if self.zero { Cyclo::one(self.p) } else { self.scalar.clone() };
        st
    }

    /// No two marked vertices are adjacent.
    pub fn check_reduced(&self) -> Result<()> {
        let n = self.outputs();
        for u in 0..n {
            for v in u + 1..n {
                if self.marked[u] && self.marked[v] && !self.graph.get(u, v).is_zero() {
                    return Err(Error::Invariant(format!("marked vertices {u} and {v} are adjacent")));
                }
            }
        }
        Ok(())
    }

    /// Unmark `q` and mark its neighbour `f`.
    pub fn exchange(&mut self, q: usize, f: usize) -> Result<()> {
        if !self.marked[q] || self.marked[f] || self.graph.get(q, f).is_zero() {
            return Err(Error::Domain(format!("cannot exchange marked {q} with {f}")));
        }
        let mut piv = self.pivots();
        piv.retain(|&x| x != f);
        piv.push(q);
        piv.sort_unstable();
        let mut st = self.state.clone();
        st.reparametrize(&piv)?;
        st.log.push(("exchange".into(), Cyclo::one(self.p)));
        *self = RGsLc::render(st, &piv);
        Ok(())
    }

    /// Same rendered form: graph, marks, phases and scalar.
    pub fn same_form(&self, o: &RGsLc) -> bool {
        if self.zero || o.zero {
            return self.zero && o.zero && self.outputs() == o.outputs();
        }
        self.p == o.p
            && self.graph == o.graph
            && self.marked == o.marked
            && self.phases == o.phases
            && self.scalar == o.scalar
    }

    pub fn to_gs_lc(&self) -> GsLc {
        let p = self.p;
        let n = self.outputs();
        let mut scalar = if self.zero { Cyclo::zero(p) } else { self.scalar.clone() };
        let mut ops = Vec::with_capacity(n);
        for v in 0..n {
            let ph = self.phases[v];
            let word = if self.marked[v] {
                vec![C1Gen::Z(ph), C1Gen::X(Phase::new(p.zero(), p.one()))]
            } else {
                vec![C1Gen::Z(ph)]
            };
            let mut f = c1_normalize(p, &word);
            scalar = &scalar * &f.scalar;
            f.scalar = Cyclo::one(p);
            ops.push(f);
        }
        GsLc { graph: self.graph.clone(), vertex_ops: ops, scalar, zero: self.zero }
    }
}

impl fmt::Display for RGsLc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "zero state on {} outputs", self.outputs());
        }
        writeln!(f, "scalar {}", self.scalar)?;
        for v in 0..self.outputs() {
            let m = if self.marked[v] { " marked" } else { "" };
            writeln!(f, "vertex {v}: Z({},{}){m}", self.phases[v].x, self.phases[v].y)?;
        }
        write!(f, "{}", self.graph)
    }
}

// ----- GS+LC -----

#[derive(Clone, Debug)]
pub struct GsLc {
    pub graph: WeightedGraph,
    /// One operator per output; their scalars are folded into `scalar`.
    pub vertex_ops: Vec<C1NormalForm>,
    pub scalar: Cyclo,
    pub zero: bool,
}

impl GsLc {
    /// The diagram without its scalar.
    pub fn to_diagram(&self) -> Diagram {
        let p = self.graph.p;
        let n = self.graph.n;
        if self.zero {
            return zero_form(p, 0, n);
        }
        let mut d = Diagram::empty(p);
        for _ in 0..n {
            d.add_z(0, 0);
        }
        for u in 0..n {
            for v in u + 1..n {
                let x = self.graph.get(u, v);
                if !x.is_zero() {
                    d.add_edge(u, v, EdgeKind::H(x));
                }
            }
        }
        for v in 0..n {
            let o = d.add_output();
            d.plain(v, o);
        }
        for (v, op) in self.vertex_ops.iter().enumerate() {
            d = crate::graphstate::on_output(&d, v, &op.to_diagram()).expect("1 → 1 operator");
        }
        d
    }
}

impl fmt::Display for GsLc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "zero state on {} outputs", self.graph.n);
        }
        writeln!(f, "scalar {}", self.scalar)?;
        for (v, op) in self.vertex_ops.iter().enumerate() {
            let (b, [s, t, u, w0, w]) = op.key();
            writeln!(f, "vertex {v}: {b:?} s={s} t={t} u={u} v={w0} w={w}")?;
        }
        write!(f, "{}", self.graph)
    }
}

// ----- pipelines -----

/// Graph-like form, internal elimination and the canonical rGS+LC form of
/// the state `choi(d)`, with the trace of every step.
pub fn to_rgs_lc_traced(d: &Diagram) -> Result<(RGsLc, RewriteState)> {
    let st = to_graph_like(&d.choi())?;
    let st = eliminate_internal(&st)?;
    let mut aq = AqState::from_diagram(&st.graph)?;
    aq.canonicalize();
    aq.sigma = &aq.sigma * &st.scalar;
    let r = RGsLc::from_canonical(aq);
    r.check_reduced()?;
    Ok((r, st))
}

pub fn to_rgs_lc(d: &Diagram) -> Result<RGsLc> {
    Ok(to_rgs_lc_traced(d)?.0)
}

pub fn to_gs_lc(d: &Diagram) -> Result<GsLc> {
    Ok(to_rgs_lc(d)?.to_gs_lc())
}

#[derive(Clone, Debug)]
pub enum PairOutcome {
    Simplified(RGsLc, RGsLc),
    /// Vertex `q` is marked in one form and cannot be exchanged: the two
    /// states have different supports.
    Irreconcilable { q: usize },
}

/// Exchange marks until both forms mark the same vertices, when possible.
pub fn simplify_pair(a: &RGsLc, b: &RGsLc) -> Result<PairOutcome> {
    if a.p != b.p || a.outputs() != b.outputs() {
        return Err(Error::Shape("forms differ in modulus or output count".into()));
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    if a.zero || b.zero {
        return Ok(PairOutcome::Simplified(a, b));
    }
    loop {
        match resolve_one(&mut a, &b)? {
            Step::Exchanged => continue,
            Step::Stuck(q) => return Ok(PairOutcome::Irreconcilable { q }),
            Step::Done => {}
        }
        match resolve_one(&mut b, &a)? {
            Step::Exchanged => continue,
            Step::Stuck(q) => return Ok(PairOutcome::Irreconcilable { q }),
            Step::Done => return Ok(PairOutcome::Simplified(a, b)),
        }
    }
}

enum Step {
    Done,
    Exchanged,
    Stuck(usize),
}

fn resolve_one(x: &mut RGsLc, y: &RGsLc) -> Result<Step> {
    let n = x.outputs();
    let Some(q) = (0..n).find(|&q| x.marked[q] && !y.marked[q]) else {
        return Ok(Step::Done);
    };
    match (0..n).find(|&f| !x.marked[f] && y.marked[f] && !x.graph.get(q, f).is_zero()) {
        Some(f) => {
            x.exchange(q, f)?;
            Ok(Step::Exchanged)
        }
        None => Ok(Step::Stuck(q)),
    }
}
