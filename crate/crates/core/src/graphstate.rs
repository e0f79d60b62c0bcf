//! `Z_p`-weighted graphs, graph-state diagrams and local operations.
//!
//! `|G⟩ = p^{-n/2} Σ_k ω^{Σ_{u<v} G_uv k_u k_v} |k⟩`. Diagrams built here
//! carry their normalization as closed `R_d` components, so
//! `interp(to_diagram(g)) = |G⟩` exactly.

use std::fmt;

use crate::diagram::{Colour, Diagram, EdgeKind, Phase};
use crate::error::{Error, Result};
use crate::modp::{inv, Prime, Zp};
use crate::rules::add_r;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    pub p: Prime,
    pub n: usize,
    adj: Vec<Zp>,
}

impl WeightedGraph {
    pub fn empty(p: Prime, n: usize) -> WeightedGraph {
        WeightedGraph { p, n, adj: vec![p.zero(); n * n] }
    }

    /// From a full matrix; it must be symmetric with zero diagonal.
    pub fn from_matrix(p: Prime, rows: &[Vec<i64>]) -> Result<WeightedGraph> {
        let n = rows.len();
        let mut g = WeightedGraph::empty(p, n);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("row {u} has {} entries, expected {n}", row.len())));
            }
            for (v, &x) in row.iter().enumerate() {
                g.adj[u * n + v] = p.zp(x);
            }
        }
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        for u in 0..self.n {
            if !self.get(u, u).is_zero() {
                return Err(Error::Invalid(format!("nonzero diagonal at {u}")));
            }
            for v in 0..u {
                if self.get(u, v) != self.get(v, u) {
                    return Err(Error::Invalid(format!("asymmetric entry ({u},{v})")));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, u: usize, v: usize) -> Zp {
        self.adj[u * self.n + v]
    }

    /// Set the weight of the edge `{u, v}`, `u ≠ v`.
    pub fn set(&mut self, u: usize, v: usize, x: Zp) {
        assert!(u != v, "graphs have no self-loops");
        self.adj[u * self.n + v] = x;
        self.adj[v * self.n + u] = x;
    }

    pub fn neighbours(&self, w: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| !self.get(w, u).is_zero()).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| (u + 1..self.n).filter(|&v| !self.get(u, v).is_zero()).count()).sum()
    }

    /// Parse the text format: `p n` on the first line, then `n` rows.
    pub fn parse(text: &str) -> Result<WeightedGraph> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, m: &str| Error::Parse { location: format!("line {}", line + 1), message: m.into() };
        let (hl, header) = lines.next().ok_or_else(|| perr(0, "empty input"))?;
        let hs: Vec<&str> = header.split_whitespace().collect();
        if hs.len() != 2 {
            return Err(perr(hl, "header must be `p n`"));
        }
        let p: u64 = hs[0].parse().map_err(|_| perr(hl, "bad prime"))?;
        let n: usize = hs[1].parse().map_err(|_| perr(hl, "bad vertex count"))?;
        let p = Prime::new(p)?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (li, line) = lines.next().ok_or_else(|| perr(hl, "missing rows"))?;
            let row: std::result::Result<Vec<i64>, _> = line.split_whitespace().map(|t| t.parse::<i64>()).collect();
            rows.push(row.map_err(|_| perr(li, "bad entry"))?);
        }
        if let Some((li, _)) = lines.next() {
            return Err(perr(li, "trailing content"));
        }
        WeightedGraph::from_matrix(p, &rows)
    }

    /// `γ`-scaling about `w`: row and column `w` multiplied by `γ`.
    pub fn local_scale(&self, w: usize, gamma: Zp) -> Result<WeightedGraph> {
        if gamma.is_zero() {
            return Err(Error::Domain("local scaling needs γ ≠ 0".into()));
        }
        let mut g = self.clone();
        for u in 0..self.n {
            if u != w {
                g.set(u, w, self.get(u, w) * gamma);
            }
        }
        Ok(g)
    }

    /// `γ`-complementation about `w`: `G_uv += γ G_uw G_wv` for `u ≠ v`.
    pub fn local_complement(&self, w: usize, gamma: Zp) -> Result<WeightedGraph> {
        if gamma.is_zero() {
            return Err(Error::Domain("local complementation needs γ ≠ 0".into()));
        }
        Ok(self.complement_unchecked(w, gamma))
    }

    fn complement_unchecked(&self, w: usize, gamma: Zp) -> WeightedGraph {
        let mut g = self.clone();
        for u in 0..self.n {
            for v in u + 1..self.n {
                g.set(u, v, self.get(u, v) + gamma * self.get(u, w) * self.get(w, v));
            }
        }
        g
    }
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.p, self.n)?;
        for u in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|v| self.get(u, v).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The graph-state diagram without normalization: green `Z(0,0)` per
/// vertex with output `v`, and `H(G_uv)` edges. Vertex `v` has id `v`.
pub fn to_bare_diagram(g: &WeightedGraph) -> Diagram {
    let p = g.p;
    let mut d = Diagram::empty(p);
    for _ in 0..g.n {
        d.add_z(0, 0);
    }
    for v in 0..g.n {
        let o = d.add_output();
        d.plain(v, o);
    }
    for u in 0..g.n {
        for v in u + 1..g.n {
            let x = g.get(u, v);
            if !x.is_zero() {
                d.add_edge(u, v, EdgeKind::H(x));
            }
        }
    }
    d
}

/// The normalized graph-state diagram, `interp = |G⟩`.
pub fn to_diagram(g: &WeightedGraph) -> Diagram {
    let mut d = to_bare_diagram(g);
    let e = g.edge_count();
    add_sqrt_p_power(&mut d, e as i64 - g.n as i64);
    d
}

/// Closed components worth `√p^r`: `R_1 = √p`, `R_4 = 1/p`.
pub(crate) fn add_sqrt_p_power(d: &mut Diagram, r: i64) {
    if r >= 0 {
        for _ in 0..r {
            add_r(d, 1);
        }
    } else {
        let m = -r;
        for _ in 0..(m + 1) / 2 {
            add_r(d, 4);
        }
        if m % 2 == 1 {
            add_r(d, 1);
        }
    }
}

/// Compose a `1 → 1` operator onto the output wire of vertex `w`.
pub fn on_output(d: &Diagram, w: usize, op: &Diagram) -> Result<Diagram> {
    let n = d.outputs.len();
    if w >= n {
        return Err(Error::Domain(format!("no output {w}")));
    }
    if op.arity() != (1, 1) {
        return Err(Error::Shape("operator must be 1 → 1".into()));
    }
    let layer = Diagram::identity(d.p, w).tensor(op)?.tensor(&Diagram::identity(d.p, n - w - 1))?;
    d.compose(&layer)
}

/// The Pauli `X^γ`: `|m⟩ ↦ |m+γ⟩`.
pub fn pauli_x(p: Prime, gamma: Zp) -> Diagram {
    let mut d = Diagram::empty(p);
    let i = d.add_input();
    let o = d.add_output();
    let r = d.add_spider(Colour::X, Phase::new(-(gamma + gamma), p.zero()));
    d.plain(i, r);
    d.mul(r, o, 1);
    d
}

/// The Pauli `Z^c`: `|m⟩ ↦ ω^{cm}|m⟩`.
pub fn pauli_z(p: Prime, c: Zp) -> Diagram {
    Diagram::spider(p, Colour::Z, 1, 1, Phase::new(c + c, p.zero()))
}

fn green_op(p: Prime, ph: Phase) -> Diagram {
    Diagram::spider(p, Colour::Z, 1, 1, ph)
}

/// `X_v^γ Π_w Z_w^{γ G_vw}` applied to `|G⟩`; its interpretation is `|G⟩`.
pub fn pauli_stabiliser_diagram(g: &WeightedGraph, v: usize, gamma: Zp) -> Result<Diagram> {
    let p = g.p;
    let mut d = on_output(&to_diagram(g), v, &pauli_x(p, gamma))?;
    for u in g.neighbours(v) {
        d = on_output(&d, u, &pauli_z(p, gamma * g.get(v, u)))?;
    }
    Ok(d)
}

/// A single-vertex operator acting on a graph state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalOp {
    /// `Mul(z)` on the output of `w`.
    Multiplier(Zp),
    /// `X(0,γ)` followed by the antipode on `w`, with neighbour phases
    /// `(0, -γ G_vw²)`.
    Complement(Zp),
    /// `X(x,y)` on `w`, with neighbour phases `(-x G_vw, -y G_vw²)`.
    RedPhase(Phase),
}

/// The left-hand side: `|G⟩` dressed with the operator at `w`.
pub fn dressed_diagram(g: &WeightedGraph, w: usize, op: LocalOp) -> Result<Diagram> {
    let p = g.p;
    let base = to_diagram(g);
    match op {
        LocalOp::Multiplier(z) => {
            if z.is_zero() {
                return Err(Error::Domain("multiplier label must be nonzero".into()));
            }
            on_output(&base, w, &Diagram::multiplier(p, z))
        }
        LocalOp::Complement(gamma) => {
            if gamma.is_zero() {
                return Err(Error::Domain("local complementation needs γ ≠ 0".into()));
            }
            let mut r = Diagram::empty(p);
            let i = r.add_input();
            let o = r.add_output();
            let x = r.add_spider(Colour::X, Phase::new(p.zero(), gamma));
            r.plain(i, x);
            r.mul(x, o, 1);
            let mut d = on_output(&base, w, &r)?;
            for u in g.neighbours(w) {
                let gw = g.get(u, w);
                d = on_output(&d, u, &green_op(p, Phase::new(p.zero(), -(gamma * gw * gw))))?;
            }
            Ok(d)
        }
        LocalOp::RedPhase(ph) => {
            let red = Diagram::spider(p, Colour::X, 1, 1, ph);
            let mut d = on_output(&base, w, &red)?;
            for u in g.neighbours(w) {
                let gw = g.get(u, w);
                d = on_output(&d, u, &green_op(p, Phase::new(-(ph.x * gw), -(ph.y * gw * gw))))?;
            }
            Ok(d)
        }
    }
}

/// The graph whose state equals the dressed diagram exactly:
/// `Mul(z)` scales about `w` by `-z^{-1}`; the complement pattern gives
/// `G ⋆_γ w`; a red phase `(x,y)` gives `G ⋆_y w` scaled about `w` by `-1`.
pub fn rewrite_local(g: &WeightedGraph, w: usize, op: LocalOp) -> Result<WeightedGraph> {
    if w >= g.n {
        return Err(Error::Domain(format!("no vertex {w}")));
    }
    let p = g.p;
    match op {
        LocalOp::Multiplier(z) => g.local_scale(w, -inv(z)?),
        LocalOp::Complement(gamma) => g.local_complement(w, gamma),
        LocalOp::RedPhase(ph) => g.complement_unchecked(w, ph.y).local_scale(w, -p.one()),
    }
}
