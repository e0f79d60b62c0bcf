//! Open multigraph representation of stabiliser ZX diagrams.
//!
//! Spiders and boundaries are vertices. Hadamard boxes `H(w)` and
//! multipliers `Mul(z)` are edge decorations; a multiplier edge is directed
//! from `a` (tail) to `b` (head) and denotes `Σ_j |-zj⟩⟨j|`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modp::{inv_nz, Prime, Zp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    pub x: Zp,
    pub y: Zp,
}

impl Phase {
    pub fn new(x: Zp, y: Zp) -> Phase {
        Phase { x, y }
    }

    pub fn zero(p: Prime) -> Phase {
        Phase { x: p.zero(), y: p.zero() }
    }

    pub fn of(p: Prime, x: i64, y: i64) -> Phase {
        Phase { x: p.zp(x), y: p.zp(y) }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl std::ops::Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        Phase { x: self.x + o.x, y: self.y + o.y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    Z,
    X,
}

impl Colour {
    pub fn other(self) -> Colour {
        match self {
            Colour::Z => Colour::X,
            Colour::X => Colour::Z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Z(Phase),
    X(Phase),
    In(usize),
    Out(usize),
    Discard,
}

impl VertexKind {
    pub fn spider(c: Colour, ph: Phase) -> VertexKind {
        match c {
            Colour::Z => VertexKind::Z(ph),
            Colour::X => VertexKind::X(ph),
        }
    }

    pub fn colour(&self) -> Option<Colour> {
        match self {
            VertexKind::Z(_) => Some(Colour::Z),
            VertexKind::X(_) => Some(Colour::X),
            _ => None,
        }
    }

    pub fn phase(&self) -> Option<Phase> {
        match self {
            VertexKind::Z(ph) | VertexKind::X(ph) => Some(*ph),
            _ => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, VertexKind::In(_) | VertexKind::Out(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Plain,
    H(Zp),
    Mul(Zp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    /// The same edge written with its endpoints swapped; multipliers become
    /// `Mul(z^{-1})` in the reversed orientation.
    pub fn reversed(&self) -> Edge {
        let kind = match self.kind {
            EdgeKind::Mul(z) => EdgeKind::Mul(inv_nz(z)),
            k => k,
        };
        Edge { a: self.b, b: self.a, kind }
    }

    /// Orient the edge so that `v` is the `a` end.
    pub fn from(&self, v: usize) -> Edge {
        if self.a == v {
            *self
        } else {
            self.reversed()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub p: Prime,
    pub vertices: BTreeMap<usize, VertexKind>,
    pub edges: Vec<Edge>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub star: u8,
}

impl Diagram {
    pub fn empty(p: Prime) -> Diagram {
        Diagram {
            p,
            vertices: BTreeMap::new(),
            edges: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            star: 0,
        }
    }

    pub fn next_id(&self) -> usize {
        self.vertices.keys().next_back().map_or(0, |v| v + 1)
    }

    pub fn add_vertex(&mut self, k: VertexKind) -> usize {
        let id = self.next_id();
        self.vertices.insert(id, k);
        id
    }

    pub fn add_z(&mut self, x: i64, y: i64) -> usize {
        let ph = Phase::of(self.p, x, y);
        self.add_vertex(VertexKind::Z(ph))
    }

    pub fn add_x(&mut self, x: i64, y: i64) -> usize {
        let ph = Phase::of(self.p, x, y);
        self.add_vertex(VertexKind::X(ph))
    }

    pub fn add_spider(&mut self, c: Colour, ph: Phase) -> usize {
        self.add_vertex(VertexKind::spider(c, ph))
    }

    pub fn add_input(&mut self) -> usize {
        let id = self.add_vertex(VertexKind::In(self.inputs.len()));
        self.inputs.push(id);
        id
    }

    pub fn add_output(&mut self) -> usize {
        let id = self.add_vertex(VertexKind::Out(self.outputs.len()));
        self.outputs.push(id);
        id
    }

    pub fn add_edge(&mut self, a: usize, b: usize, kind: EdgeKind) -> usize {
        self.edges.push(Edge { a, b, kind });
        self.edges.len() - 1
    }

    pub fn plain(&mut self, a: usize, b: usize) -> usize {
        self.add_edge(a, b, EdgeKind::Plain)
    }

    pub fn h(&mut self, a: usize, b: usize, w: i64) -> usize {
        let w = self.p.zp(w);
        self.add_edge(a, b, EdgeKind::H(w))
    }

    pub fn mul(&mut self, a: usize, b: usize, z: i64) -> usize {
        let z = self.p.zp(z);
        self.add_edge(a, b, EdgeKind::Mul(z))
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.vertices[&v]
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn phase(&self, v: usize) -> Option<Phase> {
        self.vertices.get(&v).and_then(|k| k.phase())
    }

    pub fn set_phase(&mut self, v: usize, ph: Phase) {
        let k = self.vertices.get_mut(&v).expect("vertex exists");
        *k = match *k {
            VertexKind::Z(_) => VertexKind::Z(ph),
            VertexKind::X(_) => VertexKind::X(ph),
            other => other,
        };
    }

    /// Indices of edges incident to `v` (self-loops listed once).
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(v)).collect()
    }

    /// Edges between `u` and `v` (for `u ≠ v`).
    pub fn edges_between(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| {
                let e = &self.edges[i];
                (e.a == u && e.b == v) || (e.a == v && e.b == u)
            })
            .collect()
    }

    /// Degree, with self-loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.a == v) as usize + (e.b == v) as usize).sum()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut ns: Vec<usize> =
            self.edges.iter().filter(|e| e.touches(v) && !e.is_loop()).map(|e| e.other(v)).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    pub fn remove_edges(&mut self, mut idx: Vec<usize>) {
        idx.sort_unstable();
        idx.dedup();
        for i in idx.into_iter().rev() {
            self.edges.remove(i);
        }
    }

    /// Remove a non-boundary vertex and its incident edges.
    pub fn remove_vertex(&mut self, v: usize) {
        self.edges.retain(|e| !e.touches(v));
        self.vertices.remove(&v);
    }

    pub fn spiders(&self) -> Vec<usize> {
        self.vertices.iter().filter(|(_, k)| k.colour().is_some()).map(|(v, _)| *v).collect()
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.inputs.len(), self.outputs.len())
    }

    pub fn has_discard(&self) -> bool {
        self.vertices.values().any(|k| matches!(k, VertexKind::Discard))
    }

    pub fn is_closed(&self) -> bool {
        self.inputs.is_empty() && self.outputs.is_empty()
    }

    pub fn add_star(&mut self, n: u8) {
        self.star = (self.star + n) % 2;
    }

    /// Re-index boundary ports to match the order of `inputs`/`outputs`.
    pub fn renumber_ports(&mut self) {
        for (i, v) in self.inputs.clone().into_iter().enumerate() {
            self.vertices.insert(v, VertexKind::In(i));
        }
        for (i, v) in self.outputs.clone().into_iter().enumerate() {
            self.vertices.insert(v, VertexKind::Out(i));
        }
    }

    /// Check the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        for e in &self.edges {
            if !self.has_vertex(e.a) || !self.has_vertex(e.b) {
                return bad(format!("edge ({}, {}) has a missing endpoint", e.a, e.b));
            }
            match e.kind {
                EdgeKind::H(w) if w.is_zero() => return bad("H edge with weight 0".into()),
                EdgeKind::Mul(z) if z.is_zero() => return bad("multiplier with label 0".into()),
                EdgeKind::H(w) | EdgeKind::Mul(w) if w.prime() != self.p => {
                    return bad("edge label modulus mismatch".into())
                }
                _ => {}
            }
        }
        for (&v, k) in &self.vertices {
            match k {
                VertexKind::In(i) => {
                    if self.inputs.get(*i) != Some(&v) {
                        return bad(format!("input vertex {v} not at port {i}"));
                    }
                }
                VertexKind::Out(i) => {
                    if self.outputs.get(*i) != Some(&v) {
                        return bad(format!("output vertex {v} not at port {i}"));
                    }
                }
                VertexKind::Z(ph) | VertexKind::X(ph) => {
                    if ph.x.prime() != self.p || ph.y.prime() != self.p {
                        return bad(format!("phase modulus mismatch at {v}"));
                    }
                }
                VertexKind::Discard => {}
            }
            if matches!(k, VertexKind::In(_) | VertexKind::Out(_) | VertexKind::Discard) {
                if self.degree(v) != 1 || self.edges.iter().any(|e| e.a == v && e.b == v) {
                    return bad(format!("boundary vertex {v} must have degree 1"));
                }
            }
        }
        for (list, want) in [(&self.inputs, true), (&self.outputs, false)] {
            for (i, v) in list.iter().enumerate() {
                match self.vertices.get(v) {
                    Some(VertexKind::In(j)) if want && *j == i => {}
                    Some(VertexKind::Out(j)) if !want && *j == i => {}
                    _ => return bad(format!("boundary list entry {v} has wrong kind")),
                }
            }
        }
        if self.star > 1 {
            return bad("star count must be 0 or 1".into());
        }
        Ok(())
    }

    // ----- generators -----

    pub fn identity(p: Prime, n: usize) -> Diagram {
        let mut d = Diagram::empty(p);
        let ins: Vec<usize> = (0..n).map(|_| d.add_input()).collect();
        let outs: Vec<usize> = (0..n).map(|_| d.add_output()).collect();
        for k in 0..n {
            d.plain(ins[k], outs[k]);
        }
        d
    }

    pub fn spider(p: Prime, c: Colour, m: usize, n: usize, ph: Phase) -> Diagram {
        let mut d = Diagram::empty(p);
        let ins: Vec<usize> = (0..m).map(|_| d.add_input()).collect();
        let outs: Vec<usize> = (0..n).map(|_| d.add_output()).collect();
        let s = d.add_spider(c, ph);
        for v in ins.into_iter().chain(outs) {
            d.plain(v, s);
        }
        d
    }

    /// Single wire carrying the given edge decoration, input to output.
    pub fn wire(p: Prime, kind: EdgeKind) -> Diagram {
        let mut d = Diagram::empty(p);
        let i = d.add_input();
        let o = d.add_output();
        d.add_edge(i, o, kind);
        d
    }

    pub fn hadamard(p: Prime) -> Diagram {
        Diagram::wire(p, EdgeKind::H(p.one()))
    }

    pub fn h_box(p: Prime, w: Zp) -> Diagram {
        Diagram::wire(p, EdgeKind::H(w))
    }

    pub fn multiplier(p: Prime, z: Zp) -> Diagram {
        Diagram::wire(p, EdgeKind::Mul(z))
    }

    pub fn cup(p: Prime) -> Diagram {
        let mut d = Diagram::empty(p);
        let a = d.add_output();
        let b = d.add_output();
        d.plain(a, b);
        d
    }

    pub fn cap(p: Prime) -> Diagram {
        let mut d = Diagram::empty(p);
        let a = d.add_input();
        let b = d.add_input();
        d.plain(a, b);
        d
    }

    pub fn swap(p: Prime) -> Diagram {
        let mut d = Diagram::empty(p);
        let i0 = d.add_input();
        let i1 = d.add_input();
        let o0 = d.add_output();
        let o1 = d.add_output();
        d.plain(i0, o1);
        d.plain(i1, o0);
        d
    }

    pub fn star_diagram(p: Prime) -> Diagram {
        let mut d = Diagram::empty(p);
        d.star = 1;
        d
    }

    pub fn discard(p: Prime) -> Diagram {
        let mut d = Diagram::empty(p);
        let i = d.add_input();
        let g = d.add_vertex(VertexKind::Discard);
        d.plain(i, g);
        d
    }

    // ----- combinators -----

    /// Disjoint union; boundary orders concatenate.
    pub fn tensor(&self, o: &Diagram) -> Result<Diagram> {
        if self.p != o.p {
            return Err(Error::Modulus(self.p.get(), o.p.get()));
        }
        let mut d = self.clone();
        let off = d.next_id();
        for (&v, &k) in &o.vertices {
            d.vertices.insert(v + off, k);
        }
        for e in &o.edges {
            d.edges.push(Edge { a: e.a + off, b: e.b + off, kind: e.kind });
        }
        d.inputs.extend(o.inputs.iter().map(|v| v + off));
        d.outputs.extend(o.outputs.iter().map(|v| v + off));
        d.star = (self.star + o.star) % 2;
        d.renumber_ports();
        Ok(d)
    }

    /// `o` after `self`: outputs of `self` feed the inputs of `o`.
    pub fn compose(&self, o: &Diagram) -> Result<Diagram> {
        if self.outputs.len() != o.inputs.len() {
            return Err(Error::Shape(format!(
                "cannot plug {} outputs into {} inputs",
                self.outputs.len(),
                o.inputs.len()
            )));
        }
        let k = self.outputs.len();
        let nin = self.inputs.len();
        let mut d = self.tensor(o)?;
        let outs: Vec<usize> = d.outputs[..k].to_vec();
        let ins: Vec<usize> = d.inputs[nin..].to_vec();
        for (o_v, i_v) in outs.iter().zip(&ins) {
            d.join_boundaries(*o_v, *i_v);
        }
        d.outputs.drain(..k);
        d.inputs.truncate(nin);
        d.renumber_ports();
        Ok(d)
    }

    /// Remove two boundary vertices and connect what they were attached to.
    pub(crate) fn join_boundaries(&mut self, u: usize, v: usize) {
        let eu = self.incident(u)[0];
        let ev = self.incident(v)[0];
        if eu == ev {
            // the two boundaries were wired to each other: a closed loop
            let kind = self.edges.remove(eu).kind;
            self.vertices.remove(&u);
            self.vertices.remove(&v);
            let c = self.add_z(0, 0);
            self.add_edge(c, c, kind);
            return;
        }
        let (ku, kv) = (self.edges[eu].kind, self.edges[ev].kind);
        if kv == EdgeKind::Plain {
            let x = self.edges[ev].other(v);
            retarget(&mut self.edges[eu], u, x);
            self.edges.remove(ev);
        } else if ku == EdgeKind::Plain {
            let x = self.edges[eu].other(u);
            retarget(&mut self.edges[ev], v, x);
            self.edges.remove(eu);
        } else {
            let m = self.add_z(0, 0);
            retarget(&mut self.edges[eu], u, m);
            retarget(&mut self.edges[ev], v, m);
        }
        self.vertices.remove(&u);
        self.vertices.remove(&v);
    }

    /// Bend every input into an output; the new outputs list the old inputs
    /// first, then the old outputs.
    pub fn choi(&self) -> Diagram {
        let mut d = self.clone();
        let mut outs = d.inputs.clone();
        outs.extend(d.outputs.iter().copied());
        d.inputs.clear();
        d.outputs = outs;
        d.renumber_ports();
        d
    }

    /// Entrywise complex conjugate of the interpretation.
    pub fn conj(&self) -> Diagram {
        let mut d = self.clone();
        for k in d.vertices.values_mut() {
            *k = match *k {
                VertexKind::Z(ph) => VertexKind::Z(Phase::new(-ph.x, -ph.y)),
                VertexKind::X(ph) => VertexKind::X(Phase::new(ph.x, -ph.y)),
                other => other,
            };
        }
        for e in d.edges.iter_mut() {
            if let EdgeKind::H(w) = e.kind {
                e.kind = EdgeKind::H(-w);
            }
        }
        d
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Diagram {
        let mut d = self.conj();
        std::mem::swap(&mut d.inputs, &mut d.outputs);
        d.renumber_ports();
        d
    }

    // ----- serialization -----

    pub fn to_json(&self) -> String {
        let vertices = self
            .vertices
            .iter()
            .map(|(&id, k)| {
                let (kind, phase, port) = match *k {
                    VertexKind::Z(ph) => ("Z", Some([ph.x.value(), ph.y.value()]), None),
                    VertexKind::X(ph) => ("X", Some([ph.x.value(), ph.y.value()]), None),
                    VertexKind::In(i) => ("in", None, Some(i)),
                    VertexKind::Out(i) => ("out", None, Some(i)),
                    VertexKind::Discard => ("discard", None, None),
                };
                JsonVertex { id, kind: kind.into(), phase, port }
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (kind, w, z) = match e.kind {
                    EdgeKind::Plain => ("plain", None, None),
                    EdgeKind::H(w) => ("h", Some(w.value()), None),
                    EdgeKind::Mul(z) => ("mul", None, Some(z.value())),
                };
                JsonEdge { a: e.a, b: e.b, kind: kind.into(), w, z }
            })
            .collect();
        let j = JsonDiagram {
            p: self.p.get(),
            vertices,
            edges,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            star: self.star,
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Diagram> {
        let j: JsonDiagram = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let perr = |loc: String, m: &str| Error::Parse { location: loc, message: m.to_string() };
        let p = Prime::new(j.p).map_err(|e| perr("p".into(), &e.to_string()))?;
        let mut d = Diagram::empty(p);
        for (n, v) in j.vertices.iter().enumerate() {
            let loc = format!("vertices[{n}]");
            let kind = match v.kind.as_str() {
                "Z" | "X" => {
                    let ph = v.phase.ok_or_else(|| perr(loc.clone(), "spider needs a phase"))?;
                    if ph[0] >= p.get() || ph[1] >= p.get() {
                        return Err(perr(loc, "phase component out of range"));
                    }
                    let ph = Phase::new(p.zp(ph[0] as i64), p.zp(ph[1] as i64));
                    if v.kind == "Z" {
                        VertexKind::Z(ph)
                    } else {
                        VertexKind::X(ph)
                    }
                }
                "in" => VertexKind::In(v.port.ok_or_else(|| perr(loc.clone(), "missing port"))?),
                "out" => VertexKind::Out(v.port.ok_or_else(|| perr(loc.clone(), "missing port"))?),
                "discard" => VertexKind::Discard,
                other => return Err(perr(loc, &format!("unknown vertex kind {other:?}"))),
            };
            if d.vertices.insert(v.id, kind).is_some() {
                return Err(perr(loc, "duplicate vertex id"));
            }
        }
        for (n, e) in j.edges.iter().enumerate() {
            let loc = format!("edges[{n}]");
            let label = |x: Option<u64>, name: &str| -> Result<Zp> {
                let x = x.ok_or_else(|| perr(loc.clone(), &format!("missing {name}")))?;
                if x == 0 || x >= p.get() {
                    return Err(perr(loc.clone(), &format!("{name} must be in [1, p)")));
                }
                Ok(p.zp(x as i64))
            };
            let kind = match e.kind.as_str() {
                "plain" => EdgeKind::Plain,
                "h" => EdgeKind::H(label(e.w, "w")?),
                "mul" => EdgeKind::Mul(label(e.z, "z")?),
                other => return Err(perr(loc, &format!("unknown edge kind {other:?}"))),
            };
            d.edges.push(Edge { a: e.a, b: e.b, kind });
        }
        d.inputs = j.inputs;
        d.outputs = j.outputs;
        if j.star > 1 {
            return Err(perr("star".into(), "star must be 0 or 1"));
        }
        d.star = j.star;
        d.validate().map_err(|e| perr("diagram".into(), &e.to_string()))?;
        Ok(d)
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph zx {\n  node [style=filled, shape=circle];\n");
        for (&v, k) in &self.vertices {
            let attrs = match k {
                VertexKind::Z(ph) => {
                    format!("label=\"{},{}\", fillcolor=\"#ccffcc\"", ph.x, ph.y)
                }
                VertexKind::X(ph) => {
                    format!("label=\"{},{}\", fillcolor=\"#ff8888\"", ph.x, ph.y)
                }
                VertexKind::In(i) => format!("label=\"in{i}\", shape=plaintext, fillcolor=white"),
                VertexKind::Out(i) => format!("label=\"out{i}\", shape=plaintext, fillcolor=white"),
                VertexKind::Discard => "label=\"⏚\", shape=box, fillcolor=grey".to_string(),
            };
            let _ = writeln!(s, "  v{v} [{attrs}];");
        }
        for e in &self.edges {
            let attrs = match e.kind {
                EdgeKind::Plain => String::new(),
                EdgeKind::H(w) => format!(" [color=blue, style=dashed, label=\"{w}\"]"),
                EdgeKind::Mul(z) => format!(" [dir=forward, label=\"x{z}\"]"),
            };
            let _ = writeln!(s, "  v{} -- v{}{};", e.a, e.b, attrs);
        }
        if self.star == 1 {
            s.push_str("  star [label=\"*\", shape=star, fillcolor=yellow];\n");
        }
        s.push_str("}\n");
        s
    }
}

fn retarget(e: &mut Edge, from: usize, to: usize) {
    if e.a == from {
        e.a = to;
    } else {
        e.b = to;
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonVertex {
    id: usize,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    phase: Option<[u64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    port: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEdge {
    a: usize,
    b: usize,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    w: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    z: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDiagram {
    p: u64,
    vertices: Vec<JsonVertex>,
    edges: Vec<JsonEdge>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    star: u8,
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{"p":5,"vertices":[{"id":0,"kind":"Z","phase":[1,2]},{"id":1,"kind":"in","port":0},{"id":2,"kind":"out","port":0}],"edges":[{"a":1,"b":0,"kind":"plain"},{"a":0,"b":2,"kind":"h","w":2}],"inputs":[1],"outputs":[2],"star":0}"#;

    #[test]
    fn json_round_trip() {
        let d = Diagram::from_json(SAMPLE).unwrap();
        assert_eq!(d.to_json(), SAMPLE);
    }

    #[test]
    fn rejects_zero_weight() {
        let bad = SAMPLE.replace("\"w\":2", "\"w\":0");
        assert!(Diagram::from_json(&bad).is_err());
    }

    #[test]
    fn rejects_degree_two_boundary() {
        let bad = SAMPLE.replace(
            "{\"a\":0,\"b\":2,\"kind\":\"h\",\"w\":2}",
            "{\"a\":0,\"b\":2,\"kind\":\"h\",\"w\":2},{\"a\":1,\"b\":0,\"kind\":\"plain\"}",
        );
        assert!(Diagram::from_json(&bad).is_err());
    }

    #[test]
    fn syntax_error_has_location() {
        match Diagram::from_json("{\"p\":5,\n\"vertices\":[}") {
            Err(Error::Parse { location, .. }) => assert!(location.contains("line 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tensor_shapes_and_star() {
        let p = Prime::new(3).unwrap();
        let a = Diagram::spider(p, Colour::Z, 1, 2, Phase::zero(p));
        let b = Diagram::identity(p, 1);
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.arity(), (2, 3));
        t.validate().unwrap();
        let s = Diagram::star_diagram(p).tensor(&Diagram::star_diagram(p)).unwrap();
        assert_eq!(s.star, 0);
        let e = Diagram::empty(p).tensor(&a).unwrap();
        assert_eq!(e.arity(), a.arity());
    }

    #[test]
    fn compose_identities() {
        let p = Prime::new(3).unwrap();
        let i = Diagram::identity(p, 1);
        let ii = i.compose(&i).unwrap();
        ii.validate().unwrap();
        assert_eq!(ii.edges.len(), 1);
        let h = Diagram::hadamard(p);
        let hh = h.compose(&h).unwrap();
        hh.validate().unwrap();
        assert_eq!(hh.spiders().len(), 1);
    }

    #[test]
    fn dagger_involutive() {
        let p = Prime::new(5).unwrap();
        let mut d = Diagram::spider(p, Colour::X, 1, 2, Phase::of(p, 1, 3));
        let o = d.outputs[0];
        let s = d.spiders()[0];
        d.edges.retain(|e| !e.touches(o));
        d.mul(s, o, 2);
        assert_eq!(d.dagger().dagger(), d);
        assert_eq!(Diagram::hadamard(p).dagger().edges[0].kind, EdgeKind::H(p.zp(-1)));
    }

    #[test]
    fn choi_of_state_is_unchanged() {
        let p = Prime::new(3).unwrap();
        let s = Diagram::spider(p, Colour::Z, 0, 2, Phase::zero(p));
        assert_eq!(s.choi(), s);
        assert_eq!(Diagram::identity(p, 1).choi().arity(), (0, 2));
    }

    #[test]
    fn dot_is_stable() {
        let p = Prime::new(3).unwrap();
        let d = Diagram::identity(p, 1);
        assert_eq!(d.to_dot(), d.to_dot());
        assert!(d.to_dot().contains("v0 -- v1"));
    }
}
