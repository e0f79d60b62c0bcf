//! Random diagrams and random host contexts for rule instances.

use rand::Rng;

use crate::diagram::{Colour, Diagram, EdgeKind, Phase};
use crate::modp::{Prime, Zp};

pub(crate) fn rand_zp<R: Rng>(p: Prime, rng: &mut R) -> Zp {
    p.zp(rng.gen_range(0..p.get() as i64))
}

pub(crate) fn rand_unit<R: Rng>(p: Prime, rng: &mut R) -> Zp {
    p.zp(rng.gen_range(1..p.get() as i64))
}

pub(crate) fn rand_phase<R: Rng>(p: Prime, rng: &mut R) -> Phase {
    Phase::new(rand_zp(p, rng), rand_zp(p, rng))
}

pub(crate) fn rand_colour<R: Rng>(rng: &mut R) -> Colour {
    if rng.gen_bool(0.5) {
        Colour::Z
    } else {
        Colour::X
    }
}

pub(crate) fn rand_edge_kind<R: Rng>(p: Prime, rng: &mut R) -> EdgeKind {
    match rng.gen_range(0..4) {
        0 | 1 => EdgeKind::Plain,
        2 => EdgeKind::H(rand_unit(p, rng)),
        _ => EdgeKind::Mul(rand_unit(p, rng)),
    }
}

/// Add an edge of random kind and orientation.
pub(crate) fn rand_edge<R: Rng>(d: &mut Diagram, a: usize, b: usize, rng: &mut R) -> usize {
    let k = rand_edge_kind(d.p, rng);
    if rng.gen_bool(0.5) {
        d.add_edge(a, b, k)
    } else {
        d.add_edge(b, a, k)
    }
}

fn add_boundary<R: Rng>(d: &mut Diagram, rng: &mut R) -> usize {
    if rng.gen_bool(0.5) {
        d.add_input()
    } else {
        d.add_output()
    }
}

/// Attach random context to the `ports` of a pattern: extra legs of
/// random kind leading to boundaries or to small host spiders. The total
/// number of boundaries stays at most `max_boundaries`.
pub fn dress<R: Rng>(d: &mut Diagram, ports: &[usize], max_boundaries: usize, rng: &mut R) {
    let p = d.p;
    let mut hosts: Vec<usize> = Vec::new();
    for &v in ports {
        let legs = rng.gen_range(0..=2);
        for _ in 0..legs {
            let nb = d.inputs.len() + d.outputs.len();
            if nb >= max_boundaries {
                if !hosts.is_empty() && rng.gen_bool(0.5) {
                    let h = hosts[rng.gen_range(0..hosts.len())];
                    rand_edge(d, v, h, rng);
                }
                continue;
            }
            if rng.gen_bool(0.6) {
                let b = add_boundary(d, rng);
                rand_edge(d, v, b, rng);
            } else {
                let ph = rand_phase(p, rng);
                let h = d.add_spider(rand_colour(rng), ph);
                rand_edge(d, v, h, rng);
                let b = add_boundary(d, rng);
                rand_edge(d, h, b, rng);
                hosts.push(h);
            }
        }
    }
}

/// Shape parameters for [`random_diagram`].
#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub spiders: usize,
    pub inputs: usize,
    pub outputs: usize,
    pub extra_edges: usize,
}

/// A random connected-ish diagram with the given shape.
pub fn random_diagram<R: Rng>(p: Prime, spec: RandomSpec, rng: &mut R) -> Diagram {
    let mut d = Diagram::empty(p);
    let ins: Vec<usize> = (0..spec.inputs).map(|_| d.add_input()).collect();
    let outs: Vec<usize> = (0..spec.outputs).map(|_| d.add_output()).collect();
    let n = spec.spiders.max(1);
    let mut sp = Vec::new();
    for _ in 0..n {
        let ph = rand_phase(p, rng);
        sp.push(d.add_spider(rand_colour(rng), ph));
    }
    for k in 1..n {
        let j = rng.gen_range(0..k);
        rand_edge(&mut d, sp[j], sp[k], rng);
    }
    for _ in 0..spec.extra_edges {
        let a = sp[rng.gen_range(0..n)];
        let b = sp[rng.gen_range(0..n)];
        rand_edge(&mut d, a, b, rng);
    }
    for b in ins.into_iter().chain(outs) {
        let s = sp[rng.gen_range(0..n)];
        rand_edge(&mut d, b, s, rng);
    }
    d
}

/// Apply `steps` randomly chosen rule applications that match somewhere in
/// `d`, keeping at most `max_vertices` vertices. Sites are proposed blindly
/// and rejected when the rule does not match.
pub fn random_rewrites<R: Rng>(d: &Diagram, steps: usize, max_vertices: usize, rng: &mut R) -> super::RewriteState {
    let rules = super::catalogue();
    let mut st = super::RewriteState::new(d.clone());
    let mut done = 0;
    let mut attempts = 0;
    while done < steps && attempts < steps * 400 {
        attempts += 1;
        let rule = &rules[rng.gen_range(0..rules.len())];
        let g = &st.graph;
        let verts: Vec<usize> = g.vertices.keys().copied().collect();
        if verts.is_empty() {
            break;
        }
        let v = verts[rng.gen_range(0..verts.len())];
        let site = if g.edges.is_empty() || rng.gen_bool(0.3) {
            super::RuleSite::new(rule.name, vec![v])
        } else {
            let i = rng.gen_range(0..g.edges.len());
            let e = g.edges[i];
            match rng.gen_range(0..3) {
                0 => super::RuleSite::new(rule.name, vec![]).with_edges(vec![i]),
                1 => super::RuleSite::new(rule.name, vec![e.a, e.b]).with_edges(vec![i]),
                _ => super::RuleSite::new(rule.name, vec![e.a, e.b]),
            }
        };
        let mut graph = st.graph.clone();
        let Ok(f) = (rule.apply)(&mut graph, &site) else {
            continue;
        };
        if graph.vertices.len() > max_vertices || graph.validate().is_err() {
            continue;
        }
        st.graph = graph;
        st.record(rule.name, site.vertices.clone(), f);
        done += 1;
    }
    st
}
