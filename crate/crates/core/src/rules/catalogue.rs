//! The rule table: axioms, structural rules, derived lemmas and the
//! colour-change meta rule, each with a random instance generator used by
//! soundness checking.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gen::{dress, rand_colour, rand_edge, rand_edge_kind, rand_phase, rand_unit, rand_zp};
use super::scalars::{add_hloop, add_r, add_w, zero_form};
use super::{check_site, colour_change_meta, colour_change_vertex, map_end, plain_if_identity, then_mul, RuleSite};
use crate::cyclo::{quadratic_gauss_sum, sqrt_p_pow, Cyclo};
use crate::diagram::{Colour, Diagram, Edge, EdgeKind, Phase, VertexKind};
use crate::error::{pattern, Error, Result};
use crate::interp::interp_raw;
use crate::modp::{half, inv_nz, legendre, Prime, Zp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleClass {
    Axiom,
    Structural,
    Derived,
    Meta,
}

type ApplyFn = fn(&mut Diagram, &RuleSite) -> Result<Cyclo>;
type InstanceFn = fn(Prime, &mut ChaCha8Rng) -> (Diagram, RuleSite);

/// One catalogue entry. `apply` rewrites in place and returns the factor
/// `F` with `⟦before⟧ = F·⟦after⟧`.
pub struct Rule {
    pub name: &'static str,
    pub class: RuleClass,
    pub apply: ApplyFn,
    pub instance: InstanceFn,
}

impl Rule {
    /// Exact soundness check of one instance.
    pub fn check(&self, d: &Diagram, site: &RuleSite) -> Result<bool> {
        if self.class == RuleClass::Meta {
            return colour_change_check(d);
        }
        check_site(d, site)
    }
}

impl std::fmt::Debug for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Rule({})", self.name)
    }
}

macro_rules! rule {
    ($name:literal, $class:ident, $apply:expr, $inst:expr) => {
        Rule { name: $name, class: RuleClass::$class, apply: $apply, instance: $inst }
    };
}

static RULES: &[Rule] = &[
    rule!("fusion", Axiom, fusion, inst_fusion),
    rule!("colour", Axiom, colour, inst_colour),
    rule!("shear", Axiom, shear, inst_shear),
    rule!("char", Axiom, char_rule, inst_char),
    rule!("bigebra", Axiom, bigebra, inst_bigebra),
    rule!("copy", Axiom, copy, inst_copy),
    rule!("g_elim", Axiom, g_elim, inst_g_elim),
    rule!("r_elim", Axiom, r_elim, inst_r_elim),
    rule!("mult", Axiom, mult, inst_mult),
    rule!("gauss", Axiom, gauss, inst_gauss),
    rule!("m_one", Axiom, m_one, inst_m_one),
    rule!("m_elim", Axiom, m_elim, inst_m_elim),
    rule!("zero", Axiom, zero, inst_zero),
    rule!("one", Axiom, one_rule, inst_one),
    rule!("flex", Structural, flex, inst_flex),
    rule!("mul_reverse", Structural, mul_reverse, inst_mul_reverse),
    rule!("id_intro", Structural, id_intro, inst_id_intro),
    rule!("red_fusion", Derived, red_fusion, inst_red_fusion),
    rule!("bigebra_mn", Derived, bigebra_mn, inst_bigebra_mn),
    rule!("hadamard_product", Derived, hadamard_product, inst_hadamard_product),
    rule!("hadamard_unfold", Derived, hadamard_unfold, inst_hadamard_unfold),
    rule!("hadamard_antipode", Derived, hadamard_antipode, inst_hadamard_antipode),
    rule!("hadamard_inverse", Derived, hadamard_inverse, inst_hadamard_inverse),
    rule!("hadamard_euler", Derived, hadamard_euler, inst_hadamard_euler),
    rule!("hadamard_sum", Derived, hadamard_sum, inst_hadamard_sum),
    rule!("h_loop", Derived, h_loop, inst_h_loop),
    rule!("antipode_unit", Derived, antipode_unit, inst_antipode_unit),
    rule!("antipode_spider", Derived, antipode_spider, inst_antipode_spider),
    rule!("antipode_copy", Derived, antipode_copy, inst_antipode_copy),
    rule!("antipode_phase", Derived, antipode_phase, inst_antipode_phase),
    rule!("antipode_multiplier", Derived, antipode_multiplier, inst_antipode_multiplier),
    rule!("hopf", Derived, hopf, inst_hopf),
    rule!("spider_wars", Derived, spider_wars, inst_spider_wars),
    rule!("loop", Derived, loop_rule, inst_loop),
    rule!("unit_rotation_elim", Derived, unit_rotation_elim, inst_unit_rotation_elim),
    rule!("pauli_copy_phase", Derived, pauli_copy_phase, inst_pauli_copy_phase),
    rule!("multiplier_sum", Derived, multiplier_sum, inst_multiplier_sum),
    rule!("multiplier_elim", Derived, multiplier_elim, inst_multiplier_elim),
    rule!("multiplier_product", Derived, multiplier_product, inst_multiplier_product),
    rule!("multiplier_inverse", Derived, multiplier_inverse, inst_multiplier_inverse),
    rule!("multiplier_spider", Derived, multiplier_spider, inst_multiplier_spider),
    rule!("multiplier_copy", Derived, multiplier_copy, inst_multiplier_copy),
    rule!("clifford_states", Derived, clifford_states, inst_clifford_states),
    rule!("scalar_elementary", Derived, scalar_elementary, inst_scalar_elementary),
    rule!("scalar_phase", Derived, scalar_phase, inst_scalar_phase),
    rule!("scalar_i_elim", Derived, scalar_i_elim, inst_scalar_i_elim),
    rule!("scalar_gauss_elim", Derived, scalar_gauss_elim, inst_scalar_gauss_elim),
    rule!("scalar_omega_elim", Derived, scalar_omega_elim, inst_scalar_omega_elim),
    rule!("scalar_imaginary_elim", Derived, scalar_imaginary_elim, inst_scalar_imaginary_elim),
    rule!("scalar_gauss_multiplication", Derived, scalar_gauss_multiplication, inst_scalar_gauss_multiplication),
    rule!("scalar_omega_multiplication", Derived, scalar_omega_multiplication, inst_scalar_omega_multiplication),
    rule!("zero_elementary", Derived, zero_elementary, inst_zero_elementary),
    rule!("zero_amplitudes", Derived, zero_amplitudes, inst_zero_amplitudes),
    rule!("zero_phases", Derived, zero_phases, inst_zero_phases),
    rule!("colour_change", Meta, colour_change_apply, inst_colour_change),
];

pub fn catalogue() -> &'static [Rule] {
    RULES
}

pub fn find_rule(name: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.name == name)
}

// ----- shared matching helpers -----

fn need(ok: bool, rule: &str, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        pattern(rule, msg)
    }
}

fn vert(s: &RuleSite, i: usize, rule: &str) -> Result<usize> {
    match s.vertices.get(i) {
        Some(&v) => Ok(v),
        None => pattern(rule, format!("site needs at least {} vertices", i + 1)),
    }
}

fn spider(d: &Diagram, v: usize, rule: &str) -> Result<(Colour, Phase)> {
    match d.vertices.get(&v) {
        Some(VertexKind::Z(ph)) => Ok((Colour::Z, *ph)),
        Some(VertexKind::X(ph)) => Ok((Colour::X, *ph)),
        Some(_) => pattern(rule, format!("vertex {v} is not a spider")),
        None => pattern(rule, format!("no vertex {v}")),
    }
}

fn green(d: &Diagram, v: usize, rule: &str) -> Result<Phase> {
    match spider(d, v, rule)? {
        (Colour::Z, ph) => Ok(ph),
        _ => pattern(rule, format!("vertex {v} is not green")),
    }
}

fn red(d: &Diagram, v: usize, rule: &str) -> Result<Phase> {
    match spider(d, v, rule)? {
        (Colour::X, ph) => Ok(ph),
        _ => pattern(rule, format!("vertex {v} is not red")),
    }
}

fn site_edge(d: &Diagram, s: &RuleSite, i: usize, rule: &str) -> Result<usize> {
    match s.edges.get(i) {
        Some(&e) if e < d.edges.len() => Ok(e),
        Some(&e) => pattern(rule, format!("no edge {e}")),
        None => pattern(rule, format!("site needs at least {} edges", i + 1)),
    }
}

/// Incident edges of `v`, requiring exactly `n` of them and no self-loops.
fn plain_legs(d: &Diagram, v: usize, n: usize, rule: &str) -> Result<Vec<usize>> {
    let inc = d.incident(v);
    need(inc.len() == n && inc.iter().all(|&i| !d.edges[i].is_loop()), rule, "wrong degree")?;
    Ok(inc)
}

fn isolated(d: &Diagram, v: usize) -> bool {
    d.incident(v).is_empty()
}

/// Move every edge end at `from` to `to`.
fn merge_into(d: &mut Diagram, from: usize, to: usize) {
    for e in d.edges.iter_mut() {
        if e.a == from {
            e.a = to;
        }
        if e.b == from {
            e.b = to;
        }
    }
}

fn unit(p: Prime) -> Cyclo {
    Cyclo::one(p)
}

fn w(z: Zp) -> Cyclo {
    Cyclo::omega_pow(z)
}

fn rootp(p: Prime, r: i64) -> Cyclo {
    sqrt_p_pow(p, r)
}

fn set_kind(d: &mut Diagram, v: usize, k: VertexKind) {
    d.vertices.insert(v, k);
}

/// Compose the antipode at every end of every edge incident to `v`.
fn antipode_all(d: &mut Diagram, v: usize) {
    let o = d.p.one();
    super::map_all_ends(d, v, &|k| then_mul(k, o));
}

// ----- axioms -----

fn fusion(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "fusion";
    let (u, v) = (vert(s, 0, N)?, vert(s, 1, N)?);
    need(u != v, N, "needs two distinct spiders")?;
    let (pu, pv) = (green(d, u, N)?, green(d, v, N)?);
    let e = match s.edges.first() {
        Some(_) => site_edge(d, s, 0, N)?,
        None => match d.edges_between(u, v).into_iter().find(|&i| d.edges[i].kind == EdgeKind::Plain) {
            Some(i) => i,
            None => return pattern(N, "no plain edge between the spiders"),
        },
    };
    let ed = d.edges[e];
    need(ed.kind == EdgeKind::Plain && ed.touches(u) && ed.touches(v), N, "edge is not a plain u-v edge")?;
    d.remove_edges(vec![e]);
    merge_into(d, v, u);
    d.vertices.remove(&v);
    d.set_phase(u, pu + pv);
    Ok(unit(d.p))
}

fn colour(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "colour";
    let v = vert(s, 0, N)?;
    spider(d, v, N)?;
    colour_change_vertex(d, v)?;
    Ok(unit(d.p))
}

fn shear(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "shear";
    let (g1, r, g2) = (vert(s, 0, N)?, vert(s, 1, N)?, vert(s, 2, N)?);
    need(g1 != g2 && g1 != r && g2 != r, N, "needs three distinct spiders")?;
    let (p1, pr, p2) = (green(d, g1, N)?, red(d, r, N)?, green(d, g2, N)?);
    need(p1 == p2 && p1.y.is_zero(), N, "greens must both be Z(a,0)")?;
    let rl = plain_legs(d, r, 2, N)?;
    let mut drop = Vec::new();
    let mut moved = Vec::new();
    for g in [g1, g2] {
        let gl = plain_legs(d, g, 2, N)?;
        let to_r: Vec<usize> = gl.iter().copied().filter(|&i| d.edges[i].touches(r)).collect();
        need(to_r.len() == 1 && d.edges[to_r[0]].kind == EdgeKind::Plain, N, "green must meet red by one plain edge")?;
        need(rl.contains(&to_r[0]), N, "red leg mismatch")?;
        drop.push(to_r[0]);
        moved.push((gl.into_iter().find(|&i| i != to_r[0]).unwrap(), g));
    }
    let p = d.p;
    let (a, c, dd) = (p1.x, pr.x, pr.y);
    for (i, g) in moved {
        super::retarget(&mut d.edges[i], g, r);
    }
    d.remove_edges(drop);
    d.vertices.remove(&g1);
    d.vertices.remove(&g2);
    d.set_phase(r, Phase::new(c + a * dd, dd));
    let h = half(p);
    Ok(w(h * h * a * c + h * h * h * dd * a * a))
}

fn char_rule(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "char";
    let (x, z) = (vert(s, 0, N)?, vert(s, 1, N)?);
    red(d, x, N)?;
    green(d, z, N)?;
    let p = d.p;
    let plain: Vec<usize> =
        d.edges_between(x, z).into_iter().filter(|&i| d.edges[i].kind == EdgeKind::Plain).collect();
    need(plain.len() as u64 >= p.get(), N, "fewer than p plain edges")?;
    d.remove_edges(plain[..p.get() as usize].to_vec());
    Ok(rootp(p, -(p.get() as i64)))
}

fn bigebra(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    need(s.vertices.len() == 4, "bigebra", "site is two greens then two reds")?;
    let mut s2 = s.clone();
    s2.params = vec![2];
    bigebra_core(d, &s2, "bigebra")
}

fn bigebra_mn(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    bigebra_core(d, s, "bigebra_mn")
}

fn bigebra_core(d: &mut Diagram, s: &RuleSite, n: &str) -> Result<Cyclo> {
    let m = match s.params.first() {
        Some(&m) if m >= 1 && (m as usize) < s.vertices.len() => m as usize,
        _ => return pattern(n, "params must be [m] with 1 ≤ m < site size"),
    };
    let greens = s.vertices[..m].to_vec();
    let reds = s.vertices[m..].to_vec();
    let mut all = s.vertices.clone();
    all.sort_unstable();
    all.dedup();
    need(all.len() == s.vertices.len(), n, "repeated vertex")?;
    for &g in &greens {
        need(green(d, g, n)?.is_zero(), n, "greens must be phase-free")?;
    }
    for &r in &reds {
        need(red(d, r, n)?.is_zero(), n, "reds must be phase-free")?;
    }
    let mut drop = Vec::new();
    for &g in &greens {
        for &r in &reds {
            let e = d.edges_between(g, r).into_iter().find(|&i| d.edges[i].kind == EdgeKind::Plain);
            match e {
                Some(i) => drop.push(i),
                None => return pattern(n, format!("no plain edge {g}-{r}")),
            }
        }
    }
    d.remove_edges(drop);
    let rr = d.add_x(0, 0);
    let gg = d.add_z(0, 0);
    for &g in &greens {
        d.plain(g, rr);
    }
    for &r in &reds {
        d.plain(gg, r);
    }
    d.mul(rr, gg, 1);
    let nn = reds.len() as i64;
    Ok(rootp(d.p, (m as i64 - 1) * (1 - nn)))
}

fn copy(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "copy";
    let (r, g) = (vert(s, 0, N)?, vert(s, 1, N)?);
    let pr = red(d, r, N)?;
    let pg = green(d, g, N)?;
    need(pr.y.is_zero(), N, "red state must be X(x,0)")?;
    let rl = plain_legs(d, r, 1, N)?;
    let e = rl[0];
    need(d.edges[e].kind == EdgeKind::Plain && d.edges[e].touches(g), N, "red must meet green by a plain edge")?;
    let others: Vec<usize> = d.incident(g).into_iter().filter(|&i| i != e).collect();
    need(others.iter().all(|&i| !d.edges[i].is_loop()), N, "green has a self-loop")?;
    let p = d.p;
    for &i in &others {
        let nr = d.add_x(0, 0);
        d.set_phase(nr, pr);
        super::retarget(&mut d.edges[i], g, nr);
    }
    d.remove_edges(vec![e]);
    d.vertices.remove(&r);
    d.vertices.remove(&g);
    let c = half(p) * pr.x;
    let n = others.len() as i64;
    Ok(&rootp(p, 1 - n) * &w(half(p) * (pg.x * c + pg.y * c * c)))
}

fn g_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "g_elim";
    let v = vert(s, 0, N)?;
    g_elim_at(d, v, N)?;
    Ok(unit(d.p))
}

fn g_elim_at(d: &mut Diagram, v: usize, n: &str) -> Result<()> {
    need(green(d, v, n)?.is_zero(), n, "spider must be Z(0,0)")?;
    let l = plain_legs(d, v, 2, n)?;
    let (e1, e2) = if d.edges[l[0]].kind == EdgeKind::Plain {
        (l[0], l[1])
    } else if d.edges[l[1]].kind == EdgeKind::Plain {
        (l[1], l[0])
    } else {
        return pattern(n, "needs a plain leg");
    };
    let a = d.edges[e1].other(v);
    super::retarget(&mut d.edges[e2], v, a);
    d.remove_edges(vec![e1]);
    d.vertices.remove(&v);
    Ok(())
}

fn can_g_elim(d: &Diagram, v: usize) -> bool {
    let inc = d.incident(v);
    matches!(d.kind(v), VertexKind::Z(ph) if ph.is_zero())
        && inc.len() == 2
        && inc.iter().all(|&i| !d.edges[i].is_loop())
        && inc.iter().any(|&i| d.edges[i].kind == EdgeKind::Plain)
}

fn r_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "r_elim";
    let (u, v) = (vert(s, 0, N)?, vert(s, 1, N)?);
    need(u != v, N, "needs two spiders")?;
    need(red(d, u, N)?.is_zero() && red(d, v, N)?.is_zero(), N, "reds must be X(0,0)")?;
    plain_legs(d, u, 2, N)?;
    plain_legs(d, v, 2, N)?;
    let e = match d.edges_between(u, v).into_iter().find(|&i| d.edges[i].kind == EdgeKind::Plain) {
        Some(i) => i,
        None => return pattern(N, "no plain edge between the reds"),
    };
    set_kind(d, u, VertexKind::Z(Phase::zero(d.p)));
    d.remove_edges(vec![e]);
    merge_into(d, v, u);
    d.vertices.remove(&v);
    if can_g_elim(d, u) {
        g_elim_at(d, u, N)?;
    }
    Ok(unit(d.p))
}

fn mult(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "mult";
    let (g, r) = (vert(s, 0, N)?, vert(s, 1, N)?);
    need(green(d, g, N)?.is_zero() && red(d, r, N)?.is_zero(), N, "spiders must be phase-free")?;
    let between = d.edges_between(g, r);
    need(between.iter().all(|&i| d.edges[i].kind == EdgeKind::Plain), N, "edges must be plain")?;
    let k = between.len();
    let p = d.p;
    need(k >= 1 && k as u64 % p.get() != 0, N, "edge count must be a unit mod p")?;
    plain_legs(d, g, k + 1, N)?;
    plain_legs(d, r, k + 1, N)?;
    d.remove_edges(between);
    d.add_edge(g, r, EdgeKind::Mul(p.zp(k as i64)));
    set_kind(d, r, VertexKind::Z(Phase::zero(p)));
    for v in [g, r] {
        if can_g_elim(d, v) {
            g_elim_at(d, v, N)?;
        }
    }
    Ok(rootp(p, 1 - k as i64))
}

fn gauss(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "gauss";
    let v = vert(s, 0, N)?;
    let ph = green(d, v, N)?;
    need(isolated(d, v) && ph.x.is_zero() && !ph.y.is_zero(), N, "needs a closed Z(0,z), z ≠ 0")?;
    d.vertices.remove(&v);
    quadratic_gauss_sum(ph.y)
}

fn m_one(d: &mut Diagram, _s: &RuleSite) -> Result<Cyclo> {
    need(d.star == 1, "m_one", "no star present")?;
    d.star = 0;
    Ok(Cyclo::from_int(d.p, -1))
}

fn m_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "m_elim";
    let r = vert(s, 0, N)?;
    let ph = red(d, r, N)?;
    let l = plain_legs(d, r, 1, N)?;
    let e = match s.edges.first() {
        Some(_) => site_edge(d, s, 0, N)?,
        None => l[0],
    };
    need(e == l[0], N, "edge is not the red's leg")?;
    let z = match d.edges[e].kind {
        EdgeKind::Mul(z) => z,
        _ => return pattern(N, "leg is not a multiplier"),
    };
    let f = if d.edges[e].a == r { z } else { inv_nz(z) };
    d.set_phase(r, Phase::new(-(ph.x * f), ph.y * f * f));
    d.edges[e].kind = EdgeKind::Plain;
    Ok(unit(d.p))
}

fn zero(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "zero";
    let v = vert(s, 0, N)?;
    let ph = green(d, v, N)?;
    need(isolated(d, v) && !ph.x.is_zero() && ph.y.is_zero(), N, "needs a closed Z(a,0), a ≠ 0")?;
    let (m, n) = d.arity();
    *d = zero_form(d.p, m, n);
    Ok(Cyclo::zero(d.p))
}

fn is_r(d: &Diagram, x: usize, z: usize, deg: usize) -> bool {
    let ok_x = matches!(d.vertices.get(&x), Some(VertexKind::X(ph)) if ph.is_zero());
    let ok_z = matches!(d.vertices.get(&z), Some(VertexKind::Z(ph)) if ph.is_zero());
    if !ok_x || !ok_z || x == z {
        return false;
    }
    let ix = d.incident(x);
    let iz = d.incident(z);
    ix.len() == deg
        && ix == iz
        && ix.iter().all(|&i| d.edges[i].kind == EdgeKind::Plain && !d.edges[i].is_loop())
}

fn one_rule(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    let (x, z) = (vert(s, 0, "one")?, vert(s, 1, "one")?);
    need(is_r(d, x, z, 2), "one", "needs a closed R_2")?;
    d.remove_vertex(x);
    d.remove_vertex(z);
    Ok(Cyclo::one(d.p))
}

// ----- structural -----

fn flex(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "flex";
    let v = vert(s, 0, N)?;
    spider(d, v, N)?;
    let inc = d.incident(v);
    let mut perm: Vec<usize> = Vec::new();
    for &x in &s.params {
        need(x >= 0 && (x as usize) < inc.len(), N, "params must permute the legs")?;
        perm.push(x as usize);
    }
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    need(sorted == (0..inc.len()).collect::<Vec<_>>(), N, "params must permute the legs")?;
    let old: Vec<Edge> = inc.iter().map(|&i| d.edges[i]).collect();
    for (k, &i) in inc.iter().enumerate() {
        d.edges[i] = old[perm[k]];
    }
    Ok(unit(d.p))
}

fn mul_reverse(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    let e = site_edge(d, s, 0, "mul_reverse")?;
    d.edges[e] = d.edges[e].reversed();
    Ok(unit(d.p))
}

fn id_intro(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    let e = site_edge(d, s, 0, "id_intro")?;
    let a = d.edges[e].a;
    let m = d.add_z(0, 0);
    d.edges[e].a = m;
    d.plain(a, m);
    Ok(unit(d.p))
}

// ----- derived: spiders and Hadamards -----

fn red_fusion(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "red_fusion";
    let (u, v) = (vert(s, 0, N)?, vert(s, 1, N)?);
    need(u != v, N, "needs two distinct spiders")?;
    let (pu, pv) = (red(d, u, N)?, red(d, v, N)?);
    let one_z = d.p.one();
    let e = match s.edges.first() {
        Some(_) => site_edge(d, s, 0, N)?,
        None => match d.edges_between(u, v).into_iter().find(|&i| d.edges[i].kind == EdgeKind::Mul(one_z)) {
            Some(i) => i,
            None => return pattern(N, "no Mul(1) edge between the spiders"),
        },
    };
    let ed = d.edges[e];
    need(ed.kind == EdgeKind::Mul(one_z) && ed.touches(u) && ed.touches(v), N, "edge is not a Mul(1) u-v edge")?;
    d.remove_edges(vec![e]);
    merge_into(d, v, u);
    d.vertices.remove(&v);
    d.set_phase(u, pu + pv);
    Ok(unit(d.p))
}

/// The two legs of a degree-2 phase-free green `m`.
fn id_legs(d: &Diagram, m: usize, n: &str) -> Result<(usize, usize)> {
    need(green(d, m, n)?.is_zero(), n, "middle spider must be Z(0,0)")?;
    let l = plain_legs(d, m, 2, n)?;
    Ok((l[0], l[1]))
}

fn hadamard_product(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "hadamard_product";
    let m = vert(s, 0, N)?;
    let (e1, e2) = id_legs(d, m, N)?;
    let (w1, w2) = match (d.edges[e1].kind, d.edges[e2].kind) {
        (EdgeKind::H(a), EdgeKind::H(b)) => (a, b),
        _ => return pattern(N, "both legs must be Hadamard edges"),
    };
    let a = d.edges[e1].other(m);
    let b = d.edges[e2].other(m);
    d.remove_vertex(m);
    let k = plain_if_identity(EdgeKind::Mul(w1 * inv_nz(w2)), d.p);
    d.add_edge(a, b, k);
    Ok(unit(d.p))
}

fn hadamard_unfold(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "hadamard_unfold";
    let e = site_edge(d, s, 0, N)?;
    let z = match d.edges[e].kind {
        EdgeKind::Mul(z) => z,
        _ => return pattern(N, "edge is not a multiplier"),
    };
    let b = d.edges[e].b;
    let m = d.add_z(0, 0);
    d.edges[e].b = m;
    d.edges[e].kind = EdgeKind::H(z);
    d.h(m, b, 1);
    Ok(unit(d.p))
}

fn hadamard_antipode(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "hadamard_antipode";
    let m = vert(s, 0, N)?;
    let (e1, e2) = id_legs(d, m, N)?;
    let o = d.p.one();
    let (eh, em) = match (d.edges[e1].kind, d.edges[e2].kind) {
        (EdgeKind::H(_), EdgeKind::Mul(z)) if z == o => (e1, e2),
        (EdgeKind::Mul(z), EdgeKind::H(_)) if z == o => (e2, e1),
        _ => return pattern(N, "legs must be one H(w) and one Mul(1)"),
    };
    let hk = d.edges[eh].kind;
    d.edges[eh].kind = EdgeKind::Mul(o);
    d.edges[em].kind = hk;
    Ok(unit(d.p))
}

fn hadamard_inverse(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "hadamard_inverse";
    let e = site_edge(d, s, 0, N)?;
    need(d.edges[e].kind == EdgeKind::H(-d.p.one()), N, "edge is not H(-1)")?;
    let b = d.edges[e].b;
    let m1 = d.add_z(0, 0);
    let m2 = d.add_z(0, 0);
    d.edges[e].b = m1;
    d.edges[e].kind = EdgeKind::H(d.p.one());
    d.h(m1, m2, 1);
    d.h(m2, b, 1);
    Ok(unit(d.p))
}

fn hadamard_euler(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "hadamard_euler";
    let e = site_edge(d, s, 0, N)?;
    let wt = match d.edges[e].kind {
        EdgeKind::H(x) => x,
        _ => return pattern(N, "edge is not a Hadamard edge"),
    };
    let p = d.p;
    let b = d.edges[e].b;
    let g1 = d.add_spider(Colour::Z, Phase::new(p.zero(), -wt));
    let r = d.add_spider(Colour::X, Phase::new(p.zero(), -inv_nz(wt)));
    let g2 = d.add_spider(Colour::Z, Phase::new(p.zero(), -wt));
    d.edges[e].b = g1;
    d.edges[e].kind = EdgeKind::Plain;
    d.plain(g1, r);
    d.plain(r, g2);
    d.plain(g2, b);
    let g = quadratic_gauss_sum(-inv_nz(wt))?;
    Ok(&rootp(p, 1) * &g.inv_unit()?)
}

fn hadamard_sum(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "hadamard_sum";
    let (u, v) = (vert(s, 0, N)?, vert(s, 1, N)?);
    need(u != v, N, "needs two distinct spiders")?;
    green(d, u, N)?;
    green(d, v, N)?;
    let hs: Vec<usize> =
        d.edges_between(u, v).into_iter().filter(|&i| matches!(d.edges[i].kind, EdgeKind::H(_))).collect();
    need(hs.len() >= 2, N, "needs at least two Hadamard edges")?;
    let p = d.p;
    let mut total = p.zero();
    for &i in &hs {
        if let EdgeKind::H(x) = d.edges[i].kind {
            total += x;
        }
    }
    let n = hs.len() as i64;
    d.remove_edges(hs);
    if total.is_zero() {
        Ok(rootp(p, -n))
    } else {
        d.add_edge(u, v, EdgeKind::H(total));
        Ok(rootp(p, 1 - n))
    }
}

fn loop_edge(d: &Diagram, s: &RuleSite, v: usize, n: &str, ok: &dyn Fn(EdgeKind) -> bool) -> Result<usize> {
    let e = match s.edges.first() {
        Some(_) => site_edge(d, s, 0, n)?,
        None => match d.incident(v).into_iter().find(|&i| d.edges[i].is_loop() && ok(d.edges[i].kind)) {
            Some(i) => i,
            None => return pattern(n, "no matching self-loop"),
        },
    };
    let ed = d.edges[e];
    need(ed.a == v && ed.b == v && ok(ed.kind), n, "edge is not a matching self-loop")?;
    Ok(e)
}

fn h_loop(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "h_loop";
    let v = vert(s, 0, N)?;
    let (c, ph) = spider(d, v, N)?;
    let e = loop_edge(d, s, v, N, &|k| matches!(k, EdgeKind::H(_)))?;
    let wt = match d.edges[e].kind {
        EdgeKind::H(x) => x,
        _ => unreachable!(),
    };
    let p = d.p;
    let two = p.zp(2);
    let y = match c {
        Colour::Z => ph.y + two * wt,
        Colour::X => ph.y - two * inv_nz(wt),
    };
    d.remove_edges(vec![e]);
    d.set_phase(v, Phase::new(ph.x, y));
    Ok(rootp(p, -1))
}

// ----- derived: antipodes -----

fn negate_x(ph: Phase) -> Phase {
    Phase::new(-ph.x, ph.y)
}

fn antipode_unit(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "antipode_unit";
    let v = vert(s, 0, N)?;
    let (_, ph) = spider(d, v, N)?;
    let l = plain_legs(d, v, 1, N)?;
    need(d.edges[l[0]].kind == EdgeKind::Mul(d.p.one()), N, "leg is not Mul(1)")?;
    d.edges[l[0]].kind = EdgeKind::Plain;
    d.set_phase(v, negate_x(ph));
    Ok(unit(d.p))
}

fn antipode_spider(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "antipode_spider";
    let v = vert(s, 0, N)?;
    let (_, ph) = spider(d, v, N)?;
    antipode_all(d, v);
    d.set_phase(v, negate_x(ph));
    Ok(unit(d.p))
}

fn antipode_copy(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "antipode_copy";
    let v = vert(s, 0, N)?;
    need(spider(d, v, N)?.1.is_zero(), N, "spider must be phase-free")?;
    antipode_all(d, v);
    Ok(unit(d.p))
}

fn antipode_phase(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "antipode_phase";
    let v = vert(s, 0, N)?;
    let (_, ph) = spider(d, v, N)?;
    let l = plain_legs(d, v, 2, N)?;
    let o = d.p.one();
    need(l.iter().any(|&i| d.edges[i].kind == EdgeKind::Mul(o)), N, "needs a Mul(1) leg")?;
    antipode_all(d, v);
    d.set_phase(v, negate_x(ph));
    Ok(unit(d.p))
}

fn antipode_multiplier(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "antipode_multiplier";
    let v = vert(s, 0, N)?;
    need(red(d, v, N)?.is_zero(), N, "red must be X(0,0)")?;
    let l = plain_legs(d, v, 2, N)?;
    let o = d.p.one();
    let e = &mut d.edges[l[0]];
    let at_b = e.b == v;
    map_end(e, at_b, &|k| then_mul(k, o));
    set_kind(d, v, VertexKind::Z(Phase::zero(d.p)));
    if can_g_elim(d, v) {
        g_elim_at(d, v, N)?;
    }
    Ok(unit(d.p))
}

// ----- derived: bialgebra family -----

fn hopf(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "hopf";
    let (g, r) = (vert(s, 0, N)?, vert(s, 1, N)?);
    green(d, g, N)?;
    red(d, r, N)?;
    let o = d.p.one();
    let between = d.edges_between(g, r);
    let pl = between.iter().copied().find(|&i| d.edges[i].kind == EdgeKind::Plain);
    let mu = between.iter().copied().find(|&i| d.edges[i].kind == EdgeKind::Mul(o));
    match (pl, mu) {
        (Some(a), Some(b)) => d.remove_edges(vec![a, b]),
        _ => return pattern(N, "needs a plain and a Mul(1) edge"),
    }
    Ok(rootp(d.p, -2))
}

fn spider_wars(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "spider_wars";
    let (x, z) = (vert(s, 0, N)?, vert(s, 1, N)?);
    red(d, x, N)?;
    green(d, z, N)?;
    let p = d.p.get() as usize;
    let plain: Vec<usize> =
        d.edges_between(x, z).into_iter().filter(|&i| d.edges[i].kind == EdgeKind::Plain).collect();
    let n = plain.len();
    need(n >= p, N, "fewer than p plain edges")?;
    let k = n - n % p;
    d.remove_edges(plain[..k].to_vec());
    Ok(rootp(d.p, -(k as i64)))
}

fn loop_rule(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "loop";
    let v = vert(s, 0, N)?;
    let (c, _) = spider(d, v, N)?;
    let o = d.p.one();
    let e = match c {
        Colour::Z => loop_edge(d, s, v, N, &|k| k == EdgeKind::Plain)?,
        Colour::X => loop_edge(d, s, v, N, &|k| k == EdgeKind::Mul(o))?,
    };
    d.remove_edges(vec![e]);
    Ok(unit(d.p))
}

fn unit_rotation_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "unit_rotation_elim";
    let (u, r) = (vert(s, 0, N)?, vert(s, 1, N)?);
    let (cu, pu) = spider(d, u, N)?;
    let (cr, _) = spider(d, r, N)?;
    need(cu != cr && pu.is_zero(), N, "needs a phase-free unit and an opposite-colour spider")?;
    let lu = plain_legs(d, u, 1, N)?;
    let lr = plain_legs(d, r, 2, N)?;
    let e = lu[0];
    need(d.edges[e].kind == EdgeKind::Plain && lr.contains(&e), N, "unit must meet the rotation by a plain edge")?;
    let other = if lr[0] == e { lr[1] } else { lr[0] };
    super::retarget(&mut d.edges[other], r, u);
    d.remove_edges(vec![e]);
    d.vertices.remove(&r);
    Ok(unit(d.p))
}

fn pauli_copy_phase(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "pauli_copy_phase";
    let (v, u) = (vert(s, 0, N)?, vert(s, 1, N)?);
    need(u != v, N, "needs two spiders")?;
    let (cv, pv) = spider(d, v, N)?;
    let (cu, pu) = spider(d, u, N)?;
    need(cu != cv && pu.y.is_zero(), N, "needs a Pauli of the opposite colour")?;
    let lu = plain_legs(d, u, 2, N)?;
    let lv = d.incident(v);
    need(lv.iter().all(|&i| !d.edges[i].is_loop()), N, "spider has a self-loop")?;
    let shared: Vec<usize> = lu.iter().copied().filter(|&i| d.edges[i].touches(v)).collect();
    need(shared.len() == 1 && d.edges[shared[0]].kind == EdgeKind::Plain, N, "needs one plain edge to the Pauli")?;
    let e = shared[0];
    let out = if lu[0] == e { lu[1] } else { lu[0] };
    let p = d.p;
    let x = pu.x;
    let c = half(p) * x;
    let others: Vec<usize> = lv.into_iter().filter(|&i| i != e).collect();
    for &i in &others {
        let nv = match cv {
            Colour::Z => d.add_spider(Colour::X, Phase::new(x, p.zero())),
            Colour::X => d.add_spider(Colour::Z, Phase::new(-x, p.zero())),
        };
        super::retarget(&mut d.edges[i], v, nv);
        d.plain(v, nv);
    }
    super::retarget(&mut d.edges[out], u, v);
    d.remove_edges(vec![e]);
    d.vertices.remove(&u);
    let (a, b) = (pv.x, pv.y);
    let np = match cv {
        Colour::Z => Phase::new(-a - b * x, b),
        Colour::X => Phase::new(a + b * x, b),
    };
    d.set_phase(v, np);
    Ok(w(half(p) * (a * c + b * c * c)))
}

// ----- derived: multipliers -----

fn multiplier_sum(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "multiplier_sum";
    let (g, r) = (vert(s, 0, N)?, vert(s, 1, N)?);
    green(d, g, N)?;
    red(d, r, N)?;
    let p = d.p;
    let mut used = Vec::new();
    let mut total = p.zero();
    for i in d.edges_between(g, r) {
        let e = d.edges[i].from(g);
        match e.kind {
            EdgeKind::Plain => total -= p.one(),
            EdgeKind::Mul(z) => total += z,
            EdgeKind::H(_) => continue,
        }
        used.push(i);
    }
    let n = used.len() as i64;
    need(n >= 2, N, "needs at least two parallel multipliers")?;
    d.remove_edges(used);
    if total.is_zero() {
        Ok(rootp(p, -n))
    } else {
        d.add_edge(g, r, plain_if_identity(EdgeKind::Mul(total), p));
        Ok(rootp(p, 1 - n))
    }
}

fn multiplier_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "multiplier_elim";
    let v = vert(s, 0, N)?;
    let ph = green(d, v, N)?;
    let l = plain_legs(d, v, 1, N)?;
    let e = l[0];
    let z = match d.edges[e].kind {
        EdgeKind::Mul(z) => z,
        _ => return pattern(N, "leg is not a multiplier"),
    };
    let f = if d.edges[e].a == v { inv_nz(z) } else { z };
    d.set_phase(v, Phase::new(-(ph.x * f), ph.y * f * f));
    d.edges[e].kind = EdgeKind::Plain;
    Ok(unit(d.p))
}

fn product_core(d: &mut Diagram, s: &RuleSite, n: &str, inverse_only: bool) -> Result<Cyclo> {
    let m = vert(s, 0, n)?;
    let (e1, e2) = id_legs(d, m, n)?;
    let into = {
        let e = d.edges[e1];
        if e.b == m {
            e
        } else {
            e.reversed()
        }
    };
    let outof = d.edges[e2].from(m);
    let (x, y) = match (into.kind, outof.kind) {
        (EdgeKind::Mul(x), EdgeKind::Mul(y)) => (x, y),
        _ => return pattern(n, "both legs must be multipliers"),
    };
    let p = d.p;
    let prod = x * y;
    need(!inverse_only || prod == p.one(), n, "multipliers are not inverse")?;
    let (a, b) = (into.a, outof.b);
    d.remove_vertex(m);
    d.add_edge(a, b, plain_if_identity(EdgeKind::Mul(-prod), p));
    Ok(unit(p))
}

fn multiplier_product(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    product_core(d, s, "multiplier_product", false)
}

fn multiplier_inverse(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    product_core(d, s, "multiplier_inverse", true)
}

fn spider_core(d: &mut Diagram, s: &RuleSite, n: &str, phase_free: bool) -> Result<Cyclo> {
    let v = vert(s, 0, n)?;
    let (c, ph) = spider(d, v, n)?;
    need(!phase_free || ph.is_zero(), n, "spider must be phase-free")?;
    let e = match s.edges.first() {
        Some(_) => site_edge(d, s, 0, n)?,
        None => match d
            .incident(v)
            .into_iter()
            .find(|&i| !d.edges[i].is_loop() && matches!(d.edges[i].kind, EdgeKind::Mul(_)))
        {
            Some(i) => i,
            None => return pattern(n, "no multiplier leg"),
        },
    };
    let ed = d.edges[e];
    need(ed.touches(v) && !ed.is_loop(), n, "edge is not a leg of the spider")?;
    let into = if ed.b == v { ed } else { ed.reversed() };
    let x = match into.kind {
        EdgeKind::Mul(x) => x,
        _ => return pattern(n, "edge is not a multiplier"),
    };
    let xi = inv_nz(x);
    for i in d.incident(v) {
        if i == e {
            continue;
        }
        let edge = &mut d.edges[i];
        let f = |k: EdgeKind| then_mul(k, xi);
        if edge.b == v {
            map_end(edge, true, &f);
        }
        if edge.a == v {
            map_end(edge, false, &f);
        }
    }
    d.edges[e].kind = EdgeKind::Plain;
    let f = match c {
        Colour::Z => x,
        Colour::X => xi,
    };
    d.set_phase(v, Phase::new(-(ph.x * f), ph.y * f * f));
    Ok(unit(d.p))
}

fn multiplier_spider(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    spider_core(d, s, "multiplier_spider", false)
}

fn multiplier_copy(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    spider_core(d, s, "multiplier_copy", true)
}

fn clifford_states(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "clifford_states";
    let v = vert(s, 0, N)?;
    let ph = green(d, v, N)?;
    plain_legs(d, v, 1, N)?;
    need(!ph.y.is_zero(), N, "needs Z(a,x) with x ≠ 0")?;
    let p = d.p;
    let xi = inv_nz(ph.y);
    let y = -xi;
    let c = -(xi * ph.x);
    set_kind(d, v, VertexKind::X(Phase::new(c, y)));
    let h = half(p);
    let g = quadratic_gauss_sum(y)?;
    Ok(&(&rootp(p, 1) * &w(h * h * h * inv_nz(y) * c * c)) * &g.inv_unit()?)
}

// ----- derived: scalars -----

fn star_if(d: &mut Diagram, neg: bool) {
    if neg {
        d.add_star(1);
    }
}

fn is_hloop(d: &Diagram, v: usize) -> Option<Zp> {
    if !matches!(d.vertices.get(&v), Some(VertexKind::Z(ph)) if ph.is_zero()) {
        return None;
    }
    let inc = d.incident(v);
    match inc.as_slice() {
        [i] if d.edges[*i].is_loop() => match d.edges[*i].kind {
            EdgeKind::H(x) => Some(x),
            _ => None,
        },
        _ => None,
    }
}

fn closed_phase(d: &Diagram, v: usize, n: &str) -> Result<Phase> {
    let (_, ph) = spider(d, v, n)?;
    need(isolated(d, v), n, "spider must be closed")?;
    Ok(ph)
}

fn scalar_elementary(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "scalar_elementary";
    if s.vertices.is_empty() {
        add_r(d, 1);
        add_r(d, 4);
        add_r(d, 1);
        return Ok(unit(d.p));
    }
    need(s.vertices.len() == 6, N, "site is R1, R4, R1 as red/green pairs")?;
    let v = &s.vertices;
    need(is_r(d, v[0], v[1], 1) && is_r(d, v[2], v[3], 4) && is_r(d, v[4], v[5], 1), N, "not R1 ⊗ R4 ⊗ R1")?;
    for &x in v {
        d.remove_vertex(x);
    }
    Ok(unit(d.p))
}

fn scalar_phase(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "scalar_phase";
    let v = vert(s, 0, N)?;
    let ph = closed_phase(d, v, N)?;
    let p = d.p;
    let f = if ph.y.is_zero() {
        need(ph.x.is_zero(), N, "Z(a,0) with a ≠ 0 is a zero scalar")?;
        Cyclo::from_int(p, p.get() as i64)
    } else {
        let h = half(p);
        &quadratic_gauss_sum(ph.y)? * &w(-(h * h * h * inv_nz(ph.y) * ph.x * ph.x))
    };
    d.vertices.remove(&v);
    Ok(f)
}

fn scalar_i_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "scalar_i_elim";
    let p = d.p;
    let o = p.one();
    if p.is_one_mod_four() {
        let v = vert(s, 0, N)?;
        need(is_hloop(d, v) == Some(o), N, "not an H(1) loop")?;
        d.remove_vertex(v);
    } else {
        let (u, v) = (vert(s, 0, N)?, vert(s, 1, N)?);
        need(u != v && is_hloop(d, u) == Some(o) && is_hloop(d, v) == Some(o), N, "needs two H(1) loops")?;
        d.remove_vertex(u);
        d.remove_vertex(v);
        d.add_star(1);
    }
    Ok(unit(p))
}

/// Diagram for `G(z)`: `R_1`, an `H(1)` loop when `p ≡ 3 mod 4`, and a star
/// when `2z` is a non-residue.
fn add_gauss_form(d: &mut Diagram, z: Zp) {
    let p = d.p;
    add_r(d, 1);
    if !p.is_one_mod_four() {
        add_hloop(d);
    }
    star_if(d, legendre(p.zp(2) * z) < 0);
}

fn scalar_gauss_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "scalar_gauss_elim";
    let v = vert(s, 0, N)?;
    let ph = closed_phase(d, v, N)?;
    need(green(d, v, N).is_ok() && ph.x.is_zero() && !ph.y.is_zero(), N, "needs a closed Z(0,z), z ≠ 0")?;
    d.vertices.remove(&v);
    add_gauss_form(d, ph.y);
    Ok(unit(d.p))
}

fn w_pair(d: &Diagram, z: usize, x: usize, n: &str) -> Result<(Zp, Zp)> {
    let pz = green(d, z, n)?;
    let px = red(d, x, n)?;
    need(pz.y.is_zero() && px.y.is_zero(), n, "W needs Z(a,0) and X(c,0)")?;
    let iz = d.incident(z);
    need(iz.len() == 1 && iz == d.incident(x) && d.edges[iz[0]].kind == EdgeKind::Plain, n, "W needs one plain edge")?;
    Ok((pz.x, px.x))
}

fn scalar_omega_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "scalar_omega_elim";
    let (z, x) = (vert(s, 0, N)?, vert(s, 1, N)?);
    let (a, c) = w_pair(d, z, x, N)?;
    let p = d.p;
    d.set_phase(z, Phase::new(a * c, p.zero()));
    d.set_phase(x, Phase::new(p.one(), p.zero()));
    Ok(unit(p))
}

fn scalar_imaginary_elim(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "scalar_imaginary_elim";
    let v = vert(s, 0, N)?;
    let wt = match is_hloop(d, v) {
        Some(x) => x,
        None => return pattern(N, "not a Hadamard loop"),
    };
    let e = d.incident(v)[0];
    d.edges[e].kind = EdgeKind::H(d.p.one());
    star_if(d, legendre(wt) < 0);
    Ok(unit(d.p))
}

fn scalar_gauss_multiplication(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "scalar_gauss_multiplication";
    let (u, v) = (vert(s, 0, N)?, vert(s, 1, N)?);
    need(u != v, N, "needs two Gauss scalars")?;
    let (pu, pv) = (closed_phase(d, u, N)?, closed_phase(d, v, N)?);
    need(green(d, u, N).is_ok() && green(d, v, N).is_ok(), N, "Gauss scalars are green")?;
    need(pu.x.is_zero() && pv.x.is_zero() && !pu.y.is_zero() && !pv.y.is_zero(), N, "needs Z(0,z), z ≠ 0")?;
    d.vertices.remove(&u);
    d.vertices.remove(&v);
    add_r(d, 1);
    add_r(d, 1);
    star_if(d, legendre(-(pu.y * pv.y)) < 0);
    Ok(unit(d.p))
}

fn scalar_omega_multiplication(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "scalar_omega_multiplication";
    let (z1, x1, z2, x2) = (vert(s, 0, N)?, vert(s, 1, N)?, vert(s, 2, N)?, vert(s, 3, N)?);
    need(z1 != z2, N, "needs two W components")?;
    let (a1, c1) = w_pair(d, z1, x1, N)?;
    let (a2, c2) = w_pair(d, z2, x2, N)?;
    let p = d.p;
    d.remove_vertex(z2);
    d.remove_vertex(x2);
    d.set_phase(z1, Phase::new(a1 * c1 + a2 * c2, p.zero()));
    d.set_phase(x1, Phase::new(p.one(), p.zero()));
    add_r(d, 1);
    Ok(unit(p))
}

fn zero_vertex(d: &Diagram, v: usize, n: &str) -> Result<()> {
    let ph = green(d, v, n)?;
    need(isolated(d, v) && !ph.x.is_zero() && ph.y.is_zero(), n, "needs a closed Z(a,0), a ≠ 0")
}

fn zero_elementary(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "zero_elementary";
    let v = vert(s, 0, N)?;
    zero_vertex(d, v, N)?;
    d.set_phase(v, Phase::of(d.p, 1, 0));
    Ok(unit(d.p))
}

fn zero_amplitudes(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "zero_amplitudes";
    let z = vert(s, 0, N)?;
    zero_vertex(d, z, N)?;
    let comp: Vec<usize> = s.vertices[1..].to_vec();
    need(!comp.is_empty() && !comp.contains(&z), N, "needs a component to remove")?;
    for &v in &comp {
        spider(d, v, N)?;
    }
    let inside = |v: usize| comp.contains(&v);
    need(
        d.edges.iter().all(|e| inside(e.a) == inside(e.b)),
        N,
        "vertices do not form closed components",
    )?;
    for &v in &comp {
        d.remove_vertex(v);
    }
    Ok(unit(d.p))
}

fn zero_phases(d: &mut Diagram, s: &RuleSite) -> Result<Cyclo> {
    const N: &str = "zero_phases";
    let (z, v) = (vert(s, 0, N)?, vert(s, 1, N)?);
    zero_vertex(d, z, N)?;
    need(z != v, N, "needs another spider")?;
    spider(d, v, N)?;
    d.set_phase(v, Phase::zero(d.p));
    Ok(unit(d.p))
}

// ----- meta -----

fn colour_change_apply(_d: &mut Diagram, _s: &RuleSite) -> Result<Cyclo> {
    Err(Error::Domain("colour_change is a meta rule; use colour_change_meta".into()))
}

/// `⟦S(A)⟧ = H^{⊗n} ∘ ⟦A⟧ ∘ H^{⊗m}` exactly.
pub fn colour_change_check(d: &Diagram) -> Result<bool> {
    let p = d.p;
    let (m, n) = d.arity();
    let hs = |k: usize| {
        let mut acc = Diagram::identity(p, 0);
        for _ in 0..k {
            acc = acc.tensor(&Diagram::hadamard(p)).expect("tensor");
        }
        acc
    };
    let rhs = hs(m).compose(d)?.compose(&hs(n))?;
    let lhs = colour_change_meta(d);
    let a = interp_raw(&lhs)?;
    let b = interp_raw(&rhs)?;
    let one = Cyclo::one(p);
    Ok(a.scaled_eq(&one, &b, &one))
}

// ----- instance generators -----

fn budget(p: Prime) -> usize {
    if p.get() <= 5 {
        4
    } else {
        3
    }
}

/// Attach a fresh random host spider to `v` by a random edge.
fn host(d: &mut Diagram, v: usize, rng: &mut ChaCha8Rng) -> usize {
    let ph = rand_phase(d.p, rng);
    let h = d.add_spider(rand_colour(rng), ph);
    rand_edge(d, v, h, rng);
    h
}

fn finish(mut d: Diagram, ports: &[usize], site: RuleSite, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let b = budget(d.p);
    dress(&mut d, ports, b, rng);
    (d, site)
}

/// An unrelated random open context for closed-component rules.
fn context(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, Vec<usize>) {
    let mut d = Diagram::empty(p);
    let n = rng.gen_range(1..=2);
    let hs: Vec<usize> = (0..n)
        .map(|_| {
            let ph = rand_phase(p, rng);
            d.add_spider(rand_colour(rng), ph)
        })
        .collect();
    if n == 2 {
        rand_edge(&mut d, hs[0], hs[1], rng);
    }
    (d, hs)
}

fn inst_fusion(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let u = d.add_spider(Colour::Z, rand_phase(p, rng));
    let v = d.add_spider(Colour::Z, rand_phase(p, rng));
    let e = d.plain(u, v);
    if rng.gen_bool(0.3) {
        rand_edge(&mut d, u, v, rng);
    }
    finish(d, &[u, v], RuleSite::new("fusion", vec![u, v]).with_edges(vec![e]), rng)
}

fn inst_colour(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let h = host(&mut d, v, rng);
    if rng.gen_bool(0.3) {
        let k = rand_edge_kind(p, rng);
        d.add_edge(v, v, k);
    }
    finish(d, &[v, h], RuleSite::new("colour", vec![v]), rng)
}

fn inst_shear(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let a = rand_zp(p, rng);
    let g1 = d.add_spider(Colour::Z, Phase::new(a, p.zero()));
    let r = d.add_spider(Colour::X, rand_phase(p, rng));
    let g2 = d.add_spider(Colour::Z, Phase::new(a, p.zero()));
    d.plain(g1, r);
    d.plain(r, g2);
    let h1 = host(&mut d, g1, rng);
    let h2 = host(&mut d, g2, rng);
    finish(d, &[h1, h2], RuleSite::new("shear", vec![g1, r, g2]), rng)
}

fn inst_char(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let x = d.add_spider(Colour::X, rand_phase(p, rng));
    let z = d.add_spider(Colour::Z, rand_phase(p, rng));
    let n = p.get() as usize + rng.gen_range(0..3);
    for _ in 0..n {
        d.plain(x, z);
    }
    finish(d, &[x, z], RuleSite::new("char", vec![x, z]), rng)
}

fn bigebra_instance(p: Prime, m: usize, n: usize, name: &str, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let gs: Vec<usize> = (0..m).map(|_| d.add_z(0, 0)).collect();
    let rs: Vec<usize> = (0..n).map(|_| d.add_x(0, 0)).collect();
    for &g in &gs {
        for &r in &rs {
            d.plain(g, r);
        }
    }
    let mut ports = Vec::new();
    for &v in gs.iter().chain(&rs) {
        if rng.gen_bool(0.7) {
            ports.push(host(&mut d, v, rng));
        }
    }
    let mut vs = gs.clone();
    vs.extend(&rs);
    finish(d, &ports, RuleSite::new(name, vs).with_params(vec![m as i64]), rng)
}

fn inst_bigebra(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    bigebra_instance(p, 2, 2, "bigebra", rng)
}

fn inst_bigebra_mn(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let m = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=3);
    bigebra_instance(p, m, n, "bigebra_mn", rng)
}

fn inst_copy(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let r = d.add_spider(Colour::X, Phase::new(rand_zp(p, rng), p.zero()));
    let g = d.add_spider(Colour::Z, rand_phase(p, rng));
    d.plain(r, g);
    let k = rng.gen_range(0..=3);
    let hs: Vec<usize> = (0..k).map(|_| host(&mut d, g, rng)).collect();
    finish(d, &hs, RuleSite::new("copy", vec![r, g]), rng)
}

fn inst_g_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_z(0, 0);
    let a = host(&mut d, v, rng);
    let b = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    d.plain(v, b);
    if rng.gen_bool(0.5) {
        d.edges.swap(0, 1);
    }
    finish(d, &[a, b], RuleSite::new("g_elim", vec![v]), rng)
}

fn inst_r_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let u = d.add_x(0, 0);
    let v = d.add_x(0, 0);
    d.plain(u, v);
    let a = host(&mut d, u, rng);
    let b = host(&mut d, v, rng);
    finish(d, &[a, b], RuleSite::new("r_elim", vec![u, v]), rng)
}

fn inst_mult(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let g = d.add_z(0, 0);
    let r = d.add_x(0, 0);
    let k = rng.gen_range(1..p.get() as usize);
    for _ in 0..k {
        d.plain(g, r);
    }
    let a = host(&mut d, g, rng);
    let b = host(&mut d, r, rng);
    finish(d, &[a, b], RuleSite::new("mult", vec![g, r]), rng)
}

fn inst_gauss(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let v = d.add_spider(Colour::Z, Phase::new(p.zero(), rand_unit(p, rng)));
    finish(d, &hs, RuleSite::new("gauss", vec![v]), rng)
}

fn inst_m_one(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    d.add_star(1);
    finish(d, &hs, RuleSite::new("m_one", vec![]), rng)
}

fn inst_m_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let r = d.add_spider(Colour::X, rand_phase(p, rng));
    let h = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let z = rand_unit(p, rng);
    let e = if rng.gen_bool(0.5) {
        d.add_edge(r, h, EdgeKind::Mul(z))
    } else {
        d.add_edge(h, r, EdgeKind::Mul(z))
    };
    finish(d, &[h], RuleSite::new("m_elim", vec![r]).with_edges(vec![e]), rng)
}

fn inst_zero(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let v = d.add_spider(Colour::Z, Phase::new(rand_unit(p, rng), p.zero()));
    finish(d, &hs, RuleSite::new("zero", vec![v]), rng)
}

fn inst_one(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let (x, z) = add_r(&mut d, 2);
    finish(d, &hs, RuleSite::new("one", vec![x, z]), rng)
}

fn inst_flex(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let k = rng.gen_range(1..=3);
    let hs: Vec<usize> = (0..k).map(|_| host(&mut d, v, rng)).collect();
    let mut perm: Vec<i64> = (0..k as i64).collect();
    perm.shuffle(rng);
    finish(d, &hs, RuleSite::new("flex", vec![v]).with_params(perm), rng)
}

fn two_hosts_edge(p: Prime, kind: EdgeKind, rng: &mut ChaCha8Rng) -> (Diagram, usize, [usize; 2]) {
    let mut d = Diagram::empty(p);
    let a = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let b = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let e = d.add_edge(a, b, kind);
    (d, e, [a, b])
}

fn inst_mul_reverse(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (d, e, hs) = two_hosts_edge(p, rand_edge_kind(p, rng), rng);
    finish(d, &hs, RuleSite::new("mul_reverse", vec![]).with_edges(vec![e]), rng)
}

fn inst_id_intro(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (d, e, hs) = two_hosts_edge(p, rand_edge_kind(p, rng), rng);
    finish(d, &hs, RuleSite::new("id_intro", vec![]).with_edges(vec![e]), rng)
}

fn inst_red_fusion(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let u = d.add_spider(Colour::X, rand_phase(p, rng));
    let v = d.add_spider(Colour::X, rand_phase(p, rng));
    let e = d.mul(u, v, 1);
    finish(d, &[u, v], RuleSite::new("red_fusion", vec![u, v]).with_edges(vec![e]), rng)
}

fn middle(p: Prime, k1: EdgeKind, k2: EdgeKind, rng: &mut ChaCha8Rng) -> (Diagram, usize, [usize; 2]) {
    let mut d = Diagram::empty(p);
    let m = d.add_z(0, 0);
    let a = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let b = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    if rng.gen_bool(0.5) {
        d.add_edge(a, m, k1);
    } else {
        d.add_edge(m, a, super::rev(k1));
    }
    if rng.gen_bool(0.5) {
        d.add_edge(m, b, k2);
    } else {
        d.add_edge(b, m, super::rev(k2));
    }
    (d, m, [a, b])
}

fn inst_hadamard_product(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let k1 = EdgeKind::H(rand_unit(p, rng));
    let k2 = EdgeKind::H(rand_unit(p, rng));
    let (d, m, hs) = middle(p, k1, k2, rng);
    finish(d, &hs, RuleSite::new("hadamard_product", vec![m]), rng)
}

fn inst_hadamard_unfold(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (d, e, hs) = two_hosts_edge(p, EdgeKind::Mul(rand_unit(p, rng)), rng);
    finish(d, &hs, RuleSite::new("hadamard_unfold", vec![]).with_edges(vec![e]), rng)
}

fn inst_hadamard_antipode(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let kh = EdgeKind::H(rand_unit(p, rng));
    let km = EdgeKind::Mul(p.one());
    let (k1, k2) = if rng.gen_bool(0.5) { (kh, km) } else { (km, kh) };
    let (d, m, hs) = middle(p, k1, k2, rng);
    finish(d, &hs, RuleSite::new("hadamard_antipode", vec![m]), rng)
}

fn inst_hadamard_inverse(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (d, e, hs) = two_hosts_edge(p, EdgeKind::H(-p.one()), rng);
    finish(d, &hs, RuleSite::new("hadamard_inverse", vec![]).with_edges(vec![e]), rng)
}

fn inst_hadamard_euler(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (d, e, hs) = two_hosts_edge(p, EdgeKind::H(rand_unit(p, rng)), rng);
    finish(d, &hs, RuleSite::new("hadamard_euler", vec![]).with_edges(vec![e]), rng)
}

fn inst_hadamard_sum(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let u = d.add_spider(Colour::Z, rand_phase(p, rng));
    let v = d.add_spider(Colour::Z, rand_phase(p, rng));
    let n = rng.gen_range(2..=3);
    for _ in 0..n {
        let x = rand_unit(p, rng);
        d.add_edge(u, v, EdgeKind::H(x));
    }
    finish(d, &[u, v], RuleSite::new("hadamard_sum", vec![u, v]), rng)
}

fn inst_h_loop(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let e = d.add_edge(v, v, EdgeKind::H(rand_unit(p, rng)));
    let h = host(&mut d, v, rng);
    finish(d, &[v, h], RuleSite::new("h_loop", vec![v]).with_edges(vec![e]), rng)
}

fn inst_antipode_unit(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let h = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    d.mul(v, h, 1);
    finish(d, &[h], RuleSite::new("antipode_unit", vec![v]), rng)
}

fn spider_with_hosts(p: Prime, phase_free: bool, rng: &mut ChaCha8Rng) -> (Diagram, usize, Vec<usize>) {
    let mut d = Diagram::empty(p);
    let ph = if phase_free { Phase::zero(p) } else { rand_phase(p, rng) };
    let v = d.add_spider(rand_colour(rng), ph);
    let k = rng.gen_range(1..=3);
    let mut hs: Vec<usize> = (0..k).map(|_| host(&mut d, v, rng)).collect();
    hs.push(v);
    (d, v, hs)
}

fn inst_antipode_spider(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (d, v, hs) = spider_with_hosts(p, false, rng);
    finish(d, &hs, RuleSite::new("antipode_spider", vec![v]), rng)
}

fn inst_antipode_copy(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (d, v, hs) = spider_with_hosts(p, true, rng);
    finish(d, &hs, RuleSite::new("antipode_copy", vec![v]), rng)
}

fn inst_antipode_phase(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let a = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    d.mul(a, v, 1);
    let b = host(&mut d, v, rng);
    finish(d, &[a, b], RuleSite::new("antipode_phase", vec![v]), rng)
}

fn inst_antipode_multiplier(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_x(0, 0);
    let a = host(&mut d, v, rng);
    let b = host(&mut d, v, rng);
    finish(d, &[a, b], RuleSite::new("antipode_multiplier", vec![v]), rng)
}

fn inst_hopf(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let g = d.add_spider(Colour::Z, rand_phase(p, rng));
    let r = d.add_spider(Colour::X, rand_phase(p, rng));
    d.plain(g, r);
    if rng.gen_bool(0.5) {
        d.mul(g, r, 1);
    } else {
        d.mul(r, g, 1);
    }
    finish(d, &[g, r], RuleSite::new("hopf", vec![g, r]), rng)
}

fn inst_spider_wars(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let x = d.add_spider(Colour::X, rand_phase(p, rng));
    let z = d.add_spider(Colour::Z, rand_phase(p, rng));
    let n = rng.gen_range(p.get() as usize..=2 * p.get() as usize);
    for _ in 0..n {
        d.plain(x, z);
    }
    finish(d, &[x, z], RuleSite::new("spider_wars", vec![x, z]), rng)
}

fn inst_loop(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let c = rand_colour(rng);
    let v = d.add_spider(c, rand_phase(p, rng));
    let k = match c {
        Colour::Z => EdgeKind::Plain,
        Colour::X => EdgeKind::Mul(p.one()),
    };
    let e = d.add_edge(v, v, k);
    let h = host(&mut d, v, rng);
    finish(d, &[v, h], RuleSite::new("loop", vec![v]).with_edges(vec![e]), rng)
}

fn inst_unit_rotation_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let c = rand_colour(rng);
    let u = d.add_spider(c, Phase::zero(p));
    let r = d.add_spider(c.other(), rand_phase(p, rng));
    d.plain(u, r);
    let h = host(&mut d, r, rng);
    finish(d, &[h], RuleSite::new("unit_rotation_elim", vec![u, r]), rng)
}

fn inst_pauli_copy_phase(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let c = rand_colour(rng);
    let v = d.add_spider(c, rand_phase(p, rng));
    let u = d.add_spider(c.other(), Phase::new(rand_zp(p, rng), p.zero()));
    d.plain(v, u);
    let b = host(&mut d, u, rng);
    let k = rng.gen_range(0..=2);
    let mut hs: Vec<usize> = (0..k).map(|_| host(&mut d, v, rng)).collect();
    hs.push(b);
    finish(d, &hs, RuleSite::new("pauli_copy_phase", vec![v, u]), rng)
}

fn inst_multiplier_sum(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let g = d.add_spider(Colour::Z, rand_phase(p, rng));
    let r = d.add_spider(Colour::X, rand_phase(p, rng));
    let n = rng.gen_range(2..=3);
    for _ in 0..n {
        let k = if rng.gen_bool(0.3) { EdgeKind::Plain } else { EdgeKind::Mul(rand_unit(p, rng)) };
        if rng.gen_bool(0.5) {
            d.add_edge(g, r, k);
        } else {
            d.add_edge(r, g, k);
        }
    }
    finish(d, &[g, r], RuleSite::new("multiplier_sum", vec![g, r]), rng)
}

fn inst_multiplier_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_spider(Colour::Z, rand_phase(p, rng));
    let h = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let z = rand_unit(p, rng);
    if rng.gen_bool(0.5) {
        d.add_edge(v, h, EdgeKind::Mul(z));
    } else {
        d.add_edge(h, v, EdgeKind::Mul(z));
    }
    finish(d, &[h], RuleSite::new("multiplier_elim", vec![v]), rng)
}

fn inst_multiplier_product(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let k1 = EdgeKind::Mul(rand_unit(p, rng));
    let k2 = EdgeKind::Mul(rand_unit(p, rng));
    let (d, m, hs) = middle(p, k1, k2, rng);
    finish(d, &hs, RuleSite::new("multiplier_product", vec![m]), rng)
}

fn inst_multiplier_inverse(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let x = rand_unit(p, rng);
    let (d, m, hs) = middle(p, EdgeKind::Mul(x), EdgeKind::Mul(inv_nz(x)), rng);
    finish(d, &hs, RuleSite::new("multiplier_inverse", vec![m]), rng)
}

fn multiplier_spider_instance(p: Prime, phase_free: bool, name: &str, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, v, mut hs) = spider_with_hosts(p, phase_free, rng);
    let a = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let x = rand_unit(p, rng);
    let e = if rng.gen_bool(0.5) {
        d.add_edge(a, v, EdgeKind::Mul(x))
    } else {
        d.add_edge(v, a, EdgeKind::Mul(x))
    };
    if rng.gen_bool(0.2) {
        let k = rand_edge_kind(p, rng);
        d.add_edge(v, v, k);
    }
    hs.push(a);
    finish(d, &hs, RuleSite::new(name, vec![v]).with_edges(vec![e]), rng)
}

fn inst_multiplier_spider(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    multiplier_spider_instance(p, false, "multiplier_spider", rng)
}

fn inst_multiplier_copy(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    multiplier_spider_instance(p, true, "multiplier_copy", rng)
}

fn inst_clifford_states(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let mut d = Diagram::empty(p);
    let v = d.add_spider(Colour::Z, Phase::new(rand_zp(p, rng), rand_unit(p, rng)));
    let h = host(&mut d, v, rng);
    finish(d, &[h], RuleSite::new("clifford_states", vec![v]), rng)
}

fn inst_scalar_elementary(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    if rng.gen_bool(0.5) {
        return finish(d, &hs, RuleSite::new("scalar_elementary", vec![]), rng);
    }
    let (a, b) = add_r(&mut d, 1);
    let (c, e) = add_r(&mut d, 4);
    let (f, g) = add_r(&mut d, 1);
    finish(d, &hs, RuleSite::new("scalar_elementary", vec![a, b, c, e, f, g]), rng)
}

fn inst_scalar_phase(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let ph = if rng.gen_bool(0.2) { Phase::zero(p) } else { Phase::new(rand_zp(p, rng), rand_unit(p, rng)) };
    let v = d.add_spider(rand_colour(rng), ph);
    finish(d, &hs, RuleSite::new("scalar_phase", vec![v]), rng)
}

fn inst_scalar_i_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let mut vs = vec![add_hloop(&mut d)];
    if !p.is_one_mod_four() {
        vs.push(add_hloop(&mut d));
    }
    finish(d, &hs, RuleSite::new("scalar_i_elim", vs), rng)
}

fn inst_scalar_gauss_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let v = d.add_spider(Colour::Z, Phase::new(p.zero(), rand_unit(p, rng)));
    finish(d, &hs, RuleSite::new("scalar_gauss_elim", vec![v]), rng)
}

fn inst_scalar_omega_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let (a, c) = (rand_zp(p, rng).signed(), rand_zp(p, rng).signed());
    let (z, x) = add_w(&mut d, a, c);
    finish(d, &hs, RuleSite::new("scalar_omega_elim", vec![z, x]), rng)
}

fn inst_scalar_imaginary_elim(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let v = d.add_z(0, 0);
    d.add_edge(v, v, EdgeKind::H(rand_unit(p, rng)));
    finish(d, &hs, RuleSite::new("scalar_imaginary_elim", vec![v]), rng)
}

fn inst_scalar_gauss_multiplication(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let u = d.add_spider(Colour::Z, Phase::new(p.zero(), rand_unit(p, rng)));
    let v = d.add_spider(Colour::Z, Phase::new(p.zero(), rand_unit(p, rng)));
    finish(d, &hs, RuleSite::new("scalar_gauss_multiplication", vec![u, v]), rng)
}

fn inst_scalar_omega_multiplication(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let mut r = || rand_zp(p, rng).signed();
    let (a1, c1, a2, c2) = (r(), r(), r(), r());
    let (z1, x1) = add_w(&mut d, a1, c1);
    let (z2, x2) = add_w(&mut d, a2, c2);
    finish(d, &hs, RuleSite::new("scalar_omega_multiplication", vec![z1, x1, z2, x2]), rng)
}

fn add_zero(d: &mut Diagram, rng: &mut ChaCha8Rng) -> usize {
    let p = d.p;
    d.add_spider(Colour::Z, Phase::new(rand_unit(p, rng), p.zero()))
}

fn inst_zero_elementary(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let v = add_zero(&mut d, rng);
    finish(d, &hs, RuleSite::new("zero_elementary", vec![v]), rng)
}

fn inst_zero_amplitudes(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let z = add_zero(&mut d, rng);
    let a = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    let b = d.add_spider(rand_colour(rng), rand_phase(p, rng));
    rand_edge(&mut d, a, b, rng);
    finish(d, &hs, RuleSite::new("zero_amplitudes", vec![z, a, b]), rng)
}

fn inst_zero_phases(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let (mut d, hs) = context(p, rng);
    let z = add_zero(&mut d, rng);
    let v = hs[0];
    finish(d, &hs, RuleSite::new("zero_phases", vec![z, v]), rng)
}

fn inst_colour_change(p: Prime, rng: &mut ChaCha8Rng) -> (Diagram, RuleSite) {
    let b = budget(p);
    let ins = rng.gen_range(0..=b / 2);
    let outs = rng.gen_range(0..=b - ins);
    let spec = super::RandomSpec { spiders: rng.gen_range(1..=4), inputs: ins, outputs: outs, extra_edges: rng.gen_range(0..3) };
    let d = super::random_diagram(p, spec, rng);
    (d, RuleSite::new("colour_change", vec![]))
}
