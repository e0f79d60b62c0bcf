//! The standard interpretation of diagrams as exact matrices.
//!
//! Contraction runs over `Z[ω]` with one global power of `p^{-1/2}`:
//! every spider becomes a variable with a phase factor, every Hadamard
//! edge a factor `ω^{wjk}`, every multiplier a delta factor, and plain
//! edges identify variables. Variables are summed out in a greedy order.

use std::collections::BTreeSet;

use crate::cyclo::{sqrt_p_pow, Cyclo, CycloMatrix};
use crate::diagram::{Diagram, EdgeKind, VertexKind};
use crate::error::{Error, Result};
use crate::modp::{half, Prime, Zp};
use crate::zomega;

/// Unnormalized tensor: `(-1)^neg · p^{-h/2} · data`, with `data` a
/// row-major array of `Z[ω]` entries (outputs index rows).
#[derive(Clone, Debug)]
pub struct RawTensor {
    pub p: Prime,
    pub rows: usize,
    pub cols: usize,
    pub h: i64,
    pub neg: bool,
    pub data: Vec<i128>,
}

impl RawTensor {
    fn width(&self) -> usize {
        self.p.get() as usize
    }

    pub fn entry(&self, k: usize) -> &[i128] {
        let w = self.width();
        &self.data[k * w..(k + 1) * w]
    }

    /// The scalar `(-1)^neg · p^{-h/2}`.
    pub fn prefactor(&self) -> Cyclo {
        let s = sqrt_p_pow(self.p, -self.h);
        if self.neg {
            -s
        } else {
            s
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.rows * self.cols).all(|k| zomega::is_zero(self.entry(k)))
    }

    pub fn to_matrix(&self) -> CycloMatrix {
        let pre = self.prefactor();
        let entries = (0..self.rows * self.cols)
            .map(|k| {
                let e = self.entry(k);
                if zomega::is_zero(e) {
                    Cyclo::zero(self.p)
                } else {
                    &Cyclo::from_zomega(self.p, e) * &pre
                }
            })
            .collect();
        CycloMatrix { p: self.p, rows: self.rows, cols: self.cols, entries }
    }

    /// Whether `s1·self = s2·o` exactly.
    pub fn scaled_eq(&self, s1: &Cyclo, o: &RawTensor, s2: &Cyclo) -> bool {
        if self.rows != o.rows || self.cols != o.cols || self.p != o.p {
            return false;
        }
        let z1 = s1.is_zero() || self.is_zero();
        let z2 = s2.is_zero() || o.is_zero();
        if z1 || z2 {
            return z1 && z2;
        }
        let n = self.rows * self.cols;
        let k = (0..n).find(|&k| !zomega::is_zero(o.entry(k))).expect("nonzero");
        let (ak, bk) = (self.entry(k), o.entry(k));
        for x in 0..n {
            let l = zomega::mul(self.entry(x), bk);
            let r = zomega::mul(o.entry(x), ak);
            if !zomega::eq(&l, &r) {
                return false;
            }
        }
        let lhs = &(s1 * &self.prefactor()) * &Cyclo::from_zomega(self.p, ak);
        let rhs = &(s2 * &o.prefactor()) * &Cyclo::from_zomega(self.p, bk);
        lhs == rhs
    }

    /// Whether the two tensors agree up to a nonzero scalar.
    pub fn proportional(&self, o: &RawTensor) -> bool {
        if self.rows != o.rows || self.cols != o.cols {
            return false;
        }
        let (z1, z2) = (self.is_zero(), o.is_zero());
        if z1 || z2 {
            return z1 && z2;
        }
        let n = self.rows * self.cols;
        let k = (0..n).find(|&k| !zomega::is_zero(o.entry(k))).expect("nonzero");
        let (ak, bk) = (self.entry(k), o.entry(k));
        if zomega::is_zero(ak) {
            return false;
        }
        (0..n).all(|x| {
            zomega::eq(&zomega::mul(self.entry(x), bk), &zomega::mul(o.entry(x), ak))
        })
    }
}

/// Variable elimination order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plan {
    /// Smallest intermediate factor first, ties by lowest variable id.
    Greedy,
    /// Variables in decreasing id order.
    Reverse,
}

#[derive(Clone, Debug)]
struct Factor {
    vars: Vec<usize>,
    data: Vec<i128>,
}

struct Uf(Vec<usize>);

impl Uf {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn phase_exp(p: Prime, x: Zp, y: Zp, k: u64) -> usize {
    let k = p.zp(k as i64);
    (half(p) * (x * k + y * k * k)).value() as usize
}

/// Contract a discard-free diagram into a raw tensor.
pub fn interp_raw(d: &Diagram) -> Result<RawTensor> {
    interp_raw_with(d, Plan::Greedy)
}

pub fn interp_raw_with(d: &Diagram, plan: Plan) -> Result<RawTensor> {
    if d.has_discard() {
        return Err(Error::Domain("diagram contains a discard; use interp_cpm".into()));
    }
    let p = d.p;
    let pw = p.get() as usize;
    let mut h: i64 = 0;
    let mut nvars = 0usize;
    let mut var_of = std::collections::BTreeMap::new();
    for (&v, k) in &d.vertices {
        var_of.insert(v, nvars);
        nvars += 1;
        if let VertexKind::X(_) = k {
            h += d.degree(v) as i64;
        }
    }
    // end variables per edge
    let mut ends = Vec::with_capacity(d.edges.len());
    let mut red_legs: Vec<(usize, usize)> = Vec::new();
    for e in &d.edges {
        let mut pair = [0usize; 2];
        for (slot, v) in [e.a, e.b].into_iter().enumerate() {
            pair[slot] = match d.kind(v) {
                VertexKind::X(_) => {
                    let leg = nvars;
                    nvars += 1;
                    red_legs.push((var_of[&v], leg));
                    leg
                }
                _ => var_of[&v],
            };
        }
        ends.push(pair);
    }
    let mut uf = Uf((0..nvars).collect());
    for (e, pair) in d.edges.iter().zip(&ends) {
        if e.kind == EdgeKind::Plain {
            uf.union(pair[0], pair[1]);
        }
    }
    let mut factors: Vec<Factor> = Vec::new();
    let unary = |var: usize, f: &dyn Fn(u64) -> Option<usize>| {
        let mut data = vec![0i128; pw * pw];
        for k in 0..pw {
            if let Some(e) = f(k as u64) {
                data[k * pw + e] = 1;
            }
        }
        Factor { vars: vec![var], data }
    };
    for (&v, k) in &d.vertices {
        if let VertexKind::Z(ph) | VertexKind::X(ph) = k {
            if !ph.is_zero() {
                let var = uf.find(var_of[&v]);
                factors.push(unary(var, &|k| Some(phase_exp(p, ph.x, ph.y, k))));
            }
        }
    }
    let binary = |a: usize, b: usize, f: &dyn Fn(u64, u64) -> Option<usize>| {
        let mut data = vec![0i128; pw * pw * pw];
        for j in 0..pw {
            for k in 0..pw {
                if let Some(e) = f(j as u64, k as u64) {
                    data[(j * pw + k) * pw + e] = 1;
                }
            }
        }
        Factor { vars: vec![a, b], data }
    };
    let modp = |x: i128| x.rem_euclid(pw as i128) as usize;
    for &(kappa, leg) in &red_legs {
        let (a, b) = (uf.find(kappa), uf.find(leg));
        if a == b {
            factors.push(unary(a, &|k| Some(modp(-((k * k) as i128)))));
        } else {
            factors.push(binary(a, b, &|j, k| Some(modp(-((j * k) as i128)))));
        }
    }
    for (e, pair) in d.edges.iter().zip(&ends) {
        let (a, b) = (uf.find(pair[0]), uf.find(pair[1]));
        match e.kind {
            EdgeKind::Plain => {}
            EdgeKind::H(w) => {
                h += 1;
                let w = w.value() as i128;
                if a == b {
                    factors.push(unary(a, &|k| Some(modp(w * (k * k) as i128))));
                } else {
                    factors.push(binary(a, b, &|j, k| Some(modp(w * (j * k) as i128))));
                }
            }
            EdgeKind::Mul(z) => {
                let z = z.value() as i128;
                if a == b {
                    factors.push(unary(a, &|k| (modp(k as i128 * (1 + z)) == 0).then_some(0)));
                } else {
                    factors.push(binary(a, b, &|j, k| {
                        (modp(k as i128 + z * j as i128) == 0).then_some(0)
                    }));
                }
            }
        }
    }
    let boundary: Vec<usize> = d.outputs.iter().chain(&d.inputs).map(|v| uf.find(var_of[v])).collect();
    let keep: BTreeSet<usize> = boundary.iter().copied().collect();
    let mut live: BTreeSet<usize> = BTreeSet::new();
    for v in 0..nvars {
        let r = uf.find(v);
        if !keep.contains(&r) {
            live.insert(r);
        }
    }
    let mut scalar = zomega::monomial(pw, 0);
    let mut order = Vec::new();
    while !live.is_empty() {
        let x = match plan {
            Plan::Reverse => *live.iter().next_back().unwrap(),
            Plan::Greedy => *live
                .iter()
                .min_by_key(|&&x| {
                    let mut u = BTreeSet::new();
                    for f in factors.iter().filter(|f| f.vars.contains(&x)) {
                        u.extend(f.vars.iter().copied());
                    }
                    u.len()
                })
                .unwrap(),
        };
        live.remove(&x);
        order.push(x);
        let (mine, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.vars.contains(&x));
        factors = rest;
        if mine.is_empty() {
            scalar = zomega::mul(&scalar, &{
                let mut v = vec![0; pw];
                v[0] = pw as i128;
                v
            });
            continue;
        }
        factors.push(eliminate(pw, &mine, Some(x)));
    }
    // remaining factors live on boundary variables only
    let mut full = eliminate(pw, &factors, None);
    let s = scalar;
    for k in 0..full.data.len() / pw {
        let e = zomega::mul(&full.data[k * pw..(k + 1) * pw], &s);
        full.data[k * pw..(k + 1) * pw].copy_from_slice(&e);
    }
    let nb = boundary.len();
    let total = pw.pow(nb as u32);
    let rows = pw.pow(d.outputs.len() as u32);
    let cols = pw.pow(d.inputs.len() as u32);
    let mut data = vec![0i128; total * pw];
    let slots: Vec<Option<usize>> =
        boundary.iter().map(|r| full.vars.iter().position(|v| v == r)).collect();
    let mut digits = vec![0usize; nb];
    for idx in 0..total {
        let mut rem = idx;
        for k in (0..nb).rev() {
            digits[k] = rem % pw;
            rem /= pw;
        }
        // boundaries sharing a variable must carry equal values
        let consistent = (0..nb).all(|k| (0..k).all(|j| boundary[j] != boundary[k] || digits[j] == digits[k]));
        if !consistent {
            continue;
        }
        let mut assign = vec![0usize; full.vars.len()];
        for k in 0..nb {
            if let Some(s) = slots[k] {
                assign[s] = digits[k];
            }
        }
        let fi = assign.iter().fold(0, |acc, a| acc * pw + a);
        data[idx * pw..(idx + 1) * pw].copy_from_slice(&full.data[fi * pw..(fi + 1) * pw]);
    }
    let mut t = RawTensor { p, rows, cols, h, neg: d.star == 1, data };
    for k in 0..total {
        zomega::canonicalize(&mut t.data[k * pw..(k + 1) * pw]);
    }
    Ok(t)
}

/// Multiply factors together and optionally sum out `x`.
fn eliminate(pw: usize, fs: &[Factor], x: Option<usize>) -> Factor {
    let mut u: BTreeSet<usize> = BTreeSet::new();
    for f in fs {
        u.extend(f.vars.iter().copied());
    }
    let all: Vec<usize> = u.into_iter().collect();
    let out_vars: Vec<usize> = all.iter().copied().filter(|v| Some(*v) != x).collect();
    let xpos = x.map(|x| all.iter().position(|v| *v == x).unwrap());
    let maps: Vec<Vec<usize>> =
        fs.iter().map(|f| f.vars.iter().map(|v| all.iter().position(|a| a == v).unwrap()).collect()).collect();
    let n_all = all.len();
    let total = pw.pow(n_all as u32);
    let out_len = pw.pow(out_vars.len() as u32);
    let mut data = vec![0i128; out_len * pw];
    let mut digits = vec![0usize; n_all];
    let mut acc = vec![0i128; pw];
    let mut tmp = vec![0i128; pw];
    for idx in 0..total {
        let mut rem = idx;
        for k in (0..n_all).rev() {
            digits[k] = rem % pw;
            rem /= pw;
        }
        acc.iter_mut().for_each(|c| *c = 0);
        acc[0] = 1;
        let mut zero = false;
        for (f, m) in fs.iter().zip(&maps) {
            let mut fi = 0;
            for &slot in m {
                fi = fi * pw + digits[slot];
            }
            let e = &f.data[fi * pw..(fi + 1) * pw];
            if e.iter().all(|c| *c == 0) {
                zero = true;
                break;
            }
            tmp.iter_mut().for_each(|c| *c = 0);
            zomega::mul_acc(&mut tmp, &acc, e);
            std::mem::swap(&mut acc, &mut tmp);
        }
        if zero {
            continue;
        }
        let mut oi = 0;
        for (k, d) in digits.iter().enumerate() {
            if Some(k) != xpos {
                oi = oi * pw + d;
            }
        }
        zomega::add_assign(&mut data[oi * pw..(oi + 1) * pw], &acc);
    }
    if x.is_some() {
        for k in 0..out_len {
            zomega::canonicalize(&mut data[k * pw..(k + 1) * pw]);
        }
    }
    Factor { vars: out_vars, data }
}

/// Exact matrix of a discard-free diagram.
pub fn interp(d: &Diagram) -> Result<CycloMatrix> {
    Ok(interp_raw(d)?.to_matrix())
}

/// Value of a closed diagram.
pub fn interp_scalar(d: &Diagram) -> Result<Cyclo> {
    if !d.is_closed() {
        return Err(Error::Shape("interp_scalar needs a closed diagram".into()));
    }
    Ok(interp(d)?.entries.remove(0))
}

/// Build the doubled diagram `d ⊗ conj(d)` with every discard joined to
/// its twin; the conjugate copy's boundaries come after the originals.
pub fn double(d: &Diagram) -> Result<Diagram> {
    let c = d.conj();
    let off = d.next_id();
    let mut dd = d.tensor(&c)?;
    let discards: Vec<usize> =
        d.vertices.iter().filter(|(_, k)| matches!(k, VertexKind::Discard)).map(|(v, _)| *v).collect();
    for x in discards {
        let tw = x + off;
        let m = dd.add_z(0, 0);
        for e in dd.edges.iter_mut() {
            if e.a == x || e.a == tw {
                e.a = m;
            } else if e.b == x || e.b == tw {
                e.b = m;
            }
        }
        dd.vertices.remove(&x);
        dd.vertices.remove(&tw);
    }
    Ok(dd)
}

/// Superoperator of a diagram that may contain discards.
pub fn interp_cpm(d: &Diagram) -> Result<CycloMatrix> {
    interp(&double(d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Colour, Phase};

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn green_unit_is_all_ones() {
        let p = pr(3);
        let m = interp(&Diagram::spider(p, Colour::Z, 0, 1, Phase::zero(p))).unwrap();
        assert!(m.entries.iter().all(|e| e.is_one()));
    }

    #[test]
    fn green_phase_diagonal() {
        let p = pr(3);
        let m = interp(&Diagram::spider(p, Colour::Z, 1, 1, Phase::of(p, 1, 0))).unwrap();
        assert!(m.get(0, 0).is_one());
        assert_eq!(*m.get(1, 1), Cyclo::omega_pow(p.zp(2)));
        assert_eq!(*m.get(2, 2), Cyclo::omega_pow(p.zp(1)));
        assert!(m.get(0, 1).is_zero());
    }

    #[test]
    fn antipode_permutation() {
        let p = pr(5);
        let m = interp(&Diagram::multiplier(p, p.one())).unwrap();
        for j in 0..5 {
            for k in 0..5 {
                assert_eq!(m.get(k, j).is_one(), (k + j) % 5 == 0);
            }
        }
    }

    #[test]
    fn loop_is_p() {
        let p = pr(5);
        let d = Diagram::cup(p).compose(&Diagram::cap(p)).unwrap();
        assert_eq!(interp_scalar(&d).unwrap(), Cyclo::from_int(p, 5));
        assert!(interp_scalar(&Diagram::empty(p)).unwrap().is_one());
        assert_eq!(interp_scalar(&Diagram::star_diagram(p)).unwrap(), Cyclo::from_int(p, -1));
    }

    #[test]
    fn hadamard_unitary() {
        for p in [3, 5, 7] {
            let p = pr(p);
            let h = interp(&Diagram::hadamard(p)).unwrap();
            assert_eq!(h.mat_mul(&h.dagger()).unwrap(), CycloMatrix::identity(p, p.get() as usize));
        }
    }

    #[test]
    fn red_identity_is_antipode() {
        let p = pr(5);
        let r = interp(&Diagram::spider(p, Colour::X, 1, 1, Phase::zero(p))).unwrap();
        assert_eq!(r, interp(&Diagram::multiplier(p, p.one())).unwrap());
    }

    #[test]
    fn plans_agree() {
        let p = pr(3);
        let mut d = Diagram::empty(p);
        let i = d.add_input();
        let o = d.add_output();
        let a = d.add_z(1, 2);
        let b = d.add_x(2, 1);
        let c = d.add_z(0, 1);
        d.plain(i, a);
        d.h(a, b, 2);
        d.mul(b, c, 2);
        d.plain(a, c);
        d.plain(c, o);
        let g = interp_raw_with(&d, Plan::Greedy).unwrap();
        let r = interp_raw_with(&d, Plan::Reverse).unwrap();
        assert_eq!(g.to_matrix(), r.to_matrix());
    }

    #[test]
    fn discard_traces() {
        let p = pr(3);
        let m = interp_cpm(&Diagram::discard(p)).unwrap();
        assert_eq!((m.rows, m.cols), (1, 9));
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(m.get(0, j * 3 + k).is_one(), j == k);
            }
        }
        assert!(interp(&Diagram::discard(p)).is_err());
    }
}
