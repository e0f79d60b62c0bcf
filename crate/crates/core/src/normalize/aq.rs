//! Affine-quadratic description of stabiliser states.
//!
//! A state is held as
//!
//! ```text
//! ψ(o) = σ · Σ_{k ∈ Z_p^r} ω^{c + l·k + 2^{-1} kᵀQk} · Π_j [o_j = a_j·k + b_j]
//! ```
//!
//! with `Q` symmetric. Building it from a diagram is a symbolic contraction;
//! [`AqState::canonicalize`] sums out every variable that no output sees and
//! reparametrizes by a greedy pivot set of outputs, which makes the
//! description unique.

use crate::cyclo::{quadratic_gauss_sum, sqrt_p_pow, Cyclo};
use crate::diagram::{Diagram, EdgeKind, VertexKind};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, Mat};
use crate::modp::{half, inv_nz, Prime, Zp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AqOutput {
    pub a: Vec<Zp>,
    pub b: Zp,
}

#[derive(Clone, Debug)]
pub struct AqState {
    pub p: Prime,
    pub c: Zp,
    pub l: Vec<Zp>,
    pub q: Mat,
    pub outs: Vec<AqOutput>,
    pub sigma: Cyclo,
    pub zero: bool,
    /// Steps taken with their scalar factors.
    pub log: Vec<(String, Cyclo)>,
}

impl PartialEq for AqState {
    fn eq(&self, o: &AqState) -> bool {
        if self.zero || o.zero {
            return self.zero == o.zero && self.outs.len() == o.outs.len();
        }
        self.p == o.p
            && self.c == o.c
            && self.l == o.l
            && self.q == o.q
            && self.outs == o.outs
            && self.sigma == o.sigma
    }
}

impl AqState {
    pub fn vars(&self) -> usize {
        self.l.len()
    }

    /// Symbolic contraction of `d`. Boundaries are taken inputs first, then
    /// outputs, matching [`Diagram::choi`].
    pub fn from_diagram(d: &Diagram) -> Result<AqState> {
        d.validate()?;
        if d.has_discard() {
            return Err(Error::Domain("discards have no pure-state description".into()));
        }
        let p = d.p;
        let h = half(p);
        let mut nvars = 0usize;
        let mut vvar = std::collections::BTreeMap::new();
        let mut l_terms: Vec<(usize, Zp)> = Vec::new();
        let mut q_terms: Vec<(usize, usize, Zp)> = Vec::new();
        for (&v, k) in &d.vertices {
            if let VertexKind::Z(ph) | VertexKind::X(ph) = k {
                vvar.insert(v, nvars);
                l_terms.push((nvars, h * ph.x));
                q_terms.push((nvars, nvars, ph.y));
                nvars += 1;
            }
        }
        let mut bvar = std::collections::BTreeMap::new();
        let mut cons: Vec<Vec<(usize, Zp)>> = Vec::new();
        let mut halves = 0i64;
        for e in &d.edges {
            let mut ends = [0usize; 2];
            for (slot, v) in ends.iter_mut().zip([e.a, e.b]) {
                *slot = match d.vertices[&v] {
                    VertexKind::Z(_) => vvar[&v],
                    VertexKind::X(_) => {
                        // red legs: fresh variable ℓ with p^{-1/2} ω^{-κℓ}
                        q_terms.push((vvar[&v], nvars, -p.one()));
                        halves += 1;
                        nvars += 1;
                        nvars - 1
                    }
                    _ => *bvar.entry(v).or_insert_with(|| {
                        nvars += 1;
                        nvars - 1
                    }),
                };
            }
            let [va, vb] = ends;
            match e.kind {
                EdgeKind::Plain => cons.push(vec![(va, p.one()), (vb, -p.one())]),
                EdgeKind::H(w) => {
                    // w·k² on a loop is 2^{-1}(2w)k²
                    let w = if va == vb { w + w } else { w };
                    q_terms.push((va, vb, w));
                    halves += 1;
                }
                EdgeKind::Mul(z) => cons.push(vec![(vb, p.one()), (va, z)]),
            }
        }
        let boundary: Vec<usize> = d.inputs.iter().chain(&d.outputs).copied().collect();
        let mut bidx = Vec::new();
        for b in &boundary {
            bidx.push(*bvar.entry(*b).or_insert_with(|| {
                nvars += 1;
                nvars - 1
            }));
        }
        let n = nvars;
        let mut l = vec![p.zero(); n];
        for (x, c) in l_terms {
            l[x] += c;
        }
        let mut q = linalg::zeros(p, n, n);
        for (a, b, w) in q_terms {
            q[a][b] += w;
            if a != b {
                q[b][a] += w;
            }
        }
        let mut cm: Mat = Vec::new();
        for row in cons {
            let mut r = vec![p.zero(); n];
            for (x, c) in row {
                r[x] += c;
            }
            cm.push(r);
        }
        let basis = linalg::nullspace(p, &cm, n);
        let mut sigma = sqrt_p_pow(p, -halves);
        if d.star == 1 {
            sigma = -sigma;
        }
        let mut st = AqState {
            p,
            c: p.zero(),
            l,
            q,
            outs: bidx
                .iter()
                .map(|&x| {
                    let mut a = vec![p.zero(); n];
                    a[x] = p.one();
                    AqOutput { a, b: p.zero() }
                })
                .collect(),
            sigma,
            zero: false,
            log: Vec::new(),
        };
        let m = linalg::transpose(p, &basis, n);
        st.change_vars(&m, &vec![p.zero(); n]);
        st.log.push(("contract".into(), st.sigma.clone()));
        Ok(st)
    }

    /// Substitute `k = M y + v` with `M` of shape `r × r'`.
    pub fn change_vars(&mut self, m: &Mat, v: &[Zp]) {
        let p = self.p;
        let r = self.vars();
        let r2 = m.first().map_or(0, |row| row.len());
        let h = half(p);
        let qv: Vec<Zp> = (0..r).map(|i| dot(&self.q[i], v, p)).collect();
        self.c += dot(&self.l, v, p) + h * dot(v, &qv, p);
        let lq: Vec<Zp> = (0..r).map(|i| self.l[i] + qv[i]).collect();
        let mt = linalg::transpose(p, m, r2);
        self.l = (0..r2).map(|j| dot(&mt[j], &lq, p)).collect();
        let qm = linalg::mat_mul(p, &self.q, m);
        self.q = if r2 == 0 { Vec::new() } else { linalg::mat_mul(p, &mt, &qm) };
        for o in self.outs.iter_mut() {
            let b = o.b + dot(&o.a, v, p);
            let a = (0..r2).map(|j| (0..r).fold(p.zero(), |acc, i| acc + o.a[i] * m[i][j])).collect();
            *o = AqOutput { a, b };
        }
    }

    fn remove_var(&mut self, t: usize) {
        self.l.remove(t);
        self.q.remove(t);
        for row in self.q.iter_mut() {
            row.remove(t);
        }
        for o in self.outs.iter_mut() {
            o.a.remove(t);
        }
    }

    /// Substitute `k_t = α + β·k` (`β_t = 0`) and drop `k_t`.
    fn substitute(&mut self, t: usize, alpha: Zp, beta: &[Zp]) {
        let p = self.p;
        let r = self.vars();
        let h = half(p);
        let (lt, qtt) = (self.l[t], self.q[t][t]);
        self.c += lt * alpha + h * qtt * alpha * alpha;
        let qt: Vec<Zp> = self.q[t].clone();
        for i in 0..r {
            self.l[i] += lt * beta[i] + qtt * alpha * beta[i] + alpha * qt[i];
        }
        for i in 0..r {
            for j in 0..r {
                self.q[i][j] += qt[i] * beta[j] + qt[j] * beta[i] + qtt * beta[i] * beta[j];
            }
        }
        for o in self.outs.iter_mut() {
            let at = o.a[t];
            if at.is_zero() {
                continue;
            }
            o.b += at * alpha;
            for i in 0..r {
                o.a[i] += at * beta[i];
            }
        }
        self.remove_var(t);
    }

    fn scale(&mut self, step: &str, f: Cyclo) {
        self.sigma = &self.sigma * &f;
        self.log.push((step.to_string(), f));
    }

    /// Sum out variable `u`, which must not appear in any output.
    pub fn sum_out(&mut self, u: usize) {
        let p = self.p;
        debug_assert!(self.outs.iter().all(|o| o.a[u].is_zero()));
        let r = self.vars();
        let h = half(p);
        let quu = self.q[u][u];
        let lu = self.l[u];
        if !quu.is_zero() {
            let g = quadratic_gauss_sum(quu).expect("nonzero");
            self.scale("gauss_elim", g);
            let inv = inv_nz(quu);
            self.c -= h * inv * lu * lu;
            let qu = self.q[u].clone();
            for i in 0..r {
                self.l[i] -= inv * lu * qu[i];
            }
            for i in 0..r {
                for j in 0..r {
                    self.q[i][j] -= inv * qu[i] * qu[j];
                }
            }
            self.remove_var(u);
        } else if let Some(t) = (0..r).find(|&t| t != u && !self.q[u][t].is_zero()) {
            self.scale("pivot_elim", Cyclo::from_int(p, p.get() as i64));
            let inv = inv_nz(self.q[u][t]);
            let alpha = -inv * lu;
            let mut beta: Vec<Zp> = (0..r).map(|i| -inv * self.q[u][i]).collect();
            beta[t] = p.zero();
            beta.remove(u);
            self.remove_var(u);
            let t2 = if t > u { t - 1 } else { t };
            self.substitute(t2, alpha, &beta);
        } else if lu.is_zero() {
            self.scale("free_elim", Cyclo::from_int(p, p.get() as i64));
            self.remove_var(u);
        } else {
            self.scale("zero_elim", Cyclo::zero(p));
            self.make_zero();
        }
    }

    fn make_zero(&mut self) {
        let p = self.p;
        self.zero = true;
        self.sigma = Cyclo::zero(p);
        self.c = p.zero();
        self.l.clear();
        self.q.clear();
        for o in self.outs.iter_mut() {
            o.a.clear();
            o.b = p.zero();
        }
    }

    /// Greedy pivot outputs: each output whose row is independent of the
    /// rows already chosen.
    pub fn greedy_pivots(&self) -> Vec<usize> {
        let mut chosen: Mat = Vec::new();
        let mut f = Vec::new();
        for (j, o) in self.outs.iter().enumerate() {
            let mut trial = chosen.clone();
            trial.push(o.a.clone());
            if linalg::rank(&trial) == trial.len() {
                chosen = trial;
                f.push(j);
            }
        }
        f
    }

    /// Make the outputs `f` (whose rows must form an invertible matrix)
    /// the variables, in order.
    pub fn reparametrize(&mut self, f: &[usize]) -> Result<()> {
        let p = self.p;
        let r = self.vars();
        if f.len() != r {
            return Err(Error::Invariant("pivot set does not match variable count".into()));
        }
        let af: Mat = f.iter().map(|&j| self.outs[j].a.clone()).collect();
        let inv = linalg::inverse(p, &af)
            .ok_or_else(|| Error::Invariant("pivot outputs are dependent".into()))?;
        let bf: Vec<Zp> = f.iter().map(|&j| self.outs[j].b).collect();
        let v: Vec<Zp> = (0..r).map(|i| -dot(&inv[i], &bf, p)).collect();
        self.change_vars(&inv, &v);
        for (i, &j) in f.iter().enumerate() {
            let mut a = vec![p.zero(); r];
            a[i] = p.one();
            self.outs[j] = AqOutput { a, b: p.zero() };
        }
        Ok(())
    }

    /// Reduce to the unique form in which the variables are the greedy
    /// pivot outputs and the constant is folded into `σ`.
    pub fn canonicalize(&mut self) {
        let p = self.p;
        loop {
            if self.zero {
                return;
            }
            let f = self.greedy_pivots();
            let r = self.vars();
            if f.len() == r {
                self.reparametrize(&f).expect("pivots are independent");
                break;
            }
            // new variables: pivot outputs, then unit rows completing a basis
            let mut t: Mat = f.iter().map(|&j| self.outs[j].a.clone()).collect();
            let mut ech = t.clone();
            let piv = linalg::rref(&mut ech);
            for j in (0..r).filter(|j| !piv.contains(j)) {
                let mut e = vec![p.zero(); r];
                e[j] = p.one();
                t.push(e);
            }
            let inv = linalg::inverse(p, &t).expect("completed basis");
            let mut shift = vec![p.zero(); r];
            for (i, &j) in f.iter().enumerate() {
                shift[i] = self.outs[j].b;
            }
            let v: Vec<Zp> = (0..r).map(|i| -dot(&inv[i], &shift, p)).collect();
            self.change_vars(&inv, &v);
            for o in self.outs.iter_mut() {
                for x in o.a[f.len()..].iter_mut() {
                    debug_assert!(x.is_zero());
                    *x = p.zero();
                }
            }
            self.sum_out(r - 1);
        }
        if !self.c.is_zero() {
            let w = Cyclo::omega_pow(self.c);
            self.scale("phase_fold", w);
            self.c = p.zero();
        }
    }

    /// Dense amplitude vector, outputs big-endian. Exponential; for tests.
    pub fn amplitudes(&self) -> Vec<Cyclo> {
        let p = self.p;
        let pw = p.get() as usize;
        let n = self.outs.len();
        let mut out = vec![Cyclo::zero(p); pw.pow(n as u32)];
        if self.zero {
            return out;
        }
        let r = self.vars();
        let h = half(p);
        let mut acc = vec![0i128; pw.pow(n as u32) * pw];
        for idx in 0..pw.pow(r as u32) {
            let mut k = vec![p.zero(); r];
            let mut rem = idx;
            for i in (0..r).rev() {
                k[i] = p.zp((rem % pw) as i64);
                rem /= pw;
            }
            let qk: Vec<Zp> = (0..r).map(|i| dot(&self.q[i], &k, p)).collect();
            let e = self.c + dot(&self.l, &k, p) + h * dot(&k, &qk, p);
            let o = self.outs.iter().fold(0usize, |a, o| a * pw + (dot(&o.a, &k, p) + o.b).value() as usize);
            acc[o * pw + e.value() as usize] += 1;
        }
        for (o, slot) in out.iter_mut().enumerate() {
            let v = &acc[o * pw..(o + 1) * pw];
            if v.iter().any(|&x| x != 0) {
                *slot = &Cyclo::from_zomega(p, v) * &self.sigma;
            }
        }
        out
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::interp;
    use crate::rules::{random_diagram, RandomSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(d: &Diagram) {
        let m = interp(&d.choi()).unwrap();
        let mut st = AqState::from_diagram(d).unwrap();
        if (d.p.get() as usize).pow(st.vars() as u32) <= 20_000 {
            assert_eq!(st.amplitudes(), m.entries, "raw\n{}", d.to_json());
        }
        st.canonicalize();
        assert_eq!(st.amplitudes(), m.entries, "canonical\n{}", d.to_json());
        assert!(st.zero || st.vars() == st.greedy_pivots().len());
    }

    #[test]
    fn matches_interp_on_random_diagrams() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [3u64, 5, 7] {
            let p = Prime::new(p).unwrap();
            for _ in 0..150 {
                let spec = RandomSpec {
                    spiders: rng.gen_range(1..6),
                    inputs: rng.gen_range(0..2),
                    outputs: rng.gen_range(0..3),
                    extra_edges: rng.gen_range(0..4),
                };
                let mut d = random_diagram(p, spec, &mut rng);
                if rng.gen_bool(0.2) {
                    d.add_star(1);
                }
                check(&d);
            }
        }
    }

    #[test]
    fn loops_and_boundary_wires() {
        let p = Prime::new(5).unwrap();
        let mut d = Diagram::empty(p);
        let z = d.add_z(1, 2);
        d.h(z, z, 3);
        let x = d.add_x(2, 1);
        d.plain(x, x);
        d.mul(x, z, 2);
        let o = d.add_output();
        d.plain(z, o);
        let i = d.add_input();
        let o2 = d.add_output();
        d.mul(i, o2, 3);
        check(&d);
    }
}
