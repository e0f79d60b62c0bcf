//! Affine co-isotropic relation semantics, scalars forgotten.
//!
//! Wire `k` (inputs first, then outputs) owns coordinates `(2k, 2k+1)`,
//! position then momentum. The relation is computed by treating each
//! vertex as a state on its legs, each leg carrying a pair `(q, p)`:
//!
//! * `Z(x,y)`: `q_ℓ = k` on every leg and `Σ p_ℓ = 2^{-1}x + y k`;
//! * `X(x,y)`: `p_ℓ = -κ` on every leg and `Σ q_ℓ = 2^{-1}x + y κ`;
//! * a plain edge glues `q_A = q_B`, `p_A + p_B = 0`;
//! * `H(w)` gives `p_A = -w q_B`, `p_B = -w q_A`;
//! * `Mul(z)` from `A` to `B` gives `q_B = -z q_A`, `p_A = z p_B`;
//! * a boundary leg has `q = Q`, `p = -P`, and inputs are reported as
//!   `(Q, -P)`, outputs as `(Q, P)`;
//! * discards leave their leg free.

use std::fmt;

use crate::diagram::{Diagram, EdgeKind, VertexKind};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::modp::{half, Prime, Zp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelBody {
    Empty,
    Affine { basis: Mat, offset: Vec<Zp> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRelation {
    pub p: Prime,
    pub m: usize,
    pub n: usize,
    pub body: RelBody,
}

impl AffineRelation {
    pub fn dim(&self) -> usize {
        2 * (self.m + self.n)
    }

    pub fn empty(p: Prime, m: usize, n: usize) -> AffineRelation {
        AffineRelation { p, m, n, body: RelBody::Empty }
    }

    /// `offset + span(gens)` in canonical form.
    pub fn from_parametric(p: Prime, m: usize, n: usize, offset: Vec<Zp>, gens: Mat) -> AffineRelation {
        let dim = 2 * (m + n);
        let mut basis = gens;
        linalg::rref_cols(&mut basis, dim);
        let mut offset = offset;
        for row in &basis {
            let piv = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let f = offset[piv];
            if !f.is_zero() {
                for (o, &b) in offset.iter_mut().zip(row) {
                    *o -= f * b;
                }
            }
        }
        AffineRelation { p, m, n, body: RelBody::Affine { basis, offset } }
    }

    pub fn is_empty(&self) -> bool {
        self.body == RelBody::Empty
    }

    /// Linear equations `A x = c` cutting out the relation; `None` if empty.
    fn equations(&self) -> Option<(Mat, Vec<Zp>)> {
        let RelBody::Affine { basis, offset } = &self.body else {
            return None;
        };
        let ann = linalg::nullspace(self.p, basis, self.dim());
        let rhs = ann.iter().map(|y| linalg::dot(y, offset, self.p)).collect();
        Some((ann, rhs))
    }

    pub fn contains(&self, x: &[Zp]) -> bool {
        match self.equations() {
            None => false,
            Some((a, c)) => a.iter().zip(&c).all(|(row, &ci)| linalg::dot(row, x, self.p) == ci),
        }
    }

    /// `ω(u, v)`: the sum of `ad − bc` over output wires minus the same over
    /// input wires.
    pub fn symplectic(&self, u: &[Zp], v: &[Zp]) -> Zp {
        let mut s = self.p.zero();
        for k in 0..self.m + self.n {
            let f = u[2 * k] * v[2 * k + 1] - u[2 * k + 1] * v[2 * k];
            if k < self.m {
                s -= f;
            } else {
                s += f;
            }
        }
        s
    }

    fn orthogonal_complement(&self, basis: &Mat) -> Mat {
        let dim = self.dim();
        let rows: Mat = basis
            .iter()
            .map(|b| {
                (0..dim)
                    .map(|j| {
                        let mut e = vec![self.p.zero(); dim];
                        e[j] = self.p.one();
                        self.symplectic(&e, b)
                    })
                    .collect()
            })
            .collect();
        linalg::nullspace(self.p, &rows, dim)
    }

    pub fn is_coisotropic(&self) -> bool {
        let RelBody::Affine { basis, .. } = &self.body else {
            return false;
        };
        let perp = self.orthogonal_complement(basis);
        let r = basis.len();
        perp.into_iter().all(|v| {
            let mut t = basis.clone();
            t.push(v);
            linalg::rank(&t) == r
        })
    }

    pub fn is_lagrangian(&self) -> bool {
        match &self.body {
            RelBody::Affine { basis, .. } => basis.len() == self.m + self.n && self.is_coisotropic(),
            RelBody::Empty => false,
        }
    }

    /// Every point, for small relations.
    pub fn points(&self) -> Vec<Vec<Zp>> {
        let RelBody::Affine { basis, offset } = &self.body else {
            return Vec::new();
        };
        let p = self.p;
        let pw = p.get() as usize;
        let r = basis.len();
        (0..pw.pow(r as u32))
            .map(|idx| {
                let mut x = offset.clone();
                let mut rem = idx;
                for row in basis.iter().rev() {
                    let c = p.zp((rem % pw) as i64);
                    rem /= pw;
                    for (xi, &b) in x.iter_mut().zip(row) {
                        *xi += c * b;
                    }
                }
                x
            })
            .collect()
    }

    /// `p m n`, basis rows, offset row and flags.
    pub fn dump(&self) -> String {
        let mut s = format!("{} {} {}\n", self.p, self.m, self.n);
        let row = |r: &[Zp]| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        if let RelBody::Affine { basis, offset } = &self.body {
            s.push_str(&format!("basis {}\n", basis.len()));
            for b in basis {
                s.push_str(&row(b));
                s.push('\n');
            }
            s.push_str(&format!("offset {}\n", row(offset)));
        }
        s.push_str(&format!(
            "coisotropic {} lagrangian {} empty {}\n",
            self.is_coisotropic(),
            self.is_lagrangian(),
            self.is_empty()
        ));
        s
    }
}

impl fmt::Display for AffineRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

struct System {
    p: Prime,
    nvars: usize,
    rows: Vec<(Vec<(usize, Zp)>, Zp)>,
}

impl System {
    fn var(&mut self) -> usize {
        self.nvars += 1;
        self.nvars - 1
    }

    fn eq(&mut self, terms: Vec<(usize, Zp)>, c: Zp) {
        self.rows.push((terms, c));
    }

    /// Solve and project onto `coords`.
    fn project(self, m: usize, n: usize, coords: &[(usize, bool)]) -> AffineRelation {
        let p = self.p;
        let mut a: Mat = Vec::new();
        let mut b = Vec::new();
        for (terms, c) in self.rows {
            let mut r = vec![p.zero(); self.nvars];
            for (x, k) in terms {
                r[x] += k;
            }
            a.push(r);
            b.push(c);
        }
        let Some((x0, null)) = linalg::solve(p, &a, &b, self.nvars) else {
            return AffineRelation::empty(p, m, n);
        };
        let pick = |v: &[Zp]| -> Vec<Zp> { coords.iter().map(|&(i, neg)| if neg { -v[i] } else { v[i] }).collect() };
        let gens: Mat = null.iter().map(|v| pick(v)).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
        AffineRelation::from_parametric(p, m, n, pick(&x0), gens)
    }
}

/// The relation denoted by `d`; star and scalar factors are ignored.
pub fn rel_interp(d: &Diagram) -> Result<AffineRelation> {
    d.validate()?;
    let p = d.p;
    let h = half(p);
    let one = p.one();
    let mut sys = System { p, nvars: 0, rows: Vec::new() };
    // legs per vertex: (q, p) per edge end
    let mut legs: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
    let mut ends = Vec::new();
    for e in &d.edges {
        let la = (sys.var(), sys.var());
        let lb = (sys.var(), sys.var());
        legs.entry(e.a).or_default().push(la);
        legs.entry(e.b).or_default().push(lb);
        ends.push((la, lb));
    }
    for (e, &(a, b)) in d.edges.iter().zip(&ends) {
        match e.kind {
            EdgeKind::Plain => {
                sys.eq(vec![(a.0, one), (b.0, -one)], p.zero());
                sys.eq(vec![(a.1, one), (b.1, one)], p.zero());
            }
            EdgeKind::H(w) => {
                sys.eq(vec![(a.1, one), (b.0, w)], p.zero());
                sys.eq(vec![(b.1, one), (a.0, w)], p.zero());
            }
            EdgeKind::Mul(z) => {
                sys.eq(vec![(b.0, one), (a.0, z)], p.zero());
                sys.eq(vec![(a.1, one), (b.1, -z)], p.zero());
            }
        }
    }
    let mut boundary = std::collections::BTreeMap::new();
    for (&v, k) in &d.vertices {
        let my = legs.get(&v).cloned().unwrap_or_default();
        match *k {
            VertexKind::Z(ph) => {
                let aux = sys.var();
                for &(q, _) in &my {
                    sys.eq(vec![(q, one), (aux, -one)], p.zero());
                }
                let mut t: Vec<(usize, Zp)> = my.iter().map(|&(_, pp)| (pp, one)).collect();
                t.push((aux, -ph.y));
                sys.eq(t, h * ph.x);
            }
            VertexKind::X(ph) => {
                let aux = sys.var();
                for &(_, pp) in &my {
                    sys.eq(vec![(pp, one), (aux, one)], p.zero());
                }
                let mut t: Vec<(usize, Zp)> = my.iter().map(|&(q, _)| (q, one)).collect();
                t.push((aux, -ph.y));
                sys.eq(t, h * ph.x);
            }
            VertexKind::In(_) | VertexKind::Out(_) => {
                let (bq, bp) = (sys.var(), sys.var());
                let &(q, pp) = my.first().ok_or_else(|| Error::Invalid(format!("boundary {v} has no edge")))?;
                sys.eq(vec![(q, one), (bq, -one)], p.zero());
                sys.eq(vec![(pp, one), (bp, one)], p.zero());
                boundary.insert(v, (bq, bp));
            }
            VertexKind::Discard => {}
        }
    }
    let mut coords = Vec::new();
    for &v in &d.inputs {
        let (q, pp) = boundary[&v];
        coords.push((q, false));
        coords.push((pp, true));
    }
    for &v in &d.outputs {
        let (q, pp) = boundary[&v];
        coords.push((q, false));
        coords.push((pp, false));
    }
    Ok(sys.project(d.inputs.len(), d.outputs.len(), &coords))
}

/// `{(a, c) | ∃ b: (a, b) ∈ r1, (b, c) ∈ r2}`.
pub fn rel_compose(r1: &AffineRelation, r2: &AffineRelation) -> Result<AffineRelation> {
    if r1.p != r2.p {
        return Err(Error::Modulus(r1.p.get(), r2.p.get()));
    }
    if r1.n != r2.m {
        return Err(Error::Shape(format!("cannot compose {} outputs with {} inputs", r1.n, r2.m)));
    }
    let p = r1.p;
    let (m, k, n) = (r1.m, r1.n, r2.n);
    let (Some((a1, c1)), Some((a2, c2))) = (r1.equations(), r2.equations()) else {
        return Ok(AffineRelation::empty(p, m, n));
    };
    // variables: a (2m), b (2k), c (2n)
    let total = 2 * (m + k + n);
    let mut sys = System { p, nvars: total, rows: Vec::new() };
    for (row, &c) in a1.iter().zip(&c1) {
        sys.eq(row.iter().enumerate().map(|(i, &x)| (i, x)).collect(), c);
    }
    for (row, &c) in a2.iter().zip(&c2) {
        sys.eq(row.iter().enumerate().map(|(i, &x)| (i + 2 * m, x)).collect(), c);
    }
    let coords: Vec<(usize, bool)> =
        (0..2 * m).chain(2 * (m + k)..total).map(|i| (i, false)).collect();
    Ok(sys.project(m, n, &coords))
}

pub fn rel_equal(r1: &AffineRelation, r2: &AffineRelation) -> Result<bool> {
    if r1.p != r2.p || r1.m != r2.m || r1.n != r2.n {
        return Err(Error::Shape("relations have different types".into()));
    }
    Ok(r1 == r2)
}
