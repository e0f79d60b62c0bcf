//! Normal forms for single-qupit Clifford operators.
//!
//! Branch A is the dense shape `Z(u,v) ∘ H(w) ∘ Z(s,t)` with matrix
//! `p^{-1/2} ω^{2^{-1}(u o + v o²) + w o i + 2^{-1}(s i + t i²)}`.
//! Branch B is the monomial shape `Z(s,t) ∘ Mul(w) ∘ X(u,0)`, sending
//! `|i⟩` to `ω^{2^{-1}(s o + t o²)} |o⟩` with `o = w i − 2^{-1} w u`; its
//! `v` is always zero.

use std::fmt;

use crate::cyclo::{quadratic_gauss_sum, sqrt_p_pow, Cyclo};
use crate::diagram::{Diagram, EdgeKind, Phase};
use crate::modp::{half, inv_nz, Prime, Zp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum C1Gen {
    Z(Phase),
    X(Phase),
    H(Zp),
    Mul(Zp),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1NormalForm {
    pub branch: Branch,
    pub s: Zp,
    pub t: Zp,
    pub u: Zp,
    pub v: Zp,
    pub w: Zp,
    pub scalar: Cyclo,
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    // [o = w i + c] ω^{2^{-1}(s o + t o²)}
    Mono { w: Zp, c: Zp, s: Zp, t: Zp },
    Dense { u: Zp, v: Zp, w: Zp, s: Zp, t: Zp },
}

struct Work {
    shape: Shape,
    scalar: Cyclo,
}

impl Work {
    fn identity(p: Prime) -> Work {
        Work {
            shape: Shape::Mono { w: p.one(), c: p.zero(), s: p.zero(), t: p.zero() },
            scalar: Cyclo::one(p),
        }
    }

    fn times(&mut self, f: Cyclo) {
        self.scalar = &self.scalar * &f;
    }

    fn apply(&mut self, g: C1Gen) {
        let p = self.scalar.prime();
        let h = half(p);
        match g {
            C1Gen::Z(ph) => match &mut self.shape {
                Shape::Mono { s, t, .. } => {
                    *s += ph.x;
                    *t += ph.y;
                }
                Shape::Dense { u, v, .. } => {
                    *u += ph.x;
                    *v += ph.y;
                }
            },
            C1Gen::X(ph) => {
                self.apply(C1Gen::H(p.one()));
                self.apply(C1Gen::Z(Phase::new(-ph.x, ph.y)));
                self.apply(C1Gen::H(p.one()));
            }
            C1Gen::Mul(z) => {
                let zi = inv_nz(z);
                self.shape = match self.shape {
                    Shape::Mono { w, c, s, t } => {
                        Shape::Mono { w: -z * w, c: -z * c, s: -zi * s, t: zi * zi * t }
                    }
                    Shape::Dense { u, v, w, s, t } => {
                        Shape::Dense { u: -zi * u, v: zi * zi * v, w: -zi * w, s, t }
                    }
                };
            }
            C1Gen::H(hh) => match self.shape {
                Shape::Mono { w, c, s, t } => {
                    self.times(Cyclo::omega_pow(h * (s * c + t * c * c)));
                    self.shape = Shape::Dense {
                        u: p.zp(2) * hh * c,
                        v: p.zero(),
                        w: hh * w,
                        s: s * w + p.zp(2) * t * w * c,
                        t: t * w * w,
                    };
                }
                Shape::Dense { u, v, w, s, t } if !v.is_zero() => {
                    let vi = inv_nz(v);
                    let g = quadratic_gauss_sum(v).expect("v ≠ 0");
                    self.times(&g * &sqrt_p_pow(p, -1));
                    self.times(Cyclo::omega_pow(-h * h * h * vi * u * u));
                    self.shape = Shape::Dense {
                        u: -vi * u * hh,
                        v: -vi * hh * hh,
                        w: -vi * w * hh,
                        s: s - vi * u * w,
                        t: t - vi * w * w,
                    };
                }
                Shape::Dense { u, w, s, t, .. } => {
                    let hi = inv_nz(hh);
                    let w2 = -hi * w;
                    let c2 = -hi * h * u;
                    let w2i = inv_nz(w2);
                    let d = w2i * c2;
                    self.times(Cyclo::omega_pow(h * (-s * d + t * d * d)));
                    self.shape = Shape::Mono {
                        w: w2,
                        c: c2,
                        s: s * w2i - p.zp(2) * t * w2i * d,
                        t: t * w2i * w2i,
                    };
                }
            },
        }
    }

    fn finish(self) -> C1NormalForm {
        let p = self.scalar.prime();
        match self.shape {
            Shape::Dense { u, v, w, s, t } => {
                C1NormalForm { branch: Branch::A, s, t, u, v, w, scalar: self.scalar }
            }
            Shape::Mono { w, c, s, t } => C1NormalForm {
                branch: Branch::B,
                s,
                t,
                u: -p.zp(2) * inv_nz(w) * c,
                v: p.zero(),
                w,
                scalar: self.scalar,
            },
        }
    }
}

/// Normalize a word of `1 → 1` generators, applied first to last.
pub fn c1_normalize(p: Prime, word: &[C1Gen]) -> C1NormalForm {
    let mut st = Work::identity(p);
    for &g in word {
        st.apply(g);
    }
    st.finish()
}

impl C1NormalForm {
    pub fn identity(p: Prime) -> C1NormalForm {
        c1_normalize(p, &[])
    }

    pub fn prime(&self) -> Prime {
        self.w.prime()
    }

    /// The parameters that identify the class, ignoring the scalar.
    pub fn key(&self) -> (Branch, [u64; 5]) {
        (self.branch, [self.s, self.t, self.u, self.v, self.w].map(|x| x.value()))
    }

    pub fn word(&self) -> Vec<C1Gen> {
        let p = self.prime();
        match self.branch {
            Branch::A => vec![
                C1Gen::Z(Phase::new(self.s, self.t)),
                C1Gen::H(self.w),
                C1Gen::Z(Phase::new(self.u, self.v)),
            ],
            Branch::B => vec![
                C1Gen::X(Phase::new(self.u, p.zero())),
                C1Gen::Mul(self.w),
                C1Gen::Z(Phase::new(self.s, self.t)),
            ],
        }
    }

    /// The form's diagram, without its scalar.
    pub fn to_diagram(&self) -> Diagram {
        word_diagram(self.prime(), &self.word())
    }

    /// Post-compose with a generator.
    pub fn then(&self, g: C1Gen) -> C1NormalForm {
        let mut st = Work { shape: self.shape(), scalar: self.scalar.clone() };
        st.apply(g);
        st.finish()
    }

    fn shape(&self) -> Shape {
        let p = self.prime();
        match self.branch {
            Branch::A => Shape::Dense { u: self.u, v: self.v, w: self.w, s: self.s, t: self.t },
            Branch::B => Shape::Mono {
                w: self.w,
                c: -half(p) * self.w * self.u,
                s: self.s,
                t: self.t,
            },
        }
    }
}

/// All normal forms reachable from the identity by post-composition with
/// generators, scalars reset to one.
pub fn c1_classes(p: Prime) -> Vec<C1NormalForm> {
    let mut gens = vec![
        C1Gen::Z(Phase::new(p.one(), p.zero())),
        C1Gen::Z(Phase::new(p.zero(), p.one())),
        C1Gen::X(Phase::new(p.one(), p.zero())),
        C1Gen::H(p.one()),
    ];
    gens.extend(p.units().map(C1Gen::Mul));
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let start = C1NormalForm::identity(p);
    seen.insert(start.key());
    queue.push_back(start);
    while let Some(f) = queue.pop_front() {
        for &g in &gens {
            let mut n = f.then(g);
            n.scalar = Cyclo::one(p);
            if seen.insert(n.key()) {
                queue.push_back(n);
            }
        }
        out.push(f);
    }
    out
}

impl fmt::Display for C1NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} s={} t={} u={} v={} w={} scalar={}",
            self.branch, self.s, self.t, self.u, self.v, self.w, self.scalar
        )
    }
}

/// The `1 → 1` diagram of a word, applied first to last.
pub fn word_diagram(p: Prime, word: &[C1Gen]) -> Diagram {
    let mut d = Diagram::empty(p);
    let mut prev = d.add_input();
    let mut pending = EdgeKind::Plain;
    for &g in word {
        match g {
            C1Gen::Z(ph) | C1Gen::X(ph) => {
                let v = if let C1Gen::Z(_) = g {
                    d.add_spider(crate::diagram::Colour::Z, ph)
                } else {
                    d.add_spider(crate::diagram::Colour::X, ph)
                };
                d.add_edge(prev, v, pending);
                prev = v;
                pending = EdgeKind::Plain;
            }
            C1Gen::H(_) | C1Gen::Mul(_) => {
                if pending != EdgeKind::Plain {
                    let v = d.add_z(0, 0);
                    d.add_edge(prev, v, pending);
                    prev = v;
                }
                pending = match g {
                    C1Gen::H(w) => EdgeKind::H(w),
                    C1Gen::Mul(z) => EdgeKind::Mul(z),
                    _ => unreachable!(),
                };
            }
        }
    }
    let o = d.add_output();
    d.add_edge(prev, o, pending);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::interp_raw;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_gen<R: Rng>(p: Prime, rng: &mut R) -> C1Gen {
        let n = p.get() as i64;
        let z = p.zp(rng.gen_range(0..n));
        let y = p.zp(rng.gen_range(0..n));
        let u = p.zp(rng.gen_range(1..n));
        match rng.gen_range(0..4) {
            0 => C1Gen::Z(Phase::new(z, y)),
            1 => C1Gen::X(Phase::new(z, y)),
            2 => C1Gen::H(u),
            _ => C1Gen::Mul(u),
        }
    }

    #[test]
    fn hadamard_fourth_power_is_identity() {
        for p in [3u64, 5, 7] {
            let p = Prime::new(p).unwrap();
            let f = c1_normalize(p, &[C1Gen::H(p.one()); 4]);
            assert_eq!(f, C1NormalForm::identity(p));
            assert!(f.scalar.is_one());
        }
    }

    #[test]
    fn random_words_match_interp() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [3u64, 5, 7, 11] {
            let p = Prime::new(p).unwrap();
            for _ in 0..100 {
                let len = rng.gen_range(0..8);
                let word: Vec<C1Gen> = (0..len).map(|_| rand_gen(p, &mut rng)).collect();
                let f = c1_normalize(p, &word);
                let lhs = interp_raw(&word_diagram(p, &word)).unwrap();
                let rhs = interp_raw(&f.to_diagram()).unwrap();
                assert!(lhs.scaled_eq(&Cyclo::one(p), &rhs, &f.scalar), "{word:?} -> {f}");
                let again = c1_normalize(p, &f.word());
                assert_eq!(again.key(), f.key());
                assert!(again.scalar.is_one());
            }
        }
    }

    #[test]
    fn class_count_small_primes() {
        let p = Prime::new(3).unwrap();
        let all = c1_classes(p);
        assert_eq!(all.len(), 216);
        let p5 = Prime::new(5).unwrap();
        assert_eq!(c1_classes(p5).len(), 125 * 24);
    }
}
