//! Normal forms for stabiliser scalars.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cyclo::{sqrt_p_pow, Cyclo};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::graphstate::add_sqrt_p_power;
use crate::modp::{Prime, Zp};
use crate::rules::{add_hloop, add_w};

/// `i^unit · ω^s · √p^r`, or zero. For `p ≡ 1 mod 4` the unit is `±1`
/// (`unit ∈ {0, 2}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarNf {
    Zero,
    Value { unit: u8, s: Zp, r: i64 },
}

fn power_of(n: &BigInt, p: u64) -> Option<i64> {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while n > BigInt::one() {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return None;
        }
        n = q;
        k += 1;
    }
    (n == BigInt::one()).then_some(k)
}

/// Factor `c` as `unit · ω^s · √p^r`; errors when `c` is not of that form.
pub fn scalar_normal_form(c: &Cyclo) -> Result<ScalarNf> {
    let p = c.prime();
    if c.is_zero() {
        return Ok(ScalarNf::Zero);
    }
    let not_member = || Error::Domain(format!("{c} is not a stabiliser scalar"));
    let norm = (c * &c.conj()).as_rational().ok_or_else(not_member)?;
    if !norm.is_positive() {
        return Err(not_member());
    }
    let r = match (power_of(norm.numer(), p.get()), power_of(norm.denom(), p.get())) {
        (Some(a), Some(b)) => a - b,
        _ => return Err(not_member()),
    };
    let lambda = c * &sqrt_p_pow(p, -r);
    let units: &[u8] = if p.is_one_mod_four() { &[0, 2] } else { &[0, 1, 2, 3] };
    for &unit in units {
        let base = Cyclo::i_pow(p, unit as i64);
        for s in p.elements() {
            if &base * &Cyclo::omega_pow(s) == lambda {
                return Ok(ScalarNf::Value { unit, s, r });
            }
        }
    }
    Err(not_member())
}

impl ScalarNf {
    pub fn value(&self, p: Prime) -> Cyclo {
        match *self {
            ScalarNf::Zero => Cyclo::zero(p),
            ScalarNf::Value { unit, s, r } => {
                &(&Cyclo::i_pow(p, unit as i64) * &Cyclo::omega_pow(s)) * &sqrt_p_pow(p, r)
            }
        }
    }

    /// A closed diagram whose interpretation is this scalar.
    pub fn to_diagram(&self, p: Prime) -> Diagram {
        let mut d = Diagram::empty(p);
        match *self {
            ScalarNf::Zero => {
                d.add_z(1, 0);
            }
            ScalarNf::Value { unit, s, r } => {
                if unit >= 2 {
                    d.add_star(1);
                }
                if unit % 2 == 1 {
                    add_hloop(&mut d);
                }
                if !s.is_zero() {
                    // W(4s,1)·R_4·R_1 = ω^s
                    add_w(&mut d, 4 * s.value() as i64, 1);
                    add_sqrt_p_power(&mut d, -1);
                }
                add_sqrt_p_power(&mut d, r);
            }
        }
        d
    }
}

/// `d` tensored with a closed diagram worth `c`.
pub fn with_scalar(d: &Diagram, c: &Cyclo) -> Result<Diagram> {
    let nf = scalar_normal_form(c)?;
    d.tensor(&nf.to_diagram(d.p))
}

impl fmt::Display for ScalarNf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarNf::Zero => write!(f, "zero"),
            ScalarNf::Value { unit, s, r } => {
                let u = ["1", "i", "-1", "-i"][*unit as usize];
                write!(f, "unit={u} s={s} r={r}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::sqrt_p;
    use crate::interp::interp_scalar;

    #[test]
    fn worked_examples() {
        let p3 = Prime::new(3).unwrap();
        assert_eq!(
            scalar_normal_form(&Cyclo::one(p3)).unwrap(),
            ScalarNf::Value { unit: 0, s: p3.zero(), r: 0 }
        );
        for p in [3u64, 5] {
            let p = Prime::new(p).unwrap();
            assert_eq!(
                scalar_normal_form(&-sqrt_p(p)).unwrap(),
                ScalarNf::Value { unit: 2, s: p.zero(), r: 1 }
            );
        }
        let p7 = Prime::new(7).unwrap();
        let c = &Cyclo::i_pow(p7, 1) * &Cyclo::omega_pow(p7.zp(2));
        assert_eq!(scalar_normal_form(&c).unwrap(), ScalarNf::Value { unit: 1, s: p7.zp(2), r: 0 });
        let p5 = Prime::new(5).unwrap();
        assert!(scalar_normal_form(&Cyclo::i_pow(p5, 1)).is_err());
        assert!(scalar_normal_form(&Cyclo::from_int(p5, 2)).is_err());
        assert_eq!(scalar_normal_form(&Cyclo::zero(p5)).unwrap(), ScalarNf::Zero);
    }

    #[test]
    fn diagrams_reproduce_every_form() {
        for p in [3u64, 5, 7] {
            let p = Prime::new(p).unwrap();
            let units: &[u8] = if p.is_one_mod_four() { &[0, 2] } else { &[0, 1, 2, 3] };
            for &unit in units {
                for s in p.elements() {
                    for r in -3..=3 {
                        let nf = ScalarNf::Value { unit, s, r };
                        let v = interp_scalar(&nf.to_diagram(p)).unwrap();
                        assert_eq!(v, nf.value(p));
                        assert_eq!(scalar_normal_form(&v).unwrap(), nf);
                    }
                }
            }
            assert!(interp_scalar(&ScalarNf::Zero.to_diagram(p)).unwrap().is_zero());
        }
    }
}
