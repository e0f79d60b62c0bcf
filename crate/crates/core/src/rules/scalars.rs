//! Closed scalar components used by the scalar lemmas.

use crate::diagram::Diagram;

/// `R_d`: a phase-free red and green spider joined by `d` plain edges;
/// its value is `p^{1-d/2}` when `p ∤ d`.
pub fn add_r(d: &mut Diagram, deg: usize) -> (usize, usize) {
    let x = d.add_x(0, 0);
    let z = d.add_z(0, 0);
    for _ in 0..deg {
        d.plain(x, z);
    }
    (x, z)
}

/// `W(a,c)`: `Z(a,0)` joined to `X(c,0)`; value `√p·ω^{2^{-2}ac}`.
pub fn add_w(d: &mut Diagram, a: i64, c: i64) -> (usize, usize) {
    let z = d.add_z(a, 0);
    let x = d.add_x(c, 0);
    d.plain(z, x);
    (z, x)
}

/// A phase-free green spider with an `H(1)` self-loop; value `1` when
/// `p ≡ 1 mod 4` and `i` when `p ≡ 3 mod 4`.
pub fn add_hloop(d: &mut Diagram) -> usize {
    let v = d.add_z(0, 0);
    d.h(v, v, 1);
    v
}

/// The canonical `m → n` zero diagram: phase-free green effects on the
/// inputs, phase-free green states on the outputs and a closed `Z(1,0)`.
pub fn zero_form(p: crate::modp::Prime, m: usize, n: usize) -> Diagram {
    let mut d = Diagram::empty(p);
    for _ in 0..m {
        let i = d.add_input();
        let g = d.add_z(0, 0);
        d.plain(i, g);
    }
    for _ in 0..n {
        let o = d.add_output();
        let g = d.add_z(0, 0);
        d.plain(g, o);
    }
    d.add_z(1, 0);
    d
}
