//! Dense linear algebra over `Z_p`.

use crate::modp::{inv_nz, Prime, Zp};

pub type Mat = Vec<Vec<Zp>>;

pub fn zeros(p: Prime, rows: usize, cols: usize) -> Mat {
    vec![vec![p.zero(); cols]; rows]
}

pub fn dot(a: &[Zp], b: &[Zp], p: Prime) -> Zp {
    a.iter().zip(b).fold(p.zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn identity(p: Prime, n: usize) -> Mat {
    let mut m = zeros(p, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = p.one();
    }
    m
}

/// Reduce `m` to reduced row echelon form in place, considering only the
/// first `ncols` columns for pivots; returns the pivot columns.
pub fn rref_cols(m: &mut Mat, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(sel) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, sel);
        let f = inv_nz(m[row][col]);
        for x in m[row].iter_mut() {
            *x *= f;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let g = other[col];
                for (x, &y) in other.iter_mut().zip(&pivot_row) {
                    *x -= g * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

pub fn rref(m: &mut Mat) -> Vec<usize> {
    let n = m.first().map_or(0, |r| r.len());
    rref_cols(m, n)
}

pub fn rank(m: &Mat) -> usize {
    let mut c = m.clone();
    rref(&mut c).len()
}

/// Basis of `{x : m x = 0}` as column vectors of length `ncols`.
pub fn nullspace(p: Prime, m: &Mat, ncols: usize) -> Vec<Vec<Zp>> {
    let mut r = m.clone();
    let piv = rref_cols(&mut r, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![p.zero(); ncols];
        v[free] = p.one();
        for (i, &pc) in piv.iter().enumerate() {
            v[pc] = -r[i][free];
        }
        basis.push(v);
    }
    basis
}

/// One solution of `m x = b` with the nullspace, or `None` if inconsistent.
pub fn solve(p: Prime, m: &Mat, b: &[Zp], ncols: usize) -> Option<(Vec<Zp>, Vec<Vec<Zp>>)> {
    let mut aug: Mat = m.iter().zip(b).map(|(row, &x)| {
        let mut r = row.clone();
        r.push(x);
        r
    }).collect();
    let piv = rref_cols(&mut aug, ncols + 1);
    if piv.contains(&ncols) {
        return None;
    }
    let mut x0 = vec![p.zero(); ncols];
    for (i, &pc) in piv.iter().enumerate() {
        x0[pc] = aug[i][ncols];
    }
    Some((x0, nullspace(p, m, ncols)))
}

pub fn inverse(p: Prime, m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { p.one() } else { p.zero() }));
            r
        })
        .collect();
    let piv = rref_cols(&mut aug, n);
    if piv.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(p: Prime, a: &Mat, b: &Mat) -> Mat {
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = zeros(p, a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] += x * b[k][j];
            }
        }
    }
    out
}

pub fn transpose(p: Prime, a: &Mat, cols: usize) -> Mat {
    let mut t = zeros(p, cols, a.len());
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            t[j][i] = x;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let p = Prime::new(7).unwrap();
        let m: Mat = vec![vec![p.zp(1), p.zp(2)], vec![p.zp(3), p.zp(4)]];
        let inv = inverse(p, &m).unwrap();
        assert_eq!(mat_mul(p, &m, &inv), identity(p, 2));
        let sing: Mat = vec![vec![p.zp(1), p.zp(2)], vec![p.zp(2), p.zp(4)]];
        assert!(inverse(p, &sing).is_none());
        let ns = nullspace(p, &sing, 2);
        assert_eq!(ns.len(), 1);
        assert!(solve(p, &sing, &[p.zp(1), p.zp(3)], 2).is_none());
        let (x0, _) = solve(p, &sing, &[p.zp(1), p.zp(2)], 2).unwrap();
        assert_eq!(x0[0] + x0[1] * p.zp(2), p.one());
    }
}
