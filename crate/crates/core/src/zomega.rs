//! Unreduced integer elements of `Z[ω_p]` stored as length-`p` vectors
//! with `ω^p = 1`, used on the hot path of tensor contraction.
//!
//! Two vectors denote the same element iff their difference is a constant
//! vector, since `1 + ω + … + ω^{p-1} = 0`.

/// Shift so the last coefficient is zero (matches the reduced field basis).
pub fn canonicalize(v: &mut [i128]) {
    let last = v[v.len() - 1];
    if last != 0 {
        for x in v.iter_mut() {
            *x -= last;
        }
    }
}

pub fn is_zero(v: &[i128]) -> bool {
    let f = v[0];
    v.iter().all(|&x| x == f)
}

pub fn eq(a: &[i128], b: &[i128]) -> bool {
    let d = a[0] - b[0];
    a.iter().zip(b).all(|(x, y)| x - y == d)
}

/// `out += a·b`, cyclic convolution; panics on overflow rather than wrapping.
pub fn mul_acc(out: &mut [i128], a: &[i128], b: &[i128]) {
    let n = out.len();
    for (j, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (k, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let t = if j + k >= n { j + k - n } else { j + k };
            let prod = x.checked_mul(y).expect("Z[ω] coefficient overflow");
            out[t] = out[t].checked_add(prod).expect("Z[ω] coefficient overflow");
        }
    }
}

pub fn mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len()];
    mul_acc(&mut out, a, b);
    canonicalize(&mut out);
    out
}

pub fn add_assign(out: &mut [i128], a: &[i128]) {
    for (o, &x) in out.iter_mut().zip(a) {
        *o = o.checked_add(x).expect("Z[ω] coefficient overflow");
    }
}

pub fn monomial(p: usize, k: usize) -> Vec<i128> {
    let mut v = vec![0; p];
    v[k % p] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_roots_is_zero() {
        assert!(is_zero(&[1, 1, 1]));
        assert!(eq(&[2, 1, 1], &[1, 0, 0]));
        let w = monomial(3, 1);
        let w2 = mul(&w, &w);
        let w3 = mul(&w2, &w);
        assert!(eq(&w3, &monomial(3, 0)));
    }
}
