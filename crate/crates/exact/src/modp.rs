//! Arithmetic modulo word-sized primes and univariate polynomials over them.
//! Univariate polynomials are coefficient vectors, lowest degree first, with
//! no trailing zeros.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

pub fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below `2^62`, largest first.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut n = (1u64 << 62) - 1;
        while out.len() < 64 {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

pub fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn uni_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let inv = invmod(*b.last().unwrap(), p);
    while a.len() >= b.len() {
        let q = mulmod(*a.last().unwrap(), inv, p);
        let shift = a.len() - b.len();
        for (i, &bc) in b.iter().enumerate() {
            a[i + shift] = submod(a[i + shift], mulmod(q, bc, p), p);
        }
        trim(&mut a);
    }
    a
}

pub fn uni_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        let r = uni_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Scales a nonzero polynomial to leading coefficient one.
pub fn monic(a: &mut [u64], p: u64) {
    let inv = invmod(*a.last().unwrap(), p);
    for c in a.iter_mut() {
        *c = mulmod(*c, inv, p);
    }
}

/// Solves `Σ_m c_m w_m^i = v_i` for `i < n`, with distinct nonzero nodes `w`.
pub fn solve_vandermonde(w: &[u64], v: &[u64], p: u64) -> Vec<u64> {
    let n = w.len();
    // master polynomial Π (z - w_m)
    let mut master = vec![1u64];
    for &wm in w {
        let mut next = vec![0u64; master.len() + 1];
        for (i, &c) in master.iter().enumerate() {
            next[i + 1] = addmod(next[i + 1], c, p);
            next[i] = submod(next[i], mulmod(c, wm, p), p);
        }
        master = next;
    }
    let mut out = Vec::with_capacity(n);
    for &wm in w {
        // synthetic division by (z - wm)
        let mut q = vec![0u64; n];
        let mut carry = 0u64;
        for i in (0..n).rev() {
            carry = addmod(master[i + 1], mulmod(carry, wm, p), p);
            q[i] = carry;
        }
        let mut denom = 0u64;
        let mut num = 0u64;
        let mut pw = 1u64;
        for i in 0..n {
            denom = addmod(denom, mulmod(q[i], pw, p), p);
            num = addmod(num, mulmod(q[i], v[i], p), p);
            pw = mulmod(pw, wm, p);
        }
        out.push(mulmod(num, invmod(denom, p), p));
    }
    out
}

/// Coefficients of the polynomial of degree `< xs.len()` through `(xs_i, ys_i)`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    // Newton divided differences
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = submod(dd[i], dd[i - 1], p);
            let den = submod(xs[i], xs[i - j], p);
            dd[i] = mulmod(num, invmod(den, p), p);
        }
    }
    let mut coeffs = vec![0u64; n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (z - xs_i) + dd_i
        let mut next = vec![0u64; n];
        for k in 0..n {
            if coeffs[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = addmod(next[k + 1], coeffs[k], p);
            }
            next[k] = submod(next[k], mulmod(coeffs[k], xs[i], p), p);
        }
        next[0] = addmod(next[0], dd[i], p);
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1_000_000_007;

    #[test]
    fn primes_are_prime() {
        let ps = primes();
        assert_eq!(ps[0], (1u64 << 62) - 57);
        assert!(is_prime(P) && !is_prime(P * 3) && is_prime((1 << 61) - 1));
    }

    #[test]
    fn vandermonde_round_trip() {
        let w = [3u64, 5, 11, 17];
        let c = [7u64, 0, 2, P - 1];
        let v: Vec<u64> = (0..4)
            .map(|i| (0..4).fold(0, |acc, m| addmod(acc, mulmod(c[m], powmod(w[m], i, P), P), P)))
            .collect();
        assert_eq!(solve_vandermonde(&w, &v, P), c);
    }

    #[test]
    fn interpolation_round_trip() {
        let f = |x: u64| addmod(addmod(mulmod(4, mulmod(x, x, P), P), 9, P), mulmod(P - 2, x, P), P);
        let xs = [1u64, 2, 5, 8];
        let ys: Vec<u64> = xs.iter().map(|&x| f(x)).collect();
        assert_eq!(interpolate(&xs, &ys, P), vec![9, P - 2, 4, 0]);
    }
}
