//! Sparse modular gcd in the style of Zippel.
//!
//! For inputs primitive in a main variable `x` the gcd `g` is recovered as
//! `G = γ·g/lc_x(g)`, where `γ = gcd(lc_x(a), lc_x(b))`, so every modular
//! image at a point is the monic univariate gcd times `γ(point)`. The other
//! variables are brought in one at a time: dense interpolation in the new
//! variable, with the images at each of its values obtained from the
//! monomial support found so far by solving Vandermonde systems. Images for
//! several primes are combined by Chinese remaindering until the lift is
//! stable, and the primitive part is accepted only after exact trial
//! division of both inputs.

use ahash::AHashMap;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::modp::{self, addmod, mulmod, submod};
use crate::monomial::Monomial;
use crate::poly::MultiPoly;

const RESTARTS: usize = 4;
const POINT_TRIES: usize = 8;
const MAX_PRIMES: usize = 48;

/// Terms of an integer polynomial reduced modulo a prime, split into the
/// exponent of `x` and the packed monomial.
struct Reduced {
    terms: Vec<(u32, Monomial, u64)>,
    xdeg: u32,
}

impl Reduced {
    fn new(a: &MultiPoly, x: usize, p: u64) -> Reduced {
        let terms = a
            .int_terms()
            .iter()
            .map(|(m, c)| (m.exponent(x), *m, modp::reduce(c, p)))
            .filter(|t| t.2 != 0)
            .collect();
        Reduced { terms, xdeg: a.degree_in(x) }
    }

    /// Univariate image in `x` with the variables `ys` set to `vals`.
    /// `None` when the leading coefficient in `x` vanishes at the point.
    fn image(&self, ys: &[usize], powers: &[Vec<u64>], p: u64) -> Option<Vec<u64>> {
        let mut out = vec![0u64; self.xdeg as usize + 1];
        for (e, m, c) in &self.terms {
            let mut v = *c;
            for (k, &y) in ys.iter().enumerate() {
                let d = m.exponent(y) as usize;
                if d > 0 {
                    v = mulmod(v, powers[k][d], p);
                }
            }
            let slot = &mut out[*e as usize];
            *slot = addmod(*slot, v, p);
        }
        if out.last() == Some(&0) {
            None
        } else {
            Some(out)
        }
    }
}

fn power_table(vals: &[u64], maxdeg: &[u32], p: u64) -> Vec<Vec<u64>> {
    vals.iter()
        .zip(maxdeg)
        .map(|(&v, &d)| {
            let mut row = Vec::with_capacity(d as usize + 1);
            let mut acc = 1u64;
            for _ in 0..=d {
                row.push(acc);
                acc = mulmod(acc, v, p);
            }
            row
        })
        .collect()
}

struct Problem<'a> {
    a: Reduced,
    b: Reduced,
    gamma: Reduced,
    x: usize,
    ys: &'a [usize],
    /// Largest exponent of each `y` among the inputs and `γ`.
    maxdeg: Vec<u32>,
    /// Degree bound of `G` in each `y`.
    bounds: &'a [u32],
    p: u64,
}

enum Image {
    Ok(Vec<u64>),
    /// Leading coefficient vanished; try another point.
    BadPoint,
    /// Degree differs from the expected one.
    Unlucky,
}

impl Problem<'_> {
    /// Monic image gcd at the point, scaled by `γ(point)`.
    fn image_gcd(&self, vals: &[u64], dx: Option<usize>) -> Image {
        let pw = power_table(vals, &self.maxdeg, self.p);
        let (Some(ia), Some(ib)) = (self.a.image(self.ys, &pw, self.p), self.b.image(self.ys, &pw, self.p)) else {
            return Image::BadPoint;
        };
        let gv = self.gamma.image(self.ys, &pw, self.p).map(|v| v[0]).unwrap_or(0);
        if gv == 0 {
            return Image::BadPoint;
        }
        let mut h = modp::uni_gcd(ia, ib, self.p);
        if let Some(d) = dx {
            if h.len() != d + 1 {
                return Image::Unlucky;
            }
        }
        modp::monic(&mut h, self.p);
        for c in h.iter_mut() {
            *c = mulmod(*c, gv, self.p);
        }
        Image::Ok(h)
    }

    /// `G` modulo the prime, as sparse terms.
    fn solve(&self, rng: &mut StdRng) -> Option<Vec<(Monomial, u64)>> {
        let p = self.p;
        let k = self.ys.len();
        let mut alpha: Vec<u64> = (0..k).map(|_| rng.gen_range(1..p)).collect();
        let mut h = None;
        for _ in 0..POINT_TRIES {
            match self.image_gcd(&alpha, None) {
                Image::Ok(v) => {
                    h = Some(v);
                    break;
                }
                _ => alpha = (0..k).map(|_| rng.gen_range(1..p)).collect(),
            }
        }
        let h = h?;
        let dx = h.len() - 1;
        let mut current: Vec<(Monomial, u64)> = h
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (Monomial::var_pow(self.x, e as u32), c))
            .collect();
        for j in 0..k {
            current = self.lift_variable(j, &alpha, dx, current, rng)?;
        }
        Some(current)
    }

    /// From `G(x, y_0..y_{j-1}, α_j, ...)` to `G(x, y_0..y_j, α_{j+1}, ...)`.
    fn lift_variable(
        &self,
        j: usize,
        alpha: &[u64],
        dx: usize,
        current: Vec<(Monomial, u64)>,
        rng: &mut StdRng,
    ) -> Option<Vec<(Monomial, u64)>> {
        let p = self.p;
        let npts = self.bounds[j] as usize + 1;
        // skeleton: monomials in y_0..y_{j-1} grouped by x exponent; with no
        // earlier variables every x exponent up to dx is allowed
        let mut groups: Vec<Vec<Monomial>> = vec![Vec::new(); dx + 1];
        if j == 0 {
            for (e, g) in groups.iter_mut().enumerate() {
                g.push(Monomial::var_pow(self.x, e as u32));
            }
        } else {
            for (m, _) in &current {
                groups[m.exponent(self.x) as usize].push(*m);
            }
        }
        let width = groups.iter().map(|g| g.len()).max().unwrap_or(0);
        let mut betas = vec![alpha[j]];
        let mut samples: Vec<AHashMap<Monomial, u64>> = vec![current.iter().copied().collect()];
        let mut tries = 0;
        while betas.len() < npts {
            tries += 1;
            if tries > npts + POINT_TRIES * 4 {
                return None;
            }
            let beta = rng.gen_range(1..p);
            if betas.contains(&beta) {
                continue;
            }
            let sample = if j == 0 {
                let mut vals = alpha.to_vec();
                vals[0] = beta;
                match self.image_gcd(&vals, Some(dx)) {
                    Image::Ok(h) => groups
                        .iter()
                        .enumerate()
                        .map(|(e, g)| (g[0], h[e]))
                        .collect::<AHashMap<Monomial, u64>>(),
                    Image::BadPoint => continue,
                    Image::Unlucky => return None,
                }
            } else {
                match self.sample_on_skeleton(j, alpha, beta, dx, &groups, width, rng) {
                    Some(Ok(s)) => s,
                    Some(Err(())) => continue,
                    None => return None,
                }
            };
            betas.push(beta);
            samples.push(sample);
        }
        let yj = self.ys[j];
        let keys: Vec<Monomial> = groups.iter().flatten().copied().collect();
        let mut out = Vec::new();
        for key in keys {
            let vals: Vec<u64> = samples.iter().map(|s| s.get(&key).copied().unwrap_or(0)).collect();
            let coeffs = modp::interpolate(&betas, &vals, p);
            for (d, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    out.push((key.mul(Monomial::var_pow(yj, d as u32)), c));
                }
            }
        }
        Some(out)
    }

    /// Coefficients of the skeleton monomials with `y_j = beta`. The outer
    /// `None` asks for a restart, `Err` for another value of `beta`.
    #[allow(clippy::too_many_arguments)]
    fn sample_on_skeleton(
        &self,
        j: usize,
        alpha: &[u64],
        beta: u64,
        dx: usize,
        groups: &[Vec<Monomial>],
        width: usize,
        rng: &mut StdRng,
    ) -> Option<Result<AHashMap<Monomial, u64>, ()>> {
        let p = self.p;
        let eta: Vec<u64> = (0..j).map(|_| rng.gen_range(2..p)).collect();
        // nodes of every skeleton monomial, distinct within each group
        let mut nodes: Vec<Vec<u64>> = Vec::with_capacity(groups.len());
        for g in groups {
            let w: Vec<u64> = g
                .iter()
                .map(|m| {
                    (0..j).fold(1u64, |acc, l| mulmod(acc, modp::powmod(eta[l], m.exponent(self.ys[l]) as u64, p), p))
                })
                .collect();
            let mut sorted = w.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != w.len() {
                return Some(Err(()));
            }
            nodes.push(w);
        }
        // one extra point checks the skeleton
        let mut images = Vec::with_capacity(width + 1);
        let mut point: Vec<u64> = alpha.to_vec();
        point[j] = beta;
        // the i-th point is y_l = η_l^(i+1); the all-ones point is avoided
        // because leading coefficients often vanish there
        let mut pw = eta.clone();
        for _ in 0..=width {
            point[..j].copy_from_slice(&pw);
            match self.image_gcd(&point, Some(dx)) {
                Image::Ok(h) => images.push(h),
                Image::BadPoint => return Some(Err(())),
                Image::Unlucky => return None,
            }
            for l in 0..j {
                pw[l] = mulmod(pw[l], eta[l], p);
            }
        }
        let mut out = AHashMap::new();
        for (e, g) in groups.iter().enumerate() {
            if g.is_empty() {
                if images.iter().any(|h| h[e] != 0) {
                    return None;
                }
                continue;
            }
            let n = g.len();
            let v: Vec<u64> = images[..n].iter().map(|h| h[e]).collect();
            // solves for c_m·w_m, hence the division by the node
            let c: Vec<u64> = modp::solve_vandermonde(&nodes[e], &v, p)
                .into_iter()
                .zip(&nodes[e])
                .map(|(cw, &w)| mulmod(cw, modp::invmod(w, p), p))
                .collect();
            // the remaining images must agree with the solution
            for (i, h) in images.iter().enumerate().skip(n) {
                let pred = c.iter().zip(&nodes[e]).fold(0u64, |acc, (&cm, &wm)| {
                    addmod(acc, mulmod(cm, modp::powmod(wm, i as u64 + 1, p), p), p)
                });
                if pred != h[e] {
                    return None;
                }
            }
            for (m, cm) in g.iter().zip(c) {
                out.insert(*m, cm);
            }
        }
        Some(Ok(out))
    }
}

fn symmetric(c: &BigInt, modulus: &BigInt, half: &BigInt) -> BigInt {
    if c > half {
        c - modulus
    } else {
        c.clone()
    }
}

/// gcd of `a` and `b`, both canonical and primitive in `x` with the same
/// variables, given `γ = gcd(lc_x(a), lc_x(b))` scaled into the integers.
/// `None` when the modular reconstruction did not succeed.
pub(crate) fn sparse_gcd(a: &MultiPoly, b: &MultiPoly, x: usize, gamma: &MultiPoly) -> Option<MultiPoly> {
    let table = a.table();
    let nvars = table.len();
    let ys: Vec<usize> = (0..nvars).filter(|&v| v != x && (a.contains_var(v) || b.contains_var(v))).collect();
    let bounds: Vec<u32> = ys.iter().map(|&y| a.degree_in(y).min(b.degree_in(y)) + gamma.degree_in(y)).collect();
    let maxdeg: Vec<u32> =
        ys.iter().map(|&y| a.degree_in(y).max(b.degree_in(y)).max(gamma.degree_in(y))).collect();
    let mut rng = StdRng::seed_from_u64(0x21ff_e1 ^ (a.num_terms() as u64) << 24 ^ b.num_terms() as u64);
    let mut best_dx: Option<usize> = None;
    let mut acc: AHashMap<Monomial, BigInt> = AHashMap::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<(Monomial, BigInt)>> = None;
    for &p in modp::primes().iter().take(MAX_PRIMES) {
        let problem = Problem {
            a: Reduced::new(a, x, p),
            b: Reduced::new(b, x, p),
            gamma: Reduced::new(gamma, x, p),
            x,
            ys: &ys,
            maxdeg: maxdeg.clone(),
            bounds: &bounds,
            p,
        };
        if problem.a.terms.iter().all(|t| t.0 != problem.a.xdeg) || problem.gamma.terms.is_empty() {
            continue;
        }
        let mut image = None;
        for _ in 0..RESTARTS {
            if let Some(img) = problem.solve(&mut rng) {
                image = Some(img);
                break;
            }
        }
        let image = image?;
        let dx = image.iter().map(|(m, _)| m.exponent(x) as usize).max().unwrap_or(0);
        if dx == 0 {
            return Some(MultiPoly::one(table));
        }
        match best_dx {
            Some(d) if dx > d => continue,
            Some(d) if dx < d => {
                acc.clear();
                modulus = BigInt::one();
                last = None;
            }
            _ => {}
        }
        best_dx = Some(dx);
        // Chinese remaindering, coefficientwise
        let pb = BigInt::from(p);
        let inv = BigInt::from(modp::invmod(modp::reduce(&modulus, p), p));
        let image: AHashMap<Monomial, u64> = image.into_iter().collect();
        let mut keys: Vec<Monomial> = acc.keys().copied().collect();
        keys.extend(image.keys().filter(|m| !acc.contains_key(m)));
        let mut next = AHashMap::with_capacity(keys.len());
        for m in keys {
            let old = acc.get(&m).cloned().unwrap_or_default();
            let r = image.get(&m).copied().unwrap_or(0);
            let diff = BigInt::from(submod(r, modp::reduce(&old, p), p));
            let t = (diff * &inv) % &pb;
            let c = old + &modulus * t;
            if !c.is_zero() {
                next.insert(m, c);
            }
        }
        acc = next;
        modulus *= &pb;
        let half: BigInt = &modulus >> 1;
        let mut lifted: Vec<(Monomial, BigInt)> =
            acc.iter().map(|(m, c)| (*m, symmetric(c, &modulus, &half))).collect();
        lifted.sort_unstable_by(|u, v| v.0.cmp(&u.0));
        if last.as_ref() == Some(&lifted) {
            let g = MultiPoly::from_int_terms(table, lifted);
            let content = crate::gcd::content_in(&g, x);
            let g = g.exact_divide(&content)?.canonical();
            if a.exact_divide(&g).is_some() && b.exact_divide(&g).is_some() {
                return Some(g);
            }
            return None;
        }
        last = Some(lifted);
    }
    None
}

/// `γ` as used by [`sparse_gcd`]: gcd of the leading coefficients in `x`,
/// times the gcd of their integer contents.
pub(crate) fn leading_gcd(a: &MultiPoly, b: &MultiPoly, x: usize) -> MultiPoly {
    let la = a.to_univariate(x).pop().expect("nonzero");
    let lb = b.to_univariate(x).pop().expect("nonzero");
    let ic = num_integer::Integer::gcd(&la.integer_content(), &lb.integer_content());
    let g = crate::gcd::gcd(&la, &lb);
    let g = if g.is_zero() { MultiPoly::one(a.table()) } else { g };
    g.scale_int(&ic.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::symbols::SymbolTable;

    #[test]
    fn equal_inputs() {
        let t = SymbolTable::curve(&["c", "p", "x1", "x2", "y2"]).unwrap();
        let g = parse_poly(&t, "3*c^4*p^2*x1^2*x2^2 - 3*c^4*x1^4*x2^2 + c^2*p^2*x1^2*x2^2 - c^2*x1^4*x2^2 - 2*c^2*x1^2*y2^2 + 2*p^2*x1^2*y2^2 - 2*p^2*x2^2*y2^2 - 2*p^2*y2^4 - 2*x1^4*y2^2 + 2*x1^2*x2^2*y2^2 + 2*x1^2*y2^4 + 2*x1^2*y2^2").unwrap().canonical();
        let x = t.require("c").unwrap();
        let gamma = leading_gcd(&g, &g, x);
        assert_eq!(sparse_gcd(&g, &g, x, &gamma), Some(g.clone()));
    }
}
