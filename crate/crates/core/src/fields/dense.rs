//! Dense univariate polynomials over a finite field.
//!
//! A polynomial is a coefficient vector, constant term first, with no
//! trailing zeros; the zero polynomial is the empty vector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FiniteField, Fq};

pub(crate) type Dense = Vec<Fq>;

pub(crate) fn trim(v: &mut Dense) {
    while v.last() == Some(&Fq(0)) {
        v.pop();
    }
}

pub(crate) fn degree(a: &[Fq]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn add(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Dense {
    let n = a.len().max(b.len());
    let mut out: Dense = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Fq(0));
            let y = b.get(i).copied().unwrap_or(Fq(0));
            f.fadd(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn sub(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Dense {
    let n = a.len().max(b.len());
    let mut out: Dense = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Fq(0));
            let y = b.get(i).copied().unwrap_or(Fq(0));
            f.fsub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn scale(f: &FiniteField, a: &[Fq], c: Fq) -> Dense {
    if c == Fq(0) {
        return Vec::new();
    }
    a.iter().map(|&x| f.fmul(x, c)).collect()
}

pub(crate) fn mul(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fq(0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == Fq(0) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.fadd(out[i + j], f.fmul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(f: &FiniteField, a: &[Fq], b: &[Fq]) -> (Dense, Dense) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.finv(b[db]).expect("trimmed leading coefficient");
    let mut r: Dense = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Fq(0); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i];
        if c == Fq(0) {
            continue;
        }
        let k = f.fmul(c, lead_inv);
        q[i - db] = k;
        for (j, &bj) in b.iter().enumerate() {
            r[i - db + j] = f.fsub(r[i - db + j], f.fmul(k, bj));
        }
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

pub(crate) fn rem(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Dense {
    divrem(f, a, b).1
}

pub(crate) fn monic(f: &FiniteField, a: &[Fq]) -> Dense {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(f, a, f.finv(l).expect("nonzero")),
    }
}

/// Monic gcd (zero when both inputs vanish).
pub(crate) fn gcd(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Dense {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// `(g, s, t)` with `s*a + t*b = g` and `g` the monic gcd.
pub(crate) fn ext_gcd(f: &FiniteField, a: &[Fq], b: &[Fq]) -> (Dense, Dense, Dense) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (Dense, Dense) = (vec![Fq(1)], Vec::new());
    let (mut t0, mut t1): (Dense, Dense) = (Vec::new(), vec![Fq(1)]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last() {
        None => (Vec::new(), s0, t0),
        Some(&l) => {
            let li = f.finv(l).expect("nonzero");
            (scale(f, &r0, li), scale(f, &s0, li), scale(f, &t0, li))
        }
    }
}

pub(crate) fn derivative(f: &FiniteField, a: &[Fq]) -> Dense {
    let mut out: Dense = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.fmul(f.from_u64(i as u64), c))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mulmod(f: &FiniteField, a: &[Fq], b: &[Fq], m: &[Fq]) -> Dense {
    rem(f, &mul(f, a, b), m)
}

pub(crate) fn powmod(f: &FiniteField, base: &[Fq], mut e: u128, m: &[Fq]) -> Dense {
    let mut acc = rem(f, &[Fq(1)], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(f, &b, &b, m);
        }
    }
    acc
}

#[cfg(test)]
pub(crate) fn eval(f: &FiniteField, a: &[Fq], x: Fq) -> Fq {
    a.iter()
        .rev()
        .fold(Fq(0), |acc, &c| f.fadd(f.fmul(acc, x), c))
}

/// Squarefree test for a polynomial of positive degree.
pub(crate) fn is_squarefree(f: &FiniteField, a: &[Fq]) -> bool {
    let d = derivative(f, a);
    if d.is_empty() {
        return degree(a).is_none_or(|n| n == 0);
    }
    gcd(f, a, &d).len() == 1
}

/// Rabin's irreducibility test over `F_q`.
pub(crate) fn is_irreducible(f: &FiniteField, a: &[Fq]) -> bool {
    let n = match degree(a) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let a = monic(f, a);
    let q = f.size() as u128;
    let x: Dense = vec![Fq(0), Fq(1)];
    // x^(q^k) mod a for k = 0..=n
    let mut frob = vec![rem(f, &x, &a)];
    for k in 1..=n {
        let prev = &frob[k - 1];
        frob.push(powmod(f, prev, q, &a));
    }
    if sub(f, &frob[n], &x).iter().any(|&c| c != Fq(0)) {
        return false;
    }
    for r in super::prime_factors(n as u64) {
        let k = n / r as usize;
        let h = sub(f, &frob[k], &x);
        if gcd(f, &a, &h).len() != 1 {
            return false;
        }
    }
    true
}

/// Monic irreducible factors of a squarefree polynomial, sorted by degree and
/// then coefficients.
pub(crate) fn factor_squarefree<R: Rng>(f: &FiniteField, a: &[Fq], rng: &mut R) -> Vec<Dense> {
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    if degree(&rest).is_none_or(|d| d == 0) {
        return out;
    }
    let q = f.size() as u128;
    let x: Dense = vec![Fq(0), Fq(1)];
    let mut h = rem(f, &x, &rest);
    let mut k = 0usize;
    while degree(&rest).unwrap_or(0) >= 2 * (k + 1) {
        k += 1;
        h = powmod(f, &h, q, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &x));
        if g.len() > 1 {
            equal_degree(f, &g, k, rng, &mut out);
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
        }
    }
    if degree(&rest).unwrap_or(0) > 0 {
        out.push(rest);
    }
    out.sort_by(|u, v| u.len().cmp(&v.len()).then_with(|| u.cmp(v)));
    out
}

/// Splits a product of distinct monic irreducibles of degree `k`.
fn equal_degree<R: Rng>(f: &FiniteField, g: &[Fq], k: usize, rng: &mut R, out: &mut Vec<Dense>) {
    let n = degree(g).unwrap_or(0);
    if n == k {
        out.push(g.to_vec());
        return;
    }
    let q = f.size() as u128;
    loop {
        let mut r: Dense = (0..n).map(|_| Fq(rng.gen_range(0..f.size()))).collect();
        trim(&mut r);
        if degree(&r).is_none_or(|d| d == 0) {
            continue;
        }
        let s = if f.p() == 2 {
            // trace map F_{q^k} -> F_2
            let bits = f.degree() as usize * k;
            let mut term = r.clone();
            let mut acc = r.clone();
            for _ in 1..bits {
                term = mulmod(f, &term, &term, g);
                acc = add(f, &acc, &term);
            }
            acc
        } else {
            // norm to F_q, then the quadratic character
            let mut conj = r.clone();
            let mut norm = r.clone();
            for _ in 1..k {
                conj = powmod(f, &conj, q, g);
                norm = mulmod(f, &norm, &conj, g);
            }
            let pw = powmod(f, &norm, (q - 1) / 2, g);
            sub(f, &pw, &[Fq(1)])
        };
        let d = gcd(f, g, &s);
        let dd = degree(&d).unwrap_or(0);
        if dd > 0 && dd < n {
            let other = divrem(f, g, &d).0;
            equal_degree(f, &d, k, rng, out);
            equal_degree(f, &other, k, rng, out);
            return;
        }
    }
}

/// All roots in `f`, ascending by encoding, without multiplicity.
pub(crate) fn roots(f: &FiniteField, a: &[Fq]) -> Vec<Fq> {
    let mut a = a.to_vec();
    trim(&mut a);
    if degree(&a).is_none_or(|d| d == 0) {
        return Vec::new();
    }
    let x: Dense = vec![Fq(0), Fq(1)];
    let xq = powmod(f, &x, f.size() as u128, &a);
    let g = gcd(f, &a, &sub(f, &xq, &x));
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_u64);
    let mut lin = Vec::new();
    if degree(&g).unwrap_or(0) > 0 {
        equal_degree(f, &g, 1, &mut rng, &mut lin);
    }
    let mut out: Vec<Fq> = lin.iter().map(|l| f.fneg(l[0])).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::build_extension;

    fn from_u(v: &[u64]) -> Dense {
        let mut d: Dense = v.iter().map(|&c| Fq(c)).collect();
        trim(&mut d);
        d
    }

    #[test]
    fn division_identity() {
        let f = build_extension(7, 1).unwrap();
        let a = from_u(&[3, 0, 5, 1, 6]);
        let b = from_u(&[1, 2, 1]);
        let (q, r) = divrem(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn bezout_identity() {
        let f = build_extension(5, 1).unwrap();
        let a = from_u(&[1, 0, 1, 1]);
        let b = from_u(&[2, 3, 0, 0, 1]);
        let (g, s, t) = ext_gcd(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &s, &a), &mul(&f, &t, &b)), g);
    }

    #[test]
    fn roots_match_exhaustive_search() {
        let f = build_extension(3, 2).unwrap();
        // (x - 1)(x - t)(x^2 + 1) over F_9
        let t = f.generator();
        let p = mul(
            &f,
            &mul(&f, &[f.fneg(Fq(1)), Fq(1)], &[f.fneg(t), Fq(1)]),
            &from_u(&[1, 0, 1]),
        );
        let expected: Vec<Fq> = f.elements().filter(|&c| eval(&f, &p, c) == Fq(0)).collect();
        assert_eq!(roots(&f, &p), expected);
    }

    #[test]
    fn factorization_recovers_irreducibles() {
        let f = build_extension(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut product: Dense = vec![Fq(1)];
        let parts = [
            from_u(&[1, 1]),
            from_u(&[0, 1]),
            from_u(&[1, 1, 0, 0, 0, 1]),
        ];
        for p in &parts {
            product = mul(&f, &product, p);
        }
        let factors = factor_squarefree(&f, &product, &mut rng);
        let mut recombined: Dense = vec![Fq(1)];
        for g in &factors {
            assert!(is_irreducible(&f, g));
            recombined = mul(&f, &recombined, g);
        }
        assert_eq!(recombined, product);
    }

    #[test]
    fn irreducibility_matches_root_count_in_low_degree() {
        let f = build_extension(5, 1).unwrap();
        for c0 in 0..5 {
            for c1 in 0..5 {
                for c2 in 0..5 {
                    let p = from_u(&[c0, c1, c2, 1]);
                    let has_root = f.elements().any(|c| eval(&f, &p, c) == Fq(0));
                    assert_eq!(is_irreducible(&f, &p), !has_root);
                }
            }
        }
    }

    #[test]
    fn squarefree() {
        let f = build_extension(3, 1).unwrap();
        assert!(is_squarefree(&f, &from_u(&[1, 0, 1])));
        assert!(!is_squarefree(&f, &from_u(&[1, 2, 1])));
        // x^3 - 1 = (x - 1)^3 in characteristic 3
        assert!(!is_squarefree(&f, &from_u(&[2, 0, 0, 1])));
    }
}
