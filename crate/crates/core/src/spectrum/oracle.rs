//! Absolute irreducibility over a finite field.
//!
//! A polynomial `F` of degree `d` over `F_q` is first moved into a working
//! field `L0` large enough for the point searches below. Over a field `L`,
//! irreducibility is decided by a linear change of variables making `F`
//! monic in the last variable `y`, a specialization `x = a` with squarefree
//! image, univariate factorization, and Hensel lifting of every candidate
//! split of the univariate factors. Since the absolute factors of an
//! `L0`-irreducible `F` are conjugate and their number `s` divides `d`, `F`
//! is absolutely irreducible iff it is irreducible over `L0` and over
//! `L0^t` for each prime `t | d`.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fields::dense::{self, Dense};
use crate::fields::{prime_factors, Embedding, FiniteField, Fq};
use crate::poly::{Monomial, Poly};

use super::SpectrumError;

const FACTOR_SEED: u64 = 0x6d6f_6e6f_7369_7465;

/// Work counters; deterministic for a given input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleStats {
    /// Absolute irreducibility decisions.
    pub calls: u64,
    /// Specialization points examined while searching for a squarefree image.
    pub points: u64,
    /// Candidate factor pairs submitted to Hensel lifting.
    pub candidates: u64,
    /// Passes over a proper extension of the working field.
    pub extensions: u64,
}

impl AddAssign for OracleStats {
    fn add_assign(&mut self, o: Self) {
        self.calls += o.calls;
        self.points += o.points;
        self.candidates += o.candidates;
        self.extensions += o.extensions;
    }
}

/// X-monomial to coefficient polynomial in `y`, one map per total X-degree.
type Levels = Vec<BTreeMap<Vec<u32>, Dense>>;

/// `G(X, y) = F(X + a + c*y, y) / lc`, monic of degree `d` in `y`, with
/// squarefree `G(0, y)`.
struct Prepared {
    field: FiniteField,
    levels: Levels,
    d: usize,
}

impl Prepared {
    fn base(&self) -> &Dense {
        &self.levels[0][&vec![0u32; self.xvars()]]
    }

    fn xvars(&self) -> usize {
        self.levels[0].keys().next().map_or(0, Vec::len)
    }

    fn embed(&self, emb: &Embedding) -> Prepared {
        let levels = self
            .levels
            .iter()
            .map(|lvl| {
                lvl.iter()
                    .map(|(m, c)| (m.clone(), c.iter().map(|&a| emb.apply(a)).collect()))
                    .collect()
            })
            .collect();
        Prepared {
            field: emb.target().clone(),
            levels,
            d: self.d,
        }
    }
}

pub(crate) fn absolutely_irreducible(
    f: &Poly<FiniteField>,
    extension_cap: u32,
    stats: &mut OracleStats,
) -> Result<bool, SpectrumError> {
    stats.calls += 1;
    let d = match f.total_degree() {
        None | Some(0) => {
            return Err(SpectrumError::Precondition(
                "absolute irreducibility needs a non-constant polynomial".into(),
            ))
        }
        Some(d) => d as usize,
    };
    if d == 1 {
        return Ok(true);
    }
    if !f.monomial_gcd()?.is_one() || f.in_frobenius_subring()? || f.nvars() == 1 {
        return Ok(false);
    }

    let base = f.field();
    let need = (2 * d * (d - 1)) as u64;
    let mut k = 1u32;
    while base.size().saturating_pow(k) <= need {
        k += 1;
    }
    let (l0, emb) = base.extension(k)?;
    let f0 = f.map_field(&l0, |c| emb.apply(*c));
    let Some(prep) = prepare(&f0, stats) else {
        return Ok(false);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    let factors = dense::factor_squarefree(&l0, prep.base(), &mut rng);
    if factors.len() > 1 && splits(&prep, &factors, stats) {
        return Ok(false);
    }
    for t in prime_factors(d as u64) {
        let t = t as u32;
        if t > extension_cap {
            continue;
        }
        // Factors whose degree is prime to t stay irreducible over L0^t,
        // and then so does the whole candidate set.
        if !factors.iter().any(|g| (g.len() - 1) % t as usize == 0) {
            continue;
        }
        stats.extensions += 1;
        let (lt, emb) = l0.extension(t)?;
        let prep_t = prep.embed(&emb);
        let factors_t = dense::factor_squarefree(&lt, prep_t.base(), &mut rng);
        if factors_t.len() > 1 && splits(&prep_t, &factors_t, stats) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mixed-radix enumeration of `{0..s}^dim`, lexicographic.
fn grid(s: usize, dim: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = s.checked_pow(dim as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut k| {
        let mut v = vec![0; dim];
        for slot in v.iter_mut().rev() {
            *slot = k % s;
            k /= s;
        }
        v
    })
}

/// `F(a + c*y, y)` as a polynomial in `y`.
fn restrict_to_line(f: &Poly<FiniteField>, a: &[Fq], c: &[Fq]) -> Dense {
    let l = f.field();
    let n = f.nvars();
    let lines: Vec<Dense> = (0..n - 1)
        .map(|i| {
            let mut v = vec![a[i], c[i]];
            dense::trim(&mut v);
            v
        })
        .collect();
    let mut out: Dense = Vec::new();
    for (m, coef) in f.terms() {
        let e = m.exponents();
        let mut term: Dense = vec![Fq(0); e[n - 1] as usize];
        term.push(*coef);
        for (i, line) in lines.iter().enumerate() {
            for _ in 0..e[i] {
                term = dense::mul(l, &term, line);
            }
        }
        out = dense::add(l, &out, &term);
    }
    out
}

/// `F(X + a + c*y, y)` in the variables `X_1..X_{n-1}, y`.
fn substitute(f: &Poly<FiniteField>, a: &[Fq], c: &[Fq]) -> Poly<FiniteField> {
    let l = f.field();
    let n = f.nvars();
    let forms: Vec<Poly<FiniteField>> = (0..n - 1)
        .map(|i| {
            Poly::from_terms(
                l,
                n,
                [
                    (Monomial::var(n, i), Fq(1)),
                    (Monomial::one(n), a[i]),
                    (Monomial::var(n, n - 1), c[i]),
                ],
            )
        })
        .collect();
    let mut powers: Vec<Vec<Poly<FiniteField>>> = forms
        .iter()
        .map(|p| vec![Poly::one(l, n), p.clone()])
        .collect();
    let mut out = Poly::zero(l, n);
    for (m, coef) in f.terms() {
        let e = m.exponents();
        let mut y_part = vec![0u32; n];
        y_part[n - 1] = e[n - 1];
        let mut term = Poly::monomial(l, Monomial::new(y_part), *coef);
        for i in 0..n - 1 {
            let k = e[i] as usize;
            while powers[i].len() <= k {
                let next = &powers[i][powers[i].len() - 1] * &forms[i];
                powers[i].push(next);
            }
            term = &term * &powers[i][k];
        }
        out = &out + &term;
    }
    out
}

fn prepare(f: &Poly<FiniteField>, stats: &mut OracleStats) -> Option<Prepared> {
    let l = f.field().clone();
    let n = f.nvars();
    let d = f.total_degree().unwrap_or(0) as usize;
    let s = (d * (d - 1) + 1).max(d + 2).min(l.size() as usize);
    let elems: Vec<Fq> = l.elements().take(s).collect();
    let top = f.leading_form();
    let partials: Vec<Poly<FiniteField>> = (0..n).map(|i| f.derivative(i)).collect();

    // Shear making F monic and separable in y.
    let c: Vec<Fq> = grid(s, n - 1)
        .map(|idx| idx.iter().map(|&i| elems[i]).collect::<Vec<_>>())
        .find(|c| {
            let mut pt = c.clone();
            pt.push(Fq(1));
            if top.eval(&pt) == Fq(0) {
                return false;
            }
            let mut dy = partials[n - 1].clone();
            for (ci, pi) in c.iter().zip(&partials) {
                dy = &dy + &pi.scale(ci);
            }
            !dy.is_zero()
        })
        .expect("grid larger than the degree of the obstruction");

    let mut lead = Fq(0);
    let mut found = None;
    for idx in grid(s, n - 1) {
        stats.points += 1;
        let a: Vec<Fq> = idx.iter().map(|&i| elems[i]).collect();
        let g = restrict_to_line(f, &a, &c);
        debug_assert_eq!(g.len(), d + 1);
        if dense::is_squarefree(&l, &g) {
            lead = g[d];
            found = Some(a);
            break;
        }
    }
    // The discriminant in y vanishes identically: F has a repeated factor.
    let a = found?;

    let g = substitute(f, &a, &c).scale(&l.finv(lead).expect("nonzero"));
    let mut levels: Levels = vec![BTreeMap::new(); d + 1];
    for (m, coef) in g.terms() {
        let e = m.exponents();
        let x: Vec<u32> = e[..n - 1].to_vec();
        let lvl = x.iter().sum::<u32>() as usize;
        let slot = levels[lvl].entry(x).or_default();
        let yd = e[n - 1] as usize;
        if slot.len() <= yd {
            slot.resize(yd + 1, Fq(0));
        }
        slot[yd] = l.fadd(slot[yd], *coef);
    }
    for lvl in &mut levels {
        lvl.values_mut().for_each(dense::trim);
        lvl.retain(|_, v| !v.is_empty());
    }
    Some(Prepared {
        field: l,
        levels,
        d,
    })
}

/// Whether some grouping of the univariate factors lifts to a factorization.
fn splits(prep: &Prepared, factors: &[Dense], stats: &mut OracleStats) -> bool {
    let l = &prep.field;
    let r = factors.len();
    let d = prep.d;
    let degs: Vec<usize> = factors.iter().map(|g| g.len() - 1).collect();
    for mask in 1u64..(1u64 << r) - 1 {
        let deg: usize = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| degs[i]).sum();
        if 2 * deg > d || (2 * deg == d && mask & 1 == 0) {
            continue;
        }
        let mut u0: Dense = vec![Fq(1)];
        for i in (0..r).filter(|i| mask >> i & 1 == 1) {
            u0 = dense::mul(l, &u0, &factors[i]);
        }
        let w0 = dense::divrem(l, prep.base(), &u0).0;
        stats.candidates += 1;
        if lifts(prep, &u0, &w0) {
            return true;
        }
    }
    false
}

fn add_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Degree-`k` part of `U * W`, skipping the two products that involve the
/// still unknown level `k` of either factor when `skip_ends` is set.
fn product_level(
    l: &FiniteField,
    u: &Levels,
    w: &Levels,
    k: usize,
    skip_ends: bool,
) -> BTreeMap<Vec<u32>, Dense> {
    let mut out: BTreeMap<Vec<u32>, Dense> = BTreeMap::new();
    let (lo, hi) = if skip_ends {
        (1, k.saturating_sub(1))
    } else {
        (0, k)
    };
    if skip_ends && k < 2 {
        return out;
    }
    for i in lo..=hi {
        let (Some(ui), Some(wj)) = (u.get(i), w.get(k - i)) else {
            continue;
        };
        for (m1, a) in ui {
            for (m2, b) in wj {
                let key = add_exps(m1, m2);
                let prod = dense::mul(l, a, b);
                let slot = out.entry(key).or_default();
                *slot = dense::add(l, slot, &prod);
            }
        }
    }
    out.retain(|_, v| !v.is_empty());
    out
}

/// Hensel-lifts `G(0, y) = u0 * w0` and checks for an exact factorization.
fn lifts(prep: &Prepared, u0: &Dense, w0: &Dense) -> bool {
    let l = &prep.field;
    let (du, dw) = (u0.len() - 1, w0.len() - 1);
    let (_, _, t) = dense::ext_gcd(l, u0, w0);
    let zero = vec![0u32; prep.xvars()];
    let mut u: Levels = vec![BTreeMap::from([(zero.clone(), u0.clone())])];
    let mut w: Levels = vec![BTreeMap::from([(zero, w0.clone())])];
    let empty = BTreeMap::new();
    for k in 1..=du.max(dw) {
        let target = prep.levels.get(k).unwrap_or(&empty);
        let known = product_level(l, &u, &w, k, true);
        let mut err = target.clone();
        for (m, v) in known {
            let slot = err.entry(m).or_default();
            *slot = dense::sub(l, slot, &v);
        }
        let mut uk = BTreeMap::new();
        let mut wk = BTreeMap::new();
        for (m, e) in err {
            if e.is_empty() {
                continue;
            }
            let du_k = dense::rem(l, &dense::mul(l, &e, &t), u0);
            let (dw_k, r) = dense::divrem(l, &dense::sub(l, &e, &dense::mul(l, &du_k, w0)), u0);
            debug_assert!(r.is_empty());
            // A true factor has total degree du (resp. dw) in (X, y).
            if !du_k.is_empty() && k + du_k.len() - 1 > du {
                return false;
            }
            if !dw_k.is_empty() && k + dw_k.len() - 1 > dw {
                return false;
            }
            if !du_k.is_empty() {
                uk.insert(m.clone(), du_k);
            }
            if !dw_k.is_empty() {
                wk.insert(m, dw_k);
            }
        }
        u.push(uk);
        w.push(wk);
    }
    (0..=prep.d).all(|k| {
        let got = product_level(l, &u, &w, k, false);
        got == *prep.levels.get(k).unwrap_or(&empty)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::build_extension;
    use crate::poly::test_support::poly;

    fn oracle(p: &Poly<FiniteField>) -> bool {
        let mut stats = OracleStats::default();
        absolutely_irreducible(p, u32::MAX, &mut stats).unwrap()
    }

    #[test]
    fn simple_verdicts() {
        let f5 = build_extension(5, 1).unwrap();
        assert!(!oracle(&poly(&f5, &[(1, &[2, 0]), (-1, &[0, 2])])));
        let f7 = build_extension(7, 1).unwrap();
        for c in 1..7 {
            assert!(oracle(&poly(&f7, &[(1, &[1, 0]), (c, &[0, 3])])));
        }
        let f3 = build_extension(3, 1).unwrap();
        assert!(!oracle(&poly(&f3, &[(1, &[2, 0]), (1, &[0, 0])])));
    }

    #[test]
    fn conjugate_factors_need_extension() {
        // x^2 + y^2 over F_3 is irreducible over F_3 but splits over F_9;
        // x^2 - 2y^2 + x over F_5 is irreducible and stays so.
        let f3 = build_extension(3, 1).unwrap();
        assert!(!oracle(&poly(&f3, &[(1, &[2, 0]), (1, &[0, 2])])));
        let f5 = build_extension(5, 1).unwrap();
        assert!(oracle(&poly(
            &f5,
            &[(1, &[2, 0]), (-2, &[0, 2]), (1, &[1, 0])]
        )));
    }

    #[test]
    fn product_of_known_factors_is_reducible() {
        let f7 = build_extension(7, 1).unwrap();
        let a = poly(&f7, &[(1, &[2, 0]), (3, &[0, 1]), (1, &[1, 1])]);
        let b = poly(&f7, &[(1, &[0, 2]), (2, &[1, 0]), (5, &[0, 0])]);
        assert!(oracle(&a));
        assert!(oracle(&b));
        assert!(!oracle(&(&a * &b)));
        // three variables
        let c = poly(&f7, &[(1, &[1, 0, 1]), (1, &[0, 1, 0]), (2, &[0, 0, 0])]);
        let e = poly(&f7, &[(1, &[0, 1, 1]), (3, &[1, 0, 0])]);
        assert!(oracle(&c));
        assert!(!oracle(&(&c * &e)));
    }

    #[test]
    fn cubic_with_conjugate_lines() {
        // x^3 - 2y^3 over F_7 splits into three lines defined over a cubic
        // extension.
        let f7 = build_extension(7, 1).unwrap();
        assert!(!oracle(&poly(&f7, &[(1, &[3, 0]), (-2, &[0, 3])])));
        assert!(oracle(&poly(
            &f7,
            &[(1, &[3, 0]), (1, &[0, 3]), (1, &[1, 1])]
        )));
    }
}
