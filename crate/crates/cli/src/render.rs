//! Runs one operation and renders its answer as JSON.

use monosite::classify::{classify_site, SiteVerdict, Witness};
use monosite::decomp::{homogeneous_site_monomials, two_monomial_decomposition};
use monosite::fields::{Field, FiniteField, Fq};
use monosite::newton::{collinear, newton_points};
use monosite::spectrum::{
    compute_spectrum, generic_irreducibility, to_finite, GenericTranscript, OracleConfig,
    OracleStats, SpectrumError,
};
use monosite::textio::{format_monomial, format_poly, Ring};
use monosite::{Monomial, Poly};
use serde_json::{json, Value};

use crate::{Answer, Failure};

fn monomials<'a>(ms: impl IntoIterator<Item = &'a Monomial>, ring: &Ring) -> Vec<String> {
    ms.into_iter().map(|m| format_monomial(m, ring)).collect()
}

fn elems(f: &FiniteField, xs: &[Fq]) -> Vec<String> {
    xs.iter().map(|x| f.format_elem(x)).collect()
}

fn answer(yes: bool, result: Value) -> Answer {
    Answer {
        yes,
        result,
        stats: OracleStats::default(),
    }
}

fn finite<F: Field>(p: &Poly<F>) -> Result<Poly<FiniteField>, Failure> {
    to_finite(p).ok_or_else(|| SpectrumError::NotFinite.into())
}

pub fn newton<F: Field>(p: &Poly<F>, ring: &Ring) -> Result<Answer, Failure> {
    let points = newton_points(p)?;
    let fit = collinear(points.points())?;
    let result = json!({
        "points": points.points(),
        "monomials": points.points().iter().map(|e| format_monomial(&Monomial::new(e.clone()), ring)).collect::<Vec<_>>(),
        "line": fit,
    });
    Ok(answer(true, result))
}

pub fn decompose<F: Field>(p: &Poly<F>, ring: &Ring) -> Result<Answer, Failure> {
    let deg = p.total_degree().unwrap_or(0);
    let Some(dec) = two_monomial_decomposition(p)? else {
        return Ok(answer(false, json!({ "homogeneous": false })));
    };
    let site = homogeneous_site_monomials(&dec, deg)?;
    let result = json!({
        "homogeneous": true,
        "m1": format_monomial(&dec.m1, ring),
        "m2": format_monomial(&dec.m2, ring),
        "degree": dec.degree,
        "maximal": dec.is_maximal(),
        "coefficients": dec.coeffs.iter().map(|c| p.field().format_elem(c)).collect::<Vec<_>>(),
        "site_monomials": monomials(&site, ring),
    });
    Ok(answer(true, result))
}

pub fn pure_power<F: Field>(p: &Poly<F>, ring: &Ring) -> Result<Answer, Failure> {
    Ok(match p.pure_power()? {
        Some(w) => answer(
            true,
            json!({
                "pure_power": true,
                "base": format_poly(&w.base, ring),
                "exponent": w.exponent,
                "scale": p.field().format_elem(&w.scale),
            }),
        ),
        None => answer(false, json!({ "pure_power": false })),
    })
}

fn transcript(
    t: &GenericTranscript,
    p: &Poly<FiniteField>,
    qs: &[Monomial],
    ring: &Ring,
) -> Result<Value, Failure> {
    let witness_polynomial = match t.witness_polynomial(p, qs) {
        Some(w) => Some(format_poly(&w?, ring)),
        None => None,
    };
    Ok(json!({
        "generically_irreducible": t.generically_irreducible,
        "trial_field": t.field.descriptor(),
        "trials_per_level": t.trials_per_level,
        "witness_values": t.witness.as_ref().map(|w| elems(&t.field, w)),
        "witness_polynomial": witness_polynomial,
        "reducible_values": elems(&t.field, &t.reducible_values),
        "excluded_values": elems(&t.field, &t.excluded_values),
    }))
}

fn witness<F: Field>(
    v: &SiteVerdict<F>,
    p: &Poly<F>,
    qs: &[Monomial],
    ring: &Ring,
) -> Result<Value, Failure> {
    let Some(w) = &v.witness else {
        return Ok(Value::Null);
    };
    let deg = p.total_degree().unwrap_or(0);
    Ok(match w {
        Witness::Frobenius { characteristic } => {
            json!({ "kind": "frobenius", "characteristic": characteristic })
        }
        Witness::MonomialPair { m1, m2, degree } => json!({
            "kind": "monomial_pair",
            "m1": format_monomial(m1, ring),
            "m2": format_monomial(m2, ring),
            "degree": degree,
        }),
        Witness::Homogeneous(dec) => json!({
            "kind": "homogeneous_decomposition",
            "m1": format_monomial(&dec.m1, ring),
            "m2": format_monomial(&dec.m2, ring),
            "degree": dec.degree,
            "coefficients": dec.coeffs.iter().map(|c| p.field().format_elem(c)).collect::<Vec<_>>(),
            "site_monomials": monomials(&homogeneous_site_monomials(dec, deg)?, ring),
        }),
        Witness::PurePowerSite { power, m, degree } => json!({
            "kind": "pure_power",
            "base": format_poly(&power.base, ring),
            "exponent": power.exponent,
            "scale": p.field().format_elem(&power.scale),
            "m": format_monomial(m, ring),
            "degree": degree,
        }),
        Witness::Oracle(t) => {
            let mut v = transcript(t, &finite(p)?, qs, ring)?;
            v["kind"] = json!("oracle");
            v
        }
    })
}

pub fn classify<F: Field>(
    p: &Poly<F>,
    qs: &[Monomial],
    ring: &Ring,
    cfg: &OracleConfig,
) -> Result<Answer, Failure> {
    let v = classify_site(p, qs, cfg)?;
    let stats = match &v.witness {
        Some(Witness::Oracle(t)) => t.stats,
        _ => OracleStats::default(),
    };
    let result = json!({
        "verdict": v.verdict,
        "case": v.case,
        "method": v.method,
        "witness": witness(&v, p, qs, ring)?,
    });
    Ok(Answer {
        yes: v.is_site(),
        result,
        stats,
    })
}

pub fn spectrum<F: Field>(
    p: &Poly<F>,
    q: &Monomial,
    sweep: Option<FiniteField>,
    _ring: &Ring,
    cfg: &OracleConfig,
) -> Result<Answer, Failure> {
    let p = finite(p)?;
    let sweep = sweep.unwrap_or_else(|| p.field().clone());
    let r = compute_spectrum(&p, q, &sweep, cfg)?;
    let result = json!({
        "sweep_field": r.field.descriptor(),
        "degree": r.degree,
        "values": elems(&r.field, &r.values),
        "degree_drop_exclusions": elems(&r.field, &r.degree_drop_exclusions),
        "bound": r.bound,
        "bound_satisfied": r.bound_satisfied,
    });
    Ok(Answer {
        yes: r.bound_satisfied,
        result,
        stats: r.stats,
    })
}

pub fn generic<F: Field>(
    p: &Poly<F>,
    qs: &[Monomial],
    ring: &Ring,
    cfg: &OracleConfig,
) -> Result<Answer, Failure> {
    let p = finite(p)?;
    let t = generic_irreducibility(&p, qs, cfg)?;
    Ok(Answer {
        yes: t.generically_irreducible,
        result: transcript(&t, &p, qs, ring)?,
        stats: t.stats,
    })
}
