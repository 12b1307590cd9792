//! Reference identities and verdicts, checked end to end.

use std::collections::BTreeSet;

use monosite::classify::{classify_site, SiteCase};
use monosite::decomp::{
    homogeneous_site_monomials, refine_monomial_pair, two_monomial_decomposition,
};
use monosite::fields::{build_extension, Field, FiniteField, Fq};
use monosite::spectrum::{compute_spectrum, generic_irreducibility, OracleConfig, OracleStats};
use monosite::textio::{parse_monomial, parse_poly, Ring};
use monosite::{Error, Monomial, Poly, Rationals};
use serde_json::json;

use crate::Answer;

type Check = Result<bool, Error>;

fn ring() -> Ring {
    Ring::letters(2).expect("two letters")
}

fn q(src: &str) -> Result<Poly<Rationals>, Error> {
    Ok(parse_poly(src, &ring(), &Rationals)?)
}

fn over(p: u64, m: u32, src: &str) -> Result<(FiniteField, Poly<FiniteField>), Error> {
    let f = build_extension(p, m)?;
    let poly = parse_poly(src, &ring(), &f)?;
    Ok((f, poly))
}

fn monos(srcs: &[&str]) -> Result<Vec<Monomial>, Error> {
    Ok(srcs
        .iter()
        .map(|s| parse_monomial(s, &ring()))
        .collect::<Result<_, _>>()?)
}

fn site<F: Field>(p: &Poly<F>, qs: &[&str], cfg: &OracleConfig, case: Option<SiteCase>) -> Check {
    let v = classify_site(p, &monos(qs)?, cfg)?;
    Ok(v.is_site() && case.is_none_or(|c| c == v.case))
}

fn square_times_line() -> Check {
    let (u, v) = (q("y^3")?, q("y^3 - x^4")?);
    Ok(&(&(&u + &v) * &(&u + &v)) * &(&u - &v) == q("(2y^3 - x^4)^2 x^4")?)
}

fn quartic_first() -> Check {
    let (phi, psi) = (q("x")?, q("(y-1)*(x+y)+y")?);
    Ok(&(&psi * &psi) - &(&phi * &phi) == q("y*(x+y)*(y^2+x*y-2*x)")?)
}

fn quartic_second() -> Check {
    let (phi, psi) = (q("y")?, q("(x+y)*(y^2+x*y-2*x)")?);
    Ok(&phi * &psi == q("y*(x+y)*(y^2+x*y-2*x)")?)
}

fn cusp_cube_decomposition() -> Check {
    let Some(dec) = two_monomial_decomposition(&q("(x^2 - y^3)^3")?)? else {
        return Ok(false);
    };
    let got = homogeneous_site_monomials(&dec, 9)?;
    let want: BTreeSet<Monomial> = monos(&["x^6", "x^4y^3", "x^2y^6", "y^9"])?
        .into_iter()
        .collect();
    Ok(dec.m1 == monos(&["x^2"])?[0]
        && dec.m2 == monos(&["y^3"])?[0]
        && dec.degree == 3
        && got == want)
}

fn refinement() -> Check {
    let m = monos(&["x^2", "y^2", "x", "y"])?;
    let c = [Rationals.one(), Rationals.zero(), Rationals.one()];
    let (dec, trace) = refine_monomial_pair(&Rationals, &m[0], &m[1], 2, &c)?;
    Ok(dec.m1 == m[2] && dec.m2 == m[3] && dec.degree == 4 && trace.gcd_factor == 2)
}

fn cusp_cube_power_sites(cfg: &OracleConfig) -> Check {
    let p = q("(x^2 - y^3)^3")?;
    for m in [
        "1", "x^3", "y^3", "x^6", "x^3y^3", "y^6", "x^9", "x^6y^3", "x^3y^6", "y^9",
    ] {
        if !site(&p, &[m], cfg, None)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cusp_cube_char_three(cfg: &OracleConfig) -> Check {
    let (_, p) = over(3, 1, "(x^2 - y^3)^3")?;
    let all = [
        "1", "x^3", "y^3", "x^6", "x^3y^3", "y^6", "x^9", "x^6y^3", "x^3y^6", "y^9",
    ];
    site(&p, &all, cfg, Some(SiteCase::PurePowerPossibility3))
}

fn extra_site(cfg: &OracleConfig, stats: &mut OracleStats) -> Check {
    let (_, p) = over(7, 1, "(2y^3 - x^4)^2 x^4")?;
    let qs = monos(&["y^9"])?;
    let t = generic_irreducibility(&p, &qs, cfg)?;
    *stats += t.stats;
    Ok(site(&p, &["y^9"], cfg, None)? && !t.generically_irreducible)
}

fn quartic_square_site(cfg: &OracleConfig, stats: &mut OracleStats) -> Check {
    let (_, p) = over(7, 1, "y*(x+y)*(y^2+x*y-2*x)")?;
    let v = classify_site(&p, &monos(&["x^2"])?, cfg)?;
    if let Some(monosite::classify::Witness::Oracle(t)) = &v.witness {
        *stats += t.stats;
    }
    Ok(v.is_site())
}

fn typical_cubic(cfg: &OracleConfig) -> Check {
    let (_, p) = over(7, 1, "x^3 + y^3 + x*y")?;
    Ok(!classify_site(&p, &monos(&["x"])?, cfg)?.is_site())
}

fn spectrum_of_xy(cfg: &OracleConfig, stats: &mut OracleStats) -> Check {
    let (f, p) = over(7, 1, "x*y")?;
    let r = compute_spectrum(&p, &Monomial::one(2), &f, cfg)?;
    *stats += r.stats;
    Ok(r.values == f.elem(0).into_iter().collect::<Vec<Fq>>() && r.bound == 4 && r.bound_satisfied)
}

fn linear_pencil(cfg: &OracleConfig, stats: &mut OracleStats) -> Check {
    let (_, p) = over(7, 1, "x^3 + y^3 + x^2y")?;
    let t = generic_irreducibility(&p, &monos(&["x", "y"])?, cfg)?;
    *stats += t.stats;
    Ok(t.generically_irreducible && t.witness.is_some())
}

/// Runs every fixture; the answer is "yes" when all pass.
pub fn run(base: &OracleConfig) -> Answer {
    let cfg = OracleConfig {
        max_total_degree: base.max_total_degree.max(12),
        ..*base
    };
    let mut stats = OracleStats::default();
    let results: Vec<(&str, Check)> = vec![
        ("square-times-line identity", square_times_line()),
        ("quartic as difference of squares", quartic_first()),
        ("quartic as product", quartic_second()),
        ("cusp cube decomposition", cusp_cube_decomposition()),
        ("binomial refinement", refinement()),
        (
            "binomial quartic site",
            q("x^4")
                .and_then(|p| site(&p, &["y^4"], &cfg, Some(SiteCase::MonomialCaseHomogeneous))),
        ),
        (
            "cusp cube homogeneous site",
            q("(x^2 - y^3)^3").and_then(|p| {
                site(
                    &p,
                    &["x^4y^3", "y^9"],
                    &cfg,
                    Some(SiteCase::HomogeneousCase),
                )
            }),
        ),
        ("cusp cube power sites", cusp_cube_power_sites(&cfg)),
        (
            "cusp cube in characteristic three",
            cusp_cube_char_three(&cfg),
        ),
        ("square-times-line extra site", extra_site(&cfg, &mut stats)),
        (
            "square-times-line square sites",
            q("(2y^3 - x^4)^2 x^4")
                .and_then(|p| site(&p, &["y^6"], &cfg, Some(SiteCase::PurePowerPossibility2))),
        ),
        (
            "quartic site from difference of squares",
            quartic_square_site(&cfg, &mut stats),
        ),
        ("typical cubic is not a site", typical_cubic(&cfg)),
        ("spectrum of xy", spectrum_of_xy(&cfg, &mut stats)),
        (
            "linear monomials generically irreducible",
            linear_pencil(&cfg, &mut stats),
        ),
    ];
    let mut passed = 0;
    let fixtures: Vec<_> = results
        .into_iter()
        .map(|(name, r)| {
            let (pass, detail) = match r {
                Ok(true) => (true, None),
                Ok(false) => (false, Some("mismatch".to_string())),
                Err(e) => (false, Some(e.to_string())),
            };
            passed += usize::from(pass);
            json!({ "name": name, "pass": pass, "detail": detail })
        })
        .collect();
    let failed = fixtures.len() - passed;
    Answer {
        yes: failed == 0,
        result: json!({ "fixtures": fixtures, "passed": passed, "failed": failed }),
        stats,
    }
}
