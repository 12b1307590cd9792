//! Root extraction: `S` with `S^e = P`, and detection of pure powers.

use crate::fields::{prime_factors, Field};

use super::{Monomial, Poly, PolyError};

/// `scale * base^exponent` equals the witnessed polynomial.
///
/// `scale` is one whenever the leading coefficient has an `exponent`-th root
/// in the coefficient field; otherwise the power only exists after a field
/// extension and the base is kept monic.
#[derive(Clone, Debug, PartialEq)]
pub struct PurePowerWitness<F: Field> {
    pub base: Poly<F>,
    pub exponent: u32,
    pub scale: F::Elem,
}

impl<F: Field> PurePowerWitness<F> {
    pub fn verify(&self, p: &Poly<F>) -> bool {
        self.base.pow(self.exponent).scale(&self.scale) == *p
    }
}

impl<F: Field> Poly<F> {
    /// The unique `R` with `R^p = P` in characteristic `p`, if `P` lies in
    /// `K[x^p]`.
    pub fn frobenius_root(&self) -> Result<Option<Self>, PolyError> {
        let p = self.field.characteristic();
        if p == 0 {
            return Err(PolyError::CharacteristicZero);
        }
        let p = u32::try_from(p).unwrap_or(u32::MAX);
        let mut out = Poly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let Some(r) = m.root(p) else {
                return Ok(None);
            };
            out.add_term(r, self.field.pth_root(c)?);
        }
        Ok(Some(out))
    }

    /// `S` with `S^e = P`, if one exists over the coefficient field.
    ///
    /// The leading coefficient of `S` is the field's canonical root of the
    /// leading coefficient of `P`, which pins `S` down among its multiples by
    /// `e`-th roots of unity.
    pub fn eth_root(&self, e: u32) -> Result<Option<Self>, PolyError> {
        let (lm, lc) = self.leading().ok_or(PolyError::ZeroPolynomial)?;
        match e {
            0 => return Ok(None),
            1 => return Ok(Some(self.clone())),
            _ => {}
        }
        let p = self.field.characteristic();
        if p > 0 && u64::from(e) % p == 0 {
            return match self.frobenius_root()? {
                None => Ok(None),
                Some(r) => r.eth_root(e / p as u32),
            };
        }
        let Some(lead_mono) = lm.root(e) else {
            return Ok(None);
        };
        let Some(lead_coeff) = self.field.nth_root(lc, u64::from(e))? else {
            return Ok(None);
        };
        // Exponents of a root are bounded by those of P divided by e.
        let bound = Monomial::new(
            self.max_exponents()
                .exponents()
                .iter()
                .map(|a| a / e)
                .collect(),
        );
        let max_iterations: u64 = bound
            .exponents()
            .iter()
            .map(|&b| u64::from(b) + 1)
            .product();

        let shift = lead_mono.pow(e - 1);
        let denom = self.field.mul(
            &self.field.from_i64(i64::from(e)),
            &self.field.pow(&lead_coeff, u64::from(e - 1)),
        );
        let denom_inv = self.field.inv(&denom).expect("e is a unit in the field");
        let mut root = Poly::monomial(&self.field, lead_mono.clone(), lead_coeff);
        let mut last = lead_mono;
        for _ in 0..max_iterations {
            let diff = self - &root.pow(e);
            let Some((dm, dc)) = diff.leading() else {
                return Ok(Some(root));
            };
            let Some(m) = dm.div(&shift) else {
                return Ok(None);
            };
            if m >= last || !m.divides(&bound) {
                return Ok(None);
            }
            root.add_term(m.clone(), self.field.mul(dc, &denom_inv));
            last = m;
        }
        if *self == root.pow(e) {
            return Ok(Some(root));
        }
        Err(PolyError::InternalBound("eth_root"))
    }

    /// The witness `P = scale * S^e` with the largest `e > 1`, if any.
    pub fn pure_power(&self) -> Result<Option<PurePowerWitness<F>>, PolyError> {
        let (_, lc) = self.leading().ok_or(PolyError::ZeroPolynomial)?;
        if self.is_constant() {
            return Ok(None);
        }
        let lc = lc.clone();
        let mut base = self.monic();
        let mut exponent = 1u32;
        'grow: loop {
            let d = base.total_degree().unwrap_or(0);
            for q in prime_factors(u64::from(d)) {
                if let Some(r) = base.eth_root(q as u32)? {
                    base = r;
                    exponent *= q as u32;
                    continue 'grow;
                }
            }
            break;
        }
        if exponent == 1 {
            return Ok(None);
        }
        let one = self.field.one();
        let witness = match self.field.nth_root(&lc, u64::from(exponent)) {
            Ok(Some(r)) => PurePowerWitness {
                base: base.scale(&r),
                exponent,
                scale: one,
            },
            _ => PurePowerWitness {
                base,
                exponent,
                scale: lc,
            },
        };
        debug_assert!(witness.verify(self));
        Ok(Some(witness))
    }
}
