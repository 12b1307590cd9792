use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::dense;
use super::{is_prime, prime_factors, Field, FieldDescriptor, FieldError, FieldKind};

/// Largest extension degree accepted by [`build_extension`].
pub const MAX_PUBLIC_EXTENSION_DEGREE: u32 = 12;

/// Fields up to this size get discrete log tables.
const TABLE_LIMIT: u64 = 1 << 21;
const MAX_DIGITS: usize = 64;
/// Exhaustive root search is used up to this field size.
const EXHAUSTIVE_ROOT_LIMIT: u64 = 81;

/// Element of a finite field, encoded as the base-`p` integer of its
/// coefficient vector over `F_p` (constant coefficient least significant).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub(crate) u64);

impl Fq {
    pub fn value(self) -> u64 {
        self.0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    m: u32,
    size: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// `F_{p^m}` represented as `F_p[t]/(f)` with `f` the lexicographically least
/// monic irreducible polynomial of degree `m`.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

/// Builds `F_{p^m}` for `m <= 12`.
pub fn build_extension(p: u64, m: u32) -> Result<FiniteField, FieldError> {
    if m > MAX_PUBLIC_EXTENSION_DEGREE {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        return Err(FieldError::DegreeTooLarge(m));
    }
    FiniteField::new(p, m)
}

type FieldCell = Arc<OnceLock<FiniteField>>;

/// One cell per `(p, m)`, so concurrent callers wait for a single build.
fn field_cell(p: u64, m: u32) -> FieldCell {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), FieldCell>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    cache.lock().unwrap().entry((p, m)).or_default().clone()
}

/// Embedding tables keyed by `(p, source degree, target degree)`.
type EmbeddingCache = Mutex<HashMap<(u64, u32, u32), Vec<Fq>>>;

fn embedding_cache() -> &'static EmbeddingCache {
    static CACHE: OnceLock<EmbeddingCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    /// Any degree with `p^m < 2^62`; the oracle uses this for its working
    /// extensions. Fields are cached, so repeated construction is cheap.
    pub fn new(p: u64, m: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if m == 0 {
            return Err(FieldError::Unsupported(
                "extension degree must be at least 1".into(),
            ));
        }
        if p >= 1 << 31 {
            return Err(FieldError::Unsupported(format!(
                "characteristic {p} too large"
            )));
        }
        let size = match p.checked_pow(m) {
            Some(s) if s < 1 << 62 && (m as usize) <= MAX_DIGITS => s,
            _ => return Err(FieldError::DegreeTooLarge(m)),
        };
        let cell = field_cell(p, m);
        Ok(cell.get_or_init(|| Self::build(p, m, size)).clone())
    }

    fn build(p: u64, m: u32, size: u64) -> FiniteField {
        if m == 1 {
            return FiniteField {
                inner: Arc::new(Inner {
                    p,
                    m,
                    size,
                    modulus: vec![0, 1],
                    tables: None,
                }),
            };
        }
        let base = FiniteField::new(p, 1).expect("validated characteristic");
        let modulus = least_irreducible(&base, m);
        let mut field = FiniteField {
            inner: Arc::new(Inner {
                p,
                m,
                size,
                modulus,
                tables: None,
            }),
        };
        if size <= TABLE_LIMIT {
            let tables = field.build_tables();
            let inner = Arc::get_mut(&mut field.inner).expect("fresh field is unshared");
            inner.tables = Some(tables);
        }
        field
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    pub fn size(&self) -> u64 {
        self.inner.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> + Clone {
        (0..self.inner.size).map(Fq)
    }

    /// Element with the given encoding; `None` when out of range.
    pub fn elem(&self, value: u64) -> Option<Fq> {
        (value < self.inner.size).then_some(Fq(value))
    }

    /// Residue of an integer in the prime subfield.
    pub fn from_u64(&self, n: u64) -> Fq {
        Fq(n % self.inner.p)
    }

    /// The generator `t` of the extension (equals 0 in a prime field, where
    /// the modulus is `t` itself).
    pub fn generator(&self) -> Fq {
        if self.inner.m == 1 {
            Fq(0)
        } else {
            Fq(self.inner.p)
        }
    }

    /// Coefficients of `a` over `F_p`, constant term first.
    pub fn coordinates(&self, a: Fq) -> Vec<u64> {
        let mut out = [0u64; MAX_DIGITS];
        self.digits(a.0, &mut out);
        out[..self.inner.m as usize].to_vec()
    }

    pub fn from_coordinates(&self, coords: &[u64]) -> Option<Fq> {
        if coords.len() > self.inner.m as usize || coords.iter().any(|&c| c >= self.inner.p) {
            return None;
        }
        Some(Fq(self.encode(coords)))
    }

    fn digits(&self, mut a: u64, out: &mut [u64; MAX_DIGITS]) {
        let p = self.inner.p;
        for d in out.iter_mut().take(self.inner.m as usize) {
            *d = a % p;
            a /= p;
        }
    }

    fn encode(&self, d: &[u64]) -> u64 {
        let p = self.inner.p;
        d.iter().rev().fold(0u64, |acc, &c| acc * p + c)
    }

    pub fn fadd(&self, a: Fq, b: Fq) -> Fq {
        let p = self.inner.p;
        if p == 2 {
            return Fq(a.0 ^ b.0);
        }
        if self.inner.m == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut res = 0u64;
        let mut place = 1u64;
        for _ in 0..self.inner.m {
            let s = x % p + y % p;
            res += if s >= p { s - p } else { s } * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Fq(res)
    }

    pub fn fneg(&self, a: Fq) -> Fq {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        if self.inner.m == 1 {
            return Fq(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut res = 0u64;
        let mut place = 1u64;
        for _ in 0..self.inner.m {
            let d = x % p;
            res += if d == 0 { 0 } else { p - d } * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Fq(res)
    }

    pub fn fsub(&self, a: Fq, b: Fq) -> Fq {
        self.fadd(a, self.fneg(b))
    }

    pub fn fmul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        if self.inner.m == 1 {
            return Fq(a.0 * b.0 % self.inner.p);
        }
        if let Some(t) = &self.inner.tables {
            let order = self.inner.size - 1;
            let idx = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % order;
            return Fq(t.exp[idx as usize] as u64);
        }
        self.slow_mul(a, b)
    }

    fn slow_mul(&self, a: Fq, b: Fq) -> Fq {
        let p = self.inner.p;
        let m = self.inner.m as usize;
        let mut da = [0u64; MAX_DIGITS];
        let mut db = [0u64; MAX_DIGITS];
        self.digits(a.0, &mut da);
        self.digits(b.0, &mut db);
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let modulus = &self.inner.modulus;
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            let negc = p - c;
            for j in 0..m {
                prod[i - m + j] = (prod[i - m + j] + negc * modulus[j]) % p;
            }
            prod[i] = 0;
        }
        Fq(self.encode(&prod[..m]))
    }

    pub fn fpow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq(1);
        }
        if a.0 == 0 {
            return Fq(0);
        }
        if let Some(t) = &self.inner.tables {
            let order = (self.inner.size - 1) as u128;
            let idx = (t.log[a.0 as usize] as u128 * e as u128) % order;
            return Fq(t.exp[idx as usize] as u64);
        }
        let mut base = a;
        let mut acc = Fq(1);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fmul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.fmul(base, base);
            }
        }
        acc
    }

    pub fn finv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.inner.tables {
            let order = self.inner.size - 1;
            let idx = (order - t.log[a.0 as usize] as u64) % order;
            return Some(Fq(t.exp[idx as usize] as u64));
        }
        Some(self.fpow(a, self.inner.size - 2))
    }

    /// Inverse Frobenius: `a^(p^(m-1))`.
    pub fn frobenius_inverse(&self, a: Fq) -> Fq {
        self.fpow(a, self.inner.size / self.inner.p)
    }

    fn build_tables(&self) -> Tables {
        let size = self.inner.size;
        let order = size - 1;
        let factors = prime_factors(order);
        let generator = (2..size)
            .map(Fq)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.slow_pow(g, order / r) != Fq(1))
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; size as usize];
        let mut cur = Fq(1);
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0 as u32;
            log[cur.0 as usize] = i as u32;
            cur = self.slow_mul(cur, generator);
        }
        Tables { exp, log }
    }

    fn slow_pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            e >>= 1;
            base = self.slow_mul(base, base);
        }
        acc
    }

    /// The degree-`k` extension of this field, with the embedding of this
    /// field into it.
    pub fn extension(&self, k: u32) -> Result<(FiniteField, Embedding), FieldError> {
        let big = FiniteField::new(self.inner.p, self.inner.m * k)?;
        let emb = self.embedding_into(&big)?;
        Ok((big, emb))
    }

    /// Ring embedding into a field of the same characteristic whose degree is
    /// a multiple of ours. The image of `t` is the least root of our modulus.
    pub fn embedding_into(&self, big: &FiniteField) -> Result<Embedding, FieldError> {
        let (p, m, big_m) = (self.inner.p, self.inner.m, big.inner.m);
        if big.inner.p != p || big_m % m != 0 {
            return Err(FieldError::NoEmbedding {
                sub: self.descriptor().to_string(),
                sup: big.descriptor().to_string(),
            });
        }
        if m == 1 {
            return Ok(Embedding {
                source: self.clone(),
                target: big.clone(),
                powers: vec![Fq(1)],
            });
        }
        if let Some(powers) = embedding_cache().lock().unwrap().get(&(p, m, big_m)) {
            return Ok(Embedding {
                source: self.clone(),
                target: big.clone(),
                powers: powers.clone(),
            });
        }
        let modulus: Vec<Fq> = self.inner.modulus.iter().map(|&c| Fq(c)).collect();
        let roots = dense::roots(big, &modulus);
        let root = *roots.iter().min().ok_or_else(|| FieldError::NoEmbedding {
            sub: self.descriptor().to_string(),
            sup: big.descriptor().to_string(),
        })?;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = Fq(1);
        for _ in 0..m {
            powers.push(cur);
            cur = big.fmul(cur, root);
        }
        embedding_cache()
            .lock()
            .unwrap()
            .insert((p, m, big_m), powers.clone());
        Ok(Embedding {
            source: self.clone(),
            target: big.clone(),
            powers,
        })
    }
}

/// Field homomorphism `F_{p^m} -> F_{p^M}` with `m | M`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FiniteField,
    target: FiniteField,
    powers: Vec<Fq>,
}

impl Embedding {
    pub fn source(&self) -> &FiniteField {
        &self.source
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn apply(&self, a: Fq) -> Fq {
        if self.source.inner.m == 1 {
            return a;
        }
        let coords = self.source.coordinates(a);
        let t = &self.target;
        coords
            .iter()
            .zip(&self.powers)
            .filter(|(&c, _)| c != 0)
            .fold(Fq(0), |acc, (&c, &w)| t.fadd(acc, t.fmul(Fq(c), w)))
    }
}

/// Least monic irreducible of degree `m` over the prime field `base`, in
/// lexicographic order of the little-endian coefficient list.
fn least_irreducible(base: &FiniteField, m: u32) -> Vec<u64> {
    let p = base.p();
    let total = p.pow(m);
    for k in 0..total {
        // c0 is the most significant digit of k.
        let mut coeffs = vec![0u64; m as usize + 1];
        let mut rest = k;
        for i in (0..m as usize).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[m as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        let poly: Vec<Fq> = coeffs.iter().map(|&c| Fq(c)).collect();
        if dense::is_irreducible(base, &poly) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field for FiniteField {
    type Elem = Fq;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            kind: if self.inner.m == 1 {
                FieldKind::Prime
            } else {
                FieldKind::Extension
            },
            p: self.inner.p,
            m: self.inner.m,
            modulus: self.inner.modulus.clone(),
        }
    }

    fn characteristic(&self) -> u64 {
        self.inner.p
    }

    fn cardinality(&self) -> Option<u64> {
        Some(self.inner.size)
    }

    fn zero(&self) -> Fq {
        Fq(0)
    }

    fn one(&self) -> Fq {
        Fq(1)
    }

    fn is_zero(&self, a: &Fq) -> bool {
        a.0 == 0
    }

    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        self.fadd(*a, *b)
    }

    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        self.fsub(*a, *b)
    }

    fn neg(&self, a: &Fq) -> Fq {
        self.fneg(*a)
    }

    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        self.fmul(*a, *b)
    }

    fn inv(&self, a: &Fq) -> Option<Fq> {
        self.finv(*a)
    }

    fn pow(&self, a: &Fq, e: u64) -> Fq {
        self.fpow(*a, e)
    }

    fn from_bigint(&self, n: &BigInt) -> Fq {
        let r = n.mod_floor(&BigInt::from(self.inner.p));
        Fq(r.to_u64().expect("residue fits"))
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Fq> {
        let d = self.from_bigint(den);
        let n = self.from_bigint(num);
        self.finv(d).map(|di| self.fmul(n, di))
    }

    fn nth_root(&self, a: &Fq, e: u64) -> Result<Option<Fq>, FieldError> {
        if e == 0 {
            return Ok((*a == Fq(1)).then_some(Fq(1)));
        }
        if a.0 <= 1 {
            // 0 and 1 are their own least roots
            return Ok(Some(*a));
        }
        let p = self.inner.p;
        if e.is_multiple_of(p) {
            let r = self.frobenius_inverse(*a);
            return self.nth_root(&r, e / p);
        }
        let size = self.inner.size;
        if size <= EXHAUSTIVE_ROOT_LIMIT {
            return Ok(self.elements().find(|&r| self.fpow(r, e) == *a));
        }
        let order = size - 1;
        if order.gcd(&e) == 1 {
            let inv = mod_inverse(e % order, order).expect("coprime");
            return Ok(Some(self.fpow(*a, inv)));
        }
        Err(FieldError::InstanceTooLarge { size, exponent: e })
    }

    fn pth_root(&self, a: &Fq) -> Result<Fq, FieldError> {
        Ok(self.frobenius_inverse(*a))
    }

    fn format_elem(&self, a: &Fq) -> String {
        if self.inner.m == 1 {
            return a.0.to_string();
        }
        let coords = self.coordinates(*a);
        let mut parts = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let s = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            };
            parts.push(s);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    fn as_finite(&self) -> Option<&FiniteField> {
        Some(self)
    }

    fn to_fq(&self, a: &Fq) -> Option<Fq> {
        Some(*a)
    }

    fn adjoined_generator(&self) -> Option<Fq> {
        (self.inner.m > 1).then(|| self.generator())
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = extended_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b.is_zero() {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}
