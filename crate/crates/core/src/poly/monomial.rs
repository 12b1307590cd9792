use std::cmp::Ordering;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Exponent vector `x1^a1 ... xn^an`.
///
/// Ordered graded-lexicographically with `x1 > x2 > ... > xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// The variable `x_{i+1}`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other
            .divides(self)
            .then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// Componentwise maximum.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// gcd of all exponents (0 for the unit monomial).
    pub fn exponent_gcd(&self) -> u32 {
        self.0.iter().fold(0, |g, &a| g.gcd(&a))
    }

    /// `m` with `m^k = self`, if every exponent is divisible by `k`.
    pub fn root(&self, k: u32) -> Option<Monomial> {
        (k > 0 && self.0.iter().all(|a| a % k == 0))
            .then(|| Monomial(self.0.iter().map(|a| a / k).collect()))
    }

    /// Disjoint supports.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.gcd(other).is_one()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial::new(v.to_vec())
    }

    #[test]
    fn graded_lex_order() {
        assert!(m(&[2, 0]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert!(m(&[0, 3]) > m(&[2, 0]));
        assert!(m(&[0, 0]) < m(&[0, 1]));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(m(&[2, 1]).mul(&m(&[1, 3])), m(&[3, 4]));
        assert_eq!(m(&[3, 4]).div(&m(&[1, 3])), Some(m(&[2, 1])));
        assert_eq!(m(&[3, 4]).div(&m(&[4, 0])), None);
        assert_eq!(m(&[6, 4]).root(2), Some(m(&[3, 2])));
        assert_eq!(m(&[6, 4]).exponent_gcd(), 2);
        assert!(m(&[2, 0]).coprime(&m(&[0, 3])));
    }
}
