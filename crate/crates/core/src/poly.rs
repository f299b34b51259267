//! Sparse integer polynomials in the three variables `q`, `t` and `z`.
//!
//! `q` carries dinv, `t` carries area-like statistics (area, revmaj, inv3)
//! and `z` counts decorations or monotone positions. Every generating
//! function in the crate is a [`Polynomial`].

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exponent vector `q^q t^t z^z`. Ordered lexicographically by `(q, t, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub q: u32,
    pub t: u32,
    pub z: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { q: 0, t: 0, z: 0 };

    pub const fn new(q: u32, t: u32, z: u32) -> Self {
        Monomial { q, t, z }
    }

    pub const fn t(t: u32) -> Self {
        Monomial { q: 0, t, z: 0 }
    }

    pub const fn tz(t: u32, z: u32) -> Self {
        Monomial { q: 0, t, z }
    }

    pub const fn qt(q: u32, t: u32) -> Self {
        Monomial { q, t, z: 0 }
    }

    fn mul(self, other: Monomial) -> Monomial {
        let add = |a: u32, b: u32| a.checked_add(b).expect("exponent overflow");
        Monomial {
            q: add(self.q, other.q),
            t: add(self.t, other.t),
            z: add(self.z, other.z),
        }
    }
}

/// Integer polynomial in `q, t, z`, kept in canonical form: no zero
/// coefficient is ever stored, so structural equality is polynomial equality.
///
/// Coefficient arithmetic is checked and panics on `i64` overflow rather than
/// wrapping.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, i64>,
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("polynomial coefficient overflow")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("polynomial coefficient overflow")
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::monomial(Monomial::ONE, 1)
    }

    pub fn constant(c: i64) -> Self {
        Polynomial::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: i64) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    /// `t^e`.
    pub fn t_pow(e: u32) -> Self {
        Polynomial::monomial(Monomial::t(e), 1)
    }

    /// `z^e`.
    pub fn z_pow(e: u32) -> Self {
        Polynomial::monomial(Monomial::tz(0, e), 1)
    }

    /// Adds `c · m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = checked_add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> i64 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    /// Largest `t` exponent, `None` for the zero polynomial.
    pub fn t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.t).max()
    }

    /// Sum of all coefficients (evaluation at `q = t = z = 1`).
    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().fold(0, |acc, &c| checked_add(acc, c))
    }

    pub fn scale(&self, c: i64) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&m, &v) in &self.terms {
            out.add_term(m, checked_mul(v, c));
        }
        out
    }

    /// Evaluates `q` at `v` and recollects terms; the result has no `q`.
    pub fn substitute_q(&self, v: i64) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&m, &c) in &self.terms {
            let w = v.checked_pow(m.q).expect("polynomial coefficient overflow");
            out.add_term(Monomial { q: 0, ..m }, checked_mul(c, w));
        }
        out
    }

    /// Evaluates `z` at `v`.
    pub fn substitute_z(&self, v: i64) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&m, &c) in &self.terms {
            let w = v.checked_pow(m.z).expect("polynomial coefficient overflow");
            out.add_term(Monomial { z: 0, ..m }, checked_mul(c, w));
        }
        out
    }

    /// Coefficient of `z^e`, as a polynomial in `q, t`.
    pub fn z_coefficient(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&m, &c) in self.terms.iter().filter(|(m, _)| m.z == e) {
            out.add_term(Monomial { z: 0, ..m }, c);
        }
        out
    }

    /// `[n]_t = 1 + t + ... + t^(n-1)`, with `[0]_t = 0`.
    pub fn t_analog(n: u32) -> Polynomial {
        let mut p = Polynomial::zero();
        for e in 0..n {
            p.add_term(Monomial::t(e), 1);
        }
        p
    }

    /// `[n]_q`.
    pub fn q_analog(n: u32) -> Polynomial {
        let mut p = Polynomial::zero();
        for e in 0..n {
            p.add_term(Monomial::qt(e, 0), 1);
        }
        p
    }

    /// `[n]_t! = [n]_t [n-1]_t ... [1]_t`.
    pub fn t_factorial(n: u32) -> Polynomial {
        (1..=n).fold(Polynomial::one(), |acc, k| &acc * &Polynomial::t_analog(k))
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (&m, &c) in &rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            *self += &lhs;
        } else {
            *self += &rhs;
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (&m, &c) in &rhs.terms {
            out.add_term(m, c.checked_neg().expect("polynomial coefficient overflow"));
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&m1, &c1) in &self.terms {
            for (&m2, &c2) in &rhs.terms {
                out.add_term(m1.mul(m2), checked_mul(c1, c2));
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::zero(), |acc, p| acc + p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&m, &c)) in self.terms.iter().enumerate() {
            let mut vars = Vec::new();
            for (name, e) in [("q", m.q), ("t", m.t), ("z", m.z)] {
                match e {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    _ => vars.push(format!("{name}^{e}")),
                }
            }
            let abs = c.unsigned_abs();
            if idx == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else if c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    q: u32,
    t: u32,
    z: u32,
    c: i64,
}

/// Serialized as `[{"q":..,"t":..,"z":..,"c":..}, ...]` in canonical order.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(m, &c)| TermRepr {
            q: m.q,
            t: m.t,
            z: m.z,
            c,
        }))
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut p = Polynomial::zero();
        for term in raw {
            if term.c == 0 {
                return Err(D::Error::custom("zero coefficient in polynomial"));
            }
            let m = Monomial::new(term.q, term.t, term.z);
            if p.terms.contains_key(&m) {
                return Err(D::Error::custom("duplicate monomial in polynomial"));
            }
            p.terms.insert(m, term.c);
        }
        Ok(p)
    }
}
