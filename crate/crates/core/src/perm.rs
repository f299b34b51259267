//! Permutations, decorated permutations and their statistics.
//!
//! Permutations are one-line words `σ₁…σₙ` over `1..=n` stored as `&[u8]`;
//! positions are 1-based throughout. Where a statistic looks at `σ_{i-2}`
//! the implicit entry `σ₀ = 0` is used (classify, monot, inv3). The
//! classical statistics (maj, inv, î, 31-2) ignore it.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Checks that `values` is a permutation of `1..=values.len()`.
pub fn validate_permutation(values: &[u8]) -> Result<()> {
    let n = values.len();
    let mut seen = 0u64;
    for &v in values {
        if v == 0 || v as usize > n || n > 63 || seen & (1 << v) != 0 {
            return Err(Error::NotAPermutation {
                n,
                values: values.to_vec(),
            });
        }
        seen |= 1 << v;
    }
    Ok(())
}

/// A permutation of `1..=n` with a decoration flag on each position.
///
/// The sentinel `σ₀ = 0` is implicit and never decorated. Decorations are
/// kept as a bit mask, bit `i - 1` for position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedPermutation {
    values: Vec<u8>,
    decorated: u32,
}

impl DecoratedPermutation {
    pub fn new(values: Vec<u8>, decorated: u32) -> Result<Self> {
        validate_permutation(&values)?;
        if values.len() > 31 {
            return Err(Error::OutOfRange {
                name: "n",
                value: values.len() as i64,
                lo: 0,
                hi: 31,
            });
        }
        if decorated >> values.len() != 0 {
            return Err(Error::IndexOutOfRange {
                index: 32 - decorated.leading_zeros() as usize,
                lo: 1,
                hi: values.len(),
            });
        }
        Ok(DecoratedPermutation { values, decorated })
    }

    pub fn undecorated(values: Vec<u8>) -> Result<Self> {
        DecoratedPermutation::new(values, 0)
    }

    /// Builds from 1-based decorated positions.
    pub fn with_decorations(values: Vec<u8>, positions: &[usize]) -> Result<Self> {
        let n = values.len();
        let mut mask = 0u32;
        for &p in positions {
            if p == 0 || p > n {
                return Err(Error::IndexOutOfRange {
                    index: p,
                    lo: 1,
                    hi: n,
                });
            }
            mask |= 1 << (p - 1);
        }
        DecoratedPermutation::new(values, mask)
    }

    pub(crate) fn from_parts_unchecked(values: Vec<u8>, decorated: u32) -> Self {
        debug_assert!(validate_permutation(&values).is_ok());
        DecoratedPermutation { values, decorated }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `σ₁…σₙ` without the sentinel.
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// `σᵢ` for `0 ≤ i ≤ n`, with `σ₀ = 0`.
    pub fn at(&self, i: usize) -> u8 {
        if i == 0 {
            0
        } else {
            self.values[i - 1]
        }
    }

    /// Whether position `i` is decorated; the sentinel (`i = 0`) never is.
    pub fn is_decorated(&self, i: usize) -> bool {
        i != 0 && i <= self.values.len() && self.decorated & (1 << (i - 1)) != 0
    }

    pub fn decoration_mask(&self) -> u32 {
        self.decorated
    }

    /// Decorated positions, ascending, 1-based.
    pub fn decorated_positions(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.is_decorated(i)).collect()
    }

    /// Number of decorations, `dec(σ)`.
    pub fn dec(&self) -> usize {
        self.decorated.count_ones() as usize
    }

    pub fn strip_decorations(&self) -> DecoratedPermutation {
        DecoratedPermutation {
            values: self.values.clone(),
            decorated: 0,
        }
    }

    pub fn into_values(self) -> Vec<u8> {
        self.values
    }
}

/// `*` marks the following letter as decorated. Letters are single digits
/// when `n ≤ 9`; larger permutations are written space-separated.
impl fmt::Display for DecoratedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() > 9 { " " } else { "" };
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            if self.is_decorated(i + 1) {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for DecoratedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = s.trim();
        let tokens: Vec<String> = if trimmed.contains(char::is_whitespace) {
            trimmed.split_whitespace().map(str::to_string).collect()
        } else {
            let mut out = Vec::new();
            let mut pending = String::new();
            for c in trimmed.chars() {
                pending.push(c);
                if c != '*' {
                    out.push(std::mem::take(&mut pending));
                }
            }
            if !pending.is_empty() {
                return Err(err("dangling '*'"));
            }
            out
        };
        let mut values = Vec::with_capacity(tokens.len());
        let mut decorated = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            let (mark, digits) = match tok.strip_prefix('*') {
                Some(rest) => (true, rest),
                None => (false, tok.as_str()),
            };
            let v: u8 = digits.parse().map_err(|_| err("expected a number"))?;
            if mark {
                decorated.push(i + 1);
            }
            values.push(v);
        }
        DecoratedPermutation::with_decorations(values, &decorated).map_err(|e| err(&e.to_string()))
    }
}

impl Serialize for DecoratedPermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DecoratedPermutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shape of `(σ_{i-2}, σ_{i-1}, σ_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositionKind {
    DoubleAscent,
    DoubleDescent,
    Peak,
    Valley,
}

#[inline]
fn with_sentinel(sigma: &[u8], i: usize) -> u8 {
    if i == 0 {
        0
    } else {
        sigma[i - 1]
    }
}

#[inline]
fn kind_at(sigma: &[u8], i: usize) -> PositionKind {
    let (a, b, c) = (
        with_sentinel(sigma, i - 2),
        with_sentinel(sigma, i - 1),
        with_sentinel(sigma, i),
    );
    match (a < b, b < c) {
        (true, true) => PositionKind::DoubleAscent,
        (false, false) => PositionKind::DoubleDescent,
        (true, false) => PositionKind::Peak,
        (false, true) => PositionKind::Valley,
    }
}

/// Classifies position `i ∈ 2..=n`, reading `σ₀ = 0` when `i = 2`.
pub fn classify(sigma: &[u8], i: usize) -> Result<PositionKind> {
    if i < 2 || i > sigma.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: 2,
            hi: sigma.len(),
        });
    }
    Ok(kind_at(sigma, i))
}

/// Number of double ascents and double descents.
pub fn monot(sigma: &[u8]) -> usize {
    (2..=sigma.len())
        .filter(|&i| {
            matches!(
                kind_at(sigma, i),
                PositionKind::DoubleAscent | PositionKind::DoubleDescent
            )
        })
        .count()
}

/// Number of 3-inversions.
pub fn inv3(sigma: &[u8]) -> usize {
    let mut total = 0;
    for j in 2..=sigma.len() {
        let sj = sigma[j - 1];
        let prev = sigma[j - 2];
        let kind = kind_at(sigma, j);
        total += sigma[..j - 1]
            .iter()
            .filter(|&&si| match kind {
                PositionKind::DoubleAscent => prev < si && si < sj,
                PositionKind::DoubleDescent => prev > si && si > sj,
                PositionKind::Peak => si > sj,
                PositionKind::Valley => si < sj,
            })
            .count();
    }
    total
}

/// Sum of descent positions.
pub fn maj(sigma: &[u8]) -> usize {
    sigma
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > w[1])
        .map(|(i, _)| i + 1)
        .sum()
}

/// Major index of the reversed word.
pub fn revmaj(sigma: &[u8]) -> usize {
    let n = sigma.len();
    // A descent of the reverse at position p is an ascent of σ at n - p.
    sigma
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < w[1])
        .map(|(i, _)| n - (i + 1))
        .sum()
}

pub fn inv(sigma: &[u8]) -> usize {
    sigma
        .iter()
        .enumerate()
        .map(|(i, &a)| sigma[i + 1..].iter().filter(|&&b| a > b).count())
        .sum()
}

/// Alternating inversion count `î`: odd positions count later smaller
/// values, even positions later larger ones.
pub fn chebikin_ihat(sigma: &[u8]) -> usize {
    let n = sigma.len();
    (0..n.saturating_sub(1))
        .map(|i| {
            let odd = i % 2 == 0; // position i + 1
            sigma[i + 1..]
                .iter()
                .filter(|&&b| if odd { sigma[i] > b } else { sigma[i] < b })
                .count()
        })
        .sum()
}

/// Occurrences of the vincular pattern 31-2: `σ_{i+1} < σ_j < σ_i`, `j > i + 1`.
pub fn count_31_2(sigma: &[u8]) -> usize {
    let n = sigma.len();
    let mut total = 0;
    for i in 0..n.saturating_sub(2) {
        let (a, b) = (sigma[i], sigma[i + 1]);
        if a > b {
            total += sigma[i + 2..].iter().filter(|&&c| b < c && c < a).count();
        }
    }
    total
}

/// `σ₁ > σ₂ < σ₃ > ⋯`.
pub fn is_alternating(sigma: &[u8]) -> bool {
    sigma
        .windows(2)
        .enumerate()
        .all(|(i, w)| if i % 2 == 0 { w[0] > w[1] } else { w[0] < w[1] })
}

/// Euler (up/down) number `E_n` from the Seidel–Entringer triangle.
pub fn euler_number(n: usize) -> u128 {
    let mut row: Vec<u128> = vec![1];
    for m in 1..=n {
        let mut next = vec![0u128; m + 1];
        for k in 1..=m {
            next[k] = next[k - 1]
                .checked_add(row[m - k])
                .expect("Euler number overflow");
        }
        row = next;
    }
    row[n]
}

/// `E_n(t) = Σ_{σ alternating} t^{31-2(σ)}`.
pub fn euler_poly(n: usize) -> Polynomial {
    par_fold_permutations(
        n,
        Polynomial::zero,
        |mut acc, sigma| {
            if is_alternating(sigma) {
                acc.add_term(crate::poly::Monomial::t(count_31_2(sigma) as u32), 1);
            }
            acc
        },
        |a, b| a + b,
    )
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (1..=n as u8).permutations(n)
}

/// Permutations of `1..=n` starting with `first`, in lexicographic order.
pub fn permutations_starting_with(n: usize, first: u8) -> impl Iterator<Item = Vec<u8>> {
    let rest: Vec<u8> = (1..=n as u8).filter(|&v| v != first).collect();
    let k = rest.len();
    rest.into_iter().permutations(k).map(move |tail| {
        let mut w = Vec::with_capacity(n);
        w.push(first);
        w.extend(tail);
        w
    })
}

/// Folds over `S_n` in parallel, one task per first letter. `reduce` must
/// be commutative and associative for the result to be schedule independent.
pub fn par_fold_permutations<A, ID, F, R>(n: usize, identity: ID, fold: F, reduce: R) -> A
where
    A: Send,
    ID: Fn() -> A + Sync + Send,
    F: Fn(A, &[u8]) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    if n == 0 {
        return fold(identity(), &[]);
    }
    (1..=n as u8)
        .into_par_iter()
        .map(|first| permutations_starting_with(n, first).fold(identity(), |acc, w| fold(acc, &w)))
        .reduce(&identity, &reduce)
}

/// Relative order of `word`, as a permutation of `1..=len`.
pub fn standardize(word: &[u8]) -> Vec<u8> {
    word.iter()
        .map(|&v| 1 + word.iter().filter(|&&u| u < v).count() as u8)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&[2, 1, 3], 2).unwrap(), PositionKind::Peak);
        assert_eq!(classify(&[1, 2, 3], 3).unwrap(), PositionKind::DoubleAscent);
        assert_eq!(
            classify(&[3, 2, 1], 3).unwrap(),
            PositionKind::DoubleDescent
        );
        assert_eq!(classify(&[2, 1, 3], 3).unwrap(), PositionKind::Valley);
        assert!(classify(&[2, 1, 3], 1).is_err());
        assert!(classify(&[2, 1, 3], 4).is_err());
    }

    #[test]
    fn monot_examples() {
        assert_eq!(monot(&[1, 2, 3]), 2);
        assert_eq!(monot(&[2, 1, 3]), 0);
        assert_eq!(monot(&[1, 3, 2]), 1);
    }

    #[test]
    fn inv3_matches_the_size_three_table() {
        assert_eq!(inv3(&[1, 2, 3]), 0);
        assert_eq!(inv3(&[1, 3, 2]), 1);
        assert_eq!(inv3(&[3, 2, 1]), 1);
        assert_eq!(inv3(&[2, 3, 1]), 2);
        assert_eq!(inv3(&[3, 1, 2]), 2);
        assert_eq!(inv3(&[2, 1, 3]), 3);
    }

    #[test]
    fn classical_statistics() {
        assert_eq!(revmaj(&[1, 2, 3]), 3);
        assert_eq!(revmaj(&[3, 2, 1]), 0);
        assert_eq!(maj(&[2, 1, 3]), 1);
        assert_eq!(inv(&[2, 1, 3]), 1);
        for sigma in permutations(6) {
            let mut rev = sigma.clone();
            rev.reverse();
            assert_eq!(revmaj(&sigma), maj(&rev));
        }
    }

    #[test]
    fn ihat_and_patterns() {
        assert_eq!(chebikin_ihat(&[1, 2, 3]), 1);
        assert_eq!(chebikin_ihat(&[2, 1]), 1);
        assert_eq!(chebikin_ihat(&[1]), 0);
        assert_eq!(count_31_2(&[2, 1, 3]), 0);
        assert_eq!(count_31_2(&[3, 1, 2]), 1);
        assert_eq!(count_31_2(&[4, 1, 3, 2]), 2);
        assert_eq!(count_31_2(&[1, 2, 3, 4]), 0);
    }

    #[test]
    fn alternating() {
        assert!(is_alternating(&[2, 1, 3]));
        assert!(is_alternating(&[3, 1, 2]));
        assert!(!is_alternating(&[1, 2, 3]));
        assert!(is_alternating(&[1]));
        for n in 1..=7 {
            for sigma in permutations(n) {
                assert_eq!(is_alternating(&sigma), monot(&sigma) == 0, "{sigma:?}");
            }
        }
    }

    #[test]
    fn euler_numbers_against_enumeration() {
        // A000111
        let expected = [1u128, 1, 1, 2, 5, 16, 61, 272, 1385, 7936];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(euler_number(n), e);
        }
        for n in 0..=9 {
            let count = permutations(n).filter(|s| is_alternating(s)).count();
            assert_eq!(count as u128, euler_number(n));
        }
    }

    #[test]
    fn euler_poly_examples() {
        assert_eq!(euler_poly(3), Polynomial::one() + Polynomial::t_pow(1));
        assert_eq!(euler_poly(1), Polynomial::one());
        for n in 1..=8 {
            assert_eq!(euler_poly(n).coefficient_sum() as u128, euler_number(n));
        }
    }

    /// The pattern written as `σ_j > σ_i > σ_{i+1}` (really 21-3) has the
    /// same total over alternating permutations only up to `n = 4`.
    fn pattern_21_3(sigma: &[u8]) -> usize {
        let n = sigma.len();
        (0..n.saturating_sub(2))
            .map(|i| {
                let (a, b) = (sigma[i], sigma[i + 1]);
                if a > b {
                    sigma[i + 2..].iter().filter(|&&c| c > a).count()
                } else {
                    0
                }
            })
            .sum()
    }

    fn alternating_distribution(n: usize, stat: impl Fn(&[u8]) -> usize) -> Polynomial {
        let mut p = Polynomial::zero();
        for w in permutations(n).filter(|w| is_alternating(w)) {
            p.add_term(crate::poly::Monomial::t(stat(&w) as u32), 1);
        }
        p
    }

    #[test]
    fn alternating_statistics() {
        for n in 1..=8 {
            let shift = n * n / 4;
            for w in permutations(n).filter(|w| is_alternating(w)) {
                assert_eq!(shift + count_31_2(&w), chebikin_ihat(&w), "{w:?}");
            }
            let by_inv3 = alternating_distribution(n, inv3);
            assert_eq!(by_inv3, alternating_distribution(n, chebikin_ihat));
            assert_eq!(by_inv3, &Polynomial::t_pow(shift as u32) * &euler_poly(n));
        }
        // inv3 and î agree on alternating permutations only in distribution.
        assert_eq!((inv3(&[2, 1, 3]), chebikin_ihat(&[2, 1, 3])), (3, 2));
        assert_eq!((inv3(&[3, 1, 2]), chebikin_ihat(&[3, 1, 2])), (2, 3));
        let literal = alternating_distribution(5, pattern_21_3);
        assert_ne!(
            &Polynomial::t_pow(6) * &literal,
            alternating_distribution(5, inv3)
        );
        assert_eq!(literal.coefficient_sum(), 16);
    }

    #[test]
    fn parse_and_display() {
        let p: DecoratedPermutation = "*8*63*274*15".parse().unwrap();
        assert_eq!(p.values(), &[8, 6, 3, 2, 7, 4, 1, 5]);
        assert_eq!(p.decorated_positions(), vec![1, 2, 4, 7]);
        assert_eq!(p.to_string(), "*8*63*274*15");
        assert!("*8*6*".parse::<DecoratedPermutation>().is_err());
        assert!("112".parse::<DecoratedPermutation>().is_err());
        let big: DecoratedPermutation = "10 *2 3 4 5 6 7 8 9 1".parse().unwrap();
        assert_eq!(big.to_string(), "10 *2 3 4 5 6 7 8 9 1");
        assert!(!p.is_decorated(0));
    }

    #[test]
    fn standardize_keeps_relative_order() {
        assert_eq!(standardize(&[5, 2, 9]), vec![2, 1, 3]);
    }

    #[test]
    fn parallel_fold_counts() {
        let count = par_fold_permutations(6, || 0usize, |a, _| a + 1, |a, b| a + b);
        assert_eq!(count, 720);
        assert_eq!(
            par_fold_permutations(0, || 0usize, |a, _| a + 1, |a, b| a + b),
            1
        );
    }
}
