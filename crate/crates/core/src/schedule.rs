//! Cyclic runs and schedule numbers of decorated permutations.
//!
//! All functions work on the word `0 τ₁ … τₙ`: index 0 is the sentinel,
//! which takes part in runs and counts as an undecorated value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{permutations, DecoratedPermutation};

/// Schedule numbers `s₁ … sₙ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule(pub Vec<usize>);

impl Schedule {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&s| s > 0)
    }

    /// True when the set of values is exactly `{1, …, j}` for some `j ≥ 1`.
    pub fn is_initial_interval(&self) -> bool {
        let max = self.0.iter().copied().max().unwrap_or(0);
        max >= 1 && (1..=max).all(|v| self.0.contains(&v)) && self.is_positive()
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

fn check_index(sigma: &DecoratedPermutation, i: usize) -> Result<()> {
    if i > sigma.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: 0,
            hi: sigma.len(),
        });
    }
    Ok(())
}

/// Whether `σ_i … σ_j` becomes strictly decreasing after adding some `k`
/// modulo `n + 1` (representatives in `0..=n`).
pub fn is_cyclic_run(sigma: &DecoratedPermutation, i: usize, j: usize) -> Result<bool> {
    check_index(sigma, j)?;
    if i > j {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: 0,
            hi: j,
        });
    }
    Ok(cyclic_run(sigma, i, j))
}

fn cyclic_run(sigma: &DecoratedPermutation, i: usize, j: usize) -> bool {
    let m = sigma.len() as u32 + 1;
    (0..m).any(|k| (i..j).all(|p| (sigma.at(p) as u32 + k) % m > (sigma.at(p + 1) as u32 + k) % m))
}

/// The left-maximal cyclic run ending at `j`, as `(start, j)`.
pub fn left_maximal_run(sigma: &DecoratedPermutation, j: usize) -> Result<(usize, usize)> {
    check_index(sigma, j)?;
    Ok((left_start(sigma, j), j))
}

/// The right-maximal cyclic run starting at `i`, as `(i, end)`.
pub fn right_maximal_run(sigma: &DecoratedPermutation, i: usize) -> Result<(usize, usize)> {
    check_index(sigma, i)?;
    Ok((i, right_end(sigma, i)))
}

/// Cyclic distance stepping down from `σ_p` to `σ_{p+1}`, in `1..=n`.
///
/// A stretch is a cyclic run exactly when its gaps add up to less than a
/// full turn `n + 1`, which lets maximal runs grow in linear time.
fn gap(sigma: &DecoratedPermutation, p: usize) -> usize {
    let m = sigma.len() + 1;
    (sigma.at(p) as usize + m - sigma.at(p + 1) as usize) % m
}

fn left_start(sigma: &DecoratedPermutation, j: usize) -> usize {
    let m = sigma.len() + 1;
    let (mut start, mut total) = (j, 0);
    while start > 0 && total + gap(sigma, start - 1) < m {
        total += gap(sigma, start - 1);
        start -= 1;
    }
    start
}

fn right_end(sigma: &DecoratedPermutation, i: usize) -> usize {
    let m = sigma.len() + 1;
    let (mut end, mut total) = (i, 0);
    while end < sigma.len() && total + gap(sigma, end) < m {
        total += gap(sigma, end);
        end += 1;
    }
    end
}

/// Schedule numbers from the decreasing runs `r₀ = (0), r₁, r₂, …` of
/// `0 τ₁ … τₙ`.
pub fn schedule_by_runs(tau: &DecoratedPermutation) -> Schedule {
    let n = tau.len();
    // run_of[p] = index of the decreasing run containing position p
    let mut run_of = vec![0usize; n + 1];
    for p in 1..=n {
        run_of[p] = run_of[p - 1] + usize::from(tau.at(p) > tau.at(p - 1));
    }
    let runs = run_of[n] + 1;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); runs];
    for (p, &r) in run_of.iter().enumerate() {
        members[r].push(p);
    }
    let undecorated_in = |r: usize, keep: &dyn Fn(u8) -> bool| -> usize {
        members
            .get(r)
            .map(|m| {
                m.iter()
                    .filter(|&&p| !tau.is_decorated(p) && keep(tau.at(p)))
                    .count()
            })
            .unwrap_or(0)
    };
    let s = (1..=n)
        .map(|i| {
            let v = tau.at(i);
            let r = run_of[i];
            if tau.is_decorated(i) {
                undecorated_in(r, &|x| x < v) + undecorated_in(r + 1, &|x| x > v)
            } else {
                undecorated_in(r, &|x| x > v) + undecorated_in(r - 1, &|x| x < v)
            }
        })
        .collect();
    Schedule(s)
}

/// Schedule numbers from maximal cyclic runs: an undecorated entry counts
/// the other undecorated values in the left-maximal run ending at it, a
/// decorated entry those in the right-maximal run starting at it.
pub fn schedule_by_cyclic_runs(tau: &DecoratedPermutation) -> Schedule {
    let n = tau.len();
    let count = |range: std::ops::RangeInclusive<usize>, me: usize| {
        range.filter(|&p| p != me && !tau.is_decorated(p)).count()
    };
    let s = (1..=n)
        .map(|i| {
            if tau.is_decorated(i) {
                count(i..=right_end(tau, i), i)
            } else {
                count(left_start(tau, i)..=i, i)
            }
        })
        .collect();
    Schedule(s)
}

/// The unique decoration of `sigma` whose schedule is `1ⁿ`.
///
/// Walks right to left: from `i₁ = n`, each next index is the start of the
/// left-maximal cyclic run ending at the current one, stopping at the
/// sentinel. Visited positions stay undecorated, all others are decorated.
pub fn decorate_1n(sigma: &[u8]) -> Result<DecoratedPermutation> {
    let plain = DecoratedPermutation::undecorated(sigma.to_vec())?;
    let n = sigma.len();
    let mut keep = 0u32;
    let mut i = n;
    while i > 0 {
        keep |= 1 << (i - 1);
        i = left_start(&plain, i);
    }
    let mask = if n == 0 { 0 } else { !keep & ((1u32 << n) - 1) };
    DecoratedPermutation::new(plain.into_values(), mask)
}

/// `S_n^{•k}(1ⁿ)`, or all of `S_n^•(1ⁿ)` when `k` is `None`, ordered by the
/// underlying permutation.
pub fn enumerate_sched_1n(
    n: usize,
    k: Option<usize>,
) -> impl Iterator<Item = DecoratedPermutation> {
    permutations(n)
        .map(|sigma| decorate_1n(&sigma).expect("permutations are valid"))
        .filter(move |tau| k.is_none_or(|k| tau.dec() == k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::euler_number;

    fn dp(s: &str) -> DecoratedPermutation {
        s.parse().unwrap()
    }

    /// The word 0649751832 from the cyclic-run examples, without its sentinel.
    fn example_word() -> DecoratedPermutation {
        dp("649751832")
    }

    #[test]
    fn cyclic_run_examples() {
        let s = example_word();
        // positions: 0:0 1:6 2:4 3:9 4:7 5:5 6:1 7:8 8:3 9:2
        assert!(is_cyclic_run(&s, 4, 7).unwrap()); // 7518
        assert!(is_cyclic_run(&s, 0, 2).unwrap()); // 064
        assert!(is_cyclic_run(&s, 1, 4).unwrap()); // 6497
        assert!(is_cyclic_run(&s, 6, 9).unwrap()); // 1832
        for i in 0..=9 {
            assert!(is_cyclic_run(&s, i, i).unwrap());
        }
        assert!(!is_cyclic_run(&dp("123"), 0, 3).unwrap());
        assert!(is_cyclic_run(&s, 3, 2).is_err());
        assert!(is_cyclic_run(&s, 0, 10).is_err());
    }

    #[test]
    fn maximal_run_examples() {
        let s = example_word();
        assert_eq!(right_maximal_run(&s, 0).unwrap(), (0, 2)); // 064
        assert_eq!(right_maximal_run(&s, 1).unwrap(), (1, 4)); // 6497
        assert_eq!(right_maximal_run(&s, 4).unwrap(), (4, 7)); // 7518
        assert_eq!(left_maximal_run(&s, 9).unwrap(), (6, 9)); // 1832
        assert_eq!(left_maximal_run(&s, 4).unwrap(), (1, 4)); // 6497

        let fig = dp("*8*63*274*15");
        // run starting at *6 (position 2) is *6 3 *2 7
        assert_eq!(right_maximal_run(&fig, 2).unwrap(), (2, 5));
        // run ending at 4 (position 6) is 3 *2 7 4
        assert_eq!(left_maximal_run(&fig, 6).unwrap(), (3, 6));
    }

    #[test]
    fn schedule_examples() {
        let fig = dp("*8*63*274*15");
        let expected = Schedule(vec![1, 2, 1, 2, 1, 2, 1, 1]);
        assert_eq!(schedule_by_runs(&fig), expected);
        assert_eq!(schedule_by_cyclic_runs(&fig), expected);
        assert_eq!(schedule_by_runs(&dp("123")).0, vec![1, 1, 1]);
        assert_eq!(schedule_by_cyclic_runs(&dp("123")).0, vec![1, 1, 1]);
        assert_eq!(schedule_by_runs(&dp("*21")).0, vec![1, 1]);
        assert_eq!(schedule_by_cyclic_runs(&dp("*21")).0, vec![1, 1]);
        // 0 2 1 is itself a cyclic run, so the final 1 sees both 0 and 2.
        assert_eq!(schedule_by_cyclic_runs(&dp("21")).0, vec![1, 2]);
        assert_eq!(schedule_by_runs(&dp("21")).0, vec![1, 2]);
        let all = dp("*3*1*2");
        assert!(schedule_by_runs(&all).0.contains(&0));
        assert!(schedule_by_cyclic_runs(&all).0.contains(&0));
        assert_eq!(expected.to_string(), "1 2 1 2 1 2 1 1");
    }

    #[test]
    fn decorate_examples() {
        assert_eq!(decorate_1n(&[1, 2, 3]).unwrap().to_string(), "123");
        assert_eq!(decorate_1n(&[3, 2, 1]).unwrap().to_string(), "*3*21");
        assert_eq!(decorate_1n(&[3, 1, 2]).unwrap().to_string(), "*312");
        assert!(decorate_1n(&[1, 1]).is_err());
    }

    #[test]
    fn sched_1n_enumeration() {
        let two: Vec<String> = enumerate_sched_1n(2, None).map(|t| t.to_string()).collect();
        assert_eq!(two, vec!["12", "*21"]);
        let three: Vec<String> = enumerate_sched_1n(3, Some(0))
            .map(|t| t.to_string())
            .collect();
        assert_eq!(three, vec!["123", "231"]);
        for n in 1..=7 {
            assert_eq!(
                enumerate_sched_1n(n, None).count(),
                (1..=n).product::<usize>()
            );
        }
        for n in 0..=8 {
            assert_eq!(
                enumerate_sched_1n(n, Some(0)).count() as u128,
                euler_number(n)
            );
        }
    }

    #[test]
    fn maximal_runs_agree_with_definition() {
        for n in 1..=6usize {
            for w in permutations(n) {
                let s = DecoratedPermutation::undecorated(w).unwrap();
                for j in 0..=n {
                    let start = (0..=j).find(|&i| cyclic_run(&s, i, j)).unwrap();
                    assert_eq!(left_start(&s, j), start);
                    let end = (j..=n).rev().find(|&e| cyclic_run(&s, j, e)).unwrap();
                    assert_eq!(right_end(&s, j), end);
                }
            }
        }
    }

    #[test]
    fn shift_characterisation_matches_definition() {
        // A run is cyclic iff the cyclic gaps between consecutive entries sum to
        // less than a full turn.
        for n in 1..=5usize {
            for w in permutations(n) {
                let s = DecoratedPermutation::undecorated(w).unwrap();
                let m = n + 1;
                for i in 0..=n {
                    for j in i..=n {
                        let gaps: usize = (i..j)
                            .map(|p| (s.at(p) as usize + m - s.at(p + 1) as usize) % m)
                            .sum();
                        assert_eq!(cyclic_run(&s, i, j), gaps < m);
                    }
                }
            }
        }
    }
}
