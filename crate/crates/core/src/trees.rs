//! The two generating trees and the bijection between them.
//!
//! `T₁` grows decorated permutations of schedule `1ⁿ` by rotation
//! (`δₖ`); `T₂` grows plain permutations by appending a value (`η_l`),
//! with children ordered so that the `k`-th child adds `n + 1 - k` to inv3
//! (`δ̃ₖ`). In `T₁` the `k`-th child adds `n + 1 - k` to revmaj, so
//! matching addresses gives `φ : S_n^•(1ⁿ) → S_n` with revmaj ↦ inv3 and
//! dec ↦ monot.
//!
//! Both roots are the permutation `1`. A node at level `n` is addressed by
//! the branch choices `k₁, …, k_{n-1}` with `kᵢ ∈ 1..=i+1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{inv3, standardize, validate_permutation, DecoratedPermutation};
use crate::schedule::schedule_by_cyclic_runs;

/// Branch choices from the root down to a node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeAddress(pub Vec<usize>);

impl TreeAddress {
    /// Level of the addressed node (the root is level 1).
    pub fn level(&self) -> usize {
        self.0.len() + 1
    }

    pub fn is_valid(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &k)| (1..=i + 2).contains(&k))
    }

    /// Every address of level `n`, lexicographic.
    pub fn all(n: usize) -> Vec<TreeAddress> {
        let mut out = vec![TreeAddress(Vec::new())];
        for level in 1..n {
            out = out
                .into_iter()
                .flat_map(|a| {
                    (1..=level + 1).map(move |k| {
                        let mut v = a.0.clone();
                        v.push(k);
                        TreeAddress(v)
                    })
                })
                .collect();
        }
        out
    }
}

fn check_branch(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n + 1 {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as i64,
            lo: 1,
            hi: n as i64 + 1,
        });
    }
    Ok(())
}

/// `k + τ`: prepend `k`, then shift every letter by `k` modulo `n + 1`
/// with representatives in `1..=n+1`.
pub fn rotate(tau: &[u8], k: usize) -> Result<Vec<u8>> {
    validate_permutation(tau)?;
    let n = tau.len();
    check_branch(k, n)?;
    Ok(rotate_unchecked(tau, k))
}

fn rotate_unchecked(tau: &[u8], k: usize) -> Vec<u8> {
    let m = tau.len() + 1;
    std::iter::once(k as u8)
        .chain(tau.iter().map(|&v| ((k + v as usize - 1) % m + 1) as u8))
        .collect()
}

fn ensure_schedule_one(tau: &DecoratedPermutation) -> Result<()> {
    if tau.is_empty() || !schedule_by_cyclic_runs(tau).is_all_ones() {
        return Err(Error::NotScheduleOne(tau.to_string()));
    }
    Ok(())
}

/// `a(τ)`: value of the first undecorated letter.
pub fn t1_attr(tau: &DecoratedPermutation) -> Result<u8> {
    (1..=tau.len())
        .find(|&i| !tau.is_decorated(i))
        .map(|i| tau.at(i))
        .ok_or_else(|| Error::NotScheduleOne(tau.to_string()))
}

/// `δₖ(τ)`, the `k`-th child of `τ` in `T₁`.
pub fn t1_descendant(tau: &DecoratedPermutation, k: usize) -> Result<DecoratedPermutation> {
    ensure_schedule_one(tau)?;
    check_branch(k, tau.len())?;
    Ok(t1_child(tau, k))
}

fn t1_child(tau: &DecoratedPermutation, k: usize) -> DecoratedPermutation {
    let n = tau.len();
    let a = t1_attr(tau).expect("schedule 1^n has an undecorated letter") as usize;
    let values = rotate_unchecked(tau.values(), k);
    let mut mask = tau.decoration_mask() << 1;
    if k > n + 1 - a {
        mask |= 1;
    }
    DecoratedPermutation::from_parts_unchecked(values, mask)
}

/// Inverse of one `T₁` step: the parent and the branch `k = σ₁`.
fn t1_parent(sigma: &DecoratedPermutation) -> (DecoratedPermutation, usize) {
    let m = sigma.len();
    let k = sigma.at(1) as usize;
    let values = sigma.values()[1..]
        .iter()
        .map(|&v| ((v as usize + m - k) % m) as u8)
        .collect();
    let parent = DecoratedPermutation::from_parts_unchecked(values, sigma.decoration_mask() >> 1);
    (parent, k)
}

/// Address of `τ` in `T₁`.
pub fn t1_address(tau: &DecoratedPermutation) -> Result<TreeAddress> {
    ensure_schedule_one(tau)?;
    let mut ks = Vec::with_capacity(tau.len().saturating_sub(1));
    let mut node = tau.clone();
    while node.len() > 1 {
        let (parent, k) = t1_parent(&node);
        ks.push(k);
        node = parent;
    }
    ks.reverse();
    Ok(TreeAddress(ks))
}

/// The `T₁` node at `address`.
pub fn t1_node(address: &TreeAddress) -> Result<DecoratedPermutation> {
    let mut node = DecoratedPermutation::from_parts_unchecked(vec![1], 0);
    for &k in &address.0 {
        check_branch(k, node.len())?;
        node = t1_child(&node, k);
    }
    Ok(node)
}

/// Level `n` of `T₁`, in address order.
pub fn t1_level(n: usize) -> Vec<DecoratedPermutation> {
    let mut level = vec![DecoratedPermutation::from_parts_unchecked(vec![1], 0)];
    for size in 1..n {
        level = level
            .iter()
            .flat_map(|tau| (1..=size + 1).map(move |k| t1_child(tau, k)))
            .collect();
    }
    level
}

/// `η_l(σ)`: append `l`, shifting the letters `≥ l` up by one.
pub fn t2_insert(sigma: &[u8], l: usize) -> Result<Vec<u8>> {
    validate_permutation(sigma)?;
    check_branch(l, sigma.len())?;
    Ok(insert_unchecked(sigma, l))
}

fn insert_unchecked(sigma: &[u8], l: usize) -> Vec<u8> {
    let l = l as u8;
    sigma
        .iter()
        .map(|&v| v + u8::from(v >= l))
        .chain(std::iter::once(l))
        .collect()
}

fn ends_with_ascent(sigma: &[u8]) -> bool {
    let n = sigma.len();
    let prev = if n >= 2 { sigma[n - 2] } else { 0 };
    prev < sigma[n - 1]
}

/// `ã(σ)`: `n + 1 - σₙ` after an ascent, `σₙ` after a descent (with
/// `σ₀ = 0` when `n = 1`).
pub fn t2_attr(sigma: &[u8]) -> Result<usize> {
    validate_permutation(sigma)?;
    let n = sigma.len();
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let last = sigma[n - 1] as usize;
    Ok(if ends_with_ascent(sigma) {
        n + 1 - last
    } else {
        last
    })
}

/// `ψ(l) = inv3(η_l(σ)) - inv3(σ)`, by the closed-form cases.
pub fn psi(sigma: &[u8], l: usize) -> Result<usize> {
    validate_permutation(sigma)?;
    check_branch(l, sigma.len())?;
    Ok(psi_unchecked(sigma, l))
}

fn psi_unchecked(sigma: &[u8], l: usize) -> usize {
    let n = sigma.len();
    if n == 0 {
        return 0;
    }
    let last = sigma[n - 1] as usize;
    match (ends_with_ascent(sigma), l > last) {
        (true, true) => l - last - 1,
        (true, false) => n + 1 - l,
        (false, false) => last - l,
        (false, true) => l - 1,
    }
}

/// `l` such that `η_l(σ)` is the `k`-th child of `σ` in `T₂`.
fn t2_branch_value(sigma: &[u8], k: usize) -> usize {
    let n = sigma.len();
    let target = n + 1 - k;
    (1..=n + 1)
        .find(|&l| psi_unchecked(sigma, l) == target)
        .expect("psi is a bijection onto 0..=n")
}

/// `δ̃ₖ(σ)`: the child `η_l(σ)` with `ψ(l) = n + 1 - k`.
pub fn t2_descendant(sigma: &[u8], k: usize) -> Result<Vec<u8>> {
    validate_permutation(sigma)?;
    check_branch(k, sigma.len())?;
    Ok(insert_unchecked(sigma, t2_branch_value(sigma, k)))
}

/// Address of `σ` in `T₂`.
pub fn t2_address(sigma: &[u8]) -> Result<TreeAddress> {
    validate_permutation(sigma)?;
    if sigma.is_empty() {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let mut ks = Vec::with_capacity(sigma.len() - 1);
    let mut node = sigma.to_vec();
    while node.len() > 1 {
        let n = node.len() - 1;
        let l = node[n] as usize;
        let parent = standardize(&node[..n]);
        ks.push(n + 1 - psi_unchecked(&parent, l));
        node = parent;
    }
    ks.reverse();
    Ok(TreeAddress(ks))
}

/// The `T₂` node at `address`.
pub fn t2_node(address: &TreeAddress) -> Result<Vec<u8>> {
    let mut node = vec![1u8];
    for &k in &address.0 {
        check_branch(k, node.len())?;
        let l = t2_branch_value(&node, k);
        node = insert_unchecked(&node, l);
    }
    Ok(node)
}

/// Level `n` of `T₂`, in address order.
pub fn t2_level(n: usize) -> Vec<Vec<u8>> {
    let mut level = vec![vec![1u8]];
    for size in 1..n {
        level = level
            .iter()
            .flat_map(|s| (1..=size + 1).map(move |k| insert_unchecked(s, t2_branch_value(s, k))))
            .collect();
    }
    level
}

/// `φ(τ)`: the `T₂` node at `τ`'s `T₁` address.
pub fn phi(tau: &DecoratedPermutation) -> Result<Vec<u8>> {
    t2_node(&t1_address(tau)?)
}

/// `φ⁻¹(σ)`: the `T₁` node at `σ`'s `T₂` address.
pub fn phi_inverse(sigma: &[u8]) -> Result<DecoratedPermutation> {
    t1_node(&t2_address(sigma)?)
}

/// Direct `inv3` difference, used to cross-check [`psi`].
pub fn psi_by_inv3(sigma: &[u8], l: usize) -> Result<usize> {
    let child = t2_insert(sigma, l)?;
    Ok(inv3(&child) - inv3(sigma))
}
