//! Exhaustive checks of the `q = -1` identities, each returning a
//! [`CheckReport`].
//!
//! Every check compares two exact polynomials, or two counts wrapped as
//! constant polynomials for the structural predicates. Parallel folds use
//! commutative merges, so reports do not depend on the thread count.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::paths::{
    diagonal_word, dinv, enumerate_all_decorated, enumerate_dyck, enumerate_labellings,
    DecoratedLabelledPath, DyckPath, PathRecord,
};
use crate::perm::{
    chebikin_ihat, count_31_2, euler_number, euler_poly, inv3, is_alternating, monot,
    par_fold_permutations, permutations, revmaj, DecoratedPermutation,
};
use crate::poly::{Monomial, Polynomial};
use crate::schedule::{
    decorate_1n, enumerate_sched_1n, schedule_by_cyclic_runs, schedule_by_runs, Schedule,
};
use crate::trees::{phi, phi_inverse, psi, psi_by_inv3};

/// Parameters a check ran with. `k` and `j` appear only when restricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Params {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
}

impl Params {
    pub fn n(n: usize) -> Self {
        Params {
            n,
            k: None,
            j: None,
        }
    }
}

/// Outcome of one check. `witness` is present exactly when the check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub params: Params,
    pub passed: bool,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
    pub witness: Option<Value>,
    pub elapsed: Duration,
}

impl CheckReport {
    fn build(
        name: &str,
        params: Params,
        lhs: Polynomial,
        rhs: Polynomial,
        witness: Option<Value>,
        start: Instant,
    ) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            params,
            passed: witness.is_none(),
            lhs,
            rhs,
            witness,
            elapsed: start.elapsed(),
        }
    }

    /// Equality check; the witness is the first monomial where the sides differ.
    fn equality(
        name: &str,
        params: Params,
        lhs: Polynomial,
        rhs: Polynomial,
        start: Instant,
    ) -> Self {
        let witness = first_difference(&lhs, &rhs);
        CheckReport::build(name, params, lhs, rhs, witness, start)
    }

    /// JSON form `{name, params, passed, lhs, rhs, witness, elapsed_ms}`.
    /// Without `timings` the elapsed time is `null` so output is reproducible.
    pub fn to_json(&self, timings: bool) -> Value {
        json!({
            "name": self.name,
            "params": self.params,
            "passed": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "witness": self.witness,
            "elapsed_ms": if timings {
                json!(self.elapsed.as_secs_f64() * 1000.0)
            } else {
                Value::Null
            },
        })
    }
}

fn first_difference(lhs: &Polynomial, rhs: &Polynomial) -> Option<Value> {
    if lhs == rhs {
        return None;
    }
    let diff = lhs - rhs;
    let (m, _) = diff.terms().next().expect("nonzero difference");
    Some(json!({
        "monomial": {"q": m.q, "t": m.t, "z": m.z},
        "lhs": lhs.coeff(m),
        "rhs": rhs.coeff(m),
    }))
}

fn count(c: usize) -> Polynomial {
    Polynomial::constant(c as i64)
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Counts of decorated labelled paths of size `n` by `(dec, area, dinv)`.
struct PathTally {
    stride: usize,
    counts: Vec<i64>,
}

impl PathTally {
    fn new(n: usize) -> Self {
        let stride = binom2(n) + 1;
        PathTally {
            stride,
            counts: vec![0; (n + 1) * stride * stride],
        }
    }

    fn bump(&mut self, dec: usize, area: usize, dinv: usize) {
        self.counts[(dec * self.stride + area) * self.stride + dinv] += 1;
    }

    fn merge(mut self, other: PathTally) -> PathTally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }

    fn entries(&self) -> impl Iterator<Item = (u32, u32, u32, i64)> + '_ {
        let s = self.stride;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(idx, &c)| {
                let (dec, rest) = (idx / (s * s), idx % (s * s));
                ((rest % s) as u32, (rest / s) as u32, dec as u32, c)
            })
    }

    /// `Σ q^dinv t^area z^dec`.
    fn polynomial(&self) -> Polynomial {
        let mut p = Polynomial::zero();
        for (dinv, area, dec, c) in self.entries() {
            p.add_term(Monomial::new(dinv, area, dec), c);
        }
        p
    }
}

/// Per-step data of one labelled path: the contractible-valley mask and,
/// for each step, how many dinv pairs it opens as the smaller index.
fn pair_counts(area: &[u8], labels: &[u8]) -> (u32, Vec<usize>) {
    let n = area.len();
    let mut cv = 0u32;
    for i in 1..n {
        if area[i - 1] > area[i] || (area[i - 1] == area[i] && labels[i - 1] < labels[i]) {
            cv |= 1 << i;
        }
    }
    let c = (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| {
                    (area[i] == area[j] && labels[i] < labels[j])
                        || (area[i] == area[j] + 1 && labels[i] > labels[j])
                })
                .count()
        })
        .collect();
    (cv, c)
}

/// Every subset of `mask`, including the empty one.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

/// Decorating step `i` removes its own pairs and one more, so dinv over a
/// decoration set is the undecorated total minus `Σ (cᵢ + 1)`.
fn decorated_dinv(total: usize, c: &[usize], dv: u32) -> usize {
    let removed: usize = submask_bits(dv).map(|i| c[i] + 1).sum();
    total
        .checked_sub(removed)
        .expect("decorations exceed the available dinv pairs")
}

fn submask_bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask & (1 << i) != 0)
}

fn path_tally(n: usize) -> PathTally {
    let paths: Vec<DyckPath> = enumerate_dyck(n).collect();
    paths
        .par_iter()
        .map(|path| {
            let mut tally = PathTally::new(n);
            let area = path.area();
            for p in enumerate_labellings(path) {
                let (cv, c) = pair_counts(path.area_word(), p.labels());
                let total: usize = c.iter().sum();
                for dv in submasks(cv) {
                    tally.bump(
                        dv.count_ones() as usize,
                        area,
                        decorated_dinv(total, &c, dv),
                    );
                }
            }
            tally
        })
        .reduce(|| PathTally::new(n), PathTally::merge)
}

/// `Σ q^dinv t^area z^dec` over all decorated labelled paths of size `n`.
pub fn delta_side(n: usize) -> Polynomial {
    path_tally(n).polynomial()
}

/// The same sum by direct enumeration and the literal statistics.
pub fn delta_side_literal(n: usize) -> Polynomial {
    let mut p = Polynomial::zero();
    for path in enumerate_all_decorated(n) {
        let m = Monomial::new(
            dinv(&path) as u32,
            path.area() as u32,
            path.num_decorations() as u32,
        );
        p.add_term(m, 1);
    }
    p
}

/// `Σ_k z^k Σ_{stLD(n)^{•k}} (−1)^dinv t^area`.
pub fn delta_side_q_minus1(n: usize) -> Polynomial {
    delta_side(n).substitute_q(-1)
}

/// `Σ (−1)^dinv t^area` over paths with exactly `k` decorations.
pub fn lhs_q_minus1(n: usize, k: usize) -> Polynomial {
    delta_side_q_minus1(n).z_coefficient(k as u32)
}

fn perm_tally<F>(n: usize, stat: F) -> Polynomial
where
    F: Fn(&[u8]) -> Option<Monomial> + Sync + Send,
{
    let counts = par_fold_permutations(
        n,
        HashMap::<Monomial, i64>::new,
        |mut acc, w| {
            if let Some(m) = stat(w) {
                *acc.entry(m).or_insert(0) += 1;
            }
            acc
        },
        |mut a, b| {
            for (m, c) in b {
                *a.entry(m).or_insert(0) += c;
            }
            a
        },
    );
    let mut p = Polynomial::zero();
    for (m, c) in counts {
        p.add_term(m, c);
    }
    p
}

/// `Σ_{σ ∈ S_n} t^{inv3(σ)} z^{monot(σ)}`.
pub fn perm_side(n: usize) -> Polynomial {
    perm_tally(n, |w| Some(Monomial::tz(inv3(w) as u32, monot(w) as u32)))
}

/// `Σ t^{revmaj(τ)} z^{dec(τ)}` over decorated permutations of schedule `1ⁿ`.
pub fn sched_side(n: usize) -> Polynomial {
    perm_tally(n, |w| {
        let tau = decorate_1n(w).expect("permutations are valid");
        Some(Monomial::tz(revmaj(w) as u32, tau.dec() as u32))
    })
}

fn monot_table(n: usize) -> Vec<Polynomial> {
    let by_monot = perm_side(n);
    (0..n.max(1))
        .map(|m| by_monot.z_coefficient(m as u32))
        .collect()
}

/// `D_{n,j} = Σ_{monot(σ) ≤ j} t^{inv3(σ)}`, zero for `j < 0`.
pub fn dnj(n: usize, j: i64) -> Polynomial {
    dnj_from(&monot_table(n), j)
}

fn dnj_from(by_monot: &[Polynomial], j: i64) -> Polynomial {
    if j < 0 {
        return Polynomial::zero();
    }
    by_monot.iter().take(j as usize + 1).cloned().sum()
}

fn t_pow(e: usize) -> Polynomial {
    Polynomial::t_pow(e as u32)
}

/// Both sides of the main identity in `t, z`.
pub fn check_main_theorem(n: usize) -> CheckReport {
    let start = Instant::now();
    CheckReport::equality(
        "main",
        Params::n(n),
        delta_side_q_minus1(n),
        perm_side(n),
        start,
    )
}

/// `t^{revmaj(τ)} Π [sᵢ]_q`, zero when some schedule number vanishes.
pub fn schedule_product(tau: &DecoratedPermutation) -> Polynomial {
    let s = schedule_by_runs(tau);
    s.values()
        .iter()
        .fold(t_pow(revmaj(tau.values())), |acc, &si| {
            &acc * &Polynomial::q_analog(si as u32)
        })
}

fn pack(values: &[u8]) -> u64 {
    values.iter().fold(0u64, |acc, &v| acc << 4 | v as u64)
}

/// `dw` fibers: packed diagonal word and decoration mask to `Σ q^dinv t^area`.
type Fibers = HashMap<(u64, u32), Polynomial>;

fn fibers(n: usize) -> Fibers {
    let paths: Vec<DyckPath> = enumerate_dyck(n).collect();
    paths
        .par_iter()
        .map(|path| {
            let mut local = Fibers::new();
            let area = path.area();
            for p in enumerate_labellings(path) {
                let (cv, c) = pair_counts(path.area_word(), p.labels());
                let total: usize = c.iter().sum();
                let dw = diagonal_word(&p);
                // step index -> position in the diagonal word
                let a = path.area_word();
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&i, &j| a[i].cmp(&a[j]).then(p.labels()[j].cmp(&p.labels()[i])));
                let mut slot = vec![0usize; n];
                for (pos, &i) in order.iter().enumerate() {
                    slot[i] = pos;
                }
                let key = pack(dw.values());
                for dv in submasks(cv) {
                    let mask = submask_bits(dv).fold(0u32, |m, i| m | 1 << slot[i]);
                    let d = decorated_dinv(total, &c, dv);
                    local
                        .entry((key, mask))
                        .or_default()
                        .add_term(Monomial::qt(d as u32, area as u32), 1);
                }
            }
            local
        })
        .reduce(Fibers::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        })
}

/// For every decorated permutation `τ` of `[n]`, the paths with diagonal word
/// `τ` weigh `t^{revmaj(τ)} Π [sᵢ]_q` in total. The reported sides are the
/// sums over all `τ`; the witness is the first `τ` (permutation, then
/// decoration mask) that disagrees.
pub fn check_schedule_formula(n: usize) -> CheckReport {
    let start = Instant::now();
    let fib = fibers(n);
    let perms: Vec<Vec<u8>> = permutations(n).collect();
    let rows: Vec<(Polynomial, Polynomial, Option<Value>)> = perms
        .par_iter()
        .map(|w| {
            let key = pack(w);
            let (mut lhs, mut rhs, mut witness) = (Polynomial::zero(), Polynomial::zero(), None);
            for mask in 0..(1u32 << n) {
                let tau = DecoratedPermutation::new(w.clone(), mask).expect("valid");
                let fiber = fib.get(&(key, mask)).cloned().unwrap_or_default();
                let formula = schedule_product(&tau);
                if witness.is_none() && fiber != formula {
                    witness = Some(json!({
                        "tau": tau.to_string(),
                        "schedule": schedule_by_runs(&tau),
                        "fiber": fiber,
                        "formula": formula,
                    }));
                }
                lhs += fiber;
                rhs += formula;
            }
            (lhs, rhs, witness)
        })
        .collect();
    let mut lhs = Polynomial::zero();
    let mut rhs = Polynomial::zero();
    let mut witness = None;
    for (l, r, w) in rows {
        lhs += l;
        rhs += r;
        witness = witness.or(w);
    }
    CheckReport::build("schedule-formula", Params::n(n), lhs, rhs, witness, start)
}

/// `lhs_q_minus1(n, k) = Σ_{τ ∈ S_n^{•k}(1ⁿ)} t^{revmaj(τ)}`.
pub fn check_sched_q_minus1(n: usize, k: usize) -> CheckReport {
    let start = Instant::now();
    let params = Params {
        n,
        k: Some(k),
        j: None,
    };
    let lhs = lhs_q_minus1(n, k);
    let rhs = sched_side(n).z_coefficient(k as u32);
    CheckReport::equality("sched-q-minus1", params, lhs, rhs, start)
}

/// All `k` at once, with `z` marking the number of decorations.
pub fn check_sched_q_minus1_all(n: usize) -> CheckReport {
    let start = Instant::now();
    CheckReport::equality(
        "sched-q-minus1",
        Params::n(n),
        delta_side_q_minus1(n),
        sched_side(n),
        start,
    )
}

/// `Σ_k lhs_q_minus1(n, k) = [n]_t!`.
pub fn check_sum_is_t_factorial(n: usize) -> CheckReport {
    let start = Instant::now();
    let lhs = delta_side_q_minus1(n).substitute_z(1);
    CheckReport::equality(
        "sum-t-factorial",
        Params::n(n),
        lhs,
        Polynomial::t_factorial(n as u32),
        start,
    )
}

/// `Σ_{PF} (−1)^{area} = E_n` over undecorated labelled paths.
pub fn check_sign_area_euler(n: usize) -> CheckReport {
    let start = Instant::now();
    let tally = path_tally(n);
    let signed: i64 = tally
        .entries()
        .filter(|&(_, _, dec, _)| dec == 0)
        .map(|(_, area, _, c)| if area % 2 == 0 { c } else { -c })
        .sum();
    let rhs = Polynomial::constant(euler_number(n) as i64);
    CheckReport::equality(
        "sign-area-euler",
        Params::n(n),
        Polynomial::constant(signed),
        rhs,
        start,
    )
}

/// `|{σ : decorate_1n(σ) has no decoration}| = E_n`.
pub fn check_sched_euler_count(n: usize) -> CheckReport {
    let start = Instant::now();
    let undecorated = sched_side(n).z_coefficient(0).coefficient_sum();
    let rhs = Polynomial::constant(euler_number(n) as i64);
    CheckReport::equality(
        "sched-euler-count",
        Params::n(n),
        Polynomial::constant(undecorated),
        rhs,
        start,
    )
}

/// `lhs_q_minus1(n, 0) = t^{⌊n²/4⌋} E_n(t) = Σ_{alternating} t^{inv3}`.
pub fn check_t_euler(n: usize) -> CheckReport {
    let start = Instant::now();
    let lhs = lhs_q_minus1(n, 0);
    let rhs = &t_pow(n * n / 4) * &euler_poly(n);
    let alternating = perm_tally(n, |w| {
        is_alternating(w).then(|| Monomial::t(inv3(w) as u32))
    });
    let witness = first_difference(&lhs, &rhs).or_else(|| {
        (alternating != rhs).then(|| json!({"alternating_inv3": alternating, "expected": rhs}))
    });
    CheckReport::build("t-euler", Params::n(n), lhs, rhs, witness, start)
}

/// `Σ t^{inv3} = Σ t^{î} = Σ t^{revmaj} = [n]_t!`.
pub fn check_mahonian(n: usize) -> CheckReport {
    let start = Instant::now();
    let rhs = Polynomial::t_factorial(n as u32);
    let by_inv3 = perm_tally(n, |w| Some(Monomial::t(inv3(w) as u32)));
    let by_ihat = perm_tally(n, |w| Some(Monomial::t(chebikin_ihat(w) as u32)));
    let by_revmaj = perm_tally(n, |w| Some(Monomial::t(revmaj(w) as u32)));
    let witness = [
        ("inv3", &by_inv3),
        ("ihat", &by_ihat),
        ("revmaj", &by_revmaj),
    ]
    .into_iter()
    .find(|(_, p)| **p != rhs)
    .map(|(stat, p)| json!({"statistic": stat, "distribution": p}));
    CheckReport::build("mahonian", Params::n(n), by_inv3, rhs, witness, start)
}

/// On alternating permutations `î = ⌊n²/4⌋ + 31-2` pointwise, and inv3 has
/// the same distribution as `î`. The sides are the inv3 and `î`
/// distributions over alternating permutations.
pub fn check_alternating_stats(n: usize) -> CheckReport {
    let start = Instant::now();
    let perms: Vec<Vec<u8>> = permutations(n).filter(|w| is_alternating(w)).collect();
    let bad = perms
        .par_iter()
        .find_first(|w| n * n / 4 + count_31_2(w) != chebikin_ihat(w));
    let mut lhs = Polynomial::zero();
    let mut rhs = Polynomial::zero();
    for w in &perms {
        lhs.add_term(Monomial::t(inv3(w) as u32), 1);
        rhs.add_term(Monomial::t(chebikin_ihat(w) as u32), 1);
    }
    let witness = bad
        .map(|w| {
            json!({
                "sigma": DecoratedPermutation::undecorated(w.clone()).expect("valid").to_string(),
                "ihat": chebikin_ihat(w),
                "pattern_31_2": count_31_2(w),
            })
        })
        .or_else(|| first_difference(&lhs, &rhs));
    CheckReport::build("alternating-stats", Params::n(n), lhs, rhs, witness, start)
}

/// `D_{n,j} = t^{n−j−1} [j+1]_t D_{n−1,j+1} + [n−j−1]_t D_{n−1,j−1}` for
/// every `0 ≤ j ≤ n−1`, or for the single `j` given. The sides are
/// `Σ_j z^j D_{n,j}` and the same sum of right-hand sides.
pub fn check_dnj_recursion(n: usize, only: Option<i64>) -> CheckReport {
    assert!(n >= 2, "the recursion starts at n = 2");
    let start = Instant::now();
    let here = monot_table(n);
    let below = monot_table(n - 1);
    let js: Vec<i64> = match only {
        Some(j) => vec![j],
        None => (0..n as i64).collect(),
    };
    let mut lhs = Polynomial::zero();
    let mut rhs = Polynomial::zero();
    let mut witness = None;
    for &j in &js {
        let left = dnj_from(&here, j);
        let nj = n as i64 - j;
        let right = &(&t_pow((nj - 1).max(0) as usize)
            * &Polynomial::t_analog((j + 1).max(0) as u32))
            * &dnj_from(&below, j + 1)
            + &Polynomial::t_analog((nj - 1).max(0) as u32) * &dnj_from(&below, j - 1);
        if witness.is_none() && left != right {
            witness = Some(json!({"n": n, "j": j, "lhs": left, "rhs": right}));
        }
        let z = Polynomial::z_pow(j.max(0) as u32);
        lhs += &z * &left;
        rhs += &z * &right;
    }
    let params = Params {
        n,
        k: None,
        j: only,
    };
    CheckReport::build("dnj-recursion", params, lhs, rhs, witness, start)
}

/// Cross-checks for the stored example path: area 5, dinv 2, diagonal word
/// `•8•63•274•15` and schedule `1 2 1 2 1 2 1 1`.
pub fn golden_path() -> DecoratedLabelledPath {
    DecoratedLabelledPath::from_record(&PathRecord {
        area_word: vec![0, 1, 2, 1, 0, 1, 0, 0],
        labels: vec![3, 4, 5, 1, 6, 7, 2, 8],
        dv: vec![4, 5, 7, 8],
    })
    .expect("the stored path is valid")
}

pub fn check_golden() -> CheckReport {
    let start = Instant::now();
    let p = golden_path();
    let dw = diagonal_word(&p);
    let schedule = schedule_by_cyclic_runs(&dw);
    let lhs = Polynomial::monomial(Monomial::qt(dinv(&p) as u32, p.area() as u32), 1);
    let rhs = Polynomial::monomial(Monomial::qt(2, 5), 1);
    let ok = lhs == rhs
        && dw.to_string() == "*8*63*274*15"
        && schedule == Schedule(vec![1, 2, 1, 2, 1, 2, 1, 1])
        && schedule_by_runs(&dw) == schedule;
    let witness = (!ok).then(|| {
        json!({
            "area": p.area(),
            "dinv": dinv(&p),
            "diagonal_word": dw.to_string(),
            "schedule": schedule,
        })
    });
    CheckReport::build("golden", Params::n(p.len()), lhs, rhs, witness, start)
}

fn all_decorated(n: usize) -> impl ParallelIterator<Item = DecoratedPermutation> {
    let perms: Vec<Vec<u8>> = permutations(n).collect();
    perms.into_par_iter().flat_map_iter(move |w| {
        (0..1u32 << n).map(move |mask| DecoratedPermutation::new(w.clone(), mask).expect("valid"))
    })
}

/// Runs `pred` on every decorated permutation of `[n]`; reports how many
/// satisfy it against the total, with the first failure as witness.
fn decorated_predicate<F>(name: &str, n: usize, pred: F, start: Instant) -> CheckReport
where
    F: Fn(&DecoratedPermutation) -> Option<Value> + Sync + Send,
{
    let failures: Vec<Value> = all_decorated(n).filter_map(|tau| pred(&tau)).collect();
    let total = (1usize << n) * (1..=n).product::<usize>();
    CheckReport::build(
        name,
        Params::n(n),
        count(total - failures.len()),
        count(total),
        failures.into_iter().next(),
        start,
    )
}

/// The decreasing-run and cyclic-run schedules agree everywhere.
pub fn check_schedule_definitions(n: usize) -> CheckReport {
    decorated_predicate(
        "schedule-definitions",
        n,
        |tau| {
            let a = schedule_by_runs(tau);
            let b = schedule_by_cyclic_runs(tau);
            (a != b).then(|| json!({"tau": tau.to_string(), "by_runs": a, "by_cyclic_runs": b}))
        },
        Instant::now(),
    )
}

/// A strictly positive schedule takes exactly the values `1..=j`.
pub fn check_interval(n: usize) -> CheckReport {
    decorated_predicate(
        "interval",
        n,
        |tau| {
            let s = schedule_by_runs(tau);
            (s.is_positive() && !s.is_initial_interval())
                .then(|| json!({"tau": tau.to_string(), "schedule": s}))
        },
        Instant::now(),
    )
}

/// Exactly one decoration of each `σ` has schedule `1ⁿ`, the one
/// `decorate_1n` builds.
pub fn check_unique_decoration(n: usize) -> CheckReport {
    let start = Instant::now();
    let perms: Vec<Vec<u8>> = permutations(n).collect();
    let failures: Vec<Value> = perms
        .par_iter()
        .filter_map(|w| {
            let ones: Vec<DecoratedPermutation> = (0..1u32 << n)
                .map(|mask| DecoratedPermutation::new(w.clone(), mask).expect("valid"))
                .filter(|tau| schedule_by_runs(tau).is_all_ones())
                .collect();
            let built = decorate_1n(w).expect("valid");
            (ones.len() != 1 || ones[0] != built).then(|| {
                json!({
                    "sigma": built.strip_decorations().to_string(),
                    "schedule_1n": ones.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "decorate_1n": built.to_string(),
                })
            })
        })
        .collect();
    CheckReport::build(
        "unique-decoration",
        Params::n(n),
        count(perms.len() - failures.len()),
        count(perms.len()),
        failures.into_iter().next(),
        start,
    )
}

/// `φ` is a bijection from `S_n^•(1ⁿ)` onto `S_n` carrying revmaj to inv3
/// and dec to monot. The sides are the two `t, z` generating functions.
pub fn check_trees_isom(n: usize) -> CheckReport {
    let start = Instant::now();
    let taus: Vec<DecoratedPermutation> = enumerate_sched_1n(n, None).collect();
    let rows: Vec<(DecoratedPermutation, Vec<u8>)> = taus
        .into_par_iter()
        .map(|tau| {
            let sigma = phi(&tau).expect("schedule 1ⁿ");
            (tau, sigma)
        })
        .collect();
    let mut lhs = Polynomial::zero();
    let mut rhs = Polynomial::zero();
    let mut witness = None;
    let mut image: Vec<u64> = Vec::with_capacity(rows.len());
    for (tau, sigma) in &rows {
        lhs.add_term(
            Monomial::tz(revmaj(tau.values()) as u32, tau.dec() as u32),
            1,
        );
        rhs.add_term(Monomial::tz(inv3(sigma) as u32, monot(sigma) as u32), 1);
        image.push(pack(sigma));
        let back = phi_inverse(sigma).expect("a permutation");
        let preserved = revmaj(tau.values()) == inv3(sigma) && tau.dec() == monot(sigma);
        if witness.is_none() && (back != *tau || !preserved) {
            witness = Some(json!({
                "tau": tau.to_string(),
                "phi": DecoratedPermutation::undecorated(sigma.clone()).expect("valid").to_string(),
                "phi_inverse": back.to_string(),
            }));
        }
    }
    image.sort_unstable();
    image.dedup();
    let expected: usize = (1..=n).product();
    if witness.is_none() && image.len() != expected {
        witness = Some(json!({"image_size": image.len(), "expected": expected}));
    }
    CheckReport::build("trees-isom", Params::n(n), lhs, rhs, witness, start)
}

/// The closed form of ψ equals the inv3 increase of each end insertion and
/// is a bijection from insertion values `1..=n+1` onto `0..=n`.
pub fn check_psi(n: usize) -> CheckReport {
    let start = Instant::now();
    let perms: Vec<Vec<u8>> = permutations(n).collect();
    let bad = perms.par_iter().find_map_first(|w| {
        let closed: Vec<usize> = (1..=n + 1).map(|l| psi(w, l).expect("in range")).collect();
        let direct: Vec<usize> = (1..=n + 1)
            .map(|l| psi_by_inv3(w, l).expect("in range"))
            .collect();
        let mut sorted = closed.clone();
        sorted.sort_unstable();
        (closed != direct || sorted != (0..=n).collect::<Vec<_>>()).then(|| {
            json!({
                "sigma": DecoratedPermutation::undecorated(w.clone()).expect("valid").to_string(),
                "closed_form": closed,
                "inv3_difference": direct,
            })
        })
    });
    let good = perms.len() - usize::from(bad.is_some());
    CheckReport::build(
        "psi",
        Params::n(n),
        count(good),
        count(perms.len()),
        bad,
        start,
    )
}

/// One entry of the check registry.
pub struct CheckSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub min_n: usize,
    pub max_n: usize,
    /// Whether `k` restricts the check.
    pub takes_k: bool,
    /// Whether `j` restricts the check.
    pub takes_j: bool,
    run: fn(&Params) -> CheckReport,
}

impl CheckSpec {
    /// Validates the parameters against the supported range, then runs.
    pub fn run(&self, params: &Params) -> Result<CheckReport> {
        let range = |name: &'static str, value: i64, lo: i64, hi: i64| {
            if value < lo || value > hi {
                Err(Error::OutOfRange {
                    name,
                    value,
                    lo,
                    hi,
                })
            } else {
                Ok(())
            }
        };
        range("n", params.n as i64, self.min_n as i64, self.max_n as i64)?;
        let top = params.n as i64 - 1;
        if let Some(k) = params.k {
            if !self.takes_k {
                return Err(Error::Parse {
                    input: format!("k={k}"),
                    reason: format!("{} takes no k", self.name),
                });
            }
            range("k", k as i64, 0, top)?;
        }
        if let Some(j) = params.j {
            if !self.takes_j {
                return Err(Error::Parse {
                    input: format!("j={j}"),
                    reason: format!("{} takes no j", self.name),
                });
            }
            range("j", j, 0, top)?;
        }
        Ok((self.run)(params))
    }
}

pub const CHECKS: &[CheckSpec] = &[
    CheckSpec {
        name: "golden",
        about: "stored example path: area, dinv, diagonal word, schedule",
        min_n: 1,
        max_n: 10,
        takes_k: false,
        takes_j: false,
        run: |_| check_golden(),
    },
    CheckSpec {
        name: "main",
        about: "decorated paths at q = -1 against t^inv3 z^monot",
        min_n: 1,
        max_n: 8,
        takes_k: false,
        takes_j: false,
        run: |p| check_main_theorem(p.n),
    },
    CheckSpec {
        name: "schedule-formula",
        about: "every diagonal-word fiber equals t^revmaj times the q-product of its schedule",
        min_n: 1,
        max_n: 7,
        takes_k: false,
        takes_j: false,
        run: |p| check_schedule_formula(p.n),
    },
    CheckSpec {
        name: "schedule-definitions",
        about: "schedules from decreasing runs and from maximal cyclic runs agree",
        min_n: 1,
        max_n: 7,
        takes_k: false,
        takes_j: false,
        run: |p| check_schedule_definitions(p.n),
    },
    CheckSpec {
        name: "interval",
        about: "positive schedules take the values 1..j",
        min_n: 1,
        max_n: 7,
        takes_k: false,
        takes_j: false,
        run: |p| check_interval(p.n),
    },
    CheckSpec {
        name: "unique-decoration",
        about: "each permutation has one decoration of schedule 1^n, the one decorate_1n gives",
        min_n: 1,
        max_n: 7,
        takes_k: false,
        takes_j: false,
        run: |p| check_unique_decoration(p.n),
    },
    CheckSpec {
        name: "sched-q-minus1",
        about: "decorated paths at q = -1 against schedule-1^n permutations by revmaj",
        min_n: 1,
        max_n: 8,
        takes_k: true,
        takes_j: false,
        run: |p| match p.k {
            Some(k) => check_sched_q_minus1(p.n, k),
            None => check_sched_q_minus1_all(p.n),
        },
    },
    CheckSpec {
        name: "sum-t-factorial",
        about: "summing over decorations gives [n]_t!",
        min_n: 1,
        max_n: 8,
        takes_k: false,
        takes_j: false,
        run: |p| check_sum_is_t_factorial(p.n),
    },
    CheckSpec {
        name: "sign-area-euler",
        about: "parking functions signed by area sum to E_n",
        min_n: 1,
        max_n: 8,
        takes_k: false,
        takes_j: false,
        run: |p| check_sign_area_euler(p.n),
    },
    CheckSpec {
        name: "sched-euler-count",
        about: "undecorated permutations of schedule 1^n number E_n",
        min_n: 1,
        max_n: 10,
        takes_k: false,
        takes_j: false,
        run: |p| check_sched_euler_count(p.n),
    },
    CheckSpec {
        name: "t-euler",
        about: "undecorated paths at q = -1 against t^(n^2/4) E_n(t) and alternating inv3",
        min_n: 1,
        max_n: 8,
        takes_k: false,
        takes_j: false,
        run: |p| check_t_euler(p.n),
    },
    CheckSpec {
        name: "mahonian",
        about: "inv3, ihat and revmaj are all distributed as [n]_t!",
        min_n: 1,
        max_n: 10,
        takes_k: false,
        takes_j: false,
        run: |p| check_mahonian(p.n),
    },
    CheckSpec {
        name: "alternating-stats",
        about:
            "on alternating permutations ihat = n^2/4 + 31-2, and inv3 matches ihat in distribution",
        min_n: 1,
        max_n: 10,
        takes_k: false,
        takes_j: false,
        run: |p| check_alternating_stats(p.n),
    },
    CheckSpec {
        name: "trees-isom",
        about: "phi is a bijection taking (revmaj, dec) to (inv3, monot)",
        min_n: 1,
        max_n: 9,
        takes_k: false,
        takes_j: false,
        run: |p| check_trees_isom(p.n),
    },
    CheckSpec {
        name: "psi",
        about: "closed-form psi matches inv3 differences and is a bijection",
        min_n: 1,
        max_n: 9,
        takes_k: false,
        takes_j: false,
        run: |p| check_psi(p.n),
    },
    CheckSpec {
        name: "dnj-recursion",
        about: "two-term recursion for D_{n,j} (conjectural)",
        min_n: 2,
        max_n: 10,
        takes_k: false,
        takes_j: true,
        run: |p| check_dnj_recursion(p.n, p.j),
    },
];

pub fn find_check(name: &str) -> Option<&'static CheckSpec> {
    CHECKS.iter().find(|c| c.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u32, u32, u32, i64)]) -> Polynomial {
        let mut p = Polynomial::zero();
        for &(q, t, z, c) in terms {
            p.add_term(Monomial::new(q, t, z), c);
        }
        p
    }

    fn t(e: u32) -> Polynomial {
        Polynomial::t_pow(e)
    }

    #[test]
    fn fast_dinv_matches_literal() {
        for n in 0..=5 {
            assert_eq!(delta_side(n), delta_side_literal(n), "n = {n}");
        }
    }

    #[test]
    fn lhs_examples() {
        assert_eq!(lhs_q_minus1(2, 0), t(1));
        assert_eq!(lhs_q_minus1(2, 1), Polynomial::one());
        assert_eq!(lhs_q_minus1(3, 0), t(2) + t(3));
    }

    #[test]
    fn main_small() {
        let r = check_main_theorem(2);
        assert!(r.passed);
        assert_eq!(r.lhs, poly(&[(0, 1, 0, 1), (0, 0, 1, 1)]));
        let r = check_main_theorem(3);
        assert!(r.passed);
        let expected = poly(&[
            (0, 2, 0, 1),
            (0, 3, 0, 1),
            (0, 1, 1, 2),
            (0, 2, 1, 1),
            (0, 0, 2, 1),
        ]);
        assert_eq!(r.rhs, expected);
        assert!(r.witness.is_none());
    }

    #[test]
    fn main_up_to_six() {
        for n in 1..=6 {
            assert!(check_main_theorem(n).passed, "n = {n}");
        }
    }

    #[test]
    fn schedule_formula_small_fibers() {
        let fib = fibers(2);
        // 21: paths 00/12 and 00/21, fiber 1 + q; 12: path 01/12, fiber t.
        assert_eq!(
            fib[&(pack(&[2, 1]), 0)],
            poly(&[(0, 0, 0, 1), (1, 0, 0, 1)])
        );
        assert_eq!(fib[&(pack(&[1, 2]), 0)], t(1));
        for n in 1..=5 {
            assert!(check_schedule_formula(n).passed, "n = {n}");
        }
    }

    #[test]
    fn golden_fiber_term() {
        let tau: DecoratedPermutation = "*8*63*274*15".parse().unwrap();
        let f = schedule_product(&tau);
        let expected = &t(5) * &Polynomial::q_analog(2);
        assert_eq!(
            f,
            &(&expected * &Polynomial::q_analog(2)) * &Polynomial::q_analog(2)
        );
        assert_eq!(f.coeff(Monomial::qt(2, 5)), 3);
        assert!(check_golden().passed);
    }

    #[test]
    fn sched_side_examples() {
        assert_eq!(check_sched_q_minus1(2, 0).lhs, t(1));
        let r = check_sched_q_minus1(3, 0);
        assert!(r.passed);
        assert_eq!(r.rhs, t(2) + t(3));
    }

    #[test]
    fn factorial_and_euler() {
        assert_eq!(check_sum_is_t_factorial(2).lhs, Polynomial::one() + t(1));
        let r = check_sum_is_t_factorial(3);
        assert_eq!(
            r.lhs,
            poly(&[(0, 0, 0, 1), (0, 1, 0, 2), (0, 2, 0, 2), (0, 3, 0, 1)])
        );
        let oracle = [1, 1, 2, 5, 16, 61, 272];
        for n in 1..=6 {
            let r = check_sign_area_euler(n);
            assert!(r.passed);
            assert_eq!(r.lhs, Polynomial::constant(oracle[n - 1]));
            assert!(check_sched_euler_count(n).passed);
        }
        assert_eq!(check_t_euler(3).lhs, t(2) + t(3));
        assert_eq!(check_t_euler(2).lhs, t(1));
    }

    #[test]
    fn dnj_examples() {
        assert_eq!(dnj(3, 0), t(2) + t(3));
        assert_eq!(dnj(2, 1), Polynomial::one() + t(1));
        assert_eq!(dnj(3, -1), Polynomial::zero());
        for n in 1..=6 {
            assert_eq!(dnj(n, n as i64 - 1), Polynomial::t_factorial(n as u32));
            assert_eq!(dnj(n, n as i64 + 3), Polynomial::t_factorial(n as u32));
        }
        let r = check_dnj_recursion(3, Some(0));
        assert!(r.passed);
        assert_eq!(r.lhs, t(2) + t(3));
        assert!(check_dnj_recursion(2, Some(1)).passed);
    }

    #[test]
    fn structural_checks_small() {
        for n in 1..=5 {
            for report in [
                check_schedule_definitions(n),
                check_interval(n),
                check_unique_decoration(n),
                check_mahonian(n),
                check_alternating_stats(n),
                check_trees_isom(n),
                check_psi(n),
            ] {
                assert!(
                    report.passed,
                    "{} n = {n}: {:?}",
                    report.name, report.witness
                );
                assert_eq!(report.lhs, report.rhs);
            }
        }
    }

    #[test]
    fn failing_report_has_witness() {
        let start = Instant::now();
        let r = CheckReport::equality("x", Params::n(1), t(1), t(2), start);
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert_eq!(w["monomial"]["t"], 1);
        assert_eq!(w["lhs"], 1);
        assert_eq!(w["rhs"], 0);
    }

    #[test]
    fn registry_validates_ranges() {
        let main = find_check("main").unwrap();
        assert!(matches!(
            main.run(&Params::n(99)),
            Err(Error::OutOfRange { .. })
        ));
        let sched = find_check("sched-q-minus1").unwrap();
        let bad_k = Params {
            n: 3,
            k: Some(3),
            j: None,
        };
        assert!(sched.run(&bad_k).is_err());
        assert!(main
            .run(&Params {
                n: 3,
                k: Some(0),
                j: None
            })
            .is_err());
        assert!(find_check("nope").is_none());
        let names: Vec<_> = CHECKS.iter().map(|c| c.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }

    #[test]
    fn json_is_reproducible() {
        let r = check_main_theorem(3);
        let a = serde_json::to_string(&r.to_json(false)).unwrap();
        let b = serde_json::to_string(&check_main_theorem(3).to_json(false)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"elapsed_ms\":null"));
    }
}
