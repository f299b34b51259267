//! Dyck paths, standard labellings, valley decorations and the statistics
//! `area`, `dinv` and the diagonal word.
//!
//! A path is stored as its area word `a₁…aₙ` (`a₁ = 0`, `a_{i+1} ≤ aᵢ + 1`).
//! Steps are numbered from 1. Decorations are a bit mask, bit `i - 1` for
//! step `i`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{validate_permutation, DecoratedPermutation};

/// A Dyck path of size `n`, as its area word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    area_word: Vec<u8>,
}

fn is_area_word(a: &[u8]) -> bool {
    match a.first() {
        None => true,
        Some(&first) => first == 0 && a.windows(2).all(|w| w[1] <= w[0] + 1),
    }
}

impl DyckPath {
    pub fn new(area_word: Vec<u8>) -> Result<Self> {
        if !is_area_word(&area_word) {
            return Err(Error::InvalidAreaWord(area_word));
        }
        Ok(DyckPath { area_word })
    }

    pub fn area_word(&self) -> &[u8] {
        &self.area_word
    }

    pub fn len(&self) -> usize {
        self.area_word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.area_word.is_empty()
    }

    pub fn area(&self) -> usize {
        self.area_word.iter().map(|&a| a as usize).sum()
    }

    /// North/east step string, e.g. `NNENEE`. Display only.
    pub fn to_steps(&self) -> String {
        let mut out = String::with_capacity(2 * self.len());
        let mut height = 0usize; // number of N steps taken
        let mut x = 0usize;
        for &a in &self.area_word {
            // The i-th north step starts at column height - a.
            let col = height - a as usize;
            while x < col {
                out.push('E');
                x += 1;
            }
            out.push('N');
            height += 1;
        }
        while x < height {
            out.push('E');
            x += 1;
        }
        out
    }

    pub fn from_steps(steps: &str) -> Result<Self> {
        let bad = || Error::InvalidAreaWord(steps.bytes().collect());
        let (mut height, mut x) = (0usize, 0usize);
        let mut area = Vec::new();
        for c in steps.chars() {
            match c {
                'N' => {
                    area.push((height - x) as u8);
                    height += 1;
                }
                'E' => {
                    x += 1;
                    if x > height {
                        return Err(bad());
                    }
                }
                _ => return Err(bad()),
            }
        }
        if x != height {
            return Err(bad());
        }
        DyckPath::new(area)
    }
}

/// All Dyck paths of size `n`, lexicographic in the area word.
pub fn enumerate_dyck(n: usize) -> DyckPaths {
    DyckPaths {
        current: Some(vec![0; n]),
    }
}

pub struct DyckPaths {
    current: Option<Vec<u8>>,
}

impl Iterator for DyckPaths {
    type Item = DyckPath;

    fn next(&mut self) -> Option<DyckPath> {
        let word = self.current.take()?;
        let mut next = word.clone();
        // Bump the rightmost letter that can grow, zero everything after it.
        for i in (1..next.len()).rev() {
            if next[i] <= next[i - 1] {
                next[i] += 1;
                next[i + 1..].iter_mut().for_each(|a| *a = 0);
                self.current = Some(next);
                break;
            }
        }
        Some(DyckPath { area_word: word })
    }
}

/// A standardly labelled Dyck path with a set of decorated contractible
/// valleys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedLabelledPath {
    path: DyckPath,
    labels: Vec<u8>,
    dv: u32,
}

/// Wire form: `{"area_word": [..], "labels": [..], "dv": [..]}`, `dv`
/// 1-based and ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    pub area_word: Vec<u8>,
    pub labels: Vec<u8>,
    pub dv: Vec<usize>,
}

fn column_increasing(area: &[u8], labels: &[u8]) -> bool {
    (1..area.len()).all(|i| area[i] != area[i - 1] + 1 || labels[i] > labels[i - 1])
}

fn contractible_mask(area: &[u8], labels: &[u8]) -> u32 {
    let mut mask = 0;
    for i in 1..area.len() {
        if area[i - 1] > area[i] || (area[i - 1] == area[i] && labels[i - 1] < labels[i]) {
            mask |= 1 << i;
        }
    }
    mask
}

impl DecoratedLabelledPath {
    /// Validates the labelling and that every step in `dv` (1-based) is a
    /// contractible valley.
    pub fn new(path: DyckPath, labels: Vec<u8>, dv: &[usize]) -> Result<Self> {
        if labels.len() != path.len()
            || validate_permutation(&labels).is_err()
            || !column_increasing(path.area_word(), &labels)
        {
            return Err(Error::InvalidLabelling {
                area: path.area_word.clone(),
                labels,
            });
        }
        let cv = contractible_mask(path.area_word(), &labels);
        let mut mask = 0u32;
        for &i in dv {
            if i == 0 || i > path.len() || cv & (1 << (i - 1)) == 0 {
                return Err(Error::NotContractible(i));
            }
            mask |= 1 << (i - 1);
        }
        Ok(DecoratedLabelledPath {
            path,
            labels,
            dv: mask,
        })
    }

    pub fn from_record(record: &PathRecord) -> Result<Self> {
        let path = DyckPath::new(record.area_word.clone())?;
        DecoratedLabelledPath::new(path, record.labels.clone(), &record.dv)
    }

    pub fn to_record(&self) -> PathRecord {
        PathRecord {
            area_word: self.path.area_word.clone(),
            labels: self.labels.clone(),
            dv: self.decorations(),
        }
    }

    pub fn path(&self) -> &DyckPath {
        &self.path
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Decorated steps, 1-based, ascending.
    pub fn decorations(&self) -> Vec<usize> {
        (1..=self.len())
            .filter(|&i| self.dv & (1 << (i - 1)) != 0)
            .collect()
    }

    pub fn decoration_mask(&self) -> u32 {
        self.dv
    }

    pub fn num_decorations(&self) -> usize {
        self.dv.count_ones() as usize
    }

    pub fn area(&self) -> usize {
        self.path.area()
    }

    fn with_mask(&self, dv: u32) -> DecoratedLabelledPath {
        DecoratedLabelledPath {
            path: self.path.clone(),
            labels: self.labels.clone(),
            dv,
        }
    }
}

/// Steps `i ∈ 2..=n` with `a_{i-1} > a_i`, or `a_{i-1} = a_i` and
/// `w_{i-1} < w_i`. 1-based, ascending.
pub fn contractible_valleys(p: &DecoratedLabelledPath) -> Vec<usize> {
    let mask = contractible_mask(p.path.area_word(), &p.labels);
    (1..=p.len())
        .filter(|&i| mask & (1 << (i - 1)) != 0)
        .collect()
}

/// Diagonal inversions minus decorations.
///
/// Counts pairs `i < j` with `i` undecorated that are primary
/// (`a_i = a_j`, `w_i < w_j`) or secondary (`a_i = a_j + 1`, `w_i > w_j`).
pub fn dinv(p: &DecoratedLabelledPath) -> usize {
    let a = p.path.area_word();
    let w = &p.labels;
    let n = a.len();
    let mut pairs = 0usize;
    for i in 0..n {
        if p.dv & (1 << i) != 0 {
            continue;
        }
        for j in i + 1..n {
            if (a[i] == a[j] && w[i] < w[j]) || (a[i] == a[j] + 1 && w[i] > w[j]) {
                pairs += 1;
            }
        }
    }
    let decorations = p.num_decorations();
    assert!(
        pairs >= decorations,
        "negative dinv for {:?}",
        p.to_record()
    );
    pairs - decorations
}

/// Labels read diagonal by diagonal, each diagonal in decreasing order,
/// carrying decorations.
pub fn diagonal_word(p: &DecoratedLabelledPath) -> DecoratedPermutation {
    let a = p.path.area_word();
    let mut steps: Vec<usize> = (0..p.len()).collect();
    steps.sort_by(|&i, &j| a[i].cmp(&a[j]).then(p.labels[j].cmp(&p.labels[i])));
    let mut mask = 0u32;
    let values = steps
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            if p.dv & (1 << i) != 0 {
                mask |= 1 << pos;
            }
            p.labels[i]
        })
        .collect();
    DecoratedPermutation::from_parts_unchecked(values, mask)
}

/// Standard column-increasing labellings of `path`, lexicographic in the
/// label word, each with no decorations.
pub fn enumerate_labellings(path: &DyckPath) -> Labellings {
    let n = path.len();
    let mut it = Labellings {
        area: path.area_word.clone(),
        labels: vec![0; n],
        used: 0,
        state: State::Fresh,
    };
    if !it.fill(0) {
        it.state = State::Done;
    }
    it
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

pub struct Labellings {
    area: Vec<u8>,
    labels: Vec<u8>,
    used: u64,
    state: State,
}

impl Labellings {
    fn lower_bound(&self, pos: usize) -> u8 {
        if pos > 0 && self.area[pos] == self.area[pos - 1] + 1 {
            self.labels[pos - 1]
        } else {
            0
        }
    }

    /// Tries labels `> from` at `pos`, then completes `pos + 1..` minimally.
    fn place(&mut self, pos: usize, from: u8) -> bool {
        let n = self.area.len() as u8;
        let lo = self.lower_bound(pos).max(from);
        for v in lo + 1..=n {
            if self.used & (1 << v) != 0 {
                continue;
            }
            self.labels[pos] = v;
            self.used |= 1 << v;
            if self.fill(pos + 1) {
                return true;
            }
            self.used &= !(1 << v);
        }
        false
    }

    fn fill(&mut self, pos: usize) -> bool {
        pos == self.area.len() || self.place(pos, 0)
    }

    fn advance(&mut self) -> bool {
        for pos in (0..self.area.len()).rev() {
            let v = self.labels[pos];
            self.used &= !(1 << v);
            if self.place(pos, v) {
                return true;
            }
        }
        false
    }
}

impl Iterator for Labellings {
    type Item = DecoratedLabelledPath;

    fn next(&mut self) -> Option<DecoratedLabelledPath> {
        match self.state {
            State::Done => return None,
            State::Fresh => self.state = State::Running,
            State::Running => {
                if !self.advance() {
                    self.state = State::Done;
                    return None;
                }
            }
        }
        Some(DecoratedLabelledPath {
            path: DyckPath {
                area_word: self.area.clone(),
            },
            labels: self.labels.clone(),
            dv: 0,
        })
    }
}

/// Every decoration of `p` by exactly `k` of its contractible valleys,
/// subsets in lexicographic order.
pub fn decorations_of(
    p: &DecoratedLabelledPath,
    k: usize,
) -> impl Iterator<Item = DecoratedLabelledPath> + '_ {
    contractible_valleys(p)
        .into_iter()
        .combinations(k)
        .map(move |subset| {
            let mask = subset.iter().fold(0u32, |m, &i| m | 1 << (i - 1));
            p.with_mask(mask)
        })
}

/// Every decoration of `p`, grouped by size then lexicographic.
pub fn all_decorations_of(
    p: &DecoratedLabelledPath,
) -> impl Iterator<Item = DecoratedLabelledPath> + '_ {
    let cv = contractible_valleys(p).len();
    (0..=cv).flat_map(move |k| decorations_of(p, k))
}

/// `stLD(n)^{•k}` for one Dyck path.
pub fn decorated_over(path: &DyckPath, k: usize) -> impl Iterator<Item = DecoratedLabelledPath> {
    enumerate_labellings(path).flat_map(move |p| decorations_of(&p, k).collect::<Vec<_>>())
}

/// `stLD(n)^{•k}`: labelled paths of size `n` with exactly `k` decorations.
pub fn enumerate_decorated(n: usize, k: usize) -> impl Iterator<Item = DecoratedLabelledPath> {
    enumerate_dyck(n).flat_map(move |path| decorated_over(&path, k).collect::<Vec<_>>())
}

/// Every decorated labelled path of size `n`, any number of decorations.
pub fn enumerate_all_decorated(n: usize) -> impl Iterator<Item = DecoratedLabelledPath> {
    enumerate_dyck(n).flat_map(|path| {
        enumerate_labellings(&path)
            .flat_map(|p| all_decorations_of(&p).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    })
}
