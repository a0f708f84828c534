//! Fractional repetitions in finite words.
//!
//! [`max_exponent`] finds the critical exponent of a word. A factor of
//! period `p` starting at `i` can be extended for exactly `lce(i, i + p)`
//! letters past its first period, so the critical exponent is
//! `1 + max lce(i, j) / (j - i)` over pairs `i < j`. For every internal
//! node of the (implicit) suffix tree at string depth `d`, the best pair in
//! its subtree is the one with the smallest position gap, so we walk the
//! LCP intervals bottom-up and keep, per interval, the sorted set of leaf
//! positions merged small-into-large. That is `O(n log^2 n)`.

mod suffix_array;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{invalid, Result};
use crate::exponent::{Exponent, PowerBound};
use crate::par::{self, Exec};
use crate::words::{Alphabet, Letter, Word};

pub(crate) use suffix_array::z_function;

/// An occurrence of `r^exponent` at `[start, end)` with `|r| = period_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repetition {
    pub period_len: usize,
    pub start: usize,
    pub end: usize,
    pub exponent: Exponent,
    /// The factor at `[start, start + period_len)`.
    pub period_word: Word,
}

impl Repetition {
    pub fn new(w: &[Letter], start: usize, end: usize, period_len: usize) -> Self {
        debug_assert!(period_len > 0 && end - start >= period_len);
        Repetition {
            period_len,
            start,
            end,
            exponent: Exponent::of_length(end - start, period_len),
            period_word: Word::from(&w[start..start + period_len]),
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    /// The last `period_len` letters of the occurrence. For a repetition
    /// anchored at the end of a word this is the period that the word
    /// currently ends with.
    pub fn trailing_period(&self, w: &[Letter]) -> Word {
        Word::from(&w[self.end - self.period_len..self.end])
    }

    /// Re-checks the repetition in place against `w`.
    pub fn holds_in(&self, w: &[Letter]) -> bool {
        self.period_len > 0
            && self.start + self.period_len <= self.end
            && self.end <= w.len()
            && self.exponent == Exponent::of_length(self.len(), self.period_len)
            && self.period_word.letters() == &w[self.start..self.start + self.period_len]
            && (self.start..self.end - self.period_len).all(|i| w[i] == w[i + self.period_len])
    }

    /// `"β r=WORD [start,end)"`.
    pub fn describe(&self, alphabet: &Alphabet) -> String {
        format!(
            "{} r={} [{},{})",
            self.exponent,
            alphabet.render(&self.period_word),
            self.start,
            self.end
        )
    }
}

impl fmt::Display for Repetition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} r={} [{},{})",
            self.exponent, self.period_word, self.start, self.end
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub free: bool,
    pub witness: Option<Repetition>,
}

impl Verdict {
    pub fn free() -> Self {
        Verdict {
            free: true,
            witness: None,
        }
    }

    fn violated(witness: Repetition) -> Self {
        Verdict {
            free: false,
            witness: Some(witness),
        }
    }
}

#[derive(Default)]
struct Positions {
    set: BTreeSet<u32>,
    /// smallest (gap, left position) among adjacent members
    best: Option<(u32, u32)>,
}

impl Positions {
    fn leaf(p: u32) -> Self {
        let mut set = BTreeSet::new();
        set.insert(p);
        Positions { set, best: None }
    }

    fn absorb(mut self, mut other: Positions) -> Positions {
        if self.set.len() < other.set.len() {
            std::mem::swap(&mut self, &mut other);
        }
        let mut best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for q in other.set {
            if let Some(&pred) = self.set.range(..q).next_back() {
                let cand = (q - pred, pred);
                best = Some(best.map_or(cand, |b| b.min(cand)));
            }
            if let Some(&succ) = self.set.range(q + 1..).next() {
                let cand = (succ - q, q);
                best = Some(best.map_or(cand, |b| b.min(cand)));
            }
            self.set.insert(q);
        }
        self.best = best;
        self
    }
}

/// Best (depth, gap, start) seen so far: maximize depth/gap, then smallest
/// gap, then smallest start.
#[derive(Clone, Copy)]
struct Best {
    depth: u32,
    gap: u32,
    start: u32,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        let lhs = self.depth as u64 * other.gap as u64;
        let rhs = other.depth as u64 * self.gap as u64;
        lhs > rhs || (lhs == rhs && (self.gap, self.start) < (other.gap, other.start))
    }
}

/// The maximal exponent over all factor repetitions of `w`, with a witness.
///
/// Ties are broken by smallest period, then smallest start. A word without
/// any repeated letter has exponent 1, witnessed by its first letter.
pub fn max_exponent(w: &[Letter]) -> Result<Repetition> {
    if w.is_empty() {
        return Err(invalid("maximal exponent of the empty word"));
    }
    let n = w.len();
    if n > u32::MAX as usize / 2 {
        return Err(invalid("word too long"));
    }
    let sa = suffix_array::suffix_array(w);
    let lcp = suffix_array::lcp_array(w, &sa);

    let mut best: Option<Best> = None;
    let mut consider = |depth: u32, node: &Positions| {
        if let Some((gap, start)) = node.best {
            let cand = Best { depth, gap, start };
            if best.is_none_or(|b| cand.better_than(&b)) {
                best = Some(cand);
            }
        }
    };

    let mut stack: Vec<(u32, Positions)> = vec![(0, Positions::default())];
    let mut pending = Positions::leaf(sa[0]);
    for i in 1..=n {
        let h = if i < n { lcp[i] } else { 0 };
        while stack.last().expect("root stays").0 > h {
            let (d, node) = stack.pop().expect("checked");
            let node = node.absorb(pending);
            consider(d, &node);
            pending = node;
        }
        let top = stack.last_mut().expect("root stays");
        if top.0 == h {
            let merged = std::mem::take(&mut top.1).absorb(pending);
            top.1 = merged;
        } else {
            stack.push((h, pending));
        }
        pending = if i < n {
            Positions::leaf(sa[i])
        } else {
            Positions::default()
        };
    }

    Ok(match best {
        Some(b) if b.depth > 0 => {
            let start = b.start as usize;
            Repetition::new(w, start, start + (b.gap + b.depth) as usize, b.gap as usize)
        }
        _ => Repetition::new(w, 0, 1, 1),
    })
}

pub fn is_power_free(w: &[Letter], bound: PowerBound) -> Verdict {
    if w.is_empty() {
        return Verdict::free();
    }
    let rep = max_exponent(w).expect("nonempty word");
    if bound.forbids(rep.exponent) {
        Verdict::violated(rep)
    } else {
        Verdict::free()
    }
}

/// For each period `p` in `1..|w|`, the length of the longest suffix of `w`
/// with period `p` (index 0 is unused and set to 0).
pub fn suffix_periodic_lengths(w: &[Letter]) -> Vec<usize> {
    let n = w.len();
    let rev: Vec<Letter> = w.iter().rev().copied().collect();
    let z = z_function(&rev);
    let mut out = vec![0usize; n];
    for p in 1..n {
        out[p] = p + z[p];
    }
    out
}

/// Every repetition ending at `|w|` whose length is at most `max_power_len`
/// and whose exponent (maximal for its period under that cap) violates
/// `bound`. Sorted by decreasing length, then increasing period.
pub fn suffix_violations(w: &[Letter], bound: PowerBound, max_power_len: usize) -> Vec<Repetition> {
    let n = w.len();
    let cap = max_power_len.min(n);
    let lens = suffix_periodic_lengths(w);
    let mut out: Vec<Repetition> = (1..n)
        .filter(|&p| p <= cap)
        .filter_map(|p| {
            let len = lens[p].min(cap);
            bound
                .forbids_ratio(len, p)
                .then(|| Repetition::new(w, n - len, n, p))
        })
        .collect();
    if n >= 1 && cap == n && bound.forbids_ratio(n, n) {
        // a period equal to the whole word only matters for thresholds <= 1
        out.push(Repetition::new(w, 0, n, n));
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a.period_len.cmp(&b.period_len)));
    out
}

/// [`max_exponent`] over a batch of words.
pub fn max_exponents(words: &[Word], exec: Exec) -> Vec<Result<Repetition>> {
    par::map(exec, words, |w| max_exponent(w))
}

/// [`is_power_free`] over a batch of words.
pub fn check_all(words: &[Word], bound: PowerBound, exec: Exec) -> Vec<Verdict> {
    par::map(exec, words, |w| is_power_free(w, bound))
}
