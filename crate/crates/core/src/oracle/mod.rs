//! Brute-force oracles and exhaustive small-scale experiments.
//!
//! Nothing in this module shares code with the fast paths it checks.

mod lemmas;

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{invalid, Error, Result};
use crate::exponent::{Exponent, PowerBound};
use crate::par::{self, Exec};
use crate::power::Repetition;
use crate::words::{Letter, Word};

pub use lemmas::{verify_lemmas, verify_lemmas_with, LemmaCounts, LemmaFixture, LemmaReport};

/// Longest word the cubic oracle accepts.
pub const BRUTE_MAX_LEN: usize = 500;

/// Default node budget for [`enumerate_power_free`].
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Tries every start and every period, extending each as far as it goes.
pub fn brute_max_exponent(w: &[Letter]) -> Result<Repetition> {
    let n = w.len();
    if n == 0 {
        return Err(invalid("maximal exponent of the empty word"));
    }
    if n > BRUTE_MAX_LEN {
        return Err(invalid(format!(
            "brute-force oracle limited to length {BRUTE_MAX_LEN}, got {n}"
        )));
    }
    // (len, period, start), maximizing len/period
    let mut best = (1usize, 1usize, 0usize);
    for period in 1..=n {
        for start in 0..n + 1 - period {
            let mut end = start + period;
            while end < n && w[end] == w[end - period] {
                end += 1;
            }
            let len = end - start;
            if len * best.1 > best.0 * period {
                best = (len, period, start);
            }
        }
    }
    let (len, period, start) = best;
    Ok(Repetition {
        period_len: period,
        start,
        end: start + len,
        exponent: Exponent::of_length(len, period),
        period_word: Word::from(&w[start..start + period]),
    })
}

/// Verdict derived from [`brute_max_exponent`].
pub fn brute_is_free(w: &[Letter], bound: PowerBound) -> Result<bool> {
    if w.is_empty() {
        return Ok(true);
    }
    Ok(!bound.forbids(brute_max_exponent(w)?.exponent))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub k: usize,
    pub bound: PowerBound,
    pub max_len: usize,
    /// `counts[n]` is the number of free words of length `n`.
    pub counts: Vec<u64>,
    /// `words[n]` lists them, when requested. Order is not specified.
    pub words: Option<Vec<Vec<Word>>>,
}

impl EnumerationResult {
    /// `length<TAB>count` lines.
    pub fn to_tsv(&self) -> String {
        self.counts
            .iter()
            .enumerate()
            .map(|(n, c)| format!("{n}\t{c}\n"))
            .collect()
    }
}

struct Search<'a> {
    k: usize,
    bound: PowerBound,
    max_len: usize,
    budget: u64,
    nodes: &'a AtomicU64,
    counts: Vec<u64>,
    words: Option<Vec<Vec<Word>>>,
}

impl Search<'_> {
    /// `runs[p]` counts consecutive positions `i` with `w[i] == w[i - p]`
    /// ending at the last letter of `cur`.
    fn descend(&mut self, cur: &mut Vec<Letter>, runs: &[u32]) -> Result<()> {
        let n = cur.len();
        self.counts[n] += 1;
        if let Some(words) = self.words.as_mut() {
            words[n].push(Word::from(&cur[..]));
        }
        if n == self.max_len {
            return Ok(());
        }
        let mut next = vec![0u32; n + 2];
        for c in 0..self.k as Letter {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
                return Err(Error::BudgetExceeded(format!(
                    "more than {} search nodes",
                    self.budget
                )));
            }
            let mut ok = !self.bound.forbids_ratio(n + 1, n + 1);
            for p in 1..=n {
                if !ok {
                    break;
                }
                next[p] = if cur[n - p] == c { runs[p] + 1 } else { 0 };
                ok = !self.bound.forbids_ratio(p + next[p] as usize, p);
            }
            if ok {
                cur.push(c);
                self.descend(cur, &next)?;
                cur.pop();
            }
        }
        Ok(())
    }
}

/// Counts the `bound`-free words over `k` letters of every length up to
/// `max_len` by depth-first extension. Only suffixes are checked on each
/// extension, which suffices because freeness is closed under factors.
///
/// Subtrees below the first two letters are explored in parallel under
/// [`Exec::Parallel`]; counts are deterministic either way.
pub fn enumerate_power_free(
    k: usize,
    bound: PowerBound,
    max_len: usize,
    budget: u64,
    store_words: bool,
    exec: Exec,
) -> Result<EnumerationResult> {
    if k == 0 || k > 256 {
        return Err(invalid(format!("alphabet size {k} outside 1..=256")));
    }
    let nodes = AtomicU64::new(0);
    let split = max_len.min(2);

    // free words of length `split`, found with a single-threaded search
    let mut top = Search {
        k,
        bound,
        max_len: split,
        budget,
        nodes: &nodes,
        counts: vec![0; split + 1],
        words: Some(vec![Vec::new(); split + 1]),
    };
    top.descend(&mut Vec::new(), &[0])?;
    let top_words = top.words.take().expect("stored");
    let roots = top_words[split].clone();

    let parts = par::map(exec, &roots, |root| -> Result<Search<'_>> {
        let mut s = Search {
            k,
            bound,
            max_len,
            budget,
            nodes: &nodes,
            counts: vec![0; max_len + 1],
            words: store_words.then(|| vec![Vec::new(); max_len + 1]),
        };
        let mut cur = Vec::with_capacity(max_len);
        let mut runs = vec![0u32; 1];
        for &c in root.iter() {
            let n = cur.len();
            let mut next = vec![0u32; n + 2];
            for p in 1..=n {
                next[p] = if cur[n - p] == c { runs[p] + 1 } else { 0 };
            }
            cur.push(c);
            runs = next;
        }
        s.descend(&mut cur, &runs)?;
        Ok(s)
    });

    let mut counts = vec![0u64; max_len + 1];
    counts[..split].copy_from_slice(&top.counts[..split]);
    let mut words = store_words.then(|| {
        let mut w = vec![Vec::new(); max_len + 1];
        w[..split].clone_from_slice(&top_words[..split]);
        w
    });
    for part in parts {
        let part = part?;
        for (n, c) in part.counts.iter().enumerate() {
            counts[n] += c;
        }
        if let (Some(all), Some(mine)) = (words.as_mut(), part.words) {
            for (n, ws) in mine.into_iter().enumerate() {
                all[n].extend(ws);
            }
        }
    }
    Ok(EnumerationResult {
        k,
        bound,
        max_len,
        counts,
        words,
    })
}

/// Budget from the `POWFREE_BUDGET` environment variable, if set.
pub fn budget_from_env() -> Result<u64> {
    match std::env::var("POWFREE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("POWFREE_BUDGET={v:?} is not a node count"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}
