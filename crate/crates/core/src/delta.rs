//! Tuples `(s, σ, w, η, x, u)` whose left-infinite word `s·σ·w·η·x·u` is
//! power-free, and the machinery that keeps them valid while letters are
//! appended to `u`.
//!
//! Every statement about the infinite word `s` is checked on a window of
//! its last letters. When a periodic stretch crosses the window's left edge
//! the checker reads further into `s` before giving up, so a verdict is
//! either exact or explicitly reported as window-exhausted.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::exponent::{Exponent, PowerBound};
use crate::power::{is_power_free, suffix_periodic_lengths, z_function, Repetition};
use crate::streams::{LeftInfiniteWord, RightInfiniteWord, Window};
use crate::words::{is_prefix, is_suffix, occurrences, periodic_suffix, Letter, Word, DEFAULT_SYMBOLS};

/// The length condition tying `η` to `w` and `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTriple {
    pub w: Word,
    pub eta: Word,
    pub u: Word,
    pub alpha: Exponent,
}

impl GammaTriple {
    pub fn holds(&self) -> bool {
        gamma_holds(self)
    }
}

/// `|u| > |w|`, or `|η| >= (α+1)·α^(|w|-|u|)·|w|`, evaluated exactly.
pub fn gamma_holds(g: &GammaTriple) -> bool {
    match gamma_min_eta_len(g.w.len(), g.u.len(), g.alpha) {
        None => true,
        Some(min) => BigUint::from(g.eta.len()) >= min,
    }
}

/// Smallest `|η|` satisfying the Γ bound, or `None` when `|u| > |w|` makes
/// the bound vacuous.
pub fn gamma_min_eta_len(w_len: usize, u_len: usize, alpha: Exponent) -> Option<BigUint> {
    if u_len > w_len {
        return None;
    }
    let e = (w_len - u_len) as u32;
    let (a, b) = (BigUint::from(alpha.num()), BigUint::from(alpha.den()));
    // |η|·b^(e+1) >= (a+b)·a^e·|w|
    let top = (&a + &b) * a.pow(e) * BigUint::from(w_len);
    Some(top.div_ceil(&b.pow(e + 1)))
}

/// The same bound as a `usize`, when it fits.
pub(crate) fn gamma_min_len_usize(w_len: usize, u_len: usize, alpha: Exponent) -> Option<usize> {
    match gamma_min_eta_len(w_len, u_len, alpha) {
        None => Some(0),
        Some(n) => usize::try_from(n).ok(),
    }
}

#[derive(Debug, Clone)]
pub struct DeltaTuple {
    pub s: LeftInfiniteWord,
    pub sigma: Word,
    pub w: Word,
    pub eta: Word,
    pub x: Letter,
    pub u: Word,
    pub alpha: Exponent,
    pub k: usize,
    /// How many trailing letters of `s·σ·w·η·x·u` are inspected.
    pub window: usize,
}

impl DeltaTuple {
    pub fn bound(&self) -> PowerBound {
        PowerBound::plain(self.alpha)
    }

    /// `σ·w·η·x·u`.
    pub fn finite_part(&self) -> Word {
        Word::concat(&[&self.sigma, &self.w, &self.eta, &[self.x], &self.u])
    }

    /// Smallest admissible window for the current finite part.
    pub fn min_window(&self) -> usize {
        self.min_window_for(self.eta.len(), self.u.len())
    }

    fn min_window_for(&self, eta_len: usize, u_len: usize) -> usize {
        let finite = self.sigma.len() + self.w.len() + eta_len + 1 + u_len;
        let margin = 2 * self.alpha.num() as usize * self.w.len().max(u_len).max(1);
        finite + margin
    }

    /// `s·σ·w·η·x·u` as a left-infinite word.
    pub fn left_word(&self) -> LeftInfiniteWord {
        self.s.concat(&self.finite_part())
    }

    /// The last `window` letters of `s·σ·w·η·x·u`.
    pub fn window_word(&self) -> Word {
        self.left_word().suffix(self.window)
    }

    fn gamma(&self) -> GammaTriple {
        GammaTriple {
            w: self.w.clone(),
            eta: self.eta.clone(),
            u: self.u.clone(),
            alpha: self.alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaVerdict {
    Valid,
    /// `item` numbers the failed condition: 1 shapes, 2 power-freeness,
    /// 3 the Γ bound, 4 uniqueness of `w`, 5 absence of `x`.
    Violated {
        item: u8,
        reason: String,
        witness: Option<Repetition>,
    },
    WindowExhausted(String),
}

impl DeltaVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, DeltaVerdict::Valid)
    }

    fn violated(item: u8, reason: impl Into<String>) -> Self {
        DeltaVerdict::Violated {
            item,
            reason: reason.into(),
            witness: None,
        }
    }
}

impl fmt::Display for DeltaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaVerdict::Valid => write!(f, "valid"),
            DeltaVerdict::Violated { item, reason, witness } => {
                write!(f, "violated item {item}: {reason}")?;
                if let Some(r) = witness {
                    write!(f, " ({r})")?;
                }
                Ok(())
            }
            DeltaVerdict::WindowExhausted(m) => write!(f, "window exhausted: {m}"),
        }
    }
}

/// How many letters left of the last `depth` letters of `word` continue
/// period `p`, stopping early once `stop` accepts the count. Reads at most
/// `cap` letters; `None` means the cap was hit.
fn extend_left(word: &LeftInfiniteWord, depth: usize, p: usize, cap: usize, stop: impl Fn(usize) -> bool) -> Option<usize> {
    let mut e = 0usize;
    loop {
        if stop(e) {
            return Some(e);
        }
        if e == cap {
            return None;
        }
        let pos = -((depth + e) as i64) - 1;
        if word.letter_at(pos) != word.letter_at(pos + p as i64) {
            return Some(e);
        }
        e += 1;
    }
}

pub(crate) enum Edge {
    Clear,
    /// Positions are relative to the suffix starting where the power does.
    Violation(Repetition),
    Exhausted(String),
}

/// Looks for forbidden powers that start left of `ww` (the last `|ww|`
/// letters of `word`) and reach into its last `untrusted` letters.
/// Everything further left is assumed free.
pub(crate) fn edge_scan(word: &LeftInfiniteWord, ww: &[Letter], untrusted: usize, bound: PowerBound) -> Edge {
    let n = ww.len();
    let trusted = n.saturating_sub(untrusted);
    let z = z_function(ww);
    for (p, &zp) in z.iter().enumerate().skip(1) {
        let len = p + zp;
        if len <= trusted {
            continue;
        }
        let stop = |e: usize| bound.forbids_ratio(len + e, p);
        match extend_left(word, n, p, n, stop) {
            None => return Edge::Exhausted(format!("period {p} runs more than {n} letters past the window")),
            Some(e) if bound.forbids_ratio(len + e, p) => {
                let ext = word.suffix(n + e);
                return Edge::Violation(Repetition::new(&ext, 0, len + e, p));
            }
            Some(_) => {}
        }
    }
    Edge::Clear
}

/// Checks the five conditions on the tuple's window.
pub fn delta_check(t: &DeltaTuple) -> Result<DeltaVerdict> {
    let need = t.min_window();
    if t.window < need {
        return Err(invalid(format!(
            "window {} is smaller than the required {need}",
            t.window
        )));
    }
    let k = t.k;
    let finite = t.finite_part();
    let s_window = t.s.suffix(t.window);

    if t.w.is_empty() {
        return Ok(DeltaVerdict::violated(1, "w is empty"));
    }
    if t.alpha.cmp_ratio(1, 1) != std::cmp::Ordering::Greater {
        return Ok(DeltaVerdict::violated(1, format!("alpha {} is not above 1", t.alpha)));
    }
    if (t.x as usize) >= k || finite.iter().chain(s_window.iter()).any(|&c| c as usize >= k) {
        return Ok(DeltaVerdict::violated(1, format!("a letter lies outside the {k}-letter alphabet")));
    }

    // item 2: inside the window, then stretches crossing its left edge
    let word = t.left_word();
    let ww = word.suffix(t.window);
    let verdict = is_power_free(&ww, t.bound());
    if let Some(rep) = verdict.witness {
        return Ok(DeltaVerdict::Violated {
            item: 2,
            reason: format!("the window contains a {} power", rep.exponent),
            witness: Some(rep),
        });
    }
    match edge_scan(&word, &ww, finite.len(), t.bound()) {
        Edge::Clear => {}
        Edge::Exhausted(m) => return Ok(DeltaVerdict::WindowExhausted(m)),
        Edge::Violation(rep) => {
            return Ok(DeltaVerdict::Violated {
                item: 2,
                reason: format!("a {} power crosses the window edge", rep.exponent),
                witness: Some(rep),
            })
        }
    }

    if !t.gamma().holds() {
        return Ok(DeltaVerdict::violated(
            3,
            format!(
                "|eta| = {} is below the bound for |w| = {}, |u| = {}",
                t.eta.len(),
                t.w.len(),
                t.u.len()
            ),
        ));
    }

    let sw = t.s.concat(&Word::concat(&[&t.sigma, &t.w])).suffix(t.window);
    let occ = occurrences(&sw, &t.w)?;
    if occ != [sw.len() - t.w.len()] {
        return Ok(DeltaVerdict::violated(
            4,
            format!("w occurs {} times in the window of s·σ·w", occ.len()),
        ));
    }

    if t.u.contains(&t.x) {
        return Ok(DeltaVerdict::violated(5, "x occurs in u"));
    }
    if s_window.contains(&t.x) {
        return Ok(DeltaVerdict::violated(5, "x occurs in the window of s"));
    }
    Ok(DeltaVerdict::Valid)
}

fn require_valid(t: &DeltaTuple) -> Result<()> {
    match delta_check(t)? {
        DeltaVerdict::Valid => Ok(()),
        DeltaVerdict::WindowExhausted(m) => Err(Error::WindowExhausted(m)),
        v => Err(invalid(format!("tuple is not valid: {v}"))),
    }
}

/// For every period, the true length of the longest suffix of
/// `s·σ·w·η·x·u·y` with that period, reading past the window when the
/// stretch reaches its edge.
struct SuffixScan {
    word: LeftInfiniteWord,
    lens: Vec<usize>,
}

fn scan_suffixes(t: &DeltaTuple, y: Letter) -> Result<SuffixScan> {
    let mut f = t.finite_part();
    f.push(y);
    let word = t.s.concat(&f);
    let n = t.window.max(f.len() + 1);
    let ww = word.suffix(n);
    let mut lens = suffix_periodic_lengths(&ww);
    for (p, len) in lens.iter_mut().enumerate().skip(1) {
        if *len == n {
            match extend_left(&word, n, p, n, |_| false) {
                Some(e) => *len += e,
                None => {
                    return Err(Error::WindowExhausted(format!(
                        "suffix with period {p} runs more than {n} letters past the window"
                    )))
                }
            }
        }
    }
    Ok(SuffixScan { word, lens })
}

impl SuffixScan {
    fn violations(&self, bound: PowerBound) -> Vec<Repetition> {
        let longest = self.lens.iter().copied().max().unwrap_or(0).max(self.lens.len());
        let ww = self.word.suffix(longest);
        let mut out: Vec<Repetition> = self
            .lens
            .iter()
            .enumerate()
            .skip(1)
            .filter(|&(p, &len)| bound.forbids_ratio(len, p))
            .map(|(p, &len)| Repetition::new(&ww, longest - len, longest, p))
            .collect();
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a.period_len.cmp(&b.period_len)));
        out
    }

    /// A violation lying inside the last `tail` letters, if any.
    fn violation_within(&self, bound: PowerBound, tail: usize) -> Option<(usize, usize)> {
        (1..self.lens.len().min(tail + 1))
            .map(|p| (p, self.lens[p].min(tail)))
            .find(|&(p, len)| bound.forbids_ratio(len, p))
    }
}

fn check_letter(t: &DeltaTuple, y: Letter) -> Result<()> {
    if y == t.x {
        return Err(invalid("the appended letter equals x"));
    }
    if y as usize >= t.k {
        return Err(invalid(format!("letter {y} outside the {}-letter alphabet", t.k)));
    }
    Ok(())
}

/// Repetitions ending at the last letter of `s·σ·w·η·x·u·y` whose exponent
/// the tuple's bound forbids, longest first and then by period. Positions
/// are relative to the suffix that ends at `y` and starts where the
/// longest of them starts.
pub fn pi_set(t: &DeltaTuple, y: Letter) -> Result<Vec<Repetition>> {
    check_letter(t, y)?;
    require_valid(t)?;
    let mut uy = t.u.clone();
    uy.push(y);
    if let Some(rep) = is_power_free(&uy, t.bound()).witness {
        return Err(invalid(format!("u·y is not free: {rep}")));
    }
    Ok(scan_suffixes(t, y)?.violations(t.bound()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShrinkCase {
    /// The power lies inside `η·x·u·y`.
    A,
    /// The power reaches back into `w`.
    B,
}

impl fmt::Display for ShrinkCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShrinkCase::A => "A",
            ShrinkCase::B => "B",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ShrinkOutcome {
    pub eta_bar: Word,
    pub case_tag: ShrinkCase,
    pub chosen: Repetition,
    pub z_len: usize,
    pub eta_len_before: usize,
    /// The tuple after the shrink, with `u` extended by `y`.
    pub next: DeltaTuple,
}

fn inconsistent(msg: impl Into<String>) -> Error {
    Error::InternalInconsistency(msg.into())
}

/// Replaces `η` by a prefix so that appending `y` no longer creates the
/// power `viol`, and re-validates the resulting tuple.
pub fn shrink_eta(t: &DeltaTuple, y: Letter, viol: &Repetition) -> Result<ShrinkOutcome> {
    check_letter(t, y)?;
    let p = viol.period_len;
    let len = viol.len();
    if p == 0 || len < p || viol.exponent != Exponent::of_length(len, p) {
        return Err(invalid(format!("malformed repetition {viol}")));
    }
    if !t.bound().forbids(viol.exponent) {
        return Err(invalid(format!("exponent {} is allowed by {}", viol.exponent, t.bound())));
    }
    let mut f = t.finite_part();
    f.push(y);
    let full = t.s.concat(&f);
    let periodic = (0..len - p).all(|i| {
        let pos = -(i as i64) - 1;
        full.letter_at(pos) == full.letter_at(pos - p as i64)
    });
    if !periodic {
        return Err(invalid(format!("{viol} is not a suffix of s·σ·w·η·x·u·y")));
    }

    let xuy = Word::concat(&[&[t.x], &t.u, &[y]]);
    let r = full.suffix(p);
    if p < xuy.len() || !is_suffix(&xuy, &r) {
        return Err(inconsistent(format!(
            "x·u·y is not a suffix of the period {} of the chosen power",
            Word::from(&r[..])
        )));
    }
    let r_bar = Word::from(&r[..p - xuy.len()]);
    if len < 2 * p {
        return Err(inconsistent(format!("exponent {} is below 2", viol.exponent)));
    }
    let tail = Word::concat(&[&t.eta, &xuy]);

    let (case_tag, z_len, eta_bar) = if len <= tail.len() {
        // η·x·u·y = z·r^β, η̄ = z·r^(β-2)·r̄
        let z = &tail[..tail.len() - len];
        if Word::concat(&[z, &periodic_suffix(&r, len)]) != tail {
            return Err(inconsistent("η·x·u·y does not factor as z·r^β"));
        }
        let eta_bar = Word::concat(&[z, &periodic_suffix(&r, len - 2 * p), &r_bar]);
        if eta_bar.len() != z.len() + (len - 2 * p) + r_bar.len() {
            return Err(inconsistent("length identity failed in case A"));
        }
        (ShrinkCase::A, z.len(), eta_bar)
    } else {
        if p <= t.w.len() {
            return Err(inconsistent(format!(
                "power overruns η·x·u·y but its period {p} is not longer than w"
            )));
        }
        // z·r^(β-1) = w·η·x·u·y, w·η̄·x·u·y = z·r^(β-2)
        let wtail = Word::concat(&[&t.w, &tail]);
        if len - p > wtail.len() {
            return Err(inconsistent("r^(β-1) is not a suffix of w·η·x·u·y"));
        }
        let z = &wtail[..wtail.len() - (len - p)];
        let shorter = Word::concat(&[z, &periodic_suffix(&r, len - 2 * p)]);
        if shorter.len() < t.w.len() + xuy.len()
            || !is_prefix(&t.w, &shorter)
            || !is_suffix(&xuy, &shorter)
        {
            return Err(inconsistent("z·r^(β-2) does not have the form w·η̄·x·u·y"));
        }
        let eta_bar = Word::from(&shorter[t.w.len()..shorter.len() - xuy.len()]);
        (ShrinkCase::B, z.len(), eta_bar)
    };
    if !is_prefix(&eta_bar, &t.eta) {
        return Err(inconsistent(format!("case {case_tag} result is not a prefix of η")));
    }

    let mut next = t.clone();
    next.eta = eta_bar.clone();
    next.u.push(y);
    next.window = next.window.max(next.min_window());
    match delta_check(&next)? {
        DeltaVerdict::Valid => {}
        DeltaVerdict::WindowExhausted(m) => return Err(Error::WindowExhausted(m)),
        DeltaVerdict::Violated { item: 3, reason, .. } => {
            return Err(Error::ConstructionFailure(format!("after case {case_tag} shrink: {reason}")))
        }
        v => return Err(inconsistent(format!("after case {case_tag} shrink: {v}"))),
    }
    Ok(ShrinkOutcome {
        eta_bar,
        case_tag,
        chosen: viol.clone(),
        z_len,
        eta_len_before: t.eta.len(),
        next,
    })
}

/// One appended letter of the glue run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub j: usize,
    pub y: Letter,
    pub pi_size: usize,
    pub case: Option<ShrinkCase>,
    pub eta_len_before: usize,
    pub eta_len_after: usize,
    pub chosen_period_len: Option<usize>,
    pub chosen_exponent: Option<Exponent>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y = DEFAULT_SYMBOLS
            .chars()
            .nth(self.y as usize)
            .map_or_else(|| self.y.to_string(), String::from);
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        write!(
            f,
            "j={} y={} pi_size={} case={} eta_len_before={} eta_len_after={} \
             chosen_period_len={} chosen_exponent_num={} chosen_exponent_den={}",
            self.j,
            y,
            self.pi_size,
            opt(self.case.map(|c| c.to_string())),
            self.eta_len_before,
            self.eta_len_after,
            opt(self.chosen_period_len.map(|p| p.to_string())),
            opt(self.chosen_exponent.map(|e| e.num().to_string())),
            opt(self.chosen_exponent.map(|e| e.den().to_string())),
        )
    }
}

#[derive(Debug, Clone)]
pub struct GlueResult {
    pub eta_hat: Word,
    /// Last step that shrank `η`, or 0 when none did.
    pub stabilized_at: usize,
    pub trace: Vec<TraceStep>,
    /// The checked suffix of `s·σ·w·η̂·x·φ(N)`, with `x` at position -1.
    pub final_window: Window,
    /// The tuple after the last step; its `u` is `φ(N)`.
    pub tuple: DeltaTuple,
}

impl GlueResult {
    pub fn shrinks(&self) -> usize {
        self.trace.iter().filter(|s| s.case.is_some()).count()
    }

    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Appends the first `steps` letters of `t` to `u`, shrinking `η` whenever
/// a forbidden power appears at the end.
pub fn glue(t0: &DeltaTuple, t: &RightInfiniteWord, steps: usize) -> Result<GlueResult> {
    if steps == 0 {
        return Err(invalid("glue needs at least one step"));
    }
    if !t0.u.is_empty() {
        return Err(invalid("glue starts from a tuple with empty u"));
    }
    if !t.meta.avoids(t0.x) {
        return Err(invalid(format!("{} is not declared to avoid x", t.label())));
    }
    if !t.meta.satisfies(&t0.bound()) {
        return Err(invalid(format!("{} is not declared {}-free", t.label(), t0.bound())));
    }
    require_valid(t0)?;

    let bound = t0.bound();
    let mut cur = t0.clone();
    let mut trace = Vec::with_capacity(steps);
    let mut stabilized_at = 0;
    for j in 1..=steps {
        let y = t.letter_at(j as u64 - 1);
        check_letter(&cur, y).map_err(|e| invalid(format!("letter {} of {}: {e}", j - 1, t.label())))?;
        cur.window = cur.window.max(cur.min_window_for(cur.eta.len(), cur.u.len() + 1));
        let scan = scan_suffixes(&cur, y)?;
        if let Some((p, len)) = scan.violation_within(bound, cur.u.len() + 1) {
            return Err(invalid(format!(
                "the declared {bound}-free word {} has a power of period {p} and length {len} in its first {j} letters",
                t.label()
            )));
        }
        let pi = scan.violations(bound);
        let before = cur.eta.len();
        let mut step = TraceStep {
            j,
            y,
            pi_size: pi.len(),
            case: None,
            eta_len_before: before,
            eta_len_after: before,
            chosen_period_len: None,
            chosen_exponent: None,
        };
        if let Some(viol) = pi.first() {
            let out = shrink_eta(&cur, y, viol)?;
            step.case = Some(out.case_tag);
            step.eta_len_after = out.eta_bar.len();
            step.chosen_period_len = Some(viol.period_len);
            step.chosen_exponent = Some(viol.exponent);
            cur = out.next;
            stabilized_at = j;
        } else {
            cur.u.push(y);
        }
        trace.push(step);
    }

    match delta_check(&cur)? {
        DeltaVerdict::Valid => {}
        DeltaVerdict::WindowExhausted(m) => return Err(Error::WindowExhausted(m)),
        v => return Err(Error::ConstructionFailure(format!("final tuple: {v}"))),
    }
    let word = cur.window_word();
    let n = steps as i64;
    let final_window = Window {
        from: n - word.len() as i64,
        to: n,
        word,
    };
    Ok(GlueResult {
        eta_hat: cur.eta.clone(),
        stabilized_at,
        trace,
        final_window,
        tuple: cur,
    })
}
