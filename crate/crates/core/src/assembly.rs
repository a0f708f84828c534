//! From a bi-infinite power-free word and a factor `w` to a bi-infinite
//! power-free word that still contains `w` but has a letter occurring only
//! finitely often.
//!
//! Recurrence is never inferred from samples. Each letter's behaviour is a
//! [`RecurrenceDeclaration`]; the pipeline only re-checks what a finite
//! window can refute.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::delta::{delta_check, edge_scan, gamma_min_len_usize, glue, DeltaTuple, DeltaVerdict, Edge, GlueResult};
use crate::error::{invalid, Error, Result};
use crate::exponent::{Exponent, PowerBound};
use crate::power::{is_power_free, suffix_violations};
use crate::streams::{concat_left, BiInfiniteWord, LeftInfiniteWord, RightInfiniteWord, StreamMeta, Window};
use crate::words::{is_suffix, occurrences, Letter, Word};

/// Where a letter recurs in a bi-infinite word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Infinitely often to the right, finitely often to the left.
    Right,
    /// Infinitely often to the left, finitely often to the right.
    Left,
    Both,
    /// Finitely often overall.
    None,
}

impl Side {
    pub fn recurs_right(self) -> bool {
        matches!(self, Side::Right | Side::Both)
    }

    pub fn recurs_left(self) -> bool {
        matches!(self, Side::Left | Side::Both)
    }

    pub fn mirrored(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
            s => s,
        }
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Side> {
        match s.trim() {
            "right" => Ok(Side::Right),
            "left" => Ok(Side::Left),
            "both" => Ok(Side::Both),
            "none" => Ok(Side::None),
            other => Err(invalid(format!("unknown side {other:?}; expected right, left, both or none"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
            Side::Both => "both",
            Side::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceDeclaration {
    pub letter: Letter,
    pub side: Side,
    pub provenance: String,
}

impl RecurrenceDeclaration {
    pub fn new(letter: Letter, side: Side) -> Self {
        RecurrenceDeclaration {
            letter,
            side,
            provenance: String::new(),
        }
    }

    pub fn mirrored(&self) -> Self {
        RecurrenceDeclaration {
            side: self.side.mirrored(),
            ..self.clone()
        }
    }
}

fn side_of(decls: &[RecurrenceDeclaration], letter: Letter) -> Option<Side> {
    decls.iter().find(|d| d.letter == letter).map(|d| d.side)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyConfig {
    pub alpha: Exponent,
    pub k: usize,
    /// Letters of the input inspected on each side of position 0, and the
    /// least depth at which tuples are checked.
    pub window: usize,
    /// Longest transition word tried by [`extend_left_avoiding`].
    pub max_depth: usize,
    /// Node budget for searches and scans.
    pub max_expansions: u64,
    /// Letters glued on the right.
    pub steps: usize,
    /// Longest `w` accepted; the required gap grows like `α^|w|`.
    pub max_w_len: usize,
    /// Allows `(k, α)` outside `k >= 3`, `α >= 5`.
    pub unsafe_alpha: bool,
}

impl AssemblyConfig {
    pub fn new(alpha: Exponent, k: usize) -> Self {
        AssemblyConfig {
            alpha,
            k,
            window: 256,
            max_depth: 16,
            max_expansions: 1_000_000,
            steps: 500,
            max_w_len: 6,
            unsafe_alpha: false,
        }
    }

    pub fn bound(&self) -> PowerBound {
        PowerBound::plain(self.alpha)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 3 {
            return Err(invalid(format!("k = {} is below 3; two letters besides x are needed", self.k)));
        }
        if self.alpha.cmp_ratio(2, 1) != std::cmp::Ordering::Greater {
            return Err(invalid(format!("alpha = {} must exceed 2", self.alpha)));
        }
        if !self.unsafe_alpha && self.alpha < Exponent::integer(5).expect("literal") {
            return Err(invalid(format!(
                "alpha = {} is below 5; pass the unsafe override to experiment",
                self.alpha
            )));
        }
        if self.steps == 0 {
            return Err(invalid("glue needs at least one step"));
        }
        Ok(())
    }
}

/// Thue-Morse over the two smallest letters different from `x`, which is
/// 2+-free and avoids `x`.
pub fn seed_word(x: Letter, k: usize) -> Result<RightInfiniteWord> {
    let mut others = (0..k as Letter).filter(|&c| c != x);
    match (others.next(), others.next()) {
        (Some(a), Some(b)) => RightInfiniteWord::thue_morse(a, b),
        _ => Err(invalid(format!("no two letters besides {x} in a {k}-letter alphabet"))),
    }
}

/// A finite `u` such that `z` is a suffix of `s·u` and the inspected
/// window of `s·u` is free. Tries transition words `u'` (with `u = u'·z`)
/// in order of length, then lexicographically.
pub fn extend_left_avoiding(z: &Word, s: &LeftInfiniteWord, cfg: &AssemblyConfig) -> Result<Word> {
    let bound = cfg.bound();
    if !s.meta.satisfies(&bound) {
        return Err(invalid(format!("{} is not declared {bound}-free", s.label())));
    }
    let avoided = match &s.meta.letters {
        Some(l) => (0..cfg.k as Letter).any(|c| !l.contains(&c)),
        None => false,
    };
    if !avoided {
        return Err(invalid(format!("{} does not declare an avoided letter", s.label())));
    }
    if let Some(rep) = is_power_free(z, bound).witness {
        return Err(invalid(format!("z is not {bound}-free: {rep}")));
    }
    if z.is_empty() || is_suffix(z, &s.suffix(z.len())) {
        return Ok(Word::empty());
    }

    let base = s.suffix(cfg.window);
    let mut search = Extension {
        s,
        z,
        bound,
        k: cfg.k,
        budget: cfg.max_expansions,
        nodes: 0,
    };
    for depth in 0..=cfg.max_depth {
        let mut cur = base.clone();
        if let Some(u) = search.descend(&mut cur, base.len(), depth)? {
            return Ok(u);
        }
    }
    Err(Error::SearchExhausted(format!(
        "no transition word of length at most {}",
        cfg.max_depth
    )))
}

struct Extension<'a> {
    s: &'a LeftInfiniteWord,
    z: &'a Word,
    bound: PowerBound,
    k: usize,
    budget: u64,
    nodes: u64,
}

impl Extension<'_> {
    fn descend(&mut self, cur: &mut Word, base: usize, left: usize) -> Result<Option<Word>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchExhausted(format!("more than {} search nodes", self.budget)));
        }
        if left == 0 {
            return self.accept(cur, base);
        }
        for c in 0..self.k as Letter {
            cur.push(c);
            let ok = suffix_violations(cur, self.bound, cur.len()).is_empty();
            if ok {
                if let Some(u) = self.descend(cur, base, left - 1)? {
                    return Ok(Some(u));
                }
            }
            cur.pop();
        }
        Ok(None)
    }

    fn accept(&self, cur: &Word, base: usize) -> Result<Option<Word>> {
        let tail = Word::concat(&[&cur[base..], self.z]);
        let candidate = Word::concat(&[cur, self.z]);
        if !is_power_free(&candidate, self.bound).free {
            return Ok(None);
        }
        match edge_scan(&self.s.concat(&tail), &candidate, tail.len(), self.bound) {
            Edge::Clear => Ok(Some(tail)),
            Edge::Violation(_) => Ok(None),
            Edge::Exhausted(m) => Err(Error::WindowExhausted(m)),
        }
    }
}

fn inspect(v: &BiInfiniteWord, cfg: &AssemblyConfig) -> Result<Window> {
    let d = cfg.window as i64;
    v.window(-d, d)
}

fn find_w(v: &BiInfiniteWord, w: &Word, cfg: &AssemblyConfig) -> Result<i64> {
    if w.is_empty() {
        return Err(invalid("w is empty"));
    }
    let win = inspect(v, cfg)?;
    let occ = occurrences(&win.word, w)?;
    occ.first()
        .map(|&i| win.from + i as i64)
        .ok_or_else(|| invalid(format!("w does not occur in the window [{}, {})", win.from, win.to)))
}

/// `s·σ·w·η·x` cut out of `s0·f`, where `s0` avoids `x` and `f` ends with
/// the marked `x`. `s` stops at the first `x` of `f` or at the first
/// occurrence of `w`, whichever comes first, and `w` is that occurrence.
fn split(s0: &LeftInfiniteWord, f: &Word, w: &Word, x: Letter, cfg: &AssemblyConfig) -> Result<DeltaTuple> {
    let first_x = f.iter().position(|&c| c == x).expect("f ends with x");
    let o = *occurrences(f, w)?
        .first()
        .ok_or_else(|| Error::InternalInconsistency("w vanished from the assembled word".into()))?;
    let c = first_x.min(o);
    let s = if c == 0 {
        s0.clone()
    } else {
        concat_left(s0, &f[..c]).with_meta(StreamMeta {
            bound: s0.meta.bound,
            ..StreamMeta::default()
        })
    };
    let mut t = DeltaTuple {
        s,
        sigma: Word::from(&f[c..o]),
        w: w.clone(),
        eta: Word::from(&f[o + w.len()..f.len() - 1]),
        x,
        u: Word::empty(),
        alpha: cfg.alpha,
        k: cfg.k,
        window: 0,
    };
    t.window = t.min_window().max(cfg.window);
    Ok(t)
}

/// A tuple with `u = ε` whose `w` is an occurrence taken from `v`, with `η`
/// long enough for the Γ bound and `x` the first letter of `w` declared to
/// recur on the right.
pub fn build_delta(
    v: &BiInfiniteWord,
    w: &Word,
    decls: &[RecurrenceDeclaration],
    cfg: &AssemblyConfig,
) -> Result<DeltaTuple> {
    cfg.validate()?;
    if w.len() > cfg.max_w_len {
        return Err(invalid(format!(
            "|w| = {} exceeds the configured ceiling {}",
            w.len(),
            cfg.max_w_len
        )));
    }
    let (x, side) = w
        .iter()
        .find_map(|&c| side_of(decls, c).filter(|s| s.recurs_right()).map(|s| (c, s)))
        .ok_or_else(|| invalid("no letter of w is declared to recur on the right"))?;
    let o = find_w(v, w, cfg)?;
    let gap = gamma_min_len_usize(w.len(), 0, cfg.alpha)
        .ok_or_else(|| invalid("the Γ bound does not fit in memory"))?;

    // the marked x: first occurrence at least `gap` letters after w
    let from = o + (w.len() + gap) as i64;
    let m = (from..from + cfg.max_expansions as i64)
        .find(|&i| v.letter_at(i) == x)
        .ok_or_else(|| {
            Error::SearchExhausted(format!(
                "no {x} within {} letters after position {from}",
                cfg.max_expansions
            ))
        })?;
    let z = v.window(o, m + 1)?.word;
    if let Some(rep) = is_power_free(&z, cfg.bound()).witness {
        return Err(invalid(format!("v is not {}-free: {rep}", cfg.bound())));
    }

    let t = if side == Side::Right {
        // x recurs only on the right: cut v before its leftmost x in view
        let win = inspect(v, cfg)?;
        let q = win.word.iter().position(|&c| c == x).map_or(o, |i| win.from + i as i64);
        let cut = q.min(o);
        let s0 = v.left_of(cut);
        let f = v.window(cut, m + 1)?.word;
        split(&s0, &f, w, x, cfg)?
    } else {
        let s0 = seed_word(x, cfg.k)?.reversed();
        let f = extend_left_avoiding(&z, &s0, cfg)?;
        split(&s0, &f, w, x, cfg)?
    };
    match delta_check(&t)? {
        DeltaVerdict::Valid => Ok(t),
        DeltaVerdict::WindowExhausted(m) => Err(Error::WindowExhausted(m)),
        verdict => Err(invalid(format!("assembled tuple is not valid: {verdict}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTaken {
    /// Some letter already occurs finitely often; the input is returned.
    NonRecurrentLetter,
    /// The marked letter recurs on the right; glue a seed word after it.
    Glue,
    /// The marked letter recurs only on the left; glue on the reversal.
    Mirrored,
}

impl fmt::Display for CaseTaken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTaken::NonRecurrentLetter => "non-recurrent-letter",
            CaseTaken::Glue => "glue",
            CaseTaken::Mirrored => "mirrored",
        })
    }
}

#[derive(Debug, Clone)]
pub struct NonrecurReport {
    pub case_taken: CaseTaken,
    pub x: Letter,
    pub w_position: i64,
    pub marked_x_position: Option<i64>,
    /// The verified part of the output.
    pub window: Window,
    pub window_checked_len: usize,
    pub verdict: String,
    /// Occurrences of `x` in the window on the tail side of the marked `x`.
    pub x_on_tail_side: usize,
    pub glue: Option<GlueResult>,
}

impl fmt::Display for NonrecurReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case_taken={} x={} w_position={} marked_x_position={} window=[{},{}) window_checked_len={} verdict={} x_on_tail_side={}",
            self.case_taken,
            self.x,
            self.w_position,
            self.marked_x_position.map_or("-".into(), |p| p.to_string()),
            self.window.from,
            self.window.to,
            self.window_checked_len,
            self.verdict,
            self.x_on_tail_side
        )
    }
}

/// A bi-infinite word containing `w` in which the returned letter occurs
/// only finitely often, plus a report on the inspected window.
pub fn nonrecur(
    v: &BiInfiniteWord,
    w: &Word,
    decls: &[RecurrenceDeclaration],
    cfg: &AssemblyConfig,
) -> Result<(BiInfiniteWord, Letter, NonrecurReport)> {
    cfg.validate()?;
    let declared: BTreeSet<Letter> = decls.iter().map(|d| d.letter).collect();
    if declared.len() != decls.len() {
        return Err(invalid("a letter is declared more than once"));
    }
    if let Some(d) = decls.iter().find(|d| (d.letter as usize) >= cfg.k) {
        return Err(invalid(format!("declared letter {} outside the alphabet", d.letter)));
    }
    let o = find_w(v, w, cfg)?;

    if let Some(q) = decls.iter().find(|d| d.side == Side::None).map(|d| d.letter) {
        let win = inspect(v, cfg)?;
        let verdict = is_power_free(&win.word, cfg.bound());
        let report = NonrecurReport {
            case_taken: CaseTaken::NonRecurrentLetter,
            x: q,
            w_position: o,
            marked_x_position: None,
            window_checked_len: win.len(),
            verdict: verdict_text(&verdict.witness, cfg),
            x_on_tail_side: 0,
            window: win,
            glue: None,
        };
        return Ok((v.clone(), q, report));
    }

    let right = w.iter().any(|&c| side_of(decls, c).is_some_and(Side::recurs_right));
    if right {
        return glue_branch(v, w, decls, cfg);
    }
    if !w.iter().any(|&c| side_of(decls, c).is_some_and(Side::recurs_left)) {
        return Err(invalid("no letter of w has a recurrence declaration"));
    }
    let mirrored: Vec<RecurrenceDeclaration> = decls.iter().map(|d| d.mirrored()).collect();
    let (out, x, inner) = glue_branch(&v.reversed(), &w.reversed(), &mirrored, cfg)?;
    let report = NonrecurReport {
        case_taken: CaseTaken::Mirrored,
        x,
        w_position: -inner.w_position - w.len() as i64,
        marked_x_position: inner.marked_x_position.map(|p| -p - 1),
        window: inner.window.reversed(),
        ..inner
    };
    Ok((out.reversed(), x, report))
}

fn verdict_text(witness: &Option<crate::power::Repetition>, cfg: &AssemblyConfig) -> String {
    match witness {
        None => "free".into(),
        Some(r) => format!("not {}-free: {r}", cfg.bound()),
    }
}

fn glue_branch(
    v: &BiInfiniteWord,
    w: &Word,
    decls: &[RecurrenceDeclaration],
    cfg: &AssemblyConfig,
) -> Result<(BiInfiniteWord, Letter, NonrecurReport)> {
    let t0 = build_delta(v, w, decls, cfg)?;
    let x = t0.x;
    let seed = seed_word(x, cfg.k)?;
    let g = glue(&t0, &seed, cfg.steps)?;
    let t = &g.tuple;

    let head = Word::concat(&[&t.sigma, &t.w, &g.eta_hat, &[x]]);
    let left = concat_left(&t.s, &head).with_meta(StreamMeta {
        bound: Some(cfg.bound()),
        ..StreamMeta::default()
    });
    let meta = StreamMeta {
        bound: Some(cfg.bound()),
        letters: None,
        recurrent: seed.meta.recurrent.clone(),
    };
    let out = BiInfiniteWord::new(left, seed).with_meta(meta);

    let from = -((head.len() + t.window) as i64);
    let to = cfg.steps as i64;
    let window = out.window(from, to)?;
    let verdict = is_power_free(&window.word, cfg.bound());
    if let Some(rep) = &verdict.witness {
        return Err(Error::ConstructionFailure(format!("output window fails: {rep}")));
    }
    let w_position = -((t.w.len() + g.eta_hat.len() + 1) as i64);
    let x_on_tail_side = window.word[(-from) as usize..].iter().filter(|&&c| c == x).count();
    let report = NonrecurReport {
        case_taken: CaseTaken::Glue,
        x,
        w_position,
        marked_x_position: Some(-1),
        window_checked_len: window.len(),
        verdict: verdict_text(&verdict.witness, cfg),
        x_on_tail_side,
        window,
        glue: Some(g),
    };
    Ok((out, x, report))
}

#[cfg(test)]
mod tests;
