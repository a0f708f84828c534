//! Infinite words as indexable generators.
//!
//! A stream carries *declared* metadata (a power bound it satisfies, the
//! letters it may use, the letters that recur). Declarations are trusted
//! inputs: consumers re-check the windows they actually inspect and never
//! rely on a declaration where a finite check is possible.
//!
//! Coordinates: a right-infinite word is indexed `0, 1, 2, ...`; a
//! left-infinite word is indexed `..., -3, -2, -1` and stores its letters
//! through a mirror, so position `-i` is mirror index `i - 1`. A bi-infinite
//! word puts position 0 on the first letter of its right part.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::exponent::PowerBound;
use crate::words::{Alphabet, Letter, Word};

type LetterFn = Arc<dyn Fn(u64) -> Letter + Send + Sync>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StreamMeta {
    pub bound: Option<PowerBound>,
    /// Letters the stream may use; `None` means undeclared.
    pub letters: Option<BTreeSet<Letter>>,
    /// Letters declared to occur infinitely often.
    pub recurrent: Option<BTreeSet<Letter>>,
}

impl StreamMeta {
    pub fn avoids(&self, x: Letter) -> bool {
        self.letters.as_ref().is_some_and(|s| !s.contains(&x))
    }

    pub fn satisfies(&self, bound: &PowerBound) -> bool {
        self.bound.is_some_and(|b| b.implies(bound))
    }
}

/// A finite view `[from, to)` of an infinite word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub word: Word,
    pub from: i64,
    pub to: i64,
}

impl Window {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The window of the reversed word covering the mirrored range.
    pub fn reversed(&self) -> Window {
        Window {
            word: self.word.reversed(),
            from: -self.to,
            to: -self.from,
        }
    }
}

fn check_range(from: i64, to: i64) -> Result<()> {
    if from > to {
        return Err(invalid(format!("window [{from},{to}) is reversed")));
    }
    Ok(())
}

#[derive(Clone)]
pub struct RightInfiniteWord {
    f: LetterFn,
    pub meta: StreamMeta,
    label: Arc<str>,
}

impl fmt::Debug for RightInfiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RightInfiniteWord({})", self.label)
    }
}

impl RightInfiniteWord {
    pub fn from_fn(
        label: impl Into<Arc<str>>,
        meta: StreamMeta,
        f: impl Fn(u64) -> Letter + Send + Sync + 'static,
    ) -> Self {
        RightInfiniteWord {
            f: Arc::new(f),
            meta,
            label: label.into(),
        }
    }

    /// The Thue-Morse word over `a, b`: letter `n` is `a` when the binary
    /// expansion of `n` has an even number of ones.
    pub fn thue_morse(a: Letter, b: Letter) -> Result<Self> {
        if a == b {
            return Err(invalid("Thue-Morse letters must differ"));
        }
        let letters: BTreeSet<Letter> = [a, b].into();
        let meta = StreamMeta {
            bound: Some("2+".parse().expect("literal")),
            letters: Some(letters.clone()),
            recurrent: Some(letters),
        };
        Ok(Self::from_fn(format!("tm:{a},{b}"), meta, move |n| {
            if n.count_ones() % 2 == 0 {
                a
            } else {
                b
            }
        }))
    }

    /// `rrr...`; no power bound is declared.
    pub fn periodic(r: &[Letter]) -> Result<Self> {
        if r.is_empty() {
            return Err(invalid("periodic word needs a nonempty period"));
        }
        let r: Arc<[Letter]> = r.into();
        let letters: BTreeSet<Letter> = r.iter().copied().collect();
        let meta = StreamMeta {
            bound: None,
            letters: Some(letters.clone()),
            recurrent: Some(letters),
        };
        let label = format!("periodic:{}", Word::from(&r[..]));
        Ok(Self::from_fn(label, meta, move |n| {
            r[(n % r.len() as u64) as usize]
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn letter_at(&self, i: u64) -> Letter {
        (self.f)(i)
    }

    pub fn prefix(&self, n: usize) -> Word {
        (0..n as u64).map(|i| self.letter_at(i)).collect()
    }

    pub fn window(&self, from: i64, to: i64) -> Result<Window> {
        check_range(from, to)?;
        if from < 0 {
            return Err(invalid(format!(
                "right-infinite word has no letters at negative position {from}"
            )));
        }
        Ok(Window {
            word: (from..to).map(|i| self.letter_at(i as u64)).collect(),
            from,
            to,
        })
    }

    /// Same letters read right to left.
    pub fn reversed(&self) -> LeftInfiniteWord {
        LeftInfiniteWord {
            mirror: self.f.clone(),
            meta: self.meta.clone(),
            label: format!("rev({})", self.label).into(),
        }
    }

    /// `head` followed by this word. Metadata is cleared.
    pub fn prepend(&self, head: &[Letter]) -> RightInfiniteWord {
        if head.is_empty() {
            return self.clone();
        }
        let head: Arc<[Letter]> = head.into();
        let inner = self.f.clone();
        let label = format!("{}.{}", Word::from(&head[..]), self.label);
        Self::from_fn(label, StreamMeta::default(), move |i| {
            let h = head.len() as u64;
            if i < h {
                head[i as usize]
            } else {
                inner(i - h)
            }
        })
    }

    pub fn with_meta(mut self, meta: StreamMeta) -> Self {
        self.meta = meta;
        self
    }
}

#[derive(Clone)]
pub struct LeftInfiniteWord {
    mirror: LetterFn,
    pub meta: StreamMeta,
    label: Arc<str>,
}

impl fmt::Debug for LeftInfiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LeftInfiniteWord({})", self.label)
    }
}

impl LeftInfiniteWord {
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Letter at position `pos <= -1`.
    pub fn letter_at(&self, pos: i64) -> Letter {
        debug_assert!(pos < 0);
        (self.mirror)((-pos - 1) as u64)
    }

    pub fn window(&self, from: i64, to: i64) -> Result<Window> {
        check_range(from, to)?;
        if to > 0 {
            return Err(invalid(format!(
                "left-infinite word has no letters at position {}",
                to - 1
            )));
        }
        Ok(Window {
            word: (from..to).map(|i| self.letter_at(i)).collect(),
            from,
            to,
        })
    }

    /// The last `n` letters.
    pub fn suffix(&self, n: usize) -> Word {
        (-(n as i64)..0).map(|i| self.letter_at(i)).collect()
    }

    pub fn reversed(&self) -> RightInfiniteWord {
        RightInfiniteWord {
            f: self.mirror.clone(),
            meta: self.meta.clone(),
            label: format!("rev({})", self.label).into(),
        }
    }

    /// This word followed by the finite `tail`. Metadata is cleared.
    pub fn concat(&self, tail: &[Letter]) -> LeftInfiniteWord {
        if tail.is_empty() {
            return self.clone();
        }
        let tail: Arc<[Letter]> = tail.into();
        let inner = self.mirror.clone();
        let label = format!("{}+{}", self.label, Word::from(&tail[..]));
        LeftInfiniteWord {
            mirror: Arc::new(move |j| {
                let t = tail.len() as u64;
                if j < t {
                    tail[tail.len() - 1 - j as usize]
                } else {
                    inner(j - t)
                }
            }),
            meta: StreamMeta::default(),
            label: label.into(),
        }
    }

    /// This word with its last `n` letters removed. Bound, letter and
    /// recurrence declarations survive truncation.
    pub fn drop_last(&self, n: usize) -> LeftInfiniteWord {
        if n == 0 {
            return self.clone();
        }
        let inner = self.mirror.clone();
        LeftInfiniteWord {
            mirror: Arc::new(move |j| inner(j + n as u64)),
            meta: self.meta.clone(),
            label: format!("{}-{}", self.label, n).into(),
        }
    }

    pub fn with_meta(mut self, meta: StreamMeta) -> Self {
        self.meta = meta;
        self
    }
}

/// `s + tail`.
pub fn concat_left(s: &LeftInfiniteWord, tail: &[Letter]) -> LeftInfiniteWord {
    s.concat(tail)
}

#[derive(Debug, Clone)]
pub struct BiInfiniteWord {
    pub left: LeftInfiniteWord,
    pub right: RightInfiniteWord,
    pub meta: StreamMeta,
}

impl BiInfiniteWord {
    pub fn new(left: LeftInfiniteWord, right: RightInfiniteWord) -> Self {
        BiInfiniteWord {
            left,
            right,
            meta: StreamMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: StreamMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn letter_at(&self, pos: i64) -> Letter {
        if pos >= 0 {
            self.right.letter_at(pos as u64)
        } else {
            self.left.letter_at(pos)
        }
    }

    pub fn window(&self, from: i64, to: i64) -> Result<Window> {
        check_range(from, to)?;
        Ok(Window {
            word: (from..to).map(|i| self.letter_at(i)).collect(),
            from,
            to,
        })
    }

    /// `v^R` with `v^R[n] = v[-n-1]`.
    pub fn reversed(&self) -> BiInfiniteWord {
        BiInfiniteWord {
            left: self.right.reversed(),
            right: self.left.reversed(),
            meta: self.meta.clone(),
        }
    }

    /// The left-infinite word of all letters strictly before `pos`.
    pub fn left_of(&self, pos: i64) -> LeftInfiniteWord {
        let this = self.clone();
        LeftInfiniteWord {
            mirror: Arc::new(move |j| this.letter_at(pos - 1 - j as i64)),
            meta: StreamMeta {
                bound: self.meta.bound,
                letters: self.meta.letters.clone(),
                recurrent: None,
            },
            label: format!("cut<{pos}").into(),
        }
    }

    /// The right-infinite word starting at `pos`.
    pub fn right_from(&self, pos: i64) -> RightInfiniteWord {
        let this = self.clone();
        RightInfiniteWord {
            f: Arc::new(move |i| this.letter_at(pos + i as i64)),
            meta: StreamMeta {
                bound: self.meta.bound,
                letters: self.meta.letters.clone(),
                recurrent: None,
            },
            label: format!("cut>={pos}").into(),
        }
    }
}

/// A parsed stream description, either side.
#[derive(Debug, Clone)]
pub enum StreamSpec {
    Right(RightInfiniteWord),
    Left(LeftInfiniteWord),
}

impl StreamSpec {
    /// Parses `tm:a,b`, `periodic:WORD`, `rev(SPEC)` and `SPEC+WORD`
    /// (the last only for left-infinite `SPEC`).
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<StreamSpec> {
        let text = text.trim();
        if let Some(cut) = top_level_plus(text) {
            let (head, word) = (&text[..cut], &text[cut + 1..]);
            let tail = alphabet.parse_word(word)?;
            return match StreamSpec::parse(head, alphabet)? {
                StreamSpec::Left(l) => Ok(StreamSpec::Left(l.concat(&tail))),
                StreamSpec::Right(_) => Err(invalid(format!(
                    "{head:?} is right-infinite; only left-infinite words can be extended by a suffix"
                ))),
            };
        }
        if let Some(inner) = text.strip_prefix("rev(").and_then(|t| t.strip_suffix(')')) {
            return Ok(match StreamSpec::parse(inner, alphabet)? {
                StreamSpec::Right(r) => StreamSpec::Left(r.reversed()),
                StreamSpec::Left(l) => StreamSpec::Right(l.reversed()),
            });
        }
        if let Some(args) = text.strip_prefix("tm:") {
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| invalid(format!("expected tm:a,b, got {text:?}")))?;
            let letter = |s: &str| {
                let mut cs = s.trim().chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => alphabet.letter(c),
                    _ => Err(invalid(format!("expected a single symbol, got {s:?}"))),
                }
            };
            return Ok(StreamSpec::Right(RightInfiniteWord::thue_morse(
                letter(a)?,
                letter(b)?,
            )?));
        }
        if let Some(word) = text.strip_prefix("periodic:") {
            return Ok(StreamSpec::Right(RightInfiniteWord::periodic(
                &alphabet.parse_word(word)?,
            )?));
        }
        Err(invalid(format!("unrecognized stream spec {text:?}")))
    }

    pub fn into_right(self) -> Result<RightInfiniteWord> {
        match self {
            StreamSpec::Right(r) => Ok(r),
            StreamSpec::Left(l) => Err(invalid(format!("{} is left-infinite", l.label()))),
        }
    }

    pub fn into_left(self) -> Result<LeftInfiniteWord> {
        match self {
            StreamSpec::Left(l) => Ok(l),
            StreamSpec::Right(r) => Err(invalid(format!("{} is right-infinite", r.label()))),
        }
    }

    pub fn window(&self, from: i64, to: i64) -> Result<Window> {
        match self {
            StreamSpec::Right(r) => r.window(from, to),
            StreamSpec::Left(l) => l.window(from, to),
        }
    }
}

fn top_level_plus(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => found = Some(i),
            _ => {}
        }
    }
    found
}
