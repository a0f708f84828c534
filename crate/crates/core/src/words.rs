//! Finite words over a `k`-letter alphabet.
//!
//! Letters are plain indices `0..k`; printable symbols only appear when a
//! word is parsed from or rendered to text through an [`Alphabet`].

use std::fmt;
use std::ops::{Deref, Range};

use crate::error::{invalid, Result};
use crate::exponent::Exponent;

pub type Letter = u8;

/// Default symbol table for text I/O, truncated to `k` symbols.
pub const DEFAULT_SYMBOLS: &str = "0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// The first `k` symbols of [`DEFAULT_SYMBOLS`].
    pub fn with_size(k: usize) -> Result<Self> {
        if k == 0 || k > DEFAULT_SYMBOLS.len() {
            return Err(invalid(format!(
                "alphabet size {k} outside 1..={}",
                DEFAULT_SYMBOLS.len()
            )));
        }
        Ok(Alphabet {
            symbols: DEFAULT_SYMBOLS.chars().take(k).collect(),
        })
    }

    pub fn from_symbols(symbols: &str) -> Result<Self> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.is_empty() || symbols.len() > 256 {
            return Err(invalid("symbol table must hold 1..=256 symbols"));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(invalid(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn k(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize]
    }

    pub fn letter(&self, symbol: char) -> Result<Letter> {
        self.symbols
            .iter()
            .position(|&c| c == symbol)
            .map(|i| i as Letter)
            .ok_or_else(|| invalid(format!("symbol {symbol:?} not in alphabet")))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.trim()
            .chars()
            .map(|c| self.letter(c))
            .collect::<Result<Vec<_>>>()
            .map(Word::from)
    }

    pub fn render(&self, word: &[Letter]) -> String {
        word.iter().map(|&l| self.symbol(l)).collect()
    }

    pub fn contains_word(&self, word: &[Letter]) -> bool {
        word.iter().all(|&l| (l as usize) < self.k())
    }
}

/// A finite word. The empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.0.pop()
    }

    pub fn extend_from(&mut self, other: &[Letter]) {
        self.0.extend_from_slice(other);
    }

    pub fn concat(parts: &[&[Letter]]) -> Word {
        Word(parts.concat())
    }

    pub fn slice(&self, range: Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn reversed(&self) -> Word {
        reverse(&self.0)
    }

    pub fn truncated(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    /// Debug rendering with the default symbol table.
    pub fn to_default_string(&self) -> String {
        self.0
            .iter()
            .map(|&l| {
                DEFAULT_SYMBOLS
                    .chars()
                    .nth(l as usize)
                    .unwrap_or('?')
            })
            .collect()
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_default_string())
    }
}

/// `r^a`: `r` repeated `floor(a)` times followed by the prefix of `r` that
/// makes the total length exactly `a * |r|`.
pub fn fractional_power(r: &[Letter], a: Exponent) -> Result<Word> {
    if r.is_empty() {
        return Err(invalid("fractional power of the empty word"));
    }
    let len = a.times_len(r.len()).ok_or_else(|| {
        invalid(format!(
            "exponent {a} times length {} is not an integer",
            r.len()
        ))
    })?;
    Ok(periodic_prefix(r, len))
}

/// The first `len` letters of `r r r ...`.
pub(crate) fn periodic_prefix(r: &[Letter], len: usize) -> Word {
    r.iter().copied().cycle().take(len).collect()
}

/// The last `len` letters of `... r r r`, i.e. the length-`len` word with
/// period `|r|` whose final `|r|` letters are `r` (when `len >= |r|`).
pub(crate) fn periodic_suffix(r: &[Letter], len: usize) -> Word {
    let p = r.len();
    let shift = (p - len % p) % p;
    (0..len).map(|i| r[(i + shift) % p]).collect()
}

/// Start positions of every (possibly overlapping) occurrence of `needle`.
pub fn occurrences(haystack: &[Letter], needle: &[Letter]) -> Result<Vec<usize>> {
    if needle.is_empty() {
        return Err(invalid("occurrences of the empty word"));
    }
    if needle.len() > haystack.len() {
        return Ok(Vec::new());
    }
    // Knuth-Morris-Pratt over the concatenation needle | haystack.
    let m = needle.len();
    let mut fail = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut out = Vec::new();
    let mut q = 0;
    for (i, &c) in haystack.iter().enumerate() {
        while q > 0 && c != needle[q] {
            q = fail[q - 1];
        }
        if c == needle[q] {
            q += 1;
        }
        if q == m {
            out.push(i + 1 - m);
            q = fail[q - 1];
        }
    }
    Ok(out)
}

pub fn reverse(w: &[Letter]) -> Word {
    w.iter().rev().copied().collect()
}

pub fn is_prefix(part: &[Letter], whole: &[Letter]) -> bool {
    whole.starts_with(part)
}

pub fn is_suffix(part: &[Letter], whole: &[Letter]) -> bool {
    whole.ends_with(part)
}

pub fn is_factor(part: &[Letter], whole: &[Letter]) -> bool {
    part.is_empty() || whole.windows(part.len()).any(|win| win == part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Alphabet::with_size(36).unwrap().parse_word(s).unwrap()
    }

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    #[test]
    fn fractional_power_examples() {
        assert_eq!(fractional_power(&w("1234"), e("3")).unwrap(), w("123412341234"));
        assert_eq!(fractional_power(&w("1234"), e("7/4")).unwrap(), w("1234123"));
        assert_eq!(fractional_power(&w("ab"), e("1")).unwrap(), w("ab"));
        assert_eq!(fractional_power(&w("ab"), e("1/2")).unwrap(), w("a"));
    }

    #[test]
    fn fractional_power_rejects() {
        assert!(fractional_power(&w("123"), e("7/4")).is_err());
        assert!(fractional_power(&[], e("2")).is_err());
    }

    #[test]
    fn periodic_suffix_ends_with_period() {
        let r = w("abc");
        assert_eq!(periodic_suffix(&r, 8), w("bcabcabc"));
        assert_eq!(periodic_suffix(&r, 3), r);
        assert_eq!(periodic_suffix(&r, 2), w("bc"));
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrences(&w("aaa"), &w("aa")).unwrap(), vec![0, 1]);
        assert_eq!(occurrences(&w("abcabc"), &w("abc")).unwrap(), vec![0, 3]);
        assert_eq!(occurrences(&w("ababa"), &w("aba")).unwrap(), vec![0, 2]);
        assert!(occurrences(&w("ab"), &[]).is_err());
        assert!(occurrences(&w("ab"), &w("abc")).unwrap().is_empty());
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse(&[]), Word::empty());
        assert_eq!(reverse(&w("abc")), w("cba"));
        assert_eq!(reverse(&reverse(&w("0120021"))), w("0120021"));
    }

    #[test]
    fn containment_examples() {
        let abc = w("abc");
        assert!(is_prefix(&[], &abc) && is_suffix(&[], &abc) && is_factor(&[], &abc));
        assert!(is_suffix(&w("bc"), &abc));
        assert!(!is_prefix(&w("bc"), &abc));
        assert!(!is_factor(&w("ca"), &abc));
    }

    #[test]
    fn reverse_is_involution_exhaustive() {
        // all ternary words up to length 12
        let mut layer = vec![Word::empty()];
        for _ in 0..12 {
            let mut next = Vec::with_capacity(layer.len() * 3);
            for v in &layer {
                assert_eq!(reverse(&reverse(v)), *v);
                for c in 0..3 {
                    let mut x = v.clone();
                    x.push(c);
                    next.push(x);
                }
            }
            layer = next;
        }
        for v in &layer {
            assert_eq!(reverse(&reverse(v)), *v);
        }
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::from_symbols("aba").is_err());
        assert!(Alphabet::with_size(0).is_err());
        let a = Alphabet::from_symbols("xyz").unwrap();
        assert_eq!(a.render(&a.parse_word("zyx").unwrap()), "zyx");
        assert!(a.parse_word("xq").is_err());
    }

    fn naive_count(h: &[Letter], n: &[Letter]) -> usize {
        (0..h.len())
            .filter(|&i| i + n.len() <= h.len() && (0..n.len()).all(|j| h[i + j] == n[j]))
            .count()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn occurrences_match_naive_scan(
            h in prop::collection::vec(0u8..3, 0..30),
            n in prop::collection::vec(0u8..3, 1..5),
        ) {
            let pos = occurrences(&h, &n).unwrap();
            prop_assert_eq!(pos.len(), naive_count(&h, &n));
            prop_assert!(pos.windows(2).all(|p| p[0] < p[1]));
            prop_assert_eq!(is_factor(&n, &h), !pos.is_empty());
        }
    }

    proptest! {
        #[test]
        fn power_has_base_as_prefix(
            r in prop::collection::vec(0u8..4, 1..8),
            whole in 1u64..5,
            extra in 0usize..8,
        ) {
            let extra = extra % r.len();
            let a = Exponent::new(whole * r.len() as u64 + extra as u64, r.len() as u64).unwrap();
            let p = fractional_power(&r, a).unwrap();
            prop_assert_eq!(p.len(), whole as usize * r.len() + extra);
            prop_assert!(is_prefix(&r, &p));
            prop_assert_eq!(fractional_power(&r, Exponent::integer(1).unwrap()).unwrap(), Word::from(r.clone()));
        }
    }
}
