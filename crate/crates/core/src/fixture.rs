//! `key: value` text fixtures for tuples and bi-infinite inputs.
//!
//! Blank lines and lines starting with `#` are ignored. Words use the
//! default symbol table truncated to `k`; whitespace inside a word value is
//! dropped so long words can be grouped for reading.

use std::collections::BTreeMap;

use crate::assembly::{RecurrenceDeclaration, Side};
use crate::delta::DeltaTuple;
use crate::error::{invalid, Result};
use crate::exponent::Exponent;
use crate::streams::{BiInfiniteWord, StreamSpec};
use crate::words::{Alphabet, Letter, Word};

struct Fields {
    single: BTreeMap<String, String>,
    repeated: Vec<(String, String)>,
}

fn fields(text: &str, repeatable: &[&str]) -> Result<Fields> {
    let mut single = BTreeMap::new();
    let mut repeated = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| invalid(format!("line {}: expected `key: value`", n + 1)))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if repeatable.contains(&key.as_str()) {
            repeated.push((key, value));
        } else if single.insert(key.clone(), value).is_some() {
            return Err(invalid(format!("line {}: duplicate key {key:?}", n + 1)));
        }
    }
    Ok(Fields { single, repeated })
}

impl Fields {
    fn get(&self, key: &str) -> Result<&str> {
        self.single
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| invalid(format!("missing key {key:?}")))
    }

    fn opt(&self, key: &str) -> Option<&str> {
        self.single.get(key).map(String::as_str)
    }

    fn word(&self, alphabet: &Alphabet, key: &str) -> Result<Word> {
        let raw: String = self.opt(key).unwrap_or("").split_whitespace().collect();
        alphabet.parse_word(&raw)
    }

    fn letter(&self, alphabet: &Alphabet, key: &str) -> Result<Letter> {
        let w = self.word(alphabet, key)?;
        match w.letters() {
            [c] => Ok(*c),
            _ => Err(invalid(format!("{key} must be a single letter"))),
        }
    }

    fn number(&self, key: &str) -> Result<usize> {
        self.get(key)?
            .parse()
            .map_err(|_| invalid(format!("{key} is not a number")))
    }
}

/// A parsed tuple together with the text of its `s` stream and an
/// optional letter to append.
#[derive(Debug, Clone)]
pub struct TupleFixture {
    pub tuple: DeltaTuple,
    pub s_spec: String,
    pub y: Option<Letter>,
}

/// Keys: `alpha`, `k`, `s`, `sigma`, `w`, `eta`, `x`, `u`, and optionally
/// `window` (defaults to the smallest admissible) and `y`.
pub fn parse_tuple(text: &str) -> Result<TupleFixture> {
    let f = fields(text, &[])?;
    let k = f.number("k")?;
    let alphabet = Alphabet::with_size(k)?;
    let alpha: Exponent = f.get("alpha")?.parse()?;
    let s_spec = f.get("s")?.to_string();
    let s = StreamSpec::parse(&s_spec, &alphabet)?.into_left()?;
    let mut tuple = DeltaTuple {
        s,
        sigma: f.word(&alphabet, "sigma")?,
        w: f.word(&alphabet, "w")?,
        eta: f.word(&alphabet, "eta")?,
        x: f.letter(&alphabet, "x")?,
        u: f.word(&alphabet, "u")?,
        alpha,
        k,
        window: 0,
    };
    tuple.window = match f.opt("window") {
        Some(_) => f.number("window")?,
        None => tuple.min_window(),
    };
    let y = match f.opt("y") {
        Some(_) => Some(f.letter(&alphabet, "y")?),
        None => None,
    };
    Ok(TupleFixture { tuple, s_spec, y })
}

/// Inverse of [`parse_tuple`].
pub fn render_tuple(t: &DeltaTuple, s_spec: &str, y: Option<Letter>) -> Result<String> {
    let a = Alphabet::with_size(t.k)?;
    let mut out = format!(
        "alpha: {}\nk: {}\ns: {}\nsigma: {}\nw: {}\neta: {}\nx: {}\nu: {}\nwindow: {}\n",
        t.alpha,
        t.k,
        s_spec,
        a.render(&t.sigma),
        a.render(&t.w),
        a.render(&t.eta),
        a.symbol(t.x),
        a.render(&t.u),
        t.window
    );
    if let Some(y) = y {
        out.push_str(&format!("y: {}\n", a.symbol(y)));
    }
    Ok(out)
}

/// A bi-infinite input with its target factor and recurrence declarations.
#[derive(Debug, Clone)]
pub struct BiFixture {
    pub v: BiInfiniteWord,
    pub left_spec: String,
    pub right_spec: String,
    pub w: Word,
    pub decls: Vec<RecurrenceDeclaration>,
    pub alpha: Exponent,
    pub k: usize,
}

/// Keys: `k`, `alpha`, `left` (left-infinite stream), `right`
/// (right-infinite stream), `w`, `bound` (declared bound of the whole
/// word), and any number of `declare: LETTER SIDE [note]` lines.
pub fn parse_bi(text: &str) -> Result<BiFixture> {
    let f = fields(text, &["declare"])?;
    let k = f.number("k")?;
    let alphabet = Alphabet::with_size(k)?;
    let alpha: Exponent = f.get("alpha")?.parse()?;
    let left_spec = f.get("left")?.to_string();
    let right_spec = f.get("right")?.to_string();
    let left = StreamSpec::parse(&left_spec, &alphabet)?.into_left()?;
    let right = StreamSpec::parse(&right_spec, &alphabet)?.into_right()?;
    let mut v = BiInfiniteWord::new(left, right);
    if let Some(b) = f.opt("bound") {
        v.meta.bound = Some(b.parse()?);
    }
    let mut decls = Vec::new();
    for (_, value) in &f.repeated {
        let mut parts = value.splitn(3, char::is_whitespace);
        let (Some(letter), Some(side)) = (parts.next(), parts.next()) else {
            return Err(invalid(format!("declaration {value:?} needs a letter and a side")));
        };
        let letter = match alphabet.parse_word(letter)?.letters() {
            [c] => *c,
            _ => return Err(invalid(format!("declaration {value:?}: expected one letter"))),
        };
        decls.push(RecurrenceDeclaration {
            letter,
            side: side.parse::<Side>()?,
            provenance: parts.next().unwrap_or("").trim().to_string(),
        });
    }
    Ok(BiFixture {
        v,
        left_spec,
        right_spec,
        w: f.word(&alphabet, "w")?,
        decls,
        alpha,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_round_trip() {
        let fx = parse_tuple(include_str!("../fixtures/g1.tuple")).unwrap();
        let text = render_tuple(&fx.tuple, &fx.s_spec, Some(1)).unwrap();
        let again = parse_tuple(&text).unwrap();
        assert_eq!(again.tuple.eta, fx.tuple.eta);
        assert_eq!(again.tuple.window, fx.tuple.window);
        assert_eq!(again.y, Some(1));
        assert_eq!(again.tuple.s.suffix(50), fx.tuple.s.suffix(50));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_tuple("k: 3\nalpha: 5\n").is_err());
        assert!(parse_tuple("k 3").is_err());
        assert!(parse_bi("k: 3\nk: 3\n").is_err());
    }
}
