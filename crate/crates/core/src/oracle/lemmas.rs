//! Randomized checks of the structural facts the shrink step relies on.
//!
//! Instances are built by concatenation so that appending one letter closes
//! a power of a chosen shape, filtered through [`delta_check`], and then
//! examined with direct word computations that do not go through
//! [`shrink_eta`]'s own assertions.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delta::{delta_check, gamma_min_len_usize, pi_set, shrink_eta, DeltaTuple, DeltaVerdict, ShrinkCase};
use crate::exponent::Exponent;
use crate::fixture::render_tuple;
use crate::par::{self, Exec};
use crate::streams::StreamSpec;
use crate::words::{is_suffix, periodic_suffix, Alphabet, Letter, Word};

/// Names of the checked properties, in report order.
pub const CHECKS: [&str; 7] = [
    "period-ends-with-xuy",
    "short-period-inside-tail",
    "overrun-suffixes",
    "shrink-exists",
    "ratio-case-a",
    "ratio-case-b",
    "valid-after-shrink",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LemmaCounts {
    pub passed: u64,
    pub failed: u64,
    /// Instances where the property's hypothesis does not apply.
    pub skipped: u64,
}

/// A failed check with the instance that triggers it, in the text format
/// read by [`crate::fixture::parse_tuple`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaFixture {
    pub check: String,
    pub detail: String,
    pub fixture: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub seed: u64,
    pub instances_tested: usize,
    /// Generated candidates that failed the validity filter.
    pub rejected: usize,
    /// Deliberately broken copies, all of which must be rejected.
    pub corrupted_tested: usize,
    pub corrupted_rejected: usize,
    pub case_a: usize,
    pub case_b: usize,
    pub counts: BTreeMap<String, LemmaCounts>,
    pub first_counterexample: Option<LemmaFixture>,
}

impl LemmaReport {
    pub fn failures(&self) -> u64 {
        self.counts.values().map(|c| c.failed).sum::<u64>()
            + (self.corrupted_tested - self.corrupted_rejected) as u64
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "seed={} instances={} rejected={} case_a={} case_b={} corrupted={}/{}",
            self.seed,
            self.instances_tested,
            self.rejected,
            self.case_a,
            self.case_b,
            self.corrupted_rejected,
            self.corrupted_tested
        )?;
        for name in CHECKS {
            let c = self.counts.get(name).copied().unwrap_or_default();
            writeln!(f, "{name}\tpassed={}\tfailed={}\tskipped={}", c.passed, c.failed, c.skipped)?;
        }
        if let Some(cx) = &self.first_counterexample {
            writeln!(f, "first counterexample: {} ({})", cx.check, cx.detail)?;
            write!(f, "{}", cx.fixture)?;
        }
        Ok(())
    }
}

/// [`verify_lemmas_with`] on the default executor.
pub fn verify_lemmas(seed: u64, count: usize) -> LemmaReport {
    verify_lemmas_with(seed, count, Exec::default())
}

/// Generates `count` instances from `seed` and checks each one. The result
/// does not depend on `exec`.
pub fn verify_lemmas_with(seed: u64, count: usize, exec: Exec) -> LemmaReport {
    let outcomes = par::map_range(exec, count, |i| run_instance(seed, i as u64));
    let mut report = LemmaReport {
        seed,
        instances_tested: 0,
        rejected: 0,
        corrupted_tested: 0,
        corrupted_rejected: 0,
        case_a: 0,
        case_b: 0,
        counts: CHECKS.iter().map(|c| (c.to_string(), LemmaCounts::default())).collect(),
        first_counterexample: None,
    };
    for o in outcomes {
        report.rejected += o.rejected;
        if !o.tested {
            continue;
        }
        report.instances_tested += 1;
        report.case_a += o.case_a;
        report.case_b += o.case_b;
        if let Some(rejected) = o.corrupted {
            report.corrupted_tested += 1;
            report.corrupted_rejected += rejected as usize;
        }
        for (name, c) in o.counts {
            let slot = report.counts.entry(name.to_string()).or_default();
            slot.passed += c.passed;
            slot.failed += c.failed;
            slot.skipped += c.skipped;
        }
        if report.first_counterexample.is_none() {
            report.first_counterexample = o.failure;
        }
    }
    report
}

#[derive(Default)]
struct Outcome {
    tested: bool,
    rejected: usize,
    case_a: usize,
    case_b: usize,
    corrupted: Option<bool>,
    counts: BTreeMap<&'static str, LemmaCounts>,
    failure: Option<LemmaFixture>,
}

struct Instance {
    tuple: DeltaTuple,
    s_spec: String,
    y: Letter,
}

const ATTEMPTS: usize = 64;

fn run_instance(seed: u64, index: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut out = Outcome::default();
    for _ in 0..ATTEMPTS {
        let Some(inst) = generate(&mut rng, index) else {
            out.rejected += 1;
            continue;
        };
        if !matches!(delta_check(&inst.tuple), Ok(DeltaVerdict::Valid)) {
            out.rejected += 1;
            continue;
        }
        if index.is_multiple_of(10) {
            out.corrupted = Some(corrupted_is_rejected(&inst.tuple));
        }
        out.tested = true;
        check(&inst, &mut out);
        return out;
    }
    out
}

/// A copy with `w` repeated at the start of `σ`, so `w` occurs twice.
fn corrupted_is_rejected(t: &DeltaTuple) -> bool {
    let mut bad = t.clone();
    bad.sigma = Word::concat(&[&t.w, &t.sigma]);
    bad.window = bad.window.max(bad.min_window());
    !matches!(delta_check(&bad), Ok(DeltaVerdict::Valid))
}

fn tm_factor(a: Letter, b: Letter, offset: u64, len: usize) -> Word {
    (offset..offset + len as u64)
        .map(|n| if n.count_ones() % 2 == 0 { a } else { b })
        .collect()
}

fn ceil_times(alpha: Exponent, p: usize) -> usize {
    let n = alpha.num() as usize * p;
    n.div_ceil(alpha.den() as usize)
}

enum Family {
    /// The power fits inside `η·x·u·y`.
    Inside,
    /// Like `Inside` with `|w| = 3` and `r = x·u·y`, so `|r| <= |w|`.
    ShortPeriod,
    /// The power starts inside `σ·w`.
    Overrun,
}

fn generate(rng: &mut ChaCha8Rng, index: u64) -> Option<Instance> {
    let alpha: Exponent = *[
        Exponent::integer(5).ok()?,
        Exponent::new(11, 2).ok()?,
        Exponent::integer(6).ok()?,
    ]
    .choose(rng)?;
    let k = if rng.gen_bool(0.25) { 4 } else { 3 };
    let x: Letter = rng.gen_range(0..k as Letter);
    let mut others: Vec<Letter> = (0..k as Letter).filter(|&c| c != x).collect();
    others.shuffle(rng);
    let (a, b) = (others[0], others[1]);
    let alphabet = Alphabet::with_size(k).ok()?;
    let s_spec = format!("rev(tm:{},{})", alphabet.symbol(a), alphabet.symbol(b));
    let s = StreamSpec::parse(&s_spec, &alphabet).ok()?.into_left().ok()?;
    let other = |rng: &mut ChaCha8Rng| *others.choose(rng).expect("two letters");

    let family = match index % 6 {
        0 => Family::ShortPeriod,
        1 | 3 | 5 => Family::Overrun,
        _ => Family::Inside,
    };
    let u_len = match family {
        Family::ShortPeriod => rng.gen_range(0..=1),
        _ => rng.gen_range(0..=2),
    };
    let u: Word = (0..u_len).map(|_| other(rng)).collect();
    let y = other(rng);
    let xuy = Word::concat(&[&[x], &u, &[y]]);
    let tm_pair = |rng: &mut ChaCha8Rng| {
        let mut p = others.clone();
        p.shuffle(rng);
        (p[0], p[1])
    };

    let (sigma, w, eta) = match family {
        Family::Inside | Family::ShortPeriod => {
            let w_len = if matches!(family, Family::ShortPeriod) { 3 } else { rng.gen_range(1..=2) };
            let mut w: Word = (0..w_len).map(|_| other(rng)).collect();
            let mut wv = w.into_letters();
            let at = rng.gen_range(0..w_len);
            wv[at] = x;
            w = Word::from(wv);
            let r_bar_len = if matches!(family, Family::ShortPeriod) { 0 } else { rng.gen_range(0..=8) };
            let (c, d) = tm_pair(rng);
            let r_bar = tm_factor(c, d, rng.gen_range(0..1000), r_bar_len);
            let r = Word::concat(&[&r_bar, &xuy]);
            let len = ceil_times(alpha, r.len());
            let power = periodic_suffix(&r, len);
            let gap = gamma_min_len_usize(w.len(), u.len(), alpha)?;
            let z_len = gap.saturating_sub(len - xuy.len()) + rng.gen_range(0..8);
            let (c, d) = tm_pair(rng);
            let z = tm_factor(c, d, rng.gen_range(0..1000), z_len);
            let sigma: Word = (0..rng.gen_range(0..=2)).map(|_| other(rng)).collect();
            let eta = Word::concat(&[&z, &power[..len - xuy.len()]]);
            (sigma, w, eta)
        }
        Family::Overrun => {
            let w_len = if rng.gen_bool(0.3) { 2 } else { 1 };
            let gap = gamma_min_len_usize(w_len, u.len(), alpha)?;
            let whole = (alpha.num() / alpha.den()) as usize;
            let mut p = (gap + 1).div_ceil(whole - 1).max(xuy.len() + 1) + rng.gen_range(0..6);
            loop {
                let len = ceil_times(alpha, p);
                let mut m = (len - xuy.len()) / p;
                let mut i_w = len - xuy.len() - m * p;
                if i_w + 1 < w_len {
                    m -= 1;
                    i_w += p;
                }
                if m * p > gap {
                    let (c, d) = tm_pair(rng);
                    let r_bar = tm_factor(c, d, rng.gen_range(0..1000), p - xuy.len());
                    let r = Word::concat(&[&r_bar, &xuy]);
                    let power = periodic_suffix(&r, len);
                    let w_start = i_w + 1 - w_len;
                    let sigma = Word::from(&power[..w_start]);
                    let w = Word::from(&power[w_start..i_w + 1]);
                    let eta = Word::from(&power[i_w + 1..len - xuy.len()]);
                    break (sigma, w, eta);
                }
                p += 1;
            }
        }
    };

    let mut tuple = DeltaTuple {
        s,
        sigma,
        w,
        eta,
        x,
        u,
        alpha,
        k,
        window: 0,
    };
    tuple.window = tuple.min_window();
    Some(Instance { tuple, s_spec, y })
}

fn tally(out: &mut Outcome, inst: &Instance, name: &'static str, ok: Option<bool>, detail: impl FnOnce() -> String) {
    let c = out.counts.entry(name).or_default();
    match ok {
        None => c.skipped += 1,
        Some(true) => c.passed += 1,
        Some(false) => {
            c.failed += 1;
            if out.failure.is_none() {
                let fixture = render_tuple(&inst.tuple, &inst.s_spec, Some(inst.y))
                    .unwrap_or_else(|e| format!("# fixture could not be rendered: {e}\n"));
                out.failure = Some(LemmaFixture {
                    check: name.to_string(),
                    detail: detail(),
                    fixture,
                });
            }
        }
    }
}

fn check(inst: &Instance, out: &mut Outcome) {
    let t = &inst.tuple;
    let y = inst.y;
    let pi = match pi_set(t, y) {
        Ok(pi) if !pi.is_empty() => pi,
        Ok(_) => {
            tally(out, inst, "shrink-exists", Some(false), || "no power was formed".into());
            return;
        }
        Err(e) => {
            tally(out, inst, "shrink-exists", Some(false), || e.to_string());
            return;
        }
    };

    let mut full = t.window_word();
    full.push(y);
    let xuy = Word::concat(&[&[t.x], &t.u, &[y]]);
    let tail_len = t.eta.len() + xuy.len();
    let wtail_len = t.w.len() + tail_len;
    let n = full.len();

    for viol in &pi {
        let p = viol.period_len;
        let len = viol.len();
        let r = &full[n - p..];

        tally(out, inst, "period-ends-with-xuy", Some(is_suffix(&xuy, r)), || {
            format!("period {} does not end with x·u·y", Word::from(r))
        });

        let short = p <= t.w.len() && t.u.len() <= t.w.len();
        tally(out, inst, "short-period-inside-tail", short.then_some(len <= tail_len), || {
            format!("period {p} power of length {len} leaves η·x·u·y")
        });

        // r^(β-1) ends w·η·x·u·y and r^(β-2) ends η·x·u·y
        let overrun = len > tail_len;
        let holds = len >= 2 * p && len - p <= wtail_len && len - 2 * p <= tail_len && (!overrun || p > t.w.len());
        tally(out, inst, "overrun-suffixes", Some(holds), || {
            format!("period {p}, length {len}, |w·η·x·u·y| = {wtail_len}")
        });

        match shrink_eta(t, y, viol) {
            Err(e) => tally(out, inst, "shrink-exists", Some(false), || e.to_string()),
            Ok(s) => {
                let prefix = s.eta_bar.len() <= t.eta.len() && t.eta[..s.eta_bar.len()] == s.eta_bar[..];
                tally(out, inst, "shrink-exists", Some(prefix), || "shrunk word is not a prefix".into());
                let (before, after) = (t.eta.len(), s.eta_bar.len());
                match s.case_tag {
                    ShrinkCase::A => {
                        out.case_a += 1;
                        tally(out, inst, "ratio-case-a", Some(5 * after >= 3 * before), || {
                            format!("|η̄| = {after}, |η| = {before}")
                        });
                        tally(out, inst, "ratio-case-b", None, String::new);
                    }
                    ShrinkCase::B => {
                        out.case_b += 1;
                        tally(out, inst, "ratio-case-a", None, String::new);
                        tally(out, inst, "ratio-case-b", Some(5 * after > before), || {
                            format!("|η̄| = {after}, |η| = {before}")
                        });
                    }
                }
                let valid = matches!(delta_check(&s.next), Ok(DeltaVerdict::Valid));
                tally(out, inst, "valid-after-shrink", Some(valid), || "shrunk tuple fails the check".into());
            }
        }
    }
}
