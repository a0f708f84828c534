//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use powfree_core::assembly::{nonrecur, AssemblyConfig};
use powfree_core::delta::{delta_check, glue, DeltaVerdict};
use powfree_core::fixture::{parse_bi, parse_tuple};
use powfree_core::oracle::{brute_max_exponent, enumerate_power_free, verify_lemmas, BRUTE_MAX_LEN};
use powfree_core::streams::RightInfiniteWord;
use powfree_core::words::{occurrences, Word};
use powfree_core::{is_power_free, max_exponent, par, Exec, PowerBound};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ternary_word(mut index: u64, len: usize) -> Word {
    let mut v = vec![0u8; len];
    for slot in v.iter_mut().rev() {
        *slot = (index % 3) as u8;
        index /= 3;
    }
    Word::from(v)
}

fn checker_matches_oracle() -> Outcome {
    let bounds: Vec<PowerBound> = ["2", "5/2", "3", "5", "2+", "5+"].iter().map(|b| b.parse().unwrap()).collect();
    let start = Instant::now();
    let mut words = 0u64;
    for len in 0..=12usize {
        let total = 3u64.pow(len as u32);
        words += total;
        let chunks = total.div_ceil(4096);
        let bad = par::map_range(Exec::Parallel, chunks as usize, |c| {
            let lo = c as u64 * 4096;
            for i in lo..(lo + 4096).min(total) {
                let w = ternary_word(i, len);
                let oracle = if w.is_empty() { None } else { Some(brute_max_exponent(&w).unwrap().exponent) };
                for b in &bounds {
                    let fast = is_power_free(&w, *b).free;
                    let slow = oracle.is_none_or(|e| !b.forbids(e));
                    if fast != slow {
                        return Some(format!("{w} under {b}: fast {fast}, oracle {slow}"));
                    }
                }
            }
            None
        });
        if let Some(msg) = bad.into_iter().flatten().next() {
            return Err(msg);
        }
    }
    ensure(words == 797_161, || format!("{words} words"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!("{words} words x {} bounds agree in {t:.1?}", bounds.len()))
}

fn square_free_counts() -> Outcome {
    let e = enumerate_power_free(3, "2".parse().unwrap(), 10, u64::MAX, false, Exec::Parallel).map_err(|e| e.to_string())?;
    let want = [1, 3, 6, 12, 18, 30, 42, 60, 78, 108, 144];
    ensure(e.counts == want, || format!("got {:?}", e.counts))?;
    Ok(format!("{:?}", &e.counts[1..]))
}

fn thue_morse_overlap_free() -> Outcome {
    let w = RightInfiniteWord::thue_morse(0, 1).unwrap().prefix(1 << 20);
    let start = Instant::now();
    let v = is_power_free(&w, "2+".parse().unwrap());
    let t = start.elapsed();
    ensure(v.free, || format!("witness {:?}", v.witness))?;
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("2^20 letters 2+-free in {t:.2?}"))
}

fn glue_end_to_end() -> Outcome {
    let fx = parse_tuple(include_str!("../fixtures/g1.tuple")).map_err(|e| e.to_string())?;
    let t0 = fx.tuple;
    ensure(t0.eta.len() == 30 && t0.w.len() == 1, || "unexpected fixture shape".into())?;
    let tail = RightInfiniteWord::thue_morse(1, 2).unwrap();
    let start = Instant::now();
    let g = glue(&t0, &tail, 2000).map_err(|e| e.to_string())?;
    let t = start.elapsed();

    // replay the ω chain and re-check every post-shrink tuple
    let mut cur = t0.clone();
    for step in &g.trace {
        ensure(step.eta_len_before == cur.eta.len(), || format!("step {} starts from the wrong η", step.j))?;
        ensure(step.eta_len_after <= step.eta_len_before, || format!("step {} grows η", step.j))?;
        cur.eta = cur.eta.truncated(step.eta_len_after);
        cur.u.push(step.y);
        if step.case.is_some() {
            cur.window = cur.window.max(cur.min_window());
            let v = delta_check(&cur).map_err(|e| e.to_string())?;
            ensure(v == DeltaVerdict::Valid, || format!("after step {}: {v}", step.j))?;
        }
    }
    ensure(cur.eta == g.eta_hat && t0.eta.starts_with(&g.eta_hat), || "η̂ is not the end of the chain".into())?;
    let win = &g.final_window;
    ensure(win.len() >= 2300, || format!("final window only {} letters", win.len()))?;
    ensure(is_power_free(&win.word, t0.bound()).free, || "final window is not 5-free".into())?;
    let right_of_marked = win.word[(-win.from) as usize..].iter().filter(|&&c| c == t0.x).count();
    ensure(right_of_marked == 0, || format!("{right_of_marked} x right of the marked one"))?;
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(
        "{} shrinks, stable after step {}, |η̂| = {}, window {} letters free, {t:.2?}",
        g.shrinks(),
        g.stabilized_at,
        g.eta_hat.len(),
        win.len()
    ))
}

fn shrink_invariants() -> Outcome {
    let r = verify_lemmas(20_261_016, 200);
    ensure(r.instances_tested >= 100, || format!("only {} instances", r.instances_tested))?;
    ensure(r.all_passed(), || r.to_string())?;
    ensure(r.case_a > 0 && r.case_b > 0, || r.to_string())?;
    Ok(format!(
        "{} instances (A {}, B {}), {} corrupted copies rejected, 0 failures",
        r.instances_tested, r.case_a, r.case_b, r.corrupted_rejected
    ))
}

fn pipeline_and_mirror() -> Outcome {
    let fx = parse_bi(include_str!("../fixtures/bi_right.fixture")).map_err(|e| e.to_string())?;
    let mx = parse_bi(include_str!("../fixtures/bi_left.fixture")).map_err(|e| e.to_string())?;
    ensure(fx.w.len() <= 2, || "w too long".into())?;
    let cfg = AssemblyConfig::new(fx.alpha, fx.k);
    let (out, x, rep) = nonrecur(&fx.v, &fx.w, &fx.decls, &cfg).map_err(|e| e.to_string())?;
    let win = &rep.window;
    ensure(!occurrences(&win.word, &fx.w).unwrap().is_empty(), || "w missing from the window".into())?;
    let marked = rep.marked_x_position.ok_or("no marked x")?;
    let after = win.word[(marked + 1 - win.from) as usize..].iter().filter(|&&c| c == x).count();
    ensure(after == 0, || format!("{after} x right of the marked position"))?;
    ensure(is_power_free(&win.word, cfg.bound()).free, || "window is not 5-free".into())?;

    let (mout, _, mrep) = nonrecur(&mx.v, &mx.w, &mx.decls, &cfg).map_err(|e| e.to_string())?;
    ensure(mrep.case_taken.to_string() == "mirrored", || format!("mirrored input took {}", mrep.case_taken))?;
    ensure(mrep.window == win.reversed(), || "mirrored window differs".into())?;
    let (a, b) = (win.from, win.to);
    let fwd = out.window(a - 500, b + 500).unwrap();
    let back = mout.window(-b - 500, -a + 500).unwrap();
    ensure(back == fwd.reversed(), || "outputs are not reverses".into())?;
    Ok(format!("{rep}"))
}

fn performance_floor() -> Outcome {
    let w = RightInfiniteWord::thue_morse(0, 1).unwrap().prefix(100_000);
    let start = Instant::now();
    let r = max_exponent(&w).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(2), || format!("took {t:?}"))?;
    ensure(brute_max_exponent(&w[..BRUTE_MAX_LEN + 1]).is_err(), || "oracle accepted 501 letters".into())?;
    Ok(format!("10^5 letters, exponent {} in {t:.2?}; oracle refuses length {}", r.exponent, BRUTE_MAX_LEN + 1))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("checker agrees with the brute-force oracle", checker_matches_oracle),
        ("ternary square-free counts", square_free_counts),
        ("Thue-Morse prefix is overlap-free", thue_morse_overlap_free),
        ("glue end to end", glue_end_to_end),
        ("shrink invariants on generated instances", shrink_invariants),
        ("non-recurrent-letter pipeline and its mirror", pipeline_and_mirror),
        ("performance floor", performance_floor),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
