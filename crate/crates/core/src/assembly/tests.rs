use super::*;
use crate::fixture::{parse_bi, BiFixture};
use crate::words::Alphabet;

fn right_fixture() -> BiFixture {
    parse_bi(include_str!("../../fixtures/bi_right.fixture")).unwrap()
}

fn left_fixture() -> BiFixture {
    parse_bi(include_str!("../../fixtures/bi_left.fixture")).unwrap()
}

fn word(s: &str) -> Word {
    Alphabet::with_size(3).unwrap().parse_word(s).unwrap()
}

fn cfg(fx: &BiFixture) -> AssemblyConfig {
    let mut c = AssemblyConfig::new(fx.alpha, fx.k);
    c.steps = 200;
    c
}

#[test]
fn config_validation() {
    let five: Exponent = "5".parse().unwrap();
    assert!(AssemblyConfig::new(five, 3).validate().is_ok());
    assert!(AssemblyConfig::new(five, 2).validate().is_err());
    let mut c = AssemblyConfig::new("4".parse().unwrap(), 3);
    assert!(c.validate().is_err());
    c.unsafe_alpha = true;
    assert!(c.validate().is_ok());
    c.alpha = "2".parse().unwrap();
    assert!(c.validate().is_err());
}

#[test]
fn sides_parse_and_mirror() {
    for s in ["right", "left", "both", "none"] {
        let side: Side = s.parse().unwrap();
        assert_eq!(side.to_string(), s);
        assert_eq!(side.mirrored().mirrored(), side);
    }
    assert!("up".parse::<Side>().is_err());
    assert_eq!(right_fixture().decls.len(), 3);
}

#[test]
fn extend_left_examples() {
    let fx = right_fixture();
    let c = cfg(&fx);
    let s = seed_word(0, 3).unwrap().reversed();
    assert_eq!(extend_left_avoiding(&Word::empty(), &s, &c).unwrap(), Word::empty());
    assert_eq!(extend_left_avoiding(&s.suffix(5), &s, &c).unwrap(), Word::empty());
    let u = extend_left_avoiding(&word("0"), &s, &c).unwrap();
    assert!(is_suffix(&word("0"), &u));
    let whole = Word::concat(&[&s.suffix(c.window), &u]);
    assert!(is_power_free(&whole, c.bound()).free);
    let bare = s.clone().with_meta(StreamMeta::default());
    assert!(extend_left_avoiding(&word("0"), &bare, &c).is_err());
    assert!(extend_left_avoiding(&word("000000"), &s, &c).is_err());
}

#[test]
fn extend_left_needs_a_transition_word() {
    // s ends in 1221 and z starts with (1221)^2, so s·z holds a cube
    let fx = right_fixture();
    let mut c = cfg(&fx);
    c.unsafe_alpha = true;
    c.alpha = "3".parse().unwrap();
    let s = seed_word(0, 3).unwrap().reversed();
    let z = Word::concat(&[&s.suffix(4), &s.suffix(4), &word("0")]);
    let u = extend_left_avoiding(&z, &s, &c).unwrap();
    assert!(u.len() > z.len());
    assert!(is_suffix(&z, &u));
    let whole = Word::concat(&[&s.suffix(c.window), &u]);
    assert!(is_power_free(&whole, c.bound()).free);
}

#[test]
fn build_delta_right_branch() {
    let fx = right_fixture();
    let t = build_delta(&fx.v, &word("01"), &fx.decls, &cfg(&fx)).unwrap();
    assert_eq!(t.x, 0);
    assert_eq!(t.w, word("01"));
    assert!(t.eta.len() >= 300);
    assert!(t.u.is_empty());
    assert_eq!(delta_check(&t).unwrap(), DeltaVerdict::Valid);
}

#[test]
fn build_delta_both_branch() {
    let fx = right_fixture();
    let c = cfg(&fx);
    for w in ["1", "10"] {
        let t = build_delta(&fx.v, &word(w), &fx.decls, &c).unwrap();
        assert_eq!(t.x, 1);
        assert!(!t.s.suffix(t.window).contains(&1));
        assert_eq!(delta_check(&t).unwrap(), DeltaVerdict::Valid);
    }
}

#[test]
fn build_delta_errors() {
    let fx = right_fixture();
    let c = cfg(&fx);
    assert!(matches!(build_delta(&fx.v, &word("2"), &fx.decls, &c), Err(Error::InvalidInput(_))));
    assert!(matches!(build_delta(&fx.v, &word("000"), &fx.decls, &c), Err(Error::InvalidInput(_))));
    assert!(matches!(build_delta(&fx.v, &word("0120120"), &fx.decls, &c), Err(Error::InvalidInput(_))));
}

#[test]
fn nonrecur_returns_input_when_a_letter_is_finite() {
    let fx = right_fixture();
    let mut decls = fx.decls.clone();
    decls[2].side = Side::None;
    let (out, x, report) = nonrecur(&fx.v, &fx.w, &decls, &cfg(&fx)).unwrap();
    assert_eq!(x, 2);
    assert_eq!(report.case_taken, CaseTaken::NonRecurrentLetter);
    assert_eq!(out.window(-50, 50).unwrap(), fx.v.window(-50, 50).unwrap());
}

#[test]
fn nonrecur_glue_and_mirror() {
    let fx = right_fixture();
    let c = cfg(&fx);
    let (out, x, report) = nonrecur(&fx.v, &fx.w, &fx.decls, &c).unwrap();
    assert_eq!((x, report.case_taken), (0, CaseTaken::Glue));
    assert_eq!(report.verdict, "free");
    assert_eq!(report.x_on_tail_side, 0);
    assert_eq!(report.marked_x_position, Some(-1));
    assert_eq!(out.letter_at(-1), 0);
    let wp = report.w_position;
    assert_eq!(out.window(wp, wp + 2).unwrap().word, fx.w);
    assert!(report.window.from <= wp && report.window.to == c.steps as i64);
    assert!((0..2000).all(|i| out.letter_at(i) != 0));

    let mx = left_fixture();
    let (mout, mxl, mreport) = nonrecur(&mx.v, &mx.w, &mx.decls, &c).unwrap();
    assert_eq!((mxl, mreport.case_taken), (0, CaseTaken::Mirrored));
    assert_eq!(mreport.window, report.window.reversed());
    assert_eq!(mreport.marked_x_position, Some(0));
    assert_eq!(mreport.w_position, -wp - 2);
    let (a, b) = (report.window.from, report.window.to);
    assert_eq!(mout.window(-b, -a).unwrap(), out.window(a, b).unwrap().reversed());
}
