//! Certificates of the shipped descriptors and the effect of single-cell
//! mutations on them.

mod common;

use common::clue_deletions;
use loopforge::catalog::{certify_gadget, load_gadget, parse_descriptor, Certified, CertifyMode, Verdict};
use loopforge::genre::Genre;
use loopforge::outcome::TimeLimit;

const BUDGET: TimeLimit = TimeLimit(Some(std::time::Duration::from_secs(60)));

fn shipped(genre: Genre) -> &'static str {
    match genre {
        Genre::Yajilin => include_str!("../catalog/yajilin.txt"),
        Genre::SimpleLoop => include_str!("../catalog/simple-loop.txt"),
        Genre::Masyu => include_str!("../catalog/masyu.txt"),
        Genre::Slitherlink => include_str!("../catalog/slitherlink.txt"),
    }
}

fn flips(text: &str) -> bool {
    match parse_descriptor(text) {
        Err(_) => true,
        Ok(d) => certify_gadget(&d, BUDGET).certified != Certified::Yes,
    }
}

#[test]
fn recorded_status_matches_the_certificate() {
    for genre in Genre::ALL {
        let d = load_gadget(genre).unwrap();
        let cert = certify_gadget(&d, BUDGET);
        assert_eq!(cert.certified, d.certified(), "{genre}: {cert:?}");
    }
}

#[test]
fn exhaustive_gadgets_pass_every_condition() {
    for genre in [Genre::Yajilin, Genre::SimpleLoop] {
        let d = load_gadget(genre).unwrap();
        assert_eq!(d.certify_mode(), CertifyMode::Exhaustive);
        let cert = certify_gadget(&d, BUDGET);
        assert_eq!(cert.conditions.len(), 6);
        for (k, r) in &cert.conditions {
            assert_eq!(r.verdict, Verdict::Pass, "{genre} ({k}): {}", r.detail);
        }
    }
}

#[test]
fn witnessed_gadgets() {
    for genre in [Genre::Masyu, Genre::Slitherlink] {
        let cert = certify_gadget(&load_gadget(genre).unwrap(), BUDGET);
        let v = |k: char| cert.conditions[&k].verdict;
        assert_eq!(v('e'), Verdict::Pass, "{genre}");
        for k in ['c', 'd'] {
            assert!(matches!(v(k), Verdict::Pass | Verdict::Witnessed), "{genre} ({k})");
        }
        assert_eq!(v('a'), Verdict::BudgetLimited, "{genre}");
        assert_eq!(cert.certified, Certified::Partial);
    }
}

#[test]
fn yajilin_grey_deletions_are_caught() {
    let mut kept = Vec::new();
    for (cell, text) in clue_deletions(shipped(Genre::Yajilin), b'#') {
        if !flips(&text) {
            kept.push(cell);
        }
    }
    // (1,0) sits between two grey cells against the closed side; without its
    // clue it is a dead-end pocket that the loop must shade, so the tile still
    // behaves the same.
    assert_eq!(kept, [(1, 0)]);
}

#[test]
fn simple_loop_unshadings_are_caught() {
    let deletions = clue_deletions(shipped(Genre::SimpleLoop), b'#');
    assert_eq!(deletions.len(), 10);
    for (cell, text) in deletions {
        assert!(flips(&text), "unshading {cell:?} went unnoticed");
    }
}
