use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;

use qaffine::pbw_index::enumerate_indices;
use qaffine::{BetaSequence, CartanDatum, CartanType, PBWIndex, Partition, Root};

fn a2() -> BetaSequence {
    BetaSequence::build(&CartanDatum::new(CartanType::A, 2).unwrap()).unwrap()
}

fn partitions(m: u32, max: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![vec![]];
    }
    (1..=m.min(max))
        .rev()
        .flat_map(|first| {
            partitions(m - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// All ways to write `nu` as a multiset of real roots plus `m delta`, with `m`
/// spread over partitions at vertices 1 and 2.
fn brute_indices(nu: &Root, seq: &BetaSequence) -> BTreeSet<PBWIndex> {
    let reals: Vec<(i64, Root)> = (-60..=60).map(|k| (k, seq.beta(k))).filter(|(_, b)| b.leq(nu)).collect();
    let delta = seq.datum().delta().clone();
    let mut out = BTreeSet::new();
    fn rec(
        i: usize,
        left: Root,
        chosen: &mut BTreeMap<i64, u32>,
        reals: &[(i64, Root)],
        delta: &Root,
        out: &mut BTreeSet<PBWIndex>,
    ) {
        if i == reals.len() {
            let m = left.0[0];
            if left != delta.scaled(m) {
                return;
            }
            let m = m as u32;
            for a in 0..=m {
                for l1 in partitions(a, a) {
                    for l2 in partitions(m - a, m - a) {
                        let plus: Vec<_> = chosen.iter().filter(|(k, _)| **k <= 0).map(|(k, c)| (*k, *c)).collect();
                        let minus: Vec<_> = chosen.iter().filter(|(k, _)| **k > 0).map(|(k, c)| (*k, *c)).collect();
                        let zero = [(1usize, Partition::new(l1.clone())), (2usize, Partition::new(l2.clone()))];
                        out.insert(PBWIndex::new(plus, zero, minus).unwrap());
                    }
                }
            }
            return;
        }
        let (k, beta) = &reals[i];
        let mut rest = left.clone();
        let mut c = 0;
        loop {
            if c > 0 {
                chosen.insert(*k, c);
            }
            rec(i + 1, rest.clone(), chosen, reals, delta, out);
            rest = rest.sub(beta);
            if !rest.is_nonneg() {
                break;
            }
            c += 1;
        }
        chosen.remove(k);
    }
    rec(0, nu.clone(), &mut BTreeMap::new(), &reals, &delta, &mut out);
    out
}

#[test]
fn enumeration_matches_brute_force() {
    let seq = a2();
    for h in 1..=8i64 {
        for a in 0..=h {
            for b in 0..=h - a {
                let nu = Root(vec![a, b, h - a - b]);
                let got: BTreeSet<PBWIndex> = enumerate_indices(&nu, &seq).unwrap().into_iter().collect();
                let want = brute_indices(&nu, &seq);
                assert_eq!(got, want, "weight {nu}");
            }
        }
    }
}

#[test]
fn delta_fiber_has_six_indices() {
    let seq = a2();
    let idx = enumerate_indices(seq.datum().delta(), &seq).unwrap();
    assert_eq!(idx.len(), 6);
    assert_eq!(idx.iter().filter(|c| c.real_entries().next().is_none()).count(), 2);
}

fn qaffine(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qaffine")).args(args).output().unwrap()
}

#[test]
fn cli_simple_root_canon() {
    let out = qaffine(&["canon", "--weight", "0,1,0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let p = &v["P"];
    assert_eq!(p.as_array().unwrap().len(), 1);
    assert_eq!(p[0].as_array().unwrap().len(), 1);
    assert_eq!(p[0][0], serde_json::json!({"0": "1"}));
}

#[test]
fn cli_configuration_errors_exit_2() {
    for args in [
        &["canon", "--weight", "1,1"][..],
        &["roots", "--type", "F", "--rank", "4"][..],
        &["canon", "--weight", "1,-1,0"][..],
        &["gram", "--weight", "1,1,1", "--engine", "fast"][..],
    ] {
        let out = qaffine(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn cli_verify_passes_and_csv_has_header() {
    let out = qaffine(&["verify", "--weight", "1,1,1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = qaffine(&["canon", "--weight", "1,1,0", "--format", "csv"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("matrix,row,col,value,series"));
}
