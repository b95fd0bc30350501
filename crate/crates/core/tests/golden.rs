use trinomial::pp::sweep::{self, SweepConfig, SweepMode};
use trinomial::FieldTower;

const GOLDEN_M1: &str = include_str!("golden/classify_m1.jsonl");

fn exhaustive(jobs: usize) -> SweepConfig {
    SweepConfig { mode: SweepMode::Exhaustive, jobs, force_budget: false }
}

fn jsonl(f: &FieldTower, jobs: usize) -> String {
    let mut out = Vec::new();
    sweep::classify_field(f, &exhaustive(jobs), |r| sweep::write_jsonl(&mut out, r)).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn classify_m1_matches_golden_file() {
    let f = FieldTower::new(1).unwrap();
    let text = jsonl(&f, 2);
    assert_eq!(text.lines().count(), 49);
    assert_eq!(text, GOLDEN_M1);
}

#[test]
fn golden_records_agree_with_reference_path() {
    let f = FieldTower::new(1).unwrap();
    for line in GOLDEN_M1.lines() {
        let r: trinomial::pp::ClassifyRecord = serde_json::from_str(line).unwrap();
        assert!(sweep::matches_reference(&f, &r), "{line}");
    }
}

#[test]
fn records_are_in_encoding_order() {
    let f = FieldTower::new(2).unwrap();
    let (records, _) = sweep::classify_field_vec(&f, &exhaustive(3)).unwrap();
    assert!(records.windows(2).all(|w| (w[0].a, w[0].b) < (w[1].a, w[1].b)));
}

#[test]
fn worker_count_does_not_change_output() {
    let f = FieldTower::new(2).unwrap();
    assert_eq!(jsonl(&f, 1), jsonl(&f, 8));
}

#[test]
fn sampled_sweep_is_reproducible() {
    let f = FieldTower::new(5).unwrap();
    let cfg = |jobs| SweepConfig { mode: SweepMode::Sampled { samples: 200, seed: 11 }, jobs, force_budget: false };
    let (a, _) = sweep::classify_field_vec(&f, &cfg(1)).unwrap();
    let (b, _) = sweep::classify_field_vec(&f, &cfg(4)).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|r| sweep::matches_reference(&f, r)));
}
