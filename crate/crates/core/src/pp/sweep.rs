//! Exhaustive and sampled classification sweeps over (A, B).
//!
//! Work is split by A into independent chunks; records are emitted in chunk
//! order, so the output does not depend on the number of workers.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    classify_pair, cond1, cond2, is_permutation, leading_power, prop3_i, prop3_ii, ClassifyRecord,
    Occupancy, TrinomialParams,
};
use crate::error::{Error, Result};
use crate::gf::{ExtElem, FieldTower};

/// Largest exhaustive m allowed without an explicit override.
pub const MAX_EXHAUSTIVE_M: u32 = 4;

/// Upper limit on predicted f-evaluations for a sweep.
pub const DEFAULT_EVAL_BUDGET: u128 = 100_000_000_000;

const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SweepMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub jobs: usize,
    pub force_budget: bool,
}

/// Worst-case number of f-evaluations: every pair tested on all q^3 points.
pub fn predicted_evaluations(f: &FieldTower, mode: SweepMode) -> u128 {
    let n = f.order() as u128;
    let pairs = match mode {
        SweepMode::Exhaustive => (n - 1) * (n - 1),
        SweepMode::Sampled { samples, .. } => samples as u128,
    };
    pairs * n
}

pub fn check_budget(f: &FieldTower, cfg: &SweepConfig) -> Result<()> {
    if cfg.force_budget {
        return Ok(());
    }
    let predicted = predicted_evaluations(f, cfg.mode);
    let over_m = matches!(cfg.mode, SweepMode::Exhaustive) && f.m() > MAX_EXHAUSTIVE_M;
    if over_m || predicted > DEFAULT_EVAL_BUDGET {
        return Err(Error::Budget { predicted, limit: DEFAULT_EVAL_BUDGET });
    }
    Ok(())
}

/// Header written alongside every classification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub m: u32,
    pub base_poly: String,
    pub ext_poly: [String; 4],
    pub mode: String,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub version: String,
}

impl ReportHeader {
    pub fn new(f: &FieldTower, mode: SweepMode) -> Self {
        let spec = f.spec();
        let (name, seed, samples) = match mode {
            SweepMode::Exhaustive => ("exhaustive", None, None),
            SweepMode::Sampled { samples, seed } => ("sampled", Some(seed), Some(samples)),
        };
        ReportHeader {
            m: f.m(),
            base_poly: spec.base_poly.unwrap_or_default(),
            ext_poly: spec.ext_poly.unwrap_or_default(),
            mode: name.to_string(),
            seed,
            samples,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifySummary {
    pub records: u64,
    pub permutations: u64,
    pub cond1: u64,
    pub cond2: u64,
    pub prop3: u64,
    /// Permutations satisfying neither condition.
    pub pp_outside_conditions: u64,
    /// Pairs satisfying a condition that are not permutations.
    pub sufficiency_violations: u64,
    /// Pairs in a non-permutation family that permute anyway.
    pub prop3_violations: u64,
}

impl ClassifySummary {
    pub fn add(&mut self, r: &ClassifyRecord) {
        self.records += 1;
        self.permutations += r.is_pp as u64;
        self.cond1 += r.cond1 as u64;
        self.cond2 += r.cond2 as u64;
        self.prop3 += (r.prop3_i || r.prop3_ii) as u64;
        self.pp_outside_conditions += (r.is_pp && !r.cond1 && !r.cond2) as u64;
        self.sufficiency_violations += ((r.cond1 || r.cond2) && !r.is_pp) as u64;
        self.prop3_violations += ((r.prop3_i || r.prop3_ii) && r.is_pp) as u64;
    }
}

/// Per-field tables for fast classification.
///
/// With log tables present, f(x) costs two table multiplications: the
/// leading term x^(q^2-q+1) and x^(q^2) are precomputed per x.
pub struct Classifier<'a> {
    f: &'a FieldTower,
    lead: Vec<u32>,
    /// logs of x^(q^2) and of x (entry 0 unused)
    log_xq2: Vec<u32>,
    log_x: Vec<u32>,
    /// (u^q, u^(q+1)) for u in the norm-one subgroup, in generator order
    units: Vec<(ExtElem, ExtElem, ExtElem)>,
}

impl<'a> Classifier<'a> {
    pub fn new(f: &'a FieldTower) -> Self {
        let units = f
            .norm_one_elements()
            .into_iter()
            .map(|u| {
                let uq = f.frobenius(u, 1);
                (u, uq, f.mul(uq, u))
            })
            .collect();
        let (mut lead, mut log_xq2, mut log_x) = (Vec::new(), Vec::new(), Vec::new());
        if let Some((log, _)) = f.log_tables() {
            for x in f.elements() {
                lead.push(f.pack(leading_power(f, x)) as u32);
                let xq2 = f.pack(f.frobenius(x, 2)) as usize;
                log_xq2.push(log[xq2]);
                log_x.push(log[f.pack(x) as usize]);
            }
        }
        Classifier { f, lead, log_xq2, log_x, units }
    }

    fn fast_is_permutation(&self, p: &TrinomialParams) -> bool {
        let f = self.f;
        let Some((log, exp)) = f.log_tables() else {
            return is_permutation(f, p);
        };
        let n = exp.len() as u32;
        let la = log[f.pack(p.a()) as usize];
        let lb = log[f.pack(p.b()) as usize];
        let add_mod = |x: u32, y: u32| {
            let s = x + y;
            if s >= n {
                s - n
            } else {
                s
            }
        };
        let mut seen = Occupancy::new(f.order());
        if !seen.insert(0) {
            return false;
        }
        for i in 1..f.order() as usize {
            let v = self.lead[i]
                ^ exp[add_mod(la, self.log_xq2[i]) as usize]
                ^ exp[add_mod(lb, self.log_x[i]) as usize];
            if !seen.insert(v as u64) {
                return false;
            }
        }
        true
    }

    /// For a fixed A, the first norm-one u (generator order) with
    /// u^q + A u^(q+1) = B, indexed by packed B.
    fn root_map(&self, a: ExtElem) -> Vec<Option<u32>> {
        let f = self.f;
        let mut map = vec![None; f.order() as usize];
        for (k, &(_, uq, uq1)) in self.units.iter().enumerate() {
            let b = uq + f.mul(a, uq1);
            let slot = &mut map[f.pack(b) as usize];
            if slot.is_none() {
                *slot = Some(k as u32);
            }
        }
        map
    }

    fn record(&self, p: &TrinomialParams, root_u: Option<ExtElem>) -> ClassifyRecord {
        let f = self.f;
        let root_witness = root_u.map(|u| f.qth_power_ratio_root(u).expect("u has norm one"));
        ClassifyRecord {
            a: p.a(),
            b: p.b(),
            is_pp: root_witness.is_none() && self.fast_is_permutation(p),
            cond1: cond1(f, p),
            cond2: cond2(f, p),
            prop3_i: prop3_i(f, p),
            prop3_ii: prop3_ii(f, p),
            root_witness,
        }
    }

    /// Records for (A, B) over every nonzero B, in canonical B order.
    pub fn classify_row(&self, a: ExtElem) -> Vec<ClassifyRecord> {
        let map = self.root_map(a);
        self.f
            .nonzero_elements()
            .map(|b| {
                let p = TrinomialParams::new(a, b).expect("nonzero");
                let u = map[self.f.pack(b) as usize].map(|k| self.units[k as usize].0);
                self.record(&p, u)
            })
            .collect()
    }

    pub fn classify(&self, p: &TrinomialParams) -> ClassifyRecord {
        let f = self.f;
        let u = self.units.iter().find(|&&(_, uq, uq1)| (uq + f.mul(p.a(), uq1)) == p.b());
        self.record(p, u.map(|t| t.0))
    }
}

/// The pairs visited in sampled mode: uniform nonzero (A, B) from a ChaCha8
/// stream seeded with `seed`.
pub fn sampled_pairs(f: &FieldTower, samples: u64, seed: u64) -> Vec<TrinomialParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let a = f.unpack(rng.gen_range(1..f.order()));
            let b = f.unpack(rng.gen_range(1..f.order()));
            TrinomialParams::new(a, b).expect("nonzero")
        })
        .collect()
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::FieldSpec(format!("cannot start worker pool: {e}")))
}

/// Runs a sweep and hands every record to `sink` in deterministic order.
pub fn classify_field<S>(f: &FieldTower, cfg: &SweepConfig, mut sink: S) -> Result<ClassifySummary>
where
    S: FnMut(&ClassifyRecord) -> std::io::Result<()>,
{
    check_budget(f, cfg)?;
    let pool = thread_pool(cfg.jobs)?;
    let classifier = Classifier::new(f);
    let mut summary = ClassifySummary::default();
    let mut emit = |batch: Vec<Vec<ClassifyRecord>>, summary: &mut ClassifySummary| -> Result<()> {
        for r in batch.iter().flatten() {
            summary.add(r);
            sink(r).map_err(|e| Error::FieldSpec(format!("write failed: {e}")))?;
        }
        Ok(())
    };
    match cfg.mode {
        SweepMode::Exhaustive => {
            let a_values: Vec<ExtElem> = f.nonzero_elements().collect();
            for chunk in a_values.chunks(CHUNK) {
                let batch = pool.install(|| {
                    chunk.par_iter().map(|&a| classifier.classify_row(a)).collect::<Vec<_>>()
                });
                emit(batch, &mut summary)?;
            }
        }
        SweepMode::Sampled { samples, seed } => {
            let pairs = sampled_pairs(f, samples, seed);
            for chunk in pairs.chunks(CHUNK * 16) {
                let batch = pool.install(|| {
                    chunk.par_iter().map(|p| vec![classifier.classify(p)]).collect::<Vec<_>>()
                });
                emit(batch, &mut summary)?;
            }
        }
    }
    Ok(summary)
}

/// Collects a whole sweep in memory.
pub fn classify_field_vec(f: &FieldTower, cfg: &SweepConfig) -> Result<(Vec<ClassifyRecord>, ClassifySummary)> {
    let mut out = Vec::new();
    let summary = classify_field(f, cfg, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok((out, summary))
}

/// Record-level cross-check against the unoptimised path.
pub fn matches_reference(f: &FieldTower, r: &ClassifyRecord) -> bool {
    let p = TrinomialParams::new(r.a, r.b).expect("records carry nonzero parameters");
    classify_pair(f, &p) == *r
}

pub const CSV_HEADER: [&str; 8] = ["A", "B", "is_pp", "cond1", "cond2", "prop3_i", "prop3_ii", "root_witness"];

pub fn write_jsonl<W: Write>(out: &mut W, r: &ClassifyRecord) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, r)?;
    out.write_all(b"\n")
}

pub fn csv_row(r: &ClassifyRecord) -> [String; 8] {
    [
        r.a.to_string(),
        r.b.to_string(),
        r.is_pp.to_string(),
        r.cond1.to_string(),
        r.cond2.to_string(),
        r.prop3_i.to_string(),
        r.prop3_ii.to_string(),
        r.root_witness.map(|x| x.to_string()).unwrap_or_default(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: SweepMode, jobs: usize) -> SweepConfig {
        SweepConfig { mode, jobs, force_budget: false }
    }

    #[test]
    fn exhaustive_m1_has_49_records_in_order() {
        let f = FieldTower::new(1).unwrap();
        let (recs, summary) = classify_field_vec(&f, &cfg(SweepMode::Exhaustive, 2)).unwrap();
        assert_eq!(recs.len(), 49);
        assert_eq!(summary.records, 49);
        assert!(recs.windows(2).all(|w| (w[0].a, w[0].b) < (w[1].a, w[1].b)));
        assert_eq!(summary.sufficiency_violations, 0);
    }

    #[test]
    fn fast_path_matches_reference_m2() {
        let f = FieldTower::new(2).unwrap();
        let (recs, _) = classify_field_vec(&f, &cfg(SweepMode::Exhaustive, 4)).unwrap();
        assert_eq!(recs.len(), 63 * 63);
        for r in &recs {
            assert!(matches_reference(&f, r), "{r:?}");
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let f = FieldTower::new(2).unwrap();
        let one = classify_field_vec(&f, &cfg(SweepMode::Exhaustive, 1)).unwrap();
        let many = classify_field_vec(&f, &cfg(SweepMode::Exhaustive, 8)).unwrap();
        assert_eq!(one, many);
        let s = SweepMode::Sampled { samples: 500, seed: 9 };
        let f3 = FieldTower::new(3).unwrap();
        assert_eq!(classify_field_vec(&f3, &cfg(s, 1)).unwrap(), classify_field_vec(&f3, &cfg(s, 8)).unwrap());
    }

    #[test]
    fn sampled_mode_is_seeded() {
        let f = FieldTower::new(5).unwrap();
        let a = sampled_pairs(&f, 20, 1);
        assert_eq!(a, sampled_pairs(&f, 20, 1));
        assert_ne!(a, sampled_pairs(&f, 20, 2));
        let (recs, _) = classify_field_vec(&f, &cfg(SweepMode::Sampled { samples: 20, seed: 1 }, 2)).unwrap();
        for (r, p) in recs.iter().zip(&a) {
            assert_eq!((r.a, r.b), (p.a(), p.b()));
            assert!(matches_reference(&f, r));
        }
    }

    #[test]
    fn budget_refusal() {
        let f = FieldTower::new(5).unwrap();
        let err = classify_field_vec(&f, &cfg(SweepMode::Exhaustive, 1)).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
        let f = FieldTower::new(12).unwrap();
        let big = SweepMode::Sampled { samples: 1 << 20, seed: 0 };
        assert!(matches!(check_budget(&f, &cfg(big, 1)), Err(Error::Budget { .. })));
        let forced = SweepConfig { force_budget: true, ..cfg(big, 1) };
        assert!(check_budget(&f, &forced).is_ok());
    }

    #[test]
    fn csv_rows() {
        let f = FieldTower::new(1).unwrap();
        let p = TrinomialParams::new(ExtElem::ONE, ExtElem::ONE).unwrap();
        let row = csv_row(&classify_pair(&f, &p));
        assert_eq!(row[0], "1,0,0");
        assert_eq!(row.len(), CSV_HEADER.len());
    }
}
