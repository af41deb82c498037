//! Per-graph analysis reports and batch summaries.
//!
//! A report is a pure function of the graph and the configuration. Every
//! verdict carries the measured value and the threshold that decided it, and
//! every coefficient behind a threshold is echoed in `config`.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::codec::serialize;
use crate::error::{Error, Result};
use crate::genlab::GeneratorSpec;
use crate::mag::{Mag, MagSignature};
use crate::randomness::{
    deficiency_certificate, passes_log_randomness_test, DeficiencyCertificate, RandomnessThreshold,
};
use crate::temporal::{
    snapshot_loss, witness_sweep, EdgeKind, SnapshotLoss, SweepConfig, WitnessSweep,
};
use crate::topology::{
    log_scale, topology_report, Diameter, Rigidity, TopologyReport, DEFAULT_NODE_BUDGET,
};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    /// `δ(N) = c_deficiency · log2 N`.
    pub c_deficiency: f64,
    /// Degree deviation bound `c_degree · sqrt(N log2 N)`.
    pub c_degree: f64,
    /// Common-neighbour floor `N/4 - c_paths · sqrt(N log2 N)`.
    pub c_paths: f64,
    pub diameter_target: usize,
    pub rigidity_budget: u64,
    pub sweep: SweepConfig,
    /// How the graph was produced, when known.
    pub generator: Option<GeneratorSpec>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            c_deficiency: RandomnessThreshold::DEFAULT_C,
            c_degree: 2.0,
            c_paths: 1.0,
            diameter_target: 2,
            rigidity_budget: DEFAULT_NODE_BUDGET,
            sweep: SweepConfig::default(),
            generator: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        RandomnessThreshold::new(self.c_deficiency)?;
        for (name, c) in [("c_degree", self.c_degree), ("c_paths", self.c_paths)] {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be non-negative, got {c}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Measure {
    Count(u64),
    Real(f64),
    Flag(bool),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub measured: Measure,
    pub relation: String,
    pub threshold: Measure,
}

impl Verdict {
    fn new(pass: bool, measured: Measure, relation: &str, threshold: Measure) -> Self {
        Verdict {
            status: if pass {
                VerdictStatus::Pass
            } else {
                VerdictStatus::Fail
            },
            measured,
            relation: relation.to_string(),
            threshold,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == VerdictStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryVerdicts {
    pub degree_concentration: Verdict,
    pub disjoint_paths: Verdict,
    pub diameter: Verdict,
    pub rigidity: Verdict,
}

impl CorollaryVerdicts {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Verdict)> {
        [
            ("degree_concentration", &self.degree_concentration),
            ("disjoint_paths", &self.disjoint_paths),
            ("diameter", &self.diameter),
            ("rigidity", &self.rigidity),
        ]
        .into_iter()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessVerdict {
    pub aspect: usize,
    pub edge_kind: EdgeKind,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemporalSummary {
    pub snapshot_loss: Vec<SnapshotLoss>,
    pub witness_sweeps: Vec<WitnessSweep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureEcho {
    pub aspect_sizes: Vec<usize>,
    pub time_aspect: Option<usize>,
    pub order: usize,
    pub n_composite: usize,
}

impl From<&MagSignature> for SignatureEcho {
    fn from(s: &MagSignature) -> Self {
        SignatureEcho {
            aspect_sizes: s.aspect_sizes().to_vec(),
            time_aspect: s.time_aspect(),
            order: s.order(),
            n_composite: s.n_composite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub report_version: u32,
    /// SHA-256 of the graph's `.magc` bit-payload serialization.
    pub graph_id: String,
    pub signature: SignatureEcho,
    pub certificate: DeficiencyCertificate,
    pub topology: TopologyReport,
    pub temporal: TemporalSummary,
    pub randomness_verdict: Verdict,
    pub corollary_verdicts: CorollaryVerdicts,
    pub witness_verdicts: Vec<WitnessVerdict>,
    pub config: AnalysisConfig,
}

impl AnalysisReport {
    /// All verdicts with stable names.
    pub fn verdicts(&self) -> Vec<(String, &Verdict)> {
        let mut v = vec![("log_randomness".to_string(), &self.randomness_verdict)];
        v.extend(
            self.corollary_verdicts
                .iter()
                .map(|(k, x)| (k.to_string(), x)),
        );
        v.extend(
            self.witness_verdicts
                .iter()
                .map(|w| (format!("witness_aspect_{}", w.aspect), &w.verdict)),
        );
        v
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| v.passed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn graph_id(g: &Mag) -> String {
    Sha256::digest(serialize(g))
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Runs every measurement on `g` and assembles the verdicts.
pub fn analyze(g: &Mag, config: &AnalysisConfig) -> Result<AnalysisReport> {
    config.validate()?;
    let sig = g.signature();
    let n = g.n_composite();
    let scale = log_scale(n);

    let certificate = deficiency_certificate(g);
    let threshold = RandomnessThreshold::new(config.c_deficiency)?;
    let randomness_verdict = Verdict::new(
        passes_log_randomness_test(&certificate, &threshold),
        Measure::Count(certificate.deficiency_lb),
        "<=",
        Measure::Real(threshold.budget(n as u64)),
    );

    let topology = topology_report(g, config.c_degree, config.rigidity_budget)?;

    let path_floor = n as f64 / 4.0 - config.c_paths * scale;
    let diameter_measure = match topology.diameter {
        Diameter::Finite(d) => Measure::Count(d as u64),
        Diameter::Infinite => Measure::Text("infinite".into()),
    };
    let rigidity = match &topology.rigidity {
        Rigidity::Undecided { .. } => Verdict {
            status: VerdictStatus::Undecided,
            measured: Measure::Text("undecided".into()),
            relation: "==".into(),
            threshold: Measure::Flag(true),
        },
        r => Verdict::new(
            r.is_rigid() == Some(true),
            Measure::Flag(r.is_rigid() == Some(true)),
            "==",
            Measure::Flag(true),
        ),
    };
    let corollary_verdicts = CorollaryVerdicts {
        degree_concentration: Verdict::new(
            topology.max_degree_deviation <= topology.degree_bound,
            Measure::Real(topology.max_degree_deviation),
            "<=",
            Measure::Real(topology.degree_bound),
        ),
        disjoint_paths: Verdict::new(
            topology.min_common_neighbors as f64 >= path_floor,
            Measure::Count(topology.min_common_neighbors as u64),
            ">=",
            Measure::Real(path_floor),
        ),
        diameter: Verdict::new(
            topology.diameter == Diameter::Finite(config.diameter_target),
            diameter_measure,
            "==",
            Measure::Count(config.diameter_target as u64),
        ),
        rigidity,
    };

    let mut snapshot = Vec::new();
    let mut sweeps = Vec::new();
    let mut witness_verdicts = Vec::new();
    for h in 2..=sig.order() {
        snapshot.push(snapshot_loss(g, h)?);
        if sig.aspect_sizes()[h - 1] > 8 {
            let sweep = witness_sweep(g, h, &config.sweep)?;
            witness_verdicts.push(WitnessVerdict {
                aspect: h,
                edge_kind: sweep.edge_kind,
                verdict: Verdict::new(
                    sweep.failures == 0,
                    Measure::Count(sweep.failures),
                    "<=",
                    Measure::Count(0),
                ),
            });
            sweeps.push(sweep);
        }
    }

    Ok(AnalysisReport {
        report_version: REPORT_VERSION,
        graph_id: graph_id(g),
        signature: sig.into(),
        certificate,
        topology,
        temporal: TemporalSummary {
            snapshot_loss: snapshot,
            witness_sweeps: sweeps,
        },
        randomness_verdict,
        corollary_verdicts,
        witness_verdicts,
        config: config.clone(),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub undecided: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Stats {
    fn of(mut values: Vec<f64>) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        values.sort_by(f64::total_cmp);
        let n = values.len();
        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            (values[n / 2 - 1] + values[n / 2]) / 2.0
        };
        Some(Stats {
            count: n,
            min: values[0],
            median,
            max: values[n - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub report_version: u32,
    pub n_reports: usize,
    pub signature: SignatureEcho,
    pub seeds: Vec<u64>,
    pub verdicts: BTreeMap<String, Tally>,
    pub measures: BTreeMap<String, Stats>,
}

impl BatchSummary {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Pass counts per verdict and min/median/max per measured value.
pub fn batch_summary(reports: &[AnalysisReport]) -> Result<BatchSummary> {
    let first = reports.first().ok_or(Error::EmptyBatch)?;
    for r in reports {
        if r.signature != first.signature {
            return Err(Error::MixedSignatures(
                first.signature.aspect_sizes.clone(),
                r.signature.aspect_sizes.clone(),
            ));
        }
    }

    let mut verdicts: BTreeMap<String, Tally> = BTreeMap::new();
    let mut values: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut seeds = Vec::new();
    for r in reports {
        for (name, v) in r.verdicts() {
            let t = verdicts.entry(name).or_default();
            t.total += 1;
            match v.status {
                VerdictStatus::Pass => t.pass += 1,
                VerdictStatus::Fail => t.fail += 1,
                VerdictStatus::Undecided => t.undecided += 1,
            }
        }
        let mut put = |k: String, x: f64| values.entry(k).or_default().push(x);
        put("deficiency_lb".into(), r.certificate.deficiency_lb as f64);
        put("compressed_len".into(), r.certificate.compressed_len as f64);
        put(
            "max_degree_deviation".into(),
            r.topology.max_degree_deviation,
        );
        put(
            "min_common_neighbors".into(),
            r.topology.min_common_neighbors as f64,
        );
        put("connectivity_lb".into(), r.topology.connectivity_lb as f64);
        if let Some(d) = r.topology.diameter.finite() {
            put("diameter".into(), d as f64);
        }
        for l in &r.temporal.snapshot_loss {
            put(
                format!("snapshot_loss_fraction_aspect_{}", l.aspect),
                l.fraction,
            );
        }
        for s in &r.temporal.witness_sweeps {
            put(
                format!("witness_failures_aspect_{}", s.aspect),
                s.failures as f64,
            );
        }
        if let Some(g) = &r.config.generator {
            seeds.push(g.seed);
        }
    }

    Ok(BatchSummary {
        report_version: REPORT_VERSION,
        n_reports: reports.len(),
        signature: first.signature.clone(),
        seeds,
        verdicts,
        measures: values
            .into_iter()
            .filter_map(|(k, v)| Stats::of(v).map(|s| (k, s)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{generate, GeneratorKind};

    fn sig(s: &[usize]) -> MagSignature {
        MagSignature::new(s.to_vec()).unwrap()
    }

    #[test]
    fn empty_graph_fails_everything() {
        // At N = 256 the empty graph's degree deviation 127.5 exceeds 2·sqrt(2048).
        let r = analyze(&Mag::empty(sig(&[16, 16])), &AnalysisConfig::default()).unwrap();
        assert!(!r.randomness_verdict.passed());
        for (name, v) in r.corollary_verdicts.iter() {
            assert_eq!(v.status, VerdictStatus::Fail, "{name}");
        }
        assert_eq!(r.temporal.witness_sweeps[0].found, 0);
        assert!(!r.all_passed());
    }

    #[test]
    fn complete_graph_report() {
        let r = analyze(&Mag::complete(sig(&[4, 9])), &AnalysisConfig::default()).unwrap();
        assert_eq!(r.topology.diameter, Diameter::Finite(1));
        assert_eq!(r.topology.is_rigid, Some(false));
        assert!(!r.randomness_verdict.passed());
        assert!(!r.corollary_verdicts.diameter.passed());
        assert!(!r.corollary_verdicts.rigidity.passed());
        assert!(r.witness_verdicts[0].verdict.passed());
    }

    #[test]
    fn report_is_stable() {
        let g = generate(&GeneratorSpec::new(sig(&[4, 9]), GeneratorKind::UniformHalf, 1).unwrap())
            .unwrap();
        let cfg = AnalysisConfig::default();
        assert_eq!(
            analyze(&g, &cfg).unwrap().to_json(),
            analyze(&g, &cfg).unwrap().to_json()
        );
        let json: serde_json::Value =
            serde_json::from_str(&analyze(&g, &cfg).unwrap().to_json()).unwrap();
        assert_eq!(json["report_version"], 1);
        assert_eq!(json["graph_id"].as_str().unwrap().len(), 64);
        assert_eq!(json["config"]["c_deficiency"], 3.0);
        assert_eq!(json["config"]["c_degree"], 2.0);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = AnalysisConfig {
            c_deficiency: 0.0,
            ..AnalysisConfig::default()
        };
        assert!(analyze(&Mag::empty(sig(&[4])), &cfg).is_err());
    }

    #[test]
    fn batch_tallies() {
        assert_eq!(batch_summary(&[]), Err(Error::EmptyBatch));
        let cfg = AnalysisConfig::default();
        let empty = analyze(&Mag::empty(sig(&[16])), &cfg).unwrap();
        let full = analyze(&Mag::complete(sig(&[16])), &cfg).unwrap();
        let s = batch_summary(&[empty.clone(), empty.clone(), empty.clone()]).unwrap();
        assert_eq!(
            s.measures["deficiency_lb"].median,
            empty.certificate.deficiency_lb as f64
        );
        assert_eq!(s.verdicts["log_randomness"].fail, 3);

        let s = batch_summary(&[empty.clone(), full.clone()]).unwrap();
        assert_eq!(
            s.verdicts["diameter"],
            Tally {
                pass: 0,
                fail: 2,
                undecided: 0,
                total: 2
            }
        );
        assert_eq!(s.measures["diameter"].count, 1);

        let other = analyze(&Mag::empty(sig(&[15])), &cfg).unwrap();
        assert!(matches!(
            batch_summary(&[empty, other]),
            Err(Error::MixedSignatures(..))
        ));
    }

    #[test]
    fn stats_median() {
        let s = Stats::of(vec![3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!((s.min, s.median, s.max), (1.0, 2.5, 10.0));
        assert!(Stats::of(vec![]).is_none());
    }
}
