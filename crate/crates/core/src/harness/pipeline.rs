//! End-to-end pipelines and their JSON traces.
//!
//! A run generates the instance, materializes the prefix the pipeline will
//! touch, and from then on works only on that prefix. `verify` repeats the
//! post-search stage from the prefix and witness stored in a trace, so a trace
//! can be checked without regenerating anything.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coloring::{
    color_large, color_triple, color_tuple, BaseColor, ColoringInstance, EpsilonInstance, HColor, OmegaInstance,
};
use crate::epsilon::{EpsilonSpace, EpsilonTerm};
use crate::error::{Error, Result};
use crate::extract::{
    check_triples, extract_epsilon_b_path, extract_large, extract_rt3, extract_rtn, subterm_check, HomogeneousWitness,
    WitnessArity,
};
use crate::harness::gen::{gen_instance, Instance, Pipeline};
use crate::harness::search::{find_homogeneous, find_large_homogeneous, SearchOutcome, SearchStats};
use crate::hindman::{
    build_f, check_monochromatic, check_property_p, extract_hindman, find_monochromatic_blocks, BlockSearch,
    BlockSequence, FlattenedInstance,
};
use crate::omega::{OmegaSpace, OmegaTerm};
use crate::orders::{builtin_order, verify_descending_slice, Element, Order, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub pipeline: Pipeline,
    pub order: String,
    pub kind: String,
    pub h: usize,
    pub n: usize,
    pub k: usize,
    pub window: usize,
    pub size: usize,
    pub count: usize,
    pub budget: u64,
    pub depth: usize,
    pub max_block: usize,
    pub seed: u64,
}

impl PipelineConfig {
    /// Defaults that make each pipeline run end to end on ω*.
    pub fn new(pipeline: Pipeline) -> Self {
        let base = PipelineConfig {
            pipeline,
            order: "omega-star".into(),
            kind: "constant-delta".into(),
            h: 2,
            n: 3,
            k: 2,
            window: 100,
            size: 10,
            count: 8,
            budget: 5_000_000,
            depth: 12,
            max_block: 1,
            seed: 0,
        };
        match pipeline {
            Pipeline::Rt3 => base,
            Pipeline::Rtn => PipelineConfig {
                window: 60,
                size: 8,
                count: 5,
                ..base
            },
            Pipeline::Large => PipelineConfig {
                kind: "pure-epsilon".into(),
                window: 30,
                size: 10,
                count: 5,
                ..base
            },
            Pipeline::Hindman => PipelineConfig {
                window: 60,
                size: 50,
                count: 6,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if !self.pipeline.kinds().contains(&self.kind.as_str()) {
            return bad(format!(
                "unknown kind `{}` for {}; expected one of {:?}",
                self.kind,
                self.pipeline.name(),
                self.pipeline.kinds()
            ));
        }
        if self.window == 0 {
            return bad("window must be positive".into());
        }
        match self.pipeline {
            Pipeline::Rt3 if self.size < 3 => bad(format!("rt3 needs witness size >= 3, got {}", self.size)),
            Pipeline::Rtn if self.h < 2 => bad(format!("rtn needs h >= 2, got {}", self.h)),
            Pipeline::Rtn if self.size < self.h + 2 => {
                bad(format!("rtn needs witness size >= h + 2 = {}, got {}", self.h + 2, self.size))
            }
            Pipeline::Large if self.size < 4 => bad(format!("large needs witness size >= 4, got {}", self.size)),
            Pipeline::Hindman if self.n < 3 || self.k < 2 => {
                bad(format!("hindman needs n >= 3 and k >= 2, got n = {}, k = {}", self.n, self.k))
            }
            Pipeline::Hindman if self.size < self.n => {
                bad(format!("hindman needs at least n = {} blocks, got {}", self.n, self.size))
            }
            Pipeline::Hindman if self.max_block == 0 => bad("max_block must be positive".into()),
            _ => Ok(()),
        }
    }

    /// Number of flattened components the hindman pipeline materializes.
    pub fn flatten_bound(&self) -> usize {
        4 * self.window + 16
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Verified,
    Failed,
    Exhausted,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub outcome: Outcome,
    pub instance_descent: Option<Verdict>,
    pub extractor: Option<String>,
    pub colour_contract: Option<bool>,
    pub property_p: Option<Verdict>,
    pub descent: Option<Verdict>,
    pub subterm: Option<bool>,
    pub error: Option<ErrorInfo>,
    pub verified: bool,
}

impl Verdicts {
    fn empty(outcome: Outcome) -> Self {
        Verdicts {
            outcome,
            instance_descent: None,
            extractor: None,
            colour_contract: None,
            property_p: None,
            descent: None,
            subterm: None,
            error: None,
            verified: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub pipeline: Pipeline,
    pub config: PipelineConfig,
    pub instance_prefix: Vec<Value>,
    pub witness: Option<Value>,
    pub colour: Option<Value>,
    pub extracted: Vec<Element>,
    pub verdicts: Verdicts,
    pub stats: BTreeMap<String, Value>,
}

impl Trace {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("traces serialize");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("trace: {e}")))
    }

    /// Exit status for the CLI: 0 verified, 2 exhausted, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.verdicts.outcome {
            Outcome::Verified if self.verdicts.verified => 0,
            Outcome::Exhausted => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HindmanWitness {
    pub blocks: BlockSequence,
    pub colour: usize,
}

/// The materialized part of an instance.
#[derive(Clone, Debug)]
pub enum Prefix {
    Omega { level: u32, terms: Vec<OmegaTerm> },
    Epsilon { terms: Vec<EpsilonTerm> },
}

impl Prefix {
    fn to_json(&self) -> Vec<Value> {
        match self {
            Prefix::Omega { terms, .. } => terms.iter().map(OmegaTerm::to_json).collect(),
            Prefix::Epsilon { terms } => terms.iter().map(EpsilonTerm::to_json).collect(),
        }
    }

    fn from_json(cfg: &PipelineConfig, order: &Order, values: &[Value]) -> Result<Self> {
        match cfg.pipeline.omega_level(cfg.h) {
            Some(level) => Ok(Prefix::Omega {
                level,
                terms: values
                    .iter()
                    .map(|v| OmegaTerm::from_json(&**order, level, v))
                    .collect::<Result<_>>()?,
            }),
            None => Ok(Prefix::Epsilon {
                terms: values
                    .iter()
                    .map(|v| EpsilonTerm::from_json(&**order, v))
                    .collect::<Result<_>>()?,
            }),
        }
    }

    fn descent(&self, order: &Order) -> Result<Verdict> {
        match self {
            Prefix::Omega { level, terms } => verify_descending_slice(&OmegaSpace::new(order.clone(), *level), terms),
            Prefix::Epsilon { terms } => verify_descending_slice(&EpsilonSpace::new(order.clone()), terms),
        }
    }
}

fn omega_instance(order: &Order, level: u32, terms: &[OmegaTerm]) -> OmegaInstance {
    ColoringInstance::from_terms(OmegaSpace::new(order.clone(), level), terms.to_vec())
}

fn epsilon_instance(order: &Order, terms: &[EpsilonTerm]) -> EpsilonInstance {
    ColoringInstance::from_terms(EpsilonSpace::new(order.clone()), terms.to_vec())
}

fn materialize(cfg: &PipelineConfig, order: &Order) -> Result<Prefix> {
    match gen_instance(cfg.pipeline, order, &cfg.kind, cfg.h, cfg.depth)? {
        Instance::Omega { level, seq } if cfg.pipeline == Pipeline::Hindman => {
            let fl = crate::hindman::flatten(order.clone(), &seq, cfg.flatten_bound())?;
            Ok(Prefix::Omega { level, terms: fl.terms })
        }
        Instance::Omega { level, seq } => Ok(Prefix::Omega {
            level,
            terms: seq.prefix(cfg.window)?,
        }),
        Instance::Epsilon { seq } => Ok(Prefix::Epsilon {
            terms: seq.prefix(cfg.window)?,
        }),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// What the post-search stage produces.
struct Finished {
    extracted: Vec<Element>,
    verdicts: Verdicts,
    stats: BTreeMap<String, Value>,
}

fn fail(mut verdicts: Verdicts, e: &Error) -> Verdicts {
    verdicts.outcome = Outcome::Error;
    verdicts.error = Some(e.into());
    if matches!(e, Error::ColourMismatch { .. }) {
        verdicts.colour_contract = Some(false);
    }
    verdicts.verified = false;
    verdicts
}

// Checks shared by every extractor: descent in X and subterm provenance.
fn conclude<T: crate::extract::Subterms>(
    mut verdicts: Verdicts,
    order: &Order,
    terms: &[T],
    extracted: Result<Vec<Element>>,
    stats: BTreeMap<String, Value>,
) -> Finished {
    match extracted {
        Ok(out) => {
            let descent = verify_descending_slice(&**order, &out);
            match descent {
                Ok(d) => {
                    verdicts.descent = Some(d);
                    verdicts.subterm = Some(subterm_check(terms, &out));
                    verdicts.colour_contract.get_or_insert(true);
                    verdicts.verified = d.is_ok()
                        && verdicts.subterm == Some(true)
                        && verdicts.colour_contract == Some(true)
                        && verdicts.instance_descent == Some(Verdict::Ok)
                        && verdicts.property_p.is_none_or(|p| p.is_ok());
                    verdicts.outcome = if verdicts.verified {
                        Outcome::Verified
                    } else {
                        Outcome::Failed
                    };
                    Finished {
                        extracted: out,
                        verdicts,
                        stats,
                    }
                }
                Err(e) => Finished {
                    extracted: out,
                    verdicts: fail(verdicts, &e),
                    stats,
                },
            }
        }
        Err(e) => Finished {
            extracted: Vec::new(),
            verdicts: fail(verdicts, &e),
            stats,
        },
    }
}

fn finish(cfg: &PipelineConfig, order: &Order, prefix: &Prefix, witness: &Value) -> Finished {
    let mut verdicts = Verdicts::empty(Outcome::Failed);
    let mut stats = BTreeMap::new();
    match prefix.descent(order) {
        Ok(v) => verdicts.instance_descent = Some(v),
        Err(e) => {
            return Finished {
                extracted: Vec::new(),
                verdicts: fail(verdicts, &e),
                stats,
            }
        }
    }
    match (cfg.pipeline, prefix) {
        (Pipeline::Rt3 | Pipeline::Rtn, Prefix::Omega { level, terms }) => {
            let inst = omega_instance(order, *level, terms);
            let extracted = if cfg.pipeline == Pipeline::Rt3 {
                verdicts.extractor = Some("extract_rt3".into());
                from_value::<HomogeneousWitness<Value>>(witness, "witness")
                    .and_then(|w| extract_rt3(&inst, &w.indices, cfg.count))
            } else {
                verdicts.extractor = Some("extract_rtn".into());
                from_value::<HomogeneousWitness<Value>>(witness, "witness")
                    .and_then(|w| extract_rtn(&inst, cfg.h, &w.indices, cfg.count))
            };
            conclude(verdicts, order, terms, extracted, stats)
        }
        (Pipeline::Large, Prefix::Epsilon { terms }) => {
            let inst = epsilon_instance(order, terms);
            let extracted = from_value::<HomogeneousWitness<u8>>(witness, "witness").and_then(|w| {
                if w.colour == 0 {
                    verdicts.extractor = Some("extract_large".into());
                    extract_large(&inst, &w.indices, cfg.count)
                } else {
                    verdicts.extractor = Some("extract_epsilon_b_path".into());
                    check_triples(&inst, &w.indices, BaseColor::C2)
                        .and_then(|()| extract_epsilon_b_path(&inst, &w.indices, cfg.count))
                }
            });
            conclude(verdicts, order, terms, extracted, stats)
        }
        (Pipeline::Hindman, Prefix::Omega { terms, .. }) => {
            verdicts.extractor = Some("extract_hindman".into());
            let extracted = (|| {
                let w: HindmanWitness = from_value(witness, "witness")?;
                let fl = FlattenedInstance::from_terms(order.clone(), terms.clone(), cfg.flatten_bound())?;
                check_monochromatic(&fl, &w.blocks, cfg.n, cfg.k, w.colour)?;
                let f = build_f(&fl, &w.blocks, cfg.n, cfg.k, w.colour)?;
                let reach = (0..fl.len()).take_while(|&i| f.eval(i).is_ok()).count();
                stats.insert("f_reach".into(), json!(reach));
                verdicts.property_p = Some(check_property_p(&fl, &f, reach));
                extract_hindman(&fl, &f, cfg.count)
            })();
            conclude(verdicts, order, terms, extracted, stats)
        }
        _ => {
            let e = Error::Parameter("prefix does not match the pipeline".into());
            Finished {
                extracted: Vec::new(),
                verdicts: fail(verdicts, &e),
                stats,
            }
        }
    }
}

struct Searched {
    witness: Option<Value>,
    colour: Option<Value>,
    stats: BTreeMap<String, Value>,
}

fn search_stats(s: &SearchStats) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("search".to_string(), to_value(s));
    m
}

fn search_witness(cfg: &PipelineConfig, order: &Order, prefix: &Prefix) -> Result<Searched> {
    fn pack<C: Serialize>(res: SearchOutcome<C>, arity: WitnessArity, stats: &SearchStats) -> Searched {
        match res {
            SearchOutcome::Found { indices, colour } => Searched {
                colour: Some(to_value(&colour)),
                witness: Some(to_value(&HomogeneousWitness {
                    indices,
                    colour,
                    arity,
                })),
                stats: search_stats(stats),
            },
            SearchOutcome::Exhausted => Searched {
                witness: None,
                colour: None,
                stats: search_stats(stats),
            },
        }
    }
    match (cfg.pipeline, prefix) {
        (Pipeline::Rt3, Prefix::Omega { level, terms }) => {
            let inst = omega_instance(order, *level, terms);
            let (res, stats) = find_homogeneous(
                |t: &[usize]| color_triple(&inst, t[0], t[1], t[2]),
                3,
                cfg.window,
                cfg.size,
                cfg.budget,
            )?;
            Ok(pack(res, WitnessArity::Tuples(3), &stats))
        }
        (Pipeline::Rtn, Prefix::Omega { level, terms }) => {
            let inst = omega_instance(order, *level, terms);
            let (res, stats) =
                find_homogeneous(|t: &[usize]| color_tuple(&inst, t), cfg.h + 2, cfg.window, cfg.size, cfg.budget)?;
            Ok(pack::<HColor>(res, WitnessArity::Tuples(cfg.h + 2), &stats))
        }
        (Pipeline::Large, Prefix::Epsilon { terms }) => {
            let inst = epsilon_instance(order, terms);
            let (res, stats) =
                find_large_homogeneous(|s: &[usize]| color_large(&inst, s), cfg.window, cfg.size, cfg.budget)?;
            Ok(pack(res, WitnessArity::ExactlyLarge, &stats))
        }
        (Pipeline::Hindman, Prefix::Omega { terms, .. }) => {
            let fl = FlattenedInstance::from_terms(order.clone(), terms.clone(), cfg.flatten_bound())?;
            let (res, stats) =
                find_monochromatic_blocks(&fl, cfg.n, cfg.k, cfg.size, cfg.window, cfg.budget, cfg.max_block)?;
            let mut m = BTreeMap::new();
            m.insert("search".to_string(), to_value(&stats));
            m.insert("flattened".to_string(), json!(fl.len()));
            Ok(match res {
                BlockSearch::Found { blocks, colour } => Searched {
                    colour: Some(json!(colour)),
                    witness: Some(to_value(&HindmanWitness { blocks, colour })),
                    stats: m,
                },
                BlockSearch::Exhausted => Searched {
                    witness: None,
                    colour: None,
                    stats: m,
                },
            })
        }
        _ => Err(Error::Parameter("prefix does not match the pipeline".into())),
    }
}

fn error_trace(cfg: &PipelineConfig, prefix: Vec<Value>, e: &Error) -> Trace {
    Trace {
        pipeline: cfg.pipeline,
        config: cfg.clone(),
        instance_prefix: prefix,
        witness: None,
        colour: None,
        extracted: Vec::new(),
        verdicts: fail(Verdicts::empty(Outcome::Error), e),
        stats: BTreeMap::new(),
    }
}

/// Runs the pipeline end to end. Failures are recorded in the trace.
pub fn run_pipeline(cfg: &PipelineConfig) -> Trace {
    let setup = cfg
        .validate()
        .and_then(|()| builtin_order(&cfg.order))
        .and_then(|o| materialize(cfg, &o).map(|p| (o, p)));
    let (order, prefix) = match setup {
        Ok(x) => x,
        Err(e) => return error_trace(cfg, Vec::new(), &e),
    };
    let prefix_json = prefix.to_json();
    let searched = match search_witness(cfg, &order, &prefix) {
        Ok(s) => s,
        Err(e) => return error_trace(cfg, prefix_json, &e),
    };
    let Some(witness) = searched.witness.clone() else {
        return Trace {
            pipeline: cfg.pipeline,
            config: cfg.clone(),
            instance_prefix: prefix_json,
            witness: None,
            colour: None,
            extracted: Vec::new(),
            verdicts: Verdicts::empty(Outcome::Exhausted),
            stats: searched.stats,
        };
    };
    let done = finish(cfg, &order, &prefix, &witness);
    let mut stats = searched.stats;
    stats.extend(done.stats);
    Trace {
        pipeline: cfg.pipeline,
        config: cfg.clone(),
        instance_prefix: prefix_json,
        witness: Some(witness),
        colour: searched.colour,
        extracted: done.extracted,
        verdicts: done.verdicts,
        stats,
    }
}

/// Result of re-checking a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub mismatches: Vec<String>,
    pub verified: bool,
    pub outcome: Outcome,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if !self.mismatches.is_empty() {
            1
        } else if self.verified {
            0
        } else if self.outcome == Outcome::Exhausted {
            2
        } else {
            1
        }
    }
}

/// Re-executes the post-search stage from the trace's own prefix and witness
/// and compares every field except `stats`.
pub fn verify_trace(trace: &Trace) -> VerifyReport {
    let mut mismatches = Vec::new();
    if trace.pipeline != trace.config.pipeline {
        mismatches.push("pipeline differs from config.pipeline".to_string());
    }
    let cfg = &trace.config;
    let rebuilt = cfg
        .validate()
        .and_then(|()| builtin_order(&cfg.order))
        .and_then(|o| Prefix::from_json(cfg, &o, &trace.instance_prefix).map(|p| (o, p)));
    let (order, prefix) = match rebuilt {
        Ok(x) => x,
        Err(e) => {
            let expected = fail(Verdicts::empty(Outcome::Error), &e);
            if trace.verdicts != expected || trace.witness.is_some() || !trace.extracted.is_empty() {
                mismatches.push(format!("trace cannot be rebuilt: {e}"));
            }
            return VerifyReport {
                mismatches,
                verified: false,
                outcome: Outcome::Error,
            };
        }
    };
    if prefix.to_json() != trace.instance_prefix {
        mismatches.push("instance_prefix is not in canonical form".into());
    }
    let Some(witness) = &trace.witness else {
        if trace.verdicts.outcome != Outcome::Exhausted && trace.verdicts.outcome != Outcome::Error {
            mismatches.push("trace without witness must be exhausted or an error".into());
        }
        if trace.verdicts.verified || !trace.extracted.is_empty() || trace.colour.is_some() {
            mismatches.push("trace without witness claims results".into());
        }
        return VerifyReport {
            mismatches,
            verified: false,
            outcome: trace.verdicts.outcome,
        };
    };
    if trace.colour.as_ref() != witness.get("colour") {
        mismatches.push("colour differs from the witness colour".into());
    }
    let done = finish(cfg, &order, &prefix, witness);
    if done.extracted != trace.extracted {
        mismatches.push(format!("extracted: trace {:?}, recomputed {:?}", trace.extracted, done.extracted));
    }
    if done.verdicts != trace.verdicts {
        mismatches.push(format!(
            "verdicts: trace {}, recomputed {}",
            to_value(&trace.verdicts),
            to_value(&done.verdicts)
        ));
    }
    VerifyReport {
        verified: mismatches.is_empty() && done.verdicts.verified,
        outcome: done.verdicts.outcome,
        mismatches,
    }
}

/// Colour of one tuple (or set) under the pipeline's colouring.
pub fn color_of(cfg: &PipelineConfig, indices: &[usize]) -> Result<Value> {
    cfg.validate()?;
    let order = builtin_order(&cfg.order)?;
    let instance = gen_instance(cfg.pipeline, &order, &cfg.kind, cfg.h, cfg.depth)?;
    match (cfg.pipeline, instance) {
        (Pipeline::Rt3, Instance::Omega { level, seq }) => {
            let inst = ColoringInstance::new(OmegaSpace::new(order, level), seq);
            let [i, j, k] = indices else {
                return Err(Error::ArityError(format!("rt3 colours triples, got {} indices", indices.len())));
            };
            Ok(to_value(&color_triple(&inst, *i, *j, *k)?))
        }
        (Pipeline::Rtn, Instance::Omega { level, seq }) => {
            let inst = ColoringInstance::new(OmegaSpace::new(order, level), seq);
            if indices.len() != cfg.h + 2 {
                return Err(Error::ArityError(format!("C_{} colours {}-tuples", cfg.h, cfg.h + 2)));
            }
            Ok(to_value(&color_tuple(&inst, indices)?))
        }
        (Pipeline::Large, Instance::Epsilon { seq }) => {
            let inst = ColoringInstance::new(EpsilonSpace::new(order), seq);
            if indices.len() == 3 && !crate::coloring::is_exactly_large(indices) {
                return Ok(to_value(&color_triple(&inst, indices[0], indices[1], indices[2])?));
            }
            Ok(json!(color_large(&inst, indices)?))
        }
        (Pipeline::Hindman, Instance::Omega { seq, .. }) => {
            let fl = crate::hindman::flatten(order, &seq, cfg.flatten_bound())?;
            Ok(json!(crate::hindman::g_color(&fl, indices, cfg.k)))
        }
        _ => unreachable!("generator matches pipeline"),
    }
}

/// The first `count` instance terms as JSON.
pub fn gen_prefix(cfg: &PipelineConfig, count: usize) -> Result<Vec<Value>> {
    let order = builtin_order(&cfg.order)?;
    Ok(match gen_instance(cfg.pipeline, &order, &cfg.kind, cfg.h, cfg.depth)? {
        Instance::Omega { seq, .. } => seq.prefix(count)?.iter().map(OmegaTerm::to_json).collect(),
        Instance::Epsilon { seq } => seq.prefix(count)?.iter().map(EpsilonTerm::to_json).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rt3_default_run() {
        let trace = run_pipeline(&PipelineConfig::new(Pipeline::Rt3));
        assert!(trace.verdicts.verified, "{:?}", trace.verdicts);
        assert!(trace.extracted.len() >= 8);
        assert_eq!(verify_trace(&trace).exit_code(), 0);
    }

    #[test]
    fn hindman_budget_zero() {
        let cfg = PipelineConfig {
            budget: 0,
            ..PipelineConfig::new(Pipeline::Hindman)
        };
        let trace = run_pipeline(&cfg);
        assert_eq!(trace.verdicts.outcome, Outcome::Exhausted);
        assert!(!trace.verdicts.verified);
        assert_eq!(trace.exit_code(), 2);
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let mut trace = run_pipeline(&PipelineConfig::new(Pipeline::Rt3));
        trace.extracted[0] = Element::Int(99);
        assert_eq!(verify_trace(&trace).exit_code(), 1);
    }

    #[test]
    fn trace_keys() {
        let trace = run_pipeline(&PipelineConfig::new(Pipeline::Rt3));
        let v: Value = serde_json::from_str(&trace.to_json_string()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = vec![
            "pipeline",
            "config",
            "instance_prefix",
            "witness",
            "colour",
            "extracted",
            "verdicts",
            "stats",
        ];
        expected.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, expected);
    }
}
