//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::cmp::Ordering;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ordinal_ramsey::coloring::{color_large, color_triple, vw_vectors, BaseColor, ColoringInstance, EpsilonInstance};
use ordinal_ramsey::epsilon::{epsilon_compare, EpsilonSpace, EpsilonTerm};
use ordinal_ramsey::extract::{exactly_large_subsets, extract_large, subterm_check};
use ordinal_ramsey::harness::{gen_instance, run_pipeline, verify_trace, Instance, Outcome, Pipeline, PipelineConfig, Trace};
use ordinal_ramsey::hindman::{
    build_f, check_property_p, extract_hindman, find_monochromatic_blocks, lemma_decreasible_check, BlockSearch,
    FlattenedInstance,
};
use ordinal_ramsey::omega::{compare_lex, delta, OmegaSpace, OmegaTerm};
use ordinal_ramsey::oracle::cnf_ordinal_oracle;
use ordinal_ramsey::orders::{builtin_order, Element, Order, Verdict};

type Check = Result<String, String>;

// name, check, counted towards the verdict
type Criterion = (&'static str, fn() -> Check, bool);

const DESCENDING_ORDERS: [&str; 3] = ["omega-star", "zeta", "eta"];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn order(name: &str) -> Order {
    builtin_order(name).unwrap()
}

fn descending(o: &Order, xs: &[Element]) -> bool {
    xs.windows(2).all(|w| o.compare(&w[0], &w[1]) == Ok(Ordering::Greater))
}

fn omega_prefix(p: Pipeline, o: &Order, kind: &str, h: usize, count: usize) -> (u32, Vec<OmegaTerm>) {
    match gen_instance(p, o, kind, h, 0).unwrap() {
        Instance::Omega { level, seq } => (level, seq.prefix(count).unwrap()),
        Instance::Epsilon { .. } => unreachable!(),
    }
}

fn epsilon_instance(o: &Order, kind: &str, depth: usize, count: usize) -> EpsilonInstance {
    let Instance::Epsilon { seq } = gen_instance(Pipeline::Large, o, kind, 2, depth).unwrap() else {
        unreachable!()
    };
    ColoringInstance::from_terms(EpsilonSpace::new(o.clone()), seq.prefix(count).unwrap())
}

// Normal-form level-1 terms over ω with entries < 4 and length ≤ 3.
fn small_omega_terms() -> (usize, Vec<OmegaTerm>) {
    let o = order("omega");
    let mut raw = 1;
    let mut out = vec![OmegaTerm::level1(&*o, &[]).unwrap()];
    for len in 1..=3 {
        for xs in itertools::repeat_n(0..4i64, len).multi_cartesian_product() {
            raw += 1;
            let es: Vec<Element> = xs.into_iter().map(Element::Int).collect();
            if let Ok(t) = OmegaTerm::level1(&*o, &es) {
                out.push(t);
            }
        }
    }
    (raw, out)
}

// Normal-form ε-terms of ω-nesting depth ≤ 2, ε-indices < 3, at most two summands.
fn small_epsilon_terms(o: &Order) -> Vec<EpsilonTerm> {
    let sums = |monos: &[EpsilonTerm]| {
        let mut out = vec![EpsilonTerm::zero()];
        out.extend(monos.iter().cloned());
        for a in monos {
            for b in monos {
                if epsilon_compare(&**o, a, b).unwrap() != Ordering::Less {
                    out.push(a.clone().plus(b.clone()));
                }
            }
        }
        out
    };
    let eps: Vec<EpsilonTerm> = (0..3).map(|x| EpsilonTerm::eps(Element::Int(x))).collect();
    let mut terms = sums(&eps);
    for _ in 0..2 {
        let mut monos = eps.clone();
        for t in &terms {
            let m = EpsilonTerm::omega_pow(t.clone());
            if !monos.contains(&m) {
                monos.push(m);
            }
        }
        terms = sums(&monos);
    }
    terms
}

// Sorting and then checking every ordered pair against sorted position covers
// totality, antisymmetry and transitivity at once.
fn check_total_order<T: Clone + PartialEq>(terms: &[T], cmp: impl Fn(&T, &T) -> Ordering) -> Result<(), String> {
    let mut sorted = terms.to_vec();
    sorted.sort_by(&cmp);
    for (i, a) in sorted.iter().enumerate() {
        ensure(cmp(a, a) == Ordering::Equal, || format!("irreflexive at position {i}"))?;
        for (j, b) in sorted.iter().enumerate().skip(i + 1) {
            ensure(a != b, || format!("duplicate term at {i}, {j}"))?;
            ensure(cmp(a, b) == Ordering::Less && cmp(b, a) == Ordering::Greater, || {
                format!("sorted positions {i} < {j} not strictly ordered")
            })?;
        }
    }
    Ok(())
}

fn criterion_1() -> Check {
    let o = order("omega");
    let (raw, terms) = small_omega_terms();
    let mut pairs = 0;
    for s in &terms {
        let cs = cnf_ordinal_oracle(&*o, s).map_err(|e| e.to_string())?;
        for t in &terms {
            let ct = cnf_ordinal_oracle(&*o, t).map_err(|e| e.to_string())?;
            let lex = compare_lex(&*o, s, t).map_err(|e| e.to_string())?;
            ensure(lex == cs.cmp(&ct), || format!("{s} vs {t}: lex {lex:?}, oracle {:?}", cs.cmp(&ct)))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs over {} normal-form terms ({raw} sequences enumerated), 0 mismatches", terms.len()))
}

fn criterion_2() -> Check {
    let o = order("omega");
    let (_, terms) = small_omega_terms();
    let lex = |a: &OmegaTerm, b: &OmegaTerm| compare_lex(&*o, a, b).unwrap();
    check_total_order(&terms, lex)?;
    for (a, b, c) in itertools::iproduct!(&terms, &terms, &terms) {
        if lex(a, b) != Ordering::Greater && lex(b, c) != Ordering::Greater {
            ensure(lex(a, c) != Ordering::Greater, || format!("transitivity fails on {a}, {b}, {c}"))?;
        }
    }
    let mut eps_counts = Vec::new();
    for name in ["omega", "omega-star"] {
        let eo = order(name);
        let eterms = small_epsilon_terms(&eo);
        check_total_order(&eterms, |a, b| epsilon_compare(&*eo, a, b).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        eps_counts.push(format!("{} ε-terms over {name}", eterms.len()));
    }
    Ok(format!("{} ω-terms (all triples), {}", terms.len(), eps_counts.join(", ")))
}

fn pipeline_ok(trace: &Trace) -> Result<(), String> {
    let v = &trace.verdicts;
    ensure(v.outcome == Outcome::Verified && v.verified, || {
        format!("outcome {:?}, error {:?}", v.outcome, v.error)
    })?;
    ensure(v.descent == Some(Verdict::Ok), || format!("descent {:?}", v.descent))?;
    ensure(v.subterm == Some(true), || "subterm check failed".into())
}

fn criterion_3() -> Check {
    let mut notes = Vec::new();
    for kind in ["constant-delta", "staircase"] {
        let cfg = PipelineConfig {
            kind: kind.into(),
            window: 100,
            size: 10,
            count: 8,
            ..PipelineConfig::new(Pipeline::Rt3)
        };
        let trace = run_pipeline(&cfg);
        pipeline_ok(&trace).map_err(|e| format!("{kind}: {e}"))?;
        ensure(trace.colour == Some(serde_json::json!("C1g")), || format!("{kind}: colour {:?}", trace.colour))?;
        ensure(trace.extracted.len() >= 8, || format!("{kind}: {} extracted", trace.extracted.len()))?;
        notes.push(format!("{kind}: {} extracted", trace.extracted.len()));
    }
    Ok(notes.join(", "))
}

fn criterion_4() -> Check {
    const N: usize = 15;
    let mut checked = 0u64;
    for (name, kind) in itertools::iproduct!(DESCENDING_ORDERS, ["constant-delta", "staircase"]) {
        let o = order(name);
        let (level, terms) = omega_prefix(Pipeline::Rt3, &o, kind, 2, N);
        let inst = ColoringInstance::from_terms(OmegaSpace::new(o.clone(), level), terms.clone());
        let mut table = std::collections::HashMap::new();
        for t in (0..N).combinations(3) {
            table.insert(t.clone(), color_triple(&inst, t[0], t[1], t[2]).map_err(|e| e.to_string())?);
        }
        for mask in 0u32..1 << N {
            let h: Vec<usize> = (0..N).filter(|&i| mask >> i & 1 == 1).collect();
            if h.len() < 3 {
                continue;
            }
            let mut colours = h.iter().copied().combinations(3).map(|t| table[&t]);
            let first = colours.next().unwrap();
            if !colours.all(|c| c == first) {
                continue;
            }
            let d = delta(&terms[h[0]], &terms[h[1]]).map_err(|e| e.to_string())?.numeric();
            if h.len() >= d + 3 {
                checked += 1;
                ensure(first == BaseColor::C1g, || format!("{name} {kind}: H = {h:?} has colour {first}"))?;
            }
        }
    }
    Ok(format!("{checked} homogeneous sets with |H| ≥ Δ+3 over windows of 15, all C1g"))
}

fn criterion_5() -> Check {
    let cfg = PipelineConfig {
        h: 2,
        window: 60,
        size: 8,
        count: 5,
        ..PipelineConfig::new(Pipeline::Rtn)
    };
    let trace = run_pipeline(&cfg);
    pipeline_ok(&trace)?;
    ensure(trace.colour == Some(serde_json::json!({"base": "C1g"})), || format!("colour {:?}", trace.colour))?;
    ensure(trace.extracted.len() >= 5, || format!("{} extracted", trace.extracted.len()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let o = order("omega-star");
    let mut sampled = 0;
    for kind in ["constant-delta", "staircase"] {
        let (level, terms) = omega_prefix(Pipeline::Rtn, &o, kind, cfg.h, cfg.window);
        let inst = ColoringInstance::from_terms(OmegaSpace::new(o.clone(), level), terms);
        for _ in 0..500 {
            let mut idx = sample(&mut rng, cfg.window, cfg.h + 3).into_vec();
            idx.sort_unstable();
            let (_, w) = vw_vectors(&inst, 0, &idx[..cfg.h + 2]).map_err(|e| e.to_string())?;
            let (v, _) = vw_vectors(&inst, 0, &idx[1..]).map_err(|e| e.to_string())?;
            ensure(w == v, || format!("{kind}: shift law fails on {idx:?}"))?;
            sampled += 1;
        }
    }
    Ok(format!("{} extracted, shift law on {sampled} sampled tuples", trace.extracted.len()))
}

fn criterion_6a() -> Check {
    let o = order("omega-star");
    let inst = epsilon_instance(&o, "pure-epsilon", 0, 30);
    let mut triples = 0;
    for t in (0..30).combinations(3) {
        let c = color_triple(&inst, t[0], t[1], t[2]).map_err(|e| e.to_string())?;
        ensure(c == BaseColor::C2, || format!("{t:?} has colour {c}"))?;
        triples += 1;
    }
    let trace = run_pipeline(&PipelineConfig::new(Pipeline::Large));
    pipeline_ok(&trace)?;
    ensure(trace.extracted.len() >= 5 && descending(&o, &trace.extracted), || {
        format!("extracted {:?}", trace.extracted)
    })?;
    Ok(format!("{triples} triples all C2, {} extracted", trace.extracted.len()))
}

fn large_check(inst: &EpsilonInstance, o: &Order) -> Check {
    let h: Vec<usize> = (1..=25).collect();
    let (mut zero, mut one, mut first_one) = (0u64, 0u64, None);
    for s in exactly_large_subsets(&h) {
        match color_large(inst, &s).map_err(|e| e.to_string())? {
            0 => zero += 1,
            _ => {
                one += 1;
                first_one.get_or_insert(s);
            }
        }
    }
    let extracted = extract_large(inst, &h, 3);
    let summary = format!("{zero} exactly large sets coloured 0, {one} coloured 1");
    if let Some(s) = first_one {
        return Err(format!("{summary} (first: {s:?}); extract_large: {extracted:?}"));
    }
    let out = extracted.map_err(|e| format!("{summary}; extract_large: {e}"))?;
    ensure(out.len() >= 3 && descending(o, &out), || format!("{summary}; extracted {out:?}"))?;
    Ok(format!("{summary}; extracted {out:?}"))
}

fn criterion_6b() -> Check {
    let o = order("omega-star");
    large_check(&epsilon_instance(&o, "omega-power", 0, 26), &o)
}

// Not a criterion of its own: the same check on the nested instance, for which
// the depth-1 comparing exponents stay C4.
fn criterion_6b_ladder() -> Check {
    let o = order("omega-star");
    let depth = PipelineConfig::new(Pipeline::Large).depth;
    large_check(&epsilon_instance(&o, "ladder", depth, 26), &o).map(|s| format!("ladder depth {depth}: {s}"))
}

fn criterion_7() -> Check {
    let cfg = PipelineConfig::new(Pipeline::Hindman);
    let o = order("omega-star");
    let (_, terms) = omega_prefix(Pipeline::Hindman, &o, "constant-delta", 2, cfg.flatten_bound());
    let fl = FlattenedInstance::from_terms(o.clone(), terms, cfg.flatten_bound()).map_err(|e| e.to_string())?;
    let (found, _) = find_monochromatic_blocks(&fl, 3, 2, cfg.size, 60, cfg.budget, cfg.max_block).map_err(|e| e.to_string())?;
    let BlockSearch::Found { blocks, colour } = found else {
        return Err("no monochromatic block sequence in window 60".into());
    };
    ensure(blocks.blocks.len() >= 5, || format!("{} blocks", blocks.blocks.len()))?;
    let f = build_f(&fl, &blocks, 3, 2, colour).map_err(|e| e.to_string())?;
    let p = check_property_p(&fl, &f, 40);
    ensure(p == Verdict::Ok, || format!("property P up to 40: {p:?}"))?;
    let out = extract_hindman(&fl, &f, 6).map_err(|e| e.to_string())?;
    ensure(out.len() >= 6 && descending(&o, &out), || format!("extracted {out:?}"))?;
    ensure(subterm_check(&fl.terms, &out), || "subterm check failed".into())?;
    Ok(format!("{} blocks, colour {colour}, extracted {out:?}", blocks.blocks.len()))
}

fn criterion_8() -> Check {
    let mut checks = 0;
    for (name, p) in itertools::iproduct!(DESCENDING_ORDERS, [Pipeline::Rt3, Pipeline::Hindman]) {
        let o = order(name);
        for kind in p.kinds() {
            let Instance::Omega { seq, .. } = gen_instance(p, &o, kind, 2, 0).unwrap() else {
                unreachable!()
            };
            for n in 0..=20 {
                let v = lemma_decreasible_check(&o, &seq, n, 500).map_err(|e| e.to_string())?;
                ensure(v == Verdict::Ok, || format!("{name} {} {kind}, n = {n}: {v:?}", p.name()))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (instance, n) pairs Ok"))
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ordinal-ramsey")).args(args).output().expect("binary runs")
}

fn criterion_9() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for p in ["rt3", "rtn", "large", "hindman"] {
        let mut bytes = Vec::new();
        for run in ["a", "b"] {
            let path = dir.path().join(format!("{p}-{run}.json"));
            let path = path.to_str().unwrap();
            let out = cli(&["run", "--pipeline", p, "--out", path]);
            ensure(out.status.code() == Some(0), || format!("{p} run exited {:?}", out.status.code()))?;
            bytes.push(std::fs::read(path).map_err(|e| e.to_string())?);
            let v = cli(&["verify", path]);
            ensure(v.status.code() == Some(0), || {
                format!("{p} verify exited {:?}: {}", v.status.code(), String::from_utf8_lossy(&v.stderr))
            })?;
        }
        ensure(bytes[0] == bytes[1], || format!("{p}: traces differ"))?;
        let g = [cli(&["gen", "--pipeline", p]), cli(&["gen", "--pipeline", p])];
        ensure(g[0].status.success() && g[0].stdout == g[1].stdout, || format!("{p}: gen differs"))?;
        notes.push(format!("{p} {}B", bytes[0].len()));
    }
    Ok(notes.join(", "))
}

fn criterion_10() -> Check {
    let cases = [
        ("ColourMismatch", Pipeline::Rt3, "staircase", "omega-star", 3),
        ("StarEncountered", Pipeline::Large, "omega-power", "omega-star", 10),
        ("WitnessTooShallow", Pipeline::Large, "ladder", "omega-star", 10),
        ("BlocksExhausted", Pipeline::Hindman, "constant-delta", "omega-star", 4),
        ("NotDescendingWitness", Pipeline::Rt3, "constant-delta", "finite:3", 10),
    ];
    for (kind, p, instance, base, size) in cases {
        let cfg = PipelineConfig {
            kind: instance.into(),
            order: base.into(),
            size,
            ..PipelineConfig::new(p)
        };
        let trace = run_pipeline(&cfg);
        let got = trace.verdicts.error.as_ref().map(|e| e.kind.as_str());
        ensure(got == Some(kind), || format!("{} {instance}: expected {kind}, got {got:?}", p.name()))?;
        ensure(trace.exit_code() == 1 && !trace.verdicts.verified, || format!("{kind}: trace claims success"))?;
        let report = verify_trace(&trace);
        ensure(report.mismatches.is_empty(), || format!("{kind}: {:?}", report.mismatches))?;
    }
    Ok(cases.map(|c| c.0).join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1", criterion_1, true),
        ("2", criterion_2, true),
        ("3", criterion_3, true),
        ("4", criterion_4, true),
        ("5", criterion_5, true),
        ("6a", criterion_6a, true),
        ("6b", criterion_6b, true),
        ("6b-ladder", criterion_6b_ladder, false),
        ("7", criterion_7, true),
        ("8", criterion_8, true),
        ("9", criterion_9, true),
        ("10", criterion_10, true),
    ];
    let mut failed = Vec::new();
    for (name, run, counted) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        let tag = if counted { "criterion" } else { "supplementary" };
        match result {
            Ok(detail) => println!("{tag} {name}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                println!("{tag} {name}: FAIL ({secs:.1}s) {detail}");
                if counted {
                    failed.push(name);
                }
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
