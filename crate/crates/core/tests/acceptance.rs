//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! runtime; run with `--nocapture` to see them.

mod common;

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::oracle::spof_by_deletion;
use common::{random_architecture, GenLimits};
use eea_core::analysis::{classify, compute_metrics, spof_analysis, Style};
use eea_core::cli;
use eea_core::config::Settings;
use eea_core::dsl::{parse, parse_bytes, serialize};
use eea_core::engine::{
    centralize_all, centralize_function, potential, FeasibilityConfig, RewriteKind, TerminalReason,
};
use eea_core::model::{Architecture, EcuRole, LinkKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const FLEET_BUDGET: Duration = Duration::from_secs(1);
const TERMINATION_BUDGET: Duration = Duration::from_secs(60);
const TERMINATION_CASES: u64 = 500;
const ROUND_TRIP_CASES: u64 = 1_000;
const FUZZ_CASES: usize = 100_000;
const SPOF_MAX_ECUS: usize = 10;
const SPOF_CASES: u64 = 300;
/// Stage-over-stage comparisons of wire length tolerate float summation noise.
const WIRE_EPS_M: f64 = 1e-9;

type Check = Result<(), String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Check>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn golden() -> Architecture {
    parse(&std::fs::read_to_string(data("derating.eea")).unwrap()).unwrap()
}

fn analog_targets(a: &Architecture) -> Vec<(String, String)> {
    a.links
        .values()
        .filter(|l| l.kind == LinkKind::AnalogLine)
        .map(|l| (l.endpoint_a.clone(), l.endpoint_b.clone()))
        .collect()
}

fn pairs(targets: &[(&str, &str)]) -> Vec<(String, String)> {
    targets.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn golden_trace(budget: Duration) -> Check {
    let dir = tempfile::tempdir().unwrap();
    let input = data("derating.eea");
    let started = Instant::now();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(
        [
            "eea",
            "centralize",
            input.to_str().unwrap(),
            "--function",
            "TempDerating",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &mut out,
        &mut err,
    );
    let elapsed = started.elapsed();
    ensure(code == cli::EXIT_OK, || format!("exit {code}: {}", String::from_utf8_lossy(&err)))?;
    ensure(elapsed < budget, || format!("took {elapsed:?}"))?;

    let stage_dir = dir.path().join("derating");
    let stages: Vec<Architecture> = (0..)
        .map(|n| stage_dir.join(format!("stage_{n}.eea")))
        .take_while(|p| p.exists())
        .map(|p| parse(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    ensure(stages.len() == 4, || format!("{} stages", stages.len()))?;

    let s1 = &stages[1];
    ensure(s1.swcs["DeratingCalc"].host == "EVCC", || "stage 1: DeratingCalc not on EVCC".into())?;
    ensure(s1.circuits["TempEvalCircuit"].host == "EVCC", || "stage 1: circuit not on EVCC".into())?;
    ensure(analog_targets(s1) == pairs(&[("TempSensorAC", "EVCC"), ("TempSensorDC", "EVCC")]), || {
        format!("stage 1 analog lines {:?}", analog_targets(s1))
    })?;
    ensure(!s1.ecus.contains_key("Inlet"), || "stage 1 still has Inlet".into())?;

    let s2 = &stages[2];
    ensure(s2.ecus.get("EVCC").map(|e| e.role) == Some(EcuRole::ZoneGateway), || "stage 2: EVCC not a gateway".into())?;
    ensure(classify(s2).style == Style::ZoneOriented, || format!("stage 2 is {}", classify(s2).style))?;
    ensure(s2.swcs["DeratingCalc"].host == "PowertrainDC", || "stage 2: DeratingCalc not on controller".into())?;

    let s3 = &stages[3];
    ensure(s3.ecus.keys().eq(["PowertrainDC"]), || format!("stage 3 ECUs {:?}", s3.ecus.keys()))?;
    ensure(s3.circuits["TempEvalCircuit"].host == "PowertrainDC", || "stage 3: circuit not on controller".into())?;
    ensure(analog_targets(s3) == pairs(&[("TempSensorAC", "PowertrainDC"), ("TempSensorDC", "PowertrainDC")]), || {
        format!("stage 3 analog lines {:?}", analog_targets(s3))
    })
}

fn fleet_counts(budget: Duration) -> Check {
    let files: Vec<String> =
        ["id4.eea", "model_y.eea", "mach_e.eea"].iter().map(|f| data(f).to_str().unwrap().to_string()).collect();
    let started = Instant::now();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut args = vec!["eea", "fleet-summary", "--format", "csv"];
    args.extend(files.iter().map(String::as_str));
    let code = cli::run(args, &mut out, &mut err);
    let elapsed = started.elapsed();
    ensure(code == cli::EXIT_OK, || format!("exit {code}: {}", String::from_utf8_lossy(&err)))?;
    ensure(elapsed < budget, || format!("took {elapsed:?}"))?;

    // label, ECUs, CAN, CAN-FD, Ethernet, LVDS, LIN masters, LIN slaves
    let expected: [(&str, [usize; 7]); 3] = [
        ("id4", [52, 7, 6, 12, 3, 9, 43]),
        ("model_y", [26, 10, 0, 2, 10, 5, 24]),
        ("mach_e", [51, 8, 1, 4, 3, 13, 44]),
    ];
    let text = String::from_utf8(out).unwrap();
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    ensure(rows.len() == 3, || format!("{} rows", rows.len()))?;
    for (row, (label, want)) in rows.iter().zip(expected) {
        let n = |i: usize| row[i].parse::<usize>().unwrap();
        // columns: label,ecus,can,can_fd,ethernet,lvds,other,lin_masters,lin_slaves
        let got = [n(1), n(2), n(3), n(4), n(5), n(7), n(8)];
        ensure(&row[0] == label && got == want, || format!("{label}: got {got:?}, want {want:?}"))?;
    }
    Ok(())
}

fn tradeoff_directions() -> Check {
    let trace = centralize_function(&golden(), "TempDerating", &FeasibilityConfig::default()).unwrap();
    for (n, pair) in trace.stages.windows(2).enumerate() {
        let (p, q) = (compute_metrics(&pair[0].architecture), compute_metrics(&pair[1].architecture));
        let stage = n + 1;
        ensure(q.ecu_count <= p.ecu_count, || format!("stage {stage}: ecu_count rose"))?;
        ensure(q.circuit_host_count <= p.circuit_host_count, || format!("stage {stage}: circuit hosts rose"))?;
        ensure(q.channel_count <= p.channel_count, || format!("stage {stage}: channel_count rose"))?;
        if pair[1].steps.iter().any(|s| s.kind == RewriteKind::CentralizeIo) {
            ensure(q.wire_length_m + WIRE_EPS_M >= p.wire_length_m, || {
                format!("stage {stage}: wire length {} -> {}", p.wire_length_m, q.wire_length_m)
            })?;
            ensure(q.cut_leads >= p.cut_leads, || format!("stage {stage}: cut_leads fell"))?;
        }
    }
    let spofs: Vec<String> = spof_analysis(trace.final_architecture()).into_iter().map(|e| e.ecu).collect();
    ensure(spofs.iter().any(|e| e == "PowertrainDC"), || format!("final SPOFs {spofs:?}"))
}

fn termination_and_determinism(budget: Duration) -> Check {
    let cfg = FeasibilityConfig::default();
    let started = Instant::now();
    let mut total_stages = 0;
    for seed in 0..TERMINATION_CASES {
        let arch = random_architecture(seed, GenLimits { max_ecus: 15, max_functions: 8 });
        let first = centralize_all(&arch, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        let second = centralize_all(&arch, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        for pair in first.stages.windows(2) {
            let (a, b) = (potential(&pair[0].architecture), potential(&pair[1].architecture));
            ensure(b < a, || format!("seed {seed}: potential {a} -> {b}"))?;
        }
        ensure(first.serialize() == second.serialize(), || format!("seed {seed}: traces differ"))?;
        total_stages += first.stages.len();
    }
    let elapsed = started.elapsed();
    ensure(total_stages > TERMINATION_CASES as usize, || "no architecture was rewritten".into())?;
    ensure(elapsed < budget, || format!("took {elapsed:?}"))
}

fn spof_equivalence() -> Check {
    let mut fixtures: Vec<Architecture> = centralize_function(&golden(), "TempDerating", &FeasibilityConfig::default())
        .unwrap()
        .stages
        .into_iter()
        .map(|s| s.architecture)
        .collect();
    let limits = GenLimits { max_ecus: SPOF_MAX_ECUS, max_functions: 8 };
    fixtures.extend((0..SPOF_CASES).map(|s| random_architecture(s, limits)));
    for a in &fixtures {
        ensure(a.ecus.len() <= SPOF_MAX_ECUS, || format!("{} is too large", a.name))?;
        let got: BTreeMap<String, Vec<String>> = spof_analysis(a).into_iter().map(|e| (e.ecu, e.functions)).collect();
        let want = spof_by_deletion(a);
        ensure(got == want, || format!("{}: {got:?} != {want:?}", a.name))?;
    }
    Ok(())
}

/// Random bytes, token soup, and byte-level mutations of the golden file.
fn fuzz_input(rng: &mut ChaCha8Rng, seed_text: &[u8]) -> Vec<u8> {
    const TOKENS: [&str; 22] = [
        "ecu",
        "bus",
        "swc",
        "link",
        "function",
        "architecture",
        "{",
        "}",
        ":",
        ";",
        "[",
        "]",
        "(",
        ")",
        ",",
        "A",
        "role",
        "\"s\\",
        "1.5e3",
        "-",
        "#c\n",
        "\r\n",
    ];
    match rng.gen_range(0..3) {
        0 => (0..rng.gen_range(0..64)).map(|_| rng.gen()).collect(),
        1 => (0..rng.gen_range(0..40))
            .flat_map(|_| TOKENS[rng.gen_range(0..TOKENS.len())].bytes().chain(*b" "))
            .collect(),
        _ => {
            let mut b = seed_text.to_vec();
            for _ in 0..rng.gen_range(1..8) {
                let i = rng.gen_range(0..b.len());
                match rng.gen_range(0..3) {
                    0 => b[i] = rng.gen(),
                    1 => {
                        b.remove(i);
                    }
                    _ => b.insert(i, rng.gen()),
                }
            }
            b
        }
    }
}

fn parser_robustness() -> Check {
    for seed in 0..ROUND_TRIP_CASES {
        let a = random_architecture(seed, GenLimits::default());
        let back = parse(&serialize(&a)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == a, || format!("seed {seed}: round trip differs"))?;
    }
    let golden_text = std::fs::read(data("derating.eea")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xEEA);
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut result = Ok(());
    for i in 0..FUZZ_CASES {
        let input = fuzz_input(&mut rng, &golden_text);
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| parse_bytes(&input, "fuzz.eea")));
        match outcome {
            Err(_) => {
                result = Err(format!("input {i} panicked: {:?}", String::from_utf8_lossy(&input)));
                break;
            }
            Ok(Err(e)) if e.message.is_empty() || e.span.line == 0 || e.span.column == 0 => {
                result = Err(format!("input {i}: unstructured error {e:?}"));
                break;
            }
            Ok(_) => {}
        }
    }
    panic::set_hook(hook);
    result
}

fn constraint_gating() -> Check {
    let settings = Settings::load(None, &["limits.max_analog_length.B=0.1".to_string()]).unwrap();
    let trace = centralize_function(&golden(), "TempDerating", &settings.limits).unwrap();
    ensure(trace.terminal_reason == TerminalReason::ConstraintBlocked, || {
        format!("terminal reason {}", trace.terminal_reason)
    })?;
    let last = trace.final_architecture();
    ensure(last.ecus.values().any(|e| e.role == EcuRole::ZoneGateway), || "no zone gateway retained".into())
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("golden trace: 4 stages with the expected structure, < 1 s", Box::new(|| golden_trace(GOLDEN_BUDGET))),
        ("fleet summary counts exact, < 1 s", Box::new(|| fleet_counts(FLEET_BUDGET))),
        ("trade-off directions on the golden trace", Box::new(tradeoff_directions)),
        (
            "termination and determinism on 500 generated architectures, < 60 s",
            Box::new(|| termination_and_determinism(TERMINATION_BUDGET)),
        ),
        ("SPOF analysis equals single-ECU deletion oracle", Box::new(spof_equivalence)),
        ("parser round trip (1000) and byte fuzzing (100000)", Box::new(parser_robustness)),
        ("analog limit B = 0.1 m blocks with a zone gateway kept", Box::new(constraint_gating)),
    ];
    let mut failed = Vec::new();
    for (n, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = check();
        let ms = started.elapsed().as_millis();
        match &result {
            Ok(()) => println!("PASS  {}  {name}  ({ms} ms)", n + 1),
            Err(why) => {
                println!("FAIL  {}  {name}  ({ms} ms): {why}", n + 1);
                failed.push(n + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
