use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use codensity::behavior::{System, SystemKind};
use codensity::codensity::{codlift_bruteforce_on, induced_distance, random_nonexpansive, witness_maps, LiftingSpec};
use codensity::compose::{
    check_gebler, check_liftability, compose_systems, random_gebler_case, CompositionOp, DistLaw, LiftabilityOptions,
};
use codensity::fibers::{pullback_map, Carrier, FiberKind, FiberObject};
use codensity::fixpoint::{bisimilarity, check_spec, nu_exact, one_step};
use codensity::games::{
    bisim_iff, check_composite_equivalence, compose_and_verify, invariant_join, is_invariant, is_winning, replay_transcript,
    CodensityGame, CompositeGame, DupPos, Session,
};
use codensity::io;
use codensity::modality::StructModality;
use codensity::{gen, oracle, selftest};

use crate::{Cli, Command, Format, GameCommand, IterArgs, LiftArgs, OracleCommand};

/// Distances from the oracle must match to this precision.
const ORACLE_TOL: f64 = 1e-9;

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Lift { system, input, lift, oracle } => lift_cmd(cli, system, input, lift, *oracle),
        Command::Bisim { system, lift, iter, oracle } => bisim_cmd(cli, system, lift, iter, *oracle),
        Command::Compose { first, second, law } => compose_cmd(cli, first, second, law),
        Command::CheckCompat { behavior, sigma, lift, alphabet, instances, tol } => {
            check_compat(cli, behavior, sigma, lift, *alphabet, *instances, *tol)
        }
        Command::CheckGebler { sigma, trials, max_states, tol } => gebler_cmd(cli, sigma, *trials, *max_states, *tol),
        Command::Game { command } => game_cmd(cli, command),
        Command::Oracle { command: OracleCommand::Compare { system, fiber, weight } } => {
            let lift = LiftArgs { fiber: Some(fiber.clone()), tau: None, weight: *weight };
            oracle_compare(cli, system, &lift)
        }
        Command::Selftest { criteria } => selftest_cmd(cli, criteria),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn located<T>(path: &Path, r: codensity::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_system(path: &Path) -> Result<System> {
    located(path, io::parse_system(&read(path)?))
}

fn load_fiber(path: &Path, carrier: &Carrier) -> Result<FiberObject> {
    located(path, io::parse_fiber_object(&read(path)?, Some(carrier)))
}

fn load_invariant(path: &Path, carrier: &Carrier) -> Result<Vec<FiberObject>> {
    located(path, io::parse_invariant(&read(path)?, Some(carrier)))
}

fn meta(cli: &Cli, tolerances: Value) -> Value {
    json!({
        "tool": "codensity",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cli.seed,
        "tolerances": tolerances,
    })
}

fn emit(cli: &Cli, doc: &Value) -> Result<()> {
    let mut out = match cli.format {
        Format::Json => io::to_pretty(doc),
        Format::Text => crate::text::render(doc),
    };
    out.push('\n');
    match &cli.output {
        Some(p) => fs::write(p, out).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(out.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_kind(fiber: Option<&str>, default: FiberKind) -> Result<FiberKind> {
    match fiber {
        None => Ok(default),
        Some(f) => FiberKind::parse(f).ok_or_else(|| anyhow!("unknown fiber {f:?}; expected eqrel, erel, pmet or lmet")),
    }
}

/// The catalogued lifting for a behavior and fiber; `--tau`, when given, must
/// name its modality family.
fn spec_for_kind(kind: SystemKind, alphabet: &[String], lift: &LiftArgs) -> Result<LiftingSpec> {
    let default = if kind == SystemKind::Mdp { FiberKind::PMet } else { FiberKind::EqRel };
    let fiber = parse_kind(lift.fiber.as_deref(), default)?;
    let (spec, tau) = match (kind, fiber) {
        (SystemKind::Kripke, FiberKind::EqRel) => (LiftingSpec::kripke(), "diamond"),
        (SystemKind::Kripke, FiberKind::ERel) => (LiftingSpec::kripke_erel(), "diamond"),
        (SystemKind::Kripke, FiberKind::PMet) => (LiftingSpec::hausdorff(), "inf"),
        (SystemKind::Da, FiberKind::EqRel) => (LiftingSpec::da_eq(alphabet), "da"),
        (SystemKind::Da, FiberKind::ERel) => (LiftingSpec::da_erel(alphabet), "da"),
        (SystemKind::Da, FiberKind::PMet) => (LiftingSpec::da_pmet(alphabet, lift.weight)?, "da"),
        (SystemKind::Da, FiberKind::LMet) => (LiftingSpec::da_lmet(alphabet, lift.weight)?, "da"),
        (SystemKind::Mdp, FiberKind::PMet) => (LiftingSpec::mdp(), "inf_expectation"),
        (k, f) => bail!("no catalogued lifting of {k} systems to {f}"),
    };
    if let Some(t) = &lift.tau {
        if t != tau {
            bail!("modality {t:?} does not lift {kind} systems to {fiber}; use {tau:?}");
        }
    }
    Ok(spec)
}

fn spec_for(system: &System, lift: &LiftArgs) -> Result<LiftingSpec> {
    let alphabet = match system {
        System::Da(d) => d.alphabet.clone(),
        _ => Vec::new(),
    };
    let spec = spec_for_kind(system.kind(), &alphabet, lift)?;
    check_spec(system, &spec)?;
    Ok(spec)
}

fn law_for(kind: SystemKind) -> DistLaw {
    match kind {
        SystemKind::Kripke => DistLaw::LamP,
        SystemKind::Da => DistLaw::LamDA,
        SystemKind::Mdp => DistLaw::LamPD,
    }
}

fn max_difference(a: &FiberObject, b: &FiberObject) -> f64 {
    let n = a.size();
    let mut worst: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            let gap = if a.kind().is_metric() {
                (a.distance(x, y) - b.distance(x, y)).abs()
            } else if a.related(x, y) == b.related(x, y) {
                0.0
            } else {
                1.0
            };
            worst = worst.max(gap);
        }
    }
    worst
}

fn mismatches(a: &FiberObject, b: &FiberObject, tol: f64) -> Vec<Value> {
    let c = a.carrier();
    let n = a.size();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let (u, v) = if a.kind().is_metric() {
                (json!(a.distance(x, y)), json!(b.distance(x, y)))
            } else {
                (json!(a.related(x, y)), json!(b.related(x, y)))
            };
            let differs = if a.kind().is_metric() {
                (a.distance(x, y) - b.distance(x, y)).abs() > tol
            } else {
                a.related(x, y) != b.related(x, y)
            };
            if differs {
                out.push(json!({"pair": [c.label(x), c.label(y)], "computed": u, "oracle": v}));
            }
        }
    }
    out
}

fn lift_cmd(cli: &Cli, system: &Path, input: &Path, lift: &LiftArgs, with_oracle: bool) -> Result<u8> {
    let s = load_system(system)?;
    let spec = spec_for(&s, lift)?;
    let p = load_fiber(input, s.carrier())?;
    if p.kind() != spec.kind {
        bail!("{}: expected a {} document, found {}", input.display(), spec.kind, p.kind());
    }
    let out = one_step(&s, &spec, &p)?;
    let mut doc = io::render_fiber(&out);
    let mut code = 0;
    if with_oracle {
        let (method, check) = lift_oracle(&s, &spec, &p, &out, cli.seed)?;
        if !check.is_empty() {
            eprintln!("oracle mismatch on {} pairs ({method})", check.len());
            code = 1;
        }
        doc["oracle"] = json!({"method": method, "agrees": check.is_empty(), "mismatches": check});
    }
    doc["meta"] = meta(cli, json!({"oracle": ORACLE_TOL}));
    emit(cli, &doc)?;
    Ok(code)
}

/// Recomputes one lifting step by an independent route: enumeration of
/// decent maps for finite truth objects, the optimal witness maps for
/// automaton metrics, and sampled nonexpansive maps as lower bounds elsewhere.
fn lift_oracle(
    s: &System,
    spec: &LiftingSpec,
    p: &FiberObject,
    out: &FiberObject,
    seed: u64,
) -> Result<(&'static str, Vec<Value>)> {
    let steps = s.steps();
    let n = s.size();
    if spec.truth.is_finite() {
        let brute = codlift_bruteforce_on(spec, p, &steps)?;
        let id: Vec<usize> = (0..n).collect();
        let brute = pullback_map(&id, s.carrier(), &brute);
        return Ok(("enumeration of decent maps", mismatches(out, &brute, 0.0)));
    }
    let d = p.as_metric().expect("metric fiber");
    let mut maps = witness_maps(d);
    let exact = matches!(s, System::Da(_));
    if !exact {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        maps.extend((0..200).map(|_| random_nonexpansive(d, &mut rng)));
    }
    let c = s.carrier();
    let mut bad = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let mut best: f64 = 0.0;
            for k in &maps {
                best = best.max(induced_distance(spec, k, &steps[x], &steps[y])?);
            }
            let v = out.distance(x, y);
            let wrong = if exact { (best - v).abs() > ORACLE_TOL } else { best > v + ORACLE_TOL };
            if wrong {
                bad.push(json!({"pair": [c.label(x), c.label(y)], "computed": v, "oracle": best}));
            }
        }
    }
    Ok((if exact { "witness maps" } else { "lower bounds from nonexpansive maps" }, bad))
}

/// Bisimilarity by a classical algorithm sharing no code with the lifting.
fn oracle_for(s: &System, spec: &LiftingSpec) -> Option<FiberObject> {
    match (s, spec.kind) {
        (System::Kripke(k), FiberKind::EqRel) => Some(oracle::partition_refinement(k).into()),
        (System::Kripke(k), FiberKind::ERel) => Some(oracle::partition_refinement(k).to_erel().into()),
        (System::Da(d), FiberKind::EqRel) => Some(oracle::language_equiv(d).into()),
        (System::Da(d), FiberKind::ERel) => Some(oracle::language_equiv(d).to_erel().into()),
        (System::Da(d), FiberKind::PMet) => {
            Some(oracle::distance_from_lengths(d, &oracle::min_distinguishing_length(d), spec.weight(), true))
        }
        (System::Da(d), FiberKind::LMet) => {
            Some(oracle::distance_from_lengths(d, &oracle::one_sided_distinguishing_length(d), spec.weight(), false))
        }
        _ => None,
    }
}

fn bisim_cmd(cli: &Cli, system: &Path, lift: &LiftArgs, iter: &IterArgs, with_oracle: bool) -> Result<u8> {
    let s = load_system(system)?;
    let spec = spec_for(&s, lift)?;
    let expected = if with_oracle {
        Some(oracle_for(&s, &spec).ok_or_else(|| anyhow!("no independent oracle for {} systems with {}", s.kind(), spec.kind))?)
    } else {
        None
    };
    let (nu, report) = bisimilarity(&s, &spec, iter.tol, iter.max_iter)?;
    let mut doc = io::render_fiber(&nu);
    doc["report"] = io::render_iter(&report);
    let mut code = if report.converged { 0 } else { 2 };
    if let Some(o) = expected {
        let bad = mismatches(&nu, &o, ORACLE_TOL);
        if !bad.is_empty() {
            eprintln!("oracle mismatch on {} pairs", bad.len());
            code = 1;
        }
        doc["oracle"] = json!({"agrees": bad.is_empty(), "mismatches": bad});
    }
    doc["meta"] = meta(cli, json!({"tol": iter.tol, "max_iter": iter.max_iter, "oracle": ORACLE_TOL}));
    emit(cli, &doc)?;
    Ok(code)
}

fn oracle_compare(cli: &Cli, system: &Path, lift: &LiftArgs) -> Result<u8> {
    let s = load_system(system)?;
    let spec = spec_for(&s, lift)?;
    let o = oracle_for(&s, &spec).ok_or_else(|| anyhow!("no independent oracle for {} systems with {}", s.kind(), spec.kind))?;
    let nu = nu_exact(&s, &spec)?;
    let bad = mismatches(&nu, &o, ORACLE_TOL);
    let doc = json!({
        "fiber": spec.kind.name(),
        "equal": bad.is_empty(),
        "max_difference": max_difference(&nu, &o),
        "mismatches": bad,
        "fixpoint": io::render_fiber(&nu),
        "oracle": io::render_fiber(&o),
        "meta": meta(cli, json!({"oracle": ORACLE_TOL})),
    });
    emit(cli, &doc)?;
    Ok(if bad.is_empty() { 0 } else { 1 })
}

fn compose_cmd(cli: &Cli, first: &Path, second: &Path, law: &str) -> Result<u8> {
    if law != "product" {
        bail!("unknown law {law:?}; only \"product\" is catalogued");
    }
    let a = load_system(first)?;
    let b = load_system(second)?;
    if a.kind() != b.kind() {
        bail!("cannot compose a {} system with a {} system", a.kind(), b.kind());
    }
    let composed = compose_systems(&[a.clone(), b], CompositionOp::for_system(&a))?;
    let mut doc = io::render_system(&composed);
    doc["meta"] = meta(cli, json!({}));
    emit(cli, &doc)?;
    Ok(0)
}

fn check_compat(
    cli: &Cli,
    behavior: &str,
    sigma: &str,
    lift: &LiftArgs,
    alphabet: usize,
    instances: usize,
    tol: f64,
) -> Result<u8> {
    let kind = match behavior {
        "kripke" => SystemKind::Kripke,
        "da" | "dfa" => SystemKind::Da,
        "mdp" => SystemKind::Mdp,
        _ => bail!("unknown behavior {behavior:?}; expected kripke, da or mdp"),
    };
    let spec = spec_for_kind(kind, &gen::alphabet(alphabet), lift)?;
    let sigma = StructModality::by_name(sigma, spec.truth.is_finite())?;
    let options = LiftabilityOptions { instances, seed: cli.seed, tol, ..Default::default() };
    let report = check_liftability(&spec, CompositionOp::binary(law_for(kind)), &sigma, &options)?;
    let doc = json!({
        "behavior": kind.to_string(),
        "fiber": spec.kind.name(),
        "sigma": sigma.name(),
        "instances": instances,
        "report": io::render_liftability(&report),
        "meta": meta(cli, json!({"tol": tol, "samples": options.samples})),
    });
    emit(cli, &doc)?;
    Ok(report.overall.exit_code() as u8)
}

fn gebler_cmd(cli: &Cli, sigma: &str, trials: usize, max_states: usize, tol: f64) -> Result<u8> {
    if max_states == 0 {
        bail!("--max-states must be positive");
    }
    let sigma = StructModality::by_name(sigma, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut worst = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for i in 0..trials {
        let (d1, d2, [m1, m1p, m2, m2p]) = random_gebler_case(&mut rng, max_states);
        let r = check_gebler(&sigma, &d1, &d2, &m1, &m1p, &m2, &m2p, tol)?;
        worst = worst.max(r.lhs - r.rhs);
        if !r.holds {
            failures.push(json!({"trial": i, "lhs": r.lhs, "rhs": r.rhs}));
        }
    }
    let doc = json!({
        "sigma": sigma.name(),
        "trials": trials,
        "holds": failures.is_empty(),
        "largest_excess": if trials == 0 { Value::Null } else { json!(worst) },
        "failures": failures,
        "meta": meta(cli, json!({"tol": tol})),
    });
    emit(cli, &doc)?;
    Ok(if failures.is_empty() { 0 } else { 1 })
}

fn game_for(system: &Path, fiber: &Option<String>) -> Result<CodensityGame> {
    let s = load_system(system)?;
    let spec = spec_for(&s, &LiftArgs { fiber: fiber.clone(), tau: None, weight: 0.5 })?;
    Ok(CodensityGame::new(s, spec)?)
}

fn game_cmd(cli: &Cli, command: &GameCommand) -> Result<u8> {
    match command {
        GameCommand::Solve { system, start, fiber } => {
            let g = game_for(system, fiber)?;
            let p = load_fiber(start, g.carrier())?;
            let nu = nu_exact(g.system(), g.spec())?;
            let win = is_winning(&p, &g)?;
            let mut doc = json!({
                "winner": if win { "duplicator" } else { "spoiler" },
                "start": io::render_fiber(&p),
                "bisimilarity": io::render_fiber(&nu),
            });
            if !win {
                // Duplicator's best answer is ν itself; a move it cannot
                // answer with ν has no winning answer at all.
                let mv = g
                    .spoiler_moves(&p)?
                    .into_iter()
                    .find(|d| !g.move_d(d, &nu).unwrap_or(true))
                    .ok_or_else(|| anyhow!("no winning Spoiler move found"))?;
                doc["spoiler_move"] = io::render_move(&g, &mv);
            }
            doc["meta"] = meta(cli, json!({}));
            emit(cli, &doc)?;
            Ok(if win { 0 } else { 1 })
        }
        GameCommand::Invariant { system, invariant, fiber } => {
            let g = game_for(system, fiber)?;
            let v = load_invariant(invariant, g.carrier())?;
            let (inv, bis) = bisim_iff(&v, &g)?;
            let doc = json!({
                "members": v.len(),
                "invariant": inv,
                "join_is_bisimulation": bis,
                "join": io::render_fiber(&invariant_join(&v, &g)?),
                "meta": meta(cli, json!({})),
            });
            emit(cli, &doc)?;
            Ok(if inv { 0 } else { 1 })
        }
        GameCommand::Compose { first, second, sigma, first_invariant, second_invariant, fiber } => {
            let systems = [load_system(first)?, load_system(second)?];
            if systems[0].kind() != systems[1].kind() {
                bail!("cannot compose a {} system with a {} system", systems[0].kind(), systems[1].kind());
            }
            let spec = spec_for(&systems[0], &LiftArgs { fiber: fiber.clone(), tau: None, weight: 0.5 })?;
            check_spec(&systems[1], &spec)?;
            let sigma = StructModality::by_name(sigma, spec.truth.is_finite())?;
            let cg = CompositeGame::new(&systems, sigma.clone(), &spec)?;
            let vs =
                [load_invariant(first_invariant, systems[0].carrier())?, load_invariant(second_invariant, systems[1].carrier())?];
            for (i, (v, g)) in vs.iter().zip(&cg.components).enumerate() {
                if !is_invariant(v, g)? {
                    let doc = json!({
                        "composite_invariant": false,
                        "detail": format!("component {} is not an invariant", i + 1),
                        "meta": meta(cli, json!({})),
                    });
                    emit(cli, &doc)?;
                    return Ok(1);
                }
            }
            let (product, ok) = compose_and_verify(&vs, &cg)?;
            let op = CompositionOp::for_system(&systems[0]);
            let options = LiftabilityOptions { seed: cli.seed, ..Default::default() };
            let gate = check_liftability(&spec, op, &sigma, &options)?.overall;
            let report = check_composite_equivalence(&product, &cg, op, gate)?;
            let pair = |p: Option<(bool, bool)>, a: &str, b: &str| p.map(|(x, y)| json!({a: x, b: y}));
            let mut doc = io::render_composite_invariant(&product);
            doc["sigma"] = json!(sigma.name());
            doc["composite_invariant"] = json!(ok);
            doc["equivalence"] = json!({
                "gate": io::render_verdict(&report.gate),
                "given_set": pair(report.item1, "bisimulation", "invariant"),
                "join_closure": pair(report.item2, "invariant", "bisimulation"),
                "below_composed_bisimilarity": report.witnesses,
                "holds": report.holds,
            });
            doc["meta"] = meta(cli, json!({}));
            emit(cli, &doc)?;
            Ok(if ok && report.holds != Some(false) { 0 } else { 1 })
        }
        GameCommand::Play { system, start, fiber, invariant, replay } => {
            let g = game_for(system, fiber)?;
            let p = load_fiber(start, g.carrier())?;
            let inv = match invariant {
                Some(path) => Some(load_invariant(path, g.carrier())?),
                None => None,
            };
            if let Some(path) = replay {
                let t = located(path, io::parse_transcript(&g, &read(path)?))?;
                if t.start != p {
                    bail!("{}: the transcript starts elsewhere", path.display());
                }
                let ok = replay_transcript(g, &t, inv)?;
                let doc = json!({"reproduced": ok, "winner": t.winner.map(|w| w.name()), "meta": meta(cli, json!({}))});
                emit(cli, &doc)?;
                return Ok(if ok { 0 } else { 1 });
            }
            let mut session = Session::new(g, p, inv)?;
            play(&mut session)?;
            let mut doc = io::render_transcript(session.game(), session.transcript());
            doc["meta"] = meta(cli, json!({}));
            emit(cli, &doc)?;
            Ok(if session.winner().is_some() { 0 } else { 2 })
        }
    }
}

fn show_map(g: &CodensityGame, d: &DupPos) -> String {
    let c = g.carrier();
    let parts: Vec<String> = d.map.iter().enumerate().map(|(x, v)| format!("{}={v}", c.label(x))).collect();
    format!("{} [{}]", g.spec().tau.indices[d.index], parts.join(" "))
}

fn show_position(p: &FiberObject) -> String {
    crate::text::render(&io::render_fiber(p)).replace('\n', "; ")
}

/// Reads Spoiler moves from standard input: a number picks a listed legal
/// move, `<index> <bits>` names any move, `q` stops.
fn play(session: &mut Session) -> Result<()> {
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        eprintln!("position: {}", show_position(session.current()));
        if let Some(w) = session.winner() {
            eprintln!("winner: {}", w.name());
            return Ok(());
        }
        let moves = session.legal_moves()?;
        for (i, d) in moves.iter().enumerate() {
            eprintln!("  {i}: {}", show_map(session.game(), d));
        }
        eprint!("> ");
        let Some(line) = lines.next() else { return Ok(()) };
        let line = line?;
        let line = line.trim();
        if line == "q" || line == "quit" {
            return Ok(());
        }
        let mv = match parse_choice(session.game(), &moves, line) {
            Ok(m) => m,
            Err(e) => {
                eprintln!("{e}");
                continue;
            }
        };
        match session.play(mv) {
            Ok(Some(reply)) => eprintln!("duplicator answers {}", show_position(&reply)),
            Ok(None) => eprintln!("duplicator has no answer"),
            Err(e) => eprintln!("rejected: {e}"),
        }
    }
}

fn parse_choice(g: &CodensityGame, moves: &[DupPos], line: &str) -> Result<DupPos> {
    if let Ok(i) = line.parse::<usize>() {
        return moves.get(i).cloned().ok_or_else(|| anyhow!("no move {i}"));
    }
    let mut parts = line.split_whitespace();
    let (Some(name), Some(bits), None) = (parts.next(), parts.next(), parts.next()) else {
        bail!("expected a move number, \"<index> <bits>\" or q");
    };
    let index = g.spec().tau.indices.iter().position(|x| x == name).ok_or_else(|| anyhow!("unknown modality index {name:?}"))?;
    let map = bits
        .chars()
        .map(|c| c.to_digit(2).map(|b| b as usize).ok_or_else(|| anyhow!("bits must be 0 or 1")))
        .collect::<Result<Vec<_>>>()?;
    if map.len() != g.carrier().size() {
        bail!("expected {} bits", g.carrier().size());
    }
    Ok(DupPos { index, map })
}

fn selftest_cmd(cli: &Cli, criteria: &[u8]) -> Result<u8> {
    let ids: Vec<u8> = if criteria.is_empty() { selftest::CRITERIA.iter().map(|c| c.0).collect() } else { criteria.to_vec() };
    let mut results = Vec::new();
    for id in ids {
        let r = selftest::run_criterion(id, cli.seed).ok_or_else(|| anyhow!("unknown criterion {id}"))?;
        eprintln!("{}", r.line());
        results.push(r);
    }
    let passed = results.iter().all(|r| r.passed);
    let doc = json!({
        "passed": passed,
        "criteria": results
            .iter()
            .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": r.elapsed.as_secs_f64()}))
            .collect::<Vec<_>>(),
        "meta": meta(cli, json!({})),
    });
    emit(cli, &doc)?;
    Ok(if passed { 0 } else { 1 })
}
