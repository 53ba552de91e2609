//! JSON documents for systems, fiber objects, invariants, transcripts and
//! reports. Parse errors carry the JSON path, or line and column for syntax
//! errors.

use serde_json::{json, Map, Value};

use crate::behavior::{DASystem, Dist, KripkeSystem, MDPSystem, System, MASS_TOL};
use crate::compose::{JoinConditions, LiftabilityReport};
use crate::error::{Error, Result};
use crate::fibers::{Carrier, ERel, EqRel, FiberKind, FiberObject, Metric};
use crate::fixpoint::{IterReport, PreservationReport};
use crate::games::{CodensityGame, DupPos, Round, Transcript, Winner};
use crate::verdict::Verdict;

fn perr(path: &str, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), message: message.into() }
}

/// Parses JSON text, reporting syntax errors by line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| perr(&format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values always serialize")
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| perr(path, format!("missing field \"{key}\"")))
}

fn arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(path, "expected an array"))
}

fn str_<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| perr(path, "expected a string"))
}

fn num(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| perr(path, "expected a number"))
}

/// A state label: a string, or a non-negative integer read as its decimal.
fn label(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_u64() => Ok(n.to_string()),
        _ => Err(perr(path, "expected a state label")),
    }
}

fn parse_carrier(v: &Value, path: &str) -> Result<Carrier> {
    let labels = arr(v, path)?.iter().enumerate().map(|(i, x)| label(x, &format!("{path}[{i}]"))).collect::<Result<Vec<_>>>()?;
    Carrier::labelled(labels).map_err(|e| perr(path, e.to_string()))
}

fn state(c: &Carrier, v: &Value, path: &str) -> Result<usize> {
    let l = label(v, path)?;
    c.index_of(&l).ok_or_else(|| perr(path, format!("unknown state {l:?}")))
}

fn labels_of(c: &Carrier) -> Vec<String> {
    (0..c.size()).map(|i| c.label(i)).collect()
}

/// Per-state entries given either as an object keyed by state or as an array
/// in state order.
fn per_state<'a>(c: &Carrier, v: &'a Value, path: &str) -> Result<Vec<(&'a Value, String)>> {
    let n = c.size();
    match v {
        Value::Object(m) => {
            let mut slots: Vec<Option<(&Value, String)>> = vec![None; n];
            for (k, x) in m {
                let p = format!("{path}.{k}");
                let i = c.index_of(k).ok_or_else(|| perr(&p, format!("unknown state {k:?}")))?;
                slots[i] = Some((x, p));
            }
            slots
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| perr(path, format!("no entry for state {:?}", c.label(i)))))
                .collect()
        }
        Value::Array(a) => {
            if a.len() != n {
                return Err(perr(path, format!("expected {n} entries, found {}", a.len())));
            }
            Ok(a.iter().enumerate().map(|(i, x)| (x, format!("{path}[{i}]"))).collect())
        }
        _ => Err(perr(path, "expected an object keyed by state or an array")),
    }
}

pub fn system_from_value(v: &Value) -> Result<System> {
    let m = obj(v, "$")?;
    let kind = str_(field(m, "type", "$")?, "$.type")?;
    let system = match kind {
        "kripke" => {
            let c = parse_carrier(field(m, "states", "$")?, "$.states")?;
            let succ = per_state(&c, field(m, "succ", "$")?, "$.succ")?
                .into_iter()
                .map(|(x, p)| {
                    let mut s = arr(x, &p)?
                        .iter()
                        .enumerate()
                        .map(|(j, y)| state(&c, y, &format!("{p}[{j}]")))
                        .collect::<Result<Vec<_>>>()?;
                    s.sort_unstable();
                    s.dedup();
                    Ok(s)
                })
                .collect::<Result<Vec<_>>>()?;
            System::Kripke(KripkeSystem { carrier: c, succ })
        }
        "dfa" => {
            let alphabet = arr(field(m, "alphabet", "$")?, "$.alphabet")?
                .iter()
                .enumerate()
                .map(|(i, a)| str_(a, &format!("$.alphabet[{i}]")).map(str::to_string))
                .collect::<Result<Vec<_>>>()?;
            for (i, a) in alphabet.iter().enumerate() {
                if alphabet[..i].contains(a) {
                    return Err(perr(&format!("$.alphabet[{i}]"), format!("duplicate symbol {a:?}")));
                }
            }
            let delta_v = field(m, "delta", "$")?;
            let c = match m.get("states") {
                Some(s) => parse_carrier(s, "$.states")?,
                None => {
                    let d = obj(delta_v, "$.delta")?;
                    Carrier::labelled(d.keys().cloned().collect()).map_err(|e| perr("$.delta", e.to_string()))?
                }
            };
            let accepting = parse_accepting(&c, field(m, "accepting", "$")?)?;
            let delta = per_state(&c, delta_v, "$.delta")?
                .into_iter()
                .map(|(x, p)| match x {
                    Value::Object(row) => {
                        for k in row.keys() {
                            if !alphabet.contains(k) {
                                return Err(perr(&format!("{p}.{k}"), format!("unknown symbol {k:?}")));
                            }
                        }
                        alphabet
                            .iter()
                            .map(|a| {
                                let t = row.get(a).ok_or_else(|| perr(&p, format!("no transition on {a:?}")))?;
                                state(&c, t, &format!("{p}.{a}"))
                            })
                            .collect::<Result<Vec<_>>>()
                    }
                    Value::Array(row) => {
                        if row.len() != alphabet.len() {
                            return Err(perr(&p, format!("expected {} targets", alphabet.len())));
                        }
                        row.iter().enumerate().map(|(j, t)| state(&c, t, &format!("{p}[{j}]"))).collect()
                    }
                    _ => Err(perr(&p, "expected an object keyed by symbol")),
                })
                .collect::<Result<Vec<_>>>()?;
            System::Da(DASystem { carrier: c, alphabet, accepting, delta })
        }
        "mdp" => {
            let c = parse_carrier(field(m, "states", "$")?, "$.states")?;
            let choices = per_state(&c, field(m, "choices", "$")?, "$.choices")?
                .into_iter()
                .map(|(x, p)| {
                    arr(x, &p)?
                        .iter()
                        .enumerate()
                        .map(|(j, d)| parse_dist(&c, d, &format!("{p}[{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            System::Mdp(MDPSystem { carrier: c, choices })
        }
        other => return Err(perr("$.type", format!("unknown system type {other:?}"))),
    };
    let violations = system.validate();
    if let Some(v) = violations.first() {
        return Err(perr("$", v.to_string()));
    }
    Ok(system)
}

/// Accepting states as a list of labels or as one boolean per state.
fn parse_accepting(c: &Carrier, v: &Value) -> Result<Vec<bool>> {
    let path = "$.accepting";
    let a = arr(v, path)?;
    if !a.is_empty() && a.iter().all(Value::is_boolean) {
        if a.len() != c.size() {
            return Err(perr(path, format!("expected {} booleans", c.size())));
        }
        return Ok(a.iter().map(|b| b.as_bool().unwrap_or(false)).collect());
    }
    let mut acc = vec![false; c.size()];
    for (i, x) in a.iter().enumerate() {
        acc[state(c, x, &format!("{path}[{i}]"))?] = true;
    }
    Ok(acc)
}

fn parse_dist(c: &Carrier, v: &Value, path: &str) -> Result<Dist> {
    let m = obj(v, path)?;
    let mut w = vec![0.0; c.size()];
    for (k, x) in m {
        let p = format!("{path}.{k}");
        let i = c.index_of(k).ok_or_else(|| perr(&p, format!("unknown state {k:?}")))?;
        let x = num(x, &p)?;
        if !(0.0..=1.0 + MASS_TOL).contains(&x) {
            return Err(perr(&p, format!("probability {x} outside [0, 1]")));
        }
        w[i] += x;
    }
    Dist::new(c.clone(), w).map_err(|e| perr(path, e.to_string()))
}

pub fn parse_system(text: &str) -> Result<System> {
    system_from_value(&parse_json(text)?)
}

pub fn render_system(s: &System) -> Value {
    let c = s.carrier();
    let states = labels_of(c);
    match s {
        System::Kripke(k) => {
            let succ: Map<String, Value> = k
                .succ
                .iter()
                .enumerate()
                .map(|(i, ys)| (c.label(i), json!(ys.iter().map(|&y| c.label(y)).collect::<Vec<_>>())))
                .collect();
            json!({"type": "kripke", "states": states, "succ": succ})
        }
        System::Da(d) => {
            let accepting: Vec<String> = (0..c.size()).filter(|&i| d.accepting[i]).map(|i| c.label(i)).collect();
            let delta: Map<String, Value> = d
                .delta
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let r: Map<String, Value> =
                        d.alphabet.iter().zip(row).map(|(a, &t)| (a.clone(), json!(c.label(t)))).collect();
                    (c.label(i), Value::Object(r))
                })
                .collect();
            json!({"type": "dfa", "states": states, "alphabet": d.alphabet, "accepting": accepting, "delta": delta})
        }
        System::Mdp(m) => {
            let choices: Map<String, Value> = m
                .choices
                .iter()
                .enumerate()
                .map(|(i, ds)| {
                    let ds: Vec<Value> = ds
                        .iter()
                        .map(|d| {
                            let w: Map<String, Value> =
                                d.support().into_iter().map(|y| (c.label(y), json!(d.weights()[y]))).collect();
                            Value::Object(w)
                        })
                        .collect();
                    (c.label(i), Value::Array(ds))
                })
                .collect();
            json!({"type": "mdp", "states": states, "choices": choices})
        }
    }
}

/// Reads a fiber object. `carrier` fixes the states when the document omits
/// them, and must agree in size when it does not.
pub fn fiber_from_value(v: &Value, carrier: Option<&Carrier>, path: &str) -> Result<FiberObject> {
    let m = obj(v, path)?;
    let kind_s = str_(field(m, "fiber", path)?, &format!("{path}.fiber"))?;
    let kind = FiberKind::parse(kind_s).ok_or_else(|| perr(&format!("{path}.fiber"), format!("unknown fiber {kind_s:?}")))?;
    let c = match (m.get("states"), carrier) {
        (Some(s), given) => {
            let c = parse_carrier(s, &format!("{path}.states"))?;
            if let Some(g) = given {
                if g.size() != c.size() {
                    return Err(perr(&format!("{path}.states"), format!("expected {} states, found {}", g.size(), c.size())));
                }
                if let Some(gl) = g.labels() {
                    if gl != labels_of(&c).as_slice() {
                        return Err(perr(&format!("{path}.states"), "states differ from the system's"));
                    }
                }
            }
            c
        }
        (None, Some(g)) => g.clone(),
        (None, None) => return Err(perr(path, "missing field \"states\"")),
    };
    let n = c.size();
    let bad = |p: &str, e: Error| perr(p, e.to_string());
    match kind {
        FiberKind::EqRel => {
            let p = format!("{path}.blocks");
            let mut labels = vec![usize::MAX; n];
            for (b, block) in arr(field(m, "blocks", path)?, &p)?.iter().enumerate() {
                let bp = format!("{p}[{b}]");
                let members = arr(block, &bp)?;
                if members.is_empty() {
                    return Err(perr(&bp, "empty block"));
                }
                for (j, x) in members.iter().enumerate() {
                    let xp = format!("{bp}[{j}]");
                    let i = state(&c, x, &xp)?;
                    if labels[i] != usize::MAX {
                        return Err(perr(&xp, format!("state {:?} appears in two blocks", c.label(i))));
                    }
                    labels[i] = b;
                }
            }
            if let Some(i) = labels.iter().position(|&l| l == usize::MAX) {
                return Err(perr(&p, format!("state {:?} is in no block", c.label(i))));
            }
            Ok(EqRel::from_labels(c, &labels).map_err(|e| bad(&p, e))?.into())
        }
        FiberKind::ERel => {
            let p = format!("{path}.pairs");
            let mut pairs = Vec::new();
            for (j, pr) in arr(field(m, "pairs", path)?, &p)?.iter().enumerate() {
                let pp = format!("{p}[{j}]");
                let xy = arr(pr, &pp)?;
                if xy.len() != 2 {
                    return Err(perr(&pp, "expected a pair"));
                }
                pairs.push((state(&c, &xy[0], &format!("{pp}[0]"))?, state(&c, &xy[1], &format!("{pp}[1]"))?));
            }
            Ok(ERel::from_pairs(c, pairs).map_err(|e| bad(&p, e))?.into())
        }
        FiberKind::PMet | FiberKind::LMet => {
            let p = format!("{path}.matrix");
            let rows = arr(field(m, "matrix", path)?, &p)?;
            if rows.len() != n {
                return Err(perr(&p, format!("expected {n} rows, found {}", rows.len())));
            }
            let mut d = Vec::with_capacity(n * n);
            for (i, r) in rows.iter().enumerate() {
                let rp = format!("{p}[{i}]");
                let r = arr(r, &rp)?;
                if r.len() != n {
                    return Err(perr(&rp, format!("expected {n} entries, found {}", r.len())));
                }
                for (j, x) in r.iter().enumerate() {
                    let xp = format!("{rp}[{j}]");
                    let x = num(x, &xp)?;
                    if !(0.0..=1.0).contains(&x) {
                        return Err(perr(&xp, format!("distance {x} outside [0, 1]")));
                    }
                    d.push(x);
                }
            }
            let metric = if kind == FiberKind::PMet { Metric::pmet(c, d) } else { Metric::lmet(c, d) };
            Ok(metric.map_err(|e| bad(&p, e))?.into())
        }
    }
}

pub fn parse_fiber_object(text: &str, carrier: Option<&Carrier>) -> Result<FiberObject> {
    fiber_from_value(&parse_json(text)?, carrier, "$")
}

pub fn render_fiber(p: &FiberObject) -> Value {
    let c = p.carrier();
    let states = labels_of(c);
    match p {
        FiberObject::EqRel(e) => {
            let blocks: Vec<Vec<String>> = e.blocks().into_iter().map(|b| b.into_iter().map(|x| c.label(x)).collect()).collect();
            json!({"fiber": "eqrel", "states": states, "blocks": blocks})
        }
        FiberObject::ERel(r) => {
            let pairs: Vec<[String; 2]> = r.pairs().into_iter().map(|(x, y)| [c.label(x), c.label(y)]).collect();
            json!({"fiber": "erel", "states": states, "pairs": pairs})
        }
        FiberObject::PMet(m) | FiberObject::LMet(m) => {
            let n = c.size();
            let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
            json!({"fiber": p.kind().name(), "states": states, "matrix": rows})
        }
    }
}

/// `{"invariant": [fiber, ...]}` or a bare array of fiber documents.
pub fn invariant_from_value(v: &Value, carrier: Option<&Carrier>) -> Result<Vec<FiberObject>> {
    let (items, path) = invariant_items(v)?;
    items.iter().enumerate().map(|(i, x)| fiber_from_value(x, carrier, &format!("{path}[{i}]"))).collect()
}

fn invariant_items(v: &Value) -> Result<(&Vec<Value>, &'static str)> {
    match v {
        Value::Array(a) => Ok((a, "$")),
        Value::Object(m) => Ok((arr(field(m, "invariant", "$")?, "$.invariant")?, "$.invariant")),
        _ => Err(perr("$", "expected an invariant document")),
    }
}

pub fn parse_invariant(text: &str, carrier: Option<&Carrier>) -> Result<Vec<FiberObject>> {
    invariant_from_value(&parse_json(text)?, carrier)
}

/// Composite invariants: every member is an array with one fiber document
/// per component.
pub fn parse_composite_invariant(text: &str, carriers: &[Carrier]) -> Result<Vec<Vec<FiberObject>>> {
    let v = parse_json(text)?;
    let (items, path) = invariant_items(&v)?;
    items
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("{path}[{i}]");
            let parts = arr(t, &p)?;
            if parts.len() != carriers.len() {
                return Err(perr(&p, format!("expected {} components, found {}", carriers.len(), parts.len())));
            }
            parts.iter().zip(carriers).enumerate().map(|(j, (x, c))| fiber_from_value(x, Some(c), &format!("{p}[{j}]"))).collect()
        })
        .collect()
}

pub fn render_invariant(v: &[FiberObject]) -> Value {
    json!({"invariant": v.iter().map(render_fiber).collect::<Vec<_>>()})
}

pub fn render_composite_invariant(v: &[Vec<FiberObject>]) -> Value {
    json!({"invariant": v.iter().map(|t| t.iter().map(render_fiber).collect::<Vec<_>>()).collect::<Vec<_>>()})
}

pub fn render_move(g: &CodensityGame, d: &DupPos) -> Value {
    let c = g.carrier();
    let map: Map<String, Value> = d.map.iter().enumerate().map(|(i, &v)| (c.label(i), json!(v))).collect();
    json!({"index": g.spec().tau.indices[d.index], "map": map})
}

pub fn parse_move(g: &CodensityGame, v: &Value, path: &str) -> Result<DupPos> {
    let m = obj(v, path)?;
    let ip = format!("{path}.index");
    let index = match field(m, "index", path)? {
        Value::String(s) => {
            g.spec().tau.indices.iter().position(|x| x == s).ok_or_else(|| perr(&ip, format!("unknown modality index {s:?}")))?
        }
        Value::Number(n) => {
            n.as_u64().map(|i| i as usize).filter(|&i| i < g.spec().tau.len()).ok_or_else(|| perr(&ip, "index out of range"))?
        }
        _ => return Err(perr(&ip, "expected an index name")),
    };
    let mp = format!("{path}.map");
    let map = per_state(g.carrier(), field(m, "map", path)?, &mp)?
        .into_iter()
        .map(|(x, p)| x.as_u64().map(|u| u as usize).filter(|&u| u < 2).ok_or_else(|| perr(&p, "expected 0 or 1")))
        .collect::<Result<Vec<_>>>()?;
    Ok(DupPos { index, map })
}

pub fn render_transcript(g: &CodensityGame, t: &Transcript) -> Value {
    let moves: Vec<Value> = t
        .rounds
        .iter()
        .map(|r| {
            let mut m = render_move(g, &r.spoiler);
            m["reply"] = r.reply.as_ref().map_or(Value::Null, render_fiber);
            m
        })
        .collect();
    json!({
        "start": render_fiber(&t.start),
        "moves": moves,
        "winner": t.winner.map(Winner::name),
    })
}

pub fn transcript_from_value(g: &CodensityGame, v: &Value) -> Result<Transcript> {
    let m = obj(v, "$")?;
    let start = fiber_from_value(field(m, "start", "$")?, Some(g.carrier()), "$.start")?;
    if start.kind() != g.kind() {
        return Err(perr("$.start.fiber", format!("expected {} for this game", g.kind())));
    }
    let rounds = arr(field(m, "moves", "$")?, "$.moves")?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = format!("$.moves[{i}]");
            let spoiler = parse_move(g, x, &p)?;
            let reply = match obj(x, &p)?.get("reply") {
                None | Some(Value::Null) => None,
                Some(r) => Some(fiber_from_value(r, Some(g.carrier()), &format!("{p}.reply"))?),
            };
            Ok(Round { spoiler, reply })
        })
        .collect::<Result<Vec<_>>>()?;
    let winner = match m.get("winner") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) if s == "spoiler" => Some(Winner::Spoiler),
        Some(Value::String(s)) if s == "duplicator" => Some(Winner::Duplicator),
        Some(_) => return Err(perr("$.winner", "expected \"spoiler\", \"duplicator\" or null")),
    };
    Ok(Transcript { start, rounds, winner })
}

pub fn parse_transcript(g: &CodensityGame, text: &str) -> Result<Transcript> {
    transcript_from_value(g, &parse_json(text)?)
}

pub fn render_verdict(v: &Verdict) -> Value {
    match v.detail() {
        Some(d) => json!({"verdict": v.name(), "detail": d}),
        None => json!({"verdict": v.name()}),
    }
}

fn render_join(j: &JoinConditions) -> Value {
    json!({
        "tau_joins": render_verdict(&j.tau_joins),
        "meet_below_join": render_verdict(&j.meet_below_join),
        "decomposition": render_verdict(&j.decomposition),
    })
}

pub fn render_liftability(r: &LiftabilityReport) -> Value {
    let per_index: Map<String, Value> = r.per_index.iter().map(|(a, v)| (a.clone(), render_verdict(v))).collect();
    json!({
        "overall": render_verdict(&r.overall),
        "condition1": render_verdict(&r.condition1),
        "condition2": render_verdict(&r.condition2),
        "join_conditions": r.join_conditions.as_ref().map(render_join),
        "direct_check": r.direct_check.as_ref().map(render_verdict),
        "per_index": per_index,
        "notes": r.notes,
    })
}

pub fn render_iter(r: &IterReport) -> Value {
    json!({
        "iterations": r.iterations,
        "residual": r.residual,
        "post_fixpoint_violation": r.post_fixpoint_violation,
        "converged": r.converged,
        "tol": r.tol,
        "stopping_rule": "residual below tol and the result is a tol-post-fixpoint",
    })
}

pub fn render_preservation(r: &PreservationReport) -> Value {
    json!({
        "verdict": render_verdict(&r.verdict),
        "bound_violation": r.bound_violation,
        "post_fixpoint_violation": r.post_fixpoint_violation,
        "combined": render_fiber(&r.combined),
        "composed": render_fiber(&r.composed),
    })
}
