//! Truth-value objects, behavior modalities `τ`, structure modalities `σ`,
//! and sampled or exhaustive checks of their algebraic properties.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::behavior::{enumerate_elems, fmap_raw, Elem, FunctorDesc};
use crate::compose::{apply_law, DistLaw};
use crate::error::{Error, Result};
use crate::fibers::{Carrier, ERel, EqRel, FiberKind, FiberObject};
use crate::verdict::Verdict;

pub const GRID_STEP: f64 = 0.05;
pub const RANDOM_SAMPLES: usize = 1000;
const EPS: f64 = 1e-9;

/// Euclidean distance on the unit interval.
pub fn d_interval(x: f64, y: f64) -> f64 {
    (x - y).abs()
}

/// Asymmetric distance `max(0, y − x)` on the unit interval.
pub fn d_asym(x: f64, y: f64) -> f64 {
    (y - x).max(0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum TruthObject {
    /// A finite carrier with a relation-valued fiber object on it.
    Finite(FiberObject),
    IntervalEuclid,
    IntervalAsym,
}

impl TruthObject {
    /// `2` with equality; index 1 is `true`.
    pub fn eq2() -> Self {
        let c = Carrier::labelled(vec!["false".into(), "true".into()]).expect("distinct labels");
        TruthObject::Finite(EqRel::diagonal(c).into())
    }

    /// `2` with the identity endorelation.
    pub fn eq2_erel() -> Self {
        let c = Carrier::labelled(vec!["false".into(), "true".into()]).expect("distinct labels");
        TruthObject::Finite(ERel::diagonal(c).into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TruthObject::Finite(_))
    }

    pub fn finite(&self) -> Option<&FiberObject> {
        match self {
            TruthObject::Finite(o) => Some(o),
            _ => None,
        }
    }

    pub fn fiber_kind(&self) -> FiberKind {
        match self {
            TruthObject::Finite(o) => o.kind(),
            TruthObject::IntervalEuclid => FiberKind::PMet,
            TruthObject::IntervalAsym => FiberKind::LMet,
        }
    }

    /// Distance between two truth values; only for interval objects.
    pub fn dist(&self, x: f64, y: f64) -> f64 {
        match self {
            TruthObject::IntervalAsym => d_asym(x, y),
            _ => d_interval(x, y),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TruthObject::Finite(_) => "finite",
            TruthObject::IntervalEuclid => "interval",
            TruthObject::IntervalAsym => "interval_asym",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TauEval {
    /// `true ∈ U`
    Diamond,
    /// Acceptance bit; `true_value` is its value on interval truth objects.
    DaAcc {
        true_value: f64,
    },
    /// `w · ρ(a)` on the interval, `ρ(a)` on finite truth objects.
    DaStep {
        sym: usize,
        w: f64,
    },
    Expectation,
    /// `inf`, with `inf ∅ = 1`.
    Infimum,
    /// `inf ∘ P(e)` for sets of distributions.
    InfExpectation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModalityFamily {
    pub indices: Vec<String>,
    pub evals: Vec<TauEval>,
}

/// An element of `F(I)` with interval-valued atoms.
#[derive(Clone, Debug, PartialEq)]
pub enum IElem {
    Set(Vec<f64>),
    /// `(value, probability)` atoms.
    Dist(Vec<(f64, f64)>),
    Da {
        t: bool,
        rho: Vec<f64>,
    },
    SetDist(Vec<Vec<(f64, f64)>>),
}

impl ModalityFamily {
    pub fn diamond() -> Self {
        ModalityFamily { indices: vec!["*".into()], evals: vec![TauEval::Diamond] }
    }

    /// Index `ε` reads the acceptance bit, each symbol reads its successor.
    /// `true_value` is ignored on finite truth objects.
    pub fn da(alphabet: &[String], w: f64, true_value: f64) -> Self {
        let mut indices = vec!["eps".to_string()];
        let mut evals = vec![TauEval::DaAcc { true_value }];
        for (i, a) in alphabet.iter().enumerate() {
            indices.push(a.clone());
            evals.push(TauEval::DaStep { sym: i, w });
        }
        ModalityFamily { indices, evals }
    }

    pub fn expectation() -> Self {
        ModalityFamily { indices: vec!["*".into()], evals: vec![TauEval::Expectation] }
    }

    pub fn infimum() -> Self {
        ModalityFamily { indices: vec!["*".into()], evals: vec![TauEval::Infimum] }
    }

    pub fn inf_expectation() -> Self {
        ModalityFamily { indices: vec!["*".into()], evals: vec![TauEval::InfExpectation] }
    }

    pub fn len(&self) -> usize {
        self.evals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evals.is_empty()
    }

    pub fn eval_finite(&self, a: usize, x: &Elem) -> Result<usize> {
        eval_tau_finite(&self.evals[a], x)
    }

    pub fn eval_interval(&self, a: usize, x: &IElem) -> Result<f64> {
        eval_tau_interval(&self.evals[a], x)
    }
}

/// `τ` on a finite truth object; truth values are carrier indices.
pub fn eval_tau_finite(t: &TauEval, x: &Elem) -> Result<usize> {
    match (t, x) {
        (TauEval::Diamond, Elem::Set(u)) => Ok(usize::from(u.contains(&1))),
        (TauEval::DaAcc { .. }, Elem::Da { t, .. }) => Ok(usize::from(*t)),
        (TauEval::DaStep { sym, .. }, Elem::Da { rho, .. }) => {
            rho.get(*sym).copied().ok_or_else(|| Error::TypeMismatch(format!("no transition for symbol index {sym}")))
        }
        _ => Err(Error::TypeMismatch(format!("{t:?} cannot evaluate {x:?} on a finite truth object"))),
    }
}

fn expectation(atoms: &[(f64, f64)]) -> f64 {
    atoms.iter().map(|(v, p)| v * p).sum()
}

pub fn eval_tau_interval(t: &TauEval, x: &IElem) -> Result<f64> {
    match (t, x) {
        (TauEval::DaAcc { true_value }, IElem::Da { t, .. }) => Ok(if *t { *true_value } else { 1.0 - true_value }),
        (TauEval::DaStep { sym, w }, IElem::Da { rho, .. }) => {
            rho.get(*sym).map(|v| w * v).ok_or_else(|| Error::TypeMismatch(format!("no transition for symbol index {sym}")))
        }
        (TauEval::Expectation, IElem::Dist(atoms)) => Ok(expectation(atoms)),
        (TauEval::Infimum, IElem::Set(vs)) => Ok(vs.iter().copied().fold(1.0, f64::min)),
        (TauEval::InfExpectation, IElem::SetDist(ds)) => Ok(ds.iter().map(|d| expectation(d)).fold(1.0, f64::min)),
        _ => Err(Error::TypeMismatch(format!("{t:?} cannot evaluate {x:?} on an interval truth object"))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SigmaOp {
    /// Boolean conjunction on `2`.
    And,
    /// Boolean disjunction on `2`.
    Or,
    /// Arbitrary operation on a finite truth carrier, row-major over the
    /// argument tuple.
    Table {
        size: usize,
        values: Vec<usize>,
    },
    SigmaOplus,
    SigmaAv,
    SigmaOr,
    SigmaOtimes,
    SigmaAnd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructModality {
    pub op: SigmaOp,
    pub arity: usize,
}

impl StructModality {
    pub fn binary(op: SigmaOp) -> Self {
        StructModality { op, arity: 2 }
    }

    /// Resolves a command-line name against a truth object: `and` and `or`
    /// are Boolean on finite truth objects; on the interval `or` is `max`.
    pub fn by_name(name: &str, finite: bool) -> Result<Self> {
        let op = match (name, finite) {
            ("and", true) => SigmaOp::And,
            ("or", true) => SigmaOp::Or,
            ("or", false) => SigmaOp::SigmaOr,
            ("oplus", false) => SigmaOp::SigmaOplus,
            ("av", false) => SigmaOp::SigmaAv,
            ("otimes", false) => SigmaOp::SigmaOtimes,
            ("and_min", false) | ("and", false) => SigmaOp::SigmaAnd,
            _ => {
                return Err(Error::Unsupported(format!(
                    "structure modality {name:?} on a {} truth object",
                    if finite { "finite" } else { "interval" }
                )))
            }
        };
        Ok(StructModality::binary(op))
    }

    pub fn name(&self) -> &'static str {
        match self.op {
            SigmaOp::And => "and",
            SigmaOp::Or => "or",
            SigmaOp::Table { .. } => "table",
            SigmaOp::SigmaOplus => "oplus",
            SigmaOp::SigmaAv => "av",
            SigmaOp::SigmaOr => "or",
            SigmaOp::SigmaOtimes => "otimes",
            SigmaOp::SigmaAnd => "and_min",
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.op, SigmaOp::And | SigmaOp::Or | SigmaOp::Table { .. })
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.arity {
            return Err(Error::TypeMismatch(format!("{} arguments for arity {}", got, self.arity)));
        }
        Ok(())
    }

    pub fn eval_finite(&self, values: &[usize]) -> Result<usize> {
        self.check_arity(values.len())?;
        match &self.op {
            SigmaOp::And => Ok(usize::from(values.iter().all(|&v| v == 1))),
            SigmaOp::Or => Ok(usize::from(values.contains(&1))),
            SigmaOp::Table { size, values: table } => {
                let mut idx = 0;
                for &v in values {
                    if v >= *size {
                        return Err(Error::TypeMismatch(format!("truth value {v} outside table of size {size}")));
                    }
                    idx = idx * size + v;
                }
                Ok(table[idx])
            }
            _ => Err(Error::TypeMismatch(format!("{} is not a finite modality", self.name()))),
        }
    }

    pub fn eval_real(&self, values: &[f64]) -> Result<f64> {
        self.check_arity(values.len())?;
        let n = values.len() as f64;
        Ok(match self.op {
            SigmaOp::SigmaOplus => 1.0 - values.iter().map(|v| 1.0 - v).product::<f64>(),
            SigmaOp::SigmaAv => values.iter().sum::<f64>() / n,
            SigmaOp::SigmaOr => values.iter().copied().fold(0.0, f64::max),
            SigmaOp::SigmaOtimes => values.iter().product(),
            SigmaOp::SigmaAnd => values.iter().copied().fold(1.0, f64::min),
            _ => return Err(Error::TypeMismatch(format!("{} is not an interval modality", self.name()))),
        })
    }

    pub(crate) fn real2(&self, a: f64, b: f64) -> f64 {
        self.eval_real(&[a, b]).expect("binary interval modality")
    }

    fn require_interval(&self) -> Result<()> {
        if self.is_finite() || self.arity != 2 {
            return Err(Error::Unsupported(format!("{} is not a binary interval modality", self.name())));
        }
        Ok(())
    }
}

pub fn grid(step: f64) -> Vec<f64> {
    let n = (1.0 / step).round() as usize;
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum StarVerdict {
    Holds,
    Counterexample { clause: u8, args: Vec<f64> },
}

impl StarVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, StarVerdict::Holds)
    }
}

/// Checks monotonicity, `σ(0,0)=0` and `σ(a,b) − σ(c,d) ≤ σ(|a−c|,|b−d|)`.
/// Grid points come first, in lexicographic order, then seeded random points.
pub fn check_star(s: &StructModality, grid_step: f64, random_samples: usize, seed: u64) -> Result<StarVerdict> {
    s.require_interval()?;
    let f = |a: f64, b: f64| s.real2(a, b);
    if f(0.0, 0.0).abs() > EPS {
        return Ok(StarVerdict::Counterexample { clause: 2, args: vec![0.0, 0.0] });
    }
    let check = |a: f64, b: f64, c: f64, d: f64| -> Option<StarVerdict> {
        if a <= c && b <= d && f(a, b) > f(c, d) + EPS {
            return Some(StarVerdict::Counterexample { clause: 1, args: vec![a, b, c, d] });
        }
        if f(a, b) - f(c, d) > f((a - c).abs(), (b - d).abs()) + EPS {
            return Some(StarVerdict::Counterexample { clause: 3, args: vec![a, b, c, d] });
        }
        None
    };
    let g = grid(grid_step);
    for &a in &g {
        for &b in &g {
            for &c in &g {
                for &d in &g {
                    if let Some(v) = check(a, b, c, d) {
                        return Ok(v);
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_samples {
        let (a, b, c, d) = (rng.gen(), rng.gen(), rng.gen(), rng.gen());
        if let Some(v) = check(a, b, c, d) {
            return Ok(v);
        }
    }
    Ok(StarVerdict::Holds)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    pub holds: bool,
    pub counterexample: Option<Vec<f64>>,
}

impl Flag {
    fn ok() -> Self {
        Flag { holds: true, counterexample: None }
    }

    fn fail(args: Vec<f64>) -> Self {
        Flag { holds: false, counterexample: Some(args) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdReport {
    /// Concavity in each argument separately.
    pub concave: Flag,
    pub preserves_inf: Flag,
    pub absorbs_one: Flag,
}

/// Sampled checks of the hypotheses that make `σ` lift both the powerset and
/// the distribution law.
pub fn check_hypotheses_pd(s: &StructModality, grid_step: f64, random_samples: usize, seed: u64) -> Result<PdReport> {
    s.require_interval()?;
    let f = |a: f64, b: f64| s.real2(a, b);
    let g = grid(grid_step);

    // Concavity in each argument separately: `1 − (1 − a)(1 − b)` is
    // affine in each argument but not jointly concave.
    let concave = (|| {
        for &b in &g {
            for &a1 in &g {
                for &a2 in &g {
                    let m = (a1 + a2) / 2.0;
                    if f(m, b) + EPS < (f(a1, b) + f(a2, b)) / 2.0 {
                        return Flag::fail(vec![a1, b, a2, b]);
                    }
                    if f(b, m) + EPS < (f(b, a1) + f(b, a2)) / 2.0 {
                        return Flag::fail(vec![b, a1, b, a2]);
                    }
                }
            }
        }
        Flag::ok()
    })();

    let absorbs_one = g
        .iter()
        .find(|&&x| (f(1.0, x) - 1.0).abs() > EPS || (f(x, 1.0) - 1.0).abs() > EPS)
        .map_or_else(Flag::ok, |&x| Flag::fail(vec![1.0, x]));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut preserves_inf = Flag::ok();
    for _ in 0..random_samples {
        let k = rng.gen_range(1..=5);
        let set: Vec<f64> = (0..k).map(|_| *g.choose(&mut rng).expect("grid")).collect();
        let y = *g.choose(&mut rng).expect("grid");
        let inf = set.iter().copied().fold(1.0, f64::min);
        let left = set.iter().map(|&x| f(x, y)).fold(1.0, f64::min);
        let right = set.iter().map(|&x| f(y, x)).fold(1.0, f64::min);
        if (f(inf, y) - left).abs() > EPS || (f(y, inf) - right).abs() > EPS {
            let mut args = set.clone();
            args.push(y);
            preserves_inf = Flag::fail(args);
            break;
        }
    }
    Ok(PdReport { concave, preserves_inf, absorbs_one })
}

/// The structure modality used at index `a`. Automata over the interval
/// combine acceptance bits by conjunction in the encoding fixed by
/// `true_value`; every other index uses `s` itself.
pub(crate) fn sigma_at_real(s: &StructModality, tau: &TauEval, x: f64, y: f64) -> f64 {
    match tau {
        TauEval::DaAcc { true_value } if *true_value >= 0.5 => x.min(y),
        TauEval::DaAcc { .. } => x.max(y),
        _ => s.real2(x, y),
    }
}

/// Checks `σ_a ∘ T(τ_a, τ_a) = τ_a ∘ Fσ_a ∘ λ` for every index `a`.
/// Finite truth objects are enumerated exhaustively, interval ones sampled.
pub fn check_commutation(
    s: &StructModality,
    m: &ModalityFamily,
    law: DistLaw,
    f: &FunctorDesc,
    truth: &TruthObject,
    samples: usize,
    seed: u64,
) -> Result<Vec<(String, Verdict)>> {
    match truth {
        TruthObject::Finite(omega) => commutation_finite(s, m, law, f, omega.size()),
        _ => commutation_interval(s, m, law, f, samples, seed),
    }
}

fn commutation_finite(
    s: &StructModality,
    m: &ModalityFamily,
    law: DistLaw,
    f: &FunctorDesc,
    size: usize,
) -> Result<Vec<(String, Verdict)>> {
    if !s.is_finite() {
        return Err(Error::Unsupported(format!("{} needs an interval truth object", s.name())));
    }
    law.check_functor(f)?;
    let elems = enumerate_elems(f, size, 1 << 16)?;
    let sigma_table: Vec<usize> = (0..size * size).map(|i| s.eval_finite(&[i / size, i % size])).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for a in 0..m.len() {
        let mut verdict = Verdict::VerifiedExhaustive;
        'pairs: for x in &elems {
            for y in &elems {
                let lhs = s.eval_finite(&[m.eval_finite(a, x)?, m.eval_finite(a, y)?])?;
                let composed = apply_law(law, x, y, size)?;
                let pushed = fmap_raw(f, &sigma_table, size, &composed);
                let rhs = m.eval_finite(a, &pushed)?;
                if lhs != rhs {
                    verdict = Verdict::Refuted(format!(
                        "index {}: {x:?}, {y:?} gives {lhs} on the left and {rhs} on the right",
                        m.indices[a]
                    ));
                    break 'pairs;
                }
            }
        }
        out.push((m.indices[a].clone(), verdict));
    }
    Ok(out)
}

fn random_atoms(rng: &mut ChaCha8Rng, g: &[f64]) -> Vec<(f64, f64)> {
    let k = rng.gen_range(1..=5);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|p| (*g.choose(rng).expect("grid"), p / total)).collect()
}

fn random_set(rng: &mut ChaCha8Rng, g: &[f64]) -> Vec<f64> {
    let k = rng.gen_range(0..=5);
    (0..k).map(|_| *g.choose(rng).expect("grid")).collect()
}

fn commutation_interval(
    s: &StructModality,
    m: &ModalityFamily,
    law: DistLaw,
    f: &FunctorDesc,
    samples: usize,
    seed: u64,
) -> Result<Vec<(String, Verdict)>> {
    s.require_interval()?;
    law.check_functor(f)?;
    let g = grid(GRID_STEP);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = |tau: &TauEval, x: f64, y: f64| sigma_at_real(s, tau, x, y);
    let mut out = Vec::new();
    for (a, tau) in m.evals.iter().enumerate() {
        // Each case returns (lhs, rhs) for one sampled pair.
        let mut cases: Vec<(String, f64, f64)> = Vec::new();
        match (law, tau) {
            (DistLaw::LamP, TauEval::Infimum) => {
                let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = g.iter().map(|&v| (vec![], vec![v])).collect();
                pairs.extend(g.iter().map(|&v| (vec![v], vec![])));
                pairs.push((vec![], vec![]));
                for _ in 0..samples {
                    pairs.push((random_set(&mut rng, &g), random_set(&mut rng, &g)));
                }
                for (x, y) in pairs {
                    let inf = |v: &[f64]| v.iter().copied().fold(1.0, f64::min);
                    let lhs = sig(tau, inf(&x), inf(&y));
                    let rhs =
                        x.iter().flat_map(|&u| y.iter().map(move |&v| (u, v))).map(|(u, v)| sig(tau, u, v)).fold(1.0, f64::min);
                    cases.push((format!("{x:?}, {y:?}"), lhs, rhs));
                }
            }
            (DistLaw::LamD, TauEval::Expectation) => {
                for _ in 0..samples {
                    let x = random_atoms(&mut rng, &g);
                    let y = random_atoms(&mut rng, &g);
                    let lhs = sig(tau, expectation(&x), expectation(&y));
                    let rhs: f64 = x
                        .iter()
                        .flat_map(|&(u, p)| y.iter().map(move |&(v, q)| (u, v, p * q)))
                        .map(|(u, v, pq)| sig(tau, u, v) * pq)
                        .sum();
                    cases.push((format!("{x:?}, {y:?}"), lhs, rhs));
                }
            }
            (DistLaw::LamDA, TauEval::DaAcc { true_value }) => {
                for (t1, t2) in [(false, false), (false, true), (true, false), (true, true)] {
                    let enc = |t: bool| if t { *true_value } else { 1.0 - true_value };
                    let lhs = sig(tau, enc(t1), enc(t2));
                    let rhs = enc(t1 && t2);
                    cases.push((format!("t = ({t1}, {t2})"), lhs, rhs));
                }
            }
            (DistLaw::LamDA, TauEval::DaStep { w, .. }) => {
                for &u in &g {
                    for &v in &g {
                        cases.push((format!("successor values ({u}, {v})"), sig(tau, w * u, w * v), w * sig(tau, u, v)));
                    }
                }
            }
            _ => return Err(Error::Unsupported(format!("commutation of {tau:?} with {law:?} on an interval truth object"))),
        }
        let bad = cases.iter().find(|(_, l, r)| (l - r).abs() > EPS);
        let verdict = match bad {
            Some((what, l, r)) => {
                Verdict::Refuted(format!("index {}: {what} gives {l} on the left and {r} on the right", m.indices[a]))
            }
            None => Verdict::VerifiedSampled,
        };
        out.push((m.indices[a].clone(), verdict));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(op: SigmaOp) -> StructModality {
        StructModality::binary(op)
    }

    #[test]
    fn tau_examples() {
        assert_eq!(eval_tau_finite(&TauEval::Diamond, &Elem::Set(vec![0])).unwrap(), 0);
        assert_eq!(eval_tau_finite(&TauEval::Diamond, &Elem::Set(vec![0, 1])).unwrap(), 1);
        let e = eval_tau_interval(&TauEval::Expectation, &IElem::Dist(vec![(0.2, 0.5), (0.8, 0.5)])).unwrap();
        assert!((e - 0.5).abs() < 1e-12);
        assert_eq!(eval_tau_interval(&TauEval::Infimum, &IElem::Set(vec![])).unwrap(), 1.0);
        assert!(eval_tau_finite(&TauEval::Expectation, &Elem::Set(vec![])).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert!((s(SigmaOp::SigmaOplus).eval_real(&[0.5, 0.5]).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(s(SigmaOp::SigmaOr).eval_real(&[0.2, 0.9]).unwrap(), 0.9);
        assert_eq!(s(SigmaOp::And).eval_finite(&[1, 0]).unwrap(), 0);
        assert!(s(SigmaOp::And).eval_finite(&[1]).is_err());
    }

    #[test]
    fn star_catalogue() {
        for op in [SigmaOp::SigmaOplus, SigmaOp::SigmaAv, SigmaOp::SigmaOr] {
            assert!(check_star(&s(op.clone()), GRID_STEP, 200, 1).unwrap().holds(), "{op:?}");
        }
        for op in [SigmaOp::SigmaOtimes, SigmaOp::SigmaAnd] {
            let v = check_star(&s(op.clone()), GRID_STEP, 200, 1).unwrap();
            assert!(matches!(v, StarVerdict::Counterexample { clause: 3, .. }), "{op:?}: {v:?}");
        }
    }

    #[test]
    fn pd_hypotheses() {
        let r = check_hypotheses_pd(&s(SigmaOp::SigmaOplus), GRID_STEP, 300, 3).unwrap();
        assert!(r.concave.holds && r.preserves_inf.holds && r.absorbs_one.holds);
        let r = check_hypotheses_pd(&s(SigmaOp::SigmaAv), GRID_STEP, 300, 3).unwrap();
        assert!(!r.absorbs_one.holds);
        let r = check_hypotheses_pd(&s(SigmaOp::SigmaOr), GRID_STEP, 300, 3).unwrap();
        assert!(!r.concave.holds);
    }

    #[test]
    fn commutation_examples() {
        let v = check_commutation(
            &s(SigmaOp::And),
            &ModalityFamily::diamond(),
            DistLaw::LamP,
            &FunctorDesc::P,
            &TruthObject::eq2(),
            0,
            0,
        )
        .unwrap();
        assert_eq!(v[0].1, Verdict::VerifiedExhaustive);
        let sigma = ["a".to_string(), "b".to_string()];
        let fda = FunctorDesc::fda(sigma.to_vec(), 0.5).unwrap();
        let v = check_commutation(
            &s(SigmaOp::And),
            &ModalityFamily::da(&sigma, 0.5, 1.0),
            DistLaw::LamDA,
            &fda,
            &TruthObject::eq2(),
            0,
            0,
        )
        .unwrap();
        assert!(v.iter().all(|(_, v)| *v == Verdict::VerifiedExhaustive));
        let v = check_commutation(
            &s(SigmaOp::SigmaOplus),
            &ModalityFamily::expectation(),
            DistLaw::LamD,
            &FunctorDesc::D,
            &TruthObject::IntervalEuclid,
            300,
            5,
        )
        .unwrap();
        assert_eq!(v[0].1, Verdict::VerifiedSampled);
        let v = check_commutation(
            &s(SigmaOp::Or),
            &ModalityFamily::diamond(),
            DistLaw::LamP,
            &FunctorDesc::P,
            &TruthObject::eq2(),
            0,
            0,
        )
        .unwrap();
        assert!(v[0].1.is_refuted());
        let v = check_commutation(
            &s(SigmaOp::SigmaOr),
            &ModalityFamily::expectation(),
            DistLaw::LamD,
            &FunctorDesc::D,
            &TruthObject::IntervalEuclid,
            300,
            5,
        )
        .unwrap();
        assert!(v[0].1.is_refuted());
        let v = check_commutation(
            &s(SigmaOp::SigmaAv),
            &ModalityFamily::infimum(),
            DistLaw::LamP,
            &FunctorDesc::P,
            &TruthObject::IntervalEuclid,
            50,
            5,
        )
        .unwrap();
        assert!(v[0].1.is_refuted());
    }

    #[test]
    fn interval_distances() {
        let g = grid(GRID_STEP);
        for &x in &g {
            assert_eq!(d_asym(x, x), 0.0);
            for &y in &g {
                for &z in &g {
                    assert!(d_asym(x, z) <= d_asym(x, y) + d_asym(y, z) + 1e-12);
                }
            }
        }
        assert_eq!(d_asym(0.0, 1.0), 1.0);
        assert_eq!(d_asym(1.0, 0.0), 0.0);
    }
}
