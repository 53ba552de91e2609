//! Codensity liftings of behavior functors: the brute-force definition over
//! finite truth objects, closed forms for every catalogued combination, and
//! the `abs`/`Sp`/`conc` decomposition.

use std::collections::HashMap;

use rand::Rng;

use crate::behavior::{enumerate_elems, fmap_raw, Elem, FunctorDesc};
use crate::error::{Error, Result};
use crate::fibers::{fiber_leq, meet, pullback_map, Carrier, ERel, EqRel, FiberKind, FiberObject, Metric};
use crate::modality::{d_asym, IElem, ModalityFamily, TauEval, TruthObject};
use crate::transport::{hausdorff_by, kantorovich_value};

/// Limit on enumerated candidate maps.
pub const MAP_GUARD: u128 = 1 << 20;
/// Limit on enumerated elements of `F(X)`.
pub const ELEM_GUARD: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct LiftingSpec {
    pub behavior: FunctorDesc,
    pub truth: TruthObject,
    pub tau: ModalityFamily,
    pub kind: FiberKind,
}

impl LiftingSpec {
    pub fn kripke() -> Self {
        LiftingSpec {
            behavior: FunctorDesc::P,
            truth: TruthObject::eq2(),
            tau: ModalityFamily::diamond(),
            kind: FiberKind::EqRel,
        }
    }

    pub fn kripke_erel() -> Self {
        LiftingSpec {
            behavior: FunctorDesc::P,
            truth: TruthObject::eq2_erel(),
            tau: ModalityFamily::diamond(),
            kind: FiberKind::ERel,
        }
    }

    pub fn da_eq(alphabet: &[String]) -> Self {
        LiftingSpec {
            behavior: FunctorDesc::Fda { alphabet: alphabet.to_vec(), w: 1.0 },
            truth: TruthObject::eq2(),
            tau: ModalityFamily::da(alphabet, 1.0, 1.0),
            kind: FiberKind::EqRel,
        }
    }

    pub fn da_erel(alphabet: &[String]) -> Self {
        LiftingSpec { truth: TruthObject::eq2_erel(), kind: FiberKind::ERel, ..Self::da_eq(alphabet) }
    }

    pub fn da_pmet(alphabet: &[String], w: f64) -> Result<Self> {
        Ok(LiftingSpec {
            behavior: FunctorDesc::fda(alphabet.to_vec(), w)?,
            truth: TruthObject::IntervalEuclid,
            tau: ModalityFamily::da(alphabet, w, 1.0),
            kind: FiberKind::PMet,
        })
    }

    /// Acceptance is cast by `true ↦ 0`, `false ↦ 1`.
    pub fn da_lmet(alphabet: &[String], w: f64) -> Result<Self> {
        Ok(LiftingSpec {
            behavior: FunctorDesc::fda(alphabet.to_vec(), w)?,
            truth: TruthObject::IntervalAsym,
            tau: ModalityFamily::da(alphabet, w, 0.0),
            kind: FiberKind::LMet,
        })
    }

    pub fn kantorovich() -> Self {
        LiftingSpec {
            behavior: FunctorDesc::D,
            truth: TruthObject::IntervalEuclid,
            tau: ModalityFamily::expectation(),
            kind: FiberKind::PMet,
        }
    }

    pub fn hausdorff() -> Self {
        LiftingSpec {
            behavior: FunctorDesc::P,
            truth: TruthObject::IntervalEuclid,
            tau: ModalityFamily::infimum(),
            kind: FiberKind::PMet,
        }
    }

    pub fn mdp() -> Self {
        LiftingSpec {
            behavior: FunctorDesc::PD,
            truth: TruthObject::IntervalEuclid,
            tau: ModalityFamily::inf_expectation(),
            kind: FiberKind::PMet,
        }
    }

    /// Whether the combination is one this library knows how to lift.
    pub fn validate(&self) -> Result<()> {
        use FunctorDesc as F;
        use TauEval as T;
        let taus = &self.tau.evals;
        let all = |p: fn(&TauEval) -> bool| !taus.is_empty() && taus.iter().all(p);
        let ok = match (&self.behavior, &self.truth) {
            (F::P, TruthObject::Finite(o)) => o.size() == 2 && all(|t| matches!(t, T::Diamond)),
            (F::Fda { alphabet, .. }, TruthObject::Finite(o)) => o.size() == 2 && da_family_ok(taus, alphabet.len()),
            (F::Fda { alphabet, .. }, TruthObject::IntervalEuclid | TruthObject::IntervalAsym) => {
                da_family_ok(taus, alphabet.len())
            }
            (F::D, TruthObject::IntervalEuclid) => all(|t| matches!(t, T::Expectation)),
            (F::P, TruthObject::IntervalEuclid) => all(|t| matches!(t, T::Infimum)),
            (F::PD, TruthObject::IntervalEuclid) => all(|t| matches!(t, T::InfExpectation)),
            _ => false,
        };
        let kind_ok = self.kind == self.truth.fiber_kind();
        if ok && kind_ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "lifting of {} to {} with truth object {} and modalities {:?}",
                self.behavior.name(),
                self.kind,
                self.truth.name(),
                self.tau.evals
            )))
        }
    }

    pub fn weight(&self) -> f64 {
        match self.behavior {
            FunctorDesc::Fda { w, .. } => w,
            _ => 1.0,
        }
    }
}

fn da_family_ok(taus: &[TauEval], k: usize) -> bool {
    taus.len() == k + 1
        && matches!(taus[0], TauEval::DaAcc { .. })
        && taus[1..].iter().enumerate().all(|(i, t)| matches!(t, TauEval::DaStep { sym, .. } if *sym == i))
}

/// All maps `k: X → Ω` with `P ⊑ k*Ω`, in lexicographic order of their tables.
pub fn decent_maps(p: &FiberObject, omega: &FiberObject, limit: u128) -> Result<Vec<Vec<usize>>> {
    if p.kind() != omega.kind() {
        return Err(Error::KindMismatch { left: p.kind(), right: omega.kind() });
    }
    let (n, m) = (p.size(), omega.size());
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(
        x: usize,
        cur: &mut Vec<usize>,
        p: &FiberObject,
        omega: &FiberObject,
        out: &mut Vec<Vec<usize>>,
        limit: u128,
    ) -> Result<()> {
        if x == cur.len() {
            if out.len() as u128 >= limit {
                return Err(Error::GuardExceeded { what: "decent maps".into(), needed: limit + 1, limit });
            }
            out.push(cur.clone());
            return Ok(());
        }
        for v in 0..omega.size() {
            let fits = (0..x)
                .all(|y| (!p.related(x, y) || omega.related(v, cur[y])) && (!p.related(y, x) || omega.related(cur[y], v)))
                && (!p.related(x, x) || omega.related(v, v));
            if fits {
                cur[x] = v;
                rec(x + 1, cur, p, omega, out, limit)?;
            }
        }
        Ok(())
    }
    if m == 0 && n > 0 {
        return Ok(out);
    }
    rec(0, &mut cur, p, omega, &mut out, limit)?;
    Ok(out)
}

fn require_finite(spec: &LiftingSpec) -> Result<&FiberObject> {
    spec.truth
        .finite()
        .ok_or_else(|| Error::Unsupported("interval truth objects have no brute-force lifting; use a closed form".into()))
}

/// Accumulates a meet of pulled-back relations on a fixed element list.
struct RelMeet {
    n: usize,
    labels: Vec<usize>,
    rel: Option<Vec<bool>>,
}

impl RelMeet {
    fn new(kind: FiberKind, n: usize) -> Self {
        RelMeet { n, labels: vec![0; n], rel: (kind == FiberKind::ERel).then(|| vec![true; n * n]) }
    }

    /// Intersects with the pullback of `omega` along `values`.
    fn add(&mut self, omega: &FiberObject, values: &[usize]) {
        match &mut self.rel {
            Some(rel) => {
                for i in 0..self.n {
                    for j in 0..self.n {
                        if rel[i * self.n + j] && !omega.related(values[i], values[j]) {
                            rel[i * self.n + j] = false;
                        }
                    }
                }
            }
            None => {
                let blocks = omega.as_eqrel().expect("equivalence truth object").block_of();
                let mut ids = HashMap::new();
                for i in 0..self.n {
                    let key = (self.labels[i], blocks[values[i]]);
                    let next = ids.len();
                    self.labels[i] = *ids.entry(key).or_insert(next);
                }
            }
        }
    }

    fn finish(self) -> FiberObject {
        let carrier = Carrier::new(self.n);
        match self.rel {
            Some(rel) => ERel::new(carrier, rel).expect("shape").into(),
            None => EqRel::from_labels(carrier, &self.labels).expect("shape").into(),
        }
    }
}

/// The codensity lifting by its definition, evaluated on the given elements
/// of `F(X)`: the meet over indices `a` and decent `k: P → Ω` of
/// `(τ_a ∘ Fk)*Ω`.
pub fn codlift_bruteforce_on(spec: &LiftingSpec, p: &FiberObject, elems: &[Elem]) -> Result<FiberObject> {
    spec.validate()?;
    let omega = require_finite(spec)?;
    if p.kind() != spec.kind {
        return Err(Error::KindMismatch { left: spec.kind, right: p.kind() });
    }
    let m = omega.size();
    let maps = decent_maps(p, omega, MAP_GUARD)?;
    let mut acc = RelMeet::new(spec.kind, elems.len());
    let mut values = vec![0usize; elems.len()];
    for k in &maps {
        let pushed: Vec<Elem> = elems.iter().map(|e| fmap_raw(&spec.behavior, k, m, e)).collect();
        for a in 0..spec.tau.len() {
            for (v, e) in values.iter_mut().zip(&pushed) {
                *v = spec.tau.eval_finite(a, e)?;
            }
            acc.add(omega, &values);
        }
    }
    Ok(acc.finish())
}

/// The lifting on all of `F(X)`, in [`enumerate_elems`] order.
pub fn codlift_bruteforce(spec: &LiftingSpec, p: &FiberObject) -> Result<FiberObject> {
    let elems = enumerate_elems(&spec.behavior, p.size(), ELEM_GUARD)?;
    codlift_bruteforce_on(spec, p, &elems)
}

/// Egli–Milner for an equivalence: the set of blocks each subset hits.
fn set_keys(e: &EqRel, elems: &[Elem]) -> Result<Vec<Vec<usize>>> {
    elems
        .iter()
        .map(|x| {
            let mut bs: Vec<usize> = as_set(x)?.iter().map(|&y| e.block_of()[y]).collect();
            bs.sort_unstable();
            bs.dedup();
            Ok(bs)
        })
        .collect()
}

fn da_keys(e: &EqRel, elems: &[Elem]) -> Result<Vec<Vec<usize>>> {
    elems
        .iter()
        .map(|x| {
            let (t, rho) = as_da(x)?;
            let mut k = vec![usize::from(t)];
            k.extend(rho.iter().map(|&y| e.block_of()[y]));
            Ok(k)
        })
        .collect()
}

/// Closed forms for every catalogued lifting, evaluated on the given elements.
pub fn codlift_closed_on(spec: &LiftingSpec, p: &FiberObject, elems: &[Elem]) -> Result<FiberObject> {
    spec.validate()?;
    if p.kind() != spec.kind {
        return Err(Error::KindMismatch { left: spec.kind, right: p.kind() });
    }
    let n = elems.len();
    let carrier = Carrier::new(n);
    match (&spec.behavior, p) {
        (FunctorDesc::P, FiberObject::EqRel(e)) => Ok(EqRel::from_labels(carrier, &intern(&set_keys(e, elems)?))?.into()),
        (FunctorDesc::Fda { .. }, FiberObject::EqRel(e)) => Ok(EqRel::from_labels(carrier, &intern(&da_keys(e, elems)?))?.into()),
        // Maps into the equality on 2 cannot tell a relation from its
        // equivalence closure.
        (FunctorDesc::P | FunctorDesc::Fda { .. }, FiberObject::ERel(r)) => {
            let e = EqRel::closure_of(r.carrier().clone(), r.pairs());
            let keys = if spec.behavior == FunctorDesc::P { set_keys(&e, elems)? } else { da_keys(&e, elems)? };
            Ok(EqRel::from_labels(carrier, &intern(&keys))?.to_erel().into())
        }
        (FunctorDesc::Fda { w, .. }, FiberObject::PMet(d) | FiberObject::LMet(d)) => {
            let steps: Vec<(bool, &Vec<usize>)> = elems.iter().map(as_da).collect::<Result<_>>()?;
            let asym = spec.kind == FiberKind::LMet;
            let cast = |t: bool| if t { 0.0 } else { 1.0 };
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let ((t1, r1), (t2, r2)) = (steps[i], steps[j]);
                    let acc = if asym {
                        d_asym(cast(t1), cast(t2))
                    } else if t1 == t2 {
                        0.0
                    } else {
                        1.0
                    };
                    let step = r1.iter().zip(r2.iter()).map(|(&x, &y)| d.get(x, y)).fold(0.0, f64::max);
                    out[i * n + j] = acc.max(w * step);
                }
            }
            Ok(Metric::raw(carrier, out, !asym)?.into())
        }
        (FunctorDesc::D, FiberObject::PMet(d)) => {
            let ws: Vec<&Vec<f64>> = elems.iter().map(as_dist).collect::<Result<_>>()?;
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = kantorovich_value(d, ws[i], ws[j])?;
                    out[i * n + j] = v;
                    out[j * n + i] = v;
                }
            }
            Ok(Metric::raw(carrier, out, true)?.into())
        }
        (FunctorDesc::P, FiberObject::PMet(d)) => {
            let sets: Vec<&Vec<usize>> = elems.iter().map(as_set).collect::<Result<_>>()?;
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = (sets[i], sets[j]);
                    out[i * n + j] = hausdorff_by(a.len(), b.len(), |x, y| d.get(a[x], b[y]));
                }
            }
            Ok(Metric::raw(carrier, out, true)?.into())
        }
        (FunctorDesc::PD, FiberObject::PMet(d)) => {
            let sets: Vec<&Vec<Vec<f64>>> = elems
                .iter()
                .map(|x| match x {
                    Elem::SetDist(ds) => Ok(ds),
                    _ => Err(Error::TypeMismatch(format!("{x:?} is not a set of distributions"))),
                })
                .collect::<Result<_>>()?;
            // Kantorovich distances between all distinct distributions first.
            let mut pool: Vec<&Vec<f64>> = Vec::new();
            let ids: Vec<Vec<usize>> = sets
                .iter()
                .map(|ds| {
                    ds.iter()
                        .map(|w| match pool.iter().position(|p| *p == w) {
                            Some(i) => i,
                            None => {
                                pool.push(w);
                                pool.len() - 1
                            }
                        })
                        .collect()
                })
                .collect();
            let q = pool.len();
            let mut k = vec![0.0; q * q];
            for i in 0..q {
                for j in i + 1..q {
                    let v = kantorovich_value(d, pool[i], pool[j])?;
                    k[i * q + j] = v;
                    k[j * q + i] = v;
                }
            }
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = (&ids[i], &ids[j]);
                    out[i * n + j] = hausdorff_by(a.len(), b.len(), |x, y| k[a[x] * q + b[y]]);
                }
            }
            Ok(Metric::raw(carrier, out, true)?.into())
        }
        _ => Err(Error::Unsupported(format!("no closed form for {} on {}", spec.behavior.name(), p.kind()))),
    }
}

fn intern(keys: &[Vec<usize>]) -> Vec<usize> {
    let mut ids: HashMap<&Vec<usize>, usize> = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect()
}

fn as_set(e: &Elem) -> Result<&Vec<usize>> {
    match e {
        Elem::Set(u) => Ok(u),
        _ => Err(Error::TypeMismatch(format!("{e:?} is not a subset"))),
    }
}

fn as_dist(e: &Elem) -> Result<&Vec<f64>> {
    match e {
        Elem::Dist(w) => Ok(w),
        _ => Err(Error::TypeMismatch(format!("{e:?} is not a distribution"))),
    }
}

fn as_da(e: &Elem) -> Result<(bool, &Vec<usize>)> {
    match e {
        Elem::Da { t, rho } => Ok((*t, rho)),
        _ => Err(Error::TypeMismatch(format!("{e:?} is not an automaton step"))),
    }
}

pub fn codlift_closed(spec: &LiftingSpec, p: &FiberObject) -> Result<FiberObject> {
    let elems = enumerate_elems(&spec.behavior, p.size(), ELEM_GUARD)?;
    codlift_closed_on(spec, p, &elems)
}

/// The lifting used by fixpoint iteration: brute force over finite truth
/// objects, closed form over the interval.
pub fn lift_on(spec: &LiftingSpec, p: &FiberObject, elems: &[Elem]) -> Result<FiberObject> {
    if spec.truth.is_finite() {
        codlift_bruteforce_on(spec, p, elems)
    } else {
        codlift_closed_on(spec, p, elems)
    }
}

/// A family of maps into a finite truth object, per modality index.
#[derive(Clone, Debug, PartialEq)]
pub struct SpObject {
    pub carrier: Carrier,
    pub maps: Vec<Vec<Vec<usize>>>,
}

impl SpObject {
    pub fn len(&self) -> usize {
        self.maps.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All decent maps `P → Ω(a)` for each of `indices` modality indices.
pub fn abs_(p: &FiberObject, truth: &TruthObject, indices: usize) -> Result<SpObject> {
    let omega = truth.finite().ok_or_else(|| Error::Unsupported("abs needs a finite truth object".into()))?;
    let maps = decent_maps(p, omega, MAP_GUARD)?;
    Ok(SpObject { carrier: p.carrier().clone(), maps: vec![maps; indices] })
}

/// Meet of the pullbacks `k*Ω(a)` over the family.
pub fn conc(s: &SpObject, truth: &TruthObject) -> Result<FiberObject> {
    let omega = truth.finite().ok_or_else(|| Error::Unsupported("conc needs a finite truth object".into()))?;
    let mut acc = RelMeet::new(omega.kind(), s.carrier.size());
    for family in &s.maps {
        for k in family {
            acc.add(omega, k);
        }
    }
    let out = acc.finish();
    Ok(relabel(out, &s.carrier))
}

fn relabel(o: FiberObject, carrier: &Carrier) -> FiberObject {
    let id: Vec<usize> = (0..carrier.size()).collect();
    pullback_map(&id, carrier, &o)
}

/// `{τ_a ∘ Fk | k ∈ S(a)}`, as maps on the enumerated `F(X)`.
pub fn sp_apply(spec: &LiftingSpec, s: &SpObject) -> Result<SpObject> {
    let omega = require_finite(spec)?;
    let elems = enumerate_elems(&spec.behavior, s.carrier.size(), ELEM_GUARD)?;
    let m = omega.size();
    let mut maps = Vec::with_capacity(s.maps.len());
    for (a, family) in s.maps.iter().enumerate() {
        if a >= spec.tau.len() {
            return Err(Error::TypeMismatch(format!("family has index {a} but the modality has {}", spec.tau.len())));
        }
        let mut out = Vec::with_capacity(family.len());
        for k in family {
            let row = elems
                .iter()
                .map(|e| spec.tau.eval_finite(a, &fmap_raw(&spec.behavior, k, m, e)))
                .collect::<Result<Vec<usize>>>()?;
            out.push(row);
        }
        maps.push(out);
    }
    Ok(SpObject { carrier: Carrier::new(elems.len()), maps })
}

/// `conc ∘ Sp ∘ abs` agrees with the brute-force lifting.
pub fn check_decomposition(spec: &LiftingSpec, p: &FiberObject) -> Result<bool> {
    let s = abs_(p, &spec.truth, spec.tau.len())?;
    let left = conc(&sp_apply(spec, &s)?, &spec.truth)?;
    let right = codlift_bruteforce(spec, p)?;
    Ok(left == right)
}

/// `conc(Sp(S)) ⊑ conc(Sp(abs(conc S)))`.
pub fn check_approximating(spec: &LiftingSpec, s: &SpObject) -> Result<bool> {
    let left = conc(&sp_apply(spec, s)?, &spec.truth)?;
    let closed = abs_(&conc(s, &spec.truth)?, &spec.truth, spec.tau.len())?;
    let right = conc(&sp_apply(spec, &closed)?, &spec.truth)?;
    fiber_leq(&left, &right)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalReport {
    /// Candidate is below the codensity lifting on every instance.
    pub below: bool,
    /// Every `τ_a` is decent from the candidate at `Ω`.
    pub decent: bool,
}

impl UniversalReport {
    pub fn holds(&self) -> bool {
        self.below == self.decent
    }
}

/// Checks the universal property on an instance set that must contain `Ω`.
pub fn check_universal(
    spec: &LiftingSpec,
    candidate: &dyn Fn(&FiberObject) -> Result<FiberObject>,
    instances: &[FiberObject],
) -> Result<UniversalReport> {
    let omega = require_finite(spec)?;
    if !instances.iter().any(|p| p == omega) {
        return Err(Error::Precondition("the instance set must contain the truth object".into()));
    }
    let mut below = true;
    for p in instances {
        if !fiber_leq(&candidate(p)?, &codlift_bruteforce(spec, p)?)? {
            below = false;
        }
    }
    let at_omega = candidate(omega)?;
    let elems = enumerate_elems(&spec.behavior, omega.size(), ELEM_GUARD)?;
    let mut decent = true;
    for a in 0..spec.tau.len() {
        let table: Vec<usize> = elems.iter().map(|e| spec.tau.eval_finite(a, e)).collect::<Result<_>>()?;
        let pulled = pullback_map(&table, at_omega.carrier(), omega);
        if !fiber_leq(&at_omega, &pulled)? {
            decent = false;
        }
    }
    Ok(UniversalReport { below, decent })
}

/// Embeds an equivalence into endorelations and compares the two liftings.
pub fn check_transfer(p: &EqRel, spec: &LiftingSpec) -> Result<bool> {
    let erel_spec = match &spec.behavior {
        FunctorDesc::P => LiftingSpec::kripke_erel(),
        FunctorDesc::Fda { alphabet, .. } => LiftingSpec::da_erel(alphabet),
        _ => return Err(Error::Unsupported("transfer needs a Kripke or automaton specification".into())),
    };
    if spec.kind != FiberKind::EqRel {
        return Err(Error::Unsupported("transfer starts from equivalence relations".into()));
    }
    let lifted = codlift_bruteforce(spec, &p.clone().into())?;
    let via_erel = codlift_bruteforce(&erel_spec, &p.to_erel().into())?;
    let embedded: FiberObject = lifted.as_eqrel().expect("equivalence lifting").to_erel().into();
    Ok(embedded == via_erel)
}

/// `F(k)(e)` for a real-valued `k`, as an element of `F(I)`.
pub fn push_real(e: &Elem, k: &[f64]) -> IElem {
    let atoms =
        |w: &Vec<f64>| -> Vec<(f64, f64)> { w.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(x, &p)| (k[x], p)).collect() };
    match e {
        Elem::Set(u) => IElem::Set(u.iter().map(|&x| k[x]).collect()),
        Elem::Dist(w) => IElem::Dist(atoms(w)),
        Elem::Da { t, rho } => IElem::Da { t: *t, rho: rho.iter().map(|&x| k[x]).collect() },
        Elem::SetDist(ds) => IElem::SetDist(ds.iter().map(atoms).collect()),
        Elem::Tuple(xs) => IElem::Set(xs.iter().map(|&x| k[x]).collect()),
    }
}

/// `max_a Ω(τ_a(Fk e1), τ_a(Fk e2))`: the distance one map `k` witnesses.
pub fn induced_distance(spec: &LiftingSpec, k: &[f64], e1: &Elem, e2: &Elem) -> Result<f64> {
    let (x, y) = (push_real(e1, k), push_real(e2, k));
    let mut best: f64 = 0.0;
    for a in 0..spec.tau.len() {
        let (u, v) = (spec.tau.eval_interval(a, &x)?, spec.tau.eval_interval(a, &y)?);
        best = best.max(spec.truth.dist(u, v));
    }
    Ok(best)
}

/// Candidate optimal maps: `d(x, ·)` for pseudometrics, `1 − d(·, x)` for
/// Lawvere metrics, one per point.
pub fn witness_maps(d: &Metric) -> Vec<Vec<f64>> {
    let n = d.carrier().size();
    (0..n)
        .map(|x| {
            if d.is_symmetric_kind() {
                (0..n).map(|t| d.get(x, t)).collect()
            } else {
                (0..n).map(|t| 1.0 - d.get(t, x)).collect()
            }
        })
        .collect()
}

/// A random nonexpansive map `X → [0,1]` for the metric's own notion of
/// nonexpansiveness.
pub fn random_nonexpansive<R: Rng>(d: &Metric, rng: &mut R) -> Vec<f64> {
    let n = d.carrier().size();
    let anchors = rng.gen_range(1..=n.max(1));
    let mut k = vec![1.0f64; n];
    for _ in 0..anchors {
        let x = rng.gen_range(0..n);
        let c: f64 = rng.gen_range(0.0..1.0);
        for (t, v) in k.iter_mut().enumerate() {
            *v = v.min(c + d.get(x, t));
        }
    }
    k
}

pub fn is_nonexpansive(d: &Metric, k: &[f64], tol: f64) -> bool {
    let n = d.carrier().size();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let gap = if d.is_symmetric_kind() { (k[x] - k[y]).abs() } else { (k[y] - k[x]).max(0.0) };
            gap <= d.get(x, y) + tol
        })
    })
}

/// Meet of two objects of the same kind; convenience for callers.
pub fn meet2(a: &FiberObject, b: &FiberObject) -> Result<FiberObject> {
    meet(a.kind(), a.carrier(), &[a.clone(), b.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibers::all_eqrels;

    fn eq(n: usize, labels: &[usize]) -> FiberObject {
        EqRel::from_labels(Carrier::new(n), labels).unwrap().into()
    }

    #[test]
    fn diagonal_lifts_to_diagonal() {
        let l = codlift_bruteforce(&LiftingSpec::kripke(), &eq(2, &[0, 1])).unwrap();
        assert_eq!(l, EqRel::diagonal(Carrier::new(4)).into());
    }

    #[test]
    fn total_lifts_to_emptiness_test() {
        let l = codlift_bruteforce(&LiftingSpec::kripke(), &eq(2, &[0, 0])).unwrap();
        // elements: {}, {0}, {1}, {0,1}
        let e = l.as_eqrel().unwrap();
        assert!(!e.related(0, 1));
        assert!(e.related(1, 2) && e.related(2, 3));
    }

    #[test]
    fn empty_carrier() {
        let l = codlift_bruteforce(&LiftingSpec::kripke(), &eq(0, &[])).unwrap();
        assert_eq!(l, EqRel::total(Carrier::new(1)).into());
    }

    #[test]
    fn closed_forms_match_bruteforce() {
        let ab = vec!["a".to_string(), "b".to_string()];
        for n in 0..=4 {
            for p in all_eqrels(n) {
                let p: FiberObject = p.into();
                for spec in [LiftingSpec::kripke(), LiftingSpec::da_eq(&ab)] {
                    if n == 4 && spec.behavior != FunctorDesc::P {
                        continue;
                    }
                    assert_eq!(codlift_bruteforce(&spec, &p).unwrap(), codlift_closed(&spec, &p).unwrap());
                }
            }
        }
    }

    #[test]
    fn da_metric_closed_form() {
        let spec = LiftingSpec::da_pmet(&["a".to_string()], 0.5).unwrap();
        let d = Metric::pmet(Carrier::new(2), vec![0.0, 0.4, 0.4, 0.0]).unwrap();
        let elems = [Elem::Da { t: true, rho: vec![0] }, Elem::Da { t: true, rho: vec![1] }];
        let l = codlift_closed_on(&spec, &d.into(), &elems).unwrap();
        assert!((l.distance(0, 1) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_against_empty() {
        let d = Metric::discrete(Carrier::new(2), true);
        let l = codlift_closed_on(&LiftingSpec::hausdorff(), &d.into(), &[Elem::Set(vec![]), Elem::Set(vec![0])]).unwrap();
        assert_eq!(l.distance(0, 1), 1.0);
    }

    #[test]
    fn abs_and_sp_apply() {
        let s = abs_(&eq(2, &[0, 1]), &TruthObject::eq2(), 1).unwrap();
        assert_eq!(s.maps[0].len(), 4);
        let single = SpObject { carrier: Carrier::new(2), maps: vec![vec![vec![0, 1]]] };
        let img = sp_apply(&LiftingSpec::kripke(), &single).unwrap();
        assert_eq!(img.maps[0], vec![vec![0, 0, 1, 1]]);
    }

    #[test]
    fn galois_identity() {
        for n in 0..=5 {
            for p in all_eqrels(n) {
                let p: FiberObject = p.into();
                let back = conc(&abs_(&p, &TruthObject::eq2(), 1).unwrap(), &TruthObject::eq2()).unwrap();
                assert_eq!(back, p);
            }
        }
    }

    #[test]
    fn decomposition_and_approximation() {
        for p in all_eqrels(3) {
            let p: FiberObject = p.into();
            assert!(check_decomposition(&LiftingSpec::kripke(), &p).unwrap());
            let s = abs_(&p, &TruthObject::eq2(), 1).unwrap();
            assert!(check_approximating(&LiftingSpec::kripke(), &s).unwrap());
        }
        let empty = SpObject { carrier: Carrier::new(2), maps: vec![vec![]] };
        // Constant maps still see emptiness, which the empty family does not.
        assert!(!check_approximating(&LiftingSpec::kripke(), &empty).unwrap());
    }

    #[test]
    fn universal_property() {
        let spec = LiftingSpec::kripke();
        let omega = spec.truth.finite().unwrap().clone();
        let instances = vec![omega.clone(), eq(2, &[0, 0]), eq(3, &[0, 1, 0])];
        let itself = |p: &FiberObject| codlift_bruteforce(&spec, p);
        let r = check_universal(&spec, &itself, &instances).unwrap();
        assert!(r.below && r.decent);
        let top = |p: &FiberObject| Ok(FiberObject::top(FiberKind::EqRel, Carrier::new(1 << p.size())));
        let r = check_universal(&spec, &top, &instances).unwrap();
        assert!(!r.below && !r.decent && r.holds());
        let bottom = |p: &FiberObject| Ok(FiberObject::bottom(FiberKind::EqRel, Carrier::new(1 << p.size())));
        let r = check_universal(&spec, &bottom, &instances).unwrap();
        assert!(r.below && r.decent);
        assert!(check_universal(&spec, &itself, &instances[1..]).is_err());
    }

    #[test]
    fn transfer_small() {
        for n in 0..=3 {
            for p in all_eqrels(n) {
                assert!(check_transfer(&p, &LiftingSpec::kripke()).unwrap());
            }
        }
    }

    #[test]
    fn interval_has_no_bruteforce() {
        let d = Metric::discrete(Carrier::new(2), true);
        assert!(codlift_bruteforce(&LiftingSpec::hausdorff(), &d.into()).is_err());
    }

    #[test]
    fn decent_map_counts() {
        assert_eq!(decent_maps(&eq(4, &[0, 1, 0, 2]), TruthObject::eq2().finite().unwrap(), 1 << 20).unwrap().len(), 8);
        let r: FiberObject = ERel::from_pairs(Carrier::new(3), [(0, 1)]).unwrap().into();
        let omega = TruthObject::eq2_erel().finite().unwrap().clone();
        assert_eq!(decent_maps(&r, &omega, 1 << 20).unwrap().len(), 4);
    }
}
