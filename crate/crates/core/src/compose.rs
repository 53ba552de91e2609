//! Distributive laws, composed systems, product liftings of structure
//! modalities, and the liftability checker.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::behavior::{enumerate_elems, fmap_raw, tuples, DASystem, Dist, Elem, FunctorDesc, KripkeSystem, MDPSystem, System};
use crate::codensity::{
    check_approximating, codlift_closed_on, conc, decent_maps, random_nonexpansive, LiftingSpec, SpObject, MAP_GUARD,
};
use crate::error::{Error, Result};
use crate::fibers::{all_eqrels, meet, pullback_map, Carrier, FiberKind, FiberObject, Metric};
use crate::gen;
use crate::modality::{check_commutation, grid, ModalityFamily, SigmaOp, StructModality, TruthObject, GRID_STEP, RANDOM_SAMPLES};
use crate::transport::kantorovich_value;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistLaw {
    LamP,
    LamDA,
    LamD,
    LamPD,
}

impl DistLaw {
    pub fn name(self) -> &'static str {
        match self {
            DistLaw::LamP => "LamP",
            DistLaw::LamDA => "LamDA",
            DistLaw::LamD => "LamD",
            DistLaw::LamPD => "LamPD",
        }
    }

    pub fn for_functor(f: &FunctorDesc) -> Result<Self> {
        match f {
            FunctorDesc::P => Ok(DistLaw::LamP),
            FunctorDesc::Fda { .. } => Ok(DistLaw::LamDA),
            FunctorDesc::D => Ok(DistLaw::LamD),
            FunctorDesc::PD => Ok(DistLaw::LamPD),
            FunctorDesc::Product(_) => Err(Error::Unsupported("no distributive law for product functors".into())),
        }
    }

    pub fn check_functor(self, f: &FunctorDesc) -> Result<()> {
        if DistLaw::for_functor(f)? == self {
            Ok(())
        } else {
            Err(Error::TypeMismatch(format!("{} does not distribute over {}", self.name(), f.name())))
        }
    }
}

/// Product distribution, indexed `x * n2 + y`.
pub fn product_weights(w1: &[f64], w2: &[f64]) -> Vec<f64> {
    w1.iter().flat_map(|&p| w2.iter().map(move |&q| p * q)).collect()
}

/// `λ(x, y)` with the product carrier indexed `x * n2 + y`.
pub fn apply_law(law: DistLaw, x: &Elem, y: &Elem, n2: usize) -> Result<Elem> {
    let mismatch = || Error::TypeMismatch(format!("{} cannot combine {x:?} and {y:?}", law.name()));
    match (law, x, y) {
        (DistLaw::LamP, Elem::Set(u), Elem::Set(v)) => {
            Ok(Elem::Set(u.iter().flat_map(|&a| v.iter().map(move |&b| a * n2 + b)).collect()))
        }
        (DistLaw::LamDA, Elem::Da { t: t1, rho: r1 }, Elem::Da { t: t2, rho: r2 }) => {
            if r1.len() != r2.len() {
                return Err(mismatch());
            }
            Ok(Elem::Da { t: *t1 && *t2, rho: r1.iter().zip(r2).map(|(&a, &b)| a * n2 + b).collect() })
        }
        (DistLaw::LamD, Elem::Dist(w1), Elem::Dist(w2)) => {
            if w2.len() != n2 {
                return Err(mismatch());
            }
            Ok(Elem::Dist(product_weights(w1, w2)))
        }
        (DistLaw::LamPD, Elem::SetDist(a), Elem::SetDist(b)) => {
            if b.iter().any(|w| w.len() != n2) {
                return Err(mismatch());
            }
            Ok(Elem::set_dist(a.iter().flat_map(|w1| b.iter().map(move |w2| product_weights(w1, w2))).collect()))
        }
        _ => Err(mismatch()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositionOp {
    pub arity: usize,
    pub law: DistLaw,
}

impl CompositionOp {
    pub fn binary(law: DistLaw) -> Self {
        CompositionOp { arity: 2, law }
    }

    /// The binary product composition for a system kind.
    pub fn for_system(s: &System) -> Self {
        CompositionOp::binary(match s {
            System::Kripke(_) => DistLaw::LamP,
            System::Da(_) => DistLaw::LamDA,
            System::Mdp(_) => DistLaw::LamPD,
        })
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if self.arity != 2 {
            return Err(Error::Unsupported(format!("{}-ary composition; only binary laws are catalogued", self.arity)));
        }
        if n != self.arity {
            return Err(Error::TypeMismatch(format!("{n} components for a {}-ary composition", self.arity)));
        }
        Ok(())
    }
}

/// `X × Y`, indexed `x * |Y| + y`; labelled when either side is.
pub fn product_carrier(a: &Carrier, b: &Carrier) -> Carrier {
    if a.labels().is_none() && b.labels().is_none() {
        return Carrier::new(a.size() * b.size());
    }
    let labels = (0..a.size()).flat_map(|x| (0..b.size()).map(move |y| format!("({},{})", a.label(x), b.label(y)))).collect();
    Carrier::labelled(labels).unwrap_or_else(|_| Carrier::new(a.size() * b.size()))
}

/// The system `λ ∘ T(c₁, c₂)` on the product carrier.
pub fn compose_systems(systems: &[System], op: CompositionOp) -> Result<System> {
    op.check_arity(systems.len())?;
    for s in systems {
        s.ensure_valid()?;
    }
    let (s1, s2) = (&systems[0], &systems[1]);
    let carrier = product_carrier(s1.carrier(), s2.carrier());
    let n2 = s2.size();
    let pairs = || (0..s1.size()).flat_map(move |x| (0..n2).map(move |y| (x, y)));
    match (s1, s2, op.law) {
        (System::Kripke(a), System::Kripke(b), DistLaw::LamP) => {
            let succ = pairs()
                .map(|(x, y)| a.succ[x].iter().flat_map(|&u| b.succ[y].iter().map(move |&v| u * n2 + v)).collect::<Vec<_>>())
                .map(|mut v| {
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect();
            Ok(System::Kripke(KripkeSystem { carrier, succ }))
        }
        (System::Da(a), System::Da(b), DistLaw::LamDA) => {
            if a.alphabet != b.alphabet {
                return Err(Error::TypeMismatch(format!("alphabets differ: {:?} vs {:?}", a.alphabet, b.alphabet)));
            }
            let accepting = pairs().map(|(x, y)| a.accepting[x] && b.accepting[y]).collect();
            let delta = pairs().map(|(x, y)| a.delta[x].iter().zip(&b.delta[y]).map(|(&u, &v)| u * n2 + v).collect()).collect();
            Ok(System::Da(DASystem { carrier, alphabet: a.alphabet.clone(), accepting, delta }))
        }
        (System::Mdp(a), System::Mdp(b), DistLaw::LamPD) => {
            let choices = pairs()
                .map(|(x, y)| {
                    let mut out: Vec<Dist> = Vec::new();
                    for m1 in &a.choices[x] {
                        for m2 in &b.choices[y] {
                            let d = Dist::new(carrier.clone(), product_weights(m1.weights(), m2.weights()))?;
                            if !out.contains(&d) {
                                out.push(d);
                            }
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;
            Ok(System::Mdp(MDPSystem { carrier, choices }))
        }
        _ => Err(Error::TypeMismatch(format!("cannot compose {} with {} using {}", s1.kind(), s2.kind(), op.law.name()))),
    }
}

/// Interval modalities whose product form `σ(d₁, d₂)` is itself a lifting.
pub fn has_product_form(op: &SigmaOp) -> bool {
    matches!(op, SigmaOp::SigmaOplus | SigmaOp::SigmaAv | SigmaOp::SigmaOr)
}

/// The modality whose product form gives the lifting of `sigma`, through the
/// isomorphism `a ↦ 1 − a` where needed.
pub fn bridged(sigma: &StructModality, kind: FiberKind) -> Result<StructModality> {
    let op = match (&sigma.op, kind) {
        (SigmaOp::SigmaOtimes, FiberKind::PMet) => SigmaOp::SigmaOplus,
        (SigmaOp::SigmaAnd, FiberKind::PMet | FiberKind::LMet) => SigmaOp::SigmaOr,
        (SigmaOp::SigmaOtimes, FiberKind::LMet) => {
            return Err(Error::Unsupported("otimes has no catalogued lifting on Lawvere metrics".into()))
        }
        (op, _) => op.clone(),
    };
    Ok(StructModality { op, arity: sigma.arity })
}

/// `P ×̇ Q`: the meet of the pullbacks along both projections.
pub fn fiber_product(p: &FiberObject, q: &FiberObject) -> Result<FiberObject> {
    if p.kind() != q.kind() {
        return Err(Error::KindMismatch { left: p.kind(), right: q.kind() });
    }
    let carrier = product_carrier(p.carrier(), q.carrier());
    let (n1, n2) = (p.size(), q.size());
    let pi1: Vec<usize> = (0..n1 * n2).map(|i| i / n2.max(1)).collect();
    let pi2: Vec<usize> = (0..n1 * n2).map(|i| i % n2.max(1)).collect();
    meet(p.kind(), &carrier, &[pullback_map(&pi1, &carrier, p), pullback_map(&pi2, &carrier, q)])
}

/// The product lifting: componentwise for relations under conjunction,
/// `σ(d₁, d₂)` for metrics.
pub fn product_lift(sigma: &StructModality, ps: &[FiberObject]) -> Result<FiberObject> {
    if ps.len() != 2 || sigma.arity != 2 {
        return Err(Error::Unsupported("product liftings are binary".into()));
    }
    let (p, q) = (&ps[0], &ps[1]);
    if p.kind() != q.kind() {
        return Err(Error::KindMismatch { left: p.kind(), right: q.kind() });
    }
    match (p, q) {
        (FiberObject::PMet(a), FiberObject::PMet(b)) | (FiberObject::LMet(a), FiberObject::LMet(b)) => {
            if !has_product_form(&sigma.op) {
                return Err(Error::Unsupported(format!(
                    "{} has no product form; its lifting is obtained from the bridged modality",
                    sigma.name()
                )));
            }
            let (n1, n2) = (a.carrier().size(), b.carrier().size());
            let n = n1 * n2;
            let mut d = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    d[i * n + j] = sigma.real2(a.get(i / n2, j / n2), b.get(i % n2, j % n2));
                }
            }
            Ok(Metric::raw(product_carrier(a.carrier(), b.carrier()), d, a.is_symmetric_kind())?.into())
        }
        _ => {
            if sigma.op != SigmaOp::And {
                return Err(Error::Unsupported(format!("{} has no componentwise product on relations", sigma.name())));
            }
            fiber_product(p, q)
        }
    }
}

/// The 2-codensity lifting of `σ` by brute force: the meet of
/// `(σ ∘ (k₁ × k₂))*Ω` over decent `k₁`, `k₂`.
pub fn ncodlift_bruteforce(sigma: &StructModality, truth: &TruthObject, ps: &[FiberObject]) -> Result<FiberObject> {
    let omega = truth.finite().ok_or_else(|| Error::Unsupported("brute force needs a finite truth object".into()))?;
    if ps.len() != 2 {
        return Err(Error::Unsupported("product liftings are binary".into()));
    }
    let k1 = decent_maps(&ps[0], omega, MAP_GUARD)?;
    let k2 = decent_maps(&ps[1], omega, MAP_GUARD)?;
    let needed = k1.len() as u128 * k2.len() as u128;
    if needed > MAP_GUARD {
        return Err(Error::GuardExceeded { what: "pairs of decent maps".into(), needed, limit: MAP_GUARD });
    }
    let maps = combine_maps(&k1, &k2, &sigma_table(sigma, omega.size())?, omega.size());
    let carrier = product_carrier(ps[0].carrier(), ps[1].carrier());
    conc(&SpObject { carrier, maps: vec![maps] }, truth)
}

/// `σ ∘ (k₁ × k₂)` for every pair, as tables on the product carrier.
fn combine_maps(k1: &[Vec<usize>], k2: &[Vec<usize>], table: &[usize], m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(k1.len() * k2.len());
    for a in k1 {
        for b in k2 {
            out.push(a.iter().flat_map(|&u| b.iter().map(move |&v| table[u * m + v])).collect());
        }
    }
    out
}

fn sigma_table(sigma: &StructModality, m: usize) -> Result<Vec<usize>> {
    (0..m * m).map(|i| sigma.eval_finite(&[i / m, i % m])).collect()
}

/// The σ-lifting used to combine component bisimilarities.
pub fn structure_lift(sigma: &StructModality, truth: &TruthObject, ps: &[FiberObject]) -> Result<FiberObject> {
    match truth {
        TruthObject::Finite(_) if sigma.op == SigmaOp::And => product_lift(sigma, ps),
        TruthObject::Finite(_) => ncodlift_bruteforce(sigma, truth, ps),
        _ => {
            let kind = ps.first().map(FiberObject::kind).unwrap_or(FiberKind::PMet);
            product_lift(&bridged(sigma, kind)?, ps)
        }
    }
}

/// Whether the 2-codensity lifting at `(Ω, Ω)` is `Ω ×̇ Ω`.
pub fn check_product_at_omega(sigma: &StructModality, truth: &TruthObject) -> Result<bool> {
    let omega = truth.finite().ok_or_else(|| Error::Unsupported("needs a finite truth object".into()))?;
    let lifted = ncodlift_bruteforce(sigma, truth, &[omega.clone(), omega.clone()])?;
    Ok(lifted == fiber_product(omega, omega)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftabilityOptions {
    pub instances: usize,
    pub seed: u64,
    pub samples: usize,
    /// Largest component carrier in the exhaustive relation checks.
    pub max_pair_size: usize,
    pub tol: f64,
}

impl Default for LiftabilityOptions {
    fn default() -> Self {
        LiftabilityOptions { instances: 100, seed: 0, samples: RANDOM_SAMPLES, max_pair_size: 4, tol: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JoinConditions {
    pub tau_joins: Verdict,
    pub meet_below_join: Verdict,
    pub decomposition: Verdict,
}

impl JoinConditions {
    pub fn all(&self) -> Verdict {
        self.tau_joins.clone().and(self.meet_below_join.clone()).and(self.decomposition.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftabilityReport {
    pub condition1: Verdict,
    pub condition2: Verdict,
    pub join_conditions: Option<JoinConditions>,
    pub direct_check: Option<Verdict>,
    pub overall: Verdict,
    pub per_index: Vec<(String, Verdict)>,
    pub notes: Vec<String>,
}

/// Components and sampled elements for one instance of the lifted law.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub objects: Vec<FiberObject>,
    pub elems: Vec<Vec<Elem>>,
}

fn check_catalogue(spec: &LiftingSpec, op: CompositionOp, sigma: &StructModality) -> Result<()> {
    spec.validate()?;
    op.check_arity(2)?;
    op.law.check_functor(&spec.behavior)?;
    if sigma.is_finite() != spec.truth.is_finite() {
        return Err(Error::Unsupported(format!("{} does not act on {}", sigma.name(), spec.truth.name())));
    }
    Ok(())
}

/// Seeded instances of the lifted law for a specification.
pub fn generate_instances(spec: &LiftingSpec, count: usize, seed: u64) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let max_n = match spec.behavior {
        FunctorDesc::P | FunctorDesc::Fda { .. } if spec.truth.is_finite() => 3,
        _ => 4,
    };
    let per_component = if spec.behavior == FunctorDesc::PD { 3 } else { 6 };
    for _ in 0..count {
        let mut objects = Vec::new();
        let mut elems = Vec::new();
        for _ in 0..2 {
            let n = rng.gen_range(1..=max_n);
            objects.push(gen::random_object(&mut rng, spec.kind, n));
            let es = match enumerate_elems(&spec.behavior, n, 4 * per_component as u128) {
                Ok(all) if all.len() <= per_component => all,
                Ok(all) => sample(&mut rng, all.len(), per_component).into_iter().map(|i| all[i].clone()).collect(),
                Err(_) => (0..per_component).map(|_| gen::random_elem(&mut rng, &spec.behavior, n)).collect(),
            };
            elems.push(es);
        }
        out.push(Instance { objects, elems });
    }
    Ok(out)
}

/// Checks `σ-product of lifted components ⊑ λ*(lifting of the σ-product)` on
/// each instance.
pub fn check_lifted_law_direct(
    spec: &LiftingSpec,
    op: CompositionOp,
    sigma: &StructModality,
    instances: &[Instance],
    tol: f64,
) -> Result<Verdict> {
    check_catalogue(spec, op, sigma)?;
    let tol = if spec.kind.is_metric() { tol } else { 0.0 };
    for (id, inst) in instances.iter().enumerate() {
        if inst.objects.len() != 2 || inst.elems.len() != 2 {
            return Err(Error::TypeMismatch("instances have two components".into()));
        }
        let lifted: Vec<FiberObject> =
            (0..2).map(|i| codlift_closed_on(spec, &inst.objects[i], &inst.elems[i])).collect::<Result<_>>()?;
        let left = structure_lift(sigma, &spec.truth, &lifted)?;
        let product = structure_lift(sigma, &spec.truth, &inst.objects)?;
        let n2 = inst.objects[1].size();
        let mut images = Vec::new();
        for x in &inst.elems[0] {
            for y in &inst.elems[1] {
                images.push(apply_law(op.law, x, y, n2)?);
            }
        }
        let right = codlift_closed_on(spec, &product, &images)?;
        let right = pullback_map(&(0..images.len()).collect::<Vec<_>>(), left.carrier(), &right);
        let gap = left.leq_violation(&right)?;
        if gap > tol {
            let (bad_i, bad_j) = worst_pair(&left, &right);
            let m = inst.elems[1].len();
            return Ok(Verdict::Refuted(format!(
                "instance {id}: pair ({:?}, {:?}) vs ({:?}, {:?}) violates the lifted law by {gap:.3e}",
                inst.elems[0][bad_i / m],
                inst.elems[1][bad_i % m],
                inst.elems[0][bad_j / m],
                inst.elems[1][bad_j % m]
            )));
        }
    }
    Ok(if spec.truth.is_finite() { Verdict::VerifiedExhaustive } else { Verdict::VerifiedSampled })
}

fn worst_pair(left: &FiberObject, right: &FiberObject) -> (usize, usize) {
    let n = left.size();
    let mut best = (0, 0, f64::MIN);
    for i in 0..n {
        for j in 0..n {
            let gap = if left.kind().is_metric() {
                left.distance(i, j) - right.distance(i, j)
            } else if left.related(i, j) && !right.related(i, j) {
                1.0
            } else {
                0.0
            };
            if gap > best.2 {
                best = (i, j, gap);
            }
        }
    }
    (best.0, best.1)
}

/// Three clauses sufficient for the approximating condition, over finite
/// two-element truth objects.
fn join_conditions(spec: &LiftingSpec, sigma: &StructModality, max_pair: usize) -> Result<JoinConditions> {
    let omega = spec.truth.finite().expect("finite truth object");
    if omega.size() != 2 || !omega.related(0, 0) || omega.related(0, 1) {
        let na = Verdict::NotApplicable("join conditions need the two-element truth object".into());
        return Ok(JoinConditions { tau_joins: na.clone(), meet_below_join: na.clone(), decomposition: na });
    }
    let mut tau_joins = Verdict::VerifiedExhaustive;
    let mut meet_below_join = Verdict::VerifiedExhaustive;
    'sizes: for m in 0..=3usize {
        let elems = enumerate_elems(&spec.behavior, m, 1 << 12)?;
        let maps = tuples(2, m);
        for family in 0u32..(1u32 << maps.len()) {
            let members: Vec<&Vec<usize>> = (0..maps.len()).filter(|i| family >> i & 1 == 1).map(|i| &maps[i]).collect();
            let join: Vec<usize> = (0..m).map(|x| usize::from(members.iter().any(|f| f[x] == 1))).collect();
            // Meet of kernels against the kernel of the join.
            let below = (0..m).all(|x| (0..m).all(|y| !members.iter().all(|f| f[x] == f[y]) || join[x] == join[y]));
            if !below && meet_below_join.is_verified() {
                meet_below_join = Verdict::Inconclusive(format!("family {members:?} on {m} points"));
            }
            if members.is_empty() || !tau_joins.is_verified() {
                continue;
            }
            for e in &elems {
                for a in 0..spec.tau.len() {
                    let lhs = spec.tau.eval_finite(a, &fmap_raw(&spec.behavior, &join, 2, e))?;
                    let mut rhs = 0;
                    for f in &members {
                        rhs |= spec.tau.eval_finite(a, &fmap_raw(&spec.behavior, f, 2, e))?;
                    }
                    if lhs != rhs {
                        tau_joins = Verdict::Inconclusive(format!(
                            "index {} does not preserve the join of {members:?} at {e:?}",
                            spec.tau.indices[a]
                        ));
                        continue 'sizes;
                    }
                }
            }
        }
    }
    let decomposition = decomposition_clause(spec, sigma, max_pair)?;
    Ok(JoinConditions { tau_joins, meet_below_join, decomposition })
}

fn as_mask(k: &[usize]) -> u64 {
    k.iter().enumerate().fold(0, |acc, (i, &v)| acc | ((v as u64 & 1) << i))
}

/// Every decent `k` on `conc(S)` is the join of the members of `S` below it.
fn decomposition_clause(spec: &LiftingSpec, sigma: &StructModality, max_pair: usize) -> Result<Verdict> {
    let omega = spec.truth.finite().expect("finite truth object");
    let table = sigma_table(sigma, 2)?;
    for n1 in 1..=max_pair {
        for n2 in 1..=max_pair {
            if n1 * n2 > 64 {
                continue;
            }
            for p in all_eqrels(n1) {
                for q in all_eqrels(n2) {
                    let (p, q): (FiberObject, FiberObject) = if spec.kind == FiberKind::ERel {
                        (p.to_erel().into(), q.to_erel().into())
                    } else {
                        (p.clone().into(), q.into())
                    };
                    let k1 = decent_maps(&p, omega, MAP_GUARD)?;
                    let k2 = decent_maps(&q, omega, MAP_GUARD)?;
                    let members = combine_maps(&k1, &k2, &table, 2);
                    let carrier = product_carrier(p.carrier(), q.carrier());
                    let s = SpObject { carrier, maps: vec![members.clone()] };
                    let closed = conc(&s, &spec.truth)?;
                    let masks: Vec<u64> = members.iter().map(|g| as_mask(g)).collect();
                    for k in decent_maps(&closed, omega, MAP_GUARD)? {
                        let km = as_mask(&k);
                        let cover = masks.iter().filter(|&&g| g & !km == 0).fold(0, |acc, &g| acc | g);
                        if cover != km {
                            return Ok(Verdict::Inconclusive(format!(
                                "decent map {k:?} on a {n1}x{n2} product is not a join of composed maps"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::VerifiedExhaustive)
}

/// The approximating condition on every pair of equivalences whose product
/// carrier has at most `limit` points.
fn approximating_small(spec: &LiftingSpec, sigma: &StructModality, max_side: usize, limit: usize) -> Result<Verdict> {
    let omega = spec.truth.finite().expect("finite truth object");
    let table = sigma_table(sigma, omega.size())?;
    let m = omega.size();
    for n1 in 1..=max_side {
        for n2 in 1..=max_side.min(limit / n1) {
            for p in all_eqrels(n1) {
                for q in all_eqrels(n2) {
                    let (p, q): (FiberObject, FiberObject) = if spec.kind == FiberKind::ERel {
                        (p.to_erel().into(), q.to_erel().into())
                    } else {
                        (p.clone().into(), q.into())
                    };
                    let k1 = decent_maps(&p, omega, MAP_GUARD)?;
                    let k2 = decent_maps(&q, omega, MAP_GUARD)?;
                    let members = combine_maps(&k1, &k2, &table, m);
                    let s = SpObject { carrier: product_carrier(p.carrier(), q.carrier()), maps: vec![members; spec.tau.len()] };
                    if !check_approximating(spec, &s)? {
                        return Ok(Verdict::Refuted(format!("not approximating on the {n1}x{n2} instance {p:?}, {q:?}")));
                    }
                }
            }
        }
    }
    Ok(Verdict::VerifiedExhaustive)
}

fn condition1(
    spec: &LiftingSpec,
    law: DistLaw,
    sigma: &StructModality,
    options: &LiftabilityOptions,
) -> Result<Vec<(String, Verdict)>> {
    if law == DistLaw::LamPD {
        let mut out = Vec::new();
        for (layer, m, l, f) in [
            ("P", ModalityFamily::infimum(), DistLaw::LamP, FunctorDesc::P),
            ("D", ModalityFamily::expectation(), DistLaw::LamD, FunctorDesc::D),
        ] {
            for (idx, v) in check_commutation(sigma, &m, l, &f, &spec.truth, options.samples, options.seed)? {
                out.push((format!("{layer}:{idx}"), v));
            }
        }
        return Ok(out);
    }
    check_commutation(sigma, &spec.tau, law, &spec.behavior, &spec.truth, options.samples, options.seed)
}

/// Checks the two sufficient conditions for `σ` to lift `λ`, plus the lifted
/// law itself on seeded instances.
pub fn check_liftability(
    spec: &LiftingSpec,
    op: CompositionOp,
    sigma: &StructModality,
    options: &LiftabilityOptions,
) -> Result<LiftabilityReport> {
    check_catalogue(spec, op, sigma)?;
    let mut notes = vec!["carriers are finite, so countability holds".to_string()];
    let per_index = condition1(spec, op.law, sigma, options)?;
    let condition1 = per_index.iter().fold(Verdict::VerifiedExhaustive, |acc, (_, v)| acc.and(v.clone()));

    let (condition2, join) = if spec.truth.is_finite() {
        let join = join_conditions(spec, sigma, options.max_pair_size)?;
        let approx = approximating_small(spec, sigma, options.max_pair_size, 9)?;
        let c2 = match (&approx, join.all()) {
            (Verdict::Refuted(s), _) => Verdict::Refuted(s.clone()),
            (_, Verdict::VerifiedExhaustive) => Verdict::VerifiedExhaustive,
            (_, other) => {
                notes.push(format!("join route: {other}"));
                Verdict::VerifiedSampled
            }
        };
        (c2, Some(join))
    } else {
        notes.push("condition (2) is not decided by sampling over the interval".into());
        (Verdict::Inconclusive("interval truth object".into()), None)
    };

    let instances = generate_instances(spec, options.instances, options.seed)?;
    let direct = check_lifted_law_direct(spec, op, sigma, &instances, options.tol)?;

    let overall = if let Some(v) = [&condition1, &condition2, &direct].into_iter().find(|v| v.is_refuted()) {
        v.clone()
    } else if condition1.is_verified() && condition2.is_verified() {
        condition1.clone().and(condition2.clone())
    } else if direct.is_verified() {
        Verdict::DirectOnly
    } else {
        Verdict::Inconclusive("neither the sufficient conditions nor the direct check settle liftability".into())
    };
    let per_index = per_index
        .into_iter()
        .map(|(name, v)| {
            let c2 = join.as_ref().map(JoinConditions::all).unwrap_or_else(|| condition2.clone());
            (name, v.and(c2))
        })
        .collect();
    Ok(LiftabilityReport { condition1, condition2, join_conditions: join, direct_check: Some(direct), overall, per_index, notes })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeblerOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `K(d)(μ₁⊗μ₂, μ₁′⊗μ₂′) ≤ σ(K(d₁)(μ₁, μ₁′), K(d₂)(μ₂, μ₂′))` with
/// `d = σ(d₁, d₂)`.
#[allow(clippy::too_many_arguments)]
pub fn check_gebler(
    sigma: &StructModality,
    d1: &Metric,
    d2: &Metric,
    mu1: &Dist,
    mu1p: &Dist,
    mu2: &Dist,
    mu2p: &Dist,
    tol: f64,
) -> Result<GeblerOutcome> {
    let d = product_lift(sigma, &[d1.clone().into(), d2.clone().into()])?;
    let d = d.as_metric().expect("metric product");
    let lhs =
        kantorovich_value(d, &product_weights(mu1.weights(), mu2.weights()), &product_weights(mu1p.weights(), mu2p.weights()))?;
    let k1 = kantorovich_value(d1, mu1.weights(), mu1p.weights())?;
    let k2 = kantorovich_value(d2, mu2.weights(), mu2p.weights())?;
    let rhs = sigma.real2(k1, k2);
    Ok(GeblerOutcome { lhs, rhs, holds: lhs <= rhs + tol })
}

/// Checks on the grid that `f(a) = 1 − a` is an isometry and that
/// `first = f ∘ second ∘ (f × f)`.
pub fn check_isom_bridge(first: &StructModality, second: &StructModality) -> Result<Verdict> {
    let ok_pair =
        matches!((&first.op, &second.op), (SigmaOp::SigmaOtimes, SigmaOp::SigmaOplus) | (SigmaOp::SigmaAnd, SigmaOp::SigmaOr));
    if !ok_pair {
        return Err(Error::Unsupported(format!("no bridge from {} to {}", first.name(), second.name())));
    }
    let f = |a: f64| 1.0 - a;
    let g = grid(GRID_STEP);
    for &a in &g {
        for &b in &g {
            if ((f(a) - f(b)).abs() - (a - b).abs()).abs() > 1e-12 {
                return Ok(Verdict::Refuted(format!("1 - a is not isometric at ({a}, {b})")));
            }
            let lhs = first.real2(a, b);
            let rhs = f(second.real2(f(a), f(b)));
            if (lhs - rhs).abs() > 1e-12 {
                return Ok(Verdict::Refuted(format!("{} and {} differ at ({a}, {b})", first.name(), second.name())));
            }
        }
    }
    Ok(Verdict::VerifiedSampled)
}

/// A random instance of the inequality checked by [`check_gebler`].
pub fn random_gebler_case<R: Rng>(rng: &mut R, max_n: usize) -> (Metric, Metric, [Dist; 4]) {
    let n1 = rng.gen_range(1..=max_n);
    let n2 = rng.gen_range(1..=max_n);
    let d1 = gen::random_pmet(rng, n1);
    let d2 = gen::random_pmet(rng, n2);
    let dists = [
        gen::random_dist(rng, n1, n1),
        gen::random_dist(rng, n1, n1),
        gen::random_dist(rng, n2, n2),
        gen::random_dist(rng, n2, n2),
    ];
    (d1, d2, dists)
}

/// Largest error in the witness description of `σ(d₁, d₂)`: at each pair of
/// product points the maps `d₁(x, ·)`, `d₂(y, ·)` must attain the product
/// distance, and no sampled pair of nonexpansive maps may exceed it.
pub fn product_witness_gap<R: Rng>(sigma: &StructModality, d1: &Metric, d2: &Metric, samples: usize, rng: &mut R) -> Result<f64> {
    if !d1.is_symmetric_kind() || !d2.is_symmetric_kind() {
        return Err(Error::Unsupported("witnesses are for pseudometric components".into()));
    }
    let prod = product_lift(sigma, &[d1.clone().into(), d2.clone().into()])?;
    let (n1, n2) = (d1.carrier().size(), d2.carrier().size());
    let induced = |k1: &[f64], k2: &[f64], i: usize, j: usize| {
        (sigma.real2(k1[i / n2], k2[i % n2]) - sigma.real2(k1[j / n2], k2[j % n2])).abs()
    };
    let sampled: Vec<(Vec<f64>, Vec<f64>)> =
        (0..samples).map(|_| (random_nonexpansive(d1, rng), random_nonexpansive(d2, rng))).collect();
    let mut gap: f64 = 0.0;
    for i in 0..n1 * n2 {
        let k1: Vec<f64> = (0..n1).map(|t| d1.get(i / n2, t)).collect();
        let k2: Vec<f64> = (0..n2).map(|t| d2.get(i % n2, t)).collect();
        for j in 0..n1 * n2 {
            let closed = prod.distance(i, j);
            gap = gap.max((induced(&k1, &k2, i, j) - closed).abs());
            for (s1, s2) in &sampled {
                gap = gap.max(induced(s1, s2, i, j) - closed);
            }
        }
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibers::EqRel;

    fn s(op: SigmaOp) -> StructModality {
        StructModality::binary(op)
    }

    #[test]
    fn law_examples() {
        let p = apply_law(DistLaw::LamP, &Elem::Set(vec![0]), &Elem::Set(vec![1, 2]), 3).unwrap();
        assert_eq!(p, Elem::Set(vec![1, 2]));
        let d = apply_law(DistLaw::LamD, &Elem::Dist(vec![1.0, 0.0]), &Elem::Dist(vec![0.5, 0.5]), 2).unwrap();
        assert_eq!(d, Elem::Dist(vec![0.5, 0.5, 0.0, 0.0]));
        let a = apply_law(DistLaw::LamDA, &Elem::Da { t: true, rho: vec![1] }, &Elem::Da { t: false, rho: vec![0] }, 2).unwrap();
        assert_eq!(a, Elem::Da { t: false, rho: vec![2] });
        assert!(apply_law(DistLaw::LamP, &Elem::Set(vec![]), &Elem::Dist(vec![1.0]), 1).is_err());
    }

    #[test]
    fn kripke_composition() {
        let a = System::Kripke(KripkeSystem { carrier: Carrier::new(2), succ: vec![vec![1], vec![]] });
        let b = System::Kripke(KripkeSystem { carrier: Carrier::new(2), succ: vec![vec![0, 1], vec![1]] });
        let c = compose_systems(&[a, b], CompositionOp::binary(DistLaw::LamP)).unwrap();
        match c {
            System::Kripke(k) => assert_eq!(k.succ, vec![vec![2, 3], vec![3], vec![], vec![]]),
            _ => panic!(),
        }
    }

    #[test]
    fn product_lift_examples() {
        let diag: FiberObject = EqRel::diagonal(Carrier::new(2)).into();
        let total: FiberObject = EqRel::total(Carrier::new(2)).into();
        let p = product_lift(&s(SigmaOp::And), &[diag, total]).unwrap();
        assert!(p.related(0, 1) && !p.related(0, 2));
        let d1 = Metric::pmet(Carrier::new(2), vec![0.0, 0.3, 0.3, 0.0]).unwrap();
        let d2 = Metric::pmet(Carrier::new(2), vec![0.0, 0.8, 0.8, 0.0]).unwrap();
        let m = product_lift(&s(SigmaOp::SigmaOr), &[d1.clone().into(), d2.clone().into()]).unwrap();
        assert_eq!(m.distance(0, 3), 0.8);
        assert!(product_lift(&s(SigmaOp::SigmaOtimes), &[d1.into(), d2.into()]).is_err());
    }

    #[test]
    fn product_at_omega() {
        assert!(check_product_at_omega(&s(SigmaOp::And), &TruthObject::eq2()).unwrap());
        let single = TruthObject::Finite(EqRel::total(Carrier::new(1)).into());
        let op = s(SigmaOp::Table { size: 1, values: vec![0] });
        assert!(check_product_at_omega(&op, &single).unwrap());
    }

    #[test]
    fn isom_bridge_pairs() {
        assert_eq!(check_isom_bridge(&s(SigmaOp::SigmaOtimes), &s(SigmaOp::SigmaOplus)).unwrap(), Verdict::VerifiedSampled);
        assert_eq!(check_isom_bridge(&s(SigmaOp::SigmaAnd), &s(SigmaOp::SigmaOr)).unwrap(), Verdict::VerifiedSampled);
        assert!(check_isom_bridge(&s(SigmaOp::SigmaAv), &s(SigmaOp::SigmaOr)).is_err());
    }

    #[test]
    fn gebler_point_masses() {
        let d1 = Metric::pmet(Carrier::new(2), vec![0.0, 0.5, 0.5, 0.0]).unwrap();
        let d2 = Metric::pmet(Carrier::new(2), vec![0.0, 0.4, 0.4, 0.0]).unwrap();
        let p = |x| Dist::point(Carrier::new(2), x);
        let r = check_gebler(&s(SigmaOp::SigmaOplus), &d1, &d2, &p(0), &p(1), &p(0), &p(1), 1e-9).unwrap();
        assert!((r.lhs - 0.7).abs() < 1e-9 && (r.rhs - 0.7).abs() < 1e-9 && r.holds);
        let r = check_gebler(&s(SigmaOp::SigmaAv), &d1, &d2, &p(0), &p(0), &p(1), &p(1), 1e-9).unwrap();
        assert_eq!(r.lhs, 0.0);
    }

    #[test]
    fn kripke_and_is_liftable() {
        let opts = LiftabilityOptions { instances: 20, ..Default::default() };
        let r = check_liftability(&LiftingSpec::kripke(), CompositionOp::binary(DistLaw::LamP), &s(SigmaOp::And), &opts).unwrap();
        assert_eq!(r.overall, Verdict::VerifiedExhaustive, "{r:?}");
        let r = check_liftability(&LiftingSpec::kripke(), CompositionOp::binary(DistLaw::LamP), &s(SigmaOp::Or), &opts).unwrap();
        assert!(r.overall.is_refuted());
    }
}
