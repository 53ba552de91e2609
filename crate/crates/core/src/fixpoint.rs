//! Greatest fixpoints of `c* ∘ Ḟ` by Kleene iteration from the top element.

use crate::behavior::{FunctorDesc, System};
use crate::codensity::{lift_on, LiftingSpec};
use crate::compose::{compose_systems, structure_lift, CompositionOp};
use crate::error::{Error, Result};
use crate::fibers::{fiber_leq, pullback_map, FiberObject, TOL};
use crate::modality::StructModality;
use crate::verdict::Verdict;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct IterReport {
    pub iterations: usize,
    /// Largest pointwise change in the last step.
    pub residual: f64,
    /// Largest amount by which the result fails to be a post-fixpoint.
    pub post_fixpoint_violation: f64,
    pub converged: bool,
    pub tol: f64,
}

/// Checks that the specification lifts the system's own behavior functor.
pub fn check_spec(system: &System, spec: &LiftingSpec) -> Result<()> {
    spec.validate()?;
    let ok = match (system, &spec.behavior) {
        (System::Kripke(_), FunctorDesc::P) | (System::Mdp(_), FunctorDesc::PD) => true,
        (System::Da(d), FunctorDesc::Fda { alphabet, .. }) => *alphabet == d.alphabet,
        _ => false,
    };
    if !ok {
        return Err(Error::TypeMismatch(format!(
            "a {} system is not an {}-coalgebra for this specification",
            system.kind(),
            spec.behavior.name()
        )));
    }
    system.ensure_valid()
}

/// `c*(Ḟ P)`.
pub fn one_step(system: &System, spec: &LiftingSpec, p: &FiberObject) -> Result<FiberObject> {
    let lifted = lift_on(spec, p, &system.steps())?;
    let id: Vec<usize> = (0..system.size()).collect();
    Ok(pullback_map(&id, system.carrier(), &lifted))
}

fn exact_cap(system: &System, spec: &LiftingSpec) -> Option<usize> {
    let n = system.size();
    match (&spec.behavior, spec.kind.is_metric()) {
        (_, false) => None,
        (FunctorDesc::Fda { .. }, true) => Some(n * n + 1),
        _ => Some(0),
    }
}

/// The greatest fixpoint on fibers where the chain from the top is finite.
pub fn nu_exact(system: &System, spec: &LiftingSpec) -> Result<FiberObject> {
    check_spec(system, spec)?;
    let cap = exact_cap(system, spec);
    if cap == Some(0) {
        return Err(Error::Unsupported(format!(
            "{} over {} has no finite descending chain; use nu_iterate",
            spec.behavior.name(),
            spec.kind
        )));
    }
    let mut p = FiberObject::top(spec.kind, system.carrier().clone());
    let mut steps = 0usize;
    loop {
        let next = one_step(system, spec, &p)?;
        if !fiber_leq(&next, &p)? {
            return Err(Error::Precondition("the Kleene chain is not descending".into()));
        }
        if next.approx_eq(&p) {
            return Ok(p);
        }
        p = next;
        steps += 1;
        if let Some(c) = cap {
            if steps > c {
                return Err(Error::Precondition(format!("no fixpoint after {c} iterations")));
            }
        }
    }
}

/// Kleene iteration for metric fibers, stopping at a `tol`-post-fixpoint.
/// Every iterate is a pointwise lower bound on bisimilarity distance.
pub fn nu_iterate(system: &System, spec: &LiftingSpec, tol: f64, max_iter: usize) -> Result<(FiberObject, IterReport)> {
    check_spec(system, spec)?;
    if !spec.kind.is_metric() {
        return Err(Error::Unsupported("iteration with a tolerance is for metric fibers".into()));
    }
    let mut p = FiberObject::top(spec.kind, system.carrier().clone());
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let next = one_step(system, spec, &p)?;
        let backwards = next.leq_violation(&p)?;
        if backwards > TOL {
            return Err(Error::Precondition(format!("iterate {it} rose above its predecessor by {backwards:e}")));
        }
        residual = p.leq_violation(&next)?;
        p = next;
        if residual < tol {
            let post = p.leq_violation(&one_step(system, spec, &p)?)?;
            if post <= tol {
                let report = IterReport { iterations: it, residual, post_fixpoint_violation: post, converged: true, tol };
                return Ok((p, report));
            }
        }
    }
    let post = p.leq_violation(&one_step(system, spec, &p)?)?;
    Ok((p, IterReport { iterations: max_iter, residual, post_fixpoint_violation: post, converged: false, tol }))
}

/// `ν` by whichever route the fiber supports.
pub fn bisimilarity(system: &System, spec: &LiftingSpec, tol: f64, max_iter: usize) -> Result<(FiberObject, IterReport)> {
    check_spec(system, spec)?;
    if exact_cap(system, spec) == Some(0) {
        return nu_iterate(system, spec, tol, max_iter);
    }
    let nu = nu_exact(system, spec)?;
    let report = IterReport { iterations: 0, residual: 0.0, post_fixpoint_violation: 0.0, converged: true, tol: 0.0 };
    Ok((nu, report))
}

/// `P ⊑ c*(Ḟ P)`, within `tol` for metrics.
pub fn is_bisimulation(p: &FiberObject, system: &System, spec: &LiftingSpec, tol: f64) -> Result<bool> {
    check_spec(system, spec)?;
    let tol = if p.kind().is_metric() { tol } else { 0.0 };
    Ok(p.leq_violation(&one_step(system, spec, p)?)? <= tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreservationReport {
    /// `σ(ν₁, ν₂)` on the product carrier.
    pub combined: FiberObject,
    pub composed: FiberObject,
    /// How far `combined ⊑ composed` fails.
    pub bound_violation: f64,
    /// How far `combined` fails to be a post-fixpoint for the composed system.
    pub post_fixpoint_violation: f64,
    pub verdict: Verdict,
}

/// Combines component bisimilarities with `σ` and compares against the
/// bisimilarity of the composed system.
pub fn check_preservation(
    systems: &[System],
    op: CompositionOp,
    sigma: &StructModality,
    spec: &LiftingSpec,
    tol: f64,
    iter_tol: f64,
) -> Result<PreservationReport> {
    let mut nus = Vec::new();
    for s in systems {
        nus.push(bisimilarity(s, spec, iter_tol, DEFAULT_MAX_ITER)?.0);
    }
    let composed_system = compose_systems(systems, op)?;
    let (composed, _) = bisimilarity(&composed_system, spec, iter_tol, DEFAULT_MAX_ITER)?;
    let combined = structure_lift(sigma, &spec.truth, &nus)?;
    let combined = pullback_map(&(0..combined.size()).collect::<Vec<_>>(), composed_system.carrier(), &combined);
    let tol = if spec.kind.is_metric() { tol } else { 0.0 };
    let bound_violation = combined.leq_violation(&composed)?;
    let post_fixpoint_violation = combined.leq_violation(&one_step(&composed_system, spec, &combined)?)?;
    let verdict = if bound_violation <= tol && post_fixpoint_violation <= tol {
        if spec.kind.is_metric() {
            Verdict::VerifiedSampled
        } else {
            Verdict::VerifiedExhaustive
        }
    } else {
        Verdict::Refuted(format!("bound fails by {bound_violation:e}, post-fixpoint by {post_fixpoint_violation:e}"))
    };
    Ok(PreservationReport { combined, composed, bound_violation, post_fixpoint_violation, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::{DASystem, Dist, KripkeSystem, MDPSystem};
    use crate::fibers::{Carrier, EqRel};

    fn kripke(succ: Vec<Vec<usize>>) -> System {
        System::Kripke(KripkeSystem { carrier: Carrier::new(succ.len()), succ })
    }

    #[test]
    fn kripke_chain_is_one_class() {
        let nu = nu_exact(&kripke(vec![vec![1], vec![2], vec![2]]), &LiftingSpec::kripke()).unwrap();
        assert_eq!(nu, EqRel::total(Carrier::new(3)).into());
    }

    #[test]
    fn bisimulation_examples() {
        let s = kripke(vec![vec![0], vec![]]);
        let spec = LiftingSpec::kripke();
        assert!(!is_bisimulation(&EqRel::total(Carrier::new(2)).into(), &s, &spec, 0.0).unwrap());
        assert!(is_bisimulation(&EqRel::diagonal(Carrier::new(2)).into(), &s, &spec, 0.0).unwrap());
        let nu = nu_exact(&s, &spec).unwrap();
        assert!(is_bisimulation(&nu, &s, &spec, 0.0).unwrap());
    }

    #[test]
    fn automaton_distance() {
        let d = System::Da(DASystem {
            carrier: Carrier::new(5),
            alphabet: vec!["a".into()],
            accepting: vec![false, true, false, false, true],
            delta: vec![vec![1], vec![1], vec![3], vec![4], vec![4]],
        });
        let spec = LiftingSpec::da_pmet(&["a".to_string()], 0.5).unwrap();
        let nu = nu_exact(&d, &spec).unwrap();
        assert_eq!(nu.distance(0, 2), 0.5);
        assert_eq!(nu.distance(1, 4), 0.0);
    }

    #[test]
    fn mdp_examples() {
        let c = Carrier::new(5);
        let w = |v: Vec<f64>| Dist::new(c.clone(), v).unwrap();
        // s, s', u (no choices), v (self-loop) and a twin of v.
        let m = System::Mdp(MDPSystem {
            carrier: c.clone(),
            choices: vec![
                vec![w(vec![0.0, 0.0, 0.5, 0.5, 0.0])],
                vec![w(vec![0.0, 0.0, 0.6, 0.4, 0.0])],
                vec![],
                vec![w(vec![0.0, 0.0, 0.0, 1.0, 0.0])],
                vec![w(vec![0.0, 0.0, 0.0, 0.0, 1.0])],
            ],
        });
        let (nu, report) = nu_iterate(&m, &LiftingSpec::mdp(), 1e-9, 100).unwrap();
        assert!(report.converged);
        assert!((nu.distance(0, 1) - 0.1).abs() < 1e-9);
        assert_eq!(nu.distance(2, 3), 1.0);
        assert_eq!(nu.distance(3, 4), 0.0);
    }
}
