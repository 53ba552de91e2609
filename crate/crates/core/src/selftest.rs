//! The acceptance suite as a library, shared by the integration test and the
//! `selftest` command.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::behavior::System;
use crate::codensity::{abs_, check_decomposition, conc, LiftingSpec};
use crate::compose::{
    check_gebler, check_isom_bridge, check_liftability, check_product_at_omega, ncodlift_bruteforce, product_lift,
    product_witness_gap, random_gebler_case, CompositionOp, DistLaw, LiftabilityOptions,
};
use crate::error::Result;
use crate::fibers::{all_eqrels, EqRel, FiberKind, FiberObject};
use crate::fixpoint::{check_preservation, nu_exact};
use crate::games::{
    bisim_iff, check_composite_equivalence, compose_and_verify, compose_invariants, is_invariant, is_winning, replay_strategy,
    solve_explicit, synthesize_strategy, CodensityGame, CompositeGame,
};
use crate::gen;
use crate::modality::{check_star, SigmaOp, StructModality, TruthObject, GRID_STEP, RANDOM_SAMPLES};
use crate::oracle;
use crate::transport::{kantorovich, marginal_error, verify_duality};
use crate::verdict::Verdict;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "kripke bisimilarity vs partition refinement"),
    (2, "automaton equivalence vs language equivalence"),
    (3, "automaton bisimilarity distance vs shortest words"),
    (4, "automaton similarity distance vs one-sided words"),
    (5, "compositionality bounds"),
    (6, "optimal transport"),
    (7, "kantorovich product inequality"),
    (8, "liftability checker verdicts"),
    (9, "decomposition identity"),
    (10, "structure modality catalogue"),
    (11, "codensity games"),
    (12, "product liftings"),
];

type Outcome = Result<(bool, String)>;

pub fn run_criterion(id: u8, seed: u64) -> Option<CriterionResult> {
    let name = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ u64::from(id));
    let start = Instant::now();
    let outcome = match id {
        1 => kripke_oracle(&mut rng),
        2 => language_oracle(&mut rng),
        3 => distance_oracle(&mut rng, true),
        4 => distance_oracle(&mut rng, false),
        5 => compositionality(&mut rng),
        6 => transport(&mut rng),
        7 => gebler(&mut rng),
        8 => liftability(seed),
        9 => decomposition(&mut rng),
        10 => catalogue(seed),
        11 => games(&mut rng, seed),
        12 => products(&mut rng),
        _ => return None,
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(CriterionResult { id, name, passed, detail, elapsed: start.elapsed() })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|&(id, _)| run_criterion(id, seed)).collect()
}

fn kripke_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let spec = LiftingSpec::kripke();
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let s = gen::random_kripke(rng, n, 0.3);
        let System::Kripke(k) = &s else { unreachable!() };
        let nu = nu_exact(&s, &spec)?;
        if nu != oracle::partition_refinement(k).into() {
            return Ok((false, format!("frame {i} with {n} states disagrees")));
        }
    }
    let t = start.elapsed().as_secs_f64();
    Ok((t < 30.0, format!("200 frames agree in {t:.2}s")))
}

fn language_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let sigma = gen::alphabet(rng.gen_range(1..=3));
        let s = gen::random_dfa(rng, n, &sigma);
        let System::Da(d) = &s else { unreachable!() };
        if nu_exact(&s, &LiftingSpec::da_eq(&sigma))? != oracle::language_equiv(d).into() {
            return Ok((false, format!("automaton {i} disagrees")));
        }
    }
    Ok((true, "200 automata agree".into()))
}

fn distance_oracle(rng: &mut ChaCha8Rng, symmetric: bool) -> Outcome {
    let w = 0.5;
    let mut pairs = 0usize;
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let sigma = gen::alphabet(rng.gen_range(1..=3));
        let s = gen::random_dfa(rng, n, &sigma);
        let System::Da(d) = &s else { unreachable!() };
        let (spec, lengths) = if symmetric {
            (LiftingSpec::da_pmet(&sigma, w)?, oracle::min_distinguishing_length(d))
        } else {
            (LiftingSpec::da_lmet(&sigma, w)?, oracle::one_sided_distinguishing_length(d))
        };
        let nu = nu_exact(&s, &spec)?;
        let expected = oracle::distance_from_lengths(d, &lengths, w, symmetric);
        for x in 0..n {
            for y in 0..n {
                pairs += 1;
                if nu.distance(x, y) != expected.distance(x, y) {
                    return Ok((
                        false,
                        format!(
                            "automaton {i}: d({x},{y}) = {} but the oracle gives {}",
                            nu.distance(x, y),
                            expected.distance(x, y)
                        ),
                    ));
                }
            }
        }
    }
    Ok((true, format!("{pairs} state pairs match exactly over 200 automata")))
}

fn compositionality(rng: &mut ChaCha8Rng) -> Outcome {
    let and = StructModality::binary(SigmaOp::And);
    let kripke = LiftingSpec::kripke();
    for i in 0..100 {
        let a = {
            let n = rng.gen_range(1..=4);
            gen::random_kripke(rng, n, 0.4)
        };
        let b = {
            let n = rng.gen_range(1..=4);
            gen::random_kripke(rng, n, 0.4)
        };
        let r = check_preservation(&[a, b], CompositionOp::binary(DistLaw::LamP), &and, &kripke, 0.0, 0.0)?;
        if !r.verdict.is_verified() {
            return Ok((false, format!("kripke pair {i}: {}", r.verdict)));
        }
    }
    let or = StructModality::binary(SigmaOp::SigmaOr);
    let mut worst_da: f64 = 0.0;
    for i in 0..100 {
        let sigma = gen::alphabet(rng.gen_range(1..=2));
        let a = {
            let n = rng.gen_range(1..=4);
            gen::random_dfa(rng, n, &sigma)
        };
        let b = {
            let n = rng.gen_range(1..=4);
            gen::random_dfa(rng, n, &sigma)
        };
        let spec = LiftingSpec::da_pmet(&sigma, 0.5)?;
        let r = check_preservation(&[a, b], CompositionOp::binary(DistLaw::LamDA), &or, &spec, 1e-9, 0.0)?;
        worst_da = worst_da.max(r.bound_violation);
        if r.bound_violation > 1e-9 {
            return Ok((false, format!("automaton pair {i}: bound fails by {:e}", r.bound_violation)));
        }
    }
    let oplus = StructModality::binary(SigmaOp::SigmaOplus);
    let mdp = LiftingSpec::mdp();
    let (mut worst_bound, mut worst_post): (f64, f64) = (0.0, 0.0);
    for i in 0..50 {
        let a = {
            let n = rng.gen_range(1..=5);
            gen::random_mdp(rng, n, 3, 4)
        };
        let b = {
            let n = rng.gen_range(1..=5);
            gen::random_mdp(rng, n, 3, 4)
        };
        let r = check_preservation(&[a, b], CompositionOp::binary(DistLaw::LamPD), &oplus, &mdp, 1e-6, 1e-9)?;
        worst_bound = worst_bound.max(r.bound_violation);
        worst_post = worst_post.max(r.post_fixpoint_violation);
        if r.bound_violation > 1e-6 || r.post_fixpoint_violation > 1e-6 {
            return Ok((false, format!("decision process pair {i}: {}", r.verdict)));
        }
    }
    Ok((
        true,
        format!(
            "100 kripke pairs exact; automata worst excess {worst_da:.1e}; decision processes worst bound {worst_bound:.1e}, post-fixpoint {worst_post:.1e}"
        ),
    ))
}

fn transport(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut dual_gap, mut marg, mut axiom): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..300 {
        let n = rng.gen_range(1..=20);
        let d = gen::random_pmet(rng, n);
        let mu = gen::random_dist(rng, n, 20);
        let nu = gen::random_dist(rng, n, 20);
        let rho = gen::random_dist(rng, n, 20);
        let sol = kantorovich(&d, &mu, &nu)?;
        if !verify_duality(&sol, &d, &mu, &nu) {
            return Ok((false, format!("instance {i}: duality certificate rejected")));
        }
        let dual: f64 = (0..n).map(|x| sol.potentials[x] * (mu.weights()[x] - nu.weights()[x])).sum();
        dual_gap = dual_gap.max((dual.abs() - sol.cost_value).abs());
        marg = marg.max(marginal_error(&sol, &mu, &nu));
        let k = |a, b| kantorovich(&d, a, b).map(|s| s.cost_value);
        let (mn, nm, mr, rn, mm) = (sol.cost_value, k(&nu, &mu)?, k(&mu, &rho)?, k(&rho, &nu)?, k(&mu, &mu)?);
        axiom = axiom.max(mm).max((mn - nm).abs()).max(mn - mr - rn).max(mn - 1.0).max(-mn);
    }
    let ok = dual_gap <= 1e-7 && marg <= 1e-9 && axiom <= 1e-7;
    Ok((ok, format!("300 instances; duality gap {dual_gap:.1e}, marginals {marg:.1e}, axioms {axiom:.1e}")))
}

fn gebler(rng: &mut ChaCha8Rng) -> Outcome {
    let sigmas = [StructModality::binary(SigmaOp::SigmaOplus), StructModality::binary(SigmaOp::SigmaAv)];
    let mut worst = f64::NEG_INFINITY;
    for i in 0..500 {
        let (d1, d2, [m1, m1p, m2, m2p]) = random_gebler_case(rng, 6);
        for s in &sigmas {
            let r = check_gebler(s, &d1, &d2, &m1, &m1p, &m2, &m2p, 1e-7)?;
            worst = worst.max(r.lhs - r.rhs);
            if !r.holds {
                return Ok((false, format!("instance {i} under {}: {} > {}", s.name(), r.lhs, r.rhs)));
            }
        }
    }
    Ok((true, format!("500 instances under both modalities; largest lhs - rhs {worst:.1e}")))
}

fn liftability(seed: u64) -> Outcome {
    let opts = LiftabilityOptions { seed, ..Default::default() };
    let and = StructModality::binary(SigmaOp::And);
    let kripke = check_liftability(&LiftingSpec::kripke(), CompositionOp::binary(DistLaw::LamP), &and, &opts)?;
    let da = check_liftability(&LiftingSpec::da_eq(&gen::alphabet(2)), CompositionOp::binary(DistLaw::LamDA), &and, &opts)?;
    let oplus = StructModality::binary(SigmaOp::SigmaOplus);
    let mdp = check_liftability(&LiftingSpec::mdp(), CompositionOp::binary(DistLaw::LamPD), &oplus, &opts)?;
    let ok = kripke.overall == Verdict::VerifiedExhaustive
        && da.overall == Verdict::VerifiedExhaustive
        && mdp.overall == Verdict::DirectOnly
        && matches!(mdp.condition2, Verdict::Inconclusive(_));
    Ok((
        ok,
        format!(
            "kripke {}, automata {}, decision processes {} (condition 2 {})",
            kripke.overall,
            da.overall,
            mdp.overall,
            mdp.condition2.name()
        ),
    ))
}

fn decomposition(rng: &mut ChaCha8Rng) -> Outcome {
    let specs = [LiftingSpec::kripke(), LiftingSpec::da_eq(&gen::alphabet(2))];
    for spec in &specs {
        for i in 0..100 {
            let p: FiberObject = {
                let n = rng.gen_range(1..=5);
                gen::random_eqrel(rng, n)
            }
            .into();
            if !check_decomposition(spec, &p)? {
                return Ok((false, format!("{} instance {i}: conc Sp abs differs from the lifting", spec.behavior.name())));
            }
            if conc(&abs_(&p, &spec.truth, spec.tau.len())?, &spec.truth)? != p {
                return Ok((false, format!("{} instance {i}: conc abs is not the identity", spec.behavior.name())));
            }
        }
    }
    Ok((true, "100 instances each for both behaviors".into()))
}

fn catalogue(seed: u64) -> Outcome {
    let star = |op: SigmaOp| check_star(&StructModality::binary(op), GRID_STEP, RANDOM_SAMPLES, seed).map(|v| v.holds());
    let holds = [star(SigmaOp::SigmaOplus)?, star(SigmaOp::SigmaAv)?, star(SigmaOp::SigmaOr)?];
    let fails = [!star(SigmaOp::SigmaOtimes)?, !star(SigmaOp::SigmaAnd)?];
    let b = |a: SigmaOp, c: SigmaOp| check_isom_bridge(&StructModality::binary(a), &StructModality::binary(c));
    let bridges = [b(SigmaOp::SigmaOtimes, SigmaOp::SigmaOplus)?, b(SigmaOp::SigmaAnd, SigmaOp::SigmaOr)?];
    let ok = holds.iter().all(|&x| x) && fails.iter().all(|&x| x) && bridges.iter().all(Verdict::is_verified);
    Ok((ok, format!("star holds {holds:?}, counterexamples found {fails:?}, bridges {}/{}", bridges[0], bridges[1])))
}

/// `{ν, diagonal}` plus whichever random equivalences are bisimulations.
fn random_invariant(rng: &mut ChaCha8Rng, g: &CodensityGame) -> Result<Vec<FiberObject>> {
    let n = g.system().size();
    let mut v = vec![nu_exact(g.system(), g.spec())?];
    let diag: FiberObject = EqRel::diagonal(g.carrier().clone()).into();
    if !v.contains(&diag) {
        v.push(diag);
    }
    for _ in 0..3 {
        let p: FiberObject = gen::random_eqrel(rng, n).into();
        if !v.contains(&p) && is_invariant(std::slice::from_ref(&p), g)? {
            v.push(p);
        }
    }
    Ok(v)
}

fn games(rng: &mut ChaCha8Rng, seed: u64) -> Outcome {
    let kripke = LiftingSpec::kripke();

    // Invariants versus bisimulations.
    let mut positives = 0;
    for i in 0..100 {
        let s = {
            let n = rng.gen_range(1..=4);
            gen::random_kripke(rng, n, 0.4)
        };
        let g = CodensityGame::new(s, kripke.clone())?;
        let nu = nu_exact(g.system(), g.spec())?;
        let mut v = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            v.push(match rng.gen_range(0..3) {
                0 => nu.clone(),
                _ => gen::random_eqrel(rng, g.system().size()).into(),
            });
        }
        let (inv, bis) = bisim_iff(&v, &g)?;
        if inv != bis {
            return Ok((false, format!("(a) candidate {i}: invariant {inv}, bisimulation {bis}")));
        }
        positives += usize::from(inv);
    }

    // Winning positions against explicit solving.
    let mut positions = 0;
    for i in 0..30 {
        let n = rng.gen_range(1..=3);
        let sigma = gen::alphabet(1);
        let (s, spec) = match i % 3 {
            0 => (gen::random_kripke(rng, n, 0.4), kripke.clone()),
            1 => (gen::random_kripke(rng, n, 0.4), LiftingSpec::kripke_erel()),
            _ => (gen::random_dfa(rng, n, &sigma), LiftingSpec::da_eq(&sigma)),
        };
        let g = CodensityGame::new(s, spec)?;
        for (p, w) in solve_explicit(&g, 1 << 10)? {
            positions += 1;
            if w != is_winning(&p, &g)? {
                return Ok((false, format!("(b) system {i}: explicit solving disagrees")));
            }
        }
    }

    // Composition of invariants and the composite equivalence.
    let and = StructModality::binary(SigmaOp::And);
    let opts = LiftabilityOptions { seed, ..Default::default() };
    let kripke_gate = check_liftability(&kripke, CompositionOp::binary(DistLaw::LamP), &and, &opts)?.overall;
    let da_sigma = gen::alphabet(1);
    let da_spec = LiftingSpec::da_eq(&da_sigma);
    let da_gate = check_liftability(&da_spec, CompositionOp::binary(DistLaw::LamDA), &and, &opts)?.overall;
    let mut gated = 0;
    for i in 0..100 {
        let (spec, gate, law, pair) = if i % 2 == 0 {
            let pair = [
                {
                    let n = rng.gen_range(1..=3);
                    gen::random_kripke(rng, n, 0.4)
                },
                {
                    let n = rng.gen_range(1..=3);
                    gen::random_kripke(rng, n, 0.4)
                },
            ];
            (&kripke, &kripke_gate, DistLaw::LamP, pair)
        } else {
            let pair = [
                {
                    let n = rng.gen_range(1..=3);
                    gen::random_dfa(rng, n, &da_sigma)
                },
                {
                    let n = rng.gen_range(1..=3);
                    gen::random_dfa(rng, n, &da_sigma)
                },
            ];
            (&da_spec, &da_gate, DistLaw::LamDA, pair)
        };
        let cg = CompositeGame::new(&pair, and.clone(), spec)?;
        let vs = cg.components.iter().map(|g| random_invariant(rng, g)).collect::<Result<Vec<_>>>()?;
        let (product, ok) = compose_and_verify(&vs, &cg)?;
        if !ok {
            return Ok((false, format!("(c) case {i}: composed invariant rejected")));
        }
        for (j, (v, g)) in vs.iter().zip(&cg.components).enumerate() {
            for start in v {
                let st = synthesize_strategy(v, g, start)?;
                if !replay_strategy(&st, g, start)? {
                    return Ok((false, format!("(e) case {i} component {j}: replay reached an unmapped position")));
                }
            }
        }
        // A second candidate that need not be an invariant.
        let loose: Vec<Vec<FiberObject>> =
            cg.components.iter().map(|g| vec![gen::random_eqrel(rng, g.system().size()).into()]).collect();
        for cand in [product, compose_invariants(&loose)] {
            let report = check_composite_equivalence(&cand, &cg, CompositionOp::binary(law), gate.clone())?;
            if gate.is_verified() {
                gated += 1;
                if report.holds != Some(true) {
                    return Ok((false, format!("(d) case {i}: {report:?}")));
                }
            }
        }
    }
    let ok = kripke_gate.is_verified() && da_gate.is_verified();
    Ok((
        ok,
        format!(
            "(a) 100 candidates, {positives} invariants; (b) {positions} positions; (c)+(e) 100 cases; (d) {gated} gated instances"
        ),
    ))
}

fn products(rng: &mut ChaCha8Rng) -> Outcome {
    let and = StructModality::binary(SigmaOp::And);
    let eq2 = TruthObject::eq2();
    let mut pairs = 0;
    for n1 in 1..=4 {
        for n2 in 1..=4 {
            for p in all_eqrels(n1) {
                for q in all_eqrels(n2) {
                    let ps: Vec<FiberObject> = vec![p.clone().into(), q.clone().into()];
                    if product_lift(&and, &ps)? != ncodlift_bruteforce(&and, &eq2, &ps)? {
                        return Ok((false, format!("product of {p:?} and {q:?} differs")));
                    }
                    pairs += 1;
                }
            }
        }
    }
    if !check_product_at_omega(&and, &eq2)? {
        return Ok((false, "the product at the truth object is not the lifting".into()));
    }
    let sigmas = [SigmaOp::SigmaOplus, SigmaOp::SigmaAv, SigmaOp::SigmaOr];
    let mut gap: f64 = 0.0;
    for i in 0..100 {
        let s = StructModality::binary(sigmas[i % 3].clone());
        let d1 = {
            let n = rng.gen_range(1..=4);
            gen::random_pmet(rng, n)
        };
        let d2 = {
            let n = rng.gen_range(1..=4);
            gen::random_pmet(rng, n)
        };
        let prod = product_lift(&s, &[d1.clone().into(), d2.clone().into()])?;
        let m = prod.as_metric().expect("metric product");
        if m.kind() != FiberKind::PMet || !m.violations().is_empty() {
            return Ok((false, format!("metric pair {i} under {}: not a pseudometric", s.name())));
        }
        gap = gap.max(product_witness_gap(&s, &d1, &d2, 50, rng)?);
    }
    Ok((gap <= 1e-9, format!("{pairs} relation pairs match; 100 metric pairs, witness gap {gap:.1e}")))
}
