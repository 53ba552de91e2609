use codensity::behavior::{fmap, Elem, FunctorDesc, System};
use codensity::codensity::{
    codlift_bruteforce, codlift_closed, induced_distance, is_nonexpansive, random_nonexpansive, witness_maps, LiftingSpec,
};
use codensity::compose::{
    check_liftability, check_lifted_law_direct, compose_systems, generate_instances, product_lift, CompositionOp, DistLaw,
    LiftabilityOptions,
};
use codensity::fibers::{decent, fiber_leq, join, meet, pullback, Carrier, FiberKind, FiberObject, FinFun, Metric};
use codensity::fixpoint::{nu_exact, one_step};
use codensity::games::{is_invariant, is_winning, CodensityGame};
use codensity::gen;
use codensity::io;
use codensity::modality::{d_asym, grid, SigmaOp, StructModality, GRID_STEP};
use codensity::transport::{hausdorff, kantorovich};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [FiberKind; 4] = [FiberKind::EqRel, FiberKind::ERel, FiberKind::PMet, FiberKind::LMet];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_fun(r: &mut ChaCha8Rng, n: usize, m: usize) -> FinFun {
    FinFun::new(Carrier::new(n), Carrier::new(m), (0..n).map(|_| r.gen_range(0..m)).collect()).unwrap()
}

fn eq(kind: FiberKind, a: &FiberObject, b: &FiberObject) -> bool {
    if kind.is_metric() {
        a.approx_eq(b)
    } else {
        a == b
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_laws(seed in any::<u64>(), n in 1usize..=6, k in 0usize..4) {
        let kind = KINDS[k];
        let mut r = rng(seed);
        let c = Carrier::new(n);
        let (p, q, s) = (gen::random_object(&mut r, kind, n), gen::random_object(&mut r, kind, n), gen::random_object(&mut r, kind, n));
        for op in [meet, join] {
            let pp = op(kind, &c, &[p.clone(), p.clone()]).unwrap();
            prop_assert!(eq(kind, &pp, &p));
            let pq = op(kind, &c, &[p.clone(), q.clone()]).unwrap();
            prop_assert!(eq(kind, &pq, &op(kind, &c, &[q.clone(), p.clone()]).unwrap()));
            let left = op(kind, &c, &[pq.clone(), s.clone()]).unwrap();
            let qs = op(kind, &c, &[q.clone(), s.clone()]).unwrap();
            prop_assert!(eq(kind, &left, &op(kind, &c, &[p.clone(), qs]).unwrap()));
        }
        let m = meet(kind, &c, &[p.clone(), q.clone()]).unwrap();
        let j = join(kind, &c, &[p.clone(), q.clone()]).unwrap();
        prop_assert!(fiber_leq(&m, &p).unwrap() && fiber_leq(&p, &j).unwrap());
        prop_assert!(fiber_leq(&p, &p).unwrap());
        if fiber_leq(&p, &q).unwrap() && fiber_leq(&q, &p).unwrap() {
            prop_assert!(eq(kind, &p, &q));
        }
        if fiber_leq(&p, &q).unwrap() && fiber_leq(&q, &s).unwrap() {
            prop_assert!(fiber_leq(&p, &s).unwrap());
        }
    }

    #[test]
    fn pullback_preserves_meets_and_decency(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=5, k in 0usize..4) {
        let kind = KINDS[k];
        let mut r = rng(seed);
        let f = random_fun(&mut r, n, m);
        let qs: Vec<FiberObject> = (0..3).map(|_| gen::random_object(&mut r, kind, m)).collect();
        let left = pullback(&f, &meet(kind, &Carrier::new(m), &qs).unwrap()).unwrap();
        let pulled: Vec<FiberObject> = qs.iter().map(|q| pullback(&f, q).unwrap()).collect();
        prop_assert!(eq(kind, &left, &meet(kind, &Carrier::new(n), &pulled).unwrap()));
        let p = gen::random_object(&mut r, kind, n);
        prop_assert_eq!(decent(&f, &p, &qs[0]).unwrap(), fiber_leq(&p, &pullback(&f, &qs[0]).unwrap()).unwrap());
    }

    #[test]
    fn fmap_functoriality(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=4, l in 1usize..=4, which in 0usize..4) {
        let f = [FunctorDesc::P, FunctorDesc::D, FunctorDesc::fda(gen::alphabet(2), 0.5).unwrap(), FunctorDesc::PD][which].clone();
        let mut r = rng(seed);
        let x = gen::random_elem(&mut r, &f, n);
        prop_assert_eq!(&fmap(&f, &FinFun::identity(Carrier::new(n)), &x).unwrap(), &x);
        let g = random_fun(&mut r, n, m);
        let h = random_fun(&mut r, m, l);
        let once = fmap(&f, &g.then(&h).unwrap(), &x).unwrap();
        let twice = fmap(&f, &h, &fmap(&f, &g, &x).unwrap()).unwrap();
        match (&once, &twice) {
            (Elem::Dist(a), Elem::Dist(b)) => {
                prop_assert!(a.iter().zip(b).all(|(u, v)| (u - v).abs() < 1e-12));
                prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            (Elem::SetDist(a), Elem::SetDist(b)) => {
                prop_assert_eq!(a.len(), b.len());
                for (u, v) in a.iter().zip(b) {
                    prop_assert!(u.iter().zip(v).all(|(s, t)| (s - t).abs() < 1e-12));
                }
            }
            _ => prop_assert_eq!(once, twice),
        }
    }

    #[test]
    fn closed_forms_match_brute_force(seed in any::<u64>(), n in 1usize..=4, which in 0usize..4) {
        let sigma = gen::alphabet(2);
        let spec = [LiftingSpec::kripke(), LiftingSpec::kripke_erel(), LiftingSpec::da_eq(&sigma), LiftingSpec::da_erel(&sigma)][which].clone();
        let mut r = rng(seed);
        let p = gen::random_object(&mut r, spec.kind, n);
        prop_assert_eq!(codlift_closed(&spec, &p).unwrap(), codlift_bruteforce(&spec, &p).unwrap());
    }

    #[test]
    fn lifting_is_monotone(seed in any::<u64>(), n in 1usize..=4, which in 0usize..4) {
        let sigma = gen::alphabet(2);
        let spec = [LiftingSpec::kripke(), LiftingSpec::da_eq(&sigma), LiftingSpec::da_pmet(&sigma, 0.5).unwrap(), LiftingSpec::da_lmet(&sigma, 0.5).unwrap()][which].clone();
        let mut r = rng(seed);
        let c = Carrier::new(n);
        let (a, b) = (gen::random_object(&mut r, spec.kind, n), gen::random_object(&mut r, spec.kind, n));
        let (low, high) = (meet(spec.kind, &c, &[a.clone(), b]).unwrap(), a);
        let (l, h) = (codlift_closed(&spec, &low).unwrap(), codlift_closed(&spec, &high).unwrap());
        prop_assert!(l.leq_violation(&h).unwrap() <= 1e-9);
        if !spec.kind.is_metric() {
            prop_assert!(fiber_leq(&codlift_bruteforce(&spec, &low).unwrap(), &codlift_bruteforce(&spec, &high).unwrap()).unwrap());
        } else {
            let m = l.as_metric().unwrap();
            prop_assert!(m.violations().is_empty());
        }
    }

    #[test]
    fn automaton_metric_witnesses(seed in any::<u64>(), n in 1usize..=3, symmetric in any::<bool>()) {
        let sigma = gen::alphabet(1);
        let spec = if symmetric { LiftingSpec::da_pmet(&sigma, 0.5) } else { LiftingSpec::da_lmet(&sigma, 0.5) }.unwrap();
        let mut r = rng(seed);
        let p = gen::random_object(&mut r, spec.kind, n);
        let d = p.as_metric().unwrap().clone();
        let elems: Vec<Elem> = (0..4).map(|_| gen::random_elem(&mut r, &spec.behavior, n)).collect();
        let lifted = codensity::codensity::lift_on(&spec, &p, &elems).unwrap();
        let witnesses = witness_maps(&d);
        let samples: Vec<Vec<f64>> = (0..30).map(|_| random_nonexpansive(&d, &mut r)).collect();
        for (i, e1) in elems.iter().enumerate() {
            for (j, e2) in elems.iter().enumerate() {
                let closed = lifted.distance(i, j);
                let best = witnesses.iter().map(|k| induced_distance(&spec, k, e1, e2).unwrap()).fold(0.0, f64::max);
                prop_assert!((best - closed).abs() < 1e-9, "witness {best} vs closed {closed}");
                for k in &samples {
                    prop_assert!(is_nonexpansive(&d, k, 1e-9));
                    prop_assert!(induced_distance(&spec, k, e1, e2).unwrap() <= closed + 1e-9);
                }
            }
        }
    }

    #[test]
    fn kantorovich_axioms_and_monotonicity(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let d = gen::random_pmet(&mut r, n);
        let (mu, nu, rho) = (gen::random_dist(&mut r, n, 6), gen::random_dist(&mut r, n, 6), gen::random_dist(&mut r, n, 6));
        let k = |d: &Metric, a, b| kantorovich(d, a, b).unwrap().cost_value;
        prop_assert!(k(&d, &mu, &mu) <= 1e-7);
        prop_assert!((k(&d, &mu, &nu) - k(&d, &nu, &mu)).abs() <= 1e-7);
        prop_assert!(k(&d, &mu, &nu) <= k(&d, &mu, &rho) + k(&d, &rho, &nu) + 1e-7);
        // A pointwise smaller metric: the meet in the fiber order.
        let e = gen::random_pmet(&mut r, n);
        let smaller = join(FiberKind::PMet, &Carrier::new(n), &[d.clone().into(), e.into()]).unwrap();
        let smaller = smaller.as_metric().unwrap();
        prop_assert!(k(&d, &mu, &nu) >= k(smaller, &mu, &nu) - 1e-9);
        let a: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
        let b: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
        prop_assert!(hausdorff(&d, &a, &b) >= hausdorff(smaller, &a, &b) - 1e-9);
        let (x, y) = (r.gen_range(0..n), r.gen_range(0..n));
        prop_assert_eq!(hausdorff(&d, &[x], &[y]), d.get(x, y));
    }

    #[test]
    fn product_lifts_are_pseudometrics(seed in any::<u64>(), n1 in 1usize..=4, n2 in 1usize..=4, which in 0usize..3) {
        let s = StructModality::binary([SigmaOp::SigmaOplus, SigmaOp::SigmaAv, SigmaOp::SigmaOr][which].clone());
        let mut r = rng(seed);
        let p = product_lift(&s, &[gen::random_pmet(&mut r, n1).into(), gen::random_pmet(&mut r, n2).into()]).unwrap();
        prop_assert!(p.as_metric().unwrap().violations().is_empty());
    }

    #[test]
    fn kripke_composition_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s: Vec<System> = (0..3).map(|_| { let n = r.gen_range(1..=3); gen::random_kripke(&mut r, n, 0.4) }).collect();
        let op = CompositionOp::binary(DistLaw::LamP);
        let left = compose_systems(&[compose_systems(&s[..2], op).unwrap(), s[2].clone()], op).unwrap();
        let right = compose_systems(&[s[0].clone(), compose_systems(&s[1..], op).unwrap()], op).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kleene_chain_descends(seed in any::<u64>(), n in 1usize..=5) {
        let sigma = gen::alphabet(2);
        let mut r = rng(seed);
        let s = gen::random_dfa(&mut r, n, &sigma);
        let spec = LiftingSpec::da_pmet(&sigma, 0.5).unwrap();
        let mut p = FiberObject::top(spec.kind, Carrier::new(n));
        for _ in 0..n * n + 1 {
            let next = one_step(&s, &spec, &p).unwrap();
            prop_assert!(next.leq_violation(&p).unwrap() <= 1e-12);
            p = next;
        }
        prop_assert_eq!(p, nu_exact(&s, &spec).unwrap());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), n in 1usize..=6, k in 0usize..4) {
        let mut r = rng(seed);
        let p = gen::random_object(&mut r, KINDS[k], n);
        let back = io::parse_fiber_object(&io::to_pretty(&io::render_fiber(&p)), None).unwrap();
        prop_assert_eq!(back, p);
        let sigma = gen::alphabet(2);
        for s in [gen::random_kripke(&mut r, n, 0.4), gen::random_dfa(&mut r, n, &sigma), gen::random_mdp(&mut r, n, 3, 4)] {
            let back = io::parse_system(&io::to_pretty(&io::render_system(&s))).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn winning_iff_in_some_invariant(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let g = CodensityGame::new(gen::random_kripke(&mut r, n, 0.4), LiftingSpec::kripke()).unwrap();
        let all: Vec<FiberObject> = codensity::fibers::all_eqrels(n).into_iter().map(Into::into).collect();
        let mut in_some = vec![false; all.len()];
        for mask in 1u32..1 << all.len() {
            let v: Vec<FiberObject> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i].clone()).collect();
            if is_invariant(&v, &g).unwrap() {
                for (i, slot) in in_some.iter_mut().enumerate() {
                    *slot |= mask >> i & 1 == 1;
                }
            }
        }
        for (p, &b) in all.iter().zip(&in_some) {
            prop_assert_eq!(is_winning(p, &g).unwrap(), b);
        }
    }

    #[test]
    fn verified_liftability_implies_direct(seed in any::<u64>()) {
        let spec = LiftingSpec::kripke();
        let op = CompositionOp::binary(DistLaw::LamP);
        let and = StructModality::binary(SigmaOp::And);
        let opts = LiftabilityOptions { instances: 20, seed, ..Default::default() };
        let report = check_liftability(&spec, op, &and, &opts).unwrap();
        prop_assert!(report.overall.is_verified());
        let instances = generate_instances(&spec, 20, seed).unwrap();
        prop_assert!(check_lifted_law_direct(&spec, op, &and, &instances, 0.0).unwrap().is_verified());
    }
}

#[test]
fn pmet_join_is_least_upper_bound_on_a_grid() {
    let mut r = rng(11);
    let values = [0.0, 0.25, 0.5, 0.75, 1.0];
    let c = Carrier::new(3);
    for _ in 0..20 {
        let (a, b) = (gen::random_pmet(&mut r, 3), gen::random_pmet(&mut r, 3));
        let j = join(FiberKind::PMet, &c, &[a.clone().into(), b.clone().into()]).unwrap();
        let jm = j.as_metric().unwrap();
        assert!(jm.violations().is_empty());
        for x in 0..3 {
            for y in 0..3 {
                assert!(jm.get(x, y) <= a.get(x, y).min(b.get(x, y)) + 1e-9);
            }
        }
        for &u in &values {
            for &v in &values {
                for &w in &values {
                    let Ok(m) = Metric::pmet(c.clone(), vec![0.0, u, v, u, 0.0, w, v, w, 0.0]) else { continue };
                    let below = (0..3).all(|x| (0..3).all(|y| m.get(x, y) <= a.get(x, y).min(b.get(x, y)) + 1e-12));
                    if below {
                        assert!((0..3).all(|x| (0..3).all(|y| m.get(x, y) <= jm.get(x, y) + 1e-9)));
                    }
                }
            }
        }
    }
}

#[test]
fn bridge_identities_and_asymmetric_distance_on_the_grid() {
    let g = grid(GRID_STEP);
    let s = |op| StructModality::binary(op);
    let f = |a: f64| 1.0 - a;
    for &a in &g {
        for &b in &g {
            let ot = s(SigmaOp::SigmaOtimes).eval_real(&[a, b]).unwrap();
            let op = s(SigmaOp::SigmaOplus).eval_real(&[f(a), f(b)]).unwrap();
            assert!((ot - f(op)).abs() < 1e-12);
            let an = s(SigmaOp::SigmaAnd).eval_real(&[a, b]).unwrap();
            let or = s(SigmaOp::SigmaOr).eval_real(&[f(a), f(b)]).unwrap();
            assert!((an - f(or)).abs() < 1e-12);
            assert_eq!(d_asym(a, a), 0.0);
            for &c in &g {
                assert!(d_asym(a, c) <= d_asym(a, b) + d_asym(b, c) + 1e-12);
            }
        }
    }
}
