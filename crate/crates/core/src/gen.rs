//! Seeded random instances: fiber objects, systems and functor elements.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::behavior::{DASystem, Dist, Elem, FunctorDesc, KripkeSystem, MDPSystem, System};
use crate::fibers::{shortest_path_closure, Carrier, ERel, EqRel, FiberKind, FiberObject, Metric};

/// An equivalence from a random surjection onto at most `n` blocks.
pub fn random_eqrel<R: Rng>(rng: &mut R, n: usize) -> EqRel {
    let blocks = rng.gen_range(1..=n.max(1));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    EqRel::from_labels(Carrier::new(n), &labels).expect("labels in range")
}

pub fn random_erel<R: Rng>(rng: &mut R, n: usize, density: f64) -> ERel {
    let rel = (0..n * n).map(|_| rng.gen_bool(density)).collect();
    ERel::new(Carrier::new(n), rel).expect("shape")
}

fn random_metric<R: Rng>(rng: &mut R, n: usize, symmetric: bool) -> Metric {
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j || (symmetric && j < i) {
                continue;
            }
            // Some exact zeros and ones keep pseudometric corner cases common.
            let v = match rng.gen_range(0..10) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen_range(0.0..1.0),
            };
            d[i * n + j] = v;
            if symmetric {
                d[j * n + i] = v;
            }
        }
    }
    shortest_path_closure(&mut d, n);
    let carrier = Carrier::new(n);
    if symmetric {
        Metric::pmet(carrier, d).expect("closure is a pseudometric")
    } else {
        Metric::lmet(carrier, d).expect("closure is a Lawvere metric")
    }
}

/// A pseudometric: a random symmetric matrix pushed through shortest paths.
pub fn random_pmet<R: Rng>(rng: &mut R, n: usize) -> Metric {
    random_metric(rng, n, true)
}

pub fn random_lmet<R: Rng>(rng: &mut R, n: usize) -> Metric {
    random_metric(rng, n, false)
}

pub fn random_object<R: Rng>(rng: &mut R, kind: FiberKind, n: usize) -> FiberObject {
    match kind {
        FiberKind::EqRel => random_eqrel(rng, n).into(),
        FiberKind::ERel => random_erel(rng, n, 0.5).into(),
        FiberKind::PMet => FiberObject::PMet(random_pmet(rng, n)),
        FiberKind::LMet => FiberObject::LMet(random_lmet(rng, n)),
    }
}

/// Weights over `0..n` on a random support of at most `max_support` points.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize, max_support: usize) -> Vec<f64> {
    let k = rng.gen_range(1..=max_support.clamp(1, n.max(1)));
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut w = vec![0.0; n];
    for (i, &x) in pts.iter().take(k).enumerate() {
        w[x] = raw[i] / total;
    }
    w
}

pub fn random_dist<R: Rng>(rng: &mut R, n: usize, max_support: usize) -> Dist {
    Dist::new(Carrier::new(n), random_weights(rng, n, max_support)).expect("normalized")
}

pub fn random_kripke<R: Rng>(rng: &mut R, n: usize, density: f64) -> System {
    let succ = (0..n).map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect()).collect();
    System::Kripke(KripkeSystem { carrier: Carrier::new(n), succ })
}

pub fn random_dfa<R: Rng>(rng: &mut R, n: usize, alphabet: &[String]) -> System {
    let accepting = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let delta = (0..n).map(|_| alphabet.iter().map(|_| rng.gen_range(0..n)).collect()).collect();
    System::Da(DASystem { carrier: Carrier::new(n), alphabet: alphabet.to_vec(), accepting, delta })
}

pub fn random_mdp<R: Rng>(rng: &mut R, n: usize, max_choices: usize, max_support: usize) -> System {
    let choices = (0..n)
        .map(|_| {
            let k = rng.gen_range(0..=max_choices);
            (0..k).map(|_| random_dist(rng, n, max_support)).collect()
        })
        .collect();
    System::Mdp(MDPSystem { carrier: Carrier::new(n), choices })
}

pub fn alphabet(k: usize) -> Vec<String> {
    (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// A random element of `F(X)` with `|X| = n`.
pub fn random_elem<R: Rng>(rng: &mut R, f: &FunctorDesc, n: usize) -> Elem {
    match f {
        FunctorDesc::P => Elem::set((0..n).filter(|_| rng.gen_bool(0.4)).collect()),
        FunctorDesc::D => Elem::Dist(random_weights(rng, n, 4)),
        FunctorDesc::Fda { alphabet, .. } => {
            Elem::Da { t: rng.gen_bool(0.5), rho: alphabet.iter().map(|_| rng.gen_range(0..n)).collect() }
        }
        FunctorDesc::PD => {
            let k = rng.gen_range(0..=3);
            Elem::set_dist((0..k).map(|_| random_weights(rng, n, 3)).collect())
        }
        FunctorDesc::Product(k) => Elem::Tuple((0..*k).map(|_| rng.gen_range(0..n)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..6 {
            assert!(random_pmet(&mut rng, n).violations().is_empty());
            assert!(random_lmet(&mut rng, n).violations().is_empty());
            assert!(random_mdp(&mut rng, n.max(1), 3, 4).validate().is_empty());
            assert!(random_dfa(&mut rng, n.max(1), &alphabet(2)).validate().is_empty());
        }
    }
}
