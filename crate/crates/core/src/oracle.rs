//! Classical decision procedures used as independent references: signature
//! refinement for Kripke bisimilarity and breadth-first search over the
//! pair automaton for distinguishing words.

use std::collections::HashMap;

use crate::behavior::{DASystem, KripkeSystem};
use crate::fibers::{EqRel, FiberObject, Metric};

/// Coarsest stable partition: states split until every block agrees on the
/// set of blocks its members can step into.
pub fn partition_refinement(k: &KripkeSystem) -> EqRel {
    let n = k.succ.len();
    let mut block = vec![0usize; n];
    let mut count = usize::from(n > 0);
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|x| {
                let mut sig: Vec<usize> = k.succ[x].iter().map(|&y| block[y]).collect();
                sig.sort_unstable();
                sig.dedup();
                let fresh = ids.len();
                *ids.entry((block[x], sig)).or_insert(fresh)
            })
            .collect();
        let new_count = ids.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    EqRel::from_labels(k.carrier.clone(), &block).expect("labels in range")
}

/// Length of a shortest word separating each pair, `None` when none exists.
/// `seed(x, y)` marks the pairs separated by the empty word.
fn shortest_separating(d: &DASystem, seed: impl Fn(usize, usize) -> bool) -> Vec<Option<usize>> {
    let n = d.accepting.len();
    let mut len = vec![None; n * n];
    let mut frontier = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if seed(x, y) {
                len[x * n + y] = Some(0);
                frontier.push((x, y));
            }
        }
    }
    // Predecessors in the pair automaton, per symbol.
    let mut pre: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        for &t in &d.delta[x] {
            pre[t].push(x);
        }
    }
    for p in pre.iter_mut() {
        p.sort_unstable();
        p.dedup();
    }
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &(u, v) in &frontier {
            for &x in &pre[u] {
                for &y in &pre[v] {
                    if len[x * n + y].is_some() {
                        continue;
                    }
                    let hit = (0..d.alphabet.len()).any(|a| d.delta[x][a] == u && d.delta[y][a] == v);
                    if hit {
                        len[x * n + y] = Some(depth);
                        next.push((x, y));
                    }
                }
            }
        }
        frontier = next;
    }
    len
}

/// Shortest word accepted from exactly one of the two states.
pub fn min_distinguishing_length(d: &DASystem) -> Vec<Option<usize>> {
    shortest_separating(d, |x, y| d.accepting[x] != d.accepting[y])
}

/// Shortest word accepted from the first state and rejected from the second.
pub fn one_sided_distinguishing_length(d: &DASystem) -> Vec<Option<usize>> {
    shortest_separating(d, |x, y| d.accepting[x] && !d.accepting[y])
}

pub fn language_equiv(d: &DASystem) -> EqRel {
    let n = d.accepting.len();
    let len = min_distinguishing_length(d);
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| len[x * n + y].is_none());
    EqRel::closure_of(d.carrier.clone(), pairs)
}

/// `w^n` for the oracle lengths, `0` where no word exists.
pub fn distance_from_lengths(d: &DASystem, lengths: &[Option<usize>], w: f64, symmetric: bool) -> FiberObject {
    let m: Vec<f64> = lengths.iter().map(|l| l.map_or(0.0, |n| w.powi(n as i32))).collect();
    let metric = if symmetric { Metric::pmet(d.carrier.clone(), m) } else { Metric::lmet(d.carrier.clone(), m) };
    let metric = metric.expect("distances from word lengths form a metric");
    if symmetric {
        FiberObject::PMet(metric)
    } else {
        FiberObject::LMet(metric)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibers::Carrier;

    fn chain() -> DASystem {
        // s0 -> s1 (accept, loop); t0 -> t1 -> t2 (accept, loop)
        DASystem {
            carrier: Carrier::new(5),
            alphabet: vec!["a".into()],
            accepting: vec![false, true, false, false, true],
            delta: vec![vec![1], vec![1], vec![3], vec![4], vec![4]],
        }
    }

    #[test]
    fn kripke_chain_collapses() {
        let k = KripkeSystem { carrier: Carrier::new(3), succ: vec![vec![1], vec![2], vec![2]] };
        assert_eq!(partition_refinement(&k).num_blocks(), 1);
        let k = KripkeSystem { carrier: Carrier::new(2), succ: vec![vec![0], vec![]] };
        assert_eq!(partition_refinement(&k).num_blocks(), 2);
    }

    #[test]
    fn distinguishing_lengths() {
        let d = chain();
        let at = |x: usize, y: usize| x * 5 + y;
        let len = min_distinguishing_length(&d);
        assert_eq!(len[at(0, 2)], Some(1));
        assert_eq!(len[at(1, 4)], None);
        let one = one_sided_distinguishing_length(&d);
        assert_eq!(one[at(0, 2)], Some(1));
        assert_eq!(one[at(2, 0)], None);
        assert_eq!(language_equiv(&d).num_blocks(), 3);
    }
}
