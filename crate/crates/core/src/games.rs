//! Codensity games over finite truth objects: invariants, winning positions,
//! positional Duplicator strategies, composite games and a play session.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::behavior::{fmap_raw, tuples, Elem, System};
use crate::codensity::LiftingSpec;
use crate::compose::{compose_systems, structure_lift, CompositionOp};
use crate::error::{Error, Result};
use crate::fibers::{all_eqrels, fiber_leq, join, Carrier, ERel, FiberKind, FiberObject};
use crate::fixpoint::{check_spec, is_bisimulation, nu_exact};
use crate::modality::StructModality;
use crate::verdict::Verdict;

/// Largest carrier for which all maps into the truth object are enumerated.
pub const MAX_GAME_STATES: usize = 16;

/// A Duplicator position `(a, k)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DupPos {
    pub index: usize,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CodensityGame {
    system: System,
    spec: LiftingSpec,
    steps: Vec<Elem>,
    omega: FiberObject,
}

/// Whether `values` fails to be a decent map from `p` to `omega`.
fn not_decent(p: &FiberObject, omega: &FiberObject, values: &[usize]) -> bool {
    match p {
        FiberObject::EqRel(e) => {
            let mut seen: Vec<Option<usize>> = vec![None; e.num_blocks()];
            for (x, &b) in e.block_of().iter().enumerate() {
                match seen[b] {
                    None => seen[b] = Some(values[x]),
                    Some(v) if !omega.related(v, values[x]) || !omega.related(values[x], v) => return true,
                    Some(_) => {}
                }
            }
            // Blocks agree with their first member; equivalence truth objects
            // are transitive, so that settles the whole block.
            false
        }
        _ => {
            let n = p.size();
            (0..n).any(|x| (0..n).any(|y| p.related(x, y) && !omega.related(values[x], values[y])))
        }
    }
}

fn all_maps(n: usize, m: usize) -> Result<Vec<Vec<usize>>> {
    if n > MAX_GAME_STATES {
        return Err(Error::GuardExceeded {
            what: "maps into the truth object".into(),
            needed: (m as u128).saturating_pow(n as u32),
            limit: (m as u128).saturating_pow(MAX_GAME_STATES as u32),
        });
    }
    Ok(tuples(m, n))
}

impl CodensityGame {
    pub fn new(system: System, spec: LiftingSpec) -> Result<Self> {
        check_spec(&system, &spec)?;
        let omega = spec.truth.finite().cloned().ok_or_else(|| Error::Unsupported("games need a finite truth object".into()))?;
        if system.size() > MAX_GAME_STATES {
            return Err(Error::GuardExceeded {
                what: "game carrier".into(),
                needed: system.size() as u128,
                limit: MAX_GAME_STATES as u128,
            });
        }
        let steps = system.steps();
        Ok(CodensityGame { system, spec, steps, omega })
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn spec(&self) -> &LiftingSpec {
        &self.spec
    }

    pub fn carrier(&self) -> &Carrier {
        self.system.carrier()
    }

    pub fn kind(&self) -> FiberKind {
        self.spec.kind
    }

    /// `τ_a(Fk(c x))` for every state.
    pub fn values(&self, d: &DupPos) -> Result<Vec<usize>> {
        let m = self.omega.size();
        self.steps.iter().map(|e| self.spec.tau.eval_finite(d.index, &fmap_raw(&self.spec.behavior, &d.map, m, e))).collect()
    }

    pub fn duplicator_positions(&self) -> Result<Vec<DupPos>> {
        let maps = all_maps(self.system.size(), self.omega.size())?;
        Ok((0..self.spec.tau.len()).flat_map(|index| maps.iter().map(move |map| DupPos { index, map: map.clone() })).collect())
    }

    fn check_position(&self, p: &FiberObject) -> Result<()> {
        if p.kind() != self.spec.kind {
            return Err(Error::KindMismatch { left: self.spec.kind, right: p.kind() });
        }
        self.carrier().check_size(p.carrier())
    }

    fn check_move(&self, d: &DupPos) -> Result<()> {
        if d.index >= self.spec.tau.len() || d.map.len() != self.system.size() || d.map.iter().any(|&v| v >= self.omega.size()) {
            return Err(Error::IllegalMove(format!("{d:?} is not a Duplicator position of this game")));
        }
        Ok(())
    }

    pub fn move_s(&self, p: &FiberObject, d: &DupPos) -> Result<bool> {
        self.check_position(p)?;
        self.check_move(d)?;
        Ok(not_decent(p, &self.omega, &self.values(d)?))
    }

    pub fn move_d(&self, d: &DupPos, p: &FiberObject) -> Result<bool> {
        self.check_position(p)?;
        self.check_move(d)?;
        Ok(not_decent(p, &self.omega, &d.map))
    }

    /// Spoiler's legal moves from `p`.
    pub fn spoiler_moves(&self, p: &FiberObject) -> Result<Vec<DupPos>> {
        self.check_position(p)?;
        let mut out = Vec::new();
        for d in self.duplicator_positions()? {
            if not_decent(p, &self.omega, &self.values(&d)?) {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// Every Spoiler position; used by the explicit solver on small carriers.
    pub fn all_positions(&self, limit: usize) -> Result<Vec<FiberObject>> {
        let n = self.system.size();
        match self.spec.kind {
            FiberKind::EqRel => {
                if n > 8 {
                    return Err(Error::GuardExceeded {
                        what: "equivalence relations".into(),
                        needed: 4140,
                        limit: limit as u128,
                    });
                }
                let all: Vec<FiberObject> = all_eqrels(n).into_iter().map(Into::into).collect();
                if all.len() > limit {
                    return Err(Error::GuardExceeded {
                        what: "equivalence relations".into(),
                        needed: all.len() as u128,
                        limit: limit as u128,
                    });
                }
                Ok(all)
            }
            _ => {
                let bits = n * n;
                if bits >= 32 || (1usize << bits) > limit {
                    return Err(Error::GuardExceeded {
                        what: "endorelations".into(),
                        needed: 1u128 << bits.min(127),
                        limit: limit as u128,
                    });
                }
                Ok((0..1usize << bits)
                    .map(|mask| {
                        let rel = (0..bits).map(|i| mask >> i & 1 == 1).collect();
                        ERel::new(self.carrier().clone(), rel).expect("shape").into()
                    })
                    .collect())
            }
        }
    }
}

impl Carrier {
    fn check_size(&self, other: &Carrier) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::CarrierMismatch { expected: self.size(), found: other.size() });
        }
        Ok(())
    }
}

/// Every Spoiler move from some member of `v` has a Duplicator answer in `v`.
pub fn is_invariant(v: &[FiberObject], g: &CodensityGame) -> Result<bool> {
    for p in v {
        g.check_position(p)?;
    }
    if v.is_empty() {
        return Ok(true);
    }
    for d in g.duplicator_positions()? {
        let values = g.values(&d)?;
        let attacked = v.iter().any(|p| not_decent(p, &g.omega, &values));
        if attacked && !v.iter().any(|p| not_decent(p, &g.omega, &d.map)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `⊔ V`, the bottom element for the empty set.
pub fn invariant_join(v: &[FiberObject], g: &CodensityGame) -> Result<FiberObject> {
    join(g.kind(), g.carrier(), v)
}

/// Both sides of: `V` is an invariant iff `⊔ V` is a bisimulation.
pub fn bisim_iff(v: &[FiberObject], g: &CodensityGame) -> Result<(bool, bool)> {
    let inv = is_invariant(v, g)?;
    let bis = is_bisimulation(&invariant_join(v, g)?, &g.system, &g.spec, 0.0)?;
    Ok((inv, bis))
}

/// `P ⊑ ν`.
pub fn is_winning(p: &FiberObject, g: &CodensityGame) -> Result<bool> {
    g.check_position(p)?;
    fiber_leq(p, &nu_exact(&g.system, &g.spec)?)
}

/// Duplicator's winning region by explicit safety-game solving: repeatedly
/// drop positions from which Spoiler has a move that no surviving position
/// answers.
pub fn solve_explicit(g: &CodensityGame, limit: usize) -> Result<Vec<(FiberObject, bool)>> {
    let positions = g.all_positions(limit)?;
    let dups = g.duplicator_positions()?;
    let values: Vec<Vec<usize>> = dups.iter().map(|d| g.values(d)).collect::<Result<_>>()?;
    let attacks: Vec<Vec<usize>> =
        positions.iter().map(|p| (0..dups.len()).filter(|&i| not_decent(p, &g.omega, &values[i])).collect()).collect();
    let answers: Vec<Vec<usize>> =
        dups.iter().map(|d| (0..positions.len()).filter(|&j| not_decent(&positions[j], &g.omega, &d.map)).collect()).collect();
    let mut alive = vec![true; positions.len()];
    loop {
        let mut changed = false;
        for i in 0..positions.len() {
            if alive[i] && attacks[i].iter().any(|&d| !answers[d].iter().any(|&j| alive[j])) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(positions.into_iter().zip(alive).collect())
}

/// A positional Duplicator strategy: replies are indices into the invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    pub invariant: Vec<FiberObject>,
    pub replies: BTreeMap<DupPos, usize>,
}

impl Strategy {
    pub fn reply(&self, d: &DupPos) -> Option<&FiberObject> {
        self.replies.get(d).map(|&i| &self.invariant[i])
    }
}

fn lowest_reply(v: &[FiberObject], g: &CodensityGame, d: &DupPos) -> Option<usize> {
    v.iter().position(|p| not_decent(p, &g.omega, &d.map))
}

/// Answers every Duplicator position reachable from `start` with the first
/// member of `v` that is a legal reply.
pub fn synthesize_strategy(v: &[FiberObject], g: &CodensityGame, start: &FiberObject) -> Result<Strategy> {
    let Some(s) = v.iter().position(|p| p == start) else {
        return Err(Error::Precondition("the start position is not in the invariant".into()));
    };
    if !is_invariant(v, g)? {
        return Err(Error::Precondition("the set is not an invariant".into()));
    }
    let mut replies = BTreeMap::new();
    let mut seen = BTreeSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(i) = queue.pop_front() {
        for d in g.spoiler_moves(&v[i])? {
            if replies.contains_key(&d) {
                continue;
            }
            let j = lowest_reply(v, g, &d).expect("invariants answer every attack");
            replies.insert(d, j);
            if seen.insert(j) {
                queue.push_back(j);
            }
        }
    }
    let strategy = Strategy { invariant: v.to_vec(), replies };
    debug_assert!(replay_strategy(&strategy, g, start)?);
    Ok(strategy)
}

/// Explores every play from `start` that follows the strategy; false when a
/// reached Duplicator position has no legal mapped reply.
pub fn replay_strategy(strategy: &Strategy, g: &CodensityGame, start: &FiberObject) -> Result<bool> {
    let mut seen: Vec<FiberObject> = vec![start.clone()];
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(p) = queue.pop_front() {
        if !strategy.invariant.contains(&p) {
            return Ok(false);
        }
        for d in g.spoiler_moves(&p)? {
            match strategy.reply(&d) {
                Some(q) if g.move_d(&d, q)? => {
                    if !seen.contains(q) {
                        seen.push(q.clone());
                        queue.push_back(q.clone());
                    }
                }
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// The composite game of two systems under a structure modality.
#[derive(Clone, Debug)]
pub struct CompositeGame {
    pub components: Vec<CodensityGame>,
    pub sigma: StructModality,
}

/// A composite Duplicator position `(a, k₁, k₂)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositeDupPos {
    pub index: usize,
    pub maps: Vec<Vec<usize>>,
}

impl CompositeGame {
    pub fn new(systems: &[System], sigma: StructModality, spec: &LiftingSpec) -> Result<Self> {
        if systems.len() != 2 {
            return Err(Error::Unsupported("composite games are binary".into()));
        }
        if !sigma.is_finite() {
            return Err(Error::Unsupported("composite games need a finite structure modality".into()));
        }
        let components = systems.iter().map(|s| CodensityGame::new(s.clone(), spec.clone())).collect::<Result<Vec<_>>>()?;
        let total: usize = components.iter().map(|g| g.system.size()).sum();
        if total > MAX_GAME_STATES {
            return Err(Error::GuardExceeded {
                what: "composite maps".into(),
                needed: 1u128 << total.min(127),
                limit: 1u128 << MAX_GAME_STATES,
            });
        }
        Ok(CompositeGame { components, sigma })
    }

    fn spec(&self) -> &LiftingSpec {
        &self.components[0].spec
    }

    fn omega(&self) -> &FiberObject {
        &self.components[0].omega
    }

    pub fn duplicator_positions(&self) -> Result<Vec<CompositeDupPos>> {
        let m = self.omega().size();
        let a = all_maps(self.components[0].system.size(), m)?;
        let b = all_maps(self.components[1].system.size(), m)?;
        let mut out = Vec::new();
        for index in 0..self.spec().tau.len() {
            for k1 in &a {
                for k2 in &b {
                    out.push(CompositeDupPos { index, maps: vec![k1.clone(), k2.clone()] });
                }
            }
        }
        Ok(out)
    }

    /// `σ(τ_a(Fk₁ c₁ x), τ_a(Fk₂ c₂ y))` on the product carrier.
    fn values(&self, d: &CompositeDupPos) -> Result<Vec<usize>> {
        let v1 = self.components[0].values(&DupPos { index: d.index, map: d.maps[0].clone() })?;
        let v2 = self.components[1].values(&DupPos { index: d.index, map: d.maps[1].clone() })?;
        let mut out = Vec::with_capacity(v1.len() * v2.len());
        for &a in &v1 {
            for &b in &v2 {
                out.push(self.sigma.eval_finite(&[a, b])?);
            }
        }
        Ok(out)
    }

    pub fn lifted(&self, ps: &[FiberObject]) -> Result<FiberObject> {
        structure_lift(&self.sigma, &self.spec().truth, ps)
    }

    fn check_tuple(&self, ps: &[FiberObject]) -> Result<()> {
        if ps.len() != 2 {
            return Err(Error::TypeMismatch(format!("{} components for a binary game", ps.len())));
        }
        for (g, p) in self.components.iter().zip(ps) {
            g.check_position(p)?;
        }
        Ok(())
    }

    pub fn move_s(&self, ps: &[FiberObject], d: &CompositeDupPos) -> Result<bool> {
        self.check_tuple(ps)?;
        Ok(not_decent(&self.lifted(ps)?, self.omega(), &self.values(d)?))
    }

    pub fn move_d(&self, d: &CompositeDupPos, ps: &[FiberObject]) -> Result<bool> {
        self.check_tuple(ps)?;
        Ok(ps.iter().zip(&d.maps).any(|(p, k)| not_decent(p, self.omega(), k)))
    }
}

pub fn is_invariant_composite(v: &[Vec<FiberObject>], cg: &CompositeGame) -> Result<bool> {
    let lifted: Vec<FiberObject> = v
        .iter()
        .map(|ps| {
            cg.check_tuple(ps)?;
            cg.lifted(ps)
        })
        .collect::<Result<_>>()?;
    if v.is_empty() {
        return Ok(true);
    }
    for d in cg.duplicator_positions()? {
        let values = cg.values(&d)?;
        let attacked = lifted.iter().any(|l| not_decent(l, cg.omega(), &values));
        if attacked && !v.iter().any(|ps| ps.iter().zip(&d.maps).any(|(p, k)| not_decent(p, cg.omega(), k))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Cartesian product of component invariants.
pub fn compose_invariants(vs: &[Vec<FiberObject>]) -> Vec<Vec<FiberObject>> {
    let mut out: Vec<Vec<FiberObject>> = vec![vec![]];
    for v in vs {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                v.iter().map(move |p| {
                    let mut t = prefix.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Composes component invariants after checking each, and reports whether
/// the product is an invariant of the composite game.
pub fn compose_and_verify(vs: &[Vec<FiberObject>], cg: &CompositeGame) -> Result<(Vec<Vec<FiberObject>>, bool)> {
    for (i, (v, g)) in vs.iter().zip(&cg.components).enumerate() {
        if !is_invariant(v, g)? {
            return Err(Error::Precondition(format!("component {i} is not an invariant")));
        }
    }
    let product = compose_invariants(vs);
    let ok = is_invariant_composite(&product, cg)?;
    Ok((product, ok))
}

/// `V` together with its componentwise join.
pub fn join_closure(v: &[Vec<FiberObject>], kind: FiberKind, carriers: &[Carrier]) -> Result<Vec<Vec<FiberObject>>> {
    let joined = carriers
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let members: Vec<FiberObject> = v.iter().map(|ps| ps[i].clone()).collect();
            join(kind, c, &members)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = v.to_vec();
    if !out.contains(&joined) {
        out.push(joined);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositeReport {
    pub gate: Verdict,
    /// `(bisimulation, invariant)` for `V`; the first implies the second.
    pub item1: Option<(bool, bool)>,
    /// `(invariant, bisimulation)` for the join closure; these must agree.
    pub item2: Option<(bool, bool)>,
    /// Every closure member lifts below the composed bisimilarity.
    pub witnesses: Option<bool>,
    pub holds: Option<bool>,
}

/// Evaluates both directions of the composite invariant equivalence for `V`,
/// given the outcome of the liftability gate for the combination.
pub fn check_composite_equivalence(
    v: &[Vec<FiberObject>],
    cg: &CompositeGame,
    op: CompositionOp,
    gate: Verdict,
) -> Result<CompositeReport> {
    if !gate.is_verified() {
        return Ok(CompositeReport { gate, item1: None, item2: None, witnesses: None, holds: None });
    }
    let spec = cg.spec().clone();
    let systems: Vec<System> = cg.components.iter().map(|g| g.system.clone()).collect();
    let composed = compose_systems(&systems, op)?;
    let kind = spec.kind;
    let carrier = composed.carrier().clone();
    let join_lifted = |set: &[Vec<FiberObject>]| -> Result<FiberObject> {
        let lifted: Vec<FiberObject> = set.iter().map(|ps| cg.lifted(ps)).collect::<Result<_>>()?;
        let j = join(kind, &carrier, &lifted)?;
        Ok(crate::fibers::pullback_map(&(0..carrier.size()).collect::<Vec<_>>(), &carrier, &j))
    };

    let bis1 = is_bisimulation(&join_lifted(v)?, &composed, &spec, 0.0)?;
    let inv1 = is_invariant_composite(v, cg)?;

    let carriers: Vec<Carrier> = cg.components.iter().map(|g| g.carrier().clone()).collect();
    let closure = join_closure(v, kind, &carriers)?;
    let inv2 = is_invariant_composite(&closure, cg)?;
    let bis2 = is_bisimulation(&join_lifted(&closure)?, &composed, &spec, 0.0)?;

    let witnesses = if inv2 {
        let nu = nu_exact(&composed, &spec)?;
        let mut ok = true;
        for ps in &closure {
            let l = cg.lifted(ps)?;
            let l = crate::fibers::pullback_map(&(0..carrier.size()).collect::<Vec<_>>(), &carrier, &l);
            ok &= fiber_leq(&l, &nu)?;
        }
        Some(ok)
    } else {
        None
    };
    let holds = (!bis1 || inv1) && inv2 == bis2 && witnesses.unwrap_or(true);
    Ok(CompositeReport { gate, item1: Some((bis1, inv1)), item2: Some((inv2, bis2)), witnesses, holds: Some(holds) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Winner {
    Spoiler,
    Duplicator,
}

impl Winner {
    pub fn name(self) -> &'static str {
        match self {
            Winner::Spoiler => "spoiler",
            Winner::Duplicator => "duplicator",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Round {
    pub spoiler: DupPos,
    pub reply: Option<FiberObject>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub start: FiberObject,
    pub rounds: Vec<Round>,
    pub winner: Option<Winner>,
}

/// An interactive play: the caller moves for Spoiler, the session answers
/// for Duplicator.
#[derive(Clone, Debug)]
pub struct Session {
    game: CodensityGame,
    invariant: Vec<FiberObject>,
    current: FiberObject,
    transcript: Transcript,
}

impl Session {
    /// Duplicator plays from `invariant`, by default `{ν}` plus the start
    /// when it lies below `ν`.
    pub fn new(game: CodensityGame, start: FiberObject, invariant: Option<Vec<FiberObject>>) -> Result<Self> {
        game.check_position(&start)?;
        let invariant = match invariant {
            Some(v) => {
                if !is_invariant(&v, &game)? {
                    return Err(Error::Precondition("the supplied set is not an invariant".into()));
                }
                v
            }
            None => {
                let nu = nu_exact(&game.system, &game.spec)?;
                let mut v = vec![nu.clone()];
                if start != nu && fiber_leq(&start, &nu)? {
                    v.push(start.clone());
                }
                v
            }
        };
        let mut s = Session {
            game,
            invariant,
            current: start.clone(),
            transcript: Transcript { start, rounds: Vec::new(), winner: None },
        };
        s.settle()?;
        Ok(s)
    }

    fn settle(&mut self) -> Result<()> {
        if self.transcript.winner.is_none() && self.game.spoiler_moves(&self.current)?.is_empty() {
            self.transcript.winner = Some(Winner::Duplicator);
        }
        Ok(())
    }

    pub fn current(&self) -> &FiberObject {
        &self.current
    }

    pub fn game(&self) -> &CodensityGame {
        &self.game
    }

    pub fn winner(&self) -> Option<Winner> {
        self.transcript.winner
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn legal_moves(&self) -> Result<Vec<DupPos>> {
        if self.transcript.winner.is_some() {
            return Ok(Vec::new());
        }
        self.game.spoiler_moves(&self.current)
    }

    /// Plays one Spoiler move and Duplicator's answer.
    pub fn play(&mut self, d: DupPos) -> Result<Option<FiberObject>> {
        if let Some(w) = self.transcript.winner {
            return Err(Error::IllegalMove(format!("the play is over; {} won", w.name())));
        }
        if !self.game.move_s(&self.current, &d)? {
            return Err(Error::IllegalMove(format!(
                "index {} with map {:?}: the modality is decent on the current position, so Spoiler cannot move there",
                self.game.spec.tau.indices[d.index], d.map
            )));
        }
        let reply = match lowest_reply(&self.invariant, &self.game, &d) {
            Some(j) => Some(self.invariant[j].clone()),
            None => self
                .game
                .all_positions(1 << 12)
                .ok()
                .and_then(|all| all.into_iter().find(|p| not_decent(p, &self.game.omega, &d.map))),
        };
        self.transcript.rounds.push(Round { spoiler: d, reply: reply.clone() });
        match &reply {
            Some(p) => {
                self.current = p.clone();
                self.settle()?;
            }
            None => self.transcript.winner = Some(Winner::Spoiler),
        }
        Ok(reply)
    }
}

/// Replays the Spoiler moves of a transcript and checks that the same
/// replies and outcome come out.
pub fn replay_transcript(game: CodensityGame, transcript: &Transcript, invariant: Option<Vec<FiberObject>>) -> Result<bool> {
    let mut s = Session::new(game, transcript.start.clone(), invariant)?;
    for r in &transcript.rounds {
        let reply = s.play(r.spoiler.clone())?;
        if reply != r.reply {
            return Ok(false);
        }
    }
    Ok(s.transcript == *transcript)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::KripkeSystem;
    use crate::fibers::EqRel;

    fn game(succ: Vec<Vec<usize>>) -> CodensityGame {
        let s = System::Kripke(KripkeSystem { carrier: Carrier::new(succ.len()), succ });
        CodensityGame::new(s, LiftingSpec::kripke()).unwrap()
    }

    #[test]
    fn invariant_examples() {
        let g = game(vec![vec![0], vec![]]);
        let diag: FiberObject = EqRel::diagonal(Carrier::new(2)).into();
        let total: FiberObject = EqRel::total(Carrier::new(2)).into();
        assert!(is_invariant(std::slice::from_ref(&diag), &g).unwrap());
        assert!(!is_invariant(std::slice::from_ref(&total), &g).unwrap());
        assert!(is_invariant(&[], &g).unwrap());
        assert_eq!(bisim_iff(std::slice::from_ref(&total), &g).unwrap(), (false, false));
        assert!(is_winning(&diag, &g).unwrap());
        assert!(!is_winning(&total, &g).unwrap());
    }

    #[test]
    fn explicit_solver_agrees() {
        let g = game(vec![vec![1], vec![2], vec![0, 2]]);
        for (p, w) in solve_explicit(&g, 1 << 10).unwrap() {
            assert_eq!(w, is_winning(&p, &g).unwrap());
        }
    }

    #[test]
    fn session_outcomes() {
        let g = game(vec![vec![0], vec![]]);
        let diag: FiberObject = EqRel::diagonal(Carrier::new(2)).into();
        let s = Session::new(g.clone(), diag, None).unwrap();
        assert_eq!(s.winner(), Some(Winner::Duplicator));
        let total: FiberObject = EqRel::total(Carrier::new(2)).into();
        let mut s = Session::new(g.clone(), total, None).unwrap();
        let reply = s.play(DupPos { index: 0, map: vec![1, 1] }).unwrap();
        assert!(reply.is_none());
        assert_eq!(s.winner(), Some(Winner::Spoiler));
        assert!(replay_transcript(g, s.transcript(), None).unwrap());
    }

    #[test]
    fn strategy_requires_membership() {
        let g = game(vec![vec![1], vec![0]]);
        let diag: FiberObject = EqRel::diagonal(Carrier::new(2)).into();
        let total: FiberObject = EqRel::total(Carrier::new(2)).into();
        assert!(synthesize_strategy(std::slice::from_ref(&diag), &g, &total).is_err());
        let st = synthesize_strategy(&[total.clone(), diag], &g, &total).unwrap();
        assert!(replay_strategy(&st, &g, &total).unwrap());
    }

    #[test]
    fn join_closure_sizes() {
        let c = Carrier::new(3);
        let a: FiberObject = EqRel::from_labels(c.clone(), &[0, 0, 1]).unwrap().into();
        let b: FiberObject = EqRel::from_labels(c.clone(), &[0, 1, 1]).unwrap().into();
        let v = vec![vec![a.clone(), a.clone()], vec![b.clone(), b.clone()]];
        let closed = join_closure(&v, FiberKind::EqRel, &[c.clone(), c.clone()]).unwrap();
        assert_eq!(closed.len(), 3);
        let single = vec![vec![a.clone(), b.clone()]];
        assert_eq!(join_closure(&single, FiberKind::EqRel, &[c.clone(), c]).unwrap(), single);
    }
}
