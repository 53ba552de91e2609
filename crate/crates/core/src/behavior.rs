//! Behavior functors on finite sets, their elements, and finite coalgebras.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::fibers::{Carrier, FinFun};

/// Mass tolerance for distributions.
pub const MASS_TOL: f64 = 1e-9;

/// A probability distribution stored densely over its carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct Dist {
    carrier: Carrier,
    weights: Vec<f64>,
}

impl Dist {
    pub fn new(carrier: Carrier, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != carrier.size() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for a carrier of size {}",
                weights.len(),
                carrier.size()
            )));
        }
        check_weights(&weights).map_err(Error::InvalidDistribution)?;
        Ok(Dist { carrier, weights })
    }

    pub fn point(carrier: Carrier, x: usize) -> Self {
        let mut weights = vec![0.0; carrier.size()];
        weights[x] = 1.0;
        Dist { carrier, weights }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support(&self) -> Vec<usize> {
        support(&self.weights)
    }
}

pub(crate) fn support(weights: &[f64]) -> Vec<usize> {
    weights.iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(i, _)| i).collect()
}

fn check_weights(weights: &[f64]) -> std::result::Result<(), String> {
    if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
        return Err(format!("weight {w} at index {i} is not a nonnegative number"));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > MASS_TOL {
        return Err(format!("weights sum to {sum}"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctorDesc {
    P,
    D,
    /// `2 × (−)^Σ`, carrying the weight used by the metric modalities.
    Fda {
        alphabet: Vec<String>,
        w: f64,
    },
    PD,
    Product(usize),
}

impl FunctorDesc {
    pub fn fda(alphabet: Vec<String>, w: f64) -> Result<Self> {
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::InvalidSystem(format!("weight {w} outside (0,1]")));
        }
        Ok(FunctorDesc::Fda { alphabet, w })
    }

    pub fn name(&self) -> String {
        match self {
            FunctorDesc::P => "P".into(),
            FunctorDesc::D => "D".into(),
            FunctorDesc::Fda { .. } => "Fda".into(),
            FunctorDesc::PD => "PD".into(),
            FunctorDesc::Product(n) => format!("Product({n})"),
        }
    }
}

/// An element of `F(X)` for a finite `X = {0..n}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Elem {
    /// Sorted, duplicate-free subset.
    Set(Vec<usize>),
    /// Dense weights over `X`.
    Dist(Vec<f64>),
    Da {
        t: bool,
        rho: Vec<usize>,
    },
    /// Finite set of distributions, sorted and duplicate-free.
    SetDist(Vec<Vec<f64>>),
    Tuple(Vec<usize>),
}

impl Elem {
    pub fn set(mut xs: Vec<usize>) -> Self {
        xs.sort_unstable();
        xs.dedup();
        Elem::Set(xs)
    }

    pub fn set_dist(mut ds: Vec<Vec<f64>>) -> Self {
        ds.sort_by(|a, b| cmp_weights(a, b));
        ds.dedup();
        Elem::SetDist(ds)
    }
}

pub(crate) fn cmp_weights(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Checks that `e` is a well-formed element of `F(X)` with `|X| = n`.
pub fn check_elem(f: &FunctorDesc, n: usize, e: &Elem) -> Result<()> {
    let range = |xs: &[usize]| -> Result<()> {
        match xs.iter().find(|&&x| x >= n) {
            Some(x) => Err(Error::TypeMismatch(format!("index {x} outside carrier of size {n}"))),
            None => Ok(()),
        }
    };
    let dist = |w: &[f64]| -> Result<()> {
        if w.len() != n {
            return Err(Error::TypeMismatch(format!("distribution of length {} over carrier of size {n}", w.len())));
        }
        check_weights(w).map_err(Error::InvalidDistribution)
    };
    match (f, e) {
        (FunctorDesc::P, Elem::Set(xs)) => range(xs),
        (FunctorDesc::D, Elem::Dist(w)) => dist(w),
        (FunctorDesc::Fda { alphabet, .. }, Elem::Da { rho, .. }) => {
            if rho.len() != alphabet.len() {
                return Err(Error::TypeMismatch(format!(
                    "transition table has {} entries for an alphabet of size {}",
                    rho.len(),
                    alphabet.len()
                )));
            }
            range(rho)
        }
        (FunctorDesc::PD, Elem::SetDist(ds)) => ds.iter().try_for_each(|w| dist(w)),
        (FunctorDesc::Product(k), Elem::Tuple(xs)) => {
            if xs.len() != *k {
                return Err(Error::TypeMismatch(format!("tuple of length {} for arity {k}", xs.len())));
            }
            range(xs)
        }
        _ => Err(Error::TypeMismatch(format!("element {e:?} does not belong to {}", f.name()))),
    }
}

pub(crate) fn pushforward(map: &[usize], target: usize, w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; target];
    for (x, &p) in w.iter().enumerate() {
        out[map[x]] += p;
    }
    out
}

/// Functor action on a map given by its table, without type checks.
pub(crate) fn fmap_raw(f: &FunctorDesc, map: &[usize], target: usize, e: &Elem) -> Elem {
    match e {
        Elem::Set(xs) => Elem::set(xs.iter().map(|&x| map[x]).collect()),
        Elem::Dist(w) => Elem::Dist(pushforward(map, target, w)),
        Elem::Da { t, rho } => Elem::Da { t: *t, rho: rho.iter().map(|&x| map[x]).collect() },
        Elem::SetDist(ds) => Elem::set_dist(ds.iter().map(|w| pushforward(map, target, w)).collect()),
        Elem::Tuple(xs) => {
            let _ = f;
            Elem::Tuple(xs.iter().map(|&x| map[x]).collect())
        }
    }
}

pub fn fmap(f: &FunctorDesc, g: &FinFun, e: &Elem) -> Result<Elem> {
    check_elem(f, g.source().size(), e)?;
    Ok(fmap_raw(f, g.map(), g.target().size(), e))
}

/// All elements of `F(X)` for the finitary functors, in a fixed order.
pub fn enumerate_elems(f: &FunctorDesc, n: usize, limit: u128) -> Result<Vec<Elem>> {
    let guard = |needed: u128| -> Result<()> {
        if needed > limit {
            Err(Error::GuardExceeded { what: format!("elements of {}", f.name()), needed, limit })
        } else {
            Ok(())
        }
    };
    match f {
        FunctorDesc::P => {
            let needed = 1u128.checked_shl(n as u32).unwrap_or(u128::MAX);
            guard(needed)?;
            Ok((0..needed as usize).map(|mask| Elem::Set((0..n).filter(|i| mask >> i & 1 == 1).collect())).collect())
        }
        FunctorDesc::Fda { alphabet, .. } => {
            let k = alphabet.len() as u32;
            let needed = (n as u128).checked_pow(k).and_then(|v| v.checked_mul(2)).unwrap_or(u128::MAX);
            guard(needed)?;
            let mut out = Vec::with_capacity(needed as usize);
            for t in [false, true] {
                for rho in tuples(n, alphabet.len()) {
                    out.push(Elem::Da { t, rho });
                }
            }
            Ok(out)
        }
        FunctorDesc::Product(k) => {
            let needed = (n as u128).checked_pow(*k as u32).unwrap_or(u128::MAX);
            guard(needed)?;
            Ok(tuples(n, *k).into_iter().map(Elem::Tuple).collect())
        }
        FunctorDesc::D | FunctorDesc::PD => Err(Error::Unsupported(format!("{} has infinitely many elements", f.name()))),
    }
}

/// All length-`k` tuples over `0..n` in lexicographic order.
pub(crate) fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 && k > 0 {
        return out;
    }
    let mut cur = vec![0usize; k];
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KripkeSystem {
    pub carrier: Carrier,
    pub succ: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DASystem {
    pub carrier: Carrier,
    pub alphabet: Vec<String>,
    pub accepting: Vec<bool>,
    /// `delta[state][symbol]`
    pub delta: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MDPSystem {
    pub carrier: Carrier,
    pub choices: Vec<Vec<Dist>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum System {
    Kripke(KripkeSystem),
    Da(DASystem),
    Mdp(MDPSystem),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    Kripke,
    Da,
    Mdp,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::Kripke => "kripke",
            SystemKind::Da => "dfa",
            SystemKind::Mdp => "mdp",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub state: Option<String>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.state {
            Some(s) => write!(f, "state {s}, {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

impl System {
    pub fn kind(&self) -> SystemKind {
        match self {
            System::Kripke(_) => SystemKind::Kripke,
            System::Da(_) => SystemKind::Da,
            System::Mdp(_) => SystemKind::Mdp,
        }
    }

    pub fn carrier(&self) -> &Carrier {
        match self {
            System::Kripke(s) => &s.carrier,
            System::Da(s) => &s.carrier,
            System::Mdp(s) => &s.carrier,
        }
    }

    pub fn size(&self) -> usize {
        self.carrier().size()
    }

    /// The behavior functor of the system; `w` only matters for automata.
    pub fn functor(&self, w: f64) -> FunctorDesc {
        match self {
            System::Kripke(_) => FunctorDesc::P,
            System::Da(s) => FunctorDesc::Fda { alphabet: s.alphabet.clone(), w },
            System::Mdp(_) => FunctorDesc::PD,
        }
    }

    pub fn coalgebra_at(&self, state: usize) -> Result<Elem> {
        if state >= self.size() {
            return Err(Error::InvalidSystem(format!("state {state} out of range for {} states", self.size())));
        }
        Ok(self.step(state))
    }

    pub(crate) fn step(&self, state: usize) -> Elem {
        match self {
            System::Kripke(s) => Elem::set(s.succ[state].clone()),
            System::Da(s) => Elem::Da { t: s.accepting[state], rho: s.delta[state].clone() },
            System::Mdp(s) => Elem::set_dist(s.choices[state].iter().map(|d| d.weights.clone()).collect()),
        }
    }

    /// `c(x)` for every state, in order.
    pub fn steps(&self) -> Vec<Elem> {
        (0..self.size()).map(|x| self.step(x)).collect()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let n = self.size();
        let carrier = self.carrier();
        let mut out = Vec::new();
        let mut push = |state: Option<usize>, field: &str, message: String| {
            out.push(Violation { state: state.map(|s| carrier.label(s)), field: field.into(), message });
        };
        if let Some(labels) = carrier.labels() {
            let mut seen = std::collections::HashSet::new();
            for l in labels {
                if !seen.insert(l) {
                    push(None, "states", format!("duplicate state name {l:?}"));
                }
            }
        }
        match self {
            System::Kripke(s) => {
                if s.succ.len() != n {
                    push(None, "succ", format!("{} successor lists for {n} states", s.succ.len()));
                }
                for (x, succ) in s.succ.iter().enumerate().take(n) {
                    for &y in succ {
                        if y >= n {
                            push(Some(x), "succ", format!("successor {y} out of range"));
                        }
                    }
                }
            }
            System::Da(s) => {
                if s.accepting.len() != n {
                    push(None, "accepting", format!("{} acceptance flags for {n} states", s.accepting.len()));
                }
                if s.delta.len() != n {
                    push(None, "delta", format!("{} transition rows for {n} states", s.delta.len()));
                }
                let mut seen = std::collections::HashSet::new();
                for a in &s.alphabet {
                    if !seen.insert(a) {
                        push(None, "alphabet", format!("duplicate symbol {a:?}"));
                    }
                }
                for (x, row) in s.delta.iter().enumerate().take(n) {
                    if row.len() != s.alphabet.len() {
                        push(Some(x), "delta", format!("{} transitions for {} symbols", row.len(), s.alphabet.len()));
                    }
                    for (a, &y) in row.iter().enumerate() {
                        if y >= n {
                            let sym = s.alphabet.get(a).cloned().unwrap_or_else(|| a.to_string());
                            push(Some(x), "delta", format!("target {y} of symbol {sym:?} out of range"));
                        }
                    }
                }
            }
            System::Mdp(s) => {
                if s.choices.len() != n {
                    push(None, "choices", format!("{} choice sets for {n} states", s.choices.len()));
                }
                for (x, cs) in s.choices.iter().enumerate().take(n) {
                    for (i, d) in cs.iter().enumerate() {
                        if d.weights.len() != n {
                            push(Some(x), "choices", format!("choice {i} has {} weights", d.weights.len()));
                        } else if let Err(m) = check_weights(&d.weights) {
                            push(Some(x), "choices", format!("choice {i}: {m}"));
                        }
                    }
                }
            }
        }
        out
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        match self.validate().into_iter().next() {
            Some(v) => Err(Error::InvalidSystem(v.to_string())),
            None => Ok(()),
        }
    }
}
