//! Finite carriers and the four concrete fibers: equivalence relations,
//! endorelations, pseudometrics and Lawvere metrics.
//!
//! Every fiber is a complete lattice. For the metric fibers the order is the
//! reverse pointwise order: smaller distances sit higher, so `⊤` is the
//! all-zero metric and `⊥` the discrete metric.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Comparison tolerance for all metric predicates.
pub const TOL: f64 = 1e-9;

#[derive(Clone, Debug, Default)]
pub struct Carrier {
    size: usize,
    labels: Option<Arc<Vec<String>>>,
}

impl Carrier {
    pub fn new(size: usize) -> Self {
        Carrier { size, labels: None }
    }

    pub fn labelled(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidObject(format!("duplicate carrier label {l:?}")));
            }
        }
        Ok(Carrier { size: labels.len(), labels: Some(Arc::new(labels)) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref().map(|v| v.as_slice())
    }

    /// Display name of an element; falls back to the index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse::<usize>().ok().filter(|&i| i < self.size),
        }
    }

    fn check_same(&self, other: &Carrier) -> Result<()> {
        if self.size != other.size {
            return Err(Error::CarrierMismatch { expected: self.size, found: other.size });
        }
        Ok(())
    }
}

/// Carriers compare by size; labels are display data only.
impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
    }
}

impl Eq for Carrier {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFun {
    source: Carrier,
    target: Carrier,
    map: Vec<usize>,
}

impl FinFun {
    pub fn new(source: Carrier, target: Carrier, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::InvalidMap(format!("map has {} entries for a source of size {}", map.len(), source.size())));
        }
        if let Some((i, &v)) = map.iter().enumerate().find(|(_, &v)| v >= target.size()) {
            return Err(Error::InvalidMap(format!("entry {i} maps to {v}, target has size {}", target.size())));
        }
        Ok(FinFun { source, target, map })
    }

    pub fn identity(carrier: Carrier) -> Self {
        let map = (0..carrier.size()).collect();
        FinFun { source: carrier.clone(), target: carrier, map }
    }

    pub fn source(&self) -> &Carrier {
        &self.source
    }

    pub fn target(&self) -> &Carrier {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `g ∘ self`
    pub fn then(&self, g: &FinFun) -> Result<FinFun> {
        self.target.check_same(&g.source)?;
        Ok(FinFun { source: self.source.clone(), target: g.target.clone(), map: self.map.iter().map(|&y| g.map[y]).collect() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberKind {
    EqRel,
    ERel,
    PMet,
    LMet,
}

impl FiberKind {
    pub fn is_metric(self) -> bool {
        matches!(self, FiberKind::PMet | FiberKind::LMet)
    }

    pub fn name(self) -> &'static str {
        match self {
            FiberKind::EqRel => "eqrel",
            FiberKind::ERel => "erel",
            FiberKind::PMet => "pmet",
            FiberKind::LMet => "lmet",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "eqrel" => Some(FiberKind::EqRel),
            "erel" => Some(FiberKind::ERel),
            "pmet" => Some(FiberKind::PMet),
            "lmet" => Some(FiberKind::LMet),
            _ => None,
        }
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An equivalence relation stored as a canonical block assignment: blocks are
/// numbered in order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EqRel {
    carrier: Carrier,
    block_of: Vec<usize>,
}

impl std::hash::Hash for Carrier {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.size.hash(state);
    }
}

impl EqRel {
    /// Builds from any block labelling; ids need not be contiguous.
    pub fn from_labels(carrier: Carrier, labels: &[usize]) -> Result<Self> {
        if labels.len() != carrier.size() {
            return Err(Error::CarrierMismatch { expected: carrier.size(), found: labels.len() });
        }
        Ok(EqRel { carrier, block_of: canonical_blocks(labels) })
    }

    pub fn from_blocks(carrier: Carrier, blocks: &[Vec<usize>]) -> Result<Self> {
        let n = carrier.size();
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n {
                    return Err(Error::InvalidObject(format!("element {x} outside carrier of size {n}")));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::InvalidObject(format!("element {x} appears in two blocks")));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidObject(format!("element {x} belongs to no block")));
        }
        Ok(EqRel { carrier, block_of: canonical_blocks(&labels) })
    }

    /// Smallest equivalence relation containing the given pairs.
    pub fn closure_of(carrier: Carrier, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::new(carrier.size());
        for (x, y) in pairs {
            uf.union(x, y);
        }
        let labels: Vec<usize> = (0..carrier.size()).map(|x| uf.find(x)).collect();
        EqRel { block_of: canonical_blocks(&labels), carrier }
    }

    pub fn diagonal(carrier: Carrier) -> Self {
        let block_of = (0..carrier.size()).collect();
        EqRel { carrier, block_of }
    }

    pub fn total(carrier: Carrier) -> Self {
        let block_of = vec![0; carrier.size()];
        EqRel { carrier, block_of }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn to_erel(&self) -> ERel {
        let n = self.carrier.size();
        let mut rel = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                rel[x * n + y] = self.related(x, y);
            }
        }
        ERel { carrier: self.carrier.clone(), rel }
    }
}

fn canonical_blocks(labels: &[usize]) -> Vec<usize> {
    let mut remap = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = remap.len();
            *remap.entry(*l).or_insert(next)
        })
        .collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) {
        let (a, b) = (self.find(x), self.find(y));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

/// Arbitrary endorelation as a dense boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ERel {
    carrier: Carrier,
    rel: Vec<bool>,
}

impl ERel {
    pub fn new(carrier: Carrier, rel: Vec<bool>) -> Result<Self> {
        let n = carrier.size();
        if rel.len() != n * n {
            return Err(Error::InvalidObject(format!("relation matrix has {} cells, expected {}", rel.len(), n * n)));
        }
        Ok(ERel { carrier, rel })
    }

    pub fn from_pairs(carrier: Carrier, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = carrier.size();
        let mut rel = vec![false; n * n];
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::InvalidObject(format!("pair ({x},{y}) outside carrier of size {n}")));
            }
            rel[x * n + y] = true;
        }
        Ok(ERel { carrier, rel })
    }

    pub fn empty(carrier: Carrier) -> Self {
        let n = carrier.size();
        ERel { carrier, rel: vec![false; n * n] }
    }

    pub fn full(carrier: Carrier) -> Self {
        let n = carrier.size();
        ERel { carrier, rel: vec![true; n * n] }
    }

    pub fn diagonal(carrier: Carrier) -> Self {
        let n = carrier.size();
        ERel::from_pairs(carrier, (0..n).map(|x| (x, x))).expect("diagonal in range")
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.rel[x * self.carrier.size() + y]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.carrier.size();
        (0..n * n).filter(|&i| self.rel[i]).map(|i| (i / n, i % n)).collect()
    }

    pub fn matrix(&self) -> &[bool] {
        &self.rel
    }
}

/// A `[0,1]`-valued distance matrix; `symmetric` distinguishes pseudometrics
/// from Lawvere metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    carrier: Carrier,
    d: Vec<f64>,
    symmetric: bool,
}

impl Metric {
    pub fn pmet(carrier: Carrier, d: Vec<f64>) -> Result<Self> {
        Self::checked(carrier, d, true)
    }

    pub fn lmet(carrier: Carrier, d: Vec<f64>) -> Result<Self> {
        Self::checked(carrier, d, false)
    }

    fn checked(carrier: Carrier, d: Vec<f64>, symmetric: bool) -> Result<Self> {
        let m = Self::raw(carrier, d, symmetric)?;
        let v = m.violations();
        if let Some(first) = v.into_iter().next() {
            return Err(Error::InvalidObject(first));
        }
        Ok(m)
    }

    /// Shape-checked construction without the metric axioms; values are
    /// clamped to `[0,1]`.
    pub(crate) fn raw(carrier: Carrier, mut d: Vec<f64>, symmetric: bool) -> Result<Self> {
        let n = carrier.size();
        if d.len() != n * n {
            return Err(Error::InvalidObject(format!("distance matrix has {} cells, expected {}", d.len(), n * n)));
        }
        if let Some(v) = d.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidObject(format!("non-finite distance {v}")));
        }
        for v in d.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Metric { carrier, d, symmetric })
    }

    /// The metric axioms that fail, within [`TOL`].
    pub fn violations(&self) -> Vec<String> {
        let n = self.carrier.size();
        let mut out = Vec::new();
        for x in 0..n {
            if self.get(x, x) > TOL {
                out.push(format!("d({x},{x}) = {} is not zero", self.get(x, x)));
            }
            for y in 0..n {
                if self.symmetric && (self.get(x, y) - self.get(y, x)).abs() > TOL {
                    out.push(format!("d({x},{y}) = {} differs from d({y},{x}) = {}", self.get(x, y), self.get(y, x)));
                }
                for z in 0..n {
                    if self.get(x, z) > self.get(x, y) + self.get(y, z) + TOL {
                        out.push(format!("triangle inequality fails at ({x},{y},{z})"));
                    }
                }
            }
        }
        out
    }

    pub fn zero(carrier: Carrier, symmetric: bool) -> Self {
        let n = carrier.size();
        Metric { carrier, d: vec![0.0; n * n], symmetric }
    }

    pub fn discrete(carrier: Carrier, symmetric: bool) -> Self {
        let n = carrier.size();
        let d = (0..n * n).map(|i| if i / n == i % n { 0.0 } else { 1.0 }).collect();
        Metric { carrier, d, symmetric }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.d[x * self.carrier.size() + y]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.d
    }

    pub fn is_symmetric_kind(&self) -> bool {
        self.symmetric
    }

    pub fn kind(&self) -> FiberKind {
        if self.symmetric {
            FiberKind::PMet
        } else {
            FiberKind::LMet
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiberObject {
    EqRel(EqRel),
    ERel(ERel),
    PMet(Metric),
    LMet(Metric),
}

impl From<EqRel> for FiberObject {
    fn from(e: EqRel) -> Self {
        FiberObject::EqRel(e)
    }
}

impl From<ERel> for FiberObject {
    fn from(e: ERel) -> Self {
        FiberObject::ERel(e)
    }
}

impl From<Metric> for FiberObject {
    fn from(m: Metric) -> Self {
        if m.symmetric {
            FiberObject::PMet(m)
        } else {
            FiberObject::LMet(m)
        }
    }
}

impl FiberObject {
    pub fn kind(&self) -> FiberKind {
        match self {
            FiberObject::EqRel(_) => FiberKind::EqRel,
            FiberObject::ERel(_) => FiberKind::ERel,
            FiberObject::PMet(_) => FiberKind::PMet,
            FiberObject::LMet(_) => FiberKind::LMet,
        }
    }

    pub fn carrier(&self) -> &Carrier {
        match self {
            FiberObject::EqRel(e) => e.carrier(),
            FiberObject::ERel(e) => e.carrier(),
            FiberObject::PMet(m) | FiberObject::LMet(m) => m.carrier(),
        }
    }

    pub fn size(&self) -> usize {
        self.carrier().size()
    }

    pub fn top(kind: FiberKind, carrier: Carrier) -> Self {
        match kind {
            FiberKind::EqRel => EqRel::total(carrier).into(),
            FiberKind::ERel => ERel::full(carrier).into(),
            FiberKind::PMet => FiberObject::PMet(Metric::zero(carrier, true)),
            FiberKind::LMet => FiberObject::LMet(Metric::zero(carrier, false)),
        }
    }

    pub fn bottom(kind: FiberKind, carrier: Carrier) -> Self {
        match kind {
            FiberKind::EqRel => EqRel::diagonal(carrier).into(),
            FiberKind::ERel => ERel::empty(carrier).into(),
            FiberKind::PMet => FiberObject::PMet(Metric::discrete(carrier, true)),
            FiberKind::LMet => FiberObject::LMet(Metric::discrete(carrier, false)),
        }
    }

    /// The identity relation (relations) or the discrete metric (metrics).
    pub fn diagonal(kind: FiberKind, carrier: Carrier) -> Self {
        match kind {
            FiberKind::ERel => ERel::diagonal(carrier).into(),
            _ => Self::bottom(kind, carrier),
        }
    }

    /// Relatedness for relation kinds; distance zero for metric kinds.
    pub fn related(&self, x: usize, y: usize) -> bool {
        match self {
            FiberObject::EqRel(e) => e.related(x, y),
            FiberObject::ERel(e) => e.related(x, y),
            FiberObject::PMet(m) | FiberObject::LMet(m) => m.get(x, y) <= TOL,
        }
    }

    /// Distance view: 0 for related pairs and 1 otherwise on relation kinds.
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        match self {
            FiberObject::PMet(m) | FiberObject::LMet(m) => m.get(x, y),
            _ => {
                if self.related(x, y) {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    pub fn as_eqrel(&self) -> Option<&EqRel> {
        match self {
            FiberObject::EqRel(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_erel(&self) -> Option<&ERel> {
        match self {
            FiberObject::ERel(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_metric(&self) -> Option<&Metric> {
        match self {
            FiberObject::PMet(m) | FiberObject::LMet(m) => Some(m),
            _ => None,
        }
    }

    /// Relation kinds compare exactly; metric kinds within [`TOL`].
    pub fn approx_eq(&self, other: &FiberObject) -> bool {
        match (self, other) {
            (FiberObject::PMet(a), FiberObject::PMet(b)) | (FiberObject::LMet(a), FiberObject::LMet(b)) => {
                a.carrier == b.carrier && a.d.iter().zip(&b.d).all(|(x, y)| (x - y).abs() <= TOL)
            }
            _ => self == other,
        }
    }

    /// The amount by which `self ⊑ other` fails: `max(other.d - self.d, 0)`
    /// for metrics, 0 or 1 for relations.
    pub fn leq_violation(&self, other: &FiberObject) -> Result<f64> {
        check_compatible(self, other)?;
        let n = self.size();
        Ok(match (self, other) {
            (FiberObject::PMet(p), FiberObject::PMet(q)) | (FiberObject::LMet(p), FiberObject::LMet(q)) => {
                p.d.iter().zip(&q.d).map(|(a, b)| b - a).fold(0.0, f64::max)
            }
            _ => {
                let bad = (0..n).any(|x| (0..n).any(|y| self.related(x, y) && !other.related(x, y)));
                if bad {
                    1.0
                } else {
                    0.0
                }
            }
        })
    }
}

fn check_compatible(p: &FiberObject, q: &FiberObject) -> Result<()> {
    if p.kind() != q.kind() {
        return Err(Error::KindMismatch { left: p.kind(), right: q.kind() });
    }
    p.carrier().check_same(q.carrier())
}

/// `P ⊑ Q`. Relations: inclusion. Metrics: `Q.d ≤ P.d` pointwise within [`TOL`].
pub fn fiber_leq(p: &FiberObject, q: &FiberObject) -> Result<bool> {
    check_compatible(p, q)?;
    Ok(match (p, q) {
        (FiberObject::EqRel(a), FiberObject::EqRel(b)) => {
            // every block of a lies inside one block of b
            let mut image = vec![usize::MAX; a.num_blocks()];
            a.block_of.iter().zip(&b.block_of).all(|(&ba, &bb)| {
                if image[ba] == usize::MAX {
                    image[ba] = bb;
                }
                image[ba] == bb
            })
        }
        (FiberObject::ERel(a), FiberObject::ERel(b)) => a.rel.iter().zip(&b.rel).all(|(&x, &y)| !x || y),
        (FiberObject::PMet(a), FiberObject::PMet(b)) | (FiberObject::LMet(a), FiberObject::LMet(b)) => {
            a.d.iter().zip(&b.d).all(|(da, db)| *db <= da + TOL)
        }
        _ => unreachable!("kinds checked"),
    })
}

fn check_all(kind: FiberKind, carrier: &Carrier, ps: &[FiberObject]) -> Result<()> {
    for p in ps {
        if p.kind() != kind {
            return Err(Error::KindMismatch { left: kind, right: p.kind() });
        }
        carrier.check_same(p.carrier())?;
    }
    Ok(())
}

/// Greatest lower bound. The empty meet is `⊤`.
pub fn meet(kind: FiberKind, carrier: &Carrier, ps: &[FiberObject]) -> Result<FiberObject> {
    check_all(kind, carrier, ps)?;
    let n = carrier.size();
    Ok(match kind {
        FiberKind::EqRel => {
            let mut labels = vec![0usize; n];
            // pair of block ids, folded into a single label
            for p in ps {
                let e = p.as_eqrel().expect("kind checked");
                let joined: Vec<(usize, usize)> = labels.iter().zip(e.block_of()).map(|(&a, &b)| (a, b)).collect();
                let mut ids = std::collections::HashMap::new();
                for (x, key) in joined.into_iter().enumerate() {
                    let next = ids.len();
                    labels[x] = *ids.entry(key).or_insert(next);
                }
            }
            EqRel { carrier: carrier.clone(), block_of: canonical_blocks(&labels) }.into()
        }
        FiberKind::ERel => {
            let mut rel = vec![true; n * n];
            for p in ps {
                let e = p.as_erel().expect("kind checked");
                for (r, &v) in rel.iter_mut().zip(&e.rel) {
                    *r &= v;
                }
            }
            ERel { carrier: carrier.clone(), rel }.into()
        }
        FiberKind::PMet | FiberKind::LMet => {
            let mut d = vec![0.0f64; n * n];
            for p in ps {
                let m = p.as_metric().expect("kind checked");
                for (a, &b) in d.iter_mut().zip(&m.d) {
                    *a = a.max(b);
                }
            }
            Metric { carrier: carrier.clone(), d, symmetric: kind == FiberKind::PMet }.into()
        }
    })
}

/// Least upper bound. The empty join is `⊥`.
pub fn join(kind: FiberKind, carrier: &Carrier, ps: &[FiberObject]) -> Result<FiberObject> {
    check_all(kind, carrier, ps)?;
    let n = carrier.size();
    Ok(match kind {
        FiberKind::EqRel => {
            let mut uf = UnionFind::new(n);
            for p in ps {
                let e = p.as_eqrel().expect("kind checked");
                let mut first_of_block = vec![usize::MAX; e.num_blocks()];
                for (x, &b) in e.block_of.iter().enumerate() {
                    if first_of_block[b] == usize::MAX {
                        first_of_block[b] = x;
                    } else {
                        uf.union(first_of_block[b], x);
                    }
                }
            }
            let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
            EqRel { carrier: carrier.clone(), block_of: canonical_blocks(&labels) }.into()
        }
        FiberKind::ERel => {
            let mut rel = vec![false; n * n];
            for p in ps {
                let e = p.as_erel().expect("kind checked");
                for (r, &v) in rel.iter_mut().zip(&e.rel) {
                    *r |= v;
                }
            }
            ERel { carrier: carrier.clone(), rel }.into()
        }
        FiberKind::PMet | FiberKind::LMet => {
            let symmetric = kind == FiberKind::PMet;
            if ps.is_empty() {
                return Ok(Metric::discrete(carrier.clone(), symmetric).into());
            }
            let mut d = vec![1.0f64; n * n];
            for p in ps {
                let m = p.as_metric().expect("kind checked");
                for (a, &b) in d.iter_mut().zip(&m.d) {
                    *a = a.min(b);
                }
            }
            shortest_path_closure(&mut d, n);
            Metric { carrier: carrier.clone(), d, symmetric }.into()
        }
    })
}

/// Floyd–Warshall closure: the greatest metric pointwise below `d`.
pub(crate) fn shortest_path_closure(d: &mut [f64], n: usize) {
    for x in 0..n {
        d[x * n + x] = 0.0;
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
}

/// Reindexing along a map given by its table; `map[x]` indexes `q`'s carrier.
pub fn pullback_map(map: &[usize], source: &Carrier, q: &FiberObject) -> FiberObject {
    let n = map.len();
    match q {
        FiberObject::EqRel(e) => {
            let labels: Vec<usize> = map.iter().map(|&y| e.block_of[y]).collect();
            EqRel { carrier: source.clone(), block_of: canonical_blocks(&labels) }.into()
        }
        FiberObject::ERel(e) => {
            let mut rel = vec![false; n * n];
            for x in 0..n {
                for y in 0..n {
                    rel[x * n + y] = e.related(map[x], map[y]);
                }
            }
            ERel { carrier: source.clone(), rel }.into()
        }
        FiberObject::PMet(m) | FiberObject::LMet(m) => {
            let mut d = vec![0.0; n * n];
            for x in 0..n {
                for y in 0..n {
                    d[x * n + y] = m.get(map[x], map[y]);
                }
            }
            Metric { carrier: source.clone(), d, symmetric: m.symmetric }.into()
        }
    }
}

pub fn pullback(f: &FinFun, q: &FiberObject) -> Result<FiberObject> {
    f.target().check_same(q.carrier())?;
    Ok(pullback_map(f.map(), f.source(), q))
}

/// Whether `f` is a morphism `P ⇢ Q`, i.e. `P ⊑ f*Q`.
pub fn decent(f: &FinFun, p: &FiberObject, q: &FiberObject) -> Result<bool> {
    f.source().check_same(p.carrier())?;
    if p.kind() != q.kind() {
        return Err(Error::KindMismatch { left: p.kind(), right: q.kind() });
    }
    fiber_leq(p, &pullback(f, q)?)
}

/// All equivalence relations on an `n`-element carrier, as restricted growth
/// strings in lexicographic order.
pub fn all_eqrels(n: usize) -> Vec<EqRel> {
    let carrier = Carrier::new(n);
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, carrier: &Carrier, out: &mut Vec<EqRel>) {
        if i == labels.len() {
            out.push(EqRel { carrier: carrier.clone(), block_of: labels.clone() });
            return;
        }
        for b in 0..=max {
            labels[i] = b;
            rec(i + 1, if b == max { max + 1 } else { max }, labels, carrier, out);
        }
    }
    if n == 0 {
        out.push(EqRel { carrier, block_of: Vec::new() });
        return out;
    }
    labels[0] = 0;
    rec(1, 1, &mut labels, &carrier, &mut out);
    out
}
