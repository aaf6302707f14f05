//! The index set of PBW and canonical bases: triples `(c+, c0, c-)`.
//!
//! `c+` is a finitely supported map on `k <= 0`, `c-` on `k > 0`, and `c0` an
//! `I_0`-tuple of partitions. A fiber is the finite set of indices of a fixed
//! weight, listed in a total order that extends the partial order and keeps
//! each equivalence class (same real parts) contiguous.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::affine_root::{BetaSequence, Root};
use crate::error::{Error, Result};

/// A partition, stored with weakly decreasing positive parts.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl From<Vec<u32>> for Partition {
    fn from(parts: Vec<u32>) -> Self {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All partitions of `m`, in decreasing lexicographic order.
    pub fn all_of(m: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, m, &mut Vec::new(), &mut out);
        out
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    fn prefix_sums(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().scan(0, |s, &p| {
            *s += p;
            Some(*s)
        })
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dominance order: `|l| = |m|` and every prefix sum of `l` is at most that of `m`.
pub fn dominance_leq(l: &Partition, m: &Partition) -> bool {
    if l.size() != m.size() {
        return false;
    }
    let mut ms = m.prefix_sums();
    l.prefix_sums().all(|a| a <= ms.next().unwrap_or(m.size()))
}

/// Kostka number `K_{l,m}`: semistandard tableaux of shape `l` and content `m`.
pub fn kostka(l: &Partition, m: &Partition) -> u64 {
    if l.size() != m.size() {
        return 0;
    }
    let mut memo = HashMap::new();
    kostka_rec(l.parts(), m.parts(), &mut memo)
}

// Strip the entries equal to the largest label: they form a horizontal strip.
fn kostka_rec(shape: &[u32], content: &[u32], memo: &mut HashMap<(Vec<u32>, usize), u64>) -> u64 {
    let Some((&last, rest)) = content.split_last() else {
        return u64::from(shape.is_empty());
    };
    let key = (shape.to_vec(), content.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    let mut inner = vec![0u32; shape.len()];
    horizontal_strips(shape, 0, last, &mut inner, &mut |sub| {
        total += kostka_rec(sub, rest, memo);
    });
    memo.insert(key, total);
    total
}

fn horizontal_strips(shape: &[u32], row: usize, remaining: u32, inner: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if row == shape.len() {
        if remaining == 0 {
            let len = inner.iter().position(|&p| p == 0).unwrap_or(inner.len());
            f(&inner[..len]);
        }
        return;
    }
    let floor = shape.get(row + 1).copied().unwrap_or(0);
    let top = shape[row];
    for keep in (floor..=top).rev() {
        let removed = top - keep;
        if removed > remaining {
            break;
        }
        inner[row] = keep;
        horizontal_strips(shape, row + 1, remaining - removed, inner, f);
    }
}

/// An element `(c+, c0, c-)` of the index set.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawIndex", into = "RawIndex")]
pub struct PBWIndex {
    plus: BTreeMap<i64, u32>,
    zero: BTreeMap<usize, Partition>,
    minus: BTreeMap<i64, u32>,
}

#[derive(Serialize, Deserialize)]
struct RawIndex {
    plus: Vec<(i64, u32)>,
    zero: BTreeMap<usize, Partition>,
    minus: Vec<(i64, u32)>,
}

impl From<PBWIndex> for RawIndex {
    fn from(c: PBWIndex) -> Self {
        RawIndex {
            plus: c.plus.into_iter().rev().collect(),
            zero: c.zero,
            minus: c.minus.into_iter().collect(),
        }
    }
}

impl TryFrom<RawIndex> for PBWIndex {
    type Error = Error;
    fn try_from(raw: RawIndex) -> Result<Self> {
        PBWIndex::new(raw.plus, raw.zero, raw.minus)
    }
}

impl PBWIndex {
    /// Builds an index, dropping zero multiplicities and empty partitions.
    pub fn new(
        plus: impl IntoIterator<Item = (i64, u32)>,
        zero: impl IntoIterator<Item = (usize, Partition)>,
        minus: impl IntoIterator<Item = (i64, u32)>,
    ) -> Result<Self> {
        let mut c = PBWIndex::default();
        for (k, m) in plus {
            if k > 0 {
                return Err(Error::Config(format!("c+ entry at k = {k} > 0")));
            }
            if m > 0 {
                *c.plus.entry(k).or_default() += m;
            }
        }
        for (k, m) in minus {
            if k <= 0 {
                return Err(Error::Config(format!("c- entry at k = {k} <= 0")));
            }
            if m > 0 {
                *c.minus.entry(k).or_default() += m;
            }
        }
        for (i, p) in zero {
            if i == 0 {
                return Err(Error::NotFiniteVertex(0));
            }
            if !p.is_empty() {
                c.zero.insert(i, p);
            }
        }
        Ok(c)
    }

    /// The index with a single real entry `c_k = m`.
    pub fn real(k: i64, m: u32) -> Self {
        let entry = std::iter::once((k, m));
        if k <= 0 {
            PBWIndex::new(entry, [], []).expect("k <= 0")
        } else {
            PBWIndex::new([], [], entry).expect("k > 0")
        }
    }

    pub fn plus(&self) -> &BTreeMap<i64, u32> {
        &self.plus
    }

    pub fn zero(&self) -> &BTreeMap<usize, Partition> {
        &self.zero
    }

    pub fn minus(&self) -> &BTreeMap<i64, u32> {
        &self.minus
    }

    /// `lambda^(i)`, empty when absent.
    pub fn lambda(&self, i: usize) -> Partition {
        self.zero.get(&i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_empty() && self.zero.is_empty() && self.minus.is_empty()
    }

    /// All real entries `(k, c_k)` in increasing `k`.
    pub fn real_entries(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.plus.iter().chain(&self.minus).map(|(&k, &c)| (k, c))
    }

    /// Total size of the partitions in `c0`.
    pub fn imaginary_size(&self) -> u32 {
        self.zero.values().map(Partition::size).sum()
    }

    /// The `(k, c)` pair when `c` has exactly one real entry and no `c0`.
    pub fn single_real_entry(&self) -> Option<(i64, u32)> {
        if !self.zero.is_empty() {
            return None;
        }
        let mut it = self.real_entries();
        match (it.next(), it.next()) {
            (Some(e), None) => Some(e),
            _ => None,
        }
    }

    /// `sum_k c_k beta_k + (sum_i |lambda^(i)|) delta`.
    pub fn weight(&self, seq: &BetaSequence) -> Root {
        let datum = seq.datum();
        let mut w = datum.delta().scaled(i64::from(self.imaginary_size()));
        for (k, c) in self.real_entries() {
            w = w.add(&seq.beta(k).scaled(i64::from(c)));
        }
        w
    }

    /// The real parts `(c+, c-)`, which determine the equivalence class.
    pub fn real_part(&self) -> (&BTreeMap<i64, u32>, &BTreeMap<i64, u32>) {
        (&self.plus, &self.minus)
    }
}

impl fmt::Debug for PBWIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PBWIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let real = |m: &BTreeMap<i64, u32>, rev: bool| {
            let mut v: Vec<String> = m.iter().map(|(k, c)| format!("{k}:{c}")).collect();
            if rev {
                v.reverse();
            }
            v.join(" ")
        };
        let zero: Vec<String> = self.zero.iter().map(|(i, p)| format!("{i}:{p}")).collect();
        write!(
            f,
            "[{} | {} | {}]",
            real(&self.plus, true),
            zero.join(" "),
            real(&self.minus, false)
        )
    }
}

/// Lexicographic comparison of `c+ = (c_0, c_-1, ...)` from `k = 0` down.
pub fn cmp_plus(a: &BTreeMap<i64, u32>, b: &BTreeMap<i64, u32>) -> Ordering {
    let mut keys: Vec<i64> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable_by(|x, y| y.cmp(x));
    keys.dedup();
    cmp_at(a, b, keys)
}

/// Lexicographic comparison of `c- = (c_1, c_2, ...)` from `k = 1` up.
pub fn cmp_minus(a: &BTreeMap<i64, u32>, b: &BTreeMap<i64, u32>) -> Ordering {
    let mut keys: Vec<i64> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    cmp_at(a, b, keys)
}

fn cmp_at(a: &BTreeMap<i64, u32>, b: &BTreeMap<i64, u32>, keys: Vec<i64>) -> Ordering {
    for k in keys {
        let x = a.get(&k).copied().unwrap_or(0);
        let y = b.get(&k).copied().unwrap_or(0);
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

/// Product of dominance orders on `c0` (non-strict).
pub fn zero_leq(a: &PBWIndex, b: &PBWIndex) -> bool {
    let keys: std::collections::BTreeSet<usize> = a.zero.keys().chain(b.zero.keys()).copied().collect();
    keys.into_iter().all(|i| dominance_leq(&a.lambda(i), &b.lambda(i)))
}

/// The coarse order: `c+ <= c'+` and `c- <= c'-`, one of them strict.
pub fn prec0(a: &PBWIndex, b: &PBWIndex) -> bool {
    let p = cmp_plus(&a.plus, &b.plus);
    let m = cmp_minus(&a.minus, &b.minus);
    p != Ordering::Greater && m != Ordering::Greater && (p == Ordering::Less || m == Ordering::Less)
}

/// The refined order, adding dominance on `c0`.
pub fn prec(a: &PBWIndex, b: &PBWIndex) -> bool {
    let p = cmp_plus(&a.plus, &b.plus);
    let m = cmp_minus(&a.minus, &b.minus);
    if p == Ordering::Greater || m == Ordering::Greater || !zero_leq(a, b) {
        return false;
    }
    p == Ordering::Less || m == Ordering::Less || a.zero != b.zero
}

/// Same real parts.
pub fn equivalent(a: &PBWIndex, b: &PBWIndex) -> bool {
    a.plus == b.plus && a.minus == b.minus
}

/// All `I_0`-tuples of partitions of total size `m` over the given vertices.
pub fn partition_tuples(vertices: &[usize], m: u32) -> Vec<BTreeMap<usize, Partition>> {
    fn rec(vertices: &[usize], m: u32, cur: &mut BTreeMap<usize, Partition>, out: &mut Vec<BTreeMap<usize, Partition>>) {
        let Some((&i, rest)) = vertices.split_first() else {
            if m == 0 {
                out.push(cur.clone());
            }
            return;
        };
        let lo = if rest.is_empty() { m } else { 0 };
        for s in lo..=m {
            if s == 0 {
                rec(rest, m, cur, out);
                continue;
            }
            for p in Partition::all_of(s) {
                cur.insert(i, p);
                rec(rest, m - s, cur, out);
                cur.remove(&i);
            }
        }
    }
    let mut out = Vec::new();
    rec(vertices, m, &mut BTreeMap::new(), &mut out);
    out
}

/// Every index of weight `nu`, unordered.
pub fn enumerate_indices(nu: &Root, seq: &BetaSequence) -> Result<Vec<PBWIndex>> {
    let datum = seq.datum();
    if nu.dim() != datum.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: datum.num_vertices(),
            got: nu.dim(),
        });
    }
    if !nu.is_nonneg() {
        return Err(Error::NegativeWeight(nu.coords().to_vec()));
    }
    let delta = datum.delta();
    let finite: Vec<usize> = datum.finite_vertices().collect();
    let mut out = Vec::new();
    let mut m = 0u32;
    loop {
        let rest = nu.sub(&delta.scaled(i64::from(m)));
        if !rest.is_nonneg() {
            break;
        }
        let roots = seq.real_roots_below(&rest);
        let mut reals = Vec::new();
        knapsack(&roots, 0, &rest, &mut Vec::new(), &mut reals);
        let zeros = partition_tuples(&finite, m);
        for real in &reals {
            for zero in &zeros {
                let (plus, minus): (Vec<_>, Vec<_>) = real.iter().partition(|(k, _)| *k <= 0);
                out.push(PBWIndex::new(plus, zero.clone(), minus)?);
            }
        }
        m += 1;
    }
    Ok(out)
}

fn knapsack(roots: &[(i64, Root)], from: usize, rest: &Root, cur: &mut Vec<(i64, u32)>, out: &mut Vec<Vec<(i64, u32)>>) {
    if rest.is_zero() {
        out.push(cur.clone());
        return;
    }
    for j in from..roots.len() {
        let (k, beta) = &roots[j];
        let mut left = rest.sub(beta);
        let mut c = 1;
        while left.is_nonneg() {
            cur.push((*k, c));
            knapsack(roots, j + 1, &left, cur, out);
            cur.pop();
            left = left.sub(beta);
            c += 1;
        }
    }
}

/// How classes are arranged in a fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassOrder {
    /// Sort classes by `c+`, then `c-`.
    #[default]
    PlusFirst,
    /// Sort classes by `c-`, then `c+`.
    MinusFirst,
}

/// The indices of one weight in a total order, with class boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub nu: Root,
    pub indices: Vec<PBWIndex>,
    pub classes: Vec<Range<usize>>,
}

impl Fiber {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Class number of each index.
    pub fn class_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.indices.len()];
        for (ci, r) in self.classes.iter().enumerate() {
            for slot in &mut out[r.clone()] {
                *slot = ci;
            }
        }
        out
    }

    pub fn position(&self, c: &PBWIndex) -> Option<usize> {
        self.indices.iter().position(|d| d == c)
    }
}

/// Sort key for `c0` inside a class, following the order on `I_0`.
fn zero_key(c: &PBWIndex, finite_order: &[usize]) -> Vec<(u32, Vec<u32>)> {
    finite_order
        .iter()
        .map(|&i| {
            let p = c.lambda(i);
            (p.size(), p.parts().to_vec())
        })
        .collect()
}

/// Orders a set of indices of one weight into a [`Fiber`].
pub fn order_fiber(nu: Root, mut indices: Vec<PBWIndex>, seq: &BetaSequence, schedule: ClassOrder) -> Fiber {
    let finite_order = seq.finite_vertex_order();
    indices.sort_by(|a, b| {
        let p = cmp_plus(&a.plus, &b.plus);
        let m = cmp_minus(&a.minus, &b.minus);
        let real = match schedule {
            ClassOrder::PlusFirst => p.then(m),
            ClassOrder::MinusFirst => m.then(p),
        };
        real.then_with(|| zero_key(a, &finite_order).cmp(&zero_key(b, &finite_order)))
    });
    let mut classes = Vec::new();
    let mut start = 0;
    for j in 1..=indices.len() {
        if j == indices.len() || !equivalent(&indices[j - 1], &indices[j]) {
            classes.push(start..j);
            start = j;
        }
    }
    Fiber { nu, indices, classes }
}

/// The fiber of `nu` in the canonical total order.
pub fn total_order(nu: &Root, seq: &BetaSequence) -> Result<Fiber> {
    fiber_with(nu, seq, ClassOrder::PlusFirst)
}

pub fn fiber_with(nu: &Root, seq: &BetaSequence, schedule: ClassOrder) -> Result<Fiber> {
    let indices = enumerate_indices(nu, seq)?;
    Ok(order_fiber(nu.clone(), indices, seq, schedule))
}
