//! Quiver orientation, flag dimensions, defect classes and stratum data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affine_root::{BetaSequence, CartanDatum, Root};
use crate::error::{Error, Result};
use crate::pbw_index::{kostka, partition_tuples, PBWIndex, Partition};

/// A quiver on the affine Dynkin diagram, one arrow per edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub num_vertices: usize,
    /// Arrows `(tail, head)`.
    pub arrows: BTreeSet<(usize, usize)>,
}

impl Quiver {
    pub fn is_sink(&self, i: usize) -> bool {
        !self.arrows.iter().any(|&(t, _)| t == i)
    }

    pub fn is_source(&self, i: usize) -> bool {
        !self.arrows.iter().any(|&(_, h)| h == i)
    }

    /// `sigma_i`: reverses every arrow at `i`.
    pub fn flip(&self, i: usize) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|&(t, h)| if t == i || h == i { (h, t) } else { (t, h) })
            .collect();
        Quiver {
            num_vertices: self.num_vertices,
            arrows,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.num_vertices];
        for &(_, h) in &self.arrows {
            indeg[h] += 1;
        }
        let mut ready: Vec<usize> = (0..self.num_vertices).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for &(t, h) in &self.arrows {
                if t == v {
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        ready.push(h);
                    }
                }
            }
        }
        seen == self.num_vertices
    }

    /// Number of arrows `a -> b`.
    pub fn arrows_between(&self, a: usize, b: usize) -> usize {
        usize::from(self.arrows.contains(&(a, b)))
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.arrows.iter().map(|(t, h)| format!("{t}->{h}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Whether `order[r]` is a sink of `sigma_{order[r-1]} ... sigma_{order[0]} Q`
/// for every `r`, and the full product returns `Q`.
pub fn sink_sequence_holds(quiver: &Quiver, order: &[usize]) -> bool {
    let mut cur = quiver.clone();
    for &i in order {
        if !cur.is_sink(i) {
            return false;
        }
        cur = cur.flip(i);
    }
    cur == *quiver
}

/// Orients each edge from the later vertex of `order` to the earlier one.
pub fn orientation_from_order(datum: &CartanDatum, order: &[usize]) -> Result<Quiver> {
    let n = datum.num_vertices();
    let mut rank = vec![usize::MAX; n];
    for (k, &i) in order.iter().enumerate() {
        rank[i] = k;
    }
    if order.len() != n || rank.contains(&usize::MAX) {
        return Err(Error::Config(format!("{order:?} is not an ordering of the {n} vertices")));
    }
    let mut arrows = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && datum.is_joined(i, j) && rank[i] > rank[j] {
                arrows.insert((i, j));
            }
        }
    }
    let quiver = Quiver { num_vertices: n, arrows };
    if !quiver.is_acyclic() {
        return Err(Error::Internal("orientation has an oriented cycle".into()));
    }
    if !sink_sequence_holds(&quiver, order) {
        return Err(Error::Internal("order is not a sink sequence of its orientation".into()));
    }
    Ok(quiver)
}

/// `dim F_omega = sum_{k' < k, i_k' = i_k} c_k' c_k`.
pub fn flag_dim(omega: &[(usize, u32)]) -> u64 {
    let mut total = 0;
    for (k, &(i, c)) in omega.iter().enumerate() {
        for &(i2, c2) in &omega[..k] {
            if i2 == i {
                total += u64::from(c) * u64::from(c2);
            }
        }
    }
    total
}

/// Fibre dimension of the stable-flag bundle: arrows from an earlier letter
/// to a later one.
pub fn fibre_dim(omega: &[(usize, u32)], quiver: &Quiver) -> u64 {
    let mut total = 0;
    for (k, &(i, c)) in omega.iter().enumerate() {
        for &(i2, c2) in &omega[..k] {
            total += quiver.arrows_between(i2, i) as u64 * u64::from(c) * u64::from(c2);
        }
    }
    total
}

pub fn tilde_flag_dim(omega: &[(usize, u32)], quiver: &Quiver) -> u64 {
    flag_dim(omega) + fibre_dim(omega, quiver)
}

/// Type of the indecomposable with a real-root dimension vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndecomposableClass {
    Preprojective,
    Preinjective,
    RegularNonhomogeneous,
}

impl fmt::Display for IndecomposableClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndecomposableClass::Preprojective => "preprojective",
            IndecomposableClass::Preinjective => "preinjective",
            IndecomposableClass::RegularNonhomogeneous => "regular_nonhomogeneous",
        })
    }
}

/// Classification by the sign of the defect.
pub fn classify_indecomposable(seq: &BetaSequence, beta: &Root) -> Result<IndecomposableClass> {
    if !seq.datum().is_positive_real(beta) {
        return Err(Error::NotRealRoot(beta.coords().to_vec()));
    }
    Ok(match seq.defect(beta).signum() {
        -1 => IndecomposableClass::Preprojective,
        1 => IndecomposableClass::Preinjective,
        _ => IndecomposableClass::RegularNonhomogeneous,
    })
}

/// `(Y, l, l', lambda)` with `Y` split by defect sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StratumData {
    pub y_p: Vec<(Root, u32)>,
    pub y_r: Vec<(Root, u32)>,
    pub y_i: Vec<(Root, u32)>,
    pub l: u32,
    pub l_prime: u32,
    pub lambda: Partition,
}

impl StratumData {
    /// `sum c beta + (l + l') delta`.
    pub fn dim(&self, datum: &CartanDatum) -> Root {
        let mut d = datum.delta().scaled(i64::from(self.l + self.l_prime));
        for (beta, c) in self.y_p.iter().chain(&self.y_r).chain(&self.y_i) {
            d = d.add(&beta.scaled(i64::from(*c)));
        }
        d
    }
}

fn fmt_y(y: &[(Root, u32)]) -> String {
    let parts: Vec<String> = y.iter().map(|(b, c)| format!("{c}*({b})")).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for StratumData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P={} R={} I={} l={} l'={} lambda={}",
            fmt_y(&self.y_p),
            fmt_y(&self.y_r),
            fmt_y(&self.y_i),
            self.l,
            self.l_prime,
            self.lambda
        )
    }
}

/// The first vertex of the order; it lies in `I_0` for every supported type.
fn distinguished_vertex(seq: &BetaSequence) -> Result<usize> {
    match seq.vertex_order().first() {
        Some(&i) if i != 0 => Ok(i),
        _ => Err(Error::Internal("first vertex of the order is not in I_0".into())),
    }
}

pub fn stratum_data_of_index(c: &PBWIndex, seq: &BetaSequence) -> Result<StratumData> {
    let i0 = distinguished_vertex(seq)?;
    let mut data = StratumData {
        y_p: Vec::new(),
        y_r: Vec::new(),
        y_i: Vec::new(),
        l: 0,
        l_prime: 0,
        lambda: c.lambda(i0),
    };
    for (k, m) in c.real_entries() {
        let beta = seq.beta(k);
        let slot = match classify_indecomposable(seq, &beta)? {
            IndecomposableClass::Preprojective => &mut data.y_p,
            IndecomposableClass::RegularNonhomogeneous => &mut data.y_r,
            IndecomposableClass::Preinjective => &mut data.y_i,
        };
        slot.push((beta, m));
    }
    for y in [&mut data.y_p, &mut data.y_r, &mut data.y_i] {
        y.sort();
    }
    data.l = data.lambda.size();
    data.l_prime = c.imaginary_size() - data.l;
    if data.dim(seq.datum()) != c.weight(seq) {
        return Err(Error::Internal(format!("stratum data of {c} has the wrong dimension")));
    }
    Ok(data)
}

/// Every index with the given stratum data: one per choice of the partitions
/// away from the distinguished vertex.
pub fn stratum_fiber(data: &StratumData, seq: &BetaSequence) -> Result<Vec<PBWIndex>> {
    let i0 = distinguished_vertex(seq)?;
    let mut plus = BTreeMap::new();
    let mut minus = BTreeMap::new();
    for (beta, m) in data.y_p.iter().chain(&data.y_r).chain(&data.y_i) {
        let k = seq
            .index_of(beta, 64 * seq.period() as i64)
            .ok_or_else(|| Error::NotRealRoot(beta.coords().to_vec()))?;
        if k <= 0 {
            plus.insert(k, *m);
        } else {
            minus.insert(k, *m);
        }
    }
    let others: Vec<usize> = seq.finite_vertex_order().into_iter().filter(|&i| i != i0).collect();
    let mut out = Vec::new();
    for mut zero in partition_tuples(&others, data.l_prime) {
        if !data.lambda.is_empty() {
            zero.insert(i0, data.lambda.clone());
        }
        out.push(PBWIndex::new(plus.clone(), zero, minus.clone())?);
    }
    Ok(out)
}

/// Multiplicity of the irreducible `xi_lambda` in the permutation module
/// induced from the Young subgroup of `mu`: the Kostka number `K_{lambda,mu}`.
pub fn induced_multiplicity(mu: &Partition, lambda: &Partition) -> u64 {
    if mu.size() != lambda.size() {
        return 0;
    }
    kostka(lambda, mu)
}
