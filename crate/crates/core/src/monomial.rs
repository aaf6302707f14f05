//! Words in divided powers `f_{i_1}^(d_1) ... f_{i_s}^(d_s)` and the monomials
//! attached to indices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::affine_root::{BetaSequence, CartanDatum, Root, RootClass};
use crate::error::{Error, Result};
use crate::pbw_index::{PBWIndex, Partition};

/// A word of `(vertex, divided power)` letters, never holding a zero power.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<(usize, u32)>", into = "Vec<(usize, u32)>")]
pub struct MonomialWord(Vec<(usize, u32)>);

impl From<Vec<(usize, u32)>> for MonomialWord {
    fn from(letters: Vec<(usize, u32)>) -> Self {
        MonomialWord::new(letters)
    }
}

impl From<MonomialWord> for Vec<(usize, u32)> {
    fn from(w: MonomialWord) -> Self {
        w.0
    }
}

impl MonomialWord {
    pub fn new(mut letters: Vec<(usize, u32)>) -> Self {
        letters.retain(|&(_, d)| d > 0);
        MonomialWord(letters)
    }

    pub fn empty() -> Self {
        MonomialWord(Vec::new())
    }

    pub fn letters(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, i: usize, d: u32) {
        if d > 0 {
            self.0.push((i, d));
        }
    }

    pub fn concat(mut self, other: &MonomialWord) -> Self {
        self.0.extend_from_slice(&other.0);
        self
    }

    /// `t`, the total number of generators.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&(_, d)| d as usize).sum()
    }

    /// Each letter's vertex repeated by its power.
    pub fn colors(&self) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|&(i, d)| std::iter::repeat(i).take(d as usize))
            .collect()
    }

    pub fn weight(&self, dim: usize) -> Root {
        let mut w = Root::zero(dim);
        for &(i, d) in &self.0 {
            w.0[i] += i64::from(d);
        }
        w
    }
}

impl fmt::Debug for MonomialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MonomialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(i, d)| format!("f{i}^({d})")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for MonomialWord {
    type Err = Error;

    /// Parses `"f3^(2) f1^(1)"`; a bare `f2` means power one and `"1"` is empty.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |t: &str| Error::Config(format!("cannot parse letter {t:?}"));
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(MonomialWord::empty());
        }
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let body = tok.strip_prefix('f').ok_or_else(|| bad(tok))?;
            let (vertex, power) = match body.split_once('^') {
                Some((v, p)) => {
                    let p = p.trim_start_matches('(').trim_end_matches(')');
                    (v, p.parse().map_err(|_| bad(tok))?)
                }
                None => (body, 1),
            };
            letters.push((vertex.parse().map_err(|_| bad(tok))?, power));
        }
        Ok(MonomialWord::new(letters))
    }
}

/// `m(c beta)`: write `c beta = sum_j d_j alpha_{i_j}` and emit
/// `f_{i_n}^(d_n) ... f_{i_0}^(d_0)`.
pub fn m_real(datum: &CartanDatum, order: &[usize], c: u32, beta: &Root) -> Result<MonomialWord> {
    match datum.classify_root(beta) {
        RootClass::RealGt | RootClass::RealLt => {}
        _ => return Err(Error::NotRealRoot(beta.coords().to_vec())),
    }
    let mut w = MonomialWord::empty();
    for &i in order.iter().rev() {
        w.push(i, c * beta.0[i] as u32);
    }
    Ok(w)
}

/// Replacement words for real-root monomials, keyed by the weight `c beta`.
///
/// A real root is primitive, so `c beta` determines both `c` and `beta`.
/// Weights absent from the table use [`m_real`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonomialTable {
    words: BTreeMap<Vec<i64>, MonomialWord>,
}

impl MonomialTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, weight: &Root) -> Option<&MonomialWord> {
        self.words.get(weight.coords())
    }

    pub fn insert(&mut self, weight: &Root, word: MonomialWord) {
        self.words.insert(weight.coords().to_vec(), word);
    }

    pub fn remove(&mut self, weight: &Root) -> Option<MonomialWord> {
        self.words.remove(weight.coords())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Root, &MonomialWord)> {
        self.words.iter().map(|(k, w)| (Root(k.clone()), w))
    }

    /// `m(c beta)`, taking a replacement from the table when present.
    pub fn real(&self, seq: &BetaSequence, c: u32, beta: &Root) -> Result<MonomialWord> {
        match self.get(&beta.scaled(i64::from(c))) {
            Some(w) => Ok(w.clone()),
            None => m_real(seq.datum(), seq.vertex_order(), c, beta),
        }
    }
}

/// `m(c+) = m(c_0 beta_0) m(c_-1 beta_-1) ...`.
pub fn m_plus(c: &PBWIndex, seq: &BetaSequence, table: &MonomialTable) -> Result<MonomialWord> {
    let mut w = MonomialWord::empty();
    for (&k, &m) in c.plus().iter().rev() {
        w = w.concat(&table.real(seq, m, &seq.beta(k))?);
    }
    Ok(w)
}

/// `m(c-) = ... m(c_2 beta_2) m(c_1 beta_1)`.
pub fn m_minus(c: &PBWIndex, seq: &BetaSequence, table: &MonomialTable) -> Result<MonomialWord> {
    let mut w = MonomialWord::empty();
    for (&k, &m) in c.minus().iter().rev() {
        w = w.concat(&table.real(seq, m, &seq.beta(k))?);
    }
    Ok(w)
}

/// `m(i, c) = m(c (delta - alpha_i)) f_i^(c)`.
pub fn m_imag_single(i: usize, c: u32, seq: &BetaSequence, table: &MonomialTable) -> Result<MonomialWord> {
    let datum = seq.datum();
    if i == 0 || i >= datum.num_vertices() {
        return Err(Error::NotFiniteVertex(i));
    }
    let beta = datum.delta().sub(&datum.simple_root(i));
    let mut w = table.real(seq, c, &beta)?;
    w.push(i, c);
    Ok(w)
}

/// `m(i, mu) = m(i, mu_1) m(i, mu_2) ...`.
pub fn m_imag_partition(i: usize, mu: &Partition, seq: &BetaSequence, table: &MonomialTable) -> Result<MonomialWord> {
    let mut w = MonomialWord::empty();
    for &part in mu.parts() {
        w = w.concat(&m_imag_single(i, part, seq, table)?);
    }
    Ok(w)
}

/// `m(c) = m(c+) m(c0) m(c-)`, with `m(c0)` a product over `I_0` in the
/// induced vertex order.
pub fn m_index(c: &PBWIndex, seq: &BetaSequence, table: &MonomialTable) -> Result<MonomialWord> {
    let mut w = m_plus(c, seq, table)?;
    for i in seq.finite_vertex_order() {
        if let Some(mu) = c.zero().get(&i) {
            w = w.concat(&m_imag_partition(i, mu, seq, table)?);
        }
    }
    Ok(w.concat(&m_minus(c, seq, table)?))
}

/// Words of weight `nu` in divided powers, adjacent letters on distinct
/// vertices, in lexicographic order of letters.
pub fn divided_power_words(nu: &Root) -> Vec<MonomialWord> {
    fn go(counts: &mut [u32], last: Option<usize>, cur: &mut Vec<(usize, u32)>, out: &mut Vec<MonomialWord>) {
        if counts.iter().all(|&c| c == 0) {
            out.push(MonomialWord::new(cur.clone()));
            return;
        }
        for i in 0..counts.len() {
            if Some(i) == last {
                continue;
            }
            for d in 1..=counts[i] {
                counts[i] -= d;
                cur.push((i, d));
                go(counts, Some(i), cur, out);
                cur.pop();
                counts[i] += d;
            }
        }
    }
    let mut counts: Vec<u32> = nu.coords().iter().map(|&x| x.max(0) as u32).collect();
    let mut out = Vec::new();
    go(&mut counts, None, &mut Vec::new(), &mut out);
    out
}
