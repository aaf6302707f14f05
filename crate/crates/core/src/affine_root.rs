//! Simply-laced affine Cartan data, the Weyl group action on the root lattice,
//! and the doubly infinite reduced word `h` with its real roots `beta_k`.
//!
//! Roots are integer vectors in simple-root coordinates indexed by the
//! vertices `0..=n`, vertex 0 being the affine vertex. Weyl group elements act
//! on the root lattice as integer matrices (`M * x`, columns are images of
//! simple roots). The translation by a finite weight `l` acts on the level-zero
//! lattice by `t_l(x) = x + (l, x) delta`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector in the root lattice, in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn zero(dim: usize) -> Self {
        Root(vec![0; dim])
    }

    pub fn simple(i: usize, dim: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Root(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &Root) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// The vertex `i` if `self` is the simple root `alpha_i`.
    pub fn as_simple(&self) -> Option<usize> {
        let mut found = None;
        for (i, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    pub fn scaled(&self, c: i64) -> Root {
        Root(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "{}", if c > 0 { " + " } else { " - " })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "a{i}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    D,
    E,
}

impl std::str::FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(CartanType::A),
            "D" | "d" => Ok(CartanType::D),
            "E" | "e" => Ok(CartanType::E),
            other => Err(Error::Config(format!("unknown Cartan type {other:?}"))),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::D => "D",
            CartanType::E => "E",
        };
        write!(f, "{s}")
    }
}

/// JSON description of a datum: `{"type": "A", "rank": 2, "affine": true}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    #[serde(rename = "type")]
    pub kind: CartanType,
    pub rank: usize,
    pub affine: bool,
}

/// Where a root sits in the decomposition of the positive roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    /// `alpha + m delta` with `alpha` a finite positive root, `m >= 0`.
    RealGt,
    /// `-alpha + m delta` with `alpha` a finite positive root, `m > 0`.
    RealLt,
    /// A positive multiple of `delta`.
    Imaginary,
    NotPositiveRoot,
}

type IntMatrix = Vec<Vec<i64>>;

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[l][j];
            }
        }
    }
    out
}

fn column(a: &IntMatrix, j: usize) -> Root {
    Root(a.iter().map(|row| row[j]).collect())
}

/// An untwisted simply-laced affine Cartan datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    kind: CartanType,
    rank: usize,
    matrix: IntMatrix,
    delta: Root,
    finite_positive: Vec<Root>,
    finite_positive_set: HashSet<Root>,
}

impl CartanDatum {
    pub fn new(kind: CartanType, rank: usize) -> Result<Self> {
        let edges = affine_edges(kind, rank)?;
        let dim = rank + 1;
        let mut matrix = vec![vec![0i64; dim]; dim];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in edges {
            matrix[a][b] = -1;
            matrix[b][a] = -1;
        }
        let finite_positive = finite_positive_roots(&matrix);
        let theta = finite_positive
            .iter()
            .max_by_key(|r| r.height())
            .cloned()
            .ok_or_else(|| Error::Internal("empty finite root system".into()))?;
        let delta = theta.add(&Root::simple(0, dim));
        let datum = Self {
            kind,
            rank,
            matrix,
            delta,
            finite_positive_set: finite_positive.iter().cloned().collect(),
            finite_positive,
        };
        for i in 0..dim {
            if datum.form(&datum.delta, &Root::simple(i, dim)) != 0 {
                return Err(Error::Internal("delta is not in the radical of the form".into()));
            }
        }
        Ok(datum)
    }

    pub fn from_spec(spec: &DatumSpec) -> Result<Self> {
        if !spec.affine {
            return Err(Error::Config("only affine data are supported".into()));
        }
        Self::new(spec.kind, spec.rank)
    }

    pub fn spec(&self) -> DatumSpec {
        DatumSpec {
            kind: self.kind,
            rank: self.rank,
            affine: true,
        }
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    /// `n`, the rank of the finite part; there are `n + 1` vertices.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.rank + 1
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.num_vertices()
    }

    /// The finite vertices `I_0 = I - {0}`.
    pub fn finite_vertices(&self) -> std::ops::Range<usize> {
        1..self.num_vertices()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn delta(&self) -> &Root {
        &self.delta
    }

    pub fn simple_root(&self, i: usize) -> Root {
        Root::simple(i, self.num_vertices())
    }

    pub fn finite_positive_roots(&self) -> &[Root] {
        &self.finite_positive
    }

    pub fn is_joined(&self, i: usize, j: usize) -> bool {
        i != j && self.matrix[i][j] == -1
    }

    /// The symmetric bilinear form `x^T A y`.
    pub fn form(&self, x: &Root, y: &Root) -> i64 {
        let mut s = 0;
        for (i, &xi) in x.0.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.0.iter().enumerate() {
                s += xi * self.matrix[i][j] * yj;
            }
        }
        s
    }

    /// `(alpha_i, alpha_j)`.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    /// `s_i(x) = x - (x, alpha_i) alpha_i`.
    pub fn simple_reflect(&self, i: usize, x: &Root) -> Root {
        let c: i64 = x.0.iter().enumerate().map(|(j, &xj)| xj * self.matrix[j][i]).sum();
        let mut out = x.clone();
        out.0[i] -= c;
        out
    }

    fn reflection_matrix(&self, i: usize) -> IntMatrix {
        let n = self.num_vertices();
        let mut m = identity(n);
        for j in 0..n {
            m[i][j] -= self.matrix[j][i];
        }
        m
    }

    pub fn classify_root(&self, x: &Root) -> RootClass {
        let m = x.0[0];
        let y = x.sub(&self.delta.scaled(m));
        if y.is_zero() {
            return if m > 0 {
                RootClass::Imaginary
            } else {
                RootClass::NotPositiveRoot
            };
        }
        if m >= 0 && self.finite_positive_set.contains(&y) {
            RootClass::RealGt
        } else if m > 0 && self.finite_positive_set.contains(&y.scaled(-1)) {
            RootClass::RealLt
        } else {
            RootClass::NotPositiveRoot
        }
    }

    pub fn is_positive_real(&self, x: &Root) -> bool {
        matches!(self.classify_root(x), RootClass::RealGt | RootClass::RealLt)
    }

    /// Matrix of the translation `t_{s rho}` for `s = +1` or `-1`.
    fn rho_translation(&self, sign: i64) -> IntMatrix {
        let n = self.num_vertices();
        let theta_height = self.delta.height() - 1;
        let mut m = identity(n);
        for j in 0..n {
            let pairing = if j == 0 { -theta_height } else { 1 };
            for i in 0..n {
                m[i][j] += sign * pairing * self.delta.0[i];
            }
        }
        m
    }
}

fn affine_edges(kind: CartanType, n: usize) -> Result<Vec<(usize, usize)>> {
    let unsupported = || Error::UnsupportedType {
        kind: kind.to_string(),
        rank: n,
    };
    let edges = match kind {
        CartanType::A => {
            if n < 2 {
                return Err(unsupported());
            }
            let mut e: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
            e.push((n, 0));
            e
        }
        CartanType::D => {
            if n < 4 {
                return Err(unsupported());
            }
            let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
            e.push((n - 2, n));
            e.push((0, 2));
            e
        }
        CartanType::E => {
            let mut e = vec![(1, 3), (3, 4), (2, 4)];
            e.extend((4..n).map(|i| (i, i + 1)));
            match n {
                6 => e.push((0, 2)),
                7 => e.push((0, 1)),
                8 => e.push((0, 8)),
                _ => return Err(unsupported()),
            }
            e
        }
    };
    Ok(edges)
}

/// Positive roots of the finite subsystem on vertices `1..=n`, by closure
/// of the simple roots under simple reflections.
fn finite_positive_roots(matrix: &IntMatrix) -> Vec<Root> {
    let dim = matrix.len();
    let reflect = |i: usize, x: &Root| {
        let c: i64 = x.0.iter().enumerate().map(|(j, &xj)| xj * matrix[j][i]).sum();
        let mut out = x.clone();
        out.0[i] -= c;
        out
    };
    let mut seen: HashSet<Root> = HashSet::new();
    let mut stack: Vec<Root> = (1..dim).map(|i| Root::simple(i, dim)).collect();
    while let Some(r) = stack.pop() {
        if !seen.insert(r.clone()) {
            continue;
        }
        for i in 1..dim {
            let s = reflect(i, &r);
            if !seen.contains(&s) {
                stack.push(s);
            }
        }
    }
    let mut pos: Vec<Root> = seen.into_iter().filter(|r| r.is_nonneg()).collect();
    pos.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
    pos
}

/// How the reduced word of `w` is placed inside the doubly infinite sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alignment {
    /// `(i_1, ..., i_N)` is the word.
    Forward,
    /// `(i_0, i_-1, ..., i_{1-N})` is the word.
    Backward,
}

/// The doubly infinite sequence `h = (..., i_-1, i_0, i_1, ...)` built from a
/// reduced word of `w`, where `t_rho = w tau`.
#[derive(Clone, Debug)]
pub struct BetaSequence {
    datum: CartanDatum,
    word: Vec<usize>,
    tau: Vec<usize>,
    tau_inv: Vec<usize>,
    alignment: Alignment,
    vertex_order: Vec<usize>,
    coxeter_power: usize,
    defect_form: Vec<i64>,
}

/// Largest window searched for simple roots before giving up.
const MAX_SEARCH_PERIODS: i64 = 64;

impl BetaSequence {
    pub fn build(datum: &CartanDatum) -> Result<Self> {
        let n = datum.num_vertices();
        let expected_len: i64 = datum.finite_positive_roots().iter().map(Root::height).sum();

        // Greedy left descents of t_rho, tracked through x^{-1}.
        let mut inv = datum.rho_translation(-1);
        let mut word = Vec::new();
        loop {
            let descent = (0..n).find(|&i| column(&inv, i).0.iter().any(|&c| c < 0));
            let Some(i) = descent else { break };
            word.push(i);
            inv = mat_mul(&inv, &datum.reflection_matrix(i));
            if word.len() as i64 > expected_len {
                return Err(Error::Internal("descent loop exceeded the length of t_rho".into()));
            }
        }
        if word.len() as i64 != expected_len {
            return Err(Error::Internal(format!(
                "word length {} differs from the length {} of t_rho",
                word.len(),
                expected_len
            )));
        }

        // What remains is tau^{-1}; it permutes the simple roots.
        let mut tau_inv = vec![usize::MAX; n];
        for (j, slot) in tau_inv.iter_mut().enumerate() {
            *slot = column(&inv, j)
                .as_simple()
                .ok_or_else(|| Error::Internal("remainder does not permute simple roots".into()))?;
        }
        let mut tau = vec![0; n];
        for (j, &t) in tau_inv.iter().enumerate() {
            tau[t] = j;
        }
        for i in 0..n {
            for j in 0..n {
                if datum.matrix[tau[i]][tau[j]] != datum.matrix[i][j] {
                    return Err(Error::Internal("tau is not a diagram automorphism".into()));
                }
            }
        }

        let mut seq = Self {
            datum: datum.clone(),
            word,
            tau,
            tau_inv,
            alignment: Alignment::Forward,
            vertex_order: Vec::new(),
            coxeter_power: 0,
            defect_form: Vec::new(),
        };
        let window = 2 * seq.period() as i64 + 2;
        let alignment = [Alignment::Forward, Alignment::Backward]
            .into_iter()
            .find(|&a| {
                seq.alignment = a;
                seq.partition_holds(window)
            })
            .ok_or_else(|| Error::Internal("no alignment realizes the positive root partition".into()))?;
        seq.alignment = alignment;
        seq.vertex_order = seq.compute_vertex_order()?;
        let (g, form) = seq.compute_defect()?;
        seq.coxeter_power = g;
        seq.defect_form = form;
        Ok(seq)
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    /// The reduced word of `w` with `t_rho = w tau`.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// `tau[i]` is the image of vertex `i`.
    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn alignment(&self) -> Alignment {
        self.alignment
    }

    fn tau_pow(&self, m: i64, i: usize) -> usize {
        let table = if m >= 0 { &self.tau } else { &self.tau_inv };
        (0..m.unsigned_abs()).fold(i, |v, _| table[v])
    }

    /// The letter `i_k` of the doubly infinite sequence.
    pub fn letter(&self, k: i64) -> usize {
        let n = self.period() as i64;
        let (j, m) = match self.alignment {
            Alignment::Forward => ((k - 1).rem_euclid(n), (k - 1).div_euclid(n)),
            Alignment::Backward => ((-k).rem_euclid(n), (-k).div_euclid(n)),
        };
        self.tau_pow(m, self.word[j as usize])
    }

    /// `beta_k`: `s_{i_0} s_{i_-1} ... s_{i_{k+1}}(alpha_{i_k})` for `k <= 0`
    /// and `s_{i_1} ... s_{i_{k-1}}(alpha_{i_k})` for `k > 0`.
    pub fn beta(&self, k: i64) -> Root {
        let mut x = self.datum.simple_root(self.letter(k));
        if k <= 0 {
            for j in (k + 1)..=0 {
                x = self.datum.simple_reflect(self.letter(j), &x);
            }
        } else {
            for j in (1..k).rev() {
                x = self.datum.simple_reflect(self.letter(j), &x);
            }
        }
        x
    }

    /// `beta_k` for every `k` in `lo..=hi`, in increasing `k`.
    pub fn beta_window(&self, lo: i64, hi: i64) -> Vec<(i64, Root)> {
        let mut out = Vec::new();
        if lo <= 0 {
            let mut w = identity(self.datum.num_vertices());
            let mut side = Vec::new();
            let top = hi.min(0);
            for k in (lo..=0).rev() {
                let i = self.letter(k);
                if k <= top {
                    side.push((k, column(&w, i)));
                }
                w = mat_mul(&w, &self.datum.reflection_matrix(i));
            }
            side.reverse();
            out.extend(side);
        }
        if hi >= 1 {
            let mut w = identity(self.datum.num_vertices());
            for k in 1..=hi {
                let i = self.letter(k);
                if k >= lo {
                    out.push((k, column(&w, i)));
                }
                w = mat_mul(&w, &self.datum.reflection_matrix(i));
            }
        }
        out
    }

    fn partition_holds(&self, radius: i64) -> bool {
        let mut seen = HashSet::new();
        self.beta_window(-radius, radius).into_iter().all(|(k, b)| {
            let class = self.datum.classify_root(&b);
            let ok = if k <= 0 {
                class == RootClass::RealGt
            } else {
                class == RootClass::RealLt
            };
            ok && seen.insert(b)
        })
    }

    fn compute_vertex_order(&self) -> Result<Vec<usize>> {
        let n = self.datum.num_vertices();
        let period = self.period() as i64;
        let mut bound = 4 * period;
        loop {
            let window = self.beta_window(-bound, bound);
            let mut left = Vec::new();
            let mut right = Vec::new();
            // k <= 0 read from k = 0 downwards, then k > 0 from far to near.
            for (k, b) in window.iter().filter(|(k, _)| *k <= 0).rev() {
                if let Some(i) = b.as_simple() {
                    left.push((*k, i));
                }
            }
            for (k, b) in window.iter().filter(|(k, _)| *k > 0).rev() {
                if let Some(i) = b.as_simple() {
                    right.push((*k, i));
                }
            }
            let order: Vec<usize> = left.iter().chain(&right).map(|&(_, i)| i).collect();
            let distinct: HashSet<usize> = order.iter().copied().collect();
            if distinct.len() != order.len() {
                return Err(Error::Internal("a simple root occurs twice among beta_k".into()));
            }
            if order.len() == n {
                return Ok(order);
            }
            if bound >= MAX_SEARCH_PERIODS * period {
                let vertex = (0..n).find(|i| !distinct.contains(i)).unwrap_or(0);
                return Err(Error::SimpleRootNotFound { vertex, bound });
            }
            bound *= 2;
        }
    }

    /// The total order `(i_0, ..., i_n)` on vertices induced by the order
    /// `beta_0, beta_-1, ..., delta, ..., beta_2, beta_1`.
    pub fn vertex_order(&self) -> &[usize] {
        &self.vertex_order
    }

    /// Position of each vertex in [`Self::vertex_order`].
    pub fn vertex_rank(&self) -> Vec<usize> {
        let mut rank = vec![0; self.vertex_order.len()];
        for (p, &i) in self.vertex_order.iter().enumerate() {
            rank[i] = p;
        }
        rank
    }

    /// Finite vertices in the induced total order.
    pub fn finite_vertex_order(&self) -> Vec<usize> {
        self.vertex_order.iter().copied().filter(|&i| i != 0).collect()
    }

    /// Matrix of the Coxeter element `s_{i_n} ... s_{i_0}`.
    fn coxeter_matrix(&self) -> IntMatrix {
        self.vertex_order
            .iter()
            .fold(identity(self.datum.num_vertices()), |acc, &i| {
                mat_mul(&self.datum.reflection_matrix(i), &acc)
            })
    }

    fn compute_defect(&self) -> Result<(usize, Vec<i64>)> {
        let n = self.datum.num_vertices();
        let c = self.coxeter_matrix();
        let delta = &self.datum.delta;
        let mut power = c.clone();
        for g in 1..=10_000usize {
            let mut form = Vec::with_capacity(n);
            let mut translation = true;
            for j in 0..n {
                let mut col = column(&power, j);
                col.0[j] -= 1;
                let m = col.0[0] / delta.0[0];
                if col != delta.scaled(m) {
                    translation = false;
                    break;
                }
                form.push(m);
            }
            if translation {
                return Ok((g, form));
            }
            power = mat_mul(&c, &power);
        }
        Err(Error::Internal("no power of the Coxeter element is a translation".into()))
    }

    /// Smallest `g >= 1` with `C^g` a translation.
    pub fn coxeter_power(&self) -> usize {
        self.coxeter_power
    }

    /// The defect `d(x)` with `C^g(x) = x + d(x) delta`.
    pub fn defect(&self, x: &Root) -> i64 {
        x.0.iter().zip(&self.defect_form).map(|(a, b)| a * b).sum()
    }

    /// Applies the Coxeter element `C = s_{i_n} ... s_{i_0}` to `x`.
    pub fn coxeter_apply(&self, x: &Root) -> Root {
        self.vertex_order
            .iter()
            .fold(x.clone(), |acc, &i| self.datum.simple_reflect(i, &acc))
    }

    /// All `(k, beta_k)` with `beta_k <= nu` componentwise, sorted by `k`.
    ///
    /// Shifting `k` by one period adds a positive multiple of `delta` to
    /// `beta_k`, so the scan stops after a full period of roots exceeding `nu`.
    pub fn real_roots_below(&self, nu: &Root) -> Vec<(i64, Root)> {
        let period = self.period() as i64;
        let mut out = Vec::new();
        if nu.is_zero() || !nu.is_nonneg() {
            return out;
        }
        let mut p = 0;
        loop {
            let lo = -(p + 1) * period + 1;
            let hi = -p * period;
            let chunk = self.beta_window(lo, hi);
            let mut any = false;
            for (k, b) in chunk {
                if b.leq(nu) {
                    out.push((k, b));
                    any = true;
                }
            }
            if !any {
                break;
            }
            p += 1;
        }
        let mut p = 0;
        loop {
            let lo = p * period + 1;
            let hi = (p + 1) * period;
            let chunk = self.beta_window(lo, hi);
            let mut any = false;
            for (k, b) in chunk {
                if b.leq(nu) {
                    out.push((k, b));
                    any = true;
                }
            }
            if !any {
                break;
            }
            p += 1;
        }
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// The index `k` with `beta_k = x`, searching within `|k| <= radius`.
    pub fn index_of(&self, x: &Root, radius: i64) -> Option<i64> {
        self.beta_window(-radius, radius)
            .into_iter()
            .find(|(_, b)| b == x)
            .map(|(k, _)| k)
    }
}
