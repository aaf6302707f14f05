//! Block factorization `Lambda = tH D H`, `H = P Q` of a monomial Gram matrix.
//!
//! Blocks follow the classes of the fiber. The factorization is first
//! computed with identity diagonal blocks in `H` (`H'`, `D'`). Inside a class
//! the monomials are unitriangular, not equal, to the PBW elements: the
//! diagonal block of `H` is the Kostka matrix `U` with
//! `U[c', c] = prod_i K(lambda'^(i), lambda^(i))`. Hence `H = U H'` and
//! `D = U^-T D' U^-1`, and `P`, `Q` are split from `H` with `P_JJ = I`,
//! `Q_JJ = U_J`.

use std::collections::BTreeMap;
use std::ops::Range;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::affine_root::{BetaSequence, Root};
use crate::gram::{gram_matrix, Engine, GramMatrix, InnerProductCache};
use crate::monomial::{divided_power_words, m_real, MonomialTable, MonomialWord};
use crate::pbw_index::{kostka, prec, prec0, total_order, Fiber, PBWIndex};
use crate::qfield::{divided_power_norm, LaurentPoly, RatFn, TruncSeries};

pub type Matrix = Vec<Vec<RatFn>>;
pub type PolyMatrix = Vec<Vec<LaurentPoly>>;

pub fn zeros(n: usize, m: usize) -> Matrix {
    vec![vec![RatFn::zero(); m]; n]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = RatFn::one();
    }
    m
}

pub fn poly_identity(n: usize) -> PolyMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = b.first().map_or(0, Vec::len);
    let mut out = zeros(a.len(), m);
    for (i, row) in a.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[l].iter().enumerate() {
                if !y.is_zero() {
                    out[i][j] = &out[i][j] + &(x * y);
                }
            }
        }
    }
    out
}

pub fn poly_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![LaurentPoly::zero(); m]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[l].iter().enumerate() {
                if !y.is_zero() {
                    out[i][j] += &(x * y);
                }
            }
        }
    }
    out
}

fn sub_assign(a: &mut Matrix, b: &Matrix) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            if !y.is_zero() {
                *x = &*x - y;
            }
        }
    }
}

pub fn to_rat(a: &PolyMatrix) -> Matrix {
    a.iter()
        .map(|row| row.iter().map(|p| RatFn::from_poly(p.clone())).collect())
        .collect()
}

fn block<T: Clone>(m: &[Vec<T>], rows: &Range<usize>, cols: &Range<usize>) -> Vec<Vec<T>> {
    m[rows.clone()].iter().map(|row| row[cols.clone()].to_vec()).collect()
}

fn put_block<T: Clone>(m: &mut [Vec<T>], rows: &Range<usize>, cols: &Range<usize>, b: &[Vec<T>]) {
    for (i, r) in rows.clone().enumerate() {
        m[r][cols.clone()].clone_from_slice(&b[i]);
    }
}

/// Inverse over `Q(q)` by Gauss-Jordan elimination; `None` if singular.
pub fn invert(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].inv()?;
        for j in 0..n {
            m[col][j] = &m[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                if !m[col][j].is_zero() {
                    m[r][j] = &m[r][j] - &(&f * &m[col][j]);
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
    }
    Some(inv)
}

/// Determinant over `Q(q)` by elimination.
pub fn determinant(a: &Matrix) -> RatFn {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut det = RatFn::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return RatFn::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det = &det * &m[col][col];
        let p = m[col][col].inv().expect("nonzero pivot");
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &p;
            for j in col..n {
                if !m[col][j].is_zero() {
                    m[r][j] = &m[r][j] - &(&f * &m[col][j]);
                }
            }
        }
    }
    det
}

fn to_poly(a: &Matrix, row0: usize, col0: usize) -> Result<PolyMatrix> {
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    x.as_laurent().cloned().ok_or_else(|| Error::NotInA {
                        row: row0 + i,
                        col: col0 + j,
                        value: x.to_string(),
                    })
                })
                .collect()
        })
        .collect()
}

/// `Lambda = tH' D' H'` with identity diagonal blocks in `H'`, processing
/// classes from the last to the first. Returns `(H', D')`.
pub fn hd_decompose(lambda: &Matrix, classes: &[Range<usize>]) -> Result<(PolyMatrix, Matrix)> {
    let n = lambda.len();
    let mut h = poly_identity(n);
    let mut d = zeros(n, n);
    let hr = |h: &PolyMatrix, r: &Range<usize>, c: &Range<usize>| to_rat(&block(h, r, c));
    for ci in (0..classes.len()).rev() {
        let ri = &classes[ci];
        // tH_KI D_K for every later class K.
        let left: Vec<(usize, Matrix)> = ((ci + 1)..classes.len())
            .into_par_iter()
            .filter_map(|k| {
                let rk = &classes[k];
                let hki = hr(&h, rk, ri);
                if hki.iter().flatten().all(RatFn::is_zero) {
                    return None;
                }
                Some((k, mul(&transpose(&hki), &block(&d, rk, rk))))
            })
            .collect();
        let correction = |cols: &Range<usize>| {
            let mut acc = zeros(ri.len(), cols.len());
            for (k, t) in &left {
                let hkj = hr(&h, &classes[*k], cols);
                let prod = mul(t, &hkj);
                for (ra, rb) in acc.iter_mut().zip(&prod) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        if !y.is_zero() {
                            *x = &*x + y;
                        }
                    }
                }
            }
            acc
        };
        let mut di = block(lambda, ri, ri);
        sub_assign(&mut di, &correction(ri));
        let di_inv = invert(&di).ok_or(Error::SingularBlock { class: ci })?;
        let rows: Vec<(usize, Result<PolyMatrix>)> = (0..ci)
            .into_par_iter()
            .map(|cj| {
                let rj = &classes[cj];
                let mut rhs = block(lambda, ri, rj);
                sub_assign(&mut rhs, &correction(rj));
                (cj, to_poly(&mul(&di_inv, &rhs), ri.start, rj.start))
            })
            .collect();
        for (cj, hij) in rows {
            put_block(&mut h, ri, &classes[cj], &hij?);
        }
        put_block(&mut d, ri, ri, &di);
    }
    Ok((h, d))
}

/// The same factorization by right-looking Schur complement updates.
pub fn hd_decompose_schur(lambda: &Matrix, classes: &[Range<usize>]) -> Result<(PolyMatrix, Matrix)> {
    let n = lambda.len();
    let mut s: Matrix = lambda.to_vec();
    let mut h = poly_identity(n);
    let mut d = zeros(n, n);
    for ci in (0..classes.len()).rev() {
        let ri = classes[ci].clone();
        let di = block(&s, &ri, &ri);
        let di_inv = invert(&di).ok_or(Error::SingularBlock { class: ci })?;
        let below = 0..ri.start;
        let hi = mul(&di_inv, &block(&s, &ri, &below));
        let update = mul(&mul(&transpose(&hi), &di), &hi);
        for a in below.clone() {
            for b in below.clone() {
                if !update[a][b].is_zero() {
                    s[a][b] = &s[a][b] - &update[a][b];
                }
            }
        }
        put_block(&mut h, &ri, &below, &to_poly(&hi, ri.start, 0)?);
        put_block(&mut d, &ri, &ri, &di);
    }
    Ok((h, d))
}

/// The block-diagonal Kostka matrix of a fiber.
pub fn kostka_matrix(fiber: &Fiber) -> Vec<Vec<i64>> {
    let n = fiber.len();
    let mut u = vec![vec![0i64; n]; n];
    for r in &fiber.classes {
        for a in r.clone() {
            for b in r.clone() {
                u[a][b] = kostka_entry(&fiber.indices[a], &fiber.indices[b]) as i64;
            }
        }
    }
    u
}

fn kostka_entry(row: &PBWIndex, col: &PBWIndex) -> u64 {
    let keys: std::collections::BTreeSet<usize> = row.zero().keys().chain(col.zero().keys()).copied().collect();
    keys.into_iter()
        .map(|i| kostka(&row.lambda(i), &col.lambda(i)))
        .product()
}

fn int_to_poly(u: &[Vec<i64>]) -> PolyMatrix {
    u.iter()
        .map(|row| row.iter().map(|&x| LaurentPoly::constant(x)).collect())
        .collect()
}

/// Splits `H` into `P` (identity diagonal blocks, off-diagonal entries in
/// `qZ[q]`) and `Q` (bar-invariant, `Q_JJ = H_JJ`) with `H = P Q`.
pub fn pq_split(h: &PolyMatrix, classes: &[Range<usize>]) -> Result<(PolyMatrix, PolyMatrix)> {
    let n = h.len();
    let nc = classes.len();
    let mut p = poly_identity(n);
    let mut q = vec![vec![LaurentPoly::zero(); n]; n];
    let mut diag_inv = Vec::with_capacity(nc);
    for (cj, rj) in classes.iter().enumerate() {
        let hjj = block(h, rj, rj);
        if hjj.iter().flatten().any(|x| !x.is_bar_invariant()) {
            return Err(Error::Internal(format!("diagonal block {cj} of H is not bar-invariant")));
        }
        let inv = invert(&to_rat(&hjj)).ok_or(Error::SingularBlock { class: cj })?;
        diag_inv.push(to_poly(&inv, rj.start, rj.start)?);
        put_block(&mut q, rj, rj, &hjj);
    }
    for dist in 1..nc {
        for cj in 0..(nc - dist) {
            let ci = cj + dist;
            let (ri, rj) = (&classes[ci], &classes[cj]);
            let mut r = block(h, ri, rj);
            for ck in (cj + 1)..ci {
                let rk = &classes[ck];
                let prod = poly_mul(&block(&p, ri, rk), &block(&q, rk, rj));
                for (ra, rb) in r.iter_mut().zip(&prod) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x -= y;
                    }
                }
            }
            let x = poly_mul(&r, &diag_inv[cj]);
            let mut pij = x.clone();
            let mut rij = x;
            for (prow, rrow) in pij.iter_mut().zip(rij.iter_mut()) {
                for (pe, re) in prow.iter_mut().zip(rrow.iter_mut()) {
                    let (a, b) = re.split_bar();
                    *pe = a;
                    *re = b;
                }
            }
            let hjj = block(h, rj, rj);
            put_block(&mut p, ri, rj, &pij);
            put_block(&mut q, ri, rj, &poly_mul(&rij, &hjj));
        }
    }
    Ok((p, q))
}

/// Inverse of the block lower triangular `Q` by forward substitution.
pub fn invert_q(q: &PolyMatrix, classes: &[Range<usize>]) -> Result<PolyMatrix> {
    let n = q.len();
    let nc = classes.len();
    let mut x = vec![vec![LaurentPoly::zero(); n]; n];
    let mut diag_inv = Vec::with_capacity(nc);
    for (cj, rj) in classes.iter().enumerate() {
        let inv = invert(&to_rat(&block(q, rj, rj))).ok_or(Error::SingularBlock { class: cj })?;
        let inv = to_poly(&inv, rj.start, rj.start)?;
        put_block(&mut x, rj, rj, &inv);
        diag_inv.push(inv);
    }
    for ci in 0..nc {
        let ri = &classes[ci];
        for cj in 0..ci {
            let rj = &classes[cj];
            let mut acc = vec![vec![LaurentPoly::zero(); rj.len()]; ri.len()];
            for ck in cj..ci {
                let rk = &classes[ck];
                let prod = poly_mul(&block(q, ri, rk), &block(&x, rk, rj));
                for (ra, rb) in acc.iter_mut().zip(&prod) {
                    for (a, b) in ra.iter_mut().zip(rb) {
                        *a += b;
                    }
                }
            }
            let xij = poly_mul(&diag_inv[ci], &acc);
            let neg: PolyMatrix = xij.into_iter().map(|row| row.into_iter().map(|e| -e).collect()).collect();
            put_block(&mut x, ri, rj, &neg);
        }
    }
    Ok(x)
}

/// All matrices of the decomposition of one fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub fiber: Fiber,
    /// `H` with Kostka diagonal blocks.
    pub h: PolyMatrix,
    /// Gram matrix of the PBW basis, block diagonal.
    pub d: Matrix,
    pub p: PolyMatrix,
    pub q: PolyMatrix,
    pub q_inv: PolyMatrix,
    /// The Kostka matrix `U` (diagonal blocks of `H`).
    pub kostka: Vec<Vec<i64>>,
    /// `H' = U^-1 H`, identity diagonal blocks.
    pub h_unit: PolyMatrix,
    /// `D' = tU D U`.
    pub d_unit: Matrix,
}

/// Which elimination computes the identity-diagonal factorization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Left-looking, classes sorted by `c+` first.
    #[default]
    Standard,
    /// Right-looking Schur complements, classes sorted by `c-` first.
    Alternate,
}

/// Runs the factorization and the split on a Gram matrix.
pub fn decompose(gram: &GramMatrix) -> Result<Decomposition> {
    let fiber = &gram.fiber;
    let classes = &fiber.classes;
    let (h_unit, d_unit) = hd_decompose(&gram.entries, classes)?;
    finish(fiber.clone(), h_unit, d_unit)
}

/// Factorization with the alternate schedule, permuted back to the order of
/// `gram`.
pub fn decompose_alternate(gram: &GramMatrix, alt: &Fiber) -> Result<Decomposition> {
    let fiber = &gram.fiber;
    let n = fiber.len();
    let pos: Vec<usize> = alt
        .indices
        .iter()
        .map(|c| {
            fiber
                .position(c)
                .ok_or_else(|| Error::Internal("alternate fiber differs from the primary one".into()))
        })
        .collect::<Result<_>>()?;
    if pos.len() != n {
        return Err(Error::Internal("alternate fiber has a different size".into()));
    }
    let lambda_alt: Matrix = (0..n)
        .map(|a| (0..n).map(|b| gram.entries[pos[a]][pos[b]].clone()).collect())
        .collect();
    let (h_alt, d_alt) = hd_decompose_schur(&lambda_alt, &alt.classes)?;
    let mut h_unit = poly_identity(n);
    let mut d_unit = zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            h_unit[pos[a]][pos[b]] = h_alt[a][b].clone();
            d_unit[pos[a]][pos[b]] = d_alt[a][b].clone();
        }
    }
    finish(fiber.clone(), h_unit, d_unit)
}

fn finish(fiber: Fiber, h_unit: PolyMatrix, d_unit: Matrix) -> Result<Decomposition> {
    let classes = fiber.classes.clone();
    let kostka = kostka_matrix(&fiber);
    let u = int_to_poly(&kostka);
    let h = poly_mul(&u, &h_unit);
    let mut d = zeros(fiber.len(), fiber.len());
    for (ci, r) in classes.iter().enumerate() {
        let ub = to_rat(&block(&u, r, r));
        let ub_inv = invert(&ub).ok_or(Error::SingularBlock { class: ci })?;
        let db = mul(&mul(&transpose(&ub_inv), &block(&d_unit, r, r)), &ub_inv);
        put_block(&mut d, r, r, &db);
    }
    let (p, q) = pq_split(&h, &classes)?;
    let q_inv = invert_q(&q, &classes)?;
    Ok(Decomposition {
        fiber,
        h,
        d,
        p,
        q,
        q_inv,
        kostka,
        h_unit,
        d_unit,
    })
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, failure: Option<String>) -> Self {
        Check {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure,
        }
    }
}

/// Named checks over a decomposition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn push(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(Check::new(name, failure));
    }
}

fn first_failure<I: Iterator<Item = (usize, usize)>>(cells: I, bad: impl Fn(usize, usize) -> Option<String>) -> Option<String> {
    for (a, b) in cells {
        if let Some(msg) = bad(a, b) {
            return Some(format!("({a}, {b}): {msg}"));
        }
    }
    None
}

fn all_cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

/// `tP D P` expanded through `q^order` lies in `Id + q Z[[q]]` entrywise.
pub fn verify_almost_orthonormal(p: &PolyMatrix, d: &Matrix, order: i64) -> Option<String> {
    let pr = to_rat(p);
    let g = mul(&mul(&transpose(&pr), d), &pr);
    let n = g.len();
    first_failure(all_cells(n), |a, b| {
        let s = TruncSeries::of(&g[a][b], order);
        if !s.is_integral() {
            return Some(format!("non-integral expansion {s}"));
        }
        if let Some(e) = s.leading_exp() {
            if e < 0 {
                return Some(format!("negative power in {s}"));
            }
        }
        let c0 = s.coeff(0);
        let expected = if a == b { 1 } else { 0 };
        if c0 != num_rational::BigRational::from_integer(BigInt::from(expected)) {
            return Some(format!("constant term {c0} in {s}"));
        }
        None
    })
}

/// One-element classes with empty `c0` carry `prod_s prod_{d<=c_s} 1/(1-q^{2d})`;
/// larger classes are symmetric and nonsingular.
pub fn verify_prop32_diagonal(d: &Matrix, fiber: &Fiber) -> Option<String> {
    for (ci, r) in fiber.classes.iter().enumerate() {
        let c = &fiber.indices[r.start];
        if r.len() == 1 && c.zero().is_empty() {
            let expected = c
                .real_entries()
                .fold(RatFn::one(), |acc, (_, m)| &acc * &divided_power_norm(m));
            if d[r.start][r.start] != expected {
                return Some(format!("class {ci} ({c}): D = {}, expected {expected}", d[r.start][r.start]));
            }
        } else {
            let b = block(d, r, r);
            if b != transpose(&b) {
                return Some(format!("class {ci} block is not symmetric"));
            }
            if determinant(&b).is_zero() {
                return Some(format!("class {ci} block is singular"));
            }
        }
    }
    None
}

/// Every check on a decomposition against its Gram matrix.
pub fn verify(dec: &Decomposition, lambda: &Matrix, order: i64) -> Report {
    let mut report = Report::default();
    let fiber = &dec.fiber;
    let n = fiber.len();
    let class_of = fiber.class_of();
    let hr = to_rat(&dec.h);

    let hdh = mul(&mul(&transpose(&hr), &dec.d), &hr);
    report.push(
        "tHDH = Lambda",
        first_failure(all_cells(n), |a, b| (hdh[a][b] != lambda[a][b]).then(|| "mismatch".into())),
    );
    let pq = poly_mul(&dec.p, &dec.q);
    report.push(
        "PQ = H",
        first_failure(all_cells(n), |a, b| (pq[a][b] != dec.h[a][b]).then(|| "mismatch".into())),
    );
    let hu = to_rat(&dec.h_unit);
    let hdh_unit = mul(&mul(&transpose(&hu), &dec.d_unit), &hu);
    report.push(
        "tH'D'H' = Lambda",
        first_failure(all_cells(n), |a, b| (hdh_unit[a][b] != lambda[a][b]).then(|| "mismatch".into())),
    );
    report.push(
        "P off-diagonal in qZ[q]",
        first_failure(all_cells(n), |a, b| {
            let x = &dec.p[a][b];
            if a == b {
                return (!x.is_one()).then(|| format!("diagonal {x}"));
            }
            x.min_exp().filter(|&e| e < 1).map(|_| format!("entry {x}"))
        }),
    );
    report.push(
        "Q bar-invariant",
        first_failure(all_cells(n), |a, b| (!dec.q[a][b].is_bar_invariant()).then(|| dec.q[a][b].to_string())),
    );
    report.push(
        "D block diagonal",
        first_failure(all_cells(n), |a, b| {
            (class_of[a] != class_of[b] && !dec.d[a][b].is_zero()).then(|| dec.d[a][b].to_string())
        }),
    );
    report.push(
        "H zero pattern",
        first_failure(all_cells(n), |a, b| {
            let (row, col) = (&fiber.indices[a], &fiber.indices[b]);
            let allowed = if class_of[a] == class_of[b] { prec(col, row) } else { prec0(col, row) };
            (a != b && !dec.h[a][b].is_zero() && !allowed).then(|| format!("H[{row}, {col}] = {}", dec.h[a][b]))
        }),
    );
    report.push(
        "P zero pattern",
        first_failure(all_cells(n), |a, b| {
            let (row, col) = (&fiber.indices[a], &fiber.indices[b]);
            (a != b && !dec.p[a][b].is_zero() && !prec0(col, row)).then(|| format!("P[{row}, {col}] = {}", dec.p[a][b]))
        }),
    );
    let qqi = poly_mul(&dec.q, &dec.q_inv);
    report.push(
        "Q Qinv = I",
        first_failure(all_cells(n), |a, b| {
            let ok = if a == b { qqi[a][b].is_one() } else { qqi[a][b].is_zero() };
            (!ok).then(|| qqi[a][b].to_string())
        }),
    );
    report.push(
        "single real entry columns of Qinv are unit vectors",
        first_failure((0..n).filter(|&b| fiber.indices[b].single_real_entry().is_some()).flat_map(|b| (0..n).map(move |a| (a, b))), |a, b| {
            let x = &dec.q_inv[a][b];
            let ok = if a == b { x.is_one() } else { x.is_zero() };
            (!ok).then(|| format!("Qinv[{a}][{b}] = {x}"))
        }),
    );
    report.push("D diagonal values", verify_prop32_diagonal(&dec.d, fiber));
    report.push("almost orthonormal", verify_almost_orthonormal(&dec.p, &dec.d, order));
    let u = int_to_poly(&dec.kostka);
    report.push(
        "D' = tU D U",
        {
            let ur = to_rat(&u);
            let dd = mul(&mul(&transpose(&ur), &dec.d), &ur);
            first_failure(all_cells(n), |a, b| (dd[a][b] != dec.d_unit[a][b]).then(|| "mismatch".into()))
        },
    );
    report
}

/// Compares two decompositions entry by entry.
pub fn same_decomposition(a: &Decomposition, b: &Decomposition) -> bool {
    a.fiber.indices == b.fiber.indices && a.h == b.h && a.d == b.d && a.p == b.p && a.q == b.q
}

/// Decomposes and verifies one fiber, `None` when any step or check fails.
pub fn decompose_checked(
    nu: &Root,
    seq: &BetaSequence,
    table: &MonomialTable,
    engine: Engine,
    cache: &InnerProductCache,
    order: i64,
) -> Result<Option<(GramMatrix, Decomposition)>> {
    let fiber = total_order(nu, seq)?;
    let gram = gram_matrix(&fiber, seq, table, engine, cache)?;
    let dec = match decompose(&gram) {
        Ok(dec) => dec,
        Err(Error::SingularBlock { .. } | Error::NotInA { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(verify(&dec, &gram.entries, order).passed().then_some((gram, dec)))
}

/// Candidate words for `m(c beta)`: the vertex-order reading, then every
/// divided-power word of the weight by number of letters and lexicographically.
pub fn candidate_words(seq: &BetaSequence, c: u32, beta: &Root) -> Result<Vec<MonomialWord>> {
    let first = m_real(seq.datum(), seq.vertex_order(), c, beta)?;
    let mut rest = divided_power_words(&beta.scaled(i64::from(c)));
    rest.sort_by(|a, b| (a.letters().len(), a.letters()).cmp(&(b.letters().len(), b.letters())));
    rest.retain(|w| *w != first);
    rest.insert(0, first);
    Ok(rest)
}

/// Fixes `m(c beta)` for every real `c beta` below one of `bounds`, by
/// increasing height.
///
/// The vertex-order reading is kept when the fiber of `c beta` decomposes and
/// passes [`verify`]; otherwise the first passing candidate of
/// [`candidate_words`] is recorded. Each choice depends only on weights
/// below it, so tables built for different bounds agree where they overlap.
pub fn resolve_monomials(
    seq: &BetaSequence,
    bounds: &[Root],
    engine: Engine,
    cache: &InnerProductCache,
    order: i64,
) -> Result<MonomialTable> {
    let mut targets: BTreeMap<(i64, Vec<i64>), (u32, Root)> = BTreeMap::new();
    for bound in bounds {
        for (_, beta) in seq.real_roots_below(bound) {
            let mut c = 1u32;
            while beta.scaled(i64::from(c)).leq(bound) {
                let w = beta.scaled(i64::from(c));
                targets.insert((w.height(), w.0), (c, beta.clone()));
                c += 1;
            }
        }
    }
    let mut table = MonomialTable::new();
    for ((_, coords), (c, beta)) in targets {
        let weight = Root(coords);
        if decompose_checked(&weight, seq, &table, engine, cache, order)?.is_some() {
            continue;
        }
        let mut found = false;
        for cand in candidate_words(seq, c, &beta)?.into_iter().skip(1) {
            table.insert(&weight, cand);
            if decompose_checked(&weight, seq, &table, engine, cache, order)?.is_some() {
                found = true;
                break;
            }
        }
        if !found {
            table.remove(&weight);
            return Err(Error::NoMonomial(weight.0));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::LaurentPoly as L;

    fn r(p: L) -> RatFn {
        RatFn::from_poly(p)
    }

    #[test]
    fn identity_decomposes_trivially() {
        let lambda = identity(3);
        let classes = vec![0..1, 1..2, 2..3];
        let (h, d) = hd_decompose(&lambda, &classes).unwrap();
        assert_eq!(h, poly_identity(3));
        assert_eq!(d, identity(3));
        let (h2, d2) = hd_decompose_schur(&lambda, &classes).unwrap();
        assert_eq!((h2, d2), (h, d));
    }

    #[test]
    fn two_by_two_hand_elimination() {
        let den = L::from_terms([(0, 1), (2, -1)]).pow(2);
        let one = RatFn::new(L::one(), den.clone());
        let q = RatFn::new(L::q_pow(1), den);
        let lambda = vec![vec![one.clone(), q.clone()], vec![q, one.clone()]];
        let classes = vec![0..1, 1..2];
        let (h, d) = hd_decompose(&lambda, &classes).unwrap();
        assert_eq!(h[1][0], L::q_pow(1));
        assert_eq!(d[1][1], one);
        assert_eq!(d[0][0], divided_power_norm(1));
        let (p, qm) = pq_split(&h, &classes).unwrap();
        assert_eq!(p[1][0], L::q_pow(1));
        assert!(qm[1][0].is_zero());
    }

    #[test]
    fn split_of_bar_invariant_entry() {
        let h = vec![
            vec![L::one(), L::zero()],
            vec![L::from_terms([(-1, 1), (0, 1), (1, 1)]), L::one()],
        ];
        let (p, q) = pq_split(&h, &[0..1, 1..2]).unwrap();
        assert!(p[1][0].is_zero());
        assert_eq!(q[1][0], h[1][0]);
    }

    #[test]
    fn singular_block_is_reported() {
        let lambda = vec![vec![RatFn::zero()]];
        assert!(matches!(hd_decompose(&lambda, &[0..1]), Err(Error::SingularBlock { .. })));
    }

    #[test]
    fn non_laurent_h_is_reported() {
        let lambda = vec![
            vec![r(L::one()), r(L::one())],
            vec![r(L::one()), r(L::constant(2))],
        ];
        assert!(matches!(hd_decompose(&lambda, &[0..1, 1..2]), Err(Error::NotInA { .. })));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = vec![
            vec![r(L::q_pow(1)), r(L::one())],
            vec![r(L::one()), r(L::q_pow(-1))],
        ];
        // det = q q^-1 - 1 = 0.
        assert!(determinant(&a).is_zero());
        assert!(invert(&a).is_none());
        let b = vec![vec![r(L::q_pow(1)), r(L::one())], vec![r(L::zero()), r(L::constant(2))]];
        let bi = invert(&b).unwrap();
        assert_eq!(mul(&b, &bi), identity(2));
        assert_eq!(determinant(&b), r(L::monomial(2, 1)));
    }
}
