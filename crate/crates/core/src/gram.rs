//! Inner products of monomial words and Gram matrices of fibers.
//!
//! For words `F, F'` of equal weight with color sequences `nu, nu'` of length
//! `t`, the form is
//!
//! ```text
//! (F, F') = sum_w q^{-A(w)} / ((1 - q^2)^t prod [c_k]! prod [c'_k]!)
//! ```
//!
//! where `w` runs over bijections with `nu'_{w(k)} = nu_k` and
//! `A(w) = sum_{k<l, w(k)>w(l)} (alpha_{nu_k}, alpha_{nu_l})`. The sum in the
//! numerator is computed three ways: by enumeration, by a dynamic program over
//! consumed positions, and by the coproduct recursion of the form.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine_root::{BetaSequence, CartanDatum};
use crate::error::{Error, Result};
use crate::monomial::{m_index, MonomialTable, MonomialWord};
use crate::pbw_index::Fiber;
use crate::qfield::{qfact, LaurentPoly, RatFn};

/// Which evaluator computes inner products.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Dp,
    Brute,
    /// Runs all three evaluators and fails on any disagreement.
    OracleCheck,
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(Engine::Dp),
            "brute" => Ok(Engine::Brute),
            "oracle-check" => Ok(Engine::OracleCheck),
            other => Err(Error::Config(format!("unknown engine {other:?}"))),
        }
    }
}

fn same_colors(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Every value `A(w)` over color-matching bijections, in enumeration order.
pub fn inversion_statistics(datum: &CartanDatum, w1: &MonomialWord, w2: &MonomialWord) -> Vec<i64> {
    let nu = w1.colors();
    let nu2 = w2.colors();
    if !same_colors(&nu, &nu2) {
        return Vec::new();
    }
    let t = nu.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; t];
    let mut used = vec![false; t];
    fn rec(
        k: usize,
        nu: &[usize],
        nu2: &[usize],
        perm: &mut [usize],
        used: &mut [bool],
        datum: &CartanDatum,
        out: &mut Vec<i64>,
    ) {
        let t = nu.len();
        if k == t {
            let mut a = 0;
            for x in 0..t {
                for y in (x + 1)..t {
                    if perm[x] > perm[y] {
                        a += datum.pairing(nu[x], nu[y]);
                    }
                }
            }
            out.push(a);
            return;
        }
        for j in 0..t {
            if !used[j] && nu2[j] == nu[k] {
                used[j] = true;
                perm[k] = j;
                rec(k + 1, nu, nu2, perm, used, datum, out);
                used[j] = false;
            }
        }
    }
    rec(0, &nu, &nu2, &mut perm, &mut used, datum, &mut out);
    out
}

/// `sum_w q^{-A(w)}` by enumerating every bijection.
pub fn xi_sum_bruteforce(datum: &CartanDatum, w1: &MonomialWord, w2: &MonomialWord) -> LaurentPoly {
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for a in inversion_statistics(datum, w1, w2) {
        *counts.entry(-a).or_default() += 1;
    }
    LaurentPoly::from_terms(counts)
}

/// Largest `t` handled by the subset dynamic program.
pub const MAX_DP_DEGREE: usize = 30;

/// `sum_w q^{-A(w)}` by a dynamic program over sets of consumed positions of
/// `w1`, assigning the positions of `w2` left to right.
pub fn xi_sum_dp(datum: &CartanDatum, w1: &MonomialWord, w2: &MonomialWord) -> LaurentPoly {
    let nu = w1.colors();
    let nu2 = w2.colors();
    if !same_colors(&nu, &nu2) {
        return LaurentPoly::zero();
    }
    let t = nu.len();
    assert!(t <= MAX_DP_DEGREE, "word of degree {t} exceeds the DP limit");
    let mut layer: HashMap<u32, BTreeMap<i64, u128>> = HashMap::new();
    layer.insert(0, BTreeMap::from([(0, 1)]));
    for &color in &nu2 {
        let mut next: HashMap<u32, BTreeMap<i64, u128>> = HashMap::new();
        for (mask, poly) in &layer {
            for k in 0..t {
                if nu[k] != color || mask & (1 << k) != 0 {
                    continue;
                }
                // Earlier-assigned sources after k now form inversions with k.
                let mut inc = 0;
                for l in (k + 1)..t {
                    if mask & (1 << l) != 0 {
                        inc += datum.pairing(color, nu[l]);
                    }
                }
                let target = next.entry(mask | (1 << k)).or_default();
                for (&a, &n) in poly {
                    *target.entry(a + inc).or_default() += n;
                }
            }
        }
        layer = next;
    }
    let full = if t == 0 { 0 } else { u32::MAX >> (32 - t) };
    let counts = layer.remove(&full).unwrap_or_default();
    LaurentPoly::from_terms(counts.into_iter().map(|(a, n)| (-a, BigInt::from(n))))
}

/// `sum_w q^{-A(w)}` from the coproduct: peel the last generator of `w2`,
/// pairing it with each equal letter of `w1` and twisting by the letters that
/// follow it.
pub fn xi_sum_coproduct(datum: &CartanDatum, w1: &MonomialWord, w2: &MonomialWord) -> LaurentPoly {
    let x = w1.colors();
    let y = w2.colors();
    if !same_colors(&x, &y) {
        return LaurentPoly::zero();
    }
    let mut memo = HashMap::new();
    coproduct_rec(datum, &x, &y, &mut memo)
}

fn coproduct_rec(
    datum: &CartanDatum,
    x: &[usize],
    y: &[usize],
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), LaurentPoly>,
) -> LaurentPoly {
    let Some((&j, y_rest)) = y.split_last() else {
        return if x.is_empty() {
            LaurentPoly::one()
        } else {
            LaurentPoly::zero()
        };
    };
    let key = (x.to_vec(), y.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut total = LaurentPoly::zero();
    for p in 0..x.len() {
        if x[p] != j {
            continue;
        }
        let twist: i64 = x[p + 1..].iter().map(|&c| datum.pairing(j, c)).sum();
        let mut rest = x.to_vec();
        rest.remove(p);
        total += &coproduct_rec(datum, &rest, y_rest, memo).shift(-twist);
    }
    memo.insert(key, total.clone());
    total
}

/// Divides a bijection sum by `(1 - q^2)^t` and the divided-power factorials.
pub fn normalize_sum(sum: LaurentPoly, w1: &MonomialWord, w2: &MonomialWord) -> RatFn {
    if sum.is_zero() {
        return RatFn::zero();
    }
    let t = w1.degree() as u32;
    let mut den = LaurentPoly::from_terms([(0, 1), (2, -1)]).pow(t);
    for &(_, c) in w1.letters().iter().chain(w2.letters()) {
        if c > 1 {
            den = &den * &qfact(c);
        }
    }
    RatFn::new(sum, den)
}

pub fn inner_product_bruteforce(datum: &CartanDatum, w1: &MonomialWord, w2: &MonomialWord) -> RatFn {
    normalize_sum(xi_sum_bruteforce(datum, w1, w2), w1, w2)
}

pub fn inner_product(datum: &CartanDatum, w1: &MonomialWord, w2: &MonomialWord) -> RatFn {
    normalize_sum(xi_sum_dp(datum, w1, w2), w1, w2)
}

pub fn inner_product_coproduct(datum: &CartanDatum, w1: &MonomialWord, w2: &MonomialWord) -> RatFn {
    normalize_sum(xi_sum_coproduct(datum, w1, w2), w1, w2)
}

pub fn inner_product_with(datum: &CartanDatum, engine: Engine, w1: &MonomialWord, w2: &MonomialWord) -> Result<RatFn> {
    match engine {
        Engine::Dp => Ok(inner_product(datum, w1, w2)),
        Engine::Brute => Ok(inner_product_bruteforce(datum, w1, w2)),
        Engine::OracleCheck => {
            let dp = xi_sum_dp(datum, w1, w2);
            let brute = xi_sum_bruteforce(datum, w1, w2);
            let coproduct = xi_sum_coproduct(datum, w1, w2);
            if dp != brute || dp != coproduct {
                return Err(Error::Internal(format!(
                    "inner product evaluators disagree on ({w1}, {w2}): dp {dp}, brute {brute}, coproduct {coproduct}"
                )));
            }
            Ok(normalize_sum(dp, w1, w2))
        }
    }
}

/// Memo of inner products shared across Gram matrices.
#[derive(Default)]
pub struct InnerProductCache {
    map: Mutex<HashMap<(MonomialWord, MonomialWord), RatFn>>,
}

impl InnerProductCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_or_compute(
        &self,
        datum: &CartanDatum,
        engine: Engine,
        w1: &MonomialWord,
        w2: &MonomialWord,
    ) -> Result<RatFn> {
        let key = if w1 <= w2 {
            (w1.clone(), w2.clone())
        } else {
            (w2.clone(), w1.clone())
        };
        if let Some(v) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let v = inner_product_with(datum, engine, &key.0, &key.1)?;
        self.map.lock().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }
}

/// The Gram matrix of the monomials of a fiber, rows in fiber order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub fiber: Fiber,
    pub words: Vec<MonomialWord>,
    pub entries: Vec<Vec<RatFn>>,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

/// Assembles the Gram matrix of `fiber`, computing entries in parallel.
pub fn gram_matrix(
    fiber: &Fiber,
    seq: &BetaSequence,
    table: &MonomialTable,
    engine: Engine,
    cache: &InnerProductCache,
) -> Result<GramMatrix> {
    let datum = seq.datum();
    let words = fiber
        .indices
        .iter()
        .map(|c| m_index(c, seq, table))
        .collect::<Result<Vec<_>>>()?;
    let n = words.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| cache.get_or_compute(datum, engine, &words[i], &words[j]))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = vec![vec![RatFn::zero(); n]; n];
    for (&(i, j), v) in pairs.iter().zip(values) {
        entries[j][i] = v.clone();
        entries[i][j] = v;
    }
    let gram = GramMatrix {
        fiber: fiber.clone(),
        words,
        entries,
    };
    if !gram.is_symmetric() {
        return Err(Error::Internal("Gram matrix is not symmetric".into()));
    }
    Ok(gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_root::CartanType;
    use crate::qfield::divided_power_norm;

    fn a2() -> CartanDatum {
        CartanDatum::new(CartanType::A, 2).unwrap()
    }

    fn w(s: &str) -> MonomialWord {
        s.parse().unwrap()
    }

    fn one_minus_q2_pow(t: u32) -> LaurentPoly {
        LaurentPoly::from_terms([(0, 1), (2, -1)]).pow(t)
    }

    #[test]
    fn generator_norm() {
        let d = a2();
        let v = inner_product(&d, &w("f1"), &w("f1"));
        assert_eq!(v, RatFn::new(LaurentPoly::one(), one_minus_q2_pow(1)));
        assert!(inner_product(&d, &w("f1"), &w("f2")).is_zero());
        assert!(inner_product(&d, &w("1"), &w("1")).is_one());
    }

    #[test]
    fn divided_powers_match_closed_form() {
        let d = a2();
        for c in 1..=4 {
            let word = MonomialWord::new(vec![(2, c)]);
            assert_eq!(inner_product(&d, &word, &word), divided_power_norm(c));
            assert_eq!(inner_product_coproduct(&d, &word, &word), divided_power_norm(c));
        }
    }

    #[test]
    fn two_letter_values() {
        let d = a2();
        let den = one_minus_q2_pow(2);
        assert_eq!(
            inner_product(&d, &w("f1 f2"), &w("f2 f1")),
            RatFn::new(LaurentPoly::q_pow(1), den.clone())
        );
        assert_eq!(
            inner_product(&d, &w("f1 f2"), &w("f1 f2")),
            RatFn::new(LaurentPoly::one(), den)
        );
    }

    #[test]
    fn evaluators_agree() {
        let d = a2();
        let words = ["f0 f1 f2 f1", "f1 f1 f0 f2", "f1^(2) f0 f2", "f2 f1 f0 f1", "f1 f0 f1 f2"];
        for a in words {
            for b in words {
                let (a, b) = (w(a), w(b));
                let brute = xi_sum_bruteforce(&d, &a, &b);
                assert_eq!(xi_sum_dp(&d, &a, &b), brute);
                assert_eq!(xi_sum_coproduct(&d, &a, &b), brute);
            }
        }
    }
}
