//! Cyclotomic numbers of order `e = 2l^2` and their matrices.
//!
//! For a prime `p = ek + 1` and a generator `g` of `F_p*`, the cyclotomic
//! number `(a,b)` counts pairs `(s,t)` with `0 <= s,t < k` solving
//!
//! ```text
//! 1 + g^(es+a) = g^(et+b)   (mod p)
//! ```
//!
//! Equivalently: how many elements of the coset `g^a * H` land in the coset
//! `g^b * H` after adding 1, where `H` is the subgroup of e-th powers. When
//! `k` is even, `-1` is an e-th power and this is also the number of
//! solutions of `g^(es+a) + g^(et+b) + 1 = 0`.
//!
//! Symmetry relations force many of the `e^2` index pairs to share a value
//! (six relations whose shape depends on the parity of `k`), so the full
//! matrix can be built by counting solutions only at one canonical
//! representative per equality class and broadcasting. Both that reduced
//! path and the naive all-pairs path are provided; they must agree
//! entry-for-entry, and the naive path doubles as the oracle in tests.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{self, Generator, PrimeModulus};
use crate::matrix::IntMatrix;

/// The parameter tuple `(l, e = 2l^2, p, k)` with `p = ek + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomyParams {
    l: u64,
    e: u64,
    k: u64,
    modulus: PrimeModulus,
}

impl CyclotomyParams {
    /// Validates `l` prime and `p = 2l^2 k + 1`, computing `k`.
    pub fn new(l: u64, modulus: PrimeModulus) -> Result<Self> {
        if !field::is_prime_u64(l) {
            return Err(Error::Param(format!("l = {l} is not prime")));
        }
        // Keeps e below 2^31 so every e-derived product in the crate stays
        // far from u64/usize overflow.
        if l > 1 << 15 {
            return Err(Error::Param(format!(
                "l = {l} is beyond the supported range"
            )));
        }
        let e = 2 * l * l;
        let p = modulus.p_u64();
        if !(p - 1).is_multiple_of(e) {
            return Err(Error::Param(format!(
                "p - 1 = {} is not divisible by 2l^2 = {e}",
                p - 1
            )));
        }
        Ok(Self {
            l,
            e,
            k: (p - 1) / e,
            modulus,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_primes(l: u64, p: u64) -> Result<Self> {
        Self::new(l, PrimeModulus::from_u64(p)?)
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    /// Matrix order `e = 2l^2`.
    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn k_even(&self) -> bool {
        self.k.is_multiple_of(2)
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    pub fn p_u64(&self) -> u64 {
        self.modulus.p_u64()
    }

    /// The row-sum correction `n_a`: 1 when `a = 0` with `k` even or
    /// `a = l^2` with `k` odd, else 0. Row `a` of any cyclotomic matrix
    /// sums to `k - n_a`.
    pub fn n_a(&self, a: u64) -> u64 {
        let hit = if self.k_even() {
            a == 0
        } else {
            a == self.l * self.l
        };
        u64::from(hit)
    }
}

/// An ordered index pair `(a, b)` with both coordinates reduced mod `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    pub a: u64,
    pub b: u64,
}

impl IndexPair {
    pub fn new(a: u64, b: u64) -> Self {
        Self { a, b }
    }

    /// Reduces signed coordinates into `[0, e)`; negative values are lifted
    /// by adding `e`.
    fn reduced(a: i64, b: i64, e: u64) -> Self {
        let e = e as i64;
        Self {
            a: a.rem_euclid(e) as u64,
            b: b.rem_euclid(e) as u64,
        }
    }
}

impl std::fmt::Display for IndexPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.a, self.b)
    }
}

/// The five nontrivial images of `(a, b)` under the equality relations.
///
/// For even `k`:  `(b,a)`, `(a-b,-b)`, `(b-a,-a)`, `(-a,b-a)`, `(-b,a-b)`.
/// For odd `k`:   `(b+l^2,a+l^2)`, `(l^2+a-b,-b)`, `(l^2+b-a,l^2-a)`,
///                `(-a,b-a)`, `(l^2-b,a-b)`.
fn relation_images(pair: IndexPair, params: &CyclotomyParams) -> [IndexPair; 5] {
    let e = params.e;
    let (a, b) = (pair.a as i64, pair.b as i64);
    if params.k_even() {
        [
            IndexPair::reduced(b, a, e),
            IndexPair::reduced(a - b, -b, e),
            IndexPair::reduced(b - a, -a, e),
            IndexPair::reduced(-a, b - a, e),
            IndexPair::reduced(-b, a - b, e),
        ]
    } else {
        let h = (params.l * params.l) as i64;
        [
            IndexPair::reduced(b + h, a + h, e),
            IndexPair::reduced(h + a - b, -b, e),
            IndexPair::reduced(h + b - a, h - a, e),
            IndexPair::reduced(-a, b - a, e),
            IndexPair::reduced(h - b, a - b, e),
        ]
    }
}

/// The full equality class of `pair`: the closure of `{pair}` under the
/// relation set for the parity of `k`. Class sizes are 1, 2, 3, or 6.
pub fn orbit(pair: IndexPair, params: &CyclotomyParams) -> BTreeSet<IndexPair> {
    let start = IndexPair::reduced(pair.a as i64, pair.b as i64, params.e);
    let mut seen = BTreeSet::new();
    seen.insert(start);
    let mut work = vec![start];
    while let Some(current) = work.pop() {
        for image in relation_images(current, params) {
            if seen.insert(image) {
                work.push(image);
            }
        }
    }
    seen
}

/// The lexicographically smallest member of `orbit(pair)`. Idempotent.
pub fn canonical_rep(pair: IndexPair, params: &CyclotomyParams) -> IndexPair {
    *orbit(pair, params)
        .iter()
        .next()
        .expect("orbit is nonempty")
}

/// The `e x e` grid of canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepTable {
    params: CyclotomyParams,
    entries: Vec<IndexPair>,
}

impl RepTable {
    pub fn params(&self) -> &CyclotomyParams {
        &self.params
    }

    pub fn get(&self, a: u64, b: u64) -> IndexPair {
        let e = self.params.e as usize;
        self.entries[a as usize * e + b as usize]
    }

    pub fn entries(&self) -> &[IndexPair] {
        &self.entries
    }

    /// Number of distinct representatives in the grid.
    pub fn distinct_count(&self) -> u64 {
        self.entries.iter().collect::<BTreeSet<_>>().len() as u64
    }
}

/// Builds the canonical-representative grid by closing each not-yet-visited
/// cell's orbit once and broadcasting the minimum to all members.
pub fn equality_table(params: &CyclotomyParams) -> RepTable {
    let e = params.e as usize;
    let mut entries = vec![None; e * e];
    for a in 0..e as u64 {
        for b in 0..e as u64 {
            let idx = a as usize * e + b as usize;
            if entries[idx].is_some() {
                continue;
            }
            let class = orbit(IndexPair::new(a, b), params);
            let rep = *class.iter().next().expect("orbit is nonempty");
            for member in class {
                entries[member.a as usize * e + member.b as usize] = Some(rep);
            }
        }
    }
    RepTable {
        params: params.clone(),
        entries: entries
            .into_iter()
            .map(|x| x.expect("grid covered"))
            .collect(),
    }
}

/// The representative grid with every entry's indices multiplied by
/// `multiplier` mod `e`, then re-canonicalized.
///
/// This is the index-permutation law in table form: if `g2^r = g1` then the
/// matrix of `g1` at `(a, b)` equals the matrix of `g2` at `(ra, rb)`, so
/// the grid permuted by `r` names, under `g2`, exactly the counts of the
/// matrix of `g1`.
pub fn permuted_equality_table(params: &CyclotomyParams, multiplier: u64) -> RepTable {
    let e = params.e();
    let base = equality_table(params);
    let entries = base
        .entries()
        .iter()
        .map(|rep| {
            canonical_rep(
                IndexPair::new(multiplier * rep.a % e, multiplier * rep.b % e),
                params,
            )
        })
        .collect();
    RepTable {
        params: params.clone(),
        entries,
    }
}

/// Number of equality classes among the `e^2` index pairs:
/// `e + ceil((e-1)(e-2)/6)`.
///
/// One singleton class, `e - 1` three-element classes, and the remaining
/// `(e-1)(e-2)` pairs in six-element classes — except for `l = 3`, where
/// two of those pairs instead form a single two-element class, which is
/// exactly what the ceiling absorbs.
pub fn class_count(params: &CyclotomyParams) -> u64 {
    let e = params.e;
    e + ((e - 1) * (e - 2)).div_ceil(6)
}

/// Precomputed power table for one `(generator, p)` pair, plus a stamped
/// membership array that lets a single cyclotomic number be counted in
/// `O(k)` instead of `O(k^2)`.
struct Eq1Evaluator {
    e: u64,
    k: u64,
    p: u64,
    /// `powers[i] = g^i mod p` for `0 <= i < p - 1`.
    powers: Vec<u64>,
    stamps: Vec<u64>,
    stamp_gen: u64,
    evaluations: usize,
}

impl Eq1Evaluator {
    fn new(generator: &Generator, params: &CyclotomyParams) -> Self {
        assert_eq!(
            generator.modulus().p(),
            params.modulus().p(),
            "generator and params disagree on the modulus"
        );
        let p = params.p_u64();
        let g = generator.value_u64();
        let mut powers = Vec::with_capacity((p - 1) as usize);
        let mut x = 1u64;
        for _ in 0..p - 1 {
            powers.push(x);
            x = (u128::from(x) * u128::from(g) % u128::from(p)) as u64;
        }
        debug_assert_eq!(x, 1, "generator order must be p - 1");
        Self {
            e: params.e(),
            k: params.k(),
            p,
            // One extra slot so `1 + (p-1)` can be probed without wrapping.
            stamps: vec![0; p as usize + 1],
            powers,
            stamp_gen: 0,
            evaluations: 0,
        }
    }

    /// `g^(es + a)`; the exponent never reaches `p - 1` because
    /// `e(k-1) + (e-1) = p - 2`.
    #[inline]
    fn power_at(&self, s: u64, offset: u64) -> u64 {
        self.powers[(self.e * s + offset) as usize]
    }

    /// Number of `(s, t)` solving `1 + g^(es+a) = g^(et+b) (mod p)`,
    /// counted in `O(k)` by marking the `t`-side values and probing each
    /// `s`-side successor.
    fn count(&mut self, pair: IndexPair) -> u64 {
        self.evaluations += 1;
        self.stamp_gen += 1;
        for t in 0..self.k {
            let v = self.power_at(t, pair.b);
            self.stamps[v as usize] = self.stamp_gen;
        }
        let mut count = 0;
        for s in 0..self.k {
            // Both sides lie in [1, p-1], so 1 + v1 never needs reduction;
            // 1 + (p-1) = p simply probes the never-stamped sentinel slot.
            let successor = self.power_at(s, pair.a) + 1;
            if self.stamps[successor as usize] == self.stamp_gen {
                count += 1;
            }
        }
        count
    }

    /// The direct double loop over `(s, t)`; quadratic in `k` and kept as
    /// the oracle for the stamped path.
    fn count_direct(&mut self, pair: IndexPair) -> u64 {
        self.evaluations += 1;
        let mut count = 0;
        for s in 0..self.k {
            let v1 = self.power_at(s, pair.a);
            for t in 0..self.k {
                let v2 = self.power_at(t, pair.b);
                if (v1 + 1) % self.p == v2 {
                    count += 1;
                }
            }
        }
        count
    }
}

/// The cyclotomic number `(a, b)` for one generator: the number of `(s, t)`
/// with `1 + g^(es+a) = g^(et+b) (mod p)`, by the direct double loop over
/// `(s, t)`. This is the reference implementation the matrix builders are
/// tested against.
pub fn cyclotomic_number(pair: IndexPair, generator: &Generator, params: &CyclotomyParams) -> u64 {
    let pair = IndexPair::reduced(pair.a as i64, pair.b as i64, params.e());
    Eq1Evaluator::new(generator, params).count_direct(pair)
}

/// Counters reported by the matrix builders; `eq1_evaluations` is the
/// number of index pairs whose solution count was actually computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildStats {
    pub eq1_evaluations: usize,
}

/// The `e x e` matrix of cyclotomic numbers for one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycMatrix {
    params: CyclotomyParams,
    generator: Generator,
    values: Vec<u64>,
}

impl CycMatrix {
    pub fn params(&self) -> &CyclotomyParams {
        &self.params
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// Matrix order.
    pub fn e(&self) -> u64 {
        self.params.e()
    }

    pub fn get(&self, a: u64, b: u64) -> u64 {
        let e = self.params.e() as usize;
        self.values[a as usize * e + b as usize]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn row_sum(&self, a: u64) -> u64 {
        let e = self.params.e() as usize;
        self.values[a as usize * e..(a as usize + 1) * e]
            .iter()
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        let e = self.params.e() as usize;
        IntMatrix::new(e, e, self.values.iter().map(|&v| v.into()).collect())
    }
}

fn build_matrix(
    generator: &Generator,
    params: &CyclotomyParams,
    reduced: bool,
) -> (CycMatrix, BuildStats) {
    let e = params.e();
    let mut evaluator = Eq1Evaluator::new(generator, params);
    let mut values = vec![0u64; (e * e) as usize];
    if reduced {
        let table = equality_table(params);
        let mut counted: std::collections::HashMap<IndexPair, u64> =
            std::collections::HashMap::new();
        for a in 0..e {
            for b in 0..e {
                let rep = table.get(a, b);
                let value = match counted.get(&rep) {
                    Some(&v) => v,
                    None => {
                        let v = evaluator.count(rep);
                        counted.insert(rep, v);
                        v
                    }
                };
                values[(a * e + b) as usize] = value;
            }
        }
    } else {
        for a in 0..e {
            for b in 0..e {
                values[(a * e + b) as usize] = evaluator.count(IndexPair::new(a, b));
            }
        }
    }
    (
        CycMatrix {
            params: params.clone(),
            generator: generator.clone(),
            values,
        },
        BuildStats {
            eq1_evaluations: evaluator.evaluations,
        },
    )
}

/// Cyclotomic matrix via class reduction: solution counts are computed only
/// at the distinct canonical representatives and broadcast to every cell of
/// each class.
pub fn cyclotomic_matrix(generator: &Generator, params: &CyclotomyParams) -> CycMatrix {
    cyclotomic_matrix_with_stats(generator, params).0
}

/// As [`cyclotomic_matrix`], also reporting how many counts were evaluated
/// (exactly [`class_count`] of them).
pub fn cyclotomic_matrix_with_stats(
    generator: &Generator,
    params: &CyclotomyParams,
) -> (CycMatrix, BuildStats) {
    build_matrix(generator, params, true)
}

/// Cyclotomic matrix without class reduction: all `e^2` cells counted
/// independently. Entry-identical to [`cyclotomic_matrix`] by construction
/// of the equality classes; used as the cross-check path.
pub fn naive_cyclotomic_matrix(generator: &Generator, params: &CyclotomyParams) -> CycMatrix {
    naive_cyclotomic_matrix_with_stats(generator, params).0
}

/// As [`naive_cyclotomic_matrix`], also reporting the evaluation count
/// (exactly `e^2`).
pub fn naive_cyclotomic_matrix_with_stats(
    generator: &Generator,
    params: &CyclotomyParams,
) -> (CycMatrix, BuildStats) {
    build_matrix(generator, params, false)
}

/// All valid primes `p < limit` for a given `l`, i.e. `p = 2l^2 k + 1`.
/// Handy for parameter sweeps in tests and benchmarks.
pub fn valid_primes_below(l: u64, limit: u64) -> Vec<u64> {
    let e = 2 * l * l;
    (1..)
        .map(|k| e * k + 1)
        .take_while(|&p| p < limit)
        .filter(|&p| field::is_prime_u64(p))
        .collect()
}
