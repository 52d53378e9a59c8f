//! Arithmetic in `F_p` and its multiplicative group: modular exponentiation,
//! primitive-root enumeration, and discrete logarithms.
//!
//! Everything here targets desk-scale parameters. Primality and the
//! factorization of `p - 1` use deterministic trial division, and the
//! discrete log is baby-step/giant-step with an `O(sqrt(p))` table, so the
//! practical ceiling is far below cryptographic sizes.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A prime modulus `p` together with the factorization of `p - 1`.
///
/// The factorization is what makes the order test in [`is_generator`]
/// cheap: an element generates `F_p*` iff it is not a `q`-th power residue
/// for any prime `q` dividing `p - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeModulus {
    p: BigUint,
    /// Distinct prime factors of `p - 1` with multiplicities.
    p_minus_1_factors: Vec<(BigUint, u32)>,
}

impl PrimeModulus {
    /// Validates primality of `p` and factors `p - 1`.
    pub fn new(p: BigUint) -> Result<Self> {
        let p_u64 = p
            .to_u64()
            .ok_or_else(|| Error::Param(format!("modulus {p} exceeds the supported range")))?;
        if !is_prime_u64(p_u64) {
            return Err(Error::Param(format!("{p} is not prime")));
        }
        let factors = factorize_u64(p_u64 - 1)
            .into_iter()
            .map(|(q, m)| (BigUint::from(q), m))
            .collect();
        Ok(Self {
            p,
            p_minus_1_factors: factors,
        })
    }

    /// Convenience constructor from a machine integer.
    pub fn from_u64(p: u64) -> Result<Self> {
        Self::new(BigUint::from(p))
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    /// `p` as a machine integer (construction guarantees it fits).
    pub fn p_u64(&self) -> u64 {
        self.p.to_u64().expect("validated at construction")
    }

    pub fn p_minus_1(&self) -> BigUint {
        &self.p - 1u32
    }

    /// Distinct prime factors of `p - 1` with multiplicities.
    pub fn p_minus_1_factors(&self) -> &[(BigUint, u32)] {
        &self.p_minus_1_factors
    }

    /// Euler phi of `p - 1`, i.e. the number of generators of `F_p*`.
    pub fn generator_count(&self) -> BigUint {
        let mut phi = BigUint::one();
        for (q, m) in &self.p_minus_1_factors {
            phi *= q.pow(m - 1) * (q - 1u32);
        }
        phi
    }
}

/// An element of `F_p*` whose multiplicative order is exactly `p - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    value: BigUint,
    modulus: PrimeModulus,
}

impl Generator {
    /// Checks the order of `value` and wraps it.
    pub fn new(value: BigUint, modulus: &PrimeModulus) -> Result<Self> {
        if !is_generator(&value, modulus)? {
            return Err(Error::Param(format!(
                "{value} does not generate F_{}^*",
                modulus.p()
            )));
        }
        Ok(Self {
            value,
            modulus: modulus.clone(),
        })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn value_u64(&self) -> u64 {
        self.value.to_u64().expect("modulus fits u64")
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }
}

/// `base^exponent mod p`.
pub fn mod_pow(base: &BigUint, exponent: &BigUint, modulus: &PrimeModulus) -> BigUint {
    base.modpow(exponent, modulus.p())
}

/// Whether `candidate` has multiplicative order exactly `p - 1`.
///
/// Tests `candidate^((p-1)/q) != 1` for each distinct prime `q | p - 1`,
/// which is equivalent to the full power-table enumeration but runs in
/// `O(log p)` multiplications per factor.
pub fn is_generator(candidate: &BigUint, modulus: &PrimeModulus) -> Result<bool> {
    if candidate.is_zero() || candidate >= modulus.p() {
        return Err(Error::Param(format!(
            "candidate {candidate} outside [1, p-1] for p = {}",
            modulus.p()
        )));
    }
    let p_minus_1 = modulus.p_minus_1();
    let one = BigUint::one();
    for (q, _) in modulus.p_minus_1_factors() {
        let exp = &p_minus_1 / q;
        if candidate.modpow(&exp, modulus.p()) == one {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All generators of `F_p*` in ascending order.
///
/// The result always has exactly `phi(p - 1)` elements.
pub fn find_generators(modulus: &PrimeModulus) -> Vec<Generator> {
    let p = modulus.p_u64();
    let mut out = Vec::new();
    for candidate in 1..p {
        let value = BigUint::from(candidate);
        if is_generator(&value, modulus).expect("candidate in range") {
            out.push(Generator {
                value,
                modulus: modulus.clone(),
            });
        }
    }
    out
}

/// The unique `r` in `[1, p-1]` with `base^r = target (mod p)`, via
/// baby-step/giant-step.
///
/// Because `base` generates `F_p*` the logarithm always exists for
/// `target` in `[1, p-1]`.
pub fn discrete_log(base: &Generator, target: &BigUint) -> Result<BigUint> {
    let modulus = base.modulus();
    if target.is_zero() || target >= modulus.p() {
        return Err(Error::Param(format!(
            "discrete log target {target} outside [1, p-1] for p = {}",
            modulus.p()
        )));
    }
    let p = modulus.p();
    let p_minus_1 = modulus.p_minus_1();
    let m = p_minus_1.sqrt().to_u64().expect("p fits u64") + 1;

    // Baby steps: base^j for 0 <= j < m.
    let mut table: HashMap<BigUint, u64> = HashMap::with_capacity(m as usize);
    let mut e = BigUint::one();
    for j in 0..m {
        table.entry(e.clone()).or_insert(j);
        e = e * base.value() % p;
    }

    // Giant steps: target * base^(-m i), using base^(p-1-m) = base^(-m).
    let factor = base.value().modpow(&(&p_minus_1 - m), p);
    let mut gamma = target.clone();
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma) {
            let r = BigUint::from(i) * m + j;
            // Exponent 0 and p-1 name the same element; report the latter.
            return Ok(if r.is_zero() { p_minus_1 } else { r });
        }
        gamma = gamma * &factor % p;
    }
    unreachable!("generator logarithm always exists for target in [1, p-1]")
}

/// Deterministic trial-division primality test.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization by trial division: `(factor, multiplicity)` pairs
/// in ascending factor order.
fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut push = |q: u64, m: u32| {
        if m > 0 {
            factors.push((q, m));
        }
    };
    let mut m = 0;
    while n.is_multiple_of(2) {
        n /= 2;
        m += 1;
    }
    push(2, m);
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        let mut m = 0;
        while n.is_multiple_of(d) {
            n /= d;
            m += 1;
        }
        push(d, m);
        d += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    factors
}
