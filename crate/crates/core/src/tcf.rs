//! Trapdoor claw-free function families.
//!
//! A family is a keyed 2-to-1 function `f_k` whose colliding pairs (claws)
//! are recoverable with a trapdoor. Two instantiations:
//!
//! * `rabin` — squaring modulo a Blum integer N = p*q, with the domain
//!   restricted to integers in [1, N/2) coprime to N so that `f` is exactly
//!   2-to-1. The trapdoor is the factorization; inversion takes CRT square
//!   roots. Parameters are desk-scale (N up to 64 bits): claw-freeness is a
//!   modeled assumption here, not an achieved one.
//! * `toy` — an explicit table pairing x with x XOR s for a secret shift s
//!   whose top bit is set. Every module invariant can be checked
//!   exhaustively in milliseconds.
//!
//! The claw elements are ordered by integer value: the smaller preimage of
//! every pair has type 0. Any consistent ordering works; this one needs no
//! quadratic-residuosity machinery.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Desk-scale cap: each Rabin prime factor has at most this many bits,
/// keeping N within 64 bits so that public type decisions stay feasible.
pub const MAX_RABIN_LAMBDA: u32 = 32;
/// Toy tables are materialized, so cap the exponent.
pub const MAX_TOY_BITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TcfFamily {
    Rabin,
    Toy,
}

impl std::str::FromStr for TcfFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rabin" => Ok(TcfFamily::Rabin),
            "toy" => Ok(TcfFamily::Toy),
            other => Err(Error::Validation(format!("unknown TCF family {other:?}"))),
        }
    }
}

mod biguint_dec {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Public key of a claw-free family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TcfKey {
    Rabin {
        n_bits: usize,
        #[serde(with = "biguint_dec")]
        modulus: BigUint,
    },
    Toy {
        n_bits: usize,
        table: Vec<u64>,
    },
}

/// Trapdoor matching a [`TcfKey`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TcfTrapdoor {
    Rabin {
        #[serde(with = "biguint_dec")]
        p: BigUint,
        #[serde(with = "biguint_dec")]
        q: BigUint,
    },
    Toy {
        /// Entry y holds the claw (x0, x1) of output y.
        pairs: Vec<(u64, u64)>,
    },
}

/// A colliding pair: x0 != x1, f(x0) = f(x1) = y, type(x0) = 0, type(x1) = 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claw {
    pub x0: Bits,
    pub x1: Bits,
    pub y: Bits,
}

impl Claw {
    pub fn xor(&self) -> Bits {
        self.x0.xor(&self.x1)
    }
}

impl TcfKey {
    pub fn family(&self) -> TcfFamily {
        match self {
            TcfKey::Rabin { .. } => TcfFamily::Rabin,
            TcfKey::Toy { .. } => TcfFamily::Toy,
        }
    }

    /// Width of domain (and range) elements in bits.
    pub fn domain_bits(&self) -> usize {
        match self {
            TcfKey::Rabin { n_bits, .. } | TcfKey::Toy { n_bits, .. } => *n_bits,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TcfKey::Rabin { n_bits, modulus } => {
                if modulus.bits() as usize != *n_bits {
                    return Err(Error::Validation(format!(
                        "modulus has {} bits, key declares {n_bits}",
                        modulus.bits()
                    )));
                }
                Ok(())
            }
            TcfKey::Toy { n_bits, table } => {
                if *n_bits < 2 || *n_bits > MAX_TOY_BITS {
                    return Err(Error::Validation(format!("toy n_bits {n_bits} out of range")));
                }
                if table.len() != 1 << n_bits {
                    return Err(Error::Validation("toy table has wrong length".into()));
                }
                let mut count = vec![0u32; 1 << n_bits];
                for &y in table {
                    let slot = count
                        .get_mut(y as usize)
                        .ok_or_else(|| Error::Validation("toy table entry out of range".into()))?;
                    *slot += 1;
                }
                let outputs = count.iter().filter(|&&c| c > 0).count();
                if outputs != 1 << (n_bits - 1) || count.iter().any(|&c| c != 0 && c != 2) {
                    return Err(Error::Validation(
                        "toy table is not 2-to-1 onto half the domain".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Generates a key/trapdoor pair. For `rabin`, `lambda` is the bit length of
/// each prime factor; for `toy` it is the domain width n.
pub fn gen<R: Rng + ?Sized>(lambda: u32, family: TcfFamily, rng: &mut R) -> Result<(TcfKey, TcfTrapdoor)> {
    if lambda < 2 {
        return Err(Error::Validation(format!("lambda {lambda} too small, need >= 2")));
    }
    match family {
        TcfFamily::Rabin => gen_rabin(lambda, rng),
        TcfFamily::Toy => gen_toy(lambda as usize, rng),
    }
}

fn gen_rabin<R: Rng + ?Sized>(lambda: u32, rng: &mut R) -> Result<(TcfKey, TcfTrapdoor)> {
    if lambda > MAX_RABIN_LAMBDA {
        return Err(Error::Validation(format!(
            "lambda {lambda} exceeds the desk-scale cap {MAX_RABIN_LAMBDA}"
        )));
    }
    // Primes congruent to 3 mod 4, drawn from [2^(lambda-1), 2^(lambda+1)).
    let lo = 1u64 << (lambda - 1);
    let hi = 1u64 << (lambda + 1);
    let draw = |rng: &mut R, exclude: u64| -> Result<u64> {
        for _ in 0..10_000 {
            let c = rng.random_range(lo..hi);
            if c % 4 == 3 && c != exclude && is_prime_u64(c) {
                return Ok(c);
            }
        }
        Err(Error::Generation(format!(
            "no Blum prime found in [{lo}, {hi}) after 10000 draws"
        )))
    };
    let p = draw(rng, 0)?;
    let q = draw(rng, p)?;
    let (p, q) = (p.min(q), p.max(q));
    let modulus = BigUint::from(p) * BigUint::from(q);
    let n_bits = modulus.bits() as usize;
    Ok((
        TcfKey::Rabin { n_bits, modulus },
        TcfTrapdoor::Rabin {
            p: BigUint::from(p),
            q: BigUint::from(q),
        },
    ))
}

fn gen_toy<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(TcfKey, TcfTrapdoor)> {
    if n > MAX_TOY_BITS {
        return Err(Error::Validation(format!("toy n {n} exceeds cap {MAX_TOY_BITS}")));
    }
    // Shift with the top bit set, so the type of x is its top bit.
    let s = rng.random_range((1u64 << (n - 1))..(1u64 << n));
    let size = 1usize << n;
    let table: Vec<u64> = (0..size as u64).map(|x| x.min(x ^ s)).collect();
    let pairs: Vec<(u64, u64)> = (0..(size / 2) as u64).map(|y| (y, y ^ s)).collect();
    Ok((TcfKey::Toy { n_bits: n, table }, TcfTrapdoor::Toy { pairs }))
}

/// Evaluates f_k(x).
pub fn eval(key: &TcfKey, x: &Bits) -> Result<Bits> {
    match key {
        TcfKey::Rabin { n_bits, modulus } => {
            check_rabin_domain(modulus, *n_bits, x)?;
            let v = x.to_biguint();
            Bits::from_biguint(&(&v * &v % modulus), *n_bits)
        }
        TcfKey::Toy { n_bits, table } => {
            if x.n_bits() != *n_bits {
                return Err(Error::Domain(format!(
                    "input width {} does not match domain width {n_bits}",
                    x.n_bits()
                )));
            }
            let idx = x.to_u64() as usize;
            Bits::from_u64(table[idx], *n_bits)
        }
    }
}

fn check_rabin_domain(modulus: &BigUint, n_bits: usize, x: &Bits) -> Result<()> {
    if x.n_bits() != n_bits {
        return Err(Error::Domain(format!(
            "input width {} does not match domain width {n_bits}",
            x.n_bits()
        )));
    }
    let v = x.to_biguint();
    if v.is_zero() || &v * 2u32 >= *modulus {
        return Err(Error::Domain(format!(
            "{v} lies outside [1, N/2)"
        )));
    }
    if v.gcd(modulus) != BigUint::one() {
        return Err(Error::Domain(format!("{v} shares a factor with the modulus")));
    }
    Ok(())
}

/// Recovers the claw of y with the trapdoor.
pub fn invert(trapdoor: &TcfTrapdoor, key: &TcfKey, y: &Bits) -> Result<Claw> {
    match (trapdoor, key) {
        (TcfTrapdoor::Rabin { p, q }, TcfKey::Rabin { n_bits, modulus }) => {
            if y.n_bits() != *n_bits {
                return Err(Error::Domain("range element has wrong width".into()));
            }
            let yv = y.to_biguint();
            if yv >= *modulus {
                return Err(Error::NoPreimage(format!("{yv} is not a residue below N")));
            }
            let rp = sqrt_mod_blum(&yv, p)
                .ok_or_else(|| Error::NoPreimage(format!("{yv} has no square root mod p")))?;
            let rq = sqrt_mod_blum(&yv, q)
                .ok_or_else(|| Error::NoPreimage(format!("{yv} has no square root mod q")))?;
            let mut roots: Vec<BigUint> = Vec::new();
            for rp in [rp.clone(), p - &rp] {
                for rq in [rq.clone(), q - &rq] {
                    let r = crt(&rp, p, &rq, q);
                    let in_domain = !r.is_zero()
                        && &r * 2u32 < *modulus
                        && r.gcd(modulus) == BigUint::one();
                    if in_domain && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
            if roots.len() != 2 {
                return Err(Error::NoPreimage(format!(
                    "{yv} has {} domain square roots, expected 2",
                    roots.len()
                )));
            }
            roots.sort();
            Ok(Claw {
                x0: Bits::from_biguint(&roots[0], *n_bits)?,
                x1: Bits::from_biguint(&roots[1], *n_bits)?,
                y: y.clone(),
            })
        }
        (TcfTrapdoor::Toy { pairs }, TcfKey::Toy { n_bits, .. }) => {
            if y.n_bits() != *n_bits {
                return Err(Error::Domain("range element has wrong width".into()));
            }
            let idx = y.to_u64() as usize;
            let &(x0, x1) = pairs
                .get(idx)
                .ok_or_else(|| Error::NoPreimage(format!("{idx} is not a toy output")))?;
            Ok(Claw {
                x0: Bits::from_u64(x0.min(x1), *n_bits)?,
                x1: Bits::from_u64(x0.max(x1), *n_bits)?,
                y: y.clone(),
            })
        }
        _ => Err(Error::Validation("trapdoor does not match key family".into())),
    }
}

/// Publicly computable type bit: 0 for the smaller element of a claw.
///
/// For `toy` this is the top bit of x. For `rabin` the claw partner is
/// recovered by factoring the (desk-scale) modulus; real deployments would
/// need a family with an honestly public decision instead.
pub fn preimage_type(key: &TcfKey, x: &Bits) -> Result<u8> {
    match key {
        TcfKey::Toy { n_bits, .. } => {
            if x.n_bits() != *n_bits {
                return Err(Error::Domain("input width mismatch".into()));
            }
            Ok(x.bit(*n_bits - 1))
        }
        TcfKey::Rabin { .. } => {
            let claw = claw_of(key, x)?;
            Ok(if *x == claw.x0 { 0 } else { 1 })
        }
    }
}

/// Recovers the full claw containing x from public data only. Feasible at
/// desk scale (toy: table scan; rabin: factor the 64-bit modulus); used to
/// simulate the honest prover's claw superposition classically.
pub fn claw_of(key: &TcfKey, x: &Bits) -> Result<Claw> {
    match key {
        TcfKey::Toy { n_bits, table } => {
            let y = eval(key, x)?;
            let target = y.to_u64();
            let xi = x.to_u64();
            let partner = table
                .iter()
                .enumerate()
                .find(|&(i, &v)| v == target && i as u64 != xi)
                .map(|(i, _)| i as u64)
                .ok_or_else(|| Error::NoPreimage("no claw partner in toy table".into()))?;
            Ok(Claw {
                x0: Bits::from_u64(xi.min(partner), *n_bits)?,
                x1: Bits::from_u64(xi.max(partner), *n_bits)?,
                y,
            })
        }
        TcfKey::Rabin { modulus, .. } => {
            let y = eval(key, x)?;
            let (p, q) = factor_semiprime(modulus)?;
            let trapdoor = TcfTrapdoor::Rabin { p, q };
            invert(&trapdoor, key, &y)
        }
    }
}

/// Checks the claw structure against the key.
pub fn validate_claw(key: &TcfKey, claw: &Claw) -> Result<()> {
    if claw.x0 == claw.x1 {
        return Err(Error::Validation("claw elements coincide".into()));
    }
    let y0 = eval(key, &claw.x0)?;
    let y1 = eval(key, &claw.x1)?;
    if y0 != claw.y || y1 != claw.y {
        return Err(Error::Validation("claw elements do not collide on y".into()));
    }
    if preimage_type(key, &claw.x0)? != 0 || preimage_type(key, &claw.x1)? != 1 {
        return Err(Error::Validation("claw elements are not type-ordered".into()));
    }
    Ok(())
}

// --- modular arithmetic -----------------------------------------------------

/// Square root modulo a prime p = 3 (mod 4), if one exists.
fn sqrt_mod_blum(y: &BigUint, p: &BigUint) -> Option<BigUint> {
    let y = y % p;
    if y.is_zero() {
        // 0 has the root 0, but it never yields coprime domain elements.
        return None;
    }
    let exp = (p + 1u32) >> 2;
    let r = y.modpow(&exp, p);
    if (&r * &r) % p == y {
        Some(r)
    } else {
        None
    }
}

/// Combines residues mod two coprime moduli.
fn crt(rp: &BigUint, p: &BigUint, rq: &BigUint, q: &BigUint) -> BigUint {
    // x = rp + p * ((rq - rp) * p^-1 mod q)
    let p_inv = mod_inverse(p, q);
    let diff = ((rq + q) - (rp % q)) % q;
    let t = (diff * p_inv) % q;
    rp + p * t
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    // m is prime here.
    a.modpow(&(m - 2u32), m)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factors a desk-scale semiprime via Pollard's rho.
fn factor_semiprime(n: &BigUint) -> Result<(BigUint, BigUint)> {
    let n64 = u64::try_from(n).map_err(|_| {
        Error::Validation("modulus exceeds the 64-bit desk-scale cap".into())
    })?;
    let f = pollard_rho(n64)
        .ok_or_else(|| Error::Validation(format!("failed to factor {n64}")))?;
    let (a, b) = (f.min(n64 / f), f.max(n64 / f));
    if a * b != n64 || a == 1 {
        return Err(Error::Validation(format!("{n64} is not a semiprime")));
    }
    Ok((BigUint::from(a), BigUint::from(b)))
}

fn pollard_rho(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1..64u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n && d != 0 {
            return Some(d);
        }
    }
    None
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::experiment_rng;

    fn bits(v: u64, n: usize) -> Bits {
        Bits::from_u64(v, n).unwrap()
    }

    /// Oracle: all square roots of y mod n by exhaustive scan.
    fn brute_roots(y: u64, n: u64) -> Vec<u64> {
        (1..n).filter(|&x| x * x % n == y).collect()
    }

    #[test]
    fn lambda_two_always_yields_n_21() {
        // 3 and 7 are the only primes = 3 (mod 4) in [2, 8), so every seed
        // must produce N = 21 with trapdoor (3, 7).
        assert_eq!(3, 3);
        assert_eq!(7 % 4, 3);
        for seed in 0..5 {
            let mut rng = experiment_rng(seed, 0);
            let (key, td) = gen(2, TcfFamily::Rabin, &mut rng).unwrap();
            match (&key, &td) {
                (TcfKey::Rabin { modulus, n_bits }, TcfTrapdoor::Rabin { p, q }) => {
                    assert_eq!(modulus, &BigUint::from(21u32));
                    assert_eq!(*n_bits, 5);
                    assert_eq!(p, &BigUint::from(3u32));
                    assert_eq!(q, &BigUint::from(7u32));
                }
                _ => panic!("wrong family"),
            }
        }
    }

    #[test]
    fn gen_is_reproducible() {
        for family in [TcfFamily::Rabin, TcfFamily::Toy] {
            let a = gen(6, family, &mut experiment_rng(99, 0)).unwrap();
            let b = gen(6, family, &mut experiment_rng(99, 0)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn gen_rejects_bad_lambda() {
        let mut rng = experiment_rng(0, 0);
        assert!(matches!(
            gen(1, TcfFamily::Rabin, &mut rng),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            gen(MAX_RABIN_LAMBDA + 1, TcfFamily::Rabin, &mut rng),
            Err(Error::Validation(_))
        ));
    }

    fn n21() -> (TcfKey, TcfTrapdoor) {
        gen(2, TcfFamily::Rabin, &mut experiment_rng(1, 0)).unwrap()
    }

    #[test]
    fn rabin_eval_matches_modular_arithmetic() {
        let (key, _) = n21();
        assert_eq!(eval(&key, &bits(5, 5)).unwrap(), bits(25 % 21, 5));
        assert_eq!(eval(&key, &bits(2, 5)).unwrap(), bits(4, 5));
    }

    #[test]
    fn rabin_domain_checks() {
        let (key, _) = n21();
        assert!(matches!(eval(&key, &bits(0, 5)), Err(Error::Domain(_))));
        // 11 >= 21/2
        assert!(matches!(eval(&key, &bits(11, 5)), Err(Error::Domain(_))));
        // gcd(7, 21) = 7
        assert!(matches!(eval(&key, &bits(7, 5)), Err(Error::Domain(_))));
        // width mismatch
        assert!(matches!(eval(&key, &bits(2, 4)), Err(Error::Domain(_))));
    }

    #[test]
    fn rabin_invert_matches_brute_force() {
        let (key, td) = n21();
        // Oracle: square roots of 4 mod 21 are {2, 5, 16, 19}; below N/2: {2, 5}.
        assert_eq!(brute_roots(4, 21), vec![2, 5, 16, 19]);
        let claw = invert(&td, &key, &bits(4, 5)).unwrap();
        assert_eq!(claw.x0, bits(2, 5));
        assert_eq!(claw.x1, bits(5, 5));
        validate_claw(&key, &claw).unwrap();
    }

    #[test]
    fn rabin_nonresidue_has_no_preimage() {
        let (key, td) = n21();
        assert!(brute_roots(5, 21).is_empty());
        assert!(matches!(
            invert(&td, &key, &bits(5, 5)),
            Err(Error::NoPreimage(_))
        ));
    }

    #[test]
    fn rabin_type_follows_ordering_rule() {
        let (key, _) = n21();
        assert_eq!(preimage_type(&key, &bits(2, 5)).unwrap(), 0);
        assert_eq!(preimage_type(&key, &bits(5, 5)).unwrap(), 1);
    }

    #[test]
    fn rabin_invert_round_trips_at_larger_sizes() {
        let mut rng = experiment_rng(17, 0);
        let (key, td) = gen(8, TcfFamily::Rabin, &mut rng).unwrap();
        let n = key.domain_bits();
        let modulus = match &key {
            TcfKey::Rabin { modulus, .. } => modulus.clone(),
            _ => unreachable!(),
        };
        let mut checked = 0;
        let mut x = 1u64;
        while checked < 40 {
            let cand = bits(x, n);
            x += 1;
            if check_rabin_domain(&modulus, n, &cand).is_err() {
                continue;
            }
            let y = eval(&key, &cand).unwrap();
            let claw = invert(&td, &key, &y).unwrap();
            assert!(claw.x0 == cand || claw.x1 == cand);
            validate_claw(&key, &claw).unwrap();
            checked += 1;
        }
    }

    #[test]
    fn toy_table_is_two_to_one() {
        let mut rng = experiment_rng(3, 0);
        let (key, _) = gen(3, TcfFamily::Toy, &mut rng).unwrap();
        key.validate().unwrap();
        match &key {
            TcfKey::Toy { table, .. } => {
                let mut counts = std::collections::HashMap::new();
                for &y in table {
                    *counts.entry(y).or_insert(0u32) += 1;
                }
                assert_eq!(counts.len(), 4);
                assert!(counts.values().all(|&c| c == 2));
            }
            _ => panic!("wrong family"),
        }
    }

    #[test]
    fn toy_claws_form_a_perfect_matching() {
        let mut rng = experiment_rng(4, 0);
        let (key, td) = gen(4, TcfFamily::Toy, &mut rng).unwrap();
        let n = key.domain_bits();
        let mut seen = vec![0u32; 1 << n];
        for yv in 0..(1u64 << (n - 1)) {
            let claw = invert(&td, &key, &bits(yv, n)).unwrap();
            validate_claw(&key, &claw).unwrap();
            seen[claw.x0.to_u64() as usize] += 1;
            seen[claw.x1.to_u64() as usize] += 1;
        }
        // Every domain element belongs to exactly one claw.
        assert!(seen.iter().all(|&c| c == 1));
        // And invert agrees with eval on every input.
        for xv in 0..(1u64 << n) {
            let x = bits(xv, n);
            let y = eval(&key, &x).unwrap();
            let claw = invert(&td, &key, &y).unwrap();
            assert!(claw.x0 == x || claw.x1 == x);
            assert_eq!(preimage_type(&key, &claw.x0).unwrap(), 0);
            assert_eq!(preimage_type(&key, &claw.x1).unwrap(), 1);
        }
    }

    #[test]
    fn toy_claw_of_agrees_with_trapdoor() {
        let mut rng = experiment_rng(5, 0);
        let (key, td) = gen(4, TcfFamily::Toy, &mut rng).unwrap();
        let n = key.domain_bits();
        for xv in 0..(1u64 << n) {
            let x = bits(xv, n);
            let via_scan = claw_of(&key, &x).unwrap();
            let via_td = invert(&td, &key, &via_scan.y).unwrap();
            assert_eq!(via_scan, via_td);
        }
    }

    #[test]
    fn rabin_claw_of_matches_trapdoor_inversion() {
        let mut rng = experiment_rng(6, 0);
        let (key, td) = gen(10, TcfFamily::Rabin, &mut rng).unwrap();
        let n = key.domain_bits();
        let mut found = 0;
        let mut x = 2u64;
        while found < 10 {
            let cand = bits(x, n);
            x += 1;
            if eval(&key, &cand).is_err() {
                continue;
            }
            let claw = claw_of(&key, &cand).unwrap();
            let y = eval(&key, &cand).unwrap();
            assert_eq!(claw, invert(&td, &key, &y).unwrap());
            found += 1;
        }
    }

    #[test]
    fn key_serialization_round_trips() {
        let mut rng = experiment_rng(7, 0);
        let (key, td) = gen(8, TcfFamily::Rabin, &mut rng).unwrap();
        let kj = serde_json::to_string(&key).unwrap();
        assert!(kj.contains("\"family\":\"rabin\""));
        assert!(kj.contains("\"modulus\""));
        let back: TcfKey = serde_json::from_str(&kj).unwrap();
        assert_eq!(back, key);
        let tj = serde_json::to_value(&td).unwrap();
        assert!(tj.get("p").unwrap().is_string());
        let back: TcfTrapdoor = serde_json::from_value(tj).unwrap();
        assert_eq!(back, td);

        let (key, td) = gen(3, TcfFamily::Toy, &mut rng).unwrap();
        let kj = serde_json::to_value(&key).unwrap();
        assert!(kj.get("table").unwrap().is_array());
        let back: TcfKey = serde_json::from_value(kj).unwrap();
        assert_eq!(back, key);
        let back: TcfTrapdoor =
            serde_json::from_value(serde_json::to_value(&td).unwrap()).unwrap();
        assert_eq!(back, td);
    }
}
