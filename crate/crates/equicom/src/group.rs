//! Prime-order group arithmetic.
//!
//! The ambient algebra is a Schnorr subgroup: the order-`q` subgroup of the
//! multiplicative integers modulo a safe prime `p = 2q + 1`. A
//! [`GroupElement`] is an integer in `[1, p-1]` with `v^q ≡ 1 (mod p)`; a
//! [`Scalar`] is an exponent in `Z_q`. Both carry a shared handle to their
//! [`GroupParams`], so values from different groups cannot be mixed
//! silently — mixing them is a programming error and panics.
//!
//! Encodings are fixed-width big-endian: elements are padded to the byte
//! length of `p`, scalars to the byte length of `q`. Decoding validates
//! range and subgroup membership; nothing off the wire is trusted.
//!
//! All arithmetic is variable-time. Constant-time execution is a non-goal
//! for this crate (see the crate docs).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;
use thiserror::Error;

use crate::seeding;

/// Rounds of Miller-Rabin used for every primality check. A composite
/// survives one round with probability at most 1/4, so 32 rounds keep the
/// error below 2^-64.
const MILLER_RABIN_ROUNDS: u32 = 32;

/// Candidate budget for the safe-prime search in [`generate_params`].
const MAX_SAFE_PRIME_ATTEMPTS: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("subgroup order must have at least 4 bits, got {0}")]
    TooFewBits(u32),
    #[error("no safe prime found after {attempts} candidate draws")]
    SearchExhausted { attempts: u64 },
    #[error("modulus failed the primality test")]
    CompositeModulus,
    #[error("subgroup order failed the primality test")]
    CompositeOrder,
    #[error("subgroup order does not divide p - 1")]
    BadSubgroupOrder,
    #[error("generator is not a non-trivial element of the order-q subgroup")]
    BadGenerator,
    #[error("cannot invert the zero scalar")]
    ZeroInverse,
    #[error("encoded value has wrong length: expected {expected} bytes, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("decoded value is out of range")]
    OutOfRange,
    #[error("decoded element is not in the order-q subgroup")]
    NotInSubgroup,
}

/// Description of a Schnorr group: modulus `p`, subgroup order `q`, and a
/// generator `g` of the order-`q` subgroup.
///
/// Construction always validates the invariants (`p`, `q` probably prime,
/// `q | p - 1`, `g^q = 1`, `g ≠ 1`), so holding a `GroupParams` is holding
/// a checked group. Instances are immutable and shared via [`Arc`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupParams {
    p: BigUint,
    q: BigUint,
    g: BigUint,
}

/// An exponent in `Z_q`, tagged with the group it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    value: BigUint,
    params: Arc<GroupParams>,
}

/// An element of the order-`q` subgroup, tagged with its group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    value: BigUint,
    params: Arc<GroupParams>,
}

impl GroupParams {
    /// Builds and validates group parameters.
    pub fn new(p: BigUint, q: BigUint, g: BigUint) -> Result<Arc<Self>, GroupError> {
        if !is_probable_prime(&p, MILLER_RABIN_ROUNDS) {
            return Err(GroupError::CompositeModulus);
        }
        if !is_probable_prime(&q, MILLER_RABIN_ROUNDS) {
            return Err(GroupError::CompositeOrder);
        }
        if !((&p - 1u32) % &q).is_zero() {
            return Err(GroupError::BadSubgroupOrder);
        }
        if g < BigUint::from(2u32) || g > &p - 1u32 {
            return Err(GroupError::BadGenerator);
        }
        if !g.modpow(&q, &p).is_one() {
            return Err(GroupError::BadGenerator);
        }
        Ok(Arc::new(GroupParams { p, q, g }))
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn g(&self) -> &BigUint {
        &self.g
    }

    /// Byte width of an encoded element (the byte length of `p`).
    pub fn element_width(&self) -> usize {
        byte_width(&self.p)
    }

    /// Byte width of an encoded scalar (the byte length of `q`).
    pub fn scalar_width(&self) -> usize {
        byte_width(&self.q)
    }

    pub fn generator(self: &Arc<Self>) -> GroupElement {
        GroupElement {
            value: self.g.clone(),
            params: self.clone(),
        }
    }

    /// The multiplicative identity, `1`.
    pub fn identity(self: &Arc<Self>) -> GroupElement {
        GroupElement {
            value: BigUint::one(),
            params: self.clone(),
        }
    }

    /// The scalar `v mod q`.
    pub fn scalar_from_u64(self: &Arc<Self>, v: u64) -> Scalar {
        self.scalar_from_biguint(BigUint::from(v))
    }

    /// The scalar `v mod q`.
    pub fn scalar_from_biguint(self: &Arc<Self>, v: BigUint) -> Scalar {
        Scalar {
            value: v % &self.q,
            params: self.clone(),
        }
    }

    /// Wraps `v` as a group element, checking range and subgroup membership.
    pub fn element_from_biguint(self: &Arc<Self>, v: BigUint) -> Result<GroupElement, GroupError> {
        if v.is_zero() || v >= self.p {
            return Err(GroupError::OutOfRange);
        }
        if !v.modpow(&self.q, &self.p).is_one() {
            return Err(GroupError::NotInSubgroup);
        }
        Ok(GroupElement {
            value: v,
            params: self.clone(),
        })
    }

    /// Uniform scalar in `Z_q`, by rejection sampling (no modulo bias).
    pub fn random_scalar<R: RngCore + ?Sized>(self: &Arc<Self>, rng: &mut R) -> Scalar {
        Scalar {
            value: sample_below(rng, &self.q),
            params: self.clone(),
        }
    }

    /// Uniform scalar in `Z_q \ {0}`.
    pub fn random_nonzero_scalar<R: RngCore + ?Sized>(self: &Arc<Self>, rng: &mut R) -> Scalar {
        loop {
            let s = self.random_scalar(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Decodes a fixed-width element encoding produced by
    /// [`GroupElement::to_bytes`].
    pub fn decode_element(self: &Arc<Self>, bytes: &[u8]) -> Result<GroupElement, GroupError> {
        let expected = self.element_width();
        if bytes.len() != expected {
            return Err(GroupError::WrongLength {
                expected,
                got: bytes.len(),
            });
        }
        self.element_from_biguint(BigUint::from_bytes_be(bytes))
    }

    /// Decodes a fixed-width scalar encoding produced by
    /// [`Scalar::to_bytes`].
    pub fn decode_scalar(self: &Arc<Self>, bytes: &[u8]) -> Result<Scalar, GroupError> {
        let expected = self.scalar_width();
        if bytes.len() != expected {
            return Err(GroupError::WrongLength {
                expected,
                got: bytes.len(),
            });
        }
        let value = BigUint::from_bytes_be(bytes);
        if value >= self.q {
            return Err(GroupError::OutOfRange);
        }
        Ok(Scalar {
            value,
            params: self.clone(),
        })
    }

    /// Serializes the parameters: a 2-byte big-endian header holding the
    /// byte length `L` of `p`, followed by `p`, `q`, `g`, each padded to
    /// `L` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let width = self.element_width();
        let mut out = Vec::with_capacity(2 + 3 * width);
        out.extend_from_slice(&(width as u16).to_be_bytes());
        out.extend_from_slice(&to_fixed_width(&self.p, width));
        out.extend_from_slice(&to_fixed_width(&self.q, width));
        out.extend_from_slice(&to_fixed_width(&self.g, width));
        out
    }

    /// Parses and fully re-validates a [`GroupParams::to_bytes`] encoding.
    pub fn from_bytes(bytes: &[u8]) -> Result<Arc<Self>, GroupError> {
        if bytes.len() < 2 {
            return Err(GroupError::WrongLength {
                expected: 2,
                got: bytes.len(),
            });
        }
        let width = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
        let expected = 2 + 3 * width;
        if width == 0 || bytes.len() != expected {
            return Err(GroupError::WrongLength {
                expected,
                got: bytes.len(),
            });
        }
        let p = BigUint::from_bytes_be(&bytes[2..2 + width]);
        let q = BigUint::from_bytes_be(&bytes[2 + width..2 + 2 * width]);
        let g = BigUint::from_bytes_be(&bytes[2 + 2 * width..]);
        if byte_width(&p) != width {
            // The header must be the minimal width of p, or element
            // encodings would disagree between the two sides.
            return Err(GroupError::OutOfRange);
        }
        GroupParams::new(p, q, g)
    }
}

impl Scalar {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn params(&self) -> &Arc<GroupParams> {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `(self + other) mod q`.
    pub fn add(&self, other: &Scalar) -> Scalar {
        assert_same_group(&self.params, &other.params);
        Scalar {
            value: (&self.value + &other.value) % &self.params.q,
            params: self.params.clone(),
        }
    }

    /// `(self - other) mod q`.
    pub fn sub(&self, other: &Scalar) -> Scalar {
        assert_same_group(&self.params, &other.params);
        Scalar {
            value: (&self.value + &self.params.q - &other.value) % &self.params.q,
            params: self.params.clone(),
        }
    }

    /// `(self * other) mod q`.
    pub fn mul(&self, other: &Scalar) -> Scalar {
        assert_same_group(&self.params, &other.params);
        Scalar {
            value: (&self.value * &other.value) % &self.params.q,
            params: self.params.clone(),
        }
    }

    /// Multiplicative inverse in `Z_q`. Inverting zero is an error, never a
    /// panic.
    pub fn inv(&self) -> Result<Scalar, GroupError> {
        if self.value.is_zero() {
            return Err(GroupError::ZeroInverse);
        }
        // q is prime, so a^(q-2) is the inverse.
        let exp = &self.params.q - 2u32;
        Ok(Scalar {
            value: self.value.modpow(&exp, &self.params.q),
            params: self.params.clone(),
        })
    }

    /// Fixed-width big-endian encoding, padded to the byte length of `q`.
    pub fn to_bytes(&self) -> Vec<u8> {
        to_fixed_width(&self.value, self.params.scalar_width())
    }
}

impl GroupElement {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn params(&self) -> &Arc<GroupParams> {
        &self.params
    }

    pub fn is_identity(&self) -> bool {
        self.value.is_one()
    }

    /// Group multiplication `(self * other) mod p`.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_same_group(&self.params, &other.params);
        GroupElement {
            value: (&self.value * &other.value) % &self.params.p,
            params: self.params.clone(),
        }
    }

    /// Exponentiation `self^e mod p`.
    pub fn pow(&self, e: &Scalar) -> GroupElement {
        assert_same_group(&self.params, &e.params);
        GroupElement {
            value: self.value.modpow(&e.value, &self.params.p),
            params: self.params.clone(),
        }
    }

    /// Fixed-width big-endian encoding, padded to the byte length of `p`.
    pub fn to_bytes(&self) -> Vec<u8> {
        to_fixed_width(&self.value, self.params.element_width())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn assert_same_group(a: &Arc<GroupParams>, b: &Arc<GroupParams>) {
    assert_eq!(a, b, "values from different groups cannot be combined");
}

/// Deterministically searches for a Schnorr group with a safe-prime modulus
/// `p = 2q + 1` where `q` has exactly `q_bits` bits.
///
/// The candidate stream is a seeded ChaCha20 generator, so a fixed
/// `(q_bits, seed)` pair always yields the same parameters. The generator
/// is the square of a random unit, i.e. a uniform non-identity quadratic
/// residue.
pub fn generate_params(q_bits: u32, seed: &[u8]) -> Result<Arc<GroupParams>, GroupError> {
    if q_bits < 4 {
        return Err(GroupError::TooFewBits(q_bits));
    }
    let mut rng = seeding::derive_rng(seed, "group.generate", u64::from(q_bits));
    let sieve = small_primes(2048);
    for _attempt in 0..MAX_SAFE_PRIME_ATTEMPTS {
        let q = sample_exact_bits_odd(&mut rng, q_bits);
        let p = (&q << 1u32) + 1u32;
        if !passes_sieve(&q, &sieve) || !passes_sieve(&p, &sieve) {
            continue;
        }
        if !is_probable_prime(&q, MILLER_RABIN_ROUNDS) {
            continue;
        }
        if !is_probable_prime(&p, MILLER_RABIN_ROUNDS) {
            continue;
        }
        // h uniform in [2, p-2] can never square to 1, and every
        // non-identity square generates the whole order-q subgroup.
        let h = sample_below(&mut rng, &(&p - 3u32)) + 2u32;
        let g = h.modpow(&BigUint::from(2u32), &p);
        return GroupParams::new(p, q, g);
    }
    Err(GroupError::SearchExhausted {
        attempts: MAX_SAFE_PRIME_ATTEMPTS,
    })
}

/// The canonical toy group `p = 23, q = 11, g = 2`, small enough for
/// exhaustive tests over all of `Z_q`.
pub fn fixed_test_params() -> Arc<GroupParams> {
    GroupParams::new(
        BigUint::from(23u32),
        BigUint::from(11u32),
        BigUint::from(2u32),
    )
    .expect("the toy group is valid")
}

/// Miller-Rabin with bases drawn from a stream keyed by the candidate
/// itself, so the verdict is deterministic per input.
pub(crate) fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for sp in SMALL_PRIME_SCREEN {
        let sp_big = BigUint::from(sp);
        if *n == sp_big {
            return true;
        }
        if (n % &sp_big).is_zero() {
            return false;
        }
    }
    // n is odd and > 97 from here on.
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n - 1 is even");
    let d = &n_minus_1 >> s;
    let mut rng = seeding::derive_rng(&n.to_bytes_be(), "group.miller-rabin", 0);
    let n_minus_3 = n - 3u32;
    'rounds: for _ in 0..rounds {
        let a = sample_below(&mut rng, &n_minus_3) + 2u32; // uniform in [2, n-2]
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

const SMALL_PRIME_SCREEN: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn small_primes(limit: u32) -> Vec<u32> {
    let mut composite = vec![false; limit as usize];
    let mut out = Vec::new();
    for n in 2..limit {
        if !composite[n as usize] {
            out.push(n);
            let mut m = (n * n) as u64;
            while m < u64::from(limit) {
                composite[m as usize] = true;
                m += u64::from(n);
            }
        }
    }
    out
}

/// Cheap divisibility screen; a candidate equal to a sieve prime passes.
fn passes_sieve(n: &BigUint, sieve: &[u32]) -> bool {
    for &sp in sieve {
        let sp_big = BigUint::from(sp);
        if (n % &sp_big).is_zero() {
            return *n == sp_big;
        }
    }
    true
}

/// Uniform value in `[0, bound)` by rejection sampling.
fn sample_below<R: RngCore + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "sampling bound must be positive");
    let bits = bound.bits();
    let nbytes = usize::try_from(bits.div_ceil(8)).expect("bound fits in memory");
    let rem = (bits % 8) as u32;
    let top_mask: u8 = if rem == 0 { 0xFF } else { (1u8 << rem) - 1 };
    let mut buf = vec![0u8; nbytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= top_mask;
        let v = BigUint::from_bytes_be(&buf);
        if &v < bound {
            return v;
        }
    }
}

/// Odd candidate with exactly `bits` bits (top and bottom bit forced).
fn sample_exact_bits_odd<R: RngCore + ?Sized>(rng: &mut R, bits: u32) -> BigUint {
    let nbytes = bits.div_ceil(8) as usize;
    let rem = bits % 8;
    let top_mask: u8 = if rem == 0 { 0xFF } else { (1u8 << rem) - 1 };
    let top_bit: u8 = if rem == 0 { 0x80 } else { 1u8 << (rem - 1) };
    let mut buf = vec![0u8; nbytes];
    rng.fill_bytes(&mut buf);
    buf[0] &= top_mask;
    buf[0] |= top_bit;
    buf[nbytes - 1] |= 1;
    BigUint::from_bytes_be(&buf)
}

fn byte_width(n: &BigUint) -> usize {
    usize::try_from(n.bits().div_ceil(8))
        .expect("width fits in memory")
        .max(1)
}

fn to_fixed_width(n: &BigUint, width: usize) -> Vec<u8> {
    let raw = n.to_bytes_be();
    assert!(raw.len() <= width, "value too wide for its encoding");
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(&raw);
    out
}
