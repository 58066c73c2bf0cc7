//! The equivocal commitment scheme.
//!
//! A commitment to `x ∈ Z_q` under a key `(g, B)` is `Z = g^x · B^r` for a
//! uniform blinding scalar `r`; the opening is the pair `(x, r)`. Because
//! `B^r` is uniform over the subgroup, `Z` reveals nothing about `x`
//! (perfect hiding), and because two openings of one `Z` to different
//! values solve for `dlog_g(B)`, forging a second opening is as hard as
//! that discrete log (computational binding).
//!
//! The trapdoor `b = dlog_g(B)` flips the scheme's loyalties:
//!
//! * [`equivocate`] reopens any `(x, r)` as `x'` by solving
//!   `x + r·b = x' + r'·b` for `r'`, i.e. `r' = (x + r·b - x') · b^{-1}`;
//! * [`extract`] performs the reverse trade, recovering
//!   `b = (x - x') · (r' - r)^{-1}` from a double opening.
//!
//! Two setups are provided. [`setup_trapdoor`] samples `b` and keeps it;
//! [`setup_honest`] derives `B` by hashing to the group so that no party
//! learns its discrete log.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::RngCore;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupParams, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommitmentError {
    #[error("both openings commit to the same value")]
    SameValue,
    #[error("openings share the same blinding scalar; no discrete log can be extracted")]
    DegenerateOpenings,
    #[error("subgroup order exceeds the exhaustive-enumeration limit of 2^16")]
    EnumerationTooLarge,
    #[error("the blinding base must not be the identity")]
    IdentityBase,
    #[error("the trapdoor exponent must be nonzero")]
    ZeroTrapdoor,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Public commitment key: the group plus the blinding base `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitParams {
    group: Arc<GroupParams>,
    blinding_base: GroupElement,
}

/// The discrete log of the blinding base. Whoever holds this can reopen
/// commitments at will, so it never appears in public parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trapdoor {
    dlog: Scalar,
}

/// A commitment `Z = g^x · B^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Commitment {
    element: GroupElement,
}

/// An opening `(x, r)`: the committed value and its blinding scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opening {
    value: Scalar,
    blinding: Scalar,
}

impl CommitParams {
    /// Wraps a blinding base as a commitment key. The base must be a
    /// non-identity subgroup element (identity would make `r` irrelevant).
    pub fn new(
        group: Arc<GroupParams>,
        blinding_base: GroupElement,
    ) -> Result<Self, CommitmentError> {
        if blinding_base.is_identity() {
            return Err(CommitmentError::IdentityBase);
        }
        assert_eq!(
            &group,
            blinding_base.params(),
            "base must belong to the group"
        );
        Ok(CommitParams {
            group,
            blinding_base,
        })
    }

    pub fn group(&self) -> &Arc<GroupParams> {
        &self.group
    }

    pub fn blinding_base(&self) -> &GroupElement {
        &self.blinding_base
    }

    /// Group encoding followed by the encoded base.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.group.to_bytes();
        out.extend_from_slice(&self.blinding_base.to_bytes());
        out
    }

    /// Parses and re-validates a [`CommitParams::to_bytes`] encoding.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CommitmentError> {
        if bytes.len() < 2 {
            return Err(GroupError::WrongLength {
                expected: 2,
                got: bytes.len(),
            }
            .into());
        }
        let width = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
        let group_len = 2 + 3 * width;
        if bytes.len() != group_len + width {
            return Err(GroupError::WrongLength {
                expected: group_len + width,
                got: bytes.len(),
            }
            .into());
        }
        let group = GroupParams::from_bytes(&bytes[..group_len])?;
        let base = group.decode_element(&bytes[group_len..])?;
        CommitParams::new(group, base)
    }
}

impl Trapdoor {
    /// Wraps a nonzero exponent as a trapdoor.
    pub fn new(dlog: Scalar) -> Result<Self, CommitmentError> {
        if dlog.is_zero() {
            return Err(CommitmentError::ZeroTrapdoor);
        }
        Ok(Trapdoor { dlog })
    }

    pub fn dlog(&self) -> &Scalar {
        &self.dlog
    }

    /// Whether this trapdoor opens the given key, i.e. `g^b = B`.
    pub fn matches(&self, params: &CommitParams) -> bool {
        params.group().generator().pow(&self.dlog) == *params.blinding_base()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.dlog.to_bytes()
    }

    pub fn from_bytes(bytes: &[u8], group: &Arc<GroupParams>) -> Result<Self, CommitmentError> {
        Trapdoor::new(group.decode_scalar(bytes)?)
    }
}

impl Commitment {
    pub fn element(&self) -> &GroupElement {
        &self.element
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.element.to_bytes()
    }

    pub fn from_bytes(bytes: &[u8], group: &Arc<GroupParams>) -> Result<Self, CommitmentError> {
        Ok(Commitment {
            element: group.decode_element(bytes)?,
        })
    }

    /// Wraps an already-validated element as a commitment.
    pub fn from_element(element: GroupElement) -> Self {
        Commitment { element }
    }
}

impl Opening {
    pub fn new(value: Scalar, blinding: Scalar) -> Self {
        Opening { value, blinding }
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }

    pub fn blinding(&self) -> &Scalar {
        &self.blinding
    }

    /// Two fixed-width scalars: value, then blinding.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.value.to_bytes();
        out.extend_from_slice(&self.blinding.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8], group: &Arc<GroupParams>) -> Result<Self, CommitmentError> {
        let width = group.scalar_width();
        if bytes.len() != 2 * width {
            return Err(GroupError::WrongLength {
                expected: 2 * width,
                got: bytes.len(),
            }
            .into());
        }
        Ok(Opening {
            value: group.decode_scalar(&bytes[..width])?,
            blinding: group.decode_scalar(&bytes[width..])?,
        })
    }
}

/// Samples a key together with its trapdoor: `b ← Z_q \ {0}`, `B = g^b`.
pub fn setup_trapdoor<R: RngCore + ?Sized>(
    group: &Arc<GroupParams>,
    rng: &mut R,
) -> (CommitParams, Trapdoor) {
    let b = group.random_nonzero_scalar(rng);
    setup_with_trapdoor(group, b).expect("nonzero exponent yields a valid key")
}

/// Builds the key for an explicitly chosen trapdoor exponent. Used for
/// deterministic replay; [`setup_trapdoor`] is the sampling variant.
pub fn setup_with_trapdoor(
    group: &Arc<GroupParams>,
    b: Scalar,
) -> Result<(CommitParams, Trapdoor), CommitmentError> {
    let trapdoor = Trapdoor::new(b)?;
    let base = group.generator().pow(trapdoor.dlog());
    let params = CommitParams::new(group.clone(), base)?;
    Ok((params, trapdoor))
}

/// Derives a key whose trapdoor nobody knows, by hashing to the group.
///
/// The hash stream over `(public_seed, counter)` is reduced mod `p` and
/// raised to the cofactor `(p-1)/q`; the first non-identity result is `B`.
/// Everything is public and recomputable, and no step involves an exponent
/// of `g`, so the discrete log of `B` stays unknown.
pub fn setup_honest(group: &Arc<GroupParams>, public_seed: &[u8]) -> CommitParams {
    let cofactor = (group.p() - 1u32) / group.q();
    let width = group.element_width();
    for counter in 0u64.. {
        let candidate = hash_to_int(public_seed, counter, width) % group.p();
        let base = candidate.modpow(&cofactor, group.p());
        if let Ok(element) = group.element_from_biguint(base) {
            if !element.is_identity() {
                return CommitParams {
                    group: group.clone(),
                    blinding_base: element,
                };
            }
        }
    }
    unreachable!("the hash stream cannot consist solely of identity preimages")
}

/// SHA-256 in counter mode, producing `width` bytes interpreted big-endian.
fn hash_to_int(seed: &[u8], counter: u64, width: usize) -> BigUint {
    let mut bytes = Vec::with_capacity(width);
    for block in 0u32.. {
        let mut hasher = Sha256::new();
        hasher.update((seed.len() as u64).to_be_bytes());
        hasher.update(seed);
        hasher.update(counter.to_be_bytes());
        hasher.update(block.to_be_bytes());
        bytes.extend_from_slice(&hasher.finalize());
        if bytes.len() >= width {
            break;
        }
    }
    bytes.truncate(width);
    BigUint::from_bytes_be(&bytes)
}

/// Commits to `x` with fresh randomness: `r ← Z_q`, `Z = g^x · B^r`.
pub fn commit<R: RngCore + ?Sized>(
    params: &CommitParams,
    value: &Scalar,
    rng: &mut R,
) -> (Commitment, Opening) {
    let blinding = params.group.random_scalar(rng);
    let commitment = commit_with_randomness(params, value, &blinding);
    (
        commitment,
        Opening {
            value: value.clone(),
            blinding,
        },
    )
}

/// The deterministic core of [`commit`]: `Z = g^x · B^r` for a caller-chosen
/// blinding scalar. Lets transcripts be replayed bit-exactly.
pub fn commit_with_randomness(
    params: &CommitParams,
    value: &Scalar,
    blinding: &Scalar,
) -> Commitment {
    let element = params
        .group
        .generator()
        .pow(value)
        .mul(&params.blinding_base.pow(blinding));
    Commitment { element }
}

/// Checks an opening: true iff `Z = g^x · B^r`.
pub fn verify(params: &CommitParams, commitment: &Commitment, opening: &Opening) -> bool {
    commit_with_randomness(params, &opening.value, &opening.blinding) == *commitment
}

/// Reopens a commitment to `new_value` using the trapdoor.
///
/// Solves `x + r·b = x' + r'·b` in `Z_q`: the returned opening
/// `(x', (x + r·b - x')·b^{-1})` verifies against the same commitment the
/// input opening does. Choosing `new_value = x` returns the input opening
/// unchanged, and equivocating back is the exact inverse.
pub fn equivocate(trapdoor: &Trapdoor, opening: &Opening, new_value: &Scalar) -> Opening {
    let b = trapdoor.dlog();
    let shifted = opening.value.add(&opening.blinding.mul(b));
    let blinding = shifted
        .sub(new_value)
        .mul(&b.inv().expect("trapdoor exponents are nonzero"));
    Opening {
        value: new_value.clone(),
        blinding,
    }
}

/// Recovers the trapdoor from a double opening:
/// `b = (x - x') · (r' - r)^{-1}` in `Z_q`.
///
/// The commitment itself plays no part in the formula, so it is not a
/// parameter; callers who want the `g^b = B` guarantee must first check
/// that both openings verify against the same commitment.
pub fn extract(first: &Opening, second: &Opening) -> Result<Scalar, CommitmentError> {
    if first.value == second.value {
        return Err(CommitmentError::SameValue);
    }
    if first.blinding == second.blinding {
        return Err(CommitmentError::DegenerateOpenings);
    }
    let numerator = first.value.sub(&second.value);
    let denominator = second.blinding.sub(&first.blinding);
    Ok(numerator.mul(&denominator.inv().expect("blinding scalars differ")))
}

/// The multiset `{ g^x · B^r : r ∈ Z_q }`, in `r` order.
///
/// `B` generates the whole subgroup, so this is the subgroup itself with
/// every element hit exactly once — for any `x`. That is the perfect-hiding
/// argument made executable; it is only feasible for small `q`, hence the
/// 2^16 guard.
pub fn hiding_distribution(
    params: &CommitParams,
    value: &Scalar,
) -> Result<Vec<GroupElement>, CommitmentError> {
    if params.group.q().bits() > 16 {
        return Err(CommitmentError::EnumerationTooLarge);
    }
    let q = u64::try_from(params.group.q()).expect("q fits in u64 under the guard");
    let mut out = Vec::with_capacity(q as usize);
    let mut current = params.group.generator().pow(value);
    for _ in 0..q {
        out.push(current.clone());
        current = current.mul(&params.blinding_base);
    }
    Ok(out)
}
