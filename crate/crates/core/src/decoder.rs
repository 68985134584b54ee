//! Syndrome decoding of zero-block insertions and tandem duplications.
//!
//! After `h` insertions into runs `i_1, ..., i_h`, the checksum deficiency
//! is `s_q = Σ_j i_j^q (mod ξ)`. Newton's identities turn `s_1..s_h` into the
//! elementary symmetric polynomials of the positions, and the positions are
//! the roots of `z^h - e_1 z^{h-1} + ... ± e_h`, found by trial over the
//! `r + 1` possible runs. Because `ξ > max(t, r)`, the divisions by `k ≤ h`
//! are valid and distinct runs stay distinct modulo `ξ`.

use crate::arith::mod_inv;
use crate::codes::{checksum_vector, CodeSpec, Construction};
use crate::error::{DecodeError, Error, Result};
use crate::word::{
    phi, phi_inverse, profile_map, reconstruct_from_profile, zero_run_decompose, PhiImage, Word,
};

/// Checksum deficiency of a received word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deficiency {
    /// `s_q = received_checksum_q - a_q mod ξ`, `q = 1..t`.
    pub values: Vec<u64>,
    /// `h = (received_length - n) / ℓ`.
    pub insertions: usize,
}

fn insertion_count(received_len: usize, n: usize, dup_length: usize, t: usize) -> Result<usize> {
    if dup_length == 0 {
        return Err(Error::ZeroDupLength);
    }
    if received_len < n || !(received_len - n).is_multiple_of(dup_length) {
        return Err(DecodeError::LengthInconsistent {
            received: received_len,
            expected: n,
            dup_length,
        }
        .into());
    }
    let h = (received_len - n) / dup_length;
    if h > t {
        return Err(DecodeError::TooManyInsertions {
            insertions: h,
            radius: t,
        }
        .into());
    }
    Ok(h)
}

/// `n` is the length of the word before insertions; `a` holds the `t`
/// prescribed residues modulo `ξ`.
pub fn compute_deficiency(
    received_z: &Word,
    n: usize,
    dup_length: usize,
    t: usize,
    residues: &[u64],
    modulus: u64,
) -> Result<Deficiency> {
    let insertions = insertion_count(received_z.len(), n, dup_length, t)?;
    if residues.len() != t {
        return Err(Error::InvalidParams(format!(
            "expected {t} residues, got {}",
            residues.len()
        )));
    }
    let values = checksum_vector(received_z, dup_length, t, modulus)
        .into_iter()
        .zip(residues)
        .map(|(c, &a)| (c + modulus - a % modulus) % modulus)
        .collect();
    Ok(Deficiency { values, insertions })
}

/// Elementary symmetric polynomials `e_0..e_h` from power sums `p_1..p_h`
/// via `k e_k = Σ_{i=1}^k (-1)^{i-1} e_{k-i} p_i`.
pub fn newton_elementary(power_sums: &[u64], modulus: u64) -> Option<Vec<u64>> {
    let m = modulus as u128;
    let mut e = vec![1u64];
    for k in 1..=power_sums.len() {
        let mut acc = 0u128;
        for i in 1..=k {
            let term = e[k - i] as u128 * (power_sums[i - 1] as u128 % m) % m;
            acc = if i % 2 == 1 {
                (acc + term) % m
            } else {
                (acc + m - term) % m
            };
        }
        let inv = mod_inv(k as u64 % modulus, modulus)? as u128;
        e.push((acc * inv % m) as u64);
    }
    Some(e)
}

/// Power sums `p_1..p_h` back from `e_0..e_h`, the other direction of
/// Newton's identities: `p_k = Σ_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k`.
pub fn newton_power_sums(elementary: &[u64], modulus: u64) -> Vec<u64> {
    let m = modulus as u128;
    let h = elementary.len() - 1;
    let mut p: Vec<u64> = Vec::with_capacity(h);
    for k in 1..=h {
        let mut acc = 0u128;
        for i in 1..k {
            let term = elementary[i] as u128 * p[k - i - 1] as u128 % m;
            acc = if i % 2 == 1 {
                (acc + term) % m
            } else {
                (acc + m - term) % m
            };
        }
        let last = (k as u128 % m) * elementary[k] as u128 % m;
        acc = if k % 2 == 1 {
            (acc + last) % m
        } else {
            (acc + m - last) % m
        };
        p.push(acc as u64);
    }
    p
}

/// Divides `coeffs` (highest degree first) by `(z - root)`, returning the
/// quotient and remainder.
fn synthetic_division(coeffs: &[u64], root: u64, modulus: u64) -> (Vec<u64>, u64) {
    let m = modulus as u128;
    let mut out = Vec::with_capacity(coeffs.len());
    let mut carry = 0u128;
    for &c in coeffs {
        carry = (c as u128 + carry * root as u128) % m;
        out.push(carry as u64);
    }
    let remainder = out.pop().unwrap_or(0);
    (out, remainder)
}

/// Recovers the multiset of insertion runs (1-based, sorted) whose power sums
/// match `s_1..s_h` modulo `ξ`.
pub fn power_sum_positions(
    deficiency: &[u64],
    h: usize,
    modulus: u64,
    position_cap: usize,
) -> Result<Vec<usize>> {
    if h > deficiency.len() {
        return Err(Error::InvalidParams(format!(
            "{h} insertions need {h} power sums, got {}",
            deficiency.len()
        )));
    }
    if h as u64 >= modulus || position_cap as u64 > modulus {
        return Err(Error::InvalidParams(format!(
            "modulus {modulus} too small for {h} insertions over {position_cap} runs"
        )));
    }
    let failed = || Error::Decode(DecodeError::PositionRecoveryFailed { insertions: h });
    let e = newton_elementary(&deficiency[..h], modulus).ok_or_else(failed)?;
    let mut poly: Vec<u64> = e
        .iter()
        .enumerate()
        .map(|(k, &ek)| {
            if k % 2 == 0 {
                ek
            } else {
                (modulus - ek) % modulus
            }
        })
        .collect();
    let mut positions = Vec::with_capacity(h);
    for i in 1..=position_cap {
        let root = i as u64 % modulus;
        while poly.len() > 1 {
            let (quotient, remainder) = synthetic_division(&poly, root, modulus);
            if remainder != 0 {
                break;
            }
            poly = quotient;
            positions.push(i);
        }
    }
    if positions.len() != h {
        return Err(failed());
    }
    Ok(positions)
}

/// Removes up to `t` inserted `0^ℓ` blocks from `received_z`, restoring the
/// length-`n` word of `C_{p,t,ℓ}(n, r, a, ξ)`.
pub fn decode_zero_blocks(
    received_z: &Word,
    n: usize,
    dup_length: usize,
    t: usize,
    residues: &[u64],
    modulus: u64,
) -> Result<Word> {
    let deficiency = compute_deficiency(received_z, n, dup_length, t, residues, modulus)?;
    let h = deficiency.insertions;
    let mut profile = zero_run_decompose(received_z);
    let positions = power_sum_positions(&deficiency.values, h, modulus, profile.runs.len())?;
    let mut k = 0;
    while k < positions.len() {
        let run = positions[k];
        let blocks = positions[k..].iter().take_while(|&&i| i == run).count();
        let b = &mut profile.runs[run - 1];
        *b = b
            .checked_sub(blocks * dup_length)
            .ok_or(DecodeError::RunUnderflow { run, blocks })?;
        k += blocks;
    }
    let decoded = profile.reassemble(received_z.alphabet_size())?;
    if checksum_vector(&decoded, dup_length, t, modulus) != residues {
        return Err(DecodeError::ResidualChecksum.into());
    }
    Ok(decoded)
}

fn require(spec: &CodeSpec, received: &Word, construction: Construction) -> Result<()> {
    if spec.construction() != construction {
        return Err(Error::InvalidParams(format!(
            "expected a {construction} code, got {}",
            spec.construction()
        )));
    }
    if received.alphabet_size() != spec.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            expected: spec.alphabet_size(),
            found: received.alphabet_size(),
        });
    }
    insertion_count(received.len(), spec.len(), spec.dup_length(), spec.radius())?;
    Ok(())
}

/// Decodes a word of Construction 1: the derivative weight and the prefix
/// survive duplications, so only the zero blocks need to be removed.
pub fn decode_c1(received: &Word, spec: &CodeSpec) -> Result<Word> {
    require(spec, received, Construction::C1)?;
    let l = spec.dup_length();
    let (prefix, derivative) = phi(received, l)?.into_parts();
    let entry = spec.entry(derivative.hamming_weight())?;
    let z = decode_zero_blocks(
        &derivative,
        spec.len() - l,
        l,
        spec.radius(),
        &entry.residues,
        entry.modulus,
    )?;
    Ok(phi_inverse(&PhiImage::new(prefix, z, l)?))
}

/// Decodes a word of Construction 2: prefix and root are invariant and every
/// duplication inserts a single zero into `π`.
pub fn decode_c2(received: &Word, spec: &CodeSpec) -> Result<Word> {
    require(spec, received, Construction::C2)?;
    let l = spec.dup_length();
    let profile = profile_map(received, l)?;
    let entry = spec.entry(profile.weight())?;
    let root_len = profile.root.len();
    if root_len > spec.len() || !(spec.len() - root_len).is_multiple_of(l) {
        return Err(DecodeError::LengthInconsistent {
            received: received.len(),
            expected: spec.len(),
            dup_length: l,
        }
        .into());
    }
    let blocks = (spec.len() - root_len) / l;
    let pi = decode_zero_blocks(
        &profile.pi,
        profile.weight() + blocks,
        1,
        spec.radius(),
        &entry.residues,
        entry.modulus,
    )?;
    reconstruct_from_profile(&profile.prefix, &profile.root, &pi, l)
}

/// Dispatches on the construction of `spec`.
pub fn decode(received: &Word, spec: &CodeSpec) -> Result<Word> {
    match spec.construction() {
        Construction::C1 => decode_c1(received, spec),
        Construction::C2 => decode_c2(received, spec),
    }
}
