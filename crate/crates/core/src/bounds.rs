//! Sphere-packing upper bounds on the size of `t`-duplication-correcting
//! codes, evaluated exactly in rational arithmetic.
//!
//! Three upper bounds are provided, from weakest to strongest:
//!
//! * [`sp_bound_closed_form`]: `t! p^{n+t(ℓ+1)} / ((n+(t-1)ℓ)^t (p-1)^t)`,
//! * [`sp_bound_partition_sum`]: the exact sum over derivative weights that the
//!   closed form upper-bounds,
//! * [`sp_bound_roots`]: the sum over duplication-root classes, built from the
//!   constrained count [`count_bounded_zero_runs`].
//!
//! [`partition_bound`] is the generic engine behind all of them and
//! can be fed exact enumerated sphere data via [`partition_sphere_data`].

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{log_p, pow_big, Binomials};
use crate::channel::duplication_sphere_with_budget;
use crate::error::{Error, Result};
use crate::word::{duplication_root, phi, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Upper,
    Lower,
}

/// Which formula produced a [`BoundValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFormula {
    /// `p^n`, returned for the degenerate radius `t = 0`.
    Trivial,
    PartitionSum,
    ClosedForm,
    RootPartition,
    Construction1,
    Construction2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub cardinality: BigRational,
    /// `n - log_p(cardinality)`.
    pub redundancy: f64,
    pub kind: BoundKind,
    pub formula: BoundFormula,
}

impl BoundValue {
    pub(crate) fn new(
        cardinality: BigRational,
        p: u32,
        n: usize,
        kind: BoundKind,
        formula: BoundFormula,
    ) -> Self {
        let redundancy = n as f64 - log_p(&cardinality, p as u64);
        BoundValue {
            cardinality,
            redundancy,
            kind,
            formula,
        }
    }
}

pub(crate) fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn integer(value: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

pub(crate) fn check_params(p: u32, n: usize, dup_length: usize) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidAlphabet(p));
    }
    if dup_length == 0 {
        return Err(Error::ZeroDupLength);
    }
    if n < dup_length {
        return Err(Error::TooShort { len: n, dup_length });
    }
    Ok(())
}

/// Number of compositions of `total` into `parts` non-negative parts, each at
/// most `cap`, by inclusion-exclusion over the parts that exceed the cap.
fn bounded_compositions(binom: &Binomials, total: usize, parts: usize, cap: usize) -> BigUint {
    if parts == 0 {
        return if total == 0 {
            1u32.into()
        } else {
            BigUint::zero()
        };
    }
    let mut acc = BigInt::zero();
    for j in 0..=parts {
        let Some(rest) = total.checked_sub(j * (cap + 1)) else {
            break;
        };
        let term = BigInt::from(binom.get(parts, j) * binom.get(rest + parts - 1, parts - 1));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint()
        .expect("inclusion-exclusion count is non-negative")
}

/// Table of `N_{p,ℓ}(m, r)` for all `m ≤ max_len`: weight-`r` words of length
/// `m` over `Z_p` whose zero runs are all shorter than `ℓ`.
#[derive(Debug, Clone)]
pub struct BoundedRunCounts {
    rows: Vec<Vec<BigUint>>,
}

impl BoundedRunCounts {
    pub fn new(p: u32, dup_length: usize, max_len: usize) -> Self {
        let binom = Binomials::up_to(2 * max_len + 2);
        let rows = (0..=max_len)
            .map(|m| {
                (0..=m)
                    .map(|r| {
                        pow_big(p as u64 - 1, r)
                            * bounded_compositions(&binom, m - r, r + 1, dup_length - 1)
                    })
                    .collect()
            })
            .collect();
        BoundedRunCounts { rows }
    }

    pub fn get(&self, len: usize, weight: usize) -> BigUint {
        self.rows
            .get(len)
            .and_then(|row| row.get(weight))
            .cloned()
            .unwrap_or_default()
    }
}

/// `N_{p,ℓ}(n, r)`.
pub fn count_bounded_zero_runs(p: u32, dup_length: usize, n: usize, r: usize) -> Result<BigUint> {
    if p < 2 {
        return Err(Error::InvalidAlphabet(p));
    }
    if dup_length == 0 {
        return Err(Error::ZeroDupLength);
    }
    if r > n {
        return Err(Error::InvalidParams(format!(
            "weight {r} exceeds length {n}"
        )));
    }
    let binom = Binomials::up_to(n + 1);
    Ok(pow_big(p as u64 - 1, r) * bounded_compositions(&binom, n - r, r + 1, dup_length - 1))
}

fn trivial(p: u32, n: usize) -> BoundValue {
    BoundValue::new(
        integer(pow_big(p as u64, n)),
        p,
        n,
        BoundKind::Upper,
        BoundFormula::Trivial,
    )
}

/// `p^ℓ Σ_{r=0}^{n-ℓ} C(n+(t-1)ℓ, r) (p-1)^r / C(r+t, t)`.
pub fn sp_bound_partition_sum(p: u32, n: usize, t: usize, dup_length: usize) -> Result<BoundValue> {
    check_params(p, n, dup_length)?;
    if t == 0 {
        return Ok(trivial(p, n));
    }
    let l = dup_length;
    let grown = n + (t - 1) * l;
    let binom = Binomials::up_to(grown.max(n - l + t));
    let mut sum = BigRational::zero();
    for r in 0..=n - l {
        let num = binom.get(grown, r) * pow_big(p as u64 - 1, r);
        sum += ratio(num, binom.get(r + t, t));
    }
    let value = sum * integer(pow_big(p as u64, l));
    Ok(BoundValue::new(
        value,
        p,
        n,
        BoundKind::Upper,
        BoundFormula::PartitionSum,
    ))
}

/// `t! p^{n+t(ℓ+1)} / ((n+(t-1)ℓ)^t (p-1)^t)`.
pub fn sp_bound_closed_form(p: u32, n: usize, t: usize, dup_length: usize) -> Result<BoundValue> {
    check_params(p, n, dup_length)?;
    if t == 0 {
        return Ok(trivial(p, n));
    }
    let l = dup_length;
    let t_factorial: BigUint = (1..=t as u64).product();
    let num = t_factorial * pow_big(p as u64, n + t * (l + 1));
    let den = pow_big((n + (t - 1) * l) as u64, t) * pow_big(p as u64 - 1, t);
    Ok(BoundValue::new(
        ratio(num, den),
        p,
        n,
        BoundKind::Upper,
        BoundFormula::ClosedForm,
    ))
}

/// Lower bound on the redundancy `n - log_p |C|`:
/// `t log_p n - t log_p(t(p-1)) - t(ℓ+1)`.
pub fn redundancy_lower_bound(p: u32, n: usize, t: usize, dup_length: usize) -> Result<f64> {
    check_params(p, n, dup_length)?;
    if t == 0 {
        return Ok(0.0);
    }
    let ln_p = (p as f64).ln();
    let t_f = t as f64;
    Ok(t_f * (n as f64).ln() / ln_p
        - t_f * (t_f * (p as f64 - 1.0)).ln() / ln_p
        - t_f * (dup_length as f64 + 1.0))
}

/// Sphere-packing bound over duplication-root classes:
/// `p^ℓ Σ_w Σ_r N_{p,ℓ}(n-(w+1)ℓ, r) C(r+w+t, w+t) / C(r+t, t)`.
pub fn sp_bound_roots(p: u32, n: usize, t: usize, dup_length: usize) -> Result<BoundValue> {
    check_params(p, n, dup_length)?;
    if t == 0 {
        return Ok(trivial(p, n));
    }
    let l = dup_length;
    let counts = BoundedRunCounts::new(p, l, n - l);
    let binom = Binomials::up_to(n + t + 1);
    // For each weight r the classes share the denominator C(r+t, t), so the
    // sum over w stays an integer.
    let mut per_weight = vec![BigUint::zero(); n - l + 1];
    for w in 0..n / l {
        let root_len = n - (w + 1) * l;
        for (r, slot) in per_weight.iter_mut().enumerate().take(root_len + 1) {
            *slot += counts.get(root_len, r) * binom.get(r + w + t, w + t);
        }
    }
    let mut sum = BigRational::zero();
    for (r, total) in per_weight.into_iter().enumerate() {
        if !total.is_zero() {
            sum += ratio(total, binom.get(r + t, t));
        }
    }
    let value = sum * integer(pow_big(p as u64, l));
    Ok(BoundValue::new(
        value,
        p,
        n,
        BoundKind::Upper,
        BoundFormula::RootPartition,
    ))
}

/// Sphere statistics of one part `ψ_i` of a partition of `Z_p^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartSpheres {
    /// `|S_t(ψ_i)|`, the size of the union of the spheres of all members.
    pub total: BigUint,
    /// `min_{x ∈ ψ_i} |S_t(x)|`.
    pub min: BigUint,
}

/// `Σ_i |S_t(ψ_i)| / min_{x ∈ ψ_i} |S_t(x)|`.
pub fn partition_bound(parts: &[PartSpheres]) -> Result<BigRational> {
    let mut sum = BigRational::zero();
    for (i, part) in parts.iter().enumerate() {
        if part.min.is_zero() {
            return Err(Error::InvalidParams(format!(
                "part {i} has zero minimum sphere size"
            )));
        }
        sum += ratio(part.total.clone(), part.min.clone());
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    /// Classes of equal derivative weight.
    DerivativeWeight,
    /// Classes of equal duplication root.
    Root,
}

/// Enumerates `Z_p^n`, groups it by `kind` and measures every part's spheres.
/// Only feasible for small `p^n`.
pub fn partition_sphere_data(
    p: u8,
    n: usize,
    t: usize,
    dup_length: usize,
    kind: PartitionKind,
    budget: u64,
) -> Result<Vec<PartSpheres>> {
    check_params(p as u32, n, dup_length)?;
    let space = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if space > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut parts: BTreeMap<Word, (BTreeSet<Word>, usize)> = BTreeMap::new();
    for x in Word::all(p, n)? {
        let key = match kind {
            PartitionKind::DerivativeWeight => {
                let r = phi(&x, dup_length)?.derivative().hamming_weight();
                Word::zeros(2, r)?
            }
            PartitionKind::Root => duplication_root(&x, dup_length)?,
        };
        let sphere = duplication_sphere_with_budget(&x, t, dup_length, budget)?;
        let entry = parts
            .entry(key)
            .or_insert_with(|| (BTreeSet::new(), usize::MAX));
        entry.1 = entry.1.min(sphere.len());
        entry.0.extend(sphere.members);
    }
    Ok(parts
        .into_values()
        .map(|(union, min)| PartSpheres {
            total: union.len().into(),
            min: min.into(),
        })
        .collect())
}

/// Converts a rational bound to a float, mainly for diagnostics.
pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
