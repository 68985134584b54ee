//! Power-sum checksum codes and the two tandem-duplication-correcting
//! constructions built on them.
//!
//! `C_{p,t,ℓ}(n, r, a, ξ)` collects the weight-`r` words of length `n` whose
//! zero runs `b_1, ..., b_{r+1}` satisfy `Σ_i i^q ⌊b_i/ℓ⌋ ≡ a_q (mod ξ)` for
//! `q = 1..t`. Inserting a block `0^ℓ` into run `i` moves checksum `q` by
//! exactly `i^q`, so for a prime `ξ > max(t, r)` the insertion positions can
//! be read back from the deficiency (see [`crate::decoder`]).
//!
//! * Construction 1 constrains the derivative `z` of `φ(x)` by the checksum
//!   code of its weight; the prefix is free.
//! * Construction 2 constrains the binary profile `π(x)` with `ℓ = 1`, per
//!   prefix and duplication root.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{is_prime, mod_pow, next_prime_above, pow_big, Binomials};
use crate::bounds::{
    check_params, integer, ratio, BoundFormula, BoundKind, BoundValue, BoundedRunCounts,
};
use crate::error::{Error, Result};
use crate::word::{phi, profile_map, zero_run_decompose, Word};

/// Default cap on DP work units and enumerated words.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

fn checksum_of_runs(runs: &[usize], dup_length: usize, t: usize, modulus: u64) -> Vec<u64> {
    let mut sums = vec![0u64; t];
    for (k, &b) in runs.iter().enumerate() {
        let blocks = (b / dup_length) as u64 % modulus;
        if blocks == 0 {
            continue;
        }
        let position = (k as u64 + 1) % modulus;
        for (q, slot) in sums.iter_mut().enumerate() {
            let term = mod_pow(position, q as u64 + 1, modulus) * blocks % modulus;
            *slot = (*slot + term) % modulus;
        }
    }
    sums
}

/// Component `q` is `Σ_{i=1}^{r+1} i^q ⌊b_i/ℓ⌋ mod ξ`, `q = 1..t`.
pub fn checksum_vector(z: &Word, dup_length: usize, t: usize, modulus: u64) -> Vec<u64> {
    checksum_of_runs(&zero_run_decompose(z).runs, dup_length.max(1), t, modulus)
}

/// Parameters of one checksum code `C_{p,t,ℓ}(n, r, a, ξ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChecksumParams {
    pub p: u8,
    /// Length of the constrained word.
    pub n: usize,
    pub t: usize,
    pub dup_length: usize,
    pub weight: usize,
    pub residues: Vec<u64>,
    pub modulus: u64,
}

impl ChecksumParams {
    pub fn new(
        p: u8,
        n: usize,
        t: usize,
        dup_length: usize,
        weight: usize,
        residues: Vec<u64>,
        modulus: u64,
    ) -> Result<Self> {
        if dup_length == 0 {
            return Err(Error::ZeroDupLength);
        }
        check_entry(t, weight, modulus, &residues)?;
        if weight > n {
            return Err(Error::InvalidParams(format!(
                "weight {weight} exceeds length {n}"
            )));
        }
        Ok(ChecksumParams {
            p,
            n,
            t,
            dup_length,
            weight,
            residues,
            modulus,
        })
    }
}

fn check_entry(t: usize, weight: usize, modulus: u64, residues: &[u64]) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidParams("radius t must be at least 1".into()));
    }
    if !is_prime(modulus) || modulus <= t.max(weight) as u64 {
        return Err(Error::InvalidParams(format!(
            "modulus {modulus} must be a prime above max(t, r) = {}",
            t.max(weight)
        )));
    }
    check_residues(t, modulus, residues)
}

fn check_residues(t: usize, modulus: u64, residues: &[u64]) -> Result<()> {
    if residues.len() != t {
        return Err(Error::InvalidParams(format!(
            "expected {t} residues, got {}",
            residues.len()
        )));
    }
    if let Some(a) = residues.iter().find(|&&a| a >= modulus) {
        return Err(Error::InvalidParams(format!(
            "residue {a} not below modulus {modulus}"
        )));
    }
    Ok(())
}

pub fn is_member_checksum(z: &Word, params: &ChecksumParams) -> Result<bool> {
    if z.len() != params.n {
        return Err(Error::LengthMismatch {
            expected: params.n,
            found: z.len(),
        });
    }
    if z.hamming_weight() != params.weight {
        return Ok(false);
    }
    Ok(checksum_vector(z, params.dup_length, params.t, params.modulus) == params.residues)
}

/// Least prime `ξ > max(t, r)`.
pub fn smallest_valid_prime(t: usize, r: usize) -> u64 {
    next_prime_above(t.max(r) as u64)
}

fn encode(digits: &[u64], modulus: u64) -> usize {
    digits
        .iter()
        .fold(0usize, |acc, &d| acc * modulus as usize + d as usize)
}

fn decode(mut index: usize, t: usize, modulus: u64) -> Vec<u64> {
    let mut digits = vec![0u64; t];
    for slot in digits.iter_mut().rev() {
        *slot = (index % modulus as usize) as u64;
        index /= modulus as usize;
    }
    digits
}

/// `counts[total][class]`: compositions `(b_1, ..., b_parts)` of `total`
/// (for every `total ≤ max_total`) bucketed by the checksum of
/// [`checksum_vector`], classes indexed in lexicographic order of `a`.
fn composition_checksum_counts(
    parts: usize,
    max_total: usize,
    dup_length: usize,
    t: usize,
    modulus: u64,
    budget: u64,
) -> Result<Vec<Vec<u128>>> {
    let classes = (modulus as u128).pow(t as u32);
    let work = parts as u128 * (max_total as u128 + 1).pow(2) * classes;
    if work > budget as u128 {
        return Err(Error::BudgetExceeded { budget });
    }
    let classes = classes as usize;
    let digits: Vec<Vec<u64>> = (0..classes).map(|c| decode(c, t, modulus)).collect();
    let mut table = vec![vec![0u128; classes]; max_total + 1];
    table[0][0] = 1;
    for part in 1..=parts {
        let powers: Vec<u64> = (1..=t as u64)
            .map(|q| mod_pow(part as u64 % modulus, q, modulus))
            .collect();
        let mut next = vec![vec![0u128; classes]; max_total + 1];
        for (total, row) in table.iter().enumerate() {
            for (class, &count) in row.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                for b in 0..=max_total - total {
                    let blocks = (b / dup_length) as u64 % modulus;
                    let shifted: Vec<u64> = digits[class]
                        .iter()
                        .zip(&powers)
                        .map(|(&d, &pw)| (d + pw * blocks) % modulus)
                        .collect();
                    let slot = &mut next[total + b][encode(&shifted, modulus)];
                    *slot = slot
                        .checked_add(count)
                        .ok_or_else(|| Error::InvalidParams("composition count overflow".into()))?;
                }
            }
        }
        table = next;
    }
    Ok(table)
}

/// Residue vector together with the size of its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueChoice {
    pub residues: Vec<u64>,
    pub size: BigUint,
}

fn argmax(sizes: &[BigUint], t: usize, modulus: u64) -> ResidueChoice {
    // strict comparison keeps the lexicographically smallest maximizer
    let mut best = 0;
    for (k, size) in sizes.iter().enumerate() {
        if *size > sizes[best] {
            best = k;
        }
    }
    ResidueChoice {
        residues: decode(best, t, modulus),
        size: sizes[best].clone(),
    }
}

/// Sizes of `C_{p,t,ℓ}(n, r, a, ξ)` for every `a`, in lexicographic order.
pub fn checksum_class_sizes(
    p: u8,
    n: usize,
    t: usize,
    dup_length: usize,
    r: usize,
    modulus: u64,
    budget: u64,
) -> Result<Vec<BigUint>> {
    if dup_length == 0 {
        return Err(Error::ZeroDupLength);
    }
    if r > n {
        return Err(Error::InvalidParams(format!(
            "weight {r} exceeds length {n}"
        )));
    }
    let counts = composition_checksum_counts(r + 1, n - r, dup_length, t, modulus, budget)?;
    let letters = pow_big(p as u64 - 1, r);
    Ok(counts[n - r]
        .iter()
        .map(|&c| &letters * BigUint::from(c))
        .collect())
}

/// The residue vector maximizing `|C_{p,t,ℓ}(n, r, a, ξ)|`; ties go to the
/// lexicographically smallest `a`.
pub fn best_residues(
    p: u8,
    n: usize,
    t: usize,
    dup_length: usize,
    r: usize,
    modulus: u64,
    budget: u64,
) -> Result<ResidueChoice> {
    let sizes = checksum_class_sizes(p, n, t, dup_length, r, modulus, budget)?;
    Ok(argmax(&sizes, t, modulus))
}

/// Number of length-`n` words with root weight `r` whose profile `π` has
/// checksum `a` (with `ℓ = 1`), for every `a` in lexicographic order.
pub fn profile_class_sizes(
    p: u8,
    n: usize,
    t: usize,
    dup_length: usize,
    r: usize,
    modulus: u64,
    budget: u64,
) -> Result<Vec<BigUint>> {
    check_params(p as u32, n, dup_length)?;
    let max_blocks = n / dup_length - 1;
    let counts = composition_checksum_counts(r + 1, max_blocks, 1, t, modulus, budget)?;
    let roots = BoundedRunCounts::new(p as u32, dup_length, n - dup_length);
    let prefixes = pow_big(p as u64, dup_length);
    let mut sizes = vec![BigUint::zero(); counts[0].len()];
    for (w, row) in counts.iter().enumerate() {
        let root_len = n - (w + 1) * dup_length;
        let root_count = roots.get(root_len, r);
        if root_count.is_zero() {
            continue;
        }
        let factor = &prefixes * root_count;
        for (slot, &c) in sizes.iter_mut().zip(row) {
            if c != 0 {
                *slot += &factor * BigUint::from(c);
            }
        }
    }
    Ok(sizes)
}

/// Construction-2 analogue of [`best_residues`]: one `a` per root weight `r`,
/// chosen over all block counts `w` at once.
pub fn best_residues_c2(
    p: u8,
    n: usize,
    t: usize,
    dup_length: usize,
    r: usize,
    modulus: u64,
    budget: u64,
) -> Result<ResidueChoice> {
    let sizes = profile_class_sizes(p, n, t, dup_length, r, modulus, budget)?;
    Ok(argmax(&sizes, t, modulus))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    C1,
    C2,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::C1 => "c1",
            Construction::C2 => "c2",
        })
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c1" | "1" => Ok(Construction::C1),
            "c2" | "2" => Ok(Construction::C2),
            other => Err(Error::TableFormat(format!(
                "unknown construction {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueEntry {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

/// One concrete code: parameters plus a residue table indexed by weight
/// (derivative weight for C1, root weight for C2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    p: u8,
    n: usize,
    t: usize,
    dup_length: usize,
    construction: Construction,
    table: BTreeMap<usize, ResidueEntry>,
}

impl CodeSpec {
    pub fn new(
        p: u8,
        n: usize,
        t: usize,
        dup_length: usize,
        construction: Construction,
        table: BTreeMap<usize, ResidueEntry>,
    ) -> Result<Self> {
        let spec = Self::new_unchecked(p, n, t, dup_length, construction, table)?;
        for (&r, entry) in &spec.table {
            check_entry(t, r, entry.modulus, &entry.residues)?;
        }
        Ok(spec)
    }

    /// Like [`CodeSpec::new`] but accepts moduli that are not primes above
    /// `max(t, r)`. Such codes generally do not correct `t` duplications;
    /// this exists for negative controls.
    pub fn new_unchecked(
        p: u8,
        n: usize,
        t: usize,
        dup_length: usize,
        construction: Construction,
        table: BTreeMap<usize, ResidueEntry>,
    ) -> Result<Self> {
        check_params(p as u32, n, dup_length)?;
        if t == 0 {
            return Err(Error::InvalidParams("radius t must be at least 1".into()));
        }
        for (&r, entry) in &table {
            if r > n - dup_length {
                return Err(Error::InvalidParams(format!(
                    "weight {r} exceeds derivative length {}",
                    n - dup_length
                )));
            }
            if entry.modulus < 2 {
                return Err(Error::InvalidParams(format!(
                    "modulus {} below 2",
                    entry.modulus
                )));
            }
            check_residues(t, entry.modulus, &entry.residues)?;
        }
        Ok(CodeSpec {
            p,
            n,
            t,
            dup_length,
            construction,
            table,
        })
    }

    /// Table with `ξ_r = smallest_valid_prime(t, r)` and the class-maximizing
    /// residues for every weight.
    pub fn optimal(
        p: u8,
        n: usize,
        t: usize,
        dup_length: usize,
        construction: Construction,
        budget: u64,
    ) -> Result<Self> {
        check_params(p as u32, n, dup_length)?;
        let mut table = BTreeMap::new();
        for r in 0..=n - dup_length {
            let modulus = smallest_valid_prime(t, r);
            let choice = match construction {
                Construction::C1 => {
                    best_residues(p, n - dup_length, t, dup_length, r, modulus, budget)?
                }
                Construction::C2 => best_residues_c2(p, n, t, dup_length, r, modulus, budget)?,
            };
            table.insert(
                r,
                ResidueEntry {
                    modulus,
                    residues: choice.residues,
                },
            );
        }
        Self::new(p, n, t, dup_length, construction, table)
    }

    /// Table with `ξ_r = smallest_valid_prime(t, r)` and all residues zero.
    pub fn with_zero_residues(
        p: u8,
        n: usize,
        t: usize,
        dup_length: usize,
        construction: Construction,
    ) -> Result<Self> {
        check_params(p as u32, n, dup_length)?;
        let table = (0..=n - dup_length)
            .map(|r| {
                (
                    r,
                    ResidueEntry {
                        modulus: smallest_valid_prime(t, r),
                        residues: vec![0; t],
                    },
                )
            })
            .collect();
        Self::new(p, n, t, dup_length, construction, table)
    }

    pub fn alphabet_size(&self) -> u8 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn radius(&self) -> usize {
        self.t
    }

    pub fn dup_length(&self) -> usize {
        self.dup_length
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn table(&self) -> &BTreeMap<usize, ResidueEntry> {
        &self.table
    }

    pub fn entry(&self, weight: usize) -> Result<&ResidueEntry> {
        self.table
            .get(&weight)
            .ok_or(Error::MissingTableEntry { weight })
    }

    pub fn contains(&self, x: &Word) -> Result<bool> {
        match self.construction {
            Construction::C1 => c1_membership(x, self),
            Construction::C2 => c2_membership(x, self),
        }
    }

    /// Exact code size from class counts, without enumerating words.
    pub fn counted_size(&self, budget: u64) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for r in 0..=self.n - self.dup_length {
            let Some(entry) = self.table.get(&r) else {
                continue;
            };
            let class = encode(&entry.residues, entry.modulus);
            let size = match self.construction {
                Construction::C1 => {
                    let sizes = checksum_class_sizes(
                        self.p,
                        self.n - self.dup_length,
                        self.t,
                        self.dup_length,
                        r,
                        entry.modulus,
                        budget,
                    )?;
                    pow_big(self.p as u64, self.dup_length) * &sizes[class]
                }
                Construction::C2 => profile_class_sizes(
                    self.p,
                    self.n,
                    self.t,
                    self.dup_length,
                    r,
                    entry.modulus,
                    budget,
                )?[class]
                    .clone(),
            };
            total += size;
        }
        Ok(total)
    }

    /// Serializes to the plain-text table: header `p n t ℓ construction`,
    /// then one line `r ξ_r a_1 ... a_t` per weight.
    pub fn to_table_string(&self) -> String {
        let mut out = format!(
            "{} {} {} {} {}\n",
            self.p, self.n, self.t, self.dup_length, self.construction
        );
        for (r, entry) in &self.table {
            out.push_str(&format!("{r} {}", entry.modulus));
            for a in &entry.residues {
                out.push_str(&format!(" {a}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`CodeSpec::to_table_string`] output. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse_table(text: &str) -> Result<Self> {
        let (header, rows) = split_table(text)?;
        Self::new(header.0, header.1, header.2, header.3, header.4, rows)
    }

    /// [`CodeSpec::parse_table`] without the prime/size checks on moduli.
    pub fn parse_table_unchecked(text: &str) -> Result<Self> {
        let (header, rows) = split_table(text)?;
        Self::new_unchecked(header.0, header.1, header.2, header.3, header.4, rows)
    }
}

type Header = (u8, usize, usize, usize, Construction);

fn split_table(text: &str) -> Result<(Header, BTreeMap<usize, ResidueEntry>)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header_line = lines
        .next()
        .ok_or_else(|| Error::TableFormat("missing header".into()))?;
    let fields: Vec<&str> = header_line.split_whitespace().collect();
    if fields.len() != 5 {
        return Err(Error::TableFormat(format!(
            "header needs `p n t l construction`, got {header_line:?}"
        )));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::TableFormat(format!("not an integer: {s:?}")))
    };
    let p = u8::try_from(num(fields[0])?)
        .map_err(|_| Error::TableFormat(format!("alphabet {} too large", fields[0])))?;
    let header = (
        p,
        num(fields[1])?,
        num(fields[2])?,
        num(fields[3])?,
        fields[4].parse()?,
    );
    let mut rows = BTreeMap::new();
    for line in lines {
        let values = line
            .split_whitespace()
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| Error::TableFormat(format!("not an integer: {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != header.2 + 2 {
            return Err(Error::TableFormat(format!(
                "row {line:?} should hold r, ξ and {} residues",
                header.2
            )));
        }
        let r = values[0] as usize;
        let entry = ResidueEntry {
            modulus: values[1],
            residues: values[2..].to_vec(),
        };
        if rows.insert(r, entry).is_some() {
            return Err(Error::TableFormat(format!("duplicate row for weight {r}")));
        }
    }
    Ok((header, rows))
}

fn check_length(x: &Word, spec: &CodeSpec) -> Result<()> {
    if x.len() != spec.n {
        return Err(Error::LengthMismatch {
            expected: spec.n,
            found: x.len(),
        });
    }
    if x.alphabet_size() != spec.p {
        return Err(Error::AlphabetMismatch {
            expected: spec.p,
            found: x.alphabet_size(),
        });
    }
    Ok(())
}

/// `x ∈ C¹`: the derivative of `φ(x)` lies in the checksum code of its weight.
pub fn c1_membership(x: &Word, spec: &CodeSpec) -> Result<bool> {
    check_length(x, spec)?;
    let image = phi(x, spec.dup_length)?;
    let z = image.derivative();
    let entry = spec.entry(z.hamming_weight())?;
    Ok(checksum_vector(z, spec.dup_length, spec.t, entry.modulus) == entry.residues)
}

/// `x ∈ C²`: `π(x)` lies in `C_{2,t,1}(r+w, r, a_r, ξ_r)` for its root weight `r`.
pub fn c2_membership(x: &Word, spec: &CodeSpec) -> Result<bool> {
    check_length(x, spec)?;
    let profile = profile_map(x, spec.dup_length)?;
    let entry = spec.entry(profile.weight())?;
    Ok(checksum_vector(&profile.pi, 1, spec.t, entry.modulus) == entry.residues)
}

/// All codewords, in lexicographic order. Walks `Z_p^n`, so `p^n` must fit the budget.
pub fn enumerate_code(spec: &CodeSpec, budget: u64) -> Result<Vec<Word>> {
    let space = (spec.p as u64)
        .checked_pow(spec.n as u32)
        .unwrap_or(u64::MAX);
    if space > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut out = Vec::new();
    for x in Word::all(spec.p, spec.n)? {
        if spec.contains(&x)? {
            out.push(x);
        }
    }
    Ok(out)
}

fn lower_bound_value(p: u32, n: usize, value: BigRational, formula: BoundFormula) -> BoundValue {
    BoundValue::new(value, p, n, BoundKind::Lower, formula)
}

/// `p^ℓ Σ_{r=0}^{n-ℓ} C(n-ℓ, r) (p-1)^r / (2 max(t, r))^t`.
pub fn c1_size_lower_bound(p: u32, n: usize, t: usize, dup_length: usize) -> Result<BoundValue> {
    check_params(p, n, dup_length)?;
    if t == 0 {
        return Ok(lower_bound_value(
            p,
            n,
            integer(pow_big(p as u64, n)),
            BoundFormula::Trivial,
        ));
    }
    let m = n - dup_length;
    let binom = Binomials::up_to(m);
    let mut sum = BigRational::zero();
    for r in 0..=m {
        let num = binom.get(m, r) * pow_big(p as u64 - 1, r);
        sum += ratio(num, pow_big(2 * t.max(r) as u64, t));
    }
    let value = sum * integer(pow_big(p as u64, dup_length));
    Ok(lower_bound_value(p, n, value, BoundFormula::Construction1))
}

/// `p^ℓ Σ_w Σ_r N_{p,ℓ}(n-(w+1)ℓ, r) C(r+w, w) / (2 max(r, t) + 1)^t`.
pub fn c2_size_lower_bound(p: u32, n: usize, t: usize, dup_length: usize) -> Result<BoundValue> {
    check_params(p, n, dup_length)?;
    if t == 0 {
        return Ok(lower_bound_value(
            p,
            n,
            integer(pow_big(p as u64, n)),
            BoundFormula::Trivial,
        ));
    }
    let l = dup_length;
    let counts = BoundedRunCounts::new(p, l, n - l);
    let binom = Binomials::up_to(n);
    let mut per_weight = vec![BigUint::zero(); n - l + 1];
    for w in 0..n / l {
        let root_len = n - (w + 1) * l;
        for (r, slot) in per_weight.iter_mut().enumerate().take(root_len + 1) {
            *slot += counts.get(root_len, r) * binom.get(r + w, w);
        }
    }
    let mut sum = BigRational::zero();
    for (r, total) in per_weight.into_iter().enumerate() {
        if !total.is_zero() {
            sum += ratio(total, pow_big(2 * r.max(t) as u64 + 1, t));
        }
    }
    let value = sum * integer(pow_big(p as u64, l));
    Ok(lower_bound_value(p, n, value, BoundFormula::Construction2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::phi_inverse;
    use crate::word::PhiImage;

    fn w(p: u8, s: &[u8]) -> Word {
        Word::new(p, s.to_vec()).unwrap()
    }

    /// Brute-force class sizes: bucket every weight-r word by its checksum.
    fn brute_classes(
        p: u8,
        n: usize,
        t: usize,
        l: usize,
        r: usize,
        xi: u64,
    ) -> BTreeMap<Vec<u64>, u64> {
        let mut out = BTreeMap::new();
        for z in Word::all(p, n).unwrap().filter(|z| z.hamming_weight() == r) {
            *out.entry(checksum_vector(&z, l, t, xi)).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn checksum_examples() {
        assert_eq!(checksum_vector(&w(3, &[0, 1, 0, 0, 2]), 1, 1, 5), vec![0]);
        // b = (1, 2, 0): q=1 gives 1 + 2*2 = 5, q=2 gives 1 + 4*2 = 9 = 2 (mod 7)
        assert_eq!(
            checksum_vector(&w(3, &[0, 1, 0, 0, 2]), 1, 2, 7),
            vec![5, 2]
        );
        assert_eq!(
            checksum_vector(&w(2, &[0, 1, 0, 1, 1, 0]), 2, 3, 5),
            vec![0, 0, 0]
        );
    }

    #[test]
    fn block_insertion_shifts_checksum() {
        let (t, xi) = (3, 7u64);
        for l in 1..=3 {
            for z in Word::all(3, 5).unwrap() {
                let base = checksum_vector(&z, l, t, xi);
                let prof = zero_run_decompose(&z);
                for run in 0..prof.runs.len() {
                    let mut bumped = prof.clone();
                    bumped.runs[run] += l;
                    let zz = bumped.reassemble(3).unwrap();
                    let moved = checksum_vector(&zz, l, t, xi);
                    for q in 0..t {
                        let shift = mod_pow(run as u64 + 1, q as u64 + 1, xi);
                        assert_eq!(moved[q], (base[q] + shift) % xi);
                    }
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let params = ChecksumParams::new(3, 5, 1, 1, 2, vec![0], 5).unwrap();
        assert!(is_member_checksum(&w(3, &[0, 1, 0, 0, 2]), &params).unwrap());
        assert!(!is_member_checksum(&w(3, &[0, 1, 0, 0, 0]), &params).unwrap());
        assert!(is_member_checksum(&w(3, &[0, 1, 0]), &params).is_err());

        // all-zero word: single run of length n, checksum ⌊n/ℓ⌋ per component
        for n in 0..10 {
            for l in 1..=3 {
                let z = Word::zeros(2, n).unwrap();
                for a in 0..3 {
                    let params = ChecksumParams::new(2, n, 2, l, 0, vec![a, a], 3).unwrap();
                    let expect = (n / l) as u64 % 3 == a;
                    assert_eq!(is_member_checksum(&z, &params).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn checksum_params_validation() {
        assert!(ChecksumParams::new(2, 5, 1, 1, 2, vec![0], 2).is_err());
        assert!(ChecksumParams::new(2, 5, 1, 1, 2, vec![0], 4).is_err());
        assert!(ChecksumParams::new(2, 5, 2, 1, 2, vec![0], 3).is_err());
        assert!(ChecksumParams::new(2, 5, 1, 1, 2, vec![3], 3).is_err());
        assert!(ChecksumParams::new(2, 5, 1, 1, 6, vec![0], 7).is_err());
        assert!(ChecksumParams::new(2, 5, 1, 1, 2, vec![2], 3).is_ok());
    }

    #[test]
    fn valid_primes() {
        assert_eq!(smallest_valid_prime(1, 2), 3);
        assert_eq!(smallest_valid_prime(3, 0), 5);
        assert_eq!(smallest_valid_prime(2, 10), 11);
        for t in 1..6 {
            for r in 0..60 {
                let xi = smallest_valid_prime(t, r) as usize;
                assert!(xi > t.max(r) && xi <= 2 * t.max(r));
            }
        }
    }

    #[test]
    fn class_sizes_match_brute_force() {
        for (p, n, t, l) in [
            (2u8, 7, 1, 1),
            (2, 8, 2, 2),
            (3, 6, 1, 2),
            (2, 9, 2, 3),
            (3, 5, 2, 1),
        ] {
            for r in 0..=n {
                let xi = smallest_valid_prime(t, r);
                let sizes = checksum_class_sizes(p, n, t, l, r, xi, DEFAULT_BUDGET).unwrap();
                let brute = brute_classes(p, n, t, l, r, xi);
                for (k, size) in sizes.iter().enumerate() {
                    let a = decode(k, t, xi);
                    let expect = brute.get(&a).copied().unwrap_or(0);
                    assert_eq!(*size, BigUint::from(expect), "p={p} n={n} r={r} a={a:?}");
                }
            }
        }
    }

    #[test]
    fn best_residue_examples() {
        let zero = best_residues(2, 6, 1, 1, 0, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(zero.size, BigUint::from(1u32));
        assert_eq!(
            zero.residues,
            checksum_vector(&Word::zeros(2, 6).unwrap(), 1, 1, 2)
        );

        let choice = best_residues(2, 6, 1, 1, 2, 3, DEFAULT_BUDGET).unwrap();
        assert!(choice.size >= BigUint::from(5u32));
        let brute = brute_classes(2, 6, 1, 1, 2, 3);
        let max = *brute.values().max().unwrap();
        assert_eq!(choice.size, BigUint::from(max));
        let first_max = brute.iter().find(|(_, &v)| v == max).unwrap().0;
        assert_eq!(&choice.residues, first_max);
    }

    #[test]
    fn classes_partition_the_shell_and_pigeonhole() {
        let binom = Binomials::up_to(20);
        for (p, n, t, l) in [(2u8, 10, 1, 1), (3, 8, 2, 2), (2, 12, 3, 3)] {
            for r in 0..=n {
                let xi = smallest_valid_prime(t, r);
                let sizes = checksum_class_sizes(p, n, t, l, r, xi, DEFAULT_BUDGET).unwrap();
                let total: BigUint = sizes.iter().sum();
                assert_eq!(total, binom.get(n, r) * pow_big(p as u64 - 1, r));
                let best = argmax(&sizes, t, xi);
                assert!(best.size.clone() * pow_big(xi, t) >= total);
            }
        }
    }

    #[test]
    fn budget_guard_on_residue_search() {
        assert!(matches!(
            best_residues(2, 60, 3, 1, 30, 31, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn c1_prefix_is_free() {
        let spec = CodeSpec::optimal(2, 6, 1, 2, Construction::C1, DEFAULT_BUDGET).unwrap();
        for x in Word::all(2, 6).unwrap() {
            let image = phi(&x, 2).unwrap();
            let member = c1_membership(&x, &spec).unwrap();
            for y in Word::all(2, 2).unwrap() {
                let other = phi_inverse(&PhiImage::new(y, image.derivative().clone(), 2).unwrap());
                assert_eq!(c1_membership(&other, &spec).unwrap(), member);
            }
        }
    }

    #[test]
    fn c1_enumeration_meets_lower_bound() {
        let spec = CodeSpec::optimal(2, 6, 1, 2, Construction::C1, DEFAULT_BUDGET).unwrap();
        let code = enumerate_code(&spec, DEFAULT_BUDGET).unwrap();
        let lb = c1_size_lower_bound(2, 6, 1, 2).unwrap();
        assert!(integer(code.len().into()) >= lb.cardinality);
        assert_eq!(
            spec.counted_size(DEFAULT_BUDGET).unwrap(),
            code.len().into()
        );
    }

    #[test]
    fn counted_size_matches_enumeration() {
        for construction in [Construction::C1, Construction::C2] {
            for (p, n, t, l) in [(2u8, 8, 1, 3), (2, 8, 1, 2), (3, 6, 1, 1), (2, 9, 2, 2)] {
                let spec = CodeSpec::optimal(p, n, t, l, construction, DEFAULT_BUDGET).unwrap();
                let code = enumerate_code(&spec, DEFAULT_BUDGET).unwrap();
                assert_eq!(
                    spec.counted_size(DEFAULT_BUDGET).unwrap(),
                    code.len().into(),
                    "{construction} p={p} n={n} t={t} l={l}"
                );
            }
        }
    }

    #[test]
    fn c2_irreducible_words() {
        let spec = CodeSpec::with_zero_residues(2, 8, 1, 2, Construction::C2).unwrap();
        for x in Word::all(2, 8).unwrap() {
            let prof = profile_map(&x, 2).unwrap();
            if prof.excess_blocks() == 0 {
                assert!(c2_membership(&x, &spec).unwrap());
            }
        }
    }

    #[test]
    fn c2_enumeration_meets_lower_bound() {
        let spec = CodeSpec::optimal(2, 8, 1, 2, Construction::C2, DEFAULT_BUDGET).unwrap();
        let code = enumerate_code(&spec, DEFAULT_BUDGET).unwrap();
        let lb = c2_size_lower_bound(2, 8, 1, 2).unwrap();
        assert!(integer(code.len().into()) >= lb.cardinality);
    }

    #[test]
    fn degenerate_length_contains_everything() {
        for construction in [Construction::C1, Construction::C2] {
            let spec = CodeSpec::optimal(3, 2, 1, 2, construction, DEFAULT_BUDGET).unwrap();
            assert_eq!(enumerate_code(&spec, DEFAULT_BUDGET).unwrap().len(), 9);
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(
            c1_size_lower_bound(2, 2, 1, 1).unwrap().cardinality,
            integer(2u32.into())
        );
        // single w=0, r=0 term
        let (p, n, t, l) = (2u32, 7, 2, 3);
        let term = ratio(
            BoundedRunCounts::new(p, l, n).get(n - l, 0) * pow_big(p as u64, l),
            pow_big(2 * t as u64 + 1, t),
        );
        assert!(c2_size_lower_bound(p, n, t, l).unwrap().cardinality >= term);
    }

    #[test]
    fn lower_bounds_below_upper_bound() {
        for n in 4..=40 {
            for t in 1..=3 {
                let cf = crate::bounds::sp_bound_closed_form(2, n, t, 3)
                    .unwrap()
                    .cardinality;
                assert!(c1_size_lower_bound(2, n, t, 3).unwrap().cardinality <= cf);
                assert!(c2_size_lower_bound(2, n, t, 3).unwrap().cardinality <= cf);
            }
        }
    }

    #[test]
    fn table_round_trip_and_errors() {
        let spec = CodeSpec::optimal(2, 7, 2, 1, Construction::C2, DEFAULT_BUDGET).unwrap();
        let text = spec.to_table_string();
        assert!(text.starts_with("2 7 2 1 c2\n"));
        assert_eq!(CodeSpec::parse_table(&text).unwrap(), spec);
        let commented = format!("# cached\n\n{text}");
        assert_eq!(CodeSpec::parse_table(&commented).unwrap(), spec);

        assert!(CodeSpec::parse_table("").is_err());
        assert!(CodeSpec::parse_table("2 7 1 1\n").is_err());
        assert!(CodeSpec::parse_table("2 7 1 1 c3\n").is_err());
        assert!(CodeSpec::parse_table("2 7 1 1 c1\n0 2 0 0\n").is_err());
        assert!(CodeSpec::parse_table("2 7 1 1 c1\n0 2 0\n0 2 1\n").is_err());
        // modulus 2 is not above max(t, r) = 3
        assert!(CodeSpec::parse_table("2 7 1 1 c1\n3 2 0\n").is_err());
        assert!(CodeSpec::parse_table_unchecked("2 7 1 1 c1\n3 2 0\n").is_ok());
    }

    #[test]
    fn missing_entry_is_reported() {
        let spec = CodeSpec::new(2, 5, 1, 1, Construction::C1, BTreeMap::new()).unwrap();
        assert_eq!(
            spec.contains(&w(2, &[0, 1, 1, 0, 1])),
            Err(Error::MissingTableEntry { weight: 3 })
        );
        assert!(spec.contains(&w(2, &[0, 1])).is_err());
    }
}
