//! Word algebra over `Z_p`.
//!
//! A tandem duplication of length `ℓ` copies a length-`ℓ` factor and inserts
//! the copy right after the original. Under the lag-`ℓ` difference map
//! [`phi`] such a duplication becomes an insertion of `ℓ` consecutive zeros
//! into the derivative, which is what every construction in this crate builds
//! on. The zero runs of the derivative are exposed through
//! [`zero_run_decompose`], the duplication root through [`duplication_root`]
//! and the binary run-count profile through [`profile_map`].

use std::fmt;

use crate::error::{Error, Result};

/// A finite word over the alphabet `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    p: u8,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(p: u8, symbols: Vec<u8>) -> Result<Self> {
        check_alphabet(p)?;
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= p) {
            return Err(Error::InvalidSymbol { symbol, p });
        }
        Ok(Word { p, symbols })
    }

    /// Builds a word without checking symbols. Callers guarantee `s < p`.
    pub(crate) fn from_raw(p: u8, symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < p));
        Word { p, symbols }
    }

    pub fn zeros(p: u8, len: usize) -> Result<Self> {
        check_alphabet(p)?;
        Ok(Word::from_raw(p, vec![0; len]))
    }

    /// All `p^len` words of the given length in lexicographic order.
    pub fn all(p: u8, len: usize) -> Result<AllWords> {
        check_alphabet(p)?;
        Ok(AllWords {
            p,
            next: Some(vec![0; len]),
        })
    }

    /// Parses either contiguous digits (`"0120"`, alphabets up to 10) or a
    /// list separated by whitespace, commas or dots (`"3 11 0"`).
    pub fn parse(p: u8, text: &str) -> Result<Self> {
        let text = text.trim();
        let separated = text.contains(|c: char| c.is_whitespace() || c == ',' || c == '.');
        let symbols = if separated {
            text.split(|c: char| c.is_whitespace() || c == ',' || c == '.')
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    tok.parse::<u8>()
                        .map_err(|_| Error::InvalidParams(format!("bad symbol {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::InvalidParams(format!("bad symbol {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Word::new(p, symbols)
    }

    pub fn alphabet_size(&self) -> u8 {
        self.p
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn hamming_weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word::from_raw(self.p, self.symbols[..len.min(self.len())].to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
        } else {
            for (k, s) in self.symbols.iter().enumerate() {
                if k > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// Iterator over every word of a fixed length, see [`Word::all`].
pub struct AllWords {
    p: u8,
    next: Option<Vec<u8>>,
}

impl Iterator for AllWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carry = true;
        for s in succ.iter_mut().rev() {
            if *s + 1 < self.p {
                *s += 1;
                carry = false;
                break;
            }
            *s = 0;
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(Word::from_raw(self.p, current))
    }
}

fn check_alphabet(p: u8) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidAlphabet(p as u32));
    }
    Ok(())
}

fn check_dup_length(x: &Word, dup_length: usize) -> Result<()> {
    if dup_length == 0 {
        return Err(Error::ZeroDupLength);
    }
    if x.len() < dup_length {
        return Err(Error::TooShort {
            len: x.len(),
            dup_length,
        });
    }
    Ok(())
}

/// Image of a word under [`phi`]: its first `ℓ` symbols and its lag-`ℓ`
/// derivative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhiImage {
    prefix: Word,
    derivative: Word,
    dup_length: usize,
}

impl PhiImage {
    pub fn new(prefix: Word, derivative: Word, dup_length: usize) -> Result<Self> {
        if dup_length == 0 {
            return Err(Error::ZeroDupLength);
        }
        if prefix.len() != dup_length {
            return Err(Error::ProfileMismatch(format!(
                "prefix has length {} but duplication length is {dup_length}",
                prefix.len()
            )));
        }
        if prefix.p != derivative.p {
            return Err(Error::AlphabetMismatch {
                expected: prefix.p,
                found: derivative.p,
            });
        }
        Ok(PhiImage {
            prefix,
            derivative,
            dup_length,
        })
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn derivative(&self) -> &Word {
        &self.derivative
    }

    pub fn dup_length(&self) -> usize {
        self.dup_length
    }

    pub fn into_parts(self) -> (Word, Word) {
        (self.prefix, self.derivative)
    }
}

/// Maximal zero runs of a word: `z = 0^{b_1} u_1 0^{b_2} ... u_r 0^{b_{r+1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroRunProfile {
    /// `b_1, ..., b_{r+1}`; always one longer than `letters`.
    pub runs: Vec<usize>,
    /// The non-zero letters `u_1, ..., u_r`.
    pub letters: Vec<u8>,
}

impl ZeroRunProfile {
    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn word_len(&self) -> usize {
        self.runs.iter().sum::<usize>() + self.letters.len()
    }

    /// Inverse of [`zero_run_decompose`].
    pub fn reassemble(&self, p: u8) -> Result<Word> {
        if self.runs.len() != self.letters.len() + 1 {
            return Err(Error::ProfileMismatch(format!(
                "{} runs for {} letters",
                self.runs.len(),
                self.letters.len()
            )));
        }
        let mut symbols = Vec::with_capacity(self.word_len());
        for (k, &run) in self.runs.iter().enumerate() {
            symbols.extend(std::iter::repeat_n(0, run));
            if let Some(&u) = self.letters.get(k) {
                if u == 0 {
                    return Err(Error::ProfileMismatch("zero letter in run profile".into()));
                }
                symbols.push(u);
            }
        }
        Word::new(p, symbols)
    }
}

/// `τ_ℓ(x, i)`: writes `x = u v w` with `|u| = i`, `|v| = ℓ` and returns `u v v w`.
pub fn tandem_duplicate(x: &Word, position: usize, dup_length: usize) -> Result<Word> {
    check_dup_length(x, dup_length)?;
    let max = x.len() - dup_length;
    if position > max {
        return Err(Error::PositionOutOfRange { position, max });
    }
    let split = position + dup_length;
    let mut symbols = Vec::with_capacity(x.len() + dup_length);
    symbols.extend_from_slice(&x.symbols[..split]);
    symbols.extend_from_slice(&x.symbols[position..split]);
    symbols.extend_from_slice(&x.symbols[split..]);
    Ok(Word::from_raw(x.p, symbols))
}

/// Splits `x` into its length-`ℓ` prefix and the derivative
/// `z_i = x_{i+ℓ} - x_i (mod p)`, `i = 1..|x|-ℓ`.
pub fn phi(x: &Word, dup_length: usize) -> Result<PhiImage> {
    check_dup_length(x, dup_length)?;
    let p = x.p;
    let s = &x.symbols;
    let derivative = (0..s.len() - dup_length)
        .map(|i| (s[i + dup_length] + p - s[i]) % p)
        .collect();
    Ok(PhiImage {
        prefix: x.prefix(dup_length),
        derivative: Word::from_raw(p, derivative),
        dup_length,
    })
}

pub fn phi_inverse(image: &PhiImage) -> Word {
    let p = image.prefix.p;
    let l = image.dup_length;
    let mut symbols = Vec::with_capacity(l + image.derivative.len());
    symbols.extend_from_slice(&image.prefix.symbols);
    for (j, &dz) in image.derivative.symbols.iter().enumerate() {
        let next = (symbols[j] + dz) % p;
        symbols.push(next);
    }
    Word::from_raw(p, symbols)
}

pub fn zero_run_decompose(z: &Word) -> ZeroRunProfile {
    let mut runs = Vec::with_capacity(z.hamming_weight() + 1);
    let mut letters = Vec::with_capacity(z.hamming_weight());
    let mut run = 0;
    for &s in &z.symbols {
        if s == 0 {
            run += 1;
        } else {
            runs.push(run);
            letters.push(s);
            run = 0;
        }
    }
    runs.push(run);
    ZeroRunProfile { runs, letters }
}

/// The `ℓ`-duplication root `μ(x)`: every derivative zero run is reduced
/// modulo `ℓ`, then mapped back through [`phi_inverse`] with the original
/// prefix. The result contains no tandem repeat of length `ℓ`.
pub fn duplication_root(x: &Word, dup_length: usize) -> Result<Word> {
    let image = phi(x, dup_length)?;
    let mut profile = zero_run_decompose(&image.derivative);
    for b in profile.runs.iter_mut() {
        *b %= dup_length;
    }
    let reduced = profile.reassemble(x.p)?;
    Ok(phi_inverse(&PhiImage {
        prefix: image.prefix,
        derivative: reduced,
        dup_length,
    }))
}

/// The triple `T(x) = (y, μ(x), π(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    pub prefix: Word,
    pub root: Word,
    /// Binary word `0^{⌊b_1/ℓ⌋} 1 0^{⌊b_2/ℓ⌋} 1 ... 1 0^{⌊b_{r+1}/ℓ⌋}`.
    pub pi: Word,
}

impl Profile {
    /// Number of ones in `pi`, equal to the derivative weight of the root.
    pub fn weight(&self) -> usize {
        self.pi.hamming_weight()
    }

    /// Number of zeros in `pi`, i.e. how many `ℓ`-blocks sit on top of the root.
    pub fn excess_blocks(&self) -> usize {
        self.pi.len() - self.pi.hamming_weight()
    }
}

pub fn profile_map(x: &Word, dup_length: usize) -> Result<Profile> {
    let image = phi(x, dup_length)?;
    let profile = zero_run_decompose(&image.derivative);
    let mut pi = Vec::with_capacity(profile.weight() + image.derivative.len() / dup_length);
    for (k, &b) in profile.runs.iter().enumerate() {
        pi.extend(std::iter::repeat_n(0, b / dup_length));
        if k < profile.weight() {
            pi.push(1);
        }
    }
    Ok(Profile {
        root: duplication_root(x, dup_length)?,
        prefix: image.prefix,
        pi: Word::from_raw(2, pi),
    })
}

/// Inverse of [`profile_map`]: rebuilds the unique word with the given
/// prefix, root and binary profile.
pub fn reconstruct_from_profile(
    prefix: &Word,
    root: &Word,
    pi: &Word,
    dup_length: usize,
) -> Result<Word> {
    if prefix.len() != dup_length {
        return Err(Error::ProfileMismatch(format!(
            "prefix has length {} but duplication length is {dup_length}",
            prefix.len()
        )));
    }
    if prefix.p != root.p {
        return Err(Error::AlphabetMismatch {
            expected: prefix.p,
            found: root.p,
        });
    }
    if pi.symbols.iter().any(|&s| s > 1) {
        return Err(Error::ProfileMismatch("pi must be binary".into()));
    }
    let image = phi(root, dup_length)?;
    if image.prefix != *prefix {
        return Err(Error::ProfileMismatch(
            "root does not start with the prefix".into(),
        ));
    }
    let mut profile = zero_run_decompose(&image.derivative);
    if profile.runs.iter().any(|&b| b >= dup_length) {
        return Err(Error::ProfileMismatch("root is not irreducible".into()));
    }
    let blocks = zero_run_decompose(&Word::from_raw(2, pi.symbols.clone()));
    if blocks.weight() != profile.weight() {
        return Err(Error::ProfileMismatch(format!(
            "pi has {} ones but the root derivative has weight {}",
            blocks.weight(),
            profile.weight()
        )));
    }
    for (b, k) in profile.runs.iter_mut().zip(&blocks.runs) {
        *b += k * dup_length;
    }
    let derivative = profile.reassemble(prefix.p)?;
    Ok(phi_inverse(&PhiImage {
        prefix: prefix.clone(),
        derivative,
        dup_length,
    }))
}
