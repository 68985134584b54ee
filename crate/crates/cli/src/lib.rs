//! Batch commands behind the `tdcodes` binary: bound tables, code
//! enumeration and verification, channel simulation and batch decoding.
//! Every command returns its CSV text together with a pass/fail verdict.
use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdcodes::bounds::{
    redundancy_lower_bound, sp_bound_closed_form, sp_bound_partition_sum, sp_bound_roots,
};
use tdcodes::channel::{duplication_ball_with_budget, sample_channel_with, ChannelMode};
use tdcodes::codes::{
    c1_size_lower_bound, c2_size_lower_bound, checksum_vector, enumerate_code, CodeSpec,
    Construction, DEFAULT_BUDGET,
};
use tdcodes::decoder::{decode, power_sum_positions};
use tdcodes::word::{phi_inverse, zero_run_decompose, PhiImage, Word};
use tdcodes::{DecodeError, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bounds,
    Enumerate,
    Verify,
    Simulate,
    Decode,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub p: u8,
    pub t: usize,
    pub dup_length: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub construction: Construction,
    pub seed: u64,
    pub trials: u64,
    pub budget: u64,
    pub residue_table: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    /// Accept residue tables whose moduli break the code conditions.
    pub allow_invalid_table: bool,
    /// Duplications applied by the simulated channel; defaults to `t`.
    pub channel_t: Option<usize>,
    pub channel_mode: ChannelMode,
    /// Words to decode; stdin when absent.
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, p: u8, t: usize, dup_length: usize, n: usize) -> Self {
        RunConfig {
            command,
            p,
            t,
            dup_length,
            n_min: n,
            n_max: n,
            construction: Construction::C1,
            seed: 0,
            trials: 1,
            budget: DEFAULT_BUDGET,
            residue_table: None,
            output_path: None,
            allow_invalid_table: false,
            channel_t: None,
            channel_mode: ChannelMode::UpToT,
            input: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.p >= 2, "alphabet size must be at least 2");
        ensure!(
            self.dup_length >= 1,
            "duplication length must be at least 1"
        );
        ensure!(
            self.n_min <= self.n_max,
            "empty length range {}..={}",
            self.n_min,
            self.n_max
        );
        ensure!(
            self.n_min >= self.dup_length,
            "lengths must be at least the duplication length {}",
            self.dup_length
        );
        ensure!(self.budget >= 1, "budget must be at least 1");
        if self.command == Command::Simulate {
            ensure!(self.trials >= 1, "simulate needs at least one trial");
        }
        Ok(())
    }

    fn lengths(&self) -> std::ops::RangeInclusive<usize> {
        self.n_min..=self.n_max
    }
}

/// CSV text plus the command's verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub csv: String,
    pub passed: bool,
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    match config.command {
        Command::Bounds => cmd_bounds(config),
        Command::Enumerate => cmd_enumerate(config),
        Command::Verify => cmd_verify(config),
        Command::Simulate => cmd_simulate(config),
        Command::Decode => {
            let text = match &config.input {
                Some(path) => fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?,
                None => {
                    let mut text = String::new();
                    std::io::stdin().read_to_string(&mut text)?;
                    text
                }
            };
            cmd_decode(config, &text)
        }
    }
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

pub const BOUNDS_HEADER: [&str; 7] = [
    "n",
    "sp_partition_sum",
    "sp_closed_form",
    "sp_roots",
    "redundancy_lower_bound",
    "c1_lower_bound",
    "c2_lower_bound",
];

/// Redundancies of every bound at one length.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub n: usize,
    pub sp_partition_sum: f64,
    pub sp_closed_form: f64,
    pub sp_roots: f64,
    pub redundancy_lower_bound: f64,
    pub c1_lower_bound: f64,
    pub c2_lower_bound: f64,
    /// `roots ≤ partition sum ≤ closed form` as exact rationals.
    pub chain_holds: bool,
}

pub fn bounds_rows(config: &RunConfig) -> Result<Vec<BoundsRow>> {
    let (p, t, l) = (config.p as u32, config.t, config.dup_length);
    config
        .lengths()
        .map(|n| {
            let partition = sp_bound_partition_sum(p, n, t, l)?;
            let closed = sp_bound_closed_form(p, n, t, l)?;
            let roots = sp_bound_roots(p, n, t, l)?;
            Ok(BoundsRow {
                n,
                chain_holds: roots.cardinality <= partition.cardinality
                    && partition.cardinality <= closed.cardinality,
                sp_partition_sum: partition.redundancy,
                sp_closed_form: closed.redundancy,
                sp_roots: roots.redundancy,
                redundancy_lower_bound: redundancy_lower_bound(p, n, t, l)?,
                c1_lower_bound: c1_size_lower_bound(p, n, t, l)?.redundancy,
                c2_lower_bound: c2_size_lower_bound(p, n, t, l)?.redundancy,
            })
        })
        .collect()
}

pub fn cmd_bounds(config: &RunConfig) -> Result<Outcome> {
    let rows = bounds_rows(config)?;
    let passed = rows.iter().all(|r| r.chain_holds);
    let records = rows
        .iter()
        .map(|r| {
            let mut rec = vec![r.n.to_string()];
            rec.extend(
                [
                    r.sp_partition_sum,
                    r.sp_closed_form,
                    r.sp_roots,
                    r.redundancy_lower_bound,
                    r.c1_lower_bound,
                    r.c2_lower_bound,
                ]
                .iter()
                .map(|v| v.to_string()),
            );
            rec
        })
        .collect();
    Ok(Outcome {
        csv: csv_text(&BOUNDS_HEADER, records)?,
        passed,
    })
}

/// File holding the cached residue table for one code, next to `out`.
pub fn table_cache_path(
    out: &Path,
    config: &RunConfig,
    n: usize,
    construction: Construction,
) -> PathBuf {
    let name = format!(
        "residues-p{}-n{n}-t{}-l{}-{construction}.txt",
        config.p, config.t, config.dup_length
    );
    out.parent().unwrap_or(Path::new("")).join(name)
}

fn load_table(path: &Path, allow_invalid: bool) -> Result<CodeSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = if allow_invalid {
        CodeSpec::parse_table_unchecked(&text)
    } else {
        CodeSpec::parse_table(&text)
    };
    spec.with_context(|| format!("parsing residue table {}", path.display()))
}

/// The code for length `n`: the supplied table, a cached table beside the
/// output, or a fresh residue search (cached when an output path is set).
pub fn code_spec(config: &RunConfig, n: usize, construction: Construction) -> Result<CodeSpec> {
    if let Some(path) = &config.residue_table {
        let spec = load_table(path, config.allow_invalid_table)?;
        ensure!(
            spec.alphabet_size() == config.p
                && spec.len() == n
                && spec.radius() == config.t
                && spec.dup_length() == config.dup_length
                && spec.construction() == construction,
            "residue table {} describes p={} n={} t={} l={} {}, expected p={} n={n} t={} l={} {construction}",
            path.display(),
            spec.alphabet_size(),
            spec.len(),
            spec.radius(),
            spec.dup_length(),
            spec.construction(),
            config.p,
            config.t,
            config.dup_length,
        );
        return Ok(spec);
    }
    let cache = config
        .output_path
        .as_ref()
        .map(|out| table_cache_path(out, config, n, construction));
    if let Some(path) = cache.as_ref().filter(|path| path.exists()) {
        return load_table(path, false);
    }
    let spec = CodeSpec::optimal(
        config.p,
        n,
        config.t,
        config.dup_length,
        construction,
        config.budget,
    )?;
    if let Some(path) = cache {
        fs::write(&path, spec.to_table_string())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(spec)
}

pub fn cmd_enumerate(config: &RunConfig) -> Result<Outcome> {
    let mut rows = Vec::new();
    for n in config.lengths() {
        let spec = code_spec(config, n, config.construction)?;
        for c in enumerate_code(&spec, config.budget)? {
            rows.push(vec![
                n.to_string(),
                config.construction.to_string(),
                c.to_string(),
            ]);
        }
    }
    Ok(Outcome {
        csv: csv_text(&["n", "construction", "codeword"], rows)?,
        passed: true,
    })
}

pub const VERIFY_HEADER: [&str; 10] = [
    "n",
    "construction",
    "size",
    "c1_size",
    "c2_size",
    "ball_words",
    "collisions",
    "decode_failures",
    "result",
    "counterexample",
];

/// Outcome of the exhaustive check of one code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub n: usize,
    pub construction: Construction,
    pub size: usize,
    pub ball_words: usize,
    pub collisions: usize,
    pub decode_failures: usize,
    /// First colliding pair and a word in both balls.
    pub collision: Option<(Word, Word, Word)>,
    /// First ball member that did not decode to its center.
    pub decode_failure: Option<(Word, Word, String)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.collisions == 0 && self.decode_failures == 0
    }

    pub fn counterexample(&self) -> String {
        if let Some((a, b, v)) = &self.collision {
            format!("{a} and {b} both reach {v}")
        } else if let Some((c, v, why)) = &self.decode_failure {
            format!("{v} from {c}: {why}")
        } else {
            String::new()
        }
    }
}

/// Enumerates the code, checks that the `t`-balls are pairwise disjoint and
/// that every ball member decodes to its center.
pub fn verify_code(spec: &CodeSpec, budget: u64) -> Result<VerifyReport> {
    let (t, l) = (spec.radius(), spec.dup_length());
    let codewords = enumerate_code(spec, budget)?;
    let mut owner: BTreeMap<Word, usize> = BTreeMap::new();
    let mut report = VerifyReport {
        n: spec.len(),
        construction: spec.construction(),
        size: codewords.len(),
        ball_words: 0,
        collisions: 0,
        decode_failures: 0,
        collision: None,
        decode_failure: None,
    };
    for (index, c) in codewords.iter().enumerate() {
        let ball = duplication_ball_with_budget(c, t, l, budget)?;
        report.ball_words += ball.len();
        for v in ball.members {
            let verdict = match decode(&v, spec) {
                Ok(d) if &d == c => None,
                Ok(d) => Some(format!("decoded to {d}")),
                Err(e) => Some(e.to_string()),
            };
            if let Some(why) = verdict {
                report.decode_failures += 1;
                report
                    .decode_failure
                    .get_or_insert((c.clone(), v.clone(), why));
            }
            if let Some(&other) = owner.get(&v) {
                report.collisions += 1;
                report
                    .collision
                    .get_or_insert((codewords[other].clone(), c.clone(), v.clone()));
            } else {
                owner.insert(v, index);
            }
        }
    }
    Ok(report)
}

pub fn cmd_verify(config: &RunConfig) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut passed = true;
    for n in config.lengths() {
        let spec = code_spec(config, n, config.construction)?;
        let report = verify_code(&spec, config.budget)?;
        let mut sizes = BTreeMap::new();
        sizes.insert(config.construction, report.size.to_string());
        for other in [Construction::C1, Construction::C2] {
            if other != config.construction {
                let size = CodeSpec::optimal(
                    config.p,
                    n,
                    config.t,
                    config.dup_length,
                    other,
                    config.budget,
                )?
                .counted_size(config.budget)?;
                sizes.insert(other, size.to_string());
            }
        }
        passed &= report.passed();
        rows.push(vec![
            n.to_string(),
            config.construction.to_string(),
            report.size.to_string(),
            sizes[&Construction::C1].clone(),
            sizes[&Construction::C2].clone(),
            report.ball_words.to_string(),
            report.collisions.to_string(),
            report.decode_failures.to_string(),
            if report.passed() { "pass" } else { "fail" }.to_string(),
            report.counterexample(),
        ]);
    }
    Ok(Outcome {
        csv: csv_text(&VERIFY_HEADER, rows)?,
        passed,
    })
}

/// Draws a codeword of `spec`: a random derivative `h` zero blocks short,
/// with `h` uniform in `0..=t`, is completed by `h` blocks whose runs solve
/// the first `h` checksum equations, and kept if the whole word is a
/// codeword.
pub fn sample_codeword<R: Rng + ?Sized>(spec: &CodeSpec, rng: &mut R, budget: u64) -> Result<Word> {
    let (p, n, t, l) = (
        spec.alphabet_size(),
        spec.len(),
        spec.radius(),
        spec.dup_length(),
    );
    let random_word = |rng: &mut R, len: usize| {
        Word::new(p, (0..len).map(|_| rng.gen_range(0..p)).collect()).expect("symbols below p")
    };
    let max_blocks = t.min((n - l) / l);
    for _ in 0..budget {
        let h = rng.gen_range(0..=max_blocks);
        let prefix = random_word(rng, l);
        let short = random_word(rng, n - l - h * l);
        let mut profile = zero_run_decompose(&short);
        let entry = spec.entry(profile.weight())?;
        let xi = entry.modulus;
        let target: Vec<u64> = checksum_vector(&short, l, t, xi)
            .iter()
            .zip(&entry.residues)
            .map(|(c, a)| (a % xi + xi - c) % xi)
            .collect();
        let cap = profile.runs.len().min(xi as usize);
        let positions = match power_sum_positions(&target, h, xi, cap) {
            Ok(positions) => positions,
            Err(Error::Decode(DecodeError::PositionRecoveryFailed { .. })) => continue,
            Err(e) => return Err(e.into()),
        };
        for run in positions {
            profile.runs[run - 1] += l;
        }
        let z = profile.reassemble(p)?;
        let x = phi_inverse(&PhiImage::new(prefix, z, l)?);
        if spec.contains(&x)? {
            return Ok(x);
        }
    }
    bail!("no codeword found within {budget} attempts")
}

pub const SIMULATE_HEADER: [&str; 15] = [
    "n",
    "construction",
    "trials",
    "channel_t",
    "mode",
    "successes",
    "failures",
    "success_rate",
    "length_inconsistent",
    "too_many_insertions",
    "position_recovery_failed",
    "run_underflow",
    "residual_checksum",
    "miscorrected",
    "other_errors",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimulationCounts {
    pub successes: u64,
    pub length_inconsistent: u64,
    pub too_many_insertions: u64,
    pub position_recovery_failed: u64,
    pub run_underflow: u64,
    pub residual_checksum: u64,
    pub miscorrected: u64,
    pub other_errors: u64,
}

impl SimulationCounts {
    fn record(&mut self, sent: &Word, result: tdcodes::Result<Word>) {
        match result {
            Ok(d) if &d == sent => self.successes += 1,
            Ok(_) => self.miscorrected += 1,
            Err(Error::Decode(e)) => match e {
                DecodeError::LengthInconsistent { .. } => self.length_inconsistent += 1,
                DecodeError::TooManyInsertions { .. } => self.too_many_insertions += 1,
                DecodeError::PositionRecoveryFailed { .. } => self.position_recovery_failed += 1,
                DecodeError::RunUnderflow { .. } => self.run_underflow += 1,
                DecodeError::ResidualChecksum => self.residual_checksum += 1,
            },
            Err(_) => self.other_errors += 1,
        }
    }
}

/// Sends `trials` random codewords through the channel and decodes them.
pub fn simulate_code(
    spec: &CodeSpec,
    trials: u64,
    channel_t: usize,
    mode: ChannelMode,
    seed: u64,
    budget: u64,
) -> Result<SimulationCounts> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = SimulationCounts::default();
    for _ in 0..trials {
        let c = sample_codeword(spec, &mut rng, budget)?;
        let received = sample_channel_with(&c, channel_t, spec.dup_length(), mode, &mut rng)?;
        counts.record(&c, decode(&received, spec));
    }
    Ok(counts)
}

pub fn cmd_simulate(config: &RunConfig) -> Result<Outcome> {
    let channel_t = config.channel_t.unwrap_or(config.t);
    let mode = match config.channel_mode {
        ChannelMode::ExactlyT => "exact",
        ChannelMode::UpToT => "up-to",
    };
    let mut rows = Vec::new();
    let mut passed = true;
    for n in config.lengths() {
        let spec = code_spec(config, n, config.construction)?;
        let seed = config.seed.wrapping_add(n as u64);
        let counts = simulate_code(
            &spec,
            config.trials,
            channel_t,
            config.channel_mode,
            seed,
            config.budget,
        )?;
        let failures = config.trials - counts.successes;
        if channel_t <= config.t {
            passed &= failures == 0;
        }
        let rate = counts.successes as f64 / config.trials as f64;
        rows.push(vec![
            n.to_string(),
            config.construction.to_string(),
            config.trials.to_string(),
            channel_t.to_string(),
            mode.to_string(),
            counts.successes.to_string(),
            failures.to_string(),
            rate.to_string(),
            counts.length_inconsistent.to_string(),
            counts.too_many_insertions.to_string(),
            counts.position_recovery_failed.to_string(),
            counts.run_underflow.to_string(),
            counts.residual_checksum.to_string(),
            counts.miscorrected.to_string(),
            counts.other_errors.to_string(),
        ]);
    }
    Ok(Outcome {
        csv: csv_text(&SIMULATE_HEADER, rows)?,
        passed,
    })
}

/// Decodes one word per non-empty line of `text` against the code of length
/// `n_min`.
pub fn cmd_decode(config: &RunConfig, text: &str) -> Result<Outcome> {
    ensure!(
        config.n_min == config.n_max,
        "decode needs a single code length, got {}..={}",
        config.n_min,
        config.n_max
    );
    let spec = code_spec(config, config.n_min, config.construction)?;
    let mut rows = Vec::new();
    let mut passed = true;
    for line in text.lines().map(str::trim).filter(|line| !line.is_empty()) {
        let received = Word::parse(config.p, line)?;
        let (decoded, status) = match decode(&received, &spec) {
            Ok(c) => (c.to_string(), "ok".to_string()),
            Err(e) => {
                passed = false;
                (String::new(), e.to_string())
            }
        };
        rows.push(vec![received.to_string(), decoded, status]);
    }
    Ok(Outcome {
        csv: csv_text(&["received", "decoded", "status"], rows)?,
        passed,
    })
}
