//! Monte-Carlo BER harness.
//!
//! A sweep walks a grid of (SNR, SHE count) points. At each point it runs
//! independent trials (random payload, encode, channel, decode, count errors)
//! until enough bit errors are collected or the trial cap is hit. Every trial
//! draws from its own ChaCha8 stream derived from the master seed, the grid
//! index and the trial index, and trials are folded in index order, so the
//! records do not depend on thread count or batch size.
//!
//! Configuration is a flat `key = value` file; `#` starts a comment.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::channel::{transmit, ChannelSpec};
use crate::error::{Error, Result};
use crate::gf::GfElement;
use crate::ldpc::LdpcCode;
use crate::permdec::{enumerate_automorphisms, permutation_decode, AutomorphismSet, DecoderParams, SoftImage};
use crate::product::{EdaRule, PdaParams, PdaStatus, ProductCode, SoftArray};
use crate::rscode::RsCode;

#[derive(Debug, Clone, PartialEq)]
pub enum CodeSelect {
    /// RS(31, 29) × PG(2, 32).
    Cpg,
    /// RS over GF(2^m) × PG(2, 2^s).
    Product { m: u32, s: u32 },
    /// Random 4-cycle-free LDPC code, SPA decoded.
    RandomLdpc { n: usize, k: usize, col_weight: usize, seed: u64 },
    /// A single RS binary image, permutation decoded.
    Rs { m: u32 },
}

impl CodeSelect {
    pub fn id(&self) -> String {
        match self {
            CodeSelect::Cpg => "cpg".into(),
            CodeSelect::Product { m, s } => format!("product-m{m}-s{s}"),
            CodeSelect::RandomLdpc { n, k, col_weight, seed } => {
                format!("random-ldpc-n{n}-k{k}-w{col_weight}-s{seed}")
            }
            CodeSelect::Rs { m } => format!("rs-m{m}"),
        }
    }

    /// Parses the identifiers produced by [`id`](Self::id).
    pub fn parse_id(id: &str) -> Result<CodeSelect> {
        let bad = || Error::Config(format!("unknown code id '{id}'"));
        let num = |p: &str, prefix: char| -> Result<u64> {
            p.strip_prefix(prefix).and_then(|v| v.parse().ok()).ok_or_else(bad)
        };
        if id == "cpg" {
            return Ok(CodeSelect::Cpg);
        }
        let parts: Vec<&str> = id.split('-').collect();
        match parts.as_slice() {
            ["product", m, s] => Ok(CodeSelect::Product {
                m: num(m, 'm')? as u32,
                s: num(s, 's')? as u32,
            }),
            ["rs", m] => Ok(CodeSelect::Rs { m: num(m, 'm')? as u32 }),
            ["random", "ldpc", n, k, w, s] => Ok(CodeSelect::RandomLdpc {
                n: num(n, 'n')? as usize,
                k: num(k, 'k')? as usize,
                col_weight: num(w, 'w')? as usize,
                seed: num(s, 's')?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Decoder for product codes. LDPC-only codes always use SPA and RS-only
/// codes always use the permutation decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Pda,
    SpaOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub code: CodeSelect,
    pub decoder: DecoderKind,
    pub snr_db: Vec<f64>,
    pub she_count: Vec<usize>,
    pub she_amplitude: f64,
    pub pda: PdaParams,
    pub min_errors: u64,
    pub max_trials: u64,
    /// Trials dispatched per parallel batch.
    pub batch: usize,
    pub seed: u64,
    pub out: Option<String>,
}

impl Default for SimConfig {
    fn default() -> SimConfig {
        SimConfig {
            code: CodeSelect::Cpg,
            decoder: DecoderKind::Pda,
            snr_db: vec![5.0],
            she_count: vec![0],
            she_amplitude: 1.5,
            pda: PdaParams::default(),
            min_errors: 100,
            max_trials: 1000,
            batch: 16,
            seed: 1,
            out: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("bad value '{v}' for '{key}'")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

fn fmt_list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

impl SimConfig {
    pub fn parse(text: &str) -> Result<SimConfig> {
        let mut cfg = SimConfig::default();
        let mut code = "cpg".to_string();
        let (mut m, mut s) = (5u32, 5u32);
        let (mut n, mut k, mut wc, mut lseed) = (511usize, 368usize, 4usize, 1u64);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, val) = (key.trim(), val.trim());
            match key {
                "code" => code = val.to_string(),
                "m" => m = parse_value(key, val)?,
                "s" => s = parse_value(key, val)?,
                "n" => n = parse_value(key, val)?,
                "k" => k = parse_value(key, val)?,
                "col_weight" => wc = parse_value(key, val)?,
                "ldpc_seed" => lseed = parse_value(key, val)?,
                "decoder" => {
                    cfg.decoder = match val {
                        "pda" => DecoderKind::Pda,
                        "spa-only" => DecoderKind::SpaOnly,
                        _ => return Err(Error::Config(format!("unknown decoder '{val}'"))),
                    }
                }
                "snr_db" => cfg.snr_db = parse_list(key, val)?,
                "she_count" => cfg.she_count = parse_list(key, val)?,
                "she_amplitude" => cfg.she_amplitude = parse_value(key, val)?,
                "eta" => cfg.pda.eta = parse_value(key, val)?,
                "outer_rounds" => cfg.pda.outer_rounds = parse_value(key, val)?,
                "hard_rounds" => cfg.pda.hard_rounds = parse_value(key, val)?,
                "spa_max_iter" => cfg.pda.spa_max_iter = parse_value(key, val)?,
                "mlg_max_iter" => cfg.pda.mlg_max_iter = parse_value(key, val)?,
                "eda_rule" => {
                    cfg.pda.eda_rule = match val {
                        "intersection" => EdaRule::FailedIntersection,
                        "exclude-satisfied" => EdaRule::ExcludeSatisfied,
                        _ => return Err(Error::Config(format!("unknown eda_rule '{val}'"))),
                    }
                }
                "stage_guard" => cfg.pda.stage_guard = parse_value(key, val)?,
                "min_errors" => cfg.min_errors = parse_value(key, val)?,
                "max_trials" => cfg.max_trials = parse_value(key, val)?,
                "batch" => cfg.batch = parse_value(key, val)?,
                "seed" => cfg.seed = parse_value(key, val)?,
                "out" => cfg.out = Some(val.to_string()),
                _ => return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1))),
            }
        }
        cfg.code = match code.as_str() {
            "cpg" => CodeSelect::Cpg,
            "product" => CodeSelect::Product { m, s },
            "random-ldpc" => CodeSelect::RandomLdpc {
                n,
                k,
                col_weight: wc,
                seed: lseed,
            },
            "rs" => CodeSelect::Rs { m },
            _ => return Err(Error::Config(format!("unknown code '{code}'"))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.snr_db.is_empty() || self.she_count.is_empty() {
            return fail("snr_db and she_count need at least one value");
        }
        if self.snr_db.iter().any(|v| !v.is_finite()) {
            return fail("snr_db values must be finite");
        }
        if !(self.she_amplitude > 0.0 && self.she_amplitude.is_finite()) {
            return fail("she_amplitude must be positive");
        }
        if self.min_errors == 0 || self.max_trials == 0 || self.batch == 0 {
            return fail("min_errors, max_trials and batch must be positive");
        }
        Ok(())
    }

    /// Canonical `key = value` form; parses back to an equal config.
    pub fn to_config_string(&self) -> String {
        let mut s = String::from("# snr_db = 10 log10(1/sigma^2), unit-energy BPSK, bit 0 -> +1\n");
        match &self.code {
            CodeSelect::Cpg => s.push_str("code = cpg\n"),
            CodeSelect::Product { m, s: g } => {
                let _ = write!(s, "code = product\nm = {m}\ns = {g}\n");
            }
            CodeSelect::RandomLdpc { n, k, col_weight, seed } => {
                let _ = write!(
                    s,
                    "code = random-ldpc\nn = {n}\nk = {k}\ncol_weight = {col_weight}\nldpc_seed = {seed}\n"
                );
            }
            CodeSelect::Rs { m } => {
                let _ = write!(s, "code = rs\nm = {m}\n");
            }
        }
        let decoder = match self.decoder {
            DecoderKind::Pda => "pda",
            DecoderKind::SpaOnly => "spa-only",
        };
        let rule = match self.pda.eda_rule {
            EdaRule::FailedIntersection => "intersection",
            EdaRule::ExcludeSatisfied => "exclude-satisfied",
        };
        let p = &self.pda;
        let _ = write!(
            s,
            "decoder = {decoder}\nsnr_db = {}\nshe_count = {}\nshe_amplitude = {}\n\
             eta = {}\nouter_rounds = {}\nhard_rounds = {}\nspa_max_iter = {}\nmlg_max_iter = {}\n\
             eda_rule = {rule}\nstage_guard = {}\nmin_errors = {}\nmax_trials = {}\nbatch = {}\nseed = {}\n",
            fmt_list(&self.snr_db),
            fmt_list(&self.she_count),
            self.she_amplitude,
            p.eta,
            p.outer_rounds,
            p.hard_rounds,
            p.spa_max_iter,
            p.mlg_max_iter,
            p.stage_guard,
            self.min_errors,
            self.max_trials,
            self.batch,
            self.seed,
        );
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {out}");
        }
        s
    }

    /// SNR-major grid.
    pub fn grid(&self) -> Vec<GridPoint> {
        self.snr_db
            .iter()
            .flat_map(|&snr_db| {
                self.she_count.iter().map(move |&she_count| GridPoint {
                    snr_db,
                    she_count,
                    she_amplitude: self.she_amplitude,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub snr_db: f64,
    pub she_count: usize,
    pub she_amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameStatus {
    Clean,
    Corrected,
    ResidualErrors,
}

/// Everything a trial produces except timing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub bits: u64,
    pub bit_errors: u64,
    pub status: FrameStatus,
    pub spa_iterations: usize,
    pub hard_rounds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub outcome: TrialOutcome,
    pub elapsed: Duration,
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::standard().inverse_cdf(0.975);
    let (kf, nf) = (k as f64, n as f64);
    let p = kf / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub snr_db: f64,
    pub she_count: usize,
    pub she_amplitude: f64,
    pub code_id: String,
    pub bits: u64,
    pub bit_errors: u64,
    pub frames: u64,
    pub frame_errors: u64,
    pub seed: u64,
}

impl BerRecord {
    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits as f64
        }
    }

    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.frame_errors as f64 / self.frames as f64
        }
    }

    /// Wilson interval on the BER.
    pub fn ci(&self) -> (f64, f64) {
        wilson_interval(self.bit_errors, self.bits)
    }
}

pub const CSV_HEADER: [&str; 13] = [
    "snr_db",
    "she_count",
    "she_amplitude",
    "code_id",
    "bits",
    "bit_errors",
    "ber",
    "frames",
    "frame_errors",
    "fer",
    "ci_low",
    "ci_high",
    "seed",
];

pub fn write_csv<W: Write>(records: &[BerRecord], w: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        let (lo, hi) = r.ci();
        wr.write_record([
            r.snr_db.to_string(),
            r.she_count.to_string(),
            r.she_amplitude.to_string(),
            r.code_id.clone(),
            r.bits.to_string(),
            r.bit_errors.to_string(),
            format!("{:.6e}", r.ber()),
            r.frames.to_string(),
            r.frame_errors.to_string(),
            format!("{:.6e}", r.fer()),
            format!("{lo:.6e}"),
            format!("{hi:.6e}"),
            r.seed.to_string(),
        ])
        .map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Io(e.to_string()))
}

enum SimCode {
    Product(Box<ProductCode>),
    Ldpc(LdpcCode),
    Rs(RsCode, AutomorphismSet),
}

pub struct Simulator {
    cfg: SimConfig,
    code: SimCode,
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Simulator> {
        cfg.validate()?;
        let code = match &cfg.code {
            CodeSelect::Cpg => SimCode::Product(Box::new(ProductCode::c_pg())),
            CodeSelect::Product { m, s } => SimCode::Product(Box::new(ProductCode::with_pg(*m, *s)?)),
            CodeSelect::RandomLdpc { n, k, col_weight, seed } => {
                SimCode::Ldpc(LdpcCode::random(*n, *k, *col_weight, *seed)?)
            }
            CodeSelect::Rs { m } => {
                let rs = RsCode::new(*m)?;
                let autos = enumerate_automorphisms(&rs);
                SimCode::Rs(rs, autos)
            }
        };
        Ok(Simulator { cfg, code })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// Code bits per frame.
    pub fn frame_bits(&self) -> usize {
        match &self.code {
            SimCode::Product(p) => p.length(),
            SimCode::Ldpc(c) => c.n(),
            SimCode::Rs(rs, _) => rs.m() * rs.n(),
        }
    }

    pub fn product(&self) -> Option<&ProductCode> {
        match &self.code {
            SimCode::Product(p) => Some(p),
            _ => None,
        }
    }

    fn trial_rng(&self, grid_index: usize, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(((grid_index as u64) << 32) | (trial & 0xffff_ffff));
        rng
    }

    /// One encode, channel, decode pass. Deterministic in
    /// (master seed, grid index, trial index).
    pub fn run_trial(&self, grid_index: usize, point: &GridPoint, trial: u64) -> Result<TrialResult> {
        let start = Instant::now();
        let mut rng = self.trial_rng(grid_index, trial);
        let spec = ChannelSpec::new(point.snr_db, point.she_count, point.she_amplitude, self.cfg.seed)?;
        let outcome = match &self.code {
            SimCode::Product(p) => {
                let payload: Vec<u8> = (0..p.payload_bits()).map(|_| rng.random_range(0..2)).collect();
                let tx = p.encode(&payload)?;
                let rx = transmit(tx.as_flat(), &spec, &mut rng)?;
                let soft = SoftArray::new(p.n2(), p.n1(), rx.llr);
                let (out, status, spa_iterations, hard_rounds) = match self.cfg.decoder {
                    DecoderKind::Pda => {
                        let o = p.pda(&soft, &self.cfg.pda);
                        let status = match o.status {
                            PdaStatus::Clean => FrameStatus::Clean,
                            PdaStatus::Corrected => FrameStatus::Corrected,
                            PdaStatus::ResidualErrors => FrameStatus::ResidualErrors,
                        };
                        (o.array, status, o.stats.spa_iterations, o.stats.hard_rounds)
                    }
                    DecoderKind::SpaOnly => {
                        let clean = p.is_codeword(&soft.hard_decision());
                        let o = p.spa_only(&soft, self.cfg.pda.spa_max_iter);
                        let status = if clean {
                            FrameStatus::Clean
                        } else if p.is_codeword(&o) {
                            FrameStatus::Corrected
                        } else {
                            FrameStatus::ResidualErrors
                        };
                        (o, status, 0, 0)
                    }
                };
                TrialOutcome {
                    bits: tx.as_flat().len() as u64,
                    bit_errors: out.hamming_distance(&tx) as u64,
                    status,
                    spa_iterations,
                    hard_rounds,
                }
            }
            SimCode::Ldpc(c) => {
                let info: Vec<u8> = (0..c.k()).map(|_| rng.random_range(0..2)).collect();
                let tx = c.encode(&info)?;
                let rx = transmit(&tx, &spec, &mut rng)?;
                let clean = c.is_codeword(&crate::channel::demap(&rx.samples));
                let o = c.spa_decode(&rx.llr, self.cfg.pda.spa_max_iter);
                TrialOutcome {
                    bits: tx.len() as u64,
                    bit_errors: o.bits.iter().zip(&tx).filter(|(a, b)| a != b).count() as u64,
                    status: if clean {
                        FrameStatus::Clean
                    } else if o.converged {
                        FrameStatus::Corrected
                    } else {
                        FrameStatus::ResidualErrors
                    },
                    spa_iterations: o.iterations,
                    hard_rounds: 0,
                }
            }
            SimCode::Rs(rs, autos) => {
                let q = rs.n() as u8 + 1;
                let info: Vec<GfElement> = (0..rs.k()).map(|_| GfElement(rng.random_range(0..q))).collect();
                let img = rs.to_binary_image(&rs.encode(&info)?);
                let rx = transmit(img.as_flat(), &spec, &mut rng)?;
                let y = SoftImage::new(rs.m(), rs.n(), rx.llr);
                let clean = rs.is_codeword(&rs.from_binary_image(&y.hard_decision()));
                let o = permutation_decode(
                    rs,
                    &y,
                    &DecoderParams {
                        eta: self.cfg.pda.eta,
                        automorphisms: autos,
                    },
                );
                TrialOutcome {
                    bits: img.as_flat().len() as u64,
                    bit_errors: o.image.as_flat().iter().zip(img.as_flat()).filter(|(a, b)| a != b).count()
                        as u64,
                    status: if clean {
                        FrameStatus::Clean
                    } else if !o.failed {
                        FrameStatus::Corrected
                    } else {
                        FrameStatus::ResidualErrors
                    },
                    spa_iterations: 0,
                    hard_rounds: 0,
                }
            }
        };
        Ok(TrialResult {
            outcome,
            elapsed: start.elapsed(),
        })
    }

    /// Trials at one grid point until `min_errors` bit errors or `max_trials`.
    pub fn run_point(&self, grid_index: usize, point: &GridPoint) -> Result<BerRecord> {
        let mut rec = BerRecord {
            snr_db: point.snr_db,
            she_count: point.she_count,
            she_amplitude: point.she_amplitude,
            code_id: self.cfg.code.id(),
            bits: 0,
            bit_errors: 0,
            frames: 0,
            frame_errors: 0,
            seed: self.cfg.seed,
        };
        let mut next = 0u64;
        while rec.frames < self.cfg.max_trials && rec.bit_errors < self.cfg.min_errors {
            let end = (next + self.cfg.batch as u64).min(self.cfg.max_trials);
            let batch: Vec<TrialResult> = (next..end)
                .into_par_iter()
                .map(|t| self.run_trial(grid_index, point, t))
                .collect::<Result<_>>()?;
            for r in batch {
                if rec.bit_errors >= self.cfg.min_errors {
                    break;
                }
                rec.frames += 1;
                rec.bits += r.outcome.bits;
                rec.bit_errors += r.outcome.bit_errors;
                rec.frame_errors += (r.outcome.bit_errors > 0) as u64;
            }
            next = end;
        }
        Ok(rec)
    }

    pub fn sweep(&self) -> Result<Vec<BerRecord>> {
        self.sweep_with(|_| {})
    }

    /// Like [`sweep`](Self::sweep), calling `progress` after each grid point.
    pub fn sweep_with(&self, mut progress: impl FnMut(&BerRecord)) -> Result<Vec<BerRecord>> {
        let mut out = Vec::new();
        for (i, p) in self.cfg.grid().iter().enumerate() {
            let rec = self.run_point(i, p)?;
            progress(&rec);
            out.push(rec);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let text = "# demo\ncode = product\nm = 3\ns = 3\nsnr_db = 4, 5.5\nshe_count = 0,10\n\
                    eda_rule = exclude-satisfied\nstage_guard = false\nseed = 9\nout = x.csv\n";
        let cfg = SimConfig::parse(text).unwrap();
        assert_eq!(cfg.code, CodeSelect::Product { m: 3, s: 3 });
        assert_eq!(cfg.snr_db, vec![4.0, 5.5]);
        assert_eq!(cfg.she_count, vec![0, 10]);
        assert_eq!(cfg.pda.eda_rule, EdaRule::ExcludeSatisfied);
        assert!(!cfg.pda.stage_guard);
        assert_eq!(cfg.grid().len(), 4);
        assert_eq!(SimConfig::parse(&cfg.to_config_string()).unwrap(), cfg);
    }

    #[test]
    fn config_errors() {
        for bad in [
            "code = turbo",
            "snr_db =",
            "snr_db = 5, x",
            "no equals sign",
            "colour = blue",
            "max_trials = 0",
            "she_amplitude = -1",
            "snr_db = inf",
        ] {
            assert!(matches!(SimConfig::parse(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn code_ids_round_trip() {
        for c in [
            CodeSelect::Cpg,
            CodeSelect::Product { m: 3, s: 3 },
            CodeSelect::Rs { m: 4 },
            CodeSelect::RandomLdpc {
                n: 511,
                k: 368,
                col_weight: 4,
                seed: 2,
            },
        ] {
            assert_eq!(CodeSelect::parse_id(&c.id()).unwrap(), c);
        }
        assert!(CodeSelect::parse_id("product-3-3").is_err());
    }

    #[test]
    fn wilson_brackets() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.036_995).abs() < 1e-5);
        let (lo, hi) = wilson_interval(10, 100);
        assert!((lo - 0.055_229).abs() < 1e-5 && (hi - 0.174_367).abs() < 1e-5);
        let (lo, hi) = wilson_interval(100, 100);
        assert!(lo < 1.0 && hi == 1.0);
    }

    fn small_cfg() -> SimConfig {
        SimConfig {
            code: CodeSelect::Product { m: 3, s: 3 },
            snr_db: vec![3.0],
            she_count: vec![5],
            min_errors: 50,
            max_trials: 12,
            batch: 5,
            ..SimConfig::default()
        }
    }

    #[test]
    fn trials_are_deterministic() {
        let sim = Simulator::new(small_cfg()).unwrap();
        let p = sim.config().grid()[0];
        let a = sim.run_trial(0, &p, 3).unwrap();
        let b = sim.run_trial(0, &p, 3).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.outcome.bits, 511);
    }

    #[test]
    fn noiseless_trial_is_clean() {
        let mut cfg = small_cfg();
        cfg.snr_db = vec![60.0];
        cfg.she_count = vec![0];
        let sim = Simulator::new(cfg).unwrap();
        let p = sim.config().grid()[0];
        let r = sim.run_trial(0, &p, 0).unwrap().outcome;
        assert_eq!((r.bit_errors, r.status), (0, FrameStatus::Clean));
    }

    #[test]
    fn batch_size_does_not_change_records() {
        let a = Simulator::new(small_cfg()).unwrap().sweep().unwrap();
        let b = Simulator::new(SimConfig {
            batch: 1,
            ..small_cfg()
        })
        .unwrap()
        .sweep()
        .unwrap();
        assert_eq!(a, b);
        assert!(a[0].frames <= 12);
    }

    #[test]
    fn single_trial_record() {
        let sim = Simulator::new(SimConfig {
            max_trials: 1,
            ..small_cfg()
        })
        .unwrap();
        let recs = sim.sweep().unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!((recs[0].frames, recs[0].bits), (1, 511));
    }

    #[test]
    fn other_code_families_run() {
        for code in [
            CodeSelect::Rs { m: 3 },
            CodeSelect::RandomLdpc {
                n: 96,
                k: 48,
                col_weight: 3,
                seed: 1,
            },
        ] {
            let sim = Simulator::new(SimConfig {
                code,
                snr_db: vec![6.0],
                she_count: vec![1],
                max_trials: 4,
                ..SimConfig::default()
            })
            .unwrap();
            let recs = sim.sweep().unwrap();
            assert_eq!(recs[0].frames, 4);
            assert_eq!(recs[0].bits, 4 * sim.frame_bits() as u64);
        }
    }

    #[test]
    fn csv_layout() {
        let rec = BerRecord {
            snr_db: 5.0,
            she_count: 300,
            she_amplitude: 1.5,
            code_id: "cpg".into(),
            bits: 1000,
            bit_errors: 10,
            frames: 2,
            frame_errors: 1,
            seed: 7,
        };
        let mut buf = Vec::new();
        write_csv(&[rec], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "5");
        assert_eq!(row[6], "1.000000e-2");
        assert_eq!(row[9], "5.000000e-1");
        assert_eq!(row[12], "7");
        assert!(lines.next().is_none());
    }
}
