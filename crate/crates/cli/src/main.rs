use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rns_ckks::ckks::*;
use rns_ckks::cost::{self, ParamProfile, Report};
use rns_ckks::hdft::Variant;
use rns_ckks::selftest::{self, SelftestConfig};
use rns_ckks::serial;

mod bench;

#[derive(Parser)]
#[command(
    name = "rns-ckks",
    version,
    about = "RNS-CKKS pipeline, transform variants and cost model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every invariant check; nonzero exit on any failure
    Selftest(SelftestArgs),
    /// Encrypted IDFT then DFT at desk scale, plus the analytic cost comparison
    Hdft(HdftArgs),
    /// Plaintext, ciphertext and key sizes of the parameter profiles
    Sizes(SizesArgs),
    /// Generate and serialize a key set and a sample ciphertext
    Keygen(KeygenArgs),
    /// Wall-clock timings of the main kernels
    Bench(BenchArgs),
}

#[derive(Args)]
struct Common {
    /// parameter file (TOML); the desk set when absent
    #[arg(long)]
    params: Option<PathBuf>,
    /// RNG seed; defaults to the one in the parameter set
    #[arg(long)]
    seed: Option<u64>,
    /// write tab-separated records here
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn params(&self) -> Result<CkksParams> {
        Ok(match &self.params {
            Some(p) => CkksParams::load(p)?,
            None => CkksParams::desk(),
        })
    }

    fn seed(&self, params: &CkksParams) -> u64 {
        self.seed.unwrap_or(params.seed)
    }
}

#[derive(Args)]
struct SelftestArgs {
    #[command(flatten)]
    common: Common,
    /// random trials per scheme check
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// serialized object to validate; repeatable
    #[arg(long)]
    fixture: Vec<PathBuf>,
}

#[derive(Args)]
struct HdftArgs {
    #[command(flatten)]
    common: Common,
    /// one variant; all three when absent
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Variant>,
    /// profile for the analytic comparison
    #[arg(long, default_value = "ark")]
    profile: String,
    /// skip the encrypted run
    #[arg(long)]
    analytic_only: bool,
    /// slot count override
    #[arg(long)]
    n: Option<usize>,
    /// log2 of the radix
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    dnum: Option<usize>,
}

#[derive(Args)]
struct SizesArgs {
    #[command(flatten)]
    common: Common,
    /// one profile; the four reference rows with checks when absent
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    dnum: Option<usize>,
    #[arg(long)]
    word_bytes: Option<usize>,
}

#[derive(Args)]
struct KeygenArgs {
    #[command(flatten)]
    common: Common,
    /// rotation amounts to generate keys for
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [1i64, 2, 5])]
    rotations: Vec<i64>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    /// repetitions per kernel
    #[arg(long, default_value_t = 5)]
    reps: usize,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    Variant::parse(s).map_err(|e| e.to_string())
}

fn profile(name: &str, params: &CkksParams) -> Result<ParamProfile> {
    if name == "desk" {
        return Ok(ParamProfile::from_params("desk", params));
    }
    Ok(ParamProfile::by_name(name)?)
}

fn emit(report: &Report, out: Option<&Path>) -> Result<ExitCode> {
    print!("{}", report.to_text());
    if let Some(path) = out {
        serial::write_file(path, report.to_records().as_bytes())?;
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn selftest_cmd(a: &SelftestArgs) -> Result<ExitCode> {
    let params = a.common.params()?;
    let cfg = SelftestConfig {
        seed: a.common.seed(&params),
        params,
        trials: a.trials,
        fixtures: a.fixture.clone(),
    };
    let report = selftest::run(&cfg)?;
    emit(&report, a.common.out.as_deref())
}

fn hdft_cmd(a: &HdftArgs) -> Result<ExitCode> {
    let mut params = a.common.params()?;
    if let Some(n) = a.n {
        params.slots = n;
    }
    if let Some(d) = a.dnum {
        params.dnum = d;
    }
    params.validate()?;
    let mut report = Report::new();
    if !a.analytic_only {
        let ctx = CkksContext::new(params.clone())?;
        let variants = match a.variant {
            Some(v) => vec![v],
            None => Variant::ALL.to_vec(),
        };
        report.extend(selftest::hdft_report(&ctx, a.k, &variants, a.common.seed(&params))?);
    }
    report.extend(cost::intensity_report(&profile(&a.profile, &params)?)?);
    emit(&report, a.common.out.as_deref())
}

fn sizes_cmd(a: &SizesArgs) -> Result<ExitCode> {
    let report = match (&a.profile, a.dnum, a.word_bytes) {
        (None, None, None) => cost::sizes_report(),
        (name, dnum, word) => {
            let params = a.common.params()?;
            let mut p = profile(name.as_deref().unwrap_or("desk"), &params)?;
            if let Some(d) = dnum {
                p = p.with_dnum(d)?;
            }
            if let Some(w) = word {
                p.word_bytes = w;
            }
            cost::profile_sizes(&p)
        }
    };
    emit(&report, a.common.out.as_deref())
}

fn keygen_cmd(a: &KeygenArgs) -> Result<ExitCode> {
    let params = a.common.params()?;
    let Some(dir) = &a.common.out else {
        bail!("keygen needs --out <directory>");
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let ctx = CkksContext::new(params.clone())?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.common.seed(&params));
    let keys = keygen(&ctx, &a.rotations, &mut rng);
    let msg: Vec<_> = (0..ctx.slots())
        .map(|i| num_complex::Complex64::new(i as f64 / ctx.slots() as f64, 0.0))
        .collect();
    let ct = encrypt(
        &ctx,
        &encode(&ctx, &msg, params.scale(), ctx.max_level())?,
        &keys.secret,
        &mut rng,
    );
    let mut files = vec![
        ("params.toml".to_string(), params.to_toml().into_bytes()),
        ("secret.key".into(), keys.secret.to_bytes()),
        ("mult.evk".into(), keys.mult.to_bytes()),
        ("sample.ct".into(), ct.to_bytes()),
    ];
    for &r in &a.rotations {
        files.push((format!("rot{r}.evk"), keys.rotations.get(r, ctx.degree())?.to_bytes()));
    }
    let mut t = cost::Table::new(&format!("key set in {}", dir.display()), &["file", "bytes"]);
    for (name, bytes) in &files {
        serial::write_file(&dir.join(name), bytes)?;
        t.row(vec![name.clone(), bytes.len().to_string()]);
    }
    let mut report = Report::new();
    report.tables.push(t);
    emit(&report, None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Selftest(a) => selftest_cmd(a),
        Command::Hdft(a) => hdft_cmd(a),
        Command::Sizes(a) => sizes_cmd(a),
        Command::Keygen(a) => keygen_cmd(a),
        Command::Bench(a) => a.common.params().and_then(|p| {
            let seed = a.common.seed(&p);
            emit(&bench::run(p, a.reps, seed)?, a.common.out.as_deref())
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
