//! The `fourierup` command line. [`run`] is the whole program; the binary
//! only forwards process arguments and exits with its return value.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use fourierup_core::fourierup::{
    bilinear_upsample2x, upsample, ChannelMixer, Combine, UpsampleConfig, Variant,
};
use fourierup_core::verify::Theorem;

use crate::bench;
use crate::pnm::{read_pnm, write_pnm};
use crate::raster::{from_tensor, psnr, to_tensor};
use crate::text::{parse_config, parse_mixer};

pub const EXIT_OK: i32 = 0;
/// I/O errors, unreadable inputs, failed checks.
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Keys accepted in a `--config` file; each mirrors the flag of the same name.
pub const CONFIG_KEYS: [&str; 8] = [
    "variant", "in", "out", "combine", "mixer", "theorem", "seed", "sizes",
];

#[derive(Parser, Debug)]
#[command(
    name = "fourierup",
    version,
    about = "Fourier-domain 2x up-sampling of Netpbm images"
)]
struct Cli {
    /// File of key=value lines supplying values for flags not given
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Up-sample a PGM/PPM image by 2 in each dimension
    Upsample(UpsampleArgs),
    /// Run the numerical identity checks and print one report per check
    Verify(VerifyArgs),
    /// Time fft2 against the direct DFT sum
    Bench(BenchArgs),
    /// Print the PSNR in dB between two images of equal shape
    Psnr(PsnrArgs),
}

#[derive(Args, Debug)]
struct UpsampleArgs {
    #[arg(long, value_name = "padding|area|corner|bilinear")]
    variant: Option<String>,
    #[arg(long = "in", value_name = "PATH")]
    input: Option<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// Average the Fourier branch with bilinear up-sampling [default: none]
    #[arg(long, value_name = "avg|none")]
    combine: Option<String>,
    /// Channel mixer weights file [default: identity]
    #[arg(long, value_name = "identity|PATH")]
    mixer: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// [default: all]
    #[arg(long, value_name = "1|2|3|grad|all")]
    theorem: Option<String>,
    /// [default: 1]
    #[arg(long, value_name = "N")]
    seed: Option<String>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated side lengths [default: 64,128,256]
    #[arg(long, value_name = "LIST")]
    sizes: Option<String>,
}

#[derive(Args, Debug)]
struct PsnrArgs {
    a: PathBuf,
    b: PathBuf,
}

enum Failure {
    Usage(String),
    Failed(String),
}

type Outcome = Result<i32, Failure>;

/// Flag values fall back to config values.
struct Settings {
    config: Vec<(String, String)>,
}

impl Settings {
    fn pick(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| {
            self.config
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
        })
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let subcommand = match &cli.command {
        Command::Upsample(_) => "upsample",
        Command::Verify(_) => "verify",
        Command::Bench(_) => "bench",
        Command::Psnr(_) => "psnr",
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let usage = Cli::command()
                .find_subcommand_mut(subcommand)
                .map(|c| c.render_usage().to_string())
                .unwrap_or_default();
            let _ = writeln!(
                err,
                "error: {msg}\n\n{usage}\n\nFor more information, try '--help'."
            );
            EXIT_USAGE
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let config = match &cli.config {
        Some(path) => {
            let text = read_text(path)?;
            let pairs = parse_config(&text)
                .map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
            if let Some((key, _)) = pairs
                .iter()
                .find(|(k, _)| !CONFIG_KEYS.contains(&k.as_str()))
            {
                return Err(Failure::Usage(format!(
                    "unknown key {key:?} in {}",
                    path.display()
                )));
            }
            pairs
        }
        None => Vec::new(),
    };
    let settings = Settings { config };
    match cli.command {
        Command::Upsample(args) => cmd_upsample(args, &settings),
        Command::Verify(args) => cmd_verify(args, &settings, out),
        Command::Bench(args) => cmd_bench(args, &settings, out),
        Command::Psnr(args) => cmd_psnr(args, out),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Failed(format!("cannot read {}: {e}", path.display())))
}

fn read_image(path: &Path) -> Result<crate::pnm::RasterImage, Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::Failed(format!("cannot read {}: {e}", path.display())))?;
    read_pnm(&bytes)
        .map_err(|e| Failure::Failed(format!("{}: {e} (code {})", path.display(), e.code())))
}

enum Mode {
    Fourier(Variant),
    Bilinear,
}

fn parse_mode(s: &str) -> Result<Mode, Failure> {
    Ok(match s {
        "padding" => Mode::Fourier(Variant::Padding),
        "area" => Mode::Fourier(Variant::Area),
        "corner" => Mode::Fourier(Variant::Corner),
        "bilinear" => Mode::Bilinear,
        other => return Err(Failure::Usage(format!("invalid --variant {other:?}"))),
    })
}

fn parse_combine(s: &str) -> Result<Combine, Failure> {
    match s {
        "avg" => Ok(Combine::AverageWithBilinear),
        "none" => Ok(Combine::FourierOnly),
        other => Err(Failure::Usage(format!("invalid --combine {other:?}"))),
    }
}

fn cmd_upsample(args: UpsampleArgs, settings: &Settings) -> Outcome {
    let mode = settings
        .pick(args.variant, "variant")
        .ok_or_else(|| Failure::Usage("missing --variant".into()))?;
    let mode = parse_mode(&mode)?;
    let input = settings
        .pick(args.input, "in")
        .ok_or_else(|| Failure::Usage("missing --in".into()))?;
    let output = settings
        .pick(args.out, "out")
        .ok_or_else(|| Failure::Usage("missing --out".into()))?;
    let combine = parse_combine(
        &settings
            .pick(args.combine, "combine")
            .unwrap_or_else(|| "none".into()),
    )?;
    let mixer = settings
        .pick(args.mixer, "mixer")
        .unwrap_or_else(|| "identity".into());

    let img = read_image(Path::new(&input))?;
    let x = to_tensor(&img);
    let y = match mode {
        Mode::Bilinear => bilinear_upsample2x(&x),
        Mode::Fourier(variant) => {
            let m = if mixer == "identity" {
                ChannelMixer::identity(img.channels())
            } else {
                parse_mixer(&read_text(Path::new(&mixer))?)
                    .map_err(|e| Failure::Failed(format!("{mixer}: {e}")))?
            };
            let cfg = UpsampleConfig::new(variant).with_combine(combine);
            upsample(&x, &m, &cfg).map_err(|e| Failure::Failed(e.to_string()))?
        }
    };
    fs::write(&output, write_pnm(&from_tensor(&y)))
        .map_err(|e| Failure::Failed(format!("cannot write {output}: {e}")))?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs, settings: &Settings, out: &mut dyn Write) -> Outcome {
    let id = settings
        .pick(args.theorem, "theorem")
        .unwrap_or_else(|| "all".into());
    let theorems: &[Theorem] = match id.as_str() {
        "1" => &[Theorem::ZeroInsertion],
        "2" => &[Theorem::AreaInterpolation],
        "3" => &[Theorem::CornerInterpolation],
        "grad" => &[Theorem::Gradient],
        "all" => &Theorem::ALL,
        other => return Err(Failure::Usage(format!("invalid --theorem {other:?}"))),
    };
    let seed = settings
        .pick(args.seed, "seed")
        .unwrap_or_else(|| "1".into());
    let seed: u64 = seed
        .parse()
        .map_err(|_| Failure::Usage(format!("invalid --seed {seed:?}")))?;

    let mut all_passed = true;
    for report in theorems.iter().flat_map(|t| t.run(seed)) {
        all_passed &= report.passed;
        writeln!(out, "{report}").map_err(|e| Failure::Failed(e.to_string()))?;
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_FAILURE })
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&n| n > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Failure::Usage(format!("invalid --sizes {s:?}")))
}

fn cmd_bench(args: BenchArgs, settings: &Settings, out: &mut dyn Write) -> Outcome {
    let sizes = settings
        .pick(args.sizes, "sizes")
        .unwrap_or_else(|| "64,128,256".into());
    let sizes = parse_sizes(&sizes)?;
    let io = |e: std::io::Error| Failure::Failed(e.to_string());
    writeln!(out, "{}", bench::header()).map_err(io)?;
    for side in sizes {
        for t in bench::measure(side) {
            writeln!(out, "{}", t.line()).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_psnr(args: PsnrArgs, out: &mut dyn Write) -> Outcome {
    let a = read_image(&args.a)?;
    let b = read_image(&args.b)?;
    let db = psnr(&a, &b).map_err(|e| Failure::Failed(e.to_string()))?;
    writeln!(out, "{db:.6}").map_err(|e| Failure::Failed(e.to_string()))?;
    Ok(EXIT_OK)
}
