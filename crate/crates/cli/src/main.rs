//! `cac` — cyclotomic matrix tables and the CAC cipher, from the shell.
//!
//! Exit codes: 0 success, 2 parameter error, 3 singular matrix,
//! 4 integrity/format error, 1 anything else (I/O and such).

mod files;
mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use cac_core::cac::{
    self, break_ciphertext, decrypt, encrypt, expand_secret, CipherBlock, MessageBlock, PublicKey,
};
use cac_core::cyclotomy::{
    class_count, cyclotomic_matrix, cyclotomic_matrix_with_stats, equality_table,
    naive_cyclotomic_matrix_with_stats, CyclotomyParams,
};
use cac_core::field::{find_generators, Generator, PrimeModulus};
use cac_core::Error;

use files::{parse_json, to_json_bytes, CipherFile, KeyFile};

#[derive(Parser)]
#[command(
    name = "cac",
    version,
    about = "Cyclotomic matrices and the cipher built on them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the generators of F_p*, one per line, ascending
    Generators {
        #[arg(long)]
        p: u64,
    },
    /// Print the symbolic representative table, or with --generator the
    /// numeric cyclotomic matrix
    Table {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        generator: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a key pair and write both key files
    Keygen {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        public_out: PathBuf,
        #[arg(long)]
        secret_out: PathBuf,
    },
    /// Encrypt a file under a public key
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Treat the input as exactly one unframed e*e block
        #[arg(long)]
        raw_block: bool,
    },
    /// Decrypt a cipher file with a secret key
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        raw_block: bool,
    },
    /// Decrypt a cipher file with the PUBLIC key only, by inverting the
    /// public matrix — no secret required
    Attack {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        raw_block: bool,
    },
    /// Time the class-reduced vs naive matrix construction paths
    Bench {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        reps: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Param(_)) => 2,
            CliError::Core(Error::SingularMatrix(_)) => 3,
            CliError::Core(Error::Integrity(_)) | CliError::Core(Error::Format(_)) => 4,
            CliError::Io(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generators { p } => cmd_generators(p),
        Command::Table {
            l,
            p,
            generator,
            format,
            out,
        } => cmd_table(l, p, generator, format, out),
        Command::Keygen {
            l,
            p,
            seed,
            public_out,
            secret_out,
        } => cmd_keygen(l, p, seed, &public_out, &secret_out),
        Command::Encrypt {
            key,
            input,
            out,
            raw_block,
        } => cmd_encrypt(&key, &input, &out, raw_block),
        Command::Decrypt {
            key,
            input,
            out,
            raw_block,
        } => cmd_decrypt(&key, &input, &out, raw_block),
        Command::Attack {
            key,
            input,
            out,
            raw_block,
        } => cmd_attack(&key, &input, &out, raw_block),
        Command::Bench { l, p, reps, out } => cmd_bench(l, p, reps, out),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_generators(p: u64) -> Result<(), CliError> {
    let modulus = PrimeModulus::from_u64(p)?;
    for g in find_generators(&modulus) {
        println!("{}", g.value());
    }
    Ok(())
}

fn cmd_table(
    l: u64,
    p: u64,
    generator: Option<u64>,
    format: OutputFormat,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let params = CyclotomyParams::from_primes(l, p)?;
    let text = match generator {
        Some(g) => {
            let g = Generator::new(BigUint::from(g), params.modulus())?;
            let m = cyclotomic_matrix(&g, &params);
            match format {
                OutputFormat::Csv => render::matrix_csv(&m),
                OutputFormat::Json => render::matrix_json(&m),
            }
        }
        None => {
            let t = equality_table(&params);
            match format {
                OutputFormat::Csv => render::rep_table_csv(&t),
                OutputFormat::Json => render::rep_table_json(&t),
            }
        }
    };
    emit(out.as_ref(), &text)
}

fn cmd_keygen(
    l: u64,
    p: u64,
    seed: u64,
    public_out: &PathBuf,
    secret_out: &PathBuf,
) -> Result<(), CliError> {
    let pair = cac::keygen(l, p, seed)?;
    let public_bytes = to_json_bytes(&KeyFile::from_public(&pair.public));
    let secret_bytes = to_json_bytes(&KeyFile::from_secret(&pair.public, &pair.secret));
    fs::write(public_out, &public_bytes)?;
    fs::write(secret_out, &secret_bytes)?;
    let digest = Sha256::digest(&public_bytes);
    println!("wrote public key to {}", public_out.display());
    println!("wrote secret key to {}", secret_out.display());
    println!("public key fingerprint: sha256:{}", hex_string(&digest));
    Ok(())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn load_public(path: &PathBuf) -> Result<PublicKey, CliError> {
    let bytes = fs::read(path)?;
    let file: KeyFile = parse_json(&bytes, "key file")?;
    Ok(file.to_public()?)
}

fn load_cipher_blocks(path: &PathBuf, pk: &PublicKey) -> Result<Vec<CipherBlock>, CliError> {
    let bytes = fs::read(path)?;
    let file: CipherFile = parse_json(&bytes, "cipher file")?;
    file.check_binding(
        pk.params().modulus().p(),
        pk.params().l(),
        pk.gamma_prime().value(),
    )?;
    Ok(file.to_blocks(pk.params().e())?)
}

fn cmd_encrypt(
    key: &PathBuf,
    input: &PathBuf,
    out: &PathBuf,
    raw_block: bool,
) -> Result<(), CliError> {
    let pk = load_public(key)?;
    let data = fs::read(input)?;
    let blocks = if raw_block {
        let e = pk.params().e();
        let expected = (e * e) as usize;
        if data.len() != expected {
            return Err(Error::Format(format!(
                "raw block mode needs exactly {expected} bytes, got {}",
                data.len()
            ))
            .into());
        }
        vec![encrypt(&pk, &MessageBlock::from_bytes(e, &data))?]
    } else {
        cac::encrypt_message(&pk, &data)?
    };
    fs::write(out, to_json_bytes(&CipherFile::new(&pk, &blocks)))?;
    Ok(())
}

fn cmd_decrypt(
    key: &PathBuf,
    input: &PathBuf,
    out: &PathBuf,
    raw_block: bool,
) -> Result<(), CliError> {
    let bytes = fs::read(key)?;
    let file: KeyFile = parse_json(&bytes, "key file")?;
    let (pk, sk) = file.to_secret()?;
    let blocks = load_cipher_blocks(input, &pk)?;
    let ek = expand_secret(&sk)?;
    let plaintext = if raw_block {
        let mut data = Vec::new();
        for block in &blocks {
            data.extend_from_slice(&decrypt(&ek, block)?.to_bytes());
        }
        data
    } else {
        cac::decrypt_message(&ek, &blocks)?
    };
    fs::write(out, plaintext)?;
    Ok(())
}

fn cmd_attack(
    key: &PathBuf,
    input: &PathBuf,
    out: &PathBuf,
    raw_block: bool,
) -> Result<(), CliError> {
    let pk = load_public(key)?;
    let blocks = load_cipher_blocks(input, &pk)?;
    let plaintext = if raw_block {
        let mut data = Vec::new();
        for block in &blocks {
            data.extend_from_slice(&break_ciphertext(&pk, block)?.to_bytes());
        }
        data
    } else {
        cac::attack_message(&pk, &blocks)?
    };
    fs::write(out, plaintext)?;
    Ok(())
}

fn cmd_bench(l: u64, p: u64, reps: u32, out: Option<PathBuf>) -> Result<(), CliError> {
    let params = CyclotomyParams::from_primes(l, p)?;
    let generator = find_generators(params.modulus())
        .into_iter()
        .next()
        .ok_or_else(|| Error::Param(format!("no generators for p = {p}")))?;

    let mut naive_ms = 0.0;
    let mut reduced_ms = 0.0;
    let mut naive_evals = 0;
    let mut reduced_evals = 0;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let (_, stats) = naive_cyclotomic_matrix_with_stats(&generator, &params);
        naive_ms += start.elapsed().as_secs_f64() * 1e3;
        naive_evals = stats.eq1_evaluations;

        let start = Instant::now();
        let (_, stats) = cyclotomic_matrix_with_stats(&generator, &params);
        reduced_ms += start.elapsed().as_secs_f64() * 1e3;
        reduced_evals = stats.eq1_evaluations;
    }

    let text = render::bench_csv(
        &params,
        generator.value_u64(),
        reps.max(1),
        class_count(&params),
        naive_evals,
        reduced_evals,
        naive_ms,
        reduced_ms,
    );
    emit(out.as_ref(), &text)
}
