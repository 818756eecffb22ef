//! `vq`: command-line front end for finite quantale-enriched categories.
//!
//! Exit codes: 0 when every claim checked holds, 1 on input or usage errors,
//! 2 when a counterexample is found, 3 when a size cap is exceeded.

mod commands;
mod shipped;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use vq_core::caps::{self, Caps};
use vq_core::Error;

use commands::{DistOp, Out};

#[derive(Parser)]
#[command(name = "vq", version, about = "Finite quantale-enriched categories, tensor products and complete distributivity")]
struct Cli {
    /// Size caps as `key=value` pairs separated by commas; keys are
    /// quantale, objects, presheaves, materialize, functor-nodes.
    #[arg(long, global = true, value_name = "CAPS")]
    caps: Option<String>,
    /// One `key=value` record per line.
    #[arg(long, global = true)]
    machine: bool,
    /// Also list presheaves, G-ideals or colimit defects.
    #[arg(long, global = true)]
    list: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate or print quantales.
    Quantale {
        #[command(subcommand)]
        op: QuantaleOp,
    },
    /// Operations on a V-category (the last one in the file).
    Vcat {
        #[command(subcommand)]
        op: VcatOp,
    },
    /// Count (and with --list, print) the presheaves on a V-category.
    Presheaves { file: String },
    /// Print the Cauchy completion.
    Cauchy { file: String },
    /// Decide a property of a V-category.
    Check {
        #[command(subcommand)]
        op: CheckOp,
    },
    /// Tensor product of two cocomplete V-categories.
    Tensor {
        a: String,
        b: String,
        /// Check the universal property against this cocomplete target.
        #[arg(long, value_name = "FILE")]
        check_universal: Option<String>,
        /// Check the correspondence with cocontinuous maps into the opposite of B.
        #[arg(long)]
        galois: bool,
    },
    /// Distributor algebra on named distributors in one file.
    Dist {
        #[command(subcommand)]
        op: DistCmd,
    },
    /// Run every check over the shipped examples.
    Corpus,
}

#[derive(Subcommand)]
enum QuantaleOp {
    Validate { file: String },
    /// Print a builtin or the last quantale in a file.
    Show { name: String },
}

#[derive(Subcommand)]
enum VcatOp {
    Validate { file: String },
    /// Underlying order, as the up-set of each object.
    Order { file: String },
    /// Exit 2 and list isomorphic pairs when not separated.
    Separated { file: String },
    Op { file: String },
    Tensor { a: String, b: String },
}

#[derive(Subcommand)]
enum CheckOp {
    /// Decide cocompleteness; on failure dump the weight without a supremum
    Cocomplete { file: String },
    /// Decide complete distributivity via a left adjoint to sup
    Ccd { file: String },
    /// Decide nuclearity via the canonical map into the internal hom
    Nuclear { file: String },
    /// Decide ccd and nuclearity independently and compare.
    Theorem { file: String },
}

#[derive(Subcommand)]
enum DistCmd {
    /// `psi ⊗ phi`.
    Compose { file: String, psi: String, phi: String },
    /// Right extension `xi ↙ phi`.
    Ext { file: String, xi: String, phi: String },
    /// Right lifting `psi ↘ xi`.
    Lift { file: String, psi: String, xi: String },
}

fn parse_caps(desc: &str) -> Result<Caps> {
    let mut c = caps::current();
    for item in desc.split(',').filter(|s| !s.is_empty()) {
        let Some((k, v)) = item.split_once('=') else { bail!("--caps: expected key=value, got '{item}'") };
        let v: usize = v.trim().parse().map_err(|_| anyhow::anyhow!("--caps: bad number in '{item}'"))?;
        match k.trim() {
            "quantale" => c.max_quantale = v,
            "objects" => c.max_objects = v,
            "presheaves" => c.max_presheaves = v,
            "materialize" => c.max_materialize = v,
            "functor-nodes" => c.max_functor_nodes = v,
            other => bail!("--caps: unknown key '{other}'"),
        }
    }
    Ok(c)
}

#[cfg(feature = "parallel")]
fn configure_threads() -> Result<()> {
    if let Ok(s) = std::env::var("VQ_THREADS") {
        let n: usize = s.parse().map_err(|_| anyhow::anyhow!("VQ_THREADS must be a positive integer"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> Result<()> {
    Ok(())
}

fn run(cli: &Cli, out: &mut Out) -> Result<bool> {
    if let Some(desc) = &cli.caps {
        caps::set(parse_caps(desc)?);
    }
    configure_threads()?;
    match &cli.command {
        Command::Quantale { op: QuantaleOp::Validate { file } } => commands::quantale_validate(out, file),
        Command::Quantale { op: QuantaleOp::Show { name } } => commands::quantale_show(out, name),
        Command::Vcat { op } => match op {
            VcatOp::Validate { file } => commands::vcat_validate(out, file),
            VcatOp::Order { file } => commands::vcat_order(out, file),
            VcatOp::Separated { file } => commands::vcat_separated(out, file),
            VcatOp::Op { file } => commands::vcat_op(out, file),
            VcatOp::Tensor { a, b } => commands::vcat_tensor(out, a, b),
        },
        Command::Presheaves { file } => commands::presheaves(out, file),
        Command::Cauchy { file } => commands::cauchy(out, file),
        Command::Check { op } => match op {
            CheckOp::Cocomplete { file } => commands::check_cocomplete_cmd(out, file),
            CheckOp::Ccd { file } => commands::check_ccd(out, file),
            CheckOp::Nuclear { file } => commands::check_nuclear(out, file),
            CheckOp::Theorem { file } => commands::check_theorem(out, file),
        },
        Command::Tensor { a, b, check_universal, galois } => {
            commands::tensor(out, a, b, check_universal.as_deref(), *galois)
        }
        Command::Dist { op } => match op {
            DistCmd::Compose { file, psi, phi } => commands::dist(out, DistOp::Compose, file, psi, phi),
            DistCmd::Ext { file, xi, phi } => commands::dist(out, DistOp::Extend, file, xi, phi),
            DistCmd::Lift { file, psi, xi } => commands::dist(out, DistOp::Lift, file, psi, xi),
        },
        Command::Corpus => commands::corpus(out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new(cli.machine, cli.list);
    let result = run(&cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.text.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            let size = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::SizeExceeded { .. })));
            ExitCode::from(if size { 3 } else { 1 })
        }
    }
}
