use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use scissors::abelian::FinAbGroup;
use scissors::blochk::{
    bloch_group, four_term_check, ge2_bloch_group, predict_h1, predict_h2, predict_h3, prebloch_classical,
};
use scissors::complexes::{build_complex_with_budget, complex_homology_upto, scissors_from_orbits, Variant};
use scissors::finhom::{
    abelianization, bar_homology_with, dihedral, pgl2_with, pgl2z_mayer_vietoris_with, BarBudget,
    DEFAULT_GROUP_CUTOFF,
};
use scissors::harness::{self, Format, SuiteConfig, CACHE_ENV};
use scissors::rings::FiniteRing;

#[derive(Parser)]
#[command(name = "scissors", version, about = "Homology of PGL_2 over finite rings, checked exactly")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Classical,
    Orbits,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Units, residue fields and the small invariants of a ring.
    RingInfo { spec: String },
    /// Build the complex of pairwise generic tuples and its homology.
    Complex {
        spec: String,
        /// Top degree of the complex.
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "ge2")]
        variant: Variant,
        /// Highest homology degree (default: dim - 1).
        #[arg(long)]
        homology: Option<usize>,
        /// Use the unaugmented complex.
        #[arg(long)]
        unaugmented: bool,
        /// Write bases and boundary matrices to this directory.
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long, default_value_t = scissors::complexes::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// The pre-Bloch group.
    Scissors {
        spec: String,
        #[arg(long, value_enum, default_value = "classical")]
        route: Route,
    },
    /// Bloch groups and the four-term sequence.
    Bloch { spec: String },
    /// Predicted H_1, H_2 or H_3 of PGL_2.
    Predict {
        spec: String,
        #[arg(long)]
        degree: usize,
    },
    /// Homology of PGL_2(A), a dihedral group (`dihedral:n`) or `pgl2z`.
    Finhom {
        target: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_GROUP_CUTOFF)]
        cutoff: usize,
    },
    /// Run the check suite.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
        /// Cache directory for intermediate groups.
        #[arg(long, env = CACHE_ENV)]
        cache_dir: Option<PathBuf>,
    },
}

/// Usage problems exit with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn parse_ring(spec: &str) -> Result<FiniteRing> {
    FiniteRing::parse(spec).map_err(|e| match e {
        scissors::Error::RingSpec { .. } => Usage(e.to_string()).into(),
        e => anyhow::Error::from(e),
    })
}

fn ring_info(spec: &str) -> Result<()> {
    let r = parse_ring(spec)?;
    println!("ring            {}", r.spec_string());
    println!("order           {}", r.order());
    println!("characteristic  {}", r.characteristic());
    println!("field           {}", r.is_field());
    println!("units           {} ({})", r.units().len(), r.unit_group().group());
    println!("residue fields  {:?}", r.residue_field_sizes());
    println!("|W|             {}", r.wedge_set().len());
    println!("G_A             {}", r.square_class_group());
    println!("A_A^x           {}", r.coinvariants_a());
    println!("mu_2            {}", r.mu2());
    match r.menal_witness() {
        Some(w) => println!("universal GE_2  no ({w})"),
        None => println!("universal GE_2  yes"),
    }
    Ok(())
}

fn complex(
    spec: &str,
    dim: usize,
    variant: Variant,
    homology: Option<usize>,
    augmented: bool,
    export: Option<PathBuf>,
    budget: u64,
) -> Result<()> {
    let r = parse_ring(spec)?;
    let c = build_complex_with_budget(&r, dim, variant, augmented, budget)?;
    println!("sizes {:?}", c.sizes());
    if let Some(dir) = export {
        c.export(&dir)?;
        println!("exported to {}", dir.display());
    }
    let top = homology.unwrap_or(dim.saturating_sub(1));
    if top >= dim {
        bail!(Usage(format!("--homology {top} needs --dim at least {}", top + 1)));
    }
    for (k, g) in complex_homology_upto(&c, top)?.iter().enumerate() {
        println!("H_{k} = {g}");
    }
    Ok(())
}

fn scissors_cmd(spec: &str, route: Route) -> Result<()> {
    let r = parse_ring(spec)?;
    let classical = matches!(route, Route::Classical | Route::Both)
        .then(|| prebloch_classical(&r))
        .transpose()?;
    let orbits = matches!(route, Route::Orbits | Route::Both)
        .then(|| scissors_from_orbits(&r))
        .transpose()?;
    if let Some(p) = &classical {
        println!("P (five-term relations) = {}", p.group);
    }
    if let Some(p) = &orbits {
        println!("P (orbit representatives) = {}", p.group);
    }
    if let (Some(a), Some(b)) = (&classical, &orbits) {
        println!("agree: {}", a.group == b.group);
    }
    Ok(())
}

fn bloch(spec: &str) -> Result<()> {
    let r = parse_ring(spec)?;
    println!("B   = {}", bloch_group(&r)?);
    match ge2_bloch_group(&r) {
        Ok(g) => println!("B_E = {g}"),
        Err(e) => println!("B_E: {e}"),
    }
    let rep = four_term_check(&r)?;
    println!("P   = {}", rep.prebloch);
    println!("S^2 = {}", rep.sym_square);
    println!("K_2^M = {}", rep.milnor_k2);
    println!("|im lambda| = {}", rep.image_order);
    println!(
        "four-term sequence exact: {} (orders {} {}, middle {})",
        rep.pass, rep.left_orders, rep.right_orders, rep.middle_exact
    );
    Ok(())
}

fn predict(spec: &str, degree: usize) -> Result<()> {
    let r = parse_ring(spec)?;
    match degree {
        1 => println!("H_1(PGL_2) = {}", predict_h1(&r)?),
        2 => {
            let p = predict_h2(&r)?;
            println!("0 -> {} -> H_2(PGL_2) -> {} -> 0", p.subgroup, p.quotient);
            println!("|H_2| = {}, odd part {}", p.order, p.odd_part);
            println!("K_2^M = {}, odd part {}", p.milnor_k2, p.milnor_k2_odd_part);
        }
        3 => {
            let p = predict_h3(&r)?;
            println!("0 -> {} -> H_3(PGL_2) -> {} -> 0", p.tor_part, p.be_part);
            println!("|H_3| = {}", p.h3_order);
            println!("0 -> {} -> K_3^ind -> {} -> 0", p.tor_tilde, p.bloch);
            println!("|K_3^ind| = {}", p.k3_order);
        }
        d => bail!(Usage(format!("--degree must be 1, 2 or 3, got {d}"))),
    }
    Ok(())
}

fn finhom(target: &str, degree: usize, cutoff: usize) -> Result<()> {
    let budget = BarBudget::default();
    if target == "pgl2z" {
        let rep = pgl2z_mayer_vietoris_with(&budget)?;
        for d in &rep.degrees {
            let g = d.group.as_ref().map_or("unresolved".to_string(), FinAbGroup::to_string);
            println!("H_{}(PGL_2(Z)) = {g} (cokernel {}, kernel below {})", d.degree, d.cokernel, d.kernel_below);
        }
        println!("|H_3| between {} and {}", rep.h3_lower_bound, rep.h3_upper_bound);
        if let Some(o) = &rep.h3_order {
            println!("|H_3(PGL_2(Z))| = {o}");
        }
        println!("H_2 via constants = {}", rep.h2_from_constants);
        return Ok(());
    }
    let g = if let Some(n) = target.strip_prefix("dihedral:") {
        let n: usize = n.parse().map_err(|_| Usage(format!("bad dihedral order `{n}`")))?;
        dihedral(n)?
    } else {
        pgl2_with(&parse_ring(target)?, cutoff)?
    };
    let h = if degree == 1 && !g.has_table() {
        abelianization(&g)?
    } else {
        bar_homology_with(&g, degree, &budget)?
    };
    println!("|G| = {}", g.order());
    println!("H_{degree}({}) = {h}", g.name());
    Ok(())
}

fn verify(
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Option<OutFormat>,
    cache_dir: Option<PathBuf>,
    threads: Option<usize>,
) -> Result<ExitCode> {
    let mut cfg = match &config {
        Some(p) => SuiteConfig::load(p).map_err(|e| Usage(format!("{}: {e}", p.display())))?,
        None => SuiteConfig::default(),
    };
    if let Some(t) = threads {
        cfg.threads = t;
    }
    if out.is_some() {
        cfg.out = out;
    }
    if let Some(f) = format {
        cfg.format = match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
            OutFormat::Md => Format::Md,
        };
    }
    if cache_dir.is_some() {
        cfg.cache_dir = cache_dir;
    }
    let report = harness::verify(&cfg)?;
    let text = report.render(cfg.format)?;
    match &cfg.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    for r in report.results.iter().filter(|r| r.status == harness::Status::Fail) {
        eprintln!("FAIL {} {}: {}", r.id, r.ring, r.detail.as_deref().unwrap_or(""));
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon_threads(t)?;
    }
    match cli.command {
        Command::RingInfo { spec } => ring_info(&spec)?,
        Command::Complex {
            spec,
            dim,
            variant,
            homology,
            unaugmented,
            export,
            budget,
        } => complex(&spec, dim, variant, homology, !unaugmented, export, budget)?,
        Command::Scissors { spec, route } => scissors_cmd(&spec, route)?,
        Command::Bloch { spec } => bloch(&spec)?,
        Command::Predict { spec, degree } => predict(&spec, degree)?,
        Command::Finhom { target, degree, cutoff } => finhom(&target, degree, cutoff)?,
        Command::Verify {
            config,
            out,
            format,
            cache_dir,
        } => return verify(config, out, format, cache_dir, cli.threads),
    }
    Ok(ExitCode::SUCCESS)
}

fn rayon_threads(n: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
