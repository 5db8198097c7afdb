//! Implementations of the five subcommands.

use std::path::Path;

use qpi_core::automorphism::{blta_size, block_profile, is_decreasing_monomial, MonomialSet};
use qpi_core::channel::{induced_bitflip, PauliNoise};
use qpi_core::construction::{build_code, interpolation_fractions, CodeSpec};
use qpi_core::simulator::{
    alpha_sweep, estimate_logical_error_rate, AlphaGrid, SimConfig, SimResult, SweepConfig,
};

use crate::csvio;
use crate::manifest::ManifestBuilder;
use crate::{
    AnalyzeArgs, ChannelArgs, CliError, ConstructArgs, SimulateArgs, SweepArgs,
};
use crate::settings::FileConfig;

pub const SIM_SCHEMA: &str = "qpi.sim.v1";
pub const SIM_HEADER: &str = "q,alpha,n,k1,k2,L,coset,trials,failures,rate,ci_lo,ci_hi,seed";
pub const SWEEP_SCHEMA: &str = "qpi.sweep.v1";
pub const SWEEP_HEADER: &str =
    "q,alpha,valid,n,k1,k2,L,coset,trials,failures,rate,ci_lo,ci_hi,seed,is_alpha_star";
pub const ANALYZE_SCHEMA: &str = "qpi.analyze.v1";
pub const ANALYZE_HEADER: &str =
    "alpha,q,n,k1,k2,mixing_factor,f_polar,f_rm,decreasing,profile,aut_size";
pub const CHANNEL_SCHEMA: &str = "qpi.channel.v1";
pub const CHANNEL_HEADER: &str = "index,p_err,bhattacharyya";

fn read_spec(path: &Path) -> Result<CodeSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    CodeSpec::from_json_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn coset_str(on: bool) -> &'static str {
    if on {
        "on"
    } else {
        "off"
    }
}

fn sim_row(r: &SimResult) -> String {
    let s = &r.settings;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        s.q,
        s.alpha,
        s.n,
        s.k1,
        s.k2,
        s.list_size,
        coset_str(s.coset_aggregation),
        r.trials,
        r.failures,
        r.logical_error_rate,
        r.ci_low,
        r.ci_high,
        s.master_seed
    )
}

pub fn construct(args: &ConstructArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let mu = cfg.resolve(args.mu, "mu", 256)?;
    let mut manifest = ManifestBuilder::start("construct");
    manifest
        .parameter("n", args.n as u64)
        .parameter("k1", args.k1 as u64)
        .parameter("k2", args.k2 as u64)
        .parameter("q", args.q)
        .parameter("alpha", args.alpha)
        .parameter("method", args.method.to_string())
        .parameter("mu", mu as u64);

    let spec = build_code(args.n, args.k1, args.k2, args.q, args.alpha, args.method.into(), mu)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let json = spec
        .to_json_string()
        .map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(&args.out, json + "\n")
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", args.out.display())))?;
    manifest.finish(&args.out, std::slice::from_ref(&args.out))?;

    println!(
        "valid={} k={} mixing_factor={}",
        spec.valid,
        spec.quantum_dimension(),
        spec.mixing_factor
    );
    Ok(())
}

pub fn simulate(args: &SimulateArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let trials = cfg.resolve(args.trials, "trials", 10_000)?;
    let list_size = cfg.resolve(args.list_size, "list_size", 16)?;
    let seed = cfg.resolve(args.seed, "seed", 0)?;
    let coset = cfg.resolve_coset(args.coset.map(Into::into), true)?;

    let spec = read_spec(&args.spec)?;
    if !spec.valid {
        return Err(CliError::Usage(format!(
            "{}: spec is not a valid CSS code (F_Z and F_X intersect)",
            args.spec.display()
        )));
    }
    let q = spec.q;
    let mut manifest = ManifestBuilder::start("simulate");
    manifest
        .parameter("spec", args.spec.display().to_string())
        .parameter("trials", trials)
        .parameter("list_size", list_size as u64)
        .parameter("coset", coset_str(coset))
        .parameter("q", q)
        .master_seed(seed);

    let result = estimate_logical_error_rate(&SimConfig {
        spec,
        q,
        list_size,
        trials,
        master_seed: seed,
        coset_aggregation: coset,
        max_failures: None,
    })
    .map_err(|e| CliError::Usage(e.to_string()))?;

    csvio::append(&args.out, SIM_SCHEMA, SIM_HEADER, &[sim_row(&result)])?;
    manifest.finish(&args.out, std::slice::from_ref(&args.out))?;
    println!(
        "rate={} failures={} trials={} ci=[{},{}]",
        result.logical_error_rate, result.failures, result.trials, result.ci_low, result.ci_high
    );
    Ok(())
}

pub fn sweep(args: &SweepArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let trials = cfg.resolve(args.trials, "trials", 10_000)?;
    let list_size = cfg.resolve(args.list_size, "list_size", 16)?;
    let seed = cfg.resolve(args.seed, "seed", 0)?;
    let mu = cfg.resolve(args.mu, "mu", 256)?;
    let coset = cfg.resolve_coset(args.coset.map(Into::into), true)?;
    let max_failures = cfg.resolve_optional(args.max_failures, "max_failures")?;

    let alphas = match (&args.alphas, args.random_alphas) {
        (Some(list), None) => {
            let parsed: Result<Vec<f64>, _> = list.split(',').map(|s| s.trim().parse()).collect();
            AlphaGrid::Explicit(parsed.map_err(|e| {
                CliError::Usage(format!("--alphas {list:?}: {e}"))
            })?)
        }
        (None, Some(count)) => AlphaGrid::Random(count),
        _ => {
            return Err(CliError::Usage(
                "exactly one of --alphas and --random-alphas is required".into(),
            ))
        }
    };

    let mut manifest = ManifestBuilder::start("sweep");
    manifest
        .parameter("n", args.n as u64)
        .parameter("k1", args.k1 as u64)
        .parameter("k2", args.k2 as u64)
        .parameter("q", args.q)
        .parameter("trials", trials)
        .parameter("list_size", list_size as u64)
        .parameter("mu", mu as u64)
        .parameter("coset", coset_str(coset))
        .master_seed(seed);

    let sweep = alpha_sweep(&SweepConfig {
        n: args.n,
        k1: args.k1,
        k2: args.k2,
        q: args.q,
        alphas,
        trials,
        list_size,
        mu,
        master_seed: seed,
        coset_aggregation: coset,
        max_failures,
    })
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut rows = Vec::with_capacity(sweep.entries.len());
    for (idx, entry) in sweep.entries.iter().enumerate() {
        let star = sweep.alpha_star_index == Some(idx);
        let row = match &entry.result {
            Some(r) => {
                let s = &r.settings;
                format!(
                    "{},{},true,{},{},{},{},{},{},{},{},{},{},{},{}",
                    args.q,
                    entry.alpha,
                    s.n,
                    s.k1,
                    s.k2,
                    s.list_size,
                    coset_str(s.coset_aggregation),
                    r.trials,
                    r.failures,
                    r.logical_error_rate,
                    r.ci_low,
                    r.ci_high,
                    s.master_seed,
                    star
                )
            }
            None => format!(
                "{},{},false,{},{},{},{},{},,,,,,{},false",
                args.q, entry.alpha, args.n, args.k1, args.k2, list_size, coset_str(coset), seed
            ),
        };
        rows.push(row);
    }
    csvio::write_fresh(&args.out, SWEEP_SCHEMA, SWEEP_HEADER, &rows)?;
    manifest.finish(&args.out, std::slice::from_ref(&args.out))?;
    match sweep.alpha_star {
        Some(alpha) => println!("alpha_star={alpha}"),
        None => println!("alpha_star=none"),
    }
    Ok(())
}

pub fn analyze(args: &AnalyzeArgs, _cfg: &FileConfig) -> Result<(), CliError> {
    let spec = read_spec(&args.spec)?;
    let fractions = match (&args.ref_polar, &args.ref_rm) {
        (Some(polar_path), Some(rm_path)) => {
            let polar = read_spec(polar_path)?;
            let rm = read_spec(rm_path)?;
            Some(
                interpolation_fractions(&spec, &polar, &rm)
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            )
        }
        (None, None) => None,
        _ => {
            return Err(CliError::Usage(
                "interpolation fractions need both --ref-polar and --ref-rm".into(),
            ))
        }
    };

    let info = spec.classical_information_z();
    let set = MonomialSet::from_information_indices(&info, spec.n)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let decreasing = is_decreasing_monomial(&set);
    let (profile_text, aut_text) = if decreasing {
        let profile = block_profile(&set).map_err(|e| CliError::Usage(e.to_string()))?;
        let size = blta_size(&profile);
        (profile.to_string(), size.to_string())
    } else {
        (String::new(), String::new())
    };

    let (fp_text, frm_text) = match fractions {
        Some((fp, frm)) => (fp.to_string(), frm.to_string()),
        None => (String::new(), String::new()),
    };
    let row = format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        spec.alpha,
        spec.q,
        spec.n,
        spec.k1,
        spec.k2,
        spec.mixing_factor,
        fp_text,
        frm_text,
        decreasing,
        profile_text,
        aut_text
    );
    csvio::write_fresh(&args.out, ANALYZE_SCHEMA, ANALYZE_HEADER, &[row])?;

    let mut manifest = ManifestBuilder::start("analyze");
    manifest.parameter("spec", args.spec.display().to_string());
    manifest.finish(&args.out, std::slice::from_ref(&args.out))?;
    println!(
        "mixing_factor={} decreasing={decreasing} profile={} aut_size={}",
        spec.mixing_factor,
        if profile_text.is_empty() { "-" } else { &profile_text },
        if aut_text.is_empty() { "-" } else { &aut_text }
    );
    Ok(())
}

pub fn channel(args: &ChannelArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let mu = cfg.resolve(args.mu, "mu", 256)?;
    if args.alpha * args.q > 0.5 {
        return Err(CliError::Usage(format!(
            "αq = {} exceeds 1/2",
            args.alpha * args.q
        )));
    }
    let noise = PauliNoise::equal_xz(args.q).map_err(|e| CliError::Usage(e.to_string()))?;
    let base = induced_bitflip(&noise, args.alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = base
        .virtual_channel_params(args.n, mu)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let z = params.bhattacharyya.as_ref().expect("pipeline computes Z");
    let rows: Vec<String> = params
        .p_err
        .iter()
        .zip(z)
        .enumerate()
        .map(|(i, (p, zi))| format!("{i},{p},{zi}"))
        .collect();
    csvio::write_fresh(&args.out, CHANNEL_SCHEMA, CHANNEL_HEADER, &rows)?;

    let mut manifest = ManifestBuilder::start("channel");
    manifest
        .parameter("n", args.n as u64)
        .parameter("q", args.q)
        .parameter("alpha", args.alpha)
        .parameter("mu", mu as u64);
    manifest.finish(&args.out, std::slice::from_ref(&args.out))?;
    println!("wrote {} rows to {}", params.p_err.len(), args.out.display());
    Ok(())
}
