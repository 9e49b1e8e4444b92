//! Planted-answer oracles run from the command line.
//!
//! Case `i` draws from a ChaCha8 generator seeded with `--seed` on stream `i`, so each case is
//! reproducible on its own and the report does not depend on how rayon schedules the cases.

use clap::{Args, ValueEnum};
use eqbundle_core::fuzz::{planted_bundle, planted_structure};
use eqbundle_core::{decompose, verify_certificate, GroupSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::commands::Outcome;
use crate::error::CliError;
use crate::inputs::parse_group;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FuzzTarget {
    /// Recover the splitting type of `A(z)·diag(z^n)·B(1/z)`.
    Splitting,
    /// Recover the blocks of a structure conjugated into a random frame, and verify them.
    Decompose,
}

#[derive(Clone, Debug, Args)]
pub struct FuzzArgs {
    #[arg(long)]
    pub seed: u64,
    /// Fixed rank; drawn from 1..=4 per case when absent.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
    pub deg_min: i32,
    #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
    pub deg_max: i32,
    /// Fixed conductor for the splitting oracle; cycles through 1, 2, 3, 4 when absent.
    #[arg(long)]
    pub conductor: Option<u32>,
    /// Fixed group for the decomposition oracle; cycles through cyclic(2), cyclic(3), cyclic(4), klein when absent.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, value_enum, default_value_t = FuzzTarget::Splitting)]
    pub target: FuzzTarget,
}

struct Case {
    index: usize,
    matched: bool,
    detail: Value,
}

fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn run_fuzz(args: &FuzzArgs) -> Result<Outcome, CliError> {
    if args.deg_min > args.deg_max {
        return Err(CliError::usage("--deg-min must not exceed --deg-max"));
    }
    if args.rank == Some(0) || args.conductor == Some(0) {
        return Err(CliError::usage("--rank and --conductor must be positive"));
    }
    let fixed_group = args
        .group
        .as_deref()
        .map(|g| parse_group(g, None).map_err(|e| CliError::usage(format!("--group: {e}"))))
        .transpose()?;
    let cases: Vec<Case> = (0..args.count)
        .into_par_iter()
        .map(|i| match args.target {
            FuzzTarget::Splitting => splitting_case(args, i),
            FuzzTarget::Decompose => decompose_case(args, fixed_group, i),
        })
        .collect();
    let matched = cases.iter().filter(|c| c.matched).count();
    let oracle = match args.target {
        FuzzTarget::Splitting => "splitting-type",
        FuzzTarget::Decompose => "decomposition",
    };
    let failures: Vec<&Case> = cases.iter().filter(|c| !c.matched).collect();
    Ok(Outcome {
        exit: if failures.is_empty() { 0 } else { 1 },
        summary: format!("{matched}/{} {oracle} oracle matches", args.count),
        details: failures
            .iter()
            .map(|c| format!("case {} mismatch: {}", c.index, c.detail))
            .collect(),
        result: json!({
            "seed": args.seed,
            "count": args.count,
            "matches": matched,
            "mismatches": failures
                .iter()
                .map(|c| json!({ "case": c.index, "detail": c.detail }))
                .collect::<Vec<_>>(),
        }),
        document: None,
        out: None,
    })
}

fn splitting_case(args: &FuzzArgs, i: usize) -> Case {
    let mut rng = case_rng(args.seed, i);
    let m = args.conductor.unwrap_or(1 + (i % 4) as u32);
    let r = args.rank.unwrap_or_else(|| rng.gen_range(1..=4));
    let planted = planted_bundle(&mut rng, m, r, args.deg_min, args.deg_max);
    let (matched, got) = match planted.bundle.splitting_type() {
        Ok(t) => (t.degrees() == planted.degrees.as_slice(), json!(t.degrees())),
        Err(e) => (false, json!(e.to_string())),
    };
    Case {
        index: i,
        matched,
        detail: json!({ "conductor": m, "planted": planted.degrees, "recovered": got }),
    }
}

fn decompose_case(args: &FuzzArgs, fixed: Option<GroupSpec>, i: usize) -> Case {
    let mut rng = case_rng(args.seed, i);
    let group = fixed.unwrap_or_else(|| {
        [
            GroupSpec::cyclic(2).expect("valid"),
            GroupSpec::cyclic(3).expect("valid"),
            GroupSpec::cyclic(4).expect("valid"),
            GroupSpec::klein(),
        ][i % 4]
    });
    let r = args.rank.unwrap_or_else(|| rng.gen_range(1..=4));
    let outcome = planted_structure(&mut rng, group, r, args.deg_min, args.deg_max).and_then(|p| {
        let cert = decompose(&p.structure)?;
        let verdict = verify_certificate(&cert, &p.structure);
        Ok((
            cert.blocks == p.blocks && verdict.ok,
            format!("{:?}", p.blocks),
            format!("{:?}", cert.blocks),
            verdict.reason,
        ))
    });
    match outcome {
        Ok((matched, planted, recovered, reason)) => Case {
            index: i,
            matched,
            detail: json!({ "group": group.label(), "planted": planted, "recovered": recovered, "verifier": reason }),
        },
        Err(e) => Case {
            index: i,
            matched: false,
            detail: json!({ "group": group.label(), "error": e.to_string() }),
        },
    }
}
