use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use jb_core::conecomplex::{
    build_codifferential, check_d_squared, check_structural_zeros, export_cone_brackets, ConeMode,
};
use jb_core::formalfields::{verify_field_morphism, TaylorVectorField};
use jb_core::jbtwist::{solve_cn_in, twisted_action, validate_affine, validate_atom, LiePair};
use jb_core::liecore::linf::check_linfinity;
use jb_core::liecore::validate_lie;
use jb_core::operadengine::{
    check_delta_squared, check_dilation_grading, check_jb_chain_map, check_jb_half_chain_map,
    lift_jb_infinity, verify_lift, Conventions, Operad,
};
use jb_core::report::ValidationReport;
use jb_core::scalars::{
    bernoulli, bernoulli_akiyama_tanigawa, bernoulli_over_factorial, bernoulli_recurrence_holds,
};
use serde_json::{json, Value};

use crate::format::{load_algebra, load_atom, load_pair, scalar_value, to_pretty_json};
use crate::report::RunReport;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "jbcalc",
    version,
    about = "Exact Jacobi–Bernoulli computations"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bernoulli number B_n, checked against an independent algorithm.
    Bernoulli { n: usize },
    /// Solves the recursion for the ladder coefficients c_0..c_n and compares with B_n/n!.
    SolveCn {
        max_n: usize,
        /// Weight of the free nilpotent algebra (default max_n + 2).
        #[arg(long)]
        weight: Option<usize>,
    },
    /// Taylor components of the twisted action of a pair.
    Action {
        pair: PathBuf,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Write the component tables as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Checks that the twisted action is a Lie morphism into formal vector fields.
    VerifyAction {
        pair: PathBuf,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Builds the cone codifferential, checks D² = 0 and the exported L∞ brackets.
    Cone {
        pair: PathBuf,
        /// strict, dg or linf
        #[arg(long, default_value = "strict")]
        mode: String,
        #[arg(long, default_value_t = 5)]
        max_weight: usize,
        #[arg(long, default_value_t = 4)]
        arity_cap: usize,
    },
    /// Symbolic checks in the operads.
    Operad {
        #[arg(value_enum)]
        check: OperadCheck,
        /// hs_inf, lp_inf or lp_half (used by delta2)
        #[arg(long, default_value = "hs_inf")]
        operad: String,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[arg(long, default_value_t = 2)]
        max_codegree: usize,
        /// Write the lifted table (lift only).
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Validates a Lie algebra, a pair, or atom data.
    Validate {
        #[arg(value_enum)]
        kind: ValidateKind,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperadCheck {
    Delta2,
    Jb,
    JbHalf,
    Lift,
    Dilation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ValidateKind {
    Lie,
    Atom,
    Affine,
    Pair,
}

/// Runs a parsed command; `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: &[String]) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = RunReport::new(argv.to_vec());
    match &cli.command {
        Command::Bernoulli { n } => bernoulli_cmd(*n, &mut report),
        Command::SolveCn { max_n, weight } => solve_cn_cmd(*max_n, *weight, &mut report)?,
        Command::Action { pair, order, emit } => {
            action_cmd(pair, *order, emit.as_deref(), &mut report)?
        }
        Command::VerifyAction { pair, order } => verify_action_cmd(pair, *order, &mut report)?,
        Command::Cone {
            pair,
            mode,
            max_weight,
            arity_cap,
        } => cone_cmd(pair, mode, *max_weight, *arity_cap, &mut report)?,
        Command::Operad {
            check,
            operad,
            max_arity,
            max_codegree,
            emit,
        } => operad_cmd(
            *check,
            operad,
            *max_arity,
            *max_codegree,
            emit.as_deref(),
            &mut report,
        )?,
        Command::Validate { kind, file } => validate_cmd(*kind, file, &mut report)?,
    }
    if cli.timing {
        report.wall_clock_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

fn bernoulli_cmd(n: usize, report: &mut RunReport) {
    report.line(format!("B_{n} = {}", bernoulli(n)));
    let mut check = ValidationReport::new("bernoulli");
    for k in 0..=n {
        check.tick();
        if bernoulli(k) != bernoulli_akiyama_tanigawa(k) {
            check.fail(
                "independent",
                vec![k.to_string()],
                format!(
                    "recurrence gives {}, Akiyama–Tanigawa gives {}",
                    bernoulli(k),
                    bernoulli_akiyama_tanigawa(k)
                ),
            );
        }
    }
    check.tick();
    if !bernoulli_recurrence_holds(n) {
        check.fail("recurrence", vec![n.to_string()], "Σ C(m+1,k) B_k ≠ 0");
    }
    report.push(check);
}

fn solve_cn_cmd(
    max_n: usize,
    weight: Option<usize>,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let weight = weight.unwrap_or(max_n + 2);
    let c = solve_cn_in(max_n, weight)?;
    let mut check = ValidationReport::new("solve_cn");
    check.note(format!(
        "free nilpotent algebra on 3 generators, weight {weight}"
    ));
    report.line(format!(
        "{:>3}  {:>16}  {:>16}  match",
        "n", "c_n", "B_n/n!"
    ));
    for (n, cn) in c.iter().enumerate() {
        let b = bernoulli_over_factorial(n);
        let ok = *cn == b;
        report.line(format!(
            "{n:>3}  {:>16}  {:>16}  {}",
            cn.to_string(),
            b.to_string(),
            if ok { "yes" } else { "no" }
        ));
        check.tick();
        if !ok {
            check.fail(
                "mismatch",
                vec![n.to_string()],
                format!("c_{n} = {cn}, B_{n}/{n}! = {b}"),
            );
        }
    }
    report.push(check);
    Ok(())
}

fn validated_pair(path: &Path, report: &mut RunReport) -> Result<Option<LiePair>, CliError> {
    let pair = load_pair(path)?;
    let v = pair.validate()?;
    let ok = v.is_valid();
    report.push(v);
    Ok(ok.then_some(pair))
}

fn field_json(pair: &LiePair, fields: &[TaylorVectorField], order: usize) -> Value {
    let gn = pair.g.names();
    let hn = pair.h.names();
    let mut components = Vec::new();
    for (a, f) in fields.iter().enumerate() {
        for n in 0..=order {
            for (inputs, v) in f.entries(n) {
                let value: Vec<Value> = v
                    .iter()
                    .map(|(z, c)| json!([hn[z].clone(), scalar_value(c)]))
                    .collect();
                components.push(json!({
                    "a": gn[a].clone(),
                    "n": n,
                    "inputs": inputs.iter().map(|&i| hn[i].clone()).collect::<Vec<_>>(),
                    "value": value,
                }));
            }
        }
    }
    json!({ "g": pair.g.name, "h": pair.h.name, "order": order, "components": components })
}

fn action_cmd(
    path: &Path,
    order: usize,
    emit: Option<&Path>,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let Some(pair) = validated_pair(path, report)? else {
        return Ok(());
    };
    let fields = twisted_action(&pair, order)?;
    let gn = pair.g.names();
    for (a, f) in fields.iter().enumerate() {
        let counts: Vec<String> = (0..=order)
            .map(|n| f.entries(n).count().to_string())
            .collect();
        report.line(format!(
            "F({}): entries per order [{}]",
            gn[a],
            counts.join(", ")
        ));
    }
    if let Some(p) = emit {
        std::fs::write(p, to_pretty_json(&field_json(&pair, &fields, order)))
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        report.line(format!("tables written to {}", p.display()));
    }
    Ok(())
}

fn verify_action_cmd(path: &Path, order: usize, report: &mut RunReport) -> Result<(), CliError> {
    let pair = load_pair(path)?;
    report.push(pair.validate()?);
    let fields = twisted_action(&pair, order)?;
    report.push(verify_field_morphism(&fields, &pair.g, order)?);
    Ok(())
}

fn cone_cmd(
    path: &Path,
    mode: &str,
    max_weight: usize,
    arity_cap: usize,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let mode: ConeMode = mode.parse()?;
    let pair = load_pair(path)?;
    let components = build_codifferential(&pair, mode, max_weight.max(arity_cap))?;
    report.push(check_d_squared(&components, max_weight)?);
    let l = export_cone_brackets(&components, arity_cap)?;
    let sizes: Vec<String> = l
        .brackets
        .iter()
        .map(|(n, t)| format!("l_{n}: {}", t.len()))
        .collect();
    report.line(format!("exported brackets ({})", sizes.join(", ")));
    report.push(check_linfinity(&l, arity_cap)?);
    report.push(check_structural_zeros(
        &l,
        pair.g.dim(),
        mode != ConeMode::Strict,
    ));
    Ok(())
}

fn operad_cmd(
    check: OperadCheck,
    operad: &str,
    max_arity: usize,
    max_codegree: usize,
    emit: Option<&Path>,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let conv = Conventions::default();
    let hs = || Operad::HsInf.generators(max_arity, &conv);
    match check {
        OperadCheck::Delta2 => {
            let op: Operad = operad.parse()?;
            report.push(check_delta_squared(op, max_arity, &conv)?);
        }
        OperadCheck::Jb => report.push(check_jb_chain_map("jb", &hs(), &conv)?),
        OperadCheck::JbHalf => report.push(check_jb_half_chain_map("jb_half", &hs(), &conv)?),
        OperadCheck::Lift => {
            let lift = lift_jb_infinity(max_arity, max_codegree, &conv)?;
            let mut text = String::new();
            for (g, image) in &lift.table {
                text.push_str(&format!("{g} -> {image}\n"));
            }
            report.line(format!(
                "{} generators lifted, {} linear systems solved",
                lift.table.len(),
                lift.systems
            ));
            match emit {
                Some(p) => {
                    std::fs::write(p, &text)
                        .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                    report.line(format!("table written to {}", p.display()));
                }
                None => report.output.extend(text.lines().map(str::to_string)),
            }
            let verified = verify_lift(&lift, &conv)?;
            report.push(lift.report);
            report.push(verified);
        }
        OperadCheck::Dilation => report.push(check_dilation_grading(max_arity, &conv)?),
    }
    Ok(())
}

fn validate_cmd(kind: ValidateKind, path: &Path, report: &mut RunReport) -> Result<(), CliError> {
    match kind {
        ValidateKind::Lie => report.push(validate_lie(&load_algebra(path)?)?),
        ValidateKind::Pair => {
            validated_pair(path, report)?;
        }
        ValidateKind::Atom | ValidateKind::Affine => {
            let data = load_atom(path)?;
            let atom = validate_atom(&data)?;
            let affine = validate_affine(&data)?;
            let holds = |r: &ValidationReport| if r.is_valid() { "holds" } else { "fails" };
            report.line(format!("atom form of condition (iii): {}", holds(&atom)));
            report.line(format!(
                "affine form of condition (iii): {}",
                holds(&affine)
            ));
            report.push(if kind == ValidateKind::Atom {
                atom
            } else {
                affine
            });
        }
    }
    Ok(())
}
