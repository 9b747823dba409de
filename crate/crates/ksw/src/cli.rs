//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ksw_core::betti::{bound_exponent, default_catalog};
use ksw_core::clifford::{Grading, DEFAULT_CAP};
use ksw_core::corr::verify;
use ksw_core::hodge::{HKStructure, Weight1Structure};
use ksw_core::kuga_satake::{
    complex_structure_holds, embedding_rank, endo_sign_laws, odd_even_iso, structure_commutators, KSStructure,
    FAMILY_COMPLEMENT, FAMILY_PLANE, FAMILY_RIGHT, FAMILY_ROTATION,
};
use ksw_core::linalg::frac;
use ksw_core::sympow::{block_levels, decompose_with_cap, harmonic_dim, sym_dim, DEFAULT_SYM_CAP};
use ksw_core::weil::analyze;
use ksw_core::Matrix;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::formats::{
    catalog_json, element_json, matrix_checksum, matrix_json, parse_catalog, parse_period, parse_phi, parse_space,
    parse_weight1, period_json, rational_string, space_json, vector_json, Input, InputError,
};
use crate::instances::InstanceGen;
use crate::report::{Check, RunReport};
use crate::suite::{self, parse_convention, SuiteConfig, KS_CHECK_NAMES};

/// Environment variable overriding the Clifford generator cap.
pub const CAP_ENV: &str = "KSW_CAP_H";

#[derive(Parser, Debug)]
#[command(name = "ksw", version, about = "Exact Kuga-Satake and Weil-class workbench")]
pub struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Quadratic spaces.
    Qform {
        #[command(subcommand)]
        action: QformAction,
    },
    /// Kuga-Satake structures.
    Ks {
        #[command(subcommand)]
        action: KsAction,
    },
    /// Weil-type endomorphisms of weight-one structures.
    Weil {
        #[command(subcommand)]
        action: WeilAction,
    },
    /// Symmetric powers.
    Sym {
        #[command(subcommand)]
        action: SymAction,
    },
    /// Odd Betti number bounds.
    Betti {
        #[command(subcommand)]
        action: BettiAction,
    },
    /// The formal correspondence identity.
    Corr {
        #[command(subcommand)]
        action: CorrAction,
    },
    /// Run the whole seeded verification suite.
    Suite {
        /// Suite configuration; defaults to the shipped configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the seed in the configuration.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum QformAction {
    /// Diagonalize a form and report its invariants.
    Inspect {
        #[arg(short = 'f', long = "form")]
        form: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum KsAction {
    /// Build the structure and check its identities.
    Build {
        #[arg(short = 'f', long = "form")]
        form: PathBuf,
        #[arg(short = 'p', long = "period")]
        period: PathBuf,
        /// 1-based index of the diagonal basis vector used as reference.
        #[arg(long)]
        v0: Option<usize>,
    },
    /// Check the identities on the input and on seeded perturbations of it.
    Verify {
        #[arg(short = 'f', long = "form")]
        form: PathBuf,
        #[arg(short = 'p', long = "period")]
        period: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of perturbed instances.
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum WeilAction {
    Analyze {
        /// Weight-one structure `{"dim", "J"}`.
        #[arg(short = 'f', long = "form")]
        form: PathBuf,
        #[arg(long)]
        phi: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum SymAction {
    Decompose {
        #[arg(short = 'f', long = "form", visible_alias = "gram")]
        form: PathBuf,
        #[arg(long)]
        k: usize,
        /// With a period, also report the Hodge level of each block.
        #[arg(short = 'p', long = "period")]
        period: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BettiAction {
    Audit {
        /// Catalog file; defaults to the shipped catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    Bound {
        #[arg(long)]
        b2: u64,
        #[arg(long)]
        div4_improve: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorrAction {
    Verify {
        #[arg(long)]
        b3: usize,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "koszul")]
        convention: String,
    },
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command.
/// `cap_env` is the raw value of [`CAP_ENV`], if set.
pub fn run<I, T>(args: I, cap_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    match dispatch(&cli, cap_env) {
        Ok(report) => Outcome {
            stdout: if cli.json { report.to_json() } else { report.to_text() },
            stderr: String::new(),
            code: report.exit_code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 2,
        },
    }
}

fn cap_from_env(cap_env: Option<&str>) -> Result<Option<usize>, InputError> {
    match cap_env {
        None => Ok(None),
        Some(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| InputError::invalid(CAP_ENV, format!("expected a positive integer, found {s:?}"))),
    }
}

fn read(report: &mut RunReport, path: &Path) -> Result<Input, InputError> {
    let input = Input::read(path)?;
    report.input(input.name.clone(), input.hash());
    Ok(input)
}

pub fn dispatch(cli: &Cli, cap_env: Option<&str>) -> Result<RunReport, InputError> {
    let cap = cap_from_env(cap_env)?;
    let report = match &cli.command {
        Command::Qform {
            action: QformAction::Inspect { form },
        } => qform_inspect(form)?,
        Command::Ks {
            action: KsAction::Build { form, period, v0 },
        } => ks_build(form, period, *v0, cap.unwrap_or(DEFAULT_CAP))?,
        Command::Ks {
            action:
                KsAction::Verify {
                    form,
                    period,
                    seed,
                    count,
                },
        } => ks_verify(form, period, *seed, *count, cap.unwrap_or(DEFAULT_CAP))?,
        Command::Weil {
            action: WeilAction::Analyze { form, phi },
        } => weil_analyze(form, phi)?,
        Command::Sym {
            action: SymAction::Decompose { form, k, period },
        } => sym_decompose(form, *k, period.as_deref())?,
        Command::Betti {
            action: BettiAction::Audit { catalog },
        } => betti_audit(catalog.as_deref())?,
        Command::Betti {
            action: BettiAction::Bound { b2, div4_improve },
        } => betti_bound(*b2, *div4_improve)?,
        Command::Corr {
            action: CorrAction::Verify { b3, n, convention },
        } => corr_verify(*b3, *n, convention)?,
        Command::Suite { config, seed } => run_suite(config.as_deref(), *seed, cap)?,
    };
    Ok(report.finish())
}

fn qform_inspect(form: &Path) -> Result<RunReport, InputError> {
    let mut r = RunReport::new("qform inspect");
    let space = parse_space(&read(&mut r, form)?)?;
    let (p, n) = space.signature();
    let disc = space.discriminant().map_err(|e| InputError::core("discriminant", e))?;
    let t = space.basis_change();
    r.result = json!({
        "dim": space.dim(),
        "signature": [p, n],
        "discriminant": disc.to_string(),
        "determinant": rational_string(&space.determinant()),
        "diagonal": vector_json(space.diag_values()),
        "basis_change": matrix_json(t),
    });
    r.push(Check::pass_if(
        "qspace.diagonalization",
        &(&t.transpose() * space.gram()) * t == Matrix::diagonal(space.diag_values()),
        "T^t G T is the reported diagonal",
    ));
    Ok(r)
}

fn load_hk(r: &mut RunReport, form: &Path, period: &Path) -> Result<HKStructure, InputError> {
    let space = parse_space(&read(r, form)?)?;
    parse_period(&read(r, period)?, &space)
}

fn ks_build(form: &Path, period: &Path, v0: Option<usize>, cap: usize) -> Result<RunReport, InputError> {
    let mut r = RunReport::new("ks build");
    let hk = load_hk(&mut r, form, period)?;
    let h = hk.dim();
    let ks = KSStructure::build(hk, cap).map_err(|e| InputError::core("ks build", e))?;
    let v0 = match v0 {
        None => ks.default_v0(),
        Some(i) if (1..=h).contains(&i) => ks.algebra().basis_vector(i - 1),
        Some(i) => return Err(InputError::invalid("--v0", format!("index {i} is outside 1..={h}"))),
    };
    let core = |e| InputError::core("ks build", e);
    let (e2, j2) = complex_structure_holds(&ks);
    r.push(Check::pass_if(
        "ks.complex_structure",
        e2 && j2,
        format!("e^2 = -1: {e2}, J^2 = -I: {j2}"),
    ));
    let top = ks.algebra().basis_vector(h - 1);
    let comm = structure_commutators(&ks, &[top]).map_err(core)?;
    for family in [FAMILY_COMPLEMENT, FAMILY_PLANE, FAMILY_ROTATION, FAMILY_RIGHT] {
        let members: Vec<_> = comm.checks.iter().filter(|c| c.family == family).collect();
        let failed: Vec<&str> = members.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        let detail = if failed.is_empty() {
            format!("{} identities", members.len())
        } else {
            format!("failed: {}", failed.join(", "))
        };
        r.push(Check::pass_if(
            format!("ks.commutators.{family}"),
            failed.is_empty(),
            detail,
        ));
    }
    let rank = embedding_rank(&ks, &v0).map_err(core)?;
    r.push(Check::pass_if(
        "ks.embedding_rank",
        rank == h,
        format!("rank {rank}, h = {h}"),
    ));
    let signs = endo_sign_laws(&ks, &v0).map_err(core)?;
    r.push(Check::pass_if(
        "ks.embedding_sign_laws",
        signs.all_passed(),
        format!("{} identities", signs.checks.len()),
    ));
    let iso = odd_even_iso(&ks, &v0).map_err(core)?.verify(&ks);
    r.push(Check::pass_if("ks.odd_even_iso", iso, "right multiplication by v0"));
    let torus = ks.torus_complex_dim();
    r.push(Check::pass_if(
        "ks.torus_dim",
        torus == 1 << (h - 2),
        format!("{torus}"),
    ));
    r.result = json!({
        "h": h,
        "signature": ks.base().space().signature(),
        "clifford_dim": ks.algebra().total_dim(),
        "even_dim": ks.even_dim(),
        "odd_dim": ks.algebra().piece_dim(Grading::Odd),
        "torus_complex_dim": torus,
        "diagonal": vector_json(ks.algebra().diag()),
        "period": period_json(ks.base()),
        "e": element_json(ks.e()),
        "v0": element_json(&v0),
        "j_checksum": matrix_checksum(ks.j_even()),
    });
    Ok(r)
}

fn ks_verify(form: &Path, period: &Path, seed: u64, count: usize, cap: usize) -> Result<RunReport, InputError> {
    let mut r = RunReport::new("ks verify");
    r.seed = Some(seed);
    let hk = load_hk(&mut r, form, period)?;
    let mut instances = vec![("input".to_string(), hk.clone())];
    let mut g = InstanceGen::new(seed, "ks-verify");
    let pythagorean = [(3, 5, 4, 5), (-5, 13, 12, 13), (8, 17, -15, 17), (-7, 25, -24, 25)];
    for i in 0..count {
        let (a, b, c, d) = pythagorean[g.index(pythagorean.len())];
        let rotated = hk
            .period()
            .rotated(hk.space(), &frac(a, b), &frac(c, d))
            .map_err(|e| InputError::core("ks verify", e))?;
        let p = g.unipotent(hk.dim(), 2);
        let pinv = p.inverse().expect("unipotent");
        let space = hk.space().congruent(&p).map_err(|e| InputError::core("ks verify", e))?;
        let moved = HKStructure::new(space, pinv.mul_vec(rotated.alpha()), pinv.mul_vec(rotated.beta()))
            .map_err(|e| InputError::core("ks verify", e))?;
        instances.push((format!("perturbation {}", i + 1), moved));
    }
    let mut failures: Vec<Vec<String>> = vec![Vec::new(); KS_CHECK_NAMES.len()];
    for (label, inst) in &instances {
        let flags = suite::ks_instance_checks(inst.clone(), cap).map_err(|e| InputError::core(label, e))?;
        for (f, ok) in failures.iter_mut().zip(flags) {
            if !ok {
                f.push(label.clone());
            }
        }
    }
    for (name, failed) in KS_CHECK_NAMES.iter().zip(failures) {
        let detail = if failed.is_empty() {
            format!("{} instances", instances.len())
        } else {
            format!("failed on {}", failed.join(", "))
        };
        r.push(Check::pass_if(*name, failed.is_empty(), detail));
    }
    r.result = json!({ "h": hk.dim(), "instances": instances.len() });
    Ok(r)
}

fn weil_analyze(form: &Path, phi: &Path) -> Result<RunReport, InputError> {
    let mut r = RunReport::new("weil analyze");
    let w: Weight1Structure = parse_weight1(&read(&mut r, form)?)?;
    let phi = parse_phi(&read(&mut r, phi)?)?;
    let rep = analyze(&w, &phi).map_err(|e| InputError::core("weil analyze", e))?;
    r.push(Check::pass_if(
        "weil.trace_criterion",
        rep.is_weil == rep.trace_phi_j_zero,
        format!(
            "multiplicities ({}, {}), trace(phi J) = 0: {}",
            rep.mult_plus, rep.mult_minus, rep.trace_phi_j_zero
        ),
    ));
    if let (Some(dim), Some(all22)) = (rep.weil_space_dim, rep.all_weil_classes_22) {
        r.push(Check::pass_if(
            "weil.class_space_dim",
            dim == 2,
            format!("dimension {dim}"),
        ));
        r.push(Check::pass_if(
            "weil.certify_22",
            all22 == rep.is_weil,
            format!("all classes of type (2,2): {all22}"),
        ));
    }
    r.result = json!({
        "dim": w.dim(),
        "d": rational_string(&rep.d),
        "mult_plus": rep.mult_plus,
        "mult_minus": rep.mult_minus,
        "is_weil": rep.is_weil,
        "trace_phi_j_zero": rep.trace_phi_j_zero,
        "weil_space_dim": rep.weil_space_dim,
        "all_weil_classes_22": rep.all_weil_classes_22,
        "hodge_class_dim": rep.hodge_class_dim,
    });
    Ok(r)
}

fn sym_decompose(form: &Path, k: usize, period: Option<&Path>) -> Result<RunReport, InputError> {
    let mut r = RunReport::new("sym decompose");
    let space = parse_space(&read(&mut r, form)?)?;
    let hk = match period {
        Some(p) => Some(parse_period(&read(&mut r, p)?, &space)?),
        None => None,
    };
    let h = space.dim();
    let dec = decompose_with_cap(&space, k, DEFAULT_SYM_CAP).map_err(|e| InputError::core("sym decompose", e))?;
    let dims_ok = dec
        .blocks
        .iter()
        .all(|b| b.subspace.dim() == harmonic_dim(h, k - 2 * b.l));
    r.push(Check::pass_if(
        "sym.decomposition",
        dims_ok && dec.total == sym_dim(h, k) && !dec.minor.is_zero(),
        format!("blocks {:?} sum to {}", dec.block_dims(), dec.total),
    ));
    let mut blocks: Vec<Value> = dec
        .blocks
        .iter()
        .map(|b| json!({ "l": b.l, "harmonic_degree": k - 2 * b.l, "dim": b.subspace.dim() }))
        .collect();
    if let Some(hk) = &hk {
        let levels = block_levels(hk, &dec).map_err(|e| InputError::core("sym decompose", e))?;
        let ok = levels.iter().all(|b| b.level as usize == 2 * (k - 2 * b.l));
        r.push(Check::pass_if(
            "sym.block_levels",
            ok,
            format!("levels {:?}", levels.iter().map(|b| b.level).collect::<Vec<_>>()),
        ));
        for (v, lv) in blocks.iter_mut().zip(&levels) {
            let weight = 2 * k as u32;
            let spectrum: Vec<Value> = (0..=weight)
                .filter_map(|p| {
                    let n = lv.spectrum.get(p, weight - p);
                    (n > 0).then(|| json!([p, weight - p, n]))
                })
                .collect();
            v["level"] = json!(lv.level);
            v["spectrum"] = Value::Array(spectrum);
        }
    }
    r.result = json!({
        "form": space_json(&space),
        "h": h,
        "k": k,
        "sym_dim": sym_dim(h, k),
        "blocks": blocks,
        "certificate": rational_string(&dec.minor),
    });
    Ok(r)
}

fn betti_audit(catalog: Option<&Path>) -> Result<RunReport, InputError> {
    let mut r = RunReport::new("betti audit");
    let entries = match catalog {
        Some(p) => parse_catalog(&read(&mut r, p)?)?,
        None => default_catalog(),
    };
    for e in &entries {
        r.push(suite::audit_entry(e));
    }
    r.result = json!({ "catalog": catalog_json(&entries) });
    Ok(r)
}

fn betti_bound(b2: u64, div4: bool) -> Result<RunReport, InputError> {
    let mut r = RunReport::new("betti bound");
    let k = bound_exponent(b2, div4).map_err(|e| InputError::core("--b2", e))?;
    r.result = json!({ "b2": b2, "div4_improve": div4, "k": k, "bound": (1u128 << k).to_string() });
    Ok(r)
}

fn corr_verify(b3: usize, n: u32, convention: &str) -> Result<RunReport, InputError> {
    let mut r = RunReport::new("corr verify");
    let conv = parse_convention(convention)
        .ok_or_else(|| InputError::invalid("--convention", format!("unknown convention {convention:?}")))?;
    let rep = verify(b3, n, conv).map_err(|e| InputError::core("corr verify", e))?;
    r.push(Check::pass_if(
        format!("corr.identity[b3={b3},n={n},{convention}]"),
        rep.passed(),
        format!(
            "uniform {}, concentrated {}, graded-commutative {}, pushforward {}",
            rep.uniform, rep.concentrated, rep.graded_commutative, rep.pushforward_matches
        ),
    ));
    r.result = json!({
        "b3": b3,
        "n": n,
        "convention": conv.name(),
        "pairs": rep.pairs,
        "coefficient": rep.coefficient.as_ref().map(rational_string),
        "uniform": rep.uniform,
        "concentrated": rep.concentrated,
        "graded_commutative": rep.graded_commutative,
        "pushforward_matches": rep.pushforward_matches,
    });
    Ok(r)
}

fn run_suite(config: Option<&Path>, seed: Option<u64>, cap: Option<usize>) -> Result<RunReport, InputError> {
    let input = match config {
        Some(p) => Input::read(p)?,
        None => Input::inline("default config", suite::DEFAULT_CONFIG),
    };
    let mut cfg: SuiteConfig = crate::formats::parse_json(&input)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if cap.is_some() {
        cfg.cap_h = cap;
    }
    let mut r = suite::run_full_suite(&cfg);
    r.input(input.name.clone(), input.hash());
    Ok(r)
}
