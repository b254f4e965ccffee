use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use framecheck::affine::{
    calderon_mixed_symbol, check_affine_orthogonality, check_affine_sufficient,
    check_parseval_superwavelet, check_quasi_affine_orthogonality, fundamental_annulus, AffineSystem,
};
use framecheck::grammian::{
    check_cross_lattice_zero, check_duality, check_orthogonality, check_translation_commutant, multiplier_symbol,
    TranslationSystem,
};
use framecheck::io::{builtin_documents, parse_set, parse_system, System, BUILTINS};
use framecheck::oracle::{
    adjoint_check, assemble_grammian, frobenius, matrix_csv, multiplier_test, superwavelet_oracle, translation_wobble,
    wobble_spread, CVector, FiniteModel, FiniteSystem,
};
use framecheck::rational::{parse_q, to_f64};
use framecheck::subspace::{check_affine_subspace_dual, check_plancherel_frame, check_subspace_dual, check_sufficient_subspace_dual};
use framecheck::symbol::SymbolFunction;
use framecheck::verdict::fmt_f;
use framecheck::{CheckOptions, FrameError, Mode, SpectralSet, Verdict, Q};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "framecheck", version, about = "Check orthogonality, duality and Parseval conditions of translation and affine systems")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Evaluation mode; by default exact whenever every generator is a 1-D piecewise profile.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Threshold for "zero almost everywhere" in sampled mode.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_zero: f64,
    /// Threshold for oracle matrix norms.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_oracle: f64,
    /// Oracle model size (a power of two).
    #[arg(long, global = true, default_value_t = 256)]
    n: usize,
    /// Oracle bandwidth B as a rational; chosen from the supports when absent.
    #[arg(long, global = true)]
    bandwidth: Option<String>,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Write the relevant symbol as CSV (xi, re, im).
    #[arg(long, global = true)]
    dump_symbol: Option<PathBuf>,
    /// Write the assembled oracle matrix as sparse CSV (row, col, re, im).
    #[arg(long, global = true)]
    dump_matrix: Option<PathBuf>,
    /// Seed for randomized probes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Θ = 0 for two translation systems (h, g) or two affine systems (Ψ, Φ).
    Orthogonality { first: PathBuf, second: PathBuf },
    /// Θ_{H,G} = I, optionally only on the spectral set --set.
    Duality {
        analysis: PathBuf,
        synthesis: PathBuf,
        #[arg(long)]
        set: Option<PathBuf>,
        /// Compute even when the two single lattices differ.
        #[arg(long)]
        no_lattice_check: bool,
    },
    /// Θ_{G,H} = 0 for systems on different lattices C (first) and D (second).
    CrossLattice { first: PathBuf, second: PathBuf },
    /// Orthogonality of two affine systems with a shared integer dilation.
    AffineOrthogonality {
        psi: PathBuf,
        phi: PathBuf,
        /// Only the sufficient translate condition.
        #[arg(long)]
        sufficient: bool,
    },
    /// Orthogonality of quasi-affine systems with different dilations.
    QuasiAffine { psi: PathBuf, phi: PathBuf },
    /// Parseval superwavelet test for one system per component.
    Superwavelet {
        #[arg(required = true)]
        components: Vec<PathBuf>,
    },
    /// The analysis system is a V_E-subspace dual to the synthesis system.
    SubspaceDual {
        /// Translation system H whose translates reconstruct (alias --dual).
        #[arg(long, alias = "dual")]
        analysis: PathBuf,
        /// Translation system G giving the coefficients (alias --frame).
        #[arg(long, alias = "frame")]
        synthesis: PathBuf,
        /// Spectral set E as a JSON list of [lo, hi] pairs.
        #[arg(long)]
        set: PathBuf,
        /// Only the global sufficient condition.
        #[arg(long)]
        sufficient: bool,
    },
    /// v = Σ ⟨v, T g⟩ T g for every v with spectrum in --set.
    Plancherel {
        system: PathBuf,
        #[arg(long)]
        set: PathBuf,
    },
    /// Brute-force the symbolic verdicts in the finite cyclic model.
    OracleVerify {
        #[arg(required = true)]
        systems: Vec<PathBuf>,
    },
    /// Write the documents of a built-in example.
    Builtin {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(BUILTINS))]
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

struct Outcome {
    holds: bool,
    report: Value,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<System> {
    Ok(parse_system(&read(path)?)?)
}

fn load_translation(path: &Path) -> anyhow::Result<TranslationSystem> {
    match load(path)? {
        System::Translation(t) => Ok(t),
        System::Affine(_) => Err(FrameError::Parse(format!("{} is not a translation system", path.display())).into()),
    }
}

fn load_affine(path: &Path) -> anyhow::Result<AffineSystem> {
    match load(path)? {
        System::Affine(a) => Ok(a),
        System::Translation(_) => Err(FrameError::Parse(format!("{} is not an affine system", path.display())).into()),
    }
}

fn load_set(path: &Path) -> anyhow::Result<SpectralSet> {
    Ok(parse_set(&read(path)?)?)
}

fn options(g: &Global) -> anyhow::Result<CheckOptions> {
    if !(g.tol_zero > 0.0 && g.tol_oracle > 0.0) {
        return Err(FrameError::InvalidParameter("tolerances must be positive".into()).into());
    }
    Ok(CheckOptions {
        mode: g.mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Sampled => Mode::Sampled,
        }),
        tol_zero: g.tol_zero,
        ..Default::default()
    })
}

fn verdict_outcome(command: &str, inputs: &[&Path], v: Verdict) -> Outcome {
    Outcome {
        holds: v.holds,
        report: json!({
            "command": command,
            "inputs": inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "holds": v.holds,
            "verdict": v.to_json(),
        }),
    }
}

fn dump_symbol(path: &Option<PathBuf>, s: &SymbolFunction) -> anyhow::Result<()> {
    let Some(path) = path else { return Ok(()) };
    if s.dim() != 1 {
        bail!(FrameError::InvalidParameter("symbol dumps are one-dimensional".into()));
    }
    let (lo, hi) = match s.support_hull() {
        Some(h) => (to_f64(&h.lo[0]), to_f64(&h.hi[0])),
        None => (-1.0, 1.0),
    };
    let mut out = String::from("xi,re,im\n");
    for (x, re, im) in s.sample_rows(lo, hi, 1024) {
        out.push_str(&format!("{},{},{}\n", fmt_f(x), fmt_f(re), fmt_f(im)));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Smallest power of two containing every support and making every lattice step an integer divisor of N.
fn choose_bandwidth(g: &Global, extent: Q, lattices: &[Q]) -> anyhow::Result<FiniteModel> {
    if !g.n.is_power_of_two() || g.n < 2 {
        bail!(FrameError::InvalidParameter(format!("--n {} must be a power of two", g.n)));
    }
    if let Some(b) = &g.bandwidth {
        return Ok(FiniteModel::new(g.n, parse_q(b)?)?);
    }
    let mut b = Q::from_integer(1.into());
    let need = extent * Q::from_integer(2.into());
    while b < need {
        b *= Q::from_integer(2.into());
    }
    let limit = Q::from_integer((g.n as i64).into());
    loop {
        let model = FiniteModel::new(g.n, b.clone())?;
        if lattices.iter().all(|c| model.step(c).is_ok()) {
            return Ok(model);
        }
        if b > limit {
            bail!(FrameError::ModelStep {
                step: "no power-of-two bandwidth".into(),
                n: g.n
            });
        }
        b *= Q::from_integer(2.into());
    }
}

fn extent<'a>(gens: impl Iterator<Item = &'a framecheck::SpectralGenerator>) -> Q {
    gens.filter_map(|g| g.support_hull())
        .map(|h| h.inf_norm_upper())
        .fold(Q::from_integer(0.into()), |a, b| if b > a { b } else { a })
}

fn oracle_translation(g: &Global, opts: &CheckOptions, h: &TranslationSystem, s: &TranslationSystem) -> anyhow::Result<(bool, Value)> {
    if h.dim() != 1 {
        bail!(FrameError::DimensionMismatch { expected: 1, found: h.dim() });
    }
    let gens = h.entries().iter().chain(s.entries()).map(|e| e.generator.as_ref());
    let lattices: Vec<Q> = h.entries().iter().chain(s.entries()).map(|e| e.lattice.get(0, 0).clone()).collect();
    let model = choose_bandwidth(g, extent(gens), &lattices)?;
    let fh = FiniteSystem::from_translation(h, &model)?;
    let fs_ = FiniteSystem::from_translation(s, &model)?;
    let theta = assemble_grammian(&fh, &fs_)?;
    let rec = multiplier_test(&theta);
    let norm = frobenius(&theta);
    let commutant = check_translation_commutant(h, s, opts)?;
    let ortho = check_orthogonality(h, s, opts)?;
    let mut diag_dev = 0.0f64;
    if commutant.holds {
        let sym = multiplier_symbol(h, s, opts)?;
        for (i, d) in rec.diagonal.iter().enumerate() {
            let xi = to_f64(&model.xi(i));
            diag_dev = diag_dev.max((d - sym.eval_f64(&[xi])).norm());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let f = CVector::from_fn(model.n(), |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let spread = wobble_spread(&translation_wobble(&theta, &f));
    let adjoint = adjoint_check(&fh, &fs_)?;
    let tol = g.tol_oracle;
    let agree_commutant = commutant.holds == (rec.offdiag_norm <= tol);
    let agree_ortho = ortho.holds == (norm <= tol);
    let agree_symbol = !commutant.holds || diag_dev <= tol;
    if let Some(p) = &g.dump_matrix {
        fs::write(p, matrix_csv(&theta, 1e-14)).with_context(|| format!("writing {}", p.display()))?;
    }
    let holds = agree_commutant && agree_ortho && agree_symbol;
    Ok((
        holds,
        json!({
            "model": model.to_json(),
            "steps": fh.steps(),
            "offdiag_norm": fmt_f(rec.offdiag_norm),
            "grammian_norm": fmt_f(norm),
            "symbol_deviation": fmt_f(diag_dev),
            "wobble_spread": fmt_f(spread),
            "adjoint_defect": fmt_f(adjoint),
            "symbolic": { "commutant": commutant.holds, "orthogonality": ortho.holds },
            "agreement": { "commutant": agree_commutant, "orthogonality": agree_ortho, "symbol": agree_symbol },
        }),
    ))
}

fn oracle_superwavelet(g: &Global, opts: &CheckOptions, systems: &[AffineSystem]) -> anyhow::Result<(bool, Value)> {
    let model = choose_bandwidth(g, extent(systems.iter().flat_map(|s| s.generators.iter().map(|x| x.as_ref()))), &[])?;
    let symbolic = check_parseval_superwavelet(systems, opts)?;
    let rec = superwavelet_oracle(systems, &model, opts)?;
    let parseval = rec.defect <= g.tol_oracle;
    if let Some(p) = &g.dump_matrix {
        fs::write(p, matrix_csv(&rec.theta, 1e-14)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok((
        symbolic.holds == parseval,
        json!({
            "model": model.to_json(),
            "defect": fmt_f(rec.defect),
            "rank_one_scales": rec.rank_one_scales,
            "compressed_scales": rec.compressed_scales,
            "symbolic": symbolic.to_json(),
            "oracle_parseval": parseval,
        }),
    ))
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    let opts = options(g)?;
    Ok(match &cli.command {
        Command::Orthogonality { first, second } => match (load(first)?, load(second)?) {
            (System::Translation(h), System::Translation(s)) => {
                dump_symbol(&g.dump_symbol, &multiplier_symbol(&h, &s, &opts)?)?;
                verdict_outcome("orthogonality", &[first, second], check_orthogonality(&h, &s, &opts)?)
            }
            (System::Affine(psi), System::Affine(phi)) => {
                if g.dump_symbol.is_some() {
                    let annulus = fundamental_annulus(&psi.dilation);
                    dump_symbol(&g.dump_symbol, &calderon_mixed_symbol(&psi, &phi, &annulus, &opts)?)?;
                }
                verdict_outcome("orthogonality", &[first, second], check_affine_orthogonality(&psi, &phi, &opts)?)
            }
            _ => bail!(FrameError::Parse("orthogonality needs two systems of the same kind".into())),
        },
        Command::Duality {
            analysis,
            synthesis,
            set,
            no_lattice_check,
        } => {
            let h = load_translation(analysis)?;
            let s = load_translation(synthesis)?;
            let e = set.as_deref().map(load_set).transpose()?;
            let opts = CheckOptions {
                lattice_check: !no_lattice_check,
                ..opts
            };
            dump_symbol(&g.dump_symbol, &multiplier_symbol(&h, &s, &opts)?)?;
            verdict_outcome("duality", &[analysis, synthesis], check_duality(&h, &s, e.as_ref(), &opts)?)
        }
        Command::CrossLattice { first, second } => {
            let c = load_translation(first)?;
            let d = load_translation(second)?;
            verdict_outcome("cross-lattice", &[first, second], check_cross_lattice_zero(&c, &d, &opts)?)
        }
        Command::AffineOrthogonality { psi, phi, sufficient } => {
            let a = load_affine(psi)?;
            let b = load_affine(phi)?;
            let v = if *sufficient {
                check_affine_sufficient(&a, &b, &opts)?
            } else {
                check_affine_orthogonality(&a, &b, &opts)?
            };
            verdict_outcome("affine-orthogonality", &[psi, phi], v)
        }
        Command::QuasiAffine { psi, phi } => {
            let a = load_affine(psi)?;
            let b = load_affine(phi)?;
            verdict_outcome("quasi-affine", &[psi, phi], check_quasi_affine_orthogonality(&a, &b, &opts)?)
        }
        Command::Superwavelet { components } => {
            let systems = components.iter().map(|p| load_affine(p)).collect::<anyhow::Result<Vec<_>>>()?;
            let paths: Vec<&Path> = components.iter().map(|p| p.as_path()).collect();
            verdict_outcome("superwavelet", &paths, check_parseval_superwavelet(&systems, &opts)?)
        }
        Command::SubspaceDual {
            analysis,
            synthesis,
            set,
            sufficient,
        } => {
            let e = load_set(set)?;
            let v = match (load(analysis)?, load(synthesis)?) {
                (System::Translation(h), System::Translation(s)) => {
                    if *sufficient {
                        check_sufficient_subspace_dual(&h, &s, &e, &opts)?
                    } else {
                        check_subspace_dual(&h, &s, &e, &opts)?
                    }
                }
                (System::Affine(phi), System::Affine(psi)) if !sufficient => check_affine_subspace_dual(&phi, &psi, &e, &opts)?,
                _ => bail!(FrameError::Parse("subspace-dual needs two translation systems or two affine systems".into())),
            };
            verdict_outcome("subspace-dual", &[analysis, synthesis, set], v)
        }
        Command::Plancherel { system, set } => {
            let s = load_translation(system)?;
            let e = load_set(set)?;
            verdict_outcome("plancherel", &[system, set], check_plancherel_frame(&s, &e, &opts)?)
        }
        Command::OracleVerify { systems } => {
            let loaded = systems.iter().map(|p| load(p)).collect::<anyhow::Result<Vec<_>>>()?;
            let (holds, body) = match loaded.as_slice() {
                [System::Translation(h)] => oracle_translation(g, &opts, h, h)?,
                [System::Translation(h), System::Translation(s)] => oracle_translation(g, &opts, h, s)?,
                all if all.iter().all(|s| matches!(s, System::Affine(_))) => {
                    let affine: Vec<AffineSystem> = all
                        .iter()
                        .map(|s| match s {
                            System::Affine(a) => a.clone(),
                            System::Translation(_) => unreachable!(),
                        })
                        .collect();
                    oracle_superwavelet(g, &opts, &affine)?
                }
                _ => bail!(FrameError::Parse(
                    "oracle-verify takes one or two translation systems or any number of affine systems".into()
                )),
            };
            Outcome {
                holds,
                report: json!({
                    "command": "oracle-verify",
                    "inputs": systems.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                    "holds": holds,
                    "oracle": body,
                    "tol_oracle": fmt_f(g.tol_oracle),
                }),
            }
        }
        Command::Builtin { name, out_dir } => {
            fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let mut files = Vec::new();
            for (file, doc) in builtin_documents(name)? {
                let path = out_dir.join(&file);
                fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                files.push(path.display().to_string());
            }
            Outcome {
                holds: true,
                report: json!({ "command": "builtin", "name": name, "holds": true, "files": files }),
            }
        }
    })
}

fn error_object(e: &anyhow::Error) -> Value {
    let kind = match e.downcast_ref::<FrameError>() {
        Some(f) => f.kind(),
        None if e.downcast_ref::<std::io::Error>().is_some() || e.chain().any(|c| c.is::<std::io::Error>()) => "io_error",
        None => "error",
    };
    json!({ "holds": Value::Null, "error": { "kind": kind, "message": format!("{e:#}") } })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, report) = match run(&cli) {
        Ok(o) => (if o.holds { 0 } else { 1 }, o.report),
        Err(e) => (2, error_object(&e)),
    };
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    print!("{text}");
    if let Some(p) = &cli.global.report {
        if let Err(e) = fs::write(p, &text) {
            eprintln!("framecheck: cannot write report {}: {e}", p.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
