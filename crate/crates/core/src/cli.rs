//! `mckaykit` command line: one subcommand per computation, JSON on stdout.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, CartanType};
use crate::deform::{self, DeformError, HpReport};
use crate::exactlin::field::format_rat;
use crate::groups::{build_group, GroupError, MatrixGroup, DEFAULT_CAP};
use crate::mckay;
use crate::poisson::molien;
use crate::verify::{self, SuiteError, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "mckaykit",
    version,
    about = "Exact invariants of symplectic quotient singularities"
)]
pub struct Cli {
    /// Truncation window (maximum total input degree) for Poisson cohomology.
    #[arg(long, global = true, default_value_t = 8)]
    pub window: usize,
    /// Maximum number of group elements to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GroupArg {
    /// cyclic:n, binary-dihedral:n, weyl:Xn, symmetric:n, permutation:n, trivial:k, matrix-file:PATH
    pub group: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conjugacy classes with sizes, element orders and rank(id − g).
    Classes(GroupArg),
    /// Classes of symplectic reflections (rank(id − g) = 2).
    Reflections(GroupArg),
    /// The rank-graded center gr Z(G) with its structure constants.
    Grcenter(GroupArg),
    /// Σ_classes t^{rank(id − g)}.
    OrbifoldPoincare(GroupArg),
    /// Betti numbers of a symplectic resolution.
    Betti(GroupArg),
    /// Rees algebra of the rank filtration.
    Rees(GroupArg),
    /// Molien series coefficients of ℂ[V]^G.
    Molien {
        group: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// Exponents of a Weyl group (`A2` or `weyl:A2`).
    Exponents { root_type: String },
    /// Root-system catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Truncated Poisson cohomology HP^k of ℂ[V]^G.
    Hp {
        group: String,
        #[arg(long, short, value_parser = clap::value_parser!(u8).range(0..=2))]
        k: u8,
        /// Also compute dimensions in uncertified degrees.
        #[arg(long)]
        scan_uncertified: bool,
    },
    /// Order-2 Maurer–Cartan extension of the HP² basis classes and their sum.
    McExtend { group: String },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List {
        /// Exponents are listed only for Weyl groups of at most this order.
        #[arg(long, default_value_t = 100_000)]
        max_order: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    LemmaEasy {
        #[arg(long, default_value_t = 2000)]
        max_order: usize,
        /// Scan all |G|² ordered pairs instead of class representatives × G.
        #[arg(long)]
        exhaustive: bool,
    },
    GrcenterAxioms {
        #[arg(long, default_value_t = 2000)]
        max_order: usize,
    },
    Kunneth {
        /// Two comma-separated group specs; the built-in pair list if omitted.
        #[arg(long)]
        groups: Option<String>,
    },
    Schouten,
    Gerstenhaber,
    HpDuval {
        #[arg(long = "type", default_value = "A1")]
        root_type: String,
    },
    MolienCross {
        #[arg(long, default_value_t = 500)]
        max_order: usize,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        /// Largest |W| for which exponents are computed.
        #[arg(long, default_value_t = 100_000)]
        exponent_cap: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl From<SuiteError> for CliError {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Group(g) => CliError::Group(g),
            SuiteError::Deform(d) => CliError::Deform(d),
            SuiteError::Usage(u) => CliError::Usage(u),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Group(GroupError::CapExceeded { .. }) => EXIT_CAP,
            CliError::Group(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Deform(_) | CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

/// Result of one invocation: exit code, stdout and stderr text.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let format = cli.format;
    match execute(&cli) {
        Ok((value, pass)) => Outcome {
            code: if pass { EXIT_OK } else { EXIT_FAILURE },
            stdout: render(&value, format),
            stderr: String::new(),
        },
        Err(e) => {
            let code = e.exit_code();
            let body = json!({ "error": e.to_string(), "exit_code": code });
            Outcome {
                code,
                stdout: match &e {
                    CliError::Deform(DeformError::Obstructed { .. }) => render(&body, format),
                    _ => String::new(),
                },
                stderr: format!("mckaykit: {e}\n"),
            }
        }
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(v).expect("serializable")
        ),
        Format::Text => {
            let mut s = String::new();
            text_lines(v, "", &mut s);
            s
        }
    }
}

fn text_lines(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                text_lines(x, &p, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                text_lines(x, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => {
            out.push_str(&format!("{prefix}: {v}\n"));
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn group(spec: &str, cap: usize) -> Result<MatrixGroup, CliError> {
    Ok(build_group(spec, cap)?)
}

fn parse_type(s: &str) -> Result<CartanType, CliError> {
    let s = s.strip_prefix("weyl:").unwrap_or(s);
    CartanType::parse(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn suite_value(r: SuiteReport) -> (Value, bool) {
    let pass = r.pass;
    (to_value(&r), pass)
}

fn hp_value(spec: &str, r: &HpReport, summary: Value) -> Value {
    let mut v = to_value(r);
    v["group"] = json!(spec);
    v["certified_total"] = json!(r.certified_total());
    v["algebra"] = summary;
    v
}

fn execute(cli: &Cli) -> Result<(Value, bool), CliError> {
    let cap = cli.cap;
    let out = match &cli.command {
        Command::Classes(GroupArg { group: spec }) => {
            let g = group(spec, cap)?;
            let ranks = mckay::class_ranks(&g);
            let classes: Vec<Value> = g
                .classes()
                .iter()
                .zip(&ranks)
                .map(|(c, r)| {
                    json!({
                        "size": c.size,
                        "element_order": g.element_order(c.representative),
                        "rank": r,
                        "representative": g.element(c.representative),
                    })
                })
                .collect();
            json!({ "group": spec, "order": g.order(), "dim": g.dim(), "num_classes": g.num_classes(), "classes": classes })
        }
        Command::Reflections(GroupArg { group: spec }) => {
            let g = group(spec, cap)?;
            let r = mckay::symplectic_reflections(&g);
            let profile: BTreeMap<usize, usize> =
                catalog::codimension_profile(&g).into_iter().collect();
            json!({ "group": spec, "order": g.order(), "reflections": r, "rank_profile": profile })
        }
        Command::Grcenter(GroupArg { group: spec }) => {
            let g = group(spec, cap)?;
            let z = mckay::gr_center(&g);
            let axioms = z.check_axioms();
            let mut v = to_value(&z);
            v["group"] = json!(spec);
            v["axioms_hold"] = json!(axioms.is_ok());
            if let Err(e) = axioms {
                v["axiom_failure"] = json!(e);
            }
            v
        }
        Command::OrbifoldPoincare(GroupArg { group: spec }) => {
            let g = group(spec, cap)?;
            json!({ "group": spec, "poincare": mckay::orbifold_poincare(&g) })
        }
        Command::Betti(GroupArg { group: spec }) => {
            let g = group(spec, cap)?;
            json!({ "group": spec, "betti": mckay::betti_of_resolution(&g) })
        }
        Command::Rees(GroupArg { group: spec }) => {
            let g = group(spec, cap)?;
            let mut v = to_value(&mckay::rees_center(&g));
            v["group"] = json!(spec);
            v
        }
        Command::Molien {
            group: spec,
            degree,
        } => {
            let g = group(spec, cap)?;
            let c: Vec<String> = molien(&g, *degree).iter().map(format_rat).collect();
            json!({ "group": spec, "coefficients": c })
        }
        Command::Exponents { root_type } => {
            let t = parse_type(root_type)?;
            let ex = catalog::exponents(t, cap)?;
            json!({ "type": t.to_string(), "weyl_order": t.weyl_order().to_string(), "exponents": ex })
        }
        Command::Catalog {
            action: CatalogAction::List { max_order },
        } => {
            let rows: Vec<Value> = catalog::catalog_types()
                .into_iter()
                .map(|t| to_value(&catalog::root_system_info(t, cap.min(*max_order))))
                .collect();
            json!({ "types": rows, "groups": catalog::small_catalog() })
        }
        Command::Hp {
            group: spec,
            k,
            scan_uncertified,
        } => {
            let g = group(spec, cap)?;
            let (mut plan, alg) = deform::windowed_algebra(&g, cli.window)?;
            plan.scan_uncertified = *scan_uncertified;
            let r = match k {
                0 => deform::hp0(&alg),
                1 => deform::hp1(&alg, plan),
                _ => deform::hp2_first_order(&alg, plan),
            };
            hp_value(spec, &r, to_value(&alg.summary()))
        }
        Command::McExtend { group: spec } => {
            let g = group(spec, cap)?;
            let (plan, alg) = deform::windowed_algebra(&g, cli.window)?;
            let basis: Vec<_> = plan
                .degrees()
                .filter(|&m| plan.is_certified(m))
                .flat_map(|m| deform::hp2_degree(&alg, m, plan.window))
                .collect();
            let mut directions: Vec<(String, Vec<deform::CochainPair>)> = basis
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("basis[{i}]"), vec![c.clone()]))
                .collect();
            if basis.len() > 1 {
                directions.push(("sum".into(), basis.clone()));
            }
            let mut rows = vec![];
            for (name, parts) in directions {
                let ext = deform::mc_extend_sum(&alg, &parts)?;
                rows.push(json!({
                    "direction": name,
                    "first_order": parts,
                    "second_order": ext,
                }));
            }
            json!({ "group": spec, "window": plan.window, "internal_degree": plan.internal, "unobstructed": true, "extensions": rows })
        }
        Command::Verify { suite } => {
            let (v, pass) = match suite {
                Suite::LemmaEasy {
                    max_order,
                    exhaustive,
                } => suite_value(verify::lemma_easy(*max_order, *exhaustive, cap)?),
                Suite::GrcenterAxioms { max_order } => {
                    suite_value(verify::grcenter_axioms(*max_order, cap)?)
                }
                Suite::Kunneth { groups } => {
                    let pairs: Vec<(String, String)> = match groups {
                        Some(s) => {
                            let parts: Vec<&str> = s.split(',').map(str::trim).collect();
                            if parts.len() != 2 {
                                return Err(CliError::Usage(
                                    "--groups takes exactly two comma-separated specs".into(),
                                ));
                            }
                            vec![(parts[0].to_string(), parts[1].to_string())]
                        }
                        None => verify::KUNNETH_PAIRS
                            .iter()
                            .map(|(a, b)| (a.to_string(), b.to_string()))
                            .collect(),
                    };
                    suite_value(verify::kunneth(&pairs, cap)?)
                }
                Suite::Schouten => suite_value(verify::schouten_suite(cli.seed)),
                Suite::Gerstenhaber => suite_value(verify::gerstenhaber_suite(cli.seed)),
                Suite::HpDuval { root_type } => {
                    let t = parse_type(root_type)?;
                    suite_value(verify::hp_duval(t, cli.window, cap)?)
                }
                Suite::MolienCross {
                    max_order,
                    degree,
                    exponent_cap,
                } => suite_value(verify::molien_cross(
                    *max_order,
                    *degree,
                    *exponent_cap,
                    cap,
                )?),
            };
            return Ok((v, pass));
        }
    };
    Ok((out, true))
}

/// Applies MCKAYKIT_THREADS to the global rayon pool.
pub fn init_threads() -> Result<(), String> {
    if let Ok(s) = std::env::var("MCKAYKIT_THREADS") {
        let n: usize = s
            .parse()
            .map_err(|_| format!("MCKAYKIT_THREADS must be a positive integer, got {s:?}"))?;
        if n == 0 {
            return Err("MCKAYKIT_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}
