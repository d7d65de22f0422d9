//! Command-line interface: degree sets of special-fiber configurations,
//! semigroup and blow-up calculators, finite-field helpers and the built-in
//! catalog.
//!
//! Exit codes: 0 success, 1 validation or computation error, 2 usage error.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use degsets::blowup::{self, LocalConfig, LocalShape, NodeTangents};
use degsets::catalog::{self, FixtureField, FixtureLabel, FixtureVariant};
use degsets::eps::EventuallyPeriodicSet;
use degsets::fiber::{self, ResidueFieldClass};
use degsets::finitefield::{self, CurveCountData, PrimePolynomial};
use degsets::io::{parse_config, render_config, render_result, ResultFormat};
use degsets::semigroup::{self, GeneratorMultiset};

#[derive(Parser)]
#[command(name = "degsets", version, about = "Degree sets of closed points on curves over Henselian fields, from special-fiber data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the degree set of a configuration file ("-" reads stdin)
    Degset {
        file: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Compute the index (gcd of the degree set), cross-checked both ways
    Index { file: String },
    /// Validate a configuration file and print the report
    Validate { file: String },
    /// Numerical semigroup of a generator multiset
    Semigroup {
        /// Comma-separated generators, e.g. 2,3
        #[arg(long)]
        gens: String,
        /// positive: every coefficient at least 1; monoid: nonzero sums
        #[arg(long, default_value = "positive")]
        mode: String,
    },
    /// Enumerate blow-up degree sets at a local shape
    Mset {
        /// interior:m | transverse:a,b[,c] | tangential2:a,b | node:m=M,split|inert
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 6)]
        max_depth: u64,
        /// Degree of the point over the base residue field
        #[arg(long, default_value_t = 1)]
        degree: u64,
        /// finite:q | algebraically-closed | infinite-other
        #[arg(long, default_value = "finite:7")]
        field: String,
        /// Collect exceptional multiplicities only
        #[arg(long)]
        prime: bool,
        /// Print the full containment report M ⊆ M' ⊆ N
        #[arg(long)]
        report: bool,
    },
    /// Finite-field helpers
    #[command(subcommand)]
    Ffq(FfqCommand),
    /// Built-in special-fiber configurations
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Hyperelliptic family: multiplicity-2 spine with branch components
    Hyperelliptic(HyperellipticArgs),
}

#[derive(Subcommand)]
enum FfqCommand {
    /// Least degree from which every larger degree has closed points
    WeilBound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: u64,
    },
    /// Exact degree set of a curve from its point counts
    Degset {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: u64,
        /// Comma-separated counts N_1,N_2,...
        #[arg(long, default_value = "")]
        counts: String,
        /// Degrees of removed points, comma-separated, repeats allowed
        #[arg(long, default_value = "")]
        removed: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Degrees of the irreducible factors of a squarefree monic polynomial
    FactorDegrees {
        #[arg(long)]
        p: u64,
        /// Coefficients from the constant term up, e.g. "2,0,0,2,0,0,1"
        #[arg(long)]
        f: String,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List the available fixture labels
    List,
    /// Degree set of a fixture
    Degset(CatalogArgs),
    /// Genus-2 classification of a fixture
    Classify(CatalogArgs),
    /// Emit a fixture as a configuration document
    Config(CatalogArgs),
}

#[derive(Args)]
struct CatalogArgs {
    /// Fixture label, e.g. NU-IV
    #[arg(long = "type")]
    label: String,
    /// Fuse the conjugate component pair (Galois-twisted variant)
    #[arg(long)]
    swap: bool,
    /// Finite residue field size
    #[arg(long, default_value_t = 7)]
    q: u64,
    /// Use an algebraically closed residue field instead
    #[arg(long)]
    algebraically_closed: bool,
    /// Degrees of finite extensions of the base field (classify only)
    #[arg(long, default_value = "N")]
    ext_degrees: String,
}

#[derive(Args)]
struct HyperellipticArgs {
    /// Branch degrees, comma-separated with even total, e.g. 3,3
    #[arg(long)]
    degrees: Option<String>,
    /// Residue field size for the multiset route
    #[arg(long, default_value_t = 7)]
    q: u64,
    /// Prime for the polynomial route
    #[arg(long)]
    p: Option<u64>,
    /// Monic squarefree polynomial of even degree, coefficients from the
    /// constant term up
    #[arg(long)]
    f: Option<String>,
    /// Print the underlying configuration instead of the degree set
    #[arg(long)]
    emit_config: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Degset { file, format } => {
            let cfg = load_config(&file)?;
            let format = parse_format(&format)?;
            let ds = fiber::degree_set(&cfg).map_err(|e| e.to_string())?;
            println!("{}", render_result(&ds, format));
            Ok(())
        }
        Command::Index { file } => {
            let cfg = load_config(&file)?;
            let index = fiber::index_of(&cfg).map_err(|e| e.to_string())?;
            println!("{index}");
            Ok(())
        }
        Command::Validate { file } => {
            let cfg = load_config(&file)?;
            let report = fiber::validate(&cfg);
            print!("{report}");
            if report.is_clean() {
                println!();
                Ok(())
            } else {
                Err("configuration is invalid".into())
            }
        }
        Command::Semigroup { gens, mode } => {
            let gens = parse_u64_list(&gens)?;
            let multiset = GeneratorMultiset::new(gens).map_err(|e| e.to_string())?;
            let set = match mode.as_str() {
                "positive" => semigroup::positive_combinations(&multiset),
                "monoid" => semigroup::monoid_closure(&multiset),
                other => return Err(format!("unknown mode `{other}` (positive|monoid)")),
            }
            .map_err(|e| e.to_string())?;
            println!("{set}");
            Ok(())
        }
        Command::Mset {
            shape,
            max_depth,
            degree,
            field,
            prime,
            report,
        } => {
            let shape = parse_shape(&shape)?;
            let config = LocalConfig::new(degree, shape).map_err(|e| e.to_string())?;
            let field = parse_field(&field)?;
            if report {
                let r = blowup::containment_report(&config, &field, max_depth)
                    .map_err(|e| e.to_string())?;
                println!("N  = {}", r.branch_set);
                println!("M' = {} (certified: {})", r.m_prime.set.render(), r.m_prime.certified);
                println!("M  = {} (certified: {})", r.m.set.render(), r.m.certified);
                println!("M ⊆ M': {}", r.m_subset_of_m_prime);
                println!("M' ⊆ N: {}", r.m_prime_subset_of_branch_set);
                match r.branch_minus_m_witness {
                    Some(w) => println!("least element of N not in M: {w}"),
                    None => println!("no element of N misses M below {}", r.search_bound),
                }
                Ok(())
            } else {
                let result = if prime {
                    blowup::enumerate_m_prime(&config, max_depth)
                } else {
                    blowup::enumerate_m(&config, &field, max_depth)
                }
                .map_err(|e| e.to_string())?;
                println!("{} (certified: {})", result.set.render(), result.certified);
                Ok(())
            }
        }
        Command::Ffq(cmd) => run_ffq(cmd),
        Command::Catalog(cmd) => run_catalog(cmd),
        Command::Hyperelliptic(args) => run_hyperelliptic(args),
    }
}

fn run_ffq(cmd: FfqCommand) -> Result<(), String> {
    match cmd {
        FfqCommand::WeilBound { q, g } => {
            // validate q through the count-data constructor
            CurveCountData::new(q, g, vec![]).map_err(|e| e.to_string())?;
            println!("{}", finitefield::weil_min_degree(q, g));
            Ok(())
        }
        FfqCommand::Degset {
            q,
            g,
            counts,
            removed,
            format,
        } => {
            let counts = parse_u64_list(&counts)?;
            let removed = parse_u64_list(&removed)?;
            let format = parse_format(&format)?;
            let data = CurveCountData::new(q, g, counts).map_err(|e| e.to_string())?;
            let set = finitefield::curve_degree_set(&data, &removed).map_err(|e| e.to_string())?;
            println!("{}", render_result(&set, format));
            Ok(())
        }
        FfqCommand::FactorDegrees { p, f } => {
            let coeffs = parse_u64_list(&f)?;
            let poly = PrimePolynomial::new(p, coeffs).map_err(|e| e.to_string())?;
            let degrees = finitefield::factor_degrees(&poly).map_err(|e| e.to_string())?;
            let rendered: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
            println!("{}", rendered.join(","));
            Ok(())
        }
    }
}

fn run_catalog(cmd: CatalogCommand) -> Result<(), String> {
    match cmd {
        CatalogCommand::List => {
            for label in FixtureLabel::ALL {
                let variants = if label.has_swap_variant() {
                    " (supports --swap)"
                } else {
                    ""
                };
                println!("{label}{variants}");
            }
            Ok(())
        }
        CatalogCommand::Degset(args) => {
            let cfg = build_from_args(&args)?;
            let ds = fiber::degree_set(&cfg).map_err(|e| e.to_string())?;
            println!("{ds}");
            Ok(())
        }
        CatalogCommand::Classify(args) => {
            let cfg = build_from_args(&args)?;
            let ext: EventuallyPeriodicSet =
                args.ext_degrees.parse().map_err(|e: degsets::EpsError| e.to_string())?;
            let class = catalog::genus2_classify(&cfg, &ext).map_err(|e| e.to_string())?;
            println!("{} ({})", class.kind, class.degree_set);
            Ok(())
        }
        CatalogCommand::Config(args) => {
            let cfg = build_from_args(&args)?;
            println!("{}", render_config(&cfg));
            Ok(())
        }
    }
}

fn build_from_args(args: &CatalogArgs) -> Result<degsets::SpecialFiberConfig, String> {
    let label: FixtureLabel = args.label.parse().map_err(|e: catalog::CatalogError| e.to_string())?;
    let field = if args.algebraically_closed {
        FixtureField::AlgebraicallyClosed
    } else {
        FixtureField::Finite { q: args.q }
    };
    catalog::build_fixture(label, FixtureVariant { galois_swap: args.swap }, field)
        .map_err(|e| e.to_string())
}

fn run_hyperelliptic(args: HyperellipticArgs) -> Result<(), String> {
    let cfg = match (&args.degrees, args.p, &args.f) {
        (Some(degrees), None, None) => {
            let degrees = parse_u64_list(degrees)?;
            catalog::hyperelliptic_family(&degrees, args.q).map_err(|e| e.to_string())?
        }
        (None, Some(p), Some(f)) => {
            let coeffs = parse_u64_list(f)?;
            let poly = PrimePolynomial::new(p, coeffs).map_err(|e| e.to_string())?;
            catalog::hyperelliptic_family_from_polynomial(&poly).map_err(|e| e.to_string())?
        }
        _ => {
            return Err("pass either --degrees (with optional --q) or both --p and --f".into());
        }
    };
    if args.emit_config {
        println!("{}", render_config(&cfg));
    } else {
        let ds = fiber::degree_set(&cfg).map_err(|e| e.to_string())?;
        println!("{ds}");
    }
    Ok(())
}

fn load_config(path: &str) -> Result<degsets::SpecialFiberConfig, String> {
    let text = if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| format!("reading stdin: {e}"))?;
        buffer
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
    };
    parse_config(&text).map_err(|e| e.to_string())
}

fn parse_format(text: &str) -> Result<ResultFormat, String> {
    match text {
        "text" => Ok(ResultFormat::Text),
        "json" => Ok(ResultFormat::Json),
        other => Err(format!("unknown format `{other}` (text|json)")),
    }
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad integer `{t}`"))
        })
        .collect()
}

fn parse_field(text: &str) -> Result<ResidueFieldClass, String> {
    if text == "algebraically-closed" {
        return Ok(ResidueFieldClass::AlgebraicallyClosed);
    }
    if text == "infinite-other" {
        return Ok(ResidueFieldClass::InfiniteOther);
    }
    if let Some(q) = text.strip_prefix("finite:") {
        let q = q.parse::<u64>().map_err(|_| format!("bad field size `{q}`"))?;
        return Ok(ResidueFieldClass::Finite { q });
    }
    Err(format!(
        "unknown field `{text}` (finite:q | algebraically-closed | infinite-other)"
    ))
}

/// `interior:3`, `transverse:2,3[,5]`, `tangential2:2,3`,
/// `node:m=2,split|inert`.
fn parse_shape(text: &str) -> Result<LocalShape, String> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| format!("expected kind:parameters, got `{text}`"))?;
    match kind {
        "interior" => {
            let m = rest
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("bad multiplicity `{rest}`"))?;
            Ok(LocalShape::Interior { multiplicity: m })
        }
        "transverse" => {
            let multiplicities = parse_u64_list(rest)?;
            Ok(LocalShape::Transverse { multiplicities })
        }
        "tangential2" => {
            let ms = parse_u64_list(rest)?;
            if ms.len() != 2 {
                return Err("tangential2 takes exactly two multiplicities".into());
            }
            Ok(LocalShape::Tangential2 {
                first: ms[0],
                second: ms[1],
            })
        }
        "node" => {
            let mut multiplicity = None;
            let mut tangents = None;
            for part in rest.split(',') {
                let part = part.trim();
                if let Some(m) = part.strip_prefix("m=") {
                    multiplicity =
                        Some(m.parse::<u64>().map_err(|_| format!("bad multiplicity `{m}`"))?);
                } else if part == "split" {
                    tangents = Some(NodeTangents::Split);
                } else if part == "inert" {
                    tangents = Some(NodeTangents::Inert);
                } else {
                    return Err(format!("unknown node parameter `{part}`"));
                }
            }
            Ok(LocalShape::Node {
                multiplicity: multiplicity.ok_or("node needs m=<multiplicity>")?,
                tangents: tangents.ok_or("node needs split or inert")?,
            })
        }
        other => Err(format!(
            "unknown shape `{other}` (interior|transverse|tangential2|node)"
        )),
    }
}
