//! `zonoclass` command-line front end.
//!
//! Every command writes JSON (or, for `mesh`, an OBJ file) and exits with
//! 0 on success, 2 on unparseable input, 3 when an enumeration cap is hit and
//! 4 when the independent checks disagree.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use zonoclass::classify::{self, ClassifyOptions, VtWitness};
use zonoclass::document::VectorSetDocument;
use zonoclass::random;
use zonoclass::rootsystem::{catalog, CatalogSpec, DEFAULT_MAX_GROUP};
use zonoclass::vectorset::DEFAULT_MAX_CHAMBERS;
use zonoclass::zonotope::{self, Zonotope};
use zonoclass::{Error, ToleranceContext, VectorSet};

#[derive(Parser)]
#[command(name = "zonoclass", version, about = "Classify zonotopes by the symmetry of their generators")]
struct Cli {
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_abs: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Largest number of chambers (vertices) to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CHAMBERS)]
    max_chambers: usize,
    /// Largest reflection group to generate by closure.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GROUP)]
    max_group: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Vector-set JSON document.
    input: Option<PathBuf>,
    /// Catalog root system instead of a file, e.g. `B:3`, `I2:6`, `B:3:orbit=1,2`.
    #[arg(long, conflicts_with = "input")]
    catalog: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide vertex-transitivity, homogeneity and the reflection-group type.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Include every congruence map in the witness.
        #[arg(long)]
        full_witness: bool,
    },
    /// List the vertices.
    Vertices {
        #[command(flatten)]
        input: Input,
    },
    /// List faces of a given dimension (one per flat unless `--all`).
    Faces {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rank: usize,
        /// Every face rather than one representative per flat.
        #[arg(long)]
        all: bool,
    },
    /// Project orthogonally along a generator or an explicit direction.
    Project {
        #[command(flatten)]
        input: Input,
        /// Index of a generator in the canonical order.
        #[arg(long, conflicts_with = "along")]
        along_generator: Option<usize>,
        /// Comma-separated direction.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        along: Option<Vec<f64>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replace every generator by its unit vector.
    Normalize {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write an OBJ mesh (3-D) or polygon (2-D).
    Mesh {
        #[command(flatten)]
        input: Input,
        /// Destination OBJ file.
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Emit a catalog root system as a document.
    Catalog {
        label: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count irreducible homogeneous zonotopes per dimension.
    Table {
        #[arg(long, default_value_t = 3)]
        from: usize,
        #[arg(long, default_value_t = 8)]
        to: usize,
        /// Check homogeneity by enumeration up to this many vertices.
        #[arg(long, default_value_t = 60_000)]
        enumeration_cap: u64,
    },
    /// Draw a seeded random reduced set (seed from ZONOCLASS_SEED unless given).
    Random {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        pairs: usize,
        /// Unit-length generators.
        #[arg(long)]
        unit: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Lib(Error),
    Inconsistent(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Inconsistent(_) => 4,
            Failure::Lib(e) => match e {
                Error::Document(_)
                | Error::InvalidCatalog(_)
                | Error::DimensionMismatch { .. }
                | Error::EmptyInput
                | Error::NonFinite { .. } => 2,
                Error::CapExceeded { .. } => 3,
                Error::Consistency(_) => 4,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Inconsistent(m) => write!(f, "inconsistent verdict: {m}"),
            Failure::Usage(m) => write!(f, "{m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn load(input: &Input, tol: ToleranceContext) -> CliResult<(VectorSet, String)> {
    match (&input.input, &input.catalog) {
        (_, Some(label)) => {
            let spec: CatalogSpec = label.parse()?;
            Ok((catalog(&spec, tol)?, format!("catalog {spec}")))
        }
        (Some(path), None) => {
            let doc = VectorSetDocument::load(path).map_err(|e| match e {
                Error::Io(io) => Failure::Usage(format!("cannot read {}: {io}", path.display())),
                other => Failure::Lib(other),
            })?;
            Ok((doc.to_vector_set(tol)?, path.display().to_string()))
        }
        (None, None) => Err(Failure::Usage("give an input file or --catalog".into())),
    }
}

fn emit(value: &Value, output: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Lib(e.into())),
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Lib(e.into()))
        }
    }
}

fn document(set: &VectorSet, meta: &[(&str, String)]) -> Value {
    let metadata: BTreeMap<String, String> = meta.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    serde_json::to_value(VectorSetDocument::from_vector_set(set, metadata)).expect("documents serialize")
}

fn run(cli: Cli) -> CliResult<()> {
    let tol = ToleranceContext::new(cli.tol_abs, cli.tol_rel)
        .ok_or_else(|| Failure::Usage("tolerances must be positive and finite".into()))?;
    let zon = |set: VectorSet| Zonotope::new(set).with_max_chambers(cli.max_chambers);
    match cli.command {
        Command::Classify { input, full_witness } => {
            let (set, source) = load(&input, tol)?;
            let options = ClassifyOptions {
                max_chambers: cli.max_chambers,
                max_group: cli.max_group,
                full_witness,
            };
            let verdict = classify::classify_set(&set, options)?;
            emit(&serde_json::to_value(&verdict).expect("verdicts serialize"), None)?;
            let types: Vec<String> = verdict.permutahedron_types.iter().map(|t| t.label.to_string()).collect();
            let witness = match &verdict.vt_witness {
                VtWitness::Congruent { count, .. } => format!("all {count} semi-stars congruent"),
                VtWitness::NonCongruent { other_index, .. } => {
                    format!("semi-star {other_index} is not congruent to semi-star 0")
                }
                VtWitness::Inferred { .. } => "inferred from the root-system test".into(),
            };
            eprintln!("{source}: dimension {}, {} generators", verdict.input_summary.dim, verdict.input_summary.generator_count);
            eprintln!("  vertex-transitive: {} ({witness})", verdict.vertex_transitive);
            eprintln!("  root system:       {}", verdict.root_system.is_root_system());
            match verdict.inscribed {
                Some(i) => eprintln!("  inscribed:         {} (radius {:.12}, spread {:.3e})", i.inscribed, i.radius, i.spread),
                None => eprintln!("  inscribed:         unknown"),
            }
            eprintln!("  homogeneous:       {}", verdict.homogeneous.map_or("unknown".into(), |h| h.to_string()));
            eprintln!("  types:             [{}]", types.join(", "));
            if !verdict.equivalences_consistent {
                return Err(Failure::Inconsistent(verdict.inconsistencies.join("; ")));
            }
            Ok(())
        }
        Command::Vertices { input } => {
            let (set, _) = load(&input, tol)?;
            let z = zon(set);
            let vertices = z.vertices()?;
            emit(
                &json!({"dimension": z.dim(), "count": vertices.len(), "vertices": vertices}),
                None,
            )
        }
        Command::Faces { input, rank, all } => {
            let (set, _) = load(&input, tol)?;
            let z = zon(set);
            let faces = if all { z.all_faces(rank)? } else { z.faces_from_flats(rank)? };
            emit(&json!({"rank": rank, "count": faces.len(), "faces": faces}), None)
        }
        Command::Project {
            input,
            along_generator,
            along,
            output,
        } => {
            let (set, source) = load(&input, tol)?;
            let direction = match (along_generator, along) {
                (Some(i), _) => {
                    if i >= set.len() {
                        return Err(Failure::Usage(format!("generator index {i} out of range (0..{})", set.len())));
                    }
                    set.vector(i).to_vec()
                }
                (None, Some(v)) => v,
                (None, None) => return Err(Failure::Usage("give --along-generator or --along".into())),
            };
            let p = zon(set).project_along(&direction)?;
            if !p.parallel_to_generator {
                eprintln!("warning: projection direction is not parallel to any generator");
            }
            let along_text = direction.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let doc = document(
                p.zonotope.generators(),
                &[
                    ("source", source),
                    ("projected_along", along_text),
                    ("parallel_to_generator", p.parallel_to_generator.to_string()),
                ],
            );
            emit(&doc, output.as_deref())
        }
        Command::Normalize { input, output } => {
            let (set, source) = load(&input, tol)?;
            let z = zon(set).normalize()?;
            emit(&document(z.generators(), &[("source", source), ("normalized", "true".into())]), output.as_deref())
        }
        Command::Mesh { input, output } => {
            let (set, _) = load(&input, tol)?;
            let z = zon(set);
            let text = zonotope::obj_string(&z)?;
            std::fs::write(&output, &text).map_err(|e| Failure::Lib(e.into()))?;
            let vertices = text.lines().filter(|l| l.starts_with("v ")).count();
            let faces = text.lines().filter(|l| l.starts_with("f ")).count();
            emit(
                &json!({"path": output.display().to_string(), "vertices": vertices, "faces": faces}),
                None,
            )
        }
        Command::Catalog { label, output } => {
            let spec: CatalogSpec = label.parse()?;
            let set = catalog(&spec, tol)?;
            emit(&document(&set, &[("catalog", spec.to_string())]), output.as_deref())
        }
        Command::Table {
            from,
            to,
            enumeration_cap,
        } => {
            if from > to {
                return Err(Failure::Usage(format!("empty range {from}..={to}")));
            }
            let rows = classify::homogeneous_table(from..=to, enumeration_cap as u128, tol)?;
            for row in &rows {
                let names: Vec<String> = row
                    .entries
                    .iter()
                    .map(|e| match e.coincides_with {
                        Some(other) => format!("{}(={other})", e.label),
                        None => e.label.to_string(),
                    })
                    .collect();
                eprintln!("d = {}: {}  [{}]", row.dim, row.count, names.join(", "));
            }
            emit(&json!({"rows": rows}), None)
        }
        Command::Random {
            dim,
            pairs,
            unit,
            seed,
            output,
        } => {
            if dim == 0 {
                return Err(Failure::Usage("dimension must be at least 1".into()));
            }
            let seed = seed.unwrap_or_else(random::seed_from_env);
            let mut rng = random::seeded_rng(seed);
            let set = if unit {
                random::random_unit_set(&mut rng, dim, pairs, tol)?
            } else {
                random::random_reduced_set(&mut rng, dim, pairs, tol)?
            };
            emit(&document(&set, &[("seed", seed.to_string())]), output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
