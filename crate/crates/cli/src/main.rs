use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use demazure::automorphism::{adjoint, degeneration_polynomial, Word, ADJOINT_BUDGET};
use demazure::cox::CoxPresentation;
use demazure::derivation::{certify_lnd, commutator, newton_polytope, preserves_algebra, principal_part};
use demazure::generators::{
    permutation_generators, saff_generators, saff_plus_root_generators, three_subgroup_generators, toric_generators,
    Construction,
};
use demazure::lattice::{cone_properties, lattice_points_in, singular_two_faces, two_faces};
use demazure::roots::enumerate_roots;
use demazure::transitivity::{
    check_condition, obstruction_invariant_set, obstruction_x_difference, pair_transports, solve_cortege, Cortege,
    SolveOptions, TransitivitySpec, DEFAULT_DETOUR_BUDGET,
};
use demazure::{json as dj, Cone, LatticeVector, QComponent, QDerivation};

#[derive(Parser)]
#[command(name = "demazure", version, about = "Demazure roots, toric automorphisms and transitivity experiments")]
struct Cli {
    /// Write the result and a manifest with SHA-256 digests into this directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized search.
    #[arg(long, global = true, env = "DEMAZURE_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConeArg {
    #[arg(long)]
    cone: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Demazure roots of sup norm at most `bound`.
    Roots {
        #[command(flatten)]
        cone: ConeArg,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Cone properties, 2-faces and, with a derivation, its local nilpotency.
    Check {
        #[command(flatten)]
        cone: ConeArg,
        #[arg(long)]
        derivation: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Ray map, class group and, with `--bound`, the descent table of octant roots.
    Cox {
        #[command(flatten)]
        cone: ConeArg,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// The bracket `[a, b]` of two derivations
    Commutator {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// `exp(ad U)(V)` for locally nilpotent `U`.
    Adjoint {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long, default_value_t = ADJOINT_BUDGET)]
        budget: usize,
    },
    /// Newton polytope and, with `--direction`, the principal part.
    Newton {
        #[arg(long)]
        derivation: PathBuf,
        /// A one-parameter subgroup, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        direction: Option<Vec<i64>>,
    },
    /// A generating package with its certificates.
    Generators {
        #[arg(long, value_parser = parse_construction)]
        construction: Construction,
        #[arg(long)]
        cone: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// The extra root for `saff-plus-root` with `n >= 3`, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        root: Option<Vec<i64>>,
    },
    /// Applies a word to points, leftmost letter first.
    Act {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// A word carrying one cortege to another, exactly verified.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DETOUR_BUDGET)]
        budget: usize,
    },
    /// Invariants of the plane pair `y^a d/dx`, `x^b d/dy` over random words.
    Obstruct {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Runs the built-in invariant suite.
    Selftest,
}

fn parse_construction(s: &str) -> Result<Construction, String> {
    Construction::parse(s)
        .ok_or_else(|| format!("unknown construction {s:?}; expected saff, permutations, saff-plus-root, three-subgroups or toric"))
}

enum Failure {
    Domain(demazure::Error),
    Io(anyhow::Error),
}

impl From<demazure::Error> for Failure {
    fn from(e: demazure::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

/// Every file read, kept for the manifest.
#[derive(Default)]
struct Inputs {
    read: Vec<(PathBuf, String)>,
}

impl Inputs {
    fn text(&mut self, p: &Path) -> Result<String, Failure> {
        let s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        self.read.push((p.to_path_buf(), sha256(s.as_bytes())));
        Ok(s)
    }

    fn parse<T: serde::de::DeserializeOwned>(&mut self, p: &Path) -> Result<T, Failure> {
        let s = self.text(p)?;
        dj::from_str(&s).map_err(|e| match e {
            demazure::Error::Parse(m) => Failure::Domain(demazure::Error::Parse(format!("{}: {m}", p.display()))),
            other => Failure::Domain(other),
        })
    }

    fn derivation(&mut self, p: &Path) -> Result<QDerivation, Failure> {
        let parts: Vec<QComponent> = self.parse(p)?;
        let rank = parts.first().map(|c| c.e.rank()).ok_or_else(|| demazure::Error::Parse(format!("{}: empty derivation", p.display())))?;
        Ok(QDerivation::from_components(rank, &parts)?)
    }
}

fn sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::Io(e.into()))
}

fn components(d: &QDerivation) -> Result<Value, Failure> {
    to_value(&d.homogeneous_components())
}

/// The primary result and any extra named artifacts.
struct Output {
    value: Value,
    extra: Vec<(&'static str, Value)>,
}

impl Output {
    fn new(value: Value) -> Self {
        Output { value, extra: Vec::new() }
    }
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Output, Failure> {
    Ok(match &cli.command {
        Command::Roots { cone, bound } => {
            let sigma: Cone = inputs.parse(&cone.cone)?;
            Output::new(to_value(&enumerate_roots(&sigma, *bound)?.roots)?)
        }
        Command::Check { cone, derivation, budget } => {
            let sigma: Cone = inputs.parse(&cone.cone)?;
            let mut v = json!({
                "properties": to_value(&cone_properties(&sigma))?,
                "two_faces": to_value(&two_faces(&sigma)?)?,
                "singular_two_faces": to_value(&singular_two_faces(&sigma)?)?,
            });
            v["smooth_in_codim2"] = json!(v["singular_two_faces"].as_array().is_some_and(Vec::is_empty));
            if let Some(p) = derivation {
                let d = inputs.derivation(p)?;
                v["preserves_algebra"] = json!(preserves_algebra(&d, &sigma)?);
                v["lnd"] = to_value(&certify_lnd(&d, &sigma, *budget)?)?;
            }
            Output::new(v)
        }
        Command::Cox { cone, bound } => {
            let sigma: Cone = inputs.parse(&cone.cone)?;
            let cp = CoxPresentation::new(&sigma)?;
            let phi: Vec<LatticeVector> = cp.phi().iter().map(|r| LatticeVector::new(r.clone())).collect();
            let group = cp.class_group();
            let mut v = json!({
                "phi": to_value(&phi)?,
                "class_group": to_value(&group)?,
                "class_group_text": group.to_string(),
            });
            if let Some(b) = bound {
                let k = cp.k();
                let mut table = Vec::new();
                for e_hat in lattice_points_in(k, &[], *b)? {
                    if cp.descend_root(&e_hat).is_err() {
                        continue;
                    }
                    let down = cp.descend_root(&e_hat)?;
                    table.push(json!({ "e_hat": to_value(&e_hat)?, "descends_to": to_value(&down)? }));
                }
                v["descent"] = Value::Array(table);
            }
            Output::new(v)
        }
        Command::Commutator { a, b } => {
            let a = inputs.derivation(a)?;
            let b = inputs.derivation(b)?;
            Output::new(components(&commutator(&a, &b)?)?)
        }
        Command::Adjoint { u, v, budget } => {
            let u = inputs.derivation(u)?;
            let v = inputs.derivation(v)?;
            let ad = adjoint(&u, &v, *budget)?;
            Output::new(json!({ "components": components(&ad)?, "newton": to_value(&newton_polytope(&ad)?)? }))
        }
        Command::Newton { derivation, direction } => {
            let d = inputs.derivation(derivation)?;
            let mut v = json!({ "newton": to_value(&newton_polytope(&d)?)? });
            if let Some(dir) = direction {
                let rho_t = LatticeVector::from_i64(dir);
                let (pp, max) = principal_part(&d, &rho_t)?;
                let deg = degeneration_polynomial(&d, &rho_t)?;
                v["principal_part"] = components(&pp)?;
                v["max"] = json!(max.to_string());
                v["degeneration_matches"] = json!(deg.at_zero() == &pp);
            }
            Output::new(v)
        }
        Command::Generators { construction, cone, n, root } => {
            let package = match construction {
                Construction::Saff => saff_generators(*n)?,
                Construction::Permutations => permutation_generators(*n)?,
                Construction::SaffPlusRoot => {
                    let u = root.as_ref().map(|r| LatticeVector::from_i64(r));
                    saff_plus_root_generators(*n, u.as_ref())?
                }
                Construction::ThreeSubgroups => three_subgroup_generators(*n, cli.seed)?,
                Construction::Toric => {
                    let path = cone
                        .as_ref()
                        .ok_or_else(|| demazure::Error::InvalidArgument("the toric construction needs --cone".into()))?;
                    let sigma: Cone = inputs.parse(path)?;
                    toric_generators(&sigma)?
                }
            };
            Output::new(to_value(&package)?)
        }
        Command::Act { word, points } => {
            let w: Word = inputs.parse(word)?;
            let text = inputs.text(points)?;
            let pts = dj::points_from_json(&text)?;
            let images = pts.iter().map(|p| w.act(p)).collect::<demazure::Result<Vec<_>>>()?;
            Output::new(serde_json::from_str(&dj::points_to_json(&images)?).map_err(|e| Failure::Io(e.into()))?)
        }
        Command::Solve { spec, from, to, budget } => {
            let spec: TransitivitySpec = inputs.parse(spec)?;
            let src = Cortege::new(dj::points_from_json(&inputs.text(from)?)?)?;
            let tgt = Cortege::new(dj::points_from_json(&inputs.text(to)?)?)?;
            let condition = check_condition(&spec).ok();
            let s = solve_cortege(&spec, &src, &tgt, SolveOptions { seed: cli.seed, detour_budget: *budget })?;
            let mut transcript = Vec::new();
            for (j, (x, y)) in src.points().iter().zip(tgt.points()).enumerate() {
                let image = s.word.act(x)?;
                transcript.push(json!({
                    "point": j,
                    "image": serde_json::from_str::<Value>(&dj::points_to_json(std::slice::from_ref(&image))?).map_err(|e| Failure::Io(e.into()))?[0],
                    "matches_target": image == *y,
                }));
            }
            let word = to_value(&s.word)?;
            Output {
                value: json!({
                    "condition": to_value(&condition)?,
                    "word": word.clone(),
                    "levels": to_value(&s.levels)?,
                    "waypoints": s.waypoints,
                    "transcript": transcript,
                }),
                extra: vec![("word", word)],
            }
        }
        Command::Obstruct { a, b, samples } => {
            let ab = a * b;
            let v = if *a == 0 {
                json!({ "invariant": "x_difference", "report": to_value(&obstruction_x_difference(*a, *b, *samples, cli.seed)?)? })
            } else if ab > 2 {
                json!({
                    "invariant": "root_of_unity_pairs",
                    "order": ab - 1,
                    "report": to_value(&obstruction_invariant_set(*a, *b, *samples, cli.seed)?)?,
                })
            } else {
                json!({ "invariant": "none", "transports": transports(*a, *b, *samples, cli.seed)? })
            };
            Output::new(v)
        }
        Command::Selftest => {
            let checks = demazure::selftest::run();
            let passed = checks.iter().all(|c| c.passed);
            Output::new(json!({ "passed": passed, "checks": to_value(&checks)? }))
        }
    })
}

fn transports(a: u32, b: u32, count: usize, seed: u64) -> Result<Value, Failure> {
    let mut out = Vec::new();
    for (src, tgt, s) in pair_transports(a, b, count, seed)? {
        out.push(json!({ "from": pts_value(&src)?, "to": pts_value(&tgt)?, "word": to_value(&s.word)? }));
    }
    Ok(Value::Array(out))
}

fn pts_value(c: &Cortege) -> Result<Value, Failure> {
    serde_json::from_str(&dj::points_to_json(c.points())?).map_err(|e| Failure::Io(e.into()))
}

fn write_artifacts(cli: &Cli, dir: &Path, inputs: &Inputs, out: &Output) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = command_name(&cli.command);
    let mut outputs = Vec::new();
    let mut files = vec![(format!("{name}.json"), &out.value)];
    files.extend(out.extra.iter().map(|(n, v)| (format!("{n}.json"), v)));
    for (file, v) in files {
        let text = dj::to_string(v)?;
        fs::write(dir.join(&file), &text).with_context(|| format!("writing {file}"))?;
        outputs.push(json!({ "path": file, "sha256": sha256(text.as_bytes()) }));
    }
    let manifest = json!({
        "command": name,
        "args": recorded_args(),
        "inputs": inputs.read.iter().map(|(p, h)| json!({ "path": p.display().to_string(), "sha256": h })).collect::<Vec<_>>(),
        "seed": cli.seed,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "outputs": outputs,
    });
    fs::write(dir.join("manifest.json"), dj::to_string(&manifest)?).context("writing manifest.json")?;
    Ok(())
}

/// The invocation without `--out`, so that manifests depend only on inputs.
fn recorded_args() -> Vec<String> {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--out" {
            args.next();
        } else if !a.starts_with("--out=") {
            out.push(a);
        }
    }
    out
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Roots { .. } => "roots",
        Command::Check { .. } => "check",
        Command::Cox { .. } => "cox",
        Command::Commutator { .. } => "commutator",
        Command::Adjoint { .. } => "adjoint",
        Command::Newton { .. } => "newton",
        Command::Generators { .. } => "generators",
        Command::Act { .. } => "act",
        Command::Solve { .. } => "solve",
        Command::Obstruct { .. } => "obstruct",
        Command::Selftest => "selftest",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut inputs = Inputs::default();
    match run(&cli, &mut inputs) {
        Ok(out) => {
            match dj::to_string(&out.value) {
                Ok(s) => print!("{s}"),
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(1);
                }
            }
            if let Some(dir) = &cli.out {
                if let Err(e) = write_artifacts(&cli, dir, &inputs, &out) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            }
            let failed_selftest = matches!(cli.command, Command::Selftest) && out.value["passed"] != json!(true);
            if failed_selftest {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Domain(e)) => {
            let diag = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{diag}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
