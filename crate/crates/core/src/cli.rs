//! Command-line front end. Reports are JSON on stdout with rationals as
//! `p/q` strings; exit code 0 on success, 1 when a verification comes back
//! negative, 2 on bad input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::game::{h_eval, is_prekernel, properties, surplus_imbalance, HMode, Payoff, TuGame};
use crate::io::{
    read_game, read_manifest, write_game, write_manifest, FamilyManifest,
    GameFile, ManifestEntry,
};
use crate::prekernel::{certify_unique, lex_smallest, prekernel_search, Certification};
use crate::prenucleolus::{kohlberg_verify, prenucleolus};
use crate::rational::{parse_list, parse_rational, to_decimal, Rational};
use crate::replication::{convex_combine, eps_grid, games_rank, replicate_family};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tugames", version, about = "Exact pre-kernel and pre-nucleolus solver for TU games")]
pub struct Cli {
    /// Also render rationals as decimals with this many digits.
    #[arg(long, global = true, value_name = "DIGITS")]
    pub decimal: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a pre-kernel point.
    Prekernel { file: PathBuf },
    /// Compute the pre-nucleolus.
    Prenucleolus { file: PathBuf },
    /// Check a payoff: pre-kernel membership, Kohlberg criterion, uniqueness certificate.
    Verify {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Evaluate the objective h at a payoff, both ways.
    H {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Report structural properties of the game.
    Props { file: PathBuf },
    /// Generate related games that keep the pre-kernel point.
    Replicate {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Directory receiving the games and `manifest.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convex combination of a family (base game first).
    Combine {
        manifest: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        /// Write the combined game here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample games along a segment between two family members.
    Segment {
        manifest: PathBuf,
        /// Members `a,b` (0 is the base game); weight moves from b to a.
        #[arg(long)]
        pair: String,
        /// Number of sample points.
        #[arg(long)]
        grid: usize,
        /// Base weights; uniform when omitted.
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        /// Range `lo,hi` of the shifted weight; the widest feasible symmetric range when omitted.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
}

struct Report {
    body: Value,
    code: i32,
}

struct Fmt {
    decimal: Option<usize>,
}

impl Fmt {
    fn num(&self, v: &Rational) -> Value {
        Value::String(v.to_string())
    }

    fn vec(&self, v: &[Rational]) -> Value {
        Value::Array(v.iter().map(|x| self.num(x)).collect())
    }

    /// Adds `<key>_decimal` next to `<key>` when `--decimal` is set.
    fn with_decimals(&self, obj: &mut serde_json::Map<String, Value>, key: &str, v: &[Rational]) {
        if let Some(d) = self.decimal {
            obj.insert(
                format!("{key}_decimal"),
                Value::Array(v.iter().map(|x| Value::String(to_decimal(x, d))).collect()),
            );
        }
    }

    fn point(&self, obj: &mut serde_json::Map<String, Value>, key: &str, x: &Payoff) {
        obj.insert(key.into(), self.vec(x.as_slice()));
        obj.insert(format!("{key}_csv"), Value::String(csv(x.as_slice())));
        self.with_decimals(obj, key, x.as_slice());
    }
}

fn csv(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn certification_json(c: &Certification) -> Value {
    match c {
        Certification::Certified(cert) => json!({
            "status": "certified",
            "rank": cert.rank,
        }),
        Certification::Inconclusive(why) => json!({
            "status": "inconclusive",
            "reason": why.to_string(),
        }),
    }
}

fn parse_point(text: &str, game: &TuGame) -> Result<Payoff> {
    let v = parse_list(text)?;
    if v.len() != game.players() {
        return Err(Error::Dimension {
            expected: game.players(),
            found: v.len(),
        });
    }
    Ok(Payoff::new(v))
}

/// Parses arguments and runs one command, writing the report to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.body).expect("reports serialise");
            let _ = writeln!(out, "{text}");
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_NEGATIVE
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let f = Fmt {
        decimal: cli.decimal,
    };
    match &cli.command {
        Command::Prekernel { file } => {
            let game = read_game(file)?;
            let search = prekernel_search(&game)?;
            let mut obj = serde_json::Map::new();
            obj.insert("command".into(), json!("prekernel"));
            f.point(&mut obj, "point", &search.point);
            obj.insert("route".into(), json!(search.route));
            obj.insert("iterations".into(), json!(search.iterations));
            obj.insert("restarts".into(), json!(search.restarts));
            Ok(Report {
                body: Value::Object(obj),
                code: EXIT_OK,
            })
        }
        Command::Prenucleolus { file } => {
            let game = read_game(file)?;
            let x = prenucleolus(&game);
            let mut obj = serde_json::Map::new();
            obj.insert("command".into(), json!("prenucleolus"));
            f.point(&mut obj, "point", &x);
            obj.insert("kohlberg".into(), json!(kohlberg_verify(&game, &x)?));
            Ok(Report {
                body: Value::Object(obj),
                code: EXIT_OK,
            })
        }
        Command::Verify { file, point } => {
            let game = read_game(file)?;
            let x = parse_point(point, &game)?;
            verify(&f, &game, &x)
        }
        Command::H { file, point } => {
            let game = read_game(file)?;
            let x = parse_point(point, &game)?;
            let via_pi = h_eval(&game, &x, HMode::ViaPi);
            let via_surplus = h_eval(&game, &x, HMode::ViaSurplus);
            let mut obj = serde_json::Map::new();
            obj.insert("command".into(), json!("h"));
            f.point(&mut obj, "point", &x);
            obj.insert("h_via_pi".into(), f.num(&via_pi));
            obj.insert("h_via_surplus".into(), f.num(&via_surplus));
            f.with_decimals(&mut obj, "h", std::slice::from_ref(&via_surplus));
            obj.insert("modes_agree".into(), json!(via_pi == via_surplus));
            obj.insert("zero".into(), json!(via_surplus.is_zero()));
            Ok(Report {
                body: Value::Object(obj),
                code: EXIT_OK,
            })
        }
        Command::Props { file } => {
            let game = read_game(file)?;
            Ok(Report {
                body: json!({
                    "command": "props",
                    "n": game.players(),
                    "properties": properties(&game),
                }),
                code: EXIT_OK,
            })
        }
        Command::Replicate { file, mu, out } => {
            let game = read_game(file)?;
            let mu = parse_rational(mu)?;
            replicate(&f, &game, &mu, out.as_deref())
        }
        Command::Combine {
            manifest,
            weights,
            out,
        } => {
            let family = read_manifest(manifest)?;
            let weights = parse_list(weights)?;
            let combined = convex_combine(&family.members, &weights)?;
            if let Some(path) = out {
                write_game(path, &combined)?;
            }
            let holds = is_prekernel(&combined, &family.point);
            let cert = if holds {
                Some(certify_unique(&combined, &family.point)?)
            } else {
                None
            };
            let mut obj = serde_json::Map::new();
            obj.insert("command".into(), json!("combine"));
            f.point(&mut obj, "point", &family.point);
            obj.insert("game".into(), json!(GameFile::from_game(&combined)));
            obj.insert("is_prekernel".into(), json!(holds));
            obj.insert("certificate".into(), cert.as_ref().map_or(Value::Null, certification_json));
            Ok(Report {
                body: Value::Object(obj),
                code: if holds { EXIT_OK } else { EXIT_NEGATIVE },
            })
        }
        Command::Segment {
            manifest,
            pair,
            grid,
            weights,
            range,
        } => {
            let family = read_manifest(manifest)?;
            segment(&f, &family, pair, *grid, weights.as_deref(), range.as_deref())
        }
    }
}

fn verify(f: &Fmt, game: &TuGame, x: &Payoff) -> Result<Report> {
    let efficient = x.is_efficient(game);
    let member = is_prekernel(game, x);
    let kohlberg = if efficient {
        Some(kohlberg_verify(game, x)?)
    } else {
        None
    };
    let cert = if member {
        Some(certify_unique(game, x)?)
    } else {
        None
    };
    let imbalance = surplus_imbalance(game, x);
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), json!("verify"));
    f.point(&mut obj, "point", x);
    obj.insert(
        "verdict".into(),
        json!(if member { "pre-kernel point" } else { "not a pre-kernel point" }),
    );
    obj.insert("efficient".into(), json!(efficient));
    obj.insert("is_prekernel".into(), json!(member));
    obj.insert("surplus_imbalance".into(), f.num(&imbalance));
    f.with_decimals(&mut obj, "surplus_imbalance", std::slice::from_ref(&imbalance));
    obj.insert("kohlberg".into(), json!(kohlberg));
    obj.insert("certificate".into(), cert.as_ref().map_or(Value::Null, certification_json));
    if member {
        let union: Vec<String> = lex_smallest(game, x)
            .union()
            .into_iter()
            .map(|s| s.to_string())
            .collect();
        obj.insert("most_effective_coalitions".into(), json!(union));
    }
    Ok(Report {
        body: Value::Object(obj),
        code: if member { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn replicate(f: &Fmt, game: &TuGame, mu: &Rational, out: Option<&Path>) -> Result<Report> {
    let x = prekernel_search(game)?.point;
    let family = replicate_family(game, &x, mu)?;
    let independent = games_rank(&family.games) == family.games.len();

    let mut files = Vec::new();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        write_game(&dir.join("base.json"), game)?;
        let width = family.games.len().to_string().len().max(2);
        for (k, (g, m)) in family.games.iter().zip(&family.mus).enumerate() {
            let name = format!("game{:0width$}.json", k + 1);
            write_game(&dir.join(&name), g)?;
            files.push(ManifestEntry {
                file: name,
                mu: m.to_string(),
            });
        }
        let manifest = FamilyManifest {
            n: game.players(),
            base: "base.json".into(),
            point: x.as_slice().iter().map(ToString::to_string).collect(),
            mu: mu.to_string(),
            bound: family
                .bound
                .as_ref()
                .and_then(|b| b.c.as_ref())
                .map(ToString::to_string),
            games: files.clone(),
        };
        write_manifest(&dir.join("manifest.json"), &manifest)?;
    }

    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), json!("replicate"));
    f.point(&mut obj, "point", &x);
    obj.insert("mu".into(), f.num(mu));
    obj.insert("nullity".into(), json!(family.deltas.len()));
    obj.insert("games".into(), json!(family.games.len()));
    obj.insert("mus".into(), f.vec(&family.mus));
    obj.insert("independent".into(), json!(independent));
    obj.insert("verified".into(), json!(true));
    let bound = family.bound.as_ref().map_or(Value::Null, |b| {
        json!({
            "c_bar": b.c_bar.as_ref().map(ToString::to_string),
            "c_squared": b.c_squared.as_ref().map(ToString::to_string),
            "c_floor": b.c.as_ref().map(ToString::to_string),
        })
    });
    obj.insert("bound".into(), bound);
    if out.is_some() {
        obj.insert(
            "files".into(),
            json!(files.iter().map(|e| e.file.clone()).collect::<Vec<_>>()),
        );
    }
    Ok(Report {
        body: Value::Object(obj),
        code: EXIT_OK,
    })
}

fn segment(
    f: &Fmt,
    family: &crate::io::LoadedFamily,
    pair: &str,
    grid: usize,
    weights: Option<&str>,
    range: Option<&str>,
) -> Result<Report> {
    let m = family.members.len();
    let idx: Vec<usize> = pair
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad --pair `{pair}`")))?;
    let [a, b] = idx[..] else {
        return Err(Error::Parse(format!("--pair needs two indices, got `{pair}`")));
    };
    if a >= m || b >= m || a == b {
        return Err(Error::InvalidWeights(format!("pair {a},{b} outside 0..{m}")));
    }
    let base = match weights {
        Some(w) => parse_list(w)?,
        None => crate::replication::uniform_weights(m),
    };
    if base.len() != m {
        return Err(Error::InvalidWeights(format!("{} weights for {m} games", base.len())));
    }
    let (lo, hi) = match range {
        Some(r) => match parse_list(r)?[..] {
            [ref lo, ref hi] => (lo.clone(), hi.clone()),
            _ => return Err(Error::Parse(format!("--range needs lo,hi, got `{r}`"))),
        },
        None => {
            let w = base[a].clone().min(base[b].clone());
            (-w.clone(), w)
        }
    };
    let samples = eps_grid(&lo, &hi, grid);
    let mut rows = Vec::with_capacity(samples.len());
    let mut all = true;
    for eps in &samples {
        let mut t = base.clone();
        t[a] += eps;
        t[b] -= eps;
        if let Some(neg) = t.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidWeights(format!(
                "epsilon {eps} drives a weight to {neg}"
            )));
        }
        let g = convex_combine(&family.members, &t)?;
        let holds = is_prekernel(&g, &family.point);
        let certified = holds && certify_unique(&g, &family.point)?.is_certified();
        all &= holds;
        rows.push(json!({
            "epsilon": f.num(eps),
            "is_prekernel": holds,
            "certified": certified,
            "grand": f.num(g.value(g.grand())),
            "values": GameFile::from_game(&g).coalitions,
        }));
    }
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), json!("segment"));
    f.point(&mut obj, "point", &family.point);
    obj.insert("pair".into(), json!([a, b]));
    obj.insert("range".into(), f.vec(&[lo, hi]));
    obj.insert("samples".into(), Value::Array(rows));
    obj.insert("constant".into(), json!(all));
    Ok(Report {
        body: Value::Object(obj),
        code: if all { EXIT_OK } else { EXIT_NEGATIVE },
    })
}
