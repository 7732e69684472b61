//! JSON game files and family manifests.
//!
//! ```json
//! { "n": 2, "coalitions": { "1": "0", "2": "0", "1,2": "2" } }
//! ```
//!
//! Keys are 1-based player lists, values rational strings. Coalitions left
//! out are worth zero.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::error::{Error, Result};
use crate::game::{Payoff, TuGame};
use crate::rational::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub n: usize,
    pub coalitions: BTreeMap<String, String>,
}

impl GameFile {
    pub fn from_game(game: &TuGame) -> Self {
        GameFile {
            n: game.players(),
            coalitions: game
                .coalitions()
                .map(|s| (coalition_key(s), game.value(s).to_string()))
                .collect(),
        }
    }
}

/// `{1,3}` → `"1,3"`.
pub fn coalition_key(s: Coalition) -> String {
    s.members()
        .map(|p| (p + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_coalition_key(key: &str, n: usize) -> std::result::Result<Coalition, String> {
    let mut s = Coalition::EMPTY;
    for part in key.split(',') {
        let part = part.trim();
        let p: usize = part
            .parse()
            .map_err(|_| format!("bad player `{part}` in coalition \"{key}\""))?;
        if p == 0 || p > n {
            return Err(format!("player {p} in coalition \"{key}\" is outside 1..={n}"));
        }
        if s.contains(p - 1) {
            return Err(format!("player {p} repeated in coalition \"{key}\""));
        }
        s = s.with(p - 1);
    }
    Ok(s)
}

/// 1-based line of the first occurrence of `"key"` in `text`.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

fn at_line(text: &str, key: &str, msg: String) -> Error {
    match key_line(text, key) {
        Some(line) => Error::Parse(format!("line {line}: {msg}")),
        None => Error::Parse(msg),
    }
}

pub fn parse_game(text: &str) -> Result<TuGame> {
    let file: GameFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let n = file.n;
    if !(2..=MAX_PLAYERS).contains(&n) {
        return Err(at_line(text, "n", format!("n = {n} is outside 2..={MAX_PLAYERS}")));
    }
    let mut values = vec![Rational::default(); (1 << n) - 1];
    let mut seen = vec![false; values.len()];
    for (key, value) in &file.coalitions {
        let s = parse_coalition_key(key, n).map_err(|m| at_line(text, key, m))?;
        if seen[s.index()] {
            return Err(at_line(text, key, format!("coalition {s} listed twice")));
        }
        seen[s.index()] = true;
        values[s.index()] = parse_rational(value)
            .map_err(|e| at_line(text, key, format!("coalition \"{key}\": {e}")))?;
    }
    TuGame::new(n, values).map_err(|e| {
        let grand = coalition_key(Coalition::grand(n));
        at_line(text, &grand, e.to_string())
    })
}

pub fn game_to_json(game: &TuGame) -> String {
    let mut text = serde_json::to_string_pretty(&GameFile::from_game(game))
        .expect("game files always serialise");
    text.push('\n');
    text
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

pub fn read_game(path: &Path) -> Result<TuGame> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_game(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_game(path: &Path, game: &TuGame) -> Result<()> {
    fs::write(path, game_to_json(game)).map_err(|e| io_error(path, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub mu: String,
}

/// Index of a generated family; file names are relative to the manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyManifest {
    pub n: usize,
    pub base: String,
    pub point: Vec<String>,
    pub mu: String,
    pub bound: Option<String>,
    pub games: Vec<ManifestEntry>,
}

/// A manifest with its games loaded; `members[0]` is the base game.
#[derive(Clone, Debug)]
pub struct LoadedFamily {
    pub manifest: FamilyManifest,
    pub point: Payoff,
    pub members: Vec<TuGame>,
}

pub fn read_manifest(path: &Path) -> Result<LoadedFamily> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let manifest: FamilyManifest = serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(PathBuf::new);
    let point = Payoff::new(
        manifest
            .point
            .iter()
            .map(|p| parse_rational(p))
            .collect::<Result<_>>()?,
    );
    let mut members = vec![read_game(&dir.join(&manifest.base))?];
    for entry in &manifest.games {
        members.push(read_game(&dir.join(&entry.file))?);
    }
    if let Some(g) = members.iter().find(|g| g.players() != manifest.n) {
        return Err(Error::Dimension {
            expected: manifest.n,
            found: g.players(),
        });
    }
    Ok(LoadedFamily {
        manifest,
        point,
        members,
    })
}

pub fn write_manifest(path: &Path, manifest: &FamilyManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifests always serialise");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(path, e))
}
