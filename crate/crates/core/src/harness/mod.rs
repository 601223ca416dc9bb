//! Dataset manifests: JSONL corpus indexes with token lengths, content
//! hashes, dedup, context filtering, split assignment, and corpus stats.

mod eval;

pub use eval::run_eval;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Component, Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::normalize::normalize;
use crate::parse::parse_svg;
use crate::rng::{fnv1a_64, stream};
use crate::serialize::serialize;

pub const DEFAULT_MAX_TOKENS: u64 = 8192;

/// Frame used when canonicalizing documents for content hashing.
const CANONICAL_FRAME: u32 = 224;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Val,
    Test,
    TestSim,
    Unassigned,
}

impl Split {
    pub fn parse_flag(s: &str) -> Option<Split> {
        match s {
            "train" => Some(Split::Train),
            "val" => Some(Split::Val),
            "test" => Some(Split::Test),
            "test-sim" | "test_sim" => Some(Split::TestSim),
            "unassigned" => Some(Split::Unassigned),
            _ => None,
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
            Split::TestSim => "test-sim",
            Split::Unassigned => "unassigned",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub svg_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub png_path: Option<PathBuf>,
    pub split: Split,
    pub token_len: u64,
    pub content_hash: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestIoError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: duplicate id {id:?}")]
    DuplicateId { id: String, line: usize },
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, ManifestIoError> {
    let text = fs::read_to_string(path)?;
    let mut entries: Vec<ManifestEntry> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: ManifestEntry = serde_json::from_str(line)
            .map_err(|source| ManifestIoError::Json { line: i + 1, source })?;
        if !seen.insert(entry.id.clone()) {
            return Err(ManifestIoError::DuplicateId { id: entry.id, line: i + 1 });
        }
        entries.push(entry);
    }
    Ok(entries)
}

pub fn write_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<(), ManifestIoError> {
    let mut out = Vec::new();
    for e in entries {
        serde_json::to_writer(&mut out, e).expect("manifest entries serialize");
        out.push(b'\n');
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&out)?;
    Ok(())
}

/// Resolves a manifest-stored path against the manifest's directory.
pub fn resolve_path(manifest_dir: &Path, stored: &Path) -> PathBuf {
    if stored.is_absolute() {
        stored.to_path_buf()
    } else {
        manifest_dir.join(stored)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenizerKind {
    Bytes,
    Approx4Bytes,
    ExternalVocabFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizerSpec {
    pub kind: TokenizerKind,
    pub description: String,
}

impl TokenizerSpec {
    pub fn bytes() -> TokenizerSpec {
        TokenizerSpec { kind: TokenizerKind::Bytes, description: "bytes (exact byte count)".into() }
    }

    pub fn approx4() -> TokenizerSpec {
        TokenizerSpec {
            kind: TokenizerKind::Approx4Bytes,
            description: "approx-4-bytes (approximate token counts)".into(),
        }
    }

    pub fn vocab(path: impl Into<PathBuf>) -> TokenizerSpec {
        let path = path.into();
        TokenizerSpec {
            kind: TokenizerKind::ExternalVocabFile(path.clone()),
            description: format!("vocab:{} (greedy longest-match)", path.display()),
        }
    }

    /// Parses the CLI flag forms `bytes`, `approx4`, `vocab:<path>`.
    pub fn parse_flag(s: &str) -> Result<TokenizerSpec, String> {
        match s {
            "bytes" => Ok(TokenizerSpec::bytes()),
            "approx4" => Ok(TokenizerSpec::approx4()),
            _ => match s.strip_prefix("vocab:") {
                Some(path) if !path.is_empty() => Ok(TokenizerSpec::vocab(path)),
                _ => Err(format!(
                    "unknown tokenizer {s:?}; expected bytes, approx4, or vocab:<path>"
                )),
            },
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VocabLoadError {
    #[error("cannot read vocab file {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("vocab file {path} contains no tokens")]
    Empty { path: PathBuf },
}

/// A loaded tokenizer. The external-vocab variant treats each non-empty
/// line of the file as one token and counts by greedy longest match;
/// bytes with no matching token count as one token each.
pub struct Tokenizer {
    kind: LoadedKind,
}

enum LoadedKind {
    Bytes,
    Approx4Bytes,
    Vocab { tokens: HashSet<Vec<u8>>, max_len: usize },
}

impl Tokenizer {
    pub fn load(spec: &TokenizerSpec) -> Result<Tokenizer, VocabLoadError> {
        let kind = match &spec.kind {
            TokenizerKind::Bytes => LoadedKind::Bytes,
            TokenizerKind::Approx4Bytes => LoadedKind::Approx4Bytes,
            TokenizerKind::ExternalVocabFile(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|source| VocabLoadError::Io { path: path.clone(), source })?;
                let mut tokens: HashSet<Vec<u8>> = HashSet::new();
                let mut max_len = 0;
                for line in text.lines() {
                    if line.is_empty() {
                        continue;
                    }
                    max_len = max_len.max(line.len());
                    tokens.insert(line.as_bytes().to_vec());
                }
                if tokens.is_empty() {
                    return Err(VocabLoadError::Empty { path: path.clone() });
                }
                LoadedKind::Vocab { tokens, max_len }
            }
        };
        Ok(Tokenizer { kind })
    }

    pub fn token_length(&self, text: &str) -> u64 {
        let bytes = text.as_bytes();
        match &self.kind {
            LoadedKind::Bytes => bytes.len() as u64,
            LoadedKind::Approx4Bytes => (bytes.len() as u64).div_ceil(4),
            LoadedKind::Vocab { tokens, max_len } => {
                let mut count = 0u64;
                let mut i = 0;
                while i < bytes.len() {
                    let top = (*max_len).min(bytes.len() - i);
                    let matched = (1..=top)
                        .rev()
                        .find(|&l| tokens.contains(&bytes[i..i + l]))
                        .unwrap_or(1);
                    i += matched;
                    count += 1;
                }
                count
            }
        }
    }
}

pub fn token_length(text: &str, tok: &TokenizerSpec) -> Result<u64, VocabLoadError> {
    Ok(Tokenizer::load(tok)?.token_length(text))
}

/// Hash of the canonical form of an SVG: parse, normalize into the
/// standard frame, and reserialize, so formatting differences collapse.
/// Text that does not parse or normalize hashes as raw bytes.
pub fn content_hash(text: &str) -> u64 {
    if let Ok(doc) = parse_svg(text) {
        let canonical = match normalize(&doc, CANONICAL_FRAME) {
            Ok(n) => serialize(&n),
            Err(_) => serialize(&doc),
        };
        return fnv1a_64(canonical.as_bytes());
    }
    fnv1a_64(text.as_bytes())
}

/// Keeps entries whose token_len is within the context budget; returns
/// the survivors and the number dropped.
pub fn filter_by_context(
    entries: Vec<ManifestEntry>,
    max_tokens: u64,
) -> (Vec<ManifestEntry>, usize) {
    let before = entries.len();
    let kept: Vec<ManifestEntry> =
        entries.into_iter().filter(|e| e.token_len <= max_tokens).collect();
    let dropped = before - kept.len();
    (kept, dropped)
}

/// First occurrence per content hash wins; order is otherwise preserved.
pub fn dedup(entries: Vec<ManifestEntry>) -> Vec<ManifestEntry> {
    let mut seen: HashSet<u64> = HashSet::new();
    entries.into_iter().filter(|e| seen.insert(e.content_hash)).collect()
}

/// Removes entries whose content hash appears in the exclusion manifest.
pub fn dedup_against(
    entries: Vec<ManifestEntry>,
    exclusion: &[ManifestEntry],
) -> Vec<ManifestEntry> {
    let excluded: HashSet<u64> = exclusion.iter().map(|e| e.content_hash).collect();
    entries.into_iter().filter(|e| !excluded.contains(&e.content_hash)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SplitError {
    #[error("split ratios must be non-negative and sum to 1")]
    BadRatios,
}

/// Assigns train/val/test splits by ordering entries under a seeded hash
/// of their ids and cutting at the ratio boundaries. Val and test counts
/// round to nearest; train takes the remainder. The assignment depends
/// only on the id set, the ratios, and the seed, never on input order.
pub fn make_splits(
    mut entries: Vec<ManifestEntry>,
    ratios: (f64, f64, f64),
    seed: u64,
) -> Result<Vec<ManifestEntry>, SplitError> {
    let (train, val, test) = ratios;
    if train < 0.0 || val < 0.0 || test < 0.0 || (train + val + test - 1.0).abs() > 1e-9 {
        return Err(SplitError::BadRatios);
    }
    let n = entries.len();
    let mut order: Vec<usize> = (0..n).collect();
    let key = |e: &ManifestEntry| stream(seed, &[fnv1a_64(e.id.as_bytes())]);
    order.sort_by(|&a, &b| {
        key(&entries[a])
            .cmp(&key(&entries[b]))
            .then_with(|| entries[a].id.cmp(&entries[b].id))
    });
    let val_n = ((n as f64) * val).round() as usize;
    let val_n = val_n.min(n);
    let test_n = (((n as f64) * test).round() as usize).min(n - val_n);
    let train_n = n - val_n - test_n;
    for (pos, &i) in order.iter().enumerate() {
        entries[i].split = if pos < train_n {
            Split::Train
        } else if pos < train_n + val_n {
            Split::Val
        } else {
            Split::Test
        };
    }
    Ok(entries)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub train: usize,
    pub val: usize,
    pub test: usize,
    pub test_sim: usize,
    pub unassigned: usize,
    pub token_mean: f64,
    pub token_std: f64,
    pub tokenizer: String,
}

impl DatasetStats {
    pub fn total(&self) -> usize {
        self.train + self.val + self.test + self.test_sim + self.unassigned
    }

    /// "2,121 ± 1,868" style: rounded to integers, thousands separators.
    pub fn format_mean_std(&self) -> String {
        format!(
            "{} ± {}",
            thousands(self.token_mean.round() as u64),
            thousands(self.token_std.round() as u64)
        )
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("split       samples\n");
        for (name, count) in [
            ("train", self.train),
            ("val", self.val),
            ("test", self.test),
            ("test-sim", self.test_sim),
            ("unassigned", self.unassigned),
        ] {
            out.push_str(&format!("{name:<11} {}\n", thousands(count as u64)));
        }
        out.push_str(&format!("total       {}\n", thousands(self.total() as u64)));
        out.push_str(&format!("avg token length: {}\n", self.format_mean_std()));
        out.push_str(&format!("tokenizer: {}\n", self.tokenizer));
        out
    }
}

fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// Per-split counts plus the population mean/stddev of token lengths over
/// all entries.
pub fn dataset_stats(entries: &[ManifestEntry], tok: &TokenizerSpec) -> DatasetStats {
    let mut stats = DatasetStats {
        train: 0,
        val: 0,
        test: 0,
        test_sim: 0,
        unassigned: 0,
        token_mean: 0.0,
        token_std: 0.0,
        tokenizer: tok.description.clone(),
    };
    for e in entries {
        match e.split {
            Split::Train => stats.train += 1,
            Split::Val => stats.val += 1,
            Split::Test => stats.test += 1,
            Split::TestSim => stats.test_sim += 1,
            Split::Unassigned => stats.unassigned += 1,
        }
    }
    if !entries.is_empty() {
        let n = entries.len() as f64;
        let mean = entries.iter().map(|e| e.token_len as f64).sum::<f64>() / n;
        let var = entries
            .iter()
            .map(|e| {
                let d = e.token_len as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        stats.token_mean = mean;
        stats.token_std = var.sqrt();
    }
    stats
}

/// Scans a directory tree for `.svg` files and builds manifest entries
/// with ids relative to the root (slash-separated, extension dropped),
/// paths stored relative to `manifest_dir`, sibling `.png`/`.ppm` files
/// attached as raster ground truth, and populated token/hash fields.
pub fn build_manifest(
    root: &Path,
    manifest_dir: &Path,
    tok: &Tokenizer,
) -> Result<Vec<ManifestEntry>, ManifestIoError> {
    let root = root.canonicalize()?;
    let manifest_dir = manifest_dir.canonicalize()?;
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(&root)
        .sort_by_file_name()
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| {
            p.extension()
                .map(|x| x.eq_ignore_ascii_case("svg"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();

    let mut entries = Vec::new();
    let mut seen: HashMap<String, PathBuf> = HashMap::new();
    for path in files {
        let rel = path.strip_prefix(&root).expect("walkdir stays under root");
        let id = {
            let no_ext = rel.with_extension("");
            no_ext
                .components()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .collect::<Vec<_>>()
                .join("/")
        };
        if let Some(prev) = seen.insert(id.clone(), path.clone()) {
            return Err(ManifestIoError::DuplicateId {
                id: format!("{id} ({} vs {})", prev.display(), path.display()),
                line: entries.len() + 1,
            });
        }
        let text = fs::read_to_string(&path)?;
        let png_path = ["png", "ppm"]
            .iter()
            .map(|ext| path.with_extension(ext))
            .find(|p| p.exists())
            .map(|p| relative_to(&manifest_dir, &p));
        entries.push(ManifestEntry {
            id,
            svg_path: relative_to(&manifest_dir, &path),
            png_path,
            split: Split::Unassigned,
            token_len: tok.token_length(&text),
            content_hash: content_hash(&text),
        });
    }
    Ok(entries)
}

/// Path of `target` relative to `base`; both must be absolute. Falls back
/// to the absolute target when they share no root.
fn relative_to(base: &Path, target: &Path) -> PathBuf {
    let b: Vec<Component> = base.components().collect();
    let t: Vec<Component> = target.components().collect();
    let common = b.iter().zip(t.iter()).take_while(|(x, y)| x == y).count();
    if common == 0 {
        return target.to_path_buf();
    }
    let mut out = PathBuf::new();
    for _ in common..b.len() {
        out.push("..");
    }
    for c in &t[common..] {
        out.push(c.as_os_str());
    }
    if out.as_os_str().is_empty() {
        out.push(".");
    }
    out
}
