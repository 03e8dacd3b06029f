//! Dependency-path patterns between word pairs.
//!
//! A pattern is the simple path between the two target tokens of a sentence,
//! each node rendered as `lemma/POS/deprel/label`, nodes joined by ` -- `.
//! The endpoints carry the placeholders `X` and `Y` instead of their lemmas.
//! The label is either the node's edge distance from the path's lowest
//! common ancestor or its direction relative to it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::treebank::Sentence;

pub const NODE_SEPARATOR: &str = " -- ";
pub const FIELD_SEPARATOR: char = '/';
pub const DEFAULT_MAX_PATH_LEN: usize = 10;

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("malformed pattern key {key:?}: {reason}")]
    MalformedKey { key: String, reason: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Which fourth feature annotates pattern nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    #[default]
    Distance,
    Direction,
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureMode::Distance => "distance",
            FeatureMode::Direction => "direction",
        })
    }
}

impl FromStr for FeatureMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "distance" => Ok(FeatureMode::Distance),
            "direction" => Ok(FeatureMode::Direction),
            other => Err(format!("unknown feature mode {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Up,
    Anchor,
    Down,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Anchor => "anchor",
            Direction::Down => "down",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LemmaSlot {
    X,
    Y,
    Lemma(String),
}

impl fmt::Display for LemmaSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaSlot::X => f.write_str("X"),
            LemmaSlot::Y => f.write_str("Y"),
            LemmaSlot::Lemma(l) => f.write_str(l),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    Distance(usize),
    Direction(Direction),
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeLabel::Distance(d) => write!(f, "{d}"),
            NodeLabel::Direction(d) => f.write_str(d.as_str()),
        }
    }
}

impl NodeLabel {
    pub fn mode(&self) -> FeatureMode {
        match self {
            NodeLabel::Distance(_) => FeatureMode::Distance,
            NodeLabel::Direction(_) => FeatureMode::Direction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternNode {
    pub lemma_slot: LemmaSlot,
    pub pos: String,
    pub deprel: String,
    pub label: NodeLabel,
}

impl fmt::Display for PatternNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}/{}", self.lemma_slot, self.pos, self.deprel, self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub nodes: Vec<PatternNode>,
    pub key: String,
    /// Occurrence count of this pattern for one word pair.
    pub count: u64,
}

impl Pattern {
    pub fn new(nodes: Vec<PatternNode>, count: u64) -> Self {
        let key = render_key(&nodes);
        Pattern { nodes, key, count }
    }

    pub fn from_key(key: &str, count: u64) -> Result<Self, PatternError> {
        Ok(Pattern {
            nodes: parse_key(key)?,
            key: key.to_string(),
            count,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub fn render_key(nodes: &[PatternNode]) -> String {
    nodes
        .iter()
        .map(PatternNode::to_string)
        .collect::<Vec<_>>()
        .join(NODE_SEPARATOR)
}

/// Parses a pattern key back into its nodes.
pub fn parse_key(key: &str) -> Result<Vec<PatternNode>, PatternError> {
    let bad = |reason: String| PatternError::MalformedKey {
        key: key.to_string(),
        reason,
    };
    let parts: Vec<&str> = key.split(NODE_SEPARATOR).collect();
    if parts.len() < 2 {
        return Err(bad("fewer than two nodes".into()));
    }
    let last = parts.len() - 1;
    parts
        .iter()
        .enumerate()
        .map(|(i, part)| {
            let fields: Vec<&str> = part.split(FIELD_SEPARATOR).collect();
            if fields.len() != 4 || fields.iter().any(|f| f.is_empty()) {
                return Err(bad(format!("node {i} {part:?} does not have 4 fields")));
            }
            let lemma_slot = match (i, fields[0]) {
                (0, "X") => LemmaSlot::X,
                (i, "Y") if i == last => LemmaSlot::Y,
                (0, _) => return Err(bad("first node is not X".into())),
                (i, _) if i == last => return Err(bad("last node is not Y".into())),
                (_, lemma) => LemmaSlot::Lemma(lemma.to_string()),
            };
            let label = match fields[3] {
                "up" => NodeLabel::Direction(Direction::Up),
                "anchor" => NodeLabel::Direction(Direction::Anchor),
                "down" => NodeLabel::Direction(Direction::Down),
                d => NodeLabel::Distance(
                    d.parse()
                        .map_err(|_| bad(format!("node {i} has label {d:?}")))?,
                ),
            };
            Ok(PatternNode {
                lemma_slot,
                pos: fields[1].to_string(),
                deprel: fields[2].to_string(),
                label,
            })
        })
        .collect()
}

/// All `(ix, iy)` token-id pairs where `ix` has lemma `x` and `iy` lemma `y`.
pub fn find_pair_occurrences(s: &Sentence, x: &str, y: &str) -> Vec<(usize, usize)> {
    let xs: Vec<usize> = s.tokens().iter().filter(|t| t.lemma == x).map(|t| t.id).collect();
    let ys: Vec<usize> = s.tokens().iter().filter(|t| t.lemma == y).map(|t| t.id).collect();
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &ix in &xs {
        for &iy in &ys {
            if ix != iy {
                out.push((ix, iy));
            }
        }
    }
    out
}

/// The unique tree path from `ix` to `iy`: up to their lowest common
/// ancestor, then down to `iy`.
pub fn simple_path(s: &Sentence, ix: usize, iy: usize) -> Vec<usize> {
    let up: Vec<usize> = s.ancestors(ix).collect();
    let mut on_up = vec![usize::MAX; s.len() + 1];
    for (i, &id) in up.iter().enumerate() {
        on_up[id] = i;
    }
    let mut down = Vec::new();
    let mut lca_pos = usize::MAX;
    for id in s.ancestors(iy) {
        if on_up[id] != usize::MAX {
            lca_pos = on_up[id];
            break;
        }
        down.push(id);
    }
    let mut path = up[..=lca_pos].to_vec();
    path.extend(down.into_iter().rev());
    path
}

/// Position of the lowest common ancestor within a simple path: the last
/// node reached while ascending.
pub fn anchor_position(path: &[usize], s: &Sentence) -> usize {
    path.windows(2)
        .position(|w| s.head(w[0]) != Some(w[1]))
        .unwrap_or(path.len() - 1)
}

/// Edge distance of every path node from the anchor.
pub fn annotate_distance(path: &[usize], s: &Sentence) -> Vec<usize> {
    let anchor = anchor_position(path, s);
    (0..path.len()).map(|i| i.abs_diff(anchor)).collect()
}

pub fn annotate_direction(path: &[usize], s: &Sentence) -> Vec<Direction> {
    let anchor = anchor_position(path, s);
    (0..path.len())
        .map(|i| match i.cmp(&anchor) {
            std::cmp::Ordering::Less => Direction::Up,
            std::cmp::Ordering::Equal => Direction::Anchor,
            std::cmp::Ordering::Greater => Direction::Down,
        })
        .collect()
}

/// Renders the occurrence `(ix, iy)` as a pattern, or `None` when the path
/// exceeds `max_path_len` nodes.
pub fn build_pattern(
    s: &Sentence,
    ix: usize,
    iy: usize,
    mode: FeatureMode,
    max_path_len: usize,
) -> Option<Pattern> {
    let path = simple_path(s, ix, iy);
    if path.len() > max_path_len {
        return None;
    }
    let labels: Vec<NodeLabel> = match mode {
        FeatureMode::Distance => annotate_distance(&path, s)
            .into_iter()
            .map(NodeLabel::Distance)
            .collect(),
        FeatureMode::Direction => annotate_direction(&path, s)
            .into_iter()
            .map(NodeLabel::Direction)
            .collect(),
    };
    let last = path.len() - 1;
    let nodes = path
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(i, (&id, label))| {
            let token = s.token(id);
            let lemma_slot = match i {
                0 => LemmaSlot::X,
                i if i == last => LemmaSlot::Y,
                _ => LemmaSlot::Lemma(token.lemma.clone()),
            };
            PatternNode {
                lemma_slot,
                pos: token.pos.clone(),
                deprel: token.deprel.clone(),
                label,
            }
        })
        .collect();
    Some(Pattern::new(nodes, 1))
}

pub type WordPair = (String, String);

/// Per-pair pattern counts: `(x, y) -> key -> count`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtractionMap {
    pub pairs: BTreeMap<WordPair, BTreeMap<String, u64>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtractionStats {
    pub sentences: u64,
    pub skipped_sentences: u64,
    pub occurrences: u64,
    pub skipped_long_paths: u64,
}

impl ExtractionStats {
    pub fn merge(&mut self, other: &ExtractionStats) {
        self.sentences += other.sentences;
        self.skipped_sentences += other.skipped_sentences;
        self.occurrences += other.occurrences;
        self.skipped_long_paths += other.skipped_long_paths;
    }

    pub fn write_tsv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "sentences_scanned\t{}", self.sentences)?;
        writeln!(out, "sentences_skipped\t{}", self.skipped_sentences)?;
        writeln!(out, "occurrences_found\t{}", self.occurrences)?;
        writeln!(out, "paths_skipped_length_cap\t{}", self.skipped_long_paths)
    }
}

impl ExtractionMap {
    pub fn add(&mut self, pair: &WordPair, key: String, count: u64) {
        if let Some(keys) = self.pairs.get_mut(pair) {
            *keys.entry(key).or_insert(0) += count;
        } else {
            self.pairs
                .insert(pair.clone(), BTreeMap::from([(key, count)]));
        }
    }

    /// Sums counts from `other` into `self`.
    pub fn merge(&mut self, other: ExtractionMap) {
        for (pair, keys) in other.pairs {
            let target = self.pairs.entry(pair).or_default();
            for (key, count) in keys {
                *target.entry(key).or_insert(0) += count;
            }
        }
    }

    pub fn patterns(&self, pair: &WordPair) -> Option<&BTreeMap<String, u64>> {
        self.pairs.get(pair)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Writes `x \t y \t key \t count` lines sorted by `(x, y, key)`.
    pub fn write_tsv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for ((x, y), keys) in &self.pairs {
            for (key, count) in keys {
                writeln!(out, "{x}\t{y}\t{key}\t{count}")?;
            }
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self, PatternError> {
        let mut map = ExtractionMap::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(PatternError::Malformed {
                    line: line_no,
                    message: format!("expected 4 columns, found {}", cols.len()),
                });
            }
            let count: u64 = cols[3].parse().map_err(|_| PatternError::Malformed {
                line: line_no,
                message: format!("bad count {:?}", cols[3]),
            })?;
            parse_key(cols[2])?;
            map.add(&(cols[0].to_string(), cols[1].to_string()), cols[2].to_string(), count);
        }
        Ok(map)
    }
}

/// Index from lemma to the pairs it participates in.
struct PairIndex<'a> {
    pairs: &'a [WordPair],
    by_x: HashMap<&'a str, Vec<usize>>,
}

impl<'a> PairIndex<'a> {
    fn new(pairs: &'a [WordPair]) -> Self {
        let mut by_x: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, (x, _)) in pairs.iter().enumerate() {
            by_x.entry(x.as_str()).or_default().push(i);
        }
        PairIndex { pairs, by_x }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExtractOptions {
    pub mode: FeatureMode,
    pub max_path_len: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            mode: FeatureMode::Distance,
            max_path_len: DEFAULT_MAX_PATH_LEN,
        }
    }
}

fn extract_sentence(
    s: &Sentence,
    index: &PairIndex<'_>,
    opts: ExtractOptions,
    map: &mut ExtractionMap,
    stats: &mut ExtractionStats,
) {
    stats.sentences += 1;
    let mut lemmas: Vec<&str> = s.tokens().iter().map(|t| t.lemma.as_str()).collect();
    lemmas.sort_unstable();
    lemmas.dedup();
    for x in &lemmas {
        let Some(candidates) = index.by_x.get(x) else {
            continue;
        };
        for &pi in candidates {
            let pair = &index.pairs[pi];
            if lemmas.binary_search(&pair.1.as_str()).is_err() {
                continue;
            }
            for (ix, iy) in find_pair_occurrences(s, &pair.0, &pair.1) {
                stats.occurrences += 1;
                match build_pattern(s, ix, iy, opts.mode, opts.max_path_len) {
                    Some(p) => map.add(pair, p.key, 1),
                    None => stats.skipped_long_paths += 1,
                }
            }
        }
    }
}

/// Extracts patterns for every listed pair from every sentence.
///
/// Sentences are processed in parallel and partial maps merged by count
/// addition, so the result does not depend on scheduling.
pub fn extract_corpus_patterns(
    corpus: &[Sentence],
    pairs: &[WordPair],
    opts: ExtractOptions,
) -> (ExtractionMap, ExtractionStats) {
    let index = PairIndex::new(pairs);
    corpus
        .par_chunks(256)
        .map(|chunk| {
            let mut map = ExtractionMap::default();
            let mut stats = ExtractionStats::default();
            for s in chunk {
                extract_sentence(s, &index, opts, &mut map, &mut stats);
            }
            (map, stats)
        })
        .reduce(
            || (ExtractionMap::default(), ExtractionStats::default()),
            |(mut m1, mut s1), (m2, s2)| {
                m1.merge(m2);
                s1.merge(&s2);
                (m1, s1)
            },
        )
}

/// Drops patterns seen fewer than `min_count` times, then pairs left empty.
pub fn filter_patterns(map: &ExtractionMap, min_count: u64) -> ExtractionMap {
    let pairs = map
        .pairs
        .iter()
        .filter_map(|(pair, keys)| {
            let kept: BTreeMap<String, u64> = keys
                .iter()
                .filter(|(_, &c)| c >= min_count)
                .map(|(k, &c)| (k.clone(), c))
                .collect();
            (!kept.is_empty()).then(|| (pair.clone(), kept))
        })
        .collect();
    ExtractionMap { pairs }
}
