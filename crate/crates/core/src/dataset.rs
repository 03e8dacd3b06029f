//! Labeled word pairs, dataset assembly, balanced splitting and vocabularies.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::{ExtractionMap, LemmaSlot, NodeLabel, Pattern, PatternError, WordPair};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("pair ({x}, {y}) listed with conflicting labels")]
    ConflictingLabels { x: String, y: String },
    #[error("self-pair ({0}, {0})")]
    SelfPair(String),
    #[error("split ratios {0:?} do not sum to 1")]
    BadRatios([f64; 3]),
    #[error("need at least one {0} example")]
    MissingLabel(Label),
    #[error("empty train split")]
    EmptyTrain,
    #[error("pair ({x}, {y}) has no patterns")]
    NoPatterns { x: String, y: String },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Antonym,
    Synonym,
}

impl Label {
    /// Binary target: 1 for antonyms (the positive class), 0 for synonyms.
    pub fn target(self) -> f64 {
        match self {
            Label::Antonym => 1.0,
            Label::Synonym => 0.0,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Label::Antonym => 1,
            Label::Synonym => 0,
        }
    }

    pub fn from_code(code: &str) -> Option<Label> {
        match code {
            "1" => Some(Label::Antonym),
            "0" => Some(Label::Synonym),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Antonym => "antonym",
            Label::Synonym => "synonym",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordClass {
    #[default]
    Adjective,
    Verb,
    Noun,
}

impl WordClass {
    pub const ALL: [WordClass; 3] = [WordClass::Adjective, WordClass::Verb, WordClass::Noun];
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordClass::Adjective => "adjective",
            WordClass::Verb => "verb",
            WordClass::Noun => "noun",
        })
    }
}

impl FromStr for WordClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "adjective" => Ok(WordClass::Adjective),
            "verb" => Ok(WordClass::Verb),
            "noun" => Ok(WordClass::Noun),
            other => Err(format!("unknown word class {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPair {
    pub x: String,
    pub y: String,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairExample {
    pub x: String,
    pub y: String,
    pub label: Label,
    pub patterns: Vec<Pattern>,
}

impl PairExample {
    pub fn pair(&self) -> WordPair {
        (self.x.clone(), self.y.clone())
    }
}

/// Reads `x \t y \t label` lines, lowercasing lemmas and dropping exact
/// duplicates. Blank lines and `#` comments are ignored.
pub fn load_pairs<R: BufRead>(reader: R) -> Result<Vec<LabeledPair>, DatasetError> {
    let mut seen: HashMap<WordPair, Label> = HashMap::new();
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(DatasetError::Malformed {
                line: line_no,
                message: format!("expected 3 tab-separated columns, found {}", cols.len()),
            });
        }
        let x = cols[0].trim().to_lowercase();
        let y = cols[1].trim().to_lowercase();
        if x.is_empty() || y.is_empty() || x.contains(['/', ' ']) || y.contains(['/', ' ']) {
            return Err(DatasetError::Malformed {
                line: line_no,
                message: "lemmas must be non-empty without '/' or spaces".into(),
            });
        }
        let label = Label::from_code(cols[2].trim()).ok_or_else(|| DatasetError::Malformed {
            line: line_no,
            message: format!("label must be 1 or 0, found {:?}", cols[2]),
        })?;
        if x == y {
            return Err(DatasetError::SelfPair(x));
        }
        match seen.get(&(x.clone(), y.clone())) {
            Some(&prev) if prev == label => continue,
            Some(_) => return Err(DatasetError::ConflictingLabels { x, y }),
            None => {}
        }
        seen.insert((x.clone(), y.clone()), label);
        out.push(LabeledPair { x, y, label });
    }
    Ok(out)
}

pub fn write_pairs<W: Write>(pairs: &[LabeledPair], out: &mut W) -> io::Result<()> {
    for p in pairs {
        writeln!(out, "{}\t{}\t{}", p.x, p.y, p.label.code())?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AssemblyStats {
    pub kept: usize,
    pub dropped_absent: usize,
    pub dropped_few_patterns: usize,
}

/// Attaches patterns to pairs, keeping pairs with at least `min_patterns`
/// distinct patterns.
pub fn assemble(
    pairs: &[LabeledPair],
    map: &ExtractionMap,
    min_patterns: usize,
) -> Result<(Vec<PairExample>, AssemblyStats), DatasetError> {
    let mut stats = AssemblyStats::default();
    let mut examples = Vec::new();
    for p in pairs {
        let Some(keys) = map.patterns(&(p.x.clone(), p.y.clone())) else {
            stats.dropped_absent += 1;
            continue;
        };
        if keys.len() < min_patterns {
            stats.dropped_few_patterns += 1;
            continue;
        }
        let patterns = keys
            .iter()
            .map(|(k, &c)| Pattern::from_key(k, c))
            .collect::<Result<Vec<_>, _>>()?;
        examples.push(PairExample {
            x: p.x.clone(),
            y: p.y.clone(),
            label: p.label,
            patterns,
        });
        stats.kept += 1;
    }
    Ok((examples, stats))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
    Validation,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
            Split::Validation => "validation",
        }
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            "validation" => Ok(Split::Validation),
            other => Err(format!("unknown split {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitDataset {
    pub train: Vec<PairExample>,
    pub test: Vec<PairExample>,
    pub validation: Vec<PairExample>,
    pub word_class: WordClass,
    pub seed: u64,
}

pub const DEFAULT_RATIOS: [f64; 3] = [0.70, 0.25, 0.05];

/// Downsamples the majority label to 1:1, then splits each label into
/// train/test/validation by `ratios` so that every split is balanced.
pub fn balance_and_split(
    examples: &[PairExample],
    ratios: [f64; 3],
    word_class: WordClass,
    seed: u64,
) -> Result<SplitDataset, DatasetError> {
    if ratios.iter().any(|r| *r < 0.0) || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(DatasetError::BadRatios(ratios));
    }
    let mut by_label: BTreeMap<Label, Vec<&PairExample>> = BTreeMap::new();
    for e in examples {
        by_label.entry(e.label).or_default().push(e);
    }
    for label in [Label::Antonym, Label::Synonym] {
        if !by_label.contains_key(&label) {
            return Err(DatasetError::MissingLabel(label));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = by_label.values().map(Vec::len).min().unwrap_or(0);
    let n_train = (n as f64 * ratios[0]).round() as usize;
    let n_test = ((n as f64 * ratios[1]).round() as usize).min(n - n_train);

    let mut out = SplitDataset {
        train: Vec::new(),
        test: Vec::new(),
        validation: Vec::new(),
        word_class,
        seed,
    };
    for group in by_label.values_mut() {
        // Sort first so the result depends only on the set of examples.
        group.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
        group.shuffle(&mut rng);
        group.truncate(n);
        out.train.extend(group[..n_train].iter().map(|e| (*e).clone()));
        out.test.extend(group[n_train..n_train + n_test].iter().map(|e| (*e).clone()));
        out.validation.extend(group[n_train + n_test..].iter().map(|e| (*e).clone()));
    }
    for split in [&mut out.train, &mut out.test, &mut out.validation] {
        split.shuffle(&mut rng);
    }
    Ok(out)
}

impl SplitDataset {
    pub fn split(&self, which: Split) -> &[PairExample] {
        match which {
            Split::Train => &self.train,
            Split::Test => &self.test,
            Split::Validation => &self.validation,
        }
    }

    /// Writes the manifest: a header comment, then `x \t y \t label \t split`.
    pub fn write_manifest<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# word_class={} seed={}", self.word_class, self.seed)?;
        for which in [Split::Train, Split::Test, Split::Validation] {
            for e in self.split(which) {
                writeln!(out, "{}\t{}\t{}\t{}", e.x, e.y, e.label.code(), which.as_str())?;
            }
        }
        Ok(())
    }

    /// Reads a manifest and attaches patterns from an extraction map.
    pub fn read_manifest<R: BufRead>(
        reader: R,
        patterns: &ExtractionMap,
    ) -> Result<SplitDataset, DatasetError> {
        let mut out = SplitDataset {
            train: Vec::new(),
            test: Vec::new(),
            validation: Vec::new(),
            word_class: WordClass::default(),
            seed: 0,
        };
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let bad = |message: String| DatasetError::Malformed { line: line_no, message };
            if let Some(header) = line.strip_prefix('#') {
                for field in header.split_whitespace() {
                    match field.split_once('=') {
                        Some(("word_class", v)) => out.word_class = v.parse().map_err(bad)?,
                        Some(("seed", v)) => {
                            out.seed = v.parse().map_err(|_| bad(format!("bad seed {v:?}")))?
                        }
                        _ => {}
                    }
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(bad(format!("expected 4 columns, found {}", cols.len())));
            }
            let label = Label::from_code(cols[2]).ok_or_else(|| bad(format!("bad label {:?}", cols[2])))?;
            let split: Split = cols[3].parse().map_err(bad)?;
            let pair = (cols[0].to_string(), cols[1].to_string());
            let keys = patterns.patterns(&pair).ok_or_else(|| DatasetError::NoPatterns {
                x: pair.0.clone(),
                y: pair.1.clone(),
            })?;
            let patterns = keys
                .iter()
                .map(|(k, &c)| Pattern::from_key(k, c))
                .collect::<Result<Vec<_>, _>>()?;
            let example = PairExample {
                x: pair.0,
                y: pair.1,
                label,
                patterns,
            };
            match split {
                Split::Train => out.train.push(example),
                Split::Test => out.test.push(example),
                Split::Validation => out.validation.push(example),
            }
        }
        Ok(out)
    }

    /// Patterns of every example, restricted to the pairs in the dataset.
    pub fn extraction_map(&self) -> ExtractionMap {
        let mut map = ExtractionMap::default();
        for which in [Split::Train, Split::Test, Split::Validation] {
            for e in self.split(which) {
                for p in &e.patterns {
                    map.add(&e.pair(), p.key.clone(), p.count);
                }
            }
        }
        map
    }

    /// Per-split pair counts and mean patterns per pair.
    pub fn summary(&self) -> DatasetSummary {
        let stats = |split: &[PairExample]| SplitSummary {
            pairs: split.len(),
            antonyms: split.iter().filter(|e| e.label == Label::Antonym).count(),
            mean_patterns: if split.is_empty() {
                0.0
            } else {
                split.iter().map(|e| e.patterns.len()).sum::<usize>() as f64 / split.len() as f64
            },
        };
        DatasetSummary {
            word_class: self.word_class,
            train: stats(&self.train),
            test: stats(&self.test),
            validation: stats(&self.validation),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSummary {
    pub pairs: usize,
    pub antonyms: usize,
    pub mean_patterns: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetSummary {
    pub word_class: WordClass,
    pub train: SplitSummary,
    pub test: SplitSummary,
    pub validation: SplitSummary,
}

impl DatasetSummary {
    /// Two small tables: pair counts per split and mean patterns per pair.
    pub fn write_tsv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "word_class\ttrain\ttest\tvalidation\ttotal")?;
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            self.word_class,
            self.train.pairs,
            self.test.pairs,
            self.validation.pairs,
            self.train.pairs + self.test.pairs + self.validation.pairs
        )?;
        writeln!(out)?;
        writeln!(out, "word_class\ttrain_mean_patterns\ttest_mean_patterns\tvalidation_mean_patterns")?;
        writeln!(
            out,
            "{}\t{:.1}\t{:.1}\t{:.1}",
            self.word_class, self.train.mean_patterns, self.test.mean_patterns, self.validation.mean_patterns
        )
    }
}

/// A dense string-to-index map with `reserved` symbols at the front.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolMap {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl SymbolMap {
    /// Reserved symbols first, then `symbols` in lexicographic order.
    pub fn new<I: IntoIterator<Item = String>>(reserved: &[&str], symbols: I) -> Self {
        let sorted: BTreeSet<String> = symbols.into_iter().collect();
        let all = reserved
            .iter()
            .map(|s| s.to_string())
            .chain(sorted.into_iter().filter(|s| !reserved.contains(&s.as_str())))
            .collect();
        Self::from_symbols(all)
    }

    pub fn from_symbols(symbols: Vec<String>) -> Self {
        let index = symbols.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        SymbolMap { symbols, index }
    }

    pub fn get(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    /// Index of `symbol`, or of the first reserved symbol (the unknown
    /// bucket) when unseen.
    pub fn lookup(&self, symbol: &str) -> usize {
        self.get(symbol).unwrap_or(0)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

pub const UNKNOWN: &str = "<unk>";
pub const X_SLOT: &str = "<X>";
pub const Y_SLOT: &str = "<Y>";

/// Symbol vocabularies behind every embedding table.
///
/// Lemma index 0 is the OOV lemma, 1 and 2 the X and Y slots. Every other
/// feature reserves index 0 for unknown symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub lemmas: SymbolMap,
    pub pos: SymbolMap,
    pub deprels: SymbolMap,
    pub distances: SymbolMap,
    pub directions: SymbolMap,
    /// Target words of the combined model's word table.
    pub words: SymbolMap,
}

pub const OOV_LEMMA: usize = 0;
pub const X_LEMMA: usize = 1;
pub const Y_LEMMA: usize = 2;

/// Vocabulary index of every feature of one pattern node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeIndices {
    pub lemma: usize,
    pub pos: usize,
    pub deprel: usize,
    pub label: usize,
}

/// A pattern reduced to vocabulary indices.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedPattern {
    pub nodes: Vec<NodeIndices>,
    pub count: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodedExample {
    pub x: usize,
    pub y: usize,
    pub patterns: Vec<EncodedPattern>,
    pub target: f64,
}

/// Builds pattern vocabularies from the train split only. The word
/// vocabulary covers the target words of `all_pairs`.
pub fn build_vocabulary<'a, I>(train: &[PairExample], all_pairs: I) -> Result<Vocabulary, DatasetError>
where
    I: IntoIterator<Item = &'a PairExample>,
{
    if train.iter().all(|e| e.patterns.is_empty()) {
        return Err(DatasetError::EmptyTrain);
    }
    let mut lemmas = BTreeSet::new();
    let mut pos = BTreeSet::new();
    let mut deprels = BTreeSet::new();
    let mut distances = BTreeSet::new();
    let mut directions = BTreeSet::new();
    for node in train.iter().flat_map(|e| &e.patterns).flat_map(|p| &p.nodes) {
        if let LemmaSlot::Lemma(l) = &node.lemma_slot {
            lemmas.insert(l.clone());
        }
        pos.insert(node.pos.clone());
        deprels.insert(node.deprel.clone());
        match node.label {
            NodeLabel::Distance(_) => distances.insert(node.label.to_string()),
            NodeLabel::Direction(_) => directions.insert(node.label.to_string()),
        };
    }
    let mut words: BTreeSet<String> = train.iter().flat_map(|e| [e.x.clone(), e.y.clone()]).collect();
    words.extend(all_pairs.into_iter().flat_map(|e| [e.x.clone(), e.y.clone()]));
    Ok(Vocabulary {
        lemmas: SymbolMap::new(&[UNKNOWN, X_SLOT, Y_SLOT], lemmas),
        pos: SymbolMap::new(&[UNKNOWN], pos),
        deprels: SymbolMap::new(&[UNKNOWN], deprels),
        distances: SymbolMap::new(&[UNKNOWN], distances),
        directions: SymbolMap::new(&[UNKNOWN], directions),
        words: SymbolMap::new(&[UNKNOWN], words),
    })
}

impl Vocabulary {
    /// The label vocabulary of a feature mode.
    pub fn labels(&self, mode: crate::pattern::FeatureMode) -> &SymbolMap {
        match mode {
            crate::pattern::FeatureMode::Distance => &self.distances,
            crate::pattern::FeatureMode::Direction => &self.directions,
        }
    }

    pub fn encode_pattern(&self, pattern: &Pattern) -> EncodedPattern {
        let nodes = pattern
            .nodes
            .iter()
            .map(|n| NodeIndices {
                lemma: match &n.lemma_slot {
                    LemmaSlot::X => X_LEMMA,
                    LemmaSlot::Y => Y_LEMMA,
                    LemmaSlot::Lemma(l) => self.lemmas.lookup(l),
                },
                pos: self.pos.lookup(&n.pos),
                deprel: self.deprels.lookup(&n.deprel),
                label: self.labels(n.label.mode()).lookup(&n.label.to_string()),
            })
            .collect();
        EncodedPattern {
            nodes,
            count: pattern.count as f64,
        }
    }

    pub fn encode(&self, example: &PairExample) -> EncodedExample {
        EncodedExample {
            x: self.words.lookup(&example.x),
            y: self.words.lookup(&example.y),
            patterns: example.patterns.iter().map(|p| self.encode_pattern(p)).collect(),
            target: example.label.target(),
        }
    }

    /// Named symbol maps in a fixed order, for serialization.
    pub fn named_maps(&self) -> [(&'static str, &SymbolMap); 6] {
        [
            ("lemma", &self.lemmas),
            ("pos", &self.pos),
            ("deprel", &self.deprels),
            ("distance", &self.distances),
            ("direction", &self.directions),
            ("word", &self.words),
        ]
    }

    pub fn set_named_map(&mut self, name: &str, map: SymbolMap) -> bool {
        let slot = match name {
            "lemma" => &mut self.lemmas,
            "pos" => &mut self.pos,
            "deprel" => &mut self.deprels,
            "distance" => &mut self.distances,
            "direction" => &mut self.directions,
            "word" => &mut self.words,
            _ => return false,
        };
        *slot = map;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::VILLAGE_KEY;

    fn example(x: &str, y: &str, label: Label, n_patterns: usize) -> PairExample {
        PairExample {
            x: x.into(),
            y: y.into(),
            label,
            patterns: (0..n_patterns)
                .map(|i| Pattern::from_key(&format!("X/JJ/amod/{i} -- Y/NN/nsubj/0"), 5).unwrap())
                .collect(),
        }
    }

    #[test]
    fn load_pairs_basic_and_duplicates() {
        let pairs = load_pairs("Old\tnew\t1\nold\tnew\t1\nbig\tlarge\t0\n".as_bytes()).unwrap();
        assert_eq!(
            pairs,
            vec![
                LabeledPair { x: "old".into(), y: "new".into(), label: Label::Antonym },
                LabeledPair { x: "big".into(), y: "large".into(), label: Label::Synonym },
            ]
        );
    }

    #[test]
    fn load_pairs_errors() {
        assert!(matches!(
            load_pairs("old\tnew\t1\nold\tnew\t0\n".as_bytes()),
            Err(DatasetError::ConflictingLabels { .. })
        ));
        assert!(matches!(
            load_pairs("old\tnew\n".as_bytes()),
            Err(DatasetError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            load_pairs("a\tb\t1\nold\tnew\tyes\n".as_bytes()),
            Err(DatasetError::Malformed { line: 2, .. })
        ));
        assert!(matches!(load_pairs("old\told\t1\n".as_bytes()), Err(DatasetError::SelfPair(_))));
    }

    #[test]
    fn assemble_thresholds() {
        let mut map = ExtractionMap::default();
        for i in 0..5 {
            map.add(&("a".into(), "b".into()), format!("X/JJ/amod/{i} -- Y/NN/nsubj/0"), 5);
        }
        for i in 0..4 {
            map.add(&("c".into(), "d".into()), format!("X/JJ/amod/{i} -- Y/NN/nsubj/0"), 5);
        }
        let pairs = vec![
            LabeledPair { x: "a".into(), y: "b".into(), label: Label::Antonym },
            LabeledPair { x: "c".into(), y: "d".into(), label: Label::Synonym },
            LabeledPair { x: "e".into(), y: "f".into(), label: Label::Synonym },
        ];
        let (examples, stats) = assemble(&pairs, &map, 5).unwrap();
        assert_eq!(examples.len(), 1);
        assert_eq!(examples[0].x, "a");
        assert_eq!(examples[0].patterns.len(), 5);
        assert_eq!(stats.dropped_few_patterns, 1);
        assert_eq!(stats.dropped_absent, 1);
    }

    fn labeled(n_ant: usize, n_syn: usize) -> Vec<PairExample> {
        (0..n_ant)
            .map(|i| example(&format!("a{i}"), &format!("b{i}"), Label::Antonym, 1))
            .chain((0..n_syn).map(|i| example(&format!("c{i}"), &format!("d{i}"), Label::Synonym, 1)))
            .collect()
    }

    fn count(split: &[PairExample], label: Label) -> usize {
        split.iter().filter(|e| e.label == label).count()
    }

    #[test]
    fn split_sizes_and_balance() {
        let ds = balance_and_split(&labeled(100, 100), DEFAULT_RATIOS, WordClass::Adjective, 7).unwrap();
        assert_eq!((ds.train.len(), ds.test.len(), ds.validation.len()), (140, 50, 10));
        for split in [&ds.train, &ds.test, &ds.validation] {
            assert_eq!(count(split, Label::Antonym), count(split, Label::Synonym));
        }
    }

    #[test]
    fn split_downsamples_majority() {
        let ds = balance_and_split(&labeled(100, 60), DEFAULT_RATIOS, WordClass::Adjective, 7).unwrap();
        assert_eq!(ds.train.len() + ds.test.len() + ds.validation.len(), 120);
    }

    #[test]
    fn split_is_deterministic_and_seed_dependent() {
        let data = labeled(30, 30);
        let a = balance_and_split(&data, DEFAULT_RATIOS, WordClass::Verb, 3).unwrap();
        let b = balance_and_split(&data, DEFAULT_RATIOS, WordClass::Verb, 3).unwrap();
        let c = balance_and_split(&data, DEFAULT_RATIOS, WordClass::Verb, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.train, c.train);
        // Input order does not matter.
        let mut reversed = data.clone();
        reversed.reverse();
        assert_eq!(balance_and_split(&reversed, DEFAULT_RATIOS, WordClass::Verb, 3).unwrap(), a);
    }

    #[test]
    fn split_errors() {
        assert!(matches!(
            balance_and_split(&labeled(10, 10), [0.7, 0.2, 0.05], WordClass::Noun, 1),
            Err(DatasetError::BadRatios(_))
        ));
        assert!(matches!(
            balance_and_split(&labeled(10, 0), DEFAULT_RATIOS, WordClass::Noun, 1),
            Err(DatasetError::MissingLabel(Label::Synonym))
        ));
    }

    #[test]
    fn vocabulary_from_village_pattern() {
        let train = vec![PairExample {
            x: "old".into(),
            y: "new".into(),
            label: Label::Antonym,
            patterns: vec![Pattern::from_key(VILLAGE_KEY, 1).unwrap()],
        }];
        let v = build_vocabulary(&train, &train).unwrap();
        assert_eq!(
            v.lemmas.symbols(),
            &["<unk>", "<X>", "<Y>", "provide", "service", "village", "with"]
        );
        assert_eq!(v.distances.symbols(), &["<unk>", "0", "1", "2", "3"]);
        assert_eq!(v.deprels.lookup("expl"), 0);
        assert_eq!(v.lemmas.lookup("zebra"), OOV_LEMMA);
        assert_eq!(v.words.symbols(), &["<unk>", "new", "old"]);
        let enc = v.encode(&train[0]);
        assert_eq!(enc.patterns[0].nodes[0].lemma, X_LEMMA);
        assert_eq!(enc.patterns[0].nodes[5].lemma, Y_LEMMA);
        assert_eq!(enc.patterns[0].nodes[2].lemma, v.lemmas.get("provide").unwrap());
        assert_eq!(enc.target, 1.0);
    }

    #[test]
    fn vocabulary_rejects_empty_train() {
        let train: Vec<PairExample> = vec![];
        assert!(matches!(build_vocabulary(&train, &train), Err(DatasetError::EmptyTrain)));
    }

    #[test]
    fn manifest_round_trip() {
        let ds = balance_and_split(&labeled(20, 20), DEFAULT_RATIOS, WordClass::Noun, 11).unwrap();
        let mut buf = Vec::new();
        ds.write_manifest(&mut buf).unwrap();
        let back = SplitDataset::read_manifest(&buf[..], &ds.extraction_map()).unwrap();
        assert_eq!(back, ds);
    }
}
