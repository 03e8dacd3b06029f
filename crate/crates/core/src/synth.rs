//! Synthetic parsed corpora with a known antonym/synonym signal.
//!
//! Antonym pairs co-occur in "from X to Y" and "either X or Y" trees,
//! synonym pairs in "X means Y" and "X, like Y" trees. A shared
//! "both X and Y" shape carries no signal. Each shape comes in several
//! lexical or syntactic variants so every pair gets several distinct
//! patterns.

use std::collections::BTreeSet;
use std::io::{self, Write};

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{write_pairs, Label, LabeledPair, WordClass};
use crate::treebank::{Sentence, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    FromTo,
    EitherOr,
    Means,
    Like,
    Both,
}

impl Shape {
    pub fn label(self) -> Option<Label> {
        match self {
            Shape::FromTo | Shape::EitherOr => Some(Label::Antonym),
            Shape::Means | Shape::Like => Some(Label::Synonym),
            Shape::Both => None,
        }
    }

    pub fn variants(self) -> usize {
        match self {
            Shape::FromTo | Shape::Means => VERBS_FROM_TO.len(),
            Shape::EitherOr => FRAMES.len(),
            Shape::Like => FRAMES.len() * LIKE_PREPS.len(),
            Shape::Both => 2,
        }
    }
}

const VERBS_FROM_TO: [(&str, &str); 8] = [
    ("moved", "move"),
    ("changed", "change"),
    ("shifted", "shift"),
    ("turned", "turn"),
    ("swung", "swing"),
    ("switched", "switch"),
    ("went", "go"),
    ("drifted", "drift"),
];

const VERBS_MEANS: [(&str, &str); 8] = [
    ("means", "mean"),
    ("signifies", "signify"),
    ("denotes", "denote"),
    ("equals", "equal"),
    ("matches", "match"),
    ("resembles", "resemble"),
    ("implies", "imply"),
    ("suggests", "suggest"),
];

const LIKE_PREPS: [&str; 2] = ["like", "as"];

/// Frames placing X under different heads: the relation of X to its head.
const FRAMES: [&str; 5] = ["ROOT", "acomp", "xcomp", "oprd", "attr"];

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub pairs_per_label: usize,
    pub word_class: WordClass,
    pub seed: u64,
    /// Frequent patterns per pair, drawn uniformly from this range.
    pub patterns: (usize, usize),
    /// Occurrences of each frequent pattern.
    pub count: (u64, u64),
    /// Probability of an extra signal-free pattern per pair.
    pub noise: f64,
    /// Probability of an extra pattern too rare to survive filtering.
    pub rare: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            pairs_per_label: 200,
            word_class: WordClass::Adjective,
            seed: 1,
            patterns: (5, 6),
            count: (5, 8),
            noise: 0.3,
            rare: 0.3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthCorpus {
    pub sentences: Vec<Sentence>,
    pub pairs: Vec<LabeledPair>,
}

impl SynthCorpus {
    pub fn write_conllu<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for (i, s) in self.sentences.iter().enumerate() {
            writeln!(out, "# sent_id = {}", i + 1)?;
            s.write_conllu(out)?;
        }
        Ok(())
    }

    pub fn write_pairs<W: Write>(&self, out: &mut W) -> io::Result<()> {
        write_pairs(&self.pairs, out)
    }
}

fn target_tag(class: WordClass) -> &'static str {
    match class {
        WordClass::Adjective => "JJ",
        WordClass::Verb => "VB",
        WordClass::Noun => "NN",
    }
}

type Row<'a> = (&'a str, &'a str, &'a str, usize, &'a str);

fn sentence(rows: &[Row], x: &str, y: &str, tag: &str) -> Sentence {
    let tokens = rows
        .iter()
        .enumerate()
        .map(|(i, &(form, lemma, pos, head, deprel))| {
            let (form, lemma, pos) = match form {
                "X" => (x, x, tag),
                "Y" => (y, y, tag),
                _ => (form, lemma, pos),
            };
            Token {
                id: i + 1,
                form: form.to_string(),
                lemma: lemma.to_string(),
                pos: pos.to_string(),
                head,
                deprel: deprel.to_string(),
            }
        })
        .collect();
    Sentence::new(tokens).expect("synthetic frames are trees")
}

/// The X-headed "either X or Y" / "X, like Y" subtree hung under one of
/// the frames. `middle` renders the material between X and Y.
fn framed(frame: &str, middle: &[Row], x: &str, y: &str, tag: &str) -> Sentence {
    // Frame prefixes; X is always token 4 except in the ROOT frame.
    let (prefix, x_head): (Vec<Row>, usize) = match frame {
        "ROOT" => (vec![("It", "it", "PRP", 4, "nsubj"), ("is", "be", "VBZ", 4, "cop")], 0),
        "acomp" => (vec![("They", "they", "PRP", 2, "nsubj"), ("seem", "seem", "VBP", 0, "ROOT")], 2),
        "xcomp" => (vec![("Make", "make", "VB", 0, "ROOT"), ("it", "it", "PRP", 4, "nsubj")], 1),
        "oprd" => (vec![("Call", "call", "VB", 0, "ROOT"), ("them", "they", "PRP", 1, "dobj")], 1),
        _ => (vec![("That", "that", "DT", 2, "nsubj"), ("was", "be", "VBD", 0, "ROOT")], 2),
    };
    let root = if x_head == 0 { 4 } else { prefix.iter().position(|r| r.3 == 0).unwrap() + 1 };
    let mut rows = prefix;
    // Token 3 is the pre-X word ("either" or a determiner-like "so").
    rows.push(middle[0]);
    rows.push(("X", "", "", x_head, frame));
    rows.extend_from_slice(&middle[1..]);
    rows.push((".", ".", ".", root, "punct"));
    sentence(&rows, x, y, tag)
}

fn render(shape: Shape, variant: usize, x: &str, y: &str, tag: &str) -> Sentence {
    match shape {
        Shape::FromTo => {
            let (form, lemma) = VERBS_FROM_TO[variant];
            sentence(
                &[
                    ("They", "they", "PRP", 2, "nsubj"),
                    (form, lemma, "VBD", 0, "ROOT"),
                    ("from", "from", "IN", 2, "prep"),
                    ("X", "", "", 3, "pobj"),
                    ("to", "to", "IN", 2, "prep"),
                    ("Y", "", "", 5, "pobj"),
                    (".", ".", ".", 2, "punct"),
                ],
                x,
                y,
                tag,
            )
        }
        Shape::Means => {
            let (form, lemma) = VERBS_MEANS[variant];
            sentence(
                &[
                    ("X", "", "", 2, "nsubj"),
                    (form, lemma, "VBZ", 0, "ROOT"),
                    ("Y", "", "", 2, "dobj"),
                    (".", ".", ".", 2, "punct"),
                ],
                x,
                y,
                tag,
            )
        }
        Shape::EitherOr => framed(
            FRAMES[variant],
            &[
                ("either", "either", "CC", 4, "preconj"),
                ("or", "or", "CC", 4, "cc"),
                ("Y", "", "", 4, "conj"),
            ],
            x,
            y,
            tag,
        ),
        Shape::Like => {
            let prep = LIKE_PREPS[variant / FRAMES.len()];
            framed(
                FRAMES[variant % FRAMES.len()],
                &[
                    ("so", "so", "RB", 4, "advmod"),
                    (",", ",", ",", 4, "punct"),
                    (prep, prep, "IN", 4, "prep"),
                    ("Y", "", "", 6, "pobj"),
                ],
                x,
                y,
                tag,
            )
        }
        Shape::Both if variant == 0 => sentence(
            &[
                ("They", "they", "PRP", 2, "nsubj"),
                ("like", "like", "VBP", 0, "ROOT"),
                ("both", "both", "DT", 4, "preconj"),
                ("X", "", "", 2, "dobj"),
                ("and", "and", "CC", 4, "cc"),
                ("Y", "", "", 4, "conj"),
                (".", ".", ".", 2, "punct"),
            ],
            x,
            y,
            tag,
        ),
        Shape::Both => sentence(
            &[
                ("X", "", "", 4, "nsubj"),
                ("and", "and", "CC", 1, "cc"),
                ("Y", "", "", 1, "conj"),
                ("are", "be", "VBP", 0, "ROOT"),
                ("here", "here", "RB", 4, "advmod"),
                (".", ".", ".", 4, "punct"),
            ],
            x,
            y,
            tag,
        ),
    }
}

fn nonce_words<R: Rng>(n: usize, rng: &mut R) -> Vec<String> {
    const C: &[u8] = b"bdfgklmnprstvz";
    const V: &[u8] = b"aeiou";
    let mut seen = BTreeSet::new();
    let mut words = Vec::with_capacity(n);
    while words.len() < n {
        let w: String = (0..3)
            .flat_map(|_| [C[rng.gen_range(0..C.len())] as char, V[rng.gen_range(0..V.len())] as char])
            .collect();
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    words
}

/// Generates `pairs_per_label` antonym and as many synonym pairs over
/// distinct nonce words, with their sentences in shuffled order.
pub fn generate(config: &SynthConfig) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let tag = target_tag(config.word_class);
    let n = config.pairs_per_label;
    let words = nonce_words(4 * n, &mut rng);
    let mut pairs = Vec::with_capacity(2 * n);
    let mut sentences = Vec::new();
    for i in 0..2 * n {
        let label = if i % 2 == 0 { Label::Antonym } else { Label::Synonym };
        let (x, y) = (&words[2 * i], &words[2 * i + 1]);
        let shapes = match label {
            Label::Antonym => [Shape::FromTo, Shape::EitherOr],
            Label::Synonym => [Shape::Means, Shape::Like],
        };
        let total = rng.gen_range(config.patterns.0..=config.patterns.1);
        let first = rng.gen_range(2..=total - 2).min(shapes[0].variants());
        let mut chosen: Vec<(Shape, usize)> = Vec::new();
        for (shape, k) in [(shapes[0], first), (shapes[1], total - first)] {
            let k = k.min(shape.variants());
            chosen.extend((0..shape.variants()).choose_multiple(&mut rng, k).into_iter().map(|v| (shape, v)));
        }
        if rng.gen_bool(config.noise) {
            chosen.push((Shape::Both, rng.gen_range(0..2)));
        }
        for &(shape, variant) in &chosen {
            for _ in 0..rng.gen_range(config.count.0..=config.count.1) {
                sentences.push(render(shape, variant, x, y, tag));
            }
        }
        if rng.gen_bool(config.rare) {
            let unused: Vec<(Shape, usize)> = shapes
                .iter()
                .flat_map(|&s| (0..s.variants()).map(move |v| (s, v)))
                .filter(|c| !chosen.contains(c))
                .collect();
            if let Some(&(shape, variant)) = unused.choose(&mut rng) {
                for _ in 0..rng.gen_range(1..config.count.0.max(2)) {
                    sentences.push(render(shape, variant, x, y, tag));
                }
            }
        }
        pairs.push(LabeledPair {
            x: x.clone(),
            y: y.clone(),
            label,
        });
    }
    sentences.shuffle(&mut rng);
    SynthCorpus { sentences, pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{extract_corpus_patterns, filter_patterns, ExtractOptions, FeatureMode, DEFAULT_MAX_PATH_LEN};
    use crate::treebank::{parse_conllu, ErrorMode};

    fn small() -> SynthConfig {
        SynthConfig {
            pairs_per_label: 20,
            ..SynthConfig::default()
        }
    }

    #[test]
    fn deterministic_by_seed() {
        let text = |c: &SynthConfig| {
            let mut buf = Vec::new();
            generate(c).write_conllu(&mut buf).unwrap();
            buf
        };
        assert_eq!(text(&small()), text(&small()));
        assert_ne!(text(&small()), text(&SynthConfig { seed: 2, ..small() }));
    }

    #[test]
    fn parses_strictly() {
        let corpus = generate(&small());
        let mut buf = Vec::new();
        corpus.write_conllu(&mut buf).unwrap();
        let parsed = parse_conllu(&buf[..], ErrorMode::Strict).unwrap();
        assert!(parsed.skipped.is_empty());
        assert_eq!(parsed.sentences, corpus.sentences);
        assert_eq!(corpus.pairs.len(), 40);
        assert_eq!(corpus.pairs.iter().filter(|p| p.label == Label::Antonym).count(), 20);
    }

    #[test]
    fn pairs_follow_their_shapes() {
        let corpus = generate(&small());
        let pairs: Vec<_> = corpus.pairs.iter().map(|p| (p.x.clone(), p.y.clone())).collect();
        let opts = ExtractOptions {
            mode: FeatureMode::Distance,
            max_path_len: DEFAULT_MAX_PATH_LEN,
        };
        let (map, _) = extract_corpus_patterns(&corpus.sentences, &pairs, opts);
        let map = filter_patterns(&map, 5);
        for p in &corpus.pairs {
            let keys = &map.pairs[&(p.x.clone(), p.y.clone())];
            assert!(keys.len() >= 5, "{p:?} has {} patterns", keys.len());
            for key in keys.keys() {
                let antonym_shape = key.contains("from/IN/prep/1")
                    || key.contains("Y/JJ/conj/1") && !key.contains("dobj") && !key.contains("nsubj");
                let synonym_shape = key.contains("/VBZ/ROOT/0 -- Y/JJ/dobj/1")
                    || key.contains("like/IN/prep/1") || key.contains("as/IN/prep/1");
                let noise = key.contains("Y/JJ/conj/1") && (key.contains("dobj") || key.contains("nsubj"));
                match p.label {
                    Label::Antonym => assert!(antonym_shape || noise, "{key}"),
                    Label::Synonym => assert!(synonym_shape || noise, "{key}"),
                }
            }
        }
    }
}
