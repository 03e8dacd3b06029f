//! The `antsyn` pipeline: one subcommand per stage, each reading and
//! writing plain files so every intermediate result can be inspected.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use antsyn_core::baseline::{baseline_classify, cosine_features, CosineFeature};
use antsyn_core::dataset::{
    assemble, balance_and_split, build_vocabulary, load_pairs, EncodedExample, Label, PairExample, Split,
    SplitDataset, Vocabulary, WordClass,
};
use antsyn_core::embeddings::PretrainedVectors;
use antsyn_core::evaluation::{score, ResultsTable};
use antsyn_core::neural::gradcheck::{random_tiny_problem, GradCheckOptions};
use antsyn_core::neural::train::{evaluate, write_epoch_log};
use antsyn_core::neural::model::ALL_TABLES;
use antsyn_core::neural::{read_checkpoint, train, write_checkpoint, ModelConfig, ModelParams, Variant};
use antsyn_core::pattern::{
    extract_corpus_patterns, filter_patterns, ExtractOptions, ExtractionMap, ExtractionStats, FeatureMode,
    WordPair, DEFAULT_MAX_PATH_LEN,
};
use antsyn_core::synth::{generate, SynthConfig};
use antsyn_core::treebank::{parse_blocks, Blocks, ErrorMode};

/// Sentence blocks parsed and searched per extraction round.
const EXTRACT_CHUNK: usize = 20_000;

#[derive(Debug, Parser)]
#[command(name = "antsyn", version, about = "Pattern-based antonym/synonym distinction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Generate a synthetic parsed corpus and labeled pairs.
    Synth(SynthArgs),
    /// Extract simple-path patterns for word pairs from a CoNLL-U corpus.
    Extract(ExtractArgs),
    /// Filter patterns, assemble pairs and write a split manifest.
    Build(BuildArgs),
    /// Train a model on a manifest.
    Train(TrainArgs),
    /// Score a checkpoint on one split of a manifest.
    Eval(EvalArgs),
    /// Compare analytic gradients with finite differences on tiny models.
    Gradcheck(GradcheckArgs),
    /// Cosine-similarity baseline over pretrained word vectors.
    Baseline(BaselineArgs),
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct Common {
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct SynthArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub pairs_per_label: usize,
    #[arg(long, default_value = "adjective")]
    pub word_class: WordClass,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct ExtractArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, default_value = "distance")]
    pub feature: FeatureMode,
    /// Longest path, in nodes, turned into a pattern.
    #[arg(long, default_value_t = DEFAULT_MAX_PATH_LEN)]
    pub max_path_len: usize,
    /// Abort on the first malformed sentence instead of skipping it.
    #[arg(long)]
    pub strict: bool,
}

fn parse_ratios(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad ratio {p:?}")))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|_| "expected three comma-separated ratios".to_string())
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct BuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long)]
    pub patterns: PathBuf,
    #[arg(long)]
    pub pairs: PathBuf,
    /// Patterns seen fewer times than this for a pair are dropped.
    #[arg(long, default_value_t = 5)]
    pub min_count: u64,
    /// Pairs with fewer surviving patterns are dropped.
    #[arg(long, default_value_t = 5)]
    pub min_patterns: usize,
    /// Train, test and validation shares.
    #[arg(long, default_value = "0.70,0.25,0.05", value_parser = parse_ratios)]
    pub ratios: [f64; 3],
    #[arg(long, default_value = "adjective")]
    pub word_class: WordClass,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct DataArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Pattern file of the manifest's pairs; defaults to `examples.tsv`
    /// next to the manifest.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct TrainArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub data: DataArgs,
    /// Pretrained vectors for lemma and word tables.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long, default_value = "pattern")]
    pub variant: Variant,
    /// Defaults to the labels found in the patterns.
    #[arg(long)]
    pub feature: Option<FeatureMode>,
    #[arg(long, default_value_t = 40)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.5)]
    pub dropout: f64,
    #[arg(long, default_value_t = 100)]
    pub lemma_dim: usize,
    #[arg(long, default_value_t = 10)]
    pub label_dim: usize,
    #[arg(long, default_value_t = 100)]
    pub hidden_dim: usize,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long, default_value = "test")]
    pub split: Split,
    /// Row name in the results table; defaults to `<variant>-<feature>`.
    #[arg(long)]
    pub model_name: Option<String>,
    /// Existing results table to add this row to.
    #[arg(long)]
    pub merge: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct GradcheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random problems checked, seeded `seed`, `seed + 1`, ...
    #[arg(long, default_value_t = 20)]
    pub problems: u64,
    #[arg(long, default_value = "pattern")]
    pub variant: Variant,
    #[arg(long, default_value = "distance")]
    pub feature: FeatureMode,
    #[arg(long)]
    pub no_dropout: bool,
    /// Set every parameter to zero.
    #[arg(long)]
    pub zero: bool,
    /// Negate the analytic gradient; the check must then fail.
    #[arg(long)]
    pub corrupt: bool,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct BaselineArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long)]
    pub manifest: PathBuf,
    /// Pretrained symmetric-pattern word vectors.
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long, default_value = "sp-baseline")]
    pub model_name: String,
    #[arg(long)]
    pub merge: Option<PathBuf>,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Synth(a) => &a.common,
            Command::Extract(a) => &a.common,
            Command::Build(a) => &a.common,
            Command::Train(a) => &a.common,
            Command::Eval(a) => &a.common,
            Command::Gradcheck(a) => &a.common,
            Command::Baseline(a) => &a.common,
        }
    }

    /// Training defaults to one thread, everything else to all cores.
    fn default_threads(&self) -> usize {
        match self {
            Command::Train(_) => 1,
            _ => 0,
        }
    }
}

/// Runs one subcommand inside its own thread pool.
pub fn run(command: &Command) -> Result<()> {
    let common = command.common();
    fs::create_dir_all(&common.out).with_context(|| format!("creating {}", common.out.display()))?;
    let threads = common.threads.unwrap_or_else(|| command.default_threads());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building thread pool")?;
    pool.install(|| {
        write_run_config(command)?;
        match command {
            Command::Synth(a) => cmd_synth(a),
            Command::Extract(a) => cmd_extract(a),
            Command::Build(a) => cmd_build(a),
            Command::Train(a) => cmd_train(a).map(|_| ()),
            Command::Eval(a) => cmd_eval(a).map(|_| ()),
            Command::Gradcheck(a) => cmd_gradcheck(a),
            Command::Baseline(a) => cmd_baseline(a),
        }
    })
}

fn write_run_config(command: &Command) -> Result<()> {
    let text = toml::to_string(command).context("serializing run configuration")?;
    fs::write(command.common().out.join("run_config.toml"), text).context("writing run_config.toml")
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

/// Writes `path` through `f`, flushing at the end.
fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    f(&mut out)?;
    out.flush().with_context(|| format!("writing {}", path.display()))
}

pub fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let corpus = generate(&SynthConfig {
        pairs_per_label: a.pairs_per_label,
        word_class: a.word_class,
        seed: a.seed,
        ..SynthConfig::default()
    });
    write_file(&a.common.out.join("corpus.conllu"), |w| Ok(corpus.write_conllu(w)?))?;
    write_file(&a.common.out.join("pairs.tsv"), |w| Ok(corpus.write_pairs(w)?))?;
    log::info!("{} sentences, {} pairs", corpus.sentences.len(), corpus.pairs.len());
    Ok(())
}

pub fn cmd_extract(a: &ExtractArgs) -> Result<()> {
    let pairs: Vec<WordPair> = load_pairs(open(&a.pairs)?)
        .with_context(|| format!("reading {}", a.pairs.display()))?
        .into_iter()
        .map(|p| (p.x, p.y))
        .collect();
    if pairs.is_empty() {
        log::warn!("no word pairs in {}; nothing to extract", a.pairs.display());
    }
    let mode = if a.strict { ErrorMode::Strict } else { ErrorMode::Lenient };
    let opts = ExtractOptions {
        mode: a.feature,
        max_path_len: a.max_path_len,
    };
    let mut map = ExtractionMap::default();
    let mut stats = ExtractionStats::default();
    let mut blocks = Blocks::new(open(&a.corpus)?);
    loop {
        let chunk = blocks
            .by_ref()
            .take(EXTRACT_CHUNK)
            .collect::<std::io::Result<Vec<_>>>()
            .with_context(|| format!("reading {}", a.corpus.display()))?;
        if chunk.is_empty() {
            break;
        }
        let parsed = parse_blocks(&chunk, mode).with_context(|| format!("parsing {}", a.corpus.display()))?;
        let (m, mut s) = extract_corpus_patterns(&parsed.sentences, &pairs, opts);
        s.skipped_sentences = parsed.skipped.len() as u64;
        map.merge(m);
        stats.merge(&s);
    }
    write_file(&a.common.out.join("patterns.tsv"), |w| Ok(map.write_tsv(w)?))?;
    write_file(&a.common.out.join("extract_stats.tsv"), |w| Ok(stats.write_tsv(w)?))?;
    log::info!(
        "{} sentences, {} occurrences, {} pairs with patterns",
        stats.sentences,
        stats.occurrences,
        map.len()
    );
    Ok(())
}

pub fn cmd_build(a: &BuildArgs) -> Result<()> {
    let pairs = load_pairs(open(&a.pairs)?).with_context(|| format!("reading {}", a.pairs.display()))?;
    let map = ExtractionMap::read_tsv(open(&a.patterns)?).with_context(|| format!("reading {}", a.patterns.display()))?;
    let filtered = filter_patterns(&map, a.min_count);
    let (examples, assembly) = assemble(&pairs, &filtered, a.min_patterns)?;
    let data = balance_and_split(&examples, a.ratios, a.word_class, a.seed)?;
    let vocab = build_vocabulary(&data.train, data.test.iter().chain(&data.validation))?;
    let out = &a.common.out;
    write_file(&out.join("manifest.tsv"), |w| Ok(data.write_manifest(w)?))?;
    write_file(&out.join("examples.tsv"), |w| Ok(data.extraction_map().write_tsv(w)?))?;
    write_file(&out.join("summary.tsv"), |w| Ok(data.summary().write_tsv(w)?))?;
    write_file(&out.join("build_stats.tsv"), |w| {
        writeln!(w, "pairs_listed\t{}", pairs.len())?;
        writeln!(w, "pairs_kept\t{}", assembly.kept)?;
        writeln!(w, "pairs_without_patterns\t{}", assembly.dropped_absent)?;
        writeln!(w, "pairs_with_too_few_patterns\t{}", assembly.dropped_few_patterns)?;
        Ok(())
    })?;
    write_vocabulary(&vocab, &out.join("vocab"))?;
    log::info!(
        "{} pairs kept; split {}/{}/{}",
        assembly.kept,
        data.train.len(),
        data.test.len(),
        data.validation.len()
    );
    Ok(())
}

fn write_vocabulary(vocab: &Vocabulary, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, map) in vocab.named_maps() {
        write_file(&dir.join(format!("{name}.txt")), |w| {
            for s in map.symbols() {
                writeln!(w, "{s}")?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn load_dataset(d: &DataArgs) -> Result<SplitDataset> {
    let patterns = match &d.patterns {
        Some(p) => p.clone(),
        None => d.manifest.with_file_name("examples.tsv"),
    };
    let map = ExtractionMap::read_tsv(open(&patterns)?).with_context(|| format!("reading {}", patterns.display()))?;
    SplitDataset::read_manifest(open(&d.manifest)?, &map).with_context(|| format!("reading {}", d.manifest.display()))
}

/// Label mode of the first pattern in the dataset.
fn detect_feature_mode(data: &SplitDataset) -> Option<FeatureMode> {
    data.train
        .iter()
        .chain(&data.test)
        .chain(&data.validation)
        .flat_map(|e| e.patterns.first())
        .find_map(|p| p.nodes.first().map(|n| n.label.mode()))
}

fn encode_all(vocab: &Vocabulary, examples: &[PairExample]) -> Vec<EncodedExample> {
    examples.iter().map(|e| vocab.encode(e)).collect()
}

pub struct TrainResult {
    pub best_epoch: usize,
    pub final_validation_f1: Option<f64>,
}

pub fn cmd_train(a: &TrainArgs) -> Result<TrainResult> {
    let data = load_dataset(&a.data)?;
    let found = detect_feature_mode(&data).context("dataset has no patterns")?;
    let feature_mode = a.feature.unwrap_or(found);
    ensure!(
        feature_mode == found,
        "--feature {feature_mode} does not match the {found} labels in the patterns"
    );
    let vocab = build_vocabulary(&data.train, data.test.iter().chain(&data.validation))?;
    let config = ModelConfig {
        variant: a.variant,
        feature_mode,
        lemma_dim: a.lemma_dim,
        label_dim: a.label_dim,
        hidden_dim: a.hidden_dim,
        dropout: a.dropout,
        epochs: a.epochs,
        batch_size: a.batch_size,
        seed: a.seed,
        ..ModelConfig::default()
    };
    let pretrained = match &a.embeddings {
        Some(path) => Some(
            PretrainedVectors::read(open(path)?, Some(a.lemma_dim))
                .with_context(|| format!("reading {}", path.display()))?,
        ),
        None => None,
    };
    let (init, report) = ModelParams::init(&config, &vocab, pretrained.as_ref())?;
    for (name, cov) in [("lemma", report.lemma), ("word", report.word)] {
        if let Some(c) = cov {
            log::info!("pretrained {name} coverage {}/{} ({:.1}%)", c.found, c.total, 100.0 * c.fraction());
        }
    }
    let train_set = encode_all(&vocab, &data.train);
    let validation = encode_all(&vocab, &data.validation);
    let outcome = train(init, &train_set, &validation)?;
    let out = &a.common.out;
    write_file(&out.join("checkpoint.txt"), |w| Ok(write_checkpoint(&outcome.params, &vocab, w)?))?;
    write_file(&out.join("epochs.tsv"), |w| Ok(write_epoch_log(&outcome.log, w)?))?;
    write_file(&out.join("train_summary.tsv"), |w| {
        writeln!(w, "best_epoch\t{}", outcome.best_epoch)?;
        writeln!(w, "train_pairs\t{}", train_set.len())?;
        writeln!(w, "validation_pairs\t{}", validation.len())?;
        for (name, cov) in [("lemma", report.lemma), ("word", report.word)] {
            if let Some(c) = cov {
                writeln!(w, "pretrained_{name}_coverage\t{}/{}", c.found, c.total)?;
            }
        }
        Ok(())
    })?;
    log::info!("kept parameters of epoch {}", outcome.best_epoch);
    Ok(TrainResult {
        best_epoch: outcome.best_epoch,
        final_validation_f1: outcome.log.last().and_then(|e| e.validation.map(|r| r.f1)),
    })
}

fn merged_table(merge: &Option<PathBuf>) -> Result<ResultsTable> {
    match merge {
        Some(path) => {
            ResultsTable::read_tsv(open(path)?).with_context(|| format!("reading {}", path.display()))
        }
        None => Ok(ResultsTable::default()),
    }
}

pub fn cmd_eval(a: &EvalArgs) -> Result<antsyn_core::evaluation::EvalReport> {
    let (params, vocab) = read_checkpoint(open(&a.checkpoint)?).with_context(|| format!("reading {}", a.checkpoint.display()))?;
    let data = load_dataset(&a.data)?;
    if let Some(found) = detect_feature_mode(&data) {
        ensure!(
            found == params.config.feature_mode,
            "checkpoint uses {} labels but the patterns carry {found} labels",
            params.config.feature_mode
        );
    }
    let examples = data.split(a.split);
    ensure!(!examples.is_empty(), "the {} split is empty", a.split.as_str());
    let encoded = encode_all(&vocab, examples);
    let (preds, _) = evaluate(&params, &encoded)?;
    let pairs: Vec<(Label, Label)> = preds.iter().zip(examples).map(|((_, l), e)| (*l, e.label)).collect();
    let report = score(&pairs)?;
    let name = a
        .model_name
        .clone()
        .unwrap_or_else(|| format!("{}-{}", params.config.variant, params.config.feature_mode));
    let mut table = merged_table(&a.merge)?;
    table.insert(&name, data.word_class, &report);
    let out = &a.common.out;
    write_file(&out.join("results.tsv"), |w| Ok(table.write_tsv(w)?))?;
    write_file(&out.join("predictions.tsv"), |w| {
        writeln!(w, "x\ty\tgold\tpredicted\tprobability")?;
        for ((p, l), e) in preds.iter().zip(examples) {
            writeln!(w, "{}\t{}\t{}\t{}\t{p:.6}", e.x, e.y, e.label.code(), l.code())?;
        }
        Ok(())
    })?;
    write_file(&out.join("counts.tsv"), |w| {
        writeln!(w, "tp\tfp\tfn\ttn")?;
        writeln!(w, "{}\t{}\t{}\t{}", report.tp, report.fp, report.fn_, report.tn)?;
        Ok(())
    })?;
    log::info!("{name}: P {:.3} R {:.3} F1 {:.3}", report.precision, report.recall, report.f1);
    Ok(report)
}

pub fn cmd_gradcheck(a: &GradcheckArgs) -> Result<()> {
    let options = GradCheckOptions {
        corrupt: a.corrupt,
        ..GradCheckOptions::default()
    };
    let mut failures = 0;
    write_file(&a.common.out.join("gradcheck.tsv"), |w| {
        writeln!(w, "seed\tchecked\tmax_rel_error\tworst\tpassed")?;
        for seed in a.seed..a.seed + a.problems {
            let mut problem = random_tiny_problem(seed, a.variant, a.feature, !a.no_dropout);
            if a.zero {
                for s in problem.params.dense_slices_mut() {
                    s.fill(0.0);
                }
                for id in ALL_TABLES {
                    if let Some(t) = problem.params.tables.get_mut(id) {
                        t.matrix.fill(0.0);
                    }
                }
            }
            let r = problem.check(&options)?;
            if !r.passed {
                failures += 1;
            }
            writeln!(w, "{seed}\t{}\t{:e}\t{}\t{}", r.checked, r.max_rel_error, r.worst, r.passed)?;
        }
        Ok(())
    })?;
    if failures > 0 {
        bail!(
            "gradient check failed on {failures} of {} problems (tolerance {:e})",
            a.problems,
            options.tolerance
        );
    }
    log::info!("gradient check passed on {} problems", a.problems);
    Ok(())
}

fn pair_list(examples: &[PairExample]) -> Vec<(String, String, Label)> {
    examples.iter().map(|e| (e.x.clone(), e.y.clone(), e.label)).collect()
}

/// Reads only the pair columns of a manifest.
fn manifest_pairs(path: &Path) -> Result<SplitDataset> {
    // The baseline needs no patterns: attach an empty pattern set per pair.
    let mut map = ExtractionMap::default();
    let mut lines = Vec::new();
    for line in open(path)?.lines() {
        let line = line?;
        if !line.starts_with('#') && !line.trim().is_empty() {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() >= 2 {
                map.pairs.insert((cols[0].to_string(), cols[1].to_string()), Default::default());
            }
        }
        lines.push(line);
    }
    let text = lines.join("\n");
    SplitDataset::read_manifest(text.as_bytes(), &map).with_context(|| format!("reading {}", path.display()))
}

pub fn cmd_baseline(a: &BaselineArgs) -> Result<()> {
    let data = manifest_pairs(&a.manifest)?;
    let vectors =
        PretrainedVectors::read(open(&a.embeddings)?, None).with_context(|| format!("reading {}", a.embeddings.display()))?;
    let feats = |e: &[PairExample]| cosine_features(&pair_list(e), &vectors);
    let (train_f, val_f, test_f) = (feats(&data.train), feats(&data.validation), feats(&data.test));
    let report = baseline_classify(&train_f, &val_f, &test_f)?;
    let mut table = merged_table(&a.merge)?;
    table.insert(&a.model_name, data.word_class, &report.test);
    table.footer.push(format!(
        "{}: one-feature logistic regression on cosine similarity with a validation-tuned threshold, in place of an RBF-kernel SVM",
        a.model_name
    ));
    if report.missing > 0 {
        table.footer.push(format!(
            "{}: {} pairs lacked a vector and were scored with cosine 0",
            a.model_name, report.missing
        ));
    }
    let out = &a.common.out;
    write_file(&out.join("results.tsv"), |w| Ok(table.write_tsv(w)?))?;
    write_file(&out.join("baseline_features.tsv"), |w| {
        writeln!(w, "x\ty\tgold\tsplit\tcosine\tmissing")?;
        for (split, fs) in [("train", &train_f), ("test", &test_f), ("validation", &val_f)] {
            for f in fs.iter() {
                let CosineFeature { x, y, label, cosine, missing } = f;
                writeln!(w, "{x}\t{y}\t{}\t{split}\t{cosine:.6}\t{missing}", label.code())?;
            }
        }
        Ok(())
    })?;
    write_file(&out.join("baseline_model.tsv"), |w| {
        writeln!(w, "weight\t{}", report.weight)?;
        writeln!(w, "bias\t{}", report.bias)?;
        writeln!(w, "threshold\t{}", report.threshold)?;
        writeln!(w, "missing\t{}", report.missing)?;
        Ok(())
    })?;
    Ok(())
}
