use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use antsyn_core::fixtures::{VILLAGE_CONLLU, VILLAGE_KEY};

fn antsyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antsyn"))
        .args(args)
        .env("ANTSYN_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn extract_village_sentence() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.conllu");
    let pairs = dir.path().join("pairs.tsv");
    fs::write(&corpus, VILLAGE_CONLLU).unwrap();
    fs::write(&pairs, "old\tnew\t1\n").unwrap();
    let out = dir.path().join("out");
    let o = antsyn(&["extract", "--out", p(&out), "--corpus", p(&corpus), "--pairs", p(&pairs), "--strict"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(out.join("patterns.tsv")).unwrap(),
        format!("old\tnew\t{VILLAGE_KEY}\t1\n")
    );
    let config: toml::Table = fs::read_to_string(out.join("run_config.toml")).unwrap().parse().unwrap();
    let extract = config["extract"].as_table().unwrap();
    assert_eq!(extract["feature"].as_str(), Some("distance"));
    assert_eq!(extract["strict"].as_bool(), Some(true));

    let o = antsyn(&["extract", "--out", p(&out), "--corpus", p(&corpus), "--pairs", p(&pairs), "--feature", "direction"]);
    assert!(o.status.success());
    let line = fs::read_to_string(out.join("patterns.tsv")).unwrap();
    assert!(line.contains("X/JJ/amod/up -- village/NN/nsubj/up -- provide/VBN/ROOT/anchor"), "{line}");
}

#[test]
fn empty_pairs_give_empty_output_and_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.conllu");
    let pairs = dir.path().join("pairs.tsv");
    fs::write(&corpus, VILLAGE_CONLLU).unwrap();
    fs::write(&pairs, "").unwrap();
    let out = dir.path().join("out");
    let o = antsyn(&["extract", "--out", p(&out), "--corpus", p(&corpus), "--pairs", p(&pairs)]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(out.join("patterns.tsv")).unwrap(), "");
    assert!(stderr(&o).contains("no word pairs"), "{}", stderr(&o));
}

#[test]
fn malformed_corpus_fails_in_strict_mode_only() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.conllu");
    let pairs = dir.path().join("pairs.tsv");
    // Second sentence has two roots.
    let bad = "1\ta\ta\tX\tJJ\t_\t0\tROOT\t_\t_\n2\tb\tb\tX\tJJ\t_\t0\tROOT\t_\t_\n\n";
    fs::write(&corpus, format!("{VILLAGE_CONLLU}{bad}")).unwrap();
    fs::write(&pairs, "old\tnew\t1\n").unwrap();
    let out = dir.path().join("out");
    let o = antsyn(&["extract", "--out", p(&out), "--corpus", p(&corpus), "--pairs", p(&pairs), "--strict"]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));

    let o = antsyn(&["extract", "--out", p(&out), "--corpus", p(&corpus), "--pairs", p(&pairs)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stats = fs::read_to_string(out.join("extract_stats.tsv")).unwrap();
    assert!(stats.contains("sentences_skipped\t1"), "{stats}");
    assert!(fs::read_to_string(out.join("patterns.tsv")).unwrap().contains(VILLAGE_KEY));
}

#[test]
fn missing_input_and_bad_flags_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.tsv");
    let o = antsyn(&["build", "--out", p(dir.path()), "--patterns", p(&missing), "--pairs", p(&missing)]);
    assert!(!o.status.success());
    let o = antsyn(&["train", "--out", p(dir.path()), "--manifest", p(&missing), "--variant", "bogus"]);
    assert!(!o.status.success());
}

#[test]
fn gradcheck_passes_and_catches_a_sign_flip() {
    let dir = tempfile::tempdir().unwrap();
    let o = antsyn(&["gradcheck", "--out", p(dir.path()), "--problems", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = antsyn(&["gradcheck", "--out", p(dir.path()), "--problems", "3", "--zero", "--variant", "combined"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = antsyn(&["gradcheck", "--out", p(dir.path()), "--problems", "1", "--corrupt"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("gradient check failed"));
}

/// A small synthetic pipeline, trained with the given thread count.
fn small_pipeline(root: &Path, threads: &str) {
    let run = |args: &[&str]| {
        let o = antsyn(args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    };
    let (s, e, b, t) = (root.join("synth"), root.join("ext"), root.join("build"), root.join("train"));
    run(&["synth", "--out", p(&s), "--pairs-per-label", "30", "--seed", "4"]);
    run(&[
        "extract", "--out", p(&e), "--corpus", p(&s.join("corpus.conllu")), "--pairs", p(&s.join("pairs.tsv")),
        "--threads", threads,
    ]);
    run(&["build", "--out", p(&b), "--patterns", p(&e.join("patterns.tsv")), "--pairs", p(&s.join("pairs.tsv"))]);
    run(&[
        "train", "--out", p(&t), "--manifest", p(&b.join("manifest.tsv")), "--variant", "combined", "--epochs", "3",
        "--hidden-dim", "12", "--lemma-dim", "8", "--label-dim", "4", "--batch-size", "8", "--threads", threads,
    ]);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let (one, three) = (dir.path().join("one"), dir.path().join("three"));
    small_pipeline(&one, "1");
    small_pipeline(&three, "3");
    for f in ["ext/patterns.tsv", "build/manifest.tsv", "train/epochs.tsv", "train/checkpoint.txt"] {
        assert_eq!(fs::read(one.join(f)).unwrap(), fs::read(three.join(f)).unwrap(), "{f}");
    }

    // Evaluating and merging into an existing table.
    let b = one.join("build");
    let out = dir.path().join("eval");
    let o = antsyn(&[
        "eval", "--out", p(&out), "--manifest", p(&b.join("manifest.tsv")), "--checkpoint",
        p(&one.join("train/checkpoint.txt")), "--model-name", "first",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out2 = dir.path().join("eval2");
    let o = antsyn(&[
        "eval", "--out", p(&out2), "--manifest", p(&b.join("manifest.tsv")), "--checkpoint",
        p(&one.join("train/checkpoint.txt")), "--split", "validation", "--merge", p(&out.join("results.tsv")),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = fs::read_to_string(out2.join("results.tsv")).unwrap();
    let rows: Vec<&str> = table.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(rows, ["model", "first", "combined-distance"]);
    let predictions = fs::read_to_string(out.join("predictions.tsv")).unwrap();
    let manifest = fs::read_to_string(b.join("manifest.tsv")).unwrap();
    assert_eq!(predictions.lines().count() - 1, manifest.lines().filter(|l| l.ends_with("\ttest")).count());

    // Asking for direction labels on distance-labelled patterns is an error.
    let o = antsyn(&[
        "train", "--out", p(&dir.path().join("t2")), "--manifest", p(&b.join("manifest.tsv")), "--feature",
        "direction", "--epochs", "0",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("does not match"), "{}", stderr(&o));
}
