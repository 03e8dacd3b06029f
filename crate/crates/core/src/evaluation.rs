//! Precision, recall and F1 for the antonym class, and results tables.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::dataset::{Label, WordClass};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no predictions to score")]
    Empty,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        EvalReport {
            tp,
            fp,
            fn_,
            tn,
            precision,
            recall,
            f1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// Scores `(predicted, gold)` pairs with antonym as the positive class.
pub fn score(predictions: &[(Label, Label)]) -> Result<EvalReport, EvalError> {
    if predictions.is_empty() {
        return Err(EvalError::Empty);
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for &(pred, gold) in predictions {
        match (pred, gold) {
            (Label::Antonym, Label::Antonym) => tp += 1,
            (Label::Antonym, Label::Synonym) => fp += 1,
            (Label::Synonym, Label::Antonym) => fn_ += 1,
            (Label::Synonym, Label::Synonym) => tn += 1,
        }
    }
    Ok(EvalReport::from_counts(tp, fp, fn_, tn))
}

/// P/R/F1 per model and word class, rendered with models as rows and one
/// column group per word class.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultsTable {
    rows: BTreeMap<String, BTreeMap<String, [f64; 3]>>,
    order: Vec<String>,
    pub footer: Vec<String>,
}

impl ResultsTable {
    pub fn insert(&mut self, model: &str, word_class: WordClass, report: &EvalReport) {
        if !self.rows.contains_key(model) {
            self.order.push(model.to_string());
        }
        self.rows
            .entry(model.to_string())
            .or_default()
            .insert(word_class.to_string(), [report.precision, report.recall, report.f1]);
    }

    pub fn get(&self, model: &str, word_class: WordClass) -> Option<[f64; 3]> {
        self.rows.get(model)?.get(&word_class.to_string()).copied()
    }

    fn classes(&self) -> Vec<WordClass> {
        WordClass::ALL
            .into_iter()
            .filter(|c| self.rows.values().any(|r| r.contains_key(&c.to_string())))
            .collect()
    }

    pub fn write_tsv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let classes = self.classes();
        write!(out, "model")?;
        for c in &classes {
            write!(out, "\t{c}_P\t{c}_R\t{c}_F1")?;
        }
        writeln!(out)?;
        for model in &self.order {
            write!(out, "{model}")?;
            for c in &classes {
                match self.rows[model].get(&c.to_string()) {
                    Some([p, r, f]) => write!(out, "\t{p:.3}\t{r:.3}\t{f:.3}")?,
                    None => write!(out, "\t-\t-\t-")?,
                }
            }
            writeln!(out)?;
        }
        for line in &self.footer {
            writeln!(out, "# {line}")?;
        }
        Ok(())
    }

    /// Reads a table written by [`ResultsTable::write_tsv`]. Values carry the
    /// table's three-decimal precision.
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self, EvalError> {
        let mut table = ResultsTable::default();
        let mut classes: Vec<WordClass> = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let bad = |message: String| EvalError::Malformed { line: line_no, message };
            if let Some(f) = line.strip_prefix("# ") {
                table.footer.push(f.to_string());
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if line_no == 1 {
                for group in cols[1..].chunks(3) {
                    let name = group[0].strip_suffix("_P").ok_or_else(|| bad(format!("bad header {:?}", group[0])))?;
                    classes.push(name.parse().map_err(bad)?);
                }
                continue;
            }
            if cols.len() != 1 + 3 * classes.len() {
                return Err(bad(format!("expected {} columns", 1 + 3 * classes.len())));
            }
            for (c, group) in classes.iter().zip(cols[1..].chunks(3)) {
                if group[0] == "-" {
                    continue;
                }
                let v: Vec<f64> = group
                    .iter()
                    .map(|s| s.parse::<f64>().map_err(|_| bad(format!("bad value {s:?}"))))
                    .collect::<Result<_, _>>()?;
                if !table.rows.contains_key(cols[0]) {
                    table.order.push(cols[0].to_string());
                }
                table
                    .rows
                    .entry(cols[0].to_string())
                    .or_default()
                    .insert(c.to_string(), [v[0], v[1], v[2]]);
            }
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use Label::{Antonym as A, Synonym as S};

    fn preds(tp: usize, fp: usize, fn_: usize, tn: usize) -> Vec<(Label, Label)> {
        std::iter::repeat_n((A, A), tp)
            .chain(std::iter::repeat_n((A, S), fp))
            .chain(std::iter::repeat_n((S, A), fn_))
            .chain(std::iter::repeat_n((S, S), tn))
            .collect()
    }

    #[test]
    fn perfect_predictions() {
        let r = score(&preds(3, 0, 0, 4)).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn mixed_counts() {
        let r = score(&preds(8, 2, 4, 5)).unwrap();
        assert_abs_diff_eq!(r.precision, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(r.recall, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.f1, 8.0 / 11.0, epsilon = 1e-15);
        assert_eq!(r.total(), 19);
    }

    #[test]
    fn no_positive_predictions() {
        let r = score(&preds(0, 0, 5, 5)).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
        assert!(matches!(score(&[]), Err(EvalError::Empty)));
    }

    #[test]
    fn table_layout_and_round_trip() {
        let mut t = ResultsTable::default();
        t.insert("pattern", WordClass::Adjective, &EvalReport::from_counts(8, 2, 4, 5));
        t.insert("combined", WordClass::Noun, &EvalReport::from_counts(1, 0, 0, 1));
        t.footer.push("note".into());
        let mut buf = Vec::new();
        t.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "model\tadjective_P\tadjective_R\tadjective_F1\tnoun_P\tnoun_R\tnoun_F1\n\
             pattern\t0.800\t0.667\t0.727\t-\t-\t-\n\
             combined\t-\t-\t-\t1.000\t1.000\t1.000\n# note\n"
        );
        let back = ResultsTable::read_tsv(&buf[..]).unwrap();
        assert_eq!(back.get("pattern", WordClass::Adjective), Some([0.8, 0.667, 0.727]));
        let mut again = Vec::new();
        back.write_tsv(&mut again).unwrap();
        assert_eq!(again, buf);
    }
}
