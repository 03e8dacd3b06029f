//! CoNLL-U ingestion and dependency-tree navigation.
//!
//! Only the first eight columns are consumed (ID, FORM, LEMMA, UPOS, XPOS,
//! FEATS, HEAD, DEPREL). Multiword-token ranges (`1-2`) and empty nodes
//! (`1.1`) are skipped. Lemmas are lowercased, and the fine-grained XPOS tag
//! is preferred over UPOS when present.

use std::fmt;
use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

/// Characters that may not appear in a lemma, POS tag or dependency label,
/// because they delimit fields in pattern keys.
const RESERVED_SEPARATOR: char = '/';

#[derive(Debug, Error)]
pub enum TreebankError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("sentence {index} (starting at line {line}): {violation}")]
    InvalidTree {
        index: usize,
        line: usize,
        violation: TreeViolation,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// How parse and validation errors are handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ErrorMode {
    /// Report the error and skip the offending sentence.
    #[default]
    Lenient,
    /// Abort on the first error.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub pos: String,
    /// Parent token id, 0 for the root.
    pub head: usize,
    pub deprel: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
    root_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    Empty,
    NonSequentialId { position: usize, id: usize },
    HeadOutOfRange { id: usize, head: usize },
    SelfLoop { id: usize },
    NoRoot,
    MultipleRoots { first: usize, second: usize },
    /// A token whose head chain never reaches the root. With a single head
    /// per token, an unreachable token always lies on or above a cycle.
    Cycle { id: usize },
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::Empty => write!(f, "empty sentence"),
            TreeViolation::NonSequentialId { position, id } => {
                write!(f, "token at position {position} has id {id}")
            }
            TreeViolation::HeadOutOfRange { id, head } => {
                write!(f, "token {id} has head {head} outside the sentence")
            }
            TreeViolation::SelfLoop { id } => write!(f, "token {id} is its own head"),
            TreeViolation::NoRoot => write!(f, "no root"),
            TreeViolation::MultipleRoots { first, second } => {
                write!(f, "multiple roots (tokens {first} and {second})")
            }
            TreeViolation::Cycle { id } => {
                write!(f, "cycle through token {id} (unreachable from the root)")
            }
        }
    }
}

/// Checks the tree invariants and names the first violation found.
///
/// Token ids must be `1..=n` in order, exactly one token has head 0, and
/// every token reaches that root by following heads.
pub fn validate_tree(tokens: &[Token]) -> Result<usize, TreeViolation> {
    if tokens.is_empty() {
        return Err(TreeViolation::Empty);
    }
    let n = tokens.len();
    let mut root = None;
    for (position, token) in tokens.iter().enumerate() {
        if token.id != position + 1 {
            return Err(TreeViolation::NonSequentialId {
                position: position + 1,
                id: token.id,
            });
        }
        if token.head > n {
            return Err(TreeViolation::HeadOutOfRange {
                id: token.id,
                head: token.head,
            });
        }
        if token.head == token.id {
            return Err(TreeViolation::SelfLoop { id: token.id });
        }
        if token.head == 0 {
            if let Some(first) = root {
                return Err(TreeViolation::MultipleRoots {
                    first,
                    second: token.id,
                });
            }
            root = Some(token.id);
        }
    }
    let root = root.ok_or(TreeViolation::NoRoot)?;

    // 0 = unvisited, 1 = on current walk, 2 = known to reach the root.
    let mut state = vec![0u8; n + 1];
    state[root] = 2;
    let mut walk = Vec::new();
    for start in 1..=n {
        let mut current = start;
        walk.clear();
        while state[current] == 0 {
            state[current] = 1;
            walk.push(current);
            // Only the root has head 0, and it is already marked.
            current = tokens[current - 1].head;
        }
        if state[current] == 1 {
            return Err(TreeViolation::Cycle { id: current });
        }
        for &id in &walk {
            state[id] = 2;
        }
    }
    Ok(root)
}

impl Sentence {
    /// Builds a sentence after checking the tree invariants.
    pub fn new(tokens: Vec<Token>) -> Result<Self, TreeViolation> {
        let root_id = validate_tree(&tokens)?;
        Ok(Sentence { tokens, root_id })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn root_id(&self) -> usize {
        self.root_id
    }

    /// Token by 1-based id.
    pub fn token(&self, id: usize) -> &Token {
        &self.tokens[id - 1]
    }

    /// Head of a token, `None` for the root.
    pub fn head(&self, id: usize) -> Option<usize> {
        match self.token(id).head {
            0 => None,
            h => Some(h),
        }
    }

    /// Ids from `id` up to and including the root.
    pub fn ancestors(&self, id: usize) -> Ancestors<'_> {
        Ancestors {
            sentence: self,
            next: Some(id),
        }
    }

    pub fn depth(&self, id: usize) -> usize {
        self.ancestors(id).count() - 1
    }

    /// Writes the sentence as a CoNLL-U block terminated by a blank line.
    ///
    /// LEMMA and XPOS carry the normalized values, so reparsing is lossless.
    pub fn write_conllu<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for t in &self.tokens {
            writeln!(
                out,
                "{}\t{}\t{}\t_\t{}\t_\t{}\t{}\t_\t_",
                t.id, t.form, t.lemma, t.pos, t.head, t.deprel
            )?;
        }
        writeln!(out)
    }
}

pub struct Ancestors<'a> {
    sentence: &'a Sentence,
    next: Option<usize>,
}

impl Iterator for Ancestors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let current = self.next?;
        self.next = self.sentence.head(current);
        Some(current)
    }
}

/// A raw sentence block: the line number of its first line and the lines.
#[derive(Clone, Debug, Default)]
pub struct Block {
    pub index: usize,
    pub first_line: usize,
    pub lines: Vec<(usize, String)>,
}

/// Splits a CoNLL-U stream into sentence blocks without parsing them.
pub struct Blocks<R> {
    reader: R,
    line_no: usize,
    index: usize,
    done: bool,
}

impl<R: BufRead> Blocks<R> {
    pub fn new(reader: R) -> Self {
        Blocks {
            reader,
            line_no: 0,
            index: 0,
            done: false,
        }
    }
}

impl<R: BufRead> Iterator for Blocks<R> {
    type Item = io::Result<Block>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut block = Block::default();
        let mut buf = String::new();
        loop {
            buf.clear();
            match self.reader.read_line(&mut buf) {
                Ok(0) => {
                    self.done = true;
                    break;
                }
                Ok(_) => {}
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
            self.line_no += 1;
            let line = buf.trim_end_matches(['\n', '\r']);
            if line.trim().is_empty() {
                if block.lines.is_empty() {
                    continue;
                }
                break;
            }
            if block.lines.is_empty() {
                block.first_line = self.line_no;
            }
            block.lines.push((self.line_no, line.to_string()));
        }
        if block.lines.is_empty() {
            return None;
        }
        block.index = self.index;
        self.index += 1;
        Some(Ok(block))
    }
}

fn malformed(line: usize, message: impl Into<String>) -> TreebankError {
    TreebankError::Malformed {
        line,
        message: message.into(),
    }
}

fn check_symbol(line: usize, column: &str, value: &str) -> Result<(), TreebankError> {
    if value.is_empty() || value.contains(RESERVED_SEPARATOR) || value.contains(char::is_whitespace) {
        return Err(malformed(
            line,
            format!("{column} {value:?} is empty or contains '/' or whitespace"),
        ));
    }
    Ok(())
}

fn parse_token(line_no: usize, line: &str) -> Result<Option<Token>, TreebankError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 8 {
        return Err(malformed(
            line_no,
            format!("expected at least 8 tab-separated columns, found {}", cols.len()),
        ));
    }
    if cols[0].contains('-') || cols[0].contains('.') {
        return Ok(None);
    }
    let id: usize = cols[0]
        .parse()
        .map_err(|_| malformed(line_no, format!("non-integer id {:?}", cols[0])))?;
    if id == 0 {
        return Err(malformed(line_no, "token id 0"));
    }
    let head: usize = cols[6]
        .parse()
        .map_err(|_| malformed(line_no, format!("non-integer head {:?}", cols[6])))?;
    let form = cols[1].to_string();
    let lemma = match cols[2] {
        "_" | "" => form.to_lowercase(),
        l => l.to_lowercase(),
    };
    let pos = match cols[4] {
        "_" | "" => cols[3],
        x => x,
    }
    .to_string();
    let deprel = cols[7].to_string();
    check_symbol(line_no, "lemma", &lemma)?;
    check_symbol(line_no, "POS", &pos)?;
    check_symbol(line_no, "deprel", &deprel)?;
    Ok(Some(Token {
        id,
        form,
        lemma,
        pos,
        head,
        deprel,
    }))
}

/// Parses one block into a validated sentence.
///
/// Returns `Ok(None)` for blocks holding only comments.
pub fn parse_block(block: &Block) -> Result<Option<Sentence>, TreebankError> {
    let mut tokens = Vec::new();
    for (line_no, line) in &block.lines {
        if line.starts_with('#') {
            continue;
        }
        if let Some(token) = parse_token(*line_no, line)? {
            tokens.push(token);
        }
    }
    if tokens.is_empty() {
        return Ok(None);
    }
    Sentence::new(tokens)
        .map(Some)
        .map_err(|violation| TreebankError::InvalidTree {
            index: block.index,
            line: block.first_line,
            violation,
        })
}

/// Sentences parsed from a stream plus the errors of skipped sentences.
#[derive(Debug, Default)]
pub struct Parsed {
    pub sentences: Vec<Sentence>,
    pub skipped: Vec<TreebankError>,
}

/// Parses a batch of blocks in parallel, keeping input order.
pub fn parse_blocks(blocks: &[Block], mode: ErrorMode) -> Result<Parsed, TreebankError> {
    let results: Vec<_> = blocks.par_iter().map(parse_block).collect();
    let mut parsed = Parsed::default();
    for result in results {
        match result {
            Ok(Some(sentence)) => parsed.sentences.push(sentence),
            Ok(None) => {}
            Err(e) => match mode {
                ErrorMode::Strict => return Err(e),
                ErrorMode::Lenient => {
                    log::warn!("skipping sentence: {e}");
                    parsed.skipped.push(e);
                }
            },
        }
    }
    Ok(parsed)
}

/// Parses a whole CoNLL-U stream.
pub fn parse_conllu<R: BufRead>(reader: R, mode: ErrorMode) -> Result<Parsed, TreebankError> {
    let blocks = Blocks::new(reader).collect::<io::Result<Vec<_>>>()?;
    parse_blocks(&blocks, mode)
}
