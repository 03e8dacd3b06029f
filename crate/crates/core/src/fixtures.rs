//! Small hand-written inputs shared by tests and examples.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::treebank::{parse_conllu, ErrorMode, Sentence, Token};

/// "My old village has been provided with the new services ." with PTB tags.
pub const VILLAGE_CONLLU: &str = "\
# text = My old village has been provided with the new services.
1\tMy\tmy\tPRP$\tPRP$\t_\t3\tposs\t_\t_
2\told\told\tADJ\tJJ\t_\t3\tamod\t_\t_
3\tvillage\tvillage\tNOUN\tNN\t_\t6\tnsubj\t_\t_
4\thas\thave\tAUX\tVBZ\t_\t6\taux\t_\t_
5\tbeen\tbe\tAUX\tVBN\t_\t6\tauxpass\t_\t_
6\tprovided\tprovide\tVERB\tVBN\t_\t0\tROOT\t_\t_
7\twith\twith\tADP\tIN\t_\t6\tprep\t_\t_
8\tthe\tthe\tDET\tDT\t_\t10\tdet\t_\t_
9\tnew\tnew\tADJ\tJJ\t_\t10\tamod\t_\t_
10\tservices\tservice\tNOUN\tNNS\t_\t7\tpobj\t_\t_
11\t.\t.\tPUNCT\t.\t_\t6\tpunct\t_\t_

";

/// The pattern between `old` and `new` in [`VILLAGE_CONLLU`].
pub const VILLAGE_KEY: &str = "X/JJ/amod/2 -- village/NN/nsubj/1 -- provide/VBN/ROOT/0 -- with/IN/prep/1 -- service/NNS/pobj/2 -- Y/JJ/amod/3";

pub fn village_sentence() -> Sentence {
    parse_conllu(VILLAGE_CONLLU.as_bytes(), ErrorMode::Strict)
        .expect("fixture parses")
        .sentences
        .remove(0)
}

const TAGS: [&str; 6] = ["JJ", "NN", "NNS", "VBD", "IN", "DT"];
const RELS: [&str; 6] = ["amod", "nsubj", "dobj", "prep", "pobj", "det"];

/// A uniformly shaped random dependency tree with `n` tokens. Every
/// token's lemma is `w<id>`, so lemmas are unique.
pub fn random_sentence(n: usize, seed: u64) -> Sentence {
    assert!(n > 0, "a sentence needs a token");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Attach the nodes of a random order, each to an earlier one.
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);
    let mut heads = vec![0; n + 1];
    for k in 1..n {
        heads[order[k]] = order[rng.gen_range(0..k)];
    }
    let tokens = (1..=n)
        .map(|id| Token {
            id,
            form: format!("W{id}"),
            lemma: format!("w{id}"),
            pos: TAGS[rng.gen_range(0..TAGS.len())].to_string(),
            head: heads[id],
            deprel: if heads[id] == 0 {
                "ROOT".to_string()
            } else {
                RELS[rng.gen_range(0..RELS.len())].to_string()
            },
        })
        .collect();
    Sentence::new(tokens).expect("random attachment yields a tree")
}
