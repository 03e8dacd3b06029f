use antsyn_core::fixtures::random_sentence;
use antsyn_core::treebank::{parse_conllu, validate_tree, ErrorMode, Sentence};
use proptest::prelude::*;

fn render(sentences: &[Sentence]) -> Vec<u8> {
    let mut buf = Vec::new();
    for s in sentences {
        s.write_conllu(&mut buf).unwrap();
    }
    buf
}

fn corpus() -> impl Strategy<Value = Vec<Sentence>> {
    prop::collection::vec((1usize..=20, any::<u64>()), 0..6)
        .prop_map(|specs| specs.into_iter().map(|(n, seed)| random_sentence(n, seed)).collect())
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(sentences in corpus()) {
        let parsed = parse_conllu(&render(&sentences)[..], ErrorMode::Strict).unwrap();
        prop_assert!(parsed.skipped.is_empty());
        prop_assert_eq!(parsed.sentences, sentences);
    }

    #[test]
    fn parsing_distributes_over_concatenation(a in corpus(), b in corpus()) {
        let (ta, tb) = (render(&a), render(&b));
        let mut joined = ta.clone();
        joined.extend_from_slice(&tb);
        let whole = parse_conllu(&joined[..], ErrorMode::Strict).unwrap().sentences;
        let mut parts = parse_conllu(&ta[..], ErrorMode::Strict).unwrap().sentences;
        parts.extend(parse_conllu(&tb[..], ErrorMode::Strict).unwrap().sentences);
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn every_token_reaches_the_root(n in 1usize..=30, seed in any::<u64>()) {
        let s = random_sentence(n, seed);
        prop_assert_eq!(validate_tree(s.tokens()), Ok(s.root_id()));
        for t in s.tokens() {
            let chain: Vec<usize> = s.ancestors(t.id).collect();
            prop_assert!(chain.len() <= n);
            prop_assert_eq!(*chain.last().unwrap(), s.root_id());
        }
    }

    #[test]
    fn a_redirected_head_is_caught_or_still_a_tree(n in 2usize..=20, seed in any::<u64>(), pick in any::<prop::sample::Index>(), to in any::<prop::sample::Index>()) {
        let s = random_sentence(n, seed);
        let mut tokens = s.tokens().to_vec();
        let i = pick.index(n);
        tokens[i].head = to.index(n + 1);
        // Oracle: follow heads from every token, looking for the root within n steps.
        let reaches_root = |start: usize| {
            let mut cur = start;
            for _ in 0..=n {
                if tokens[cur - 1].head == 0 {
                    return true;
                }
                cur = tokens[cur - 1].head;
            }
            false
        };
        let roots = tokens.iter().filter(|t| t.head == 0).count();
        let self_loop = tokens[i].head == tokens[i].id;
        let is_tree = roots == 1 && !self_loop && (1..=n).all(reaches_root);
        prop_assert_eq!(validate_tree(&tokens).is_ok(), is_tree);
    }
}
