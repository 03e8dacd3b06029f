use std::collections::VecDeque;

use antsyn_core::fixtures::random_sentence;
use antsyn_core::pattern::{
    annotate_direction, annotate_distance, build_pattern, parse_key, render_key, simple_path, Direction, FeatureMode,
    LemmaSlot, NodeLabel,
};
use antsyn_core::treebank::Sentence;
use proptest::prelude::*;

/// Adjacency lists of the undirected tree.
fn undirected(s: &Sentence) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); s.len() + 1];
    for t in s.tokens() {
        if t.head != 0 {
            adj[t.id].push(t.head);
            adj[t.head].push(t.id);
        }
    }
    adj
}

/// Shortest path by breadth-first search, ignoring edge direction.
fn bfs_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

fn bfs_distances(adj: &[Vec<usize>], from: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// The path node closest to the root, found by BFS depth from the root.
fn lca_on_path(s: &Sentence, adj: &[Vec<usize>], path: &[usize]) -> usize {
    let depth = bfs_distances(adj, s.root_id());
    *path.iter().min_by_key(|&&id| depth[id]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simple_path_matches_bfs(n in 1usize..=30, seed in any::<u64>()) {
        let s = random_sentence(n, seed);
        let adj = undirected(&s);
        for x in 1..=n {
            for y in 1..=n {
                if x == y {
                    continue;
                }
                let path = simple_path(&s, x, y);
                prop_assert_eq!(&path, &bfs_path(&adj, x, y));
                let lca = lca_on_path(&s, &adj, &path);
                let from_lca = bfs_distances(&adj, lca);
                let labels = annotate_distance(&path, &s);
                let expected: Vec<usize> = path.iter().map(|&id| from_lca[id]).collect();
                prop_assert_eq!(&labels, &expected);
                prop_assert_eq!(labels.iter().filter(|&&d| d == 0).count(), 1);
            }
        }
    }

    #[test]
    fn reversed_pair_reverses_the_path(n in 2usize..=30, seed in any::<u64>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let s = random_sentence(n, seed);
        let (x, y) = (a.index(n) + 1, b.index(n) + 1);
        prop_assume!(x != y);
        let mut back = simple_path(&s, y, x);
        back.reverse();
        prop_assert_eq!(simple_path(&s, x, y), back);
        let mut d = annotate_distance(&simple_path(&s, y, x), &s);
        d.reverse();
        prop_assert_eq!(annotate_distance(&simple_path(&s, x, y), &s), d);
    }

    #[test]
    fn directions_agree_with_distances(n in 2usize..=30, seed in any::<u64>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let s = random_sentence(n, seed);
        let (x, y) = (a.index(n) + 1, b.index(n) + 1);
        prop_assume!(x != y);
        let path = simple_path(&s, x, y);
        let dist = annotate_distance(&path, &s);
        let dirs = annotate_direction(&path, &s);
        let anchor = dist.iter().position(|&d| d == 0).unwrap();
        for (i, dir) in dirs.iter().enumerate() {
            let expected = match i.cmp(&anchor) {
                std::cmp::Ordering::Less => Direction::Up,
                std::cmp::Ordering::Equal => Direction::Anchor,
                std::cmp::Ordering::Greater => Direction::Down,
            };
            prop_assert_eq!(*dir, expected);
        }
    }

    #[test]
    fn keys_round_trip(n in 2usize..=30, seed in any::<u64>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), direction in any::<bool>()) {
        let s = random_sentence(n, seed);
        let (x, y) = (a.index(n) + 1, b.index(n) + 1);
        prop_assume!(x != y);
        let mode = if direction { FeatureMode::Direction } else { FeatureMode::Distance };
        let p = build_pattern(&s, x, y, mode, usize::MAX).unwrap();
        prop_assert_eq!(&p.nodes[0].lemma_slot, &LemmaSlot::X);
        prop_assert_eq!(&p.nodes.last().unwrap().lemma_slot, &LemmaSlot::Y);
        prop_assert!(p.nodes.iter().all(|n| n.label.mode() == mode));
        let parsed = parse_key(&p.key).unwrap();
        prop_assert_eq!(&parsed, &p.nodes);
        prop_assert_eq!(render_key(&parsed), p.key.clone());
        let rev = build_pattern(&s, y, x, mode, usize::MAX).unwrap();
        prop_assert_eq!(rev.nodes.len(), p.nodes.len());
        // Interior nodes mirror each other; the labels of the reverse path
        // swap up and down in direction mode.
        for (f, r) in p.nodes.iter().zip(rev.nodes.iter().rev()) {
            prop_assert_eq!(&f.pos, &r.pos);
            prop_assert_eq!(&f.deprel, &r.deprel);
            if let (NodeLabel::Distance(a), NodeLabel::Distance(b)) = (&f.label, &r.label) {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn length_cap_drops_long_paths(n in 2usize..=30, seed in any::<u64>(), cap in 2usize..8) {
        let s = random_sentence(n, seed);
        for y in 2..=n {
            let len = simple_path(&s, 1, y).len();
            let p = build_pattern(&s, 1, y, FeatureMode::Distance, cap);
            prop_assert_eq!(p.is_some(), len <= cap);
        }
    }
}
