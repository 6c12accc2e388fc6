//! Random instances for the formula checks and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::oracle::random_tree;
use crate::path_cover::{is_2_sparse, three_light_formula};

/// Applies a uniformly random vertex relabeling.
pub fn shuffle_labels<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Graph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(rng);
    g.relabel(&perm)
}

/// A random 2-sparse tree with `n` vertices, by rejection from uniform trees.
/// Returns `None` after `attempts` misses.
pub fn random_2_sparse_tree<R: Rng + ?Sized>(
    n: usize,
    attempts: usize,
    rng: &mut R,
) -> Option<Graph> {
    (0..attempts).map(|_| random_tree(n, rng)).find(is_2_sparse)
}

/// Random clique orders (2 to `max_order`) for each edge of `t`.
pub fn random_orders<R: Rng + ?Sized>(t: &Graph, max_order: usize, rng: &mut R) -> Vec<usize> {
    (0..t.m())
        .map(|_| rng.gen_range(2..=max_order.max(2)))
        .collect()
}

/// A random connected graph, not a cycle, in which every heavy vertex has at
/// least three light neighbours, with at most `max_n` vertices.
///
/// One to three hub vertices are wired together at random; light gadgets
/// (pendant paths, bridges between two hubs, short loops through a hub) are
/// added until every hub has three light neighbours and the hubs are joined.
pub fn random_three_light_graph<R: Rng + ?Sized>(max_n: usize, rng: &mut R) -> Option<Graph> {
    for _ in 0..1000 {
        if let Some(g) = try_three_light(max_n, rng) {
            return Some(shuffle_labels(&g, rng));
        }
    }
    None
}

fn try_three_light<R: Rng + ?Sized>(max_n: usize, rng: &mut R) -> Option<Graph> {
    let hubs = rng.gen_range(1..=3usize);
    let mut n = hubs;
    let mut edges = Vec::new();
    for a in 0..hubs {
        for b in a + 1..hubs {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    let mut light = vec![0usize; hubs];
    let fresh = |n: &mut usize| {
        *n += 1;
        *n - 1
    };
    // join hub components through light bridges
    for b in 1..hubs {
        let g = Graph::from_edges(n, &edges).ok()?;
        if g.bfs_distances(0)[b] == usize::MAX {
            let x = fresh(&mut n);
            let a = rng.gen_range(0..b);
            edges.push((a, x));
            edges.push((x, b));
            light[a] += 1;
            light[b] += 1;
        }
    }
    while let Some(h) = (0..hubs).find(|&h| light[h] < 3) {
        match rng.gen_range(0..4) {
            0 | 1 => {
                let len = rng.gen_range(1..=2);
                let mut prev = h;
                for _ in 0..len {
                    let x = fresh(&mut n);
                    edges.push((prev, x));
                    prev = x;
                }
                light[h] += 1;
            }
            2 if hubs > 1 => {
                let other = (h + rng.gen_range(1..hubs)) % hubs;
                let x = fresh(&mut n);
                edges.push((h, x));
                edges.push((x, other));
                light[h] += 1;
                light[other] += 1;
            }
            _ => {
                let x = fresh(&mut n);
                let y = fresh(&mut n);
                edges.extend([(h, x), (x, y), (y, h)]);
                light[h] += 2;
            }
        }
    }
    if n > max_n {
        return None;
    }
    let g = Graph::from_edges(n, &edges).ok()?;
    three_light_formula(&g).ok()?;
    Some(g)
}
