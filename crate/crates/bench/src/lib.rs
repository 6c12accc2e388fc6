//! Deterministic inputs for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treecover::{random_family_tree, random_tree, FamilyBudget, Graph};

pub const SIZES: [usize; 3] = [100, 1000, 10_000];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random labeled tree.
pub fn uniform_tree(n: usize, seed: u64) -> Graph {
    random_tree(n, &mut rng(seed))
}

/// A spine of `n / 2` vertices with one leaf hanging from each.
pub fn caterpillar(n: usize) -> Graph {
    let spine = n / 2;
    let mut edges: Vec<(usize, usize)> = (1..spine).map(|i| (i - 1, i)).collect();
    edges.extend((0..n - spine).map(|i| (i % spine, spine + i)));
    Graph::from_edges(n, &edges).expect("caterpillar is a tree")
}

/// A tree whose complement has a unique island sequence, with at most `n`
/// vertices.
pub fn family_member(n: usize, seed: u64) -> Graph {
    let budget = FamilyBudget {
        max_ops: n,
        max_vertices: n,
    };
    random_family_tree(&mut rng(seed), budget).0.tree()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_give_trees() {
        for n in [4, 11, 100] {
            assert!(uniform_tree(n, 1).is_tree());
            let c = caterpillar(n);
            assert!(c.is_tree() && c.n() == n);
            let f = family_member(n, 1);
            assert!(f.is_tree() && f.n() <= n);
        }
        assert!(family_member(1000, 3).n() > 900);
    }
}
