//! The connected-graph sum computed directly and through the Penrose tree
//! partition, plus the tree-graph bound it implies.

use polyspin::combinatorics::{
    penrose_graph, tree_graph_bound, trees, ursell_sum, ursell_sum_penrose, EdgeWeights,
};
use rand::{Rng, SeedableRng};

fn main() -> polyspin::Result<()> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let n = 5;
    let w = EdgeWeights::from_fn(n, |_, _| rng.gen_range(-0.5..1.5));

    let direct = ursell_sum(&w)?;
    println!("sum over {n}-vertex connected graphs: {direct:.15}");
    for root in 0..n {
        let via_trees = ursell_sum_penrose(&w, root, &(0..n).collect::<Vec<_>>())?;
        println!("  via trees rooted at {root}:          {via_trees:.15}");
    }

    // A star: every leaf sits in the same generation, so the leaves are joined.
    let t = trees(4)?
        .find(|t| t.edges().iter().all(|&(a, b)| a == 0 || b == 0))
        .expect("the star is a tree");
    println!(
        "tree {:?} -> Penrose graph {:?}",
        t.edges(),
        penrose_graph(&t, &[0, 1, 2, 3]).edges()
    );

    let b = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| w.get(i, j).abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
        / 2.0;
    let (lhs, rhs) = tree_graph_bound(&w, b)?;
    println!("tree-graph bound with B = {b:.4}: {lhs:.6} <= {rhs:.6}");
    Ok(())
}
