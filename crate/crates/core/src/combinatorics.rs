//! Connected graphs, labeled trees and the Penrose tree-graph identity.
//!
//! Vertices are `0..n`. The Ursell sum of a weight map `v` on pairs is
//!
//! ```text
//!     Σ_{g connected on 0..n} Π_{{i,j} ∈ g} (e^{-v_ij} - 1)
//! ```
//!
//! and is evaluated three ways: by brute-force enumeration of connected edge
//! subsets, by summing over trees with the Penrose map, and by the subset
//! recursion used on the hot path of the activity computation.

use num_complex::ComplexFloat;

use crate::{Error, Result};

/// Largest vertex count for connected-graph enumeration (`2^21` edge subsets).
pub const MAX_GRAPH_VERTICES: usize = 7;
/// Largest vertex count for tree enumeration (`8^6` Prüfer sequences).
pub const MAX_TREE_VERTICES: usize = 8;

/// Position of the pair `{i, j}` in the row-major upper triangle of `n` vertices.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// A simple graph on `0..n`, edges stored as `(i, j)` with `i < j`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl EdgeGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({i}, {j}) is not a pair of distinct vertices below {n}"
                )));
            }
            normalized.push((i.min(j), i.max(j)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("duplicate edge".into()));
        }
        Ok(EdgeGraph {
            n,
            edges: normalized,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let mut sets = DisjointSets::new(self.n);
        for &(i, j) in &self.edges {
            sets.union(i, j);
        }
        sets.components() <= 1
    }
}

/// A labeled tree on `0..n` together with a root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeTree {
    graph: EdgeGraph,
    root: usize,
}

impl EdgeTree {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        root: usize,
    ) -> Result<Self> {
        let graph = EdgeGraph::new(n, edges)?;
        if n == 0 || root >= n || graph.edges.len() != n - 1 || !graph.is_connected() {
            return Err(Error::InvalidParameter(format!(
                "{:?} is not a spanning tree of {n} vertices rooted in range",
                graph.edges
            )));
        }
        Ok(EdgeTree { graph, root })
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.graph.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn rerooted(&self, root: usize) -> Result<Self> {
        EdgeTree::new(self.graph.n, self.graph.edges.iter().copied(), root)
    }

    pub fn as_graph(&self) -> &EdgeGraph {
        &self.graph
    }

    /// Distance from the root and parent of every vertex (the root is its own
    /// parent).
    pub fn generations(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.graph.n;
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &self.graph.edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut depth = vec![usize::MAX; n];
        let mut parent = vec![self.root; n];
        depth[self.root] = 0;
        let mut queue = std::collections::VecDeque::from([self.root]);
        while let Some(x) = queue.pop_front() {
            for &y in &adjacency[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        (depth, parent)
    }
}

/// Values `v_{i,j}` on the unordered pairs of `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeights<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Copy> EdgeWeights<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let values = all_pairs(n).into_iter().map(|(i, j)| f(i, j)).collect();
        EdgeWeights { n, values }
    }

    pub fn constant(n: usize, value: T) -> Self {
        EdgeWeights {
            n,
            values: vec![value; pair_count(n)],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[pair_index(self.n, i, j)]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// Union-find over `0..n` with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `x` and `y`; returns false if they were already joined.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

fn check_graph_budget(n: usize) -> Result<()> {
    if !(2..=MAX_GRAPH_VERTICES).contains(&n) {
        return Err(Error::Budget {
            what: "connected-graph enumeration vertices",
            requested: n,
            limit: MAX_GRAPH_VERTICES,
        });
    }
    Ok(())
}

fn check_tree_budget(n: usize) -> Result<()> {
    if !(2..=MAX_TREE_VERTICES).contains(&n) {
        return Err(Error::Budget {
            what: "tree enumeration vertices",
            requested: n,
            limit: MAX_TREE_VERTICES,
        });
    }
    Ok(())
}

/// Bitmasks over `all_pairs(n)` whose edge sets connect `0..n`.
fn connected_masks(n: usize) -> impl Iterator<Item = u32> {
    let pairs = all_pairs(n);
    let total = 1u32 << pairs.len();
    (0..total).filter(move |&mask| {
        if (mask.count_ones() as usize) < n - 1 {
            return false;
        }
        let mut sets = DisjointSets::new(n);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 && sets.union(i, j) && sets.components() == 1 {
                return true;
            }
        }
        sets.components() == 1
    })
}

/// Every connected graph on `0..n`, each exactly once, by filtering all
/// `2^{n(n-1)/2}` edge subsets.
pub fn connected_graphs(n: usize) -> Result<impl Iterator<Item = EdgeGraph>> {
    check_graph_budget(n)?;
    let pairs = all_pairs(n);
    Ok(connected_masks(n).map(move |mask| EdgeGraph {
        n,
        edges: pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect(),
    }))
}

/// Decodes a Prüfer sequence over `0..n` into the edge list of its tree.
pub fn prufer_decode(n: usize, sequence: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(sequence.len() + 2, n);
    let mut degree = vec![1usize; n];
    for &v in sequence {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in sequence {
        let leaf = (0..n)
            .find(|&u| degree[u] == 1)
            .expect("a leaf always exists");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let mut rest = (0..n).filter(|&u| degree[u] == 1);
    let (u, w) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((u, w));
    edges.sort_unstable();
    edges
}

/// Every labeled tree on `0..n`, rooted at vertex 0, via Prüfer sequences.
pub fn trees(n: usize) -> Result<impl Iterator<Item = EdgeTree>> {
    check_tree_budget(n)?;
    let len = n - 2;
    let total = n.pow(len as u32);
    Ok((0..total).map(move |mut code| {
        let sequence: Vec<usize> = (0..len)
            .map(|_| {
                let digit = code % n;
                code /= n;
                digit
            })
            .collect();
        EdgeTree {
            graph: EdgeGraph {
                n,
                edges: prufer_decode(n, &sequence),
            },
            root: 0,
        }
    }))
}

/// The Penrose graph `p(τ)` of a rooted tree.
///
/// `labels[x]` is the rank of vertex `x` in the chosen total order. Besides the
/// tree edges, `p(τ)` joins every pair of vertices in the same generation and
/// joins each non-root vertex to those vertices of the previous generation
/// whose label exceeds the label of its parent.
pub fn penrose_graph(t: &EdgeTree, labels: &[usize]) -> EdgeGraph {
    let n = t.vertex_count();
    assert_eq!(labels.len(), n, "one label per vertex");
    let (depth, parent) = t.generations();
    let mut edges = t.edges().to_vec();
    for (i, j) in all_pairs(n) {
        if t.as_graph().contains(i, j) {
            continue;
        }
        let uncle = |x: usize, y: usize| depth[y] + 1 == depth[x] && labels[y] > labels[parent[x]];
        if depth[i] == depth[j] || uncle(i, j) || uncle(j, i) {
            edges.push((i, j));
        }
    }
    edges.sort_unstable();
    EdgeGraph { n, edges }
}

fn mayer_factors<T: ComplexFloat<Real = f64>>(w: &EdgeWeights<T>) -> Vec<T> {
    w.values.iter().map(|&v| (-v).exp() - T::one()).collect()
}

/// `Σ_{g connected} Π_{{i,j}∈g} (e^{-v_ij} - 1)` by direct enumeration.
pub fn ursell_sum<T: ComplexFloat<Real = f64>>(w: &EdgeWeights<T>) -> Result<T> {
    check_graph_budget(w.n)?;
    let factors = mayer_factors(w);
    let mut total = T::zero();
    for mask in connected_masks(w.n) {
        let mut term = T::one();
        let mut bits = mask;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            term = term * factors[k];
            bits &= bits - 1;
        }
        total = total + term;
    }
    Ok(total)
}

/// The tree side of the Penrose identity:
/// `Σ_τ Π_{e∈τ} (e^{-v_e} - 1) · exp(-Σ_{e ∈ p(τ) \ τ} v_e)`, trees rooted at
/// `root` and the Penrose map built from `labels`.
pub fn ursell_sum_penrose<T: ComplexFloat<Real = f64>>(
    w: &EdgeWeights<T>,
    root: usize,
    labels: &[usize],
) -> Result<T> {
    check_graph_budget(w.n)?;
    if root >= w.n {
        return Err(Error::InvalidParameter(format!("root {root} out of range")));
    }
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted != (0..w.n).collect::<Vec<_>>() {
        return Err(Error::InvalidParameter(
            "labels must be a permutation of 0..n".into(),
        ));
    }
    let mut total = T::zero();
    for tree in trees(w.n)? {
        let tree = tree.rerooted(root)?;
        let p = penrose_graph(&tree, labels);
        let mut term = T::one();
        for &(i, j) in tree.edges() {
            term = term * ((-w.get(i, j)).exp() - T::one());
        }
        let mut extra = T::zero();
        for &(i, j) in p.edges() {
            if !tree.as_graph().contains(i, j) {
                extra = extra + w.get(i, j);
            }
        }
        total = total + term * (-extra).exp();
    }
    Ok(total)
}

/// Connected-graph sum by the subset recursion
/// `C(S) = F(S) - Σ_{T ∋ min S, T ⊊ S} C(T) F(S \ T)`, with
/// `F(S) = Π_{{i,j}⊂S} e^{-v_ij}`. Costs `O(3^n)`.
pub fn connected_sum<T: ComplexFloat<Real = f64>>(w: &EdgeWeights<T>) -> T {
    let n = w.n;
    assert!(n < 31, "subset recursion needs fewer than 31 vertices");
    if n <= 1 {
        return T::one();
    }
    let full = (1usize << n) - 1;
    let mut boltzmann = vec![T::one(); full + 1];
    for s in 1..=full {
        let top = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let rest = s & !(1 << top);
        let mut value = boltzmann[rest];
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            value = value * (-w.get(j, top)).exp();
            bits &= bits - 1;
        }
        boltzmann[s] = value;
    }
    let mut connected = vec![T::zero(); full + 1];
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let others = s & !low;
        let mut value = boltzmann[s];
        // proper subsets T of S containing `low`: T = low | u with u ⊊ others
        let mut u = (others.wrapping_sub(1)) & others;
        loop {
            if u != others {
                let t = low | u;
                value = value - connected[t] * boltzmann[s & !t];
            }
            if u == 0 {
                break;
            }
            u = (u - 1) & others;
        }
        connected[s] = value;
    }
    connected[full]
}

/// Both sides of the tree-graph bound
/// `|Σ_g Π (e^{-v} - 1)| ≤ e^{Bn} Σ_τ Π (1 - e^{-|v|})`, valid whenever every
/// row sum `Σ_{j≠i} |v_ij|` is at most `2B`.
pub fn tree_graph_bound<T: ComplexFloat<Real = f64>>(
    w: &EdgeWeights<T>,
    b: f64,
) -> Result<(f64, f64)> {
    let n = w.n;
    check_graph_budget(n)?;
    let row_sum = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| w.get(i, j).abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    if !(b >= 0.0) || row_sum > 2.0 * b * (1.0 + 1e-12) {
        return Err(Error::StabilityViolated {
            row_sum,
            two_b: 2.0 * b,
        });
    }
    let lhs = ursell_sum(w)?.abs();
    let tree_sum: f64 = trees(n)?
        .map(|t| {
            t.edges()
                .iter()
                .map(|&(i, j)| -(-w.get(i, j).abs()).exp_m1())
                .product::<f64>()
        })
        .sum();
    Ok((lhs, (b * n as f64).exp() * tree_sum))
}
