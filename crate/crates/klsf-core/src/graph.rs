//! Labelled-graph representation and connectivity primitives.
//!
//! A [`LabeledGraph`] is an immutable undirected graph whose edges carry a
//! label from a finite label set. Candidate solutions are [`LabelSubset`]s;
//! their quality is the number of connected components of the subgraph made
//! of the edges whose label is in the subset.

use std::fmt;

use thiserror::Error;

/// One undirected edge. Vertex ids live in `[1, n]`, label ids in `[1, l]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: usize,
}

impl Edge {
    pub fn new(u: usize, v: usize, label: usize) -> Self {
        Edge { u, v, label }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("edge {index}: vertex id {vertex} out of range [1, {max}]")]
    VertexOutOfRange {
        index: usize,
        vertex: usize,
        max: usize,
    },
    #[error("edge {index}: self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index}: label id {label} out of range [1, {max}]")]
    LabelOutOfRange {
        index: usize,
        label: usize,
        max: usize,
    },
}

/// Disjoint-set forest with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    /// Root of `x`, compressing the visited path.
    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Merges the sets of `x` and `y`; returns true when they were distinct.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return false;
        }
        let (big, small) = if self.size[rx] >= self.size[ry] {
            (rx, ry)
        } else {
            (ry, rx)
        };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// A set of label ids over the universe `[1, l]`, with a cached component
/// count.
///
/// The cache is written by [`LabeledGraph::comp_count`] and cleared by any
/// mutation, so a cached value is only meaningful for the graph that
/// computed it.
#[derive(Debug, Clone)]
pub struct LabelSubset {
    universe: usize,
    words: Vec<u64>,
    len: usize,
    comp: Option<usize>,
}

impl LabelSubset {
    pub fn empty(universe: usize) -> Self {
        LabelSubset {
            universe,
            words: vec![0; universe.div_ceil(64)],
            len: 0,
            comp: None,
        }
    }

    /// The subset containing every label of the universe.
    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for label in 1..=universe {
            s.insert(label);
        }
        s
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(universe: usize, labels: I) -> Self {
        let mut s = Self::empty(universe);
        for label in labels {
            s.insert(label);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, label: usize) -> bool {
        assert!(
            label >= 1 && label <= self.universe,
            "label {label} outside universe [1, {}]",
            self.universe
        );
        let bit = label - 1;
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    /// Adds a label; returns true when it was absent. Clears the cache on
    /// change.
    pub fn insert(&mut self, label: usize) -> bool {
        assert!(
            label >= 1 && label <= self.universe,
            "label {label} outside universe [1, {}]",
            self.universe
        );
        let bit = label - 1;
        let word = &mut self.words[bit / 64];
        let mask = 1u64 << (bit % 64);
        if *word & mask != 0 {
            return false;
        }
        *word |= mask;
        self.len += 1;
        self.comp = None;
        true
    }

    /// Removes a label; returns true when it was present. Clears the cache
    /// on change.
    pub fn remove(&mut self, label: usize) -> bool {
        assert!(
            label >= 1 && label <= self.universe,
            "label {label} outside universe [1, {}]",
            self.universe
        );
        let bit = label - 1;
        let word = &mut self.words[bit / 64];
        let mask = 1u64 << (bit % 64);
        if *word & mask == 0 {
            return false;
        }
        *word &= !mask;
        self.len -= 1;
        self.comp = None;
        true
    }

    /// Member labels in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + tz + 1)
                }
            })
        })
    }

    /// Labels of the universe not in the subset, ascending.
    pub fn unused(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.universe).filter(|&l| !self.contains(l))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Set union; the result carries no cached component count.
    pub fn union(&self, other: &LabelSubset) -> LabelSubset {
        assert_eq!(self.universe, other.universe, "label universes differ");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect::<Vec<_>>();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        LabelSubset {
            universe: self.universe,
            words,
            len,
            comp: None,
        }
    }

    /// Cached component count, if any.
    pub fn comp(&self) -> Option<usize> {
        self.comp
    }

    pub(crate) fn set_comp(&mut self, comp: usize) {
        self.comp = Some(comp);
    }
}

impl PartialEq for LabelSubset {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.words == other.words
    }
}

impl Eq for LabelSubset {}

impl fmt::Display for LabelSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, label) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, "}}")
    }
}

/// Number of labels in exactly one of the two subsets.
pub fn hamming_distance(a: &LabelSubset, b: &LabelSubset) -> usize {
    assert_eq!(a.universe, b.universe, "label universes differ");
    a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

/// Cycle-free witness subgraph: one spanning tree per connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    pub edges: Vec<Edge>,
    pub tree_count: usize,
}

/// Immutable undirected graph with labelled edges.
///
/// Parallel edges between the same vertex pair are permitted, with equal or
/// distinct labels; they collapse harmlessly during connectivity evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    n: usize,
    edges: Vec<Edge>,
    label_count: usize,
    label_index: Vec<Vec<usize>>,
}

impl LabeledGraph {
    pub fn new(n: usize, edges: Vec<Edge>, label_count: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut label_index = vec![Vec::new(); label_count];
        for (index, e) in edges.iter().enumerate() {
            for vertex in [e.u, e.v] {
                if vertex < 1 || vertex > n {
                    return Err(GraphError::VertexOutOfRange {
                        index,
                        vertex,
                        max: n,
                    });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { index, vertex: e.u });
            }
            if e.label < 1 || e.label > label_count {
                return Err(GraphError::LabelOutOfRange {
                    index,
                    label: e.label,
                    max: label_count,
                });
            }
            label_index[e.label - 1].push(index);
        }
        Ok(LabeledGraph {
            n,
            edges,
            label_count,
            label_index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Indices into [`Self::edges`] of the edges carrying `label`.
    pub fn edges_with_label(&self, label: usize) -> &[usize] {
        &self.label_index[label - 1]
    }

    /// Number of connected components of the subgraph keeping the edges
    /// whose label is in `c`. The result is cached into `c`.
    pub fn comp_count(&self, c: &mut LabelSubset) -> usize {
        assert!(
            c.universe() == self.label_count,
            "subset universe {} does not match the graph's {} labels",
            c.universe(),
            self.label_count
        );
        if let Some(comp) = c.comp() {
            return comp;
        }
        let uf = self.uf_with(c);
        let comp = uf.components();
        c.set_comp(comp);
        comp
    }

    /// Union-find state with every edge of the subset merged.
    pub(crate) fn uf_with(&self, c: &LabelSubset) -> UnionFind {
        let mut uf = UnionFind::new(self.n);
        for label in c.iter() {
            self.merge_label(&mut uf, label);
        }
        uf
    }

    /// Merges the edges of one label into an existing union-find state.
    pub(crate) fn merge_label(&self, uf: &mut UnionFind, label: usize) {
        for &ei in &self.label_index[label - 1] {
            let e = self.edges[ei];
            uf.union(e.u - 1, e.v - 1);
        }
    }

    /// Spanning forest of the subgraph induced by `c`: a single union-find
    /// pass keeps exactly the edges that merge two components, so every
    /// cycle loses an edge and each component keeps a spanning tree.
    pub fn extract_forest(&self, c: &LabelSubset) -> SpanningForest {
        let mut uf = UnionFind::new(self.n);
        let mut kept = Vec::new();
        for label in c.iter() {
            for &ei in &self.label_index[label - 1] {
                let e = self.edges[ei];
                if uf.union(e.u - 1, e.v - 1) {
                    kept.push(e);
                }
            }
        }
        SpanningForest {
            edges: kept,
            tree_count: uf.components(),
        }
    }
}
