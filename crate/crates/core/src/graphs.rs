//! Directed graphs on labelled vertex sets.
//!
//! Vertices are 0-based internally and 1-based in every textual form. Edge
//! `(j, k)` means that vertex `k` receives input from vertex `j`.
//!
//! Edges are stored as a bitset in the canonical order
//! `(1,2), (2,1), (1,3), (3,1), (2,3), (3,2), (1,4), (4,1), …`, so that for
//! three vertices the bitset read as a little-endian integer is the graph
//! number `ν`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::angle::circular_distance;
use crate::linalg;

/// Largest vertex count accepted by the exhaustive group operations.
pub const MAX_GROUP_ORDER_N: usize = 8;
/// Largest matrix handled by the characteristic-polynomial routines.
pub const MAX_SPECTRAL_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("vertex label {0} repeated")]
    RepeatedLabel(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("operation requires exactly 3 vertices, got {0}")]
    NotThreeVertices(usize),
    #[error("{0} vertices exceeds the limit of {1} for this operation")]
    TooLarge(usize, usize),
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("malformed graph literal {0:?}")]
    Parse(String),
}

#[inline]
fn edge_bit(j: usize, k: usize) -> usize {
    let (lo, hi, back) = if j < k { (j, k, 0) } else { (k, j, 1) };
    2 * (hi * (hi - 1) / 2 + lo) + back
}

#[inline]
fn bit_edge(bit: usize) -> (usize, usize) {
    let pair = bit / 2;
    // largest hi with hi(hi-1)/2 <= pair
    let mut hi = 1;
    while (hi + 1) * hi / 2 <= pair {
        hi += 1;
    }
    let lo = pair - hi * (hi - 1) / 2;
    if bit % 2 == 0 {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

/// A directed graph without self-loops on `n` labelled vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedGraph {
    n: usize,
    words: Vec<u64>,
}

impl DirectedGraph {
    /// The empty graph `∅_n`.
    pub fn empty(n: usize) -> Self {
        let bits = n * n.saturating_sub(1);
        Self {
            n,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    g.insert(j, k);
                }
            }
        }
        g
    }

    /// Graph from 0-based edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (j, k) in edges {
            g.check_vertex(j)?;
            g.check_vertex(k)?;
            if j == k {
                return Err(GraphError::SelfLoop(j + 1));
            }
            g.insert(j, k);
        }
        Ok(g)
    }

    /// Graph from an edge bitset in canonical order (low bits first).
    pub fn from_bits(n: usize, bits: u64) -> Self {
        let mut g = Self::empty(n);
        let total = n * n.saturating_sub(1);
        for b in 0..total.min(64) {
            if bits >> b & 1 == 1 {
                g.words[0] |= 1 << b;
            }
        }
        g
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::LabelOutOfRange {
                label: v + 1,
                n: self.n,
            })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, j: usize, k: usize) -> bool {
        if j == k || j >= self.n || k >= self.n {
            return false;
        }
        let b = edge_bit(j, k);
        self.words[b / 64] >> (b % 64) & 1 == 1
    }

    /// Adds edge `(j, k)`. Panics on self-loops or out-of-range vertices.
    #[inline]
    pub fn insert(&mut self, j: usize, k: usize) {
        assert!(j != k && j < self.n && k < self.n, "invalid edge ({j}, {k})");
        let b = edge_bit(j, k);
        self.words[b / 64] |= 1 << (b % 64);
    }

    #[inline]
    pub fn remove(&mut self, j: usize, k: usize) {
        if j != k && j < self.n && k < self.n {
            let b = edge_bit(j, k);
            self.words[b / 64] &= !(1 << (b % 64));
        }
    }

    /// Edge bitset in canonical order; only meaningful for `n ≤ 8`.
    pub fn bits(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Edges in canonical bit order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| bit_edge(w * 64 + b))
        })
    }

    /// Edges sorted lexicographically by `(source, target)`.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges().collect();
        e.sort_unstable();
        e
    }

    pub fn edge_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_undirected(&self) -> bool {
        self.edges().all(|(j, k)| self.has_edge(k, j))
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// 0/1 adjacency matrix with `A[j][k] = 1` iff `(j, k)` is an edge.
    pub fn adjacency(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |j, k| f64::from(u8::from(self.has_edge(j, k))))
    }

    pub fn in_degree(&self, k: usize) -> usize {
        (0..self.n).filter(|&j| self.has_edge(j, k)).count()
    }

    fn reach_from(&self, root: usize, forward: bool, undirected: bool) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in 0..self.n {
                let adjacent = if undirected {
                    self.has_edge(u, v) || self.has_edge(v, u)
                } else if forward {
                    self.has_edge(u, v)
                } else {
                    self.has_edge(v, u)
                };
                if adjacent && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        parent[root] = Some(root);
        parent
    }
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirectedGraph({self})")
    }
}

/// Graph literal `N;j>k,j>k,…` with 1-based labels, e.g. `3;1>2,2>3,3>1`.
impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.n)?;
        for (i, (j, k)) in self.sorted_edges().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}>{}", j + 1, k + 1)?;
        }
        Ok(())
    }
}

/// Parses a graph literal, or a bare integer `ν ∈ [0, 63]` for three vertices.
impl FromStr for DirectedGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GraphError::Parse(s.to_string());
        let s = s.trim();
        let Some((n_text, edge_text)) = s.split_once(';') else {
            let nu: u8 = s.parse().map_err(|_| err())?;
            return from_graph_number(nu);
        };
        let n: usize = n_text.trim().parse().map_err(|_| err())?;
        let mut edges = Vec::new();
        for item in edge_text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = item.split_once('>').ok_or_else(err)?;
            let j: usize = a.trim().parse().map_err(|_| err())?;
            let k: usize = b.trim().parse().map_err(|_| err())?;
            for v in [j, k] {
                if v == 0 || v > n {
                    return Err(GraphError::LabelOutOfRange { label: v, n });
                }
            }
            edges.push((j - 1, k - 1));
        }
        Self::from_edges(n, edges)
    }
}

/// Connectivity of a directed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Strongly,
    /// Not strongly connected, but the underlying undirected graph is connected.
    Weakly,
    Disconnected,
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Strongly => "strongly connected",
            Self::Weakly => "weakly connected",
            Self::Disconnected => "disconnected",
        })
    }
}

/// Standard graph families, with 1-based vertex labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Complete,
    Empty,
    Path(Vec<usize>),
    Cycle(Vec<usize>),
    UndirectedPath(Vec<usize>),
    UndirectedCycle(Vec<usize>),
    /// Complete graph on the listed vertices, embedded in `n` vertices.
    CompleteOn(Vec<usize>),
}

fn checked_labels(n: usize, labels: &[usize]) -> Result<Vec<usize>, GraphError> {
    let mut seen = vec![false; n];
    labels
        .iter()
        .map(|&l| {
            if l == 0 || l > n {
                return Err(GraphError::LabelOutOfRange { label: l, n });
            }
            if std::mem::replace(&mut seen[l - 1], true) {
                return Err(GraphError::RepeatedLabel(l));
            }
            Ok(l - 1)
        })
        .collect()
}

/// Builds a member of a standard family embedded on `n` vertices.
pub fn standard_graph(n: usize, family: &Family) -> Result<DirectedGraph, GraphError> {
    let mut g = DirectedGraph::empty(n);
    match family {
        Family::Complete => return Ok(DirectedGraph::complete(n)),
        Family::Empty => {}
        Family::Path(p) | Family::UndirectedPath(p) => {
            let v = checked_labels(n, p)?;
            for w in v.windows(2) {
                g.insert(w[0], w[1]);
                if matches!(family, Family::UndirectedPath(_)) {
                    g.insert(w[1], w[0]);
                }
            }
        }
        Family::Cycle(p) | Family::UndirectedCycle(p) => {
            let v = checked_labels(n, p)?;
            if v.len() < 2 {
                return Err(GraphError::SelfLoop(p.first().copied().unwrap_or(1)));
            }
            for i in 0..v.len() {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                g.insert(a, b);
                if matches!(family, Family::UndirectedCycle(_)) {
                    g.insert(b, a);
                }
            }
        }
        Family::CompleteOn(p) => {
            let v = checked_labels(n, p)?;
            for &a in &v {
                for &b in &v {
                    if a != b {
                        g.insert(a, b);
                    }
                }
            }
        }
    }
    Ok(g)
}

/// A permutation of `{0, …, n−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GraphError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(GraphError::NotAPermutation(images));
            }
        }
        Ok(Self { images })
    }

    /// From 1-based images, as written in cycle-free notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self, GraphError> {
        if images.contains(&0) {
            return Err(GraphError::NotAPermutation(images.to_vec()));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Transposition of `a` and `b` (0-based).
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self { images: inv }
    }

    /// +1 for even permutations, −1 for odd ones.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.n()];
        let mut sign = 1;
        for start in 0..self.n() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

/// All `n!` permutations in lexicographic order of their image vectors.
pub fn symmetric_group(n: usize) -> Result<Vec<Permutation>, GraphError> {
    if n > MAX_GROUP_ORDER_N {
        return Err(GraphError::TooLarge(n, MAX_GROUP_ORDER_N));
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation {
            images: cur.clone(),
        });
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    Ok(out)
}

/// The automorphism group of a graph, by exhaustive search over `S_n`.
pub fn automorphism_group(g: &DirectedGraph) -> Result<Vec<Permutation>, GraphError> {
    Ok(graph_isotropy(g, &symmetric_group(g.n())?))
}

/// `γH`, with edge set `{(γ(j), γ(k)) : (j, k) ∈ E(H)}`.
pub fn apply_permutation(
    gamma: &Permutation,
    h: &DirectedGraph,
) -> Result<DirectedGraph, GraphError> {
    if gamma.n() != h.n() {
        return Err(GraphError::SizeMismatch(gamma.n(), h.n()));
    }
    let mut out = DirectedGraph::empty(h.n());
    for (j, k) in h.edges() {
        out.insert(gamma.apply(j), gamma.apply(k));
    }
    Ok(out)
}

/// Elements of `group` that map `h` onto itself.
pub fn graph_isotropy(h: &DirectedGraph, group: &[Permutation]) -> Vec<Permutation> {
    group
        .iter()
        .filter(|g| apply_permutation(g, h).is_ok_and(|img| &img == h))
        .cloned()
        .collect()
}

/// Tolerance for componentwise equality of phases.
pub const PHASE_EQ_TOL: f64 = 1e-12;

/// Elements of `group` fixing the phase vector: `θ_{γ(k)} = θ_k` for all `k`.
pub fn point_isotropy(theta: &[f64], group: &[Permutation]) -> Vec<Permutation> {
    group
        .iter()
        .filter(|g| {
            g.n() == theta.len()
                && (0..theta.len())
                    .all(|k| circular_distance(theta[g.apply(k)], theta[k]) <= PHASE_EQ_TOL)
        })
        .cloned()
        .collect()
}

/// A spanning diverging tree as a parent array: `parent[root] = None` and
/// every other vertex has exactly one incoming tree edge `(parent[v], v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergingTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
}

impl DivergingTree {
    pub fn to_graph(&self) -> DirectedGraph {
        let mut g = DirectedGraph::empty(self.parent.len());
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                g.insert(*p, v);
            }
        }
        g
    }
}

/// A spanning diverging tree of `h`, if one exists: some root reaches every
/// vertex along directed edges.
pub fn spanning_diverging_tree(h: &DirectedGraph) -> Option<DivergingTree> {
    (0..h.n()).find_map(|root| {
        let parent = h.reach_from(root, true, false);
        parent.iter().all(Option::is_some).then(|| DivergingTree {
            root,
            parent: parent
                .into_iter()
                .enumerate()
                .map(|(v, p)| if v == root { None } else { p })
                .collect(),
        })
    })
}

pub fn has_spanning_diverging_tree(h: &DirectedGraph) -> bool {
    spanning_diverging_tree(h).is_some()
}

pub fn connectivity_class(h: &DirectedGraph) -> Connectivity {
    if h.n() <= 1 {
        return Connectivity::Strongly;
    }
    let all = |p: Vec<Option<usize>>| p.iter().all(Option::is_some);
    if all(h.reach_from(0, true, false)) && all(h.reach_from(0, false, false)) {
        Connectivity::Strongly
    } else if all(h.reach_from(0, true, true)) {
        Connectivity::Weakly
    } else {
        Connectivity::Disconnected
    }
}

/// Vertex sets of the weakly connected components, each sorted, ordered by
/// smallest member.
pub fn weak_components(h: &DirectedGraph) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; h.n()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..h.n() {
        if comp[v] != usize::MAX {
            continue;
        }
        let reached = h.reach_from(v, true, true);
        let members: Vec<usize> = (0..h.n()).filter(|&u| reached[u].is_some()).collect();
        for &u in &members {
            comp[u] = out.len();
        }
        out.push(members);
    }
    out
}

/// Laplacian with column sums zero: `L[j][k] = −A[j][k]` for `j ≠ k` and
/// `L[k][k]` the in-degree of `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix(pub DMatrix<f64>);

impl LaplacianMatrix {
    /// Laplacian of a weighted adjacency matrix (diagonal ignored).
    pub fn from_weights(w: &DMatrix<f64>) -> Self {
        let n = w.nrows();
        let mut l = DMatrix::zeros(n, n);
        for k in 0..n {
            for j in 0..n {
                if j != k {
                    l[(j, k)] = -w[(j, k)];
                    l[(k, k)] += w[(j, k)];
                }
            }
        }
        Self(l)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }
}

pub fn laplacian(h: &DirectedGraph) -> LaplacianMatrix {
    LaplacianMatrix::from_weights(&h.adjacency())
}

/// Algebraic multiplicity of the eigenvalue 0, read off the trailing zero
/// coefficients of the characteristic polynomial.
pub fn zero_eigenvalue_multiplicity(l: &LaplacianMatrix) -> Result<usize, GraphError> {
    if l.n() > MAX_SPECTRAL_N {
        return Err(GraphError::TooLarge(l.n(), MAX_SPECTRAL_N));
    }
    Ok(linalg::zero_root_multiplicity(&linalg::characteristic_polynomial(l.matrix())))
}

/// Graph number `ν = A12 + 2A21 + 4A13 + 8A31 + 16A23 + 32A32` of a graph on
/// three vertices.
pub fn graph_number(h: &DirectedGraph) -> Result<u8, GraphError> {
    if h.n() != 3 {
        return Err(GraphError::NotThreeVertices(h.n()));
    }
    Ok(h.bits() as u8)
}

pub fn from_graph_number(nu: u8) -> Result<DirectedGraph, GraphError> {
    if nu > 63 {
        return Err(GraphError::Parse(nu.to_string()));
    }
    Ok(DirectedGraph::from_bits(3, u64::from(nu)))
}

/// Subtractive channel (0 = cyan, 1 = magenta, 2 = yellow) owned by a vertex pair.
fn pair_channel(j: usize, k: usize) -> usize {
    match (j.min(k), j.max(k)) {
        (0, 1) => 0,
        (0, 2) => 1,
        _ => 2,
    }
}

/// Shade of a directed edge: edges along the cycle 1→2→3→1 carry 1/3, edges
/// against it 2/3, so the two cycles get distinct grays and each channel
/// takes one of four distinct levels.
fn edge_shade(j: usize, k: usize) -> f64 {
    if (j + 1) % 3 == k {
        1.0 / 3.0
    } else {
        2.0 / 3.0
    }
}

/// Colour of a graph on three vertices as RGB in `[0, 1]`.
///
/// Each vertex pair owns one subtractive channel; the shades of the edges
/// present are added. `∅_3` is white, `K_3` black, the directed cycles are
/// gray, and the graphs with all edges at one vertex are red, green and blue.
pub fn graph_color(h: &DirectedGraph) -> Result<[f64; 3], GraphError> {
    if h.n() != 3 {
        return Err(GraphError::NotThreeVertices(h.n()));
    }
    let mut cmy = [0.0f64; 3];
    for (j, k) in h.edges() {
        cmy[pair_channel(j, k)] += edge_shade(j, k);
    }
    Ok(cmy.map(|c| 1.0 - c.min(1.0)))
}

/// `#rrggbb` form of [`graph_color`].
pub fn graph_color_hex(h: &DirectedGraph) -> Result<String, GraphError> {
    let rgb = graph_color(h)?;
    let [r, g, b] = rgb.map(|c| (c * 255.0).round() as u8);
    Ok(format!("#{r:02x}{g:02x}{b:02x}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> DirectedGraph {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_bit_order_round_trips() {
        for bit in 0..56 {
            let (j, k) = bit_edge(bit);
            assert_eq!(edge_bit(j, k), bit);
        }
        assert_eq!(bit_edge(0), (0, 1));
        assert_eq!(bit_edge(1), (1, 0));
        assert_eq!(bit_edge(5), (2, 1));
        assert_eq!(bit_edge(6), (0, 3));
    }

    #[test]
    fn families() {
        assert_eq!(DirectedGraph::complete(3).edge_count(), 6);
        let c = standard_graph(3, &Family::Cycle(vec![1, 2, 3])).unwrap();
        assert_eq!(c.sorted_edges(), vec![(0, 1), (1, 2), (2, 0)]);
        let up = standard_graph(3, &Family::UndirectedPath(vec![1, 2, 3])).unwrap();
        assert_eq!(up.edge_count(), 4);
        assert!(up.is_undirected());
        assert_eq!(
            standard_graph(3, &Family::Path(vec![1, 1])),
            Err(GraphError::RepeatedLabel(1))
        );
        assert!(matches!(
            standard_graph(3, &Family::Path(vec![1, 4])),
            Err(GraphError::LabelOutOfRange { .. })
        ));
        let k23 = standard_graph(4, &Family::CompleteOn(vec![2, 3])).unwrap();
        assert_eq!(k23.sorted_edges(), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn literal_round_trip() {
        let c = g("3;1>2,2>3,3>1");
        assert_eq!(c.to_string(), "3;1>2,2>3,3>1");
        assert_eq!(g("3;").to_string(), "3;");
        assert_eq!(g("63"), DirectedGraph::complete(3));
        assert!("3;1>1".parse::<DirectedGraph>().is_err());
        assert!("3;1-2".parse::<DirectedGraph>().is_err());
        assert!("3;0>2".parse::<DirectedGraph>().is_err());
    }

    #[test]
    fn permutations_act_on_edges() {
        let h = g("3;1>2");
        assert_eq!(apply_permutation(&Permutation::identity(3), &h).unwrap(), h);
        let swap = Permutation::transposition(3, 0, 1);
        assert_eq!(apply_permutation(&swap, &h).unwrap(), g("3;2>1"));
        let rot = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let c = g("3;1>2,2>3,3>1");
        assert_eq!(apply_permutation(&rot, &c).unwrap(), c);
        assert!(apply_permutation(&Permutation::identity(4), &c).is_err());
    }

    #[test]
    fn isotropy_examples() {
        let s3 = symmetric_group(3).unwrap();
        assert_eq!(s3.len(), 6);
        assert_eq!(graph_isotropy(&DirectedGraph::complete(3), &s3).len(), 6);
        assert_eq!(graph_isotropy(&DirectedGraph::empty(3), &s3).len(), 6);
        let cyc = graph_isotropy(&g("3;1>2,2>3,3>1"), &s3);
        assert_eq!(cyc.len(), 3);
        assert!(cyc.iter().all(|p| p.sign() == 1));

        let pi = std::f64::consts::PI;
        assert_eq!(point_isotropy(&[0.3; 3], &s3).len(), 6);
        assert_eq!(point_isotropy(&[0.0, 1.0, 2.0], &s3).len(), 1);
        let iso = point_isotropy(&[0.0, 0.0, pi], &s3);
        assert_eq!(iso, vec![Permutation::identity(3), Permutation::transposition(3, 0, 1)]);
    }

    #[test]
    fn connectivity_examples() {
        assert!(has_spanning_diverging_tree(&DirectedGraph::complete(4)));
        assert!(!has_spanning_diverging_tree(&DirectedGraph::empty(3)));
        let c = g("3;1>2,2>3,3>1");
        let tree = spanning_diverging_tree(&c).unwrap();
        assert_eq!(tree.root, 0);
        assert!(tree.to_graph().is_subgraph_of(&c));
        assert_eq!(tree.to_graph().edge_count(), 2);

        assert_eq!(connectivity_class(&DirectedGraph::complete(3)), Connectivity::Strongly);
        assert_eq!(connectivity_class(&g("3;1>2,2>3")), Connectivity::Weakly);
        assert_eq!(connectivity_class(&DirectedGraph::empty(3)), Connectivity::Disconnected);

        assert_eq!(weak_components(&DirectedGraph::empty(3)), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(weak_components(&DirectedGraph::complete(3)), vec![vec![0, 1, 2]]);
        assert_eq!(weak_components(&g("3;1>2")), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn laplacian_examples() {
        let l = laplacian(&DirectedGraph::empty(4));
        assert!(l.matrix().iter().all(|&x| x == 0.0));
        assert_eq!(zero_eigenvalue_multiplicity(&l).unwrap(), 4);

        let k2 = laplacian(&DirectedGraph::complete(2));
        assert_eq!(k2.0, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));

        let c = laplacian(&g("3;1>2,2>3,3>1"));
        for k in 0..3 {
            assert_eq!(c.0.column(k).sum(), 0.0);
            assert_eq!(c.0[(k, k)], 1.0);
        }
        assert_eq!(zero_eigenvalue_multiplicity(&c).unwrap(), 1);

        let two_cycles = g("4;1>2,2>1,3>4,4>3");
        assert_eq!(zero_eigenvalue_multiplicity(&laplacian(&two_cycles)).unwrap(), 2);
    }

    #[test]
    fn graph_numbers() {
        assert_eq!(graph_number(&DirectedGraph::empty(3)).unwrap(), 0);
        assert_eq!(graph_number(&DirectedGraph::complete(3)).unwrap(), 63);
        assert_eq!(graph_number(&g("3;1>2,2>1")).unwrap(), 3);
        assert_eq!(graph_number(&g("3;3>2")).unwrap(), 32);
        assert_eq!(graph_number(&g("3;1>3")).unwrap(), 4);
        assert!(graph_number(&DirectedGraph::empty(4)).is_err());
    }

    #[test]
    fn colour_anchors() {
        assert_eq!(graph_color(&DirectedGraph::empty(3)).unwrap(), [1.0; 3]);
        assert_eq!(graph_color(&DirectedGraph::complete(3)).unwrap(), [0.0; 3]);
        let fwd = graph_color(&g("3;1>2,2>3,3>1")).unwrap();
        let back = graph_color(&g("3;3>2,2>1,1>3")).unwrap();
        assert!(fwd.iter().all(|&c| (c - fwd[0]).abs() < 1e-15));
        assert!(back.iter().all(|&c| (c - back[0]).abs() < 1e-15));
        assert!((fwd[0] - back[0]).abs() > 0.1);
        // all edges at vertex 3: red
        assert_eq!(graph_color(&g("3;1>3,3>1,2>3,3>2")).unwrap(), [1.0, 0.0, 0.0]);
        assert_eq!(graph_color(&g("3;1>2,2>1,2>3,3>2")).unwrap(), [0.0, 1.0, 0.0]);
        assert_eq!(graph_color(&g("3;1>2,2>1,1>3,3>1")).unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(graph_color_hex(&DirectedGraph::complete(3)).unwrap(), "#000000");
    }
}
