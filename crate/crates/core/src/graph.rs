//! Undirected simple graphs, edge-list ingestion, all-pairs hop distances
//! and the summary measures used to calibrate the generative models.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected, unweighted graph without self-loops.
///
/// Neighbour lists are kept sorted so that iteration order (and therefore
/// everything downstream of it) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    edge_count: usize,
}

impl Network {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            labels: None,
            edge_count: 0,
        }
    }

    /// Builds a graph from index pairs. Duplicates (in either orientation)
    /// collapse; a self-loop is an error.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::SelfLoop {
                    line: 0,
                    node: u.to_string(),
                });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adj))
    }

    /// Builds a graph from a row-major 0/1 upper triangle (pairs `i < j` in
    /// lexicographic order), the layout used by [`Network::upper_triangle`].
    pub fn from_upper_triangle(n: usize, upper: &[bool]) -> Self {
        debug_assert_eq!(upper.len(), n * n.saturating_sub(1) / 2);
        let mut adj = vec![Vec::new(); n];
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if upper[idx] {
                    adj[i].push(j);
                    adj[j].push(i);
                }
                idx += 1;
            }
        }
        Self::from_raw_adjacency(adj)
    }

    fn from_raw_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        let mut twice = 0;
        for nb in adj.iter_mut() {
            nb.sort_unstable();
            nb.dedup();
            twice += nb.len();
        }
        Self {
            adj,
            labels: None,
            edge_count: twice / 2,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of node `i`, falling back to its index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().copied().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    /// Row-major upper triangle of the adjacency matrix.
    pub fn upper_triangle(&self) -> Vec<bool> {
        let n = self.n();
        let mut out = vec![false; n * n.saturating_sub(1) / 2];
        for (i, j) in self.edges() {
            out[pair_index(n, i, j)] = true;
        }
        out
    }

    pub fn density(&self) -> f64 {
        let n = self.n() as f64;
        if self.n() < 2 {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / (n * (n - 1.0))
    }

    /// Edge-list text, one `u v` line per edge, using labels when present.
    /// Isolated nodes are written as single-token lines.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for i in (0..self.n()).filter(|&i| self.degree(i) == 0) {
            let _ = writeln!(s, "{}", self.label(i));
        }
        for (i, j) in self.edges() {
            let _ = writeln!(s, "{} {}", self.label(i), self.label(j));
        }
        s
    }
}

/// Position of the pair `i < j` in a row-major upper triangle.
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Parses edge-list text. Blank lines and lines starting with `#` are
/// skipped. Nodes are numbered by first appearance, or, when `integer_ids`
/// is set and every token is a non-negative integer, by ascending integer
/// value.
pub fn parse_edge_list(text: &str, integer_ids: bool) -> Result<Network> {
    // a single-token line declares a node without adding an edge
    let mut raw: Vec<(&str, Option<&str>)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [a] => raw.push((a, None)),
            [a, b] if a == b => {
                return Err(Error::SelfLoop {
                    line: lineno + 1,
                    node: a.to_string(),
                })
            }
            [a, b] => raw.push((a, Some(b))),
            _ => {
                return Err(Error::MalformedLine {
                    line: lineno + 1,
                    found: toks.len(),
                })
            }
        }
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }

    let all_numeric = integer_ids
        && raw
            .iter()
            .all(|(a, b)| a.parse::<u64>().is_ok() && b.is_none_or(|b| b.parse::<u64>().is_ok()));

    let (labels, edges): (Vec<String>, Vec<(usize, usize)>) = if all_numeric {
        let value = |t: &str| t.parse::<u64>().unwrap();
        let mut ids: Vec<u64> = raw.iter().flat_map(|&(a, b)| std::iter::once(a).chain(b)).map(value).collect();
        ids.sort_unstable();
        ids.dedup();
        let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = raw
            .iter()
            .filter_map(|&(a, b)| b.map(|b| (index[&value(a)], index[&value(b)])))
            .collect();
        (ids.iter().map(|v| v.to_string()).collect(), edges)
    } else {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::with_capacity(raw.len());
        for &(a, b) in &raw {
            let mut ends = [0usize; 2];
            for (slot, tok) in ends.iter_mut().zip(std::iter::once(a).chain(b)) {
                *slot = *index.entry(tok).or_insert_with(|| {
                    labels.push(tok.to_string());
                    labels.len() - 1
                });
            }
            if b.is_some() {
                edges.push((ends[0], ends[1]));
            }
        }
        (labels, edges)
    };
    Network::from_edges(labels.len(), edges)?.with_labels(labels)
}

/// All-pairs shortest-path lengths (hop counts) of a connected network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicMatrix {
    n: usize,
    data: Vec<u32>,
}

impl GeodesicMatrix {
    /// Wraps a row-major matrix; checks shape, symmetry and the zero diagonal.
    pub fn from_rows(n: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        for i in 0..n {
            if data[i * n + i] != 0 {
                return Err(Error::InvalidParameter(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::InvalidParameter(format!("asymmetric at ({i}, {j})")));
                }
                if data[i * n + j] == 0 {
                    return Err(Error::InvalidParameter(format!("zero off-diagonal at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn max(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// Entries as `f64`, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|&d| d as f64).collect()
    }
}

fn bfs(net: &Network, src: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) -> usize {
    dist.fill(u32::MAX);
    dist[src] = 0;
    queue.clear();
    queue.push_back(src);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &v in net.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = du + 1;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached
}

/// Breadth-first search from every node. Fails with `Disconnected` if any
/// pair is unreachable.
pub fn geodesic_distances(net: &Network) -> Result<GeodesicMatrix> {
    let n = net.n();
    let rows: Vec<Result<Vec<u32>>> = (0..n)
        .into_par_iter()
        .map_init(VecDeque::new, |queue, src| {
            let mut row = vec![0u32; n];
            let reached = bfs(net, src, &mut row, queue);
            if reached < n {
                Err(Error::Disconnected { reached, n })
            } else {
                Ok(row)
            }
        })
        .collect();
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        data.extend(row?);
    }
    Ok(GeodesicMatrix { n, data })
}

/// True when a BFS from node 0 reaches every node. A single node counts as
/// connected.
pub fn is_connected(net: &Network) -> bool {
    let n = net.n();
    if n <= 1 {
        return true;
    }
    let mut dist = vec![0u32; n];
    bfs(net, 0, &mut dist, &mut VecDeque::new()) == n
}

/// Density, mean degree and global transitivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkMeasures {
    pub density: f64,
    pub avg_degree: f64,
    pub transitivity: f64,
}

/// Triangle count via sorted-list intersection over edges `i < j < k`.
pub fn triangle_count(net: &Network) -> usize {
    let mut count = 0;
    for (i, j) in net.edges() {
        let (a, b) = (net.neighbors(i), net.neighbors(j));
        let (mut p, mut q) = (0, 0);
        while p < a.len() && q < b.len() {
            match a[p].cmp(&b[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    if a[p] > j {
                        count += 1;
                    }
                    p += 1;
                    q += 1;
                }
            }
        }
    }
    count
}

pub fn network_measures(net: &Network) -> Result<NetworkMeasures> {
    let n = net.n();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let density = net.density();
    let avg_degree = (n as f64 - 1.0) * density;
    let two_paths: usize = (0..n).map(|i| {
        let d = net.degree(i);
        d * d.saturating_sub(1) / 2
    }).sum();
    let transitivity = if two_paths == 0 {
        0.0
    } else {
        3.0 * triangle_count(net) as f64 / two_paths as f64
    };
    Ok(NetworkMeasures {
        density,
        avg_degree,
        transitivity,
    })
}
