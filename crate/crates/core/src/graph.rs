//! Undirected simple graph, scale-free generation and edge-list ingestion.
//!
//! Invariants maintained by every constructor and mutator:
//! - no self-loops, no duplicate edges
//! - neighbor sets are symmetric
//! - `sum of degrees == 2 * edge_count`

use std::collections::BTreeSet;
use std::collections::{HashMap, VecDeque};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Undirected simple graph over dense node indices `0..n`.
///
/// Neighbor sets are ordered so that every iteration over the graph is
/// deterministic for a given edge set.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    edge_count: usize,
    labels: Vec<String>,
}

impl Graph {
    /// Graph with `n` nodes and no edges. Labels default to the indices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            edge_count: 0,
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); labels.len()],
            edge_count: 0,
            labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&j)
    }

    /// Inserts the undirected edge `{i, j}`. Returns false if it already
    /// exists. Self-loops are rejected.
    pub fn add_edge(&mut self, i: usize, j: usize) -> bool {
        assert_ne!(i, j, "self-loop {i}");
        if self.adj[i].contains(&j) {
            return false;
        }
        self.adj[i].insert(j);
        self.adj[j].insert(i);
        self.edge_count += 1;
        true
    }

    /// Removes the undirected edge `{i, j}`. Returns false if absent.
    pub fn remove_edge(&mut self, i: usize, j: usize) -> bool {
        if !self.adj[i].remove(&j) {
            return false;
        }
        self.adj[j].remove(&i);
        self.edge_count -= 1;
        true
    }

    /// All edges as `(i, j)` pairs with `i < j`, in index order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs.iter() {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adj.iter().map(|n| n.len()).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adj.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / self.adj.len() as f64
    }

    /// Connectivity by full BFS traversal. The empty graph is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0usize);
        let mut count = 1usize;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// BFS distances from `src`; unreachable nodes are `usize::MAX`.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let n = self.adj.len();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Average shortest-path length over unordered node pairs.
    pub fn average_path_length(&self) -> Result<f64> {
        let n = self.adj.len();
        if n < 2 {
            return Err(Error::Degenerate("average path length needs N >= 2".into()));
        }
        let mut total = 0u64;
        for s in 0..n {
            let dist = self.bfs_distances(s);
            for (v, &d) in dist.iter().enumerate() {
                if v == s {
                    continue;
                }
                if d == usize::MAX {
                    return Err(Error::Degenerate("graph is disconnected".into()));
                }
                total += d as u64;
            }
        }
        Ok(total as f64 / (n * (n - 1)) as f64)
    }

    /// Restrict the graph to its largest connected component, remapping node
    /// indices densely while keeping labels. Returns the kept node count.
    pub fn retain_largest_component(&mut self) -> usize {
        let n = self.adj.len();
        let mut comp = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0usize;
            let mut queue = VecDeque::new();
            comp[start] = id;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        let best = (0..sizes.len()).max_by_key(|&i| sizes[i]).unwrap_or(0);
        if sizes.get(best).copied().unwrap_or(0) == n {
            return n;
        }
        let mut remap = vec![usize::MAX; n];
        let mut labels = Vec::new();
        for i in 0..n {
            if comp[i] == best {
                remap[i] = labels.len();
                labels.push(self.labels[i].clone());
            }
        }
        let mut adj = vec![BTreeSet::new(); labels.len()];
        let mut edges = 0usize;
        for i in 0..n {
            if remap[i] == usize::MAX {
                continue;
            }
            for &j in &self.adj[i] {
                if remap[j] != usize::MAX {
                    adj[remap[i]].insert(remap[j]);
                    if i < j {
                        edges += 1;
                    }
                }
            }
        }
        self.adj = adj;
        self.labels = labels;
        self.edge_count = edges;
        self.adj.len()
    }

    /// Canonical edge-list text: one `u v` line per edge with endpoints
    /// sorted lexicographically within the line, lines sorted, trailing
    /// newline. Loading the output reproduces the graph.
    pub fn canonical_edge_list(&self) -> String {
        let mut lines: Vec<String> = self
            .edges()
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (self.label(i), self.label(j));
                if a <= b {
                    format!("{a} {b}")
                } else {
                    format!("{b} {a}")
                }
            })
            .collect();
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.canonical_edge_list()).map_err(|e| Error::io(path, e))
    }
}

/// Barabasi-Albert scale-free graph: complete seed on `m0` nodes, then each
/// arriving node attaches `m` distinct links with probability proportional
/// to current degree. Deterministic for a given seed.
pub fn generate_ba(n: usize, m0: usize, m: usize, seed: u64) -> Result<Graph> {
    if m < 1 || m > m0 || n <= m0 {
        return Err(Error::Config(format!(
            "BA sizes must satisfy N > m0 >= m >= 1, got N={n}, m0={m0}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    // One entry per edge endpoint; uniform draws implement preferential
    // attachment.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * (m0 * (m0 - 1) / 2 + (n - m0) * m));
    for i in 0..m0 {
        for j in (i + 1)..m0 {
            g.add_edge(i, j);
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    for v in m0..n {
        let mut chosen = BTreeSet::new();
        while chosen.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            chosen.insert(t);
        }
        for &t in &chosen {
            g.add_edge(v, t);
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    Ok(g)
}

/// What the edge-list loader saw and dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadReport {
    pub nodes_in_file: usize,
    pub distinct_edges: usize,
    pub duplicate_lines: usize,
    pub self_loops_skipped: usize,
    pub layers_seen: usize,
    pub component_nodes: usize,
    pub component_edges: usize,
}

/// Parses a whitespace-separated edge list: `u v` or `layer u v` per line,
/// `#` comment lines ignored. Node ids are arbitrary tokens remapped to dense
/// indices. With `aggregate_layers`, 3-token multiplex lines collapse to one
/// edge per distinct `{u, v}`. Keeps the largest connected component.
pub fn load_edge_list(path: &Path, aggregate_layers: bool) -> Result<(Graph, LoadReport)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, aggregate_layers).map_err(|e| match e {
        Error::Data(msg) => Error::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Loader core, separated from file IO.
pub fn parse_edge_list(text: &str, aggregate_layers: bool) -> Result<(Graph, LoadReport)> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut layers: BTreeSet<String> = BTreeSet::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut duplicate_lines = 0usize;
    let mut self_loops = 0usize;

    let intern = |tok: &str, labels: &mut Vec<String>, ids: &mut HashMap<String, usize>| {
        *ids.entry(tok.to_string()).or_insert_with(|| {
            labels.push(tok.to_string());
            labels.len() - 1
        })
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (u, v) = match tokens.len() {
            2 => (tokens[0], tokens[1]),
            3 => {
                layers.insert(tokens[0].to_string());
                if !aggregate_layers {
                    return Err(Error::Data(format!(
                        "line {}: 3-token multiplex line but aggregate_layers is off",
                        lineno + 1
                    )));
                }
                (tokens[1], tokens[2])
            }
            k => {
                return Err(Error::Data(format!(
                    "line {}: expected 2 or 3 tokens, found {k}",
                    lineno + 1
                )))
            }
        };
        if u == v {
            self_loops += 1;
            continue;
        }
        let a = intern(u, &mut labels, &mut ids);
        let b = intern(v, &mut labels, &mut ids);
        let key = (a.min(b), a.max(b));
        if !edges.insert(key) {
            duplicate_lines += 1;
        }
    }

    if edges.is_empty() {
        return Err(Error::Data("no edges after parsing".into()));
    }

    let mut g = Graph::with_labels(labels);
    for &(a, b) in &edges {
        g.add_edge(a, b);
    }
    let nodes_in_file = g.node_count();
    let distinct_edges = g.edge_count();
    let kept = g.retain_largest_component();
    let report = LoadReport {
        nodes_in_file,
        distinct_edges,
        duplicate_lines,
        self_loops_skipped: self_loops,
        layers_seen: layers.len(),
        component_nodes: kept,
        component_edges: g.edge_count(),
    };
    Ok((g, report))
}

/// Degree distribution `p_k`, excess degree distribution `q_k`, and moments.
#[derive(Debug, Clone)]
pub struct DegreeDistribution {
    /// `p[k]` = probability a random node has degree `k`.
    pub p: Vec<f64>,
    /// `q[k]` = probability the far end of a random edge has remaining degree `k`.
    pub q: Vec<f64>,
    pub mean_degree: f64,
    pub mean_excess: f64,
    pub variance_excess: f64,
}

/// `q_k = (k+1) p_{k+1} / <k>`, the distribution of remaining degree at the
/// end of a randomly chosen edge.
pub fn degree_distribution(g: &Graph) -> Result<DegreeDistribution> {
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("degree distribution needs |E| >= 1".into()));
    }
    let n = g.node_count();
    let kmax = (0..n).map(|i| g.degree(i)).max().unwrap_or(0);
    let mut p = vec![0.0; kmax + 1];
    for i in 0..n {
        p[g.degree(i)] += 1.0 / n as f64;
    }
    let mean_degree: f64 = p.iter().enumerate().map(|(k, &pk)| k as f64 * pk).sum();
    let mut q = vec![0.0; kmax.max(1)];
    for k in 0..kmax {
        q[k] = (k + 1) as f64 * p[k + 1] / mean_degree;
    }
    let mean_excess: f64 = q.iter().enumerate().map(|(k, &qk)| k as f64 * qk).sum();
    let second: f64 = q
        .iter()
        .enumerate()
        .map(|(k, &qk)| (k as f64) * (k as f64) * qk)
        .sum();
    Ok(DegreeDistribution {
        p,
        q,
        mean_degree,
        mean_excess,
        variance_excess: second - mean_excess * mean_excess,
    })
}

/// Least-squares slope of `log p(k)` against `log k` over `k in [k_lo, k_hi]`
/// on a log-binned histogram: geometric bins, density averaged per integer
/// degree inside each bin. Used to check power-law tails.
pub fn log_log_tail_slope(dist: &DegreeDistribution, k_lo: usize, k_hi: usize) -> Result<f64> {
    let k_hi = k_hi.min(dist.p.len().saturating_sub(1));
    if k_lo < 1 || k_hi <= k_lo {
        return Err(Error::Config(format!("bad tail fit range [{k_lo}, {k_hi}]")));
    }
    const GROWTH: f64 = 1.6;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut lo = k_lo as f64;
    while lo <= k_hi as f64 {
        let hi = (lo * GROWTH).min(k_hi as f64 + 1.0);
        let mut mass = 0.0;
        let mut width = 0usize;
        let mut log_center = 0.0;
        let mut support = 0usize;
        let mut k = lo.ceil() as usize;
        while (k as f64) < hi && k <= k_hi {
            width += 1;
            if dist.p[k] > 0.0 {
                mass += dist.p[k];
                log_center += (k as f64).ln();
                support += 1;
            }
            k += 1;
        }
        if support > 0 {
            // Average density per integer degree in the bin, centered at the
            // geometric mean of the occupied degrees.
            xs.push(log_center / support as f64);
            ys.push((mass / width as f64).ln());
        }
        lo = hi;
    }
    if xs.len() < 3 {
        return Err(Error::Degenerate(format!(
            "tail fit needs >= 3 occupied bins in [{k_lo}, {k_hi}]"
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub(crate) fn star(leaves: usize) -> Graph {
        let mut g = Graph::new(leaves + 1);
        for l in 1..=leaves {
            g.add_edge(0, l);
        }
        g
    }

    #[test]
    fn handshake_and_symmetry() {
        let g = generate_ba(200, 5, 2, 7).unwrap();
        let degsum: usize = g.degree_sequence().iter().sum();
        assert_eq!(degsum, 2 * g.edge_count());
        for i in 0..g.node_count() {
            for j in g.neighbors(i) {
                assert_ne!(i, j);
                assert!(g.has_edge(j, i));
            }
        }
    }

    #[test]
    fn ba_edge_count_small() {
        // 3 seed edges from the K3 seed plus one per arriving node.
        let g = generate_ba(6, 3, 1, 42).unwrap();
        assert_eq!(g.edge_count(), 3 + 3);
        assert!(g.is_connected());
    }

    #[test]
    fn ba_mean_degree_near_2m() {
        let g = generate_ba(2000, 5, 2, 1).unwrap();
        let k = g.mean_degree();
        assert!((3.8..=4.2).contains(&k), "mean degree {k}");
    }

    #[test]
    fn ba_rejects_bad_sizes() {
        assert!(generate_ba(5, 5, 2, 0).is_err());
        assert!(generate_ba(10, 3, 4, 0).is_err());
        assert!(generate_ba(10, 3, 0, 0).is_err());
    }

    #[test]
    fn ba_deterministic_per_seed() {
        let a = generate_ba(300, 5, 2, 99).unwrap();
        let b = generate_ba(300, 5, 2, 99).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = generate_ba(300, 5, 2, 100).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn ba_tail_slope_in_band() {
        // BA theory gives slope -3; small samples scatter around it.
        let mut slopes = Vec::new();
        for seed in 0..10 {
            let g = generate_ba(500, 5, 2, seed).unwrap();
            let d = degree_distribution(&g).unwrap();
            let kmax = d.p.len() - 1;
            slopes.push(log_log_tail_slope(&d, 4, kmax / 2).unwrap());
        }
        let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
        assert!((-3.5..=-2.2).contains(&mean), "mean tail slope {mean}");
    }

    #[test]
    fn load_dedups_undirected_duplicates() {
        let (g, rep) = parse_edge_list("a b\nb a\na b\n", false).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(rep.duplicate_lines, 2);
    }

    #[test]
    fn load_aggregates_layers() {
        let text = "1 a b\n2 a b\n2 b c\n";
        let (g, rep) = parse_edge_list(text, true).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(rep.layers_seen, 2);
        assert!(parse_edge_list(text, false).is_err());
    }

    #[test]
    fn load_rejects_malformed() {
        assert!(parse_edge_list("a b c d\n", true).is_err());
        assert!(parse_edge_list("# only a comment\n", true).is_err());
        assert!(parse_edge_list("a\n", true).is_err());
    }

    #[test]
    fn load_keeps_largest_component() {
        let (g, rep) = parse_edge_list("a b\nb c\nx y\n", false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(g.is_connected());
        assert_eq!(rep.nodes_in_file, 5);
        assert_eq!(rep.component_nodes, 3);
    }

    #[test]
    fn canonical_round_trip() {
        let g = generate_ba(60, 4, 2, 5).unwrap();
        let text = g.canonical_edge_list();
        let (h, _) = parse_edge_list(&text, false).unwrap();
        assert_eq!(g.node_count(), h.node_count());
        assert_eq!(g.edge_count(), h.edge_count());
        let mut a = g.degree_sequence();
        let mut b = h.degree_sequence();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        assert_eq!(h.canonical_edge_list(), text);
    }

    #[test]
    fn copy_is_independent() {
        let g = cycle(5);
        let mut h = g.clone();
        h.remove_edge(0, 1);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(h.edge_count(), 4);
    }

    #[test]
    fn connectivity_cases() {
        let mut two_triangles = Graph::new(6);
        for (a, b) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            two_triangles.add_edge(a, b);
        }
        assert!(!two_triangles.is_connected());
        let mut path = Graph::new(5);
        for i in 0..4 {
            path.add_edge(i, i + 1);
        }
        assert!(path.is_connected());
    }

    #[test]
    fn degree_distribution_cycle_and_star() {
        let d = degree_distribution(&cycle(4)).unwrap();
        assert!((d.p[2] - 1.0).abs() < 1e-12);
        assert!((d.q[1] - 1.0).abs() < 1e-12);
        assert!((d.mean_degree - 2.0).abs() < 1e-12);

        let d = degree_distribution(&star(4)).unwrap();
        assert!((d.p[1] - 0.8).abs() < 1e-12);
        assert!((d.p[4] - 0.2).abs() < 1e-12);
        assert!((d.mean_degree - 1.6).abs() < 1e-12);
    }

    #[test]
    fn excess_matches_edge_end_sampling() {
        let g = generate_ba(500, 5, 2, 3).unwrap();
        let d = degree_distribution(&g).unwrap();
        assert!((d.q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((d.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // Direct enumeration of edge ends.
        let mut counts = vec![0usize; d.q.len()];
        for (i, j) in g.edges() {
            counts[g.degree(i) - 1] += 1;
            counts[g.degree(j) - 1] += 1;
        }
        let total = 2.0 * g.edge_count() as f64;
        for (k, &c) in counts.iter().enumerate() {
            assert!(
                (d.q[k] - c as f64 / total).abs() < 1e-12,
                "q[{k}] analytic {} vs sampled {}",
                d.q[k],
                c as f64 / total
            );
        }
        assert!(d.variance_excess >= 0.0);
    }
}
