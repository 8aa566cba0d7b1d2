//! Node centralities and degree-degree correlation statistics.
//!
//! Betweenness uses Brandes' accumulation over BFS shortest-path DAGs,
//! counting unordered source-destination pairs with endpoints excluded.
//! Eigenvector centrality is plain power iteration, max-normalized so the
//! most central node scores exactly 1.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Per-node centralities plus the global degree assortativity.
#[derive(Debug, Clone)]
pub struct CentralityBundle {
    /// Raw betweenness: shortest-path pair counts (unordered pairs).
    pub bc_raw: Vec<f64>,
    /// Betweenness normalized by `(N-1)(N-2)/2`.
    pub bc: Vec<f64>,
    /// Closeness `(N-1) / sum of distances`.
    pub cc: Vec<f64>,
    /// Eigenvector centrality, max-normalized.
    pub ec: Vec<f64>,
    /// Principal eigenvalue estimate from the power iteration.
    pub ec_eigenvalue: f64,
    /// Degree assortativity (edge-Pearson form).
    pub assortativity: f64,
}

impl CentralityBundle {
    /// Computes every centrality the strategies and metrics need.
    pub fn compute(g: &Graph) -> Result<Self> {
        let (bc_raw, bc) = betweenness(g)?;
        let cc = closeness(g)?;
        let (ec, ec_eigenvalue) = eigenvector_centrality(g, 1e-10, 10_000)?;
        let assortativity = assortativity(g)?;
        Ok(CentralityBundle {
            bc_raw,
            bc,
            cc,
            ec,
            ec_eigenvalue,
            assortativity,
        })
    }

    pub fn bc_max(&self) -> f64 {
        self.bc.iter().copied().fold(0.0, f64::max)
    }

    /// Index of the node with maximum raw betweenness (lowest index on ties).
    pub fn bc_argmax(&self) -> usize {
        let mut best = 0usize;
        for (i, &b) in self.bc_raw.iter().enumerate() {
            if b > self.bc_raw[best] {
                best = i;
            }
        }
        best
    }
}

/// Brandes betweenness for connected undirected unweighted graphs.
///
/// Returns `(raw, normalized)`: raw counts unordered pairs, normalized
/// divides by `(N-1)(N-2)/2`.
pub fn betweenness(g: &Graph) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::Degenerate("betweenness needs N >= 3".into()));
    }
    if !g.is_connected() {
        return Err(Error::Degenerate("betweenness needs a connected graph".into()));
    }
    let mut acc = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut sigma = vec![0.0f64; n];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    let mut delta = vec![0.0f64; n];

    for s in 0..n {
        for v in 0..n {
            dist[v] = -1;
            sigma[v] = 0.0;
            pred[v].clear();
            delta[v] = 0.0;
        }
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for w in g.neighbors(u) {
                if dist[w] < 0 {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[u] + 1 {
                    sigma[w] += sigma[u];
                    pred[w].push(u);
                }
            }
        }
        for &w in order.iter().rev() {
            for &u in &pred[w] {
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                acc[w] += delta[w];
            }
        }
    }
    // Each unordered pair was accumulated from both endpoints.
    let raw: Vec<f64> = acc.iter().map(|b| b / 2.0).collect();
    let norm_div = (n - 1) as f64 * (n - 2) as f64 / 2.0;
    let norm: Vec<f64> = raw.iter().map(|b| b / norm_div).collect();
    Ok((raw, norm))
}

/// Closeness `(N-1) / sum_{v != u} d(v, u)` for connected graphs.
pub fn closeness(g: &Graph) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Degenerate("closeness needs N >= 2".into()));
    }
    let mut out = Vec::with_capacity(n);
    for u in 0..n {
        let dist = g.bfs_distances(u);
        let mut sum = 0u64;
        for (v, &d) in dist.iter().enumerate() {
            if v == u {
                continue;
            }
            if d == usize::MAX {
                return Err(Error::Degenerate("closeness needs a connected graph".into()));
            }
            sum += d as u64;
        }
        out.push((n - 1) as f64 / sum as f64);
    }
    Ok(out)
}

/// Power iteration for the principal adjacency eigenvector.
///
/// Starts from a uniform positive vector, max-normalizes, and stops when the
/// residual `max_i |(A x)_i - kappa x_i|` drops to `tol`. `kappa` is the
/// Rayleigh quotient of the current iterate.
pub fn eigenvector_centrality(g: &Graph, tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Degenerate("empty graph".into()));
    }
    if !g.is_connected() {
        return Err(Error::Degenerate(
            "eigenvector centrality needs a connected graph".into(),
        ));
    }
    let mut x = vec![1.0f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let mut ax = vec![0.0f64; n];
        for u in 0..n {
            for v in g.neighbors(u) {
                ax[u] += x[v];
            }
        }
        let xx: f64 = x.iter().map(|a| a * a).sum();
        let xy: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let kappa = xy / xx;
        residual = x
            .iter()
            .zip(&ax)
            .map(|(a, b)| (b - kappa * a).abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            return Ok((x, kappa));
        }
        // Iterate A + I rather than A: same eigenvectors, but the shift keeps
        // bipartite graphs (where -kappa is also an eigenvalue) from cycling.
        let mut y: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a + b).collect();
        let ymax = y.iter().copied().fold(0.0f64, f64::max);
        if ymax <= 0.0 {
            return Err(Error::Degenerate("adjacency iteration collapsed to zero".into()));
        }
        for v in &mut y {
            *v /= ymax;
        }
        x = y;
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Moments of the remaining-degree distribution over the `2|E|` edge
/// endpoints, the basis for both the global assortativity and the per-pair
/// correlation scores.
#[derive(Debug, Clone, Copy)]
pub struct ExcessMoments {
    pub mean: f64,
    pub variance: f64,
}

pub fn excess_moments(g: &Graph) -> Result<ExcessMoments> {
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("excess moments need |E| >= 1".into()));
    }
    let ends = 2.0 * g.edge_count() as f64;
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for (i, j) in g.edges() {
        for k in [g.degree(i), g.degree(j)] {
            let r = (k - 1) as f64;
            sum += r;
            sum2 += r * r;
        }
    }
    let mean = sum / ends;
    Ok(ExcessMoments {
        mean,
        variance: sum2 / ends - mean * mean,
    })
}

/// Degree assortativity as the Pearson correlation of remaining degrees over
/// the `2|E|` ordered edge endpoints.
pub fn assortativity(g: &Graph) -> Result<f64> {
    if g.edge_count() < 2 {
        return Err(Error::Degenerate("assortativity needs |E| >= 2".into()));
    }
    let m = excess_moments(g)?;
    if m.variance <= 0.0 {
        return Err(Error::Degenerate(
            "assortativity undefined: excess degree is constant".into(),
        ));
    }
    let mut cross = 0.0;
    for (i, j) in g.edges() {
        let a = (g.degree(i) - 1) as f64 - m.mean;
        let b = (g.degree(j) - 1) as f64 - m.mean;
        cross += 2.0 * a * b; // both endpoint orders
    }
    Ok(cross / (2.0 * g.edge_count() as f64) / m.variance)
}

/// Precomputed pair-correlation context for one graph snapshot.
#[derive(Debug, Clone, Copy)]
pub struct PairScores {
    moments: ExcessMoments,
}

impl PairScores {
    pub fn new(g: &Graph) -> Result<Self> {
        let moments = excess_moments(g)?;
        if moments.variance <= 0.0 {
            return Err(Error::Degenerate(
                "pair correlation undefined: excess degree is constant".into(),
            ));
        }
        Ok(PairScores { moments })
    }

    /// Unclamped per-pair contribution to the edge-Pearson assortativity;
    /// averaging this over all `2|E|` ordered endpoints gives the global
    /// coefficient.
    pub fn raw(&self, deg_i: usize, deg_j: usize) -> f64 {
        let a = (deg_i as f64 - 1.0) - self.moments.mean;
        let b = (deg_j as f64 - 1.0) - self.moments.mean;
        a * b / self.moments.variance
    }

    /// Pair score clamped to `[-1, 1]`; positive when both remaining degrees
    /// sit on the same side of the excess-degree mean.
    pub fn clamped(&self, deg_i: usize, deg_j: usize) -> f64 {
        self.raw(deg_i, deg_j).clamp(-1.0, 1.0)
    }

    /// Clamped score rescaled from `[-1, 1]` to `[0, 2]`.
    pub fn scaled(&self, deg_i: usize, deg_j: usize) -> f64 {
        scale_correlation(self.clamped(deg_i, deg_j))
    }
}

/// Pairwise degree-degree correlation for nodes `i`, `j` of `g`.
pub fn pair_correlation(g: &Graph, i: usize, j: usize) -> Result<f64> {
    let scores = PairScores::new(g)?;
    Ok(scores.clamped(g.degree(i), g.degree(j)))
}

/// Rescales a correlation from `[-1, 1]` to `[0, 2]`.
pub fn scale_correlation(x: f64) -> f64 {
    assert!((-1.0..=1.0).contains(&x), "correlation {x} out of [-1, 1]");
    x + 1.0
}
