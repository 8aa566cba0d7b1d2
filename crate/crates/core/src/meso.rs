//! Meso-scale structure: k-core decompositions, rich-club coefficients and
//! core-periphery scoring.

use std::collections::BTreeMap;

use crate::centrality::closeness;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Which decomposition produced a [`CorePartition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreBasis {
    Degree,
    Closeness,
}

/// Per-node core indices from a degree- or closeness-based decomposition.
#[derive(Debug, Clone)]
pub struct CorePartition {
    pub core_index: Vec<usize>,
    pub main_core_index: usize,
    pub basis: CoreBasis,
    /// Closeness-interval width; zero when all closeness values coincide.
    pub interval: Option<f64>,
}

impl CorePartition {
    /// Nodes carrying the maximum assigned core index.
    pub fn innermost(&self) -> Vec<usize> {
        self.core_index
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == self.main_core_index)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn mean_core_index(&self) -> f64 {
        if self.core_index.is_empty() {
            return 0.0;
        }
        self.core_index.iter().sum::<usize>() as f64 / self.core_index.len() as f64
    }
}

/// Standard iterative-pruning core numbers.
pub fn kcore_degree(g: &Graph) -> Result<CorePartition> {
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("k-core needs |E| >= 1".into()));
    }
    let n = g.node_count();
    let mut degree = g.degree_sequence();
    let max_deg = degree.iter().copied().max().unwrap_or(0);

    // Bucket peel: process nodes in nondecreasing current-degree order.
    let mut bins = vec![0usize; max_deg + 2];
    for &d in &degree {
        bins[d] += 1;
    }
    let mut start = 0usize;
    for b in bins.iter_mut() {
        let width = *b;
        *b = start;
        start += width;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for v in 0..n {
        pos[v] = bins[degree[v]];
        vert[pos[v]] = v;
        bins[degree[v]] += 1;
    }
    for d in (1..bins.len()).rev() {
        bins[d] = bins[d - 1];
    }
    bins[0] = 0;

    let mut core = vec![0usize; n];
    for idx in 0..n {
        let v = vert[idx];
        core[v] = degree[v];
        for u in g.neighbors(v) {
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = pos[u];
                let pw = bins[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    pos[w] = pu;
                    vert[pu] = w;
                    vert[pw] = u;
                }
                bins[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    let main = core.iter().copied().max().unwrap_or(0);
    Ok(CorePartition {
        core_index: core,
        main_core_index: main,
        basis: CoreBasis::Degree,
        interval: None,
    })
}

/// Closeness-interval cores: the number of intervals equals the main core
/// index of the degree decomposition, and a node's index is the interval its
/// closeness falls into. Nodes at the exact maximum land in the top index,
/// which defines the innermost core. When every closeness coincides the
/// partition collapses to a single all-innermost core.
pub fn kcore_closeness(g: &Graph) -> Result<CorePartition> {
    let cc = closeness(g)?;
    let num_core = kcore_degree(g)?.main_core_index;
    if num_core == 0 {
        return Err(Error::Degenerate("degree main core is empty".into()));
    }
    let min = cc.iter().copied().fold(f64::INFINITY, f64::min);
    let max = cc.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ci = (max - min) / num_core as f64;
    if ci <= 0.0 {
        return Ok(CorePartition {
            core_index: vec![0; g.node_count()],
            main_core_index: 0,
            basis: CoreBasis::Closeness,
            interval: Some(0.0),
        });
    }
    let core_index: Vec<usize> = cc
        .iter()
        .map(|&c| (((c - min) / ci).floor() as usize).min(num_core))
        .collect();
    let main = core_index.iter().copied().max().unwrap_or(0);
    Ok(CorePartition {
        core_index,
        main_core_index: main,
        basis: CoreBasis::Closeness,
        interval: Some(ci),
    })
}

/// Rich-club curve `phi(k)` over distinct degree thresholds, plus the
/// node-averaged scalar used for whole-graph comparisons.
#[derive(Debug, Clone)]
pub struct RichClubProfile {
    pub phi: BTreeMap<usize, f64>,
    pub rc_scalar: f64,
}

/// `phi(k) = 2 E_{>k} / (N_{>k} (N_{>k} - 1))` for every degree threshold
/// with at least two richer nodes. The scalar is
/// `(1/N) * sum_i k_i phi(k_i)` over nodes whose own-degree threshold is
/// defined, one number per graph.
pub fn rich_club_profile(g: &Graph) -> Result<RichClubProfile> {
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("rich club needs |E| >= 1".into()));
    }
    let n = g.node_count();
    let degrees = g.degree_sequence();
    let max_deg = degrees.iter().copied().max().unwrap();

    // Suffix counts: nodes of degree > k, and edges whose both ends have
    // degree > k (an edge survives threshold k iff its smaller end does).
    let mut node_hist = vec![0usize; max_deg + 2];
    for &d in &degrees {
        node_hist[d] += 1;
    }
    let mut edge_hist = vec![0usize; max_deg + 2];
    for (i, j) in g.edges() {
        edge_hist[degrees[i].min(degrees[j])] += 1;
    }
    let mut nodes_above = vec![0usize; max_deg + 2];
    let mut edges_above = vec![0usize; max_deg + 2];
    for k in (0..=max_deg).rev() {
        nodes_above[k] = nodes_above[k + 1] + node_hist[k + 1];
        edges_above[k] = edges_above[k + 1] + edge_hist[k + 1];
    }

    let mut phi = BTreeMap::new();
    for k in 0..=max_deg {
        let n_rich = nodes_above[k];
        if n_rich < 2 {
            continue;
        }
        phi.insert(
            k,
            2.0 * edges_above[k] as f64 / (n_rich * (n_rich - 1)) as f64,
        );
    }
    let mut rc = 0.0;
    for &d in &degrees {
        if let Some(&p) = phi.get(&d) {
            rc += d as f64 * p;
        }
    }
    Ok(RichClubProfile {
        phi,
        rc_scalar: rc / n as f64,
    })
}

/// Pearson correlation over unordered node pairs between the adjacency
/// indicator and the ideal core-periphery pattern `[i in core or j in core]`.
pub fn pattern_correlation(g: &Graph, core: &[bool]) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Degenerate("pattern correlation needs N >= 2".into()));
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let core_count = core.iter().filter(|&&c| c).count();
    let outside = n - core_count;
    let ones_pattern = pairs - (outside * outside.saturating_sub(1) / 2) as f64;
    let mean_a = g.edge_count() as f64 / pairs;
    let mean_p = ones_pattern / pairs;
    let var_a = mean_a * (1.0 - mean_a);
    let var_p = mean_p * (1.0 - mean_p);
    if var_a <= 0.0 || var_p <= 0.0 {
        return Err(Error::Degenerate(
            "pattern correlation undefined: constant indicator".into(),
        ));
    }
    let both = g
        .edges()
        .iter()
        .filter(|&&(i, j)| core[i] || core[j])
        .count() as f64;
    let cov = both / pairs - mean_a * mean_p;
    Ok(cov / (var_a * var_p).sqrt())
}

/// Core-periphery coefficient: pattern correlation against the innermost
/// closeness core.
pub fn core_periphery_coefficient(g: &Graph) -> Result<f64> {
    let partition = kcore_closeness(g)?;
    let innermost = partition.innermost();
    let mut core = vec![false; g.node_count()];
    for i in innermost {
        core[i] = true;
    }
    pattern_correlation(g, &core)
}
