//! The four link-rewiring strategies: DPA, DEC, DKBC and CKDBC.
//!
//! Every move removes one existing edge and re-attaches the kept end to a
//! strategy-chosen node, so |E| is conserved exactly. Moves that would break
//! simplicity or connectivity are rolled back and recorded. Scores
//! (betweenness, eigenvector centrality, cores, excess-degree moments) are
//! refreshed after every accepted move by default; a batch size > 1 trades
//! exactness for speed on large graphs.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{betweenness, eigenvector_centrality, PairScores};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::meso::{kcore_closeness, kcore_degree};

/// The rewiring strategy families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Disassortativity + preferential attachment.
    Dpa,
    /// Disassortativity + eigenvector centrality.
    Dec,
    /// Degree-based k-core + betweenness.
    Dkbc,
    /// Closeness-based k-core + disassortativity + betweenness.
    Ckdbc,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Dpa, Strategy::Dec, Strategy::Dkbc, Strategy::Ckdbc];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Dpa => "dpa",
            Strategy::Dec => "dec",
            Strategy::Dkbc => "dkbc",
            Strategy::Ckdbc => "ckdbc",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dpa" => Ok(Strategy::Dpa),
            "dec" => Ok(Strategy::Dec),
            "dkbc" => Ok(Strategy::Dkbc),
            "ckdbc" => Ok(Strategy::Ckdbc),
            other => Err(Error::Config(format!("unknown strategy '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RewireConfig {
    pub strategy: Strategy,
    /// Fraction of links to rewire, in [0, 1].
    pub r_f: f64,
    /// Random-trial budget per move.
    pub max_attempts: usize,
    pub seed: u64,
    /// Reject moves that disconnect the graph.
    pub require_connectivity: bool,
    /// Refresh scores after this many accepted moves (1 = every move).
    pub recompute_batch: usize,
}

impl RewireConfig {
    pub fn new(strategy: Strategy, r_f: f64, seed: u64) -> Self {
        RewireConfig {
            strategy,
            r_f,
            max_attempts: 50,
            seed,
            require_connectivity: true,
            recompute_batch: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r_f) {
            return Err(Error::Config(format!("r_f {} outside [0, 1]", self.r_f)));
        }
        if self.max_attempts == 0 {
            return Err(Error::Config("max_attempts must be >= 1".into()));
        }
        if self.recompute_batch == 0 {
            return Err(Error::Config("recompute_batch must be >= 1".into()));
        }
        Ok(())
    }
}

/// Why a random trial was rolled back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rejection {
    /// Removal condition failed (edge not assortative).
    RemovalCondition,
    /// No eligible attachment target (or all weights zero).
    NoCandidate,
    /// Sampled candidate failed the strategy's acceptance condition.
    CandidateCondition,
    /// Move would have disconnected the graph.
    Connectivity,
}

impl Rejection {
    pub fn name(&self) -> &'static str {
        match self {
            Rejection::RemovalCondition => "removal_condition",
            Rejection::NoCandidate => "no_candidate",
            Rejection::CandidateCondition => "candidate_condition",
            Rejection::Connectivity => "connectivity",
        }
    }
}

/// Bookkeeping for one rewiring run.
#[derive(Debug, Clone, Default)]
pub struct RewireReport {
    pub moves_target: usize,
    pub moves_accepted: usize,
    pub moves_attempted: usize,
    pub rejected: BTreeMap<Rejection, usize>,
    pub edges_before: usize,
    pub edges_after: usize,
}

impl RewireReport {
    fn reject(&mut self, why: Rejection) {
        *self.rejected.entry(why).or_insert(0) += 1;
    }

    pub fn rejected_count(&self, why: Rejection) -> usize {
        self.rejected.get(&why).copied().unwrap_or(0)
    }

    /// CSV row matching [`report_csv_header`].
    pub fn csv_row(&self, strategy: Strategy, r_f: f64, seed: u64) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            strategy.name(),
            r_f,
            seed,
            self.moves_target,
            self.moves_attempted,
            self.moves_accepted,
            self.rejected_count(Rejection::RemovalCondition),
            self.rejected_count(Rejection::NoCandidate),
            self.rejected_count(Rejection::CandidateCondition),
            self.rejected_count(Rejection::Connectivity),
            self.edges_after,
        )
    }
}

pub fn report_csv_header() -> &'static str {
    "strategy,r_f,seed,target,attempted,accepted,rejected_removal_condition,\
     rejected_no_candidate,rejected_candidate_condition,rejected_connectivity,edges"
}

/// Scores refreshed between moves; which fields are filled depends on the
/// strategy.
struct Scores {
    pair: PairScores,
    /// Normalized disassortativeness weight per node (DPA/DEC).
    zeta: Vec<f64>,
    /// Max-normalized eigenvector centrality (DEC).
    ec: Vec<f64>,
    /// Normalized betweenness (DKBC/CKDBC).
    bc: Vec<f64>,
    /// Degree-based core index (DKBC).
    core_degree: Vec<usize>,
    /// Innermost closeness core (CKDBC).
    innermost: Vec<usize>,
}

fn compute_scores(g: &Graph, strategy: Strategy) -> Result<Scores> {
    let pair = PairScores::new(g)?;
    let n = g.node_count();
    let mut scores = Scores {
        pair,
        zeta: Vec::new(),
        ec: Vec::new(),
        bc: Vec::new(),
        core_degree: Vec::new(),
        innermost: Vec::new(),
    };
    match strategy {
        Strategy::Dpa | Strategy::Dec => {
            let mut zeta = vec![0.0; n];
            for v in 0..n {
                let mut min_scaled = f64::INFINITY;
                let mut sum_scaled = 0.0;
                for u in g.neighbors(v) {
                    let s = pair.scaled(g.degree(v), g.degree(u));
                    min_scaled = min_scaled.min(s);
                    sum_scaled += s;
                }
                if sum_scaled > 0.0 && min_scaled.is_finite() {
                    zeta[v] = min_scaled / sum_scaled;
                }
            }
            scores.zeta = zeta;
            if strategy == Strategy::Dec {
                scores.ec = eigenvector_centrality(g, 1e-10, 10_000)?.0;
            }
        }
        Strategy::Dkbc => {
            scores.bc = betweenness(g)?.1;
            scores.core_degree = kcore_degree(g)?.core_index;
        }
        Strategy::Ckdbc => {
            scores.bc = betweenness(g)?.1;
            scores.innermost = kcore_closeness(g)?.innermost();
        }
    }
    Ok(scores)
}

/// Draws an index from `weights` proportionally; `None` when all mass is zero.
fn weighted_choice(rng: &mut ChaCha8Rng, weights: &[f64]) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mut ticket = rng.random_range(0.0..total);
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        if ticket < w {
            return Some(i);
        }
        ticket -= w;
    }
    weights.iter().rposition(|&w| w > 0.0)
}

struct Engine<'a> {
    g: &'a mut Graph,
    cfg: &'a RewireConfig,
    rng: ChaCha8Rng,
    scores: Scores,
    report: RewireReport,
}

impl<'a> Engine<'a> {
    /// Applies remove + add, rolling back if connectivity is required and
    /// lost. `i` keeps its link end in every strategy.
    fn commit(&mut self, i: usize, j: usize, v: usize) -> bool {
        self.g.remove_edge(i, j);
        self.g.add_edge(i, v);
        if self.cfg.require_connectivity && !self.g.is_connected() {
            self.g.remove_edge(i, v);
            self.g.add_edge(i, j);
            self.report.reject(Rejection::Connectivity);
            return false;
        }
        true
    }

    /// Random edge with random orientation; the first returned node keeps
    /// the link.
    fn random_oriented_edge(&mut self, edges: &[(usize, usize)]) -> (usize, usize) {
        let (a, b) = edges[self.rng.random_range(0..edges.len())];
        if self.rng.random_bool(0.5) {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// DPA / DEC: remove a random assortative edge, re-attach its kept end
    /// with weight `k_v * zeta_v` (DPA) or `(1 - ec_v) * zeta_v` (DEC).
    fn try_disassortative_move(&mut self) -> bool {
        let edges = self.g.edges();
        for _ in 0..self.cfg.max_attempts {
            self.report.moves_attempted += 1;
            let (i, j) = self.random_oriented_edge(&edges);
            let score = self
                .scores
                .pair
                .clamped(self.g.degree(i), self.g.degree(j));
            if score <= 0.0 {
                self.report.reject(Rejection::RemovalCondition);
                continue;
            }
            let n = self.g.node_count();
            let mut weights = vec![0.0; n];
            for v in 0..n {
                if v == i || self.g.has_edge(i, v) {
                    continue;
                }
                weights[v] = match self.cfg.strategy {
                    Strategy::Dpa => self.g.degree(v) as f64 * self.scores.zeta[v],
                    Strategy::Dec => (1.0 - self.scores.ec[v]).max(0.0) * self.scores.zeta[v],
                    _ => unreachable!(),
                };
            }
            let Some(v) = weighted_choice(&mut self.rng, &weights) else {
                self.report.reject(Rejection::NoCandidate);
                continue;
            };
            if self.commit(i, j, v) {
                return true;
            }
        }
        false
    }

    /// DKBC: remove one random edge, then repeatedly draw a uniform node and
    /// accept the first one in a deeper core with lower betweenness.
    fn try_dkbc_move(&mut self) -> bool {
        let edges = self.g.edges();
        let (i, j) = self.random_oriented_edge(&edges);
        self.g.remove_edge(i, j);
        let n = self.g.node_count();
        for _ in 0..self.cfg.max_attempts {
            self.report.moves_attempted += 1;
            let v = self.rng.random_range(0..n);
            let eligible = v != i
                && v != j
                && !self.g.has_edge(i, v)
                && self.scores.core_degree[v] > self.scores.core_degree[i]
                && self.scores.bc[v] < self.scores.bc[i];
            if !eligible {
                self.report.reject(Rejection::CandidateCondition);
                continue;
            }
            self.g.add_edge(i, v);
            if self.cfg.require_connectivity && !self.g.is_connected() {
                self.g.remove_edge(i, v);
                self.report.reject(Rejection::Connectivity);
                continue;
            }
            return true;
        }
        self.g.add_edge(i, j);
        false
    }

    /// CKDBC: start from a random innermost-closeness-core node `i`, drop the
    /// neighbor with probability proportional to
    /// `prod(n) = (r_deg(i, n) + 1) * g(n)`, then attach to a uniform
    /// non-neighbor `v` accepted when `prod(v)` falls below a uniform draw.
    fn try_ckdbc_move(&mut self) -> bool {
        let i = self.scores.innermost[self.rng.random_range(0..self.scores.innermost.len())];
        if self.g.degree(i) == 0 {
            return false;
        }
        // The whole prod table is fixed at move start, before any mutation.
        let n = self.g.node_count();
        let deg_i = self.g.degree(i);
        let prod: Vec<f64> = (0..n)
            .map(|v| (self.scores.pair.clamped(deg_i, self.g.degree(v)) + 1.0) * self.scores.bc[v])
            .collect();
        let neighbors: Vec<usize> = self.g.neighbors(i).collect();
        let weights: Vec<f64> = neighbors.iter().map(|&nb| prod[nb]).collect();
        self.report.moves_attempted += 1;
        let j = match weighted_choice(&mut self.rng, &weights) {
            Some(idx) => neighbors[idx],
            // All neighbor scores zero: fall back to a uniform removal.
            None => neighbors[self.rng.random_range(0..neighbors.len())],
        };
        self.g.remove_edge(i, j);
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| v != i && v != j && !self.g.has_edge(i, v))
            .collect();
        if candidates.is_empty() {
            self.g.add_edge(i, j);
            self.report.reject(Rejection::NoCandidate);
            return false;
        }
        for _ in 0..self.cfg.max_attempts {
            self.report.moves_attempted += 1;
            let v = candidates[self.rng.random_range(0..candidates.len())];
            if prod[v] >= self.rng.random_range(0.0..1.0) {
                self.report.reject(Rejection::CandidateCondition);
                continue;
            }
            self.g.add_edge(i, v);
            if self.cfg.require_connectivity && !self.g.is_connected() {
                self.g.remove_edge(i, v);
                self.report.reject(Rejection::Connectivity);
                continue;
            }
            return true;
        }
        self.g.add_edge(i, j);
        false
    }
}

/// Rewires `round(r_f * |E|)` links of a copy of `g` (fewer if trial budgets
/// exhaust, which the report records). Deterministic for a given config.
pub fn rewire(g: &Graph, cfg: &RewireConfig) -> Result<(Graph, RewireReport)> {
    cfg.validate()?;
    if !g.is_connected() {
        return Err(Error::Degenerate("rewiring needs a connected graph".into()));
    }
    let mut out = g.clone();
    let mut report = RewireReport {
        moves_target: (cfg.r_f * g.edge_count() as f64).round() as usize,
        edges_before: g.edge_count(),
        edges_after: g.edge_count(),
        ..RewireReport::default()
    };
    if report.moves_target == 0 {
        return Ok((out, report));
    }

    let scores = compute_scores(&out, cfg.strategy)?;
    let mut engine = Engine {
        g: &mut out,
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        scores,
        report,
    };

    let mut since_refresh = 0usize;
    for _ in 0..engine.report.moves_target {
        if since_refresh >= cfg.recompute_batch {
            engine.scores = compute_scores(engine.g, cfg.strategy)?;
            since_refresh = 0;
        }
        let accepted = match cfg.strategy {
            Strategy::Dpa | Strategy::Dec => engine.try_disassortative_move(),
            Strategy::Dkbc => engine.try_dkbc_move(),
            Strategy::Ckdbc => engine.try_ckdbc_move(),
        };
        if accepted {
            engine.report.moves_accepted += 1;
            since_refresh += 1;
        }
    }

    report = engine.report;
    report.edges_after = out.edge_count();
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_ba;

    #[test]
    fn rf_zero_is_identity() {
        let g = generate_ba(100, 5, 2, 1).unwrap();
        for strategy in Strategy::ALL {
            let cfg = RewireConfig::new(strategy, 0.0, 7);
            let (h, report) = rewire(&g, &cfg).unwrap();
            assert_eq!(h.edges(), g.edges());
            assert_eq!(report.moves_accepted, 0);
            assert_eq!(report.moves_attempted, 0);
        }
    }

    #[test]
    fn conserves_edges_simplicity_connectivity() {
        let g = generate_ba(250, 5, 2, 3).unwrap();
        for strategy in Strategy::ALL {
            let cfg = RewireConfig::new(strategy, 0.10, 11);
            let (h, report) = rewire(&g, &cfg).unwrap();
            assert_eq!(report.edges_before, report.edges_after, "{strategy:?}");
            assert_eq!(h.edge_count(), g.edge_count(), "{strategy:?}");
            assert!(h.is_connected(), "{strategy:?}");
            let degsum: usize = h.degree_sequence().iter().sum();
            assert_eq!(degsum, 2 * h.edge_count());
            assert!(report.moves_accepted <= report.moves_target);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let g = generate_ba(120, 5, 2, 5).unwrap();
        for strategy in Strategy::ALL {
            let cfg = RewireConfig::new(strategy, 0.15, 21);
            let (a, ra) = rewire(&g, &cfg).unwrap();
            let (b, rb) = rewire(&g, &cfg).unwrap();
            assert_eq!(a.edges(), b.edges(), "{strategy:?}");
            assert_eq!(ra.moves_attempted, rb.moves_attempted);
            let cfg2 = RewireConfig::new(strategy, 0.15, 22);
            let (c, _) = rewire(&g, &cfg2).unwrap();
            assert_ne!(a.edges(), c.edges(), "{strategy:?} should vary by seed");
        }
    }

    #[test]
    fn input_graph_untouched() {
        let g = generate_ba(80, 5, 2, 2).unwrap();
        let before = g.edges();
        let cfg = RewireConfig::new(Strategy::Dpa, 0.2, 9);
        let _ = rewire(&g, &cfg).unwrap();
        assert_eq!(g.edges(), before);
    }

    #[test]
    fn weighted_choice_respects_zero_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..2000 {
            let w = [0.0, 3.0, 0.0, 1.0];
            let i = weighted_choice(&mut rng, &w).unwrap();
            assert!(i == 1 || i == 3);
        }
        assert_eq!(weighted_choice(&mut rng, &[0.0, 0.0]), None);
    }

    #[test]
    fn weighted_choice_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let w = [1.0, 2.0, 3.0, 4.0];
        let mut counts = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            counts[weighted_choice(&mut rng, &w).unwrap()] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let expect = w[i] / 10.0;
            let got = c as f64 / draws as f64;
            assert!((got - expect).abs() < 0.01, "slot {i}: {got} vs {expect}");
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let g = generate_ba(50, 5, 2, 1).unwrap();
        let mut cfg = RewireConfig::new(Strategy::Dpa, 1.5, 0);
        assert!(rewire(&g, &cfg).is_err());
        cfg.r_f = 0.1;
        cfg.max_attempts = 0;
        assert!(rewire(&g, &cfg).is_err());
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("DPA".parse::<Strategy>().unwrap(), Strategy::Dpa);
        assert_eq!("ckdbc".parse::<Strategy>().unwrap(), Strategy::Ckdbc);
        assert!("pagerank".parse::<Strategy>().is_err());
    }
}
