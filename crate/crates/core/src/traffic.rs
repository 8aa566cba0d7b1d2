//! Traffic model: capacity allocation, analytic load dynamics, critical
//! generation rate, node utilization and a packet-level simulator.
//!
//! Capacity of node `i` is `beta * (ec_i + bc_i) * N` and the expected inflow
//! under shortest-path routing is `lambda * D * N * bc_i / sum(bc)`, with `D`
//! the average path length. Congestion sets in at the critical generation
//! rate `lambda_c = C_{i*} (N-1) / B_{i*}` taken at the maximum-betweenness
//! node `i*` (raw pair-count betweenness in the denominator).

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::centrality::CentralityBundle;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Control parameters of the analytic load recursion.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrafficParams {
    /// Capacity control, > 0.
    pub beta: f64,
    /// Packets generated per node per step, >= 0.
    pub lambda: f64,
    /// Steps to run.
    pub horizon: usize,
}

impl TrafficParams {
    pub fn validate(&self) -> Result<()> {
        if self.beta <= 0.0 {
            return Err(Error::Config(format!("beta {} must be > 0", self.beta)));
        }
        if self.lambda < 0.0 {
            return Err(Error::Config(format!("lambda {} must be >= 0", self.lambda)));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be >= 1".into()));
        }
        Ok(())
    }
}

/// `C_i = beta * (ec_i + bc_i) * N` with max-normalized eigenvector
/// centrality and pair-normalized betweenness.
pub fn allocate_capacity(g: &Graph, centr: &CentralityBundle, beta: f64) -> Vec<f64> {
    let n = g.node_count() as f64;
    centr
        .ec
        .iter()
        .zip(&centr.bc)
        .map(|(x, b)| beta * (x + b) * n)
        .collect()
}

/// `Q_i = lambda * D * N * bc_i / sum(bc)`; on betweenness-free graphs
/// (complete graphs) the inflow spreads uniformly.
pub fn expected_inflow(g: &Graph, centr: &CentralityBundle, lambda: f64) -> Result<Vec<f64>> {
    let n = g.node_count() as f64;
    let d = g.average_path_length()?;
    let total_bc: f64 = centr.bc.iter().sum();
    if total_bc <= 0.0 {
        return Ok(vec![lambda * d; g.node_count()]);
    }
    Ok(centr
        .bc
        .iter()
        .map(|b| lambda * d * n * b / total_bc)
        .collect())
}

/// Critical packet generation rate `C_{i*} (N-1) / B_{i*}` at the node of
/// maximum raw betweenness.
pub fn critical_rate(g: &Graph, centr: &CentralityBundle, capacities: &[f64]) -> Result<f64> {
    let i = centr.bc_argmax();
    let b = centr.bc_raw[i];
    if b <= 0.0 {
        return Err(Error::Degenerate(
            "critical rate undefined: maximum betweenness is zero".into(),
        ));
    }
    Ok(capacities[i] * (g.node_count() - 1) as f64 / b)
}

/// Accumulated-load traces of the analytic recursion.
#[derive(Debug, Clone)]
pub struct LoadTrace {
    /// Network total per step, from per-node ledgers clipped at zero:
    /// `L_i(t+1) = max(0, L_i(t) + Q_i - C_i)`.
    pub per_node_total: Vec<f64>,
    /// Paper-form network recursion `L(t+1) = max(0, L(t) + Q - C)` with
    /// `Q = sum(Q_i)`, `C = sum(C_i)`.
    pub network_total: Vec<f64>,
    /// Final per-node ledger.
    pub final_per_node: Vec<f64>,
}

impl LoadTrace {
    pub fn final_per_node_total(&self) -> f64 {
        *self.per_node_total.last().unwrap_or(&0.0)
    }

    pub fn final_network_total(&self) -> f64 {
        *self.network_total.last().unwrap_or(&0.0)
    }
}

/// Runs the load recursion for `params.horizon` steps from empty queues.
/// `Q` and `C` are constant in time on a static network, so free flow
/// (`Q_i <= C_i` everywhere) is absorbing.
pub fn analytic_load(params: &TrafficParams, capacities: &[f64], inflow: &[f64]) -> Result<LoadTrace> {
    params.validate()?;
    assert_eq!(capacities.len(), inflow.len());
    let mut ledger = vec![0.0f64; capacities.len()];
    let mut per_node_total = Vec::with_capacity(params.horizon);
    let mut network_total = Vec::with_capacity(params.horizon);
    let q: f64 = inflow.iter().sum();
    let c: f64 = capacities.iter().sum();
    let mut network = 0.0f64;
    for _ in 0..params.horizon {
        for ((l, &qi), &ci) in ledger.iter_mut().zip(inflow).zip(capacities) {
            *l = (*l + qi - ci).max(0.0);
        }
        per_node_total.push(ledger.iter().sum());
        network = (network + q - c).max(0.0);
        network_total.push(network);
    }
    Ok(LoadTrace {
        per_node_total,
        network_total,
        final_per_node: ledger,
    })
}

/// Node utilization: share of shortest-path traffic transiting each node,
/// aggregated per degree class.
#[derive(Debug, Clone)]
pub struct UtilizationProfile {
    /// `u_i = bc_i / sum(bc)` per node.
    pub per_node: Vec<f64>,
    /// Mean `u_i` over the nodes of each degree.
    pub per_degree: std::collections::BTreeMap<usize, f64>,
    pub u_max: f64,
}

pub fn node_utilization(g: &Graph, centr: &CentralityBundle) -> Result<UtilizationProfile> {
    let total: f64 = centr.bc.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("utilization undefined: all betweenness zero".into()));
    }
    let per_node: Vec<f64> = centr.bc.iter().map(|b| b / total).collect();
    let mut sums: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for (i, &u) in per_node.iter().enumerate() {
        let e = sums.entry(g.degree(i)).or_insert((0.0, 0));
        e.0 += u;
        e.1 += 1;
    }
    let per_degree: std::collections::BTreeMap<usize, f64> = sums
        .into_iter()
        .map(|(k, (s, c))| (k, s / c as f64))
        .collect();
    let u_max = per_degree.values().copied().fold(0.0, f64::max);
    Ok(UtilizationProfile {
        per_node,
        per_degree,
        u_max,
    })
}

/// How many packets a node emits per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerationMode {
    /// `Poisson(lambda)` packets per node per step.
    Poisson,
    /// One packet with probability `lambda` (requires `lambda <= 1`).
    Bernoulli,
}

#[derive(Debug, Clone, Copy)]
struct Packet {
    dest: u32,
    seq: u64,
}

/// Trace of one packet-level run.
#[derive(Debug, Clone)]
pub struct SimTrace {
    /// In-flight packets after each step.
    pub in_flight: Vec<usize>,
    /// Cumulative generated packets after each step.
    pub generated: Vec<u64>,
    /// Cumulative delivered packets after each step.
    pub delivered: Vec<u64>,
}

impl SimTrace {
    pub fn final_in_flight(&self) -> usize {
        *self.in_flight.last().unwrap_or(&0)
    }
}

/// Static shortest-path routing table: `next_hop[dest][u]` is the neighbor of
/// `u` on a shortest path toward `dest`, breaking ties toward the smallest
/// node index.
pub struct RoutingTable {
    next_hop: Vec<Vec<u32>>,
}

impl RoutingTable {
    pub fn build(g: &Graph) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Degenerate("routing needs a connected graph".into()));
        }
        let n = g.node_count();
        let mut next_hop = vec![vec![0u32; n]; n];
        for dest in 0..n {
            let dist = g.bfs_distances(dest);
            let table = &mut next_hop[dest];
            for u in 0..n {
                if u == dest {
                    table[u] = dest as u32;
                    continue;
                }
                // Ordered neighbor iteration makes the min the first hit.
                let hop = g
                    .neighbors(u)
                    .find(|&w| dist[w] + 1 == dist[u])
                    .expect("connected graph always has a downhill neighbor");
                table[u] = hop as u32;
            }
        }
        Ok(RoutingTable { next_hop })
    }

    pub fn next_hop(&self, node: usize, dest: usize) -> usize {
        self.next_hop[dest][node] as usize
    }
}

/// Discrete-time FIFO packet simulator.
///
/// Per step: every node generates fresh packets with uniformly random
/// destinations, then every node forwards up to `floor(C_i) + Bernoulli(frac)`
/// head-of-queue packets one hop along the routing table; packets reaching
/// their destination leave the system. Forwarded packets become visible to
/// the receiving queue at the next step.
pub fn packet_simulate(
    g: &Graph,
    routes: &RoutingTable,
    capacities: &[f64],
    lambda: f64,
    horizon: usize,
    mode: GenerationMode,
    seed: u64,
) -> Result<SimTrace> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Degenerate("simulation needs N >= 2".into()));
    }
    if lambda < 0.0 || (mode == GenerationMode::Bernoulli && lambda > 1.0) {
        return Err(Error::Config(format!("invalid lambda {lambda} for {mode:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poisson = if lambda > 0.0 {
        Some(Poisson::new(lambda).map_err(|e| Error::Config(format!("lambda {lambda}: {e}")))?)
    } else {
        None
    };
    let mut queues: Vec<VecDeque<Packet>> = vec![VecDeque::new(); n];
    let mut inbox: Vec<Vec<Packet>> = vec![Vec::new(); n];
    let mut seq = 0u64;
    let mut generated = 0u64;
    let mut delivered = 0u64;
    let mut in_flight = 0usize;
    let mut trace = SimTrace {
        in_flight: Vec::with_capacity(horizon),
        generated: Vec::with_capacity(horizon),
        delivered: Vec::with_capacity(horizon),
    };

    for _ in 0..horizon {
        for s in 0..n {
            let count = match (mode, &poisson) {
                (_, None) => 0,
                (GenerationMode::Poisson, Some(p)) => p.sample(&mut rng) as usize,
                (GenerationMode::Bernoulli, _) => usize::from(rng.random_bool(lambda)),
            };
            for _ in 0..count {
                let mut dest = rng.random_range(0..n - 1);
                if dest >= s {
                    dest += 1;
                }
                queues[s].push_back(Packet {
                    dest: dest as u32,
                    seq,
                });
                seq += 1;
                generated += 1;
                in_flight += 1;
            }
        }
        for (u, queue) in queues.iter_mut().enumerate() {
            let budget = stochastic_round(capacities[u], &mut rng);
            for _ in 0..budget {
                let Some(packet) = queue.pop_front() else { break };
                let hop = routes.next_hop(u, packet.dest as usize);
                if hop == packet.dest as usize {
                    delivered += 1;
                    in_flight -= 1;
                } else {
                    inbox[hop].push(packet);
                }
            }
        }
        for (u, incoming) in inbox.iter_mut().enumerate() {
            queues[u].extend(incoming.drain(..));
        }
        trace.in_flight.push(in_flight);
        trace.generated.push(generated);
        trace.delivered.push(delivered);
        debug_assert_eq!(generated, delivered + in_flight as u64);
    }
    Ok(trace)
}

/// `floor(c)` plus one with probability `frac(c)`, so the long-run service
/// rate equals `c`.
fn stochastic_round(c: f64, rng: &mut ChaCha8Rng) -> usize {
    let base = c.floor();
    let frac = c - base;
    base as usize + usize::from(frac > 0.0 && rng.random_bool(frac.min(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_ba;

    fn star(leaves: usize) -> Graph {
        let mut g = Graph::new(leaves + 1);
        for l in 1..=leaves {
            g.add_edge(0, l);
        }
        g
    }

    fn bundle(g: &Graph) -> CentralityBundle {
        CentralityBundle::compute(g).unwrap()
    }

    #[test]
    fn capacity_direct_substitution() {
        let g = generate_ba(100, 5, 2, 1).unwrap();
        let c = bundle(&g);
        let caps = allocate_capacity(&g, &c, 0.5);
        for i in 0..g.node_count() {
            let expect = 0.5 * (c.ec[i] + c.bc[i]) * 100.0;
            assert!((caps[i] - expect).abs() < 1e-12);
            assert!(caps[i] >= 0.0);
        }
        // Linear in beta.
        let caps2 = allocate_capacity(&g, &c, 1.0);
        for (a, b) in caps.iter().zip(&caps2) {
            assert!((2.0 * a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn inflow_star_and_normalization() {
        let g = star(4);
        let c = bundle(&g);
        let q = expected_inflow(&g, &c, 1.0).unwrap();
        // Star: hub carries all betweenness; D = 8/5.
        assert!((q[0] - 8.0).abs() < 1e-9, "hub inflow {}", q[0]);
        for leaf in 1..=4 {
            assert_eq!(q[leaf], 0.0);
        }

        let g = generate_ba(150, 5, 2, 2).unwrap();
        let c = bundle(&g);
        let lambda = 0.37;
        let q = expected_inflow(&g, &c, lambda).unwrap();
        let d = g.average_path_length().unwrap();
        let total: f64 = q.iter().sum();
        assert!((total - lambda * d * 150.0).abs() < 1e-9);

        let q0 = expected_inflow(&g, &c, 0.0).unwrap();
        assert!(q0.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn critical_rate_star_hand_value() {
        let g = star(5);
        let c = bundle(&g);
        // Uniform capacity 1: hub B = C(5,2) = 10, N-1 = 5.
        let caps = vec![1.0; 6];
        let lc = critical_rate(&g, &c, &caps).unwrap();
        assert!((lc - 0.5).abs() < 1e-12);
        // Scaling capacities scales lambda_c.
        let caps3: Vec<f64> = caps.iter().map(|c| 3.0 * c).collect();
        let lc3 = critical_rate(&g, &c, &caps3).unwrap();
        assert!((lc3 - 1.5).abs() < 1e-12);
    }

    #[test]
    fn analytic_load_free_flow_and_growth() {
        let params = TrafficParams {
            beta: 1.0,
            lambda: 1.0,
            horizon: 5,
        };
        // Q <= C everywhere: zero forever.
        let trace = analytic_load(&params, &[2.0, 3.0], &[2.0, 1.0]).unwrap();
        assert!(trace.per_node_total.iter().all(|&l| l == 0.0));
        assert!(trace.network_total.iter().all(|&l| l == 0.0));

        // Single node with Q - C = 2 grows linearly.
        let trace = analytic_load(&params, &[1.0], &[3.0]).unwrap();
        assert_eq!(trace.per_node_total, vec![2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(trace.network_total, vec![2.0, 4.0, 6.0, 8.0, 10.0]);
    }

    #[test]
    fn analytic_load_monotone_in_lambda_and_beta() {
        let g = generate_ba(120, 5, 2, 3).unwrap();
        let c = bundle(&g);
        let horizon = 200;
        let lambdas = [0.1, 0.5, 1.0, 2.0, 4.0];
        let betas = [0.3, 0.5, 0.7];
        for &beta in &betas {
            let caps = allocate_capacity(&g, &c, beta);
            let mut prev = -1.0;
            for &lambda in &lambdas {
                let q = expected_inflow(&g, &c, lambda).unwrap();
                let params = TrafficParams { beta, lambda, horizon };
                let l = analytic_load(&params, &caps, &q).unwrap().final_per_node_total();
                assert!(l >= prev, "L not monotone in lambda");
                prev = l;
            }
        }
        for &lambda in &lambdas {
            let q = expected_inflow(&g, &c, lambda).unwrap();
            let mut prev = f64::INFINITY;
            for &beta in &betas {
                let caps = allocate_capacity(&g, &c, beta);
                let params = TrafficParams { beta, lambda, horizon };
                let l = analytic_load(&params, &caps, &q).unwrap().final_per_node_total();
                assert!(l <= prev, "L not monotone in beta");
                prev = l;
            }
        }
    }

    #[test]
    fn utilization_star_and_sum() {
        let g = star(4);
        let c = bundle(&g);
        let u = node_utilization(&g, &c).unwrap();
        assert_eq!(u.per_degree.get(&4), Some(&1.0));
        assert_eq!(u.per_degree.get(&1), Some(&0.0));
        assert_eq!(u.u_max, 1.0);

        let g = generate_ba(150, 5, 2, 4).unwrap();
        let c = bundle(&g);
        let u = node_utilization(&g, &c).unwrap();
        let total: f64 = u.per_node.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn routing_lexicographic_tie_break() {
        // 4-cycle 0-1-3-2-0: two shortest paths from 0 to 3; the table must
        // pick neighbor 1 over neighbor 2.
        let mut g = Graph::new(4);
        g.add_edge(0, 1);
        g.add_edge(1, 3);
        g.add_edge(0, 2);
        g.add_edge(2, 3);
        let routes = RoutingTable::build(&g).unwrap();
        assert_eq!(routes.next_hop(0, 3), 1);
        assert_eq!(routes.next_hop(1, 3), 3);
    }

    #[test]
    fn simulate_lambda_zero_stays_empty() {
        let g = generate_ba(50, 5, 2, 6).unwrap();
        let routes = RoutingTable::build(&g).unwrap();
        let caps = vec![1.0; 50];
        let trace =
            packet_simulate(&g, &routes, &caps, 0.0, 50, GenerationMode::Poisson, 1).unwrap();
        assert!(trace.in_flight.iter().all(|&l| l == 0));
        assert_eq!(*trace.generated.last().unwrap(), 0);
    }

    #[test]
    fn simulate_two_nodes_ample_capacity() {
        let mut g = Graph::new(2);
        g.add_edge(0, 1);
        let routes = RoutingTable::build(&g).unwrap();
        let caps = vec![10.0, 10.0];
        let trace =
            packet_simulate(&g, &routes, &caps, 1.0, 100, GenerationMode::Poisson, 3).unwrap();
        let gen = *trace.generated.last().unwrap();
        let del = *trace.delivered.last().unwrap();
        assert!(gen > 100, "expected ~200 packets, got {gen}");
        assert!(gen - del <= 25, "backlog {} too large", gen - del);
        assert!(trace.in_flight.iter().all(|&l| l < 25));
    }

    #[test]
    fn simulate_conservation_identity() {
        let g = generate_ba(80, 5, 2, 9).unwrap();
        let c = bundle(&g);
        let caps = allocate_capacity(&g, &c, 0.5);
        let routes = RoutingTable::build(&g).unwrap();
        let trace =
            packet_simulate(&g, &routes, &caps, 0.8, 300, GenerationMode::Poisson, 17).unwrap();
        for t in 0..300 {
            assert_eq!(
                trace.generated[t],
                trace.delivered[t] + trace.in_flight[t] as u64
            );
        }
    }

    #[test]
    fn simulate_deterministic_per_seed() {
        let g = generate_ba(60, 5, 2, 10).unwrap();
        let routes = RoutingTable::build(&g).unwrap();
        let caps = vec![1.5; 60];
        let a = packet_simulate(&g, &routes, &caps, 0.4, 100, GenerationMode::Poisson, 5).unwrap();
        let b = packet_simulate(&g, &routes, &caps, 0.4, 100, GenerationMode::Poisson, 5).unwrap();
        assert_eq!(a.in_flight, b.in_flight);
        let c = packet_simulate(&g, &routes, &caps, 0.4, 100, GenerationMode::Poisson, 6).unwrap();
        assert_ne!(a.in_flight, c.in_flight);
    }

    #[test]
    fn bernoulli_mode_caps_lambda() {
        let g = star(3);
        let routes = RoutingTable::build(&g).unwrap();
        let caps = vec![1.0; 4];
        assert!(
            packet_simulate(&g, &routes, &caps, 1.2, 10, GenerationMode::Bernoulli, 0).is_err()
        );
        let trace =
            packet_simulate(&g, &routes, &caps, 0.5, 200, GenerationMode::Bernoulli, 0).unwrap();
        let gen = *trace.generated.last().unwrap() as f64;
        // 4 nodes * 200 steps * 0.5 = 400 expected.
        assert!((gen - 400.0).abs() < 80.0, "generated {gen}");
    }
}
