//! Scratch calibration probe (not part of the deliverable surface).

use rewire_core::*;

fn metrics_line(tag: &str, g: &Graph, beta: f64) {
    let c = CentralityBundle::compute(g).unwrap();
    let caps = allocate_capacity(g, &c, beta);
    let lc = critical_rate(g, &c, &caps).unwrap();
    let apl = g.average_path_length().unwrap();
    let anc = kcore_degree(g).unwrap().mean_core_index();
    let rc = rich_club_profile(g).unwrap().rc_scalar;
    let cp = core_periphery_coefficient(g).unwrap_or(f64::NAN);
    println!(
        "{tag}: N={} E={} <k>={:.3} gmax={:.4} lc={:.4} r={:.4} apl={:.4} anc={:.4} rc={:.4} cp={:.4}",
        g.node_count(),
        g.edge_count(),
        g.mean_degree(),
        c.bc_max(),
        lc,
        c.assortativity,
        apl,
        anc,
        rc,
        cp
    );
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    if mode == "gmax10" {
        for (m0, m) in [(5usize, 2usize), (5, 4), (4, 4), (6, 5), (5, 5)] {
            for base in [0u64, 1000, 77] {
                let mut gs = Vec::new();
                let mut apls = Vec::new();
                let mut ancs = Vec::new();
                for r in 0..10u64 {
                    let g = generate_ba(500, m0, m, base + r).unwrap();
                    let c = CentralityBundle::compute(&g).unwrap();
                    gs.push(c.bc_max());
                    apls.push(g.average_path_length().unwrap());
                    ancs.push(kcore_degree(&g).unwrap().mean_core_index());
                }
                let mean = gs.iter().sum::<f64>() / 10.0;
                let in_band = gs.iter().filter(|&&g| (0.13..=0.25).contains(&g)).count();
                println!(
                    "m0={m0} m={m} base={base}: gmax mean={mean:.4} in_band={in_band}/10 apl={:.3} anc={:.3}",
                    apls.iter().sum::<f64>() / 10.0,
                    ancs.iter().sum::<f64>() / 10.0
                );
            }
        }
    }

    if mode == "slopes" {
        let t0 = std::time::Instant::now();
        for seed in 0..2u64 {
            let g = generate_ba(2000, 5, 2, seed).unwrap();
            let d = degree_distribution(&g).unwrap();
            let kmax = d.p.len() - 1;
            let orig = log_log_tail_slope(&d, 4, kmax / 2).unwrap();
            print!("seed={seed} orig={orig:.3}");
            for strategy in Strategy::ALL {
                let mut cfg = RewireConfig::new(strategy, 0.15, 500 + seed);
                cfg.recompute_batch = 10;
                let (h, rep) = rewire(&g, &cfg).unwrap();
                let dh = degree_distribution(&h).unwrap();
                let kmaxh = dh.p.len() - 1;
                let s = log_log_tail_slope(&dh, 4, kmaxh / 2).unwrap();
                print!(" {}={s:.3}(acc {}/{})", strategy.name(), rep.moves_accepted, rep.moves_target);
            }
            println!(" elapsed={:.1?}", t0.elapsed());
        }
    }

    if mode == "trendwide" {
        // Paired mean difference (rewired - original) over many seeds.
        let beta = 0.5;
        for rf in [0.05, 0.10, 0.15] {
            for strategy in Strategy::ALL {
                let mut dg = 0.0;
                let mut dl = 0.0;
                let n_seeds = 40u64;
                for seed in 0..n_seeds {
                    let g = generate_ba(250, 5, 2, seed).unwrap();
                    let c = CentralityBundle::compute(&g).unwrap();
                    let caps = allocate_capacity(&g, &c, beta);
                    let lc0 = critical_rate(&g, &c, &caps).unwrap();
                    let cfg = RewireConfig::new(strategy, rf, 3000 + seed);
                    let (h, _) = rewire(&g, &cfg).unwrap();
                    let ch = CentralityBundle::compute(&h).unwrap();
                    let capsh = allocate_capacity(&h, &ch, beta);
                    let lc1 = critical_rate(&h, &ch, &capsh).unwrap();
                    dg += ch.bc_max() - c.bc_max();
                    dl += lc1 - lc0;
                }
                println!(
                    "rf={rf} {}: mean d_gmax={:+.5} mean d_lc={:+.4}",
                    strategy.name(),
                    dg / n_seeds as f64,
                    dl / n_seeds as f64
                );
            }
        }
    }

    if mode == "uk" {
        let mut wins = [0usize; 4];
        for seed in 0..6u64 {
            let g = generate_ba(1000, 5, 2, seed).unwrap();
            let c = CentralityBundle::compute(&g).unwrap();
            let u0 = node_utilization(&g, &c).unwrap().u_max;
            print!("seed={seed} orig={u0:.4}");
            for (si, strategy) in Strategy::ALL.iter().enumerate() {
                let mut cfg = RewireConfig::new(*strategy, 0.15, 900 + seed);
                cfg.recompute_batch = 5;
                let (h, _) = rewire(&g, &cfg).unwrap();
                let ch = CentralityBundle::compute(&h).unwrap();
                let u = node_utilization(&h, &ch).unwrap().u_max;
                if u < u0 {
                    wins[si] += 1;
                }
                print!(" {}={u:.4}", strategy.name());
            }
            println!();
        }
        println!("reduced u_max vs orig, of 6 seeds: dpa={} dec={} dkbc={} ckdbc={}", wins[0], wins[1], wins[2], wins[3]);
    }

    if mode == "all" || mode == "table1" {
        println!("== BA(500) m=2 vs m=4, 5 seeds ==");
        for m in [2usize, 4] {
            for seed in 0..5u64 {
                let g = generate_ba(500, 5, m, seed).unwrap();
                metrics_line(&format!("m={m} seed={seed}"), &g, 0.5);
            }
        }
    }

    if mode == "all" || mode == "trend" {
        println!("== BA(250,m=2) trend check: 5 seeds, r_f=0.10 ==");
        let beta = 0.5;
        let mut orig_gmax = Vec::new();
        let mut orig_lc = Vec::new();
        for seed in 0..5u64 {
            let g = generate_ba(250, 5, 2, seed).unwrap();
            let c = CentralityBundle::compute(&g).unwrap();
            let caps = allocate_capacity(&g, &c, beta);
            orig_gmax.push(c.bc_max());
            orig_lc.push(critical_rate(&g, &c, &caps).unwrap());
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "original: gmax={:.4} lc={:.4}",
            mean(&orig_gmax),
            mean(&orig_lc)
        );
        for strategy in Strategy::ALL {
            let mut gmaxs = Vec::new();
            let mut lcs = Vec::new();
            let mut accepted = 0usize;
            let mut targets = 0usize;
            let t0 = std::time::Instant::now();
            for seed in 0..5u64 {
                let g = generate_ba(250, 5, 2, seed).unwrap();
                let cfg = RewireConfig::new(strategy, 0.10, 1000 + seed);
                let (h, rep) = rewire(&g, &cfg).unwrap();
                let c = CentralityBundle::compute(&h).unwrap();
                let caps = allocate_capacity(&h, &c, beta);
                gmaxs.push(c.bc_max());
                lcs.push(critical_rate(&h, &c, &caps).unwrap());
                accepted += rep.moves_accepted;
                targets += rep.moves_target;
            }
            println!(
                "{}: gmax={:.4} lc={:.4} accepted={}/{} elapsed={:.2?}",
                strategy.name(),
                mean(&gmaxs),
                mean(&lcs),
                accepted,
                targets,
                t0.elapsed()
            );
        }
    }

    if mode == "all" || mode == "onset" {
        println!("== analytic onset vs lambda_c, BA(250), m=2 and m=4 ==");
        for m in [2usize, 4] {
            for seed in 0..5u64 {
                let g = generate_ba(250, 5, m, seed).unwrap();
                let c = CentralityBundle::compute(&g).unwrap();
                for beta in [0.3, 0.5, 0.7] {
                    let caps = allocate_capacity(&g, &c, beta);
                    let lc = critical_rate(&g, &c, &caps).unwrap();
                    let total_c: f64 = caps.iter().sum();
                    let d = g.average_path_length().unwrap();
                    // network recursion positive iff lambda*D*N > sum(C)
                    let onset_network = total_c / (d * g.node_count() as f64);
                    // per-node recursion positive iff some Q_i > C_i
                    let total_bc: f64 = c.bc.iter().sum();
                    let onset_pernode = (0..g.node_count())
                        .filter(|&i| c.bc[i] > 0.0)
                        .map(|i| caps[i] * total_bc / (d * g.node_count() as f64 * c.bc[i]))
                        .fold(f64::INFINITY, f64::min);
                    println!(
                        "m={m} seed={seed} beta={beta}: lc={lc:.4} onset_net={onset_network:.4} ratio={:.3} onset_pn={onset_pernode:.4} ratio_pn={:.3}",
                        onset_network / lc,
                        onset_pernode / lc
                    );
                }
            }
        }
    }

    if mode == "all" || mode == "sim" {
        for m in [2usize, 4] {
            println!("== packet sim onset, BA(250, m={m}), beta=0.5, T=1000 ==");
            for seed in 0..5u64 {
                let g = generate_ba(250, 5, m, seed).unwrap();
                let c = CentralityBundle::compute(&g).unwrap();
                let caps = allocate_capacity(&g, &c, 0.5);
                let lc = critical_rate(&g, &c, &caps).unwrap();
                let routes = RoutingTable::build(&g).unwrap();
                let cmin = caps.iter().copied().fold(f64::INFINITY, f64::min);
                let below1: usize = caps.iter().filter(|&&c| c < 1.0).count();
                print!("seed={seed} lc={lc:.3} cmin={cmin:.3} n(C<1)={below1} |");
                for mult in [0.2, 0.3, 0.4, 0.5, 0.6, 0.8] {
                    let lambda = mult * lc;
                    let mut growth = 0.0;
                    for s in 0..5u64 {
                        let tr = packet_simulate(
                            &g,
                            &routes,
                            &caps,
                            lambda,
                            1000,
                            GenerationMode::Poisson,
                            100 + s,
                        )
                        .unwrap();
                        growth += tr.final_in_flight() as f64 / 1000.0;
                    }
                    growth /= 5.0;
                    let threshold = 0.01 * lambda * 250.0;
                    print!(
                        " {mult}:{}",
                        if growth > threshold { "C" } else { "." }
                    );
                }
                println!();
            }
        }
    }
}
