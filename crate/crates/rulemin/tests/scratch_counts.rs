use rulemin::cover::*;
use rulemin::inference::*;
use rulemin::tictactoe::*;
use rulemin::transition::check;
use std::io::Write;
use std::time::{Duration, Instant};

fn log(msg: &str) {
    let mut f = std::fs::OpenOptions::new().create(true).append(true).open("/tmp/ttt_probe.log").unwrap();
    writeln!(f, "{msg}").unwrap();
}

#[test]
fn ttt_x_greedy() {
    let sys = gen_tictactoe(&GameSpec { player: Player::X, reachability: ReachabilityMode::Legal }).unwrap();
    for (name, closure) in [("fixpoint", ClosureMode::MaxRulePairs), ("once", ClosureMode::PairsOnce)] {
        let cfg = PoolConfig { prune_dirty_pairs: true, greedy_extension: true, closure, ..Default::default() };
        let t = Instant::now();
        let pool = build_candidate_pool(&sys, &cfg).unwrap();
        let clean = pool.candidates.iter().filter(|c| c.spurious == SpuriousStatus::Clean).count();
        log(&format!("greedy {name} pool: {} ({clean} clean) in {:?}", pool.len(), t.elapsed()));
        let filtered = exact_filter(&pool, &sys, 200_000).unwrap();
        let problem = build_cover_problem(&filtered, &sys, CoverMode::Exact, Rho::one(), 200_000).unwrap();
        let t = Instant::now();
        let sol = solve_exact(&problem, Some(Duration::from_secs(120)));
        let witness: Vec<_> = sol.chosen.iter().map(|&i| filtered.candidates[i].rule.clone()).collect();
        let report = check(&witness, &sys, 200_000).unwrap();
        log(&format!(
            "greedy {name} exact: {} rules optimal={} verified={} in {:?}",
            sol.chosen.len(), sol.optimal, report.is_exact(), t.elapsed()
        ));
    }
}
