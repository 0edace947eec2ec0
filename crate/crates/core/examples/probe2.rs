use halfstreet::abstraction::ClassIndex;
use halfstreet::equity::{compute_matchup, load_tables, EquityMode};
use halfstreet::game::{FlopGame, GameSpec, HalfStreetGame};
use halfstreet::{cfr, verify, RankTables};
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let ranks = RankTables::build();
    let class = |l: &str| ClassIndex::parse(l).unwrap();

    let t0 = Instant::now();
    for (a, b) in [("22", "AKo"), ("AKo", "JTs"), ("JTs", "22")] {
        let m = compute_matchup(&ranks, class(a), class(b), 5, EquityMode::Exact).unwrap();
        println!("w({a}|{b}) = {:.4}  w({b}|{a}) = {:.4}  d = {:.4}", m.win_first, m.win_second, m.draw);
    }
    println!("board-5 matchups: {:.1?}", t0.elapsed());

    let tables = Arc::new(load_tables(std::path::Path::new("/tmp/eq3/equity.tbl")).unwrap());
    for (a, b, target) in [(1.0, 2.0, 0.15), (1.0, 4.0, 0.14), (8.0, 1.0, 0.11)] {
        let t1 = Instant::now();
        let game = FlopGame::new(GameSpec::new(a, b).unwrap(), tables.clone());
        let report = cfr::train(&game, 10_000_000, 1, None);
        let (v, _) = verify::game_value(&report.player, &report.dealer, &game);
        let expl = verify::exploitability(&report.player, &report.dealer, &game);
        let gains_p = verify::flop_player_gain(&report.dealer, &tables, &game.spec()).unwrap();
        let gains_d = verify::flop_dealer_gain(&report.player, &tables, &game.spec()).unwrap();
        let consistent = |probs: &[f64], gains: &[f64]| {
            let decisive: Vec<usize> = (0..169).filter(|&k| gains[k].abs() > 0.05).collect();
            let ok = decisive.iter().filter(|&&k| (probs[k] >= 0.5) == (gains[k] > 0.0)).count();
            (ok, decisive.len())
        };
        let (okp, np) = consistent(report.player.probs(), &gains_p);
        let (okd, nd) = consistent(report.dealer.probs(), &gains_d);
        let dealer_calls = report.dealer.probs().iter().filter(|&&q| q >= 0.5).count();
        println!(
            "({a},{b}): value={v:.4} (target {target}) expl={expl:.4} signP={okp}/{np} signD={okd}/{nd} dealer_calls={dealer_calls}/169  [{:.1?}]",
            t1.elapsed()
        );
    }
}
