use halfstreet::equity::load_tables;
use halfstreet::game::{FlopGame, GameSpec, HalfStreetGame, Role, Strategy};
use halfstreet::verify;
use std::sync::Arc;

fn main() {
    let tables = Arc::new(load_tables(std::path::Path::new("/tmp/eq3/equity.tbl")).unwrap());
    for (a, b) in [(1.0, 2.0), (1.0, 4.0), (8.0, 1.0)] {
        let spec = GameSpec::new(a, b).unwrap();
        let game = FlopGame::new(spec, tables.clone());
        let always_call = Strategy::new(vec![1.0; 169], Role::Dealer).unwrap();

        // Route 1: best response value against always-call.
        let (br, br_value) = verify::best_response(&always_call, Role::Player, &game);

        // Route 2: pure sign-of-gain player, value by zero-sum summation.
        let gains = verify::flop_player_gain(&always_call, &tables, &spec).unwrap();
        let p: Vec<f64> = gains.iter().map(|&g| if g > 0.0 { 1.0 } else { 0.0 }).collect();
        let p = Strategy::new(p, Role::Player).unwrap();
        let (v2, _) = verify::game_value(&p, &always_call, &game);

        // Route 3: gross pot-framework expectation minus P/2.
        let pot = spec.pot();
        let mut gross = 0.0;
        for i in 0..169 {
            let e_p = p.probs()[i] * gains[i]
                + pot * (tables.class_win(i) + tables.class_draw(i) / 2.0);
            gross += tables.prior(i) * e_p;
        }
        let v3 = gross - pot / 2.0;

        // And the dealer's incentive to deviate from always-call.
        let (_, br_dealer) = verify::best_response(&p, Role::Dealer, &game);
        let (_, vd) = verify::game_value(&p, &always_call, &game);

        println!(
            "({a},{b}): BR_vs_call={br_value:.4}  signpure={v2:.4}  gross-route={v3:.4}  dealer_gain_by_deviating={:.5}  br==signpure: {}",
            br_dealer - vd,
            br.probs() == p.probs()
        );
    }
}
