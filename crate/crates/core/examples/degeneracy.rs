//! The degeneracy map of a rank-one block model: the block formula, the
//! Ihara defect and the congruence module.

use amfcong::cosetmodel::toy::ribet_model;
use amfcong::cosetmodel::ValidatedModel;
use amfcong::exactalg::valuation;
use amfcong::levelraise::{block_formula, build_degeneracy, error_constant, ihara_defect, model_congruence_module};

fn main() {
    let (q, x) = (7, 5);
    let model = ValidatedModel::new(ribet_model(q, x).unwrap()).unwrap();
    let deg = build_degeneracy(&model).unwrap();
    println!("delta^v delta = {:?}", deg.delta_gram.to_integer().unwrap().to_rows());
    println!("block formula agrees: {}", block_formula(&model) == deg.delta_gram);
    println!("Ihara defect: {:?}", ihara_defect(&model));

    let module = model_congruence_module(&model, &deg).unwrap();
    let e = error_constant(&model);
    println!("congruence module invariants: {:?} (E = {})", module, e.e);
    for ell in [2, 3, 5] {
        let len: u32 = module.iter().filter(|f| **f != 0.into()).map(|f| valuation(f, ell).unwrap()).sum();
        println!("  ell = {ell}: length {len}");
    }
}
