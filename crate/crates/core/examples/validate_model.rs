//! Validate toy models, then break one and read the witnesses.

use amfcong::cosetmodel::document::{parse_model, ModelDocument};
use amfcong::cosetmodel::toy::{flag_model, group_model, tiny_model};
use amfcong::cosetmodel::{validate, Level, ValidatedModel};

fn main() {
    println!("tiny: {}", validate(&tiny_model()));

    let flag = group_model(&flag_model(5)).unwrap();
    let vm = ValidatedModel::new(flag.clone()).unwrap();
    println!("flag S5: {}", validate(&flag));
    println!("  |X_K| = {}, |X_K'| = {}, |X_J| = {}", vm.size(Level::K), vm.size(Level::Kp), vm.size(Level::J));
    println!("  classes: {}", vm.class_partition().num_classes());
    let ann = vm.annihilators(Level::J);
    println!("  annihilators at J: A = {}, B = {}", ann.a_min, ann.b_min);

    // double one K-weight in the serialized form
    let mut doc: serde_json::Value = serde_json::from_str(&ModelDocument::from_model(&flag).to_json_pretty()).unwrap();
    let first = doc["x_k"][0].as_str().unwrap().to_string();
    doc["w_k"][&first] = serde_json::json!("2");
    let broken = parse_model(&doc.to_string()).unwrap();
    let report = validate(&broken);
    for f in &report.failures {
        println!("  [{:?}] {}", f.invariant, f.witness);
    }
}
