//! Recompute the crossover table: `cargo run --release --example calibrate_crossover > crossover.json`.

use std::collections::BTreeMap;

use motion_harmonics::spherical::{calibrate_crossover, CrossoverTable, CONSTANTS_VERSION};

fn main() {
    let base = CrossoverTable::embedded();
    let mut crossover = BTreeMap::new();
    for n in 2..=8 {
        match calibrate_crossover(n, base.tolerance, 1e9).expect("calibration") {
            Some(z) => {
                crossover.insert(n, z);
            }
            None => eprintln!("n = {n}: no crossover below 1e9"),
        }
    }
    let table = CrossoverTable {
        version: CONSTANTS_VERSION,
        crossover,
        ..base.clone()
    };
    println!("{}", table.to_json());
}
