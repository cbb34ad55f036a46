//! Runs every mapping on random data and compares against direct convolution.

use rcfir::array::ArrayConfig;
use rcfir::mapping::{MappingKind, MappingPlan, TapVector};
use rcfir::reference::fir_reference;
use rcfir::report::cli::random_input;
use rcfir::sim::run_outputs;

fn main() {
    let weights = vec![3, -1, 4, 1, -5, 9, 2];
    let x = random_input(200, 7);
    let n = weights.len();
    let count = (x.len() + n - 1) as u64;
    let reference = fir_reference(&x, &weights, count as usize + 2 * n * n).unwrap();

    for kind in MappingKind::ALL {
        let cfg = ArrayConfig::square(8).unwrap().with_diagonal(true);
        let plan = MappingPlan::build(kind, TapVector::new(weights.clone()).unwrap(), &cfg).unwrap();
        let horizon = plan.horizon_covering(count);
        let outputs = run_outputs(&plan, &x, horizon).unwrap();
        let bad = outputs
            .iter()
            .filter(|o| o.value != reference[o.event.output_index as usize])
            .count();
        println!(
            "{:<9} {} outputs over {horizon} cycles, {bad} mismatches",
            kind.name(),
            outputs.len()
        );
    }
}
