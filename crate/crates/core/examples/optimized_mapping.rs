//! Reordered-input mapping for 3 taps: the bus schedule, the symbolic value of
//! the output column and the outputs produced in the first 15 cycles.

use rcfir::array::{ArrayConfig, CellCoord};
use rcfir::mapping::{om_input_order, plan_optimized, TapVector};
use rcfir::sim::run;

fn main() {
    let plan =
        plan_optimized(TapVector::ramp(3).unwrap(), &ArrayConfig::square(3).unwrap()).unwrap();
    println!("row 0 input order: {:?}", om_input_order(15, 3));

    let x: Vec<i64> = (1..=40).collect();
    let out = run(&plan, &x, 15, true).unwrap();
    for t in 1..=15 {
        let state = out.trace.state(t).unwrap();
        let last: Vec<String> = (0..3)
            .map(|r| state.get(CellCoord::new(r, 2)).unwrap().symbolic.as_ref().unwrap().to_string())
            .collect();
        let done: Vec<String> = plan
            .extraction_at(t)
            .iter()
            .map(|e| format!("y{}", e.output_index))
            .collect();
        println!("{t:>2} bus {:?}  col2 [{}]  done {}", plan.bus_frame(t).0, last.join(", "), done.join(" "));
    }

    let mut idx: Vec<u64> = out.outputs.iter().map(|o| o.event.output_index).collect();
    idx.sort_unstable();
    println!("{} outputs in 15 cycles: y{}..y{}", idx.len(), idx[0], idx[idx.len() - 1]);
}
