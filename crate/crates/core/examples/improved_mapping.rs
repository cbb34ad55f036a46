//! Diagonal-link mapping: two outputs per cycle once the pipeline fills.

use rcfir::array::{ArrayConfig, CellCoord};
use rcfir::mapping::{plan_improved, TapVector};
use rcfir::sim::run;

fn main() {
    let plain = ArrayConfig::square(4).unwrap();
    match plan_improved(TapVector::ramp(3).unwrap(), &plain) {
        Ok(_) => println!("unexpected: plan accepted without diagonal link"),
        Err(e) => println!("without diagonal link: {e}"),
    }
    let eight = ArrayConfig::square(8).unwrap().with_diagonal(true);
    if let Err(e) = plan_improved(TapVector::ramp(8).unwrap(), &eight) {
        println!("8 taps on 8x8: {e}");
    }

    let cfg = ArrayConfig::square(4).unwrap().with_diagonal(true);
    let plan = plan_improved(TapVector::ramp(3).unwrap(), &cfg).unwrap();
    let x: Vec<i64> = (1..=20).collect();
    let out = run(&plan, &x, 6, true).unwrap();
    for t in 1..=6 {
        let state = out.trace.state(t).unwrap();
        let col: Vec<String> = (0..4)
            .map(|r| state.get(CellCoord::new(r, 2)).unwrap().symbolic.as_ref().unwrap().to_string())
            .collect();
        println!("{t} bus {:?}  col2 [{}]", plan.bus_frame(t).0, col.join(", "));
    }
    for o in &out.outputs {
        println!("y{} = {} (cycle {}, cell {})", o.event.output_index, o.value, o.event.cycle, o.event.coord);
    }
}
