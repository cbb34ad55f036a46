//! Symbolic trace of the basic mapping for a 3-tap filter on a 3x3 array.

use rcfir::array::{ArrayConfig, CellCoord};
use rcfir::mapping::{plan_basic, TapVector};
use rcfir::sim::run;

fn main() {
    let plan = plan_basic(TapVector::ramp(3).unwrap(), &ArrayConfig::square(3).unwrap()).unwrap();
    let x: Vec<i64> = (1..=12).collect();
    let out = run(&plan, &x, 6, true).unwrap();

    for t in 1..=6 {
        let state = out.trace.state(t).unwrap();
        println!("cycle {t}  bus {:?}", plan.bus_frame(t).0);
        for r in 0..3 {
            let row: Vec<String> = (0..3)
                .map(|c| {
                    let cell = state.get(CellCoord::new(r, c)).unwrap();
                    format!("{:>20}", cell.symbolic.as_ref().unwrap().to_string())
                })
                .collect();
            println!("  {}", row.join(""));
        }
    }

    println!("outputs:");
    for o in &out.outputs {
        println!("  y{} = {} at cycle {}, cell {}", o.event.output_index, o.value, o.event.cycle, o.event.coord);
    }
}
