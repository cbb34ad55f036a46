//! Writes a plan file, reads it back and runs it.

use rcfir::array::ArrayConfig;
use rcfir::mapping::{MappingKind, MappingPlan, TapVector};
use rcfir::report::plan_file::PlanFile;
use rcfir::sim::run_outputs;

fn main() {
    let cfg = ArrayConfig::square(8).unwrap();
    let plan = MappingPlan::build(MappingKind::Optimized, TapVector::new(vec![2, -3, 5]).unwrap(), &cfg)
        .unwrap();
    let text = PlanFile::from_plan(&plan, 10).emit();
    println!("{text}");

    let parsed = PlanFile::parse(&text).unwrap();
    assert_eq!(parsed.emit(), text);
    let restored = parsed.to_plan().unwrap();
    let outputs = run_outputs(&restored, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], 10).unwrap();
    for o in outputs.iter().filter(|o| o.value != 0) {
        println!("y{} = {}", o.event.output_index, o.value);
    }
}
