//! Column j may hold w_{N-1-j} or w_j. Only the first computes the filter;
//! the second is caught by comparing against direct convolution.

use rcfir::array::{ArrayConfig, ContextAssignment, ContextWord, PortSource};
use rcfir::mapping::{plan_basic, TapVector};
use rcfir::reference::fir_reference;
use rcfir::sim::run_outputs;

fn main() {
    let w = vec![1, 2, 3];
    let x: Vec<i64> = (1..=9).collect();
    let cfg = ArrayConfig::square(3).unwrap();
    let plan = plan_basic(TapVector::new(w.clone()).unwrap(), &cfg).unwrap();
    let swapped = plan
        .clone()
        .with_assignment(ContextAssignment::column_broadcast(vec![
            ContextWord::mul(0),
            ContextWord::mul_add(1, PortSource::WEST),
            ContextWord::mul_add(2, PortSource::WEST),
        ]))
        .unwrap();

    let reference = fir_reference(&x, &w, 12).unwrap();
    for (name, p) in [("w_{N-1-j}", &plan), ("w_j", &swapped)] {
        let outputs = run_outputs(p, &x, 12).unwrap();
        let got: Vec<i64> = outputs.iter().map(|o| o.value).collect();
        let verdict = match outputs.iter().find(|o| o.value != reference[o.event.output_index as usize]) {
            None => "matches".to_string(),
            Some(o) => format!(
                "first mismatch y{}: expected {}, got {}",
                o.event.output_index, reference[o.event.output_index as usize], o.value
            ),
        };
        println!("{name:<10} {got:?}  {verdict}");
    }
}
