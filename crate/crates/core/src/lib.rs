//! Cycle-accurate simulator for a reconfigurable cell array running FIR
//! filter mappings, with an exact throughput model.
//!
//! * [`array`]: geometry, interconnect reachability, context words, legality.
//! * [`sim`]: synchronous cycle stepping with numeric and symbolic traces.
//! * [`mapping`]: basic, optimized and improved (diagonal) FIR plans.
//! * [`reference`]: direct-form convolution oracle.
//! * [`perf`]: closed-form and measured throughput, speedup, FPGA data.
//! * [`report`]: plan/trace files, rate tables and the command-line front end.
//!
//! ```
//! use rcfir::array::ArrayConfig;
//! use rcfir::mapping::{plan_improved, TapVector};
//! use rcfir::reference::fir_reference;
//! use rcfir::sim::run_outputs;
//!
//! let cfg = ArrayConfig::square(4).unwrap().with_diagonal(true);
//! let plan = plan_improved(TapVector::new(vec![2, -1, 3]).unwrap(), &cfg).unwrap();
//! let x = [4, 1, -5, 7, 2, 0, 3, 8];
//! let outputs = run_outputs(&plan, &x, 5).unwrap();
//! let expected = fir_reference(&x, plan.taps().weights(), 8).unwrap();
//! for out in &outputs {
//!     assert_eq!(out.value, expected[out.event.output_index as usize]);
//! }
//! ```

pub mod array;
pub mod mapping;
pub mod perf;
pub mod reference;
pub mod report;
pub mod sim;
