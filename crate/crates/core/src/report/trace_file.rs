//! CSV trace: one row per active cell per cycle.
//!
//! Header `cycle,row,col,bus_index,numeric,symbolic`. Cycle 0 rows carry an
//! empty `bus_index`; `symbolic` is empty unless the run tracked terms.

use std::io::Write;

use crate::sim::Trace;

pub const HEADER: [&str; 6] = ["cycle", "row", "col", "bus_index", "numeric", "symbolic"];

pub fn write_trace<W: Write>(trace: &Trace, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for state in &trace.states {
        let frame = trace.frame(state.cycle);
        let origin = state.region().origin;
        for (coord, cell) in state.iter() {
            let bus = frame
                .map(|f| f.0[coord.row - origin.row].to_string())
                .unwrap_or_default();
            let symbolic = cell
                .symbolic
                .as_ref()
                .map(|s| s.to_string())
                .unwrap_or_default();
            w.write_record([
                state.cycle.to_string(),
                coord.row.to_string(),
                coord.col.to_string(),
                bus,
                cell.numeric.to_string(),
                symbolic,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn trace_to_string(trace: &Trace) -> String {
    let mut buf = Vec::new();
    write_trace(trace, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("csv is utf-8")
}
