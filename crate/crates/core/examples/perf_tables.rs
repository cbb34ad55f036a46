//! Prints the rate and speedup tables and a measured-rate sweep.

use rcfir::array::Rational;
use rcfir::mapping::MappingKind;
use rcfir::report::tables::{sweep, sweep_csv, table, TableOptions};

fn main() {
    let opts = TableOptions::default();
    for id in 1..=7 {
        if let Some(t) = table(id, &opts) {
            println!("{}", t.render_text());
        }
    }
    let rows = sweep(&[2, 3, 4, 8], &MappingKind::ALL, Rational::from_integer(100), true);
    print!("{}", sweep_csv(&rows));
}
