//! Rate and speedup tables, the OM speedup curve, and batch sweeps.
//!
//! Each table keeps the precision of its published counterpart: basic-mapping
//! MHz to two decimals, optimized-mapping MHz to one, OM speedups to two, and
//! IM speedups truncated to three.

use rayon::prelude::*;

use crate::array::Rational;
use crate::mapping::MappingKind;
use crate::perf::{fpga_comparison, measure_steady_rate, model_for, rate_mhz, speedup, RateReport};

use super::{format_decimal, format_printed, format_ratio, Rounding};

pub const DEFAULT_ORDERS: [usize; 4] = [8, 16, 32, 64];

/// Steady bursts simulated for measured columns.
pub const MEASURE_BURSTS: u64 = 3;

/// Printed improved-over-basic speedups, checked against `(N+1)/N`.
const PUBLISHED_IM_SPEEDUP: [(usize, &str); 4] =
    [(8, "1.24"), (16, "1.062"), (32, "1.031"), (64, "1.015")];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    fn new(title: impl Into<String>, header: &[&str]) -> Self {
        Self {
            title: title.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Cell at `row`, in the column named `column`.
    pub fn cell(&self, row: usize, column: &str) -> Option<&str> {
        let col = self.header.iter().position(|h| h == column)?;
        self.rows.get(row)?.get(col).map(String::as_str)
    }

    /// Left-aligned columns separated by two spaces.
    pub fn render_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                s.push_str(&format!("{cell:<w$}"));
            }
            s.trim_end().to_string()
        };
        let mut out = format!("{}\n", self.title);
        out.push_str(&line(&self.header));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableOptions {
    pub orders: Vec<usize>,
    pub clock_mhz: Rational,
    pub measure: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            orders: DEFAULT_ORDERS.to_vec(),
            clock_mhz: Rational::from_integer(100),
            measure: false,
        }
    }
}

fn filter_label(n: usize) -> String {
    format!("{n}-tap FIR")
}

fn measured(pairs: &[(MappingKind, usize)]) -> Vec<Rational> {
    pairs
        .par_iter()
        .map(|&(kind, n)| measure_steady_rate(kind, n, MEASURE_BURSTS))
        .collect()
}

/// Rate table comparing the basic mapping against `other` (tables 1 and 4).
fn rate_table(other: MappingKind, opts: &TableOptions) -> Table {
    let clock = format_printed(opts.clock_mhz, 2, Rounding::HalfUp);
    let (title, samples_hdr, cycles_hdr) = match other {
        MappingKind::Optimized => (
            format!("Table 1. Rates (MHz) of BM and OM at {clock} MHz, write-back included"),
            "OM Samples (N^2)",
            "OM Cycles (3N-1)",
        ),
        _ => (
            format!("Table 4. Rates (MHz) of BM and IM at {clock} MHz, write-back included"),
            "IM Samples",
            "IM Cycles",
        ),
    };
    let other_mhz = format!("{} MHz", other.abbrev());
    let mut header = vec![
        "Filter",
        "BM Samples (N)",
        "BM Cycles (N+1)",
        "BM MHz",
        samples_hdr,
        cycles_hdr,
        other_mhz.as_str(),
    ];
    let measured_hdr = [
        "BM measured (samples/cycle, no wb)".to_string(),
        format!("{} measured (samples/cycle, no wb)", other.abbrev()),
    ];
    if opts.measure {
        header.extend(measured_hdr.iter().map(String::as_str));
    }
    let mut table = Table::new(title, &header);
    let pairs: Vec<_> = opts
        .orders
        .iter()
        .flat_map(|&n| [(MappingKind::Basic, n), (other, n)])
        .collect();
    let measured = if opts.measure { measured(&pairs) } else { Vec::new() };
    // Optimized MHz figures carry one decimal; the rest two.
    let other_places = if other == MappingKind::Optimized { 1 } else { 2 };
    for (i, &n) in opts.orders.iter().enumerate() {
        let bm = model_for(MappingKind::Basic, n);
        let om = model_for(other, n);
        let mut row = vec![
            filter_label(n),
            bm.samples_per_burst.to_string(),
            bm.cycles(true).to_string(),
            format_printed(rate_mhz(MappingKind::Basic, n, opts.clock_mhz, true), 2, Rounding::HalfUp),
            om.samples_per_burst.to_string(),
            om.cycles(true).to_string(),
            format_printed(
                rate_mhz(other, n, opts.clock_mhz, true),
                other_places,
                Rounding::HalfUp,
            ),
        ];
        if opts.measure {
            row.push(format_ratio(measured[2 * i]));
            row.push(format_ratio(measured[2 * i + 1]));
        }
        table.rows.push(row);
    }
    table
}

/// Speedup table over the basic mapping (tables 3 and 6).
fn speedup_table(other: MappingKind, opts: &TableOptions) -> Table {
    let (title, places, mode) = match other {
        MappingKind::Optimized => ("Table 3. Speedup of OM over BM, write-back included", 2, Rounding::HalfUp),
        _ => ("Table 6. Speedup of IM over BM, write-back included", 3, Rounding::Truncate),
    };
    let mut header = vec!["Filter", "Speedup Factor"];
    if other == MappingKind::Improved {
        header.push("Note");
    }
    if opts.measure {
        header.push("Measured speedup (no wb)");
    }
    let mut table = Table::new(title, &header);
    let pairs: Vec<_> = opts
        .orders
        .iter()
        .flat_map(|&n| [(MappingKind::Basic, n), (other, n)])
        .collect();
    let measured = if opts.measure { measured(&pairs) } else { Vec::new() };
    for (i, &n) in opts.orders.iter().enumerate() {
        let s = speedup(other, n, true).expect("not basic");
        let shown = format_decimal(s, places, mode);
        let mut row = vec![filter_label(n), shown.clone()];
        if other == MappingKind::Improved {
            let note = PUBLISHED_IM_SPEEDUP
                .iter()
                .find(|(order, printed)| *order == n && *printed != shown)
                .map(|(_, printed)| {
                    format!(
                        "published table lists {printed}; (N+1)/N = {} = {shown}",
                        format_ratio(s)
                    )
                })
                .unwrap_or_default();
            row.push(note);
        }
        if opts.measure {
            row.push(format_ratio(measured[2 * i + 1] / measured[2 * i]));
        }
        table.rows.push(row);
    }
    table
}

fn formula_table(other: MappingKind) -> Table {
    let (title, other_hdr, speed_hdr, no_wb, wb) = match other {
        MappingKind::Optimized => (
            "Table 2. Rates for BM and OM and speedup of OM over BM",
            "Optimized Mapping Rate",
            "Speedup of OM over BM",
            ["N/N", "N^2/(2N-1)", "N^2/(2N-1)"],
            ["N/(N+1)", "N^2/(3N-1)", "N(N+1)/(3N-1)"],
        ),
        _ => (
            "Table 5. Rates for BM and IM and speedup of IM over BM",
            "Improved Mapping Rate",
            "Speedup of IM over BM",
            ["N/N = 1", "2N/N = 2", "2"],
            ["N/(N+1)", "2N/2N = 1", "(N+1)/N"],
        ),
    };
    let mut table = Table::new(title, &["", "Basic Mapping Rate", other_hdr, speed_hdr]);
    for (label, cells) in [
        ("Without considering write back", no_wb),
        ("With considering write back", wb),
    ] {
        let mut row = vec![label.to_string()];
        row.extend(cells.iter().map(|c| c.to_string()));
        table.rows.push(row);
    }
    table
}

fn fpga_table() -> Table {
    let mut table = Table::new(
        "Table 7. Improved mapping compared with FPGA FIR implementations",
        &[
            "Filter Type",
            "MorphoSys (Improved Mapping)",
            "FPGAs (Xilinx)",
            "Speedup",
            "FPGA clock",
            "IM rows required",
        ],
    );
    let mhz = |r: Rational| format_printed(r, 1, Rounding::HalfUp);
    for d in fpga_comparison() {
        let (lo, hi) = d.rate_mhz;
        let rate = if lo == hi {
            mhz(lo)
        } else {
            format!("{}-{}", mhz(lo), mhz(hi))
        };
        table.rows.push(vec![
            format!("{}-tap FIR filter", d.filter_taps),
            format!("{} MHz", mhz(d.morphosys_rate_mhz)),
            format!("{rate} MHz ({})", d.device),
            mhz(d.speedup_vs_morphosys),
            format!("{} MHz", mhz(d.device_clock_mhz)),
            format!(">= {}", d.improved_rows_required()),
        ]);
    }
    table.notes.push(
        "an N-tap improved mapping needs N+1 rows, so these filters exceed an 8x8 array".into(),
    );
    table
}

/// Table `id` in `1..=7`.
pub fn table(id: u8, opts: &TableOptions) -> Option<Table> {
    Some(match id {
        1 => rate_table(MappingKind::Optimized, opts),
        2 => formula_table(MappingKind::Optimized),
        3 => speedup_table(MappingKind::Optimized, opts),
        4 => rate_table(MappingKind::Improved, opts),
        5 => formula_table(MappingKind::Improved),
        6 => speedup_table(MappingKind::Improved, opts),
        7 => fpga_table(),
        _ => return None,
    })
}

/// `(N, N^2/(2N-1))` points of the optimized speedup curve, as CSV.
pub fn fig6_csv(orders: &[usize]) -> String {
    let mut out = String::from("n,speedup,speedup_decimal\n");
    for &n in orders {
        let s = speedup(MappingKind::Optimized, n, false).expect("not basic");
        out.push_str(&format!(
            "{n},{},{}\n",
            format_ratio(s),
            format_decimal(s, 4, Rounding::HalfUp)
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub report: RateReport,
    pub measured_no_wb: Option<Rational>,
}

/// One row per `(kind, N)`; measured rates are simulated in parallel.
pub fn sweep(
    orders: &[usize],
    kinds: &[MappingKind],
    clock_mhz: Rational,
    measure: bool,
) -> Vec<SweepRow> {
    let pairs: Vec<(MappingKind, usize)> = kinds
        .iter()
        .flat_map(|&k| orders.iter().map(move |&n| (k, n)))
        .collect();
    pairs
        .par_iter()
        .map(|&(kind, n)| SweepRow {
            report: RateReport::new(kind, n, clock_mhz),
            measured_no_wb: measure.then(|| measure_steady_rate(kind, n, MEASURE_BURSTS)),
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let measure = rows.iter().any(|r| r.measured_no_wb.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "kind",
        "n",
        "samples_per_burst",
        "compute_cycles",
        "writeback_cycles",
        "rate_no_wb",
        "rate_wb",
        "mhz_wb",
        "speedup_vs_basic_wb",
    ];
    if measure {
        header.push("measured_no_wb");
    }
    w.write_record(&header).expect("in-memory write");
    for row in rows {
        let r = &row.report;
        let mut rec = vec![
            r.kind.name().to_string(),
            r.n.to_string(),
            r.model.samples_per_burst.to_string(),
            r.model.compute_cycles.to_string(),
            r.model.writeback_cycles.to_string(),
            format_ratio(r.rate_no_wb),
            format_ratio(r.rate_wb),
            format_printed(r.mhz_wb, 2, Rounding::HalfUp),
            format_ratio(r.speedup_vs_basic_wb),
        ];
        if measure {
            rec.push(row.measured_no_wb.map(format_ratio).unwrap_or_default());
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
