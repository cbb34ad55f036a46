//! Closed-form throughput model, measured throughput and reference FPGA data.
//!
//! Rates are exact rationals in samples per cycle. Each mapping is described
//! by how many outputs a burst yields, how many compute cycles it takes and
//! how many cycles the serial write-back of that burst costs.

use thiserror::Error;

use crate::array::{ArrayConfig, Rational};
use crate::mapping::{ExtractionEvent, MappingKind, MappingPlan, TapVector};
use crate::sim::run_outputs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PerfError {
    #[error("speedup over the basic mapping is undefined for the basic mapping itself")]
    UndefinedForBasic,
    #[error("measurement window ({warmup}, {horizon}] is empty")]
    EmptyWindow { warmup: u64, horizon: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThroughputModel {
    pub samples_per_burst: u64,
    pub compute_cycles: u64,
    pub writeback_cycles: u64,
}

impl ThroughputModel {
    pub const fn new(samples_per_burst: u64, compute_cycles: u64, writeback_cycles: u64) -> Self {
        Self {
            samples_per_burst,
            compute_cycles,
            writeback_cycles,
        }
    }

    pub fn cycles(&self, include_writeback: bool) -> u64 {
        if include_writeback {
            self.compute_cycles + self.writeback_cycles
        } else {
            self.compute_cycles
        }
    }
}

pub fn model_for(kind: MappingKind, n: usize) -> ThroughputModel {
    assert!(n >= 1, "filter order must be positive");
    let n = n as u64;
    match kind {
        MappingKind::Basic => ThroughputModel::new(n, n, 1),
        MappingKind::Optimized => ThroughputModel::new(n * n, 2 * n - 1, n),
        MappingKind::Improved => ThroughputModel::new(2, 1, 1),
    }
}

/// Samples per cycle.
pub fn rate(m: &ThroughputModel, include_writeback: bool) -> Rational {
    Rational::new(
        m.samples_per_burst as i64,
        m.cycles(include_writeback) as i64,
    )
}

pub fn speedup(kind: MappingKind, n: usize, include_writeback: bool) -> Result<Rational, PerfError> {
    if kind == MappingKind::Basic {
        return Err(PerfError::UndefinedForBasic);
    }
    Ok(rate(&model_for(kind, n), include_writeback)
        / rate(&model_for(MappingKind::Basic, n), include_writeback))
}

/// Rate in MHz (million samples per second) at `clock_mhz`.
pub fn rate_mhz(kind: MappingKind, n: usize, clock_mhz: Rational, include_writeback: bool) -> Rational {
    rate(&model_for(kind, n), include_writeback) * clock_mhz
}

/// One row of a rate comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateReport {
    pub kind: MappingKind,
    pub n: usize,
    pub model: ThroughputModel,
    pub rate_no_wb: Rational,
    pub rate_wb: Rational,
    pub mhz_wb: Rational,
    /// 1 for the basic mapping itself.
    pub speedup_vs_basic_wb: Rational,
}

impl RateReport {
    pub fn new(kind: MappingKind, n: usize, clock_mhz: Rational) -> Self {
        let model = model_for(kind, n);
        let rate_wb = rate(&model, true);
        Self {
            kind,
            n,
            model,
            rate_no_wb: rate(&model, false),
            rate_wb,
            mhz_wb: rate_wb * clock_mhz,
            speedup_vs_basic_wb: speedup(kind, n, true).unwrap_or(Rational::from_integer(1)),
        }
    }
}

/// Events per cycle over the window `(warmup, horizon]`.
pub fn measured_throughput(
    events: &[ExtractionEvent],
    warmup: u64,
    horizon: u64,
) -> Result<Rational, PerfError> {
    if horizon <= warmup {
        return Err(PerfError::EmptyWindow { warmup, horizon });
    }
    let count = events
        .iter()
        .filter(|e| e.cycle > warmup && e.cycle <= horizon)
        .count();
    Ok(Rational::new(count as i64, (horizon - warmup) as i64))
}

/// `(warmup, horizon)` skipping pipeline fill and spanning `bursts` steady bursts.
///
/// Basic skips one burst of `N` cycles; optimized skips the first block
/// including its fill cycles; improved skips `N` cycles, after which two
/// outputs complete every cycle.
pub fn steady_window(kind: MappingKind, n: usize, bursts: u64) -> (u64, u64) {
    let n = n as u64;
    let (warmup, burst) = match kind {
        MappingKind::Basic => (n, n),
        MappingKind::Optimized => (2 * n - 1, 2 * n - 1),
        MappingKind::Improved => (n, 1),
    };
    (warmup, warmup + bursts * burst)
}

/// Simulates a minimal array for `kind` and measures steady-state outputs per
/// cycle over `bursts` bursts (write-back excluded).
pub fn measure_steady_rate(kind: MappingKind, n: usize, bursts: u64) -> Rational {
    let cfg = match kind {
        MappingKind::Improved => ArrayConfig::new(n + 1, n).map(|c| c.with_diagonal(true)),
        _ => ArrayConfig::square(n),
    }
    .expect("order is positive");
    let plan = MappingPlan::build(kind, TapVector::ramp(n).expect("order is positive"), &cfg)
        .expect("array sized to the plan");
    let (warmup, horizon) = steady_window(kind, n, bursts);
    // Event timing does not depend on sample values.
    let outputs = run_outputs(&plan, &[], horizon).expect("zero input cannot overflow");
    let events: Vec<ExtractionEvent> = outputs.iter().map(|o| o.event).collect();
    measured_throughput(&events, warmup, horizon).expect("window is non-empty")
}

/// A published FPGA FIR implementation compared against the improved mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpgaDatum {
    pub filter_taps: usize,
    pub device: &'static str,
    /// Sampling rate range in MHz; `low == high` for a single figure.
    pub rate_mhz: (Rational, Rational),
    pub speedup_vs_morphosys: Rational,
    pub device_clock_mhz: Rational,
    pub morphosys_rate_mhz: Rational,
}

impl FpgaDatum {
    /// Rows an array needs to host this filter with the improved mapping.
    pub fn improved_rows_required(&self) -> usize {
        self.filter_taps + 1
    }
}

pub fn fpga_comparison() -> Vec<FpgaDatum> {
    let r = |num: i64, den: i64| Rational::new(num, den);
    let im = r(100, 1);
    vec![
        FpgaDatum {
            filter_taps: 11,
            device: "XC3195",
            rate_mhz: (r(30, 1), r(30, 1)),
            speedup_vs_morphosys: r(33, 10),
            device_clock_mhz: r(85, 1),
            morphosys_rate_mhz: im,
        },
        FpgaDatum {
            filter_taps: 11,
            device: "XC3195",
            rate_mhz: (r(333, 10), r(333, 10)),
            speedup_vs_morphosys: r(3, 1),
            device_clock_mhz: r(85, 1),
            morphosys_rate_mhz: im,
        },
        FpgaDatum {
            filter_taps: 19,
            device: "XC4020",
            rate_mhz: (r(15, 1), r(20, 1)),
            speedup_vs_morphosys: r(5, 1),
            device_clock_mhz: r(80, 1),
            morphosys_rate_mhz: im,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::CellCoord;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn models() {
        assert_eq!(model_for(MappingKind::Basic, 8), ThroughputModel::new(8, 8, 1));
        assert_eq!(
            model_for(MappingKind::Optimized, 8),
            ThroughputModel::new(64, 15, 8)
        );
        assert_eq!(model_for(MappingKind::Improved, 31), ThroughputModel::new(2, 1, 1));
        assert_eq!(rate(&model_for(MappingKind::Basic, 8), true), q(8, 9));
        assert_eq!(rate(&model_for(MappingKind::Optimized, 8), true), q(64, 23));
        assert_eq!(rate(&model_for(MappingKind::Improved, 5), true), q(1, 1));
    }

    #[test]
    fn rates_without_writeback() {
        for n in 1..20 {
            assert_eq!(rate(&model_for(MappingKind::Basic, n), false), q(1, 1));
            assert_eq!(rate(&model_for(MappingKind::Improved, n), false), q(2, 1));
        }
        assert_eq!(rate(&model_for(MappingKind::Optimized, 3), false), q(9, 5));
    }

    #[test]
    fn speedups() {
        use MappingKind::*;
        assert_eq!(speedup(Optimized, 8, true).unwrap(), q(72, 23));
        assert_eq!(speedup(Optimized, 64, true).unwrap(), q(4160, 191));
        assert_eq!(speedup(Improved, 32, true).unwrap(), q(33, 32));
        assert_eq!(speedup(Improved, 8, true).unwrap(), q(9, 8));
        assert_eq!(speedup(Improved, 8, false).unwrap(), q(2, 1));
        assert_eq!(speedup(Basic, 8, true), Err(PerfError::UndefinedForBasic));
        for n in 1..40i64 {
            let nu = n as usize;
            assert_eq!(speedup(Optimized, nu, false).unwrap(), q(n * n, 2 * n - 1));
            assert_eq!(speedup(Optimized, nu, true).unwrap(), q(n * (n + 1), 3 * n - 1));
            assert_eq!(speedup(Improved, nu, true).unwrap(), q(n + 1, n));
        }
    }

    #[test]
    fn mhz() {
        let clk = q(100, 1);
        assert_eq!(
            rate_mhz(MappingKind::Optimized, 32, clk, true),
            q(102400, 95)
        );
        assert_eq!(rate_mhz(MappingKind::Basic, 64, clk, true), q(6400, 65));
        assert_eq!(rate_mhz(MappingKind::Improved, 16, clk, true), q(100, 1));
        let r = RateReport::new(MappingKind::Optimized, 8, clk);
        assert_eq!(r.mhz_wb, r.rate_wb * clk);
        assert_eq!(
            RateReport::new(MappingKind::Basic, 8, clk).speedup_vs_basic_wb,
            q(1, 1)
        );
    }

    fn events_at(cycles: &[u64]) -> Vec<ExtractionEvent> {
        cycles
            .iter()
            .map(|&c| ExtractionEvent {
                cycle: c,
                coord: CellCoord::new(0, 0),
                output_index: 0,
            })
            .collect()
    }

    #[test]
    fn measured_window() {
        let ev = events_at(&[1, 2, 2, 3, 5]);
        assert_eq!(measured_throughput(&ev, 1, 3).unwrap(), q(3, 2));
        assert_eq!(measured_throughput(&ev, 0, 5).unwrap(), q(1, 1));
        assert_eq!(
            measured_throughput(&ev, 4, 4),
            Err(PerfError::EmptyWindow {
                warmup: 4,
                horizon: 4
            })
        );
    }

    #[test]
    fn simulated_rates_match_model() {
        for kind in MappingKind::ALL {
            for n in [1usize, 2, 5] {
                assert_eq!(
                    measure_steady_rate(kind, n, 3),
                    rate(&model_for(kind, n), false),
                    "{kind} N={n}"
                );
            }
        }
    }

    #[test]
    fn fpga_rows() {
        let rows = fpga_comparison();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].speedup_vs_morphosys, q(33, 10));
        assert!(rows.iter().all(|r| r.morphosys_rate_mhz == q(100, 1)));
        assert_eq!(rows[0].improved_rows_required(), 12);
        assert_eq!(rows[2].improved_rows_required(), 20);
    }
}
