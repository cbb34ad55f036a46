//! Plan generators for the three FIR mappings.
//!
//! All three share the column layout: column 0 multiplies the bus sample by
//! the highest tap `w[N-1]`, and column `j` multiplies by `w[N-1-j]` and adds
//! its port-B neighbor, so the last active column accumulates a full output.
//!
//! * Basic: port B reads the western neighbor; the bus feeds consecutive
//!   samples down the rows and a column of `N` outputs is harvested every
//!   `N` cycles.
//! * Optimized: same configuration, but the bus stream is reordered into
//!   blocks of `2N-1` cycles whose rows are `N` samples apart. The last `N`
//!   cycles of each block yield `N*N` distinct outputs.
//! * Improved: port B reads the lower-left neighbor (diagonal link). Rows are
//!   fed consecutive samples advancing by two per cycle, and rows 0 and 1 of
//!   the last column hold two finished outputs every cycle. Needs `N+1` rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{
    validate_assignment, ArrayConfig, CellCoord, ContextAssignment, ContextWord, PortSource,
    Region, Violation,
};
use crate::perf::{model_for, ThroughputModel};
use crate::sim::BusFrame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MappingKind {
    Basic,
    Optimized,
    Improved,
}

impl MappingKind {
    pub const ALL: [MappingKind; 3] = [Self::Basic, Self::Optimized, Self::Improved];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Basic => "basic",
            Self::Optimized => "optimized",
            Self::Improved => "improved",
        }
    }

    pub fn abbrev(&self) -> &'static str {
        match self {
            Self::Basic => "BM",
            Self::Optimized => "OM",
            Self::Improved => "IM",
        }
    }
}

impl fmt::Display for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MappingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "basic" | "bm" => Ok(Self::Basic),
            "optimized" | "om" => Ok(Self::Optimized),
            "improved" | "im" => Ok(Self::Improved),
            other => Err(format!("unknown mapping '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("a filter needs at least one tap")]
    EmptyTaps,
    #[error("the improved mapping reads port B from the lower-left cell; enable the diagonal link")]
    DiagonalRequired,
    #[error("{}", region_message(*.kind, *.taps, *.rows, *.cols))]
    RegionTooSmall {
        kind: MappingKind,
        taps: usize,
        rows: usize,
        cols: usize,
    },
    #[error("plan fails legality: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Illegal(Vec<Violation>),
}

fn region_message(kind: MappingKind, taps: usize, rows: usize, cols: usize) -> String {
    match kind {
        MappingKind::Improved => format!(
            "{taps}-tap improved mapping needs {} rows and {taps} columns, array is {rows}x{cols}; \
             the filter order must be less than the row count, so {rows} rows fit at most {} taps",
            taps + 1,
            rows.saturating_sub(1)
        ),
        _ => format!(
            "{taps}-tap {kind} mapping needs a {taps}x{taps} region, array is {rows}x{cols}"
        ),
    }
}

/// Tap weights `w[0..N]`; `N >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TapVector(Vec<i64>);

impl TapVector {
    pub fn new(weights: Vec<i64>) -> Result<Self, PlanError> {
        if weights.is_empty() {
            return Err(PlanError::EmptyTaps);
        }
        Ok(Self(weights))
    }

    /// `w[j] = j + 1`.
    pub fn ramp(n: usize) -> Result<Self, PlanError> {
        Self::new((1..=n as i64).collect())
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }
}

/// Output `y[output_index]` is complete in `coord` at the end of `cycle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtractionEvent {
    pub cycle: u64,
    pub coord: CellCoord,
    pub output_index: u64,
}

/// An executable mapping: assignment plus bus and extraction schedules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingPlan {
    kind: MappingKind,
    taps: TapVector,
    config: ArrayConfig,
    region: Region,
    assignment: ContextAssignment,
}

/// Column words shared by all mappings, with port B chained through `link`.
fn fir_assignment(n: usize, link: PortSource) -> ContextAssignment {
    let mut words = Vec::with_capacity(n);
    words.push(ContextWord::mul(n - 1));
    words.extend((1..n).map(|j| ContextWord::mul_add(n - 1 - j, link)));
    ContextAssignment::column_broadcast(words)
}

pub fn plan_basic(taps: TapVector, cfg: &ArrayConfig) -> Result<MappingPlan, PlanError> {
    MappingPlan::build(MappingKind::Basic, taps, cfg)
}

pub fn plan_optimized(taps: TapVector, cfg: &ArrayConfig) -> Result<MappingPlan, PlanError> {
    MappingPlan::build(MappingKind::Optimized, taps, cfg)
}

pub fn plan_improved(taps: TapVector, cfg: &ArrayConfig) -> Result<MappingPlan, PlanError> {
    MappingPlan::build(MappingKind::Improved, taps, cfg)
}

/// Bus sample index of the optimized stream at `row`, cycle `t >= 1`.
fn optimized_bus(row: i64, t: u64, n: i64) -> i64 {
    let block_len = (2 * n - 1) as u64;
    let block = ((t - 1) / block_len) as i64;
    let c = ((t - 1) % block_len) as i64 + 1;
    block * n * n + (c - 1) + row * n
}

/// Optimized-mapping input stream, flattened row-major per cycle.
pub fn om_input_order(length: usize, n: usize) -> Vec<i64> {
    assert!(n >= 1, "filter order must be positive");
    (1u64..)
        .flat_map(|t| (0..n as i64).map(move |r| optimized_bus(r, t, n as i64)))
        .take(length)
        .collect()
}

impl MappingPlan {
    pub fn build(
        kind: MappingKind,
        taps: TapVector,
        cfg: &ArrayConfig,
    ) -> Result<Self, PlanError> {
        let n = taps.order();
        let (need_rows, link) = match kind {
            MappingKind::Basic | MappingKind::Optimized => (n, PortSource::WEST),
            MappingKind::Improved => {
                if !cfg.diagonal_enabled() {
                    return Err(PlanError::DiagonalRequired);
                }
                (n + 1, PortSource::SOUTH_WEST)
            }
        };
        if cfg.rows() < need_rows || cfg.cols() < n {
            return Err(PlanError::RegionTooSmall {
                kind,
                taps: n,
                rows: cfg.rows(),
                cols: cfg.cols(),
            });
        }
        let plan = Self {
            kind,
            taps,
            config: cfg.clone(),
            region: Region::top_left(need_rows, n),
            assignment: fir_assignment(n, link),
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Same schedules over a replacement assignment.
    pub fn with_assignment(mut self, assignment: ContextAssignment) -> Result<Self, PlanError> {
        self.assignment = assignment;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), PlanError> {
        validate_assignment(&self.assignment, &self.region, &self.config).map_err(PlanError::Illegal)
    }

    pub fn kind(&self) -> MappingKind {
        self.kind
    }

    pub fn taps(&self) -> &TapVector {
        &self.taps
    }

    pub fn order(&self) -> usize {
        self.taps.order()
    }

    pub fn config(&self) -> &ArrayConfig {
        &self.config
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn assignment(&self) -> &ContextAssignment {
        &self.assignment
    }

    pub fn throughput(&self) -> ThroughputModel {
        model_for(self.kind, self.order())
    }

    fn last_col(&self) -> usize {
        self.region.origin.col + self.region.cols - 1
    }

    /// Sample indices on each region row's bus during cycle `t >= 1`.
    pub fn bus_frame(&self, t: u64) -> BusFrame {
        let n = self.order() as i64;
        let ti = t as i64;
        BusFrame(
            (0..self.region.rows as i64)
                .map(|r| match self.kind {
                    MappingKind::Basic => ti - n + r,
                    MappingKind::Optimized => optimized_bus(r, t, n),
                    MappingKind::Improved => 2 * (ti - 1) + r - (n - 1),
                })
                .collect(),
        )
    }

    /// Frames for cycles `1..=horizon`.
    pub fn bus_schedule(&self, horizon: u64) -> Vec<BusFrame> {
        (1..=horizon).map(|t| self.bus_frame(t)).collect()
    }

    /// Outputs finished at the end of cycle `t`, in row order.
    pub fn extraction_at(&self, t: u64) -> Vec<ExtractionEvent> {
        if t == 0 {
            return Vec::new();
        }
        let n = self.order() as u64;
        let col = self.last_col();
        let row0 = self.region.origin.row;
        let event = |r: u64, k: u64| ExtractionEvent {
            cycle: t,
            coord: CellCoord::new(row0 + r as usize, col),
            output_index: k,
        };
        match self.kind {
            MappingKind::Basic => {
                if t.is_multiple_of(n) {
                    (0..n).map(|r| event(r, t - n + r)).collect()
                } else {
                    Vec::new()
                }
            }
            MappingKind::Optimized => {
                let block_len = 2 * n - 1;
                let block = (t - 1) / block_len;
                let c = (t - 1) % block_len + 1;
                if c >= n {
                    (0..n)
                        .map(|r| event(r, block * n * n + (c - 1) + r * n))
                        .collect()
                } else if block == 0 {
                    // Fill cycles of the first block: zero history completes row 0.
                    vec![event(0, c - 1)]
                } else {
                    Vec::new()
                }
            }
            MappingKind::Improved => (0..2u64)
                .filter_map(|r| {
                    let k = 2 * (t as i64 - 1) + r as i64 - (n as i64 - 1);
                    (k >= 0).then(|| event(r, k as u64))
                })
                .collect(),
        }
    }

    /// Extraction events for cycles `1..=horizon`, in (cycle, row) order.
    pub fn extraction(&self, horizon: u64) -> Vec<ExtractionEvent> {
        (1..=horizon).flat_map(|t| self.extraction_at(t)).collect()
    }

    /// Shortest horizon whose extraction covers every output index below `count`.
    pub fn horizon_covering(&self, count: u64) -> u64 {
        if count == 0 {
            return 0;
        }
        let n = self.order() as u64;
        let k = count - 1;
        match self.kind {
            MappingKind::Basic => n * count.div_ceil(n),
            MappingKind::Optimized => {
                if k + 2 <= n {
                    k + 1
                } else {
                    // Steady index k = block*N^2 + (N-1) + (c-N) + r*N.
                    let steady = k + 1 - n;
                    let block = steady / (n * n);
                    let offset = steady % (n * n);
                    block * (2 * n - 1) + n + offset.min(n - 1)
                }
            }
            MappingKind::Improved => (k + n - 1) / 2 + 1,
        }
    }

    /// True when the whole tap window of `y[k]` lies past the input.
    pub fn is_tail(&self, output_index: u64, input_len: usize) -> bool {
        output_index + 1 >= self.order() as u64 + input_len as u64
    }
}
