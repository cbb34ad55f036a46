//! Synchronous cycle-by-cycle execution of a configured region.
//!
//! Every cell computes `A * w[j] + B` from the previous cycle's outputs, where
//! A is the row's operand-bus sample and B is the resolved port-B producer.
//! Each cell may also carry a symbolic term multiset so traces can be printed
//! in the `x2w0+x1w1+x0w2` cell notation.

use std::fmt;

use thiserror::Error;

use crate::array::{
    validate_assignment, ArrayConfig, CellCoord, ContextAssignment, Op, Region, Resolved,
    Violation,
};
use crate::mapping::{ExtractionEvent, MappingPlan};
use crate::reference::sample_at;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("arithmetic overflow")]
pub struct ArithmeticOverflow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("arithmetic overflow at cycle {cycle}, cell {coord}")]
    Overflow { cycle: u64, coord: CellCoord },
    #[error("bus frame for cycle {cycle} has {got} rows, region has {expected}")]
    FrameShape {
        cycle: u64,
        expected: usize,
        got: usize,
    },
    #[error("state shape does not match the region")]
    StateShape,
    #[error("cell {coord} uses weight index {index} but only {taps} taps are defined")]
    WeightIndex {
        coord: CellCoord,
        index: usize,
        taps: usize,
    },
    #[error("assignment is not executable: {}", join_violations(.0))]
    IllegalAssignment(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// One `x[sample] * w[weight]` product. Ordered by weight, then sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub weight: usize,
    pub sample: i64,
}

/// Canonically ordered multiset of product terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SymbolicValue {
    terms: Vec<Term>,
}

impl SymbolicValue {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, usize)>>(terms: I) -> Self {
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|(sample, weight)| Term { weight, sample })
            .collect();
        terms.sort_unstable();
        Self { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn with_term(&self, term: Term) -> Self {
        let mut terms = self.terms.clone();
        let at = terms.partition_point(|t| *t < term);
        terms.insert(at, term);
        Self { terms }
    }

    /// Numeric value over zero-padded samples.
    pub fn evaluate(&self, x: &[i64], w: &[i64]) -> Result<i64, ArithmeticOverflow> {
        self.terms.iter().try_fold(0i64, |acc, t| {
            sample_at(x, t.sample)
                .checked_mul(w[t.weight])
                .and_then(|p| acc.checked_add(p))
                .ok_or(ArithmeticOverflow)
        })
    }
}

impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "x{}w{}", t.sample, t.weight)?;
        }
        Ok(())
    }
}

/// `x{k}w{j}` terms joined by `+`, ascending weight; `"0"` when empty.
pub fn render_symbolic(v: &SymbolicValue) -> String {
    v.to_string()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellValue {
    pub numeric: i64,
    pub symbolic: Option<SymbolicValue>,
}

/// Cell values of the active region at the end of one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayState {
    pub cycle: u64,
    region: Region,
    cells: Vec<CellValue>,
}

impl ArrayState {
    /// Cycle-0 state: every cell holds zero.
    pub fn zero(region: Region, symbolic: bool) -> Self {
        let cell = CellValue {
            numeric: 0,
            symbolic: symbolic.then(SymbolicValue::empty),
        };
        Self {
            cycle: 0,
            region,
            cells: vec![cell; region.rows * region.cols],
        }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn is_symbolic(&self) -> bool {
        self.cells.first().is_some_and(|c| c.symbolic.is_some())
    }

    fn index(&self, coord: CellCoord) -> Option<usize> {
        self.region.contains(coord).then(|| {
            (coord.row - self.region.origin.row) * self.region.cols
                + (coord.col - self.region.origin.col)
        })
    }

    pub fn get(&self, coord: CellCoord) -> Option<&CellValue> {
        self.index(coord).map(|i| &self.cells[i])
    }

    pub fn numeric(&self, coord: CellCoord) -> i64 {
        self.get(coord).map_or(0, |c| c.numeric)
    }

    /// Cells with their coordinates, row-major.
    pub fn iter(&self) -> impl Iterator<Item = (CellCoord, &CellValue)> + '_ {
        self.region.cells().zip(self.cells.iter())
    }
}

/// Sample index carried by each region row's operand bus in one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BusFrame(pub Vec<i64>);

impl BusFrame {
    pub fn rows(&self) -> usize {
        self.0.len()
    }
}

/// Snapshots for cycles `0..=T` and the frame applied at each cycle `1..=T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<ArrayState>,
    pub frames: Vec<BusFrame>,
}

impl Trace {
    pub fn state(&self, cycle: u64) -> Option<&ArrayState> {
        self.states.get(cycle as usize)
    }

    /// Frame driven during `cycle` (1-based).
    pub fn frame(&self, cycle: u64) -> Option<&BusFrame> {
        cycle
            .checked_sub(1)
            .and_then(|i| self.frames.get(i as usize))
    }

    pub fn cycles(&self) -> u64 {
        self.frames.len() as u64
    }
}

#[derive(Debug, Clone, Copy)]
enum PortB {
    Zero,
    Cell(usize),
}

/// A validated region, assignment and weight vector, ready to step.
#[derive(Debug, Clone)]
pub struct Engine<'a> {
    region: Region,
    weights: &'a [i64],
    cells: Vec<(usize, PortB)>,
}

impl<'a> Engine<'a> {
    pub fn new(
        config: &ArrayConfig,
        region: Region,
        assignment: &ContextAssignment,
        weights: &'a [i64],
    ) -> Result<Self, SimError> {
        validate_assignment(assignment, &region, config).map_err(SimError::IllegalAssignment)?;
        let local = |c: CellCoord| {
            (c.row - region.origin.row) * region.cols + (c.col - region.origin.col)
        };
        let mut cells = Vec::with_capacity(region.rows * region.cols);
        for coord in region.cells() {
            let word = assignment.word_for(coord, &region).expect("validated");
            if word.weight_index >= weights.len() {
                return Err(SimError::WeightIndex {
                    coord,
                    index: word.weight_index,
                    taps: weights.len(),
                });
            }
            let port_b = match word.op {
                Op::Mul => PortB::Zero,
                Op::MulAdd => match crate::array::resolve_source(coord, word.src_b, config) {
                    // Cells outside the active region are idle and drive zero.
                    Ok(Resolved::Cell(src)) if region.contains(src) => PortB::Cell(local(src)),
                    Ok(_) => PortB::Zero,
                    Err(_) => unreachable!("validated"),
                },
            };
            cells.push((word.weight_index, port_b));
        }
        Ok(Self {
            region,
            weights,
            cells,
        })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Advances one cycle; all cells read the previous state simultaneously.
    pub fn step(
        &self,
        state: &ArrayState,
        frame: &BusFrame,
        x: &[i64],
    ) -> Result<ArrayState, SimError> {
        let cycle = state.cycle + 1;
        if frame.rows() != self.region.rows {
            return Err(SimError::FrameShape {
                cycle,
                expected: self.region.rows,
                got: frame.rows(),
            });
        }
        if state.region != self.region {
            return Err(SimError::StateShape);
        }
        let symbolic = state.is_symbolic();
        let cols = self.region.cols;
        let mut next = Vec::with_capacity(self.cells.len());
        for (i, &(weight, port_b)) in self.cells.iter().enumerate() {
            let sample = frame.0[i / cols];
            let coord = CellCoord::new(
                self.region.origin.row + i / cols,
                self.region.origin.col + i % cols,
            );
            let b = match port_b {
                PortB::Zero => None,
                PortB::Cell(src) => Some(&state.cells[src]),
            };
            let numeric = sample_at(x, sample)
                .checked_mul(self.weights[weight])
                .and_then(|p| p.checked_add(b.map_or(0, |c| c.numeric)))
                .ok_or(SimError::Overflow { cycle, coord })?;
            let term = Term { weight, sample };
            let symbolic = symbolic.then(|| match b.and_then(|c| c.symbolic.as_ref()) {
                Some(prev) => prev.with_term(term),
                None => SymbolicValue { terms: vec![term] },
            });
            next.push(CellValue { numeric, symbolic });
        }
        Ok(ArrayState {
            cycle,
            region: self.region,
            cells: next,
        })
    }
}

/// Single step over an explicit assignment.
pub fn step(
    state: &ArrayState,
    assignment: &ContextAssignment,
    config: &ArrayConfig,
    frame: &BusFrame,
    x: &[i64],
    w: &[i64],
) -> Result<ArrayState, SimError> {
    Engine::new(config, state.region, assignment, w)?.step(state, frame, x)
}

/// An output value harvested from the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extracted {
    pub event: ExtractionEvent,
    pub value: i64,
}

impl Extracted {
    pub fn pair(&self) -> (u64, i64) {
        (self.event.output_index, self.value)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trace: Trace,
    pub outputs: Vec<Extracted>,
}

/// Drives `plan` for `n_cycles`, recording the full trace.
pub fn run(
    plan: &MappingPlan,
    x: &[i64],
    n_cycles: u64,
    symbolic: bool,
) -> Result<RunOutput, SimError> {
    let mut states = vec![ArrayState::zero(plan.region(), symbolic)];
    let mut frames = Vec::with_capacity(n_cycles as usize);
    let outputs = drive(plan, x, n_cycles, symbolic, |frame, state| {
        frames.push(frame);
        states.push(state.clone());
    })?;
    Ok(RunOutput {
        trace: Trace { states, frames },
        outputs,
    })
}

/// Like [`run`] but keeps only the extracted outputs.
pub fn run_outputs(
    plan: &MappingPlan,
    x: &[i64],
    n_cycles: u64,
) -> Result<Vec<Extracted>, SimError> {
    drive(plan, x, n_cycles, false, |_, _| {})
}

fn drive(
    plan: &MappingPlan,
    x: &[i64],
    n_cycles: u64,
    symbolic: bool,
    mut record: impl FnMut(BusFrame, &ArrayState),
) -> Result<Vec<Extracted>, SimError> {
    let engine = Engine::new(
        plan.config(),
        plan.region(),
        plan.assignment(),
        plan.taps().weights(),
    )?;
    let mut state = ArrayState::zero(plan.region(), symbolic);
    let mut outputs = Vec::new();
    for t in 1..=n_cycles {
        let frame = plan.bus_frame(t);
        state = engine.step(&state, &frame, x)?;
        for event in plan.extraction_at(t) {
            outputs.push(Extracted {
                event,
                value: state.numeric(event.coord),
            });
        }
        record(frame, &state);
    }
    Ok(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{ContextWord, PortSource};

    #[test]
    fn render_examples() {
        assert_eq!(render_symbolic(&SymbolicValue::empty()), "0");
        assert_eq!(render_symbolic(&SymbolicValue::from_terms([(-2, 2)])), "x-2w2");
        assert_eq!(
            render_symbolic(&SymbolicValue::from_terms([(6, 2), (8, 0), (7, 1)])),
            "x8w0+x7w1+x6w2"
        );
    }

    #[test]
    fn canonical_order_breaks_ties_by_sample() {
        let v = SymbolicValue::from_terms([(5, 1), (3, 1), (9, 0)]);
        assert_eq!(v.to_string(), "x9w0+x3w1+x5w1");
    }

    #[test]
    fn evaluate_zero_pads() {
        let v = SymbolicValue::from_terms([(-1, 0), (0, 1), (5, 0)]);
        assert_eq!(v.evaluate(&[3, 4], &[10, 100]).unwrap(), 300);
    }

    fn three_tap() -> (ArrayConfig, ContextAssignment) {
        let cfg = ArrayConfig::square(3).unwrap();
        let assign = ContextAssignment::column_broadcast(vec![
            ContextWord::mul(2),
            ContextWord::mul_add(1, PortSource::WEST),
            ContextWord::mul_add(0, PortSource::WEST),
        ]);
        (cfg, assign)
    }

    #[test]
    fn first_step_from_zero_history() {
        let (cfg, assign) = three_tap();
        let region = Region::top_left(3, 3);
        let s0 = ArrayState::zero(region, true);
        let frame = BusFrame(vec![-2, -1, 0]);
        let x = [0, 0, 0];
        let s1 = step(&s0, &assign, &cfg, &frame, &x, &[1, 2, 3]).unwrap();
        for r in 0..3 {
            let cell = s1.get(CellCoord::new(r, 0)).unwrap();
            assert_eq!(cell.numeric, 0);
            assert_eq!(
                cell.symbolic.as_ref().unwrap(),
                &SymbolicValue::from_terms([(r as i64 - 2, 2)])
            );
        }
    }

    #[test]
    fn frame_shape_checked() {
        let (cfg, assign) = three_tap();
        let s0 = ArrayState::zero(Region::top_left(3, 3), false);
        let err = step(&s0, &assign, &cfg, &BusFrame(vec![0, 1]), &[1], &[1, 1, 1]);
        assert!(matches!(err, Err(SimError::FrameShape { expected: 3, got: 2, .. })));
    }

    #[test]
    fn overflow_reported_with_cell() {
        let (cfg, assign) = three_tap();
        let s0 = ArrayState::zero(Region::top_left(3, 3), false);
        let err = step(
            &s0,
            &assign,
            &cfg,
            &BusFrame(vec![0, 0, 0]),
            &[i64::MAX],
            &[1, 1, 2],
        )
        .unwrap_err();
        assert_eq!(
            err,
            SimError::Overflow {
                cycle: 1,
                coord: CellCoord::new(0, 0)
            }
        );
    }

    #[test]
    fn weight_index_bounds() {
        let (cfg, assign) = three_tap();
        let err = Engine::new(&cfg, Region::top_left(3, 3), &assign, &[1, 1]).unwrap_err();
        assert!(matches!(err, SimError::WeightIndex { index: 2, .. }));
    }

    #[test]
    fn illegal_assignment_rejected() {
        let cfg = ArrayConfig::square(3).unwrap();
        let assign = ContextAssignment::column_broadcast(vec![
            ContextWord::mul(1),
            ContextWord::mul_add(0, PortSource::SOUTH_WEST),
        ]);
        let err = Engine::new(&cfg, Region::top_left(3, 2), &assign, &[1, 1]).unwrap_err();
        assert!(matches!(err, SimError::IllegalAssignment(ref v) if v.len() == 3));
    }
}
