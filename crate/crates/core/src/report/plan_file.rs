//! JSON plan documents: a mapping plus its schedules materialized to a horizon.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::array::{ArrayConfig, ArrayError, CellCoord, ContextAssignment, ContextWord, Rational};
use crate::mapping::{ExtractionEvent, MappingKind, MappingPlan, PlanError, TapVector};

use super::{format_ratio, parse_rational};

#[derive(Debug, Error)]
pub enum PlanFileError {
    #[error("malformed plan file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid array: {0}")]
    Array(#[from] ArrayError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("materialized {what} at cycle {cycle} differs from the {kind} schedule")]
    ScheduleMismatch {
        what: &'static str,
        kind: MappingKind,
        cycle: u64,
    },
    #[error("plan lists {got} materialized {what}, horizon {horizon} implies {expected}")]
    ScheduleLength {
        what: &'static str,
        horizon: u64,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub rows: usize,
    pub cols: usize,
    pub quadrant: usize,
    pub diagonal: bool,
    #[serde(serialize_with = "clock_out", deserialize_with = "clock_in")]
    pub clock_mhz: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventRecord {
    pub cycle: u64,
    pub row: usize,
    pub col: usize,
    pub output_index: u64,
}

impl From<ExtractionEvent> for EventRecord {
    fn from(e: ExtractionEvent) -> Self {
        Self {
            cycle: e.cycle,
            row: e.coord.row,
            col: e.coord.col,
            output_index: e.output_index,
        }
    }
}

impl From<EventRecord> for ExtractionEvent {
    fn from(r: EventRecord) -> Self {
        Self {
            cycle: r.cycle,
            coord: CellCoord::new(r.row, r.col),
            output_index: r.output_index,
        }
    }
}

/// On-disk plan. `bus_frames[i]` is the frame of cycle `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub kind: MappingKind,
    pub taps: Vec<i64>,
    pub array: ArraySection,
    pub assignment: Vec<ContextWord>,
    pub horizon: u64,
    pub bus_frames: Vec<Vec<i64>>,
    pub extraction: Vec<EventRecord>,
}

// Integral clocks are plain JSON numbers; others are "p/q" strings.
fn clock_out<S: Serializer>(clock: &Rational, s: S) -> Result<S::Ok, S::Error> {
    if clock.is_integer() {
        s.serialize_i64(clock.to_integer())
    } else {
        s.serialize_str(&format_ratio(*clock))
    }
}

fn clock_in<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let text = match serde_json::Value::deserialize(d)? {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s,
        other => {
            return Err(serde::de::Error::custom(format!(
                "clock_mhz must be a number or \"p/q\" string, got {other}"
            )))
        }
    };
    parse_rational(&text).map_err(serde::de::Error::custom)
}

impl PlanFile {
    pub fn from_plan(plan: &MappingPlan, horizon: u64) -> Self {
        let cfg = plan.config();
        Self {
            kind: plan.kind(),
            taps: plan.taps().weights().to_vec(),
            array: ArraySection {
                rows: cfg.rows(),
                cols: cfg.cols(),
                quadrant: cfg.quadrant_size(),
                diagonal: cfg.diagonal_enabled(),
                clock_mhz: cfg.clock_mhz(),
            },
            assignment: plan.assignment().words.clone(),
            horizon,
            bus_frames: plan.bus_schedule(horizon).into_iter().map(|f| f.0).collect(),
            extraction: plan.extraction(horizon).into_iter().map(Into::into).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, PlanFileError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with a trailing newline.
    pub fn emit(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plan serializes");
        out.push('\n');
        out
    }

    pub fn config(&self) -> Result<ArrayConfig, PlanFileError> {
        Ok(ArrayConfig::new(self.array.rows, self.array.cols)?
            .with_diagonal(self.array.diagonal)
            .with_quadrant(self.array.quadrant)?
            .with_clock_mhz(self.array.clock_mhz)?)
    }

    /// Rebuilds the executable plan, honoring the stored assignment.
    ///
    /// Fails if the assignment is illegal or the materialized schedules
    /// disagree with the mapping's own.
    pub fn to_plan(&self) -> Result<MappingPlan, PlanFileError> {
        let cfg = self.config()?;
        let taps = TapVector::new(self.taps.clone())?;
        let plan = MappingPlan::build(self.kind, taps, &cfg)?
            .with_assignment(ContextAssignment::column_broadcast(self.assignment.clone()))?;
        if self.bus_frames.len() as u64 != self.horizon {
            return Err(PlanFileError::ScheduleLength {
                what: "bus frames",
                horizon: self.horizon,
                expected: self.horizon as usize,
                got: self.bus_frames.len(),
            });
        }
        for (i, frame) in self.bus_frames.iter().enumerate() {
            let cycle = i as u64 + 1;
            if plan.bus_frame(cycle).0 != *frame {
                return Err(PlanFileError::ScheduleMismatch {
                    what: "bus frame",
                    kind: self.kind,
                    cycle,
                });
            }
        }
        let events = plan.extraction(self.horizon);
        if events.len() != self.extraction.len() {
            return Err(PlanFileError::ScheduleLength {
                what: "extraction events",
                horizon: self.horizon,
                expected: events.len(),
                got: self.extraction.len(),
            });
        }
        for (expected, got) in events.iter().zip(&self.extraction) {
            if ExtractionEvent::from(*got) != *expected {
                return Err(PlanFileError::ScheduleMismatch {
                    what: "extraction event",
                    kind: self.kind,
                    cycle: got.cycle,
                });
            }
        }
        Ok(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{plan_basic, plan_improved};

    fn basic3() -> MappingPlan {
        plan_basic(TapVector::ramp(3).unwrap(), &ArrayConfig::square(3).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = PlanFile::from_plan(&basic3(), 6).emit();
        let again = PlanFile::parse(&text).unwrap().emit();
        assert_eq!(text, again);
        assert_eq!(PlanFile::parse(&text).unwrap().to_plan().unwrap(), basic3());
    }

    #[test]
    fn fractional_clock() {
        let cfg = ArrayConfig::square(4)
            .unwrap()
            .with_diagonal(true)
            .with_clock_mhz(Rational::new(25, 2))
            .unwrap();
        let plan = plan_improved(TapVector::ramp(3).unwrap(), &cfg).unwrap();
        let text = PlanFile::from_plan(&plan, 3).emit();
        assert!(text.contains("\"clock_mhz\": \"25/2\""));
        assert_eq!(PlanFile::parse(&text).unwrap().to_plan().unwrap(), plan);
    }

    #[test]
    fn decimal_clock_accepted() {
        let mut text = PlanFile::from_plan(&basic3(), 0).emit();
        text = text.replace("\"clock_mhz\": 100", "\"clock_mhz\": 12.5");
        let file = PlanFile::parse(&text).unwrap();
        assert_eq!(file.array.clock_mhz, Rational::new(25, 2));
    }

    #[test]
    fn illegal_assignment_rejected_on_load() {
        let mut file = PlanFile::from_plan(&basic3(), 3);
        file.assignment[1].src_b = crate::array::PortSource::SOUTH_WEST;
        assert!(matches!(
            file.to_plan(),
            Err(PlanFileError::Plan(PlanError::Illegal(_)))
        ));
    }

    #[test]
    fn tampered_schedule_rejected() {
        let mut file = PlanFile::from_plan(&basic3(), 4);
        file.bus_frames[2][1] += 1;
        assert!(matches!(
            file.to_plan(),
            Err(PlanFileError::ScheduleMismatch { cycle: 3, .. })
        ));
        let mut file = PlanFile::from_plan(&basic3(), 4);
        file.extraction.pop();
        assert!(matches!(
            file.to_plan(),
            Err(PlanFileError::ScheduleLength { .. })
        ));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = PlanFile::from_plan(&basic3(), 1)
            .emit()
            .replacen("{", "{\n  \"extra\": 1,", 1);
        assert!(PlanFile::parse(&text).is_err());
    }
}
