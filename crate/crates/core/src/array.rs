//! Array geometry, interconnect reachability and context words.
//!
//! The grid is addressed as `(row, col)` with row 0 at the top and column 0 at
//! the left. Three interconnect levels are modeled as reachability answers:
//! the nearest-neighbor mesh, intra-quadrant row/column links, and express
//! lanes between paired quadrants. An optional diagonal link lets port B read
//! the lower-left neighbor.
//!
//! Only [`PortSource::OperandBus`], [`PortSource::Zero`], `West` and
//! `SouthWest` are executable; the other levels answer legality queries.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = Ratio<i64>;

pub const DEFAULT_QUADRANT: usize = 4;
pub const DEFAULT_CLOCK_MHZ: i64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("array dimensions must be positive (got {rows}x{cols})")]
    EmptyArray { rows: usize, cols: usize },
    #[error("quadrant size must be positive")]
    EmptyQuadrant,
    #[error("clock must be positive (got {0} MHz)")]
    NonPositiveClock(Rational),
    #[error("cell {coord} lies outside the {rows}x{cols} array")]
    OutOfBounds { coord: CellCoord, rows: usize, cols: usize },
    #[error("source {src} is illegal at {coord}: {reason}")]
    IllegalSource {
        coord: CellCoord,
        src: PortSource,
        reason: &'static str,
    },
    #[error("quadrant size {quadrant} does not divide the {rows}x{cols} array; {level} links unavailable")]
    QuadrantUnavailable {
        quadrant: usize,
        rows: usize,
        cols: usize,
        level: &'static str,
    },
}

/// Geometry and feature flags of one array instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayConfig {
    rows: usize,
    cols: usize,
    quadrant_size: usize,
    diagonal_enabled: bool,
    clock_mhz: Rational,
}

impl ArrayConfig {
    pub fn new(rows: usize, cols: usize) -> Result<Self, ArrayError> {
        if rows == 0 || cols == 0 {
            return Err(ArrayError::EmptyArray { rows, cols });
        }
        Ok(Self {
            rows,
            cols,
            quadrant_size: DEFAULT_QUADRANT,
            diagonal_enabled: false,
            clock_mhz: Rational::from_integer(DEFAULT_CLOCK_MHZ),
        })
    }

    /// Square array, the common case.
    pub fn square(side: usize) -> Result<Self, ArrayError> {
        Self::new(side, side)
    }

    pub fn with_diagonal(mut self, enabled: bool) -> Self {
        self.diagonal_enabled = enabled;
        self
    }

    pub fn with_quadrant(mut self, size: usize) -> Result<Self, ArrayError> {
        if size == 0 {
            return Err(ArrayError::EmptyQuadrant);
        }
        self.quadrant_size = size;
        Ok(self)
    }

    pub fn with_clock_mhz(mut self, clock: Rational) -> Result<Self, ArrayError> {
        if clock <= Rational::from_integer(0) {
            return Err(ArrayError::NonPositiveClock(clock));
        }
        self.clock_mhz = clock;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn quadrant_size(&self) -> usize {
        self.quadrant_size
    }

    pub fn diagonal_enabled(&self) -> bool {
        self.diagonal_enabled
    }

    pub fn clock_mhz(&self) -> Rational {
        self.clock_mhz
    }

    pub fn contains(&self, coord: CellCoord) -> bool {
        coord.row < self.rows && coord.col < self.cols
    }

    /// Intra-quadrant and express links exist only when quadrants tile the grid.
    pub fn quadrants_available(&self) -> bool {
        self.rows.is_multiple_of(self.quadrant_size) && self.cols.is_multiple_of(self.quadrant_size)
    }

    fn check(&self, coord: CellCoord) -> Result<(), ArrayError> {
        if self.contains(coord) {
            Ok(())
        } else {
            Err(ArrayError::OutOfBounds {
                coord,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellCoord {
    pub row: usize,
    pub col: usize,
}

impl CellCoord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    fn offset(self, d_row: isize, d_col: isize) -> Option<Self> {
        Some(Self {
            row: self.row.checked_add_signed(d_row)?,
            col: self.col.checked_add_signed(d_col)?,
        })
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Axis-aligned block of cells an assignment is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub origin: CellCoord,
    pub rows: usize,
    pub cols: usize,
}

impl Region {
    /// `rows x cols` block anchored at the top-left cell.
    pub const fn top_left(rows: usize, cols: usize) -> Self {
        Self {
            origin: CellCoord::new(0, 0),
            rows,
            cols,
        }
    }

    pub fn contains(&self, coord: CellCoord) -> bool {
        coord.row >= self.origin.row
            && coord.col >= self.origin.col
            && coord.row < self.origin.row + self.rows
            && coord.col < self.origin.col + self.cols
    }

    pub fn fits(&self, cfg: &ArrayConfig) -> bool {
        self.rows > 0
            && self.cols > 0
            && self.origin.row + self.rows <= cfg.rows()
            && self.origin.col + self.cols <= cfg.cols()
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = CellCoord> + '_ {
        (0..self.rows).flat_map(move |r| {
            (0..self.cols).map(move |c| CellCoord::new(self.origin.row + r, self.origin.col + c))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    North,
    South,
    East,
    West,
    /// Lower-left neighbor; present only with the diagonal extension.
    SouthWest,
    /// Peer in the same row and quadrant, at this quadrant-local column.
    IntraQuadRow(usize),
    /// Peer in the same column and quadrant, at this quadrant-local row.
    IntraQuadCol(usize),
    /// Express lane from the paired quadrant in the same row.
    ExpressRow,
    /// Express lane from the paired quadrant in the same column.
    ExpressCol,
}

/// Serialized as its display name: `bus`, `zero`, `west`, `intra_quad_row[2]`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PortSource {
    OperandBus,
    Zero,
    Neighbor(Direction),
}

impl PortSource {
    pub const WEST: Self = Self::Neighbor(Direction::West);
    pub const SOUTH_WEST: Self = Self::Neighbor(Direction::SouthWest);

    /// Sources the execution engine can drive.
    pub fn is_executable(&self) -> bool {
        matches!(
            self,
            Self::OperandBus
                | Self::Zero
                | Self::Neighbor(Direction::West)
                | Self::Neighbor(Direction::SouthWest)
        )
    }
}

impl fmt::Display for PortSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OperandBus => f.write_str("bus"),
            Self::Zero => f.write_str("zero"),
            Self::Neighbor(d) => match d {
                Direction::North => f.write_str("north"),
                Direction::South => f.write_str("south"),
                Direction::East => f.write_str("east"),
                Direction::West => f.write_str("west"),
                Direction::SouthWest => f.write_str("south_west"),
                Direction::IntraQuadRow(i) => write!(f, "intra_quad_row[{i}]"),
                Direction::IntraQuadCol(i) => write!(f, "intra_quad_col[{i}]"),
                Direction::ExpressRow => f.write_str("express_row"),
                Direction::ExpressCol => f.write_str("express_col"),
            },
        }
    }
}

impl FromStr for PortSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let indexed = |prefix: &str| -> Option<Result<usize, String>> {
            let rest = s.strip_prefix(prefix)?.strip_prefix('[')?.strip_suffix(']')?;
            Some(rest.parse().map_err(|_| format!("bad index in '{s}'")))
        };
        if let Some(i) = indexed("intra_quad_row") {
            return Ok(Self::Neighbor(Direction::IntraQuadRow(i?)));
        }
        if let Some(i) = indexed("intra_quad_col") {
            return Ok(Self::Neighbor(Direction::IntraQuadCol(i?)));
        }
        Ok(match s {
            "bus" => Self::OperandBus,
            "zero" => Self::Zero,
            "north" => Self::Neighbor(Direction::North),
            "south" => Self::Neighbor(Direction::South),
            "east" => Self::Neighbor(Direction::East),
            "west" => Self::WEST,
            "south_west" => Self::SOUTH_WEST,
            "express_row" => Self::Neighbor(Direction::ExpressRow),
            "express_col" => Self::Neighbor(Direction::ExpressCol),
            other => return Err(format!("unknown port source '{other}'")),
        })
    }
}

impl From<PortSource> for String {
    fn from(src: PortSource) -> Self {
        src.to_string()
    }
}

impl TryFrom<String> for PortSource {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// What a port reads after resolving its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved {
    Cell(CellCoord),
    /// Neighbor falls outside the grid; reads as zero.
    OffArray,
    BusTap,
    ZeroTap,
}

pub fn resolve_source(
    coord: CellCoord,
    src: PortSource,
    cfg: &ArrayConfig,
) -> Result<Resolved, ArrayError> {
    cfg.check(coord)?;
    let dir = match src {
        PortSource::OperandBus => return Ok(Resolved::BusTap),
        PortSource::Zero => return Ok(Resolved::ZeroTap),
        PortSource::Neighbor(dir) => dir,
    };
    let q = cfg.quadrant_size();
    let quadrant_level = |level| {
        if cfg.quadrants_available() {
            Ok(())
        } else {
            Err(ArrayError::QuadrantUnavailable {
                quadrant: q,
                rows: cfg.rows(),
                cols: cfg.cols(),
                level,
            })
        }
    };
    let target = match dir {
        Direction::North => coord.offset(-1, 0),
        Direction::South => coord.offset(1, 0),
        Direction::East => coord.offset(0, 1),
        Direction::West => coord.offset(0, -1),
        Direction::SouthWest => {
            if !cfg.diagonal_enabled() {
                return Err(ArrayError::IllegalSource {
                    coord,
                    src,
                    reason: "diagonal link not enabled",
                });
            }
            coord.offset(1, -1)
        }
        Direction::IntraQuadRow(i) | Direction::IntraQuadCol(i) => {
            quadrant_level("intra-quadrant")?;
            let along_row = matches!(dir, Direction::IntraQuadRow(_));
            let local = if along_row { coord.col % q } else { coord.row % q };
            if i >= q || i == local {
                return Err(ArrayError::IllegalSource {
                    coord,
                    src,
                    reason: "intra-quadrant index must name another cell of the quadrant",
                });
            }
            if along_row {
                Some(CellCoord::new(coord.row, coord.col - local + i))
            } else {
                Some(CellCoord::new(coord.row - local + i, coord.col))
            }
        }
        Direction::ExpressRow => {
            quadrant_level("express")?;
            let partner = (coord.col / q) ^ 1;
            Some(CellCoord::new(coord.row, partner * q + coord.col % q))
        }
        Direction::ExpressCol => {
            quadrant_level("express")?;
            let partner = (coord.row / q) ^ 1;
            Some(CellCoord::new(partner * q + coord.row % q, coord.col))
        }
    };
    Ok(match target {
        Some(t) if cfg.contains(t) => Resolved::Cell(t),
        _ => Resolved::OffArray,
    })
}

/// Every legal port-B source whose producer lies inside the grid.
pub fn reachable_sources(coord: CellCoord, cfg: &ArrayConfig) -> BTreeSet<PortSource> {
    let mut candidates = vec![
        PortSource::OperandBus,
        PortSource::Zero,
        PortSource::Neighbor(Direction::North),
        PortSource::Neighbor(Direction::South),
        PortSource::Neighbor(Direction::East),
        PortSource::WEST,
        PortSource::SOUTH_WEST,
        PortSource::Neighbor(Direction::ExpressRow),
        PortSource::Neighbor(Direction::ExpressCol),
    ];
    for i in 0..cfg.quadrant_size() {
        candidates.push(PortSource::Neighbor(Direction::IntraQuadRow(i)));
        candidates.push(PortSource::Neighbor(Direction::IntraQuadCol(i)));
    }
    candidates
        .into_iter()
        .filter(|&src| {
            matches!(
                resolve_source(coord, src, cfg),
                Ok(Resolved::Cell(_) | Resolved::BusTap | Resolved::ZeroTap)
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    /// `out = A * w`
    Mul,
    /// `out = A * w + B`
    MulAdd,
}

/// Configuration of one cell. Port A always reads the operand bus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextWord {
    pub op: Op,
    pub weight_index: usize,
    pub src_b: PortSource,
}

impl ContextWord {
    pub const fn mul(weight_index: usize) -> Self {
        Self {
            op: Op::Mul,
            weight_index,
            src_b: PortSource::Zero,
        }
    }

    pub const fn mul_add(weight_index: usize, src_b: PortSource) -> Self {
        Self {
            op: Op::MulAdd,
            weight_index,
            src_b,
        }
    }

    /// `Mul` reads zero on port B and `MulAdd` must not.
    pub fn is_well_formed(&self) -> bool {
        match self.op {
            Op::Mul => self.src_b == PortSource::Zero,
            Op::MulAdd => self.src_b != PortSource::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BroadcastMode {
    ColumnBroadcast,
    RowBroadcast,
}

/// One context word per column (or per row) of the active region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextAssignment {
    pub mode: BroadcastMode,
    pub words: Vec<ContextWord>,
}

impl ContextAssignment {
    pub fn column_broadcast(words: Vec<ContextWord>) -> Self {
        Self {
            mode: BroadcastMode::ColumnBroadcast,
            words,
        }
    }

    /// Word governing `coord`, which must lie in `region`.
    pub fn word_for(&self, coord: CellCoord, region: &Region) -> Option<&ContextWord> {
        if !region.contains(coord) {
            return None;
        }
        match self.mode {
            BroadcastMode::ColumnBroadcast => self.words.get(coord.col - region.origin.col),
            BroadcastMode::RowBroadcast => self.words.get(coord.row - region.origin.row),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    RegionOutOfBounds,
    ShapeMismatch { expected: usize, got: usize },
    MalformedWord { word: ContextWord },
    IllegalSource { src: PortSource, reason: String },
    NotExecutable { src: PortSource },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// `None` for region-wide problems.
    pub coord: Option<CellCoord>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.coord {
            write!(f, "cell {c}: ")?;
        }
        match &self.kind {
            ViolationKind::RegionOutOfBounds => f.write_str("region does not fit the array"),
            ViolationKind::ShapeMismatch { expected, got } => {
                write!(f, "expected {expected} context words, got {got}")
            }
            ViolationKind::MalformedWord { word } => write!(
                f,
                "{:?} with port B = {} breaks the Mul/MulAdd source rule",
                word.op, word.src_b
            ),
            ViolationKind::IllegalSource { src, reason } => {
                write!(f, "source {src} illegal: {reason}")
            }
            ViolationKind::NotExecutable { src } => {
                write!(f, "source {src} is connectivity-only and cannot be executed")
            }
        }
    }
}

/// Checks an assignment against a region; collects every violation.
pub fn validate_assignment(
    assign: &ContextAssignment,
    region: &Region,
    cfg: &ArrayConfig,
) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if !region.fits(cfg) {
        violations.push(Violation {
            coord: None,
            kind: ViolationKind::RegionOutOfBounds,
        });
        return Err(violations);
    }
    let expected = match assign.mode {
        BroadcastMode::ColumnBroadcast => region.cols,
        BroadcastMode::RowBroadcast => region.rows,
    };
    if assign.words.len() != expected {
        violations.push(Violation {
            coord: None,
            kind: ViolationKind::ShapeMismatch {
                expected,
                got: assign.words.len(),
            },
        });
        return Err(violations);
    }
    for coord in region.cells() {
        let word = *assign
            .word_for(coord, region)
            .expect("shape checked above");
        if !word.is_well_formed() {
            violations.push(Violation {
                coord: Some(coord),
                kind: ViolationKind::MalformedWord { word },
            });
        }
        match resolve_source(coord, word.src_b, cfg) {
            Err(e) => violations.push(Violation {
                coord: Some(coord),
                kind: ViolationKind::IllegalSource {
                    src: word.src_b,
                    reason: e.to_string(),
                },
            }),
            Ok(_) if !word.src_b.is_executable() => violations.push(Violation {
                coord: Some(coord),
                kind: ViolationKind::NotExecutable { src: word.src_b },
            }),
            Ok(_) => {}
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
