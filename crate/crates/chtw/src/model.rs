//! The CHTW-system model: container and transition branes, threshold and
//! transformation carriers, and structural validation.
//!
//! A system is the fivetuple of C-branes, H-carriers, T-branes, W-carriers
//! and initial mark-functions, plus the registry of spaces the branes live
//! on. Carrier direction is enforced by construction: H-carriers run only
//! C -> T and W-carriers only T -> C. Everything else (space consistency,
//! dangling references, field shapes, sign constraints) is reported by
//! [`CHTWSystem::validate`] as [`Diagnostics`] rather than panics, so a
//! front end can show every problem at once.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::field::{FieldValues, Kernel, Schedule};
use crate::space::{Grid, GridError, Space};

/// Threshold-carrier kinds. Blocking and associative carriers differ from
/// normal ones only in firing/consumption semantics; structurally all three
/// run C -> T and carry a threshold field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HKind {
    Normal,
    Blocking,
    Associative,
}

impl HKind {
    pub fn as_str(self) -> &'static str {
        match self {
            HKind::Normal => "normal",
            HKind::Blocking => "blocking",
            HKind::Associative => "associative",
        }
    }
}

impl fmt::Display for HKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The distributed resource of one C-brane: a real-valued field over the
/// brane's grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkFunction {
    pub brane: String,
    pub values: FieldValues,
}

/// Container brane: accumulates, stores and releases a distributed resource.
#[derive(Debug, Clone, PartialEq)]
pub struct CBrane {
    pub id: String,
    pub space: String,
    /// Mark-function values at step 0.
    pub initial: FieldValues,
}

impl CBrane {
    pub fn new(id: impl Into<String>, space: impl Into<String>, initial: FieldValues) -> Self {
        Self {
            id: id.into(),
            space: space.into(),
            initial,
        }
    }
}

/// Transition brane: fires pointwise where its enabling conditions hold and
/// takes up resource at intensity `rate` from normally-connected C-branes.
#[derive(Debug, Clone, PartialEq)]
pub struct TBrane {
    pub id: String,
    pub space: String,
    pub rate: Schedule<FieldValues>,
}

impl TBrane {
    pub fn new(
        id: impl Into<String>,
        space: impl Into<String>,
        rate: Schedule<FieldValues>,
    ) -> Self {
        Self {
            id: id.into(),
            space: space.into(),
            rate,
        }
    }
}

/// Threshold carrier C -> T. Enables (normal, associative) or disables
/// (blocking) firing where the source mark exceeds the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct HCarrier {
    pub id: String,
    pub kind: HKind,
    pub source: String,
    pub target: String,
    pub threshold: Schedule<FieldValues>,
}

impl HCarrier {
    pub fn new(
        id: impl Into<String>,
        kind: HKind,
        source: impl Into<String>,
        target: impl Into<String>,
        threshold: Schedule<FieldValues>,
    ) -> Self {
        Self {
            id: id.into(),
            kind,
            source: source.into(),
            target: target.into(),
            threshold,
        }
    }
}

/// Transformation payload of a W-carrier.
#[derive(Debug, Clone, PartialEq)]
pub enum WPayload {
    /// Pointwise gain on a shared space: contribution = gain(x) * d(x).
    Pointwise(Schedule<FieldValues>),
    /// Cross-space kernel, |source grid| x |target grid|; contributions are
    /// weighted by the source cell volume (a discrete integral).
    Kernel(Schedule<Kernel>),
}

/// Transformation carrier T -> C: maps the firing field on the source space
/// into produced resource on the target space.
#[derive(Debug, Clone, PartialEq)]
pub struct WCarrier {
    pub id: String,
    pub source: String,
    pub target: String,
    pub payload: WPayload,
}

impl WCarrier {
    pub fn pointwise(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        gain: Schedule<FieldValues>,
    ) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            payload: WPayload::Pointwise(gain),
        }
    }

    pub fn kernel(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        kernel: Schedule<Kernel>,
    ) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            payload: WPayload::Kernel(kernel),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagCode {
    #[serde(rename = "DUPLICATE_ID")]
    DuplicateId,
    #[serde(rename = "UNKNOWN_REFERENCE")]
    UnknownReference,
    #[serde(rename = "PROP3_VIOLATION")]
    Prop3Violation,
    #[serde(rename = "W_SPACE_MISMATCH")]
    WSpaceMismatch,
    #[serde(rename = "SHAPE_MISMATCH")]
    ShapeMismatch,
    #[serde(rename = "NEGATIVE_FIELD")]
    NegativeField,
    #[serde(rename = "NON_FINITE_FIELD")]
    NonFiniteField,
    #[serde(rename = "INVALID_AXIS")]
    InvalidAxis,
    #[serde(rename = "PARALLEL_CARRIERS")]
    ParallelCarriers,
    #[serde(rename = "NEGATIVE_RESOURCE")]
    NegativeResource,
    #[serde(rename = "SYNTAX_ERROR")]
    SyntaxError,
    #[serde(rename = "FIELD_SHAPE_MISMATCH")]
    FieldShapeMismatch,
    #[serde(rename = "LENGTH_MISMATCH")]
    LengthMismatch,
    #[serde(rename = "PARSE_ERROR")]
    ParseError,
    #[serde(rename = "IO_ERROR")]
    IoError,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::DuplicateId => "DUPLICATE_ID",
            DiagCode::UnknownReference => "UNKNOWN_REFERENCE",
            DiagCode::Prop3Violation => "PROP3_VIOLATION",
            DiagCode::WSpaceMismatch => "W_SPACE_MISMATCH",
            DiagCode::ShapeMismatch => "SHAPE_MISMATCH",
            DiagCode::NegativeField => "NEGATIVE_FIELD",
            DiagCode::NonFiniteField => "NON_FINITE_FIELD",
            DiagCode::InvalidAxis => "INVALID_AXIS",
            DiagCode::ParallelCarriers => "PARALLEL_CARRIERS",
            DiagCode::NegativeResource => "NEGATIVE_RESOURCE",
            DiagCode::SyntaxError => "SYNTAX_ERROR",
            DiagCode::FieldShapeMismatch => "FIELD_SHAPE_MISMATCH",
            DiagCode::LengthMismatch => "LENGTH_MISMATCH",
            DiagCode::ParseError => "PARSE_ERROR",
            DiagCode::IoError => "IO_ERROR",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One finding: severity, code, message and where it was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagCode,
    pub message: String,
    pub location: String,
}

impl Diagnostic {
    pub fn error(code: DiagCode, message: impl Into<String>, location: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            code,
            message: message.into(),
            location: location.into(),
        }
    }

    pub fn warning(
        code: DiagCode,
        message: impl Into<String>,
        location: impl Into<String>,
    ) -> Self {
        Self {
            severity: Severity::Warning,
            code,
            message: message.into(),
            location: location.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] {}: {}", self.code, self.location, self.message)
    }
}

/// All findings from one validation pass. A system is runnable exactly when
/// there are no error-severity findings.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Diagnostics {
    pub items: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn has_errors(&self) -> bool {
        self.items.iter().any(|d| d.severity == Severity::Error)
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Diagnostic> {
        self.items.iter()
    }

    fn error(&mut self, code: DiagCode, message: impl Into<String>, location: impl Into<String>) {
        self.items.push(Diagnostic::error(code, message, location));
    }

    fn warning(&mut self, code: DiagCode, message: impl Into<String>, location: impl Into<String>) {
        self.items.push(Diagnostic::warning(code, message, location));
    }
}

/// The fivetuple plus the space registry. Build with the `add_*` methods
/// (order of registration is the canonical order everywhere: matrices,
/// serialization, traces), then run [`CHTWSystem::validate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CHTWSystem {
    spaces: Vec<Space>,
    cbranes: Vec<CBrane>,
    tbranes: Vec<TBrane>,
    hcarriers: Vec<HCarrier>,
    wcarriers: Vec<WCarrier>,
}

impl CHTWSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_space(&mut self, space: Space) -> &mut Self {
        self.spaces.push(space);
        self
    }

    pub fn add_cbrane(&mut self, brane: CBrane) -> &mut Self {
        self.cbranes.push(brane);
        self
    }

    pub fn add_tbrane(&mut self, brane: TBrane) -> &mut Self {
        self.tbranes.push(brane);
        self
    }

    pub fn add_hcarrier(&mut self, carrier: HCarrier) -> &mut Self {
        self.hcarriers.push(carrier);
        self
    }

    pub fn add_wcarrier(&mut self, carrier: WCarrier) -> &mut Self {
        self.wcarriers.push(carrier);
        self
    }

    pub fn spaces(&self) -> &[Space] {
        &self.spaces
    }

    pub fn cbranes(&self) -> &[CBrane] {
        &self.cbranes
    }

    pub fn tbranes(&self) -> &[TBrane] {
        &self.tbranes
    }

    pub fn hcarriers(&self) -> &[HCarrier] {
        &self.hcarriers
    }

    pub fn wcarriers(&self) -> &[WCarrier] {
        &self.wcarriers
    }

    pub fn space(&self, id: &str) -> Option<&Space> {
        self.spaces.iter().find(|s| s.id == id)
    }

    pub fn cbrane(&self, id: &str) -> Option<&CBrane> {
        self.cbranes.iter().find(|b| b.id == id)
    }

    pub fn tbrane(&self, id: &str) -> Option<&TBrane> {
        self.tbranes.iter().find(|b| b.id == id)
    }

    pub fn cbrane_position(&self, id: &str) -> Option<usize> {
        self.cbranes.iter().position(|b| b.id == id)
    }

    pub fn tbrane_position(&self, id: &str) -> Option<usize> {
        self.tbranes.iter().position(|b| b.id == id)
    }

    pub fn wcarrier(&self, id: &str) -> Option<&WCarrier> {
        self.wcarriers.iter().find(|c| c.id == id)
    }

    /// Grid of a registered space.
    pub fn grid(&self, space_id: &str) -> Result<Grid, GridError> {
        let space = self
            .space(space_id)
            .ok_or_else(|| GridError::InvalidAxis(format!("unknown space '{space_id}'")))?;
        Grid::build(space)
    }

    fn grid_ok(&self, space_id: &str) -> Option<Grid> {
        self.space(space_id).and_then(|s| Grid::build(s).ok())
    }

    /// Structural validation. Returns every finding; the system is runnable
    /// iff no error-severity diagnostic is present. Pure and idempotent.
    pub fn validate(&self) -> Diagnostics {
        let mut diags = Diagnostics::default();
        self.check_unique_ids(&mut diags);
        self.check_spaces(&mut diags);
        self.check_cbranes(&mut diags);
        self.check_tbranes(&mut diags);
        self.check_hcarriers(&mut diags);
        self.check_wcarriers(&mut diags);
        diags
    }

    fn check_unique_ids(&self, diags: &mut Diagnostics) {
        let mut seen: HashSet<&str> = HashSet::new();
        let all = self
            .spaces
            .iter()
            .map(|s| (s.id.as_str(), "space"))
            .chain(self.cbranes.iter().map(|b| (b.id.as_str(), "cbrane")))
            .chain(self.tbranes.iter().map(|b| (b.id.as_str(), "tbrane")))
            .chain(self.hcarriers.iter().map(|c| (c.id.as_str(), "hcarrier")))
            .chain(self.wcarriers.iter().map(|c| (c.id.as_str(), "wcarrier")));
        for (id, kind) in all {
            if !seen.insert(id) {
                diags.error(
                    DiagCode::DuplicateId,
                    format!("id '{id}' declared more than once"),
                    format!("{kind} {id}"),
                );
            }
        }
    }

    fn check_spaces(&self, diags: &mut Diagnostics) {
        for space in &self.spaces {
            if let Err(e) = space.check() {
                diags.error(DiagCode::InvalidAxis, e.to_string(), format!("space {}", space.id));
            }
        }
    }

    fn check_field(
        &self,
        diags: &mut Diagnostics,
        values: &[f64],
        grid: Option<&Grid>,
        what: &str,
        location: &str,
    ) {
        if let Some(grid) = grid {
            if values.len() != grid.total_cells() {
                diags.error(
                    DiagCode::ShapeMismatch,
                    format!(
                        "{what} has {} values but the grid has {} cells",
                        values.len(),
                        grid.total_cells()
                    ),
                    location,
                );
            }
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                diags.error(
                    DiagCode::NonFiniteField,
                    format!("{what} value at cell {i} is not finite"),
                    location,
                );
                break;
            }
            if *v < 0.0 {
                diags.error(
                    DiagCode::NegativeField,
                    format!("{what} value at cell {i} is negative ({v})"),
                    location,
                );
                break;
            }
        }
    }

    fn check_scheduled_field(
        &self,
        diags: &mut Diagnostics,
        field: &Schedule<FieldValues>,
        grid: Option<&Grid>,
        what: &str,
        location: &str,
    ) {
        for (start, values) in field.entries() {
            self.check_field(diags, values, grid, &format!("{what} (from step {start})"), location);
        }
    }

    fn check_cbranes(&self, diags: &mut Diagnostics) {
        for brane in &self.cbranes {
            let loc = format!("cbrane {}", brane.id);
            if self.space(&brane.space).is_none() {
                diags.error(
                    DiagCode::UnknownReference,
                    format!("unknown space '{}'", brane.space),
                    &loc,
                );
                continue;
            }
            let grid = self.grid_ok(&brane.space);
            self.check_field(diags, &brane.initial, grid.as_ref(), "initial mark", &loc);
        }
    }

    fn check_tbranes(&self, diags: &mut Diagnostics) {
        for brane in &self.tbranes {
            let loc = format!("tbrane {}", brane.id);
            if self.space(&brane.space).is_none() {
                diags.error(
                    DiagCode::UnknownReference,
                    format!("unknown space '{}'", brane.space),
                    &loc,
                );
                continue;
            }
            let grid = self.grid_ok(&brane.space);
            self.check_scheduled_field(diags, &brane.rate, grid.as_ref(), "rate", &loc);
        }
    }

    fn check_hcarriers(&self, diags: &mut Diagnostics) {
        for carrier in &self.hcarriers {
            let loc = format!("hcarrier {}", carrier.id);
            let source = self.cbrane(&carrier.source);
            let target = self.tbrane(&carrier.target);
            if source.is_none() {
                diags.error(
                    DiagCode::UnknownReference,
                    format!("no C-brane named '{}'", carrier.source),
                    &loc,
                );
            }
            if target.is_none() {
                diags.error(
                    DiagCode::UnknownReference,
                    format!("no T-brane named '{}'", carrier.target),
                    &loc,
                );
            }
            let (Some(source), Some(target)) = (source, target) else {
                continue;
            };
            if source.space != target.space {
                diags.error(
                    DiagCode::Prop3Violation,
                    format!(
                        "H-carrier bundle must share one space: '{}' is on '{}', '{}' is on '{}'",
                        source.id, source.space, target.id, target.space
                    ),
                    &loc,
                );
                continue;
            }
            let grid = self.grid_ok(&source.space);
            self.check_scheduled_field(diags, &carrier.threshold, grid.as_ref(), "threshold", &loc);
        }
        // Parallel normal carriers on one (C, T) pair still debit the pair
        // only once; worth a heads-up.
        for (i, c) in self.hcarriers.iter().enumerate() {
            if c.kind != HKind::Normal {
                continue;
            }
            let earlier = self.hcarriers[..i]
                .iter()
                .any(|p| p.kind == HKind::Normal && p.source == c.source && p.target == c.target);
            if earlier {
                diags.warning(
                    DiagCode::ParallelCarriers,
                    format!(
                        "multiple normal H-carriers connect '{}' to '{}'; resource is taken up once per connected pair",
                        c.source, c.target
                    ),
                    format!("hcarrier {}", c.id),
                );
            }
        }
    }

    fn check_wcarriers(&self, diags: &mut Diagnostics) {
        for carrier in &self.wcarriers {
            let loc = format!("wcarrier {}", carrier.id);
            let source = self.tbrane(&carrier.source);
            let target = self.cbrane(&carrier.target);
            if source.is_none() {
                diags.error(
                    DiagCode::UnknownReference,
                    format!("no T-brane named '{}'", carrier.source),
                    &loc,
                );
            }
            if target.is_none() {
                diags.error(
                    DiagCode::UnknownReference,
                    format!("no C-brane named '{}'", carrier.target),
                    &loc,
                );
            }
            let (Some(source), Some(target)) = (source, target) else {
                continue;
            };
            match &carrier.payload {
                WPayload::Pointwise(gain) => {
                    if source.space != target.space {
                        diags.error(
                            DiagCode::WSpaceMismatch,
                            format!(
                                "pointwise W-carrier requires identical spaces: '{}' is on '{}', '{}' is on '{}'",
                                source.id, source.space, target.id, target.space
                            ),
                            &loc,
                        );
                        continue;
                    }
                    let grid = self.grid_ok(&source.space);
                    self.check_scheduled_field(diags, gain, grid.as_ref(), "gain", &loc);
                }
                WPayload::Kernel(kernel) => {
                    let source_grid = self.grid_ok(&source.space);
                    let target_grid = self.grid_ok(&target.space);
                    for (start, k) in kernel.entries() {
                        if let (Some(sg), Some(tg)) = (&source_grid, &target_grid) {
                            if k.source_cells() != sg.total_cells()
                                || k.target_cells() != tg.total_cells()
                            {
                                diags.error(
                                    DiagCode::ShapeMismatch,
                                    format!(
                                        "kernel (from step {start}) is {}x{} but grids have {}x{} cells",
                                        k.source_cells(),
                                        k.target_cells(),
                                        sg.total_cells(),
                                        tg.total_cells()
                                    ),
                                    &loc,
                                );
                            }
                        }
                        self.check_field(
                            diags,
                            k.values(),
                            None,
                            &format!("kernel (from step {start})"),
                            &loc,
                        );
                    }
                }
            }
        }
    }
}

/// Volume-weighted total of a mark field over its grid: the contribution of
/// one C-brane to the system's integral resource M. On point spaces this is
/// the plain token count.
pub fn total_resource(values: &[f64], grid: &Grid) -> f64 {
    values.iter().sum::<f64>() * grid.cell_volume()
}
