//! Lowers the raw AST into a [`CHTWSystem`]: resolves references, checks id
//! uniqueness, materializes field literals over their grids and loads CSV
//! data. Value-level semantics (sign constraints, axis validity) stay with
//! `CHTWSystem::validate`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use super::ast::*;
use super::csv::{load_field_csv, load_kernel_csv, CsvError};
use super::{Loc, ParseError};
use crate::field::{FieldValues, Kernel, Schedule};
use crate::model::{CBrane, CHTWSystem, DiagCode, HCarrier, HKind, TBrane, WCarrier};
use crate::space::{Axis, Grid, Space};

struct Lowering<'a> {
    base_dir: Option<&'a Path>,
    errors: Vec<ParseError>,
}

pub fn lower(ast: &ModelAst, base_dir: Option<&Path>) -> (CHTWSystem, Vec<ParseError>) {
    let mut ctx = Lowering {
        base_dir,
        errors: Vec::new(),
    };
    let system = ctx.run(ast);
    (system, ctx.errors)
}

impl<'a> Lowering<'a> {
    fn error(&mut self, loc: Loc, code: DiagCode, message: impl Into<String>) {
        self.errors.push(ParseError::new(loc, code, message));
    }

    fn run(&mut self, ast: &ModelAst) -> CHTWSystem {
        let mut system = CHTWSystem::new();
        let mut ids: HashSet<String> = HashSet::new();

        for decl in &ast.spaces {
            self.check_id(&mut ids, &decl.id);
            let axes = decl
                .axes
                .iter()
                .map(|a| Axis::new(a.name.text.clone(), a.min, a.max, a.cells as usize))
                .collect();
            system.add_space(Space::new(decl.id.text.clone(), axes));
        }

        for decl in &ast.cbranes {
            self.check_id(&mut ids, &decl.id);
            let grid = self.resolve_grid(&system, &decl.space);
            let init = match &decl.init {
                Some((loc, lit)) => {
                    if matches!(lit, FieldLit::Schedule(_)) {
                        self.error(
                            *loc,
                            DiagCode::SyntaxError,
                            "the initial mark cannot be scheduled",
                        );
                        Vec::new()
                    } else {
                        self.lower_field(lit, *loc, grid.as_ref()).unwrap_or_default()
                    }
                }
                None => Vec::new(), // parser already reported the missing statement
            };
            system.add_cbrane(CBrane::new(
                decl.id.text.clone(),
                decl.space.text.clone(),
                init,
            ));
        }

        for decl in &ast.tbranes {
            self.check_id(&mut ids, &decl.id);
            let grid = self.resolve_grid(&system, &decl.space);
            let rate = match &decl.rate {
                Some((loc, lit)) => self.lower_scheduled_field(lit, *loc, grid.as_ref()),
                None => Schedule::stationary(Vec::new()),
            };
            system.add_tbrane(TBrane::new(
                decl.id.text.clone(),
                decl.space.text.clone(),
                rate,
            ));
        }

        for decl in &ast.hcarriers {
            self.check_id(&mut ids, &decl.id);
            let source_space = self.resolve_cbrane(&system, &decl.source);
            self.resolve_tbrane(&system, &decl.target);
            let grid = source_space.and_then(|s| grid_of(&system, &s));
            let threshold = match &decl.threshold {
                Some((loc, lit)) => self.lower_scheduled_field(lit, *loc, grid.as_ref()),
                None => Schedule::stationary(Vec::new()),
            };
            let kind = decl.kind.map(|(_, k)| k).unwrap_or(HKind::Normal);
            system.add_hcarrier(HCarrier::new(
                decl.id.text.clone(),
                kind,
                decl.source.text.clone(),
                decl.target.text.clone(),
                threshold,
            ));
        }

        for decl in &ast.wcarriers {
            self.check_id(&mut ids, &decl.id);
            let source_space = self.resolve_tbrane(&system, &decl.source);
            let target_space = self.resolve_cbrane(&system, &decl.target);
            let source_grid = source_space.and_then(|s| grid_of(&system, &s));
            let target_grid = target_space.and_then(|s| grid_of(&system, &s));
            if let Some(carrier) = self.lower_wcarrier(decl, source_grid, target_grid) {
                system.add_wcarrier(carrier);
            }
        }

        system
    }

    fn check_id(&mut self, ids: &mut HashSet<String>, name: &Name) {
        if !ids.insert(name.text.clone()) {
            self.error(
                name.loc,
                DiagCode::DuplicateId,
                format!("id '{}' is already declared", name.text),
            );
        }
    }

    fn resolve_grid(&mut self, system: &CHTWSystem, space: &Name) -> Option<Grid> {
        match system.space(&space.text) {
            Some(s) => Grid::build(s).ok(), // invalid axes are validation findings
            None => {
                self.error(
                    space.loc,
                    DiagCode::UnknownReference,
                    format!("unknown space '{}'", space.text),
                );
                None
            }
        }
    }

    fn resolve_cbrane(&mut self, system: &CHTWSystem, name: &Name) -> Option<String> {
        match system.cbrane(&name.text) {
            Some(b) => Some(b.space.clone()),
            None => {
                self.error(
                    name.loc,
                    DiagCode::UnknownReference,
                    format!("no C-brane named '{}'", name.text),
                );
                None
            }
        }
    }

    fn resolve_tbrane(&mut self, system: &CHTWSystem, name: &Name) -> Option<String> {
        match system.tbrane(&name.text) {
            Some(b) => Some(b.space.clone()),
            None => {
                self.error(
                    name.loc,
                    DiagCode::UnknownReference,
                    format!("no T-brane named '{}'", name.text),
                );
                None
            }
        }
    }

    fn resolve_path(&self, raw: &str) -> PathBuf {
        let p = Path::new(raw);
        match (p.is_absolute(), self.base_dir) {
            (false, Some(base)) => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    fn csv_error(&mut self, loc: Loc, path: &Path, err: CsvError) {
        let code = match err {
            CsvError::LengthMismatch { .. } => DiagCode::FieldShapeMismatch,
            _ => DiagCode::SyntaxError,
        };
        self.error(loc, code, format!("{}: {err}", path.display()));
    }

    /// Materializes a non-schedule field literal over a grid. With no grid
    /// (unresolved space), size-dependent literals lower to an empty field;
    /// the unresolved reference has already been reported.
    fn lower_field(&mut self, lit: &FieldLit, loc: Loc, grid: Option<&Grid>) -> Option<FieldValues> {
        match lit {
            FieldLit::Const(v) => grid.map(|g| vec![*v; g.total_cells()]),
            FieldLit::Values(values) => {
                if let Some(g) = grid {
                    if values.len() != g.total_cells() {
                        self.error(
                            loc,
                            DiagCode::FieldShapeMismatch,
                            format!(
                                "'values' literal has {} entries, the grid has {} cells",
                                values.len(),
                                g.total_cells()
                            ),
                        );
                        return None;
                    }
                }
                Some(values.clone())
            }
            FieldLit::Box {
                lo,
                hi,
                axis,
                inside,
                outside,
            } => {
                let g = grid?;
                let Some(axis_ix) = g.space().axes.iter().position(|a| a.name == axis.text)
                else {
                    self.error(
                        axis.loc,
                        DiagCode::UnknownReference,
                        format!("space '{}' has no axis named '{}'", g.space().id, axis.text),
                    );
                    return None;
                };
                let mut values = Vec::with_capacity(g.total_cells());
                for i in 0..g.total_cells() {
                    let x = g.cell_center(i).expect("index in range")[axis_ix];
                    values.push(if x >= *lo && x <= *hi { *inside } else { *outside });
                }
                Some(values)
            }
            FieldLit::Csv(path) => {
                let g = grid?;
                let resolved = self.resolve_path(&path.text);
                match load_field_csv(&resolved, g) {
                    Ok(values) => Some(values),
                    Err(e) => {
                        self.csv_error(path.loc, &resolved, e);
                        None
                    }
                }
            }
            FieldLit::Schedule(_) => unreachable!("schedules are handled by the caller"),
        }
    }

    fn lower_scheduled_field(
        &mut self,
        lit: &FieldLit,
        loc: Loc,
        grid: Option<&Grid>,
    ) -> Schedule<FieldValues> {
        let fallback = || Schedule::stationary(Vec::new());
        match lit {
            FieldLit::Schedule(entries) => {
                let mut lowered: Vec<(u64, FieldValues)> = Vec::new();
                let mut ok = true;
                for (i, (start, entry_loc, sub)) in entries.iter().enumerate() {
                    if matches!(sub, FieldLit::Schedule(_)) {
                        self.error(*entry_loc, DiagCode::SyntaxError, "schedules cannot be nested");
                        ok = false;
                        continue;
                    }
                    if i == 0 && *start != 0 {
                        self.error(
                            *entry_loc,
                            DiagCode::SyntaxError,
                            format!("the first schedule entry must start at step 0, got {start}"),
                        );
                        ok = false;
                    }
                    if let Some((prev, _)) = lowered.last() {
                        if *start <= *prev {
                            self.error(
                                *entry_loc,
                                DiagCode::SyntaxError,
                                format!(
                                    "schedule start steps must strictly increase ({start} after {prev})"
                                ),
                            );
                            ok = false;
                        }
                    }
                    match self.lower_field(sub, *entry_loc, grid) {
                        Some(values) => lowered.push((*start, values)),
                        None => ok = false,
                    }
                }
                if ok && !lowered.is_empty() {
                    Schedule::new(lowered).unwrap_or_else(|_| fallback())
                } else {
                    fallback()
                }
            }
            other => match self.lower_field(other, loc, grid) {
                Some(values) => Schedule::stationary(values),
                None => fallback(),
            },
        }
    }

    fn lower_wcarrier(
        &mut self,
        decl: &WCarrierDecl,
        source_grid: Option<Grid>,
        target_grid: Option<Grid>,
    ) -> Option<WCarrier> {
        let mode = match (decl.mode, &decl.gain, &decl.kernel) {
            (Some((_, m)), _, _) => m,
            (None, Some(_), None) => WMode::Pointwise,
            (None, None, Some(_)) => WMode::Kernel,
            _ => {
                self.error(
                    decl.id.loc,
                    DiagCode::SyntaxError,
                    format!(
                        "wcarrier '{}' needs 'mode pointwise; gain ...' or 'mode kernel; kernel ...'",
                        decl.id.text
                    ),
                );
                return None;
            }
        };
        match mode {
            WMode::Pointwise => {
                if let Some((loc, _)) = &decl.kernel {
                    self.error(
                        *loc,
                        DiagCode::SyntaxError,
                        "pointwise wcarrier cannot carry a 'kernel' statement",
                    );
                }
                let Some((loc, lit)) = &decl.gain else {
                    self.error(
                        decl.id.loc,
                        DiagCode::SyntaxError,
                        format!("wcarrier '{}' is missing 'gain'", decl.id.text),
                    );
                    return None;
                };
                let gain = self.lower_scheduled_field(lit, *loc, source_grid.as_ref());
                Some(WCarrier::pointwise(
                    decl.id.text.clone(),
                    decl.source.text.clone(),
                    decl.target.text.clone(),
                    gain,
                ))
            }
            WMode::Kernel => {
                if let Some((loc, _)) = &decl.gain {
                    self.error(
                        *loc,
                        DiagCode::SyntaxError,
                        "kernel wcarrier cannot carry a 'gain' statement",
                    );
                }
                let Some((loc, lit)) = &decl.kernel else {
                    self.error(
                        decl.id.loc,
                        DiagCode::SyntaxError,
                        format!("wcarrier '{}' is missing 'kernel'", decl.id.text),
                    );
                    return None;
                };
                let kernel =
                    self.lower_scheduled_kernel(lit, *loc, source_grid.as_ref(), target_grid.as_ref())?;
                Some(WCarrier::kernel(
                    decl.id.text.clone(),
                    decl.source.text.clone(),
                    decl.target.text.clone(),
                    kernel,
                ))
            }
        }
    }

    fn lower_scheduled_kernel(
        &mut self,
        lit: &KernelLit,
        loc: Loc,
        source_grid: Option<&Grid>,
        target_grid: Option<&Grid>,
    ) -> Option<Schedule<Kernel>> {
        match lit {
            KernelLit::Schedule(entries) => {
                let mut lowered: Vec<(u64, Kernel)> = Vec::new();
                let mut ok = true;
                for (i, (start, entry_loc, sub)) in entries.iter().enumerate() {
                    if matches!(sub, KernelLit::Schedule(_)) {
                        self.error(*entry_loc, DiagCode::SyntaxError, "schedules cannot be nested");
                        ok = false;
                        continue;
                    }
                    if i == 0 && *start != 0 {
                        self.error(
                            *entry_loc,
                            DiagCode::SyntaxError,
                            format!("the first schedule entry must start at step 0, got {start}"),
                        );
                        ok = false;
                    }
                    if let Some((prev, _)) = lowered.last() {
                        if *start <= *prev {
                            self.error(
                                *entry_loc,
                                DiagCode::SyntaxError,
                                format!(
                                    "schedule start steps must strictly increase ({start} after {prev})"
                                ),
                            );
                            ok = false;
                        }
                    }
                    match self.lower_kernel(sub, *entry_loc, source_grid, target_grid) {
                        Some(k) => lowered.push((*start, k)),
                        None => ok = false,
                    }
                }
                if ok && !lowered.is_empty() {
                    Schedule::new(lowered).ok()
                } else {
                    None
                }
            }
            other => self
                .lower_kernel(other, loc, source_grid, target_grid)
                .map(Schedule::stationary),
        }
    }

    fn lower_kernel(
        &mut self,
        lit: &KernelLit,
        loc: Loc,
        source_grid: Option<&Grid>,
        target_grid: Option<&Grid>,
    ) -> Option<Kernel> {
        let (rows, cols) = match (source_grid, target_grid) {
            (Some(s), Some(t)) => (s.total_cells(), t.total_cells()),
            _ => return None, // unresolved endpoint already reported
        };
        match lit {
            KernelLit::Uniform(v) => Some(Kernel::uniform(rows, cols, *v)),
            KernelLit::Values(values) => match Kernel::new(rows, cols, values.clone()) {
                Ok(k) => Some(k),
                Err(_) => {
                    self.error(
                        loc,
                        DiagCode::FieldShapeMismatch,
                        format!(
                            "kernel 'values' literal has {} entries, expected {rows}x{cols} = {}",
                            values.len(),
                            rows * cols
                        ),
                    );
                    None
                }
            },
            KernelLit::Csv(path) => {
                let resolved = self.resolve_path(&path.text);
                match load_kernel_csv(&resolved, rows, cols) {
                    Ok(k) => Some(k),
                    Err(e) => {
                        self.csv_error(path.loc, &resolved, e);
                        None
                    }
                }
            }
            KernelLit::Schedule(_) => unreachable!("schedules are handled by the caller"),
        }
    }
}

fn grid_of(system: &CHTWSystem, space_id: &str) -> Option<Grid> {
    system.space(space_id).and_then(|s| Grid::build(s).ok())
}
