//! Raw declarations as written in the source, before references are
//! resolved and field literals are materialized over grids.

use super::Loc;
use crate::model::HKind;

#[derive(Debug, Clone, PartialEq)]
pub struct Name {
    pub text: String,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldLit {
    Const(f64),
    /// Step function along one axis: `inside` where the cell center's
    /// coordinate lies in [lo, hi], `outside` elsewhere.
    Box {
        lo: f64,
        hi: f64,
        axis: Name,
        inside: f64,
        outside: f64,
    },
    Csv(Name),
    Values(Vec<f64>),
    Schedule(Vec<(u64, Loc, FieldLit)>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelLit {
    Uniform(f64),
    Csv(Name),
    Values(Vec<f64>),
    Schedule(Vec<(u64, Loc, KernelLit)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisDecl {
    pub name: Name,
    pub min: f64,
    pub max: f64,
    pub cells: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDecl {
    pub id: Name,
    pub axes: Vec<AxisDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CBraneDecl {
    pub id: Name,
    pub space: Name,
    pub init: Option<(Loc, FieldLit)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TBraneDecl {
    pub id: Name,
    pub space: Name,
    pub rate: Option<(Loc, FieldLit)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HCarrierDecl {
    pub id: Name,
    pub source: Name,
    pub target: Name,
    pub kind: Option<(Loc, HKind)>,
    pub threshold: Option<(Loc, FieldLit)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WMode {
    Pointwise,
    Kernel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WCarrierDecl {
    pub id: Name,
    pub source: Name,
    pub target: Name,
    pub mode: Option<(Loc, WMode)>,
    pub gain: Option<(Loc, FieldLit)>,
    pub kernel: Option<(Loc, KernelLit)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelAst {
    pub spaces: Vec<SpaceDecl>,
    pub cbranes: Vec<CBraneDecl>,
    pub tbranes: Vec<TBraneDecl>,
    pub hcarriers: Vec<HCarrierDecl>,
    pub wcarriers: Vec<WCarrierDecl>,
}
