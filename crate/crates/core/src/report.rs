//! Sweeps over distances (Hamming) or inner products (any space), one row per
//! point and method. Failures stay in the table as annotated rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constructions::{baselines, bound_for_s, distance_to_s, BoundMethod, BoundResult};
use crate::error::{Error, Result};
use crate::feasibility::Tolerances;
use crate::lp_oracle::{delsarte_lp, LpMode, MAX_LP_N};
use crate::spaces::MeasureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableMethod {
    Mrrw,
    Lev,
    Spectral,
    Lp,
}

impl TableMethod {
    pub const ALL: [TableMethod; 4] = [TableMethod::Mrrw, TableMethod::Lev, TableMethod::Spectral, TableMethod::Lp];

    fn bound_method(self) -> Option<BoundMethod> {
        match self {
            TableMethod::Mrrw => Some(BoundMethod::Mrrw),
            TableMethod::Lev => Some(BoundMethod::Lev),
            TableMethod::Spectral => Some(BoundMethod::Spectral),
            TableMethod::Lp => None,
        }
    }
}

impl fmt::Display for TableMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableMethod::Mrrw => "mrrw",
            TableMethod::Lev => "lev",
            TableMethod::Spectral => "spectral",
            TableMethod::Lp => "lp",
        })
    }
}

impl FromStr for TableMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mrrw" => Ok(TableMethod::Mrrw),
            "lev" => Ok(TableMethod::Lev),
            "spectral" => Ok(TableMethod::Spectral),
            "lp" => Ok(TableMethod::Lp),
            other => Err(Error::InvalidInput(format!("unknown method {other:?}"))),
        }
    }
}

/// `"all"` or a comma-separated list of methods.
pub fn parse_methods(s: &str) -> Result<Vec<TableMethod>> {
    if s == "all" {
        return Ok(TableMethod::ALL.to_vec());
    }
    s.split(',').map(|m| m.trim().parse()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Certified,
    Optimal,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub d: Option<usize>,
    pub s: f64,
    pub method: TableMethod,
    pub status: RowStatus,
    /// Specific construction that produced the bound (`lev_odd`, ...).
    pub variant: Option<String>,
    pub bound: Option<f64>,
    pub degree: Option<usize>,
    pub k: Option<usize>,
    pub certificate_id: Option<String>,
    pub lp: Option<f64>,
    pub singleton: Option<f64>,
    pub sphere_packing: Option<f64>,
    pub plotkin: Option<f64>,
    pub note: Option<String>,
}

impl TableRow {
    fn empty(d: Option<usize>, s: f64, method: TableMethod, status: RowStatus) -> Self {
        Self {
            d,
            s,
            method,
            status,
            variant: None,
            bound: None,
            degree: None,
            k: None,
            certificate_id: None,
            lp: None,
            singleton: None,
            sphere_packing: None,
            plotkin: None,
            note: None,
        }
    }

    fn from_result(d: Option<usize>, method: TableMethod, r: &BoundResult) -> Self {
        let mut row = Self::empty(d, r.s, method, RowStatus::Certified);
        row.variant = Some(r.method.to_string());
        row.bound = Some(r.bound);
        row.degree = Some(r.degree);
        row.k = Some(r.k);
        row.certificate_id = Some(r.certificate_id.clone());
        row
    }
}

fn rows_at(
    spec: &MeasureSpec,
    d: Option<usize>,
    s: f64,
    methods: &[TableMethod],
    tol: Tolerances,
) -> Vec<TableRow> {
    let n = spec.hamming_n();
    let lp = match (n, d) {
        (Some(n), Some(d)) if n <= MAX_LP_N => Some(delsarte_lp(n, d, LpMode::Float)),
        _ => None,
    };
    let lp_value = lp.as_ref().and_then(|r| r.as_ref().ok()).map(|sol| sol.value);
    let base = match (n, d) {
        (Some(n), Some(d)) => Some(baselines(n, d)),
        _ => None,
    };
    methods
        .iter()
        .map(|&m| {
            let mut row = match m.bound_method() {
                Some(bm) => match bound_for_s(spec, s, bm, tol) {
                    Ok(r) => TableRow::from_result(d, m, &r),
                    Err(e) => {
                        let mut row = TableRow::empty(d, s, m, RowStatus::Failed);
                        row.note = Some(e.to_string());
                        row
                    }
                },
                None => match &lp {
                    Some(Ok(sol)) => {
                        let mut row = TableRow::empty(d, s, m, RowStatus::Optimal);
                        row.bound = Some(sol.value);
                        row
                    }
                    Some(Err(e)) => {
                        let mut row = TableRow::empty(d, s, m, RowStatus::Failed);
                        row.note = Some(e.to_string());
                        row
                    }
                    None => {
                        let mut row = TableRow::empty(d, s, m, RowStatus::Skipped);
                        row.note = Some(match n {
                            Some(_) => format!("LP oracle limited to n <= {MAX_LP_N}"),
                            None => "LP oracle is defined for Hamming spaces only".into(),
                        });
                        row
                    }
                },
            };
            row.lp = lp_value;
            if let Some(b) = base {
                row.singleton = Some(b.singleton);
                row.sphere_packing = Some(b.sphere_packing);
                row.plotkin = b.plotkin;
            }
            row
        })
        .collect()
}

/// Rows for `d = 1..=n`, methods in the given order within each `d`.
pub fn distance_table(spec: &MeasureSpec, methods: &[TableMethod], tol: Tolerances) -> Result<Vec<TableRow>> {
    let n = spec
        .hamming_n()
        .ok_or_else(|| Error::InvalidInput("distance sweeps need a Hamming space".into()))?;
    Ok((1..=n).flat_map(|d| rows_at(spec, Some(d), distance_to_s(n, d), methods, tol)).collect())
}

/// Rows for each `s` of `grid`, in order.
pub fn s_table(spec: &MeasureSpec, grid: &[f64], methods: &[TableMethod], tol: Tolerances) -> Result<Vec<TableRow>> {
    if let Some(bad) = grid.iter().find(|s| !(-1.0..1.0).contains(*s)) {
        return Err(Error::InvalidInput(format!("grid point s = {bad} is outside [-1, 1)")));
    }
    Ok(grid.iter().flat_map(|&s| rows_at(spec, None, s, methods, tol)).collect())
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}
