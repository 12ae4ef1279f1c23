//! Move-count formulas checked against sweep results. Upper bounds only
//! exist up to a constant, so `C` is fitted; lower bounds and exact counts
//! are asserted.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::sweep::SweepRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BoundSpec {
    /// `n/2 + C b ln b`.
    PmUpper,
    /// `n + C b² ln b`.
    HvsUpper,
    /// `n + C b² ln⁵ n`.
    HsUpper,
    /// `n/2 + b/4` against the delay Breaker.
    PmLower,
    /// `n + b/2` against the delay Breaker.
    HcLower,
    /// Exactly `n - 1`.
    ConnExact,
    /// At most `14 n`.
    KriviCap,
}

pub const ALL_BOUNDS: [BoundSpec; 7] = [
    BoundSpec::PmUpper,
    BoundSpec::HvsUpper,
    BoundSpec::HsUpper,
    BoundSpec::PmLower,
    BoundSpec::HcLower,
    BoundSpec::ConnExact,
    BoundSpec::KriviCap,
];

impl BoundSpec {
    pub fn name(self) -> &'static str {
        match self {
            BoundSpec::PmUpper => "PM_upper",
            BoundSpec::HvsUpper => "HVS_upper",
            BoundSpec::HsUpper => "HS_upper",
            BoundSpec::PmLower => "PM_lower",
            BoundSpec::HcLower => "HC_lower",
            BoundSpec::ConnExact => "CONN_exact",
            BoundSpec::KriviCap => "KRIVI_cap",
        }
    }

    /// Growth term `g(n, b)` the constant multiplies, for upper bounds.
    /// `ln b` is floored at 1 so that `b = 1, 2` give a usable scale.
    pub fn scale(self, n: usize, b: usize) -> Option<f64> {
        let lb = (b as f64).ln().max(1.0);
        let b = b as f64;
        match self {
            BoundSpec::PmUpper => Some(b * lb),
            BoundSpec::HvsUpper => Some(b * b * lb),
            BoundSpec::HsUpper => Some(b * b * (n as f64).ln().powi(5)),
            _ => None,
        }
    }

    fn is_lower(self) -> bool {
        matches!(self, BoundSpec::PmLower | BoundSpec::HcLower)
    }
}

impl fmt::Display for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ALL_BOUNDS
            .iter()
            .copied()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown bound {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub spec: BoundSpec,
    /// Rows the bound applies to.
    pub cells: usize,
    pub wins: usize,
    /// Smallest `C` satisfying the upper formula on every winning cell.
    pub fitted_c: Option<f64>,
    /// The cell attaining the fitted constant, and its excess.
    pub max_excess_cell: Option<(String, i64)>,
    pub violations: Vec<String>,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} cells, {} wins", self.spec, self.cells, self.wins)?;
        if let Some(c) = self.fitted_c {
            write!(f, ", fitted C = {c:.4}")?;
        }
        if let Some((cell, x)) = &self.max_excess_cell {
            write!(f, " (max at {cell}, excess {x})")?;
        }
        write!(f, ", {} violations", self.violations.len())
    }
}

fn cell_name(r: &SweepRow) -> String {
    format!("n={} b={} {} seed={}", r.n, r.b, r.breaker, r.seed)
}

/// Lower bounds only bind where the delay Breaker played; a game Maker did
/// not win satisfies them.
pub fn bound_check(rows: &[SweepRow], spec: BoundSpec) -> BoundReport {
    let rows: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| !spec.is_lower() || r.breaker.starts_with("clique"))
        .collect();
    let mut report = BoundReport {
        spec,
        cells: rows.len(),
        wins: rows.iter().filter(|r| r.maker_won()).count(),
        fitted_c: None,
        max_excess_cell: None,
        violations: Vec::new(),
    };
    for r in &rows {
        let (n, b, m) = (r.n as u64, r.b as u64, r.maker_moves as u64);
        let won = r.maker_won();
        match spec {
            BoundSpec::PmUpper | BoundSpec::HvsUpper | BoundSpec::HsUpper => {
                if !won {
                    continue;
                }
                let c = r.excess as f64 / spec.scale(r.n, r.b).expect("upper");
                if report.fitted_c.is_none_or(|best| c > best) {
                    report.fitted_c = Some(c);
                    report.max_excess_cell = Some((cell_name(r), r.excess));
                }
            }
            BoundSpec::PmLower => {
                if won && 4 * m < 2 * n + b {
                    report.violations.push(format!("{}: {m} moves < n/2 + b/4", cell_name(r)));
                }
            }
            BoundSpec::HcLower => {
                if won && 2 * m < 2 * n + b {
                    report.violations.push(format!("{}: {m} moves < n + b/2", cell_name(r)));
                }
            }
            BoundSpec::ConnExact => {
                if !won || m + 1 != n {
                    report.violations.push(format!("{}: {} in {m} moves, expected a win in n-1", cell_name(r), r.winner));
                }
            }
            BoundSpec::KriviCap => {
                if !won || m > 14 * n {
                    report.violations.push(format!("{}: {} in {m} moves, expected a win within 14n", cell_name(r), r.winner));
                }
            }
        }
    }
    report
}
