//! Named invariant suites run by `windmill verify`.

use std::fmt;

use num_bigint::BigInt;

use windmill_core::holant::brute_strata;
use windmill_core::mcmc::transition_matrix;
use windmill_core::rational::{double_factorial, int, to_fraction_string, Rational};
use windmill_core::windability::{build_a, parity_relation_holds, verify_com_identity};

use crate::fixtures::{bundled, Fixture};
use crate::parallel::par_map;

/// Known suite names, in the order `all` runs them.
pub const SUITES: [&str; 5] = ["rowsums", "com", "pdecom", "detailed-balance", "strata"];

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRow {
    /// Suite name.
    pub suite: &'static str,
    /// Case label.
    pub case: String,
    /// Outcome.
    pub passed: bool,
    /// Short explanation.
    pub detail: String,
}

impl CheckRow {
    fn new(suite: &'static str, case: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { suite, case: case.into(), passed, detail: detail.into() }
    }
}

impl fmt::Display for CheckRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{:<17} {:<24} {:<5} {}", self.suite, self.case, status, self.detail)
    }
}

/// Renders rows as a table with a header and a summary line.
pub fn table(rows: &[CheckRow]) -> String {
    let mut out = format!("{:<17} {:<24} {:<5} {}\n", "suite", "case", "result", "detail");
    for r in rows {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", rows.len(), failed));
    out
}

/// Row sums of `A_m` against `(2 floor((m-1)/2) + 1)!!` for `1 <= m <= max_m`.
pub fn rowsums(max_m: usize) -> Vec<CheckRow> {
    par_map((1..=max_m).collect(), |m| {
        let a = build_a(m).expect("m >= 1");
        let expected = double_factorial(2 * ((m as i64 - 1) / 2) + 1);
        let bad = a.rows().iter().position(|r| r.iter().sum::<BigInt>() != expected);
        match bad {
            None => CheckRow::new("rowsums", format!("m={m}"), true, format!("every row sums to {expected}")),
            Some(i) => CheckRow::new("rowsums", format!("m={m}"), false, format!("row {i} differs from {expected}")),
        }
    })
}

/// The alternating binomial identity for every `1 <= m < n`, `n <= max_n`.
pub fn com(max_n: usize) -> Vec<CheckRow> {
    par_map((2..=max_n).collect(), |n| {
        let bad: Vec<usize> = (1..n).filter(|&m| !verify_com_identity(m, n).expect("m < n")).collect();
        let detail = if bad.is_empty() { format!("sum vanishes for m=1..{}", n - 1) } else { format!("nonzero for m={bad:?}") };
        CheckRow::new("com", format!("n={n}"), bad.is_empty(), detail)
    })
}

/// The parity relation between `A_{2n}` and `A_{2n-1}` for `1 <= n <= max_n`.
pub fn pdecom(max_n: usize) -> Vec<CheckRow> {
    par_map((1..=max_n).collect(), |n| {
        let ok = parity_relation_holds(n).expect("n >= 1");
        CheckRow::new("pdecom", format!("m={}", 2 * n), ok, if ok { "entrywise split holds" } else { "entry mismatch" })
    })
}

fn fixture_rows(
    suite: &'static str,
    fixtures: Vec<Fixture>,
    check: impl Fn(&Fixture) -> Result<String, String> + Sync + Send,
) -> Vec<CheckRow> {
    par_map(fixtures, |f| match check(&f) {
        Ok(detail) => CheckRow::new(suite, f.name.clone(), true, detail),
        Err(detail) => CheckRow::new(suite, f.name.clone(), false, detail),
    })
}

/// Exact stochasticity, stationarity, detailed balance and irreducibility
/// of the kernel on every bundled fixture.
pub fn detailed_balance() -> Vec<CheckRow> {
    fixture_rows("detailed-balance", bundled(), |f| {
        let inst = f.instance().map_err(|e| e.to_string())?;
        let p = transition_matrix(&inst).map_err(|e| e.to_string())?;
        let mu = p.stationary();
        if !p.is_stochastic() {
            return Err("rows do not sum to 1".into());
        }
        if !p.is_stationary(&mu) {
            return Err("mu P != mu".into());
        }
        if let Some((i, j)) = p.detailed_balance_violation(&mu) {
            return Err(format!("violated at states {i}, {j}"));
        }
        if !p.is_irreducible() {
            return Err("not irreducible".into());
        }
        Ok(format!("{} states", p.len()))
    })
}

/// `Z_0 Z_4 <= Z_2^2` and the applicable `Z_2 / Z_0` bound on every bundled
/// fixture.
pub fn strata() -> Vec<CheckRow> {
    fixture_rows("strata", bundled(), |f| {
        let inst = f.instance().map_err(|e| e.to_string())?;
        let s = brute_strata(&inst).map_err(|e| e.to_string())?;
        let z = |k: usize| s.get(k).cloned().unwrap_or_else(|| int(0));
        let (z0, z2, z4) = (z(0), z(2), z(4));
        if &z0 * &z4 > &z2 * &z2 {
            return Err(format!("Z0 Z4 = {} > Z2^2 = {}", &z0 * &z4, &z2 * &z2));
        }
        let bound = f.problem.ratio_bound(f.edges.len(), f.weights.as_deref());
        let ratio: Option<Rational> = (z0 > int(0)).then(|| &z2 / &z0);
        match (ratio, bound) {
            (Some(r), Some(b)) if r > b => Err(format!("Z2/Z0 = {} exceeds {}", to_fraction_string(&r), to_fraction_string(&b))),
            (Some(r), Some(b)) => Ok(format!("Z2/Z0 = {} <= {}", to_fraction_string(&r), to_fraction_string(&b))),
            _ => Ok("Z0 Z4 <= Z2^2".into()),
        }
    })
}

/// Runs a suite by name; `limit` overrides its default range. `None` for
/// an unknown name.
pub fn run(name: &str, limit: Option<usize>) -> Option<Vec<CheckRow>> {
    Some(match name {
        "rowsums" => rowsums(limit.unwrap_or(14)),
        "com" => com(limit.unwrap_or(30)),
        "pdecom" => pdecom(limit.map_or(6, |m| m / 2)),
        "detailed-balance" => detailed_balance(),
        "strata" => strata(),
        "all" => SUITES.iter().flat_map(|s| run(s, None).expect("known suite")).collect(),
        _ => return None,
    })
}
