//! The verification grid: parseable grid files, the built-in default grid
//! covering the full acceptance matrix, and the runner behind `verify`.
//!
//! Grid file format, one entry per line ('#' starts a comment):
//!
//! ```text
//! p t prime mode params
//! 2 1 T^2+T+1 census 1,3,5,7
//! 3 2 T units 1..6
//! ```
//!
//! Modes: census, units, identity, splitting. Params are comma-separated
//! integers and inclusive ranges `a..b`. For census, identity and splitting
//! entries every value must be coprime to p. The prime is written in the
//! text grammar without spaces. Entries over the enumeration budget are
//! skipped with a note, mirroring the acceptance matrix's budget filter.

use crate::artin_schreier::generator_counts;
use crate::census::{census_bruteforce, census_identity_check, extension_count};
use crate::embed::{certify, splitting_smoke_test_with_primes, SmokeMode};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::irreducible::{MonicIrreducibles, PrimePoly};
use crate::parse::parse_poly;
use crate::ratfunc::RatFunc;
use crate::unit_group::{
    order_p_element_count, order_p_element_count_bruteforce, order_p_subgroup_count,
    order_p_subgroup_count_bruteforce, subgroup_count_difference, units_report,
};
use num_bigint::BigUint;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

/// Degree bound for the splitting smoke test's prime enumeration.
pub const SMOKE_DEGREE_BOUND: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GridMode {
    Census,
    Units,
    Identity,
    Splitting,
}

impl GridMode {
    fn name(self) -> &'static str {
        match self {
            GridMode::Census => "census",
            GridMode::Units => "units",
            GridMode::Identity => "identity",
            GridMode::Splitting => "splitting",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridEntry {
    pub p: u64,
    pub t: u32,
    pub prime_text: String,
    pub mode: GridMode,
    pub params: Vec<u32>,
}

impl GridEntry {
    pub fn label(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|v| v.to_string()).collect();
        format!(
            "p={} t={} P={} {} {}",
            self.p,
            self.t,
            self.prime_text,
            self.mode.name(),
            params.join(",")
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct Grid {
    pub entries: Vec<GridEntry>,
}

impl Grid {
    pub fn filter_mode(&self, mode: GridMode) -> Grid {
        Grid {
            entries: self
                .entries
                .iter()
                .filter(|e| e.mode == mode)
                .cloned()
                .collect(),
        }
    }
}

pub fn field_json(f: &FiniteField) -> serde_json::Value {
    serde_json::json!({
        "p": f.p(),
        "t": f.t(),
        "q": f.q(),
        "modulus": f.modulus(),
    })
}

fn parse_params(text: &str, line: usize) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: u32 = lo.parse().map_err(|_| Error::GridParse {
                line,
                msg: format!("bad range start '{lo}'"),
            })?;
            let hi: u32 = hi.parse().map_err(|_| Error::GridParse {
                line,
                msg: format!("bad range end '{hi}'"),
            })?;
            if lo > hi {
                return Err(Error::GridParse { line, msg: format!("empty range {item}") });
            }
            out.extend(lo..=hi);
        } else {
            out.push(item.parse().map_err(|_| Error::GridParse {
                line,
                msg: format!("bad parameter '{item}'"),
            })?);
        }
    }
    if out.is_empty() {
        return Err(Error::GridParse { line, msg: "no parameters".into() });
    }
    Ok(out)
}

/// Parse and fully validate a grid file: fields must be constructible, the
/// prime must parse as a monic irreducible, and census/identity/splitting
/// parameters must be coprime to p and nonzero.
pub fn parse_grid(text: &str) -> Result<Grid> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::GridParse {
                line: line_no,
                msg: format!("expected 5 fields (p t prime mode params), got {}", fields.len()),
            });
        }
        let p: u64 = fields[0].parse().map_err(|_| Error::GridParse {
            line: line_no,
            msg: format!("bad characteristic '{}'", fields[0]),
        })?;
        let t: u32 = fields[1].parse().map_err(|_| Error::GridParse {
            line: line_no,
            msg: format!("bad extension degree '{}'", fields[1]),
        })?;
        let field = FiniteField::new(p, t, None).map_err(|e| Error::GridParse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let prime_poly = parse_poly(fields[2], &field).map_err(|e| Error::GridParse {
            line: line_no,
            msg: e.to_string(),
        })?;
        PrimePoly::new(prime_poly, &field).map_err(|e| Error::GridParse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let mode = match fields[3] {
            "census" => GridMode::Census,
            "units" => GridMode::Units,
            "identity" => GridMode::Identity,
            "splitting" => GridMode::Splitting,
            other => {
                return Err(Error::GridParse {
                    line: line_no,
                    msg: format!("unknown mode '{other}'"),
                })
            }
        };
        let params = parse_params(fields[4], line_no)?;
        if matches!(mode, GridMode::Census | GridMode::Identity | GridMode::Splitting) {
            for &a in &params {
                if a == 0 || a as u64 % p == 0 {
                    return Err(Error::GridParse {
                        line: line_no,
                        msg: format!("parameter {a} must be nonzero and coprime to p={p}"),
                    });
                }
            }
        } else {
            for &b in &params {
                if b == 0 {
                    return Err(Error::GridParse {
                        line: line_no,
                        msg: "beta must be >= 1".into(),
                    });
                }
            }
        }
        entries.push(GridEntry {
            p,
            t,
            prime_text: fields[2].to_string(),
            mode,
            params,
        });
    }
    Ok(Grid { entries })
}

/// The built-in grid covering the acceptance matrix: p in {2, 3},
/// q in {p, p^2}, every monic irreducible of degree <= 2, alpha in 1..7
/// coprime to p (census/identity/splitting) and beta in 1..6 (units).
/// Budget filtering happens at run time.
pub fn default_grid() -> Grid {
    let mut entries = Vec::new();
    for (p, t) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2)] {
        let field = FiniteField::new(p, t, None).unwrap();
        let alphas: Vec<u32> = (1..=7).filter(|a| *a as u64 % p != 0).collect();
        let betas: Vec<u32> = (1..=6).collect();
        for prime in MonicIrreducibles::new(&field, 2) {
            let prime_text = prime.display(&field).replace(' ', "");
            for (mode, params) in [
                (GridMode::Census, alphas.clone()),
                (GridMode::Units, betas.clone()),
                (GridMode::Identity, alphas.clone()),
                (GridMode::Splitting, alphas.clone()),
            ] {
                entries.push(GridEntry {
                    p,
                    t,
                    prime_text: prime_text.clone(),
                    mode,
                    params,
                });
            }
        }
    }
    Grid { entries }
}

#[derive(Clone, Debug)]
pub struct EntryResult {
    pub label: String,
    pub passed: bool,
    /// One line per parameter: what was checked or why it was skipped.
    pub details: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct GridRunReport {
    pub results: Vec<EntryResult>,
    pub all_passed: bool,
}

impl GridRunReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "all_passed": self.all_passed,
            "entries": self.results.iter().map(|r| serde_json::json!({
                "entry": r.label,
                "passed": r.passed,
                "details": r.details,
            })).collect::<Vec<_>>(),
        })
    }
}

struct SharedContext {
    fields: HashMap<(u64, u32), Arc<FiniteField>>,
    smoke_primes: HashMap<(u64, u32), Arc<Vec<PrimePoly>>>,
}

fn build_context(grid: &Grid) -> Result<SharedContext> {
    let mut fields = HashMap::new();
    let mut smoke_primes = HashMap::new();
    for e in &grid.entries {
        let key = (e.p, e.t);
        if !fields.contains_key(&key) {
            fields.insert(key, Arc::new(FiniteField::new(e.p, e.t, None)?));
        }
    }
    // Enumerate the smoke test primes once per field, shared across entries.
    let keys: Vec<(u64, u32)> = grid
        .entries
        .iter()
        .filter(|e| e.mode == GridMode::Splitting)
        .map(|e| (e.p, e.t))
        .collect::<std::collections::HashSet<_>>()
        .into_iter()
        .collect();
    let lists: Vec<((u64, u32), Vec<PrimePoly>)> = keys
        .into_par_iter()
        .map(|key| {
            let f = &fields[&key];
            let primes: Vec<PrimePoly> =
                MonicIrreducibles::new(f, SMOKE_DEGREE_BOUND).collect();
            (key, primes)
        })
        .collect();
    for (key, list) in lists {
        smoke_primes.insert(key, Arc::new(list));
    }
    Ok(SharedContext { fields, smoke_primes })
}

fn run_entry(entry: &GridEntry, ctx: &SharedContext, budget: u64) -> EntryResult {
    let f = &ctx.fields[&(entry.p, entry.t)];
    let prime = PrimePoly::new(parse_poly(&entry.prime_text, f).unwrap(), f).unwrap();
    let mut details = Vec::new();
    let mut passed = true;
    for &v in &entry.params {
        let outcome = run_one_param(entry.mode, &prime, v, f, ctx, budget, entry);
        match outcome {
            Ok(msg) => details.push(format!("{}={v}: {msg}", param_name(entry.mode))),
            Err(msg) => {
                passed = false;
                details.push(format!("{}={v}: FAIL: {msg}", param_name(entry.mode)));
            }
        }
    }
    EntryResult { label: entry.label(), passed, details }
}

fn param_name(mode: GridMode) -> &'static str {
    match mode {
        GridMode::Units => "beta",
        _ => "alpha",
    }
}

fn run_one_param(
    mode: GridMode,
    prime: &PrimePoly,
    v: u32,
    f: &FiniteField,
    ctx: &SharedContext,
    budget: u64,
    entry: &GridEntry,
) -> std::result::Result<String, String> {
    match mode {
        GridMode::Census => {
            match census_bruteforce(prime, v, f, budget, false) {
                Err(Error::BudgetExceeded { .. }) => Ok("skipped (budget)".into()),
                Err(e) => Err(e.to_string()),
                Ok(rep) => {
                    let brute = rep.brute_count.unwrap();
                    if BigUint::from(brute) != rep.formula_count {
                        return Err(format!(
                            "class count {brute} != formula {}",
                            rep.formula_count
                        ));
                    }
                    // Every class carries exactly (p-1)/p q^{d alpha_0 + 1}
                    // equations.
                    let expected_size =
                        generator_counts(prime, v, f).map_err(|e| e.to_string())?.equations;
                    for (i, size) in rep.class_sizes.iter().enumerate() {
                        if BigUint::from(*size) != expected_size {
                            return Err(format!(
                                "class {i} has {size} equations, expected {expected_size}"
                            ));
                        }
                    }
                    Ok(format!(
                        "{} equations in {brute} classes (formula {})",
                        rep.enumerated_equations, rep.formula_count
                    ))
                }
            }
        }
        GridMode::Units => {
            let rep = units_report(prime, v, f, budget).map_err(|e| e.to_string())?;
            match (rep.r_p_brute, rep.subgroups_brute) {
                (Some(rp), Some(sub)) => {
                    if BigUint::from(rp) != rep.r_p_formula {
                        return Err(format!("r_p {rp} != formula {}", rep.r_p_formula));
                    }
                    if BigUint::from(sub) != rep.subgroups_formula {
                        return Err(format!(
                            "subgroup count {sub} != formula {}",
                            rep.subgroups_formula
                        ));
                    }
                    Ok(format!("r_p={rp} subgroups={sub}"))
                }
                _ => Ok(format!(
                    "formula only (budget): r_p={} subgroups={}",
                    rep.r_p_formula, rep.subgroups_formula
                )),
            }
        }
        GridMode::Identity => {
            // N_alpha = p (N_{alpha+1} - N_alpha), with brute confirmation
            // of the difference when the budget allows enumerating the
            // bigger unit group.
            let ok = census_identity_check(prime, v, f).map_err(|e| e.to_string())?;
            if !ok {
                return Err("pigeonhole identity failed".into());
            }
            let diff = subgroup_count_difference(prime, v, f).map_err(|e| e.to_string())?;
            let n_alpha = extension_count(prime, v, f).map_err(|e| e.to_string())?;
            if n_alpha != &diff * BigUint::from(f.p()) {
                return Err("N_alpha != p * difference".into());
            }
            let brute_hi = order_p_subgroup_count_bruteforce(prime, v + 1, f, budget);
            let brute_lo = order_p_subgroup_count_bruteforce(prime, v, f, budget);
            if let (Ok(hi), Ok(lo)) = (brute_hi, brute_lo) {
                if BigUint::from(hi - lo) != diff {
                    return Err(format!("brute difference {} != {diff}", hi - lo));
                }
                // Also confirm r_p counts behind the formula.
                let rp = order_p_element_count_bruteforce(prime, v + 1, f, budget)
                    .map_err(|e| e.to_string())?;
                if BigUint::from(rp) != order_p_element_count(prime, v + 1, f) {
                    return Err("brute r_p mismatch".into());
                }
                Ok(format!("difference={diff} (brute-confirmed)"))
            } else {
                Ok(format!("difference={diff} (formula only)"))
            }
        }
        GridMode::Splitting => {
            let s = RatFunc::new(crate::poly::Poly::one(), prime.power(v, f), f)
                .map_err(|e| e.to_string())?;
            let cert = certify(&s, f).map_err(|e| e.to_string())?;
            if cert.finite_modulus.len() != 1 {
                return Err("expected a single modulus factor".into());
            }
            if cert.finite_modulus[0].0 != *prime || cert.finite_modulus[0].1 != v + 1 {
                return Err(format!(
                    "certificate exponent {} != pole order + 1 = {}",
                    cert.finite_modulus[0].1,
                    v + 1
                ));
            }
            if cert.infinite_exponent != 0 || cert.constant_degree != f.p() {
                return Err("unexpected certificate shape".into());
            }
            let primes = &ctx.smoke_primes[&(entry.p, entry.t)];
            let report =
                splitting_smoke_test_with_primes(&cert, SMOKE_DEGREE_BOUND, f, primes);
            if report.mode != SmokeMode::Full {
                return Err("expected a full-mode smoke report".into());
            }
            if report.violations != 0 {
                return Err(format!("{} splitting violations", report.violations));
            }
            if report.vacuous {
                Ok("smoke vacuous (modulus degree over bound)".into())
            } else {
                Ok(format!("smoke ok ({} primes checked)", report.checks.len()))
            }
        }
    }
}

/// Run every entry (in parallel); results keep the grid order.
pub fn run_grid(grid: &Grid, budget: u64) -> Result<GridRunReport> {
    let ctx = build_context(grid)?;
    let results: Vec<EntryResult> = grid
        .entries
        .par_iter()
        .map(|e| run_entry(e, &ctx, budget))
        .collect();
    let all_passed = results.iter().all(|r| r.passed);
    Ok(GridRunReport { results, all_passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_grid_basics() {
        let grid = parse_grid(
            "# comment\n2 1 T census 1,3\n3 1 T+1 units 1..4\n\n2 1 T^2+T+1 identity 1 # tail\n",
        )
        .unwrap();
        assert_eq!(grid.entries.len(), 3);
        assert_eq!(grid.entries[0].mode, GridMode::Census);
        assert_eq!(grid.entries[1].params, vec![1, 2, 3, 4]);
        assert_eq!(grid.entries[2].prime_text, "T^2+T+1");
    }

    #[test]
    fn parse_grid_rejects_bad_entries() {
        // alpha divisible by p.
        assert!(matches!(
            parse_grid("2 1 T census 1,2"),
            Err(Error::GridParse { .. })
        ));
        // Reducible prime.
        assert!(matches!(
            parse_grid("2 1 T^2+1 census 1"),
            Err(Error::GridParse { .. })
        ));
        // Unknown mode.
        assert!(matches!(
            parse_grid("2 1 T frobnicate 1"),
            Err(Error::GridParse { .. })
        ));
        // Wrong field count.
        assert!(matches!(
            parse_grid("2 1 T census"),
            Err(Error::GridParse { .. })
        ));
        // Empty grid passes with 0 entries.
        let grid = parse_grid("# nothing\n").unwrap();
        assert!(grid.entries.is_empty());
        let report = run_grid(&grid, 1 << 20).unwrap();
        assert!(report.all_passed);
        assert!(report.results.is_empty());
    }

    #[test]
    fn default_grid_shape() {
        let grid = default_grid();
        // 3 + 10 + 6 + 45 primes of degree <= 2, times 4 modes.
        assert_eq!(grid.entries.len(), (3 + 10 + 6 + 45) * 4);
        let census = grid.filter_mode(GridMode::Census);
        assert_eq!(census.entries.len(), 64);
        // Alphas coprime to p.
        for e in &census.entries {
            for &a in &e.params {
                assert_ne!(a as u64 % e.p, 0);
            }
        }
    }

    #[test]
    fn small_grid_runs_green() {
        let grid = parse_grid(
            "2 1 T census 1,3\n2 1 T units 1..4\n2 1 T identity 1,3\n2 1 T splitting 1,3\n3 1 T census 1,2\n3 1 T identity 1,2\n",
        )
        .unwrap();
        let report = run_grid(&grid, 1 << 20).unwrap();
        for r in &report.results {
            assert!(r.passed, "{}: {:?}", r.label, r.details);
        }
        assert!(report.all_passed);
    }
}
