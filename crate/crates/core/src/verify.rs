//! Both sides of the specialization identity, compared degree by degree over a
//! formal base or as Euler characteristics over a projective space.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bundles::csm_smooth_ci;
use crate::catalog::{FamilyScenario, ScenarioSpec};
use crate::constructible::{csm_of_function, Registry, StratificationTable};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::ring::{BaseGeometry, ChowClass, Rational};
use crate::specialize::{csm_of_terms, DeltaTerm};

/// Environment variable overriding the formal dimension cap.
pub const MAX_DIM_ENV: &str = "VERDIER_MAX_DIM";
pub const DEFAULT_MAX_DIM: u32 = 4;

/// Largest formal base dimension allowed, from [`MAX_DIM_ENV`] if set.
pub fn dimension_cap() -> u32 {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Formal,
    Numeric,
    CrossCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub k: u32,
    pub lhs: String,
    pub rhs: String,
    pub diff: String,
}

/// Euler characteristics behind the tadpole relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    #[serde(rename = "chi_Y")]
    pub chi_y: i64,
    /// `chi_<stratum>` for every stratum of the identity.
    #[serde(flatten)]
    pub chi: BTreeMap<String, i64>,
    pub identity: String,
    pub lhs_total: i64,
    pub rhs_total: i64,
    /// `∫ c_SM(φ0_* σ 1)` from the smooth models of the resolution alone.
    pub rhs_from_models: i64,
}

/// The three values of each side in a cross-check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideValues {
    /// Degree 0 of the formal class, specialized to the base.
    pub formal: i64,
    /// Degree 0 of the class computed directly on the base.
    pub direct: i64,
    /// Ledger total.
    pub ledger: i64,
}

impl SideValues {
    fn agree(&self) -> bool {
        self.formal == self.direct && self.direct == self.ledger
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub formal_dim: u32,
    pub lhs: SideValues,
    pub rhs: SideValues,
}

/// How an identity printed in the literature differs from the true one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedIdentity {
    pub function: String,
    /// `c_SM(printed) - c_SM(Y)`, or its degree 0 over a concrete base.
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub base: String,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<Ledger>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_identity: Option<PrintedIdentity>,
    pub verdict: Verdict,
    /// Total difference `lhs - rhs` when the check fails.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difference: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            Mode::Formal => "formal",
            Mode::Numeric => "numeric",
            Mode::CrossCheck => "cross-check",
        };
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "## {} over {} ({mode}): {verdict}\n", self.family, self.base);
        if !self.degrees.is_empty() {
            out.push_str("| k | lhs | rhs | diff |\n|---|---|---|---|\n");
            for r in &self.degrees {
                let _ = writeln!(out, "| {} | `{}` | `{}` | `{}` |", r.k, r.lhs, r.rhs, r.diff);
            }
            out.push('\n');
        }
        if let Some(l) = &self.ledger {
            let _ = writeln!(out, "- chi_Y = {}", l.chi_y);
            for (name, chi) in &l.chi {
                let _ = writeln!(out, "- {name} = {chi}");
            }
            let _ = writeln!(out, "- identity: {}", l.identity);
            let _ = writeln!(out, "- lhs_total = {}, rhs_total = {}", l.lhs_total, l.rhs_total);
            let _ = writeln!(out, "- rhs from smooth models = {}", l.rhs_from_models);
            out.push('\n');
        }
        if let Some(c) = &self.cross_check {
            out.push_str("| side | formal | direct | ledger |\n|---|---|---|---|\n");
            for (side, v) in [("lhs", &c.lhs), ("rhs", &c.rhs)] {
                let _ = writeln!(out, "| {side} | {} | {} | {} |", v.formal, v.direct, v.ledger);
            }
            out.push('\n');
        }
        if let Some(p) = &self.printed_identity {
            let _ = writeln!(
                out,
                "Printed identity `{}` differs by `{}`.\n",
                p.function, p.difference
            );
        }
        if let Some(d) = &self.difference {
            let _ = writeln!(out, "Difference: `{d}`\n");
        }
        out
    }
}

/// A deliberate corruption of the right-hand side, for mutation testing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    /// Remove the δ term of a component or intersection.
    Drop(String),
    /// Replace the coefficient of a δ term.
    Reweight(String, i64),
}

impl Mutation {
    fn apply<'a>(&self, terms: &mut Vec<DeltaTerm<'a>>) -> Result<()> {
        let name = match self {
            Mutation::Drop(n) | Mutation::Reweight(n, _) => n,
        };
        let i = terms
            .iter()
            .position(|t| t.name == name)
            .ok_or_else(|| Error::InvalidResolution(format!("no δ term `{name}` to mutate")))?;
        match self {
            Mutation::Drop(_) => {
                terms.remove(i);
            }
            Mutation::Reweight(_, c) => terms[i].coefficient = *c,
        }
        Ok(())
    }
}

/// Formal base carrying exactly the line symbols the scenario uses.
pub fn formal_base(spec: &ScenarioSpec, d: u32) -> BaseGeometry {
    let symbols = spec.line_symbols();
    let symbols: Vec<&str> = symbols.iter().map(String::as_str).collect();
    BaseGeometry::formal(d, &symbols)
}

fn check_dim(d: u32) -> Result<()> {
    let cap = dimension_cap();
    if d == 0 || d > cap {
        return Err(Error::DimensionCap { requested: d, cap });
    }
    Ok(())
}

/// Compares `c_SM(φ_* 1_Y)` with `c_SM(φ0_* σ 1)` in every degree over a
/// formal base of dimension `d`.
pub fn check_identity_formal(spec: &ScenarioSpec, d: u32) -> Result<VerificationReport> {
    check_identity_formal_mutated(spec, d, None)
}

pub fn check_identity_formal_mutated(
    spec: &ScenarioSpec,
    d: u32,
    mutation: Option<&Mutation>,
) -> Result<VerificationReport> {
    check_dim(d)?;
    let scenario = spec.instantiate(&formal_base(spec, d))?;
    formal_report(&scenario, mutation)
}

fn rhs_class(s: &FamilyScenario, mutation: Option<&Mutation>) -> Result<ChowClass> {
    let mut terms = s.resolution.delta_terms();
    if let Some(m) = mutation {
        m.apply(&mut terms)?;
    }
    if terms.is_empty() {
        return Ok(ChowClass::zero(s.base.ring()));
    }
    csm_of_terms(&terms)
}

/// Degree-by-degree comparison on an instantiated scenario.
pub fn formal_report(s: &FamilyScenario, mutation: Option<&Mutation>) -> Result<VerificationReport> {
    let lhs = s.lhs.csm()?;
    let rhs = rhs_class(s, mutation)?;
    let diff = lhs.try_sub(&rhs)?;
    let degrees = (0..=s.base.dim())
        .map(|k| DegreeRow {
            k,
            lhs: lhs.degree_component(k).to_string(),
            rhs: rhs.degree_component(k).to_string(),
            diff: diff.degree_component(k).to_string(),
        })
        .collect();
    let printed_identity = match &s.spec.printed_identity {
        Some(f) => {
            let registry = solve_registry(s)?;
            let delta = csm_of_function(f, &registry)?.try_sub(&lhs)?;
            Some(PrintedIdentity {
                function: f.to_string(),
                difference: delta.to_string(),
            })
        }
        None => None,
    };
    Ok(VerificationReport {
        family: s.name().to_string(),
        base: s.base.describe(),
        mode: Mode::Formal,
        degrees,
        ledger: None,
        cross_check: None,
        printed_identity,
        verdict: Verdict::from_bool(diff.is_zero()),
        difference: (!diff.is_zero()).then(|| diff.to_string()),
    })
}

/// Registry with every unknown stratum solved from the tables of the
/// resolution and of the fibration. Each table contributes one equation
/// `c_SM(table pushforward) = c_SM(model)`; tables are swept until no
/// unknown is left.
pub fn solve_registry(s: &FamilyScenario) -> Result<Registry> {
    let mut equations: Vec<(&StratificationTable, ChowClass)> = Vec::new();
    for t in s.resolution.delta_terms() {
        equations.push((t.table, csm_smooth_ci(t.model)?));
    }
    if let Some(t) = &s.spec.lhs_table {
        equations.push((t, s.lhs.csm()?));
    }
    let mut registry = s.registry.clone();
    let mut used = vec![false; equations.len()];
    while !registry.unknowns().is_empty() {
        let mut progressed = false;
        for (i, (table, total)) in equations.iter().enumerate() {
            if used[i] {
                continue;
            }
            match crate::constructible::solve_stratum_csm(table, total, &registry) {
                Ok((_, _, next)) => {
                    registry = next;
                    used[i] = true;
                    progressed = true;
                }
                Err(Error::Underdetermined(_) | Error::NonInvertible { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if !progressed {
            return Err(Error::UnsolvedStratum(registry.unknowns().join(", ")));
        }
    }
    Ok(registry)
}

fn integer(q: &Rational, what: &str) -> Result<i64> {
    if !q.is_integer() {
        return Err(Error::InvalidResolution(format!("{what} = {q} is not an integer")));
    }
    q.to_integer()
        .to_i64()
        .ok_or_else(|| Error::InvalidResolution(format!("{what} = {q} does not fit in 64 bits")))
}

fn euler(c: &ChowClass, what: &str) -> Result<i64> {
    integer(&c.integrate_top()?, what)
}

fn concrete(base: &BaseGeometry) -> Result<()> {
    if !base.is_concrete() {
        return Err(Error::NoIntegration { base: base.describe() });
    }
    Ok(())
}

/// The tadpole relation `χ(Y) = Σ a_i χ(Z_i)` over a projective space, with
/// singular strata solved from their stratification tables.
pub fn check_tadpole_numeric(spec: &ScenarioSpec, base: &BaseGeometry) -> Result<VerificationReport> {
    concrete(base)?;
    numeric_report(&spec.instantiate(base)?)
}

pub fn numeric_report(s: &FamilyScenario) -> Result<VerificationReport> {
    concrete(&s.base)?;
    let ledger = ledger(s)?;
    let ok = ledger.lhs_total == ledger.rhs_total && ledger.rhs_total == ledger.rhs_from_models;
    let printed_identity = match &s.spec.printed_identity {
        Some(f) => {
            let registry = solve_registry(s)?;
            let mut total = 0i64;
            for (name, c) in f.terms() {
                total += c * euler(&registry.csm(name)?, name)?;
            }
            Some(PrintedIdentity {
                function: f.to_string(),
                difference: (total - ledger.chi_y).to_string(),
            })
        }
        None => None,
    };
    Ok(VerificationReport {
        family: s.name().to_string(),
        base: s.base.describe(),
        mode: Mode::Numeric,
        degrees: vec![],
        difference: (!ok).then(|| (ledger.lhs_total - ledger.rhs_total).to_string()),
        ledger: Some(ledger),
        cross_check: None,
        printed_identity,
        verdict: Verdict::from_bool(ok),
    })
}

fn ledger(s: &FamilyScenario) -> Result<Ledger> {
    let registry = solve_registry(s)?;
    let chi_y = euler(&s.lhs.csm()?, "chi_Y")?;
    let identity = s.expected_pushforward();
    let mut chi = BTreeMap::new();
    let mut rhs_total = 0i64;
    for (name, c) in identity.terms() {
        let x = euler(&registry.csm(name)?, name)?;
        chi.insert(format!("chi_{name}"), x);
        rhs_total += c * x;
    }
    let rhs_from_models = euler(&rhs_class(s, None)?, "rhs")?;
    Ok(Ledger {
        chi_y,
        chi,
        identity: identity.to_string(),
        lhs_total: chi_y,
        rhs_total,
        rhs_from_models,
    })
}

/// Runs the formal pipeline with `d = dim B`, specializes both sides to
/// `base`, and compares them with the classes computed on `base` directly and
/// with the numeric ledger.
pub fn cross_check_modes(spec: &ScenarioSpec, base: &BaseGeometry) -> Result<VerificationReport> {
    concrete(base)?;
    let d = base.dim();
    let formal = spec.instantiate(&formal_base(spec, d))?;
    let direct = spec.instantiate(base)?;

    let f_lhs = formal.lhs.csm()?.specialize_base(base)?;
    let f_rhs = rhs_class(&formal, None)?.specialize_base(base)?;
    let ledger = ledger(&direct)?;
    let lhs = SideValues {
        formal: euler(&f_lhs, "formal lhs")?,
        direct: euler(&direct.lhs.csm()?, "direct lhs")?,
        ledger: ledger.lhs_total,
    };
    let rhs = SideValues {
        formal: euler(&f_rhs, "formal rhs")?,
        direct: ledger.rhs_from_models,
        ledger: ledger.rhs_total,
    };
    let ok = lhs.agree() && rhs.agree() && lhs.ledger == rhs.ledger;
    Ok(VerificationReport {
        family: spec.name.clone(),
        base: base.describe(),
        mode: Mode::CrossCheck,
        degrees: vec![],
        difference: (!ok).then(|| format!("lhs {lhs:?} vs rhs {rhs:?}")),
        ledger: Some(ledger),
        cross_check: Some(CrossCheck {
            formal_dim: d,
            lhs,
            rhs,
        }),
        printed_identity: None,
        verdict: Verdict::from_bool(ok),
    })
}

/// One unit of batch work.
#[derive(Debug, Clone)]
pub enum Check {
    Formal { dim: u32 },
    Numeric(BaseGeometry),
    CrossCheck(BaseGeometry),
}

#[derive(Debug, Clone)]
pub struct Job {
    pub spec: Arc<ScenarioSpec>,
    pub check: Check,
}

impl Job {
    pub fn run(&self) -> Result<VerificationReport> {
        match &self.check {
            Check::Formal { dim } => check_identity_formal(&self.spec, *dim),
            Check::Numeric(base) => check_tadpole_numeric(&self.spec, base),
            Check::CrossCheck(base) => cross_check_modes(&self.spec, base),
        }
    }
}

/// Runs every job; results come back in input order.
pub fn run_batch(jobs: &[Job], exec: Execution) -> Vec<Result<VerificationReport>> {
    par::map(exec, jobs, Job::run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin, builtin_names};

    fn p(n: u32, l: i64) -> BaseGeometry {
        BaseGeometry::projective(n).with_assignment("L", l)
    }

    #[test]
    fn weierstrass_formal_passes() {
        let r = check_identity_formal(&builtin("weierstrass").unwrap(), 3).unwrap();
        assert!(r.passed());
        assert_eq!(r.degrees.len(), 4);
        assert!(r.degrees.iter().all(|row| row.diff == "0"));
        assert!(r.difference.is_none());
    }

    #[test]
    fn dropping_the_pinch_correction_fails() {
        let spec = builtin("weierstrass").unwrap();
        let r = check_identity_formal_mutated(&spec, 3, Some(&Mutation::Drop("X".into()))).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.difference.is_some());
        assert_ne!(r.degrees[0].diff, "0");
    }

    #[test]
    fn mutation_of_missing_term_is_an_error() {
        let spec = builtin("weierstrass").unwrap();
        assert!(check_identity_formal_mutated(&spec, 2, Some(&Mutation::Drop("nope".into()))).is_err());
    }

    #[test]
    fn dimension_cap() {
        let spec = builtin("weierstrass").unwrap();
        assert_eq!(
            check_identity_formal(&spec, 0).unwrap_err(),
            Error::DimensionCap {
                requested: 0,
                cap: DEFAULT_MAX_DIM
            }
        );
        assert!(matches!(
            check_identity_formal(&spec, 9),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn k3_ledger() {
        let r = check_tadpole_numeric(&builtin("weierstrass").unwrap(), &p(1, 2)).unwrap();
        let l = r.ledger.unwrap();
        assert_eq!(l.chi_y, 24);
        assert_eq!(l.chi["chi_O"], 4);
        assert_eq!(l.chi["chi_D"], 16);
        assert_eq!(l.chi["chi_S"], 0);
        assert_eq!(l.rhs_total, 24);
        assert!(r.verdict.passed());
    }

    #[test]
    fn e6_printed_identity_misses_t2() {
        let spec = builtin("e6").unwrap();
        let r = check_tadpole_numeric(&spec, &p(2, 3)).unwrap();
        assert!(r.passed());
        let l = r.ledger.as_ref().unwrap();
        assert_eq!(l.chi_y, -216);
        assert_eq!(l.chi["chi_T2"], 54);
        assert_eq!(r.printed_identity.unwrap().difference, "-54");

        let f = check_identity_formal(&spec, 2).unwrap();
        assert!(f.passed());
        let s = spec.instantiate(&formal_base(&spec, 2)).unwrap();
        let reg = solve_registry(&s).unwrap();
        let t2 = reg.csm("T2").unwrap();
        assert_eq!(f.printed_identity.unwrap().difference, t2.neg().to_string());
    }

    /// The singular brane is a plane curve `a^2 = h b^2` of degree `2 deg a`
    /// with a node at each point of `a = b = 0`.
    #[test]
    fn nodal_brane_oracles_on_p2() {
        let nodal = |deg_a: i64, deg_b: i64| {
            let d = 2 * deg_a;
            let nodes = deg_a * deg_b;
            (-d * (d - 3) + nodes, nodes)
        };
        // L = 3: h has degree 6
        for (family, d, t, (deg_a, deg_b)) in [
            ("e6", "chi_D2", "chi_T2", (9, 6)),
            ("e7", "chi_D3", "chi_T3", (12, 9)),
            ("d5", "chi_D9", "chi_T9", (6, 3)),
        ] {
            let r = check_tadpole_numeric(&builtin(family).unwrap(), &p(2, 3)).unwrap();
            let l = r.ledger.as_ref().unwrap();
            let (chi_d, nodes) = nodal(deg_a, deg_b);
            assert_eq!((l.chi[d], l.chi[t]), (chi_d, nodes), "{family}");
            assert_eq!(r.printed_identity.unwrap().difference, (-nodes).to_string(), "{family}");
        }
    }

    #[test]
    fn numeric_rejects_formal_base() {
        let spec = builtin("weierstrass").unwrap();
        let b = formal_base(&spec, 2);
        assert!(matches!(
            check_tadpole_numeric(&spec, &b),
            Err(Error::NoIntegration { .. })
        ));
        assert!(matches!(cross_check_modes(&spec, &b), Err(Error::NoIntegration { .. })));
    }

    #[test]
    fn cross_check_k3() {
        let r = cross_check_modes(&builtin("weierstrass").unwrap(), &p(1, 2)).unwrap();
        let c = r.cross_check.unwrap();
        assert_eq!(
            c.lhs,
            SideValues {
                formal: 24,
                direct: 24,
                ledger: 24
            }
        );
        assert_eq!(
            c.rhs,
            SideValues {
                formal: 24,
                direct: 24,
                ledger: 24
            }
        );
    }

    #[test]
    fn batch_order_and_determinism() {
        let jobs: Vec<Job> = builtin_names()
            .iter()
            .map(|n| Job {
                spec: Arc::new(builtin(n).unwrap()),
                check: Check::Formal { dim: 2 },
            })
            .collect();
        let seq = run_batch(&jobs, Execution::Sequential);
        let par = run_batch(&jobs, Execution::Parallel);
        assert_eq!(seq, par);
        for (r, n) in seq.iter().zip(builtin_names()) {
            let r = r.as_ref().unwrap();
            assert_eq!(&r.family, n);
            assert!(r.passed(), "{n}");
        }
    }

    #[test]
    fn report_round_trips() {
        let r = check_tadpole_numeric(&builtin("weierstrass").unwrap(), &p(2, 3)).unwrap();
        let json = r.to_json();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.contains("\"chi_Y\": -540"));
        assert!(r.to_markdown().contains("PASS"));
    }
}
