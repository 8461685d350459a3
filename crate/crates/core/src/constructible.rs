//! Constructible functions over a registry of named strata.
//!
//! Strata are names with attached class data; containment between them is
//! only ever expressed through stratification tables. A table describes a
//! proper map `f: Z -> B` whose fibres have constant Euler characteristic
//! `χ_i` over each locally closed piece `V_i \ W_i`, so that
//! `f_* 1_Z = Σ χ_i (1_{V_i} - 1_{W_i})`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bundles::{csm_smooth_ci, CompleteIntersection, Space};
use crate::error::{Error, Result};
use crate::ring::{BaseGeometry, ChowClass, Rational};

/// Euler characteristics of the fibre types that occur in the catalog.
pub mod fiber_euler {
    pub const ELLIPTIC: i64 = 0;
    pub const NODAL_CUBIC: i64 = 1;
    pub const CUSPIDAL_CUBIC: i64 = 2;
    pub const SMOOTH_CONIC: i64 = 2;
    pub const LINE_PAIR: i64 = 3;
    pub const DOUBLE_LINE: i64 = 2;
    /// Chain of three lines, as over the centre of a blowup of a line pair.
    pub const LINE_CHAIN: i64 = 4;
    pub const POINT: i64 = 1;
    pub const TWO_POINTS: i64 = 2;
}

/// Name of the stratum every registry carries for the whole base.
pub const BASE_STRATUM: &str = "B";

#[derive(Debug, Clone)]
pub enum CsmSource {
    /// Smooth complete intersection whose CSM class is computed by adjunction.
    SmoothModel(CompleteIntersection),
    /// CSM class (pushed to the base) given directly, e.g. after solving.
    Registered(ChowClass),
    Unknown,
}

impl CsmSource {
    /// A smooth complete intersection, or the empty set when there are more
    /// equations than the ambient dimension or one of them is a section of
    /// the trivial bundle (general sections then have no common zero).
    pub fn smooth_or_empty(ambient: Space, hypersurfaces: Vec<ChowClass>) -> Result<CsmSource> {
        if hypersurfaces.len() > ambient.dim() as usize || hypersurfaces.iter().any(ChowClass::is_zero) {
            return Ok(CsmSource::Registered(ChowClass::zero(ambient.root().ring())));
        }
        Ok(CsmSource::SmoothModel(CompleteIntersection::new(
            ambient,
            hypersurfaces,
            true,
        )?))
    }
}

#[derive(Debug, Clone)]
pub struct Stratum {
    pub name: String,
    pub source: CsmSource,
}

/// An immutable set of strata over one base. Updates return a new registry.
#[derive(Debug, Clone)]
pub struct Registry {
    base: BaseGeometry,
    strata: Arc<BTreeMap<String, Stratum>>,
}

impl Registry {
    /// A registry holding only the base stratum `B`.
    pub fn new(base: BaseGeometry) -> Self {
        let mut strata = BTreeMap::new();
        strata.insert(
            BASE_STRATUM.to_string(),
            Stratum {
                name: BASE_STRATUM.to_string(),
                source: CsmSource::SmoothModel(CompleteIntersection::whole(Space::Base(base.clone()))),
            },
        );
        Registry {
            base,
            strata: Arc::new(strata),
        }
    }

    pub fn base(&self) -> &BaseGeometry {
        &self.base
    }

    pub fn with_stratum(&self, name: &str, source: CsmSource) -> Result<Registry> {
        if self.strata.contains_key(name) {
            return Err(Error::DuplicateStratum(name.to_string()));
        }
        match &source {
            CsmSource::SmoothModel(z) if z.ambient().root() != &self.base => {
                return Err(Error::BaseMismatch {
                    left: z.ambient().root().describe(),
                    right: self.base.describe(),
                })
            }
            CsmSource::Registered(c) if c.ring() != self.base.ring() => {
                return Err(Error::BaseMismatch {
                    left: format!("class of {name}"),
                    right: self.base.describe(),
                })
            }
            _ => {}
        }
        let mut strata = (*self.strata).clone();
        strata.insert(
            name.to_string(),
            Stratum {
                name: name.to_string(),
                source,
            },
        );
        Ok(Registry {
            base: self.base.clone(),
            strata: Arc::new(strata),
        })
    }

    /// Replaces the source of an existing stratum with a known class.
    pub fn with_solved(&self, name: &str, csm: ChowClass) -> Result<Registry> {
        if !self.strata.contains_key(name) {
            return Err(Error::UnregisteredStratum(name.to_string()));
        }
        let mut strata = (*self.strata).clone();
        strata.insert(
            name.to_string(),
            Stratum {
                name: name.to_string(),
                source: CsmSource::Registered(csm),
            },
        );
        Ok(Registry {
            base: self.base.clone(),
            strata: Arc::new(strata),
        })
    }

    pub fn get(&self, name: &str) -> Result<&Stratum> {
        self.strata
            .get(name)
            .ok_or_else(|| Error::UnregisteredStratum(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.strata.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.strata.keys().map(String::as_str)
    }

    pub fn is_unknown(&self, name: &str) -> Result<bool> {
        Ok(matches!(self.get(name)?.source, CsmSource::Unknown))
    }

    pub fn unknowns(&self) -> Vec<String> {
        self.strata
            .values()
            .filter(|s| matches!(s.source, CsmSource::Unknown))
            .map(|s| s.name.clone())
            .collect()
    }

    /// `c_SM(1_W)` pushed to the base.
    pub fn csm(&self, name: &str) -> Result<ChowClass> {
        match &self.get(name)?.source {
            CsmSource::SmoothModel(z) => csm_smooth_ci(z),
            CsmSource::Registered(c) => Ok(c.clone()),
            CsmSource::Unknown => Err(Error::UnsolvedStratum(name.to_string())),
        }
    }
}

/// A finite integer combination of stratum indicators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstructibleFunction {
    terms: BTreeMap<String, i64>,
}

impl ConstructibleFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn indicator(name: &str) -> Self {
        Self::from_terms([(name, 1)])
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut f = Self::zero();
        for (name, c) in terms {
            f.add_term(name, c);
        }
        f
    }

    pub fn add_term(&mut self, name: &str, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(name.to_string()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(name);
        }
    }

    pub fn coefficient(&self, name: &str) -> i64 {
        self.terms.get(name).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, i64)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(n, c)| (n, c * k)))
    }

    /// Renames strata; coefficients of names mapped together are summed.
    pub fn rename(&self, map: impl Fn(&str) -> String) -> Self {
        let mut out = Self::zero();
        for (n, c) in self.terms() {
            out.add_term(&map(n), c);
        }
        out
    }
}

impl Add for &ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn add(self, rhs: &ConstructibleFunction) -> ConstructibleFunction {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, c);
        }
        out
    }
}

impl Sub for &ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn sub(self, rhs: &ConstructibleFunction) -> ConstructibleFunction {
        self + &(-rhs)
    }
}

impl Neg for &ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn neg(self) -> ConstructibleFunction {
        self.scale(-1)
    }
}

impl fmt::Display for ConstructibleFunction {
    /// `2*1_O + 1_D - 1_S`, in name order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (name, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "1_{name}")?;
        }
        Ok(())
    }
}

/// One row `(V, W, χ)`: fibres over `V \ W` have Euler characteristic `χ`.
/// `removed = None` stands for the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub open: String,
    pub removed: Option<String>,
    pub fiber_euler: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StratificationTable {
    pub rows: Vec<TableRow>,
}

impl StratificationTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(mut self, open: &str, removed: Option<&str>, fiber_euler: i64) -> Self {
        self.rows.push(TableRow {
            open: open.to_string(),
            removed: removed.map(str::to_string),
            fiber_euler,
        });
        self
    }

    pub fn strata(&self) -> impl Iterator<Item = &str> {
        self.rows
            .iter()
            .flat_map(|r| std::iter::once(r.open.as_str()).chain(r.removed.as_deref()))
    }

    /// `Σ χ_i (1_{V_i} - 1_{W_i})`, without consulting a registry.
    pub fn function(&self) -> ConstructibleFunction {
        let mut f = ConstructibleFunction::zero();
        for r in &self.rows {
            f.add_term(&r.open, r.fiber_euler);
            if let Some(w) = &r.removed {
                f.add_term(w, -r.fiber_euler);
            }
        }
        f
    }

    /// Alternating Euler count `Σ χ_i (χ(V_i) - χ(W_i))` from per-stratum
    /// Euler characteristics.
    pub fn alternating_count(&self, chi: impl Fn(&str) -> Result<Rational>) -> Result<Rational> {
        let mut total = Rational::from_integer(0.into());
        for r in &self.rows {
            let w = match &r.removed {
                Some(w) => chi(w)?,
                None => Rational::from_integer(0.into()),
            };
            total += (chi(&r.open)? - w) * Rational::from_integer(r.fiber_euler.into());
        }
        Ok(total)
    }
}

/// Stratified pushforward `f_* 1_Z` of a table whose strata are registered.
pub fn push_stratified(table: &StratificationTable, registry: &Registry) -> Result<ConstructibleFunction> {
    for s in table.strata() {
        registry.get(s)?;
    }
    Ok(table.function())
}

/// `c_SM` of a constructible function, pushed to the base.
pub fn csm_of_function(f: &ConstructibleFunction, registry: &Registry) -> Result<ChowClass> {
    let mut out = ChowClass::zero(registry.base.ring());
    for (name, c) in f.terms() {
        out = out.try_add(&registry.csm(name)?.scale_int(c))?;
    }
    Ok(out)
}

/// `∫ c_SM(f)`, the weighted Euler characteristic of `f`.
pub fn euler_of_function(f: &ConstructibleFunction, registry: &Registry) -> Result<Rational> {
    csm_of_function(f, registry)?.integrate_top()
}

/// Solves `c_SM(push_stratified(table)) = total_csm` for the single unknown
/// stratum of the table. Returns the solved class and the updated registry.
pub fn solve_stratum_csm(
    table: &StratificationTable,
    total_csm: &ChowClass,
    registry: &Registry,
) -> Result<(String, ChowClass, Registry)> {
    let f = push_stratified(table, registry)?;
    let mut unknown = Vec::new();
    for (name, c) in f.terms() {
        if registry.is_unknown(name)? {
            unknown.push((name.to_string(), c));
        }
    }
    let (name, coefficient) = match unknown.as_slice() {
        [single] => single.clone(),
        [] => return Err(Error::Underdetermined("no unknown stratum in table".into())),
        many => {
            let names: Vec<&str> = many.iter().map(|(n, _)| n.as_str()).collect();
            return Err(Error::Underdetermined(format!(
                "several unknown strata: {}",
                names.join(", ")
            )));
        }
    };
    if coefficient.abs() != 1 {
        return Err(Error::NonInvertible { name, coefficient });
    }
    let mut known = f.clone();
    known.add_term(&name, -coefficient);
    let rest = csm_of_function(&known, registry)?;
    let solved = total_csm.try_sub(&rest)?.scale_int(coefficient);
    let registry = registry.with_solved(&name, solved.clone())?;
    Ok((name, solved, registry))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn weierstrass_lhs_table() -> StratificationTable {
        StratificationTable::new()
            .row("B", Some("Delta"), fiber_euler::ELLIPTIC)
            .row("Delta", Some("C"), fiber_euler::NODAL_CUBIC)
            .row("C", None, fiber_euler::CUSPIDAL_CUBIC)
    }

    fn p(n: u32, l: i64) -> BaseGeometry {
        BaseGeometry::projective(n).with_assignment("L", l)
    }

    fn base_ci(b: &BaseGeometry, ks: &[i64]) -> CsmSource {
        let l = b.line_class("L").unwrap();
        CsmSource::smooth_or_empty(Space::Base(b.clone()), ks.iter().map(|k| l.scale_int(*k)).collect()).unwrap()
    }

    fn registry(b: &BaseGeometry) -> Registry {
        Registry::new(b.clone())
            .with_stratum("Delta", CsmSource::Unknown)
            .unwrap()
            .with_stratum("C", base_ci(b, &[4, 6]))
            .unwrap()
            .with_stratum("D", CsmSource::Unknown)
            .unwrap()
            .with_stratum("S", base_ci(b, &[2, 4, 6]))
            .unwrap()
            .with_stratum("O", base_ci(b, &[2]))
            .unwrap()
    }

    #[test]
    fn pushforward_examples() {
        let b = p(1, 2);
        let reg = registry(&b);
        let f = push_stratified(&weierstrass_lhs_table(), &reg).unwrap();
        assert_eq!(f, ConstructibleFunction::from_terms([("Delta", 1), ("C", 1)]));

        let d1 = StratificationTable::new()
            .row("B", Some("D"), fiber_euler::SMOOTH_CONIC)
            .row("D", Some("S"), fiber_euler::LINE_PAIR)
            .row("S", None, fiber_euler::DOUBLE_LINE);
        let expected = ConstructibleFunction::from_terms([("B", 2), ("D", 1), ("S", -1)]);
        assert_eq!(push_stratified(&d1, &reg).unwrap(), expected);

        let single = StratificationTable::new().row("B", None, 7);
        assert_eq!(
            push_stratified(&single, &reg).unwrap(),
            ConstructibleFunction::from_terms([("B", 7)])
        );

        let bad = StratificationTable::new().row("Q", None, 1);
        assert_eq!(push_stratified(&bad, &reg), Err(Error::UnregisteredStratum("Q".into())));
    }

    #[test]
    fn display() {
        let f = ConstructibleFunction::from_terms([("O", 2), ("D", 1), ("S", -1)]);
        assert_eq!(f.to_string(), "1_D + 2*1_O - 1_S");
        assert_eq!((-&f).to_string(), "-1_D - 2*1_O + 1_S");
        assert_eq!(ConstructibleFunction::zero().to_string(), "0");
    }

    #[test]
    fn csm_and_euler_of_functions() {
        let b = p(1, 2);
        let reg = registry(&b);
        assert_eq!(
            csm_of_function(&ConstructibleFunction::indicator("B"), &reg).unwrap(),
            b.tangent_class()
        );
        assert_eq!(
            euler_of_function(&ConstructibleFunction::indicator("B"), &reg).unwrap(),
            rat(2)
        );
        assert_eq!(euler_of_function(&ConstructibleFunction::zero(), &reg).unwrap(), rat(0));
        assert_eq!(
            csm_of_function(&ConstructibleFunction::indicator("D"), &reg),
            Err(Error::UnsolvedStratum("D".into()))
        );
        // O = zeros of a section of O(4) on P1
        assert_eq!(
            euler_of_function(&ConstructibleFunction::indicator("O"), &reg).unwrap(),
            rat(4)
        );
        let formal = Registry::new(BaseGeometry::formal(2, &["L"]));
        assert!(matches!(
            euler_of_function(&ConstructibleFunction::indicator("B"), &formal),
            Err(Error::NoIntegration { .. })
        ));
    }

    #[test]
    fn discriminant_of_k3_has_24_points() {
        // total space χ(Y) = 24 on P1 with L = O(2); Δ is a binary form of degree 24
        let b = p(1, 2);
        let reg = registry(&b);
        let total = ChowClass::symbol(b.ring(), "H").unwrap().scale_int(24);
        let (name, delta, reg) = solve_stratum_csm(&weierstrass_lhs_table(), &total, &reg).unwrap();
        assert_eq!(name, "Delta");
        assert_eq!(delta.integrate_top().unwrap(), rat(24));
        let f = ConstructibleFunction::from_terms([("Delta", 1), ("C", 1)]);
        assert_eq!(euler_of_function(&f, &reg).unwrap(), rat(24));
    }

    #[test]
    fn solve_errors() {
        let b = p(1, 2);
        let reg = registry(&b);
        let total = ChowClass::zero(b.ring());
        let known = StratificationTable::new().row("B", Some("O"), 2);
        assert!(matches!(
            solve_stratum_csm(&known, &total, &reg),
            Err(Error::Underdetermined(_))
        ));
        let two = StratificationTable::new().row("D", Some("Delta"), 1);
        assert!(matches!(
            solve_stratum_csm(&two, &total, &reg),
            Err(Error::Underdetermined(_))
        ));
        let doubled = StratificationTable::new().row("B", Some("D"), 2);
        assert_eq!(
            solve_stratum_csm(&doubled, &total, &reg).map(|_| ()),
            Err(Error::NonInvertible {
                name: "D".into(),
                coefficient: -2
            })
        );
    }

    #[test]
    fn registry_is_versioned() {
        let b = p(1, 2);
        let reg = registry(&b);
        let solved = reg.with_solved("D", ChowClass::zero(b.ring())).unwrap();
        assert!(reg.is_unknown("D").unwrap());
        assert!(!solved.is_unknown("D").unwrap());
        assert!(matches!(
            reg.with_stratum("C", CsmSource::Unknown),
            Err(Error::DuplicateStratum(_))
        ));
        assert!(matches!(
            reg.with_solved("Z", ChowClass::zero(b.ring())),
            Err(Error::UnregisteredStratum(_))
        ));
    }

    #[test]
    fn alternating_count_matches_weighted_euler() {
        let b = p(1, 2);
        let reg = registry(&b);
        let t = StratificationTable::new().row("B", Some("O"), 2).row("O", None, 1);
        let direct = t
            .alternating_count(|s| euler_of_function(&ConstructibleFunction::indicator(s), &reg))
            .unwrap();
        assert_eq!(
            direct,
            euler_of_function(&push_stratified(&t, &reg).unwrap(), &reg).unwrap()
        );
        assert_eq!(direct, rat(2 * 2 - 4));
    }
}
