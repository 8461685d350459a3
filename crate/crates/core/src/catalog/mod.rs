//! Family scenarios: the data that describes one elliptic fibration, its
//! degeneration, and a normal-crossing resolution of the degenerate family.
//!
//! A [`ScenarioSpec`] is plain data (and the JSON scenario-file format). It
//! becomes a [`FamilyScenario`] once instantiated over a base, at which point
//! every class is built and the load-time gates have run.

mod builtin;
pub mod equation;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bundles::{chern_fulton_ci, csm_smooth_ci, double_cover_csm, CompleteIntersection, Space};
use crate::constructible::{push_stratified, ConstructibleFunction, CsmSource, Registry, StratificationTable};
use crate::error::{Error, Result};
use crate::ring::{BaseGeometry, ChowClass};
use crate::specialize::{specialization_pushforward, Component, Intersection, ResolutionDatum};

pub use builtin::{builtin, builtin_names};
pub use equation::{parse_polynomial, solve_twists, Support, TwistSolution};

/// A degree-one class `Σ_k zeta[k]·ζ_{k+1} + Σ_s lines[s]·s`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearClass {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zeta: Vec<i64>,
    #[serde(flatten)]
    pub lines: BTreeMap<String, i64>,
}

impl LinearClass {
    pub fn lines<'a>(terms: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut lines = BTreeMap::new();
        for (s, k) in terms {
            *lines.entry(s.to_string()).or_insert(0) += k;
        }
        LinearClass { zeta: vec![], lines }.normalized()
    }

    pub fn with_zeta(mut self, zeta: &[i64]) -> Self {
        self.zeta = zeta.to_vec();
        self.normalized()
    }

    /// Drops zero line coefficients and trailing zero ζ coefficients.
    pub fn normalized(mut self) -> Self {
        self.lines.retain(|_, k| *k != 0);
        while self.zeta.last() == Some(&0) {
            self.zeta.pop();
        }
        self
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.lines.iter().filter(|(_, k)| **k != 0).map(|(s, _)| s.as_str())
    }

    fn renamed(&self, from: &str, to: &str) -> Self {
        LinearClass::lines(
            self.lines
                .iter()
                .map(|(s, k)| (if s == from { to } else { s.as_str() }, *k)),
        )
        .with_zeta(&self.zeta)
    }

    /// The class on `space` (a tower over `base`).
    pub fn to_class(&self, space: &Space) -> Result<ChowClass> {
        let zetas = space.zetas();
        if self.zeta.len() > zetas.len() {
            return Err(Error::InvalidBundle(format!(
                "class uses ζ of level {} on a tower of height {}",
                self.zeta.len(),
                zetas.len()
            )));
        }
        let mut out = ChowClass::zero(space.ring());
        for (k, z) in self.zeta.iter().zip(&zetas) {
            out = &out + &z.scale_int(*k);
        }
        let base = space.root();
        for (s, k) in &self.lines {
            if *k != 0 {
                out = &out + &space.pullback(&base.line_class(s)?.scale_int(*k))?;
            }
        }
        Ok(out)
    }
}

/// Homogeneous equations documenting a model. When present they are checked
/// against the declared twists and classes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSpec {
    pub coordinates: Vec<String>,
    #[serde(default)]
    pub polynomials: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup_center: Option<(String, String)>,
}

/// Blowup along `{q = 0} ∩ {g = 0}` inside the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSpec {
    pub q: LinearClass,
    pub g: LinearClass,
}

/// A complete intersection in a tower of split projective bundles over the
/// base, optionally blown up along a codimension-two locus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    /// Summands of each level, bottom first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tower: Vec<Vec<LinearClass>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypersurfaces: Vec<LinearClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equations: Option<EquationSpec>,
}

impl ModelSpec {
    fn classes_mut(&mut self) -> impl Iterator<Item = &mut LinearClass> {
        self.tower
            .iter_mut()
            .flatten()
            .chain(self.hypersurfaces.iter_mut())
            .chain(self.blowup.iter_mut().flat_map(|b| [&mut b.q, &mut b.g]))
    }

    fn classes(&self) -> impl Iterator<Item = &LinearClass> {
        self.tower
            .iter()
            .flatten()
            .chain(self.hypersurfaces.iter())
            .chain(self.blowup.iter().flat_map(|b| [&b.q, &b.g]))
    }

    fn ambient(&self, base: &BaseGeometry) -> Result<Space> {
        let mut space = Space::Base(base.clone());
        for level in &self.tower {
            let summands = level.iter().map(|m| m.to_class(&space)).collect::<Result<_>>()?;
            space = space.bundle(summands)?;
        }
        Ok(space)
    }

    fn hypersurface_classes(&self, space: &Space) -> Result<Vec<ChowClass>> {
        self.hypersurfaces.iter().map(|h| h.to_class(space)).collect()
    }

    /// The smooth variety this spec presents.
    pub fn build(&self, base: &BaseGeometry) -> Result<CompleteIntersection> {
        let space = self.ambient(base)?;
        let hyps = self.hypersurface_classes(&space)?;
        let ci = CompleteIntersection::new(space.clone(), hyps, true)?;
        match &self.blowup {
            None => Ok(ci),
            Some(b) => ci.blow_up_along(&b.q.to_class(&space)?, &b.g.to_class(&space)?),
        }
    }

    /// As [`build`](Self::build) for a subvariety of the base, which is empty
    /// when it has more equations than the base has dimensions.
    pub fn build_stratum(&self, base: &BaseGeometry) -> Result<CsmSource> {
        if !self.tower.is_empty() || self.blowup.is_some() {
            return Ok(CsmSource::SmoothModel(self.build(base)?));
        }
        let space = Space::Base(base.clone());
        let hyps = self.hypersurface_classes(&space)?;
        CsmSource::smooth_or_empty(space, hyps)
    }

    /// Re-derives twists and classes from the equations, if any.
    fn check_equations(&self, sections: &BTreeMap<String, LinearClass>) -> std::result::Result<(), String> {
        let Some(eqs) = &self.equations else {
            return Ok(());
        };
        if self.tower.len() > 1 {
            return Err("equations only describe single-level towers".into());
        }
        let mut polys: Vec<Vec<Support>> = eqs
            .polynomials
            .iter()
            .map(|p| parse_polynomial(p))
            .collect::<Result<_>>()
            .map_err(|e| e.to_string())?;
        if let Some((q, g)) = &eqs.blowup_center {
            polys.push(parse_polynomial(q).map_err(|e| e.to_string())?);
            polys.push(parse_polynomial(g).map_err(|e| e.to_string())?);
        }
        let sol = solve_twists(&eqs.coordinates, &polys, sections).map_err(|e| e.to_string())?;
        let declared: Vec<LinearClass> = self.tower.first().cloned().unwrap_or_default();
        let solved: Vec<LinearClass> = sol.twists.iter().map(|(_, t)| t.clone()).collect();
        let normalize = |v: Vec<LinearClass>| v.into_iter().map(LinearClass::normalized).collect::<Vec<_>>();
        if normalize(declared.clone()) != solved {
            return Err(format!("tower {declared:?} but equations give twists {solved:?}"));
        }
        let n = eqs.polynomials.len();
        if normalize(self.hypersurfaces.clone()) != sol.classes[..n] {
            return Err(format!(
                "hypersurfaces {:?} but equations give {:?}",
                self.hypersurfaces,
                &sol.classes[..n]
            ));
        }
        match (&self.blowup, &eqs.blowup_center) {
            (Some(b), Some(_)) => {
                let declared = normalize(vec![b.q.clone(), b.g.clone()]);
                if declared != sol.classes[n..] {
                    return Err(format!(
                        "blowup centre {declared:?} but equations give {:?}",
                        &sol.classes[n..]
                    ));
                }
            }
            (None, None) => {}
            _ => return Err("blowup data and blowup equations must come together".into()),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum StratumSource {
    /// Smooth model, a complete intersection in the base or a tower over it.
    Model(ModelSpec),
    /// Singular; its CSM class is solved from a stratification table.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSpec {
    pub name: String,
    pub source: StratumSource,
    /// Defining equation on the base, for documentation and homogeneity checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LhsSpec {
    /// Smooth complete intersection in a tower.
    CompleteIntersection { model: ModelSpec },
    /// Double cover of a tower branched along a smooth hypersurface in it.
    DoubleCover {
        target: ModelSpec,
        branch: LinearClass,
        /// Equation of the branch locus in the target's coordinates.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        branch_equation: Option<EquationSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub name: String,
    pub multiplicity: u32,
    pub model: ModelSpec,
    pub table: StratificationTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionSpec {
    pub name: String,
    pub pair: (String, String),
    pub model: ModelSpec,
    pub table: StratificationTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionSpec {
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub intersections: Vec<IntersectionSpec>,
}

/// Everything needed to verify one family, as plain data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Bundle class of every coefficient section.
    pub sections: BTreeMap<String, LinearClass>,
    pub lhs: LhsSpec,
    pub strata: Vec<StratumSpec>,
    pub resolution: ResolutionSpec,
    /// `φ0_* σ 1` as a function of the strata.
    pub expected_pushforward: ConstructibleFunction,
    /// The identity as printed in the literature, when it differs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_identity: Option<ConstructibleFunction>,
    /// Stratification of the smooth fibration itself, with its pushforward.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_table: Option<StratificationTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_function: Option<ConstructibleFunction>,
}

impl ScenarioSpec {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    fn models(&self) -> Vec<&ModelSpec> {
        let mut out = Vec::new();
        match &self.lhs {
            LhsSpec::CompleteIntersection { model } => out.push(model),
            LhsSpec::DoubleCover { target, .. } => out.push(target),
        }
        for s in &self.strata {
            if let StratumSource::Model(m) = &s.source {
                out.push(m);
            }
        }
        out.extend(self.resolution.components.iter().map(|c| &c.model));
        out.extend(self.resolution.intersections.iter().map(|x| &x.model));
        out
    }

    fn models_mut(&mut self) -> Vec<&mut ModelSpec> {
        let mut out = Vec::new();
        match &mut self.lhs {
            LhsSpec::CompleteIntersection { model } => out.push(model),
            LhsSpec::DoubleCover { target, .. } => out.push(target),
        }
        for s in &mut self.strata {
            if let StratumSource::Model(m) = &mut s.source {
                out.push(m);
            }
        }
        out.extend(self.resolution.components.iter_mut().map(|c| &mut c.model));
        out.extend(self.resolution.intersections.iter_mut().map(|x| &mut x.model));
        out
    }

    /// Line-bundle symbols the scenario refers to.
    pub fn line_symbols(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = BTreeSet::new();
        for m in self.models() {
            out.extend(m.classes().flat_map(|c| c.symbols()).map(str::to_string));
        }
        if let LhsSpec::DoubleCover { branch, .. } = &self.lhs {
            out.extend(branch.symbols().map(str::to_string));
        }
        for s in self.sections.values() {
            out.extend(s.symbols().map(str::to_string));
        }
        out
    }

    /// The same scenario with line-bundle symbol `from` renamed to `to`.
    pub fn with_renamed_symbol(&self, from: &str, to: &str) -> Self {
        let mut out = self.clone();
        for m in out.models_mut() {
            for c in m.classes_mut() {
                *c = c.renamed(from, to);
            }
        }
        if let LhsSpec::DoubleCover { branch, .. } = &mut out.lhs {
            *branch = branch.renamed(from, to);
        }
        for s in out.sections.values_mut() {
            *s = s.renamed(from, to);
        }
        out
    }

    fn integrity(&self, reason: impl Into<String>) -> Error {
        Error::CatalogIntegrity {
            family: self.name.clone(),
            reason: reason.into(),
        }
    }

    /// Base-independent checks: names resolve, equations match the declared
    /// twists and classes, stratum equations are homogeneous.
    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::from([crate::constructible::BASE_STRATUM.to_string()]);
        for s in &self.strata {
            if !names.insert(s.name.clone()) {
                return Err(Error::DuplicateStratum(s.name.clone()));
            }
        }
        let mut tables: Vec<&StratificationTable> = self.resolution.components.iter().map(|c| &c.table).collect();
        tables.extend(self.resolution.intersections.iter().map(|x| &x.table));
        tables.extend(self.lhs_table.iter());
        for t in tables {
            for s in t.strata() {
                if !names.contains(s) {
                    return Err(Error::UnregisteredStratum(s.to_string()));
                }
            }
        }
        let functions = [
            Some(&self.expected_pushforward),
            self.printed_identity.as_ref(),
            self.lhs_function.as_ref(),
        ];
        for f in functions.into_iter().flatten() {
            for (s, _) in f.terms() {
                if !names.contains(s) {
                    return Err(Error::UnregisteredStratum(s.to_string()));
                }
            }
        }
        for m in self.models() {
            m.check_equations(&self.sections).map_err(|r| self.integrity(r))?;
        }
        if let LhsSpec::DoubleCover {
            target,
            branch,
            branch_equation: Some(eq),
        } = &self.lhs
        {
            let branched = ModelSpec {
                tower: target.tower.clone(),
                hypersurfaces: vec![branch.clone()],
                blowup: None,
                equations: Some(eq.clone()),
            };
            branched
                .check_equations(&self.sections)
                .map_err(|r| self.integrity(format!("branch locus: {r}")))?;
        }
        for s in &self.strata {
            if let Some(eq) = &s.equation {
                let poly = parse_polynomial(eq)?;
                solve_twists(&[], &[poly], &self.sections).map_err(|e| self.integrity(format!("{}: {e}", s.name)))?;
            }
        }
        Ok(())
    }

    /// Builds every class over `base` and runs the load-time gates.
    pub fn instantiate(&self, base: &BaseGeometry) -> Result<FamilyScenario> {
        self.validate()?;
        for s in self.line_symbols() {
            if !base.has_line(&s) {
                return Err(Error::MissingAssignment(s));
            }
        }
        let lhs = match &self.lhs {
            LhsSpec::CompleteIntersection { model } => Lhs::CompleteIntersection(model.build(base)?),
            LhsSpec::DoubleCover { target, branch, .. } => {
                let target = target.build(base)?;
                if target.codim() != 0 || target.ambient().level() == 0 {
                    return Err(self.integrity("double-cover target must be a whole tower"));
                }
                let space = target.ambient().clone();
                let branch = CompleteIntersection::new(space.clone(), vec![branch.to_class(&space)?], true)?;
                Lhs::DoubleCover { target: space, branch }
            }
        };

        let mut registry = Registry::new(base.clone());
        for s in &self.strata {
            let source = match &s.source {
                StratumSource::Model(m) => m.build_stratum(base)?,
                StratumSource::Unknown => CsmSource::Unknown,
            };
            registry = registry.with_stratum(&s.name, source)?;
        }

        let components = self
            .resolution
            .components
            .iter()
            .map(|c| {
                Ok(Component {
                    name: c.name.clone(),
                    multiplicity: c.multiplicity,
                    model: c.model.build(base)?,
                    table: c.table.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let intersections = self
            .resolution
            .intersections
            .iter()
            .map(|x| {
                Ok(Intersection {
                    name: x.name.clone(),
                    pair: x.pair.clone(),
                    model: x.model.build(base)?,
                    table: x.table.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let resolution = ResolutionDatum::new(components, intersections)?;

        let pushed = specialization_pushforward(&resolution, &registry)?;
        if pushed != self.expected_pushforward {
            return Err(self.integrity(format!(
                "resolution pushes forward to {pushed}, expected {}",
                self.expected_pushforward
            )));
        }
        match (&self.lhs_table, &self.lhs_function) {
            (Some(t), Some(f)) => {
                let pushed = push_stratified(t, &registry)?;
                if &pushed != f {
                    return Err(self.integrity(format!("fibration table pushes forward to {pushed}, expected {f}")));
                }
            }
            (None, None) => {}
            _ => return Err(self.integrity("fibration table and function must come together")),
        }

        Ok(FamilyScenario {
            spec: Arc::new(self.clone()),
            base: base.clone(),
            lhs,
            registry,
            resolution,
        })
    }
}

/// The smooth fibration `Y`.
#[derive(Debug, Clone)]
pub enum Lhs {
    CompleteIntersection(CompleteIntersection),
    DoubleCover {
        target: Space,
        branch: CompleteIntersection,
    },
}

impl Lhs {
    /// `c_SM(φ_* 1_Y)`.
    pub fn csm(&self) -> Result<ChowClass> {
        match self {
            Lhs::CompleteIntersection(y) => csm_smooth_ci(y),
            Lhs::DoubleCover { target, branch } => double_cover_csm(target, Some(branch)),
        }
    }

    /// Chern-Fulton class of the central fibre, which shares the presentation
    /// of `Y` and therefore its class.
    pub fn central_fiber_chern_fulton(&self) -> Result<ChowClass> {
        match self {
            Lhs::CompleteIntersection(y) => chern_fulton_ci(&y.clone().with_smooth(false)),
            Lhs::DoubleCover { .. } => self.csm(),
        }
    }
}

/// A scenario built over a concrete or formal base.
#[derive(Debug, Clone)]
pub struct FamilyScenario {
    pub spec: Arc<ScenarioSpec>,
    pub base: BaseGeometry,
    pub lhs: Lhs,
    pub registry: Registry,
    pub resolution: ResolutionDatum,
}

impl FamilyScenario {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn expected_pushforward(&self) -> &ConstructibleFunction {
        &self.spec.expected_pushforward
    }
}

/// Looks up a built-in family and builds it over `base`.
pub fn instantiate_family(name: &str, base: &BaseGeometry) -> Result<FamilyScenario> {
    builtin(name)?.instantiate(base)
}
