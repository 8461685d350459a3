//! Verdier specialization of `1` of a one-parameter family, computed from a
//! normal-crossing resolution of its total space.
//!
//! If the central fibre pulls back to a divisor with smooth components
//! `D_i` of multiplicity `m_i` meeting only pairwise, then
//! `σ 1 = Σ m_i 1_{D_i} - Σ_{i<j} (m_i + m_j) 1_{D_i ∩ D_j}`
//! (a point on a single component gets `m_i`, a point on two gets `0`).

use std::collections::{BTreeMap, BTreeSet};

use crate::bundles::{csm_smooth_ci, CompleteIntersection};
use crate::constructible::{push_stratified, ConstructibleFunction, Registry, StratificationTable};
use crate::error::{Error, Result};
use crate::ring::ChowClass;

#[derive(Debug, Clone)]
pub struct Component {
    pub name: String,
    pub multiplicity: u32,
    pub model: CompleteIntersection,
    pub table: StratificationTable,
}

#[derive(Debug, Clone)]
pub struct Intersection {
    pub name: String,
    pub pair: (String, String),
    pub model: CompleteIntersection,
    pub table: StratificationTable,
}

/// One term `coefficient · 1_name` of the δ function, with the smooth model
/// and table of the named variety.
#[derive(Debug, Clone)]
pub struct DeltaTerm<'a> {
    pub name: &'a str,
    pub coefficient: i64,
    pub model: &'a CompleteIntersection,
    pub table: &'a StratificationTable,
}

#[derive(Debug, Clone)]
pub struct ResolutionDatum {
    components: Vec<Component>,
    intersections: Vec<Intersection>,
}

impl ResolutionDatum {
    pub fn new(components: Vec<Component>, intersections: Vec<Intersection>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidResolution("no components".into()));
        }
        let mut names = BTreeSet::new();
        for c in &components {
            if c.multiplicity == 0 {
                return Err(Error::InvalidResolution(format!(
                    "component {} has multiplicity 0",
                    c.name
                )));
            }
            if !c.model.assumed_smooth() {
                return Err(Error::InvalidResolution(format!("component {} is not smooth", c.name)));
            }
            if !names.insert(c.name.as_str()) {
                return Err(Error::InvalidResolution(format!("duplicate name {}", c.name)));
            }
        }
        let mut pairs = BTreeSet::new();
        let mut adjacent: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for x in &intersections {
            let (a, b) = (x.pair.0.as_str(), x.pair.1.as_str());
            if a == b {
                return Err(Error::InvalidResolution(format!("{} pairs {a} with itself", x.name)));
            }
            for n in [a, b] {
                if !components.iter().any(|c| c.name == n) {
                    return Err(Error::InvalidResolution(format!(
                        "{} refers to unknown component {n}",
                        x.name
                    )));
                }
            }
            if !x.model.assumed_smooth() {
                return Err(Error::InvalidResolution(format!(
                    "intersection {} is not smooth",
                    x.name
                )));
            }
            if !names.insert(x.name.as_str()) {
                return Err(Error::InvalidResolution(format!("duplicate name {}", x.name)));
            }
            if !pairs.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidResolution(format!("pair {a}, {b} listed twice")));
            }
            adjacent.entry(a).or_default().insert(b);
            adjacent.entry(b).or_default().insert(a);
        }
        // three pairwise-meeting components may share a triple locus
        for (a, b) in &pairs {
            let common = adjacent[a].intersection(&adjacent[b]).next();
            if let Some(c) = common {
                return Err(Error::UnsupportedGeometry(format!(
                    "components {a}, {b}, {c} meet pairwise; triple intersections are not supported"
                )));
            }
        }
        Ok(ResolutionDatum {
            components,
            intersections,
        })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn intersections(&self) -> &[Intersection] {
        &self.intersections
    }

    fn multiplicity(&self, name: &str) -> i64 {
        self.components
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.multiplicity as i64)
            .expect("validated component name")
    }

    /// The terms of δ in declaration order: components, then intersections.
    pub fn delta_terms(&self) -> Vec<DeltaTerm<'_>> {
        let comps = self.components.iter().map(|c| DeltaTerm {
            name: &c.name,
            coefficient: c.multiplicity as i64,
            model: &c.model,
            table: &c.table,
        });
        let inters = self.intersections.iter().map(|x| DeltaTerm {
            name: &x.name,
            coefficient: -(self.multiplicity(&x.pair.0) + self.multiplicity(&x.pair.1)),
            model: &x.model,
            table: &x.table,
        });
        comps.chain(inters).collect()
    }

    /// Same datum with every multiplicity multiplied by `k`.
    pub fn scaled(&self, k: u32) -> Result<Self> {
        let mut out = self.clone();
        for c in &mut out.components {
            c.multiplicity *= k;
        }
        ResolutionDatum::new(out.components, out.intersections)
    }
}

/// `δ = Σ m_i 1_{D_i} - Σ (m_i + m_j) 1_{D_i ∩ D_j}` on the resolution.
pub fn delta_function(r: &ResolutionDatum) -> ConstructibleFunction {
    ConstructibleFunction::from_terms(r.delta_terms().iter().map(|t| (t.name, t.coefficient)))
}

/// `φ0_* σ 1`: every term of δ pushed to the base through its table.
pub fn specialization_pushforward(r: &ResolutionDatum, registry: &Registry) -> Result<ConstructibleFunction> {
    pushforward_of_terms(&r.delta_terms(), registry)
}

pub fn pushforward_of_terms(terms: &[DeltaTerm<'_>], registry: &Registry) -> Result<ConstructibleFunction> {
    let mut out = ConstructibleFunction::zero();
    for t in terms {
        out = &out + &push_stratified(t.table, registry)?.scale(t.coefficient);
    }
    Ok(out)
}

/// `c_SM(φ0_* σ 1)` from the smooth models only.
pub fn specialization_csm(r: &ResolutionDatum) -> Result<ChowClass> {
    csm_of_terms(&r.delta_terms())
}

pub fn csm_of_terms(terms: &[DeltaTerm<'_>]) -> Result<ChowClass> {
    let (first, rest) = terms
        .split_first()
        .ok_or_else(|| Error::InvalidResolution("no components".into()))?;
    let mut out = csm_smooth_ci(first.model)?.scale_int(first.coefficient);
    for t in rest {
        out = out.try_add(&csm_smooth_ci(t.model)?.scale_int(t.coefficient))?;
    }
    Ok(out)
}
