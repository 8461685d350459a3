//! Truncated graded polynomial rings with exact rational coefficients.
//!
//! A [`Ring`] is a list of graded symbols together with a truncation degree.
//! Every [`ChowClass`] lives over one ring; products drop every monomial whose
//! weighted degree exceeds the truncation degree. For a formal base the
//! symbols `c1..cd` (tangent Chern classes, `ci` of degree `i`) and a few
//! degree-one line-bundle symbols are algebraically independent. On `P^n` the
//! only symbol is the hyperplane class `H` and truncation gives `H^(n+1) = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SymbolRole {
    /// `c_i(TB)` on a formal base.
    Tangent(u32),
    /// First Chern class of a named line bundle.
    Line,
    /// Hyperplane class of `P^n`.
    Hyperplane,
    /// Hyperplane class of the `level`-th projective bundle of a tower.
    Zeta(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub degree: u32,
    pub role: SymbolRole,
}

/// A graded polynomial ring truncated above `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    symbols: Vec<Symbol>,
    dim: u32,
    /// Index of `H` when the ring is the Chow ring of `P^n`.
    top: Option<usize>,
}

impl Ring {
    pub fn new(symbols: Vec<Symbol>, dim: u32) -> Self {
        Ring {
            symbols,
            dim,
            top: None,
        }
    }

    pub fn projective(n: u32, hyperplane: &str) -> Self {
        Ring {
            symbols: vec![Symbol {
                name: hyperplane.to_string(),
                degree: 1,
                role: SymbolRole::Hyperplane,
            }],
            dim: n,
            top: Some(0),
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn is_integrable(&self) -> bool {
        self.top.is_some()
    }

    /// The ring of a projective bundle of relative dimension `rel_dim` over
    /// this one: same symbols plus a fresh degree-one hyperplane symbol.
    pub fn extend(&self, zeta: &str, level: u32, rel_dim: u32) -> Ring {
        let mut symbols = self.symbols.clone();
        symbols.push(Symbol {
            name: zeta.to_string(),
            degree: 1,
            role: SymbolRole::Zeta(level),
        });
        Ring {
            symbols,
            dim: self.dim + rel_dim,
            top: None,
        }
    }

    /// Whether `self` is `other` with extra symbols appended.
    pub fn extends(&self, other: &Ring) -> bool {
        self.symbols.len() >= other.symbols.len()
            && self.symbols[..other.symbols.len()] == other.symbols[..]
            && self.dim >= other.dim
    }

    fn weight(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.symbols).map(|(&e, s)| e as u32 * s.degree).sum()
    }

    fn describe(&self) -> String {
        let names: Vec<&str> = self.symbols.iter().map(|s| s.name.as_str()).collect();
        format!("Q[{}]/(deg > {})", names.join(","), self.dim)
    }
}

/// Exponent vector, indexed like the ring's symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len].into_boxed_slice())
    }

    pub fn from_exponents(e: &[u16]) -> Self {
        Monomial(e.to_vec().into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    fn padded(&self, len: usize) -> Monomial {
        let mut v = self.0.to_vec();
        v.resize(len, 0);
        Monomial(v.into_boxed_slice())
    }
}

type Terms = BTreeMap<Monomial, Rational>;

/// An element of a truncated graded ring.
///
/// Zero coefficients are never stored, so equality of classes is equality of
/// term maps.
#[derive(Debug, Clone)]
pub struct ChowClass {
    ring: Arc<Ring>,
    terms: Terms,
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for ChowClass {}

// Products with fewer candidate term pairs than this stay on one thread.
#[cfg(feature = "parallel")]
const PAR_MUL_THRESHOLD: usize = 1 << 14;

impl ChowClass {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        ChowClass {
            ring: ring.clone(),
            terms: Terms::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, rat(1))
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.symbols.len()), c);
        }
        ChowClass {
            ring: ring.clone(),
            terms,
        }
    }

    /// The generator called `name`, or zero when its degree exceeds the
    /// truncation degree.
    pub fn symbol(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(Self::generator(ring, i))
    }

    pub(crate) fn generator(ring: &Arc<Ring>, i: usize) -> Self {
        let mut e = vec![0u16; ring.symbols.len()];
        e[i] = 1;
        Self::from_terms(ring, [(Monomial(e.into_boxed_slice()), rat(1))])
    }

    /// Builds a class from raw terms, truncating and dropping zeros.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = Terms::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.symbols.len(), "monomial length does not match ring");
            if ring.weight(&m) <= ring.dim {
                add_into(&mut out, m, c);
            }
        }
        ChowClass {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree-0 coefficient.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.ring.symbols.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the monomial with the given exponents (by symbol name).
    pub fn coefficient(&self, exps: &[(&str, u16)]) -> Result<Rational> {
        let mut e = vec![0u16; self.ring.symbols.len()];
        for (name, k) in exps {
            let i = self
                .ring
                .index_of(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            e[i] += k;
        }
        Ok(self
            .terms
            .get(&Monomial(e.into_boxed_slice()))
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// Largest weighted degree present; `None` for the zero class.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.weight(m)).max()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        self.ring.weight(m)
    }

    fn check_ring(&self, other: &ChowClass) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::BaseMismatch {
                left: self.ring.describe(),
                right: other.ring.describe(),
            })
        }
    }

    pub fn try_add(&self, other: &ChowClass) -> Result<ChowClass> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m.clone(), c.clone());
        }
        Ok(ChowClass {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &ChowClass) -> Result<ChowClass> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &ChowClass) -> Result<ChowClass> {
        self.check_ring(other)?;
        Ok(ChowClass {
            ring: self.ring.clone(),
            terms: mul_terms(&self.ring, &self.terms, &other.terms),
        })
    }

    pub fn neg(&self) -> ChowClass {
        ChowClass {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> ChowClass {
        if k.is_zero() {
            return ChowClass::zero(&self.ring);
        }
        ChowClass {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> ChowClass {
        self.scale(&rat(k))
    }

    pub fn pow(&self, k: u32) -> ChowClass {
        let mut acc = ChowClass::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse of a class whose degree-0 term is 1.
    pub fn series_invert(&self) -> Result<ChowClass> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::NonUnit {
                constant: c0.to_string(),
            });
        }
        // a = 1 + x with x nilpotent of order <= dim + 1
        let minus_x = (self - &ChowClass::one(&self.ring)).neg();
        let mut acc = ChowClass::one(&self.ring);
        let mut power = ChowClass::one(&self.ring);
        for _ in 0..self.ring.dim {
            power = &power * &minus_x;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc)
    }

    /// The homogeneous part of weighted degree `k`.
    pub fn degree_component(&self, k: u32) -> ChowClass {
        ChowClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.weight(m) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The degree map: coefficient of `H^n` on `P^n`.
    pub fn integrate_top(&self) -> Result<Rational> {
        let top = self.ring.top.ok_or_else(|| Error::NoIntegration {
            base: self.ring.describe(),
        })?;
        let mut e = vec![0u16; self.ring.symbols.len()];
        e[top] = self.ring.dim as u16;
        Ok(self
            .terms
            .get(&Monomial(e.into_boxed_slice()))
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// Reinterprets a class over a ring that extends this one.
    pub fn embed(&self, ring: &Arc<Ring>) -> Result<ChowClass> {
        if !ring.extends(&self.ring) {
            return Err(Error::BaseMismatch {
                left: self.ring.describe(),
                right: ring.describe(),
            });
        }
        let n = ring.symbols.len();
        Ok(ChowClass::from_terms(
            ring,
            self.terms.iter().map(|(m, c)| (m.padded(n), c.clone())),
        ))
    }

    /// Evaluates the class after sending symbol `i` to `images[i]`; all images
    /// must live over `target`.
    pub(crate) fn substitute(&self, target: &Arc<Ring>, images: &[ChowClass]) -> ChowClass {
        // cache of powers per symbol
        let mut powers: Vec<Vec<ChowClass>> = images
            .iter()
            .map(|img| vec![ChowClass::one(target), img.clone()])
            .collect();
        let mut out = ChowClass::zero(target);
        for (m, c) in &self.terms {
            let mut acc = ChowClass::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                acc = &acc * &powers[i][e as usize];
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        out
    }

    /// Sends a base class to a concrete base: `c_i` to the Chern classes of
    /// `P^n`, each line-bundle symbol to its assigned multiple of `H`.
    pub fn specialize_base(&self, target: &BaseGeometry) -> Result<ChowClass> {
        if !target.is_concrete() {
            return Err(Error::NoIntegration {
                base: target.describe(),
            });
        }
        if self.ring.top.is_none() && self.ring.dim < target.dim() {
            return Err(Error::DimensionTooSmall {
                formal: self.ring.dim,
                target: target.dim(),
            });
        }
        let used: Vec<bool> = (0..self.ring.symbols.len())
            .map(|i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        let mut images = Vec::with_capacity(self.ring.symbols.len());
        for (sym, used) in self.ring.symbols.iter().zip(used) {
            if !used {
                images.push(ChowClass::zero(target.ring()));
                continue;
            }
            let img = match &sym.role {
                SymbolRole::Tangent(i) => target.tangent_class().degree_component(*i),
                SymbolRole::Line => target.line_class(&sym.name)?,
                SymbolRole::Hyperplane => ChowClass::generator(target.ring(), 0),
                SymbolRole::Zeta(_) => return Err(Error::NotABaseClass(sym.name.clone())),
            };
            images.push(img);
        }
        Ok(self.substitute(target.ring(), &images))
    }
}

fn add_into(terms: &mut Terms, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn mul_chunk(ring: &Ring, a: &[(&Monomial, u32, &Rational)], b: &[(&Monomial, u32, &Rational)]) -> Terms {
    let mut out = Terms::new();
    for &(ma, da, ca) in a {
        for &(mb, db, cb) in b {
            if da + db <= ring.dim {
                add_into(&mut out, ma.times(mb), ca * cb);
            }
        }
    }
    out
}

fn weighted<'a>(ring: &Ring, t: &'a Terms) -> Vec<(&'a Monomial, u32, &'a Rational)> {
    t.iter().map(|(m, c)| (m, ring.weight(m), c)).collect()
}

fn mul_terms(ring: &Ring, a: &Terms, b: &Terms) -> Terms {
    let a = weighted(ring, a);
    let b = weighted(ring, b);
    #[cfg(feature = "parallel")]
    {
        if a.len() * b.len() >= PAR_MUL_THRESHOLD && a.len() > 1 {
            use rayon::prelude::*;
            let chunk = (a.len() / rayon::current_num_threads().max(1)).max(1);
            return a
                .par_chunks(chunk)
                .map(|part| mul_chunk(ring, part, &b))
                .reduce(Terms::new, |mut acc, part| {
                    for (m, c) in part {
                        add_into(&mut acc, m, c);
                    }
                    acc
                });
        }
    }
    mul_chunk(ring, &a, &b)
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&ChowClass> for &ChowClass {
            type Output = ChowClass;
            /// Panics when the operands live over different rings; use the
            /// `try_*` methods to get an error instead.
            fn $method(self, rhs: &ChowClass) -> ChowClass {
                self.$inner(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<ChowClass> for ChowClass {
            type Output = ChowClass;
            fn $method(self, rhs: ChowClass) -> ChowClass {
                (&self).$inner(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        ChowClass::neg(self)
    }
}

impl fmt::Display for ChowClass {
    /// Terms ordered by degree, then by exponent vector (descending), so that
    /// the output is deterministic.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(ma, _), (mb, _)| self.ring.weight(ma).cmp(&self.ring.weight(mb)).then_with(|| mb.cmp(ma)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> =
                m.0.iter()
                    .zip(&self.ring.symbols)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, s)| {
                        if *e == 1 {
                            s.name.clone()
                        } else {
                            format!("{}^{}", s.name, e)
                        }
                    })
                    .collect();
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The two kinds of base varieties the engine works over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseKind {
    /// An arbitrary smooth variety of dimension `dim`: only truncation relates
    /// the tangent Chern classes and the line-bundle symbols.
    Formal { dim: u32, line_symbols: Vec<String> },
    /// `P^n` with each line-bundle symbol assigned a multiple of `H`.
    ProjectiveSpace {
        n: u32,
        hyperplane: String,
        assignments: BTreeMap<String, i64>,
    },
}

/// A base variety together with its Chow ring model.
#[derive(Debug, Clone)]
pub struct BaseGeometry {
    kind: BaseKind,
    ring: Arc<Ring>,
}

impl PartialEq for BaseGeometry {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl BaseGeometry {
    /// A formal base of dimension `dim` with tangent symbols `c1..c{dim}` and
    /// the given degree-one line-bundle symbols.
    pub fn formal(dim: u32, line_symbols: &[&str]) -> Self {
        let mut symbols: Vec<Symbol> = (1..=dim)
            .map(|i| Symbol {
                name: format!("c{i}"),
                degree: i,
                role: SymbolRole::Tangent(i),
            })
            .collect();
        for name in line_symbols {
            symbols.push(Symbol {
                name: name.to_string(),
                degree: 1,
                role: SymbolRole::Line,
            });
        }
        BaseGeometry {
            kind: BaseKind::Formal {
                dim,
                line_symbols: line_symbols.iter().map(|s| s.to_string()).collect(),
            },
            ring: Arc::new(Ring::new(symbols, dim)),
        }
    }

    /// `P^n` with hyperplane class `H` and no line-bundle assignments yet.
    pub fn projective(n: u32) -> Self {
        BaseGeometry {
            kind: BaseKind::ProjectiveSpace {
                n,
                hyperplane: "H".to_string(),
                assignments: BTreeMap::new(),
            },
            ring: Arc::new(Ring::projective(n, "H")),
        }
    }

    /// Assigns `name ↦ k·H`. No effect on formal bases.
    pub fn with_assignment(mut self, name: &str, k: i64) -> Self {
        if let BaseKind::ProjectiveSpace { assignments, .. } = &mut self.kind {
            assignments.insert(name.to_string(), k);
        }
        self
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn dim(&self) -> u32 {
        match &self.kind {
            BaseKind::Formal { dim, .. } => *dim,
            BaseKind::ProjectiveSpace { n, .. } => *n,
        }
    }

    pub fn is_concrete(&self) -> bool {
        matches!(self.kind, BaseKind::ProjectiveSpace { .. })
    }

    /// Total Chern class of the tangent bundle: `1 + c1 + ... + cd`, or
    /// `(1+H)^(n+1)` on `P^n`.
    pub fn tangent_class(&self) -> ChowClass {
        match &self.kind {
            BaseKind::Formal { dim, .. } => {
                let mut c = ChowClass::one(&self.ring);
                for i in 0..*dim as usize {
                    c = &c + &ChowClass::generator(&self.ring, i);
                }
                c
            }
            BaseKind::ProjectiveSpace { n, .. } => {
                let one_plus_h = &ChowClass::one(&self.ring) + &ChowClass::generator(&self.ring, 0);
                one_plus_h.pow(n + 1)
            }
        }
    }

    /// First Chern class of the line bundle called `name`.
    pub fn line_class(&self, name: &str) -> Result<ChowClass> {
        match &self.kind {
            BaseKind::Formal { line_symbols, .. } => {
                if line_symbols.iter().any(|s| s == name) {
                    ChowClass::symbol(&self.ring, name)
                } else {
                    Err(Error::MissingAssignment(name.to_string()))
                }
            }
            BaseKind::ProjectiveSpace { assignments, .. } => {
                let k = assignments
                    .get(name)
                    .ok_or_else(|| Error::MissingAssignment(name.to_string()))?;
                Ok(ChowClass::generator(&self.ring, 0).scale_int(*k))
            }
        }
    }

    pub fn has_line(&self, name: &str) -> bool {
        match &self.kind {
            BaseKind::Formal { line_symbols, .. } => line_symbols.iter().any(|s| s == name),
            BaseKind::ProjectiveSpace { assignments, .. } => assignments.contains_key(name),
        }
    }

    /// Short human-readable description, e.g. `formal(d=3)` or `P2[L=3]`.
    pub fn describe(&self) -> String {
        match &self.kind {
            BaseKind::Formal { dim, .. } => format!("formal(d={dim})"),
            BaseKind::ProjectiveSpace { n, assignments, .. } => {
                let parts: Vec<String> = assignments.iter().map(|(k, v)| format!("{k}={v}")).collect();
                if parts.is_empty() {
                    format!("P{n}")
                } else {
                    format!("P{n}[{}]", parts.join(","))
                }
            }
        }
    }
}
