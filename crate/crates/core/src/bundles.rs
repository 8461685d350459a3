//! Split projective bundles, their pushforwards, and Chern classes of complete
//! intersections inside them.
//!
//! Convention: for `P(E)` with `E = M_1 ⊕ ... ⊕ M_r` and `m_i = c1(M_i)`, the
//! homogeneous coordinate attached to summand `i` cuts the divisor `ζ + m_i`.
//! Hence `Π (ζ + m_i) = 0`, `π_*(ζ^(r-1+k)) = s_k(E)` with
//! `s(E) = 1 / Π (1 + m_i)`, and `c(T_{P(E)/B}) = Π (1 + ζ + m_i)`.
//!
//! Towers are allowed: the base of a bundle may itself be a bundle, in which
//! case the summands are classes on that bundle.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{rat, BaseGeometry, ChowClass, Monomial, Rational, Ring, SymbolRole};

/// Either the base itself or the top of a tower of projective bundles over it.
#[derive(Debug, Clone)]
pub enum Space {
    Base(BaseGeometry),
    Bundle(Arc<ProjBundle>),
}

impl Space {
    pub fn ring(&self) -> &Arc<Ring> {
        match self {
            Space::Base(b) => b.ring(),
            Space::Bundle(p) => &p.ring,
        }
    }

    pub fn dim(&self) -> u32 {
        self.ring().dim()
    }

    /// The base variety at the bottom of the tower.
    pub fn root(&self) -> &BaseGeometry {
        match self {
            Space::Base(b) => b,
            Space::Bundle(p) => p.base.root(),
        }
    }

    /// Number of projective bundles stacked over the root.
    pub fn level(&self) -> u32 {
        match self {
            Space::Base(_) => 0,
            Space::Bundle(p) => p.level,
        }
    }

    /// Total Chern class of the tangent bundle.
    pub fn tangent_chern(&self) -> ChowClass {
        match self {
            Space::Base(b) => b.tangent_class(),
            Space::Bundle(p) => p.tangent_chern(),
        }
    }

    /// Pushes a class on this space all the way down to the root base.
    pub fn push_to_root(&self, a: &ChowClass) -> Result<ChowClass> {
        match self {
            Space::Base(b) => {
                if a.ring() == b.ring() {
                    Ok(a.clone())
                } else {
                    Err(mismatch(a.ring(), b.ring()))
                }
            }
            Space::Bundle(p) => p.base.push_to_root(&p.push_to_base(a)?),
        }
    }

    /// Builds `P(M_1 ⊕ ... ⊕ M_r)` over this space.
    pub fn bundle(&self, summands: Vec<ChowClass>) -> Result<Space> {
        Ok(Space::Bundle(ProjBundle::new(self.clone(), summands)?))
    }

    /// The hyperplane class of the top bundle.
    pub fn zeta(&self) -> Option<ChowClass> {
        match self {
            Space::Base(_) => None,
            Space::Bundle(p) => Some(p.zeta()),
        }
    }

    /// Hyperplane classes of every level, bottom first.
    pub fn zetas(&self) -> Vec<ChowClass> {
        let ring = self.ring();
        ring.symbols()
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s.role, SymbolRole::Zeta(_)))
            .map(|(i, _)| ChowClass::generator(ring, i))
            .collect()
    }

    /// Pulls a class on the root base (or any lower level) up to this space.
    pub fn pullback(&self, a: &ChowClass) -> Result<ChowClass> {
        a.embed(self.ring())
    }
}

fn mismatch(a: &Ring, b: &Ring) -> Error {
    let names = |r: &Ring| r.symbols().iter().map(|s| s.name.clone()).collect::<Vec<_>>().join(",");
    Error::BaseMismatch {
        left: names(a),
        right: names(b),
    }
}

/// `P(M_1 ⊕ ... ⊕ M_r)`, the projective bundle of lines, over a [`Space`].
#[derive(Debug)]
pub struct ProjBundle {
    base: Space,
    summands: Vec<ChowClass>,
    ring: Arc<Ring>,
    level: u32,
    /// Elementary symmetric functions `e_1..e_r` of the summands, on the base.
    elementary: Vec<ChowClass>,
    /// Graded pieces `s_0, s_1, ...` of the Segre class, on the base.
    segre: Vec<ChowClass>,
}

impl ProjBundle {
    pub fn new(base: Space, summands: Vec<ChowClass>) -> Result<Arc<ProjBundle>> {
        let r = summands.len();
        if r < 2 {
            return Err(Error::InvalidBundle(format!("rank must be at least 2, got {r}")));
        }
        let base_ring = base.ring().clone();
        for m in &summands {
            if m.ring() != &base_ring {
                return Err(mismatch(m.ring(), &base_ring));
            }
            if !m.is_zero() && (m.max_degree() != Some(1) || !m.degree_component(1).eq(m)) {
                return Err(Error::InvalidBundle(format!("summand {m} is not a degree-1 class")));
            }
        }
        let level = base.level() + 1;
        let ring = Arc::new(base_ring.extend(&format!("z{level}"), level, (r - 1) as u32));

        // Π (1 + t m_i) = Σ e_k t^k
        let mut elementary = vec![ChowClass::one(&base_ring)];
        for m in &summands {
            let mut next = elementary.clone();
            next.push(ChowClass::zero(&base_ring));
            for k in 1..next.len() {
                next[k] = &next[k] + &(&elementary[k - 1] * m);
            }
            elementary = next;
        }
        let total_chern = elementary.iter().fold(ChowClass::zero(&base_ring), |acc, e| &acc + e);
        let s = total_chern.series_invert()?;
        let segre = (0..=base_ring.dim()).map(|k| s.degree_component(k)).collect();
        elementary.remove(0);

        Ok(Arc::new(ProjBundle {
            base,
            summands,
            ring,
            level,
            elementary,
            segre,
        }))
    }

    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn summands(&self) -> &[ChowClass] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn zeta_name(&self) -> &str {
        &self.ring.symbols().last().expect("bundle ring has a zeta").name
    }

    pub fn zeta(&self) -> ChowClass {
        ChowClass::generator(&self.ring, self.ring.symbols().len() - 1)
    }

    /// Total Segre class `1 / Π (1 + m_i)` on the base.
    pub fn segre_class(&self) -> ChowClass {
        self.segre
            .iter()
            .fold(ChowClass::zero(self.base.ring()), |acc, s| &acc + s)
    }

    pub fn pullback(&self, a: &ChowClass) -> Result<ChowClass> {
        a.embed(&self.ring)
    }

    fn check(&self, a: &ChowClass) -> Result<()> {
        if a.ring() == &self.ring {
            Ok(())
        } else {
            Err(mismatch(a.ring(), &self.ring))
        }
    }

    /// Splits a class by its ζ-exponent into base-ring coefficients.
    fn by_zeta_power(&self, a: &ChowClass) -> BTreeMap<u16, ChowClass> {
        let base_ring = self.base.ring();
        let n = base_ring.symbols().len();
        let mut parts: BTreeMap<u16, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in a.terms() {
            let e = m.exponents();
            let base_part = Monomial::from_exponents(&e[..n]);
            parts.entry(e[n]).or_default().push((base_part, c.clone()));
        }
        parts
            .into_iter()
            .map(|(j, terms)| (j, ChowClass::from_terms(base_ring, terms)))
            .collect()
    }

    /// Normal form with ζ-degree below the rank, using
    /// `ζ^r = -Σ_k e_k ζ^(r-k)`.
    pub fn reduce_zeta(&self, a: &ChowClass) -> Result<ChowClass> {
        self.check(a)?;
        let r = self.rank() as u16;
        let zeta = self.zeta();
        let lifted: Vec<ChowClass> = self
            .elementary
            .iter()
            .map(|e| self.pullback(e))
            .collect::<Result<_>>()?;
        // -Σ e_k ζ^(r-k)
        let mut replacement = ChowClass::zero(&self.ring);
        for (k, e) in lifted.iter().enumerate() {
            replacement = &replacement - &(e * &zeta.pow(r as u32 - (k as u32 + 1)));
        }
        let mut current = a.clone();
        loop {
            let parts = self.by_zeta_power(&current);
            if parts.keys().all(|&j| j < r) {
                return Ok(current);
            }
            let mut next = ChowClass::zero(&self.ring);
            for (j, coeff) in parts {
                let coeff = self.pullback(&coeff)?;
                if j < r {
                    next = &next + &(&coeff * &zeta.pow(j as u32));
                } else {
                    next = &next + &(&(&coeff * &zeta.pow((j - r) as u32)) * &replacement);
                }
            }
            current = next;
        }
    }

    /// `π_*`: `ζ^(r-1+k) ↦ s_k(E)`, lower powers of ζ push to zero.
    pub fn push_to_base(&self, a: &ChowClass) -> Result<ChowClass> {
        self.check(a)?;
        let shift = self.rank() as u16 - 1;
        let mut out = ChowClass::zero(self.base.ring());
        for (j, coeff) in self.by_zeta_power(a) {
            if j < shift {
                continue;
            }
            if let Some(s) = self.segre.get((j - shift) as usize) {
                out = &out + &(&coeff * s);
            }
        }
        Ok(out)
    }

    /// `c(TB) · Π (1 + ζ + m_i)`, with `c(TB)` the tangent class of the base
    /// space (itself a tower if the base is a bundle).
    pub fn tangent_chern(&self) -> ChowClass {
        let zeta = self.zeta();
        let one = ChowClass::one(&self.ring);
        let mut c = self.pullback(&self.base.tangent_chern()).expect("base ring embeds");
        for m in &self.summands {
            let m = self.pullback(m).expect("summand ring embeds");
            c = &c * &(&(&one + &zeta) + &m);
        }
        c
    }
}

/// A complete intersection of hypersurfaces in a tower (or in the base).
///
/// Each hypersurface class is the first Chern class of the line bundle whose
/// section cuts it out.
#[derive(Debug, Clone)]
pub struct CompleteIntersection {
    ambient: Space,
    hypersurfaces: Vec<ChowClass>,
    assumed_smooth: bool,
}

impl CompleteIntersection {
    pub fn new(ambient: Space, hypersurfaces: Vec<ChowClass>, assumed_smooth: bool) -> Result<Self> {
        let ring = ambient.ring().clone();
        if hypersurfaces.len() > ring.dim() as usize {
            return Err(Error::DegeneratePresentation {
                codim: hypersurfaces.len(),
                ambient: ring.dim(),
            });
        }
        for h in &hypersurfaces {
            if h.ring() != &ring {
                return Err(mismatch(h.ring(), &ring));
            }
            if h.is_zero() || h.degree_component(1) != *h {
                return Err(Error::InvalidHypersurface {
                    class: h.to_string(),
                    reason: "not a nonzero degree-1 class".into(),
                });
            }
            for (i, sym) in ring.symbols().iter().enumerate() {
                if matches!(sym.role, SymbolRole::Zeta(_)) {
                    let mut e = vec![0u16; ring.symbols().len()];
                    e[i] = 1;
                    let coeff = h
                        .terms()
                        .find(|(m, _)| m.exponents() == e.as_slice())
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(|| rat(0));
                    if coeff < rat(0) {
                        return Err(Error::InvalidHypersurface {
                            class: h.to_string(),
                            reason: format!("negative coefficient of {}", sym.name),
                        });
                    }
                }
            }
        }
        Ok(CompleteIntersection {
            ambient,
            hypersurfaces,
            assumed_smooth,
        })
    }

    /// The whole ambient space, viewed as a complete intersection of nothing.
    pub fn whole(ambient: Space) -> Self {
        CompleteIntersection {
            ambient,
            hypersurfaces: Vec::new(),
            assumed_smooth: true,
        }
    }

    pub fn ambient(&self) -> &Space {
        &self.ambient
    }

    pub fn hypersurfaces(&self) -> &[ChowClass] {
        &self.hypersurfaces
    }

    pub fn assumed_smooth(&self) -> bool {
        self.assumed_smooth
    }

    pub fn codim(&self) -> usize {
        self.hypersurfaces.len()
    }

    pub fn dim(&self) -> u32 {
        self.ambient.dim() - self.codim() as u32
    }

    /// Same presentation with the smoothness flag changed.
    pub fn with_smooth(mut self, smooth: bool) -> Self {
        self.assumed_smooth = smooth;
        self
    }

    /// `[Z] = Π h_j` in the ambient ring.
    pub fn fundamental_class(&self) -> ChowClass {
        self.hypersurfaces
            .iter()
            .fold(ChowClass::one(self.ambient.ring()), |acc, h| &acc * h)
    }

    /// `c(T_ambient) / c(N) ∩ [Z]`, still on the ambient.
    pub fn virtual_chern_in_ambient(&self) -> Result<ChowClass> {
        let ring = self.ambient.ring();
        let one = ChowClass::one(ring);
        let mut c = self.ambient.tangent_chern();
        for h in &self.hypersurfaces {
            let factor = h * &(&one + h).series_invert()?;
            c = &c * &factor;
        }
        Ok(c)
    }

    /// Blowup of this variety along `W = Z ∩ {q = 0} ∩ {g = 0}`, presented as
    /// the hypersurface `a·g - b·q = 0` (class `ζ' + q + g`) in
    /// `P(O(q) ⊕ O(g))` over the ambient. Valid when `W` is smooth of
    /// codimension two in `Z`.
    pub fn blow_up_along(&self, q: &ChowClass, g: &ChowClass) -> Result<CompleteIntersection> {
        let ring = self.ambient.ring();
        for c in [q, g] {
            if c.ring() != ring {
                return Err(mismatch(c.ring(), ring));
            }
        }
        let tower = self.ambient.bundle(vec![q.clone(), g.clone()])?;
        let mut hyps: Vec<ChowClass> = self
            .hypersurfaces
            .iter()
            .map(|h| tower.pullback(h))
            .collect::<Result<_>>()?;
        let zeta = tower.zeta().expect("fresh bundle has a zeta");
        let exc = &(&zeta + &tower.pullback(q)?) + &tower.pullback(g)?;
        hyps.push(exc);
        CompleteIntersection::new(tower, hyps, self.assumed_smooth)
    }
}

/// CSM class of a smooth complete intersection pushed to the root base:
/// `π_*( c(T P) · Π h_j / (1 + h_j) )`.
pub fn csm_smooth_ci(z: &CompleteIntersection) -> Result<ChowClass> {
    if !z.assumed_smooth {
        return Err(Error::NotSmooth);
    }
    chern_fulton_ci(z)
}

/// Chern-Fulton class `c(T_vir) ∩ [Z]` pushed to the root base. Same formula
/// as [`csm_smooth_ci`], with no smoothness requirement: it depends only on
/// the ambient and the normal bundle.
pub fn chern_fulton_ci(z: &CompleteIntersection) -> Result<ChowClass> {
    z.ambient.push_to_root(&z.virtual_chern_in_ambient()?)
}

/// Topological Euler characteristic of a smooth complete intersection over a
/// concrete base.
pub fn euler_char_ci(z: &CompleteIntersection) -> Result<Rational> {
    csm_smooth_ci(z)?.integrate_top()
}

/// CSM pushforward of `1` of a double cover of `target` branched along
/// `branch`: `2·π_* c(T target) − π_* c_SM(branch)`.
pub fn double_cover_csm(target: &Space, branch: Option<&CompleteIntersection>) -> Result<ChowClass> {
    let whole = target.push_to_root(&target.tangent_chern())?.scale_int(2);
    match branch {
        None => Ok(whole),
        Some(b) => {
            if b.ambient.ring() != target.ring() {
                return Err(mismatch(b.ambient.ring(), target.ring()));
            }
            Ok(&whole - &csm_smooth_ci(b)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn formal(d: u32) -> BaseGeometry {
        BaseGeometry::formal(d, &["L", "S"])
    }

    fn lin(b: &BaseGeometry, k: i64) -> ChowClass {
        b.line_class("L").unwrap().scale_int(k)
    }

    fn weierstrass_tower(b: &BaseGeometry) -> Space {
        Space::Base(b.clone())
            .bundle(vec![lin(b, 0), lin(b, 2), lin(b, 3)])
            .unwrap()
    }

    fn point() -> BaseGeometry {
        BaseGeometry::projective(0)
    }

    #[test]
    fn reduce_zeta_examples() {
        let b = formal(3);
        let p = weierstrass_tower(&b);
        let Space::Bundle(pb) = &p else { unreachable!() };
        let z = pb.zeta();
        let l = pb.pullback(&lin(&b, 1)).unwrap();
        let expect = &(&l.scale_int(-5) * &z.pow(2)) - &(&l.pow(2).scale_int(6) * &z);
        assert_eq!(pb.reduce_zeta(&z.pow(3)).unwrap(), expect);
        // idempotent
        assert_eq!(pb.reduce_zeta(&expect).unwrap(), expect);

        let p2 = Space::Base(b.clone()).bundle(vec![lin(&b, 0), lin(&b, 1)]).unwrap();
        let Space::Bundle(pb2) = &p2 else { unreachable!() };
        let z2 = pb2.zeta();
        let l2 = pb2.pullback(&lin(&b, 1)).unwrap();
        assert_eq!(pb2.reduce_zeta(&z2.pow(2)).unwrap(), (&l2 * &z2).neg());

        let trivial = Space::Base(b.clone()).bundle(vec![lin(&b, 0); 3]).unwrap();
        let Space::Bundle(tb) = &trivial else { unreachable!() };
        assert!(tb.reduce_zeta(&tb.zeta().pow(3)).unwrap().is_zero());
    }

    #[test]
    fn push_examples() {
        let b = formal(3);
        let p = weierstrass_tower(&b);
        let Space::Bundle(pb) = &p else { unreachable!() };
        let z = pb.zeta();
        assert_eq!(pb.push_to_base(&z.pow(2)).unwrap(), ChowClass::one(b.ring()));
        assert!(pb.push_to_base(&z).unwrap().is_zero());
        assert_eq!(pb.push_to_base(&z.pow(3)).unwrap(), lin(&b, -5));
        assert_eq!(pb.push_to_base(&z.pow(4)).unwrap(), lin(&b, 1).pow(2).scale_int(19));
    }

    #[test]
    fn push_agrees_with_reduction() {
        let b = formal(3);
        let p = weierstrass_tower(&b);
        let Space::Bundle(pb) = &p else { unreachable!() };
        for k in 0..6 {
            let a = pb.zeta().pow(k);
            let reduced = pb.reduce_zeta(&a).unwrap();
            assert_eq!(pb.push_to_base(&a).unwrap(), pb.push_to_base(&reduced).unwrap());
        }
    }

    #[test]
    fn tangent_of_projective_plane_over_point() {
        let pt = point();
        let p = Space::Base(pt.clone())
            .bundle(vec![ChowClass::zero(pt.ring()); 3])
            .unwrap();
        let Space::Bundle(pb) = &p else { unreachable!() };
        let one_plus_z = &ChowClass::one(pb.ring()) + &pb.zeta();
        assert_eq!(pb.tangent_chern(), one_plus_z.pow(3));
        assert_eq!(
            p.push_to_root(&pb.tangent_chern()).unwrap().integrate_top().unwrap(),
            rat(3)
        );
    }

    #[test]
    fn fibers_over_a_point() {
        let pt = point();
        let p = Space::Base(pt.clone())
            .bundle(vec![ChowClass::zero(pt.ring()); 3])
            .unwrap();
        let z = p.zeta().unwrap();
        let chi = |k: i64| {
            let ci = CompleteIntersection::new(p.clone(), vec![z.scale_int(k)], true).unwrap();
            euler_char_ci(&ci).unwrap()
        };
        assert_eq!(chi(3), rat(0));
        assert_eq!(chi(2), rat(2));
        assert_eq!(chi(1), rat(2));
        assert_eq!(euler_char_ci(&CompleteIntersection::whole(p.clone())).unwrap(), rat(3));
    }

    #[test]
    fn plane_sextic_has_euler_characteristic_minus_18() {
        // genus (6-1)(6-2)/2 = 10
        let p2 = BaseGeometry::projective(2);
        let h = ChowClass::symbol(p2.ring(), "H").unwrap();
        let o = CompleteIntersection::new(Space::Base(p2), vec![h.scale_int(6)], true).unwrap();
        assert_eq!(euler_char_ci(&o).unwrap(), rat(2 - 2 * 10));
    }

    #[test]
    fn weierstrass_euler_characteristics() {
        // oracles: 12 deg L on P1; -60 ∫c1(L)^2 on P2 (CY3); 12 c1 c2 + 360 c1^3 on P3 (CY4)
        let cases = [(1u32, 2i64, 24i64), (2, 3, -540), (3, 4, 23328)];
        for (n, l, expected) in cases {
            let b = BaseGeometry::projective(n).with_assignment("L", l);
            let p = weierstrass_tower(&b);
            let z = p.zeta().unwrap();
            let y = CompleteIntersection::new(
                p.clone(),
                vec![&z.scale_int(3) + &p.pullback(&lin(&b, 6)).unwrap()],
                true,
            )
            .unwrap();
            assert_eq!(euler_char_ci(&y).unwrap(), rat(expected), "P{n}");
        }
    }

    #[test]
    fn chern_fulton_matches_smooth_formula() {
        let b = formal(3);
        let p = weierstrass_tower(&b);
        let z = p.zeta().unwrap();
        let class = &z.scale_int(3) + &p.pullback(&lin(&b, 6)).unwrap();
        let y = CompleteIntersection::new(p.clone(), vec![class.clone()], true).unwrap();
        let y0 = CompleteIntersection::new(p.clone(), vec![class], false).unwrap();
        assert_eq!(chern_fulton_ci(&y0).unwrap(), csm_smooth_ci(&y).unwrap());
        assert_eq!(chern_fulton_ci(&y).unwrap(), csm_smooth_ci(&y).unwrap());
        assert_eq!(csm_smooth_ci(&y0), Err(Error::NotSmooth));

        // cuspidal cubic over a point: same class as the smooth cubic
        let pt = point();
        let pp = Space::Base(pt.clone())
            .bundle(vec![ChowClass::zero(pt.ring()); 3])
            .unwrap();
        let cusp = CompleteIntersection::new(pp.clone(), vec![pp.zeta().unwrap().scale_int(3)], false).unwrap();
        assert_eq!(
            chern_fulton_ci(&cusp).unwrap().degree_component(0),
            ChowClass::zero(pt.ring())
        );
    }

    #[test]
    fn double_covers() {
        let p1 = BaseGeometry::projective(1);
        let h = ChowClass::symbol(p1.ring(), "H").unwrap();
        let base = Space::Base(p1.clone());
        let branch = CompleteIntersection::new(base.clone(), vec![h.scale_int(4)], true).unwrap();
        assert_eq!(
            double_cover_csm(&base, Some(&branch)).unwrap().integrate_top().unwrap(),
            rat(0)
        );
        assert_eq!(double_cover_csm(&base, None).unwrap(), p1.tangent_class().scale_int(2));

        let p2 = BaseGeometry::projective(2);
        let h2 = ChowClass::symbol(p2.ring(), "H").unwrap();
        let base2 = Space::Base(p2);
        let sextic = CompleteIntersection::new(base2.clone(), vec![h2.scale_int(6)], true).unwrap();
        assert_eq!(
            double_cover_csm(&base2, Some(&sextic))
                .unwrap()
                .integrate_top()
                .unwrap(),
            rat(24)
        );
    }

    #[test]
    fn invalid_presentations() {
        let b = formal(1);
        let base = Space::Base(b.clone());
        assert!(matches!(base.bundle(vec![lin(&b, 1)]), Err(Error::InvalidBundle(_))));
        let p = base.bundle(vec![lin(&b, 0), lin(&b, 1)]).unwrap();
        let z = p.zeta().unwrap();
        let too_many = vec![z.clone(), z.clone(), z.clone()];
        assert!(matches!(
            CompleteIntersection::new(p.clone(), too_many, true),
            Err(Error::DegeneratePresentation { codim: 3, ambient: 2 })
        ));
        let negative = &p.pullback(&lin(&b, 1)).unwrap() - &z;
        assert!(matches!(
            CompleteIntersection::new(p.clone(), vec![negative], true),
            Err(Error::InvalidHypersurface { .. })
        ));
    }

    #[test]
    fn blowup_of_p1_bundle_adds_exceptional_fibres() {
        // Blowing up P(O⊕L) over P1 at the points {x^2 - h z^2 = 0} ∩ {g = 0}
        // with g of degree 1 on the base: 2 points, so χ goes from 4 to 6.
        let b = BaseGeometry::projective(1).with_assignment("L", 1);
        let p = Space::Base(b.clone()).bundle(vec![lin(&b, 0), lin(&b, 1)]).unwrap();
        let z = p.zeta().unwrap();
        let q = &z.scale_int(2) + &p.pullback(&lin(&b, 2)).unwrap();
        let g = p.pullback(&lin(&b, 1)).unwrap();
        let bl = CompleteIntersection::whole(p).blow_up_along(&q, &g).unwrap();
        assert_eq!(bl.ambient().level(), 2);
        assert_eq!(euler_char_ci(&bl).unwrap(), rat(6));
    }
}
