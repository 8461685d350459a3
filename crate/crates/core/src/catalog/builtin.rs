//! The six built-in families.
//!
//! Coordinates are listed with the twist-0 coordinate first. Equations carry
//! their true coefficients, though only their supports are checked.

use std::collections::BTreeMap;

use super::{
    BlowupSpec, ComponentSpec, EquationSpec, IntersectionSpec, LhsSpec, LinearClass, ModelSpec, ResolutionSpec,
    ScenarioSpec, StratumSource, StratumSpec,
};
use crate::constructible::{fiber_euler as chi, ConstructibleFunction, StratificationTable};
use crate::error::{Error, Result};

const NAMES: [&str; 6] = ["weierstrass", "e6", "e7", "e7prime", "d5", "q7"];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

pub fn builtin(name: &str) -> Result<ScenarioSpec> {
    match name {
        "weierstrass" => Ok(weierstrass()),
        "e6" => Ok(e6()),
        "e7" => Ok(e7()),
        "e7prime" => Ok(e7prime()),
        "d5" => Ok(d5()),
        "q7" => Ok(q7()),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

fn ls(l: i64, s: i64) -> LinearClass {
    LinearClass::lines([("L", l), ("S", s)])
}

fn l(k: i64) -> LinearClass {
    ls(k, 0)
}

fn fibre(zeta: i64, c: LinearClass) -> LinearClass {
    c.with_zeta(&[zeta])
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn sections(list: &[(&str, LinearClass)]) -> BTreeMap<String, LinearClass> {
    list.iter().map(|(n, c)| (n.to_string(), c.clone())).collect()
}

/// Hypersurfaces in `P(⊕ O(twist))` over the base.
fn model(coords: &[&str], twists: Vec<LinearClass>, polys: &[&str], hyps: Vec<LinearClass>) -> ModelSpec {
    ModelSpec {
        tower: vec![twists],
        hypersurfaces: hyps,
        blowup: None,
        equations: Some(EquationSpec {
            coordinates: strings(coords),
            polynomials: strings(polys),
            blowup_center: None,
        }),
    }
}

/// A model blown up along `{q = 0} ∩ {g = 0}`.
fn blown_up(mut m: ModelSpec, q: (&str, LinearClass), g: (&str, LinearClass)) -> ModelSpec {
    m.blowup = Some(BlowupSpec { q: q.1, g: g.1 });
    if let Some(eq) = &mut m.equations {
        eq.blowup_center = Some((q.0.to_string(), g.0.to_string()));
    }
    m
}

fn on_base(polys: &[&str], hyps: Vec<LinearClass>) -> ModelSpec {
    ModelSpec {
        tower: vec![],
        hypersurfaces: hyps,
        blowup: None,
        equations: Some(EquationSpec {
            coordinates: vec![],
            polynomials: strings(polys),
            blowup_center: None,
        }),
    }
}

fn smooth(name: &str, polys: &[&str], hyps: Vec<LinearClass>) -> StratumSpec {
    StratumSpec {
        name: name.to_string(),
        source: StratumSource::Model(on_base(polys, hyps)),
        equation: None,
    }
}

fn singular(name: &str, equation: &str) -> StratumSpec {
    StratumSpec {
        name: name.to_string(),
        source: StratumSource::Unknown,
        equation: Some(equation.to_string()),
    }
}

fn table(rows: &[(&str, Option<&str>, i64)]) -> StratificationTable {
    rows.iter()
        .fold(StratificationTable::new(), |t, (v, w, c)| t.row(v, *w, *c))
}

fn func(terms: &[(&str, i64)]) -> ConstructibleFunction {
    ConstructibleFunction::from_terms(terms.iter().copied())
}

fn component(name: &str, model: ModelSpec, table: StratificationTable) -> ComponentSpec {
    ComponentSpec {
        name: name.to_string(),
        multiplicity: 1,
        model,
        table,
    }
}

/// `X = D1 ∩ D2`, a double cover of the base branched along `O`.
fn orientifold(model: ModelSpec) -> IntersectionSpec {
    IntersectionSpec {
        name: "X".to_string(),
        pair: ("Dcal1".to_string(), "Dcal2".to_string()),
        model,
        table: table(&[("B", Some("O"), chi::TWO_POINTS), ("O", None, chi::POINT)]),
    }
}

fn orientifold_plane() -> StratumSpec {
    smooth("O", &["h"], vec![l(2)])
}

fn weierstrass() -> ScenarioSpec {
    ScenarioSpec {
        name: "weierstrass".into(),
        description:
            "Weierstrass fibration y^2 z = x^3 + f x z^2 + g z^3 with f = -3h^2 + c eta, g = -2h^3 + c h eta + c^2 chi"
                .into(),
        sections: sections(&[("f", l(4)), ("g", l(6)), ("h", l(2)), ("eta", l(4)), ("sec_chi", l(6))]),
        lhs: LhsSpec::CompleteIntersection {
            model: model(
                &["z", "x", "y"],
                vec![l(0), l(2), l(3)],
                &["y^2*z - x^3 - f*x*z^2 - g*z^3"],
                vec![fibre(3, l(6))],
            ),
        },
        strata: vec![
            singular("Delta", "4*f^3 + 27*g^2"),
            smooth("C", &["f", "g"], vec![l(4), l(6)]),
            orientifold_plane(),
            singular("D", "eta^2 + 12*h*sec_chi"),
            smooth("S", &["h", "eta", "sec_chi"], vec![l(2), l(4), l(6)]),
        ],
        resolution: ResolutionSpec {
            components: vec![
                component(
                    "Dcal1",
                    model(
                        &["w", "X1", "X3"],
                        vec![l(0), l(1), l(-2)],
                        &["X1^2 - 3*h*w^2 - X3*eta*w - X3^2*sec_chi"],
                        vec![fibre(2, l(2))],
                    ),
                    table(&[
                        ("B", Some("D"), chi::SMOOTH_CONIC),
                        ("D", Some("S"), chi::LINE_PAIR),
                        ("S", None, chi::DOUBLE_LINE),
                    ]),
                ),
                component(
                    "Dcal2",
                    model(
                        &["w", "X1", "X2"],
                        vec![l(0), l(1), l(2)],
                        &["X1^2 - X2*w + 3*h*w^2"],
                        vec![fibre(2, l(2))],
                    ),
                    table(&[("B", None, chi::SMOOTH_CONIC)]),
                ),
            ],
            intersections: vec![orientifold(model(
                &["w", "z_o"],
                vec![l(0), l(1)],
                &["z_o^2 - h*w^2"],
                vec![fibre(2, l(2))],
            ))],
        },
        expected_pushforward: func(&[("O", 2), ("D", 1), ("S", -1)]),
        printed_identity: None,
        lhs_table: Some(table(&[
            ("B", Some("Delta"), chi::ELLIPTIC),
            ("Delta", Some("C"), chi::NODAL_CUBIC),
            ("C", None, chi::CUSPIDAL_CUBIC),
        ])),
        lhs_function: Some(func(&[("Delta", 1), ("C", 1)])),
    }
}

fn e6() -> ScenarioSpec {
    ScenarioSpec {
        name: "e6".into(),
        description: "E6 fibration x^3 + y^3 = a1 xyz + a2 xz^2 + a3 yz^2 + a4 z^3 with a1 = 6nu, a2 = 9nu^2 + 3h, a3 = a2 + c phi, a4 = 2nu(5nu^2 + 3h) + c(chi + nu phi)".into(),
        sections: sections(&[
            ("a1", l(1)),
            ("a2", l(2)),
            ("a3", l(2)),
            ("a4", l(3)),
            ("nu", l(1)),
            ("h", l(2)),
            ("phi", l(2)),
            ("sec_chi", l(3)),
        ]),
        lhs: LhsSpec::CompleteIntersection {
            model: model(
                &["z", "x", "y"],
                vec![l(0), l(1), l(1)],
                &["x^3 + y^3 - a1*x*y*z - a2*x*z^2 - a3*y*z^2 - a4*z^3"],
                vec![fibre(3, l(3))],
            ),
        },
        strata: vec![
            orientifold_plane(),
            smooth("D1", &["h + 3*nu^2"], vec![l(2)]),
            singular("D2", "sec_chi^2 - h*phi^2"),
            smooth("T2", &["sec_chi", "phi"], vec![l(3), l(2)]),
            smooth("S2", &["sec_chi", "h", "phi"], vec![l(3), l(2), l(2)]),
        ],
        resolution: ResolutionSpec {
            components: vec![
                component(
                    "Dcal1",
                    blown_up(
                        model(&["z", "y"], vec![l(0), l(1)], &[], vec![]),
                        ("y^2 + 2*nu*y*z + nu^2*z^2 - h*z^2", fibre(2, l(2))),
                        ("phi*y + phi*nu*z + sec_chi*z", fibre(1, l(3))),
                    ),
                    table(&[
                        ("B", Some("D2"), chi::SMOOTH_CONIC),
                        ("D2", Some("T2"), chi::LINE_PAIR),
                        ("T2", Some("S2"), chi::LINE_CHAIN),
                        ("S2", None, chi::LINE_PAIR),
                    ]),
                ),
                component(
                    "Dcal2",
                    model(
                        &["z", "x", "y"],
                        vec![l(0), l(1), l(1)],
                        &["x^2 + x*y + y^2 + 3*nu*x*z + 3*nu*y*z + 3*nu^2*z^2 - h*z^2"],
                        vec![fibre(2, l(2))],
                    ),
                    table(&[("B", Some("D1"), chi::SMOOTH_CONIC), ("D1", None, chi::LINE_PAIR)]),
                ),
            ],
            intersections: vec![orientifold(model(
                &["z", "y"],
                vec![l(0), l(1)],
                &["y^2 + 2*nu*y*z + nu^2*z^2 - h*z^2"],
                vec![fibre(2, l(2))],
            ))],
        },
        expected_pushforward: func(&[("O", 2), ("D1", 1), ("D2", 1), ("T2", 1), ("S2", -1)]),
        printed_identity: Some(func(&[("O", 2), ("D1", 1), ("D2", 1), ("S2", -1)])),
        lhs_table: None,
        lhs_function: None,
    }
}

fn e7_double_cover() -> LhsSpec {
    LhsSpec::DoubleCover {
        target: ModelSpec {
            tower: vec![vec![l(0), l(1)]],
            ..ModelSpec::default()
        },
        branch: fibre(4, l(4)),
        branch_equation: Some(EquationSpec {
            coordinates: strings(&["z", "x"]),
            polynomials: strings(&["x^4 + b1*x^2*z^2 + b2*x*z^3 + b3*z^4"]),
            blowup_center: None,
        }),
    }
}

fn e7() -> ScenarioSpec {
    ScenarioSpec {
        name: "e7".into(),
        description:
            "E7 fibration y^2 = x^4 + b1 x^2 z^2 + b2 x z^3 + b3 z^4 with b1 = -2h, b2 = c delta, b3 = h^2 + c gamma"
                .into(),
        sections: sections(&[
            ("b1", l(2)),
            ("b2", l(3)),
            ("b3", l(4)),
            ("h", l(2)),
            ("delta", l(3)),
            ("gamma", l(4)),
        ]),
        lhs: e7_double_cover(),
        strata: vec![
            orientifold_plane(),
            singular("D3", "gamma^2 - delta^2*h"),
            smooth("T3", &["gamma", "delta"], vec![l(4), l(3)]),
            smooth("S3", &["gamma", "delta", "h"], vec![l(4), l(3), l(2)]),
        ],
        resolution: ResolutionSpec {
            components: vec![
                component(
                    "Dcal1",
                    blown_up(
                        model(&["z", "x"], vec![l(0), l(1)], &[], vec![]),
                        ("x^2 - h*z^2", fibre(2, l(2))),
                        ("delta*x + gamma*z", fibre(1, l(4))),
                    ),
                    table(&[
                        ("B", Some("D3"), chi::SMOOTH_CONIC),
                        ("D3", Some("T3"), chi::LINE_PAIR),
                        ("T3", Some("S3"), chi::LINE_CHAIN),
                        ("S3", None, chi::LINE_PAIR),
                    ]),
                ),
                component(
                    "Dcal2",
                    ModelSpec {
                        tower: vec![vec![l(0), l(1)]],
                        ..ModelSpec::default()
                    },
                    table(&[("B", None, chi::SMOOTH_CONIC)]),
                ),
            ],
            intersections: vec![orientifold(model(
                &["z", "x"],
                vec![l(0), l(1)],
                &["x^2 - h*z^2"],
                vec![fibre(2, l(2))],
            ))],
        },
        expected_pushforward: func(&[("O", 2), ("D3", 1), ("T3", 1), ("S3", -1)]),
        printed_identity: Some(func(&[("O", 2), ("D3", 1), ("S3", -1)])),
        lhs_table: None,
        lhs_function: None,
    }
}

fn e7prime() -> ScenarioSpec {
    ScenarioSpec {
        name: "e7prime".into(),
        description: "E7 fibration with b1 = h - 6eps^2, b2 = 2eps(h - 4eps^2) + 2c zeta, b3 = eps^2(h - 3eps^2) + 2c eps zeta + c^2 tau".into(),
        sections: sections(&[
            ("b1", l(2)),
            ("b2", l(3)),
            ("b3", l(4)),
            ("h", l(2)),
            ("epsilon", l(1)),
            ("zeta_s", l(3)),
            ("tau", l(4)),
        ]),
        lhs: e7_double_cover(),
        strata: vec![
            orientifold_plane(),
            smooth("D4", &["h - 4*epsilon^2"], vec![l(2)]),
            singular("D6", "zeta_s^2 - h*tau"),
            smooth("S6", &["zeta_s", "h", "tau"], vec![l(3), l(2), l(4)]),
        ],
        resolution: ResolutionSpec {
            components: vec![
                component(
                    "Dcal1",
                    model(
                        &["c", "t", "y"],
                        vec![l(0), l(1), l(2)],
                        &["y^2 - h*t^2 - 2*zeta_s*c*t - tau*c^2"],
                        vec![fibre(2, l(4))],
                    ),
                    table(&[
                        ("B", Some("D6"), chi::SMOOTH_CONIC),
                        ("D6", Some("S6"), chi::LINE_PAIR),
                        ("S6", None, chi::DOUBLE_LINE),
                    ]),
                ),
                component(
                    "Dcal2",
                    model(
                        &["z", "x", "v"],
                        vec![l(0), l(1), l(1)],
                        &["v^2 - x^2 + 2*epsilon*x*z - h*z^2 + 3*epsilon^2*z^2"],
                        vec![fibre(2, l(2))],
                    ),
                    table(&[("B", Some("D4"), chi::SMOOTH_CONIC), ("D4", None, chi::LINE_PAIR)]),
                ),
            ],
            intersections: vec![orientifold(model(
                &["z", "v"],
                vec![l(0), l(1)],
                &["v^2 - h*z^2"],
                vec![fibre(2, l(2))],
            ))],
        },
        expected_pushforward: func(&[("O", 2), ("D4", 1), ("D6", 1), ("S6", -1)]),
        printed_identity: None,
        lhs_table: None,
        lhs_function: None,
    }
}

fn d5() -> ScenarioSpec {
    ScenarioSpec {
        name: "d5".into(),
        description: "D5 fibration x^2 - y^2 - z(d1 z + d2 w) = w^2 - x^2 - z(d3 z + d4 x + d5 y) = 0 with d1 = c alpha, d2 = c eta, d3 = h, d4 = psi1 + psi2, d5 = psi1 - psi2".into(),
        sections: sections(&[
            ("d1", l(2)),
            ("d2", l(1)),
            ("d3", l(2)),
            ("d4", l(1)),
            ("d5", l(1)),
            ("alpha", l(2)),
            ("eta", l(1)),
            ("h", l(2)),
            ("psi1", l(1)),
            ("psi2", l(1)),
        ]),
        lhs: LhsSpec::CompleteIntersection {
            model: model(
                &["z", "x", "y", "w"],
                vec![l(0), l(1), l(1), l(1)],
                &[
                    "x^2 - y^2 - d1*z^2 - d2*z*w",
                    "w^2 - x^2 - d3*z^2 - d4*x*z - d5*y*z",
                ],
                vec![fibre(2, l(2)), fibre(2, l(2))],
            ),
        },
        strata: vec![
            orientifold_plane(),
            smooth("D7", &["h - psi1^2"], vec![l(2)]),
            smooth("D8", &["h - psi2^2"], vec![l(2)]),
            singular("D9", "h*eta^2 - alpha^2"),
            smooth("T9", &["alpha", "eta"], vec![l(2), l(1)]),
            smooth("S9", &["alpha", "eta", "h"], vec![l(2), l(1), l(2)]),
        ],
        resolution: ResolutionSpec {
            components: vec![
                component(
                    "Dcal1",
                    blown_up(
                        model(
                            &["z", "x", "w"],
                            vec![l(0), l(1), l(1)],
                            &["w^2 - x^2 - h*z^2 - 2*psi1*x*z"],
                            vec![fibre(2, l(2))],
                        ),
                        ("x", fibre(1, l(1))),
                        ("alpha*z - eta*w", fibre(1, l(2))),
                    ),
                    // conic fibres, plus one exceptional line per point of the centre
                    table(&[
                        ("B", Some("D7"), chi::SMOOTH_CONIC),
                        ("D7", None, chi::LINE_PAIR),
                        ("D9", Some("T9"), 1),
                        ("T9", Some("S9"), 2),
                        ("S9", None, 1),
                    ]),
                ),
                component(
                    "Dcal2",
                    model(
                        &["z", "x", "w"],
                        vec![l(0), l(1), l(1)],
                        &["w^2 - x^2 - h*z^2 - 2*psi2*x*z"],
                        vec![fibre(2, l(2))],
                    ),
                    table(&[("B", Some("D8"), chi::SMOOTH_CONIC), ("D8", None, chi::LINE_PAIR)]),
                ),
            ],
            intersections: vec![orientifold(model(
                &["z", "w"],
                vec![l(0), l(1)],
                &["w^2 - h*z^2"],
                vec![fibre(2, l(2))],
            ))],
        },
        expected_pushforward: func(&[("O", 2), ("D7", 1), ("D8", 1), ("D9", 1), ("T9", 1), ("S9", -1)]),
        printed_identity: Some(func(&[("O", 2), ("D7", 1), ("D8", 1), ("D9", 1), ("S9", -1)])),
        lhs_table: None,
        lhs_function: None,
    }
}

fn q7() -> ScenarioSpec {
    ScenarioSpec {
        name: "q7".into(),
        description: "Q7 fibration y(x^2 - e1 y^2) + z(e2 y^2 + e3 xz + e4 yz + e5 z^2) = 0 with e1 = beta, e2 = 2theta, e3 = c^2 rho, e4 = h, e5 = c iota".into(),
        sections: sections(&[
            ("e1", ls(2, -2)),
            ("e2", ls(2, -1)),
            ("e3", ls(1, 1)),
            ("e4", ls(2, 0)),
            ("e5", ls(2, 1)),
            ("beta", ls(2, -2)),
            ("theta", ls(2, -1)),
            ("rho", ls(1, 1)),
            ("h", ls(2, 0)),
            ("iota", ls(2, 1)),
        ]),
        lhs: LhsSpec::CompleteIntersection {
            model: model(
                &["z", "x", "y"],
                vec![l(0), l(1), ls(0, 1)],
                &["x^2*y - e1*y^3 + e2*y^2*z + e3*x*z^2 + e4*y*z^2 + e5*z^3"],
                vec![fibre(3, ls(2, 1))],
            ),
        },
        strata: vec![
            orientifold_plane(),
            smooth("D10", &["iota"], vec![ls(2, 1)]),
            smooth("S10", &["iota", "h"], vec![ls(2, 1), l(2)]),
            singular("D11", "theta^2 + h*beta"),
            smooth("S11", &["theta", "h", "beta"], vec![ls(2, -1), l(2), ls(2, -2)]),
        ],
        resolution: ResolutionSpec {
            components: vec![
                component(
                    "Dcal1",
                    blown_up(
                        model(&["z", "x"], vec![l(0), l(1)], &[], vec![]),
                        ("x^2 + h*z^2", fibre(2, l(2))),
                        ("iota", ls(2, 1)),
                    ),
                    table(&[
                        ("B", Some("D10"), chi::SMOOTH_CONIC),
                        ("D10", Some("S10"), chi::LINE_CHAIN),
                        ("S10", None, chi::LINE_PAIR),
                    ]),
                ),
                component(
                    "Dcal2",
                    model(
                        &["z", "x", "y"],
                        vec![l(0), l(1), ls(0, 1)],
                        &["x^2 - beta*y^2 + 2*theta*y*z + h*z^2"],
                        vec![fibre(2, l(2))],
                    ),
                    table(&[
                        ("B", Some("D11"), chi::SMOOTH_CONIC),
                        ("D11", Some("S11"), chi::LINE_PAIR),
                        ("S11", None, chi::DOUBLE_LINE),
                    ]),
                ),
            ],
            intersections: vec![orientifold(model(
                &["z", "x"],
                vec![l(0), l(1)],
                &["x^2 + h*z^2"],
                vec![fibre(2, l(2))],
            ))],
        },
        expected_pushforward: func(&[("O", 2), ("D10", 2), ("S10", -1), ("D11", 1), ("S11", -1)]),
        printed_identity: None,
        lhs_table: None,
        lhs_function: None,
    }
}
