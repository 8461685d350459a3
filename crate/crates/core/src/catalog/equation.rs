//! Monomial supports of polynomial equations and the homogeneity solve that
//! turns local equations into global line-bundle twists.
//!
//! Only the support of an equation matters here: numeric coefficients and
//! signs are read and discarded.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::LinearClass;
use crate::error::{Error, Result};
use crate::ring::Rational;

/// One monomial: variable name ↦ exponent.
pub type Support = BTreeMap<String, u32>;

/// Parses `a*x^2 - 3*h*z^2 + ...` into monomial supports. An optional `=`
/// is read as subtraction. Parentheses are not supported.
pub fn parse_polynomial(src: &str) -> Result<Vec<Support>> {
    let malformed = || Error::MalformedEquation(src.to_string());
    if src.contains(['(', ')']) {
        return Err(malformed());
    }
    let normalized = src.replace('=', "-");
    let mut pieces: Vec<&str> = normalized.split(['+', '-']).collect();
    // a leading sign leaves an empty first piece
    if pieces.len() > 1 && pieces[0].trim().is_empty() {
        pieces.remove(0);
    }
    if pieces.iter().any(|p| p.trim().is_empty()) {
        return Err(malformed());
    }
    pieces.iter().map(|t| parse_monomial(t).ok_or_else(malformed)).collect()
}

fn parse_monomial(src: &str) -> Option<Support> {
    let mut out = Support::new();
    for factor in src.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return None;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n.trim(), e.trim().parse::<u32>().ok()?),
            None => (factor, 1),
        };
        if name.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '/') {
            continue;
        }
        let mut chars = name.chars();
        let first = chars.next()?;
        if !(first.is_ascii_alphabetic() || first == '_') || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        if exp > 0 {
            *out.entry(name.to_string()).or_insert(0) += exp;
        }
    }
    Some(out)
}

/// Result of [`solve_twists`]: a twist per coordinate (lines only), and for
/// each equation its class `deg·ζ + (line part)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistSolution {
    pub twists: Vec<(String, LinearClass)>,
    pub classes: Vec<LinearClass>,
}

/// Finds coordinate twists `a_c` making every monomial of each equation a
/// section of one line bundle: for a monomial `s · Π x_c^{e_c}` the class is
/// `(Σ e_c)ζ + [s] + Σ e_c a_c`. The first coordinate is pinned to twist 0;
/// any remaining free direction is set to 0 as well.
pub fn solve_twists(
    coordinates: &[String],
    equations: &[Vec<Support>],
    sections: &BTreeMap<String, LinearClass>,
) -> Result<TwistSolution> {
    let n = coordinates.len();
    let m = equations.len();
    let index: BTreeMap<&str, usize> = coordinates.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut symbols = BTreeSet::new();
    for s in sections.values() {
        symbols.extend(s.lines.keys().cloned());
    }

    // rows: (coefficients over a_0..a_{n-1}, K_0..K_{m-1}), rhs per symbol
    let mut rows: Vec<(Vec<i64>, BTreeMap<String, i64>)> = Vec::new();
    let mut degrees = Vec::with_capacity(m);
    for (p, eq) in equations.iter().enumerate() {
        let mut degree = None;
        for mono in eq {
            let mut row = vec![0i64; n + m];
            row[n + p] = -1;
            let mut rhs: BTreeMap<String, i64> = BTreeMap::new();
            let mut deg = 0u32;
            for (name, &e) in mono {
                if let Some(&i) = index.get(name.as_str()) {
                    row[i] += e as i64;
                    deg += e;
                } else if let Some(sec) = sections.get(name) {
                    if !sec.zeta.iter().all(|z| *z == 0) {
                        return Err(Error::NonHomogenizable(format!("section {name} has a fibre component")));
                    }
                    for (s, k) in &sec.lines {
                        *rhs.entry(s.clone()).or_insert(0) -= k * e as i64;
                    }
                } else {
                    return Err(Error::UnknownSymbol(name.clone()));
                }
            }
            match degree {
                None => degree = Some(deg),
                Some(d) if d != deg => {
                    return Err(Error::NonHomogenizable(format!(
                        "equation {} mixes coordinate degrees {d} and {deg}",
                        p + 1
                    )))
                }
                _ => {}
            }
            rows.push((row, rhs));
        }
        degrees.push(degree.unwrap_or(0));
    }
    if n > 0 {
        let mut row = vec![0i64; n + m];
        row[0] = 1;
        rows.push((row, BTreeMap::new()));
    }

    let symbols: Vec<String> = symbols.into_iter().collect();
    let solution = solve_rational(n + m, &rows, &symbols)?;

    let class_of = |var: usize| -> LinearClass {
        LinearClass::lines(symbols.iter().zip(&solution).map(|(s, col)| (s.as_str(), col[var])))
    };
    let twists = coordinates
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), class_of(i)))
        .collect();
    let classes = (0..m)
        .map(|p| {
            let mut c = class_of(n + p);
            c.zeta = vec![degrees[p] as i64];
            c.normalized()
        })
        .collect();
    Ok(TwistSolution { twists, classes })
}

/// Gaussian elimination over ℚ, one right-hand side per symbol. Returns the
/// integer solution for each symbol (indexed `[symbol][variable]`).
fn solve_rational(
    vars: usize,
    rows: &[(Vec<i64>, BTreeMap<String, i64>)],
    symbols: &[String],
) -> Result<Vec<Vec<i64>>> {
    let k = symbols.len();
    let to_q = |x: i64| Rational::from_integer(BigInt::from(x));
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(row, rhs)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| to_q(x)).collect();
            r.extend(symbols.iter().map(|s| to_q(rhs.get(s).copied().unwrap_or(0))));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..vars {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let (pivot_row, row_i) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, y) in row_i.iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    for row in &a[r..] {
        if row[vars..].iter().any(|x| !x.is_zero()) {
            return Err(Error::NonHomogenizable("inconsistent degree constraints".into()));
        }
    }
    let mut out = vec![vec![0i64; vars]; k];
    for (i, &col) in pivots.iter().enumerate() {
        for s in 0..k {
            let v = &a[i][vars + s];
            if !v.denom().is_one() {
                return Err(Error::NonHomogenizable(format!(
                    "fractional twist {v} for {}",
                    symbols[s]
                )));
            }
            let v = v.to_integer();
            out[s][col] = i64::try_from(&v).map_err(|_| Error::NonHomogenizable(format!("twist {v} out of range")))?;
        }
    }
    Ok(out)
}
