//! Ordered wall crossings of candidate producers along a segment in a
//! family's parameter space.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::onedim_unnormalized;
use crate::characters::ChernCharacter;
use crate::error::{Error, Result};
use crate::lattice::SurfaceLattice;
use crate::rational::{format_rational, int, q, rational_sqrt, Rational};
use crate::stability::{bogomolov, central_charge, eval_family, FamilyClass, FamilyKind, FamilySpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Position along the segment, in `[0, 1]`.
    pub lambda: Rational,
    pub params: Vec<Rational>,
    pub producers: Vec<ChernCharacter>,
    /// The crossing is an endpoint of the segment.
    pub boundary: bool,
    /// The family vector at the crossing satisfies the Bogomolov inequality.
    pub admissible: bool,
}

/// A function of the parameters vanishing exactly on the wall of `a`:
/// `⟨a, α⟩` on orthogonal families (before normalization), and
/// `Re Z(a)·Im Z(v) - Re Z(v)·Im Z(a)` otherwise.
pub fn wall_function(a: &ChernCharacter, f: &FamilySpec, params: &[Rational], s: &SurfaceLattice) -> Result<Rational> {
    s.check(&a.c1)?;
    if f.kind == FamilyKind::OneDimQuadrant {
        f.validate(s)?;
        if params.len() != 2 {
            return Err(Error::BadParamCount { expected: 2, found: params.len() });
        }
        let v = match &f.v {
            FamilyClass::OneDim(c) => c,
            FamilyClass::Character(_) => unreachable!("validated"),
        };
        if !v.chi.is_positive() {
            return Err(Error::NonPositiveEuler(format!("chi = {} must be positive", format_rational(&v.chi))));
        }
        let dclass = &f.directions[0].scale(&params[0]) + &f.directions[1].scale(&params[1]);
        return Ok(s.pairing_unchecked(&a.to_extended(), &onedim_unnormalized(v, &dclass, s)));
    }
    let p = eval_family(f, params, s)?;
    if f.kind.is_orthogonal() {
        return s.poincare_pairing(&a.to_extended(), &p.unnormalized());
    }
    let v = f.v.character(s)?;
    let h = f.polarization();
    let za = central_charge(a, &p.vector, &h, s)?;
    let zv = central_charge(&v, &p.vector, &h, s)?;
    Ok(&za.re * &zv.im - &zv.re * &za.im)
}

fn lerp(start: &[Rational], end: &[Rational], lambda: &Rational) -> Vec<Rational> {
    start.iter().zip(end).map(|(x, y)| x + lambda * (y - x)).collect()
}

fn in_unit(x: &Rational) -> bool {
    !x.is_negative() && x <= &Rational::one()
}

/// Roots in `[0, 1]` of `aλ² + bλ + c` (not identically zero).
fn unit_roots(a: &Rational, b: &Rational, c: &Rational, who: &ChernCharacter) -> Result<Vec<Rational>> {
    if a.is_zero() {
        if b.is_zero() {
            return Ok(Vec::new());
        }
        let r = -c / b;
        return Ok(if in_unit(&r) { vec![r] } else { Vec::new() });
    }
    let disc = b * b - int(4) * a * c;
    if disc.is_negative() {
        return Ok(Vec::new());
    }
    match rational_sqrt(&disc) {
        Some(root) => {
            let mut rs: Vec<Rational> =
                [(-b - &root) / (int(2) * a), (-b + &root) / (int(2) * a)].into_iter().filter(in_unit).collect();
            rs.sort();
            rs.dedup();
            Ok(rs)
        }
        None => {
            // irrational roots: p(0), p(1) are nonzero here
            let p0 = c.clone();
            let p1 = a + b + c;
            let vertex = -b / (int(2) * a);
            let inside = p0.signum() != p1.signum() || (vertex.is_positive() && vertex < Rational::one());
            if inside {
                Err(Error::IrrationalCrossing(format!("wall of {who} meets the segment at an irrational point")))
            } else {
                Ok(Vec::new())
            }
        }
    }
}

/// Crossings of the walls of `candidates` with the segment from `start` to
/// `end`, sorted by position; producers sharing a crossing are merged.
pub fn segment_scan(
    f: &FamilySpec,
    start: &[Rational],
    end: &[Rational],
    candidates: &[ChernCharacter],
    s: &SurfaceLattice,
) -> Result<Vec<Crossing>> {
    f.validate(s)?;
    for p in [start, end] {
        if p.len() != f.param_count() {
            return Err(Error::BadParamCount { expected: f.param_count(), found: p.len() });
        }
    }
    let admissible_at = |params: &[Rational]| -> bool {
        eval_family(f, params, s).and_then(|p| bogomolov(&p.vector, s)).map(|b| b.ok).unwrap_or(false)
    };
    for p in [start, end] {
        if !admissible_at(p) {
            let shown: Vec<String> = p.iter().map(format_rational).collect();
            return Err(Error::InadmissibleEndpoint(format!("({})", shown.join(", "))));
        }
    }
    let at = |a: &ChernCharacter, lam: &Rational| wall_function(a, f, &lerp(start, end, lam), s);
    let mut found: BTreeMap<Rational, Vec<ChernCharacter>> = BTreeMap::new();
    for a in candidates {
        let w0 = at(a, &Rational::zero())?;
        let wh = at(a, &q(1, 2))?;
        let w1 = at(a, &Rational::one())?;
        // quadratic through λ = 0, 1/2, 1
        let qa = int(2) * &w1 + int(2) * &w0 - int(4) * &wh;
        let qb = &w1 - &w0 - &qa;
        let qc = w0;
        let third = q(1, 3);
        assert_eq!(
            at(a, &third)?,
            &qa * &third * &third + &qb * &third + &qc,
            "wall function is not quadratic along the segment"
        );
        if qa.is_zero() && qb.is_zero() && qc.is_zero() {
            continue;
        }
        for r in unit_roots(&qa, &qb, &qc, a)? {
            found.entry(r).or_default().push(a.clone());
        }
    }
    Ok(found
        .into_iter()
        .map(|(lambda, mut producers)| {
            producers.sort();
            producers.dedup();
            let params = lerp(start, end, &lambda);
            Crossing {
                boundary: lambda.is_zero() || lambda.is_one(),
                admissible: admissible_at(&params),
                lambda,
                params,
                producers,
            }
        })
        .collect())
}
