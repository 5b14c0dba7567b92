//! Walls in the Maciocia half-plane `α = (1, -β_x, (β_x² - y²H²)/2)`,
//! `β_x = xH + u0·G`, expanded as exact polynomials in `x` and `Y = y²`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{require_kind, Locus, WallKind, WallRecord};
use crate::characters::ChernCharacter;
use crate::error::Result;
use crate::lattice::SurfaceLattice;
use crate::rational::{int, Rational};
use crate::stability::{FamilyClass, FamilyKind, FamilySpec};

/// Sparse polynomial in `x` and `Y`, keyed by exponents `(i, j)` of `x^i Y^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MaciociaPolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl MaciociaPolynomial {
    fn constant(c: Rational) -> Self {
        let mut p = Self::default();
        p.add_term((0, 0), c);
        p
    }

    fn monomial(e: (u32, u32), c: Rational) -> Self {
        let mut p = Self::default();
        p.add_term(e, c);
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: Rational) {
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    fn scale(&self, k: &Rational) -> Self {
        let mut r = Self::default();
        for (e, c) in &self.terms {
            r.add_term(*e, c * k);
        }
        r
    }

    fn mul(&self, o: &Self) -> Self {
        let mut r = Self::default();
        for ((i, j), c) in &self.terms {
            for ((k, l), d) in &o.terms {
                r.add_term((i + k, j + l), c * d);
            }
        }
        r
    }

    /// Coefficient of `x^i Y^j`.
    pub fn coef(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &Rational, ysq: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, ((i, j), c)| {
            acc + c * num_traits::pow(x.clone(), *i as usize) * num_traits::pow(ysq.clone(), *j as usize)
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }
}

/// `Re Z(a)·Im Z(v) - Re Z(v)·Im Z(a)` over the Maciocia plane, with
/// `Z(E) = -⟨E, α⟩ + i⟨E, α·H⟩`.
pub fn maciocia_wall_polynomial(a: &ChernCharacter, f: &FamilySpec, s: &SurfaceLattice) -> Result<MaciociaPolynomial> {
    require_kind(f, FamilyKind::MaciociaPlane)?;
    f.validate(s)?;
    let v = match &f.v {
        FamilyClass::Character(c) => c,
        FamilyClass::OneDim(_) => unreachable!("validated"),
    };
    s.check(&a.c1)?;
    let n = s.ns_rank();
    let h = &f.directions[0];
    let g = f.directions.get(1);
    let u0 = f.u0();
    let x = MaciociaPolynomial::monomial((1, 0), int(1));
    // coordinates of β_x
    let beta: Vec<MaciociaPolynomial> = (0..n)
        .map(|i| {
            let mut p = x.scale(&h.coords()[i]);
            if let Some(g) = g {
                p = p.add(&MaciociaPolynomial::constant(&u0 * &g.coords()[i]));
            }
            p
        })
        .collect();
    let form = s.intersection_matrix();
    let dot_poly = |u: &[MaciociaPolynomial], w: &[MaciociaPolynomial]| {
        let mut acc = MaciociaPolynomial::default();
        for i in 0..n {
            for j in 0..n {
                if form[i][j] != 0 {
                    acc = acc.add(&u[i].mul(&w[j]).scale(&int(form[i][j])));
                }
            }
        }
        acc
    };
    let consts = |d: &crate::lattice::DivisorClass| -> Vec<MaciociaPolynomial> {
        d.coords().iter().map(|c| MaciociaPolynomial::constant(c.clone())).collect()
    };
    let hh = s.dot(h, h);
    let ysq = MaciociaPolynomial::monomial((0, 1), int(1));
    let alpha2 = dot_poly(&beta, &beta).add(&ysq.scale(&-&hh)).scale(&Rational::new(1.into(), 2.into()));
    // α1·H = -β·H
    let alpha1_h = dot_poly(&beta, &consts(h)).scale(&int(-1));
    let pq = |e: &ChernCharacter| {
        // ⟨e, α⟩ = r α2 - c1·β + ch2
        let p = alpha2
            .scale(&e.r)
            .add(&dot_poly(&consts(&e.c1), &beta).scale(&int(-1)))
            .add(&MaciociaPolynomial::constant(e.ch2.clone()));
        // ⟨e, α·H⟩ = r (α1·H) + c1·H
        let q = alpha1_h.scale(&e.r).add(&MaciociaPolynomial::constant(s.dot(&e.c1, h)));
        (p, q)
    };
    let (pa, qa) = pq(a);
    let (pv, qv) = pq(v);
    Ok(pv.mul(&qa).add(&pa.mul(&qv).scale(&int(-1))))
}

/// `quad·(x² + y²) + lin_x·x + const_ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCircle {
    pub quad_coef: Rational,
    pub lin_x: Rational,
    pub const_: Rational,
    pub producer: ChernCharacter,
}

impl WallCircle {
    pub fn is_vertical_line(&self) -> bool {
        self.quad_coef.is_zero()
    }

    /// `x` of the vertical line when `quad = 0`.
    pub fn vertical_x(&self) -> Option<Rational> {
        (self.quad_coef.is_zero() && !self.lin_x.is_zero()).then(|| -&self.const_ / &self.lin_x)
    }

    pub fn center(&self) -> Option<Rational> {
        (!self.quad_coef.is_zero()).then(|| -&self.lin_x / (int(2) * &self.quad_coef))
    }

    pub fn radius_sq(&self) -> Option<Rational> {
        let c = self.center()?;
        Some(&c * &c - &self.const_ / &self.quad_coef)
    }

    /// True if the locus meets the open half-plane `y > 0`.
    pub fn meets_half_plane(&self) -> bool {
        match self.radius_sq() {
            Some(r2) => r2.is_positive(),
            None => !self.lin_x.is_zero(),
        }
    }

    pub fn eval(&self, x: &Rational, ysq: &Rational) -> Rational {
        &self.quad_coef * (x * x + ysq) + &self.lin_x * x + &self.const_
    }

    pub fn record(&self) -> WallRecord {
        let mut flags = Vec::new();
        if self.is_vertical_line() {
            flags.push("vertical".into());
        }
        if !self.meets_half_plane() {
            flags.push("empty".into());
        }
        WallRecord {
            kind: if self.is_vertical_line() { WallKind::Line } else { WallKind::Circle },
            coefs: vec![self.quad_coef.clone(), self.lin_x.clone(), self.const_.clone()],
            producer: self.producer.clone(),
            flags,
            ray: None,
        }
    }
}

/// The wall of `a` for `F.v` in the Maciocia plane.
pub fn maciocia_wall_circle(a: &ChernCharacter, f: &FamilySpec, s: &SurfaceLattice) -> Result<Locus<WallCircle>> {
    let p = maciocia_wall_polynomial(a, f, s)?;
    if p.is_zero() {
        return Ok(Locus::Degenerate);
    }
    let quad = p.coef(2, 0);
    for (e, c) in p.terms() {
        assert!(
            matches!(e, (0, 0) | (1, 0) | (2, 0) | (0, 1)),
            "unexpected term x^{} Y^{} = {c} in wall polynomial",
            e.0,
            e.1
        );
    }
    assert_eq!(quad, p.coef(0, 1), "x² and y² coefficients differ");
    let circle = WallCircle { quad_coef: quad, lin_x: p.coef(1, 0), const_: p.coef(0, 0), producer: a.clone() };
    if circle.quad_coef.is_zero() && circle.lin_x.is_zero() {
        return Ok(Locus::NoWall);
    }
    Ok(Locus::Wall(circle))
}
