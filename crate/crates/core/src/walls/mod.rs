//! Wall loci in the parameter spaces of the stability families: lines in a
//! quadrant, hyperplanes in an ample cone, circles in the Maciocia
//! half-plane, Gieseker-wall hyperplanes from destabilizer enumeration, and
//! ordered crossings along a segment.

mod circle;
mod enumerate;
mod scan;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{ChernCharacter, OneDimClass};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, ExtendedClass, SurfaceLattice};
use crate::rational::{format_rational, int, primitive_integer_vector, serde_rational_vec, Rational};
use crate::stability::{FamilyClass, FamilyKind, FamilySpec};

pub use circle::{maciocia_wall_circle, maciocia_wall_polynomial, MaciociaPolynomial, WallCircle};
pub use enumerate::{enumerate_rank2_destabilizers, Destabilizer, Enumeration, GiesekerWall};
pub use scan::{segment_scan, wall_function, Crossing};

/// Result of a wall computation that may be empty or everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Locus<T> {
    Wall(T),
    /// The defining equation is a nonzero constant.
    NoWall,
    /// The defining equation vanishes identically.
    Degenerate,
}

impl<T> Locus<T> {
    pub fn wall(self) -> Option<T> {
        match self {
            Locus::Wall(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Locus::Degenerate)
    }
}

/// `coefs·p + coef_const = 0` with raw rational coefficients.
fn classify_affine(coefs: &[Rational], c: &Rational) -> Locus<()> {
    if coefs.iter().all(Zero::is_zero) {
        if c.is_zero() {
            Locus::Degenerate
        } else {
            Locus::NoWall
        }
    } else {
        Locus::Wall(())
    }
}

/// `coef_s·s + coef_t·t + coef_const = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallLine {
    pub coef_s: Rational,
    pub coef_t: Rational,
    pub coef_const: Rational,
    pub producer: ChernCharacter,
    pub normalized: bool,
}

impl WallLine {
    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        &self.coef_s * s + &self.coef_t * t + &self.coef_const
    }

    /// Coprime integer coefficients, first nonzero positive.
    pub fn normalized(&self) -> WallLine {
        let v = primitive_integer_vector(&[self.coef_s.clone(), self.coef_t.clone(), self.coef_const.clone()]);
        let r = |i: usize| Rational::from_integer(v[i].clone());
        WallLine { coef_s: r(0), coef_t: r(1), coef_const: r(2), producer: self.producer.clone(), normalized: true }
    }

    pub fn passes_through_origin(&self) -> bool {
        self.coef_const.is_zero()
    }

    /// `s` at `t = 0`, if the line is not horizontal.
    pub fn s_intercept(&self) -> Option<Rational> {
        (!self.coef_s.is_zero()).then(|| -&self.coef_const / &self.coef_s)
    }

    /// `t` at `s = 0`, if the line is not vertical.
    pub fn t_intercept(&self) -> Option<Rational> {
        (!self.coef_t.is_zero()).then(|| -&self.coef_const / &self.coef_t)
    }

    pub fn record(&self) -> WallRecord {
        let mut flags = Vec::new();
        if self.normalized {
            flags.push("normalized".into());
        }
        if self.coef_s.is_zero() {
            flags.push("horizontal".into());
        }
        if self.coef_t.is_zero() {
            flags.push("vertical".into());
        }
        if self.passes_through_origin() {
            flags.push("through-origin".into());
        }
        WallRecord {
            kind: WallKind::Line,
            coefs: vec![self.coef_s.clone(), self.coef_t.clone(), self.coef_const.clone()],
            producer: self.producer.clone(),
            flags,
            ray: None,
        }
    }
}

/// `Σ coefs[k]·a_k + coef_const = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallHyperplane {
    pub coefs: Vec<Rational>,
    pub coef_const: Rational,
    pub producer: ChernCharacter,
}

impl WallHyperplane {
    pub fn eval(&self, params: &[Rational]) -> Rational {
        self.coefs.iter().zip(params).fold(self.coef_const.clone(), |acc, (c, p)| acc + c * p)
    }

    pub fn normalized(&self) -> WallHyperplane {
        let mut all = self.coefs.clone();
        all.push(self.coef_const.clone());
        let mut v: Vec<Rational> = primitive_integer_vector(&all).into_iter().map(Rational::from_integer).collect();
        let coef_const = v.pop().unwrap_or_else(Rational::zero);
        WallHyperplane { coefs: v, coef_const, producer: self.producer.clone() }
    }

    pub fn record(&self) -> WallRecord {
        let mut coefs = self.coefs.clone();
        coefs.push(self.coef_const.clone());
        WallRecord { kind: WallKind::Hyperplane, coefs, producer: self.producer.clone(), flags: Vec::new(), ray: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WallKind {
    Line,
    Hyperplane,
    Circle,
    Gieseker,
}

/// Uniform serialized form of a wall.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallRecord {
    pub kind: WallKind,
    #[serde(with = "serde_rational_vec")]
    pub coefs: Vec<Rational>,
    pub producer: ChernCharacter,
    pub flags: Vec<String>,
    /// For Gieseker walls on a rank-2 lattice: the polarization spanning the wall.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<DivisorClass>,
}

impl WallRecord {
    pub const CSV_HEADER: &'static str = "kind,coefs,producer,flags,ray";

    /// One CSV row; list-valued cells are `;`-separated.
    pub fn csv_row(&self) -> String {
        let kind = match self.kind {
            WallKind::Line => "line",
            WallKind::Hyperplane => "hyperplane",
            WallKind::Circle => "circle",
            WallKind::Gieseker => "gieseker",
        };
        let coefs: Vec<String> = self.coefs.iter().map(format_rational).collect();
        let ray = self.ray.as_ref().map(|r| r.to_string()).unwrap_or_default();
        format!("{kind},{},\"{}\",{},\"{}\"", coefs.join(";"), self.producer, self.flags.join(";"), ray)
    }
}

fn require_kind(f: &FamilySpec, kind: FamilyKind) -> Result<()> {
    if f.kind != kind {
        return Err(Error::InvalidFamily(format!("expected a {} family, got {}", kind.name(), f.kind.name())));
    }
    Ok(())
}

fn family_character(f: &FamilySpec) -> Result<&ChernCharacter> {
    match &f.v {
        FamilyClass::Character(c) => Ok(c),
        FamilyClass::OneDim(_) => Err(Error::InvalidFamily(format!("{} needs a Chern character", f.kind.name()))),
    }
}

/// Coefficients of `⟨a, α⟩` on an orthogonal family over `-K/2 + L + Σ p_k D_k`:
/// `(δ·D_k)_k` and `κ + δ·(-K/2 + L)`, with `δ = c1(a) - (r(a)/r(v))c1(v)` and
/// `κ = ch2(a) - (r(a)/r(v))ch2(v)`.
fn orthogonal_affine(
    a: &ChernCharacter,
    v: &ChernCharacter,
    l: &DivisorClass,
    dirs: &[DivisorClass],
    s: &SurfaceLattice,
) -> Result<(Vec<Rational>, Rational)> {
    if v.r.is_zero() {
        return Err(Error::ZeroRank(format!("v = {v} has rank 0")));
    }
    s.check(&a.c1)?;
    let ratio = &a.r / &v.r;
    let delta = &a.c1 - &v.c1.scale(&ratio);
    let kappa = &a.ch2 - &v.ch2 * &ratio;
    let base = &s.canonical().scale(&Rational::new((-1).into(), 2.into())) + l;
    let coefs = dirs.iter().map(|d| s.dot(&delta, d)).collect();
    Ok((coefs, kappa + s.dot(&delta, &base)))
}

/// The line `⟨ch a, α_{s,t}⟩ = 0` in the orthogonal quadrant family of `F.v`.
pub fn wall_line_quadrant(a: &ChernCharacter, f: &FamilySpec, s: &SurfaceLattice) -> Result<Locus<WallLine>> {
    require_kind(f, FamilyKind::OrthogonalQuadrant)?;
    f.validate(s)?;
    let v = family_character(f)?;
    let (coefs, c) = orthogonal_affine(a, v, &f.twist_class(s), &f.directions, s)?;
    Ok(match classify_affine(&coefs, &c) {
        Locus::Wall(()) => Locus::Wall(WallLine {
            coef_s: coefs[0].clone(),
            coef_t: coefs[1].clone(),
            coef_const: c,
            producer: a.clone(),
            normalized: false,
        }),
        Locus::NoWall => Locus::NoWall,
        Locus::Degenerate => Locus::Degenerate,
    })
}

/// The hyperplane `⟨ch a, α_a⟩ = 0` in the n-parameter cone family.
pub fn wall_hyperplane_cone(a: &ChernCharacter, f: &FamilySpec, s: &SurfaceLattice) -> Result<Locus<WallHyperplane>> {
    require_kind(f, FamilyKind::OrthogonalCone)?;
    f.validate(s)?;
    let v = family_character(f)?;
    let (coefs, c) = orthogonal_affine(a, v, &f.twist_class(s), &f.directions, s)?;
    Ok(match classify_affine(&coefs, &c) {
        Locus::Wall(()) => Locus::Wall(WallHyperplane { coefs, coef_const: c, producer: a.clone() }),
        Locus::NoWall => Locus::NoWall,
        Locus::Degenerate => Locus::Degenerate,
    })
}

/// Crossing of `χ(a)/r(a) - χ(v)/r(v) + t(μ_{H⁺}(a) - μ_{H⁺}(v))` with zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GiesekerCrossing {
    At(Rational),
    /// Equal slopes; `everywhere` when the reduced Euler characteristics agree too.
    NoWall {
        everywhere: bool,
    },
}

pub fn gieseker_wall_t(
    a: &ChernCharacter,
    v: &ChernCharacter,
    hplus: &DivisorClass,
    s: &SurfaceLattice,
) -> Result<GiesekerCrossing> {
    for (name, x) in [("a", a), ("v", v)] {
        if !x.r.is_positive() {
            return Err(Error::ZeroRank(format!("{name} = {x} must have positive rank")));
        }
    }
    let dmu = a.slope(hplus, s)? - v.slope(hplus, s)?;
    let dchi = a.euler_char(s)? / &a.r - v.euler_char(s)? / &v.r;
    if dmu.is_zero() {
        return Ok(GiesekerCrossing::NoWall { everywhere: dchi.is_zero() });
    }
    Ok(GiesekerCrossing::At(-dchi / dmu))
}

/// `(DC/χ)·β^D_τ` with the family's `τ(D)`; affine in `D`:
/// `(DC/χ, -(DC/χ)K/2 - D, (DC/χ)K²/8 + D·K/2 - 1)`.
pub(crate) fn onedim_unnormalized(v: &OneDimClass, d: &DivisorClass, s: &SurfaceLattice) -> ExtendedClass {
    let k = s.canonical();
    let lam = s.dot(d, &v.curve) / &v.chi;
    let a1 = &k.scale(&(-&lam / int(2))) - d;
    let a2 = &lam * s.dot(k, k) / int(8) + s.dot(d, k) / int(2) - Rational::one();
    ExtendedClass::new(lam, a1, a2)
}

/// The wall of `a` in the `(s, t)` chart `D = sH' + tH` of a 1-dimensional
/// class, scaled so that the constant term is `-r(a)χ/(CH)`.
pub fn onedim_wall_line(a: &ChernCharacter, f: &FamilySpec, s: &SurfaceLattice) -> Result<Locus<WallLine>> {
    require_kind(f, FamilyKind::OneDimQuadrant)?;
    f.validate(s)?;
    let v = match &f.v {
        FamilyClass::OneDim(c) => c,
        FamilyClass::Character(_) => unreachable!("validated"),
    };
    s.check(&a.c1)?;
    let (hp, h) = (&f.directions[0], &f.directions[1]);
    let ch = v.degree(h, s)?;
    let chp = v.degree(hp, s)?;
    if ch != chp {
        return Err(Error::DegreeMismatch { ch: format_rational(&ch), ch_prime: format_rational(&chp) });
    }
    if ch.is_zero() {
        return Err(Error::ZeroDegree(format!("C.H = 0 for C = {}", v.curve)));
    }
    if !v.chi.is_positive() {
        return Err(Error::NonPositiveEuler(format!("chi = {} must be positive", format_rational(&v.chi))));
    }
    let ae = a.to_extended();
    let n = s.ns_rank();
    let at = |d: &DivisorClass| s.pairing_unchecked(&ae, &onedim_unnormalized(v, d, s));
    let c0 = at(&DivisorClass::zero(n));
    let factor = &v.chi / &ch;
    let coef_s = (at(hp) - &c0) * &factor;
    let coef_t = (at(h) - &c0) * &factor;
    let coef_const = c0 * &factor;
    Ok(match classify_affine(&[coef_s.clone(), coef_t.clone()], &coef_const) {
        Locus::Wall(()) => Locus::Wall(WallLine { coef_s, coef_t, coef_const, producer: a.clone(), normalized: false }),
        Locus::NoWall => Locus::NoWall,
        Locus::Degenerate => Locus::Degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::rational::q;
    use crate::stability::eval_family;

    fn d(c: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(c)
    }

    fn ch(r: i64, c1: &[i64], ch2: Rational) -> ChernCharacter {
        ChernCharacter::new(int(r), d(c1), ch2)
    }

    fn quadrant() -> FamilySpec {
        FamilySpec::new(
            FamilyKind::OrthogonalQuadrant,
            FamilyClass::Character(ch(2, &[0, 0], int(-5))),
            vec![d(&[2, 1]), d(&[1, 2])],
        )
    }

    #[test]
    fn quadrant_line_example() {
        let s = presets::p1xp1();
        let f = quadrant();
        let a = ch(1, &[1, -1], int(0));
        let w = wall_line_quadrant(&a, &f, &s).unwrap().wall().unwrap();
        assert_eq!((w.coef_s.clone(), w.coef_t.clone(), w.coef_const.clone()), (int(-1), int(1), q(5, 2)));
        let n = w.normalized();
        assert_eq!((n.coef_s, n.coef_t, n.coef_const), (int(2), int(-2), int(-5)));
        assert_eq!(w.s_intercept(), Some(q(5, 2)));
        let p = eval_family(&f, &[q(5, 2), int(0)], &s).unwrap();
        assert_eq!(s.poincare_pairing(&a.to_extended(), &p.vector.to_extended()).unwrap(), int(0));

        let v = ch(2, &[0, 0], int(-5));
        assert!(wall_line_quadrant(&v, &f, &s).unwrap().is_degenerate());
        assert_eq!(wall_line_quadrant(&ch(1, &[0, 0], int(0)), &f, &s).unwrap(), Locus::NoWall);
        let w = wall_line_quadrant(&ch(1, &[1, 1], int(0)), &f, &s).unwrap().wall().unwrap();
        assert_eq!(w.coef_s, int(3));
    }

    #[test]
    fn cone_reduces_to_quadrant_and_gieseker() {
        let s = presets::p1xp1();
        let a = ch(1, &[1, -1], int(0));
        let v = FamilyClass::Character(ch(2, &[0, 0], int(-5)));
        let cone2 = FamilySpec::new(FamilyKind::OrthogonalCone, v.clone(), vec![d(&[2, 1]), d(&[1, 2])]);
        let hyp = wall_hyperplane_cone(&a, &cone2, &s).unwrap().wall().unwrap();
        let line = wall_line_quadrant(&a, &quadrant(), &s).unwrap().wall().unwrap();
        assert_eq!(hyp.coefs, vec![line.coef_s, line.coef_t]);
        assert_eq!(hyp.coef_const, line.coef_const);

        let cone1 = FamilySpec::new(FamilyKind::OrthogonalCone, v.clone(), vec![d(&[2, 1])]);
        let hyp = wall_hyperplane_cone(&a, &cone1, &s).unwrap().wall().unwrap();
        let t = -&hyp.coef_const / &hyp.coefs[0];
        let vc = ch(2, &[0, 0], int(-5));
        assert_eq!(gieseker_wall_t(&a, &vc, &d(&[2, 1]), &s).unwrap(), GiesekerCrossing::At(t));

        let cone3 = FamilySpec::new(FamilyKind::OrthogonalCone, v, vec![d(&[1, 1]), d(&[2, 1]), d(&[1, 2])]);
        let hyp = wall_hyperplane_cone(&a, &cone3, &s).unwrap().wall().unwrap();
        assert_eq!(hyp.coefs, vec![int(0), int(-1), int(1)]);
    }

    #[test]
    fn gieseker_t_examples() {
        let s = presets::p1xp1();
        let v = ch(2, &[0, 0], int(-5));
        let a = ch(1, &[1, -1], int(0));
        assert_eq!(gieseker_wall_t(&a, &v, &d(&[2, 1]), &s).unwrap(), GiesekerCrossing::At(q(5, 2)));
        // χ(1, H1 - H2, -1 - 3/2 + ... ) chosen with reduced χ equal to -3/2
        let a0 = ch(1, &[1, -1], q(-5, 2));
        assert_eq!(a0.euler_char(&s).unwrap(), q(-3, 2));
        assert_eq!(gieseker_wall_t(&a0, &v, &d(&[2, 1]), &s).unwrap(), GiesekerCrossing::At(int(0)));
        let same = ch(4, &[0, 0], int(-10));
        assert_eq!(gieseker_wall_t(&same, &v, &d(&[2, 1]), &s).unwrap(), GiesekerCrossing::NoWall { everywhere: true });
        assert_eq!(
            gieseker_wall_t(&ch(1, &[0, 0], int(0)), &v, &d(&[2, 1]), &s).unwrap(),
            GiesekerCrossing::NoWall { everywhere: false }
        );
        assert!(matches!(gieseker_wall_t(&ch(0, &[1, 0], int(0)), &v, &d(&[2, 1]), &s), Err(Error::ZeroRank(_))));
    }

    fn onedim_family(chi: i64) -> FamilySpec {
        FamilySpec::new(
            FamilyKind::OneDimQuadrant,
            FamilyClass::OneDim(OneDimClass::new(d(&[1, 1]), int(chi)).unwrap()),
            vec![d(&[1, 2]), d(&[2, 1])],
        )
    }

    #[test]
    fn onedim_line_examples() {
        let s = presets::p1xp1();
        let f = onedim_family(1);
        // rank 0 producer (0, H1, e): through the origin
        let a = ch(0, &[1, 0], int(1));
        let w = onedim_wall_line(&a, &f, &s).unwrap().wall().unwrap();
        assert!(w.passes_through_origin());
        let chi_a = a.euler_char(&s).unwrap();
        // (χ(a) - (1/3)c'·H') s + (χ(a) - (1/3)c'·H) t
        assert_eq!(w.coef_s, &chi_a - q(1, 3) * int(2));
        assert_eq!(w.coef_t, &chi_a - q(1, 3) * int(1));

        let b = ch(1, &[0, 1], int(0));
        let w = onedim_wall_line(&b, &f, &s).unwrap().wall().unwrap();
        assert_eq!(w.coef_const, q(-1, 3));

        let bad = FamilySpec::new(
            FamilyKind::OneDimQuadrant,
            FamilyClass::OneDim(OneDimClass::new(d(&[1, 0]), int(1)).unwrap()),
            vec![d(&[1, 2]), d(&[2, 1])],
        );
        assert!(matches!(onedim_wall_line(&b, &bad, &s), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn onedim_line_matches_family_pairing() {
        let s = presets::p1xp1();
        let f = onedim_family(2);
        let a = ch(1, &[1, -1], q(1, 2));
        let w = onedim_wall_line(&a, &f, &s).unwrap().wall().unwrap();
        for (ps, pt) in [(int(1), int(2)), (q(1, 3), int(5)), (int(4), q(7, 2))] {
            let p = eval_family(&f, &[ps.clone(), pt.clone()], &s).unwrap();
            let pairing = s.poincare_pairing(&a.to_extended(), &p.unnormalized()).unwrap();
            // scaled by χ/CH = 2/3
            assert_eq!(w.eval(&ps, &pt), pairing * q(2, 3));
        }
    }

    #[test]
    fn record_csv_and_json() {
        let s = presets::p1xp1();
        let w = wall_line_quadrant(&ch(1, &[1, -1], int(0)), &quadrant(), &s).unwrap().wall().unwrap().normalized();
        let rec = w.record();
        assert_eq!(rec.csv_row(), "line,2;-2;-5,\"(1, [1,-1], 0)\",normalized,\"\"");
        let json = serde_json::to_string(&rec).unwrap();
        let back: WallRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
    }
}
