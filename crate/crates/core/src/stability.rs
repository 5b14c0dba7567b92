//! Stability vectors `α = (α0, α1, α2)` and the parametrized families built
//! from them, the Bogomolov test, central charges
//! `Z(E) = -⟨ch E, α⟩ + i⟨ch E, α·H⟩` and the numerical torsion-pair test.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{ChernCharacter, OneDimClass};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, ExtendedClass, SurfaceLattice};
use crate::rational::{format_rational, int, serde_rational, Rational};

/// A vector `(a0, a1, a2)` with `a0 > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilityVector {
    a0: Rational,
    a1: DivisorClass,
    a2: Rational,
}

impl StabilityVector {
    pub fn new(a0: Rational, a1: DivisorClass, a2: Rational) -> Result<Self> {
        if !a0.is_positive() {
            return Err(Error::InvalidFamily(format!("stability vector needs a0 > 0, got {}", format_rational(&a0))));
        }
        Ok(StabilityVector { a0, a1, a2 })
    }

    pub(crate) fn unital(a1: DivisorClass, a2: Rational) -> Self {
        StabilityVector { a0: Rational::one(), a1, a2 }
    }

    pub fn a0(&self) -> &Rational {
        &self.a0
    }

    pub fn a1(&self) -> &DivisorClass {
        &self.a1
    }

    pub fn a2(&self) -> &Rational {
        &self.a2
    }

    pub fn to_extended(&self) -> ExtendedClass {
        ExtendedClass::new(self.a0.clone(), self.a1.clone(), self.a2.clone())
    }

    /// Positive rescaling.
    pub fn scale(&self, k: &Rational) -> Result<Self> {
        StabilityVector::new(&self.a0 * k, self.a1.scale(k), &self.a2 * k)
    }

    /// Divides through by `a0`.
    pub fn normalized(&self) -> Self {
        StabilityVector { a0: Rational::one(), a1: self.a1.scale(&self.a0.recip()), a2: &self.a2 / &self.a0 }
    }
}

impl fmt::Display for StabilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", format_rational(&self.a0), self.a1, format_rational(&self.a2))
    }
}

impl Serialize for StabilityVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_extended().serialize(s)
    }
}

/// `(1, -K/2 + L + tH, d_t)` with
/// `d_t = -χ(v)/r(v) - (c1(v)/r(v))·(L + tH) + χ(O)`, orthogonal to `v`.
pub fn make_orthogonal_alpha(
    v: &ChernCharacter,
    l: &DivisorClass,
    h: &DivisorClass,
    t: &Rational,
    s: &SurfaceLattice,
) -> Result<StabilityVector> {
    if v.r.is_zero() {
        return Err(Error::ZeroRank(format!("v = {v} has rank 0")));
    }
    s.check(l)?;
    s.check(h)?;
    let shift = l + &h.scale(t);
    let half_k = s.canonical().scale(&Rational::new((-1).into(), 2.into()));
    let d = -v.euler_char(s)? / &v.r - s.dot(&v.c1, &shift) / &v.r + s.chi_o();
    Ok(StabilityVector::unital(&half_k + &shift, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `(1, -K/2 + L + tH, d_t)`; params `[t]`, directions `[H]`.
    OrthogonalRay,
    /// `(1, -K/2 + L + sH + tH', d_{s,t})`; params `[s, t]`, directions `[H, H']`.
    OrthogonalQuadrant,
    /// `(1, -K/2 + L + sD + tH, d)` with `d` fixed in `extra[0]`;
    /// params `[s, t]`, directions `[D, H]`.
    FixedD4Quadrant,
    /// `(1, -β_x, (β_x² - y²H²)/2)` with `β_x = xH + u0 G`; params `[x, y²]`,
    /// directions `[H]` or `[H, G]` with `G·H = 0`, `extra = [u0]`.
    MaciociaPlane,
    /// `β^H_τ = (1, -K/2 - (χ/CH) H, -τ)`; params `[τ]`, directions `[H]`.
    #[serde(rename = "onedim-ray")]
    OneDimRay,
    /// `(DC/χ) β^D_τ` for `D = s·directions[0] + t·directions[1]`, normalized to
    /// `a0 = 1`; params `[s, t]`.
    #[serde(rename = "onedim-quadrant")]
    OneDimQuadrant,
    /// `(1, -K/2 + L + Σ a_k H_k, d_a)`; params `[a_1..a_n]`.
    OrthogonalCone,
}

impl FamilyKind {
    pub fn is_onedim(self) -> bool {
        matches!(self, FamilyKind::OneDimRay | FamilyKind::OneDimQuadrant)
    }

    /// Families whose every member pairs to zero with the family class.
    pub fn is_orthogonal(self) -> bool {
        !matches!(self, FamilyKind::FixedD4Quadrant | FamilyKind::MaciociaPlane)
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::OrthogonalRay => "orthogonal-ray",
            FamilyKind::OrthogonalQuadrant => "orthogonal-quadrant",
            FamilyKind::FixedD4Quadrant => "fixed-d4-quadrant",
            FamilyKind::MaciociaPlane => "maciocia-plane",
            FamilyKind::OneDimRay => "onedim-ray",
            FamilyKind::OneDimQuadrant => "onedim-quadrant",
            FamilyKind::OrthogonalCone => "orthogonal-cone",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            FamilyKind::OrthogonalRay,
            FamilyKind::OrthogonalQuadrant,
            FamilyKind::FixedD4Quadrant,
            FamilyKind::MaciociaPlane,
            FamilyKind::OneDimRay,
            FamilyKind::OneDimQuadrant,
            FamilyKind::OrthogonalCone,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// The class a family is built around.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyClass {
    Character(ChernCharacter),
    OneDim(OneDimClass),
}

impl FamilyClass {
    pub fn character(&self, s: &SurfaceLattice) -> Result<ChernCharacter> {
        match self {
            FamilyClass::Character(c) => Ok(c.clone()),
            FamilyClass::OneDim(c) => c.character(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub v: FamilyClass,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<DivisorClass>,
    pub directions: Vec<DivisorClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "crate::rational::serde_rational_vec")]
    pub extra: Vec<Rational>,
    /// Polarization used for central charges; a per-kind default otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<DivisorClass>,
}

/// A family member: the normalized vector and the positive factor it was
/// divided by (`1` except for [`FamilyKind::OneDimQuadrant`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPoint {
    pub vector: StabilityVector,
    pub scale: Rational,
}

impl FamilyPoint {
    /// The vector before normalization, `scale · vector`.
    pub fn unnormalized(&self) -> ExtendedClass {
        self.vector.to_extended().scale(&self.scale)
    }
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, v: FamilyClass, directions: Vec<DivisorClass>) -> Self {
        FamilySpec { kind, v, twist: None, directions, extra: Vec::new(), polarization: None }
    }

    pub fn with_twist(mut self, l: DivisorClass) -> Self {
        self.twist = Some(l);
        self
    }

    pub fn with_extra(mut self, extra: Vec<Rational>) -> Self {
        self.extra = extra;
        self
    }

    pub fn with_polarization(mut self, h: DivisorClass) -> Self {
        self.polarization = Some(h);
        self
    }

    pub fn param_count(&self) -> usize {
        match self.kind {
            FamilyKind::OrthogonalRay | FamilyKind::OneDimRay => 1,
            FamilyKind::OrthogonalCone => self.directions.len(),
            _ => 2,
        }
    }

    pub fn twist_class(&self, s: &SurfaceLattice) -> DivisorClass {
        self.twist.clone().unwrap_or_else(|| DivisorClass::zero(s.ns_rank()))
    }

    pub fn polarization(&self) -> DivisorClass {
        if let Some(h) = &self.polarization {
            return h.clone();
        }
        match self.kind {
            FamilyKind::OrthogonalQuadrant | FamilyKind::FixedD4Quadrant => self.directions[1].clone(),
            _ => self.directions[0].clone(),
        }
    }

    pub fn u0(&self) -> Rational {
        match self.kind {
            FamilyKind::MaciociaPlane => self.extra.first().cloned().unwrap_or_else(Rational::zero),
            _ => Rational::zero(),
        }
    }

    /// Structural checks against a surface.
    pub fn validate(&self, s: &SurfaceLattice) -> Result<()> {
        let want_dirs: Option<usize> = match self.kind {
            FamilyKind::OrthogonalRay | FamilyKind::OneDimRay => Some(1),
            FamilyKind::OrthogonalQuadrant | FamilyKind::FixedD4Quadrant | FamilyKind::OneDimQuadrant => Some(2),
            FamilyKind::MaciociaPlane | FamilyKind::OrthogonalCone => None,
        };
        if self.directions.is_empty() {
            return Err(Error::InvalidFamily("directions must be nonempty".into()));
        }
        if let Some(n) = want_dirs {
            if self.directions.len() != n {
                return Err(Error::InvalidFamily(format!(
                    "{} takes {n} direction(s), got {}",
                    self.kind.name(),
                    self.directions.len()
                )));
            }
        }
        for d in &self.directions {
            s.check(d)?;
        }
        if let Some(l) = &self.twist {
            s.check(l)?;
        }
        if let Some(h) = &self.polarization {
            s.check(h)?;
        }
        let ample_dirs: &[DivisorClass] = match self.kind {
            FamilyKind::MaciociaPlane => {
                if self.directions.len() > 2 {
                    return Err(Error::InvalidFamily("maciocia-plane takes [H] or [H, G]".into()));
                }
                if let Some(g) = self.directions.get(1) {
                    if !s.dot(g, &self.directions[0]).is_zero() {
                        return Err(Error::InvalidFamily("maciocia-plane needs G·H = 0".into()));
                    }
                } else if !self.u0().is_zero() {
                    return Err(Error::InvalidFamily("maciocia-plane with u0 != 0 needs a direction G".into()));
                }
                &self.directions[..1]
            }
            _ => &self.directions,
        };
        for (i, d) in ample_dirs.iter().enumerate() {
            if !s.passes_ample_check(d) {
                return Err(Error::InvalidFamily(format!("direction {i} = {d} fails the ample-cone positivity check")));
            }
        }
        match (&self.v, self.kind.is_onedim()) {
            (FamilyClass::OneDim(c), true) => s.check(&c.curve)?,
            (FamilyClass::Character(c), false) => {
                s.check(&c.c1)?;
                let needs_positive = !matches!(self.kind, FamilyKind::MaciociaPlane);
                if needs_positive && !c.r.is_positive() {
                    return Err(Error::ZeroRank(format!(
                        "{} needs a class of positive rank, got {c}",
                        self.kind.name()
                    )));
                }
            }
            (_, true) => return Err(Error::InvalidFamily(format!("{} needs a 1-dimensional class", self.kind.name()))),
            (_, false) => return Err(Error::InvalidFamily(format!("{} needs a Chern character", self.kind.name()))),
        }
        if self.kind == FamilyKind::FixedD4Quadrant && self.extra.len() != 1 {
            return Err(Error::InvalidFamily("fixed-d4-quadrant needs extra = [d]".into()));
        }
        Ok(())
    }
}

fn minus_half_k(s: &SurfaceLattice) -> DivisorClass {
    s.canonical().scale(&Rational::new((-1).into(), 2.into()))
}

fn linear_combination(dirs: &[DivisorClass], params: &[Rational], rank: usize) -> DivisorClass {
    dirs.iter().zip(params).fold(DivisorClass::zero(rank), |acc, (d, p)| &acc + &d.scale(p))
}

/// The orthogonal completion `(1, a1, -(ch2 + c1·a1)/r)`.
fn orthogonal_completion(v: &ChernCharacter, a1: DivisorClass, s: &SurfaceLattice) -> Result<StabilityVector> {
    if v.r.is_zero() {
        return Err(Error::ZeroRank(format!("v = {v} has rank 0")));
    }
    let d = -(&v.ch2 + s.dot(&v.c1, &a1)) / &v.r;
    Ok(StabilityVector::unital(a1, d))
}

fn onedim_class(f: &FamilySpec) -> Result<&OneDimClass> {
    match &f.v {
        FamilyClass::OneDim(c) => Ok(c),
        FamilyClass::Character(_) => {
            Err(Error::InvalidFamily(format!("{} needs a 1-dimensional class", f.kind.name())))
        }
    }
}

/// `β^H_τ = (1, -K/2 - (χ/CH)H, -τ)`.
pub fn onedim_beta(v: &OneDimClass, h: &DivisorClass, tau: &Rational, s: &SurfaceLattice) -> Result<StabilityVector> {
    let ch = v.degree(h, s)?;
    if ch.is_zero() {
        return Err(Error::ZeroDegree(format!("C.H = 0 for C = {}", v.curve)));
    }
    let a1 = &minus_half_k(s) - &h.scale(&(&v.chi / &ch));
    Ok(StabilityVector::unital(a1, -tau))
}

/// Evaluates a family member at `params`.
pub fn eval_family(f: &FamilySpec, params: &[Rational], s: &SurfaceLattice) -> Result<FamilyPoint> {
    f.validate(s)?;
    if params.len() != f.param_count() {
        return Err(Error::BadParamCount { expected: f.param_count(), found: params.len() });
    }
    let n = s.ns_rank();
    let unit = |vector| FamilyPoint { vector, scale: Rational::one() };
    match f.kind {
        FamilyKind::OrthogonalRay | FamilyKind::OrthogonalQuadrant | FamilyKind::OrthogonalCone => {
            let v = f.v.character(s)?;
            let a1 = &(&minus_half_k(s) + &f.twist_class(s)) + &linear_combination(&f.directions, params, n);
            Ok(unit(orthogonal_completion(&v, a1, s)?))
        }
        FamilyKind::FixedD4Quadrant => {
            let a1 = &(&minus_half_k(s) + &f.twist_class(s)) + &linear_combination(&f.directions, params, n);
            Ok(unit(StabilityVector::unital(a1, f.extra[0].clone())))
        }
        FamilyKind::MaciociaPlane => {
            let h = &f.directions[0];
            let (x, ysq) = (&params[0], &params[1]);
            let mut beta = h.scale(x);
            if let Some(g) = f.directions.get(1) {
                beta = &beta + &g.scale(&f.u0());
            }
            let a2 = (s.dot(&beta, &beta) - ysq * s.dot(h, h)) / int(2);
            Ok(unit(StabilityVector::unital(-&beta, a2)))
        }
        FamilyKind::OneDimRay => {
            let v = onedim_class(f)?;
            Ok(unit(onedim_beta(v, &f.directions[0], &params[0], s)?))
        }
        FamilyKind::OneDimQuadrant => {
            let v = onedim_class(f)?;
            if !v.chi.is_positive() {
                return Err(Error::NonPositiveEuler(format!(
                    "onedim-quadrant needs chi > 0, got {}",
                    format_rational(&v.chi)
                )));
            }
            let d = linear_combination(&f.directions, params, n);
            let dc = s.dot(&d, &v.curve);
            if dc.is_zero() {
                return Err(Error::ZeroDegree(format!("D.C = 0 at D = {d}")));
            }
            let k = s.canonical();
            let k2 = s.dot(k, k);
            // τ = -K²/8 - (χ/2)(D·K)/(D·C) + χ/(D·C)
            let tau = -k2 / int(8) - &v.chi * s.dot(&d, k) / (int(2) * &dc) + &v.chi / &dc;
            let scale = &dc / &v.chi;
            if !scale.is_positive() {
                return Err(Error::NonPositiveDegree(format!("D.C = {} at D = {d}", format_rational(&dc))));
            }
            Ok(FamilyPoint { vector: onedim_beta(v, &d, &tau, s)?, scale })
        }
    }
}

/// `a1² - 2 a0 a2` and whether it is strictly positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bogomolov {
    pub margin: Rational,
    pub ok: bool,
}

pub fn bogomolov(alpha: &StabilityVector, s: &SurfaceLattice) -> Result<Bogomolov> {
    let margin = s.square(alpha.a1())? - int(2) * alpha.a0() * alpha.a2();
    let ok = margin.is_positive();
    Ok(Bogomolov { margin, ok })
}

/// `τ* = -(-K/2 - (χ/CH)H)²/2`; `β^H_τ` is admissible iff `τ > τ*`.
pub fn onedim_bogomolov_threshold(v: &OneDimClass, h: &DivisorClass, s: &SurfaceLattice) -> Result<Rational> {
    let beta = onedim_beta(v, h, &Rational::zero(), s)?;
    Ok(-s.square(beta.a1())? / int(2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralChargeValue {
    #[serde(with = "serde_rational")]
    pub re: Rational,
    #[serde(with = "serde_rational")]
    pub im: Rational,
}

impl std::ops::Add for &CentralChargeValue {
    type Output = CentralChargeValue;
    fn add(self, rhs: &CentralChargeValue) -> CentralChargeValue {
        CentralChargeValue { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

/// `α·H = (0, a0 H, a1·H)`.
pub fn alpha_times(alpha: &StabilityVector, h: &DivisorClass, s: &SurfaceLattice) -> Result<ExtendedClass> {
    let hh = ExtendedClass::new(Rational::zero(), h.clone(), Rational::zero());
    s.mul_extended(&alpha.to_extended(), &hh)
}

/// `Z(a) = -⟨a, α⟩ + i⟨a, α·H⟩`.
pub fn central_charge(
    a: &ChernCharacter,
    alpha: &StabilityVector,
    hpol: &DivisorClass,
    s: &SurfaceLattice,
) -> Result<CentralChargeValue> {
    let ae = a.to_extended();
    let re = -s.poincare_pairing(&ae, &alpha.to_extended())?;
    let im = s.poincare_pairing(&ae, &alpha_times(alpha, hpol, s)?)?;
    Ok(CentralChargeValue { re, im })
}

/// The two standing inequalities for the quadrant family:
/// `K²/8 > χ(O) - χ(v)/r(v)` and `μ_{H'}(v) > K·H'/2`.
pub fn assumption_check(v: &ChernCharacter, hp: &DivisorClass, s: &SurfaceLattice) -> Result<(bool, bool)> {
    if !v.r.is_positive() {
        return Err(Error::ZeroRank(format!("v = {v} must have positive rank")));
    }
    let k = s.canonical();
    let first = s.dot(k, k) / int(8) > s.chi_o() - v.euler_char(s)? / &v.r;
    let second = v.slope(hp, s)? > s.intersect(k, hp)? / int(2);
    Ok((first, second))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeartClass {
    /// Every HN factor has slope `≤ θ`: the sheaf lies in the torsion-free
    /// part `F` of the torsion pair.
    TorsionFreePart,
    /// Every HN factor has slope `> θ`: the sheaf lies in the torsion part `Q`.
    TiltedPart,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeartMembership {
    pub class: HeartClass,
    /// `θ = -(a1·H)/a0`; `⟨ch B, α·H⟩ > 0` iff `μ_H(B) > θ` for `r(B) > 0`.
    pub threshold: Rational,
}

/// Classifies a torsion-free sheaf from its HN slope ladder (descending).
pub fn heart_membership(
    hn_slopes: &[Rational],
    alpha: &StabilityVector,
    hpol: &DivisorClass,
    s: &SurfaceLattice,
) -> Result<HeartMembership> {
    if hn_slopes.is_empty() {
        return Err(Error::EmptyLadder);
    }
    if let Some(i) = hn_slopes.windows(2).position(|w| w[0] <= w[1]) {
        return Err(Error::NonDescending(i + 1));
    }
    let threshold = -s.intersect(alpha.a1(), hpol)? / alpha.a0();
    let max = &hn_slopes[0];
    let min = &hn_slopes[hn_slopes.len() - 1];
    let class = if min > &threshold {
        HeartClass::TiltedPart
    } else if max <= &threshold {
        HeartClass::TorsionFreePart
    } else {
        HeartClass::Neither
    };
    Ok(HeartMembership { class, threshold })
}
