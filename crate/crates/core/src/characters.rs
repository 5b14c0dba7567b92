//! Chern characters `(r, c1, ch2)`, their twists and slopes, the two
//! determinant-line-bundle classes and the Gieseker comparison predicates.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, ExtendedClass, SurfaceLattice};
use crate::rational::{format_rational, int, serde_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernCharacter {
    #[serde(with = "serde_rational")]
    pub r: Rational,
    pub c1: DivisorClass,
    #[serde(with = "serde_rational")]
    pub ch2: Rational,
}

impl ChernCharacter {
    pub fn new(r: Rational, c1: DivisorClass, ch2: Rational) -> Self {
        ChernCharacter { r, c1, ch2 }
    }

    pub fn to_extended(&self) -> ExtendedClass {
        ExtendedClass::new(self.r.clone(), self.c1.clone(), self.ch2.clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ChernCharacter::new(&self.r * k, self.c1.scale(k), &self.ch2 * k)
    }

    fn nonzero_rank(&self, what: &str) -> Result<()> {
        if self.r.is_zero() {
            return Err(Error::ZeroRank(format!("{what} = {self} has rank 0")));
        }
        Ok(())
    }

    /// `a · e^M = (r, c1 + rM, ch2 + c1·M + rM²/2)`.
    pub fn twist(&self, m: &DivisorClass, s: &SurfaceLattice) -> Result<Self> {
        s.check(&self.c1)?;
        s.check(m)?;
        Ok(ChernCharacter::new(
            self.r.clone(),
            &self.c1 + &m.scale(&self.r),
            &self.ch2 + s.dot(&self.c1, m) + &self.r * s.dot(m, m) / int(2),
        ))
    }

    /// `μ_H = c1·H / r`.
    pub fn slope(&self, h: &DivisorClass, s: &SurfaceLattice) -> Result<Rational> {
        self.nonzero_rank("class")?;
        Ok(s.intersect(&self.c1, h)? / &self.r)
    }

    pub fn euler_char(&self, s: &SurfaceLattice) -> Result<Rational> {
        s.euler_char(&self.to_extended())
    }
}

impl From<ExtendedClass> for ChernCharacter {
    fn from(u: ExtendedClass) -> Self {
        ChernCharacter::new(u.deg0, u.deg2, u.deg4)
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", format_rational(&self.r), self.c1, format_rational(&self.ch2))
    }
}

/// A pure 1-dimensional class: curve class `C` and Euler characteristic `χ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneDimClass {
    #[serde(rename = "C")]
    pub curve: DivisorClass,
    #[serde(with = "serde_rational")]
    pub chi: Rational,
}

impl OneDimClass {
    pub fn new(curve: DivisorClass, chi: Rational) -> Result<Self> {
        if curve.is_zero() {
            return Err(Error::InvalidFamily("1-dimensional class needs C != 0".into()));
        }
        Ok(OneDimClass { curve, chi })
    }

    /// `(0, C, K·C/2 + χ)`.
    pub fn character(&self, s: &SurfaceLattice) -> Result<ChernCharacter> {
        let kc = s.intersect(s.canonical(), &self.curve)?;
        Ok(ChernCharacter::new(Rational::zero(), self.curve.clone(), kc / int(2) + &self.chi))
    }

    pub fn degree(&self, h: &DivisorClass, s: &SurfaceLattice) -> Result<Rational> {
        s.intersect(&self.curve, h)
    }
}

impl fmt::Display for OneDimClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(C={}, chi={})", self.curve, format_rational(&self.chi))
    }
}

/// Verdict of a subobject `a` against a class `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparison {
    /// `a` violates the semistability inequality for `v`.
    Destabilizes,
    Neutral,
    Stabilizes,
}

impl Comparison {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Comparison::Destabilizes,
            Ordering::Equal => Comparison::Neutral,
            Ordering::Less => Comparison::Stabilizes,
        }
    }
}

/// Outcome of the `L`-twisted `H`-Gieseker comparison, with the exact data
/// `χ-difference + t · slope-difference` it is the asymptotic sign of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComparison {
    pub outcome: Comparison,
    /// `μ_H(a) - μ_H(v)`.
    pub slope_diff: Rational,
    /// `χ(a⊗L)/r(a) - χ(v⊗L)/r(v)`.
    pub chi_diff: Rational,
}

impl TwistedComparison {
    /// The `t` at which `chi_diff + t·slope_diff` vanishes, when the slopes differ.
    pub fn crossing(&self) -> Option<Rational> {
        if self.slope_diff.is_zero() {
            None
        } else {
            Some(-&self.chi_diff / &self.slope_diff)
        }
    }
}

/// Lexicographic (slope, twisted reduced χ) comparison: the sign of
/// `(χ(a⊗L)/r(a) - χ(v⊗L)/r(v)) + t(μ_H(a) - μ_H(v))` for `t ≫ 0`.
pub fn twisted_gieseker_compare(
    a: &ChernCharacter,
    v: &ChernCharacter,
    l: &DivisorClass,
    h: &DivisorClass,
    s: &SurfaceLattice,
) -> Result<TwistedComparison> {
    for (name, x) in [("a", a), ("v", v)] {
        if !x.r.is_positive() {
            return Err(Error::ZeroRank(format!("{name} = {x} must have positive rank")));
        }
    }
    let slope_diff = a.slope(h, s)? - v.slope(h, s)?;
    let chi_a = a.twist(l, s)?.euler_char(s)? / &a.r;
    let chi_v = v.twist(l, s)?.euler_char(s)? / &v.r;
    let chi_diff = chi_a - chi_v;
    let outcome = match slope_diff.cmp(&Rational::zero()) {
        Ordering::Equal => Comparison::from_ordering(chi_diff.cmp(&Rational::zero())),
        o => Comparison::from_ordering(o),
    };
    Ok(TwistedComparison { outcome, slope_diff, chi_diff })
}

/// Reduced Euler characteristic comparison `χ(a)/r(a)` vs `χ(v)/r(v)` by
/// cross-multiplication; `Greater` means `a` has the larger value.
pub fn reduced_chi_cmp(a: &ChernCharacter, v: &ChernCharacter, s: &SurfaceLattice) -> Result<Ordering> {
    for (name, x) in [("a", a), ("v", v)] {
        if !x.r.is_positive() {
            return Err(Error::ZeroRank(format!("{name} = {x} must have positive rank")));
        }
    }
    let lhs = a.euler_char(s)? * &v.r;
    let rhs = v.euler_char(s)? * &a.r;
    Ok(lhs.cmp(&rhs))
}

/// The weak Gieseker-wall condition `χ(a)/r(a) ≥ χ(v)/r(v)`.
pub fn gieseker_weak_condition(a: &ChernCharacter, v: &ChernCharacter, s: &SurfaceLattice) -> Result<bool> {
    Ok(reduced_chi_cmp(a, v, s)? != Ordering::Less)
}

/// The strict (equality) Gieseker-wall condition `χ(a)/r(a) = χ(v)/r(v)`.
pub fn gieseker_equality_condition(a: &ChernCharacter, v: &ChernCharacter, s: &SurfaceLattice) -> Result<bool> {
    Ok(reduced_chi_cmp(a, v, s)? == Ordering::Equal)
}

/// 1-dimensional Gieseker comparison: sign of `χ(a)(C_v·H) - χ(v)(C_a·H)`.
pub fn onedim_gieseker_compare(
    a: &OneDimClass,
    v: &OneDimClass,
    h: &DivisorClass,
    s: &SurfaceLattice,
) -> Result<Comparison> {
    let da = a.degree(h, s)?;
    let dv = v.degree(h, s)?;
    for (name, x, deg) in [("a", a, &da), ("v", v, &dv)] {
        if !deg.is_positive() {
            return Err(Error::NonPositiveDegree(format!("{name} = {x} has C.H = {}", format_rational(deg))));
        }
    }
    let lhs = &a.chi * &dv;
    let rhs = &v.chi * &da;
    Ok(Comparison::from_ordering(lhs.cmp(&rhs)))
}

/// `ch(O_H) = (0, H, -H²/2)`.
pub fn ch_structure_sheaf_of_divisor(h: &DivisorClass, s: &SurfaceLattice) -> Result<ExtendedClass> {
    Ok(ExtendedClass::new(Rational::zero(), h.clone(), -s.square(h)? / int(2)))
}

/// `ch(u_0), ch(u_1)` for `u_i = -c0·h^i + χ(v·h^i)[C_x]`, `h = [O_H]`.
pub fn det_bundle_classes(
    v: &ChernCharacter,
    h: &DivisorClass,
    s: &SurfaceLattice,
) -> Result<(ExtendedClass, ExtendedClass)> {
    v.nonzero_rank("v")?;
    let n = s.ns_rank();
    let ve = v.to_extended();
    let point = ExtendedClass::point(n);
    let u0 = &ExtendedClass::unit(n).scale(&-&v.r) + &point.scale(&s.euler_char(&ve)?);
    let chh = ch_structure_sheaf_of_divisor(h, s)?;
    let chi_vh = s.euler_char(&s.mul_extended(&ve, &chh)?)?;
    let u1 = &chh.scale(&-&v.r) + &point.scale(&chi_vh);
    Ok((u0, u1))
}

/// Both sides of `(ch(u0) + t ch(u1))·td(X) = -c0 α_t`, with `α_t` the
/// `L`-twisted orthogonal vector. The two agree exactly when `L = 0`.
pub fn det_identity_check(
    v: &ChernCharacter,
    l: &DivisorClass,
    h: &DivisorClass,
    t: &Rational,
    s: &SurfaceLattice,
) -> Result<(ExtendedClass, ExtendedClass)> {
    let (u0, u1) = det_bundle_classes(v, h, s)?;
    let lhs = s.mul_extended(&(&u0 + &u1.scale(t)), &s.todd())?;
    let alpha = crate::stability::make_orthogonal_alpha(v, l, h, t, s)?;
    let rhs = alpha.to_extended().scale(&-&v.r);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::rational::q;

    fn d(c: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(c)
    }

    fn ch(r: i64, c1: &[i64], ch2: Rational) -> ChernCharacter {
        ChernCharacter::new(int(r), d(c1), ch2)
    }

    #[test]
    fn twist_examples() {
        let s = presets::blowup_p2();
        let o = ch(1, &[0, 0], int(0));
        assert_eq!(o.twist(&d(&[0, 0]), &s).unwrap(), o);
        assert_eq!(o.twist(&d(&[0, -1]), &s).unwrap(), ch(1, &[0, -1], q(-1, 2)));
        let a = ch(3, &[1, 2], q(1, 3));
        let m = d(&[2, -5]);
        assert_eq!(a.twist(&m, &s).unwrap().twist(&-&m, &s).unwrap(), a);
    }

    #[test]
    fn slope_examples() {
        let s = presets::p1xp1();
        assert_eq!(ch(2, &[0, 0], int(-5)).slope(&d(&[1, 1]), &s).unwrap(), int(0));
        assert_eq!(ch(1, &[1, -1], int(0)).slope(&d(&[2, 1]), &s).unwrap(), int(-1));
        assert!(matches!(ch(0, &[1, 0], int(0)).slope(&d(&[1, 1]), &s), Err(Error::ZeroRank(_))));
    }

    #[test]
    fn twisted_compare_examples() {
        let s = presets::p1xp1();
        let v = ch(2, &[0, 0], int(-5));
        let zero = d(&[0, 0]);
        let h = d(&[1, 1]);
        let c = twisted_gieseker_compare(&v, &v, &zero, &h, &s).unwrap();
        assert_eq!(c.outcome, Comparison::Neutral);
        assert!(c.slope_diff.is_zero() && c.chi_diff.is_zero());

        let a = ch(1, &[1, -1], int(0));
        let c = twisted_gieseker_compare(&a, &v, &zero, &h, &s).unwrap();
        assert_eq!(c.slope_diff, int(0));
        assert_eq!(c.chi_diff, q(5, 2));
        assert_eq!(c.outcome, Comparison::Destabilizes);

        let a = ch(1, &[-1, 0], int(0));
        let c = twisted_gieseker_compare(&a, &v, &zero, &h, &s).unwrap();
        assert_eq!(c.slope_diff, int(-1));
        assert_eq!(c.outcome, Comparison::Stabilizes);

        let r0 = ch(0, &[1, 0], int(0));
        assert!(matches!(twisted_gieseker_compare(&r0, &v, &zero, &h, &s), Err(Error::ZeroRank(_))));
    }

    #[test]
    fn weak_and_equality_predicates() {
        let s = presets::p1xp1();
        let v = ch(2, &[0, 0], int(-5));
        let a = ch(1, &[1, -1], int(-1));
        // χ(a) = -1 + 0 + 1 = 0 >= -3/2, never equal
        assert!(gieseker_weak_condition(&a, &v, &s).unwrap());
        assert!(!gieseker_equality_condition(&a, &v, &s).unwrap());
        assert!(gieseker_equality_condition(&v.scale(&int(3)), &v, &s).unwrap());
    }

    #[test]
    fn onedim_compare_examples() {
        let s = presets::p1xp1();
        let v = OneDimClass::new(d(&[1, 1]), int(1)).unwrap();
        let a = OneDimClass::new(d(&[1, 0]), int(1)).unwrap();
        assert_eq!(onedim_gieseker_compare(&v, &v, &d(&[2, 1]), &s).unwrap(), Comparison::Neutral);
        assert_eq!(onedim_gieseker_compare(&a, &v, &d(&[2, 1]), &s).unwrap(), Comparison::Destabilizes);
        assert_eq!(onedim_gieseker_compare(&a, &v, &d(&[1, 2]), &s).unwrap(), Comparison::Destabilizes);
        // H1·H1 = 0
        assert!(matches!(onedim_gieseker_compare(&a, &v, &d(&[1, 0]), &s), Err(Error::NonPositiveDegree(_))));
        assert!(OneDimClass::new(d(&[0, 0]), int(1)).is_err());
    }

    #[test]
    fn onedim_character_has_requested_euler_char() {
        let s = presets::blowup_p2();
        let c = OneDimClass::new(d(&[2, -1]), q(7, 2)).unwrap();
        let v = c.character(&s).unwrap();
        assert!(v.r.is_zero());
        assert_eq!(v.euler_char(&s).unwrap(), q(7, 2));
    }

    #[test]
    fn det_bundle_examples() {
        let s = presets::p1xp1();
        let v = ch(2, &[0, 0], int(-5));
        let h = d(&[1, 1]);
        let (u0, u1) = det_bundle_classes(&v, &h, &s).unwrap();
        assert_eq!(u0, ExtendedClass::new(int(-2), d(&[0, 0]), int(-3)));
        assert_eq!(u1, ExtendedClass::new(int(0), d(&[-2, -2]), int(4)));
        assert!(matches!(det_bundle_classes(&ch(0, &[1, 0], int(0)), &h, &s), Err(Error::ZeroRank(_))));
    }

    #[test]
    fn det_identity_examples() {
        let s = presets::p1xp1();
        let v = ch(2, &[0, 0], int(-5));
        let h = d(&[1, 1]);
        let zero = d(&[0, 0]);
        let (lhs, rhs) = det_identity_check(&v, &zero, &h, &int(1), &s).unwrap();
        assert_eq!(lhs, ExtendedClass::new(int(-2), d(&[-4, -4]), int(-5)));
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = det_identity_check(&v, &zero, &h, &int(0), &s).unwrap();
        assert_eq!(lhs, ExtendedClass::new(int(-2), d(&[-2, -2]), int(-5)));
        assert_eq!(lhs, rhs);
        // a nonzero twist breaks the identity
        let (lhs, rhs) = det_identity_check(&v, &d(&[1, 0]), &h, &int(1), &s).unwrap();
        assert_ne!(lhs, rhs);
    }
}
