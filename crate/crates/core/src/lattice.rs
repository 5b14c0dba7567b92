//! The extended Néron–Severi lattice of a surface given by a finite
//! presentation: an integer intersection form on `NS(X)`, the canonical
//! class, `χ(O_X)` and a declared set of ample generators.
//!
//! Extended classes live in `H^0 ⊕ NS ⊕ H^4` with rational coefficients; the
//! product is the cup product truncated above degree 4.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, serde_rational, serde_rational_vec, Rational};

/// A rational divisor class, coordinates in the NS basis of its surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(Vec<Rational>);

impl DivisorClass {
    pub fn new(coords: Vec<Rational>) -> Self {
        DivisorClass(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivisorClass(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Rational::zero(); rank])
    }

    /// The `i`-th basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); rank];
        v[i] = Rational::one();
        DivisorClass(v)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        DivisorClass(self.0.iter().map(|x| x * k).collect())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "divisor rank mismatch");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "divisor rank mismatch");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_rational_vec::deserialize(d).map(DivisorClass)
    }
}

/// An element `(u0, u2, u4)` of `H^0 ⊕ NS ⊕ H^4` over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtendedClass {
    #[serde(with = "serde_rational")]
    pub deg0: Rational,
    pub deg2: DivisorClass,
    #[serde(with = "serde_rational")]
    pub deg4: Rational,
}

impl ExtendedClass {
    pub fn new(deg0: Rational, deg2: DivisorClass, deg4: Rational) -> Self {
        ExtendedClass { deg0, deg2, deg4 }
    }

    pub fn unit(rank: usize) -> Self {
        ExtendedClass::new(Rational::one(), DivisorClass::zero(rank), Rational::zero())
    }

    pub fn zero(rank: usize) -> Self {
        ExtendedClass::new(Rational::zero(), DivisorClass::zero(rank), Rational::zero())
    }

    /// The class of a point, `(0, 0, 1)`.
    pub fn point(rank: usize) -> Self {
        ExtendedClass::new(Rational::zero(), DivisorClass::zero(rank), Rational::one())
    }

    pub fn rank(&self) -> usize {
        self.deg2.rank()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ExtendedClass::new(&self.deg0 * k, self.deg2.scale(k), &self.deg4 * k)
    }
}

impl Add for &ExtendedClass {
    type Output = ExtendedClass;
    fn add(self, rhs: &ExtendedClass) -> ExtendedClass {
        ExtendedClass::new(&self.deg0 + &rhs.deg0, &self.deg2 + &rhs.deg2, &self.deg4 + &rhs.deg4)
    }
}

impl Sub for &ExtendedClass {
    type Output = ExtendedClass;
    fn sub(self, rhs: &ExtendedClass) -> ExtendedClass {
        ExtendedClass::new(&self.deg0 - &rhs.deg0, &self.deg2 - &rhs.deg2, &self.deg4 - &rhs.deg4)
    }
}

impl Neg for &ExtendedClass {
    type Output = ExtendedClass;
    fn neg(self) -> ExtendedClass {
        ExtendedClass::new(-&self.deg0, -&self.deg2, -&self.deg4)
    }
}

impl fmt::Display for ExtendedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", format_rational(&self.deg0), self.deg2, format_rational(&self.deg4))
    }
}

/// A surface described purely by lattice data.
///
/// Ampleness of the declared generators is not decidable from this data; only
/// the necessary conditions `g·g > 0` and `g·g' > 0` are checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLattice {
    label: String,
    form: Vec<Vec<i64>>,
    canonical: DivisorClass,
    chi_o: i64,
    ample_generators: Vec<DivisorClass>,
}

impl SurfaceLattice {
    pub fn new(
        label: impl Into<String>,
        intersection_matrix: Vec<Vec<i64>>,
        canonical: DivisorClass,
        chi_o: i64,
        ample_generators: Vec<DivisorClass>,
    ) -> Result<Self> {
        let n = intersection_matrix.len();
        if n == 0 {
            return Err(Error::InvalidSurface("ns_rank must be positive".into()));
        }
        for (i, row) in intersection_matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSurface(format!(
                    "intersection_matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        for (i, row) in intersection_matrix.iter().enumerate() {
            for (j, x) in row.iter().enumerate().skip(i + 1) {
                if *x != intersection_matrix[j][i] {
                    return Err(Error::InvalidSurface(format!(
                        "intersection_matrix is not symmetric at ({i},{j}): {} vs {}",
                        intersection_matrix[i][j], intersection_matrix[j][i]
                    )));
                }
            }
        }
        let s = SurfaceLattice { label: label.into(), form: intersection_matrix, canonical, chi_o, ample_generators };
        s.check(&s.canonical)?;
        if s.ample_generators.is_empty() {
            return Err(Error::InvalidSurface("ample_generators must be nonempty".into()));
        }
        for (i, g) in s.ample_generators.iter().enumerate() {
            s.check(g)?;
            for (j, g2) in s.ample_generators.iter().enumerate().skip(i) {
                let p = s.dot(g, g2);
                if !p.is_positive() {
                    return Err(Error::InvalidSurface(format!(
                        "ample generators {i} and {j} pair to {}, must be positive",
                        format_rational(&p)
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ns_rank(&self) -> usize {
        self.form.len()
    }

    pub fn intersection_matrix(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn chi_o(&self) -> Rational {
        int(self.chi_o)
    }

    pub fn ample_generators(&self) -> &[DivisorClass] {
        &self.ample_generators
    }

    pub fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.rank() != self.ns_rank() {
            return Err(Error::DimensionMismatch { expected: self.ns_rank(), found: d.rank() });
        }
        Ok(())
    }

    pub fn check_extended(&self, u: &ExtendedClass) -> Result<()> {
        self.check(&u.deg2)
    }

    /// Unchecked form evaluation; callers guarantee matching lengths.
    pub(crate) fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.coords().iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let mut row = Rational::zero();
            for (j, bj) in b.coords().iter().enumerate() {
                let m = self.form[i][j];
                if m != 0 && !bj.is_zero() {
                    row += bj * int(m);
                }
            }
            acc += ai * row;
        }
        acc
    }

    /// `aᵀ M b`.
    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.dot(a, b))
    }

    pub fn square(&self, a: &DivisorClass) -> Result<Rational> {
        self.intersect(a, a)
    }

    /// `M a`, the coefficients of the functional `x ↦ a·x`.
    pub fn dual(&self, a: &DivisorClass) -> Result<DivisorClass> {
        self.check(a)?;
        let n = self.ns_rank();
        Ok(DivisorClass::new(
            (0..n)
                .map(|j| {
                    a.coords().iter().enumerate().fold(Rational::zero(), |acc, (i, ai)| acc + ai * int(self.form[i][j]))
                })
                .collect(),
        ))
    }

    pub(crate) fn mul_unchecked(&self, u: &ExtendedClass, w: &ExtendedClass) -> ExtendedClass {
        let deg0 = &u.deg0 * &w.deg0;
        let deg2 = &u.deg2.scale(&w.deg0) + &w.deg2.scale(&u.deg0);
        let deg4 = &u.deg0 * &w.deg4 + self.dot(&u.deg2, &w.deg2) + &u.deg4 * &w.deg0;
        ExtendedClass::new(deg0, deg2, deg4)
    }

    /// Cup product truncated in degree 4.
    pub fn mul_extended(&self, u: &ExtendedClass, w: &ExtendedClass) -> Result<ExtendedClass> {
        self.check_extended(u)?;
        self.check_extended(w)?;
        Ok(self.mul_unchecked(u, w))
    }

    pub(crate) fn pairing_unchecked(&self, u: &ExtendedClass, w: &ExtendedClass) -> Rational {
        &u.deg0 * &w.deg4 + self.dot(&u.deg2, &w.deg2) + &u.deg4 * &w.deg0
    }

    /// `⟨u, w⟩ = u0 w4 + u2·w2 + u4 w0`.
    pub fn poincare_pairing(&self, u: &ExtendedClass, w: &ExtendedClass) -> Result<Rational> {
        self.check_extended(u)?;
        self.check_extended(w)?;
        Ok(self.pairing_unchecked(u, w))
    }

    /// `td(X) = (1, -K/2, χ(O))`.
    pub fn todd(&self) -> ExtendedClass {
        let half = Rational::new(1.into(), 2.into());
        ExtendedClass::new(Rational::one(), (-&self.canonical).scale(&half), self.chi_o())
    }

    /// `td(X)^{-1} = (1, K/2, K²/4 - χ(O))`.
    pub fn todd_inverse(&self) -> ExtendedClass {
        let half = Rational::new(1.into(), 2.into());
        let k2 = self.dot(&self.canonical, &self.canonical);
        ExtendedClass::new(Rational::one(), self.canonical.scale(&half), k2 / int(4) - self.chi_o())
    }

    /// Riemann–Roch: `χ(u) = u4 + u2·(-K/2) + u0 χ(O)`.
    pub fn euler_char(&self, u: &ExtendedClass) -> Result<Rational> {
        self.check_extended(u)?;
        Ok(self.euler_unchecked(u))
    }

    pub(crate) fn euler_unchecked(&self, u: &ExtendedClass) -> Rational {
        let k_dot = self.dot(&u.deg2, &self.canonical);
        &u.deg4 - k_dot / int(2) + &u.deg0 * self.chi_o()
    }

    /// `e^M = (1, M, M²/2)`.
    pub fn exp(&self, m: &DivisorClass) -> Result<ExtendedClass> {
        self.check(m)?;
        Ok(ExtendedClass::new(Rational::one(), m.clone(), self.dot(m, m) / int(2)))
    }

    /// Necessary positivity for lying in the declared ample cone: `d² > 0`
    /// and `d·g > 0` for every declared generator `g`.
    pub fn passes_ample_check(&self, d: &DivisorClass) -> bool {
        d.rank() == self.ns_rank()
            && self.dot(d, d).is_positive()
            && self.ample_generators.iter().all(|g| self.dot(d, g).is_positive())
    }

    /// Gram matrix of the pairing on the standard basis
    /// `(1,0,0), (0,e_1,0), …, (0,e_n,0), (0,0,1)`.
    pub fn pairing_gram(&self) -> Vec<Vec<Rational>> {
        let n = self.ns_rank();
        let mut basis = vec![ExtendedClass::unit(n)];
        basis.extend((0..n).map(|i| ExtendedClass::new(Rational::zero(), DivisorClass::basis(n, i), Rational::zero())));
        basis.push(ExtendedClass::point(n));
        basis.iter().map(|u| basis.iter().map(|w| self.pairing_unchecked(u, w)).collect()).collect()
    }
}

/// Exact determinant by fraction-preserving Gaussian elimination.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Wire form of a surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceJson {
    pub label: String,
    pub ns_rank: usize,
    pub intersection_matrix: Vec<Vec<i64>>,
    pub canonical: DivisorClass,
    #[serde(rename = "chi_O")]
    pub chi_o: i64,
    pub ample_generators: Vec<DivisorClass>,
}

impl TryFrom<SurfaceJson> for SurfaceLattice {
    type Error = Error;

    fn try_from(j: SurfaceJson) -> Result<Self> {
        if j.ns_rank != j.intersection_matrix.len() {
            return Err(Error::InvalidSurface(format!(
                "ns_rank is {} but intersection_matrix has {} rows",
                j.ns_rank,
                j.intersection_matrix.len()
            )));
        }
        SurfaceLattice::new(j.label, j.intersection_matrix, j.canonical, j.chi_o, j.ample_generators)
    }
}

impl From<&SurfaceLattice> for SurfaceJson {
    fn from(s: &SurfaceLattice) -> Self {
        SurfaceJson {
            label: s.label.clone(),
            ns_rank: s.ns_rank(),
            intersection_matrix: s.form.clone(),
            canonical: s.canonical.clone(),
            chi_o: s.chi_o,
            ample_generators: s.ample_generators.clone(),
        }
    }
}

impl Serialize for SurfaceLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SurfaceJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SurfaceLattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SurfaceJson::deserialize(d)?;
        SurfaceLattice::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl SurfaceLattice {
    pub fn from_json(text: &str) -> Result<Self> {
        let j: SurfaceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        SurfaceLattice::try_from(j)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SurfaceJson::from(self)).expect("surface serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::rational::q;

    fn d(c: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(c)
    }

    #[test]
    fn intersect_examples() {
        let p1 = presets::p1xp1();
        assert_eq!(p1.intersect(&d(&[1, 0]), &d(&[0, 1])).unwrap(), int(1));
        assert_eq!(p1.intersect(&d(&[3, -2]), &d(&[0, 0])).unwrap(), int(0));
        let bl = presets::blowup_p2();
        assert_eq!(bl.intersect(&d(&[2, -1]), &d(&[0, 1])).unwrap(), int(1));
        assert!(matches!(p1.intersect(&d(&[1]), &d(&[1, 0])), Err(Error::DimensionMismatch { expected: 2, found: 1 })));
    }

    #[test]
    fn mul_examples() {
        let s = presets::p1xp1();
        let h = d(&[1, 1]);
        let u = ExtendedClass::new(int(0), h.clone(), int(-1));
        assert_eq!(s.mul_extended(&u, &u).unwrap(), ExtendedClass::new(int(0), d(&[0, 0]), int(2)));
        let x = ExtendedClass::new(int(3), d(&[1, -2]), q(7, 3));
        assert_eq!(s.mul_extended(&ExtendedClass::unit(2), &x).unwrap(), x);
        // (-2,0,-3) + t(0,-2H,4) times td = (1,H,1), here t = 3
        let t = int(3);
        let lhs = &ExtendedClass::new(int(-2), d(&[0, 0]), int(-3))
            + &ExtendedClass::new(int(0), h.scale(&int(-2)), int(4)).scale(&t);
        let prod = s.mul_extended(&lhs, &s.todd()).unwrap();
        assert_eq!(prod, ExtendedClass::new(int(-2), h.scale(&int(-8)), int(-5)));
    }

    #[test]
    fn pairing_examples() {
        let s = presets::p1xp1();
        let one = ExtendedClass::unit(2);
        let pt = ExtendedClass::point(2);
        assert_eq!(s.poincare_pairing(&one, &pt).unwrap(), int(1));
        let a = ExtendedClass::new(int(1), d(&[1, 0]), int(0));
        let b = ExtendedClass::new(int(1), d(&[0, 1]), int(0));
        assert_eq!(s.poincare_pairing(&a, &b).unwrap(), int(1));
        let v = ExtendedClass::new(int(2), d(&[0, 0]), int(-5));
        let t = q(2, 7);
        let alpha = ExtendedClass::new(int(1), d(&[1, 1]).scale(&(int(1) + t)), q(5, 2));
        assert_eq!(s.poincare_pairing(&v, &alpha).unwrap(), int(0));
    }

    #[test]
    fn todd_examples() {
        let p2 = presets::p2();
        assert_eq!(p2.todd(), ExtendedClass::new(int(1), DivisorClass::new(vec![q(3, 2)]), int(1)));
        let p1 = presets::p1xp1();
        assert_eq!(p1.todd(), ExtendedClass::new(int(1), d(&[1, 1]), int(1)));
        for s in presets::all_surfaces() {
            let prod = s.mul_extended(&s.todd(), &s.todd_inverse()).unwrap();
            assert_eq!(prod, ExtendedClass::unit(s.ns_rank()), "{}", s.label());
        }
    }

    #[test]
    fn euler_examples() {
        for s in presets::all_surfaces() {
            assert_eq!(s.euler_char(&ExtendedClass::unit(s.ns_rank())).unwrap(), s.chi_o());
        }
        let s = presets::p1xp1();
        let v = ExtendedClass::new(int(2), d(&[0, 0]), int(-5));
        assert_eq!(s.euler_char(&v).unwrap(), int(-3));
        assert_eq!(s.euler_char(&v).unwrap() / int(2), q(-3, 2));
        let o10 = ExtendedClass::new(int(1), d(&[1, 0]), int(0));
        assert_eq!(s.euler_char(&o10).unwrap(), int(2));
    }

    #[test]
    fn gram_nondegenerate_on_presets() {
        for s in presets::all_surfaces() {
            assert!(!determinant(&s.pairing_gram()).is_zero(), "{}", s.label());
        }
    }

    #[test]
    fn rejects_asymmetric_and_bad_generators() {
        let e = SurfaceLattice::new("x", vec![vec![0, 1], vec![2, 0]], d(&[0, 0]), 1, vec![d(&[1, 1])]);
        assert!(matches!(e, Err(Error::InvalidSurface(_))));
        let e = SurfaceLattice::new("x", vec![vec![0, 1], vec![1, 0]], d(&[0, 0]), 1, vec![d(&[1, 0])]);
        assert!(matches!(e, Err(Error::InvalidSurface(_))));
        let e = SurfaceLattice::new("x", vec![vec![0, 1], vec![1, 0]], d(&[0, 0]), 1, vec![]);
        assert!(matches!(e, Err(Error::InvalidSurface(_))));
        let e = SurfaceLattice::new("x", vec![vec![1]], d(&[0, 0]), 1, vec![d(&[1])]);
        assert!(matches!(e, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        for s in presets::all_surfaces() {
            let text = s.to_json();
            let back = SurfaceLattice::from_json(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.to_json(), text);
        }
        let text = r#"{"label":"q","ns_rank":1,"intersection_matrix":[[1]],"canonical":["-3"],"chi_O":1,"ample_generators":[[1],["2/4"]]}"#;
        let s = SurfaceLattice::from_json(text).unwrap();
        assert_eq!(s.ample_generators()[1], DivisorClass::new(vec![q(1, 2)]));
    }
}
