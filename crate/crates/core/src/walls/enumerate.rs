//! Rank-2 destabilizers `0 → L → E → I_Z(c1 - L) → 0` and the Gieseker
//! walls `{H : μ_H(L) = μ_H(E)}` they produce inside a cone of polarizations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{WallKind, WallRecord};
use crate::characters::ChernCharacter;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::rational::{int, primitive_integer_vector, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Destabilizer {
    /// The sub line bundle, in the frame of the original `v`.
    pub l: DivisorClass,
    /// Length of the zero-dimensional subscheme `Z`.
    pub ell: Rational,
    /// `ch(L)`.
    pub producer: ChernCharacter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GiesekerWall {
    /// Coprime integer coefficients of `H ↦ δ·H`, first nonzero positive.
    pub normal: DivisorClass,
    /// On a rank-2 lattice, the primitive polarization spanning the wall.
    pub ray: Option<DivisorClass>,
    /// Sorted by `L`.
    pub destabilizers: Vec<Destabilizer>,
    /// `χ(L) = χ(v)/2` for some destabilizer.
    pub is_strict_gieseker: bool,
    /// `χ(L) ≥ χ(v)/2` for some destabilizer.
    pub is_weak_gieseker: bool,
}

impl GiesekerWall {
    pub fn producer(&self) -> &ChernCharacter {
        &self.destabilizers[0].producer
    }

    pub fn record(&self) -> WallRecord {
        let mut flags = Vec::new();
        if self.is_strict_gieseker {
            flags.push("strict-gieseker".into());
        }
        if self.is_weak_gieseker {
            flags.push("weak-gieseker".into());
        }
        WallRecord {
            kind: WallKind::Gieseker,
            coefs: self.normal.coords().to_vec(),
            producer: self.producer().clone(),
            flags,
            ray: self.ray.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// `M` with `c1(v) = 2M`; the search runs on `v·e^{-M}`.
    pub twist: DivisorClass,
    pub box_bound: u32,
    /// Walls sorted by normal.
    pub walls: Vec<GiesekerWall>,
    /// Smallest box known to contain a producer of every wall, if the
    /// lattice admits a certificate.
    pub certified_bound: Option<u32>,
}

impl Enumeration {
    /// The walls found are all walls with destabilizers of this shape.
    pub fn is_complete(&self) -> bool {
        self.certified_bound.is_some_and(|b| self.box_bound >= b)
    }
}

fn primitive_positive(v: &[Rational]) -> DivisorClass {
    let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    DivisorClass::new(ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect())
}

fn floor_to_u32(x: &Rational) -> u32 {
    let f = x.floor().to_integer();
    if f.is_negative() {
        0
    } else {
        f.to_u32().unwrap_or(u32::MAX)
    }
}

/// Box size past which no new wall appears, for the lattices where the bound
/// `L² ≥ ch2(v')` confines `L` (up to multiples spanning the same wall).
fn certificate(s: &SurfaceLattice, directions: &[DivisorClass], ch2: &Rational) -> Option<u32> {
    let m = s.intersection_matrix();
    let nonneg = |x: &Rational| !x.is_negative();
    let budget = -ch2;
    if m.len() == 1 && m[0][0] > 0 {
        return Some(1);
    }
    if m == [vec![0, 1], vec![1, 0]] && directions.iter().all(|d| d.coords().iter().all(nonneg)) {
        // ab ≤ 0 and 2ab ≥ ch2: |a|, |b| ≤ |ab| ≤ ⌊-ch2/2⌋ unless ab = 0
        return Some(floor_to_u32(&(budget / int(2))).max(1));
    }
    if m == [vec![1, 0], vec![0, -1]]
        && directions.iter().all(|d| {
            let c = d.coords();
            nonneg(&c[0]) && !c[1].is_positive() && nonneg(&(&c[0] + &c[1]))
        })
    {
        // |b| ≥ |a| and (|b| - |a|)(|b| + |a|) ≤ ⌊-ch2⌋ =: N give |b| ≤ (N + 1)/2
        let n = Rational::from_integer(budget.floor().to_integer());
        return Some(floor_to_u32(&((n + int(1)) / int(2))).max(1));
    }
    None
}

/// Enumerates integer `L ≠ 0` in `[-B, B]^n` (after twisting `v` to
/// `c1 = 0`) with `ℓ = L² - ch2(v') ≥ 0` whose wall `L^⊥` meets the closed
/// cone spanned by `directions`.
pub fn enumerate_rank2_destabilizers(
    v: &ChernCharacter,
    directions: &[DivisorClass],
    box_bound: u32,
    s: &SurfaceLattice,
) -> Result<Enumeration> {
    if v.r != int(2) {
        return Err(Error::BadRank(crate::rational::format_rational(&v.r)));
    }
    s.check(&v.c1)?;
    if directions.is_empty() {
        return Err(Error::InvalidFamily("enumeration needs at least one cone direction".into()));
    }
    for d in directions {
        s.check(d)?;
    }
    let m = v.c1.scale(&Rational::new(1.into(), 2.into()));
    if !m.is_integral() {
        return Err(Error::UnsupportedC1(format!("c1(v) = {} is not divisible by 2", v.c1)));
    }
    let vn = v.twist(&-&m, s)?;
    let chi_v = v.euler_char(s)?;
    let n = s.ns_rank();
    let form = s.intersection_matrix();
    let duals: Vec<DivisorClass> = directions.iter().map(|d| s.dual(d)).collect::<Result<_>>()?;
    let b = i64::from(box_bound);

    let mut walls: BTreeMap<Vec<BigInt>, GiesekerWall> = BTreeMap::new();
    let mut l = vec![-b; n];
    loop {
        if l.iter().any(|&x| x != 0) {
            let sq: i64 = (0..n).map(|i| (0..n).map(|j| l[i] * form[i][j] * l[j]).sum::<i64>()).sum();
            let ell = int(sq) - &vn.ch2;
            if !ell.is_negative() {
                let lc = DivisorClass::from_ints(&l);
                let pairings: Vec<Rational> =
                    duals.iter().map(|du| du.coords().iter().zip(&l).map(|(c, &x)| c * int(x)).sum()).collect();
                let has_zero = pairings.iter().any(Zero::is_zero);
                let has_pos = pairings.iter().any(Signed::is_positive);
                let has_neg = pairings.iter().any(Signed::is_negative);
                if has_zero || (has_pos && has_neg) {
                    let normal_vec = s.dual(&lc)?;
                    let key = primitive_integer_vector(normal_vec.coords());
                    let ray = (n == 2).then(|| wall_ray(&pairings, directions));
                    let big = &lc + &m;
                    let producer = ChernCharacter::new(int(1), big.clone(), s.dot(&big, &big) / int(2));
                    let chi_a = producer.euler_char(s)?;
                    let strict = &chi_a * int(2) == chi_v;
                    let weak = &chi_a * int(2) >= chi_v;
                    let entry = walls.entry(key.clone()).or_insert_with(|| GiesekerWall {
                        normal: DivisorClass::new(key.iter().cloned().map(Rational::from_integer).collect()),
                        ray: ray.flatten(),
                        destabilizers: Vec::new(),
                        is_strict_gieseker: false,
                        is_weak_gieseker: false,
                    });
                    entry.is_strict_gieseker |= strict;
                    entry.is_weak_gieseker |= weak;
                    entry.destabilizers.push(Destabilizer { l: big, ell, producer });
                }
            }
        }
        // odometer over the box
        let mut i = 0;
        while i < n && l[i] == b {
            l[i] = -b;
            i += 1;
        }
        if i == n {
            break;
        }
        l[i] += 1;
    }
    let mut walls: Vec<GiesekerWall> = walls.into_values().collect();
    for w in &mut walls {
        w.destabilizers.sort_by(|x, y| x.l.cmp(&y.l));
    }
    Ok(Enumeration { twist: m, box_bound, walls, certified_bound: certificate(s, directions, &vn.ch2) })
}

/// A nonnegative combination of two directions on which `L` vanishes.
fn wall_ray(pairings: &[Rational], directions: &[DivisorClass]) -> Option<DivisorClass> {
    if let Some(i) = pairings.iter().position(Zero::is_zero) {
        return Some(primitive_positive(directions[i].coords()));
    }
    let i = pairings.iter().position(Signed::is_positive)?;
    let j = pairings.iter().position(Signed::is_negative)?;
    let ray = &directions[i].scale(&pairings[j].abs()) + &directions[j].scale(&pairings[i].abs());
    Some(primitive_positive(ray.coords()))
}
