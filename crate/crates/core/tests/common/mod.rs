#![allow(dead_code)]

//! Shared generators and independent reference formulas for the
//! integration tests. Nothing here calls into the library's arithmetic.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stabwalls::lattice::{DivisorClass, ExtendedClass, SurfaceLattice};
use stabwalls::presets;
use stabwalls::rational::Rational;
use stabwalls::ChernCharacter;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rand_rational(g: &mut StdRng, span: i64, max_den: i64) -> Rational {
    r(g.gen_range(-span..=span), g.gen_range(1..=max_den))
}

pub fn rand_divisor(g: &mut StdRng, n: usize, span: i64, max_den: i64) -> DivisorClass {
    DivisorClass::new((0..n).map(|_| rand_rational(g, span, max_den)).collect())
}

pub fn rand_int_divisor(g: &mut StdRng, n: usize, span: i64) -> DivisorClass {
    DivisorClass::new((0..n).map(|_| ri(g.gen_range(-span..=span))).collect())
}

pub fn rand_extended(g: &mut StdRng, n: usize) -> ExtendedClass {
    ExtendedClass::new(rand_rational(g, 9, 6), rand_divisor(g, n, 9, 6), rand_rational(g, 9, 6))
}

pub fn rand_character(g: &mut StdRng, n: usize) -> ChernCharacter {
    ChernCharacter::new(rand_rational(g, 6, 3), rand_divisor(g, n, 6, 3), rand_rational(g, 9, 4))
}

pub fn rand_nonzero_rank(g: &mut StdRng, n: usize) -> ChernCharacter {
    let mut c = rand_character(g, n);
    while c.r.is_zero() {
        c.r = rand_rational(g, 6, 3);
    }
    c
}

pub fn rand_positive_rank(g: &mut StdRng, n: usize) -> ChernCharacter {
    let mut c = rand_character(g, n);
    c.r = r(g.gen_range(1..=6), g.gen_range(1..=3));
    c
}

/// A strictly positive combination of the surface's ample generators.
pub fn rand_ample(g: &mut StdRng, s: &SurfaceLattice) -> DivisorClass {
    let gens = s.ample_generators();
    let mut acc = DivisorClass::zero(s.ns_rank());
    for h in gens {
        acc = &acc + &h.scale(&r(g.gen_range(1..=4), g.gen_range(1..=2)));
    }
    acc
}

pub fn surfaces() -> Vec<SurfaceLattice> {
    presets::all_surfaces()
}

/// Reference formulas written directly from the definitions, with the form
/// stored as a dense rational matrix.
pub struct Reference {
    pub m: Vec<Vec<Rational>>,
    pub k: Vec<Rational>,
    pub chi_o: Rational,
}

impl Reference {
    pub fn new(s: &SurfaceLattice) -> Self {
        Reference {
            m: s.intersection_matrix().iter().map(|row| row.iter().map(|&x| ri(x)).collect()).collect(),
            k: s.canonical().coords().to_vec(),
            chi_o: ri(s.chi_o().to_integer().to_i64().unwrap()),
        }
    }

    pub fn dot(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                acc += ai * &self.m[i][j] * bj;
            }
        }
        acc
    }

    /// Flattened `(u0, u2..., u4)`.
    pub fn flat(u: &ExtendedClass) -> Vec<Rational> {
        let mut v = vec![u.deg0.clone()];
        v.extend(u.deg2.coords().iter().cloned());
        v.push(u.deg4.clone());
        v
    }

    pub fn pairing(&self, u: &[Rational], w: &[Rational]) -> Rational {
        let n = u.len() - 2;
        &u[0] * &w[n + 1] + self.dot(&u[1..=n], &w[1..=n]) + &u[n + 1] * &w[0]
    }

    pub fn product(&self, u: &[Rational], w: &[Rational]) -> Vec<Rational> {
        let n = u.len() - 2;
        let mut out = vec![&u[0] * &w[0]];
        for i in 1..=n {
            out.push(&u[0] * &w[i] + &w[0] * &u[i]);
        }
        out.push(&u[0] * &w[n + 1] + self.dot(&u[1..=n], &w[1..=n]) + &u[n + 1] * &w[0]);
        out
    }

    /// `χ(u) = ∫ u·td`.
    pub fn euler(&self, u: &[Rational]) -> Rational {
        let n = u.len() - 2;
        let half_neg_k: Vec<Rational> = self.k.iter().map(|x| -x / ri(2)).collect();
        &u[n + 1] + self.dot(&u[1..=n], &half_neg_k) + &u[0] * &self.chi_o
    }

    pub fn k2(&self) -> Rational {
        self.dot(&self.k, &self.k)
    }

    pub fn character(c: &ChernCharacter) -> Vec<Rational> {
        let mut v = vec![c.r.clone()];
        v.extend(c.c1.coords().iter().cloned());
        v.push(c.ch2.clone());
        v
    }
}

/// Floating-point central charge `Z(E) = -⟨E, α⟩ + i⟨E, α·H⟩` from scratch.
pub struct FloatCharge {
    pub m: Vec<Vec<f64>>,
}

impl FloatCharge {
    pub fn new(s: &SurfaceLattice) -> Self {
        FloatCharge { m: s.intersection_matrix().iter().map(|row| row.iter().map(|&x| x as f64).collect()).collect() }
    }

    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                acc += ai * self.m[i][j] * bj;
            }
        }
        acc
    }

    /// `(Re Z, Im Z)` for `E = (r, c, ch2)` and `α = (1, a1, a2)`.
    pub fn charge(&self, e: (f64, &[f64], f64), a1: &[f64], a2: f64, h: &[f64]) -> (f64, f64) {
        let (r, c, ch2) = e;
        let re = -(r * a2 + self.dot(c, a1) + ch2);
        let im = r * self.dot(a1, h) + self.dot(c, h);
        (re, im)
    }
}

pub fn f(x: &Rational) -> f64 {
    stabwalls::rational::to_f64(x)
}

pub fn fv(d: &DivisorClass) -> Vec<f64> {
    d.coords().iter().map(f).collect()
}
