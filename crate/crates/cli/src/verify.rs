//! Randomized identity suites run by `stabwalls verify`.

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stabwalls::characters::det_identity_check;
use stabwalls::rational::{int, q, Rational};
use stabwalls::stability::{eval_family, FamilyClass, FamilyKind, FamilySpec};
use stabwalls::walls::{maciocia_wall_polynomial, wall_function};
use stabwalls::{ChernCharacter, DivisorClass, ExtendedClass, OneDimClass, Result, SurfaceLattice};

use crate::docs::{SuiteReport, SurfaceReport};

const MAX_DETAILS: usize = 5;

struct Suite {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: Result<bool>, what: impl FnOnce() -> String) {
        self.cases += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => self.failures.push(what()),
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }

    fn report(self) -> SuiteReport {
        SuiteReport {
            name: self.name.into(),
            cases: self.cases,
            failures: self.failures.len(),
            passed: self.failures.is_empty(),
            details: self.failures.into_iter().take(MAX_DETAILS).collect(),
        }
    }
}

fn rat(g: &mut StdRng, span: i64, den: i64) -> Rational {
    q(g.gen_range(-span..=span), g.gen_range(1..=den))
}

fn divisor(g: &mut StdRng, n: usize, span: i64, den: i64) -> DivisorClass {
    DivisorClass::new((0..n).map(|_| rat(g, span, den)).collect())
}

fn extended(g: &mut StdRng, n: usize) -> ExtendedClass {
    ExtendedClass::new(rat(g, 9, 6), divisor(g, n, 9, 6), rat(g, 9, 6))
}

fn character(g: &mut StdRng, n: usize) -> ChernCharacter {
    ChernCharacter::new(rat(g, 6, 3), divisor(g, n, 6, 3), rat(g, 9, 4))
}

fn positive_rank(g: &mut StdRng, n: usize) -> ChernCharacter {
    let mut c = character(g, n);
    c.r = q(g.gen_range(1..=6), g.gen_range(1..=3));
    c
}

fn ample(g: &mut StdRng, s: &SurfaceLattice) -> DivisorClass {
    let mut acc = DivisorClass::zero(s.ns_rank());
    for h in s.ample_generators() {
        acc = &acc + &h.scale(&q(g.gen_range(1..=4), g.gen_range(1..=2)));
    }
    acc
}

fn riemann_roch(g: &mut StdRng, s: &SurfaceLattice) -> Suite {
    let mut suite = Suite::new("riemann-roch");
    let n = s.ns_rank();
    for _ in 0..200 {
        let (u, w) = (extended(g, n), extended(g, n));
        let ok = (|| {
            let lhs = s.poincare_pairing(&u, &w)?;
            let rhs = s.euler_char(&s.mul_extended(&u, &s.mul_extended(&s.todd_inverse(), &w)?)?)?;
            Ok(lhs == rhs)
        })();
        suite.check(ok, || format!("<u,w> != chi(u td^-1 w) for u = {u:?}, w = {w:?}"));
    }
    suite
}

fn determinant_identity(g: &mut StdRng, s: &SurfaceLattice) -> Suite {
    let mut suite = Suite::new("determinant-identity");
    let n = s.ns_rank();
    for _ in 0..10 {
        let mut v = character(g, n);
        while v.r.is_zero() {
            v.r = rat(g, 6, 3);
        }
        let h = ample(g, s);
        for _ in 0..20 {
            let t = rat(g, 12, 7);
            let ok = det_identity_check(&v, &DivisorClass::zero(n), &h, &t, s).map(|(l, r)| l == r);
            suite.check(ok, || format!("v = {v}, H = {h}, t = {t}"));
        }
    }
    suite
}

fn orthogonality(g: &mut StdRng, s: &SurfaceLattice) -> Suite {
    let mut suite = Suite::new("orthogonality");
    let n = s.ns_rank();
    let kinds = [
        FamilyKind::OrthogonalRay,
        FamilyKind::OrthogonalQuadrant,
        FamilyKind::OrthogonalCone,
        FamilyKind::OneDimRay,
        FamilyKind::OneDimQuadrant,
    ];
    for _ in 0..200 {
        let kind = kinds[g.gen_range(0..kinds.len())];
        let ndirs = match kind {
            FamilyKind::OrthogonalRay | FamilyKind::OneDimRay => 1,
            FamilyKind::OrthogonalCone => g.gen_range(1..=3),
            _ => 2,
        };
        let dirs: Vec<DivisorClass> = (0..ndirs).map(|_| ample(g, s)).collect();
        let params: Vec<Rational> = (0..ndirs).map(|_| q(g.gen_range(1..=20), g.gen_range(1..=5))).collect();
        let class = if kind.is_onedim() {
            let curve = ample(g, s);
            let chi = q(g.gen_range(1..=7), g.gen_range(1..=3));
            FamilyClass::OneDim(OneDimClass::new(curve, chi).expect("ample curve is nonzero"))
        } else {
            FamilyClass::Character(positive_rank(g, n))
        };
        let mut f = FamilySpec::new(kind, class, dirs);
        if !kind.is_onedim() {
            f = f.with_twist(divisor(g, n, 3, 2));
        }
        let ok = (|| {
            let p = eval_family(&f, &params, s)?;
            let v = f.v.character(s)?;
            Ok(s.poincare_pairing(&v.to_extended(), &p.vector.to_extended())?.is_zero())
        })();
        suite.check(ok, || format!("{} family of {:?} at {params:?}", kind.name(), f.v));
    }
    suite
}

/// An integral class orthogonal to `h`, if the lattice has rank at least 2.
fn orthogonal_class(h: &DivisorClass, s: &SurfaceLattice) -> Option<DivisorClass> {
    let n = s.ns_rank();
    for i in 0..n {
        for j in i + 1..n {
            let (ei, ej) = (DivisorClass::basis(n, i), DivisorClass::basis(n, j));
            let (hi, hj) = (s.intersect(h, &ei).ok()?, s.intersect(h, &ej).ok()?);
            let g = &ei.scale(&hj) - &ej.scale(&hi);
            if !g.is_zero() {
                return Some(g);
            }
        }
    }
    None
}

fn circle_form(g: &mut StdRng, s: &SurfaceLattice) -> Suite {
    let mut suite = Suite::new("circle-form");
    let n = s.ns_rank();
    let h = s.ample_generators()[0].clone();
    let gcls = orthogonal_class(&h, s);
    for _ in 0..50 {
        let v = ChernCharacter::new(int(g.gen_range(1..=3)), divisor(g, n, 2, 1), q(g.gen_range(-8..=2), 2));
        let a = ChernCharacter::new(int(g.gen_range(0..=2)), divisor(g, n, 2, 1), q(g.gen_range(-6..=6), 2));
        let f = match &gcls {
            Some(gc) => FamilySpec::new(
                FamilyKind::MaciociaPlane,
                FamilyClass::Character(v.clone()),
                vec![h.clone(), gc.clone()],
            )
            .with_extra(vec![q(g.gen_range(-3..=3), g.gen_range(1..=3))]),
            None => FamilySpec::new(FamilyKind::MaciociaPlane, FamilyClass::Character(v.clone()), vec![h.clone()]),
        };
        let points: Vec<[Rational; 2]> =
            (0..6).map(|_| [rat(g, 6, 4), q(g.gen_range(1..=30), g.gen_range(1..=8))]).collect();
        let ok = (|| {
            let p = maciocia_wall_polynomial(&a, &f, s)?;
            let shape = p.terms().all(|(e, _)| matches!(e, (0, 0) | (1, 0) | (2, 0) | (0, 1)));
            if !shape || p.coef(2, 0) != p.coef(0, 1) {
                return Ok(false);
            }
            // proportional to the central-charge determinant
            let mut pairs = Vec::new();
            for [x, y2] in &points {
                pairs.push((p.eval(x, y2), wall_function(&a, &f, &[x.clone(), y2.clone()], s)?));
            }
            let (p0, w0) = &pairs[0];
            Ok(pairs.iter().all(|(pi, wi)| pi * w0 == wi * p0))
        })();
        suite.check(ok, || format!("a = {a}, v = {v}"));
    }
    suite
}

/// On the blow-up with `D = 2h`, `H = 2h - e`: the `t = 0` pairings of
/// `ch(O(-e))` and `ch(I_p)` vanish for every `s`, and the Euler
/// characteristic gap along `(1, -e, -1/2 - l)` is `-l`.
fn blowdown(s: &SurfaceLattice) -> Suite {
    let mut suite = Suite::new("blowdown");
    let d = |c: &[i64]| DivisorClass::from_ints(c);
    let ideal = ChernCharacter::new(int(1), d(&[0, 0]), int(-1));
    let line_bundle = ChernCharacter::new(int(1), d(&[0, -1]), q(-1, 2));
    let f = FamilySpec::new(
        FamilyKind::FixedD4Quadrant,
        FamilyClass::Character(ideal.clone()),
        vec![d(&[2, 0]), d(&[2, -1])],
    )
    .with_extra(vec![int(1)]);
    for (name, e) in [("ch(O(-e))", &line_bundle), ("ch(I_p)", &ideal)] {
        let ok = (|| {
            let mut vals = Vec::new();
            for k in 0..3 {
                let a = eval_family(&f, &[int(k), int(0)], s)?.vector;
                vals.push(s.poincare_pairing(&e.to_extended(), &a.to_extended())?);
            }
            let c2 = (&vals[2] - int(2) * &vals[1] + &vals[0]) / int(2);
            let c1 = &vals[1] - &vals[0] - &c2;
            Ok(vals[0].is_zero() && c1.is_zero() && c2.is_zero())
        })();
        suite.check(ok, || format!("<{name}, alpha_(s,0)> is not identically zero"));
    }
    for ell in 1..=10 {
        let z = ChernCharacter::new(int(1), d(&[0, -1]), q(-1, 2) - int(ell));
        let ok = (|| Ok(z.euler_char(s)? - ideal.euler_char(s)? == int(-ell)))();
        suite.check(ok, || format!("chi gap at l = {ell}"));
    }
    suite
}

pub fn run_surface(s: &SurfaceLattice, seed: u64, scenario_blowdown: bool) -> SurfaceReport {
    let mut g = StdRng::seed_from_u64(seed);
    let mut suites = vec![
        riemann_roch(&mut g, s),
        determinant_identity(&mut g, s),
        orthogonality(&mut g, s),
        circle_form(&mut g, s),
    ];
    if scenario_blowdown {
        suites.push(blowdown(s));
    }
    SurfaceReport { surface: s.label().into(), suites: suites.into_iter().map(Suite::report).collect() }
}
