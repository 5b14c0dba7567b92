mod common;

use std::cmp::Ordering;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use stabwalls::characters::{twisted_gieseker_compare, Comparison};
use stabwalls::lattice::{determinant, DivisorClass, ExtendedClass, SurfaceLattice};
use stabwalls::presets;
use stabwalls::rational::Rational;
use stabwalls::stability::{
    alpha_times, bogomolov, central_charge, eval_family, heart_membership, make_orthogonal_alpha, FamilyClass,
    FamilyKind, FamilySpec, HeartClass,
};
use stabwalls::walls::{
    enumerate_rank2_destabilizers, maciocia_wall_polynomial, onedim_wall_line, wall_hyperplane_cone,
    wall_line_quadrant, Locus,
};
use stabwalls::{ChernCharacter, OneDimClass};

fn rat() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=8).prop_map(|(n, d)| r(n, d))
}

fn pos_rat() -> impl Strategy<Value = Rational> {
    (1i64..=30, 1i64..=6).prop_map(|(n, d)| r(n, d))
}

fn surface() -> impl Strategy<Value = SurfaceLattice> {
    prop_oneof![Just(presets::p2()), Just(presets::p1xp1()), Just(presets::blowup_p2())]
}

fn divisor(n: usize) -> impl Strategy<Value = DivisorClass> {
    proptest::collection::vec(rat(), n).prop_map(DivisorClass::new)
}

fn extended(n: usize) -> impl Strategy<Value = ExtendedClass> {
    (rat(), divisor(n), rat()).prop_map(|(a, b, c)| ExtendedClass::new(a, b, c))
}

fn character(n: usize) -> impl Strategy<Value = ChernCharacter> {
    (rat(), divisor(n), rat()).prop_map(|(a, b, c)| ChernCharacter::new(a, b, c))
}

fn positive_character(n: usize) -> impl Strategy<Value = ChernCharacter> {
    (pos_rat(), divisor(n), rat()).prop_map(|(a, b, c)| ChernCharacter::new(a, b, c))
}

/// A positive combination of the ample generators.
fn ample(s: &SurfaceLattice) -> impl Strategy<Value = DivisorClass> {
    let gens = s.ample_generators().to_vec();
    let n = s.ns_rank();
    proptest::collection::vec(pos_rat(), gens.len())
        .prop_map(move |ws| gens.iter().zip(&ws).fold(DivisorClass::zero(n), |acc, (g, w)| &acc + &g.scale(w)))
}

fn with_surface<T: std::fmt::Debug>(
    f: impl Fn(&SurfaceLattice) -> BoxedStrategy<T> + 'static,
) -> impl Strategy<Value = (SurfaceLattice, T)> {
    surface().prop_flat_map(move |s| {
        let inner = f(&s);
        (Just(s), inner)
    })
}

fn p1xp1_quadrant(v: ChernCharacter) -> FamilySpec {
    FamilySpec::new(
        FamilyKind::OrthogonalQuadrant,
        FamilyClass::Character(v),
        vec![DivisorClass::from_ints(&[2, 1]), DivisorClass::from_ints(&[1, 2])],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_symmetric_and_bilinear((s, (u, w, x, k)) in with_surface(|s| {
        let n = s.ns_rank();
        (extended(n), extended(n), extended(n), rat()).boxed()
    })) {
        let p = |a: &ExtendedClass, b: &ExtendedClass| s.poincare_pairing(a, b).unwrap();
        prop_assert_eq!(p(&u, &w), p(&w, &u));
        prop_assert_eq!(p(&(&u + &x.scale(&k)), &w), p(&u, &w) + &k * p(&x, &w));
        let refm = Reference::new(&s);
        prop_assert_eq!(p(&u, &w), refm.pairing(&Reference::flat(&u), &Reference::flat(&w)));
    }

    #[test]
    fn riemann_roch_pairing_identity((s, (u, w)) in with_surface(|s| (extended(s.ns_rank()), extended(s.ns_rank())).boxed())) {
        let lhs = s.poincare_pairing(&u, &w).unwrap();
        let rhs = s.euler_char(&s.mul_extended(&u, &s.mul_extended(&s.todd_inverse(), &w).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_commutative_associative_unital((s, (u, w, x)) in with_surface(|s| {
        let n = s.ns_rank();
        (extended(n), extended(n), extended(n)).boxed()
    })) {
        let m = |a: &ExtendedClass, b: &ExtendedClass| s.mul_extended(a, b).unwrap();
        prop_assert_eq!(m(&u, &w), m(&w, &u));
        prop_assert_eq!(m(&m(&u, &w), &x), m(&u, &m(&w, &x)));
        prop_assert_eq!(m(&ExtendedClass::unit(s.ns_rank()), &u), u.clone());
        let refm = Reference::new(&s);
        prop_assert_eq!(Reference::flat(&m(&u, &w)), refm.product(&Reference::flat(&u), &Reference::flat(&w)));
    }

    #[test]
    fn twist_is_a_group_action((s, (a, m1, m2)) in with_surface(|s| {
        let n = s.ns_rank();
        (character(n), divisor(n), divisor(n)).boxed()
    })) {
        let t = |c: &ChernCharacter, m: &DivisorClass| c.twist(m, &s).unwrap();
        prop_assert_eq!(t(&t(&a, &m1), &m2), t(&a, &(&m1 + &m2)));
        prop_assert_eq!(t(&t(&a, &m1), &-&m1), a.clone());
        // twisting is multiplication by e^M
        let prod = s.mul_extended(&a.to_extended(), &s.exp(&m1).unwrap()).unwrap();
        prop_assert_eq!(t(&a, &m1).to_extended(), prod);
    }

    #[test]
    fn hilbert_polynomial_is_quadratic((s, (a, h)) in with_surface(|s| (character(s.ns_rank()), ample(s)).boxed())) {
        // χ(a(mH)) = r H²/2 m² + (c1·H - r K·H/2) m + χ(a)
        let chi = |m: i64| a.twist(&h.scale(&ri(m)), &s).unwrap().euler_char(&s).unwrap();
        let h2 = s.square(&h).unwrap();
        let kh = s.intersect(s.canonical(), &h).unwrap();
        let lin = s.intersect(&a.c1, &h).unwrap() - &a.r * &kh / ri(2);
        for m in -3..=3 {
            let want = &a.r * &h2 / ri(2) * ri(m * m) + &lin * ri(m) + chi(0);
            prop_assert_eq!(chi(m), want);
        }
    }

    #[test]
    fn orthogonal_alpha_is_orthogonal((s, (v, l, h, t)) in with_surface(|s| {
        let n = s.ns_rank();
        (positive_character(n), divisor(n), ample(s), rat()).boxed()
    })) {
        let a = make_orthogonal_alpha(&v, &l, &h, &t, &s).unwrap();
        prop_assert!(s.poincare_pairing(&v.to_extended(), &a.to_extended()).unwrap().is_zero());
        // Re Z(v) = 0 and Im Z(v) = r(v)·(μ_H(v) - θ)
        let z = central_charge(&v, &a, &h, &s).unwrap();
        prop_assert!(z.re.is_zero());
    }

    #[test]
    fn twisted_gieseker_matches_large_t_pairing((s, (a, v, l, h)) in with_surface(|s| {
        let n = s.ns_rank();
        (positive_character(n), positive_character(n), divisor(n), ample(s)).boxed()
    })) {
        let cmp = twisted_gieseker_compare(&a, &v, &l, &h, &s).unwrap();
        // ⟨a, α_t⟩ = r(a)(χ-diff + t·slope-diff), so its sign for large t is the outcome
        let t = match cmp.crossing() {
            Some(c) => c.abs() + ri(1),
            None => ri(1),
        };
        let alpha = make_orthogonal_alpha(&v, &l, &h, &t, &s).unwrap();
        let p = s.poincare_pairing(&a.to_extended(), &alpha.to_extended()).unwrap();
        let want = match cmp.outcome {
            Comparison::Destabilizes => Ordering::Greater,
            Comparison::Neutral => Ordering::Equal,
            Comparison::Stabilizes => Ordering::Less,
        };
        prop_assert_eq!(p.cmp(&Rational::zero()), want);
        prop_assert_eq!(p, &a.r * (&cmp.chi_diff + &t * &cmp.slope_diff));
    }

    #[test]
    fn heart_threshold_matches_imaginary_part((s, (b, h, a1, a2)) in with_surface(|s| {
        let n = s.ns_rank();
        (positive_character(n), ample(s), divisor(n), rat()).boxed()
    })) {
        let alpha = stabwalls::StabilityVector::new(ri(1), a1, a2).unwrap();
        let mu = b.slope(&h, &s).unwrap();
        let m = heart_membership(std::slice::from_ref(&mu), &alpha, &h, &s).unwrap();
        let im = s.poincare_pairing(&b.to_extended(), &alpha_times(&alpha, &h, &s).unwrap()).unwrap();
        prop_assert_eq!(im.is_positive(), mu > m.threshold);
        prop_assert_eq!(m.class == HeartClass::TiltedPart, im.is_positive());
    }

    #[test]
    fn positive_rescaling_keeps_pairing_signs((s, (a, v, l, h, t, k)) in with_surface(|s| {
        let n = s.ns_rank();
        (character(n), positive_character(n), divisor(n), ample(s), rat(), pos_rat()).boxed()
    })) {
        let alpha = make_orthogonal_alpha(&v, &l, &h, &t, &s).unwrap();
        let scaled = alpha.scale(&k).unwrap();
        let p = |x: &stabwalls::StabilityVector| s.poincare_pairing(&a.to_extended(), &x.to_extended()).unwrap();
        prop_assert_eq!(p(&alpha).signum(), p(&scaled).signum());
        prop_assert_eq!(bogomolov(&alpha, &s).unwrap().ok, bogomolov(&scaled, &s).unwrap().ok);
    }

    #[test]
    fn surface_json_round_trip(s in surface()) {
        let text = s.to_json();
        let back = SurfaceLattice::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert!(!determinant(&s.pairing_gram()).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn quadrant_wall_pairing_consistency(
        v in positive_character(2),
        a in character(2),
        on in proptest::collection::vec(rat(), 5),
        off in proptest::collection::vec((rat(), rat()), 5),
    ) {
        let s = presets::p1xp1();
        let f = p1xp1_quadrant(v.clone());
        let Locus::Wall(w) = wall_line_quadrant(&a, &f, &s).unwrap() else { return Ok(()); };
        let pair = |ps: &Rational, pt: &Rational| {
            let alpha = eval_family(&f, &[ps.clone(), pt.clone()], &s).unwrap().vector;
            s.poincare_pairing(&a.to_extended(), &alpha.to_extended()).unwrap()
        };
        for x in &on {
            // a point on the line
            let (ps, pt) = if !w.coef_t.is_zero() {
                (x.clone(), -(&w.coef_s * x + &w.coef_const) / &w.coef_t)
            } else {
                (-(&w.coef_t * x + &w.coef_const) / &w.coef_s, x.clone())
            };
            prop_assert!(pair(&ps, &pt).is_zero());
        }
        for (ps, pt) in &off {
            prop_assert_eq!(pair(ps, pt).signum(), w.eval(ps, pt).signum());
        }
        // horizontal/vertical criterion
        let delta = &a.c1 - &v.c1.scale(&(&a.r / &v.r));
        prop_assert_eq!(w.coef_s.is_zero(), s.intersect(&delta, &f.directions[0]).unwrap().is_zero());
        prop_assert_eq!(w.coef_t.is_zero(), s.intersect(&delta, &f.directions[1]).unwrap().is_zero());
    }

    #[test]
    fn wall_scale_invariance(v in positive_character(2), a in character(2), k in 1i64..=9) {
        let s = presets::p1xp1();
        let f = p1xp1_quadrant(v);
        let a2 = a.scale(&ri(k));
        match (wall_line_quadrant(&a, &f, &s).unwrap(), wall_line_quadrant(&a2, &f, &s).unwrap()) {
            (Locus::Wall(w1), Locus::Wall(w2)) => {
                let (n1, n2) = (w1.normalized(), w2.normalized());
                prop_assert_eq!((n1.coef_s, n1.coef_t, n1.coef_const), (n2.coef_s, n2.coef_t, n2.coef_const));
            }
            (x, y) => prop_assert_eq!(x.is_degenerate(), y.is_degenerate()),
        }
    }

    #[test]
    fn cone_hyperplane_consistency(v in positive_character(2), a in character(2), params in proptest::collection::vec(pos_rat(), 3)) {
        let s = presets::p1xp1();
        let dirs = vec![DivisorClass::from_ints(&[1, 1]), DivisorClass::from_ints(&[2, 1]), DivisorClass::from_ints(&[1, 2])];
        let f = FamilySpec::new(FamilyKind::OrthogonalCone, FamilyClass::Character(v), dirs);
        let Locus::Wall(w) = wall_hyperplane_cone(&a, &f, &s).unwrap() else { return Ok(()); };
        let alpha = eval_family(&f, &params, &s).unwrap().vector;
        prop_assert_eq!(w.eval(&params), s.poincare_pairing(&a.to_extended(), &alpha.to_extended()).unwrap());
    }

    #[test]
    fn circle_form_from_central_charges(
        v in positive_character(2),
        a in character(2),
        u0 in rat(),
        pts in proptest::collection::vec((rat(), pos_rat()), 6),
    ) {
        let s = presets::p1xp1();
        let h = DivisorClass::from_ints(&[1, 1]);
        let f = FamilySpec::new(FamilyKind::MaciociaPlane, FamilyClass::Character(v.clone()), vec![h.clone(), DivisorClass::from_ints(&[1, -1])])
            .with_extra(vec![u0]);
        let poly = maciocia_wall_polynomial(&a, &f, &s).unwrap();
        let w = |x: &Rational, y2: &Rational| {
            let alpha = eval_family(&f, &[x.clone(), y2.clone()], &s).unwrap().vector;
            let za = central_charge(&a, &alpha, &h, &s).unwrap();
            let zv = central_charge(&v, &alpha, &h, &s).unwrap();
            &za.re * &zv.im - &zv.re * &za.im
        };
        // fit c0 + c1 x + c2 y² + c3 x² + c4 x y² + c5 y⁴ through six points
        let rows: Vec<Vec<Rational>> = pts.iter().map(|(x, y2)| vec![ri(1), x.clone(), y2.clone(), x * x, x * y2, y2 * y2]).collect();
        if determinant(&rows).is_zero() { return Ok(()); }
        let vals: Vec<Rational> = pts.iter().map(|(x, y2)| w(x, y2)).collect();
        let coef = solve(rows, vals);
        prop_assert_eq!(&coef[0], &poly.coef(0, 0));
        prop_assert_eq!(&coef[1], &poly.coef(1, 0));
        prop_assert_eq!(&coef[2], &poly.coef(0, 1));
        prop_assert_eq!(&coef[3], &poly.coef(2, 0));
        prop_assert!(coef[4].is_zero() && coef[5].is_zero());
        prop_assert_eq!(&coef[2], &coef[3]);
    }

    #[test]
    fn onedim_origin_criterion(chi in pos_rat(), k in 1i64..=3, a in character(2), zero_rank in any::<bool>()) {
        let s = presets::p1xp1();
        let v = OneDimClass::new(DivisorClass::from_ints(&[k, k]), chi).unwrap();
        let f = FamilySpec::new(FamilyKind::OneDimQuadrant, FamilyClass::OneDim(v), vec![DivisorClass::from_ints(&[1, 2]), DivisorClass::from_ints(&[2, 1])]);
        let mut a = a;
        if zero_rank { a.r = Rational::zero(); }
        match onedim_wall_line(&a, &f, &s).unwrap() {
            Locus::Wall(w) => prop_assert_eq!(w.passes_through_origin(), a.r.is_zero()),
            Locus::Degenerate => prop_assert!(a.r.is_zero()),
            Locus::NoWall => prop_assert!(!a.r.is_zero()),
        }
    }

    #[test]
    fn onedim_family_is_bogomolov_admissible(chi in pos_rat(), k in 1i64..=3, ps in pos_rat(), pt in pos_rat()) {
        let s = presets::p1xp1();
        let v = OneDimClass::new(DivisorClass::from_ints(&[k, k]), chi).unwrap();
        let f = FamilySpec::new(FamilyKind::OneDimQuadrant, FamilyClass::OneDim(v), vec![DivisorClass::from_ints(&[1, 2]), DivisorClass::from_ints(&[2, 1])]);
        let p = eval_family(&f, &[ps, pt], &s).unwrap();
        prop_assert!(bogomolov(&p.vector, &s).unwrap().ok);
    }
}

#[test]
fn enumeration_is_monotone_and_stable() {
    let s = presets::p1xp1();
    let v = ChernCharacter::new(ri(2), DivisorClass::from_ints(&[0, 0]), ri(-5));
    let cone = [DivisorClass::from_ints(&[1, 0]), DivisorClass::from_ints(&[0, 1])];
    let normals = |b: u32| -> Vec<DivisorClass> {
        enumerate_rank2_destabilizers(&v, &cone, b, &s).unwrap().walls.into_iter().map(|w| w.normal).collect()
    };
    let oracle = brute_force_normals(&s, &v, 6);
    let mut prev: Vec<DivisorClass> = Vec::new();
    for b in 1..=6 {
        let cur = normals(b);
        assert!(prev.iter().all(|n| cur.contains(n)), "box {b} lost a wall");
        if b >= 2 {
            assert_eq!(cur, oracle, "box {b}");
        }
        prev = cur;
    }
}

/// Independent search: all integer `L` with `|L_i| ≤ B`, `2ab + 5 ≥ 0` and
/// `ab ≤ 0`, collected by the primitive normal `(b, a)`.
fn brute_force_normals(_s: &SurfaceLattice, _v: &ChernCharacter, b: i64) -> Vec<DivisorClass> {
    let mut out: Vec<(i64, i64)> = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            if (x, y) == (0, 0) || 2 * x * y + 5 < 0 || x * y > 0 {
                continue;
            }
            let g = gcd(x.abs(), y.abs());
            let (mut n1, mut n2) = (y / g, x / g);
            if n1 < 0 || (n1 == 0 && n2 < 0) {
                n1 = -n1;
                n2 = -n2;
            }
            if !out.contains(&(n1, n2)) {
                out.push((n1, n2));
            }
        }
    }
    out.sort();
    out.into_iter().map(|(a, b)| DivisorClass::from_ints(&[a, b])).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Gauss-Jordan solve over the rationals.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        b[col] = &b[col] / &p;
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &k * y;
                }
                let sub = &k * &b[col];
                b[r] -= sub;
            }
        }
    }
    b
}
