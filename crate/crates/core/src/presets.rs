//! Bundled surfaces: the projective plane, `P¹×P¹` and the blow-up of `P²`
//! at a point.

use std::collections::BTreeMap;

use crate::lattice::{DivisorClass, SurfaceLattice};

/// A bundled surface with named classes.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub surface: SurfaceLattice,
    pub classes: BTreeMap<&'static str, DivisorClass>,
    /// Generators of the cone scanned by default in destabilizer enumeration.
    pub enumeration_cone: Vec<DivisorClass>,
    /// Recommended box bound for enumeration.
    pub default_box: u32,
}

pub const PRESET_NAMES: [&str; 3] = ["p2", "p1xp1", "blowup_p2"];

fn d(c: &[i64]) -> DivisorClass {
    DivisorClass::from_ints(c)
}

/// `P²`, basis `{h}`.
pub fn p2() -> SurfaceLattice {
    SurfaceLattice::new("p2", vec![vec![1]], d(&[-3]), 1, vec![d(&[1])]).expect("valid preset")
}

/// `P¹×P¹`, basis `{H1 = O(1,0), H2 = O(0,1)}`.
pub fn p1xp1() -> SurfaceLattice {
    SurfaceLattice::new(
        "p1xp1",
        vec![vec![0, 1], vec![1, 0]],
        d(&[-2, -2]),
        1,
        vec![d(&[1, 1]), d(&[2, 1]), d(&[1, 2])],
    )
    .expect("valid preset")
}

/// `Bl_p P²`, basis `{h, e}` with `e` the exceptional curve.
pub fn blowup_p2() -> SurfaceLattice {
    SurfaceLattice::new("blowup_p2", vec![vec![1, 0], vec![0, -1]], d(&[-3, 1]), 1, vec![d(&[2, -1]), d(&[3, -1])])
        .expect("valid preset")
}

pub fn all_surfaces() -> Vec<SurfaceLattice> {
    vec![p2(), p1xp1(), blowup_p2()]
}

pub fn preset(name: &str) -> Option<Preset> {
    let p = match name {
        "p2" => Preset {
            name: "p2",
            surface: p2(),
            classes: [("h", d(&[1])), ("K", d(&[-3]))].into_iter().collect(),
            enumeration_cone: vec![d(&[1])],
            default_box: 3,
        },
        "p1xp1" => Preset {
            name: "p1xp1",
            surface: p1xp1(),
            classes: [("H1", d(&[1, 0])), ("H2", d(&[0, 1])), ("H", d(&[1, 1])), ("K", d(&[-2, -2]))]
                .into_iter()
                .collect(),
            enumeration_cone: vec![d(&[1, 0]), d(&[0, 1])],
            default_box: 3,
        },
        "blowup_p2" => Preset {
            name: "blowup_p2",
            surface: blowup_p2(),
            classes: [("h", d(&[1, 0])), ("e", d(&[0, 1])), ("K", d(&[-3, 1])), ("D", d(&[2, 0])), ("H", d(&[2, -1]))]
                .into_iter()
                .collect(),
            enumeration_cone: vec![d(&[1, 0]), d(&[1, -1])],
            default_box: 3,
        },
        _ => return None,
    };
    Some(p)
}
