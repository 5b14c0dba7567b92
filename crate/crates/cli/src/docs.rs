//! Output documents and their JSON / CSV renderings.

use serde::{Deserialize, Serialize};
use stabwalls::rational::{format_rational, serde_rational, serde_rational_vec, Rational};
use stabwalls::walls::{Crossing, Enumeration, WallRecord};
use stabwalls::{ChernCharacter, DivisorClass, FamilySpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Skipped {
    pub producer: ChernCharacter,
    /// `no-wall`, `degenerate` or `duplicate`.
    pub reason: String,
}

/// Center and squared radius of a Maciocia wall, by index into `walls`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleInfo {
    pub wall: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_sq: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertical_x: Option<String>,
    pub meets_half_plane: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallsDoc {
    pub surface: String,
    pub command: String,
    pub family: FamilySpec,
    pub walls: Vec<WallRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub circles: Vec<CircleInfo>,
    pub skipped: Vec<Skipped>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GiesekerEntry {
    pub producer: ChernCharacter,
    /// `wall`, `no-wall` or `everywhere`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GiesekerDoc {
    pub surface: String,
    pub command: String,
    pub v: ChernCharacter,
    pub hplus: DivisorClass,
    pub crossings: Vec<GiesekerEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DestabilizerDoc {
    #[serde(rename = "L")]
    pub l: DivisorClass,
    #[serde(rename = "L_squared", with = "serde_rational")]
    pub l_squared: Rational,
    #[serde(with = "serde_rational")]
    pub ell: Rational,
    pub producer: ChernCharacter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumWallDoc {
    pub kind: String,
    #[serde(with = "serde_rational_vec")]
    pub coefs: Vec<Rational>,
    pub producer: ChernCharacter,
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<DivisorClass>,
    pub is_strict_gieseker: bool,
    pub is_weak_gieseker: bool,
    pub destabilizers: Vec<DestabilizerDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateDoc {
    pub surface: String,
    pub command: String,
    pub v: ChernCharacter,
    pub directions: Vec<DivisorClass>,
    #[serde(rename = "box")]
    pub box_bound: u32,
    pub twist: DivisorClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified_bound: Option<u32>,
    pub complete: bool,
    pub walls: Vec<EnumWallDoc>,
}

impl EnumerateDoc {
    pub fn new(
        surface: &str,
        v: &ChernCharacter,
        directions: &[DivisorClass],
        e: &Enumeration,
        l_squared: impl Fn(&DivisorClass) -> Rational,
    ) -> Self {
        let walls = e
            .walls
            .iter()
            .map(|w| {
                let rec = w.record();
                EnumWallDoc {
                    kind: "gieseker".into(),
                    coefs: rec.coefs,
                    producer: rec.producer,
                    flags: rec.flags,
                    ray: rec.ray,
                    is_strict_gieseker: w.is_strict_gieseker,
                    is_weak_gieseker: w.is_weak_gieseker,
                    destabilizers: w
                        .destabilizers
                        .iter()
                        .map(|d| DestabilizerDoc {
                            l_squared: l_squared(&d.l),
                            l: d.l.clone(),
                            ell: d.ell.clone(),
                            producer: d.producer.clone(),
                        })
                        .collect(),
                }
            })
            .collect();
        EnumerateDoc {
            surface: surface.into(),
            command: "enumerate".into(),
            v: v.clone(),
            directions: directions.to_vec(),
            box_bound: e.box_bound,
            twist: e.twist.clone(),
            certified_bound: e.certified_bound,
            complete: e.is_complete(),
            walls,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingDoc {
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    #[serde(with = "serde_rational_vec")]
    pub params: Vec<Rational>,
    pub producers: Vec<ChernCharacter>,
    pub boundary: bool,
    pub admissible: bool,
}

impl From<&Crossing> for CrossingDoc {
    fn from(c: &Crossing) -> Self {
        CrossingDoc {
            lambda: c.lambda.clone(),
            params: c.params.clone(),
            producers: c.producers.clone(),
            boundary: c.boundary,
            admissible: c.admissible,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanDoc {
    pub surface: String,
    pub command: String,
    pub family: FamilySpec,
    #[serde(with = "serde_rational_vec")]
    pub from: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub to: Vec<Rational>,
    pub candidates: usize,
    pub crossings: Vec<CrossingDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
    /// The first few failure messages.
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceReport {
    pub surface: String,
    pub suites: Vec<SuiteReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub command: String,
    pub seed: u64,
    pub surfaces: Vec<SurfaceReport>,
    pub passed: bool,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn join(xs: &[Rational]) -> String {
    xs.iter().map(format_rational).collect::<Vec<_>>().join(";")
}

pub fn walls_csv(walls: &[WallRecord]) -> String {
    let mut out = String::from(WallRecord::CSV_HEADER);
    out.push('\n');
    for w in walls {
        out.push_str(&w.csv_row());
        out.push('\n');
    }
    out
}

pub fn gieseker_csv(doc: &GiesekerDoc) -> String {
    csv_table(
        &["producer", "status", "t"],
        doc.crossings.iter().map(|c| vec![c.producer.to_string(), c.status.clone(), c.t.clone().unwrap_or_default()]),
    )
}

pub fn enumerate_csv(doc: &EnumerateDoc) -> String {
    csv_table(
        &["normal", "ray", "producer", "L_squared", "strict_gieseker", "weak_gieseker"],
        doc.walls.iter().map(|w| {
            let squares: Vec<Rational> = w.destabilizers.iter().map(|d| d.l_squared.clone()).collect();
            vec![
                join(&w.coefs),
                w.ray.as_ref().map(|r| join(r.coords())).unwrap_or_default(),
                w.producer.to_string(),
                join(&squares),
                w.is_strict_gieseker.to_string(),
                w.is_weak_gieseker.to_string(),
            ]
        }),
    )
}

pub fn scan_csv(doc: &ScanDoc) -> String {
    csv_table(
        &["lambda", "params", "producers", "boundary", "admissible"],
        doc.crossings.iter().map(|c| {
            vec![
                format_rational(&c.lambda),
                join(&c.params),
                c.producers.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";"),
                c.boundary.to_string(),
                c.admissible.to_string(),
            ]
        }),
    )
}

pub fn verify_csv(doc: &VerifyReport) -> String {
    csv_table(
        &["surface", "suite", "cases", "failures", "passed"],
        doc.surfaces.iter().flat_map(|s| {
            s.suites.iter().map(move |t| {
                vec![
                    s.surface.clone(),
                    t.name.clone(),
                    t.cases.to_string(),
                    t.failures.to_string(),
                    t.passed.to_string(),
                ]
            })
        }),
    )
}
