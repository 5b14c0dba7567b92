use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use num_traits::Zero;
use stabwalls::presets;
use stabwalls::rational::{format_rational, primitive_integer_vector, Rational};
use stabwalls::stability::{FamilyClass, FamilyKind, FamilySpec};
use stabwalls::walls::{
    enumerate_rank2_destabilizers, gieseker_wall_t, maciocia_wall_circle, onedim_wall_line, segment_scan,
    wall_hyperplane_cone, wall_line_quadrant, GiesekerCrossing, Locus, WallRecord,
};
use stabwalls::{ChernCharacter, DivisorClass, Error, OneDimClass};

use crate::docs::{
    self, CircleInfo, CrossingDoc, EnumerateDoc, GiesekerDoc, GiesekerEntry, ScanDoc, Skipped, VerifyReport, WallsDoc,
};
use crate::input::Context;
use crate::plot::{self, Ray};
use crate::verify;
use crate::{
    Cli, Command, EnumerateArgs, Failure, FamilyArgs, Format, PlotArgs, PlotMode, ScanArgs, SurfaceArgs, VerifyArgs,
    WallsCmd,
};

type Res<T> = std::result::Result<T, Failure>;

fn validation(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

fn load(s: &SurfaceArgs) -> Res<Context> {
    Ok(Context::load(s.preset.as_deref(), s.surface.as_deref())?)
}

fn divisors(ctx: &Context, texts: &[String]) -> Res<Vec<DivisorClass>> {
    texts.iter().map(|t| ctx.divisor(t).map_err(Failure::from)).collect()
}

fn characters(ctx: &Context, texts: &[String]) -> Res<Vec<ChernCharacter>> {
    texts.iter().map(|t| ctx.character(t).map_err(Failure::from)).collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Res<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| validation(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| validation(format!("cannot write output: {e}")))
        }
    }
}

fn unsupported_format(command: &str, format: Format) -> Failure {
    validation(format!("{command} does not support --format {format:?}").to_lowercase())
}

pub fn run(cli: Cli) -> Res<()> {
    match &cli.command {
        Command::Walls { cmd } => {
            let text = walls(cmd, cli.format.unwrap_or(Format::Json))?;
            emit(&cli.out, &text)
        }
        Command::Verify(args) => {
            let report = run_verify(args)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => docs::to_json(&report),
                Format::Csv => docs::verify_csv(&report),
                f => return Err(unsupported_format("verify", f)),
            };
            emit(&cli.out, &text)?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::VerifyFailed)
            }
        }
        Command::Plot(args) => {
            let format = cli.format.unwrap_or(Format::Svg);
            if format != Format::Svg {
                return Err(unsupported_format("plot", format));
            }
            emit(&cli.out, &run_plot(args)?)
        }
    }
}

/// Collects normalized records, skipping duplicates and empty loci.
#[derive(Default)]
struct Collector {
    walls: Vec<WallRecord>,
    skipped: Vec<Skipped>,
    seen: BTreeSet<Vec<Rational>>,
}

impl Collector {
    fn push<T>(
        &mut self,
        producer: &ChernCharacter,
        locus: Locus<T>,
        record: impl FnOnce(T) -> WallRecord,
    ) -> Option<usize> {
        let reason = match locus {
            Locus::Wall(w) => {
                let rec = record(w);
                if self.seen.insert(rec.coefs.clone()) {
                    self.walls.push(rec);
                    return Some(self.walls.len() - 1);
                }
                "duplicate"
            }
            Locus::NoWall => "no-wall",
            Locus::Degenerate => "degenerate",
        };
        self.skipped.push(Skipped { producer: producer.clone(), reason: reason.into() });
        None
    }

    fn doc(self, ctx: &Context, command: &str, family: FamilySpec) -> WallsDoc {
        WallsDoc {
            surface: ctx.surface.label().into(),
            command: command.into(),
            family,
            walls: self.walls,
            circles: Vec::new(),
            skipped: self.skipped,
        }
    }
}

fn quadrant_walls(ctx: &Context, f: &FamilySpec, producers: &[ChernCharacter]) -> Res<Collector> {
    let mut c = Collector::default();
    for a in producers {
        let locus = if f.kind == FamilyKind::OneDimQuadrant {
            onedim_wall_line(a, f, &ctx.surface)?
        } else {
            wall_line_quadrant(a, f, &ctx.surface)?
        };
        c.push(a, locus, |l| l.normalized().record());
    }
    Ok(c)
}

fn quadrant_family(ctx: &Context, v: &str, dirs: &[String], twist: &Option<String>) -> Res<FamilySpec> {
    let mut f = FamilySpec::new(
        FamilyKind::OrthogonalQuadrant,
        FamilyClass::Character(ctx.character(v)?),
        divisors(ctx, dirs)?,
    );
    if let Some(l) = twist {
        f = f.with_twist(ctx.divisor(l)?);
    }
    Ok(f)
}

fn onedim_family(ctx: &Context, curve: &str, chi: &str, dirs: &[String]) -> Res<FamilySpec> {
    let class = OneDimClass::new(ctx.divisor(curve)?, crate::input::parse_rational_arg(chi)?)?;
    Ok(FamilySpec::new(FamilyKind::OneDimQuadrant, FamilyClass::OneDim(class), divisors(ctx, dirs)?))
}

fn quadrant_output(ctx: &Context, command: &str, f: FamilySpec, c: Collector, format: Format) -> Res<String> {
    Ok(match format {
        Format::Json => docs::to_json(&c.doc(ctx, command, f)),
        Format::Csv => docs::walls_csv(&c.walls),
        Format::Svg => plot::quadrant_svg(&c.walls, ("s", "t"), None),
    })
}

fn walls(cmd: &WallsCmd, format: Format) -> Res<String> {
    match cmd {
        WallsCmd::Quadrant { surface, v, dirs, twist, producers } => {
            let ctx = load(surface)?;
            let f = quadrant_family(&ctx, v, dirs, twist)?;
            let c = quadrant_walls(&ctx, &f, &characters(&ctx, &producers.producers)?)?;
            quadrant_output(&ctx, "quadrant", f, c, format)
        }
        WallsCmd::Onedim { surface, curve, chi, dirs, producers } => {
            let ctx = load(surface)?;
            let f = onedim_family(&ctx, curve, chi, dirs)?;
            let c = quadrant_walls(&ctx, &f, &characters(&ctx, &producers.producers)?)?;
            quadrant_output(&ctx, "onedim", f, c, format)
        }
        WallsCmd::Cone { surface, v, dirs, twist, producers } => {
            let ctx = load(surface)?;
            let mut f = FamilySpec::new(
                FamilyKind::OrthogonalCone,
                FamilyClass::Character(ctx.character(v)?),
                divisors(&ctx, dirs)?,
            );
            if let Some(l) = twist {
                f = f.with_twist(ctx.divisor(l)?);
            }
            let mut c = Collector::default();
            for a in characters(&ctx, &producers.producers)? {
                let locus = wall_hyperplane_cone(&a, &f, &ctx.surface)?;
                c.push(&a, locus, |h| h.normalized().record());
            }
            match format {
                Format::Json => Ok(docs::to_json(&c.doc(&ctx, "cone", f))),
                Format::Csv => Ok(docs::walls_csv(&c.walls)),
                Format::Svg => Err(unsupported_format("walls cone", format)),
            }
        }
        WallsCmd::Maciocia { surface, v, dir, orth, u0, producers } => {
            let ctx = load(surface)?;
            let mut dirs = vec![ctx.divisor(dir)?];
            if let Some(g) = orth {
                dirs.push(ctx.divisor(g)?);
            }
            let mut f = FamilySpec::new(FamilyKind::MaciociaPlane, FamilyClass::Character(ctx.character(v)?), dirs);
            if let Some(u) = u0 {
                f = f.with_extra(vec![crate::input::parse_rational_arg(u)?]);
            }
            let mut c = Collector::default();
            let mut circles = Vec::new();
            for a in characters(&ctx, &producers.producers)? {
                let locus = maciocia_wall_circle(&a, &f, &ctx.surface)?;
                let mut info = None;
                let idx = c.push(&a, locus, |w| {
                    let fmt = |x: Option<Rational>| x.map(|x| format_rational(&x));
                    info = Some((fmt(w.center()), fmt(w.radius_sq()), fmt(w.vertical_x()), w.meets_half_plane()));
                    let mut rec = w.record();
                    rec.coefs = primitive_integer_vector(&rec.coefs).into_iter().map(Rational::from_integer).collect();
                    rec.flags.insert(0, "normalized".into());
                    rec
                });
                if let (Some(wall), Some((center, radius_sq, vertical_x, meets_half_plane))) = (idx, info) {
                    circles.push(CircleInfo { wall, center, radius_sq, vertical_x, meets_half_plane });
                }
            }
            match format {
                Format::Json => {
                    let mut doc = c.doc(&ctx, "maciocia", f);
                    doc.circles = circles;
                    Ok(docs::to_json(&doc))
                }
                Format::Csv => Ok(docs::walls_csv(&c.walls)),
                Format::Svg => Err(unsupported_format("walls maciocia", format)),
            }
        }
        WallsCmd::Gieseker { surface, v, hplus, producers } => {
            let ctx = load(surface)?;
            let v = ctx.character(v)?;
            let hplus = ctx.divisor(hplus)?;
            if !ctx.surface.passes_ample_check(&hplus) {
                return Err(Error::InvalidFamily(format!("H+ = {hplus} fails the ample check")).into());
            }
            let mut crossings = Vec::new();
            for a in characters(&ctx, &producers.producers)? {
                let (status, t) = match gieseker_wall_t(&a, &v, &hplus, &ctx.surface)? {
                    GiesekerCrossing::At(t) => ("wall", Some(format_rational(&t))),
                    GiesekerCrossing::NoWall { everywhere: false } => ("no-wall", None),
                    GiesekerCrossing::NoWall { everywhere: true } => ("everywhere", None),
                };
                crossings.push(GiesekerEntry { producer: a, status: status.into(), t });
            }
            let doc =
                GiesekerDoc { surface: ctx.surface.label().into(), command: "gieseker".into(), v, hplus, crossings };
            match format {
                Format::Json => Ok(docs::to_json(&doc)),
                Format::Csv => Ok(docs::gieseker_csv(&doc)),
                Format::Svg => Err(unsupported_format("walls gieseker", format)),
            }
        }
        WallsCmd::Enumerate(args) => enumerate(args, format),
        WallsCmd::Scan(args) => scan(args, format),
    }
}

struct EnumerationRun {
    ctx: Context,
    doc: EnumerateDoc,
    directions: Vec<DivisorClass>,
}

fn run_enumeration(surface: &SurfaceArgs, v: &str, dirs: &[String], box_bound: Option<u32>) -> Res<EnumerationRun> {
    let ctx = load(surface)?;
    let v = ctx.character(v)?;
    let directions = if dirs.is_empty() {
        match &ctx.preset {
            Some(p) => p.enumeration_cone.clone(),
            None => ctx.surface.ample_generators().to_vec(),
        }
    } else {
        divisors(&ctx, dirs)?
    };
    let box_bound = match (box_bound, &ctx.preset) {
        (Some(b), _) => b,
        (None, Some(p)) => p.default_box,
        (None, None) => return Err(validation("--box is required with --surface")),
    };
    let e = enumerate_rank2_destabilizers(&v, &directions, box_bound, &ctx.surface)?;
    let s = &ctx.surface;
    let doc = EnumerateDoc::new(s.label(), &v, &directions, &e, |l| s.square(l).expect("checked class"));
    Ok(EnumerationRun { ctx, doc, directions })
}

fn basis_names(ctx: &Context) -> Vec<String> {
    let n = ctx.rank();
    (0..n)
        .map(|i| {
            let e = DivisorClass::basis(n, i);
            ctx.names.iter().find(|(_, c)| **c == e).map(|(k, _)| k.clone()).unwrap_or_else(|| format!("x{}", i + 1))
        })
        .collect()
}

fn ample_slice(run: &EnumerationRun) -> Res<String> {
    let basis = basis_names(&run.ctx);
    let rays: Vec<Ray> = run
        .doc
        .walls
        .iter()
        .filter_map(|w| {
            w.ray.as_ref().map(|r| Ray {
                direction: r.clone(),
                label: plot::named_class(r, &basis),
                normal: DivisorClass::new(w.coefs.clone()),
            })
        })
        .collect();
    Ok(plot::ample_slice_svg(&rays, &run.directions, (&basis[0], &basis[1])))
}

fn require_rank_two(ctx_surface: &SurfaceArgs) -> Res<()> {
    let ctx = load(ctx_surface)?;
    if ctx.rank() != 2 {
        return Err(Error::UnsupportedDimension(format!(
            "the ample-slice plot needs a Néron–Severi lattice of rank 2, this one has rank {}",
            ctx.rank()
        ))
        .into());
    }
    Ok(())
}

fn enumerate(args: &EnumerateArgs, format: Format) -> Res<String> {
    if format == Format::Svg {
        require_rank_two(&args.surface)?;
    }
    let run = run_enumeration(&args.surface, &args.v, &args.dirs, args.box_bound)?;
    match format {
        Format::Json => Ok(docs::to_json(&run.doc)),
        Format::Csv => Ok(docs::enumerate_csv(&run.doc)),
        Format::Svg => ample_slice(&run),
    }
}

fn family_from_args(ctx: &Context, a: &FamilyArgs) -> Res<FamilySpec> {
    if let Some(path) = &a.family_file {
        let flags = [a.family.is_some(), a.v.is_some(), a.curve.is_some(), a.chi.is_some(), !a.dirs.is_empty()];
        if flags.iter().any(|&x| x) || a.twist.is_some() || a.extra.is_some() || a.polarization.is_some() {
            return Err(validation("--family-file cannot be combined with other family flags"));
        }
        let text =
            std::fs::read_to_string(path).map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| validation(format!("parse error: {}: {e}", path.display())));
    }
    let kind_name =
        a.family.as_deref().ok_or_else(|| validation("a family is required: --family KIND or --family-file FILE"))?;
    let kind = FamilyKind::from_name(kind_name).ok_or_else(|| {
        validation(format!(
            "unknown family kind {kind_name:?}; expected one of orthogonal-ray, orthogonal-quadrant, fixed-d4-quadrant, maciocia-plane, onedim-ray, onedim-quadrant, orthogonal-cone"
        ))
    })?;
    let v = match (&a.v, &a.curve, &a.chi) {
        (Some(v), None, None) => FamilyClass::Character(ctx.character(v)?),
        (None, Some(c), Some(chi)) => {
            FamilyClass::OneDim(OneDimClass::new(ctx.divisor(c)?, crate::input::parse_rational_arg(chi)?)?)
        }
        _ => return Err(validation("give either --v or both --curve and --chi")),
    };
    let mut f = FamilySpec::new(kind, v, divisors(ctx, &a.dirs)?);
    if let Some(l) = &a.twist {
        f = f.with_twist(ctx.divisor(l)?);
    }
    if let Some(x) = &a.extra {
        let n = x.split(',').count();
        f = f.with_extra(ctx.rationals(x, n)?);
    }
    if let Some(h) = &a.polarization {
        f = f.with_polarization(ctx.divisor(h)?);
    }
    Ok(f)
}

fn scan(args: &ScanArgs, format: Format) -> Res<String> {
    let ctx = load(&args.surface)?;
    let f = family_from_args(&ctx, &args.family)?;
    f.validate(&ctx.surface)?;
    let from = ctx.rationals(&args.from, f.param_count())?;
    let to = ctx.rationals(&args.to, f.param_count())?;
    let candidates = characters(&ctx, &args.candidates)?;
    let crossings = segment_scan(&f, &from, &to, &candidates, &ctx.surface)?;
    let doc = ScanDoc {
        surface: ctx.surface.label().into(),
        command: "scan".into(),
        family: f,
        from,
        to,
        candidates: candidates.len(),
        crossings: crossings.iter().map(CrossingDoc::from).collect(),
    };
    match format {
        Format::Json => Ok(docs::to_json(&doc)),
        Format::Csv => Ok(docs::scan_csv(&doc)),
        Format::Svg => Err(unsupported_format("walls scan", format)),
    }
}

fn run_verify(args: &VerifyArgs) -> Res<VerifyReport> {
    let blowdown = match args.scenario.as_deref() {
        None => false,
        Some("blowdown") => true,
        Some(other) => return Err(validation(format!("unknown scenario {other:?}; expected blowdown"))),
    };
    let targets: Vec<(String, Context)> = if args.surface.preset.is_none() && args.surface.surface.is_none() {
        presets::PRESET_NAMES.iter().map(|n| Ok((n.to_string(), Context::load(Some(n), None)?))).collect::<Res<_>>()?
    } else {
        let ctx = load(&args.surface)?;
        if blowdown && ctx.preset.as_ref().map(|p| p.name) != Some("blowup_p2") {
            return Err(validation("the blowdown scenario runs on --preset blowup_p2"));
        }
        vec![(ctx.surface.label().to_string(), ctx)]
    };
    let surfaces: Vec<_> = targets
        .iter()
        .map(|(name, ctx)| {
            verify::run_surface(&ctx.surface, args.seed, blowdown && name == "blowup_p2" && ctx.preset.is_some())
        })
        .collect();
    let passed = surfaces.iter().all(|s| s.suites.iter().all(|t| t.passed));
    Ok(VerifyReport { command: "verify".into(), seed: args.seed, surfaces, passed })
}

fn run_plot(args: &PlotArgs) -> Res<String> {
    match args.mode {
        PlotMode::AmpleSlice => {
            require_rank_two(&args.surface)?;
            let v = args.v.as_deref().ok_or_else(|| validation("--v is required for the ample-slice plot"))?;
            let run = run_enumeration(&args.surface, v, &args.dirs, args.box_bound)?;
            ample_slice(&run)
        }
        PlotMode::Quadrant => {
            let ctx = load(&args.surface)?;
            if args.dirs.len() > 2 {
                return Err(Error::UnsupportedDimension(format!(
                    "the quadrant plot takes 2 directions, got {}",
                    args.dirs.len()
                ))
                .into());
            }
            let f = match (&args.v, &args.curve, &args.chi) {
                (Some(v), None, None) => quadrant_family(&ctx, v, &args.dirs, &args.twist)?,
                (None, Some(c), Some(chi)) => onedim_family(&ctx, c, chi, &args.dirs)?,
                _ => return Err(validation("give either --v or both --curve and --chi")),
            };
            f.validate(&ctx.surface)?;
            let c = quadrant_walls(&ctx, &f, &characters(&ctx, &args.producers)?)?;
            let extent = args.extent.as_deref().map(crate::input::parse_rational_arg).transpose()?;
            if extent.as_ref().is_some_and(|e| e <= &Rational::zero()) {
                return Err(validation("--extent must be positive"));
            }
            Ok(plot::quadrant_svg(&c.walls, ("s", "t"), extent.as_ref()))
        }
    }
}
