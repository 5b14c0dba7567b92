//! SVG rendering of walls in the `(s, t)` quadrant and in a 2-dimensional
//! slice of the ample cone. Exact values are carried in `data-*` attributes;
//! drawing coordinates are decimal approximations.

use std::fmt::Write;

use num_traits::{Signed, Zero};
use stabwalls::rational::{format_rational, to_f64, Rational};
use stabwalls::walls::{WallKind, WallRecord};
use stabwalls::DivisorClass;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;

/// Decimal with 12 significant digits, trailing zeros dropped.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let prec = (11 - mag).max(0) as usize;
    let mut s = format!("{x:.prec$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Maps a data rectangle onto the drawing area.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (SIZE - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        SIZE - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (SIZE - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str) {
    let size = sig12(SIZE);
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", esc(title)).unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#).unwrap();
}

fn line(out: &mut String, f: &Frame, a: (f64, f64), b: (f64, f64), attrs: &str) {
    writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {attrs}/>"#,
        sig12(f.px(a.0)),
        sig12(f.py(a.1)),
        sig12(f.px(b.0)),
        sig12(f.py(b.1))
    )
    .unwrap();
}

fn text(out: &mut String, x: f64, y: f64, anchor: &str, body: &str) {
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="{anchor}">{}</text>"#, sig12(x), sig12(y), esc(body)).unwrap();
}

fn axes(out: &mut String, f: &Frame, names: (&str, &str)) {
    out.push_str("<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n");
    line(out, f, (f.x0, 0.0), (f.x1, 0.0), "");
    line(out, f, (0.0, f.y0), (0.0, f.y1), "");
    out.push_str("</g>\n<g class=\"ticks\">\n");
    for x in [f.x0, f.x1] {
        if x != 0.0 {
            text(out, f.px(x), f.py(0.0) + 16.0, "middle", &sig12(x));
        }
    }
    for y in [f.y0, f.y1] {
        if y != 0.0 {
            text(out, f.px(0.0) - 6.0, f.py(y) + 4.0, "end", &sig12(y));
        }
    }
    text(out, f.px(0.0) - 6.0, f.py(0.0) + 16.0, "end", "0");
    out.push_str("</g>\n<g class=\"axis-labels\" font-style=\"italic\">\n");
    text(out, f.px(f.x1) + 10.0, f.py(0.0) + 4.0, "start", names.0);
    text(out, f.px(0.0), f.py(f.y1) - 10.0, "middle", names.1);
    out.push_str("</g>\n");
}

/// Endpoints of `a·x + b·y + c = 0` inside the frame's rectangle.
fn clip(a: f64, b: f64, c: f64, f: &Frame) -> Option<((f64, f64), (f64, f64))> {
    let eps = 1e-12 * (1.0 + f.x1.abs() + f.y1.abs());
    let mut pts: Vec<(f64, f64)> = Vec::new();
    if b != 0.0 {
        for x in [f.x0, f.x1] {
            pts.push((x, -(a * x + c) / b));
        }
    }
    if a != 0.0 {
        for y in [f.y0, f.y1] {
            pts.push((-(b * y + c) / a, y));
        }
    }
    pts.retain(|p| p.0 >= f.x0 - eps && p.0 <= f.x1 + eps && p.1 >= f.y0 - eps && p.1 <= f.y1 + eps);
    pts.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < eps && (p.1 - q.1).abs() < eps);
    match pts.as_slice() {
        [p, .., q] => Some((*p, *q)),
        _ => None,
    }
}

fn linear_text(coefs: &[Rational], names: &[&str]) -> String {
    let mut s = String::new();
    for (c, n) in coefs.iter().zip(names.iter().map(Some).chain(std::iter::once(None))) {
        if c.is_zero() {
            continue;
        }
        let mag = format_rational(&c.abs());
        let term = match n {
            Some(n) if mag == "1" => n.to_string(),
            Some(n) => format!("{mag}{n}"),
            None => mag,
        };
        if s.is_empty() {
            s = if c.is_negative() { format!("-{term}") } else { term };
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
            s.push_str(&term);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s + " = 0"
}

/// Wall lines `coefs[0]·s + coefs[1]·t + coefs[2] = 0` over `[0, extent]²`.
/// Without an extent the box is fitted to the positive intercepts.
pub fn quadrant_svg(walls: &[WallRecord], names: (&str, &str), extent: Option<&Rational>) -> String {
    let lines: Vec<&WallRecord> = walls.iter().filter(|w| w.kind == WallKind::Line && w.coefs.len() == 3).collect();
    let extent = match extent {
        Some(e) => to_f64(e),
        None => {
            let mut m: f64 = 0.0;
            for w in &lines {
                let (a, b, c) = (&w.coefs[0], &w.coefs[1], &w.coefs[2]);
                for (lead, _) in [(a, 0), (b, 1)] {
                    if !lead.is_zero() {
                        let x = to_f64(&(-c / lead));
                        if x > 0.0 {
                            m = m.max(x);
                        }
                    }
                }
            }
            if m == 0.0 {
                4.0
            } else {
                1.25 * m
            }
        }
    };
    let f = Frame { x0: 0.0, x1: extent, y0: 0.0, y1: extent };
    let mut out = String::new();
    header(&mut out, "wall lines");
    axes(&mut out, &f, names);
    out.push_str("<g class=\"walls\" stroke=\"#b03030\" stroke-width=\"1.5\">\n");
    for w in lines {
        let (a, b, c) = (&w.coefs[0], &w.coefs[1], &w.coefs[2]);
        let mut attrs = format!(
            r#"class="wall" data-producer="{}" data-equation="{}""#,
            esc(&w.producer.to_string()),
            esc(&linear_text(&w.coefs, &[names.0, names.1]))
        );
        if !a.is_zero() {
            write!(attrs, r#" data-s-intercept="{}""#, format_rational(&(-c / a))).unwrap();
        }
        if !b.is_zero() {
            write!(attrs, r#" data-t-intercept="{}""#, format_rational(&(-c / b))).unwrap();
        }
        writeln!(out, "<g {attrs}>").unwrap();
        if let Some((p, q)) = clip(to_f64(a), to_f64(b), to_f64(c), &f) {
            line(&mut out, &f, p, q, "");
            text(&mut out, f.px(q.0) + 4.0, f.py(q.1) - 4.0, "start", &w.producer.to_string());
        }
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// A wall ray in a rank-2 Néron–Severi plane.
pub struct Ray {
    pub direction: DivisorClass,
    pub label: String,
    pub normal: DivisorClass,
}

/// Rays through the origin, with the scanned cone drawn dashed.
pub fn ample_slice_svg(rays: &[Ray], cone: &[DivisorClass], names: (&str, &str)) -> String {
    let unit = |d: &DivisorClass| -> (f64, f64) {
        let (x, y) = (to_f64(&d.coords()[0]), to_f64(&d.coords()[1]));
        let m = x.abs().max(y.abs());
        if m == 0.0 {
            (0.0, 0.0)
        } else {
            (x / m, y / m)
        }
    };
    let pts: Vec<(f64, f64)> = rays.iter().map(|r| unit(&r.direction)).chain(cone.iter().map(unit)).collect();
    let lo = |v: f64| if v < -1e-12 { -1.15 } else { -0.15 };
    let hi = |v: f64| if v > 1e-12 { 1.15 } else { 0.15 };
    let f = Frame {
        x0: lo(pts.iter().map(|p| p.0).fold(0.0, f64::min)),
        x1: hi(pts.iter().map(|p| p.0).fold(0.0, f64::max)),
        y0: lo(pts.iter().map(|p| p.1).fold(0.0, f64::min)),
        y1: hi(pts.iter().map(|p| p.1).fold(0.0, f64::max)),
    };
    let mut out = String::new();
    header(&mut out, "wall rays in the ample cone");
    axes(&mut out, &f, names);
    out.push_str("<g class=\"cone\" stroke=\"gray\" stroke-dasharray=\"4 3\">\n");
    for c in cone {
        line(&mut out, &f, (0.0, 0.0), unit(c), &format!(r#"data-direction="{}""#, c));
    }
    out.push_str("</g>\n<g class=\"walls\" stroke=\"#3050b0\" stroke-width=\"1.5\">\n");
    for r in rays {
        let end = unit(&r.direction);
        writeln!(out, r#"<g class="wall" data-ray="{}" data-normal="{}">"#, r.direction, r.normal).unwrap();
        line(&mut out, &f, (0.0, 0.0), end, "");
        text(&mut out, f.px(end.0) + 4.0, f.py(end.1) - 4.0, "start", &r.label);
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// `2H1+H2`-style text for a class in a named basis.
pub fn named_class(d: &DivisorClass, basis: &[String]) -> String {
    let mut s = String::new();
    for (c, n) in d.coords().iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        let mag = format_rational(&c.abs());
        let term = if mag == "1" { n.clone() } else { format!("{mag}{n}") };
        if c.is_negative() {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        s.push_str(&term);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}
