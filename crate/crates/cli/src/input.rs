//! Surface loading and the textual forms of classes on the command line.

use std::collections::BTreeMap;
use std::path::Path;

use stabwalls::presets::{self, PRESET_NAMES};
use stabwalls::rational::{parse_rational, Rational};
use stabwalls::{ChernCharacter, DivisorClass, Error, Result, SurfaceLattice};

/// A loaded surface plus the names usable in divisor expressions.
pub struct Context {
    pub surface: SurfaceLattice,
    pub names: BTreeMap<String, DivisorClass>,
    pub preset: Option<presets::Preset>,
}

impl Context {
    pub fn load(preset: Option<&str>, surface: Option<&Path>) -> Result<Context> {
        match (preset, surface) {
            (Some(_), Some(_)) => Err(Error::Parse("give either --preset or --surface, not both".into())),
            (None, None) => Err(Error::Parse("a surface is required: --preset NAME or --surface FILE".into())),
            (Some(name), None) => {
                let p = presets::preset(name).ok_or_else(|| {
                    Error::Parse(format!("unknown preset {name:?}; expected one of {}", PRESET_NAMES.join(", ")))
                })?;
                let mut names: BTreeMap<String, DivisorClass> =
                    p.classes.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                names.insert("K".into(), p.surface.canonical().clone());
                Ok(Context { surface: p.surface.clone(), names, preset: Some(p) })
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
                let surface = SurfaceLattice::from_json(&text)?;
                let names = [("K".to_string(), surface.canonical().clone())].into_iter().collect();
                Ok(Context { surface, names, preset: None })
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.surface.ns_rank()
    }

    /// `"2,1"` (coordinates) or an expression in named classes such as
    /// `"2H1+H2"`, `"h-e"`, `"1/2K"`.
    pub fn divisor(&self, text: &str) -> Result<DivisorClass> {
        let t = text.trim();
        if t.chars().any(|c| c.is_ascii_alphabetic()) {
            return self.divisor_expr(t);
        }
        let fields = split_fields(t);
        if fields.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: fields.len() });
        }
        let coords = fields
            .iter()
            .enumerate()
            .map(|(i, (col, f))| field_rational(text, i, *col, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass::new(coords))
    }

    fn divisor_expr(&self, t: &str) -> Result<DivisorClass> {
        let mut acc = DivisorClass::zero(self.rank());
        let mut rest = t;
        let mut col = 1;
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if col == 1 => (1, rest),
                _ => return Err(Error::Parse(format!("{t:?}: expected '+' or '-' at column {col}"))),
            };
            let skip = rest.len() - body.len();
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            let name_at = term.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(|| {
                Error::Parse(format!("{t:?}: term {term:?} at column {} has no class name", col + skip))
            })?;
            let (coef, name) = term.split_at(name_at);
            let coef = match coef.trim() {
                "" => Rational::from_integer(1.into()),
                c => parse_rational(c)
                    .map_err(|_| Error::Parse(format!("{t:?}: bad coefficient {c:?} at column {}", col + skip)))?,
            };
            let class = self.names.get(name.trim()).ok_or_else(|| {
                let known: Vec<&str> = self.names.keys().map(String::as_str).collect();
                Error::Parse(format!(
                    "{t:?}: unknown class {name:?} at column {}; known: {}",
                    col + skip + name_at,
                    known.join(", ")
                ))
            })?;
            let k = coef * Rational::from_integer(sign.into());
            acc = &acc + &class.scale(&k);
            col += skip + end;
            rest = &body[end..];
        }
        Ok(acc)
    }

    /// `"r,c1_1,...,c1_n,ch2"`; `"r,0,ch2"` stands for `c1 = 0`.
    pub fn character(&self, text: &str) -> Result<ChernCharacter> {
        let fields = split_fields(text);
        let n = self.rank();
        let parse = |i: usize| field_rational(text, i, fields[i].0, fields[i].1);
        if fields.len() == n + 2 {
            let r = parse(0)?;
            let c1 = (1..=n).map(parse).collect::<Result<Vec<_>>>()?;
            let ch2 = parse(n + 1)?;
            return Ok(ChernCharacter::new(r, DivisorClass::new(c1), ch2));
        }
        if fields.len() == 3 && fields[1].1.trim() == "0" {
            return Ok(ChernCharacter::new(parse(0)?, DivisorClass::zero(n), parse(2)?));
        }
        for i in 0..fields.len() {
            parse(i)?;
        }
        Err(Error::Parse(format!(
            "{text:?}: a character needs {} comma-separated fields (r, {n} c1 coordinates, ch2) or the form r,0,ch2; found {}",
            n + 2,
            fields.len()
        )))
    }

    pub fn rationals(&self, text: &str, expected: usize) -> Result<Vec<Rational>> {
        let fields = split_fields(text);
        if fields.len() != expected {
            return Err(Error::BadParamCount { expected, found: fields.len() });
        }
        fields.iter().enumerate().map(|(i, (col, f))| field_rational(text, i, *col, f)).collect()
    }
}

/// Comma-separated fields with their 1-based starting columns.
fn split_fields(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == ',' {
            out.push((start + 1, &text[start..i]));
            start = i + 1;
        }
    }
    out.push((start + 1, &text[start..]));
    out
}

fn field_rational(text: &str, index: usize, col: usize, field: &str) -> Result<Rational> {
    parse_rational(field).map_err(|_| {
        Error::Parse(format!("{text:?}: field {} at column {col} is not a rational: {:?}", index + 1, field))
    })
}

pub fn parse_rational_arg(text: &str) -> Result<Rational> {
    parse_rational(text)
}
