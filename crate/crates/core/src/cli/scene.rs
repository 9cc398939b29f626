//! Scene files.
//!
//! One directive per line, `key: value`; `#` starts a comment. Blank lines
//! are ignored and directives may come in any order.
//!
//! ```text
//! resolution: 8                  # quadrature resolution m
//! degree: 30                     # basis degree N
//! positive: true                 # reject complex or negative masses
//! window: -3.5-1.5i 3.5+1.5i     # lower-left and upper-right corners
//! basis: monomials center 0
//! basis: laurent center 0 poles 0 0.5i
//! measure: disk label d1 center -2 radius 1 density 1
//! measure: atom at 0 mass 1
//! K: disk center -2 radius 1
//! ```
//!
//! After `measure:` comes a kind and then `key value` pairs in any order:
//!
//! | kind      | keys                                   | weight             |
//! |-----------|----------------------------------------|--------------------|
//! | `atom`    | `at`                                   | `mass`             |
//! | `disk`    | `center`, `radius`                     | `density`          |
//! | `annulus` | `center`, `inner`, `outer`             | `density`          |
//! | `rect`    | `min`, `max`                           | `density`          |
//! | `circle`  | `center`, `radius`                     | `density` or `mass`|
//! | `arc`     | `center`, `radius`, `from`, `to`       | `density`          |
//! | `segment` | `from`, `to` (points)                  | `density`          |
//!
//! `label` is optional and defaults to the kind followed by the component's
//! position, as in `disk2`. Densities are numbers or double-quoted
//! expressions in `x`, `y`, `r` and `pi`; complex numbers are written `a`,
//! `bi` or `a+bi` without spaces. `K:` lines take the kinds `disk`,
//! `annulus`, `rect`, `segment` and `circle` with the same shape keys.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::abpe::{FunctionBasis, KPiece};
use crate::error::{Error, Result};
use crate::measure::{AreaShape, ArcShape, Density, MeasureComponent, PlanarMeasure};

/// Largest accepted scene text.
pub const MAX_SCENE_BYTES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub enum BasisSpec {
    Monomials { center: Complex64 },
    Laurent { center: Complex64, poles: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    Atom { at: Complex64 },
    Disk { center: Complex64, radius: f64 },
    Annulus { center: Complex64, inner: f64, outer: f64 },
    Rect { min: Complex64, max: Complex64 },
    Circle { center: Complex64, radius: f64 },
    Arc { center: Complex64, radius: f64, from: f64, to: f64 },
    Segment { from: Complex64, to: Complex64 },
}

impl ShapeSpec {
    fn kind(&self) -> &'static str {
        match self {
            ShapeSpec::Atom { .. } => "atom",
            ShapeSpec::Disk { .. } => "disk",
            ShapeSpec::Annulus { .. } => "annulus",
            ShapeSpec::Rect { .. } => "rect",
            ShapeSpec::Circle { .. } => "circle",
            ShapeSpec::Arc { .. } => "arc",
            ShapeSpec::Segment { .. } => "segment",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Mass(Complex64),
    Density(Complex64),
    /// Source of a real density expression.
    Expr(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSpec {
    pub label: String,
    pub shape: ShapeSpec,
    pub weight: Weight,
}

impl ComponentSpec {
    pub fn to_component(&self) -> Result<MeasureComponent> {
        let density = || -> Result<Density> {
            match &self.weight {
                Weight::Density(d) => Ok(Density::Constant(*d)),
                Weight::Expr(src) => Density::expr(src).map_err(Error::InvalidInput),
                Weight::Mass(_) => Err(Error::invalid(format!("`{}`: a {} takes a density, not a mass", self.label, self.shape.kind()))),
            }
        };
        let label = self.label.as_str();
        Ok(match self.shape {
            ShapeSpec::Atom { at } => match self.weight {
                Weight::Mass(m) => {
                    let mut c = MeasureComponent::atom(label, at, 0.0);
                    if let crate::measure::ComponentKind::Atom { mass, .. } = &mut c.kind {
                        *mass = m;
                    }
                    c
                }
                _ => return Err(Error::invalid(format!("`{label}`: an atom takes a mass"))),
            },
            ShapeSpec::Disk { center, radius } => MeasureComponent::area(label, AreaShape::Disk { center, radius }, density()?),
            ShapeSpec::Annulus { center, inner, outer } => {
                MeasureComponent::area(label, AreaShape::Annulus { center, inner, outer }, density()?)
            }
            ShapeSpec::Rect { min, max } => MeasureComponent::area(label, AreaShape::Rect { min, max }, density()?),
            ShapeSpec::Circle { center, radius } => {
                let density = match self.weight {
                    Weight::Mass(m) => Density::Constant(m / (std::f64::consts::TAU * radius)),
                    _ => density()?,
                };
                MeasureComponent::arc(label, ArcShape::circle(center, radius), density)
            }
            ShapeSpec::Arc { center, radius, from, to } => MeasureComponent::arc(label, ArcShape::arc(center, radius, from, to), density()?),
            ShapeSpec::Segment { from, to } => MeasureComponent::arc(label, ArcShape::segment(from, to), density()?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub resolution: usize,
    pub degree: u32,
    pub positive: bool,
    pub window: Option<(Complex64, Complex64)>,
    pub basis: Option<BasisSpec>,
    pub components: Vec<ComponentSpec>,
    pub k: Vec<KPiece>,
}

impl Default for Scene {
    fn default() -> Self {
        Scene {
            resolution: 8,
            degree: 30,
            positive: true,
            window: None,
            basis: None,
            components: Vec::new(),
            k: Vec::new(),
        }
    }
}

impl Scene {
    pub fn measure(&self) -> Result<PlanarMeasure> {
        let comps = self.components.iter().map(ComponentSpec::to_component).collect::<Result<Vec<_>>>()?;
        if self.positive {
            PlanarMeasure::positive(comps, self.resolution)
        } else {
            PlanarMeasure::new(comps, self.resolution)
        }
    }

    /// The declared basis, or monomials about the center of the support's
    /// bounding box.
    pub fn basis(&self) -> Result<FunctionBasis> {
        Ok(match &self.basis {
            Some(BasisSpec::Monomials { center }) => FunctionBasis::monomials(*center, self.degree),
            Some(BasisSpec::Laurent { center, poles }) => FunctionBasis::laurent(*center, self.degree, poles),
            None => {
                let center = self.measure()?.bounding_box().map_or(Complex64::new(0.0, 0.0), |(a, b)| (a + b) * 0.5);
                FunctionBasis::monomials(center, self.degree)
            }
        })
    }

    /// The declared window, or the bounding box of the measure and `K`
    /// padded by a quarter of its size plus `1/4`.
    pub fn window(&self) -> Result<(Complex64, Complex64)> {
        if let Some(w) = self.window {
            return Ok(w);
        }
        let mut boxes: Vec<(Complex64, Complex64)> = self.k.iter().map(KPiece::bounding_box).collect();
        boxes.extend(self.measure()?.bounding_box());
        let Some(&first) = boxes.first() else {
            return Err(Error::invalid("scene has neither components nor K pieces to size a window"));
        };
        let (mut lo, mut hi) = first;
        for (a, b) in boxes {
            lo = Complex64::new(lo.re.min(a.re), lo.im.min(a.im));
            hi = Complex64::new(hi.re.max(b.re), hi.im.max(b.im));
        }
        let pad = (hi - lo) * 0.25 + Complex64::new(0.25, 0.25);
        Ok((lo - pad, hi + pad))
    }

    /// Canonical text; parsing it gives back an equal scene.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "resolution: {}", self.resolution);
        let _ = writeln!(s, "degree: {}", self.degree);
        let _ = writeln!(s, "positive: {}", self.positive);
        if let Some((a, b)) = self.window {
            let _ = writeln!(s, "window: {} {}", fmt_complex(a), fmt_complex(b));
        }
        match &self.basis {
            Some(BasisSpec::Monomials { center }) => {
                let _ = writeln!(s, "basis: monomials center {}", fmt_complex(*center));
            }
            Some(BasisSpec::Laurent { center, poles }) => {
                let poles: Vec<String> = poles.iter().map(|p| fmt_complex(*p)).collect();
                let _ = writeln!(s, "basis: laurent center {} poles {}", fmt_complex(*center), poles.join(" "));
            }
            None => {}
        }
        for c in &self.components {
            let _ = write!(s, "measure: {} label {} ", c.shape.kind(), c.label);
            s.push_str(&shape_keys(&c.shape));
            match &c.weight {
                Weight::Mass(m) => {
                    let _ = writeln!(s, " mass {}", fmt_complex(*m));
                }
                Weight::Density(d) => {
                    let _ = writeln!(s, " density {}", fmt_complex(*d));
                }
                Weight::Expr(e) => {
                    let _ = writeln!(s, " density \"{e}\"");
                }
            }
        }
        for piece in &self.k {
            let (kind, shape) = match *piece {
                KPiece::Disk { center, radius } => ("disk", ShapeSpec::Disk { center, radius }),
                KPiece::Annulus { center, inner, outer } => ("annulus", ShapeSpec::Annulus { center, inner, outer }),
                KPiece::Rect { min, max } => ("rect", ShapeSpec::Rect { min, max }),
                KPiece::Segment { a, b } => ("segment", ShapeSpec::Segment { from: a, to: b }),
                KPiece::Circle { center, radius } => ("circle", ShapeSpec::Circle { center, radius }),
            };
            let _ = writeln!(s, "K: {kind} {}", shape_keys(&shape));
        }
        s
    }
}

fn shape_keys(shape: &ShapeSpec) -> String {
    let c = |z: Complex64| fmt_complex(z);
    match *shape {
        ShapeSpec::Atom { at } => format!("at {}", c(at)),
        ShapeSpec::Disk { center, radius } | ShapeSpec::Circle { center, radius } => format!("center {} radius {radius}", c(center)),
        ShapeSpec::Annulus { center, inner, outer } => format!("center {} inner {inner} outer {outer}", c(center)),
        ShapeSpec::Rect { min, max } => format!("min {} max {}", c(min), c(max)),
        ShapeSpec::Arc { center, radius, from, to } => format!("center {} radius {radius} from {from} to {to}", c(center)),
        ShapeSpec::Segment { from, to } => format!("from {} to {}", c(from), c(to)),
    }
}

/// `a`, `bi` or `a+bi`, with the shortest digits that read back exactly.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        format!("{}", z.re)
    } else if z.re == 0.0 && z.re.is_sign_positive() {
        format!("{}i", z.im)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Reads `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, exponents like `1e-3`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let real = |t: &str| -> Option<f64> {
        let v: f64 = t.parse().ok()?;
        v.is_finite().then_some(v)
    };
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => real(t),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return real(s).map(|re| Complex64::new(re, 0.0));
    };
    // The split is the last sign that does not follow an exponent marker.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Some(Complex64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    quoted: bool,
    column: usize,
}

fn tokenize(line: &str, line_no: usize, offset: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(i, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        let column = offset + line[..i].chars().count() + 1;
        if ch == '"' {
            chars.next();
            let mut text = String::new();
            let mut closed = false;
            for (_, c) in chars.by_ref() {
                if c == '"' {
                    closed = true;
                    break;
                }
                text.push(c);
            }
            if !closed {
                return Err(Error::Parse {
                    line: line_no,
                    column,
                    message: "unterminated quoted expression".into(),
                });
            }
            out.push(Token { text, quoted: true, column });
        } else {
            let mut text = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                text.push(c);
                chars.next();
            }
            out.push(Token { text, quoted: false, column });
        }
    }
    Ok(out)
}

struct Line<'a> {
    no: usize,
    tokens: &'a [Token],
    end_column: usize,
}

impl Line<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.no,
            column,
            message: message.into(),
        }
    }

    fn complex(&self, t: &Token) -> Result<Complex64> {
        if t.quoted {
            return Err(self.err(t.column, format!("expected a number, found quoted `{}`", t.text)));
        }
        parse_complex(&t.text).ok_or_else(|| self.err(t.column, format!("malformed number `{}`", t.text)))
    }

    fn real(&self, t: &Token) -> Result<f64> {
        let z = self.complex(t)?;
        if z.im != 0.0 {
            return Err(self.err(t.column, format!("expected a real number, found `{}`", t.text)));
        }
        Ok(z.re)
    }

    /// `key value` pairs after the kind, each key at most once.
    fn pairs(&self, allowed: &[&str]) -> Result<HashMap<String, Token>> {
        let mut map: HashMap<String, Token> = HashMap::new();
        let mut it = self.tokens.iter();
        while let Some(key) = it.next() {
            if key.quoted || !allowed.contains(&key.text.as_str()) {
                return Err(self.err(key.column, format!("unexpected `{}`; expected one of {}", key.text, allowed.join(", "))));
            }
            let Some(value) = it.next() else {
                return Err(self.err(self.end_column, format!("`{}` needs a value", key.text)));
            };
            if map.insert(key.text.clone(), value.clone()).is_some() {
                return Err(self.err(key.column, format!("`{}` given twice", key.text)));
            }
        }
        Ok(map)
    }

    fn take<'m>(&self, map: &'m HashMap<String, Token>, key: &str) -> Result<&'m Token> {
        map.get(key).ok_or_else(|| self.err(self.end_column, format!("missing `{key}`")))
    }
}

/// Parses scene text; errors carry the line and column.
pub fn parse_scene(text: &str) -> Result<Scene> {
    if text.len() > MAX_SCENE_BYTES {
        return Err(Error::invalid(format!("scene text is {} bytes; the limit is {MAX_SCENE_BYTES}", text.len())));
    }
    let mut scene = Scene::default();
    let mut seen: HashMap<&'static str, usize> = HashMap::new();
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut pending: Vec<(usize, usize, Option<String>, ShapeSpec, Weight)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(Error::Parse {
                line: no,
                column: col,
                message: "expected `key: value`".into(),
            });
        };
        let key = content[..colon].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        let value_offset = content[..=colon].chars().count();
        let tokens = tokenize(&content[colon + 1..], no, value_offset)?;
        let line = Line {
            no,
            tokens: &tokens,
            end_column: content.trim_end().chars().count() + 1,
        };
        let single = |name: &'static str, seen: &mut HashMap<&'static str, usize>| -> Result<()> {
            if let Some(prev) = seen.insert(name, no) {
                return Err(line.err(key_col, format!("`{name}` already set on line {prev}")));
            }
            Ok(())
        };
        let one = |line: &Line| -> Result<Token> {
            match line.tokens {
                [t] => Ok(t.clone()),
                [] => Err(line.err(line.end_column, "missing value")),
                [_, t, ..] => Err(line.err(t.column, format!("unexpected `{}`", t.text))),
            }
        };
        match key {
            "resolution" => {
                single("resolution", &mut seen)?;
                let t = one(&line)?;
                scene.resolution = match t.text.parse::<usize>() {
                    Ok(m) if m >= 1 => m,
                    _ => return Err(line.err(t.column, format!("resolution must be a positive integer, found `{}`", t.text))),
                };
            }
            "degree" => {
                single("degree", &mut seen)?;
                let t = one(&line)?;
                scene.degree = t
                    .text
                    .parse::<u32>()
                    .map_err(|_| line.err(t.column, format!("degree must be a nonnegative integer, found `{}`", t.text)))?;
            }
            "positive" => {
                single("positive", &mut seen)?;
                let t = one(&line)?;
                scene.positive = match t.text.as_str() {
                    "true" => true,
                    "false" => false,
                    other => return Err(line.err(t.column, format!("expected true or false, found `{other}`"))),
                };
            }
            "window" => {
                single("window", &mut seen)?;
                let [a, b] = tokens.as_slice() else {
                    return Err(line.err(line.end_column, "window takes two corners"));
                };
                let (lo, hi) = (line.complex(a)?, line.complex(b)?);
                if !(hi.re > lo.re && hi.im > lo.im) {
                    return Err(line.err(b.column, "the second corner must lie above and to the right of the first"));
                }
                scene.window = Some((lo, hi));
            }
            "basis" => {
                single("basis", &mut seen)?;
                let Some((kind, rest)) = tokens.split_first() else {
                    return Err(line.err(line.end_column, "missing basis kind"));
                };
                let rest_line = Line { tokens: rest, ..line };
                scene.basis = Some(match kind.text.as_str() {
                    "monomials" => {
                        let map = rest_line.pairs(&["center"])?;
                        BasisSpec::Monomials {
                            center: rest_line.complex(rest_line.take(&map, "center")?)?,
                        }
                    }
                    "laurent" => {
                        let (center_tok, after) = match rest {
                            [k, v, after @ ..] if k.text == "center" => (v, after),
                            _ => return Err(rest_line.err(kind.column, "laurent basis reads `center Z poles Z...`")),
                        };
                        let poles = match after {
                            [k, ps @ ..] if k.text == "poles" && !ps.is_empty() => ps.iter().map(|p| rest_line.complex(p)).collect::<Result<Vec<_>>>()?,
                            _ => return Err(rest_line.err(center_tok.column, "laurent basis needs `poles` followed by at least one point")),
                        };
                        BasisSpec::Laurent {
                            center: rest_line.complex(center_tok)?,
                            poles,
                        }
                    }
                    other => return Err(line.err(kind.column, format!("unknown basis `{other}`; expected monomials or laurent"))),
                });
            }
            "measure" => {
                let (label, shape, weight) = parse_component(&line)?;
                pending.push((no, key_col, label, shape, weight));
            }
            "K" => scene.k.push(parse_k(&line)?),
            other => return Err(line.err(key_col, format!("unknown directive `{other}`"))),
        }
    }
    for (position, (no, col, label, shape, weight)) in pending.into_iter().enumerate() {
        let label = label.unwrap_or_else(|| format!("{}{}", shape.kind(), position + 1));
        if let Some(prev) = labels.insert(label.clone(), no) {
            return Err(Error::Parse {
                line: no,
                column: col,
                message: format!("duplicate label `{label}` (first used on line {prev})"),
            });
        }
        let spec = ComponentSpec { label, shape, weight };
        // Shape errors are reported against the line that declared them.
        let at_line = |e: Error| Error::Parse {
            line: no,
            column: col,
            message: match e {
                Error::InvalidInput(m) => m,
                other => other.to_string(),
            },
        };
        let comp = spec.to_component().map_err(at_line)?;
        let check = if scene.positive {
            PlanarMeasure::positive(vec![comp], 1)
        } else {
            PlanarMeasure::new(vec![comp], 1)
        };
        check.map_err(at_line)?;
        scene.components.push(spec);
    }
    Ok(scene)
}

fn parse_component(line: &Line) -> Result<(Option<String>, ShapeSpec, Weight)> {
    let Some((kind, rest)) = line.tokens.split_first() else {
        return Err(line.err(line.end_column, "missing component kind"));
    };
    let rest_line = Line { tokens: rest, ..*line };
    let keys: &[&str] = match kind.text.as_str() {
        "atom" => &["label", "at", "mass"],
        "disk" => &["label", "center", "radius", "density"],
        "annulus" => &["label", "center", "inner", "outer", "density"],
        "rect" => &["label", "min", "max", "density"],
        "circle" => &["label", "center", "radius", "density", "mass"],
        "arc" => &["label", "center", "radius", "from", "to", "density"],
        "segment" => &["label", "from", "to", "density"],
        other => {
            return Err(line.err(
                kind.column,
                format!("unknown kind `{other}`; expected atom, disk, annulus, rect, circle, arc or segment"),
            ))
        }
    };
    let map = rest_line.pairs(keys)?;
    let label = match map.get("label") {
        Some(t) if t.quoted || t.text.is_empty() || !t.text.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') => {
            return Err(line.err(t.column, format!("labels use letters, digits, `_` and `-`, found `{}`", t.text)));
        }
        Some(t) => Some(t.text.clone()),
        None => None,
    };
    let shape = shape_from(&rest_line, &kind.text, &map)?;
    let weight = match (map.get("mass"), map.get("density")) {
        (Some(m), None) => Weight::Mass(rest_line.complex(m)?),
        (None, Some(d)) if d.quoted => {
            crate::measure::DensityExpr::parse(&d.text).map_err(|e| line.err(d.column, e))?;
            Weight::Expr(d.text.clone())
        }
        (None, Some(d)) => Weight::Density(rest_line.complex(d)?),
        (Some(m), Some(_)) => return Err(line.err(m.column, "give either a mass or a density")),
        (None, None) => {
            let want = if kind.text == "atom" { "mass" } else { "density" };
            return Err(line.err(line.end_column, format!("missing `{want}`")));
        }
    };
    Ok((label, shape, weight))
}

fn shape_from(line: &Line, kind: &str, map: &HashMap<String, Token>) -> Result<ShapeSpec> {
    let z = |k: &str| line.take(map, k).and_then(|t| line.complex(t));
    let x = |k: &str| line.take(map, k).and_then(|t| line.real(t));
    Ok(match kind {
        "atom" => ShapeSpec::Atom { at: z("at")? },
        "disk" => ShapeSpec::Disk {
            center: z("center")?,
            radius: x("radius")?,
        },
        "annulus" => ShapeSpec::Annulus {
            center: z("center")?,
            inner: x("inner")?,
            outer: x("outer")?,
        },
        "rect" => ShapeSpec::Rect { min: z("min")?, max: z("max")? },
        "circle" => ShapeSpec::Circle {
            center: z("center")?,
            radius: x("radius")?,
        },
        "arc" => ShapeSpec::Arc {
            center: z("center")?,
            radius: x("radius")?,
            from: x("from")?,
            to: x("to")?,
        },
        "segment" => ShapeSpec::Segment { from: z("from")?, to: z("to")? },
        _ => unreachable!("kind checked by the caller"),
    })
}

fn parse_k(line: &Line) -> Result<KPiece> {
    let Some((kind, rest)) = line.tokens.split_first() else {
        return Err(line.err(line.end_column, "missing K kind"));
    };
    let rest_line = Line { tokens: rest, ..*line };
    let keys: &[&str] = match kind.text.as_str() {
        "disk" | "circle" => &["center", "radius"],
        "annulus" => &["center", "inner", "outer"],
        "rect" => &["min", "max"],
        "segment" => &["from", "to"],
        other => return Err(line.err(kind.column, format!("unknown K kind `{other}`; expected disk, annulus, rect, segment or circle"))),
    };
    let map = rest_line.pairs(keys)?;
    let piece = match shape_from(&rest_line, &kind.text, &map)? {
        ShapeSpec::Disk { center, radius } => KPiece::Disk { center, radius },
        ShapeSpec::Circle { center, radius } => KPiece::Circle { center, radius },
        ShapeSpec::Annulus { center, inner, outer } => KPiece::Annulus { center, inner, outer },
        ShapeSpec::Rect { min, max } => KPiece::Rect { min, max },
        ShapeSpec::Segment { from, to } => KPiece::Segment { a: from, b: to },
        _ => unreachable!("K kinds are shapes"),
    };
    let ok = match piece {
        KPiece::Disk { radius, .. } | KPiece::Circle { radius, .. } => radius > 0.0,
        KPiece::Annulus { inner, outer, .. } => inner > 0.0 && outer > inner,
        KPiece::Rect { min, max } => max.re > min.re && max.im > min.im,
        KPiece::Segment { a, b } => a != b,
    };
    if !ok {
        return Err(line.err(kind.column, format!("degenerate K {}", kind.text)));
    }
    Ok(piece)
}
