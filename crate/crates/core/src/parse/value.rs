//! Parsers for attribute value microsyntaxes: numbers, lengths, colors,
//! transform lists, viewBox, and polyline/polygon point lists.

use crate::geometry::{AffineTransform, Point};
use crate::model::{Rgb, ViewBox};

/// Strict scalar: the whole (trimmed) string must be one finite number.
pub(crate) fn parse_number(s: &str) -> Option<f64> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    // Reject "inf"/"nan" spellings that f64::from_str would accept.
    if t.bytes().any(|b| b.is_ascii_alphabetic() && !matches!(b, b'e' | b'E')) {
        return None;
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Length: a number with an optional `px` suffix. Other units are not
/// supported and yield `None`.
pub(crate) fn parse_length(s: &str) -> Option<f64> {
    let t = s.trim();
    let t = t.strip_suffix("px").unwrap_or(t);
    parse_number(t)
}

/// Whitespace/comma separated numbers.
pub(crate) fn parse_number_list(s: &str) -> Option<Vec<f64>> {
    let mut out = Vec::new();
    for tok in s.split(|c: char| c.is_ascii_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        out.push(parse_number(tok)?);
    }
    Some(out)
}

pub(crate) fn parse_view_box(s: &str) -> Option<ViewBox> {
    let nums = parse_number_list(s)?;
    if nums.len() != 4 || nums[2] <= 0.0 || nums[3] <= 0.0 {
        return None;
    }
    Some(ViewBox { min_x: nums[0], min_y: nums[1], width: nums[2], height: nums[3] })
}

/// Point list for polyline/polygon. An odd trailing number is dropped.
pub(crate) fn parse_points(s: &str) -> Option<(Vec<Point>, bool)> {
    let nums = parse_number_list(s)?;
    let odd = nums.len() % 2 == 1;
    let points = nums.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect();
    Some((points, odd))
}

const KEYWORD_COLORS: [(&str, Rgb); 16] = [
    ("black", Rgb { r: 0, g: 0, b: 0 }),
    ("silver", Rgb { r: 192, g: 192, b: 192 }),
    ("gray", Rgb { r: 128, g: 128, b: 128 }),
    ("white", Rgb { r: 255, g: 255, b: 255 }),
    ("maroon", Rgb { r: 128, g: 0, b: 0 }),
    ("red", Rgb { r: 255, g: 0, b: 0 }),
    ("purple", Rgb { r: 128, g: 0, b: 128 }),
    ("fuchsia", Rgb { r: 255, g: 0, b: 255 }),
    ("green", Rgb { r: 0, g: 128, b: 0 }),
    ("lime", Rgb { r: 0, g: 255, b: 0 }),
    ("olive", Rgb { r: 128, g: 128, b: 0 }),
    ("yellow", Rgb { r: 255, g: 255, b: 0 }),
    ("navy", Rgb { r: 0, g: 0, b: 128 }),
    ("blue", Rgb { r: 0, g: 0, b: 255 }),
    ("teal", Rgb { r: 0, g: 128, b: 128 }),
    ("aqua", Rgb { r: 0, g: 255, b: 255 }),
];

/// `Ok(None)` means `none`; `Err(())` is an unrecognized color, which the
/// caller records as a warning and replaces with black.
pub(crate) fn parse_color(s: &str) -> Result<Option<Rgb>, ()> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    if let Some(hex) = t.strip_prefix('#') {
        return parse_hex_color(hex).map(Some).ok_or(());
    }
    let lower = t.to_ascii_lowercase();
    if let Some(body) = lower.strip_prefix("rgb(").and_then(|r| r.strip_suffix(')')) {
        return parse_rgb_args(body).map(Some).ok_or(());
    }
    for (name, color) in KEYWORD_COLORS {
        if lower == name {
            return Ok(Some(color));
        }
    }
    Err(())
}

fn parse_hex_color(hex: &str) -> Option<Rgb> {
    let hex = hex.trim();
    match hex.len() {
        3 => {
            let v: Vec<u8> = hex
                .chars()
                .map(|c| c.to_digit(16).map(|d| (d * 17) as u8))
                .collect::<Option<_>>()?;
            Some(Rgb { r: v[0], g: v[1], b: v[2] })
        }
        6 => {
            let r = u8::from_str_radix(&hex[0..2], 16).ok()?;
            let g = u8::from_str_radix(&hex[2..4], 16).ok()?;
            let b = u8::from_str_radix(&hex[4..6], 16).ok()?;
            Some(Rgb { r, g, b })
        }
        _ => None,
    }
}

fn parse_rgb_args(body: &str) -> Option<Rgb> {
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return None;
    }
    let mut vals = [0u8; 3];
    for (i, part) in parts.iter().enumerate() {
        let v = if let Some(pct) = part.strip_suffix('%') {
            parse_number(pct)? * 255.0 / 100.0
        } else {
            parse_number(part)?
        };
        vals[i] = v.round().clamp(0.0, 255.0) as u8;
    }
    Some(Rgb { r: vals[0], g: vals[1], b: vals[2] })
}

/// Parses a transform list (`translate(..) rotate(..) ...`) into a single
/// matrix, applying functions left to right as SVG does.
pub(crate) fn parse_transform_list(s: &str) -> Result<AffineTransform, String> {
    let mut total = AffineTransform::IDENTITY;
    let mut rest = s.trim_start();
    while !rest.is_empty() {
        let open = rest.find('(').ok_or("expected '(' in transform")?;
        let name = rest[..open].trim();
        let close = rest[open..].find(')').ok_or("unterminated transform function")? + open;
        let args = parse_number_list(&rest[open + 1..close])
            .ok_or_else(|| format!("bad arguments for {name}"))?;
        let t = transform_fn(name, &args)?;
        total = total.mul(&t);
        rest = rest[close + 1..].trim_start();
        rest = rest.strip_prefix(',').map(str::trim_start).unwrap_or(rest);
    }
    Ok(total)
}

fn transform_fn(name: &str, args: &[f64]) -> Result<AffineTransform, String> {
    let t = match (name, args.len()) {
        ("matrix", 6) => AffineTransform {
            a: args[0],
            b: args[1],
            c: args[2],
            d: args[3],
            e: args[4],
            f: args[5],
        },
        ("translate", 1) => AffineTransform::translate(args[0], 0.0),
        ("translate", 2) => AffineTransform::translate(args[0], args[1]),
        ("scale", 1) => AffineTransform::scale(args[0], args[0]),
        ("scale", 2) => AffineTransform::scale(args[0], args[1]),
        ("rotate", 1) => AffineTransform::rotate_deg(args[0]),
        ("rotate", 3) => AffineTransform::rotate_deg_about(args[0], args[1], args[2]),
        ("skewX", 1) => AffineTransform {
            c: args[0].to_radians().tan(),
            ..AffineTransform::IDENTITY
        },
        ("skewY", 1) => AffineTransform {
            b: args[0].to_radians().tan(),
            ..AffineTransform::IDENTITY
        },
        _ => return Err(format!("unknown transform `{name}` with {} args", args.len())),
    };
    Ok(t)
}

/// Splits a `style` attribute into (property, value) pairs.
pub(crate) fn parse_style(s: &str) -> Vec<(&str, &str)> {
    s.split(';')
        .filter_map(|decl| {
            let (k, v) = decl.split_once(':')?;
            let k = k.trim();
            let v = v.trim();
            (!k.is_empty() && !v.is_empty()).then_some((k, v))
        })
        .collect()
}
