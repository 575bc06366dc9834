//! `body v1` and `measure v1` text blocks.
//!
//! ```text
//! measure v1
//! atom 1/2
//! body v1
//! dim 2
//! -1/2 0/1
//! 1/2 0/1
//! end
//! atom 1/2
//! body v1
//! dim 2
//! 0/1 -1/2
//! 0/1 1/2
//! end
//! end
//! ```
//!
//! Coordinates are rationals `p/q`; vertices may include non-extreme points, which are
//! dropped on reading.

use super::body::{BodyMeasure, ConvexBody};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational_at};
use crate::subgroup::text::{expect_line, lines, Lines};

impl ConvexBody {
    pub fn to_text(&self) -> String {
        let mut out = format!("body v1\ndim {}\n", self.dim());
        for v in self.vertices() {
            let cells: Vec<String> = v.iter().map(format_rational).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<ConvexBody> {
        let mut it = lines(text);
        let b = read_body(&mut it)?;
        if let Some((n, _)) = it.next() {
            return Err(Error::parse(n, "trailing input after `end`"));
        }
        Ok(b)
    }
}

fn read_body(it: &mut Lines<'_>) -> Result<ConvexBody> {
    let (n, header) = expect_line(it, "`body v1`")?;
    if header != "body v1" {
        return Err(Error::parse(n, format!("expected `body v1`, found `{header}`")));
    }
    let (n, dim_line) = expect_line(it, "`dim d`")?;
    let dim: usize = dim_line
        .strip_prefix("dim ")
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| Error::parse(n, "expected `dim d`"))?;
    let mut points = Vec::new();
    loop {
        let (n, line) = expect_line(it, "vertex or `end`")?;
        if line == "end" {
            break;
        }
        let p = line
            .split_whitespace()
            .map(|s| parse_rational_at(s, n))
            .collect::<Result<Vec<_>>>()?;
        if p.len() != dim {
            return Err(Error::parse(n, format!("expected {dim} coordinates, found {}", p.len())));
        }
        points.push(p);
    }
    ConvexBody::new(dim, points)
}

impl BodyMeasure {
    pub fn to_text(&self) -> String {
        let mut out = String::from("measure v1\n");
        for (b, w) in self.atoms() {
            out.push_str(&format!("atom {}\n", format_rational(w)));
            out.push_str(&b.to_text());
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<BodyMeasure> {
        let mut it = lines(text);
        let (n, header) = expect_line(&mut it, "`measure v1`")?;
        if header != "measure v1" {
            return Err(Error::parse(n, format!("expected `measure v1`, found `{header}`")));
        }
        let mut atoms = Vec::new();
        loop {
            let (n, line) = expect_line(&mut it, "`atom w` or `end`")?;
            if line == "end" {
                break;
            }
            let w = line
                .strip_prefix("atom ")
                .ok_or_else(|| Error::parse(n, "expected `atom w`"))?;
            let w = parse_rational_at(w.trim(), n)?;
            atoms.push((read_body(&mut it)?, w));
        }
        if let Some((n, _)) = it.next() {
            return Err(Error::parse(n, "trailing input after `end`"));
        }
        BodyMeasure::new(atoms)
    }
}
