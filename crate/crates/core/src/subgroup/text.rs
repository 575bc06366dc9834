//! The `subgroup v1` text block.
//!
//! ```text
//! subgroup v1
//! coset-table 2
//! 1 1 0 0
//! 0 0 1 1
//! end
//! ```
//!
//! Other tags are `element-set` (one element name per line, in index order) and
//! `generators` (one word per line). Blank lines and `#` comments are ignored.

use super::{Representation, Subgroup};
use crate::error::{Error, Result};
use crate::group::{GroupElement, MarkedGroup};

/// Numbered, non-blank, comment-free lines.
pub(crate) type Lines<'a> = std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>;

pub(crate) fn lines(text: &str) -> Lines<'_> {
    let it: Box<dyn Iterator<Item = (usize, &str)>> = Box::new(
        text.lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty()),
    );
    it.peekable()
}

pub(crate) fn expect_line<'a>(lines: &mut Lines<'a>, what: &str) -> Result<(usize, &'a str)> {
    lines
        .next()
        .ok_or_else(|| Error::parse(0, format!("unexpected end of input, expected {what}")))
}

impl Subgroup {
    pub fn to_text(&self) -> String {
        let mut out = String::from("subgroup v1\n");
        match &self.repr {
            Representation::ElementSet(e) => {
                out.push_str("element-set\n");
                for &x in e {
                    out.push_str(&self.parent.element_name(&GroupElement::Index(x)));
                    out.push('\n');
                }
            }
            Representation::CosetTable(g) => {
                out.push_str(&format!("coset-table {}\n", g.vertex_count()));
                for row in g.rows() {
                    let cells: Vec<String> = row.iter().map(|t| t.expect("complete").to_string()).collect();
                    out.push_str(&cells.join(" "));
                    out.push('\n');
                }
            }
            Representation::GeneratorList(g) => {
                out.push_str("generators\n");
                for w in g.free_basis() {
                    out.push_str(&self.parent.format_word(&w));
                    out.push('\n');
                }
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(parent: &MarkedGroup, text: &str) -> Result<Subgroup> {
        let mut it = lines(text);
        let h = read_block(parent, &mut it)?;
        if let Some((n, _)) = it.next() {
            return Err(Error::parse(n, "trailing input after `end`"));
        }
        Ok(h)
    }
}

pub(crate) fn read_block(parent: &MarkedGroup, it: &mut Lines<'_>) -> Result<Subgroup> {
    let (n, header) = expect_line(it, "`subgroup v1`")?;
    if header != "subgroup v1" {
        return Err(Error::parse(n, "expected `subgroup v1`"));
    }
    let (n, tag) = expect_line(it, "a representation tag")?;
    let mut body = Vec::new();
    loop {
        let (m, line) = expect_line(it, "`end`")?;
        if line == "end" {
            break;
        }
        body.push((m, line));
    }
    let mut parts = tag.split_whitespace();
    match parts.next() {
        Some("element-set") => {
            let group = parent.finite().ok_or(Error::FamilyMismatch)?;
            let mut elems = Vec::new();
            for (m, name) in body {
                elems.push(
                    group
                        .index_of(name)
                        .ok_or_else(|| Error::parse(m, format!("unknown element `{name}`")))?,
                );
            }
            Subgroup::from_elements(parent, &elems)
        }
        Some("coset-table") => {
            let size: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(n, "coset-table needs a size"))?;
            if body.len() != size {
                return Err(Error::parse(n, format!("expected {size} rows, got {}", body.len())));
            }
            let mut rows = Vec::new();
            for (m, line) in body {
                let row: Vec<usize> = line
                    .split_whitespace()
                    .map(|c| c.parse().map_err(|_| Error::parse(m, format!("bad coset index `{c}`"))))
                    .collect::<Result<_>>()?;
                rows.push(row);
            }
            Subgroup::from_coset_table(parent, &rows)
        }
        Some("generators") => {
            let mut gens = Vec::new();
            for (m, line) in body {
                let w = parent.parse_word(line).map_err(|e| Error::parse(m, e.to_string()))?;
                gens.push(parent.reduce_word(&w)?);
            }
            Subgroup::generated_by(parent, &gens)
        }
        _ => Err(Error::parse(n, format!("unknown representation `{tag}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures::{integers, symmetric};

    #[test]
    fn roundtrip_all_representations() {
        let s3 = symmetric(3);
        let h = Subgroup::generated_by(&s3, &[s3.parse_element("(12)").unwrap()]).unwrap();
        assert_eq!(Subgroup::from_text(&s3, &h.to_text()).unwrap(), h);

        let z = integers();
        let two = Subgroup::generated_by(&z, &[z.parse_element("t t").unwrap()]).unwrap();
        let text = two.to_text();
        assert!(text.starts_with("subgroup v1\ncoset-table 2\n"));
        assert_eq!(Subgroup::from_text(&z, &text).unwrap(), two);

        let f2 = MarkedGroup::free(2).unwrap();
        let c = Subgroup::generated_by(&f2, &[f2.parse_element("a b a^-1").unwrap()]).unwrap();
        let text = c.to_text();
        assert!(text.contains("generators\na b a^-1\n"));
        assert_eq!(Subgroup::from_text(&f2, &text).unwrap(), c);
    }

    #[test]
    fn rejects_malformed_blocks() {
        let z = integers();
        assert!(Subgroup::from_text(&z, "subgroup v2\ngenerators\nend\n").is_err());
        assert!(Subgroup::from_text(&z, "subgroup v1\ncoset-table 2\n1 1\nend\n").is_err());
        assert!(Subgroup::from_text(&z, "subgroup v1\ngenerators\nq\nend\n").is_err());
        assert!(Subgroup::from_text(&z, "subgroup v1\ngenerators\nt\n").is_err());
    }
}
