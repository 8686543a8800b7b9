//! Text format for Bell expressions.
//!
//! ```text
//! # Mermin
//! name mermin;
//! polytope L3;
//! bound 2;
//! +1 A1B0C0 +1 A0B1C0 +1 A0B0C1 -1 A1B1C1
//! ---
//! name next; ...
//! ```
//!
//! Statements end with `;`, terms are `<signed coefficient> <term>` pairs,
//! `#` starts a comment and a line holding only `---` separates expressions.
//! Coefficients and bounds accept the same constant expressions as state
//! parameters (without spaces).

use std::fmt::{self, Write as _};

use ghzsym_core::bell::{BellExpression, Polytope, Term};

use crate::constexpr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetError {
    /// 1-based position of the offending token.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for FacetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for FacetError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> FacetError {
        FacetError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Semi,
}

/// Splits `text` into sections of positioned tokens.
fn tokenize(text: &str) -> Vec<Vec<(Tok<'_>, Pos)>> {
    fn flush<'a>(
        line: &'a str,
        number: usize,
        start: &mut Option<usize>,
        end: usize,
        out: &mut Vec<(Tok<'a>, Pos)>,
    ) {
        if let Some(s) = start.take() {
            let column = line[..s].chars().count() + 1;
            out.push((
                Tok::Word(&line[s..end]),
                Pos {
                    line: number,
                    column,
                },
            ));
        }
    }

    let mut sections = vec![Vec::new()];
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim() == "---" {
            sections.push(Vec::new());
            continue;
        }
        let number = index + 1;
        let current = sections.last_mut().expect("at least one section");
        let mut start: Option<usize> = None;
        for (i, c) in line.char_indices() {
            if c.is_whitespace() {
                flush(line, number, &mut start, i, current);
            } else if c == ';' {
                flush(line, number, &mut start, i, current);
                let column = line[..i].chars().count() + 1;
                current.push((
                    Tok::Semi,
                    Pos {
                        line: number,
                        column,
                    },
                ));
            } else if start.is_none() {
                start = Some(i);
            }
        }
        flush(line, number, &mut start, line.len(), current);
    }
    sections.retain(|s| !s.is_empty());
    sections
}

/// Parses every expression in `text`.
pub fn parse_all(text: &str) -> Result<Vec<BellExpression>, FacetError> {
    let sections = tokenize(text);
    if sections.is_empty() {
        return Err(FacetError {
            line: 1,
            column: 1,
            message: "no expression found".into(),
        });
    }
    sections.iter().map(|s| parse_section(s)).collect()
}

/// Parses text holding exactly one expression.
pub fn parse(text: &str) -> Result<BellExpression, FacetError> {
    let mut all = parse_all(text)?;
    if all.len() != 1 {
        return Err(FacetError {
            line: 1,
            column: 1,
            message: format!("expected one expression, found {}", all.len()),
        });
    }
    Ok(all.pop().expect("one expression"))
}

fn parse_section(tokens: &[(Tok<'_>, Pos)]) -> Result<BellExpression, FacetError> {
    let section_start = tokens[0].1;
    let mut name: Option<String> = None;
    let mut polytope: Option<Polytope> = None;
    let mut bound: Option<(f64, Pos)> = None;
    let mut terms: Vec<(Term, f64)> = Vec::new();
    let mut seen = [false; 27];

    let mut i = 0;
    // Collects the words of a statement up to its `;`.
    let statement = |i: &mut usize, keyword_pos: Pos| -> Result<Vec<(&str, Pos)>, FacetError> {
        let mut words = Vec::new();
        loop {
            match tokens.get(*i) {
                Some((Tok::Word(w), p)) => words.push((*w, *p)),
                Some((Tok::Semi, _)) => {
                    *i += 1;
                    return Ok(words);
                }
                None => return Err(keyword_pos.error("statement is missing its terminating `;`")),
            }
            *i += 1;
        }
    };

    while i < tokens.len() {
        let (tok, pos) = &tokens[i];
        let pos = *pos;
        let word = match tok {
            Tok::Semi => {
                // Stray separators between terms are harmless.
                i += 1;
                continue;
            }
            Tok::Word(w) => *w,
        };
        i += 1;
        match word {
            "name" => {
                let words = statement(&mut i, pos)?;
                if name.is_some() {
                    return Err(pos.error("duplicate name statement"));
                }
                if words.is_empty() {
                    return Err(pos.error("empty name"));
                }
                let joined: Vec<&str> = words.iter().map(|w| w.0).collect();
                name = Some(joined.join(" "));
            }
            "polytope" => {
                let words = statement(&mut i, pos)?;
                if polytope.is_some() {
                    return Err(pos.error("duplicate polytope statement"));
                }
                let [(tag, tag_pos)] = words[..] else {
                    return Err(pos.error("polytope takes exactly one tag"));
                };
                polytope = Some(
                    tag.parse()
                        .map_err(|_| tag_pos.error("unknown polytope tag"))?,
                );
            }
            "bound" => {
                let words = statement(&mut i, pos)?;
                if bound.is_some() {
                    return Err(pos.error("duplicate bound statement"));
                }
                let [(value, value_pos)] = words[..] else {
                    return Err(pos.error("bound takes exactly one number"));
                };
                let v = constexpr::eval(value).map_err(|e| value_pos.error(e.message))?;
                if v == 0.0 {
                    return Err(value_pos.error("zero bound"));
                }
                if v < 0.0 {
                    return Err(value_pos.error("negative bound"));
                }
                bound = Some((v, value_pos));
            }
            coeff_text => {
                let coeff = constexpr::eval(coeff_text).map_err(|_| {
                    pos.error(format!(
                        "expected a statement or a signed coefficient, found `{coeff_text}`"
                    ))
                })?;
                let Some((Tok::Word(term_text), term_pos)) = tokens.get(i) else {
                    return Err(pos.error("coefficient is not followed by a term"));
                };
                i += 1;
                let term: Term = term_text
                    .parse()
                    .map_err(|_| term_pos.error(format!("malformed term `{term_text}`")))?;
                if std::mem::replace(&mut seen[term.index()], true) {
                    return Err(term_pos.error(format!("duplicate term {term}")));
                }
                terms.push((term, coeff));
            }
        }
    }

    let name = name.ok_or_else(|| section_start.error("missing name statement"))?;
    let polytope = polytope.ok_or_else(|| section_start.error("missing polytope statement"))?;
    let (bound, _) = bound.ok_or_else(|| section_start.error("missing bound statement"))?;
    BellExpression::new(name, terms, bound, polytope)
        .map_err(|e| section_start.error(e.to_string()))
}

/// Serializes one expression; `parse(&render(e))` reproduces `e` exactly.
pub fn render(expr: &BellExpression) -> String {
    let mut out = String::new();
    writeln!(out, "name {};", expr.name()).unwrap();
    writeln!(out, "polytope {};", expr.polytope()).unwrap();
    writeln!(out, "bound {};", expr.bound()).unwrap();
    for (term, coeff) in expr.terms() {
        if coeff.is_sign_negative() {
            writeln!(out, "{coeff} {term}").unwrap();
        } else {
            writeln!(out, "+{coeff} {term}").unwrap();
        }
    }
    out
}

/// Serializes several expressions separated by `---`.
pub fn render_all(exprs: &[BellExpression]) -> String {
    exprs.iter().map(render).collect::<Vec<_>>().join("---\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghzsym_core::bell::{builtin, Builtin};
    use proptest::prelude::*;

    const SLIWA15: &str = "name sliwa15; polytope L3; bound 4;
        +2 A0B0 +2 A1B0 +1 A0C0 +1 A1C0 -2 B0C0 +1 A0B1C0 -1 A1B1C0
        +1 A0C1 +1 A1C1 -2 B0C1 -1 A0B1C1 +1 A1B1C1";

    #[test]
    fn mermin_one_liner() {
        let e =
            parse("name m; polytope L3; bound 2; +1 A1B0C0 +1 A0B1C0 +1 A0B0C1 -1 A1B1C1").unwrap();
        assert!(e.same_inequality(&builtin("mermin").unwrap()));
        assert_eq!(e.name(), "m");
    }

    #[test]
    fn sliwa_text() {
        assert_eq!(parse(SLIWA15).unwrap(), builtin("sliwa15").unwrap());
    }

    #[test]
    fn builtins_round_trip() {
        for b in Builtin::ALL {
            let e = b.expression();
            assert_eq!(parse(&render(&e)).unwrap(), e);
        }
        let all: Vec<_> = Builtin::ALL.iter().map(|b| b.expression()).collect();
        assert_eq!(parse_all(&render_all(&all)).unwrap(), all);
    }

    #[test]
    fn comments_and_separators() {
        let text = "# header\nname a; # trailing\npolytope NS2;\nbound 3/2;\n+1 A0\n---\n\nname b; polytope L3; bound 1; -0.5 B1C1;\n";
        let all = parse_all(text).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].bound(), 1.5);
        assert_eq!(all[1].coefficient("B1C1".parse().unwrap()), -0.5);
        assert!(parse(text).is_err());
    }

    fn err(text: &str) -> FacetError {
        parse(text).unwrap_err()
    }

    #[test]
    fn errors() {
        let e = err("name z; polytope L3; bound 0; +1 A0");
        assert_eq!(
            (e.line, e.column, e.message.as_str()),
            (1, 28, "zero bound")
        );
        let e = err("name z;\npolytope L4;\nbound 1; +1 A0");
        assert_eq!(
            (e.line, e.column, e.message.as_str()),
            (2, 10, "unknown polytope tag")
        );
        let e = err("name z; polytope L3; bound 1;\n+1 A0B1 -1 A0B1");
        assert_eq!((e.line, e.column), (2, 12));
        assert!(e.message.contains("duplicate term"));
        let e = err("name z; polytope L3; bound 1; +1 B0A1");
        assert!(e.message.contains("malformed term"));
        let e = err("name z; polytope L3; bound 1; A0");
        assert_eq!(e.column, 31);
        assert!(err("name z; polytope L3; +1 A0")
            .message
            .contains("missing bound"));
        assert!(err("name z; polytope L3; bound 1; +1")
            .message
            .contains("not followed"));
        assert!(err("name z; polytope L3; bound 1")
            .message
            .contains("terminating"));
        assert!(err("name z; polytope L3; bound 1; 0 A0")
            .message
            .contains("no nonzero"));
        assert!(err("").message.contains("no expression"));
    }

    prop_compose! {
        fn any_expression()(
            name in "[a-z][a-z0-9_-]{0,11}",
            coeffs in proptest::collection::vec(
                prop_oneof![Just(0.0), -10.0f64..10.0, (-5i32..=5).prop_map(f64::from)], 27),
            bound in 1e-3f64..1e3,
            ns2 in any::<bool>(),
        ) -> Option<BellExpression> {
            let terms = Term::all().map(|t| (t, coeffs[t.index()]));
            let polytope = if ns2 { Polytope::Ns2 } else { Polytope::L3 };
            BellExpression::new(name, terms, bound, polytope).ok()
        }
    }

    proptest! {
        #[test]
        fn render_parse_is_identity(expr in any_expression()) {
            if let Some(expr) = expr {
                prop_assert_eq!(parse(&render(&expr)).unwrap(), expr);
            }
        }
    }
}
