//! The textual input language: presentations
//! (`semiring over Zv; gens X contracting, Y; rel -1 = X + Y;`),
//! elements (`X v (Y + -1) v 2X`, with `+` binding tighter than `v`),
//! and t-adic polynomials (`x^2 + 2*t*x + t^2`, `x + y + t`).
//! Parse errors report line and column.

use crate::error::{Error, Result};
use crate::geometry::Rat;
use crate::presentation::{Generator, Presentation, RelKind, Relation, Sort, TropPoly};
use crate::semifield::SemifieldTag;
use crate::tropicalize::{TPoly, TTerm};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(Rat),
    NegInf,
    Join,
    Plus,
    Eq,
    Leq,
    Comma,
    Semi,
    LParen,
    RParen,
    Caret,
    Star,
    Minus,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let err = |line: usize, col: usize, what: &str| Error::Parse {
        line,
        col,
        expected: what.to_string(),
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok| toks.push(Spanned { tok, line: l0, col: c0 });
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            ' ' | '\t' | '\r' => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            ',' => push(Tok::Comma),
            ';' => push(Tok::Semi),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            '^' => push(Tok::Caret),
            '*' => push(Tok::Star),
            '+' => push(Tok::Plus),
            '=' => push(Tok::Eq),
            '<' => {
                if chars.get(i + 1) == Some(&'=') {
                    push(Tok::Leq);
                    i += 1;
                    col += 1;
                } else {
                    return Err(err(line, col, "'<='"));
                }
            }
            '-' => {
                // '-inf', a negative number, or a minus sign
                if chars[i + 1..].starts_with(&['i', 'n', 'f']) {
                    push(Tok::NegInf);
                    i += 3;
                    col += 3;
                } else if chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    let (r, used) = lex_number(&chars[i..])
                        .ok_or_else(|| err(line, col, "a number after '-'"))?;
                    push(Tok::Number(r));
                    i += used - 1;
                    col += used - 1;
                } else {
                    push(Tok::Minus);
                }
            }
            d if d.is_ascii_digit() => {
                let (r, used) =
                    lex_number(&chars[i..]).ok_or_else(|| err(line, col, "a number"))?;
                push(Tok::Number(r));
                i += used - 1;
                col += used - 1;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                if word == "v" {
                    push(Tok::Join);
                } else {
                    push(Tok::Ident(word));
                }
                col += j - i - 1;
                i = j - 1;
            }
            other => return Err(err(line, col, &format!("a token (found {other:?})"))),
        }
        i += 1;
        col += 1;
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end_line: line,
        end_col: col,
    })
}

fn lex_number(chars: &[char]) -> Option<(Rat, usize)> {
    let mut i = 0;
    let neg = chars[0] == '-';
    if neg {
        i = 1;
    }
    let start = i;
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    if i == start {
        return None;
    }
    let p: i128 = chars[start..i].iter().collect::<String>().parse().ok()?;
    let mut q: i128 = 1;
    if chars.get(i) == Some(&'/') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
        i += 1;
        let qstart = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        q = chars[qstart..i].iter().collect::<String>().parse().ok()?;
        if q == 0 {
            return None;
        }
    }
    let val = Rat::new(if neg { -p } else { p }, q);
    Some((val, i))
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        let (line, col) = self.here();
        match self.next() {
            Some(s) if &s.tok == tok => Ok(()),
            _ => Err(Error::Parse {
                line,
                col,
                expected: what.to_string(),
            }),
        }
    }

    fn error(&self, what: &str) -> Error {
        let (line, col) = self.here();
        Error::Parse {
            line,
            col,
            expected: what.to_string(),
        }
    }
}

/// Parses a presentation source:
/// `semiring over (B|Zv|Qv); gens X contracting, Y; rel EXPR (=|<=) EXPR;`
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut lx = lex(text)?;
    match lx.next() {
        Some(Spanned { tok: Tok::Ident(w), .. }) if w == "semiring" => {}
        _ => return Err(lx.error("'semiring'")),
    }
    match lx.next() {
        Some(Spanned { tok: Tok::Ident(w), .. }) if w == "over" => {}
        _ => return Err(lx.error("'over'")),
    }
    let base = match lx.next() {
        Some(Spanned { tok: Tok::Ident(w), .. }) => match w.as_str() {
            "B" => SemifieldTag::Bool,
            "Zv" => SemifieldTag::Int,
            "Qv" => SemifieldTag::Rat,
            _ => return Err(lx.error("one of B, Zv, Qv")),
        },
        _ => return Err(lx.error("one of B, Zv, Qv")),
    };
    lx.expect(&Tok::Semi, "';' after the header")?;
    let mut gens: Vec<Generator> = Vec::new();
    let mut pending_relations: Vec<(String, RelKind, String)> = Vec::new();
    // first pass collects generator names so element expressions can be
    // parsed against the final presentation
    let mut raw_rels: Vec<(usize, usize)> = Vec::new();
    while let Some(tok) = lx.peek().cloned() {
        match tok {
            Tok::Ident(w) if w == "gens" => {
                lx.next();
                loop {
                    let name = match lx.next() {
                        Some(Spanned { tok: Tok::Ident(n), .. }) => n,
                        _ => return Err(lx.error("a generator name")),
                    };
                    let mut sort = Sort::Free;
                    if let Some(Tok::Ident(w)) = lx.peek() {
                        if w == "contracting" {
                            sort = Sort::Contracting;
                            lx.next();
                        }
                    }
                    gens.push(Generator { name, sort });
                    match lx.peek() {
                        Some(Tok::Comma) => {
                            lx.next();
                        }
                        Some(Tok::Semi) => {
                            lx.next();
                            break;
                        }
                        _ => return Err(lx.error("',' or ';' in the generator list")),
                    }
                }
            }
            Tok::Ident(w) if w == "rel" => {
                lx.next();
                let start = lx.pos;
                // scan to the relator
                let mut depth = 0usize;
                let mut kind = None;
                while let Some(t) = lx.peek() {
                    match t {
                        Tok::LParen => depth += 1,
                        Tok::RParen => depth = depth.saturating_sub(1),
                        Tok::Eq if depth == 0 => {
                            kind = Some(RelKind::Eq);
                            break;
                        }
                        Tok::Leq if depth == 0 => {
                            kind = Some(RelKind::Leq);
                            break;
                        }
                        Tok::Semi => break,
                        _ => {}
                    }
                    lx.next();
                }
                let Some(kind) = kind else {
                    return Err(lx.error("'=' or '<=' in the relation"));
                };
                let lhs_range = (start, lx.pos);
                lx.next(); // relator
                let rhs_start = lx.pos;
                while let Some(t) = lx.peek() {
                    if *t == Tok::Semi {
                        break;
                    }
                    lx.next();
                }
                let rhs_range = (rhs_start, lx.pos);
                lx.expect(&Tok::Semi, "';' after the relation")?;
                pending_relations.push((
                    format!("{}..{}", lhs_range.0, lhs_range.1),
                    kind,
                    format!("{}..{}", rhs_range.0, rhs_range.1),
                ));
                raw_rels.push(lhs_range);
                raw_rels.push(rhs_range);
            }
            Tok::Semi => {
                lx.next();
            }
            _ => return Err(lx.error("'gens', 'rel' or end of input")),
        }
    }
    // build a draft presentation to resolve element expressions
    let draft = Presentation::new(base, gens.clone(), vec![])?;
    let mut relations = Vec::new();
    for (i, (_, kind, _)) in pending_relations.iter().enumerate() {
        let (ls, le) = raw_rels[2 * i];
        let (rs, re) = raw_rels[2 * i + 1];
        let at = |idx: usize| {
            lx.toks
                .get(idx)
                .map(|s| (s.line, s.col))
                .unwrap_or((lx.end_line, lx.end_col))
        };
        let lhs = parse_expr_tokens(&draft, &lx.toks[ls..le], at(le))?;
        let rhs = parse_expr_tokens(&draft, &lx.toks[rs..re], at(re))?;
        relations.push(Relation { kind: *kind, lhs, rhs });
    }
    Presentation::new(base, gens, relations)
}

/// Parses an element expression against a presentation.
pub fn parse_element(pres: &Presentation, text: &str) -> Result<TropPoly> {
    let lx = lex(text)?;
    let end = (lx.end_line, lx.end_col);
    parse_expr_tokens(pres, &lx.toks, end)
}

fn parse_expr_tokens(pres: &Presentation, toks: &[Spanned], end: (usize, usize)) -> Result<TropPoly> {
    let mut lx = Lexer {
        toks: toks.to_vec(),
        pos: 0,
        end_line: end.0,
        end_col: end.1,
    };
    let e = parse_join(pres, &mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.error("end of expression"));
    }
    Ok(e)
}

fn parse_join(pres: &Presentation, lx: &mut Lexer) -> Result<TropPoly> {
    let mut acc = parse_sum(pres, lx)?;
    while lx.peek() == Some(&Tok::Join) {
        lx.next();
        let rhs = parse_sum(pres, lx)?;
        acc = acc.join(&rhs);
    }
    Ok(acc)
}

fn parse_sum(pres: &Presentation, lx: &mut Lexer) -> Result<TropPoly> {
    let mut acc = parse_atom(pres, lx)?;
    while lx.peek() == Some(&Tok::Plus) {
        lx.next();
        let rhs = parse_atom(pres, lx)?;
        acc = acc.plus(&rhs);
    }
    Ok(acc)
}

fn parse_atom(pres: &Presentation, lx: &mut Lexer) -> Result<TropPoly> {
    let n = pres.ngens();
    match lx.peek().cloned() {
        Some(Tok::NegInf) => {
            lx.next();
            Ok(TropPoly::neg_inf())
        }
        Some(Tok::Number(r)) => {
            lx.next();
            // `2X` scales the following generator
            if let Some(Tok::Ident(name)) = lx.peek().cloned() {
                if r.is_integer() && *r.numer() >= 0 {
                    lx.next();
                    let g = pres.gen_poly(&name)?;
                    return Ok(g.times(*r.numer() as u32, n));
                }
            }
            Ok(TropPoly::constant(n, r))
        }
        Some(Tok::Ident(name)) => {
            lx.next();
            pres.gen_poly(&name)
        }
        Some(Tok::LParen) => {
            lx.next();
            let e = parse_join(pres, lx)?;
            lx.expect(&Tok::RParen, "')'")?;
            Ok(e)
        }
        _ => Err(lx.error("'-inf', a number, a generator or '('")),
    }
}

/// Parses a t-adic polynomial such as `x + y + t` or
/// `x^2 + 2*t*x + t^2` (the `*` is optional). Variables are every
/// identifier other than `t`, in order of first appearance unless
/// `vars` pins them.
pub fn parse_tpoly(text: &str, vars: Option<Vec<String>>) -> Result<TPoly> {
    let mut lx = lex(text)?;
    let mut var_names: Vec<String> = vars.unwrap_or_default();
    let pinned = !var_names.is_empty();
    #[derive(Default, Clone)]
    struct RawTerm {
        coeff: Rat,
        tpow: u32,
        exps: Vec<(String, u32)>,
    }
    let mut terms: Vec<RawTerm> = Vec::new();
    let mut sign = Rat::from_integer(1);
    loop {
        // one term: factors separated by optional '*'
        let mut raw = RawTerm {
            coeff: sign.clone(),
            ..Default::default()
        };
        let mut any = false;
        loop {
            match lx.peek().cloned() {
                Some(Tok::Number(r)) => {
                    lx.next();
                    raw.coeff = &raw.coeff * r;
                    any = true;
                }
                Some(Tok::Ident(name)) => {
                    lx.next();
                    let mut power = 1u32;
                    if lx.peek() == Some(&Tok::Caret) {
                        lx.next();
                        match lx.next() {
                            Some(Spanned { tok: Tok::Number(r), .. }) if r.is_integer() => {
                                power = *r.numer() as u32;
                            }
                            _ => return Err(lx.error("an exponent after '^'")),
                        }
                    }
                    if name == "t" {
                        raw.tpow += power;
                    } else {
                        if pinned && !var_names.contains(&name) {
                            return Err(lx.error(&format!("one of the variables {var_names:?}")));
                        }
                        if !var_names.contains(&name) {
                            var_names.push(name.clone());
                        }
                        raw.exps.push((name, power));
                    }
                    any = true;
                }
                Some(Tok::Star) => {
                    lx.next();
                }
                _ => break,
            }
        }
        if !any {
            return Err(lx.error("a term"));
        }
        terms.push(raw);
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                sign = Rat::from_integer(1);
            }
            Some(Tok::Minus) => {
                lx.next();
                sign = Rat::from_integer(-1);
            }
            None => break,
            _ => return Err(lx.error("'+', '-' or end of polynomial")),
        }
    }
    var_names.sort();
    let tterms: Vec<TTerm> = terms
        .into_iter()
        .map(|raw| {
            let mut exps = vec![0u32; var_names.len()];
            for (name, p) in raw.exps {
                let idx = var_names.iter().position(|v| *v == name).unwrap();
                exps[idx] += p;
            }
            TTerm {
                exps,
                tpow: raw.tpow,
                coeff: raw.coeff,
            }
        })
        .collect();
    // merge duplicate (exps, tpow) keys by adding coefficients
    let mut merged: Vec<TTerm> = Vec::new();
    for t in tterms {
        if let Some(u) = merged
            .iter_mut()
            .find(|u| u.exps == t.exps && u.tpow == t.tpow)
        {
            u.coeff += t.coeff;
        } else {
            merged.push(t);
        }
    }
    merged.retain(|t| !t.coeff.is_zero());
    if merged.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    TPoly::new(var_names, merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat_int;

    #[test]
    fn parses_presentations() {
        let p = parse_presentation("semiring over Zv; gens X contracting;").unwrap();
        assert_eq!(p.ngens(), 1);
        assert_eq!(p.gens()[0].sort, Sort::Contracting);
        let q = parse_presentation(
            "semiring over Zv; gens X contracting, Y contracting; rel -1 = X + Y;",
        )
        .unwrap();
        assert_eq!(q.relations().len(), 1);
        assert_eq!(crate::spectrum::enumerate_points(&q).unwrap().len(), 3);
    }

    #[test]
    fn parse_error_positions() {
        let err = parse_presentation("semiring over Zv; gens X contracting; rel X =;");
        match err {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col >= 45, "column was {col}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_presentation("semiring over Fv;"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn parses_elements() {
        let p = parse_presentation("semiring over Zv; gens X contracting, Y contracting;").unwrap();
        let e = parse_element(&p, "X v (Y + -1) v 2X").unwrap();
        assert_eq!(e.terms().len(), 3);
        let c = parse_element(&p, "-inf").unwrap();
        assert!(c.is_neg_inf());
        let r = parse_element(&p, "-3/2").unwrap();
        assert_eq!(r.terms()[0].coeff, Rat::new(-3, 2));
        assert!(parse_element(&p, "Z").is_err());
        // plus binds tighter than join: X + Y v 0 = (X+Y) v 0
        let tight = parse_element(&p, "X + Y v 0").unwrap();
        assert_eq!(tight.terms().len(), 2);
    }

    #[test]
    fn parses_tpolys() {
        let f = parse_tpoly("x + y + t", None).unwrap();
        assert_eq!(f.vars, vec!["x", "y"]);
        assert_eq!(f.terms.len(), 3);
        let g = parse_tpoly("x^2 + 2*t*x + t^2", None).unwrap();
        assert_eq!(g.terms.len(), 3);
        assert!(g
            .terms
            .iter()
            .any(|t| t.exps == vec![1] && t.tpow == 1 && t.coeff == rat_int(2)));
        // adjacent juxtaposition without stars
        let h = parse_tpoly("x y - t^3", None).unwrap();
        assert_eq!(h.terms.len(), 2);
        assert!(h.terms.iter().any(|t| t.coeff == rat_int(-1) && t.tpow == 3));
        assert!(parse_tpoly("x - x", None).is_err());
    }
}
