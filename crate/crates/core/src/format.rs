//! Text formats for matrices, functions, tables and orbit equivalences.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use num_bigint::BigInt;

use crate::coe::{BlockCode, CoeMap, Stage};
use crate::error::{Error, Result};
use crate::locfun::LocFun;
use crate::sft::{Point, Symbol, TransitionMatrix, Word};
use crate::table::TableElement;

fn parse_err(line: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        token: token.to_string(),
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
) -> Result<(usize, Vec<&'a str>)> {
    let (n, line) = lines
        .next()
        .ok_or_else(|| parse_err(0, "", format!("missing `{keyword}` header")))?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks[0] != keyword {
        return Err(parse_err(n, toks[0], format!("expected `{keyword}` header")));
    }
    Ok((n, toks[1..].to_vec()))
}

/// Parses a word literal, checking admissibility when a matrix is given.
pub fn parse_word(a: Option<&TransitionMatrix>, line: usize, token: &str) -> Result<Word> {
    let w: Word = token.parse().map_err(|m: String| parse_err(line, token, m))?;
    if let Some(a) = a {
        for &s in w.symbols() {
            if !a.has_symbol(s) {
                return Err(parse_err(line, token, format!("symbol {s} is out of range")));
            }
        }
        if !a.is_admissible(w.symbols()) {
            return Err(parse_err(line, token, "word is not admissible"));
        }
    }
    Ok(w)
}

/// Parses a point literal `u|w`.
pub fn parse_point(a: &TransitionMatrix, token: &str) -> Result<Point> {
    Point::parse(a, token)
}

/// Reads the 0/1 grid of a matrix file without validating it.
pub fn parse_matrix_grid(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut lines = content_lines(text);
    let (hl, rest) = expect_header(&mut lines, "matrix")?;
    let [size] = rest[..] else {
        return Err(parse_err(hl, &rest.join(" "), "expected `matrix N`"));
    };
    let n: usize = size
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| parse_err(hl, size, "matrix size must be a positive integer"))?;
    let mut grid = Vec::with_capacity(n);
    for (ln, line) in lines {
        if grid.len() == n {
            return Err(parse_err(ln, line, "extra row"));
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| parse_err(ln, t, "expected an integer entry"))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(parse_err(
                ln,
                line,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        grid.push(row);
    }
    if grid.len() != n {
        return Err(parse_err(0, "", format!("expected {n} rows, found {}", grid.len())));
    }
    Ok(grid)
}

/// Parses and validates a matrix file.
pub fn parse_matrix(text: &str) -> Result<TransitionMatrix> {
    TransitionMatrix::new(&parse_matrix_grid(text)?)
}

/// Parses a function file over `a`.
pub fn parse_function(a: &TransitionMatrix, text: &str) -> Result<LocFun> {
    let mut lines = content_lines(text);
    let (hl, rest) = expect_header(&mut lines, "function")?;
    if let Some(t) = rest.first() {
        return Err(parse_err(hl, t, "unexpected token after header"));
    }
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [w, v] = toks[..] else {
            return Err(parse_err(ln, line, "expected `word integer`"));
        };
        let word = parse_word(Some(a), ln, w)?;
        let value: BigInt = v.parse().map_err(|_| parse_err(ln, v, "expected an integer"))?;
        if !seen.insert(word.clone()) {
            return Err(parse_err(ln, w, "duplicate word"));
        }
        entries.push((word, value));
    }
    LocFun::new(a, entries)
}

/// Parses a table file over `a`.
pub fn parse_table(a: &TransitionMatrix, text: &str) -> Result<TableElement> {
    let mut lines = content_lines(text);
    let (hl, rest) = expect_header(&mut lines, "table")?;
    if let Some(t) = rest.first() {
        return Err(parse_err(hl, t, "unexpected token after header"));
    }
    let mut entries = Vec::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [nu, "->", mu] = toks[..] else {
            return Err(parse_err(ln, line, "expected `word -> word`"));
        };
        entries.push((parse_word(Some(a), ln, nu)?, parse_word(Some(a), ln, mu)?));
    }
    TableElement::new(a, entries)
}

struct Tokens {
    toks: Vec<(usize, String)>,
    pos: usize,
}

impl Tokens {
    fn new(text: &str) -> Tokens {
        let mut toks = Vec::new();
        for (ln, line) in content_lines(text) {
            let spaced = line.replace('{', " { ").replace('}', " } ");
            toks.extend(spaced.split_whitespace().map(|t| (ln, t.to_string())));
        }
        Tokens { toks, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.toks.last().map_or(0, |t| t.0)
    }

    fn peek(&self) -> Option<&(usize, String)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<(usize, String)> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| {
            parse_err(
                self.last_line(),
                "",
                format!("unexpected end of input, expected {what}"),
            )
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, lit: &str) -> Result<usize> {
        let (ln, t) = self.next(&format!("`{lit}`"))?;
        if t != lit {
            return Err(parse_err(ln, &t, format!("expected `{lit}`")));
        }
        Ok(ln)
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let (ln, t) = self.next(what)?;
        t.parse()
            .ok()
            .filter(|&m| m > 0)
            .ok_or_else(|| parse_err(ln, &t, format!("expected {what}")))
    }

    fn block_map(&mut self, from: &TransitionMatrix, to: &TransitionMatrix) -> Result<HashMap<Word, Symbol>> {
        self.expect("{")?;
        let mut map = HashMap::new();
        loop {
            let (ln, t) = self.next("`}` or a window")?;
            if t == "}" {
                return Ok(map);
            }
            let w = parse_word(Some(from), ln, &t)?;
            self.expect("->")?;
            let (sl, s) = self.next("a symbol")?;
            let sym: Symbol = s
                .parse()
                .ok()
                .filter(|&v| to.has_symbol(v))
                .ok_or_else(|| parse_err(sl, &s, "expected a target symbol"))?;
            if map.insert(w, sym).is_some() {
                return Err(parse_err(ln, &t, "duplicate window"));
            }
        }
    }
}

/// Parses an orbit equivalence description; `load` resolves the file names it
/// mentions to their contents.
pub fn parse_coe_with(text: &str, mut load: impl FnMut(&str) -> std::io::Result<String>) -> Result<CoeMap> {
    let mut toks = Tokens::new(text);
    let mut read =
        |ln: usize, name: &str| load(name).map_err(|e| parse_err(ln, name, format!("cannot read file: {e}")));
    let hl = toks.expect("coe")?;
    let (al, a_name) = toks.next("source matrix file")?;
    let (bl, b_name) = toks.next("target matrix file")?;
    let a = parse_matrix(&read(al, &a_name)?).map_err(|e| parse_err(al, &a_name, e.to_string()))?;
    let b = parse_matrix(&read(bl, &b_name)?).map_err(|e| parse_err(bl, &b_name, e.to_string()))?;
    let mut stages = Vec::new();
    let mut code_seen = false;
    while toks.peek().is_some() {
        let (ln, kw) = toks.next("a stage")?;
        match kw.as_str() {
            "pre-table" | "post-table" => {
                if (kw == "pre-table") == code_seen {
                    return Err(parse_err(ln, &kw, "table stage on the wrong side of the code"));
                }
                let (fl, file) = toks.next("table file")?;
                let over = if code_seen { &b } else { &a };
                let t = parse_table(over, &read(fl, &file)?).map_err(|e| parse_err(fl, &file, e.to_string()))?;
                stages.push(Stage::Table(t));
            }
            "code" => {
                if code_seen {
                    return Err(parse_err(ln, &kw, "exactly one code stage is allowed"));
                }
                code_seen = true;
                let m = toks.number("code window")?;
                let phi = toks.block_map(&a, &b)?;
                toks.expect("inverse")?;
                let m_inv = toks.number("inverse window")?;
                let phi_inv = toks.block_map(&b, &a)?;
                let code =
                    BlockCode::new(&a, &b, m, phi, m_inv, phi_inv).map_err(|e| parse_err(ln, &kw, e.to_string()))?;
                stages.push(Stage::Code(code));
            }
            _ => return Err(parse_err(ln, &kw, "expected `pre-table`, `code` or `post-table`")),
        }
    }
    if !code_seen {
        return Err(parse_err(hl, "coe", "a code stage is required"));
    }
    CoeMap::from_chain(stages)
}

/// Parses an orbit equivalence file, resolving file names relative to its
/// directory.
pub fn parse_coe_file(path: &Path) -> Result<CoeMap> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(0, &path.display().to_string(), e.to_string()))?;
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    parse_coe_with(&text, |name| std::fs::read_to_string(dir.join(name)))
}
