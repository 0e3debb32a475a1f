//! Sectioned plain-text presentations of structures.
//!
//! ```text
//! [generators]
//! x : A
//! u : E
//! [derivation]
//! x = u
//! [pairing]
//! u, v = 1 ox 1
//! [bracket]
//! u, v = x ox u
//! [options]
//! kind = dcd
//! ```

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::dcd::DcdStructure;
use crate::diffalg::{DerivationTable, LambdaPoly};
use crate::double_bracket::{Convention, DoubleBracketTable};
use crate::dpva::LambdaBracketTable;
use crate::error::Error;
use crate::ncpoly::{GenSym, NCPoly, Sort, TensorPoly};

use super::expr::{parse_expr, Val};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    DoublePoisson,
    Dpva,
    Dcd,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::DoublePoisson => "double-poisson",
            Kind::Dpva => "dpva",
            Kind::Dcd => "dcd",
        }
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Kind, String> {
        match s {
            "double-poisson" => Ok(Kind::DoublePoisson),
            "dpva" => Ok(Kind::Dpva),
            "dcd" => Ok(Kind::Dcd),
            _ => Err(format!("unknown kind `{}`", s)),
        }
    }
}

pub fn parse_convention(s: &str) -> Result<Convention, String> {
    match s {
        "paper" => Ok(Convention::Paper),
        "vdb" => Ok(Convention::Vdb),
        _ => Err(format!("unknown convention `{}` (expected paper or vdb)", s)),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub graded: Option<bool>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub lambda_cap: Option<u32>,
    pub n: Option<usize>,
    pub convention: Option<Convention>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub kind: Kind,
    pub gens: Vec<GenSym>,
    pub derivation: Vec<(GenSym, NCPoly)>,
    pub pairing: Vec<(GenSym, GenSym, TensorPoly)>,
    pub bracket: Vec<(GenSym, GenSym, LambdaPoly)>,
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Generators,
    Derivation,
    Pairing,
    Bracket,
    Options,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.no, col, msg: msg.into() })
    }

    /// Column (1-based) of a substring of this line.
    fn col_of(&self, part: &str) -> usize {
        let offset = part.as_ptr() as usize - self.text.as_ptr() as usize;
        self.text[..offset].chars().count() + 1
    }
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap_or("")
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut section = Section::None;
    let mut gens: Vec<GenSym> = Vec::new();
    let mut raw: Vec<(Section, Line)> = Vec::new();
    let mut options = Options::default();
    let mut kind: Option<Kind> = None;
    let mut seen_opts: Vec<String> = Vec::new();

    for (idx, full) in text.lines().enumerate() {
        let line = Line { no: idx + 1, text: full };
        let body = strip_comment(full).trim();
        if body.is_empty() {
            continue;
        }
        if body.starts_with('[') {
            section = match body {
                "[generators]" => Section::Generators,
                "[derivation]" => Section::Derivation,
                "[pairing]" => Section::Pairing,
                "[bracket]" => Section::Bracket,
                "[options]" => Section::Options,
                _ => return line.err(line.col_of(body), format!("unknown section {}", body)),
            };
            continue;
        }
        match section {
            Section::None => return line.err(line.col_of(body), "entry outside of any section"),
            Section::Generators => {
                let Some((name, rest)) = body.split_once(':') else {
                    return line.err(line.col_of(body), "expected `name : A` or `name : E`");
                };
                let name = name.trim();
                if name.is_empty()
                    || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
                    || !name.chars().next().is_some_and(|c| c.is_alphabetic())
                    || ["d", "ox", "lambda"].contains(&name)
                {
                    return line.err(line.col_of(body), format!("invalid generator name `{}`", name));
                }
                let mut words = rest.split_whitespace();
                let sort = match words.next() {
                    Some("A") => Sort::A,
                    Some("E") => Sort::E,
                    other => return line.err(line.col_of(rest), format!("unknown sort {:?}", other.unwrap_or(""))),
                };
                if let Some(w) = words.next() {
                    if w.parse::<u32>().ok() != Some(sort.base_weight()) {
                        return line.err(line.col_of(w), format!("sort mismatch: {} has weight {}", sort, sort.base_weight()));
                    }
                }
                if let Some(extra) = words.next() {
                    return line.err(line.col_of(extra), "trailing input");
                }
                if gens.iter().any(|g| g.name == name) {
                    return line.err(line.col_of(name), format!("generator `{}` declared twice", name));
                }
                gens.push(GenSym::new(name, sort));
            }
            Section::Options => {
                let Some((key, value)) = body.split_once('=') else {
                    return line.err(line.col_of(body), "expected `key = value`");
                };
                let (key, value) = (key.trim(), value.trim());
                if seen_opts.iter().any(|k| k == key) {
                    return line.err(line.col_of(key), format!("duplicate option `{}`", key));
                }
                seen_opts.push(key.to_string());
                let vcol = line.col_of(value);
                let bad = |e: String| ParseError { line: line.no, col: vcol, msg: e };
                match key {
                    "kind" => kind = Some(value.parse().map_err(bad)?),
                    "graded" => options.graded = Some(value.parse().map_err(|_| bad("expected true or false".into()))?),
                    "samples" => options.samples = Some(value.parse().map_err(|_| bad("expected a count".into()))?),
                    "seed" => options.seed = Some(value.parse().map_err(|_| bad("expected an integer seed".into()))?),
                    "lambda_cap" => options.lambda_cap = Some(value.parse().map_err(|_| bad("expected a degree".into()))?),
                    "N" => options.n = Some(value.parse().map_err(|_| bad("expected a matrix size".into()))?),
                    "convention" => options.convention = Some(parse_convention(value).map_err(bad)?),
                    _ => return line.err(line.col_of(key), format!("unknown option `{}`", key)),
                }
            }
            s => raw.push((s, line)),
        }
    }
    let kind = kind.ok_or(ParseError { line: 0, col: 0, msg: "missing `kind` in [options]".into() })?;
    let lookup = |name: &str| gens.iter().find(|g| g.name == name).copied();

    let mut pres = Presentation { kind, gens: gens.clone(), derivation: Vec::new(), pairing: Vec::new(), bracket: Vec::new(), options };
    let mut der = DerivationTable::new();
    for (s, line) in raw.iter().filter(|(s, _)| *s == Section::Derivation) {
        let _ = s;
        let body = strip_comment(line.text);
        let Some((key, value)) = body.split_once('=') else {
            return line.err(line.col_of(body.trim()), "expected `generator = expression`");
        };
        let g = key_gen(line, key.trim(), &lookup, Some(Sort::A))?;
        if pres.derivation.iter().any(|(h, _)| *h == g) {
            return line.err(line.col_of(key.trim()), format!("duplicate derivation entry for `{}`", g));
        }
        let p = expr(line, value, &lookup, &DerivationTable::new())?;
        let vcol = line.col_of(value);
        let p = p.into_poly().or_else(|m| line.err(vcol, m))?;
        der.set(g, p.clone()).or_else(|e| line.err(vcol, e.to_string()))?;
        pres.derivation.push((g, p));
    }
    for (s, line) in raw.iter().filter(|(s, _)| *s != Section::Derivation) {
        let body = strip_comment(line.text);
        let Some((keys, value)) = body.split_once('=') else {
            return line.err(line.col_of(body.trim()), "expected `a, b = expression`");
        };
        let Some((k1, k2)) = keys.split_once(',') else {
            return line.err(line.col_of(keys.trim()), "expected two generators separated by `,`");
        };
        let want = match (kind, s) {
            (Kind::DoublePoisson, Section::Bracket) => Some(Sort::A),
            (Kind::Dcd, _) => Some(Sort::E),
            (Kind::Dpva, Section::Bracket) => None,
            _ => return line.err(1, format!("a {} presentation has no such table", kind.name())),
        };
        let a = key_gen(line, k1.trim(), &lookup, want)?;
        let b = key_gen(line, k2.trim(), &lookup, want)?;
        let vcol = line.col_of(value);
        let v = expr(line, value, &lookup, &der)?;
        if *s == Section::Pairing {
            if pres.pairing.iter().any(|(x, y, _)| (*x, *y) == (a, b)) {
                return line.err(line.col_of(keys.trim()), format!("duplicate table entry ({}, {})", a, b));
            }
            let t = v.into_lambda().and_then(|l| l.as_constant().ok_or("lambda is not allowed here".into()));
            pres.pairing.push((a, b, t.or_else(|m| line.err(vcol, m))?));
        } else {
            if pres.bracket.iter().any(|(x, y, _)| (*x, *y) == (a, b)) {
                return line.err(line.col_of(keys.trim()), format!("duplicate table entry ({}, {})", a, b));
            }
            let l = v.into_lambda().or_else(|m| line.err(vcol, m))?;
            if kind != Kind::Dpva && l.as_constant().is_none() {
                return line.err(vcol, "lambda is only allowed in dpva tables");
            }
            pres.bracket.push((a, b, l));
        }
    }
    // Sort and weight checks happen in the engine constructors.
    let lines: Vec<usize> = raw.iter().filter(|(s, _)| *s != Section::Derivation).map(|(_, l)| l.no).collect();
    validate(&pres, &lines)?;
    Ok(pres)
}

fn key_gen(line: &Line, name: &str, lookup: &dyn Fn(&str) -> Option<GenSym>, want: Option<Sort>) -> Result<GenSym, ParseError> {
    let col = line.col_of(name);
    let Some(g) = lookup(name) else {
        return line.err(col, format!("unknown generator `{}`", name));
    };
    if let Some(s) = want {
        if g.sort != s {
            return line.err(col, format!("sort mismatch: `{}` is {} but this table needs {}", name, g.sort, s));
        }
    }
    Ok(g)
}

fn expr(line: &Line, src: &str, lookup: &dyn Fn(&str) -> Option<GenSym>, der: &DerivationTable) -> Result<Val, ParseError> {
    let base = line.col_of(src);
    parse_expr(src, lookup, der).map_err(|e| ParseError { line: line.no, col: base + e.col - 1, msg: e.msg })
}

fn validate(p: &Presentation, lines: &[usize]) -> Result<(), ParseError> {
    let at = |k: usize, e: Error| ParseError { line: lines.get(k).copied().unwrap_or(0), col: 1, msg: e.to_string() };
    match p.kind {
        Kind::DoublePoisson => {
            if let Some(g) = p.gens.iter().find(|g| g.sort == Sort::E) {
                return Err(ParseError { line: 0, col: 0, msg: format!("sort mismatch: double-poisson presentations have no E-generator `{}`", g) });
            }
            if !p.derivation.is_empty() {
                return Err(ParseError { line: 0, col: 0, msg: "double-poisson presentations take no derivation".into() });
            }
            let mut t = DoubleBracketTable::new(&p.gens).map_err(|e| at(0, e))?;
            for (k, (a, b, v)) in p.bracket.iter().enumerate() {
                t.set(*a, *b, v.coeff([0, 0])).map_err(|e| at(k, e))?;
            }
        }
        Kind::Dpva => {
            let mut t = LambdaBracketTable::new(&p.gens, derivation_table(p).map_err(|e| at(0, e))?).map_err(|e| at(0, e))?;
            if let Some(c) = p.options.lambda_cap {
                t.lambda_cap = c;
            }
            for (k, (a, b, v)) in p.bracket.iter().enumerate() {
                t.set(*a, *b, v.clone()).map_err(|e| at(k, e))?;
            }
        }
        Kind::Dcd => {
            let (a_gens, e_gens) = split_gens(p);
            let mut s = DcdStructure::new(&a_gens, &e_gens, derivation_table(p).map_err(|e| at(0, e))?).map_err(|e| at(0, e))?;
            for (k, (a, b, v)) in p.pairing.iter().enumerate() {
                s.set_pairing(*a, *b, v.clone()).map_err(|e| at(k, e))?;
            }
            for (k, (a, b, v)) in p.bracket.iter().enumerate() {
                s.set_bracket(*a, *b, &v.coeff([0, 0])).map_err(|e| at(p.pairing.len() + k, e))?;
            }
        }
    }
    Ok(())
}

fn split_gens(p: &Presentation) -> (Vec<GenSym>, Vec<GenSym>) {
    p.gens.iter().partition(|g| g.sort == Sort::A)
}

fn derivation_table(p: &Presentation) -> crate::Result<DerivationTable> {
    let mut der = DerivationTable::new();
    for (g, img) in &p.derivation {
        der.set(*g, img.clone())?;
    }
    Ok(der)
}

impl Presentation {
    pub fn double_bracket(&self) -> crate::Result<DoubleBracketTable> {
        let mut t = DoubleBracketTable::new(&self.gens)?;
        for (a, b, v) in &self.bracket {
            t.set(*a, *b, v.coeff([0, 0]))?;
        }
        Ok(t)
    }

    pub fn lambda_table(&self) -> crate::Result<LambdaBracketTable> {
        let mut t = LambdaBracketTable::new(&self.gens, derivation_table(self)?)?;
        t.graded = self.options.graded.unwrap_or(false);
        if let Some(c) = self.options.lambda_cap {
            t.lambda_cap = c;
        }
        for (a, b, v) in &self.bracket {
            t.set(*a, *b, v.clone())?;
        }
        Ok(t)
    }

    pub fn dcd(&self) -> crate::Result<DcdStructure> {
        let (a_gens, e_gens) = split_gens(self);
        let mut s = DcdStructure::new(&a_gens, &e_gens, derivation_table(self)?)?;
        for (a, b, v) in &self.pairing {
            s.set_pairing(*a, *b, v.clone())?;
        }
        for (a, b, v) in &self.bracket {
            s.set_bracket(*a, *b, &v.coeff([0, 0]))?;
        }
        Ok(s)
    }

    fn derivation_rows(der: &DerivationTable, gens: &[GenSym]) -> Vec<(GenSym, NCPoly)> {
        gens.iter().filter_map(|g| der.get(g).map(|p| (*g, p.clone()))).collect()
    }

    pub fn from_double_bracket(t: &DoubleBracketTable, options: Options) -> Presentation {
        Presentation {
            kind: Kind::DoublePoisson,
            gens: t.gens().to_vec(),
            derivation: Vec::new(),
            pairing: Vec::new(),
            bracket: t
                .entries()
                .filter(|(_, v)| !v.is_zero())
                .map(|((a, b), v)| (*a, *b, LambdaPoly::constant(v.clone())))
                .collect(),
            options,
        }
    }

    pub fn from_lambda_table(t: &LambdaBracketTable, mut options: Options) -> Presentation {
        options.graded = Some(t.graded);
        Presentation {
            kind: Kind::Dpva,
            gens: t.gens().to_vec(),
            derivation: Presentation::derivation_rows(&t.derivation, t.gens()),
            pairing: Vec::new(),
            bracket: t.entries().map(|((a, b), v)| (*a, *b, v.clone())).collect(),
            options,
        }
    }

    pub fn from_dcd(s: &DcdStructure, mut options: Options) -> Presentation {
        options.graded = None;
        let gens: Vec<GenSym> = s.a_gens().iter().chain(s.e_gens()).copied().collect();
        Presentation {
            kind: Kind::Dcd,
            derivation: Presentation::derivation_rows(&s.derivation, s.a_gens()),
            pairing: s.pairing_entries().map(|((a, b), v)| (*a, *b, v.clone())).collect(),
            bracket: s.bracket_entries().map(|((a, b), v)| (*a, *b, LambdaPoly::constant(v.total()))).collect(),
            gens,
            options,
        }
    }
}

pub fn print_presentation(p: &Presentation) -> String {
    let mut s = String::new();
    s.push_str("[generators]\n");
    for g in &p.gens {
        let _ = writeln!(s, "{} : {}", g.name, g.sort);
    }
    if !p.derivation.is_empty() {
        s.push_str("\n[derivation]\n");
        for (g, img) in &p.derivation {
            let _ = writeln!(s, "{} = {}", g, img);
        }
    }
    if !p.pairing.is_empty() {
        s.push_str("\n[pairing]\n");
        for (a, b, v) in &p.pairing {
            let _ = writeln!(s, "{}, {} = {}", a, b, v);
        }
    }
    if !p.bracket.is_empty() {
        s.push_str("\n[bracket]\n");
        for (a, b, v) in &p.bracket {
            match v.as_constant() {
                Some(t) => {
                    let _ = writeln!(s, "{}, {} = {}", a, b, t);
                }
                None => {
                    let _ = writeln!(s, "{}, {} = {}", a, b, v);
                }
            }
        }
    }
    s.push_str("\n[options]\n");
    let _ = writeln!(s, "kind = {}", p.kind.name());
    let o = &p.options;
    if let Some(v) = o.graded {
        let _ = writeln!(s, "graded = {}", v);
    }
    if let Some(v) = o.samples {
        let _ = writeln!(s, "samples = {}", v);
    }
    if let Some(v) = o.seed {
        let _ = writeln!(s, "seed = {}", v);
    }
    if let Some(v) = o.lambda_cap {
        let _ = writeln!(s, "lambda_cap = {}", v);
    }
    if let Some(v) = o.n {
        let _ = writeln!(s, "N = {}", v);
    }
    if let Some(v) = o.convention {
        let _ = writeln!(s, "convention = {}", v.name());
    }
    s
}
