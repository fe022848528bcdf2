//! Instance files: a small declarative language for one reproducible experiment.
//!
//! ```text
//! name "dup_line";
//! ring A = QQ[x];
//! ideal I in A = (x);
//! amalgam R = duplication(A, I);
//! family F over A = sample;
//! check flat_integral_criterion(R, F) expect consistent;
//! ```
//!
//! Statements end with `;`, `#` starts a comment. Every name must be declared
//! before use. Polynomials are kept as text and parsed against their ring when
//! the instance is built; over plain rings they are also checked here so that
//! errors carry a line and column.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use amalgrade_core::{Field, Kernel, RingPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

/// Polynomial source text. Equality looks at the whitespace-free form only.
#[derive(Clone, Debug)]
pub struct PolyText {
    pub text: String,
    raw: String,
    at: Pos,
}

impl PartialEq for PolyText {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for PolyText {}

impl PolyText {
    pub fn new(text: &str) -> Self {
        PolyText { text: text.chars().filter(|c| !c.is_whitespace()).collect(), raw: text.to_string(), at: Pos::default() }
    }

    pub fn position(&self) -> Pos {
        self.at
    }

    /// Source position of the 1-based `column` of the whitespace-free text.
    pub fn locate(&self, column: usize) -> Pos {
        let mut pos = self.at;
        let mut seen = 0;
        for c in self.raw.chars() {
            if !c.is_whitespace() {
                seen += 1;
                if seen == column {
                    return pos;
                }
            }
            if c == '\n' {
                pos.line += 1;
                pos.column = 1;
            } else {
                pos.column += 1;
            }
        }
        pos
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub fn field(self) -> Result<Field, amalgrade_core::Error> {
        match self {
            FieldSpec::Rationals => Ok(Field::Rationals),
            FieldSpec::Prime(p) => Field::prime(p as u64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleDef {
    Free(usize),
    /// `A/I`.
    Quotient(String),
    /// `I` as a module.
    Ideal(String),
    /// Cokernel of the given columns.
    Presented { rank: usize, columns: Vec<Vec<PolyText>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ModeSpec {
    pub module_finite: bool,
    pub nilpotent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmalgamDef {
    Duplication { a: String, ideal: String },
    TrivialExtension { a: String, module: String },
    General {
        a: String,
        b: String,
        f: String,
        j: String,
        gens: Option<Vec<PolyText>>,
        mode: ModeSpec,
        module_gens: Option<Vec<PolyText>>,
        basis: Option<Vec<PolyText>>,
        attested: bool,
    },
}

impl AmalgamDef {
    pub fn base(&self) -> &str {
        match self {
            AmalgamDef::Duplication { a, .. } | AmalgamDef::TrivialExtension { a, .. } | AmalgamDef::General { a, .. } => a,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyDef {
    Maximal,
    /// Monomial sample; a missing seed falls back to the run seed.
    Sample { count: usize, degree: u32, seed: Option<u64> },
    List(Vec<Vec<PolyText>>),
    /// Extension of a family over `A` to the amalgam.
    Extend(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckDef {
    Cm { ring: String, family: String },
    MaximalCriterion { amalgam: String },
    NilpotentCriterion { amalgam: String, family: String },
    FlatIntegralCriterion { amalgam: String, family: String },
    GradeMin { amalgam: String, ideal: String },
    JGradeHeight { amalgam: String, family: String },
    DimensionTransfer { amalgam: String },
    Generation { amalgam: String },
    Presentation { amalgam: String, relations: Vec<PolyText> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Value {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(n) => write!(f, "{n}"),
            Value::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Label(String),
    Counterexample { kgr: Value, ht: Value },
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Label(l) => f.write_str(l),
            Expectation::Counterexample { kgr, ht } => write!(f, "counterexample(kgr={kgr}, ht={ht})"),
        }
    }
}

pub const LABELS: &[&str] = &["cm", "counterexample", "inconclusive", "consistent", "inconsistent", "inapplicable", "holds", "fails", "verified", "attested", "failed"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Name(String),
    Ring { name: String, field: FieldSpec, vars: Vec<String>, relations: Vec<PolyText> },
    Ideal { name: String, ring: String, gens: Vec<PolyText> },
    Map { name: String, source: String, target: String, images: Vec<PolyText> },
    Module { name: String, ring: String, def: ModuleDef },
    Amalgam { name: String, def: AmalgamDef },
    Family { name: String, ring: String, def: FamilyDef },
    Check { check: CheckDef, expect: Option<Expectation> },
}

#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub statements: Vec<Stmt>,
    pub positions: Vec<Pos>,
}

impl PartialEq for InstanceFile {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl InstanceFile {
    pub fn name(&self) -> Option<&str> {
        self.statements.iter().find_map(|s| match s {
            Stmt::Name(n) => Some(n.as_str()),
            _ => None,
        })
    }

    pub fn checks(&self) -> impl Iterator<Item = (&CheckDef, Option<&Expectation>)> {
        self.statements.iter().filter_map(|s| match s {
            Stmt::Check { check, expect } => Some((check, expect.as_ref())),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Ring { vars: Option<Vec<String>>, field: FieldSpec },
    Ideal { ring: String },
    Map { source: String, target: String },
    Module { ring: String },
    Amalgam { base: String },
    Family { ring: String },
}

impl Kind {
    fn word(&self) -> &'static str {
        match self {
            Kind::Ring { .. } => "ring",
            Kind::Ideal { .. } => "ideal",
            Kind::Map { .. } => "map",
            Kind::Module { .. } => "module",
            Kind::Amalgam { .. } => "amalgam",
            Kind::Family { .. } => "family",
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
    symbols: HashMap<String, Kind>,
    _src: &'a str,
}

type PResult<T> = Result<T, ParseError>;

const KEYWORDS: &[&str] = &["name", "ring", "ideal", "map", "module", "amalgam", "family", "check", "expect", "in", "over"];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { chars: src.chars().collect(), i: 0, line: 1, col: 1, symbols: HashMap::new(), _src: src }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.col }
    }

    fn err<T>(&self, pos: Pos, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { pos, message: message.into() })
    }

    fn bump(&mut self) -> Option<char> {
        let c = *self.chars.get(self.i)?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.i >= self.chars.len()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars[self.i..].iter().take(n).copied().eq(s.chars()) {
            // do not split identifiers
            let word = s.chars().all(|c| c.is_alphanumeric() || c == '_');
            if word && self.chars.get(self.i + n).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
                return false;
            }
            for _ in 0..n {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.peek().map(|c| format!("'{c}'")).unwrap_or_else(|| "end of input".into());
            self.err(self.pos(), format!("expected '{s}', found {found}"))
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        self.skip_ws();
        let pos = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) {
            return self.err(pos, "expected a name");
        }
        Ok((s, pos))
    }

    fn number(&mut self) -> PResult<u64> {
        self.skip_ws();
        let pos = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s.parse().or_else(|_| self.err(pos, "expected a number"))
    }

    fn string(&mut self) -> PResult<String> {
        self.skip_ws();
        let pos = self.pos();
        self.expect("\"")?;
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(s),
                Some('\n') | None => return self.err(pos, "unterminated string"),
                Some(c) => s.push(c),
            }
        }
    }

    /// `( p, q, ... )` with balanced inner parentheses; the items are kept as text.
    fn poly_list(&mut self) -> PResult<Vec<PolyText>> {
        self.expect("(")?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let at = self.pos();
            let mut raw = String::new();
            let mut depth = 0usize;
            loop {
                match self.peek() {
                    None => return self.err(at, "unterminated polynomial list"),
                    Some(c @ ('(' | '[')) => {
                        depth += 1;
                        raw.push(c);
                    }
                    Some(')') if depth == 0 => break,
                    Some(',') if depth == 0 => break,
                    Some(c @ (')' | ']')) => {
                        depth = depth.saturating_sub(1);
                        raw.push(c);
                    }
                    Some(';') => return self.err(self.pos(), "';' inside a polynomial list"),
                    Some(c) => raw.push(c),
                }
                self.bump();
            }
            let mut p = PolyText::new(raw.trim_end());
            p.at = at;
            if p.text.is_empty() {
                return self.err(at, "empty polynomial");
            }
            out.push(p);
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn lookup(&self, name: &str, pos: Pos) -> PResult<Kind> {
        self.symbols.get(name).cloned().ok_or_else(|| ParseError { pos, message: format!("unknown name '{name}'") })
    }

    fn want(&self, name: &str, pos: Pos, word: &str) -> PResult<Kind> {
        let k = self.lookup(name, pos)?;
        if k.word() != word {
            return self.err(pos, format!("'{name}' is a {}, expected a {word}", k.word()));
        }
        Ok(k)
    }

    /// A plain ring or an amalgam (whose ring is the built presentation).
    fn want_ring(&self, name: &str, pos: Pos) -> PResult<Kind> {
        let k = self.lookup(name, pos)?;
        match k {
            Kind::Ring { .. } | Kind::Amalgam { .. } => Ok(k),
            other => self.err(pos, format!("'{name}' is a {}, expected a ring", other.word())),
        }
    }

    fn ring_of(&self, kind: &Kind) -> String {
        match kind {
            Kind::Ideal { ring } | Kind::Module { ring } | Kind::Family { ring } => ring.clone(),
            _ => String::new(),
        }
    }

    fn declare(&mut self, name: String, pos: Pos, kind: Kind) -> PResult<()> {
        if KEYWORDS.contains(&name.as_str()) {
            return self.err(pos, format!("'{name}' is a keyword"));
        }
        if self.symbols.contains_key(&name) {
            return self.err(pos, format!("'{name}' is already declared"));
        }
        self.symbols.insert(name, kind);
        Ok(())
    }

    /// Parse every polynomial against the ring's variables when they are known.
    fn validate(&self, ring: &str, polys: &[PolyText]) -> PResult<()> {
        let Some(Kind::Ring { vars: Some(vars), field }) = self.symbols.get(ring) else {
            return Ok(());
        };
        let field = field.field().unwrap_or(Field::Rationals);
        let r = RingPresentation::polynomial(field, vars.clone(), Arc::new(Kernel::default())).map_err(|e| ParseError { pos: self.pos(), message: e.to_string() })?;
        for p in polys {
            if let Err(e) = r.parse(&p.text) {
                return Err(poly_error(p, e));
            }
        }
        Ok(())
    }

    fn statement(&mut self) -> PResult<Stmt> {
        self.skip_ws();
        let pos = self.pos();
        let (kw, _) = self.ident()?;
        let stmt = match kw.as_str() {
            "name" => Stmt::Name(self.string()?),
            "ring" => self.ring_stmt()?,
            "ideal" => {
                let (name, npos) = self.ident()?;
                self.expect("in")?;
                let (ring, rpos) = self.ident()?;
                self.want_ring(&ring, rpos)?;
                self.expect("=")?;
                let gens = self.poly_list()?;
                self.validate(&ring, &gens)?;
                self.declare(name.clone(), npos, Kind::Ideal { ring: ring.clone() })?;
                Stmt::Ideal { name, ring, gens }
            }
            "map" => {
                let (name, npos) = self.ident()?;
                self.expect(":")?;
                let (source, spos) = self.ident()?;
                self.want_ring(&source, spos)?;
                self.expect("->")?;
                let (target, tpos) = self.ident()?;
                self.want_ring(&target, tpos)?;
                self.expect("=")?;
                let images = self.poly_list()?;
                self.validate(&target, &images)?;
                self.declare(name.clone(), npos, Kind::Map { source: source.clone(), target: target.clone() })?;
                Stmt::Map { name, source, target, images }
            }
            "module" => {
                let (name, npos) = self.ident()?;
                self.expect("over")?;
                let (ring, rpos) = self.ident()?;
                self.want_ring(&ring, rpos)?;
                self.expect("=")?;
                let def = self.module_def(&ring)?;
                self.declare(name.clone(), npos, Kind::Module { ring: ring.clone() })?;
                Stmt::Module { name, ring, def }
            }
            "amalgam" => {
                let (name, npos) = self.ident()?;
                self.expect("=")?;
                let def = self.amalgam_def()?;
                self.declare(name.clone(), npos, Kind::Amalgam { base: def.base().to_string() })?;
                Stmt::Amalgam { name, def }
            }
            "family" => {
                let (name, npos) = self.ident()?;
                self.expect("over")?;
                let (ring, rpos) = self.ident()?;
                let rk = self.want_ring(&ring, rpos)?;
                self.expect("=")?;
                let def = self.family_def(&ring, &rk)?;
                self.declare(name.clone(), npos, Kind::Family { ring: ring.clone() })?;
                Stmt::Family { name, ring, def }
            }
            "check" => {
                let check = self.check_def()?;
                let expect = if self.eat("expect") { Some(self.expectation()?) } else { None };
                Stmt::Check { check, expect }
            }
            other => return self.err(pos, format!("unknown statement '{other}'")),
        };
        self.expect(";")?;
        Ok(stmt)
    }

    fn ring_stmt(&mut self) -> PResult<Stmt> {
        let (name, npos) = self.ident()?;
        self.expect("=")?;
        self.skip_ws();
        let fpos = self.pos();
        let field = if self.eat("QQ") {
            FieldSpec::Rationals
        } else if self.eat("Fp") {
            self.expect("(")?;
            let p = self.number()?;
            self.expect(")")?;
            let p32 = u32::try_from(p).ok().filter(|&q| Field::prime(q as u64).is_ok());
            match p32 {
                Some(q) => FieldSpec::Prime(q),
                None => return self.err(fpos, format!("{p} is not a prime below 2^31")),
            }
        } else {
            return self.err(fpos, "expected a field: QQ or Fp(p)");
        };
        self.expect("[")?;
        let mut vars = Vec::new();
        if !self.eat("]") {
            loop {
                let (v, vpos) = self.ident()?;
                if vars.contains(&v) {
                    return self.err(vpos, format!("variable '{v}' repeated"));
                }
                vars.push(v);
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        let kind = Kind::Ring { vars: Some(vars.clone()), field };
        self.declare(name.clone(), npos, kind)?;
        let relations = if self.eat("/") { self.poly_list()? } else { Vec::new() };
        self.validate(&name, &relations)?;
        Ok(Stmt::Ring { name, field, vars, relations })
    }

    fn module_def(&mut self, ring: &str) -> PResult<ModuleDef> {
        let (word, wpos) = self.ident()?;
        self.expect("(")?;
        let def = match word.as_str() {
            "free" => ModuleDef::Free(self.number()? as usize),
            "quotient" | "ideal" => {
                let (i, ipos) = self.ident()?;
                let k = self.want(&i, ipos, "ideal")?;
                if self.ring_of(&k) != ring {
                    return self.err(ipos, format!("'{i}' is not an ideal of '{ring}'"));
                }
                if word == "quotient" {
                    ModuleDef::Quotient(i)
                } else {
                    ModuleDef::Ideal(i)
                }
            }
            "presented" => {
                let rank = self.number()? as usize;
                let mut columns = Vec::new();
                if self.eat(";") {
                    loop {
                        let cpos = self.pos();
                        let col = self.poly_list()?;
                        if col.len() != rank {
                            return self.err(cpos, format!("column has {} entries, rank is {rank}", col.len()));
                        }
                        self.validate(ring, &col)?;
                        columns.push(col);
                        if !self.eat(",") {
                            break;
                        }
                    }
                }
                ModuleDef::Presented { rank, columns }
            }
            other => return self.err(wpos, format!("unknown module construction '{other}'")),
        };
        self.expect(")")?;
        Ok(def)
    }

    fn amalgam_def(&mut self) -> PResult<AmalgamDef> {
        let (word, wpos) = self.ident()?;
        self.expect("(")?;
        let (a, apos) = self.ident()?;
        self.want(&a, apos, "ring")?;
        self.expect(",")?;
        let def = match word.as_str() {
            "duplication" => {
                let (i, ipos) = self.ident()?;
                let k = self.want(&i, ipos, "ideal")?;
                if self.ring_of(&k) != a {
                    return self.err(ipos, format!("'{i}' is not an ideal of '{a}'"));
                }
                AmalgamDef::Duplication { a, ideal: i }
            }
            "trivial_extension" => {
                let (m, mpos) = self.ident()?;
                let k = self.want(&m, mpos, "module")?;
                if self.ring_of(&k) != a {
                    return self.err(mpos, format!("'{m}' is not a module over '{a}'"));
                }
                AmalgamDef::TrivialExtension { a, module: m }
            }
            "amalgam" => self.general_amalgam(a)?,
            other => return self.err(wpos, format!("unknown amalgam construction '{other}'")),
        };
        self.expect(")")?;
        Ok(def)
    }

    fn general_amalgam(&mut self, a: String) -> PResult<AmalgamDef> {
        let (b, bpos) = self.ident()?;
        self.want(&b, bpos, "ring")?;
        self.expect(",")?;
        let (f, fpos) = self.ident()?;
        match self.want(&f, fpos, "map")? {
            Kind::Map { source, target } if source == a && target == b => {}
            _ => return self.err(fpos, format!("'{f}' is not a map {a} -> {b}")),
        }
        self.expect(",")?;
        let (j, jpos) = self.ident()?;
        let k = self.want(&j, jpos, "ideal")?;
        if self.ring_of(&k) != b {
            return self.err(jpos, format!("'{j}' is not an ideal of '{b}'"));
        }
        let (mut gens, mut module_gens, mut basis) = (None, None, None);
        let mut mode = ModeSpec::default();
        let mut attested = false;
        while self.eat(";") {
            let (opt, opos) = self.ident()?;
            self.expect("=")?;
            match opt.as_str() {
                "gens" => gens = Some(self.checked_list(&b)?),
                "module_gens" => module_gens = Some(self.checked_list(&b)?),
                "basis" => basis = Some(self.checked_list(&b)?),
                "mode" => loop {
                    let (w, wpos) = self.ident()?;
                    match w.as_str() {
                        "algebra" => {}
                        "module_finite" => mode.module_finite = true,
                        "nilpotent" => mode.nilpotent = true,
                        other => return self.err(wpos, format!("unknown mode '{other}'")),
                    }
                    if !self.eat("+") {
                        break;
                    }
                },
                "trust" => {
                    let (w, wpos) = self.ident()?;
                    attested = match w.as_str() {
                        "verify" => false,
                        "attested" => true,
                        other => return self.err(wpos, format!("unknown trust level '{other}'")),
                    };
                }
                other => return self.err(opos, format!("unknown option '{other}'")),
            }
        }
        Ok(AmalgamDef::General { a, b, f, j, gens, mode, module_gens, basis, attested })
    }

    fn checked_list(&mut self, ring: &str) -> PResult<Vec<PolyText>> {
        let l = self.poly_list()?;
        self.validate(ring, &l)?;
        Ok(l)
    }

    fn family_def(&mut self, ring: &str, rk: &Kind) -> PResult<FamilyDef> {
        self.skip_ws();
        if self.peek() == Some('[') {
            self.expect("[")?;
            let mut members = Vec::new();
            loop {
                members.push(self.checked_list(ring)?);
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
            return Ok(FamilyDef::List(members));
        }
        let (word, wpos) = self.ident()?;
        match word.as_str() {
            "maximal" => Ok(FamilyDef::Maximal),
            "sample" => {
                if self.eat("(") {
                    let count = self.number()? as usize;
                    self.expect(",")?;
                    let degree = self.number()? as u32;
                    let seed = if self.eat(",") { Some(self.number()?) } else { None };
                    self.expect(")")?;
                    Ok(FamilyDef::Sample { count, degree, seed })
                } else {
                    Ok(FamilyDef::Sample { count: amalgrade_core::checkers::SAMPLE_COUNT, degree: amalgrade_core::checkers::SAMPLE_DEGREE, seed: None })
                }
            }
            "extend" => {
                let Kind::Amalgam { base } = rk else {
                    return self.err(wpos, "extend(...) needs a family over an amalgam");
                };
                self.expect("(")?;
                let (fam, fpos) = self.ident()?;
                let k = self.want(&fam, fpos, "family")?;
                if &self.ring_of(&k) != base {
                    return self.err(fpos, format!("'{fam}' is not a family over '{base}'"));
                }
                self.expect(")")?;
                Ok(FamilyDef::Extend(fam))
            }
            other => self.err(wpos, format!("unknown family '{other}'")),
        }
    }

    fn amalgam_arg(&mut self) -> PResult<(String, String)> {
        let (r, rpos) = self.ident()?;
        match self.want(&r, rpos, "amalgam")? {
            Kind::Amalgam { base } => Ok((r, base)),
            _ => unreachable!(),
        }
    }

    fn family_over(&mut self, base: &str) -> PResult<String> {
        self.expect(",")?;
        let (f, fpos) = self.ident()?;
        let k = self.want(&f, fpos, "family")?;
        if self.ring_of(&k) != base {
            return self.err(fpos, format!("'{f}' is not a family over '{base}'"));
        }
        Ok(f)
    }

    fn check_def(&mut self) -> PResult<CheckDef> {
        let (word, wpos) = self.ident()?;
        self.expect("(")?;
        let def = match word.as_str() {
            "cm" => {
                let (ring, rpos) = self.ident()?;
                self.want_ring(&ring, rpos)?;
                let family = self.family_over(&ring)?;
                CheckDef::Cm { ring, family }
            }
            "maximal_criterion" => CheckDef::MaximalCriterion { amalgam: self.amalgam_arg()?.0 },
            "dimension_transfer" => CheckDef::DimensionTransfer { amalgam: self.amalgam_arg()?.0 },
            "generation" => CheckDef::Generation { amalgam: self.amalgam_arg()?.0 },
            "presentation" => CheckDef::Presentation { amalgam: self.amalgam_arg()?.0, relations: Vec::new() },
            "nilpotent_criterion" | "flat_integral_criterion" | "j_grade_height" => {
                let (amalgam, base) = self.amalgam_arg()?;
                let family = self.family_over(&base)?;
                match word.as_str() {
                    "nilpotent_criterion" => CheckDef::NilpotentCriterion { amalgam, family },
                    "flat_integral_criterion" => CheckDef::FlatIntegralCriterion { amalgam, family },
                    _ => CheckDef::JGradeHeight { amalgam, family },
                }
            }
            "grade_min" => {
                let (amalgam, base) = self.amalgam_arg()?;
                self.expect(",")?;
                let (i, ipos) = self.ident()?;
                let k = self.want(&i, ipos, "ideal")?;
                if self.ring_of(&k) != base {
                    return self.err(ipos, format!("'{i}' is not an ideal of '{base}'"));
                }
                CheckDef::GradeMin { amalgam, ideal: i }
            }
            other => return self.err(wpos, format!("unknown check '{other}'")),
        };
        self.expect(")")?;
        if let CheckDef::Presentation { amalgam, .. } = def {
            self.expect("=")?;
            return Ok(CheckDef::Presentation { amalgam, relations: self.poly_list()? });
        }
        Ok(def)
    }

    fn value(&mut self) -> PResult<Value> {
        if self.eat("inf") {
            Ok(Value::Infinite)
        } else {
            Ok(Value::Finite(self.number()? as u32))
        }
    }

    fn expectation(&mut self) -> PResult<Expectation> {
        let (word, wpos) = self.ident()?;
        if !LABELS.contains(&word.as_str()) {
            return self.err(wpos, format!("unknown expectation '{word}'"));
        }
        if word == "counterexample" && self.eat("(") {
            self.expect("kgr")?;
            self.expect("=")?;
            let kgr = self.value()?;
            self.expect(",")?;
            self.expect("ht")?;
            self.expect("=")?;
            let ht = self.value()?;
            self.expect(")")?;
            return Ok(Expectation::Counterexample { kgr, ht });
        }
        Ok(Expectation::Label(word))
    }
}

pub(crate) fn poly_error(p: &PolyText, e: amalgrade_core::Error) -> ParseError {
    match e {
        amalgrade_core::Error::Parse { column, message } => ParseError { pos: p.locate(column), message },
        other => ParseError { pos: p.position(), message: other.to_string() },
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut p = Parser::new(text);
    let mut statements = Vec::new();
    let mut positions = Vec::new();
    while !p.at_end() {
        positions.push(p.pos());
        statements.push(p.statement()?);
    }
    Ok(InstanceFile { statements, positions })
}

fn list(ps: &[PolyText]) -> String {
    let items: Vec<&str> = ps.iter().map(|p| p.text.as_str()).collect();
    format!("({})", items.join(", "))
}

/// Canonical text: one statement per line, whitespace-free polynomials.
pub fn pretty_print(file: &InstanceFile) -> String {
    let mut out = String::new();
    for s in &file.statements {
        let _ = match s {
            Stmt::Name(n) => writeln!(out, "name \"{n}\";"),
            Stmt::Ring { name, field, vars, relations } => {
                let f = match field {
                    FieldSpec::Rationals => "QQ".to_string(),
                    FieldSpec::Prime(p) => format!("Fp({p})"),
                };
                let rel = if relations.is_empty() { String::new() } else { format!(" / {}", list(relations)) };
                writeln!(out, "ring {name} = {f}[{}]{rel};", vars.join(", "))
            }
            Stmt::Ideal { name, ring, gens } => writeln!(out, "ideal {name} in {ring} = {};", list(gens)),
            Stmt::Map { name, source, target, images } => writeln!(out, "map {name} : {source} -> {target} = {};", list(images)),
            Stmt::Module { name, ring, def } => {
                let d = match def {
                    ModuleDef::Free(r) => format!("free({r})"),
                    ModuleDef::Quotient(i) => format!("quotient({i})"),
                    ModuleDef::Ideal(i) => format!("ideal({i})"),
                    ModuleDef::Presented { rank, columns } if columns.is_empty() => format!("presented({rank})"),
                    ModuleDef::Presented { rank, columns } => {
                        let cols: Vec<String> = columns.iter().map(|c| list(c)).collect();
                        format!("presented({rank}; {})", cols.join(", "))
                    }
                };
                writeln!(out, "module {name} over {ring} = {d};")
            }
            Stmt::Amalgam { name, def } => {
                let d = match def {
                    AmalgamDef::Duplication { a, ideal } => format!("duplication({a}, {ideal})"),
                    AmalgamDef::TrivialExtension { a, module } => format!("trivial_extension({a}, {module})"),
                    AmalgamDef::General { a, b, f, j, gens, mode, module_gens, basis, attested } => {
                        let mut s = format!("amalgam({a}, {b}, {f}, {j}");
                        if let Some(g) = gens {
                            s += &format!("; gens = {}", list(g));
                        }
                        let mut words = Vec::new();
                        if mode.module_finite {
                            words.push("module_finite");
                        }
                        if mode.nilpotent {
                            words.push("nilpotent");
                        }
                        if words.is_empty() {
                            words.push("algebra");
                        }
                        s += &format!("; mode = {}", words.join("+"));
                        if let Some(g) = module_gens {
                            s += &format!("; module_gens = {}", list(g));
                        }
                        if let Some(g) = basis {
                            s += &format!("; basis = {}", list(g));
                        }
                        if *attested {
                            s += "; trust = attested";
                        }
                        s + ")"
                    }
                };
                writeln!(out, "amalgam {name} = {d};")
            }
            Stmt::Family { name, ring, def } => {
                let d = match def {
                    FamilyDef::Maximal => "maximal".to_string(),
                    FamilyDef::Sample { count, degree, seed: Some(s) } => format!("sample({count}, {degree}, {s})"),
                    FamilyDef::Sample { count, degree, seed: None } => format!("sample({count}, {degree})"),
                    FamilyDef::List(ms) => {
                        let items: Vec<String> = ms.iter().map(|m| list(m)).collect();
                        format!("[{}]", items.join(", "))
                    }
                    FamilyDef::Extend(f) => format!("extend({f})"),
                };
                writeln!(out, "family {name} over {ring} = {d};")
            }
            Stmt::Check { check, expect } => {
                let e = expect.as_ref().map(|e| format!(" expect {e}")).unwrap_or_default();
                writeln!(out, "check {}{e};", check_text(check))
            }
        };
    }
    out
}

/// The check as written, without its expectation.
pub fn check_text(c: &CheckDef) -> String {
    match c {
        CheckDef::Cm { ring, family } => format!("cm({ring}, {family})"),
        CheckDef::MaximalCriterion { amalgam } => format!("maximal_criterion({amalgam})"),
        CheckDef::NilpotentCriterion { amalgam, family } => format!("nilpotent_criterion({amalgam}, {family})"),
        CheckDef::FlatIntegralCriterion { amalgam, family } => format!("flat_integral_criterion({amalgam}, {family})"),
        CheckDef::GradeMin { amalgam, ideal } => format!("grade_min({amalgam}, {ideal})"),
        CheckDef::JGradeHeight { amalgam, family } => format!("j_grade_height({amalgam}, {family})"),
        CheckDef::DimensionTransfer { amalgam } => format!("dimension_transfer({amalgam})"),
        CheckDef::Generation { amalgam } => format!("generation({amalgam})"),
        CheckDef::Presentation { amalgam, relations } => format!("presentation({amalgam}) = {}", list(relations)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instance() {
        let f = parse_instance("ring A = QQ[x]; ideal I in A = (x); amalgam R = duplication(A, I);").unwrap();
        assert_eq!(f.statements.len(), 3);
        assert_eq!(f.positions[1], Pos { line: 1, column: 17 });
    }

    #[test]
    fn forward_reference_is_located() {
        let e = parse_instance("ring A = QQ[x];\nideal I in B = (x);").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, column: 12 });
        assert!(e.message.contains("unknown name 'B'"));
    }

    #[test]
    fn polynomial_errors_point_into_the_file() {
        let e = parse_instance("ring A = QQ[x];\nideal I in A = (x,   x + w);").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, column: 26 });
    }

    #[test]
    fn type_mismatches() {
        assert!(parse_instance("ring A = QQ[x]; ideal I in A = (x); map f : A -> I = (x);").unwrap_err().message.contains("expected a ring"));
        assert!(parse_instance("ring A = QQ[x]; ring B = QQ[y]; ideal I in B = (y); amalgam R = duplication(A, I);").is_err());
        assert!(parse_instance("ring A = Fp(12)[x];").is_err());
        assert!(parse_instance("ring A = QQ[x, x];").is_err());
    }

    #[test]
    fn pretty_print_round_trips() {
        let src = "name \"t\";\nring A = QQ[x,y] / (x*y);  # comment\nideal I in A = ( x ,y^2 );\nmodule M over A = presented(2; (x, y), (y, 0));\n\
                   amalgam R = trivial_extension(A, M);\nfamily F over A = [(x), (x, y)];\nfamily G over R = extend(F);\n\
                   check cm(R, G) expect counterexample(kgr = 1, ht = inf);\ncheck presentation(R) = (x * y) expect fails;";
        let f = parse_instance(src).unwrap();
        let g = parse_instance(&pretty_print(&f)).unwrap();
        assert_eq!(f, g);
        assert_eq!(pretty_print(&f), pretty_print(&g));
    }
}
