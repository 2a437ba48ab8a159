//! Reader and printer for the untyped `fof`/`cnf` subset of TPTP.
//!
//! Supported: `fof(name, role, formula[, source]).`, `cnf(name, role, clause[, source]).`,
//! `include('file').`, `%` line comments and `/* */` block comments. Formulas use
//! `!`/`?` quantifiers, `~`, `&`, `|`, `=>`, `<=`, `<=>`, infix `=`/`!=` and `$true`/`$false`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::ast::{sym, Atom, Formula, Literal, Role, Symbol, Term, EQUALITY};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub file: String,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{loc}: syntax error: {msg}")]
    Syntax { loc: Location, msg: String },
    #[error("arity clash for {kind} `{symbol}`: arity {first_arity} at {first}, arity {second_arity} at {second}")]
    ArityClash {
        symbol: String,
        kind: SymbolKind,
        first: Location,
        first_arity: usize,
        second: Location,
        second_arity: usize,
    },
    #[error("{loc}: unresolved include `{file}`: {reason}")]
    UnresolvedInclude { loc: Location, file: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Function,
    Predicate,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Function => "function",
            SymbolKind::Predicate => "predicate",
        })
    }
}

/// Annotation terms (the optional `source` field).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralTerm {
    App(String, Vec<GeneralTerm>),
    List(Vec<GeneralTerm>),
    Var(String),
}

impl fmt::Display for GeneralTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneralTerm::App(name, args) => {
                f.write_str(&quote_name(name))?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    write_sep(f, args, ", ")?;
                    f.write_str(")")?;
                }
                Ok(())
            }
            GeneralTerm::List(items) => {
                f.write_str("[")?;
                write_sep(f, items, ", ")?;
                f.write_str("]")
            }
            GeneralTerm::Var(v) => f.write_str(v),
        }
    }
}

fn write_sep<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{it}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Formula(Formula),
    Clause(Vec<Literal>),
}

/// One annotated formula as it appears in a problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub name: String,
    pub role: Role,
    pub body: Body,
    pub source: Option<GeneralTerm>,
}

impl Statement {
    pub fn is_cnf(&self) -> bool {
        matches!(self.body, Body::Clause(_))
    }

    /// The statement viewed as a formula (clauses become disjunctions).
    pub fn formula(&self) -> Formula {
        match &self.body {
            Body::Formula(f) => f.clone(),
            Body::Clause(lits) => Formula::from_literals(lits),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Directory that `include('...')` paths are resolved against.
    pub include_root: Option<PathBuf>,
    /// Label used in error locations for the top-level text.
    pub file_label: Option<String>,
}

/// Parses TPTP text without include support.
pub fn parse_tptp(text: &str) -> Result<Vec<Statement>, ParseError> {
    parse_tptp_with(text, &ParseOptions::default())
}

pub fn parse_tptp_with(text: &str, opts: &ParseOptions) -> Result<Vec<Statement>, ParseError> {
    let mut arities = ArityTable::default();
    let mut out = Vec::new();
    let label = opts.file_label.clone().unwrap_or_else(|| "<input>".to_string());
    parse_into(text, &label, opts, &mut arities, &mut out, 0)?;
    Ok(out)
}

pub fn parse_tptp_file(path: &Path, opts: &ParseOptions) -> Result<Vec<Statement>, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::UnresolvedInclude {
        loc: Location { file: path.display().to_string(), line: 0, col: 0 },
        file: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let mut opts = opts.clone();
    if opts.file_label.is_none() {
        opts.file_label = Some(path.display().to_string());
    }
    parse_tptp_with(&text, &opts)
}

#[derive(Default)]
struct ArityTable {
    seen: HashMap<(Symbol, SymbolKind), (usize, Location)>,
}

impl ArityTable {
    fn check(&mut self, name: &Symbol, kind: SymbolKind, arity: usize, loc: Location) -> Result<(), ParseError> {
        if &**name == EQUALITY {
            return Ok(());
        }
        match self.seen.get(&(name.clone(), kind)) {
            Some((a, first)) if *a != arity => Err(ParseError::ArityClash {
                symbol: name.to_string(),
                kind,
                first: first.clone(),
                first_arity: *a,
                second: loc,
                second_arity: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.seen.insert((name.clone(), kind), (arity, loc));
                Ok(())
            }
        }
    }
}

const MAX_INCLUDE_DEPTH: usize = 32;

fn parse_into(
    text: &str,
    file: &str,
    opts: &ParseOptions,
    arities: &mut ArityTable,
    out: &mut Vec<Statement>,
    depth: usize,
) -> Result<(), ParseError> {
    let tokens = lex(text, file)?;
    let mut p = Parser { toks: tokens, pos: 0, vars: HashMap::new(), arities };
    while !p.at_eof() {
        let (word, loc) = p.expect_lower()?;
        match word.as_str() {
            "include" => {
                p.expect(Tok::LParen)?;
                let target = match p.next() {
                    (Tok::Quoted(s), _) => s,
                    (t, l) => return Err(syntax(l, format!("expected quoted file name, found {t}"))),
                };
                if p.peek() == &Tok::Comma {
                    // selection lists are accepted and ignored
                    p.next();
                    p.general_term()?;
                }
                p.expect(Tok::RParen)?;
                p.expect(Tok::Dot)?;
                if depth >= MAX_INCLUDE_DEPTH {
                    return Err(ParseError::UnresolvedInclude { loc, file: target, reason: "include depth exceeded".into() });
                }
                let Some(root) = opts.include_root.as_ref() else {
                    return Err(ParseError::UnresolvedInclude { loc, file: target, reason: "no include root configured".into() });
                };
                let path = root.join(&target);
                let inc = std::fs::read_to_string(&path).map_err(|e| ParseError::UnresolvedInclude {
                    loc: loc.clone(),
                    file: target.clone(),
                    reason: e.to_string(),
                })?;
                let label = path.display().to_string();
                parse_into(&inc, &label, opts, p.arities, out, depth + 1)?;
            }
            "fof" | "cnf" => {
                let is_cnf = word == "cnf";
                p.vars.clear();
                p.expect(Tok::LParen)?;
                let name = p.name()?;
                p.expect(Tok::Comma)?;
                let (role_word, role_loc) = p.expect_lower()?;
                let role = Role::parse(&role_word).ok_or_else(|| syntax(role_loc, format!("unknown role `{role_word}`")))?;
                p.expect(Tok::Comma)?;
                let body = if is_cnf { Body::Clause(p.cnf_clause()?) } else { Body::Formula(p.formula()?) };
                let source = if p.peek() == &Tok::Comma {
                    p.next();
                    let s = p.general_term()?;
                    if p.peek() == &Tok::Comma {
                        p.next();
                        p.general_term()?;
                    }
                    Some(s)
                } else {
                    None
                };
                p.expect(Tok::RParen)?;
                p.expect(Tok::Dot)?;
                out.push(Statement { name, role, body, source });
            }
            other => return Err(syntax(loc, format!("expected fof, cnf or include, found `{other}`"))),
        }
    }
    Ok(())
}

fn syntax(loc: Location, msg: String) -> ParseError {
    ParseError::Syntax { loc, msg }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Quoted(String),
    Dollar(String),
    Number(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Colon,
    Bang,
    Question,
    Tilde,
    Amp,
    Pipe,
    Implies,
    RevImplies,
    Iff,
    Xor,
    Nor,
    Nand,
    Eq,
    Neq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Dollar(s) | Tok::Number(s) => return write!(f, "`{s}`"),
            Tok::Quoted(s) => return write!(f, "'{s}'"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Bang => "!",
            Tok::Question => "?",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Implies => "=>",
            Tok::RevImplies => "<=",
            Tok::Iff => "<=>",
            Tok::Xor => "<~>",
            Tok::Nor => "~|",
            Tok::Nand => "~&",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

fn lex(text: &str, file: &str) -> Result<Vec<(Tok, Location)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let loc = |line, col| Location { file: file.to_string(), line, col };
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let start = loc(line, col);
            bump!();
            bump!();
            loop {
                if i + 1 >= chars.len() {
                    return Err(syntax(start, "unterminated block comment".into()));
                }
                if chars[i] == '*' && chars[i + 1] == '/' {
                    bump!();
                    bump!();
                    break;
                }
                bump!();
            }
            continue;
        }
        let start = loc(line, col);
        let word = |i: &mut usize| {
            let s = *i;
            while *i < chars.len() && (chars[*i].is_ascii_alphanumeric() || chars[*i] == '_') {
                *i += 1;
            }
            chars[s..*i].iter().collect::<String>()
        };
        let tok = if c.is_ascii_lowercase() {
            let w = word(&mut i);
            col += w.chars().count();
            Tok::Lower(w)
        } else if c.is_ascii_uppercase() {
            let w = word(&mut i);
            col += w.chars().count();
            Tok::Upper(w)
        } else if c.is_ascii_digit() {
            let w = word(&mut i);
            col += w.chars().count();
            if !w.chars().all(|c| c.is_ascii_digit()) {
                return Err(syntax(start, format!("malformed number `{w}`")));
            }
            Tok::Number(w)
        } else if c == '$' {
            i += 1;
            col += 1;
            let w = word(&mut i);
            col += w.chars().count();
            Tok::Dollar(w)
        } else if c == '\'' {
            bump!();
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(syntax(start, "unterminated quoted atom".into())),
                    Some('\\') => {
                        bump!();
                        match chars.get(i) {
                            Some(&e @ ('\\' | '\'')) => {
                                s.push(e);
                                bump!();
                            }
                            _ => return Err(syntax(loc(line, col), "invalid escape in quoted atom".into())),
                        }
                    }
                    Some('\'') => {
                        bump!();
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        bump!();
                    }
                }
            }
            if s.is_empty() {
                return Err(syntax(start, "empty quoted atom".into()));
            }
            Tok::Quoted(s)
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let (t, n) = if rest.starts_with("<=>") {
                (Tok::Iff, 3)
            } else if rest.starts_with("<~>") {
                (Tok::Xor, 3)
            } else if rest.starts_with("=>") {
                (Tok::Implies, 2)
            } else if rest.starts_with("<=") {
                (Tok::RevImplies, 2)
            } else if rest.starts_with("!=") {
                (Tok::Neq, 2)
            } else if rest.starts_with("~|") {
                (Tok::Nor, 2)
            } else if rest.starts_with("~&") {
                (Tok::Nand, 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    ':' => Tok::Colon,
                    '!' => Tok::Bang,
                    '?' => Tok::Question,
                    '~' => Tok::Tilde,
                    '&' => Tok::Amp,
                    '|' => Tok::Pipe,
                    '=' => Tok::Eq,
                    _ => return Err(syntax(start, format!("unexpected character `{c}`"))),
                };
                (t, 1)
            };
            for _ in 0..n {
                bump!();
            }
            t
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, loc(line, col)));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Location)>,
    pos: usize,
    vars: HashMap<String, u32>,
    arities: &'a mut ArityTable,
}

enum Binary {
    And,
    Or,
    Implies,
    RevImplies,
    Iff,
    Xor,
    Nor,
    Nand,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn loc(&self) -> Location {
        self.toks[self.pos].1.clone()
    }

    fn at_eof(&self) -> bool {
        self.peek() == &Tok::Eof
    }

    fn next(&mut self) -> (Tok, Location) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Location, ParseError> {
        let (t, l) = self.next();
        if t == want {
            Ok(l)
        } else {
            Err(syntax(l, format!("expected {want}, found {t}")))
        }
    }

    fn expect_lower(&mut self) -> Result<(String, Location), ParseError> {
        match self.next() {
            (Tok::Lower(w), l) => Ok((w, l)),
            (t, l) => Err(syntax(l, format!("expected lower-case word, found {t}"))),
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.next() {
            (Tok::Lower(w) | Tok::Quoted(w) | Tok::Number(w), _) => Ok(w),
            (t, l) => Err(syntax(l, format!("expected formula name, found {t}"))),
        }
    }

    fn var_id(&mut self, name: &str) -> u32 {
        let n = self.vars.len() as u32;
        *self.vars.entry(name.to_string()).or_insert(n)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let first = self.unitary()?;
        let op = match self.peek() {
            Tok::Amp => Binary::And,
            Tok::Pipe => Binary::Or,
            Tok::Implies => Binary::Implies,
            Tok::RevImplies => Binary::RevImplies,
            Tok::Iff => Binary::Iff,
            Tok::Xor => Binary::Xor,
            Tok::Nor => Binary::Nor,
            Tok::Nand => Binary::Nand,
            _ => return Ok(first),
        };
        match op {
            Binary::And | Binary::Or => {
                let tok = self.peek().clone();
                let mut items = vec![first];
                while self.peek() == &tok {
                    self.next();
                    items.push(self.unitary()?);
                }
                if is_binary_connective(self.peek()) {
                    return Err(syntax(self.loc(), format!("mixed connectives need parentheses near {}", self.peek())));
                }
                Ok(if matches!(op, Binary::And) { Formula::And(items) } else { Formula::Or(items) })
            }
            _ => {
                self.next();
                let second = self.unitary()?;
                if is_binary_connective(self.peek()) {
                    return Err(syntax(self.loc(), format!("non-associative connective needs parentheses near {}", self.peek())));
                }
                let (a, b) = (Box::new(first), Box::new(second));
                Ok(match op {
                    Binary::Implies => Formula::Implies(a, b),
                    Binary::RevImplies => Formula::Implies(b, a),
                    Binary::Iff => Formula::Iff(a, b),
                    Binary::Xor => Formula::not(Formula::Iff(a, b)),
                    Binary::Nor => Formula::not(Formula::Or(vec![*a, *b])),
                    Binary::Nand => Formula::not(Formula::And(vec![*a, *b])),
                    Binary::And | Binary::Or => unreachable!(),
                })
            }
        }
    }

    fn unitary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.unitary()?))
            }
            Tok::Bang | Tok::Question => {
                let universal = self.peek() == &Tok::Bang;
                self.next();
                self.expect(Tok::LBrack)?;
                let mut vars = Vec::new();
                loop {
                    match self.next() {
                        (Tok::Upper(v), _) => vars.push(self.var_id(&v)),
                        (t, l) => return Err(syntax(l, format!("expected variable, found {t}"))),
                    }
                    match self.next() {
                        (Tok::Comma, _) => continue,
                        (Tok::RBrack, _) => break,
                        (t, l) => return Err(syntax(l, format!("expected `,` or `]`, found {t}"))),
                    }
                }
                self.expect(Tok::Colon)?;
                let body = Box::new(self.unitary()?);
                Ok(if universal { Formula::Forall(vars, body) } else { Formula::Exists(vars, body) })
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Formula, ParseError> {
        if let Tok::Dollar(w) = self.peek().clone() {
            let loc = self.loc();
            self.next();
            return match w.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                _ => Err(syntax(loc, format!("unsupported defined symbol `${w}`"))),
            };
        }
        let loc = self.loc();
        let lhs = match self.peek().clone() {
            Tok::Lower(name) | Tok::Quoted(name) | Tok::Number(name) => {
                self.next();
                let args = self.arguments()?;
                if matches!(self.peek(), Tok::Eq | Tok::Neq) {
                    self.arities.check(&sym(&name), SymbolKind::Function, args.len(), loc.clone())?;
                    Term::App(sym(&name), args)
                } else {
                    let pred = sym(&name);
                    self.arities.check(&pred, SymbolKind::Predicate, args.len(), loc)?;
                    return Ok(Formula::Atom(Atom { pred, args }));
                }
            }
            _ => self.term()?,
        };
        match self.peek() {
            Tok::Eq | Tok::Neq => {
                let negated = self.peek() == &Tok::Neq;
                self.next();
                let rhs = self.term()?;
                let a = Formula::Atom(Atom::equality(lhs, rhs));
                Ok(if negated { Formula::not(a) } else { a })
            }
            t => Err(syntax(self.loc(), format!("expected `=` or `!=` after term, found {t}"))),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.peek() == &Tok::LParen {
            self.next();
            loop {
                args.push(self.term()?);
                match self.next() {
                    (Tok::Comma, _) => continue,
                    (Tok::RParen, _) => break,
                    (t, l) => return Err(syntax(l, format!("expected `,` or `)`, found {t}"))),
                }
            }
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (t, loc) = self.next();
        match t {
            Tok::Upper(v) => Ok(Term::Var(self.var_id(&v))),
            Tok::Lower(name) | Tok::Quoted(name) | Tok::Number(name) => {
                let args = self.arguments()?;
                let s = sym(&name);
                self.arities.check(&s, SymbolKind::Function, args.len(), loc)?;
                Ok(Term::App(s, args))
            }
            t => Err(syntax(loc, format!("expected term, found {t}"))),
        }
    }

    fn cnf_clause(&mut self) -> Result<Vec<Literal>, ParseError> {
        let parenthesized = self.peek() == &Tok::LParen && self.paren_wraps_clause();
        if parenthesized {
            self.next();
        }
        let mut lits = Vec::new();
        loop {
            let loc = self.loc();
            let f = self.unitary_literal()?;
            match f {
                Formula::Atom(a) => lits.push(Literal::pos(a)),
                Formula::Not(inner) => match *inner {
                    Formula::Atom(a) => lits.push(Literal::neg(a)),
                    Formula::True => {}
                    Formula::False => return Err(syntax(loc, "`~ $false` is not a literal".into())),
                    _ => return Err(syntax(loc, "expected literal".into())),
                },
                Formula::False => {}
                Formula::True => return Err(syntax(loc, "`$true` is not a literal".into())),
                _ => return Err(syntax(loc, "expected literal".into())),
            }
            if self.peek() == &Tok::Pipe {
                self.next();
            } else {
                break;
            }
        }
        if parenthesized {
            self.expect(Tok::RParen)?;
        }
        Ok(lits)
    }

    fn unitary_literal(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == &Tok::Tilde {
            self.next();
            let inner = self.unitary_literal()?;
            return Ok(Formula::not(inner));
        }
        if self.peek() == &Tok::LParen {
            self.next();
            let f = self.unitary_literal()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        self.atomic()
    }

    /// Distinguishes `(a | b)` from `(a) | b` by scanning to the matching parenthesis.
    fn paren_wraps_clause(&self) -> bool {
        let mut depth = 0usize;
        for (t, _) in &self.toks[self.pos..] {
            match t {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return true;
                    }
                }
                Tok::Pipe if depth == 1 => return true,
                Tok::Eof => return false,
                _ => {}
            }
        }
        false
    }

    fn general_term(&mut self) -> Result<GeneralTerm, ParseError> {
        match self.next() {
            (Tok::LBrack, _) => {
                let mut items = Vec::new();
                if self.peek() == &Tok::RBrack {
                    self.next();
                    return Ok(GeneralTerm::List(items));
                }
                loop {
                    items.push(self.general_term()?);
                    match self.next() {
                        (Tok::Comma, _) => continue,
                        (Tok::RBrack, _) => break,
                        (t, l) => return Err(syntax(l, format!("expected `,` or `]`, found {t}"))),
                    }
                }
                Ok(GeneralTerm::List(items))
            }
            (Tok::Upper(v), _) => Ok(GeneralTerm::Var(v)),
            (Tok::Lower(w) | Tok::Quoted(w) | Tok::Number(w) | Tok::Dollar(w), _) => {
                let mut args = Vec::new();
                if self.peek() == &Tok::LParen {
                    self.next();
                    loop {
                        args.push(self.general_term()?);
                        match self.next() {
                            (Tok::Comma, _) => continue,
                            (Tok::RParen, _) => break,
                            (t, l) => return Err(syntax(l, format!("expected `,` or `)`, found {t}"))),
                        }
                    }
                }
                Ok(GeneralTerm::App(w, args))
            }
            (t, l) => Err(syntax(l, format!("expected annotation term, found {t}"))),
        }
    }
}

fn is_binary_connective(t: &Tok) -> bool {
    matches!(
        t,
        Tok::Amp | Tok::Pipe | Tok::Implies | Tok::RevImplies | Tok::Iff | Tok::Xor | Tok::Nor | Tok::Nand
    )
}

// ---------------------------------------------------------------------------
// Printing

/// Quotes a symbol name unless it is a plain lower word or a number.
pub fn quote_name(name: &str) -> String {
    let mut chars = name.chars();
    let plain = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => name.chars().all(|c| c.is_ascii_digit()),
        _ => false,
    };
    if plain {
        name.to_string()
    } else {
        let mut s = String::from("'");
        for c in name.chars() {
            if c == '\'' || c == '\\' {
                s.push('\\');
            }
            s.push(c);
        }
        s.push('\'');
        s
    }
}

pub struct DisplayTerm<'a>(pub &'a Term);

impl fmt::Display for DisplayTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Term::Var(v) => write!(f, "X{v}"),
            Term::App(s, args) => {
                f.write_str(&quote_name(s))?;
                if !args.is_empty() {
                    f.write_char('(')?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_char(',')?;
                        }
                        write!(f, "{}", DisplayTerm(a))?;
                    }
                    f.write_char(')')?;
                }
                Ok(())
            }
        }
    }
}

pub fn print_term(t: &Term) -> String {
    DisplayTerm(t).to_string()
}

pub fn print_atom(a: &Atom) -> String {
    if a.is_equality() && a.args.len() == 2 {
        format!("{} = {}", DisplayTerm(&a.args[0]), DisplayTerm(&a.args[1]))
    } else {
        print_term(&Term::App(a.pred.clone(), a.args.clone()))
    }
}

pub fn print_literal(l: &Literal) -> String {
    match (l.positive, l.atom.is_equality()) {
        (true, _) => print_atom(&l.atom),
        (false, true) => format!("{} != {}", DisplayTerm(&l.atom.args[0]), DisplayTerm(&l.atom.args[1])),
        (false, false) => format!("~ {}", print_atom(&l.atom)),
    }
}

pub fn print_clause(lits: &[Literal]) -> String {
    if lits.is_empty() {
        return "$false".to_string();
    }
    if lits.len() == 1 {
        return print_literal(&lits[0]);
    }
    let body: Vec<String> = lits.iter().map(print_literal).collect();
    format!("({})", body.join(" | "))
}

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f);
    s
}

fn write_formula(s: &mut String, f: &Formula) {
    match f {
        Formula::True => s.push_str("$true"),
        Formula::False => s.push_str("$false"),
        Formula::Atom(a) => {
            if a.is_equality() {
                s.push('(');
                s.push_str(&print_atom(a));
                s.push(')');
            } else {
                s.push_str(&print_atom(a));
            }
        }
        Formula::Not(g) => {
            s.push_str("~ ");
            write_formula(s, g);
        }
        Formula::And(gs) | Formula::Or(gs) => {
            let op = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            s.push('(');
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    s.push_str(op);
                }
                write_formula(s, g);
            }
            s.push(')');
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let op = if matches!(f, Formula::Implies(..)) { " => " } else { " <=> " };
            s.push('(');
            write_formula(s, a);
            s.push_str(op);
            write_formula(s, b);
            s.push(')');
        }
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            s.push_str(if matches!(f, Formula::Forall(..)) { "! [" } else { "? [" });
            let names: Vec<String> = vs.iter().map(|v| format!("X{v}")).collect();
            s.push_str(&names.join(","));
            s.push_str("] : ");
            write_formula(s, g);
        }
    }
}

pub fn print_statement(st: &Statement) -> String {
    let (kind, body) = match &st.body {
        Body::Formula(f) => ("fof", print_formula(f)),
        Body::Clause(lits) => ("cnf", print_clause(lits)),
    };
    match &st.source {
        Some(src) => format!("{kind}({}, {}, {}, {}).", quote_name(&st.name), st.role, body, src),
        None => format!("{kind}({}, {}, {}).", quote_name(&st.name), st.role, body),
    }
}

pub fn print_statements(sts: &[Statement]) -> String {
    let mut out = String::new();
    for st in sts {
        out.push_str(&print_statement(st));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnf_clause_polarities() {
        let sts = parse_tptp("cnf(c1, axiom, (p(X) | ~q(X,a))).").unwrap();
        assert_eq!(sts.len(), 1);
        let Body::Clause(lits) = &sts[0].body else { panic!("expected clause") };
        assert_eq!(lits.len(), 2);
        assert!(lits[0].positive);
        assert!(!lits[1].positive);
        assert_eq!(lits[1].atom.args[1], Term::constant("a"));
        assert_eq!(lits[0].atom.args[0], lits[1].atom.args[0]);
    }

    #[test]
    fn fof_conjecture() {
        let sts = parse_tptp("fof(t1, conjecture, ! [X] : (p(X) => p(X))).").unwrap();
        assert_eq!(sts[0].role, Role::Conjecture);
        assert!(matches!(sts[0].body, Body::Formula(Formula::Forall(_, _))));
    }

    #[test]
    fn roles_and_comments() {
        let text = "% header\nfof(a, plain, p). /* block\n comment */ cnf(n, negated_conjecture, ~p).\nfof(d, definition, (q <=> p)).";
        let sts = parse_tptp(text).unwrap();
        let roles: Vec<Role> = sts.iter().map(|s| s.role).collect();
        assert_eq!(roles, vec![Role::Plain, Role::NegatedConjecture, Role::Definition]);
    }

    #[test]
    fn equality_and_disequality() {
        let sts = parse_tptp("fof(e, axiom, ! [X,Y] : (X != Y | f(X) = f(Y))).").unwrap();
        let Body::Formula(Formula::Forall(vs, body)) = &sts[0].body else { panic!() };
        assert_eq!(vs, &vec![0, 1]);
        let Formula::Or(items) = &**body else { panic!() };
        assert!(matches!(&items[0], Formula::Not(a) if matches!(&**a, Formula::Atom(at) if at.is_equality())));
    }

    #[test]
    fn quoted_atoms() {
        let sts = parse_tptp("cnf(q, axiom, 'has space'('it''s' )).");
        assert!(sts.is_err());
        let sts = parse_tptp(r"cnf(q, axiom, 'has space'('it\'s')).").unwrap();
        let Body::Clause(lits) = &sts[0].body else { panic!() };
        assert_eq!(&*lits[0].atom.pred, "has space");
        let printed = print_statement(&sts[0]);
        assert_eq!(parse_tptp(&printed).unwrap(), sts);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_tptp("fof(a, axiom,\n  p(X) & ).").unwrap_err();
        match err {
            ParseError::Syntax { loc, .. } => assert_eq!((loc.line, loc.col), (2, 10)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn mixed_connectives_rejected() {
        assert!(parse_tptp("fof(a, axiom, p & q | r).").is_err());
        assert!(parse_tptp("fof(a, axiom, p => q => r).").is_err());
        assert!(parse_tptp("fof(a, axiom, (p & q) | r).").is_ok());
    }

    #[test]
    fn arity_clash_reports_both_locations() {
        let err = parse_tptp("cnf(a, axiom, p(f(X))).\ncnf(b, axiom, p(f(X,Y))).").unwrap_err();
        match err {
            ParseError::ArityClash { symbol, kind, first, second, .. } => {
                assert_eq!(symbol, "f");
                assert_eq!(kind, SymbolKind::Function);
                assert_eq!(first.line, 1);
                assert_eq!(second.line, 2);
            }
            e => panic!("unexpected {e}"),
        }
        // the same name may be used as a function and a predicate independently
        assert!(parse_tptp("cnf(a, axiom, p(p)).").is_ok());
    }

    #[test]
    fn include_resolution() {
        let dir = std::env::temp_dir().join(format!("lgp-inc-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("ax.p"), "fof(ax1, axiom, p(a)).\n").unwrap();
        let opts = ParseOptions { include_root: Some(dir.clone()), file_label: None };
        let sts = parse_tptp_with("include('ax.p').\nfof(c, conjecture, p(a)).", &opts).unwrap();
        assert_eq!(sts.iter().map(|s| s.name.as_str()).collect::<Vec<_>>(), ["ax1", "c"]);
        let err = parse_tptp_with("include('missing.p').", &opts).unwrap_err();
        assert!(matches!(err, ParseError::UnresolvedInclude { ref file, .. } if file == "missing.p"));
        assert!(parse_tptp("include('ax.p').").is_err());
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn annotations_survive_printing() {
        let text = "cnf(c3, plain, $false, inference(resolution, [c1, c2])).";
        let sts = parse_tptp(text).unwrap();
        assert_eq!(sts[0].source.as_ref().unwrap().to_string(), "inference(resolution, [c1, c2])");
        assert_eq!(print_statement(&sts[0]), text);
    }
}
