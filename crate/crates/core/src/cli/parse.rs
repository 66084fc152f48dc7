//! The knowledge-base text format.
//!
//! ```text
//! % comment to end of line
//! a ; b :- c, not d.      % rule: head atoms, then positive and `not` body atoms
//! e.                      % fact
//! #clause a | -b.         % ontology clause
//! ```
//!
//! Statements end with `.` and may share a line. Atoms are interned in order
//! of first appearance.

use std::fmt::Write as _;

use thiserror::Error;

use crate::kb::{is_atom_name, Atom, AtomTable, KnowledgeBase, Rule};
use crate::ontology::{ClausalOntology, Clause, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// 1-based position in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

/// A parsed knowledge base together with where each statement came from.
#[derive(Debug, Clone)]
pub struct KbDocument {
    pub source: String,
    pub atoms: AtomTable,
    pub rules: Vec<Rule>,
    pub clauses: Vec<Clause>,
    pub rule_locations: Vec<Location>,
    pub clause_locations: Vec<Location>,
}

impl KbDocument {
    pub fn into_kb(self) -> KnowledgeBase {
        KnowledgeBase::new(self.atoms, self.rules, ClausalOntology::new(self.clauses))
            .expect("the parser interns every atom it reads")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Semi,
    Comma,
    Pipe,
    Minus,
    Dot,
    If,
    Clause,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Dot => "`.`".into(),
            Tok::If => "`:-`".into(),
            Tok::Clause => "`#clause`".into(),
        }
    }
}

fn error(at: Location, message: impl Into<String>) -> ParseError {
    ParseError {
        line: at.line,
        column: at.column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<(Vec<(Tok, Location)>, Location), ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut at = Location { line: 1, column: 1 };
    let advance = |c: char, at: &mut Location| {
        if c == '\n' {
            at.line += 1;
            at.column = 1;
        } else {
            at.column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = at;
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut at);
            continue;
        }
        if c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                advance(c, &mut at);
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' || c == '#' || c == '\'' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                let ok = c.is_ascii_alphanumeric()
                    || c == '_'
                    || c == '\''
                    || (c == '#' && word.is_empty());
                if !ok {
                    break;
                }
                word.push(c);
                chars.next();
                advance(c, &mut at);
            }
            let tok = if word == "#clause" {
                Tok::Clause
            } else if is_atom_name(&word) {
                Tok::Ident(word)
            } else {
                return Err(error(start, format!("malformed token `{word}`")));
            };
            tokens.push((tok, start));
            continue;
        }
        chars.next();
        advance(c, &mut at);
        let tok = match c {
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '|' => Tok::Pipe,
            '-' => Tok::Minus,
            '.' => Tok::Dot,
            ':' if chars.peek() == Some(&'-') => {
                chars.next();
                advance('-', &mut at);
                Tok::If
            }
            _ => return Err(error(start, format!("unexpected character `{c}`"))),
        };
        tokens.push((tok, start));
    }
    Ok((tokens, at))
}

struct Parser {
    tokens: Vec<(Tok, Location)>,
    pos: usize,
    end: Location,
    doc: KbDocument,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|(t, _)| t)
    }

    fn here(&self) -> Location {
        self.tokens.get(self.pos).map_or(self.end, |&(_, at)| at)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => error(
                self.here(),
                format!("expected {expected}, found {}", t.describe()),
            ),
            None => error(self.end, format!("expected {expected}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(self
                    .doc
                    .atoms
                    .intern(&name)
                    .expect("token grammar matches atom names"))
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    /// After a statement, either `.` or a clear "missing terminator" error.
    fn terminator(&mut self, start: Location) -> Result<(), ParseError> {
        if self.eat(&Tok::Dot) {
            return Ok(());
        }
        match self.peek() {
            None => Err(error(start, "statement is missing its terminating `.`")),
            Some(_) => Err(self.unexpected("`.`")),
        }
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let start = self.here();
        match self.peek() {
            Some(Tok::Clause) => {
                self.pos += 1;
                self.clause(start)
            }
            Some(Tok::If) => Err(error(start, "rule head must contain at least one atom")),
            Some(Tok::Ident(_)) => self.rule(start),
            _ => Err(self.unexpected("a rule or `#clause`")),
        }
    }

    fn rule(&mut self, start: Location) -> Result<(), ParseError> {
        let mut head = vec![self.atom()?];
        while self.eat(&Tok::Semi) {
            head.push(self.atom()?);
        }
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        if self.eat(&Tok::If) {
            loop {
                let negated = matches!(self.peek(), Some(Tok::Ident(n)) if n == "not")
                    && matches!(self.peek_at(1), Some(Tok::Ident(_)));
                if negated {
                    self.pos += 1;
                    neg.push(self.atom()?);
                } else {
                    pos.push(self.atom()?);
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.terminator(start)?;
        let rule = Rule::new(head, pos, neg).expect("head has at least one atom");
        self.doc.rules.push(rule);
        self.doc.rule_locations.push(start);
        Ok(())
    }

    fn clause(&mut self, start: Location) -> Result<(), ParseError> {
        let mut literals = Vec::new();
        loop {
            let positive = !self.eat(&Tok::Minus);
            let atom = self.atom()?;
            literals.push(Literal { atom, positive });
            if !self.eat(&Tok::Pipe) {
                break;
            }
        }
        self.terminator(start)?;
        let clause = Clause::new(literals).map_err(|e| match e {
            crate::Error::TautologicalClause(_) => {
                error(start, "clause contains an atom with both polarities")
            }
            other => error(start, other.to_string()),
        })?;
        self.doc.clauses.push(clause);
        self.doc.clause_locations.push(start);
        Ok(())
    }
}

/// Parses a knowledge base in the text format.
pub fn parse_kb(text: &str) -> Result<KbDocument, ParseError> {
    let (tokens, end) = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
        doc: KbDocument {
            source: text.to_string(),
            atoms: AtomTable::new(),
            rules: Vec::new(),
            clauses: Vec::new(),
            rule_locations: Vec::new(),
            clause_locations: Vec::new(),
        },
    };
    while parser.peek().is_some() {
        parser.statement()?;
    }
    Ok(parser.doc)
}

/// Writes `kb` in the text format, one statement per line: rules in order,
/// then clauses.
pub fn serialize_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    let names = |atoms: &[Atom]| atoms.iter().map(|&a| kb.name(a)).collect::<Vec<_>>();
    for rule in kb.rules() {
        out += &names(rule.head()).join(" ; ");
        let body: Vec<String> = rule
            .body_pos()
            .iter()
            .map(|&a| kb.name(a).to_string())
            .chain(
                rule.body_neg()
                    .iter()
                    .map(|&a| format!("not {}", kb.name(a))),
            )
            .collect();
        if !body.is_empty() {
            let _ = write!(out, " :- {}", body.join(", "));
        }
        out += ".\n";
    }
    for clause in kb.ontology().clauses() {
        let lits: Vec<String> = clause
            .literals()
            .iter()
            .map(|l| format!("{}{}", if l.positive { "" } else { "-" }, kb.name(l.atom)))
            .collect();
        let _ = writeln!(out, "#clause {}.", lits.join(" | "));
    }
    out
}
