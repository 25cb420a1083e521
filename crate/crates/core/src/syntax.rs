//! Modal formulas: the AST, the concrete grammar, a minimal-parenthesis
//! printer, and subformula closure.
//!
//! Concrete syntax, loosest to tightest binding:
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" iff)?
//! imp     := disj ("-->" imp)?
//! disj    := conj ("||" conj)*
//! conj    := unary ("&&" unary)*
//! unary   := "Not" unary | "Box" unary | atom | "True" | "False" | "(" formula ")"
//! ```

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A propositional modal formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    False,
    True,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::False | Formula::True | Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Box(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Modal and connective nesting depth; constants and atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::False | Formula::True | Formula::Atom(_) => 0,
            Formula::Not(a) | Formula::Box(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::False | Formula::True | Formula::Atom(_) => vec![],
            Formula::Not(a) | Formula::Box(a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
        }
    }

    fn tag(&self) -> u8 {
        match self {
            Formula::False => 0,
            Formula::True => 1,
            Formula::Atom(_) => 2,
            Formula::Not(_) => 3,
            Formula::And(..) => 4,
            Formula::Or(..) => 5,
            Formula::Imp(..) => 6,
            Formula::Iff(..) => 7,
            Formula::Box(_) => 8,
        }
    }

    /// Binding strength used by the printer; higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Imp(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }

    pub fn is_box(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Formula::Atom(name) => Some(name),
            _ => None,
        }
    }
}

fn structural_cmp(a: &Formula, b: &Formula) -> Ordering {
    match (a, b) {
        (Formula::Atom(x), Formula::Atom(y)) => x.cmp(y),
        (Formula::Not(x), Formula::Not(y)) | (Formula::Box(x), Formula::Box(y)) => x.cmp(y),
        (Formula::And(x1, x2), Formula::And(y1, y2))
        | (Formula::Or(x1, x2), Formula::Or(y1, y2))
        | (Formula::Imp(x1, x2), Formula::Imp(y1, y2))
        | (Formula::Iff(x1, x2), Formula::Iff(y1, y2)) => x1.cmp(y1).then_with(|| x2.cmp(y2)),
        _ => a.tag().cmp(&b.tag()),
    }
}

/// Canonical order: node count first, then constructor tag
/// (False < True < Atom < Not < And < Or < Imp < Iff < Box), then children.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.tag().cmp(&other.tag()))
            .then_with(|| structural_cmp(self, other))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Subformula closure of `f`, including `f`, in canonical order.
pub fn subformulas(f: &Formula) -> Vec<Formula> {
    let mut acc = BTreeSet::new();
    collect_subformulas(f, &mut acc);
    acc.into_iter().collect()
}

fn collect_subformulas(f: &Formula, acc: &mut BTreeSet<Formula>) {
    if acc.contains(f) {
        return;
    }
    for child in f.children() {
        collect_subformulas(child, acc);
    }
    acc.insert(f.clone());
}

/// Names of the atoms occurring in `f`.
pub fn atoms(f: &Formula) -> BTreeSet<String> {
    let mut acc = BTreeSet::new();
    collect_atoms(f, &mut acc);
    acc
}

fn collect_atoms(f: &Formula, acc: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(name) => {
            acc.insert(name.clone());
        }
        _ => {
            for child in f.children() {
                collect_atoms(child, acc);
            }
        }
    }
}

/// True for nonempty `[a-zA-Z][a-zA-Z0-9_]*` strings that are not keywords.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !is_keyword(name)
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "Not" | "Box" | "True" | "False")
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::False => write!(f, "False"),
            Formula::True => write!(f, "True"),
            Formula::Atom(name) => write!(f, "{name}"),
            Formula::Not(a) => {
                write!(f, "Not ")?;
                write_operand(f, a, a.precedence() < 5)
            }
            Formula::Box(a) => {
                write!(f, "Box ")?;
                write_operand(f, a, a.precedence() < 5)
            }
            // Left-associative: a same-level right operand needs parentheses.
            Formula::And(a, b) => write_binary(f, a, "&&", b, 4, false),
            Formula::Or(a, b) => write_binary(f, a, "||", b, 3, false),
            // Right-associative: a same-level left operand needs parentheses.
            Formula::Imp(a, b) => write_binary(f, a, "-->", b, 2, true),
            Formula::Iff(a, b) => write_binary(f, a, "<->", b, 1, true),
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, a: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({a})")
    } else {
        write!(f, "{a}")
    }
}

fn write_binary(
    f: &mut fmt::Formatter<'_>,
    a: &Formula,
    op: &str,
    b: &Formula,
    prec: u8,
    right_assoc: bool,
) -> fmt::Result {
    let (left_parens, right_parens) = if right_assoc {
        (a.precedence() <= prec, b.precedence() < prec)
    } else {
        (a.precedence() < prec, b.precedence() <= prec)
    };
    write_operand(f, a, left_parens)?;
    write!(f, " {op} ")?;
    write_operand(f, b, right_parens)
}

/// Minimal-parenthesis concrete syntax.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    Box,
    True,
    False,
    LParen,
    RParen,
    And,
    Or,
    Imp,
    Iff,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Not => write!(f, "`Not`"),
            Tok::Box => write!(f, "`Box`"),
            Tok::True => write!(f, "`True`"),
            Tok::False => write!(f, "`False`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::And => write!(f, "`&&`"),
            Tok::Or => write!(f, "`||`"),
            Tok::Imp => write!(f, "`-->`"),
            Tok::Iff => write!(f, "`<->`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let (start_line, start_col) = (line, column);
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if c == '(' {
            (Tok::LParen, 1)
        } else if c == ')' {
            (Tok::RParen, 1)
        } else if rest.starts_with("&&") {
            (Tok::And, 2)
        } else if rest.starts_with("||") {
            (Tok::Or, 2)
        } else if rest.starts_with("-->") {
            (Tok::Imp, 3)
        } else if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "Not" => Tok::Not,
                "Box" => Tok::Box,
                "True" => Tok::True,
                "False" => Tok::False,
                _ => Tok::Ident(word),
            };
            (tok, j - i)
        } else {
            return Err(err(
                start_line,
                start_col,
                format!("unexpected character `{c}`"),
            ));
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
        i += len;
        column += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.peek().tok == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if self.peek().tok == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        while self.peek().tok == Tok::Or {
            self.bump();
            let rhs = self.conj()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Box => Ok(Formula::boxed(self.unary()?)),
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::Ident(name) => Ok(Formula::Atom(name)),
            Tok::LParen => {
                let inner = self.iff()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error_here(format!(
                        "expected `)` to close `(` at line {}, column {}, found {}",
                        t.line,
                        t.column,
                        self.peek().tok
                    )));
                }
                self.bump();
                Ok(inner)
            }
            other => Err(ParseError {
                line: t.line,
                column: t.column,
                message: format!("expected a formula, found {other}"),
            }),
        }
    }
}

/// Parses a formula from its concrete syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let f = parser.iff()?;
    if parser.peek().tok != Tok::Eof {
        return Err(parser.error_here(format!("unexpected {}", parser.peek().tok)));
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
