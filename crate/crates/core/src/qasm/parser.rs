//! Recursive-descent parser for the OpenQASM 3.0 subset the emitter writes:
//! version header, includes, `qubit`/`bit` declarations, standard gate calls
//! with at most one angle argument, and `measure` assignments.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Gate {
        name: String,
        param: Option<f64>,
        qubits: Vec<u32>,
    },
    /// `bits = measure qubits;` over whole registers, or one element each.
    Measure {
        target: String,
        index: Option<u32>,
        source: String,
        source_index: Option<u32>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub version: String,
    pub includes: Vec<String>,
    /// Register name → (is_qubit, size).
    pub registers: BTreeMap<String, (bool, u32)>,
    pub statements: Vec<Statement>,
}

impl Program {
    pub fn gates(&self) -> impl Iterator<Item = (&str, Option<f64>, &[u32])> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Gate { name, param, qubits } => Some((name.as_str(), *param, qubits.as_slice())),
            Statement::Measure { .. } => None,
        })
    }
}

/// Gate name → (qubit count, takes an angle).
fn signature(name: &str) -> Option<(usize, bool)> {
    Some(match name {
        "h" | "s" | "t" | "x" | "y" | "z" | "sdg" | "tdg" | "id" => (1, false),
        "rx" | "ry" | "rz" => (1, true),
        "cx" | "cz" => (2, false),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    Float(f64),
    Str(String),
    Sym(char),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut lx = Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        };
        let mut out = Vec::new();
        while let Some(t) = lx.next()? {
            out.push(t);
        }
        Ok(out)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.src[self.pos..].starts_with("//") => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek() else { return Ok(None) };
        let tok = if c.is_ascii_alphabetic() || c == '_' || c == 'π' {
            let start = self.pos;
            while self
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == 'π')
            {
                self.bump();
            }
            Tok::Ident(self.src[start..self.pos].to_string())
        } else if c.is_ascii_digit() || c == '.' {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                self.bump();
            }
            if self.peek().is_some_and(|c| c == 'e' || c == 'E') {
                self.bump();
                if self.peek().is_some_and(|c| c == '+' || c == '-') {
                    self.bump();
                }
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
            }
            let text = &self.src[start..self.pos];
            match text.parse::<u32>() {
                Ok(v) => Tok::Int(v),
                Err(_) => Tok::Float(
                    text.parse()
                        .map_err(|_| self.error(format!("bad number {text:?}")))?,
                ),
            }
        } else if c == '"' {
            self.bump();
            let start = self.pos;
            while self.peek().is_some_and(|c| c != '"' && c != '\n') {
                self.bump();
            }
            if self.peek() != Some('"') {
                return Err(self.error("unterminated string"));
            }
            let s = self.src[start..self.pos].to_string();
            self.bump();
            Tok::Str(s)
        } else if "[](),;=+-*/".contains(c) {
            self.bump();
            Tok::Sym(c)
        } else {
            return Err(self.error(format!("unexpected character {c:?}")));
        };
        Ok(Some((tok, line, col)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self
            .toks
            .get(self.i)
            .or(self.toks.last())
            .map_or((1, 1), |t| (t.1, t.2));
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self
            .toks
            .get(self.i)
            .map(|t| t.0.clone())
            .ok_or_else(|| self.error("unexpected end of input"))?;
        self.i += 1;
        Ok(t)
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek().is_none() {
            return Err(self.error(format!("expected '{c}', found end of input")));
        }
        match self.next()? {
            Tok::Sym(s) if s == c => Ok(()),
            other => {
                self.i -= 1;
                Err(self.error(format!("expected '{c}', found {other:?}")))
            }
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            other => {
                self.i -= 1;
                Err(self.error(format!("expected identifier, found {other:?}")))
            }
        }
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        match self.next()? {
            Tok::Int(v) => Ok(v),
            other => {
                self.i -= 1;
                Err(self.error(format!("expected integer, found {other:?}")))
            }
        }
    }

    fn index(&mut self) -> Result<Option<u32>, ParseError> {
        if self.eat_sym('[') {
            let v = self.int()?;
            self.sym(']')?;
            Ok(Some(v))
        } else {
            Ok(None)
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<f64, ParseError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v += self.term()?;
            } else if self.eat_sym('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    // term := factor (('*' | '/') factor)*
    fn term(&mut self) -> Result<f64, ParseError> {
        let mut v = self.factor()?;
        loop {
            if self.eat_sym('*') {
                v *= self.factor()?;
            } else if self.eat_sym('/') {
                v /= self.factor()?;
            } else {
                return Ok(v);
            }
        }
    }

    // factor := '-' factor | number | pi | '(' expr ')'
    fn factor(&mut self) -> Result<f64, ParseError> {
        if self.eat_sym('-') {
            return Ok(-self.factor()?);
        }
        if self.eat_sym('(') {
            let v = self.expr()?;
            self.sym(')')?;
            return Ok(v);
        }
        match self.next()? {
            Tok::Int(v) => Ok(v as f64),
            Tok::Float(v) => Ok(v),
            Tok::Ident(s) if s == "pi" || s == "π" => Ok(PI),
            other => {
                self.i -= 1;
                Err(self.error(format!("expected a number, found {other:?}")))
            }
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        if self.ident()? != "OPENQASM" {
            self.i -= 1;
            return Err(self.error("program must start with OPENQASM"));
        }
        let version = match self.next()? {
            Tok::Float(3.0) => "3.0".to_string(),
            Tok::Int(3) => "3".to_string(),
            other => {
                self.i -= 1;
                return Err(self.error(format!("unsupported version {other:?}")));
            }
        };
        self.sym(';')?;

        let mut prog = Program {
            version,
            includes: Vec::new(),
            registers: BTreeMap::new(),
            statements: Vec::new(),
        };
        while self.peek().is_some() {
            let word = self.ident()?;
            match word.as_str() {
                "include" => match self.next()? {
                    Tok::Str(s) => {
                        self.sym(';')?;
                        prog.includes.push(s);
                    }
                    _ => {
                        self.i -= 1;
                        return Err(self.error("include needs a string"));
                    }
                },
                "qubit" | "bit" => {
                    self.sym('[')?;
                    let size = self.int()?;
                    self.sym(']')?;
                    let name = self.ident()?;
                    self.sym(';')?;
                    if prog.registers.insert(name.clone(), (word == "qubit", size)).is_some() {
                        return Err(self.error(format!("register {name} redeclared")));
                    }
                }
                // Gate calls continue with an angle or an operand, never
                // with `=` or an index.
                _ if matches!(self.peek(), Some(Tok::Sym('=' | '['))) => {
                    let index = self.index()?;
                    self.sym('=')?;
                    if self.ident()? != "measure" {
                        self.i -= 1;
                        return Err(self.error("expected measure"));
                    }
                    let source = self.ident()?;
                    let source_index = self.index()?;
                    self.sym(';')?;
                    self.check_measure(&prog, &word, index, &source, source_index)?;
                    prog.statements.push(Statement::Measure {
                        target: word,
                        index,
                        source,
                        source_index,
                    });
                }
                _ => {
                    let stmt = self.gate_call(&prog, word)?;
                    prog.statements.push(stmt);
                }
            }
        }
        Ok(prog)
    }

    fn check_measure(
        &self,
        prog: &Program,
        target: &str,
        index: Option<u32>,
        source: &str,
        source_index: Option<u32>,
    ) -> Result<(), ParseError> {
        let (t_is_q, t_size) = *prog
            .registers
            .get(target)
            .ok_or_else(|| self.error(format!("undeclared register {target}")))?;
        let (s_is_q, s_size) = *prog
            .registers
            .get(source)
            .ok_or_else(|| self.error(format!("undeclared register {source}")))?;
        if t_is_q || !s_is_q {
            return Err(self.error("measure assigns a qubit register to a bit register"));
        }
        match (index, source_index) {
            (None, None) if t_size == s_size => Ok(()),
            (Some(i), Some(j)) if i < t_size && j < s_size => Ok(()),
            _ => Err(self.error("measure operands differ in shape")),
        }
    }

    fn gate_call(&mut self, prog: &Program, name: String) -> Result<Statement, ParseError> {
        let (arity, takes_angle) = signature(&name).ok_or_else(|| {
            self.i -= 1;
            self.error(format!("unknown gate {name}"))
        })?;
        let param = if self.eat_sym('(') {
            let v = self.expr()?;
            self.sym(')')?;
            Some(v)
        } else {
            None
        };
        if param.is_some() != takes_angle {
            return Err(self.error(format!("gate {name} takes {} angle", if takes_angle { "one" } else { "no" })));
        }
        let mut qubits = Vec::new();
        loop {
            let reg = self.ident()?;
            let Some(&(true, size)) = prog.registers.get(&reg) else {
                return Err(self.error(format!("{reg} is not a qubit register")));
            };
            let at = self.i;
            let idx = self
                .index()?
                .ok_or_else(|| self.error("gate operands must be indexed"))?;
            if idx >= size {
                self.i = at + 1;
                return Err(self.error(format!("{reg}[{idx}] out of range")));
            }
            qubits.push(idx);
            if !self.eat_sym(',') {
                break;
            }
        }
        self.sym(';')?;
        if qubits.len() != arity {
            return Err(self.error(format!("gate {name} takes {arity} qubit(s)")));
        }
        if arity == 2 && qubits[0] == qubits[1] {
            return Err(self.error(format!("gate {name} needs distinct qubits")));
        }
        Ok(Statement::Gate { name, param, qubits })
    }
}

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let toks = Lexer::tokens(src)?;
    Parser { toks, i: 0 }.program()
}

/// Evaluates a constant angle expression.
pub(crate) fn eval_expression(src: &str) -> Option<f64> {
    let toks = Lexer::tokens(src).ok()?;
    if toks.is_empty() {
        return None;
    }
    let mut p = Parser { toks, i: 0 };
    let v = p.expr().ok()?;
    (p.i == p.toks.len()).then_some(v)
}
