//! Formulas over the fixed connective vocabulary, with parsing, rendering,
//! substitution and subformula machinery.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conn {
    Top,
    Bot,
    Neg,
    Circ,
    And,
    Or,
    Imp,
}

impl Conn {
    pub const ALL: [Conn; 7] = [
        Conn::Top,
        Conn::Bot,
        Conn::Neg,
        Conn::Circ,
        Conn::And,
        Conn::Or,
        Conn::Imp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Conn::Top => "top",
            Conn::Bot => "bot",
            Conn::Neg => "neg",
            Conn::Circ => "circ",
            Conn::And => "and",
            Conn::Or => "or",
            Conn::Imp => "imp",
        }
    }

    pub fn from_name(name: &str) -> Option<Conn> {
        Conn::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Conn::Top | Conn::Bot => 0,
            Conn::Neg | Conn::Circ => 1,
            Conn::And | Conn::Or | Conn::Imp => 2,
        }
    }
}

impl fmt::Display for Conn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of connectives; arities are fixed by [`Conn::arity`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    conns: BTreeSet<Conn>,
}

impl Signature {
    pub fn new(conns: impl IntoIterator<Item = Conn>) -> Self {
        Signature {
            conns: conns.into_iter().collect(),
        }
    }

    /// Bounded lattice signature.
    pub fn lattice() -> Self {
        Self::new([Conn::And, Conn::Or, Conn::Top, Conn::Bot])
    }

    /// De Morgan signature.
    pub fn dm() -> Self {
        Self::new([Conn::And, Conn::Or, Conn::Neg, Conn::Top, Conn::Bot])
    }

    pub fn pp() -> Self {
        Self::new([Conn::And, Conn::Or, Conn::Neg, Conn::Circ, Conn::Top, Conn::Bot])
    }

    pub fn pp_imp() -> Self {
        Self::new(Conn::ALL)
    }

    pub fn full() -> Self {
        Self::new(Conn::ALL)
    }

    pub fn contains(&self, c: Conn) -> bool {
        self.conns.contains(&c)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        Conn::from_name(name).filter(|c| self.contains(*c)).map(Conn::arity)
    }

    pub fn conns(&self) -> impl Iterator<Item = Conn> + '_ {
        self.conns.iter().copied()
    }

    /// Connective name to arity map.
    pub fn as_map(&self) -> BTreeMap<String, usize> {
        self.conns.iter().map(|c| (c.name().to_string(), c.arity())).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Arc<str>),
    App(Conn, Arc<[Formula]>),
}

pub type Substitution = BTreeMap<String, Formula>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{name} expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown connective `{0}`")]
    UnknownConnective(String),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn app(c: Conn, args: Vec<Formula>) -> Formula {
        assert_eq!(c.arity(), args.len(), "arity mismatch for {c}");
        Formula::App(c, Arc::from(args))
    }

    pub fn top() -> Formula {
        Formula::app(Conn::Top, vec![])
    }

    pub fn bot() -> Formula {
        Formula::app(Conn::Bot, vec![])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::app(Conn::Neg, vec![a])
    }

    pub fn circ(a: Formula) -> Formula {
        Formula::app(Conn::Circ, vec![a])
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::app(Conn::And, vec![a, b])
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::app(Conn::Or, vec![a, b])
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::app(Conn::Imp, vec![a, b])
    }

    /// `@(~p => p)`
    pub fn up(a: Formula) -> Formula {
        Formula::circ(Formula::imp(Formula::neg(a.clone()), a))
    }

    /// `@(p => ~p)`
    pub fn down(a: Formula) -> Formula {
        Formula::circ(Formula::imp(a.clone(), Formula::neg(a)))
    }

    /// `p => ~(p => p)`
    pub fn hneg(a: Formula) -> Formula {
        Formula::imp(a.clone(), Formula::neg(Formula::imp(a.clone(), a)))
    }

    pub fn delta(a: Formula) -> Formula {
        Formula::hneg(Formula::neg(a))
    }

    pub fn nabla(a: Formula) -> Formula {
        Formula::or(a.clone(), Formula::neg(Formula::circ(a)))
    }

    pub fn wimp(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::or(Formula::neg(a.clone()), Formula::neg(Formula::circ(a))), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Right-nested conjunction; the empty conjunction is `top`.
    pub fn big_and(items: &[Formula]) -> Formula {
        match items.split_last() {
            None => Formula::top(),
            Some((last, rest)) => rest
                .iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::and(f.clone(), acc)),
        }
    }

    /// Right-nested disjunction; the empty disjunction is `bot`.
    pub fn big_or(items: &[Formula]) -> Formula {
        match items.split_last() {
            None => Formula::bot(),
            Some((last, rest)) => rest
                .iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::or(f.clone(), acc)),
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Formula::Var(v) => Some(v),
            Formula::App(..) => None,
        }
    }

    pub fn head(&self) -> Option<Conn> {
        match self {
            Formula::Var(_) => None,
            Formula::App(c, _) => Some(*c),
        }
    }

    pub fn args(&self) -> &[Formula] {
        match self {
            Formula::Var(_) => &[],
            Formula::App(_, a) => a,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Formula::size).sum::<usize>()
    }

    /// Connective nesting depth; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(_, a) if a.is_empty() => 0,
            Formula::App(_, a) => 1 + a.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.to_string());
            }
            Formula::App(_, a) => a.iter().for_each(|x| x.collect_vars(out)),
        }
    }

    /// Subformulas in post-order (children before parents), without repeats.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_subs(&mut seen, &mut out);
        out
    }

    fn collect_subs(&self, seen: &mut BTreeSet<Formula>, out: &mut Vec<Formula>) {
        if seen.contains(self) {
            return;
        }
        for a in self.args() {
            a.collect_subs(seen, out);
        }
        seen.insert(self.clone());
        out.push(self.clone());
    }

    pub fn connectives(&self) -> BTreeSet<Conn> {
        let mut out = BTreeSet::new();
        for s in self.subformulas() {
            if let Some(c) = s.head() {
                out.insert(c);
            }
        }
        out
    }

    pub fn check_signature(&self, sig: &Signature) -> Result<(), FormulaError> {
        match self.connectives().into_iter().find(|c| !sig.contains(*c)) {
            Some(c) => Err(FormulaError::UnknownConnective(c.name().to_string())),
            None => Ok(()),
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        match self {
            Formula::Var(v) => s.get(&**v).cloned().unwrap_or_else(|| self.clone()),
            Formula::App(c, a) => Formula::App(*c, a.iter().map(|x| x.substitute(s)).collect()),
        }
    }

    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> Formula {
        let s: Substitution = map.iter().map(|(k, v)| (k.clone(), Formula::var(v))).collect();
        self.substitute(&s)
    }
}

/// `(sub(f), props(f))`
pub fn decompose(f: &Formula) -> (BTreeSet<Formula>, BTreeSet<String>) {
    (f.subformulas().into_iter().collect(), f.variables())
}

pub fn substitute(f: &Formula, s: &Substitution) -> Formula {
    f.substitute(s)
}

/// Subformulas of a set of formulas, post-order, without repeats.
pub fn subformulas_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in fs {
        f.collect_subs(&mut seen, &mut out);
    }
    out
}

/// `sub(base)` together with every instance of a member of `xi` obtained by
/// mapping its variables into `sub(base)`. Subformulas of the instances are
/// not added.
pub fn generalized_subformulas(base: &[Formula], xi: &[Formula]) -> Vec<Formula> {
    let subs = subformulas_of(base);
    let mut seen: BTreeSet<Formula> = subs.iter().cloned().collect();
    let mut out = subs.clone();
    for x in xi {
        let vars: Vec<String> = x.variables().into_iter().collect();
        for s in assignments(&vars, &subs) {
            let inst = x.substitute(&s);
            if seen.insert(inst.clone()) {
                out.push(inst);
            }
        }
    }
    out
}

/// Every map from `vars` into `range`, in odometer order (last variable
/// fastest).
pub fn assignments(vars: &[String], range: &[Formula]) -> Vec<Substitution> {
    let mut out = vec![Substitution::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|s| {
                range.iter().map(move |t| {
                    let mut s = s.clone();
                    s.insert(v.clone(), t.clone());
                    s
                })
            })
            .collect();
    }
    out
}

// ---------------------------------------------------------------------------
// Rendering

fn prec(f: &Formula) -> u8 {
    match f.head() {
        Some(Conn::Imp) => 1,
        Some(Conn::Or) => 2,
        Some(Conn::And) => 3,
        _ => 4,
    }
}

fn render_into(f: &Formula, out: &mut String) {
    match f {
        Formula::Var(v) => out.push_str(v),
        Formula::App(c, a) => match c {
            Conn::Top => out.push_str("top"),
            Conn::Bot => out.push_str("bot"),
            Conn::Neg | Conn::Circ => {
                out.push(if *c == Conn::Neg { '~' } else { '@' });
                let wrap = prec(&a[0]) < 4;
                wrapped(&a[0], wrap, out);
            }
            Conn::And | Conn::Or | Conn::Imp => {
                let p = prec(f);
                let right_assoc = *c == Conn::Imp;
                let (lp, rp) = (prec(&a[0]), prec(&a[1]));
                wrapped(&a[0], lp < p || (lp == p && right_assoc), out);
                out.push_str(match c {
                    Conn::And => " & ",
                    Conn::Or => " | ",
                    _ => " => ",
                });
                wrapped(&a[1], rp < p || (rp == p && !right_assoc), out);
            }
        },
    }
}

fn wrapped(f: &Formula, wrap: bool, out: &mut String) {
    if wrap {
        out.push('(');
    }
    render_into(f, out);
    if wrap {
        out.push(')');
    }
}

pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    render_into(f, &mut s);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", render_formula(self))
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_formula(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_formula(&s, &Signature::full()).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Tilde,
    At,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Tilde,
            b'@' => Tok::At,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Tok::Arrow));
                i += 2;
                continue;
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(FormulaError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

/// Names of the derived connectives accepted as calls, with their arity.
pub const MACROS: [(&str, usize); 7] = [
    ("up", 1),
    ("down", 1),
    ("delta", 1),
    ("hneg", 1),
    ("nabla", 1),
    ("wimp", 2),
    ("iff", 2),
];

fn expand_macro(name: &str, mut args: Vec<Formula>) -> Formula {
    let b = if args.len() > 1 { args.pop() } else { None };
    let a = args.pop().expect("macro argument");
    match name {
        "up" => Formula::up(a),
        "down" => Formula::down(a),
        "delta" => Formula::delta(a),
        "hneg" => Formula::hneg(a),
        "nabla" => Formula::nabla(a),
        "wimp" => Formula::wimp(a, b.expect("second argument")),
        "iff" => Formula::iff(a, b.expect("second argument")),
        _ => unreachable!("not a macro: {name}"),
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn need(&self, c: Conn) -> Result<(), FormulaError> {
        if self.sig.contains(c) {
            Ok(())
        } else {
            Err(FormulaError::UnknownConnective(c.name().to_string()))
        }
    }

    fn imp(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            self.need(Conn::Imp)?;
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Bar) {
            self.need(Conn::Or)?;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            self.need(Conn::And)?;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if self.eat(&Tok::Tilde) {
            self.need(Conn::Neg)?;
            return Ok(Formula::neg(self.unary()?));
        }
        if self.eat(&Tok::At) {
            self.need(Conn::Circ)?;
            return Ok(Formula::circ(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "top" || name == "bot" {
                    let c = if name == "top" { Conn::Top } else { Conn::Bot };
                    self.need(c)?;
                    return Ok(Formula::app(c, vec![]));
                }
                if self.peek() != Some(&Tok::LParen) {
                    return Ok(Formula::var(&name));
                }
                let Some(&(_, arity)) = MACROS.iter().find(|m| m.0 == name) else {
                    return Err(FormulaError::UnknownConnective(name));
                };
                self.pos += 1;
                let mut args = vec![self.imp()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.imp()?);
                }
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)` closing the argument list");
                }
                if args.len() != arity {
                    return Err(FormulaError::Arity {
                        name,
                        expected: arity,
                        found: args.len(),
                    });
                }
                let f = expand_macro(&name, args);
                f.check_signature(self.sig)?;
                Ok(f)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, FormulaError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
        sig,
    };
    let f = p.imp()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Comma-separated list of formulas; commas inside parentheses belong to
/// macro calls. The empty (or blank) string is the empty list.
pub fn parse_formula_list(text: &str, sig: &Signature) -> Result<Vec<Formula>, FormulaError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_item(&text[start..i], start, sig)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = &text[start..];
    if !(last.trim().is_empty() && out.is_empty()) {
        out.push(parse_item(last, start, sig)?);
    }
    Ok(out)
}

fn parse_item(text: &str, offset: usize, sig: &Signature) -> Result<Formula, FormulaError> {
    parse_formula(text, sig).map_err(|e| match e {
        FormulaError::Syntax { pos, msg } => FormulaError::Syntax { pos: pos + offset, msg },
        other => other,
    })
}

/// Parse with the full signature; panics on bad input. For built-in tables.
pub fn f(text: &str) -> Formula {
    parse_formula(text, &Signature::full()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

// ---------------------------------------------------------------------------
// Hash-consed DAG of formulas

pub const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(Arc<str>),
    App(Conn, u32, u32),
}

/// Interning table. Children always have smaller ids than their parents, so
/// id order is a topological order of the DAG.
#[derive(Clone, Debug, Default)]
pub struct Arena {
    nodes: Vec<Node>,
    formulas: Vec<Formula>,
    index: HashMap<Node, u32>,
}

impl Arena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: u32) -> &Node {
        &self.nodes[id as usize]
    }

    pub fn formula(&self, id: u32) -> &Formula {
        &self.formulas[id as usize]
    }

    pub fn lookup(&self, n: &Node) -> Option<u32> {
        self.index.get(n).copied()
    }

    pub fn find(&self, f: &Formula) -> Option<u32> {
        let n = match f {
            Formula::Var(v) => Node::Var(v.clone()),
            Formula::App(c, a) => {
                let x = a.first().map(|x| self.find(x)).unwrap_or(Some(NONE))?;
                let y = a.get(1).map(|y| self.find(y)).unwrap_or(Some(NONE))?;
                Node::App(*c, x, y)
            }
        };
        self.lookup(&n)
    }

    pub fn intern(&mut self, f: &Formula) -> u32 {
        let n = match f {
            Formula::Var(v) => Node::Var(v.clone()),
            Formula::App(c, a) => {
                let x = a.first().map(|x| self.intern(x)).unwrap_or(NONE);
                let y = a.get(1).map(|y| self.intern(y)).unwrap_or(NONE);
                Node::App(*c, x, y)
            }
        };
        if let Some(id) = self.index.get(&n) {
            return *id;
        }
        let id = self.nodes.len() as u32;
        self.index.insert(n.clone(), id);
        self.nodes.push(n);
        self.formulas.push(f.clone());
        id
    }

    pub fn children(&self, id: u32) -> impl Iterator<Item = u32> {
        let (a, b) = match &self.nodes[id as usize] {
            Node::Var(_) => (NONE, NONE),
            Node::App(_, a, b) => (*a, *b),
        };
        [a, b].into_iter().filter(|x| *x != NONE)
    }
}
