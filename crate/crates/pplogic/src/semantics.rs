//! Finite multialgebras, PNmatrices, valuation search and semantic
//! consequence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{subformulas_of, Arena, Conn, Formula, Node, Signature};

pub type Value = u8;
/// Bitmask over carrier indices.
pub type VSet = u32;

pub const MAX_CARRIER: usize = 32;

pub fn singleton(v: Value) -> VSet {
    1 << v
}

pub fn members(s: VSet) -> impl Iterator<Item = Value> {
    (0..32u8).filter(move |i| s & (1 << i) != 0)
}

/// All tuples of the given length over `vals`, lexicographically.
pub fn product(vals: &[Value], arity: usize) -> Vec<Vec<Value>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Value>| {
                vals.iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(*v);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("connective `{0}` is not interpreted")]
    UnknownConnective(String),
    #[error("`{conn}` takes {expected} argument(s), got {found}")]
    Arity {
        conn: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown value `{0}`")]
    UnknownValue(String),
    #[error("formula `{formula}` uses `{conn}`, which matrix `{matrix}` does not interpret")]
    SignatureMismatch {
        formula: String,
        conn: String,
        matrix: String,
    },
    #[error("Set-Fmla problems need exactly one conclusion, got {0}")]
    SetFmlaArity(usize),
    #[error("value `{value}` is not in entry {conn}({args})")]
    ValueAbsent { conn: String, args: String, value: String },
    #[error("carrier has {0} values; at most {MAX_CARRIER} are supported")]
    CarrierTooLarge(usize),
    #[error("table for `{conn}` is missing tuple ({args})")]
    MissingTuple { conn: String, args: String },
    #[error("malformed JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub arity: usize,
    pub entries: Vec<VSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiAlgebra {
    pub name: String,
    carrier: Vec<String>,
    tables: BTreeMap<Conn, Table>,
}

impl MultiAlgebra {
    pub fn new(name: &str, carrier: &[&str]) -> Self {
        assert!(carrier.len() <= MAX_CARRIER);
        MultiAlgebra {
            name: name.to_string(),
            carrier: carrier.iter().map(|s| s.to_string()).collect(),
            tables: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn full(&self) -> VSet {
        if self.size() == 32 {
            u32::MAX
        } else {
            (1u32 << self.size()) - 1
        }
    }

    pub fn value(&self, name: &str) -> Option<Value> {
        self.carrier.iter().position(|c| c == name).map(|i| i as Value)
    }

    pub fn v(&self, name: &str) -> Value {
        self.value(name)
            .unwrap_or_else(|| panic!("no value {name} in {}", self.name))
    }

    pub fn set(&self, names: &[&str]) -> VSet {
        names.iter().fold(0, |acc, n| acc | singleton(self.v(n)))
    }

    pub fn name_of(&self, v: Value) -> &str {
        &self.carrier[v as usize]
    }

    pub fn set_names(&self, s: VSet) -> Vec<String> {
        members(s).map(|v| self.name_of(v).to_string()).collect()
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.tables.keys().copied())
    }

    pub fn has(&self, c: Conn) -> bool {
        self.tables.contains_key(&c)
    }

    pub fn conns(&self) -> impl Iterator<Item = Conn> + '_ {
        self.tables.keys().copied()
    }

    fn index(&self, args: &[Value]) -> usize {
        args.iter().fold(0usize, |acc, &a| acc * self.size() + a as usize)
    }

    /// All argument tuples of the given arity in lexicographic carrier order.
    pub fn tuples(&self, arity: usize) -> Vec<Vec<Value>> {
        let all: Vec<Value> = (0..self.size() as Value).collect();
        product(&all, arity)
    }

    pub fn set_table_fn(&mut self, c: Conn, f: impl Fn(&[Value]) -> VSet) {
        let entries = self.tuples(c.arity()).iter().map(|t| f(t)).collect();
        self.tables.insert(
            c,
            Table {
                arity: c.arity(),
                entries,
            },
        );
    }

    pub fn set_op(&mut self, c: Conn, f: impl Fn(&[Value]) -> Value) {
        self.set_table_fn(c, |t| singleton(f(t)));
    }

    pub fn remove_op(&mut self, c: Conn) {
        self.tables.remove(&c);
    }

    pub fn entry(&self, c: Conn, args: &[Value]) -> VSet {
        self.tables[&c].entries[self.index(args)]
    }

    pub fn set_entry(&mut self, c: Conn, args: &[Value], s: VSet) {
        let i = self.index(args);
        self.tables.get_mut(&c).expect("connective").entries[i] = s;
    }

    /// The single value of a deterministic entry.
    pub fn op(&self, c: Conn, args: &[Value]) -> Value {
        let e = self.entry(c, args);
        debug_assert_eq!(e.count_ones(), 1, "{c} entry not deterministic");
        e.trailing_zeros() as Value
    }

    pub fn eval_multiop(&self, c: Conn, args: &[Value]) -> Result<VSet, SemanticsError> {
        let t = self
            .tables
            .get(&c)
            .ok_or_else(|| SemanticsError::UnknownConnective(c.name().to_string()))?;
        if t.arity != args.len() {
            return Err(SemanticsError::Arity {
                conn: c.name().to_string(),
                expected: t.arity,
                found: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| **a as usize >= self.size()) {
            return Err(SemanticsError::UnknownValue(a.to_string()));
        }
        Ok(self.entry(c, args))
    }

    pub fn is_deterministic(&self) -> bool {
        self.tables
            .values()
            .all(|t| t.entries.iter().all(|e| e.count_ones() == 1))
    }

    pub fn is_total(&self) -> bool {
        self.tables.values().all(|t| t.entries.iter().all(|e| *e != 0))
    }

    /// Whether every entry with inputs from `x` meets `x`.
    pub fn is_total_on(&self, x: VSet) -> bool {
        let inside: Vec<Value> = members(x).collect();
        self.tables.iter().all(|(c, t)| {
            product(&inside, t.arity)
                .iter()
                .all(|args| self.entry(*c, args) & x != 0)
        })
    }

    /// Restriction to the values in `x`, renumbered in carrier order.
    pub fn restrict(&self, x: VSet) -> MultiAlgebra {
        let keep: Vec<Value> = members(x).filter(|v| (*v as usize) < self.size()).collect();
        let names: Vec<&str> = keep.iter().map(|v| self.name_of(*v)).collect();
        let mut out = MultiAlgebra::new(&self.name, &names);
        let renum = |s: VSet| -> VSet {
            keep.iter()
                .enumerate()
                .filter(|(_, v)| s & singleton(**v) != 0)
                .fold(0, |acc, (i, _)| acc | singleton(i as Value))
        };
        for c in self.tables.keys() {
            out.set_table_fn(*c, |args| {
                let orig: Vec<Value> = args.iter().map(|a| keep[*a as usize]).collect();
                renum(self.entry(*c, &orig))
            });
        }
        out
    }

    /// Value of a formula under a deterministic algebra; `None` when a
    /// variable is unassigned or an entry is not a singleton.
    pub fn eval(&self, f: &Formula, env: &BTreeMap<String, Value>) -> Option<Value> {
        match f {
            Formula::Var(v) => env.get(&**v).copied(),
            Formula::App(c, a) => {
                let args: Option<Vec<Value>> = a.iter().map(|x| self.eval(x, env)).collect();
                let e = self.eval_multiop(*c, &args?).ok()?;
                (e.count_ones() == 1).then(|| e.trailing_zeros() as Value)
            }
        }
    }

    pub fn check_formula(&self, f: &Formula, matrix: &str) -> Result<(), SemanticsError> {
        match f.connectives().into_iter().find(|c| !self.has(*c)) {
            Some(c) => Err(SemanticsError::SignatureMismatch {
                formula: f.to_string(),
                conn: c.name().to_string(),
                matrix: matrix.to_string(),
            }),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PNMatrix {
    pub name: String,
    pub algebra: MultiAlgebra,
    pub designated: VSet,
    components: OnceLock<Vec<VSet>>,
}

impl PartialEq for PNMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.algebra == other.algebra && self.designated == other.designated
    }
}

impl Eq for PNMatrix {}

impl PNMatrix {
    pub fn new(name: &str, algebra: MultiAlgebra, designated: VSet) -> Self {
        PNMatrix {
            name: name.to_string(),
            algebra,
            designated,
            components: OnceLock::new(),
        }
    }

    pub fn with_designated(&self, name: &str, names: &[&str]) -> PNMatrix {
        PNMatrix::new(name, self.algebra.clone(), self.algebra.set(names))
    }

    pub fn undesignated(&self) -> VSet {
        self.algebra.full() & !self.designated
    }

    /// Maximal total components, cached.
    pub fn components(&self) -> &[VSet] {
        self.components.get_or_init(|| total_components(self))
    }

    pub fn restrict(&self, x: VSet) -> PNMatrix {
        let keep: Vec<Value> = members(x).collect();
        let d = keep
            .iter()
            .enumerate()
            .filter(|(_, v)| self.designated & singleton(**v) != 0)
            .fold(0, |acc, (i, _)| acc | singleton(i as Value));
        PNMatrix::new(&self.name, self.algebra.restrict(x), d)
    }
}

/// Assignment of values to a subformula-closed set of formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    pub assignment: BTreeMap<Formula, Value>,
}

impl Valuation {
    pub fn get(&self, f: &Formula) -> Option<Value> {
        self.assignment.get(f).copied()
    }

    /// Variable assignments only, by name.
    pub fn vars(&self) -> BTreeMap<String, Value> {
        self.assignment
            .iter()
            .filter_map(|(f, v)| f.as_var().map(|n| (n.to_string(), *v)))
            .collect()
    }

    pub fn render_vars(&self, alg: &MultiAlgebra) -> String {
        self.vars()
            .iter()
            .map(|(k, v)| format!("{k}={}", alg.name_of(*v)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self, alg: &MultiAlgebra) -> serde_json::Value {
        let m: serde_json::Map<String, serde_json::Value> = self
            .assignment
            .iter()
            .map(|(f, v)| (f.to_string(), serde_json::Value::from(alg.name_of(*v))))
            .collect();
        serde_json::Value::Object(m)
    }
}

// ---------------------------------------------------------------------------
// Valuation search

struct Search<'a> {
    alg: &'a MultiAlgebra,
    arena: Arena,
    allowed: Vec<VSet>,
    order: Vec<u32>,
    values: Vec<Value>,
    out: Vec<Valuation>,
    limit: usize,
}

impl Search<'_> {
    fn run(&mut self, k: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if k == self.order.len() {
            let assignment = (0..self.arena.len() as u32)
                .map(|i| (self.arena.formula(i).clone(), self.values[i as usize]))
                .collect();
            self.out.push(Valuation { assignment });
            return;
        }
        let id = self.order[k];
        let cands = match self.arena.node(id) {
            Node::Var(_) => self.allowed[id as usize],
            Node::App(c, a, b) => {
                let mut args = Vec::with_capacity(2);
                for x in [*a, *b] {
                    if x != crate::formula::NONE {
                        args.push(self.values[x as usize]);
                    }
                }
                self.alg.entry(*c, &args) & self.allowed[id as usize]
            }
        };
        for v in members(cands) {
            self.values[id as usize] = v;
            self.run(k + 1);
            if self.out.len() >= self.limit {
                return;
            }
        }
    }
}

fn search_with_mask(
    alg: &MultiAlgebra,
    domain: &[Formula],
    constraints: &BTreeMap<Formula, VSet>,
    mask: VSet,
    limit: usize,
) -> Vec<Valuation> {
    let mut arena = Arena::new();
    for f in subformulas_of(domain.iter().chain(constraints.keys())) {
        arena.intern(&f);
    }
    let n = arena.len();
    let mut allowed = vec![mask; n];
    for (f, s) in constraints {
        let id = arena.find(f).expect("interned");
        allowed[id as usize] &= *s;
    }
    if allowed.contains(&0) {
        return vec![];
    }
    // variables in name order; each compound node right after its last variable
    let mut vars: Vec<(String, u32)> = (0..n as u32)
        .filter_map(|i| match arena.node(i) {
            Node::Var(v) => Some((v.to_string(), i)),
            _ => None,
        })
        .collect();
    vars.sort();
    let rank: BTreeMap<u32, usize> = vars.iter().enumerate().map(|(r, (_, i))| (*i, r)).collect();
    let mut level = vec![0usize; n];
    for i in 0..n as u32 {
        level[i as usize] = match arena.node(i) {
            Node::Var(_) => rank[&i] + 1,
            Node::App(..) => arena.children(i).map(|c| level[c as usize]).max().unwrap_or(0),
        };
    }
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut ground: Vec<u32> = (0..n as u32).filter(|i| level[*i as usize] == 0).collect();
    order.append(&mut ground);
    for (r, (_, vid)) in vars.iter().enumerate() {
        order.push(*vid);
        order.extend((0..n as u32).filter(|i| level[*i as usize] == r + 1 && !matches!(arena.node(*i), Node::Var(_))));
    }
    let mut s = Search {
        alg,
        arena,
        allowed,
        order,
        values: vec![0; n],
        out: vec![],
        limit,
    };
    s.run(0);
    s.out
}

/// Legal valuations on `domain` (closed under subformulas) whose values lie
/// in the constraint sets. Legality is checked locally, entry by entry.
pub fn solve_valuations(
    m: &PNMatrix,
    domain: &[Formula],
    constraints: &BTreeMap<Formula, VSet>,
    limit: usize,
) -> Vec<Valuation> {
    search_with_mask(&m.algebra, domain, constraints, m.algebra.full(), limit)
}

/// Like [`solve_valuations`] but keeps only valuations that extend to the
/// whole language, i.e. those whose image lies inside a total component.
pub fn solve_extendable(
    m: &PNMatrix,
    domain: &[Formula],
    constraints: &BTreeMap<Formula, VSet>,
    limit: usize,
) -> Vec<Valuation> {
    if m.algebra.is_total() {
        return solve_valuations(m, domain, constraints, limit);
    }
    let mut seen = BTreeSet::new();
    let mut out = vec![];
    for &x in m.components() {
        for v in search_with_mask(&m.algebra, domain, constraints, x, limit) {
            if out.len() >= limit {
                return out;
            }
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Consequence

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    SetSet,
    SetFmla,
}

#[derive(Clone, Debug)]
pub struct ConsequenceProblem {
    pub models: Vec<PNMatrix>,
    pub premises: Vec<Formula>,
    pub conclusions: Vec<Formula>,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails { matrix: usize, witness: Valuation },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Set-Set consequence over a class: holds iff no model has an extendable
/// valuation designating every premise and no conclusion.
pub fn check_consequence(problem: &ConsequenceProblem) -> Result<Verdict, SemanticsError> {
    if problem.mode == Mode::SetFmla && problem.conclusions.len() != 1 {
        return Err(SemanticsError::SetFmlaArity(problem.conclusions.len()));
    }
    for (i, m) in problem.models.iter().enumerate() {
        for f in problem.premises.iter().chain(&problem.conclusions) {
            m.algebra.check_formula(f, &m.name)?;
        }
        if let Some(w) = countermodel(m, &problem.premises, &problem.conclusions) {
            return Ok(Verdict::Fails { matrix: i, witness: w });
        }
    }
    Ok(Verdict::Holds)
}

/// First valuation designating all of `premises` and none of `conclusions`.
pub fn countermodel(m: &PNMatrix, premises: &[Formula], conclusions: &[Formula]) -> Option<Valuation> {
    let mut cons: BTreeMap<Formula, VSet> = BTreeMap::new();
    for p in premises {
        *cons.entry(p.clone()).or_insert(m.algebra.full()) &= m.designated;
    }
    for c in conclusions {
        *cons.entry(c.clone()).or_insert(m.algebra.full()) &= m.undesignated();
    }
    solve_extendable(m, &[], &cons, 1).into_iter().next()
}

/// Convenience wrapper for Set-Set consequence over a class.
pub fn entails(models: &[PNMatrix], premises: &[Formula], conclusions: &[Formula]) -> bool {
    models.iter().all(|m| countermodel(m, premises, conclusions).is_none())
}

pub fn check_rule_soundness(
    premises: &[Formula],
    conclusions: &[Formula],
    models: &[PNMatrix],
) -> Result<Verdict, SemanticsError> {
    check_consequence(&ConsequenceProblem {
        models: models.to_vec(),
        premises: premises.to_vec(),
        conclusions: conclusions.to_vec(),
        mode: Mode::SetSet,
    })
}

// ---------------------------------------------------------------------------
// Components and refinements

/// All maximal `X` such that every entry with inputs from `X` meets `X`,
/// sorted by their carrier-ordered member lists.
pub fn total_components(m: &PNMatrix) -> Vec<VSet> {
    let alg = &m.algebra;
    let n = alg.size();
    assert!(n <= 20, "component search is exponential in the carrier size");
    let total: Vec<VSet> = (1..=alg.full()).filter(|x| alg.is_total_on(*x)).collect();
    let mut maximal: Vec<VSet> = total
        .iter()
        .copied()
        .filter(|x| !total.iter().any(|y| y != x && y & x == *x))
        .collect();
    maximal.sort_by_key(|x| members(*x).collect::<Vec<_>>());
    maximal
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deletion {
    pub conn: Conn,
    pub args: Vec<Value>,
    pub value: Value,
}

pub fn refine_matrix(m: &PNMatrix, deletions: &[Deletion]) -> Result<PNMatrix, SemanticsError> {
    let mut alg = m.algebra.clone();
    for d in deletions {
        let e = alg.eval_multiop(d.conn, &d.args)?;
        if e & singleton(d.value) == 0 {
            return Err(SemanticsError::ValueAbsent {
                conn: d.conn.name().to_string(),
                args: d.args.iter().map(|a| alg.name_of(*a)).collect::<Vec<_>>().join(","),
                value: alg.name_of(d.value).to_string(),
            });
        }
        alg.set_entry(d.conn, &d.args, e & !singleton(d.value));
    }
    Ok(PNMatrix::new(&m.name, alg, m.designated))
}

/// Entrywise differences `base ∖ refined`, or `None` when `refined` is not a
/// refinement of `base`.
pub fn deletions_between(base: &PNMatrix, refined: &PNMatrix) -> Option<Vec<Deletion>> {
    let (a, b) = (&base.algebra, &refined.algebra);
    if a.carrier() != b.carrier() || a.signature() != b.signature() || base.designated != refined.designated {
        return None;
    }
    let mut out = vec![];
    for c in a.conns() {
        for t in a.tuples(c.arity()) {
            let (x, y) = (a.entry(c, &t), b.entry(c, &t));
            if y & !x != 0 {
                return None;
            }
            for v in members(x & !y) {
                out.push(Deletion {
                    conn: c,
                    args: t.clone(),
                    value: v,
                });
            }
        }
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// JSON exchange

#[derive(Serialize, Deserialize)]
struct ConnJson {
    arity: usize,
    table: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    name: String,
    values: Vec<String>,
    #[serde(default)]
    designated: Vec<String>,
    connectives: BTreeMap<String, ConnJson>,
}

fn algebra_to_json(alg: &MultiAlgebra) -> BTreeMap<String, ConnJson> {
    alg.tables
        .iter()
        .map(|(c, t)| {
            let table = alg
                .tuples(t.arity)
                .into_iter()
                .map(|args| {
                    let key = args.iter().map(|a| alg.name_of(*a)).collect::<Vec<_>>().join(",");
                    (key, alg.set_names(alg.entry(*c, &args)))
                })
                .collect();
            (c.name().to_string(), ConnJson { arity: t.arity, table })
        })
        .collect()
}

pub fn matrix_to_json(m: &PNMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixJson {
        name: m.name.clone(),
        values: m.algebra.carrier.clone(),
        designated: m.algebra.set_names(m.designated),
        connectives: algebra_to_json(&m.algebra),
    })
    .expect("serializable")
}

pub fn algebra_to_json_value(alg: &MultiAlgebra) -> serde_json::Value {
    serde_json::to_value(MatrixJson {
        name: alg.name.clone(),
        values: alg.carrier.clone(),
        designated: vec![],
        connectives: algebra_to_json(alg),
    })
    .expect("serializable")
}

pub fn matrix_from_json(v: &serde_json::Value) -> Result<PNMatrix, SemanticsError> {
    let j: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| SemanticsError::Json(e.to_string()))?;
    if j.values.len() > MAX_CARRIER {
        return Err(SemanticsError::CarrierTooLarge(j.values.len()));
    }
    let names: Vec<&str> = j.values.iter().map(String::as_str).collect();
    let mut alg = MultiAlgebra::new(&j.name, &names);
    let lookup = |alg: &MultiAlgebra, n: &str| alg.value(n).ok_or_else(|| SemanticsError::UnknownValue(n.to_string()));
    for (cname, cj) in &j.connectives {
        let c = Conn::from_name(cname).ok_or_else(|| SemanticsError::UnknownConnective(cname.clone()))?;
        if cj.arity != c.arity() {
            return Err(SemanticsError::Arity {
                conn: cname.clone(),
                expected: c.arity(),
                found: cj.arity,
            });
        }
        let mut entries = BTreeMap::new();
        for (k, outs) in &cj.table {
            let args: Vec<Value> = if k.is_empty() {
                vec![]
            } else {
                k.split(',').map(|s| lookup(&alg, s.trim())).collect::<Result<_, _>>()?
            };
            if args.len() != c.arity() {
                return Err(SemanticsError::Arity {
                    conn: cname.clone(),
                    expected: c.arity(),
                    found: args.len(),
                });
            }
            let mut s = 0;
            for o in outs {
                s |= singleton(lookup(&alg, o)?);
            }
            entries.insert(args, s);
        }
        for t in alg.tuples(c.arity()) {
            if !entries.contains_key(&t) {
                return Err(SemanticsError::MissingTuple {
                    conn: cname.clone(),
                    args: t.iter().map(|a| alg.name_of(*a)).collect::<Vec<_>>().join(","),
                });
            }
        }
        alg.set_table_fn(c, |t| entries[t]);
    }
    let mut d = 0;
    for n in &j.designated {
        d |= singleton(lookup(&alg, n)?);
    }
    Ok(PNMatrix::new(&j.name, alg, d))
}

impl fmt::Display for PNMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}, {{{}}}>",
            self.algebra.name,
            self.algebra.set_names(self.designated).join(",")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::f;

    /// Three-element chain with a non-deterministic, partial binary operation.
    fn toy() -> PNMatrix {
        let mut a = MultiAlgebra::new("toy", &["0", "h", "1"]);
        a.set_op(Conn::Neg, |x| 2 - x[0]);
        a.set_table_fn(Conn::And, |x| match (x[0], x[1]) {
            (0, _) | (_, 0) => 0b001,
            (1, 1) => 0b111,
            (1, 2) | (2, 1) => 0,
            _ => 0b100,
        });
        PNMatrix::new("toy", a, 0b100)
    }

    #[test]
    fn multiop_lookup_and_errors() {
        let m = toy();
        assert_eq!(m.algebra.eval_multiop(Conn::And, &[1, 1]).unwrap(), 0b111);
        assert!(matches!(
            m.algebra.eval_multiop(Conn::Or, &[1, 1]),
            Err(SemanticsError::UnknownConnective(_))
        ));
        assert!(matches!(
            m.algebra.eval_multiop(Conn::And, &[1]),
            Err(SemanticsError::Arity { .. })
        ));
        assert!(!m.algebra.is_deterministic());
        assert!(!m.algebra.is_total());
    }

    #[test]
    fn local_and_extendable_valuations_differ_on_partial_entries() {
        let m = toy();
        let cons: BTreeMap<Formula, VSet> = [(f("p"), 0b010), (f("q"), 0b100)].into_iter().collect();
        assert_eq!(solve_valuations(&m, &[], &cons, 10).len(), 1);
        // h & 1 is empty, so h and 1 never live in one total component
        assert!(solve_extendable(&m, &[], &cons, 10).is_empty());
        assert!(solve_valuations(&m, &[f("p & q")], &cons, 10).is_empty());
    }

    #[test]
    fn nondeterministic_entries_enumerate_all_choices() {
        let m = toy();
        let cons: BTreeMap<Formula, VSet> = [(f("p"), 0b010)].into_iter().collect();
        let vs = solve_valuations(&m, &[f("p & p")], &cons, 10);
        assert_eq!(vs.len(), 3);
    }

    #[test]
    fn components_of_toy() {
        let m = toy();
        let comps = total_components(&m);
        for x in &comps {
            assert!(m.algebra.is_total_on(*x));
        }
        assert_eq!(comps, vec![0b101, 0b010]);
    }

    #[test]
    fn refinement_and_json_round_trip() {
        let m = toy();
        let r = refine_matrix(
            &m,
            &[Deletion {
                conn: Conn::And,
                args: vec![1, 1],
                value: 2,
            }],
        )
        .unwrap();
        assert_eq!(r.algebra.entry(Conn::And, &[1, 1]), 0b011);
        assert_eq!(m.algebra.entry(Conn::And, &[1, 1]), 0b111);
        assert_eq!(deletions_between(&m, &r).unwrap().len(), 1);
        assert!(deletions_between(&r, &m).is_none());
        let again = refine_matrix(
            &r,
            &[Deletion {
                conn: Conn::And,
                args: vec![1, 1],
                value: 2,
            }],
        );
        assert!(matches!(again, Err(SemanticsError::ValueAbsent { .. })));
        let j = matrix_to_json(&m);
        assert_eq!(matrix_from_json(&j).unwrap(), m);
        assert_eq!(j["connectives"]["and"]["table"]["h,1"], serde_json::json!([]));
    }

    #[test]
    fn missing_tuple_is_rejected() {
        let mut j = matrix_to_json(&toy());
        j["connectives"]["neg"]["table"].as_object_mut().unwrap().remove("h");
        assert!(matches!(matrix_from_json(&j), Err(SemanticsError::MissingTuple { .. })));
    }

    #[test]
    fn set_fmla_needs_one_conclusion() {
        let p = ConsequenceProblem {
            models: vec![toy()],
            premises: vec![],
            conclusions: vec![],
            mode: Mode::SetFmla,
        };
        assert_eq!(check_consequence(&p), Err(SemanticsError::SetFmlaArity(0)));
    }
}
