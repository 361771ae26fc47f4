//! Finite deterministic algebras: identities, variety suites, congruences,
//! Leibniz reduction, filters, subalgebras, residuation and unary clones.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{f, Conn, Formula};
use crate::semantics::{members, singleton, MultiAlgebra, PNMatrix, VSet, Value};

pub const DEFAULT_MAX_VARS: usize = 4;
pub const DEFAULT_MAX_CARRIER: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("algebra `{0}` is not deterministic and total")]
    NotDeterministic(String),
    #[error("algebra `{alg}` fails lattice law `{law}`")]
    NotALattice { alg: String, law: String },
    #[error("{found} variables exceed the bound {max}")]
    TooManyVariables { found: usize, max: usize },
    #[error("carrier of size {size} exceeds the bound {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("missing connective `{0}`")]
    MissingConnective(String),
}

/// Deterministic total algebra with the lattice order read off `and`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    pub alg: MultiAlgebra,
    leq: Option<Vec<Vec<bool>>>,
}

impl FiniteAlgebra {
    pub fn new(alg: MultiAlgebra) -> Result<Self, AlgebraError> {
        if !alg.is_deterministic() || !alg.is_total() {
            return Err(AlgebraError::NotDeterministic(alg.name.clone()));
        }
        let mut out = FiniteAlgebra { alg, leq: None };
        if out.alg.has(Conn::And) && out.alg.has(Conn::Or) {
            out.check_lattice()?;
            let n = out.size();
            let leq = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| out.op(Conn::And, &[a as Value, b as Value]) == a as Value)
                        .collect()
                })
                .collect();
            out.leq = Some(leq);
        }
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.alg.name
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    pub fn values(&self) -> impl Iterator<Item = Value> {
        0..self.size() as Value
    }

    pub fn op(&self, c: Conn, args: &[Value]) -> Value {
        self.alg.op(c, args)
    }

    /// Lattice order, when `and` and `or` are present.
    pub fn leq(&self, a: Value, b: Value) -> Option<bool> {
        self.leq.as_ref().map(|t| t[a as usize][b as usize])
    }

    fn require(&self, cs: &[Conn]) -> Result<(), AlgebraError> {
        match cs.iter().find(|c| !self.alg.has(**c)) {
            Some(c) => Err(AlgebraError::MissingConnective(c.name().to_string())),
            None => Ok(()),
        }
    }

    fn bound(&self, max: usize) -> Result<(), AlgebraError> {
        if self.size() > max {
            Err(AlgebraError::CarrierTooLarge { size: self.size(), max })
        } else {
            Ok(())
        }
    }

    fn eval(&self, t: &Formula, env: &BTreeMap<String, Value>) -> Value {
        self.alg.eval(t, env).expect("total deterministic algebra")
    }

    fn check_lattice(&self) -> Result<(), AlgebraError> {
        let mut laws = vec![
            ("x & x = x", "x & x", "x"),
            ("x | x = x", "x | x", "x"),
            ("x & y = y & x", "x & y", "y & x"),
            ("x | y = y | x", "x | y", "y | x"),
            ("x & (y & z) = (x & y) & z", "x & (y & z)", "(x & y) & z"),
            ("x | (y | z) = (x | y) | z", "x | (y | z)", "(x | y) | z"),
            ("x & (x | y) = x", "x & (x | y)", "x"),
            ("x | (x & y) = x", "x | (x & y)", "x"),
        ];
        if self.alg.has(Conn::Top) {
            laws.push(("x & top = x", "x & top", "x"));
        }
        if self.alg.has(Conn::Bot) {
            laws.push(("x | bot = x", "x | bot", "x"));
        }
        for (law, l, r) in laws {
            if check_identity(self, &f(l), &f(r))? != IdentityCheck::Valid {
                return Err(AlgebraError::NotALattice {
                    alg: self.name().to_string(),
                    law: law.to_string(),
                });
            }
        }
        Ok(())
    }

    fn constants(&self) -> VSet {
        self.alg
            .conns()
            .filter(|c| c.arity() == 0)
            .fold(0, |acc, c| acc | singleton(self.op(c, &[])))
    }
}

// ---------------------------------------------------------------------------
// Identities

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IdentityCheck {
    Valid,
    Counterexample(BTreeMap<String, Value>),
}

impl IdentityCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, IdentityCheck::Valid)
    }
}

pub fn check_identity(a: &FiniteAlgebra, lhs: &Formula, rhs: &Formula) -> Result<IdentityCheck, AlgebraError> {
    check_identity_bounded(a, lhs, rhs, DEFAULT_MAX_VARS)
}

/// Exhaustive check; assignments run in carrier order with the last
/// variable (alphabetically) varying fastest.
pub fn check_identity_bounded(
    a: &FiniteAlgebra,
    lhs: &Formula,
    rhs: &Formula,
    max_vars: usize,
) -> Result<IdentityCheck, AlgebraError> {
    for t in [lhs, rhs] {
        for c in t.connectives() {
            a.require(&[c])?;
        }
    }
    let vars: Vec<String> = lhs.variables().union(&rhs.variables()).cloned().collect();
    if vars.len() > max_vars {
        return Err(AlgebraError::TooManyVariables {
            found: vars.len(),
            max: max_vars,
        });
    }
    let n = a.size();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let env: BTreeMap<String, Value> = vars.iter().cloned().zip(idx.iter().map(|i| *i as Value)).collect();
        if a.eval(lhs, &env) != a.eval(rhs, &env) {
            return Ok(IdentityCheck::Counterexample(env));
        }
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(IdentityCheck::Valid);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `lhs ≤ rhs`, encoded as `lhs ≈ lhs ∧ rhs`.
pub fn check_inequality(a: &FiniteAlgebra, lhs: &Formula, rhs: &Formula) -> Result<IdentityCheck, AlgebraError> {
    check_identity(a, lhs, &Formula::and(lhs.clone(), rhs.clone()))
}

// ---------------------------------------------------------------------------
// Variety suites

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Suite {
    DeMorgan,
    InvolutiveStone,
    PP,
    SymmetricHeyting,
    PPImp,
    DeltaIdempotent,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::DeMorgan,
        Suite::InvolutiveStone,
        Suite::PP,
        Suite::SymmetricHeyting,
        Suite::PPImp,
        Suite::DeltaIdempotent,
    ];

    fn needs(self) -> &'static [Conn] {
        use Conn::*;
        match self {
            Suite::DeMorgan => &[And, Or, Neg, Top, Bot],
            Suite::InvolutiveStone | Suite::PP => &[And, Or, Neg, Circ, Top, Bot],
            Suite::SymmetricHeyting => &[And, Or, Neg, Imp, Top, Bot],
            Suite::PPImp => &[And, Or, Neg, Circ, Imp, Top, Bot],
            Suite::DeltaIdempotent => &[And, Neg, Imp],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{self:?}")
    }
}

/// `(name, lhs, rhs)`; inequalities are already in `φ ≈ φ ∧ ψ` form.
pub type Equation = (String, Formula, Formula);

fn eq(name: &str, l: &str, r: &str) -> Equation {
    (name.to_string(), f(l), f(r))
}

fn ineq(name: &str, l: Formula, r: Formula) -> Equation {
    (name.to_string(), l.clone(), Formula::and(l, r))
}

fn nabla(x: Formula) -> Formula {
    Formula::nabla(x)
}

/// `x ∧ ∘x` when `∘` is available, else `¬∼x`.
pub fn delta_term(a: &MultiAlgebra, x: Formula) -> Option<Formula> {
    if a.has(Conn::Circ) && a.has(Conn::And) {
        Some(Formula::and(x.clone(), Formula::circ(x)))
    } else if a.has(Conn::Imp) && a.has(Conn::Neg) {
        Some(Formula::delta(x))
    } else {
        None
    }
}

fn lattice_eqs() -> Vec<Equation> {
    vec![
        eq("distributive", "x & (y | z)", "(x & y) | (x & z)"),
        eq("bot", "x & bot", "bot"),
        eq("top", "x | top", "top"),
    ]
}

pub fn suite_equations(s: Suite, a: &MultiAlgebra) -> Vec<Equation> {
    let x = || Formula::var("x");
    let y = || Formula::var("y");
    let dm = || {
        let mut v = lattice_eqs();
        v.push(eq("DM1", "~~x", "x"));
        v.push(eq("DM2", "~(x & y)", "~x | ~y"));
        v
    };
    let pp = || {
        let mut v = dm();
        v.extend([
            eq("PP1", "@@x", "top"),
            eq("PP2", "@x", "@~x"),
            eq("PP3", "@top", "top"),
            eq("PP4", "x & ~x & @x", "bot"),
            eq("PP5", "@(x & y)", "(@x | @y) & (@x | ~y) & (@y | ~x)"),
        ]);
        v
    };
    let sha = || {
        let mut v = dm();
        v.extend([
            eq("H1", "x => x", "top"),
            eq("H2", "x & (x => y)", "x & y"),
            eq("H3", "y & (x => y)", "y"),
            eq("H4", "x => (y & z)", "(x => y) & (x => z)"),
        ]);
        v
    };
    match s {
        Suite::DeMorgan => dm(),
        Suite::InvolutiveStone => {
            let mut v = dm();
            v.extend([
                ("IS1".to_string(), nabla(Formula::bot()), Formula::bot()),
                ("IS2".to_string(), Formula::and(x(), nabla(x())), x()),
                (
                    "IS3".to_string(),
                    nabla(Formula::and(x(), y())),
                    Formula::and(nabla(x()), nabla(y())),
                ),
                (
                    "IS4".to_string(),
                    Formula::and(Formula::neg(nabla(x())), nabla(x())),
                    Formula::bot(),
                ),
            ]);
            v
        }
        Suite::PP => pp(),
        Suite::SymmetricHeyting => sha(),
        Suite::PPImp => {
            let mut v = pp();
            v.extend(sha().into_iter().filter(|e| e.0.starts_with('H')));
            let l = f("@(x => y) & @(y => z)");
            let r = f("@x | @w | @(w => z) | @(z => y) | @(y => x)");
            v.push(ineq("PPImp", l, r));
            v
        }
        Suite::DeltaIdempotent => {
            let d = |t: Formula| delta_term(a, t).expect("checked by needs()");
            vec![("Delta-idemp".to_string(), d(d(x())), d(x()))]
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Profile {
    pub holds: BTreeSet<Suite>,
    /// Failed equation name and its first counterexample.
    pub fails: BTreeMap<Suite, (String, BTreeMap<String, Value>)>,
    /// Missing connective per skipped suite.
    pub skipped: BTreeMap<Suite, String>,
}

pub fn variety_profile(a: &FiniteAlgebra) -> Result<Profile, AlgebraError> {
    let mut out = Profile::default();
    'suite: for s in Suite::ALL {
        if let Err(AlgebraError::MissingConnective(c)) = a.require(s.needs()) {
            out.skipped.insert(s, c);
            continue;
        }
        if a.leq.is_none() && s != Suite::DeltaIdempotent {
            out.skipped.insert(s, "or".into());
            continue;
        }
        for (name, l, r) in suite_equations(s, &a.alg) {
            if let IdentityCheck::Counterexample(w) = check_identity(a, &l, &r)? {
                out.fails.insert(s, (name, w));
                continue 'suite;
            }
        }
        out.holds.insert(s);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Congruences

/// A partition of the carrier; `blocks` are sorted by least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    pub blocks: Vec<VSet>,
}

impl Congruence {
    fn from_labels(labels: &[usize]) -> Congruence {
        let mut by: BTreeMap<usize, VSet> = BTreeMap::new();
        for (v, l) in labels.iter().enumerate() {
            *by.entry(*l).or_insert(0) |= singleton(v as Value);
        }
        let mut blocks: Vec<VSet> = by.into_values().collect();
        blocks.sort_by_key(|b| b.trailing_zeros());
        Congruence { blocks }
    }

    pub fn identity(n: usize) -> Congruence {
        Congruence {
            blocks: (0..n).map(|v| singleton(v as Value)).collect(),
        }
    }

    pub fn total(n: usize) -> Congruence {
        Congruence {
            blocks: vec![(0..n).fold(0, |acc, v| acc | singleton(v as Value))],
        }
    }

    pub fn block_of(&self, v: Value) -> usize {
        self.blocks
            .iter()
            .position(|b| b & singleton(v) != 0)
            .expect("partition covers the carrier")
    }

    pub fn related(&self, a: Value, b: Value) -> bool {
        self.block_of(a) == self.block_of(b)
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.count_ones() == 1)
    }

    pub fn is_total(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn refines(&self, other: &Congruence) -> bool {
        self.blocks.iter().all(|b| other.blocks.iter().any(|c| b & c == *b))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let mut blocks: Vec<VSet> = self
            .blocks
            .iter()
            .flat_map(|b| other.blocks.iter().map(move |c| b & c))
            .filter(|x| *x != 0)
            .collect();
        blocks.sort_by_key(|b| b.trailing_zeros());
        Congruence { blocks }
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut blocks: Vec<VSet> = vec![];
        for b in self.blocks.iter().chain(&other.blocks) {
            let mut cur = *b;
            blocks.retain(|x| {
                if x & cur != 0 {
                    cur |= x;
                    false
                } else {
                    true
                }
            });
            blocks.push(cur);
        }
        // A merged block may now meet an earlier one.
        let mut changed = true;
        while changed {
            changed = false;
            'outer: for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    if blocks[i] & blocks[j] != 0 {
                        blocks[i] |= blocks[j];
                        blocks.remove(j);
                        changed = true;
                        break 'outer;
                    }
                }
            }
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        Congruence { blocks }
    }

    /// Compatible with every operation.
    pub fn is_congruence_of(&self, a: &FiniteAlgebra) -> bool {
        a.alg.conns().all(|c| {
            let k = c.arity();
            a.alg.tuples(k).into_iter().all(|t| {
                a.alg.tuples(k).into_iter().all(|u| {
                    !t.iter().zip(&u).all(|(x, y)| self.related(*x, *y)) || self.related(a.op(c, &t), a.op(c, &u))
                })
            })
        })
    }

    /// Every block lies inside `d` or outside it.
    pub fn compatible_with(&self, d: VSet) -> bool {
        self.blocks.iter().all(|b| b & d == 0 || b & !d == 0)
    }

    pub fn render(&self, alg: &MultiAlgebra) -> String {
        let bs: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", alg.set_names(*b).join(",")))
            .collect();
        bs.join(" ")
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

/// Least congruence identifying `x` and `y`, by saturating under the
/// translations `c(.., ·, ..)` with all other arguments fixed.
pub fn principal_congruence(a: &FiniteAlgebra, x: Value, y: Value) -> Congruence {
    let n = a.size();
    let mut uf = UnionFind((0..n).collect());
    uf.union(x as usize, y as usize);
    let mut work = vec![(x, y)];
    let conns: Vec<Conn> = a.alg.conns().filter(|c| c.arity() > 0).collect();
    while let Some((u, v)) = work.pop() {
        for c in &conns {
            let k = c.arity();
            for rest in a.alg.tuples(k - 1) {
                for pos in 0..k {
                    let mut t = rest.clone();
                    t.insert(pos, u);
                    let mut s = rest.clone();
                    s.insert(pos, v);
                    let (p, q) = (a.op(*c, &t), a.op(*c, &s));
                    if uf.union(p as usize, q as usize) {
                        work.push((p, q));
                    }
                }
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    Congruence::from_labels(&labels)
}

pub fn congruences(a: &FiniteAlgebra) -> Result<Vec<Congruence>, AlgebraError> {
    congruences_bounded(a, DEFAULT_MAX_CARRIER)
}

/// All congruences, finest first, as joins of principal ones.
pub fn congruences_bounded(a: &FiniteAlgebra, max: usize) -> Result<Vec<Congruence>, AlgebraError> {
    a.bound(max)?;
    let n = a.size();
    let principal: BTreeSet<Congruence> = a
        .values()
        .flat_map(|x| a.values().filter(move |y| x < *y).map(move |y| (x, y)))
        .map(|(x, y)| principal_congruence(a, x, y))
        .collect();
    let mut all: BTreeSet<Congruence> = principal.clone();
    all.insert(Congruence::identity(n));
    let mut frontier: Vec<Congruence> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = vec![];
        for c in &frontier {
            for p in &principal {
                let j = c.join(p);
                if all.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Congruence> = all.into_iter().collect();
    out.sort_by_key(|c| {
        (
            std::cmp::Reverse(c.blocks.len()),
            c.blocks
                .iter()
                .map(|b| members(*b).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    });
    Ok(out)
}

pub fn is_simple(a: &FiniteAlgebra) -> Result<bool, AlgebraError> {
    Ok(congruences(a)?.len() == 2)
}

// ---------------------------------------------------------------------------
// Leibniz congruence

/// Largest congruence compatible with the designated set, and the quotient.
pub fn leibniz_and_reduce(m: &PNMatrix) -> Result<(Congruence, PNMatrix), AlgebraError> {
    let a = FiniteAlgebra::new(m.algebra.clone())?;
    let n = a.size();
    let omega = congruences(&a)?
        .into_iter()
        .filter(|c| c.compatible_with(m.designated))
        .fold(Congruence::identity(n), |acc, c| acc.join(&c));
    debug_assert!(omega.compatible_with(m.designated));
    Ok((omega.clone(), quotient(m, &omega)))
}

/// Quotient matrix; each block is named after its least member.
pub fn quotient(m: &PNMatrix, theta: &Congruence) -> PNMatrix {
    let alg = &m.algebra;
    let reps: Vec<Value> = theta.blocks.iter().map(|b| b.trailing_zeros() as Value).collect();
    let names: Vec<&str> = reps.iter().map(|r| alg.name_of(*r)).collect();
    let mut q = MultiAlgebra::new(&format!("{}/theta", alg.name), &names);
    for c in alg.conns() {
        let k = c.arity();
        q.set_op(c, |args: &[Value]| {
            let t: Vec<Value> = args.iter().map(|i| reps[*i as usize]).collect();
            theta.block_of(alg.op(c, &t)) as Value
        });
        debug_assert_eq!(q.tuples(k).len(), reps.len().pow(k as u32));
    }
    let d = theta
        .blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| *b & m.designated != 0)
        .fold(0, |acc, (i, _)| acc | singleton(i as Value));
    PNMatrix::new(&format!("{}*", m.name), q, d)
}

pub fn is_reduced(m: &PNMatrix) -> Result<bool, AlgebraError> {
    Ok(leibniz_and_reduce(m)?.0.is_identity())
}

// ---------------------------------------------------------------------------
// Filters

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FilterFlavor {
    Lattice,
    Principal,
    Prime,
    Regular,
}

impl FilterFlavor {
    pub fn parse(s: &str) -> Option<FilterFlavor> {
        match s {
            "lattice" => Some(FilterFlavor::Lattice),
            "principal" => Some(FilterFlavor::Principal),
            "prime" => Some(FilterFlavor::Prime),
            "regular" => Some(FilterFlavor::Regular),
            _ => None,
        }
    }
}

fn sorted_sets(mut v: Vec<VSet>) -> Vec<VSet> {
    v.sort_by_key(|x| (x.count_ones(), members(*x).collect::<Vec<_>>()));
    v.dedup();
    v
}

pub fn upset(a: &FiniteAlgebra, x: Value) -> VSet {
    a.values()
        .filter(|y| a.leq(x, *y) == Some(true))
        .fold(0, |acc, y| acc | singleton(y))
}

fn is_lattice_filter(a: &FiniteAlgebra, s: VSet) -> bool {
    s != 0
        && members(s).all(|x| upset(a, x) & !s == 0 && members(s).all(|y| s & singleton(a.op(Conn::And, &[x, y])) != 0))
}

fn unary_image(a: &FiniteAlgebra, t: &Formula, x: Value) -> Value {
    a.eval(t, &[("x".to_string(), x)].into())
}

pub fn filters(a: &FiniteAlgebra, flavor: FilterFlavor) -> Result<Vec<VSet>, AlgebraError> {
    a.require(&[Conn::And, Conn::Or])?;
    a.bound(DEFAULT_MAX_CARRIER)?;
    let full = a.alg.full();
    let lattice: Vec<VSet> = (1..=full).filter(|s| is_lattice_filter(a, *s)).collect();
    let out = match flavor {
        FilterFlavor::Lattice => lattice,
        FilterFlavor::Principal => a.values().map(|x| upset(a, x)).collect(),
        FilterFlavor::Prime => lattice
            .into_iter()
            .filter(|s| *s != full)
            .filter(|s| {
                a.values().all(|x| {
                    a.values()
                        .all(|y| s & singleton(a.op(Conn::Or, &[x, y])) == 0 || s & (singleton(x) | singleton(y)) != 0)
                })
            })
            .collect(),
        FilterFlavor::Regular => {
            a.require(&[Conn::Imp, Conn::Neg])?;
            let d = delta_term(&a.alg, Formula::var("x")).expect("imp and neg present");
            lattice
                .into_iter()
                .filter(|s| members(*s).all(|x| s & singleton(unary_image(a, &d, x)) != 0))
                .collect()
        }
    };
    Ok(sorted_sets(out))
}

/// Lattice filters closed under `a ⇒ b ∈ F` implies `∼b ⇒ ∼a ∈ F`.
pub fn contraposition_closed_filters(a: &FiniteAlgebra) -> Result<Vec<VSet>, AlgebraError> {
    a.require(&[Conn::Imp, Conn::Neg])?;
    let out = filters(a, FilterFlavor::Lattice)?
        .into_iter()
        .filter(|s| {
            a.values().all(|x| {
                a.values().all(|y| {
                    let fwd = a.op(Conn::Imp, &[x, y]);
                    let back = a.op(Conn::Imp, &[a.op(Conn::Neg, &[y]), a.op(Conn::Neg, &[x])]);
                    s & singleton(fwd) == 0 || s & singleton(back) != 0
                })
            })
        })
        .collect();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Subalgebras

pub fn closure(a: &FiniteAlgebra, seed: VSet) -> VSet {
    let mut cur = seed | a.constants();
    loop {
        let mut next = cur;
        let vals: Vec<Value> = members(cur).collect();
        for c in a.alg.conns() {
            for t in crate::semantics::product(&vals, c.arity()) {
                next |= singleton(a.op(c, &t));
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// All subuniverses, smallest first.
pub fn subalgebras(a: &FiniteAlgebra) -> Result<Vec<VSet>, AlgebraError> {
    a.bound(DEFAULT_MAX_CARRIER)?;
    let full = a.alg.full();
    let mut seen: BTreeSet<VSet> = BTreeSet::new();
    for s in 0..=full {
        let c = closure(a, s);
        if c != 0 {
            seen.insert(c);
        }
    }
    Ok(sorted_sets(seen.into_iter().collect()))
}

/// Whether some bijection `x → y` commutes with every operation.
pub fn isomorphic_subuniverses(a: &FiniteAlgebra, x: VSet, y: VSet) -> bool {
    if x.count_ones() != y.count_ones() {
        return false;
    }
    let xs: Vec<Value> = members(x).collect();
    let ys: Vec<Value> = members(y).collect();
    let mut map: HashMap<Value, Value> = HashMap::new();
    fn go(
        a: &FiniteAlgebra,
        xs: &[Value],
        ys: &[Value],
        i: usize,
        map: &mut HashMap<Value, Value>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == xs.len() {
            return a.alg.conns().all(|c| {
                crate::semantics::product(xs, c.arity()).into_iter().all(|t| {
                    let img: Vec<Value> = t.iter().map(|v| map[v]).collect();
                    map[&a.op(c, &t)] == a.op(c, &img)
                })
            });
        }
        for j in 0..ys.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            map.insert(xs[i], ys[j]);
            if go(a, xs, ys, i + 1, map, used) {
                return true;
            }
            used[j] = false;
        }
        map.remove(&xs[i]);
        false
    }
    let mut used = vec![false; ys.len()];
    go(a, &xs, &ys, 0, &mut map, &mut used)
}

/// One subuniverse per isomorphism type, the first in `subalgebras` order.
pub fn subalgebras_up_to_iso(a: &FiniteAlgebra) -> Result<Vec<VSet>, AlgebraError> {
    let mut out: Vec<VSet> = vec![];
    for s in subalgebras(a)? {
        if !out.iter().any(|t| isomorphic_subuniverses(a, *t, s)) {
            out.push(s);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Residuum of meet

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Residuum {
    Table(Vec<Vec<Value>>),
    NotResiduated(Value, Value),
}

pub fn residuum_of_meet(a: &FiniteAlgebra) -> Result<Residuum, AlgebraError> {
    a.require(&[Conn::And, Conn::Or])?;
    let n = a.size();
    let le = |x: Value, y: Value| a.leq(x, y) == Some(true);
    let mut table = vec![vec![0; n]; n];
    for x in a.values() {
        for y in a.values() {
            let cands: Vec<Value> = a.values().filter(|c| le(a.op(Conn::And, &[x, *c]), y)).collect();
            match cands.iter().find(|c| cands.iter().all(|d| le(*d, **c))) {
                Some(m) => table[x as usize][y as usize] = *m,
                None => return Ok(Residuum::NotResiduated(x, y)),
            }
        }
    }
    Ok(Residuum::Table(table))
}

// ---------------------------------------------------------------------------
// Unary clone

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryFunction {
    pub map: Vec<Value>,
    /// A term over `x` inducing `map`.
    pub witness: Formula,
}

/// Complete unary clone, from the identity and the constants, in order of
/// discovery.
pub fn unary_term_functions(a: &FiniteAlgebra) -> Result<Vec<UnaryFunction>, AlgebraError> {
    a.bound(DEFAULT_MAX_CARRIER)?;
    let n = a.size();
    let mut out: Vec<UnaryFunction> = vec![];
    let mut index: HashMap<Vec<Value>, usize> = HashMap::new();
    let add = |out: &mut Vec<UnaryFunction>, index: &mut HashMap<Vec<Value>, usize>, map: Vec<Value>, w: Formula| {
        if !index.contains_key(&map) {
            index.insert(map.clone(), out.len());
            out.push(UnaryFunction { map, witness: w });
        }
    };
    add(&mut out, &mut index, (0..n as Value).collect(), Formula::var("x"));
    for c in a.alg.conns().filter(|c| c.arity() == 0) {
        add(&mut out, &mut index, vec![a.op(c, &[]); n], Formula::app(c, vec![]));
    }
    let conns: Vec<Conn> = a.alg.conns().filter(|c| c.arity() > 0).collect();
    let mut done = 0;
    while done < out.len() {
        let hi = out.len();
        for c in &conns {
            let k = c.arity();
            let mut tuple = vec![0usize; k];
            loop {
                // Only tuples touching the last round can be new.
                if tuple.iter().any(|i| *i >= done) {
                    let map: Vec<Value> = (0..n)
                        .map(|v| {
                            let args: Vec<Value> = tuple.iter().map(|i| out[*i].map[v]).collect();
                            a.op(*c, &args)
                        })
                        .collect();
                    if !index.contains_key(&map) {
                        let w = Formula::app(*c, tuple.iter().map(|i| out[*i].witness.clone()).collect());
                        add(&mut out, &mut index, map, w);
                    }
                }
                let mut j = 0;
                while j < k {
                    tuple[j] += 1;
                    if tuple[j] < hi {
                        break;
                    }
                    tuple[j] = 0;
                    j += 1;
                }
                if j == k {
                    break;
                }
            }
        }
        done = hi;
    }
    Ok(out)
}
