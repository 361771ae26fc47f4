//! Set-Set Hilbert calculi: rules, analytic proof search, derivation trees,
//! countermodel extraction and the Set-Fmla transform.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{
    assignments, generalized_subformulas, parse_formula_list, subformulas_of, Arena, Conn, Formula, FormulaError, Node,
    Signature, Substitution, NONE,
};
use crate::registry::{self, TenVariant, B, F, HF, HT, N, T};
use crate::semantics::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Framework {
    SetSet,
    SetFmla,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub name: String,
    pub premises: Vec<Formula>,
    pub conclusions: Vec<Formula>,
}

impl Rule {
    pub fn new(name: &str, premises: Vec<Formula>, conclusions: Vec<Formula>) -> Rule {
        Rule {
            name: name.to_string(),
            premises: dedup(premises),
            conclusions: dedup(conclusions),
        }
    }

    /// Parses `"p, q / p & q"`; either side may be blank.
    pub fn parse(name: &str, text: &str) -> Result<Rule, FormulaError> {
        let sig = Signature::full();
        let (l, r) = text.split_once('/').ok_or(FormulaError::Syntax {
            pos: 0,
            msg: "a rule needs `/` between premises and conclusions".into(),
        })?;
        Ok(Rule::new(
            name,
            parse_formula_list(l, &sig)?,
            parse_formula_list(r, &sig)?,
        ))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.premises
            .iter()
            .chain(&self.conclusions)
            .flat_map(|f| f.variables())
            .collect()
    }
}

fn dedup(v: Vec<Formula>) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    v.into_iter().filter(|f| seen.insert(f.clone())).collect()
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[Formula]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "{}: {} / {}",
            self.name,
            side(&self.premises),
            side(&self.conclusions)
        )
    }
}

/// Shorthand used by the built-in calculi; panics on malformed text.
pub fn rule(name: &str, text: &str) -> Rule {
    Rule::parse(name, text).unwrap_or_else(|e| panic!("rule {name}: {e}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calculus {
    pub name: String,
    pub framework: Framework,
    pub rules: Vec<Rule>,
    pub xi: Option<Vec<Formula>>,
    /// For Set-Fmla companions: the Set-Set calculus they were built from.
    pub source: Option<Box<Calculus>>,
}

impl Calculus {
    pub fn new(name: &str, framework: Framework, rules: Vec<Rule>, xi: Option<Vec<Formula>>) -> Self {
        Calculus {
            name: name.to_string(),
            framework,
            rules,
            xi,
            source: None,
        }
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Union of rule lists; later rules with an existing name are skipped.
    pub fn extend(&self, name: &str, extra: &[Rule]) -> Calculus {
        let mut rules = self.rules.clone();
        for r in extra {
            if !rules.iter().any(|x| x.name == r.name) {
                rules.push(r.clone());
            }
        }
        Calculus::new(name, self.framework, rules, self.xi.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "framework": self.framework,
            "xi": self.xi.as_ref().map(|x| x.iter().map(|f| f.to_string()).collect::<Vec<_>>()),
            "rules": self.rules.iter().map(|r| serde_json::json!({
                "name": r.name,
                "premises": r.premises.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "conclusions": r.conclusions.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Calculus, CalculusError> {
        #[derive(Deserialize)]
        struct RuleJson {
            name: String,
            #[serde(default)]
            premises: Vec<String>,
            #[serde(default)]
            conclusions: Vec<String>,
        }
        #[derive(Deserialize)]
        struct CalcJson {
            name: String,
            #[serde(default)]
            framework: Option<Framework>,
            #[serde(default)]
            xi: Option<Vec<String>>,
            rules: Vec<RuleJson>,
        }
        let c: CalcJson = serde_json::from_value(v.clone()).map_err(|e| CalculusError::Json(e.to_string()))?;
        let sig = Signature::full();
        let parse = |v: &[String]| -> Result<Vec<Formula>, CalculusError> {
            v.iter()
                .map(|s| crate::formula::parse_formula(s, &sig).map_err(CalculusError::Formula))
                .collect()
        };
        let mut rules = vec![];
        for r in &c.rules {
            rules.push(Rule::new(&r.name, parse(&r.premises)?, parse(&r.conclusions)?));
        }
        let xi = match &c.xi {
            Some(x) => Some(parse(x)?),
            None => None,
        };
        Ok(Calculus::new(
            &c.name,
            c.framework.unwrap_or(Framework::SetSet),
            rules,
            xi,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("Set-Fmla proof search needs exactly one goal, got {0}")]
    SetFmlaGoal(usize),
    #[error("the calculus has no `or` rules to build a Set-Fmla companion from")]
    MissingDisjunction,
    #[error("partition violates a classification precondition: {0}")]
    Classification(String),
    #[error(transparent)]
    Formula(FormulaError),
    #[error("malformed JSON: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// Derivations

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 1_000_000,
            time_limit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub substitution: Substitution,
}

/// Node of a derivation. The label of a node is the root label plus the
/// `added` formulas on the path to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub added: Option<Formula>,
    #[serde(default)]
    pub star: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<Step>,
    #[serde(default)]
    pub children: Vec<usize>,
}

/// Flat tree; `nodes[0]` is the root and is labelled by `premises`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTree {
    pub premises: Vec<Formula>,
    pub goal: Vec<Formula>,
    pub nodes: Vec<TreeNode>,
}

impl DerivationTree {
    fn leaf(premises: &[Formula], goal: &[Formula]) -> Self {
        DerivationTree {
            premises: premises.to_vec(),
            goal: goal.to_vec(),
            nodes: vec![TreeNode {
                added: None,
                star: false,
                step: None,
                children: vec![],
            }],
        }
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn expansions(&self) -> usize {
        self.nodes.iter().filter(|n| n.step.is_some()).count()
    }

    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((i, d)) = stack.pop() {
            best = best.max(d);
            for &c in &self.nodes[i].children {
                stack.push((c, d + 1));
            }
        }
        best
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tree serializes")
    }

    pub fn to_dot(&self) -> String {
        let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out = String::from("digraph derivation {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let text = if i == 0 {
                let p: Vec<String> = self.premises.iter().map(|f| f.to_string()).collect();
                if p.is_empty() {
                    "{}".to_string()
                } else {
                    p.join(", ")
                }
            } else if n.star {
                "*".to_string()
            } else {
                n.added.as_ref().map(|f| f.to_string()).unwrap_or_default()
            };
            out += &format!("  n{i} [label=\"{}\"];\n", esc(&text));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(st) = &n.step {
                let sub: Vec<String> = st.substitution.iter().map(|(k, v)| format!("{k}:={v}")).collect();
                let label = format!("{}@{{{}}}", st.rule, sub.join(", "));
                for c in &n.children {
                    out += &format!("  n{i} -> n{c} [label=\"{}\"];\n", esc(&label));
                }
            }
        }
        out += "}\n";
        out
    }
}

/// Saturated partition of the candidate set; `lambda` is `sub(premises ∪ goal)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturatedPartition {
    pub omega: Vec<Formula>,
    pub omega_bar: Vec<Formula>,
    pub lambda: Vec<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Proved(DerivationTree),
    Refuted(SaturatedPartition),
    OutOfBudget(String),
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Proved(_) => "proved",
            Outcome::Refuted(_) => "refuted",
            Outcome::OutOfBudget(_) => "out-of-budget",
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, Outcome::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Outcome::Refuted(_))
    }
}

// ---------------------------------------------------------------------------
// Rule instances over a candidate set

#[derive(Clone, Debug)]
enum Pat {
    Var(usize),
    App(Conn, Vec<Pat>),
}

impl Pat {
    fn compile(f: &Formula, names: &mut Vec<String>) -> Pat {
        match f {
            Formula::Var(v) => {
                let i = match names.iter().position(|n| n.as_str() == &**v) {
                    Some(i) => i,
                    None => {
                        names.push(v.to_string());
                        names.len() - 1
                    }
                };
                Pat::Var(i)
            }
            Formula::App(c, a) => Pat::App(*c, a.iter().map(|x| Pat::compile(x, names)).collect()),
        }
    }

    fn size(&self) -> usize {
        match self {
            Pat::Var(_) => 1,
            Pat::App(_, a) => 1 + a.iter().map(Pat::size).sum::<usize>(),
        }
    }

    fn vars(&self, out: &mut Vec<usize>) {
        match self {
            Pat::Var(v) => out.push(*v),
            Pat::App(_, a) => a.iter().for_each(|p| p.vars(out)),
        }
    }
}

struct CompiledRule {
    vars: Vec<String>,
    pats: Vec<Pat>,
    pat_vars: Vec<Vec<usize>>,
    n_prem: usize,
    order: Vec<usize>,
}

impl CompiledRule {
    fn new(r: &Rule) -> Self {
        let mut vars = vec![];
        let pats: Vec<Pat> = r
            .premises
            .iter()
            .chain(&r.conclusions)
            .map(|f| Pat::compile(f, &mut vars))
            .collect();
        let pat_vars: Vec<Vec<usize>> = pats
            .iter()
            .map(|p| {
                let mut v = vec![];
                p.vars(&mut v);
                v
            })
            .collect();
        // Checks whose variables are already bound go first, otherwise the
        // largest pattern binds the most.
        let mut bound = vec![false; vars.len()];
        let mut left: Vec<usize> = (0..pats.len()).collect();
        let mut order = vec![];
        while !left.is_empty() {
            let k = left
                .iter()
                .position(|&j| pat_vars[j].iter().all(|&v| bound[v]))
                .unwrap_or_else(|| {
                    (0..left.len())
                        .max_by_key(|&k| (pats[left[k]].size(), std::cmp::Reverse(k)))
                        .unwrap()
                });
            let j = left.remove(k);
            pat_vars[j].iter().for_each(|&v| bound[v] = true);
            order.push(j);
        }
        CompiledRule {
            vars,
            pats,
            pat_vars,
            n_prem: r.premises.len(),
            order,
        }
    }
}

struct Inst {
    rule: u32,
    binding: Vec<u32>,
    ant: Vec<u32>,
    succ: Vec<u32>,
    nongoal: u32,
}

struct Matcher<'a> {
    arena: &'a Arena,
    in_u: &'a [bool],
    u: &'a [u32],
    by_head: HashMap<Conn, Vec<u32>>,
}

impl Matcher<'_> {
    fn matches(&self, p: &Pat, id: u32, b: &mut [u32]) -> bool {
        match p {
            Pat::Var(v) => {
                if b[*v] == NONE {
                    b[*v] = id;
                    true
                } else {
                    b[*v] == id
                }
            }
            Pat::App(c, ps) => match self.arena.node(id) {
                Node::App(c2, x, y) if c2 == c => {
                    let kids = [*x, *y];
                    ps.iter().zip(kids).all(|(p, k)| self.matches(p, k, b))
                }
                _ => false,
            },
        }
    }

    fn build(&self, p: &Pat, b: &[u32]) -> Option<u32> {
        match p {
            Pat::Var(v) => Some(b[*v]),
            Pat::App(c, ps) => {
                let x = match ps.first() {
                    Some(q) => self.build(q, b)?,
                    None => NONE,
                };
                let y = match ps.get(1) {
                    Some(q) => self.build(q, b)?,
                    None => NONE,
                };
                self.arena.lookup(&Node::App(*c, x, y))
            }
        }
    }

    fn walk(
        &self,
        r: &CompiledRule,
        k: usize,
        b: &mut Vec<u32>,
        ids: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, Vec<u32>)>,
        cap: usize,
    ) -> bool {
        if out.len() > cap {
            return false;
        }
        if k == r.order.len() {
            out.push((b.clone(), ids.clone()));
            return true;
        }
        let j = r.order[k];
        let p = &r.pats[j];
        if r.pat_vars[j].iter().all(|&v| b[v] != NONE) {
            if let Some(id) = self.build(p, b) {
                if self.in_u[id as usize] {
                    ids[j] = id;
                    return self.walk(r, k + 1, b, ids, out, cap);
                }
            }
            return true;
        }
        let cands: &[u32] = match p {
            Pat::Var(_) => self.u,
            Pat::App(c, _) => self.by_head.get(c).map(|v| v.as_slice()).unwrap_or(&[]),
        };
        let saved = b.clone();
        for &id in cands {
            if self.matches(p, id, b) {
                ids[j] = id;
                if !self.walk(r, k + 1, b, ids, out, cap) {
                    return false;
                }
            }
            b.copy_from_slice(&saved);
        }
        true
    }
}

const MAX_INSTANCES: usize = 5_000_000;
const LOOKAHEAD: usize = 32;

struct RawNode {
    added: Option<u32>,
    star: bool,
    inst: Option<u32>,
    children: Vec<usize>,
}

enum Stop {
    Refuted,
    Budget(String),
}

struct Engine<'a> {
    rules: &'a [Rule],
    compiled: Vec<CompiledRule>,
    arena: Arena,
    u: Vec<u32>,
    goal: Vec<bool>,
    insts: Vec<Inst>,
    ant_of: Vec<Vec<u32>>,
    succ_of: Vec<Vec<u32>>,
    missing: Vec<u32>,
    sat: Vec<u32>,
    fired: Vec<u32>,
    label: Vec<bool>,
    tree: Vec<RawNode>,
    refuted_label: Option<Vec<bool>>,
    expansions: u64,
    budget: Budget,
    start: Instant,
}

impl<'a> Engine<'a> {
    fn new(rules: &'a [Rule], cands: &[Formula], goal: &[Formula], budget: Budget) -> Result<Self, String> {
        let start = Instant::now();
        let mut arena = Arena::new();
        let mut u = vec![];
        let mut seen = HashSet::new();
        for f in cands.iter().chain(goal) {
            let id = arena.intern(f);
            if seen.insert(id) {
                u.push(id);
            }
        }
        let n = arena.len();
        let mut in_u = vec![false; n];
        u.iter().for_each(|&i| in_u[i as usize] = true);
        let mut goal_mask = vec![false; n];
        for g in goal {
            goal_mask[arena.find(g).unwrap() as usize] = true;
        }
        let mut by_head: HashMap<Conn, Vec<u32>> = HashMap::new();
        for &i in &u {
            if let Some(c) = arena.formula(i).head() {
                by_head.entry(c).or_default().push(i);
            }
        }
        let compiled: Vec<CompiledRule> = rules.iter().map(CompiledRule::new).collect();
        let matcher = Matcher {
            arena: &arena,
            in_u: &in_u,
            u: &u,
            by_head,
        };
        let mut insts = vec![];
        let mut keys = HashSet::new();
        for (ri, r) in compiled.iter().enumerate() {
            let mut found = vec![];
            let mut b = vec![NONE; r.vars.len()];
            let mut ids = vec![NONE; r.pats.len()];
            if !matcher.walk(r, 0, &mut b, &mut ids, &mut found, MAX_INSTANCES) {
                return Err(format!("more than {MAX_INSTANCES} instances of {}", rules[ri].name));
            }
            for (binding, ids) in found {
                let mut ant = ids[..r.n_prem].to_vec();
                ant.sort_unstable();
                ant.dedup();
                let mut succ = vec![];
                for &x in &ids[r.n_prem..] {
                    if !succ.contains(&x) {
                        succ.push(x);
                    }
                }
                if succ.iter().any(|x| ant.binary_search(x).is_ok()) {
                    continue;
                }
                let mut sorted = succ.clone();
                sorted.sort_unstable();
                if !keys.insert((ant.clone(), sorted)) {
                    continue;
                }
                let nongoal = succ.iter().filter(|&&x| !goal_mask[x as usize]).count() as u32;
                insts.push(Inst {
                    rule: ri as u32,
                    binding,
                    ant,
                    succ,
                    nongoal,
                });
                if insts.len() > MAX_INSTANCES {
                    return Err(format!("more than {MAX_INSTANCES} rule instances"));
                }
            }
            if let Some(t) = budget.time_limit {
                if start.elapsed() > t {
                    return Err("time limit reached while enumerating rule instances".into());
                }
            }
        }
        let mut ant_of = vec![vec![]; n];
        let mut succ_of = vec![vec![]; n];
        let mut missing = vec![0; insts.len()];
        let mut fired = vec![];
        for (i, inst) in insts.iter().enumerate() {
            for &a in &inst.ant {
                ant_of[a as usize].push(i as u32);
            }
            for &s in &inst.succ {
                succ_of[s as usize].push(i as u32);
            }
            missing[i] = inst.ant.len() as u32;
            if inst.ant.is_empty() {
                fired.push(i as u32);
            }
        }
        Ok(Engine {
            rules,
            compiled,
            sat: vec![0; insts.len()],
            arena,
            u,
            goal: goal_mask,
            insts,
            ant_of,
            succ_of,
            missing,
            fired,
            label: vec![false; n],
            tree: vec![],
            refuted_label: None,
            expansions: 0,
            budget,
            start,
        })
    }

    fn add(&mut self, id: u32) {
        self.label[id as usize] = true;
        let ants = std::mem::take(&mut self.ant_of[id as usize]);
        for &i in &ants {
            self.missing[i as usize] -= 1;
            if self.missing[i as usize] == 0 {
                self.fired.push(i);
            }
        }
        self.ant_of[id as usize] = ants;
        for &i in &self.succ_of[id as usize] {
            self.sat[i as usize] += 1;
        }
    }

    fn remove(&mut self, id: u32, fired_len: usize) {
        self.label[id as usize] = false;
        for &i in &self.ant_of[id as usize] {
            self.missing[i as usize] += 1;
        }
        for &i in &self.succ_of[id as usize] {
            self.sat[i as usize] -= 1;
        }
        self.fired.truncate(fired_len);
    }

    /// Applicable instance adding the fewest formulas outside the goal,
    /// preferring the most recently enabled one. Among branching instances,
    /// those whose children close by unit steps alone win.
    fn choose(&mut self) -> Option<u32> {
        let mut branching = vec![];
        for &i in self.fired.iter().rev() {
            if self.sat[i as usize] == 0 {
                if self.insts[i as usize].nongoal <= 1 {
                    return Some(i);
                }
                branching.push(i);
            }
        }
        let mut best = None;
        let mut best_open = usize::MAX;
        for &i in branching.iter().take(LOOKAHEAD) {
            let succ = self.insts[i as usize].succ.clone();
            let open = succ
                .iter()
                .filter(|&&x| !self.goal[x as usize] && !self.closes_by_units(x))
                .count();
            if open < best_open {
                best = Some(i);
                best_open = open;
                if open == 0 {
                    break;
                }
            }
        }
        best.or(branching.first().copied())
    }

    /// Whether adding `x` and then only non-branching steps reaches a leaf.
    fn closes_by_units(&mut self, x: u32) -> bool {
        let mut trail = vec![(x, self.fired.len())];
        self.add(x);
        let closed = loop {
            let mut step = None;
            for &i in self.fired.iter().rev() {
                if self.sat[i as usize] == 0 && self.insts[i as usize].nongoal <= 1 {
                    step = Some(i);
                    break;
                }
            }
            let Some(i) = step else { break false };
            let inst = &self.insts[i as usize];
            match inst.succ.iter().find(|&&y| !self.goal[y as usize]) {
                Some(&y) if inst.nongoal == 1 && inst.succ.len() == 1 => {
                    trail.push((y, self.fired.len()));
                    self.add(y);
                }
                _ => break true,
            }
        };
        for (y, fl) in trail.into_iter().rev() {
            self.remove(y, fl);
        }
        closed
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.expansions += 1;
        if self.expansions > self.budget.max_nodes {
            return Err(Stop::Budget(format!(
                "node limit of {} expansions reached",
                self.budget.max_nodes
            )));
        }
        if self.expansions.is_multiple_of(1024) {
            if let Some(t) = self.budget.time_limit {
                if self.start.elapsed() > t {
                    return Err(Stop::Budget(format!("time limit of {t:?} reached")));
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, added: Option<u32>, star: bool) -> usize {
        self.tree.push(RawNode {
            added,
            star,
            inst: None,
            children: vec![],
        });
        self.tree.len() - 1
    }

    /// Replaces the content of `at` by that of its descendant `from`.
    fn splice(&mut self, at: usize, from: usize) {
        self.tree[at].inst = self.tree[from].inst;
        self.tree[at].children = std::mem::take(&mut self.tree[from].children);
    }

    /// Closes the node `at` and returns the label formulas the proof uses.
    /// Unit steps are applied iteratively; recursion happens only at
    /// branchings. A branch whose subproof ignores the formula it added
    /// replaces the whole branching.
    fn expand(&mut self, at: usize) -> Result<BTreeSet<u32>, Stop> {
        let mut chain: Vec<(usize, u32, u32, usize)> = vec![];
        let mut cur = at;
        let res = loop {
            if let Err(e) = self.tick() {
                break Err(e);
            }
            let Some(i) = self.choose() else {
                self.refuted_label = Some(self.label.clone());
                break Err(Stop::Refuted);
            };
            self.tree[cur].inst = Some(i);
            let succ = self.insts[i as usize].succ.clone();
            let ant: BTreeSet<u32> = self.insts[i as usize].ant.iter().copied().collect();
            if succ.is_empty() {
                let s = self.push(None, true);
                self.tree[cur].children.push(s);
                break Ok(ant);
            }
            let mut open = vec![];
            for &x in &succ {
                let c = self.push(Some(x), false);
                self.tree[cur].children.push(c);
                if !self.goal[x as usize] {
                    open.push((x, c));
                }
            }
            if open.len() == 1 {
                let (x, c) = open[0];
                chain.push((cur, i, x, self.fired.len()));
                self.add(x);
                cur = c;
                continue;
            }
            let mut used = ant;
            let mut r = Ok(());
            for (x, c) in open {
                let fl = self.fired.len();
                self.add(x);
                let sub = self.expand(c);
                self.remove(x, fl);
                match sub {
                    Err(e) => {
                        r = Err(e);
                        break;
                    }
                    Ok(u) if !u.contains(&x) => {
                        self.splice(cur, c);
                        used = u;
                        break;
                    }
                    Ok(mut u) => {
                        u.remove(&x);
                        used.extend(u);
                    }
                }
            }
            break r.map(|_| used);
        };
        let res = res.map(|mut used| {
            for &(node, i, x, _) in chain.iter().rev() {
                let child = *self.tree[node]
                    .children
                    .iter()
                    .find(|&&c| self.tree[c].added == Some(x))
                    .unwrap();
                if used.remove(&x) {
                    used.extend(self.insts[i as usize].ant.iter().copied());
                } else {
                    self.splice(node, child);
                }
            }
            used
        });
        for &(_, _, x, fl) in chain.iter().rev() {
            self.remove(x, fl);
        }
        res
    }

    fn run(mut self, premises: &[Formula], goal: &[Formula], lambda: Vec<Formula>) -> Outcome {
        let root = self.push(None, false);
        for p in premises {
            let id = self.arena.find(p).expect("premise in candidate set");
            if self.goal[id as usize] {
                return Outcome::Proved(DerivationTree::leaf(premises, goal));
            }
            if !self.label[id as usize] {
                self.add(id);
            }
        }
        match self.expand(root) {
            Ok(_) => Outcome::Proved(self.export(premises, goal)),
            Err(Stop::Budget(msg)) => Outcome::OutOfBudget(msg),
            Err(Stop::Refuted) => {
                let label = self.refuted_label.take().unwrap();
                let (mut omega, mut omega_bar) = (vec![], vec![]);
                for &i in &self.u {
                    let f = self.arena.formula(i).clone();
                    if label[i as usize] {
                        omega.push(f);
                    } else {
                        omega_bar.push(f);
                    }
                }
                Outcome::Refuted(SaturatedPartition {
                    omega,
                    omega_bar,
                    lambda,
                })
            }
        }
    }

    fn export(&self, premises: &[Formula], goal: &[Formula]) -> DerivationTree {
        // Splicing leaves unreachable nodes behind; renumber in preorder.
        let mut order = vec![];
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            order.push(i);
            stack.extend(self.tree[i].children.iter().rev());
        }
        let mut index = vec![usize::MAX; self.tree.len()];
        for (k, &i) in order.iter().enumerate() {
            index[i] = k;
        }
        let nodes = order
            .iter()
            .map(|&i| &self.tree[i])
            .map(|n| TreeNode {
                added: n.added.map(|x| self.arena.formula(x).clone()),
                star: n.star,
                step: n.inst.map(|i| {
                    let inst = &self.insts[i as usize];
                    let cr = &self.compiled[inst.rule as usize];
                    Step {
                        rule: self.rules[inst.rule as usize].name.clone(),
                        substitution: cr
                            .vars
                            .iter()
                            .zip(&inst.binding)
                            .map(|(v, &id)| (v.clone(), self.arena.formula(id).clone()))
                            .collect(),
                    }
                }),
                children: n.children.iter().map(|&c| index[c]).collect(),
            })
            .collect();
        DerivationTree {
            premises: premises.to_vec(),
            goal: goal.to_vec(),
            nodes,
        }
    }
}

/// Level-one candidate set for calculi without analyticity generators:
/// `sub(base)` plus instances of rule subformulas over `sub(base)`.
fn bounded_candidates(rules: &[Rule], base: &[Formula]) -> Vec<Formula> {
    let subs = subformulas_of(base);
    let max = base.iter().map(Formula::size).max().unwrap_or(1);
    let mut seen: HashSet<Formula> = subs.iter().cloned().collect();
    let mut out = subs.clone();
    let pats: BTreeSet<Formula> = rules
        .iter()
        .flat_map(|r| r.premises.iter().chain(&r.conclusions))
        .flat_map(|f| f.subformulas())
        .filter(|f| f.as_var().is_none())
        .collect();
    for g in pats {
        let vars: Vec<String> = g.variables().into_iter().collect();
        if subs.len().saturating_pow(vars.len() as u32) > 20_000 {
            continue;
        }
        for s in assignments(&vars, &subs) {
            let inst = g.substitute(&s);
            if inst.size() <= 2 * max + 4 && seen.insert(inst.clone()) {
                out.push(inst);
            }
        }
    }
    out
}

/// Analytic proof search for `premises ▷ goal`.
///
/// With generators the search space is exactly the generalized subformula
/// set and failure yields a saturated partition. Without them a bounded
/// candidate set is searched and failure is reported as `OutOfBudget`.
pub fn prove(c: &Calculus, premises: &[Formula], goal: &[Formula], budget: Budget) -> Result<Outcome, CalculusError> {
    if c.framework == Framework::SetFmla && goal.len() != 1 {
        return Err(CalculusError::SetFmlaGoal(goal.len()));
    }
    let premises = dedup(premises.to_vec());
    let goal = dedup(goal.to_vec());
    if let Some(src) = &c.source {
        return Ok(match prove(src, &premises, &goal, budget)? {
            Outcome::Proved(t) => Outcome::Proved(linearize(c, src, &t)),
            other => other,
        });
    }
    let base: Vec<Formula> = premises.iter().chain(&goal).cloned().collect();
    let lambda = subformulas_of(&base);
    let (cands, analytic) = match &c.xi {
        Some(xi) => (generalized_subformulas(&base, xi), true),
        None => (bounded_candidates(&c.rules, &base), false),
    };
    let engine = match Engine::new(&c.rules, &cands, &goal, budget) {
        Ok(e) => e,
        Err(msg) => return Ok(Outcome::OutOfBudget(msg)),
    };
    Ok(match engine.run(&premises, &goal, lambda) {
        Outcome::Refuted(_) if !analytic => {
            Outcome::OutOfBudget("saturated a bounded candidate set; the calculus has no analyticity generators".into())
        }
        o => o,
    })
}

// ---------------------------------------------------------------------------
// Tree checking

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub node: usize,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {}", self.node, self.reason)
    }
}

/// Re-checks every expansion and leaf of `t`, independently of the search.
pub fn validate_tree(
    c: &Calculus,
    t: &DerivationTree,
    premises: &[Formula],
    goal: &[Formula],
) -> Result<(), Violation> {
    let bad = |node: usize, reason: String| Err(Violation { node, reason });
    if t.nodes.is_empty() {
        return bad(0, "empty tree".into());
    }
    let allowed: HashSet<&Formula> = premises.iter().collect();
    if let Some(f) = t.premises.iter().find(|f| !allowed.contains(f)) {
        return bad(0, format!("root label contains {f}, which is not a premise"));
    }
    if t.nodes[0].added.is_some() || t.nodes[0].star {
        return bad(0, "root must not add a formula".into());
    }
    let goal: HashSet<&Formula> = goal.iter().collect();
    let mut count: HashMap<Formula, usize> = HashMap::new();
    for f in &t.premises {
        *count.entry(f.clone()).or_default() += 1;
    }
    let mut visited = vec![false; t.nodes.len()];
    let mut stack = vec![(0usize, false)];
    while let Some((i, exit)) = stack.pop() {
        let node = &t.nodes[i];
        if exit {
            if let Some(a) = &node.added {
                *count.get_mut(a).unwrap() -= 1;
            }
            continue;
        }
        if visited[i] {
            return bad(i, "node reached twice".into());
        }
        visited[i] = true;
        if node.star {
            if node.step.is_some() || !node.children.is_empty() || node.added.is_some() {
                return bad(i, "`*` node must be a bare leaf".into());
            }
            continue;
        }
        if i != 0 && node.added.is_none() {
            return bad(i, "non-root node adds no formula".into());
        }
        if let Some(a) = &node.added {
            *count.entry(a.clone()).or_default() += 1;
        }
        let in_label = |f: &Formula| count.get(f).copied().unwrap_or(0) > 0;
        match &node.step {
            None => {
                if !node.children.is_empty() {
                    return bad(i, "children without a rule application".into());
                }
                if !goal.iter().any(|g| in_label(g)) {
                    return bad(i, "open leaf: label does not meet the goal".into());
                }
            }
            Some(st) => {
                let Some(r) = c.rule(&st.rule) else {
                    return bad(i, format!("unknown rule {}", st.rule));
                };
                if let Some(v) = r.variables().iter().find(|v| !st.substitution.contains_key(*v)) {
                    return bad(i, format!("substitution leaves {v} unassigned"));
                }
                for p in &r.premises {
                    let p = p.substitute(&st.substitution);
                    if !in_label(&p) {
                        return bad(i, format!("premise {p} of {} is not in the label", r.name));
                    }
                }
                let succ: BTreeSet<Formula> = r.conclusions.iter().map(|f| f.substitute(&st.substitution)).collect();
                if let Some(&ch) = node.children.iter().find(|&&ch| ch >= t.nodes.len()) {
                    return bad(i, format!("child index {ch} out of range"));
                }
                if succ.is_empty() {
                    if node.children.len() != 1 || !t.nodes[node.children[0]].star {
                        return bad(i, "empty succedent needs exactly one `*` child".into());
                    }
                } else {
                    let got: BTreeSet<Formula> = node
                        .children
                        .iter()
                        .filter_map(|&ch| t.nodes[ch].added.clone())
                        .collect();
                    if node.children.len() != succ.len() || got != succ {
                        return bad(
                            i,
                            format!("children do not match the succedent instances of {}", r.name),
                        );
                    }
                }
            }
        }
        stack.push((i, true));
        for &ch in node.children.iter().rev() {
            if ch >= t.nodes.len() {
                return bad(i, format!("child index {ch} out of range"));
            }
            stack.push((ch, false));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Countermodels from saturated partitions

/// Valuation over PP6⇒H restricted to `lambda`, plus the filter `↑filter`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub assignment: BTreeMap<String, Value>,
    pub values: BTreeMap<Formula, Value>,
    pub filter: Value,
}

impl Countermodel {
    pub fn designated(&self) -> crate::semantics::VSet {
        registry::v6_up(self.filter)
    }
}

pub fn countermodel_from_partition(
    part: &SaturatedPartition,
    variant: TenVariant,
) -> Result<Countermodel, CalculusError> {
    let omega: HashSet<&Formula> = part.omega.iter().collect();
    let bar: HashSet<&Formula> = part.omega_bar.iter().collect();
    let member = |f: &Formula| -> Result<bool, CalculusError> {
        if omega.contains(f) {
            Ok(true)
        } else if bar.contains(f) {
            Ok(false)
        } else {
            Err(CalculusError::Classification(format!(
                "{f} is outside the candidate set"
            )))
        }
    };
    let mut values: BTreeMap<Formula, Value> = BTreeMap::new();
    let mut mids = vec![];
    for phi in &part.lambda {
        if member(&Formula::circ(phi.clone()))? {
            values.insert(phi.clone(), if member(phi)? { HT } else { HF });
            continue;
        }
        let low = !member(&Formula::down(phi.clone()))?;
        let high = !member(&Formula::up(phi.clone()))?;
        match (low, high) {
            (true, true) => {
                return Err(CalculusError::Classification(format!(
                    "{phi} is classified both as t and as f"
                )))
            }
            (true, false) => {
                values.insert(phi.clone(), T);
            }
            (false, true) => {
                values.insert(phi.clone(), F);
            }
            (false, false) => mids.push(phi.clone()),
        }
    }
    let mut classes: Vec<Formula> = vec![];
    for phi in mids {
        let mut found = None;
        for (k, rep) in classes.iter().enumerate() {
            if member(&Formula::circ(Formula::imp(phi.clone(), rep.clone())))? {
                found = Some(k);
                break;
            }
        }
        let k = match found {
            Some(k) => k,
            None => {
                classes.push(phi.clone());
                classes.len() - 1
            }
        };
        if k > 1 {
            return Err(CalculusError::Classification(
                "more than two classes of intermediate values".into(),
            ));
        }
        values.insert(phi, [B, N][k]);
    }
    let alg = registry::algebra("pp6h");
    let assignment: BTreeMap<String, Value> = values
        .iter()
        .filter_map(|(f, &v)| f.as_var().map(|x| (x.to_string(), v)))
        .collect();
    for (phi, &v) in &values {
        if alg.eval(phi, &assignment) != Some(v) {
            return Err(CalculusError::Classification(format!(
                "classification of {phi} disagrees with its evaluation"
            )));
        }
    }
    let candidates: &[Value] = match variant {
        TenVariant::Up => &[F, N, B, T, HT],
        TenVariant::Leq => &[F, N, B, HT],
    };
    for &a in candidates {
        let up = registry::v6_up(a);
        let mut ok = true;
        for (phi, &v) in &values {
            if member(phi)? != (up >> v & 1 == 1) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Countermodel {
                assignment,
                values,
                filter: a,
            });
        }
    }
    Err(CalculusError::Classification(
        "no principal filter separates Ω from Ω̄ on Λ".into(),
    ))
}

// ---------------------------------------------------------------------------
// Set-Fmla companion

pub const VEE_INTRO: &str = "vee_intro";
pub const VEE_COMM: &str = "vee_comm";
pub const VEE_ASSOC: &str = "vee_assoc";
pub const VEE_CONTRACT: &str = "vee_contract";

fn vee_base() -> Vec<Rule> {
    vec![
        rule(VEE_INTRO, "p / p | q"),
        rule(VEE_COMM, "p | q / q | p"),
        rule(VEE_ASSOC, "p | (q | r) / (p | q) | r"),
        rule(VEE_CONTRACT, "p | p / p"),
    ]
}

fn fresh_var(c: &Calculus) -> String {
    let used: BTreeSet<String> = c.rules.iter().flat_map(|r| r.variables()).collect();
    std::iter::once("s".to_string())
        .chain((1..).map(|i| format!("s{i}")))
        .find(|s| !used.contains(s))
        .unwrap()
}

/// Set-Fmla calculus obtained by relativizing every rule to a side disjunct.
pub fn to_set_fmla_calculus(c: &Calculus) -> Result<Calculus, CalculusError> {
    let has_or = c
        .rules
        .iter()
        .flat_map(|r| r.premises.iter().chain(&r.conclusions))
        .any(|f| f.connectives().contains(&Conn::Or));
    if !has_or {
        return Err(CalculusError::MissingDisjunction);
    }
    let s = Formula::var(&fresh_var(c));
    let mut rules = vee_base();
    for r in &c.rules {
        let t = if r.premises.is_empty() && r.conclusions.len() == 1 {
            r.clone()
        } else {
            let prem = r.premises.iter().map(|p| Formula::or(p.clone(), s.clone())).collect();
            let concl = if r.conclusions.is_empty() {
                s.clone()
            } else {
                Formula::or(Formula::big_or(&r.conclusions), s.clone())
            };
            Rule::new(&r.name, prem, vec![concl])
        };
        rules.push(t);
    }
    Ok(Calculus {
        name: format!("{}-vee", c.name),
        framework: Framework::SetFmla,
        rules,
        xi: None,
        source: Some(Box::new(c.clone())),
    })
}

fn split_or(f: &Formula) -> (&Formula, &Formula) {
    match f {
        Formula::App(Conn::Or, a) => (&a[0], &a[1]),
        _ => panic!("{f} is not a disjunction"),
    }
}

/// Linear derivation in the companion calculus. Disjuncts are handled as
/// opaque blocks: only the fixed moves below are used, each touching at most
/// three blocks at the top level.
struct Linear<'a> {
    calc: &'a Calculus,
    derived: HashSet<Formula>,
    steps: Vec<(Step, Formula)>,
}

fn sub_of(pairs: &[(&str, &Formula)]) -> Substitution {
    pairs.iter().map(|(k, v)| (k.to_string(), (*v).clone())).collect()
}

impl Linear<'_> {
    fn apply(&mut self, rule: &str, sub: Substitution) -> Formula {
        let r = self.calc.rule(rule).expect("rule of the companion calculus");
        debug_assert!(
            r.premises.iter().all(|p| self.derived.contains(&p.substitute(&sub))),
            "premise of {rule} not derived"
        );
        let c = r.conclusions[0].substitute(&sub);
        if self.derived.insert(c.clone()) {
            self.steps.push((
                Step {
                    rule: rule.to_string(),
                    substitution: sub,
                },
                c.clone(),
            ));
        }
        c
    }

    /// `a ∨ b` to `b ∨ a`.
    fn comm(&mut self, f: &Formula) -> Formula {
        let (a, b) = split_or(f);
        self.apply(VEE_COMM, sub_of(&[("p", a), ("q", b)]))
    }

    /// `a ∨ (b ∨ c)` to `(a ∨ b) ∨ c`.
    fn assoc(&mut self, f: &Formula) -> Formula {
        let (a, bc) = split_or(f);
        let (b, c) = split_or(bc);
        self.apply(VEE_ASSOC, sub_of(&[("p", a), ("q", b), ("r", c)]))
    }

    /// `(a ∨ b) ∨ c` to `a ∨ (b ∨ c)`.
    fn unassoc(&mut self, f: &Formula) -> Formula {
        let mut cur = self.comm(f);
        cur = self.assoc(&cur);
        cur = self.comm(&cur);
        cur = self.assoc(&cur);
        self.comm(&cur)
    }

    fn weaken(&mut self, x: &Formula, y: &Formula) -> Formula {
        self.apply(VEE_INTRO, sub_of(&[("p", x), ("q", y)]))
    }

    fn contract(&mut self, f: &Formula) -> Formula {
        let (a, b) = split_or(f);
        debug_assert_eq!(a, b);
        self.apply(VEE_CONTRACT, sub_of(&[("p", a)]))
    }

    /// `x ∨ e` to `x ∨ (d ∨ e)`.
    fn push_context(&mut self, x: &Formula, e: &Formula, d: &Formula) -> Formula {
        let ex = self.comm(&Formula::or(x.clone(), e.clone()));
        let w = self.weaken(&ex, d);
        let cur = self.unassoc(&w);
        let cur = self.comm(&cur);
        self.unassoc(&cur)
    }

    /// `x ∨ e` to `x ∨ (e ∨ g)`.
    fn append(&mut self, x: &Formula, e: &Formula, g: &Formula) -> Formula {
        let w = self.weaken(&Formula::or(x.clone(), e.clone()), g);
        self.unassoc(&w)
    }

    /// `g ∨ (d ∨ e)` to `d ∨ (e ∨ g)`.
    fn rotate(&mut self, f: &Formula) -> Formula {
        let mut cur = self.assoc(f);
        cur = self.comm(&cur);
        cur = self.assoc(&cur);
        self.comm(&cur)
    }

    /// `g ∨ (x ∨ g)` to `g ∨ x`.
    fn drop_repeat(&mut self, f: &Formula) -> Formula {
        let (_, xg) = split_or(f);
        let (x, _) = split_or(xg);
        let x = x.clone();
        let mut cur = self.weaken(f, &x);
        cur = self.comm(&cur);
        cur = self.assoc(&cur);
        cur = self.contract(&cur);
        self.comm(&cur)
    }
}

/// For every node, the formulas of its label that its subproof relies on.
fn used_formulas(src: &Calculus, t: &DerivationTree) -> Vec<HashSet<Formula>> {
    let mut order = vec![];
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        order.push(i);
        stack.extend(&t.nodes[i].children);
    }
    let mut used: Vec<HashSet<Formula>> = vec![HashSet::new(); t.nodes.len()];
    for &i in order.iter().rev() {
        let n = &t.nodes[i];
        let mut u = HashSet::new();
        match &n.step {
            Some(st) => {
                let r = src.rule(&st.rule).expect("rule of the source calculus");
                u.extend(r.premises.iter().map(|p| p.substitute(&st.substitution)));
                for &c in &n.children {
                    let mut cu = used[c].clone();
                    if let Some(a) = &t.nodes[c].added {
                        cu.remove(a);
                    }
                    u.extend(cu);
                }
            }
            None if n.star => {}
            None => {
                let g = match &n.added {
                    Some(a) if t.goal.contains(a) => a.clone(),
                    _ => t.goal.iter().find(|g| t.premises.contains(g)).unwrap().clone(),
                };
                u.insert(g);
            }
        }
        used[i] = u;
    }
    used
}

struct Translator<'a> {
    src: &'a Calculus,
    tree: &'a DerivationTree,
    used: Vec<HashSet<Formula>>,
    goal: Formula,
    fresh: String,
    lin: Linear<'a>,
    label: Vec<Formula>,
}

impl Translator<'_> {
    /// Derives `G ∨ e`, given `x ∨ e` for every `x` in the label of `node`.
    fn process(&mut self, node: usize, e: &Formula) {
        let g = self.goal.clone();
        let n = &self.tree.nodes[node];
        let Some(step) = &n.step else {
            debug_assert!(self.lin.derived.contains(&Formula::or(g, e.clone())));
            return;
        };
        let r = self.src.rule(&step.rule).expect("rule of the source calculus");
        let sigma = &step.substitution;
        let succ: Vec<Formula> = r.conclusions.iter().map(|f| f.substitute(sigma)).collect();
        let tree = self.tree;
        let child = |f: &Formula| {
            n.children
                .iter()
                .copied()
                .find(|&c| tree.nodes[c].added.as_ref() == Some(f))
                .expect("child for succedent")
        };
        if r.premises.is_empty() && succ.len() == 1 {
            let c = self.lin.apply(&r.name, sigma.clone());
            self.lin.weaken(&c, e);
            let ch = child(&c);
            self.label.push(c);
            self.process(ch, e);
            self.label.pop();
            return;
        }
        let mut s = sigma.clone();
        s.insert(self.fresh.clone(), e.clone());
        let mut fact = self.lin.apply(&r.name, s);
        if succ.is_empty() {
            let w = self.lin.weaken(&fact, &g);
            self.lin.comm(&w);
            return;
        }
        let m = succ.len();
        let mut ctx = e.clone();
        for (j, c) in succ.iter().enumerate() {
            let ch = child(c);
            self.label.push(c.clone());
            if j + 1 == m {
                self.process(ch, &ctx);
                self.label.pop();
                break;
            }
            let d = Formula::big_or(&succ[j + 1..]);
            let inner = Formula::or(d.clone(), ctx.clone());
            self.lin.unassoc(&fact);
            let others: Vec<Formula> = self.label[..self.label.len() - 1]
                .iter()
                .filter(|x| self.used[ch].contains(*x))
                .cloned()
                .collect();
            for x in &others {
                self.lin.push_context(x, &ctx, &d);
            }
            self.process(ch, &inner);
            self.label.pop();
            fact = self.lin.rotate(&Formula::or(g.clone(), inner));
            let rest: HashSet<&Formula> = succ[j + 1..].iter().flat_map(|c| self.used[child(c)].iter()).collect();
            let others: Vec<Formula> = self.label[..self.label.len()]
                .iter()
                .filter(|x| rest.contains(x))
                .cloned()
                .collect();
            for x in &others {
                self.lin.append(x, &ctx, &g);
            }
            ctx = Formula::or(ctx, g.clone());
        }
        // ctx is e followed by m - 1 copies of the goal.
        while ctx != *e {
            let (x, _) = split_or(&ctx);
            let x = x.clone();
            self.lin.drop_repeat(&Formula::or(g.clone(), ctx.clone()));
            ctx = x;
        }
    }
}

/// Turns a Set-Set derivation of `premises ▷ {G}` into a linear derivation
/// in the Set-Fmla companion `vee`.
fn linearize(vee: &Calculus, src: &Calculus, t: &DerivationTree) -> DerivationTree {
    let goal = t.goal[0].clone();
    let mut lin = Linear {
        calc: vee,
        derived: t.premises.iter().cloned().collect(),
        steps: vec![],
    };
    if !lin.derived.contains(&goal) {
        for p in &t.premises {
            lin.weaken(p, &goal);
        }
        let mut tr = Translator {
            src,
            tree: t,
            used: used_formulas(src, t),
            goal: goal.clone(),
            fresh: fresh_var(src),
            lin,
            label: t.premises.clone(),
        };
        tr.process(0, &goal);
        lin = tr.lin;
        lin.contract(&Formula::or(goal.clone(), goal.clone()));
    }
    let mut out = DerivationTree::leaf(&t.premises, &t.goal);
    for (step, f) in lin.steps {
        let at = out.nodes.len() - 1;
        out.nodes.push(TreeNode {
            added: Some(f.clone()),
            star: false,
            step: None,
            children: vec![],
        });
        out.nodes[at].step = Some(step);
        out.nodes[at].children.push(at + 1);
        if f == goal {
            break;
        }
    }
    out
}
