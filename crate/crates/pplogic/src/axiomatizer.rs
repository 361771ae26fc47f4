//! Separator search for monadic matrices and rule generation for
//! refinements.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::calculus::Rule;
use crate::formula::{render_formula, Conn, Formula};
use crate::semantics::{deletions_between, members, singleton, PNMatrix, VSet, Value};

/// Unary formulas are written over this variable.
pub const UNARY_VAR: &str = "p";

/// Stop growing the clone past this many distinct unary functions.
const MAX_FUNCTIONS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscEntry {
    pub value: Value,
    pub pos: Vec<Formula>,
    pub neg: Vec<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discriminator {
    pub separators: Vec<Formula>,
    pub entries: Vec<DiscEntry>,
}

impl Discriminator {
    pub fn entry(&self, v: Value) -> &DiscEntry {
        &self.entries[v as usize]
    }

    pub fn to_json(&self, m: &PNMatrix) -> serde_json::Value {
        let side = |fs: &[Formula]| fs.iter().map(render_formula).collect::<Vec<_>>();
        serde_json::json!({
            "separators": side(&self.separators),
            "entries": self.entries.iter().map(|e| serde_json::json!({
                "value": m.algebra.name_of(e.value),
                "pos": side(&e.pos),
                "neg": side(&e.neg),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotMonadic {
    /// Pairs left unseparated, in carrier order.
    pub pairs: Vec<(Value, Value)>,
    pub depth: usize,
    /// The unary clone closed before `depth`, so the verdict is final.
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiscriminatorResult {
    Found(Discriminator),
    NotMonadic(NotMonadic),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AxiomatizerError {
    #[error("`{refined}` is not a refinement of `{base}`")]
    NotARefinement { base: String, refined: String },
    #[error("discriminator has no entry for value {0}")]
    MissingEntry(Value),
}

/// Reachable values of a unary formula, one slot per (component, value).
type Func = Vec<VSet>;

struct UnaryClone<'a> {
    m: &'a PNMatrix,
    comps: Vec<VSet>,
}

impl UnaryClone<'_> {
    fn slots(&self) -> usize {
        self.comps.len() * self.m.algebra.size()
    }

    fn identity(&self) -> Func {
        let n = self.m.algebra.size();
        let mut out = vec![0; self.slots()];
        for (ci, x) in self.comps.iter().enumerate() {
            for a in members(*x) {
                out[ci * n + a as usize] = singleton(a);
            }
        }
        out
    }

    fn apply(&self, c: Conn, args: &[&Func]) -> Func {
        let n = self.m.algebra.size();
        let mut out = vec![0; self.slots()];
        for (ci, x) in self.comps.iter().enumerate() {
            for a in members(*x) {
                let slot = ci * n + a as usize;
                let choices: Vec<Vec<Value>> = args.iter().map(|g| members(g[slot]).collect()).collect();
                let mut acc = 0;
                let mut idx = vec![0usize; args.len()];
                loop {
                    let tuple: Vec<Value> = idx.iter().zip(&choices).map(|(i, ch)| ch[*i]).collect();
                    acc |= self.m.algebra.entry(c, &tuple) & x;
                    let mut k = 0;
                    while k < idx.len() {
                        idx[k] += 1;
                        if idx[k] < choices[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == idx.len() {
                        break;
                    }
                }
                out[slot] = acc;
            }
        }
        out
    }

    /// `S^A(a)` as the union over the components containing `a`.
    fn reach(&self, g: &Func, a: Value) -> VSet {
        let n = self.m.algebra.size();
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, x)| *x & singleton(a) != 0)
            .fold(0, |acc, (ci, _)| acc | g[ci * n + a as usize])
    }
}

fn order_key(f: &Formula) -> (usize, usize, String) {
    (f.depth(), f.size(), render_formula(f))
}

/// Sign of a formula at `a`: `Some(true)` if always designated,
/// `Some(false)` if never.
fn sign(m: &PNMatrix, reach: VSet) -> Option<bool> {
    if reach == 0 {
        None
    } else if reach & !m.designated == 0 {
        Some(true)
    } else if reach & m.designated == 0 {
        Some(false)
    } else {
        None
    }
}

fn separates(m: &PNMatrix, ra: VSet, rb: VSet) -> bool {
    matches!(
        (sign(m, ra), sign(m, rb)),
        (Some(true), Some(false)) | (Some(false), Some(true))
    )
}

/// Enumerates unary formulas by (depth, size, text), one per induced
/// function. A formula becomes a separator when it splits a pair no earlier
/// one did; each value then keeps the separators that isolate it greedily.
pub fn find_discriminator(m: &PNMatrix, max_depth: usize) -> DiscriminatorResult {
    let cl = UnaryClone {
        m,
        comps: m.components().to_vec(),
    };
    let n = m.algebra.size();
    let vals: Vec<Value> = (0..n as Value).collect();
    let mut open: Vec<(Value, Value)> = vals
        .iter()
        .flat_map(|a| vals.iter().filter(move |b| a < *b).map(move |b| (*a, *b)))
        .collect();
    let mut seen: HashSet<Func> = HashSet::new();
    // Representatives grouped by depth.
    let mut levels: Vec<Vec<(Formula, Func)>> = vec![];
    let mut separators: Vec<(Formula, Func)> = vec![];
    let mut saturated = false;
    let mut depth_reached = 0;

    let conns: Vec<Conn> = m.algebra.conns().collect();
    for depth in 0..=max_depth {
        depth_reached = depth;
        let mut cands: Vec<(Formula, Func)> = vec![];
        if depth == 0 {
            cands.push((Formula::var(UNARY_VAR), cl.identity()));
            for c in &conns {
                if c.arity() == 0 {
                    cands.push((Formula::app(*c, vec![]), cl.apply(*c, &[])));
                }
            }
        } else {
            let pool: Vec<&(Formula, Func)> = levels.iter().flatten().collect();
            let last = &levels[depth - 1];
            for c in &conns {
                match c.arity() {
                    1 => {
                        for (f, g) in last {
                            cands.push((Formula::app(*c, vec![f.clone()]), cl.apply(*c, &[g])));
                        }
                    }
                    2 => {
                        for (f, g) in &pool {
                            for (h, k) in &pool {
                                if f.depth() + 1 != depth && h.depth() + 1 != depth {
                                    continue;
                                }
                                let x = Formula::app(*c, vec![f.clone(), h.clone()]);
                                cands.push((x, cl.apply(*c, &[g, k])));
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        cands.sort_by_cached_key(|(f, _)| order_key(f));
        let mut level = vec![];
        for (f, g) in cands {
            if !seen.insert(g.clone()) {
                continue;
            }
            let before = open.len();
            open.retain(|(a, b)| !separates(m, cl.reach(&g, *a), cl.reach(&g, *b)));
            if open.len() < before {
                separators.push((f.clone(), g.clone()));
            }
            level.push((f, g));
        }
        let grew = !level.is_empty();
        levels.push(level);
        if open.is_empty() {
            break;
        }
        if !grew && depth > 0 {
            saturated = true;
            break;
        }
        if seen.len() > MAX_FUNCTIONS {
            break;
        }
    }

    if !open.is_empty() {
        return DiscriminatorResult::NotMonadic(NotMonadic {
            pairs: open,
            depth: depth_reached,
            saturated,
        });
    }
    let entries = vals
        .iter()
        .map(|a| {
            let mut e = DiscEntry {
                value: *a,
                pos: vec![],
                neg: vec![],
            };
            let mut rest: Vec<Value> = vals.iter().copied().filter(|b| b != a).collect();
            for (f, g) in &separators {
                let here = cl.reach(g, *a);
                let before = rest.len();
                rest.retain(|b| !separates(m, here, cl.reach(g, *b)));
                if rest.len() == before {
                    continue;
                }
                match sign(m, here) {
                    Some(true) => e.pos.push(f.clone()),
                    Some(false) => e.neg.push(f.clone()),
                    None => unreachable!("a separator has a sign at both ends"),
                }
            }
            e
        })
        .collect();
    DiscriminatorResult::Found(Discriminator {
        separators: separators.into_iter().map(|(f, _)| f).collect(),
        entries,
    })
}

/// Fills the unary variable of each formula with `x`.
fn plug(fs: &[Formula], x: &Formula) -> Vec<Formula> {
    let s: BTreeMap<String, Formula> = [(UNARY_VAR.to_string(), x.clone())].into();
    fs.iter().map(|f| f.substitute(&s)).collect()
}

fn arg_vars(k: usize) -> Vec<Formula> {
    const NAMES: [&str; 3] = ["p", "q", "r"];
    (0..k)
        .map(|i| match NAMES.get(i) {
            Some(s) => Formula::var(s),
            None => Formula::var(&format!("p{}", i + 1)),
        })
        .collect()
}

/// One rule per value removed from an entry of `base` in `refined`.
pub fn generate_refinement_rules(
    base: &PNMatrix,
    refined: &PNMatrix,
    d: &Discriminator,
) -> Result<Vec<Rule>, AxiomatizerError> {
    let dels = deletions_between(base, refined).ok_or_else(|| AxiomatizerError::NotARefinement {
        base: base.name.clone(),
        refined: refined.name.clone(),
    })?;
    let get = |v: Value| {
        d.entries
            .get(v as usize)
            .filter(|e| e.value == v)
            .ok_or(AxiomatizerError::MissingEntry(v))
    };
    let alg = &base.algebra;
    let mut out = vec![];
    for del in dels {
        let xs = arg_vars(del.args.len());
        let head = Formula::app(del.conn, xs.clone());
        let (mut ant, mut succ) = (vec![], vec![]);
        for (x, a) in xs.iter().zip(&del.args) {
            let e = get(*a)?;
            ant.extend(plug(&e.pos, x));
            succ.extend(plug(&e.neg, x));
        }
        let e = get(del.value)?;
        ant.extend(plug(&e.pos, &head));
        succ.extend(plug(&e.neg, &head));
        let args: Vec<&str> = del.args.iter().map(|a| alg.name_of(*a)).collect();
        let name = format!("{}-{}-{}", del.conn.name(), args.join("-"), alg.name_of(del.value));
        out.push(Rule::new(&name, ant, succ));
    }
    Ok(out)
}

/// Extends `rho` so that `pat` maps onto `target`, binding variables to
/// variables only.
fn match_renaming(pat: &Formula, target: &Formula, rho: &mut BTreeMap<String, String>) -> bool {
    match (pat.as_var(), target.as_var()) {
        (Some(x), Some(y)) => match rho.get(x) {
            Some(z) => z == y,
            None => {
                rho.insert(x.to_string(), y.to_string());
                true
            }
        },
        (Some(_), None) => false,
        _ => {
            if pat.head() != target.head() || pat.args().len() != target.args().len() {
                return false;
            }
            let saved = rho.clone();
            for (a, b) in pat.args().iter().zip(target.args()) {
                if !match_renaming(a, b, rho) {
                    *rho = saved;
                    return false;
                }
            }
            true
        }
    }
}

/// `general` subsumes `special` when a renaming maps both of its sides
/// into the corresponding sides of `special`.
pub fn subsumes(general: &Rule, special: &Rule) -> bool {
    let pats: Vec<Formula> = general.premises.iter().chain(&general.conclusions).cloned().collect();
    let split = general.premises.len();
    // Match premises against premises and conclusions against conclusions.
    fn go(pats: &[Formula], split: usize, i: usize, special: &Rule, rho: &mut BTreeMap<String, String>) -> bool {
        if i == pats.len() {
            return true;
        }
        let side = if i < split {
            &special.premises
        } else {
            &special.conclusions
        };
        for t in side {
            let saved = rho.clone();
            if match_renaming(&pats[i], t, rho) && go(pats, split, i + 1, special, rho) {
                return true;
            }
            *rho = saved;
        }
        false
    }
    go(&pats, split, 0, special, &mut BTreeMap::new())
}

/// Drops dilutions. Among mutually subsuming rules the first is kept.
pub fn subsume_simplify(rules: &[Rule]) -> Vec<Rule> {
    rules
        .iter()
        .enumerate()
        .filter(|(i, r)| {
            !rules
                .iter()
                .enumerate()
                .any(|(j, s)| j != *i && subsumes(s, r) && (j < *i || !subsumes(r, s)))
        })
        .map(|(_, r)| r.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::f;
    use crate::registry::{self, B, HF, N};
    use crate::semantics::{entails, refine_matrix, Deletion};
    use std::collections::BTreeSet;

    fn found(m: &PNMatrix, depth: usize) -> Discriminator {
        match find_discriminator(m, depth) {
            DiscriminatorResult::Found(d) => d,
            DiscriminatorResult::NotMonadic(w) => panic!("not monadic: {w:?}"),
        }
    }

    fn set(fs: &[Formula]) -> BTreeSet<Formula> {
        fs.iter().cloned().collect()
    }

    #[test]
    fn dm4_separators() {
        let d = found(&registry::matrix("dm4-b"), 1);
        assert_eq!(set(&d.separators), set(&[f("p"), f("~p")]));
    }

    #[test]
    fn pp6_table() {
        let d = found(&registry::matrix("pp6-ub"), 1);
        assert_eq!(set(&d.separators), set(&[f("p"), f("~p"), f("@p")]));
        for (v, pos, neg) in registry::pp6_discriminator_table() {
            let e = d.entry(v);
            assert_eq!(set(&e.pos), set(&pos), "pos({v})");
            assert_eq!(set(&e.neg), set(&neg), "neg({v})");
        }
    }

    #[test]
    fn discriminator_memberships_hold_by_full_sweep() {
        for name in ["dm4-b", "pp6-ub", "pp6h", "pp6a1-ub", "letk-ub"] {
            let m = registry::matrix(name);
            let d = found(&m, 3);
            for e in &d.entries {
                let a = e.value;
                for s in &e.pos {
                    let env = [(UNARY_VAR.to_string(), a)].into();
                    let v = m.algebra.eval(s, &env);
                    if let Some(v) = v {
                        assert!(m.designated & singleton(v) != 0, "{name}: {s:?} at {a}");
                    }
                }
                for s in &e.neg {
                    let env = [(UNARY_VAR.to_string(), a)].into();
                    if let Some(v) = m.algebra.eval(s, &env) {
                        assert!(m.designated & singleton(v) == 0, "{name}: {s:?} at {a}");
                    }
                }
                for b in 0..m.algebra.size() as Value {
                    if b == a {
                        continue;
                    }
                    let isolated = e.pos.iter().chain(&e.neg).any(|s| {
                        let env = [(UNARY_VAR.to_string(), b)].into();
                        let here = e.pos.contains(s);
                        match m.algebra.eval(s, &env) {
                            Some(v) => (m.designated & singleton(v) != 0) != here,
                            None => false,
                        }
                    });
                    if m.algebra.is_deterministic() {
                        assert!(isolated, "{name}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn top_filter_cannot_split_n_and_b() {
        let m = registry::matrix("pp-top");
        let DiscriminatorResult::NotMonadic(w) = find_discriminator(&m, 8) else {
            panic!("pp-top reported monadic");
        };
        assert_eq!(w.pairs, vec![(N, B)]);
        assert!(w.saturated);
    }

    #[test]
    fn ten_valued_matrices_are_not_monadic() {
        for name in ["m-leq", "m-up"] {
            let m = registry::matrix(name);
            match find_discriminator(&m, 6) {
                DiscriminatorResult::NotMonadic(w) => {
                    let np = m.algebra.v("np");
                    let bp = m.algebra.v("bp");
                    assert!(w.pairs.contains(&(np, bp)), "{name}: {w:?}");
                    assert!(w.saturated, "{name}: clone did not close");
                }
                DiscriminatorResult::Found(_) => panic!("{name} reported monadic"),
            }
        }
    }

    #[test]
    fn single_deletion_rule() {
        let base = registry::matrix("pp6a1-ub");
        let d = found(&base, 1);
        let refined = refine_matrix(
            &base,
            &[Deletion {
                conn: Conn::Imp,
                args: vec![B, HF],
                value: N,
            }],
        )
        .unwrap();
        let rs = generate_refinement_rules(&base, &refined, &d).unwrap();
        assert_eq!(rs.len(), 1);
        let want = Rule::parse("x", "p, ~p, @q / @p, q, p => q, ~(p => q), @(p => q)").unwrap();
        assert_eq!(set(&rs[0].premises), set(&want.premises));
        assert_eq!(set(&rs[0].conclusions), set(&want.conclusions));
        assert!(entails(&[refined], &rs[0].premises, &rs[0].conclusions));
    }

    #[test]
    fn no_deletions_no_rules() {
        let m = registry::matrix("pp6a1-ub");
        let d = found(&m, 1);
        assert!(generate_refinement_rules(&m, &m, &d).unwrap().is_empty());
    }

    #[test]
    fn non_refinement_is_rejected() {
        let base = registry::matrix("letk-ub");
        let other = registry::matrix("pp6a1-ub");
        let d = found(&base, 1);
        assert!(matches!(
            generate_refinement_rules(&base, &other, &d),
            Err(AxiomatizerError::NotARefinement { .. })
        ));
    }

    #[test]
    fn letk_rules_are_sound() {
        let base = registry::matrix("pp6a1-ub");
        let target = registry::matrix("letk-ub");
        let d = found(&base, 1);
        let rs = generate_refinement_rules(&base, &target, &d).unwrap();
        assert!(!rs.is_empty());
        for r in &rs {
            assert!(
                entails(std::slice::from_ref(&target), &r.premises, &r.conclusions),
                "{}",
                r.name
            );
        }
        let simple = subsume_simplify(&rs);
        assert!(simple.len() <= rs.len());
    }

    #[test]
    fn dilution_is_removed() {
        let r2 = Rule::parse("r2cl", " / p, p => q").unwrap();
        let dil = Rule::parse("dil", " / p, p => q, @q").unwrap();
        assert_eq!(subsume_simplify(&[dil.clone(), r2.clone()]), vec![r2.clone()]);
        let renamed = Rule::parse("ren", " / r, r => s, @r").unwrap();
        assert_eq!(subsume_simplify(&[r2.clone(), renamed]), vec![r2]);
    }

    #[test]
    fn duplicates_collapse_and_incomparables_stay() {
        let a = Rule::parse("a", "p / p | q").unwrap();
        let b = Rule::parse("b", "p / p | q").unwrap();
        let c = Rule::parse("c", "p & q / p").unwrap();
        assert_eq!(subsume_simplify(&[a.clone(), b, c.clone()]), vec![a, c]);
    }

    #[test]
    fn non_injective_renaming_counts() {
        let g = Rule::parse("g", "p, q / ").unwrap();
        let s = Rule::parse("s", "p / ").unwrap();
        assert!(subsumes(&g, &s));
    }
}
