//! Interpolants for the order-preserving and the assertional logics of PP6
//! with H-implication, and the certificate that the former lacks Craig
//! interpolation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{unary_term_functions, FiniteAlgebra};
use crate::formula::{render_formula, Formula};
use crate::registry::{self, B, F, HF, HT, N, T};
use crate::semantics::{entails, singleton, solve_valuations, PNMatrix, VSet, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Logic {
    /// Prime-filter class of PP6 with H-implication.
    OrderPreserving,
    /// The single matrix with filter {ht}.
    Assertional,
}

impl Logic {
    pub fn parse(s: &str) -> Option<Logic> {
        match s {
            "pp-leq" | "order" | "order-preserving" => Some(Logic::OrderPreserving),
            "pp-top" | "assertional" => Some(Logic::Assertional),
            _ => None,
        }
    }

    pub fn models(self) -> Vec<PNMatrix> {
        match self {
            Logic::OrderPreserving => registry::class("pp6h-order").expect("built-in class"),
            Logic::Assertional => vec![registry::matrix("pp-top")],
        }
    }

    pub fn entails(self, premises: &[Formula], goal: &Formula) -> bool {
        entails(&self.models(), premises, std::slice::from_ref(goal))
    }

    /// The implication of the deduction theorem: `a ⇒ b`, or `Δa ⇒ b`
    /// with `Δa = a ∧ ∘a` for the assertional logic.
    pub fn ddt_implication(self, a: Formula, b: Formula) -> Formula {
        match self {
            Logic::OrderPreserving => Formula::imp(a, b),
            Logic::Assertional => Formula::imp(Formula::and(a.clone(), Formula::circ(a)), b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationInstance {
    pub phi: Vec<Formula>,
    pub psi: Vec<Formula>,
    pub goal: Formula,
    pub logic: Logic,
}

impl InterpolationInstance {
    pub fn shared_variables(&self) -> Vec<String> {
        let left: BTreeSet<String> = self.phi.iter().flat_map(Formula::variables).collect();
        let right: BTreeSet<String> = self
            .psi
            .iter()
            .chain(std::iter::once(&self.goal))
            .flat_map(Formula::variables)
            .collect();
        left.intersection(&right).cloned().collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpolationError {
    #[error("premises do not entail the goal")]
    PremiseNotEntailed,
    #[error("the two sides share no variable")]
    NoSharedVariables,
    #[error("constructed interpolant fails its check: {0}")]
    VerificationFailed(String),
}

/// `{⋀Ψ ⇒ goal}` through the deduction theorem, checked both ways.
pub fn eip_interpolant(inst: &InterpolationInstance) -> Result<Vec<Formula>, InterpolationError> {
    let lg = inst.logic;
    let all: Vec<Formula> = inst.phi.iter().chain(&inst.psi).cloned().collect();
    if !lg.entails(&all, &inst.goal) {
        return Err(InterpolationError::PremiseNotEntailed);
    }
    let pi = vec![lg.ddt_implication(Formula::big_and(&inst.psi), inst.goal.clone())];
    for x in &pi {
        if !lg.entails(&inst.phi, x) {
            return Err(InterpolationError::VerificationFailed(format!(
                "Phi does not entail {}",
                render_formula(x)
            )));
        }
    }
    let mut back = pi.clone();
    back.extend(inst.psi.iter().cloned());
    if !lg.entails(&back, &inst.goal) {
        return Err(InterpolationError::VerificationFailed(
            "Pi, Psi do not entail the goal".into(),
        ));
    }
    Ok(pi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Maehara {
    pub xi: Formula,
    pub shared: Vec<String>,
    /// Assignments to the shared variables that extend to one sending all
    /// of Phi to ht.
    pub family: Vec<BTreeMap<String, Value>>,
}

/// Case formula isolating `a` up to the b/n swap.
fn case_formula(a: Value, p: Formula) -> Formula {
    match a {
        HT => Formula::and(p.clone(), Formula::circ(p)),
        T => Formula::neg(Formula::down(p)),
        B | N => Formula::and(
            Formula::and(Formula::up(p.clone()), Formula::down(p.clone())),
            Formula::neg(Formula::circ(p)),
        ),
        F => Formula::neg(Formula::up(p)),
        HF => Formula::and(Formula::neg(p.clone()), Formula::circ(p)),
        _ => unreachable!("six-valued carrier"),
    }
}

fn psi_v(shared: &[String], v: &BTreeMap<String, Value>) -> Formula {
    let var = |x: &String| Formula::var(x);
    let mut parts: Vec<Formula> = shared.iter().map(|x| case_formula(v[x], var(x))).collect();
    let is = shared.iter().filter(|x| v[*x] == B);
    for i in is {
        for j in shared.iter().filter(|x| v[*x] == N) {
            parts.push(Formula::neg(Formula::circ(Formula::imp(var(i), var(j)))));
        }
    }
    Formula::big_and(&parts)
}

fn assignments(vars: &[String], n: usize) -> Vec<BTreeMap<String, Value>> {
    let mut out = vec![BTreeMap::new()];
    for x in vars {
        out = out
            .into_iter()
            .flat_map(|m: BTreeMap<String, Value>| {
                (0..n as Value).map(move |a| {
                    let mut m = m.clone();
                    m.insert(x.clone(), a);
                    m
                })
            })
            .collect();
    }
    out
}

pub fn maehara_interpolant(inst: &InterpolationInstance) -> Result<Maehara, InterpolationError> {
    let lg = Logic::Assertional;
    let shared = inst.shared_variables();
    if shared.is_empty() {
        return Err(InterpolationError::NoSharedVariables);
    }
    let all: Vec<Formula> = inst.phi.iter().chain(&inst.psi).cloned().collect();
    if !lg.entails(&all, &inst.goal) {
        return Err(InterpolationError::PremiseNotEntailed);
    }
    let m = registry::matrix("pp-top");
    let family: Vec<BTreeMap<String, Value>> = assignments(&shared, m.algebra.size())
        .into_iter()
        .filter(|v| {
            let mut cons: BTreeMap<Formula, VSet> = inst.phi.iter().map(|p| (p.clone(), singleton(HT))).collect();
            for (x, a) in v {
                let key = Formula::var(x);
                let cur = cons.get(&key).copied().unwrap_or(m.algebra.full());
                cons.insert(key, cur & singleton(*a));
            }
            !solve_valuations(&m, &[], &cons, 1).is_empty()
        })
        .collect();
    let disjuncts: Vec<Formula> = family.iter().map(|v| psi_v(&shared, v)).collect();
    let xi = Formula::big_or(&disjuncts);
    if !lg.entails(&inst.phi, &xi) {
        return Err(InterpolationError::VerificationFailed("Phi does not entail xi".into()));
    }
    let mut back = vec![xi.clone()];
    back.extend(inst.psi.iter().cloned());
    if !lg.entails(&back, &inst.goal) {
        return Err(InterpolationError::VerificationFailed(
            "xi, Psi do not entail the goal".into(),
        ));
    }
    Ok(Maehara { xi, shared, family })
}

#[derive(Clone, Debug, Serialize)]
pub struct CipRow {
    pub witness: String,
    /// Value of the function at hf, its value under the fixed valuation.
    pub at_hf: String,
    pub phi_entails_psi: bool,
    pub psi_entails_goal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CipReport {
    pub phi: String,
    pub goal: String,
    pub phi_entails_goal: bool,
    /// Values of Phi and of the goal at p=b, q=n, r=b, s=hf.
    pub phi_at_witness: String,
    pub goal_at_witness: String,
    pub functions: usize,
    pub passing: usize,
    pub rows: Vec<CipRow>,
}

pub fn cip_phi() -> Formula {
    crate::formula::f("(p & ~p & q & ~q & ~@(p => q)) | s")
}

pub fn cip_goal() -> Formula {
    crate::formula::f("(r | ~r) | s")
}

/// Checks every unary term function `ψ(s)` of PP6 with H-implication as a
/// candidate interpolant for the fixed witness.
pub fn cip_failure_certificate() -> CipReport {
    let lg = Logic::OrderPreserving;
    let (phi, goal) = (cip_phi(), cip_goal());
    let h = FiniteAlgebra::new(registry::algebra("pp6h")).expect("deterministic");
    let env: BTreeMap<String, Value> = [("p", B), ("q", N), ("r", B), ("s", HF)]
        .into_iter()
        .map(|(x, a)| (x.to_string(), a))
        .collect();
    let name = |v: Option<Value>| v.map(|v| h.alg.name_of(v).to_string()).unwrap_or_default();
    let to_s: BTreeMap<String, String> = [("x".to_string(), "s".to_string())].into();
    let clone = unary_term_functions(&h).expect("small carrier");
    let rows: Vec<CipRow> = clone
        .iter()
        .map(|u| {
            let psi = u.witness.rename_vars(&to_s);
            CipRow {
                witness: render_formula(&psi),
                at_hf: h.alg.name_of(u.map[HF as usize]).to_string(),
                phi_entails_psi: lg.entails(std::slice::from_ref(&phi), &psi),
                psi_entails_goal: lg.entails(std::slice::from_ref(&psi), &goal),
            }
        })
        .collect();
    CipReport {
        phi: render_formula(&phi),
        goal: render_formula(&goal),
        phi_entails_goal: lg.entails(std::slice::from_ref(&phi), &goal),
        phi_at_witness: name(h.alg.eval(&phi, &env)),
        goal_at_witness: name(h.alg.eval(&goal, &env)),
        functions: rows.len(),
        passing: rows.iter().filter(|r| r.phi_entails_psi && r.psi_entails_goal).count(),
        rows,
    }
}

/// Both sides of the deduction theorem: `Φ, a ⊢ b` and `Φ ⊢ a → b`.
pub fn check_ddt_instance(logic: Logic, phi: &[Formula], a: &Formula, b: &Formula) -> (bool, bool) {
    let mut left = phi.to_vec();
    left.push(a.clone());
    let imp = logic.ddt_implication(a.clone(), b.clone());
    (logic.entails(&left, b), logic.entails(phi, &imp))
}
