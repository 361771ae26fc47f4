//! Built-in algebras, matrices, matrix classes and calculi.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axiomatizer::{find_discriminator, generate_refinement_rules, DiscriminatorResult};
use crate::calculus::{rule, Calculus, Framework, Rule};
use crate::formula::{f, Conn, Formula};
use crate::semantics::{algebra_to_json_value, matrix_to_json, singleton, MultiAlgebra, PNMatrix, VSet, Value};

/// Six-valued carrier, in index order.
pub const V6: [&str; 6] = ["hf", "f", "n", "b", "t", "ht"];
pub const HF: Value = 0;
pub const F: Value = 1;
pub const N: Value = 2;
pub const B: Value = 3;
pub const T: Value = 4;
pub const HT: Value = 5;

/// Ten-valued carrier of the PNmatrix packagings.
pub const V10: [&str; 10] = ["hf", "fm", "nm", "bm", "tm", "fp", "np", "bp", "tp", "ht"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Algebra,
    Matrix,
    Class,
    Calculus,
}

impl Kind {
    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "algebra" => Some(Kind::Algebra),
            "matrix" => Some(Kind::Matrix),
            "class" | "matrix-class" => Some(Kind::Class),
            "calculus" => Some(Kind::Calculus),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Algebra => "algebra",
            Kind::Matrix => "matrix",
            Kind::Class => "class",
            Kind::Calculus => "calculus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("no built-in {kind} named `{name}`")]
    NotFound { kind: Kind, name: String },
}

#[derive(Clone, Debug)]
pub enum Payload {
    Algebra(MultiAlgebra),
    Matrix(PNMatrix),
    Class(Vec<PNMatrix>),
    /// A calculus with the name of the matrix or class it is meant for.
    Calculus(Calculus, String),
}

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub kind: Kind,
    pub name: String,
    pub payload: Payload,
}

impl RegistryEntry {
    pub fn to_json(&self) -> serde_json::Value {
        match &self.payload {
            Payload::Algebra(a) => algebra_to_json_value(a),
            Payload::Matrix(m) => matrix_to_json(m),
            Payload::Class(ms) => serde_json::json!({
                "name": self.name,
                "matrices": ms.iter().map(matrix_to_json).collect::<Vec<_>>(),
            }),
            Payload::Calculus(c, models) => {
                let mut v = c.to_json();
                v["models"] = serde_json::Value::String(models.clone());
                v
            }
        }
    }
}

struct Registry {
    entries: BTreeMap<(Kind, String), RegistryEntry>,
}

impl Registry {
    fn add(&mut self, kind: Kind, name: &str, payload: Payload) {
        let prev = self.entries.insert(
            (kind, name.to_string()),
            RegistryEntry {
                kind,
                name: name.to_string(),
                payload,
            },
        );
        assert!(prev.is_none(), "duplicate {kind} {name}");
    }
}

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(build)
}

pub fn lookup(kind: Kind, name: &str) -> Result<RegistryEntry, RegistryError> {
    registry()
        .entries
        .get(&(kind, name.to_string()))
        .cloned()
        .ok_or_else(|| RegistryError::NotFound {
            kind,
            name: name.to_string(),
        })
}

pub fn names(kind: Kind) -> Vec<String> {
    registry()
        .entries
        .keys()
        .filter(|(k, _)| *k == kind)
        .map(|(_, n)| n.clone())
        .collect()
}

pub fn algebra(name: &str) -> MultiAlgebra {
    match lookup(Kind::Algebra, name).expect("built-in algebra").payload {
        Payload::Algebra(a) => a,
        _ => unreachable!(),
    }
}

pub fn matrix(name: &str) -> PNMatrix {
    match lookup(Kind::Matrix, name).expect("built-in matrix").payload {
        Payload::Matrix(m) => m,
        _ => unreachable!(),
    }
}

/// A registered class, or a registered matrix as a one-element class.
pub fn class(name: &str) -> Result<Vec<PNMatrix>, RegistryError> {
    if let Ok(e) = lookup(Kind::Class, name) {
        if let Payload::Class(ms) = e.payload {
            return Ok(ms);
        }
    }
    match lookup(Kind::Matrix, name)?.payload {
        Payload::Matrix(m) => Ok(vec![m]),
        _ => unreachable!(),
    }
}

pub fn calculus(name: &str) -> Calculus {
    match lookup(Kind::Calculus, name).expect("built-in calculus").payload {
        Payload::Calculus(c, _) => c,
        _ => unreachable!(),
    }
}

/// The model class a built-in calculus is declared sound (and complete) for.
pub fn declared_models(calculus_name: &str) -> Result<Vec<PNMatrix>, RegistryError> {
    match lookup(Kind::Calculus, calculus_name)?.payload {
        Payload::Calculus(_, models) => class(&models),
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------------------
// Algebras

/// Lattice order of the six values: `hf < f < {n, b} < t < ht`.
pub fn v6_leq(a: Value, b: Value) -> bool {
    const RANK: [u8; 6] = [0, 1, 2, 2, 3, 4];
    a == b || RANK[a as usize] < RANK[b as usize]
}

fn v6_meet(a: Value, b: Value) -> Value {
    if v6_leq(a, b) {
        a
    } else if v6_leq(b, a) {
        b
    } else {
        F
    }
}

fn v6_join(a: Value, b: Value) -> Value {
    if v6_leq(a, b) {
        b
    } else if v6_leq(b, a) {
        a
    } else {
        T
    }
}

pub fn v6_neg(a: Value) -> Value {
    [HT, T, N, B, F, HF][a as usize]
}

pub fn v6_circ(a: Value) -> Value {
    if a == HF || a == HT {
        HT
    } else {
        HF
    }
}

/// The residuum of the meet, row by row (rows `a`, columns `b`).
pub const IMP_H: [[Value; 6]; 6] = [
    [HT, HT, HT, HT, HT, HT],
    [HF, HT, HT, HT, HT, HT],
    [HF, B, HT, B, HT, HT],
    [HF, N, N, HT, HT, HT],
    [HF, F, N, B, HT, HT],
    [HF, F, N, B, T, HT],
];

pub const IMP_LETK: [[Value; 6]; 6] = [
    [HT, HT, HT, HT, HT, HT],
    [T, T, T, T, T, HT],
    [T, T, T, T, T, HT],
    [HF, F, N, B, T, HT],
    [HF, F, N, B, T, HT],
    [HF, F, N, B, T, HT],
];

/// ↑b in the six-valued carrier.
pub const UP_B: VSet = (1 << B) | (1 << T) | (1 << HT);

pub fn v6_up(a: Value) -> VSet {
    (0..6u8).filter(|x| v6_leq(a, *x)).fold(0, |s, x| s | singleton(x))
}

fn pp6() -> MultiAlgebra {
    let mut a = MultiAlgebra::new("pp6", &V6);
    a.set_op(Conn::Top, |_| HT);
    a.set_op(Conn::Bot, |_| HF);
    a.set_op(Conn::Neg, |x| v6_neg(x[0]));
    a.set_op(Conn::Circ, |x| v6_circ(x[0]));
    a.set_op(Conn::And, |x| v6_meet(x[0], x[1]));
    a.set_op(Conn::Or, |x| v6_join(x[0], x[1]));
    a
}

fn renamed(mut a: MultiAlgebra, name: &str) -> MultiAlgebra {
    a.name = name.to_string();
    a
}

fn sub6(a: &MultiAlgebra, name: &str, vals: &[Value]) -> MultiAlgebra {
    let x = vals.iter().fold(0, |s, v| s | singleton(*v));
    renamed(a.restrict(x), name)
}

/// De Morgan algebras on `f < {n, b} < t`, restricted to `vals`.
fn dm(name: &str, vals: &[Value]) -> MultiAlgebra {
    let mut full = MultiAlgebra::new(name, &["f", "n", "b", "t"]);
    let leq = |a: Value, b: Value| a == b || a == 0 || b == 3;
    full.set_op(Conn::Top, |_| 3);
    full.set_op(Conn::Bot, |_| 0);
    full.set_op(Conn::Neg, |x| [3, 1, 2, 0][x[0] as usize]);
    full.set_op(Conn::And, |x| {
        if leq(x[0], x[1]) {
            x[0]
        } else if leq(x[1], x[0]) {
            x[1]
        } else {
            0
        }
    });
    full.set_op(Conn::Or, |x| {
        if leq(x[0], x[1]) {
            x[1]
        } else if leq(x[1], x[0]) {
            x[0]
        } else {
            3
        }
    });
    let x = vals.iter().fold(0, |s, v| s | singleton(*v));
    renamed(full.restrict(x), name)
}

fn pp6_h() -> MultiAlgebra {
    let mut a = renamed(pp6(), "pp6h");
    a.set_op(Conn::Imp, |x| IMP_H[x[0] as usize][x[1] as usize]);
    a
}

fn pp6_a1() -> MultiAlgebra {
    let mut a = renamed(pp6(), "pp6a1");
    let hi = UP_B;
    let lo = singleton(HF) | singleton(F) | singleton(N);
    a.set_table_fn(Conn::Imp, |x| {
        if UP_B & singleton(x[0]) == 0 || UP_B & singleton(x[1]) != 0 {
            hi
        } else {
            lo
        }
    });
    a
}

fn letk() -> MultiAlgebra {
    let mut a = renamed(pp6(), "letk");
    a.set_op(Conn::Imp, |x| IMP_LETK[x[0] as usize][x[1] as usize]);
    a
}

// ---------------------------------------------------------------------------
// Ten-valued PNmatrices

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TenVariant {
    Up,
    Leq,
}

/// Projection of the ten values onto the six.
pub fn g(v: Value) -> Value {
    [HF, F, N, B, T, F, N, B, T, HT][v as usize]
}

pub fn set10(names: &[&str]) -> VSet {
    names.iter().fold(0, |s, n| {
        s | singleton(V10.iter().position(|x| x == n).expect("ten-value") as Value)
    })
}

/// Minimal incompatible value sets. `{tm, fp}` is included so that no total
/// component designates `f` while leaving `t` undesignated.
pub fn inc_generators(variant: TenVariant) -> Vec<VSet> {
    let mut gens = vec![
        set10(&["fm", "fp"]),
        set10(&["nm", "np"]),
        set10(&["bm", "bp"]),
        set10(&["tm", "tp"]),
        set10(&["bm", "fp"]),
        set10(&["nm", "fp"]),
        set10(&["bp", "tm"]),
        set10(&["np", "tm"]),
        set10(&["np", "bp", "fm"]),
        set10(&["tm", "fp"]),
    ];
    if variant == TenVariant::Leq {
        gens.push(set10(&["nm", "bm", "tp"]));
    }
    gens
}

/// Whether a set of ten-values is jointly incompatible.
pub fn inc(variant: TenVariant, x: VSet) -> bool {
    inc_generators(variant).iter().any(|g| x & g == *g)
}

pub fn build_ten_valued(variant: TenVariant) -> PNMatrix {
    let name = match variant {
        TenVariant::Up => "m-up",
        TenVariant::Leq => "m-leq",
    };
    ten_valued_from(name, &inc_generators(variant))
}

/// The ten-valued construction for an arbitrary list of incompatible sets.
pub fn ten_valued_from(name: &str, generators: &[VSet]) -> PNMatrix {
    let base = pp6_h();
    let inc = |x: VSet| generators.iter().any(|g| x & g == *g);
    let mut a = MultiAlgebra::new(name, &V10);
    for c in base.conns().collect::<Vec<_>>() {
        a.set_table_fn(c, |args| {
            let gargs: Vec<Value> = args.iter().map(|v| g(*v)).collect();
            let target = base.op(c, &gargs);
            let used = args.iter().fold(0, |s, v| s | singleton(*v));
            (0..10u8)
                .filter(|v| g(*v) == target && !inc(used | singleton(*v)))
                .fold(0, |s, v| s | singleton(v))
        });
    }
    PNMatrix::new(name, a, set10(&["fp", "np", "bp", "tp", "ht"]))
}

// ---------------------------------------------------------------------------
// Calculi

fn rules(prefix: &str, texts: &[&str]) -> Vec<Rule> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| rule(&format!("{prefix}{}", i + 1), t))
        .collect()
}

fn xi(texts: &[&str]) -> Option<Vec<Formula>> {
    Some(texts.iter().map(|t| f(t)).collect())
}

pub fn theta() -> Vec<Formula> {
    xi(&["p", "@p", "@(p => q)", "up(p)", "down(p)"]).unwrap()
}

fn r_b() -> Vec<Rule> {
    rules(
        "r",
        &[
            " / top",
            "~top / ",
            " / ~bot",
            "bot / ",
            "p / ~~p",
            "~~p / p",
            "p & q / p",
            "p & q / q",
            "p, q / p & q",
            "~p / ~(p & q)",
            "~q / ~(p & q)",
            "~(p & q) / ~p, ~q",
            "p / p | q",
            "q / p | q",
            "p | q / p, q",
            "~p, ~q / ~(p | q)",
            "~(p | q) / ~p",
            "~(p | q) / ~q",
        ],
    )
}

fn r_pp_leq() -> Vec<Rule> {
    let extra = [
        " / @bot",
        " / @top",
        " / @@p",
        "@p / @~p",
        "@~p / @p",
        "@p / p, ~p",
        "@p, p, ~p / ",
        "@p / @(p & q), p",
        "@q / @(p & q), q",
        "@(p & q), q / @p",
        "@(p & q), p / @q",
        "@p, @q / @(p & q)",
        "@(p & q) / @p, @q",
        "@p, @q / @(p | q)",
        "@(p | q) / @p, @q",
        "@p, p / @(p | q)",
        "@q, q / @(p | q)",
        "@(p | q) / @p, q",
        "@(p | q) / @q, p",
    ];
    let mut out = r_b();
    for (i, t) in extra.iter().enumerate() {
        out.push(rule(&format!("r{}", i + 19), t));
    }
    out
}

fn r_cl() -> Vec<Rule> {
    vec![
        rule("r1cl", "q / p => q"),
        rule("r2cl", " / p, p => q"),
        rule("r3cl", "p, p => q / q"),
    ]
}

fn r_h14() -> Vec<Rule> {
    rules(
        "h",
        &[
            "q / p => q",
            "p, p => q / q",
            "~(p => q) / ~q",
            "~q / ~(p => q), ~p",
            " / p => q, @q, p",
            "p => q / @(p => q), ~q, q",
            "p => q, @q / @p, q",
            "~(p => q), ~p / @(p => q)",
            "~p / @(p => q), p",
            "@(p => q), @p, p / @q",
            "@(p => q), p / @q, q",
            "@p / p => q, p",
            "@q / @(p => q)",
            "q / ~(p => q), @(p => q), @p",
        ],
    )
}

fn r_letk() -> Vec<Rule> {
    rules(
        "k",
        &[
            "~(p => q) / p",
            "~(p => q) / ~q",
            "p, ~q / ~(p => q)",
            "@(p => q) / @p, @q",
            "@(p => q) / @p, p, q",
            "@(p => q), p / @q",
            "@p / @(p => q), p",
            "p, @q / @(p => q)",
            "@q, q / @(p => q)",
        ],
    )
}

fn r_diamond() -> Vec<Rule> {
    vec![
        rule("dia_up_or_down", " / up(p), down(p)"),
        rule("dia_id", " / @(p => p)"),
        rule("dia_trans", "@(p => q), @(q => r) / @q, @(p => r)"),
        rule("dia_le_t", " / down(p), @q, @(q => p)"),
        rule("dia_ge_f", " / up(p), @(p => q)"),
        rule("dia_inc1", "up(p), @(p => q) / @p, up(q)"),
        rule("dia_inc2", "down(q), @(p => q) / @q, down(p)"),
        rule("dia_inc3", "up(p), down(q), @(p => q) / @q, @(q => p)"),
        rule("dia_just2", "down(p), up(r) / @p, @(p => q), @(p => r), @(q => r)"),
    ]
}

fn r_imp() -> Vec<Rule> {
    rules(
        "imp_r",
        &[
            "@q / @(p => q)",
            "q / p => q",
            "p, p => q / q",
            "@p, p, @(p => q) / @q",
            "@p, p, down(p => q) / down(q)",
            "@p, p, up(p => q) / up(q)",
            "up(q) / up(p => q)",
            "down(q) / down(p => q)",
            " / @(q => (p => q))",
            "@p / p, @(p => q)",
            "@p / p, p => q",
            "@q, p => q / q, @p",
            "@(p => q) / @q, p => q",
            " / down(p), @(p => q), @((p => q) => q)",
            "up(p), @(p => q) / @p, up(q)",
            "down(p) / @p, up(p => q)",
            " / @p, down(p => q)",
            "up(p), @(p => (p => q)) / @p, up(q)",
            "up(q) / @(p => q), @((p => q) => q)",
        ],
    )
}

fn r_neg() -> Vec<Rule> {
    rules(
        "neg_r",
        &[
            "@p / p, ~p",
            "@p, p, ~p / ",
            "@p / @~p",
            "@~p / @p",
            "up(~p) / down(p)",
            "down(~p) / up(p)",
            "down(p) / up(~p)",
            "up(p) / down(~p)",
        ],
    )
}

fn r_circ() -> Vec<Rule> {
    rules("circ_r", &[" / @@p"])
}

fn r_and() -> Vec<Rule> {
    rules(
        "and_r",
        &[
            "@p, @q / @(p & q)",
            "p, q / p & q",
            "p & q / q",
            "p, @(p & q) / @q",
            "@p / @(q => p & q)",
            " / @(p & q => q)",
            "p & q / p",
            "q, @(p & q) / @p",
            "@q / @(p => p & q)",
            " / @(p & q => p)",
            "@p / p, @(p & q)",
            "@q / q, @(p & q)",
            "@(p & q) / @p, @q",
            "@(p => q) / @(p => p & q)",
            "@(q => p) / @(q => p & q)",
            "down(p), up(p & q) / @p, @(p => q)",
        ],
    )
}

fn r_or() -> Vec<Rule> {
    rules(
        "or_r",
        &[
            "@p, @q / @(p | q)",
            "@p, p | q / p, q",
            "q / p | q",
            "@(p | q) / p, @q",
            " / @(q => p | q)",
            "@p / p, @(p | q => q)",
            "p / p | q",
            "@(p | q) / q, @p",
            " / @(p => p | q)",
            "@q / q, @(p | q => p)",
            "p, @p / @(p | q)",
            "q, @q / @(p | q)",
            "@(p | q) / @p, @q",
            "@(p => q) / @(p | q => q)",
            "@(q => p) / @(p | q => p)",
            "up(q), down(p | q) / @p, @(p => q)",
        ],
    )
}

fn r_topbot() -> Vec<Rule> {
    rules("topbot_r", &[" / top", " / @top", "bot / ", " / @bot"])
}

fn r_d_and() -> Rule {
    rule("d_and", "p, down(p), q / @p, @(p => q), @r, r")
}

fn r_d_le() -> Rule {
    rule("d_le", "p, @(p => q) / @q, q")
}

fn r_d_neq_t() -> Rule {
    rule("d_neq_t", "r, up(q) / down(r), @(p => q), p, q")
}

fn r_up_rules() -> Vec<Rule> {
    let mut out = r_diamond();
    out.extend(r_imp());
    out.extend(r_circ());
    out.extend(r_neg());
    out.extend(r_and());
    out.extend(r_or());
    out.extend(r_topbot());
    out.push(r_d_and());
    out.push(r_d_le());
    out
}

fn moisil_axioms() -> Vec<Rule> {
    let mut out = rules(
        "m",
        &[
            " / p => q => p",
            " / (p => q => r) => (p => q) => p => r",
            " / p & q => p",
            " / p & q => q",
            " / (p => q) => (p => r) => p => q & r",
            " / p => p | q",
            " / q => p | q",
            " / (p => r) => (q => r) => p | q => r",
            " / p => ~~p",
            " / ~~p => p",
            "p, p => q / q",
        ],
    );
    out.extend(rules(
        "pptop",
        &[
            " / hneg(p) => ~hneg(hneg(p))",
            " / ~hneg(hneg(p)) => hneg(p)",
            " / @(p1 => p2) & @(p2 => p3) => @p1 | @p4 | @(p4 => p3) | @(p3 => p2) | @(p2 => p1)",
        ],
    ));
    out
}

/// Rules separating the assertional logic from the order-preserving one.
pub fn pp_top_rules() -> Vec<Rule> {
    vec![
        rule("delta_intro", "p / p & @p"),
        rule("circ_intro", "p / @p"),
        rule("weak_mp", "p, wimp(p, q) / q"),
    ]
}

pub fn contraposition() -> Rule {
    rule("m12", "p => q / ~q => ~p")
}

/// The separator table for the six-valued PP matrices with designated ↑b:
/// per value, formulas designated at it and formulas undesignated at it.
pub fn pp6_discriminator_table() -> Vec<(Value, Vec<Formula>, Vec<Formula>)> {
    let side = |ts: &[&str]| ts.iter().map(|t| f(t)).collect::<Vec<_>>();
    vec![
        (HF, side(&["@p"]), side(&["p"])),
        (F, side(&["~p"]), side(&["@p", "p"])),
        (N, side(&[]), side(&["p", "@p", "~p"])),
        (B, side(&["p", "~p"]), side(&["@p"])),
        (T, side(&["p"]), side(&["@p", "~p"])),
        (HT, side(&["p", "@p"]), side(&[])),
    ]
}

/// Rules produced by the refinement recipe from the ⇒A1 matrix to LET_K+.
fn generated_letk_rules(base: &PNMatrix, target: &PNMatrix) -> Vec<Rule> {
    let DiscriminatorResult::Found(d) = find_discriminator(base, 1) else {
        unreachable!("the ⇒A1 matrix is monadic at depth 1");
    };
    generate_refinement_rules(base, target, &d).expect("LET_K+ refines ⇒A1")
}

// ---------------------------------------------------------------------------

fn build() -> Registry {
    let mut reg = Registry {
        entries: BTreeMap::new(),
    };
    let alg = |reg: &mut Registry, a: MultiAlgebra| {
        let n = a.name.clone();
        reg.add(Kind::Algebra, &n, Payload::Algebra(a));
    };

    let dm4 = dm("dm4", &[0, 1, 2, 3]);
    alg(&mut reg, dm("dm2", &[0, 3]));
    alg(&mut reg, dm("dm3", &[0, 1, 3]));
    alg(&mut reg, dm4.clone());

    let p6 = pp6();
    let subs: [(&str, &[Value]); 4] = [
        ("2", &[HF, HT]),
        ("3", &[HF, N, HT]),
        ("4", &[HF, F, T, HT]),
        ("5", &[HF, F, N, T, HT]),
    ];
    for (k, vals) in subs {
        alg(&mut reg, sub6(&p6, &format!("pp{k}"), vals));
        alg(&mut reg, sub6(&p6, &format!("is{k}"), vals));
    }
    alg(&mut reg, p6.clone());
    alg(&mut reg, renamed(p6.clone(), "is6"));
    let h = pp6_h();
    for (k, vals) in &subs[..3] {
        alg(&mut reg, sub6(&h, &format!("pp{k}h"), vals));
    }
    alg(&mut reg, h.clone());
    alg(&mut reg, pp6_a1());
    alg(&mut reg, letk());
    let m_up = build_ten_valued(TenVariant::Up);
    let m_leq = build_ten_valued(TenVariant::Leq);
    alg(&mut reg, m_up.algebra.clone());
    alg(&mut reg, m_leq.algebra.clone());

    let mut mat = |name: &str, a: &MultiAlgebra, d: &[&str]| {
        let m = PNMatrix::new(name, a.clone(), a.set(d));
        reg.add(Kind::Matrix, name, Payload::Matrix(m.clone()));
        m
    };
    mat("dm4-b", &dm4, &["b", "t"]);
    mat("pp6-ub", &p6, &["b", "t", "ht"]);
    let a1_ub = mat("pp6a1-ub", &pp6_a1(), &["b", "t", "ht"]);
    let letk_ub = mat("letk-ub", &letk(), &["b", "t", "ht"]);
    let hf_ = mat("pp6h-f", &h, &["f", "n", "b", "t", "ht"]);
    let hn = mat("pp6h-n", &h, &["n", "t", "ht"]);
    let hb = mat("pp6h-b", &h, &["b", "t", "ht"]);
    let ht_ = mat("pp6h-t", &h, &["t", "ht"]);
    let hht = mat("pp6h-ht", &h, &["ht"]);
    mat("pp6h", &h, &["b", "t", "ht"]);
    mat("pp-top", &h, &["ht"]);
    reg.add(Kind::Matrix, "m-up", Payload::Matrix(m_up));
    reg.add(Kind::Matrix, "m-leq", Payload::Matrix(m_leq));

    let order = vec![hf_.clone(), hb.clone(), hht.clone()];
    let mut up = order.clone();
    up.push(ht_.clone());
    reg.add(Kind::Class, "pp6h-order", Payload::Class(order));
    reg.add(Kind::Class, "pp6h-up", Payload::Class(up));
    reg.add(
        Kind::Class,
        "pp6h-principal",
        Payload::Class(vec![hf_, hn, hb, ht_, hht.clone()]),
    );
    reg.add(Kind::Class, "pp-top", Payload::Class(vec![hht]));

    let x_dm = xi(&["p", "~p"]);
    let x_pp = xi(&["p", "~p", "@p"]);
    let mut calc = |name: &str, fw: Framework, rs: Vec<Rule>, x: Option<Vec<Formula>>, models: &str| {
        reg.add(
            Kind::Calculus,
            name,
            Payload::Calculus(Calculus::new(name, fw, rs, x), models.to_string()),
        );
    };
    let ss = Framework::SetSet;
    calc("r-b", ss, r_b(), x_dm, "dm4-b");
    calc("r-pp-leq", ss, r_pp_leq(), x_pp.clone(), "pp6-ub");
    let mut m_a1 = r_pp_leq();
    m_a1.extend(r_cl());
    calc("r-m-a1", ss, m_a1.clone(), x_pp.clone(), "pp6a1-ub");
    let mut h14 = r_pp_leq();
    h14.extend(r_h14());
    calc("r-h14", ss, h14, x_pp.clone(), "pp6h");
    let mut lk = m_a1.clone();
    lk.extend(r_letk());
    calc("letk-nine", ss, lk, x_pp.clone(), "letk-ub");
    let mut gen = m_a1;
    gen.extend(generated_letk_rules(&a1_ub, &letk_ub));
    calc("letk-generated", ss, gen, x_pp, "letk-ub");

    let th = Some(theta());
    calc("r-diamond", ss, r_diamond(), th.clone(), "pp6h-up");
    calc("r-imp", ss, r_imp(), th.clone(), "pp6h-up");
    calc("r-neg", ss, r_neg(), th.clone(), "pp6h-up");
    calc("r-circ", ss, r_circ(), th.clone(), "pp6h-up");
    calc("r-and", ss, r_and(), th.clone(), "pp6h-up");
    calc("r-or", ss, r_or(), th.clone(), "pp6h-up");
    calc("r-topbot", ss, r_topbot(), th.clone(), "pp6h-up");
    calc("r-d", ss, vec![r_d_and(), r_d_le()], th.clone(), "pp6h-up");
    calc("r-d-neq-t", ss, vec![r_d_neq_t()], th.clone(), "pp6h-order");
    calc("r-up", ss, r_up_rules(), th.clone(), "pp6h-up");
    let mut leq = r_up_rules();
    leq.push(r_d_neq_t());
    calc("r-leq", ss, leq, th, "pp6h-order");

    let sf = Framework::SetFmla;
    calc("moisil-top", sf, moisil_axioms(), None, "pp-top");
    calc("moisil-m12", sf, vec![contraposition()], None, "pp-top");
    calc("pp-top-rules", sf, pp_top_rules(), None, "pp-top");
    reg
}
