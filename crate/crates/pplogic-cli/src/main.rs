use std::fs;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use pplogic::algebra::{
    self, check_identity, check_inequality, congruences, filters, leibniz_and_reduce, residuum_of_meet, subalgebras,
    subalgebras_up_to_iso, unary_term_functions, variety_profile, FilterFlavor, FiniteAlgebra, IdentityCheck, Residuum,
};
use pplogic::axiomatizer::{find_discriminator, generate_refinement_rules, subsume_simplify, DiscriminatorResult};
use pplogic::calculus::{countermodel_from_partition, prove, Budget, Calculus, Framework, Outcome};
use pplogic::formula::{parse_formula, parse_formula_list, render_formula, Formula, Signature};
use pplogic::interpolation::{
    cip_failure_certificate, eip_interpolant, maehara_interpolant, InterpolationError, InterpolationInstance, Logic,
};
use pplogic::registry::{self, Kind, TenVariant};
use pplogic::semantics::{
    check_consequence, check_rule_soundness, matrix_from_json, ConsequenceProblem, Mode, MultiAlgebra, PNMatrix, VSet,
    Verdict,
};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const ERROR: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "pplogic", version, about = "Finite many-valued logic workbench")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Proof search in a calculus.
    Prove(ProveArgs),
    /// Semantic consequence over a matrix or class.
    Check(CheckArgs),
    /// Check every rule of a calculus against its models.
    Soundness(SoundnessArgs),
    /// Maximal total components of a PNmatrix.
    Components {
        #[arg(long)]
        matrix: String,
    },
    /// Discriminator of a matrix, or rules for a refinement of it.
    Axiomatize(AxiomatizeArgs),
    /// Finite algebra computations.
    Algebra(AlgebraArgs),
    /// Interpolants and the Craig interpolation counterexample.
    Interpolate(InterpolateArgs),
    /// Print a registry entry as JSON.
    Export {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// List registry names.
    List {
        #[arg(long)]
        kind: Option<String>,
    },
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long)]
    calculus: String,
    #[arg(long, default_value = "")]
    premises: String,
    /// Comma-separated conclusions; exactly one for Set-Fmla calculi.
    #[arg(long, default_value = "")]
    goal: String,
    #[arg(long, default_value_t = 1_000_000)]
    budget_nodes: u64,
    #[arg(long)]
    time_limit_secs: Option<u64>,
    /// Write the derivation as Graphviz DOT.
    #[arg(long)]
    dot: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, conflicts_with = "class")]
    matrix: Option<String>,
    #[arg(long)]
    class: Option<String>,
    #[arg(long, default_value = "")]
    premises: String,
    #[arg(long, alias = "goal", default_value = "")]
    conclusions: String,
    /// Require a single conclusion.
    #[arg(long)]
    set_fmla: bool,
}

#[derive(Args)]
struct SoundnessArgs {
    #[arg(long)]
    calculus: String,
    /// Override the declared models.
    #[arg(long, conflicts_with = "class")]
    matrix: Option<String>,
    #[arg(long)]
    class: Option<String>,
}

#[derive(Args)]
struct AxiomatizeArgs {
    #[arg(long)]
    base: String,
    #[arg(long)]
    refined: Option<String>,
    #[arg(long)]
    simplify: bool,
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraAction {
    Congruences,
    Filters,
    Subalgebras,
    Check,
    Profile,
    Residuum,
    Clone,
    Reduce,
}

#[derive(Args)]
struct AlgebraArgs {
    action: AlgebraAction,
    #[arg(long)]
    algebra: Option<String>,
    /// Matrix for `reduce`.
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long, default_value = "lattice")]
    flavor: String,
    #[arg(long)]
    lhs: Option<String>,
    #[arg(long)]
    rhs: Option<String>,
    /// Read `check` as `lhs <= rhs`.
    #[arg(long)]
    leq: bool,
    #[arg(long)]
    up_to_iso: bool,
}

#[derive(Args)]
struct InterpolateArgs {
    /// `pp-top` (Maehara) or `pp-leq` (via the deduction theorem).
    #[arg(long, default_value = "pp-top")]
    logic: String,
    #[arg(long, default_value = "")]
    phi: String,
    #[arg(long, default_value = "")]
    psi: String,
    #[arg(long)]
    goal: Option<String>,
    /// Run the Craig interpolation counterexample sweep instead.
    #[arg(long)]
    cip: bool,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Res = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(ERROR)
        }
    }
}

fn run(cli: &Cli) -> Res {
    let js = cli.json;
    match &cli.cmd {
        Cmd::Prove(a) => cmd_prove(a, js),
        Cmd::Check(a) => cmd_check(a, js),
        Cmd::Soundness(a) => cmd_soundness(a, js),
        Cmd::Components { matrix } => cmd_components(matrix, js),
        Cmd::Axiomatize(a) => cmd_axiomatize(a),
        Cmd::Algebra(a) => cmd_algebra(a, js),
        Cmd::Interpolate(a) => cmd_interpolate(a, js),
        Cmd::Export { kind, name, out } => cmd_export(kind, name, out.as_deref()),
        Cmd::List { kind } => cmd_list(kind.as_deref(), js),
    }
}

// ---------------------------------------------------------------------------
// Resolution of names and files

fn read_json(arg: &str) -> Result<Option<Json>, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))?;
            Ok(Some(serde_json::from_str(&text)?))
        }
        None => Ok(None),
    }
}

fn registry_err(kind: Kind, name: &str) -> Failure {
    Failure(format!("no built-in {kind} named `{name}`"))
}

fn load_matrix(arg: &str) -> Result<PNMatrix, Failure> {
    if let Some(j) = read_json(arg)? {
        return Ok(matrix_from_json(&j)?);
    }
    registry::lookup(Kind::Matrix, arg).map_err(|_| registry_err(Kind::Matrix, arg))?;
    Ok(registry::matrix(arg))
}

fn load_class(arg: &str) -> Result<Vec<PNMatrix>, Failure> {
    if let Some(j) = read_json(arg)? {
        return match j.get("matrices").and_then(Json::as_array) {
            Some(ms) => ms.iter().map(|m| Ok(matrix_from_json(m)?)).collect(),
            None => Ok(vec![matrix_from_json(&j)?]),
        };
    }
    registry::class(arg).map_err(|_| registry_err(Kind::Class, arg))
}

fn load_algebra(arg: &str) -> Result<MultiAlgebra, Failure> {
    if let Some(j) = read_json(arg)? {
        return Ok(matrix_from_json(&j)?.algebra);
    }
    registry::lookup(Kind::Algebra, arg).map_err(|_| registry_err(Kind::Algebra, arg))?;
    Ok(registry::algebra(arg))
}

/// A calculus and the name of its declared model class, if any.
fn load_calculus(arg: &str) -> Result<(Calculus, Option<String>), Failure> {
    if let Some(j) = read_json(arg)? {
        let models = j.get("models").and_then(Json::as_str).map(String::from);
        return Ok((Calculus::from_json(&j)?, models));
    }
    let entry = registry::lookup(Kind::Calculus, arg).map_err(|_| registry_err(Kind::Calculus, arg))?;
    let models = entry.to_json().get("models").and_then(Json::as_str).map(String::from);
    Ok((registry::calculus(arg), models))
}

fn formulas(text: &str) -> Result<Vec<Formula>, Failure> {
    Ok(parse_formula_list(text, &Signature::full())?)
}

fn show(fs: &[Formula]) -> String {
    fs.iter().map(render_formula).collect::<Vec<_>>().join(", ")
}

fn names(alg: &MultiAlgebra, s: VSet) -> Vec<String> {
    alg.set_names(s)
}

fn print_json(v: &Json) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_prove(a: &ProveArgs, js: bool) -> Res {
    let (calc, models) = load_calculus(&a.calculus)?;
    let premises = formulas(&a.premises)?;
    let goal = formulas(&a.goal)?;
    let budget = Budget {
        max_nodes: a.budget_nodes,
        time_limit: a.time_limit_secs.map(Duration::from_secs),
    };
    let outcome = prove(&calc, &premises, &goal, budget)?;
    match outcome {
        Outcome::Proved(t) => {
            if let Some(path) = &a.dot {
                fs::write(path, t.to_dot()).map_err(|e| Failure(format!("{path}: {e}")))?;
            }
            if js {
                print_json(&json!({"outcome": "proved", "size": t.size(), "depth": t.depth(), "tree": t.to_json()}));
            } else {
                println!("proved: {} ▷ {}", show(&premises), show(&goal));
                println!("derivation: {} nodes, depth {}", t.size(), t.depth());
                print_tree(&t, 0, 0);
            }
            Ok(OK)
        }
        Outcome::Refuted(part) => {
            let variant = match models.as_deref() {
                Some("pp6h-order") => Some(TenVariant::Leq),
                Some("pp6h-up") => Some(TenVariant::Up),
                _ => None,
            };
            let cm = variant.and_then(|v| countermodel_from_partition(&part, v).ok());
            let h = registry::algebra("pp6h");
            if js {
                let cmj = cm.as_ref().map(|c| {
                    json!({
                        "assignment": c.assignment.iter().map(|(k, v)| (k.clone(), json!(h.name_of(*v)))).collect::<serde_json::Map<_, _>>(),
                        "filter": h.name_of(c.filter),
                    })
                });
                print_json(&json!({
                    "outcome": "refuted",
                    "omega": part.omega.iter().map(render_formula).collect::<Vec<_>>(),
                    "omega_bar": part.omega_bar.iter().map(render_formula).collect::<Vec<_>>(),
                    "countermodel": cmj,
                }));
            } else {
                println!("refuted: {} ▷ {}", show(&premises), show(&goal));
                println!("saturated: {}", show(&part.omega));
                println!("excluded: {}", show(&part.omega_bar));
                if let Some(c) = cm {
                    let vars: Vec<String> = c
                        .assignment
                        .iter()
                        .map(|(k, v)| format!("{k}={}", h.name_of(*v)))
                        .collect();
                    println!("countermodel: {} with filter ↑{}", vars.join(" "), h.name_of(c.filter));
                }
            }
            Ok(NEGATIVE)
        }
        Outcome::OutOfBudget(msg) => {
            if js {
                print_json(&json!({"outcome": "out-of-budget", "reason": msg}));
            } else {
                println!("out of budget: {msg}");
            }
            Ok(BUDGET)
        }
    }
}

fn print_tree(t: &pplogic::calculus::DerivationTree, i: usize, indent: usize) {
    let n = &t.nodes[i];
    let pad = "  ".repeat(indent);
    let head = if i == 0 {
        format!("[{}]", show(&t.premises))
    } else if n.star {
        "*".to_string()
    } else {
        n.added.as_ref().map(render_formula).unwrap_or_default()
    };
    match &n.step {
        Some(st) => {
            let sub: Vec<String> = st
                .substitution
                .iter()
                .map(|(k, v)| format!("{k}:={}", render_formula(v)))
                .collect();
            println!("{pad}{head}  by {} {{{}}}", st.rule, sub.join(", "));
        }
        None => println!("{pad}{head}"),
    }
    for c in &n.children {
        print_tree(t, *c, indent + 1);
    }
}

fn models_of(matrix: &Option<String>, class: &Option<String>) -> Result<Option<Vec<PNMatrix>>, Failure> {
    Ok(match (matrix, class) {
        (Some(m), _) => Some(vec![load_matrix(m)?]),
        (None, Some(c)) => Some(load_class(c)?),
        (None, None) => None,
    })
}

fn cmd_check(a: &CheckArgs, js: bool) -> Res {
    let models = models_of(&a.matrix, &a.class)?.ok_or_else(|| Failure("give --matrix or --class".into()))?;
    let premises = formulas(&a.premises)?;
    let conclusions = formulas(&a.conclusions)?;
    let problem = ConsequenceProblem {
        models: models.clone(),
        premises: premises.clone(),
        conclusions: conclusions.clone(),
        mode: if a.set_fmla { Mode::SetFmla } else { Mode::SetSet },
    };
    match check_consequence(&problem)? {
        Verdict::Holds => {
            if js {
                print_json(&json!({"verdict": "holds"}));
            } else {
                println!("holds: {} ▷ {}", show(&premises), show(&conclusions));
            }
            Ok(OK)
        }
        Verdict::Fails { matrix, witness } => {
            let m = &models[matrix];
            if js {
                print_json(&json!({
                    "verdict": "fails",
                    "matrix": m.name,
                    "designated": names(&m.algebra, m.designated),
                    "witness": witness.to_json(&m.algebra),
                }));
            } else {
                println!("fails: {} ▷ {}", show(&premises), show(&conclusions));
                println!("countermodel in {}: {}", m.name, witness.render_vars(&m.algebra));
            }
            Ok(NEGATIVE)
        }
    }
}

fn cmd_soundness(a: &SoundnessArgs, js: bool) -> Res {
    let (calc, declared) = load_calculus(&a.calculus)?;
    let models = match models_of(&a.matrix, &a.class)? {
        Some(m) => m,
        None => {
            let name = declared.ok_or_else(|| Failure("no declared models; give --matrix or --class".into()))?;
            load_class(&name)?
        }
    };
    let mut rows = vec![];
    let mut unsound = 0;
    for r in &calc.rules {
        let problem_models = models.clone();
        let verdict = if calc.framework == Framework::SetFmla && r.conclusions.len() != 1 {
            check_consequence(&ConsequenceProblem {
                models: problem_models,
                premises: r.premises.clone(),
                conclusions: r.conclusions.clone(),
                mode: Mode::SetSet,
            })?
        } else {
            check_rule_soundness(&r.premises, &r.conclusions, &problem_models)?
        };
        match verdict {
            Verdict::Holds => rows.push(json!({"rule": r.name, "sound": true})),
            Verdict::Fails { matrix, witness } => {
                unsound += 1;
                let m = &models[matrix];
                rows.push(json!({
                    "rule": r.name,
                    "sound": false,
                    "matrix": m.name,
                    "witness": witness.render_vars(&m.algebra),
                }));
            }
        }
    }
    if js {
        print_json(&json!({"calculus": calc.name, "rules": rows, "unsound": unsound}));
    } else {
        for (r, row) in calc.rules.iter().zip(&rows) {
            if row["sound"].as_bool() == Some(true) {
                println!("sound    {r}");
            } else {
                println!(
                    "UNSOUND  {r}  in {} at {}",
                    row["matrix"].as_str().unwrap_or(""),
                    row["witness"].as_str().unwrap_or("")
                );
            }
        }
        println!("{} rules, {unsound} unsound", calc.rules.len());
    }
    Ok(if unsound == 0 { OK } else { NEGATIVE })
}

fn cmd_components(matrix: &str, js: bool) -> Res {
    let m = load_matrix(matrix)?;
    let comps: Vec<Vec<String>> = m.components().iter().map(|x| names(&m.algebra, *x)).collect();
    if js {
        print_json(&json!({"matrix": m.name, "components": comps}));
    } else {
        for c in comps {
            println!("{{{}}}", c.join(", "));
        }
    }
    Ok(OK)
}

fn cmd_axiomatize(a: &AxiomatizeArgs) -> Res {
    let base = load_matrix(&a.base)?;
    let d = match find_discriminator(&base, a.depth) {
        DiscriminatorResult::Found(d) => d,
        DiscriminatorResult::NotMonadic(w) => {
            let pairs: Vec<[&str; 2]> = w
                .pairs
                .iter()
                .map(|(x, y)| [base.algebra.name_of(*x), base.algebra.name_of(*y)])
                .collect();
            print_json(&json!({
                "monadic": false,
                "unseparated": pairs,
                "depth": w.depth,
                "saturated": w.saturated,
            }));
            return Ok(NEGATIVE);
        }
    };
    let Some(refined) = &a.refined else {
        print_json(&json!({"monadic": true, "discriminator": d.to_json(&base)}));
        return Ok(OK);
    };
    let refined = load_matrix(refined)?;
    let mut rules = generate_refinement_rules(&base, &refined, &d)?;
    if a.simplify {
        rules = subsume_simplify(&rules);
    }
    let calc = Calculus::new(&format!("{}-generated", refined.name), Framework::SetSet, rules, None);
    print_json(&calc.to_json());
    Ok(OK)
}

fn cmd_algebra(a: &AlgebraArgs, js: bool) -> Res {
    if let AlgebraAction::Reduce = a.action {
        let arg = a
            .matrix
            .as_deref()
            .ok_or_else(|| Failure("`reduce` needs --matrix".into()))?;
        let m = load_matrix(arg)?;
        let (theta, q) = leibniz_and_reduce(&m)?;
        if js {
            print_json(&json!({
                "leibniz": theta.blocks.iter().map(|b| names(&m.algebra, *b)).collect::<Vec<_>>(),
                "reduced": theta.is_identity(),
                "quotient": pplogic::semantics::matrix_to_json(&q),
            }));
        } else {
            println!("leibniz congruence: {}", theta.render(&m.algebra));
            println!("reduced: {}", theta.is_identity());
        }
        return Ok(OK);
    }
    let arg = a.algebra.as_deref().ok_or_else(|| Failure("give --algebra".into()))?;
    let alg = FiniteAlgebra::new(load_algebra(arg)?)?;
    let set_list = |v: &[VSet]| v.iter().map(|s| names(&alg.alg, *s)).collect::<Vec<_>>();
    let print_sets = |v: &[VSet]| {
        for s in v {
            println!("{{{}}}", names(&alg.alg, *s).join(", "));
        }
    };
    match a.action {
        AlgebraAction::Congruences => {
            let cs = congruences(&alg)?;
            if js {
                let blocks: Vec<Vec<Vec<String>>> = cs.iter().map(|c| set_list(&c.blocks)).collect();
                print_json(&json!({"congruences": blocks, "simple": cs.len() == 2}));
            } else {
                for c in &cs {
                    println!("{}", c.render(&alg.alg));
                }
                println!(
                    "{} congruences{}",
                    cs.len(),
                    if cs.len() == 2 { " (simple)" } else { "" }
                );
            }
        }
        AlgebraAction::Filters => {
            let flavor =
                FilterFlavor::parse(&a.flavor).ok_or_else(|| Failure(format!("unknown flavor `{}`", a.flavor)))?;
            let fs = filters(&alg, flavor)?;
            if js {
                print_json(&json!({"flavor": a.flavor, "filters": set_list(&fs)}));
            } else {
                print_sets(&fs);
            }
        }
        AlgebraAction::Subalgebras => {
            let ss = if a.up_to_iso {
                subalgebras_up_to_iso(&alg)?
            } else {
                subalgebras(&alg)?
            };
            if js {
                print_json(&json!({"subalgebras": set_list(&ss)}));
            } else {
                print_sets(&ss);
            }
        }
        AlgebraAction::Check => {
            let sig = Signature::full();
            let lhs = parse_formula(
                a.lhs.as_deref().ok_or_else(|| Failure("`check` needs --lhs".into()))?,
                &sig,
            )?;
            let rhs = parse_formula(
                a.rhs.as_deref().ok_or_else(|| Failure("`check` needs --rhs".into()))?,
                &sig,
            )?;
            let r = if a.leq {
                check_inequality(&alg, &lhs, &rhs)?
            } else {
                check_identity(&alg, &lhs, &rhs)?
            };
            return Ok(match r {
                IdentityCheck::Valid => {
                    if js {
                        print_json(&json!({"valid": true}));
                    } else {
                        println!("valid");
                    }
                    OK
                }
                IdentityCheck::Counterexample(env) => {
                    let named: serde_json::Map<String, Json> = env
                        .iter()
                        .map(|(k, v)| (k.clone(), json!(alg.alg.name_of(*v))))
                        .collect();
                    if js {
                        print_json(&json!({"valid": false, "counterexample": named}));
                    } else {
                        let parts: Vec<String> = env
                            .iter()
                            .map(|(k, v)| format!("{k}={}", alg.alg.name_of(*v)))
                            .collect();
                        println!("counterexample: {}", parts.join(" "));
                    }
                    NEGATIVE
                }
            });
        }
        AlgebraAction::Profile => {
            let p = variety_profile(&alg)?;
            if js {
                print_json(&serde_json::to_value(&p)?);
            } else {
                for s in algebra::Suite::ALL {
                    let status = if p.holds.contains(&s) {
                        "holds".to_string()
                    } else if let Some((eq, _)) = p.fails.get(&s) {
                        format!("fails {eq}")
                    } else {
                        format!("skipped (no {})", p.skipped.get(&s).cloned().unwrap_or_default())
                    };
                    println!("{s:<18} {status}");
                }
            }
        }
        AlgebraAction::Residuum => match residuum_of_meet(&alg)? {
            Residuum::Table(t) => {
                let rows: Vec<Vec<&str>> = t
                    .iter()
                    .map(|r| r.iter().map(|v| alg.alg.name_of(*v)).collect())
                    .collect();
                if js {
                    print_json(&json!({"residuated": true, "values": alg.alg.carrier(), "table": rows}));
                } else {
                    for (i, r) in rows.iter().enumerate() {
                        println!("{:>3} | {}", alg.alg.name_of(i as u8), r.join(" "));
                    }
                }
            }
            Residuum::NotResiduated(x, y) => {
                let (x, y) = (alg.alg.name_of(x), alg.alg.name_of(y));
                if js {
                    print_json(&json!({"residuated": false, "witness": [x, y]}));
                } else {
                    println!("not residuated: no largest c with {x} & c <= {y}");
                }
                return Ok(NEGATIVE);
            }
        },
        AlgebraAction::Clone => {
            let fs = unary_term_functions(&alg)?;
            if js {
                let rows: Vec<Json> = fs
                    .iter()
                    .map(|u| {
                        json!({
                            "map": u.map.iter().map(|v| alg.alg.name_of(*v)).collect::<Vec<_>>(),
                            "witness": render_formula(&u.witness),
                        })
                    })
                    .collect();
                print_json(&json!({"count": fs.len(), "functions": rows}));
            } else {
                for u in &fs {
                    let m: Vec<&str> = u.map.iter().map(|v| alg.alg.name_of(*v)).collect();
                    println!("{}  {}", m.join(" "), render_formula(&u.witness));
                }
                println!("{} unary term functions", fs.len());
            }
        }
        AlgebraAction::Reduce => unreachable!("handled above"),
    }
    Ok(OK)
}

fn cmd_interpolate(a: &InterpolateArgs, js: bool) -> Res {
    if a.cip {
        let r = cip_failure_certificate();
        if js {
            print_json(&serde_json::to_value(&r)?);
        } else {
            println!("Phi = {}  goal = {}", r.phi, r.goal);
            println!("Phi entails goal: {}", r.phi_entails_goal);
            println!(
                "at p=b q=n r=b s=hf: Phi = {}, goal = {}",
                r.phi_at_witness, r.goal_at_witness
            );
            println!("{} of {} unary functions interpolate", r.passing, r.functions);
        }
        return Ok(if r.phi_entails_goal && r.passing == 0 {
            OK
        } else {
            NEGATIVE
        });
    }
    let logic = Logic::parse(&a.logic).ok_or_else(|| Failure(format!("unknown logic `{}`", a.logic)))?;
    let goal = a.goal.as_deref().ok_or_else(|| Failure("give --goal".into()))?;
    let inst = InterpolationInstance {
        phi: formulas(&a.phi)?,
        psi: formulas(&a.psi)?,
        goal: parse_formula(goal, &Signature::full())?,
        logic,
    };
    let result = match logic {
        Logic::Assertional => maehara_interpolant(&inst).map(|m| vec![m.xi]),
        Logic::OrderPreserving => eip_interpolant(&inst),
    };
    match result {
        Ok(pi) => {
            if js {
                print_json(&json!({
                    "interpolant": pi.iter().map(render_formula).collect::<Vec<_>>(),
                    "phi_entails_interpolant": true,
                    "interpolant_and_psi_entail_goal": true,
                }));
            } else {
                println!("interpolant: {}", show(&pi));
                println!("Phi entails interpolant: verified");
                println!("interpolant, Psi entail goal: verified");
            }
            Ok(OK)
        }
        Err(InterpolationError::PremiseNotEntailed) => {
            if js {
                print_json(&json!({"error": "premises do not entail the goal"}));
            } else {
                println!("premises do not entail the goal");
            }
            Ok(NEGATIVE)
        }
        Err(e) => Err(e.into()),
    }
}

fn parse_kind(s: &str) -> Result<Kind, Failure> {
    Kind::parse(s).ok_or_else(|| Failure(format!("unknown kind `{s}`")))
}

fn cmd_export(kind: &str, name: &str, out: Option<&str>) -> Res {
    let k = parse_kind(kind)?;
    let entry = registry::lookup(k, name).map_err(|_| registry_err(k, name))?;
    let text = serde_json::to_string_pretty(&entry.to_json())?;
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure(format!("{path}: {e}")))?,
        None => println!("{text}"),
    }
    Ok(OK)
}

fn cmd_list(kind: Option<&str>, js: bool) -> Res {
    let kinds = match kind {
        Some(k) => vec![parse_kind(k)?],
        None => vec![Kind::Algebra, Kind::Matrix, Kind::Class, Kind::Calculus],
    };
    if js {
        let m: serde_json::Map<String, Json> = kinds
            .iter()
            .map(|k| (k.to_string(), json!(registry::names(*k))))
            .collect();
        print_json(&Json::Object(m));
    } else {
        for k in kinds {
            println!("{k}: {}", registry::names(k).join(" "));
        }
    }
    Ok(OK)
}
