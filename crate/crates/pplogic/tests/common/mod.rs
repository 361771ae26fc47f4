#![allow(dead_code)]

use pplogic::formula::{Conn, Formula};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Seeded generator of formulas and sequents over a fixed vocabulary.
pub struct Gen {
    rng: StdRng,
    vars: Vec<String>,
    nullary: Vec<Conn>,
    compound: Vec<Conn>,
}

impl Gen {
    pub fn new(seed: u64, vars: &[&str], conns: impl IntoIterator<Item = Conn>) -> Gen {
        let (nullary, compound): (Vec<Conn>, Vec<Conn>) = conns.into_iter().partition(|c| c.arity() == 0);
        Gen {
            rng: StdRng::seed_from_u64(seed),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            nullary,
            compound,
        }
    }

    pub fn rng(&mut self) -> &mut StdRng {
        &mut self.rng
    }

    pub fn atom(&mut self) -> Formula {
        if !self.nullary.is_empty() && self.rng.gen_bool(0.1) {
            let c = *self.nullary.choose(&mut self.rng).unwrap();
            return Formula::app(c, vec![]);
        }
        Formula::var(self.vars.choose(&mut self.rng).unwrap())
    }

    /// Connective depth at most `depth`.
    pub fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.compound.is_empty() || self.rng.gen_bool(0.25) {
            return self.atom();
        }
        let c = *self.compound.choose(&mut self.rng).unwrap();
        let args = (0..c.arity()).map(|_| self.formula(depth - 1)).collect();
        Formula::app(c, args)
    }

    /// Up to two premises and one or two conclusions. About a third of the
    /// sequents reuse a premise subformula as a conclusion so that both
    /// verdicts show up.
    pub fn sequent(&mut self, depth: usize) -> (Vec<Formula>, Vec<Formula>) {
        let np = self.rng.gen_range(0..=2);
        let premises: Vec<Formula> = (0..np).map(|_| self.formula(depth)).collect();
        let nc = self.rng.gen_range(1..=2);
        let mut conclusions: Vec<Formula> = (0..nc).map(|_| self.formula(depth)).collect();
        if !premises.is_empty() && self.rng.gen_bool(0.35) {
            let p = premises.choose(&mut self.rng).unwrap().subformulas();
            conclusions[0] = p.choose(&mut self.rng).unwrap().clone();
        }
        (premises, conclusions)
    }
}

pub fn show(fs: &[Formula]) -> String {
    fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}
