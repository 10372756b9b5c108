//! JSON and text shapes for command output.

use std::fmt::Write as _;

use interdict_core::dual::{candidate_alphas, f_exact_with};
use interdict_core::nominal::integer_knapsack_k;
use interdict_core::oracles::{vertex_enum_lp, DEFAULT_LP_MAX_N};
use interdict_core::{preprocess, Error, Instance, InterdictionVector, Rat, Solution, SolveStats};
use serde::Serialize;

use crate::Failure;

pub fn bits(x: &InterdictionVector) -> Vec<u8> {
    x.bits().iter().map(|&b| u8::from(b)).collect()
}

#[derive(Serialize)]
pub struct SolveReport {
    pub guarantee: &'static str,
    pub eps: Rat,
    pub eps_internal: Option<Rat>,
    pub n: usize,
    pub t: usize,
    pub x: Vec<u8>,
    pub interdicted: Vec<usize>,
    pub cost: String,
    pub f_value: Rat,
    /// Integer follower value, `None` when the DP would be too large.
    pub k_value: Option<Rat>,
    pub additive_cert: Rat,
    pub z_star: Option<Rat>,
    pub alpha_star: Option<Vec<Rat>>,
    pub stats: SolveStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Recomputes `F(x)` by a route other than the solver's own and checks the
/// budget, so nothing uncertified is ever printed.
fn certify(inst: &Instance, sol: &Solution) -> Result<Option<Rat>, Failure> {
    if !sol.x.is_feasible(inst) {
        return Err(Error::InvariantViolation("interdiction exceeds the budget".into()).into());
    }
    let pre = preprocess(inst);
    let reduced = &pre.instance;
    let x = pre.restrict(&sol.x);
    let check = if reduced.t() == 1 || reduced.t() > 3 || reduced.n() > DEFAULT_LP_MAX_N {
        // The solver used greedy for one constraint, so the dual is the second route.
        f_exact_with(reduced, &x, &candidate_alphas(reduced))?
    } else {
        vertex_enum_lp(reduced, &x, DEFAULT_LP_MAX_N)?.value
    };
    if check != sol.f_value {
        return Err(Error::InvariantViolation(format!(
            "f_value {} disagrees with recomputation {check}",
            sol.f_value
        ))
        .into());
    }
    match integer_knapsack_k(reduced, &x) {
        Ok(k) => Ok(Some(k.value)),
        Err(Error::TooLarge { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

impl SolveReport {
    pub fn build(
        inst: &Instance,
        sol: &Solution,
        elapsed_ms: Option<u128>,
    ) -> Result<Self, Failure> {
        let k_value = certify(inst, sol)?;
        Ok(SolveReport {
            guarantee: sol.guarantee.as_str(),
            eps: sol.eps.clone(),
            eps_internal: sol.eps_internal.clone(),
            n: inst.n(),
            t: inst.t(),
            x: bits(&sol.x),
            interdicted: sol.interdicted(),
            cost: sol.x.cost().to_string(),
            f_value: sol.f_value.clone(),
            k_value,
            additive_cert: sol.additive_cert.clone(),
            z_star: sol.z_star.clone(),
            alpha_star: sol.alpha_star.as_ref().map(|a| a.alpha.clone()),
            stats: sol.stats.clone(),
            elapsed_ms,
        })
    }

    pub fn to_text(&self) -> String {
        let opt = |v: &Option<Rat>| v.as_ref().map_or("-".to_string(), Rat::to_string);
        let mut s = String::new();
        let _ = writeln!(s, "guarantee      {} (eps = {})", self.guarantee, self.eps);
        let _ = writeln!(s, "instance       n = {}, t = {}", self.n, self.t);
        let _ = writeln!(
            s,
            "interdicted    {:?} (cost {})",
            self.interdicted, self.cost
        );
        let _ = writeln!(s, "f_value        {}", self.f_value);
        let _ = writeln!(s, "k_value        {}", opt(&self.k_value));
        let _ = writeln!(s, "additive_cert  {}", self.additive_cert);
        let _ = writeln!(s, "z_star         {}", opt(&self.z_star));
        if let Some(a) = &self.alpha_star {
            let parts: Vec<String> = a.iter().map(Rat::to_string).collect();
            let _ = writeln!(s, "alpha_star     ({})", parts.join(", "));
        }
        let _ = writeln!(
            s,
            "stats          {} candidates, {} tests, {} tables, {} states",
            self.stats.candidates,
            self.stats.accept_tests,
            self.stats.dp_tables,
            self.stats.dp_states
        );
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed_ms     {ms}");
        }
        s
    }
}

#[derive(Serialize)]
pub struct ExactReport {
    pub opt_f: Rat,
    pub x: Vec<u8>,
    pub alpha: Vec<Rat>,
    pub candidates: usize,
}
