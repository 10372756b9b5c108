//! Seeded random instance generator.
//!
//! Draws come from ChaCha8 (`rand_chacha`) seeded with `seed_from_u64`, in a
//! fixed order: all profits, then all costs, then the weight rows one
//! constraint at a time. Each value is uniform on `[1, max]`. The budget is
//! `round(budget_frac · Σc)` and capacity `j` is `round(cap_frac · Σ_i w_ji)`,
//! rounding halves up.

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub t: usize,
    pub seed: u64,
    pub pmax: u64,
    pub wmax: u64,
    pub cmax: u64,
    pub budget_frac: Rat,
    pub cap_frac: Rat,
}

impl GenParams {
    /// Uniform `[1, 100]` data, budget a third of total cost, capacity half
    /// of total weight.
    pub fn new(n: usize, t: usize, seed: u64) -> Self {
        GenParams {
            n,
            t,
            seed,
            pmax: 100,
            wmax: 100,
            cmax: 100,
            budget_frac: Rat::ratio(1, 3),
            cap_frac: Rat::ratio(1, 2),
        }
    }

    pub fn with_max(mut self, pmax: u64, wmax: u64, cmax: u64) -> Self {
        self.pmax = pmax;
        self.wmax = wmax;
        self.cmax = cmax;
        self
    }

    pub fn with_fracs(mut self, budget_frac: Rat, cap_frac: Rat) -> Self {
        self.budget_frac = budget_frac;
        self.cap_frac = cap_frac;
        self
    }
}

fn round_half_up(v: &Rat) -> BigUint {
    (v + &Rat::ratio(1, 2))
        .floor()
        .to_biguint()
        .expect("non-negative")
}

pub fn generate(params: &GenParams) -> Result<Instance> {
    if params.t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    for (name, v) in [
        ("pmax", params.pmax),
        ("wmax", params.wmax),
        ("cmax", params.cmax),
    ] {
        if v == 0 {
            return Err(Error::InvalidParameter(format!(
                "{name} must be at least 1"
            )));
        }
    }
    for (name, v) in [
        ("budget-frac", &params.budget_frac),
        ("cap-frac", &params.cap_frac),
    ] {
        if v.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "{name} must be non-negative"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut draw =
        |max: u64, len: usize| -> Vec<u64> { (0..len).map(|_| rng.gen_range(1..=max)).collect() };
    let profits = draw(params.pmax, params.n);
    let costs = draw(params.cmax, params.n);
    let weights: Vec<Vec<u64>> = (0..params.t).map(|_| draw(params.wmax, params.n)).collect();

    let scaled =
        |frac: &Rat, total: u128| round_half_up(&(frac * &Rat::from_int(BigInt::from(total))));
    let budget = scaled(&params.budget_frac, costs.iter().map(|&c| c as u128).sum());
    let capacities: Vec<BigUint> = weights
        .iter()
        .map(|row| scaled(&params.cap_frac, row.iter().map(|&w| w as u128).sum()))
        .collect();

    let big = |v: &[u64]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
    Instance::new(
        big(&profits),
        big(&costs),
        weights.iter().map(|r| big(r)).collect(),
        budget,
        capacities,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let p = GenParams::new(12, 2, 1);
        assert_eq!(
            generate(&p).unwrap().to_json(),
            generate(&p).unwrap().to_json()
        );
        let q = GenParams::new(12, 2, 2);
        assert_ne!(generate(&p).unwrap(), generate(&q).unwrap());
    }

    #[test]
    fn empty_and_full_budget() {
        let inst = generate(&GenParams::new(0, 1, 7)).unwrap();
        assert_eq!(inst.n(), 0);
        assert_eq!(inst.capacities, vec![BigUint::default()]);

        let inst = generate(&GenParams::new(9, 1, 3).with_fracs(Rat::one(), Rat::one())).unwrap();
        assert_eq!(inst.budget, inst.total_cost());
    }

    #[test]
    fn values_in_range() {
        let inst = generate(&GenParams::new(50, 3, 11).with_max(5, 7, 3)).unwrap();
        assert!(inst
            .profits
            .iter()
            .all(|p| *p >= BigUint::from(1u32) && *p <= BigUint::from(5u32)));
        assert!(inst
            .costs
            .iter()
            .all(|c| *c >= BigUint::from(1u32) && *c <= BigUint::from(3u32)));
        assert!(inst
            .weights
            .iter()
            .flatten()
            .all(|w| *w <= BigUint::from(7u32)));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(generate(&GenParams::new(3, 0, 1)).is_err());
        assert!(generate(&GenParams::new(3, 1, 1).with_max(0, 1, 1)).is_err());
        assert!(generate(&GenParams::new(3, 1, 1).with_fracs(Rat::from(-1), Rat::one())).is_err());
    }
}
