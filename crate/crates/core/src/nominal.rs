//! Follower-side knapsack primitives.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::instance::{Instance, InterdictionVector};
use crate::rat::{to_biguint, Rat};

/// Default cap on DP states for the pseudopolynomial tables in this module.
pub const DEFAULT_STATE_LIMIT: usize = 10_000_000;

/// Optimal value of a 0-1 knapsack together with the selected items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackAnswer {
    pub value: Rat,
    pub chosen: Vec<bool>,
}

/// A solution of the LP relaxation of the follower's knapsack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracPacking {
    pub y: Vec<Rat>,
    pub value: Rat,
    pub frac_support: Vec<usize>,
}

impl FracPacking {
    pub(crate) fn from_y(y: Vec<Rat>, profits: &[BigUint]) -> Self {
        let value = y
            .iter()
            .zip(profits)
            .map(|(yi, p)| yi * &Rat::from_uint(p))
            .sum();
        let frac_support = y
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_positive() && **v < Rat::one())
            .map(|(i, _)| i)
            .collect();
        FracPacking {
            y,
            value,
            frac_support,
        }
    }
}

/// Maximizes `Σ profits_i` over selections whose total cost fits `budget`.
///
/// Profits are rationals; they are scaled to a common denominator so the DP
/// itself runs over integers. When both branches are optimal the item is
/// selected.
pub fn knapsack_max_budget(
    profits: &[Rat],
    costs: &[BigUint],
    budget: &BigUint,
) -> Result<KnapsackAnswer> {
    knapsack_max_budget_limited(profits, costs, budget, DEFAULT_STATE_LIMIT)
}

pub fn knapsack_max_budget_limited(
    profits: &[Rat],
    costs: &[BigUint],
    budget: &BigUint,
    state_limit: usize,
) -> Result<KnapsackAnswer> {
    assert_eq!(profits.len(), costs.len());
    let n = profits.len();
    if let Some(p) = profits.iter().find(|p| p.is_negative()) {
        return Err(Error::InvalidParameter(format!(
            "negative knapsack profit {p}"
        )));
    }

    // Selecting everything is the only thing a budget ≥ Σc can buy.
    let total: BigUint = costs.iter().sum();
    let cap = std::cmp::min(budget, &total);
    let cap = cap
        .to_usize()
        .filter(|&b| {
            b.checked_add(1)
                .and_then(|s| s.checked_mul(n + 1))
                .is_some_and(|s| s <= state_limit)
        })
        .ok_or_else(|| Error::TooLarge {
            what: "budget DP",
            size: format!("{} x {}", n + 1, cap),
            limit: state_limit.to_string(),
        })?;

    let den = profits
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let scaled: Vec<BigUint> = profits
        .iter()
        .map(|p| to_biguint(&(p.numer() * (&den / p.denom()))).expect("non-negative"))
        .collect();
    let small_costs: Vec<Option<usize>> = costs
        .iter()
        .map(|c| c.to_usize().filter(|&c| c <= cap))
        .collect();

    // best[i][b]: max profit from items i.. with budget b.
    let width = cap + 1;
    let mut best = vec![BigUint::zero(); (n + 1) * width];
    for i in (0..n).rev() {
        let (head, tail) = best.split_at_mut((i + 1) * width);
        let row = &mut head[i * width..];
        let next = &tail[..width];
        for b in 0..width {
            let skip = &next[b];
            row[b] = match small_costs[i] {
                Some(c) if c <= b => {
                    let take = &scaled[i] + &next[b - c];
                    if take >= *skip {
                        take
                    } else {
                        skip.clone()
                    }
                }
                _ => skip.clone(),
            };
        }
    }

    let mut chosen = vec![false; n];
    let mut b = cap;
    for i in 0..n {
        let next = &best[(i + 1) * width..(i + 2) * width];
        if let Some(c) = small_costs[i].filter(|&c| c <= b) {
            if &scaled[i] + &next[b - c] >= next[b] {
                chosen[i] = true;
                b -= c;
            }
        }
    }
    let value = Rat::new(BigInt::from(best[cap].clone()), den);
    Ok(KnapsackAnswer { value, chosen })
}

/// Exact LP optimum `F(x)` for a single capacity constraint, by the greedy
/// ratio rule. Zero-weight items with positive profit go first; equal ratios
/// are taken in index order.
pub fn fractional_knapsack(inst: &Instance, x: &InterdictionVector) -> Result<FracPacking> {
    if inst.t() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "fractional knapsack needs t = 1, got t = {}",
            inst.t()
        )));
    }
    let weights = &inst.weights[0];
    let mut order: Vec<usize> = x
        .survivors()
        .filter(|&i| !inst.profits[i].is_zero())
        .collect();
    // p_a/w_a > p_b/w_b  ⇔  p_a·w_b > p_b·w_a, with w = 0 acting as +∞.
    order.sort_by(|&a, &b| {
        let lhs = &inst.profits[a] * &weights[b];
        let rhs = &inst.profits[b] * &weights[a];
        rhs.cmp(&lhs).then(a.cmp(&b))
    });

    let mut y = vec![Rat::zero(); inst.n()];
    let mut remaining = inst.capacities[0].clone();
    for i in order {
        let w = &weights[i];
        if *w <= remaining {
            y[i] = Rat::one();
            remaining -= w;
        } else {
            y[i] = Rat::new(BigInt::from(remaining.clone()), BigInt::from(w.clone()));
            break;
        }
    }
    Ok(FracPacking::from_y(y, &inst.profits))
}

/// Exact integer follower value `K(x)` by a capacity-indexed DP over the
/// product of all capacities.
pub fn integer_knapsack_k(inst: &Instance, x: &InterdictionVector) -> Result<KnapsackAnswer> {
    integer_knapsack_k_limited(inst, x, DEFAULT_STATE_LIMIT)
}

pub fn integer_knapsack_k_limited(
    inst: &Instance,
    x: &InterdictionVector,
    state_limit: usize,
) -> Result<KnapsackAnswer> {
    let n = inst.n();
    let t = inst.t();
    let items: Vec<usize> = x
        .survivors()
        .filter(|&i| !inst.profits[i].is_zero())
        .filter(|&i| {
            inst.item_weights(i)
                .zip(&inst.capacities)
                .all(|(w, c)| w <= c)
        })
        .collect();

    // A capacity larger than the survivors' total weight behaves like that total.
    let too_large = |size: String| Error::TooLarge {
        what: "capacity DP",
        size,
        limit: state_limit.to_string(),
    };
    let mut dims = Vec::with_capacity(t);
    for j in 0..t {
        let used: BigUint = items.iter().map(|&i| &inst.weights[j][i]).sum();
        let cap = std::cmp::min(&inst.capacities[j], &used);
        dims.push(cap.to_usize().ok_or_else(|| too_large(cap.to_string()))?);
    }
    let mut states: usize = 1;
    for &d in &dims {
        states = states
            .checked_mul(d + 1)
            .filter(|&s| s <= state_limit)
            .ok_or_else(|| too_large(format!("{dims:?}")))?;
    }
    if items.len().saturating_mul(states) > state_limit.saturating_mul(8) {
        return Err(too_large(format!(
            "{} items x {states} states",
            items.len()
        )));
    }

    // Mixed-radix strides: index = Σ_j s_j · stride_j.
    let mut strides = vec![1usize; t];
    for j in 1..t {
        strides[j] = strides[j - 1] * (dims[j - 1] + 1);
    }
    let item_w: Vec<Vec<usize>> = items
        .iter()
        .map(|&i| {
            (0..t)
                .map(|j| inst.weights[j][i].to_usize().unwrap())
                .collect()
        })
        .collect();
    let offset = |w: &[usize]| w.iter().zip(&strides).map(|(a, s)| a * s).sum::<usize>();
    let fits = |mut s: usize, w: &[usize]| {
        for j in (0..t).rev() {
            let coord = s / strides[j];
            if coord < w[j] {
                return false;
            }
            s %= strides[j];
        }
        true
    };

    // Items are processed last-to-first so that reconstruction can walk forward.
    let mut best = vec![BigUint::zero(); states];
    let mut take = vec![false; items.len() * states];
    for (k, &i) in items.iter().enumerate().rev() {
        let w = &item_w[k];
        let off = offset(w);
        let p = &inst.profits[i];
        let flags = &mut take[k * states..(k + 1) * states];
        for s in (0..states).rev() {
            if !fits(s, w) {
                continue;
            }
            let cand = p + &best[s - off];
            if cand >= best[s] {
                best[s] = cand;
                flags[s] = true;
            }
        }
    }

    let mut chosen = vec![false; n];
    let mut s = states - 1;
    for (k, &i) in items.iter().enumerate() {
        if take[k * states + s] {
            chosen[i] = true;
            s -= offset(&item_w[k]);
        }
    }
    Ok(KnapsackAnswer {
        value: Rat::from_uint(&best[states - 1]),
        chosen,
    })
}

/// Drops every fractional coordinate of an LP packing.
pub fn round_down_packing(fp: &FracPacking, profits: &[BigUint]) -> KnapsackAnswer {
    let chosen: Vec<bool> = fp.y.iter().map(|v| *v == Rat::one()).collect();
    let value = chosen
        .iter()
        .zip(profits)
        .filter(|(c, _)| **c)
        .map(|(_, p)| Rat::from_uint(p))
        .sum();
    KnapsackAnswer { value, chosen }
}

/// Largest profit among items left available by `x`, zero if none remain.
pub fn max_surviving_profit(inst: &Instance, x: &InterdictionVector) -> BigUint {
    x.survivors()
        .map(|i| inst.profits[i].clone())
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> Instance {
        Instance::from_u64(&[3, 2], &[1, 1], &[vec![2, 2]], 1, &[2]).unwrap()
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn rats(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from(x)).collect()
    }

    fn brute_budget(profits: &[Rat], costs: &[BigUint], budget: &BigUint) -> Rat {
        let n = profits.len();
        (0u32..1 << n)
            .filter(|m| {
                (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| &costs[i])
                    .sum::<BigUint>()
                    <= *budget
            })
            .map(|m| {
                (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| &profits[i])
                    .sum::<Rat>()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn knapsack_t1_reduced_profits() {
        let ans = knapsack_max_budget(&rats(&[1, 0]), &big(&[1, 1]), &BigUint::one()).unwrap();
        assert_eq!(ans.value, Rat::one());
        assert_eq!(ans.chosen, vec![true, false]);
        assert_eq!(
            brute_budget(&rats(&[1, 0]), &big(&[1, 1]), &BigUint::one()),
            Rat::one()
        );
    }

    #[test]
    fn knapsack_zero_budget_takes_free_items() {
        let ans =
            knapsack_max_budget(&rats(&[5, 7, 2]), &big(&[1, 0, 0]), &BigUint::zero()).unwrap();
        assert_eq!(ans.value, Rat::from(9));
        assert_eq!(ans.chosen, vec![false, true, true]);
    }

    #[test]
    fn knapsack_zero_profits() {
        let ans = knapsack_max_budget(&rats(&[0, 0]), &big(&[1, 2]), &BigUint::from(5u32)).unwrap();
        assert_eq!(ans.value, Rat::zero());
        // ties prefer selection
        assert_eq!(ans.chosen, vec![true, true]);
    }

    #[test]
    fn knapsack_rational_profits_match_brute_force() {
        let profits = vec![
            Rat::ratio(1, 3),
            Rat::ratio(5, 6),
            Rat::ratio(3, 4),
            Rat::ratio(1, 2),
        ];
        let costs = big(&[2, 3, 2, 1]);
        for b in 0..9u32 {
            let budget = BigUint::from(b);
            let ans = knapsack_max_budget(&profits, &costs, &budget).unwrap();
            assert_eq!(
                ans.value,
                brute_budget(&profits, &costs, &budget),
                "budget {b}"
            );
            let spent: BigUint = (0..4).filter(|&i| ans.chosen[i]).map(|i| &costs[i]).sum();
            assert!(spent <= budget);
        }
    }

    #[test]
    fn knapsack_state_limit() {
        let err = knapsack_max_budget_limited(
            &rats(&[1, 1]),
            &big(&[1000, 1000]),
            &BigUint::from(5000u32),
            100,
        )
        .unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }

    #[test]
    fn fractional_t1() {
        let inst = t1();
        let x = InterdictionVector::from_bits(&inst, vec![true, false]);
        let fp = fractional_knapsack(&inst, &x).unwrap();
        assert_eq!(fp.y, vec![Rat::zero(), Rat::one()]);
        assert_eq!(fp.value, Rat::from(2));

        let fp = fractional_knapsack(&inst, &InterdictionVector::none(&inst)).unwrap();
        assert_eq!(fp.y, vec![Rat::one(), Rat::zero()]);
        assert_eq!(fp.value, Rat::from(3));
        assert!(fp.frac_support.is_empty());

        let fp = fractional_knapsack(&inst, &InterdictionVector::all(&inst)).unwrap();
        assert_eq!(fp.value, Rat::zero());
    }

    #[test]
    fn fractional_splits_one_item() {
        let inst = Instance::from_u64(&[4, 3, 5], &[0, 0, 0], &[vec![2, 3, 0]], 0, &[4]).unwrap();
        let fp = fractional_knapsack(&inst, &InterdictionVector::none(&inst)).unwrap();
        // zero-weight item first, then ratio 2 fully, then 2/3 of ratio 1
        assert_eq!(fp.y, vec![Rat::one(), Rat::ratio(2, 3), Rat::one()]);
        assert_eq!(fp.value, Rat::from(11));
        assert_eq!(fp.frac_support, vec![1]);
    }

    #[test]
    fn fractional_rejects_multi() {
        let inst = Instance::from_u64(&[1], &[1], &[vec![1], vec![1]], 0, &[1, 1]).unwrap();
        assert!(matches!(
            fractional_knapsack(&inst, &InterdictionVector::none(&inst)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn k_t1() {
        let inst = t1();
        let k = |bits: Vec<bool>| {
            integer_knapsack_k(&inst, &InterdictionVector::from_bits(&inst, bits))
                .unwrap()
                .value
        };
        assert_eq!(k(vec![true, false]), Rat::from(2));
        assert_eq!(k(vec![false, false]), Rat::from(3));
        assert_eq!(k(vec![true, true]), Rat::zero());
    }

    #[test]
    fn k_multi_dimensional() {
        // items (w1,w2): (2,1), (1,2), (1,1); caps (2,2)
        let inst = Instance::from_u64(
            &[4, 3, 2],
            &[1, 1, 1],
            &[vec![2, 1, 1], vec![1, 2, 1]],
            0,
            &[2, 2],
        )
        .unwrap();
        let ans = integer_knapsack_k(&inst, &InterdictionVector::none(&inst)).unwrap();
        // {0} = 4, {1,2} = 5 (weights (2,3) infeasible), {1}=3, {2}=2 → best 4
        assert_eq!(ans.value, Rat::from(4));
        assert_eq!(ans.chosen, vec![true, false, false]);
    }

    #[test]
    fn k_capacity_limit() {
        let inst = Instance::from_u64(
            &[1, 1],
            &[1, 1],
            &[vec![500, 500], vec![500, 500]],
            0,
            &[1000, 1000],
        )
        .unwrap();
        let err =
            integer_knapsack_k_limited(&inst, &InterdictionVector::none(&inst), 1000).unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }

    #[test]
    fn round_down_examples() {
        let p = big(&[3, 2]);
        let fp = FracPacking::from_y(vec![Rat::one(), Rat::ratio(1, 2)], &p);
        assert_eq!(fp.value, Rat::ratio(4, 1));
        let ans = round_down_packing(&fp, &p);
        assert_eq!(ans.chosen, vec![true, false]);
        assert_eq!(ans.value, Rat::from(3));
        assert!(ans.value >= &fp.value - &Rat::from(2));

        let integral = FracPacking::from_y(vec![Rat::one(), Rat::one()], &p);
        assert_eq!(round_down_packing(&integral, &p).value, Rat::from(5));

        let zero = FracPacking::from_y(vec![Rat::zero(), Rat::zero()], &p);
        assert_eq!(round_down_packing(&zero, &p).value, Rat::zero());
    }
}
