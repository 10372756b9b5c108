//! Brute-force ground truth for small instances.
//!
//! Nothing here shares code with the dual or rounding solvers: integer
//! follower values come from a subset-lattice sweep, fractional values from
//! the greedy rule (one constraint) or from enumerating LP vertices with
//! Cramer's rule (several constraints).

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, InterdictionVector};
use crate::nominal::{fractional_knapsack, FracPacking};
use crate::rat::Rat;

pub const DEFAULT_MAX_N: usize = 20;
pub const DEFAULT_LP_MAX_N: usize = 8;
pub const MAX_OPTIMAL_LIST: usize = 1_000_000;

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit || n >= 63 {
        return Err(Error::TooLarge {
            what: "oracle instance",
            size: n.to_string(),
            limit: limit.to_string(),
        });
    }
    Ok(())
}

/// Ground truth for one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    #[serde(serialize_with = "ser_uint")]
    pub opt_i: BigUint,
    pub opt_f: Rat,
    #[serde(serialize_with = "ser_uint")]
    pub p_star: BigUint,
    #[serde(serialize_with = "ser_bits")]
    pub optimal_x_list: Vec<InterdictionVector>,
}

fn ser_uint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(small) => s.serialize_u64(small),
        None => s.collect_str(v),
    }
}

fn ser_bits<S: serde::Serializer>(
    v: &[InterdictionVector],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(
        v.iter()
            .map(|x| x.bits().iter().map(|&b| u8::from(b)).collect::<Vec<_>>()),
    )
}

/// `K` for every set of available items: `best[mask]` is the largest profit
/// of a packable subset of `mask`.
fn follower_table(inst: &Instance) -> Vec<BigUint> {
    let n = inst.n();
    let size = 1usize << n;
    let mut load: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); inst.t()]; size];
    let mut profit = vec![BigUint::zero(); size];
    let mut best = vec![BigUint::zero(); size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let w: Vec<BigUint> = load[rest]
            .iter()
            .zip(inst.item_weights(low))
            .map(|(a, b)| a + b)
            .collect();
        profit[mask] = &profit[rest] + &inst.profits[low];
        let packable = w.iter().zip(&inst.capacities).all(|(a, c)| a <= c);
        best[mask] = if packable {
            profit[mask].clone()
        } else {
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &best[mask & !(1 << i)])
                .max()
                .cloned()
                .unwrap_or_default()
        };
        load[mask] = w;
    }
    best
}

/// Interdiction masks within budget, in increasing mask order.
fn feasible_masks(inst: &Instance) -> Vec<usize> {
    let size = 1usize << inst.n();
    let mut cost = vec![BigUint::zero(); size];
    let mut out = Vec::new();
    for mask in 0..size {
        if mask > 0 {
            let low = mask.trailing_zeros() as usize;
            cost[mask] = &cost[mask & (mask - 1)] + &inst.costs[low];
        }
        if cost[mask] <= inst.budget {
            out.push(mask);
        }
    }
    out
}

/// `OPT_I` and every interdiction attaining it.
pub fn brute_force_opt_i(
    inst: &Instance,
    limit: usize,
) -> Result<(BigUint, Vec<InterdictionVector>)> {
    check_size(inst.n(), limit)?;
    let full = (1usize << inst.n()) - 1;
    let best = follower_table(inst);
    let masks = feasible_masks(inst);
    let opt = masks
        .iter()
        .map(|&m| &best[full & !m])
        .min()
        .cloned()
        .expect("the empty interdiction is always feasible");
    let winners: Vec<usize> = masks
        .into_iter()
        .filter(|&m| best[full & !m] == opt)
        .collect();
    if winners.len() > MAX_OPTIMAL_LIST {
        return Err(Error::TooLarge {
            what: "optimal interdiction list",
            size: winners.len().to_string(),
            limit: MAX_OPTIMAL_LIST.to_string(),
        });
    }
    let list = winners
        .into_iter()
        .map(|m| InterdictionVector::from_mask(inst, m as u64))
        .collect();
    Ok((opt, list))
}

/// Integer follower value of one interdiction, by the same lattice sweep.
pub fn brute_force_k(inst: &Instance, x: &InterdictionVector, limit: usize) -> Result<BigUint> {
    check_size(inst.n(), limit)?;
    let full = (1usize << inst.n()) - 1;
    let mask = (0..inst.n())
        .filter(|&i| x.is_interdicted(i))
        .fold(0usize, |m, i| m | 1 << i);
    Ok(follower_table(inst)[full & !mask].clone())
}

/// Exact `F(x)` without any dual machinery.
pub fn lp_value(inst: &Instance, x: &InterdictionVector) -> Result<Rat> {
    if inst.t() == 1 {
        Ok(fractional_knapsack(inst, x)?.value)
    } else {
        Ok(vertex_enum_lp(inst, x, DEFAULT_LP_MAX_N.max(inst.n()))?.value)
    }
}

/// `OPT_F` by enumerating every feasible interdiction.
pub fn brute_force_opt_f(inst: &Instance, limit: usize) -> Result<(Rat, InterdictionVector)> {
    check_size(inst.n(), limit)?;
    let mut best: Option<(Rat, InterdictionVector)> = None;
    for mask in feasible_masks(inst) {
        let x = InterdictionVector::from_mask(inst, mask as u64);
        let v = lp_value(inst, &x)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, x));
        }
    }
    Ok(best.expect("the empty interdiction is always feasible"))
}

/// `p* = min over optimal x of the largest profit x leaves available`.
pub fn p_star(inst: &Instance, limit: usize) -> Result<BigUint> {
    let (_, optimal) = brute_force_opt_i(inst, limit)?;
    Ok(p_star_of(inst, &optimal))
}

fn p_star_of(inst: &Instance, optimal: &[InterdictionVector]) -> BigUint {
    optimal
        .iter()
        .map(|x| {
            x.survivors()
                .map(|i| &inst.profits[i])
                .max()
                .cloned()
                .unwrap_or_default()
        })
        .min()
        .unwrap_or_default()
}

/// All oracle quantities at once.
pub fn oracle_report(inst: &Instance, limit: usize) -> Result<OracleReport> {
    let (opt_i, optimal_x_list) = brute_force_opt_i(inst, limit)?;
    let (opt_f, _) = brute_force_opt_f(inst, limit)?;
    let p_star = p_star_of(inst, &optimal_x_list);
    Ok(OracleReport {
        opt_i,
        opt_f,
        p_star,
        optimal_x_list,
    })
}

fn det(m: &[Vec<Rat>]) -> Rat {
    match m.len() {
        0 => Rat::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        k => (0..k)
            .map(|col| {
                let minor: Vec<Vec<Rat>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &det(&minor);
                if col % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

/// Cramer's rule; `None` for a singular matrix.
fn cramer(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let d = det(m);
    if d.is_zero() {
        return None;
    }
    let k = m.len();
    Some(
        (0..k)
            .map(|col| {
                let replaced: Vec<Vec<Rat>> = m
                    .iter()
                    .zip(rhs)
                    .map(|(row, r)| {
                        let mut row = row.clone();
                        row[col] = r.clone();
                        row
                    })
                    .collect();
                det(&replaced) / &d
            })
            .collect(),
    )
}

/// Exact LP optimum `F(x)` by enumerating basic solutions: up to `t`
/// available coordinates are fractional, every other available coordinate is
/// 0 or 1, and the fractional ones are pinned by as many tight capacities.
pub fn vertex_enum_lp(
    inst: &Instance,
    x: &InterdictionVector,
    limit: usize,
) -> Result<FracPacking> {
    check_size(inst.n(), limit)?;
    let t = inst.t();
    if t > 3 {
        return Err(Error::TooLarge {
            what: "vertex enumeration dimension",
            size: t.to_string(),
            limit: "3".into(),
        });
    }
    let n = inst.n();
    let survivors: Vec<usize> = x.survivors().collect();
    let w: Vec<Vec<Rat>> = inst
        .weights
        .iter()
        .map(|row| row.iter().map(Rat::from_uint).collect())
        .collect();
    let cap: Vec<Rat> = inst.capacities.iter().map(Rat::from_uint).collect();
    let p: Vec<Rat> = inst.profits.iter().map(Rat::from_uint).collect();

    let mut best: Option<(Rat, Vec<Rat>)> = None;
    for k in 0..=t.min(survivors.len()) {
        for frac in survivors.iter().copied().combinations(k) {
            let fixed: Vec<usize> = survivors
                .iter()
                .copied()
                .filter(|i| !frac.contains(i))
                .collect();
            for rows in (0..t).combinations(k) {
                let m: Vec<Vec<Rat>> = rows
                    .iter()
                    .map(|&j| frac.iter().map(|&i| w[j][i].clone()).collect())
                    .collect();
                if det(&m).is_zero() {
                    continue;
                }
                for assign in 0u64..1 << fixed.len() {
                    let mut y = vec![Rat::zero(); n];
                    for (b, &i) in fixed.iter().enumerate() {
                        if assign >> b & 1 == 1 {
                            y[i] = Rat::one();
                        }
                    }
                    let rhs: Vec<Rat> = rows
                        .iter()
                        .map(|&j| {
                            let used: Rat = fixed.iter().map(|&i| &w[j][i] * &y[i]).sum();
                            &cap[j] - &used
                        })
                        .collect();
                    let Some(sol) = cramer(&m, &rhs) else {
                        continue;
                    };
                    if sol.iter().any(|v| v.is_negative() || *v > Rat::one()) {
                        continue;
                    }
                    for (&i, v) in frac.iter().zip(sol) {
                        y[i] = v;
                    }
                    let feasible = (0..t).all(|j| {
                        let used: Rat = (0..n).map(|i| &w[j][i] * &y[i]).sum();
                        used <= cap[j]
                    });
                    if !feasible {
                        continue;
                    }
                    let value: Rat = (0..n).map(|i| &p[i] * &y[i]).sum();
                    if best.as_ref().is_none_or(|(b, _)| value > *b) {
                        best = Some((value, y));
                    }
                }
            }
        }
    }
    // y = 0 is always feasible, and is reached with k = 0.
    let (_, y) = best.expect("zero packing is a vertex");
    Ok(FracPacking::from_y(y, &inst.profits))
}
