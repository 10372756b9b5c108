//! LP-dual decomposition of the relaxed interdiction problem.
//!
//! For a fixed interdiction `x` the fractional follower value is
//! `F(x) = min_{α ≥ 0} α·C + F_α(x)` where
//! `F_α(x) = Σ_i (1 - x_i) max(0, p_i - w_i·α)`. The capacity duals `β` are
//! eliminated in closed form and never appear explicitly. Minimizing over `x`
//! for fixed `α` is a 0-1 knapsack over the reduced profits, and the outer
//! minimum over `α` only needs a finite candidate set.

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Instance, InterdictionVector};
use crate::linalg;
use crate::nominal::{fractional_knapsack, knapsack_max_budget};
use crate::rat::Rat;

/// A vector of capacity duals, one per constraint, componentwise `≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualPoint {
    pub alpha: Vec<Rat>,
}

impl DualPoint {
    pub fn new(alpha: Vec<Rat>) -> Result<Self> {
        if let Some(a) = alpha.iter().find(|a| a.is_negative()) {
            return Err(Error::InvalidParameter(format!("negative dual value {a}")));
        }
        Ok(DualPoint { alpha })
    }

    pub fn zero(t: usize) -> Self {
        DualPoint {
            alpha: vec![Rat::zero(); t],
        }
    }

    pub fn scalar(a: Rat) -> Self {
        DualPoint { alpha: vec![a] }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }
}

/// Sorted, deduplicated dual points that are guaranteed to contain a
/// minimizer of `α·C + F_α(x)` for every `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pub points: Vec<DualPoint>,
}

impl CandidateSet {
    fn from_points(mut points: Vec<DualPoint>) -> Self {
        points.sort();
        points.dedup();
        CandidateSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DualPoint> {
        self.points.iter()
    }
}

fn check_dim(inst: &Instance, a: &DualPoint) -> Result<()> {
    if a.dim() != inst.t() {
        return Err(Error::DimensionMismatch(format!(
            "dual point has {} components, instance has t = {}",
            a.dim(),
            inst.t()
        )));
    }
    Ok(())
}

/// `α·C`.
pub fn dual_offset(inst: &Instance, a: &DualPoint) -> Rat {
    a.alpha
        .iter()
        .zip(&inst.capacities)
        .map(|(al, c)| al * &Rat::from_uint(c))
        .sum()
}

/// `max(0, p_i - w_i·α)` for every item.
pub fn reduced_profits(inst: &Instance, a: &DualPoint) -> Vec<Rat> {
    (0..inst.n())
        .map(|i| {
            let used: Rat = inst
                .item_weights(i)
                .zip(&a.alpha)
                .filter(|(w, _)| **w != BigUint::default())
                .map(|(w, al)| &Rat::from_uint(w) * al)
                .sum();
            (Rat::from_uint(&inst.profits[i]) - used).clamp_nonneg()
        })
        .collect()
}

/// `F_α(x)`: reduced profit mass of the items `x` leaves available.
pub fn f_alpha(inst: &Instance, x: &InterdictionVector, a: &DualPoint) -> Result<Rat> {
    check_dim(inst, a)?;
    let reduced = reduced_profits(inst, a);
    Ok(x.survivors().map(|i| &reduced[i]).sum())
}

/// `{0} ∪ {p_i / w_i : w_i > 0}` for a single capacity constraint.
pub fn candidate_alphas_1d(inst: &Instance) -> Result<CandidateSet> {
    if inst.t() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "1-d candidate set needs t = 1, got t = {}",
            inst.t()
        )));
    }
    let mut points = vec![DualPoint::zero(1)];
    for (p, w) in inst.profits.iter().zip(&inst.weights[0]) {
        if *w != BigUint::default() {
            points.push(DualPoint::scalar(&Rat::from_uint(p) / &Rat::from_uint(w)));
        }
    }
    Ok(CandidateSet::from_points(points))
}

/// Every non-negative point where `t` linearly independent hyperplanes from
/// `{p_i = w_i·α} ∪ {α_j = 0}` meet, plus the origin.
pub fn candidate_alphas_multi(inst: &Instance) -> CandidateSet {
    let n = inst.n();
    let t = inst.t();
    // Hyperplane h < n is item h; h ≥ n is the coordinate plane α_{h-n} = 0.
    let plane = |h: usize| -> (Vec<Rat>, Rat) {
        if h < n {
            (
                inst.item_weights(h).map(Rat::from_uint).collect(),
                Rat::from_uint(&inst.profits[h]),
            )
        } else {
            let mut row = vec![Rat::zero(); t];
            row[h - n] = Rat::one();
            (row, Rat::zero())
        }
    };

    let mut points = vec![DualPoint::zero(t)];
    for subset in (0..n + t).combinations(t) {
        let (rows, rhs): (Vec<_>, Vec<_>) = subset.into_iter().map(plane).unzip();
        if let Some(sol) = linalg::solve(rows, rhs) {
            if sol.iter().all(|v| !v.is_negative()) {
                points.push(DualPoint { alpha: sol });
            }
        }
    }
    CandidateSet::from_points(points)
}

/// The candidate set appropriate for the instance's dimension.
pub fn candidate_alphas(inst: &Instance) -> CandidateSet {
    if inst.t() == 1 {
        candidate_alphas_1d(inst).expect("t = 1")
    } else {
        candidate_alphas_multi(inst)
    }
}

/// Exact `g(α) = α·C + min{F_α(x) : c·x ≤ B}` and an interdiction attaining
/// it. The minimizing `x` interdicts exactly the items a max-profit knapsack
/// over the reduced profits selects.
pub fn g_exact(inst: &Instance, a: &DualPoint) -> Result<(Rat, InterdictionVector)> {
    check_dim(inst, a)?;
    let reduced = reduced_profits(inst, a);
    let best = knapsack_max_budget(&reduced, &inst.costs, &inst.budget)?;
    let total: Rat = reduced.iter().sum();
    let value = dual_offset(inst, a) + total - best.value;
    Ok((value, InterdictionVector::from_bits(inst, best.chosen)))
}

/// Exact optimum of the relaxed interdiction problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactOptF {
    pub value: Rat,
    pub x: InterdictionVector,
    pub alpha: DualPoint,
    pub candidates: usize,
}

/// Pseudopolynomial exact `OPT_F`: the smallest `g(α)` over the candidate
/// set, ties going to the first candidate in sorted order.
pub fn opt_f_exact(inst: &Instance) -> Result<ExactOptF> {
    let cands = candidate_alphas(inst);
    let evals = cands
        .points
        .par_iter()
        .map(|a| g_exact(inst, a))
        .collect::<Result<Vec<_>>>()?;
    let (idx, (value, x)) = evals
        .into_iter()
        .enumerate()
        .min_by(|(i, (a, _)), (j, (b, _))| a.cmp(b).then(i.cmp(j)))
        .expect("candidate set always contains the origin");
    Ok(ExactOptF {
        value,
        x,
        alpha: cands.points[idx].clone(),
        candidates: cands.len(),
    })
}

/// Exact `F(x)`. Uses the greedy LP for one constraint, otherwise minimizes
/// the dual objective over the candidate set (which does not depend on `x`).
pub fn f_exact(inst: &Instance, x: &InterdictionVector) -> Result<Rat> {
    if inst.t() == 1 {
        Ok(fractional_knapsack(inst, x)?.value)
    } else {
        f_exact_with(inst, x, &candidate_alphas_multi(inst))
    }
}

/// `min_{α ∈ cands} α·C + F_α(x)`.
pub fn f_exact_with(inst: &Instance, x: &InterdictionVector, cands: &CandidateSet) -> Result<Rat> {
    cands
        .iter()
        .map(|a| Ok(dual_offset(inst, a) + f_alpha(inst, x, a)?))
        .reduce(|a: Result<Rat>, b| Ok(a?.min_of(b?)))
        .unwrap_or_else(|| Ok(Rat::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> Instance {
        Instance::from_u64(&[3, 2], &[1, 1], &[vec![2, 2]], 1, &[2]).unwrap()
    }

    fn t2() -> Instance {
        Instance::from_u64(&[4, 3], &[1, 1], &[vec![2, 1], vec![1, 2]], 1, &[2, 2]).unwrap()
    }

    fn pt(v: &[(i64, i64)]) -> DualPoint {
        DualPoint {
            alpha: v.iter().map(|&(a, b)| Rat::ratio(a, b)).collect(),
        }
    }

    #[test]
    fn f_alpha_examples() {
        let inst = t1();
        let none = InterdictionVector::none(&inst);
        assert_eq!(f_alpha(&inst, &none, &pt(&[(1, 1)])).unwrap(), Rat::one());
        assert_eq!(
            f_alpha(&inst, &none, &DualPoint::zero(1)).unwrap(),
            Rat::from(5)
        );
        let x = InterdictionVector::from_bits(&inst, vec![false, true]);
        assert_eq!(
            f_alpha(&inst, &x, &DualPoint::zero(1)).unwrap(),
            Rat::from(3)
        );
        assert_eq!(
            f_alpha(&inst, &none, &pt(&[(100, 1)])).unwrap(),
            Rat::zero()
        );

        let with_free = Instance::from_u64(&[3, 7], &[1, 1], &[vec![2, 0]], 0, &[2]).unwrap();
        let none = InterdictionVector::none(&with_free);
        assert_eq!(
            f_alpha(&with_free, &none, &pt(&[(1000, 1)])).unwrap(),
            Rat::from(7)
        );
        assert!(matches!(
            f_alpha(&inst, &InterdictionVector::none(&inst), &DualPoint::zero(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn candidates_1d() {
        assert_eq!(
            candidate_alphas_1d(&t1()).unwrap().points,
            vec![pt(&[(0, 1)]), pt(&[(1, 1)]), pt(&[(3, 2)])]
        );
        let free = Instance::from_u64(&[3, 4], &[1, 1], &[vec![0, 0]], 0, &[5]).unwrap();
        assert_eq!(
            candidate_alphas_1d(&free).unwrap().points,
            vec![pt(&[(0, 1)])]
        );
        let dup = Instance::from_u64(&[2, 4], &[1, 1], &[vec![1, 2]], 0, &[5]).unwrap();
        assert_eq!(
            candidate_alphas_1d(&dup).unwrap().points,
            vec![pt(&[(0, 1)]), pt(&[(2, 1)])]
        );
    }

    #[test]
    fn candidates_multi_t2() {
        let got = candidate_alphas_multi(&t2()).points;
        let mut want = vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(0, 1), (4, 1)]),
            pt(&[(0, 1), (3, 2)]),
            pt(&[(2, 1), (0, 1)]),
            pt(&[(3, 1), (0, 1)]),
            pt(&[(5, 3), (2, 3)]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn candidates_multi_agree_in_1d() {
        assert_eq!(
            candidate_alphas_multi(&t1()),
            candidate_alphas_1d(&t1()).unwrap()
        );
        let empty = Instance::from_u64(&[], &[], &[vec![], vec![]], 0, &[3, 3]).unwrap();
        assert_eq!(
            candidate_alphas_multi(&empty).points,
            vec![DualPoint::zero(2)]
        );
    }

    #[test]
    fn g_examples() {
        let inst = t1();
        let (v, x) = g_exact(&inst, &pt(&[(1, 1)])).unwrap();
        assert_eq!(v, Rat::from(2));
        assert_eq!(x.bits(), &[true, false]);
        let (v, x) = g_exact(&inst, &DualPoint::zero(1)).unwrap();
        assert_eq!(v, Rat::from(2));
        assert_eq!(x.bits(), &[true, false]);
        let (v, _) = g_exact(&inst, &pt(&[(3, 2)])).unwrap();
        assert_eq!(v, Rat::from(3));
    }

    #[test]
    fn opt_f_examples() {
        let res = opt_f_exact(&t1()).unwrap();
        assert_eq!(res.value, Rat::from(2));
        assert_eq!(res.x.bits(), &[true, false]);
        // α = 0 and α = 1 tie at 2; the first sorted candidate wins.
        assert_eq!(res.alpha, DualPoint::zero(1));

        let zero = Instance::from_u64(&[0, 0], &[1, 1], &[vec![1, 1]], 0, &[1]).unwrap();
        assert_eq!(opt_f_exact(&zero).unwrap().value, Rat::zero());

        let empty = Instance::from_u64(&[], &[], &[vec![]], 0, &[0]).unwrap();
        assert_eq!(opt_f_exact(&empty).unwrap().value, Rat::zero());
    }

    #[test]
    fn f_exact_examples() {
        let inst = t1();
        let x = InterdictionVector::from_bits(&inst, vec![true, false]);
        assert_eq!(f_exact(&inst, &x).unwrap(), Rat::from(2));
        assert_eq!(
            f_exact_with(&inst, &x, &candidate_alphas_1d(&inst).unwrap()).unwrap(),
            Rat::from(2)
        );
        assert_eq!(
            f_exact(&inst, &InterdictionVector::all(&inst)).unwrap(),
            Rat::zero()
        );

        // T2, nothing interdicted: y = (2/3, 2/3) gives 14/3.
        let inst = t2();
        assert_eq!(
            f_exact(&inst, &InterdictionVector::none(&inst)).unwrap(),
            Rat::ratio(14, 3)
        );
    }
}
