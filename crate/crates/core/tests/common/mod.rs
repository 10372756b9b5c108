#![allow(dead_code)]

use interdict_core::{preprocess, Instance, InterdictionVector};
use proptest::prelude::*;

/// Random instance with `n ≤ max_n` items, `t` constraints, data in `[0, vmax]`.
pub fn instance(max_n: usize, t: usize, vmax: u64) -> impl Strategy<Value = Instance> {
    (0..=max_n).prop_flat_map(move |n| {
        let half = (vmax * n as u64 / 2).max(1);
        (
            prop::collection::vec(0..=vmax, n),
            prop::collection::vec(0..=vmax, n),
            prop::collection::vec(prop::collection::vec(0..=vmax, n), t),
            0..=half,
            prop::collection::vec(0..=half, t),
        )
            .prop_map(|(p, c, w, b, cap)| Instance::from_u64(&p, &c, &w, b, &cap).unwrap())
    })
}

/// Same, already preprocessed.
pub fn reduced(max_n: usize, t: usize, vmax: u64) -> impl Strategy<Value = Instance> {
    instance(max_n, t, vmax).prop_map(|i| preprocess(&i).instance)
}

pub fn all_x(inst: &Instance) -> impl Iterator<Item = InterdictionVector> + '_ {
    (0..1u64 << inst.n()).map(move |m| InterdictionVector::from_mask(inst, m))
}

pub fn feasible_x(inst: &Instance) -> impl Iterator<Item = InterdictionVector> + '_ {
    all_x(inst).filter(move |x| x.is_feasible(inst))
}
