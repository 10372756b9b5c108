//! Instance model, JSON wire format, and preprocessing.

use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// A knapsack interdiction instance with `t` capacity constraints.
///
/// Weights are stored row-major: `weights[j][i]` is the weight of item `i`
/// in constraint `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub profits: Vec<BigUint>,
    pub costs: Vec<BigUint>,
    pub weights: Vec<Vec<BigUint>>,
    pub budget: BigUint,
    pub capacities: Vec<BigUint>,
}

impl Instance {
    /// Builds an instance, checking that every list has a consistent length.
    pub fn new(
        profits: Vec<BigUint>,
        costs: Vec<BigUint>,
        weights: Vec<Vec<BigUint>>,
        budget: BigUint,
        capacities: Vec<BigUint>,
    ) -> Result<Self> {
        let n = profits.len();
        let t = capacities.len();
        if t == 0 {
            return Err(schema("t", "at least one capacity constraint is required"));
        }
        if costs.len() != n {
            return Err(schema(
                "c",
                format!("expected {n} entries, got {}", costs.len()),
            ));
        }
        if weights.len() != t {
            return Err(schema(
                "w",
                format!("expected {t} rows, got {}", weights.len()),
            ));
        }
        if let Some((j, row)) = weights.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(schema(
                "w",
                format!("row {j} has {} entries, expected {n}", row.len()),
            ));
        }
        Ok(Instance {
            profits,
            costs,
            weights,
            budget,
            capacities,
        })
    }

    /// Small-integer constructor used heavily by tests and the generator.
    pub fn from_u64(
        profits: &[u64],
        costs: &[u64],
        weights: &[Vec<u64>],
        budget: u64,
        capacities: &[u64],
    ) -> Result<Self> {
        let big = |v: &[u64]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
        Instance::new(
            big(profits),
            big(costs),
            weights.iter().map(|r| big(r)).collect(),
            BigUint::from(budget),
            big(capacities),
        )
    }

    pub fn n(&self) -> usize {
        self.profits.len()
    }

    pub fn t(&self) -> usize {
        self.capacities.len()
    }

    /// Weight vector of item `i` across all constraints.
    pub fn item_weights(&self, i: usize) -> impl Iterator<Item = &BigUint> + '_ {
        self.weights.iter().map(move |row| &row[i])
    }

    pub fn total_profit(&self) -> BigUint {
        self.profits.iter().sum()
    }

    pub fn total_cost(&self) -> BigUint {
        self.costs.iter().sum()
    }

    fn fits(&self, i: usize) -> bool {
        self.item_weights(i)
            .zip(&self.capacities)
            .all(|(w, cap)| w <= cap)
    }

    /// Serializes to the canonical compact JSON form (keys in the order
    /// `n, t, p, c, w, B, C`, numbers above `u64::MAX` as decimal strings).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Wire::from(self)).expect("instance serialization is infallible")
    }
}

/// Parses an instance from its JSON wire form.
pub fn parse_instance(text: &[u8]) -> Result<Instance> {
    let value: Value =
        serde_json::from_slice(text).map_err(|e| Error::MalformedSyntax(e.to_string()))?;
    let Value::Object(obj) = value else {
        return Err(Error::MalformedSyntax(
            "top level must be a JSON object".into(),
        ));
    };
    const KEYS: [&str; 7] = ["n", "t", "p", "c", "w", "B", "C"];
    if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(schema(k, "unknown key"));
    }

    let n = field(&obj, "n").and_then(|v| as_usize(v, "n"))?;
    let t = field(&obj, "t").and_then(|v| as_usize(v, "t"))?;
    if t == 0 {
        return Err(schema("t", "must be at least 1"));
    }
    let profits = uint_list(field(&obj, "p")?, "p", n)?;
    let costs = uint_list(field(&obj, "c")?, "c", n)?;
    let Value::Array(rows) = field(&obj, "w")? else {
        return Err(schema("w", "expected an array of arrays"));
    };
    if rows.len() != t {
        return Err(schema(
            "w",
            format!("expected {t} rows, got {}", rows.len()),
        ));
    }
    let weights = rows
        .iter()
        .map(|row| uint_list(row, "w", n))
        .collect::<Result<Vec<_>>>()?;
    let budget = uint(field(&obj, "B")?, "B")?;
    let capacities = uint_list(field(&obj, "C")?, "C", t)?;
    Instance::new(profits, costs, weights, budget, capacities)
}

fn schema(field: &str, reason: impl Into<String>) -> Error {
    Error::SchemaViolation {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(key, "missing"))
}

fn uint(v: &Value, name: &str) -> Result<BigUint> {
    let text = match v {
        Value::Number(num) => num.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(schema(name, "expected a non-negative integer")),
    };
    let (neg, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(schema(name, format!("not an integer: {text}")));
    }
    let value = BigUint::from_str(digits).map_err(|_| schema(name, "not an integer"))?;
    if neg && !value.is_zero() {
        return Err(Error::NegativeValue { field: name.into() });
    }
    Ok(value)
}

fn as_usize(v: &Value, name: &str) -> Result<usize> {
    uint(v, name)?
        .to_usize()
        .ok_or_else(|| schema(name, "too large"))
}

fn uint_list(v: &Value, name: &str, len: usize) -> Result<Vec<BigUint>> {
    let Value::Array(items) = v else {
        return Err(schema(name, "expected an array"));
    };
    if items.len() != len {
        return Err(schema(
            name,
            format!("expected {len} entries, got {}", items.len()),
        ));
    }
    items.iter().map(|x| uint(x, name)).collect()
}

/// Integer that serializes as a JSON number when it fits `u64`, otherwise
/// as a decimal string.
struct WireUint<'a>(&'a BigUint);

impl Serialize for WireUint<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.collect_str(self.0),
        }
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Wire<'a> {
    n: usize,
    t: usize,
    p: Vec<WireUint<'a>>,
    c: Vec<WireUint<'a>>,
    w: Vec<Vec<WireUint<'a>>>,
    B: WireUint<'a>,
    C: Vec<WireUint<'a>>,
}

impl<'a> From<&'a Instance> for Wire<'a> {
    fn from(inst: &'a Instance) -> Self {
        let wrap = |v: &'a [BigUint]| v.iter().map(WireUint).collect::<Vec<_>>();
        Wire {
            n: inst.n(),
            t: inst.t(),
            p: wrap(&inst.profits),
            c: wrap(&inst.costs),
            w: inst.weights.iter().map(|r| wrap(r)).collect(),
            B: WireUint(&inst.budget),
            C: wrap(&inst.capacities),
        }
    }
}

/// An interdiction decision: `bits[i]` means item `i` is deleted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InterdictionVector {
    bits: Vec<bool>,
    cost: BigUint,
}

impl InterdictionVector {
    pub fn from_bits(inst: &Instance, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), inst.n(), "interdiction vector length");
        let cost = bits
            .iter()
            .zip(&inst.costs)
            .filter(|(b, _)| **b)
            .map(|(_, c)| c)
            .sum();
        InterdictionVector { bits, cost }
    }

    /// Nothing interdicted.
    pub fn none(inst: &Instance) -> Self {
        InterdictionVector::from_bits(inst, vec![false; inst.n()])
    }

    /// Everything interdicted.
    pub fn all(inst: &Instance) -> Self {
        InterdictionVector::from_bits(inst, vec![true; inst.n()])
    }

    /// Decodes the low `n` bits of `mask` (bit `i` ↔ item `i`).
    pub fn from_mask(inst: &Instance, mask: u64) -> Self {
        let bits = (0..inst.n()).map(|i| mask >> i & 1 == 1).collect();
        InterdictionVector::from_bits(inst, bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_interdicted(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn cost(&self) -> &BigUint {
        &self.cost
    }

    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.cost <= inst.budget
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Indices of items that are still available to the follower.
    pub fn survivors(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| !**b)
            .map(|(i, _)| i)
    }
}

/// A preprocessed instance: every item that cannot be packed alone has been
/// deleted. `kept[r]` is the original index of reduced item `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preprocessed {
    pub instance: Instance,
    pub kept: Vec<usize>,
    pub original_n: usize,
}

impl Preprocessed {
    /// Original index → reduced index, `None` for deleted items.
    pub fn index_map(&self) -> Vec<Option<usize>> {
        let mut map = vec![None; self.original_n];
        for (r, &o) in self.kept.iter().enumerate() {
            map[o] = Some(r);
        }
        map
    }

    /// Lifts a reduced-instance interdiction to original indices. Deleted
    /// items are never interdicted.
    pub fn lift(&self, original: &Instance, x: &InterdictionVector) -> InterdictionVector {
        let mut bits = vec![false; self.original_n];
        for (r, &o) in self.kept.iter().enumerate() {
            bits[o] = x.is_interdicted(r);
        }
        InterdictionVector::from_bits(original, bits)
    }

    /// Restricts an original-index interdiction to the reduced instance.
    pub fn restrict(&self, x: &InterdictionVector) -> InterdictionVector {
        let bits = self.kept.iter().map(|&o| x.is_interdicted(o)).collect();
        InterdictionVector::from_bits(&self.instance, bits)
    }
}

/// Deletes every item whose weight exceeds the capacity in some constraint.
pub fn preprocess(inst: &Instance) -> Preprocessed {
    let kept: Vec<usize> = (0..inst.n()).filter(|&i| inst.fits(i)).collect();
    let pick = |v: &[BigUint]| kept.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
    let instance = Instance {
        profits: pick(&inst.profits),
        costs: pick(&inst.costs),
        weights: inst.weights.iter().map(|row| pick(row)).collect(),
        budget: inst.budget.clone(),
        capacities: inst.capacities.clone(),
    };
    Preprocessed {
        instance,
        kept,
        original_n: inst.n(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: &str = r#"{"n":2,"t":1,"p":[3,2],"c":[1,1],"w":[[2,2]],"B":1,"C":[2]}"#;

    #[test]
    fn parses_t1() {
        let inst = parse_instance(T1.as_bytes()).unwrap();
        assert_eq!(
            inst,
            Instance::from_u64(&[3, 2], &[1, 1], &[vec![2, 2]], 1, &[2]).unwrap()
        );
        assert_eq!(inst.to_json(), T1);
    }

    #[test]
    fn field_order_irrelevant() {
        let text = r#"{"C":[2],"B":1,"w":[[2,2]],"c":[1,1],"p":[3,2],"t":1,"n":2}"#;
        assert_eq!(
            parse_instance(text.as_bytes()).unwrap(),
            parse_instance(T1.as_bytes()).unwrap()
        );
    }

    #[test]
    fn empty_instance_is_valid() {
        let inst =
            parse_instance(br#"{"n":0,"t":1,"p":[],"c":[],"w":[[]],"B":0,"C":[0]}"#).unwrap();
        assert_eq!(inst.n(), 0);
        assert_eq!(inst.t(), 1);
    }

    #[test]
    fn rejects_negative() {
        let err = parse_instance(br#"{"n":1,"t":1,"p":[-1],"c":[0],"w":[[0]],"B":0,"C":[0]}"#)
            .unwrap_err();
        assert_eq!(err, Error::NegativeValue { field: "p".into() });
    }

    #[test]
    fn rejects_bad_shapes() {
        let cases: &[(&str, &str)] = &[
            (
                r#"{"n":2,"t":1,"p":[3],"c":[1,1],"w":[[2,2]],"B":1,"C":[2]}"#,
                "p",
            ),
            (
                r#"{"n":2,"t":1,"p":[3,2],"c":[1,1],"w":[[2]],"B":1,"C":[2]}"#,
                "w",
            ),
            (
                r#"{"n":2,"t":2,"p":[3,2],"c":[1,1],"w":[[2,2]],"B":1,"C":[2]}"#,
                "w",
            ),
            (
                r#"{"n":2,"t":1,"p":[3,2],"c":[1,1],"w":[[2,2]],"C":[2]}"#,
                "B",
            ),
            (
                r#"{"n":2,"t":1,"p":[3,2],"c":[1,1],"w":[[2,2]],"B":1,"C":[2],"x":0}"#,
                "x",
            ),
            (
                r#"{"n":2,"t":1,"p":[3,2.5],"c":[1,1],"w":[[2,2]],"B":1,"C":[2]}"#,
                "p",
            ),
            (r#"{"n":0,"t":0,"p":[],"c":[],"w":[],"B":1,"C":[]}"#, "t"),
        ];
        for (text, want) in cases {
            match parse_instance(text.as_bytes()) {
                Err(Error::SchemaViolation { field, .. }) => assert_eq!(&field, want, "{text}"),
                other => panic!("{text}: unexpected {other:?}"),
            }
        }
        assert!(matches!(
            parse_instance(b"{not json"),
            Err(Error::MalformedSyntax(_))
        ));
        assert!(matches!(
            parse_instance(b"[1]"),
            Err(Error::MalformedSyntax(_))
        ));
    }

    #[test]
    fn big_values_round_trip() {
        let text = r#"{"n":1,"t":1,"p":["123456789012345678901234567890"],"c":[18446744073709551616],"w":[[1]],"B":"5","C":[1]}"#;
        let inst = parse_instance(text.as_bytes()).unwrap();
        assert_eq!(
            inst.profits[0].to_string(),
            "123456789012345678901234567890"
        );
        assert_eq!(inst.costs[0].to_string(), "18446744073709551616");
        let again = parse_instance(inst.to_json().as_bytes()).unwrap();
        assert_eq!(again, inst);
        assert!(inst.to_json().contains(r#""c":["18446744073709551616"]"#));
    }

    #[test]
    fn preprocess_removes_oversized() {
        let inst = Instance::from_u64(&[1, 1], &[1, 1], &[vec![2, 5]], 0, &[2]).unwrap();
        let pre = preprocess(&inst);
        assert_eq!(pre.instance.n(), 1);
        assert_eq!(pre.kept, vec![0]);
        assert_eq!(pre.index_map(), vec![Some(0), None]);

        let t1 = parse_instance(T1.as_bytes()).unwrap();
        assert_eq!(preprocess(&t1).instance, t1);

        let multi =
            Instance::from_u64(&[1, 1], &[1, 1], &[vec![1, 1], vec![9, 2]], 0, &[2, 2]).unwrap();
        assert_eq!(preprocess(&multi).kept, vec![1]);
    }

    #[test]
    fn lift_and_restrict() {
        let inst = Instance::from_u64(&[1, 2, 3], &[1, 2, 3], &[vec![1, 9, 1]], 9, &[2]).unwrap();
        let pre = preprocess(&inst);
        let x = InterdictionVector::from_bits(&pre.instance, vec![false, true]);
        let lifted = pre.lift(&inst, &x);
        assert_eq!(lifted.bits(), &[false, false, true]);
        assert_eq!(lifted.cost(), &BigUint::from(3u32));
        assert_eq!(pre.restrict(&lifted), x);
    }
}
