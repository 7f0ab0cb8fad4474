//! Fixed correspondence tables between partitions `⟨J⟩` of `{1..6}` and theta characteristics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::freitag::EvChar;
use super::genus1::Char1;
use crate::error::{Error, Result};

/// A partition `⟨J⟩ = {J, J^c}` of `{1..6}` into two triples, stored by the triple containing 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    j: [u8; 3],
}

impl Partition {
    /// Canonicalizes either side of the partition.
    pub fn new(mut j: [u8; 3]) -> Result<Self> {
        j.sort_unstable();
        if j.iter().any(|x| !(1..=6).contains(x)) || j[0] == j[1] || j[1] == j[2] {
            return Err(Error::InvalidArgument(format!("{j:?} is not a 3-subset of {{1..6}}")));
        }
        if j[0] != 1 {
            let c = complement(j);
            return Ok(Partition { j: c });
        }
        Ok(Partition { j })
    }

    pub fn j(&self) -> [u8; 3] {
        self.j
    }

    pub fn complement(&self) -> [u8; 3] {
        complement(self.j)
    }

    /// The ten partitions in lexicographic order of `J ∋ 1`.
    pub fn all() -> Vec<Partition> {
        let mut v = Vec::new();
        for b in 2..=6u8 {
            for c in b + 1..=6 {
                v.push(Partition { j: [1, b, c] });
            }
        }
        v
    }

    /// `⟨123/456⟩`, the split excluded from the product-type worked examples.
    pub fn degenerate() -> Partition {
        Partition { j: [1, 2, 3] }
    }

    /// The nine partitions other than `⟨123/456⟩`.
    pub fn admissible() -> Vec<Partition> {
        Self::all().into_iter().filter(|p| *p != Self::degenerate()).collect()
    }
}

fn complement(j: [u8; 3]) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut k = 0;
    for x in 1..=6u8 {
        if !j.contains(&x) {
            out[k] = x;
            k += 1;
        }
    }
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.complement();
        write!(f, "{}{}{}/{}{}{}", self.j[0], self.j[1], self.j[2], c[0], c[1], c[2])
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `135/246`, `135` or `246`.
    fn from_str(s: &str) -> Result<Self> {
        let side = s.split('/').next().unwrap_or_default().trim();
        let digits: Vec<u8> = side.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
        let j: [u8; 3] = digits
            .try_into()
            .map_err(|_| Error::InvalidArgument(format!("cannot parse partition {s:?}")))?;
        let p = Partition::new(j)?;
        if let Some(other) = s.split('/').nth(1) {
            let mut o: Vec<u8> = other.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
            o.sort_unstable();
            let mut full = [p.j.to_vec(), p.complement().to_vec()];
            full.iter_mut().for_each(|x| x.sort_unstable());
            if !full.contains(&o) {
                return Err(Error::InvalidArgument(format!("{s:?} is not a partition")));
            }
        }
        Ok(p)
    }
}

fn part(s: &str) -> Partition {
    s.parse().expect("table literal")
}

/// `Ev` class attached to each partition.
pub fn ev_table() -> Vec<(EvChar, Partition)> {
    let rows: [([u8; 2], [u8; 2], &str); 10] = [
        ([0, 0], [0, 0], "135/246"),
        ([1, 0], [0, 0], "146/235"),
        ([0, 1], [0, 0], "136/245"),
        ([0, 0], [1, 0], "125/346"),
        ([0, 0], [0, 1], "134/256"),
        ([1, 1], [0, 0], "145/236"),
        ([1, 0], [0, 1], "156/234"),
        ([0, 0], [1, 1], "124/356"),
        ([0, 1], [1, 0], "126/345"),
        ([1, 1], [1, 1], "123/456"),
    ];
    rows.iter().map(|(a, b, p)| (EvChar::new(*a, *b).expect("table literal"), part(p))).collect()
}

/// Half periods `((a1 + a2τ1)/2, (b1 + b2τ2)/2)` whose translation composed with
/// `(-1) × id` gives the involution of each admissible partition.
pub fn half_period_table() -> Vec<([u8; 2], [u8; 2], Partition)> {
    let rows: [([u8; 2], [u8; 2], &str); 9] = [
        ([1, 0], [1, 0], "135/246"),
        ([1, 0], [0, 1], "134/256"),
        ([1, 0], [1, 1], "136/245"),
        ([0, 1], [1, 0], "146/235"),
        ([0, 1], [0, 1], "156/234"),
        ([0, 1], [1, 1], "145/236"),
        ([1, 1], [1, 0], "125/346"),
        ([1, 1], [0, 1], "124/356"),
        ([1, 1], [1, 1], "126/345"),
    ];
    rows.iter().map(|(a, b, p)| (*a, *b, part(p))).collect()
}

/// `(ε, δ)` with `Δ²·(∫ 2π⁻² ω)⁴ = θ_ε(τ1)⁸θ_δ(τ2)⁸`.
pub fn eps_delta_table() -> Vec<(Char1, Char1, Partition)> {
    use Char1::{Three as T3, Two as T2, Zero as T0};
    let rows = [
        (T2, T2, "135/246"),
        (T2, T0, "134/256"),
        (T2, T3, "136/245"),
        (T0, T2, "146/235"),
        (T0, T0, "156/234"),
        (T0, T3, "145/236"),
        (T3, T2, "125/346"),
        (T3, T0, "124/356"),
        (T3, T3, "126/345"),
    ];
    rows.iter().map(|(e, d, p)| (*e, *d, part(p))).collect()
}

/// One factor of a minor-table entry: `1`, `λ²` or `(λ−1)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaFactor {
    One,
    LambdaSq,
    LambdaMinusOneSq,
}

impl LambdaFactor {
    /// Genus-1 theta with `factor = θ⁸/θ3⁸`.
    pub fn theta(self) -> Char1 {
        match self {
            LambdaFactor::One => Char1::Three,
            LambdaFactor::LambdaSq => Char1::Two,
            LambdaFactor::LambdaMinusOneSq => Char1::Zero,
        }
    }
}

/// `Δ²_{⟨J⟩}` for `M(λ1, λ2)` as a product `f(λ1)·g(λ2)`.
pub fn minor_table() -> Vec<(Partition, LambdaFactor, LambdaFactor)> {
    use LambdaFactor::{LambdaMinusOneSq as Lm, LambdaSq as L, One as O};
    let rows = [
        ("124/356", O, Lm),
        ("125/346", O, L),
        ("126/345", O, O),
        ("134/256", L, Lm),
        ("135/246", L, L),
        ("136/245", L, O),
        ("145/236", Lm, O),
        ("146/235", Lm, L),
        ("156/234", Lm, Lm),
    ];
    rows.iter().map(|(p, f, g)| (part(p), *f, *g)).collect()
}

/// All tables as one JSON document.
pub fn tables_json() -> Value {
    json!({
        "ev": ev_table().iter().map(|(e, p)| json!({"partition": p.to_string(), "a": e.a, "b": e.b})).collect::<Vec<_>>(),
        "half_periods": half_period_table().iter().map(|(a, b, p)| json!({"partition": p.to_string(), "a": a, "b": b})).collect::<Vec<_>>(),
        "eps_delta": eps_delta_table().iter().map(|(e, d, p)| json!({"partition": p.to_string(), "eps": e.kind(), "delta": d.kind()})).collect::<Vec<_>>(),
        "minors": minor_table().iter().map(|(p, f, g)| json!({"partition": p.to_string(), "lambda1": f, "lambda2": g})).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_canonicalize() {
        assert_eq!(Partition::new([2, 4, 6]).unwrap().to_string(), "135/246");
        assert_eq!("246".parse::<Partition>().unwrap(), "135/246".parse().unwrap());
        assert_eq!(Partition::all().len(), 10);
        assert!("12/3456".parse::<Partition>().is_err());
    }

    #[test]
    fn ev_table_is_a_bijection() {
        let t = ev_table();
        let mut evs: Vec<_> = t.iter().map(|x| x.0).collect();
        let mut ps: Vec<_> = t.iter().map(|x| x.1).collect();
        evs.sort();
        ps.sort();
        assert_eq!(evs, EvChar::all());
        assert_eq!(ps, Partition::all());
    }

    #[test]
    fn minor_and_eps_delta_tables_agree() {
        for (p, f, g) in minor_table() {
            let row = eps_delta_table().into_iter().find(|r| r.2 == p).unwrap();
            assert_eq!((f.theta(), g.theta()), (row.0, row.1), "{p}");
        }
    }
}
