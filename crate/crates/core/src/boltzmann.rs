//! Boltzmann weights with values in `Z_m` and the enhanced invariant.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::Biquasile;
use crate::diagram::{MarkedGraphDiagram, MarkedSchema};
use crate::solver::{check_coloring, list_colorings_with, Coloring, SolverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("order must be positive")]
    ZeroOrder,
    #[error("triple ({}, {}, {}) outside 1..={order}", triple[0], triple[1], triple[2])]
    OutOfRange { triple: [usize; 3], order: usize },
    #[error("weights have different shapes")]
    ShapeMismatch,
    #[error("weight has order {weight}, algebra has order {algebra}")]
    OrderMismatch { weight: usize, algebra: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Coloring(#[from] SolverError),
}

/// A map `X³ → Z_m`, indexed by 0-based triples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoltzmannWeight {
    order: usize,
    modulus: u64,
    table: Vec<u64>,
}

impl BoltzmannWeight {
    pub fn zero(order: usize, modulus: u64) -> Result<Self, WeightError> {
        if modulus == 0 {
            return Err(WeightError::ZeroModulus);
        }
        if order == 0 {
            return Err(WeightError::ZeroOrder);
        }
        Ok(BoltzmannWeight {
            order,
            modulus,
            table: vec![0; order * order * order],
        })
    }

    /// `χ_(x,a,b)` for a 1-based triple.
    pub fn indicator(
        order: usize,
        modulus: u64,
        x: usize,
        a: usize,
        b: usize,
    ) -> Result<Self, WeightError> {
        let mut w = Self::zero(order, modulus)?;
        if [x, a, b].iter().any(|&v| v == 0 || v > order) {
            return Err(WeightError::OutOfRange {
                triple: [x, a, b],
                order,
            });
        }
        w.set(x - 1, a - 1, b - 1, 1);
        Ok(w)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    fn index(&self, x: usize, a: usize, b: usize) -> usize {
        (x * self.order + a) * self.order + b
    }

    /// 0-based lookup.
    #[inline]
    pub fn get(&self, x: usize, a: usize, b: usize) -> u64 {
        self.table[self.index(x, a, b)]
    }

    pub fn set(&mut self, x: usize, a: usize, b: usize, value: i64) {
        let i = self.index(x, a, b);
        self.table[i] = value.rem_euclid(self.modulus as i64) as u64;
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&v| v == 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, WeightError> {
        if self.order != other.order || self.modulus != other.modulus {
            return Err(WeightError::ShapeMismatch);
        }
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a + b) % self.modulus)
            .collect();
        Ok(BoltzmannWeight { table, ..*self })
    }

    /// Nonzero entries as 1-based `(x, a, b, value)`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, u64)> {
        let n = self.order;
        let mut out = Vec::new();
        for x in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let v = self.get(x, a, b);
                    if v != 0 {
                        out.push((x + 1, a + 1, b + 1, v));
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Add for &BoltzmannWeight {
    type Output = BoltzmannWeight;

    /// # Panics
    /// If the orders or moduli differ.
    fn add(self, other: &BoltzmannWeight) -> BoltzmannWeight {
        self.checked_add(other).expect("weights of the same shape")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightAxiom {
    /// `φ(x, a, a\(x\*x)) = 0`
    FirstLeft,
    /// `φ(x, (x\*x)/b, b) = 0`
    FirstRight,
    /// the six-term relation
    Second,
}

impl fmt::Display for WeightAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightAxiom::FirstLeft => "axiom (i), phi(x,a,a\\(x*x)) = 0",
            WeightAxiom::FirstRight => "axiom (i), phi(x,(x*x)/b,b) = 0",
            WeightAxiom::Second => "axiom (ii)",
        })
    }
}

/// A failed axiom instance; `witness` is 1-based (`[x,a,b]` or `[x,y,a,b]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightViolation {
    pub axiom: WeightAxiom,
    pub witness: Vec<usize>,
    pub lhs: u64,
    pub rhs: u64,
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|v| v.to_string()).collect();
        write!(
            f,
            "{} fails at ({}): {} != {}",
            self.axiom,
            w.join(","),
            self.lhs,
            self.rhs
        )
    }
}

/// Every violated axiom instance, in loop order.
pub fn check_weight(
    alg: &Biquasile,
    w: &BoltzmannWeight,
) -> Result<Vec<WeightViolation>, WeightError> {
    let n = alg.order();
    if w.order != n {
        return Err(WeightError::OrderMismatch {
            weight: w.order,
            algebra: n,
        });
    }
    let m = w.modulus;
    let mut out = Vec::new();
    for x in 0..n {
        let xx = alg.star_ldiv(x, x);
        for a in 0..n {
            let b = alg.dot_ldiv(a, xx);
            if w.get(x, a, b) != 0 {
                out.push(WeightViolation {
                    axiom: WeightAxiom::FirstLeft,
                    witness: vec![x + 1, a + 1, b + 1],
                    lhs: w.get(x, a, b),
                    rhs: 0,
                });
            }
        }
        for b in 0..n {
            let a = alg.dot_rdiv(xx, b);
            if w.get(x, a, b) != 0 {
                out.push(WeightViolation {
                    axiom: WeightAxiom::FirstRight,
                    witness: vec![x + 1, a + 1, b + 1],
                    lhs: w.get(x, a, b),
                    rhs: 0,
                });
            }
        }
    }
    let st = |p, q| alg.star(p, q);
    let dt = |p, q| alg.dot(p, q);
    for x in 0..n {
        for y in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let xab = st(x, dt(a, b));
                    let bxy = st(b, dt(x, y));
                    let lhs = w.get(x, a, b) + w.get(b, xab, y) + w.get(xab, a, st(b, dt(xab, y)));
                    let rhs = w.get(b, x, y) + w.get(x, a, bxy) + w.get(bxy, st(x, dt(a, bxy)), y);
                    if lhs % m != rhs % m {
                        out.push(WeightViolation {
                            axiom: WeightAxiom::Second,
                            witness: vec![x + 1, y + 1, a + 1, b + 1],
                            lhs: lhs % m,
                            rhs: rhs % m,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `Σ sign·φ(f(x), f(a), f(b))` over crossings; marked vertices contribute 0.
pub fn weight_of_coloring(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    w: &BoltzmannWeight,
    f: &Coloring,
) -> Result<u64, WeightError> {
    weight_of_coloring_with(d, alg, w, f, MarkedSchema::default())
}

pub fn weight_of_coloring_with(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    w: &BoltzmannWeight,
    f: &Coloring,
    schema: MarkedSchema,
) -> Result<u64, WeightError> {
    if w.order != alg.order() {
        return Err(WeightError::OrderMismatch {
            weight: w.order,
            algebra: alg.order(),
        });
    }
    check_coloring(d, alg, schema, f)?;
    Ok(raw_weight(d, w, f.values()))
}

fn raw_weight(d: &MarkedGraphDiagram, w: &BoltzmannWeight, f: &[usize]) -> u64 {
    let m = w.modulus as i64;
    let mut total = 0i64;
    for v in d.vertices() {
        let s = v.kind.sign();
        if s != 0 {
            total += s * w.get(f[v.x()], f[v.a()], f[v.b()]) as i64;
        }
    }
    total.rem_euclid(m) as u64
}

/// Multiset of coloring weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedInvariant {
    pub modulus: u64,
    pub multiset: BTreeMap<u64, u128>,
}

impl WeightedInvariant {
    /// Sum of multiplicities; equals the counting invariant.
    pub fn cardinality(&self) -> u128 {
        self.multiset.values().sum()
    }

    /// True when every coloring has weight 0.
    pub fn is_trivial(&self) -> bool {
        self.multiset.keys().all(|&k| k == 0)
    }

    pub fn is_submultiset_of(&self, other: &WeightedInvariant) -> bool {
        self.modulus == other.modulus
            && self
                .multiset
                .iter()
                .all(|(k, &c)| other.multiset.get(k).copied().unwrap_or(0) >= c)
    }

    /// `Σ c·u^w`, highest exponent first, e.g. `4u+4`.
    pub fn polynomial(&self) -> String {
        if self.multiset.is_empty() {
            return "0".to_string();
        }
        let terms: Vec<String> = self
            .multiset
            .iter()
            .rev()
            .map(|(&e, &c)| match (e, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}u"),
                (e, 1) => format!("u^{e}"),
                (e, c) => format!("{c}u^{e}"),
            })
            .collect();
        terms.join("+")
    }
}

impl fmt::Display for WeightedInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.polynomial())
    }
}

pub fn enhanced_invariant(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    w: &BoltzmannWeight,
) -> WeightedInvariant {
    enhanced_invariant_with(d, alg, w, MarkedSchema::default())
}

pub fn enhanced_invariant_with(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    w: &BoltzmannWeight,
    schema: MarkedSchema,
) -> WeightedInvariant {
    assert_eq!(w.order, alg.order(), "weight and algebra orders differ");
    let mut multiset = BTreeMap::new();
    for f in list_colorings_with(d, alg, schema) {
        *multiset.entry(raw_weight(d, w, f.values())).or_insert(0) += 1;
    }
    WeightedInvariant {
        modulus: w.modulus,
        multiset,
    }
}

fn perr(line: usize, message: impl Into<String>) -> WeightError {
    WeightError::Parse {
        line,
        message: message.into(),
    }
}

/// `order n modulus m`, then `x a b v` lines for nonzero entries.
pub fn parse_weight(text: &str) -> Result<BoltzmannWeight, WeightError> {
    let mut w: Option<BoltzmannWeight> = None;
    let mut last = 1;
    for (i, raw) in text.lines().enumerate() {
        let lno = i + 1;
        last = lno;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (&mut w, &toks[..]) {
            (None, &["order", n, "modulus", m]) => {
                let n: usize = n
                    .parse()
                    .map_err(|_| perr(lno, format!("bad order `{n}`")))?;
                let m: u64 = m
                    .parse()
                    .map_err(|_| perr(lno, format!("bad modulus `{m}`")))?;
                w = Some(BoltzmannWeight::zero(n, m).map_err(|e| perr(lno, e.to_string()))?);
            }
            (None, _) => return Err(perr(lno, "expected `order n modulus m`")),
            (Some(w), &[x, a, b, v]) => {
                let mut t = [0usize; 3];
                for (slot, s) in t.iter_mut().zip([x, a, b]) {
                    let e: usize = s
                        .parse()
                        .map_err(|_| perr(lno, format!("bad element `{s}`")))?;
                    if e == 0 || e > w.order {
                        return Err(perr(lno, format!("element {e} outside 1..={}", w.order)));
                    }
                    *slot = e - 1;
                }
                let v: i64 = v
                    .parse()
                    .map_err(|_| perr(lno, format!("bad value `{v}`")))?;
                w.set(t[0], t[1], t[2], v);
            }
            (Some(_), _) => return Err(perr(lno, "expected `x a b v`")),
        }
    }
    w.ok_or_else(|| perr(last, "missing `order n modulus m` header"))
}

pub fn serialize_weight(w: &BoltzmannWeight) -> String {
    let mut out = format!("order {} modulus {}\n", w.order, w.modulus);
    for (x, a, b, v) in w.nonzero() {
        out.push_str(&format!("{x} {a} {b} {v}\n"));
    }
    out
}
