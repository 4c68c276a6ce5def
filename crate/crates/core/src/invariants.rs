//! Batch evaluation, comparison and cobordism checks.

use std::fmt;

use rayon::prelude::*;

use crate::algebra::Biquasile;
use crate::boltzmann::{enhanced_invariant_with, BoltzmannWeight, WeightedInvariant};
use crate::diagram::{resolve, MarkedGraphDiagram, MarkedSchema, Sign};
use crate::solver::{build_linear_system, count_colorings_with, count_solutions_linear};

/// A biquasile with a display name.
#[derive(Debug, Clone)]
pub struct NamedAlgebra {
    pub name: String,
    pub algebra: Biquasile,
}

impl NamedAlgebra {
    pub fn new(name: impl Into<String>, algebra: Biquasile) -> Self {
        NamedAlgebra {
            name: name.into(),
            algebra,
        }
    }
}

/// A Boltzmann weight together with the biquasile it lives on.
#[derive(Debug, Clone)]
pub struct NamedWeight {
    pub name: String,
    pub algebra: Biquasile,
    pub weight: BoltzmannWeight,
}

pub fn counting_invariant(d: &MarkedGraphDiagram, alg: &Biquasile) -> u128 {
    counting_invariant_with(d, alg, MarkedSchema::default())
}

/// Counts colorings, using Smith normal form when `alg` carries Alexander
/// parameters and backtracking otherwise.
pub fn counting_invariant_with(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    schema: MarkedSchema,
) -> u128 {
    match alg.alexander_params() {
        Some(p) => count_solutions_linear(&build_linear_system(d, p, schema)),
        None => count_colorings_with(d, alg, schema),
    }
}

fn label(d: &MarkedGraphDiagram, i: usize) -> String {
    d.name()
        .map(str::to_string)
        .unwrap_or_else(|| format!("d{}", i + 1))
}

/// Counts indexed `[algebra][diagram]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTable {
    pub diagrams: Vec<String>,
    pub algebras: Vec<String>,
    pub values: Vec<Vec<u128>>,
}

impl InvariantTable {
    pub fn row(&self, algebra: &str) -> Option<&[u128]> {
        let i = self.algebras.iter().position(|a| a == algebra)?;
        Some(&self.values[i])
    }

    pub fn get(&self, algebra: &str, diagram: &str) -> Option<u128> {
        let j = self.diagrams.iter().position(|d| d == diagram)?;
        self.row(algebra).map(|r| r[j])
    }

    /// Aligned text, one row per algebra.
    pub fn render(&self) -> String {
        let first = self.algebras.iter().map(|a| a.len()).max().unwrap_or(0);
        let widths: Vec<usize> = self
            .diagrams
            .iter()
            .enumerate()
            .map(|(j, d)| {
                self.values
                    .iter()
                    .map(|r| r[j].to_string().len())
                    .chain([d.len()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        let mut out = format!("{:first$}", "");
        for (d, w) in self.diagrams.iter().zip(&widths) {
            out.push_str(&format!("  {d:>w$}"));
        }
        out.push('\n');
        for (a, row) in self.algebras.iter().zip(&self.values) {
            out.push_str(&format!("{a:first$}"));
            for (v, w) in row.iter().zip(&widths) {
                out.push_str(&format!("  {v:>w$}"));
            }
            out.push('\n');
        }
        out
    }

    /// `diagram algebra count` lines.
    pub fn render_lines(&self) -> String {
        let mut out = String::new();
        for (a, row) in self.algebras.iter().zip(&self.values) {
            for (d, v) in self.diagrams.iter().zip(row) {
                out.push_str(&format!("{d} {a} {v}\n"));
            }
        }
        out
    }
}

impl fmt::Display for InvariantTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn invariant_table(
    diagrams: &[MarkedGraphDiagram],
    algebras: &[NamedAlgebra],
) -> InvariantTable {
    invariant_table_with(diagrams, algebras, MarkedSchema::default())
}

/// Cells are computed in parallel and assembled in input order.
pub fn invariant_table_with(
    diagrams: &[MarkedGraphDiagram],
    algebras: &[NamedAlgebra],
    schema: MarkedSchema,
) -> InvariantTable {
    let cells: Vec<(usize, usize)> = (0..algebras.len())
        .flat_map(|i| (0..diagrams.len()).map(move |j| (i, j)))
        .collect();
    let counts: Vec<u128> = cells
        .par_iter()
        .map(|&(i, j)| counting_invariant_with(&diagrams[j], &algebras[i].algebra, schema))
        .collect();
    InvariantTable {
        diagrams: diagrams
            .iter()
            .enumerate()
            .map(|(i, d)| label(d, i))
            .collect(),
        algebras: algebras.iter().map(|a| a.name.clone()).collect(),
        values: counts
            .chunks(diagrams.len().max(1))
            .map(|c| c.to_vec())
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Count {
        algebra: String,
        left: u128,
        right: u128,
    },
    Enhanced {
        weight: String,
        left: WeightedInvariant,
        right: WeightedInvariant,
    },
}

impl Evidence {
    pub fn differs(&self) -> bool {
        match self {
            Evidence::Count { left, right, .. } => left != right,
            Evidence::Enhanced { left, right, .. } => left != right,
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.differs() { "differs" } else { "equal" };
        match self {
            Evidence::Count {
                algebra,
                left,
                right,
            } => {
                write!(f, "{algebra}: {left} vs {right} ({mark})")
            }
            Evidence::Enhanced {
                weight,
                left,
                right,
            } => {
                write!(f, "{weight}: {left} vs {right} ({mark})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub distinguished: bool,
    pub evidence: Vec<Evidence>,
}

impl Verdict {
    /// Counts in algebra order, for each side.
    pub fn counts(&self) -> (Vec<u128>, Vec<u128>) {
        self.evidence
            .iter()
            .filter_map(|e| match e {
                Evidence::Count { left, right, .. } => Some((*left, *right)),
                _ => None,
            })
            .unzip()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}",
            if self.distinguished {
                "distinguished"
            } else {
                "not distinguished"
            }
        )?;
        for e in &self.evidence {
            writeln!(f, "  {e}")?;
        }
        Ok(())
    }
}

pub fn compare(
    d1: &MarkedGraphDiagram,
    d2: &MarkedGraphDiagram,
    algebras: &[NamedAlgebra],
    weights: &[NamedWeight],
) -> Verdict {
    compare_with(d1, d2, algebras, weights, MarkedSchema::default())
}

pub fn compare_with(
    d1: &MarkedGraphDiagram,
    d2: &MarkedGraphDiagram,
    algebras: &[NamedAlgebra],
    weights: &[NamedWeight],
    schema: MarkedSchema,
) -> Verdict {
    let mut evidence: Vec<Evidence> = algebras
        .iter()
        .map(|a| Evidence::Count {
            algebra: a.name.clone(),
            left: counting_invariant_with(d1, &a.algebra, schema),
            right: counting_invariant_with(d2, &a.algebra, schema),
        })
        .collect();
    evidence.extend(weights.iter().map(|w| Evidence::Enhanced {
        weight: w.name.clone(),
        left: enhanced_invariant_with(d1, &w.algebra, &w.weight, schema),
        right: enhanced_invariant_with(d2, &w.algebra, &w.weight, schema),
    }));
    Verdict {
        distinguished: evidence.iter().any(Evidence::differs),
        evidence,
    }
}

/// Whether the enhanced multiset of `d` sits inside those of both resolutions.
pub fn cobordism_inclusion_check(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    w: &BoltzmannWeight,
) -> bool {
    cobordism_inclusion_check_with(d, alg, w, MarkedSchema::default())
}

pub fn cobordism_inclusion_check_with(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    w: &BoltzmannWeight,
    schema: MarkedSchema,
) -> bool {
    let own = enhanced_invariant_with(d, alg, w, schema);
    [Sign::Positive, Sign::Negative].iter().all(|&s| {
        let r = resolve(d, s);
        own.is_submultiset_of(&enhanced_invariant_with(&r, alg, w, schema))
    })
}
