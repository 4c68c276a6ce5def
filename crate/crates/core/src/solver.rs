//! Counting and listing colorings.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlexanderParams, Biquasile};
use crate::diagram::{constraints, Equation, MarkedGraphDiagram, MarkedSchema, Relation};
use crate::dsu::UnionFind;

pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("oracle needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("coloring has {found} entries, diagram has {expected} regions")]
    WrongLength { expected: usize, found: usize },
    #[error("coloring violates the equation at vertex {vertex}")]
    InvalidColoring { vertex: usize },
}

/// A total assignment of 0-based elements to regions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(pub Vec<usize>);

impl Coloring {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// 1-based labels.
    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Checks a coloring against every equation of the diagram.
pub fn check_coloring(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    schema: MarkedSchema,
    f: &Coloring,
) -> Result<(), SolverError> {
    if f.0.len() != d.region_count() {
        return Err(SolverError::WrongLength {
            expected: d.region_count(),
            found: f.0.len(),
        });
    }
    match constraints(d, schema).iter().find(|e| !e.holds(alg, &f.0)) {
        Some(e) => Err(SolverError::InvalidColoring {
            vertex: e.vertex + 1,
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    X,
    A,
    B,
    Y,
}

#[derive(Debug, Clone)]
enum Step {
    Branch(usize),
    Derive { var: usize, cons: usize, slot: Slot },
}

/// Number of classes forced by propagation once `v` is bound.
fn propagation_gain(cons: &[[usize; 4]], bound: &[bool], done: &[bool], v: usize) -> usize {
    let mut bound = bound.to_vec();
    let mut done = done.to_vec();
    bound[v] = true;
    let mut gained = 0;
    loop {
        let mut progressed = false;
        for (ci, c) in cons.iter().enumerate() {
            if done[ci] {
                continue;
            }
            let mut open = c.iter().filter(|&&w| !bound[w]);
            match (open.next(), open.next()) {
                (Some(&w), None) => {
                    bound[w] = true;
                    done[ci] = true;
                    gained += 1;
                    progressed = true;
                }
                (None, _) => done[ci] = true,
                _ => {}
            }
        }
        if !progressed {
            return gained;
        }
    }
}

fn best_branch(cons: &[[usize; 4]], occurs: &[Vec<usize>], bound: &[bool], done: &[bool]) -> usize {
    let mut best: Option<(usize, (usize, usize))> = None;
    for v in 0..bound.len() {
        if bound[v] || occurs[v].is_empty() {
            continue;
        }
        let touching = occurs[v]
            .iter()
            .map(|&ci| cons[ci].iter().filter(|&&w| bound[w]).count())
            .sum::<usize>();
        let score = (propagation_gain(cons, bound, done, v), touching);
        if best.is_none_or(|(_, bs)| score > bs) {
            best = Some((v, score));
        }
    }
    best.expect("unbound class remains").0
}

/// A fixed elimination order over the equality classes of regions.
#[derive(Debug, Clone)]
struct Plan {
    /// class of each region
    class_of: Vec<usize>,
    classes: usize,
    /// crossing relations over classes: [x, a, b, y]
    cons: Vec<[usize; 4]>,
    steps: Vec<Step>,
    /// constraints to verify after each step
    checks: Vec<Vec<usize>>,
    /// classes in no crossing relation
    free: Vec<usize>,
}

impl Plan {
    fn new(d: &MarkedGraphDiagram, schema: MarkedSchema) -> Plan {
        let eqs = constraints(d, schema);
        let mut uf = UnionFind::new(d.region_count());
        for e in &eqs {
            if let Relation::Equal(p, q) = e.relation {
                uf.union(p, q);
            }
        }
        let (class_of, classes) = uf.dense_labels();
        let cons: Vec<[usize; 4]> = eqs
            .iter()
            .filter_map(|e| match e.relation {
                Relation::Crossing { x, a, b, y } => Some([x, a, b, y].map(|r| class_of[r])),
                Relation::Equal(..) => None,
            })
            .collect();

        let mut occurs = vec![Vec::new(); classes];
        for (ci, c) in cons.iter().enumerate() {
            for &v in c {
                if occurs[v].last() != Some(&ci) {
                    occurs[v].push(ci);
                }
            }
        }
        let free: Vec<usize> = (0..classes).filter(|&v| occurs[v].is_empty()).collect();
        let mut bound = vec![false; classes];
        let mut done = vec![false; cons.len()];
        let mut steps = Vec::new();
        let mut checks = Vec::new();
        let mut remaining = classes - free.len();
        let unbound_single = |c: &[usize; 4], bound: &[bool]| -> Option<(usize, Slot)> {
            let mut hit = None;
            for (i, &v) in c.iter().enumerate() {
                if !bound[v] {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some((v, i));
                }
            }
            hit.map(|(v, i)| (v, [Slot::X, Slot::A, Slot::B, Slot::Y][i]))
        };
        while remaining > 0 {
            // prefer forcing y, then any other single open slot
            let mut pick = None;
            for (ci, c) in cons.iter().enumerate() {
                if done[ci] {
                    continue;
                }
                if let Some((v, slot)) = unbound_single(c, &bound) {
                    let is_y = matches!(slot, Slot::Y);
                    if pick.is_none() || is_y {
                        pick = Some((ci, v, slot));
                    }
                    if is_y {
                        break;
                    }
                }
            }
            let (step, var, used) = match pick {
                Some((ci, v, slot)) => (
                    Step::Derive {
                        var: v,
                        cons: ci,
                        slot,
                    },
                    v,
                    Some(ci),
                ),
                None => {
                    let v = best_branch(&cons, &occurs, &bound, &done);
                    (Step::Branch(v), v, None)
                }
            };
            bound[var] = true;
            remaining -= 1;
            if let Some(ci) = used {
                done[ci] = true;
            }
            let mut now = Vec::new();
            for &ci in &occurs[var] {
                if !done[ci] && cons[ci].iter().all(|&w| bound[w]) {
                    done[ci] = true;
                    now.push(ci);
                }
            }
            steps.push(step);
            checks.push(now);
        }
        Plan {
            class_of,
            classes,
            cons,
            steps,
            checks,
            free,
        }
    }

    fn derive(&self, alg: &Biquasile, vals: &[usize], cons: usize, slot: Slot) -> usize {
        let [x, a, b, y] = self.cons[cons];
        match slot {
            Slot::Y => alg.crossing(vals[x], vals[a], vals[b]),
            Slot::X => alg.star_rdiv(vals[y], alg.dot(vals[a], vals[b])),
            Slot::A => alg.dot_rdiv(alg.star_ldiv(vals[x], vals[y]), vals[b]),
            Slot::B => alg.dot_ldiv(vals[a], alg.star_ldiv(vals[x], vals[y])),
        }
    }

    fn checks_pass(&self, alg: &Biquasile, vals: &[usize], step: usize) -> bool {
        self.checks[step].iter().all(|&ci| {
            let [x, a, b, y] = self.cons[ci];
            vals[y] == alg.crossing(vals[x], vals[a], vals[b])
        })
    }

    /// Number of solutions below `step` given the current values.
    fn count_from(&self, alg: &Biquasile, vals: &mut [usize], step: usize) -> u128 {
        if step == self.steps.len() {
            return 1;
        }
        match self.steps[step] {
            Step::Branch(v) => {
                let mut total = 0;
                for value in 0..alg.order() {
                    vals[v] = value;
                    if self.checks_pass(alg, vals, step) {
                        total += self.count_from(alg, vals, step + 1);
                    }
                }
                total
            }
            Step::Derive { var, cons, slot } => {
                vals[var] = self.derive(alg, vals, cons, slot);
                if self.checks_pass(alg, vals, step) {
                    self.count_from(alg, vals, step + 1)
                } else {
                    0
                }
            }
        }
    }

    fn visit_from(
        &self,
        alg: &Biquasile,
        vals: &mut [usize],
        step: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if step == self.steps.len() {
            out.push(vals.to_vec());
            return;
        }
        match self.steps[step] {
            Step::Branch(v) => {
                for value in 0..alg.order() {
                    vals[v] = value;
                    if self.checks_pass(alg, vals, step) {
                        self.visit_from(alg, vals, step + 1, out);
                    }
                }
            }
            Step::Derive { var, cons, slot } => {
                vals[var] = self.derive(alg, vals, cons, slot);
                if self.checks_pass(alg, vals, step) {
                    self.visit_from(alg, vals, step + 1, out);
                }
            }
        }
    }

    fn free_factor(&self, n: usize) -> u128 {
        (n as u128).pow(self.free.len() as u32)
    }
}

pub fn count_colorings(d: &MarkedGraphDiagram, alg: &Biquasile) -> u128 {
    count_colorings_with(d, alg, MarkedSchema::default())
}

/// Backtracking count under an explicit marked-vertex schema.
pub fn count_colorings_with(d: &MarkedGraphDiagram, alg: &Biquasile, schema: MarkedSchema) -> u128 {
    let plan = Plan::new(d, schema);
    let mut vals = vec![0; plan.classes];
    plan.count_from(alg, &mut vals, 0) * plan.free_factor(alg.order())
}

/// Like [`count_colorings_with`], fanning the first branching variable out over rayon.
pub fn count_colorings_par(d: &MarkedGraphDiagram, alg: &Biquasile, schema: MarkedSchema) -> u128 {
    let plan = Plan::new(d, schema);
    let factor = plan.free_factor(alg.order());
    match plan.steps.first() {
        Some(&Step::Branch(v)) => {
            let total: u128 = (0..alg.order())
                .into_par_iter()
                .map(|value| {
                    let mut vals = vec![0; plan.classes];
                    vals[v] = value;
                    if plan.checks_pass(alg, &vals, 0) {
                        plan.count_from(alg, &mut vals, 1)
                    } else {
                        0
                    }
                })
                .sum();
            total * factor
        }
        _ => {
            let mut vals = vec![0; plan.classes];
            plan.count_from(alg, &mut vals, 0) * factor
        }
    }
}

pub fn list_colorings(d: &MarkedGraphDiagram, alg: &Biquasile) -> Vec<Coloring> {
    list_colorings_with(d, alg, MarkedSchema::default())
}

/// Every coloring exactly once, in lexicographic order of region values.
pub fn list_colorings_with(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    schema: MarkedSchema,
) -> Vec<Coloring> {
    let plan = Plan::new(d, schema);
    let n = alg.order();
    let mut partial = Vec::new();
    let mut vals = vec![0; plan.classes];
    plan.visit_from(alg, &mut vals, 0, &mut partial);
    let mut out = Vec::new();
    for mut vals in partial {
        // odometer over the unconstrained classes
        loop {
            out.push(Coloring(plan.class_of.iter().map(|&c| vals[c]).collect()));
            let mut advanced = false;
            for &c in plan.free.iter().rev() {
                vals[c] += 1;
                if vals[c] < n {
                    advanced = true;
                    break;
                }
                vals[c] = 0;
            }
            if !advanced {
                break;
            }
        }
    }
    out.sort_unstable();
    out
}

/// Plain exhaustive loop over all `n^regions` assignments.
pub fn oracle_count(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    budget: u128,
) -> Result<u128, SolverError> {
    oracle_count_with(d, alg, MarkedSchema::default(), budget)
}

pub fn oracle_count_with(
    d: &MarkedGraphDiagram,
    alg: &Biquasile,
    schema: MarkedSchema,
    budget: u128,
) -> Result<u128, SolverError> {
    let n = alg.order();
    let r = d.region_count();
    let needed = (n as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(SolverError::BudgetExceeded { needed, budget });
    }
    let eqs: Vec<Equation> = constraints(d, schema);
    let mut f = vec![0usize; r];
    let mut count = 0u128;
    loop {
        if eqs.iter().all(|e| e.holds(alg, &f)) {
            count += 1;
        }
        let mut i = 0;
        while i < r {
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == r {
            return Ok(count);
        }
    }
}

/// Homogeneous linear system over `Z_N`; rows are equations, columns regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub modulus: usize,
    pub columns: usize,
    pub rows: Vec<Vec<i64>>,
}

/// Coloring equations of an Alexander biquasile as a linear system.
pub fn build_linear_system(
    d: &MarkedGraphDiagram,
    params: AlexanderParams,
    schema: MarkedSchema,
) -> LinearSystem {
    let m = params.modulus as i64;
    let r = d.region_count();
    let [cx, ca, cb, cy] = params.crossing_coefficients();
    let rows = constraints(d, schema)
        .iter()
        .map(|e| {
            let mut row = vec![0i64; r];
            match e.relation {
                Relation::Crossing { x, a, b, y } => {
                    row[x] += cx;
                    row[a] += ca;
                    row[b] += cb;
                    row[y] += cy;
                }
                Relation::Equal(p, q) => {
                    row[p] += 1;
                    row[q] -= 1;
                }
            }
            row.iter_mut().for_each(|v| *v = v.rem_euclid(m));
            row
        })
        .collect();
    LinearSystem {
        modulus: params.modulus,
        columns: r,
        rows,
    }
}

/// Diagonal of a Smith form of the matrix, padded with zeros to the column count.
///
/// Entries are kept reduced modulo `modulus`; this changes the matrix only by
/// multiples of `N·e_j`, which leaves the solution set mod `N` unchanged.
pub fn smith_diagonal(rows: &[Vec<i64>], columns: usize, modulus: usize) -> Vec<i128> {
    let m = modulus as i128;
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| (v as i128).rem_euclid(m)).collect())
        .collect();
    let nr = a.len();
    let mut diag = Vec::with_capacity(columns);
    for t in 0..columns.min(nr) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &v) in row.iter().enumerate().skip(t) {
                    if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.resize(columns, 0);
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..nr {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let (top, below) = a.split_at_mut(i);
                    for (x, &y) in below[0][t..columns].iter_mut().zip(&top[t][t..columns]) {
                        *x = (*x - q * y).rem_euclid(m);
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..columns {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = (row[j] - q * row[t]).rem_euclid(m);
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                diag.push(p);
                break;
            }
        }
    }
    diag.resize(columns, 0);
    diag
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `N^(r−k) · Π gcd(d_i, N)` from the Smith diagonal.
pub fn count_solutions_linear(sys: &LinearSystem) -> u128 {
    let m = sys.modulus as i128;
    smith_diagonal(&sys.rows, sys.columns, sys.modulus)
        .iter()
        .map(|&d| gcd(d, m) as u128)
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{alexander_biquasile, named};
    use crate::diagram::parse_diagram;

    const HOPF: &str = "regions 4\nX+ 4 1 3 2\nX+ 2 1 3 4\n";
    const TORUS: &str = "regions 4\nM 2 1 3 4\nM 3 2 4 1\n";

    #[test]
    fn unknot_counts() {
        let d = parse_diagram("regions 2\n").unwrap();
        for n in 1..=4 {
            let b = alexander_biquasile(n, 1, 1, 1).unwrap();
            assert_eq!(count_colorings(&d, &b), (n * n) as u128);
        }
        assert_eq!(oracle_count(&d, &named::x1(), 1000), Ok(9));
        let list = list_colorings(&d, &named::y2());
        let labels: Vec<Vec<usize>> = list.iter().map(|c| c.labels()).collect();
        assert_eq!(labels, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }

    #[test]
    fn hopf_with_order_two() {
        let d = parse_diagram(HOPF).unwrap();
        let y = named::y2();
        assert_eq!(count_colorings(&d, &y), 8);
        assert_eq!(oracle_count(&d, &y, 1000), Ok(8));
        assert_eq!(list_colorings(&d, &y).len(), 8);
    }

    #[test]
    fn torus_over_z7() {
        let d = parse_diagram(TORUS).unwrap();
        let b = alexander_biquasile(7, 2, 3, 4).unwrap();
        assert_eq!(count_colorings(&d, &b), 49);
        let sys = build_linear_system(&d, b.alexander_params().unwrap(), MarkedSchema::Identify);
        assert_eq!(count_solutions_linear(&sys), 49);
    }

    #[test]
    fn budget_is_enforced() {
        let d = parse_diagram(HOPF).unwrap();
        assert_eq!(
            oracle_count(&d, &named::x1(), 80),
            Err(SolverError::BudgetExceeded {
                needed: 81,
                budget: 80
            })
        );
    }

    #[test]
    fn smith_small_cases() {
        // empty system: N^r
        assert_eq!(
            count_solutions_linear(&LinearSystem {
                modulus: 6,
                columns: 3,
                rows: vec![]
            }),
            216
        );
        // 2x ≡ 0 mod 4 has 2 solutions; 4x ≡ 0 mod 6 has 2
        let one = |m: usize, c: i64| LinearSystem {
            modulus: m,
            columns: 1,
            rows: vec![vec![c]],
        };
        assert_eq!(count_solutions_linear(&one(4, 2)), 2);
        assert_eq!(count_solutions_linear(&one(6, 4)), 2);
        assert_eq!(count_solutions_linear(&one(6, 0)), 6);
    }

    #[test]
    fn smith_matches_brute_force() {
        let rows = vec![vec![2, 4, 0], vec![3, 1, 5], vec![0, 6, 2]];
        for m in 2..=12usize {
            let mut brute = 0u128;
            for x in 0..m as i64 {
                for y in 0..m as i64 {
                    for z in 0..m as i64 {
                        if rows
                            .iter()
                            .all(|r| (r[0] * x + r[1] * y + r[2] * z).rem_euclid(m as i64) == 0)
                        {
                            brute += 1;
                        }
                    }
                }
            }
            let sys = LinearSystem {
                modulus: m,
                columns: 3,
                rows: rows.clone(),
            };
            assert_eq!(count_solutions_linear(&sys), brute, "modulus {m}");
        }
    }

    #[test]
    fn parallel_agrees() {
        let d = parse_diagram(HOPF).unwrap();
        for b in [named::x1(), named::x2(), named::x3()] {
            assert_eq!(
                count_colorings_par(&d, &b, MarkedSchema::Identify),
                count_colorings(&d, &b)
            );
        }
    }

    #[test]
    fn check_coloring_rejects() {
        let d = parse_diagram(HOPF).unwrap();
        let y = named::y2();
        let good = list_colorings(&d, &y)[0].clone();
        assert!(check_coloring(&d, &y, MarkedSchema::Identify, &good).is_ok());
        let mut bad = good.clone();
        bad.0[3] ^= 1;
        assert!(check_coloring(&d, &y, MarkedSchema::Identify, &bad).is_err());
    }
}
