//! Finite biquasiles.
//!
//! Elements are stored 0-based internally. Text formats and error witnesses
//! use the 1-based labels `1..=n`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

/// Which of the two operations a table belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Star,
    Dot,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Star => f.write_str("star"),
            Op::Dot => f.write_str("dot"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("order must be positive")]
    ZeroOrder,
    #[error("table is not square: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry {value} at row {row}, column {col} is outside 1..={order}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: i64,
        order: usize,
    },
    #[error("tables have different orders ({star} and {dot})")]
    OrderMismatch { star: usize, dot: usize },
    #[error("{0} table is not a Latin square")]
    NotLatin(Op),
    #[error(
        "exchange axiom equation {equation} fails at x={}, y={}, a={}, b={}",
        witness[0], witness[1], witness[2], witness[3]
    )]
    Exchange { equation: u8, witness: [usize; 4] },
    #[error("parameter {name}={value} is not a unit modulo {modulus}")]
    NotUnit {
        name: &'static str,
        value: i64,
        modulus: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl AlgebraError {
    /// True for errors caused by malformed input rather than failed axioms.
    pub fn is_malformed(&self) -> bool {
        matches!(
            self,
            AlgebraError::ZeroOrder
                | AlgebraError::Ragged { .. }
                | AlgebraError::OutOfRange { .. }
                | AlgebraError::OrderMismatch { .. }
                | AlgebraError::Parse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// An `n × n` operation table; row is the left argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpTable {
    order: usize,
    cells: Vec<u16>,
}

impl OpTable {
    /// Builds a table from 1-based rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(AlgebraError::ZeroOrder);
        }
        let mut cells = Vec::with_capacity(order * order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(AlgebraError::Ragged {
                    row: r + 1,
                    expected: order,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v < 1 || v as usize > order {
                    return Err(AlgebraError::OutOfRange {
                        row: r + 1,
                        col: c + 1,
                        value: v,
                        order,
                    });
                }
                cells.push((v - 1) as u16);
            }
        }
        Ok(OpTable { order, cells })
    }

    /// Builds a table from a 0-based function.
    ///
    /// # Panics
    /// If `f` returns a value outside `0..order`.
    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        assert!(order > 0 && order <= u16::MAX as usize);
        let mut cells = Vec::with_capacity(order * order);
        for r in 0..order {
            for c in 0..order {
                let v = f(r, c);
                assert!(v < order, "table value {v} out of range for order {order}");
                cells.push(v as u16);
            }
        }
        OpTable { order, cells }
    }

    pub(crate) fn from_cells(order: usize, cells: Vec<u16>) -> Self {
        debug_assert_eq!(cells.len(), order * order);
        OpTable { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// 0-based lookup.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.order + col] as usize
    }

    /// Rows with 1-based entries.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells
            .chunks(self.order)
            .map(|row| row.iter().map(|&v| v as usize + 1).collect())
            .collect()
    }

    pub fn cells(&self) -> &[u16] {
        &self.cells
    }

    pub fn is_latin(&self) -> bool {
        let n = self.order;
        let mut seen = vec![false; n];
        for r in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..n {
                let v = self.get(r, c);
                if std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        for c in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..n {
                let v = self.get(r, c);
                if std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        true
    }

    // ldiv[y][t[y][x]] = x
    fn left_division(&self) -> OpTable {
        let n = self.order;
        let mut cells = vec![0u16; n * n];
        for y in 0..n {
            for x in 0..n {
                cells[y * n + self.get(y, x)] = x as u16;
            }
        }
        OpTable::from_cells(n, cells)
    }

    // rdiv[t[x][y]][y] = x
    fn right_division(&self) -> OpTable {
        let n = self.order;
        let mut cells = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                cells[self.get(x, y) * n + y] = x as u16;
            }
        }
        OpTable::from_cells(n, cells)
    }
}

/// Latin-square test on 1-based rows. Out-of-range entries are an error, not `false`.
pub fn validate_latin(rows: &[Vec<i64>]) -> Result<bool> {
    OpTable::from_rows(rows).map(|t| t.is_latin())
}

/// Parameters of an Alexander biquasile on `Z_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlexanderParams {
    pub modulus: usize,
    pub d: i64,
    pub s: i64,
    pub n: i64,
}

impl AlexanderParams {
    /// Residue of a 0-based element index; label `N` stands for residue 0.
    #[inline]
    pub fn residue(&self, index: usize) -> usize {
        (index + 1) % self.modulus
    }

    #[inline]
    pub fn index(&self, residue: usize) -> usize {
        (residue + self.modulus - 1) % self.modulus
    }

    /// Coefficients `(cx, ca, cb, cy)` of the crossing relation `y = x∗(a·b)`
    /// written as `cx·x + ca·a + cb·b + cy·y ≡ 0`, reduced into `0..N`.
    pub fn crossing_coefficients(&self) -> [i64; 4] {
        let m = self.modulus as i64;
        let r = |v: i64| v.rem_euclid(m);
        [
            r(-self.d * self.s * self.n * self.n),
            r(self.n * self.d),
            r(self.n * self.s),
            r(-1),
        ]
    }
}

impl fmt::Display for AlexanderParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alexander({},{},{},{})",
            self.modulus, self.d, self.s, self.n
        )
    }
}

/// A finite biquasile with materialized division tables.
#[derive(Debug, Clone)]
pub struct Biquasile {
    star: OpTable,
    dot: OpTable,
    star_ldiv: OpTable,
    star_rdiv: OpTable,
    dot_ldiv: OpTable,
    dot_rdiv: OpTable,
    alexander: Option<AlexanderParams>,
}

impl PartialEq for Biquasile {
    fn eq(&self, other: &Self) -> bool {
        self.star == other.star && self.dot == other.dot
    }
}

impl Eq for Biquasile {}

impl Biquasile {
    /// Validates both tables and the exchange axiom, then derives the divisions.
    pub fn new(star: OpTable, dot: OpTable) -> Result<Self> {
        if star.order() != dot.order() {
            return Err(AlgebraError::OrderMismatch {
                star: star.order(),
                dot: dot.order(),
            });
        }
        if !star.is_latin() {
            return Err(AlgebraError::NotLatin(Op::Star));
        }
        if !dot.is_latin() {
            return Err(AlgebraError::NotLatin(Op::Dot));
        }
        if let Some((equation, w)) = exchange_violation(&star, &dot) {
            return Err(AlgebraError::Exchange {
                equation,
                witness: w.map(|v| v + 1),
            });
        }
        Ok(Self::assemble(star, dot))
    }

    fn assemble(star: OpTable, dot: OpTable) -> Self {
        Biquasile {
            star_ldiv: star.left_division(),
            star_rdiv: star.right_division(),
            dot_ldiv: dot.left_division(),
            dot_rdiv: dot.right_division(),
            star,
            dot,
            alexander: None,
        }
    }

    pub fn order(&self) -> usize {
        self.star.order()
    }

    pub fn star_table(&self) -> &OpTable {
        &self.star
    }

    pub fn dot_table(&self) -> &OpTable {
        &self.dot
    }

    pub fn alexander_params(&self) -> Option<AlexanderParams> {
        self.alexander
    }

    #[inline]
    pub fn star(&self, x: usize, y: usize) -> usize {
        self.star.get(x, y)
    }

    #[inline]
    pub fn dot(&self, x: usize, y: usize) -> usize {
        self.dot.get(x, y)
    }

    /// `y \* z`: the `x` with `y ∗ x = z`.
    #[inline]
    pub fn star_ldiv(&self, y: usize, z: usize) -> usize {
        self.star_ldiv.get(y, z)
    }

    /// `z /* y`: the `x` with `x ∗ y = z`.
    #[inline]
    pub fn star_rdiv(&self, z: usize, y: usize) -> usize {
        self.star_rdiv.get(z, y)
    }

    /// `y \ z`: the `x` with `y · x = z`.
    #[inline]
    pub fn dot_ldiv(&self, y: usize, z: usize) -> usize {
        self.dot_ldiv.get(y, z)
    }

    /// `z / y`: the `x` with `x · y = z`.
    #[inline]
    pub fn dot_rdiv(&self, z: usize, y: usize) -> usize {
        self.dot_rdiv.get(z, y)
    }

    /// The crossing relation `x ∗ (a · b)`.
    #[inline]
    pub fn crossing(&self, x: usize, a: usize, b: usize) -> usize {
        self.star(x, self.dot(a, b))
    }
}

pub fn make_biquasile(star: OpTable, dot: OpTable) -> Result<Biquasile> {
    Biquasile::new(star, dot)
}

/// Evaluates both exchange equations on possibly partial tables.
/// `None` means some lookup was undefined.
#[inline]
fn exchange_eqs<S, D>(st: S, dt: D, x: usize, y: usize, a: usize, b: usize) -> [Option<bool>; 2]
where
    S: Fn(usize, usize) -> Option<usize>,
    D: Fn(usize, usize) -> Option<usize>,
{
    let first = (|| {
        let y_ab = st(y, dt(a, b)?)?;
        let lhs = st(a, dt(x, y_ab)?)?;
        let a_xy = st(a, dt(x, y)?)?;
        let rhs = st(a_xy, dt(x, st(y, dt(a_xy, b)?)?)?)?;
        Some(lhs == rhs)
    })();
    let second = (|| {
        let a_xy = st(a, dt(x, y)?)?;
        let lhs = st(y, dt(a_xy, b)?)?;
        let y_ab = st(y, dt(a, b)?)?;
        let a_x_yab = st(a, dt(x, y_ab)?)?;
        let rhs = st(y_ab, dt(a_x_yab, b)?)?;
        Some(lhs == rhs)
    })();
    [first, second]
}

/// First exchange-axiom failure as `(equation, [x, y, a, b])`, 0-based.
pub fn exchange_violation(star: &OpTable, dot: &OpTable) -> Option<(u8, [usize; 4])> {
    let n = star.order();
    let st = |p: usize, q: usize| Some(star.get(p, q));
    let dt = |p: usize, q: usize| Some(dot.get(p, q));
    for x in 0..n {
        for y in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let [e1, e2] = exchange_eqs(st, dt, x, y, a, b);
                    if e1 == Some(false) {
                        return Some((1, [x, y, a, b]));
                    }
                    if e2 == Some(false) {
                        return Some((2, [x, y, a, b]));
                    }
                }
            }
        }
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `x∗y = −d·s·n²·x + n·y`, `x·y = d·x + s·y` over `Z_N`.
pub fn alexander_biquasile(modulus: usize, d: i64, s: i64, n: i64) -> Result<Biquasile> {
    if modulus == 0 {
        return Err(AlgebraError::ZeroOrder);
    }
    let m = modulus as i64;
    for (name, value) in [("d", d), ("s", s), ("n", n)] {
        if gcd(value.rem_euclid(m), m) != 1 {
            return Err(AlgebraError::NotUnit {
                name,
                value,
                modulus,
            });
        }
    }
    let p = AlexanderParams {
        modulus,
        d: d.rem_euclid(m),
        s: s.rem_euclid(m),
        n: n.rem_euclid(m),
    };
    let cx = (-p.d * p.s * p.n * p.n).rem_euclid(m);
    let lin = |a: i64, b: i64| {
        move |x: usize, y: usize| {
            let r = (a * p.residue(x) as i64 + b * p.residue(y) as i64).rem_euclid(m);
            p.index(r as usize)
        }
    };
    let star = OpTable::from_fn(modulus, lin(cx, p.n));
    let dot = OpTable::from_fn(modulus, lin(p.d, p.s));
    let mut b = Biquasile::new(star, dot)?;
    b.alexander = Some(p);
    Ok(b)
}

/// Block text: `order n`, then `n` rows of the star block followed by the dot block.
pub fn serialize_matrix(b: &Biquasile) -> String {
    let mut out = format!("order {}\n", b.order());
    for (s, d) in b.star.rows().iter().zip(b.dot.rows()) {
        let line: Vec<String> = s.iter().chain(d.iter()).map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a block matrix and re-validates every axiom.
pub fn parse_matrix(text: &str) -> Result<Biquasile> {
    let (star, dot) = parse_matrix_tables(text)?;
    Biquasile::new(star, dot)
}

/// Parses a block matrix into its two tables without checking any axiom.
pub fn parse_matrix_tables(text: &str) -> Result<(OpTable, OpTable)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `order n` header"))?;
    let order = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["order", n] => n
            .parse::<usize>()
            .map_err(|_| parse_err(hline, format!("bad order `{n}`")))?,
        _ => return Err(parse_err(hline, "expected `order n`")),
    };
    if order == 0 {
        return Err(parse_err(hline, "order must be positive"));
    }
    let mut star = Vec::with_capacity(order);
    let mut dot = Vec::with_capacity(order);
    let mut last = hline;
    for (lno, line) in lines {
        last = lno;
        if star.len() == order {
            return Err(parse_err(lno, format!("more than {order} rows")));
        }
        let vals = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| parse_err(lno, format!("bad integer `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != 2 * order {
            return Err(parse_err(
                lno,
                format!("expected {} entries, found {}", 2 * order, vals.len()),
            ));
        }
        if let Some(v) = vals.iter().find(|&&v| v < 1 || v as usize > order) {
            return Err(parse_err(lno, format!("entry {v} outside 1..={order}")));
        }
        star.push(vals[..order].to_vec());
        dot.push(vals[order..].to_vec());
    }
    if star.len() != order {
        return Err(parse_err(
            last,
            format!("expected {order} rows, found {}", star.len()),
        ));
    }
    let relabel = |e: AlgebraError| match e {
        AlgebraError::Parse { .. } => e,
        other => parse_err(hline, other.to_string()),
    };
    Ok((
        OpTable::from_rows(&star).map_err(relabel)?,
        OpTable::from_rows(&dot).map_err(relabel)?,
    ))
}

/// All Latin squares of the given order in lexicographic row-major order.
pub fn latin_squares(order: usize) -> Vec<OpTable> {
    fn fill(
        n: usize,
        pos: usize,
        cells: &mut Vec<u16>,
        rows: &mut [u64],
        cols: &mut [u64],
        out: &mut Vec<OpTable>,
    ) {
        if pos == n * n {
            out.push(OpTable::from_cells(n, cells.clone()));
            return;
        }
        let (r, c) = (pos / n, pos % n);
        for v in 0..n {
            let bit = 1u64 << v;
            if rows[r] & bit != 0 || cols[c] & bit != 0 {
                continue;
            }
            rows[r] |= bit;
            cols[c] |= bit;
            cells.push(v as u16);
            fill(n, pos + 1, cells, rows, cols, out);
            cells.pop();
            rows[r] &= !bit;
            cols[c] &= !bit;
        }
    }
    assert!(
        (1..=64).contains(&order),
        "latin_squares supports orders 1..=64"
    );
    let mut out = Vec::new();
    fill(
        order,
        0,
        &mut Vec::with_capacity(order * order),
        &mut vec![0; order],
        &mut vec![0; order],
        &mut out,
    );
    out
}

/// Every biquasile of the given order, ordered lexicographically by the
/// star table then the dot table. Cost grows with the square of the number
/// of Latin squares; orders above 4 are slow.
pub fn enumerate_biquasiles(order: usize) -> impl Iterator<Item = Biquasile> {
    let squares = latin_squares(order);
    let stars = squares.clone();
    stars.into_iter().flat_map(move |star| {
        squares
            .iter()
            .filter(|dot| exchange_violation(&star, dot).is_none())
            .map(|dot| Biquasile::assemble(star.clone(), dot.clone()))
            .collect::<Vec<_>>()
    })
}

/// Parallel version of [`enumerate_biquasiles`]; same output order.
pub fn enumerate_biquasiles_par(order: usize) -> Vec<Biquasile> {
    let squares = latin_squares(order);
    squares
        .par_iter()
        .map(|star| {
            squares
                .iter()
                .filter(|dot| exchange_violation(star, dot).is_none())
                .map(|dot| Biquasile::assemble(star.clone(), dot.clone()))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Standard examples used throughout the tests and the corpus.
pub mod named {
    use super::*;

    fn block(rows: &[[i64; 6]]) -> Biquasile {
        let star: Vec<Vec<i64>> = rows.iter().map(|r| r[..3].to_vec()).collect();
        let dot: Vec<Vec<i64>> = rows.iter().map(|r| r[3..].to_vec()).collect();
        Biquasile::new(
            OpTable::from_rows(&star).expect("valid rows"),
            OpTable::from_rows(&dot).expect("valid rows"),
        )
        .expect("named biquasile satisfies the axioms")
    }

    pub fn x1() -> Biquasile {
        block(&[[1, 2, 3, 1, 2, 3], [2, 3, 1, 3, 1, 2], [3, 1, 2, 2, 3, 1]])
    }

    pub fn x2() -> Biquasile {
        block(&[[1, 2, 3, 1, 2, 3], [3, 1, 2, 2, 3, 1], [2, 3, 1, 3, 1, 2]])
    }

    pub fn x3() -> Biquasile {
        block(&[[2, 1, 3, 1, 3, 2], [1, 3, 2, 3, 2, 1], [3, 2, 1, 2, 1, 3]])
    }

    /// The order-2 biquasile `[[1,2|2,1],[2,1|1,2]]`.
    pub fn y2() -> Biquasile {
        Biquasile::new(
            OpTable::from_rows(&[vec![1, 2], vec![2, 1]]).expect("valid rows"),
            OpTable::from_rows(&[vec![2, 1], vec![1, 2]]).expect("valid rows"),
        )
        .expect("order-2 biquasile satisfies the axioms")
    }

    /// Looks up `X1`, `X2`, `X3` or `Y2` (case-insensitive).
    pub fn by_name(name: &str) -> Option<Biquasile> {
        match name.to_ascii_lowercase().as_str() {
            "x1" | "x_1" => Some(x1()),
            "x2" | "x_2" => Some(x2()),
            "x3" | "x_3" => Some(x3()),
            "y2" | "y" => Some(y2()),
            _ => None,
        }
    }
}
