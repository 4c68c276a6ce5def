//! Marked graph diagrams stored as region-labelled vertex lists.
//!
//! Every vertex carries a 4-tuple `(x, a, b, y)` of regions. At a crossing,
//! `x` and `y` are the two regions lying left of one strand and right of the
//! other (`x` is the one left of the over-strand), `a` lies left of both
//! strands and `b` right of both. The coloring relation is `y = x∗(a·b)` for
//! either sign. At a marked vertex, `x` and `y` are the corners fused by the
//! negative resolution and `a`, `b` the corners fused by the positive one.

use std::fmt;

use thiserror::Error;

use crate::algebra::Biquasile;
use crate::dsu::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    PositiveCrossing,
    NegativeCrossing,
    MarkedVertex,
}

impl VertexKind {
    pub fn tag(self) -> &'static str {
        match self {
            VertexKind::PositiveCrossing => "X+",
            VertexKind::NegativeCrossing => "X-",
            VertexKind::MarkedVertex => "M",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "X+" => Some(VertexKind::PositiveCrossing),
            "X-" => Some(VertexKind::NegativeCrossing),
            "M" => Some(VertexKind::MarkedVertex),
            _ => None,
        }
    }

    /// `+1`, `-1`, or `0` for marked vertices.
    pub fn sign(self) -> i64 {
        match self {
            VertexKind::PositiveCrossing => 1,
            VertexKind::NegativeCrossing => -1,
            VertexKind::MarkedVertex => 0,
        }
    }
}

/// A vertex with 0-based region indices `(x, a, b, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub kind: VertexKind,
    pub regions: [usize; 4],
}

impl Vertex {
    pub fn new(kind: VertexKind, x: usize, a: usize, b: usize, y: usize) -> Self {
        Vertex {
            kind,
            regions: [x, a, b, y],
        }
    }

    pub fn x(&self) -> usize {
        self.regions[0]
    }
    pub fn a(&self) -> usize {
        self.regions[1]
    }
    pub fn b(&self) -> usize {
        self.regions[2]
    }
    pub fn y(&self) -> usize {
        self.regions[3]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraphDiagram {
    name: Option<String>,
    region_count: usize,
    components: Option<usize>,
    free_regions: usize,
    vertices: Vec<Vertex>,
}

impl MarkedGraphDiagram {
    pub fn new(region_count: usize, vertices: Vec<Vertex>) -> Result<Self, DiagramError> {
        Self::build(None, region_count, None, 0, vertices)
    }

    /// Full constructor; `free_regions` counts regions that no vertex touches.
    pub fn build(
        name: Option<String>,
        region_count: usize,
        components: Option<usize>,
        free_regions: usize,
        vertices: Vec<Vertex>,
    ) -> Result<Self, DiagramError> {
        if region_count == 0 {
            return Err(DiagramError::Invalid(
                "region count must be positive".into(),
            ));
        }
        if components == Some(0) {
            return Err(DiagramError::Invalid(
                "component count must be positive".into(),
            ));
        }
        let mut used = vec![false; region_count];
        for (i, v) in vertices.iter().enumerate() {
            for &r in &v.regions {
                if r >= region_count {
                    return Err(DiagramError::Invalid(format!(
                        "vertex {} uses region {} but there are {region_count}",
                        i + 1,
                        r + 1
                    )));
                }
                used[r] = true;
            }
        }
        let unused = used.iter().filter(|u| !**u).count();
        if !vertices.is_empty() && unused > free_regions {
            let first = used.iter().position(|u| !u).unwrap_or(0);
            return Err(DiagramError::Invalid(format!(
                "region {} touches no vertex and only {free_regions} free regions are declared",
                first + 1
            )));
        }
        Ok(MarkedGraphDiagram {
            name,
            region_count,
            components,
            free_regions,
            vertices,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn region_count(&self) -> usize {
        self.region_count
    }

    pub fn components(&self) -> Option<usize> {
        self.components
    }

    pub fn free_regions(&self) -> usize {
        self.free_regions
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn crossing_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.kind != VertexKind::MarkedVertex)
            .count()
    }

    pub fn marked_count(&self) -> usize {
        self.vertices.len() - self.crossing_count()
    }

    pub fn is_classical(&self) -> bool {
        self.marked_count() == 0
    }
}

impl fmt::Display for MarkedGraphDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_diagram(self))
    }
}

/// A diagram without marked vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalDiagram(MarkedGraphDiagram);

impl ClassicalDiagram {
    pub fn new(d: MarkedGraphDiagram) -> Result<Self, DiagramError> {
        if d.is_classical() {
            Ok(ClassicalDiagram(d))
        } else {
            Err(DiagramError::Invalid("diagram has marked vertices".into()))
        }
    }

    pub fn diagram(&self) -> &MarkedGraphDiagram {
        &self.0
    }

    pub fn into_inner(self) -> MarkedGraphDiagram {
        self.0
    }
}

impl std::ops::Deref for ClassicalDiagram {
    type Target = MarkedGraphDiagram;
    fn deref(&self) -> &MarkedGraphDiagram {
        &self.0
    }
}

fn perr(line: usize, message: impl Into<String>) -> DiagramError {
    DiagramError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_diagram(text: &str) -> Result<MarkedGraphDiagram, DiagramError> {
    let mut name = None;
    let mut regions: Option<usize> = None;
    let mut components = None;
    let mut free = 0;
    let mut vertices = Vec::new();
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let lno = i + 1;
        last_line = lno;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap_or("");
        let rest: Vec<&str> = toks.collect();
        let count = |what: &str| -> Result<usize, DiagramError> {
            match rest[..] {
                [v] => v
                    .parse()
                    .map_err(|_| perr(lno, format!("bad {what} `{v}`"))),
                _ => Err(perr(lno, format!("expected `{what} <n>`"))),
            }
        };
        match head {
            "name" => {
                let n = line["name".len()..].trim();
                if n.is_empty() {
                    return Err(perr(lno, "empty name"));
                }
                name = Some(n.to_string());
            }
            "regions" => {
                if regions.is_some() {
                    return Err(perr(lno, "duplicate `regions` header"));
                }
                let n = count("regions")?;
                if n == 0 {
                    return Err(perr(lno, "region count must be positive"));
                }
                regions = Some(n);
            }
            "components" => components = Some(count("components")?),
            "free_regions" => free = count("free_regions")?,
            tag => {
                let kind = VertexKind::from_tag(tag)
                    .ok_or_else(|| perr(lno, format!("unknown vertex tag `{tag}`")))?;
                let n = regions.ok_or_else(|| perr(lno, "vertex before `regions` header"))?;
                if rest.len() != 4 {
                    return Err(perr(
                        lno,
                        format!("expected 4 regions, found {}", rest.len()),
                    ));
                }
                let mut r = [0usize; 4];
                for (slot, t) in r.iter_mut().zip(&rest) {
                    let v: usize = t
                        .parse()
                        .map_err(|_| perr(lno, format!("bad region index `{t}`")))?;
                    if v == 0 || v > n {
                        return Err(perr(lno, format!("region {v} outside 1..={n}")));
                    }
                    *slot = v - 1;
                }
                vertices.push(Vertex { kind, regions: r });
            }
        }
    }
    let n = regions.ok_or_else(|| perr(last_line, "missing `regions <n>` header"))?;
    MarkedGraphDiagram::build(name, n, components, free, vertices)
}

pub fn serialize_diagram(d: &MarkedGraphDiagram) -> String {
    let mut out = String::new();
    if let Some(n) = &d.name {
        out.push_str(&format!("name {n}\n"));
    }
    out.push_str(&format!("regions {}\n", d.region_count));
    if let Some(k) = d.components {
        out.push_str(&format!("components {k}\n"));
    }
    if d.free_regions > 0 {
        out.push_str(&format!("free_regions {}\n", d.free_regions));
    }
    for v in &d.vertices {
        let [x, a, b, y] = v.regions.map(|r| r + 1);
        out.push_str(&format!("{} {x} {a} {b} {y}\n", v.kind.tag()));
    }
    out
}

/// Coloring rule used at marked vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MarkedSchema {
    /// `x = y` and `a = b`.
    #[default]
    Identify,
    /// `y = x∗(a·b)` and `x = y∗(a·b)`.
    Reciprocal,
}

impl MarkedSchema {
    pub fn name(self) -> &'static str {
        match self {
            MarkedSchema::Identify => "identify",
            MarkedSchema::Reciprocal => "reciprocal",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "identify" | "A" | "a" => Some(MarkedSchema::Identify),
            "reciprocal" | "B" | "b" => Some(MarkedSchema::Reciprocal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `y = x ∗ (a · b)`
    Crossing {
        x: usize,
        a: usize,
        b: usize,
        y: usize,
    },
    Equal(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Equation {
    /// 0-based index of the originating vertex.
    pub vertex: usize,
    pub relation: Relation,
}

impl Equation {
    pub fn holds(&self, alg: &Biquasile, f: &[usize]) -> bool {
        match self.relation {
            Relation::Crossing { x, a, b, y } => f[y] == alg.crossing(f[x], f[a], f[b]),
            Relation::Equal(p, q) => f[p] == f[q],
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relation {
            Relation::Crossing { x, a, b, y } => {
                write!(f, "r{}*(r{}.r{}) = r{}", x + 1, a + 1, b + 1, y + 1)
            }
            Relation::Equal(p, q) => write!(f, "r{} = r{}", p + 1, q + 1),
        }
    }
}

/// Coloring equations, two per marked vertex and one per crossing.
pub fn constraints(d: &MarkedGraphDiagram, schema: MarkedSchema) -> Vec<Equation> {
    let mut out = Vec::with_capacity(d.vertices.len() * 2);
    for (i, v) in d.vertices.iter().enumerate() {
        let [x, a, b, y] = v.regions;
        let eq = |relation| Equation {
            vertex: i,
            relation,
        };
        match (v.kind, schema) {
            (VertexKind::MarkedVertex, MarkedSchema::Identify) => {
                out.push(eq(Relation::Equal(x, y)));
                out.push(eq(Relation::Equal(a, b)));
            }
            (VertexKind::MarkedVertex, MarkedSchema::Reciprocal) => {
                out.push(eq(Relation::Crossing { x, a, b, y }));
                out.push(eq(Relation::Crossing { x: y, a, b, y: x }));
            }
            _ => out.push(eq(Relation::Crossing { x, a, b, y })),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "+" | "positive" | "plus" => Some(Sign::Positive),
            "-" | "negative" | "minus" => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// Region map of a resolution: `map[r]` is the new index of old region `r`.
pub fn resolution_map(d: &MarkedGraphDiagram, sign: Sign) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::new(d.region_count);
    for v in d
        .vertices
        .iter()
        .filter(|v| v.kind == VertexKind::MarkedVertex)
    {
        match sign {
            Sign::Positive => uf.union(v.a(), v.b()),
            Sign::Negative => uf.union(v.x(), v.y()),
        };
    }
    uf.dense_labels()
}

/// Smooths every marked vertex; crossings keep their tuples through the region map.
pub fn resolve(d: &MarkedGraphDiagram, sign: Sign) -> ClassicalDiagram {
    let (map, count) = resolution_map(d, sign);
    let vertices: Vec<Vertex> = d
        .vertices
        .iter()
        .filter(|v| v.kind != VertexKind::MarkedVertex)
        .map(|v| Vertex {
            kind: v.kind,
            regions: v.regions.map(|r| map[r]),
        })
        .collect();
    let mut used = vec![false; count];
    vertices
        .iter()
        .flat_map(|v| v.regions)
        .for_each(|r| used[r] = true);
    let free = if vertices.is_empty() {
        0
    } else {
        used.iter().filter(|u| !**u).count()
    };
    // each smoothing either fuses two regions or splits off a piece
    let pieces = count.checked_sub(vertices.len() + 1);
    let name = d.name.as_ref().map(|n| format!("{n} [{}]", sign.symbol()));
    let out = MarkedGraphDiagram::build(name, count, pieces.filter(|&k| k > 0), free, vertices)
        .expect("resolution of a valid diagram is valid");
    ClassicalDiagram(out)
}

/// Euler-count consistency warning, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerWarning {
    pub expected: usize,
    pub found: usize,
    pub components: usize,
}

impl fmt::Display for EulerWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "expected {} regions for {} split component(s), found {}",
            self.expected, self.components, self.found
        )
    }
}

/// Checks `regions = V + 1 + k`, with `k` the declared component count (default 1).
pub fn euler_check(d: &MarkedGraphDiagram) -> Vec<EulerWarning> {
    let k = d.components.unwrap_or(1);
    let expected = d.vertices.len() + 1 + k;
    if expected == d.region_count {
        Vec::new()
    } else {
        vec![EulerWarning {
            expected,
            found: d.region_count,
            components: k,
        }]
    }
}
