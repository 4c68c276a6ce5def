//! Bundled fixture diagrams.
//!
//! The encodings live under `fixtures/` in this crate; see the README there
//! for how each one was drawn.

use crate::boltzmann::{parse_weight, BoltzmannWeight};
use crate::diagram::{parse_diagram, MarkedGraphDiagram};

/// A fixture file compiled into the library.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub file: &'static str,
    pub text: &'static str,
}

impl Fixture {
    pub fn diagram(&self) -> MarkedGraphDiagram {
        let d = parse_diagram(self.text)
            .unwrap_or_else(|e| panic!("bundled fixture {}: {e}", self.file));
        match d.name() {
            Some(_) => d,
            None => d.with_name(self.name),
        }
    }
}

macro_rules! fixture {
    ($name:expr, $file:expr) => {
        Fixture {
            name: $name,
            file: $file,
            text: include_str!(concat!("../fixtures/", $file)),
        }
    };
}

/// The fourteen surface-links of the ch-index table, in column order.
pub const TABLE: [Fixture; 14] = [
    fixture!("2_1", "table/01_2_1.mgd"),
    fixture!("6_1^{0,1}", "table/02_6_1_0_1.mgd"),
    fixture!("8_1", "table/03_8_1.mgd"),
    fixture!("8_1^{1,1}", "table/04_8_1_1_1.mgd"),
    fixture!("9_1", "table/05_9_1.mgd"),
    fixture!("9_1^{0,1}", "table/06_9_1_0_1.mgd"),
    fixture!("10_1", "table/07_10_1.mgd"),
    fixture!("10_2", "table/08_10_2.mgd"),
    fixture!("10_3", "table/09_10_3.mgd"),
    fixture!("10_1^1", "table/10_10_1_1.mgd"),
    fixture!("10_1^{0,1}", "table/11_10_1_0_1.mgd"),
    fixture!("10_2^{0,1}", "table/12_10_2_0_1.mgd"),
    fixture!("10_1^{1,1}", "table/13_10_1_1_1.mgd"),
    fixture!("10_1^{0,0,1}", "table/14_10_1_0_0_1.mgd"),
];

pub const EXTRA: [Fixture; 12] = [
    fixture!("unknot", "unknot.mgd"),
    fixture!("unlink2", "unlink2.mgd"),
    fixture!("L2a1", "L2a1.mgd"),
    fixture!("L", "L.mgd"),
    fixture!("sphere_tube", "sphere_tube.mgd"),
    fixture!("2_1 (bigon)", "2_1_bigon.mgd"),
    fixture!("torus_sphere_split", "torus_sphere_split.mgd"),
    fixture!("9_1^{0,1} reversed", "9_1_0_1_reversed.mgd"),
    fixture!("8_1 (wirtinger)", "8_1_wirtinger.mgd"),
    fixture!("10_1 (wirtinger)", "10_1_wirtinger.mgd"),
    fixture!("6_1^{0,1} stabilized", "6_1_0_1_stabilized.mgd"),
    fixture!("6_1^{0,1}", "table/02_6_1_0_1.mgd"),
];

/// Pairs of fixtures presenting equivalent surface-links, up to stabilization.
pub const EQUIVALENT_PAIRS: [(&str, &str); 5] = [
    ("2_1", "2_1 (bigon)"),
    ("unknot", "sphere_tube"),
    ("8_1", "8_1 (wirtinger)"),
    ("10_1", "10_1 (wirtinger)"),
    ("6_1^{0,1}", "6_1^{0,1} stabilized"),
];

/// Weights for the order-2 biquasile `Y2` over Z_5.
pub const WEIGHTS: [(&str, &str); 4] = [
    (
        "chi212+chi221",
        include_str!("../fixtures/weights/y2_chi212_chi221.txt"),
    ),
    ("w1", include_str!("../fixtures/weights/y2_w1.txt")),
    ("w2", include_str!("../fixtures/weights/y2_w2.txt")),
    ("w3", include_str!("../fixtures/weights/y2_w3.txt")),
];

pub fn table() -> Vec<MarkedGraphDiagram> {
    TABLE.iter().map(Fixture::diagram).collect()
}

/// Every distinct bundled diagram: the table followed by the extras.
pub fn all() -> Vec<MarkedGraphDiagram> {
    TABLE
        .iter()
        .chain(EXTRA.iter().filter(|f| !f.file.starts_with("table/")))
        .map(Fixture::diagram)
        .collect()
}

pub fn get(name: &str) -> Option<MarkedGraphDiagram> {
    TABLE
        .iter()
        .chain(EXTRA.iter())
        .find(|f| f.name == name)
        .map(Fixture::diagram)
}

/// Diagrams whose resolutions are trivial links: every bundled diagram except
/// the cobordism `L` and the classical `L2a1`.
pub fn closed() -> Vec<MarkedGraphDiagram> {
    all()
        .into_iter()
        .filter(|d| !matches!(d.name(), Some("L" | "L2a1")))
        .collect()
}

pub fn weight(name: &str) -> Option<BoltzmannWeight> {
    WEIGHTS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, t)| parse_weight(t).unwrap_or_else(|e| panic!("bundled weight {n}: {e}")))
}
