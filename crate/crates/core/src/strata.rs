//! Bookkeeping for the boundary strata of the modified Baily–Borel compactification.
//!
//! Eleven strata: the two type I strata coming from the arrangement, the six
//! type II strata indexed by isotropic planes and the three type III strata.
//! The printed incidence array has three horizontal adjacencies that read as
//! closure order and five vertical ones whose orientation is left open.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cubic4::PlaneType;
use crate::error::{Error, Result};

/// Whether an adjacency is known to go from the smaller stratum to the larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    AsPrinted,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumNode {
    pub label: String,
    pub dim: u32,
    /// Root system of `K⊥/K` for type II, the isotropic lattice otherwise.
    pub defining_data: String,
    /// Rank of the isotropic sublattice: 2 for type II, 1 for type III, 0 for type I.
    pub isotropic_rank: u32,
    /// Rank of the root system (type II only).
    pub root_rank: Option<u32>,
    /// Whether the closure of the arrangement meets this stratum (type II only).
    pub meets_arrangement: Option<bool>,
}

/// An edge of the printed array; `lower` and `upper` are node or group labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub lower: String,
    pub upper: String,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub label: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceScheme {
    pub nodes: Vec<StratumNode>,
    pub groups: Vec<Group>,
    pub printed_edges: Vec<Edge>,
    pub readings: Vec<String>,
    /// `(dimension, count)` of maximal strata as stated in the text, which
    /// counts four surfaces although only three are named.
    pub stated_maximal: Vec<(u32, u32)>,
}

/// The label of the type II stratum of an isotropic plane type.
pub fn type_ii_label(t: PlaneType) -> String {
    format!("II({})", t.label())
}

fn plane_data(t: PlaneType) -> (u32, u32, bool) {
    // (root rank, dimension, meets the arrangement)
    match t {
        PlaneType::TwoE8 | PlaneType::D16 => (16, 3, true),
        PlaneType::A17 | PlaneType::E7D10 => (17, 2, true),
        PlaneType::ThreeE6 | PlaneType::D7A11 => (18, 1, false),
    }
}

fn node(label: &str, dim: u32, data: &str, iso: u32) -> StratumNode {
    StratumNode {
        label: label.to_string(),
        dim,
        defining_data: data.to_string(),
        isotropic_rank: iso,
        root_rank: None,
        meets_arrangement: None,
    }
}

pub fn build_strata() -> IncidenceScheme {
    let mut nodes = vec![
        node(
            "I0",
            0,
            "contraction of the divisor over the arrangement",
            0,
        ),
        node(
            "I1",
            1,
            "contraction of the divisor over the codimension 2 intersections; I(2E8+2U)",
            0,
        ),
    ];
    for t in [
        PlaneType::ThreeE6,
        PlaneType::D7A11,
        PlaneType::A17,
        PlaneType::E7D10,
        PlaneType::TwoE8,
        PlaneType::D16,
    ] {
        let (rank, dim, meets) = plane_data(t);
        nodes.push(StratumNode {
            label: type_ii_label(t),
            dim,
            defining_data: format!("isotropic plane with K⊥/K of type {}", t.label()),
            isotropic_rank: 2,
            root_rank: Some(rank),
            meets_arrangement: Some(meets),
        });
    }
    nodes.push(node("III0", 0, "isotropic line", 1));
    nodes.push(node("III1", 1, "isotropic line", 1));
    nodes.push(node("III2", 2, "isotropic line; III(2E8+U)", 1));
    let group = |label: &str, ts: [PlaneType; 2]| Group {
        label: label.to_string(),
        members: ts.iter().map(|&t| type_ii_label(t)).collect(),
    };
    let groups = vec![
        group("II1", [PlaneType::ThreeE6, PlaneType::D7A11]),
        group("II2", [PlaneType::A17, PlaneType::E7D10]),
        group("II3", [PlaneType::TwoE8, PlaneType::D16]),
    ];
    let edge = |lower: &str, upper: &str, orientation| Edge {
        lower: lower.into(),
        upper: upper.into(),
        orientation,
    };
    use Orientation::*;
    let printed_edges = vec![
        edge("I0", "I1", AsPrinted),
        edge("III0", "III1", AsPrinted),
        edge("III1", "III2", AsPrinted),
        edge("III1", "I0", Unresolved),
        edge("III2", "I1", Unresolved),
        edge("II1", "III0", Unresolved),
        edge("II2", "III1", Unresolved),
        edge("II3", "III2", Unresolved),
    ];
    let readings = vec![
        "closure order: the lower end of each vertical edge lies in the closure of the upper end"
            .to_string(),
        "lattice embedding order: each vertical edge records an inclusion of the defining lattices"
            .to_string(),
    ];
    IncidenceScheme {
        nodes,
        groups,
        printed_edges,
        readings,
        stated_maximal: vec![(1, 3), (2, 4), (3, 2)],
    }
}

impl IncidenceScheme {
    pub fn node(&self, label: &str) -> Option<&StratumNode> {
        self.nodes.iter().find(|n| n.label == label)
    }

    /// Members of a group label, or the label itself.
    pub fn expand(&self, label: &str) -> Vec<String> {
        match self.groups.iter().find(|g| g.label == label) {
            Some(g) => g.members.clone(),
            None => vec![label.to_string()],
        }
    }

    /// Strata on some oriented edge that never sit at its upper end.
    pub fn minimal(&self) -> Vec<String> {
        let oriented: Vec<&Edge> = self
            .printed_edges
            .iter()
            .filter(|e| e.orientation == Orientation::AsPrinted)
            .collect();
        let mut out: Vec<String> = Vec::new();
        for e in &oriented {
            for l in self.expand(&e.lower) {
                if !oriented.iter().any(|f| self.expand(&f.upper).contains(&l)) && !out.contains(&l)
                {
                    out.push(l);
                }
            }
        }
        out.sort();
        out
    }

    /// Strata whose closures are the boundary components: the right column and
    /// the bottom row of the array.
    pub fn maximal(&self) -> Vec<&StratumNode> {
        let mut labels = vec!["I1".to_string(), "III2".to_string()];
        for g in &self.groups {
            labels.extend(g.members.iter().cloned());
        }
        self.nodes
            .iter()
            .filter(|n| labels.contains(&n.label))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["minimal"] = self.minimal().into();
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mut v = v.clone();
        if let Some(o) = v.as_object_mut() {
            o.remove("minimal");
        }
        serde_json::from_value(v)
            .map_err(|e| Error::InvalidParameter(format!("incidence scheme: {e}")))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph strata {\n  rankdir=BT;\n");
        for n in &self.nodes {
            let _ = writeln!(
                s,
                "  \"{}\" [label=\"{}\\ndim {}\"];",
                n.label, n.label, n.dim
            );
        }
        for e in &self.printed_edges {
            for a in self.expand(&e.lower) {
                for b in self.expand(&e.upper) {
                    let style = match e.orientation {
                        Orientation::AsPrinted => String::new(),
                        Orientation::Unresolved => " [dir=none, style=dashed]".to_string(),
                    };
                    let _ = writeln!(s, "  \"{a}\" -> \"{b}\"{style};");
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn emit(&self, format: &str) -> Result<String> {
        match format {
            "dot" => Ok(self.to_dot()),
            "json" => Ok(serde_json::to_string_pretty(&self.to_json()).expect("serializable")),
            f => Err(Error::InvalidParameter(format!("unknown format `{f}`"))),
        }
    }
}

/// One row of [`dim_formula_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimCheck {
    pub label: String,
    pub root_rank: u32,
    pub expected: u32,
    pub listed: u32,
}

/// Compares the listed dimension of each type II stratum with `1 + (18 − rk R)`.
pub fn dim_formula_check(s: &IncidenceScheme) -> Vec<DimCheck> {
    s.nodes
        .iter()
        .filter_map(|n| {
            let r = n.root_rank?;
            Some(DimCheck {
                label: n.label.clone(),
                root_rank: r,
                expected: 1 + (18 - r),
                listed: n.dim,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_dims() {
        let s = build_strata();
        assert_eq!(s.nodes.len(), 11);
        let dim = |l: &str| s.node(l).unwrap().dim;
        assert_eq!(dim("II(2E8)"), 3);
        assert_eq!(dim("II(A17)"), 2);
        assert_eq!(dim("II(3E6)"), 1);
        assert_eq!(
            (dim("I0"), dim("I1"), dim("III0"), dim("III1"), dim("III2")),
            (0, 1, 0, 1, 2)
        );
        assert_eq!(s.printed_edges.len(), 8);
        assert_eq!(s.minimal(), vec!["I0", "III0"]);
    }

    #[test]
    fn dimension_formula() {
        let s = build_strata();
        let rows = dim_formula_check(&s);
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.expected == r.listed));
    }

    #[test]
    fn maximal_by_dimension() {
        let s = build_strata();
        let m = s.maximal();
        let count = |d: u32| m.iter().filter(|n| n.dim == d).count();
        assert_eq!((count(1), count(2), count(3)), (3, 3, 2));
        assert_eq!(s.stated_maximal, vec![(1, 3), (2, 4), (3, 2)]);
    }

    #[test]
    fn emitters() {
        let s = build_strata();
        let j = s.to_json();
        assert_eq!(IncidenceScheme::from_json(&j).unwrap(), s);
        assert_eq!(s.emit("dot").unwrap(), build_strata().emit("dot").unwrap());
        assert!(s.emit("svg").is_err());
        let dot = s.to_dot();
        assert_eq!(dot.lines().filter(|l| l.contains("label=")).count(), 11);
        assert_eq!(dot.matches("style=dashed").count(), 8);
    }
}
