//! Dual graphs of degenerate fibres and their self-intersection numbers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub name: String,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub a: String,
    pub b: String,
    #[serde(default = "one")]
    pub weight: i64,
}

fn one() -> i64 {
    1
}

/// A curve outside the fibre meeting some of its components transversally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Section {
    pub name: String,
    pub meets: Vec<String>,
    /// Recorded, not computed: it is not determined by the fibre.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_intersection: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualGraph {
    pub components: Vec<Component>,
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub sections: Vec<Section>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl DualGraph {
    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let g: DualGraph =
            serde_json::from_str(text).map_err(|e| GeometryError::InvalidGraph(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    fn index(&self) -> BTreeMap<&str, usize> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.name.as_str(), i))
            .collect()
    }

    /// Symmetric intersection numbers between distinct components.
    fn adjacency(&self) -> Vec<Vec<i64>> {
        let idx = self.index();
        let n = self.components.len();
        let mut a = vec![vec![0; n]; n];
        for e in &self.edges {
            let (i, j) = (idx[e.a.as_str()], idx[e.b.as_str()]);
            a[i][j] += e.weight;
            a[j][i] += e.weight;
        }
        a
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let bad = |m: String| Err(GeometryError::InvalidGraph(m));
        if self.components.is_empty() {
            return bad("no components".into());
        }
        let idx = self.index();
        if idx.len() != self.components.len() {
            return bad("duplicate component name".into());
        }
        if let Some(c) = self.components.iter().find(|c| c.multiplicity <= 0) {
            return bad(format!(
                "component `{}` has non-positive multiplicity",
                c.name
            ));
        }
        for e in &self.edges {
            for end in [&e.a, &e.b] {
                if !idx.contains_key(end.as_str()) {
                    return bad(format!("edge endpoint `{end}` is not a component"));
                }
            }
            if e.a == e.b {
                return bad(format!("loop at `{}`", e.a));
            }
            if e.weight <= 0 {
                return bad(format!("edge {}-{} has non-positive weight", e.a, e.b));
            }
        }
        for s in &self.sections {
            if let Some(m) = s.meets.iter().find(|m| !idx.contains_key(m.as_str())) {
                return bad(format!(
                    "section `{}` meets unknown component `{m}`",
                    s.name
                ));
            }
        }
        let all: Vec<usize> = (0..self.components.len()).collect();
        if !connected(&self.adjacency(), &all) {
            return bad("graph is not connected".into());
        }
        if self
            .components
            .iter()
            .fold(0, |g, c| gcd(g, c.multiplicity))
            != 1
        {
            return bad("multiplicities have a common factor".into());
        }
        Ok(())
    }
}

fn connected(adj: &[Vec<i64>], vertices: &[usize]) -> bool {
    let Some(&start) = vertices.first() else {
        return true;
    };
    let allowed: BTreeSet<usize> = vertices.iter().copied().collect();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for &j in vertices {
            if adj[i][j] != 0 && allowed.contains(&j) && seen.insert(j) {
                queue.push_back(j);
            }
        }
    }
    seen.len() == vertices.len()
}

/// `C_i^2 = -(Σ_j m_j C_i·C_j) / m_i`, from the fibre meeting each of its components trivially.
pub fn solve_self_intersections(graph: &DualGraph) -> Result<Vec<(String, i64)>, GeometryError> {
    graph.validate()?;
    let adj = graph.adjacency();
    graph
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let numerator: i64 = -graph
                .components
                .iter()
                .enumerate()
                .map(|(j, d)| d.multiplicity * adj[i][j])
                .sum::<i64>();
            if numerator % c.multiplicity != 0 {
                return Err(GeometryError::InconsistentMultiplicities {
                    component: c.name.clone(),
                    numerator,
                    denominator: c.multiplicity,
                });
            }
            Ok((c.name.clone(), numerator / c.multiplicity))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub self_intersections: Vec<(String, i64)>,
    /// No component is a (-1)-curve.
    pub minimal: bool,
    /// Vertex count of the (-2)-subgraph when it is a path.
    pub minus_two_chain: Option<usize>,
    /// Total multiplicity with which each section meets the fibre.
    pub section_pairings: Vec<(String, i64)>,
    /// `F·F` with the solved self-intersections substituted back.
    pub fibre_square: i64,
}

impl ModelReport {
    /// `A_n` configuration of the given length.
    pub fn is_a_chain(&self, n: usize) -> bool {
        self.minus_two_chain == Some(n)
    }
}

pub fn model_classification_checks(graph: &DualGraph) -> Result<ModelReport, GeometryError> {
    let selfs = solve_self_intersections(graph)?;
    let mut adj = graph.adjacency();
    let n = graph.components.len();
    for (i, (_, s)) in selfs.iter().enumerate() {
        adj[i][i] = *s;
    }
    let m: Vec<i64> = graph.components.iter().map(|c| c.multiplicity).collect();
    let fibre_square = (0..n)
        .map(|i| m[i] * (0..n).map(|j| m[j] * adj[i][j]).sum::<i64>())
        .sum();

    let minus_two: Vec<usize> = (0..n).filter(|&i| selfs[i].1 == -2).collect();
    let edges: i64 = minus_two
        .iter()
        .flat_map(|&i| minus_two.iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| i < j)
        .map(|(i, j)| adj[i][j])
        .sum();
    let max_degree = minus_two
        .iter()
        .map(|&i| {
            minus_two
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| adj[i][j])
                .sum::<i64>()
        })
        .max()
        .unwrap_or(0);
    let is_path = !minus_two.is_empty()
        && connected(&adj, &minus_two)
        && edges == minus_two.len() as i64 - 1
        && max_degree <= 2;

    let idx = graph.index();
    let section_pairings = graph
        .sections
        .iter()
        .map(|s| {
            let total = s.meets.iter().map(|c| m[idx[c.as_str()]]).sum();
            (s.name.clone(), total)
        })
        .collect();

    Ok(ModelReport {
        minimal: selfs.iter().all(|(_, s)| *s != -1),
        self_intersections: selfs,
        minus_two_chain: is_path.then_some(minus_two.len()),
        section_pairings,
        fibre_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A15: &str = include_str!("../../fixtures/a15_fiber.json");

    fn comp(name: &str, m: i64) -> Component {
        Component {
            name: name.into(),
            multiplicity: m,
        }
    }

    fn edge(a: &str, b: &str) -> Edge {
        Edge {
            a: a.into(),
            b: b.into(),
            weight: 1,
        }
    }

    #[test]
    fn a15_fibre() {
        let g = DualGraph::from_json(A15).unwrap();
        assert_eq!(g.components.len(), 16);
        let r = model_classification_checks(&g).unwrap();
        let e = r.self_intersections.iter().find(|(n, _)| n == "E").unwrap();
        assert_eq!(e.1, -4);
        assert_eq!(
            r.self_intersections
                .iter()
                .filter(|(_, s)| *s == -2)
                .count(),
            15
        );
        assert!(r.minimal);
        assert!(r.is_a_chain(15));
        assert_eq!(r.section_pairings, vec![("H".to_string(), 1)]);
        assert_eq!(r.fibre_square, 0);
        assert_eq!(g.sections[0].self_intersection, Some(-1));
    }

    #[test]
    fn degenerate_graphs() {
        let single = DualGraph {
            components: vec![comp("C", 1)],
            edges: vec![],
            sections: vec![],
        };
        assert_eq!(
            solve_self_intersections(&single).unwrap(),
            vec![("C".into(), 0)]
        );
        let pair = DualGraph {
            components: vec![comp("A", 1), comp("B", 1)],
            edges: vec![edge("A", "B")],
            sections: vec![],
        };
        assert_eq!(
            solve_self_intersections(&pair).unwrap(),
            vec![("A".into(), -1), ("B".into(), -1)]
        );
    }

    #[test]
    fn altered_multiplicity_is_inconsistent() {
        let mut g = DualGraph::from_json(A15).unwrap();
        g.components
            .iter_mut()
            .find(|c| c.name == "E")
            .unwrap()
            .multiplicity = 1;
        assert!(matches!(
            solve_self_intersections(&g),
            Err(GeometryError::InconsistentMultiplicities { .. })
        ));
    }

    #[test]
    fn appended_exceptional_leaf_is_not_minimal() {
        let mut g = DualGraph::from_json(A15).unwrap();
        g.components.push(comp("L", 1));
        g.edges.push(edge("L", "E1_1"));
        let r = model_classification_checks(&g).unwrap();
        assert_eq!(r.self_intersections.last().unwrap().1, -1);
        assert!(!r.minimal);
        assert_eq!(r.fibre_square, 0);
    }

    #[test]
    fn invalid_graphs() {
        let disconnected = DualGraph {
            components: vec![comp("A", 1), comp("B", 1)],
            edges: vec![],
            sections: vec![],
        };
        assert!(disconnected.validate().is_err());
        let common = DualGraph {
            components: vec![comp("A", 2)],
            edges: vec![],
            sections: vec![],
        };
        assert!(common.validate().is_err());
        let dangling = DualGraph {
            components: vec![comp("A", 1)],
            edges: vec![edge("A", "B")],
            sections: vec![],
        };
        assert!(dangling.validate().is_err());
    }
}
