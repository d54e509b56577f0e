//! Rooted graphs, the four-vertex catalog, parametric families and adjacency spectra.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;

/// Undirected simple graph whose vertex 0 is the reference mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    name: String,
    vertices: usize,
    /// Normalised `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
}

impl RootedGraph {
    pub fn new(
        name: impl Into<String>,
        vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{vertices}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self {
            name: name.into(),
            vertices,
            edges: set.into_iter().collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// 0/1 adjacency matrix, row-major.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let n = self.vertices;
        let mut a = vec![0.0; n * n];
        for &(u, v) in &self.edges {
            a[u * n + v] = 1.0;
            a[v * n + u] = 1.0;
        }
        a
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                let next = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Graph on `{1, ..., L-1}` relabelled to `{0, ..., L-2}`, dropping every root edge.
    pub fn subgraph_without_root(&self) -> Result<RootedGraph> {
        if self.vertices < 2 {
            return Err(Error::InvalidGraph(
                "removing the root needs at least two vertices".into(),
            ));
        }
        RootedGraph::new(
            format!("{}-{{0}}", self.name),
            self.vertices - 1,
            self.edges
                .iter()
                .filter(|&&(u, _)| u != 0)
                .map(|&(u, v)| (u - 1, v - 1)),
        )
    }

    pub fn adjacency_spectrum(&self) -> SpectrumReport {
        let eigenvalues = symmetric_eigen(&self.adjacency_matrix(), self.vertices).values;
        let lambda_max = *eigenvalues.last().expect("graph has at least one vertex");
        SpectrumReport {
            eigenvalues,
            lambda_max,
            one_particle_ground_energy: -lambda_max,
        }
    }
}

impl fmt::Display for RootedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (L={}):", self.name, self.vertices)?;
        for (u, v) in &self.edges {
            write!(f, " {u}-{v}")?;
        }
        Ok(())
    }
}

/// Adjacency eigenvalues, ascending.
///
/// `one_particle_ground_energy` is the lowest eigenvalue of the hopping
/// operator `-A` at unit amplitude, i.e. minus the spectral radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
    pub one_particle_ground_energy: f64,
}

pub const CATALOG_IDS: std::ops::RangeInclusive<u32> = 3..=13;

/// Four-vertex rooted graph `Γ_id`, `id` in `3..=13`.
///
/// Ids 3-5 have root degree 1, 6-9 degree 2 and 10-13 degree 3. Within each
/// set the sub-graph left after deleting the root gains links with the id.
pub fn catalog_graph(id: u32) -> Result<RootedGraph> {
    const STAR: [(usize, usize); 3] = [(0, 1), (0, 2), (0, 3)];
    let edges: Vec<(usize, usize)> = match id {
        3 => vec![(0, 1), (1, 2), (1, 3)],
        4 => vec![(0, 1), (1, 2), (2, 3)],
        5 => vec![(0, 1), (1, 2), (1, 3), (2, 3)],
        6 => vec![(0, 1), (0, 2), (1, 3)],
        7 => vec![(0, 1), (0, 2), (1, 2), (1, 3)],
        8 => vec![(0, 1), (0, 2), (1, 3), (2, 3)],
        9 => vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
        10 => STAR.to_vec(),
        11 => [&STAR[..], &[(1, 2)]].concat(),
        12 => [&STAR[..], &[(1, 2), (1, 3)]].concat(),
        13 => return Ok(complete_graph(4)?.with_name("G13")),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "catalog id {id} outside 3..=13"
            )))
        }
    };
    RootedGraph::new(format!("G{id}"), 4, edges)
}

pub fn complete_graph(vertices: usize) -> Result<RootedGraph> {
    if vertices < 2 {
        return Err(Error::InvalidArgument(format!(
            "complete graph needs L >= 2, got {vertices}"
        )));
    }
    RootedGraph::new(
        format!("K{vertices}"),
        vertices,
        (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v))),
    )
}

pub fn dimer() -> RootedGraph {
    RootedGraph::new("dimer", 2, [(0, 1)]).expect("static edge list")
}

/// Root hanging off vertex 1 of a complete graph on `{1, ..., L-1}`.
pub fn pendant_complete(vertices: usize) -> Result<RootedGraph> {
    if vertices < 3 {
        return Err(Error::InvalidArgument(format!(
            "pendant-complete graph needs L >= 3, got {vertices}"
        )));
    }
    RootedGraph::new(
        format!("pendantK{}", vertices - 1),
        vertices,
        std::iter::once((0, 1))
            .chain((1..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))),
    )
}

/// Parse the plain-text edge-list format.
///
/// ```text
/// # comment
/// vertices 4
/// 0 1
/// 1 2
/// ```
pub fn parse_graph(text: &str) -> Result<RootedGraph> {
    parse_graph_named(text, "file")
}

pub fn parse_graph_named(text: &str, name: &str) -> Result<RootedGraph> {
    let mut vertices: Option<usize> = None;
    let mut edges = BTreeSet::new();
    let err = |line: usize, message: String| Error::GraphParse { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(l) = vertices else {
            match fields.as_slice() {
                ["vertices", n] => {
                    let n: usize = n
                        .parse()
                        .map_err(|_| err(line_no, format!("bad vertex count '{n}'")))?;
                    if n == 0 {
                        return Err(err(line_no, "vertex count must be positive".into()));
                    }
                    vertices = Some(n);
                    continue;
                }
                _ => return Err(err(line_no, format!("expected 'vertices L', got '{line}'"))),
            }
        };
        let [u, v] = fields.as_slice() else {
            return Err(err(line_no, format!("expected 'u v', got '{line}'")));
        };
        let parse = |s: &str| -> Result<usize> {
            let x: usize = s
                .parse()
                .map_err(|_| err(line_no, format!("bad vertex index '{s}'")))?;
            if x >= l {
                return Err(err(line_no, format!("vertex {x} out of range 0..{l}")));
            }
            Ok(x)
        };
        let (u, v) = (parse(u)?, parse(v)?);
        if u == v {
            return Err(err(line_no, format!("self-loop on vertex {u}")));
        }
        if !edges.insert((u.min(v), u.max(v))) {
            return Err(err(line_no, format!("duplicate edge ({u}, {v})")));
        }
    }

    let l = vertices.ok_or_else(|| err(0, "missing 'vertices L' header".into()))?;
    RootedGraph::new(name, l, edges)
}
