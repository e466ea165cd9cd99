//! Problem and driver Hamiltonians: the MaxCut Ising encoding, the periodic
//! ANNNI chain, and the transverse-field driver, plus graph-instance I/O and
//! a seeded regular-graph generator for benchmarks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::pauli::{Observable, Pauli, PauliString};

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("vertex index {index} out of range for {num_vertices} vertices")]
    VertexOutOfRange { index: usize, num_vertices: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) has non-finite weight")]
    NonFiniteWeight(usize, usize),
    #[error("a {degree}-regular graph on {num_vertices} vertices is impossible")]
    ImpossibleRegular { num_vertices: usize, degree: usize },
    #[error("regular-graph sampling did not produce a simple graph after {0} attempts")]
    SamplingExhausted(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphParseError {
    #[error("empty input: missing vertex-count header")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: GraphError,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum AnnniError {
    #[error("chain length must be at least 4, got {0}")]
    ChainTooShort(usize),
    #[error("coupling {name} must be finite, got {value}")]
    NonFiniteCoupling { name: &'static str, value: f64 },
}

/// Undirected weighted graph. Edges are stored with `u < v` and validated to
/// be loop-free and free of duplicate unordered pairs.
#[derive(Clone, PartialEq, Debug)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self, GraphError> {
        if num_vertices == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= num_vertices {
                return Err(GraphError::VertexOutOfRange {
                    index: u,
                    num_vertices,
                });
            }
            if v >= num_vertices {
                return Err(GraphError::VertexOutOfRange {
                    index: v,
                    num_vertices,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !w.is_finite() {
                return Err(GraphError::NonFiniteWeight(u, v));
            }
            let (a, b) = (u.min(v), u.max(v));
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            normalized.push((a, b, w));
        }
        Ok(Self {
            num_vertices,
            edges: normalized,
        })
    }

    /// Unit-weight graph from vertex pairs.
    pub fn unweighted(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(
            num_vertices,
            edges.iter().map(|&(u, v)| (u, v, 1.0)).collect(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }

    /// Cut weight of the bipartition encoded by the bits of `assignment`.
    pub fn cut_value(&self, assignment: usize) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| (assignment >> u) & 1 != (assignment >> v) & 1)
            .map(|&(_, _, w)| w)
            .sum()
    }
}

/// Parse the edge-list format: the first non-comment line is the vertex
/// count; each following non-comment line is `u v w`. `#` starts a comment
/// and blank lines are ignored.
pub fn load_graph(text: &str) -> Result<Graph, GraphParseError> {
    let mut num_vertices: Option<usize> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    for (line_index, raw) in text.lines().enumerate() {
        let line_number = line_index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match num_vertices {
            None => {
                let count = content
                    .parse::<usize>()
                    .map_err(|_| GraphParseError::Malformed {
                        line: line_number,
                        message: format!("expected vertex count, got {content:?}"),
                    })?;
                num_vertices = Some(count);
            }
            Some(_) => {
                let fields: Vec<&str> = content.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(GraphParseError::Malformed {
                        line: line_number,
                        message: format!(
                            "expected `u v w` (3 fields), got {} field(s)",
                            fields.len()
                        ),
                    });
                }
                let u = fields[0]
                    .parse::<usize>()
                    .map_err(|_| GraphParseError::Malformed {
                        line: line_number,
                        message: format!("vertex index {:?} is not an integer", fields[0]),
                    })?;
                let v = fields[1]
                    .parse::<usize>()
                    .map_err(|_| GraphParseError::Malformed {
                        line: line_number,
                        message: format!("vertex index {:?} is not an integer", fields[1]),
                    })?;
                let w = fields[2]
                    .parse::<f64>()
                    .map_err(|_| GraphParseError::Malformed {
                        line: line_number,
                        message: format!("weight {:?} is not a number", fields[2]),
                    })?;
                edges.push((u, v, w));
                edge_lines.push(line_number);
            }
        }
    }
    let num_vertices = num_vertices.ok_or(GraphParseError::MissingHeader)?;

    // Re-validate edge by edge so errors carry the offending line number.
    let mut partial: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
    for (edge, line) in edges.into_iter().zip(edge_lines) {
        partial.push(edge);
        if let Err(source) = Graph::new(num_vertices, partial.clone()) {
            return Err(GraphParseError::Invalid { line, source });
        }
    }
    Graph::new(num_vertices, partial).map_err(|source| GraphParseError::Invalid { line: 1, source })
}

/// Sample a simple `degree`-regular unweighted graph by the pairing model,
/// retrying until no self-loops or duplicate edges remain. Deterministic for
/// a given `(num_vertices, degree, seed)`.
pub fn random_regular_graph(
    num_vertices: usize,
    degree: usize,
    seed: u64,
) -> Result<Graph, GraphError> {
    if num_vertices == 0 {
        return Err(GraphError::NoVertices);
    }
    if degree >= num_vertices || !(num_vertices * degree).is_multiple_of(2) {
        return Err(GraphError::ImpossibleRegular {
            num_vertices,
            degree,
        });
    }
    if degree == 0 {
        return Graph::new(num_vertices, Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const MAX_ATTEMPTS: usize = 100_000;
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let mut stubs: Vec<usize> = (0..num_vertices)
            .flat_map(|v| std::iter::repeat_n(v, degree))
            .collect();
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        return Graph::unweighted(num_vertices, &edges);
    }
    Err(GraphError::SamplingExhausted(MAX_ATTEMPTS))
}

/// Parameters of the periodic ANNNI chain: nearest-neighbor ZZ bonds at unit
/// coupling, next-nearest-neighbor YY bonds at strength `kappa`, transverse
/// field `g`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct AnnniParams {
    pub length: usize,
    pub kappa: f64,
    pub g: f64,
    /// Nearest-neighbor coupling; fixed to 1, it defines the energy scale.
    pub j_coupling: f64,
}

impl AnnniParams {
    pub fn new(length: usize, kappa: f64, g: f64) -> Result<Self, AnnniError> {
        if length < 4 {
            return Err(AnnniError::ChainTooShort(length));
        }
        if !kappa.is_finite() {
            return Err(AnnniError::NonFiniteCoupling {
                name: "kappa",
                value: kappa,
            });
        }
        if !g.is_finite() {
            return Err(AnnniError::NonFiniteCoupling {
                name: "g",
                value: g,
            });
        }
        Ok(Self {
            length,
            kappa,
            g,
            j_coupling: 1.0,
        })
    }
}

/// Cut-counting Ising operator `-sum_e w_e/2 (1 - Z_u Z_v)`: constant `-W/2`
/// plus `w/2 Z_u Z_v` per edge. Its ground energy is minus the maximum cut.
pub fn maxcut_hamiltonian(graph: &Graph) -> Observable {
    let mut obs = Observable::zero(graph.num_vertices()).expect("graph has vertices");
    obs.add_constant(-graph.total_weight() / 2.0);
    for &(u, v, w) in graph.edges() {
        obs.add_term(
            PauliString::from_factors([(u, Pauli::Z), (v, Pauli::Z)]),
            w / 2.0,
        )
        .expect("edge indices validated by Graph");
    }
    obs
}

/// Periodic ANNNI chain
/// `-J sum_j (Z_j Z_{j+1} - kappa Y_j Y_{j+2} + g X_j)`
/// with site indices wrapping modulo the chain length. At length 4 the two
/// next-nearest bonds per pair coincide and merge to doubled coefficients.
pub fn annni_hamiltonian(params: &AnnniParams) -> Observable {
    let l = params.length;
    let j = params.j_coupling;
    let mut obs = Observable::zero(l).expect("length validated");
    for site in 0..l {
        let nn = (site + 1) % l;
        obs.add_term(
            PauliString::from_factors([(site, Pauli::Z), (nn, Pauli::Z)]),
            -j,
        )
        .expect("indices in range");
        if params.kappa != 0.0 {
            let nnn = (site + 2) % l;
            obs.add_term(
                PauliString::from_factors([(site, Pauli::Y), (nnn, Pauli::Y)]),
                j * params.kappa,
            )
            .expect("indices in range");
        }
        if params.g != 0.0 {
            obs.add_term(PauliString::single(site, Pauli::X), -j * params.g)
                .expect("indices in range");
        }
    }
    obs
}

/// Transverse-field driver `sum_j X_j`.
pub fn driver_hamiltonian(num_qubits: usize) -> Observable {
    assert!(num_qubits >= 1, "driver needs at least one qubit");
    Observable::from_terms(
        num_qubits,
        (0..num_qubits).map(|q| (PauliString::single(q, Pauli::X), 1.0)),
    )
    .expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn maxcut_single_edge_terms() {
        let graph = Graph::new(2, vec![(0, 1, 1.0)]).unwrap();
        let obs = maxcut_hamiltonian(&graph);
        assert_eq!(obs.constant(), -0.5);
        assert_eq!(obs.num_terms(), 1);
        let zz = PauliString::from_factors([(0, Pauli::Z), (1, Pauli::Z)]);
        assert_eq!(obs.coefficient(&zz), 0.5);
        // eigenvalues on basis states: 0, -1, -1, 0
        let m = obs.to_dense().unwrap();
        for (index, expected) in [0.0, -1.0, -1.0, 0.0].into_iter().enumerate() {
            assert!((m[(index, index)].re - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn maxcut_empty_edge_set_is_zero() {
        let graph = Graph::new(3, vec![]).unwrap();
        let obs = maxcut_hamiltonian(&graph);
        assert!(obs.is_zero());
    }

    #[test]
    fn maxcut_basis_expectation_is_minus_cut() {
        let graph = k3();
        let obs = maxcut_hamiltonian(&graph);
        let m = obs.to_dense().unwrap();
        for assignment in 0..8usize {
            let energy = m[(assignment, assignment)].re;
            assert!(
                (energy + graph.cut_value(assignment)).abs() < 1e-12,
                "assignment {assignment:03b}"
            );
        }
    }

    #[test]
    fn annni_term_count_at_length_eight() {
        let params = AnnniParams::new(8, 0.3, 0.7).unwrap();
        let obs = annni_hamiltonian(&params);
        assert_eq!(obs.num_terms(), 24);
        assert_eq!(obs.constant(), 0.0);
    }

    #[test]
    fn annni_length_four_merges_wrapped_bonds() {
        // j+2 bonds coincide pairwise at length 4, doubling the coefficient
        let params = AnnniParams::new(4, 0.5, 0.0).unwrap();
        let obs = annni_hamiltonian(&params);
        let yy = PauliString::from_factors([(0, Pauli::Y), (2, Pauli::Y)]);
        assert_eq!(obs.coefficient(&yy), 1.0);
        assert_eq!(obs.num_terms(), 4 + 2);
    }

    #[test]
    fn annni_coefficient_signs() {
        let params = AnnniParams::new(6, 0.5, 0.25).unwrap();
        let obs = annni_hamiltonian(&params);
        let zz = PauliString::from_factors([(0, Pauli::Z), (1, Pauli::Z)]);
        let yy = PauliString::from_factors([(0, Pauli::Y), (2, Pauli::Y)]);
        let x = PauliString::single(0, Pauli::X);
        assert_eq!(obs.coefficient(&zz), -1.0);
        assert_eq!(obs.coefficient(&yy), 0.5);
        assert_eq!(obs.coefficient(&x), -0.25);
    }

    #[test]
    fn annni_rejects_short_chains() {
        assert!(matches!(
            AnnniParams::new(3, 0.0, 0.0),
            Err(AnnniError::ChainTooShort(3))
        ));
    }

    #[test]
    fn driver_is_sum_of_x() {
        let obs = driver_hamiltonian(3);
        assert_eq!(obs.num_terms(), 3);
        for q in 0..3 {
            assert_eq!(obs.coefficient(&PauliString::single(q, Pauli::X)), 1.0);
        }
    }

    #[test]
    fn load_graph_triangle() {
        let graph = load_graph("3\n0 1 1.0\n1 2 1.0\n0 2 1.0\n").unwrap();
        assert_eq!(graph, k3());
    }

    #[test]
    fn load_graph_weighted_edge_and_comments() {
        let graph = load_graph("# instance\n2\n0 1 2.5  # the only edge\n").unwrap();
        assert_eq!(graph.edges(), &[(0, 1, 2.5)]);
    }

    #[test]
    fn load_graph_out_of_range_vertex() {
        let err = load_graph("2\n0 2 1.0\n").unwrap_err();
        assert_eq!(
            err,
            GraphParseError::Invalid {
                line: 2,
                source: GraphError::VertexOutOfRange {
                    index: 2,
                    num_vertices: 2
                }
            }
        );
    }

    #[test]
    fn load_graph_reports_malformed_lines() {
        let err = load_graph("3\n0 1\n").unwrap_err();
        assert!(matches!(err, GraphParseError::Malformed { line: 2, .. }));
        let err = load_graph("3\n0 1 abc\n").unwrap_err();
        assert!(matches!(err, GraphParseError::Malformed { line: 2, .. }));
        let err = load_graph("").unwrap_err();
        assert_eq!(err, GraphParseError::MissingHeader);
    }

    #[test]
    fn load_graph_rejects_duplicates_with_line() {
        let err = load_graph("3\n0 1 1.0\n1 0 1.0\n").unwrap_err();
        assert_eq!(
            err,
            GraphParseError::Invalid {
                line: 3,
                source: GraphError::DuplicateEdge(0, 1)
            }
        );
    }

    #[test]
    fn regular_graph_has_uniform_degree() {
        let graph = random_regular_graph(10, 3, 42).unwrap();
        let mut degrees = [0usize; 10];
        for &(u, v, _) in graph.edges() {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        assert!(degrees.iter().all(|&d| d == 3));
        assert_eq!(graph.edges().len(), 15);
    }

    #[test]
    fn regular_graph_is_deterministic_per_seed() {
        let a = random_regular_graph(8, 3, 7).unwrap();
        let b = random_regular_graph(8, 3, 7).unwrap();
        assert_eq!(a, b);
        let c = random_regular_graph(8, 3, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn regular_graph_rejects_odd_total_degree() {
        assert!(matches!(
            random_regular_graph(5, 3, 0),
            Err(GraphError::ImpossibleRegular { .. })
        ));
    }

    #[test]
    fn graph_validation() {
        assert!(matches!(
            Graph::new(2, vec![(0, 0, 1.0)]),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::new(2, vec![(0, 1, f64::INFINITY)]),
            Err(GraphError::NonFiniteWeight(0, 1))
        ));
        assert!(matches!(Graph::new(0, vec![]), Err(GraphError::NoVertices)));
    }
}
