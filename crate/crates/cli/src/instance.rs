//! Problem-instance assembly: build the Hamiltonian from flags, then
//! precompute whatever exact reference data is tractable (MaxCut solution
//! sets by enumeration, ground energies by dense diagonalization) so the run
//! loop itself stays measurement-only.

use std::collections::BTreeSet;
use std::fs;

use anyhow::{Context, Result};
use fqa_core::oracle::{brute_force_maxcut, ground_energy, MAX_EIGEN_QUBITS};
use fqa_core::pauli::Observable;
use fqa_core::statevector::MAX_QUBITS;
use fqa_core::{
    annni_hamiltonian, load_graph, maxcut_hamiltonian, random_regular_graph, AnnniParams, Graph,
};

use crate::args::{InstanceArgs, ProblemKind};

pub struct Instance {
    pub problem: Observable,
    pub num_qubits: usize,
    pub solutions: Option<BTreeSet<usize>>,
    pub max_cut: Option<f64>,
    pub ground_energy: Option<f64>,
    /// key=value pairs echoed into the summary file.
    pub echo: Vec<(String, String)>,
}

pub fn build(args: &InstanceArgs) -> Result<Instance> {
    args.validate()?;
    match args.problem {
        ProblemKind::Maxcut => build_maxcut(args),
        ProblemKind::Annni => build_annni(args),
    }
}

fn load_or_generate_graph(args: &InstanceArgs) -> Result<(Graph, Vec<(String, String)>)> {
    if let Some(path) = &args.graph {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading graph file {}", path.display()))?;
        let graph =
            load_graph(&text).with_context(|| format!("parsing graph file {}", path.display()))?;
        let echo = vec![("graph".to_string(), path.display().to_string())];
        Ok((graph, echo))
    } else {
        let vertices = args
            .generate_regular
            .expect("validated: either --graph or --generate-regular");
        let graph = random_regular_graph(vertices, args.degree, args.seed)
            .context("generating a random regular graph")?;
        let echo = vec![
            ("generate_regular".to_string(), vertices.to_string()),
            ("degree".to_string(), args.degree.to_string()),
            ("seed".to_string(), args.seed.to_string()),
        ];
        Ok((graph, echo))
    }
}

fn build_maxcut(args: &InstanceArgs) -> Result<Instance> {
    let (graph, mut echo) = load_or_generate_graph(args)?;
    let num_qubits = graph.num_vertices();
    anyhow::ensure!(
        (1..=MAX_QUBITS).contains(&num_qubits),
        "maxcut instance has {num_qubits} vertices; the statevector supports 1..={MAX_QUBITS}"
    );
    echo.insert(0, ("problem".to_string(), "maxcut".to_string()));
    echo.push(("edges".to_string(), graph.edges().len().to_string()));

    // enumeration is feasible for every register the statevector can hold
    let solution = brute_force_maxcut(&graph).context("enumerating optimal cuts")?;
    let instance = Instance {
        problem: maxcut_hamiltonian(&graph),
        num_qubits,
        ground_energy: Some(-solution.max_value),
        max_cut: Some(solution.max_value),
        solutions: Some(solution.solutions),
        echo,
    };
    Ok(instance)
}

fn build_annni(args: &InstanceArgs) -> Result<Instance> {
    let length = args.length.expect("validated");
    let kappa = args.kappa.expect("validated");
    let g = args.g.expect("validated");
    let params = AnnniParams::new(length, kappa, g).context("building chain parameters")?;
    anyhow::ensure!(
        length <= MAX_QUBITS,
        "chain length {length} exceeds the statevector cap {MAX_QUBITS}"
    );
    let problem = annni_hamiltonian(&params);
    let ground = if length <= MAX_EIGEN_QUBITS {
        Some(ground_energy(&problem).context("diagonalizing the chain Hamiltonian")?)
    } else {
        None
    };
    Ok(Instance {
        problem,
        num_qubits: length,
        solutions: None,
        max_cut: None,
        ground_energy: ground,
        echo: vec![
            ("problem".to_string(), "annni".to_string()),
            ("L".to_string(), length.to_string()),
            ("kappa".to_string(), kappa.to_string()),
            ("g".to_string(), g.to_string()),
        ],
    })
}
