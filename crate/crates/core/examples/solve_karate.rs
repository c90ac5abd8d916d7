//! Solves the karate-club network to proven optimality and prints the
//! bounds.
use modmax::exact::{branch_and_bound_max, SolveConfig};
use modmax::graph::{Graph, ModularityParams};

fn main() -> modmax::Result<()> {
    let g = Graph::parse_edge_list(include_str!("../tests/data/karate.txt"))?;
    let r = branch_and_bound_max(&g, &ModularityParams::default(), &SolveConfig::exact())?;
    println!(
        "Q* = {} ({:.6}), proven = {}, nodes = {}, {:.2?}",
        r.q_lb,
        r.q_lb_f64(),
        r.proven_optimal,
        r.nodes_explored,
        r.elapsed
    );
    Ok(())
}
