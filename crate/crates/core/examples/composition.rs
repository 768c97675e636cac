//! Parallel composition adds admittance triples; series composition follows
//! the shared-vertex rule. Both are checked against the composed graph.
//!
//!     cargo run --example composition

use qws::admittance::{parallel_add, series_combine, AdmittanceTriple, SeriesPairing};
use qws::WeightedGraph;

fn main() -> qws::Result<()> {
    let a = WeightedGraph::from_int_edges(4, &[(0, 2, 1), (2, 1, 2), (2, 3, 1), (0, 3, -1)], (0, 1))?;
    let b = WeightedGraph::from_int_edges(3, &[(0, 2, 1), (2, 1, 1), (0, 1, 3)], (0, 1))?;
    let (ta, tb) = (AdmittanceTriple::of(&a)?, AdmittanceTriple::of(&b)?);

    let par = AdmittanceTriple::of(&WeightedGraph::parallel_compose(&[a.clone(), b.clone()])?)?;
    let sum = parallel_add(&[ta.clone(), tb.clone()])?;
    println!("parallel: nu = {}", par.nu);
    println!("  matches the sum of triples: {}", (par.mu1 == sum.mu1, par.mu2 == sum.mu2, par.nu == sum.nu) == (true, true, true));

    let ser = AdmittanceTriple::of(&WeightedGraph::series_compose(&a, &b)?)?;
    for pairing in [SeriesPairing::Printed, SeriesPairing::Swapped] {
        let c = series_combine(&ta, &tb, pairing)?;
        println!("series ({pairing:?}): mu1 {} mu2 {} nu {}", c.mu1 == ser.mu1, c.mu2 == ser.mu2, c.nu == ser.nu);
    }
    Ok(())
}
