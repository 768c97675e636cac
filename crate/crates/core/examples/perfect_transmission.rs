//! Perfect-transmission tests: the regular branch on a parallel composite,
//! the residue conditions at a pole, and perfect reflection on ν = 0.
//!
//!     cargo run --example perfect_transmission

use qws::admittance::{check_pr, check_pt, check_pt_pole, AdmittanceTriple, DEFAULT_TOL};
use qws::json::read_graph;
use qws::momentum::Momentum;
use qws::scattering::{sign_calibration, smatrix_oracle};
use qws::WeightedGraph;

fn main() -> qws::Result<()> {
    let cal = sign_calibration();
    let data = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let k = Momentum::literal("-pi/4");

    // four paths of length 3 and nine of length 5 between the same terminals
    let g = read_graph(&data.join("example1.json"))?;
    let t = AdmittanceTriple::of(&g)?;
    let r = check_pt(&t.at(&k), &k, DEFAULT_TOL, cal)?;
    let s = smatrix_oracle(&g, &k)?;
    println!("parallel paths: {} (exact: {}), theta = {:.10}", r.status.as_str(), r.exact, r.theta.unwrap());
    println!("  printed-formula phase {:?}", r.phase_printed_exact.as_ref().map(|p| p.to_string()));
    println!("  oracle S12 = {:.12}, |S12| = {:.15}", s.s12(), s.s12().norm());

    // the 4-edge path has a pole at sqrt(2)
    let p4 = WeightedGraph::path(4);
    let r = check_pt_pole(&AdmittanceTriple::of(&p4)?, &k, cal)?;
    println!("4-edge path: {} on the {} branch, phase {:?}", r.status.as_str(), r.branch.as_str(), r.phase);
    println!("  oracle S12 = {:.10}", smatrix_oracle(&p4, &k)?.s12());

    // a cycle of length 8 through both terminals
    let cycle = WeightedGraph::parallel_compose(&[WeightedGraph::path(3), WeightedGraph::path(5)])?;
    let p = AdmittanceTriple::of(&cycle)?.at(&k);
    let r = check_pr(&p, &k, DEFAULT_TOL, cal)?;
    println!("8-cycle: {}, |S11| = {:.15}", r.status.as_str(), smatrix_oracle(&cycle, &k)?.s11().norm());
    Ok(())
}
