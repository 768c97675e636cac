//! The scattering matrix of a two-terminal graph from the Schur-complement
//! oracle, from the characteristic-polynomial closed form and from the
//! admittance form, at an exact and a generic momentum.
//!
//!     cargo run --example scattering

use qws::admittance::{smatrix_from_admittance, AdmittanceTriple};
use qws::momentum::Momentum;
use qws::scattering::{sign_calibration, smatrix_closed2, smatrix_oracle};
use qws::WeightedGraph;

fn main() -> qws::Result<()> {
    let cal = sign_calibration();
    println!("closed-form sign sigma = {} ({})", cal.sigma, cal.calibrated_against);

    let g = WeightedGraph::from_int_edges(4, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1)], (0, 3))?;
    let t = AdmittanceTriple::of(&g)?;
    for label in ["-pi/4", "-1.1", "-2pi/3"] {
        let k = Momentum::parse(label)?;
        let oracle = smatrix_oracle(&g, &k)?;
        let closed = smatrix_closed2(&g, &k, cal)?;
        println!("k = {label}");
        println!("  S11 = {:.12}  S12 = {:.12}", oracle.s11(), oracle.s12());
        println!("  |S12|^2          = {:.12}", oracle.s12().norm_sqr());
        println!("  unitarity defect = {:.2e}", oracle.unitarity_defect());
        println!("  closed vs oracle = {:.2e}", closed.max_diff(&oracle));
        // y = -1 is a pole of the admittance of this graph
        match smatrix_from_admittance(&t.at(&k), &k, cal) {
            Ok(munu) => println!("  munu   vs oracle = {:.2e}", munu.max_diff(&oracle)),
            Err(e) => println!("  munu: {e}"),
        }
    }
    Ok(())
}
