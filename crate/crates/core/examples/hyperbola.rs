//! Writes samples of the perfect-transmission hyperbola as CSV, with the
//! bare paths overlaid as comments.
//!
//!     cargo run --example hyperbola > hyperbola.csv

use qws::admittance::{AdmittanceTriple, PAPER_NU_SIGN};
use qws::designer::{hyperbola_csv, hyperbola_samples};
use qws::momentum::Momentum;
use qws::WeightedGraph;

fn main() -> qws::Result<()> {
    let k = Momentum::literal("-pi/4");
    print!("{}", hyperbola_csv(&hyperbola_samples(&k, 64)?));
    for len in 1..=7 {
        if let Some([mu, _, nu]) = AdmittanceTriple::of(&WeightedGraph::path(len))?.at(&k).float_values() {
            println!("# path {len}: mu = {mu:.6}, nu = {:.6}", nu * PAPER_NU_SIGN as f64);
        }
    }
    Ok(())
}
