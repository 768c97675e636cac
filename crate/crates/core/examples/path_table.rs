//! Admittance values of bare paths at k = -pi/4, in the display sign
//! convention where the one-edge path sits at (0, -1). Lengths 4 and 8 have
//! a pole at y = sqrt(2); their residues are shown instead.
//!
//!     cargo run --example path_table

use qws::admittance::{AdmittanceTriple, PAPER_NU_SIGN};
use qws::momentum::Momentum;
use qws::{Quad, WeightedGraph};

fn main() -> qws::Result<()> {
    let k = Momentum::literal("-pi/4");
    let sign = Quad::from(PAPER_NU_SIGN as i64);
    println!("{:>3}  {:>12}  {:>12}", "len", "mu", "nu");
    for len in 1..=8 {
        let t = AdmittanceTriple::of(&WeightedGraph::path(len))?;
        let p = t.at(&k);
        match p.exact_values() {
            Some([mu, _, nu]) => println!("{len:>3}  {:>12}  {:>12}", mu.to_string(), (nu * sign.clone()).to_string()),
            None => {
                let l = p.laurent.as_ref().unwrap();
                let (rm, rn) = (l[0].residue(), l[2].residue() * sign.clone());
                println!("{len:>3}  {:>12}  {:>12}   (residues {rm}, {rn})", inf(&rm), inf(&rn));
            }
        }
    }
    Ok(())
}

fn inf(residue: &Quad) -> &'static str {
    if residue.signum() > 0 {
        "inf"
    } else {
        "-inf"
    }
}
