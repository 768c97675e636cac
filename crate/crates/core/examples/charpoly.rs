//! Characteristic polynomials of a graph and of its terminal-deleted
//! subgraphs, cross-checked against the Schwenk recursion and the
//! path-sum identity.
//!
//!     cargo run --example charpoly

use qws::charpoly::{charpoly, charpoly_schwenk, path_sum_poly, TerminalPolys, DEFAULT_ENUM_LIMIT};
use qws::WeightedGraph;

fn main() -> qws::Result<()> {
    // a 4-cycle with a chord and a pendant, terminals on opposite corners
    let g = WeightedGraph::from_int_edges(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (1, 3, 2), (2, 4, 1)], (0, 2))?;

    let phi = charpoly(&g);
    println!("phi_G(y)        = {phi}");
    println!("schwenk at v=0  = {}", charpoly_schwenk(&g, 0, DEFAULT_ENUM_LIMIT)?);

    let tp = TerminalPolys::of(&g)?;
    println!("phi_G\\1         = {}", tp.phi1);
    println!("phi_G\\2         = {}", tp.phi2);
    println!("phi_G\\1\\2       = {}", tp.phi12);

    let (a, b) = g.terminals();
    let ps = path_sum_poly(&g, a, b, DEFAULT_ENUM_LIMIT)?;
    println!("path sum        = {ps}");
    let lhs = &ps * &ps;
    let rhs = tp.transmission_poly();
    println!("path_sum^2 == phi1*phi2 - phi*phi12: {}", lhs == rhs);
    Ok(())
}
