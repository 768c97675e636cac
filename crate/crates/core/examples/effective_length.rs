//! Effective length at a perfect-transmission point, compared with the
//! group delay d/dk arg S12 of the oracle.
//!
//!     cargo run --example effective_length

use qws::admittance::{check_pt, effective_length, AdmittanceTriple, DEFAULT_TOL};
use qws::json::read_graph;
use qws::momentum::Momentum;
use qws::scattering::{sign_calibration, smatrix_oracle};
use qws::WeightedGraph;

fn group_delay(g: &WeightedGraph, k: &Momentum) -> qws::Result<f64> {
    let h = 1e-5;
    let a = smatrix_oracle(g, &k.shifted(h)?)?.s12();
    let b = smatrix_oracle(g, &k.shifted(-h)?)?.s12();
    Ok((a / b).arg() / (2.0 * h))
}

fn main() -> qws::Result<()> {
    let cal = sign_calibration();
    let data = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let star = read_graph(&data.join("star_gadget.json"))?;
    let double_t = read_graph(&data.join("double_t.json"))?;
    let cases = [
        ("5-edge path", WeightedGraph::path(5), "-pi/4"),
        ("star + double T", WeightedGraph::parallel_compose(&[star, double_t])?, "-pi/6"),
        ("parallel paths", read_graph(&data.join("example1.json"))?, "-pi/4"),
    ];
    for (name, g, k) in cases {
        let k = Momentum::parse(k)?;
        let t = AdmittanceTriple::of(&g)?;
        let r = check_pt(&t.at(&k), &k, DEFAULT_TOL, cal)?;
        let l = effective_length(&t, &k, &r)?;
        let exact = l.exact.map_or("-".to_string(), |q| q.to_string());
        println!("{name:<16} k = {k:<6} length = {exact:<10} group delay = {:.8}", group_delay(&g, &k)?);
    }
    Ok(())
}
