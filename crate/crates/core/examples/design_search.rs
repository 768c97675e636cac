//! Searches parallel combinations of paths for perfect transmission at
//! k = -pi/4 and prints each hit with its oracle certificate.
//!
//!     cargo run --release --example design_search [max_total]

use qws::designer::{load_library, search, CompositionQuery};
use qws::momentum::Momentum;

fn main() -> qws::Result<()> {
    let max_total = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(13);
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/paths");
    let k = Momentum::literal("-pi/4");
    let lib = load_library(&[dir], &k, false)?;
    for w in &lib.warnings {
        eprintln!("warning: {w}");
    }
    let q = CompositionQuery { max_total_blocks: max_total, max_per_block: max_total, ..Default::default() };
    let out = search(&lib, &q)?;
    println!("{} solutions with at most {max_total} blocks ({} half-partials)", out.results.len(), out.partials);
    for r in out.results.iter().take(20) {
        let counts: Vec<String> = r.counts.iter().map(|(n, c)| format!("{c}x{n}")).collect();
        let s12 = r.certificate.as_ref().map_or(f64::NAN, |s| s.s12().norm());
        println!(
            "{:<24} theta = {:+.6}  length = {:>8.4}  |S12| = {:.12}",
            counts.join(" + "),
            r.pt.theta.unwrap(),
            r.effective_length.as_ref().map_or(f64::NAN, |l| l.value),
            s12
        );
    }
    Ok(())
}
