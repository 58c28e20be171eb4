//! Entropy of a braid next to its inverse, mirror, flip, rotation,
//! embedding and square.
//!
//!     cargo run --example symmetry_check -- "1 -2 3" 4

use braid_entropy::entropy::{estimate_ratio, symmetry_check, Mode};
use braid_entropy::word::parse_braid;

fn main() -> braid_entropy::Result<()> {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "1 -2 3".into());
    let strands = args.next().map(|s| s.parse().expect("strand count")).unwrap_or(4);
    let word = parse_braid(&text, strands)?;

    let report = symmetry_check(&word, 1e-8)?;
    for e in &report.entries {
        println!("{:>9}  {:<24} B_{}  h = {:.10}", e.label, e.word.to_string(), e.word.strands(), e.estimate.value);
    }
    println!("largest pairwise deviation: {:.2e}", report.max_deviation);

    let h = report.entries[0].estimate.value;
    let sq = estimate_ratio(&word.power(2), 1e-8, 5, 10_000, Mode::Exact)?;
    println!("h(b^2) - 2 h(b) = {:.2e}", sq.value - 2.0 * h);
    println!("canonical form: {}", word.free_reduce().canonical_form());
    Ok(())
}
