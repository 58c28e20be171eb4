//! Print the first iterates of a braid acting on the reference lamination,
//! with exact coordinates and reduced intersection counts.
//!
//!     cargo run --example orbit_trace -- "1 -2" 3 8

use braid_entropy::dynnikov::reduced_intersection_count;
use braid_entropy::entropy::orbit_with_coords;
use braid_entropy::word::parse_braid;

fn main() -> braid_entropy::Result<()> {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "1 -2".into());
    let strands = args.next().map(|s| s.parse().expect("strand count")).unwrap_or(3);
    let iters = args.next().map(|s| s.parse().expect("iteration count")).unwrap_or(8);
    let word = parse_braid(&text, strands)?;

    let (trace, coords) = orbit_with_coords(&word, iters, 10_000)?;
    println!("{:>4} {:>12} {:>10} {:>10}  coords", "m", "count", "cesaro", "ratio");
    for (e, c) in trace.entries.iter().zip(&coords) {
        println!(
            "{:>4} {:>12} {:>10.6} {:>10.6}  {}",
            e.m,
            reduced_intersection_count(c),
            e.cesaro,
            e.ratio,
            c
        );
    }
    Ok(())
}
