//! Compare the renormalized floating-point engine with exact integers.

use std::time::Instant;

use braid_entropy::entropy::{orbit, Mode};
use braid_entropy::word::parse_braid;

fn main() -> braid_entropy::Result<()> {
    let iters = 2000;
    for (text, strands) in [("1 -2", 3), ("1 -2 3 -4", 5), ("1 -2 -3 2 -1 3", 4)] {
        let word = parse_braid(text, strands)?;
        let t = Instant::now();
        let exact = orbit(&word, iters, Mode::Exact)?;
        let t_exact = t.elapsed();
        let t = Instant::now();
        let float = orbit(&word, iters, Mode::Float)?;
        let t_float = t.elapsed();

        let worst = exact
            .entries
            .iter()
            .zip(&float.entries)
            .map(|(e, f)| (e.log_count - f.log_count).abs() / e.log_count)
            .fold(0.0, f64::max);
        println!(
            "{text:>16} in B_{strands}: ln count at m={iters} is {:.6}, worst relative gap {worst:.1e}, exact {t_exact:?}, float {t_float:?}",
            exact.entries.last().unwrap().log_count
        );
    }
    Ok(())
}
