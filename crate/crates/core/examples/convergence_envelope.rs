//! How fast the Cesàro sequence approaches the entropy: the error scaled
//! by m / ln m at a few checkpoints, and its supremum.

use braid_entropy::analysis::{fit_envelope, reference_entropy};
use braid_entropy::entropy::{orbit, Mode};
use braid_entropy::word::parse_braid;

fn main() -> braid_entropy::Result<()> {
    for (text, strands) in [("1 -2", 3), ("1 1 -2", 3), ("1 -2 3 -4", 5)] {
        let word = parse_braid(text, strands)?;
        let h = reference_entropy(&word)?;
        let fit = fit_envelope(&orbit(&word, 1000, Mode::Exact)?, h)?;
        println!("{text} in B_{strands}: h = {h:.10}, C = {:.4}", fit.c_sup);
        for m in [10, 100, 1000] {
            let p = fit.per_m_errors[m - 1];
            println!("  m = {m:>4}  |c_m - h| = {:.3e}  scaled = {:.4}", p.error, p.normalized.unwrap());
        }
        println!("  max/min of scaled error on [10, 1000]: {:.3}", fit.spread_ratio(10, 1000).unwrap());
    }
    Ok(())
}
