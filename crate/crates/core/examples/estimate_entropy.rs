//! Estimate the entropy of one braid with both estimators.
//!
//!     cargo run --example estimate_entropy -- "1 -2" 3

use braid_entropy::entropy::{estimate, EstimateParams, Estimator, Mode};
use braid_entropy::word::parse_braid;

fn main() -> braid_entropy::Result<()> {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "1 -2".into());
    let strands = args.next().map(|s| s.parse().expect("strand count")).unwrap_or(3);
    let word = parse_braid(&text, strands)?;

    for (estimator, eps) in [(Estimator::Cesaro, 1e-4), (Estimator::Ratio, 1e-8)] {
        let params = EstimateParams { eps, mode: Mode::Exact, ..Default::default() };
        let est = estimate(&word, estimator, &params)?;
        println!(
            "{estimator:?}: h = {:.10} after {} iterations (converged: {}, zero-entropy caveat: {})",
            est.value, est.iterations_used, est.converged, est.zero_entropy_caveat
        );
    }
    Ok(())
}
