//! Highest-entropy braid words of each length, up to symmetry.
//!
//!     cargo run --release --example max_entropy_survey -- 5 3 6

use braid_entropy::search::{max_entropy_survey, SurveyParams};

fn main() -> braid_entropy::Result<()> {
    let nums: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("integer argument")).collect();
    let max_length = nums.first().copied().unwrap_or(4);
    let strands_min = nums.get(1).copied().unwrap_or(3);
    let strands_max = nums.get(2).copied().unwrap_or(5);

    let table = max_entropy_survey(&SurveyParams::new(max_length, strands_min, strands_max))?;
    for row in &table.rows {
        println!(
            "length {}: {} words examined, {} symmetric copies and {} embeddings skipped",
            row.length, row.examined, row.pruned_by_symmetry, row.pruned_by_embedding
        );
        for r in &row.maximizers {
            println!("  max  {:<16} B_{}  h = {:.9}  alternating: {}", r.word.to_string(), r.strands, r.entropy, r.alternating);
        }
    }
    for w in &table.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
