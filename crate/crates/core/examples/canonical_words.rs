//! List the canonical representatives of braid words of a given length,
//! one per orbit under inversion, mirroring, flipping and rotation.
//!
//!     cargo run --example canonical_words -- 3 3

use braid_entropy::search::{enumerate, word_space_size};

fn main() {
    let nums: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("integer argument")).collect();
    let strands = nums.first().copied().unwrap_or(3);
    let length = nums.get(1).copied().unwrap_or(3);

    let reps: Vec<_> = enumerate(strands, length).collect();
    for w in &reps {
        println!("{w}");
    }
    println!("{} classes out of {} words", reps.len(), word_space_size(strands, length));
}
