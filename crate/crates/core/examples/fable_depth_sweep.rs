//! Exact choice probabilities for both agents as deliberation deepens.
//!
//! ```text
//! cargo run --example fable_depth_sweep -- avoid-strong 12
//! ```

use probpref::fable::{analytical_sequence, Preset};

fn main() -> probpref::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset: Preset = args.next().as_deref().unwrap_or("meet-symmetric").parse()?;
    let depth: usize = args.next().map(|d| d.parse().expect("depth")).unwrap_or(10);

    let (alice, bob) = preset.agents();
    let a = analytical_sequence(&alice, &bob, depth);
    let b = analytical_sequence(&bob, &alice, depth);

    println!("{preset}: Alice p1={} pm={}, Bob p1={} pm={}", alice.p1, alice.pm, bob.p1, bob.pm);
    println!("{:>5} {:>10} {:>10}", "depth", "Alice", "Bob");
    for d in 0..=depth {
        println!("{d:>5} {:>10.6} {:>10.6}", a[d], b[d]);
    }
    Ok(())
}
