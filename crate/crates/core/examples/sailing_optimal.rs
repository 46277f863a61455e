//! Optimal expected travel cost by value iteration.
//!
//! ```text
//! cargo run --release --example sailing_optimal -- 25 50 100
//! ```

use probpref::sailing::{value_iteration, Direction, SailingWorld};

fn main() -> probpref::Result<()> {
    let sizes: Vec<u32> = std::env::args().skip(1).map(|s| s.parse().expect("size")).collect();
    let sizes = if sizes.is_empty() { vec![25] } else { sizes };
    for size in sizes {
        let world = SailingWorld::new(size)?;
        let table = value_iteration(&world, 1e-9, 1_000_000)?;
        println!(
            "size {size:>3}: optimal cost {:8.3} after {} sweeps",
            table.start_value(),
            table.sweeps()
        );
        let first: Vec<String> = Direction::ALL
            .iter()
            .map(|w| format!("{w}->{}", table.action(&world.initial_state(*w)).expect("not at goal")))
            .collect();
        println!("  first leg by wind: {}", first.join(" "));
    }
    Ok(())
}
