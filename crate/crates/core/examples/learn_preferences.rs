//! Alice watches Bob for three evenings and infers whether he wants to meet.
//!
//! Two scenarios: Bob shows up at bar 1 every time, or at bar 2 every time.
//! Posterior samples of Bob's meeting log-odds are paired by index; in most
//! pairs the first scenario should suggest a stronger wish to meet.

use probpref::fable::{count_ordered, paired_learning, AgentPreferences, Bar, LearnConfig};

fn main() -> probpref::Result<()> {
    let alice = AgentPreferences::new("Alice", 0.55, 0.9)?;
    let config = LearnConfig { seed: 7, ..LearnConfig::default() };
    let pairs = paired_learning(&alice, &[Bar::First; 3], &[Bar::Second; 3], &config)?;

    let mean = |f: fn(&probpref::fable::LogOddsPair) -> f64| pairs.iter().map(f).sum::<f64>() / pairs.len() as f64;
    println!("mean log-odds after bar 1 x3: {:+.2}", mean(|p| p.first));
    println!("mean log-odds after bar 2 x3: {:+.2}", mean(|p| p.second));
    println!("ordered pairs: {} / {}", count_ordered(&pairs), pairs.len());
    Ok(())
}
