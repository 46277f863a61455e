//! Sampling-based deliberation next to the exact recursion.
//!
//! Each depth runs a Metropolis-Hastings chain over the agent's own choice,
//! stochastically conditioned on the other agent's choice distribution one
//! level down.

use probpref::fable::{AnalyticalModel, McChoiceModel, Preset};

fn main() -> probpref::Result<()> {
    let iters = 5000;
    for preset in Preset::ALL {
        let (alice, bob) = preset.agents();
        let mut exact = AnalyticalModel::new();
        let mut mc = McChoiceModel::new(iters, 42)?;
        println!("{preset}");
        for depth in 0..=5 {
            let e = exact.p_first(&alice, &bob, depth);
            let m = mc.choice(&alice, &bob, depth)?;
            println!(
                "  depth {depth}: exact {e:.4}  mc {:.4} ± {:.4}  diff {:+.4}",
                m.p_first,
                m.stderr,
                m.p_first - e
            );
        }
    }
    Ok(())
}
