//! Infer the policy parameter from the travel-cost preference, then compare
//! the inferred policy with the greedy and optimal ones.

use std::sync::Arc;

use probpref::sailing::{
    default_max_steps, evaluate_policy, infer_theta, inferred_policy, point_estimate_policy, value_iteration,
    InferConfig, SailingPolicy, SailingWorld,
};

fn main() -> probpref::Result<()> {
    let size: u32 = std::env::args().nth(1).map(|s| s.parse().expect("size")).unwrap_or(25);
    let world = SailingWorld::new(size)?;
    let steps = default_max_steps(&world);

    let post = infer_theta(&world, &InferConfig { seed: 11, ..InferConfig::default() })?;
    println!(
        "log theta: mean {:.2}, 90% interval [{:.2}, {:.2}], acceptance {:.2}",
        post.mean(),
        post.quantile(0.05),
        post.quantile(0.95),
        post.acceptance_rate
    );

    let table = value_iteration(&world, 1e-9, 1_000_000)?;
    println!("{:<10} {:>9}", "optimal", format!("{:.2}", table.start_value()));
    let policies = [
        ("greedy", SailingPolicy::Greedy),
        ("optimal*", SailingPolicy::Optimal(Arc::new(table))),
        ("inferred", inferred_policy(&post)?),
        ("point", point_estimate_policy(&post)?),
    ];
    for (name, p) in &policies {
        let e = evaluate_policy(&world, p, 10_000, steps, 5)?;
        println!("{name:<10} {:>9.2} ± {:.2}", e.mean_cost, e.stderr);
    }
    println!("(* simulated)");
    Ok(())
}
