//! Two tempting but wrong ways to reason about another agent, and the reward
//! they actually earn compared with what they claim.

use probpref::mistakes::{future_as_present_iterated, future_as_present_report, single_sample_nesting_policy};

fn main() -> probpref::Result<()> {
    for r in [future_as_present_report(0.55, 0.55)?, single_sample_nesting_policy(0.5, 0.55)?] {
        println!("{} ({})", r.model_name, r.parameters);
        println!("  policy   {:.5}", r.policy);
        println!("  claimed  {:.5}", r.claimed_value);
        println!("  true     {:.5}", r.true_value);
        println!("  rational {:.5}", r.rational_value);
    }

    // feeding the posterior back as the belief runs away to certainty
    let drift = future_as_present_iterated(0.55, 0.55, 8);
    println!("iterated: {drift:.4?}");
    Ok(())
}
