//! The two-bar evening through the generic two-agent MDP interface: unroll
//! episodes, write one as CSV, and recover an agent's choice from the
//! generic one-step posterior.

use probpref::fable::mdp::{posterior_sampler, BarAgentModel, BarChoiceMdp, BarState};
use probpref::fable::{AgentPreferences, AnalyticalModel};
use probpref::mdp::{one_step_action_posterior, unroll_seeded, write_trajectory_csv, TwoAgentMdp, Turn};

fn main() -> probpref::Result<()> {
    let alice = AgentPreferences::new("Alice", 0.55, 0.9)?;
    let bob = AgentPreferences::new("Bob", 0.55, 0.9)?;
    let depth = 3;
    let mdp = BarChoiceMdp;

    let mut met = 0;
    let n = 2000;
    for seed in 0..n {
        let mut b = posterior_sampler(&bob, &alice, depth);
        let u = unroll_seeded(
            &mdp,
            posterior_sampler(&alice, &bob, depth),
            move |s, _, rng| b(s, rng),
            Turn::Simultaneous,
            1,
            seed,
        )?;
        if let BarState::Done(o) = u.final_state() {
            met += o.met as usize;
        }
        if seed == 0 {
            write_trajectory_csv(&mdp, &u.trajectory, std::io::stdout())?;
        }
    }
    println!("met on {met} of {n} evenings");

    // one level of deliberation by the generic machinery
    let q = AnalyticalModel::new().p_first(&bob, &alice, depth - 1);
    let model = BarAgentModel { prefs: alice.clone(), belief_q: q };
    let post = one_step_action_posterior(&model, &BarState::Evening, Turn::Simultaneous, |a, b| {
        mdp.transition(&BarState::Evening, &mdp.compose(a, b))
    })?;
    println!(
        "generic posterior P(bar 1) = {:.6}, recursion at depth {depth} = {:.6}",
        post.weights()[0],
        AnalyticalModel::new().p_first(&alice, &bob, depth)
    );
    Ok(())
}
