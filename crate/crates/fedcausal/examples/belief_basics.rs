//! Log-domain belief primitives: normalization, overflow safety, MAP
//! estimates, and the log-belief-ratio round trip.
//!
//! ```text
//! cargo run --example belief_basics
//! ```

use fedcausal::belief::{Belief, HypothesisSpace};

fn main() {
    // Normalizing log weights is invariant to a common shift, so weights
    // around 1000 are as safe as weights around 0.
    let small = Belief::from_log_weights(&[0.0, 3f64.ln()]).unwrap();
    let large = Belief::from_log_weights(&[1000.0, 1000.0 + 3f64.ln()]).unwrap();
    println!("normalize [0, ln 3]          -> {:?}", small.masses());
    println!("normalize [1000, 1000+ln 3]  -> {:?}", large.masses());

    // Full support is enforced at construction: a belief that would drive
    // one hypothesis to (effectively) zero mass is rejected, not clamped.
    let err = Belief::from_log_weights(&[0.0, -800.0]).unwrap_err();
    println!("\nconstructing a degenerate belief fails: {err}");

    // Log-belief ratios measure each hypothesis against the true one; the
    // transform is exactly invertible.
    let space = HypothesisSpace::new(
        vec!["calm".into(), "breezy".into(), "stormy".into()],
        0,
    )
    .unwrap();
    let belief = Belief::from_masses(&[0.7, 0.2, 0.1]).unwrap();
    let lbr = belief.to_lbr(&space);
    println!("\nbelief {:?}", belief.masses());
    println!("log-belief ratios {:?}", lbr.values());
    let back = Belief::from_lbr(&lbr);
    println!("round trip        {:?}", back.masses());

    // MAP estimates break ties toward the lowest index, so rankings and
    // decision traces are reproducible.
    let tied = Belief::from_masses(&[0.4, 0.4, 0.2]).unwrap();
    println!(
        "\nMAP of {:?} -> hypothesis {} ({})",
        tied.masses(),
        tied.map_estimate(),
        space.labels()[tied.map_estimate()]
    );
}
