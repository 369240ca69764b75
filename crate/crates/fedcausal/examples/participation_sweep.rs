//! Causal impact of the intervened agent as a function of its
//! participation probability. Under the symmetric protocol more
//! participation means more impact; under the asymmetric protocol with a
//! uniform intervention the impact does not depend on it at all.
//!
//! ```text
//! cargo run --release --example participation_sweep
//! ```

use fedcausal::config::preset_bundle;
use fedcausal::ensemble::{sweep, SweepParameter};

fn main() {
    let values = [0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0];
    for member in ["fig4_asymmetric", "fig4_symmetric"] {
        let config = preset_bundle(member).unwrap().remove(0);
        let table = sweep(
            SweepParameter::TargetParticipation,
            &values,
            &config.scenario,
            &config.run,
        )
        .unwrap();
        println!("--- {member} ---");
        println!("{:>6} {:>12} {:>12} {:>10}", "p_m", "analytic C", "empirical C", "3*SE");
        for row in &table.rows {
            println!(
                "{:>6.2} {:>12.5} {:>12.5} {:>10.5}",
                row.value,
                row.analytic_impact.unwrap(),
                row.empirical_impact,
                3.0 * row.empirical_se
            );
        }
    }
}
