//! Walk the whole pipeline on the bundled scenario and print the headline
//! quantities: the derived coupling constant, the reproduction number, the
//! equilibria with their classifications, the critical transmission
//! coefficient and the elasticity table.
//!
//! Run with `cargo run --release -p msei-core --example baseline_report`.

use msei_core::{analysis, baseline, coupling, sensitivity, BhParam};

fn main() {
    let wh = baseline::within_host_params();
    let summary = coupling::derive_nh(&wh, &baseline::coupling_config()).unwrap();
    println!("coupling constant N_h     : {:.6e}", summary.n_h);
    println!(
        "  from integral {:.6e} over window [{}, {}]",
        summary.integral_u_star, summary.window.0, summary.window.1
    );

    let bh = baseline::between_host_params(summary.n_h);
    let report = analysis::routh_hurwitz(&bh).unwrap();
    println!("reproduction number R0    : {:.6e}", report.r0);
    println!(
        "disease-free equilibrium  : ({:.4}, {:.4}, {:.4}) [{}]",
        report.e0.susceptible,
        report.e0.exposed,
        report.e0.infected,
        report.classification_e0.as_str()
    );
    if let Some(e1) = report.e1 {
        println!(
            "endemic equilibrium       : ({:.4}, {:.4}, {:.4}) [{}]",
            e1.susceptible,
            e1.exposed,
            e1.infected,
            report.classification_e1.as_str()
        );
    }
    let bq = analysis::bifurcation_quantities(&bh).unwrap();
    println!("critical transmission b*  : {:.6e}", bq.beta_star);

    println!("elasticities of R0:");
    let closed = sensitivity::elasticity_closed_form(&bh).unwrap();
    let fd = sensitivity::elasticity_finite_difference(&bh, 5e-4).unwrap();
    for param in BhParam::ALL {
        println!(
            "  {:<7} {:+.6e}  (finite difference {:+.6e})",
            param.name(),
            closed.get(param).unwrap(),
            fd.get(param).unwrap()
        );
    }
}
