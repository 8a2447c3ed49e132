//! Locate the coexistence state of a perturbed system, check its Floquet
//! multipliers and the a-priori bounds.

use lvstab::coeffs::{Harmonic, PeriodicCoefficient, SystemSpec};
use lvstab::error::Result;
use lvstab::jfunc::Exponent;
use lvstab::simulate::{self, SimOptions};

fn main() -> Result<()> {
    let mut spec = SystemSpec::worked_example(1.0);
    spec.a = PeriodicCoefficient::trig(2.0102, vec![Harmonic::new(1, 0.0, 0.05)])?;
    spec.d = PeriodicCoefficient::trig(2.0203, vec![Harmonic::new(2, 0.1, 0.0)])?;

    let orbit = simulate::find_coexistence(&spec, [1.0, 1.0])?;
    println!(
        "start ({:.10}, {:.10}) after {} Newton steps, residual {:.1e}",
        orbit.start[0], orbit.start[1], orbit.newton_iterations, orbit.newton_residual
    );
    let (umin, vmin) = orbit.min();
    let (umax, vmax) = orbit.max();
    println!("u in [{umin:.6}, {umax:.6}], v in [{vmin:.6}, {vmax:.6}]");
    for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
        let (x, y) = simulate::orbit_averages(&orbit, p);
        println!("averages p={p}: ({x:.8}, {y:.8})");
    }

    let fl = simulate::floquet(&spec, &orbit, &SimOptions::default().ode)?;
    println!("multipliers {:.6} and {:.6}: {}", fl.multipliers[0], fl.multipliers[1], fl.classification.as_str());
    println!("det M = {:.10e}, Liouville = {:.10e}", fl.determinant(), fl.liouville);

    for check in simulate::verify_predictions(&spec, &orbit)?.checks {
        println!("{:<22} slack {:+.3e} {}", check.name, check.slack, if check.passed { "ok" } else { "VIOLATED" });
    }

    let ms = simulate::multistart(&spec, 20, 1)?;
    println!("{} of 20 starts converged to {} distinct orbit(s)", ms.converged, ms.orbits.len());
    Ok(())
}
