//! Periodic logistic solutions and the boundary states they generate.

use lvstab::coeffs::{Harmonic, PeriodicCoefficient, SystemSpec};
use lvstab::error::Result;
use lvstab::existence::classify_boundary;
use lvstab::logistic::{periodic_logistic, weighted_average};

fn main() -> Result<()> {
    let period = 1.0;
    let a = PeriodicCoefficient::trig(0.4, vec![Harmonic::new(1, 0.0, 1.2)])?;
    let b = PeriodicCoefficient::trig(1.0, vec![Harmonic::new(2, 0.3, 0.0)])?;
    let theta = periodic_logistic(&a, &b, period)?;
    println!("theta ranges over [{:.6}, {:.6}]", theta.min(), theta.max());
    println!("mean of b theta = {:.12} (mean of a = {})", weighted_average(&b, &theta), a.mean());
    println!("periodicity residual = {:.2e}", theta.periodicity_residual());
    println!("ode residual = {:.2e}", theta.ode_residual(&a, &b));

    let spec = SystemSpec::new(
        period,
        a,
        b,
        PeriodicCoefficient::constant(0.5),
        PeriodicCoefficient::constant(-0.2),
        PeriodicCoefficient::constant(0.8),
        PeriodicCoefficient::constant(1.0),
    )?;
    let c = classify_boundary(&spec);
    println!("lambda = {}, mu = {}", c.lambda, c.mu);
    println!("trivial stable: {}", c.trivial_stable);
    println!("prey-only stable: {:?}", c.prey_only_stable);
    println!("predator-only stable: {:?}", c.predator_only_stable);
    println!("coexistence exists: {} (margins {:?})", c.coexistence_exists, c.margins);
    Ok(())
}
