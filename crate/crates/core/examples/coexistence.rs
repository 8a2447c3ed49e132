//! Existence of coexistence states for a few parameter sets.

use lvstab::coeffs::SystemSpec;
use lvstab::error::Result;
use lvstab::existence::coexistence_exists;

fn main() -> Result<()> {
    let cases = [
        ("worked example", SystemSpec::worked_example(1.0)),
        ("predator needs prey", SystemSpec::constant(1.0, 1.0, 1.0, 1.0, -0.5, 1.0, 1.0)?),
        ("predator starves", SystemSpec::constant(1.0, 1.0, 1.0, 1.0, -2.0, 1.0, 1.0)?),
        ("prey dies out", SystemSpec::constant(1.0, -0.1, 1.0, 1.0, 1.0, 1.0, 1.0)?),
    ];
    for (name, spec) in &cases {
        let (exists, (m1, m2)) = coexistence_exists(spec);
        println!("{name:<22} exists={exists:<5} margins=({m1:+.6}, {m2:+.6})");
    }
    Ok(())
}
