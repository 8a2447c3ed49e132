//! Compare the uniqueness and stability tests on one system as the period
//! shrinks.

use lvstab::coeffs::SystemSpec;
use lvstab::criteria::scan_p;
use lvstab::error::Result;
use lvstab::jfunc::Exponent;

fn main() -> Result<()> {
    let grid = [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Finite(4.0), Exponent::Infinity];
    for period in [1.0, 0.5, 0.1] {
        let spec = SystemSpec::worked_example(period);
        let report = scan_p(&spec, &grid)?;
        println!("T = {period}: {}", report.conclusion.as_str());
        for r in report.conditions.iter().chain(&report.results) {
            println!(
                "  {:<17} p={:<4} lhs={:.7} rhs={:.7} {}",
                r.name.as_str(),
                r.p.to_string(),
                r.lhs,
                r.rhs,
                if r.passed { "pass" } else { "fail" }
            );
        }
    }
    Ok(())
}
