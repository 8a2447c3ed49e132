//! Closed-form quantities for constant coefficients: h(p), G(p) and the
//! direct test they are meant to decide.

use lvstab::constant_case::ConstantSystem;
use lvstab::error::Result;
use lvstab::jfunc::Exponent;

fn main() -> Result<()> {
    let sys = ConstantSystem::worked_example(1.0);
    let (x1, y1) = sys.equilibrium()?;
    println!("equilibrium ({x1:.10}, {y1:.10}), k = {:.10}", sys.k()?);

    let curve = sys.example_one_curve(&[1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 50.0, 200.0])?;
    for ((&(p, h), &(_, g)), &(_, ok)) in curve.h_values.iter().zip(&curve.g_values).zip(&curve.sign_ok) {
        println!("p={p:<6} h={h:<14.6e} G={g:<14.6e} sign_ok={ok}");
    }

    let check = sys.check25(2.0)?;
    println!("sign pattern (G(1) > 0, G(2) < 0, G(200) > 0): {:?}", check.pattern);
    for p in [Exponent::Finite(2.0), Exponent::Infinity] {
        let d = sys.diagnose(p)?;
        println!("direct test at p={p}: lhs={:.7} rhs={:.7} passed={}", d.direct.lhs, d.direct.rhs, d.direct.passed);
        if let Some(note) = d.note {
            println!("  {note}");
        }
    }

    // a shorter period makes the squared form sign-safe
    let short = ConstantSystem { period: 0.5, ..sys };
    if let Some(route) = short.quadratic_route(2.0)? {
        let direct = short.diagnose(Exponent::Finite(2.0))?.direct;
        println!("T = 0.5: max Q = {:.6e}, direct passed = {}", route.max_q, direct.passed);
    }
    Ok(())
}
