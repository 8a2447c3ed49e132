//! Shape of the a-priori region C_p and its extremal values.
//!
//! `cargo run --example region_geometry -- 2 > boundary.csv` writes the
//! sampled boundary for one exponent.

use lvstab::coeffs::SystemSpec;
use lvstab::error::Result;
use lvstab::jfunc::Exponent;
use lvstab::region::RegionSpec;

fn main() -> Result<()> {
    let spec = SystemSpec::worked_example(1.0);
    let base = RegionSpec::from_system(&spec, Exponent::Finite(1.0))?;

    if let Some(arg) = std::env::args().nth(1) {
        let region = base.at(arg.parse()?);
        println!("curve_label,x,y");
        for pt in region.boundary_points(200).points {
            println!("{},{:.16e},{:.16e}", pt.label, pt.x, pt.y);
        }
        return Ok(());
    }

    println!("U = {:.8}, V = {:.8}", base.bounds.u, base.bounds.v);
    for p in [1.0, 1.5, 2.0, 4.0, 10.0].map(Exponent::Finite).into_iter().chain([Exponent::Infinity]) {
        let region = base.at(p);
        let sup = region.sup_xy();
        let lin = region.sup_linear(base.b_m, base.f_m);
        let (lo, hi) = region.feasible_x().unwrap_or((f64::NAN, f64::NAN));
        println!(
            "p={:<4} x in [{lo:.7}, {hi:.7}]  sup xy = {:.9}  sup (b x + f y) = {:.9}",
            p.to_string(),
            sup.value,
            lin.value
        );
    }
    Ok(())
}
