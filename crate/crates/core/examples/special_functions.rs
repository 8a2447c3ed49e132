//! Tabulate J(q), F(q) and scriptF(p) = F(p / (p - 1)).

use lvstab::jfunc::{self, Exponent};

fn main() {
    println!("{:>8} {:>14} {:>14} {:>14}", "p", "q", "J(q)", "scriptF(p)");
    for p in [1.0, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0] {
        let p = Exponent::Finite(p);
        let q = p.conjugate();
        let q_text = match q {
            Exponent::Finite(q) => format!("{q:.6}"),
            Exponent::Infinity => "inf".into(),
        };
        println!("{:>8} {:>14} {:>14.10} {:>14.10}", p.to_string(), q_text, jfunc::j(q), jfunc::script_f(p));
    }
    let p = Exponent::Infinity;
    println!("{:>8} {:>14} {:>14.10} {:>14.10}", "inf", 1.0, jfunc::j(p.conjugate()), jfunc::script_f(p));
}
