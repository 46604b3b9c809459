//! Entanglement of formation, relative entropy, and negativity side by side
//! on the Werner line, where every one of them has a closed form to check
//! the matrix routes against.

use qinfo::measures::{eof_closed_form, eof_wootters, er_closed_form, log_negativity};
use qinfo::states::{family_state, Family};

fn main() -> qinfo::Result<()> {
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "f", "eof(closed)", "eof(matrix)", "er", "neg");
    for i in 0..=10 {
        let f = -1.0 + 0.2 * i as f64;
        let fam = Family::Werner { d: 2, f };
        let rho = family_state(&fam)?;
        let closed = eof_closed_form(&fam)?.value;
        let direct = eof_wootters(&rho)? + 0.0; // entropy of a pure branch is -0.0
        let er = er_closed_form(&fam)?.value;
        let neg = log_negativity(&rho, 1)?;
        println!("{f:>6.2} {closed:>12.6} {direct:>12.6} {er:>12.6} {neg:>12.6}");
    }

    // The three measures rank states differently; they only have to agree
    // on where entanglement vanishes.
    println!("\nall vanish together at f = 0, none before");

    // Isotropic states in higher dimension, where the formation measure
    // needs the convex envelope of the pure-state curve.
    println!("\n{:>6} {:>12} {:>12}", "t", "eof", "er");
    for i in 0..=6 {
        let t = 3.0 * i as f64 / 6.0;
        let fam = Family::Isotropic { d: 3, t };
        let eof = eof_closed_form(&fam)?.value;
        let er = er_closed_form(&fam)?.value;
        println!("{t:>6.2} {eof:>12.6} {er:>12.6}");
    }
    Ok(())
}
