//! Capacity panorama for the erasure and depolarizing families: closed
//! forms where they exist, the transposition bound from the Choi state, and
//! the coherent-information lower bound.

use qinfo::capacities::{
    c_theta_choi_bound, closed_form_capacity, coherent_info, CapQuantity, NoisyKind,
};
use qinfo::channels;
use qinfo::density::DensityMatrix;

fn main() -> qinfo::Result<()> {
    println!("erasure, d = 2");
    println!("{:>6} {:>8} {:>8} {:>8}", "theta", "cc", "ce", "cq");
    for i in 0..=8 {
        let theta = i as f64 / 8.0;
        let cc = closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Cc)?;
        let ce = closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Ce)?;
        let cq = closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Cq)?;
        println!("{theta:>6.3} {cc:>8.4} {ce:>8.4} {cq:>8.4}");
    }
    println!("assistance doubles the classical rate; the quantum rate dies at 1/2");

    println!("\ndepolarizing, d = 2");
    println!("{:>6} {:>8} {:>8} {:>10} {:>10}", "theta", "cc1", "ce", "ctheta", "hashing");
    let mixed = DensityMatrix::maximally_mixed(vec![2]);
    for i in 0..=8 {
        let theta = i as f64 / 8.0;
        let cc1 = closed_form_capacity(NoisyKind::Depolarizing, 2, theta, CapQuantity::Cc1)?;
        let ce = closed_form_capacity(NoisyKind::Depolarizing, 2, theta, CapQuantity::Ce)?;
        let ct = closed_form_capacity(NoisyKind::Depolarizing, 2, theta, CapQuantity::Ctheta)?;
        let j = coherent_info(&mixed, &channels::depolarizing(2, theta)?)?.max(0.0);
        println!("{theta:>6.3} {cc1:>8.4} {ce:>8.4} {ct:>10.6} {j:>10.6}");
    }

    // The bound evaluated numerically from the Choi state reproduces the
    // closed form; this is the cross-check the cli exposes as --numeric.
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let theta = i as f64 / 40.0;
        let closed = closed_form_capacity(NoisyKind::Depolarizing, 2, theta, CapQuantity::Ctheta)?;
        let choi = c_theta_choi_bound(&channels::depolarizing(2, theta)?)?;
        worst = worst.max((closed - choi).abs());
    }
    println!("\nchoi-state evaluation of the bound agrees to {worst:.2e}");

    match closed_form_capacity(NoisyKind::Depolarizing, 2, 0.3, CapQuantity::Cc) {
        Err(e) => println!("asking for the full classical capacity: {e}"),
        Ok(_) => unreachable!("no closed form is known"),
    }
    Ok(())
}
