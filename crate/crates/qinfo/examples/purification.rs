//! Purifying many noisy copies of a qubit: finite-N fidelities against the
//! asymptotic profile, and the spectrum-estimation exponent behind them.

use qinfo::cloning::{
    error_prob, phi_asymptotic, purifier_fidelity, rate_function, spin_weights, FidelityKind,
};
use qinfo::density::DensityMatrix;
use qinfo::mat::CMat;
use num_complex::Complex64;

fn main() -> qinfo::Result<()> {
    let theta = 0.5;

    // spin weights are the exact finite-N distribution the purifier sees
    let w = spin_weights(200, theta)?;
    let total: f64 = w.iter().map(|x| x.weight).sum();
    println!("200-copy spin decomposition: {} sectors, weights sum to {total:.12}", w.len());

    println!("\nfidelity of all m outputs, n = 200 inputs, theta = {theta}");
    println!("{:>6} {:>4} {:>12} {:>12}", "mu", "m", "finite N", "asymptote");
    for &mu in &[0.25f64, 0.5, 1.0, 1.5] {
        let m = (mu * 200.0).round() as usize;
        let f = purifier_fidelity(FidelityKind::All, 200, m, theta)?;
        let phi = phi_asymptotic(mu, theta)?;
        println!("{mu:>6.2} {m:>4} {f:>12.6} {phi:>12.6}");
    }

    println!("\nsingle-output fidelity beats the all-outputs one:");
    for &(n, m) in &[(50usize, 25usize), (50, 50), (50, 100)] {
        let f1 = purifier_fidelity(FidelityKind::One, n, m, theta)?;
        let fall = purifier_fidelity(FidelityKind::All, n, m, theta)?;
        println!("  n={n:>3} m={m:>3}: one {f1:.6}, all {fall:.6}");
    }

    // How fast does a spectrum estimate stop landing in a wrong window?
    // Exponentially, with the relative-entropy rate of the window edge.
    let rho = DensityMatrix::new(
        CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.8, 0.0),
            Complex64::new(0.2, 0.0),
        ])),
        vec![2],
    )?;
    println!("\ntrue bias 0.6; probability the estimate lands in [0, 0.3]:");
    println!("{:>6} {:>14} {:>12}", "N", "prob", "-ln/N");
    for &n in &[100usize, 500, 2000] {
        let k = error_prob(n, &rho, (0.0, 0.3))?;
        println!("{n:>6} {k:>14.6e} {:>12.6}", -k.ln() / n as f64);
    }
    let edge = rate_function(&[0.65, 0.35], &[0.8, 0.2])?;
    println!("rate at the window edge: {edge:.6}");
    Ok(())
}
