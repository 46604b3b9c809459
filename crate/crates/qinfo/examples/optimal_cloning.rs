//! Universal cloning on the symmetric subspace: fidelity tables, the link
//! to state estimation, and the universal-NOT companion.

use qinfo::cloning::{
    cloner_f1_shifted, cloner_fidelities, estimation_bound, sym_dimension, unot_fidelity,
};

fn main() -> qinfo::Result<()> {
    println!("qubit cloner, n copies in -> m copies out");
    println!("{:>3} {:>3} {:>12} {:>12}", "n", "m", "f1", "fall");
    for (n, m) in [(1, 2), (1, 3), (1, 5), (2, 3), (2, 4), (3, 4)] {
        let (f1, fall) = cloner_fidelities(n, m, 2)?;
        println!("{n:>3} {m:>3} {f1:>12.8} {fall:>12.8}");
    }
    println!("the all-copies figure equals the symmetric-space ratio d[n]/d[m]:");
    println!(
        "  n=1, m=3: {:.8} vs {:.8}",
        cloner_fidelities(1, 3, 2)?.1,
        sym_dimension(1, 2) / sym_dimension(3, 2)
    );

    // Sending m to infinity, cloning degrades into measure-and-prepare:
    // the single-copy fidelity falls to the estimation value.
    println!("\n{:>4} {:>12} {:>12}", "m", "f1(1,m,2)", "limit");
    let est = estimation_bound(1, 2).shifted_by_inverse_d;
    // the cloner works in the d^m output space, so keep m modest
    for m in [2usize, 4, 7, 10] {
        let (f1, _) = cloner_fidelities(1, m, 2)?;
        println!("{m:>4} {f1:>12.8} {est:>12.8}");
    }

    // The closed-form companion sits exactly 1/d below the direct value,
    // a bookkeeping convention worth seeing once.
    let (f1, _) = cloner_fidelities(1, 2, 2)?;
    println!(
        "\ndirect f1 {:.8} = closed form {:.8} + 1/2",
        f1,
        cloner_f1_shifted(1, 2, 2)
    );

    // Flipping a spin is estimation-limited: the best universal NOT does no
    // better than measuring the copies and preparing the antipode.
    println!("\nuniversal NOT from n copies:");
    for n in 1..=5 {
        println!("  n={n}: {:.8} = (n+1)/(n+2)", unot_fidelity(n));
    }
    Ok(())
}
