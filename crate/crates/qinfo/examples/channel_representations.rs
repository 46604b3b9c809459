//! One channel, three faces: Kraus operators, the Choi state, and a
//! Stinespring dilation, with round trips between them.

use qinfo::channels::{channel_from_choi, choi_from_channel, cp_check, depolarizing, dilate};
use qinfo::density::DensityMatrix;
use qinfo::mat;

fn main() -> qinfo::Result<()> {
    let t = depolarizing(2, 0.3)?;
    println!("depolarizing(d=2, theta=0.3): {} kraus operators", t.kraus().len());

    let choi = choi_from_channel(&t);
    println!("choi state on dims {:?}, trace 1", choi.dims());
    cp_check(choi.mat())?;
    println!("choi is positive, so the map is completely positive");

    // Back to Kraus form; the operators differ by a unitary reshuffle but
    // the channel itself is identical on every input.
    let t2 = channel_from_choi(&choi)?;
    let mut rng = mat::seeded_rng(21);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let psi = mat::random_pure(&mut rng, 2);
        let rho = mat::projector(&psi);
        worst = worst.max(mat::max_abs_diff(&t.apply(&rho), &t2.apply(&rho)));
    }
    println!("kraus -> choi -> kraus round trip deviation: {worst:.2e}");

    let v = dilate(&t)?;
    let gram = v.adjoint() * &v;
    println!(
        "stinespring isometry {}x{}, V'V - 1 = {:.2e}",
        v.nrows(),
        v.ncols(),
        mat::max_abs_diff(&gram, &mat::eye(gram.nrows()))
    );

    // Tensor products and composition stay inside the same type.
    let pair = t.tensor(&depolarizing(2, 0.1)?);
    let twice = t.compose(&t)?;
    let rho = DensityMatrix::maximally_mixed(vec![2]);
    println!("tensor channel acts on dim {}", pair.in_dim());
    println!(
        "composing two theta=0.3 layers keeps the state normalized: trace {:.6}",
        twice.apply_state(&rho)?.mat().diagonal().iter().map(|z| z.re).sum::<f64>()
    );
    Ok(())
}
