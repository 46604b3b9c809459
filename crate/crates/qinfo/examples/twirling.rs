//! Group averages compress arbitrary states onto the symmetric families
//! while preserving the coordinates that decide separability.

use num_complex::Complex64;
use qinfo::density::{partial_trace, DensityMatrix};
use qinfo::mat::{self, CMat};
use qinfo::states::{self, Family, Twirl};

fn expect(rho: &DensityMatrix, op: &CMat) -> f64 {
    (op * rho.mat()).diagonal().iter().map(|z| z.re).sum()
}

fn main() -> qinfo::Result<()> {
    let mut rng = mat::seeded_rng(5);
    let psi = mat::random_pure(&mut rng, 16);
    let rho = partial_trace(&DensityMatrix::from_pure(&psi, vec![4, 4])?, 1)?
        .with_dims(vec![2, 2])?;

    let f_op = states::flip_operator(2);
    let ft_op = states::ftilde_operator(2);
    println!("random two-qubit state:");
    println!("  tr(F rho)  = {:+.6}", expect(&rho, &f_op));
    println!("  tr(Ft rho) = {:+.6}", expect(&rho, &ft_op));

    for (kind, name) in [(Twirl::UU, "U x U"), (Twirl::UUbar, "U x conj U"), (Twirl::OO, "O x O")] {
        let t = states::twirl(kind, &rho)?;
        println!("\nafter the {name} average:");
        println!("  tr(F rho)  = {:+.6}", expect(&t, &f_op));
        println!("  tr(Ft rho) = {:+.6}", expect(&t, &ft_op));
        let again = states::twirl(kind, &t)?;
        println!("  idempotent to {:.2e}", mat::max_abs_diff(t.mat(), again.mat()));
    }

    // The twirled output is the Werner state with the same flip expectation.
    let f = expect(&rho, &f_op);
    let w = states::family_state(&Family::Werner { d: 2, f })?;
    let t = states::twirl(Twirl::UU, &rho)?;
    println!(
        "\nU x U twirl lands on werner(f={f:.4}) up to {:.2e}",
        mat::max_abs_diff(w.mat(), t.mat())
    );

    // A product state twirls to a separable family member: the coordinate
    // stays inside [0, 1] because tr(F a (x) b) = tr(ab) >= 0.
    let a = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(0.7, 0.0),
        Complex64::new(0.3, 0.0),
    ]));
    let prod = DensityMatrix::new(mat::kron(&a, &a), vec![2, 2])?;
    println!("product state flip expectation: {:+.4}", expect(&prod, &f_op));
    Ok(())
}
