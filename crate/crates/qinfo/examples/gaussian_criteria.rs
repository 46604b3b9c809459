//! Separability of Gaussian states straight from the covariance matrix: the
//! partial-transpose test and the nonlinear iteration that decides the
//! general 1 x n case in finitely many steps.

use qinfo::gaussian::{
    direct_sum, gaussian_ppt, giedke_decide, random_covariance_1x1, two_mode_squeezed_cov,
    GiedkeVerdict, RMat,
};
use qinfo::mat;

fn main() -> qinfo::Result<()> {
    println!("two-mode squeezed covariances:");
    println!("{:>6} {:>12} {:>22}", "r", "ppt", "iteration");
    for i in 0..=5 {
        let r = 0.3 * i as f64;
        let cov = two_mode_squeezed_cov(r);
        let ppt = gaussian_ppt(&cov, (1, 1))?;
        let dec = giedke_decide(&cov, (1, 1), 200)?;
        println!("{r:>6.2} {:>12} {:>22}", format!("{:?}", ppt.verdict), describe(&dec));
    }
    println!("r = 0 is the vacuum; any squeezing entangles the pair\n");

    // a product of two thermal modes stays separable however hot it gets
    let hot = direct_sum(&(RMat::identity(2, 2) * 5.0), &(RMat::identity(2, 2) * 1.5));
    let dec = giedke_decide(&hot, (1, 1), 200)?;
    println!("thermal product state: {}", describe(&dec));

    // the two routes agree on random covariances; the iteration merely
    // takes longer the closer the state sits to the boundary
    let mut rng = mat::seeded_rng(31);
    let mut counts = [0usize; 2];
    let mut max_rounds = 0usize;
    for _ in 0..200 {
        let a = random_covariance_1x1(&mut rng);
        match giedke_decide(&a, (1, 1), 500)? {
            GiedkeVerdict::Separable(k) => {
                counts[0] += 1;
                max_rounds = max_rounds.max(k);
            }
            GiedkeVerdict::Entangled(k) => {
                counts[1] += 1;
                max_rounds = max_rounds.max(k);
            }
            GiedkeVerdict::Undecided => unreachable!("decision is finite for 1 x 1"),
        }
    }
    println!(
        "\n200 random covariances: {} separable, {} entangled, worst case {} rounds",
        counts[0], counts[1], max_rounds
    );
    Ok(())
}

fn describe(v: &GiedkeVerdict) -> String {
    match v {
        GiedkeVerdict::Separable(k) => format!("separable after {k}"),
        GiedkeVerdict::Entangled(k) => format!("entangled after {k}"),
        GiedkeVerdict::Undecided => "undecided".into(),
    }
}
