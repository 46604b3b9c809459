//! Classical capacity by alternating maximization, bracketed from both
//! sides at every step.

use nalgebra::DMatrix;
use qinfo::capacities::shannon_capacity;
use qinfo::channels::ClassicalChannel;

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

fn main() -> qinfo::Result<()> {
    println!("{:>6} {:>14} {:>14} {:>6}", "p", "computed", "1 - H(p)", "iters");
    for i in 1..=9 {
        let p = 0.05 * i as f64;
        let b = shannon_capacity(&ClassicalChannel::bsc(p)?, 1e-10)?;
        let mid = 0.5 * (b.lower + b.upper);
        println!("{p:>6.2} {mid:>14.10} {:>14.10} {:>6}", 1.0 - binary_entropy(p), b.iterations);
    }

    // A channel with no symmetry: the optimizer has to find a skewed input
    // distribution on its own.
    let t = ClassicalChannel::new(DMatrix::from_row_slice(3, 2, &[
        0.9, 0.3,
        0.05, 0.2,
        0.05, 0.5,
    ]))?;
    let b = shannon_capacity(&t, 1e-10)?;
    println!(
        "\nasymmetric 2-input channel: capacity {:.10} (bracket width {:.1e}, {} iterations)",
        0.5 * (b.lower + b.upper),
        b.width(),
        b.iterations
    );
    Ok(())
}
