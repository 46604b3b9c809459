//! Bound entanglement from unextendible product bases: the tiles and pyramid
//! states pass the partial-transpose test yet no product vector fits in
//! their support, which the range test exposes.

use qinfo::density::partial_transpose;
use qinfo::mat;
use qinfo::separability::{ppt_check, range_check};
use qinfo::states::{upb_state, upb_vectors, Upb};

fn main() -> qinfo::Result<()> {
    for (kind, name) in [(Upb::Tiles, "tiles"), (Upb::Pyramid, "pyramid")] {
        let rho = upb_state(kind);
        let ppt = ppt_check(&rho, 1)?;
        let pt = partial_transpose(&rho, 1)?;
        let min_eig = mat::eigh(&pt).0.into_iter().fold(f64::INFINITY, f64::min);
        let range = range_check(&rho, 20_000, 11)?;
        println!("{name}:");
        println!("  ppt verdict      {:?} ({})", ppt.verdict, ppt.note);
        println!("  min pt eigenvalue {min_eig:.3e}");
        println!("  range verdict    {:?} ({})", range.verdict, range.note);

        // the five product vectors are mutually orthogonal and span the
        // complement of the state's support
        let vs = upb_vectors(kind);
        let mut max_cross = 0.0f64;
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                max_cross = max_cross.max((vs[i].adjoint() * &vs[j])[(0, 0)].norm());
            }
        }
        println!("  basis size {} with max cross overlap {max_cross:.2e}\n", vs.len());
    }
    Ok(())
}
