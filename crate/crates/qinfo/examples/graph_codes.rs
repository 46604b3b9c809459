//! Graph codes from weighted graphs: the two five-bit codes, their error
//! detection profiles, and the operator identity that certifies correction.

use qinfo::codes::{
    five_bit_code_graphs, kl_condition, localized_pauli_products, output_subsets, parse_graph,
    CodeGraph,
};

fn profile(name: &str, g: &CodeGraph) -> qinfo::Result<()> {
    println!("{name}: {} input -> {} outputs over Z_{}", g.n_in(), g.n_out(), g.d());
    for weight in 0..=3usize {
        let subsets: Vec<Vec<usize>> = output_subsets(g.n_out())
            .into_iter()
            .filter(|z| z.len() == weight)
            .collect();
        let detected = subsets
            .iter()
            .filter(|z| g.detects_configuration(z).unwrap())
            .count();
        println!("  |Z| = {weight}: detects {detected} of {} configurations", subsets.len());
    }
    println!(
        "  corrects 1 error: {}, corrects 2: {}",
        g.corrects_k_errors(1)?,
        g.corrects_k_errors(2)?
    );
    Ok(())
}

fn main() -> qinfo::Result<()> {
    let (pentagon, wheel) = five_bit_code_graphs();
    profile("pentagon", &pentagon)?;
    profile("wheel", &wheel)?;

    // The certificate behind corrects_k_errors(1): sandwiching the isometry
    // between pairs of weight <= 1 operators (their products reach weight 2)
    // must give scalars. Weight <= 2 errors would need weight-4 detection,
    // which these codes do not have.
    let v = pentagon.build_isometry()?;
    let single_site = localized_pauli_products(2, 5, 1)?;
    match kl_condition(&v, &single_site)? {
        Some(omega) => {
            let dev = qinfo::mat::max_abs_diff(&omega, &omega.adjoint());
            println!(
                "\npentagon certificate: {0} single-site operators, \
                 scalar matrix is {0}x{0}, hermiticity deviation {dev:.2e}",
                single_site.len()
            );
        }
        None => println!("\npentagon certificate: condition failed"),
    }
    let two_site = localized_pauli_products(2, 5, 2)?;
    println!(
        "the same check on {} weight <= 2 operators fails, as it must: {}",
        two_site.len(),
        kl_condition(&v, &two_site)?.is_none()
    );

    // Same machinery on a graph supplied as text.
    let text = "\
# complete graph on one input and three outputs
2 1 3
0 1
0 2
0 3
1 2
1 3
2 3
";
    let g = parse_graph(text)?;
    let v = g.build_isometry()?;
    println!(
        "\nparsed triangle code: isometry {} -> {}, detects one lost output: {}",
        v.ncols(),
        v.nrows(),
        g.detects_configuration(&[0])?
    );
    Ok(())
}
