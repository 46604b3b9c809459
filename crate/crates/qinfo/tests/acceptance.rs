//! End-to-end gate: one check per shipped guarantee, one printed line per
//! check. Run with --nocapture to see every line; the test fails at the end
//! if any line failed.

use nalgebra::DMatrix;
use qinfo::capacities::{self, CapQuantity, NoisyKind};
use qinfo::channels::{self, ClassicalChannel};
use qinfo::cloning;
use qinfo::codes::{self, kl_condition};
use qinfo::density::{partial_trace, partial_transpose, DensityMatrix};
use qinfo::gaussian::{self, GaussianCapacity, GaussianChannelParam, GiedkeVerdict};
use qinfo::mat::{self, CMat};
use qinfo::measures;
use qinfo::protocols::{self, TeleportationScheme};
use qinfo::separability::{self, Verdict};
use qinfo::states::{self, Family, Upb};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failures: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures.push(format!("{name}: {detail}"));
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn min_eig(m: &CMat) -> f64 {
    mat::eigh(m).0.into_iter().fold(f64::INFINITY, f64::min)
}

/// Bisects the parameter where `entangled_at` flips; expects the flag set at
/// lo and clear at hi.
fn boundary<F: Fn(f64) -> bool>(mut lo: f64, mut hi: f64, entangled_at: F) -> f64 {
    assert!(entangled_at(lo) && !entangled_at(hi), "bisection precondition");
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if entangled_at(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign of the raw partial-transpose minimum, free of the detection gate
/// that ppt_check applies to guard against roundoff on noisy inputs.
fn pt_negative(fam: &Family) -> bool {
    let rho = states::family_state(fam).unwrap();
    min_eig(&partial_transpose(&rho, 1).unwrap()) < 0.0
}

fn family_thresholds(g: &mut Gate) {
    let mut mismatches = 0usize;
    let mut worst = 0.0f64;
    for d in [2usize, 3] {
        for &f in &linspace(-1.0, 1.0, 200) {
            let fam = Family::Werner { d, f };
            let expect_sep = f >= 0.0;
            if check_pair(&fam, expect_sep) {
                mismatches += 1;
            }
        }
        for &t in &linspace(0.0, d as f64, 200) {
            let fam = Family::Isotropic { d, t };
            let expect_sep = t <= 1.0;
            if check_pair(&fam, expect_sep) {
                mismatches += 1;
            }
        }
        let b = boundary(-0.5, 0.5, |f| pt_negative(&Family::Werner { d, f }));
        worst = worst.max(b.abs());
        let b = boundary(d as f64, 0.5, |t| pt_negative(&Family::Isotropic { d, t }));
        worst = worst.max((b - 1.0).abs());
    }
    for &x in &linspace(0.25, 1.0, 200) {
        let r = (1.0 - x) / 3.0;
        let fam = Family::BellDiagonal { lambda: [x, r, r, r] };
        if check_pair(&fam, x <= 0.5) {
            mismatches += 1;
        }
    }
    let b = boundary(1.0, 0.3, |x| {
        let r = (1.0 - x) / 3.0;
        pt_negative(&Family::BellDiagonal { lambda: [x, r, r, r] })
    });
    worst = worst.max((b - 0.5).abs());
    g.check(
        "01 family thresholds vs ppt",
        mismatches == 0 && worst <= 1e-9,
        format!("{mismatches} grid mismatches, boundary offset {worst:.3e}"),
    );
}

/// Returns true on a mismatch between the family rule and the ppt verdict.
fn check_pair(fam: &Family, expect_sep: bool) -> bool {
    let rho = states::family_state(fam).unwrap();
    let ppt = separability::ppt_check(&rho, 1).unwrap().verdict;
    let fsep = separability::family_separable(fam).unwrap().verdict;
    let expected = if expect_sep { Verdict::Separable } else { Verdict::Entangled };
    if fsep != expected {
        return true;
    }
    match ppt {
        Verdict::Entangled => expect_sep,
        Verdict::Separable => !expect_sep,
        // dims beyond 2x2/2x3: a positive partial transpose alone must only
        // ever coincide with the separable side of these families
        Verdict::Inconclusive => !expect_sep,
    }
}

fn upb_states(g: &mut Gate) {
    let mut ok = true;
    let mut detail = String::new();
    for (kind, name) in [(Upb::Tiles, "tiles"), (Upb::Pyramid, "pyramid")] {
        let rho = states::upb_state(kind);
        let pt = partial_transpose(&rho, 1).unwrap();
        let me = min_eig(&pt);
        let vs = states::upb_vectors(kind);
        let mut rng = mat::seeded_rng(2026);
        let mut min_overlap = f64::INFINITY;
        for _ in 0..10_000 {
            let a = mat::random_pure(&mut rng, 3);
            let b = mat::random_pure(&mut rng, 3);
            let prod = mat::kron_vec(&a, &b);
            let overlap: f64 = vs.iter().map(|u| (u.adjoint() * &prod)[(0, 0)].norm_sqr()).sum();
            min_overlap = min_overlap.min(overlap);
        }
        ok &= me >= -1e-10 && min_overlap > 1e-12;
        detail.push_str(&format!(
            "{name}: min pt eig {me:.2e}, min basis overlap {min_overlap:.2e}; "
        ));
    }
    g.check("02 upb states ppt yet entangled", ok, detail);
}

fn wootters_vs_closed_forms(g: &mut Gate) {
    let mut worst = 0.0f64;
    for &f in &linspace(-1.0, 1.0, 100) {
        let fam = Family::Werner { d: 2, f };
        let closed = measures::eof_closed_form(&fam).unwrap().value;
        let direct = measures::eof_wootters(&states::family_state(&fam).unwrap()).unwrap();
        worst = worst.max((closed - direct).abs());
    }
    for &x in &linspace(0.25, 1.0, 100) {
        let r = (1.0 - x) / 3.0;
        let fam = Family::BellDiagonal { lambda: [x, r, r, r] };
        let closed = measures::eof_closed_form(&fam).unwrap().value;
        let direct = measures::eof_wootters(&states::family_state(&fam).unwrap()).unwrap();
        worst = worst.max((closed - direct).abs());
    }
    g.check(
        "03 wootters matches closed forms",
        worst <= 1e-8,
        format!("max |closed - direct| = {worst:.3e}"),
    );
}

fn relative_entropy_values(g: &mut Gate) {
    let mut worst = 0.0f64;
    for d in [2usize, 3] {
        let w = measures::er_closed_form(&Family::Werner { d, f: -1.0 }).unwrap().value;
        worst = worst.max((w - 1.0).abs());
        let i = measures::er_closed_form(&Family::Isotropic { d, t: d as f64 })
            .unwrap()
            .value;
        worst = worst.max((i - (d as f64).log2()).abs());
    }
    let (single, pair) = measures::er_non_additivity_example(3).unwrap();
    let expected = 2.0 - (5.0f64 / 3.0).log2();
    worst = worst.max((pair - expected).abs());
    let subadditive = pair < 2.0 * single;
    g.check(
        "04 relative entropy closed values",
        worst <= 1e-12 && subadditive,
        format!("max deviation {worst:.3e}, two-copy value {pair:.12} < 2"),
    );
}

fn noisy_channel_capacities(g: &mut Gate) {
    let mut worst = 0.0f64;
    for &theta in &linspace(0.0, 1.0, 101) {
        let cc = capacities::closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Cc)
            .unwrap();
        let ce = capacities::closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Ce)
            .unwrap();
        let cq = capacities::closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Cq)
            .unwrap();
        worst = worst.max((cc - (1.0 - theta)).abs());
        worst = worst.max((ce - 2.0 * (1.0 - theta)).abs());
        worst = worst.max((cq - (1.0 - 2.0 * theta).max(0.0)).abs());
    }
    let ce0 =
        capacities::closed_form_capacity(NoisyKind::Depolarizing, 2, 0.0, CapQuantity::Ce).unwrap();
    let cc1_0 = capacities::closed_form_capacity(NoisyKind::Depolarizing, 2, 0.0, CapQuantity::Cc1)
        .unwrap();
    let ct = capacities::closed_form_capacity(
        NoisyKind::Depolarizing,
        2,
        2.0 / 3.0,
        CapQuantity::Ctheta,
    )
    .unwrap();
    worst = worst.max((ce0 - 2.0).abs()).max((cc1_0 - 1.0).abs()).max(ct.abs());
    let mut worst_choi = 0.0f64;
    for &theta in &linspace(0.0, 1.0, 101) {
        let closed = capacities::closed_form_capacity(
            NoisyKind::Depolarizing,
            2,
            theta,
            CapQuantity::Ctheta,
        )
        .unwrap();
        let choi =
            capacities::c_theta_choi_bound(&channels::depolarizing(2, theta).unwrap()).unwrap();
        worst_choi = worst_choi.max((closed - choi).abs());
    }
    g.check(
        "05 erasure and depolarizing capacities",
        worst <= 1e-12 && worst_choi <= 1e-9,
        format!("closed-form deviation {worst:.3e}, choi-bound deviation {worst_choi:.3e}"),
    );
}

fn bsc_capacity(g: &mut Gate) {
    let mut worst = 0.0f64;
    for i in 1..=9 {
        let p = 0.05 * i as f64;
        let bracket = capacities::shannon_capacity(&ClassicalChannel::bsc(p).unwrap(), 1e-9)
            .unwrap();
        let mid = 0.5 * (bracket.lower + bracket.upper);
        let h = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        worst = worst.max((mid - (1.0 - h)).abs());
    }
    g.check(
        "06 iterative bsc capacity",
        worst <= 1e-6,
        format!("max |mid - (1 - H(p))| = {worst:.3e}"),
    );
}

fn gaussian_decisions(g: &mut Gate) {
    let mut rng = mat::seeded_rng(99);
    let mut mismatches = 0usize;
    for _ in 0..500 {
        let a = gaussian::random_covariance_1x1(&mut rng);
        let ppt = gaussian::gaussian_ppt(&a, (1, 1)).unwrap().verdict;
        let decided = gaussian::giedke_decide(&a, (1, 1), 2000).unwrap();
        let agree = matches!(
            (&ppt, &decided),
            (Verdict::Separable, GiedkeVerdict::Separable(_))
                | (Verdict::Entangled, GiedkeVerdict::Entangled(_))
        );
        if !agree {
            mismatches += 1;
        }
    }
    let ct = gaussian::gaussian_capacity(
        GaussianCapacity::TranspositionBound,
        &GaussianChannelParam::new(1.0, 1.0).unwrap(),
        1.0,
    )
    .unwrap();
    let mut order_ok = true;
    for &k in &[0.5f64, 1.0, 2.0] {
        let p = GaussianChannelParam::new(k, 1.0).unwrap();
        for &n in &linspace(0.0, 10.0, 30) {
            let ce = gaussian::gaussian_capacity(GaussianCapacity::EntanglementAssisted, &p, n)
                .unwrap();
            let cc1 = gaussian::gaussian_capacity(GaussianCapacity::OneShotClassical, &p, n)
                .unwrap();
            order_ok &= ce >= cc1 - 1e-12 && cc1 >= -1e-12;
        }
    }
    g.check(
        "07 gaussian iterate decision and capacities",
        mismatches == 0 && ct.abs() <= 1e-12 && order_ok,
        format!("{mismatches}/500 decision mismatches, unit-gain bound {ct:.2e}, ordering {order_ok}"),
    );
}

fn cloner_fidelities(g: &mut Gate) {
    let (f1, f_all) = cloning::cloner_fidelities(1, 2, 2).unwrap();
    let exact_all = (f_all - 2.0 / 3.0).abs();
    let exact_one = (f1 - 5.0 / 6.0).abs();
    let t = cloning::optimal_cloner(1, 2, 2).unwrap();
    let mut rng = mat::seeded_rng(14);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let psi = mat::random_pure(&mut rng, 2);
        let out = t.apply(&mat::projector(&psi));
        let pair = mat::kron_vec(&psi, &psi);
        let fa = (pair.adjoint() * &out * &pair)[(0, 0)].re;
        let reduced =
            partial_trace(&DensityMatrix::new_unchecked(out, vec![2, 2]), 1).unwrap();
        let f1_here = (psi.adjoint() * reduced.mat() * &psi)[(0, 0)].re;
        worst = worst.max((fa - 2.0 / 3.0).abs()).max((f1_here - 5.0 / 6.0).abs());
    }
    g.check(
        "08 universal cloner fidelities",
        exact_all <= 1e-12 && exact_one <= 1e-10 && worst <= 1e-10,
        format!(
            "|fall - 2/3| = {exact_all:.2e}, |f1 - 5/6| = {exact_one:.2e}, input spread {worst:.2e}"
        ),
    );
}

fn purifier(g: &mut Gate) {
    let mut worst_sum = 0.0f64;
    for &n in &[1usize, 2, 10, 100, 999, 2000] {
        for &theta in &[0.1f64, 0.5, 0.9] {
            let total: f64 = cloning::spin_weights(n, theta)
                .unwrap()
                .iter()
                .map(|w| w.weight)
                .sum();
            worst_sum = worst_sum.max((total - 1.0).abs());
        }
    }
    let mut worst_phi = 0.0f64;
    for &mu in &[0.25f64, 0.5, 1.0] {
        let m = (mu * 200.0).round() as usize;
        let f = cloning::purifier_fidelity(cloning::FidelityKind::All, 200, m, 0.5).unwrap();
        let phi = cloning::phi_asymptotic(mu, 0.5).unwrap();
        worst_phi = worst_phi.max((f - phi).abs());
    }
    let unot = (cloning::unot_fidelity(1) - 2.0 / 3.0).abs();
    g.check(
        "09 purifier weights and asymptotics",
        worst_sum <= 1e-10 && worst_phi <= 0.02 && unot <= 1e-12,
        format!(
            "weight-sum error {worst_sum:.2e}, asymptote gap {worst_phi:.3}, unot offset {unot:.2e}"
        ),
    );
}

fn spectrum_estimation(g: &mut Gate) {
    let rho = DensityMatrix::new(
        CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            num_complex::Complex64::new(0.8, 0.0),
            num_complex::Complex64::new(0.2, 0.0),
        ])),
        vec![2],
    )
    .unwrap();
    let k = cloning::error_prob(2000, &rho, (0.0, 0.3)).unwrap();
    let exponent = -k.ln() / 2000.0;
    let mut inf = f64::INFINITY;
    for &x in &linspace(0.0, 0.3, 601) {
        let s = [(1.0 + x) / 2.0, (1.0 - x) / 2.0];
        inf = inf.min(cloning::rate_function(&s, &[0.8, 0.2]).unwrap());
    }
    g.check(
        "10 spectrum estimation exponent",
        (exponent - inf).abs() <= 0.02,
        format!("finite-copy exponent {exponent:.4}, best window rate {inf:.4}"),
    );
}

/// All weyl products supported on the given output sites, identity included.
fn ops_on_sites(d: usize, m: usize, sites: &[usize]) -> Vec<CMat> {
    let per = d * d;
    let count = per.pow(sites.len() as u32);
    (0..count)
        .map(|idx| {
            let mut op = mat::eye(1);
            for site in 0..m {
                let factor = match sites.iter().position(|&s| s == site) {
                    Some(pos) => {
                        let choice = idx / per.pow(pos as u32) % per;
                        mat::weyl_op(d, choice / d, choice % d)
                    }
                    None => mat::eye(d),
                };
                op = mat::kron(&op, &factor);
            }
            op
        })
        .collect()
}

fn five_bit_graphs(g: &mut Gate) {
    let (pentagon, wheel) = codes::five_bit_code_graphs();
    let mut ok = true;
    let mut detail = String::new();
    for (code, name) in [(pentagon, "pentagon"), (wheel, "wheel")] {
        let v = code.build_isometry().unwrap();
        let mut small_all = true;
        let mut agreement = true;
        let mut some_weight3_fails = false;
        for z in codes::output_subsets(code.n_out()) {
            if z.len() > 3 {
                continue;
            }
            let detects = code.detects_configuration(&z).unwrap();
            if z.len() <= 2 {
                small_all &= detects;
            } else if !detects {
                some_weight3_fails = true;
            }
            let kl = kl_condition(&v, &ops_on_sites(code.d(), code.n_out(), &z))
                .unwrap()
                .is_some();
            agreement &= kl == detects;
        }
        let k1 = code.corrects_k_errors(1).unwrap();
        let k2 = code.corrects_k_errors(2).unwrap();
        ok &= small_all && agreement && k1 && !k2 && some_weight3_fails;
        detail.push_str(&format!(
            "{name}: weight<=2 {small_all}, kl agreement {agreement}, k=1 {k1}, k=2 {k2}; "
        ));
    }
    g.check("11 five-bit graph codes", ok, detail);
}

fn protocols_gate(g: &mut Gate) {
    let s = TeleportationScheme::standard_qubit();
    let mut rng = mat::seeded_rng(3);
    let mut worst_dev = 0.0f64;
    for _ in 0..100 {
        let psi = mat::random_pure(&mut rng, 4);
        let rho = partial_trace(&DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap(), 1).unwrap();
        let (_, dev) = protocols::run_teleportation(&s, &rho).unwrap();
        worst_dev = worst_dev.max(dev);
    }
    let m = protocols::run_dense_coding(&s);
    let dense_dev = (&m - DMatrix::identity(4, 4)).abs().max();
    let mut monotone = true;
    for i in 0..=8 {
        let f = 0.55 + 0.05 * i as f64;
        let step =
            protocols::bbpssw_step(&protocols::isotropic_with_fidelity(f).unwrap()).unwrap();
        monotone &= step.fidelity_out > f;
    }
    let fixed = protocols::bbpssw_step(&protocols::isotropic_with_fidelity(1.0).unwrap())
        .unwrap()
        .fidelity_out;
    g.check(
        "12 teleportation, dense coding, distillation",
        worst_dev <= 1e-12 && dense_dev <= 1e-12 && monotone && (fixed - 1.0).abs() <= 1e-12,
        format!(
            "teleport deviation {worst_dev:.2e}, dense deviation {dense_dev:.2e}, gain at all grid fidelities {monotone}, fixed point offset {:.2e}",
            (fixed - 1.0).abs()
        ),
    );
}

#[test]
fn acceptance() {
    let mut g = Gate::new();
    family_thresholds(&mut g);
    upb_states(&mut g);
    wootters_vs_closed_forms(&mut g);
    relative_entropy_values(&mut g);
    noisy_channel_capacities(&mut g);
    bsc_capacity(&mut g);
    gaussian_decisions(&mut g);
    cloner_fidelities(&mut g);
    purifier(&mut g);
    spectrum_estimation(&mut g);
    five_bit_graphs(&mut g);
    protocols_gate(&mut g);
    assert!(
        g.failures.is_empty(),
        "{} acceptance checks failed:\n{}",
        g.failures.len(),
        g.failures.join("\n")
    );
}
