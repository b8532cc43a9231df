//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use kaczmarz_core::frames::{
    cauchy_coeffs, defect_curve, gram_window, kaczmarz_duals_L2mu, parseval_defect_L2mu, Enumeration, FunctionCoeffs,
};
use kaczmarz_core::ifs::{
    chaos_sample, digit_statistics, fourier_eval, geometry_report, invariance_check, kakutani_affinity, perron_frobenius_check,
    removed_area, scaling_residual, ChaosConfig, DigitLaw, IfsSystem, KakutaniVerdict, SamplingMode, TestFunction,
    DEFAULT_FOURIER_TOL,
};
use kaczmarz_core::kaczmarz::{cyclic_sweeps, default_probes, dual_consistency, dual_sequence, fig2_system, verify_identities, ProjectionSystem};
use kaczmarz_core::linalg::ComplexVector;
use kaczmarz_core::mc;
use kaczmarz_core::random::{run_random_products, sampling_weights, standard_frame, RandomProjectionLaw, RandomRunConfig};
use num_complex::Complex64;

const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// The 50 random rank-one systems shared by criteria 1 and 2.
fn random_panel() -> Vec<ProjectionSystem> {
    (0..50)
        .map(|i| {
            let dim = 2 + i % 15;
            ProjectionSystem::random_rank1(dim, 33, &mut mc::stream(SEED, i as u64))
        })
        .collect()
}

fn c1_operator_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    for sys in random_panel() {
        let r = verify_identities(&sys, 32).unwrap();
        worst = worst.max(r.max_delta1()).max(r.max_delta2());
    }
    outcome(worst <= 1e-11, format!("max(delta1, delta2) = {worst:.2e} over 50 systems"))
}

fn c2_dual_consistency() -> Outcome {
    let (mut dual, mut lemma): (f64, f64) = (0.0, 0.0);
    for sys in random_panel() {
        let e = sys.unit_vectors(32).unwrap();
        dual = dual.max(dual_consistency(&sys, &dual_sequence(&e).unwrap()).unwrap());
        lemma = lemma.max(verify_identities(&sys, 32).unwrap().max_lemma_qn());
    }
    outcome(dual <= 1e-10 && lemma <= 1e-11, format!("|Q_n - |e_n><g_n|| = {dual:.2e}, Q_n residual = {lemma:.2e}"))
}

fn c3_fig2() -> Outcome {
    let (a, b) = fig2_system();
    let x_star = a.solve(&b).unwrap();
    let trace = cyclic_sweeps(&a, &b, &ComplexVector::zeros(2), 500).unwrap();
    let err = trace.last().distance(&x_star);
    let pyth = trace.pythagoras_defects(&x_star).into_iter().fold(0.0, f64::max);
    outcome(err < 1e-8 && pyth <= 1e-10, format!("|x - x*| = {err:.2e}, max Pythagoras defect = {pyth:.2e}"))
}

fn decay_laws() -> Vec<(&'static str, RandomProjectionLaw)> {
    let (a, _) = fig2_system();
    let two = [ComplexVector::from_real(&[1.0, 0.0]), ComplexVector::from_real(&[(PI / 3.0).cos(), (PI / 3.0).sin()])];
    let mut rng = mc::stream(SEED, 1000);
    let atoms: Vec<_> = (0..6).map(|_| ComplexVector::random_unit(4, &mut rng)).collect();
    vec![
        ("two lines at pi/3", RandomProjectionLaw::uniform_rank1(&two).unwrap()),
        ("two-line matrix, row weights", sampling_weights(&a, &standard_frame(2)).unwrap().law),
        ("6 random atoms in C^4", RandomProjectionLaw::uniform_rank1(&atoms).unwrap()),
    ]
}

fn decay_config() -> RandomRunConfig {
    RandomRunConfig { n_max: 50, trials: 2000, seed: SEED, randomize_first: false }
}

fn c4_random_decay() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, law) in decay_laws() {
        let r = run_random_products(&law, decay_config(), &default_probes(law.dim(), 2, SEED)).unwrap();
        pass &= r.pass();
        parts.push(format!("{name}: C = {:.4}, max mean/envelope = {:.3}", r.c, r.envelope_ratio_max()));
    }
    outcome(pass, parts.join("; "))
}

fn five_functions(dim: usize) -> Vec<TestFunction> {
    let mut n = vec![0; dim];
    n[0] = 1;
    vec![
        TestFunction::Constant,
        TestFunction::Coordinate { index: 0 },
        TestFunction::Coordinate { index: 1 },
        TestFunction::Product { i: 0, j: 1 },
        TestFunction::Exponential { n },
    ]
}

const INVARIANCE_SYSTEMS: [&str; 3] = ["sierpinski-gasket", "sierpinski-carpet", "eiffel"];

fn c5_invariance() -> Outcome {
    let mut failed = Vec::new();
    let mut worst: f64 = 0.0;
    for name in INVARIANCE_SYSTEMS {
        let sys = IfsSystem::builtin(name).unwrap();
        let cloud = chaos_sample(&sys, &ChaosConfig::new(1_000_000, SEED)).unwrap();
        for f in five_functions(sys.dim()) {
            let r = invariance_check(&sys, &f, &cloud).unwrap();
            if r.std_err > 0.0 {
                worst = worst.max(r.defect / r.std_err);
            }
            if !r.pass {
                failed.push(format!("{name}/{}", r.function));
            }
        }
    }
    outcome(failed.is_empty(), format!("15 checks at 10^6 points, max defect/se = {worst:.2}, failures: {failed:?}"))
}

fn fourier_window() -> Vec<[f64; 2]> {
    (-3..=3).flat_map(|i| (-3..=3).map(move |j| [i as f64, j as f64])).collect()
}

fn c6_fourier() -> Outcome {
    let sys = IfsSystem::builtin("sierpinski-gasket").unwrap();
    let residual = fourier_window()
        .iter()
        .map(|l| scaling_residual(&sys, l, DEFAULT_FOURIER_TOL).unwrap())
        .fold(0.0, f64::max);
    let n = 1_000_000;
    let cloud = chaos_sample(&sys, &ChaosConfig::new(n, SEED + 6)).unwrap();
    let mut gap: f64 = 0.0;
    for l in fourier_window() {
        let terms: Vec<Complex64> = cloud.points().map(|x| Complex64::cis(2.0 * PI * (l[0] * x[0] + l[1] * x[1]))).collect();
        let empirical = mc::pairwise_sum_complex(&terms) / n as f64;
        gap = gap.max((empirical - fourier_eval(&sys, &l, DEFAULT_FOURIER_TOL).unwrap().value).norm());
    }
    let bound = 3.0 / (n as f64).sqrt();
    outcome(
        residual <= 1e-10 && gap <= bound,
        format!("telescoping residual = {residual:.2e}, max |chaos - product| = {gap:.2e} (bound {bound:.1e})"),
    )
}

fn c7_digits() -> Outcome {
    let sys = IfsSystem::builtin("sierpinski-gasket").unwrap();
    let r = digit_statistics(&sys, 1_000_000, 12, SEED).unwrap();
    let cond_one = r.levels.iter().all(|l| l.conditional[1][0] == 1.0);
    outcome(
        r.pass && r.violations == 0 && cond_one,
        format!("marginals within 3 sigma for k <= 12: {}, violations = {}, Pr(eta=0 | eps=1) = 1: {cond_one}", r.pass, r.violations),
    )
}

fn c8_perron_frobenius() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["sierpinski-gasket", "eiffel"] {
        let law = DigitLaw::from_ifs(&IfsSystem::builtin(name).unwrap()).unwrap();
        let v = law.x_marginal();
        let r = perron_frobenius_check(&law.transition().unwrap(), &v).unwrap();
        pass &= r.defect <= 1e-14;
        parts.push(format!("{name}: v = {v:.4?}, |vT - v| = {:.1e}", r.defect));
    }
    outcome(pass, parts.join("; "))
}

fn c9_kakutani() -> Outcome {
    let r = kakutani_affinity(&[2.0 / 3.0, 1.0 / 3.0], &[0.5, 0.5]).unwrap();
    // Direct evaluation: sqrt(1/3) + sqrt(1/6).
    let oracle = (1.0f64 / 3.0).sqrt() + (1.0f64 / 6.0).sqrt();
    let same = kakutani_affinity(&[2.0 / 3.0, 1.0 / 3.0], &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
    let pass = (r.rho - 0.98560).abs() <= 1e-5
        && (r.rho - oracle).abs() <= 1e-12
        && r.verdict == KakutaniVerdict::MutuallySingular
        && same.verdict == KakutaniVerdict::Equivalent;
    outcome(pass, format!("rho = {:.6}, verdict {:?}; equal laws: {:?}", r.rho, r.verdict, same.verdict))
}

fn c10_geometry() -> Outcome {
    let gap = 0.5 - removed_area(20);
    let sys = IfsSystem::builtin("sierpinski-gasket").unwrap();
    let dims: Vec<f64> = [8, 10, 12].iter().map(|&d| geometry_report(&sys, d).unwrap().box_dim).collect();
    let dim_ok = dims.iter().all(|d| (d - 1.585).abs() <= 0.05);
    outcome(
        gap <= 1e-6 && dim_ok,
        format!("1/2 - area(20) = {gap:.3e} (needs <= 1e-6); box dims at depth 8/10/12 = {dims:.4?}"),
    )
}

fn c11_frames() -> Outcome {
    let leb = IfsSystem::builtin("lebesgue-interval").unwrap();
    let mixed = FunctionCoeffs::new(vec![
        (vec![0], Complex64::new(0.5, 0.0)),
        (vec![3], Complex64::new(0.0, -1.0)),
        (vec![7], Complex64::new(0.25, 0.25)),
    ]);
    let leb_defect = [FunctionCoeffs::exponential(vec![1]), mixed]
        .iter()
        .flat_map(|f| defect_curve(&leb, Enumeration::Natural1d, &[16, 32, 64], DEFAULT_FOURIER_TOL, f).unwrap())
        .map(|p| p.1)
        .fold(0.0, f64::max);

    let xi = IfsSystem::builtin("bernoulli-2-3").unwrap();
    let f = FunctionCoeffs::exponential(vec![1]);
    let curve = defect_curve(&xi, Enumeration::Natural1d, &[16, 32, 64, 128, 256], DEFAULT_FOURIER_TOL, &f).unwrap();
    let decreasing = curve.windows(2).all(|p| p[1].1 < p[0].1);

    let w = gram_window(&xi, Enumeration::Natural1d, 64, DEFAULT_FOURIER_TOL).unwrap();
    let d = kaczmarz_duals_L2mu(&w);
    let bits = cauchy_coeffs(&w, &d, &f).unwrap().isometry_defect.to_bits() == parseval_defect_L2mu(&w, &d, &f).unwrap().defect.to_bits();

    let values: Vec<f64> = curve.iter().map(|p| p.1).collect();
    outcome(
        leb_defect <= 1e-12 && decreasing && bits,
        format!("Lebesgue defect = {leb_defect:.1e}; xi defects 16..256 = {values:.5?}; Cauchy bit-identical: {bits}"),
    )
}

fn c12_negative_control() -> Outcome {
    let sys = IfsSystem::builtin("product-lebesgue-times-cantor").unwrap();
    let f = FunctionCoeffs::cosine(2, 0, 1);
    let curve = defect_curve(&sys, Enumeration::Diagonal, &[16, 32, 64, 128], DEFAULT_FOURIER_TOL, &f).unwrap();
    let floor = curve.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    outcome(floor > 0.1, format!("min defect over windows 16..128 = {floor:.4}"))
}

/// Serialized outputs of the stochastic criteria 4 to 7.
fn stochastic_outputs() -> Vec<String> {
    let mut out: Vec<String> = decay_laws()
        .iter()
        .map(|(_, law)| {
            let r = run_random_products(law, decay_config(), &default_probes(law.dim(), 2, SEED)).unwrap();
            serde_json::to_string(&r.probes.iter().map(|p| (&p.mean, &p.std_err)).collect::<Vec<_>>()).unwrap()
        })
        .collect();
    for name in INVARIANCE_SYSTEMS {
        let sys = IfsSystem::builtin(name).unwrap();
        let cloud = chaos_sample(&sys, &ChaosConfig::new(1_000_000, SEED)).unwrap();
        let reports: Vec<_> = five_functions(sys.dim()).iter().map(|f| invariance_check(&sys, f, &cloud).unwrap()).collect();
        out.push(serde_json::to_string(&reports).unwrap());
    }
    let sys = IfsSystem::builtin("sierpinski-gasket").unwrap();
    let cloud = chaos_sample(&sys, &ChaosConfig::new(1_000_000, SEED + 6)).unwrap();
    out.push(serde_json::to_string(&cloud.points().flatten().map(|v| v.to_bits()).collect::<Vec<_>>()).unwrap());
    let chain = chaos_sample(&sys, &ChaosConfig::new(100_000, SEED).with_mode(SamplingMode::Chain)).unwrap();
    out.push(serde_json::to_string(&chain.points().flatten().map(|v| v.to_bits()).collect::<Vec<_>>()).unwrap());
    out.push(serde_json::to_string(&digit_statistics(&sys, 1_000_000, 12, SEED).unwrap()).unwrap());
    out
}

fn c13_determinism() -> Outcome {
    let in_pool = |threads: usize| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(stochastic_outputs);
    let first = in_pool(1);
    let others = [in_pool(3), in_pool(1)];
    let identical = others.iter().all(|r| *r == first);
    outcome(identical, format!("{} stochastic outputs compared across 1 and 3 workers and a rerun", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("operator identities", c1_operator_identities),
        ("dual consistency", c2_dual_consistency),
        ("classical two-line system", c3_fig2),
        ("random Kaczmarz decay", c4_random_decay),
        ("IFS invariance", c5_invariance),
        ("Fourier scaling", c6_fourier),
        ("digit statistics", c7_digits),
        ("Perron-Frobenius", c8_perron_frobenius),
        ("Kakutani", c9_kakutani),
        ("geometry", c10_geometry),
        ("frames in L2(mu)", c11_frames),
        ("negative control", c12_negative_control),
        ("determinism", c13_determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
