//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use crossnorm::bipartite::{random_density, random_pure, rng_from_seed, BipartiteOperator, Shape};
use crossnorm::cross_norm::{
    hermitian_upper, lower_bound_realignment, lower_bound_witness, pi_bounds, robustness_upper,
    upper_bound_spectral, witness_value, BoundsConfig, RobustnessConfig, Side,
};
use crossnorm::injective::g_norm_seesaw;
use crossnorm::separability::gallery::{
    isotropic, max_entangled, max_entangled_vector, pure_with_schmidt, random_separable,
};
use crossnorm::separability::{
    build_witness_en, classify, ppt_oracle, witness_check, ClassifyConfig, Evidence, Verdict,
    Witness,
};
use crossnorm::truncation::{dense_check, divergent_lower_bound, mixing_lower_bound, Background, BlockFamily};
use crossnorm::SeeSawConfig;
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! require {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T>(r: crossnorm::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let mut rng = rng_from_seed(1);
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let shape = Shape::new(rng.random_range(1..=6), rng.random_range(1..=6)).unwrap();
        let v = random_pure(shape, seed);
        let d = v.projector();
        let exact = pure_value_oracle(&v);
        let upper = lib(upper_bound_spectral(&d))?.0;
        let lower = lib(lower_bound_witness(&d, &SeeSawConfig::with_seed(seed)))?.value;
        let err = (upper - exact).abs().max((lower - exact).abs());
        require!(err <= 1e-6, "seed {seed} {}x{}: upper {upper}, lower {lower}, oracle {exact}", shape.dh(), shape.dj());
        worst = worst.max(err);
    }
    for (coeffs, expected) in [
        (vec![0.5f64.sqrt(), 0.5f64.sqrt()], 2.0),
        (vec![0.8f64.sqrt(), 0.2f64.sqrt()], 1.8),
    ] {
        let d = lib(pure_with_schmidt(&coeffs))?.projector();
        let upper = lib(upper_bound_spectral(&d))?.0;
        let lower = lib(lower_bound_witness(&d, &SeeSawConfig::with_seed(0)))?.value;
        require!(
            (upper - expected).abs() <= 1e-6 && (lower - expected).abs() <= 1e-6,
            "{coeffs:?}: [{lower}, {upper}] vs {expected}"
        );
    }
    Ok(format!("200 states, worst deviation {worst:.1e}; Bell 2, (√0.8,√0.2) 1.8"))
}

fn criterion_2() -> Outcome {
    for d in 2..=4 {
        let b = lib(pi_bounds(&lib(max_entangled(d))?, &BoundsConfig::with_seed(d as u64)))?;
        let (l, u) = (b.pi_lower.value, b.pi_upper.value);
        require!(
            (l - d as f64).abs() <= 1e-6 && (u - d as f64).abs() <= 1e-6,
            "max_entangled({d}): [{l}, {u}]"
        );
    }
    let mut rng = rng_from_seed(2);
    for seed in 0..200u64 {
        let shape = Shape::new(rng.random_range(1..=4), rng.random_range(1..=4)).unwrap();
        let d = random_density(shape, seed);
        let u = lib(upper_bound_spectral(&d))?.0;
        let m = shape.min_dim() as f64;
        require!(u <= m + 1e-8, "seed {seed}: spectral upper {u} > m = {m}");
    }
    Ok("d = 2, 3, 4 pinch at d; 200 densities below m".into())
}

fn criterion_3() -> Outcome {
    let shapes = [(2, 2), (2, 3), (3, 2)];
    for seed in 0..100u64 {
        let (dh, dj) = shapes[seed as usize % 3];
        let k = 1 + seed as usize % 5;
        let (d, _) = lib(random_separable(Shape::new(dh, dj).unwrap(), k, 1000 + seed))?;
        let cl = lib(classify(&d, &ClassifyConfig::with_seed(seed)))?;
        require!(cl.verdict == Verdict::Separable, "seed {seed} {dh}x{dj} k={k}: {:?}", cl.verdict);
        let Evidence::Mixture(m) = &cl.evidence else {
            return Err(format!("seed {seed}: separable without a mixture"));
        };
        let rep = m.validate(&d);
        require!(
            rep.valid && rep.reconstruction_error <= 1e-8 && m.is_positive() && (m.total() - 1.0).abs() <= 1e-8,
            "seed {seed}: mixture certificate fails (error {}, total {})",
            rep.reconstruction_error,
            m.total()
        );
        let b = lib(pi_bounds(&d, &fast_config(seed)))?;
        for (method, _, side, value) in &b.candidates {
            require!(
                *side == Side::Upper || *value <= 1.0 + 1e-8,
                "seed {seed}: lower bound {method} = {value}"
            );
        }
    }
    Ok("100 mixtures over 2x2, 2x3, 3x2 certified separable".into())
}

fn criterion_4() -> Outcome {
    let shape = Shape::square(2).unwrap();
    let (mut ppt, mut entangled) = (0, 0);
    for seed in 0..500u64 {
        let d = random_density(shape, 40_000 + seed);
        let min_pt = min_pt_eigenvalue(&d);
        let is_ppt = min_pt >= 0.0;
        let cl = lib(classify(&d, &ClassifyConfig::with_seed(seed)))?;
        if cl.verdict == Verdict::Entangled {
            entangled += 1;
        }
        if is_ppt {
            ppt += 1;
            require!(cl.verdict != Verdict::Entangled, "seed {seed}: PPT state classified entangled");
            let r = lower_bound_realignment(&d);
            require!(r <= 1.0 + 1e-8, "seed {seed}: PPT state with realignment {r}");
        }
        let lower = lib(pi_bounds(&d, &fast_config(seed)))?.pi_lower.value;
        if lower > 1.0 + 1e-6 {
            require!(min_pt < 0.0, "seed {seed}: lower bound {lower} on a PPT state");
        }
    }
    Ok(format!("500 states: {ppt} PPT, {entangled} certified entangled"))
}

fn criterion_5() -> Outcome {
    let third = 1.0 / 3.0;
    let mut rows = 0;
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        if (p - third).abs() <= 1e-6 {
            continue;
        }
        let d = lib(isotropic(p, 2))?;
        let w = lib(lower_bound_witness(&d, &SeeSawConfig::with_seed(i)))?.value;
        require!((w - (1.5 * p + 0.5)).abs() <= 1e-6, "p = {p}: witness {w}");
        let cl = lib(classify(&d, &ClassifyConfig::with_seed(i)))?;
        require!(
            (cl.verdict == Verdict::Entangled) == (p > third + 1e-6),
            "p = {p}: verdict {:?}",
            cl.verdict
        );
        let pt = lib(ppt_oracle(&d))?.min_eigenvalue;
        require!((pt - (1.0 - 3.0 * p) / 4.0).abs() <= 1e-12, "p = {p}: PT eigenvalue {pt}");
        rows += 1;
    }
    let f = |p: f64| lib(ppt_oracle(&lib(isotropic(p, 2))?)).map(|r| r.min_eigenvalue);
    let (mut a, mut b) = (0.0, 1.0);
    while b - a > 1e-12 {
        let mid = 0.5 * (a + b);
        if f(mid)? >= 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let root = 0.5 * (a + b);
    require!((root - third).abs() <= 1e-9, "PT eigenvalue changes sign at {root}");
    Ok(format!("{rows} grid points; sign change at p = {root:.12}"))
}

fn criterion_6() -> Outcome {
    for seed in 0..500u64 {
        let mut cfg = BoundsConfig::with_seed(seed);
        cfg.seesaw.restarts = 8;
        cfg.robustness = RobustnessConfig {
            max_atoms: 16,
            max_iters: 8,
            seed,
            ..RobustnessConfig::default()
        };
        props::sandwich(seed, &cfg)?;
    }
    let checks: [(&str, fn(u64) -> props::Check); 7] = [
        ("projection", props::projection),
        ("contraction", props::contraction),
        ("ptp", props::ptp),
        ("block", props::block_bounds),
        ("submultiplicative", props::submultiplicative),
        ("realignment", props::realignment_consistency),
        ("local unitary", props::local_unitary_invariance),
    ];
    for (name, check) in checks {
        for seed in 0..100u64 {
            check(seed).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok("500 sandwich checks and 700 monotonicity checks, no violations".into())
}

fn criterion_7() -> Outcome {
    let bell_state = operator(Shape::square(2).unwrap(), bell());
    let (h, dec) = lib(hermitian_upper(&bell_state))?;
    require!((h - 3.0).abs() <= 1e-9, "hermitian_upper = {h}");
    require!(dec.validate(&bell_state).valid, "Hermitian decomposition does not validate");
    let oracle = bell_two_term_oracle(40, 10).ok_or("two-term oracle found nothing")?;
    require!((oracle - 3.0).abs() <= 1e-12, "two-term oracle gives {oracle}");
    let outcome = lib(robustness_upper(&bell_state, &RobustnessConfig::default()))?;
    let cert = outcome.certificate().ok_or("robustness search gave no certificate")?;
    require!(cert.decomposition.validate(&bell_state).valid, "robustness decomposition does not validate");
    require!(
        (2.0 - 1e-9..=3.05).contains(&cert.value),
        "robustness value {} outside [2, 3.05]",
        cert.value
    );
    Ok(format!("hermitian {h}, oracle {oracle}, robustness {:.6}", cert.value))
}

fn criterion_8() -> Outcome {
    let fam = BlockFamily::dyadic_preset(3);
    let lemosd = [2.0, 3.0, 14.0 / 3.0];
    let witness = [2.0, 4.0, 8.0];
    let mut prev = 0.0;
    for n in 1..=3 {
        let b = lib(divergent_lower_bound(&fam, n))?;
        require!((b.lemosd - lemosd[n - 1]).abs() <= 1e-12, "N = {n}: lemosd {}", b.lemosd);
        require!((b.witness - witness[n - 1]).abs() <= 1e-12, "N = {n}: witness {}", b.witness);
        require!(b.value() > prev, "N = {n}: bound {} does not grow", b.value());
        prev = b.value();
    }
    for n in 1..=2 {
        let b = lib(divergent_lower_bound(&fam, n))?;
        let d = lib(fam.dense(n))?;
        let c = lib(fam.block_vector(n, b.witness_level))?;
        // Direct quadratic form, scaled by the leading Schmidt coefficient.
        let a1 = schmidt_oracle(&c)[0];
        let direct = (c.data().adjoint() * d.matrix() * c.data())[(0, 0)].re / (a1 * a1);
        require!((direct - b.witness).abs() <= 1e-9, "N = {n}: dense witness {direct} vs {}", b.witness);
        let check = lib(dense_check(&fam, n, &SeeSawConfig { restarts: 4, ..SeeSawConfig::with_seed(n as u64) }))?;
        require!(
            (check.block_witness_value - b.witness).abs() <= 1e-9,
            "N = {n}: dense check {} vs {}",
            check.block_witness_value,
            b.witness
        );
        let upper = lib(upper_bound_spectral(&d))?.0;
        require!(
            b.value() <= upper + 1e-9 && check.pi_lower <= upper + 1e-9,
            "N = {n}: lower bounds above spectral upper {upper}"
        );
    }
    Ok("lemosd 2, 3, 14/3; witness 2, 4, 8; dense N <= 2 agrees".into())
}

fn criterion_9() -> Outcome {
    let v = lib(max_entangled_vector(2))?;
    let shape = v.shape();
    for p in [0.25, 0.5, 1.0] {
        let b = lib(mixing_lower_bound(p, &v, &Background::MaximallyMixed, 2))?;
        require!(b.value >= 2.0 * p - 1e-9, "p = {p}: bound {} < 2p", b.value);
        require!((b.value - (1.5 * p + 0.5)).abs() <= 1e-12, "p = {p}: bound {} vs 1.5p + 0.5", b.value);
        let m = bell().scale(p) + crossnorm::CMatrix::identity(4, 4).scale((1.0 - p) / 4.0);
        let dense = lib(witness_value(&operator(shape, m), &v))?;
        require!((dense - b.value).abs() <= 1e-12, "p = {p}: dense witness {dense} vs {}", b.value);
    }
    Ok("p = 0.25, 0.5, 1 give 1.5p + 0.5".into())
}

fn contract(w: &Witness, d: Option<&BipartiteOperator>, label: &str) -> Result<(), String> {
    let rep = witness_check(w, d);
    require!(w.g_norm_certified_upper <= 1.0 + 1e-12, "{label}: certified bound {}", w.g_norm_certified_upper);
    require!(rep.bound_holds && rep.g_norm_upper <= 1.0 + 1e-9, "{label}: recomputed G bound {}", rep.g_norm_upper);
    require!(rep.operator_norm > 1.0 + 1e-9, "{label}: operator norm {}", rep.operator_norm);
    Ok(())
}

fn criterion_10() -> Outcome {
    let e2 = lib(build_witness_en(&lib(max_entangled_vector(2))?, 2))?;
    let rep = witness_check(&e2, None);
    require!((rep.g_norm_upper - 1.0).abs() <= 1e-12, "E2 G bound {}", rep.g_norm_upper);
    require!((rep.operator_norm - 2.0).abs() <= 1e-12, "E2 operator norm {}", rep.operator_norm);
    let est = lib(g_norm_seesaw(&e2.operator, &SeeSawConfig::with_seed(10)))?;
    require!(
        est.lower_bound >= 1.0 - 1e-8 && est.lower_bound <= 1.0 + 1e-9,
        "E2 see-saw {}",
        est.lower_bound
    );
    let mut emitted = 1;
    contract(&e2, None, "E2")?;
    let mut rng = rng_from_seed(10);
    for seed in 0..50u64 {
        let shape = Shape::new(rng.random_range(2..=4), rng.random_range(2..=4)).unwrap();
        let v = random_pure(shape, seed);
        let n = rng.random_range(2..=shape.min_dim());
        contract(&lib(build_witness_en(&v, n))?, None, &format!("E_{n} seed {seed}"))?;
        emitted += 1;
    }
    let mut states = vec![lib(max_entangled(2))?, lib(max_entangled(3))?, lib(isotropic(0.6, 2))?, lib(isotropic(0.5, 3))?];
    states.extend((0..30).map(|s| random_density(Shape::square(2).unwrap(), 40_000 + s)));
    states.extend((0..10).map(|s| random_density(Shape::new(2, 3).unwrap(), 50_000 + s)));
    for (i, d) in states.iter().enumerate() {
        let cl = lib(classify(d, &ClassifyConfig::with_seed(i as u64)))?;
        if let Evidence::Witness { witness, expectation } = &cl.evidence {
            require!(*expectation > 1.0 + 1e-9, "state {i}: expectation {expectation}");
            contract(witness, Some(d), &format!("state {i}"))?;
            emitted += 1;
        }
    }
    Ok(format!("{emitted} witnesses checked; E2 G = 1, see-saw {:.10}, operator norm 2", est.lower_bound))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("pure-state closed form", criterion_1),
        ("saturation by maximally entangled states", criterion_2),
        ("separable branch of the classifier", criterion_3),
        ("two-qubit PPT consistency", criterion_4),
        ("isotropic threshold", criterion_5),
        ("norm sandwich and monotonicity", criterion_6),
        ("Hermitian norm of Bell", criterion_7),
        ("divergence of the block family", criterion_8),
        ("mixing bound", criterion_9),
        ("witness contract", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
