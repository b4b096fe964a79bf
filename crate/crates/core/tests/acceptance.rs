//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances and runtime limits are pinned below.

use std::time::{Duration, Instant};

use motion_harmonics::eigenspace::{
    analyze, analyze_samples, circle_samples, ktype_project, laplacian_residual, synthesize,
    EigenFunctionHandle, SphereDensity, DEFAULT_BUDGET,
};
use motion_harmonics::positivity::{
    bochner_test, gram_matrix, is_positive_semidefinite, BochnerConfig, EvaluatorSettings,
    PdVerdict, PointConfig,
};
use motion_harmonics::seed::{rng_from_seed, subseed};
use motion_harmonics::spherical::{
    boundedness_classify, phi_asymptotic, phi_radial, psi_monte_carlo_many, recommended_nodes,
    BoundednessConfig, Verdict,
};
use motion_harmonics::{
    rank_one_model, sl_flat_model, transitive_groups, Error, GroupSpec, LogComplex, PVector,
    SpectralParam,
};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

type Outcome = Result<String, String>;
/// Number, name, runtime limit, check.
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// J_k(x) from its power series Σ_j (−1)^j (x/2)^{2j+k} / (j!(j+k)!).
fn bessel_series(k: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (1..=k).fold(1.0, |acc, m| acc * half / m as f64);
    let mut sum = term;
    for j in 1..200u32 {
        term *= -half * half / (j as f64 * (j + k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn bessel_signed(k: i64, x: f64) -> f64 {
    let v = bessel_series(k.unsigned_abs() as u32, x);
    if k < 0 && k % 2 != 0 {
        -v
    } else {
        v
    }
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for s in [c(0.5, 0.0), c(1.0, 0.0), c(0.0, 2.0), c(1.0, 1.0)] {
        for r in [0.1, 1.0, 5.0, 20.0] {
            let z = s * r;
            let oracle = LogComplex::from_complex(z.sinh() / z);
            let got = phi_radial(3, s, r, recommended_nodes(s, r)).map_err(|e| e.to_string())?;
            let err = got.value.relative_distance(oracle);
            worst = worst.max(err);
            ensure(err <= 1e-10, || {
                format!("s={s} r={r}: relative error {err:.3e} > 1e-10")
            })?;
        }
    }
    Ok(format!(
        "16 cases, max relative error {worst:.2e} (tol 1e-10)"
    ))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [0.5, 2.0, 10.0] {
        let s = c(0.0, 1.0);
        let got = phi_radial(2, s, r, recommended_nodes(s, r)).map_err(|e| e.to_string())?;
        let oracle = bessel_series(0, r);
        let err = (got.value.to_complex() - oracle).norm();
        worst = worst.max(err);
        ensure(err <= 1e-9, || format!("r={r}: |Δ| = {err:.3e} > 1e-9"))?;
    }
    Ok(format!("3 radii, max |Δ| {worst:.2e} (tol 1e-9)"))
}

fn criterion_3() -> Outcome {
    // differences below this are rounding noise and count as ties
    const TIE: f64 = 1e-12;
    let mut endpoint: f64 = 0.0;
    for n in 2..=5 {
        for s in [c(1.0, 0.0), c(1.0, 1.0)] {
            let mut prev = f64::INFINITY;
            for z in [200.0, 500.0, 1000.0, 2000.0] {
                let r = z / s.norm();
                let q = phi_radial(n, s, r, recommended_nodes(s, r)).map_err(|e| e.to_string())?;
                ensure(q.err_est <= 1e-10, || {
                    format!("n={n} s={s} |s|r={z}: quadrature err_est {:.2e}", q.err_est)
                })?;
                let a = phi_asymptotic(n, s, r).map_err(|e| e.to_string())?;
                let dev = q.value.relative_distance(a);
                ensure(dev <= prev + TIE, || {
                    format!("n={n} s={s}: |ratio−1| rose from {prev:.3e} to {dev:.3e} at |s|r={z}")
                })?;
                prev = dev;
            }
            endpoint = endpoint.max(prev);
            ensure(prev <= 1e-3, || {
                format!("n={n} s={s}: |ratio−1| = {prev:.3e} > 1e-3 at |s|r=2000")
            })?;
        }
    }
    Ok(format!(
        "monotone decay in 8 series, max |ratio−1| at |s|r=2000: {endpoint:.2e} (tol 1e-3)"
    ))
}

fn criterion_4() -> Outcome {
    let cfg = BoundednessConfig {
        samples: 100_000,
        seed: 4,
        ..Default::default()
    };
    let mut correct = 0;
    let mut total = 0;
    for n in [2, 3] {
        let model = rank_one_model(n, GroupSpec::so(n).unwrap()).unwrap();
        for a in [0.0, 0.5, 1.0, 2.0] {
            for b in [0.0, 0.25, -0.25, 1.0, -1.0] {
                let lam = SpectralParam(vec![c(a, b)]);
                let r = boundedness_classify(&model, &lam, &cfg).map_err(|e| e.to_string())?;
                let want = if b == 0.0 {
                    Verdict::Bounded
                } else {
                    Verdict::Unbounded
                };
                total += 1;
                ensure(r.verdict == want, || {
                    format!("rank1:{n} λ={a}{b:+}i: {:?}, expected {want:?}", r.verdict)
                })?;
                correct += 1;
            }
        }
    }
    let model = sl_flat_model(2).unwrap();
    let cases = [
        (c(0.0, 0.0), Verdict::Bounded),
        (c(0.5, 0.0), Verdict::Bounded),
        (c(1.0, 0.0), Verdict::Bounded),
        (c(2.0, 0.0), Verdict::Bounded),
        (c(0.0, 0.5), Verdict::Unbounded),
        (c(0.0, -0.5), Verdict::Unbounded),
        (c(1.0, 0.5), Verdict::Unbounded),
        (c(2.0, -1.0), Verdict::Unbounded),
    ];
    for (lam, want) in cases {
        let r = boundedness_classify(&model, &SpectralParam(vec![lam]), &cfg)
            .map_err(|e| e.to_string())?;
        total += 1;
        ensure(r.verdict == want, || {
            format!("sl:2 λ={lam}: {:?}, expected {want:?}", r.verdict)
        })?;
        correct += 1;
    }
    Ok(format!(
        "{correct}/{total} verdicts correct (rank one 40/40, sl:2 8/8, 1e5 MC samples)"
    ))
}

fn criterion_5() -> Outcome {
    let mut min_seen = f64::INFINITY;
    for n in [2, 3] {
        let model = rank_one_model(n, GroupSpec::so(n).unwrap()).unwrap();
        for lam in [0.5, 1.0, 3.0] {
            let param = SpectralParam::real(&[lam]);
            let cfg = BochnerConfig {
                trials: 20,
                m: 8,
                seed: 5,
                ..Default::default()
            };
            let report = bochner_test(&model, &param, &cfg).map_err(|e| e.to_string())?;
            ensure(report.verdict == PdVerdict::PositiveDefinite, || {
                format!("rank1:{n} λ={lam}: verdict {:?}", report.verdict)
            })?;
            for trial in 0..20u64 {
                let pts = if trial % 2 == 0 {
                    PointConfig::collinear(&model, 0, 8, 0.25)
                } else {
                    PointConfig::random(&model, 8, 1.0, subseed(5, trial))
                }
                .map_err(|e| e.to_string())?;
                let g = gram_matrix(&model, &param, &pts, &EvaluatorSettings::default())
                    .map_err(|e| e.to_string())?;
                let (psd, min) =
                    is_positive_semidefinite(&g.matrix, 1e-8 * 8.0).map_err(|e| e.to_string())?;
                min_seen = min_seen.min(min);
                ensure(psd && min >= -1e-8 * 8.0, || {
                    format!("rank1:{n} λ={lam} trial {trial}: min eigenvalue {min:.3e}")
                })?;
            }
        }
        for lam in [c(0.0, 0.5), c(1.0, 1.0)] {
            for trial in 0..20u64 {
                let cfg = BochnerConfig {
                    trials: 1,
                    m: 8,
                    seed: subseed(55, trial),
                    ..Default::default()
                };
                let report = bochner_test(&model, &SpectralParam(vec![lam]), &cfg)
                    .map_err(|e| e.to_string())?;
                ensure(report.verdict == PdVerdict::NotPositiveDefinite, || {
                    format!(
                        "rank1:{n} λ={lam} trial {trial}: verdict {:?}",
                        report.verdict
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "real λ: 120 Grams PSD, min eigenvalue {min_seen:.2e} (floor −8e-8); complex λ: 80/80 NotPositiveDefinite"
    ))
}

fn criterion_6() -> Outcome {
    const SAMPLES: usize = 200_000;
    let model = sl_flat_model(3).unwrap();
    let lam = SpectralParam::real(&[1.0, 0.3]);
    let mut rng = rng_from_seed(6);
    let ys: Vec<PVector> = (0..10)
        .map(|_| {
            PVector(
                (0..model.dim_p())
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect(),
            )
        })
        .collect();
    let base = psi_monte_carlo_many(&model, &lam, &ys, SAMPLES, subseed(6, 0))
        .map_err(|e| e.to_string())?;
    let orbit = model.weyl_orbit(&lam).map_err(|e| e.to_string())?;
    ensure(orbit.len() == 6, || {
        format!("Weyl orbit has {} elements, expected 6", orbit.len())
    })?;
    let mut worst: f64 = 0.0;
    for (idx, image) in orbit.iter().enumerate() {
        let est = psi_monte_carlo_many(&model, image, &ys, SAMPLES, subseed(6, idx as u64 + 1))
            .map_err(|e| e.to_string())?;
        for (y_idx, (a, b)) in base.iter().zip(&est).enumerate() {
            let sigma = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
            let z = (a.value - b.value).norm() / sigma;
            worst = worst.max(z);
            ensure(z <= 3.0, || {
                format!("image {idx}, Y {y_idx}: |Δψ| = {z:.2}σ > 3σ")
            })?;
        }
    }
    Ok(format!(
        "6 Weyl images × 10 points, max |Δψ| = {worst:.2}σ (limit 3σ, 2e5 samples)"
    ))
}

fn fit_slope(hs: &[f64], rs: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_7() -> Outcome {
    let hs = [1e-2, 5e-3, 2.5e-3];
    let mut slopes = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst_rel: f64 = 0.0;
    let mut checked = 0;
    for i in 0..50u64 {
        let n = 2 + (i % 2) as usize;
        let lam = 1.0 + ((i / 2) % 2) as f64;
        let seed = subseed(7, i);
        let density = SphereDensity::random(n, DEFAULT_BUDGET, seed).map_err(|e| e.to_string())?;
        let handle = EigenFunctionHandle::new(c(lam, 0.0), density);
        let mut rng = rng_from_seed(subseed(seed, 1));
        let x: Vec<f64> = (0..n)
            .map(|_| 2.0 * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
            .collect();
        let res: Vec<f64> = hs
            .iter()
            .map(|h| laplacian_residual(&handle, &x, *h))
            .collect::<Result<_, Error>>()
            .map_err(|e| e.to_string())?;
        let slope = fit_slope(&hs, &res);
        slopes = (slopes.0.min(slope), slopes.1.max(slope));
        ensure((slope - 2.0).abs() <= 0.2, || {
            format!("case {i} (n={n}, λ={lam}): slope {slope:.3}")
        })?;
        let f = synthesize(&handle, &x).map_err(|e| e.to_string())?;
        if f.norm() >= 0.1 {
            let r = laplacian_residual(&handle, &x, 1e-3).map_err(|e| e.to_string())?;
            let rel = r / (lam * lam * f.norm());
            worst_rel = worst_rel.max(rel);
            checked += 1;
            ensure(rel <= 1e-4, || {
                format!("case {i}: relative residual {rel:.3e} > 1e-4")
            })?;
        }
    }
    Ok(format!(
        "50 cases, slopes in [{:.3}, {:.3}] (2 ± 0.2); {checked} with |f| ≥ 0.1, max relative residual {worst_rel:.2e} (tol 1e-4)",
        slopes.0, slopes.1
    ))
}

fn criterion_8() -> Outcome {
    let lam = 1.0;
    let phi0: f64 = 0.7;
    let mut worst_proj: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for r in [0.5, 1.0, 3.0] {
        // away from Bessel zeros: each |J_k(λr)| stays within a factor 1e3
        // of its small-argument scale or above 1e-2
        for k in 0..=8u32 {
            let j = bessel_series(k, lam * r).abs();
            let scale = (0.5 * lam * r).powi(k as i32) / (1..=k).map(|m| m as f64).product::<f64>();
            ensure(j >= 1e-2 || j >= 1e-3 * scale, || {
                format!("r={r}: J_{k} near a zero")
            })?;
        }
        let mass = SphereDensity::point_mass(2, DEFAULT_BUDGET, &[phi0.cos(), phi0.sin()])
            .map_err(|e| e.to_string())?;
        let node = mass.nodes()[mass.nearest_node(&[phi0.cos(), phi0.sin()]).unwrap()].clone();
        let node_angle = node[1].atan2(node[0]);
        let handle = EigenFunctionHandle::new(c(lam, 0.0), mass);
        for arg in [0.3, 2.0, -1.2] {
            let x = [r * f64::cos(arg), r * f64::sin(arg)];
            for k in -8i64..=8 {
                let got = ktype_project(&handle, k, &x).map_err(|e| e.to_string())?;
                let want = Complex64::i().powi(k.rem_euclid(4) as i32)
                    * bessel_signed(k, lam * r)
                    * Complex64::from_polar(1.0, k as f64 * (arg - node_angle));
                let err = (got - want).norm();
                worst_proj = worst_proj.max(err);
                ensure(err <= 1e-8, || {
                    format!("r={r} arg={arg} k={k}: |Δ| = {err:.3e}")
                })?;
            }
        }
        let random = SphereDensity::random(2, DEFAULT_BUDGET, 8).map_err(|e| e.to_string())?;
        let handle = EigenFunctionHandle::new(c(lam, 0.0), random);
        let x = [r * 0.6, -r * 0.8];
        let kmax = (lam * r).ceil() as i64 + 20;
        let mut sum = c(0.0, 0.0);
        for k in -kmax..=kmax {
            sum += ktype_project(&handle, k, &x).map_err(|e| e.to_string())?;
        }
        let f = synthesize(&handle, &x).map_err(|e| e.to_string())?;
        let err = (sum - f).norm();
        worst_sum = worst_sum.max(err);
        ensure(err <= 1e-8, || {
            format!("r={r}: partial sum |Δ| = {err:.3e}")
        })?;
    }
    Ok(format!(
        "projection max |Δ| {worst_proj:.2e}, partial-sum max |Δ| {worst_sum:.2e} (tol 1e-8)"
    ))
}

fn criterion_9() -> Outcome {
    let lam = c(1.0, 0.0);
    let mut worst: f64 = 0.0;
    // (radius, max_k): r = 1 supports |k| ≤ 7 under the 1e-6 guard
    for (r, max_k) in [(1.0, 7usize), (5.0, 8usize)] {
        for seed in 0..4u64 {
            let density = SphereDensity::random(2, DEFAULT_BUDGET, subseed(9, seed))
                .map_err(|e| e.to_string())?;
            let handle = EigenFunctionHandle::new(lam, density.clone());
            let samples = circle_samples(&handle, r, analyze_samples(lam, r, max_k))
                .map_err(|e| e.to_string())?;
            let coeffs = analyze(&samples, lam, r, max_k).map_err(|e| e.to_string())?;
            for k in -(max_k as i64)..=(max_k as i64) {
                let want = density.angular_coefficient(k).unwrap();
                let err = (coeffs.get(k).unwrap() - want).norm();
                worst = worst.max(err);
                ensure(err <= 1e-7, || {
                    format!("r={r} seed={seed} k={k}: |Δ| = {err:.3e}")
                })?;
            }
        }
    }
    let j01 = 2.404_825_557_695_773;
    let handle = EigenFunctionHandle::new(
        lam,
        SphereDensity::random(2, DEFAULT_BUDGET, 9).map_err(|e| e.to_string())?,
    );
    let samples = circle_samples(&handle, j01, analyze_samples(lam, j01, 8)).unwrap();
    match analyze(&samples, lam, j01, 8) {
        Err(Error::NearBesselZero { k: 0, .. }) => {}
        other => return Err(format!("guard at the first zero of J_0 returned {other:?}")),
    }
    Ok(format!(
        "roundtrip max |Δ| {worst:.2e} (tol 1e-7) over |k| ≤ 7 at r=1 and |k| ≤ 8 at r=5; guard rejects r = j_0,1 with k = 0"
    ))
}

fn criterion_10() -> Outcome {
    for n in 2..=16usize {
        let mut expected = vec!["(1)"];
        if n % 2 == 0 {
            if n >= 4 {
                expected.push("(2)(i)");
            }
            expected.push("(2)(ii)");
        }
        if n % 4 == 0 {
            expected.extend(["(3)(i)", "(3)(ii)", "(3)(iii)"]);
        }
        match n {
            7 => expected.push("(4)"),
            8 => expected.push("(5)"),
            16 => expected.push("(6)"),
            _ => {}
        }
        let got: Vec<String> = transitive_groups(n)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|e| {
                serde_json::to_value(e).unwrap()["case"]
                    .as_str()
                    .unwrap()
                    .to_string()
            })
            .collect();
        ensure(got == expected, || {
            format!("n={n}: cases {got:?}, expected {expected:?}")
        })?;
    }
    let groups = |n: usize| -> Vec<String> {
        transitive_groups(n)
            .unwrap()
            .iter()
            .flat_map(|e| e.groups())
            .collect()
    };
    let has = |n: usize, name: &str| groups(n).iter().any(|g| g == name);
    for (n, name) in [
        (7, "G2"),
        (7, "G2 ∪ (-I)G2"),
        (8, "Spin(7)"),
        (16, "Spin(9)"),
        (4, "SU(2)·Z_l"),
        (4, "SU(2)·D_l"),
        (4, "U(2)"),
        (4, "U(2) ∪ αU(2)"),
        (4, "Sp(1)·Z_l"),
        (4, "Sp(1)·D*_l"),
        (4, "Sp(1)·T*"),
        (4, "Sp(1)·O*"),
        (4, "Sp(1)·I*"),
        (4, "Sp(1)U(1)"),
        (4, "Sp(1)U(1) ∪ (Sp(1)U(1))β"),
        (4, "Sp(1)Sp(1)"),
    ] {
        ensure(has(n, name), || {
            format!("n={n}: {name} missing from {:?}", groups(n))
        })?;
    }
    let spin9 = transitive_groups(16)
        .unwrap()
        .into_iter()
        .find(|e| e.groups() == vec!["Spin(9)".to_string()]);
    ensure(spin9.is_some(), || {
        "n=16: Spin(9) must carry only the trivial extension".into()
    })?;
    ensure(!has(7, "Spin(7)") && !has(9, "G2"), || {
        "exceptional groups leaked into other n".into()
    })?;
    Ok("cases for n = 2..16 match; 16 spot assertions hold".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "closed form n=3", Duration::from_secs(1), criterion_1),
        (2, "Bessel series n=2", Duration::from_secs(1), criterion_2),
        (3, "asymptotic ratio", Duration::from_secs(10), criterion_3),
        (
            4,
            "boundedness classifier",
            Duration::from_secs(60),
            criterion_4,
        ),
        (
            5,
            "Bochner positivity",
            Duration::from_secs(30),
            criterion_5,
        ),
        (6, "Weyl invariance", Duration::from_secs(60), criterion_6),
        (
            7,
            "eigen-equation stencil",
            Duration::from_secs(30),
            criterion_7,
        ),
        (
            8,
            "Jacobi-Anger / K-types",
            Duration::from_secs(10),
            criterion_8,
        ),
        (9, "analyze roundtrip", Duration::from_secs(5), criterion_9),
        (
            10,
            "classification table",
            Duration::from_secs(1),
            criterion_10,
        ),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!(
                "{detail}; runtime {:.2}s exceeds {:.0}s",
                elapsed.as_secs_f64(),
                limit.as_secs_f64()
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {id:>2} ({name}): {detail} [{:.2}s]",
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL criterion {id:>2} ({name}): {why} [{:.2}s]",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
