//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::time::Instant;

use common::*;
use polyfix::analysis::{
    check_half_bound, classify, conjecture_margin, conjecture_search, cubic_decomposition, quadratic_identity_check,
    random_polynomial, FixedPointClass, SearchConfig, Strategy, Tolerances, DEFAULT_EPS_CLASS,
};
use polyfix::dynamics::{
    convergence_rate, critical_orbit_coverage, default_escape_radius, iterate, render_basins, BasinConfig, Window,
    DEFAULT_MAX_STEPS,
};
use polyfix::hermite::{build_table, closed_form_bridge, closed_form_even, divided_difference, synthesize, NodeSystem};
use polyfix::json::{to_json_string, PolynomialJson};
use polyfix::{Complex64, Polynomial, RootFindConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn criterion_1_divided_difference_oracle() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for case in 0..500 {
        let n = rng.gen_range(2..=8);
        let sys = random_system(&mut rng, n, 1e-3);
        let table = build_table(&sys);
        for k in 2..=n {
            let closed = closed_form_even(&sys, k).map_err(|e| e.to_string())?;
            let recursion = table.entry(2 * k - 1, 0);
            let oracle = naive_divided_difference(&sys, &even_indices(k));
            let e = rel_err(closed, recursion).max(rel_err(closed, oracle));
            worst = worst.max(e);
            checks += 1;
            ensure(e <= TOL, || format!("case {case}: even k={k} rel err {e:e}\n{sys:?}"))?;
        }
        for k in 2..n {
            let closed = closed_form_bridge(&sys, k).map_err(|e| e.to_string())?;
            let recursion = divided_difference(&sys, &bridge_indices(k)).map_err(|e| e.to_string())?;
            let oracle = naive_divided_difference(&sys, &bridge_indices(k));
            let e = rel_err(closed, recursion).max(rel_err(closed, oracle));
            worst = worst.max(e);
            checks += 1;
            ensure(e <= TOL, || format!("case {case}: bridge k={k} rel err {e:e}\n{sys:?}"))?;
        }
    }
    Ok(format!("{checks} spans against table and naive recursion, worst relative error {worst:.2e} <= {TOL:e}"))
}

fn criterion_2_collinear_tightness() -> Outcome {
    let mut rng = rng(2);
    let mut worst_value: f64 = 0.0;
    let mut worst_deriv: f64 = 0.0;
    let mut vertical = 0;
    for case in 0..500 {
        let n = rng.gen_range(2..=8);
        let is_vertical = case % 5 == 0;
        vertical += is_vertical as usize;
        let (sys, dir) = collinear_system(&mut rng, n, 1e-2, is_vertical);
        let out = synthesize(&sys);
        ensure(out.achieved_degree == 2 * n - 1, || {
            format!("case {case}: degree {} != {}\n{sys:?}", out.achieved_degree, 2 * n - 1)
        })?;
        ensure(out.leading_coefficient.norm() > 0.0, || format!("case {case}: zero leading coefficient"))?;
        let rot = out.rotated_leading_coefficient(dir);
        ensure(rot.re < 0.0, || format!("case {case}: rotated leading sum {rot} has Re >= 0\n{sys:?}"))?;
        let res = out.residuals(&sys);
        worst_value = worst_value.max(res.value);
        worst_deriv = worst_deriv.max(res.derivative);
        ensure(res.value <= 1e-9 && res.derivative <= 1e-8, || format!("case {case}: residuals {res:?}\n{sys:?}"))?;
    }
    Ok(format!(
        "500 collinear systems ({vertical} vertical): degree 2n-1, Re(rotated lead) < 0, residuals {worst_value:.1e} / {worst_deriv:.1e}"
    ))
}

fn criterion_3_golden_case() -> Outcome {
    let sys =
        NodeSystem::from_pairs(&[(c(0.0, 0.0), c(0.0, 0.0)), (c(1.0, 0.0), c(0.0, 0.0))]).map_err(|e| e.to_string())?;
    let table = build_table(&sys);
    let diag = table.diagonal();
    ensure(diag == vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)], || format!("diagonal {diag:?}"))?;
    let out = synthesize(&sys);
    let want = Polynomial::from_real(&[0.0, 0.0, 3.0, -2.0]).unwrap();
    ensure(out.h == want, || format!("h = {:?}", out.h))?;
    let cfg = RootFindConfig::default();
    let recs = classify(&out.h, &cfg, DEFAULT_EPS_CLASS).map_err(|e| e.to_string())?;
    let expect = [(0.0, 0.0), (0.5, 1.5), (1.0, 0.0)];
    ensure(recs.len() == 3, || format!("{recs:?}"))?;
    for (r, (theta, mult)) in recs.iter().zip(expect) {
        ensure((r.theta - c(theta, 0.0)).norm() <= 1e-12 && (r.multiplier - c(mult, 0.0)).norm() <= 1e-12, || {
            format!("record {r:?}")
        })?;
    }
    let rep = check_half_bound(&out.h, &cfg, &Tolerances::default()).map_err(|e| e.to_string())?;
    ensure(rep.max_collinear_attractive == 2 && rep.bound == 2 && rep.satisfied, || format!("{rep:?}"))?;
    let m = conjecture_margin(&out.h, &cfg).map_err(|e| e.to_string())?;
    ensure((m - 1.5).abs() <= 1e-12, || format!("margin {m}"))?;
    Ok("3z^2 - 2z^3, fixed points {0, 1/2, 1}, multipliers {0, 3/2, 0}, 2 <= 2, margin 1.5".into())
}

fn criterion_4_exemplar_family() -> Outcome {
    let cfg = RootFindConfig::default();
    for n in 2..=10usize {
        let p = Polynomial::exemplar_family(n).map_err(|e| e.to_string())?;
        let recs = classify(&p, &cfg, DEFAULT_EPS_CLASS).map_err(|e| e.to_string())?;
        for k in 0..n {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
            let hit = recs.iter().find(|r| (r.theta - w).norm() <= 1e-10);
            let r = hit.ok_or_else(|| format!("n={n}: root of unity {w} missing from {recs:?}"))?;
            ensure(r.multiplier.norm() <= 1e-10, || format!("n={n}: multiplier {} at {w}", r.multiplier))?;
        }
        let attractive = recs.iter().filter(|r| r.class == FixedPointClass::Attractive).count();
        ensure(attractive == n && attractive == p.degree() - 1, || format!("n={n}: {attractive} attractive"))?;
        let zero =
            recs.iter().find(|r| r.theta.norm() <= 1e-10).ok_or_else(|| format!("n={n}: fixed point 0 missing"))?;
        let want = (n as f64 + 1.0) / n as f64;
        ensure((zero.multiplier - c(want, 0.0)).norm() <= 1e-10, || {
            format!("n={n}: multiplier at 0 {}", zero.multiplier)
        })?;
        let m = conjecture_margin(&p, &cfg).map_err(|e| e.to_string())?;
        ensure((m - want).abs() <= 1e-10 && m >= 1.0, || format!("n={n}: margin {m}"))?;
    }
    Ok("n = 2..10: roots of unity superattracting, n = degree - 1 attractive, margin (n+1)/n".into())
}

fn criterion_5_bound_fuzzing() -> Outcome {
    let cfg = RootFindConfig::default();
    let tol = Tolerances::default();
    let mut checked = 0usize;
    let mut tight = 0usize;
    for strategy in [Strategy::Coefficient, Strategy::FixedPoint] {
        for degree in 2..=8usize {
            let mut rng = rng(500 + degree as u64 + 100 * (strategy == Strategy::FixedPoint) as u64);
            for _ in 0..10_000 {
                let p = random_polynomial(&mut rng, degree, strategy);
                let rf = cfg.with_seed(rng.gen());
                let rep = check_half_bound(&p, &rf, &tol).map_err(|e| format!("{e} on {:?}", p.coeffs()))?;
                ensure(rep.satisfied, || format!("bound violated: {rep:?}\ninstance {:?}", p.coeffs()))?;
                checked += 1;
            }
        }
    }
    // Hermite outputs place n attractive points on a line at degree 2n - 1,
    // exactly at the bound.
    let mut rng = rng(555);
    for case in 0..1000 {
        let n = rng.gen_range(2..=5);
        let (sys, _) = collinear_system(&mut rng, n, 0.05, case % 4 == 0);
        let out = synthesize(&sys);
        let rep = check_half_bound(&out.h, &cfg, &tol).map_err(|e| format!("{e} on {:?}", out.h.coeffs()))?;
        ensure(rep.satisfied, || format!("bound violated on Hermite output {:?}\n{rep:?}", out.h.coeffs()))?;
        tight += (rep.max_collinear_attractive == rep.bound) as usize;
        checked += 1;
    }
    for n in 2..=10 {
        let p = Polynomial::exemplar_family(n).unwrap();
        let rep = check_half_bound(&p, &cfg, &tol).map_err(|e| e.to_string())?;
        ensure(rep.satisfied, || format!("exemplar n={n}: {rep:?}"))?;
        checked += 1;
    }
    Ok(format!(
        "{checked} polynomials satisfy max collinear attractive <= ceil(deg/2); {tight}/1000 Hermite cases tight"
    ))
}

fn criterion_6_conjecture_identities() -> Outcome {
    let mut rng = rng(6);
    let mut quadratics = 0;
    while quadratics < 10_000 {
        let p = random_polynomial(&mut rng, 2, Strategy::Coefficient);
        let q = match quadratic_identity_check(&p) {
            Ok(q) => q,
            Err(polyfix::Error::MultipleFixedPoint(_)) => continue,
            Err(e) => return Err(e.to_string()),
        };
        ensure(q.ok, || format!("lambda_1 + lambda_2 = {} for {:?}", q.sum, p.coeffs()))?;
        ensure(q.margin >= 1.0 - 1e-9, || format!("quadratic margin {}", q.margin))?;
        quadratics += 1;
    }
    for i in 0..10_000 {
        let r = rng.gen_range(0.01..4.0f64).sqrt();
        let cc = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
        let zs = disk_points(&mut rng, 3, 1e-6);
        let d = cubic_decomposition(cc, zs[0], zs[1], zs[2]).map_err(|e| e.to_string())?;
        ensure(d.alpha_sum_ok && d.lambdas_ok && d.margin >= 1.0 - 1e-9, || format!("cubic {i}: {d:?}"))?;
    }
    let mut lines = Vec::new();
    for degree in 4..=6 {
        for strategy in [Strategy::Coefficient, Strategy::FixedPoint] {
            let rep = conjecture_search(&SearchConfig::new(degree, 10_000, 60 + degree as u64, strategy))
                .map_err(|e| e.to_string())?;
            ensure(rep.violations == 0, || format!("degree {degree} {strategy:?}: {:?}", rep.violation_instances))?;
            ensure(rep.skip_rate() <= 0.01, || format!("degree {degree}: skip rate {}", rep.skip_rate()))?;
            lines.push(format!("d{degree}/{}: min {:.4}", strategy.name(), rep.min_margin.unwrap()));
        }
    }
    Ok(format!("10^4 quadratic and cubic identities hold; search {}", lines.join(", ")))
}

fn criterion_7_rate_law() -> Outcome {
    let mut rng = rng(7);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 100 {
        let n = rng.gen_range(2..=3);
        let pts = disk_points(&mut rng, n, 0.3);
        let nodes: Vec<_> =
            pts.iter().map(|&z| polyfix::hermite::Node::new(z, multiplier(&mut rng, 0.05, 0.95))).collect();
        let sys = NodeSystem::new(nodes).map_err(|e| e.to_string())?;
        let h = synthesize(&sys).h;
        let theta = sys.z(0);
        let lambda = h.derivative().eval(theta).norm();
        if !(0.05 < lambda && lambda < 0.95) {
            continue;
        }
        let x0 = theta + Complex64::from_polar(1e-3, rng.gen_range(0.0..std::f64::consts::TAU));
        let est = convergence_rate(&h, theta, x0, 10_000).map_err(|e| format!("{e}: {:?}", h.coeffs()))?;
        let rel = (est.rate - lambda).abs() / lambda;
        worst = worst.max(rel);
        ensure(rel <= 0.05, || format!("rate {} vs |p'| {lambda} for {:?}", est.rate, h.coeffs()))?;
        done += 1;
    }
    let p = Polynomial::from_real(&[0.5, 1.0, -0.25]).unwrap();
    let s2 = 2f64.sqrt();
    let want = 1.0 - s2 / 2.0;
    let est = convergence_rate(&p, c(s2, 0.0), c(1.2, 0.0), 1000).map_err(|e| e.to_string())?;
    ensure((est.rate - want).abs() <= 0.05 * want, || format!("sqrt2 rate {}", est.rate))?;
    let orbit = iterate(&p, c(1.0, 0.0), 10_000, 1e-12, default_escape_radius(&p)).map_err(|e| e.to_string())?;
    let to = orbit.converged_to().ok_or("sqrt2 orbit did not converge")?;
    ensure((to - c(s2, 0.0)).norm() <= 1e-9, || format!("sqrt2 limit {to}"))?;
    Ok(format!(
        "100 instances within relative {:.1e} of |p'(theta)|; sqrt2 rate {:.7} vs {want:.7}, limit {:.12}",
        worst,
        est.rate,
        to.re
    ))
}

fn criterion_8_critical_coverage() -> Outcome {
    let cfg = RootFindConfig::default();
    let mut rng = rng(8);
    let mut done = 0;
    let mut candidates = Vec::new();
    while done < 1000 {
        let degree = rng.gen_range(2..=6);
        let p = random_polynomial(&mut rng, degree, Strategy::FixedPoint);
        let recs = classify(&p, &cfg, DEFAULT_EPS_CLASS).map_err(|e| e.to_string())?;
        if !recs.iter().any(|r| r.is_attractive()) {
            continue;
        }
        let rep = critical_orbit_coverage(&p, &cfg, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
        ensure(rep.within_critical_bound, || {
            format!("{} attractive at degree {}: {:?}", rep.attractive_count, degree, p.coeffs())
        })?;
        if !rep.all_covered {
            candidates.push(to_json_string(&PolynomialJson::from(&p)));
        }
        done += 1;
    }
    for coeffs in &candidates {
        println!("    uncovered (slow or cycle capture): {coeffs}");
    }
    Ok(format!(
        "1000 polynomials: attractive <= degree - 1 always; {} fully covered, {} reported with full instance",
        1000 - candidates.len(),
        candidates.len()
    ))
}

fn criterion_9_determinism() -> Outcome {
    let run = |workers: &str| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = polyfix::cli::run_with(
            ["polyfix", "conjecture", "--degree", "4", "--samples", "3000", "--seed", "9", "--workers", workers],
            &mut out,
            &mut err,
        );
        (code, out)
    };
    let (c1, a) = run("1");
    let (c8, b) = run("8");
    ensure(c1 == 0 && c8 == 0, || format!("exit codes {c1} {c8}"))?;
    ensure(a == b, || "SearchReport differs between --workers 1 and --workers 8".into())?;

    let p = Polynomial::exemplar_family(3).unwrap();
    let mut cfg = BasinConfig::new(Window { center: c(0.0, 0.0), half_width: 1.5 }, 64, 48);
    cfg.max_steps = 200;
    cfg.workers = 1;
    let one = render_basins(&p, &cfg).map_err(|e| e.to_string())?;
    cfg.workers = 4;
    let four = render_basins(&p, &cfg).map_err(|e| e.to_string())?;
    let again = render_basins(&p, &cfg).map_err(|e| e.to_string())?;
    ensure(one.to_ppm() == four.to_ppm() && four.to_ppm() == again.to_ppm(), || "basin rasters differ".into())?;
    ensure(one.labels == four.labels && one.iterations == four.iterations, || "label grids differ".into())?;
    Ok(format!("conjecture report byte-identical ({} bytes); 64x48 basin raster bit-identical", a.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 divided-difference oracle equivalence", criterion_1_divided_difference_oracle),
        ("2 collinear Hermite tightness", criterion_2_collinear_tightness),
        ("3 hand-derived golden case", criterion_3_golden_case),
        ("4 exemplar family", criterion_4_exemplar_family),
        ("5 bound fuzzing", criterion_5_bound_fuzzing),
        ("6 multiplier identities and search", criterion_6_conjecture_identities),
        ("7 convergence rate law", criterion_7_rate_law),
        ("8 critical orbit coverage", criterion_8_critical_coverage),
        ("9 determinism", criterion_9_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
