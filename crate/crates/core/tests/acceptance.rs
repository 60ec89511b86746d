//! Acceptance criteria 1 to 9. Prints one line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyflow::complex::triangulations::{cyclic_polytope_boundary, five_cell};
use cyflow::complex::{parse_facet_list, Complex, FacetList};
use cyflow::curvature::{
    curvature_field, flat_degree_threshold, inner_product, laplacian, vertex_curvature, vertex_transitive_curvature,
};
use cyflow::flow::{classify_termination, random_radii, run_flow, FlowConfig, Monitor, Termination};
use cyflow::metric::{MetricStructure, TetGeometry};
use cyflow::MetricStructure64;
use cyflow::oracle::{run_checks, CheckReport, SweepConfig};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn regular_point() -> Outcome {
    let start = Instant::now();
    let g = TetGeometry::new([1.0f64; 4]).map_err(|e| e.to_string())?;
    let solid = 3.0 * (1.0f64 / 3.0).acos() - PI;
    let mut worst = 0.0f64;
    let mut worst_name = "";
    let mut track = |name: &'static str, got: f64, want: f64| {
        let e = rel(got, want);
        if e > worst {
            worst = e;
            worst_name = name;
        }
    };
    for a in 0..4 {
        track("solid angle", g.solid[a], solid);
        track("height", g.heights[a], 1.0 / 6f64.sqrt());
        for b in 0..4 {
            if a != b {
                track("dihedral", g.dihedral[a][b], (1.0f64 / 3.0).acos());
                track("dual area", g.dual_areas[a][b], 1.0 / (3.0 * SQRT_2));
                track("gradient", g.gradient[a][b], 1.0 / (3.0 * SQRT_2));
            }
        }
        track("gradient", g.gradient[a][a], -1.0 / SQRT_2);
    }
    track("Q", g.q, 8.0);
    track("volume", g.volume, 2.0 * SQRT_2 / 3.0);
    track("midsphere radius", g.midsphere_radius, 1.0 / SQRT_2);
    within(Duration::from_secs(1), start.elapsed())?;
    check(worst <= 1e-12, format!("max relative error {worst:.1e} ({worst_name}), limit 1e-12"))
}

fn find<'a>(reports: &'a [CheckReport], name: &str) -> &'a CheckReport {
    reports.iter().find(|r| r.test == name).expect("check present")
}

fn summarize(reports: &[CheckReport], names: &[&str]) -> Outcome {
    let parts: Vec<String> = names
        .iter()
        .map(|n| {
            let r = find(reports, n);
            format!("{n} {:.1e}/{:.0e}", r.max_defect, r.threshold)
        })
        .collect();
    let ok = names.iter().all(|n| find(reports, n).pass);
    check(ok, format!("{} samples: {}", reports[0].samples, parts.join(", ")))
}

fn derivative_sweep(reports: &[CheckReport], elapsed: Duration) -> Outcome {
    within(Duration::from_secs(30), elapsed)?;
    summarize(reports, &["fd_solid_angle_gradient", "schlafli_residual", "hessian_symmetry", "fd_hessian_symmetry"])
        .map(|s| format!("{s} in {elapsed:.2?}"))
}

fn volume_cross_check(reports: &[CheckReport]) -> Outcome {
    summarize(reports, &["cayley_menger_volume", "volume_partition"])
}

fn laplacian_identities() -> Outcome {
    let complexes = [Complex::new(&five_cell()), Complex::new(&cyclic_polytope_boundary(9))];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_sum, mut worst_adj) = (0.0f64, 0.0f64);
    for i in 0..100u64 {
        let c = &complexes[(i % 2) as usize];
        let n = c.n_vertices();
        let m = random_radii(n, 0.8, 1.25, i).map_err(|e| e.to_string())?;
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lf = laplacian(c, &m, &f).map_err(|e| e.to_string())?;
        let lg = laplacian(c, &m, &g).map_err(|e| e.to_string())?;
        worst_sum = worst_sum.max(inner_product(&lf, &vec![1.0; n], &m).abs());
        worst_adj = worst_adj.max((inner_product(&lf, &g, &m) - inner_product(&f, &lg, &m)).abs());
    }
    check(
        worst_sum <= 1e-10 && worst_adj <= 1e-10,
        format!("100 instances on 5-cell and 9-vertex cyclic boundary: |sum| {worst_sum:.1e}, adjoint defect {worst_adj:.1e}, limit 1e-10"),
    )
}

fn vertex_transitive() -> Outcome {
    let solid = 3.0 * (1.0f64 / 3.0).acos() - PI;
    let single = Complex::new(&parse_facet_list("1 2 3 4").unwrap());
    let five = Complex::new(&five_cell());
    let k1 = vertex_curvature(&single, &MetricStructure64::ones(4), 1).map_err(|e| e.to_string())?;
    let k4 = vertex_curvature(&five, &MetricStructure64::ones(5), 1).map_err(|e| e.to_string())?;
    let e1 = rel(k1, 4.0 * PI - solid).max(rel(vertex_transitive_curvature::<f64>(1), 4.0 * PI - solid));
    let e4 = rel(k4, 4.0 * PI - 4.0 * solid).max(rel(vertex_transitive_curvature::<f64>(4), 4.0 * PI - 4.0 * solid));
    let d = flat_degree_threshold::<f64>();
    check(
        e1 <= 1e-12 && e4 <= 1e-12 && (d - 22.795).abs() <= 1e-3,
        format!("d=1 rel {e1:.1e}, d=4 rel {e4:.1e}, flat degree {d:.6}"),
    )
}

fn symmetric_flow() -> Outcome {
    let c = Complex::new(&five_cell());
    let k = vertex_transitive_curvature::<f64>(4);
    let cfg = FlowConfig { normalize: false, t_max: 0.1, tol_converge: 0.0, ..Default::default() };
    let rep = run_flow(&c, &MetricStructure64::ones(5), &cfg).map_err(|e| e.to_string())?;
    let (mut er, mut ek) = (0.0f64, 0.0f64);
    for s in &rep.samples {
        for (&r, &kk) in s.metric.radii().iter().zip(&s.field.curvature) {
            er = er.max(rel(r, (-k * s.t).exp()));
            ek = ek.max((kk - k).abs());
        }
    }
    let t_end = rep.final_state().t;
    let norm = run_flow(&c, &MetricStructure64::ones(5), &FlowConfig { normalize: true, ..cfg }).map_err(|e| e.to_string())?;
    let en = norm.samples.iter().flat_map(|s| s.metric.radii().iter().map(|r| (r - 1.0).abs())).fold(0.0, f64::max);
    check(
        er <= 1e-8 && ek <= 1e-8 && en <= 1e-12 && t_end == 0.1 && norm.steps_accepted == 100,
        format!("r vs e^(-kt) {er:.1e}, K drift {ek:.1e} over [0, {t_end}]; normalized drift {en:.1e} over {} steps", norm.steps_accepted),
    )
}

fn convergence() -> Outcome {
    let start = Instant::now();
    let c = Complex::new(&five_cell());
    let cfg = FlowConfig { sample_every: 1000, ..Default::default() };
    let mut worst_spread = 0.0f64;
    let mut worst_rise = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for seed in 0..10 {
        let m = random_radii(5, 0.8, 1.2, seed).map_err(|e| e.to_string())?;
        let rep = run_flow(&c, &m, &cfg).map_err(|e| e.to_string())?;
        if !matches!(rep.termination, Termination::Converged { .. }) {
            failures.push(format!("seed {seed}: {:?}", rep.termination));
        }
        if !rep.violations.is_empty() {
            failures.push(format!("seed {seed}: {}", rep.violations[0]));
        }
        worst_spread = worst_spread.max(rep.final_state().field.spread);
        for w in rep.monitors.windows(2) {
            let slack = 1e-9 * (1.0 + w[0].k.abs());
            worst_rise = worst_rise.max(w[1].k - w[0].k - slack);
        }
    }
    within(Duration::from_secs(60), start.elapsed())?;
    check(
        failures.is_empty() && worst_spread < 1e-8 && worst_rise <= 0.0,
        format!(
            "10 seeds: max final spread {worst_spread:.1e}, max k rise beyond slack {worst_rise:.1e}, {:.2?}{}",
            start.elapsed(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

/// Every 4-subset of eight vertices, plus vertex 9 hanging off one triangle.
/// Vertex 9 has far larger curvature than its neighbours, so its radius
/// shrinks relative to theirs until the pendant tet flattens.
fn pinch_complex() -> Complex {
    let mut facets = Vec::new();
    for a in 1..=8 {
        for b in a + 1..=8 {
            for c in b + 1..=8 {
                for d in c + 1..=8 {
                    facets.push([a, b, c, d]);
                }
            }
        }
    }
    facets.push([1, 2, 3, 9]);
    Complex::new(&FacetList::new(9, facets).unwrap())
}

/// A stacked chain whose last radius is forced far below δ relative to the
/// total while every tet stays nondegenerate.
fn collapse_start() -> (Complex, MetricStructure<f64>) {
    let n = 25;
    let facets = (1..=n - 3).map(|i| [i, i + 1, i + 2, i + 3]).collect();
    let c = Complex::new(&FacetList::new(n, facets).unwrap());
    let m = MetricStructure::new((1..=n).map(|i| 0.5f64.powi(i as i32)).collect()).unwrap();
    (c, m)
}

fn taxonomy() -> Outcome {
    let cfg = FlowConfig { t_max: 50.0, ..Default::default() };
    let pinch = pinch_complex();
    let a = run_flow(&pinch, &MetricStructure64::ones(9), &cfg).map_err(|e| e.to_string())?;
    let b = run_flow(&pinch, &MetricStructure64::ones(9), &cfg).map_err(|e| e.to_string())?;
    let (c, m) = collapse_start();
    let x = run_flow(&c, &m, &cfg).map_err(|e| e.to_string())?;
    let y = run_flow(&c, &m, &cfg).map_err(|e| e.to_string())?;
    let mon = |min_ratio: f64| Monitor { t: 1.0, spread: 0.5, k: 1.0, min_q: 1.0, min_ratio, min_ratio_vertex: 3, rejected: None };
    let injected = classify_termination(&[mon(1e-3), mon(1e-8), mon(1e-8)], &cfg);
    let pinch_ok = a.termination == Termination::DegeneratePinch { tet: [1, 2, 3, 9] };
    let collapse_ok = x.termination == Termination::Collapsed { vertex: 25 };
    let injected_ok = injected == Some(Termination::Collapsed { vertex: 3 });
    check(
        pinch_ok && collapse_ok && injected_ok && a == b && x == y,
        format!(
            "pinch run {:?} at t={:.4}, forced-tiny run {:?}, injected history {:?}, reruns identical: {}",
            a.termination,
            a.final_state().t,
            x.termination,
            injected,
            a == b && x == y
        ),
    )
}

fn scale_invariance() -> Outcome {
    let five = Complex::new(&five_cell());
    let nine = Complex::new(&cyclic_polytope_boundary(9));
    let cfg = FlowConfig { normalize: false, t_max: 0.5, ..Default::default() };
    let mut worst = 0.0f64;
    let mut tags_ok = true;
    let cases = [
        (&five, random_radii(5, 0.8, 1.2, 1).unwrap()),
        (&nine, random_radii(9, 0.8, 1.2, 2).unwrap()),
    ];
    for (c, m) in &cases {
        let base_field = curvature_field(c, m).map_err(|e| e.to_string())?;
        let base = run_flow(c, m, &cfg).map_err(|e| e.to_string())?;
        for lam in [0.1, 10.0] {
            let scaled = m.scaled(lam);
            let field = curvature_field(c, &scaled).map_err(|e| e.to_string())?;
            for (p, q) in base_field.curvature.iter().zip(&field.curvature) {
                worst = worst.max((p - q).abs());
            }
            let run = run_flow(c, &scaled, &cfg).map_err(|e| e.to_string())?;
            tags_ok &= run.termination.tag() == base.termination.tag() && run.samples.len() == base.samples.len();
            for (s, u) in base.samples.iter().zip(&run.samples) {
                tags_ok &= s.t == u.t;
                for (p, q) in s.field.curvature.iter().zip(&u.field.curvature) {
                    worst = worst.max((p - q).abs());
                }
            }
        }
    }
    let pinch = pinch_complex();
    let pcfg = FlowConfig { t_max: 50.0, ..cfg };
    let base = run_flow(&pinch, &MetricStructure64::ones(9), &pcfg).map_err(|e| e.to_string())?;
    for lam in [0.1, 10.0] {
        let run = run_flow(&pinch, &MetricStructure64::ones(9).scaled(lam), &pcfg).map_err(|e| e.to_string())?;
        tags_ok &= run.termination == base.termination;
    }
    check(
        worst <= 1e-9 && tags_ok,
        format!("max K deviation {worst:.1e} at common times, lambda in {{0.1, 10}}; tags equal: {tags_ok}"),
    )
}

fn main() -> ExitCode {
    let sweep_start = Instant::now();
    let reports = run_checks(&SweepConfig { samples: 1000, seed: 0 });
    let sweep_time = sweep_start.elapsed();

    let criteria: [Criterion; 9] = [
        ("regular-point exactness", Box::new(regular_point)),
        ("derivative oracle sweep", Box::new(|| derivative_sweep(&reports, sweep_time))),
        ("volume cross-check", Box::new(|| volume_cross_check(&reports))),
        ("Laplacian identities", Box::new(laplacian_identities)),
        ("vertex-transitive values", Box::new(vertex_transitive)),
        ("exact symmetric flow", Box::new(symmetric_flow)),
        ("convergence reproduction", Box::new(convergence)),
        ("termination taxonomy", Box::new(taxonomy)),
        ("scale invariance", Box::new(scale_invariance)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag}: {name}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
