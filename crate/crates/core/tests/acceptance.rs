//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use ergolab::dynamics::{self, RetractionConfig, RetractionStatus};
use ergolab::ergodicity::{self, ErgodicityConfig, Evidence, Verdict, VerdictBasis};
use ergolab::geometry::{self, BergmanBall};
use ergolab::grid::SampleGrid;
use ergolab::holomap::{self, HoloMap};
use ergolab::linalg::{self, CMatrix};
use ergolab::{Complex64, ComplexVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn geometry_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_gap, mut worst_sym, mut worst_inv, mut worst_invol) = (f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
    let (mut agreements, mut skipped) = (0usize, 0usize);
    for n in 1..=3 {
        for _ in 0..10_000 {
            let z = ball_point(&mut rng, n);
            let w = ball_point(&mut rng, n);
            let a = ball_point(&mut rng, n);
            let beta = geometry::bergman_distance(&z, &w).unwrap();
            worst_gap = worst_gap.min(geometry::chord_gap(&z, &w).unwrap());
            worst_sym = worst_sym.max((beta - geometry::bergman_distance(&w, &z).unwrap()).abs());
            let za = geometry::involution(&a, &z).unwrap();
            let wa = geometry::involution(&a, &w).unwrap();
            worst_inv = worst_inv.max((geometry::bergman_distance(&za, &wa).unwrap() - beta).abs());
            worst_invol = worst_invol.max(geometry::involution(&a, &za).unwrap().distance(&z));

            let r = beta * rng.random_range(0.5..1.5) + 1e-3;
            let ball = BergmanBall::new(z.clone(), r).unwrap();
            if (beta - r).abs() < 1e-9 {
                skipped += 1;
                continue;
            }
            ensure(ball.contains(&w).unwrap() == (beta < r), || {
                format!("ellipsoid disagrees with metric at z = {z}, w = {w}, r = {r}, beta = {beta}")
            })?;
            agreements += 1;
        }
    }
    ensure(worst_gap >= -1e-10, || format!("chord gap {worst_gap:e}"))?;
    ensure(worst_sym <= 1e-10, || format!("symmetry {worst_sym:e}"))?;
    ensure(worst_inv <= 1e-8, || format!("automorphism invariance {worst_inv:e}"))?;
    ensure(worst_invol < 1e-10, || format!("involution residual {worst_invol:e}"))?;
    Ok(format!(
        "min gap {worst_gap:.3e}, symmetry {worst_sym:.1e}, invariance {worst_inv:.1e}, involution {worst_invol:.1e}, \
         {agreements} ellipsoid agreements ({skipped} boundary skips)"
    ))
}

/// `W (B (+) I) W*` with `W` unitary and `|B| = 0.7`.
fn idempotent_compatible(rng: &mut ChaCha8Rng, n: usize, s: usize) -> HoloMap {
    let b = CMatrix::from_fn(s, s, |_, _| gaussian(rng));
    let b = &b * Complex64::new(0.7 / linalg::spectral_norm(&b), 0.0);
    let mut block = linalg::identity(n);
    block.view_mut((0, 0), (s, s)).copy_from(&b);
    let w = random_unitary(rng, n);
    certified(HoloMap::linear(&w * block * w.adjoint()).unwrap())
}

fn normal_form_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut maps = vec![
        ("(z1/2, z2)".to_string(), slice_map()),
        ("z/2".to_string(), half()),
        ("third turn".to_string(), third_turn()),
    ];
    for (i, (n, s)) in [(3, 1), (3, 2), (4, 2)].into_iter().enumerate() {
        maps.push((format!("random A{} (n={n}, s={s})", i + 1), idempotent_compatible(&mut rng, n, s)));
    }
    let mut worst = [0.0f64; 4];
    for (name, map) in &maps {
        let est = dynamics::estimate_retraction(map, &RetractionConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        let (_, limit) = est.converged().map_err(|e| format!("{name}: {e}"))?;
        let spread = limit
            .eigenvalues
            .iter()
            .map(|ev| ev.norm().min((ev - c(1.0)).norm()))
            .fold(0.0, f64::max);
        ensure(spread <= 0.05, || format!("{name}: eigenvalue spread {spread}"))?;
        let nf = dynamics::normal_form(&est, map).map_err(|e| format!("{name}: {e}"))?;
        let linear = dynamics::verify_linear_retraction(&est).map_err(|e| format!("{name}: {e}"))?;
        ensure(nf.residuals.samples == 200, || format!("{name}: {} samples", nf.residuals.samples))?;
        ensure(nf.residuals.retraction_residual < 1e-6 && nf.residuals.fixed_block_residual < 1e-6 && linear < 1e-6, || {
            format!(
                "{name}: retraction_residual {:e}, fixed_block_residual {:e}, linear {linear:e}",
                nf.residuals.retraction_residual, nf.residuals.fixed_block_residual
            )
        })?;
        for (slot, v) in worst.iter_mut().zip([spread, nf.residuals.retraction_residual, nf.residuals.fixed_block_residual, linear]) {
            *slot = slot.max(v);
        }
    }
    Ok(format!(
        "{} maps; eigenvalue spread {:.1e}, retraction_residual {:.1e}, fixed_block_residual {:.1e}, linear {:.1e}",
        maps.len(),
        worst[0],
        worst[1],
        worst[2],
        worst[3]
    ))
}

fn classification_suite() -> Check {
    let cfg = ErgodicityConfig::default();
    let r_max = cfg.grid.build(1).unwrap().max_radius();
    ensure((r_max - (1.0 - 1e-8)).abs() < 1e-15, || format!("boundary offset {r_max}"))?;
    let mut lines = Vec::new();

    let r = ergodicity::classify(&half(), &cfg).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::MeanErgodic && r.k == Some(1), || format!("z/2: {:?} k={:?}", r.verdict, r.k))?;
    let dev = r
        .criterion_trace
        .iter()
        .map(|t| (t.sup_deviation - r_max * 0.5f64.powi(t.iterate as i32)).abs())
        .fold(0.0, f64::max);
    ensure(dev <= 1e-9, || format!("z/2 trace deviates from 2^-j r_max by {dev:e}"))?;
    lines.push(format!("z/2 ME k=1 ({} trace points, dev {dev:.1e})", r.criterion_trace.len()));

    let r = ergodicity::classify(&third_turn(), &cfg).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::MeanErgodic && r.k == Some(3), || {
        format!("third turn: {:?} k={:?}", r.verdict, r.k)
    })?;
    let top = r.criterion_trace.iter().map(|t| t.sup_deviation).fold(0.0, f64::max);
    ensure(top < 1e-12, || format!("third turn trace reaches {top:e}"))?;
    lines.push(format!("third turn ME k=3 (trace <= {top:.1e})"));

    let r = ergodicity::classify(&power(2), &cfg).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::NotMeanErgodic && r.basis == VerdictBasis::CriterionFails, || {
        format!("z^2: {:?} {:?}", r.verdict, r.basis)
    })?;
    let low = r.criterion_trace.iter().map(|t| t.sup_deviation).fold(f64::INFINITY, f64::min);
    let last = r.criterion_trace.last().map_or(0, |t| t.iterate);
    ensure(low >= 0.99 && last <= 1024, || format!("z^2 trace min {low}, last iterate {last}"))?;
    lines.push(format!("z^2 NOT_ME (trace >= {low:.6})"));

    for (name, map) in [("(1+z)/2", affine_half()), ("hyperbolic", hyperbolic())] {
        let r = ergodicity::classify(&map, &cfg).map_err(|e| e.to_string())?;
        ensure(
            r.verdict == Verdict::NotMeanErgodic && r.fixed_point.is_none() && r.evidence == Evidence::Theorem,
            || format!("{name}: {:?} {:?}", r.verdict, r.fixed_point),
        )?;
        let dw = r.denjoy_wolff.ok_or_else(|| format!("{name}: no Denjoy-Wolff point"))?;
        let gap = dw.point.distance(&ComplexVec::from_real(&[1.0]));
        ensure(gap < 1e-3, || format!("{name}: Denjoy-Wolff point {} off by {gap}", dw.point))?;
        lines.push(format!("{name} NOT_ME (DW gap {gap:.1e})"));
    }

    let r = ergodicity::classify(&rotation(1.0), &cfg).map_err(|e| e.to_string())?;
    let attempts = r.retraction.as_ref().map_or(0, |s| s.attempts.len());
    ensure(
        r.verdict == Verdict::Undecided
            && r.basis == VerdictBasis::NoPeriodFound
            && r.retraction.as_ref().map(|s| s.status) == Some(RetractionStatus::NoPeriodFound)
            && attempts == 24,
        || format!("irrational rotation: {:?} {:?} after {attempts} periods", r.verdict, r.basis),
    )?;
    lines.push("irrational rotation UNDECIDED".into());
    Ok(lines.join("; "))
}

fn projection_suite() -> Check {
    let cfg = ErgodicityConfig::default();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (name, map) in [("z/2", half()), ("(z1/2, z2)", slice_map())] {
        let n = map.dim();
        let est = dynamics::estimate_retraction(&map, &cfg.retraction).map_err(|e| format!("{name}: {e}"))?;
        let points = SampleGrid::compact(n, 0.9, 6, 32, cfg.grid.seed).unwrap().points();
        for f in ergodicity::battery(n) {
            let mean = ergodicity::cesaro_mean(&map, &f, 1 << 10, &points).map_err(|e| e.to_string())?;
            let proj = ergodicity::limit_projection(&map, &est, &f, &points).map_err(|e| e.to_string())?;
            let sup = mean.iter().zip(&proj).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            ensure(sup <= 1e-3, || format!("{name}, f = {}: sup |M_J f - P f| = {sup:e}", f.name()))?;
            worst = worst.max(sup);
            count += 1;
        }
    }
    Ok(format!("{count} (map, f) pairs, worst sup |M_J f - P f| = {worst:.3e}"))
}

fn boundary_ratio_suite() -> Check {
    let cfg = RetractionConfig::default();
    let mut parts = Vec::new();
    for (name, map, eta) in [("z/2", half(), 0.1), ("z^2", power(2), 0.5)] {
        let est = dynamics::estimate_retraction(&map, &cfg).map_err(|e| e.to_string())?;
        let probe = ergodicity::boundary_ratio_probe(&map, &est, eta, 400).map_err(|e| e.to_string())?;
        let a = probe.a_min.unwrap_or(f64::NAN);
        ensure(probe.count >= 100 && a > 1.0, || format!("{name}: count {}, A_min {a}", probe.count))?;
        parts.push(format!("{name} A_min {a:.4} over {}", probe.count));
    }
    let id = identity(1);
    let est = dynamics::estimate_retraction(&id, &cfg).map_err(|e| e.to_string())?;
    let probe = ergodicity::boundary_ratio_probe(&id, &est, 0.1, 400).map_err(|e| e.to_string())?;
    ensure(probe.count == 0, || format!("identity: count {}", probe.count))?;
    parts.push("identity count 0".into());
    Ok(parts.join("; "))
}

fn finite_difference(map: &HoloMap, z: &ComplexVec) -> CMatrix {
    let n = map.dim();
    let h = 1e-6;
    let mut out = CMatrix::zeros(n, n);
    for l in 0..n {
        let step = ComplexVec::basis(n, l, c(h));
        let plus = map.evaluate(&(z + &step)).unwrap();
        let minus = map.evaluate(&(z - &step)).unwrap();
        for i in 0..n {
            out[(i, l)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    out
}

fn oracle_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_compose, mut worst_iterate, mut worst_jac) = (0.0f64, 0.0f64, 0.0f64);
    let mut maps_checked = 0;
    for n in 1..=3 {
        for _ in 0..3 {
            let degree = rng.random_range(1..=4);
            let f = random_polynomial_map(&mut rng, n, degree, 0.95, true);
            let g_degree = rng.random_range(1..=4);
            let g = random_polynomial_map(&mut rng, n, g_degree, 0.95, true);
            let fg = holomap::compose(&f, &g).map_err(|e| e.to_string())?;
            ensure(!fg.truncated, || "degree-4 composition truncated".into())?;
            let f2 = holomap::iterate(&f, 2).map_err(|e| e.to_string())?;
            for _ in 0..100 {
                let z = ball_point(&mut rng, n);
                let direct = f.evaluate(&g.evaluate(&z).unwrap()).unwrap();
                worst_compose = worst_compose.max(fg.map.evaluate(&z).unwrap().distance(&direct));
                let twice = f.evaluate(&f.evaluate(&z).unwrap()).unwrap();
                worst_iterate = worst_iterate.max(f2.evaluate(&z).unwrap().distance(&twice));
            }
            let a = ball_point_within(&mut rng, n, 0.8);
            let u = random_unitary(&mut rng, n);
            let aut = HoloMap::automorphism(a, u).unwrap();
            let mixed = holomap::compose(&aut, &f).unwrap().map;
            for map in [&f, &fg.map, &aut, &mixed] {
                for _ in 0..20 {
                    let z = ball_point_within(&mut rng, n, 0.9);
                    let exact = map.jacobian(&z).unwrap();
                    let err = (exact - finite_difference(map, &z)).iter().map(|x| x.norm()).fold(0.0, f64::max);
                    worst_jac = worst_jac.max(err);
                }
                maps_checked += 1;
            }
        }
    }
    ensure(worst_compose <= 1e-10, || format!("compose vs pointwise {worst_compose:e}"))?;
    ensure(worst_iterate <= 1e-10, || format!("iterate vs pointwise {worst_iterate:e}"))?;
    ensure(worst_jac <= 1e-5, || format!("jacobian vs finite differences {worst_jac:e}"))?;
    Ok(format!(
        "compose {worst_compose:.1e}, iterate {worst_iterate:.1e}, jacobian {worst_jac:.1e} over {maps_checked} maps"
    ))
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() {
    let criteria: [Criterion; 6] = [
        ("geometry", Duration::from_secs(10), geometry_suite),
        ("normal form", Duration::from_secs(30), normal_form_suite),
        ("classification", Duration::from_secs(120), classification_suite),
        ("limit projection", Duration::from_secs(30), projection_suite),
        ("boundary ratio probes", Duration::from_secs(5), boundary_ratio_suite),
        ("oracle equivalences", Duration::from_secs(10), oracle_suite),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("acceptance {} {name}: PASS ({elapsed:.2?}) {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("acceptance {} {name}: FAIL ({elapsed:.2?}) {detail}", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
