use btr::*;
use correlators::omega01;
use curve::{galois_involution, solve_curve, CurveFamilySpec, ModelSpec, SpectralCurve};
use exact_core::{rat, Complex64, ContourSpec, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn d2(lambda: f64) -> SpectralCurve {
    let s = Spectrum::new(vec![rat(1, 2), rat(3, 2)], vec![rat(1, 1), rat(2, 1)]).unwrap();
    solve_curve(&ModelSpec::new(s, cx(lambda, 0.0)).unwrap()).unwrap()
}

fn prescribed(lambda: f64) -> SpectralCurve {
    SpectralCurve::from_parameters(vec![cx(0.45, 0.0), cx(0.82, 0.0)], vec![cx(1.0, 0.0), cx(3.0, 0.0)], 1.0, cx(lambda, 0.0))
        .unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Points at least 0.08 away from every singular locus of `ω₀,₃`.
fn regular_points(curve: &SpectralCurve, count: usize, seed: u64) -> Vec<[Complex64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let bad: Vec<Complex64> = curve
        .beta
        .iter()
        .flat_map(|b| [*b, -b])
        .chain(curve.epsilon.iter().flat_map(|e| [*e, -e]))
        .collect();
    while out.len() < count {
        let p: Vec<Complex64> = (0..3).map(|_| cx(rng.gen_range(-1.2..1.2), rng.gen_range(-0.6..0.6))).collect();
        let ok_single = p.iter().all(|x| bad.iter().all(|b| (x - b).norm() > 0.08) && x.norm() > 0.08);
        let ok_pairs = (0..3).all(|i| (i + 1..3).all(|j| (p[i] + p[j]).norm() > 0.08 && (p[i] - p[j]).norm() > 0.08));
        if ok_single && ok_pairs {
            out.push([p[0], p[1], p[2]]);
        }
    }
    out
}

#[test]
fn residue_of_simple_and_double_poles() {
    let a = cx(0.3, -0.2);
    let spec = ContourSpec::new(a, 0.1, 64).unwrap();
    let r1 = residue(|z| Ok(1.0 / (z - a)), &spec).unwrap();
    let r2 = residue(|z| Ok(1.0 / ((z - a) * (z - a))), &spec).unwrap();
    assert!((r1 - 1.0).norm() < 1e-14, "{r1}");
    assert!(r2.norm() < 1e-12, "{r2}");
}

#[test]
fn residue_is_exact_across_two_decades_of_radii() {
    let (a, b) = (cx(0.1, 0.2), cx(1.5, -0.4));
    let f = |z: Complex64| Ok(3.0 / (z - a) + 1.0 / ((z - a) * (z - a)) + 5.0 / (z - b) + z * z);
    for r in [0.01, 0.03, 0.1, 0.3, 1.0] {
        let res = residue(f, &ContourSpec::new(a, r, 128).unwrap()).unwrap();
        assert!((res - 3.0).norm() < 1e-12, "radius {r}: {res}");
    }
}

#[test]
fn residue_reports_the_failing_node() {
    let spec = ContourSpec::new(cx(0.0, 0.0), 1.0, 8).unwrap();
    let err = residue(|z| Ok(1.0 / (z - cx(1.0, 0.0))), &spec).unwrap_err();
    assert!(matches!(err, BtrError::Node { node: 0, .. }), "{err:?}");
    assert!(ContourSpec::new(cx(0.0, 0.0), 1.0, 12).is_err());
}

#[test]
fn one_value_temperatures() {
    let s = Spectrum::new(vec![rat(1, 2)], vec![rat(1, 1)]).unwrap();
    for lam in [0.01, 0.05] {
        let c = solve_curve(&ModelSpec::new(s.clone(), cx(lam, 0.0)).unwrap()).unwrap();
        let eps = c.epsilon[0];
        for (center, expect) in [(eps, -lam), (-eps, lam)] {
            let spec = ContourSpec::new(center, 0.2 * eps.norm(), 128).unwrap();
            let t = residue(|z| Ok(omega01(&c, z)?), &spec).unwrap();
            assert!((t - expect).norm() < 1e-13, "{center}: {t} vs {expect}");
        }
    }
}

#[test]
fn stable_residue_shrinks_past_a_nearby_pole() {
    let a = cx(0.0, 0.0);
    let f = |z: Complex64| Ok(1.0 / z + 1.0 / (z - cx(0.5, 0.0)));
    // the first circle encloses the second pole; the retry loop must shrink below 0.5
    let r: Complex64 = stable_residue(f, a, 0.6, 64, 1e-12, 6).unwrap();
    assert!((r - 1.0).norm() < 1e-12, "{r}");
}

#[test]
fn ki_with_swapped_orderings() {
    let c = d2(0.02);
    let z = cx(0.7, 0.3);
    for i in 0..c.beta.len() {
        let q = c.beta[i] + cx(0.01, 0.004);
        let s = galois_involution(&c, i, q).unwrap();
        let swapped = kernel_ki(&c, i, z, s).unwrap();
        let independent = 0.5 * (1.0 / (z - s) - 1.0 / (z - q)) / (c.r1(q) * (c.r(-q) - c.r(-s)));
        assert!(rel(swapped, independent) < 1e-9, "beta {i}: {swapped} vs {independent}");
    }
}

#[test]
fn ki_blows_up_near_the_ramification_point() {
    // K_i ~ 1/(R″(β)R′(−β)(σ(q)−β)), a simple pole in q − β_i
    let c = d2(0.02);
    let z = cx(0.7, 0.3);
    for i in 0..c.beta.len() {
        let dir = cx(0.6, 0.8);
        let ts = [1e-2, 1e-3, 1e-4];
        let k: Vec<f64> = ts.iter().map(|&t| kernel_ki(&c, i, z, c.beta[i] + t * dir).unwrap().norm()).collect();
        let slope = ((k[2] / k[0]).ln()) / ((ts[2] / ts[0]).ln());
        assert!((slope + 1.0).abs() < 0.02, "beta {i}: slope {slope}");
    }
}

#[test]
fn ki_decays_like_inverse_square() {
    let c = d2(0.02);
    let q = c.beta[0] + cx(0.02, 0.01);
    let k2 = kernel_ki(&c, 0, cx(1e2, 0.0), q).unwrap();
    let k3 = kernel_ki(&c, 0, cx(1e3, 0.0), q).unwrap();
    let k4 = kernel_ki(&c, 0, cx(1e4, 0.0), q).unwrap();
    // z²K_i converges, with a 1/z correction
    let (a, b, d) = (k2 * 1e4, k3 * 1e6, k4 * 1e8);
    assert!((b - d).norm() < 0.2 * (a - b).norm() && (b - d).norm() < 1e-2 * d.norm(), "{a} {b} {d}");
}

#[test]
fn ktilde_properties() {
    let c = d2(0.02);
    let (z, u) = (cx(0.7, 0.3), cx(0.4, -0.1));
    // the bracket and the denominator both vanish at q = −u
    assert!(matches!(kernel_ktilde(&c, z, -u, u), Err(BtrError::KernelSingular(_))));
    let near: Vec<Complex64> = [1e-3, 1e-5].iter().map(|&h| kernel_ktilde(&c, z, -u + h, u).unwrap()).collect();
    assert!(rel(near[0], near[1]) < 1e-2);
    // independent evaluation at a generic point
    let q = cx(-0.2, 0.5);
    let direct = 0.5 * (1.0 / (z - q) - 1.0 / (z + u)) / (c.r1(q) * (c.r(u) - c.r(-q)));
    assert!(rel(kernel_ktilde(&c, z, q, u).unwrap(), direct) < 1e-14);
    // free curve
    let free = prescribed(0.0);
    let k0 = kernel_ktilde(&free, z, q, u).unwrap();
    let expect = 0.5 * (1.0 / (z - q) - 1.0 / (z + u)) / (u + q);
    assert!(rel(k0, expect) < 1e-14);
    assert!(matches!(kernel_ktilde(&c, q, q, u), Err(BtrError::KernelSingular(_))));
}

#[test]
fn kernel_context_excludes_other_singularities() {
    let c = d2(0.02);
    let extra = [cx(0.7, 0.3)];
    for i in 0..c.beta.len() {
        let ctx = KernelContext::new(&c, i, &extra, 64).unwrap();
        let r = ctx.quadrature.radius;
        for (j, b) in c.beta.iter().enumerate() {
            if j != i {
                assert!((b - c.beta[i]).norm() > 2.0 * r);
            }
        }
        for e in &c.epsilon {
            assert!((-e - c.beta[i]).norm() >= 2.0 * r - 1e-15);
        }
    }
}

#[test]
fn recursion_matches_closed_form_at_random_points() {
    let c = d2(0.02);
    let mut worst: f64 = 0.0;
    for [u, v, z] in regular_points(&c, 20, 7) {
        let btr = omega03_btr(&c, u, v, z).unwrap();
        let closed = omega03_closed(&c, u, v, z).unwrap();
        worst = worst.max(rel(btr, closed));
    }
    assert!(worst < 1e-8, "worst relative error {worst:e}");
}

#[test]
fn recursion_matches_closed_form_for_prescribed_curve() {
    let c = prescribed(0.02);
    let (u, v, z) = (cx(0.3, 0.1), cx(0.5, -0.2), cx(0.7, 0.15));
    let parts = omega03_btr_parts(&c, u, v, z, &BtrOptions::default()).unwrap();
    assert!(rel(parts.polar(), cx(-59.21795597000994, 20.151335501900434)) < 1e-9, "{}", parts.polar());
    assert!(rel(parts.total(), omega03_closed(&c, u, v, z).unwrap()) < 1e-9);
}

#[test]
fn recursion_is_symmetric() {
    let c = d2(0.02);
    for [u, v, z] in regular_points(&c, 2, 11) {
        let base = omega03_btr(&c, u, v, z).unwrap();
        for [a, b, d] in [[v, u, z], [u, z, v], [z, v, u], [v, z, u], [z, u, v]] {
            let x = omega03_btr(&c, a, b, d).unwrap();
            assert!(rel(x, base) < 1e-8, "{x} vs {base}");
        }
    }
}

#[test]
fn omega3_scale_vanishes_linearly_at_zero_coupling() {
    let (u, v, z) = (cx(0.3, 0.1), cx(0.5, -0.2), cx(0.7, 0.15));
    let scaled: Vec<f64> = [1e-3, 1e-4]
        .iter()
        .map(|&lam| {
            let c = prescribed(lam);
            let w = omega03_btr(&c, u, v, z).unwrap();
            (w * c.lambda / (c.r1(u) * c.r1(v) * c.r1(z))).norm()
        })
        .collect();
    let ratio = scaled[0] / scaled[1];
    assert!((ratio - 10.0).abs() < 0.5, "{scaled:?}");
}

#[test]
fn polar_and_antidiagonal_parts_have_separate_poles() {
    let c = d2(0.02);
    let opts = BtrOptions { node_count: 64, tol: 1e-9, attempts: 6 };
    let (u, v) = (cx(0.35, 0.2), cx(0.8, -0.25));
    let polar = |z: Complex64| polar_terms(&c, u, v, z, &opts).unwrap().iter().sum::<Complex64>();
    let anti = |z: Complex64| antidiagonal_term(&c, u, v, z, &opts).unwrap() + antidiagonal_term(&c, v, u, z, &opts).unwrap();
    // Laurent coefficients of (z − p)^{−1−k}, k < 5, on a small circle around each candidate pole
    let r = 0.02;
    let laurent = |f: &(dyn Fn(Complex64) -> Complex64 + Sync), p: Complex64| -> Vec<Complex64> {
        let vals: Vec<(Complex64, Complex64)> = ContourSpec::new(p, r, 32).unwrap().nodes().into_iter().map(|z| (z, f(z))).collect();
        (0..5).map(|k| vals.iter().map(|(z, v)| v * (z - p).powi(k + 1)).sum::<Complex64>() / 32.0).collect()
    };
    let size = |c: &[Complex64]| c.iter().enumerate().map(|(k, x)| x.norm() / r.powi(k as i32 + 1)).fold(0.0, f64::max);
    for b in [c.beta[0], c.beta[1]] {
        let (p, a) = (laurent(&polar, b), laurent(&anti, b));
        assert!(size(&p) > 1e-3, "{p:?}");
        assert!(size(&a) < 1e-9 * size(&p), "{a:?}");
    }
    for s in [-u, -v] {
        let (p, a) = (laurent(&polar, s), laurent(&anti, s));
        assert!(size(&a) > 1e-3, "{a:?}");
        assert!(size(&p) < 1e-9 * size(&a), "{p:?}");
    }
}

#[test]
fn recursion_decays_at_infinity() {
    let c = d2(0.02);
    let (u, v) = (cx(0.35, 0.2), cx(0.8, -0.25));
    let w2 = omega03_btr(&c, u, v, cx(1e2, 0.0)).unwrap();
    let w3 = omega03_btr(&c, u, v, cx(1e3, 0.0)).unwrap();
    assert!(w3.norm() < w2.norm());
    assert!((w2.norm() / w3.norm() - 100.0).abs() < 1.0, "{}", w2.norm() / w3.norm());
}

#[test]
fn irregular_arguments_are_rejected() {
    let c = d2(0.02);
    let (u, z) = (cx(0.35, 0.2), cx(0.8, -0.25));
    assert!(matches!(omega03_btr(&c, u, -u, z), Err(BtrError::Irregular(_))));
    assert!(matches!(omega03_btr(&c, u, c.beta[1], z), Err(BtrError::Irregular(_))));
    assert!(matches!(omega03_btr(&c, u, u, z), Err(BtrError::Irregular(_))));
}

#[test]
fn involution_identity_holds() {
    let c = d2(0.02);
    for [u, v, q] in regular_points(&c, 5, 23) {
        let rec = involution_identity_check(&c, u, v, q).unwrap();
        assert!(rec.residual < 1e-8, "{rec:?}");
        let closed = involution_identity_with(&c, u, v, q, Omega03Route::ClosedForm, &BtrOptions::default()).unwrap();
        assert!(closed.residual < 1e-8, "{closed:?}");
    }
}

#[test]
fn involution_identity_free_limit() {
    // ω₀,₃ = λ⁻¹Ω₃R′R′R′ stays finite as λ → 0; both sides tend to (f_u f_v)′(q)
    let (u, v, q) = (cx(0.3, 0.1), cx(0.5, -0.2), cx(0.7, 0.15));
    let h = 1e-5;
    let fuv = |x: Complex64| pair_coefficient(&u, &x) * pair_coefficient(&v, &x);
    let limit = (fuv(q + h) - fuv(q - h)) / (2.0 * h);
    let free = involution_rhs(&prescribed(0.0), u, v, q, &BtrOptions::default()).unwrap();
    assert!(rel(free, limit) < 1e-8, "{free} vs {limit}");
    let mut gaps = Vec::new();
    for lam in [1e-4, 1e-5] {
        let rep = involution_identity_with(&prescribed(lam), u, v, q, Omega03Route::ClosedForm, &BtrOptions::default()).unwrap();
        assert!(rep.residual < 1e-7, "{rep:?}");
        gaps.push(rel(rep.lhs, limit));
    }
    assert!(gaps[1] < gaps[0] && gaps[1] < 2e-3, "{gaps:?}");
}

#[test]
fn involution_identity_near_ramification_point() {
    let c = d2(0.02);
    let (u, v) = (cx(0.35, 0.2), cx(0.8, -0.25));
    // −β_i is a pole of the q-side of the identity
    let b = -c.beta[0];
    for t in [1e-1, 3e-2, 1e-2] {
        let rep = involution_identity_with(&c, u, v, b + cx(t, 0.5 * t), Omega03Route::ClosedForm, &BtrOptions::default()).unwrap();
        assert!((rep.lhs / rep.rhs - 1.0).norm() < 1e-8, "t={t}: {rep:?}");
    }
}

#[test]
fn continuity_across_critical_coupling() {
    let fam = CurveFamilySpec::FixedCurve { epsilon: vec![0.45, 0.82], rho: vec![2.0, 2.0], n: 1.0, lambda_min: 1e-3, lambda_max: 0.2 };
    let (u, v, z) = (cx(0.3, 0.1), cx(0.5, -0.2), cx(0.7, 0.15));
    let rep = continuity_across_critical(&fam, u, v, z).unwrap();
    let exact = (0.45f64 - 0.82).powi(2) / 2.0;
    assert!((rep.lambda_crit - exact).abs() < 1e-8, "{}", rep.lambda_crit);
    assert!(rep.is_linear(0.1), "{:?} {:?}", rep.differences, rep.slopes);
    assert!(rep.vieta_max < 1e-12, "{}", rep.vieta_max);
    assert!(rep.real_part_error().unwrap() < 1e-10, "{:?}", rep.merged_real_parts);
}
