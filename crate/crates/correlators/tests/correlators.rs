use correlators::*;
use curve::{continue_curve, solve_curve, solve_on_circle, ModelSpec, SpectralCurve};
use exact_core::{cauchy_coefficients, rat, to_f64, Complex64, ContourSpec, Rational, Spectrum};
use proptest::prelude::*;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn model(e: &[(i64, i64)], r: &[i64], lambda: f64) -> ModelSpec {
    let s = Spectrum::new(e.iter().map(|&(a, b)| rat(a, b)).collect(), r.iter().map(|&x| rat(x, 1)).collect()).unwrap();
    ModelSpec::new(s, cx(lambda, 0.0)).unwrap()
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + b.norm())
}

/// Taylor coefficients in λ of `f(curve)` on a contour `|λ| = radius`.
fn lambda_coeffs(
    m: &ModelSpec,
    order: usize,
    radius: f64,
    f: impl Fn(&SpectralCurve) -> Result<Complex64, CorrelatorError>,
) -> Vec<Complex64> {
    let nodes = 64;
    let curves = solve_on_circle(m, radius, nodes).unwrap();
    let spec = ContourSpec::new(cx(0.0, 0.0), radius, nodes).unwrap();
    cauchy_coefficients(|j, _| f(&curves[j]), &spec, order).unwrap()
}

fn d2() -> ModelSpec {
    model(&[(1, 2), (3, 2)], &[1, 2], 0.0)
}

fn d3() -> ModelSpec {
    model(&[(1, 2), (1, 1), (2, 1)], &[1, 2, 1], 0.0)
}

// ---------- Ω₁ ----------

#[test]
fn omega1_free_limit() {
    let m = d2();
    let c = solve_curve(&m).unwrap();
    let (e, r, n) = (m.e(), m.r(), m.n());
    for q in 0..2 {
        let want: f64 = (0..2).map(|k| r[k] / (e[k] + e[q])).sum::<f64>() / n;
        let got = omega1_exact(&c, c.epsilon[q]).unwrap();
        assert!(close(got, cx(want, 0.0), 1e-14), "{got} vs {want}");
    }
}

#[test]
fn omega1_order_lambda_matches_two_point_expansion() {
    let m = d2();
    let (e, r, n) = (m.e(), m.r(), m.n());
    for q in 0..2 {
        let co = lambda_coeffs(&m, 2, 0.01, |c| omega1_exact(c, c.epsilon[q]));
        let c0: f64 = (0..2).map(|k| r[k] / (e[k] + e[q])).sum::<f64>() / n;
        let mut c1 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let (en, ek, eq) = (e[a], e[b], e[q]);
                c1 += r[a] * r[b] * (1.0 / ((eq + en).powi(2) * (eq + ek)) + 1.0 / ((eq + en).powi(2) * (en + ek)));
            }
        }
        c1 *= -1.0 / (n * n);
        assert!(close(co[0], cx(c0, 0.0), 1e-10), "{:?}", co);
        assert!(close(co[1], cx(c1, 0.0), 1e-8), "{} vs {c1}", co[1]);
    }
}

#[test]
fn omega1_confluent_limit_is_continuous() {
    let c = solve_curve(&d2().with_lambda(cx(0.3, 0.0))).unwrap();
    for q in 0..2 {
        let eq = c.epsilon[q];
        let at = omega1_exact(&c, eq).unwrap();
        let lo = omega1_exact(&c, eq * (1.0 - 1e-6)).unwrap();
        let hi = omega1_exact(&c, eq * (1.0 + 1e-6)).unwrap();
        assert!(close(at, (lo + hi) / 2.0, 1e-9), "{at} {lo} {hi}");
        // just outside the expansion window the direct formula takes over
        let far = omega1_exact(&c, eq * (1.0 + 1e-4)).unwrap();
        assert!(close(far, at, 1e-3));
    }
}

#[test]
fn omega1_pole_at_minus_epsilon() {
    let c = solve_curve(&d2().with_lambda(cx(0.1, 0.0))).unwrap();
    assert!(omega1_exact(&c, -c.epsilon[0]).is_err());
}

#[test]
fn omega1_one_value_closed_form() {
    for &lam in &[-0.05, 0.02, 0.4] {
        let c = solve_curve(&model(&[(1, 2)], &[3], lam)).unwrap();
        let cf = d1_closed_forms(0.5, 3.0, lam).unwrap();
        let got = omega1_exact(&c, c.epsilon[0]).unwrap();
        assert!(close(got, cx(cf.two_point, 0.0), 1e-12), "{got} vs {}", cf.two_point);
        assert!((c.epsilon[0].re - cf.epsilon).abs() < 1e-12);
        assert!((c.rho[0].re - cf.rho).abs() < 1e-10);
    }
}

// ---------- Ω₂ ----------

#[test]
fn omega2_free_limit_and_poles() {
    let m = d2();
    let c = solve_curve(&m).unwrap();
    let e = m.e();
    let v = omega2_exact(&c, c.epsilon[0], c.epsilon[1]).unwrap() - 1.0 / (e[0] - e[1]).powi(2);
    assert!(close(v, cx(1.0 / (e[0] + e[1]).powi(2), 0.0), 1e-14));
    let z = cx(0.3, 0.1);
    assert!(matches!(omega2_exact(&c, z, z), Err(CorrelatorError::Pole { form: "Omega2", .. })));
    assert!(omega2_exact(&c, z, -z).is_err());
}

#[test]
fn omega2_order_lambda_matches_expansion() {
    let m = d2();
    let (e, r, n) = (m.e(), m.r(), m.n());
    let (eq, er) = (e[0], e[1]);
    let co = lambda_coeffs(&m, 2, 0.01, |c| {
        Ok(omega2_exact(c, c.epsilon[0], c.epsilon[1])? - 1.0 / (eq - er).powi(2))
    });
    let mut c1 = 0.0;
    for k in 0..2 {
        let en = e[k];
        let sq = 1.0 / (eq + en).powi(2) + 1.0 / (er + en).powi(2);
        c1 += r[k]
            * (2.0 * (1.0 / (en + eq) - 1.0 / (en + er)) / (eq - er).powi(3)
                + sq / (eq - er).powi(2)
                + 2.0 * (1.0 / (en + eq) + 1.0 / (en + er)) / (eq + er).powi(3)
                + sq / (eq + er).powi(2));
    }
    c1 *= -1.0 / n;
    assert!(close(co[0], cx(1.0 / (eq + er).powi(2), 0.0), 1e-10));
    assert!(close(co[1], cx(c1, 0.0), 1e-8), "{} vs {c1}", co[1]);
}

#[test]
fn confluent_split_free_limit() {
    let c = solve_curve(&model(&[(3, 4)], &[1], 0.0)).unwrap();
    let (tr, btr) = omega2_confluent_split(&c, c.epsilon[0]).unwrap();
    assert_eq!(tr, cx(0.0, 0.0));
    assert!(close(btr, cx(1.0 / 2.25, 0.0), 1e-15));
}

#[test]
fn confluent_split_matches_diagonal_limit() {
    // TR part is the diagonal limit of Ω₂'s first term minus 1/(R(u)−R(z))²
    let c = solve_curve(&d2().with_lambda(cx(0.2, 0.0))).unwrap();
    let p = c.epsilon[1];
    let (tr, btr) = omega2_confluent_split(&c, p).unwrap();
    let h = 1e-3;
    let (u, z) = (p + h, p - h);
    let f = |u: Complex64, z: Complex64| {
        1.0 / (c.r1(u) * c.r1(z) * (u - z) * (u - z)) - 1.0 / ((c.r(u) - c.r(z)) * (c.r(u) - c.r(z)))
    };
    // symmetric difference removes the O(h²) term
    let est = (4.0 * f(p + h / 2.0, p - h / 2.0) - f(u, z)) / 3.0;
    assert!(close(tr, est, 1e-7), "{tr} vs {est}");
    let bt = 1.0 / (c.r1(p) * c.r1(p) * 4.0 * p * p);
    assert!(close(btr, bt, 1e-15));
}

// ---------- Ω₃ ----------

#[test]
fn omega3_vanishes_at_zero_coupling() {
    let c = solve_curve(&d3()).unwrap();
    let v = omega3_exact(&c, c.epsilon[0], c.epsilon[1], c.epsilon[2]).unwrap();
    assert!(v.norm() < 1e-14, "{v}");
}

#[test]
fn omega3_order_lambda_matches_expansion() {
    let m = d3();
    let e = m.e();
    for (q, r, s) in [(0, 1, 2), (2, 0, 1), (1, 2, 0)] {
        let co = lambda_coeffs(&m, 2, 0.01, |c| omega3_exact(c, c.epsilon[q], c.epsilon[r], c.epsilon[s]));
        let (eq, er, es) = (e[q], e[r], e[s]);
        let a = 1.0 / (er + eq).powi(2) + 1.0 / (er - eq).powi(2);
        let b = 1.0 / (er + eq).powi(3) - 1.0 / (er - eq).powi(3);
        let a2 = 1.0 / (eq + er).powi(2) + 1.0 / (eq - er).powi(2);
        let b2 = 1.0 / (eq + er).powi(3) - 1.0 / (eq - er).powi(3);
        let c1 = -2.0 * (a / (es + eq).powi(3) + b / (es + eq).powi(2) + a2 / (es + er).powi(3) + b2 / (es + er).powi(2));
        assert!(co[0].norm() < 1e-10, "{:?}", co[0]);
        assert!(close(co[1], cx(c1, 0.0), 1e-8), "{} vs {c1}", co[1]);
    }
}

#[test]
fn omega3_at_coincident_points_is_regular() {
    let c = solve_curve(&d2().with_lambda(cx(0.1, 0.0))).unwrap();
    let p = c.epsilon[0];
    let at = omega3_coincident(&c, p).unwrap();
    let near = omega3_exact(&c, p, p + 1e-3, p + cx(0.0, 2e-3)).unwrap();
    assert!(close(at, near, 1e-2), "{at} vs {near}");
    assert!(omega3_exact(&c, p, p, p + 0.1).is_err());
}

#[test]
fn omega3_half_integer_powers_cancel_in_pairs() {
    // λ = t² on a t-circle; each ramification point is followed continuously in t
    let m = d2();
    let (rt, nodes) = (0.1f64, 64usize);
    let (u, v, z) = (cx(0.7, 0.1), cx(1.1, -0.2), cx(0.9, 0.3));
    let mut cur = solve_curve(&m.with_lambda(cx(rt * rt, 0.0))).unwrap();
    let mut tracked = cur.beta.clone();
    let mut single = vec![Vec::new(); tracked.len()];
    let mut total = Vec::new();
    for j in 0..nodes {
        let t = Complex64::from_polar(rt, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64);
        cur = continue_curve(&cur, t * t).unwrap();
        let parts = omega3_parts(&cur, u, v, z).unwrap();
        let mut order = Vec::new();
        for b in &tracked {
            let (k, _) = cur
                .beta
                .iter()
                .enumerate()
                .min_by(|x, y| (x.1 - b).norm().partial_cmp(&(y.1 - b).norm()).unwrap())
                .unwrap();
            order.push(k);
        }
        tracked = order.iter().map(|&k| cur.beta[k]).collect();
        for (i, &k) in order.iter().enumerate() {
            single[i].push(parts.beta_terms[k]);
        }
        total.push(parts.total());
    }
    let coeffs = |vals: &[Complex64]| {
        let spec = ContourSpec::new(cx(0.0, 0.0), rt, nodes).unwrap();
        cauchy_coefficients(|j, _| Ok::<_, CorrelatorError>(vals[j]), &spec, 4).unwrap()
    };
    let tot = coeffs(&total);
    assert!(tot[1].norm() < 1e-8 && tot[3].norm() < 1e-8, "{:?}", tot);
    // the partner of slot i is slot i + d
    let d = 2;
    for i in 0..d {
        let one = coeffs(&single[i]);
        let pair: Vec<Complex64> = single[i].iter().zip(&single[i + d]).map(|(a, b)| a + b).collect();
        let pc = coeffs(&pair);
        assert!(one[1].norm().max(one[3].norm()) > 1e-3, "single term has no half-integer part: {:?}", one);
        assert!(pc[1].norm() < 1e-8 && pc[3].norm() < 1e-8, "{:?}", pc);
    }
}

fn perms3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn forms_are_symmetric(
        a in (0.2f64..2.0, -0.5f64..0.5), b in (0.2f64..2.0, -0.5f64..0.5), w in (0.2f64..2.0, -0.5f64..0.5),
        lam in 0.001f64..0.2,
    ) {
        let c = solve_curve(&d2().with_lambda(cx(lam, 0.0))).unwrap();
        let p = [cx(a.0, a.1), cx(b.0, b.1), cx(w.0, w.1)];
        let min_gap = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|(i, j)| i != j)
            .map(|(i, j)| (p[i] - p[j]).norm()).fold(f64::MAX, f64::min);
        prop_assume!(min_gap > 0.05 && p.iter().all(|x| regular_radius(&c, *x) > 0.05));
        let s = omega2_exact(&c, p[0], p[1]).unwrap();
        let t = omega2_exact(&c, p[1], p[0]).unwrap();
        prop_assert!(close(s, t, 1e-14));
        let base = omega3_exact(&c, p[0], p[1], p[2]).unwrap();
        for q in perms3() {
            let v = omega3_exact(&c, p[q[0]], p[q[1]], p[q[2]]).unwrap();
            prop_assert!((v - base).norm() <= 1e-10 * (1.0 + base.norm()), "{} vs {}", v, base);
        }
    }
}

#[test]
fn omega_form_dispatch() {
    let c = solve_curve(&d2().with_lambda(cx(0.1, 0.0))).unwrap();
    let f = OmegaForm { kind: OmegaKind::Omega02, curve: &c };
    assert_eq!(f.arity(), 2);
    let (u, z) = (cx(0.4, 0.1), cx(0.9, 0.0));
    assert!(close(f.eval(&[u, z]).unwrap(), omega2_exact(&c, u, z).unwrap(), 1e-15));
    assert!(f.eval(&[u]).is_err());
    let g = OmegaForm { kind: OmegaKind::SmallOmega01, curve: &c };
    assert!(close(g.eval(&[u]).unwrap(), -c.r(-u) * c.r1(u), 1e-15));
}

// ---------- one-value forms ----------

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

#[test]
fn one_value_series_match_displayed_coefficients() {
    let s = d1_series(&rat(1, 2), 5).unwrap();
    assert_eq!(s.two_two.coeffs(), ints(&[0, 0, 6, -108, 1458, -17820]).as_slice());
    assert_eq!(s.four_point.coeffs(), ints(&[0, -1, 10, -90, 810, -7425]).as_slice());
}

#[test]
fn factorial_series_match_closed_forms() {
    for e in [rat(1, 2), rat(3, 7), rat(2, 1)] {
        let s = d1_series(&e, 6).unwrap();
        let (tt, four) = d1_fully_simple_series(6, &e);
        assert_eq!(tt, s.two_two);
        assert_eq!(four, s.four_point);
    }
    let (tt, four) = d1_fully_simple_series(2, &rat(1, 2));
    assert_eq!(tt.coeffs()[2], rat(6, 1));
    assert_eq!(four.coeffs()[1], rat(-1, 1));
}

#[test]
fn closed_form_values_match_series() {
    let e = rat(3, 5);
    let s = d1_series(&e, 24).unwrap();
    let lam: f64 = 0.004;
    let sum = |x: &exact_core::LambdaSeries<Rational>| {
        x.coeffs().iter().enumerate().map(|(k, c)| to_f64(c) * lam.powi(k as i32)).sum::<f64>()
    };
    let cf = d1_closed_forms(0.6, 1.0, lam).unwrap();
    assert!((sum(&s.two_point) - cf.two_point).abs() < 1e-13);
    assert!((sum(&s.four_point) - cf.four_point).abs() < 1e-13);
    assert!((sum(&s.two_two) - cf.two_two_point).abs() < 1e-13);
    assert!((sum(&s.free_energy) - 0.5 * 1.2f64.ln() - cf.free_energy).abs() < 1e-13);
    let z = d1_closed_forms(0.6, 1.0, 0.0).unwrap();
    assert!(z.four_point.abs() < 1e-15);
    assert!((z.two_point - 1.0 / 1.2).abs() < 1e-15);
    assert!(matches!(d1_closed_forms(0.5, 1.0, -0.1), Err(CorrelatorError::OutsideRealPhase(_))));
}

#[test]
fn count_columns() {
    let c = d1_count_columns(5).unwrap();
    assert_eq!(c.omega1, ints(&[1, 2, 9, 54, 378, 2916]));
    assert_eq!(c.omega2, ints(&[1, 7, 58, 522, 4941, 48411]));
    assert_eq!(c.omega2_tr, ints(&[0, 1, 13, 144, 1539, 16335]));
    assert_eq!(c.omega2_btr, ints(&[1, 6, 45, 378, 3402, 32076]));
}

#[test]
fn confluent_split_on_contour_matches_exact_columns() {
    let m = model(&[(1, 2)], &[1], 0.0);
    let tr = lambda_coeffs(&m, 5, 0.02, |c| Ok(omega2_confluent_split(c, c.epsilon[0])?.0));
    let btr = lambda_coeffs(&m, 5, 0.02, |c| Ok(omega2_confluent_split(c, c.epsilon[0])?.1));
    let sign = |v: usize| if v % 2 == 0 { 1.0 } else { -1.0 };
    assert!((sign(5) * tr[5].re - 16335.0).abs() < 1e-4 * 16335.0);
    assert!((sign(5) * btr[5].re - 32076.0).abs() < 1e-4 * 32076.0);
}

#[test]
fn omega3_count_column_by_contour() {
    let col = d1_omega3_counts(3, 0.02, 64).unwrap();
    for (got, want) in col.iter().zip([0.0, 12.0, 240.0, 3628.0]) {
        assert!((got - want).abs() < 1e-5 * (1.0 + want), "{col:?}");
    }
}

// ---------- free energy ----------

#[test]
fn temperatures_are_residues() {
    let c = solve_curve(&d2().with_lambda(cx(0.15, 0.0))).unwrap();
    let (ts, t_inf) = temperatures(&c);
    assert_eq!(t_inf, cx(0.0, 0.0));
    for (a, t) in ts {
        let res = contour_residue(|q| omega01(&c, q), a, 0.05, 256).unwrap();
        assert!(close(res, t, 1e-12), "{a}: {res} vs {t}");
    }
    let one = solve_curve(&model(&[(1, 2)], &[2], 0.1)).unwrap();
    let (ts, _) = temperatures(&one);
    assert!(close(ts[0].1, cx(-0.1, 0.0), 1e-14) && close(ts[1].1, cx(0.1, 0.0), 1e-14));
}

#[test]
fn free_energy_parts() {
    for &lam in &[0.01, 0.2, -0.03] {
        let c = solve_curve(&model(&[(1, 2)], &[1], lam)).unwrap();
        let p = free_energy_planar(&c).unwrap();
        assert!((p.t_eps + lam).abs() < 1e-14 && (p.t_minus_eps - lam).abs() < 1e-14 && p.t_inf == 0.0);
        assert!((p.t_mu_sum - p.t_mu_printed).abs() < 1e-12 * (1.0 + p.t_mu_printed.abs()));
        let res = residue_minus_eps_contour(&c, 0.5 * p.epsilon, 256).unwrap();
        assert!((res.re - p.residue_minus_eps).abs() < 1e-12, "{res} vs {}", p.residue_minus_eps);
        let l = p.coupling_rho;
        let gap = p.residue_minus_eps_printed - p.residue_minus_eps;
        assert!((gap - l.powi(4) / (8.0 * p.epsilon.powi(4))).abs() < 1e-15);
        assert!((p.compensator + lam / 8.0).abs() < 1e-15);
    }
}

#[test]
fn free_energy_is_a_primitive_of_the_two_point_function() {
    let (lam, h) = (0.05, 1e-5);
    let f = |e: f64| d1_closed_forms(e, 1.0, lam).unwrap().free_energy;
    for e in [0.5, 0.8] {
        let de = (f(e + h) - f(e - h)) / (2.0 * h);
        let c = solve_curve(&ModelSpec::new(
            Spectrum::new(vec![exact_core::rational_from_f64(e).unwrap()], vec![rat(1, 1)]).unwrap(),
            cx(lam, 0.0),
        ).unwrap()).unwrap();
        let om = omega1_exact(&c, c.epsilon[0]).unwrap();
        assert!((-de - om.re).abs() < 1e-6, "{} vs {}", -de, om.re);
        assert!((free_energy_planar(&c).unwrap().value - f(e)).abs() < 1e-15);
    }
}

#[test]
fn free_energy_series_recovers_two_point_counts() {
    let s = d1_series(&rat(1, 2), 6).unwrap();
    assert_eq!(
        &s.free_energy.coeffs()[1..6],
        &[rat(-1, 2), rat(9, 8), rat(-9, 2), rat(189, 8), rat(-729, 5)]
    );
    // at e = 1/2, −∂F/∂e = 1 + 4λ ∂F/∂λ
    let lhs = s.free_energy.derivative().mul_lambda().scale(&rat(4, 1)).add(&exact_core::LambdaSeries::constant(rat(1, 1), 5));
    assert_eq!(lhs, s.two_point.truncate(5));
    assert_eq!(&lhs.rescale_lambda(&rat(-1, 1)).coeffs()[1..5], ints(&[2, 9, 54, 378]).as_slice());
}

#[test]
fn phi_derivative_is_the_one_form() {
    let c = solve_curve(&d2().with_lambda(cx(0.1, 0.0))).unwrap();
    for z in [cx(0.3, 0.4), cx(2.0, -0.5), cx(-0.2, 1.0)] {
        let h = 1e-5;
        let d = (loop_annihilation(&c, z + h).unwrap() - loop_annihilation(&c, z - h).unwrap()) / (2.0 * h);
        let w = omega01(&c, z).unwrap();
        assert!(close(d, w, 1e-8), "{z}: {d} vs {w}");
    }
}

#[test]
fn quadrangulation_series() {
    assert!((quadrangulation_gf(0.0).unwrap() + 2f64.ln() / 2.0).abs() < 1e-15);
    assert!((quadrangulation_gf_printed(0.0).unwrap() + 2f64.ln() / 4.0).abs() < 1e-15);
    assert!(matches!(quadrangulation_gf(0.1), Err(CorrelatorError::Branch(_))));
    let gf = quadrangulation_gf_series(6).unwrap();
    let fe = d1_series(&rat(1, 2), 6).unwrap().free_energy;
    assert_eq!(gf.rational.rescale_lambda(&rat(-1, 1)), fe);
    assert_eq!(gf.log2_coefficient, rat(-1, 2));
    let printed = quadrangulation_gf_printed_series(6).unwrap();
    assert_eq!(printed.rational.coeffs()[1], rat(-1, 4));
    assert_ne!(printed.rational.rescale_lambda(&rat(-1, 1)), fe);
    for lam in [-0.05, 0.02, 0.08] {
        let f = d1_closed_forms(0.5, 1.0, -lam).unwrap().free_energy;
        assert!((quadrangulation_gf(lam).unwrap() + 2f64.ln() / 2.0 - f).abs() < 1e-14);
    }
}
