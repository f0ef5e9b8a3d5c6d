use curve::ModelSpec;
use exact_core::{rat, to_f64, Complex64, LambdaSeries, Rational, Spectrum};
use graphs::{correlator_series, BoundarySpec};
use identities::*;
use num_traits::Zero;
use proptest::prelude::*;

fn spectrum(e: &[(i64, i64)], r: &[i64]) -> Spectrum {
    Spectrum::new(e.iter().map(|&(a, b)| rat(a, b)).collect(), r.iter().map(|&x| rat(x, 1)).collect()).unwrap()
}

fn cycles(c: &[&[(i64, i64)]]) -> BoundarySpec {
    BoundarySpec::new(c.iter().map(|cy| cy.iter().map(|&(a, b)| rat(a, b)).collect()).collect()).unwrap()
}

fn g(c: &[Vec<Rational>], s: &Spectrum, order: usize) -> LambdaSeries<Rational> {
    correlator_series(&BoundarySpec::new(c.to_vec()).unwrap(), 0, order, s).unwrap()
}

// ---------- creation operator ----------

#[test]
fn creation_on_free_energy_gives_two_point_sum() {
    for (s, q) in [(spectrum(&[(1, 2), (3, 2)], &[1, 2]), 1), (spectrum(&[(1, 3), (1, 1), (5, 2)], &[2, 1, 1]), 0)] {
        let rep = prop_t_check(&BoundarySpec::vacuum(), &s, q, 2).unwrap();
        assert!(rep.exact(), "{:?}", rep.residuals);
        assert!(rep.splitting.coeffs().iter().all(|c| c.is_zero()));
        // λ⁰: (1/N) Σ_k r_k/(e_q + e_k)
        let want = s.e.iter().zip(&s.r).fold(Rational::zero(), |a, (e, r)| a + r / (&s.e[q] + e)) / &s.n;
        assert_eq!(rep.lhs.coeffs()[0], want);
    }
}

#[test]
fn creation_on_two_point() {
    let s = spectrum(&[(1, 2), (3, 2)], &[1, 2]);
    for q in 0..2 {
        let rep = prop_t_check(&cycles(&[&[(1, 3), (2, 5)]]), &s, q, 2).unwrap();
        assert!(rep.exact(), "{:?}", rep.residuals);
        assert!(!rep.lhs.coeffs()[1].is_zero());
    }
}

#[test]
fn creation_on_one_plus_one_point_needs_both_orderings() {
    let s = spectrum(&[(1, 2), (3, 2)], &[1, 2]);
    let rep = prop_t_check(&cycles(&[&[(1, 3)], &[(2, 5)]]), &s, 1, 3).unwrap();
    assert!(rep.exact(), "{:?}", rep.residuals);
    assert!(rep.splitting.coeffs().iter().any(|c| !c.is_zero()));
    // a single ordering would leave exactly half the splitting term unexplained
    let half = rep.rhs.sub(&rep.splitting.scale(&rat(1, 2)));
    assert_ne!(half, rep.lhs);
}

#[test]
fn creation_on_four_point() {
    let s = spectrum(&[(1, 3), (1, 1), (5, 2)], &[1, 2, 1]);
    let rep = prop_t_check(&cycles(&[&[(1, 3), (2, 5), (1, 7), (3, 4)]]), &s, 2, 2).unwrap();
    assert!(rep.exact(), "{:?}", rep.residuals);
}

#[test]
fn insertion_positions() {
    let ins = insertions(&[1, 2, 3], &9);
    assert_eq!(ins, vec![vec![1, 9, 1, 2, 3], vec![1, 2, 9, 2, 3], vec![1, 2, 3, 9, 3]]);
}

#[test]
fn creation_derivative_of_a_linear_sum() {
    // T̂_q of Σ_k w_k (E_k + 1) is −N·(1/N) = −1
    let s = spectrum(&[(1, 2), (3, 2)], &[1, 2]);
    let out = creation_derivative(&s, 0, |e, w| {
        let mut acc = Dual::constant(rat(0, 1));
        for (x, y) in e.iter().zip(w) {
            acc = acc + y.clone() * (x.clone() + Dual::constant(rat(1, 1)));
        }
        Ok(LambdaSeries::constant(acc, 0))
    })
    .unwrap();
    assert_eq!(out.coeffs()[0], rat(-1, 1));
}

// ---------- polynomial representations ----------

#[test]
fn omega2_leading_order() {
    let s = spectrum(&[(1, 2), (3, 2)], &[1, 2]);
    let o = omega2_from_correlators(&s, 0, 1, 1).unwrap();
    let (a, b) = (rat(1, 2), rat(3, 2));
    let want = rat(1, 1) / ((&a - &b) * (&a - &b)) + rat(1, 1) / ((&a + &b) * (&a + &b));
    assert_eq!(o.coeffs()[0], want);
}

#[test]
fn omega2_is_symmetric() {
    let s = spectrum(&[(1, 3), (1, 1), (5, 2)], &[1, 2, 1]);
    let x = omega2_from_correlators(&s, 0, 2, 3).unwrap();
    let y = omega2_from_correlators(&s, 2, 0, 3).unwrap();
    assert_eq!(x, y);
}

#[test]
fn one_value_count_columns() {
    let flip = |x: LambdaSeries<Rational>| x.rescale_lambda(&rat(-1, 1)).into_coeffs();
    let s2 = spectrum(&[(1, 2)], &[2]);
    assert_eq!(flip(omega1_from_correlators(&s2, 0, 4).unwrap()), [1, 2, 9, 54, 378].map(|x| rat(x, 1)));
    assert_eq!(flip(omega2_from_correlators(&s2, 0, 0, 3).unwrap()), [1, 7, 58, 522].map(|x| rat(x, 1)));
    let s3 = spectrum(&[(1, 2)], &[3]);
    assert_eq!(flip(omega3_from_correlators(&s3, 0, 0, 0, 2).unwrap()), [0, 12, 240].map(|x| rat(x, 1)));
    assert!(omega3_from_correlators(&s2, 0, 0, 0, 1).is_err());
}

#[test]
fn omega3_vanishes_at_zero_order() {
    let s = spectrum(&[(1, 3), (1, 1), (5, 2)], &[1, 2, 1]);
    let o = omega3_from_correlators(&s, 0, 1, 2, 1).unwrap();
    assert!(o.coeffs()[0].is_zero());
}

// ---------- n-point recursion ----------

fn two_point_of(s: &Spectrum, order: usize) -> impl Fn(&Rational, &Rational) -> Result<LambdaSeries<Rational>, IdentityError> + '_ {
    move |x: &Rational, y: &Rational| Ok(g(&[vec![x.clone(), y.clone()]], s, order))
}

#[test]
fn four_point_recursion_matches_enumeration() {
    let s = spectrum(&[(1, 2), (3, 2)], &[1, 2]);
    let v: Vec<Rational> = vec![rat(1, 3), rat(2, 5), rat(1, 7), rat(3, 4)];
    let rec = npoint_recursion(&two_point_of(&s, 3), &v, 3).unwrap();
    assert_eq!(rec, g(&[v.clone()], &s, 3));
    let (a, b, c, d) = (&v[0], &v[1], &v[2], &v[3]);
    let lead = rat(-1, 1) / ((a + b) * (b + c) * (c + d) * (d + a));
    assert_eq!(rec.coeffs()[1], lead);
}

#[test]
fn six_point_recursion_matches_enumeration() {
    let s = spectrum(&[(1, 2), (3, 2)], &[1, 2]);
    let v: Vec<Rational> = vec![rat(1, 3), rat(2, 5), rat(1, 7), rat(3, 4), rat(5, 9), rat(6, 5)];
    let rec = npoint_recursion(&two_point_of(&s, 2), &v, 2).unwrap();
    assert_eq!(rec, g(&[v], &s, 2));
}

#[test]
fn recursion_refuses_coincident_denominators() {
    let s = spectrum(&[(1, 2)], &[1]);
    let v = vec![rat(1, 3), rat(2, 5), rat(1, 3), rat(3, 4)];
    assert!(matches!(npoint_recursion(&two_point_of(&s, 1), &v, 1), Err(IdentityError::CoincidentValues(..))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn recursion_has_dihedral_symmetry(vals in proptest::collection::btree_set(1i64..40, 6), rot in 0usize..6, reflect: bool) {
        let s = spectrum(&[(1, 2), (3, 2)], &[1, 2]);
        let v: Vec<Rational> = vals.iter().map(|&x| rat(x, 7)).collect();
        let mut w = v.clone();
        w.rotate_left(rot);
        if reflect {
            w.reverse();
        }
        let tp = two_point_of(&s, 2);
        prop_assert_eq!(npoint_recursion(&tp, &v, 2).unwrap(), npoint_recursion(&tp, &w, 2).unwrap());
    }
}

// ---------- graphs against exact forms ----------

fn model(e: &[(i64, i64)], r: &[i64]) -> ModelSpec {
    ModelSpec::new(spectrum(e, r), Complex64::new(0.0, 0.0)).unwrap()
}

#[test]
fn omega1_graphs_match_exact() {
    let m = model(&[(1, 2), (3, 2)], &[1, 2]);
    for q in 0..2 {
        let rep = perturbative_vs_exact(&m, Target::Omega1(q), 3, 0.01, 64).unwrap();
        assert!(rep.max_rel < 1e-8, "{:?}", rep.rel_err);
    }
}

#[test]
fn omega2_graphs_match_exact() {
    let m = model(&[(1, 2), (3, 2)], &[1, 2]);
    let rep = perturbative_vs_exact(&m, Target::Omega2(0, 1), 3, 0.01, 64).unwrap();
    assert!(rep.max_rel < 1e-8, "{:?}", rep.rel_err);
    let one = model(&[(1, 2)], &[2]);
    let rep = perturbative_vs_exact(&one, Target::Omega2(0, 0), 3, 0.02, 64).unwrap();
    assert!(rep.max_rel < 1e-8, "{:?}", rep.rel_err);
    let counts: Vec<f64> = rep.exact.iter().enumerate().map(|(v, c)| if v % 2 == 0 { c.re } else { -c.re }).collect();
    for (c, w) in counts.iter().zip([1.0, 7.0, 58.0, 522.0]) {
        assert!((c - w).abs() < 1e-7 * w);
    }
}

#[test]
fn omega3_graphs_match_exact() {
    let m = model(&[(1, 3), (1, 1), (5, 2)], &[1, 2, 1]);
    let rep = perturbative_vs_exact(&m, Target::Omega3(0, 1, 2), 2, 0.01, 64).unwrap();
    assert!(rep.max_rel < 1e-8, "{:?}", rep);
    // two indices sharing a value
    let m2 = model(&[(1, 2), (3, 2)], &[2, 1]);
    let rep = perturbative_vs_exact(&m2, Target::Omega3(0, 0, 1), 2, 0.01, 64).unwrap();
    assert!(rep.max_rel < 1e-8, "{:?}", rep);
}

#[test]
fn omega3_first_order_against_displayed_expansion() {
    let m = model(&[(1, 3), (1, 1), (5, 2)], &[1, 2, 1]);
    let rep = perturbative_vs_exact(&m, Target::Omega3(0, 1, 2), 1, 0.01, 64).unwrap();
    let e: Vec<f64> = m.e();
    let (eq, er, es) = (e[0], e[1], e[2]);
    let a = 1.0 / (er + eq).powi(2) + 1.0 / (er - eq).powi(2);
    let b = 1.0 / (er + eq).powi(3) - 1.0 / (er - eq).powi(3);
    let b2 = 1.0 / (eq + er).powi(3) - 1.0 / (eq - er).powi(3);
    let c1 = -2.0 * (a / (es + eq).powi(3) + b / (es + eq).powi(2) + a / (es + er).powi(3) + b2 / (es + er).powi(2));
    assert!((to_f64(&rep.graph[1]) - c1).abs() < 1e-12 * c1.abs());
    assert!((rep.exact[1].re - c1).abs() < 1e-8 * c1.abs());
}

#[test]
fn contour_error_tracks_the_bound() {
    let m = model(&[(1, 2), (3, 2)], &[1, 2]);
    for radius in [0.01, 0.02] {
        let rep = perturbative_vs_exact(&m, Target::Omega2(0, 1), 3, radius, 64).unwrap();
        for (v, (err, bound)) in rep.abs_err.iter().zip(&rep.contour_bound).enumerate() {
            assert!(*err <= 1e3 * bound, "radius {radius}, order {v}: {err} vs bound {bound}");
        }
    }
}

#[test]
fn bad_targets_are_rejected() {
    let m = model(&[(1, 2), (3, 2)], &[1, 2]);
    assert!(perturbative_vs_exact(&m, Target::Omega3(0, 1, 2), 1, 0.01, 64).is_err());
}
