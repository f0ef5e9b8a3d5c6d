use crate::{omega1_from_correlators, omega2_from_correlators, omega3_from_correlators, IdentityError};
use correlators::{omega1_exact, omega2_confluent_split, omega2_exact, omega3_exact, omega3_regularized, regular_radius};
use curve::{solve_on_circle, ModelSpec, SpectralCurve};
use exact_core::{cauchy_coefficients, to_f64, Complex64, ContourSpec, Rational};

/// Which auxiliary function to compare, with the slots of its indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Omega1(usize),
    Omega2(usize, usize),
    Omega3(usize, usize, usize),
}

/// Graph-side rational coefficients against contour-extracted coefficients of the exact forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub target: Target,
    pub graph: Vec<Rational>,
    pub exact: Vec<Complex64>,
    pub abs_err: Vec<f64>,
    /// `|exact − graph| / |graph|`, or the absolute error where the graph coefficient vanishes.
    pub rel_err: Vec<f64>,
    /// Round-off bound `eps·max|f|/radius^v` of the trapezoidal rule.
    pub contour_bound: Vec<f64>,
    pub max_rel: f64,
}

fn exact_value(curve: &SpectralCurve, target: Target) -> Result<Complex64, IdentityError> {
    let eps = |q: usize| curve.epsilon[q];
    Ok(match target {
        Target::Omega1(q) => omega1_exact(curve, eps(q))?,
        Target::Omega2(a, b) if a == b => {
            let (tr, btr) = omega2_confluent_split(curve, eps(a))?;
            tr + btr
        }
        Target::Omega2(a, b) => omega2_exact(curve, eps(a), eps(b))?,
        Target::Omega3(a, b, c) if a != b && b != c && a != c => omega3_exact(curve, eps(a), eps(b), eps(c))?,
        Target::Omega3(a, b, c) => {
            let (u, v, z) = (eps(a), eps(b), eps(c));
            let mut rho = [u, v, z].iter().map(|p| regular_radius(curve, *p)).fold(f64::MAX, f64::min);
            for (x, y) in [(u, v), (v, z), (u, z)] {
                if x != y {
                    rho = rho.min((x - y).norm());
                }
            }
            omega3_regularized(curve, u, v, z, 0.2 * rho, 48)?
        }
    })
}

fn graph_series(model: &ModelSpec, target: Target, order: usize) -> Result<Vec<Rational>, IdentityError> {
    let s = &model.spectrum;
    let series = match target {
        Target::Omega1(q) => omega1_from_correlators(s, q, order)?,
        Target::Omega2(a, b) => omega2_from_correlators(s, a, b, order)?,
        Target::Omega3(a, b, c) => omega3_from_correlators(s, a, b, c, order)?,
    };
    Ok(series.into_coeffs())
}

/// Compares orders `0..=order` on the contour `|λ| = radius` with `nodes` nodes.
pub fn perturbative_vs_exact(
    model: &ModelSpec,
    target: Target,
    order: usize,
    radius: f64,
    nodes: usize,
) -> Result<ComparisonReport, IdentityError> {
    let d = model.d();
    let in_range = match target {
        Target::Omega1(q) => q < d,
        Target::Omega2(a, b) => a < d && b < d,
        Target::Omega3(a, b, c) => a < d && b < d && c < d,
    };
    if !in_range {
        return Err(IdentityError::BadIndex(format!("{target:?} for d = {d}")));
    }
    let graph = graph_series(model, target, order)?;
    let curves = solve_on_circle(model, radius, nodes)?;
    let spec = ContourSpec::new(Complex64::new(0.0, 0.0), radius, nodes).map_err(IdentityError::Contour)?;
    let mut max_abs = 0.0f64;
    let exact = cauchy_coefficients(
        |j, _| {
            let v = exact_value(&curves[j], target)?;
            max_abs = max_abs.max(v.norm());
            Ok::<_, IdentityError>(v)
        },
        &spec,
        order,
    )
    .map_err(|e| IdentityError::Contour(e.to_string()))?;
    let mut abs_err = Vec::new();
    let mut rel_err = Vec::new();
    let mut contour_bound = Vec::new();
    for (v, (g, x)) in graph.iter().zip(&exact).enumerate() {
        let gf = to_f64(g);
        let a = (x - Complex64::new(gf, 0.0)).norm();
        abs_err.push(a);
        rel_err.push(if gf == 0.0 { a } else { a / gf.abs() });
        contour_bound.push(spec.error_bound(max_abs, v));
    }
    let max_rel = rel_err.iter().cloned().fold(0.0, f64::max);
    Ok(ComparisonReport { target, graph, exact, abs_err, rel_err, contour_bound, max_rel })
}
