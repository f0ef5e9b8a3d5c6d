use crate::checks::{
    all_pass, btr_checks, comparison_check, continuity_checks, creation_checks, critical_checks, omega3_half_integer_parts, Check,
};
use crate::output::{float_cell, rat_cell, Artifact, CsvTable};
use crate::{CliError, RunConfig};
use btr::{omega03_btr, omega03_closed};
use correlators::{
    d1_count_columns, d1_fully_simple_series, d1_omega3_counts, d1_series, free_energy_planar, omega01, omega1_exact, omega2_exact,
    omega3_exact, quadrangulation_gf_series,
};
use curve::{cut_geometry, family_curve, solve_curve, trace_branch_cuts, CurveFamilySpec, SpectralCurve};
use exact_core::{parse_rational, Complex64, LambdaSeries, Rational};
use graphs::{correlator_series, count_table, free_energy_series, BoundarySpec, GraphError};
use identities::Target;
use rayon::prelude::*;
use serde_json::json;

/// Artifact plus the verdict that decides the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifact: Artifact,
    pub pass: bool,
}

impl Outcome {
    fn ok(artifact: Artifact) -> Self {
        Outcome { artifact, pass: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    PropT,
    OmegaPoly,
    PertVsExact,
    Btr,
    Critical,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "propT" | "propt" => Suite::PropT,
            "omega-poly" => Suite::OmegaPoly,
            "pert-vs-exact" => Suite::PertVsExact,
            "btr" => Suite::Btr,
            "critical" => Suite::Critical,
            _ => return Err(CliError::Argument(format!("unknown suite {s}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::PropT => "propT",
            Suite::OmegaPoly => "omega-poly",
            Suite::PertVsExact => "pert-vs-exact",
            Suite::Btr => "btr",
            Suite::Critical => "critical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Beta,
    Cuts,
    Topology,
}

impl SweepKind {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "beta" => SweepKind::Beta,
            "cuts" => SweepKind::Cuts,
            "topology" => SweepKind::Topology,
            _ => return Err(CliError::Argument(format!("unknown sweep {s}"))),
        })
    }
}

// ---------- counts ----------

/// Largest order counted by enumeration.
pub const ENUMERATION_MAX_ORDER: usize = 4;

fn integer_cell(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() <= 1e-6 * (1.0 + x.abs()) {
        format!("{}", r as i64)
    } else {
        float_cell(x)
    }
}

/// The count table at `d = 1`, `e = 1/2`: enumeration through order 4, closed forms above.
///
/// The TR/BTR split of Ω₂ only exists on the closed-form side. Where both routes exist the
/// enumerated Ω₁, Ω₂ columns are also checked against the closed forms.
pub fn cmd_counts(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let order = cfg.orders.max;
    let enum_max = order.min(ENUMERATION_MAX_ORDER);
    let enumerated = match count_table(enum_max) {
        Ok(t) => Some(t),
        Err(GraphError::Budget { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let closed = d1_count_columns(order)?;
    let om3_closed = if order > enum_max || enumerated.is_none() {
        Some(d1_omega3_counts(order, 0.02, 64)?)
    } else {
        None
    };
    let mut t = CsvTable::new(
        "qkm.counts.v1",
        &["order", "omega1_count", "omega2_count", "omega2_tr", "omega2_btr", "omega3_count", "source"],
    );
    let mut pass = true;
    for v in 0..=order {
        let row = match &enumerated {
            Some(e) if v <= enum_max => {
                pass &= e.omega1[v] == closed.omega1[v] && e.omega2[v] == closed.omega2[v];
                vec![rat_cell(&e.omega1[v]), rat_cell(&e.omega2[v]), rat_cell(&e.omega3[v]), "enumeration".to_string()]
            }
            _ => {
                let om3 = om3_closed.as_ref().map(|c| integer_cell(c[v])).unwrap_or_default();
                let src = if v <= enum_max { "closed-form (enumeration budget exceeded)" } else { "closed-form" };
                vec![rat_cell(&closed.omega1[v]), rat_cell(&closed.omega2[v]), om3, src.to_string()]
            }
        };
        t.push(vec![
            v.to_string(),
            row[0].clone(),
            row[1].clone(),
            rat_cell(&closed.omega2_tr[v]),
            rat_cell(&closed.omega2_btr[v]),
            row[2].clone(),
            row[3].clone(),
        ]);
    }
    Ok(Outcome { artifact: Artifact::Csv(t), pass })
}

// ---------- verify ----------

/// Default test points for `Ω₃` half-integer checks.
const HALF_POINTS: (Complex64, Complex64, Complex64) =
    (Complex64::new(0.7, 0.1), Complex64::new(1.1, -0.2), Complex64::new(0.9, 0.3));

/// Equal-weight triples `(ε₁, ε₂, ϱ)` with closed-form critical coupling.
pub const CRITICAL_TRIPLES: [(f64, f64, f64); 3] = [(0.45, 0.82, 2.0), (0.3, 1.1, 1.5), (1.0, 1.6, 0.7)];

pub fn default_continuity_family() -> CurveFamilySpec {
    CurveFamilySpec::FixedCurve { epsilon: vec![0.45, 0.82], rho: vec![2.0, 2.0], n: 1.0, lambda_min: 1e-3, lambda_max: 0.2 }
}

pub fn suite_checks(cfg: &RunConfig, suite: Suite) -> Result<Vec<Check>, CliError> {
    let model = cfg.model_spec()?;
    let d = model.d();
    let (radius, nodes) = (cfg.contour.radius, cfg.contour.nodes);
    match suite {
        Suite::PropT => creation_checks(&cfg.spectrum()?, cfg.orders.max.min(2)),
        Suite::OmegaPoly => {
            let mut out = Vec::new();
            let spectrum = cfg.spectrum()?;
            let room = |k: usize, used: i64| spectrum.r[k] >= Rational::from_integer(used.into());
            for a in 0..d {
                for b in a..d {
                    if a == b && !room(a, 2) {
                        continue;
                    }
                    out.push(comparison_check(&model, Target::Omega2(a, b), cfg.orders.max.min(3), radius, nodes, 1e-8)?);
                }
            }
            let (i, j, k) = (0, d / 2, d - 1);
            let fits = (0..d).all(|s| room(s, [i, j, k].iter().filter(|&&x| x == s).count() as i64));
            if !fits {
                return Err(CliError::Argument("Omega3 check needs three distinct matrix indices".into()));
            }
            out.push(comparison_check(&model, Target::Omega3(i, j, k), cfg.orders.max.min(2), radius, nodes, 1e-8)?);
            let half = omega3_half_integer_parts(&model, HALF_POINTS, 0.1, 64)?;
            out.push(Check::below("Omega3 sqrt(lambda)-odd coefficients", half.total_odd, 1e-8));
            for (i, p) in half.pair_odd.iter().enumerate() {
                out.push(Check::below(format!("Omega3 odd coefficients of ramification pair {i}"), *p, 1e-8));
            }
            Ok(out)
        }
        Suite::PertVsExact => {
            let mut out = Vec::new();
            for q in 0..d {
                out.push(comparison_check(&model, Target::Omega1(q), cfg.orders.max.min(4), radius, nodes, 1e-8)?);
            }
            if d >= 2 {
                out.push(comparison_check(&model, Target::Omega2(0, 1), cfg.orders.max.min(3), radius, nodes, 1e-8)?);
            }
            Ok(out)
        }
        Suite::Btr => {
            let lam = if cfg.model.lambda == 0.0 { 0.02 } else { cfg.model.lambda };
            let curve = solve_curve(&model.with_lambda(Complex64::new(lam, 0.0)))?;
            btr_checks(&curve, 20, cfg.seed)
        }
        Suite::Critical => {
            let mut out = critical_checks(&CRITICAL_TRIPLES)?;
            let fam = match &cfg.family {
                Some(_) => cfg.family_spec()?,
                None => default_continuity_family(),
            };
            out.extend(continuity_checks(&fam, HALF_POINTS.0 - 0.4, HALF_POINTS.1 - 0.6, HALF_POINTS.2 - 0.2)?);
            Ok(out)
        }
    }
}

/// Runs one suite; any error is captured in the report and fails the run.
pub fn cmd_verify(cfg: &RunConfig, suite: Suite) -> Outcome {
    let (checks, error) = match suite_checks(cfg, suite) {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let pass = error.is_none() && !checks.is_empty() && all_pass(&checks);
    Outcome {
        artifact: Artifact::Json(json!({
            "suite": suite.name(),
            "pass": pass,
            "error": error,
            "checks": checks,
            "config_sha256": cfg.hash(),
        })),
        pass,
    }
}

// ---------- sweep ----------

fn cplx_cells(z: Complex64) -> [String; 2] {
    [float_cell(z.re), float_cell(z.im)]
}

fn sweep_rows(kind: SweepKind, fam: &CurveFamilySpec, lambda: f64, samples: usize) -> Vec<Vec<String>> {
    let l = float_cell(lambda);
    let curve = match family_curve(fam, lambda) {
        Ok(c) => c,
        Err(e) => return vec![failure_row(kind, &l, &e.to_string())],
    };
    match kind {
        SweepKind::Beta => {
            let vieta = float_cell(curve.vieta_residual());
            let mut rows = Vec::new();
            for (k, b) in curve.beta.iter().enumerate() {
                let [re, im] = cplx_cells(*b);
                rows.push(vec![l.clone(), "beta".into(), k.to_string(), re, im, vieta.clone(), "ok".into()]);
            }
            for (k, e) in curve.epsilon.iter().enumerate() {
                let [re, im] = cplx_cells(*e);
                rows.push(vec![l.clone(), "epsilon".into(), k.to_string(), re, im, vieta.clone(), "ok".into()]);
            }
            rows
        }
        SweepKind::Cuts => match trace_branch_cuts(&curve, samples) {
            Ok(traces) => {
                let mut rows = Vec::new();
                for t in traces {
                    for (s, sheet) in t.sheets.iter().enumerate() {
                        let on_loop = s == t.loop_sheets.0 || s == t.loop_sheets.1;
                        for (j, z) in sheet.iter().enumerate() {
                            let [re, im] = cplx_cells(*z);
                            rows.push(vec![
                                l.clone(),
                                t.index.to_string(),
                                j.to_string(),
                                s.to_string(),
                                re,
                                im,
                                on_loop.to_string(),
                                t.flagged.contains(&j).to_string(),
                            ]);
                        }
                    }
                }
                rows
            }
            Err(e) => vec![failure_row(kind, &l, &e.to_string())],
        },
        SweepKind::Topology => match cut_geometry(&curve, samples) {
            Ok(g) => {
                let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
                (0..g.loops.len())
                    .map(|i| {
                        vec![
                            l.clone(),
                            i.to_string(),
                            join(&g.encloses[i]),
                            join(&g.contains[i]),
                            g.nesting_count().to_string(),
                            g.flagged_samples.to_string(),
                        ]
                    })
                    .collect()
            }
            Err(e) => vec![failure_row(kind, &l, &e.to_string())],
        },
    }
}

fn failure_row(kind: SweepKind, lambda: &str, msg: &str) -> Vec<String> {
    let width = sweep_columns(kind).len();
    let mut row = vec![String::new(); width];
    row[0] = lambda.to_string();
    row[width - 1] = format!("failed: {msg}");
    row
}

fn sweep_columns(kind: SweepKind) -> &'static [&'static str] {
    match kind {
        SweepKind::Beta => &["lambda", "kind", "index", "re", "im", "vieta_residual", "status"],
        SweepKind::Cuts => &["lambda", "cut", "sample", "sheet", "re", "im", "loop_sheet", "flagged"],
        SweepKind::Topology => &["lambda", "loop", "encloses", "contains", "nesting_count", "flagged_samples"],
    }
}

/// λ sweep of a family; grid points run in parallel and rows are emitted in grid order.
/// Failed grid points are flagged in their row and the sweep continues.
pub fn cmd_sweep(cfg: &RunConfig, kind: SweepKind) -> Result<Outcome, CliError> {
    let fam = cfg.family_spec()?;
    let grid = cfg.lambda_grid()?;
    let samples = cfg.family.as_ref().map(|f| f.samples).unwrap_or(80);
    let schema = match kind {
        SweepKind::Beta => "qkm.sweep.beta.v1",
        SweepKind::Cuts => "qkm.sweep.cuts.v1",
        SweepKind::Topology => "qkm.sweep.topology.v1",
    };
    let blocks: Vec<Vec<Vec<String>>> = grid.par_iter().map(|&l| sweep_rows(kind, &fam, l, samples)).collect();
    let mut t = CsvTable::new(schema, sweep_columns(kind));
    let mut pass = true;
    for row in blocks.into_iter().flatten() {
        pass &= !row.last().is_some_and(|s| s.starts_with("failed"));
        t.push(row);
    }
    Ok(Outcome { artifact: Artifact::Csv(t), pass })
}

// ---------- expand ----------

/// Parses `"a,b|c"` into boundary cycles of rational values.
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<Rational>>, CliError> {
    text.split('|')
        .map(|c| c.split(',').map(|x| parse_rational(x).map_err(CliError::from)).collect())
        .collect()
}

fn single_value(cfg: &RunConfig) -> Result<Rational, CliError> {
    let s = cfg.spectrum()?;
    if s.d() != 1 {
        return Err(CliError::Argument("one-value targets need a model with d = 1".into()));
    }
    Ok(s.e[0].clone())
}

/// Exact series coefficients of the requested target up to `orders.max`.
pub fn expand_series(cfg: &RunConfig, target: &str, cycles: Option<&str>) -> Result<LambdaSeries<Rational>, CliError> {
    let order = cfg.orders.max;
    Ok(match target {
        "free-energy" => free_energy_series(0, order, &cfg.spectrum()?)?,
        "correlator" => {
            let c = cycles.ok_or_else(|| CliError::Argument("target correlator needs --cycles".into()))?;
            correlator_series(&BoundarySpec::new(parse_cycles(c)?)?, 0, order, &cfg.spectrum()?)?
        }
        "gf" => {
            let gf = quadrangulation_gf_series(order)?.rational;
            if cfg.conventions.gf_flip_lambda {
                gf.rescale_lambda(&Rational::from_integer((-1).into()))
            } else {
                gf
            }
        }
        "d1-two-point" | "d1-four-point" | "d1-two-two" | "d1-omega2" | "d1-omega2-tr" | "d1-omega2-btr" | "d1-free-energy" => {
            let s = d1_series(&single_value(cfg)?, order)?;
            match target {
                "d1-two-point" => s.two_point,
                "d1-four-point" => s.four_point,
                "d1-two-two" => s.two_two,
                "d1-omega2" => s.omega2,
                "d1-omega2-tr" => s.omega2_tr,
                "d1-omega2-btr" => s.omega2_btr,
                _ => s.free_energy,
            }
        }
        "fully-simple-two-two" | "fully-simple-four" => {
            let (two_two, four) = d1_fully_simple_series(order, &single_value(cfg)?);
            if target == "fully-simple-two-two" {
                two_two
            } else {
                four
            }
        }
        _ => return Err(CliError::Argument(format!("unknown expand target {target}"))),
    })
}

pub fn cmd_expand(cfg: &RunConfig, target: &str, cycles: Option<&str>) -> Result<Outcome, CliError> {
    let s = expand_series(cfg, target, cycles)?;
    let mut t = CsvTable::new("qkm.expand.v1", &["target", "order", "coefficient", "numerator", "denominator"]);
    for (v, c) in s.coeffs().iter().enumerate() {
        t.push(vec![target.into(), v.to_string(), rat_cell(c), c.numer().to_string(), c.denom().to_string()]);
    }
    Ok(Outcome::ok(Artifact::Csv(t)))
}

// ---------- solve, omega, free energy ----------

fn solved(cfg: &RunConfig) -> Result<SpectralCurve, CliError> {
    Ok(solve_curve(&cfg.model_spec()?)?)
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = solved(cfg)?;
    let mut t = CsvTable::new("qkm.solve.v1", &["kind", "index", "re", "im"]);
    for (name, vals) in [("epsilon", &c.epsilon), ("rho", &c.rho), ("beta", &c.beta)] {
        for (k, z) in vals.iter().enumerate() {
            let [re, im] = cplx_cells(*z);
            t.push(vec![name.into(), k.to_string(), re, im]);
        }
    }
    t.push(vec!["residual".into(), "0".into(), float_cell(c.residual().unwrap_or(0.0)), "0.0".into()]);
    t.push(vec!["vieta_residual".into(), "0".into(), float_cell(c.vieta_residual()), "0.0".into()]);
    Ok(Outcome::ok(Artifact::Csv(t)))
}

/// Parses `"re,im;re,im"` (imaginary parts optional) into points.
pub fn parse_points(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(';')
        .map(|p| {
            let parts: Vec<&str> = p.split(',').map(str::trim).collect();
            let num = |s: &str| s.parse::<f64>().map_err(|_| CliError::Argument(format!("bad number {s}")));
            match parts.as_slice() {
                [re] => Ok(Complex64::new(num(re)?, 0.0)),
                [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
                _ => Err(CliError::Argument(format!("bad point {p}"))),
            }
        })
        .collect()
}

pub fn cmd_omega(cfg: &RunConfig, kind: &str, at: &str) -> Result<Outcome, CliError> {
    let c = solved(cfg)?;
    let p = parse_points(at)?;
    let need = |n: usize| {
        if p.len() == n {
            Ok(())
        } else {
            Err(CliError::Argument(format!("{kind} takes {n} points, got {}", p.len())))
        }
    };
    let value = match kind {
        "omega01" => {
            need(1)?;
            omega01(&c, p[0])?
        }
        "omega1" => {
            need(1)?;
            omega1_exact(&c, p[0])?
        }
        "omega2" => {
            need(2)?;
            omega2_exact(&c, p[0], p[1])?
        }
        "omega3" => {
            need(3)?;
            omega3_exact(&c, p[0], p[1], p[2])?
        }
        "omega03-btr" => {
            need(3)?;
            omega03_btr(&c, p[0], p[1], p[2])?
        }
        "omega03-closed" => {
            need(3)?;
            omega03_closed(&c, p[0], p[1], p[2])?
        }
        _ => return Err(CliError::Argument(format!("unknown form {kind}"))),
    };
    let mut t = CsvTable::new("qkm.omega.v1", &["kind", "lambda", "points", "re", "im"]);
    let pts = p.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect::<Vec<_>>().join(";");
    let [re, im] = cplx_cells(value);
    t.push(vec![kind.into(), float_cell(cfg.model.lambda), pts, re, im]);
    Ok(Outcome::ok(Artifact::Csv(t)))
}

/// Planar free energy of a one-value model: the evaluated parts and the exact series.
pub fn cmd_free_energy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let e = single_value(cfg)?;
    let c = solved(cfg)?;
    let p = free_energy_planar(&c)?;
    let series = d1_series(&e, cfg.orders.max)?.free_energy;
    let graphs = free_energy_series(0, cfg.orders.max.min(4), &cfg.spectrum()?)?;
    let agree = graphs.coeffs().iter().zip(series.coeffs()).skip(1).all(|(a, b)| a == b);
    let cells = |s: &LambdaSeries<Rational>| s.coeffs().iter().map(rat_cell).collect::<Vec<_>>();
    let doc = json!({
        "lambda": cfg.model.lambda,
        "e": rat_cell(&e),
        "epsilon": p.epsilon,
        "coupling_rho": p.coupling_rho,
        "t_eps": p.t_eps,
        "t_minus_eps": p.t_minus_eps,
        "t_inf": p.t_inf,
        "mu_eps": p.mu_eps,
        "mu_minus_eps": p.mu_minus_eps,
        "residue_minus_eps": p.residue_minus_eps,
        "residue_minus_eps_printed": p.residue_minus_eps_printed,
        "t_mu_sum": p.t_mu_sum,
        "t_mu_printed": p.t_mu_printed,
        "compensator": p.compensator,
        "assembly": p.assembly,
        "value": p.value,
        "series_without_log": cells(&series),
        "graph_series": cells(&graphs),
        "graph_series_agrees": agree,
    });
    Ok(Outcome { artifact: Artifact::Json(doc), pass: agree })
}
