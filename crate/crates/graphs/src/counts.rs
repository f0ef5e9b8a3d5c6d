use crate::{DiagramTable, GraphError};
use exact_core::{rat, LambdaSeries, Rational};
use num_traits::Signed;

/// Labelled planar diagram counts at `d = 1`, `e = 1/2`, where every weight equals one.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    pub omega1: Vec<Rational>,
    pub omega2: Vec<Rational>,
    pub omega3: Vec<Rational>,
}

fn counts(shape: &[usize], order: usize) -> Result<LambdaSeries<Rational>, GraphError> {
    let t = DiagramTable::cached(shape, 0, order)?;
    let half = vec![rat(1, 2)];
    let one = vec![rat(1, 1)];
    let n: usize = shape.iter().sum();
    // (−1)^v undoes the sign of (−λ)^v so that coefficients are counts
    let s = t.series(order, &vec![rat(1, 2); n], &half, &one)?;
    Ok(s.rescale_lambda(&rat(-1, 1)))
}

/// Counts for the planar one-, two- and three-point auxiliary functions up to `max_order`.
///
/// At `d = 1` every correlator in the genus-zero polynomial representations reduces to the
/// same-shaped correlator with coincident values, so the term lists collapse to
/// `Ω₁ = G₂`, `Ω₂ = G₂² + 3G₄ + G₂₂` and `Ω₃ = G₂₂₂ + 9G₄₂ + 20G₆ + 6G₂(G₂₂ + 2G₄)`.
pub fn count_table(max_order: usize) -> Result<CountTable, GraphError> {
    let g2 = counts(&[2], max_order)?;
    let g4 = counts(&[4], max_order)?;
    let g22 = counts(&[2, 2], max_order)?;
    let g6 = counts(&[6], max_order)?;
    let g42 = counts(&[4, 2], max_order)?;
    let g222 = counts(&[2, 2, 2], max_order)?;
    // products of (−λ)-series: counts multiply directly since signs were removed uniformly
    let omega2 = g2.mul(&g2).add(&g4.scale(&rat(3, 1))).add(&g22);
    let omega3 = g222
        .add(&g42.scale(&rat(9, 1)))
        .add(&g6.scale(&rat(20, 1)))
        .add(&g2.mul(&g22.add(&g4.scale(&rat(2, 1)))).scale(&rat(6, 1)));
    let fix = |s: LambdaSeries<Rational>| s.into_coeffs().into_iter().map(|c| c.abs()).collect();
    Ok(CountTable { omega1: fix(g2), omega2: fix(omega2), omega3: fix(omega3) })
}
