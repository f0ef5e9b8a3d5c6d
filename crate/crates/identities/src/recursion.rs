use crate::IdentityError;
use exact_core::{LambdaSeries, Rational};

/// Planar one-cycle `n`-point series from 2-point series by
/// `G_{|p₁…p_n|} = −λ Σ_{k=1}^{(n−2)/2} (G_{|p_{2k+2}…p_n p₁|} G_{|p₂…p_{2k+1}|} − G_{|p_{2k+1}…p_n|} G_{|p₁…p_{2k}|})
///  / ((E_{p_{2k+1}} − E_{p₁})(E_{p₂} − E_{p_n}))`.
///
/// `two_point(x, y)` supplies `G_{|xy|}`. Values must be pairwise distinct where they meet in a
/// denominator; coincident values are refused.
pub fn npoint_recursion<F>(two_point: &F, values: &[Rational], order: usize) -> Result<LambdaSeries<Rational>, IdentityError>
where
    F: Fn(&Rational, &Rational) -> Result<LambdaSeries<Rational>, IdentityError>,
{
    let n = values.len();
    if n == 0 || n % 2 == 1 {
        return Ok(LambdaSeries::zero(order));
    }
    if n == 2 {
        return two_point(&values[0], &values[1]);
    }
    let p = |i: usize| &values[i - 1];
    let mut acc = LambdaSeries::zero(order);
    for k in 1..=(n - 2) / 2 {
        let d1 = p(2 * k + 1) - p(1);
        let d2 = p(2) - p(n);
        for (x, y) in [(p(2 * k + 1), p(1)), (p(2), p(n))] {
            if x == y {
                return Err(IdentityError::CoincidentValues(x.to_string(), y.to_string()));
            }
        }
        let mut first: Vec<Rational> = values[2 * k + 1..].to_vec();
        first.push(p(1).clone());
        let second = values[1..2 * k + 1].to_vec();
        let third = values[2 * k..].to_vec();
        let fourth = values[..2 * k].to_vec();
        let t = npoint_recursion(two_point, &first, order)?
            .mul(&npoint_recursion(two_point, &second, order)?)
            .sub(&npoint_recursion(two_point, &third, order)?.mul(&npoint_recursion(two_point, &fourth, order)?));
        acc = acc.add(&t.scale(&(Rational::from_integer(1.into()) / (d1 * d2))));
    }
    Ok(acc.mul_lambda().neg())
}
