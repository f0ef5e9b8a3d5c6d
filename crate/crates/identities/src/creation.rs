use crate::omega_poly::Correlators;
use crate::IdentityError;
use exact_core::{LambdaSeries, MultiDual, Rational, Spectrum};
use graphs::{BoundarySpec, DiagramTable};
use num_traits::Zero;

/// Rational numbers with one infinitesimal direction.
pub type Dual = MultiDual<Rational>;

fn konst(x: &Rational) -> Dual {
    Dual::constant(x.clone())
}

/// `T̂_q = −N ∂/∂E_q` applied coefficient-wise to a λ-series.
///
/// Index `q` is one matrix index of slot `q_slot`; it is split into its own slot of multiplicity
/// one whose value carries the infinitesimal. `build` receives loop values and loop weights
/// `r_k/N` of the split spectrum and returns a series over [`Dual`].
pub fn creation_derivative<F>(
    spectrum: &Spectrum,
    q_slot: usize,
    build: F,
) -> Result<LambdaSeries<Rational>, IdentityError>
where
    F: Fn(&[Dual], &[Dual]) -> Result<LambdaSeries<Dual>, IdentityError>,
{
    let (split, idx) = spectrum.split_slot(q_slot)?;
    let e: Vec<Dual> = split
        .e
        .iter()
        .enumerate()
        .map(|(k, x)| if k == idx { Dual::variable(x.clone(), 0, 1) } else { Ok(konst(x)) })
        .collect::<Result<_, _>>()?;
    let w: Vec<Dual> = split.r.iter().map(|r| konst(&(r / &split.n))).collect();
    let s = build(&e, &w)?;
    let minus_n = -spectrum.n.clone();
    Ok(s.map(|c| c.part(1) * minus_n.clone()))
}

/// Cycles obtained by inserting `[q, p_l]` after position `l` of `cycle`, `l = 1..n`.
pub fn insertions<T: Clone>(cycle: &[T], q: &T) -> Vec<Vec<T>> {
    (1..=cycle.len())
        .map(|l| {
            let mut c = cycle[..l].to_vec();
            c.push(q.clone());
            c.push(cycle[l - 1].clone());
            c.extend_from_slice(&cycle[l..]);
            c
        })
        .collect()
}

/// Both sides of the single creation-operator identity at genus zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PropTReport {
    pub lhs: LambdaSeries<Rational>,
    pub rhs: LambdaSeries<Rational>,
    /// The splitting products `G_{|J₁|q|} G_{|J₂|q|}` alone (over ordered decompositions).
    pub splitting: LambdaSeries<Rational>,
    /// `lhs − rhs` per order.
    pub residuals: Vec<Rational>,
}

impl PropTReport {
    pub fn exact(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero())
    }
}

fn lambda0_free_energy(e: &[Dual], w: &[Dual], order: usize) -> Result<LambdaSeries<Dual>, IdentityError> {
    // −½ Σ_{k,l} w_k w_l log(E_k + E_l), up to a constant
    let mut acc = Dual::zero();
    for (ek, wk) in e.iter().zip(w) {
        for (el, wl) in e.iter().zip(w) {
            acc = acc + wk.clone() * wl.clone() * (ek.clone() + el.clone()).ln_increment()?;
        }
    }
    let half = konst(&Rational::new((-1).into(), 2.into()));
    Ok(LambdaSeries::constant(half * acc, order))
}

/// Checks `T̂_q G⁽⁰⁾_{|J|} = (1/N)Σ_k G⁽⁰⁾_{|J|qk|} + Σ insertions + Σ splittings` exactly.
///
/// For the empty boundary the left side is `T̂_q F⁽⁰⁾`, including its λ⁰ logarithm.
pub fn prop_t_check(
    boundary: &BoundarySpec,
    spectrum: &Spectrum,
    q_slot: usize,
    order: usize,
) -> Result<PropTReport, IdentityError> {
    if q_slot >= spectrum.d() {
        return Err(IdentityError::BadIndex(format!("slot {q_slot} out of range")));
    }
    let shape = boundary.shape();
    let legs: Vec<Dual> = boundary.leg_values().iter().map(konst).collect();
    let vacuum = shape.is_empty();
    let table = DiagramTable::cached(&shape, 0, order)?;
    let lhs = creation_derivative(spectrum, q_slot, |e, w| {
        let s = table.series(order, &legs, e, w)?;
        if vacuum {
            Ok(s.add(&lambda0_free_energy(e, w, order)?))
        } else {
            Ok(s)
        }
    })?;

    let g = Correlators::new(spectrum, order);
    let q = spectrum.e[q_slot].clone();
    let cycles = &boundary.cycles;
    // (1/N) Σ_k G_{|J|qk|}
    let mut rhs = g.sum_k(|k| {
        let mut c = cycles.clone();
        c.push(vec![q.clone(), k.clone()]);
        g.get(&c)
    })?;
    for (j, cyc) in cycles.iter().enumerate() {
        for ins in insertions(cyc, &q) {
            let mut c = cycles.clone();
            c[j] = ins;
            rhs = rhs.add(&g.get(&c)?);
        }
    }
    // ordered decompositions J = J₁ ⊎ J₂ preserving cycles; empty parts give G_{|q|} = 0
    let b = cycles.len();
    let mut splitting = LambdaSeries::zero(order);
    for mask in 1..(1usize << b).saturating_sub(1) {
        let mut c1: Vec<Vec<Rational>> = (0..b).filter(|i| mask >> i & 1 == 1).map(|i| cycles[i].clone()).collect();
        let mut c2: Vec<Vec<Rational>> = (0..b).filter(|i| mask >> i & 1 == 0).map(|i| cycles[i].clone()).collect();
        c1.push(vec![q.clone()]);
        c2.push(vec![q.clone()]);
        splitting = splitting.add(&g.get(&c1)?.mul(&g.get(&c2)?));
    }
    rhs = rhs.add(&splitting);
    let residuals = lhs.sub(&rhs).into_coeffs();
    Ok(PropTReport { lhs, rhs, splitting, residuals })
}
