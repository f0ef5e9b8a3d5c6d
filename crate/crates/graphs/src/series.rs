use crate::diagram::{count_cycles, successor};
use crate::enumerate::{fold_diagrams, DEFAULT_LEAF_BUDGET};
use crate::{BoundarySpec, GraphError, RibbonDiagram};
use exact_core::{from_int, LambdaSeries, Rational, Scalar, Spectrum};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Propagator structure of a diagram after dropping everything the weight does not see.
///
/// Strand classes `0..n` are the open lines, named by the leg whose first index they carry;
/// classes `n..n+loops` are closed loops in order of first appearance. Each ribbon is stored as
/// the sorted pair of its two strand classes, packed as `hi << 8 | lo`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightKey {
    pub loops: u8,
    pub ribbons: Vec<u16>,
}

/// Exact weight of one diagram: the coefficient of `(−λ)^v` after loop summation.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphWeight {
    pub value: Rational,
    pub v: usize,
}

pub(crate) struct LeafInfo {
    pub g: usize,
    pub pi: Vec<usize>,
    pub key: WeightKey,
}

pub(crate) fn analyze(d: &RibbonDiagram) -> LeafInfo {
    let mut uf = d.strands();
    let total = d.strand_count();
    let vh = 4 * d.v;
    let mut class = vec![u8::MAX; total];
    for j in 0..d.n {
        let c = uf.find((vh + 2 * j) as u8) as usize;
        class[c] = j as u8;
    }
    let pi: Vec<usize> =
        (0..d.n).map(|i| class[uf.find((vh + 2 * i + 1) as u8) as usize] as usize).collect();
    let mut loops = 0u8;
    let mut ribbons = Vec::with_capacity(d.ribbons());
    let mut id = |x: u8, uf: &mut crate::diagram::Strands, class: &mut Vec<u8>| -> u8 {
        let c = uf.find(x) as usize;
        if class[c] == u8::MAX {
            class[c] = d.n as u8 + loops;
            loops += 1;
        }
        class[c]
    };
    for h in 0..d.mate.len() {
        let m = d.mate[h] as usize;
        if h < m {
            let a = id(d.first(h), &mut uf, &mut class);
            let b = id(d.second(h), &mut uf, &mut class);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            ribbons.push(((hi as u16) << 8) | lo as u16);
        }
    }
    // loops that never touch a ribbon cannot occur: every strand lies on some ribbon
    ribbons.sort_unstable();
    let s = loops as i64;
    let b = count_cycles(&pi);
    let r = d.ribbons() as i64;
    let chi = d.v as i64 - r + d.n as i64 + s;
    let g = ((2 - b as i64 - chi) / 2) as usize;
    LeafInfo { g, pi, key: WeightKey { loops, ribbons } }
}

/// Evaluates one weight key with leg values and loop spectrum (values `e`, weights `w = r/N`).
pub(crate) fn eval_key<T: Scalar>(key: &WeightKey, legs: &[T], e: &[T], w: &[T]) -> Result<T, GraphError> {
    let n = legs.len();
    let l = key.loops as usize;
    let d = e.len();
    let mut assign = vec![0usize; l];
    let mut total = T::zero();
    loop {
        let mut num = T::one();
        for &k in &assign {
            num = num * w[k].clone();
        }
        let val = |c: usize| -> &T { if c < n { &legs[c] } else { &e[assign[c - n]] } };
        let mut den = T::one();
        for &rb in &key.ribbons {
            let (hi, lo) = ((rb >> 8) as usize, (rb & 0xff) as usize);
            let s = val(hi).clone() + val(lo).clone();
            if s.is_zero() {
                return Err(GraphError::DegenerateSpectrum);
            }
            den = den * s;
        }
        total = total + num / den;
        // odometer over loop assignments
        let mut i = 0;
        while i < l {
            assign[i] += 1;
            if assign[i] < d {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i == l {
            break;
        }
    }
    Ok(total)
}

/// Weight keys with multiplicities for one boundary shape and genus, per vertex order.
#[derive(Debug, Clone)]
pub struct DiagramTable {
    pub shape: Vec<usize>,
    pub genus: usize,
    /// `per_order[v]` lists `(key, number of canonical diagrams)` sorted by key.
    pub per_order: Vec<Vec<(WeightKey, u64)>>,
}

type CacheKey = (Vec<usize>, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<DiagramTable>>> {
    static C: OnceLock<Mutex<HashMap<CacheKey, Arc<DiagramTable>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

impl DiagramTable {
    /// Enumerates all orders `0..=max_order`.
    pub fn build(shape: &[usize], genus: usize, max_order: usize, budget: u64) -> Result<Self, GraphError> {
        let n: usize = shape.iter().sum();
        let target = successor(shape);
        let mut per_order = Vec::with_capacity(max_order + 1);
        for v in 0..=max_order {
            let map = fold_diagrams(
                v,
                n,
                budget,
                HashMap::<WeightKey, u64>::new,
                |acc, d| {
                    let info = analyze(d);
                    if info.g == genus && info.pi == target {
                        *acc.entry(info.key).or_insert(0) += 1;
                    }
                },
                |mut a, b| {
                    for (k, c) in b {
                        *a.entry(k).or_insert(0) += c;
                    }
                    a
                },
            )?;
            let mut rows: Vec<_> = map.into_iter().collect();
            rows.sort();
            per_order.push(rows);
        }
        Ok(DiagramTable { shape: shape.to_vec(), genus, per_order })
    }

    /// Shared, memoized table (default budget).
    pub fn cached(shape: &[usize], genus: usize, max_order: usize) -> Result<Arc<Self>, GraphError> {
        let key = (shape.to_vec(), genus);
        if let Some(t) = cache().lock().unwrap().get(&key) {
            if t.max_order() >= max_order {
                return Ok(t.clone());
            }
        }
        let t = Arc::new(Self::build(shape, genus, max_order, DEFAULT_LEAF_BUDGET)?);
        cache().lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    pub fn max_order(&self) -> usize {
        self.per_order.len() - 1
    }

    fn is_vacuum(&self) -> bool {
        self.shape.is_empty()
    }

    /// Number of labelled diagrams at order `v` (rooted diagrams for the vacuum).
    pub fn diagram_count(&self, v: usize) -> u64 {
        self.per_order[v].iter().map(|(_, c)| c).sum()
    }

    /// λ-series (in powers of `λ`, signs included) for the given leg values and loop spectrum,
    /// truncated at `order`. The vacuum table divides by the root multiplicity `4v`.
    pub fn series<T: Scalar>(&self, order: usize, legs: &[T], e: &[T], w: &[T]) -> Result<LambdaSeries<T>, GraphError> {
        let n: usize = self.shape.iter().sum();
        if legs.len() != n {
            return Err(GraphError::BadBoundary(format!("expected {n} leg values, got {}", legs.len())));
        }
        if order > self.max_order() {
            return Err(GraphError::BadBoundary(format!("table only reaches order {}", self.max_order())));
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        for v in 0..=order {
            let mut acc = T::zero();
            for (key, count) in &self.per_order[v] {
                acc = acc + from_int::<T>(*count as i64) * eval_key(key, legs, e, w)?;
            }
            if self.is_vacuum() && v > 0 {
                acc = acc / from_int::<T>(4 * v as i64);
            }
            if v % 2 == 1 {
                acc = -acc;
            }
            coeffs.push(acc);
        }
        Ok(LambdaSeries::new(coeffs))
    }
}

/// Loop-sum data `(e_k, r_k/N)` of a spectrum.
pub(crate) fn loop_data(spectrum: &Spectrum) -> (Vec<Rational>, Vec<Rational>) {
    (spectrum.e.clone(), spectrum.r.iter().map(|r| r / &spectrum.n).collect())
}

/// Exact weight of one diagram (coefficient of `(−λ)^v`).
pub fn weight(d: &RibbonDiagram, legs: &[Rational], spectrum: &Spectrum) -> Result<GraphWeight, GraphError> {
    if legs.len() != d.n {
        return Err(GraphError::BadBoundary("one value per leg required".into()));
    }
    crate::classify(d)?;
    let info = analyze(d);
    let (e, w) = loop_data(spectrum);
    Ok(GraphWeight { value: eval_key(&info.key, legs, &e, &w)?, v: d.v })
}

/// Exact λ-series of the genus-`genus` correlator with the given boundary.
pub fn correlator_series(
    boundary: &BoundarySpec,
    genus: usize,
    order: usize,
    spectrum: &Spectrum,
) -> Result<LambdaSeries<Rational>, GraphError> {
    if boundary.n() % 2 == 1 {
        return Ok(LambdaSeries::zero(order));
    }
    let table = DiagramTable::cached(&boundary.shape(), genus, order)?;
    let (e, w) = loop_data(spectrum);
    table.series(order, &boundary.leg_values(), &e, &w)
}

/// Exact λ-series of the genus-`genus` free energy without its λ⁰ logarithm, which is not rational.
pub fn free_energy_series(genus: usize, order: usize, spectrum: &Spectrum) -> Result<LambdaSeries<Rational>, GraphError> {
    let table = DiagramTable::cached(&[], genus, order)?;
    let (e, w) = loop_data(spectrum);
    table.series(order, &[], &e, &w)
}
