use crate::{from_int, ExactError, Scalar};
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element of the truncated Taylor algebra `T[δ₁,…,δ_k]/(δ₁²,…,δ_k²)` with `k ≤ 3`.
///
/// Component `c[m]` multiplies `Π_{i∈m} δ_i` for the bitmask `m`, so `c[0b111]` of
/// `f(u+δ₁, v+δ₂, z+δ₃)` is the mixed partial `∂³f/∂u∂v∂z`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiDual<T> {
    dirs: usize,
    c: Vec<T>,
}

pub const MAX_DIRECTIONS: usize = 3;

impl<T: Scalar> MultiDual<T> {
    /// A constant with no infinitesimal part.
    pub fn constant(x: T) -> Self {
        MultiDual { dirs: 0, c: vec![x] }
    }

    /// `x + δ_dir` inside an algebra with `dirs` directions.
    pub fn variable(x: T, dir: usize, dirs: usize) -> Result<Self, ExactError> {
        if dir >= dirs || dirs > MAX_DIRECTIONS {
            return Err(ExactError::DirectionOutOfRange { index: dir, dirs });
        }
        let mut c = vec![T::zero(); 1 << dirs];
        c[0] = x;
        c[1 << dir] = T::one();
        Ok(MultiDual { dirs, c })
    }

    /// Builds from raw components; `components.len()` must be `2^dirs`.
    pub fn from_components(components: Vec<T>) -> Self {
        let dirs = components.len().trailing_zeros() as usize;
        assert!(components.len() == 1 << dirs && dirs <= MAX_DIRECTIONS);
        MultiDual { dirs, c: components }
    }

    pub fn dirs(&self) -> usize {
        self.dirs
    }

    pub fn value(&self) -> &T {
        &self.c[0]
    }

    /// Component for the bitmask of directions (zero if the mask uses absent directions).
    pub fn part(&self, mask: usize) -> T {
        self.c.get(mask).cloned().unwrap_or_else(T::zero)
    }

    /// Mixed partial over the listed directions.
    pub fn partial(&self, directions: &[usize]) -> T {
        let mask = directions.iter().fold(0usize, |m, d| m | (1 << d));
        self.part(mask)
    }

    pub fn components(&self) -> &[T] {
        &self.c
    }

    fn widened(&self, dirs: usize) -> Vec<T> {
        if self.dirs == dirs {
            return self.c.clone();
        }
        let mut c = vec![T::zero(); 1 << dirs];
        for (m, v) in self.c.iter().enumerate() {
            c[m] = v.clone();
        }
        c
    }

    fn zip(&self, o: &Self, f: impl Fn(T, T) -> T) -> Self {
        let dirs = self.dirs.max(o.dirs);
        let a = self.widened(dirs);
        let b = o.widened(dirs);
        MultiDual { dirs, c: a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect() }
    }

    fn product(&self, o: &Self) -> Self {
        let dirs = self.dirs.max(o.dirs);
        let a = self.widened(dirs);
        let b = o.widened(dirs);
        let len = 1usize << dirs;
        let mut c = vec![T::zero(); len];
        for (m, slot) in c.iter_mut().enumerate() {
            // iterate over submasks s of m
            let mut s = m;
            loop {
                let x = &a[s];
                let y = &b[m ^ s];
                if !x.is_zero() && !y.is_zero() {
                    *slot = slot.clone() + x.clone() * y.clone();
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
        }
        MultiDual { dirs, c }
    }

    /// Evaluates `Σ_k taylor[k]·(x − x₀)^k` where `taylor[k] = f^{(k)}(x₀)/k!` and `x₀` is the base part.
    /// Orders above the direction count vanish by nilpotency.
    pub fn apply_taylor(&self, taylor: &[T]) -> Self {
        let mut delta = self.clone();
        delta.c[0] = T::zero();
        let mut result = MultiDual { dirs: self.dirs, c: vec![T::zero(); 1 << self.dirs] };
        let mut power = MultiDual { dirs: self.dirs, c: {
            let mut c = vec![T::zero(); 1 << self.dirs];
            c[0] = T::one();
            c
        } };
        for (k, t) in taylor.iter().enumerate() {
            if k > self.dirs {
                break;
            }
            if !t.is_zero() {
                result = result + power.scale(t);
            }
            power = power.product(&delta);
        }
        result
    }

    pub fn scale(&self, s: &T) -> Self {
        MultiDual { dirs: self.dirs, c: self.c.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    /// Reciprocal; fails when the base part is zero.
    pub fn try_recip(&self) -> Result<Self, ExactError> {
        let b = self.c[0].clone();
        if b.is_zero() {
            return Err(ExactError::DerivativeSingularity);
        }
        let inv = T::one() / b;
        let mut taylor = Vec::with_capacity(self.dirs + 1);
        let mut p = inv.clone();
        for k in 0..=self.dirs {
            taylor.push(if k % 2 == 0 { p.clone() } else { -p.clone() });
            p = p * inv.clone();
        }
        Ok(self.apply_taylor(&taylor))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(self.product(&o.try_recip()?))
    }

    /// `log(x) − log(x₀)`: the infinitesimal part of the logarithm, which stays in the field.
    pub fn ln_increment(&self) -> Result<Self, ExactError> {
        let b = self.c[0].clone();
        if b.is_zero() {
            return Err(ExactError::DerivativeSingularity);
        }
        let inv = T::one() / b;
        let mut taylor = vec![T::zero()];
        let mut p = inv.clone();
        for k in 1..=self.dirs {
            let t = p.clone() / from_int::<T>(k as i64);
            taylor.push(if k % 2 == 1 { t } else { -t });
            p = p * inv.clone();
        }
        Ok(self.apply_taylor(&taylor))
    }

    /// Integer power (negative powers need an invertible base).
    pub fn powi(&self, n: i32) -> Result<Self, ExactError> {
        let base = if n < 0 { self.try_recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.product(&base);
        }
        Ok(acc)
    }
}

/// Evaluates `f` at `point`, seeding `point[i]` with direction `seeds[i]` (or none).
///
/// Returns the value together with every requested mixed partial.
pub fn multidual_eval<T: Scalar, E: From<ExactError>>(
    f: impl Fn(&[MultiDual<T>]) -> Result<MultiDual<T>, E>,
    point: &[T],
    seeds: &[Option<usize>],
) -> Result<MultiDual<T>, E> {
    let dirs = seeds.iter().flatten().map(|d| d + 1).max().unwrap_or(0);
    let args = point
        .iter()
        .zip(seeds.iter().chain(std::iter::repeat(&None)))
        .map(|(x, s)| match s {
            Some(d) => MultiDual::variable(x.clone(), *d, dirs),
            None => Ok(MultiDual::constant(x.clone())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    f(&args)
}

impl<T: Scalar> Add for MultiDual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.zip(&o, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for MultiDual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.zip(&o, |a, b| a - b)
    }
}

impl<T: Scalar> Mul for MultiDual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.product(&o)
    }
}

/// Panics on a zero base part; use [`MultiDual::checked_div`] to get an error instead.
impl<T: Scalar> Div for MultiDual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self.checked_div(&o).expect("derivative singularity")
    }
}

impl<T: Scalar> Neg for MultiDual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        MultiDual { dirs: self.dirs, c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl<T: Scalar> Zero for MultiDual<T> {
    fn zero() -> Self {
        Self::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
}

impl<T: Scalar> One for MultiDual<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}
