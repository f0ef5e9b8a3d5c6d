use crate::{from_int, ExactError, Scalar};

/// Power series in the coupling `λ`, truncated after `λ^order`.
///
/// `coeffs[v]` is the coefficient of `λ^v`; the length is always `order + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeries<T> {
    coeffs: Vec<T>,
}

/// Binary operation selector for [`series_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Derivative of the first operand; the second is ignored.
    Derivative,
}

/// Dispatches a series operation. The result order is the minimum of the input orders
/// (one less for a derivative).
pub fn series_arith<T: Scalar>(
    a: &LambdaSeries<T>,
    b: &LambdaSeries<T>,
    op: SeriesOp,
) -> Result<LambdaSeries<T>, ExactError> {
    Ok(match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Sub => a.sub(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Div => a.div(b)?,
        SeriesOp::Derivative => a.derivative(),
    })
}

impl<T: Scalar> LambdaSeries<T> {
    /// Series from explicit coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        LambdaSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        LambdaSeries { coeffs: vec![T::zero(); order + 1] }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `λ` itself.
    pub fn lambda(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        LambdaSeries { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `λ^v`; zero beyond the truncation order is not reported.
    pub fn coeff(&self, v: usize) -> Option<&T> {
        self.coeffs.get(v)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let k = order.min(self.order());
        LambdaSeries { coeffs: self.coeffs[..=k].to_vec() }
    }

    pub fn add(&self, b: &Self) -> Self {
        let k = self.order().min(b.order());
        Self::from_fn(k, |v| self.coeffs[v].clone() + b.coeffs[v].clone())
    }

    pub fn sub(&self, b: &Self) -> Self {
        let k = self.order().min(b.order());
        Self::from_fn(k, |v| self.coeffs[v].clone() - b.coeffs[v].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.order(), |v| -self.coeffs[v].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(self.order(), |v| self.coeffs[v].clone() * c.clone())
    }

    pub fn mul(&self, b: &Self) -> Self {
        let k = self.order().min(b.order());
        Self::from_fn(k, |v| {
            let mut acc = T::zero();
            for i in 0..=v {
                if self.coeffs[i].is_zero() || b.coeffs[v - i].is_zero() {
                    continue;
                }
                acc = acc + self.coeffs[i].clone() * b.coeffs[v - i].clone();
            }
            acc
        })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Self, ExactError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(ExactError::SeriesNotInvertible);
        }
        let inv0 = T::one() / c0.clone();
        let mut out: Vec<T> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for v in 1..=self.order() {
            let mut acc = T::zero();
            for i in 1..=v {
                acc = acc + self.coeffs[i].clone() * out[v - i].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(LambdaSeries { coeffs: out })
    }

    pub fn div(&self, b: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&b.recip()?))
    }

    /// Term-wise derivative in `λ`; the order drops by one (order 0 stays order 0 with value 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |v| from_int::<T>(v as i64 + 1) * self.coeffs[v + 1].clone())
    }

    /// Division by `λ`; requires a zero constant term and lowers the order by one.
    pub fn div_lambda(&self) -> Result<Self, ExactError> {
        if !self.coeffs[0].is_zero() {
            return Err(ExactError::NonzeroConstant(format!("{:?}", self.coeffs[0])));
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(Self::from_fn(self.order() - 1, |v| self.coeffs[v + 1].clone()))
    }

    /// Multiplication by `λ` keeping the order.
    pub fn mul_lambda(&self) -> Self {
        Self::from_fn(self.order(), |v| if v == 0 { T::zero() } else { self.coeffs[v - 1].clone() })
    }

    /// Substitutes `λ → c·λ`.
    pub fn rescale_lambda(&self, c: &T) -> Self {
        let mut p = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * p.clone());
            p = p * c.clone();
        }
        LambdaSeries { coeffs: out }
    }

    /// Square root given a square root `root0` of the constant term (which must be nonzero).
    pub fn sqrt_with_root(&self, root0: T) -> Result<Self, ExactError> {
        if root0.is_zero() {
            return Err(ExactError::SeriesNotInvertible);
        }
        let two = from_int::<T>(2);
        let mut out = vec![root0.clone()];
        for v in 1..=self.order() {
            // s_v = (a_v − Σ_{i=1}^{v−1} s_i s_{v−i}) / (2 s_0)
            let mut acc = self.coeffs[v].clone();
            for i in 1..v {
                acc = acc - out[i].clone() * out[v - i].clone();
            }
            out.push(acc / (two.clone() * root0.clone()));
        }
        Ok(LambdaSeries { coeffs: out })
    }

    /// `log f` for a series with constant term one; the result has zero constant term.
    pub fn log_unit(&self) -> Result<Self, ExactError> {
        if self.coeffs[0] != T::one() {
            return Err(ExactError::NonzeroConstant(format!("{:?} (expected 1)", self.coeffs[0])));
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        let q = self.derivative().div(&self.truncate(self.order() - 1))?;
        Ok(Self::from_fn(self.order(), |v| {
            if v == 0 {
                T::zero()
            } else {
                q.coeffs[v - 1].clone() / from_int::<T>(v as i64)
            }
        }))
    }

    /// Integer power.
    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(T::one(), self.order());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies `f` to each coefficient.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LambdaSeries<U> {
        LambdaSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}
