use exact_core::{Complex64, MultiDual, Scalar};

/// Complex scalars the curve can be evaluated on: plain values or Taylor jets of them.
pub trait CurveScalar: Scalar {
    fn lift(c: Complex64) -> Self;
    fn base(&self) -> Complex64;
}

impl CurveScalar for Complex64 {
    fn lift(c: Complex64) -> Self {
        c
    }
    fn base(&self) -> Complex64 {
        *self
    }
}

impl CurveScalar for MultiDual<Complex64> {
    fn lift(c: Complex64) -> Self {
        MultiDual::constant(c)
    }
    fn base(&self) -> Complex64 {
        *self.value()
    }
}
