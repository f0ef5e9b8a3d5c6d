use exact_core::Complex64;

/// Solves `a x = b` by Gaussian elimination with partial pivoting; `None` if singular.
pub(crate) fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() == 0.0 || !a[piv][col].norm().is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

/// Polynomial with coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    /// `z + a`.
    pub fn linear(a: Complex64) -> Self {
        Poly(vec![a, Complex64::new(1.0, 0.0)])
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut c = vec![Complex64::new(0.0, 0.0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly(c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly((0..n).map(|i| *self.0.get(i).unwrap_or(&zero) + *o.0.get(i).unwrap_or(&zero)).collect())
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    /// Value and first derivative by Horner.
    pub fn eval2(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.0.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    fn trimmed(&self) -> Poly {
        let scale = self.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut c = self.0.clone();
        while c.len() > 1 && c.last().unwrap().norm() <= 1e-300 * scale.max(1e-300) {
            c.pop();
        }
        Poly(c)
    }

    /// All roots by Aberth–Ehrlich iteration. Returns the roots and the largest relative residual.
    pub fn roots(&self) -> (Vec<Complex64>, f64) {
        let p = self.trimmed();
        let n = p.degree();
        if n == 0 {
            return (Vec::new(), 0.0);
        }
        let lead = p.0[n];
        // Cauchy bound for the initial circle
        let bound = 1.0 + p.0[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(bound * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
            .collect();
        for _ in 0..2000 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let (v, dv) = p.eval2(z[i]);
                if v.norm() == 0.0 {
                    continue;
                }
                let ratio = v / dv;
                let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
                let w = ratio / (1.0 - ratio * s);
                if w.re.is_finite() && w.im.is_finite() {
                    z[i] -= w;
                    moved = moved.max(w.norm() / (1.0 + z[i].norm()));
                }
            }
            if moved < 1e-16 {
                break;
            }
        }
        let res = z.iter().map(|&x| p.relative_residual(x)).fold(0.0, f64::max);
        (z, res)
    }

    /// `|p(z)| / Σ|c_k||z|^k`, the backward error of a root.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let (v, _) = self.eval2(z);
        let mut s = 0.0;
        let mut zk = 1.0;
        for c in &self.0 {
            s += c.norm() * zk;
            zk *= z.norm();
        }
        if s == 0.0 {
            0.0
        } else {
            v.norm() / s
        }
    }

    pub fn is_real(&self) -> bool {
        let scale = self.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.0.iter().all(|c| c.im.abs() <= 1e-14 * scale)
    }
}
