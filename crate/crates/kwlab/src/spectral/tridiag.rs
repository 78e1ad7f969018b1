//! Symmetric tridiagonal pencils K − σM with M diagonal and positive.

use crate::error::{Error, Result};

/// K given by its diagonal `d` and off-diagonal `e` (len n − 1); M by `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub m: Vec<f64>,
}

impl Pencil {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Number of generalized eigenvalues below σ (Sylvester inertia of K − σM).
    pub fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut piv = 1.0;
        for i in 0..self.len() {
            let off = if i == 0 { 0.0 } else { self.e[i - 1] * self.e[i - 1] / piv };
            piv = self.d[i] - sigma * self.m[i] - off;
            if piv == 0.0 {
                piv = -f64::EPSILON * (self.d[i].abs() + sigma.abs() * self.m[i]);
            }
            if piv < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Upper bound on the spectrum from Gershgorin discs of M⁻¹K.
    fn upper(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let l = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
                let r = if i + 1 < self.len() { self.e[i].abs() } else { 0.0 };
                (self.d[i] + l + r) / self.m[i]
            })
            .fold(0.0, f64::max)
    }

    /// The k-th smallest eigenvalue (k from 0) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = (self.lower(), self.upper());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * hi.abs().max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    fn lower(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let l = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
                let r = if i + 1 < self.len() { self.e[i].abs() } else { 0.0 };
                (self.d[i] - l - r) / self.m[i]
            })
            .fold(0.0, f64::min)
    }

    /// Eigenvector for the eigenvalue nearest `mu` by inverse iteration,
    /// normalized so that Σ m_i v_i² = 1 and the first entry of largest
    /// magnitude sign is positive.
    pub fn eigenvector(&self, mu: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let shift = mu - 1e-10 * mu.abs().max(1.0);
        let mut v = vec![1.0; n];
        for _ in 0..8 {
            let rhs: Vec<f64> = v.iter().zip(&self.m).map(|(a, b)| a * b).collect();
            v = self.solve_shifted(shift, &rhs)?;
            let nrm = v.iter().zip(&self.m).map(|(a, b)| a * a * b).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= nrm);
        }
        let big = v.iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(v)
    }

    /// Solves (K − σM)x = rhs with the Thomas algorithm.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut piv = self.d[0] - sigma * self.m[0];
        if piv == 0.0 {
            return Err(Error::NotConverged("singular shift".into()));
        }
        c[0] = if n > 1 { self.e[0] / piv } else { 0.0 };
        y[0] = rhs[0] / piv;
        for i in 1..n {
            piv = self.d[i] - sigma * self.m[i] - self.e[i - 1] * c[i - 1];
            if piv == 0.0 {
                return Err(Error::NotConverged("singular shift".into()));
            }
            c[i] = if i + 1 < n { self.e[i] / piv } else { 0.0 };
            y[i] = (rhs[i] - self.e[i - 1] * y[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        Ok(y)
    }

    /// All eigenvalues of M^{-1/2} K M^{-1/2} by a dense solver; for cross-checks.
    pub fn dense_spectrum(&self) -> Vec<f64> {
        let n = self.len();
        let s: Vec<f64> = self.m.iter().map(|x| 1.0 / x.sqrt()).collect();
        let a = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            let k = if i == j {
                self.d[i]
            } else if i + 1 == j {
                self.e[i]
            } else if j + 1 == i {
                self.e[j]
            } else {
                0.0
            };
            k * s[i] * s[j]
        });
        let mut ev: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_matches_dense() {
        let n = 40;
        let p = Pencil {
            d: (0..n).map(|i| 2.0 + 0.1 * i as f64).collect(),
            e: vec![-1.0; n - 1],
            m: (0..n).map(|i| 1.0 + 0.01 * i as f64).collect(),
        };
        let dense = p.dense_spectrum();
        for k in [0, 1, 5, n - 1] {
            assert!((p.eigenvalue(k) - dense[k]).abs() < 1e-10, "k={k}");
        }
    }
}
