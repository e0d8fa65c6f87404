//! Dense LU with partial pivoting. Circuits here stay well under a hundred
//! unknowns, where a dense factorization beats sparse bookkeeping.

#[derive(Debug, Clone)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn clear(&mut self) {
        self.data.fill(0.0);
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.n + col] += value;
    }

    /// `out = self * x`.
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (row, o) in self.data.chunks_exact(self.n).zip(out.iter_mut()) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    pub fn copy_from(&mut self, other: &DenseMatrix) {
        self.n = other.n;
        self.data.clone_from(&other.data);
    }

    /// Factorizes in place and solves `A x = b`, overwriting `b` with `x`.
    /// On a zero pivot returns the offending column.
    pub fn solve_in_place(&mut self, b: &mut [f64], perm: &mut Vec<usize>) -> Result<(), usize> {
        let n = self.n;
        perm.clear();
        perm.extend(0..n);
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = scale * 1e-20;
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_abs = self.data[k * n + k].abs();
            for r in (k + 1)..n {
                let v = self.data[r * n + k].abs();
                if v > pivot_abs {
                    pivot_abs = v;
                    pivot_row = r;
                }
            }
            if !(pivot_abs > tiny) {
                return Err(k);
            }
            if pivot_row != k {
                for c in 0..n {
                    self.data.swap(k * n + c, pivot_row * n + c);
                }
                b.swap(k, pivot_row);
                perm.swap(k, pivot_row);
            }
            let pivot = self.data[k * n + k];
            for r in (k + 1)..n {
                let factor = self.data[r * n + k] / pivot;
                if factor == 0.0 {
                    continue;
                }
                self.data[r * n + k] = factor;
                let (upper, lower) = self.data.split_at_mut(r * n);
                let pivot_row = &upper[k * n..k * n + n];
                let row = &mut lower[..n];
                for c in (k + 1)..n {
                    row[c] -= factor * pivot_row[c];
                }
                b[r] -= factor * b[k];
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for c in (k + 1)..n {
                acc -= self.data[k * n + c] * b[c];
            }
            b[k] = acc / self.data[k * n + k];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let mut a = DenseMatrix::zeros(3);
        let rows = [[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                a.add(r, c, *v);
            }
        }
        let original = a.clone();
        let x_true = [1.0, -2.0, 0.5];
        let mut b = vec![0.0; 3];
        original.mul_vec(&x_true, &mut b);
        let mut perm = Vec::new();
        a.solve_in_place(&mut b, &mut perm).unwrap();
        for (x, t) in b.iter().zip(x_true) {
            assert!((x - t).abs() < 1e-12);
        }
    }

    #[test]
    fn reports_singular_column() {
        let mut a = DenseMatrix::zeros(2);
        a.add(0, 0, 1.0);
        a.add(1, 0, 1.0);
        let mut b = vec![1.0, 1.0];
        assert_eq!(a.solve_in_place(&mut b, &mut Vec::new()), Err(1));
    }
}
