//! Banded LU factorisation with partial pivoting.

/// Square matrix with `kl` sub- and `ku` super-diagonals, stored row by row
/// with room for the `kl` extra super-diagonals that pivoting can create.
#[derive(Debug, Clone)]
pub(crate) struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.kl + self.ku {
            0.0
        } else {
            self.data[self.slot(i, j)]
        }
    }

    /// Adds `v` at `(i, j)`; `(i, j)` must lie inside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    #[cfg(test)]
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.kl + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// In-place factorisation `PA = LU`. Fails with the column index of the
    /// first zero pivot.
    pub fn factor(mut self) -> Result<BandLu, usize> {
        let n = self.n;
        let reach = self.kl + self.ku;
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(k);
            }
            piv[k] = p;
            let last_col = (k + reach).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, b);
                }
            }
            let d = self.get(k, k);
            for i in k + 1..=last_row {
                let s = self.slot(i, k);
                let m = self.data[s] / d;
                self.data[s] = m;
                if m != 0.0 {
                    for j in k + 1..=last_col {
                        let src = self.get(k, j);
                        let t = self.slot(i, j);
                        self.data[t] -= m * src;
                    }
                }
            }
        }
        Ok(BandLu { m: self, piv })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let m = &self.m;
        let n = m.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
            let last_row = (k + m.kl).min(n - 1);
            let bk = b[k];
            for i in k + 1..=last_row {
                b[i] -= m.get(i, k) * bk;
            }
        }
        let reach = m.kl + m.ku;
        for k in (0..n).rev() {
            let last_col = (k + reach).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=last_col {
                s -= m.get(k, j) * b[j];
            }
            b[k] = s / m.get(k, k);
        }
    }
}
