use crate::FdError;

/// Square band matrix, row-major: row `i` holds columns `i − kl ..= i + ku`.
#[derive(Debug, Clone, PartialEq)]
pub struct Banded {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl Banded {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let kl = kl.min(n.saturating_sub(1));
        let ku = ku.min(n.saturating_sub(1));
        Banded {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Banded::zeros(n, 0, 0);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Banded::zeros(d.len(), 0, 0);
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kl(&self) -> usize {
        self.kl
    }

    pub fn ku(&self) -> usize {
        self.ku
    }

    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    /// Column range stored for row `i`.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= self.n || j >= self.n || !self.in_band(i, j) {
            return 0.0;
        }
        self.data[i * self.width() + j + self.kl - i]
    }

    /// Panics when `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band ({}, {})", self.kl, self.ku);
        let w = self.width();
        self.data[i * w + j + self.kl - i] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn transpose_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in self.row_range(i) {
                y[j] += self.get(i, j) * x[i];
            }
        }
        y
    }

    pub fn matmul(&self, other: &Banded) -> Banded {
        assert_eq!(self.n, other.n);
        let mut c = Banded::zeros(self.n, self.kl + other.kl, self.ku + other.ku);
        for i in 0..self.n {
            for k in self.row_range(i) {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in other.row_range(k) {
                    let v = c.get(i, j) + a * other.get(k, j);
                    c.set(i, j, v);
                }
            }
        }
        c.trim()
    }

    /// `αA + βB`.
    pub fn combine(&self, alpha: f64, other: &Banded, beta: f64) -> Banded {
        assert_eq!(self.n, other.n);
        let mut c = Banded::zeros(self.n, self.kl.max(other.kl), self.ku.max(other.ku));
        for i in 0..self.n {
            for j in c.row_range(i) {
                c.set(i, j, alpha * self.get(i, j) + beta * other.get(i, j));
            }
        }
        c.trim()
    }

    /// Left-multiplies by a diagonal matrix.
    pub fn scale_rows(&self, d: &[f64]) -> Banded {
        let mut c = self.clone();
        let w = self.width();
        for (i, row) in c.data.chunks_mut(w).enumerate() {
            for v in row {
                *v *= d[i];
            }
        }
        c
    }

    /// Shrinks `kl`, `ku` to the outermost nonzero diagonals.
    pub fn trim(self) -> Banded {
        let (mut kl, mut ku) = (0, 0);
        for i in 0..self.n {
            for j in self.row_range(i) {
                if self.get(i, j) != 0.0 {
                    kl = kl.max(i.saturating_sub(j));
                    ku = ku.max(j.saturating_sub(i));
                }
            }
        }
        if kl == self.kl && ku == self.ku {
            return self;
        }
        let mut c = Banded::zeros(self.n, kl, ku);
        for i in 0..self.n {
            for j in c.row_range(i) {
                c.set(i, j, self.get(i, j));
            }
        }
        c
    }

    pub fn factor(&self) -> Result<BandedLu, FdError> {
        BandedLu::new(self)
    }
}

/// LU factors with partial pivoting. Row `i` of the working array is
/// anchored at column `i − kl` with width `2kl + ku + 1`, which keeps room
/// for the fill-in produced by row exchanges.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    wu: usize,
    rows: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLu {
    fn new(a: &Banded) -> Result<Self, FdError> {
        let n = a.n;
        let kl = a.kl;
        let wu = kl + a.ku;
        let w = kl + wu + 1;
        let mut rows = vec![0.0; n * w];
        for i in 0..n {
            for j in a.row_range(i) {
                rows[i * w + j + kl - i] = a.get(i, j);
            }
        }
        let at = |i: usize, j: usize| i * w + j + kl - i;
        let mut piv = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            for i in k + 1..=last {
                if rows[at(i, k)].abs() > rows[at(p, k)].abs() {
                    p = i;
                }
            }
            piv[k] = p;
            let pv = rows[at(p, k)];
            if pv == 0.0 || !pv.is_finite() {
                return Err(FdError::Singular(k));
            }
            let jend = (k + wu).min(n - 1);
            if p != k {
                for j in k..=jend {
                    rows.swap(at(k, j), at(p, j));
                }
            }
            for i in k + 1..=last {
                let l = rows[at(i, k)] / pv;
                rows[at(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..=jend {
                        rows[at(i, j)] -= l * rows[at(k, j)];
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            wu,
            rows,
            piv,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, kl, wu) = (self.n, self.kl, self.wu);
        let w = kl + wu + 1;
        let at = |i: usize, j: usize| i * w + j + kl - i;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            if xk != 0.0 {
                for i in k + 1..=(k + kl).min(n - 1) {
                    x[i] -= self.rows[at(i, k)] * xk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + wu).min(n - 1) {
                s -= self.rows[at(k, j)] * x[j];
            }
            x[k] = s / self.rows[at(k, k)];
        }
        x
    }
}
