use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds from row vectors; `cols` is needed for the zero-row case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Replaces rows `(a, b)` by `(p·a + q·b, r·a + s·b)`.
    fn combine_rows(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for j in 0..self.cols {
            let x = &self.data[a * self.cols + j];
            let y = &self.data[b * self.cols + j];
            let na = p * x + q * y;
            let nb = r * x + s * y;
            self.data[a * self.cols + j] = na;
            self.data[b * self.cols + j] = nb;
        }
    }

    /// Subtracts `f` times row `src` from row `dst`.
    fn sub_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = f * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] -= v;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -&self.data[a * self.cols + j];
            self.data[a * self.cols + j] = v;
        }
    }
}

/// Row-style Hermite normal form. Returns `(H, U)` with `U` unimodular and
/// `U · A = H`; nonzero rows of `H` come first, pivots are positive and the
/// entries above each pivot are reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        // Fold every lower row into row r with extended gcd steps.
        for i in r + 1..h.rows {
            if h.get(i, c).is_zero() {
                continue;
            }
            if h.get(r, c).is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let x = h.get(r, c).clone();
            let y = h.get(i, c).clone();
            let e = x.extended_gcd(&y);
            let (g, p, q) = (e.gcd, e.x, e.y);
            // [p q; -y/g x/g] has determinant 1.
            let rr = -(&y / &g);
            let ss = &x / &g;
            h.combine_rows(r, i, &p, &q, &rr, &ss);
            u.combine_rows(r, i, &p, &q, &rr, &ss);
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let piv = h.get(r, c).clone();
        for i in 0..r {
            let f = h.get(i, c).div_floor(&piv);
            if !f.is_zero() {
                h.sub_row(i, r, &f);
                u.sub_row(i, r, &f);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Saturated basis (as rows, in Hermite normal form) of the integer
/// solutions `k` of `M · k = 0`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let at = m.transpose();
    let (h, u) = hermite_normal_form(&at);
    let kernel_rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    let basis = IntMatrix::from_rows(m.cols, kernel_rows);
    canonical_rows(&basis)
}

/// Hermite normal form of a row lattice basis with zero rows removed.
pub(crate) fn canonical_rows(basis: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(basis);
    let rows = h
        .row_vectors()
        .into_iter()
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    IntMatrix::from_rows(basis.cols, rows)
}
