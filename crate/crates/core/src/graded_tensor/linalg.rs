use super::matrix::OpMatrix;
use super::scalar::ExactScalar;

/// Dense exact matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseExact {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<ExactScalar>,
}

impl DenseExact {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseExact { rows, cols, data: vec![ExactScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseExact { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_op(op: &OpMatrix<ExactScalar>) -> Self {
        let n = op.dim();
        let mut m = Self::zeros(n, n);
        for (r, c, v) in op.entries() {
            m.set(r, c, v.clone());
        }
        m
    }

    pub fn to_op(&self, d: usize, slots: usize) -> OpMatrix<ExactScalar> {
        assert_eq!(self.rows, self.cols);
        let entries = (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .filter(|&(r, c)| !self.get(r, c).is_zero())
            .map(|(r, c)| (r, c, self.get(r, c).clone()));
        OpMatrix::from_triplets(d, slots, entries.collect::<Vec<_>>())
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, o: &DenseExact) -> DenseExact {
        assert_eq!(self.cols, o.rows);
        let mut out = DenseExact::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(ExactScalar::is_zero)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self.get(row, col).inv().unwrap();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let f = self.get(r, col).clone();
                for c in col..self.cols {
                    if self.get(row, c).is_zero() {
                        continue;
                    }
                    let v = self.get(r, c) - &(&f * self.get(row, c));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

pub fn rank(m: &DenseExact) -> usize {
    m.clone().rref().len()
}

pub fn det(m: &DenseExact) -> ExactScalar {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut det = ExactScalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
            return ExactScalar::zero();
        };
        if p != col {
            for c in 0..n {
                a.data.swap(p * n + c, col * n + c);
            }
            det = -det;
        }
        let piv = a.get(col, col).clone();
        det = &det * &piv;
        let inv = piv.inv().unwrap();
        for r in col + 1..n {
            if a.get(r, col).is_zero() {
                continue;
            }
            let f = a.get(r, col) * &inv;
            for c in col..n {
                let v = a.get(r, c) - &(&f * a.get(col, c));
                a.set(r, c, v);
            }
        }
    }
    det
}

pub fn inverse(m: &DenseExact) -> Option<DenseExact> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = DenseExact::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, n + r, ExactScalar::one());
    }
    let piv = aug.rref();
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    let mut out = DenseExact::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, aug.get(r, n + c).clone());
        }
    }
    Some(out)
}

/// Basis of the right null space.
pub fn nullspace(m: &DenseExact) -> Vec<Vec<ExactScalar>> {
    let mut a = m.clone();
    let piv = a.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ExactScalar::zero(); m.cols];
            v[f] = ExactScalar::one();
            for (row, &p) in piv.iter().enumerate() {
                v[p] = -a.get(row, f);
            }
            v
        })
        .collect()
}

/// Solution set `x = particular + span(kernel)` of `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<ExactScalar>,
    pub kernel: Vec<Vec<ExactScalar>>,
}

pub fn solve_affine(a: &DenseExact, b: &[ExactScalar]) -> Option<AffineSolution> {
    assert_eq!(a.rows, b.len());
    let mut aug = DenseExact::zeros(a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, a.cols, b[r].clone());
    }
    let piv = aug.rref();
    if piv.last() == Some(&a.cols) {
        return None;
    }
    let mut particular = vec![ExactScalar::zero(); a.cols];
    for (row, &p) in piv.iter().enumerate() {
        particular[p] = aug.get(row, a.cols).clone();
    }
    Some(AffineSolution { particular, kernel: nullspace(a) })
}
