//! Dense linear algebra over a [`FieldOps`] field: subspaces kept in reduced
//! row echelon form, and enumeration of all subspaces of F_q^m of a fixed
//! dimension.

use crate::field::FieldOps;

/// A subspace of `F^ambient`, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<E> {
    ambient: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<F>(ops: &F, ambient: usize, vectors: impl IntoIterator<Item = Vec<E>>) -> Self
    where
        F: FieldOps<Elem = E>,
    {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(ops, v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after eliminating every pivot coordinate.
    pub fn reduce<F: FieldOps<Elem = E>>(&self, ops: &F, v: &[E]) -> Vec<E> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if ops.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !ops.is_zero(r) {
                    *x = ops.sub(x, &ops.mul(&c, r));
                }
            }
        }
        v
    }

    pub fn contains<F: FieldOps<Elem = E>>(&self, ops: &F, v: &[E]) -> bool {
        self.reduce(ops, v).iter().all(|x| ops.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert<F: FieldOps<Elem = E>>(&mut self, ops: &F, v: Vec<E>) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let mut r = self.reduce(ops, &v);
        let Some(p) = r.iter().position(|x| !ops.is_zero(x)) else {
            return false;
        };
        let inv = ops.inv(&r[p]).expect("nonzero pivot");
        for x in r.iter_mut().skip(p) {
            *x = ops.mul(x, &inv);
        }
        for row in &mut self.rows {
            if ops.is_zero(&row[p]) {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r).skip(p) {
                if !ops.is_zero(y) {
                    *x = ops.sub(x, &ops.mul(&c, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// Whether `self` is contained in `other`.
    pub fn is_subspace_of<F: FieldOps<Elem = E>>(&self, ops: &F, other: &Self) -> bool {
        self.rows.iter().all(|r| other.contains(ops, r))
    }

    /// Coordinates not used as pivots; the corresponding unit vectors span a
    /// complement of this subspace.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| self.pivots.binary_search(c).is_err())
            .collect()
    }
}

/// Number of k-dimensional subspaces of F_q^m, saturating at `u128::MAX`.
pub fn gaussian_binomial(m: usize, k: usize, q: u64) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    // product over i < k of (q^(m-i) - 1) / (q^(i+1) - 1), kept integral by
    // multiplying first; every partial product is itself a Gaussian binomial.
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        let Some(num) = q.checked_pow((m - i) as u32).map(|x| x - 1) else {
            return u128::MAX;
        };
        let den = q.pow((i + 1) as u32) - 1;
        match acc.checked_mul(num) {
            Some(x) => acc = x / den,
            None => return u128::MAX,
        }
    }
    acc
}

/// One "shape" of a k x m reduced row echelon matrix: its pivot columns and
/// the positions of its free entries.
#[derive(Clone, Debug)]
pub struct EchelonShape {
    pub pivots: Vec<usize>,
    pub free: Vec<(usize, usize)>,
}

/// All pivot patterns of rank-k echelon matrices with m columns, in
/// lexicographic order of pivot sets.
pub fn echelon_shapes(m: usize, k: usize) -> Vec<EchelonShape> {
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        let mut free = Vec::new();
        for (row, &p) in pivots.iter().enumerate() {
            for col in p + 1..m {
                if !pivots.contains(&col) {
                    free.push((row, col));
                }
            }
        }
        out.push(EchelonShape {
            pivots: pivots.clone(),
            free,
        });
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < m - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl EchelonShape {
    /// Calls `f` with every echelon matrix of this shape over F_q, rows as
    /// length-m vectors. Stops early if `f` returns `false`.
    pub fn for_each_matrix(&self, m: usize, q: u64, mut f: impl FnMut(&[Vec<u64>]) -> bool) {
        let k = self.pivots.len();
        let mut rows = vec![vec![0u64; m]; k];
        for (r, &p) in self.pivots.iter().enumerate() {
            rows[r][p] = 1;
        }
        let mut digits = vec![0u64; self.free.len()];
        loop {
            if !f(&rows) {
                return;
            }
            // odometer increment over the free entries
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return;
                }
                digits[i] += 1;
                let (r, c) = self.free[i];
                if digits[i] == q {
                    digits[i] = 0;
                    rows[r][c] = 0;
                    i += 1;
                } else {
                    rows[r][c] = digits[i];
                    break;
                }
            }
        }
    }
}
