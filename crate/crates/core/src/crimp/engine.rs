//! Field-generic linear algebra on F = O~/t^b O~.
//!
//! Vectors of F are stored in the monomial basis `t^m e_i`, coordinate
//! `i * b + m` (block i holds the coefficients of basis vector `e_i`).

use crate::error::Result;
use crate::field::FieldOps;
use crate::linalg::Subspace;
use crate::series::{SeriesMatrix, TruncatedSeries, Valuation};

use super::{CrimpFailure, NormalizationData};

pub(crate) type Poly<E> = Vec<E>;

pub(crate) fn lift_poly<F: FieldOps>(ops: &F, s: &TruncatedSeries, len: usize) -> Result<Poly<F::Elem>> {
    (0..len).map(|m| ops.lift(&s.coeff(m))).collect()
}

/// `a * b mod t^len`.
pub(crate) fn poly_mul<F: FieldOps>(ops: &F, a: &[F::Elem], b: &[F::Elem], len: usize) -> Poly<F::Elem> {
    let mut out = vec![ops.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if ops.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !ops.is_zero(y) {
                out[i + j] = ops.add(&out[i + j], &ops.mul(x, y));
            }
        }
    }
    out
}

fn poly_add_assign<F: FieldOps>(ops: &F, acc: &mut [F::Elem], x: &[F::Elem]) {
    for (a, b) in acc.iter_mut().zip(x) {
        if !ops.is_zero(b) {
            *a = ops.add(a, b);
        }
    }
}

/// Division-free determinant of a matrix of polynomials mod t^len.
pub(crate) fn poly_det<F: FieldOps>(ops: &F, m: &[Vec<Poly<F::Elem>>], len: usize) -> Poly<F::Elem> {
    let n = m.len();
    let mut dp: Vec<Option<Poly<F::Elem>>> = vec![None; 1 << n];
    let mut one = vec![ops.zero(); len];
    one[0] = ops.one();
    dp[0] = Some(one);
    for mask in 0..(1usize << n) {
        let Some(partial) = dp[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(partial);
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let mut term = poly_mul(ops, &partial, &m[row][col], len);
            if (mask >> (col + 1)).count_ones() % 2 == 1 {
                term = term.iter().map(|x| ops.neg(x)).collect();
            }
            let next = mask | (1 << col);
            match &mut dp[next] {
                Some(acc) => poly_add_assign(ops, acc, &term),
                slot @ None => *slot = Some(term),
            }
        }
    }
    dp[(1 << n) - 1].take().unwrap_or_else(|| vec![ops.zero(); len])
}

fn poly_valuation<F: FieldOps>(ops: &F, p: &[F::Elem]) -> Valuation {
    match p.iter().position(|x| !ops.is_zero(x)) {
        Some(v) => Valuation::Finite(v),
        None => Valuation::AtLeast(p.len()),
    }
}

/// The finite-dimensional algebra F together with the data needed to lift
/// subspaces back to O~.
pub(crate) struct Ambient<F: FieldOps> {
    pub ops: F,
    pub d: usize,
    pub b: usize,
    /// Working precision for discriminants of lifts; exceeds `b`.
    pub precision: usize,
    /// `mult[i][j][k]`, polynomials mod t^b.
    mult: Vec<Vec<Vec<Poly<F::Elem>>>>,
    unit: Vec<Poly<F::Elem>>,
    /// Trace form of O~ mod t^precision.
    gram: Vec<Vec<Poly<F::Elem>>>,
    autos: Vec<Vec<Vec<Poly<F::Elem>>>>,
}

impl<F: FieldOps> Ambient<F> {
    pub fn new(ops: F, normalization: &NormalizationData, b: usize) -> Result<Self> {
        let cover = normalization.cover();
        let table = cover.table();
        let d = table.degree();
        let precision = cover.precision();
        let mult = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| lift_poly(&ops, table.c(i, j, k), b)).collect())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = table
            .unit()
            .iter()
            .map(|u| lift_poly(&ops, u, b))
            .collect::<Result<Vec<_>>>()?;
        let tf = cover.trace_form()?;
        let gram = (0..d)
            .map(|i| (0..d).map(|j| lift_poly(&ops, tf.get(i, j), precision)).collect())
            .collect::<Result<Vec<_>>>()?;
        let autos = normalization
            .automorphisms()
            .iter()
            .map(|m| lift_matrix(&ops, m, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ambient {
            ops,
            d,
            b,
            precision,
            mult,
            unit,
            gram,
            autos,
        })
    }

    pub fn dim(&self) -> usize {
        self.d * self.b
    }

    pub fn zero_vector(&self) -> Vec<F::Elem> {
        vec![self.ops.zero(); self.dim()]
    }

    fn blocks<'a>(&self, v: &'a [F::Elem]) -> impl Iterator<Item = &'a [F::Elem]> {
        v.chunks(self.b)
    }

    pub fn from_blocks(&self, blocks: &[Poly<F::Elem>]) -> Vec<F::Elem> {
        let mut v = Vec::with_capacity(self.dim());
        for p in blocks {
            v.extend(p.iter().take(self.b).cloned());
            v.extend(std::iter::repeat_n(self.ops.zero(), self.b.saturating_sub(p.len())));
        }
        v
    }

    pub fn product(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let ops = &self.ops;
        let mut out = vec![vec![ops.zero(); self.b]; self.d];
        let xs: Vec<_> = self.blocks(x).collect();
        let ys: Vec<_> = self.blocks(y).collect();
        for (i, xi) in xs.iter().enumerate() {
            if xi.iter().all(|c| ops.is_zero(c)) {
                continue;
            }
            for (j, yj) in ys.iter().enumerate() {
                if yj.iter().all(|c| ops.is_zero(c)) {
                    continue;
                }
                let p = poly_mul(ops, xi, yj, self.b);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.mult[i][j][k];
                    if c.iter().any(|e| !ops.is_zero(e)) {
                        poly_add_assign(ops, o, &poly_mul(ops, &p, c, self.b));
                    }
                }
            }
        }
        self.from_blocks(&out)
    }

    pub fn times_t(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = self.zero_vector();
        for i in 0..self.d {
            for m in 0..self.b - 1 {
                out[i * self.b + m + 1] = x[i * self.b + m].clone();
            }
        }
        out
    }

    /// `t^m * 1` for `m < b`: the image of the base ring.
    pub fn base_image(&self) -> Vec<Vec<F::Elem>> {
        let mut v = self.from_blocks(&self.unit);
        let mut out = Vec::with_capacity(self.b);
        for _ in 0..self.b {
            out.push(v.clone());
            v = self.times_t(&v);
        }
        out
    }

    /// `t^m e_i` for `m >= from`.
    pub fn deep_monomials(&self, from: usize) -> Vec<Vec<F::Elem>> {
        let mut out = Vec::new();
        for i in 0..self.d {
            for m in from..self.b {
                let mut v = self.zero_vector();
                v[i * self.b + m] = self.ops.one();
                out.push(v);
            }
        }
        out
    }

    pub fn automorphism_count(&self) -> usize {
        self.autos.len()
    }

    pub fn apply_automorphism(&self, index: usize, x: &[F::Elem]) -> Vec<F::Elem> {
        let a = &self.autos[index];
        let ops = &self.ops;
        let mut out = vec![vec![ops.zero(); self.b]; self.d];
        for (j, xj) in self.blocks(x).enumerate() {
            for (i, o) in out.iter_mut().enumerate() {
                poly_add_assign(ops, o, &poly_mul(ops, &a[i][j], xj, self.b));
            }
        }
        self.from_blocks(&out)
    }

    pub fn image_subspace(&self, index: usize, s: &Subspace<F::Elem>) -> Subspace<F::Elem> {
        Subspace::spanned_by(
            &self.ops,
            self.dim(),
            s.rows().iter().map(|r| self.apply_automorphism(index, r)),
        )
    }

    pub fn is_t_stable(&self, s: &Subspace<F::Elem>) -> bool {
        s.rows().iter().all(|r| s.contains(&self.ops, &self.times_t(r)))
    }

    /// t-adic valuation of the discriminant of the lattice `O` with
    /// `O / t^b O~ = s`, computed as the Gram determinant of an R-basis of O
    /// under the trace pairing of O~. `None` when `s` is not t-stable (its
    /// preimage is then not an R-module).
    pub fn lift_valuation(&self, s: &Subspace<F::Elem>) -> Option<Valuation> {
        if !self.is_t_stable(s) {
            return None;
        }
        let ops = &self.ops;
        let len = self.precision;
        // triangular R-basis: for block i take the echelon row whose pivot is
        // the smallest in that block, or t^b e_i when the block has none
        let basis: Vec<Vec<Poly<F::Elem>>> = (0..self.d)
            .map(|i| {
                let lo = i * self.b;
                let hit = s
                    .pivots()
                    .iter()
                    .position(|&p| p >= lo && p < lo + self.b);
                match hit {
                    Some(row) => s.rows()[row]
                        .chunks(self.b)
                        .map(|c| {
                            let mut p = c.to_vec();
                            p.resize(len, ops.zero());
                            p
                        })
                        .collect(),
                    None => (0..self.d)
                        .map(|k| {
                            let mut p = vec![ops.zero(); len];
                            if k == i {
                                p[self.b] = ops.one();
                            }
                            p
                        })
                        .collect(),
                }
            })
            .collect();
        let mut gram = vec![vec![Vec::new(); self.d]; self.d];
        for i in 0..self.d {
            for j in 0..self.d {
                let mut acc = vec![ops.zero(); len];
                for k in 0..self.d {
                    for l in 0..self.d {
                        if basis[i][k].iter().all(|x| ops.is_zero(x))
                            || basis[j][l].iter().all(|x| ops.is_zero(x))
                        {
                            continue;
                        }
                        let p = poly_mul(ops, &basis[i][k], &basis[j][l], len);
                        poly_add_assign(ops, &mut acc, &poly_mul(ops, &p, &self.gram[k][l], len));
                    }
                }
                gram[i][j] = acc;
            }
        }
        Some(poly_valuation(ops, &poly_det(ops, &gram, len)))
    }

    /// Runs the four crimp conditions in order and reports the first failure.
    pub fn check(&self, s: &Subspace<F::Elem>, delta: usize) -> Option<CrimpFailure> {
        let ops = &self.ops;
        if let Some(power) = self.base_image().iter().position(|v| !s.contains(ops, v)) {
            return Some(CrimpFailure::MissingBaseRing { power });
        }
        let rows = s.rows();
        for i in 0..rows.len() {
            for j in i..rows.len() {
                if !s.contains(ops, &self.product(&rows[i], &rows[j])) {
                    return Some(CrimpFailure::NotClosed { left: i, right: j });
                }
            }
        }
        if s.codim() != delta {
            return Some(CrimpFailure::Codimension {
                expected: delta,
                found: s.codim(),
            });
        }
        let expected = self.b;
        match self.lift_valuation(s).expect("closed subspaces containing t are t-stable") {
            Valuation::Finite(v) if v == expected => None,
            found => Some(CrimpFailure::BranchValuation { expected, found }),
        }
    }
}

fn lift_matrix<F: FieldOps>(ops: &F, m: &SeriesMatrix, len: usize) -> Result<Vec<Vec<Poly<F::Elem>>>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| lift_poly(ops, m.get(i, j), len)).collect())
        .collect()
}
