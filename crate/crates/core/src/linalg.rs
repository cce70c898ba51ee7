//! Dense and sparse exact linear algebra over a `Field`.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl<F: Field> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn scalar(n: usize, a: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = a.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(n: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() }))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    pub fn scale(&self, a: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * a).collect() }
    }

    pub fn neg(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x.clone()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b;
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + &self[(i, i)];
        }
        t
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        let mut out = Self::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = &o[(k, l)];
                        if !b.is_zero() {
                            out[(i * o.rows + k, j * o.cols + l)] = a.clone() * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..o.cols {
                m[(i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m[(self.rows + i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // cheapest nonzero pivot in this column
            let mut best: Option<(usize, usize)> = None;
            for i in r..m.rows {
                let x = &m[(i, c)];
                if !x.is_zero() {
                    let w = x.weight();
                    if best.is_none_or(|(_, bw)| w < bw) {
                        best = Some((i, w));
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let b = &m.data[r * m.cols + j];
                    if !b.is_zero() {
                        let v = m[(i, j)].clone() - f.clone() * b;
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[f] = F::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -r[(k, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &cols))
    }

    /// Some x with self·x = b, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let bm = Matrix::from_cols(self.rows, &[b.to_vec()]);
        let (r, pivots) = self.hstack(&bm).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r[(k, self.cols)].clone();
        }
        Some(x)
    }

    /// Characteristic polynomial det(xI - M) via Hessenberg reduction.
    pub fn char_poly(&self) -> Poly<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| !h[(i, c)].is_zero()) else { continue };
            if p != c + 1 {
                h.swap_rows(p, c + 1);
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + c + 1);
                }
            }
            let inv = h[(c + 1, c)].inv().unwrap();
            for i in c + 2..n {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let f = h[(i, c)].clone() * &inv;
                for j in 0..n {
                    let v = h[(i, j)].clone() - f.clone() * &h[(c + 1, j)];
                    h[(i, j)] = v;
                }
                for r in 0..n {
                    let v = h[(r, c + 1)].clone() + f.clone() * &h[(r, i)];
                    h[(r, c + 1)] = v;
                }
            }
        }
        // p_k = char poly of leading k×k block
        let mut ps: Vec<Poly<F>> = vec![Poly::one()];
        for k in 0..n {
            let mut pk = Poly::linear(h[(k, k)].clone()).mul(&ps[k]);
            let mut prod = F::one();
            for i in (0..k).rev() {
                prod = prod * &h[(i + 1, i)];
                if prod.is_zero() {
                    break;
                }
                let term = ps[i].scale(&(prod.clone() * &h[(i, k)]));
                pk = pk.sub(&term);
            }
            ps.push(pk);
        }
        ps.pop().unwrap()
    }

    /// Minimal polynomial as the lcm of the Krylov annihilators of the unit vectors.
    pub fn min_poly(&self) -> Poly<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc: Poly<F> = Poly::one();
        for i in 0..n {
            let mut e = vec![F::zero(); n];
            e[i] = F::one();
            // skip vectors already annihilated
            let pe = self.poly_apply(&acc, &e);
            if pe.iter().all(|x| x.is_zero()) {
                continue;
            }
            let m = self.krylov_annihilator(&pe);
            acc = acc.mul(&m);
        }
        acc.monic()
    }

    fn krylov_annihilator(&self, v: &[F]) -> Poly<F> {
        let n = self.rows;
        let mut vecs: Vec<Vec<F>> = vec![v.to_vec()];
        loop {
            let next = self.mul_vec(vecs.last().unwrap());
            let k = vecs.len();
            let a = Matrix::from_cols(n, &vecs);
            if let Some(x) = a.solve(&next) {
                let mut c: Vec<F> = x.into_iter().map(|t| -t).collect();
                c.push(F::one());
                return Poly::new(c);
            }
            vecs.push(next);
            assert!(k <= n, "Krylov sequence exceeded dimension");
        }
    }

    pub fn poly_apply(&self, p: &Poly<F>, v: &[F]) -> Vec<F> {
        let mut acc = vec![F::zero(); v.len()];
        for c in p.coeffs().iter().rev() {
            acc = self.mul_vec(&acc);
            for (a, x) in acc.iter_mut().zip(v) {
                *a = a.clone() + c.clone() * x;
            }
        }
        acc
    }

    pub fn eval_poly(&self, p: &Poly<F>) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Self::scalar(n, c.clone()));
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Column space basis (columns of `self` at pivot positions).
    pub fn column_basis(&self) -> Vec<Vec<F>> {
        let (_, pivots) = self.rref();
        pivots.into_iter().map(|j| self.col(j)).collect()
    }
}

/// Sparse row: strictly increasing column indices, no stored zeros.
pub type SparseRow<F> = Vec<(usize, F)>;

fn sparse_axpy<F: Field>(row: &SparseRow<F>, coef: &F, piv: &SparseRow<F>) -> SparseRow<F> {
    // row - coef * piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map_or(usize::MAX, |x| x.0);
        let cj = piv.get(j).map_or(usize::MAX, |x| x.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(coef.clone() * &piv[j].1)));
            j += 1;
        } else {
            let v = row[i].1.clone() - coef.clone() * &piv[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental sparse echelon form used for large homogeneous systems.
pub struct SparseEchelon<F: Field> {
    ncols: usize,
    /// pivot column → normalized row whose leading column is that pivot
    pivots: Vec<Option<SparseRow<F>>>,
    rank: usize,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon { ncols, pivots: vec![None; ncols], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduce `row` against the current pivots; returns the residue.
    pub fn reduce(&self, mut row: SparseRow<F>) -> SparseRow<F> {
        let mut start = 0;
        loop {
            let Some(k) = row[start..].iter().position(|(c, _)| self.pivots[*c].is_some()) else { return row };
            let k = start + k;
            let (c, coef) = row[k].clone();
            let piv = self.pivots[c].as_ref().unwrap();
            row = sparse_axpy(&row, &coef, piv);
            start = k;
        }
    }

    /// Add a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: SparseRow<F>) -> bool {
        let row = self.reduce(row);
        let Some((c, lead)) = row.first().cloned() else { return false };
        let inv = lead.inv().unwrap();
        let row: SparseRow<F> = row.into_iter().map(|(j, v)| (j, v * &inv)).collect();
        self.pivots[c] = Some(row);
        self.rank += 1;
        true
    }

    /// Insert rows with the sparsest first, which keeps fill-in low.
    pub fn insert_all(&mut self, mut rows: Vec<SparseRow<F>>) {
        rows.sort_by_key(|r| r.len());
        for r in rows {
            self.insert(r);
        }
    }

    /// Kernel basis: one vector per free column, in reduced echelon normalization.
    pub fn nullspace(&self) -> Vec<SparseRow<F>> {
        // back substitution into fully reduced rows, highest pivot first
        let mut reduced: Vec<Option<SparseRow<F>>> = vec![None; self.ncols];
        for c in (0..self.ncols).rev() {
            let Some(row) = &self.pivots[c] else { continue };
            let mut r = row.clone();
            let mut k = 1;
            while k < r.len() {
                let col = r[k].0;
                if let Some(red) = &reduced[col] {
                    let coef = r[k].1.clone();
                    r = sparse_axpy(&r, &coef, red);
                    // the entry at `col` vanished; entries from `red` are at columns > col
                    k = r.iter().position(|(j, _)| *j > col).unwrap_or(r.len());
                } else {
                    k += 1;
                }
            }
            reduced[c] = Some(r);
        }
        let mut free_to_entries: Vec<SparseRow<F>> = vec![Vec::new(); self.ncols];
        for (p, row) in reduced.iter().enumerate() {
            let Some(row) = row else { continue };
            for (j, v) in row.iter().skip(1) {
                free_to_entries[*j].push((p, -v.clone()));
            }
        }
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots[f].is_some() {
                continue;
            }
            let mut v = std::mem::take(&mut free_to_entries[f]);
            v.push((f, F::one()));
            v.sort_by_key(|x| x.0);
            out.push(v);
        }
        out
    }
}

pub fn sparse_to_dense<F: Field>(n: usize, v: &SparseRow<F>) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (j, x) in v {
        out[*j] = x.clone();
    }
    out
}

/// Rank of a set of vectors.
pub fn rank_of<F: Field>(n: usize, vecs: &[Vec<F>]) -> usize {
    let mut e = SparseEchelon::new(n);
    for v in vecs {
        e.insert(dense_to_sparse(v));
    }
    e.rank()
}

pub fn dense_to_sparse<F: Field>(v: &[F]) -> SparseRow<F> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect()
}

/// Indices of a maximal independent subfamily, greedily in order.
pub fn independent_subset<F: Field>(n: usize, vecs: &[Vec<F>]) -> Vec<usize> {
    let mut e = SparseEchelon::new(n);
    let mut out = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        if e.insert(dense_to_sparse(v)) {
            out.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_i64(x)).collect()).collect())
    }

    fn p(v: &[i64]) -> Poly<BigRational> {
        Poly::new(v.iter().map(|&x| BigRational::from_i64(x)).collect())
    }

    #[test]
    fn char_and_min() {
        let i3 = Matrix::<BigRational>::identity(3);
        assert_eq!(i3.min_poly(), p(&[-1, 1]));
        assert_eq!(i3.char_poly(), p(&[-1, 3, -3, 1]));
        let j = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(j.min_poly(), p(&[0, 0, 1]));
        assert_eq!(j.char_poly(), p(&[0, 0, 1]));
        let a = m(&[&[2, 1, 0], &[0, 2, 0], &[1, 0, 3]]);
        let cp = a.char_poly();
        assert!(a.eval_poly(&cp).is_zero());
        assert!(cp.rem(&a.min_poly()).is_zero());
    }

    #[test]
    fn kernel_inverse() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let b = m(&[&[2, 1], &[1, 1]]);
        assert!(b.mul(&b.inverse().unwrap()).is_identity());
        assert!(a.transpose().mul(&a).inverse().is_none());
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[1, 2, 0, 3], &[0, 0, 1, 1], &[1, 2, 1, 4]]);
        let mut e = SparseEchelon::new(4);
        for i in 0..3 {
            e.insert(dense_to_sparse(a.row(i)));
        }
        assert_eq!(e.rank(), 2);
        let ns: Vec<_> = e.nullspace().iter().map(|v| sparse_to_dense(4, v)).collect();
        assert_eq!(ns, a.nullspace());
    }
}
