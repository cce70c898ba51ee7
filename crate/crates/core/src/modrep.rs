//! Finite-dimensional D(Λ_{n,d})-modules in a weight basis, with hom spaces,
//! tensor/dual/sum, Loewy data, quantum traces and the decomposition engine.
//!
//! Every basis vector is a simultaneous eigenvector of G and the e_i. Its weight
//! (u, i) records the vertex i and the G-eigenvalue ω^u q^i. Only X (weight
//! (u,i) → (u,i−1)) and A = Σ a_i ((u,i) → (u,i+1)) need storing.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{CycloScalar, ScalarJson};
use crate::dalgebra::{AlgElement, Ctx, Orientation, COPRODUCT_ORIENTATION};
use crate::factor::{factor_over_field, squarefree_decomposition, FactorError, FieldPoly, DEFAULT_DEGREE_CAP};
use crate::field::Field;
use crate::linalg::{Matrix, SparseEchelon, SparseRow};
use crate::poly::Poly;

pub use crate::label::IndecLabel;

type S = CycloScalar;
pub type Mat = Matrix<S>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModuleError {
    #[error("modules over different algebras: (n,d)=({0},{1}) vs ({2},{3})")]
    ContextMismatch(usize, usize, usize, usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("relations violated: {}", .0.join("; "))]
    Relations(Vec<String>),
    #[error("json: {0}")]
    Json(String),
    #[error("identification inconclusive: {0}")]
    Inconclusive(String),
    #[error("factorization: {0}")]
    Factor(String),
    #[error("subspace is not a submodule")]
    NotInvariant,
    #[error("{0}")]
    Invalid(String),
}

impl From<FactorError> for ModuleError {
    fn from(e: FactorError) -> Self {
        ModuleError::Factor(e.to_string())
    }
}

/// Component u and vertex i of a weight vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub u: usize,
    pub v: usize,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Clone)]
pub struct ModuleRep {
    ctx: Ctx,
    weights: Vec<Weight>,
    x: Mat,
    a: Mat,
    blocks: BTreeMap<Weight, Vec<usize>>,
}

impl fmt::Debug for ModuleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleRep(dim {}, weights {:?})", self.dim(), self.weights)
    }
}

fn index_blocks(weights: &[Weight]) -> BTreeMap<Weight, Vec<usize>> {
    let mut b: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for (k, w) in weights.iter().enumerate() {
        b.entry(*w).or_default().push(k);
    }
    b
}

impl ModuleRep {
    /// Build from weight-form data, checking weights and the defining relations.
    pub fn new(ctx: &Ctx, weights: Vec<Weight>, x: Mat, a: Mat) -> Result<Self, ModuleError> {
        let m = Self::new_unchecked(ctx, weights, x, a)?;
        let bad = m.check_weight_relations();
        if !bad.is_empty() {
            return Err(ModuleError::Relations(bad));
        }
        Ok(m)
    }

    /// Build without the relation check; shapes and weight ranges are still validated.
    pub fn new_unchecked(ctx: &Ctx, weights: Vec<Weight>, x: Mat, a: Mat) -> Result<Self, ModuleError> {
        let n = weights.len();
        if x.rows() != n || x.cols() != n || a.rows() != n || a.cols() != n {
            return Err(ModuleError::Shape(format!("expected {n}x{n} matrices")));
        }
        if let Some(w) = weights.iter().find(|w| w.u >= ctx.n || w.v >= ctx.n) {
            return Err(ModuleError::Shape(format!("weight {w} out of range")));
        }
        let blocks = index_blocks(&weights);
        Ok(ModuleRep { ctx: ctx.clone(), weights, x, a, blocks })
    }

    pub fn zero(ctx: &Ctx) -> Self {
        ModuleRep { ctx: ctx.clone(), weights: Vec::new(), x: Mat::zeros(0, 0), a: Mat::zeros(0, 0), blocks: BTreeMap::new() }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    /// Action of A = Σ a_i.
    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn weight_blocks(&self) -> &BTreeMap<Weight, Vec<usize>> {
        &self.blocks
    }

    pub fn weight_mult(&self, w: Weight) -> usize {
        self.blocks.get(&w).map_or(0, |v| v.len())
    }

    pub fn weight_multiset(&self) -> BTreeMap<Weight, usize> {
        self.blocks.iter().map(|(w, v)| (*w, v.len())).collect()
    }

    /// Components u that occur.
    pub fn components(&self) -> Vec<usize> {
        let mut us: Vec<usize> = self.blocks.keys().map(|w| w.u).collect();
        us.dedup();
        us
    }

    fn down(&self, w: Weight) -> Weight {
        Weight { u: w.u, v: (w.v + self.ctx.n - 1) % self.ctx.n }
    }

    fn up(&self, w: Weight) -> Weight {
        Weight { u: w.u, v: (w.v + 1) % self.ctx.n }
    }

    pub fn eigenvalue(&self, k: usize) -> S {
        let w = self.weights[k];
        self.ctx.weight_scalar(w.u, w.v)
    }

    fn kappa(&self, w: Weight) -> S {
        // AX − q^{-1}XA on weight (u,i)
        let c = &self.ctx;
        c.wp(w.u as i64) * c.qp(2 * w.v as i64 - 1) - c.qp(-1)
    }

    fn check_weight_relations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if !self.x[(i, j)].is_zero() && self.weights[i] != self.down(self.weights[j]) {
                    bad.push(format!("X does not lower the weight at ({i},{j})"));
                }
                if !self.a[(i, j)].is_zero() && self.weights[i] != self.up(self.weights[j]) {
                    bad.push(format!("A does not raise the weight at ({i},{j})"));
                }
            }
        }
        if !bad.is_empty() {
            return bad;
        }
        let qi = self.ctx.qp(-1);
        let comm = self.a.mul(&self.x).sub(&self.x.mul(&self.a).scale(&qi));
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { self.kappa(self.weights[i]) } else { S::zero() };
                if comm[(i, j)] != expect {
                    bad.push(format!("a_l X relation fails at ({i},{j})"));
                }
            }
        }
        let d = self.ctx.d as u64;
        if !self.x.pow(d).is_zero() {
            bad.push("X^d != 0".into());
        }
        if !self.a.pow(d).is_zero() {
            bad.push("paths of length d act nonzero".into());
        }
        bad
    }

    pub fn act_g(&self) -> Mat {
        let mut g = Mat::zeros(self.dim(), self.dim());
        for k in 0..self.dim() {
            g[(k, k)] = self.eigenvalue(k);
        }
        g
    }

    pub fn act_e(&self, i: usize) -> Mat {
        let mut e = Mat::zeros(self.dim(), self.dim());
        for (k, w) in self.weights.iter().enumerate() {
            if w.v == i % self.ctx.n {
                e[(k, k)] = S::one();
            }
        }
        e
    }

    pub fn act_a(&self, i: usize) -> Mat {
        self.a.mul(&self.act_e(i))
    }

    pub fn full(&self) -> FullRep {
        FullRep {
            g: self.act_g(),
            x: self.x.clone(),
            e: (0..self.ctx.n).map(|i| self.act_e(i)).collect(),
            a: (0..self.ctx.n).map(|i| self.act_a(i)).collect(),
        }
    }

    /// Matrix of an algebra element.
    pub fn act(&self, el: &AlgElement) -> Mat {
        let dim = self.dim();
        let mut out = Mat::zeros(dim, dim);
        let mut xp = vec![Mat::identity(dim)];
        let mut ap = vec![Mat::identity(dim)];
        for k in 1..self.ctx.d {
            xp.push(xp[k - 1].mul(&self.x));
            ap.push(ap[k - 1].mul(&self.a));
        }
        for (b, c) in el.terms() {
            // G^i X^j γ_l^m = G^i X^j A^m e_l
            let mut m = xp[b.x_exp].mul(&ap[b.path_len]).mul(&self.act_e(b.vertex));
            for r in 0..dim {
                let g = self.eigenvalue(r);
                let mut gi = S::one();
                for _ in 0..b.g_exp {
                    gi = gi * &g;
                }
                for col in 0..dim {
                    if !m[(r, col)].is_zero() {
                        m[(r, col)] = m[(r, col)].clone() * &gi * c;
                    }
                }
            }
            out = out.add(&m);
        }
        out
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        same_ctx(self, o).unwrap_or_else(|e| panic!("{e}"));
        let mut w = self.weights.clone();
        w.extend_from_slice(&o.weights);
        let blocks = index_blocks(&w);
        ModuleRep { ctx: self.ctx.clone(), weights: w, x: self.x.direct_sum(&o.x), a: self.a.direct_sum(&o.a), blocks }
    }

    pub fn direct_sum_all(ctx: &Ctx, ms: &[&ModuleRep]) -> Self {
        ms.iter().fold(Self::zero(ctx), |acc, m| acc.direct_sum(m))
    }

    /// Tensor product; basis v_k⊗w_l at index k·dim N + l.
    pub fn tensor(&self, o: &Self) -> Result<Self, ModuleError> {
        same_ctx(self, o)?;
        Ok(self.tensor_oriented(o, COPRODUCT_ORIENTATION))
    }

    pub fn tensor_oriented(&self, o: &Self, orient: Orientation) -> Self {
        let c = &self.ctx;
        let (m, n) = (self.dim(), o.dim());
        let mut weights = Vec::with_capacity(m * n);
        for w1 in &self.weights {
            for w2 in &o.weights {
                weights.push(Weight { u: (w1.u + w2.u) % c.n, v: (w1.v + w2.v) % c.n });
            }
        }
        let diag = |md: &ModuleRep, f: &dyn Fn(usize) -> S| {
            let mut g = Mat::zeros(md.dim(), md.dim());
            for k in 0..md.dim() {
                g[(k, k)] = f(k);
            }
            g
        };
        let gs = diag(self, &|k| self.eigenvalue(k));
        let go = diag(o, &|k| o.eigenvalue(k));
        let qs = diag(self, &|k| c.qp(self.weights[k].v as i64));
        let qo = diag(o, &|k| c.qp(o.weights[k].v as i64));
        let (x, a) = match orient {
            Orientation::AsPrinted => (
                self.x.kron(&go).add(&Mat::identity(m).kron(&o.x)),
                Mat::identity(m).kron(&o.a).add(&self.a.kron(&qo)),
            ),
            Orientation::Opposite => (
                self.x.kron(&Mat::identity(n)).add(&gs.kron(&o.x)),
                qs.kron(&o.a).add(&self.a.kron(&Mat::identity(n))),
            ),
        };
        let blocks = index_blocks(&weights);
        ModuleRep { ctx: c.clone(), weights, x, a, blocks }
    }

    /// Dual module; action of g is the transpose of S(g).
    pub fn dual(&self) -> Self {
        let c = &self.ctx;
        let n = self.dim();
        let weights: Vec<Weight> =
            self.weights.iter().map(|w| Weight { u: (c.n - w.u) % c.n, v: (c.n - w.v) % c.n }).collect();
        let mut x = Mat::zeros(n, n);
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            let ci = self.eigenvalue(i).inv().unwrap();
            let qi = c.qp(-(self.weights[i].v as i64));
            for j in 0..n {
                if !self.x[(j, i)].is_zero() {
                    x[(i, j)] = -(ci.clone() * &self.x[(j, i)]);
                }
                if !self.a[(j, i)].is_zero() {
                    a[(i, j)] = -(qi.clone() * &self.a[(j, i)]);
                }
            }
        }
        let blocks = index_blocks(&weights);
        ModuleRep { ctx: c.clone(), weights, x, a, blocks }
    }

    /// Restriction to a set of coordinates spanning a submodule or, read the other way,
    /// a quotient; the caller guarantees the relevant invariance.
    pub fn select(&self, idx: &[usize]) -> Self {
        let weights: Vec<Weight> = idx.iter().map(|&k| self.weights[k]).collect();
        let blocks = index_blocks(&weights);
        ModuleRep {
            ctx: self.ctx.clone(),
            weights,
            x: self.x.submatrix(idx, idx),
            a: self.a.submatrix(idx, idx),
            blocks,
        }
    }

    /// Coordinates lying in component u.
    pub fn component_indices(&self, u: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.weights[k].u == u).collect()
    }

    /// Change to a new weight-homogeneous basis: `basis[w]` has columns in the local
    /// coordinates of weight space w. Returns the module and the global basis matrix.
    pub fn transform(&self, basis: &GradedBasis) -> (Self, Mat) {
        let dim = self.dim();
        let mut weights = Vec::new();
        let mut offsets: BTreeMap<Weight, usize> = BTreeMap::new();
        for (w, b) in &basis.0 {
            offsets.insert(*w, weights.len());
            for _ in 0..b.cols() {
                weights.push(*w);
            }
        }
        let newdim = weights.len();
        let mut big = Mat::zeros(dim, newdim);
        for (w, b) in &basis.0 {
            let rows = &self.blocks[w];
            let off = offsets[w];
            for (li, &gi) in rows.iter().enumerate() {
                for j in 0..b.cols() {
                    big[(gi, off + j)] = b[(li, j)].clone();
                }
            }
        }
        let mut x = Mat::zeros(newdim, newdim);
        let mut a = Mat::zeros(newdim, newdim);
        let mut inverses: BTreeMap<Weight, Mat> = BTreeMap::new();
        for (w, b) in &basis.0 {
            inverses.insert(*w, left_inverse(b));
        }
        for (w, b) in &basis.0 {
            let cols = &self.blocks[w];
            for (op, target, out) in [(&self.x, self.down(*w), &mut x), (&self.a, self.up(*w), &mut a)] {
                let Some(tb) = basis.0.get(&target) else { continue };
                let _ = tb;
                let rows = &self.blocks[&target];
                let blk = op.submatrix(rows, cols).mul(b);
                let local = inverses[&target].mul(&blk);
                let (ro, co) = (offsets[&target], offsets[w]);
                for i in 0..local.rows() {
                    for j in 0..local.cols() {
                        out[(ro + i, co + j)] = local[(i, j)].clone();
                    }
                }
            }
        }
        let blocks = index_blocks(&weights);
        (ModuleRep { ctx: self.ctx.clone(), weights, x, a, blocks }, big)
    }

    pub fn to_json(&self) -> ModuleRepJson {
        let f = self.full();
        let m = self.ctx.field_order();
        let conv = |mat: &Mat| -> Vec<Vec<ScalarJson>> {
            (0..mat.rows()).map(|i| (0..mat.cols()).map(|j| mat[(i, j)].to_json(m)).collect()).collect()
        };
        ModuleRepJson {
            n: self.ctx.n,
            d: self.ctx.d,
            dim: self.dim(),
            g: conv(&f.g),
            x: conv(&f.x),
            e: f.e.iter().map(conv).collect(),
            a: f.a.iter().map(conv).collect(),
        }
    }

    pub fn from_json(ctx: &Ctx, j: &ModuleRepJson) -> Result<Self, ModuleError> {
        if j.n != ctx.n || j.d != ctx.d {
            return Err(ModuleError::ContextMismatch(ctx.n, ctx.d, j.n, j.d));
        }
        let conv = |rows: &Vec<Vec<ScalarJson>>| -> Result<Mat, ModuleError> {
            if rows.len() != j.dim || rows.iter().any(|r| r.len() != j.dim) {
                return Err(ModuleError::Shape(format!("expected {0}x{0} matrix", j.dim)));
            }
            let mut out = Vec::with_capacity(j.dim);
            for r in rows {
                let mut row = Vec::with_capacity(j.dim);
                for s in r {
                    row.push(S::from_json(s).map_err(|e| ModuleError::Json(e.to_string()))?);
                }
                out.push(row);
            }
            Ok(if j.dim == 0 { Mat::zeros(0, 0) } else { Mat::from_rows(out) })
        };
        if j.e.len() != ctx.n || j.a.len() != ctx.n {
            return Err(ModuleError::Shape(format!("expected {} idempotent and arrow matrices", ctx.n)));
        }
        let full = FullRep {
            g: conv(&j.g)?,
            x: conv(&j.x)?,
            e: j.e.iter().map(conv).collect::<Result<_, _>>()?,
            a: j.a.iter().map(conv).collect::<Result<_, _>>()?,
        };
        Self::from_full(ctx, &full)
    }

    /// Import arbitrary generator matrices by diagonalizing G and the e_i.
    pub fn from_full(ctx: &Ctx, f: &FullRep) -> Result<Self, ModuleError> {
        let bad = check_relations(ctx, f);
        if !bad.is_empty() {
            return Err(ModuleError::Relations(bad));
        }
        let dim = f.x.rows();
        let mut asum = Mat::zeros(dim, dim);
        for ai in &f.a {
            asum = asum.add(ai);
        }
        // already in weight form: keep the given basis so JSON round-trips
        if let Some(weights) = diagonal_weights(ctx, f) {
            return Self::new(ctx, weights, f.x.clone(), asum);
        }
        let id = Mat::identity(dim);
        let mut cols: Vec<Vec<S>> = Vec::new();
        let mut weights = Vec::new();
        for v in 0..ctx.n {
            for u in 0..ctx.n {
                let lam = ctx.weight_scalar(u, v);
                let stacked = f.g.sub(&id.scale(&lam)).vstack(&id.sub(&f.e[v]));
                for vec in stacked.nullspace() {
                    cols.push(vec);
                    weights.push(Weight { u, v });
                }
            }
        }
        if cols.len() != dim {
            return Err(ModuleError::Invalid("G and e_i are not simultaneously diagonalizable".into()));
        }
        let b = Mat::from_cols(dim, &cols);
        let bi = b.inverse().ok_or_else(|| ModuleError::Invalid("weight basis not independent".into()))?;
        let x = bi.mul(&f.x).mul(&b);
        let a = bi.mul(&asum).mul(&b);
        Self::new(ctx, weights, x, a)
    }
}

fn diagonal_weights(ctx: &Ctx, f: &FullRep) -> Option<Vec<Weight>> {
    let dim = f.x.rows();
    let off_diag_zero = |m: &Mat| (0..dim).all(|i| (0..dim).all(|j| i == j || m[(i, j)].is_zero()));
    if !off_diag_zero(&f.g) || !f.e.iter().all(off_diag_zero) {
        return None;
    }
    (0..dim)
        .map(|k| {
            let v = (0..ctx.n).find(|&v| f.e[v][(k, k)].is_one())?;
            let u = (0..ctx.n).find(|&u| ctx.weight_scalar(u, v) == f.g[(k, k)])?;
            Some(Weight { u, v })
        })
        .collect()
}

fn same_ctx(a: &ModuleRep, b: &ModuleRep) -> Result<(), ModuleError> {
    if *a.ctx != *b.ctx {
        return Err(ModuleError::ContextMismatch(a.ctx.n, a.ctx.d, b.ctx.n, b.ctx.d));
    }
    Ok(())
}

/// A left inverse of a full-column-rank matrix.
fn left_inverse(b: &Mat) -> Mat {
    // (b | I) row-reduced: the pivot rows of the identity half give a left inverse
    let n = b.rows();
    let k = b.cols();
    let (r, pivots) = b.hstack(&Mat::identity(n)).rref();
    assert!(pivots.len() >= k && pivots[..k].iter().enumerate().all(|(i, &p)| p == i), "basis not independent");
    let rows: Vec<usize> = (0..k).collect();
    let cols: Vec<usize> = (k..k + n).collect();
    r.submatrix(&rows, &cols)
}

/// Per-weight column bases, in local coordinates of each weight space.
#[derive(Debug, Clone, Default)]
pub struct GradedBasis(pub BTreeMap<Weight, Mat>);

impl GradedBasis {
    pub fn dim(&self) -> usize {
        self.0.values().map(|m| m.cols()).sum()
    }

    /// Standard basis of every weight space of `m`.
    pub fn standard(m: &ModuleRep) -> Self {
        GradedBasis(m.blocks.iter().map(|(w, v)| (*w, Mat::identity(v.len()))).collect())
    }

    /// Weight components of arbitrary spanning vectors (of a submodule), reduced to a basis.
    pub fn from_vectors(m: &ModuleRep, vecs: &[Vec<S>]) -> Self {
        let mut out = BTreeMap::new();
        for (w, idx) in &m.blocks {
            let mut ech = SparseEchelon::new(idx.len());
            let mut keep = Vec::new();
            for v in vecs {
                let local: Vec<S> = idx.iter().map(|&k| v[k].clone()).collect();
                if ech.insert(crate::linalg::dense_to_sparse(&local)) {
                    keep.push(local);
                }
            }
            if !keep.is_empty() {
                out.insert(*w, Mat::from_cols(idx.len(), &keep));
            }
        }
        GradedBasis(out)
    }

    /// Columns of `self` followed by unit vectors completing each weight space.
    pub fn complete(&self, m: &ModuleRep) -> (GradedBasis, GradedBasis) {
        let mut full = BTreeMap::new();
        let mut comp = BTreeMap::new();
        for (w, idx) in &m.blocks {
            let k = idx.len();
            let mut cols: Vec<Vec<S>> = Vec::new();
            let mut ech = SparseEchelon::new(k);
            if let Some(b) = self.0.get(w) {
                for j in 0..b.cols() {
                    let c = b.col(j);
                    ech.insert(crate::linalg::dense_to_sparse(&c));
                    cols.push(c);
                }
            }
            let mut extra = Vec::new();
            for e in 0..k {
                let mut unit = vec![S::zero(); k];
                unit[e] = S::one();
                if ech.insert(vec![(e, S::one())]) {
                    extra.push(unit);
                }
            }
            cols.extend(extra.iter().cloned());
            full.insert(*w, Mat::from_cols(k, &cols));
            if !extra.is_empty() {
                comp.insert(*w, Mat::from_cols(k, &extra));
            }
        }
        (GradedBasis(full), GradedBasis(comp))
    }

    /// Global vectors (length dim m) of the basis columns, weight order.
    pub fn global(&self, m: &ModuleRep) -> Vec<Vec<S>> {
        let mut out = Vec::new();
        for (w, b) in &self.0 {
            let idx = &m.blocks[w];
            for j in 0..b.cols() {
                let mut v = vec![S::zero(); m.dim()];
                for (li, &gi) in idx.iter().enumerate() {
                    v[gi] = b[(li, j)].clone();
                }
                out.push(v);
            }
        }
        out
    }

    /// Intersection, weight by weight.
    pub fn intersect(&self, o: &GradedBasis) -> GradedBasis {
        let mut out = BTreeMap::new();
        for (w, b1) in &self.0 {
            let Some(b2) = o.0.get(w) else { continue };
            // solve b1 x = b2 y
            let stacked = b1.hstack(&b2.neg());
            let ns = stacked.nullspace();
            if ns.is_empty() {
                continue;
            }
            let vecs: Vec<Vec<S>> = ns.iter().map(|z| b1.mul_vec(&z[..b1.cols()])).collect();
            let keep = crate::linalg::independent_subset(b1.rows(), &vecs);
            let cols: Vec<Vec<S>> = keep.into_iter().map(|i| vecs[i].clone()).collect();
            out.insert(*w, Mat::from_cols(b1.rows(), &cols));
        }
        GradedBasis(out)
    }

    pub fn sum(&self, o: &GradedBasis) -> GradedBasis {
        let mut out = BTreeMap::new();
        let keys: std::collections::BTreeSet<Weight> = self.0.keys().chain(o.0.keys()).copied().collect();
        for w in keys {
            let mut vecs = Vec::new();
            let mut rows = 0;
            for b in [self.0.get(&w), o.0.get(&w)].into_iter().flatten() {
                rows = b.rows();
                for j in 0..b.cols() {
                    vecs.push(b.col(j));
                }
            }
            let keep = crate::linalg::independent_subset(rows, &vecs);
            if !keep.is_empty() {
                let cols: Vec<Vec<S>> = keep.into_iter().map(|i| vecs[i].clone()).collect();
                out.insert(w, Mat::from_cols(rows, &cols));
            }
        }
        GradedBasis(out)
    }
}

impl ModuleRep {
    /// Submodule spanned by a graded basis, with its inclusion matrix.
    pub fn submodule(&self, sub: &GradedBasis) -> Result<(ModuleRep, Mat), ModuleError> {
        let (full, _) = sub.complete(self);
        let (t, big) = self.transform(&full);
        let mut keep = Vec::new();
        let mut rest = Vec::new();
        let mut pos = 0;
        for (w, b) in &full.0 {
            let k = sub.0.get(w).map_or(0, |s| s.cols());
            for j in 0..b.cols() {
                if j < k {
                    keep.push(pos + j);
                } else {
                    rest.push(pos + j);
                }
            }
            pos += b.cols();
        }
        for &r in &rest {
            for &c in &keep {
                if !t.x[(r, c)].is_zero() || !t.a[(r, c)].is_zero() {
                    return Err(ModuleError::NotInvariant);
                }
            }
        }
        let all: Vec<usize> = (0..self.dim()).collect();
        Ok((t.select(&keep), big.submatrix(&all, &keep)))
    }

    /// Quotient by a submodule, with the matrix of the projection (in the quotient's basis).
    pub fn quotient(&self, sub: &GradedBasis) -> Result<(ModuleRep, Mat), ModuleError> {
        let (full, _) = sub.complete(self);
        let (t, big) = self.transform(&full);
        let mut keep = Vec::new();
        let mut rest = Vec::new();
        let mut pos = 0;
        for (w, b) in &full.0 {
            let k = sub.0.get(w).map_or(0, |s| s.cols());
            for j in 0..b.cols() {
                if j < k {
                    rest.push(pos + j);
                } else {
                    keep.push(pos + j);
                }
            }
            pos += b.cols();
        }
        for &r in &keep {
            for &c in &rest {
                if !t.x[(r, c)].is_zero() || !t.a[(r, c)].is_zero() {
                    return Err(ModuleError::NotInvariant);
                }
            }
        }
        let inv = big.inverse().expect("completed basis is invertible");
        let all: Vec<usize> = (0..self.dim()).collect();
        Ok((t.select(&keep), inv.submatrix(&keep, &all)))
    }
}

/// Generator matrices in the format of the JSON interface.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRep {
    pub g: Mat,
    pub x: Mat,
    pub e: Vec<Mat>,
    pub a: Vec<Mat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleRepJson {
    pub n: usize,
    pub d: usize,
    pub dim: usize,
    #[serde(rename = "G")]
    pub g: Vec<Vec<ScalarJson>>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<ScalarJson>>,
    pub e: Vec<Vec<Vec<ScalarJson>>>,
    pub a: Vec<Vec<Vec<ScalarJson>>>,
}

fn witness(m: &Mat) -> String {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_zero() {
                return format!("entry ({i},{j}) off by {}", m[(i, j)]);
            }
        }
    }
    String::new()
}

/// Every violated defining relation, with a witness entry.
pub fn check_relations(ctx: &Ctx, f: &FullRep) -> Vec<String> {
    let mut bad = Vec::new();
    let dim = f.x.rows();
    let shapes_ok = [&f.g, &f.x].into_iter().chain(f.e.iter()).chain(f.a.iter()).all(|m| m.rows() == dim && m.cols() == dim)
        && f.e.len() == ctx.n
        && f.a.len() == ctx.n;
    if !shapes_ok {
        return vec!["matrix shapes inconsistent".into()];
    }
    let id = Mat::identity(dim);
    let mut push = |name: String, diff: Mat| {
        if !diff.is_zero() {
            bad.push(format!("{name}: {}", witness(&diff)));
        }
    };
    let n = ctx.n;
    push("G^n = 1".into(), f.g.pow(n as u64).sub(&id));
    push("X^d = 0".into(), f.x.pow(ctx.d as u64));
    push("GX = q^{-1}XG".into(), f.g.mul(&f.x).sub(&f.x.mul(&f.g).scale(&ctx.qp(-1))));
    let mut esum = Mat::zeros(dim, dim);
    for i in 0..n {
        esum = esum.add(&f.e[i]);
        for j in 0..n {
            let p = f.e[i].mul(&f.e[j]);
            let expect = if i == j { f.e[i].clone() } else { Mat::zeros(dim, dim) };
            push(format!("e_{i} e_{j} = δ e_{i}"), p.sub(&expect));
        }
    }
    push("Σ e_i = 1".into(), esum.sub(&id));
    for l in 0..n {
        let l1 = (l + 1) % n;
        push(format!("e_{l} G = G e_{l}"), f.e[l].mul(&f.g).sub(&f.g.mul(&f.e[l])));
        push(format!("a_{l} G = q^{{-1}} G a_{l}"), f.a[l].mul(&f.g).sub(&f.g.mul(&f.a[l]).scale(&ctx.qp(-1))));
        push(format!("e_{l} X = X e_{l1}"), f.e[l].mul(&f.x).sub(&f.x.mul(&f.e[l1])));
        push(format!("a_{l} = e_{l1} a_{l} e_{l}"), f.e[l1].mul(&f.a[l]).mul(&f.e[l]).sub(&f.a[l]));
        let rhs = f
            .x
            .mul(&f.a[l1])
            .scale(&ctx.qp(-1))
            .sub(&f.e[l1].scale(&ctx.qp(-1)))
            .add(&f.g.mul(&f.e[l1]).scale(&ctx.qp(l as i64)));
        push(format!("a_{l} X relation"), f.a[l].mul(&f.x).sub(&rhs));
        let mut path = f.e[l].clone();
        for k in 0..ctx.d {
            path = f.a[(l + k) % n].mul(&path);
        }
        push(format!("γ_{l}^d = 0"), path);
    }
    bad
}

/// Basis of Hom_D(M, N) as dim N × dim M matrices.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub basis: Vec<Mat>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

struct VarLayout {
    /// (weight, offset, rows in N, cols in M)
    blocks: BTreeMap<Weight, (usize, usize, usize)>,
    total: usize,
}

fn var_layout(m: &ModuleRep, n: &ModuleRep) -> VarLayout {
    let mut blocks = BTreeMap::new();
    let mut off = 0;
    for (w, cols) in &m.blocks {
        if let Some(rows) = n.blocks.get(w) {
            blocks.insert(*w, (off, rows.len(), cols.len()));
            off += rows.len() * cols.len();
        }
    }
    VarLayout { blocks, total: off }
}

/// Hom_D(M, N) by solving the intertwining equations for X and A weight block by weight block.
pub fn hom(m: &ModuleRep, n: &ModuleRep) -> Result<HomSpace, ModuleError> {
    same_ctx(m, n)?;
    let lay = var_layout(m, n);
    if lay.total == 0 {
        return Ok(HomSpace { basis: Vec::new() });
    }
    let mut ech = SparseEchelon::new(lay.total);
    let mut rows: Vec<SparseRow<S>> = Vec::new();
    for (w, mcols) in &m.blocks {
        for (op_m, op_n, target) in [(&m.x, &n.x, m.down(*w)), (&m.a, &n.a, m.up(*w))] {
            // equation (F op_M − op_N F)[a,b] = 0, a ∈ N_target, b ∈ M_w
            let Some(nrows) = n.blocks.get(&target) else { continue };
            let src = lay.blocks.get(w);
            let tgt = lay.blocks.get(&target);
            let mt = m.blocks.get(&target);
            for (ai, &ag) in nrows.iter().enumerate() {
                for (bi, &bg) in mcols.iter().enumerate() {
                    let mut row: BTreeMap<usize, S> = BTreeMap::new();
                    if let (Some(&(off, _, nc)), Some(mt)) = (tgt, mt) {
                        for (ci, &cg) in mt.iter().enumerate() {
                            let v = &op_m[(cg, bg)];
                            if !v.is_zero() {
                                let var = off + ai * nc + ci;
                                let e = row.entry(var).or_insert_with(S::zero);
                                *e = e.clone() + v;
                            }
                        }
                    }
                    if let (Some(&(off, _, nc)), Some(nsrc)) = (src, n.blocks.get(w)) {
                        for (ci, &cg) in nsrc.iter().enumerate() {
                            let v = &op_n[(ag, cg)];
                            if !v.is_zero() {
                                let var = off + ci * nc + bi;
                                let e = row.entry(var).or_insert_with(S::zero);
                                *e = e.clone() - v;
                            }
                        }
                    }
                    let r: SparseRow<S> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                    if !r.is_empty() {
                        rows.push(r);
                    }
                }
            }
        }
    }
    ech.insert_all(rows);
    let mut basis = Vec::new();
    for v in ech.nullspace() {
        let mut f = Mat::zeros(n.dim(), m.dim());
        for (var, val) in v {
            let (w, &(off, _, nc)) = lay.blocks.range(..).rev().find(|(_, &(o, _, _))| o <= var).unwrap();
            let local = var - off;
            let (ai, bi) = (local / nc, local % nc);
            f[(n.blocks[w][ai], m.blocks[w][bi])] = val;
        }
        basis.push(f);
    }
    Ok(HomSpace { basis })
}

/// True when the matrix intertwines X and A (weights are preserved by construction).
pub fn is_homomorphism(m: &ModuleRep, n: &ModuleRep, f: &Mat) -> bool {
    f.rows() == n.dim()
        && f.cols() == m.dim()
        && f.mul(&m.x) == n.x.mul(f)
        && f.mul(&m.a) == n.a.mul(f)
        && (0..n.dim()).all(|i| (0..m.dim()).all(|j| f[(i, j)].is_zero() || n.weights[i] == m.weights[j]))
}

fn blockwise_invertible(m: &ModuleRep, n: &ModuleRep, f: &Mat) -> bool {
    if m.weight_multiset() != n.weight_multiset() {
        return false;
    }
    m.blocks.iter().all(|(w, cols)| f.submatrix(&n.blocks[w], cols).rank() == cols.len())
}

/// Seeded search for an isomorphism M → N.
pub fn is_isomorphic(m: &ModuleRep, n: &ModuleRep) -> Option<Mat> {
    is_isomorphic_seeded(m, n, 0)
}

pub fn is_isomorphic_seeded(m: &ModuleRep, n: &ModuleRep, seed: u64) -> Option<Mat> {
    if *m.ctx != *n.ctx || m.dim() != n.dim() || m.weight_multiset() != n.weight_multiset() {
        return None;
    }
    if m.dim() == 0 {
        return Some(Mat::zeros(0, 0));
    }
    let h = hom(m, n).ok()?;
    if h.basis.is_empty() {
        return None;
    }
    for f in &h.basis {
        if blockwise_invertible(m, n, f) {
            return Some(f.clone());
        }
    }
    if h.basis.len() == 1 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1505);
    for _ in 0..32 {
        let mut f = Mat::zeros(n.dim(), m.dim());
        for b in &h.basis {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                f = f.add(&b.scale(&S::int(c)));
            }
        }
        if blockwise_invertible(m, n, &f) {
            return Some(f);
        }
    }
    None
}

/// Trace of the action of G.
pub fn qdim(m: &ModuleRep) -> S {
    (0..m.dim()).fold(S::zero(), |acc, k| acc + m.eigenvalue(k))
}

/// tr(ρ(G) f)
pub fn quantum_trace(m: &ModuleRep, f: &Mat) -> S {
    (0..m.dim()).fold(S::zero(), |acc, k| acc + m.eigenvalue(k) * &f[(k, k)])
}

/// Simples occurring in a weight range: labels (u, j) with L(u,j) meeting a weight of `m`.
fn candidate_simples(m: &ModuleRep) -> Vec<(usize, usize)> {
    let c = &m.ctx;
    let mut out = Vec::new();
    for u in m.components() {
        for j in 0..c.n {
            let nn = c.simple_dim(u, j);
            if (0..nn).any(|t| m.weight_mult(Weight { u, v: (j + t) % c.n }) > 0) {
                out.push((u, j));
            }
        }
    }
    out
}

/// Loewy data of a module.
#[derive(Debug, Clone)]
pub struct LoewyData {
    /// multiplicities of simples L(u,j) in the top
    pub top: BTreeMap<(usize, usize), usize>,
    pub socle: BTreeMap<(usize, usize), usize>,
    pub radical: GradedBasis,
    pub socle_space: GradedBasis,
}

impl LoewyData {
    pub fn top_len(&self) -> usize {
        self.top.values().sum()
    }

    pub fn socle_len(&self) -> usize {
        self.socle.values().sum()
    }
}

/// Top, socle and radical via homs to and from simples.
pub fn top_socle_radical(m: &ModuleRep) -> LoewyData {
    let ctx = m.ctx.clone();
    let mut top = BTreeMap::new();
    let mut socle = BTreeMap::new();
    let mut kernel_rows: BTreeMap<Weight, Vec<Vec<S>>> = BTreeMap::new();
    let mut soc_vecs: Vec<Vec<S>> = Vec::new();
    for (u, j) in candidate_simples(m) {
        let l = crate::catalog::simple(&ctx, u, j);
        let out = hom(m, &l).expect("same context");
        if out.dim() > 0 {
            top.insert((u, j), out.dim());
            for f in &out.basis {
                for (w, cols) in &m.blocks {
                    for r in 0..f.rows() {
                        let row: Vec<S> = cols.iter().map(|&c| f[(r, c)].clone()).collect();
                        if row.iter().any(|x| !x.is_zero()) {
                            kernel_rows.entry(*w).or_default().push(row);
                        }
                    }
                }
            }
        }
        let inn = hom(&l, m).expect("same context");
        if inn.dim() > 0 {
            socle.insert((u, j), inn.dim());
            for f in &inn.basis {
                for c in 0..f.cols() {
                    soc_vecs.push(f.col(c));
                }
            }
        }
    }
    let mut rad = BTreeMap::new();
    for (w, cols) in &m.blocks {
        let k = cols.len();
        let ns = match kernel_rows.get(w) {
            None => (0..k)
                .map(|i| {
                    let mut v = vec![S::zero(); k];
                    v[i] = S::one();
                    v
                })
                .collect(),
            Some(rows) => Mat::from_rows(rows.clone()).nullspace(),
        };
        if !ns.is_empty() {
            rad.insert(*w, Mat::from_cols(k, &ns));
        }
    }
    LoewyData { top, socle, radical: GradedBasis(rad), socle_space: GradedBasis::from_vectors(m, &soc_vecs) }
}

/// Length of the radical series.
pub fn loewy_length(m: &ModuleRep) -> usize {
    let mut cur = m.clone();
    let mut len = 0;
    while cur.dim() > 0 {
        let ld = top_socle_radical(&cur);
        let (sub, _) = cur.submodule(&ld.radical).expect("radical is a submodule");
        cur = sub;
        len += 1;
    }
    len
}

/// Composition length (sum of top and radical layers).
pub fn composition_length(m: &ModuleRep) -> usize {
    let mut cur = m.clone();
    let mut len = 0;
    while cur.dim() > 0 {
        let ld = top_socle_radical(&cur);
        len += ld.top_len();
        let (sub, _) = cur.submodule(&ld.radical).expect("radical is a submodule");
        cur = sub;
    }
    len
}

/// Options for the splitting engine.
#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    pub seed: u64,
    pub degree_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { seed: 0, degree_cap: DEFAULT_DEGREE_CAP }
    }
}

/// A direct summand with its inclusion into the parent (columns in parent coordinates).
#[derive(Debug, Clone)]
pub struct Piece {
    pub module: ModuleRep,
    pub embedding: Mat,
}

fn char_poly_blocks(m: &ModuleRep, f: &Mat) -> FieldPoly {
    let mut p = Poly::one();
    for idx in m.blocks.values() {
        p = p.mul(&f.submatrix(idx, idx).char_poly());
    }
    p
}

/// Fitting decomposition of `m` along `f` if its characteristic polynomial has
/// two coprime factors.
fn fitting_split(m: &ModuleRep, f: &Mat, cfg: &EngineConfig) -> Result<Option<Vec<Piece>>, ModuleError> {
    let cp = char_poly_blocks(m, f);
    let sqf = squarefree_decomposition(&cp).into_iter().fold(Poly::one(), |acc: FieldPoly, (p, _)| acc.mul(&p));
    if sqf.degree().unwrap_or(0) <= 1 {
        return Ok(None);
    }
    let factors = factor_over_field(&sqf, m.ctx.field_order(), cfg.degree_cap)?;
    if factors.len() < 2 {
        return Ok(None);
    }
    let mut pieces = Vec::new();
    for (p, _) in factors {
        let mut basis = BTreeMap::new();
        for (w, idx) in &m.blocks {
            let blk = f.submatrix(idx, idx);
            let pm = blk.eval_poly(&p).pow(idx.len() as u64);
            let ns = pm.nullspace();
            if !ns.is_empty() {
                basis.insert(*w, Mat::from_cols(idx.len(), &ns));
            }
        }
        let gb = GradedBasis(basis);
        if gb.dim() == 0 {
            continue;
        }
        let (sub, emb) = m.submodule(&gb)?;
        pieces.push(Piece { module: sub, embedding: emb });
    }
    Ok(Some(pieces))
}

/// Rank of the trace form on an endomorphism basis, 1 for a local ring with split residue field.
fn trace_form_rank(m: &ModuleRep, basis: &[Mat]) -> usize {
    let k = basis.len();
    let blocks: Vec<Vec<Mat>> = basis.iter().map(|f| m.blocks.values().map(|idx| f.submatrix(idx, idx)).collect()).collect();
    let mut gram = Mat::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let mut t = S::zero();
            for (b1, b2) in blocks[i].iter().zip(&blocks[j]) {
                t = t + b1.mul(b2).trace();
            }
            gram[(i, j)] = t.clone();
            gram[(j, i)] = t;
        }
    }
    gram.rank()
}

/// Split into indecomposable summands by repeated Fitting decompositions.
pub fn split_indecomposables(m: &ModuleRep, cfg: &EngineConfig) -> Result<Vec<Piece>, ModuleError> {
    let mut out = Vec::new();
    // central idempotents first
    for u in m.components() {
        let idx = m.component_indices(u);
        let sub = m.select(&idx);
        let mut emb = Mat::zeros(m.dim(), idx.len());
        for (j, &g) in idx.iter().enumerate() {
            emb[(g, j)] = S::one();
        }
        split_rec(&sub, &emb, cfg, &mut out, 0)?;
    }
    Ok(out)
}

fn split_rec(m: &ModuleRep, emb: &Mat, cfg: &EngineConfig, out: &mut Vec<Piece>, depth: u64) -> Result<(), ModuleError> {
    if m.dim() == 0 {
        return Ok(());
    }
    let end = hom(m, m)?;
    if end.dim() > 1 {
        let mut tried: Vec<Mat> = end.basis.clone();
        let mut local_checked = false;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(depth.wrapping_mul(0x9e37_79b9)));
        let mut k = 0;
        loop {
            if k == tried.len() {
                if !local_checked {
                    local_checked = true;
                    if trace_form_rank(m, &end.basis) <= 1 {
                        break;
                    }
                }
                if k >= end.dim() + 24 {
                    break;
                }
                let mut f = Mat::zeros(m.dim(), m.dim());
                for b in &end.basis {
                    let c: i64 = rng.gen_range(-4..=4);
                    if c != 0 {
                        f = f.add(&b.scale(&S::int(c)));
                    }
                }
                tried.push(f);
            }
            if let Some(pieces) = fitting_split(m, &tried[k], cfg)? {
                for p in pieces {
                    let e = emb.mul(&p.embedding);
                    split_rec(&p.module, &e, cfg, out, depth + 1)?;
                }
                return Ok(());
            }
            k += 1;
        }
    }
    out.push(Piece { module: m.clone(), embedding: emb.clone() });
    Ok(())
}

/// One identified summand with its isomorphism from the catalog model.
#[derive(Debug, Clone)]
pub struct CertifiedSummand {
    pub label: IndecLabel,
    /// iso: model → piece (piece coordinates)
    pub iso: Mat,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    /// columns: bases of the summands in order
    pub change_of_basis: Mat,
    pub sizes: Vec<usize>,
    pub summands: Vec<CertifiedSummand>,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub summands: Vec<(IndecLabel, usize)>,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummandJson {
    pub label: String,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub summands: Vec<SummandJson>,
    pub certified: bool,
}

impl Decomposition {
    pub fn from_labels(labels: Vec<IndecLabel>) -> Self {
        let mut map: BTreeMap<IndecLabel, usize> = BTreeMap::new();
        for l in labels {
            *map.entry(l).or_default() += 1;
        }
        Decomposition { summands: map.into_iter().collect(), certificate: None }
    }

    pub fn labels(&self) -> Vec<IndecLabel> {
        let mut v = Vec::new();
        for (l, k) in &self.summands {
            for _ in 0..*k {
                v.push(l.clone());
            }
        }
        v
    }

    pub fn to_json(&self, ctx: &Ctx) -> DecompositionJson {
        DecompositionJson {
            summands: self.summands.iter().map(|(l, k)| SummandJson { label: l.render(ctx), multiplicity: *k }).collect(),
            certified: self.certificate.is_some(),
        }
    }

    pub fn render(&self, ctx: &Ctx) -> String {
        if self.summands.is_empty() {
            return "0".into();
        }
        self.summands
            .iter()
            .map(|(l, k)| if *k == 1 { l.render(ctx) } else { format!("{}^{}", l.render(ctx), k) })
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }

    /// Drop projective summands.
    pub fn non_projective(&self, ctx: &Ctx) -> Decomposition {
        Decomposition {
            summands: self.summands.iter().filter(|(l, _)| !l.is_projective(ctx)).cloned().collect(),
            certificate: None,
        }
    }

    pub fn total_dim(&self, ctx: &Ctx) -> usize {
        self.summands.iter().map(|(l, k)| l.dim(ctx) * k).sum()
    }

    pub fn same_labels(&self, o: &Decomposition) -> bool {
        self.summands == o.summands
    }
}

impl Certificate {
    /// Exact re-verification against the catalog models.
    pub fn verify(&self, m: &ModuleRep) -> bool {
        let ctx = m.ctx();
        let Some(inv) = self.change_of_basis.inverse() else { return false };
        let cx = inv.mul(&m.x).mul(&self.change_of_basis);
        let ca = inv.mul(&m.a).mul(&self.change_of_basis);
        let mut off = 0;
        let mut ranges = Vec::new();
        for &s in &self.sizes {
            ranges.push((off, off + s));
            off += s;
        }
        if off != m.dim() {
            return false;
        }
        for (bi, &(s0, s1)) in ranges.iter().enumerate() {
            for (bj, &(t0, t1)) in ranges.iter().enumerate() {
                if bi == bj {
                    continue;
                }
                for i in s0..s1 {
                    for j in t0..t1 {
                        if !cx[(i, j)].is_zero() || !ca[(i, j)].is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        for (k, cs) in self.summands.iter().enumerate() {
            let (s0, s1) = ranges[k];
            let idx: Vec<usize> = (s0..s1).collect();
            let model = match crate::catalog::build(ctx, &cs.label) {
                Ok(mm) => mm,
                Err(_) => return false,
            };
            let bx = cx.submatrix(&idx, &idx);
            let ba = ca.submatrix(&idx, &idx);
            if cs.iso.mul(&model.x) != bx.mul(&cs.iso) || cs.iso.mul(&model.a) != ba.mul(&cs.iso) {
                return false;
            }
            if cs.iso.inverse().is_none() {
                return false;
            }
            // weights of the block must match the model through the iso
            let cols: Vec<Vec<S>> = (0..model.dim())
                .map(|c| {
                    let mut v = vec![S::zero(); m.dim()];
                    for (k, x) in cs.iso.col(c).into_iter().enumerate() {
                        v[s0 + k] = x;
                    }
                    self.change_of_basis.mul_vec(&v)
                })
                .collect();
            for (c, v) in cols.iter().enumerate() {
                for (r, x) in v.iter().enumerate() {
                    if !x.is_zero() && m.weights[r] != model.weights[c] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Full decomposition with identification and certificate.
pub fn decompose(m: &ModuleRep) -> Result<Decomposition, ModuleError> {
    decompose_with(m, &EngineConfig::default())
}

pub fn decompose_with(m: &ModuleRep, cfg: &EngineConfig) -> Result<Decomposition, ModuleError> {
    let pieces = split_indecomposables(m, cfg)?;
    let mut items: Vec<(IndecLabel, Piece, Mat)> = Vec::new();
    for p in pieces {
        let (label, iso) = crate::catalog::identify(&p.module)?;
        items.push((label, p, iso));
    }
    items.sort_by(|a, b| a.0.cmp(&b.0));
    let mut cols: Vec<Vec<S>> = Vec::new();
    let mut sizes = Vec::new();
    let mut summands = Vec::new();
    for (label, p, iso) in &items {
        for c in 0..p.embedding.cols() {
            cols.push(p.embedding.col(c));
        }
        sizes.push(p.module.dim());
        summands.push(CertifiedSummand { label: label.clone(), iso: iso.clone() });
    }
    let cert = Certificate { change_of_basis: Mat::from_cols(m.dim(), &cols), sizes, summands };
    let certified = cert.verify(m);
    let mut d = Decomposition::from_labels(items.into_iter().map(|(l, _, _)| l).collect());
    if certified {
        d.certificate = Some(cert);
    } else {
        return Err(ModuleError::Inconclusive("certificate failed to verify".into()));
    }
    Ok(d)
}
