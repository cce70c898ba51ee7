//! Syzygies, Auslander-Reiten sequences, Ω-periodicity and AR-component windows.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{block, build, projective, CatalogError};
use crate::cyclo::CycloScalar;
use crate::dalgebra::Ctx;
use crate::label::IndecLabel;
use crate::linalg::{Matrix, SparseEchelon};
use crate::modrep::{hom, is_homomorphism, is_isomorphic, top_socle_radical, GradedBasis, ModuleError, ModuleRep};

type S = CycloScalar;
type Mat = Matrix<S>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArError {
    #[error("{0}")]
    Module(#[from] ModuleError),
    #[error("{0}")]
    Catalog(#[from] CatalogError),
    #[error("{0} is projective; it ends no Auslander-Reiten sequence")]
    Projective(String),
    #[error("sequence check failed: {0}")]
    Failed(String),
}

/// Vector at weight (u,j) of P(u,j) generating it.
fn cover_generator(ctx: &Ctx, u: usize, j: usize) -> (ModuleRep, Vec<S>) {
    let p = projective(ctx, u, j);
    let rad = top_socle_radical(&p).radical;
    let w = crate::modrep::Weight { u, v: j };
    let idx = p.weight_blocks()[&w].clone();
    let mut ech = SparseEchelon::new(idx.len());
    if let Some(b) = rad.0.get(&w) {
        for c in 0..b.cols() {
            ech.insert(crate::linalg::dense_to_sparse(&b.col(c)));
        }
    }
    for (li, &g) in idx.iter().enumerate() {
        if ech.insert(vec![(li, S::one())]) {
            let mut v = vec![S::zero(); p.dim()];
            v[g] = S::one();
            return (p, v);
        }
    }
    unreachable!("projective cover generator exists")
}

/// Projective cover P → M with its matrix.
pub fn projective_cover(m: &ModuleRep) -> Result<(ModuleRep, Mat), ModuleError> {
    let ctx = m.ctx().clone();
    let ld = top_socle_radical(m);
    let mut summands = Vec::new();
    let mut maps: Vec<Mat> = Vec::new();
    for (&(u, j), &mult) in &ld.top {
        let (p, y) = cover_generator(&ctx, u, j);
        let w = crate::modrep::Weight { u, v: j };
        let idx = m.weight_blocks()[&w].clone();
        // images of y, independent modulo the radical
        let mut ech = SparseEchelon::new(idx.len());
        if let Some(b) = ld.radical.0.get(&w) {
            for c in 0..b.cols() {
                ech.insert(crate::linalg::dense_to_sparse(&b.col(c)));
            }
        }
        let h = hom(&p, m)?;
        let mut picked = 0;
        for f in &h.basis {
            let img = f.mul_vec(&y);
            let local: Vec<S> = idx.iter().map(|&g| img[g].clone()).collect();
            if ech.insert(crate::linalg::dense_to_sparse(&local)) {
                summands.push(p.clone());
                maps.push(f.clone());
                picked += 1;
                if picked == mult {
                    break;
                }
            }
        }
        if picked != mult {
            return Err(ModuleError::Invalid("projective cover search failed".into()));
        }
    }
    let refs: Vec<&ModuleRep> = summands.iter().collect();
    let cover = ModuleRep::direct_sum_all(&ctx, &refs);
    let f = maps.iter().skip(1).fold(maps.first().cloned().unwrap_or_else(|| Mat::zeros(m.dim(), 0)), |acc, g| acc.hstack(g));
    if f.rank() != m.dim() {
        return Err(ModuleError::Invalid("projective cover map is not surjective".into()));
    }
    Ok((cover, f))
}

/// Kernel of a weight-preserving module map, as a submodule of the source.
pub fn kernel(src: &ModuleRep, f: &Mat) -> Result<ModuleRep, ModuleError> {
    let mut vecs = Vec::new();
    for idx in src.weight_blocks().values() {
        let cols: Vec<usize> = idx.clone();
        let all: Vec<usize> = (0..f.rows()).collect();
        let blk = f.submatrix(&all, &cols);
        for v in blk.nullspace() {
            let mut g = vec![S::zero(); src.dim()];
            for (li, &gi) in idx.iter().enumerate() {
                g[gi] = v[li].clone();
            }
            vecs.push(g);
        }
    }
    let gb = GradedBasis::from_vectors(src, &vecs);
    Ok(src.submodule(&gb)?.0)
}

/// Ω^k(M): kernels of projective covers for k > 0, duals of those of M* for k < 0.
pub fn omega(m: &ModuleRep, k: i64) -> Result<ModuleRep, ModuleError> {
    let mut cur = m.clone();
    for _ in 0..k.unsigned_abs() {
        if k > 0 {
            let (p, f) = projective_cover(&cur)?;
            cur = kernel(&p, &f)?;
        } else {
            let dual = cur.dual();
            let (p, f) = projective_cover(&dual)?;
            cur = kernel(&p, &f)?.dual();
        }
    }
    Ok(cur)
}

/// A verified short exact sequence 0 → left → middle → right → 0.
#[derive(Debug, Clone)]
pub struct ArSequence {
    pub left_label: Vec<IndecLabel>,
    pub middle_labels: Vec<IndecLabel>,
    pub right_label: IndecLabel,
    pub left: ModuleRep,
    pub middle: ModuleRep,
    pub right: ModuleRep,
    pub injection: Mat,
    pub surjection: Mat,
}

/// Labels of τ(M) and of the middle term of the sequence ending at M.
/// For a simple L_p this is the standard sequence 0 → rad P_p → rad P_p/soc P_p ⊕ P_p → P_p/soc P_p → 0,
/// reported with right term Ω^{-1}(L_p).
pub fn ar_labels(ctx: &Ctx, label: &IndecLabel) -> Result<(IndecLabel, IndecLabel, Vec<IndecLabel>), ArError> {
    let label = label.canonical(ctx).map_err(CatalogError::from)?;
    if label.is_projective(ctx) {
        return Err(ArError::Projective(label.render(ctx)));
    }
    let omega_label = |u: usize, j: usize, k: i64| -> IndecLabel { IndecLabel::Syzygy { k, u, j }.canonical(ctx).unwrap() };
    Ok(match &label {
        IndecLabel::Simple { u, j } => {
            let blk = block(ctx, *u, *j);
            let p = blk.position(*j).unwrap() as i64;
            let right = omega_label(*u, *j, -1);
            let left = omega_label(*u, *j, 1);
            let mut mid = vec![
                IndecLabel::Simple { u: *u, j: blk.vertex(p - 1) },
                IndecLabel::Simple { u: *u, j: blk.vertex(p + 1) },
                IndecLabel::Proj { u: *u, j: *j },
            ];
            mid.sort();
            (right, left, mid)
        }
        IndecLabel::Syzygy { k, u, j } => {
            let blk = block(ctx, *u, *j);
            let p = blk.position(*j).unwrap() as i64;
            let mut mid = vec![omega_label(*u, blk.vertex(p - 1), k + 1), omega_label(*u, blk.vertex(p + 1), k + 1)];
            if *k == -1 {
                mid.push(IndecLabel::Proj { u: *u, j: *j });
            }
            mid.sort();
            (label.clone(), omega_label(*u, *j, k + 2), mid)
        }
        IndecLabel::StringPlus { u, j, l } | IndecLabel::StringMinus { u, j, l } => {
            let plus = matches!(label, IndecLabel::StringPlus { .. });
            let blk = block(ctx, *u, *j);
            let p = blk.position(*j).unwrap() as i64;
            let tj = blk.vertex(if plus { p - 2 } else { p + 2 });
            let mk = |j: usize, l: usize| if plus { IndecLabel::StringPlus { u: *u, j, l } } else { IndecLabel::StringMinus { u: *u, j, l } };
            let mut mid = vec![mk(tj, l + 1)];
            if *l > 1 {
                mid.push(mk(*j, l - 1));
            }
            (label.clone(), mk(tj, *l), mid)
        }
        IndecLabel::BandPlus { u, j, l, lambda } | IndecLabel::BandMinus { u, j, l, lambda } => {
            let plus = matches!(label, IndecLabel::BandPlus { .. });
            let mk = |l: usize| {
                if plus {
                    IndecLabel::BandPlus { u: *u, j: *j, l, lambda: lambda.clone() }
                } else {
                    IndecLabel::BandMinus { u: *u, j: *j, l, lambda: lambda.clone() }
                }
            };
            let mut mid = vec![mk(l + 1)];
            if *l > 1 {
                mid.push(mk(l - 1));
            }
            (label.clone(), label.clone(), mid)
        }
        IndecLabel::Proj { .. } => unreachable!(),
    })
    .map(|(right, left, mid)| (right, left, mid))
}

fn ranks_ok(f: &Mat, g: &Mat, l: usize, r: usize) -> bool {
    f.rank() == l && g.rank() == r && g.mul(f).is_zero()
}

/// True when some s: R → E has g s = id_R.
fn splits(right: &ModuleRep, middle: &ModuleRep, g: &Mat) -> Result<bool, ModuleError> {
    let h = hom(right, middle)?;
    if h.basis.is_empty() {
        return Ok(false);
    }
    // solve Σ c_k g s_k = I
    let dim = right.dim();
    let cols: Vec<Vec<S>> = h.basis.iter().map(|s| g.mul(s).data().to_vec()).collect();
    let a = Mat::from_cols(dim * dim, &cols);
    let target = Mat::identity(dim).data().to_vec();
    Ok(a.solve(&target).is_some())
}

/// Build and check the sequence ending at `label`: exactness, non-splitness, τ = Ω².
pub fn verify_ar_sequence(ctx: &Ctx, label: &IndecLabel, seed: u64) -> Result<ArSequence, ArError> {
    use rand::{Rng, SeedableRng};
    let (right_label, left_label, middle_labels) = ar_labels(ctx, label)?;
    let right = build(ctx, &right_label)?;
    let left = build(ctx, &left_label)?;
    let parts: Vec<ModuleRep> = middle_labels.iter().map(|l| build(ctx, l)).collect::<Result<_, _>>()?;
    let refs: Vec<&ModuleRep> = parts.iter().collect();
    let middle = ModuleRep::direct_sum_all(ctx, &refs);
    if middle.dim() != left.dim() + right.dim() {
        return Err(ArError::Failed(format!("dimensions {} ≠ {} + {}", middle.dim(), left.dim(), right.dim())));
    }
    let tau = omega(&right, 2)?;
    if is_isomorphic(&tau, &left).is_none() {
        return Err(ArError::Failed("left term is not Ω² of the right term".into()));
    }
    let hg = hom(&middle, &right)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
    for attempt in 0..48 {
        let mut g = Mat::zeros(right.dim(), middle.dim());
        for b in &hg.basis {
            let c: i64 = if attempt == 0 { 1 } else { rng.gen_range(-3..=3) };
            if c != 0 {
                g = g.add(&b.scale(&S::int(c)));
            }
        }
        if g.rank() != right.dim() {
            continue;
        }
        let ker = kernel(&middle, &g)?;
        let Some(iso) = is_isomorphic(&left, &ker) else { continue };
        // inclusion of the kernel, in middle coordinates
        let kb = kernel_basis(&middle, &g);
        let f = kb.mul(&iso);
        if !ranks_ok(&f, &g, left.dim(), right.dim()) || !is_homomorphism(&left, &middle, &f) || !is_homomorphism(&middle, &right, &g) {
            continue;
        }
        if splits(&right, &middle, &g)? {
            continue;
        }
        return Ok(ArSequence {
            left_label: vec![left_label],
            middle_labels,
            right_label,
            left,
            middle,
            right,
            injection: f,
            surjection: g,
        });
    }
    Err(ArError::Failed(format!("no non-split exact sequence found ending at {}", right_label.render(ctx))))
}

/// Columns: the basis used by `kernel` for the kernel submodule.
fn kernel_basis(src: &ModuleRep, f: &Mat) -> Mat {
    let mut vecs = Vec::new();
    for idx in src.weight_blocks().values() {
        let all: Vec<usize> = (0..f.rows()).collect();
        let blk = f.submatrix(&all, idx);
        for v in blk.nullspace() {
            let mut g = vec![S::zero(); src.dim()];
            for (li, &gi) in idx.iter().enumerate() {
                g[gi] = v[li].clone();
            }
            vecs.push(g);
        }
    }
    let gb = GradedBasis::from_vectors(src, &vecs);
    let (_, emb) = src.submodule(&gb).expect("kernel is a submodule");
    emb
}

/// Least p ≤ bound with Ω^p(M) ≅ M.
pub fn periodicity(ctx: &Ctx, label: &IndecLabel, bound: usize) -> Result<Option<usize>, ArError> {
    let m = build(ctx, label)?;
    let mut cur = m.clone();
    for p in 1..=bound {
        cur = omega(&cur, 1)?;
        if cur.dim() == m.dim() && is_isomorphic(&cur, &m).is_some() {
            return Ok(Some(p));
        }
        if cur.dim() == 0 {
            return Ok(None);
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentEdge {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentWindow {
    pub seed: String,
    pub kind: String,
    pub nodes: Vec<String>,
    pub edges: Vec<ComponentEdge>,
    /// (M, τM) pairs
    pub translations: Vec<(String, String)>,
    pub identifications: Vec<String>,
}

/// Window of radius `radius` (in AR-sequence steps) around a seed.
pub fn emit_component(ctx: &Ctx, seed: &IndecLabel, radius: usize) -> Result<ComponentWindow, ArError> {
    let seed = seed.canonical(ctx).map_err(CatalogError::from)?;
    if seed.is_projective(ctx) {
        return Err(ArError::Projective(seed.render(ctx)));
    }
    let r = 2 * ctx.n / ctx.d;
    let kind = match &seed {
        IndecLabel::BandPlus { .. } | IndecLabel::BandMinus { .. } => "tube of rank 1".to_string(),
        IndecLabel::StringPlus { .. } | IndecLabel::StringMinus { .. } => format!("tube of rank {}", ctx.n / ctx.d),
        _ => format!("cylinder over the Euclidean tree of type A~{}", r - 1),
    };
    let mut nodes: BTreeSet<IndecLabel> = BTreeSet::new();
    let mut edges: BTreeSet<(IndecLabel, IndecLabel)> = BTreeSet::new();
    let mut trans: BTreeMap<IndecLabel, IndecLabel> = BTreeMap::new();
    let mut frontier = vec![seed.clone()];
    nodes.insert(seed.clone());
    for _ in 0..radius {
        let mut next = Vec::new();
        for m in frontier {
            let Ok((right, left, mids)) = ar_labels(ctx, &m) else { continue };
            trans.insert(right.clone(), left.clone());
            for x in [&right, &left] {
                if nodes.insert(x.clone()) {
                    next.push(x.clone());
                }
            }
            for e in mids {
                edges.insert((left.clone(), e.clone()));
                edges.insert((e.clone(), right.clone()));
                if nodes.insert(e.clone()) && !e.is_projective(ctx) {
                    next.push(e);
                }
            }
        }
        frontier = next;
    }
    let mut ident = Vec::new();
    match &seed {
        IndecLabel::BandPlus { .. } | IndecLabel::BandMinus { .. } => ident.push("τ fixes every module: the component is a tube of rank 1".into()),
        IndecLabel::StringPlus { .. } | IndecLabel::StringMinus { .. } => {
            ident.push(format!("τ has order {} on the mouth: tube of rank {}", ctx.n / ctx.d, ctx.n / ctx.d))
        }
        _ => ident.push(format!("τ = Ω²; the component is a cylinder of width {r}")),
    }
    Ok(ComponentWindow {
        seed: seed.render(ctx),
        kind,
        nodes: nodes.iter().map(|l| l.render(ctx)).collect(),
        edges: edges.iter().map(|(a, b)| ComponentEdge { from: a.render(ctx), to: b.render(ctx) }).collect(),
        translations: trans.iter().map(|(a, b)| (a.render(ctx), b.render(ctx))).collect(),
        identifications: ident,
    })
}

impl ComponentWindow {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph ar {\n  rankdir=LR;\n");
        s.push_str(&format!("  label=\"{} ({})\";\n", self.seed, self.kind));
        for n in &self.nodes {
            s.push_str(&format!("  \"{n}\";\n"));
        }
        for e in &self.edges {
            s.push_str(&format!("  \"{}\" -> \"{}\";\n", e.from, e.to));
        }
        for (m, t) in &self.translations {
            s.push_str(&format!("  \"{m}\" -> \"{t}\" [style=dashed, label=\"τ\"];\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dalgebra::DoubleContext;

    fn lab(ctx: &Ctx, s: &str) -> IndecLabel {
        IndecLabel::parse(ctx, s).unwrap()
    }

    #[test]
    fn omega_small() {
        let ctx = DoubleContext::new(2, 2).unwrap();
        let l = build(&ctx, &lab(&ctx, "L(0,0)")).unwrap();
        let o = omega(&l, 1).unwrap();
        assert_eq!(o.dim(), 3);
        assert!(is_isomorphic(&o, &build(&ctx, &lab(&ctx, "O(1,0,0)")).unwrap()).is_some());
        let om = omega(&l, -1).unwrap();
        assert!(is_isomorphic(&om, &build(&ctx, &lab(&ctx, "O(-1,0,0)")).unwrap()).is_some());
        assert_eq!(omega(&projective(&ctx, 0, 0), 1).unwrap().dim(), 0);
    }

    #[test]
    fn omega_of_strings_and_bands() {
        let ctx = DoubleContext::new(3, 3).unwrap();
        let blk = block(&ctx, 0, 1);
        let i = blk.orbit[0];
        let m = build(&ctx, &IndecLabel::StringPlus { u: 0, j: i, l: 1 }).unwrap();
        let expect = build(&ctx, &IndecLabel::StringPlus { u: 0, j: ctx.sigma_inv(0, i), l: 1 }).unwrap();
        assert!(is_isomorphic(&omega(&m, 1).unwrap(), &expect).is_some());
        let c = build(&ctx, &lab(&ctx, &format!("C+(0,{i},1,q)"))).unwrap();
        let neg = -ctx.q().clone();
        let cm = crate::catalog::band(&ctx, false, 0, i, 1, &neg).unwrap();
        assert!(is_isomorphic(&omega(&c, 1).unwrap(), &cm).is_some());
    }

    #[test]
    fn standard_sequence() {
        let ctx = DoubleContext::new(3, 3).unwrap();
        let seq = verify_ar_sequence(&ctx, &lab(&ctx, "L(0,1)"), 0).unwrap();
        assert_eq!(seq.middle.dim(), seq.left.dim() + seq.right.dim());
    }

    #[test]
    fn periods() {
        let ctx = DoubleContext::new(3, 3).unwrap();
        assert_eq!(periodicity(&ctx, &lab(&ctx, "M+(0,0,1)"), 4).unwrap(), Some(2));
        assert_eq!(periodicity(&ctx, &lab(&ctx, "C+(0,0,1,1)"), 4).unwrap(), Some(2));
        assert_eq!(periodicity(&ctx, &lab(&ctx, "L(0,0)"), 4).unwrap(), None);
    }
}
