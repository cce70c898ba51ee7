//! Closed-form tensor product decompositions, the band procedure, splitting
//! trace modules and Green-ring tables.
//!
//! Closed forms report labels only. String and odd-length formulas hold up to
//! projective summands, which the result flags.

use std::ops::Range;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{build, CatalogError};
use crate::dalgebra::Ctx;
use crate::label::{IndecLabel, LabelError};
use crate::modrep::{decompose_with, hom, quantum_trace, Decomposition, EngineConfig, ModuleError, ModuleRep, SummandJson};

#[derive(Debug, Error)]
pub enum TensorError {
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("no closed form for {0} ⊗ {1}")]
    NoClosedForm(String, String),
    #[error("dimension audit failed: {0}")]
    Audit(String),
    #[error("table cells failed: {}", .0.join("; "))]
    Cells(Vec<String>),
}

/// ϖ, ς and the θ-ranges for L(u,i)⊗L(v,j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorRange {
    pub varpi: i64,
    pub varsigma: i64,
    /// θ with a simple summand L(u+v, i+j+θ); also the index set of the string theorems
    pub simple_range: Range<i64>,
    /// θ with a projective summand P(u+v, i+j+θ)
    pub projective_range: Range<i64>,
}

impl TensorRange {
    pub fn new(ctx: &Ctx, u: usize, i: usize, v: usize, j: usize) -> Self {
        Self::from_dims(ctx.d, ctx.simple_dim(u, i), ctx.simple_dim(v, j))
    }

    pub fn from_dims(d: usize, n1: usize, n2: usize) -> Self {
        let varpi = (n1 + n2) as i64 - (d as i64 + 1);
        let varsigma = (varpi + 1).div_euclid(2);
        let top = n1.min(n2) as i64;
        if varpi < 0 {
            TensorRange { varpi, varsigma, simple_range: 0..top, projective_range: 0..0 }
        } else {
            TensorRange { varpi, varsigma, simple_range: varpi + 1..top.max(varpi + 1), projective_range: varsigma..varpi + 1 }
        }
    }

    pub fn index_set(&self) -> Vec<i64> {
        self.simple_range.clone().collect()
    }
}

/// Provenance of a tensor result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Procedure,
    Engine,
}

#[derive(Debug, Clone)]
pub struct TensorResult {
    pub decomposition: Decomposition,
    /// projective summands omitted
    pub modulo_projectives: bool,
    pub source: Source,
}

impl TensorResult {
    /// Compare with an engine decomposition, honoring the projective flag.
    pub fn matches(&self, ctx: &Ctx, engine: &Decomposition) -> bool {
        if self.modulo_projectives {
            self.decomposition.non_projective(ctx).same_labels(&engine.non_projective(ctx))
        } else {
            self.decomposition.same_labels(engine)
        }
    }
}

fn vertex(ctx: &Ctx, k: i64) -> usize {
    ctx.zn(k)
}

fn sigma_pow(ctx: &Ctx, u: usize, j: usize, k: i64) -> usize {
    let mut x = j;
    for _ in 0..k.unsigned_abs() {
        x = if k > 0 { ctx.sigma(u, x) } else { ctx.sigma_inv(u, x) };
    }
    x
}

fn canon(ctx: &Ctx, labels: Vec<IndecLabel>) -> Result<Decomposition, LabelError> {
    let v = labels.into_iter().map(|l| l.canonical(ctx)).collect::<Result<Vec<_>, _>>()?;
    Ok(Decomposition::from_labels(v))
}

/// L(u,i)⊗L(v,j), exact including projectives.
pub fn simple_tensor_closed_form(ctx: &Ctx, u: usize, i: usize, v: usize, j: usize) -> Decomposition {
    let w = (u + v) % ctx.n;
    let (n1, n2) = (ctx.simple_dim(u, i), ctx.simple_dim(v, j));
    let base = (i + j) as i64;
    let mut labels = Vec::new();
    if ctx.is_qtype(w) && (!ctx.is_qtype(u) || !ctx.is_qtype(v)) {
        // a factor is projective, so is the product
        labels = projective_window(ctx, w, base, n1.min(n2)).expect("X-kernel window has a unique cover");
    } else if !ctx.is_qtype(w) {
        // every simple of the target component is projective of dimension d
        for t in 0..n1.min(n2) as i64 {
            labels.push(IndecLabel::Simple { u: w, j: vertex(ctx, base + t) });
        }
    } else {
        let r = TensorRange::from_dims(ctx.d, n1, n2);
        for t in r.simple_range.clone() {
            labels.push(IndecLabel::Simple { u: w, j: vertex(ctx, base + t) });
        }
        for t in r.projective_range.clone() {
            labels.push(IndecLabel::Proj { u: w, j: vertex(ctx, base + t) });
        }
    }
    let out = canon(ctx, labels).expect("closed-form labels are valid");
    assert_eq!(out.total_dim(ctx), n1 * n2, "dimension audit for L({u},{i})⊗L({v},{j})");
    out
}

/// The projective module of component w whose X-kernel sits at weights
/// base..base+len: L(w,k) projective simple covers {k}, P(w,k) covers
/// {k, k−(d−N_k)}. None unless the cover exists and is unique.
pub fn projective_window(ctx: &Ctx, w: usize, base: i64, len: usize) -> Option<Vec<IndecLabel>> {
    let window: Vec<usize> = (0..len as i64).map(|t| vertex(ctx, base + t)).collect();
    let mut pieces: Vec<(IndecLabel, Vec<usize>)> = Vec::new();
    for &k in &window {
        let nk = ctx.simple_dim(w, k);
        if nk == ctx.d {
            pieces.push((IndecLabel::Simple { u: w, j: k }, vec![k]));
        } else {
            let partner = vertex(ctx, k as i64 - (ctx.d - nk) as i64);
            if window.contains(&partner) {
                pieces.push((IndecLabel::Proj { u: w, j: k }, vec![k, partner]));
            }
        }
    }
    fn cover(rest: &[usize], pieces: &[(IndecLabel, Vec<usize>)], used: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(&first) = rest.iter().find(|x| !used.iter().any(|&p| pieces[p].1.contains(x))) else {
            out.push(used.clone());
            return;
        };
        for (pi, (_, ws)) in pieces.iter().enumerate() {
            if ws.contains(&first) && ws.iter().all(|x| !used.iter().any(|&p| pieces[p].1.contains(x))) {
                used.push(pi);
                cover(rest, pieces, used, out);
                used.pop();
            }
        }
    }
    let mut sols = Vec::new();
    cover(&window, &pieces, &mut Vec::new(), &mut sols);
    if sols.len() != 1 {
        return None;
    }
    Some(sols[0].iter().map(|&p| pieces[p].0.clone()).collect())
}

/// Socle multiset of L(u,i)⊗L(v,j) as (component, vertex) pairs.
pub fn simple_tensor_socle(ctx: &Ctx, u: usize, i: usize, v: usize, j: usize) -> Vec<(usize, usize)> {
    let w = (u + v) % ctx.n;
    let (n1, n2) = (ctx.simple_dim(u, i), ctx.simple_dim(v, j));
    if ctx.is_qtype(w) && (!ctx.is_qtype(u) || !ctx.is_qtype(v)) {
        let cover = projective_window(ctx, w, (i + j) as i64, n1.min(n2)).expect("X-kernel window has a unique cover");
        return cover.into_iter().map(|l| (w, if let IndecLabel::Simple { j, .. } | IndecLabel::Proj { j, .. } = l { j } else { unreachable!() })).collect();
    }
    let r = TensorRange::from_dims(ctx.d, n1, n2);
    let lo = if ctx.is_qtype(w) { r.varsigma.max(0) } else { 0 };
    (lo..n1.min(n2) as i64).map(|t| (w, vertex(ctx, (i + j) as i64 + t))).collect()
}

fn string_parts(l: &IndecLabel) -> Option<(bool, usize, usize, usize)> {
    match *l {
        IndecLabel::StringPlus { u, j, l } => Some((true, u, j, l)),
        IndecLabel::StringMinus { u, j, l } => Some((false, u, j, l)),
        _ => None,
    }
}

fn string_label(plus: bool, u: usize, j: usize, l: usize) -> IndecLabel {
    if plus {
        IndecLabel::StringPlus { u, j, l }
    } else {
        IndecLabel::StringMinus { u, j, l }
    }
}

/// M^{±}_{2ℓ}(u,i)⊗L(v,j) modulo projectives.
pub fn string_simple_closed_form(ctx: &Ctx, plus: bool, u: usize, i: usize, l: usize, v: usize, j: usize) -> Decomposition {
    let w = (u + v) % ctx.n;
    if !ctx.is_qtype(w) || ctx.simple_dim(v, j) == ctx.d {
        return Decomposition::from_labels(Vec::new());
    }
    let r = TensorRange::new(ctx, u, i, v, j);
    let labels = r
        .index_set()
        .into_iter()
        .map(|t| string_label(plus, w, vertex(ctx, (i + j) as i64 + t), l))
        .collect();
    canon(ctx, labels).expect("string labels are valid")
}

/// M^{s₁}_{2ℓ}(u,i)⊗M^{s₂}_{2t}(v,j) modulo projectives.
#[allow(clippy::too_many_arguments)]
pub fn string_string_closed_form(ctx: &Ctx, plus1: bool, u: usize, i: usize, l: usize, plus2: bool, v: usize, j: usize, t: usize) -> Decomposition {
    let w = (u + v) % ctx.n;
    if plus1 != plus2 || !ctx.is_qtype(w) {
        return Decomposition::from_labels(Vec::new());
    }
    let r = TensorRange::new(ctx, u, i, v, j);
    let sgn = if plus1 { 1 } else { -1 };
    let mut labels = Vec::new();
    for th in r.index_set() {
        let base = vertex(ctx, (i + j) as i64 + th);
        for p in 0..2 * l as i64 {
            for rr in 0..t as i64 {
                labels.push(string_label(plus1, w, sigma_pow(ctx, w, base, sgn * (p + 2 * rr)), 1));
            }
        }
    }
    canon(ctx, labels).expect("string labels are valid")
}

fn odd_parts(l: &IndecLabel) -> Option<(i64, usize, usize)> {
    match *l {
        IndecLabel::Simple { u, j } => Some((0, u, j)),
        IndecLabel::Syzygy { k, u, j } => Some((k, u, j)),
        _ => None,
    }
}

/// Ω^k L(u,i) ⊗ Ω^m L(v,j) modulo projectives, via Ω^{k+m} of the simple product.
pub fn odd_tensor(ctx: &Ctx, a: &IndecLabel, b: &IndecLabel) -> Result<Decomposition, TensorError> {
    let (Some((k, u, i)), Some((m, v, j))) = (odd_parts(a), odd_parts(b)) else {
        return Err(TensorError::NoClosedForm(a.render(ctx), b.render(ctx)));
    };
    let base = simple_tensor_closed_form(ctx, u, i, v, j);
    let mut labels = Vec::new();
    for lab in base.non_projective(ctx).labels() {
        if let IndecLabel::Simple { u, j } = lab {
            labels.push(IndecLabel::Syzygy { k: k + m, u, j });
        }
    }
    Ok(canon(ctx, labels)?)
}

/// Closed form for any pair the theorems cover.
pub fn closed_form(ctx: &Ctx, a: &IndecLabel, b: &IndecLabel) -> Result<TensorResult, TensorError> {
    let a = a.canonical(ctx)?;
    let b = b.canonical(ctx)?;
    let mp = |d: Decomposition| TensorResult { decomposition: d, modulo_projectives: true, source: Source::ClosedForm };
    if let (IndecLabel::Simple { u, j: i }, IndecLabel::Simple { u: v, j }) = (&a, &b) {
        return Ok(TensorResult {
            decomposition: simple_tensor_closed_form(ctx, *u, *i, *v, *j),
            modulo_projectives: false,
            source: Source::ClosedForm,
        });
    }
    if a.is_projective(ctx) || b.is_projective(ctx) {
        return Ok(mp(Decomposition::from_labels(Vec::new())));
    }
    match (&a, &b) {
        _ if a.is_odd() && b.is_odd() => Ok(mp(odd_tensor(ctx, &a, &b)?)),
        _ => {
            if let Some((s, u, i, l)) = string_parts(&a) {
                if let IndecLabel::Simple { u: v, j } = b {
                    return Ok(mp(string_simple_closed_form(ctx, s, u, i, l, v, j)));
                }
                if let Some((s2, v, j, t)) = string_parts(&b) {
                    return Ok(mp(string_string_closed_form(ctx, s, u, i, l, s2, v, j, t)));
                }
            }
            if string_parts(&b).is_some() && matches!(a, IndecLabel::Simple { .. }) {
                return closed_form(ctx, &b, &a);
            }
            Err(TensorError::NoClosedForm(a.render(ctx), b.render(ctx)))
        }
    }
}

/// Engine decomposition of build(a)⊗build(b).
pub fn engine_tensor(ctx: &Ctx, a: &IndecLabel, b: &IndecLabel, cfg: &EngineConfig) -> Result<Decomposition, TensorError> {
    let ma = build(ctx, a)?;
    let mb = build(ctx, b)?;
    Ok(decompose_with(&ma.tensor(&mb)?, cfg)?)
}

/// Band⊗(simple | string | band): engine decomposition with exact λ parameters.
pub fn band_tensor_procedure(ctx: &Ctx, band: &IndecLabel, other: &IndecLabel, cfg: &EngineConfig) -> Result<TensorResult, TensorError> {
    if !band.is_band() {
        return Err(TensorError::Label(LabelError::Invalid(format!("{} is not a band", band.render(ctx)))));
    }
    Ok(TensorResult { decomposition: engine_tensor(ctx, band, other, cfg)?, modulo_projectives: false, source: Source::Procedure })
}

/// Whether L(0,0) is a summand of M*⊗M, with the quantum-trace criterion
/// evaluated on a basis of End(M) as a cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplittingTrace {
    pub by_decomposition: bool,
    pub by_trace: bool,
}

pub fn splitting_trace_report(m: &ModuleRep, cfg: &EngineConfig) -> Result<SplittingTrace, TensorError> {
    let end = hom(m, m)?;
    let by_trace = end.basis.iter().any(|f| !quantum_trace(m, f).is_zero());
    let dec = decompose_with(&m.dual().tensor(m)?, cfg)?;
    let unit = IndecLabel::Simple { u: 0, j: 0 };
    let by_decomposition = dec.summands.iter().any(|(l, _)| *l == unit);
    Ok(SplittingTrace { by_decomposition, by_trace })
}

/// Splitting trace test; errors if the two criteria disagree.
pub fn splitting_trace(m: &ModuleRep) -> Result<bool, TensorError> {
    let r = splitting_trace_report(m, &EngineConfig::default())?;
    if r.by_decomposition != r.by_trace {
        return Err(TensorError::Module(ModuleError::Inconclusive(format!(
            "splitting trace criteria disagree: summand {} vs trace {}",
            r.by_decomposition, r.by_trace
        ))));
    }
    Ok(r.by_decomposition)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GreenCell {
    pub left: String,
    pub right: String,
    pub summands: Vec<SummandJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GreenTable {
    pub n: usize,
    pub d: usize,
    pub modulo_projectives: bool,
    pub cells: Vec<GreenCell>,
}

/// Pairwise products over `labels` (upper triangle, the product being symmetric).
pub fn green_table(ctx: &Ctx, labels: &[IndecLabel], modulo_projectives: bool, cfg: &EngineConfig) -> Result<GreenTable, TensorError> {
    let mut cells = Vec::new();
    let mut errs = Vec::new();
    let mods = labels.iter().map(|l| build(ctx, l)).collect::<Result<Vec<_>, _>>()?;
    for a in 0..labels.len() {
        for b in a..labels.len() {
            let res = mods[a].tensor(&mods[b]).map_err(TensorError::from).and_then(|t| Ok(decompose_with(&t, cfg)?));
            match res {
                Ok(dec) => {
                    let dec = if modulo_projectives { dec.non_projective(ctx) } else { dec };
                    cells.push(GreenCell {
                        left: labels[a].render(ctx),
                        right: labels[b].render(ctx),
                        summands: dec.to_json(ctx).summands,
                    });
                }
                Err(e) => errs.push(format!("{} ⊗ {}: {e}", labels[a].render(ctx), labels[b].render(ctx))),
            }
        }
    }
    if !errs.is_empty() {
        return Err(TensorError::Cells(errs));
    }
    Ok(GreenTable { n: ctx.n, d: ctx.d, modulo_projectives, cells })
}

impl GreenTable {
    fn cell_text(c: &GreenCell) -> String {
        if c.summands.is_empty() {
            return "0".into();
        }
        c.summands
            .iter()
            .map(|s| if s.multiplicity == 1 { s.label.clone() } else { format!("{}^{}", s.label, s.multiplicity) })
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }

    /// Aligned text: one row per cell.
    pub fn to_text(&self) -> String {
        let lw = self.cells.iter().map(|c| c.left.chars().count()).max().unwrap_or(0);
        let rw = self.cells.iter().map(|c| c.right.chars().count()).max().unwrap_or(0);
        let mut s = format!(
            "Green table for D(Λ_{{{},{}}}){}\n",
            self.n,
            self.d,
            if self.modulo_projectives { " modulo projectives" } else { "" }
        );
        for c in &self.cells {
            let pad_l = lw - c.left.chars().count();
            let pad_r = rw - c.right.chars().count();
            s.push_str(&format!("{}{} ⊗ {}{} = {}\n", c.left, " ".repeat(pad_l), c.right, " ".repeat(pad_r), Self::cell_text(c)));
        }
        s
    }
}

/// All simple labels of the algebra.
pub fn all_simples(ctx: &Ctx) -> Vec<IndecLabel> {
    let mut v = Vec::new();
    for u in 0..ctx.n {
        for j in 0..ctx.n {
            v.push(IndecLabel::Simple { u, j });
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dalgebra::DoubleContext;
    use crate::modrep::decompose;

    fn lab(ctx: &Ctx, s: &str) -> IndecLabel {
        IndecLabel::parse(ctx, s).unwrap()
    }

    #[test]
    fn ranges() {
        let r = TensorRange::from_dims(3, 2, 2);
        assert_eq!((r.varpi, r.varsigma), (0, 0));
        assert_eq!(r.simple_range, 1..2);
        assert_eq!(r.projective_range, 0..1);
        let r = TensorRange::from_dims(6, 2, 3);
        assert!(r.varpi < 0 && r.projective_range.is_empty());
        assert_eq!(r.index_set(), vec![0, 1]);
        let r = TensorRange::from_dims(6, 5, 5);
        assert_eq!((r.varpi, r.varsigma), (3, 2));
        assert_eq!(r.projective_range, 2..4);
    }

    #[test]
    fn simple_examples() {
        let c22 = DoubleContext::new(2, 2).unwrap();
        assert_eq!(simple_tensor_closed_form(&c22, 0, 0, 0, 0).render(&c22), "L(0,0)");
        assert_eq!(simple_tensor_closed_form(&c22, 1, 0, 1, 0).render(&c22), "P(0,1)");
        let c63 = DoubleContext::new(6, 3).unwrap();
        assert_eq!(simple_tensor_closed_form(&c63, 0, 1, 0, 1).render(&c63), "L(0,2) ⊕ L(0,3)");
        assert!(IndecLabel::Simple { u: 0, j: 2 }.is_projective(&c63));
    }

    #[test]
    fn projective_factor_window() {
        let c = DoubleContext::new(6, 3).unwrap();
        let engine_of = |u, i, v, j| engine_tensor(&c, &IndecLabel::Simple { u, j: i }, &IndecLabel::Simple { u: v, j }, &EngineConfig::default()).unwrap();
        for (u, i, v, j, want) in [(1, 0, 1, 0, "L(2,0) ⊕ P(2,2)"), (1, 2, 1, 0, "L(2,3) ⊕ P(2,4)"), (1, 0, 5, 0, "P(0,1) ⊕ L(0,2)")] {
            let cf = simple_tensor_closed_form(&c, u, i, v, j);
            assert_eq!(cf.render(&c), want);
            assert!(cf.same_labels(&engine_of(u, i, v, j)));
        }
        assert_eq!(simple_tensor_socle(&c, 1, 0, 1, 0), vec![(2, 0), (2, 2)]);
        assert!(projective_window(&c, 2, 0, 2).is_none());
    }

    #[test]
    fn closed_vs_engine_22() {
        let ctx = DoubleContext::new(2, 2).unwrap();
        let cfg = EngineConfig::default();
        for a in all_simples(&ctx) {
            for b in all_simples(&ctx) {
                let cf = closed_form(&ctx, &a, &b).unwrap();
                let en = engine_tensor(&ctx, &a, &b, &cfg).unwrap();
                assert!(cf.matches(&ctx, &en), "{a} ⊗ {b}: {} vs {}", cf.decomposition.render(&ctx), en.render(&ctx));
            }
        }
    }

    #[test]
    fn odd_example() {
        let ctx = DoubleContext::new(2, 2).unwrap();
        let d = odd_tensor(&ctx, &lab(&ctx, "O(1,0,0)"), &lab(&ctx, "O(-1,0,1)")).unwrap();
        assert_eq!(d.render(&ctx), "L(0,1)");
        let m = build(&ctx, &lab(&ctx, "O(1,0,0)")).unwrap().tensor(&build(&ctx, &lab(&ctx, "O(-1,0,1)")).unwrap()).unwrap();
        assert!(d.same_labels(&decompose(&m).unwrap().non_projective(&ctx)));
    }

    #[test]
    fn splitting_trace_rules() {
        let ctx = DoubleContext::new(3, 3).unwrap();
        assert!(splitting_trace(&build(&ctx, &lab(&ctx, "L(0,0)")).unwrap()).unwrap());
        assert!(!splitting_trace(&build(&ctx, &lab(&ctx, "M+(0,0,1)")).unwrap()).unwrap());
        let proj_simple = (0..3).find(|&j| ctx.simple_dim(0, j) == 3).unwrap();
        assert!(!splitting_trace(&build(&ctx, &IndecLabel::Simple { u: 0, j: proj_simple }).unwrap()).unwrap());
    }

    #[test]
    fn table_text() {
        let ctx = DoubleContext::new(2, 2).unwrap();
        let t = green_table(&ctx, &all_simples(&ctx)[..2], false, &EngineConfig::default()).unwrap();
        assert_eq!(t.cells.len(), 3);
        assert!(t.to_text().contains("L(0,0) ⊗ L(0,0) = L(0,0)"));
    }
}
