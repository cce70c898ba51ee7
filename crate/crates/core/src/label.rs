//! Names of indecomposable modules and their text grammar.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::cyclo::{parse_poly_literal, CycloScalar};
use crate::dalgebra::Ctx;

type S = CycloScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("cannot parse label {0:?}; expected L(u,j) | P(u,j) | M+(u,j,l) | M-(u,j,l) | C+(u,j,l,λ) | C-(u,j,l,λ) | O(k,u,j)")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

/// An indecomposable module class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndecLabel {
    Simple { u: usize, j: usize },
    Proj { u: usize, j: usize },
    StringPlus { u: usize, j: usize, l: usize },
    StringMinus { u: usize, j: usize, l: usize },
    BandPlus { u: usize, j: usize, l: usize, lambda: S },
    BandMinus { u: usize, j: usize, l: usize, lambda: S },
    Syzygy { k: i64, u: usize, j: usize },
}

impl IndecLabel {
    fn rank(&self) -> u8 {
        match self {
            IndecLabel::Simple { .. } => 0,
            IndecLabel::Proj { .. } => 1,
            IndecLabel::Syzygy { .. } => 2,
            IndecLabel::StringPlus { .. } => 3,
            IndecLabel::StringMinus { .. } => 4,
            IndecLabel::BandPlus { .. } => 5,
            IndecLabel::BandMinus { .. } => 6,
        }
    }

    fn key(&self) -> (usize, usize, u8, i64, usize) {
        match self {
            IndecLabel::Simple { u, j } | IndecLabel::Proj { u, j } => (*u, *j, self.rank(), 0, 0),
            IndecLabel::Syzygy { k, u, j } => (*u, *j, self.rank(), *k, 0),
            IndecLabel::StringPlus { u, j, l }
            | IndecLabel::StringMinus { u, j, l }
            | IndecLabel::BandPlus { u, j, l, .. }
            | IndecLabel::BandMinus { u, j, l, .. } => (*u, *j, self.rank(), 0, *l),
        }
    }

    fn lambda(&self) -> Option<&S> {
        match self {
            IndecLabel::BandPlus { lambda, .. } | IndecLabel::BandMinus { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    pub fn component(&self) -> usize {
        match self {
            IndecLabel::Simple { u, .. }
            | IndecLabel::Proj { u, .. }
            | IndecLabel::StringPlus { u, .. }
            | IndecLabel::StringMinus { u, .. }
            | IndecLabel::BandPlus { u, .. }
            | IndecLabel::BandMinus { u, .. }
            | IndecLabel::Syzygy { u, .. } => *u,
        }
    }

    pub fn is_projective(&self, ctx: &Ctx) -> bool {
        match self {
            IndecLabel::Proj { .. } => true,
            IndecLabel::Simple { u, j } => ctx.simple_dim(*u, *j) == ctx.d,
            _ => false,
        }
    }

    pub fn is_band(&self) -> bool {
        matches!(self, IndecLabel::BandPlus { .. } | IndecLabel::BandMinus { .. })
    }

    pub fn is_string(&self) -> bool {
        matches!(self, IndecLabel::StringPlus { .. } | IndecLabel::StringMinus { .. })
    }

    /// Odd composition length: simples and their syzygies.
    pub fn is_odd(&self) -> bool {
        matches!(self, IndecLabel::Simple { .. } | IndecLabel::Syzygy { .. })
    }

    /// Vector-space dimension.
    pub fn dim(&self, ctx: &Ctx) -> usize {
        let r = 2 * ctx.n / ctx.d;
        match self {
            IndecLabel::Simple { u, j } => ctx.simple_dim(*u, *j),
            IndecLabel::Proj { u, j } => {
                if ctx.simple_dim(*u, *j) == ctx.d {
                    ctx.d
                } else {
                    2 * ctx.d
                }
            }
            IndecLabel::StringPlus { l, .. } | IndecLabel::StringMinus { l, .. } => l * ctx.d,
            IndecLabel::BandPlus { l, .. } | IndecLabel::BandMinus { l, .. } => l * ctx.d * r / 2,
            IndecLabel::Syzygy { k, u, j } => {
                // alternate tops and socles around the orbit
                let orb = ctx.orbit(*u, *j);
                let r = orb.len() as i64;
                let p = orb.iter().position(|x| x == j).unwrap() as i64;
                let m = k.abs();
                let dimp = |t: i64| ctx.simple_dim(*u, orb[t.rem_euclid(r) as usize]);
                (-m..=m).map(|t| dimp(p + t)).sum()
            }
        }
    }

    /// Canonical form: projective simples as `Simple`, `O(0,…)` as `Simple`,
    /// band bases moved to the least vertex of their σ²-class.
    pub fn canonical(&self, ctx: &Ctx) -> Result<IndecLabel, LabelError> {
        let n = ctx.n;
        let chk = |u: usize, j: usize| -> Result<(), LabelError> {
            if u >= n || j >= n {
                Err(LabelError::Invalid(format!("indices must lie in 0..{n}")))
            } else {
                Ok(())
            }
        };
        let nonsimple_block = |u: usize, j: usize| -> Result<(), LabelError> {
            if ctx.orbit(u, j).len() == 1 {
                Err(LabelError::Invalid(format!("L({u},{j}) lies in a simple block")))
            } else {
                Ok(())
            }
        };
        Ok(match self.clone() {
            IndecLabel::Simple { u, j } => {
                chk(u, j)?;
                self.clone()
            }
            IndecLabel::Proj { u, j } => {
                chk(u, j)?;
                if ctx.simple_dim(u, j) == ctx.d {
                    IndecLabel::Simple { u, j }
                } else {
                    self.clone()
                }
            }
            IndecLabel::Syzygy { k, u, j } => {
                chk(u, j)?;
                if ctx.simple_dim(u, j) == ctx.d {
                    if k == 0 {
                        return Ok(IndecLabel::Simple { u, j });
                    }
                    return Err(LabelError::Invalid(format!("L({u},{j}) is projective; its syzygies vanish")));
                }
                if k == 0 {
                    IndecLabel::Simple { u, j }
                } else {
                    self.clone()
                }
            }
            IndecLabel::StringPlus { u, j, l } | IndecLabel::StringMinus { u, j, l } => {
                chk(u, j)?;
                nonsimple_block(u, j)?;
                if l == 0 {
                    return Err(LabelError::Invalid("string length parameter must be ≥ 1".into()));
                }
                self.clone()
            }
            IndecLabel::BandPlus { u, j, l, lambda } | IndecLabel::BandMinus { u, j, l, lambda } => {
                chk(u, j)?;
                nonsimple_block(u, j)?;
                if l == 0 {
                    return Err(LabelError::Invalid("band length parameter must be ≥ 1".into()));
                }
                if lambda.is_zero() {
                    return Err(LabelError::Invalid("band parameter λ must be nonzero".into()));
                }
                let j0 = band_base(ctx, u, j);
                match self {
                    IndecLabel::BandPlus { .. } => IndecLabel::BandPlus { u, j: j0, l, lambda },
                    _ => IndecLabel::BandMinus { u, j: j0, l, lambda },
                }
            }
        })
    }

    pub fn render(&self, ctx: &Ctx) -> String {
        let lam = |s: &S| render_scalar(ctx, s);
        match self {
            IndecLabel::Simple { u, j } => format!("L({u},{j})"),
            IndecLabel::Proj { u, j } => format!("P({u},{j})"),
            IndecLabel::StringPlus { u, j, l } => format!("M+({u},{j},{l})"),
            IndecLabel::StringMinus { u, j, l } => format!("M-({u},{j},{l})"),
            IndecLabel::BandPlus { u, j, l, lambda } => format!("C+({u},{j},{l},{})", lam(lambda)),
            IndecLabel::BandMinus { u, j, l, lambda } => format!("C-({u},{j},{l},{})", lam(lambda)),
            IndecLabel::Syzygy { k, u, j } => format!("O({k},{u},{j})"),
        }
    }

    /// Parse and canonicalize.
    pub fn parse(ctx: &Ctx, s: &str) -> Result<IndecLabel, LabelError> {
        let err = || LabelError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let open = t.find('(').ok_or_else(err)?;
        if !t.ends_with(')') {
            return Err(err());
        }
        let head = &t[..open];
        let args: Vec<&str> = t[open + 1..t.len() - 1].split(',').collect();
        let idx = |k: usize| -> Result<usize, LabelError> {
            let v: i64 = args.get(k).ok_or_else(err)?.parse().map_err(|_| err())?;
            Ok(v.rem_euclid(ctx.n as i64) as usize)
        };
        let pos = |k: usize| -> Result<usize, LabelError> { args.get(k).ok_or_else(err)?.parse().map_err(|_| err()) };
        let want = |m: usize| if args.len() == m { Ok(()) } else { Err(err()) };
        let label = match head {
            "L" => {
                want(2)?;
                IndecLabel::Simple { u: idx(0)?, j: idx(1)? }
            }
            "P" => {
                want(2)?;
                IndecLabel::Proj { u: idx(0)?, j: idx(1)? }
            }
            "M+" | "M-" => {
                want(3)?;
                let (u, j, l) = (idx(0)?, idx(1)?, pos(2)?);
                if head == "M+" {
                    IndecLabel::StringPlus { u, j, l }
                } else {
                    IndecLabel::StringMinus { u, j, l }
                }
            }
            "C+" | "C-" => {
                want(4)?;
                let (u, j, l) = (idx(0)?, idx(1)?, pos(2)?);
                let lambda = parse_scalar(ctx, args[3]).map_err(|_| err())?;
                if head == "C+" {
                    IndecLabel::BandPlus { u, j, l, lambda }
                } else {
                    IndecLabel::BandMinus { u, j, l, lambda }
                }
            }
            "O" => {
                want(3)?;
                let k: i64 = args[0].parse().map_err(|_| err())?;
                IndecLabel::Syzygy { k, u: idx(1)?, j: idx(2)? }
            }
            _ => return Err(err()),
        };
        label.canonical(ctx)
    }
}

impl Ord for IndecLabel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key()).then_with(|| match (self.lambda(), o.lambda()) {
            (Some(a), Some(b)) => a.raw_coeffs().cmp(b.raw_coeffs()),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for IndecLabel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for IndecLabel {
    /// Context-free rendering; λ in the power basis of the field generator `z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndecLabel::Simple { u, j } => write!(f, "L({u},{j})"),
            IndecLabel::Proj { u, j } => write!(f, "P({u},{j})"),
            IndecLabel::StringPlus { u, j, l } => write!(f, "M+({u},{j},{l})"),
            IndecLabel::StringMinus { u, j, l } => write!(f, "M-({u},{j},{l})"),
            IndecLabel::BandPlus { u, j, l, lambda } => write!(f, "C+({u},{j},{l},{})", lambda.fmt_poly("z")),
            IndecLabel::BandMinus { u, j, l, lambda } => write!(f, "C-({u},{j},{l},{})", lambda.fmt_poly("z")),
            IndecLabel::Syzygy { k, u, j } => write!(f, "O({k},{u},{j})"),
        }
    }
}

/// Scalars print as polynomials in q when n = d, otherwise in w = ζ_n.
pub fn render_scalar(ctx: &Ctx, s: &S) -> String {
    if ctx.n == ctx.d {
        s.fmt_poly("q")
    } else {
        s.fmt_poly("w")
    }
}

/// Accepts polynomials in q (= ζ_n^{n/d}) or in w (= ζ_n).
pub fn parse_scalar(ctx: &Ctx, s: &str) -> Result<S, LabelError> {
    if s.contains('w') {
        parse_poly_literal(s, "w", ctx.omega()).map_err(|e| LabelError::Parse(e.to_string()))
    } else {
        parse_poly_literal(s, "q", ctx.q()).map_err(|e| LabelError::Parse(e.to_string()))
    }
}

/// Least vertex of the σ²-class of j.
pub fn band_base(ctx: &Ctx, u: usize, j: usize) -> usize {
    let orb = ctx.orbit(u, j);
    let p = orb.iter().position(|&x| x == j).unwrap();
    orb.iter().enumerate().filter(|(k, _)| k % 2 == p % 2).map(|(_, &x)| x).min().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dalgebra::DoubleContext;

    #[test]
    fn parse_render_roundtrip() {
        let ctx = DoubleContext::new(6, 6).unwrap();
        for s in ["L(1,2)", "P(0,1)", "M+(1,1,2)", "M-(1,5,1)", "C+(1,5,1,1/2+3/2*q)", "O(-2,1,1)"] {
            let l = IndecLabel::parse(&ctx, s).unwrap();
            assert_eq!(l.render(&ctx), s);
            assert_eq!(IndecLabel::parse(&ctx, &l.render(&ctx)).unwrap(), l);
        }
        assert!(IndecLabel::parse(&ctx, "X").is_err());
        assert!(IndecLabel::parse(&ctx, "C+(1,5,1,0)").is_err());
    }

    #[test]
    fn canonical_forms() {
        let ctx = DoubleContext::new(2, 2).unwrap();
        // L(1,0) has dimension 2 = d
        assert_eq!(IndecLabel::parse(&ctx, "P(1,0)").unwrap(), IndecLabel::Simple { u: 1, j: 0 });
        assert_eq!(IndecLabel::parse(&ctx, "O(0,0,1)").unwrap(), IndecLabel::Simple { u: 0, j: 1 });
        assert!(IndecLabel::parse(&ctx, "O(1,1,0)").is_err());
        assert_eq!(IndecLabel::parse(&ctx, "O(1,0,0)").unwrap().dim(&ctx), 3);
    }

    #[test]
    fn ordering_is_total_on_bands() {
        let ctx = DoubleContext::new(6, 6).unwrap();
        let a = IndecLabel::parse(&ctx, "C+(1,1,1,1)").unwrap();
        let b = IndecLabel::parse(&ctx, "C+(1,1,1,2)").unwrap();
        assert_ne!(a.cmp(&b), Ordering::Equal);
    }
}
