//! Evaluation of composition expressions, either by building the chirotope
//! or by propagating `P` polynomials.

use std::path::{Path, PathBuf};

use chiro_core::compose::{self, KOCH_MATERIALIZE_CAP};
use chiro_core::oracle::{brute_p, OracleConfig};
use chiro_core::poly::calc::{join_p, meet_p};
use chiro_core::{parse_chi, parse_pts, BivarPoly, Chirotope, RootedChirotope};

use crate::error::{Result, WorkbenchError};
use crate::expr::{Atom, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    /// Build the chirotope; results above the oracle cap are refused.
    Materialize,
    /// Propagate `P` through the recursions; leaves go through the oracle.
    Polynomial,
}

#[derive(Clone, Debug)]
pub enum Value {
    Chirotope(RootedChirotope),
    Poly(BivarPoly),
}

#[derive(Clone, Debug, Default)]
pub struct EvalContext {
    pub oracle: OracleConfig,
    /// Relative `load` paths resolve against this directory.
    pub base_dir: Option<PathBuf>,
}

impl EvalContext {
    pub fn new(oracle: OracleConfig) -> Self {
        EvalContext { oracle, base_dir: None }
    }

    fn resolve(&self, path: &str) -> PathBuf {
        match &self.base_dir {
            Some(dir) if Path::new(path).is_relative() => dir.join(path),
            _ => PathBuf::from(path),
        }
    }
}

pub fn eval_expr(e: &Expr, mode: EvalMode, ctx: &EvalContext) -> Result<Value> {
    Ok(match mode {
        EvalMode::Materialize => Value::Chirotope(materialize(e, ctx)?),
        EvalMode::Polynomial => Value::Poly(polynomial(e, ctx)?),
    })
}

fn too_large(size: usize, ctx: &EvalContext) -> WorkbenchError {
    chiro_core::Error::TooLarge {
        what: "materialized chirotope",
        size,
        cap: ctx.oracle.limit,
        hint: "evaluate in polynomial mode (count --method poly) or raise --oracle-cap",
    }
    .into()
}

fn size_check(rc: RootedChirotope, ctx: &EvalContext) -> Result<RootedChirotope> {
    if rc.len() > ctx.oracle.limit {
        return Err(too_large(rc.len(), ctx));
    }
    Ok(rc)
}

/// Element count of a generator atom, where known without building it.
fn generator_size(a: &Atom) -> Option<usize> {
    match a {
        Atom::Convex(n) => Some(*n),
        Atom::ChiK(k) => k.checked_mul(2).map(|m| m + 2),
        Atom::Koch(i) if *i <= KOCH_MATERIALIZE_CAP => Some((1usize << i) + 2),
        Atom::Dc(k) => k.checked_mul(2),
        _ => None,
    }
}

/// Reads a `.chi` or `.pts` file; `root` overrides a root stored in the
/// file.
pub fn load_file(path: &Path, root: Option<usize>) -> Result<(Chirotope, Option<usize>)> {
    let text = std::fs::read_to_string(path).map_err(|source| WorkbenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("chi") => {
            let (chi, stored) = parse_chi(&text)?;
            Ok((chi, root.or(stored)))
        }
        Some("pts") => Ok((parse_pts(&text)?.chirotope()?, root)),
        _ => Err(WorkbenchError::Usage(format!(
            "{}: expected a .chi or .pts file",
            path.display()
        ))),
    }
}

fn load_rooted(path: &str, root: Option<usize>, ctx: &EvalContext) -> Result<RootedChirotope> {
    let (chi, root) = load_file(&ctx.resolve(path), root)?;
    let root = root.ok_or_else(|| WorkbenchError::Usage(format!("load(\"{path}\") needs a root")))?;
    Ok(RootedChirotope::new(chi, root)?)
}

fn atom_chirotope(a: &Atom, ctx: &EvalContext) -> Result<RootedChirotope> {
    if let Some(size) = generator_size(a) {
        if size > ctx.oracle.limit {
            return Err(too_large(size, ctx));
        }
    }
    Ok(match a {
        Atom::Triangle => compose::triangle(),
        Atom::Chi1 => compose::chi1(),
        Atom::Convex(n) => compose::convex(*n)?,
        Atom::ChiK(k) => compose::chi_k(*k)?,
        Atom::Koch(i) => compose::koch(*i)?,
        Atom::Dc(k) => compose::double_circle(*k)?,
        Atom::Load { path, root } => load_rooted(path, *root, ctx)?,
    })
}

pub fn materialize(e: &Expr, ctx: &EvalContext) -> Result<RootedChirotope> {
    let rc = match e {
        Expr::Atom(a) => atom_chirotope(a, ctx)?,
        Expr::Join(a, b) => compose::join(&materialize(a, ctx)?, &materialize(b, ctx)?)?.0,
        Expr::Meet(a, b) => compose::meet(&materialize(a, ctx)?, &materialize(b, ctx)?)?.0,
        Expr::Twist(a) => compose::twist(&materialize(a, ctx)?),
        Expr::Flip(a) => materialize(a, ctx)?.flip(),
    };
    size_check(rc, ctx)
}

/// `P` of the Koch level `i`, by the recursions from the triangle.
pub fn koch_p(i: usize, oracle: &OracleConfig) -> Result<BivarPoly> {
    let mut p = brute_p(&compose::triangle(), oracle)?;
    for level in 1..=i {
        p = if level % 2 == 1 { join_p(&p, &p)? } else { meet_p(&p, &p)? };
    }
    Ok(p)
}

pub fn polynomial(e: &Expr, ctx: &EvalContext) -> Result<BivarPoly> {
    Ok(match e {
        Expr::Atom(Atom::Koch(i)) => koch_p(*i, &ctx.oracle)?,
        Expr::Atom(Atom::ChiK(k)) => {
            if *k < 1 {
                return Err(chiro_core::Error::OutOfRange {
                    what: "chi_k index",
                    value: k.to_string(),
                }
                .into());
            }
            let base = brute_p(&compose::chi1(), &ctx.oracle)?;
            let mut p = base.clone();
            for _ in 1..*k {
                p = join_p(&p, &base)?;
            }
            p
        }
        Expr::Atom(a) => brute_p(&atom_chirotope(a, ctx)?, &ctx.oracle)?,
        Expr::Join(a, b) => join_p(&polynomial(a, ctx)?, &polynomial(b, ctx)?)?,
        Expr::Meet(a, b) => meet_p(&polynomial(a, ctx)?, &polynomial(b, ctx)?)?,
        Expr::Twist(a) => polynomial(a, ctx)?.swap_vars(),
        // A mirror image has the same crossings, hence the same P.
        Expr::Flip(a) => polynomial(a, ctx)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use chiro_core::oracle::brute_q;
    use chiro_core::poly::calc::q_from_p;

    fn ctx() -> EvalContext {
        EvalContext::default()
    }

    #[test]
    fn meet_of_triangles_is_chi1_in_both_modes() {
        let e = parse_expr("meet(triangle,triangle)").unwrap();
        let rc = materialize(&e, &ctx()).unwrap();
        assert_eq!(rc, compose::chi1());
        assert_eq!(brute_q(&rc, &ctx().oracle).unwrap().to_string(), "u^3");
        assert_eq!(q_from_p(&polynomial(&e, &ctx()).unwrap()).unwrap().to_string(), "u^3");
    }

    #[test]
    fn materialize_refuses_large_results() {
        let e = parse_expr("koch(4)").unwrap();
        let err = materialize(&e, &ctx()).unwrap_err();
        assert!(matches!(err, WorkbenchError::Core(chiro_core::Error::TooLarge { size: 18, .. })));
        assert!(err.to_string().contains("polynomial mode"));
        let e = parse_expr("convex(8) v convex(8)").unwrap();
        assert!(materialize(&e, &ctx()).is_err());
        assert!(polynomial(&e, &ctx()).is_ok());
    }

    #[test]
    fn modes_agree_on_small_expressions() {
        for src in [
            "koch(3)",
            "chik(3)",
            "twist(chi1) v convex(5)",
            "flip(chi1) ^ triangle ^ convex(4)",
            "join(dc(3), triangle)",
        ] {
            let e = parse_expr(src).unwrap();
            let rc = materialize(&e, &ctx()).unwrap();
            let p = polynomial(&e, &ctx()).unwrap();
            assert_eq!(p, brute_p(&rc, &ctx().oracle).unwrap(), "{src}");
        }
    }
}
