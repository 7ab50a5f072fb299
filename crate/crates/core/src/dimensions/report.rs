use serde::{Deserialize, Serialize};

use super::{sgdim, DimensionEngine};
use crate::caps::Caps;
use crate::class::VersionSpace;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub holds: bool,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimReport {
    #[serde(rename = "L")]
    pub l: i32,
    #[serde(rename = "BL")]
    pub bl: i32,
    #[serde(rename = "SG")]
    pub sg: i32,
    /// `sup_x |H(x)|`.
    #[serde(rename = "C")]
    pub c: usize,
    pub hypotheses: usize,
    pub checks: Vec<InequalityCheck>,
    /// `SG / (L · log2(BL + 2))`, recorded only; absent when `L = 0`.
    pub sg_ratio: Option<f64>,
}

impl DimReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failed(&self) -> impl Iterator<Item = &InequalityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// `⌈4 · L · C · ln C⌉`.
pub fn projection_bl_bound(l: i32, c: usize) -> i64 {
    (4.0 * l as f64 * c as f64 * (c as f64).ln()).ceil() as i64
}

fn check(name: &str, lhs: i64, rhs: i64) -> InequalityCheck {
    InequalityCheck {
        name: name.to_string(),
        holds: lhs <= rhs,
        lhs,
        rhs,
    }
}

/// Computes L, BL, SG and C for a nonempty version space and evaluates the
/// inequalities relating them.
pub fn dim_report(v: &VersionSpace, caps: &Caps) -> Result<DimReport> {
    if v.is_empty() {
        return Err(Error::input("dimension report needs a nonempty class"));
    }
    let mut engine = DimensionEngine::new(v.class().clone());
    let l = engine.ldim_of(v.bits());
    let bl = engine.bldim_of(v.bits());
    let sg = sgdim(v, caps)?;
    let c = v.max_projection();
    let size = v.len();

    let mut checks = vec![
        check("L <= BL", l as i64, bl as i64),
        check("L <= SG", l as i64, sg as i64),
        check("C <= BL + 1", c as i64, bl as i64 + 1),
        check("BL <= |H| - 1", bl as i64, size as i64 - 1),
    ];
    if c >= 2 {
        checks.push(check("BL <= ceil(4 L C ln C)", bl as i64, projection_bl_bound(l, c)));
    }
    let sg_ratio = (l > 0).then(|| sg as f64 / (l as f64 * ((bl + 2) as f64).log2()));

    Ok(DimReport {
        l,
        bl,
        sg,
        c,
        hypotheses: size,
        checks,
        sg_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{gen_constants, gen_full};
    use std::sync::Arc;

    #[test]
    fn constants_report() {
        let v = VersionSpace::full(Arc::new(gen_constants(4, 1).unwrap()));
        let r = dim_report(&v, &Caps::default()).unwrap();
        assert_eq!((r.l, r.bl, r.sg, r.c), (1, 3, 1, 4));
        assert_eq!(r.checks.len(), 5);
        assert!(r.all_hold());
    }

    #[test]
    fn singleton_report_skips_projection_bound() {
        let class = Arc::new(gen_constants(3, 2).unwrap());
        let v = VersionSpace::from_members(class, [1]).unwrap();
        let r = dim_report(&v, &Caps::default()).unwrap();
        assert_eq!((r.l, r.bl, r.sg, r.c), (0, 0, 0, 1));
        assert_eq!(r.checks.len(), 4);
        assert!(r.all_hold());
        assert!(r.sg_ratio.is_none());
        let empty = VersionSpace::empty(v.class().clone());
        assert!(matches!(dim_report(&empty, &Caps::default()), Err(Error::Input(_))));
    }

    #[test]
    fn full_report() {
        let v = VersionSpace::full(Arc::new(gen_full(2, 2, 4096).unwrap()));
        let r = dim_report(&v, &Caps::default()).unwrap();
        assert_eq!((r.l, r.bl, r.sg, r.c), (2, 2, 2, 2));
        assert!(r.all_hold());
    }

    #[test]
    fn projection_bound_arithmetic() {
        // 4 · 1 · 2 · ln 2 = 5.545 -> 6
        assert_eq!(projection_bl_bound(1, 2), 6);
        // 4 · 1 · 4 · ln 4 = 22.18 -> 23
        assert_eq!(projection_bl_bound(1, 4), 23);
    }
}
