use serde::{Deserialize, Serialize};

use crate::arith::Field;
use crate::linalg::is_zero_vec;

use super::graded::ThinTable;
use super::{Generator, GradedAlgebra, LeftNormedWord, LieError};

/// An invariant that is either observed or not reached within the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Extent {
    Finite(usize),
    /// Not observed; the table was searched up to `checked_to`.
    Unbounded {
        checked_to: usize,
    },
}

impl Extent {
    pub fn value(&self) -> Option<usize> {
        match self {
            Extent::Finite(value) => Some(*value),
            Extent::Unbounded { .. } => None,
        }
    }
}

/// Constituent lengths of a maximal-class table.
///
/// `onsets[r - 1]` is the degree `D_r` of the `r`-th component not
/// centralized by `y`; `ell = D_1` and `subsequent[r - 2] = D_r - D_{r-1}`.
/// Only lengths whose onset lies within `determined_up_to` are listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituentProfile {
    pub ell: Extent,
    pub subsequent: Vec<usize>,
    pub onsets: Vec<usize>,
    pub determined_up_to: usize,
}

impl ConstituentProfile {
    /// `ell_r`, counting from `ell_1 = ell`.
    pub fn length(&self, r: usize) -> Option<usize> {
        match r {
            0 => None,
            1 => self.ell.value(),
            _ => self.subsequent.get(r - 2).copied(),
        }
    }
}

/// Second-diamond invariants of a thin table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondProfile {
    pub k: Option<usize>,
    pub h: Extent,
    pub diamond_degrees: Vec<usize>,
    /// The `alpha` with `[v x' x'] = 0` for `x' = x + alpha y`, when it
    /// exists and `k + 1` is within the table.
    pub normalization_alpha: Option<String>,
    /// `[vyy] = 0`; `None` when `k + 1` exceeds the table.
    pub vyy_vanishes: Option<bool>,
    /// `[vxy] = ((k-1)/2) [vyx]`; `None` when `k + 1` exceeds the table.
    pub diamond_relation_holds: Option<bool>,
    /// `p` divides `(k-1)/2`.
    pub half_divisible: bool,
    /// Products of degrees `i, j >= 2` with `i + j < k` vanish.
    pub metabelian_below_k: bool,
}

fn half_divisible(k: usize, p: u32) -> bool {
    p != 0 && ((k - 1) / 2).is_multiple_of(p as usize)
}

/// `c` with `lhs = c * rhs`, if any.
fn ratio<F: Field>(f: &F, lhs: &[F::Elem], rhs: &[F::Elem]) -> Option<F::Elem> {
    let j = rhs.iter().position(|v| !f.is_zero(v))?;
    let c = f.div(&lhs[j], &rhs[j])?;
    let ok = lhs.iter().zip(rhs).all(|(l, r)| *l == f.mul(&c, r));
    ok.then_some(c)
}

impl<F: Field> ThinTable<F> {
    /// `v = [y x^{k-2}]`, spanning `L_{k-1}`.
    fn v(&self, k: usize) -> Result<super::HomogeneousElement<F::Elem>, LieError> {
        self.eval_word(&LeftNormedWord::power(Generator::Y, Generator::X, k - 2))
    }

    /// `c` with `[vxx] = c [vyx]`.
    fn vxx_ratio(&self, k: usize) -> Result<Option<F::Elem>, LieError> {
        let v = self.v(k)?;
        let vx = self.act(&v, Generator::X)?;
        let vy = self.act(&v, Generator::Y)?;
        let vxx = self.act(&vx, Generator::X)?;
        let vyx = self.act(&vy, Generator::X)?;
        Ok(ratio(self.field(), &vxx.coords, &vyx.coords))
    }

    pub fn diamond_profile(&self) -> Result<DiamondProfile, LieError> {
        if let Some(degree) = self.covering_violation() {
            return Err(LieError::CoveringViolation { degree });
        }
        let f = self.field();
        let p = f.characteristic().p();
        let n = self.maxdeg();
        let diamond_degrees = self.diamond_degrees();
        let Some(&k) = diamond_degrees.first() else {
            return Ok(DiamondProfile {
                k: None,
                h: Extent::Unbounded { checked_to: 0 },
                diamond_degrees,
                normalization_alpha: None,
                vyy_vanishes: None,
                diamond_relation_holds: None,
                half_divisible: false,
                metabelian_below_k: self.metabelian_quotient_check(n + 1),
            });
        };
        let v = self.v(k)?;
        let vy = self.act(&v, Generator::Y)?;
        let (mut vyy_vanishes, mut diamond_relation_holds, mut normalization_alpha) = (None, None, None);
        if k < n {
            let vx = self.act(&v, Generator::X)?;
            let vyy = self.act(&vy, Generator::Y)?;
            let vxy = self.act(&vx, Generator::Y)?;
            let vyx = self.act(&vy, Generator::X)?;
            vyy_vanishes = Some(is_zero_vec(f, &vyy.coords));
            let half = f.from_i64(((k - 1) / 2) as i64);
            let rel: Vec<_> = vxy.coords.iter().zip(&vyx.coords).map(|(a, b)| f.sub(a, &f.mul(&half, b))).collect();
            diamond_relation_holds = Some(is_zero_vec(f, &rel));
            if k > 3 {
                if let Ok((alpha, _)) = self.normalize_x(k) {
                    normalization_alpha = Some(f.format(&alpha));
                }
            }
        }
        // least h with [v y x^{h-1} y] != 0, an element of degree k + h
        let mut h = Extent::Unbounded { checked_to: 0 };
        let mut cur = vy;
        let mut tried = 1;
        while k + tried <= n {
            if !is_zero_vec(f, &self.act(&cur, Generator::Y)?.coords) {
                h = Extent::Finite(tried);
                break;
            }
            h = Extent::Unbounded { checked_to: tried };
            cur = self.act(&cur, Generator::X)?;
            tried += 1;
        }
        Ok(DiamondProfile {
            k: Some(k),
            h,
            diamond_degrees,
            normalization_alpha,
            vyy_vanishes,
            diamond_relation_holds,
            half_divisible: half_divisible(k, p),
            metabelian_below_k: self.metabelian_quotient_check(k),
        })
    }

    /// Replaces `x` by `x' = x + alpha y` so that `[v x' x'] = 0`, using
    /// `[vx'x'] = [vxx] + ((k+1)/2) alpha [vyx]`.
    pub fn normalize_x(&self, k: usize) -> Result<(F::Elem, ThinTable<F>), LieError> {
        let f = self.field();
        if k <= 3 {
            return Err(LieError::SmallDiamond { k });
        }
        self.check_degree(k + 1)?;
        let kp1 = f.from_i64(k as i64 + 1);
        if f.is_zero(&kp1) {
            return Err(LieError::NormalizationImpossible { k });
        }
        let c = self
            .vxx_ratio(k)?
            .ok_or_else(|| LieError::Malformed(format!("[vxx] is not a multiple of [vyx] in degree {}", k + 1)))?;
        let alpha = f.div(&f.neg(&f.mul(&f.from_i64(2), &c)), &kp1).expect("k + 1 is invertible");
        let table = self.rebase_x(&alpha)?;
        Ok((alpha, table))
    }
}
