//! Theorem checks over an enumerated universe of tables.
//!
//! Invariants are asserted only when every bracket they depend on lies
//! within the horizon `maxdeg - lookahead`; shallower tables are counted
//! as unconstrained.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::{Field, PrimeChar, PrimePower};
use crate::congruence::classify_final_k;
use crate::lie_engine::{ConstituentProfile, DiamondProfile, Extent, JacobiMode};

use super::tree::{run_ordered, BranchStats};
use super::{AlgebraKind, FieldTask, MaxClassSearch, SearchConfig, SearchError, ThinSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    FirstConstituent,
    AnyConstituent,
    SecondDiamond,
    HValues,
}

/// Invariants of one enumerated table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableProfile {
    Constituents { profile: ConstituentProfile, sandwich: bool },
    Diamonds { profile: DiamondProfile },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    /// Position in the enumeration order.
    pub index: usize,
    pub profile: TableProfile,
    /// Whether the table was deep enough for the theorem to apply.
    pub asserted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub config: SearchConfig,
    pub table_count: usize,
    pub asserted_count: usize,
    pub observations: Vec<Observation>,
    pub violations: Vec<Violation>,
    /// Distinct asserted values of each invariant, e.g. `"ell"` or
    /// `"h(k=5)"`.
    pub summary: BTreeMap<String, BTreeSet<usize>>,
    pub stats: BranchStats,
    pub pass: bool,
}

impl VerificationReport {
    pub fn observed(&self, key: &str) -> BTreeSet<usize> {
        self.summary.get(key).cloned().unwrap_or_default()
    }
}

/// Accumulates checks for one table.
struct Checker<'a> {
    index: usize,
    violations: &'a mut Vec<Violation>,
    summary: &'a mut BTreeMap<String, BTreeSet<usize>>,
}

impl Checker<'_> {
    fn require(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(Violation { index: self.index, check: check.into(), detail: detail() });
        }
    }

    fn note(&mut self, key: String, value: usize) {
        self.summary.entry(key).or_default().insert(value);
    }
}

/// Per-table data gathered during enumeration, plus Jacobi re-checks.
struct Gathered {
    profiles: Vec<Result<TableProfile, String>>,
    jacobi: Vec<Option<String>>,
    stats: BranchStats,
}

struct Gather<'a> {
    config: &'a SearchConfig,
    jobs: usize,
}

impl FieldTask for Gather<'_> {
    type Output = Result<Gathered, SearchError>;

    fn run<F: Field>(self, field: F) -> Self::Output {
        let n = self.config.maxdeg;
        let triples = self.config.jacobi_mode == JacobiMode::AllTriples;
        let mut profiles = Vec::new();
        let mut jacobi = Vec::new();
        let stats = match self.config.kind {
            AlgebraKind::MaxClass => {
                let tree = MaxClassSearch::new(field, self.config)?;
                run_ordered(&tree, self.jobs, |t| {
                    profiles.push(Ok(TableProfile::Constituents {
                        profile: t.constituent_profile(),
                        sandwich: t.sandwich_check(n),
                    }));
                    jacobi.push(
                        triples
                            .then(|| t.jacobi_consistency(n, JacobiMode::AllTriples).err())
                            .flatten()
                            .map(|e| format!("{e:?}")),
                    );
                })
            }
            AlgebraKind::Thin => {
                let tree = ThinSearch::new(field, self.config)?;
                run_ordered(&tree, self.jobs, |t| {
                    profiles.push(
                        t.diamond_profile()
                            .map(|profile| TableProfile::Diamonds { profile })
                            .map_err(|e| e.to_string()),
                    );
                    jacobi.push(
                        triples
                            .then(|| t.jacobi_consistency(n, JacobiMode::AllTriples).err())
                            .flatten()
                            .map(|e| format!("{e:?}")),
                    );
                })
            }
        };
        Ok(Gathered { profiles, jacobi, stats })
    }
}

/// `2q` and `2q - p^s` for `p^s <= q`.
fn constituent_lengths(q: &PrimePower) -> BTreeSet<usize> {
    let qq = q.q() as usize;
    let mut out: BTreeSet<usize> = BTreeSet::from([2 * qq]);
    let mut ps = 1usize;
    while ps <= qq {
        out.insert(2 * qq - ps);
        ps *= q.p() as usize;
    }
    out
}

fn check_constituents(
    theorem: Theorem,
    ch: PrimeChar,
    last: usize,
    profile: &ConstituentProfile,
    sandwich: bool,
    c: &mut Checker,
) -> bool {
    c.require(sandwich, "sandwich", || "(ad y)^2 does not vanish".into());
    let ds: Vec<usize> = profile.onsets.iter().copied().filter(|&d| d <= last).collect();
    let p = ch.p();
    if ds.len() < 2 {
        if theorem == Theorem::AnyConstituent {
            if let Some(&ell) = ds.first() {
                c.require(2 * ell > last + 1, "ell_2 < ell", || {
                    format!("no second constituent below degree {} for ell = {ell}", 2 * ell)
                });
            }
        }
        return false;
    }
    let ell = ds[0];
    let ell2 = ds[1] - ds[0];
    let q = ell.is_multiple_of(2).then(|| PrimePower::of(ell as u64 / 2, ch)).flatten();
    c.require(q.is_some(), "ell = 2q", || format!("ell = {ell} is not twice a power of {p}"));
    c.note("ell".into(), ell);
    c.note("ell_2".into(), ell2);
    if p % 2 == 1 {
        c.require(2 * ell2 == ell, "ell_2 = q", || format!("ell = {ell}, ell_2 = {ell2}"));
    }
    if theorem == Theorem::AnyConstituent {
        c.require(ell2 < ell, "ell_2 < ell", || format!("ell = {ell}, ell_2 = {ell2}"));
        let allowed = q.as_ref().map(constituent_lengths).unwrap_or_default();
        c.note(format!("ell_r(ell={ell})"), ell);
        for (r, w) in ds.windows(2).enumerate() {
            let len = w[1] - w[0];
            c.note(format!("ell_r(ell={ell})"), len);
            c.require(allowed.contains(&len), "ell_r", || {
                format!("ell_{} = {len} is not 2q or 2q - p^s for ell = {ell}", r + 2)
            });
        }
    }
    true
}

/// Bounds `lo <= h <= hi` for a second diamond in degree `k`.
pub fn h_bounds(k: usize, ch: PrimeChar) -> (usize, usize) {
    let p = ch.p();
    let generic = ((k - 1) / 2, k + 1);
    if k <= 3 {
        return generic;
    }
    let power = |n: usize| PrimePower::of(n as u64, ch).filter(|q| q.s() >= 1).map(|q| q.q() as usize);
    if k % 2 == 1 {
        if let Some(q) = power(k.div_ceil(2)) {
            return if p == 2 { (q - 1, 2 * q) } else { (q - 1, q - 1) };
        }
    }
    if let Some(q) = power(k) {
        return ((q - 1) / 2, q);
    }
    if k == 5 {
        return (2, 2);
    }
    generic
}

fn check_diamonds(theorem: Theorem, config: &SearchConfig, d: &DiamondProfile, c: &mut Checker) -> bool {
    let ch = config.ch();
    let horizon = config.horizon();
    let n = config.maxdeg;
    let Some(k) = d.k else {
        return false;
    };
    match theorem {
        Theorem::SecondDiamond => {
            if k < n {
                c.require(d.diamond_relation_holds == Some(true), "[vxy] = ((k-1)/2)[vyx]", || format!("k = {k}"));
                if k > 3 {
                    c.require(d.vyy_vanishes == Some(true), "[vyy] = 0", || format!("k = {k}"));
                }
            }
            c.require(d.metabelian_below_k, "L/L^k metabelian", || format!("k = {k}"));
            if 2 * k + 3 > horizon {
                c.note("k(unconstrained)".into(), k);
                return false;
            }
            c.note("k".into(), k);
            c.require(!d.half_divisible, "p does not divide (k-1)/2", || format!("k = {k}"));
            let allowed = classify_final_k(k as u64, ch, true).ok().flatten().is_some();
            c.require(allowed, "k in {3, 5, q, 2q-1}", || format!("k = {k} in characteristic {}", ch.p()));
            true
        }
        Theorem::HValues => {
            let (lo, hi) = h_bounds(k, ch);
            let (glo, ghi) = ((k - 1) / 2, k + 1);
            match d.h {
                Extent::Finite(h) => {
                    if k + h + 1 > horizon {
                        return false;
                    }
                    c.note(format!("h(k={k})"), h);
                    c.require(glo <= h && h <= ghi, "(k-1)/2 <= h <= k+1", || format!("k = {k}, h = {h}"));
                    c.require(lo <= h && h <= hi, "h in case bound", || {
                        format!("k = {k}, h = {h}, bound [{lo}, {hi}]")
                    });
                    true
                }
                Extent::Unbounded { checked_to } => {
                    if k + hi + 1 > horizon || checked_to < hi {
                        return false;
                    }
                    c.require(false, "h in case bound", || format!("k = {k}, h > {checked_to}, bound [{lo}, {hi}]"));
                    true
                }
            }
        }
        _ => false,
    }
}

fn verify(theorem: Theorem, config: &SearchConfig, jobs: usize) -> Result<VerificationReport, SearchError> {
    let kind = match theorem {
        Theorem::FirstConstituent | Theorem::AnyConstituent => AlgebraKind::MaxClass,
        Theorem::SecondDiamond | Theorem::HValues => AlgebraKind::Thin,
    };
    config.expect_kind(kind)?;
    let gathered = config.dispatch(Gather { config, jobs })?;
    let mut violations = Vec::new();
    let mut summary = BTreeMap::new();
    let mut observations = Vec::new();
    let last = config.horizon().saturating_sub(1);
    for (index, (profile, jacobi)) in gathered.profiles.into_iter().zip(gathered.jacobi).enumerate() {
        let mut c = Checker { index, violations: &mut violations, summary: &mut summary };
        if let Some(fail) = jacobi {
            c.require(false, "jacobi (all triples)", || fail);
        }
        let profile = match profile {
            Ok(p) => p,
            Err(e) => {
                c.require(false, "profile", || e);
                continue;
            }
        };
        let asserted = match &profile {
            TableProfile::Constituents { profile, sandwich } => {
                check_constituents(theorem, config.ch(), last, profile, *sandwich, &mut c)
            }
            TableProfile::Diamonds { profile } => check_diamonds(theorem, config, profile, &mut c),
        };
        observations.push(Observation { index, profile, asserted });
    }
    let asserted_count = observations.iter().filter(|o| o.asserted).count();
    Ok(VerificationReport {
        theorem,
        config: config.clone(),
        table_count: observations.len(),
        asserted_count,
        observations,
        pass: violations.is_empty(),
        violations,
        summary,
        stats: gathered.stats,
    })
}

/// `ell = 2q` for every table whose first two constituents are within
/// the horizon; for odd `p` also `ell_2 = q`.
pub fn verify_first_constituent(config: &SearchConfig, jobs: usize) -> Result<VerificationReport, SearchError> {
    verify(Theorem::FirstConstituent, config, jobs)
}

/// Every determined constituent length is `2q` or `2q - p^s` with
/// `p^s <= q`, and `ell_2 < ell`.
pub fn verify_any_constituent(config: &SearchConfig, jobs: usize) -> Result<VerificationReport, SearchError> {
    verify(Theorem::AnyConstituent, config, jobs)
}

/// `k` lies in the admissible set whenever `2k + 3` is within the horizon,
/// together with the relations holding at the second diamond.
pub fn verify_second_diamond(config: &SearchConfig, jobs: usize) -> Result<VerificationReport, SearchError> {
    verify(Theorem::SecondDiamond, config, jobs)
}

/// `h` respects the bound for its case whenever `k + h + 1` is within the
/// horizon.
pub fn verify_h_values(config: &SearchConfig, jobs: usize) -> Result<VerificationReport, SearchError> {
    verify(Theorem::HValues, config, jobs)
}
