use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::time::Instant;

use serde_json::{json, Value};
use thinlie::arith::{as_prime_power, binom_exact, binom_mod, Field, PrimeChar, PrimeField, PrimePower, RationalField};
use thinlie::congruence::{
    chain_hypothesis_test, classify_admissible_k, classify_final_k, double_power_test, frobenius_power_test,
    reflection_identity_check,
};
use thinlie::lie_engine::{GradedAlgebra, JacobiMode};
use thinlie::search::{
    run_ordered, verify_any_constituent, verify_first_constituent, verify_h_values, verify_second_diamond, AlgebraKind,
    BranchStats, FieldTask, MaxClassSearch, SearchConfig, ThinSearch, VerificationReport,
};

use crate::{AlgebraDocument, CliError, ReportDocument, ReportViolation};

fn violation(subject: impl Into<String>, check: &str, detail: impl Into<String>) -> ReportViolation {
    ReportViolation { subject: subject.into(), check: check.into(), detail: detail.into() }
}

fn char_of(p: u64) -> Result<PrimeChar, CliError> {
    Ok(PrimeChar::new(p)?)
}

/// Whether the extended-range hypothesis should hold at `v` for odd `p`:
/// `v` lies in `{3, 5, q, 2q - 1}`. This drops `7` and `2q + 1` from the
/// chain-lemma set, except that `7 = q` survives when `p = 7`.
fn extended_expected(v: u64, ch: PrimeChar) -> bool {
    let p = ch.p() as u64;
    let power = |n: u64| n > 1 && as_prime_power(n, p).is_some();
    v == 3 || v == 5 || power(v) || power(v.div_ceil(2))
}

/// Tabulates the chain hypothesis for every odd `v = 2n + 1` in `3..=max`
/// against the closed-form classifications.
///
/// The plain hypothesis must hold exactly on the chain-lemma set. The
/// extended-range hypothesis must select a subset of it; with
/// `extended_range` and odd `p` the subset must be exactly the one without
/// `7` and `2q + 1`.
pub fn admissible(p: u64, max: u64, extended_range: bool) -> Result<ReportDocument, CliError> {
    let started = Instant::now();
    if max < 3 {
        return Err(CliError::Config(format!("--max must be at least 3, got {max}")));
    }
    let ch = char_of(p)?;
    let odd_p = ch.p() % 2 == 1;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut sets: [BTreeSet<u64>; 4] = Default::default();
    for v in (3..=max).step_by(2) {
        let n = (v - 1) / 2;
        let chain = chain_hypothesis_test(n, ch, false);
        let extended = chain_hypothesis_test(n, ch, true);
        let lemma = classify_admissible_k(v, ch).expect("odd");
        let fin = classify_final_k(v, ch, true).expect("odd");
        let subject = format!("v = {v}");
        if chain != lemma.is_some() {
            violations.push(violation(
                &subject,
                "chain-lemma set",
                format!("hypothesis {chain}, closed form {lemma:?}"),
            ));
        }
        if extended && !chain {
            violations.push(violation(&subject, "extended range", "extended hypothesis holds without the plain one"));
        }
        if extended_range && odd_p {
            let expected = extended_expected(v, ch);
            if extended != expected {
                violations.push(violation(
                    &subject,
                    "extended range",
                    format!("hypothesis {extended}, expected {expected}"),
                ));
            }
        }
        for (set, hit) in sets.iter_mut().zip([chain, extended, lemma.is_some(), fin.is_some()]) {
            if hit {
                set.insert(v);
            }
        }
        rows.push(json!({
            "v": v,
            "chain_hypothesis": chain,
            "extended_range": extended,
            "lemma": lemma.map(|f| f.label()),
            "final": fin.map(|f| f.label()),
        }));
    }
    let [chain, extended, lemma, fin] = sets;
    let results = json!({
        "rows": rows,
        "chain_hypothesis_set": chain,
        "extended_range_set": extended,
        "lemma_set": lemma,
        "final_set": fin,
    });
    let config = json!({ "p": p, "max": max, "extended_range": extended_range });
    Ok(ReportDocument::new("admissible", config, results, violations, started))
}

struct Enumerate<'a> {
    config: &'a SearchConfig,
    jobs: usize,
    out: &'a mut dyn Write,
}

impl FieldTask for Enumerate<'_> {
    type Output = Result<(usize, BranchStats), std::io::Error>;

    fn run<F: Field>(self, field: F) -> Self::Output {
        let mut count = 0;
        let mut failure = None;
        let out = self.out;
        let mut emit = |doc: AlgebraDocument| {
            if failure.is_none() {
                count += 1;
                if let Err(e) = writeln!(out, "{}", doc.to_json_line()) {
                    failure = Some(e);
                }
            }
        };
        let stats = match self.config.kind {
            AlgebraKind::MaxClass => {
                let tree = MaxClassSearch::new(field, self.config).expect("validated config");
                run_ordered(&tree, self.jobs, |t| emit(AlgebraDocument::from_maxclass(&t)))
            }
            AlgebraKind::Thin => {
                let tree = ThinSearch::new(field, self.config).expect("validated config");
                run_ordered(&tree, self.jobs, |t| emit(AlgebraDocument::from_thin(&t)))
            }
        };
        match failure {
            Some(e) => Err(e),
            None => out.flush().map(|_| (count, stats)),
        }
    }
}

/// Writes one document per consistent table, in enumeration order, to
/// `out`. The order and the bytes do not depend on `jobs`.
pub fn enumerate(
    kind: AlgebraKind,
    p: u64,
    degree: usize,
    jobs: usize,
    out: &mut dyn Write,
    out_name: &str,
) -> Result<ReportDocument, CliError> {
    let started = Instant::now();
    let config = SearchConfig::new(char_of(p)?, degree, kind)?;
    let (count, stats) = config
        .dispatch(Enumerate { config: &config, jobs, out })
        .map_err(|source| CliError::Io { path: out_name.into(), source })?;
    let results = json!({ "tables": count, "stats": stats });
    let echo = json!({ "search": config, "jobs": jobs, "out": out_name });
    Ok(ReportDocument::new("enumerate", echo, results, Vec::new(), started))
}

/// Reads a JSON-lines stream of documents; blank lines are skipped.
pub fn read_documents(input: impl BufRead) -> Result<Vec<AlgebraDocument>, CliError> {
    let mut docs = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|source| CliError::Io { path: "input".into(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        docs.push(AlgebraDocument::from_json(&line).map_err(|e| CliError::Document(format!("line {}: {e}", i + 1)))?);
    }
    Ok(docs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    Constituents,
    Diamonds,
    Sandwich,
    Centralizers,
}

impl Analysis {
    fn kind(self) -> AlgebraKind {
        match self {
            Analysis::Diamonds => AlgebraKind::Thin,
            _ => AlgebraKind::MaxClass,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Analysis::Constituents => "constituents",
            Analysis::Diamonds => "diamonds",
            Analysis::Sandwich => "sandwich",
            Analysis::Centralizers => "centralizers",
        }
    }
}

struct Analyze<'a> {
    doc: &'a AlgebraDocument,
    which: Analysis,
    subject: String,
}

impl FieldTask for Analyze<'_> {
    type Output = Result<(Value, Vec<ReportViolation>), CliError>;

    fn run<F: Field>(self, field: F) -> Self::Output {
        let s = &self.subject;
        let mut violations = Vec::new();
        let value = if self.which == Analysis::Diamonds {
            let t = self.doc.to_thin(field)?;
            if let Err(e) = t.jacobi_consistency(t.maxdeg(), JacobiMode::Generators) {
                violations.push(violation(s, "jacobi", format!("{e:?}")));
            }
            match t.diamond_profile() {
                Ok(profile) => serde_json::to_value(profile).expect("profiles serialize"),
                Err(e) => {
                    violations.push(violation(s, "diamonds", e.to_string()));
                    Value::Null
                }
            }
        } else {
            let t = self.doc.to_maxclass(field)?;
            let n = t.maxdeg();
            if let Err(e) = t.jacobi_consistency(n, JacobiMode::Generators) {
                violations.push(violation(s, "jacobi", format!("{e:?}")));
            }
            match self.which {
                Analysis::Constituents => serde_json::to_value(t.constituent_profile()).expect("profiles serialize"),
                Analysis::Sandwich => {
                    let ok = t.sandwich_check(n);
                    if !ok {
                        violations.push(violation(s, "sandwich", "(ad y)^2 does not vanish"));
                    }
                    json!(ok)
                }
                _ => {
                    let f = t.field();
                    let points: Vec<[String; 2]> = t
                        .centralizer_sequence()
                        .points
                        .iter()
                        .map(|pt| [f.format(&pt.beta), f.format(&pt.gamma)])
                        .collect();
                    json!(points)
                }
            }
        };
        Ok((value, violations))
    }
}

/// Runs one analysis over every document. Documents of the wrong kind are
/// a usage error; inconsistent tables are reported as violations.
pub fn analyze(docs: &[AlgebraDocument], which: Analysis, source: &str) -> Result<ReportDocument, CliError> {
    let started = Instant::now();
    let mut results = Vec::new();
    let mut violations = Vec::new();
    for (index, doc) in docs.iter().enumerate() {
        if doc.kind != which.kind() {
            return Err(CliError::KindMismatch { expected: which.kind(), found: doc.kind });
        }
        let task = Analyze { doc, which, subject: format!("document {index}") };
        let (value, mut found) = if doc.p == 0 {
            task.run(RationalField::default())?
        } else {
            task.run(PrimeField::new(char_of(doc.p as u64)?))?
        };
        violations.append(&mut found);
        results.push(json!({ "index": index, "p": doc.p, "maxdeg": doc.maxdeg, which.name(): value }));
    }
    let config = json!({ "in": source, "analysis": which.name(), "documents": docs.len() });
    Ok(ReportDocument::new("analyze", config, Value::Array(results), violations, started))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    FirstConstituent,
    AnyConstituent,
    SecondDiamond,
    HValues,
    Identities,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::FirstConstituent => "first-constituent",
            Target::AnyConstituent => "any-constituent",
            Target::SecondDiamond => "second-diamond",
            Target::HValues => "h-values",
            Target::Identities => "identities",
        }
    }
}

/// Binomial and power-criterion sweeps up to `bound`: Lucas against exact
/// binomials for `a, b <= bound`, both power criteria for `n <= bound`, and
/// the reflection identity for every `q = p^s <= bound`.
fn identities(ch: PrimeChar, bound: usize) -> (Value, Vec<ReportViolation>) {
    let p = ch.p() as u64;
    let bound = bound as u64;
    let mut violations = Vec::new();
    for a in 0..=bound {
        for b in 0..=a {
            let exact = ch.from_bigint(&binom_exact(a, b).into());
            if binom_mod(a, b, ch) != exact {
                violations.push(violation(format!("C({a}, {b})"), "lucas", "residue differs from the exact binomial"));
            }
        }
    }
    let mut powers = Vec::new();
    for n in 1..=bound {
        let power = as_prime_power(n, p).is_some();
        if power {
            powers.push(n);
        }
        for (name, holds) in
            [("frobenius-power", frobenius_power_test(n, ch)), ("double-power", double_power_test(n, ch))]
        {
            if holds != power {
                violations.push(violation(format!("n = {n}"), name, format!("criterion {holds}, power of p {power}")));
            }
        }
    }
    let mut reflected = Vec::new();
    for s in 1.. {
        let q = PrimePower::new(ch, s).expect("small exponent");
        if q.q() > bound {
            break;
        }
        reflected.push(q.q());
        if !reflection_identity_check(q) {
            violations.push(violation(format!("q = {}", q.q()), "reflection", "identity fails"));
        }
    }
    let results = json!({
        "binomials_checked": (bound + 1) * (bound + 2) / 2,
        "powers_of_p": powers,
        "reflection_q": reflected,
    });
    (results, violations)
}

fn report_violations(report: &VerificationReport) -> Vec<ReportViolation> {
    report.violations.iter().map(|v| violation(format!("table {}", v.index), &v.check, v.detail.clone())).collect()
}

/// Runs a theorem check over the enumerated universe, or the identity
/// sweeps for [`Target::Identities`]. `cross_check` re-verifies every
/// table against all Jacobi triples.
pub fn verify(
    target: Target,
    p: u64,
    degree: usize,
    jobs: usize,
    cross_check: bool,
) -> Result<ReportDocument, CliError> {
    let started = Instant::now();
    let ch = char_of(p)?;
    let echo_base =
        json!({ "theorem": target.name(), "p": p, "degree": degree, "jobs": jobs, "cross_check": cross_check });
    if target == Target::Identities {
        if ch.is_zero() {
            return Err(CliError::Config("identities need a prime characteristic".into()));
        }
        let (results, violations) = identities(ch, degree);
        return Ok(ReportDocument::new("verify", echo_base, results, violations, started));
    }
    let kind = match target {
        Target::FirstConstituent | Target::AnyConstituent => AlgebraKind::MaxClass,
        _ => AlgebraKind::Thin,
    };
    let mode = if cross_check { JacobiMode::AllTriples } else { JacobiMode::Generators };
    let config = SearchConfig::new(ch, degree, kind)?.with_jacobi_mode(mode);
    let report = match target {
        Target::FirstConstituent => verify_first_constituent(&config, jobs),
        Target::AnyConstituent => verify_any_constituent(&config, jobs),
        Target::SecondDiamond => verify_second_diamond(&config, jobs),
        _ => verify_h_values(&config, jobs),
    }?;
    let violations = report_violations(&report);
    let results = json!({
        "tables": report.table_count,
        "asserted": report.asserted_count,
        "summary": report.summary,
        "observations": report.observations,
        "stats": report.stats,
    });
    let echo = json!({ "theorem": target.name(), "search": config, "jobs": jobs, "cross_check": cross_check });
    Ok(ReportDocument::new("verify", echo, results, violations, started))
}
