//! Bounded enumeration of weight systems whose general member gives a
//! quasismooth link with prescribed invariants, and certificates for the hits.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classify::{classify_link, sasakian_sign, ClassifyOptions, LinkInput, LinkReport, Sign};
use crate::error::{LinkError, Result};
use crate::orlik::{betti2, DEFAULT_ORACLE_CAP};
use crate::polyspec::WeightSystem;
use crate::quasismooth::{check_weights, CheckMode, MonomialSource};

fn default_oracle_cap() -> u64 {
    DEFAULT_ORACLE_CAP
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub max_weight: u64,
    pub max_degree: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_b2: Option<BTreeSet<u64>>,
    #[serde(default)]
    pub require_negative: bool,
    #[serde(default)]
    pub require_torsion_free: bool,
    #[serde(default = "default_oracle_cap")]
    pub oracle_cap: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
    /// Inclusive range for the smallest weight; used to split a search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_weight: Option<[u64; 2]>,
    /// Skip everything up to and including this point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resume_after: Option<Cursor>,
}

impl SearchConfig {
    pub fn new(max_weight: u64, max_degree: u64) -> Self {
        SearchConfig {
            max_weight,
            max_degree,
            target_b2: None,
            require_negative: false,
            require_torsion_free: false,
            oracle_cap: DEFAULT_ORACLE_CAP,
            limit: None,
            first_weight: None,
            resume_after: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LinkError::InvalidConfig(m));
        if self.max_weight == 0 {
            return bad("max_weight must be positive".into());
        }
        if self.max_degree < self.max_weight {
            return bad(format!(
                "max_degree {} is below max_weight {}",
                self.max_degree, self.max_weight
            ));
        }
        if self.oracle_cap == 0 {
            return bad("oracle_cap must be positive".into());
        }
        if let Some([lo, hi]) = self.first_weight {
            if lo == 0 || lo > hi || hi > self.max_weight {
                return bad(format!("first_weight range [{lo}, {hi}] is outside 1..={}", self.max_weight));
            }
        }
        if let Some(c) = &self.resume_after {
            let w = c.weights;
            if w[0] == 0 || w.windows(2).any(|p| p[0] > p[1]) || w[3] > self.max_weight {
                return bad(format!("resume cursor {w:?} is not a sorted tuple in the box"));
            }
            if c.degree == 0 || c.degree > self.max_degree {
                return bad(format!("resume cursor degree {} is outside the box", c.degree));
            }
        }
        Ok(())
    }

    fn first_range(&self) -> (u64, u64) {
        self.first_weight
            .map(|[lo, hi]| (lo, hi))
            .unwrap_or((1, self.max_weight))
    }
}

/// Position of a candidate in the enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cursor {
    pub weights: [u64; 4],
    pub degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub weight_system: WeightSystem,
    pub discovered_by: Cursor,
    pub oracle_cap: u64,
    pub report: LinkReport,
}

fn options(oracle_cap: u64) -> ClassifyOptions {
    ClassifyOptions {
        mode: CheckMode::LinearSystem,
        oracle_cap,
    }
}

impl Certificate {
    /// Classify the general member of O(d) and wrap the report.
    pub fn issue(weights: [u64; 4], degree: u64, oracle_cap: u64) -> Result<Certificate> {
        let ws = WeightSystem::new(weights.to_vec(), degree)?;
        let report = classify_link(&LinkInput::Weights(ws.clone()), options(oracle_cap))?;
        Ok(Certificate {
            weight_system: ws,
            discovered_by: Cursor { weights, degree },
            oracle_cap,
            report,
        })
    }
}

/// Walks (w₀ ≤ w₁ ≤ w₂ ≤ w₃, d) in lexicographic order.
#[derive(Debug, Clone)]
struct Odometer {
    state: Option<Cursor>,
    max_weight: u64,
    max_degree: u64,
    last_first: u64,
}

impl Odometer {
    fn new(config: &SearchConfig) -> Self {
        let (lo, hi) = config.first_range();
        let start = Cursor {
            weights: [lo; 4],
            degree: 1,
        };
        let mut od = Odometer {
            state: Some(start),
            max_weight: config.max_weight,
            max_degree: config.max_degree,
            last_first: hi,
        };
        if let Some(c) = config.resume_after {
            if c >= start {
                od.state = Some(c);
                od.advance();
            }
        }
        od
    }

    fn advance(&mut self) {
        let Some(mut c) = self.state else { return };
        if c.degree < self.max_degree {
            c.degree += 1;
            self.state = Some(c);
            return;
        }
        c.degree = 1;
        match (0..4).rev().find(|&i| c.weights[i] < self.max_weight) {
            Some(i) => {
                let v = c.weights[i] + 1;
                for w in &mut c.weights[i..] {
                    *w = v;
                }
                self.state = (c.weights[0] <= self.last_first).then_some(c);
            }
            None => self.state = None,
        }
    }
}

impl Iterator for Odometer {
    type Item = Cursor;

    fn next(&mut self) -> Option<Cursor> {
        let c = self.state?;
        self.advance();
        Some(c)
    }
}

/// Which filter rejected a candidate; `None` from [`screen`] means it survived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    NotPrimitive,
    LinearTerm,
    ConditionOne,
    NotQuasismooth,
    Sign,
    Betti,
    Torsion,
}

fn gcd4(w: &[u64; 4]) -> u64 {
    w.iter().fold(0, |g, x| g.gcd(x))
}

/// Run the filters on one candidate, cheapest first.
pub fn screen(config: &SearchConfig, at: Cursor) -> Result<std::result::Result<Certificate, Rejection>> {
    let Cursor { weights, degree } = at;
    if gcd4(&weights) != 1 {
        return Ok(Err(Rejection::NotPrimitive));
    }
    if weights.contains(&degree) {
        return Ok(Err(Rejection::LinearTerm));
    }
    let ws = WeightSystem::new(weights.to_vec(), degree)?;
    let source = MonomialSource::LinearSystem(&ws);
    if (0..4).any(|i| source.pointing_monomial(i).is_none()) {
        return Ok(Err(Rejection::ConditionOne));
    }
    if !check_weights(&ws)?.passed {
        return Ok(Err(Rejection::NotQuasismooth));
    }
    if config.require_negative && sasakian_sign(&ws).1 != Sign::Negative {
        return Ok(Err(Rejection::Sign));
    }
    if let Some(targets) = &config.target_b2 {
        if !targets.contains(&betti2(&ws)?) {
            return Ok(Err(Rejection::Betti));
        }
    }
    let cert = Certificate::issue(weights, degree, config.oracle_cap)?;
    if config.require_torsion_free && cert.report.is_torsion_free() != Some(true) {
        return Ok(Err(Rejection::Torsion));
    }
    Ok(Ok(cert))
}

/// Lazy certificate stream in enumeration order.
pub struct Search {
    config: SearchConfig,
    odometer: Odometer,
    emitted: usize,
}

impl Iterator for Search {
    type Item = Result<Certificate>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.config.limit.is_some_and(|l| self.emitted >= l) {
            return None;
        }
        for at in self.odometer.by_ref() {
            match screen(&self.config, at) {
                Ok(Err(_)) => continue,
                Ok(Ok(cert)) => {
                    self.emitted += 1;
                    return Some(Ok(cert));
                }
                Err(e) => return Some(Err(e)),
            }
        }
        None
    }
}

pub fn enumerate(config: &SearchConfig) -> Result<Search> {
    config.validate()?;
    Ok(Search {
        odometer: Odometer::new(config),
        config: config.clone(),
        emitted: 0,
    })
}

/// Same sequence as [`enumerate`], computed one first-weight slice per task.
pub fn enumerate_parallel(config: &SearchConfig) -> Result<Vec<Certificate>> {
    config.validate()?;
    let (lo, hi) = config.first_range();
    let slices: Vec<Vec<Certificate>> = (lo..=hi)
        .into_par_iter()
        .map(|w0| {
            let part = SearchConfig {
                first_weight: Some([w0, w0]),
                limit: config.limit,
                ..config.clone()
            };
            enumerate(&part)?.collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let merged = slices.into_iter().flatten();
    Ok(match config.limit {
        Some(l) => merged.take(l).collect(),
        None => merged.collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDiff {
    pub field: String,
    pub recorded: Value,
    pub recomputed: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub passed: bool,
    pub diffs: Vec<FieldDiff>,
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| Value::String(format!("unserializable: {e}")))
}

/// Recompute the report from the certificate's weights and compare each field.
pub fn verify_certificate(cert: &Certificate) -> Verification {
    let mut diffs = Vec::new();
    let mut push = |field: &str, recorded: Value, recomputed: Value| {
        if recorded != recomputed {
            diffs.push(FieldDiff {
                field: field.to_string(),
                recorded,
                recomputed,
            });
        }
    };
    let c = cert.discovered_by;
    push(
        "discovered_by",
        json(&(c.weights.to_vec(), c.degree)),
        json(&(cert.weight_system.weights(), cert.weight_system.degree())),
    );
    let recomputed = classify_link(&LinkInput::Weights(cert.weight_system.clone()), options(cert.oracle_cap));
    match recomputed {
        Err(e) => push("report", json(&cert.report), Value::String(format!("{}: {e}", e.code()))),
        Ok(report) => {
            let (Value::Object(old), Value::Object(new)) = (json(&cert.report), json(&report)) else {
                unreachable!("reports serialize to objects")
            };
            let keys: BTreeSet<&String> = old.keys().chain(new.keys()).collect();
            for k in keys {
                push(
                    k,
                    old.get(k).cloned().unwrap_or(Value::Null),
                    new.get(k).cloned().unwrap_or(Value::Null),
                );
            }
        }
    }
    Verification {
        passed: diffs.is_empty(),
        diffs,
    }
}

/// One certificate per line.
pub fn write_ndjson<'a, W: Write>(
    mut out: W,
    certs: impl IntoIterator<Item = &'a Certificate>,
) -> std::io::Result<()> {
    for c in certs {
        serde_json::to_writer(&mut out, c)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_ndjson<R: BufRead>(input: R) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let malformed = |message: String| LinkError::MalformedRecord { line: n + 1, message };
        let line = line.map_err(|e| malformed(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?);
    }
    Ok(out)
}
