//! Full pipeline: from a polynomial or a weight system to a [`LinkReport`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ambient::{
    is_well_formed_space, singular_strata, HypersurfaceWellFormedness, SpaceWellFormedness,
    Stratum, WellFormedWitness,
};
use crate::error::{LinkError, Result};
use crate::orlik::{alexander_divisor, betti2, betti2_oracle, DivisorElement, DEFAULT_ORACLE_CAP};
use crate::polyspec::{WeightSystem, WeightedPolynomial, VARIABLE_NAMES};
use crate::quasismooth::{check_quasismooth, CheckMode, MonomialSource, QuasismoothVerdict};
use crate::topology::{second_homology, BranchComponent, HomologySummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Null,
    Positive,
}

impl Sign {
    pub fn provenance(self) -> &'static str {
        match self {
            Sign::Negative => "certified: d - sum(w) > 0 gives a negative Sasakian structure",
            Sign::Null | Sign::Positive => "indicative: sign of d - sum(w) only",
        }
    }
}

/// d − Σwᵢ and its sign.
pub fn sasakian_sign(ws: &WeightSystem) -> (i128, Sign) {
    let gap = ws.degree() as i128 - ws.weight_sum() as i128;
    let sign = match gap {
        g if g > 0 => Sign::Negative,
        0 => Sign::Null,
        _ => Sign::Positive,
    };
    (gap, sign)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MetricFlags {
    pub negative_eta_einstein: bool,
    pub lorentzian_sasaki_einstein: bool,
}

#[derive(Debug, Clone)]
pub enum LinkInput {
    Polynomial(WeightedPolynomial),
    /// Weights and degree only; the general member of O(d) is analysed.
    Weights(WeightSystem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Monomial source for polynomial input. Weight-only input always uses
    /// the linear system.
    pub mode: CheckMode,
    /// Largest cyclic group the Betti oracle may expand.
    pub oracle_cap: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            mode: CheckMode::Support,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub weight_system: WeightSystem,
    pub polynomial: Option<String>,
    pub general_member: bool,
    pub quasismooth: QuasismoothVerdict,
    pub ambient_well_formed: SpaceWellFormedness,
    pub hypersurface_well_formed: HypersurfaceWellFormedness,
    pub singular_strata: Vec<Stratum>,
    /// `None` when the branch divisor could not be formed (only possible
    /// when the quasismoothness check failed).
    pub branch_components: Option<Vec<BranchComponent>>,
    pub alexander_divisor: DivisorElement,
    pub b2: u64,
    /// Independent group-ring value, when the group is under the cap.
    pub b2_oracle: Option<u64>,
    pub homology: Option<HomologySummary>,
    pub index_gap: i128,
    pub sign: Sign,
    pub sign_provenance: String,
    pub diffeo_type: Option<String>,
    pub flags: MetricFlags,
    pub notes: Vec<String>,
}

impl LinkReport {
    pub fn is_torsion_free(&self) -> Option<bool> {
        self.homology.as_ref().map(HomologySummary::is_torsion_free)
    }
}

fn diffeo_name(b2: u64) -> String {
    if b2 == 0 {
        "S^5".to_string()
    } else {
        format!("#{b2} S^2 x S^3")
    }
}

pub fn classify_link(input: &LinkInput, options: ClassifyOptions) -> Result<LinkReport> {
    let (poly, ws) = match input {
        LinkInput::Polynomial(f) => {
            let f = f.normalized()?;
            let ws = f.weight_system().clone();
            (Some(f), ws)
        }
        LinkInput::Weights(ws) => (None, ws.normalized()?),
    };
    if ws.len() != 4 {
        return Err(LinkError::WrongArity { found: ws.len() });
    }
    let source = match &poly {
        Some(f) => MonomialSource::new(f, options.mode),
        None => MonomialSource::LinearSystem(&ws),
    };
    let mut notes = Vec::new();
    if poly.is_none() {
        notes.push("weights-only input: results describe the general member of O(d)".to_string());
    }

    let quasismooth = check_quasismooth(source)?;
    let ambient_well_formed = is_well_formed_space(ws.weights())?;
    let hypersurface_well_formed = match (&poly, options.mode) {
        (Some(f), CheckMode::Support) => crate::ambient::is_well_formed_hypersurface(f)?,
        _ => crate::ambient::is_well_formed_general_hypersurface(&ws)?,
    };
    if let Some(WellFormedWitness::ContainsStratum { stratum }) = &hypersurface_well_formed.witness {
        notes.push(format!(
            "hypersurface contains the Z_{} stratum where {} vanish",
            stratum.group_order,
            stratum
                .zero_set
                .iter()
                .map(|&i| VARIABLE_NAMES[i])
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    let singular_strata = singular_strata(ws.weights())?;

    let branch_components = match crate::topology::branch_components(&source) {
        Ok(c) => Some(c),
        Err(e) if !quasismooth.passed => {
            notes.push(format!("branch divisor not formed: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    for c in branch_components.iter().flatten() {
        if !c.curve_ambient_well_formed() {
            let w = c.curve_weights;
            notes.push(format!(
                "branch curve {{{}=0}} lives in P({},{},{}), which is not well-formed; genus formula applied as is",
                VARIABLE_NAMES[c.coordinate_index], w[0], w[1], w[2]
            ));
        }
    }

    let alexander_divisor = alexander_divisor(&ws);
    let b2 = betti2(&ws)?;
    let b2_oracle = match betti2_oracle(&ws, options.oracle_cap) {
        Ok(o) if o == b2 => Some(o),
        Ok(oracle) => return Err(LinkError::OracleMismatch { b2, oracle }),
        Err(LinkError::CapExceeded { order, cap }) => {
            notes.push(format!("oracle skipped: group order {order} exceeds cap {cap}"));
            None
        }
        Err(e) => return Err(e),
    };

    let homology = branch_components
        .as_deref()
        .map(|c| second_homology(b2, c));
    let (index_gap, sign) = sasakian_sign(&ws);
    let torsion_free = homology.as_ref().is_some_and(HomologySummary::is_torsion_free);
    let diffeo_type = (quasismooth.passed && torsion_free).then(|| diffeo_name(b2));
    let certified = quasismooth.passed && sign == Sign::Negative;
    let flags = MetricFlags {
        negative_eta_einstein: certified,
        lorentzian_sasaki_einstein: certified,
    };

    Ok(LinkReport {
        polynomial: poly.as_ref().map(ToString::to_string),
        general_member: poly.is_none(),
        weight_system: ws,
        quasismooth,
        ambient_well_formed,
        hypersurface_well_formed,
        singular_strata,
        branch_components,
        alexander_divisor,
        b2,
        b2_oracle,
        homology,
        index_gap,
        sign,
        sign_provenance: sign.provenance().to_string(),
        diffeo_type,
        flags,
        notes,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Plain-text rendering of a report.
pub fn render_text(r: &LinkReport) -> String {
    let ws = &r.weight_system;
    let mut out = String::new();
    let weights: Vec<String> = ws.weights().iter().map(u64::to_string).collect();
    let ambient = format!("P({})", weights.join(","));
    match &r.polynomial {
        Some(p) => writeln!(out, "hypersurface: {p} = 0 in {ambient}, degree {}", ws.degree()),
        None => writeln!(out, "hypersurface: general member of O({}) in {ambient}", ws.degree()),
    }
    .unwrap();
    let mode = match r.quasismooth.mode {
        CheckMode::Support => "support",
        CheckMode::LinearSystem => "linear system",
    };
    writeln!(out, "quasismooth ({mode}): {}", yes_no(r.quasismooth.passed)).unwrap();
    for f in &r.quasismooth.failures {
        writeln!(out, "  condition {} failed at {:?}: {}", f.condition, f.indices, f.explanation).unwrap();
    }
    for a in &r.quasismooth.advisories {
        writeln!(out, "  note (condition {}) at {:?}: {}", a.condition, a.indices, a.explanation).unwrap();
    }
    let a = &r.ambient_well_formed;
    match (a.offending_index, a.offending_gcd) {
        (Some(i), Some(g)) => writeln!(
            out,
            "ambient well-formed: no (weights without {} share the factor {g})",
            VARIABLE_NAMES[i]
        ),
        _ => writeln!(out, "ambient well-formed: yes"),
    }
    .unwrap();
    writeln!(out, "hypersurface well-formed: {}", yes_no(r.hypersurface_well_formed.well_formed)).unwrap();
    match &r.branch_components {
        None => writeln!(out, "branch divisor: not formed").unwrap(),
        Some(cs) if cs.is_empty() => writeln!(out, "branch divisor: none").unwrap(),
        Some(cs) => {
            let terms: Vec<String> = cs
                .iter()
                .map(|c| format!("(1 - 1/{}) D_{}", c.ramification, VARIABLE_NAMES[c.coordinate_index]))
                .collect();
            writeln!(out, "branch divisor: {}", terms.join(" + ")).unwrap();
            for c in cs {
                let w = c.curve_weights;
                writeln!(
                    out,
                    "  D_{0} = {{{0}=0}}: m = {1}, curve in P({2},{3},{4}) of degree {5}, genus {6}",
                    VARIABLE_NAMES[c.coordinate_index],
                    c.ramification,
                    w[0],
                    w[1],
                    w[2],
                    c.curve_degree,
                    c.genus
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "divisor of Alexander polynomial: {}", r.alexander_divisor).unwrap();
    match r.b2_oracle {
        Some(o) => writeln!(out, "b2 = {} (oracle {o})", r.b2),
        None => writeln!(out, "b2 = {}", r.b2),
    }
    .unwrap();
    match &r.homology {
        Some(h) => writeln!(out, "H2(L, Z) = {h}").unwrap(),
        None => writeln!(out, "H2(L, Z): undetermined").unwrap(),
    }
    let sign = match r.sign {
        Sign::Negative => "negative",
        Sign::Null => "null",
        Sign::Positive => "positive",
    };
    writeln!(out, "d - sum(w) = {} ({sign}; {})", r.index_gap, r.sign_provenance).unwrap();
    match &r.diffeo_type {
        Some(d) => writeln!(out, "diffeomorphic to {d}").unwrap(),
        None => writeln!(out, "diffeomorphism type: not certified").unwrap(),
    }
    writeln!(
        out,
        "negative Sasaki eta-Einstein: {}; Lorentzian Sasaki-Einstein: {}",
        yes_no(r.flags.negative_eta_einstein),
        yes_no(r.flags.lorentzian_sasaki_einstein)
    )
    .unwrap();
    for n in &r.notes {
        writeln!(out, "note: {n}").unwrap();
    }
    out
}
