//! One sampled member of a family, its L-function and the comparison with the Hodge polygon.

use std::time::Instant;

use serde_json::{json, Value};
use toricnp::family::{build_delta, nondegenerate, sample_ab_with, ABParams};
use toricnp::field::make_field;
use toricnp::geometry::hodge::hodge_data;
use toricnp::geometry::ConvexGraph;
use toricnp::lfunction::{compare, evaluation_cost, l_polynomial, l_series, newton_polygon, PowerSums, Verdict};
use toricnp::Error;

use crate::error::{CliError, CliResult};
use crate::spec::RunFlags;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// NP computed and compared.
    Ok,
    /// The L-function did not have the expected shape; the sample is probably degenerate.
    DegenerateSuspect,
    /// The torus enumeration exceeded the budget.
    Refused,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::DegenerateSuspect => "degenerate-suspect",
            Status::Refused => "refused",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Status::Ok, Status::DegenerateSuspect, Status::Refused].into_iter().find(|x| x.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub family: ABParams,
    pub p: u64,
    /// Position within its experiment cell group; `None` for single runs.
    pub sample: Option<usize>,
    pub seed: u64,
    pub degree: u64,
    pub hp: ConvexGraph,
    pub np: Option<ConvexGraph>,
    pub verdict: Option<Verdict>,
    pub status: Status,
    /// Whether the nondegeneracy report found no degenerate face.
    pub clean: bool,
    pub error: Option<String>,
    /// Sample, nondegeneracy report and other details kept verbatim.
    pub detail: Value,
    pub timing_ms: u64,
}

impl RunRecord {
    /// Counts toward the generic-ordinarity witness.
    pub fn is_witness(&self) -> bool {
        self.verdict == Some(Verdict::Equal) && self.clean
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family.label(),
            "p": self.p,
            "sample": self.sample,
            "seed": self.seed,
            "N": self.degree,
            "HP": self.hp.to_json(),
            "NP": self.np.as_ref().map(ConvexGraph::to_json),
            "verdict": self.verdict.map(Verdict::as_str),
            "status": self.status.as_str(),
            "clean": self.clean,
            "error": self.error,
            "detail": self.detail,
            "timing_ms": self.timing_ms,
        })
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let verdict = match &v["verdict"] {
            Value::Null => None,
            x => Some(Verdict::parse(x.as_str()?)?),
        };
        let np = match &v["NP"] {
            Value::Null => None,
            x => Some(ConvexGraph::from_json(x)?),
        };
        Some(RunRecord {
            family: ABParams::parse(v["family"].as_str()?).ok()?,
            p: v["p"].as_u64()?,
            sample: v["sample"].as_u64().map(|s| s as usize),
            seed: v["seed"].as_u64()?,
            degree: v["N"].as_u64()?,
            hp: ConvexGraph::from_json(&v["HP"])?,
            np,
            verdict,
            status: Status::parse(v["status"].as_str()?)?,
            clean: v["clean"].as_bool()?,
            error: v["error"].as_str().map(String::from),
            detail: v["detail"].clone(),
            timing_ms: v["timing_ms"].as_u64().unwrap_or(0),
        })
    }
}

/// Samples a member of `family` over `F_p` and compares its Newton polygon with the Hodge polygon.
///
/// Budget refusals come back as records with status [`Status::Refused`] when `refusal_as_record`
/// is set, and as errors otherwise.
pub fn run_one(
    family: ABParams,
    p: u64,
    seed: u64,
    sample: Option<usize>,
    budget: u128,
    flags: &RunFlags,
    refusal_as_record: bool,
) -> CliResult<RunRecord> {
    let start = Instant::now();
    let base = make_field(p, 1)?;
    family.check_prime(p)?;
    let ab = build_delta(family)?;
    let hodge = hodge_data(&ab.delta)?;
    let n = hodge.polygon.last_x();
    let m = family.m();
    let wanted = n as usize + if flags.check_overdegree { 2 } else { 0 };
    let mut record = RunRecord {
        family,
        p,
        sample,
        seed,
        degree: n,
        hp: hodge.polygon.clone(),
        np: None,
        verdict: None,
        status: Status::Ok,
        clean: false,
        error: None,
        detail: json!({"nondeg_mode": flags.nondeg_label(), "g_range": flags.g_range.as_str()}),
        timing_ms: 0,
    };

    let required = evaluation_cost(p, m, wanted);
    if required > budget {
        let err = Error::BudgetExceeded { required, budget };
        if !refusal_as_record {
            return Err(err.into());
        }
        record.status = Status::Refused;
        record.error = Some(err.to_string());
        record.timing_ms = start.elapsed().as_millis() as u64;
        return Ok(record);
    }

    let s = sample_ab_with(family, &base, seed, flags.g_range)?;
    let report = nondegenerate(&s.f, &ab.delta, &base, flags.nondeg)?;
    record.clean = report.is_clean();
    record.detail["polynomial"] = s.f.to_json();
    record.detail["deligne"] = s.deligne.as_json();
    record.detail["resamples"] = json!(s.resamples);
    record.detail["nondeg"] = report.to_json();

    let sums = PowerSums::compute(&s.f, &base, wanted, budget)?;
    if flags.check_overdegree {
        let series = l_series(&sums, m, wanted)?;
        let vanish = series[n as usize + 1].is_zero() && series[n as usize + 2].is_zero();
        record.detail["overdegree_vanishes"] = json!(vanish);
        if !vanish {
            record.status = Status::DegenerateSuspect;
            record.error = Some(format!("A_{} or A_{} is nonzero", n + 1, n + 2));
        }
    }
    match l_polynomial(&sums, m, n as usize) {
        Ok(l) => {
            let np = newton_polygon(&l, 1);
            match compare(&np, &hodge.polygon) {
                Ok(v) if record.status == Status::Ok => record.verdict = Some(v),
                Ok(_) => {}
                Err(e) => {
                    record.status = Status::DegenerateSuspect;
                    record.error = Some(e.to_string());
                }
            }
            record.np = Some(np);
        }
        Err(e @ Error::NonIntegral { .. }) => {
            record.status = Status::DegenerateSuspect;
            record.error = Some(e.to_string());
        }
        Err(e) => return Err(CliError::from(e)),
    }
    record.timing_ms = start.elapsed().as_millis() as u64;
    Ok(record)
}
