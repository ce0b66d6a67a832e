//! The single-shot commands. Each returns the JSON document to print and the exit code.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use toricnp::family::{build_delta, denominators, ABParams};
use toricnp::geometry::hodge::hodge_data;
use toricnp::geometry::Polytope;
use toricnp::lattice::{diagonal_nondegenerate, diagonal_ordinary_test, lattice_index, smith_normal_form, IntMatrix};
use toricnp::rational::{bigint_json, gcd_u64, is_prime};
use toricnp::triangulation::{
    build_triangulation, cell_volume_check, cone_volume, ordinarity_modulus, verify_triangulation, Mode,
};
use toricnp::Rational;

use crate::error::{CliError, CliResult, EXIT_OK, EXIT_VERIFICATION};
use crate::record::run_one;
use crate::spec::RunFlags;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub output: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(output: Value) -> Self {
        Outcome { output, code: EXIT_OK }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub enum HodgeInput<'a> {
    Family(ABParams),
    PolytopeFile(&'a Path),
}

pub fn hodge(input: HodgeInput<'_>, csv: Option<&Path>) -> CliResult<Outcome> {
    let (label, poly) = match input {
        HodgeInput::Family(q) => (json!(q.label()), build_delta(q)?.delta),
        HodgeInput::PolytopeFile(path) => (json!(path.display().to_string()), Polytope::parse(&read(path)?)?),
    };
    let hd = hodge_data(&poly)?;
    if let Some(path) = csv {
        write(path, &hd.polygon.to_csv())?;
    }
    let mut out = hd.to_json();
    out["input"] = label;
    out["N"] = bigint_json(&hd.total());
    out["vertices"] = json!(poly.vertices());
    Ok(Outcome::ok(out))
}

pub struct LfunctionArgs<'a> {
    pub family: ABParams,
    pub p: u64,
    pub seed: u64,
    pub budget: u128,
    pub flags: RunFlags,
    pub np_csv: Option<&'a Path>,
    pub hp_csv: Option<&'a Path>,
}

pub fn lfunction(args: LfunctionArgs<'_>) -> CliResult<Outcome> {
    if !is_prime(args.p) {
        return Err(CliError::Input(format!("{} is not prime", args.p)));
    }
    let r = run_one(args.family, args.p, args.seed, None, args.budget, &args.flags, false)?;
    if let (Some(path), Some(np)) = (args.np_csv, &r.np) {
        write(path, &np.to_csv())?;
    }
    if let Some(path) = args.hp_csv {
        write(path, &r.hp.to_csv())?;
    }
    Ok(Outcome::ok(r.to_json()))
}

pub struct TriangulateArgs<'a> {
    pub family: ABParams,
    pub extended: bool,
    pub verify: bool,
    pub full: bool,
    pub off: Option<&'a Path>,
}

pub fn triangulate(args: TriangulateArgs<'_>) -> CliResult<Outcome> {
    let q = args.family;
    let mode = if args.extended { Mode::Extended } else { Mode::Strict };
    let sub = build_triangulation(q, mode)?;
    if let Some(path) = args.off {
        write(path, &sub.to_off())?;
    }
    let volume = cone_volume(q)?;
    let mut out = json!({
        "family": q.label(),
        "mode": if args.extended { "extended" } else { "strict" },
        "cells": sub.cells.len(),
        "cell_volume": q.cell_volume(),
        "cell_volumes_match": cell_volume_check(&sub),
        "cone_volume": toricnp::rational::rational_json(&volume),
        "count_times_cell_volume": sub.cells.len() as u64 * q.cell_volume(),
        "refined": sub.refined,
        "lifting": sub.lifting.to_json(),
    });
    if args.full {
        out["subdivision"] = sub.to_json();
    }
    let mut code = EXIT_OK;
    if args.verify {
        let report = verify_triangulation(&sub)?;
        out["verification"] = report.to_json();
        out["verified"] = json!(report.passed());
        let volumes_ok = cell_volume_check(&sub)
            && Rational::from_integer((sub.cells.len() as u64 * q.cell_volume()).into()) == volume;
        if !report.passed() || !volumes_ok {
            code = EXIT_VERIFICATION;
        }
    }
    Ok(Outcome { output: out, code })
}

pub fn verify_ab(family: ABParams, p: Option<u64>) -> CliResult<Outcome> {
    let q = family;
    let ab = build_delta(q)?;
    let (d_delta, d_cone, d_prime) = denominators(&ab)?;
    let db = q.d * q.b;
    let expected = (q.expected_denominator(), db / gcd_u64(q.a + q.b, q.d), q.a);
    let moduli = ordinarity_modulus(&q);
    let matches = (d_delta, d_cone, d_prime) == expected;
    let mut out = json!({
        "family": q.label(),
        "s": q.s(),
        "denominators": {
            "delta": d_delta,
            "delta_d_cone": d_cone,
            "delta_prime_cone": d_prime,
            "formulas": {
                "delta": expected.0,
                "delta_d_cone": expected.1,
                "delta_prime_cone": expected.2,
            },
            "match": matches,
        },
        "moduli": {
            "delta_prime": moduli.delta_prime,
            "delta_d_cells": moduli.delta_d,
            "ordinarity_modulus": moduli.modulus,
        },
    });
    if let Some(p) = p {
        if !is_prime(p) {
            return Err(CliError::Input(format!("{p} is not prime")));
        }
        q.check_prime(p)?;
        out["p"] = json!(p);
        out["p_mod_modulus"] = json!(p % moduli.modulus);
        out["congruence_holds"] = json!(p % moduli.modulus == 1 % moduli.modulus);
    }
    Ok(Outcome { output: out, code: if matches { EXIT_OK } else { EXIT_VERIFICATION } })
}

pub fn snf(matrix: &Path, p: Option<u64>) -> CliResult<Outcome> {
    let m = IntMatrix::parse(&read(matrix)?)?;
    let s = smith_normal_form(&m);
    let mut out = json!({
        "diag": s.diag.iter().map(bigint_json).collect::<Vec<_>>(),
        "U": s.u.to_json(),
        "V": s.v.to_json(),
        "lattice_index": bigint_json(&lattice_index(&m)),
    });
    if let Some(p) = p {
        out["p"] = json!(p);
        out["diagonal_nondegenerate"] = json!(diagonal_nondegenerate(&m, p)?);
        out["diagonal_ordinary_test"] = json!(diagonal_ordinary_test(&m, p)?);
    }
    Ok(Outcome::ok(out))
}
