//! Job layer of the command-line tool: a serializable job description, a
//! deterministic runner, and the JSON/CSV renderers.
//!
//! Exit codes: 0 success, 2 an identity check failed, 3 invalid input.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use kr_core::cartan::WeightVector;
use kr_core::error::Error as CoreError;
use kr_core::fermionic::{self, ModeMap};
use kr_core::genseries::{self, Report};
use kr_core::sce;
use kr_core::{build_cartan, characters, qsystem, AlgebraId, CartanData};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;

/// One (color, m, multiplicity) entry of a mode map, with one-based color.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NuEntry {
    pub a: usize,
    pub m: u32,
    pub mult: u64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Qsys,
    Mult,
    Char,
    Sce,
    Verify,
}

/// Full description of one run; identical specs produce identical output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JobSpec {
    /// Schema version of this spec and of the rendered output.
    #[serde(default = "default_version")]
    pub version: u32,
    pub algebra: String,
    pub command: Command,
    #[serde(default)]
    pub nu: Vec<NuEntry>,
    #[serde(default)]
    pub pattern: Vec<NuEntry>,
    #[serde(default = "default_level")]
    pub level: u32,
    #[serde(default = "default_degree")]
    pub degree: u32,
    /// For `char`: the KR index (a, m), one-based color.
    #[serde(default)]
    pub kr: Option<(usize, u32)>,
    /// For `mult`: a single weight in the fundamental-weight basis.
    #[serde(default)]
    pub weight: Option<Vec<i64>>,
    /// For `verify`: which suite (qsys | genseries | expansion | k0 | sce | all).
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_det")]
    pub max_det: u64,
    #[serde(default)]
    pub experimental: bool,
    /// For `qsys`: when false, report residuals but always exit 0.
    #[serde(default = "default_check")]
    pub check: bool,
    #[serde(default)]
    pub format: Format,
}

fn default_check() -> bool {
    true
}

fn default_version() -> u32 {
    1
}
fn default_level() -> u32 {
    2
}
fn default_degree() -> u32 {
    3
}
fn default_samples() -> usize {
    20
}
fn default_max_det() -> u64 {
    1_000_000
}

/// Parses "a:m:mult,a:m:mult" or a JSON array of {a, m, mult}.
pub fn parse_mode_entries(s: &str) -> Result<Vec<NuEntry>, CoreError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.starts_with('[') {
        return serde_json::from_str(s)
            .map_err(|e| CoreError::InvalidInput(format!("bad mode list: {e}")));
    }
    s.split(',')
        .map(|triple| {
            let parts: Vec<&str> = triple.split(':').collect();
            if parts.len() != 3 {
                return Err(CoreError::InvalidInput(format!(
                    "expected a:m:mult, got `{triple}`"
                )));
            }
            let parse = |x: &str| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|_| CoreError::InvalidInput(format!("bad number `{x}`")))
            };
            Ok(NuEntry {
                a: parse(parts[0])? as usize,
                m: parse(parts[1])? as u32,
                mult: parse(parts[2])?,
            })
        })
        .collect()
}

fn to_mode_map(entries: &[NuEntry], rank: usize) -> Result<ModeMap, CoreError> {
    let mut map = ModeMap::new();
    for e in entries {
        if e.a == 0 || e.a > rank {
            return Err(CoreError::IndexOutOfRange { index: e.a, rank });
        }
        if e.m == 0 {
            return Err(CoreError::InvalidInput("modes need m >= 1".into()));
        }
        if e.mult == 0 {
            return Err(CoreError::InvalidInput(
                "multiplicities must be positive".into(),
            ));
        }
        map.add(e.a - 1, e.m, e.mult);
    }
    Ok(map)
}

/// Runs a job; returns the rendered output and the process exit code.
pub fn run(job: &JobSpec) -> (String, i32) {
    match execute(job) {
        Ok((out, code)) => (out, code),
        Err(e) => {
            let msg = serde_json::json!({ "error": e.to_string() });
            (format!("{msg}\n"), EXIT_BAD_INPUT)
        }
    }
}

fn execute(job: &JobSpec) -> Result<(String, i32), CoreError> {
    let id: AlgebraId = AlgebraId::from_str(&job.algebra)?;
    let c = build_cartan(id)?;
    match job.command {
        Command::Qsys => run_qsys(job, &c),
        Command::Mult => run_mult(job, &c),
        Command::Char => run_char(job, &c),
        Command::Sce => run_sce(job, &c),
        Command::Verify => run_verify(job, &c),
    }
}

fn render_json(value: &serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

fn run_qsys(job: &JobSpec, c: &CartanData) -> Result<(String, i32), CoreError> {
    let table = fermionic::fermionic_q_table(c, job.level);
    let report = qsystem::check_qsystem(c, &table)?;
    let convergence = qsystem::check_convergence(c, &table);
    let ok = report.is_clean() && convergence.iter().all(|&b| b);
    let failures: Vec<serde_json::Value> = report
        .failures
        .iter()
        .map(|((a, m), res)| serde_json::json!({ "a": a + 1, "m": m, "residual": res }))
        .collect();
    let series: BTreeMap<String, serde_json::Value> = table
        .modes()
        .map(|&(a, m)| {
            let entry = table.get(a, m).expect("mode present");
            (
                format!("Q[{},{}]", a + 1, m),
                serde_json::to_value(&entry).expect("serializable"),
            )
        })
        .collect();
    let value = serde_json::json!({
        "algebra": c.id.to_string(),
        "level": job.level,
        "modes_checked": report.checked.len(),
        "residual_failures": failures,
        "convergence": convergence,
        "series": series,
        "ok": ok,
    });
    let code = if ok || !job.check {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok((render_json(&value), code))
}

fn run_mult(job: &JobSpec, c: &CartanData) -> Result<(String, i32), CoreError> {
    let nu = to_mode_map(&job.nu, c.n)?;
    if nu.is_zero() {
        return Err(CoreError::InvalidInput("mult needs a nonempty --nu".into()));
    }
    let rows: Vec<(WeightVector, BigInt, BigInt)> = match &job.weight {
        Some(w) => {
            if w.len() != c.n {
                return Err(CoreError::InvalidInput(format!(
                    "weight must have {} coordinates",
                    c.n
                )));
            }
            let lam = WeightVector(w.clone());
            vec![(
                lam.clone(),
                fermionic::weight_multiplicity_r(c, &nu, &lam),
                fermionic::weight_multiplicity_k(c, &nu, &lam),
            )]
        }
        None => all_weight_rows(c, &nu),
    };
    render_mult(job, c, &nu, rows)
}

/// Every weight with a nonzero count, scanned over the box between the
/// highest weight and its antidominant Weyl image.
fn all_weight_rows(c: &CartanData, nu: &ModeMap) -> Vec<(WeightVector, BigInt, BigInt)> {
    let top = nu.top_weight(c);
    let bottom = c.antidominant_representative(&top);
    let budget = c
        .root_coords_integer(&top.sub(&bottom))
        .expect("orbit gap lies in the root lattice");
    let mut rows = Vec::new();
    let mut d = vec![0i64; c.n];
    'outer: loop {
        let mut acc = vec![0i64; c.n];
        for (a, &da) in d.iter().enumerate() {
            for (b, acc_b) in acc.iter_mut().enumerate() {
                *acc_b += da * c.cartan[b][a];
            }
        }
        let lam = top.sub(&WeightVector(acc));
        let r = fermionic::weight_multiplicity_r(c, nu, &lam);
        let k = fermionic::weight_multiplicity_k(c, nu, &lam);
        if !num_traits::Zero::is_zero(&r) || !num_traits::Zero::is_zero(&k) {
            rows.push((lam, r, k));
        }
        let mut pos = 0;
        loop {
            if pos == c.n {
                break 'outer;
            }
            d[pos] += 1;
            if d[pos] <= budget[pos] {
                break;
            }
            d[pos] = 0;
            pos += 1;
        }
    }
    rows.sort_by(|x, y| y.0.cmp(&x.0));
    rows
}

fn render_mult(
    job: &JobSpec,
    c: &CartanData,
    nu: &ModeMap,
    rows: Vec<(WeightVector, BigInt, BigInt)>,
) -> Result<(String, i32), CoreError> {
    match job.format {
        Format::Csv => {
            let mut out = String::from("weight,r,k\n");
            for (w, r, k) in &rows {
                out.push_str(&format!("\"{w}\",{r},{k}\n"));
            }
            Ok((out, EXIT_OK))
        }
        Format::Json => {
            let table: Vec<serde_json::Value> = rows
                .iter()
                .map(|(w, r, k)| {
                    serde_json::json!({
                        "weight": w.0,
                        "r": r.to_string(),
                        "k": k.to_string(),
                    })
                })
                .collect();
            let value = serde_json::json!({
                "algebra": c.id.to_string(),
                "nu": nu.iter().map(|((a, m), v)| serde_json::json!({"a": a + 1, "m": m, "mult": v})).collect::<Vec<_>>(),
                "weights": table,
            });
            Ok((render_json(&value), EXIT_OK))
        }
    }
}

fn run_char(job: &JobSpec, c: &CartanData) -> Result<(String, i32), CoreError> {
    let (a, m) = job
        .kr
        .ok_or_else(|| CoreError::InvalidInput("char needs --kr a,m".into()))?;
    if a == 0 || a > c.n {
        return Err(CoreError::IndexOutOfRange {
            index: a,
            rank: c.n,
        });
    }
    if m == 0 {
        return Err(CoreError::InvalidInput("KR index needs m >= 1".into()));
    }
    let ch = characters::classical_kr_character(c, a - 1, m)?;
    let decomposition = characters::decompose_into_irreducibles(c, &ch)?;
    match job.format {
        Format::Csv => {
            let mut out = String::from("weight,mult\n");
            for (w, mult) in &decomposition {
                out.push_str(&format!("\"{w}\",{mult}\n"));
            }
            Ok((out, EXIT_OK))
        }
        Format::Json => {
            let value = serde_json::json!({
                "algebra": c.id.to_string(),
                "kr": {"a": a, "m": m},
                "dimension": ch.dimension().to_string(),
                "summands": decomposition
                    .iter()
                    .rev()
                    .map(|(w, mult)| serde_json::json!({"weight": w.0, "mult": mult.to_string()}))
                    .collect::<Vec<_>>(),
            });
            Ok((render_json(&value), EXIT_OK))
        }
    }
}

fn run_sce(job: &JobSpec, c: &CartanData) -> Result<(String, i32), CoreError> {
    let nu = to_mode_map(&job.nu, c.n)?;
    let pattern = to_mode_map(&job.pattern, c.n)?;
    let inst = sce::build_sce(c, &nu, &pattern)?;
    let det = inst.det();
    let mobius = sce::count_offdiagonal_mobius(c, &inst);
    let r = fermionic::r_number(c, &nu, &pattern).value;
    let order_ok = sce::check_order_condition(c, &nu, &pattern);
    let p_nonneg = inst.vacancies_nonnegative();
    let (brute_off, generic) = match sce::enumerate_solutions_bruteforce(&inst, job.max_det) {
        Ok(sols) => {
            let off = sce::filter_offdiagonal(&inst, &sols);
            let generic = off
                .iter()
                .filter(|s| sce::check_genericity(c, &inst, s))
                .count();
            (Some(off.len()), Some(generic))
        }
        Err(CoreError::DetTooLarge { .. }) | Err(CoreError::SingularMatrix) => (None, None),
        Err(e) => return Err(e),
    };
    let mut fact = BigInt::from(1);
    for &n in &inst.counts {
        for i in 1..=n {
            fact *= BigInt::from(i);
        }
    }
    let brute_norm =
        brute_off.map(|b| num_rational::BigRational::new(BigInt::from(b as u64), fact.clone()));
    let ok = match &brute_norm {
        Some(q) => {
            !p_nonneg
                || (*q == mobius.value
                    && mobius.value == num_rational::BigRational::from_integer(r.clone()))
        }
        None => true,
    };
    let value = serde_json::json!({
        "algebra": c.id.to_string(),
        "dimension": inst.dimension(),
        "detA": det.to_string(),
        "mobius_count": format!("{}/{}", mobius.value.numer(), mobius.value.denom()),
        "bruteforce_offdiagonal": brute_off,
        "bruteforce_count": brute_norm.map(|q| format!("{}/{}", q.numer(), q.denom())),
        "generic_offdiagonal": generic,
        "R": r.to_string(),
        "order_ok": order_ok,
        "p_nonneg": p_nonneg,
        "ok": ok,
    });
    Ok((
        render_json(&value),
        if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
    ))
}

fn run_verify(job: &JobSpec, c: &CartanData) -> Result<(String, i32), CoreError> {
    let suite = job.suite.clone().unwrap_or_else(|| "all".into());
    let mut report = Report::default();
    match suite.as_str() {
        "qsys" => verify_qsys(job, c, &mut report)?,
        "genseries" => verify_genseries(job, c, &mut report)?,
        "expansion" => verify_expansion(job, c, &mut report),
        "k0" => verify_k0(job, c, &mut report)?,
        "sce" => verify_sce(job, c, &mut report)?,
        "all" => {
            verify_qsys(job, c, &mut report)?;
            let small = JobSpec {
                level: 1,
                degree: 2,
                ..job.clone()
            };
            verify_genseries(&small, c, &mut report)?;
            verify_expansion(&small, c, &mut report);
            verify_k0(job, c, &mut report)?;
            verify_sce(job, c, &mut report)?;
        }
        other => {
            return Err(CoreError::InvalidInput(format!(
                "unknown verify suite `{other}` (qsys|genseries|expansion|k0|sce|all)"
            )))
        }
    }
    let ok = report.is_clean();
    let value = serde_json::json!({
        "algebra": c.id.to_string(),
        "suite": suite,
        "checks": report.checks,
        "ok": ok,
    });
    Ok((
        render_json(&value),
        if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
    ))
}

fn verify_qsys(job: &JobSpec, c: &CartanData, report: &mut Report) -> Result<(), CoreError> {
    let table = fermionic::fermionic_q_table(c, job.level);
    let qrep = qsystem::check_qsystem(c, &table)?;
    report.push(
        format!("q-system residuals at level {}", job.level),
        qrep.is_clean(),
        format!(
            "{} modes checked, {} failures",
            qrep.checked.len(),
            qrep.failures.len()
        ),
    );
    let conv = qsystem::check_convergence(c, &table);
    report.push(
        "convergence per color",
        conv.iter().all(|&b| b),
        format!("{conv:?}"),
    );
    Ok(())
}

fn verify_genseries(job: &JobSpec, c: &CartanData, report: &mut Report) -> Result<(), CoreError> {
    let nu = if job.nu.is_empty() {
        // default: one fundamental factor per color
        let mut nu = ModeMap::new();
        for a in 0..c.n {
            nu.add(a, 1, 1);
        }
        nu
    } else {
        to_mode_map(&job.nu, c.n)?
    };
    let modes = qsystem::modes_h_l(c, job.level);
    if modes.len() > 6 || job.degree > 5 {
        return Err(CoreError::InvalidInput(format!(
            "generating-series check limited to 6 modes and degree 5, got {} modes at degree {}",
            modes.len(),
            job.degree
        )));
    }
    let inner = genseries::verify_generating_identities(c, &nu, job.level, job.degree);
    report.checks.extend(inner.checks);
    Ok(())
}

fn verify_expansion(job: &JobSpec, c: &CartanData, report: &mut Report) {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let modes = qsystem::modes_h_l(c, job.level);
    let mut rng = StdRng::seed_from_u64(job.seed);
    let beta: Vec<num_rational::BigRational> = modes
        .iter()
        .map(|_| {
            num_rational::BigRational::new(
                BigInt::from(rng.random_range(-3i64..=3)),
                BigInt::from(rng.random_range(1i64..=4)),
            )
        })
        .collect();
    let inner = genseries::verify_binomial_expansion(c, job.level, job.degree, &beta);
    report.checks.extend(inner.checks);
}

fn verify_k0(job: &JobSpec, c: &CartanData, report: &mut Report) -> Result<(), CoreError> {
    match genseries::verify_k0_identities(c, job.level, job.experimental) {
        Ok(inner) => {
            report.checks.extend(inner.checks);
            Ok(())
        }
        Err(CoreError::ExceptionalKr(id)) => {
            report.push(
                "K0 identities",
                true,
                format!("skipped for exceptional {id}; pass --experimental to run"),
            );
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn verify_sce(job: &JobSpec, c: &CartanData, report: &mut Report) -> Result<(), CoreError> {
    let samples = sce::sample_instances(&[c.id], job.samples, 4, 10_000, job.seed);
    let mut all_ok = true;
    for (data, inst) in &samples {
        let mobius = sce::count_offdiagonal_mobius(data, inst);
        let sols = sce::enumerate_solutions_bruteforce(inst, job.max_det)?;
        let off = sce::filter_offdiagonal(inst, &sols);
        let mut fact = BigInt::from(1);
        for &n in &inst.counts {
            for i in 1..=n {
                fact *= BigInt::from(i);
            }
        }
        let brute = num_rational::BigRational::new(BigInt::from(off.len() as u64), fact);
        let r = fermionic::r_number(data, &inst.nu, &inst.pattern).value;
        all_ok &=
            brute == mobius.value && mobius.value == num_rational::BigRational::from_integer(r);
    }
    report.push(
        "sce three-way counts",
        all_ok,
        format!("{} sampled instances (seed {})", samples.len(), job.seed),
    );
    Ok(())
}
