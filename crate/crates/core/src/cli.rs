//! Command-line front end. Every subcommand renders the same result as JSON
//! (`"schema": 1`, keys sorted), CSV (header row, comma separated) or plain
//! text.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::checks::{run_all, run_check, CheckResult};
use crate::coadjoint_orbits::{b_orbit_admissible, classify_b_form, orbit_to_repr, OrbitDescriptor, ReprLabel};
use crate::discrete_series::{
    branch_to_b, branch_to_b1, central_character_selects, from_harish_chandra, weyl_dimension, Chamber, DiscreteSeriesParam,
    DsClass, Mult, Target,
};
use crate::irregular_connection::{global_l2_dimension, label_of_system, ConnectionConfig, GlobalDimension};
use crate::lie_su21::DualForm;
use crate::moment_projection::{admissible_orbits_in_image, holomorphic_cone, p1_properness, p_properness, PropernessVerdict};
use crate::ode_builder::{build_system, closed_form_spectrum, holomorphic_kernel_dims, to_csv, OdeSystem};
use crate::symplectic_reduction::{classify_reduced, quantize_point, reduced_volume, reduced_volume_closed_form};
use crate::{Error, Result, Sign, Q};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "orbitlab", version, about = "Coadjoint orbits, branching and L2 solution counts for SU(2,1)")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads for grid commands (ORBITLAB_THREADS takes precedence).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discrete-series parameter from Harish-Chandra coordinates, cone membership and properness.
    Classify(ClassifyArgs),
    /// Restriction of a discrete series to B or B1.
    Branch(BranchArgs),
    /// Dimensions of the L2 solution spaces of the systems D±_m.
    OdeDim(OdeDimArgs),
    /// Volume of the reduced sphere over Omega^±.
    Volume(VolumeArgs),
    /// Dump the matrices of one system D±_m.
    System(SystemArgs),
    /// Invariants of a b* form `w W* + s S* + x E1* + y E1'* + z E2*` (rationals).
    Orbit(OrbitArgs),
    /// Reduced space of a discrete-series orbit over a B- or B1-orbit.
    Reduced(ReducedArgs),
    /// Run the acceptance checks.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ParamArgs {
    #[arg(long = "f0H")]
    pub f0h: i64,
    #[arg(long = "f0Z")]
    pub f0z: i64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n1: i64,
    #[arg(long, conflicts_with = "n3")]
    pub n2: Option<i64>,
    #[arg(long)]
    pub n3: Option<i64>,
    /// D1 (holomorphic), D2 (anti-holomorphic) or D3 (neither).
    #[arg(long)]
    pub chamber: Option<String>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BranchArgs {
    #[command(flatten)]
    pub param: ParamArgs,
    /// B or B1.
    #[arg(long, default_value = "B")]
    pub target: String,
    /// Terms listed per infinite family.
    #[arg(long = "n-max", default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OdeDimArgs {
    #[command(flatten)]
    pub param: ParamArgs,
    /// `a..b` (inclusive) or a single value.
    #[arg(long, default_value = "0..6")]
    pub m: String,
    /// `+` or `-`; both when omitted.
    #[arg(long)]
    pub sign: Option<String>,
    #[arg(long, default_value_t = ConnectionConfig::default().z0)]
    pub z0: f64,
    #[arg(long, default_value_t = ConnectionConfig::default().z1)]
    pub z1: f64,
    /// Relative rank threshold.
    #[arg(long = "rank-tol", default_value_t = ConnectionConfig::default().rank_tol)]
    pub rank_tol: f64,
    /// Relative truncation tolerance of the propagator.
    #[arg(long, default_value_t = ConnectionConfig::default().integration_tol)]
    pub tol: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VolumeArgs {
    #[arg(long = "f0H")]
    pub f0h: f64,
    #[arg(long = "f0Z")]
    pub f0z: f64,
    /// Simpson intervals.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SystemArgs {
    #[command(flatten)]
    pub param: ParamArgs,
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub sign: String,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OrbitArgs {
    #[arg(long, default_value = "0")]
    pub w: String,
    #[arg(long, default_value = "0")]
    pub s: String,
    #[arg(long, default_value = "0")]
    pub x: String,
    #[arg(long, default_value = "0")]
    pub y: String,
    #[arg(long)]
    pub z: String,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ReducedArgs {
    #[command(flatten)]
    pub param: ParamArgs,
    #[arg(long, default_value = "B")]
    pub target: String,
    /// Label `m` of `T_{m,sign}` (target B).
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub sign: String,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Run every criterion.
    #[arg(long, conflicts_with = "id")]
    pub all: bool,
    /// Run selected criteria (1 to 10).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
    pub id: Vec<u8>,
}

/// A rendered result and the process exit code.
pub struct Rendered {
    pub json: Value,
    pub csv: String,
    pub pretty: String,
    pub exit_code: i32,
}

impl Rendered {
    fn ok(json: Value, csv: String, pretty: String) -> Self {
        Rendered { json, csv, pretty, exit_code: 0 }
    }

    pub fn text(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Pretty => self.pretty.clone(),
        }
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

fn parse_sign(s: &str) -> Result<Sign> {
    s.parse()
}

fn parse_q(s: &str) -> Result<Q> {
    s.trim().parse::<Q>().map_err(|_| Error::InvalidParameter(format!("'{s}' is not a rational number")))
}

/// `a..b` and `a..=b` are inclusive; a single integer is a one-point range.
pub fn parse_m_range(s: &str) -> Result<Vec<i64>> {
    let bad = || Error::InvalidParameter(format!("bad m range '{s}'"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let a: i64 = a.parse().map_err(|_| bad())?;
    let b: i64 = b.parse().map_err(|_| bad())?;
    if a < 0 || b < a {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn verdict_json(v: &PropernessVerdict) -> Value {
    json!({
        "weakly_proper": v.weakly_proper,
        "proper": v.proper,
        "witness": v.witness.as_ref().map(|w| json!({
            "description": w.description,
            "max_fiber_deviation": w.max_fiber_deviation(),
            "max_norm": w.max_norm(),
            "samples": w.samples.len(),
        })),
    })
}

fn verdict_text(v: &PropernessVerdict) -> &'static str {
    match (v.weakly_proper, v.proper) {
        (_, true) => "proper",
        (true, false) => "weakly proper only",
        (false, false) => "not weakly proper",
    }
}

fn cmd_classify(a: &ClassifyArgs) -> Result<Rendered> {
    if a.n1 < 1 {
        return Err(Error::InvalidParameter(format!("n1 = {} must be a positive integer", a.n1)));
    }
    let chamber: Chamber = a.chamber.as_deref().ok_or_else(|| Error::InvalidParameter("--chamber is required".into()))?.parse()?;
    let second = match (a.n2, a.n3) {
        (Some(n), None) | (None, Some(n)) => n,
        _ => return Err(Error::InvalidParameter("give exactly one of --n2, --n3".into())),
    };
    let ds = from_harish_chandra(a.n1, second, chamber)?;
    let (h, z) = (ds.f0h as f64, ds.f0z as f64);
    let cone = holomorphic_cone(h, z)?;
    let p1 = p1_properness(h, z)?;
    let p = p_properness(h, z)?;
    let json = envelope(
        "classify",
        json!({
            "n1": a.n1,
            "second": second,
            "chamber": chamber,
            "f0H": ds.f0h,
            "f0Z": ds.f0z,
            "class": ds.class,
            "q_lambda": ds.q_lambda(),
            "weyl_dimension": weyl_dimension(&ds),
            "holomorphic_cone": cone,
            "p1": verdict_json(&p1),
            "p": verdict_json(&p),
        }),
    );
    let csv = String::from("f0H,f0Z,class,q_lambda,holomorphic_cone,p1_weakly_proper,p1_proper,p_weakly_proper,p_proper\n")
        + &csv_line(&[
            ds.f0h.to_string(),
            ds.f0z.to_string(),
            ds.class.to_string(),
            ds.q_lambda().to_string(),
            cone.to_string(),
            p1.weakly_proper.to_string(),
            p1.proper.to_string(),
            p.weakly_proper.to_string(),
            p.proper.to_string(),
        ]);
    let pretty = format!(
        "(f0H, f0Z) = ({}, {}): {}, q = {}\nholomorphic cone: {}\np1: {}\np: {}\n",
        ds.f0h,
        ds.f0z,
        ds.class,
        ds.q_lambda(),
        if cone { "yes" } else { "no" },
        verdict_text(&p1),
        verdict_text(&p),
    );
    Ok(Rendered::ok(json, csv, pretty))
}

fn mult_text(m: Mult) -> String {
    m.to_string()
}

fn cmd_branch(a: &BranchArgs) -> Result<Rendered> {
    let ds = DiscreteSeriesParam::new(a.param.f0h, a.param.f0z)?;
    let target: Target = a.target.parse()?;
    let n_max = a.n_max as usize;
    let dec = match target {
        Target::B => branch_to_b(&ds, n_max),
        Target::B1 => branch_to_b1(&ds),
    };
    let mut csv = String::from("m,sign,mult\n");
    let mut pretty = format!("({}, {}) {} restricted to {:?}\n", ds.f0h, ds.f0z, ds.class, target);
    let mut entries = Vec::new();
    for e in &dec.entries {
        entries.push(json!({ "m": e.m, "sign": e.sign, "mult": e.mult }));
        csv += &csv_line(&[e.m.map_or(String::new(), |m| m.to_string()), e.sign.to_string(), mult_text(e.mult)]);
        let label = match e.m {
            Some(m) => ReprLabel::b(m, e.sign),
            None => ReprLabel { group: crate::coadjoint_orbits::Group::B1, m: None, sign: e.sign },
        };
        pretty += &format!("  {} x {label}\n", mult_text(e.mult));
    }
    let families: Vec<Value> =
        dec.infinite_families.iter().map(|f| json!({ "start": f.start, "step": f.step, "sign": f.sign })).collect();
    for f in &dec.infinite_families {
        let op = if f.step < 0 { '-' } else { '+' };
        pretty += &format!("  family T_{{{} {op} {}N, {}}}, N >= 0\n", f.start, f.step.abs(), f.sign);
    }
    let mut body = json!({
        "f0H": ds.f0h,
        "f0Z": ds.f0z,
        "class": ds.class,
        "target": target,
        "n_max": n_max,
        "entries": entries,
        "families": families,
        "admissible": dec.admissible,
        "derived_by_symmetry": dec.derived_by_symmetry,
    });
    if !dec.admissible {
        body["note"] = json!("not admissible: infinite multiplicities");
        pretty += "not admissible: infinite multiplicities\n";
    }
    if target == Target::B {
        // Admissible orbits of the image and the one-in-three selection by the central character.
        let image = admissible_orbits_in_image(&ds);
        let mut audit = Vec::new();
        let mut selected = 0;
        for o in image.take(3 * n_max) {
            if let (OrbitDescriptor::B { r, sign }, Some(label)) = (&o, orbit_to_repr(&o)) {
                let m = label.m.expect("B labels carry m");
                let sel = central_character_selects(&ds, m);
                selected += usize::from(sel);
                audit.push(json!({ "r": r.to_string(), "sign": sign, "m": m, "selected": sel, "quantized": quantize_point(&ds, m, *sign) }));
            }
        }
        pretty += &format!("image: {} admissible orbits listed, {selected} selected by the central character\n", audit.len());
        body["audit"] = json!({ "image": audit, "selected": selected });
    }
    Ok(Rendered::ok(envelope("branch", body), csv, pretty))
}

fn dim_record(ds: &DiscreteSeriesParam, m: i64, sign: Sign, g: &GlobalDimension) -> Value {
    let (label, lsign) = label_of_system(ds, m, sign);
    json!({
        "m": m,
        "sign": sign,
        "dim": g.dim,
        "label": { "m": label, "sign": lsign },
        "basis_dim": g.basis_dim,
        "rank": g.rank,
        "rank_spectrum": g.rank_spectrum,
        "fallback_spectrum": g.fallback_spectrum,
        "envelope_ratio": g.envelope_ratio,
        "steps": g.steps,
    })
}

fn cmd_ode_dim(a: &OdeDimArgs) -> Result<Rendered> {
    let ds = DiscreteSeriesParam::new(a.param.f0h, a.param.f0z)?;
    let ms = parse_m_range(&a.m)?;
    let signs = match &a.sign {
        Some(s) => vec![parse_sign(s)?],
        None => vec![Sign::Minus, Sign::Plus],
    };
    if !(a.z0 > 0.0 && a.z1 > a.z0 && a.rank_tol > 0.0 && a.tol > 0.0) {
        return Err(Error::InvalidParameter("need 0 < z0 < z1 and positive tolerances".into()));
    }
    if ds.class != DsClass::Neither {
        let (hm, hp) = holomorphic_kernel_dims(&ds)?;
        let json = envelope(
            "ode-dim",
            json!({ "f0H": ds.f0h, "f0Z": ds.f0z, "class": ds.class, "holomorphic_kernels": { "minus": hm, "plus": hp } }),
        );
        let csv = format!("f0H,f0Z,class,kernel_minus,kernel_plus\n{},{},{},{hm},{hp}\n", ds.f0h, ds.f0z, ds.class);
        let pretty = format!("({}, {}) {}: closed-form kernels D- {hm}, D+ {hp}\n", ds.f0h, ds.f0z, ds.class);
        return Ok(Rendered::ok(json, csv, pretty));
    }
    let cfg = ConnectionConfig { z0: a.z0, z1: a.z1, rank_tol: a.rank_tol, integration_tol: a.tol, ..Default::default() };
    let jobs: Vec<(Sign, i64)> = signs.iter().flat_map(|&s| ms.iter().map(move |&m| (s, m))).collect();
    let results: Vec<Result<GlobalDimension>> =
        jobs.par_iter().map(|&(s, m)| build_system(&ds, m, s).and_then(|sys| global_l2_dimension(&sys, &cfg))).collect();
    let mut records = Vec::new();
    let mut csv = String::from("f0H,f0Z,m,sign,dim,label_m,label_sign,rank,basis_dim\n");
    let mut pretty = format!("({}, {}) z0 = {}, z1 = {}, rank tol = {:e}\n", ds.f0h, ds.f0z, cfg.z0, cfg.z1, cfg.rank_tol);
    for (&(s, m), r) in jobs.iter().zip(results) {
        let g = r.map_err(|e| match e {
            Error::AmbiguousRank { spectrum } => Error::AmbiguousRank { spectrum },
            other => Error::Numeric(format!("D{s}_{m}: {other}")),
        })?;
        let (label, lsign) = label_of_system(&ds, m, s);
        csv += &csv_line(&[
            ds.f0h.to_string(),
            ds.f0z.to_string(),
            m.to_string(),
            s.to_string(),
            g.dim.to_string(),
            label.to_string(),
            lsign.to_string(),
            g.rank.to_string(),
            g.basis_dim.to_string(),
        ]);
        pretty += &format!("  D{s}_{m}: dim {} -> T_{{{label},{lsign}}}\n", g.dim);
        records.push(dim_record(&ds, m, s, &g));
    }
    let json = envelope("ode-dim", json!({ "f0H": ds.f0h, "f0Z": ds.f0z, "config": cfg, "records": records }));
    Ok(Rendered::ok(json, csv, pretty))
}

fn cmd_volume(a: &VolumeArgs) -> Result<Rendered> {
    let v = reduced_volume(a.f0h, a.f0z, a.n)?;
    let exact = reduced_volume_closed_form(a.f0h, a.f0z)?;
    let json = envelope("volume", json!({ "f0H": a.f0h, "f0Z": a.f0z, "n": a.n, "volume": v, "closed_form": exact }));
    let csv = format!("f0H,f0Z,n,volume,closed_form\n{},{},{},{v},{exact}\n", a.f0h, a.f0z, a.n);
    Ok(Rendered::ok(json, csv, format!("{v}\n")))
}

fn system_json(sys: &OdeSystem) -> Value {
    let mut v = serde_json::to_value(sys).expect("systems serialize");
    if let Value::Object(o) = &mut v {
        o.insert("size".into(), json!(sys.size()));
    }
    v
}

fn cmd_system(a: &SystemArgs) -> Result<Rendered> {
    let ds = DiscreteSeriesParam::new(a.param.f0h, a.param.f0z)?;
    let sign = parse_sign(&a.sign)?;
    let sys = build_system(&ds, a.m, sign)?;
    let spectrum = closed_form_spectrum(&ds, a.m, sign);
    let json = envelope("system", json!({ "system": system_json(&sys), "m0_spectrum": spectrum }));
    let pretty = format!(
        "D{sign}_{} for ({}, {}), size {}\nA = {}B = {}C = {}",
        a.m,
        ds.f0h,
        ds.f0z,
        sys.size(),
        sys.a,
        sys.b,
        sys.c
    );
    Ok(Rendered::ok(json, to_csv(&sys), pretty))
}

fn cmd_orbit(a: &OrbitArgs) -> Result<Rendered> {
    let f = DualForm::b(parse_q(&a.w)?, parse_q(&a.s)?, parse_q(&a.x)?, parse_q(&a.y)?, parse_q(&a.z)?);
    let c = classify_b_form(&f);
    let Some(OrbitDescriptor::B { r, sign }) = c.descriptor() else {
        return Err(Error::NotInRegularSet);
    };
    let admissible = b_orbit_admissible(r);
    let label = orbit_to_repr(&OrbitDescriptor::B { r: r.clone(), sign: *sign }).and_then(|l| l.m);
    let json = envelope("orbit", json!({ "r": r.to_string(), "sign": sign, "admissible": admissible, "label_m": label }));
    let csv = format!("r,sign,admissible,label_m\n{r},{sign},{admissible},{}\n", label.map_or(String::new(), |m| m.to_string()));
    let pretty = match label {
        Some(m) if admissible => format!("Omega_{{{r},{sign}}}, admissible, T_{{{m},{sign}}}\n"),
        _ => format!("Omega_{{{r},{sign}}}, {}\n", if admissible { "admissible" } else { "not admissible" }),
    };
    Ok(Rendered::ok(json, csv, pretty))
}

fn cmd_reduced(a: &ReducedArgs) -> Result<Rendered> {
    let ds = DiscreteSeriesParam::new(a.param.f0h, a.param.f0z)?;
    let target: Target = a.target.parse()?;
    let sign = parse_sign(&a.sign)?;
    let (orbit, quantized) = match target {
        Target::B => {
            let m = a.m.ok_or_else(|| Error::InvalidParameter("target B needs --m".into()))?;
            (ReprLabel::b(m, sign).orbit().expect("B labels have orbits"), Some(quantize_point(&ds, m, sign)))
        }
        Target::B1 => (OrbitDescriptor::B1 { sign }, None),
    };
    let red = classify_reduced(ds.f0h, ds.f0z, target, &orbit)?;
    let json = envelope(
        "reduced",
        json!({ "f0H": ds.f0h, "f0Z": ds.f0z, "target": target, "orbit": orbit.to_string(), "kind": red.kind, "volume": red.volume, "quantized": quantized }),
    );
    let csv = format!(
        "f0H,f0Z,target,orbit,kind,volume,quantized\n{},{},{:?},{orbit},{:?},{},{}\n",
        ds.f0h,
        ds.f0z,
        target,
        red.kind,
        red.volume.map_or(String::new(), |v| v.to_string()),
        quantized.map_or(String::new(), |q| q.to_string())
    );
    let pretty = format!("reduced space over {orbit}: {:?}{}\n", red.kind, red.volume.map_or(String::new(), |v| format!(", volume {v}")));
    Ok(Rendered::ok(json, csv, pretty))
}

fn cmd_check(a: &CheckArgs) -> Result<Rendered> {
    let results: Vec<CheckResult> = if a.all || a.id.is_empty() { run_all() } else { a.id.iter().map(|&i| run_check(i)).collect() };
    let all_passed = results.iter().all(|r| r.passed);
    let mut csv = String::from("id,name,passed,elapsed_s,budget_s\n");
    let mut pretty = String::new();
    for r in &results {
        csv += &csv_line(&[r.id.to_string(), r.name.to_string(), r.passed.to_string(), format!("{:.3}", r.elapsed_s), r.budget_s.to_string()]);
        pretty += &format!("{r}\n");
    }
    // Timings vary between runs; they stay out of the JSON so that it is reproducible.
    let checks: Vec<Value> =
        results.iter().map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail })).collect();
    let json = envelope("check", json!({ "passed": all_passed, "checks": checks }));
    Ok(Rendered { json, csv, pretty, exit_code: if all_passed { 0 } else { 1 } })
}

fn dispatch(cmd: &Command) -> Result<Rendered> {
    match cmd {
        Command::Classify(a) => cmd_classify(a),
        Command::Branch(a) => cmd_branch(a),
        Command::OdeDim(a) => cmd_ode_dim(a),
        Command::Volume(a) => cmd_volume(a),
        Command::System(a) => cmd_system(a),
        Command::Orbit(a) => cmd_orbit(a),
        Command::Reduced(a) => cmd_reduced(a),
        Command::Check(a) => cmd_check(a),
    }
}

fn thread_count(cli: &Cli) -> Result<Option<usize>> {
    match std::env::var("ORBITLAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidParameter(format!("ORBITLAB_THREADS='{v}' is not a positive integer"))),
        },
        Err(_) => Ok(cli.threads),
    }
}

/// Run a parsed command line: returns the rendered text and the exit code.
pub fn execute(cli: &Cli) -> Result<Rendered> {
    let threads = thread_count(cli)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(&cli.command))
}

/// Entry point of the binary. Errors go to stderr; the exit code is 2 for
/// invalid input, 3 for numerical failures and 1 for failed checks.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let text = r.text(cli.format);
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return 3;
            }
            r.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
