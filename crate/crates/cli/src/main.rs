use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ringcert::fitting::{associated_idempotent, idempotents};
use ringcert::modules::{
    end_ring, exact_sequence_ring, krull_schmidt, restricted_endomorphism_check, FiniteModule, ModuleData,
    Presentation, PresentationData,
};
use ringcert::restopo::{appendix_fixture, compare_topologies, Resolution};
use ringcert::ring::{center, jacobson_radical, semiperfect_certificate, Elem, FiniteRing, RingHom};
use ringcert::subrings::{
    centralizer, invariant_subring, rationally_closed_check, subring_closure, verify_main_theorem, Subring,
};
use ringcert::towers::{
    build_truncation_tower, closure_membership, jacobson_power_openness, subring_quasi_pi_check,
    tower_associated_idempotent, tower_subring, Tower, TowerModule, TowerSpec, TowerSubringSpec,
};
use ringcert::{catalog, Error, Settings};

#[derive(Parser)]
#[command(name = "ringcert", version, about = "Exact certificates for finite rings, towers and modules")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest set the brute-force routines may enumerate.
    #[arg(long, global = true, default_value_t = ringcert::settings::DEFAULT_CAP)]
    cap: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Radical, idempotents, center or semiperfect certificate of a ring.
    Ring { op: RingOp, ring: String },
    /// Subrings given by generators, centralizers or invariants.
    Subring { op: SubringOp, ring: String, spec: String },
    /// Associated idempotent of an element, given as a JSON coordinate list.
    Fitting { ring: String, element: String },
    /// Truncation towers.
    Tower {
        op: TowerOp,
        tower: String,
        /// JSON payload file for idempotent, subring-check and closure.
        payload: Option<String>,
    },
    /// Modules: endomorphism rings, decompositions, presentations, restriction.
    Module { op: ModuleOp, input: String },
    /// Resolution topologies.
    Topology { op: TopologyOp, input: String },
    /// List the built-in rings.
    Catalog,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingOp {
    Radical,
    Idempotents,
    Center,
    CertifySemiperfect,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubringOp {
    Centralizer,
    Invariant,
    VerifyTheorem,
    RationallyClosed,
}

#[derive(Clone, Copy, ValueEnum)]
enum TowerOp {
    Idempotent,
    SubringCheck,
    JacOpenness,
    Closure,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleOp {
    End,
    Ks,
    ExactSeq,
    RestrictCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyOp {
    Compare,
}

enum Failure {
    Input(String),
    Violation(Value, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(format!("parse error at line {}, column {}: {e}", e.line(), e.column()))
    }
}

type Run<T> = Result<T, Failure>;

/// Inputs read so far, with their digests.
#[derive(Default)]
struct Inputs {
    digests: Vec<Value>,
}

impl Inputs {
    fn read(&mut self, source: &str) -> Run<Vec<u8>> {
        let bytes = std::fs::read(source).map_err(|e| Failure::Input(format!("{source}: {e}")))?;
        self.record(source, &bytes);
        Ok(bytes)
    }

    fn record(&mut self, source: &str, bytes: &[u8]) {
        let digest = hex::encode(Sha256::digest(bytes));
        self.digests.push(json!({ "source": source, "sha256": digest }));
    }

    fn json(&mut self, source: &str) -> Run<Value> {
        let bytes = self.read(source)?;
        Ok(serde_json::from_slice(&bytes)?)
    }

    /// A ring given as `catalog:<name>`, a file path, or an inline definition.
    fn ring(&mut self, source: &str) -> Run<FiniteRing> {
        if let Some(name) = source.strip_prefix("catalog:") {
            let r = catalog::ring(name)?;
            self.record(source, serde_json::to_string(&r)?.as_bytes());
            return Ok(r);
        }
        let bytes = self.read(source)?;
        Ok(serde_json::from_slice(&bytes)?)
    }

    fn ring_ref(&mut self, value: &Value, base: &Path) -> Run<FiniteRing> {
        match value {
            Value::String(s) if s.starts_with("catalog:") => self.ring(s),
            Value::String(s) => self.ring(&base.join(s).to_string_lossy()),
            other => Ok(serde_json::from_value(other.clone())?),
        }
    }
}

fn parent(source: &str) -> PathBuf {
    Path::new(source).parent().map(Path::to_path_buf).unwrap_or_default()
}

fn parse_elem(r: &FiniteRing, v: &Value) -> Run<Elem> {
    let coords: Vec<i64> = serde_json::from_value(v.clone())?;
    Ok(r.element(&coords)?)
}

fn payload<T: serde::Serialize>(x: &T) -> Run<Value> {
    Ok(serde_json::to_value(x)?)
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum SubringSpec {
    Generators(Vec<Vec<i64>>),
    CentralizerOf(Vec<Vec<i64>>),
    /// Each endomorphism as the list of images of the basis.
    InvariantUnder(Vec<Vec<Vec<i64>>>),
}

fn elems(r: &FiniteRing, xs: &[Vec<i64>]) -> Run<Vec<Elem>> {
    xs.iter().map(|x| r.element(x).map_err(Failure::from)).collect()
}

fn build_subring(r: &FiniteRing, spec: &SubringSpec) -> Run<Subring> {
    Ok(match spec {
        SubringSpec::Generators(g) => subring_closure(r, &elems(r, g)?),
        SubringSpec::CentralizerOf(x) => centralizer(r, &elems(r, x)?),
        SubringSpec::InvariantUnder(homs) => {
            let sigmas = homs
                .iter()
                .map(|images| Ok(RingHom::new(r, r, elems(r, images)?)?))
                .collect::<Run<Vec<_>>>()?;
            invariant_subring(r, &sigmas)?
        }
    })
}

fn cmd_ring(op: RingOp, source: &str, s: &Settings, inputs: &mut Inputs) -> Run<Value> {
    let r = inputs.ring(source)?;
    match op {
        RingOp::Radical => payload(&jacobson_radical(&r)),
        RingOp::Idempotents => payload(&idempotents(&r, s)?),
        RingOp::Center => payload(&center(&r)),
        RingOp::CertifySemiperfect => {
            let cert = semiperfect_certificate(&r, s);
            let v = payload(&cert)?;
            if cert.verify(&r) {
                Ok(v)
            } else {
                Err(Failure::Violation(v, "certificate fails verification".into()))
            }
        }
    }
}

fn cmd_subring(op: SubringOp, ring: &str, spec: &str, s: &Settings, inputs: &mut Inputs) -> Run<Value> {
    let r = inputs.ring(ring)?;
    let spec: SubringSpec = serde_json::from_value(inputs.json(spec)?)?;
    match (op, &spec) {
        (SubringOp::Centralizer, SubringSpec::CentralizerOf(_)) | (SubringOp::Invariant, SubringSpec::InvariantUnder(_)) => {}
        (SubringOp::Centralizer, _) => return Err(Failure::Input("centralizer needs a 'centralizer_of' spec".into())),
        (SubringOp::Invariant, _) => return Err(Failure::Input("invariant needs an 'invariant_under' spec".into())),
        _ => {}
    }
    let sub = build_subring(&r, &spec)?;
    match op {
        SubringOp::Centralizer | SubringOp::Invariant => payload(&sub),
        SubringOp::VerifyTheorem => payload(&verify_main_theorem(&sub, s)),
        SubringOp::RationallyClosed => {
            let rc = rationally_closed_check(&sub, s)?;
            let v = payload(&rc)?;
            if rc.closed {
                Ok(v)
            } else {
                Err(Failure::Violation(v, "a unit of the subring has its inverse outside".into()))
            }
        }
    }
}

fn cmd_fitting(ring: &str, element: &str, inputs: &mut Inputs) -> Run<Value> {
    let r = inputs.ring(ring)?;
    let a = parse_elem(&r, &serde_json::from_str(element)?)?;
    payload(&associated_idempotent(&r, &a))
}

fn top_element(t: &Tower, v: &Value) -> Run<Elem> {
    parse_elem(t.top(), v)
}

fn cmd_tower(op: TowerOp, tower: &str, payload_file: Option<&str>, inputs: &mut Inputs) -> Run<Value> {
    let spec: TowerSpec = serde_json::from_value(inputs.json(tower)?)?;
    let t = build_truncation_tower(&spec)?;
    let load = |inputs: &mut Inputs| -> Run<Value> {
        let f = payload_file.ok_or_else(|| Failure::Input("this tower command needs a payload file".into()))?;
        inputs.json(f)
    };
    match op {
        TowerOp::JacOpenness => payload(&jacobson_power_openness(&t)),
        TowerOp::Idempotent => {
            let p = load(inputs)?;
            let a = t.project(&top_element(&t, &p["element"])?);
            match tower_associated_idempotent(&t, &a) {
                Ok(cert) => payload(&cert),
                Err(Error::CompatibilityViolation(level)) => Err(Failure::Violation(
                    json!({ "level": level }),
                    format!("idempotents are incompatible at level {level}"),
                )),
                Err(e) => Err(e.into()),
            }
        }
        TowerOp::SubringCheck => {
            let p = load(inputs)?;
            let sub_spec: TowerSubringSpec = serde_json::from_value(p["subring"].clone())?;
            let sub = tower_subring(&t, &sub_spec)?;
            let a = t.project(&top_element(&t, &p["element"])?);
            let report = subring_quasi_pi_check(&t, &sub, &a)?;
            let v = payload(&report)?;
            if report.holds {
                Ok(v)
            } else {
                Err(Failure::Violation(v, "an idempotent leaves the subring".into()))
            }
        }
        TowerOp::Closure => {
            #[derive(Deserialize)]
            struct Closure {
                rank: usize,
                generators: Vec<Vec<i64>>,
                candidate: Vec<i64>,
            }
            let c: Closure = serde_json::from_value(load(inputs)?)?;
            let tm = TowerModule::free(&t, c.rank);
            let top = tm.modules.last().expect("non-empty").layout().clone();
            let check = |x: &[i64]| -> Run<Vec<Elem>> {
                if x.len() != top.dim() {
                    return Err(Error::DimensionMismatch { expected: top.dim(), found: x.len() }.into());
                }
                Ok(tm.project(&top.reduce_signed(x)))
            };
            let gens = c.generators.iter().map(|g| check(g)).collect::<Run<Vec<_>>>()?;
            let cand = check(&c.candidate)?;
            match closure_membership(&t, &tm, &gens, &cand) {
                Ok(m) if m.member => payload(&m),
                Ok(m) => Err(Failure::Violation(payload(&m)?, "candidate is not in the closure".into())),
                Err(Error::LevelUnsolvable(level)) => Err(Failure::Violation(
                    json!({ "member": false, "level": level }),
                    format!("candidate is not in the submodule at level {level}"),
                )),
                Err(e) => Err(e.into()),
            }
        }
    }
}

#[derive(Deserialize)]
struct ModuleFile {
    ring: Value,
    #[serde(flatten)]
    data: ModuleData,
}

#[derive(Deserialize)]
struct PresentationFile {
    ring: Value,
    #[serde(flatten)]
    data: PresentationData,
}

#[derive(Deserialize)]
struct RestrictFile {
    /// The subring `R`.
    subring: Value,
    /// The overring `S`.
    ring: Value,
    /// Images of the basis of `R` in `S`.
    embedding: Vec<Vec<i64>>,
    #[serde(flatten)]
    module: ModuleData,
}

fn load_module(input: &str, inputs: &mut Inputs) -> Run<FiniteModule> {
    let f: ModuleFile = serde_json::from_value(inputs.json(input)?)?;
    let r = inputs.ring_ref(&f.ring, &parent(input))?;
    Ok(FiniteModule::from_data(&r, &f.data)?)
}

fn cmd_module(op: ModuleOp, input: &str, s: &Settings, inputs: &mut Inputs) -> Run<Value> {
    match op {
        ModuleOp::End => payload(&end_ring(&load_module(input, inputs)?)),
        ModuleOp::Ks => {
            let m = load_module(input, inputs)?;
            let ks = krull_schmidt(&m, s);
            let v = payload(&ks)?;
            if ks.verify(&m) {
                Ok(v)
            } else {
                Err(Failure::Violation(v, "summands do not decompose the module".into()))
            }
        }
        ModuleOp::ExactSeq => {
            let f: PresentationFile = serde_json::from_value(inputs.json(input)?)?;
            let r = inputs.ring_ref(&f.ring, &parent(input))?;
            let report = exact_sequence_ring(&Presentation::from_data(&r, &f.data)?)?;
            let v = payload(&report)?;
            if report.surjective && report.kernel_matches && report.quotient_isomorphic {
                Ok(v)
            } else {
                Err(Failure::Violation(v, "End(C) is not the expected quotient".into()))
            }
        }
        ModuleOp::RestrictCheck => {
            let f: RestrictFile = serde_json::from_value(inputs.json(input)?)?;
            let base = parent(input);
            let r = inputs.ring_ref(&f.subring, &base)?;
            let big = inputs.ring_ref(&f.ring, &base)?;
            let phi = RingHom::new(&r, &big, elems(&big, &f.embedding)?)?;
            let m = FiniteModule::from_data(&big, &f.module)?;
            let report = restricted_endomorphism_check(&phi, &m, s)?;
            let v = payload(&report)?;
            if report.centralizer_identity && report.minimal {
                Ok(v)
            } else {
                Err(Failure::Violation(v, "restricted endomorphism identity fails".into()))
            }
        }
    }
}

#[derive(Deserialize)]
struct TopologyFile {
    first: Resolution,
    second: Resolution,
    ideals: Vec<u64>,
}

fn cmd_topology(input: &str, s: &Settings, inputs: &mut Inputs) -> Run<Value> {
    let f = if input == "catalog:appendix" {
        let (first, second, ideals) = appendix_fixture();
        inputs.record(input, b"appendix");
        TopologyFile { first, second, ideals }
    } else {
        serde_json::from_value(inputs.json(input)?)?
    };
    f.first.validate()?;
    f.second.validate()?;
    payload(&compare_topologies(&f.first, &f.second, &f.ideals, s)?)
}

fn cmd_catalog() -> Run<Value> {
    let rings: Vec<Value> = catalog::entries()
        .iter()
        .map(|e| {
            let r = e.build();
            json!({ "name": e.name, "description": e.description, "dim": r.dim(), "modulus": r.modulus(), "size": r.size().map(|n| n.to_string()) })
        })
        .collect();
    Ok(json!({ "rings": rings, "topologies": ["appendix"] }))
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Run<Value> {
    let s = Settings { seed: cli.seed, cap: cli.cap };
    match &cli.command {
        Command::Ring { op, ring } => cmd_ring(*op, ring, &s, inputs),
        Command::Subring { op, ring, spec } => cmd_subring(*op, ring, spec, &s, inputs),
        Command::Fitting { ring, element } => cmd_fitting(ring, element, inputs),
        Command::Tower { op, tower, payload } => cmd_tower(*op, tower, payload.as_deref(), inputs),
        Command::Module { op, input } => cmd_module(*op, input, &s, inputs),
        Command::Topology { op: TopologyOp::Compare, input } => cmd_topology(input, &s, inputs),
        Command::Catalog => cmd_catalog(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut inputs = Inputs::default();
    let (code, status, result, violation) = match run(&cli, &mut inputs) {
        Ok(v) => (0, "ok", v, None),
        Err(Failure::Violation(v, why)) => (1, "violation", v, Some(why)),
        Err(Failure::Input(why)) => (2, "error", Value::Null, Some(why)),
    };
    let mut report = json!({
        "command": args,
        "seed": cli.seed,
        "cap": cli.cap,
        "inputs": inputs.digests,
        "status": status,
        "payload": result,
    });
    if let Some(why) = violation {
        report["message"] = Value::String(why.clone());
        eprintln!("ringcert: {why}");
    }
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("ringcert: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
