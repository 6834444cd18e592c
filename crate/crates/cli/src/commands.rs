use clap::ValueEnum;
use detkit_core::cotangent::{self, t1, t2, CoefficientModule, ModulePresentation, Presentation};
use detkit_core::determinacy::{
    check_t1_support, determinacy_report, divisor_report, AnnihilationWitness, DEFAULT_CAP,
};
use detkit_core::lifting::{
    emit_artin_system, formal_lift, verify_lift, Divisor, FamilyPair, LiftBounds, LiftCertificate, MapTruncation,
    StepRecord, Window,
};
use detkit_core::oracle::{self, truncated_iso_search, IsoSearch, TruncationBox};
use detkit_core::ring::{Polynomial, Ring};
use serde_json::{json, Value};

use crate::json::{self, elements, matrix, poly, polys};
use crate::problem::{parse_problem, ProblemSpec};
use crate::{CliError, Exit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    T1,
    T2,
    Bound,
    DivisorBound,
    Support,
    Lift,
    Verify,
    Oracle,
    ArtinSystem,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::T1 => "t1",
            Command::T2 => "t2",
            Command::Bound => "bound",
            Command::DivisorBound => "divisor-bound",
            Command::Support => "support",
            Command::Lift => "lift",
            Command::Verify => "verify",
            Command::Oracle => "oracle",
            Command::ArtinSystem => "artin-system",
        }
    }
}

/// Command-line overrides of problem-file settings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub cap: Option<u32>,
    pub order: Option<u32>,
    pub bx: Option<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub envelope: Value,
    pub exit: Exit,
}

impl Report {
    pub fn results(&self) -> &Value {
        &self.envelope["results"]
    }

    pub fn summary(&self) -> Vec<String> {
        let mut out = vec![format!("command: {}", self.envelope["command"].as_str().unwrap_or(""))];
        out.extend(json::summary(self.results()));
        out
    }
}

struct Context {
    spec: ProblemSpec,
    ring: Ring,
    pres: Presentation,
    cap: u32,
}

impl Context {
    fn new(mut spec: ProblemSpec, opts: &Options) -> Result<Self, CliError> {
        spec.cap = opts.cap.or(spec.cap);
        spec.order = opts.order.or(spec.order);
        spec.bx = opts.bx.or(spec.bx);
        let ring = spec.ring()?;
        let pres = Presentation::new(ring.nvars(), spec.ideal_polys(&ring)?)?;
        let cap = spec.cap.unwrap_or(DEFAULT_CAP);
        Ok(Context { spec, ring, pres, cap })
    }

    fn inputs(&self) -> Value {
        serde_json::to_value(&self.spec).expect("problem specs serialise")
    }

    fn divisor_index(&self) -> Option<usize> {
        self.spec.divisor.as_ref().and_then(|d| self.ring.index_of(d))
    }

    fn pair(&self) -> Result<FamilyPair, CliError> {
        let (Some(perturbed), Some(k)) = (self.spec.perturbed_polys(&self.ring)?, self.spec.k) else {
            return Err(CliError::Usage("this command needs `perturbed:` and `k:`".into()));
        };
        let divisor = match self.divisor_index() {
            None => None,
            Some(variable) => {
                let power = self
                    .spec
                    .r
                    .ok_or_else(|| CliError::Usage("a divisor needs its power `r:`".into()))?;
                Some(Divisor { variable, power })
            }
        };
        let perturbed = Presentation::new(self.ring.nvars(), perturbed)?;
        Ok(FamilyPair::new(self.pres.clone(), perturbed, k, divisor)?)
    }

    fn truncation_box(&self) -> Result<Option<TruncationBox>, CliError> {
        self.spec
            .bx
            .map(|(l, d)| TruncationBox::new(l, d).map_err(CliError::from))
            .transpose()
    }
}

fn module_results(ring: &Ring, mp: &ModulePresentation) -> Result<(Value, Value), CliError> {
    let results = json!({
        "annihilator": polys(ring, &mp.annihilator()?),
        "generators": mp.rank(),
        "zero": mp.is_zero_module()?,
    });
    let certificates = json!({
        "embedding": elements(ring, mp.embedding()),
        "relations": elements(ring, mp.relations()),
    });
    Ok((results, certificates))
}

fn witness_json(ring: &Ring, w: &AnnihilationWitness) -> Value {
    json!({
        "coefficients": polys(ring, &w.coefficients),
        "element": poly(ring, &w.element),
        "generators": polys(ring, &w.generators),
    })
}

fn map_json(ring: &Ring, m: &MapTruncation) -> Value {
    polys(ring, m.images())
}

/// Runs `command` on a parsed problem.
pub fn run(command: Command, spec: &ProblemSpec, opts: &Options) -> Result<Report, CliError> {
    if command == Command::Verify {
        return Err(CliError::Usage("`verify` reads the JSON written by `lift`".into()));
    }
    let cx = Context::new(spec.clone(), opts)?;
    let ring = &cx.ring;
    let (results, certificates) = match command {
        Command::T1 | Command::T2 => {
            let mp = if command == Command::T1 {
                t1(&cx.pres, &CoefficientModule::Ring)?
            } else {
                t2(&cx.pres, &CoefficientModule::Ring)?
            };
            let (mut results, certificates) = module_results(ring, &mp)?;
            if command == Command::T1 {
                if let Some(bx) = cx.truncation_box()? {
                    results["truncated_dimension"] = json!(cotangent::truncated_t1_dimension(&cx.pres, &bx)?);
                }
            }
            (results, certificates)
        }
        Command::Bound => {
            let r = determinacy_report(&cx.pres, cx.cap)?;
            let results = json!({
                "flat": r.flat,
                "n": r.n,
                "n1": r.n1,
                "n2": r.n2,
                "precision_loss": r.precision_loss,
                "t1_annihilator": polys(ring, &r.t1_annihilator),
                "t2_zero": r.t2_is_zero,
                "threshold_k": r.threshold_k,
            });
            let certificates = json!({
                "n1_lower_remainder": r.n1_lower_remainder.as_ref().map(|p| poly(ring, p)),
                "n1_witness": witness_json(ring, &r.n1_witness),
            });
            (results, certificates)
        }
        Command::DivisorBound => {
            let w = cx
                .divisor_index()
                .ok_or_else(|| CliError::Usage("`divisor-bound` needs `divisor:`".into()))?;
            let r = divisor_report(&cx.pres, w, cx.cap)?;
            let results = json!({
                "divisor": cx.spec.divisor,
                "flat": r.flat,
                "m": r.m,
                "n": r.n,
                "powers_checked": r.powers_checked,
                "t_regular_on_divisor": r.t_regular_on_divisor,
            });
            let certificates = json!({
                "witnesses": r.witnesses.iter().map(|w| witness_json(ring, w)).collect::<Vec<_>>(),
            });
            (results, certificates)
        }
        Command::Support => {
            let n = ring.nvars();
            let mut cutouts = vec![Polynomial::t(n)];
            if let Some(w) = cx.divisor_index() {
                cutouts.push(Polynomial::z(n, w));
            }
            let supported = check_t1_support(&cx.pres, &cutouts)?;
            (
                json!({ "cutouts": polys(ring, &cutouts), "supported": supported }),
                json!({}),
            )
        }
        Command::Lift => lift(&cx)?,
        Command::Oracle => {
            let bx = cx
                .truncation_box()?
                .ok_or_else(|| CliError::Usage("`oracle` needs `box:` or --box".into()))?;
            let brute = oracle::truncated_t1_dimension(ring.nvars(), cx.pres.generators(), None, &bx)?;
            let module = cotangent::truncated_t1_dimension(&cx.pres, &bx)?;
            let mut results = json!({
                "agree": brute == module,
                "module_t1_dimension": module,
                "t1_dimension": brute,
            });
            let mut certificates = json!({});
            if cx.spec.perturbed.is_some() {
                match truncated_iso_search(&cx.pair()?, &bx)? {
                    IsoSearch::Found(map) => {
                        results["iso_search"] = json!("found");
                        certificates["map"] = map_json(ring, &map);
                    }
                    IsoSearch::Inconclusive => results["iso_search"] = json!("inconclusive"),
                }
            }
            (results, certificates)
        }
        Command::ArtinSystem => {
            let sys = emit_artin_system(&cx.pair()?, ring)?;
            (
                json!({ "equations": sys.render(), "unknowns": sys.unknowns }),
                json!({}),
            )
        }
        Command::Verify => unreachable!(),
    };
    Ok(Report {
        envelope: json::envelope(command.name(), cx.inputs(), results, certificates),
        exit: Exit::Success,
    })
}

fn lift(cx: &Context) -> Result<(Value, Value), CliError> {
    let ring = &cx.ring;
    let pair = cx.pair()?;
    let target = cx.spec.order.unwrap_or(2 * pair.k());
    let out = formal_lift(&pair, target, cx.cap)?;
    let cert = &out.certificate;
    let bounds = cert.bounds.expect("formal lifts record their bounds");
    let results = json!({
        "agreement_order": cert.agreement_order,
        "corrections": cert.steps.iter().filter(|s| !s.skipped).count(),
        "invertible_mod_t": cert.invertible_mod_t,
        "k": pair.k(),
        "m": bounds.m,
        "map": map_json(ring, &out.map),
        "n": bounds.n,
        "target_order": target,
        "working_order": cert.stages.last().map(|s| s.order()).unwrap_or(pair.k()),
    });
    let certificates = json!({
        "cofactors": polys(ring, &cert.cofactors),
        "quotients": matrix(ring, &cert.quotients),
        "stages": cert.stages.iter().map(|s| map_json(ring, s)).collect::<Vec<_>>(),
        "steps": cert.steps.iter().map(|s| json!({
            "order": s.order,
            "skipped": s.skipped,
            "theta": polys(ring, &s.theta),
        })).collect::<Vec<_>>(),
    });
    Ok((results, certificates))
}

fn field<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Value, CliError> {
    let mut cur = v;
    for p in path {
        cur = cur
            .get(p)
            .ok_or_else(|| CliError::Certificate(format!("missing `{}`", path.join("."))))?;
    }
    Ok(cur)
}

fn field_u32(v: &Value, path: &[&str]) -> Result<u32, CliError> {
    field(v, path)?
        .as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| CliError::Certificate(format!("`{}` is not a small integer", path.join("."))))
}

/// Re-validates a `lift` report from its JSON alone.
pub fn verify(doc: &Value, opts: &Options) -> Result<Report, CliError> {
    if field(doc, &["command"])?.as_str() != Some("lift") {
        return Err(CliError::Certificate("`verify` expects the output of `lift`".into()));
    }
    let spec: ProblemSpec = serde_json::from_value(field(doc, &["inputs"])?.clone())
        .map_err(|e| CliError::Certificate(format!("inputs: {e}")))?;
    let cx = Context::new(spec, opts)?;
    let ring = &cx.ring;
    let pair = cx.pair()?;
    let target = field_u32(doc, &["results", "target_order"])?;
    let bounds = LiftBounds {
        n: field_u32(doc, &["results", "n"])?,
        m: field_u32(doc, &["results", "m"])?,
    };
    let map = MapTruncation::new(
        json::read_polys(ring, field(doc, &["results", "map"])?, "results.map")?,
        Window::new(target, None),
    );
    let stages_json = field(doc, &["certificates", "stages"])?
        .as_array()
        .ok_or_else(|| CliError::Certificate("`certificates.stages` is not an array".into()))?;
    let stages = stages_json
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(MapTruncation::new(
                json::read_polys(ring, s, "certificates.stages")?,
                Window::new(pair.k() + i as u32, pair.divisor()),
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let steps_json = field(doc, &["certificates", "steps"])?
        .as_array()
        .ok_or_else(|| CliError::Certificate("`certificates.steps` is not an array".into()))?;
    let steps = steps_json
        .iter()
        .map(|s| {
            Ok(StepRecord {
                order: field_u32(s, &["order"])?,
                skipped: field(s, &["skipped"])?
                    .as_bool()
                    .ok_or_else(|| CliError::Certificate("`skipped` is not a boolean".into()))?,
                theta: json::read_polys(ring, field(s, &["theta"])?, "theta")?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let certificate = LiftCertificate {
        window: Window::new(target, None),
        quotients: json::read_matrix(
            ring,
            field(doc, &["certificates", "quotients"])?,
            "certificates.quotients",
        )?,
        cofactors: json::read_polys(
            ring,
            field(doc, &["certificates", "cofactors"])?,
            "certificates.cofactors",
        )?,
        agreement_order: field_u32(doc, &["results", "agreement_order"])?,
        invertible_mod_t: field(doc, &["results", "invertible_mod_t"])?.as_bool().unwrap_or(false),
        bounds: Some(bounds),
        steps,
        stages,
    };
    certificate.check(&map, &pair)?;
    let fresh = verify_lift(&map, &pair, target)?;
    let results = json!({
        "accepted": true,
        "agreement_order": fresh.agreement_order,
        "checked_generators": fresh.quotients.len(),
        "order": target,
    });
    Ok(Report {
        envelope: json::envelope(Command::Verify.name(), cx.inputs(), results, json!({})),
        exit: Exit::Success,
    })
}

/// Parses `text` (a problem file, or a `lift` report for `verify`) and runs `command`.
pub fn run_text(command: Command, text: &str, opts: &Options) -> Result<Report, CliError> {
    if command == Command::Verify {
        let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Certificate(e.to_string()))?;
        return verify(&doc, opts);
    }
    run(command, &parse_problem(text)?, opts)
}

/// Envelope describing a failed run, carrying the counterexample witness if any.
pub fn failure_envelope(command: Command, err: &CliError) -> Value {
    let (kind, witness) = match err {
        CliError::Core(detkit_core::Error::Hypothesis { witness, .. }) => ("hypothesis", witness.clone()),
        CliError::Core(detkit_core::Error::UnsolvableStep { residual, .. }) => ("unsolvable_step", residual.clone()),
        CliError::Core(detkit_core::Error::Verification { index, .. }) => ("verification", vec![index.to_string()]),
        CliError::Core(detkit_core::Error::ResourceCap(_)) => ("resource_cap", vec![]),
        _ => ("usage", vec![]),
    };
    let results = json!({
        "error": { "kind": kind, "message": err.to_string(), "witness": witness },
        "exit_code": err.exit() as i32,
    });
    json::envelope(command.name(), json!({}), results, json!({}))
}
