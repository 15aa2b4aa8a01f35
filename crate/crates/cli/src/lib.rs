//! Request/report layer behind the `hsderiv` binary.
//!
//! A [`Request`] names a subcommand and carries its operands as text; [`run`]
//! turns it into a [`Report`] whose JSON form is the tool's output. Reports
//! contain only values derived from the request, so identical requests give
//! byte-identical output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hsderiv::wire::{DerivationRecord, ModuleRecord, SubstitutionRecord};
use hsderiv::{
    apply_substitution, check_equivalence_condition, composition_constant, compress, decompress, frobenius_twist,
    normalize_at, recover_substitution, CheckReport, Error, IdModule, IterativeDerivation, Level, ModuleVector,
    PrimeField, RationalFunction, Substitution,
};

pub const COMMANDS: [&str; 15] = [
    "standard",
    "apply",
    "verify",
    "level",
    "comp-const",
    "equiv-apply",
    "equiv-check",
    "equiv-recover",
    "normalize",
    "twist",
    "compress",
    "decompress",
    "module-verify",
    "module-transform",
    "module-constant",
];

pub const DEFAULT_ORDER: usize = 16;

/// One invocation. Operands are expressions in the shared text grammar.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Request {
    pub command: String,
    pub p: u64,
    pub order: Option<usize>,
    pub theta: Option<String>,
    pub lambda: Option<String>,
    /// Target derivation for `equiv-recover`.
    pub tilde: Option<String>,
    pub t: Option<String>,
    pub f: Option<String>,
    pub d: Option<u32>,
    pub m: Option<u64>,
    pub module: Option<String>,
    pub vector: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub i: usize,
    pub j: usize,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub p: u64,
    pub order: usize,
    pub pass: Option<bool>,
    pub value: Option<Value>,
    pub first_failure: Option<FailureRecord>,
    pub error: Option<ErrorRecord>,
}

impl Report {
    /// 0 = pass or value, 1 = a mathematical check failed, 2 = bad input,
    /// 3 = a precondition of the operation does not hold.
    pub fn exit_code(&self) -> i32 {
        if let Some(err) = &self.error {
            return match err.kind.as_str() {
                "ParseError"
                | "NotPrime"
                | "InvalidGenerator"
                | "NonzeroConstantTerm"
                | "InvalidModule"
                | "DimensionMismatch"
                | "UnexpectedVariable"
                | "OrderTooSmall"
                | "OrderMismatch"
                | "FieldMismatch"
                | "MissingArgument"
                | "UnknownCommand"
                | "InvalidRequest" => 2,
                "NotAPthPower" | "Inconsistent" => 1,
                _ => 3,
            };
        }
        match self.pass {
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(pass) = self.pass {
            out.push_str(if pass { "pass" } else { "FAIL" });
            out.push_str(&format!(" (p = {}, N = {})\n", self.p, self.order));
        }
        if let Some(Value::Object(map)) = &self.value {
            for (k, v) in map {
                match v {
                    Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                    other => out.push_str(&format!("{k}: {other}\n")),
                }
            }
        }
        if let Some(f) = &self.first_failure {
            if let Some((r, c)) = f.entry {
                out.push_str(&format!("first failure in entry ({r}, {c})\n"));
            }
            if let Some(e) = &f.element {
                out.push_str(&format!("first failure on element {e}\n"));
            }
            out.push_str(&format!("first failure at U^{} T^{}: lhs = {}, rhs = {}\n", f.i, f.j, f.lhs, f.rhs));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error [{}]: {}\n", e.kind, e.message));
        }
        out
    }
}

/// Failures raised by the request layer itself.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
enum RunError {
    #[error("missing argument --{0}")]
    Missing(&'static str),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error(transparent)]
    Engine(#[from] Error),
}

impl RunError {
    fn record(&self) -> ErrorRecord {
        let (kind, position) = match self {
            RunError::Missing(_) => ("MissingArgument", None),
            RunError::UnknownCommand(_) => ("UnknownCommand", None),
            RunError::Engine(Error::Parse(p)) => ("ParseError", Some(p.position)),
            RunError::Engine(e) => (e.kind(), None),
        };
        ErrorRecord { kind: kind.to_string(), message: self.to_string(), position }
    }
}

struct Outcome {
    pass: Option<bool>,
    value: Option<Value>,
    first_failure: Option<FailureRecord>,
}

impl Outcome {
    fn value(v: Value) -> Self {
        Self { pass: None, value: Some(v), first_failure: None }
    }

    fn check(report: CheckReport, value: Option<Value>) -> Self {
        Self { pass: Some(report.pass), value, first_failure: report.first_failure.map(failure_record) }
    }
}

fn failure_record(f: hsderiv::Failure) -> FailureRecord {
    FailureRecord {
        i: f.i,
        j: f.j,
        lhs: f.lhs.to_string(),
        rhs: f.rhs.to_string(),
        entry: f.entry,
        element: f.element.map(|e| e.to_string()),
    }
}

/// Executes one request. Never panics on bad input; errors become part of
/// the report.
pub fn run(req: &Request) -> Report {
    let order = req.order.unwrap_or(DEFAULT_ORDER);
    let mut report = Report {
        command: req.command.clone(),
        p: req.p,
        order,
        pass: None,
        value: None,
        first_failure: None,
        error: None,
    };
    match dispatch(req, order) {
        Ok(o) => {
            report.pass = o.pass;
            report.value = o.value;
            report.first_failure = o.first_failure;
        }
        Err(e) => report.error = Some(e.record()),
    }
    report
}

struct Ctx<'a> {
    req: &'a Request,
    field: PrimeField,
    order: usize,
}

impl Ctx<'_> {
    fn theta(&self) -> Result<IterativeDerivation, RunError> {
        match &self.req.theta {
            Some(text) => Ok(IterativeDerivation::parse(self.field, self.order, text)?),
            None => Ok(IterativeDerivation::standard(self.field, self.order)),
        }
    }

    fn lambda(&self) -> Result<Substitution, RunError> {
        let text = self.req.lambda.as_deref().ok_or(RunError::Missing("lambda"))?;
        Ok(Substitution::parse(self.field, self.order, text)?)
    }

    fn element(&self, name: &'static str, text: Option<&String>) -> Result<RationalFunction, RunError> {
        let text = text.ok_or(RunError::Missing(name))?;
        Ok(RationalFunction::parse(self.field, text)?)
    }

    fn d(&self) -> Result<u32, RunError> {
        self.req.d.ok_or(RunError::Missing("d"))
    }

    fn module(&self) -> Result<IdModule, RunError> {
        let text = self.req.module.as_deref().ok_or(RunError::Missing("module"))?;
        Ok(IdModule::parse(self.theta()?, text)?)
    }
}

fn derivation_value(theta: &IterativeDerivation) -> Value {
    serde_json::to_value(DerivationRecord::from(theta)).expect("records serialize")
}

fn dispatch(req: &Request, order: usize) -> Result<Outcome, RunError> {
    if !COMMANDS.contains(&req.command.as_str()) {
        return Err(RunError::UnknownCommand(req.command.clone()));
    }
    let field = PrimeField::new(req.p)?;
    if order < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: order }.into());
    }
    let cx = Ctx { req, field, order };
    let out = match req.command.as_str() {
        "standard" => Outcome::value(derivation_value(&IterativeDerivation::standard(field, order))),
        "apply" => {
            let theta = cx.theta()?;
            let f = cx.element("f", req.f.as_ref())?;
            Outcome::value(json!({ "image": theta.apply(&f).to_string() }))
        }
        "verify" => {
            let theta = cx.theta()?;
            let report = match &req.f {
                // strict mode: check each `;`-separated element directly
                Some(list) => {
                    let elems = list
                        .split(';')
                        .map(|t| RationalFunction::parse(field, t))
                        .collect::<hsderiv::Result<Vec<_>>>()?;
                    theta.verify_iterativity_on(&elems)?
                }
                None => theta.verify_iterativity(),
            };
            Outcome::check(report, None)
        }
        "level" => {
            let theta = cx.theta()?;
            let level = match &req.f {
                Some(text) => match theta.level(&RationalFunction::parse(field, text)?)? {
                    Level::Finite(d) => json!(d),
                    Level::Constant => json!("constant"),
                },
                None => json!(theta.global_level()?),
            };
            Outcome::value(json!({ "level": level }))
        }
        "comp-const" => {
            let m = req.m.ok_or(RunError::Missing("m"))?;
            if m == 0 {
                return Err(Error::OrderTooSmall { min: 1, got: 0 }.into());
            }
            Outcome::value(json!({ "m": m, "constant": composition_constant(m, field) }))
        }
        "equiv-apply" => {
            let lambda = cx.lambda()?;
            let tilde = apply_substitution(&cx.theta()?, &lambda)?;
            let mut v = derivation_value(&tilde);
            v["invertible"] = json!(lambda.is_invertible());
            Outcome::value(v)
        }
        "equiv-check" => {
            let lambda = cx.lambda()?;
            let tilde = apply_substitution(&cx.theta()?, &lambda)?;
            let report = check_equivalence_condition(&tilde, &lambda)?;
            Outcome::check(report, Some(json!({ "theta_tilde": tilde.generator().to_string() })))
        }
        "equiv-recover" => {
            let theta = cx.theta()?;
            let text = req.tilde.as_deref().ok_or(RunError::Missing("tilde"))?;
            let tilde = IterativeDerivation::parse(field, order, text)?;
            let f = match &req.f {
                Some(t) => RationalFunction::parse(field, t)?,
                None => RationalFunction::var(field),
            };
            let lambda = recover_substitution(&theta, &tilde, &f)?;
            Outcome::value(serde_json::to_value(SubstitutionRecord::from(&lambda)).expect("records serialize"))
        }
        "normalize" => {
            let theta = cx.theta()?;
            let t = cx.element("t", req.t.as_ref())?;
            let norm = normalize_at(&theta, &t)?;
            let mut v = derivation_value(&norm.derivation);
            v["lambda"] = json!(norm.substitution.series().to_string());
            Outcome::value(v)
        }
        "twist" => Outcome::value(derivation_value(&frobenius_twist(&cx.theta()?, cx.d()?)?)),
        "compress" => {
            let c = compress(&cx.theta()?)?;
            let mut v = derivation_value(&c.derivation);
            v["level"] = json!(c.level);
            Outcome::value(v)
        }
        "decompress" => Outcome::value(derivation_value(&decompress(&cx.theta()?, cx.d()?)?)),
        "module-verify" => Outcome::check(cx.module()?.verify_iterativity(), None),
        "module-transform" => {
            let moved = cx.module()?.transform(&cx.lambda()?)?;
            let record = serde_json::to_value(ModuleRecord::from(&moved)).expect("records serialize");
            Outcome::check(moved.verify_iterativity(), Some(record))
        }
        "module-constant" => {
            let m = cx.module()?;
            let text = req.vector.as_deref().ok_or(RunError::Missing("vector"))?;
            let v = ModuleVector::parse(field, text)?;
            let image = m.apply(&v)?;
            let constant = m.is_constant_vector(&v)?;
            let image: Vec<String> = image.iter().map(ToString::to_string).collect();
            Outcome { pass: Some(constant), value: Some(json!({ "image": image })), first_failure: None }
        }
        _ => unreachable!("command list checked above"),
    };
    Ok(out)
}

/// Parses one JSON request line for batch mode.
pub fn parse_request_line(line: &str) -> Result<Request, Box<Report>> {
    serde_json::from_str(line).map_err(|e| {
        Box::new(Report {
            command: String::new(),
            p: 0,
            order: 0,
            pass: None,
            value: None,
            first_failure: None,
            error: Some(ErrorRecord {
                kind: "InvalidRequest".into(),
                message: e.to_string(),
                position: Some(e.column()),
            }),
        })
    })
}
