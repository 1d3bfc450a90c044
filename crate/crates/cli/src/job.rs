use prescope_core::algebra::{Field, RatN, RatNK};
use prescope_core::apred::ResidualForm;
use prescope_core::automorphism::{default_ansatz, find_automorphisms, sigma_matrix, MatN};
use prescope_core::ore::OreOp;
use prescope_core::ratsum::{
    abramov_reduce, discrete_residues, finite_sum, vanishing_sum_check, Block, NicoleDenominator, NicoleNumerator,
    VanishingSum,
};
use prescope_core::telescope::{
    direct_prescoper, minimal_annihilator, minimal_prescoper_of, minimal_telescoper_of, nicole_candidates,
    prescoper_by_groups, zero_sum_certify, Bound, HyperModule, PrescoperResult, SpecialForm, SumRange,
    ZeroSumCertificate,
};
use prescope_core::term::{linear_form, parse, parse_ratfunc, HyperTerm, Lin};
use prescope_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::range::parse_range;

pub const VERBS: [&str; 11] = [
    "telescoper",
    "prescoper",
    "annihilator",
    "reduce",
    "residues",
    "summable",
    "nicole-check",
    "zerosum",
    "automorphism",
    "lclm",
    "eval",
];

/// One invocation, from flags or from a job file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub verb: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gn: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gk: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratfunc: Option<String>,
    /// Rational factor `f` turning the term `H` into `f*H`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<String>,
    /// Operator applied to `f*H` before the verb runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
}

/// A Nicole pair `P/Q` in text form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    /// Factor depending on `n` only, e.g. `factorial(n)`.
    pub scale: String,
    /// Polynomial in `n` and `x`, written with `k` for `x`.
    #[serde(default = "one")]
    pub base: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<BlockSpec>,
    pub lo: String,
    pub hi: String,
}

/// `prod_{i=lo}^{hi} (s*x + t*i + c)^e`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub lo: String,
    pub hi: String,
    pub s: i64,
    pub t: i64,
    pub c: i64,
    #[serde(default = "unit")]
    pub e: u32,
}

fn one() -> String {
    "1".into()
}

fn unit() -> u32 {
    1
}

/// Why a job did not produce a result.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Math(e) if is_input_error(e) => 2,
            Failure::Math(_) => 1,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            Failure::Usage(_) => "Usage".into(),
            Failure::Math(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
            }
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Math(e) => e.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.message() }, "exit_code": self.exit_code() })
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Syntax { .. }
            | Error::NonIntegerLinearArgument { .. }
            | Error::InvalidInput(_)
            | Error::NotHypergeometric(_)
            | Error::IncompatibleQuotients
            | Error::ZeroTerm
    )
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Math(e)
    }
}

type Outcome = Result<Value, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn required<'a>(field: &'a Option<String>, name: &str) -> Result<&'a str, Failure> {
    field.as_deref().ok_or_else(|| usage(format!("missing --{name}")))
}

impl JobSpec {
    pub fn new(verb: &str) -> JobSpec {
        JobSpec { verb: verb.into(), ..JobSpec::default() }
    }

    fn hyper_term(&self) -> Result<HyperTerm, Failure> {
        match (&self.term, &self.gn, &self.gk) {
            (Some(t), None, None) => Ok(HyperTerm::parse(t)?),
            (None, Some(gn), Some(gk)) => Ok(HyperTerm::from_quotients(parse_ratfunc(gn)?, parse_ratfunc(gk)?)?),
            (None, None, None) => Err(usage("missing --term")),
            _ => Err(usage("give either --term or both --gn and --gk")),
        }
    }

    fn ratfunc(&self) -> Result<RatNK, Failure> {
        Ok(parse_ratfunc(required(&self.ratfunc, "ratfunc")?)?)
    }

    fn range(&self) -> Result<SumRange, Failure> {
        match &self.range {
            Some(r) => parse_range(r).map_err(usage),
            None => Ok(SumRange::all()),
        }
    }

    /// The module of the term and the multiplier of `H0` for `pre(f*H)`.
    fn module(&self) -> Result<(HyperModule, RatNK), Failure> {
        let module = HyperModule::new(&self.hyper_term()?)?;
        let mut f = module.shell().clone();
        if let Some(m) = &self.multiplier {
            f = f.mul(&parse_ratfunc(m)?);
        }
        if let Some(p) = &self.pre {
            f = module.apply(&OreOp::parse(p)?, &f);
        }
        Ok((module, f))
    }

    fn plain(&self, verb: &str) -> Result<(), Failure> {
        if self.multiplier.is_some() || self.pre.is_some() {
            return Err(usage(format!("{verb} does not take --multiplier or --pre")));
        }
        Ok(())
    }
}

/// Runs a job and returns its result payload.
pub fn run(job: &JobSpec) -> Outcome {
    match job.verb.as_str() {
        "telescoper" => telescoper(job),
        "prescoper" => prescoper(job),
        "annihilator" => annihilator(job),
        "reduce" => reduce(job),
        "residues" => residues(job),
        "summable" => summable(job),
        "nicole-check" => nicole_check(job),
        "zerosum" => zerosum(job),
        "automorphism" => automorphism(job),
        "lclm" => lclm(job),
        "eval" => eval(job),
        v => Err(usage(format!("unknown verb '{v}', expected one of {}", VERBS.join(", ")))),
    }
}

fn operator_json(op: &OreOp) -> Value {
    json!({ "operator": op.to_string(), "order": op.order(), "coefficients": op.coeff_strings() })
}

fn telescoper(job: &JobSpec) -> Outcome {
    let (module, f) = job.module()?;
    Ok(operator_json(&minimal_telescoper_of(&module, &f)?))
}

fn prescoper_json(r: &PrescoperResult) -> Value {
    let mut out = operator_json(&r.op);
    out["p"] = json!(RatNK::from_poly(r.p.clone()).to_string());
    out["v"] = json!(RatNK::from_poly(r.v.clone()).to_string());
    out["residual"] = json!(r.residual().to_string());
    out
}

fn prescoper(job: &JobSpec) -> Outcome {
    let (module, f) = job.module()?;
    let r = match job.method.as_deref().unwrap_or("dependence") {
        "dependence" => minimal_prescoper_of(&module, &f)?,
        "groups" => prescoper_by_groups(&module, &f)?,
        "direct" => direct_prescoper(&module, &SpecialForm::from_multiplier(&f)?)?,
        m => return Err(usage(format!("unknown method '{m}', expected dependence, groups or direct"))),
    };
    Ok(prescoper_json(&r))
}

fn annihilator(job: &JobSpec) -> Outcome {
    job.plain("annihilator")?;
    let (module, f) = job.module()?;
    let z = zero_sum_certify(&module, &job.range()?, &[])?;
    let (op, improved) = match minimal_annihilator(&module, &z) {
        Ok(op) => (op, true),
        Err(Error::NoOperatorFound(_)) => (minimal_telescoper_of(&module, &f)?, false),
        Err(e) => return Err(e.into()),
    };
    let mut out = operator_json(&op);
    out["zero_sum_improvement"] = json!(improved);
    out["certified_degrees"] = json!(z.certified_degrees());
    out["valid_from"] = json!(z.n_min);
    Ok(out)
}

fn reduce(job: &JobSpec) -> Outcome {
    let (module, f) = job.module()?;
    let res = module.reduce(&f);
    let form = ResidualForm::new(module.reducer(), &res);
    let mut out = serde_json::Map::new();
    for (k, v) in form.fields() {
        out.insert(k.into(), json!(v));
    }
    out.insert("shell".into(), json!(module.shell().to_string()));
    out.insert("wk_basis".into(), json!(module.reducer().wk_basis()));
    out.insert("summable".into(), json!(form.is_hyper_summable()));
    Ok(Value::Object(out))
}

fn residues(job: &JobSpec) -> Outcome {
    let rs = discrete_residues(&job.ratfunc()?)?;
    let list: Vec<Value> = rs
        .iter()
        .map(|o| json!({ "orbit": o.orbit_rep.to_string(), "multiplicity": o.multiplicity, "residue": o.residue.to_string() }))
        .collect();
    Ok(json!({ "residues": list, "summable": list.is_empty() }))
}

fn summable(job: &JobSpec) -> Outcome {
    let d = abramov_reduce(&job.ratfunc()?);
    let mut out = json!({ "summable": d.r.is_zero(), "antidifference": d.g.to_string() });
    if !d.r.is_zero() {
        out["remainder"] = json!(d.r.to_string());
    }
    Ok(out)
}

fn lin(text: &str) -> Result<Lin, Failure> {
    linear_form(&parse(text)?).ok_or_else(|| usage(format!("'{text}' is not integer-linear")))
}

fn pair(spec: &PairSpec) -> Result<(NicoleNumerator, NicoleDenominator), Failure> {
    let (base, den) = parse_ratfunc(&spec.base)?.integer_parts();
    if !den.is_constant() {
        return Err(usage(format!("base '{}' is not a polynomial", spec.base)));
    }
    let c = den.leading().map(|(_, c)| c).expect("nonzero denominator");
    let mut blocks = Vec::new();
    for b in &spec.blocks {
        blocks.push(Block { lo: lin(&b.lo)?, hi: lin(&b.hi)?, s: b.s, t: b.t, c: b.c, e: b.e });
    }
    let num = NicoleNumerator { scale: parse(&spec.scale)?, base: base.scale(&c.inv()), blocks };
    Ok((num, NicoleDenominator { lo: lin(&spec.lo)?, hi: lin(&spec.hi)? }))
}

fn vanishing_json(v: &VanishingSum) -> Value {
    json!({ "certified": v.certified, "valid_from": v.valid_from, "anchor": [v.anchor.0, v.anchor.1], "gap": v.gap.to_string() })
}

fn nicole_check(job: &JobSpec) -> Outcome {
    job.plain("nicole-check")?;
    let t = job.hyper_term()?;
    if let Some(spec) = &job.pair {
        let (p, q) = pair(spec)?;
        return Ok(vanishing_json(&vanishing_sum_check(&t, &p, &q)?));
    }
    let mut last = None;
    for (p, q) in nicole_candidates(&t) {
        match vanishing_sum_check(&t, &p, &q) {
            Ok(v) if v.certified => return Ok(vanishing_json(&v)),
            Ok(v) => last = Some(Ok(v)),
            Err(e) => last = Some(Err(e)),
        }
    }
    match last {
        Some(Ok(v)) => Ok(vanishing_json(&v)),
        Some(Err(e)) => Err(e.into()),
        None => Err(Error::MismatchedTerm("no candidate pair; supply one with --pair".into()).into()),
    }
}

fn ratn_rows(rows: &[Vec<RatN>]) -> Value {
    json!(rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn zerosum_json(module: &HyperModule, z: &ZeroSumCertificate) -> Value {
    let witnesses: Vec<Value> = z
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "degree": w.degree,
                "certified": w.certified,
                "valid_from": w.valid_from,
                "slack": w.slack,
                "note": w.note,
            })
        })
        .collect();
    json!({
        "wk_basis": module.reducer().wk_basis(),
        "certified_degrees": z.certified_degrees(),
        "witnesses": witnesses,
        "closure": z.closure,
        "closure_matrix": ratn_rows(&z.closure_matrix),
        "n_min": z.n_min,
        "basis_degree_bound": z.basis_degree_bound,
    })
}

fn zerosum(job: &JobSpec) -> Outcome {
    job.plain("zerosum")?;
    let (module, _) = job.module()?;
    let z = zero_sum_certify(&module, &job.range()?, &[])?;
    Ok(zerosum_json(&module, &z))
}

fn matrix_json(m: &MatN) -> Value {
    ratn_rows(&m.to_rows())
}

fn automorphism(job: &JobSpec) -> Outcome {
    job.plain("automorphism")?;
    let (module, _) = job.module()?;
    let sigma = sigma_matrix(&module)?;
    let (mut deg, mut den) = default_ansatz(&sigma);
    if let Some(d) = job.deg_bound {
        deg = d;
    }
    if let Some(d) = &job.denominator {
        let r = parse_ratfunc(d)?.as_ratn().ok_or_else(|| usage("--denominator depends on k"))?;
        if !r.is_polynomial() {
            return Err(usage("--denominator is not a polynomial in n"));
        }
        den = r.numer().clone();
    }
    let sols = find_automorphisms(&sigma, deg, &den)?;
    let basis: Vec<String> = module.reducer().wk_basis().iter().map(|d| format!("k^{d}")).collect();
    Ok(json!({
        "dimension": sigma.rows(),
        "basis": basis,
        "sigma": matrix_json(&sigma),
        "deg_bound": deg,
        "denominator": den.to_string(),
        "solution_dimension": sols.len(),
        "solutions": sols.iter().map(matrix_json).collect::<Vec<_>>(),
    }))
}

fn lclm(job: &JobSpec) -> Outcome {
    if job.operators.len() < 2 {
        return Err(usage("lclm needs at least two --op operators"));
    }
    let mut acc = OreOp::parse(&job.operators[0])?;
    for o in &job.operators[1..] {
        acc = acc.lclm(&OreOp::parse(o)?)?;
    }
    Ok(operator_json(&acc.canonical()))
}

fn bound_at(b: Bound, n0: i64) -> Result<i64, Failure> {
    match b {
        Bound::At(l) => Ok(l.eval(n0, 0)),
        _ => Err(usage("eval sums need finite range ends")),
    }
}

fn eval(job: &JobSpec) -> Outcome {
    let n0 = job.n.ok_or_else(|| usage("missing --n"))?;
    if job.ratfunc.is_some() {
        let k0 = job.k.ok_or_else(|| usage("missing --k"))?;
        let v = job.ratfunc()?.eval(&n0.into(), &k0.into());
        return Ok(json!({ "value": v.map(|v| v.to_string()) }));
    }
    job.plain("eval")?;
    let t = job.hyper_term()?;
    if let Some(r) = &job.range {
        let r = parse_range(r).map_err(usage)?;
        let (lo, hi) = (bound_at(r.lo, n0)?, bound_at(r.hi, n0)?);
        return Ok(json!({ "sum": finite_sum(&t, n0, lo, hi).to_string() }));
    }
    let k0 = job.k.ok_or_else(|| usage("missing --k or --range"))?;
    if t.source().is_none() {
        return Err(usage("terms given by quotients cannot be evaluated"));
    }
    Ok(json!({ "value": t.eval_int(n0, k0).map(|v| v.to_string()) }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(verb: &str, f: impl FnOnce(&mut JobSpec)) -> JobSpec {
        let mut j = JobSpec::new(verb);
        f(&mut j);
        j
    }

    #[test]
    fn exit_codes() {
        let j = job("telescoper", |_| {});
        assert_eq!(run(&j).unwrap_err().exit_code(), 2);
        let j = job("telescoper", |j| j.term = Some("1/(n^2+k^2)".into()));
        let e = run(&j).unwrap_err();
        assert_eq!((e.exit_code(), e.kind().as_str()), (1, "NoTelescoper"));
        let j = job("telescoper", |j| j.term = Some("binomial(n^2,k)".into()));
        assert_eq!(run(&j).unwrap_err().exit_code(), 2);
        assert_eq!(run(&JobSpec::new("frobnicate")).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn summable_payload() {
        let j = job("summable", |j| j.ratfunc = Some("1/(k*(k+1))".into()));
        assert_eq!(run(&j).unwrap(), json!({ "summable": true, "antidifference": "-1/k" }));
    }

    #[test]
    fn job_files_round_trip() {
        let j = job("annihilator", |j| {
            j.term = Some("(-1)^k*binomial(n,k)*binomial(3*k,n)".into());
            j.range = Some("0..n".into());
        });
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(serde_json::from_str::<JobSpec>(&text).unwrap(), j);
        assert!(serde_json::from_str::<JobSpec>(r#"{"verb": "eval", "colour": 1}"#).is_err());
    }
}
