//! Subcommand implementations. Each returns the text to print and whether
//! the checks passed; hard errors carry their exit code.

use std::fs;
use std::path::{Path, PathBuf};

use kuniform::catalog::{self, Recipe};
use kuniform::codes::{Distance, LinearCode};
use kuniform::gf::FiniteField;
use kuniform::masking::{self, Feasibility, Masker};
use kuniform::oa::OrthogonalArray;
use kuniform::states::{PureState, UniformityReport, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report::{InputDigest, Report, Versions};
use crate::{Cli, Command, Construct, Format, Mask, Qecc, Verify};

pub struct Outcome {
    pub stdout: String,
    pub passed: bool,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<kuniform::Error> for Failure {
    fn from(e: kuniform::Error) -> Self {
        use kuniform::Error::*;
        let code = match e {
            NotUniform { .. } | NotIrredundant { .. } | SplitNotMaximallyMixed { .. } | NotOrthonormal { .. } | Unsupported { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Run = Result<Outcome, Failure>;

/// Inputs read so far, folded into the report digest.
#[derive(Default)]
struct Inputs {
    digest: InputDigest,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        self.digest.add(path, &bytes);
        String::from_utf8(bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn state(&mut self, path: &Path) -> Result<PureState, Failure> {
        let text = self.read(path)?;
        PureState::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

struct Ctx {
    command: Vec<String>,
    seed: u64,
    inputs: Inputs,
}

impl Ctx {
    fn finish(self, verdict: Verdict, details: Value) -> Run {
        let verdict = match verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Impossible => "impossible",
        };
        let report = Report {
            command: self.command,
            inputs_digest: self.inputs.digest.finish(),
            verdict,
            details,
            versions: Versions::current(),
        };
        Ok(Outcome { stdout: report.to_json() + "\n", passed: report.passed() })
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn distance_value(d: Distance) -> Value {
    match d.finite() {
        Some(w) => json!(w),
        None => json!("infinite"),
    }
}

pub fn run(cli: &Cli, command: Vec<String>) -> Run {
    let ctx = Ctx { command, seed: cli.seed, inputs: Inputs::default() };
    match &cli.command {
        Command::Construct(c) => construct(ctx, c),
        Command::Verify(v) => verify(ctx, v),
        Command::Compose { left, right, output, k } => compose(ctx, left, right, output, *k),
        Command::Mask(m) => mask(ctx, m),
        Command::Qecc(Qecc::Verify { delta, basis }) => qecc(ctx, *delta, basis),
        Command::Table { k, d, n, format } => table(ctx, *k, *d, *n, *format),
    }
}

/// Saves `psi` and reports its `k`-uniformity.
fn emit_state(ctx: Ctx, psi: &PureState, k: usize, output: &Path, source: Value) -> Run {
    let report = psi.verify_k_uniform(k)?;
    write(output, &psi.to_text())?;
    let details = json!({
        "source": source,
        "output": output.display().to_string(),
        "terms": psi.support_len(),
        "uniformity": to_value(&report),
    });
    ctx.finish(report.verdict, details)
}

fn construct(ctx: Ctx, c: &Construct) -> Run {
    match c {
        Construct::Kuniform { shape, k } => {
            let verdict = catalog::exists_k_uniform(*k, shape.d, shape.n);
            let psi = catalog::construct_k_uniform(*k, shape.d, shape.n)?;
            let source = json!({ "recipe": verdict.recipe().map(to_value), "provenance": verdict.provenance() });
            emit_state(ctx, &psi, *k, &shape.output, source)
        }
        Construct::Ghz { shape } => {
            let psi = PureState::ghz(shape.d as usize, shape.n)?;
            let source = to_value(&Recipe::Ghz { d: shape.d, n: shape.n });
            emit_state(ctx, &psi, 1, &shape.output, source)
        }
        Construct::Mds { q, k, n, output, oa, code } => {
            let field = FiniteField::of_order(*q)?.into_shared();
            let rs = LinearCode::mds(&field, *k)?;
            let array = catalog::mds_array(*q, *k, *n)?;
            if let Some(path) = code {
                write(path, &rs.to_text())?;
            }
            if let Some(path) = oa {
                write(path, &array.to_text())?;
            }
            let psi = PureState::from_iroa(&array, *k)?;
            let source = json!({
                "recipe": to_value(&Recipe::MdsTrim { q: *q, k: *k, n: *n }),
                "array": { "runs": array.runs(), "factors": array.factors(), "levels": array.levels(), "strength": array.strength() },
            });
            emit_state(ctx, &psi, *k, output, source)
        }
    }
}

fn verify(mut ctx: Ctx, v: &Verify) -> Run {
    match v {
        Verify::State { k, file } => {
            let psi = ctx.inputs.state(file)?;
            let report: UniformityReport = psi.verify_k_uniform(*k)?;
            let verdict = report.verdict;
            ctx.finish(verdict, to_value(&report))
        }
        Verify::Oa { k, file } => {
            let text = ctx.inputs.read(file)?;
            let oa = OrthogonalArray::parse(&text)?;
            let strength = oa.verify_strength(*k);
            let violation = oa.irredundancy_violation(*k);
            let details = json!({
                "runs": oa.runs(),
                "factors": oa.factors(),
                "levels": oa.levels(),
                "k": k,
                "strength_holds": strength,
                "min_distance": oa.min_distance()?,
                "irredundant": violation.is_none(),
                "irredundancy_violation": violation,
            });
            ctx.finish(pass_if(strength && violation.is_none()), details)
        }
        Verify::Code { k, file } => {
            let text = ctx.inputs.read(file)?;
            let code = LinearCode::parse(&text)?;
            let (w, dual) = (code.min_distance()?, code.dual_distance()?);
            let mut details = json!({
                "q": code.field().order(),
                "length": code.length(),
                "dimension": code.dimension(),
                "min_distance": distance_value(w),
                "dual_distance": distance_value(dual),
                "self_dual": code.is_self_dual(),
            });
            let mut ok = true;
            if let Some(k) = k {
                // The code's array is an IrOA of strength k iff w_dual - 1 >= k and w >= k + 1.
                let strength = dual.finite().map_or(code.length(), |x| x - 1);
                let irredundant = w.finite().is_some_and(|x| x > *k);
                ok = strength >= *k && irredundant;
                details["k"] = json!(k);
                details["array_strength"] = json!(strength);
                details["irredundant"] = json!(irredundant);
            }
            ctx.finish(pass_if(ok), details)
        }
    }
}

fn compose(mut ctx: Ctx, left: &Path, right: &Path, output: &Path, k: Option<usize>) -> Run {
    let a = ctx.inputs.state(left)?;
    let b = ctx.inputs.state(right)?;
    let product = a.tensor_parties(&b)?;
    write(output, &product.to_text())?;
    let mut details = json!({
        "output": output.display().to_string(),
        "N": product.parties(),
        "d": product.dim(),
        "terms": product.support_len(),
        "exact": product.is_exact(),
    });
    let mut verdict = Verdict::Pass;
    if let Some(k) = k {
        let report = product.verify_k_uniform(k)?;
        verdict = report.verdict;
        details["uniformity"] = to_value(&report);
    }
    ctx.finish(verdict, details)
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    d: usize,
    #[serde(rename = "N")]
    parties: usize,
    verified_k: Option<usize>,
    images: Vec<String>,
    provenance: String,
    checks: Vec<ManifestCheck>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestCheck {
    check: String,
    k: usize,
    passed: bool,
}

fn mask(mut ctx: Ctx, m: &Mask) -> Run {
    match m {
        Mask::Build { state, split, k, output } => {
            let psi = ctx.inputs.state(state)?;
            let masker = masking::build_masker(&psi, *split, *k)?;
            let report = masking::verify_masker(&masker, *k)?;
            let sample = masking::sample_masker(&masker, *k, ctx.seed)?;
            fs::create_dir_all(output).map_err(|e| usage(format!("{}: {e}", output.display())))?;
            let mut images = Vec::new();
            for (j, img) in masker.images().iter().enumerate() {
                let name = format!("image_{j}.state");
                write(&output.join(&name), &img.to_text())?;
                images.push(name);
            }
            let manifest = Manifest {
                d: masker.dim(),
                parties: masker.parties(),
                verified_k: masker.verified_k(),
                images,
                provenance: masker.provenance().to_string(),
                checks: vec![
                    ManifestCheck { check: "cross_reduction".into(), k: *k, passed: report.passed() },
                    ManifestCheck { check: "sampled_superpositions".into(), k: *k, passed: sample.passed },
                ],
            };
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
            write(&output.join("manifest.json"), &text)?;
            let ok = report.passed() && sample.passed;
            let details = json!({ "bundle": output.display().to_string(), "manifest": to_value(&manifest), "masking": to_value(&report), "sampling": to_value(&sample) });
            ctx.finish(pass_if(ok), details)
        }
        Mask::Verify { bundle, k } => {
            let manifest_path = bundle.join("manifest.json");
            let text = ctx.inputs.read(&manifest_path)?;
            let manifest: Manifest =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", manifest_path.display())))?;
            let images = manifest
                .images
                .iter()
                .map(|name| ctx.inputs.state(&bundle.join(name)))
                .collect::<Result<Vec<_>, _>>()?;
            let masker = Masker::from_images(images, manifest.provenance.clone())?;
            if (masker.dim(), masker.parties()) != (manifest.d, manifest.parties) {
                return Err(usage(format!(
                    "manifest says d={}, N={} but the images have d={}, N={}",
                    manifest.d,
                    manifest.parties,
                    masker.dim(),
                    masker.parties()
                )));
            }
            let report = masking::verify_masker(&masker, *k)?;
            let sample = masking::sample_masker(&masker, *k, ctx.seed)?;
            let ok = report.passed() && sample.passed;
            let details = json!({ "manifest": to_value(&manifest), "masking": to_value(&report), "sampling": to_value(&sample) });
            ctx.finish(pass_if(ok), details)
        }
        Mask::Feasible { n, d } => {
            let f = masking::strong_masking_feasible(*n, *d)?;
            let verdict = pass_if(f.verdict == Feasibility::Feasible);
            ctx.finish(verdict, to_value(&f))
        }
    }
}

fn qecc(mut ctx: Ctx, delta: usize, basis: &[PathBuf]) -> Run {
    let states = basis.iter().map(|p| ctx.inputs.state(p)).collect::<Result<Vec<_>, _>>()?;
    let report = masking::verify_pure_qecc(&states, delta)?;
    let ok = report.passed();
    ctx.finish(pass_if(ok), to_value(&report))
}

fn table(ctx: Ctx, k: usize, d: (u32, u32), n: (usize, usize), format: Format) -> Run {
    if d.0 < 2 {
        return Err(usage("local dimensions start at 2"));
    }
    let rows: Vec<u32> = (d.0..=d.1).collect();
    let grid = catalog::emit_table(k, &rows, n.0..=n.1);
    match format {
        Format::Text => Ok(Outcome { stdout: grid.to_text(), passed: true }),
        Format::Json => ctx.finish(Verdict::Pass, to_value(&grid)),
    }
}
