//! Executes a [`JobManifest`]: builds the instance and functions, runs the
//! decision or construction, and writes the summary, certificate, SVG and
//! manifest into the output directory.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use banach_reduce::algebra::default_tol;
use banach_reduce::cert::ObstructionReport;
use banach_reduce::fixtures::{annulus, circle_power, disk};
use banach_reduce::raster::MaskFile;
use banach_reduce::reduce::{
    exp_reduce_pair_bsr1, extend_row, reduce_to_principal, reduce_tuple, PrincipalObstruction,
    PrincipalOutcome, ReduceOptions, ReduceOutcome,
};
use banach_reduce::svg::{render, Layers};
use banach_reduce::topology::{
    b1_falsify, complement_components, default_eps, hole_condition_with, hole_windings,
    sublevel_zero_set, winding_number, HoleReport, HoleWinding, Obstruction,
};
use banach_reduce::{
    certify, AlgebraInstance, Bbox, Certificate, Element, ElementFile, Error, Field, Instance,
    RasterDomain, Scalar, Spectrum, Tuple,
};
use serde_json::{json, Value};

use crate::expr::{parse_expr, Expr, Point};
use crate::manifest::{
    Command, DemoName, FixtureName, Format, FunctionSource, InstanceSpec, JobManifest,
};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_OBSTRUCTION: i32 = 2;

/// Resolution used by demos when none is given.
pub const DEMO_RESOLUTION: f64 = 1.0 / 64.0;

/// Result of a run: the exit code, the summary printed to stdout and the
/// files written (relative to the output directory).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: i32,
    pub summary: Value,
    pub files: Vec<String>,
}

pub fn run(m: &JobManifest) -> Result<Outcome, CliError> {
    m.validate()?;
    fs::create_dir_all(&m.output.dir).map_err(|e| CliError::io(&m.output.dir, e))?;
    execute(m, m.command.name())
}

fn execute(m: &JobManifest, stem: &str) -> Result<Outcome, CliError> {
    let mut out = Writer {
        dir: m.output.dir.clone(),
        stem: stem.to_string(),
        files: Vec::new(),
    };
    out.write_manifest(m)?;
    let (exit, summary) = match m.command {
        Command::Holes => holes(m, &mut out)?,
        Command::Check => check(m, &mut out)?,
        Command::Reduce => reduce(m, &mut out)?,
        Command::Principal => principal(m, &mut out)?,
        Command::ExtendRow => extend(m, &mut out)?,
        Command::ExpReduce => exp_reduce(m, &mut out)?,
        Command::Certify => certify_file(m)?,
        Command::Demo => demo(m, &mut out)?,
    };
    let mut summary = summary;
    if let Value::Object(map) = &mut summary {
        map.insert("command".into(), json!(m.command.name()));
        map.insert("exit".into(), json!(exit));
    }
    out.write(&format!("{stem}.json"), &pretty(&summary)?)?;
    Ok(Outcome {
        exit,
        summary,
        files: out.files,
    })
}

struct Writer {
    dir: PathBuf,
    stem: String,
    files: Vec<String>,
}

impl Writer {
    fn write(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn write_manifest(&mut self, m: &JobManifest) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(m).map_err(CliError::from_json)?;
        self.write(&format!("{}.manifest.json", self.stem), &text)
    }

    fn write_cert(&mut self, cert: &Certificate) -> Result<String, CliError> {
        let name = format!("{}.cert.json", self.stem);
        self.write(&name, &cert.to_json()?)?;
        Ok(name)
    }

    fn write_svg(
        &mut self,
        m: &JobManifest,
        k: &RasterDomain,
        layers: &Layers<'_>,
    ) -> Result<(), CliError> {
        if m.output.format == Format::Svg {
            self.write(&format!("{}.svg", self.stem), &render(k, layers))?;
        }
        Ok(())
    }
}

fn pretty(v: &Value) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(CliError::from_json)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

// ---- instances and functions ----

fn predicate(expr: &Expr, p: Point) -> bool {
    expr.eval(&p).map(|v| v.re >= 0.0).unwrap_or(false)
}

pub fn build_instance(spec: &InstanceSpec) -> Result<Instance, CliError> {
    let inst = match spec {
        InstanceSpec::Fixture {
            name,
            resolution,
            field,
        } => match name {
            FixtureName::Annulus => annulus(*field, *resolution)?,
            FixtureName::Disk => disk(*field, *resolution)?,
        },
        InstanceSpec::Region {
            expr,
            resolution,
            field,
            half_width,
            interval,
            margin,
        } => {
            let e = parse_expr(expr).map_err(CliError::syntax)?;
            let d = if *interval {
                RasterDomain::rasterize_1d(-half_width, *half_width, *resolution, *margin, |x| {
                    predicate(&e, Point::planar(x, 0.0))
                })?
            } else {
                RasterDomain::rasterize_2d(
                    Bbox::square(*half_width),
                    *resolution,
                    *margin,
                    |x, y| predicate(&e, Point::planar(x, y)),
                )?
            };
            AlgebraInstance::grid(*field, d)?
        }
        InstanceSpec::Mask { path, field } => {
            let file: MaskFile = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::new("invalid_mask", format!("{}: {e}", path.display())))?;
            AlgebraInstance::grid(*field, RasterDomain::from_file(&file)?)?
        }
        InstanceSpec::Finite { m, field } => AlgebraInstance::finite(*field, *m)?,
        InstanceSpec::Circle { n, field } => AlgebraInstance::circle(*field, *n)?,
    };
    Ok(inst)
}

/// Where an expression is evaluated at spectrum point `p`.
fn point_of(inst: &Instance, p: usize) -> Point {
    match inst.spectrum() {
        Spectrum::Grid(d) => {
            let [x, y] = d.center(inst.cell(p));
            Point::planar(x, y)
        }
        Spectrum::Circle { n } => {
            let theta = 2.0 * PI * p as f64 / *n as f64;
            Point {
                x: theta.cos(),
                y: theta.sin(),
                theta,
            }
        }
        Spectrum::Finite { .. } => Point {
            x: p as f64,
            y: 0.0,
            theta: 0.0,
        },
    }
}

/// Samples an expression on every spectrum point. Real instances reject
/// values with a non-negligible imaginary part.
pub fn sample_expr(inst: &Instance, src: &str) -> Result<Element, CliError> {
    let e = parse_expr(src).map_err(CliError::syntax)?;
    let real = inst.field() == Field::Real;
    let mut values = Vec::with_capacity(inst.len());
    for p in 0..inst.len() {
        let v = e.eval(&point_of(inst, p)).map_err(|err| {
            CliError::new(
                "domain_error",
                format!("{src}: {err} at spectrum point {p}"),
            )
        })?;
        if real {
            if v.im.abs() > 1e-12 * (1.0 + v.re.abs()) {
                return Err(CliError::new(
                    "complex_value",
                    format!("{src} has value {v} at spectrum point {p} on a real instance"),
                ));
            }
            values.push(Scalar::new(v.re, 0.0));
        } else {
            values.push(v);
        }
    }
    Ok(Element::new(inst, values)?)
}

fn load(inst: &Instance, src: &FunctionSource) -> Result<Element, CliError> {
    match src {
        FunctionSource::Expr(s) => sample_expr(inst, s),
        FunctionSource::Values(v) => Ok(v.to_element(inst)?),
        FunctionSource::File { path } => {
            let file = ElementFile::from_json(&read(path)?)?;
            Ok(file.decode_on(inst)?)
        }
    }
}

struct Job {
    inst: Instance,
    f: Option<Tuple>,
    g: Element,
    opts: ReduceOptions,
}

impl Job {
    fn new(m: &JobManifest) -> Result<Self, CliError> {
        let spec = m.instance.as_ref().expect("validated");
        let inst = build_instance(spec)?;
        let g = load(&inst, m.functions.g.as_ref().expect("validated"))?;
        let f = if m.functions.f.is_empty() {
            None
        } else {
            let coords = m
                .functions
                .f
                .iter()
                .map(|s| load(&inst, s))
                .collect::<Result<Vec<_>, _>>()?;
            Some(Tuple::new(coords)?)
        };
        let opts = ReduceOptions {
            eps: m.eps,
            tol: m.tol,
        };
        Ok(Job { inst, f, g, opts })
    }

    fn f(&self) -> &Tuple {
        self.f.as_ref().expect("validated")
    }

    fn eps(&self) -> f64 {
        self.opts.eps.unwrap_or_else(|| default_eps(&self.g))
    }

    fn tol(&self) -> f64 {
        self.opts.tol.unwrap_or_else(|| {
            let fs = self.f.as_ref().map_or(0.0, Tuple::sup_norm);
            default_tol(fs.max(self.g.sup_norm()))
        })
    }

    fn domain(&self) -> Result<&RasterDomain, CliError> {
        self.inst.domain().ok_or_else(|| {
            CliError::new(
                "scope",
                "zero sets and holes need a grid instance".to_string(),
            )
        })
    }
}

// ---- commands ----

fn hole_summary(report: &HoleReport, hc: &banach_reduce::topology::HoleConditionResult) -> Value {
    let holes: Vec<Value> = report
        .holes
        .iter()
        .zip(&hc.verdicts)
        .map(|(h, v)| {
            json!({
                "cells": h.cells.len(),
                "boundary_lengths": h.boundary.iter().map(|c| c.cells.len()).collect::<Vec<_>>(),
                "escapes_domain": v.holds(),
                "witness_point": v.witness_point,
            })
        })
        .collect();
    json!({
        "components": report.components.len(),
        "unbounded": report.unbounded_count(),
        "holes": holes,
    })
}

fn holes(m: &JobManifest, out: &mut Writer) -> Result<(i32, Value), CliError> {
    let job = Job::new(m)?;
    let k = job.domain()?;
    let eps = job.eps();
    let z = sublevel_zero_set(&job.g, eps)?;
    let report = complement_components(&z);
    let hc = hole_condition_with(&report, &z, k)?;
    let windings: Vec<HoleWinding> = match (&job.f, k.dim()) {
        (Some(f), 2) if job.inst.field() == Field::Complex => hole_windings(f.get(0), &report)?,
        _ => Vec::new(),
    };
    let cert = Certificate::hole_condition(&job.g, eps, &hc)?;
    let cert_file = out.write_cert(&cert)?;
    out.write_svg(
        m,
        k,
        &Layers {
            zero_set: Some(&z),
            holes: Some(&report),
            windings: &windings,
        },
    )?;
    Ok((
        EXIT_OK,
        json!({
            "eps": eps,
            "zero_set_cells": z.popcount(),
            "report": hole_summary(&report, &hc),
            "hole_condition": hc.holds,
            "windings": windings,
            "certificate": cert_file,
        }),
    ))
}

fn check(m: &JobManifest, out: &mut Writer) -> Result<(i32, Value), CliError> {
    let job = Job::new(m)?;
    let k = job.domain()?;
    let eps = job.eps();
    let z = sublevel_zero_set(&job.g, eps)?;
    let report = complement_components(&z);
    let hc = hole_condition_with(&report, &z, k)?;
    let trapped = b1_falsify(&job.g, eps)?;
    let cert = Certificate::hole_condition(&job.g, eps, &hc)?;
    let cert_file = out.write_cert(&cert)?;
    out.write_svg(
        m,
        k,
        &Layers {
            zero_set: Some(&z),
            holes: Some(&report),
            windings: &[],
        },
    )?;
    let violations: Vec<_> = hc.violations().cloned().collect();
    let exit = if hc.holds { EXIT_OK } else { EXIT_OBSTRUCTION };
    Ok((
        exit,
        json!({
            "eps": eps,
            "hole_condition": hc.holds,
            "violations": violations,
            "boundary_principle": {
                "holds": trapped.is_none(),
                "trapped_region": trapped.as_ref().map(|t| json!({
                    "cells": t.cells.len(),
                    "sample": t.sample,
                })),
            },
            "decisions_agree": hc.holds == trapped.is_none(),
            "certificate": cert_file,
        }),
    ))
}

fn windings_json(o: &Obstruction) -> Value {
    json!(o.windings)
}

fn reduce(m: &JobManifest, out: &mut Writer) -> Result<(i32, Value), CliError> {
    let job = Job::new(m)?;
    let f = job.f();
    match reduce_tuple(f, &job.g, &job.opts)? {
        ReduceOutcome::Reducible(w) => {
            let cert = Certificate::reduction(f, &job.g, &w, job.tol())?;
            let cert_file = out.write_cert(&cert)?;
            Ok((
                EXIT_OK,
                json!({
                    "reducible": true,
                    "eps": w.eps,
                    "achieved_min": w.achieved_min,
                    "trace": w.trace,
                    "certificate": cert_file,
                }),
            ))
        }
        ReduceOutcome::Irreducible(rep) => {
            let cert = Certificate::irreducible(f, &job.g, &rep)?;
            let cert_file = out.write_cert(&cert)?;
            Ok((
                EXIT_OBSTRUCTION,
                json!({
                    "reducible": false,
                    "eps": rep.eps,
                    "obstruction": windings_json(&rep.obstruction),
                    "hole_condition": rep.hole_condition.as_ref().map(|h| h.holds),
                    "certificate": cert_file,
                }),
            ))
        }
    }
}

fn principal(m: &JobManifest, out: &mut Writer) -> Result<(i32, Value), CliError> {
    let job = Job::new(m)?;
    let f = job.f();
    match reduce_to_principal(f, &job.g, &job.opts)? {
        PrincipalOutcome::Principal(w) => {
            let cert = Certificate::principal(f, &job.g, &w)?;
            let cert_file = out.write_cert(&cert)?;
            Ok((
                EXIT_OK,
                json!({
                    "principal": true,
                    "factors": w.logs.len(),
                    "residuals": cert.residuals,
                    "certificate": cert_file,
                }),
            ))
        }
        PrincipalOutcome::NotPrincipal(obs) => {
            let cert = Certificate::not_principal(f, &job.g, job.eps(), &obs)?;
            let cert_file = out.write_cert(&cert)?;
            let obstruction = match &obs {
                PrincipalObstruction::Winding(o) => {
                    json!({"kind": "winding", "windings": o.windings})
                }
                PrincipalObstruction::Irreducible(o) => {
                    json!({"kind": "irreducible", "windings": o.windings})
                }
                PrincipalObstruction::NonPositive { point, value } => {
                    json!({"kind": "non_positive", "point": point, "value": value})
                }
            };
            Ok((
                EXIT_OBSTRUCTION,
                json!({
                    "principal": false,
                    "obstruction": obstruction,
                    "certificate": cert_file,
                }),
            ))
        }
    }
}

fn extend(m: &JobManifest, out: &mut Writer) -> Result<(i32, Value), CliError> {
    let job = Job::new(m)?;
    let f = job.f();
    let w = match reduce_tuple(f, &job.g, &job.opts)? {
        ReduceOutcome::Reducible(w) => w,
        ReduceOutcome::Irreducible(rep) => {
            let cert = Certificate::irreducible(f, &job.g, &rep)?;
            let cert_file = out.write_cert(&cert)?;
            return Ok((
                EXIT_OBSTRUCTION,
                json!({
                    "extended": false,
                    "obstruction": windings_json(&rep.obstruction),
                    "certificate": cert_file,
                }),
            ));
        }
    };
    let ext = extend_row(f, &job.g, &w.a, job.tol())?;
    let cert = Certificate::row_extension(f, &job.g, &w.a, &ext)?;
    let cert_file = out.write_cert(&cert)?;
    Ok((
        EXIT_OK,
        json!({
            "extended": true,
            "size": f.len() + 1,
            "factors": ext.logs.len(),
            "residuals": ext.residuals,
            "certificate": cert_file,
        }),
    ))
}

fn exp_reduce(m: &JobManifest, out: &mut Writer) -> Result<(i32, Value), CliError> {
    let job = Job::new(m)?;
    let f = job.f();
    if f.len() != 1 {
        return Err(CliError::new(
            "scope",
            "exp-reduce takes a single f (the pair (a, g))".to_string(),
        ));
    }
    let obstruction = |kind: &str, detail: Value| {
        Ok((
            EXIT_OBSTRUCTION,
            json!({"exp_reducible": false, "obstruction": {"kind": kind, "detail": detail}}),
        ))
    };
    match exp_reduce_pair_bsr1(f.get(0), &job.g, &job.opts) {
        Ok(w) => {
            let cert = Certificate::exp_reducibility(f, &job.g, &w)?;
            let cert_file = out.write_cert(&cert)?;
            Ok((
                EXIT_OK,
                json!({
                    "exp_reducible": true,
                    "residuals": cert.residuals,
                    "certificate": cert_file,
                }),
            ))
        }
        Err(Error::LogObstruction(o)) => obstruction("log_obstruction", windings_json(&o)),
        Err(Error::HoleConditionViolated(o)) => {
            obstruction("hole_condition_violated", windings_json(&o))
        }
        Err(Error::NonPositiveValue { index, value }) => obstruction(
            "non_positive_value",
            json!({"point": index, "value": value}),
        ),
        Err(e) => Err(e.into()),
    }
}

fn certify_file(m: &JobManifest) -> Result<(i32, Value), CliError> {
    let path = m.certificate.as_ref().expect("validated");
    let cert = Certificate::from_json(&read(path)?)?;
    let report = match certify(&cert) {
        Ok(r) => r,
        Err(e) => {
            return Ok((
                EXIT_OBSTRUCTION,
                json!({"ok": false, "claim": cert.claim, "error": e.code(), "message": e.to_string()}),
            ))
        }
    };
    let obstruction = match &cert.obstruction {
        Some(ObstructionReport::Winding { windings }) => json!({"windings": windings}),
        Some(ObstructionReport::NonPositive { point, value }) => {
            json!({"point": point, "value": value})
        }
        None => Value::Null,
    };
    let exit = if report.ok { EXIT_OK } else { EXIT_OBSTRUCTION };
    Ok((
        exit,
        json!({
            "ok": report.ok,
            "claim": report.claim,
            "digest_ok": report.digest_ok,
            "checks": report.checks,
            "obstruction": obstruction,
        }),
    ))
}

// ---- demos ----

fn sub(
    m: &JobManifest,
    command: Command,
    instance: InstanceSpec,
    f: &[&str],
    g: &str,
) -> JobManifest {
    let mut s = JobManifest::new(command);
    s.instance = Some(instance);
    s.functions.f = f
        .iter()
        .map(|e| FunctionSource::Expr(e.to_string()))
        .collect();
    s.functions.g = Some(FunctionSource::Expr(g.to_string()));
    s.eps = m.eps;
    s.tol = m.tol;
    s.output = m.output.clone();
    s
}

fn step(m: &JobManifest, stem: &str, expect: i32) -> Result<Value, CliError> {
    let o = execute(m, stem)?;
    if o.exit != expect {
        return Err(CliError::new(
            "demo_failed",
            format!("{stem} exited {} instead of {expect}", o.exit),
        ));
    }
    Ok(o.summary)
}

fn demo(m: &JobManifest, _out: &mut Writer) -> Result<(i32, Value), CliError> {
    let h = m.resolution.unwrap_or(DEMO_RESOLUTION);
    let fixture = |name| InstanceSpec::Fixture {
        name,
        resolution: h,
        field: Field::Complex,
    };
    let summary = match m.demo.expect("validated") {
        DemoName::Annulus => {
            let k = fixture(FixtureName::Annulus);
            let g = "|z| - 1.5";
            json!({
                "demo": "annulus",
                "holes": step(&sub(m, Command::Holes, k.clone(), &["z"], g), "annulus-holes", EXIT_OK)?,
                "reduce": step(&sub(m, Command::Reduce, k.clone(), &["z"], g), "annulus-reduce", EXIT_OK)?,
                "principal": step(&sub(m, Command::Principal, k, &["z"], g), "annulus-principal", EXIT_OBSTRUCTION)?,
            })
        }
        DemoName::Disk => {
            let k = fixture(FixtureName::Disk);
            let g = "|z| - 1";
            json!({
                "demo": "disk",
                "check": step(&sub(m, Command::Check, k.clone(), &[], g), "disk-check", EXIT_OBSTRUCTION)?,
                "reduce": step(&sub(m, Command::Reduce, k, &["z"], g), "disk-reduce", EXIT_OBSTRUCTION)?,
            })
        }
        DemoName::Circle => {
            let n = 1024;
            let inst = AlgebraInstance::circle(Field::Complex, n)?;
            let windings = (-3..=3)
                .map(|k| {
                    Ok(json!({"k": k, "winding": winding_number(circle_power(&inst, k).values())?}))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let spec = InstanceSpec::Circle {
                n,
                field: Field::Complex,
            };
            json!({
                "demo": "circle",
                "windings": windings,
                "exp_reduce": step(
                    &sub(m, Command::ExpReduce, spec, &["exp(i*theta)"], "0"),
                    "circle-exp-reduce",
                    EXIT_OBSTRUCTION,
                )?,
            })
        }
    };
    Ok((EXIT_OK, summary))
}
