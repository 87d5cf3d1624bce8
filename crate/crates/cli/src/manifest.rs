//! Versioned job manifests. Every subcommand is turned into one of these
//! before it runs, so a manifest file replays a command exactly.

use std::path::PathBuf;

use banach_reduce::fixtures::{FRAME, MARGIN};
use banach_reduce::{Field, Values};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const MANIFEST_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Holes,
    Check,
    Reduce,
    Principal,
    ExtendRow,
    ExpReduce,
    Certify,
    Demo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Holes => "holes",
            Command::Check => "check",
            Command::Reduce => "reduce",
            Command::Principal => "principal",
            Command::ExtendRow => "extend-row",
            Command::ExpReduce => "exp-reduce",
            Command::Certify => "certify",
            Command::Demo => "demo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DemoName {
    Annulus,
    Disk,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FixtureName {
    Annulus,
    Disk,
}

fn default_frame() -> f64 {
    FRAME
}

fn default_margin() -> usize {
    MARGIN
}

/// Where the functions live.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    /// The annulus `1 <= |z| <= 2` or the disk `|z| <= 2`.
    Fixture {
        name: FixtureName,
        resolution: f64,
        field: Field,
    },
    /// `K = {re(expr) >= 0}` on a square of the given half-width, or on an
    /// interval of the real line when `interval` is set.
    Region {
        expr: String,
        resolution: f64,
        field: Field,
        #[serde(default = "default_frame")]
        half_width: f64,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        interval: bool,
        #[serde(default = "default_margin")]
        margin: usize,
    },
    /// A mask file written by the library.
    Mask {
        path: PathBuf,
        field: Field,
    },
    Finite {
        m: usize,
        field: Field,
    },
    Circle {
        n: usize,
        field: Field,
    },
}

/// A function given as an expression, an explicit value list, or an
/// element file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSource {
    Expr(String),
    Values(Values),
    File { path: PathBuf },
}

impl FunctionSource {
    /// `[..]` is a JSON value list, `@path` an element file, anything else
    /// an expression.
    pub fn parse_arg(s: &str) -> Result<Self, CliError> {
        if s.trim_start().starts_with('[') {
            let v: Values = serde_json::from_str(s)
                .map_err(|e| CliError::new("invalid_values", format!("{s}: {e}")))?;
            Ok(FunctionSource::Values(v))
        } else if let Some(path) = s.strip_prefix('@') {
            Ok(FunctionSource::File {
                path: PathBuf::from(path),
            })
        } else {
            Ok(FunctionSource::Expr(s.to_string()))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Functions {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f: Vec<FunctionSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FunctionSource>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// JSON reports and certificates.
    #[default]
    Json,
    /// JSON plus an SVG render of the domain, zero set and holes.
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dir: PathBuf,
    #[serde(default)]
    pub format: Format,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: PathBuf::from("."),
            format: Format::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobManifest {
    pub version: String,
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    #[serde(default)]
    pub functions: Functions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Certificate to re-verify (`certify`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demo: Option<DemoName>,
    /// Grid step for demos.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
}

impl JobManifest {
    pub fn new(command: Command) -> Self {
        JobManifest {
            version: MANIFEST_VERSION.to_string(),
            command,
            instance: None,
            functions: Functions::default(),
            eps: None,
            tol: None,
            output: OutputSpec::default(),
            certificate: None,
            demo: None,
            resolution: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let m: JobManifest = serde_json::from_str(text)
            .map_err(|e| CliError::new("invalid_manifest", e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    /// Schema checks beyond what deserialization enforces.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::new("invalid_manifest", msg));
        if self.version != MANIFEST_VERSION {
            return bad(format!(
                "manifest version {} is not {MANIFEST_VERSION}",
                self.version
            ));
        }
        for (name, v) in [
            ("eps", self.eps),
            ("tol", self.tol),
            ("resolution", self.resolution),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return bad(format!("{name} must be positive, got {v}"));
                }
            }
        }
        let needs_instance = !matches!(self.command, Command::Certify | Command::Demo);
        if needs_instance && self.instance.is_none() {
            return bad(format!("{} needs an instance", self.command.name()));
        }
        let needs_g = needs_instance;
        if needs_g && self.functions.g.is_none() {
            return bad(format!("{} needs g", self.command.name()));
        }
        let needs_f = matches!(
            self.command,
            Command::Reduce | Command::Principal | Command::ExtendRow | Command::ExpReduce
        );
        if needs_f && self.functions.f.is_empty() {
            return bad(format!("{} needs at least one f", self.command.name()));
        }
        if self.command == Command::Certify && self.certificate.is_none() {
            return bad("certify needs a certificate path".into());
        }
        if self.command == Command::Demo && self.demo.is_none() {
            return bad("demo needs a name".into());
        }
        if let Some(
            InstanceSpec::Fixture { resolution, .. } | InstanceSpec::Region { resolution, .. },
        ) = &self.instance
        {
            if !(resolution.is_finite() && *resolution > 0.0) {
                return bad(format!("resolution must be positive, got {resolution}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifests_round_trip() {
        let mut m = JobManifest::new(Command::Reduce);
        m.instance = Some(InstanceSpec::Fixture {
            name: FixtureName::Annulus,
            resolution: 1.0 / 32.0,
            field: Field::Complex,
        });
        m.functions.f = vec![FunctionSource::Expr("z".into())];
        m.functions.g = Some(FunctionSource::Values(Values::Real(vec![1.0, 2.0])));
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(JobManifest::from_json(&text).unwrap(), m);
    }

    #[test]
    fn version_and_fields_are_checked() {
        let text = r#"{"version":"v2","command":"certify","certificate":"c.json"}"#;
        assert_eq!(
            JobManifest::from_json(text).unwrap_err().code,
            "invalid_manifest"
        );
        let text = r#"{"version":"v1","command":"reduce","bogus":1}"#;
        assert!(JobManifest::from_json(text).is_err());
        let text = r#"{"version":"v1","command":"reduce"}"#;
        assert!(JobManifest::from_json(text).is_err());
    }

    #[test]
    fn argument_forms() {
        assert!(matches!(
            FunctionSource::parse_arg("abs(z)").unwrap(),
            FunctionSource::Expr(_)
        ));
        assert!(matches!(
            FunctionSource::parse_arg("[1, -2]").unwrap(),
            FunctionSource::Values(Values::Real(_))
        ));
        assert!(matches!(
            FunctionSource::parse_arg("[[0, 1]]").unwrap(),
            FunctionSource::Values(Values::Complex(_))
        ));
        assert!(matches!(
            FunctionSource::parse_arg("@g.json").unwrap(),
            FunctionSource::File { .. }
        ));
    }
}
