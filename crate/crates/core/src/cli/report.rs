use std::collections::BTreeMap;
use std::io::Write;
use std::time::Duration;

use clap::ValueEnum;
use serde::Serialize;

use crate::config::Tolerances;
use crate::{Error, Result};

/// Output encoding of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
    Csv,
}

/// Where the presentation came from.
#[derive(Clone, Debug, Serialize)]
pub(crate) struct InputEcho {
    pub kind: &'static str,
    pub value: String,
    pub presentation: String,
}

/// Command-specific result body.
pub(crate) trait Payload: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> String;
    fn residuals(&self) -> BTreeMap<&'static str, f64>;
}

#[derive(Serialize)]
struct Report<'a, P: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<&'a InputEcho>,
    tolerances: &'a Tolerances,
    result: &'a P,
    residuals: BTreeMap<&'static str, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_seconds: Option<f64>,
}

pub(crate) struct Emit<'a> {
    pub format: Format,
    pub command: &'a str,
    pub input: Option<&'a InputEcho>,
    pub tolerances: &'a Tolerances,
    pub elapsed: Option<Duration>,
}

impl Emit<'_> {
    pub fn write<P: Payload>(&self, out: &mut dyn Write, payload: &P) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(e.to_string());
        let residuals = payload.residuals();
        match self.format {
            Format::Json => {
                let report = Report {
                    tool: env!("CARGO_PKG_NAME"),
                    version: env!("CARGO_PKG_VERSION"),
                    command: self.command,
                    input: self.input,
                    tolerances: self.tolerances,
                    result: payload,
                    residuals,
                    wall_time_seconds: self.elapsed.map(|d| d.as_secs_f64()),
                };
                let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(out, "{text}").map_err(io)?;
            }
            Format::Text => {
                writeln!(
                    out,
                    "{} {} {}",
                    env!("CARGO_PKG_NAME"),
                    env!("CARGO_PKG_VERSION"),
                    self.command
                )
                .map_err(io)?;
                if let Some(input) = self.input {
                    writeln!(out, "input: {} {}", input.kind, input.value).map_err(io)?;
                }
                let t = self.tolerances;
                writeln!(
                    out,
                    "tolerances: general={:e} trim={:e} interpolation={:e} division={:e} simplicity={:e} derivative={:e} newton={:e}",
                    t.general, t.trim, t.interpolation, t.division, t.simplicity, t.derivative, t.newton
                )
                .map_err(io)?;
                write!(out, "{}", payload.text()).map_err(io)?;
                for (k, v) in &residuals {
                    writeln!(out, "residual {k}: {v:.3e}").map_err(io)?;
                }
                if let Some(d) = self.elapsed {
                    writeln!(out, "wall time: {:.3}s", d.as_secs_f64()).map_err(io)?;
                }
            }
            Format::Csv => write!(out, "{}", payload.csv()).map_err(io)?,
        }
        Ok(())
    }
}
