//! Scenario configuration: one TOML section per scenario with flat typed keys.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oned::WireShape;
use crate::potential::{BarrierParams, ImpurityParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Branches,
    Critical,
    Penetration,
    ThresholdSweep,
    Impurity,
    Stokes1d,
    Stokes2d,
    WireZeroField,
    Caustics,
    Crosscheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Parameters a sweep may vary.
pub const SWEEPABLE: &[&str] = &["B", "gamma", "alpha0", "alpha0_sq", "a", "y", "u", "l", "a_imp", "k", "x", "energy", "width", "beta0"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: ScenarioKind,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0_sq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_imp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<WireShape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub widths: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_alpha0_sq: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_param: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedScenario {
    pub name: String,
    pub scenario: Scenario,
    /// 1-based line of the section header in the source file.
    pub line: usize,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

/// Line of `key` inside section `name`, falling back to the section header.
pub fn key_line(src: &str, name: &str, key: &str) -> usize {
    let header = format!("[{name}]");
    let mut in_section = false;
    let mut header_line = 1;
    for (i, line) in src.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') {
            in_section = t == header;
            if in_section {
                header_line = i + 1;
            }
            continue;
        }
        if in_section && !key.is_empty() && t.split('=').next().map(str::trim) == Some(key) {
            return i + 1;
        }
    }
    header_line
}

pub fn parse_config(src: &str) -> Result<Vec<NamedScenario>> {
    let table: toml::Table = src.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map_or(0, |s| line_of(src, s.start));
        Error::config(format!("line {line}"), e.message().to_string())
    })?;
    let mut out = Vec::new();
    for (name, value) in table {
        let line = key_line(src, &name, "");
        let scenario: Scenario = value.try_into().map_err(|e: toml::de::Error| {
            let msg = e.message().to_string();
            let field = msg
                .split('`')
                .nth(1)
                .map(|f| format!("[{name}].{f} (line {})", key_line(src, &name, f)))
                .unwrap_or_else(|| format!("[{name}] (line {line})"));
            Error::config(field, msg)
        })?;
        let named = NamedScenario { name: name.clone(), scenario, line };
        named.validate(src)?;
        out.push(named);
    }
    if out.is_empty() {
        return Err(Error::config("line 1", "config defines no scenarios"));
    }
    Ok(out)
}

impl NamedScenario {
    fn err(&self, src: &str, key: &str, msg: impl Into<String>) -> Error {
        Error::config(format!("[{}].{key} (line {})", self.name, key_line(src, &self.name, key)), msg)
    }

    fn validate(&self, src: &str) -> Result<()> {
        let s = &self.scenario;
        let any_sweep = s.sweep_param.is_some() || s.sweep_min.is_some() || s.sweep_max.is_some() || s.sweep_count.is_some();
        if any_sweep {
            let p = s.sweep_param.as_deref().ok_or_else(|| self.err(src, "sweep_param", "sweep needs sweep_param"))?;
            if !SWEEPABLE.contains(&p) {
                return Err(self.err(src, "sweep_param", format!("`{p}` is not a sweepable parameter ({})", SWEEPABLE.join(", "))));
            }
            let count = s.sweep_count.ok_or_else(|| self.err(src, "sweep_count", "sweep needs sweep_count"))?;
            if count < 2 {
                return Err(self.err(src, "sweep_count", format!("sweep_count = {count} must be >= 2")));
            }
            if s.sweep_min.is_none() {
                return Err(self.err(src, "sweep_min", "sweep needs sweep_min"));
            }
            if s.sweep_max.is_none() {
                return Err(self.err(src, "sweep_max", "sweep needs sweep_max"));
            }
        }
        if s.alpha0.is_some() && s.alpha0_sq.is_some() {
            return Err(self.err(src, "alpha0_sq", "give either alpha0 or alpha0_sq, not both"));
        }
        if let Some(c) = s.count {
            if c < 2 {
                return Err(self.err(src, "count", format!("count = {c} must be >= 2")));
            }
        }
        Ok(())
    }

    pub fn sweep(&self) -> Option<Sweep> {
        let s = &self.scenario;
        let param = s.sweep_param.clone()?;
        let (lo, hi, n) = (s.sweep_min?, s.sweep_max?, s.sweep_count?);
        let values = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        Some(Sweep { param, values })
    }

    /// The section re-serialized as TOML; parsing it back yields the same scenario.
    pub fn to_toml(&self) -> Result<String> {
        let mut t = toml::Table::new();
        t.insert(
            self.name.clone(),
            toml::Value::try_from(&self.scenario).map_err(|e| Error::Io(e.to_string()))?,
        );
        toml::to_string(&t).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn format(&self) -> OutputFormat {
        self.scenario.format.unwrap_or_default()
    }

    pub fn output_name(&self) -> String {
        self.scenario.output.clone().unwrap_or_else(|| format!("{}.{}", self.name, self.format().extension()))
    }
}

impl Scenario {
    fn need(&self, v: Option<f64>, key: &str) -> Result<f64> {
        v.ok_or_else(|| Error::config(key, format!("required for kind {:?}", self.kind)))
    }

    pub fn barrier(&self) -> Result<BarrierParams> {
        let b = self.need(self.b, "B")?;
        let gamma = self.need(self.gamma, "gamma")?;
        let a = self.need(self.a, "a")?;
        let p = match (self.alpha0, self.alpha0_sq) {
            (Some(al), None) => BarrierParams::new(b, gamma, al, a),
            (None, Some(s)) => BarrierParams::with_alpha0_sq(b, gamma, s, a),
            _ => return Err(Error::config("alpha0", "exactly one of alpha0, alpha0_sq is required")),
        };
        p.map_err(|e| Error::config("barrier", e.to_string()))
    }

    pub fn impurity(&self) -> Result<ImpurityParams> {
        let p = ImpurityParams {
            u: self.need(self.u, "u")?,
            l: self.need(self.l, "l")?,
            a_imp: self.need(self.a_imp, "a_imp")?,
            k: self.need(self.k, "k")?,
        };
        p.validate().map_err(|e| Error::config("impurity", e.to_string()))?;
        Ok(p)
    }

    pub fn require(&self, v: Option<f64>, key: &str) -> Result<f64> {
        self.need(v, key)
    }

    /// Copy with one sweepable parameter replaced.
    pub fn with_param(&self, name: &str, value: f64) -> Scenario {
        let mut s = self.clone();
        let slot = match name {
            "B" => &mut s.b,
            "gamma" => &mut s.gamma,
            "alpha0" => &mut s.alpha0,
            "alpha0_sq" => &mut s.alpha0_sq,
            "a" => &mut s.a,
            "y" => &mut s.y,
            "u" => &mut s.u,
            "l" => &mut s.l,
            "a_imp" => &mut s.a_imp,
            "k" => &mut s.k,
            "x" => &mut s.x,
            "energy" => &mut s.energy,
            "width" => &mut s.width,
            "beta0" => &mut s.beta0,
            _ => return s,
        };
        *slot = Some(value);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = r#"
[fig2]
kind = "branches"
B = 30.0
gamma = 0.2
alpha0_sq = 0.03
a = 2.0
x_max = 1.8

[sweep]
kind = "penetration"
B = 30.0
gamma = 0.2
alpha0_sq = 0.03
a = 2.0
sweep_param = "a"
sweep_min = 1.8
sweep_max = 2.2
sweep_count = 3
"#;

    #[test]
    fn parses_sections_in_order() {
        let s = parse_config(SRC).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].name, "fig2");
        assert_eq!(s[0].line, 2);
        assert_eq!(s[1].sweep().unwrap().values, vec![1.8, 2.0, 2.2]);
    }

    #[test]
    fn reserialized_section_parses_back() {
        for s in parse_config(SRC).unwrap() {
            let again = parse_config(&s.to_toml().unwrap()).unwrap();
            assert_eq!(again[0].scenario, s.scenario);
        }
    }

    #[test]
    fn sweep_count_one_is_rejected_with_line() {
        let src = SRC.replace("sweep_count = 3", "sweep_count = 1");
        match parse_config(&src) {
            Err(Error::Config { field, .. }) => assert!(field.contains("sweep_count") && field.contains("line 19"), "{field}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_and_sweep_params_are_rejected() {
        let src = SRC.replace("x_max = 1.8", "x_max = 1.8\nbogus = 1");
        assert!(matches!(parse_config(&src), Err(Error::Config { .. })));
        let src = SRC.replace("sweep_param = \"a\"", "sweep_param = \"nope\"");
        assert!(matches!(parse_config(&src), Err(Error::Config { .. })));
    }

    #[test]
    fn syntax_error_reports_line() {
        match parse_config("[a]\nkind = \n") {
            Err(Error::Config { field, .. }) => assert!(field.starts_with("line 2"), "{field}"),
            other => panic!("{other:?}"),
        }
    }
}
