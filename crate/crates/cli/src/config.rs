//! Flat key-value scenario configuration shared by flags and config files.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use qrframe::linalg::CVector;
use qrframe::{DensityOperator, FrameFamily, Group, GroupElement, Ket, Representation, Space, SpaceSpec, C64};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Overlap,
    ChangeFrame,
    LimitSweep,
    Bhd,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Overlap => "overlap",
            Command::ChangeFrame => "change-frame",
            Command::LimitSweep => "limit-sweep",
            Command::Bhd => "bhd",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Overlap => &["group", "family", "s-a", "points", "out", "format"],
            Command::ChangeFrame => &[
                "group",
                "family",
                "s-a",
                "s-b",
                "system",
                "orientation-a",
                "outcome",
                "outcome-grid",
                "bandlimit",
                "out",
                "format",
            ],
            Command::LimitSweep => &["group", "family", "sizes", "system", "orientation-a", "out", "format"],
            Command::Bhd => &["regime", "s-a", "s-b", "phase-a", "phase-b", "max-j", "out", "format"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    U1,
    Su2,
    Su2Coset,
}

impl GroupKind {
    pub fn group(self) -> Group {
        match self {
            GroupKind::U1 => Group::U1,
            _ => Group::SU2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Pe,
    Cs,
    Fiducial,
    Coset,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Pe => "pe",
            FamilyKind::Cs => "cs",
            FamilyKind::Fiducial => "fiducial",
            FamilyKind::Coset => "coset",
        }
    }

    /// Frame of this family with size parameter `size`, checked against the family's domain.
    pub fn frame(self, size: f64, key: &str) -> Result<FrameFamily> {
        let integer = |what: &str| -> Result<u32> {
            if size >= 0.0 && size.fract() == 0.0 && size <= 4096.0 {
                Ok(size as u32)
            } else {
                Err(CliError::config(key, format!("{what} must be a non-negative integer, got {size}")))
            }
        };
        Ok(match self {
            FamilyKind::Pe => FrameFamily::phase_eigenstate(integer("phase-eigenstate cutoff")? as usize),
            FamilyKind::Cs => FrameFamily::u1_coherent(size, None).map_err(|e| CliError::config(key, e.to_string()))?,
            FamilyKind::Fiducial => FrameFamily::su2_fiducial(integer("fiducial maximum spin")?),
            FamilyKind::Coset => {
                let twice = 2.0 * size;
                if !(twice >= 0.0 && twice.fract() == 0.0) {
                    return Err(CliError::config(key, format!("spin j must be a multiple of 1/2, got {size}")));
                }
                FrameFamily::su2_coherent(twice as u32)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BhdRegime {
    TwoCs,
    EqualCs,
    LargeCs,
    CsPe,
    TwoPe,
}

impl BhdRegime {
    pub fn name(self) -> &'static str {
        match self {
            BhdRegime::TwoCs => "two-cs",
            BhdRegime::EqualCs => "equal-cs",
            BhdRegime::LargeCs => "large-cs",
            BhdRegime::CsPe => "cs-pe",
            BhdRegime::TwoPe => "two-pe",
        }
    }
}

/// Untyped configuration: flag-style keys mapped to their textual values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig(pub BTreeMap<String, String>);

impl RawConfig {
    /// Parse a flat TOML document; `s_a` and `s-a` name the same key.
    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::config("config", e.to_string()))?;
        let mut out = BTreeMap::new();
        for (key, value) in table {
            let key = key.replace('_', "-");
            let text = match value {
                toml::Value::String(s) => s,
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                toml::Value::Boolean(b) => b.to_string(),
                toml::Value::Array(items) => items
                    .iter()
                    .map(|v| match v {
                        toml::Value::String(s) => Ok(s.clone()),
                        toml::Value::Integer(i) => Ok(i.to_string()),
                        toml::Value::Float(f) => Ok(f.to_string()),
                        _ => Err(CliError::config(&key, "arrays may hold only numbers or strings")),
                    })
                    .collect::<Result<Vec<_>>>()?
                    .join(","),
                _ => return Err(CliError::config(&key, "nested tables are not supported; use flat keys")),
            };
            out.insert(key, text);
        }
        Ok(RawConfig(out))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    /// Entries of `over` replace entries of `self`.
    pub fn overridden_by(mut self, over: RawConfig) -> Self {
        self.0.extend(over.0);
        self
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(|s| s.trim())
    }
}

/// Validated scenario configuration.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub command: Command,
    pub group: GroupKind,
    pub family: FamilyKind,
    pub s_a: f64,
    pub s_b: f64,
    pub system: String,
    pub orientation_a: GroupElement,
    pub outcome: Option<GroupElement>,
    pub outcome_grid: Option<usize>,
    pub bandlimit: Option<usize>,
    pub points: usize,
    pub sizes: Vec<f64>,
    pub regime: BhdRegime,
    pub phase_a: f64,
    pub phase_b: f64,
    pub max_j: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Effective key-value pairs, echoed into output metadata.
    pub echo: Vec<(String, String)>,
}

fn parse_f64(key: &str, text: &str) -> Result<f64> {
    let v = parse_angle(text).ok_or_else(|| CliError::config(key, format!("expected a number, got `{text}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(key, format!("expected a finite number, got `{text}`")))
    }
}

fn parse_usize(key: &str, text: &str) -> Result<usize> {
    text.parse().map_err(|_| CliError::config(key, format!("expected a non-negative integer, got `{text}`")))
}

/// A real number, optionally written as a multiple of `pi` (`pi/2`, `-0.5pi`, `3*pi/4`).
pub fn parse_angle(text: &str) -> Option<f64> {
    let t = text.trim().to_ascii_lowercase().replace(' ', "");
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let idx = t.find("pi")?;
    let (head, tail) = (&t[..idx], &t[idx + 2..]);
    let coeff = match head.trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().ok()?,
    };
    let div = match tail {
        "" => 1.0,
        d => d.strip_prefix('/')?.parse::<f64>().ok()?,
    };
    Some(coeff * PI / div)
}

/// `θ` for U(1); `ω,θ,φ` (polar) or `euler:α,β,γ` for SU(2).
pub fn parse_element(key: &str, text: &str, group: Group) -> Result<GroupElement> {
    let bad = |msg: &str| CliError::config(key, format!("{msg}, got `{text}`"));
    match group {
        Group::U1 => Ok(GroupElement::u1(parse_f64(key, text)?)),
        Group::SU2 => {
            let (euler, body) = match text.strip_prefix("euler:") {
                Some(rest) => (true, rest),
                None => (false, text.strip_prefix("polar:").unwrap_or(text)),
            };
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 3 {
                return Err(bad("expected three comma-separated angles"));
            }
            let v = parts.iter().map(|p| parse_f64(key, p)).collect::<Result<Vec<_>>>()?;
            Ok(if euler {
                GroupElement::su2_euler(v[0], v[1], v[2])
            } else {
                GroupElement::su2_polar(v[0], v[1], v[2])
            })
        }
    }
}

/// Build the system state from its descriptor.
///
/// Grammar: `plus`, `fock:k`, `mixed:d`, `spin:j:θ:φ` (spin coherent state),
/// `amps:re,im;re,im;…` (explicit amplitudes, renormalized with a warning).
pub fn parse_system(text: &str, group: Group, warnings: &mut Vec<String>) -> Result<DensityOperator> {
    let key = "system";
    let bad = |msg: String| CliError::config(key, msg);
    let parts: Vec<&str> = text.trim().split(':').collect();
    let space_of_dim = |d: usize| -> Result<Space> {
        if d == 0 {
            return Err(bad("dimension must be at least 1".into()));
        }
        Ok(match group {
            Group::U1 => SpaceSpec::fock(d - 1).into(),
            Group::SU2 => SpaceSpec::spin(d as u32 - 1).into(),
        })
    };
    match parts[0] {
        "plus" | "plus-state" if parts.len() == 1 => {
            let space = space_of_dim(2)?;
            let v = CVector::from_element(2, C64::from(0.5f64.sqrt()));
            Ok(Ket::new(space, v)?.density())
        }
        "fock" if parts.len() == 2 && group == Group::U1 => {
            let k = parse_usize(key, parts[1])?;
            let space: Space = SpaceSpec::fock(k.max(1)).into();
            Ok(Ket::basis(space, k)?.density())
        }
        "mixed" if parts.len() == 2 => {
            let d = parse_usize(key, parts[1])?;
            Ok(DensityOperator::maximally_mixed(space_of_dim(d)?))
        }
        "spin" if parts.len() == 4 && group == Group::SU2 => {
            let j = parse_f64(key, parts[1])?;
            if !(j >= 0.0 && (2.0 * j).fract() == 0.0) {
                return Err(bad(format!("spin j must be a multiple of 1/2, got {j}")));
            }
            let theta = parse_f64(key, parts[2])?;
            let phi = parse_f64(key, parts[3])?;
            let space: Space = SpaceSpec::spin((2.0 * j) as u32).into();
            let rep = Representation::new(&space);
            let top = Ket::basis(space, 0)?;
            Ok(top.rotated(&rep, &GroupElement::su2_euler(phi, theta, 0.0))?.density())
        }
        "amps" if parts.len() == 2 => {
            let amps = parts[1]
                .split(';')
                .map(|pair| {
                    let xs: Vec<&str> = pair.split(',').collect();
                    match xs.as_slice() {
                        [re] => Ok(C64::new(parse_f64(key, re)?, 0.0)),
                        [re, im] => Ok(C64::new(parse_f64(key, re)?, parse_f64(key, im)?)),
                        _ => Err(bad(format!("amplitude `{pair}` must be `re` or `re,im`"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let v = CVector::from_vec(amps);
            let norm = v.norm();
            if norm == 0.0 {
                return Err(bad("amplitudes are all zero".into()));
            }
            if (norm - 1.0).abs() > 1e-12 {
                warnings.push(format!("system amplitudes had norm {norm}; renormalized"));
            }
            Ok(Ket::normalized(space_of_dim(v.len())?, v)?.density())
        }
        _ => Err(bad(format!(
            "unrecognized system `{text}` (expected plus, fock:k, mixed:d, spin:j:theta:phi or amps:re,im;...)"
        ))),
    }
}

impl ScenarioConfig {
    pub fn from_raw(command: Command, raw: &RawConfig) -> Result<Self> {
        for key in raw.0.keys() {
            if !command.keys().contains(&key.as_str()) {
                return Err(CliError::config(key, format!("not a key of `{}`", command.name())));
            }
        }
        let group = match raw.get("group").unwrap_or("u1") {
            "u1" => GroupKind::U1,
            "su2" => GroupKind::Su2,
            "su2-coset" => GroupKind::Su2Coset,
            other => return Err(CliError::config("group", format!("expected u1, su2 or su2-coset, got `{other}`"))),
        };
        let default_family = match group {
            GroupKind::U1 => FamilyKind::Pe,
            GroupKind::Su2 => FamilyKind::Fiducial,
            GroupKind::Su2Coset => FamilyKind::Coset,
        };
        let family = match raw.get("family") {
            None => default_family,
            Some("pe") => FamilyKind::Pe,
            Some("cs") => FamilyKind::Cs,
            Some("fiducial") => FamilyKind::Fiducial,
            Some("coset") => FamilyKind::Coset,
            Some(other) => return Err(CliError::config("family", format!("unknown family `{other}`"))),
        };
        let allowed = match group {
            GroupKind::U1 => matches!(family, FamilyKind::Pe | FamilyKind::Cs),
            GroupKind::Su2 => family == FamilyKind::Fiducial,
            GroupKind::Su2Coset => family == FamilyKind::Coset,
        };
        if !allowed && command != Command::Bhd {
            return Err(CliError::config("family", format!("family `{}` does not belong to this group", family.name())));
        }
        let g = group.group();
        let num = |key: &str, default: f64| raw.get(key).map(|t| parse_f64(key, t)).unwrap_or(Ok(default));
        let s_a = num("s-a", 1.0)?;
        let s_b = num("s-b", 1.0)?;
        let default_system = match group {
            GroupKind::U1 => "plus",
            GroupKind::Su2 => "spin:0.5:1.0:0.5",
            GroupKind::Su2Coset => "spin:1:1.0:0.5",
        };
        let orientation_a = match raw.get("orientation-a") {
            Some(t) => parse_element("orientation-a", t, g)?,
            None => GroupElement::identity(g),
        };
        let outcome = raw.get("outcome").map(|t| parse_element("outcome", t, g)).transpose()?;
        let outcome_grid = raw.get("outcome-grid").map(|t| parse_usize("outcome-grid", t)).transpose()?;
        if outcome_grid == Some(0) {
            return Err(CliError::config("outcome-grid", "must be positive"));
        }
        let bandlimit = raw.get("bandlimit").map(|t| parse_usize("bandlimit", t)).transpose()?;
        let points = raw.get("points").map(|t| parse_usize("points", t)).transpose()?.unwrap_or(257);
        if points < 3 {
            return Err(CliError::config("points", "need at least 3 points"));
        }
        let default_sizes: &[f64] = match family {
            FamilyKind::Pe => &[8.0, 16.0, 32.0, 64.0, 128.0],
            FamilyKind::Cs => &[1.0, 2.0, 3.0, 4.0],
            FamilyKind::Fiducial => &[1.0, 2.0, 3.0],
            FamilyKind::Coset => &[1.0, 2.0, 4.0],
        };
        let sizes = match raw.get("sizes") {
            Some(t) => t.split(',').map(|p| parse_f64("sizes", p)).collect::<Result<Vec<_>>>()?,
            None => default_sizes.to_vec(),
        };
        let regime = match raw.get("regime").unwrap_or("two-cs") {
            "two-cs" => BhdRegime::TwoCs,
            "equal-cs" => BhdRegime::EqualCs,
            "large-cs" => BhdRegime::LargeCs,
            "cs-pe" => BhdRegime::CsPe,
            "two-pe" => BhdRegime::TwoPe,
            other => return Err(CliError::config("regime", format!("unknown regime `{other}`"))),
        };
        let max_j = num("max-j", 30.0)?;
        if !(max_j >= 0.0 && (2.0 * max_j).fract() == 0.0) {
            return Err(CliError::config("max-j", format!("must be a non-negative multiple of 1/2, got {max_j}")));
        }
        let format = match raw.get("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(CliError::config("format", format!("expected csv or json, got `{other}`"))),
        };
        let cfg = ScenarioConfig {
            command,
            group,
            family,
            s_a,
            s_b,
            system: raw.get("system").unwrap_or(default_system).to_string(),
            orientation_a,
            outcome,
            outcome_grid,
            bandlimit,
            points,
            sizes,
            regime,
            phase_a: num("phase-a", 0.0)?,
            phase_b: num("phase-b", PI / 2.0)?,
            max_j,
            out: raw.get("out").map(PathBuf::from),
            format,
            echo: Vec::new(),
        };
        Ok(cfg.with_echo(raw))
    }

    fn with_echo(mut self, raw: &RawConfig) -> Self {
        let mut echo: Vec<(String, String)> = vec![("command".into(), self.command.name().into())];
        let relevant = self.command.keys().iter().filter(|k| !matches!(**k, "out" | "format"));
        for key in relevant {
            let value = match raw.get(key) {
                Some(v) => v.to_string(),
                None => self.default_text(key),
            };
            echo.push((key.to_string(), value));
        }
        self.echo = echo;
        self
    }

    fn default_text(&self, key: &str) -> String {
        match key {
            "group" => match self.group {
                GroupKind::U1 => "u1",
                GroupKind::Su2 => "su2",
                GroupKind::Su2Coset => "su2-coset",
            }
            .into(),
            "family" => self.family.name().into(),
            "s-a" => crate::output::format_float(self.s_a),
            "s-b" => crate::output::format_float(self.s_b),
            "system" => self.system.clone(),
            "orientation-a" => "identity".into(),
            "outcome" => "grid".into(),
            "outcome-grid" | "bandlimit" => "auto".into(),
            "points" => self.points.to_string(),
            "sizes" => self.sizes.iter().map(|s| crate::output::format_float(*s)).collect::<Vec<_>>().join(","),
            "regime" => self.regime.name().into(),
            "phase-a" => crate::output::format_float(self.phase_a),
            "phase-b" => crate::output::format_float(self.phase_b),
            "max-j" => crate::output::format_float(self.max_j),
            _ => String::new(),
        }
    }
}
