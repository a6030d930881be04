//! Run configuration: one flat JSON or TOML object.
//!
//! | key             | type                          | default          |
//! |-----------------|-------------------------------|------------------|
//! | `command`       | `spectrum`, `total-rate`, `regime`, `optical-density`, `plot` | required |
//! | `species`       | preset name or table (below)  | required         |
//! | `atom_number`   | number                        | required         |
//! | `radius`        | length string, e.g. `"3.63e-3 cm"` | required    |
//! | `shape`         | `thomas-fermi` or `uniform`   | `thomas-fermi`   |
//! | `theta_min`     | rad                           | `cutoff_factor / (k R)` |
//! | `theta_max`     | rad                           | pi               |
//! | `theta_count`   | integer >= 1                  | 100              |
//! | `theta_spacing` | `log` or `linear`             | `log`            |
//! | `tolerance`     | number > 0                    | 1e-10            |
//! | `cutoff_factor` | number > 0                    | 1                |
//! | `detuning`      | angular frequency, 1/s        | 0                |
//! | `format`        | `csv` or `json`               | `csv`            |
//! | `output`        | path                          | stdout           |
//!
//! An explicit species table has the keys `name`, `mass_kg`,
//! `scattering_length` (length string), `wavenumber` (`"... 1/cm"` or
//! `"... 1/m"`) and `gamma` (1/s, half the spontaneous decay rate).

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use bec_scatter::{AtomSpecies, ProfileShape};

use crate::error::CliError;
use crate::units::{parse_quantity, Dimension, UnitError};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_CUTOFF_FACTOR: f64 = 1.0;
pub const DEFAULT_THETA_COUNT: usize = 100;

const KEYS: &[&str] = &[
    "command",
    "species",
    "atom_number",
    "radius",
    "shape",
    "theta_min",
    "theta_max",
    "theta_count",
    "theta_spacing",
    "tolerance",
    "cutoff_factor",
    "detuning",
    "format",
    "output",
];

const SPECIES_KEYS: &[&str] = &[
    "name",
    "mass_kg",
    "scattering_length",
    "wavenumber",
    "gamma",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    TotalRate,
    Regime,
    OpticalDensity,
    Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Syntax {
    Json,
    Toml,
}

impl Syntax {
    /// TOML for a `.toml` extension, JSON otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Syntax::Toml,
            _ => Syntax::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGrid {
    /// `None` means the finite-size cutoff angle.
    pub min: Option<f64>,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl ThetaGrid {
    /// Grid nodes, the last one equal to `max`.
    pub fn nodes(&self, min: f64) -> Result<Vec<f64>, CliError> {
        if !(min < self.max) {
            return Err(CliError::invalid(
                "theta_min",
                format!("{min:e} must be below theta_max {:e}", self.max),
            ));
        }
        if self.spacing == Spacing::Log && !(min > 0.0) {
            return Err(CliError::invalid(
                "theta_min",
                "log spacing needs a positive lower bound",
            ));
        }
        if self.count == 1 {
            return Ok(vec![min]);
        }
        let last = (self.count - 1) as f64;
        let mut nodes: Vec<f64> = (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => min + t * (self.max - min),
                    Spacing::Log => min * (self.max / min).powf(t),
                }
            })
            .collect();
        nodes[0] = min;
        nodes[self.count - 1] = self.max;
        Ok(nodes)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub species: AtomSpecies,
    pub atom_number: f64,
    /// m
    pub radius: f64,
    pub shape: ProfileShape,
    pub theta_grid: ThetaGrid,
    pub tolerance: f64,
    pub cutoff_factor: f64,
    /// Angular detuning from resonance, 1/s.
    pub detuning: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// Parses and validates a configuration document.
pub fn load_config(source: &str, syntax: Syntax) -> Result<RunConfig, CliError> {
    load_config_with_overrides(source, syntax, &[])
}

/// Like [`load_config`], with `key=value` overrides applied on top of the
/// document. Values that parse as JSON scalars are taken as such, anything
/// else as a string.
pub fn load_config_with_overrides(
    source: &str,
    syntax: Syntax,
    overrides: &[String],
) -> Result<RunConfig, CliError> {
    let mut doc = parse_document(source, syntax)?;
    for item in overrides {
        let (key, raw) = item.split_once('=').ok_or_else(|| {
            CliError::invalid(
                "--override",
                format!("`{item}` is not of the form key=value"),
            )
        })?;
        let value = serde_json::from_str::<Value>(raw)
            .ok()
            .filter(|v| !v.is_object() && !v.is_array())
            .unwrap_or_else(|| Value::String(raw.to_owned()));
        doc.insert(key.trim().to_owned(), value);
    }
    from_map(doc)
}

pub fn load_config_file(path: &Path, overrides: &[String]) -> Result<RunConfig, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    load_config_with_overrides(&text, Syntax::from_path(path), overrides)
}

fn parse_document(source: &str, syntax: Syntax) -> Result<Map<String, Value>, CliError> {
    let value = match syntax {
        Syntax::Json => serde_json::from_str::<Value>(source).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?,
        Syntax::Toml => {
            let table = toml::from_str::<toml::Table>(source).map_err(|e| {
                let (line, column) = e
                    .span()
                    .map(|span| line_column(source, span.start))
                    .unwrap_or((0, 0));
                CliError::Parse {
                    line,
                    column,
                    message: e.message().to_owned(),
                }
            })?;
            serde_json::to_value(table).map_err(|e| CliError::Parse {
                line: 0,
                column: 0,
                message: e.to_string(),
            })?
        }
    };
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(CliError::Parse {
            line: 1,
            column: 1,
            message: "the document must be a single object".into(),
        }),
    }
}

fn line_column(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

fn number(map: &Map<String, Value>, key: &str) -> Result<Option<f64>, CliError> {
    match map.get(key) {
        None => Ok(None),
        Some(Value::Number(n)) => n
            .as_f64()
            .filter(|x| x.is_finite())
            .map(Some)
            .ok_or_else(|| CliError::invalid(key, "not a finite number")),
        Some(other) => Err(CliError::invalid(
            key,
            format!("expected a number, got {other}"),
        )),
    }
}

fn string<'a>(map: &'a Map<String, Value>, key: &str) -> Result<Option<&'a str>, CliError> {
    match map.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(other) => Err(CliError::invalid(
            key,
            format!("expected a string, got {other}"),
        )),
    }
}

fn quantity(
    map: &Map<String, Value>,
    key: &str,
    field: &str,
    dim: Dimension,
) -> Result<Option<f64>, CliError> {
    if let Some(Value::Number(n)) = map.get(key) {
        return Err(CliError::UnitMismatch {
            field: field.to_owned(),
            value: n.to_string(),
            expected: dim.suffixes(),
        });
    }
    let Some(text) = string(map, key)? else {
        return Ok(None);
    };
    parse_quantity(text, dim).map(Some).map_err(|e| match e {
        UnitError::Suffix { expected } => CliError::UnitMismatch {
            field: field.to_owned(),
            value: text.to_owned(),
            expected,
        },
        UnitError::Number => CliError::invalid(field, format!("`{text}` has no valid number")),
    })
}

fn positive(key: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::invalid(key, format!("{x:e} must be positive")))
    }
}

fn species(value: &Value) -> Result<AtomSpecies, CliError> {
    match value {
        Value::String(name) => Ok(AtomSpecies::preset(name)?),
        Value::Object(map) => {
            if let Some(key) = map.keys().find(|k| !SPECIES_KEYS.contains(&k.as_str())) {
                return Err(CliError::UnknownKey(format!("species.{key}")));
            }
            let name = string(map, "name")?.unwrap_or("custom");
            let mass = number(map, "mass_kg")?.ok_or(CliError::MissingField("species.mass_kg"))?;
            let a = quantity(
                map,
                "scattering_length",
                "species.scattering_length",
                Dimension::Length,
            )?
            .ok_or(CliError::MissingField("species.scattering_length"))?;
            let k = quantity(
                map,
                "wavenumber",
                "species.wavenumber",
                Dimension::Wavenumber,
            )?
            .ok_or(CliError::MissingField("species.wavenumber"))?;
            let gamma = number(map, "gamma")?.ok_or(CliError::MissingField("species.gamma"))?;
            AtomSpecies::new(name, mass, a, k, gamma)
                .map_err(|e| CliError::invalid("species", e.to_string()))
        }
        other => Err(CliError::invalid(
            "species",
            format!("expected a preset name or a table, got {other}"),
        )),
    }
}

fn from_map(map: Map<String, Value>) -> Result<RunConfig, CliError> {
    if let Some(key) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(CliError::UnknownKey(key.clone()));
    }

    let command = match string(&map, "command")?.ok_or(CliError::MissingField("command"))? {
        "spectrum" => Command::Spectrum,
        "total-rate" => Command::TotalRate,
        "regime" => Command::Regime,
        "optical-density" => Command::OpticalDensity,
        "plot" => Command::Plot,
        other => {
            return Err(CliError::invalid(
                "command",
                format!(
                "unknown command `{other}` (spectrum, total-rate, regime, optical-density, plot)"
            ),
            ))
        }
    };

    let species = species(
        map.get("species")
            .ok_or(CliError::MissingField("species"))?,
    )?;

    let atom_number = number(&map, "atom_number")?.ok_or(CliError::MissingField("atom_number"))?;
    if atom_number < 0.0 {
        return Err(CliError::invalid("atom_number", "must be non-negative"));
    }
    let radius = quantity(&map, "radius", "radius", Dimension::Length)?
        .ok_or(CliError::MissingField("radius"))?;
    let radius = positive("radius", radius)?;

    let shape = match string(&map, "shape")? {
        None => ProfileShape::ThomasFermiSphere,
        Some(s) => s
            .parse()
            .map_err(|e: String| CliError::invalid("shape", e))?,
    };

    let spacing = match string(&map, "theta_spacing")? {
        None | Some("log") => Spacing::Log,
        Some("linear") => Spacing::Linear,
        Some(other) => {
            return Err(CliError::invalid(
                "theta_spacing",
                format!("`{other}` is neither `log` nor `linear`"),
            ))
        }
    };
    let count = match number(&map, "theta_count")? {
        None => DEFAULT_THETA_COUNT,
        Some(c) if c >= 1.0 && c.fract() == 0.0 && c <= 1e7 => c as usize,
        Some(c) => {
            return Err(CliError::invalid(
                "theta_count",
                format!("{c} is not an integer >= 1"),
            ))
        }
    };
    let theta_max = number(&map, "theta_max")?.unwrap_or(std::f64::consts::PI);
    let theta_min = number(&map, "theta_min")?;
    if let Some(min) = theta_min {
        if !(min < theta_max) {
            return Err(CliError::invalid(
                "theta_min",
                format!("{min:e} must be below theta_max {theta_max:e}"),
            ));
        }
    }

    let tolerance = positive(
        "tolerance",
        number(&map, "tolerance")?.unwrap_or(DEFAULT_TOLERANCE),
    )?;
    let cutoff_factor = positive(
        "cutoff_factor",
        number(&map, "cutoff_factor")?.unwrap_or(DEFAULT_CUTOFF_FACTOR),
    )?;
    let detuning = number(&map, "detuning")?.unwrap_or(0.0);

    let format = match string(&map, "format")? {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => {
            return Err(CliError::invalid(
                "format",
                format!("`{other}` is neither `csv` nor `json`"),
            ))
        }
    };
    let output = string(&map, "output")?.map(PathBuf::from);

    Ok(RunConfig {
        command,
        species,
        atom_number,
        radius,
        shape,
        theta_grid: ThetaGrid {
            min: theta_min,
            max: theta_max,
            count,
            spacing,
        },
        tolerance,
        cutoff_factor,
        detuning,
        format,
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SODIUM: &str = r#"{
        "species": "sodium-Na23",
        "atom_number": 1.6e6,
        "radius": "3.63e-3 cm",
        "command": "regime"
    }"#;

    #[test]
    fn sodium_document_with_defaults() {
        let c = load_config(SODIUM, Syntax::Json).unwrap();
        assert_eq!(c.command, Command::Regime);
        assert_eq!(c.species.scattering_length, 2.75e-9);
        assert_eq!(c.radius, 3.63e-5);
        assert_eq!(c.tolerance, 1e-10);
        assert_eq!(c.cutoff_factor, 1.0);
        assert_eq!(c.theta_grid.spacing, Spacing::Log);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.shape, ProfileShape::ThomasFermiSphere);
        assert_eq!(c.output, None);
    }

    #[test]
    fn radius_units_give_identical_configs() {
        let metres = SODIUM.replace("3.63e-3 cm", "3.63e-5 m");
        assert_eq!(
            load_config(SODIUM, Syntax::Json).unwrap(),
            load_config(&metres, Syntax::Json).unwrap()
        );
    }

    #[test]
    fn missing_radius_is_named() {
        let doc = r#"{"species": "sodium-Na23", "atom_number": 1.0, "command": "regime"}"#;
        let err = load_config(doc, Syntax::Json).unwrap_err();
        assert!(matches!(err, CliError::MissingField("radius")));
        assert!(err.to_string().contains("radius"));
    }

    #[test]
    fn unknown_key_rejected() {
        let doc = SODIUM.replace("\"command\"", "\"colour\": 1, \"command\"");
        assert!(matches!(
            load_config(&doc, Syntax::Json),
            Err(CliError::UnknownKey(k)) if k == "colour"
        ));
    }

    #[test]
    fn parse_error_has_position() {
        let err = load_config("{\n  \"species\": ,\n}", Syntax::Json).unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (2, 14)),
            other => panic!("{other:?}"),
        }
        let err = load_config("species = \"sodium-Na23\"\nradius = \n", Syntax::Toml).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn unit_mismatch() {
        let doc = SODIUM.replace("3.63e-3 cm", "3.63e-3 1/cm");
        assert!(matches!(
            load_config(&doc, Syntax::Json),
            Err(CliError::UnitMismatch { .. })
        ));
        let bare = SODIUM.replace("\"3.63e-3 cm\"", "3.63e-5");
        assert!(matches!(
            load_config(&bare, Syntax::Json),
            Err(CliError::UnitMismatch { .. })
        ));
    }

    #[test]
    fn unknown_preset_is_a_config_error() {
        let doc = SODIUM.replace("sodium-Na23", "cesium");
        let err = load_config(&doc, Syntax::Json).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn explicit_species_table() {
        let doc = r#"
            command = "regime"
            atom_number = 1.6e6
            radius = "36.3 um"
            [species]
            name = "sodium-like"
            mass_kg = 3.8175e-26
            scattering_length = "2.75e-7 cm"
            wavenumber = "1.07e5 1/cm"
            gamma = 3.0771e7
        "#;
        let c = load_config(doc, Syntax::Toml).unwrap();
        assert_eq!(c.species.name, "sodium-like");
        assert_eq!(c.species.scattering_length, 2.75e-9);
        assert_eq!(c.species.wavenumber, 1.07e7);
        assert_eq!(c.radius, 36.3e-6);
        let bad = doc.replace("gamma = 3.0771e7", "gamma = 3.0771e7\ncharge = 1");
        assert!(matches!(
            load_config(&bad, Syntax::Toml),
            Err(CliError::UnknownKey(k)) if k == "species.charge"
        ));
    }

    #[test]
    fn overrides_take_precedence() {
        let c = load_config_with_overrides(
            SODIUM,
            Syntax::Json,
            &[
                "command=spectrum".into(),
                "theta_count=5".into(),
                "format=json".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.command, Command::Spectrum);
        assert_eq!(c.theta_grid.count, 5);
        assert_eq!(c.format, Format::Json);
        assert!(load_config_with_overrides(SODIUM, Syntax::Json, &["oops".into()]).is_err());
        assert!(matches!(
            load_config_with_overrides(SODIUM, Syntax::Json, &["bogus=1".into()]),
            Err(CliError::UnknownKey(_))
        ));
    }

    #[test]
    fn grid_validation() {
        let doc = SODIUM.replace(
            "\"command\"",
            "\"theta_min\": 2.0, \"theta_max\": 1.0, \"command\"",
        );
        assert!(load_config(&doc, Syntax::Json).is_err());
        let doc = SODIUM.replace("\"command\"", "\"theta_count\": 0, \"command\"");
        assert!(load_config(&doc, Syntax::Json).is_err());
        let doc = SODIUM.replace("\"command\"", "\"tolerance\": 0, \"command\"");
        assert!(load_config(&doc, Syntax::Json).is_err());
    }

    #[test]
    fn grid_nodes() {
        let g = ThetaGrid {
            min: None,
            max: 1.0,
            count: 3,
            spacing: Spacing::Log,
        };
        let n = g.nodes(0.01).unwrap();
        assert_eq!(n.len(), 3);
        assert_eq!((n[0], n[2]), (0.01, 1.0));
        assert!((n[1] - 0.1).abs() < 1e-15);
        let lin = ThetaGrid {
            spacing: Spacing::Linear,
            ..g.clone()
        };
        assert_eq!(lin.nodes(0.0).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(g.nodes(0.0).is_err());
        assert_eq!(ThetaGrid { count: 1, ..g }.nodes(0.3).unwrap(), vec![0.3]);
    }
}
