//! Scenario flags and the flat key=value config file. Flags override file
//! values; the file covers the same keys the flags do.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::Args;

use cipc_core::SystemConfig;

use crate::CliError;

#[derive(Args)]
pub struct CfgArgs {
    /// Transmit antenna count.
    #[arg(long)]
    pub nt: Option<u32>,

    /// Blocklength in channel uses.
    #[arg(long = "T", alias = "blocklength", value_name = "CHANNEL_USES")]
    pub blocklength: Option<u32>,

    /// Transmission rate in bits per channel use.
    #[arg(long = "R", alias = "rate", value_name = "BITS_PER_USE")]
    pub rate: Option<f64>,

    /// Maximum transmit power in dB.
    #[arg(long)]
    pub pmax_db: Option<f64>,

    /// Maximum transmit power, linear (escape hatch from the dB default).
    #[arg(long)]
    pub pmax_linear: Option<f64>,

    /// Noise variance at the receiver.
    #[arg(long)]
    pub sigma2: Option<f64>,

    /// Flat key=value config file providing defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_config_file(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn file_value<T: std::str::FromStr>(
    map: &HashMap<String, String>,
    keys: &[&str],
) -> Result<Option<T>, CliError> {
    for key in keys {
        if let Some(raw) = map.get(*key) {
            return raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("invalid value for {key}: {raw:?}")));
        }
    }
    Ok(None)
}

impl CfgArgs {
    /// Merges flags over the config file and validates the result.
    pub fn resolve(&self) -> Result<SystemConfig, CliError> {
        let file = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };

        let nt = self
            .nt
            .or(file_value(&file, &["nt"])?)
            .ok_or_else(|| CliError::Usage("missing --nt".into()))?;
        let blocklength = self
            .blocklength
            .or(file_value(&file, &["T", "blocklength"])?)
            .ok_or_else(|| CliError::Usage("missing --T".into()))?;
        let rate = self
            .rate
            .or(file_value(&file, &["R", "rate"])?)
            .ok_or_else(|| CliError::Usage("missing --R".into()))?;
        let sigma2 = self.sigma2.or(file_value(&file, &["sigma2"])?).unwrap_or(1.0);

        let pmax_db = self.pmax_db.or(file_value(&file, &["pmax_db"])?);
        let pmax_linear = self.pmax_linear.or(file_value(&file, &["pmax_linear"])?);
        let p_max = match (self.pmax_db, self.pmax_linear) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "--pmax-db and --pmax-linear are mutually exclusive".into(),
                ))
            }
            _ => match (pmax_db, pmax_linear) {
                (Some(db), None) => 10f64.powf(db / 10.0),
                (None, Some(lin)) => lin,
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(
                        "config file sets both pmax_db and pmax_linear".into(),
                    ))
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "missing --pmax-db (or --pmax-linear)".into(),
                    ))
                }
            },
        };

        Ok(SystemConfig::new(nt, blocklength, rate, p_max, sigma2)?)
    }
}
