use std::path::PathBuf;

use clap::ValueEnum;

use crate::error::CliError;

pub const ENV_PREC_BITS: &str = "HEEGNER1_PREC_BITS";
pub const ENV_TOL_LOG2: &str = "HEEGNER1_TOL_LOG2";
pub const ENV_CACHE_DIR: &str = "HEEGNER1_CACHE_DIR";

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, PartialEq, Debug)]
pub struct RunConfig {
    pub prec_bits: u32,
    pub tol_log2: i64,
    /// No cache when unset.
    pub cache_dir: Option<PathBuf>,
    pub output_format: OutputFormat,
}

/// Values given on the command line; unset fields fall back to the
/// environment and then to the defaults.
#[derive(Clone, Default, Debug)]
pub struct ConfigFlags {
    pub prec_bits: Option<u32>,
    pub tol_log2: Option<i64>,
    pub cache_dir: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
}

fn from_env<T: std::str::FromStr>(
    env: &dyn Fn(&str) -> Option<String>,
    var: &str,
    field: &'static str,
) -> Result<Option<T>, CliError> {
    match env(var) {
        None => Ok(None),
        Some(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::InvalidConfig { field, reason: format!("{var} = {s:?} does not parse") }),
    }
}

/// Flags override the environment, which overrides the defaults.
pub fn load_config(flags: &ConfigFlags, env: &dyn Fn(&str) -> Option<String>) -> Result<RunConfig, CliError> {
    let prec_bits = match flags.prec_bits {
        Some(v) => v,
        None => from_env(env, ENV_PREC_BITS, "precBits")?.unwrap_or(300),
    };
    let tol_log2 = match flags.tol_log2 {
        Some(v) => v,
        None => from_env(env, ENV_TOL_LOG2, "tolLog2")?.unwrap_or(-100),
    };
    let cache_dir = flags.cache_dir.clone().or_else(|| env(ENV_CACHE_DIR).filter(|s| !s.is_empty()).map(PathBuf::from));
    if prec_bits < 64 {
        return Err(CliError::InvalidConfig { field: "precBits", reason: format!("{prec_bits} < 64") });
    }
    if tol_log2 >= -16 {
        return Err(CliError::InvalidConfig { field: "tolLog2", reason: format!("{tol_log2} >= -16") });
    }
    Ok(RunConfig { prec_bits, tol_log2, cache_dir, output_format: flags.output_format.unwrap_or(OutputFormat::Json) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_env(_: &str) -> Option<String> {
        None
    }

    #[test]
    fn defaults() {
        let c = load_config(&ConfigFlags::default(), &no_env).unwrap();
        assert_eq!((c.prec_bits, c.tol_log2, c.cache_dir), (300, -100, None));
        assert_eq!(c.output_format, OutputFormat::Json);
    }

    #[test]
    fn precedence() {
        let env = |k: &str| (k == ENV_PREC_BITS).then(|| "600".to_string());
        assert_eq!(load_config(&ConfigFlags::default(), &env).unwrap().prec_bits, 600);
        let flags = ConfigFlags { prec_bits: Some(1200), ..Default::default() };
        assert_eq!(load_config(&flags, &env).unwrap().prec_bits, 1200);
    }

    #[test]
    fn floors() {
        let flags = ConfigFlags { prec_bits: Some(32), ..Default::default() };
        assert!(matches!(load_config(&flags, &no_env), Err(CliError::InvalidConfig { field: "precBits", .. })));
        let flags = ConfigFlags { tol_log2: Some(-16), ..Default::default() };
        assert!(matches!(load_config(&flags, &no_env), Err(CliError::InvalidConfig { field: "tolLog2", .. })));
        let env = |k: &str| (k == ENV_TOL_LOG2).then(|| "lots".to_string());
        assert!(matches!(load_config(&ConfigFlags::default(), &env), Err(CliError::InvalidConfig { field: "tolLog2", .. })));
    }
}
