use clap::{Args, Parser, Subcommand};
use frakpoisson_core::fpp::CountMethod;
use frakpoisson_core::harness::Suite;
use num_complex::Complex64;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "frakpoisson", version, about = "Fractional Poisson measures: numerics, sampling and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate E_α(z) or E_α^{(n)}(x) against the multiple-precision oracle.
    Ml(MlArgs),
    /// Draw fractional Poisson counts or configurations as CSV.
    Sample(SampleArgs),
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MlArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Argument of E_α, e.g. `-1`, `2i` or `-1.5+0.5i`; repeatable.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: Vec<Complex64>,
    /// Derivative order; evaluates E_α^{(n)} at each `--x`.
    #[arg(long)]
    pub deriv: Option<u32>,
    /// Real argument `x <= 0` for `--deriv`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Vec<f64>,
    /// Oracle precision in decimal digits.
    #[arg(long, default_value_t = 20)]
    pub digits: u32,
    #[arg(long)]
    pub z_max: Option<f64>,
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Widens the oracle comparison by this factor times rel_tol.
    #[arg(long, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    /// Write the table as JSON here as well.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Window mass for counts; defaults to the configured window's mass.
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short = 'n')]
    pub samples: Option<usize>,
    #[arg(long)]
    pub method: Option<CountMethod>,
    /// Draw point configurations on the configured window instead of counts.
    #[arg(long)]
    pub points: bool,
    /// Also draw with the other count method and print a chi-square report.
    #[arg(long)]
    pub compare: bool,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Divides the chi-square significance level.
    #[arg(long)]
    pub tolerance_scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// cf, psd, correlation, norms, operators, consistency or all.
    pub which: Suite,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short = 'n')]
    pub samples: Option<usize>,
    #[arg(long)]
    pub method: Option<CountMethod>,
    /// Test functions per Gram matrix.
    #[arg(long)]
    pub nfuncs: Option<usize>,
    /// Randomized cases per exact check.
    #[arg(long)]
    pub cases: Option<usize>,
    /// JSON report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub tolerance_scale: Option<f64>,
}

/// `a`, `bi`, `a+bi`, `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read {s:?} as a complex number");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        v => v.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse().map_err(|_| bad())?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("-1.5+0.5i").unwrap(), c(-1.5, 0.5));
        assert_eq!(parse_complex("1e-3-2e+1i").unwrap(), c(1e-3, -20.0));
        assert!(parse_complex("1+x").is_err());
        assert!(parse_complex("").is_err());
    }
}
