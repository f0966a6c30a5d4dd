use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::args::GlobalOpts;
use crate::CliError;
use qplane::qalgebra::json::{rational_from_str, rational_to_string};
use qplane::qalgebra::scalar::rat_to_f64;
use qplane::Rational;

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "ser_q")]
    pub q: Option<Rational>,
    pub tol: f64,
    pub max_iter: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub lam_grid: usize,
    pub depth: usize,
    pub kmax: u32,
    pub seed: Option<u64>,
}

fn ser_q<S: serde::Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&rational_to_string(q)),
        None => s.serialize_none(),
    }
}

/// `3`, `-2/7`, `0.125` → exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    if let Some(r) = rational_from_str(text) {
        return Some(r);
    }
    let (int, frac) = text.trim().split_once('.')?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let neg = int.starts_with('-');
    let whole: BigInt = if int.is_empty() || int == "-" { BigInt::from(0) } else { int.parse().ok()? };
    let scale = BigInt::from(10).pow(frac.len() as u32);
    let part = BigRational::new(frac.parse::<BigInt>().ok()?, scale);
    Some(if neg { BigRational::from_integer(whole) - part } else { BigRational::from_integer(whole) + part })
}

impl RunConfig {
    pub fn from_opts(opts: &GlobalOpts) -> Result<Self, CliError> {
        let q = match &opts.q {
            None => None,
            Some(text) => {
                let q = parse_rational(text).ok_or_else(|| CliError::Usage(format!("--q: '{text}' is not a rational number")))?;
                if q <= Rational::from_integer(0.into()) {
                    return Err(CliError::Usage(format!("--q must be positive, got {text}")));
                }
                Some(q)
            }
        };
        if !(opts.tol > 0.0 && opts.tol.is_finite()) {
            return Err(CliError::Usage("--tol must be positive".into()));
        }
        for (name, v) in [("--max-iter", opts.max_iter), ("--K", opts.k), ("--lam-grid", opts.lam_grid)] {
            if v == 0 {
                return Err(CliError::Usage(format!("{name} must be at least 1")));
            }
        }
        Ok(RunConfig {
            q,
            tol: opts.tol,
            max_iter: opts.max_iter,
            k: opts.k,
            lam_grid: opts.lam_grid,
            depth: opts.depth,
            kmax: opts.kmax,
            seed: opts.seed,
        })
    }

    pub fn require_q(&self) -> Result<&Rational, CliError> {
        self.q.as_ref().ok_or_else(|| CliError::Usage("this command needs --q".into()))
    }

    pub fn q_val(&self) -> Result<f64, CliError> {
        self.require_q().map(rat_to_f64)
    }
}
