//! Sweep records for the radial evaluator, in CSV and JSON.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::radial::{phi_eval, Branch};
use crate::error::Result;

pub const PHI_CSV_HEADER: &str = "n,re_s,im_s,r,log_mag,phase,branch,err_est";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiRecord {
    pub n: usize,
    pub re_s: f64,
    pub im_s: f64,
    pub r: f64,
    pub log_mag: f64,
    pub phase: f64,
    pub branch: Branch,
    pub err_est: f64,
}

impl PhiRecord {
    pub fn evaluate(n: usize, s: Complex64, r: f64) -> Result<Self> {
        let e = phi_eval(n, s, r)?;
        Ok(PhiRecord {
            n,
            re_s: s.re,
            im_s: s.im,
            r,
            log_mag: e.value.log_magnitude,
            phase: e.value.phase,
            branch: e.branch,
            err_est: e.err_est,
        })
    }

    /// One CSV line (no newline); reals carry 17 significant digits.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
            self.n,
            self.re_s,
            self.im_s,
            self.r,
            self.log_mag,
            self.phase,
            self.branch.as_str(),
            self.err_est
        )
    }
}

/// φ over the product grid ns × ss × rs, ordered n-major, then s, then r.
pub fn phi_sweep(ns: &[usize], ss: &[Complex64], rs: &[f64]) -> Result<Vec<PhiRecord>> {
    let mut out = Vec::with_capacity(ns.len() * ss.len() * rs.len());
    for &n in ns {
        for &s in ss {
            for &r in rs {
                out.push(PhiRecord::evaluate(n, s, r)?);
            }
        }
    }
    Ok(out)
}
