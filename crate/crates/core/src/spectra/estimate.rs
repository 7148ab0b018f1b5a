use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::oracle::ColumnOracle;
use crate::scalar::C64;
use crate::spectra::eigen::schur_eigenvalues;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumSource {
    FiniteSection,
    IqrTruncation,
    Sigma1Tower,
    Delta1Tower,
    Analytic,
}

/// A finite set of points, each optionally with a certified error radius.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEstimate {
    pub points: Vec<C64>,
    pub radii: Option<Vec<f64>>,
    pub source: SpectrumSource,
}

impl SpectrumEstimate {
    pub fn new(points: Vec<C64>, source: SpectrumSource) -> Self {
        SpectrumEstimate { points, radii: None, source }
    }

    pub fn with_radii(points: Vec<C64>, radii: Vec<f64>, source: SpectrumSource) -> Result<Self> {
        if radii.len() != points.len() {
            return Err(Error::InvalidInput(format!("{} radii for {} points", radii.len(), points.len())));
        }
        if radii.iter().any(|r| !(*r >= 0.0)) {
            return Err(Error::InvalidInput("radii must be non-negative".into()));
        }
        Ok(SpectrumEstimate { points, radii: Some(radii), source })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        match &self.radii {
            Some(r) => {
                writeln!(f, "re,im,radius")?;
                for (z, r) in self.points.iter().zip(r) {
                    writeln!(f, "{},{},{}", z.re, z.im, r)?;
                }
            }
            None => {
                writeln!(f, "re,im")?;
                for z in &self.points {
                    writeln!(f, "{},{}", z.re, z.im)?;
                }
            }
        }
        f.flush()?;
        Ok(())
    }
}

/// Eigenvalues of the square truncation `P_m T P_m`.
pub fn finite_section_spectrum(t: &ColumnOracle, m: usize) -> Result<SpectrumEstimate> {
    if m == 0 {
        return Err(Error::InvalidInput("finite section needs m >= 1".into()));
    }
    Ok(SpectrumEstimate::new(schur_eigenvalues(&t.truncation(m))?, SpectrumSource::FiniteSection))
}
