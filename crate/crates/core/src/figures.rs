//! Datasets for the two reference plots: the Gaussian pair `s1 = 5, s2 = 0.5`
//! and the BEC(0.1)/BSC(0.2) pair, each over a list of cooperation capacities.

use crate::becbsc::BecBscBC;
use crate::error::Result;
use crate::export::{fmt_real, DiamondRow, Format};
use crate::frontier::Frontier;
use crate::gaussian::GaussianBC;
use crate::numerics::{LogBase, Tolerance};
use crate::regions::{inner_boundary, r1_threshold, threshold_alpha, ParametricFamily};

/// Default cooperation capacities in bits; the last one equals `C1 - C2`.
pub const FIG2_C12_BITS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const FIG3_C12_BITS: [f64; 4] = [0.0, 0.2, 0.4, 0.6];

pub const FIG2_S1: f64 = 5.0;
pub const FIG2_S2: f64 = 0.5;
pub const FIG3_TAU1: f64 = 0.1;
pub const FIG3_P2: f64 = 0.2;

#[derive(Debug, Clone)]
pub struct FigureCurve {
    pub c12: f64,
    /// Sampled inner-bound frontier.
    pub frontier: Frontier,
}

#[derive(Debug, Clone)]
pub struct FigureData {
    pub name: &'static str,
    pub c1: f64,
    pub curves: Vec<FigureCurve>,
    pub diamonds: Vec<DiamondRow>,
}

impl FigureData {
    /// E.g. `fig2_c12_0.25.csv`.
    pub fn curve_file_name(&self, c12: f64, format: Format) -> String {
        format!("{}_c12_{}.{}", self.name, fmt_real(c12), format.extension())
    }

    pub fn diamonds_file_name(&self, format: Format) -> String {
        format!("diamonds.{}", format.extension())
    }
}

pub fn figure_from_families(
    name: &'static str,
    families: Vec<ParametricFamily>,
    grid_size: usize,
    tol: Tolerance,
) -> Result<FigureData> {
    let mut curves = Vec::with_capacity(families.len());
    let mut diamonds = Vec::with_capacity(families.len());
    let mut c1 = 0.0;
    for fam in &families {
        c1 = fam.c1();
        let alpha_th = threshold_alpha(fam, tol)?;
        diamonds.push(DiamondRow {
            c12: fam.c12(),
            alpha_th,
            r1: r1_threshold(fam, tol)?,
            r2: fam.f2(alpha_th),
        });
        curves.push(FigureCurve {
            c12: fam.c12(),
            frontier: inner_boundary(fam, grid_size)?,
        });
    }
    Ok(FigureData {
        name,
        c1,
        curves,
        diamonds,
    })
}

/// Gaussian `s1 = 5, s2 = 0.5`; `c12s` are in `base`.
pub fn fig2(c12s: &[f64], base: LogBase, grid_size: usize, tol: Tolerance) -> Result<FigureData> {
    let bc = GaussianBC::new(FIG2_S1, FIG2_S2, base)?;
    let families = c12s.iter().map(|&c| bc.family(c)).collect::<Result<_>>()?;
    figure_from_families("fig2", families, grid_size, tol)
}

/// BEC(0.1) to User 1, BSC(0.2) to User 2; `c12s` are in `base`.
pub fn fig3(c12s: &[f64], base: LogBase, grid_size: usize, tol: Tolerance) -> Result<FigureData> {
    let bc = BecBscBC::new(FIG3_TAU1, FIG3_P2, base)?;
    let families = c12s.iter().map(|&c| bc.family(c)).collect::<Result<_>>()?;
    figure_from_families("fig3", families, grid_size, tol)
}

/// Default capacities scaled into `base`.
pub fn default_c12s(bits: &[f64], base: LogBase) -> Vec<f64> {
    bits.iter().map(|c| c * base.bit()).collect()
}
