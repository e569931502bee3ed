//! File interfaces: JSON wave functions and fields, CSV exports for fields,
//! line cuts and Stokes maps, a minimal legacy-VTK writer, and the
//! observables report structures.
//!
//! All numeric output is written with 17 significant digits in a fixed
//! order, so identical inputs produce bit-identical files.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Boundary, PositionGrid, VectorField3};
use crate::helicity::StokesMap;
use crate::math::C64;
use crate::momentum::{
    Layout, ManifoldKind, MomentumWaveFunction, ReducedParams, WaveVectorSample,
};
use crate::synthesis::HelicityField;

/// Unit system header carried by every output file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct UnitsBlock {
    pub system: String,
    pub hbar: f64,
    pub c: f64,
    pub eps0: f64,
    pub mu0: f64,
    /// Meters per natural length unit when converting to SI.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_scale_m: Option<f64>,
}

impl UnitsBlock {
    pub fn natural() -> Self {
        Self { system: "natural".into(), hbar: 1.0, c: 1.0, eps0: 1.0, mu0: 1.0, length_scale_m: None }
    }

    pub fn si(length_scale_m: f64) -> Self {
        Self {
            system: "si".into(),
            hbar: 1.054_571_817e-34,
            c: 2.997_924_58e8,
            eps0: 8.854_187_812_8e-12,
            mu0: 1.256_637_062_12e-6,
            length_scale_m: Some(length_scale_m),
        }
    }
}

/// serde_json formatter that renders every float with 17 significant digits.
struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{}", fmt_f64(value))
    }
}

/// 17-significant-digit rendering used for all file output.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serialize any value to JSON with fixed float formatting.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidField(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::InvalidField(e.to_string()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SampleFile {
    k: f64,
    theta: f64,
    phi: f64,
    weight: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct ReducedParamsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    qz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    paraxial_omega: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum LayoutFile {
    Ring { n_phi: usize },
    Disc { n_radial: usize, n_phi: usize },
    Grid3d { n_k: usize, n_theta: usize, n_phi: usize },
}

/// Wire format of a momentum wave function.
#[derive(Debug, Serialize, Deserialize)]
pub struct WaveFunctionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    units: Option<UnitsBlock>,
    manifold: String,
    reduced_params: ReducedParamsFile,
    samples: Vec<SampleFile>,
    amp_plus: Vec<[f64; 2]>,
    amp_minus: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layout: Option<LayoutFile>,
}

pub fn wavefunction_to_json(f: &MomentumWaveFunction) -> Result<String> {
    let file = WaveFunctionFile {
        units: Some(UnitsBlock::natural()),
        manifold: f.manifold().as_str().to_string(),
        reduced_params: ReducedParamsFile {
            omega: f.reduced_params().omega,
            qz: f.reduced_params().qz,
            paraxial_omega: f.reduced_params().paraxial_omega,
        },
        samples: f
            .samples()
            .iter()
            .map(|s| SampleFile { k: s.k, theta: s.theta, phi: s.phi, weight: s.weight })
            .collect(),
        amp_plus: f.amp_plus().iter().map(|a| [a.re, a.im]).collect(),
        amp_minus: f.amp_minus().iter().map(|a| [a.re, a.im]).collect(),
        layout: f.layout().map(|l| match l {
            Layout::Ring { n_phi } => LayoutFile::Ring { n_phi },
            Layout::Disc { n_radial, n_phi } => LayoutFile::Disc { n_radial, n_phi },
            Layout::Grid3d { n_k, n_theta, n_phi } => LayoutFile::Grid3d { n_k, n_theta, n_phi },
        }),
    };
    to_json_string(&file)
}

pub fn wavefunction_from_json(text: &str) -> Result<MomentumWaveFunction> {
    let file: WaveFunctionFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidField(format!("bad wave function file: {e}")))?;
    let samples: Vec<WaveVectorSample> = file
        .samples
        .iter()
        .map(|s| WaveVectorSample::new(s.k, s.theta, s.phi, s.weight))
        .collect();
    let amp = |v: &Vec<[f64; 2]>| v.iter().map(|a| C64::new(a[0], a[1])).collect();
    let wf = MomentumWaveFunction::new(
        samples,
        amp(&file.amp_plus),
        amp(&file.amp_minus),
        ManifoldKind::from_str(&file.manifold)?,
        ReducedParams {
            omega: file.reduced_params.omega,
            qz: file.reduced_params.qz,
            paraxial_omega: file.reduced_params.paraxial_omega,
        },
    )?;
    match file.layout {
        Some(LayoutFile::Ring { n_phi }) => wf.with_layout(Layout::Ring { n_phi }),
        Some(LayoutFile::Disc { n_radial, n_phi }) => {
            wf.with_layout(Layout::Disc { n_radial, n_phi })
        }
        Some(LayoutFile::Grid3d { n_k, n_theta, n_phi }) => {
            wf.with_layout(Layout::Grid3d { n_k, n_theta, n_phi })
        }
        None => Ok(wf),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GridFile {
    origin: [f64; 3],
    spacing: [f64; 3],
    shape: [usize; 3],
    boundary: String,
}

impl GridFile {
    fn from_grid(g: &PositionGrid) -> Self {
        Self {
            origin: g.origin,
            spacing: g.spacing,
            shape: g.shape,
            boundary: match g.boundary {
                Boundary::Periodic => "periodic".into(),
                Boundary::Open => "open".into(),
            },
        }
    }

    fn to_grid(&self) -> Result<PositionGrid> {
        let boundary = match self.boundary.as_str() {
            "periodic" => Boundary::Periodic,
            "open" => Boundary::Open,
            other => return Err(Error::InvalidField(format!("unknown boundary '{other}'"))),
        };
        PositionGrid::new(self.origin, self.spacing, self.shape, boundary)
    }
}

/// Wire format of a synthesized two-component field.
#[derive(Debug, Serialize, Deserialize)]
pub struct FieldFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    units: Option<UnitsBlock>,
    grid: GridFile,
    time: f64,
    /// Per node: [[re, im]; 3] for each component, x fastest.
    psi_plus: Vec<[[f64; 2]; 3]>,
    psi_minus: Vec<[[f64; 2]; 3]>,
}

pub fn field_to_json(field: &HelicityField) -> Result<String> {
    let pack = |v: &VectorField3| -> Vec<[[f64; 2]; 3]> {
        (0..v.num_nodes())
            .map(|i| {
                let val = v.at(i);
                [
                    [val[0].re, val[0].im],
                    [val[1].re, val[1].im],
                    [val[2].re, val[2].im],
                ]
            })
            .collect()
    };
    let file = FieldFile {
        units: Some(UnitsBlock::natural()),
        grid: GridFile::from_grid(&field.grid),
        time: field.time,
        psi_plus: pack(&field.psi_plus),
        psi_minus: pack(&field.psi_minus),
    };
    to_json_string(&file)
}

pub fn field_from_json(text: &str) -> Result<HelicityField> {
    let file: FieldFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidField(format!("bad field file: {e}")))?;
    let grid = file.grid.to_grid()?;
    let n = grid.num_nodes();
    if file.psi_plus.len() != n || file.psi_minus.len() != n {
        return Err(Error::InvalidField(format!(
            "field file has {} / {} nodes, grid wants {n}",
            file.psi_plus.len(),
            file.psi_minus.len()
        )));
    }
    let unpack = |rows: &Vec<[[f64; 2]; 3]>| -> VectorField3 {
        let mut v = VectorField3::zeros(grid);
        for (i, row) in rows.iter().enumerate() {
            v.set(
                i,
                [
                    C64::new(row[0][0], row[0][1]),
                    C64::new(row[1][0], row[1][1]),
                    C64::new(row[2][0], row[2][1]),
                ],
            );
        }
        v
    };
    let field = HelicityField::from_parts(unpack(&file.psi_plus), unpack(&file.psi_minus), file.time)?;
    if !field.all_finite() {
        return Err(Error::InvalidField("field file contains non-finite values".into()));
    }
    Ok(field)
}

/// CSV export: one row per node with positions and both components.
pub fn field_to_csv<W: Write>(w: &mut W, field: &HelicityField) -> std::io::Result<()> {
    writeln!(w, "# units=natural hbar=1 c=1 eps0=1 mu0=1")?;
    writeln!(
        w,
        "# grid shape=({},{},{}) spacing=({},{},{}) origin=({},{},{}) time={}",
        field.grid.shape[0],
        field.grid.shape[1],
        field.grid.shape[2],
        fmt_f64(field.grid.spacing[0]),
        fmt_f64(field.grid.spacing[1]),
        fmt_f64(field.grid.spacing[2]),
        fmt_f64(field.grid.origin[0]),
        fmt_f64(field.grid.origin[1]),
        fmt_f64(field.grid.origin[2]),
        fmt_f64(field.time),
    )?;
    writeln!(
        w,
        "x,y,z,re_pp_x,im_pp_x,re_pp_y,im_pp_y,re_pp_z,im_pp_z,re_pm_x,im_pm_x,re_pm_y,im_pm_y,re_pm_z,im_pm_z"
    )?;
    for i in 0..field.grid.num_nodes() {
        let r = field.grid.position(i);
        let p = field.psi_plus.at(i);
        let m = field.psi_minus.at(i);
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r[0]),
            fmt_f64(r[1]),
            fmt_f64(r[2]),
            fmt_f64(p[0].re),
            fmt_f64(p[0].im),
            fmt_f64(p[1].re),
            fmt_f64(p[1].im),
            fmt_f64(p[2].re),
            fmt_f64(p[2].im),
            fmt_f64(m[0].re),
            fmt_f64(m[0].im),
            fmt_f64(m[1].re),
            fmt_f64(m[1].im),
            fmt_f64(m[2].re),
            fmt_f64(m[2].im),
        )?;
    }
    Ok(())
}

/// CSV line cut along one axis through the box center: coordinate, both
/// components, and the intensity |psi+|^2 + |psi-|^2.
pub fn line_cut_csv<W: Write>(w: &mut W, field: &HelicityField, axis: usize) -> std::io::Result<()> {
    let shape = field.grid.shape;
    let mid = [shape[0] / 2, shape[1] / 2, shape[2] / 2];
    writeln!(w, "# line cut along axis {axis} through the box center, time={}", fmt_f64(field.time))?;
    writeln!(
        w,
        "coord,re_pp_x,im_pp_x,re_pp_y,im_pp_y,re_pp_z,im_pp_z,re_pm_x,im_pm_x,re_pm_y,im_pm_y,re_pm_z,im_pm_z,intensity"
    )?;
    for i in 0..shape[axis] {
        let mut c = mid;
        c[axis] = i;
        let idx = field.grid.index(c[0], c[1], c[2]);
        let r = field.grid.position(idx);
        let p = field.psi_plus.at(idx);
        let m = field.psi_minus.at(idx);
        let intensity =
            crate::math::cvec3_norm_sq(p) + crate::math::cvec3_norm_sq(m);
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r[axis]),
            fmt_f64(p[0].re),
            fmt_f64(p[0].im),
            fmt_f64(p[1].re),
            fmt_f64(p[1].im),
            fmt_f64(p[2].re),
            fmt_f64(p[2].im),
            fmt_f64(m[0].re),
            fmt_f64(m[0].im),
            fmt_f64(m[1].re),
            fmt_f64(m[1].im),
            fmt_f64(m[2].re),
            fmt_f64(m[2].im),
            fmt_f64(intensity),
        )?;
    }
    Ok(())
}

/// CSV export of a pointwise Stokes map: x, y, z, S0..S3.
pub fn stokes_to_csv<W: Write>(w: &mut W, map: &StokesMap) -> std::io::Result<()> {
    writeln!(w, "# pointwise Stokes parameters in the helicity basis")?;
    writeln!(w, "x,y,z,s0,s1,s2,s3")?;
    for i in 0..map.grid.num_nodes() {
        let r = map.grid.position(i);
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_f64(r[0]),
            fmt_f64(r[1]),
            fmt_f64(r[2]),
            fmt_f64(map.s[0][i]),
            fmt_f64(map.s[1][i]),
            fmt_f64(map.s[2][i]),
            fmt_f64(map.s[3][i]),
        )?;
    }
    Ok(())
}

/// Minimal legacy-VTK STRUCTURED_POINTS export of the field intensity and
/// the real parts of psi_plus, for external viewers.
pub fn field_to_vtk<W: Write>(w: &mut W, field: &HelicityField) -> std::io::Result<()> {
    let g = &field.grid;
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "two-component field snapshot t={}", fmt_f64(field.time))?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} {}", g.shape[0], g.shape[1], g.shape[2])?;
    writeln!(w, "ORIGIN {} {} {}", fmt_f64(g.origin[0]), fmt_f64(g.origin[1]), fmt_f64(g.origin[2]))?;
    writeln!(w, "SPACING {} {} {}", fmt_f64(g.spacing[0]), fmt_f64(g.spacing[1]), fmt_f64(g.spacing[2]))?;
    writeln!(w, "POINT_DATA {}", g.num_nodes())?;
    writeln!(w, "SCALARS intensity double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for i in 0..g.num_nodes() {
        let val = crate::math::cvec3_norm_sq(field.psi_plus.at(i))
            + crate::math::cvec3_norm_sq(field.psi_minus.at(i));
        writeln!(w, "{}", fmt_f64(val))?;
    }
    writeln!(w, "VECTORS re_psi_plus double")?;
    for i in 0..g.num_nodes() {
        let p = field.psi_plus.at(i);
        writeln!(w, "{} {} {}", fmt_f64(p[0].re), fmt_f64(p[1].re), fmt_f64(p[2].re))?;
    }
    Ok(())
}

/// Momentum-representation observables report fragment.
#[derive(Debug, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub units: UnitsBlock,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "P")]
    pub p: [f64; 3],
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<[f64; 3]>,
    #[serde(rename = "Jz", skip_serializing_if = "Option::is_none")]
    pub jz: Option<f64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<[f64; 3]>,
    pub residuals: BTreeMap<String, f64>,
}

/// Stokes summary for reports.
#[derive(Debug, Serialize, Deserialize)]
pub struct StokesSummary {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poincare: Option<[f64; 3]>,
}

/// Field-level observables report.
#[derive(Debug, Serialize, Deserialize)]
pub struct FieldReport {
    pub units: UnitsBlock,
    pub time: f64,
    pub energy: f64,
    pub momentum: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jz: Option<f64>,
    pub helicity_fractions: [f64; 2],
    pub stokes: StokesSummary,
    pub residuals: BTreeMap<String, f64>,
}

/// Diagnostics time series as CSV.
pub fn diagnostics_to_csv<W: Write>(
    w: &mut W,
    rows: &[crate::medium::DiagnosticsRow],
) -> std::io::Result<()> {
    writeln!(w, "step,time,energy,mixing,max_amp,energy_drift_rel")?;
    let e0 = rows.first().map(|r| r.energy).unwrap_or(0.0);
    for r in rows {
        let drift = if e0 > 0.0 { (r.energy - e0) / e0 } else { 0.0 };
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.step,
            fmt_f64(r.time),
            fmt_f64(r.energy),
            fmt_f64(r.mixing),
            fmt_f64(r.max_amp),
            fmt_f64(drift),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{beam_exponential, BeamSpec, Helicity};
    use crate::momentum::state_distance;

    #[test]
    fn wavefunction_json_roundtrip() {
        let f = beam_exponential(
            &BeamSpec::Exponential { m: 1, qz: 0.5, tau: 1.0, helicity: Helicity::Plus },
            8,
            8,
        )
        .unwrap();
        let text = wavefunction_to_json(&f).unwrap();
        // Pinned keys are present.
        for key in ["manifold", "reduced_params", "samples", "amp_plus", "amp_minus"] {
            assert!(text.contains(key), "missing key {key}");
        }
        let back = wavefunction_from_json(&text).unwrap();
        assert_eq!(back.manifold(), f.manifold());
        assert_eq!(back.layout(), f.layout());
        assert!(state_distance(&f, &back).unwrap() < 1e-15);
    }

    #[test]
    fn field_json_roundtrip() {
        let grid = PositionGrid::centered_cube(4, 2.0);
        let mut field = HelicityField::zeros(grid, 0.25);
        field.psi_plus.set(3, [C64::new(1.0, -2.0), C64::new(0.5, 0.0), C64::default()]);
        field.psi_minus.set(10, [C64::default(), C64::new(-0.25, 0.125), C64::new(0.0, 1.0)]);
        let text = field_to_json(&field).unwrap();
        let back = field_from_json(&text).unwrap();
        assert_eq!(back.time, field.time);
        assert!(back.grid.same_grid(&field.grid));
        assert_eq!(back.psi_plus.at(3), field.psi_plus.at(3));
        assert_eq!(back.psi_minus.at(10), field.psi_minus.at(10));
    }

    #[test]
    fn json_floats_have_17_digits() {
        let text = to_json_string(&vec![std::f64::consts::PI]).unwrap();
        assert_eq!(text, "[3.1415926535897931e0]");
    }

    #[test]
    fn deterministic_output() {
        let f = beam_exponential(
            &BeamSpec::Exponential { m: 2, qz: 0.3, tau: 2.0, helicity: Helicity::Minus },
            6,
            8,
        )
        .unwrap();
        let a = wavefunction_to_json(&f).unwrap();
        let b = wavefunction_to_json(&f).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(wavefunction_from_json("{\"manifold\": \"nope\"").is_err());
        assert!(field_from_json("{}").is_err());
    }
}
