//! File formats and command implementations behind the `qps` binary.
//!
//! State files are JSON, `{"dim": N, "rho": [[[re, im], ...], ...]}`. Grids
//! are written as CSV with a `q,p,value` (Wigner) or `q,p,re,im` (Kirkwood)
//! header, or as JSON with the same column names.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use qps_core::kirkwood::KirkwoodGrid;
use qps_core::operator::validate_density;
use qps_core::probe::{reconstruct_wigner, ProbeConfig, SimulatedProbes};
use qps_core::verify::{self, VerifyOptions};
use qps_core::{DensityMatrix, Dimension, Operator, PhaseSpace, WignerGrid, C64};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0} properties failed")]
    PropertyFailure(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::PropertyFailure(_) => 1,
            CliError::Input(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<qps_core::Error> for CliError {
    fn from(e: qps_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: u64,
    pub rho: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_operator(op: &Operator) -> Self {
        let n = op.n();
        let rho = (0..n)
            .map(|i| op.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        StateFile { dim: n as u64, rho }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("state file parse error: {e}")))
    }

    /// Checks the dimension, the matrix shape and the density invariants.
    pub fn into_density(self, tol: f64) -> CliResult<DensityMatrix> {
        let dim =
            Dimension::new(self.dim).map_err(|e| CliError::Input(format!("invalid dim: {e}")))?;
        let n = dim.get();
        if self.rho.len() != n || self.rho.iter().any(|r| r.len() != n) {
            return Err(CliError::Input(format!(
                "rho must be a {n}x{n} array of [re, im] pairs"
            )));
        }
        let entries = self
            .rho
            .iter()
            .flatten()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        let op = Operator::from_row_major(dim, entries)?;
        validate_density(op, tol).map_err(|e| CliError::Input(format!("invalid state: {e}")))
    }
}

pub fn read_state(path: &Path, tol: f64) -> CliResult<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    StateFile::parse(&text)?.into_density(tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Wigner,
    Kirkwood,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub q: usize,
    pub p: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub kind: GridKind,
    pub dim: usize,
    pub rows: Vec<GridRow>,
}

impl GridFile {
    pub fn from_wigner(w: &WignerGrid) -> Self {
        let rows = w
            .iter()
            .map(|(q, p, v)| GridRow {
                q,
                p,
                value: Some(v),
                re: None,
                im: None,
            })
            .collect();
        GridFile {
            kind: GridKind::Wigner,
            dim: w.dim().get(),
            rows,
        }
    }

    /// Rows are emitted in `(q, p)` order even though the grid is `(p, q)`.
    pub fn from_kirkwood(k: &KirkwoodGrid) -> Self {
        let n = k.dim().get();
        let rows = (0..n)
            .flat_map(|q| (0..n).map(move |p| (q, p)))
            .map(|(q, p)| {
                let v = k.get(p, q);
                GridRow {
                    q,
                    p,
                    value: None,
                    re: Some(v.re),
                    im: Some(v.im),
                }
            })
            .collect();
        GridFile {
            kind: GridKind::Kirkwood,
            dim: n,
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.kind {
            GridKind::Wigner => {
                out.push_str("q,p,value\n");
                for r in &self.rows {
                    out.push_str(&format!(
                        "{},{},{:.16e}\n",
                        r.q,
                        r.p,
                        r.value.unwrap_or(f64::NAN)
                    ));
                }
            }
            GridKind::Kirkwood => {
                out.push_str("q,p,re,im\n");
                for r in &self.rows {
                    out.push_str(&format!(
                        "{},{},{:.16e},{:.16e}\n",
                        r.q,
                        r.p,
                        r.re.unwrap_or(f64::NAN),
                        r.im.unwrap_or(f64::NAN)
                    ));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("grid serialization");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Parses the CSV layout written by [`GridFile::to_csv`].
    pub fn parse_csv(text: &str) -> CliResult<Self> {
        let bad = |msg: String| CliError::Input(format!("grid csv: {msg}"));
        let mut lines = text.lines();
        let kind = match lines.next().map(str::trim) {
            Some("q,p,value") => GridKind::Wigner,
            Some("q,p,re,im") => GridKind::Kirkwood,
            other => return Err(bad(format!("unexpected header {other:?}"))),
        };
        let width = if kind == GridKind::Wigner { 3 } else { 4 };
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != width {
                return Err(bad(format!(
                    "row {} has {} columns, expected {width}",
                    i + 1,
                    cols.len()
                )));
            }
            let int = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| bad(format!("row {}: {e}", i + 1)))
            };
            let float = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| bad(format!("row {}: {e}", i + 1)))
            };
            let (q, p) = (int(cols[0])?, int(cols[1])?);
            rows.push(match kind {
                GridKind::Wigner => GridRow {
                    q,
                    p,
                    value: Some(float(cols[2])?),
                    re: None,
                    im: None,
                },
                GridKind::Kirkwood => GridRow {
                    q,
                    p,
                    value: None,
                    re: Some(float(cols[2])?),
                    im: Some(float(cols[3])?),
                },
            });
        }
        let dim = (rows.len() as f64).sqrt().round() as usize;
        if dim * dim != rows.len() {
            return Err(bad(format!(
                "{} rows do not form a square grid",
                rows.len()
            )));
        }
        Ok(GridFile { kind, dim, rows })
    }

    pub fn to_wigner(&self) -> CliResult<WignerGrid> {
        if self.kind != GridKind::Wigner {
            return Err(CliError::Input("not a Wigner grid".into()));
        }
        let dim = Dimension::new(self.dim as u64)?;
        let n = dim.get();
        let mut values = vec![f64::NAN; n * n];
        for r in &self.rows {
            if r.q >= n || r.p >= n {
                return Err(CliError::Input(format!(
                    "row ({}, {}) outside {n}x{n} grid",
                    r.q, r.p
                )));
            }
            values[r.q * n + r.p] = r
                .value
                .ok_or_else(|| CliError::Input("missing value column".into()))?;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(CliError::Input("grid has missing points".into()));
        }
        Ok(WignerGrid::from_values(dim, values)?)
    }
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

pub fn cmd_wigner(state: &Path, out: Option<&Path>, format: Format, tol: f64) -> CliResult<()> {
    let rho = read_state(state, tol)?;
    let space = PhaseSpace::new(rho.dim())?;
    let w = space.wigner_transform(rho.operator())?;
    write_output(out, &GridFile::from_wigner(&w).render(format))
}

pub fn cmd_kirkwood(state: &Path, out: Option<&Path>, format: Format, tol: f64) -> CliResult<()> {
    let rho = read_state(state, tol)?;
    let space = PhaseSpace::new(rho.dim())?;
    let k = space.kirkwood(&rho)?;
    write_output(out, &GridFile::from_kirkwood(&k).render(format))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub dim: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub sigma2: f64,
    pub eps_single: f64,
    pub extrapolate: bool,
    pub max_abs_deviation: f64,
    pub mean_abs_deviation: f64,
}

/// Sidecar path for a reconstruction written to `out`.
pub fn report_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".report.json");
    PathBuf::from(s)
}

pub fn reconstruct(
    rho: &DensityMatrix,
    config: &ProbeConfig,
    extrapolate: bool,
) -> CliResult<(WignerGrid, ReconstructionReport)> {
    let space = PhaseSpace::new(rho.dim())?;
    let direct = space.wigner_transform(rho.operator())?;
    let w = reconstruct_wigner(&SimulatedProbes::new(rho), config, extrapolate)?;
    let devs: Vec<f64> = w
        .values()
        .iter()
        .zip(direct.values())
        .map(|(a, b)| (a - b).abs())
        .collect();
    let report = ReconstructionReport {
        dim: rho.dim().get(),
        eps1: config.eps1,
        eps2: config.eps2,
        sigma2: config.sigma_p1_sq,
        eps_single: config.eps_single,
        extrapolate,
        max_abs_deviation: devs.iter().copied().fold(0.0, f64::max),
        mean_abs_deviation: devs.iter().sum::<f64>() / devs.len() as f64,
    };
    Ok((w, report))
}

pub fn cmd_reconstruct(
    state: &Path,
    out: Option<&Path>,
    format: Format,
    config: ProbeConfig,
    extrapolate: bool,
    tol: f64,
) -> CliResult<ReconstructionReport> {
    let config = config.validated()?;
    let rho = read_state(state, tol)?;
    let (w, report) = reconstruct(&rho, &config, extrapolate)?;
    write_output(out, &GridFile::from_wigner(&w).render(format))?;
    let mut json = serde_json::to_string_pretty(&report).expect("report serialization");
    json.push('\n');
    match out {
        Some(p) => {
            let rp = report_path(p);
            fs::write(&rp, json).map_err(|source| CliError::Io { path: rp, source })?;
        }
        None => eprint!("{json}"),
    }
    Ok(report)
}

pub fn cmd_verify(n: u64, options: VerifyOptions) -> CliResult<String> {
    let dim = Dimension::new(n).map_err(|e| CliError::Input(format!("invalid --n: {e}")))?;
    if options.tol.is_nan() || options.tol < 0.0 {
        return Err(CliError::Input(format!("invalid --tol {}", options.tol)));
    }
    let report = verify::run(dim, options)?;
    let text = report.to_string();
    write_output(None, &text)?;
    let failed = report.checks.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(CliError::PropertyFailure(failed));
    }
    Ok(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubVector {
    pub basis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    pub m: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubFile {
    pub dim: usize,
    pub num_bases: usize,
    pub vectors: Vec<MubVector>,
}

pub fn mub_file(dim: Dimension) -> CliResult<MubFile> {
    let space = PhaseSpace::new(dim)?;
    let mut vectors = Vec::new();
    for (basis, states) in space.mubs().iter() {
        let (label, b) = match basis {
            qps_core::BasisIndex::Reference => ("reference", None),
            qps_core::BasisIndex::Shifted(b) => ("shifted", Some(b)),
        };
        for (m, s) in states.iter().enumerate() {
            let amplitudes = s.amplitudes().iter().map(|z| [z.re, z.im]).collect();
            vectors.push(MubVector {
                basis: label.to_string(),
                b,
                m,
                amplitudes,
            });
        }
    }
    Ok(MubFile {
        dim: dim.get(),
        num_bases: dim.get() + 1,
        vectors,
    })
}

pub fn cmd_mub(n: u64, out: Option<&Path>) -> CliResult<()> {
    let dim = Dimension::new(n).map_err(|e| CliError::Input(format!("invalid --n: {e}")))?;
    let mut json = serde_json::to_string_pretty(&mub_file(dim)?).expect("mub serialization");
    json.push('\n');
    write_output(out, &json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qps_core::operator::random_density;

    #[test]
    fn state_file_round_trip() {
        let d = Dimension::new(5).unwrap();
        let rho = random_density(d, 3);
        let sf = StateFile::from_operator(rho.operator());
        let text = serde_json::to_string(&sf).unwrap();
        let back = StateFile::parse(&text)
            .unwrap()
            .into_density(1e-10)
            .unwrap();
        assert_eq!(back.operator(), rho.operator());
    }

    #[test]
    fn state_file_errors() {
        assert!(matches!(
            StateFile::parse("{not json"),
            Err(CliError::Input(_))
        ));
        let sf = StateFile {
            dim: 4,
            rho: vec![vec![[0.25, 0.0]; 4]; 4],
        };
        assert!(sf
            .into_density(1e-10)
            .unwrap_err()
            .to_string()
            .contains("not prime"));
        let sf = StateFile {
            dim: 3,
            rho: vec![vec![[0.0, 0.0]; 3]; 2],
        };
        assert!(sf.into_density(1e-10).is_err());
        let mut rho = vec![vec![[0.0, 0.0]; 3]; 3];
        rho[0][1] = [0.5, 0.0];
        rho[0][0] = [1.0, 0.0];
        let err = StateFile { dim: 3, rho }.into_density(1e-10).unwrap_err();
        assert!(err.to_string().contains("Hermitian"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn csv_layout() {
        let d = Dimension::new(3).unwrap();
        let space = PhaseSpace::new(d).unwrap();
        let w = space
            .wigner_transform(DensityMatrix::maximally_mixed(d).operator())
            .unwrap();
        let csv = GridFile::from_wigner(&w).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("q,p,value"));
        assert_eq!(lines.next(), Some("0,0,3.3333333333333331e-1"));
        assert_eq!(csv.lines().count(), 10);
        let parsed = GridFile::parse_csv(&csv).unwrap();
        assert_eq!(parsed.to_wigner().unwrap(), w);

        let k = space.kirkwood(&DensityMatrix::maximally_mixed(d)).unwrap();
        let csv = GridFile::from_kirkwood(&k).to_csv();
        assert!(csv.starts_with("q,p,re,im\n"));
        assert_eq!(GridFile::parse_csv(&csv).unwrap().kind, GridKind::Kirkwood);
        assert!(GridFile::parse_csv("x,y\n").is_err());
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [1.0 / 3.0, -2.0f64.sqrt(), 1e-300, 6.02214076e23] {
            let s = format!("{v:.16e}");
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn mub_file_layout() {
        let f = mub_file(Dimension::new(3).unwrap()).unwrap();
        assert_eq!(f.num_bases, 4);
        assert_eq!(f.vectors.len(), 12);
        assert_eq!(f.vectors[0].basis, "reference");
        assert_eq!(f.vectors[3].b, Some(0));
    }

    #[test]
    fn report_path_appends_suffix() {
        assert_eq!(
            report_path(Path::new("/tmp/w.csv")),
            PathBuf::from("/tmp/w.csv.report.json")
        );
    }
}
