use std::io::Write;
use std::path::Path;

use ga_singular_core::distance::distance_to_singularity;
use ga_singular_core::handling::{admit_node, potential_from_distance, HandlingParams};
use ga_singular_core::singularity::{analyze, Analysis, SweepAxis, SweepSpec};
use rayon::prelude::*;

use crate::output::{Cell, Format, RecordWriter};
use crate::robot_file::{parse_robot_file, RobotFile, RobotFileError};

/// Sweep rows classified per parallel batch before they are written out.
const SWEEP_CHUNK: usize = 4096;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_SINGULAR: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{source}")]
    RobotFile {
        path: String,
        source: RobotFileError,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] ga_singular_core::Error),
    #[error("{0}")]
    Usage(String),
}

pub fn load_robot(path: &Path) -> Result<RobotFile, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: shown.clone(),
        source,
    })?;
    parse_robot_file(&text).map_err(|source| CliError::RobotFile { path: shown, source })
}

/// Parses `v1,v2,…` (whitespace around values is ignored).
pub fn parse_configuration(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("`{t}` is not a finite number")),
            }
        })
        .collect()
}

/// Parses `joint:min:max:step` with a one-based joint number.
pub fn parse_axis(text: &str) -> Result<SweepAxis, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 4 {
        return Err(format!("`{text}` is not joint:min:max:step"));
    }
    let joint: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a joint number", parts[0]))?;
    if joint == 0 {
        return Err("joint numbers start at 1".into());
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    };
    Ok(SweepAxis {
        joint: joint - 1,
        min: num(parts[1])?,
        max: num(parts[2])?,
        step: num(parts[3])?,
    })
}

fn analysis_columns(file: &RobotFile) -> Vec<String> {
    let mut cols: Vec<String> = (1..=file.model.dof()).map(|i| format!("q{i}")).collect();
    cols.extend(
        [
            "singular",
            "kind",
            "measure",
            "full_measure",
            "position_measure",
            "orientation_measure",
            "w_m",
            "w_c",
            "sigma_min",
            "sigma_max",
        ]
        .map(String::from),
    );
    cols.extend(file.singularities.iter().map(|s| format!("d_{}", s.name)));
    cols
}

fn analysis_cells(file: &RobotFile, q: &[f64], a: &Analysis) -> Result<Vec<Cell>, CliError> {
    let mut cells: Vec<Cell> = q.iter().map(|&v| Cell::Num(v)).collect();
    let opt = |v: &Option<ga_singular_core::singularity::SingularityVerdict>| {
        v.as_ref().map_or(Cell::Missing, |v| Cell::Num(v.measure))
    };
    cells.extend([
        Cell::Bool(a.verdict.singular),
        Cell::Text(a.verdict.kind.as_str().into()),
        Cell::Num(a.verdict.measure),
        Cell::Num(a.full.measure),
        opt(&a.position),
        opt(&a.orientation),
        Cell::Num(a.indices.w_m),
        Cell::Num(a.indices.w_c),
        Cell::Num(a.indices.sigma_min),
        Cell::Num(a.indices.sigma_max),
    ]);
    for s in &file.singularities {
        cells.push(Cell::Num(distance_to_singularity(&file.model, q, s)?.total));
    }
    Ok(cells)
}

/// Classifies one configuration. Returns [`EXIT_SINGULAR`] or [`EXIT_OK`].
pub fn check<W: Write>(file: &RobotFile, q: &[f64], tol: f64, format: Format, out: W) -> Result<u8, CliError> {
    check_tolerance(tol)?;
    let a = analyze(&file.model, q, tol)?;
    let cells = analysis_cells(file, q, &a)?;
    let mut w = RecordWriter::begin(out, format, analysis_columns(file))?;
    w.write(&cells)?;
    w.finish()?;
    Ok(if a.verdict.singular { EXIT_SINGULAR } else { EXIT_OK })
}

fn check_tolerance(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("tolerance {tol} must be positive and finite")))
    }
}

/// Classifies a grid row by row. The grid is validated before anything is
/// written; rows are evaluated in parallel batches and emitted in grid order.
pub fn sweep<W: Write>(
    file: &RobotFile,
    axes: Vec<SweepAxis>,
    base: Vec<f64>,
    tol: f64,
    format: Format,
    out: W,
) -> Result<(), CliError> {
    check_tolerance(tol)?;
    let spec = SweepSpec { axes, base, tol };
    spec.validate(&file.model)?;
    let len = spec.grid_len()?;

    let mut cols: Vec<String> = spec.axes.iter().map(|a| format!("i_q{}", a.joint + 1)).collect();
    cols.extend(analysis_columns(file));
    let mut w = RecordWriter::begin(out, format, cols)?;
    for start in (0..len).step_by(SWEEP_CHUNK) {
        let end = (start + SWEEP_CHUNK).min(len);
        let rows: Vec<Result<Vec<Cell>, CliError>> = (start..end)
            .into_par_iter()
            .map(|k| {
                let sample = spec.sample(&file.model, k)?;
                let mut cells: Vec<Cell> = sample.indices.iter().map(|&i| Cell::Int(i)).collect();
                cells.extend(analysis_cells(file, &sample.q, &sample.analysis)?);
                Ok(cells)
            })
            .collect();
        for row in rows {
            w.write(&row?)?;
        }
    }
    w.finish()?;
    Ok(())
}

/// Per-joint and total distances to one named singularity, or to all of them
/// followed by a `*` row holding the minimum total.
pub fn distance<W: Write>(file: &RobotFile, q: &[f64], name: Option<&str>, format: Format, out: W) -> Result<(), CliError> {
    let specs: Vec<_> = match name {
        Some(n) => vec![file.spec(n).ok_or_else(|| unknown_spec(file, n))?],
        None => file.singularities.iter().collect(),
    };
    file.model.check_configuration(q)?;
    let cols = ["spec", "joint", "distance"].map(String::from).to_vec();
    let mut w = RecordWriter::begin(out, format, cols)?;
    let mut min = f64::INFINITY;
    for s in &specs {
        let r = distance_to_singularity(&file.model, q, s)?;
        for (j, d) in &r.per_joint {
            w.write(&[Cell::Text(s.name.clone()), Cell::Text((j + 1).to_string()), Cell::Num(*d)])?;
        }
        w.write(&[Cell::Text(s.name.clone()), Cell::Text("total".into()), Cell::Num(r.total)])?;
        min = min.min(r.total);
    }
    if name.is_none() {
        w.write(&[Cell::Text("*".into()), Cell::Text("total".into()), Cell::Num(min)])?;
    }
    w.finish()?;
    Ok(())
}

fn unknown_spec(file: &RobotFile, name: &str) -> CliError {
    let names: Vec<&str> = file.singularities.iter().map(|s| s.name.as_str()).collect();
    CliError::Usage(if names.is_empty() {
        format!("unknown singularity `{name}`; the robot file declares none")
    } else {
        format!("unknown singularity `{name}`; available: {}", names.join(", "))
    })
}

/// Repulsive potential for every declared singularity plus the admission verdict.
pub fn potential<W: Write>(file: &RobotFile, q: &[f64], d0: f64, kappa: f64, format: Format, out: W) -> Result<(), CliError> {
    let params = HandlingParams::new(d0, kappa, 1)?;
    file.model.check_configuration(q)?;
    let mut cols = vec!["admitted".to_string(), "min_distance".to_string()];
    let mut cells = vec![
        Cell::Bool(admit_node(&file.model, q, &file.singularities, &params)?),
        Cell::Missing,
    ];
    let mut min = f64::INFINITY;
    for s in &file.singularities {
        let d = distance_to_singularity(&file.model, q, s)?.total;
        min = min.min(d);
        cols.push(format!("d_{}", s.name));
        cols.push(format!("u_{}", s.name));
        cells.push(Cell::Num(d));
        cells.push(Cell::Num(potential_from_distance(d, &params)));
    }
    cells[1] = Cell::Num(min);
    let mut w = RecordWriter::begin(out, format, cols)?;
    w.write(&cells)?;
    w.finish()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_parsing() {
        assert_eq!(parse_configuration("0.3, -1e-2,4").unwrap(), vec![0.3, -0.01, 4.0]);
        assert!(parse_configuration("0.3,,1").is_err());
        assert!(parse_configuration("nan").is_err());
        assert!(parse_configuration("inf").is_err());
    }

    #[test]
    fn axis_parsing() {
        let a = parse_axis("4:-0.1:0.1:0.01").unwrap();
        assert_eq!((a.joint, a.min, a.max, a.step), (3, -0.1, 0.1, 0.01));
        assert!(parse_axis("0:0:1:0.1").is_err());
        assert!(parse_axis("1:0:1").is_err());
        assert!(parse_axis("x:0:1:0.1").is_err());
    }
}
