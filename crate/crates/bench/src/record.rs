//! Benchmark rows and their CSV form.
//!
//! Column order follows the field order of [`BenchRecord`]. Floats are
//! written in scientific notation with 17 significant digits for
//! double-precision rows and 9 for single-precision rows; single-precision
//! rows hold values already rounded to `f32`, so both widths parse back to
//! the identical record.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use itergrover::{Backend, ExecutionMode, IterationPolicy, Precision};

use crate::config::Experiment;
use crate::BenchError;

pub const COLUMNS: [&str; 18] = [
    "experiment",
    "n",
    "backend",
    "mode",
    "precision",
    "k_policy",
    "k",
    "marked",
    "shots",
    "trial",
    "wall_time_seconds",
    "marked_amplitude_exact",
    "marked_probability_exact",
    "marked_amplitude_sampled",
    "peak_program_ops",
    "max_bond_dim",
    "discarded_weight",
    "status",
];

/// Index of the wall-time column, the only non-deterministic one.
pub const WALL_TIME_COLUMN: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Ok,
    Skipped(String),
}

impl Status {
    fn encode(&self) -> String {
        match self {
            Status::Ok => "ok".into(),
            Status::Skipped(reason) => format!("skipped: {reason}"),
        }
    }

    fn decode(s: &str) -> Self {
        match s.strip_prefix("skipped: ") {
            Some(reason) => Status::Skipped(reason.to_string()),
            None => Status::Ok,
        }
    }
}

/// One observation. Unavailable numeric fields are `NaN` / `None`.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub experiment: Experiment,
    pub n: usize,
    pub backend: Backend,
    pub mode: ExecutionMode,
    pub precision: Precision,
    pub k_policy: IterationPolicy,
    pub k: usize,
    pub marked: String,
    /// 0 when no sampling was done.
    pub shots: u64,
    pub trial: usize,
    pub wall_time_seconds: f64,
    /// `|⟨m|ψ⟩|`
    pub marked_amplitude_exact: f64,
    pub marked_probability_exact: f64,
    /// `√(marked_count / shots)`, NaN when `shots == 0`.
    pub marked_amplitude_sampled: f64,
    pub peak_program_ops: Option<usize>,
    pub max_bond_dim: Option<usize>,
    pub discarded_weight: f64,
    pub status: Status,
}

// NaN-aware equality, so parsed records compare equal to emitted ones.
impl PartialEq for BenchRecord {
    fn eq(&self, o: &Self) -> bool {
        let feq = |a: f64, b: f64| a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan());
        self.experiment == o.experiment
            && self.n == o.n
            && self.backend == o.backend
            && self.mode == o.mode
            && self.precision == o.precision
            && self.k_policy == o.k_policy
            && self.k == o.k
            && self.marked == o.marked
            && self.shots == o.shots
            && self.trial == o.trial
            && feq(self.wall_time_seconds, o.wall_time_seconds)
            && feq(self.marked_amplitude_exact, o.marked_amplitude_exact)
            && feq(self.marked_probability_exact, o.marked_probability_exact)
            && feq(self.marked_amplitude_sampled, o.marked_amplitude_sampled)
            && self.peak_program_ops == o.peak_program_ops
            && self.max_bond_dim == o.max_bond_dim
            && feq(self.discarded_weight, o.discarded_weight)
            && self.status == o.status
    }
}

impl BenchRecord {
    pub fn is_skipped(&self) -> bool {
        matches!(self.status, Status::Skipped(_))
    }

    /// Rounds float fields of single-precision rows to `f32`.
    pub fn normalized(mut self) -> Self {
        if self.precision == Precision::Single {
            for x in [
                &mut self.wall_time_seconds,
                &mut self.marked_amplitude_exact,
                &mut self.marked_probability_exact,
                &mut self.marked_amplitude_sampled,
                &mut self.discarded_weight,
            ] {
                *x = *x as f32 as f64;
            }
        }
        self
    }

    fn format_float(&self, x: f64) -> String {
        if x.is_nan() {
            return "NaN".into();
        }
        match self.precision {
            Precision::Double => format!("{x:.16e}"),
            Precision::Single => format!("{:.8e}", x as f32),
        }
    }

    fn parse_float(precision: Precision, s: &str) -> Result<f64, BenchError> {
        let bad = |_| BenchError::Parse(format!("`{s}` is not a float"));
        match precision {
            Precision::Double => s.parse::<f64>().map_err(bad),
            Precision::Single => s.parse::<f32>().map(f64::from).map_err(bad),
        }
    }

    pub fn to_fields(&self) -> Vec<String> {
        let opt = |x: Option<usize>| x.map_or_else(|| "NaN".to_string(), |v| v.to_string());
        vec![
            self.experiment.to_string(),
            self.n.to_string(),
            self.backend.to_string(),
            self.mode.to_string(),
            self.precision.to_string(),
            self.k_policy.to_string(),
            self.k.to_string(),
            self.marked.clone(),
            self.shots.to_string(),
            self.trial.to_string(),
            self.format_float(self.wall_time_seconds),
            self.format_float(self.marked_amplitude_exact),
            self.format_float(self.marked_probability_exact),
            self.format_float(self.marked_amplitude_sampled),
            opt(self.peak_program_ops),
            opt(self.max_bond_dim),
            self.format_float(self.discarded_weight),
            self.status.encode(),
        ]
    }

    pub fn from_fields(f: &[&str]) -> Result<Self, BenchError> {
        if f.len() != COLUMNS.len() {
            return Err(BenchError::Parse(format!(
                "expected {} columns, found {}",
                COLUMNS.len(),
                f.len()
            )));
        }
        let core = |e: itergrover::Error| BenchError::Parse(e.to_string());
        let int = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| BenchError::Parse(format!("`{s}` is not an integer")))
        };
        let opt = |s: &str| -> Result<Option<usize>, BenchError> {
            if s == "NaN" {
                Ok(None)
            } else {
                int(s).map(|v| Some(v as usize))
            }
        };
        let precision: Precision = f[4].parse().map_err(core)?;
        let float = |s: &str| Self::parse_float(precision, s);
        Ok(Self {
            experiment: f[0].parse()?,
            n: int(f[1])? as usize,
            backend: f[2].parse().map_err(core)?,
            mode: f[3].parse().map_err(core)?,
            precision,
            k_policy: f[5].parse().map_err(core)?,
            k: int(f[6])? as usize,
            marked: f[7].to_string(),
            shots: int(f[8])?,
            trial: int(f[9])? as usize,
            wall_time_seconds: float(f[10])?,
            marked_amplitude_exact: float(f[11])?,
            marked_probability_exact: float(f[12])?,
            marked_amplitude_sampled: float(f[13])?,
            peak_program_ops: opt(f[14])?,
            max_bond_dim: opt(f[15])?,
            discarded_weight: float(f[16])?,
            status: Status::decode(f[17]),
        })
    }
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(COLUMNS)?;
    for r in records {
        w.write_record(r.to_fields())?;
    }
    w.flush().map_err(|e| BenchError::Io {
        path: "<writer>".into(),
        source: e,
    })?;
    Ok(())
}

/// Writes header plus one row per record to `path`.
pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<(), BenchError> {
    let io = |source| BenchError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    let mut buf = BufWriter::new(file);
    write_csv(records, &mut buf)?;
    buf.flush().map_err(io)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>, BenchError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(BenchError::Parse("unexpected CSV header".into()));
    }
    rdr.records()
        .map(|row| {
            let row = row?;
            let fields: Vec<&str> = row.iter().collect();
            BenchRecord::from_fields(&fields)
        })
        .collect()
}
