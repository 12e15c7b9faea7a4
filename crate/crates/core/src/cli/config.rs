use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{PulseSchedule, Segment};
use crate::holonomy::{LoopPath, Rectangle};
use crate::model::{CircuitParams, DEFAULT_N_CUT};
use crate::spectral::qubit_splitting;
use crate::{Error, Result};

fn default_n_cut() -> usize {
    DEFAULT_N_CUT
}

/// Circuit energies in MHz, either as sums with asymmetries or per junction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej1_sum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej2_sum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej1_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej1_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej2_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej2_b: Option<f64>,
    pub ec: f64,
    #[serde(default)]
    pub ng: f64,
    #[serde(default = "default_n_cut")]
    pub n_cut: usize,
}

impl CircuitConfig {
    pub fn reference() -> Self {
        let p = CircuitParams::reference();
        Self {
            ej1_sum: Some(p.ej1_sum),
            ej2_sum: Some(p.ej2_sum),
            d1: Some(p.d1),
            d2: Some(p.d2),
            ej1_a: None,
            ej1_b: None,
            ej2_a: None,
            ej2_b: None,
            ec: p.ec,
            ng: p.ng,
            n_cut: p.n_cut,
        }
    }

    pub fn to_params(&self) -> Result<CircuitParams> {
        let junctions = [
            ("circuit.ej1_a", self.ej1_a),
            ("circuit.ej1_b", self.ej1_b),
            ("circuit.ej2_a", self.ej2_a),
            ("circuit.ej2_b", self.ej2_b),
        ];
        let sums = [
            ("circuit.ej1_sum", self.ej1_sum),
            ("circuit.ej2_sum", self.ej2_sum),
            ("circuit.d1", self.d1),
            ("circuit.d2", self.d2),
        ];
        if junctions.iter().any(|(_, v)| v.is_some()) {
            if let Some((name, _)) = sums.iter().find(|(_, v)| v.is_some()) {
                return Err(Error::invalid(
                    *name,
                    "cannot be combined with per-junction energies",
                ));
            }
            let get = |i: usize| {
                junctions[i]
                    .1
                    .ok_or_else(|| Error::invalid(junctions[i].0, "missing per-junction energy"))
            };
            CircuitParams::from_junctions(
                get(0)?,
                get(1)?,
                get(2)?,
                get(3)?,
                self.ec,
                self.ng,
                self.n_cut,
            )
        } else {
            let ej1 = self
                .ej1_sum
                .ok_or_else(|| Error::invalid("circuit.ej1_sum", "missing"))?;
            let ej2 = self
                .ej2_sum
                .ok_or_else(|| Error::invalid("circuit.ej2_sum", "missing"))?;
            CircuitParams::new(
                ej1,
                ej2,
                self.d1.unwrap_or(0.0),
                self.d2.unwrap_or(0.0),
                self.ec,
                self.ng,
                self.n_cut,
            )
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    /// File stem; defaults to the job kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AxisConfig {
    #[default]
    Flux,
    Ng,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    Psi0,
    Psi1,
    Plus,
    Minus,
    PlusY,
    MinusY,
}

impl InitialState {
    pub fn label(&self) -> &'static str {
        match self {
            InitialState::Psi0 => "psi0",
            InitialState::Psi1 => "psi1",
            InitialState::Plus => "plus",
            InitialState::Minus => "minus",
            InitialState::PlusY => "plus_y",
            InitialState::MinusY => "minus_y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKindConfig {
    Ramp,
    Hold,
}

/// One schedule segment; flux in units of π. A duration is given either in
/// µs or in Larmor periods `1/E_q` at the segment's end flux.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    pub kind: SegmentKindConfig,
    pub flux_start_pi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux_end_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub larmor_periods: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LoopMethodConfig {
    #[default]
    Curvature,
    Wilson,
    Both,
}

/// Rectangle in `(Φ/π, n_g)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub flux_min_pi: f64,
    pub flux_max_pi: f64,
    pub ng_min: f64,
    pub ng_max: f64,
}

impl RegionConfig {
    pub fn to_rectangle(&self) -> Result<Rectangle> {
        Rectangle::new(
            (self.flux_min_pi * PI, self.flux_max_pi * PI),
            (self.ng_min, self.ng_max),
        )
    }
}

fn default_interior() -> usize {
    8
}

fn default_n_steps() -> usize {
    400
}

fn default_l_max() -> usize {
    crate::holonomy::DEFAULT_L_MAX
}

fn default_levels() -> usize {
    6
}

/// Job parameters. Flux values are in units of π throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Job {
    SpectrumSweep {
        #[serde(default)]
        axis: AxisConfig,
        /// Grid start: `Φ/π` on the flux axis, `n_g` on the charge axis.
        start: f64,
        end: f64,
        points: usize,
        #[serde(default = "default_levels")]
        levels: usize,
        /// Fixed flux for charge sweeps.
        #[serde(default)]
        flux_pi: f64,
        /// Also tabulate phase-space densities at each grid point on this many phases.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        wavefunction_points: Option<usize>,
    },
    Splitting {
        flux_start_pi: f64,
        flux_end_pi: f64,
        points: usize,
        /// One table per value, overriding `circuit.ej1_sum`.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        ej1_sum_values: Vec<f64>,
        #[serde(default)]
        approximation: bool,
    },
    Pulse {
        segments: Vec<SegmentConfig>,
        initial: InitialState,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dt_us: Option<f64>,
        /// Step-halving tolerance on the final state.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    TippingScan {
        flux_start_pi: f64,
        flux_end_pi: f64,
        points: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        threshold: Option<f64>,
    },
    BerryGrid {
        region: RegionConfig,
        levels: [usize; 2],
        resolution: [usize; 2],
    },
    BerryLoop {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<RegionConfig>,
        /// Closed axis-aligned polygon as `[Φ/π, n_g]` pairs.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<Vec<[f64; 2]>>,
        level: usize,
        #[serde(default)]
        method: LoopMethodConfig,
        #[serde(default = "default_interior")]
        interior_resolution: usize,
        #[serde(default = "default_n_steps")]
        n_steps: usize,
        #[serde(default = "default_l_max")]
        l_max: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        ej1_sum_values: Vec<f64>,
    },
    Convergence {
        flux_pi: f64,
        tol: f64,
    },
}

impl Job {
    pub fn kind(&self) -> JobKind {
        match self {
            Job::SpectrumSweep { .. } => JobKind::SpectrumSweep,
            Job::Splitting { .. } => JobKind::Splitting,
            Job::Pulse { .. } => JobKind::Pulse,
            Job::TippingScan { .. } => JobKind::TippingScan,
            Job::BerryGrid { .. } => JobKind::BerryGrid,
            Job::BerryLoop { .. } => JobKind::BerryLoop,
            Job::Convergence { .. } => JobKind::Convergence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JobKind {
    SpectrumSweep,
    Splitting,
    Pulse,
    TippingScan,
    BerryGrid,
    BerryLoop,
    Convergence,
}

impl JobKind {
    pub fn name(&self) -> &'static str {
        match self {
            JobKind::SpectrumSweep => "spectrum-sweep",
            JobKind::Splitting => "splitting",
            JobKind::Pulse => "pulse",
            JobKind::TippingScan => "tipping-scan",
            JobKind::BerryGrid => "berry-grid",
            JobKind::BerryLoop => "berry-loop",
            JobKind::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub circuit: CircuitConfig,
    pub job: Job,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
}

fn check_points(name: &str, points: usize, min: usize) -> Result<()> {
    if points < min {
        return Err(Error::invalid(
            name,
            format!("must be >= {min}, got {points}"),
        ));
    }
    Ok(())
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(name, "must be finite"));
    }
    Ok(())
}

impl RunConfig {
    /// Parses JSON, or TOML when `path` ends in `.toml`.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("cannot read {}: {e}", path.display()),
            ))
        })?;
        if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml(&text)
        } else {
            Self::from_json(&text)
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn params(&self) -> Result<CircuitParams> {
        self.circuit.to_params()
    }

    pub fn format(&self) -> OutputFormat {
        self.output.format.unwrap_or_default()
    }

    pub fn name(&self) -> String {
        self.output
            .name
            .clone()
            .unwrap_or_else(|| self.job.kind().name().to_string())
    }

    /// Every range and consistency check that can run without computing.
    pub fn validate(&self) -> Result<()> {
        let params = self.params()?;
        if let Some(name) = &self.output.name {
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(Error::invalid("output.name", "must be a plain file stem"));
            }
        }
        match &self.job {
            Job::SpectrumSweep {
                start,
                end,
                points,
                levels,
                flux_pi,
                wavefunction_points,
                ..
            } => {
                check_finite("job.start", &[*start, *end, *flux_pi])?;
                check_points("job.points", *points, 1)?;
                if *levels == 0 || *levels > params.dim() {
                    return Err(Error::invalid(
                        "job.levels",
                        format!("must be in 1..={}", params.dim()),
                    ));
                }
                if let Some(n) = wavefunction_points {
                    check_points("job.wavefunction_points", *n, 2)?;
                }
            }
            Job::Splitting {
                flux_start_pi,
                flux_end_pi,
                points,
                ej1_sum_values,
                ..
            } => {
                check_finite("job.flux_start_pi", &[*flux_start_pi, *flux_end_pi])?;
                check_points("job.points", *points, 1)?;
                for v in ej1_sum_values {
                    params.with_ej1_sum(*v).validate().map_err(|_| {
                        Error::invalid("job.ej1_sum_values", format!("{v} is not a valid energy"))
                    })?;
                }
            }
            Job::Pulse {
                segments,
                dt_us,
                tol,
                ..
            } => {
                if let Some(dt) = dt_us {
                    if !(dt.is_finite() && *dt > 0.0) {
                        return Err(Error::invalid("job.dt_us", "must be > 0"));
                    }
                }
                if let Some(t) = tol {
                    if !(t.is_finite() && *t > 0.0) {
                        return Err(Error::invalid("job.tol", "must be > 0"));
                    }
                }
                for (i, s) in segments.iter().enumerate() {
                    if s.duration_us.is_some() == s.larmor_periods.is_some() {
                        return Err(Error::invalid(
                            format!("job.segments[{i}]"),
                            "give exactly one of duration_us and larmor_periods",
                        ));
                    }
                }
            }
            Job::TippingScan {
                flux_start_pi,
                flux_end_pi,
                points,
                threshold,
            } => {
                check_finite("job.flux_start_pi", &[*flux_start_pi, *flux_end_pi])?;
                check_points("job.points", *points, 1)?;
                if let Some(t) = threshold {
                    if !(t.is_finite() && *t > 0.0) {
                        return Err(Error::invalid("job.threshold", "must be > 0"));
                    }
                }
            }
            Job::BerryGrid {
                region,
                levels,
                resolution,
            } => {
                region.to_rectangle()?;
                for l in levels {
                    if *l >= params.dim() {
                        return Err(Error::invalid("job.levels", "level exceeds the basis size"));
                    }
                }
                check_points("job.resolution", resolution[0].min(resolution[1]), 2)?;
            }
            Job::BerryLoop {
                region,
                vertices,
                level,
                interior_resolution,
                n_steps,
                l_max,
                ej1_sum_values,
                ..
            } => {
                if region.is_some() == vertices.is_some() {
                    return Err(Error::invalid(
                        "job.region",
                        "give exactly one of region and vertices",
                    ));
                }
                self.loop_path()?;
                check_points("job.interior_resolution", *interior_resolution, 1)?;
                check_points("job.n_steps", *n_steps, 4)?;
                if *l_max >= params.dim() || *level > *l_max {
                    return Err(Error::invalid(
                        "job.l_max",
                        format!("need level <= l_max < {}", params.dim()),
                    ));
                }
                for v in ej1_sum_values {
                    params.with_ej1_sum(*v).validate().map_err(|_| {
                        Error::invalid("job.ej1_sum_values", format!("{v} is not a valid energy"))
                    })?;
                }
            }
            Job::Convergence { flux_pi, tol } => {
                check_finite("job.flux_pi", &[*flux_pi])?;
                if !(tol.is_finite() && *tol > 0.0) {
                    return Err(Error::invalid("job.tol", "must be > 0"));
                }
            }
        }
        Ok(())
    }

    /// Loop of a `berry-loop` job in radians.
    pub fn loop_path(&self) -> Result<LoopPath> {
        let Job::BerryLoop {
            region, vertices, ..
        } = &self.job
        else {
            return Err(Error::invalid("job.kind", "not a berry-loop job"));
        };
        match (region, vertices) {
            (Some(r), None) => LoopPath::rectangle(&r.to_rectangle()?),
            (None, Some(v)) => LoopPath::new(v.iter().map(|p| (p[0] * PI, p[1])).collect())
                .map_err(|e| match e {
                    Error::InvalidParameter { reason, .. } => {
                        Error::invalid("job.vertices", reason)
                    }
                    other => other,
                }),
            _ => Err(Error::invalid(
                "job.region",
                "give exactly one of region and vertices",
            )),
        }
    }
}

/// Schedule of a `pulse` job, resolving Larmor-period durations.
pub fn pulse_schedule(params: &CircuitParams, segments: &[SegmentConfig]) -> Result<PulseSchedule> {
    let mut out = Vec::with_capacity(segments.len());
    for (i, s) in segments.iter().enumerate() {
        let start = s.flux_start_pi * PI;
        let end = s.flux_end_pi.map_or(start, |f| f * PI);
        let duration = match (s.duration_us, s.larmor_periods) {
            (Some(d), None) => d,
            (None, Some(n)) => n / qubit_splitting(params, end)?,
            _ => {
                return Err(Error::invalid(
                    format!("job.segments[{i}]"),
                    "give exactly one of duration_us and larmor_periods",
                ))
            }
        };
        out.push(match s.kind {
            SegmentKindConfig::Ramp => Segment::ramp(start, end, duration),
            SegmentKindConfig::Hold => {
                if end != start {
                    return Err(Error::invalid(
                        format!("job.segments[{i}].flux_end_pi"),
                        "hold segments keep the flux fixed",
                    ));
                }
                Segment::hold(start, duration)
            }
        });
    }
    PulseSchedule::new(out)
}
