use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Flux mismatch tolerated at segment boundaries (radians).
const CONTINUITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Ramp,
    Hold,
}

/// One piece of a piecewise-linear flux program. Durations are in µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub kind: SegmentKind,
    pub duration: f64,
    pub flux_start: f64,
    pub flux_end: f64,
}

impl Segment {
    pub fn ramp(flux_start: f64, flux_end: f64, duration: f64) -> Self {
        Self {
            kind: SegmentKind::Ramp,
            duration,
            flux_start,
            flux_end,
        }
    }

    pub fn hold(flux: f64, duration: f64) -> Self {
        Self {
            kind: SegmentKind::Hold,
            duration,
            flux_start: flux,
            flux_end: flux,
        }
    }

    /// Flux at local time `tau ∈ [0, duration]`.
    pub fn flux_at(&self, tau: f64) -> f64 {
        match self.kind {
            SegmentKind::Hold => self.flux_start,
            SegmentKind::Ramp => {
                let s = (tau / self.duration).clamp(0.0, 1.0);
                (1.0 - s) * self.flux_start + s * self.flux_end
            }
        }
    }
}

/// Validated sequence of segments with continuous flux.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct PulseSchedule {
    segments: Vec<Segment>,
}

impl TryFrom<Vec<Segment>> for PulseSchedule {
    type Error = Error;

    fn try_from(segments: Vec<Segment>) -> Result<Self> {
        Self::new(segments)
    }
}

impl From<PulseSchedule> for Vec<Segment> {
    fn from(s: PulseSchedule) -> Self {
        s.segments
    }
}

impl PulseSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("segments", "schedule has no segments"));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.duration.is_finite() && s.duration > 0.0) {
                return Err(Error::invalid(
                    format!("segments[{i}].duration"),
                    format!("must be > 0, got {}", s.duration),
                ));
            }
            if !(s.flux_start.is_finite() && s.flux_end.is_finite()) {
                return Err(Error::invalid(
                    format!("segments[{i}]"),
                    "flux must be finite",
                ));
            }
            if s.kind == SegmentKind::Hold && s.flux_start != s.flux_end {
                return Err(Error::invalid(
                    format!("segments[{i}]"),
                    "hold must start and end at the same flux",
                ));
            }
            if i > 0 && (segments[i - 1].flux_end - s.flux_start).abs() > CONTINUITY_TOL {
                return Err(Error::invalid(
                    format!("segments[{i}].flux_start"),
                    format!(
                        "flux jumps from {} to {} at the boundary",
                        segments[i - 1].flux_end,
                        s.flux_start
                    ),
                ));
            }
        }
        Ok(Self { segments })
    }

    /// Constant flux for `duration`.
    pub fn hold(flux: f64, duration: f64) -> Result<Self> {
        Self::new(vec![Segment::hold(flux, duration)])
    }

    /// `anchor → target`, hold, `target → anchor`. Zero-length pieces are dropped.
    pub fn excursion(anchor: f64, target: f64, ramp_time: f64, hold_time: f64) -> Result<Self> {
        let mut segments = Vec::with_capacity(3);
        if ramp_time > 0.0 {
            segments.push(Segment::ramp(anchor, target, ramp_time));
        }
        if hold_time > 0.0 {
            segments.push(Segment::hold(target, hold_time));
        }
        if ramp_time > 0.0 {
            segments.push(Segment::ramp(target, anchor, ramp_time));
        }
        Self::new(segments)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn shortest_segment(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.duration)
            .fold(f64::INFINITY, f64::min)
    }

    /// Start time of every segment.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut t = 0.0;
        self.segments
            .iter()
            .map(|s| {
                let start = t;
                t += s.duration;
                start
            })
            .collect()
    }

    /// Piecewise-linear flux at time `t` (µs).
    pub fn flux_at(&self, t: f64) -> Result<f64> {
        let total = self.total_duration();
        if !(0.0..=total).contains(&t) {
            return Err(Error::TimeOutOfRange { time: t, total });
        }
        let mut start = 0.0;
        for s in &self.segments {
            let end = start + s.duration;
            if t < end {
                return Ok(s.flux_at(t - start));
            }
            if t == end {
                return Ok(s.flux_end);
            }
            start = end;
        }
        Ok(self.segments[self.segments.len() - 1].flux_end)
    }
}
