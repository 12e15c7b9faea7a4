use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Axis-aligned region `[flux_min, flux_max] × [ng_min, ng_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rectangle {
    pub flux_min: f64,
    pub flux_max: f64,
    pub ng_min: f64,
    pub ng_max: f64,
}

impl Rectangle {
    pub fn new(flux: (f64, f64), ng: (f64, f64)) -> Result<Self> {
        let r = Self {
            flux_min: flux.0,
            flux_max: flux.1,
            ng_min: ng.0,
            ng_max: ng.1,
        };
        r.validate()?;
        Ok(r)
    }

    /// Edges ordered and finite. Zero width is allowed.
    pub fn validate(&self) -> Result<()> {
        let all = [self.flux_min, self.flux_max, self.ng_min, self.ng_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("region", "bounds must be finite"));
        }
        if self.flux_min > self.flux_max {
            return Err(Error::invalid("region.flux_min", "exceeds flux_max"));
        }
        if self.ng_min > self.ng_max {
            return Err(Error::invalid("region.ng_min", "exceeds ng_max"));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        (self.flux_max - self.flux_min) * (self.ng_max - self.ng_min)
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.flux_min + self.flux_max),
            0.5 * (self.ng_min + self.ng_max),
        )
    }

    pub fn contains(&self, (flux, ng): (f64, f64)) -> bool {
        (self.flux_min..=self.flux_max).contains(&flux) && (self.ng_min..=self.ng_max).contains(&ng)
    }
}

/// Closed polygon in `(Φ, n_g)` whose edges run parallel to the axes.
/// The first vertex is repeated at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct LoopPath {
    vertices: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for LoopPath {
    type Error = Error;

    fn try_from(v: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<LoopPath> for Vec<(f64, f64)> {
    fn from(p: LoopPath) -> Self {
        p.vertices
    }
}

fn edges_cross(a: ((f64, f64), (f64, f64)), b: ((f64, f64), (f64, f64))) -> bool {
    let vertical = |e: ((f64, f64), (f64, f64))| e.0 .0 == e.1 .0;
    let (v, h) = match (vertical(a), vertical(b)) {
        (true, false) => (a, b),
        (false, true) => (b, a),
        _ => return false,
    };
    let x = v.0 .0;
    let y = h.0 .1;
    let (ylo, yhi) = (v.0 .1.min(v.1 .1), v.0 .1.max(v.1 .1));
    let (xlo, xhi) = (h.0 .0.min(h.1 .0), h.0 .0.max(h.1 .0));
    x > xlo && x < xhi && y > ylo && y < yhi
}

impl LoopPath {
    /// Validates closure, axis alignment and the absence of crossing edges.
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::invalid(
                "path",
                "needs at least three vertices plus the closing one",
            ));
        }
        if vertices
            .iter()
            .any(|(a, b)| !a.is_finite() || !b.is_finite())
        {
            return Err(Error::invalid("path", "vertices must be finite"));
        }
        if vertices[0] != vertices[vertices.len() - 1] {
            return Err(Error::invalid("path", "first and last vertex differ"));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0].0 != w[1].0 && w[0].1 != w[1].1 {
                return Err(Error::invalid(
                    "path",
                    format!("edge {i} is not axis-aligned"),
                ));
            }
        }
        let path = Self { vertices };
        let edges: Vec<_> = path.edges().collect();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if edges_cross(edges[i], edges[j]) {
                    return Err(Error::invalid("path", format!("edges {i} and {j} cross")));
                }
            }
        }
        Ok(path)
    }

    /// Counterclockwise boundary of `r`, starting at its lower-left corner.
    pub fn rectangle(r: &Rectangle) -> Result<Self> {
        r.validate()?;
        Self::new(vec![
            (r.flux_min, r.ng_min),
            (r.flux_max, r.ng_min),
            (r.flux_max, r.ng_max),
            (r.flux_min, r.ng_max),
            (r.flux_min, r.ng_min),
        ])
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges()
            .map(|(a, b)| (b.0 - a.0).abs() + (b.1 - a.1).abs())
            .sum()
    }

    /// Shoelace area, positive for counterclockwise traversal.
    pub fn signed_area(&self) -> f64 {
        0.5 * self
            .edges()
            .map(|(a, b)| a.0 * b.1 - b.0 * a.1)
            .sum::<f64>()
    }

    /// Winding number of the path around `point`.
    pub fn winding_number(&self, (x, y): (f64, f64)) -> i32 {
        self.edges()
            .filter(|(a, b)| a.0 == b.0 && a.0 > x)
            .map(|(a, b)| {
                if a.1 <= y && b.1 > y {
                    1
                } else if b.1 <= y && a.1 > y {
                    -1
                } else {
                    0
                }
            })
            .sum()
    }

    /// Splits the enclosed area into rectangles weighted by winding number.
    pub fn cells(&self) -> Vec<(Rectangle, i32)> {
        let axis = |sel: fn(&(f64, f64)) -> f64| {
            let mut v: Vec<f64> = self.vertices.iter().map(sel).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let xs = axis(|p| p.0);
        let ys = axis(|p| p.1);
        let mut out = Vec::new();
        for xw in xs.windows(2) {
            for yw in ys.windows(2) {
                let cell = Rectangle {
                    flux_min: xw[0],
                    flux_max: xw[1],
                    ng_min: yw[0],
                    ng_max: yw[1],
                };
                let w = self.winding_number(cell.center());
                if w != 0 {
                    out.push((cell, w));
                }
            }
        }
        out
    }

    /// Points along the path, spaced as evenly as the vertices allow, with
    /// every vertex included. The last point repeats the first.
    pub fn sample(&self, n_steps: usize) -> Vec<(f64, f64)> {
        let perimeter = self.perimeter();
        let mut out = vec![self.vertices[0]];
        for (a, b) in self.edges() {
            let len = (b.0 - a.0).abs() + (b.1 - a.1).abs();
            if len == 0.0 {
                continue;
            }
            let n = if perimeter > 0.0 {
                ((n_steps as f64) * len / perimeter).round().max(1.0) as usize
            } else {
                1
            };
            for i in 1..=n {
                let t = i as f64 / n as f64;
                out.push(if i == n {
                    b
                } else {
                    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
                });
            }
        }
        if out.len() == 1 {
            out.push(self.vertices[0]);
        }
        out
    }
}
