//! Convex-body models: membership, volume, diameter, bounding radius,
//! uniform sampling, and hyperplane-section measure.
//!
//! All bodies are centered at the origin (polygons are recentered at their
//! area centroid on construction), which is what the hyperplane
//! parametrization by origin distance assumes.

use crate::geom::predicates::orient2d_sign;
use crate::geom::PointSet;
use crate::integrals::{kappa, Hyperplane};
use crate::rng::RngStream;
use crate::{Error, Result};
use std::fmt;
use std::path::Path;

/// Rejection cap per sampled point (polygon path); hitting it signals a
/// misconfigured body rather than bad luck.
const POINT_RETRY_CAP: usize = 1000;
/// Whole-draw redraw cap when a sampled set fails the distinctness check.
const DRAW_RETRY_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    /// Euclidean ball of the given radius in d dimensions.
    Ball { dim: usize, radius: f64 },
    /// Axis-aligned cube of the given side, centered at the origin.
    Cube { dim: usize, side: f64 },
    /// Planar ellipse with semi-axes a, b.
    Ellipse { a: f64, b: f64 },
    /// Strictly convex CCW polygon, recentered at its area centroid.
    Polygon(PolygonBody),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolygonBody {
    verts: Vec<[f64; 2]>,
    area: f64,
    diameter: f64,
    bounding_radius: f64,
}

impl PolygonBody {
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.verts
    }
}

impl ConvexBody {
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("ball dimension must be >= 2"));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::invalid("ball radius must be positive"));
        }
        Ok(ConvexBody::Ball { dim, radius })
    }

    pub fn cube(dim: usize, side: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("cube dimension must be >= 2"));
        }
        if !side.is_finite() || side <= 0.0 {
            return Err(Error::invalid("cube side must be positive"));
        }
        Ok(ConvexBody::Cube { dim, side })
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a <= 0.0 || b <= 0.0 {
            return Err(Error::invalid("ellipse semi-axes must be positive"));
        }
        Ok(ConvexBody::Ellipse { a, b })
    }

    /// Vertices in CCW order, strictly convex. They are recentered at the
    /// polygon's area centroid.
    pub fn polygon(verts: Vec<[f64; 2]>) -> Result<Self> {
        if verts.len() < 3 {
            return Err(Error::invalid("polygon needs at least 3 vertices"));
        }
        if verts.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let k = verts.len();
        let mut twice_area = 0.0;
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..k {
            let a = verts[i];
            let b = verts[(i + 1) % k];
            let cross = a[0] * b[1] - a[1] * b[0];
            twice_area += cross;
            cx += (a[0] + b[0]) * cross;
            cy += (a[1] + b[1]) * cross;
        }
        if twice_area.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::invalid("polygon vertices must be in CCW order"));
        }
        let area = twice_area / 2.0;
        cx /= 6.0 * area;
        cy /= 6.0 * area;
        let centered: Vec<[f64; 2]> = verts.iter().map(|v| [v[0] - cx, v[1] - cy]).collect();
        // Strict convexity on the stored (recentered) vertices.
        for i in 0..k {
            let a = centered[i];
            let b = centered[(i + 1) % k];
            let c = centered[(i + 2) % k];
            if orient2d_sign(&a, &b, &c) != 1 {
                return Err(Error::invalid(format!(
                    "polygon not strictly convex CCW at vertex {}",
                    (i + 1) % k
                )));
            }
        }
        let mut diameter = 0.0f64;
        let mut bounding_radius = 0.0f64;
        for i in 0..k {
            bounding_radius = bounding_radius.max(centered[i][0].hypot(centered[i][1]));
            for j in i + 1..k {
                let dx = centered[i][0] - centered[j][0];
                let dy = centered[i][1] - centered[j][1];
                diameter = diameter.max(dx.hypot(dy));
            }
        }
        Ok(ConvexBody::Polygon(PolygonBody {
            verts: centered,
            area,
            diameter,
            bounding_radius,
        }))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Ball { dim, .. } | ConvexBody::Cube { dim, .. } => *dim,
            ConvexBody::Ellipse { .. } | ConvexBody::Polygon(_) => 2,
        }
    }

    /// Lebesgue volume λ_d(K).
    pub fn volume(&self) -> f64 {
        match self {
            ConvexBody::Ball { dim, radius } => kappa(*dim).unwrap() * radius.powi(*dim as i32),
            ConvexBody::Cube { dim, side } => side.powi(*dim as i32),
            ConvexBody::Ellipse { a, b } => std::f64::consts::PI * a * b,
            ConvexBody::Polygon(p) => p.area,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => 2.0 * radius,
            ConvexBody::Cube { dim, side } => side * (*dim as f64).sqrt(),
            ConvexBody::Ellipse { a, b } => 2.0 * a.max(*b),
            ConvexBody::Polygon(p) => p.diameter,
        }
    }

    /// Radius of the smallest known origin-centered enclosing ball.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => *radius,
            ConvexBody::Cube { dim, side } => side / 2.0 * (*dim as f64).sqrt(),
            ConvexBody::Ellipse { a, b } => a.max(*b),
            ConvexBody::Polygon(p) => p.bounding_radius,
        }
    }

    /// Closed-body membership; exact for the given f64 coordinates.
    pub fn contains(&self, p: &[f64]) -> Result<bool> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        Ok(match self {
            ConvexBody::Ball { radius, .. } => {
                p.iter().map(|c| c * c).sum::<f64>() <= radius * radius
            }
            ConvexBody::Cube { side, .. } => p.iter().all(|c| c.abs() <= side / 2.0),
            ConvexBody::Ellipse { a, b } => {
                let (x, y) = (p[0] / a, p[1] / b);
                x * x + y * y <= 1.0
            }
            ConvexBody::Polygon(poly) => {
                let k = poly.verts.len();
                (0..k).all(|i| {
                    orient2d_sign(&poly.verts[i], &poly.verts[(i + 1) % k], p) >= 0
                })
            }
        })
    }

    /// One uniform point from the body.
    pub fn sample_point(&self, rng: &mut RngStream) -> Result<Vec<f64>> {
        match self {
            ConvexBody::Ball { dim, radius } => {
                Ok(sample_ball(*dim, *radius, rng))
            }
            ConvexBody::Cube { dim, side } => {
                Ok((0..*dim).map(|_| (rng.uniform() - 0.5) * side).collect())
            }
            ConvexBody::Ellipse { a, b } => {
                let disk = sample_ball(2, 1.0, rng);
                let mut p = vec![disk[0] * a, disk[1] * b];
                // Rounding can land a hair outside; nudge inward.
                let mut guard = 0;
                while !self.contains(&p)? {
                    p.iter_mut().for_each(|c| *c *= 1.0 - 4.0 * f64::EPSILON);
                    guard += 1;
                    if guard > 8 {
                        return Err(Error::RetryCapExceeded(guard));
                    }
                }
                Ok(p)
            }
            ConvexBody::Polygon(poly) => {
                let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
                for v in &poly.verts {
                    for c in 0..2 {
                        lo[c] = lo[c].min(v[c]);
                        hi[c] = hi[c].max(v[c]);
                    }
                }
                for _ in 0..POINT_RETRY_CAP {
                    let p = vec![
                        rng.uniform_in(lo[0], hi[0]),
                        rng.uniform_in(lo[1], hi[1]),
                    ];
                    if self.contains(&p)? {
                        return Ok(p);
                    }
                }
                Err(Error::RetryCapExceeded(POINT_RETRY_CAP))
            }
        }
    }

    /// n independent uniform points; the whole draw is repeated if the
    /// distinctness check fails (astronomically unlikely, but exact).
    pub fn sample_uniform(&self, rng: &mut RngStream, n: usize) -> Result<PointSet> {
        if n < 1 {
            return Err(Error::invalid("sample count must be >= 1"));
        }
        for _ in 0..DRAW_RETRY_CAP {
            let mut coords = Vec::with_capacity(n * self.dim());
            for _ in 0..n {
                coords.extend_from_slice(&self.sample_point(rng)?);
            }
            let ps = PointSet::from_flat(self.dim(), coords)?;
            if ps.check_distinct().is_ok() {
                return Ok(ps);
            }
        }
        Err(Error::RetryCapExceeded(DRAW_RETRY_CAP))
    }

    /// (d-1)-volume of the section K ∩ H.
    pub fn section_measure(&self, h: &Hyperplane) -> Result<f64> {
        if h.normal().len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: h.normal().len(),
            });
        }
        let t = h.offset();
        Ok(match self {
            ConvexBody::Ball { dim, radius } => {
                if t >= *radius {
                    0.0
                } else {
                    kappa(dim - 1).unwrap() * (radius * radius - t * t).powf((*dim as f64 - 1.0) / 2.0)
                }
            }
            ConvexBody::Ellipse { a, b } => {
                let u = h.normal();
                let w2 = a * a * u[0] * u[0] + b * b * u[1] * u[1];
                if t * t >= w2 {
                    0.0
                } else {
                    2.0 * a * b * (w2 - t * t).sqrt() / w2
                }
            }
            ConvexBody::Cube { dim: 2, side } => {
                let s = side / 2.0;
                let corners = [[-s, -s], [s, -s], [s, s], [-s, s]];
                polygon_chord(&corners, h.normal(), t)
            }
            ConvexBody::Cube { dim: 3, side } => cube3_section(*side, h.normal(), t),
            ConvexBody::Cube { .. } => {
                return Err(Error::invalid(
                    "cube section measure implemented for d <= 3 only",
                ))
            }
            ConvexBody::Polygon(poly) => polygon_chord(&poly.verts, h.normal(), t),
        })
    }

    /// The body scaled by c > 0 about the origin.
    pub fn scale(&self, c: f64) -> Result<ConvexBody> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::invalid("scale factor must be positive"));
        }
        Ok(match self {
            ConvexBody::Ball { dim, radius } => ConvexBody::Ball {
                dim: *dim,
                radius: radius * c,
            },
            ConvexBody::Cube { dim, side } => ConvexBody::Cube {
                dim: *dim,
                side: side * c,
            },
            ConvexBody::Ellipse { a, b } => ConvexBody::Ellipse { a: a * c, b: b * c },
            ConvexBody::Polygon(p) => {
                let verts: Vec<[f64; 2]> =
                    p.verts.iter().map(|v| [v[0] * c, v[1] * c]).collect();
                ConvexBody::polygon(verts)?
            }
        })
    }

    /// Parse a CLI body specifier: `disk`, `square`, `ball<d>`, `cube<d>`,
    /// `ellipse:a,b` (also `axb`), `polygon:<path>`.
    pub fn parse_spec(spec: &str) -> Result<ConvexBody> {
        match spec {
            "disk" => return ConvexBody::ball(2, 1.0),
            "square" => return ConvexBody::cube(2, 1.0),
            _ => {}
        }
        if let Some(rest) = spec.strip_prefix("ball") {
            let d: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad ball dimension '{rest}'")))?;
            return ConvexBody::ball(d, 1.0);
        }
        if let Some(rest) = spec.strip_prefix("cube") {
            let d: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad cube dimension '{rest}'")))?;
            return ConvexBody::cube(d, 1.0);
        }
        if let Some(rest) = spec.strip_prefix("ellipse:") {
            let parts: Vec<&str> = rest.split([',', 'x']).collect();
            if parts.len() != 2 {
                return Err(Error::Parse("ellipse spec must be ellipse:a,b".into()));
            }
            let a: f64 = parts[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad ellipse axis '{}'", parts[0])))?;
            let b: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad ellipse axis '{}'", parts[1])))?;
            return ConvexBody::ellipse(a, b);
        }
        if let Some(path) = spec.strip_prefix("polygon:") {
            return load_polygon(Path::new(path));
        }
        Err(Error::Parse(format!("unknown body spec '{spec}'")))
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexBody::Ball { dim: 2, radius } if *radius == 1.0 => write!(f, "disk"),
            ConvexBody::Ball { dim, radius } if *radius == 1.0 => write!(f, "ball{dim}"),
            ConvexBody::Ball { dim, radius } => write!(f, "ball{dim}:r={radius}"),
            ConvexBody::Cube { dim: 2, side } if *side == 1.0 => write!(f, "square"),
            ConvexBody::Cube { dim, side } if *side == 1.0 => write!(f, "cube{dim}"),
            ConvexBody::Cube { dim, side } => write!(f, "cube{dim}:s={side}"),
            ConvexBody::Ellipse { a, b } => write!(f, "ellipse:{a}x{b}"),
            ConvexBody::Polygon(p) => write!(f, "polygon:{}verts", p.verts.len()),
        }
    }
}

fn sample_ball(dim: usize, radius: f64, rng: &mut RngStream) -> Vec<f64> {
    loop {
        let mut g = vec![0.0; dim];
        rng.fill_normal(&mut g);
        let norm2: f64 = g.iter().map(|c| c * c).sum();
        if norm2 == 0.0 {
            continue;
        }
        let norm = norm2.sqrt();
        let r = radius * rng.uniform().powf(1.0 / dim as f64);
        let mut p: Vec<f64> = g.iter().map(|c| c / norm * r).collect();
        // Rounding guard: keep the invariant |p| <= radius exact.
        let mut guard = 0;
        while p.iter().map(|c| c * c).sum::<f64>() > radius * radius {
            p.iter_mut().for_each(|c| *c *= 1.0 - 4.0 * f64::EPSILON);
            guard += 1;
            if guard > 8 {
                break;
            }
        }
        return p;
    }
}

/// Chord length cut by the line <x,u> = t from a strictly convex CCW polygon.
fn polygon_chord(verts: &[[f64; 2]], u: &[f64], t: f64) -> f64 {
    let k = verts.len();
    let s: Vec<f64> = verts.iter().map(|v| v[0] * u[0] + v[1] * u[1] - t).collect();
    let mut hits: Vec<[f64; 2]> = Vec::with_capacity(4);
    for i in 0..k {
        let j = (i + 1) % k;
        if s[i] == 0.0 {
            hits.push(verts[i]);
        }
        if (s[i] > 0.0 && s[j] < 0.0) || (s[i] < 0.0 && s[j] > 0.0) {
            let f = s[i] / (s[i] - s[j]);
            hits.push([
                verts[i][0] + f * (verts[j][0] - verts[i][0]),
                verts[i][1] + f * (verts[j][1] - verts[i][1]),
            ]);
        }
    }
    let mut best = 0.0f64;
    for a in 0..hits.len() {
        for b in a + 1..hits.len() {
            let dx = hits[a][0] - hits[b][0];
            let dy = hits[a][1] - hits[b][1];
            best = best.max(dx.hypot(dy));
        }
    }
    best
}

/// Area of the plane section of the origin-centered cube of the given side.
fn cube3_section(side: f64, u: &[f64], t: f64) -> f64 {
    let s = side / 2.0;
    let corner = |mask: usize| -> [f64; 3] {
        [
            if mask & 1 == 0 { -s } else { s },
            if mask & 2 == 0 { -s } else { s },
            if mask & 4 == 0 { -s } else { s },
        ]
    };
    let sd = |p: &[f64; 3]| p[0] * u[0] + p[1] * u[1] + p[2] * u[2] - t;
    let mut pts: Vec<[f64; 3]> = Vec::new();
    let push = |p: [f64; 3], pts: &mut Vec<[f64; 3]>| {
        if !pts.iter().any(|q| q == &p) {
            pts.push(p);
        }
    };
    for a in 0..8usize {
        for axis in 0..3 {
            let b = a | (1 << axis);
            if b == a || b <= a {
                continue;
            }
            let (pa, pb) = (corner(a), corner(b));
            let (sa, sb) = (sd(&pa), sd(&pb));
            if sa == 0.0 {
                push(pa, &mut pts);
            }
            if sb == 0.0 {
                push(pb, &mut pts);
            }
            if (sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0) {
                let f = sa / (sa - sb);
                push(
                    [
                        pa[0] + f * (pb[0] - pa[0]),
                        pa[1] + f * (pb[1] - pa[1]),
                        pa[2] + f * (pb[2] - pa[2]),
                    ],
                    &mut pts,
                );
            }
        }
    }
    if pts.len() < 3 {
        return 0.0;
    }
    // In-plane orthonormal frame.
    let pick = if u[0].abs() <= u[1].abs() && u[0].abs() <= u[2].abs() {
        [1.0, 0.0, 0.0]
    } else if u[1].abs() <= u[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let cross = |a: &[f64; 3], b: &[f64; 3]| -> [f64; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let mut e1 = cross(&[u[0], u[1], u[2]], &pick);
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|c| *c /= n1);
    let e2 = cross(&[u[0], u[1], u[2]], &e1);
    let proj: Vec<(f64, f64)> = pts
        .iter()
        .map(|p| {
            (
                p[0] * e1[0] + p[1] * e1[1] + p[2] * e1[2],
                p[0] * e2[0] + p[1] * e2[1] + p[2] * e2[2],
            )
        })
        .collect();
    let cx = proj.iter().map(|p| p.0).sum::<f64>() / proj.len() as f64;
    let cy = proj.iter().map(|p| p.1).sum::<f64>() / proj.len() as f64;
    let mut order: Vec<usize> = (0..proj.len()).collect();
    order.sort_by(|&a, &b| {
        let ta = (proj[a].1 - cy).atan2(proj[a].0 - cx);
        let tb = (proj[b].1 - cy).atan2(proj[b].0 - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let mut area2 = 0.0;
    for w in 0..order.len() {
        let (x1, y1) = proj[order[w]];
        let (x2, y2) = proj[order[(w + 1) % order.len()]];
        area2 += x1 * y2 - x2 * y1;
    }
    area2.abs() / 2.0
}

/// Polygon body file: first line `polygon k`, then k CCW vertex lines.
pub fn load_polygon(path: &Path) -> Result<ConvexBody> {
    parse_polygon(&std::fs::read_to_string(path)?)
}

pub fn parse_polygon(text: &str) -> Result<ConvexBody> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty polygon file".into()))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("polygon") {
        return Err(Error::Parse("polygon file must start with 'polygon k'".into()));
    }
    let k: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("polygon file must start with 'polygon k'".into()))?;
    let mut verts = Vec::with_capacity(k);
    for line in lines {
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad vertex coordinate '{t}'")))
            })
            .collect::<Result<_>>()?;
        if vals.len() != 2 {
            return Err(Error::Parse("polygon vertices are 2D".into()));
        }
        verts.push([vals[0], vals[1]]);
    }
    if verts.len() != k {
        return Err(Error::Parse(format!(
            "polygon header says {k} vertices, found {}",
            verts.len()
        )));
    }
    ConvexBody::polygon(verts)
}

pub fn format_polygon(body: &ConvexBody) -> Result<String> {
    let ConvexBody::Polygon(p) = body else {
        return Err(Error::invalid("not a polygon body"));
    };
    let mut out = format!("polygon {}\n", p.verts.len());
    for v in &p.verts {
        out.push_str(&format!("{} {}\n", v[0], v[1]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::Hyperplane;

    fn hp(normal: Vec<f64>, t: f64) -> Hyperplane {
        Hyperplane::new(normal, t).unwrap()
    }

    #[test]
    fn membership_examples() {
        let disk = ConvexBody::ball(2, 1.0).unwrap();
        assert!(disk.contains(&[0.0, 0.0]).unwrap());
        assert!(!disk.contains(&[2.0, 0.0]).unwrap());
        assert!(disk.contains(&[1.0, 0.0]).unwrap());
        // Origin-centered unit square: the corner is on the closed boundary.
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        assert!(sq.contains(&[0.5, 0.5]).unwrap());
        assert!(!sq.contains(&[0.5000001, 0.5]).unwrap());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let b = ConvexBody::ball(3, 1.0).unwrap();
        assert!(b.contains(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn sampling_stays_inside_and_is_deterministic() {
        for body in [
            ConvexBody::ball(2, 1.0).unwrap(),
            ConvexBody::ball(3, 2.0).unwrap(),
            ConvexBody::cube(3, 1.0).unwrap(),
            ConvexBody::ellipse(2.0, 1.0).unwrap(),
            ConvexBody::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.5, 1.5], [1.0, 2.5], [-0.5, 1.0]])
                .unwrap(),
        ] {
            let mut rng = RngStream::new(5, 11);
            let ps = body.sample_uniform(&mut rng, 500).unwrap();
            for p in ps.iter() {
                assert!(body.contains(p).unwrap(), "{body} escaped at {p:?}");
            }
            let mut rng2 = RngStream::new(5, 11);
            let ps2 = body.sample_uniform(&mut rng2, 500).unwrap();
            for (p, q) in ps.iter().zip(ps2.iter()) {
                assert_eq!(p, q);
            }
        }
    }

    #[test]
    fn cube_sampling_mean_near_center() {
        let body = ConvexBody::cube(2, 1.0).unwrap();
        let mut rng = RngStream::new(3, 0);
        let n = 100_000;
        let ps = body.sample_uniform(&mut rng, n).unwrap();
        for c in 0..2 {
            let mean: f64 = ps.iter().map(|p| p[c]).sum::<f64>() / n as f64;
            assert!(mean.abs() < 0.01, "coordinate {c} mean {mean}");
        }
    }

    #[test]
    fn sub_box_hit_rate_matches_volume_ratio() {
        let body = ConvexBody::cube(2, 1.0).unwrap();
        let mut rng = RngStream::new(8, 1);
        let n = 200_000usize;
        let ps = body.sample_uniform(&mut rng, n).unwrap();
        // Sub-box [0, 0.3] x [-0.25, 0.15] inside [-0.5, 0.5]^2.
        let hits = ps
            .iter()
            .filter(|p| p[0] >= 0.0 && p[0] <= 0.3 && p[1] >= -0.25 && p[1] <= 0.15)
            .count();
        let p_true = 0.3 * 0.4;
        let rate = hits as f64 / n as f64;
        let se = (p_true * (1.0 - p_true) / n as f64).sqrt();
        assert!((rate - p_true).abs() <= 4.0 * se, "rate {rate} vs {p_true}");
    }

    #[test]
    fn disk_section_matches_chord_formula() {
        let disk = ConvexBody::ball(2, 1.0).unwrap();
        assert!((disk.section_measure(&hp(vec![1.0, 0.0], 0.0)).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(disk.section_measure(&hp(vec![1.0, 0.0], 1.0)).unwrap(), 0.0);
        for i in 0..20 {
            let t = i as f64 / 20.0;
            let u = [(0.3f64).cos(), (0.3f64).sin()];
            let got = disk.section_measure(&hp(vec![u[0], u[1]], t)).unwrap();
            assert!((got - 2.0 * (1.0 - t * t).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn ball3_great_circle_section() {
        let ball = ConvexBody::ball(3, 1.0).unwrap();
        let got = ball
            .section_measure(&hp(vec![0.0, 0.0, 1.0], 0.0))
            .unwrap();
        assert!((got - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn square_chords() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        // Axis-aligned cut through the center: chord 1.
        assert!((sq.section_measure(&hp(vec![1.0, 0.0], 0.0)).unwrap() - 1.0).abs() < 1e-15);
        // Diagonal cut through the center: chord sqrt(2).
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let got = sq.section_measure(&hp(vec![r, r], 0.0)).unwrap();
        assert!((got - 2.0f64.sqrt()).abs() < 1e-12);
        // Outside.
        assert_eq!(sq.section_measure(&hp(vec![1.0, 0.0], 0.8)).unwrap(), 0.0);
    }

    #[test]
    fn cube3_sections() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        // Axis cut: unit face area.
        let got = cube
            .section_measure(&hp(vec![1.0, 0.0, 0.0], 0.2))
            .unwrap();
        assert!((got - 1.0).abs() < 1e-12);
        // Long-diagonal cut through the center: regular hexagon with side
        // 1/sqrt(2) (edge midpoints), area 3*sqrt(3)/2 * 1/2 = 3*sqrt(3)/4.
        let r = 1.0 / 3.0f64.sqrt();
        let got = cube
            .section_measure(&hp(vec![r, r, r], 0.0))
            .unwrap();
        let hex = 3.0 * 3.0f64.sqrt() / 4.0;
        assert!((got - hex).abs() < 1e-12, "{got} vs {hex}");
    }

    #[test]
    fn ellipse_section_closed_form() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        // Cut along the minor axis direction normal: w = a = 2.
        let got = e.section_measure(&hp(vec![1.0, 0.0], 0.0)).unwrap();
        assert!((got - 2.0).abs() < 1e-12);
        let got = e.section_measure(&hp(vec![0.0, 1.0], 0.0)).unwrap();
        assert!((got - 4.0).abs() < 1e-12);
    }

    #[test]
    fn section_scaling_power() {
        let bodies = [
            ConvexBody::ball(2, 1.0).unwrap(),
            ConvexBody::cube(2, 1.0).unwrap(),
            ConvexBody::ellipse(2.0, 1.0).unwrap(),
            ConvexBody::ball(3, 1.0).unwrap(),
            ConvexBody::cube(3, 1.0).unwrap(),
        ];
        let mut rng = RngStream::new(2, 2);
        for body in bodies {
            let d = body.dim();
            for &c in &[0.5, 2.0] {
                let scaled = body.scale(c).unwrap();
                for _ in 0..20 {
                    let mut u = vec![0.0; d];
                    rng.fill_normal(&mut u);
                    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                    u.iter_mut().for_each(|x| *x /= norm);
                    let t = rng.uniform() * body.bounding_radius();
                    let base = body.section_measure(&hp(u.clone(), t)).unwrap();
                    let big = scaled.section_measure(&hp(u.clone(), c * t)).unwrap();
                    let want = c.powi(d as i32 - 1) * base;
                    assert!(
                        (big - want).abs() <= 1e-9 * want.max(1.0),
                        "{body} c={c}: {big} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn polygon_file_round_trip() {
        let body = ConvexBody::polygon(vec![[0.0, 0.0], [3.0, 0.0], [3.0, 2.0], [0.0, 2.0]])
            .unwrap();
        let text = format_polygon(&body).unwrap();
        let back = parse_polygon(&text).unwrap();
        assert_eq!(body, back);
        assert!((body.volume() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn polygon_rejects_cw_and_nonconvex() {
        assert!(ConvexBody::polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
        assert!(ConvexBody::polygon(vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [1.0, 0.5],
            [1.0, 2.0]
        ])
        .is_err());
    }

    #[test]
    fn body_spec_parsing() {
        assert_eq!(
            ConvexBody::parse_spec("disk").unwrap(),
            ConvexBody::ball(2, 1.0).unwrap()
        );
        assert_eq!(
            ConvexBody::parse_spec("square").unwrap(),
            ConvexBody::cube(2, 1.0).unwrap()
        );
        assert_eq!(
            ConvexBody::parse_spec("ball3").unwrap(),
            ConvexBody::ball(3, 1.0).unwrap()
        );
        assert_eq!(
            ConvexBody::parse_spec("cube3").unwrap(),
            ConvexBody::cube(3, 1.0).unwrap()
        );
        assert_eq!(
            ConvexBody::parse_spec("ellipse:2,1").unwrap(),
            ConvexBody::ellipse(2.0, 1.0).unwrap()
        );
        assert!(ConvexBody::parse_spec("banana").is_err());
    }
}
