//! SVG rendering of a maximal star of empty triangles (planar only).
//!
//! Output is deterministic: the point bounding box is fitted to an 800x800
//! viewport with a 5% margin and all coordinates use shortest round-trip
//! formatting, so renders are byte-identical across runs.

use crate::geom::{PointSet, SimplexKey};
use crate::{Error, Result};
use std::fmt::Write as _;

const VIEW: f64 = 800.0;
const MARGIN: f64 = 0.05;

/// Render all points, the witness base tuple, and one outline per spike
/// triangle of its star. The caption embeds n, k, and the degree.
pub fn render_star(
    ps: &PointSet,
    witness: &SimplexKey,
    star: &[SimplexKey],
    degree: u64,
) -> Result<String> {
    if ps.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: ps.dim(),
        });
    }
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    for p in ps.iter() {
        for c in 0..2 {
            lo[c] = lo[c].min(p[c]);
            hi[c] = hi[c].max(p[c]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let usable = VIEW * (1.0 - 2.0 * MARGIN);
    let scale = usable / span;
    let offset = VIEW * MARGIN;
    // y flips: file coordinates go up, SVG goes down.
    let tx = |p: &[f64]| -> (f64, f64) {
        (
            offset + (p[0] - lo[0]) * scale,
            VIEW - offset - (p[1] - lo[1]) * scale,
        )
    };

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{VIEW}\" height=\"{VIEW}\" viewBox=\"0 0 {VIEW} {VIEW}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"{VIEW}\" height=\"{VIEW}\" fill=\"white\"/>").unwrap();

    for key in star {
        let idx = key.indices();
        let mut pts = String::new();
        for &i in idx {
            let (x, y) = tx(ps.point(i as usize));
            write!(pts, "{x},{y} ").unwrap();
        }
        writeln!(
            out,
            "<polygon points=\"{}\" fill=\"none\" stroke=\"#4477aa\" stroke-width=\"1\"/>",
            pts.trim_end()
        )
        .unwrap();
    }

    for (i, p) in ps.iter().enumerate() {
        let (x, y) = tx(p);
        let in_witness = witness.contains(i as u32);
        let (r, fill) = if in_witness { (6.0, "#cc3311") } else { (3.0, "#222222") };
        writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"{fill}\"/>").unwrap();
    }
    if witness.len() == 2 {
        let (x1, y1) = tx(ps.point(witness.indices()[0] as usize));
        let (x2, y2) = tx(ps.point(witness.indices()[1] as usize));
        writeln!(
            out,
            "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#cc3311\" stroke-width=\"3\"/>"
        )
        .unwrap();
    }
    writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"18\">n={} k={} degree={}</text>",
        offset,
        VIEW - 12.0,
        ps.len(),
        witness.len(),
        degree
    )
    .unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
