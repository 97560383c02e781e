//! Text and SVG drawings of planar images.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::DigitalImage;

fn bounds(x: &DigitalImage) -> Result<(i64, i64, i64, i64)> {
    if x.dimension() != 2 {
        return Err(Error::DimensionMismatch {
            point: x.point(0).clone(),
            expected: 2,
            found: x.dimension(),
        });
    }
    let xs = x.points().iter().map(|p| p.coord(0));
    let ys = x.points().iter().map(|p| p.coord(1));
    Ok((
        xs.clone().min().unwrap(),
        xs.max().unwrap(),
        ys.clone().min().unwrap(),
        ys.max().unwrap(),
    ))
}

/// Character grid over the bounding box: `#` for points, `.` for holes.
/// The first coordinate runs left to right, the second bottom to top, so
/// the bottom-left character is the box's minimum corner.
pub fn render_2d(x: &DigitalImage) -> Result<String> {
    let (x0, x1, y0, y1) = bounds(x)?;
    let mut out = String::new();
    for y in (y0..=y1).rev() {
        for col in x0..=x1 {
            out.push(if x.contains(&vec![col, y].into()) { '#' } else { '.' });
        }
        out.push('\n');
    }
    Ok(out)
}

/// SVG drawing with one circle per point and one line per edge.
pub fn render_svg(x: &DigitalImage) -> Result<String> {
    const CELL: i64 = 24;
    const PAD: i64 = 16;
    let (x0, x1, y0, y1) = bounds(x)?;
    let width = (x1 - x0) * CELL + 2 * PAD;
    let height = (y1 - y0) * CELL + 2 * PAD;
    let px = |c: i64| (c - x0) * CELL + PAD;
    let py = |c: i64| (y1 - c) * CELL + PAD;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    for (p, q) in x.edges() {
        let (a, b) = (x.point(p), x.point(q));
        writeln!(
            out,
            r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="2"/>"#,
            px(a.coord(0)),
            py(a.coord(1)),
            px(b.coord(0)),
            py(b.coord(1))
        )
        .unwrap();
    }
    for p in x.points() {
        writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="5" fill="black"/>"#,
            px(p.coord(0)),
            py(p.coord(1))
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{digital_box, interval, simple_closed_curve_in_plane};

    #[test]
    fn grids() {
        let b = digital_box(&[(0, 1), (0, 1)], 1).unwrap();
        assert_eq!(render_2d(&b).unwrap(), "##\n##\n");
        let ring = simple_closed_curve_in_plane(&[(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)], 1)
            .unwrap();
        assert_eq!(render_2d(&ring).unwrap(), "###\n#.#\n###\n");
        let l = simple_closed_curve_in_plane(&[(0, 0), (1, 0), (0, 1)], 1).unwrap();
        assert_eq!(render_2d(&l).unwrap(), "#.\n##\n");
        assert!(render_2d(&interval(0, 3).unwrap()).is_err());
    }

    #[test]
    fn svg() {
        let b = digital_box(&[(0, 1), (0, 1)], 2).unwrap();
        let s = render_svg(&b).unwrap();
        assert_eq!(s.matches("<circle").count(), 4);
        assert_eq!(s.matches("<line").count(), 6);
        assert!(render_svg(&interval(0, 1).unwrap()).is_err());
    }
}
