//! CSV, SVG and PGM writers. Output is a pure function of the input values.

use std::io::{self, Write};

use crate::diffraction::{DiffractionMap, Peak};
use crate::geom::{bounding_box, Rect, Vec2};
use crate::packing::Packing;
use crate::strip::Pattern;

pub const SVG_GENERATOR_COMMENT: &str =
    concat!("<!-- generated by quasiproj ", env!("CARGO_PKG_VERSION"), " -->");

pub fn write_pattern_csv<W: Write>(w: &mut W, p: &Pattern) -> io::Result<()> {
    let k = p.embedding.k();
    write!(w, "x,y,dperp")?;
    for i in 0..k {
        write!(w, ",lift_{i}")?;
    }
    writeln!(w)?;
    for q in &p.points {
        write!(w, "{:.12},{:.12},{:.12}", q.pos.x, q.pos.y, q.dperp)?;
        for c in &q.lift {
            write!(w, ",{c}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_packing_csv<W: Write>(w: &mut W, q: &Packing) -> io::Result<()> {
    writeln!(w, "x,y,kind,parent,d_seed")?;
    for p in &q.points {
        writeln!(w, "{:.12},{:.12},{},{},{:.12}", p.pos.x, p.pos.y, p.kind.as_str(), p.parent, p.d_seed)?;
    }
    Ok(())
}

pub fn write_peaks_csv<W: Write>(w: &mut W, peaks: &[Peak]) -> io::Result<()> {
    writeln!(w, "qx,qy,intensity")?;
    for p in peaks {
        writeln!(w, "{:.12},{:.12},{:.9}", p.q.x, p.q.y, p.intensity)?;
    }
    Ok(())
}

/// `order,distance,distance_4dp`.
pub fn write_spectrum_csv<W: Write>(w: &mut W, values: &[f64]) -> io::Result<()> {
    writeln!(w, "order,distance,distance_4dp")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(w, "{i},{v:.12},{v:.4}")?;
    }
    Ok(())
}

/// ASCII PGM (P2) of the map, top row at `+qmax`, grey `255·(I/N²)^γ`.
pub fn write_pgm<W: Write>(w: &mut W, map: &DiffractionMap, gamma: f64) -> io::Result<()> {
    let res = map.res;
    let scale = map.peak_scale();
    writeln!(w, "P2")?;
    writeln!(w, "# |F(q)|^2, qmax={} N={} gamma={}", map.qmax, map.npoints, gamma)?;
    writeln!(w, "{res} {res}")?;
    writeln!(w, "255")?;
    for iy in (0..res).rev() {
        let mut line = String::with_capacity(res * 4);
        for ix in 0..res {
            let v = (map.get(ix, iy) / scale).clamp(0.0, 1.0).powf(gamma);
            let g = (255.0 * v).round() as u8;
            if ix > 0 {
                line.push(' ');
            }
            line.push_str(&g.to_string());
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Scatter plot style for [`write_svg`].
#[derive(Debug, Clone, Copy)]
pub struct SvgStyle {
    pub point_radius: f64,
    pub ring_radius: f64,
    /// Output width in pixels; height follows the aspect ratio.
    pub width: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { point_radius: 0.08, ring_radius: 0.25, width: 800.0 }
    }
}

/// Dots at `points`, open rings at `rings`. Plane `y` points up.
pub fn write_svg<W: Write>(
    w: &mut W,
    points: &[Vec2],
    rings: &[Vec2],
    frame: Option<Rect>,
    style: &SvgStyle,
) -> io::Result<()> {
    let pad = style.ring_radius.max(style.point_radius) * 2.0;
    let b = frame
        .or_else(|| bounding_box(points.iter().chain(rings).copied()))
        .unwrap_or(Rect::centered(1.0));
    let (x0, y0) = (b.xmin - pad, b.ymin - pad);
    let (wd, ht) = ((b.xmax - b.xmin) + 2.0 * pad, (b.ymax - b.ymin) + 2.0 * pad);
    let height = style.width * ht / wd;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(w, "{SVG_GENERATOR_COMMENT}")?;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.1}" height="{:.1}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        style.width, height, x0, -(y0 + ht), wd, ht
    )?;
    writeln!(w, r#"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="white"/>"#, x0, -(y0 + ht), wd, ht)?;
    writeln!(w, r#"<g fill="black">"#)?;
    for p in points {
        writeln!(w, r#"<circle cx="{:.6}" cy="{:.6}" r="{}"/>"#, p.x, -p.y, style.point_radius)?;
    }
    writeln!(w, "</g>")?;
    writeln!(w, r#"<g fill="none" stroke="red" stroke-width="{}">"#, style.point_radius * 0.5)?;
    for p in rings {
        writeln!(w, r#"<circle cx="{:.6}" cy="{:.6}" r="{}"/>"#, p.x, -p.y, style.ring_radius)?;
    }
    writeln!(w, "</g>")?;
    writeln!(w, "</svg>")
}
