//! SVG rendering of an attractor point cloud with its hull overlay.

use std::fmt::Write as _;

use crate::error::Result;
use crate::geometry::ComplexValue;
use crate::hull::HullResult;
use crate::ifs::IfsSystem;

const CANVAS: f64 = 800.0;

/// Smallest `L` with `n^L ≥ 4096`, kept to `n^L ≤ 200000`.
pub fn default_level(n: usize) -> u32 {
    if n <= 1 {
        return 0;
    }
    let mut level = 0u32;
    let mut count = 1usize;
    while count < 4096 && count * n <= 200_000 {
        count *= n;
        level += 1;
    }
    level
}

struct Frame {
    min: ComplexValue,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(points: &[ComplexValue]) -> Self {
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = ComplexValue::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = ComplexValue::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
        let pad = 0.05 * span;
        let min = lo - ComplexValue::new(pad, pad);
        let scale = CANVAS / (span + 2.0 * pad);
        let height = (hi.im - lo.im + 2.0 * pad) * scale;
        Frame { min, scale, height }
    }

    /// Plane to canvas, with the imaginary axis pointing up.
    fn map(&self, z: ComplexValue) -> (f64, f64) {
        (
            (z.re - self.min.re) * self.scale,
            self.height - (z.im - self.min.im) * self.scale,
        )
    }
}

/// Renders `{T_a(p_seed): |a| = level}` with the hull polygon, fixed points
/// (red), first cross-iterates `T_j(p_k)` (magenta), the principal extremal
/// point (blue), its cycle (red rings) and the line through it perpendicular
/// to the target (blue).
pub fn render_svg(
    ifs: &IfsSystem,
    hull: &HullResult,
    level: u32,
    seed: usize,
    cap: usize,
) -> Result<String> {
    let cloud = ifs.point_cloud(seed, level, cap)?;
    let fixed = ifs.fixed_points();
    let mut frame_pts = cloud.clone();
    frame_pts.extend(hull.points());
    frame_pts.extend(&fixed);
    let frame = Frame::new(&frame_pts);
    let dot = 0.004 * CANVAS;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = CANVAS,
        h = frame.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let mut d = String::new();
    for &p in &cloud {
        let (x, y) = frame.map(p);
        let _ = write!(d, "M{x:.2} {y:.2}h0");
    }
    let _ = writeln!(
        s,
        r#"<path class="cloud" d="{d}" stroke="black" stroke-width="{dot:.2}" stroke-linecap="round" fill="none"/>"#
    );

    let poly: Vec<String> = hull
        .points()
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"<polygon class="hull" points="{}" fill="none" stroke="green" stroke-width="1.5"/>"#,
        poly.join(" ")
    );

    for (j, map) in ifs.maps().iter().enumerate() {
        for (k, &p) in fixed.iter().enumerate() {
            if j != k {
                let (x, y) = frame.map(map.apply(p));
                let _ = writeln!(
                    s,
                    r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.2}" fill="magenta"/>"#,
                    1.5 * dot
                );
            }
        }
    }
    for &p in &fixed {
        let (x, y) = frame.map(p);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.2}" fill="red"/>"#,
            1.5 * dot
        );
    }

    if let Some(principal) = &hull.principal {
        if let Some(form) = &principal.form {
            for (_, q) in ifs.cycle_of(form.period())? {
                let (x, y) = frame.map(ifs.apply(form.prefix(), q)?);
                let _ = writeln!(
                    s,
                    r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.2}" fill="none" stroke="red" stroke-width="1"/>"#,
                    3.0 * dot
                );
            }
        }
        if let Some(tau) = hull.target_used {
            let along = tau.direction() * ComplexValue::new(0.0, 1.0) / tau.norm();
            let reach = 2.0 * CANVAS / frame.scale;
            let (x1, y1) = frame.map(principal.point - along * reach);
            let (x2, y2) = frame.map(principal.point + along * reach);
            let _ = writeln!(
                s,
                r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="blue" stroke-width="1"/>"#
            );
        }
        let (x, y) = frame.map(principal.point);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.2}" fill="blue"/>"#,
            2.0 * dot
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
