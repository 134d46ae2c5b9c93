//! SVG rendering of a curve sweep over the second image.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Vector2;
use posecond_core::curves::{CurveSweep, Window};

use crate::error::Result;
use crate::formats::write_file;

fn inside(w: &Window, p: &Vector2<f64>) -> bool {
    p.x >= w.u_min && p.x <= w.u_max && p.y >= w.v_min && p.y <= w.v_max
}

/// Curve polylines in red, anchor points in green, the target point as a red
/// dot and the window boundary. Points outside the window are skipped.
pub fn svg_string(sweep: &CurveSweep, anchors: &[Vector2<f64>], target: Option<&Vector2<f64>>, window: &Window) -> String {
    let (w, h) = (window.u_max - window.u_min, window.v_max - window.v_min);
    let r = 0.006 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        window.u_min, window.v_min, w, h
    );
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
        window.u_min,
        window.v_min,
        w,
        h,
        r / 3.0
    );
    for seg in &sweep.segments {
        let pts: Vec<&Vector2<f64>> = seg.iter().filter(|p| inside(window, p)).collect();
        if pts.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, p.x, p.y);
        }
        let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="red" stroke-width="{}"/>"#, r / 2.0);
    }
    for p in anchors.iter().filter(|p| inside(window, p)) {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{r}" fill="green"/>"#, p.x, p.y);
    }
    if let Some(p) = target.filter(|p| inside(window, p)) {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{r}" fill="red"/>"#, p.x, p.y);
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(
    sweep: &CurveSweep,
    anchors: &[Vector2<f64>],
    target: Option<&Vector2<f64>>,
    window: &Window,
    path: &Path,
) -> Result<()> {
    write_file(path, &svg_string(sweep, anchors, target, window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use posecond_core::curves::{assemble, CurveSlice};

    fn window() -> Window {
        Window::new(0.0, 640.0, 0.0, 480.0, 1.0)
    }

    fn numbers_in(s: &str, attr: &str) -> Vec<f64> {
        s.match_indices(&format!("{attr}=\"")).map(|(i, _)| {
            let rest = &s[i + attr.len() + 2..];
            rest[..rest.find('"').unwrap()].parse().unwrap()
        })
        .collect()
    }

    #[test]
    fn empty_sweep_has_only_the_boundary() {
        let s = svg_string(&CurveSweep::default(), &[], None, &window());
        assert_eq!(s.matches("<rect").count(), 1);
        assert_eq!(s.matches("<path").count(), 0);
        assert!(s.contains(r#"viewBox="0 0 640 480""#));
    }

    #[test]
    fn one_branch_is_one_path_inside_the_view() {
        let results = (0..5)
            .map(|k| Ok(CurveSlice { u: 100.0 + k as f64, roots: vec![200.0 + 0.5 * k as f64], residuals: vec![0.0] }))
            .collect();
        let sweep = assemble(results, 3.0);
        let anchors = [Vector2::new(10.0, 20.0), Vector2::new(700.0, 20.0)];
        let s = svg_string(&sweep, &anchors, Some(&Vector2::new(320.0, 240.0)), &window());
        assert_eq!(s.matches("<path").count(), 1);
        assert_eq!(s.matches(r#"fill="green""#).count(), 1);
        for x in numbers_in(&s, "cx") {
            assert!((0.0..=640.0).contains(&x));
        }
        for y in numbers_in(&s, "cy") {
            assert!((0.0..=480.0).contains(&y));
        }
        let d = &s[s.find("d=\"").unwrap() + 3..];
        let d = &d[..d.find('"').unwrap()];
        let nums: Vec<f64> = d.split(|c: char| c == 'M' || c == 'L' || c == ' ').filter(|t| !t.is_empty()).map(|t| t.parse().unwrap()).collect();
        for pair in nums.chunks(2) {
            assert!((0.0..=640.0).contains(&pair[0]) && (0.0..=480.0).contains(&pair[1]));
        }
    }
}
