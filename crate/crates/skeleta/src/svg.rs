//! Static SVG drawings for one-dimensional complexes (cycles and
//! chains) and plane tropical curves. Presentation only; nothing reads
//! these files back.

use crate::complexes::CellComplex;
use crate::tropicalize::TropCurve;

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" width=\"{w}\" height=\"{h}\">\n"
    )
}

/// Draws the glued point set of a one-dimensional complex: maximal
/// points (vertices) as labeled dots and minimal points (edges) as lines
/// between the vertices they specialize into. A cycle is laid out on a
/// circle, a chain on a line.
pub fn complex_svg(complex: &CellComplex) -> String {
    let n = complex.point_count();
    let is_vertex: Vec<bool> = (0..n)
        .map(|p| complex.specialization.iter().any(|&(_, j)| j == p))
        .collect();
    let vertices: Vec<usize> = (0..n).filter(|&p| is_vertex[p]).collect();
    let edges: Vec<usize> = (0..n).filter(|&p| !is_vertex[p]).collect();
    let endpoints: Vec<Vec<usize>> = edges
        .iter()
        .map(|&e| {
            complex
                .specialization
                .iter()
                .filter(|&&(i, _)| i == e)
                .map(|&(_, j)| j)
                .collect()
        })
        .collect();
    // order vertices by walking edges; detect chain (a vertex of degree 1)
    let degree = |v: usize| endpoints.iter().filter(|ends| ends.contains(&v)).count();
    let start = vertices
        .iter()
        .copied()
        .find(|&v| degree(v) == 1)
        .or_else(|| vertices.first().copied());
    let mut order: Vec<usize> = Vec::new();
    let mut used_edges: Vec<usize> = Vec::new();
    if let Some(start) = start {
        let mut current = start;
        order.push(current);
        loop {
            let next_edge = edges.iter().enumerate().find(|(ei, _)| {
                !used_edges.contains(ei) && endpoints[*ei].contains(&current)
            });
            let Some((ei, _)) = next_edge else { break };
            used_edges.push(ei);
            let far = endpoints[ei]
                .iter()
                .copied()
                .find(|&v| v != current)
                .unwrap_or(current);
            if order.contains(&far) {
                break;
            }
            order.push(far);
            current = far;
        }
    }
    let closed = start.is_some_and(|s| degree(s) != 1);
    let (w, h) = (420.0, 420.0);
    let mut out = header(w, h);
    let m = order.len().max(1);
    let pos = |k: usize| -> (f64, f64) {
        if closed {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (m as f64);
            (210.0 + 150.0 * theta.cos(), 210.0 - 150.0 * theta.sin())
        } else {
            let x = 40.0 + (w - 80.0) * (k as f64) / ((m.max(2) - 1) as f64);
            (x, 210.0)
        }
    };
    // edges
    for (k, &v) in order.iter().enumerate() {
        let next = if k + 1 < m {
            Some(k + 1)
        } else if closed {
            Some(0)
        } else {
            None
        };
        if let Some(nk) = next {
            let (x1, y1) = pos(k);
            let (x2, y2) = pos(nk);
            // find the edge label between v and order[nk]
            let label = edges
                .iter()
                .enumerate()
                .find(|(ei, _)| endpoints[*ei].contains(&v) && endpoints[*ei].contains(&order[nk]))
                .map(|(_, &e)| complex.global_points[e].clone())
                .unwrap_or_default();
            out.push_str(&format!(
                "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"#444\" stroke-width=\"2\"/>\n"
            ));
            let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            out.push_str(&format!(
                "  <text x=\"{mx:.1}\" y=\"{:.1}\" font-size=\"11\" fill=\"#888\" text-anchor=\"middle\">{label}</text>\n",
                my - 6.0
            ));
        }
    }
    // vertices
    for (k, &v) in order.iter().enumerate() {
        let (x, y) = pos(k);
        out.push_str(&format!(
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"5\" fill=\"#1a6\"/>\n"
        ));
        out.push_str(&format!(
            "  <text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            y - 10.0,
            complex.global_points[v]
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn approx(r: &crate::geometry::Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Draws a plane tropical curve clipped to a window.
pub fn curve_svg(curve: &TropCurve, window: (f64, f64, f64, f64)) -> String {
    let (x0, y0, x1, y1) = window;
    let (w, h) = (420.0, 420.0);
    let sx = |x: f64| 20.0 + (w - 40.0) * (x - x0) / (x1 - x0);
    let sy = |y: f64| h - 20.0 - (h - 40.0) * (y - y0) / (y1 - y0);
    let mut out = header(w, h);
    out.push_str(&format!(
        "  <rect x=\"20\" y=\"20\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#ccc\"/>\n",
        w - 40.0,
        h - 40.0
    ));
    for (a, b) in &curve.geometry.segments {
        out.push_str(&format!(
            "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#16c\" stroke-width=\"2\"/>\n",
            sx(approx(&a[0])),
            sy(approx(&a[1])),
            sx(approx(&b[0])),
            sy(approx(&b[1]))
        ));
    }
    for (o, d) in &curve.geometry.rays {
        // extend the ray to the window boundary
        let (ox, oy) = (approx(&o[0]), approx(&o[1]));
        let (dx, dy) = (d[0] as f64, d[1] as f64);
        let mut t = f64::INFINITY;
        if dx > 0.0 {
            t = t.min((x1 - ox) / dx);
        }
        if dx < 0.0 {
            t = t.min((x0 - ox) / dx);
        }
        if dy > 0.0 {
            t = t.min((y1 - oy) / dy);
        }
        if dy < 0.0 {
            t = t.min((y0 - oy) / dy);
        }
        if !t.is_finite() {
            t = 0.0;
        }
        out.push_str(&format!(
            "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#16c\" stroke-width=\"2\"/>\n",
            sx(ox),
            sy(oy),
            sx(ox + t * dx),
            sy(oy + t * dy)
        ));
    }
    for v in &curve.geometry.vertices {
        out.push_str(&format!(
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"#c22\"/>\n",
            sx(approx(&v[0])),
            sy(approx(&v[1]))
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_drawing_has_labeled_vertices() {
        let complex = crate::complexes::elliptic_ks_skeleton(4).unwrap();
        let svg = complex_svg(&complex);
        assert!(svg.starts_with("<svg"));
        for i in 0..4 {
            assert!(svg.contains(&format!(">v{i}<")), "missing vertex label v{i}");
        }
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<line").count(), 4);
    }
}
