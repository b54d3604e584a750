//! Polytope figure export.

use crate::format::sig9;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 48.0;
const LABEL_OFFSET: f64 = 14.0;

/// Label for an edge with cone angle `2π α`.
pub fn angle_label(alpha: f64) -> String {
    if alpha == 1.0 {
        "2π".into()
    } else {
        format!("2π·{}", sig9(alpha))
    }
}

/// SVG 1.1 drawing of the polygon `vertices` (`V_0 .. V_{r+1}`). The rod
/// edges `V_i V_{i+1}` are solid and labelled with `angles[i]`; the edge at
/// infinity `V_{r+1} V_0` is dashed.
pub fn polytope_svg(vertices: &[[f64; 2]], angles: &[f64]) -> String {
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for v in vertices {
        xmin = xmin.min(v[0]);
        xmax = xmax.max(v[0]);
        ymin = ymin.min(v[1]);
        ymax = ymax.max(v[1]);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(f64::MIN_POSITIVE);
    let scale = SIZE / span;
    let width = (xmax - xmin) * scale + 2.0 * MARGIN;
    let height = (ymax - ymin) * scale + 2.0 * MARGIN;
    let map = |v: [f64; 2]| [MARGIN + (v[0] - xmin) * scale, MARGIN + (ymax - v[1]) * scale];
    let pts: Vec<[f64; 2]> = vertices.iter().map(|&v| map(v)).collect();
    let n = pts.len();
    let centroid = [pts.iter().map(|p| p[0]).sum::<f64>() / n as f64, pts.iter().map(|p| p[1]).sum::<f64>() / n as f64];
    let xy = |p: [f64; 2]| format!("{},{}", sig9(p[0]), sig9(p[1]));

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = sig9(width),
        h = sig9(height)
    ));
    let finite: Vec<String> = pts.iter().map(|&p| xy(p)).collect();
    out.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
        finite.join(" ")
    ));
    out.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"2\" stroke-dasharray=\"8,6\"/>\n",
        sig9(pts[n - 1][0]),
        sig9(pts[n - 1][1]),
        sig9(pts[0][0]),
        sig9(pts[0][1])
    ));
    for (i, &alpha) in angles.iter().enumerate().take(n - 1) {
        let (a, b) = (pts[i], pts[i + 1]);
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = dx.hypot(dy).max(f64::MIN_POSITIVE);
        let mut nrm = [dy / len, -dx / len];
        if nrm[0] * (mid[0] - centroid[0]) + nrm[1] * (mid[1] - centroid[1]) < 0.0 {
            nrm = [-nrm[0], -nrm[1]];
        }
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
            sig9(mid[0] + LABEL_OFFSET * nrm[0]),
            sig9(mid[1] + LABEL_OFFSET * nrm[1]),
            angle_label(alpha)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// CSV rows `edge_index,x,y,angle`: vertex `V_i` starts edge `i`, and the
/// last vertex starts the edge at infinity (index `inf`, no angle).
pub fn polytope_csv(vertices: &[[f64; 2]], angles: &[f64]) -> String {
    let mut out = String::from("edge_index,x,y,angle\n");
    for (i, v) in vertices.iter().enumerate() {
        let (idx, angle) = match angles.get(i) {
            Some(&a) => (i.to_string(), sig9(a)),
            None => ("inf".to_string(), String::new()),
        };
        out.push_str(&format!("{idx},{},{},{angle}\n", sig9(v[0]), sig9(v[1])));
    }
    out
}
