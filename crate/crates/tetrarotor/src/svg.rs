//! Stick-plus-envelope plot of a synthesized spectrum.

use std::fmt::Write;

use tetrarotor_core::spectrum::{Line, Synthesis};

const W: f64 = 800.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;

pub fn spectrum_svg(lines: &[Line], synthesis: &Synthesis, title: &str) -> String {
    let (x0, x1) = match (synthesis.samples.first(), synthesis.samples.last()) {
        (Some(a), Some(b)) if b.0 > a.0 => (a.0, b.0),
        _ => (0.0, 1.0),
    };
    let ymax = synthesis.samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let smax = lines.iter().map(|l| l.intensity).fold(0.0, f64::max);
    let ymax = if ymax > 0.0 { ymax } else { 1.0 };
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - y / ymax * (H - 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    for i in 0..=4 {
        let x = x0 + (x1 - x0) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{:.1}</text>"#,
            px(x),
            H - MARGIN + 16.0,
            x
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">wavenumber / cm-1</text>"#,
        W / 2.0,
        H - 12.0
    );
    if smax > 0.0 {
        for l in lines.iter().filter(|l| l.frequency >= x0 && l.frequency <= x1) {
            let h = l.intensity / smax * 0.9 * ymax;
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#c33" stroke-width="1"><title>{}</title></line>"##,
                py(0.0),
                py(h),
                escape(&l.label()),
                x = px(l.frequency)
            );
        }
    }
    let pts: Vec<String> = synthesis
        .samples
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#226" stroke-width="1.5" points="{}"/>"##,
        pts.join(" ")
    );
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use tetrarotor_core::spectrum::{Activity, LevelId};
    use tetrarotor_core::symmetry::SpinLabel;

    #[test]
    fn well_formed_and_escaped() {
        let line = Line {
            frequency: 3217.0,
            intensity: 1.0,
            lower: LevelId::ground("(A1)1"),
            upper: LevelId::excited("(L1)1"),
            activity: Activity::Ir,
            spin: SpinLabel::A,
        };
        let syn = Synthesis {
            samples: vec![(3200.0, 0.0), (3217.0, 0.6), (3230.0, 0.0)],
            clipped: vec![],
        };
        let svg = spectrum_svg(&[line], &syn, "a<b");
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("(A1)1-&gt;(L1)1*"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }
}
