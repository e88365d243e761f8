//! Minimal string-assembled SVG with fixed numeric formatting.

use std::fmt::Write;

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Linear map from a data interval onto a pixel interval.
#[derive(Debug, Clone, Copy)]
pub struct Scale {
    d0: f64,
    d1: f64,
    p0: f64,
    p1: f64,
}

impl Scale {
    pub fn new((d0, d1): (f64, f64), (p0, p1): (f64, f64)) -> Self {
        Scale { d0, d1, p0, p1 }
    }

    pub fn map(&self, v: f64) -> f64 {
        if self.d1 == self.d0 {
            return 0.5 * (self.p0 + self.p1);
        }
        self.p0 + (v - self.d0) / (self.d1 - self.d0) * (self.p1 - self.p0)
    }
}

/// Plot area inside the document margins.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub left: f64,
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
}

pub struct SvgDoc {
    out: String,
}

impl SvgDoc {
    pub fn new(width: u32, height: u32) -> Self {
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(
            out,
            r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##
        )
        .unwrap();
        SvgDoc { out }
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, class: &str) {
        writeln!(
            self.out,
            r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}"/>"#
        )
        .unwrap();
    }

    pub fn dashed_line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, class: &str) {
        writeln!(
            self.out,
            r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-dasharray="4 3"/>"#
        )
        .unwrap();
    }

    pub fn marker(&mut self, cx: f64, cy: f64, r: f64, fill: &str, title: &str) {
        writeln!(
            self.out,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.1}" fill="{fill}" fill-opacity="0.75"><title>{}</title></circle>"#,
            escape(title)
        )
        .unwrap();
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, class: &str) {
        writeln!(
            self.out,
            r#"<rect class="{class}" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}"/>"#
        )
        .unwrap();
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        let pts: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        writeln!(
            self.out,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#,
            pts.join(" ")
        )
        .unwrap();
    }

    pub fn text(&mut self, x: f64, y: f64, anchor: &str, content: &str) {
        writeln!(
            self.out,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{}</text>"#,
            escape(content)
        )
        .unwrap();
    }

    pub fn rotated_text(&mut self, x: f64, y: f64, content: &str) {
        writeln!(
            self.out,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="middle" transform="rotate(-90 {x:.2} {y:.2})">{}</text>"#,
            escape(content)
        )
        .unwrap();
    }

    /// Axes with ticks along the frame's bottom and left edges.
    pub fn axes(
        &mut self,
        frame: &Frame,
        x: (&Scale, &[f64], &str),
        y: (&Scale, &[f64], &str),
        tick_format: impl Fn(f64) -> String,
    ) {
        let black = "#000000";
        self.line(frame.left, frame.bottom, frame.right, frame.bottom, black, "axis");
        self.line(frame.left, frame.top, frame.left, frame.bottom, black, "axis");
        for &t in x.1 {
            let px = x.0.map(t);
            self.line(px, frame.bottom, px, frame.bottom + 4.0, black, "tick");
            self.text(px, frame.bottom + 16.0, "middle", &tick_format(t));
        }
        for &t in y.1 {
            let py = y.0.map(t);
            self.line(frame.left - 4.0, py, frame.left, py, black, "tick");
            self.text(frame.left - 6.0, py + 4.0, "end", &tick_format(t));
        }
        self.text(
            0.5 * (frame.left + frame.right),
            frame.bottom + 34.0,
            "middle",
            x.2,
        );
        self.rotated_text(frame.left - 42.0, 0.5 * (frame.top + frame.bottom), y.2);
    }

    pub fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}
