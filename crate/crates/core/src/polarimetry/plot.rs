use std::fmt::{self, Write as _};
use std::str::FromStr;

use csv::{ReaderBuilder, Trim, WriterBuilder};

use super::{group_by_sample, DerivedRecord};
use crate::{Error, Result};

/// Which derived quantity a series plots against concentration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum YKind {
    AbsorbedPower,
    GammaLeft,
    GammaRight,
    Rotation,
    SpecificRotation,
}

impl YKind {
    pub const ALL: [YKind; 5] = [
        YKind::AbsorbedPower,
        YKind::GammaLeft,
        YKind::GammaRight,
        YKind::Rotation,
        YKind::SpecificRotation,
    ];

    /// Column-style name, also used in CSV headers.
    pub fn name(self) -> &'static str {
        match self {
            YKind::AbsorbedPower => "absorbed_mw",
            YKind::GammaLeft => "gamma_left_rad",
            YKind::GammaRight => "gamma_right_rad",
            YKind::Rotation => "rotation_deg",
            YKind::SpecificRotation => "specific_rotation",
        }
    }

    pub fn axis_label(self) -> &'static str {
        match self {
            YKind::AbsorbedPower => "absorbed power (mW)",
            YKind::GammaLeft => "γL (rad)",
            YKind::GammaRight => "γR (rad)",
            YKind::Rotation => "rotation (deg)",
            YKind::SpecificRotation => "specific rotation (deg/(dm·g/mL))",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            YKind::AbsorbedPower => "I′",
            YKind::GammaLeft => "γL",
            YKind::GammaRight => "γR",
            YKind::Rotation => "θ",
            YKind::SpecificRotation => "S",
        }
    }

    fn value(self, d: &DerivedRecord) -> Option<f64> {
        match self {
            YKind::AbsorbedPower => Some(d.absorbed_mw),
            YKind::GammaLeft => Some(d.gamma_left),
            YKind::GammaRight => Some(d.gamma_right),
            YKind::Rotation => Some(d.rotation_deg),
            YKind::SpecificRotation => d.specific_rotation,
        }
    }
}

impl fmt::Display for YKind {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for YKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        YKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Csv(format!("unknown series kind `{s}`")))
    }
}

/// One curve: concentration (percent) against a derived quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    label: String,
    x: Vec<f64>,
    y: Vec<f64>,
    y_kind: YKind,
}

impl PlotSeries {
    /// Requires `x` strictly increasing and as long as `y`.
    pub fn new(label: impl Into<String>, x: Vec<f64>, y: Vec<f64>, y_kind: YKind) -> Result<Self> {
        let label = label.into();
        if x.len() != y.len() {
            return Err(Error::Csv(format!(
                "series `{label}` has {} x values and {} y values",
                x.len(),
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Csv(format!(
                "series `{label}` x values are not strictly increasing"
            )));
        }
        Ok(PlotSeries {
            label,
            x,
            y,
            y_kind,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn y_kind(&self) -> YKind {
        self.y_kind
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// One series per sample, sorted by concentration. Samples appear in the
/// order they first occur. Records with an undefined value (specific
/// rotation at zero concentration) are left out.
pub fn build_series(derived: &[DerivedRecord], y_kind: YKind) -> Result<Vec<PlotSeries>> {
    if derived.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut out = Vec::new();
    for (sample, mut records) in group_by_sample(derived, |d| d.sample_name.as_str()) {
        records.sort_by(|a, b| a.concentration_percent.total_cmp(&b.concentration_percent));
        if let Some(w) = records
            .windows(2)
            .find(|w| w[0].concentration_percent == w[1].concentration_percent)
        {
            return Err(Error::DuplicateConcentration {
                sample,
                concentration: w[0].concentration_percent,
            });
        }
        let (x, y): (Vec<f64>, Vec<f64>) = records
            .iter()
            .filter_map(|d| y_kind.value(d).map(|v| (d.concentration_percent, v)))
            .unzip();
        if !x.is_empty() {
            out.push(PlotSeries::new(sample, x, y, y_kind)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlotFormat {
    Svg,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    pub title: Option<String>,
    pub x_label: String,
    /// Defaults to the axis label of the series kind.
    pub y_label: Option<String>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            width: 720,
            height: 440,
            title: None,
            x_label: "concentration (%)".into(),
            y_label: None,
        }
    }
}

/// Renders the series. Output depends only on the inputs.
pub fn emit_plot(
    series: &[PlotSeries],
    format: PlotFormat,
    options: &PlotOptions,
) -> Result<String> {
    if series.is_empty() || series.iter().all(PlotSeries::is_empty) {
        return Err(Error::EmptySeries);
    }
    Ok(match format {
        PlotFormat::Svg => render_svg(series, options),
        PlotFormat::Csv => render_csv(series),
    })
}

fn column_name(s: &PlotSeries) -> String {
    format!("{} [{}]", s.label, s.y_kind)
}

fn render_csv(series: &[PlotSeries]) -> String {
    let mut xs: Vec<f64> = series.iter().flat_map(|s| s.x.iter().copied()).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut w = WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec!["concentration_percent".to_string()];
    header.extend(series.iter().map(column_name));
    w.write_record(&header).expect("in-memory write");
    for x in xs {
        let mut row = vec![format!("{x}")];
        for s in series {
            let cell =
                s.x.iter()
                    .position(|v| *v == x)
                    .map(|i| format!("{}", s.y[i]))
                    .unwrap_or_default();
            row.push(cell);
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 output")
}

/// Reads a wide table produced by [`emit_plot`] with [`PlotFormat::Csv`].
pub fn parse_plot_csv(text: &str) -> Result<Vec<PlotSeries>> {
    let mut reader = ReaderBuilder::new()
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .clone();
    if header.get(0) != Some("concentration_percent") {
        return Err(Error::MissingColumn("concentration_percent".into()));
    }
    let mut columns = Vec::new();
    for name in header.iter().skip(1) {
        let (label, kind) = name
            .strip_suffix(']')
            .and_then(|n| n.rsplit_once(" ["))
            .ok_or_else(|| Error::Csv(format!("column `{name}` is not `label [kind]`")))?;
        columns.push((
            label.to_string(),
            kind.parse::<YKind>()?,
            Vec::new(),
            Vec::new(),
        ));
    }
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::row(line, format!("`{s}` is not a number")))
        };
        let x = parse(record.get(0).unwrap_or(""))?;
        for (i, col) in columns.iter_mut().enumerate() {
            let cell = record.get(i + 1).unwrap_or("");
            if !cell.is_empty() {
                col.2.push(x);
                col.3.push(parse(cell)?);
            }
        }
    }
    columns
        .into_iter()
        .map(|(label, kind, x, y)| PlotSeries::new(label, x, y, kind))
        .collect()
}

const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 200.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

/// Tick layout covering `[lo, hi]` with a 1/2/5 step.
struct Axis {
    lo: f64,
    hi: f64,
    step: f64,
}

impl Axis {
    fn covering(min: f64, max: f64) -> Axis {
        let (min, max) = if max > min {
            (min, max)
        } else {
            let pad = if min == 0.0 { 1.0 } else { min.abs() * 0.1 };
            (min - pad, max + pad)
        };
        let raw = (max - min) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let f = raw / mag;
        let nice = if f <= 1.0 {
            1.0
        } else if f <= 2.0 {
            2.0
        } else if f <= 5.0 {
            5.0
        } else {
            10.0
        };
        let step = nice * mag;
        Axis {
            lo: (min / step).floor() * step,
            hi: (max / step).ceil() * step,
            step,
        }
    }

    fn ticks(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step).round() as i64;
        (0..=n).map(|k| self.lo + k as f64 * self.step).collect()
    }

    fn label(&self, v: f64) -> String {
        let decimals = (-self.step.log10().floor()).max(0.0) as usize;
        let v = if v.abs() < self.step * 1e-9 { 0.0 } else { v };
        format!("{v:.decimals$}")
    }

    fn fraction(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
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

fn render_svg(series: &[PlotSeries], options: &PlotOptions) -> String {
    let width = f64::from(options.width.max(400));
    let height = f64::from(options.height.max(200));
    let pw = width - MARGIN_LEFT - MARGIN_RIGHT;
    let ph = height - MARGIN_TOP - MARGIN_BOTTOM;

    let all_x = series.iter().flat_map(|s| s.x.iter().copied());
    let all_y = series.iter().flat_map(|s| s.y.iter().copied());
    let (xmin, xmax) = all_x.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    let (ymin, ymax) = all_y.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    let xa = Axis::covering(xmin, xmax);
    let ya = Axis::covering(ymin, ymax);
    let px = |x: f64| MARGIN_LEFT + xa.fraction(x) * pw;
    let py = |y: f64| MARGIN_TOP + (1.0 - ya.fraction(y)) * ph;

    let mixed_kinds = series.iter().any(|s| s.y_kind != series[0].y_kind);
    let y_label = options
        .y_label
        .clone()
        .unwrap_or_else(|| series[0].y_kind.axis_label().to_string());

    let mut svg = String::new();
    // writing into a String cannot fail
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = width,
        h = height
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    if let Some(title) = &options.title {
        let _ = writeln!(
            svg,
            r#"<text class="title" x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            MARGIN_LEFT + pw / 2.0,
            escape(title)
        );
    }

    let _ = writeln!(svg, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let (x0, x1, y0, y1) = (MARGIN_LEFT, MARGIN_LEFT + pw, MARGIN_TOP + ph, MARGIN_TOP);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#
    );
    for t in xa.ticks() {
        let x = px(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}"/><text x="{x:.2}" y="{:.2}" stroke="none" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            xa.label(t)
        );
    }
    for t in ya.ticks() {
        let y = py(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}"/><text x="{:.2}" y="{:.2}" stroke="none" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0,
            ya.label(t)
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + pw / 2.0,
        height - 15.0,
        escape(&options.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text class="y-label" x="18" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 18 {cy:.2})">{}</text>"#,
        escape(&y_label),
        cy = MARGIN_TOP + ph / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(
            svg,
            r#"<g class="series" data-label="{}">"#,
            escape(&s.label)
        );
        let points: Vec<String> =
            s.x.iter()
                .zip(&s.y)
                .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            points.join(" ")
        );
        for (&x, &y) in s.x.iter().zip(&s.y) {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(x),
                py(y)
            );
        }
        let _ = writeln!(svg, "</g>");
    }

    let _ = writeln!(svg, r#"<g class="legend">"#);
    let lx = MARGIN_LEFT + pw + 20.0;
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let ly = MARGIN_TOP + 10.0 + 20.0 * i as f64;
        let text = if mixed_kinds {
            format!("{} {}", s.label, s.y_kind.symbol())
        } else {
            s.label.clone()
        };
        let _ = writeln!(
            svg,
            r#"<g class="legend-entry"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&text)
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}
