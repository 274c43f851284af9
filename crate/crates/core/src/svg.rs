//! Standalone SVG documents for boxplots and mosaic heatmaps.
//!
//! Output is a pure function of the input: coordinates are printed with two
//! decimals and elements are emitted in input order, so identical inputs give
//! identical bytes.
//!
//! Only the data marks use `rect`, `line` and `circle` elements. Axes and
//! ticks are drawn as paths so that element counts in a boxplot document
//! correspond directly to boxes, median/whisker segments and outliers.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mosaic::{CellResult, GridSpec, MosaicResult};
use crate::summary::SkewBoxSummary;

/// Fill used for cells where no replication completed.
pub const SENTINEL_COLOR: &str = "#d62728";

const FONT: &str = "font-family=\"sans-serif\" font-size=\"11\"";

#[derive(Debug, Clone, PartialEq)]
pub struct BoxplotStyle {
    pub box_width: f64,
    pub gap: f64,
    pub show_outliers: bool,
    pub axis_label: String,
    /// Cycled across groups.
    pub fill_colors: Vec<String>,
}

impl Default for BoxplotStyle {
    fn default() -> Self {
        BoxplotStyle {
            box_width: 40.0,
            gap: 30.0,
            show_outliers: true,
            axis_label: "value".to_string(),
            fill_colors: vec!["#9ecae1".to_string()],
        }
    }
}

impl BoxplotStyle {
    pub fn validate(&self) -> Result<()> {
        if !(self.box_width.is_finite() && self.box_width > 0.0) {
            return Err(Error::InvalidParameter("box width must be positive".into()));
        }
        if !(self.gap.is_finite() && self.gap >= 0.0) {
            return Err(Error::InvalidParameter("gap must be non-negative".into()));
        }
        if self.fill_colors.is_empty() {
            return Err(Error::InvalidParameter("at least one fill colour is required".into()));
        }
        for c in &self.fill_colors {
            parse_hex(c)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapScale {
    pub min_rate: f64,
    pub max_rate: f64,
    pub low_color: String,
    pub high_color: String,
}

impl Default for HeatmapScale {
    fn default() -> Self {
        HeatmapScale {
            min_rate: 0.0,
            max_rate: 0.10,
            low_color: "#1a1a40".to_string(),
            high_color: "#f5f5dc".to_string(),
        }
    }
}

impl HeatmapScale {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_rate.is_finite() && self.max_rate.is_finite() && self.min_rate < self.max_rate) {
            return Err(Error::InvalidParameter(format!(
                "colour scale needs min_rate < max_rate, got {} and {}",
                self.min_rate, self.max_rate
            )));
        }
        parse_hex(&self.low_color)?;
        parse_hex(&self.high_color)?;
        Ok(())
    }

    /// Interpolation parameter in [0, 1], clamped at both ends.
    pub fn position(&self, rate: f64) -> f64 {
        ((rate - self.min_rate) / (self.max_rate - self.min_rate)).clamp(0.0, 1.0)
    }

    /// Tile colour for `rate`; `None` gets the sentinel.
    pub fn color(&self, rate: Option<f64>) -> String {
        let Some(rate) = rate.filter(|r| r.is_finite()) else {
            return SENTINEL_COLOR.to_string();
        };
        let lo = parse_hex(&self.low_color).expect("validated colour");
        let hi = parse_hex(&self.high_color).expect("validated colour");
        let t = self.position(rate);
        let mix = |a: u8, b: u8| (a as f64 + t * (b as f64 - a as f64)).round() as u8;
        format!("#{:02x}{:02x}{:02x}", mix(lo[0], hi[0]), mix(lo[1], hi[1]), mix(lo[2], hi[2]))
    }
}

/// Parses `#rrggbb`.
pub fn parse_hex(color: &str) -> Result<[u8; 3]> {
    let bad = || Error::InvalidParameter(format!("colour {color:?} is not a 6-digit hex string"));
    let digits = color.strip_prefix('#').ok_or_else(bad)?;
    if digits.len() != 6 || !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let channel = |i: usize| u8::from_str_radix(&digits[i..i + 2], 16).map_err(|_| bad());
    Ok([channel(0)?, channel(2)?, channel(4)?])
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// Tick label with three significant digits, trailing zeros dropped.
pub fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-3..5).contains(&mag) {
        return format!("{v:.2e}");
    }
    let decimals = (2 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
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

fn open_document(out: &mut String, width: f64, height: f64) {
    let (w, h) = (num(width), num(height));
    writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>").unwrap();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    )
    .unwrap();
}

fn check_summary(s: &SkewBoxSummary) -> Result<()> {
    let fields = [
        ("ymin", s.ymin),
        ("lower", s.lower),
        ("middle", s.middle),
        ("upper", s.upper),
        ("ymax", s.ymax),
    ];
    for (name, v) in fields {
        if !v.is_finite() {
            return Err(Error::NonFiniteField(name).in_group(&s.group_label));
        }
    }
    if s.outliers.iter().any(|o| !o.value.is_finite()) {
        return Err(Error::NonFiniteField("outlier").in_group(&s.group_label));
    }
    Ok(())
}

const BOX_TOP: f64 = 20.0;
const BOX_BOTTOM: f64 = 340.0;
const BOX_LEFT: f64 = 70.0;

/// One box per summary on a shared vertical value axis.
pub fn render_boxplots(summaries: &[SkewBoxSummary], style: &BoxplotStyle) -> Result<String> {
    if summaries.is_empty() {
        return Err(Error::NoData);
    }
    style.validate()?;
    for s in summaries {
        check_summary(s)?;
    }

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in summaries {
        lo = lo.min(s.ymin).min(s.lower);
        hi = hi.max(s.ymax).max(s.upper);
        if style.show_outliers {
            for o in &s.outliers {
                lo = lo.min(o.value);
                hi = hi.max(o.value);
            }
        }
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
    let (lo, hi) = (lo - pad, hi + pad);
    let y = |v: f64| BOX_BOTTOM - (v - lo) / (hi - lo) * (BOX_BOTTOM - BOX_TOP);

    let slot = style.box_width + style.gap;
    let width = BOX_LEFT + style.gap + slot * summaries.len() as f64;
    let height = BOX_BOTTOM + 40.0;
    let mut out = String::new();
    open_document(&mut out, width, height);

    // axis and ticks
    let mut axis = format!("M{} {}V{}", num(BOX_LEFT), num(BOX_TOP), num(BOX_BOTTOM));
    let mut labels = String::new();
    for i in 0..5 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let ty = num(y(v));
        write!(axis, "M{} {ty}H{}", num(BOX_LEFT - 5.0), num(BOX_LEFT)).unwrap();
        writeln!(
            labels,
            "<text x=\"{}\" y=\"{ty}\" text-anchor=\"end\" dominant-baseline=\"middle\" {FONT}>{}</text>",
            num(BOX_LEFT - 8.0),
            tick_label(v)
        )
        .unwrap();
    }
    writeln!(out, "<path class=\"axis\" d=\"{axis}\" stroke=\"#000000\" fill=\"none\"/>").unwrap();
    out.push_str(&labels);
    let mid = num((BOX_TOP + BOX_BOTTOM) / 2.0);
    writeln!(
        out,
        "<text x=\"14.00\" y=\"{mid}\" text-anchor=\"middle\" transform=\"rotate(-90 14.00 {mid})\" {FONT}>{}</text>",
        escape(&style.axis_label)
    )
    .unwrap();

    for (i, s) in summaries.iter().enumerate() {
        let fill = &style.fill_colors[i % style.fill_colors.len()];
        let x0 = BOX_LEFT + style.gap + slot * i as f64;
        let x1 = x0 + style.box_width;
        let xc = num((x0 + x1) / 2.0);
        let (x0s, x1s) = (num(x0), num(x1));
        writeln!(out, "<g class=\"group\">").unwrap();
        writeln!(
            out,
            "<line class=\"whisker\" x1=\"{xc}\" y1=\"{}\" x2=\"{xc}\" y2=\"{}\" stroke=\"#000000\"/>",
            num(y(s.upper)),
            num(y(s.ymax))
        )
        .unwrap();
        writeln!(
            out,
            "<line class=\"whisker\" x1=\"{xc}\" y1=\"{}\" x2=\"{xc}\" y2=\"{}\" stroke=\"#000000\"/>",
            num(y(s.lower)),
            num(y(s.ymin))
        )
        .unwrap();
        writeln!(
            out,
            "<rect class=\"box\" x=\"{x0s}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"#000000\"/>",
            num(y(s.upper)),
            num(style.box_width),
            num(y(s.lower) - y(s.upper))
        )
        .unwrap();
        let ym = num(y(s.middle));
        writeln!(
            out,
            "<line class=\"median\" x1=\"{x0s}\" y1=\"{ym}\" x2=\"{x1s}\" y2=\"{ym}\" stroke=\"#000000\" stroke-width=\"2\"/>"
        )
        .unwrap();
        if style.show_outliers {
            for o in &s.outliers {
                writeln!(
                    out,
                    "<circle class=\"outlier\" cx=\"{xc}\" cy=\"{}\" r=\"2.50\" fill=\"none\" stroke=\"#000000\"/>",
                    num(y(o.value))
                )
                .unwrap();
            }
        }
        writeln!(
            out,
            "<text x=\"{xc}\" y=\"{}\" text-anchor=\"middle\" {FONT}>{}</text>",
            num(BOX_BOTTOM + 18.0),
            escape(&s.group_label)
        )
        .unwrap();
        writeln!(out, "</g>").unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

const TILE_AREA: f64 = 490.0;
const MOSAIC_LEFT: f64 = 70.0;
const MOSAIC_TOP: f64 = 20.0;
const BAR_WIDTH: f64 = 16.0;

/// Grid value at a fractional index, interpolated between neighbours.
fn value_at(values: &[f64], pos: f64) -> f64 {
    let i = (pos.floor() as usize).min(values.len() - 1);
    let j = (i + 1).min(values.len() - 1);
    let f = pos - i as f64;
    values[i] + f * (values[j] - values[i])
}

fn tick_positions(count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    (0..5).map(|t| (count - 1) as f64 * t as f64 / 4.0).collect()
}

/// Heatmap of a simulation result: alpha across, p down.
pub fn render_mosaic(result: &MosaicResult, scale: &HeatmapScale) -> Result<String> {
    render_mosaic_cells(&result.grid, &result.cells, scale)
}

/// Same as [`render_mosaic`] for a grid and its row-major cells (p outer).
pub fn render_mosaic_cells(grid: &GridSpec, cells: &[CellResult], scale: &HeatmapScale) -> Result<String> {
    scale.validate()?;
    let (na, np) = (grid.alpha_values.len(), grid.p_values.len());
    if cells.is_empty() || cells.len() != na * np {
        return Err(Error::InvalidParameter(format!(
            "expected {} cells for a {na} x {np} grid, got {}",
            na * np,
            cells.len()
        )));
    }
    let tw = TILE_AREA / na as f64;
    let th = TILE_AREA / np as f64;
    let right = MOSAIC_LEFT + TILE_AREA;
    let bottom = MOSAIC_TOP + TILE_AREA;
    let bar_x = right + 24.0;
    let width = bar_x + BAR_WIDTH + 50.0;
    let height = bottom + 50.0;

    let mut out = String::new();
    open_document(&mut out, width, height);
    writeln!(
        out,
        "<defs><linearGradient id=\"ramp\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\"><stop offset=\"0\" stop-color=\"{}\"/><stop offset=\"1\" stop-color=\"{}\"/></linearGradient></defs>",
        scale.low_color, scale.high_color
    )
    .unwrap();

    writeln!(out, "<g class=\"tiles\" shape-rendering=\"crispEdges\">").unwrap();
    for (idx, c) in cells.iter().enumerate() {
        let (pi, ai) = (idx / na, idx % na);
        writeln!(
            out,
            "<rect class=\"tile\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            num(MOSAIC_LEFT + tw * ai as f64),
            num(MOSAIC_TOP + th * pi as f64),
            num(tw),
            num(th),
            scale.color(c.rate)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    let mut axis = format!(
        "M{l} {b}H{r}M{l} {t}V{b}",
        l = num(MOSAIC_LEFT),
        r = num(right),
        t = num(MOSAIC_TOP),
        b = num(bottom)
    );
    let mut labels = String::new();
    for pos in tick_positions(na) {
        let x = num(MOSAIC_LEFT + tw * (pos + 0.5));
        write!(axis, "M{x} {}V{}", num(bottom), num(bottom + 5.0)).unwrap();
        writeln!(
            labels,
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" {FONT}>{}</text>",
            num(bottom + 17.0),
            tick_label(value_at(&grid.alpha_values, pos))
        )
        .unwrap();
    }
    for pos in tick_positions(np) {
        let y = num(MOSAIC_TOP + th * (pos + 0.5));
        write!(axis, "M{} {y}H{}", num(MOSAIC_LEFT - 5.0), num(MOSAIC_LEFT)).unwrap();
        writeln!(
            labels,
            "<text x=\"{}\" y=\"{y}\" text-anchor=\"end\" dominant-baseline=\"middle\" {FONT}>{}</text>",
            num(MOSAIC_LEFT - 8.0),
            tick_label(value_at(&grid.p_values, pos))
        )
        .unwrap();
    }
    writeln!(out, "<path class=\"axis\" d=\"{axis}\" stroke=\"#000000\" fill=\"none\"/>").unwrap();
    out.push_str(&labels);
    writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" {FONT}>\u{3b1}</text>",
        num(MOSAIC_LEFT + TILE_AREA / 2.0),
        num(bottom + 38.0)
    )
    .unwrap();
    let mid = num(MOSAIC_TOP + TILE_AREA / 2.0);
    writeln!(
        out,
        "<text x=\"16.00\" y=\"{mid}\" text-anchor=\"middle\" {FONT}>p</text>"
    )
    .unwrap();

    // colour bar, min_rate at the bottom
    writeln!(
        out,
        "<rect class=\"colorbar\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"url(#ramp)\" stroke=\"#000000\"/>",
        num(bar_x),
        num(MOSAIC_TOP),
        num(BAR_WIDTH),
        num(TILE_AREA)
    )
    .unwrap();
    for i in 0..5 {
        let v = scale.min_rate + (scale.max_rate - scale.min_rate) * i as f64 / 4.0;
        let y = num(bottom - TILE_AREA * i as f64 / 4.0);
        writeln!(
            out,
            "<text x=\"{}\" y=\"{y}\" dominant-baseline=\"middle\" {FONT}>{}</text>",
            num(bar_x + BAR_WIDTH + 4.0),
            tick_label(v)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
