use proptest::prelude::*;

use skewbox::fences::Outlier;
use skewbox::mosaic::linear_steps;
use skewbox::svg::{render_boxplots, render_mosaic_cells, BoxplotStyle, HeatmapScale};
use skewbox::{run_mosaic, render_mosaic, CellResult, FenceMethod, GridSpec, Scenario, SimConfig, SkewBoxSummary};

fn view_box(svg: &str) -> (f64, f64) {
    let start = svg.find("viewBox=\"0 0 ").unwrap() + "viewBox=\"0 0 ".len();
    let rest = &svg[start..];
    let end = rest.find('"').unwrap();
    let mut it = rest[..end].split(' ').map(|v| v.parse::<f64>().unwrap());
    (it.next().unwrap(), it.next().unwrap())
}

/// Every numeric x/y-like attribute of every element lies inside the view box.
fn assert_contained(svg: &str) {
    let (w, h) = view_box(svg);
    for attr in ["x", "x1", "x2", "cx"] {
        for v in attr_values(svg, attr) {
            assert!((0.0..=w).contains(&v), "{attr}={v} outside 0..{w}");
        }
    }
    for attr in ["y", "y1", "y2", "cy"] {
        for v in attr_values(svg, attr) {
            assert!((0.0..=h).contains(&v), "{attr}={v} outside 0..{h}");
        }
    }
    for rect in svg.split("<rect ").skip(1) {
        let get = |a: &str| attr_values(&format!(" {}", &rect[..rect.find('>').unwrap()]), a)[0];
        assert!(get("x") + get("width") <= w + 1e-9);
        assert!(get("y") + get("height") <= h + 1e-9);
    }
}

fn attr_values(svg: &str, attr: &str) -> Vec<f64> {
    let key = format!(" {attr}=\"");
    svg.match_indices(&key)
        .filter_map(|(i, _)| {
            let rest = &svg[i + key.len()..];
            rest[..rest.find('"').unwrap()].parse::<f64>().ok()
        })
        .collect()
}

fn summary(label: String, q: [f64; 5], outliers: Vec<f64>) -> SkewBoxSummary {
    let mut q = q;
    q.sort_by(f64::total_cmp);
    SkewBoxSummary {
        group_label: label,
        ymin: q[0],
        lower: q[1],
        middle: q[2],
        upper: q[3],
        ymax: q[4],
        outliers: outliers.into_iter().enumerate().map(|(index, value)| Outlier { index, value }).collect(),
        n: 20,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boxplots_stay_inside_the_view_box(
        groups in prop::collection::vec(
            (prop::array::uniform5(-1e4..1e4f64), prop::collection::vec(-1e5..1e5f64, 0..6)),
            1..8,
        )
    ) {
        let summaries: Vec<SkewBoxSummary> = groups
            .into_iter()
            .enumerate()
            .map(|(i, (q, o))| summary(format!("g{i}"), q, o))
            .collect();
        let svg = render_boxplots(&summaries, &BoxplotStyle::default()).unwrap();
        assert_contained(&svg);
        prop_assert_eq!(svg.matches("<rect ").count(), summaries.len());
        let circles: usize = summaries.iter().map(|s| s.outliers.len()).sum();
        prop_assert_eq!(svg.matches("<circle ").count(), circles);
    }

    #[test]
    fn colour_position_is_monotone(a in 0.0..0.1f64, b in 0.0..0.1f64) {
        let scale = HeatmapScale::default();
        if a < b {
            prop_assert!(scale.position(a) < scale.position(b));
        }
    }
}

#[test]
fn degenerate_group_still_renders_inside() {
    let s = summary("flat".into(), [5.0; 5], vec![]);
    let svg = render_boxplots(&[s], &BoxplotStyle::default()).unwrap();
    assert_contained(&svg);
}

#[test]
fn mosaic_of_a_real_run() {
    let grid = GridSpec::new(linear_steps(0.1, 0.9, 5), vec![0.8, 2.0, 6.0]).unwrap();
    let config = SimConfig::new(Scenario::Swamping, FenceMethod::Kimber, 20, 20, 9);
    let result = run_mosaic(&grid, &config).unwrap();
    let scale = HeatmapScale::default();
    let a = render_mosaic(&result, &scale).unwrap();
    let b = render_mosaic(&result, &scale).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.matches("class=\"tile\"").count(), 15);
    assert_contained(&a);
    assert!(a.contains(">\u{3b1}</text>") && a.contains(">p</text>"));
}

#[test]
fn single_cell_mosaic() {
    let grid = GridSpec::new(vec![0.5], vec![2.0]).unwrap();
    let cells = vec![CellResult {
        alpha: 0.5,
        p: 2.0,
        rate: Some(0.25),
        stderr: None,
        reps_completed: 1,
        reps_failed: 0,
    }];
    let svg = render_mosaic_cells(&grid, &cells, &HeatmapScale::default()).unwrap();
    assert!(svg.contains("class=\"tile\" x=\"70.00\" y=\"20.00\" width=\"490.00\" height=\"490.00\" fill=\"#f5f5dc\""));
    assert_contained(&svg);
}
