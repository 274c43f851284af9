//! Skewness-aware boxplots.
//!
//! Quartiles, skewness measures and seven outlier fence rules for skewed
//! data, a skewed exponential power distribution (SEPD) with exact CDF and
//! quantile function, and a Monte Carlo harness that maps swamping and
//! masking rates of each rule over a grid of SEPD shapes.
//!
//! ```
//! use skewbox::{compute_fences, FenceMethod, FenceParams, Sample};
//!
//! let s = Sample::new(vec![1.0, 2.0, 2.5, 3.0, 3.5, 4.0, 20.0]).unwrap();
//! let f = compute_fences(&s, FenceMethod::Tukey, &FenceParams::default()).unwrap();
//! assert!(20.0 > f.upper);
//! ```

pub mod error;
pub mod fences;
pub mod ks;
pub mod mosaic;
pub mod quadrature;
pub mod rng;
pub mod robust;
pub mod sample;
pub mod sepd;
pub mod special;
pub mod summary;
pub mod svg;

pub use error::{Error, Result};
pub use fences::{
    classify_outliers, compute_fences, count_outliers, FenceMethod, FenceParams, Fences, McEstimator, Outlier,
    WhiskerMode,
};
pub use mosaic::{run_mosaic, CellResult, GridSpec, MosaicResult, Scenario, SimConfig};
pub use robust::{bowley, medcouple, quantile, quartiles, QuantileMethod, QuartileSet};
pub use sample::Sample;
pub use sepd::{Sepd, SepdParams};
pub use summary::{grouped_summary, skewbox_summary, SkewBoxSummary};
pub use svg::{render_boxplots, render_mosaic, BoxplotStyle, HeatmapScale};
