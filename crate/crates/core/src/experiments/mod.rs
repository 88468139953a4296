//! Convergence studies, time slices and figure data.

pub mod convergence;
pub mod presets;
pub mod slices;
pub mod small;
pub mod svg;
pub mod table;

pub use convergence::{run_convergence, ConvergenceStudy};
pub use slices::run_time_slices;
pub use svg::emit_svg;
pub use table::parse_plot_csv;
