//! Discrete Fourier transform of initial data, time transforms of boundary
//! nodes, and the contour quadrature engine.

pub mod contour;
pub mod gauss;
pub mod initial;
pub mod quad;
pub mod time;

pub use contour::{contour_integral, contour_integral_nodes};
pub use initial::{initial_transform, InitialTransform};
pub use time::{kernel_transform, time_transform, TimeTransform, TransformMode};
