mod action;
mod body;
mod directions;
pub mod fixtures;
mod hull;
mod text;

pub use action::{
    apply_action, fix_set, invariant_measure_test, MeasureVerdict, OrthogonalAction,
    OrthogonalMatrix, ACTION_LIMIT,
};
pub use body::{
    barycenter, extreme_point_check, minkowski_sum, support_eval, BodyMeasure, ConvexBody, ExtremePointReport, Point,
};
pub use directions::{cone_distance, cone_metric, ConeDistance, DirectionSet, DEFAULT_COVERING};
