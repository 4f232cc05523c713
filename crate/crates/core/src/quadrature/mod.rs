//! Triangle rules and panel-pair integration for weakly singular kernels.

mod gauss;
mod pair;
mod sauter_schwab;

pub use gauss::{gauss_legendre, TriangleRule};
pub use pair::{
    classify_pair, pair_integral, Kernel, PairQuadrature, PanelFactor, PanelPairClass,
    PointTag,
};
pub use sauter_schwab::{RefPair, SingularRules};
