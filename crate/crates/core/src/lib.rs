pub mod blaschke;
pub mod circlefn;
pub mod decomp;
pub mod error;
pub mod experiment;
pub mod factor;
pub mod invariance;
pub mod io;
pub mod linalg;
pub mod norms;
pub mod sampling;
pub mod verify;

pub use blaschke::{BasisIndex, BlaschkeSpec};
pub use circlefn::{CircleFunction, HardyFlag, PointwiseOp};
pub use error::{HardyError, Result};
pub use norms::GaugeNormSpec;
