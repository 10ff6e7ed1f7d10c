//! Numerical workbench for the class of starlike functions whose
//! logarithmic derivative is subordinate to `(1 + z)/cos z`.

pub mod caratheodory;
pub mod extremal;
pub mod functionals;
pub mod generator;
pub mod optim;
pub mod proofsurface;
pub mod quad;
pub mod radii;
pub mod report;
pub mod roots;
pub mod series;
pub mod subordconst;

pub use extremal::ClassMember;
pub use roots::RootResult;
pub use series::PowerSeries;
