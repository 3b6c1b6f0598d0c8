pub mod density;
pub mod entropy;
pub mod error;
pub mod fit;
pub mod gates;
pub mod linalg;
pub mod region;
pub mod rng;
pub mod schmidt;
pub mod state;

pub use density::{reduced_density, DensityMatrix};
pub use entropy::{renyi_entropy, standard_alpha_grid};
pub use error::QStateError;
pub use region::Region;
pub use schmidt::{schmidt_decompose, top_schmidt_matrix_free, SchmidtSpectrum};
pub use state::{ProductState, PureState};

pub use num_complex::Complex64 as C64;

pub type Result<T> = std::result::Result<T, QStateError>;
