//! Shared numerical machinery: quadrature, dense linear algebra, second-kind
//! integral equations, oscillatory Fourier transforms, winding numbers,
//! complex zero searches, and adaptive ODE integration.

pub mod filon;
pub mod interp;
pub mod linalg;
pub mod nystrom;
pub mod ode;
pub mod quad;
pub mod winding;
pub mod zeros;

pub use filon::{oscillatory_fourier, FourierSymmetry};
pub use nystrom::{solve_second_kind, SecondKindSolution};
pub use winding::winding_number;
pub use zeros::{find_zeros_in_box, ComplexBox};
