pub mod check;
pub mod cli;
pub mod contact;
pub mod error;
pub mod exactnum;
pub mod gmodule;
pub mod grassmann;
pub mod linalg;
pub mod singular;
pub mod verma;

pub use error::{Error, Result};
pub use exactnum::{BiPoly, GaussianRational, Gr, Linear};
