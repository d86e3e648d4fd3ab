//! Exact norm forms, symbol algebras and mod-p Milnor symbols over finite
//! fields and iterated Laurent series fields.

pub mod albert;
pub mod bounds;
pub mod error;
pub mod fields;
pub mod forms;
pub mod linalg;
pub mod milnor;
pub mod poly;
pub mod powassoc;
pub mod symbolalg;

pub use error::{Error, Result};
