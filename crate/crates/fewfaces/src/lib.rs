pub mod error;
pub mod exact;
pub mod instance;
pub mod linalg;
