pub mod layers;
pub mod reduction;
pub mod tree;

pub use layers::*;
pub use reduction::*;
pub use tree::*;
