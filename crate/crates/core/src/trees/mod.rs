pub mod bicolored;
pub mod families;
pub mod liu;
pub mod psi;
pub mod rooted;

pub use bicolored::{BicoloredTree, Color, LinearExtension};
pub use families::Family;
pub use liu::LiuOrder;
pub use psi::{psi, psi_inverse};
pub use rooted::RootedTree;
