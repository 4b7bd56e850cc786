//! Built-in presentations and independent language oracles.

pub mod cayley;
pub mod cross;
pub mod dyck;
pub mod even;
pub mod oracles;
pub mod random;
pub mod strip;
