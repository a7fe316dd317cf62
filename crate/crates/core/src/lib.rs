//! Upper bounds for spherical codes and their functional (Banach) and metric
//! (Lipschitz) generalizations.
//!
//! * [`gegenbauer`]: the normalized Gegenbauer family, its weight, quadrature
//!   and change of basis.
//! * [`linprog`]: a dense two-phase simplex solver.
//! * [`dgs`]: the Delsarte linear programming bound with certificate checking.
//! * [`pfender`]: Pfender-type bounds `n <= (phi(1) + c) / c`, checked either
//!   structurally or against a concrete code.
//! * [`codes`]: spherical, functional and metric codes, their axioms, and a
//!   small catalog of classical configurations.

pub mod gegenbauer;
pub mod linprog;
pub mod dgs;
pub mod cli;
pub mod pfender;
pub mod codes;
pub mod search;
