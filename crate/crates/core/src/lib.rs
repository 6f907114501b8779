//! Level-raising congruences for algebraic modular forms on finite
//! double-coset models.

pub mod corpus;
pub mod cli;
pub mod cosetmodel;
pub mod eigensys;
pub mod exactalg;
pub mod levelraise;
pub mod oracle;
pub mod perm;
pub mod satake;
pub mod serde_int;
pub mod suite;
