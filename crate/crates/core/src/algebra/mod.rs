//! Commutative algebra over finitely many derivatives treated as plain
//! indeterminates.

mod groebner;
mod ideal;
mod macaulay;
mod mpoly;
mod primality;

pub use groebner::{groebner, reduce_basis, self_check, GroebnerStats};
pub use ideal::{occurring_vars, AlgIdeal, Membership};
pub use macaulay::{macaulay_member, MacaulayResult};
pub use mpoly::{Exps, MPoly, MonomialOrder};
pub use primality::{
    primality_oracle, PrimalityConfig, PrimalityVerdict, PrimeMethod, PrimeStatus, PrimeWitness,
};
