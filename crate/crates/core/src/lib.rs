pub mod arith;
pub mod checks;
pub mod dseries;
pub mod experiments;
pub mod incidence;
pub mod numtheory;
pub mod padic;
