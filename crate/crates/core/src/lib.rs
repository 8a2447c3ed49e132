pub mod cli;
pub mod coeffs;
pub mod config;
pub mod constant_case;
pub mod criteria;
pub mod error;
pub mod existence;
pub mod interp;
pub mod jfunc;
pub mod logistic;
pub mod ode;
pub mod optimize;
pub mod quad;
pub mod region;
pub mod simulate;
