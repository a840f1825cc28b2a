//! Exact arithmetic and finite-field witnesses for residual finiteness of
//! finitely generated matrix groups over Q(T) and F_p(T).

pub mod arith;
pub mod error;
pub mod field;
pub mod multipoly;
pub mod ring;
pub mod unipoly;
pub mod matrix;
pub mod ratfunc;
pub mod group;
pub mod finite;
pub mod witness;
pub mod profiler;
pub mod parse;
pub mod specfile;
pub mod io;
