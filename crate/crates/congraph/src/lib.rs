//! Exact construction of quotient graphs (fundamental domains) for congruence
//! subgroups of SL2(F_q[t]) and PGL2(F_q[t]) acting on the Bruhat-Tits tree.
//!
//! The congruence subgroup of level g is the kernel of reduction mod g, and its
//! quotient graph is a levelled coset graph over the finite ring R_g = F_q[t]/(g):
//! vertices at level i are cosets h*H_i, with an edge between h*H_i and k*H_{i+1}
//! whenever the cosets intersect.  Three group variants are supported: SL2(R_g),
//! the true PGL2(F_q[t]) quotient (SL2(R_g) ⋊ F)/Z, and Morgenstern's
//! PGL2(R_g).  The last of these is disconnected in characteristic 2 when g is
//! not squarefree; this crate computes component counts, cusp data, and
//! (non-)isomorphism certificates exactly, with no floating point anywhere.
//!
//! Entry points:
//! - [`field::FieldCtx`] / [`poly::Poly`]: arithmetic in F_{p^k} and F_q[t]
//! - [`ring::RgCtx`]: the quotient ring R_g with unit-group and square-class data
//! - [`matgroup::GroupCtx`]: matrix groups, level subgroups, coset keys, closures
//! - [`graph::LevelledGraph`]: the levelled coset graph itself
//! - [`iso`]: level-respecting isomorphism testing with certificates
//! - [`analysis`]: order formulas, component tables, and the bound refutation

pub mod analysis;
pub mod error;
pub mod export;
pub mod field;
pub mod graph;
pub mod iso;
pub mod matgroup;
pub mod poly;
pub mod ring;
pub mod snf;

pub use error::Error;
