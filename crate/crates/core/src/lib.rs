//! Antifactors of regular bipartite multigraphs.
//!
//! A `q`-regular bipartite multigraph `G` with parts `U`, `V` whose number of
//! perfect matchings is nonzero modulo a prime power `q` has, for every target
//! `alpha: V -> {0..q-1}`, a spanning subgraph `H` with `d_H(u) = 1` on `U`
//! and `d_H(v) != alpha(v) (mod q)` on `V`. This crate makes every step of
//! that argument executable:
//!
//! - [`graph`]: the multigraph type and the BMG text format
//! - [`gf`]: arithmetic in `GF(q)` and the indicator polynomials
//! - [`coloring`]: proper `q`-edge-colorings by peeling perfect matchings
//! - [`counting`]: perfect-matching counts (Ryser, modular Ryser, brute force)
//! - [`nullpoly`]: the polynomial `f`, its top coefficient, nonvanishing points
//! - [`antifactor`]: direct and polynomial-guided search for `H`
//! - [`gen`]: named families and seeded random generators
//! - [`badness`]: the exhaustive "bad graph" decision
//! - [`experiment`]: residue statistics of `pm(G) mod q`

pub mod antifactor;
pub mod badness;
pub mod coloring;
pub mod counting;
pub mod experiment;
pub mod gen;
pub mod gf;
pub mod graph;
pub mod nullpoly;

mod error;

pub use error::{Error, Result};
pub use graph::BipartiteMultigraph;
