//! Chordal network representations of structured polynomial ideals over
//! prime finite fields.
//!
//! A polynomial system's sparsity structure is captured by a graph; after a
//! chordal completion, the system is decomposed rank by rank into a ranked
//! DAG of triangular nodes (a chordal network) whose root-to-leaf chains
//! form a triangular decomposition of the variety. Queries on the finished
//! network (solution counting, uniform sampling, probabilistic radical
//! membership, dimension, equidimensional parts, minimal primes) run by
//! dynamic programming over the DAG without expanding the chain set.
//!
//! ```
//! use chordalnet::chordal::{complete_with_order, support_graph};
//! use chordalnet::network::{chordal_triangularize, Mode};
//! use chordalnet::queries::zero_count;
//! use chordalnet::ring::{parse_poly, Ring, DEFAULT_SPAIR_BUDGET};
//!
//! // Proper 3-colorings of a triangle over GF(13).
//! let ring = Ring::new(3, 13);
//! let system: Vec<_> = [
//!     "x0^3 - 1", "x1^3 - 1", "x2^3 - 1",
//!     "x0^2 + x0*x1 + x1^2", "x0^2 + x0*x2 + x2^2", "x1^2 + x1*x2 + x2^2",
//! ]
//! .iter()
//! .map(|s| parse_poly(ring, s).unwrap())
//! .collect();
//!
//! let graph = support_graph(ring.n, &system);
//! let cs = complete_with_order(&graph, &[0, 1, 2]);
//! let net = chordal_triangularize(
//!     &system, &cs, Mode::ZeroDim, true, false, DEFAULT_SPAIR_BUDGET,
//! )
//! .unwrap();
//! assert_eq!(zero_count(&net).unwrap().value, 6); // 3! colorings
//! ```

pub mod chordal;
pub mod cli;
pub mod decomp;
pub mod gf;
pub mod network;
pub mod queries;
pub mod ring;
pub mod rng;

pub use chordal::{ChordalStructure, Graph};
pub use network::ChordalNetwork;
pub use ring::{Poly, PolySystem, Ring};

#[cfg(test)]
mod sync_tests {
    // Finished values are immutable and safe to share between threads;
    // queries carry their own scratch state.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::Ring>();
        assert_send_sync::<crate::Poly>();
        assert_send_sync::<crate::PolySystem>();
        assert_send_sync::<crate::Graph>();
        assert_send_sync::<crate::ChordalStructure>();
        assert_send_sync::<crate::ChordalNetwork>();
        assert_send_sync::<crate::decomp::TriangularSet>();
        assert_send_sync::<crate::decomp::RegularSystem>();
    }
}
