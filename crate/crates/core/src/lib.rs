pub mod cli;
pub mod decider;
pub mod dmit;
pub mod error;
pub mod ff_oracle;
mod hull;
pub mod linalg;
pub mod polytope;
pub mod supports;
pub mod transversal;
pub mod tropical;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/supports.md")]
    mod supports {}
    #[doc = include_str!("../../../book/src/transversals.md")]
    mod transversals {}
    #[doc = include_str!("../../../book/src/dmit.md")]
    mod dmit {}
    #[doc = include_str!("../../../book/src/mixed-volume.md")]
    mod mixed_volume {}
    #[doc = include_str!("../../../book/src/decider.md")]
    mod decider {}
    #[doc = include_str!("../../../book/src/root-counts.md")]
    mod root_counts {}
    #[doc = include_str!("../../../book/src/tropical.md")]
    mod tropical {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
