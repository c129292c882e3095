pub mod bisystem;
pub mod budget;
pub mod error;
pub mod fgab;
pub mod linalg;
pub mod nerve;
pub mod posetlim;
pub mod scenarios;
pub mod simplicial;
pub mod towers;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub mod intro {}
    #[doc = include_str!("../../../book/src/groups.md")]
    pub mod groups {}
    #[doc = include_str!("../../../book/src/towers.md")]
    pub mod towers {}
    #[doc = include_str!("../../../book/src/nerves.md")]
    pub mod nerves {}
    #[doc = include_str!("../../../book/src/bisystems.md")]
    pub mod bisystems {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
