//! Compiles every chapter of the book as a doc-test.
//!
//! mdbook cannot test snippets that depend on an external crate, so each
//! chapter is included here as the docs of an empty module and `cargo test`
//! runs its code blocks. A failing test names the chapter module it came
//! from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/manifests.md")]
pub mod manifests {}
#[doc = include_str!("../../../book/src/regions.md")]
pub mod regions {}
#[doc = include_str!("../../../book/src/turtle.md")]
pub mod turtle {}
#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}
#[doc = include_str!("../../../book/src/resolving.md")]
pub mod resolving {}
#[doc = include_str!("../../../book/src/rendering.md")]
pub mod rendering {}
#[doc = include_str!("../../../book/src/descriptions.md")]
pub mod descriptions {}
#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
