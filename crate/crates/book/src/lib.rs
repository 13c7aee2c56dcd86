//! Compiles every chapter of `book/` as rustdoc so `cargo test` runs its code
//! blocks. One module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("../../../book/src/exact.md")]
pub mod exact {}
#[doc = include_str!("../../../book/src/local.md")]
pub mod local {}
#[doc = include_str!("../../../book/src/lowdeg.md")]
pub mod lowdeg {}
#[doc = include_str!("../../../book/src/ogp.md")]
pub mod ogp {}
#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
