// The guide chapters under book/src/ contain runnable snippets. Including
// them as doc comments here makes `cargo test` compile and run every code
// block, so the book can never drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/tokenization.md")]
pub mod tokenization {}

#[doc = include_str!("../../../book/src/queries.md")]
pub mod queries {}

#[doc = include_str!("../../../book/src/blind-levels.md")]
pub mod blind_levels {}

#[doc = include_str!("../../../book/src/wildcards.md")]
pub mod wildcards {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
