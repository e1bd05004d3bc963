//! The guide's chapters, compiled so that every listing runs as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}
#[doc = include_str!("../../../book/src/pareto.md")]
pub mod pareto {}
#[doc = include_str!("../../../book/src/context.md")]
pub mod context {}
#[doc = include_str!("../../../book/src/objectives.md")]
pub mod objectives {}
#[doc = include_str!("../../../book/src/social_goals.md")]
pub mod social_goals {}
#[doc = include_str!("../../../book/src/planner.md")]
pub mod planner {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
