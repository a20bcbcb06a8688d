//! Job-market-aware course recommendation.
//!
//! The crate models learners, courses and jobs over a shared skill
//! taxonomy with three proficiency levels, scores profiles against jobs
//! and courses with asymmetric similarity functions, and wraps course
//! enrollment in an episodic environment. On top of that sit four
//! sequential recommenders (exhaustive search, stepwise greedy, a learned
//! action-value agent and a learned stochastic policy), a text pipeline
//! that extracts leveled skills from documents and matches them to the
//! taxonomy, dataset tooling with a seeded synthetic generator, and an
//! experiment runner.

pub mod data;
pub mod env;
pub mod eval;
pub mod nn;
pub mod recommend;
pub mod sem;
pub mod skill;
