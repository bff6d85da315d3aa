pub mod asp;
pub mod bayes;
pub mod coherency;
pub mod error;
pub mod rational;
pub mod syntax;
pub mod translate;
pub mod updates;
pub mod worlds;

pub use error::{Error, Result};
pub use rational::Rational;
pub use syntax::term::Term;
