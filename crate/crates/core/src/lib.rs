//! Gödel–Löb provability logic as executable mathematics.
//!
//! - [`syntax`]: formulas, parsing, printing, subformula closure.
//! - [`kripke`]: finite Kripke models, forcing, frame properties.
//! - [`calculus`]: the Hilbert calculus, proof checker and lemma library.
//! - [`completeness`]: the decision procedure and countermodel certificates.
//! - [`bisim`]: bisimulation between finite models.
//! - [`cli`]: the `gl` command-line tool.
//!
//! ```
//! use gl_core::{decide, parse};
//!
//! let f = parse("Box p --> Box Box p").unwrap();
//! assert!(decide(&f).unwrap().is_theorem());
//!
//! let g = parse("Box Box p --> Box p").unwrap();
//! let cert = decide(&g).unwrap().countermodel().unwrap().to_certificate();
//! cert.verify().unwrap();
//! ```

pub mod bisim;
pub mod calculus;
pub mod cli;
pub mod completeness;
pub mod kripke;
pub mod syntax;

pub use calculus::{check_proof, is_axiom, lemma, Proof, Schema, Step};
pub use completeness::{decide, verify_certificate, Verdict};
pub use kripke::{Frame, Model};
pub use syntax::{parse, Formula};
