//! Safety game synthesis from AIGER circuits with SAT- and QBF-based learning.
//!
//! The pipeline: parse an AIGER safety specification with controllable and
//! uncontrollable inputs ([`aig`]), compute a winning region or winning area
//! in CNF ([`win`], [`templ`], [`portfolio`]), extract combinational circuits
//! for the controllable inputs ([`extract`]), and cross-check everything
//! against an explicit-state oracle and inductive certificates ([`verify`]).
//! The substrate is a canonical CNF toolbox ([`cnf`]), an incremental CDCL
//! solver ([`sat`]) and a CEGAR-based 2QBF solver ([`qbf`]).

pub mod aig;
pub mod bench;
pub mod cnf;
pub mod extract;
pub mod portfolio;
pub mod qbf;
pub mod sat;
pub mod templ;
pub mod verify;
pub mod win;
