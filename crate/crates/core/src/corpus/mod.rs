//! Problem files, the ordered fact corpus, dependency records and dataset splits.

pub mod ast;
pub mod deps;
pub mod minimize;
pub mod split;
pub mod tptp;

pub use ast::{sym, Atom, Clause, Fact, Formula, Literal, Origin, Problem, Role, Rule, Symbol, Term, EQUALITY};
pub use deps::{
    chronology_filter, load_dependency_db, parse_dependencies, write_dependencies, Corpus, CorpusError, DependencyDb, ProofDeps,
    Provenance,
};
pub use minimize::{minimize_premises, BadVariant, SubproblemEvidence, DEFAULT_TOP_B};
pub use split::{split_corpus, split_sizes, Split, SplitError, DEFAULT_RATIOS};
pub use tptp::{
    parse_tptp, parse_tptp_file, parse_tptp_with, print_clause, print_formula, print_literal, print_statement, print_statements,
    print_term, Body, GeneralTerm, Location, ParseError, ParseOptions, Statement, SymbolKind,
};
