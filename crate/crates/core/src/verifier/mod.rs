//! Witness searches, per-class verdicts and the explicit constructions.

pub mod constructions;
pub mod select;
pub mod survey;
pub mod table1;
pub mod witness;

pub use constructions::{
    alt_witness, borel_commute_check, wreath_lemma_check, AltWitness, BlockElement, BorelReport, WreathCase,
    WreathConjugatorRecord,
};
pub use select::{candidates, select_class, Candidate, ClassSelector};
pub use survey::{theorem_a_survey, ClassVerdict, SurveyOptions, SurveyReport, Verdict};
pub use table1::{match_exception, ExceptionMatch, ExceptionRow, EXCEPTION_ROWS};
pub use witness::{
    find_witness, pair_witness, test_tuple, tuple_witness, SearchMode, Target, WitnessQuery, WitnessReport,
    WitnessStatus, DEFAULT_BUDGET,
};
