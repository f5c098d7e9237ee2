//! Small hand-annotated sentences used throughout the tests and examples.
//!
//! Relation names follow the UD v1 inventory (`dobj`, `neg`, `nsubjpass`);
//! v2-style input is handled by the alias map in [`crate::arguments`].

/// "they say the broker took them out for lunch frequently ."
pub const BROKER_LUNCH: &str = include_str!("broker_lunch.conllu");

/// "But these are not the differences that make headlines ."
/// Copular clause headed by the auxiliary, with the predicate nominal as its
/// object and the negation attached to the nominal.
pub const MAKE_HEADLINES: &str = include_str!("make_headlines.conllu");

/// "Treasury bonds , which pay lower interest rates ." — relative pronoun
/// subject whose plurality comes from the referent.
pub const TREASURY_BONDS: &str = include_str!("treasury_bonds.conllu");

/// "The state gave CenTrust 30 days to sell the Rubens ." — transitive with
/// an excluded subjectless xcomp clause.
pub const CENTRUST: &str = include_str!("centrust.conllu");

/// "The gap between winners and losers will grow ." — intransitive with a
/// non-object attractor inside the subject.
pub const GAP_GROW: &str = include_str!("gap_grow.conllu");
