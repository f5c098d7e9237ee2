//! Synthetic case and agreement morphology: strip English number marking and
//! attach fused suffixes to argument heads and verbs.
//!
//! Suffixes are concatenated directly onto the demarked form with no
//! separator; decoding them is left to the character-n-gram embedder.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arguments::{ArgumentRecord, Plurality};
use crate::treebank::{SentenceTree, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseSystem {
    None,
    Unambiguous,
    Syncretic,
    ArgumentOnly,
}

impl fmt::Display for CaseSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseSystem::None => "none",
            CaseSystem::Unambiguous => "unambiguous",
            CaseSystem::Syncretic => "syncretic",
            CaseSystem::ArgumentOnly => "argument-only",
        };
        f.write_str(s)
    }
}

impl FromStr for CaseSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "none" => Ok(CaseSystem::None),
            "unambiguous" => Ok(CaseSystem::Unambiguous),
            "syncretic" => Ok(CaseSystem::Syncretic),
            "argument-only" | "argument_only" => Ok(CaseSystem::ArgumentOnly),
            other => Err(format!("unknown case system '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Subject,
    Object,
    IndirectObject,
}

/// What gets marked. Agreement experiments use `mark_verbs` alone; case
/// experiments set both flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingConfig {
    pub case_system: CaseSystem,
    pub mark_verbs: bool,
    pub mark_nouns: bool,
}

#[derive(Debug, Error)]
pub enum MorphError {
    #[error("no case suffix for plurality {0:?}")]
    NoSuffix(Plurality),
    #[error("marking nouns requires a case system other than none")]
    NounsWithoutCase,
    #[error("sentence {sent}: record references missing token index {index}")]
    MissingIndex { sent: String, index: usize },
}

impl MarkingConfig {
    pub fn new(case_system: CaseSystem, mark_verbs: bool, mark_nouns: bool) -> Result<Self, MorphError> {
        if mark_nouns && case_system == CaseSystem::None {
            return Err(MorphError::NounsWithoutCase);
        }
        Ok(MarkingConfig { case_system, mark_verbs, mark_nouns })
    }

    /// No marking at all: the identity configuration.
    pub fn none() -> Self {
        MarkingConfig { case_system: CaseSystem::None, mark_verbs: false, mark_nouns: false }
    }

    /// Polypersonal agreement suffixes on verbs only.
    pub fn agreement_only() -> Self {
        MarkingConfig { case_system: CaseSystem::None, mark_verbs: true, mark_nouns: false }
    }

    /// Case suffixes on argument heads plus agreement suffixes on verbs.
    pub fn cased(case_system: CaseSystem) -> Self {
        MarkingConfig { case_system, mark_verbs: true, mark_nouns: true }
    }

    /// Suffix system used on verbs: verb agreement always draws from a real
    /// suffix table, so a `None` case system falls back to the unambiguous
    /// one.
    pub fn verb_system(&self) -> CaseSystem {
        match self.case_system {
            CaseSystem::None => CaseSystem::Unambiguous,
            other => other,
        }
    }
}

/// Fused case suffix for `(role, plurality)` under `system`.
pub fn case_suffix(role: Role, plurality: Plurality, system: CaseSystem) -> Result<&'static str, MorphError> {
    use CaseSystem::*;
    use Plurality::*;
    use Role::*;
    let sg = match plurality {
        Singular => true,
        Plural => false,
        other => return Err(MorphError::NoSuffix(other)),
    };
    let system = if system == None { Unambiguous } else { system };
    Ok(match (system, role, sg) {
        (Unambiguous, Subject, true) => "kar",
        (Unambiguous, Subject, false) => "kon",
        (Unambiguous, Object, true) => "kin",
        (Unambiguous, Object, false) => "ker",
        (Unambiguous, IndirectObject, true) => "ken",
        (Unambiguous, IndirectObject, false) => "kre",
        // Identical to the unambiguous table except that plural objects
        // share "kar" with singular subjects.
        (Syncretic, Subject, true) => "kar",
        (Syncretic, Subject, false) => "kon",
        (Syncretic, Object, true) => "kin",
        (Syncretic, Object, false) => "kar",
        (Syncretic, IndirectObject, true) => "ken",
        (Syncretic, IndirectObject, false) => "kre",
        // Plurality only, the same for every role.
        (ArgumentOnly, _, true) => "kin",
        (ArgumentOnly, _, false) => "ker",
        (None, ..) => unreachable!("mapped to unambiguous above"),
    })
}

/// Verb agreement suffix: subject suffix then object suffix, the object part
/// omitted for intransitives.
pub fn verb_agreement_suffix(subject: Plurality, object: Plurality, system: CaseSystem) -> String {
    let mut s = case_suffix(Role::Subject, subject, system)
        .expect("subject plurality must be singular or plural")
        .to_string();
    if object.is_known() {
        s.push_str(case_suffix(Role::Object, object, system).expect("object plurality checked"));
    }
    s
}

fn keep_initial_case(original: &str, replacement: &str) -> String {
    let starts_upper = original.chars().next().is_some_and(|c| c.is_uppercase());
    if starts_upper && replacement != "I" {
        let mut chars = replacement.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().chain(chars).collect(),
            None => String::new(),
        }
    } else {
        replacement.to_string()
    }
}

/// Removes the third-person-singular present marker from a verb form.
/// Irregulars map directly; regular forms are stripped by lemma lookup.
pub fn demark_verb(token: &Token) -> String {
    let lowered = token.form.to_lowercase();
    let irregular = match lowered.as_str() {
        "has" => Some("have"),
        "is" => Some("are"),
        "was" => Some("were"),
        "does" => Some("do"),
        _ => Option::None,
    };
    if let Some(rep) = irregular {
        return keep_initial_case(&token.form, rep);
    }
    if token.xpos == "VBZ" {
        let lemma = token.lemma.to_lowercase();
        let stripped = lowered == format!("{lemma}s")
            || lowered == format!("{lemma}es")
            || (lemma.ends_with('y') && lowered == format!("{}ies", &lemma[..lemma.len() - 1]));
        if stripped {
            return keep_initial_case(&token.form, &token.lemma);
        }
    }
    token.form.clone()
}

/// Strips plurality and English case from an argument head before a suffix
/// is attached: nouns go to their lemma, pronouns to a nominative base.
pub fn demark_noun(token: &Token) -> String {
    match token.upos.as_str() {
        "NOUN" | "PROPN" => {
            if token.lemma == "_" {
                token.form.clone()
            } else {
                keep_initial_case(&token.form, &token.lemma)
            }
        }
        "PRON" => {
            let base = match token.form.to_lowercase().as_str() {
                "them" | "they" => Some("they"),
                "him" | "he" => Some("he"),
                "us" | "we" => Some("we"),
                "me" | "i" => Some("I"),
                "her" | "she" => Some("she"),
                "it" => Some("it"),
                _ => Option::None,
            };
            match base {
                Some(b) => keep_initial_case(&token.form, b),
                Option::None => token.form.clone(),
            }
        }
        _ => token.form.clone(),
    }
}

/// Rewrites verb and argument-head forms per the marking configuration.
/// Only forms change; indices, heads and relations are untouched.
pub fn apply_marking(
    tree: &SentenceTree,
    records: &[ArgumentRecord],
    config: &MarkingConfig,
) -> Result<SentenceTree, MorphError> {
    let mut tokens: Vec<Token> = tree.tokens().to_vec();
    let n = tokens.len();
    let check = |index: usize| -> Result<usize, MorphError> {
        if index == 0 || index > n {
            Err(MorphError::MissingIndex { sent: tree.sent_id.clone(), index })
        } else {
            Ok(index)
        }
    };
    for rec in records {
        if config.mark_verbs {
            let v = check(rec.verb)?;
            let suffix = verb_agreement_suffix(rec.subject_plurality, rec.object_plurality, config.verb_system());
            let tok = &tokens[v - 1];
            tokens[v - 1].form = format!("{}{}", demark_verb(tok), suffix);
        }
        if config.mark_nouns {
            let s = check(rec.subject_head)?;
            let suffix = case_suffix(Role::Subject, rec.subject_plurality, config.case_system)?;
            let tok = &tokens[s - 1];
            tokens[s - 1].form = format!("{}{}", demark_noun(tok), suffix);
            if let Some(o) = rec.object_head {
                let o = check(o)?;
                let suffix = case_suffix(Role::Object, rec.object_plurality, config.case_system)?;
                let tok = &tokens[o - 1];
                tokens[o - 1].form = format!("{}{}", demark_noun(tok), suffix);
            }
        }
    }
    Ok(SentenceTree::new(tree.sent_id.clone(), tokens).expect("marking preserves validity"))
}
