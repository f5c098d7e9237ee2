//! Verb-argument collection: find each verb's subject and object heads and
//! resolve their pluralities, producing the labeling ground truth.

use serde::{Deserialize, Serialize};

use crate::treebank::SentenceTree;

/// Relations that attach a nominal subject to its verb.
pub const SUBJECT_RELS: [&str; 2] = ["nsubj", "nsubjpass"];
/// Relations that attach a direct object.
pub const OBJECT_RELS: [&str; 1] = ["dobj"];
/// Relations marking a relative clause on its head noun.
pub const RELCL_RELS: [&str; 2] = ["acl:relcl", "rcmod"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plurality {
    #[serde(rename = "sg")]
    Singular,
    #[serde(rename = "pl")]
    Plural,
    None,
    Unknown,
}

impl Plurality {
    pub fn is_known(self) -> bool {
        matches!(self, Plurality::Singular | Plurality::Plural)
    }

    pub fn opposite(self, other: Plurality) -> bool {
        matches!(
            (self, other),
            (Plurality::Singular, Plurality::Plural) | (Plurality::Plural, Plurality::Singular)
        )
    }
}

/// One verb with its resolved arguments. `object_head` is absent exactly when
/// `object_plurality` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentRecord {
    pub verb: usize,
    pub subject_head: usize,
    pub subject_plurality: Plurality,
    pub object_head: Option<usize>,
    pub object_plurality: Plurality,
    pub sent_id: String,
}

/// Exclusion counters kept alongside the emitted records; surfaced by the
/// stats command.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectCounters {
    /// Candidate verbs with an eligible subject edge.
    pub subject_bearing: usize,
    /// Subject-bearing verbs skipped because they head an xcomp edge.
    pub excluded_xcomp: usize,
    /// Records dropped because a collected argument's plurality was unknown.
    pub dropped_unknown: usize,
    /// Candidate verbs without an eligible subject edge.
    pub no_subject: usize,
    pub emitted: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Collected {
    pub records: Vec<ArgumentRecord>,
    pub counters: CollectCounters,
}

const PLURAL_PRONOUNS: [&str; 6] = ["they", "we", "them", "us", "these", "those"];
const SINGULAR_PRONOUNS: [&str; 9] = ["he", "she", "it", "him", "her", "this", "that", "i", "me"];

/// Argument heads the task collects: nouns, proper nouns, pronouns,
/// adjectives, cardinal numbers, relative pronouns.
pub fn eligible_argument_head(tree: &SentenceTree, node: usize) -> bool {
    let tok = tree.token(node);
    matches!(tok.upos.as_str(), "NOUN" | "PROPN" | "PRON" | "ADJ" | "NUM")
        || matches!(tok.xpos.as_str(), "WDT" | "WP")
}

/// A wh-word or relativizer form, irrespective of structural position.
pub fn is_relativizer_form(tree: &SentenceTree, node: usize) -> bool {
    let tok = tree.token(node);
    matches!(tok.xpos.as_str(), "WDT" | "WP" | "WP$")
        || (matches!(tok.upos.as_str(), "PRON" | "DET")
            && matches!(
                tok.form.to_lowercase().as_str(),
                "that" | "who" | "whom" | "which" | "whose"
            ))
}

/// True when `node` is a relative pronoun serving as subject or object inside
/// a relative clause.
pub fn is_relative_pronoun(tree: &SentenceTree, node: usize) -> bool {
    let tok = tree.token(node);
    is_relativizer_form(tree, node)
        && (SUBJECT_RELS.contains(&tok.deprel.as_str()) || OBJECT_RELS.contains(&tok.deprel.as_str()))
        && referent_of_relative_pronoun(tree, node).is_some()
}

/// The noun a relative clause modifies: the relativizer's governor is the
/// relative-clause verb, whose own governor (via `acl:relcl`/`rcmod`) is the
/// referent. Absent when the chain does not match.
pub fn referent_of_relative_pronoun(tree: &SentenceTree, relpron: usize) -> Option<usize> {
    let verb = tree.token(relpron).head;
    if verb == 0 {
        return None;
    }
    let verb_tok = tree.token(verb);
    if RELCL_RELS.contains(&verb_tok.deprel.as_str()) && verb_tok.head != 0 {
        Some(verb_tok.head)
    } else {
        None
    }
}

/// Plurality of the token itself, with no relative-pronoun referent
/// resolution. Attractor scans use this directly.
pub fn surface_plurality(tree: &SentenceTree, node: usize) -> Plurality {
    let tok = tree.token(node);
    match tok.feat("Number") {
        Some("Sing") => return Plurality::Singular,
        Some("Plur") => return Plurality::Plural,
        _ => {}
    }
    match tok.xpos.as_str() {
        "NNS" | "NNPS" => return Plurality::Plural,
        "NN" | "NNP" => return Plurality::Singular,
        _ => {}
    }
    let lowered = tok.form.to_lowercase();
    if PLURAL_PRONOUNS.contains(&lowered.as_str()) {
        return Plurality::Plural;
    }
    if SINGULAR_PRONOUNS.contains(&lowered.as_str()) {
        return Plurality::Singular;
    }
    if tok.upos == "NUM" || tok.xpos == "CD" {
        return if lowered == "1" || lowered == "one" {
            Plurality::Singular
        } else {
            Plurality::Plural
        };
    }
    Plurality::Unknown
}

/// Plurality of a candidate argument head. Relative pronouns take the
/// plurality of their referent; everything else resolves from features, the
/// PTB tag, the pronoun lexicon, then the cardinal rule.
pub fn resolve_plurality(tree: &SentenceTree, node: usize) -> Plurality {
    if is_relativizer_form(tree, node) {
        if let Some(referent) = referent_of_relative_pronoun(tree, node) {
            return surface_plurality(tree, referent);
        }
    }
    surface_plurality(tree, node)
}

fn leftmost_eligible_child(tree: &SentenceTree, verb: usize, rels: &[&str]) -> Option<usize> {
    tree.children_with_rel(verb, rels)
        .into_iter()
        .find(|&c| eligible_argument_head(tree, c))
}

fn has_eligible_subject(tree: &SentenceTree, verb: usize) -> bool {
    leftmost_eligible_child(tree, verb, &SUBJECT_RELS).is_some()
}

/// A token the pipeline treats as a predicating verb: any VERB, or a root
/// auxiliary with a subject (copular clauses like "these are not the
/// differences").
pub fn is_candidate_verb(tree: &SentenceTree, node: usize) -> bool {
    let tok = tree.token(node);
    tok.upos == "VERB" || (tok.upos == "AUX" && tok.head == 0 && has_eligible_subject(tree, node))
}

/// Collects one record per subject-bearing verb. Verbs attached to their
/// governor via `xcomp` are excluded; records with an unknown argument
/// plurality are dropped and counted.
pub fn collect_records(tree: &SentenceTree) -> Collected {
    let mut out = Collected::default();
    for tok in tree.tokens() {
        if !is_candidate_verb(tree, tok.index) {
            continue;
        }
        let subject = match leftmost_eligible_child(tree, tok.index, &SUBJECT_RELS) {
            Some(s) => s,
            None => {
                out.counters.no_subject += 1;
                continue;
            }
        };
        out.counters.subject_bearing += 1;
        if tok.deprel == "xcomp" {
            out.counters.excluded_xcomp += 1;
            continue;
        }
        let subject_plurality = resolve_plurality(tree, subject);
        if !subject_plurality.is_known() {
            out.counters.dropped_unknown += 1;
            continue;
        }
        let object = leftmost_eligible_child(tree, tok.index, &OBJECT_RELS);
        let object_plurality = match object {
            Some(o) => {
                let p = resolve_plurality(tree, o);
                if !p.is_known() {
                    out.counters.dropped_unknown += 1;
                    continue;
                }
                p
            }
            None => Plurality::None,
        };
        out.counters.emitted += 1;
        out.records.push(ArgumentRecord {
            verb: tok.index,
            subject_head: subject,
            subject_plurality,
            object_head: object,
            object_plurality,
            sent_id: tree.sent_id.clone(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::treebank::parse_conllu;

    fn tree(text: &str) -> SentenceTree {
        parse_conllu(text, "t").unwrap().sentences.remove(0)
    }

    fn idx(tree: &SentenceTree, form: &str) -> usize {
        tree.tokens().iter().find(|t| t.form == form).unwrap().index
    }

    #[test]
    fn relative_pronoun_takes_referent_plurality() {
        let s = tree(fixtures::TREASURY_BONDS);
        let which = idx(&s, "which");
        assert_eq!(referent_of_relative_pronoun(&s, which), Some(idx(&s, "bonds")));
        assert_eq!(resolve_plurality(&s, which), Plurality::Plural);
    }

    #[test]
    fn that_relativizer_resolves_to_differences() {
        let s = tree(fixtures::MAKE_HEADLINES);
        let that = idx(&s, "that");
        assert_eq!(referent_of_relative_pronoun(&s, that), Some(idx(&s, "differences")));
        assert_eq!(resolve_plurality(&s, that), Plurality::Plural);
    }

    #[test]
    fn relativizer_without_relcl_governor_has_no_referent() {
        // "that" as a plain demonstrative subject: no acl:relcl in the chain.
        let s = tree(
            "1\tthat\tthat\tPRON\tDT\t_\t2\tnsubj\t_\t_\n\
             2\tworks\twork\tVERB\tVBZ\t_\t0\troot\t_\t_\n",
        );
        assert_eq!(referent_of_relative_pronoun(&s, 1), None);
        // Falls back to the pronoun lexicon.
        assert_eq!(resolve_plurality(&s, 1), Plurality::Singular);
    }

    #[test]
    fn plain_nn_is_singular() {
        let s = tree(fixtures::BROKER_LUNCH);
        assert_eq!(resolve_plurality(&s, idx(&s, "lunch")), Plurality::Singular);
        assert_eq!(resolve_plurality(&s, idx(&s, "they")), Plurality::Plural);
    }

    #[test]
    fn cardinal_rule() {
        let s = tree(
            "1\tone\tone\tNUM\tCD\t_\t2\tnsubj\t_\t_\n\
             2\tremains\tremain\tVERB\tVBZ\t_\t0\troot\t_\t_\n\
             3\tof\tof\tADP\tIN\t_\t4\tcase\t_\t_\n\
             4\t30\t30\tNUM\tCD\t_\t2\tnmod\t_\t_\n",
        );
        assert_eq!(resolve_plurality(&s, 1), Plurality::Singular);
        assert_eq!(resolve_plurality(&s, 4), Plurality::Plural);
    }

    #[test]
    fn collects_broker_fixture_records() {
        let s = tree(fixtures::BROKER_LUNCH);
        let collected = collect_records(&s);
        assert_eq!(collected.records.len(), 2);
        let say = &collected.records[0];
        assert_eq!(s.token(say.verb).form, "say");
        assert_eq!(say.subject_plurality, Plurality::Plural);
        assert_eq!(say.object_head, None);
        assert_eq!(say.object_plurality, Plurality::None);
        let took = &collected.records[1];
        assert_eq!(s.token(took.verb).form, "took");
        assert_eq!(s.token(took.subject_head).form, "broker");
        assert_eq!(took.subject_plurality, Plurality::Singular);
        assert_eq!(s.token(took.object_head.unwrap()).form, "them");
        assert_eq!(took.object_plurality, Plurality::Plural);
    }

    #[test]
    fn centrust_record_and_xcomp_exclusion() {
        let s = tree(fixtures::CENTRUST);
        let collected = collect_records(&s);
        assert_eq!(collected.records.len(), 1);
        let gave = &collected.records[0];
        assert_eq!(s.token(gave.verb).form, "gave");
        assert_eq!(gave.subject_plurality, Plurality::Singular);
        assert_eq!(s.token(gave.object_head.unwrap()).form, "days");
        assert_eq!(gave.object_plurality, Plurality::Plural);
        // "sell" has no subject; it never becomes a record.
        assert_eq!(collected.counters.no_subject, 1);
    }

    #[test]
    fn xcomp_verb_with_subject_is_counted_excluded() {
        let s = tree(
            "1\tthey\tthey\tPRON\tPRP\tNumber=Plur\t2\tnsubj\t_\t_\n\
             2\twant\twant\tVERB\tVBP\t_\t0\troot\t_\t_\n\
             3\tprices\tprice\tNOUN\tNNS\tNumber=Plur\t4\tnsubj\t_\t_\n\
             4\tdrop\tdrop\tVERB\tVB\t_\t2\txcomp\t_\t_\n",
        );
        let collected = collect_records(&s);
        assert_eq!(collected.counters.excluded_xcomp, 1);
        assert_eq!(collected.counters.subject_bearing, 2);
        assert_eq!(collected.records.len(), 1);
        assert_eq!(
            collected.counters.subject_bearing,
            collected.counters.excluded_xcomp + collected.counters.emitted
        );
    }

    #[test]
    fn aux_root_copula_counts_as_verb() {
        let s = tree(fixtures::MAKE_HEADLINES);
        let collected = collect_records(&s);
        let are = collected.records.iter().find(|r| s.token(r.verb).form == "are").unwrap();
        assert_eq!(are.subject_plurality, Plurality::Plural);
        assert_eq!(s.token(are.object_head.unwrap()).form, "differences");
    }

    #[test]
    fn tree_without_verbs_yields_nothing() {
        let s = tree("1\thello\thello\tINTJ\tUH\t_\t0\troot\t_\t_\n");
        assert!(collect_records(&s).records.is_empty());
    }

    #[test]
    fn unknown_plurality_drops_record() {
        // Adjective head with no feature: unknown, dropped.
        let s = tree(
            "1\tpoor\tpoor\tADJ\tJJ\t_\t2\tnsubj\t_\t_\n\
             2\tsuffer\tsuffer\tVERB\tVBP\t_\t0\troot\t_\t_\n",
        );
        let collected = collect_records(&s);
        assert!(collected.records.is_empty());
        assert_eq!(collected.counters.dropped_unknown, 1);
    }
}
