//! Clause reordering: rewrite each clause's surface order to one of the six
//! core-element orders, or a per-sentence random order.
//!
//! Whole argument subtrees move as contiguous blocks. Negations, adverbial
//! modifiers, particles and auxiliaries stay adjacent to their verb on their
//! original side; relative pronouns and complementizers stay clause-initial;
//! all other dependents keep their side relative to the verb, emitted around
//! the core blocks. Embedded clauses are ordered before the clause containing
//! them is linearized, so a fronted complement is already internally ordered.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arguments::{is_relativizer_form, ArgumentRecord};
use crate::rng::sentence_rng;
use crate::treebank::{SentenceTree, Treebank};

/// Subject relations for movement purposes: nominal and clausal subjects.
pub const REORDER_SUBJECT_RELS: [&str; 4] = ["nsubj", "nsubjpass", "csubj", "csubjpass"];
/// Object relations for movement purposes: nominal objects and clausal
/// complements.
pub const REORDER_OBJECT_RELS: [&str; 3] = ["dobj", "ccomp", "xcomp"];
/// Dependents that stay glued to the verb on their original side.
pub const SATELLITE_RELS: [&str; 7] = ["neg", "advmod", "aux", "auxpass", "cop", "compound:prt", "prt"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoreOrder {
    Svo,
    Sov,
    Vos,
    Vso,
    Osv,
    Ovs,
    Flexible,
    Unchanged,
}

/// The six fixed orders, in the order used for sampling.
pub const FIXED_ORDERS: [CoreOrder; 6] = [
    CoreOrder::Svo,
    CoreOrder::Sov,
    CoreOrder::Vos,
    CoreOrder::Vso,
    CoreOrder::Osv,
    CoreOrder::Ovs,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Subject,
    Object,
    Verb,
}

impl CoreOrder {
    fn slots(self) -> Option<[Slot; 3]> {
        use Slot::*;
        match self {
            CoreOrder::Svo => Some([Subject, Verb, Object]),
            CoreOrder::Sov => Some([Subject, Object, Verb]),
            CoreOrder::Vos => Some([Verb, Object, Subject]),
            CoreOrder::Vso => Some([Verb, Subject, Object]),
            CoreOrder::Osv => Some([Object, Subject, Verb]),
            CoreOrder::Ovs => Some([Object, Verb, Subject]),
            CoreOrder::Flexible | CoreOrder::Unchanged => None,
        }
    }

    pub fn is_fixed(self) -> bool {
        self.slots().is_some()
    }
}

impl fmt::Display for CoreOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoreOrder::Svo => "svo",
            CoreOrder::Sov => "sov",
            CoreOrder::Vos => "vos",
            CoreOrder::Vso => "vso",
            CoreOrder::Osv => "osv",
            CoreOrder::Ovs => "ovs",
            CoreOrder::Flexible => "flexible",
            CoreOrder::Unchanged => "unchanged",
        };
        f.write_str(s)
    }
}

impl FromStr for CoreOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "svo" => Ok(CoreOrder::Svo),
            "sov" => Ok(CoreOrder::Sov),
            "vos" => Ok(CoreOrder::Vos),
            "vso" => Ok(CoreOrder::Vso),
            "osv" => Ok(CoreOrder::Osv),
            "ovs" => Ok(CoreOrder::Ovs),
            "flexible" => Ok(CoreOrder::Flexible),
            "unchanged" => Ok(CoreOrder::Unchanged),
            other => Err(format!("unknown order '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Before,
    After,
}

/// How one clause's direct-dependent subtrees move. The five groups
/// (subject, object, fixed satellites, side-preserving, pinned) partition the
/// verb's dependents.
#[derive(Debug, Clone, Default)]
pub struct ClausePlan {
    pub verb: usize,
    pub subject: Option<usize>,
    pub object: Option<usize>,
    pub subject_block: Vec<usize>,
    pub object_block: Vec<usize>,
    pub fixed_satellites: Vec<(usize, Side)>,
    pub side_preserving: Vec<(usize, Side)>,
    pub pinned: Vec<usize>,
}

/// True when `child` must keep its original clause-initial slot: a
/// complementizer, or a relative pronoun of a relative-clause verb.
fn is_pinned(tree: &SentenceTree, child: usize, verb: usize) -> bool {
    let child_tok = tree.token(child);
    if child_tok.deprel == "mark" {
        return true;
    }
    let verb_rel = tree.token(verb).deprel.as_str();
    is_relativizer_form(tree, child)
        && matches!(child_tok.deprel.as_str(), "nsubj" | "nsubjpass" | "dobj")
        && crate::arguments::RELCL_RELS.contains(&verb_rel)
}

/// Classifies the direct dependents of `verb` for movement.
pub fn plan_clause(tree: &SentenceTree, verb: usize) -> ClausePlan {
    let mut plan = ClausePlan { verb, ..Default::default() };
    for child in tree.children(verb) {
        let side = if child < verb { Side::Before } else { Side::After };
        if is_pinned(tree, child, verb) {
            plan.pinned.push(child);
            continue;
        }
        let rel = tree.token(child).deprel.as_str();
        if plan.subject.is_none() && REORDER_SUBJECT_RELS.contains(&rel) {
            plan.subject = Some(child);
            plan.subject_block = tree.subtree_indices(child);
        } else if plan.object.is_none() && REORDER_OBJECT_RELS.contains(&rel) {
            plan.object = Some(child);
            plan.object_block = tree.subtree_indices(child);
        } else if SATELLITE_RELS.contains(&rel) {
            plan.fixed_satellites.push((child, side));
        } else {
            plan.side_preserving.push((child, side));
        }
    }
    plan
}

/// A clause for reordering purposes: a verb or auxiliary governing at least
/// one core dependent. Nominal clause heads are left in place.
fn is_reorder_clause(tree: &SentenceTree, node: usize) -> bool {
    let tok = tree.token(node);
    if !matches!(tok.upos.as_str(), "VERB" | "AUX") {
        return false;
    }
    tree.children(node).into_iter().any(|c| {
        let rel = tree.token(c).deprel.as_str();
        REORDER_SUBJECT_RELS.contains(&rel) || REORDER_OBJECT_RELS.contains(&rel)
    })
}

fn subtree_start(tree: &SentenceTree, node: usize) -> usize {
    tree.subtree_indices(node)[0]
}

fn emit_subtree(tree: &SentenceTree, node: usize, slots: [Slot; 3], out: &mut Vec<usize>) {
    if !is_reorder_clause(tree, node) {
        // Not a clause: keep the node and its dependent blocks in original
        // relative order, recursing so embedded clauses still reorder.
        let mut units: Vec<(usize, Option<usize>)> = vec![(node, None)];
        for child in tree.children(node) {
            units.push((subtree_start(tree, child), Some(child)));
        }
        units.sort_by_key(|&(start, _)| start);
        for (_, unit) in units {
            match unit {
                None => out.push(node),
                Some(child) => emit_subtree(tree, child, slots, out),
            }
        }
        return;
    }

    let plan = plan_clause(tree, node);
    for &p in &plan.pinned {
        emit_subtree(tree, p, slots, out);
    }
    for &(c, side) in &plan.side_preserving {
        if side == Side::Before {
            emit_subtree(tree, c, slots, out);
        }
    }
    for slot in slots {
        match slot {
            Slot::Subject => {
                if let Some(s) = plan.subject {
                    emit_subtree(tree, s, slots, out);
                }
            }
            Slot::Object => {
                if let Some(o) = plan.object {
                    emit_subtree(tree, o, slots, out);
                }
            }
            Slot::Verb => {
                for &(c, side) in &plan.fixed_satellites {
                    if side == Side::Before {
                        emit_subtree(tree, c, slots, out);
                    }
                }
                out.push(node);
                for &(c, side) in &plan.fixed_satellites {
                    if side == Side::After {
                        emit_subtree(tree, c, slots, out);
                    }
                }
            }
        }
    }
    for &(c, side) in &plan.side_preserving {
        if side == Side::After {
            emit_subtree(tree, c, slots, out);
        }
    }
}

/// Uniform draw over the six fixed orders.
pub fn sample_order<R: Rng>(rng: &mut R) -> CoreOrder {
    FIXED_ORDERS[rng.gen_range(0..FIXED_ORDERS.len())]
}

/// Resolves `Flexible` to a fixed order for the sentence at `ordinal`, keyed
/// by `(seed, ordinal)` so corpora are reproducible under any scheduling.
pub fn resolve_order(order: CoreOrder, seed: u64, ordinal: u64) -> CoreOrder {
    match order {
        CoreOrder::Flexible => sample_order(&mut sentence_rng(seed, ordinal)),
        fixed => fixed,
    }
}

/// Reorders one sentence. Head links are re-indexed consistently; the token
/// multiset is unchanged; sentence-final punctuation stays final.
pub fn reorder_sentence(tree: &SentenceTree, order: CoreOrder, seed: u64, ordinal: u64) -> SentenceTree {
    let order = resolve_order(order, seed, ordinal);
    let slots = match order.slots() {
        Some(s) => s,
        None => return tree.clone(), // Unchanged
    };
    let n = tree.len();
    let mut emitted = Vec::with_capacity(n);
    emit_subtree(tree, tree.root(), slots, &mut emitted);
    debug_assert_eq!(emitted.len(), n, "emission must be a permutation");

    if tree.token(n).upos == "PUNCT" {
        if let Some(pos) = emitted.iter().position(|&i| i == n) {
            emitted.remove(pos);
            emitted.push(n);
        }
    }

    // old index -> new index
    let mut new_index = vec![0usize; n + 1];
    for (pos, &old) in emitted.iter().enumerate() {
        new_index[old] = pos + 1;
    }
    let tokens = emitted
        .iter()
        .enumerate()
        .map(|(pos, &old)| {
            let mut tok = tree.token(old).clone();
            tok.index = pos + 1;
            tok.head = if tok.head == 0 { 0 } else { new_index[tok.head] };
            tok
        })
        .collect();
    SentenceTree::new(tree.sent_id.clone(), tokens).expect("reordering preserves validity")
}

/// Reorders a whole treebank, in parallel across sentences.
pub fn reorder_treebank(tb: &Treebank, order: CoreOrder, seed: u64) -> Treebank {
    let sentences = tb
        .sentences
        .par_iter()
        .enumerate()
        .map(|(i, s)| reorder_sentence(s, order, seed, i as u64))
        .collect();
    Treebank { source_name: tb.source_name.clone(), sentences }
}

/// Checks that a moved block's tokens appear contiguously and in their
/// original internal order in the reordered sentence.
pub fn block_is_contiguous(original_block: &[usize], reordered: &SentenceTree, original: &SentenceTree) -> bool {
    if original_block.is_empty() {
        return true;
    }
    let forms: Vec<&str> = original_block.iter().map(|&i| original.token(i).form.as_str()).collect();
    let out: Vec<&str> = reordered.tokens().iter().map(|t| t.form.as_str()).collect();
    out.windows(forms.len()).any(|w| w == forms.as_slice())
}

/// Record multiset key that survives re-indexing: used to check that
/// reordering does not change what gets collected.
pub fn record_key(tree: &SentenceTree, rec: &ArgumentRecord) -> (String, String, u8, u8) {
    fn tag(p: crate::arguments::Plurality) -> u8 {
        use crate::arguments::Plurality::*;
        match p {
            Singular => 0,
            Plural => 1,
            None => 2,
            Unknown => 3,
        }
    }
    (
        rec.sent_id.clone(),
        tree.token(rec.verb).form.clone(),
        tag(rec.subject_plurality),
        tag(rec.object_plurality),
    )
}
