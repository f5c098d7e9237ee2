//! Corpus-level composition of the transformation steps: reorder, collect,
//! mark, and build instances — parallel across sentences.

use rayon::prelude::*;

use crate::arguments::{collect_records, CollectCounters};
use crate::dataset::{build_instances, PredictionInstance};
use crate::morph::{apply_marking, MarkingConfig, MorphError};
use crate::reorder::{reorder_sentence, CoreOrder};
use crate::treebank::{SentenceTree, Treebank};

/// Transformed corpus plus its prediction instances.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub treebank: Treebank,
    pub instances: Vec<PredictionInstance>,
    pub counters: CollectCounters,
}

/// Reorders and marks one sentence, returning the final tree, its records'
/// instances, and the collection counters.
pub fn transform_sentence(
    tree: &SentenceTree,
    order: CoreOrder,
    seed: u64,
    ordinal: u64,
    marking: &MarkingConfig,
) -> Result<(SentenceTree, Vec<PredictionInstance>, CollectCounters), MorphError> {
    let reordered = reorder_sentence(tree, order, seed, ordinal);
    let collected = collect_records(&reordered);
    let marked = apply_marking(&reordered, &collected.records, marking)?;
    let instances = build_instances(&marked, &collected.records, order, marking.case_system);
    Ok((marked, instances, collected.counters))
}

/// Transforms a whole treebank.
pub fn transform_treebank(
    tb: &Treebank,
    order: CoreOrder,
    seed: u64,
    marking: &MarkingConfig,
) -> Result<Corpus, MorphError> {
    let results: Result<Vec<_>, MorphError> = tb
        .sentences
        .par_iter()
        .enumerate()
        .map(|(i, s)| transform_sentence(s, order, seed, i as u64, marking))
        .collect();
    let mut sentences = Vec::with_capacity(tb.sentences.len());
    let mut instances = Vec::new();
    let mut counters = CollectCounters::default();
    for (tree, inst, c) in results? {
        sentences.push(tree);
        instances.extend(inst);
        counters.subject_bearing += c.subject_bearing;
        counters.excluded_xcomp += c.excluded_xcomp;
        counters.dropped_unknown += c.dropped_unknown;
        counters.no_subject += c.no_subject;
        counters.emitted += c.emitted;
    }
    let treebank = Treebank::new(tb.source_name.clone(), sentences).expect("ids preserved");
    Ok(Corpus { treebank, instances, counters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::morph::CaseSystem;
    use crate::treebank::parse_conllu;

    #[test]
    fn unchanged_identity_pipeline_preserves_forms() {
        let tb = parse_conllu(fixtures::BROKER_LUNCH, "t").unwrap();
        let corpus =
            transform_treebank(&tb, CoreOrder::Unchanged, 0, &MarkingConfig::none()).unwrap();
        assert_eq!(corpus.treebank.sentences[0], tb.sentences[0]);
        assert_eq!(corpus.counters.emitted, 2);
        assert_eq!(corpus.instances.len(), 2);
    }

    #[test]
    fn marking_and_reordering_commute_on_forms() {
        let marking = MarkingConfig::cased(CaseSystem::Unambiguous);
        for fixture in [fixtures::BROKER_LUNCH, fixtures::TREASURY_BONDS, fixtures::CENTRUST] {
            let tb = parse_conllu(fixture, "t").unwrap();
            let tree = &tb.sentences[0];
            for order in crate::reorder::FIXED_ORDERS {
                // reorder then mark
                let (a, _, _) = transform_sentence(tree, order, 0, 0, &marking).unwrap();
                // mark then reorder
                let collected = collect_records(tree);
                let marked = apply_marking(tree, &collected.records, &marking).unwrap();
                let b = reorder_sentence(&marked, order, 0, 0);
                assert_eq!(a.text(), b.text(), "{} under {order}", tree.sent_id);
            }
        }
    }
}
