//! Prediction instances, attractor flags, splits, and corpus statistics.
//!
//! Instances serialize as JSON lines with a schema-versioned header record.
//! The placeholder token is spelled `<verb>`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arguments::{surface_plurality, ArgumentRecord, CollectCounters, Plurality};
use crate::morph::CaseSystem;
use crate::reorder::CoreOrder;
use crate::rng::stable_hash;
use crate::treebank::SentenceTree;

pub const PLACEHOLDER: &str = "<verb>";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestCategory {
    ObjectAttractor,
    ObjectNonAttractor,
    NonObjectAttractor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub sent_id: String,
    pub order: CoreOrder,
    pub case_system: CaseSystem,
    pub subject_attractor: bool,
    pub object_attractor: bool,
    pub non_object_attractor: bool,
    /// 0-based position of the subject head in `tokens`.
    pub subject_head_pos: usize,
    /// 0-based position of the object head, when the instance is transitive.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub object_head_pos: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub test_category: Option<TestCategory>,
}

/// One training or evaluation example: the token sequence with exactly one
/// `<verb>` placeholder, plus the labels of the withheld verb.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionInstance {
    pub tokens: Vec<String>,
    /// 0-based position of the placeholder in `tokens`.
    pub target_index: usize,
    #[serde(rename = "subject")]
    pub subject_label: Plurality,
    #[serde(rename = "object")]
    pub object_label: Plurality,
    pub meta: InstanceMeta,
}

/// First record of every instance file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceHeader {
    pub kind: String,
    pub schema_version: u32,
    pub order: CoreOrder,
    pub case_system: CaseSystem,
    pub agreement: bool,
    pub seed: u64,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub collect_counters: Option<CollectCounters>,
}

impl InstanceHeader {
    pub fn new(order: CoreOrder, case_system: CaseSystem, agreement: bool, seed: u64, source: &str) -> Self {
        InstanceHeader {
            kind: "header".to_string(),
            schema_version: SCHEMA_VERSION,
            order,
            case_system,
            agreement,
            seed,
            source: source.to_string(),
            collect_counters: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("instance file has no header record")]
    MissingHeader,
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("empty instance list")]
    Empty,
    #[error("instance for {sent_id} has {found} placeholders, expected exactly one")]
    PlaceholderCount { sent_id: String, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Subject,
    Object,
}

fn strictly_between(x: usize, a: usize, b: usize) -> bool {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    lo < x && x < hi
}

/// A verb-argument attractor: the record's other core argument lies strictly
/// between the target argument's head and the verb, with opposite plurality.
/// Pluralities are those of the heads alone, so a compound whose head is not
/// of opposite plurality is a non-attractor regardless of its other elements.
pub fn has_argument_attractor(record: &ArgumentRecord, target: Target) -> bool {
    let obj = match record.object_head {
        Some(o) => o,
        None => return false,
    };
    let opposite = record.subject_plurality.opposite(record.object_plurality);
    match target {
        Target::Subject => opposite && strictly_between(obj, record.subject_head, record.verb),
        Target::Object => opposite && strictly_between(record.subject_head, obj, record.verb),
    }
}

/// A noun that is not the object head, strictly between the subject head and
/// the verb, with plurality opposite to the subject.
pub fn has_non_object_attractor(tree: &SentenceTree, record: &ArgumentRecord) -> bool {
    let (lo, hi) = if record.subject_head < record.verb {
        (record.subject_head, record.verb)
    } else {
        (record.verb, record.subject_head)
    };
    for tok in tree.tokens() {
        if tok.index <= lo || tok.index >= hi {
            continue;
        }
        if Some(tok.index) == record.object_head || tok.index == record.subject_head {
            continue;
        }
        if !matches!(tok.upos.as_str(), "NOUN" | "PROPN" | "PRON") {
            continue;
        }
        if record.subject_plurality.opposite(surface_plurality(tree, tok.index)) {
            return true;
        }
    }
    false
}

/// Builds one instance per record from a tree that has already been reordered
/// and marked. The target verb's token (suffix and all) is replaced by the
/// placeholder; every other verb keeps its marking.
pub fn build_instances(
    tree: &SentenceTree,
    records: &[ArgumentRecord],
    order: CoreOrder,
    case_system: CaseSystem,
) -> Vec<PredictionInstance> {
    records
        .iter()
        .map(|rec| {
            let tokens: Vec<String> = tree
                .tokens()
                .iter()
                .map(|t| {
                    if t.index == rec.verb {
                        PLACEHOLDER.to_string()
                    } else {
                        t.form.clone()
                    }
                })
                .collect();
            PredictionInstance {
                tokens,
                target_index: rec.verb - 1,
                subject_label: rec.subject_plurality,
                object_label: rec.object_plurality,
                meta: InstanceMeta {
                    sent_id: rec.sent_id.clone(),
                    order,
                    case_system,
                    subject_attractor: has_argument_attractor(rec, Target::Subject),
                    object_attractor: has_argument_attractor(rec, Target::Object),
                    non_object_attractor: has_non_object_attractor(tree, rec),
                    subject_head_pos: rec.subject_head - 1,
                    object_head_pos: rec.object_head.map(|o| o - 1),
                    test_category: None,
                },
            }
        })
        .collect()
}

pub fn check_placeholder_invariant(inst: &PredictionInstance) -> Result<(), DatasetError> {
    let found = inst.tokens.iter().filter(|t| t.as_str() == PLACEHOLDER).count();
    if found != 1 || inst.tokens[inst.target_index] != PLACEHOLDER {
        return Err(DatasetError::PlaceholderCount { sent_id: inst.meta.sent_id.clone(), found });
    }
    Ok(())
}

/// Training and test sets for the poverty-of-stimulus paradigm: all
/// transitive evidence is withheld from training.
#[derive(Debug, Clone, Default)]
pub struct PovStimSplit {
    pub train: Vec<PredictionInstance>,
    pub test_object_attractor: Vec<PredictionInstance>,
    pub test_object_non_attractor: Vec<PredictionInstance>,
    pub test_non_object_attractor: Vec<PredictionInstance>,
}

/// Partitions instances: intransitives without a non-object attractor train;
/// transitives whose object intervenes between subject and verb test (split
/// by plurality opposition); intransitives with a non-object attractor form
/// the third test set. Transitives whose object does not intervene match no
/// category and are dropped.
pub fn split_poverty_of_stimulus(instances: Vec<PredictionInstance>) -> PovStimSplit {
    let mut split = PovStimSplit::default();
    for mut inst in instances {
        match inst.meta.object_head_pos {
            Some(obj_pos) => {
                let intervenes =
                    strictly_between(obj_pos, inst.meta.subject_head_pos, inst.target_index);
                if !intervenes {
                    continue;
                }
                if inst.subject_label.opposite(inst.object_label) {
                    inst.meta.test_category = Some(TestCategory::ObjectAttractor);
                    split.test_object_attractor.push(inst);
                } else {
                    inst.meta.test_category = Some(TestCategory::ObjectNonAttractor);
                    split.test_object_non_attractor.push(inst);
                }
            }
            None => {
                if inst.meta.non_object_attractor {
                    inst.meta.test_category = Some(TestCategory::NonObjectAttractor);
                    split.test_non_object_attractor.push(inst);
                } else {
                    split.train.push(inst);
                }
            }
        }
    }
    split
}

/// Deterministic 80/10/10 split keyed by sentence id, so all instances of a
/// sentence land in the same part.
#[derive(Debug, Clone, Default)]
pub struct StandardSplit {
    pub train: Vec<PredictionInstance>,
    pub dev: Vec<PredictionInstance>,
    pub test: Vec<PredictionInstance>,
}

pub fn split_standard(instances: Vec<PredictionInstance>, seed: u64) -> StandardSplit {
    let mut split = StandardSplit::default();
    for inst in instances {
        let bucket = stable_hash(seed, &inst.meta.sent_id) % 10;
        match bucket {
            0..=7 => split.train.push(inst),
            8 => split.dev.push(inst),
            _ => split.test.push(inst),
        }
    }
    split
}

/// Aggregate attractor statistics for one corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub instances: usize,
    pub transitive: usize,
    pub transitive_fraction: f64,
    /// Percent of instances with a verb-argument attractor for the subject.
    pub subject_attractor_pct: f64,
    /// Percent of instances with a verb-argument attractor for the object.
    pub object_attractor_pct: f64,
    pub non_object_attractor_pct: f64,
}

pub fn corpus_stats(instances: &[PredictionInstance]) -> Result<CorpusStats, DatasetError> {
    if instances.is_empty() {
        return Err(DatasetError::Empty);
    }
    let n = instances.len();
    let transitive = instances.iter().filter(|i| i.object_label.is_known()).count();
    let pct = |count: usize| 100.0 * count as f64 / n as f64;
    Ok(CorpusStats {
        instances: n,
        transitive,
        transitive_fraction: transitive as f64 / n as f64,
        subject_attractor_pct: pct(instances.iter().filter(|i| i.meta.subject_attractor).count()),
        object_attractor_pct: pct(instances.iter().filter(|i| i.meta.object_attractor).count()),
        non_object_attractor_pct: pct(instances.iter().filter(|i| i.meta.non_object_attractor).count()),
    })
}

/// Writes the header record and one JSON object per instance.
pub fn write_instances<W: Write>(
    mut w: W,
    header: &InstanceHeader,
    instances: &[PredictionInstance],
) -> Result<(), DatasetError> {
    let mut line = serde_json::to_string(header).expect("header serializes");
    line.push('\n');
    w.write_all(line.as_bytes())?;
    for inst in instances {
        check_placeholder_invariant(inst)?;
        let mut line = serde_json::to_string(inst).expect("instance serializes");
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_instances<R: BufRead>(r: R) -> Result<(InstanceHeader, Vec<PredictionInstance>), DatasetError> {
    let mut lines = r.lines();
    let header_line = lines.next().ok_or(DatasetError::MissingHeader)??;
    let header: InstanceHeader =
        serde_json::from_str(&header_line).map_err(|source| DatasetError::Json { line: 1, source })?;
    if header.kind != "header" {
        return Err(DatasetError::MissingHeader);
    }
    if header.schema_version != SCHEMA_VERSION {
        return Err(DatasetError::SchemaVersion(header.schema_version));
    }
    let mut instances = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let inst: PredictionInstance =
            serde_json::from_str(&line).map_err(|source| DatasetError::Json { line: i + 2, source })?;
        check_placeholder_invariant(&inst)?;
        instances.push(inst);
    }
    Ok((header, instances))
}

/// Per-category instance counts, used by the stats command.
pub fn count_by_category(instances: &[PredictionInstance]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for inst in instances {
        if let Some(cat) = inst.meta.test_category {
            let key = serde_json::to_value(cat)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arguments::collect_records;
    use crate::fixtures;
    use crate::morph::{apply_marking, MarkingConfig};
    use crate::reorder::reorder_sentence;
    use crate::treebank::parse_conllu;

    fn tree(text: &str) -> SentenceTree {
        parse_conllu(text, "t").unwrap().sentences.remove(0)
    }

    fn instances_for(fixture: &str, order: CoreOrder, marking: &MarkingConfig) -> Vec<PredictionInstance> {
        let s = tree(fixture);
        let reordered = reorder_sentence(&s, order, 0, 0);
        let collected = collect_records(&reordered);
        let marked = apply_marking(&reordered, &collected.records, marking).unwrap();
        build_instances(&marked, &collected.records, order, marking.case_system)
    }

    #[test]
    fn ovs_instance_matches_published_example() {
        let instances = instances_for(fixtures::BROKER_LUNCH, CoreOrder::Ovs, &MarkingConfig::agreement_only());
        let took = instances
            .iter()
            .find(|i| i.subject_label == Plurality::Singular)
            .unwrap();
        assert_eq!(
            took.tokens.join(" "),
            "them <verb> out frequently the broker for lunch saykon they ."
        );
        assert_eq!(took.object_label, Plurality::Plural);
    }

    #[test]
    fn centrust_instance_matches_published_example() {
        let instances =
            instances_for(fixtures::CENTRUST, CoreOrder::Unchanged, &MarkingConfig::none());
        assert_eq!(instances.len(), 1);
        let gave = &instances[0];
        assert_eq!(
            gave.tokens.join(" "),
            "The state <verb> CenTrust 30 days to sell the Rubens ."
        );
        assert_eq!(gave.subject_label, Plurality::Singular);
        assert_eq!(gave.object_label, Plurality::Plural);
        check_placeholder_invariant(gave).unwrap();
    }

    #[test]
    fn single_verb_sentence_yields_one_instance() {
        let instances =
            instances_for(fixtures::GAP_GROW, CoreOrder::Unchanged, &MarkingConfig::none());
        assert_eq!(instances.len(), 1);
    }

    #[test]
    fn sov_subject_attractor_svo_not() {
        let sov = instances_for(fixtures::BROKER_LUNCH, CoreOrder::Sov, &MarkingConfig::none());
        let took = sov.iter().find(|i| i.subject_label == Plurality::Singular).unwrap();
        assert!(took.meta.subject_attractor, "SOV: them intervenes between broker and verb");
        let svo = instances_for(fixtures::BROKER_LUNCH, CoreOrder::Svo, &MarkingConfig::none());
        let took = svo.iter().find(|i| i.subject_label == Plurality::Singular).unwrap();
        assert!(!took.meta.subject_attractor, "SVO: object follows the verb");
        // Intransitive: no other argument, never an attractor.
        let say = svo.iter().find(|i| i.object_label == Plurality::None).unwrap();
        assert!(!say.meta.subject_attractor);
    }

    #[test]
    fn non_object_attractor_on_gap_fixture() {
        let instances =
            instances_for(fixtures::GAP_GROW, CoreOrder::Unchanged, &MarkingConfig::none());
        assert!(instances[0].meta.non_object_attractor);
        // Subject adjacent to the verb: nothing intervenes.
        let s = tree(
            "1\tdogs\tdog\tNOUN\tNNS\tNumber=Plur\t2\tnsubj\t_\t_\n\
             2\tbark\tbark\tVERB\tVBP\t_\t0\troot\t_\t_\n",
        );
        let rec = &collect_records(&s).records[0];
        assert!(!has_non_object_attractor(&s, rec));
        // Same-plurality intervener is not an attractor.
        let s = tree(
            "1\tgaps\tgap\tNOUN\tNNS\tNumber=Plur\t4\tnsubj\t_\t_\n\
             2\tin\tin\tADP\tIN\t_\t3\tcase\t_\t_\n\
             3\twalls\twall\tNOUN\tNNS\tNumber=Plur\t1\tnmod\t_\t_\n\
             4\tgrow\tgrow\tVERB\tVBP\t_\t0\troot\t_\t_\n",
        );
        let rec = &collect_records(&s).records[0];
        assert!(!has_non_object_attractor(&s, rec));
    }

    #[test]
    fn pov_split_is_sound_on_fixture_mix() {
        let mut all = Vec::new();
        for fixture in [
            fixtures::BROKER_LUNCH,
            fixtures::CENTRUST,
            fixtures::GAP_GROW,
            fixtures::TREASURY_BONDS,
            fixtures::MAKE_HEADLINES,
        ] {
            all.extend(instances_for(fixture, CoreOrder::Sov, &MarkingConfig::none()));
        }
        let n = all.len();
        let split = split_poverty_of_stimulus(all);
        assert!(split.train.iter().all(|i| i.object_label == Plurality::None));
        assert!(split
            .train
            .iter()
            .all(|i| !i.meta.non_object_attractor));
        // took (SG subj, PL obj, SOV) is an object-attractor test case.
        assert!(split
            .test_object_attractor
            .iter()
            .any(|i| i.meta.sent_id == "broker-lunch"));
        // are (PL subj, PL obj) is a non-attractor object case.
        assert!(split
            .test_object_non_attractor
            .iter()
            .any(|i| i.meta.sent_id == "make-headlines"));
        // gap (intransitive, PL interveners) lands in the third test set.
        assert!(split
            .test_non_object_attractor
            .iter()
            .any(|i| i.meta.sent_id == "gap-grow"));
        let total = split.train.len()
            + split.test_object_attractor.len()
            + split.test_object_non_attractor.len()
            + split.test_non_object_attractor.len();
        assert!(total <= n);
        for inst in split
            .test_object_attractor
            .iter()
            .chain(&split.test_object_non_attractor)
            .chain(&split.test_non_object_attractor)
        {
            assert!(inst.meta.test_category.is_some());
        }
    }

    #[test]
    fn stats_all_flagged_is_hundred_percent() {
        let mut instances =
            instances_for(fixtures::BROKER_LUNCH, CoreOrder::Sov, &MarkingConfig::none());
        for i in &mut instances {
            i.meta.subject_attractor = true;
        }
        let stats = corpus_stats(&instances).unwrap();
        assert_eq!(stats.subject_attractor_pct, 100.0);
        assert!(corpus_stats(&[]).is_err());
    }

    #[test]
    fn stats_invariant_under_shuffle() {
        let mut instances = Vec::new();
        for fixture in [fixtures::BROKER_LUNCH, fixtures::CENTRUST, fixtures::GAP_GROW] {
            instances.extend(instances_for(fixture, CoreOrder::Sov, &MarkingConfig::none()));
        }
        let a = corpus_stats(&instances).unwrap();
        instances.reverse();
        let b = corpus_stats(&instances).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn jsonl_round_trip() {
        let instances =
            instances_for(fixtures::BROKER_LUNCH, CoreOrder::Sov, &MarkingConfig::agreement_only());
        let header = InstanceHeader::new(CoreOrder::Sov, CaseSystem::None, true, 7, "fixture");
        let mut buf = Vec::new();
        write_instances(&mut buf, &header, &instances).unwrap();
        let (h2, back) = read_instances(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(header, h2);
        assert_eq!(instances, back);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().next().unwrap().contains("\"schema_version\":1"));
        assert!(text.contains("\"subject\":\"sg\""));
        assert!(text.contains("\"object\":\"none\""));
        assert!(text.contains("<verb>"));
    }

    #[test]
    fn standard_split_is_deterministic_and_by_sentence() {
        let mut instances = Vec::new();
        for fixture in [
            fixtures::BROKER_LUNCH,
            fixtures::CENTRUST,
            fixtures::GAP_GROW,
            fixtures::TREASURY_BONDS,
        ] {
            instances.extend(instances_for(fixture, CoreOrder::Svo, &MarkingConfig::none()));
        }
        let a = split_standard(instances.clone(), 3);
        let b = split_standard(instances, 3);
        assert_eq!(a.train.len(), b.train.len());
        assert_eq!(a.dev.len(), b.dev.len());
        for part in [&a.train, &a.dev, &a.test] {
            for inst in part {
                let same_sentence_elsewhere = [&a.train, &a.dev, &a.test]
                    .iter()
                    .filter(|p| !std::ptr::eq(**p, *part))
                    .any(|p| p.iter().any(|other| other.meta.sent_id == inst.meta.sent_id));
                assert!(!same_sentence_elsewhere, "sentence split across parts");
            }
        }
    }
}
