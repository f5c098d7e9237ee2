//! Synthetic English-like treebanks with controllable transitivity and
//! attractor rates, so experiments run without a licensed corpus.
//!
//! Every sentence is a well-formed SVO clause with correct head/deprel
//! annotation and English number agreement on present-tense verbs. Subjects
//! may carry a prepositional-phrase or relative-clause modifier; the
//! `modifier_attractor_prob` knob inserts an opposite-plurality noun inside
//! the subject, creating non-object attractors by construction.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::arguments::Plurality;
use crate::rng::sentence_rng;
use crate::treebank::{SentenceTree, Token, Treebank};

const P_ADJECTIVE: f64 = 0.25;
const P_ADVERB: f64 = 0.15;
const P_PRONOUN_SUBJECT: f64 = 0.12;
const P_SAME_PLURALITY_PP: f64 = 0.08;
const P_RELATIVE_CLAUSE: f64 = 0.12;
const P_EMBED: f64 = 0.18;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {0}: expected 3 tab-separated fields")]
    Fields(usize),
    #[error("line {0}: unknown part of speech '{1}'")]
    Pos(usize, String),
    #[error("lexicon is missing {0} entries")]
    Missing(&'static str),
}

/// Vocabulary for the generator. Nouns carry their plural, verbs their
/// third-person-singular form.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub nouns: Vec<(String, String)>,
    pub verbs: Vec<(String, String)>,
    pub cverbs: Vec<(String, String)>,
    pub preps: Vec<String>,
    pub adjectives: Vec<String>,
    pub adverbs: Vec<String>,
    pub pronouns_sg: Vec<String>,
    pub pronouns_pl: Vec<String>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::parse(include_str!("lexicon.txt")).expect("bundled lexicon is well-formed")
    }
}

impl Lexicon {
    /// Parses the `lemma<TAB>pos<TAB>other_form` format. Lines starting with
    /// '#' are comments.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon {
            nouns: Vec::new(),
            verbs: Vec::new(),
            cverbs: Vec::new(),
            preps: Vec::new(),
            adjectives: Vec::new(),
            adverbs: Vec::new(),
            pronouns_sg: Vec::new(),
            pronouns_pl: Vec::new(),
        };
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(LexiconError::Fields(i + 1));
            }
            let (lemma, pos, other) = (fields[0].to_string(), fields[1], fields[2].to_string());
            match pos {
                "noun" => lex.nouns.push((lemma, other)),
                "verb" => lex.verbs.push((lemma, other)),
                "cverb" => lex.cverbs.push((lemma, other)),
                "prep" => lex.preps.push(lemma),
                "adj" => lex.adjectives.push(lemma),
                "adv" => lex.adverbs.push(lemma),
                "pron-sg" => lex.pronouns_sg.push(lemma),
                "pron-pl" => lex.pronouns_pl.push(lemma),
                other => return Err(LexiconError::Pos(i + 1, other.to_string())),
            }
        }
        for (name, empty) in [
            ("noun", lex.nouns.is_empty()),
            ("verb", lex.verbs.is_empty()),
            ("cverb", lex.cverbs.is_empty()),
            ("prep", lex.preps.is_empty()),
            ("adj", lex.adjectives.is_empty()),
            ("pron-sg", lex.pronouns_sg.is_empty()),
            ("pron-pl", lex.pronouns_pl.is_empty()),
        ] {
            if empty {
                return Err(LexiconError::Missing(name));
            }
        }
        Ok(lex)
    }
}

/// Parameters of one generated corpus.
#[derive(Debug, Clone)]
pub struct ToySpec {
    pub sentences: usize,
    /// Probability that any clause takes a direct object. The paper observed
    /// about a third of sentences are transitive; that is the default.
    pub transitive_fraction: f64,
    /// Probability that a subject carries a modifier containing an
    /// opposite-plurality noun.
    pub modifier_attractor_prob: f64,
    /// Levels of clausal-complement embedding allowed below the main clause.
    pub max_depth: usize,
    pub seed: u64,
    pub lexicon: Lexicon,
}

impl Default for ToySpec {
    fn default() -> Self {
        ToySpec {
            sentences: 1000,
            transitive_fraction: 0.35,
            modifier_attractor_prob: 0.25,
            max_depth: 1,
            seed: 0,
            lexicon: Lexicon::default(),
        }
    }
}

/// What the generator intended for one verb; used to cross-check
/// `arguments::collect_records`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldLabel {
    pub verb: usize,
    pub subject: Plurality,
    pub object: Plurality,
}

struct Builder {
    tokens: Vec<Token>,
}

impl Builder {
    fn new() -> Self {
        Builder { tokens: Vec::new() }
    }

    fn push(&mut self, form: &str, lemma: &str, upos: &str, xpos: &str, number: Option<Plurality>) -> usize {
        let mut feats = BTreeMap::new();
        match number {
            Some(Plurality::Singular) => {
                feats.insert("Number".to_string(), "Sing".to_string());
            }
            Some(Plurality::Plural) => {
                feats.insert("Number".to_string(), "Plur".to_string());
            }
            _ => {}
        }
        self.tokens.push(Token {
            index: self.tokens.len() + 1,
            form: form.to_string(),
            lemma: lemma.to_string(),
            upos: upos.to_string(),
            xpos: xpos.to_string(),
            feats,
            head: 0,
            deprel: String::new(),
            deps: "_".to_string(),
            misc: "_".to_string(),
        });
        self.tokens.len()
    }

    fn attach(&mut self, child: usize, head: usize, deprel: &str) {
        self.tokens[child - 1].head = head;
        self.tokens[child - 1].deprel = deprel.to_string();
    }

    fn finish(mut self, sent_id: String, root: usize) -> SentenceTree {
        self.tokens[root - 1].head = 0;
        self.tokens[root - 1].deprel = "root".to_string();
        SentenceTree::new(sent_id, self.tokens).expect("generated tree is valid")
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.gen_bool(p.clamp(0.0, 1.0))
}

fn random_plurality(rng: &mut ChaCha8Rng) -> Plurality {
    if coin(rng, 0.5) {
        Plurality::Plural
    } else {
        Plurality::Singular
    }
}

fn push_noun(b: &mut Builder, rng: &mut ChaCha8Rng, lex: &Lexicon, plurality: Plurality) -> usize {
    let (lemma, plural) = pick(rng, &lex.nouns);
    let (form, xpos) = match plurality {
        Plurality::Plural => (plural.as_str(), "NNS"),
        _ => (lemma.as_str(), "NN"),
    };
    b.push(form, lemma, "NOUN", xpos, Some(plurality))
}

/// det (adj) noun; returns the noun's index.
fn gen_bare_np(b: &mut Builder, rng: &mut ChaCha8Rng, lex: &Lexicon, plurality: Plurality) -> usize {
    let det = b.push("the", "the", "DET", "DT", None);
    let adj = if coin(rng, P_ADJECTIVE) {
        let form = pick(rng, &lex.adjectives).clone();
        Some(b.push(&form, &form, "ADJ", "JJ", None))
    } else {
        None
    };
    let noun = push_noun(b, rng, lex, plurality);
    b.attach(det, noun, "det");
    if let Some(a) = adj {
        b.attach(a, noun, "amod");
    }
    noun
}

fn push_verb(
    b: &mut Builder,
    rng: &mut ChaCha8Rng,
    entries: &[(String, String)],
    subject_plurality: Plurality,
) -> usize {
    let (lemma, third_sg) = pick(rng, entries);
    match subject_plurality {
        Plurality::Singular => b.push(third_sg, lemma, "VERB", "VBZ", None),
        _ => b.push(lemma, lemma, "VERB", "VBP", None),
    }
}

fn attach_pp(
    b: &mut Builder,
    rng: &mut ChaCha8Rng,
    lex: &Lexicon,
    noun: usize,
    pp_plurality: Plurality,
) {
    let form = pick(rng, &lex.preps).clone();
    let prep = b.push(&form, &form, "ADP", "IN", None);
    let pp_noun = gen_bare_np(b, rng, lex, pp_plurality);
    b.attach(prep, pp_noun, "case");
    b.attach(pp_noun, noun, "nmod");
}

/// Subject NP with optional PP or relative-clause modifier.
fn gen_subject_np(
    b: &mut Builder,
    rng: &mut ChaCha8Rng,
    spec: &ToySpec,
    plurality: Plurality,
    gold: &mut Vec<GoldLabel>,
) -> usize {
    let lex = &spec.lexicon;
    let noun = gen_bare_np(b, rng, lex, plurality);
    let opposite = match plurality {
        Plurality::Singular => Plurality::Plural,
        _ => Plurality::Singular,
    };
    if coin(rng, spec.modifier_attractor_prob) {
        // Guaranteed attractor: PP whose noun has the opposite plurality.
        attach_pp(b, rng, lex, noun, opposite);
    } else if coin(rng, P_SAME_PLURALITY_PP) {
        attach_pp(b, rng, lex, noun, plurality);
    } else if coin(rng, P_RELATIVE_CLAUSE) {
        // Subject relative: the relativizer agrees with the referent.
        let that = b.push("that", "that", "PRON", "WDT", None);
        let verb = push_verb(b, rng, &lex.verbs, plurality);
        b.attach(that, verb, "nsubj");
        b.attach(verb, noun, "acl:relcl");
        let object = if coin(rng, spec.transitive_fraction) {
            let obj_plurality = random_plurality(rng);
            let obj = gen_bare_np(b, rng, lex, obj_plurality);
            b.attach(obj, verb, "dobj");
            obj_plurality
        } else {
            Plurality::None
        };
        gold.push(GoldLabel { verb, subject: plurality, object });
    }
    noun
}

/// One clause in SVO order; returns the verb index.
fn gen_clause(
    b: &mut Builder,
    rng: &mut ChaCha8Rng,
    spec: &ToySpec,
    depth: usize,
    gold: &mut Vec<GoldLabel>,
) -> usize {
    let lex = &spec.lexicon;
    let subject_plurality = random_plurality(rng);
    let subject = if coin(rng, P_PRONOUN_SUBJECT) {
        let forms = match subject_plurality {
            Plurality::Singular => &lex.pronouns_sg,
            _ => &lex.pronouns_pl,
        };
        let form = pick(rng, forms).clone();
        b.push(&form, &form, "PRON", "PRP", Some(subject_plurality))
    } else {
        gen_subject_np(b, rng, spec, subject_plurality, gold)
    };

    if depth < spec.max_depth && coin(rng, P_EMBED) {
        let verb = push_verb(b, rng, &lex.cverbs, subject_plurality);
        b.attach(subject, verb, "nsubj");
        let embedded = gen_clause(b, rng, spec, depth + 1, gold);
        b.attach(embedded, verb, "ccomp");
        gold.push(GoldLabel { verb, subject: subject_plurality, object: Plurality::None });
        return verb;
    }

    let verb = push_verb(b, rng, &lex.verbs, subject_plurality);
    b.attach(subject, verb, "nsubj");
    let object = if coin(rng, spec.transitive_fraction) {
        let obj_plurality = random_plurality(rng);
        let obj = gen_bare_np(b, rng, lex, obj_plurality);
        b.attach(obj, verb, "dobj");
        obj_plurality
    } else {
        Plurality::None
    };
    if coin(rng, P_ADVERB) {
        let form = pick(rng, &lex.adverbs).clone();
        let adv = b.push(&form, &form, "ADV", "RB", None);
        b.attach(adv, verb, "advmod");
    }
    gold.push(GoldLabel { verb, subject: subject_plurality, object });
    verb
}

/// Generates one sentence; deterministic given `(seed, ordinal)`.
pub fn generate_sentence(spec: &ToySpec, ordinal: u64) -> (SentenceTree, Vec<GoldLabel>) {
    let mut rng = sentence_rng(spec.seed, ordinal);
    let mut b = Builder::new();
    let mut gold = Vec::new();
    let root = gen_clause(&mut b, &mut rng, spec, 0, &mut gold);
    let punct = b.push(".", ".", "PUNCT", ".", None);
    b.attach(punct, root, "punct");
    let tree = b.finish(format!("toy-{ordinal}"), root);
    (tree, gold)
}

/// Generates the corpus along with the per-sentence intended labels.
pub fn generate_with_gold(spec: &ToySpec) -> (Treebank, Vec<Vec<GoldLabel>>) {
    let pairs: Vec<(SentenceTree, Vec<GoldLabel>)> = (0..spec.sentences as u64)
        .into_par_iter()
        .map(|i| generate_sentence(spec, i))
        .collect();
    let mut sentences = Vec::with_capacity(pairs.len());
    let mut gold = Vec::with_capacity(pairs.len());
    for (s, g) in pairs {
        sentences.push(s);
        gold.push(g);
    }
    let tb = Treebank::new("toygen".to_string(), sentences).expect("ordinal ids are unique");
    (tb, gold)
}

pub fn generate(spec: &ToySpec) -> Treebank {
    generate_with_gold(spec).0
}
