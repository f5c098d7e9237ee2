//! CoNLL-U treebanks: parsing, validation, serialization, tree navigation.
//!
//! Only basic trees are kept: multiword-token ranges ("3-4") and empty nodes
//! ("3.1") are dropped at parse time. The DEPS and MISC columns are carried
//! verbatim as opaque strings so that serialization round-trips.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

/// One word line of a sentence. `index` is 1-based; `head` 0 means root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: BTreeMap<String, String>,
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    /// Morphological feature lookup, e.g. `feat("Number") == Some("Plur")`.
    pub fn feat(&self, key: &str) -> Option<&str> {
        self.feats.get(key).map(String::as_str)
    }
}

/// A dependency-parsed sentence: tokens 1..n, exactly one root, acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceTree {
    pub sent_id: String,
    tokens: Vec<Token>,
}

/// A parsed treebank with unique sentence ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Treebank {
    pub source_name: String,
    pub sentences: Vec<SentenceTree>,
}

#[derive(Debug, Error)]
pub enum TreebankError {
    #[error("sentence {sent}: line {line}: expected 10 tab-separated columns, found {found}")]
    ColumnCount { sent: String, line: usize, found: usize },
    #[error("sentence {sent}: line {line}: non-numeric {field} '{value}'")]
    NonNumeric { sent: String, line: usize, field: &'static str, value: String },
    #[error("sentence {sent}: token {index}: empty {field}")]
    EmptyField { sent: String, index: usize, field: &'static str },
    #[error("sentence {sent}: token {index}: {field} contains tab or newline")]
    IllegalWhitespace { sent: String, index: usize, field: &'static str },
    #[error("sentence {sent}: token indices are not 1..n without gaps (token {index} at position {position})")]
    IndexGap { sent: String, index: usize, position: usize },
    #[error("sentence {sent}: token {index}: head {head} out of range (n = {n})")]
    HeadOutOfRange { sent: String, index: usize, head: usize, n: usize },
    #[error("sentence {sent}: token {index}: head equals own index")]
    SelfHead { sent: String, index: usize },
    #[error("sentence {sent}: multiple roots (tokens {first} and {second})")]
    MultipleRoots { sent: String, first: usize, second: usize },
    #[error("sentence {sent}: no root token")]
    NoRoot { sent: String },
    #[error("sentence {sent}: head links contain a cycle through token {index}")]
    Cycle { sent: String, index: usize },
    #[error("duplicate sentence id '{sent}'")]
    DuplicateSentId { sent: String },
    #[error("sentence {sent}: empty sentence")]
    EmptySentence { sent: String },
}

impl SentenceTree {
    /// Validates the invariants (single root, acyclic, contiguous indices)
    /// and builds the tree.
    pub fn new(sent_id: String, tokens: Vec<Token>) -> Result<Self, TreebankError> {
        let n = tokens.len();
        if n == 0 {
            return Err(TreebankError::EmptySentence { sent: sent_id });
        }
        let mut root = None;
        for (pos, tok) in tokens.iter().enumerate() {
            if tok.index != pos + 1 {
                return Err(TreebankError::IndexGap {
                    sent: sent_id,
                    index: tok.index,
                    position: pos + 1,
                });
            }
            if tok.form.is_empty() {
                return Err(TreebankError::EmptyField { sent: sent_id, index: tok.index, field: "form" });
            }
            if tok.lemma.is_empty() {
                return Err(TreebankError::EmptyField { sent: sent_id, index: tok.index, field: "lemma" });
            }
            for (field, value) in [("form", &tok.form), ("lemma", &tok.lemma)] {
                if value.contains('\t') || value.contains('\n') {
                    return Err(TreebankError::IllegalWhitespace { sent: sent_id, index: tok.index, field });
                }
            }
            if tok.head > n {
                return Err(TreebankError::HeadOutOfRange { sent: sent_id, index: tok.index, head: tok.head, n });
            }
            if tok.head == tok.index {
                return Err(TreebankError::SelfHead { sent: sent_id, index: tok.index });
            }
            if tok.head == 0 {
                match root {
                    None => root = Some(tok.index),
                    Some(first) => {
                        return Err(TreebankError::MultipleRoots { sent: sent_id, first, second: tok.index })
                    }
                }
            }
        }
        if root.is_none() {
            return Err(TreebankError::NoRoot { sent: sent_id });
        }
        // With exactly one root and every head in range, a cycle is the only
        // way the structure can fail to be a connected tree.
        for tok in &tokens {
            let mut seen = vec![false; n + 1];
            let mut cur = tok.index;
            while cur != 0 {
                if seen[cur] {
                    return Err(TreebankError::Cycle { sent: sent_id, index: tok.index });
                }
                seen[cur] = true;
                cur = tokens[cur - 1].head;
            }
        }
        Ok(SentenceTree { sent_id, tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index - 1]
    }

    /// Index of the root token.
    pub fn root(&self) -> usize {
        self.tokens
            .iter()
            .find(|t| t.head == 0)
            .map(|t| t.index)
            .expect("validated tree has a root")
    }

    /// Direct dependents of `node`, in surface order.
    pub fn children(&self, node: usize) -> Vec<usize> {
        self.tokens
            .iter()
            .filter(|t| t.head == node)
            .map(|t| t.index)
            .collect()
    }

    /// Direct dependents of `node` whose deprel is in `rels`, in surface order.
    pub fn children_with_rel(&self, node: usize, rels: &[&str]) -> Vec<usize> {
        self.tokens
            .iter()
            .filter(|t| t.head == node && rels.contains(&t.deprel.as_str()))
            .map(|t| t.index)
            .collect()
    }

    /// `node` plus all transitive dependents, in surface order.
    pub fn subtree_tokens(&self, node: usize) -> Vec<&Token> {
        let members = self.subtree_indices(node);
        members.iter().map(|&i| self.token(i)).collect()
    }

    /// Indices of `node`'s subtree, in surface order.
    pub fn subtree_indices(&self, node: usize) -> Vec<usize> {
        let n = self.tokens.len();
        let mut in_subtree = vec![false; n + 1];
        in_subtree[node] = true;
        let mut stack = vec![node];
        while let Some(cur) = stack.pop() {
            for child in self.children(cur) {
                if !in_subtree[child] {
                    in_subtree[child] = true;
                    stack.push(child);
                }
            }
        }
        (1..=n).filter(|&i| in_subtree[i]).collect()
    }

    /// Surface forms joined by single spaces.
    pub fn text(&self) -> String {
        let forms: Vec<&str> = self.tokens.iter().map(|t| t.form.as_str()).collect();
        forms.join(" ")
    }
}

impl Treebank {
    pub fn new(source_name: String, sentences: Vec<SentenceTree>) -> Result<Self, TreebankError> {
        let mut seen = std::collections::HashSet::new();
        for s in &sentences {
            if !seen.insert(s.sent_id.clone()) {
                return Err(TreebankError::DuplicateSentId { sent: s.sent_id.clone() });
            }
        }
        Ok(Treebank { source_name, sentences })
    }
}

/// Maps relation names onto the UD v1 inventory the pipeline matches on.
/// The converter and UD version behind a given corpus vary in relation
/// spelling (`obj` vs `dobj`, `nsubj:pass` vs `nsubjpass`), so the map is
/// configurable; `apply` rewrites a treebank in place.
#[derive(Debug, Clone)]
pub struct RelAliases {
    map: BTreeMap<String, String>,
}

impl Default for RelAliases {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        for (from, to) in [
            ("obj", "dobj"),
            ("nsubj:pass", "nsubjpass"),
            ("csubj:pass", "csubjpass"),
            ("aux:pass", "auxpass"),
            ("rcmod", "acl:relcl"),
        ] {
            map.insert(from.to_string(), to.to_string());
        }
        RelAliases { map }
    }
}

impl RelAliases {
    pub fn empty() -> Self {
        RelAliases { map: BTreeMap::new() }
    }

    pub fn insert(&mut self, from: &str, to: &str) {
        self.map.insert(from.to_string(), to.to_string());
    }

    pub fn resolve<'a>(&'a self, deprel: &'a str) -> &'a str {
        self.map.get(deprel).map(String::as_str).unwrap_or(deprel)
    }

    pub fn apply(&self, tb: &mut Treebank) {
        for sentence in &mut tb.sentences {
            for tok in &mut sentence.tokens {
                if let Some(canon) = self.map.get(&tok.deprel) {
                    tok.deprel = canon.clone();
                }
            }
        }
    }
}

fn parse_feats(s: &str) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    if s == "_" || s.is_empty() {
        return map;
    }
    for pair in s.split('|') {
        match pair.split_once('=') {
            Some((k, v)) => map.insert(k.to_string(), v.to_string()),
            None => map.insert(pair.to_string(), String::new()),
        };
    }
    map
}

fn feats_to_string(feats: &BTreeMap<String, String>) -> String {
    if feats.is_empty() {
        return "_".to_string();
    }
    let parts: Vec<String> = feats
        .iter()
        .map(|(k, v)| if v.is_empty() { k.clone() } else { format!("{k}={v}") })
        .collect();
    parts.join("|")
}

/// Parses CoNLL-U text. Comment lines start with '#'; sentences are separated
/// by blank lines. Multiword-token ranges and empty nodes are skipped with a
/// warning.
pub fn parse_conllu(text: &str, source_name: &str) -> Result<Treebank, TreebankError> {
    let mut sentences = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut sent_id: Option<String> = None;
    let mut ordinal = 0usize;

    let mut flush = |tokens: &mut Vec<Token>,
                     sent_id: &mut Option<String>,
                     sentences: &mut Vec<SentenceTree>,
                     ordinal: &mut usize|
     -> Result<(), TreebankError> {
        if tokens.is_empty() {
            *sent_id = None;
            return Ok(());
        }
        *ordinal += 1;
        let id = sent_id.take().unwrap_or_else(|| format!("s{ordinal}"));
        sentences.push(SentenceTree::new(id, std::mem::take(tokens))?);
        Ok(())
    };

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            flush(&mut tokens, &mut sent_id, &mut sentences, &mut ordinal)?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "sent_id" {
                    sent_id = Some(value.trim().to_string());
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let sent_name = sent_id.clone().unwrap_or_else(|| format!("s{}", ordinal + 1));
        if cols.len() != 10 {
            return Err(TreebankError::ColumnCount { sent: sent_name, line: lineno, found: cols.len() });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            log::warn!("{source_name}: line {lineno}: skipping multiword/empty node '{}'", cols[0]);
            continue;
        }
        let index: usize = cols[0].parse().map_err(|_| TreebankError::NonNumeric {
            sent: sent_name.clone(),
            line: lineno,
            field: "index",
            value: cols[0].to_string(),
        })?;
        let head: usize = cols[6].parse().map_err(|_| TreebankError::NonNumeric {
            sent: sent_name.clone(),
            line: lineno,
            field: "head",
            value: cols[6].to_string(),
        })?;
        tokens.push(Token {
            index,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            upos: cols[3].to_string(),
            xpos: cols[4].to_string(),
            feats: parse_feats(cols[5]),
            head,
            deprel: cols[7].to_string(),
            deps: cols[8].to_string(),
            misc: cols[9].to_string(),
        });
    }
    flush(&mut tokens, &mut sent_id, &mut sentences, &mut ordinal)?;
    Treebank::new(source_name.to_string(), sentences)
}

/// Serializes a treebank back to CoNLL-U. `parse_conllu` of the output
/// reproduces the input field-for-field.
pub fn serialize_conllu(tb: &Treebank) -> String {
    let mut out = String::new();
    for sentence in &tb.sentences {
        let _ = writeln!(out, "# sent_id = {}", sentence.sent_id);
        for t in sentence.tokens() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index,
                t.form,
                t.lemma,
                t.upos,
                t.xpos,
                feats_to_string(&t.feats),
                t.head,
                t.deprel,
                t.deps,
                t.misc
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_minimal_single_token_file() {
        let tb = parse_conllu("1\tGo\tgo\tVERB\tVB\t_\t0\troot\t_\t_\n", "t").unwrap();
        assert_eq!(tb.sentences.len(), 1);
        let s = &tb.sentences[0];
        assert_eq!(s.len(), 1);
        assert_eq!(s.root(), 1);
        assert_eq!(s.token(1).form, "Go");
    }

    #[test]
    fn parses_broker_fixture() {
        let tb = parse_conllu(fixtures::BROKER_LUNCH, "fixture").unwrap();
        let s = &tb.sentences[0];
        assert_eq!(s.len(), 11);
        assert_eq!(s.token(s.root()).form, "say");
        let took = s
            .tokens()
            .iter()
            .find(|t| t.form == "took")
            .unwrap();
        assert_eq!(took.deprel, "ccomp");
        assert_eq!(took.head, s.root());
        let broker = s.tokens().iter().find(|t| t.form == "broker").unwrap();
        assert_eq!(broker.deprel, "nsubj");
        assert_eq!(broker.head, took.index);
    }

    #[test]
    fn rejects_multiple_roots() {
        let text = "1\ta\ta\tNOUN\tNN\t_\t0\troot\t_\t_\n2\tb\tb\tNOUN\tNN\t_\t0\troot\t_\t_\n";
        let err = parse_conllu(text, "t").unwrap_err();
        assert!(matches!(err, TreebankError::MultipleRoots { .. }), "{err}");
    }

    #[test]
    fn rejects_cycles() {
        let text = "1\ta\ta\tNOUN\tNN\t_\t0\troot\t_\t_\n\
                    2\tb\tb\tNOUN\tNN\t_\t3\tdep\t_\t_\n\
                    3\tc\tc\tNOUN\tNN\t_\t2\tdep\t_\t_\n";
        let err = parse_conllu(text, "t").unwrap_err();
        assert!(matches!(err, TreebankError::Cycle { .. }), "{err}");
    }

    #[test]
    fn rejects_bad_column_count_and_bad_head() {
        let err = parse_conllu("1\ta\ta\tNOUN\n", "t").unwrap_err();
        assert!(matches!(err, TreebankError::ColumnCount { found: 4, .. }), "{err}");
        let err = parse_conllu("1\ta\ta\tNOUN\tNN\t_\tx\troot\t_\t_\n", "t").unwrap_err();
        assert!(matches!(err, TreebankError::NonNumeric { field: "head", .. }), "{err}");
    }

    #[test]
    fn rejects_tab_in_form_by_construction() {
        let tok = Token {
            index: 1,
            form: "a\tb".into(),
            lemma: "a".into(),
            upos: "NOUN".into(),
            xpos: "NN".into(),
            feats: BTreeMap::new(),
            head: 0,
            deprel: "root".into(),
            deps: "_".into(),
            misc: "_".into(),
        };
        let err = SentenceTree::new("t".into(), vec![tok]).unwrap_err();
        assert!(matches!(err, TreebankError::IllegalWhitespace { .. }));
    }

    #[test]
    fn skips_multiword_ranges_and_empty_nodes() {
        let text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
                    1\tdo\tdo\tAUX\tVBP\t_\t0\troot\t_\t_\n\
                    0.1\telided\telide\tVERB\tVB\t_\t_\t_\t_\t_\n";
        let tb = parse_conllu(text, "t").unwrap();
        assert_eq!(tb.sentences[0].len(), 1);
    }

    #[test]
    fn round_trips_fixtures() {
        for fx in [fixtures::BROKER_LUNCH, fixtures::MAKE_HEADLINES, fixtures::TREASURY_BONDS] {
            let tb = parse_conllu(fx, "fixture").unwrap();
            let text = serialize_conllu(&tb);
            let tb2 = parse_conllu(&text, "fixture").unwrap();
            assert_eq!(tb.sentences, tb2.sentences);
        }
    }

    #[test]
    fn subtree_of_root_is_whole_sentence() {
        let tb = parse_conllu(fixtures::BROKER_LUNCH, "t").unwrap();
        let s = &tb.sentences[0];
        let all = s.subtree_tokens(s.root());
        assert_eq!(all.len(), s.len());
        let order: Vec<usize> = all.iter().map(|t| t.index).collect();
        assert_eq!(order, (1..=s.len()).collect::<Vec<_>>());
    }

    #[test]
    fn subtree_of_broker_includes_determiner() {
        let tb = parse_conllu(fixtures::BROKER_LUNCH, "t").unwrap();
        let s = &tb.sentences[0];
        let broker = s.tokens().iter().find(|t| t.form == "broker").unwrap().index;
        let forms: Vec<&str> = s.subtree_tokens(broker).iter().map(|t| t.form.as_str()).collect();
        assert_eq!(forms, vec!["the", "broker"]);
    }

    #[test]
    fn subtree_of_leaf_is_singleton() {
        let tb = parse_conllu(fixtures::BROKER_LUNCH, "t").unwrap();
        let s = &tb.sentences[0];
        let them = s.tokens().iter().find(|t| t.form == "them").unwrap().index;
        assert_eq!(s.subtree_tokens(them).len(), 1);
    }

    #[test]
    fn children_with_rel_fixture_queries() {
        let tb = parse_conllu(fixtures::BROKER_LUNCH, "t").unwrap();
        let s = &tb.sentences[0];
        let took = s.tokens().iter().find(|t| t.form == "took").unwrap().index;
        let say = s.root();
        let dobj = s.children_with_rel(took, &["dobj"]);
        assert_eq!(dobj.iter().map(|&i| &s.token(i).form).collect::<Vec<_>>(), vec!["them"]);
        let nsubj = s.children_with_rel(say, &["nsubj"]);
        assert_eq!(nsubj.iter().map(|&i| &s.token(i).form).collect::<Vec<_>>(), vec!["they"]);
        assert!(s.children_with_rel(took, &[]).is_empty());
    }
}
