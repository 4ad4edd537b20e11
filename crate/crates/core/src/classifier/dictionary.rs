use std::collections::{BTreeMap, HashMap};
use std::io::Read;
use std::path::Path;

use super::{Classifier, LabeledItem, SignalLabel};
use crate::corpus::{tokenize, Concept, Post};
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/economic_direction_terms.csv");

/// Positive and negative direction terms. Terms may span several tokens.
#[derive(Debug, Clone)]
pub struct Dictionary {
    /// First token -> candidate terms (token sequence, polarity), longest first.
    index: HashMap<String, Vec<(Vec<String>, i8)>>,
    positive: usize,
    negative: usize,
}

impl Dictionary {
    pub fn new<P, N>(positive: P, negative: N) -> Result<Self>
    where
        P: IntoIterator,
        P::Item: AsRef<str>,
        N: IntoIterator,
        N::Item: AsRef<str>,
    {
        let mut terms: BTreeMap<Vec<String>, i8> = BTreeMap::new();
        let mut add = |term: &str, pol: i8| -> Result<()> {
            let toks: Vec<String> = tokenize(term).collect();
            if toks.is_empty() {
                return Err(Error::invalid(format!("empty dictionary term {term:?}")));
            }
            match terms.insert(toks, pol) {
                Some(prev) if prev != pol => Err(Error::invalid(format!(
                    "term {term:?} is both positive and negative"
                ))),
                _ => Ok(()),
            }
        };
        for t in positive {
            add(t.as_ref(), 1)?;
        }
        for t in negative {
            add(t.as_ref(), -1)?;
        }
        let positive = terms.values().filter(|&&p| p > 0).count();
        let negative = terms.len() - positive;
        if positive == 0 || negative == 0 {
            return Err(Error::invalid(
                "dictionary needs at least one positive and one negative term",
            ));
        }
        let mut index: HashMap<String, Vec<(Vec<String>, i8)>> = HashMap::new();
        for (toks, pol) in terms {
            index.entry(toks[0].clone()).or_default().push((toks, pol));
        }
        for cands in index.values_mut() {
            cands.sort_by(|a, b| b.0.len().cmp(&a.0.len()));
        }
        Ok(Self {
            index,
            positive,
            negative,
        })
    }

    /// The bundled economic-direction term list.
    pub fn bundled() -> Self {
        Self::from_csv(BUNDLED.as_bytes()).expect("bundled dictionary is valid")
    }

    /// Reads a `term,polarity` CSV with polarity `+1` or `-1`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for row in rdr.records() {
            let row = row?;
            let term = row.get(0).unwrap_or_default().to_string();
            match row.get(1).unwrap_or_default() {
                "+1" | "1" => pos.push(term),
                "-1" => neg.push(term),
                other => {
                    return Err(Error::Parse(format!(
                        "polarity {other:?} for term {term:?} is not +1 or -1"
                    )))
                }
            }
        }
        Self::new(pos, neg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(f)
    }

    pub fn len(&self) -> (usize, usize) {
        (self.positive, self.negative)
    }

    pub fn is_empty(&self) -> bool {
        self.positive + self.negative == 0
    }

    /// Net count of positive minus negative term occurrences. Matching is
    /// greedy and longest-first, so tokens of a multi-word term are not
    /// counted again as single-word terms.
    pub fn net_count(&self, text: &str) -> i64 {
        let toks: Vec<String> = tokenize(text).collect();
        let mut net = 0i64;
        let mut i = 0;
        while i < toks.len() {
            let hit = self.index.get(&toks[i]).and_then(|cands| {
                cands
                    .iter()
                    .find(|(term, _)| toks[i..].starts_with(term))
            });
            match hit {
                Some((term, pol)) => {
                    net += i64::from(*pol);
                    i += term.len();
                }
                None => i += 1,
            }
        }
        net
    }
}

/// UP when positive terms outnumber negative ones, DOWN when fewer, else NEUTRAL.
pub fn dict_classify(text: &str, dictionary: &Dictionary) -> SignalLabel {
    SignalLabel::from_sign(dictionary.net_count(text) as f64)
}

pub struct DictionaryClassifier {
    id: String,
    dictionary: Dictionary,
}

impl DictionaryClassifier {
    pub fn new(id: impl Into<String>, dictionary: Dictionary) -> Self {
        Self {
            id: id.into(),
            dictionary,
        }
    }

    pub fn bundled() -> Self {
        Self::new("dictionary", Dictionary::bundled())
    }
}

impl Classifier for DictionaryClassifier {
    fn id(&self) -> &str {
        &self.id
    }

    fn classify(&self, posts: &[&Post], _concept: &Concept) -> Result<Vec<LabeledItem>> {
        Ok(posts
            .iter()
            .map(|p| LabeledItem {
                post_id: p.id.clone(),
                label: dict_classify(&p.text, &self.dictionary),
                classifier_id: self.id.clone(),
                raw_response: None,
                fallback: false,
            })
            .collect())
    }
}
