use super::{Concept, Post};

/// Lowercased tokens of `text`, split on every non-alphanumeric character.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
}

/// A token matches a keyword when equal to it or to its plural with a trailing "s".
fn token_matches(token: &str, keyword: &str) -> bool {
    token == keyword
        || (token.len() == keyword.len() + 1
            && token.ends_with('s')
            && token.starts_with(keyword))
}

pub fn matches_concept(text: &str, concept: &Concept) -> bool {
    tokenize(text).any(|tok| concept.keywords().iter().any(|kw| token_matches(&tok, kw)))
}

/// Keeps the posts whose text mentions one of the concept's keywords, in order.
pub fn keyword_filter<'a, I>(posts: I, concept: &Concept) -> Vec<Post>
where
    I: IntoIterator<Item = &'a Post>,
{
    posts
        .into_iter()
        .filter(|p| matches_concept(&p.text, concept))
        .cloned()
        .collect()
}
