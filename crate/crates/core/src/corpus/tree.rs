use std::collections::{HashMap, HashSet, VecDeque};

use super::keywords::matches_concept;
use super::{Concept, Post};

/// A submission and every comment beneath it.
#[derive(Debug, Clone, PartialEq)]
pub struct CommentTree {
    pub root: Post,
    /// Parent id to direct replies, each list ordered by `(created_at, id)`.
    pub children: HashMap<String, Vec<Post>>,
}

impl CommentTree {
    /// Comments replying directly to the submission.
    pub fn first_level(&self) -> &[Post] {
        self.children
            .get(&self.root.id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// All comments, breadth-first from the root.
    pub fn comments(&self) -> Vec<&Post> {
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self.root.id.as_str()]);
        while let Some(id) = queue.pop_front() {
            if let Some(kids) = self.children.get(id) {
                for c in kids {
                    out.push(c);
                    queue.push_back(c.id.as_str());
                }
            }
        }
        out
    }

    pub fn comment_count(&self) -> usize {
        self.children.values().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Forest {
    /// One tree per submission, in submission input order.
    pub trees: Vec<CommentTree>,
    /// Comments whose parent was missing, re-attached under the root.
    pub dangling_attached: usize,
    /// Comments whose root submission is not in the dump.
    pub dropped: usize,
}

/// Reconstructs submission-comment trees.
///
/// A comment whose parent is absent (or unreachable from the root) is attached
/// directly under its root submission; a comment whose root submission is
/// absent is dropped.
pub fn build_forest(submissions: Vec<Post>, comments: Vec<Post>) -> Forest {
    let root_index: HashMap<String, usize> = submissions
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id.clone(), i))
        .collect();
    let mut per_root: Vec<Vec<Post>> = vec![Vec::new(); submissions.len()];
    let mut dropped = 0;
    let mut seen = HashSet::new();
    for c in comments {
        if !seen.insert(c.id.clone()) {
            continue;
        }
        match c.root_id.as_ref().and_then(|r| root_index.get(r)) {
            Some(&i) => per_root[i].push(c),
            None => dropped += 1,
        }
    }

    let mut dangling_attached = 0;
    let trees = submissions
        .into_iter()
        .zip(per_root)
        .map(|(root, comments)| {
            let (tree, dangling) = assemble(root, comments);
            dangling_attached += dangling;
            tree
        })
        .collect();
    Forest {
        trees,
        dangling_attached,
        dropped,
    }
}

fn assemble(root: Post, mut comments: Vec<Post>) -> (CommentTree, usize) {
    comments.sort_by(|a, b| (a.created_at, &a.id).cmp(&(b.created_at, &b.id)));
    let known: HashSet<&str> = comments.iter().map(|c| c.id.as_str()).collect();

    // Parent of each comment after re-attaching unknown parents to the root.
    let parents: Vec<String> = comments
        .iter()
        .map(|c| match c.parent_id.as_deref() {
            Some(p) if p == root.id || (known.contains(p) && p != c.id) => p.to_string(),
            _ => root.id.clone(),
        })
        .collect();

    // Comments on a parent cycle are unreachable; find them by BFS over ids.
    let mut kids_of: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, p) in parents.iter().enumerate() {
        kids_of.entry(p.as_str()).or_default().push(i);
    }
    let mut reachable = vec![false; comments.len()];
    let mut queue = VecDeque::from([root.id.as_str()]);
    while let Some(id) = queue.pop_front() {
        for &i in kids_of.get(id).map(Vec::as_slice).unwrap_or(&[]) {
            if !reachable[i] {
                reachable[i] = true;
                queue.push_back(comments[i].id.as_str());
            }
        }
    }

    let mut dangling = 0;
    let mut children: HashMap<String, Vec<Post>> = HashMap::new();
    for ((c, parent), ok) in comments.iter().zip(&parents).zip(&reachable) {
        let declared = c.parent_id.as_deref().unwrap_or_default();
        let parent = if *ok { parent.clone() } else { root.id.clone() };
        if parent != declared {
            dangling += 1;
        }
        children.entry(parent).or_default().push(c.clone());
    }
    (CommentTree { root, children }, dangling)
}

/// Comment sets attached to one submission.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommentSets {
    /// Direct replies to the submission, not keyword filtered.
    pub first_level: Vec<Post>,
    /// Comments at any depth mentioning a concept keyword.
    pub keyword_all: Vec<Post>,
}

/// Splits a tree's comments into the first-level and keyword sets, keeping
/// only comments posted at most `max_lag_days` after the submission
/// (boundary inclusive).
pub fn build_comment_sets(tree: &CommentTree, concept: &Concept, max_lag_days: u32) -> CommentSets {
    let cutoff = tree.root.created_at + i64::from(max_lag_days) * 86_400;
    let in_time = |c: &&Post| c.created_at <= cutoff;
    let first_level = tree
        .first_level()
        .iter()
        .filter(in_time)
        .cloned()
        .collect();
    let keyword_all = tree
        .comments()
        .into_iter()
        .filter(in_time)
        .filter(|c| matches_concept(&c.text, concept))
        .cloned()
        .collect();
    CommentSets {
        first_level,
        keyword_all,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PostKind;

    const DAY: i64 = 86_400;

    fn sub(id: &str, t: i64) -> Post {
        Post {
            id: id.into(),
            kind: PostKind::Submission,
            created_at: t,
            parent_id: None,
            root_id: None,
            text: "submission".into(),
            net_score: 1,
        }
    }

    fn com(id: &str, parent: &str, root: &str, t: i64, text: &str) -> Post {
        Post {
            id: id.into(),
            kind: PostKind::Comment,
            created_at: t,
            parent_id: Some(parent.into()),
            root_id: Some(root.into()),
            text: text.into(),
            net_score: 0,
        }
    }

    fn fixture() -> Vec<Post> {
        vec![
            com("a", "s", "s", 10, "hello"),
            com("b", "s", "s", 20, "hi"),
            com("c", "s", "s", 30, "yo"),
            com("d", "a", "s", 40, "nested"),
            com("e", "d", "s", 50, "deeper"),
        ]
    }

    #[test]
    fn first_level_and_keyword_sets() {
        let forest = build_forest(vec![sub("s", 0)], fixture());
        let tree = &forest.trees[0];
        let sets = build_comment_sets(tree, &Concept::unemployment(), 7);
        assert_eq!(sets.first_level.len(), 3);
        assert!(sets.keyword_all.is_empty());
        assert_eq!(tree.comments().len(), 5);
    }

    #[test]
    fn nested_keyword_comment_in_keyword_set_only() {
        let mut cs = fixture();
        cs.push(com("k", "d", "s", 2 * DAY, "unemployment will rise"));
        let forest = build_forest(vec![sub("s", 0)], cs);
        let sets = build_comment_sets(&forest.trees[0], &Concept::unemployment(), 7);
        assert_eq!(sets.keyword_all.len(), 1);
        assert_eq!(sets.keyword_all[0].id, "k");
        assert!(sets.first_level.iter().all(|c| c.id != "k"));
    }

    #[test]
    fn time_cap_is_inclusive() {
        let cs = vec![
            com("late", "s", "s", 10 * DAY, "jobs"),
            com("edge", "s", "s", 7 * DAY, "jobs"),
        ];
        let forest = build_forest(vec![sub("s", 0)], cs);
        let sets = build_comment_sets(&forest.trees[0], &Concept::unemployment(), 7);
        let ids: Vec<_> = sets.first_level.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["edge"]);
        assert_eq!(sets.keyword_all.len(), 1);
    }

    #[test]
    fn dangling_and_orphans() {
        let cs = vec![
            com("x", "missing", "s", 5, "a"),
            com("y", "s", "nosuchroot", 5, "b"),
            // two-cycle
            com("p", "q", "s", 6, "c"),
            com("q", "p", "s", 7, "d"),
        ];
        let forest = build_forest(vec![sub("s", 0)], cs);
        assert_eq!(forest.dropped, 1);
        assert_eq!(forest.dangling_attached, 3);
        let tree = &forest.trees[0];
        assert_eq!(tree.first_level().len(), 3);
        assert_eq!(tree.comments().len(), 3);
    }

    #[test]
    fn shuffled_input_gives_same_tree() {
        let a = build_forest(vec![sub("s", 0)], fixture());
        let mut rev = fixture();
        rev.reverse();
        rev.swap(0, 2);
        let b = build_forest(vec![sub("s", 0)], rev);
        assert_eq!(a.trees, b.trees);
    }
}
