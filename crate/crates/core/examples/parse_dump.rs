//! Streams NDJSON submission and comment dumps, keeps inflation posts and
//! splits each thread into its two comment sets.

use sentiment_nowcast::corpus::{
    build_comment_sets, build_forest, keyword_filter, parse_dump, Concept, PostKind,
};

const SUBMISSIONS: &str = r#"{"id":"a1","created_utc":1672567200,"title":"Inflation is back","selftext":"Prices keep climbing","score":12}
{"id":"a2","created_utc":1672570800,"title":"Best pizza in town","score":3}
not json at all
{"id":"a3","created_utc":"1672574400","title":"ECB and the inflation print","selftext":"[deleted]","score":5}
"#;

const COMMENTS: &str = r#"{"id":"c1","created_utc":1672568000,"body":"Inflation will fall soon","score":4,"link_id":"t3_a1","parent_id":"t3_a1"}
{"id":"c2","created_utc":1672569000,"body":"I disagree","score":-2,"link_id":"t3_a1","parent_id":"t1_c1"}
{"id":"c3","created_utc":1672569500,"body":"wages lag inflation","score":1,"link_id":"t3_a1","parent_id":"t1_c2"}
{"id":"c4","created_utc":1672575000,"body":"cpi looks hot","score":2,"link_id":"t3_a3","parent_id":"t1_missing"}
"#;

fn main() -> sentiment_nowcast::error::Result<()> {
    let mut reader = parse_dump(SUBMISSIONS.as_bytes(), PostKind::Submission);
    let submissions: Vec<_> = reader.by_ref().collect::<Result<_, _>>()?;
    println!("submissions: {:?}", reader.stats());
    let comments: Vec<_> = parse_dump(COMMENTS.as_bytes(), PostKind::Comment).collect::<Result<_, _>>()?;

    let concept = Concept::inflation();
    let kept = keyword_filter(submissions.iter(), &concept);
    println!("{} of {} submissions mention inflation", kept.len(), submissions.len());

    let forest = build_forest(kept, comments);
    println!("re-attached {} comments with missing parents", forest.dangling_attached);
    for tree in &forest.trees {
        let sets = build_comment_sets(tree, &concept, 7);
        let ids = |v: &[sentiment_nowcast::corpus::Post]| v.iter().map(|p| p.id.clone()).collect::<Vec<_>>();
        println!(
            "{} {:?}: first level {:?}, keyword {:?}",
            tree.root.id,
            tree.root.text,
            ids(&sets.first_level),
            ids(&sets.keyword_all)
        );
    }
    Ok(())
}
