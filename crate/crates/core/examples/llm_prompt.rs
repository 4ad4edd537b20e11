//! Builds the classification prompt and parses model answers. With
//! `LLM_ENDPOINT` set (an OpenAI-compatible base URL such as
//! `http://localhost:8000/v1`) it also labels two posts through the gateway.

use sentiment_nowcast::classifier::{build_prompt, parse_llm_response};
use sentiment_nowcast::corpus::{ConceptName, Post, PostKind};
use sentiment_nowcast::gateway::{Gateway, GatewayConfig};

fn main() -> sentiment_nowcast::error::Result<()> {
    println!("{}\n", build_prompt(ConceptName::Unemployment, "Factories are hiring again"));
    for raw in ["UP", " down.\n", "Neutral", "I think it goes up"] {
        match parse_llm_response(raw) {
            Ok(label) => println!("{raw:?} -> {}", label.as_str()),
            Err(e) => println!("{raw:?} -> {e}"),
        }
    }

    let Ok(endpoint) = std::env::var("LLM_ENDPOINT") else {
        println!("\nset LLM_ENDPOINT to query a live endpoint");
        return Ok(());
    };
    let gateway = Gateway::new(GatewayConfig {
        endpoint,
        model: std::env::var("LLM_MODEL").unwrap_or_else(|_| GatewayConfig::default().model),
        ..GatewayConfig::default()
    })?;
    let post = |id: &str, text: &str| Post {
        id: id.into(),
        kind: PostKind::Submission,
        created_at: 1_700_000_000,
        parent_id: None,
        root_id: None,
        text: text.into(),
        net_score: 1,
    };
    let posts = [post("p1", "Rents went up 12% this year"), post("p2", "Fuel is getting cheaper")];
    let refs: Vec<&Post> = posts.iter().collect();
    for item in gateway.classify_batch(&refs, ConceptName::Inflation)? {
        println!("{} -> {} (fallback {})", item.post_id, item.label.as_str(), item.fallback);
    }
    println!("{:?}", gateway.stats());
    Ok(())
}
