use super::SignalLabel;
use crate::corpus::ConceptName;
use crate::error::{Error, Result};

const TEMPLATE: [&str; 6] = [
    "You are a forecaster and want to predict the future ",
    " in Europe from textual documents. The following document will report sentences potentially referring to Europe: ",
    ". You have to print a signal that can be UP (if the document is signalling ",
    " going up in the short/long-term run), DOWN (if the sentence is signalling ",
    " going down in the short/long-term run) or NEUTRAL (if the sentence is neutral or does not signal a particular direction on ",
    "). Print only the results of the signal, do not summarize the sentence nor give any reason on your choice. Even if more sentences or paragraphs are provided to you, you only have to print one signal that can be UP, DOWN or NEUTRAL.",
];

/// The classification prompt for one document.
pub fn build_prompt(concept: ConceptName, text: &str) -> String {
    let c = concept.prompt_phrase();
    let mut out = String::with_capacity(1100 + text.len());
    out.push_str(TEMPLATE[0]);
    out.push_str(c);
    out.push_str(TEMPLATE[1]);
    out.push_str(text);
    out.push_str(TEMPLATE[2]);
    out.push_str(c);
    out.push_str(TEMPLATE[3]);
    out.push_str(c);
    out.push_str(TEMPLATE[4]);
    out.push_str(c);
    out.push_str(TEMPLATE[5]);
    out
}

/// Accepts exactly one of UP/DOWN/NEUTRAL after trimming whitespace and
/// punctuation and uppercasing.
pub fn parse_llm_response(raw: &str) -> Result<SignalLabel> {
    let core = raw.trim_matches(|c: char| !c.is_alphanumeric());
    match core.to_uppercase().as_str() {
        "UP" => Ok(SignalLabel::Up),
        "DOWN" => Ok(SignalLabel::Down),
        "NEUTRAL" => Ok(SignalLabel::Neutral),
        _ => Err(Error::UnparseableResponse(raw.to_string())),
    }
}
