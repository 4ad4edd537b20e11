//! Client for an external chat-completion endpoint that labels posts with
//! the classification prompt.
//!
//! Requests go to `{endpoint}/chat/completions` as
//! `{model, temperature, messages: [{role: "user", content: prompt}]}` and the
//! label is read from `choices[0].message.content`. Responses are cached in
//! an append-only NDJSON journal keyed by a hash of model, temperature and
//! prompt bytes, so interrupted runs resume without repeating calls.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, RwLock};
use std::time::Duration;

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::classifier::{build_prompt, parse_llm_response, Classifier, LabeledItem, SignalLabel};
use crate::corpus::{Concept, ConceptName, Post};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GatewayConfig {
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub max_concurrency: usize,
    pub max_retries: u32,
    pub timeout_secs: u64,
    pub cache_path: Option<PathBuf>,
    /// Texts longer than this many characters are truncated before prompting.
    pub max_chars: usize,
    pub backoff_base_ms: u64,
    pub backoff_cap_ms: u64,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        Self {
            endpoint: "http://localhost:8000/v1".into(),
            model: "llama-3-70b-instruct".into(),
            temperature: 0.5,
            max_concurrency: 8,
            max_retries: 3,
            timeout_secs: 60,
            cache_path: None,
            max_chars: 8000,
            backoff_base_ms: 1000,
            backoff_cap_ms: 30_000,
        }
    }
}

impl GatewayConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.temperature) {
            return Err(Error::Config(format!(
                "temperature {} outside [0, 1]",
                self.temperature
            )));
        }
        if self.max_concurrency == 0 {
            return Err(Error::Config("max_concurrency must be at least 1".into()));
        }
        if self.endpoint.trim().is_empty() {
            return Err(Error::Config("gateway endpoint is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: String,
    pub raw: String,
    pub label: SignalLabel,
    pub timestamp: i64,
}

/// Deterministic cache key. `salt` distinguishes deliberate repetitions of
/// the same prompt and is empty for ordinary runs.
pub fn cache_key(model: &str, temperature: f64, salt: &str, prompt: &str) -> String {
    let mut h = Sha256::new();
    h.update(model.as_bytes());
    h.update([0]);
    h.update(format!("{temperature:.6}").as_bytes());
    h.update([0]);
    h.update(salt.as_bytes());
    h.update([0]);
    h.update(prompt.as_bytes());
    hex::encode(h.finalize())
}

/// Response cache backed by an append-only journal. Identical keys map to
/// identical values, so concurrent writers may race harmlessly.
#[derive(Default)]
pub struct ResponseCache {
    map: RwLock<HashMap<String, CacheEntry>>,
    journal: Mutex<Option<File>>,
}

impl ResponseCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads an existing journal (if any) and appends new entries to it.
    pub fn open(path: &Path) -> Result<Self> {
        let mut map = HashMap::new();
        if path.exists() {
            let f = File::open(path).map_err(|e| Error::io(path, e))?;
            for line in BufReader::new(f).lines() {
                let line = line.map_err(|e| Error::io(path, e))?;
                // a torn final line from an interrupted run is ignored
                if let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) {
                    map.insert(entry.key.clone(), entry);
                }
            }
        } else if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        Ok(Self {
            map: RwLock::new(map),
            journal: Mutex::new(Some(file)),
        })
    }

    pub fn get(&self, key: &str) -> Option<CacheEntry> {
        self.map.read().expect("cache lock").get(key).cloned()
    }

    pub fn insert(&self, entry: CacheEntry) -> Result<()> {
        if let Some(f) = self.journal.lock().expect("journal lock").as_mut() {
            let mut line = serde_json::to_vec(&entry)?;
            line.push(b'\n');
            f.write_all(&line)?;
        }
        self.map
            .write()
            .expect("cache lock")
            .insert(entry.key.clone(), entry);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChatRequest {
    pub model: String,
    pub temperature: f64,
    pub prompt: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransportError {
    /// Could not reach the endpoint at all.
    Connect(String),
    /// Reached the endpoint but the exchange failed (status, timeout, body).
    Exchange(String),
}

pub trait ChatTransport: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> std::result::Result<String, TransportError>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
    url: String,
}

impl HttpTransport {
    pub fn new(endpoint: &str, timeout: Duration) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(timeout).build();
        Self {
            agent,
            url: format!("{}/chat/completions", endpoint.trim_end_matches('/')),
        }
    }
}

impl ChatTransport for HttpTransport {
    fn complete(&self, request: &ChatRequest) -> std::result::Result<String, TransportError> {
        let body = json!({
            "model": request.model,
            "temperature": request.temperature,
            "messages": [{"role": "user", "content": request.prompt}],
        });
        let resp = match self.agent.post(&self.url).send_json(body) {
            Ok(r) => r,
            Err(ureq::Error::Status(code, _)) => {
                return Err(TransportError::Exchange(format!("HTTP status {code}")))
            }
            Err(ureq::Error::Transport(t)) => {
                return Err(match t.kind() {
                    ureq::ErrorKind::ConnectionFailed
                    | ureq::ErrorKind::Dns
                    | ureq::ErrorKind::InvalidUrl => TransportError::Connect(t.to_string()),
                    _ => TransportError::Exchange(t.to_string()),
                })
            }
        };
        let value: serde_json::Value = resp
            .into_json()
            .map_err(|e| TransportError::Exchange(format!("bad response body: {e}")))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| TransportError::Exchange("missing choices[0].message.content".into()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GatewayStats {
    pub requests: usize,
    pub cache_hits: usize,
    pub fallbacks: usize,
}

pub struct Gateway {
    config: GatewayConfig,
    transport: Box<dyn ChatTransport>,
    cache: ResponseCache,
    salt: String,
    requests: AtomicUsize,
    cache_hits: AtomicUsize,
    fallbacks: AtomicUsize,
}

enum Attempt {
    Label(String, SignalLabel),
    Failed { all_connect: bool },
}

impl Gateway {
    /// HTTP gateway with the journal at `config.cache_path` (in-memory when unset).
    pub fn new(config: GatewayConfig) -> Result<Self> {
        config.validate()?;
        let transport = HttpTransport::new(&config.endpoint, Duration::from_secs(config.timeout_secs));
        let cache = match &config.cache_path {
            Some(p) => ResponseCache::open(p)?,
            None => ResponseCache::in_memory(),
        };
        Ok(Self::with_transport(config, Box::new(transport), cache))
    }

    pub fn with_transport(
        config: GatewayConfig,
        transport: Box<dyn ChatTransport>,
        cache: ResponseCache,
    ) -> Self {
        Self {
            config,
            transport,
            cache,
            salt: String::new(),
            requests: AtomicUsize::new(0),
            cache_hits: AtomicUsize::new(0),
            fallbacks: AtomicUsize::new(0),
        }
    }

    pub fn config(&self) -> &GatewayConfig {
        &self.config
    }

    pub fn set_temperature(&mut self, t: f64) -> Result<()> {
        self.config.temperature = t;
        self.config.validate()
    }

    /// Separates cache entries of repeated runs over the same prompts.
    pub fn set_salt(&mut self, salt: impl Into<String>) {
        self.salt = salt.into();
    }

    pub fn cache(&self) -> &ResponseCache {
        &self.cache
    }

    pub fn stats(&self) -> GatewayStats {
        GatewayStats {
            requests: self.requests.load(Ordering::SeqCst),
            cache_hits: self.cache_hits.load(Ordering::SeqCst),
            fallbacks: self.fallbacks.load(Ordering::SeqCst),
        }
    }

    fn truncate<'a>(&self, text: &'a str) -> &'a str {
        match text.char_indices().nth(self.config.max_chars) {
            Some((idx, _)) => &text[..idx],
            None => text,
        }
    }

    fn backoff(&self, attempt: u32) -> Duration {
        let base = self.config.backoff_base_ms as f64 * 2f64.powi(attempt as i32);
        let capped = base.min(self.config.backoff_cap_ms as f64);
        let jitter: f64 = rand::thread_rng().gen_range(0.5..=1.0);
        Duration::from_micros((capped * jitter * 1000.0) as u64)
    }

    fn request(&self, prompt: String) -> Attempt {
        let req = ChatRequest {
            model: self.config.model.clone(),
            temperature: self.config.temperature,
            prompt,
        };
        let mut all_connect = true;
        for attempt in 0..=self.config.max_retries {
            if attempt > 0 {
                std::thread::sleep(self.backoff(attempt - 1));
            }
            self.requests.fetch_add(1, Ordering::SeqCst);
            match self.transport.complete(&req) {
                Ok(raw) => {
                    all_connect = false;
                    match parse_llm_response(&raw) {
                        Ok(label) => return Attempt::Label(raw, label),
                        Err(_) => log::debug!("unparseable response {raw:?}"),
                    }
                }
                Err(TransportError::Connect(e)) => log::debug!("connect failed: {e}"),
                Err(TransportError::Exchange(e)) => {
                    all_connect = false;
                    log::debug!("request failed: {e}");
                }
            }
        }
        Attempt::Failed { all_connect }
    }

    fn classify_one(&self, post: &Post, concept: ConceptName) -> Result<(LabeledItem, bool)> {
        let prompt = build_prompt(concept, self.truncate(&post.text));
        let key = cache_key(&self.config.model, self.config.temperature, &self.salt, &prompt);
        let item = |label, raw, fallback| LabeledItem {
            post_id: post.id.clone(),
            label,
            classifier_id: format!("llm:{}", self.config.model),
            raw_response: raw,
            fallback,
        };
        if let Some(hit) = self.cache.get(&key) {
            self.cache_hits.fetch_add(1, Ordering::SeqCst);
            return Ok((item(hit.label, Some(hit.raw), false), false));
        }
        match self.request(prompt) {
            Attempt::Label(raw, label) => {
                self.cache.insert(CacheEntry {
                    key,
                    raw: raw.clone(),
                    label,
                    timestamp: chrono::Utc::now().timestamp(),
                })?;
                Ok((item(label, Some(raw), false), false))
            }
            Attempt::Failed { all_connect } => {
                self.fallbacks.fetch_add(1, Ordering::SeqCst);
                Ok((item(SignalLabel::Neutral, None, true), all_connect))
            }
        }
    }

    /// Labels every post, in input order.
    ///
    /// Cached prompts are answered without a request. Transport errors and
    /// unparseable answers are retried up to `max_retries` times with
    /// exponential backoff; an item that still fails gets NEUTRAL with
    /// `fallback = true`. If every uncached item failed because the endpoint
    /// could not be reached, the whole batch fails with a connectivity error.
    pub fn classify_batch(&self, posts: &[&Post], concept: ConceptName) -> Result<Vec<LabeledItem>> {
        let n = posts.len();
        let slots: Vec<Mutex<Option<Result<(LabeledItem, bool)>>>> =
            (0..n).map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        let workers = self.config.max_concurrency.min(n.max(1));
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= n {
                        break;
                    }
                    let r = self.classify_one(posts[i], concept);
                    *slots[i].lock().expect("slot lock") = Some(r);
                });
            }
        });

        let mut out = Vec::with_capacity(n);
        let (mut uncached_unreachable, mut answered) = (0usize, 0usize);
        for slot in slots {
            let (item, unreachable) = slot
                .into_inner()
                .expect("slot lock")
                .expect("every slot filled")?;
            if unreachable {
                uncached_unreachable += 1;
            } else {
                answered += 1;
            }
            out.push(item);
        }
        if uncached_unreachable > 0 && answered == 0 {
            return Err(Error::Connectivity(format!(
                "endpoint {} unreachable and no cached responses",
                self.config.endpoint
            )));
        }
        Ok(out)
    }
}

impl Classifier for Gateway {
    fn id(&self) -> &str {
        "llm"
    }

    fn classify(&self, posts: &[&Post], concept: &Concept) -> Result<Vec<LabeledItem>> {
        self.classify_batch(posts, concept.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PostKind;
    use std::sync::atomic::AtomicUsize;

    struct Scripted {
        replies: Mutex<Vec<std::result::Result<String, TransportError>>>,
        calls: AtomicUsize,
    }

    impl Scripted {
        fn new(replies: Vec<std::result::Result<String, TransportError>>) -> Self {
            Self {
                replies: Mutex::new(replies),
                calls: AtomicUsize::new(0),
            }
        }
    }

    impl ChatTransport for Scripted {
        fn complete(&self, _: &ChatRequest) -> std::result::Result<String, TransportError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            let mut r = self.replies.lock().unwrap();
            if r.len() > 1 {
                r.remove(0)
            } else {
                r[0].clone()
            }
        }
    }

    fn post(id: &str, text: &str) -> Post {
        Post {
            id: id.into(),
            kind: PostKind::Submission,
            created_at: 0,
            parent_id: None,
            root_id: None,
            text: text.into(),
            net_score: 0,
        }
    }

    fn fast_config() -> GatewayConfig {
        GatewayConfig {
            backoff_base_ms: 1,
            backoff_cap_ms: 2,
            max_retries: 2,
            ..GatewayConfig::default()
        }
    }

    #[test]
    fn happy_path_then_cache() {
        let gw = Gateway::with_transport(
            fast_config(),
            Box::new(Scripted::new(vec![Ok("DOWN".into())])),
            ResponseCache::in_memory(),
        );
        let p = post("a", "prices fall");
        let out = gw.classify_batch(&[&p], ConceptName::Inflation).unwrap();
        assert_eq!(out[0].label, SignalLabel::Down);
        assert!(!out[0].fallback);
        assert_eq!(gw.stats().requests, 1);
        let again = gw.classify_batch(&[&p], ConceptName::Inflation).unwrap();
        assert_eq!(again, out);
        assert_eq!(gw.stats().requests, 1);
        assert_eq!(gw.stats().cache_hits, 1);
    }

    #[test]
    fn garbage_exhausts_to_neutral_fallback() {
        let gw = Gateway::with_transport(
            fast_config(),
            Box::new(Scripted::new(vec![Ok("maybe?".into())])),
            ResponseCache::in_memory(),
        );
        let p = post("a", "x");
        let out = gw.classify_batch(&[&p], ConceptName::Inflation).unwrap();
        assert_eq!(out[0].label, SignalLabel::Neutral);
        assert!(out[0].fallback);
        assert_eq!(gw.stats().requests, 3);
        assert!(gw.cache().is_empty());
    }

    #[test]
    fn retry_recovers() {
        let gw = Gateway::with_transport(
            fast_config(),
            Box::new(Scripted::new(vec![
                Err(TransportError::Exchange("503".into())),
                Ok("up".into()),
            ])),
            ResponseCache::in_memory(),
        );
        let p = post("a", "x");
        let out = gw.classify_batch(&[&p], ConceptName::Inflation).unwrap();
        assert_eq!(out[0].label, SignalLabel::Up);
        assert_eq!(gw.stats().requests, 2);
    }

    #[test]
    fn unreachable_without_cache_is_fatal() {
        let gw = Gateway::with_transport(
            fast_config(),
            Box::new(Scripted::new(vec![Err(TransportError::Connect("refused".into()))])),
            ResponseCache::in_memory(),
        );
        let p = post("a", "x");
        let err = gw.classify_batch(&[&p], ConceptName::Inflation).unwrap_err();
        assert!(matches!(err, Error::Connectivity(_)));
    }

    #[test]
    fn key_depends_on_inputs() {
        let k = cache_key("m", 0.5, "", "p");
        assert_eq!(k, cache_key("m", 0.5, "", "p"));
        assert_ne!(k, cache_key("m", 0.7, "", "p"));
        assert_ne!(k, cache_key("m2", 0.5, "", "p"));
        assert_ne!(k, cache_key("m", 0.5, "rep1", "p"));
    }

    #[test]
    fn truncation_respects_char_boundaries() {
        let gw = Gateway::with_transport(
            GatewayConfig {
                max_chars: 3,
                ..fast_config()
            },
            Box::new(Scripted::new(vec![Ok("UP".into())])),
            ResponseCache::in_memory(),
        );
        assert_eq!(gw.truncate("ééééé"), "ééé");
        assert_eq!(gw.truncate("ab"), "ab");
    }

    #[test]
    fn config_validation() {
        let mut c = GatewayConfig::default();
        assert!(c.validate().is_ok());
        c.temperature = 1.5;
        assert!(c.validate().is_err());
        c.temperature = 0.5;
        c.max_concurrency = 0;
        assert!(c.validate().is_err());
    }
}
