use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::GenRequest;

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("backend returned status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("could not decode backend response: {0}")]
    Decode(String),
    #[error("no fixture for prompt {0}")]
    FixtureMiss(String),
    #[error("bad fixture {path}: {message}")]
    Fixture { path: String, message: String },
    #[error("backend is not configured: {0}")]
    Config(String),
}

/// Something that turns a prompt into raw text.
pub trait Backend: Send + Sync {
    fn generate(&self, request: &GenRequest) -> Result<String, BackendError>;

    fn name(&self) -> &'static str;
}

pub fn prompt_hash(prompt: &str) -> String {
    hex::encode(Sha256::digest(prompt.as_bytes()))
}

/// One prompt/response pair as stored on disk. Either the prompt itself or
/// its SHA-256 may be given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_sha256: Option<String>,
    pub response: String,
}

impl Fixture {
    pub fn new(prompt: impl Into<String>, response: impl Into<String>) -> Self {
        Fixture { prompt: Some(prompt.into()), prompt_sha256: None, response: response.into() }
    }

    fn key(&self) -> Option<String> {
        self.prompt_sha256.clone().or_else(|| self.prompt.as_deref().map(prompt_hash))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FixtureFile {
    One(Fixture),
    Many(Vec<Fixture>),
}

/// Exact-match prompt table. Read-only once built.
#[derive(Debug, Clone, Default)]
pub struct MockBackend {
    responses: HashMap<String, String>,
}

impl MockBackend {
    pub fn new(fixtures: impl IntoIterator<Item = Fixture>) -> Self {
        let mut m = MockBackend::default();
        for f in fixtures {
            m.insert(f);
        }
        m
    }

    pub fn insert(&mut self, fixture: Fixture) {
        if let Some(key) = fixture.key() {
            self.responses.insert(key, fixture.response);
        }
    }

    /// Loads every `*.json` file in `dir`; a file holds one fixture or a list.
    pub fn from_dir(dir: &Path) -> Result<Self, BackendError> {
        let err = |path: &Path, message: String| BackendError::Fixture { path: path.display().to_string(), message };
        let mut paths: Vec<_> = fs::read_dir(dir)
            .map_err(|e| err(dir, e.to_string()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().map_or(false, |x| x == "json"))
            .collect();
        paths.sort();
        let mut m = MockBackend::default();
        for path in paths {
            let text = fs::read_to_string(&path).map_err(|e| err(&path, e.to_string()))?;
            match serde_json::from_str::<FixtureFile>(&text).map_err(|e| err(&path, e.to_string()))? {
                FixtureFile::One(f) => m.insert(f),
                FixtureFile::Many(fs) => fs.into_iter().for_each(|f| m.insert(f)),
            }
        }
        log::debug!("loaded {} fixtures from {}", m.len(), dir.display());
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }
}

impl Backend for MockBackend {
    fn generate(&self, request: &GenRequest) -> Result<String, BackendError> {
        let key = prompt_hash(&request.prompt);
        self.responses.get(&key).cloned().ok_or(BackendError::FixtureMiss(key))
    }

    fn name(&self) -> &'static str {
        "mock"
    }
}

pub const ENV_URL: &str = "ENGINE_BACKEND_URL";
pub const ENV_MODEL: &str = "ENGINE_BACKEND_MODEL";
pub const ENV_KEY: &str = "ENGINE_BACKEND_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LiveConfig {
    pub url: Option<String>,
    pub model: Option<String>,
    pub key: Option<String>,
    pub temperature: f64,
    pub timeout_secs: u64,
    /// Transport attempts per request.
    pub attempts: u32,
    pub backoff_ms: u64,
}

impl Default for LiveConfig {
    fn default() -> Self {
        LiveConfig { url: None, model: None, key: None, temperature: 0.0, timeout_secs: 60, attempts: 3, backoff_ms: 500 }
    }
}

impl LiveConfig {
    /// Fills unset endpoint fields from the environment.
    pub fn with_env(mut self) -> Self {
        let var = |k: &str| std::env::var(k).ok().filter(|v| !v.is_empty());
        self.url = self.url.or_else(|| var(ENV_URL));
        self.model = self.model.or_else(|| var(ENV_MODEL));
        self.key = self.key.or_else(|| var(ENV_KEY));
        self
    }
}

/// OpenAI-style text completion over HTTP.
pub struct LiveBackend {
    client: reqwest::blocking::Client,
    url: String,
    model: String,
    key: Option<String>,
    config: LiveConfig,
}

#[derive(Serialize)]
struct CompletionBody<'a> {
    model: &'a str,
    prompt: &'a str,
    max_tokens: u32,
    temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    stop: Option<&'a [String]>,
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    message: Option<Message>,
}

#[derive(Deserialize)]
struct Message {
    content: String,
}

impl LiveBackend {
    pub fn new(config: LiveConfig) -> Result<Self, BackendError> {
        let url = config.url.clone().ok_or_else(|| BackendError::Config(format!("{ENV_URL} is not set")))?;
        let model = config.model.clone().unwrap_or_else(|| "default".to_string());
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| BackendError::Config(e.to_string()))?;
        Ok(LiveBackend { client, url, model, key: config.key.clone(), config })
    }

    fn send(&self, request: &GenRequest) -> Result<String, BackendError> {
        let body = CompletionBody {
            model: &self.model,
            prompt: &request.prompt,
            max_tokens: request.max_tokens,
            temperature: self.config.temperature,
            stop: request.stop.as_deref(),
        };
        let mut req = self.client.post(&self.url).json(&body);
        if let Some(key) = &self.key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| BackendError::Transport { attempts: 1, message: e.to_string() })?;
        let status = resp.status();
        let text = resp.text().map_err(|e| BackendError::Transport { attempts: 1, message: e.to_string() })?;
        if !status.is_success() {
            return Err(BackendError::Status { status: status.as_u16(), body: text });
        }
        let parsed: CompletionResponse = serde_json::from_str(&text).map_err(|e| BackendError::Decode(e.to_string()))?;
        let choice = parsed.choices.into_iter().next().ok_or_else(|| BackendError::Decode("no choices".into()))?;
        choice
            .text
            .or(choice.message.map(|m| m.content))
            .ok_or_else(|| BackendError::Decode("choice has no text".into()))
    }
}

impl Backend for LiveBackend {
    fn generate(&self, request: &GenRequest) -> Result<String, BackendError> {
        let attempts = self.config.attempts.max(1);
        let mut last = String::new();
        for attempt in 1..=attempts {
            match self.send(request) {
                Ok(text) => return Ok(text),
                Err(BackendError::Transport { message, .. }) => {
                    log::warn!("backend attempt {attempt}/{attempts} failed: {message}");
                    last = message;
                }
                Err(BackendError::Status { status, body }) if status >= 500 || status == 429 => {
                    log::warn!("backend attempt {attempt}/{attempts} returned {status}");
                    last = format!("status {status}: {body}");
                }
                Err(other) => return Err(other),
            }
            if attempt < attempts {
                thread::sleep(Duration::from_millis(self.config.backoff_ms << (attempt - 1)));
            }
        }
        Err(BackendError::Transport { attempts, message: last })
    }

    fn name(&self) -> &'static str {
        "live"
    }
}
