//! Engine configuration file (TOML, or JSON when the name ends in `.json`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::TriggerLexicon;
use crate::gateway::{Backend, Gateway, GatewayConfig, LiveConfig, Templates};
use crate::number::Decimal;
use crate::numerals::{HaloMode, HaloPolicy, RoundnessClass};
use crate::pipeline::PipelineConfig;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid config {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaloModeName {
    Empty,
    Relative,
    Roundness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct HaloSection {
    pub mode: HaloModeName,
    /// Relative width for `mode = "relative"`.
    pub epsilon: Option<Decimal>,
    pub modifier_width: Decimal,
    pub modifier_widths: BTreeMap<String, Decimal>,
    pub roundness_widths: BTreeMap<RoundnessClass, Decimal>,
}

impl Default for HaloSection {
    fn default() -> Self {
        let p = HaloPolicy::default();
        HaloSection {
            mode: HaloModeName::Empty,
            epsilon: None,
            modifier_width: p.modifier_width,
            modifier_widths: p.modifier_widths,
            roundness_widths: p.roundness_widths,
        }
    }
}

impl HaloSection {
    pub fn policy(&self) -> Result<HaloPolicy, ConfigError> {
        let mode = match self.mode {
            HaloModeName::Empty => HaloMode::Empty,
            HaloModeName::Roundness => HaloMode::Roundness,
            HaloModeName::Relative => HaloMode::Relative {
                epsilon: self
                    .epsilon
                    .clone()
                    .ok_or_else(|| ConfigError::Invalid("halo.mode = \"relative\" needs halo.epsilon".into()))?,
            },
        };
        let mut roundness_widths = HaloPolicy::default().roundness_widths;
        roundness_widths.extend(self.roundness_widths.clone());
        Ok(HaloPolicy {
            mode,
            modifier_width: self.modifier_width.clone(),
            modifier_widths: self.modifier_widths.iter().map(|(k, v)| (k.to_lowercase(), v.clone())).collect(),
            roundness_widths,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BackendSection {
    pub url: Option<String>,
    pub model: Option<String>,
    pub key: Option<String>,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_secs: u64,
    pub attempts: u32,
    pub backoff_ms: u64,
}

impl Default for BackendSection {
    fn default() -> Self {
        let live = LiveConfig::default();
        BackendSection {
            url: None,
            model: None,
            key: None,
            temperature: live.temperature,
            max_tokens: GatewayConfig::default().max_tokens,
            timeout_secs: live.timeout_secs,
            attempts: live.attempts,
            backoff_ms: live.backoff_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProofSection {
    pub max_merge: usize,
    pub max_candidates: usize,
    pub delegate_natops: bool,
    pub decompose: bool,
}

impl Default for ProofSection {
    fn default() -> Self {
        let p = PipelineConfig::default();
        ProofSection {
            max_merge: p.max_merge,
            max_candidates: p.max_candidates,
            delegate_natops: p.delegate_natops,
            decompose: p.decompose,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub retries: u32,
    pub max_in_flight: usize,
    pub max_tokens_ceiling: u32,
    /// Directory with template files overriding the bundled ones.
    pub templates: Option<PathBuf>,
    /// Extra trigger phrases, function name → phrases.
    pub triggers: BTreeMap<String, Vec<String>>,
    pub halo: HaloSection,
    pub backend: BackendSection,
    pub proof: ProofSection,
}

impl Default for Config {
    fn default() -> Self {
        let g = GatewayConfig::default();
        Config {
            retries: g.retries,
            max_in_flight: g.max_in_flight,
            max_tokens_ceiling: g.max_tokens_ceiling,
            templates: None,
            triggers: BTreeMap::new(),
            halo: HaloSection::default(),
            backend: BackendSection::default(),
            proof: ProofSection::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str, json: bool) -> Result<Config, String> {
        if json {
            serde_json::from_str(text).map_err(|e| e.to_string())
        } else {
            toml::from_str(text).map_err(|e| e.to_string())
        }
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let mut config = Config::parse(&text, json)
            .map_err(|message| ConfigError::Parse { path: path.display().to_string(), message })?;
        if let (Some(t), Some(parent)) = (&config.templates, path.parent()) {
            if t.is_relative() {
                config.templates = Some(parent.join(t));
            }
        }
        Ok(config)
    }

    pub fn gateway_config(&self) -> GatewayConfig {
        GatewayConfig {
            retries: self.retries,
            max_tokens: self.backend.max_tokens.min(self.max_tokens_ceiling),
            max_tokens_ceiling: self.max_tokens_ceiling,
            max_in_flight: self.max_in_flight,
        }
    }

    /// Backend endpoint settings, with unset fields taken from the environment.
    pub fn live_config(&self) -> LiveConfig {
        LiveConfig {
            url: self.backend.url.clone(),
            model: self.backend.model.clone(),
            key: self.backend.key.clone(),
            temperature: self.backend.temperature,
            timeout_secs: self.backend.timeout_secs,
            attempts: self.backend.attempts,
            backoff_ms: self.backend.backoff_ms,
        }
        .with_env()
    }

    /// Default lexicon extended with the configured phrases.
    pub fn lexicon(&self) -> Result<TriggerLexicon, ConfigError> {
        let mut lex = TriggerLexicon::default();
        if !self.triggers.is_empty() {
            let extra = TriggerLexicon::from_map(&self.triggers).map_err(|e| ConfigError::Invalid(e.to_string()))?;
            lex.extend(&extra).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(lex)
    }

    pub fn templates(&self) -> Result<Templates, ConfigError> {
        match &self.templates {
            Some(dir) => Templates::load_dir(dir).map_err(|e| ConfigError::Invalid(e.to_string())),
            None => Ok(Templates::default()),
        }
    }

    pub fn pipeline_config(&self) -> Result<PipelineConfig, ConfigError> {
        Ok(PipelineConfig {
            decompose: self.proof.decompose,
            max_merge: self.proof.max_merge,
            max_candidates: self.proof.max_candidates,
            delegate_natops: self.proof.delegate_natops,
            halo: self.halo.policy()?,
        })
    }

    pub fn gateway(&self, backend: Arc<dyn Backend>) -> Result<Gateway, ConfigError> {
        Ok(Gateway::new(backend, self.templates()?, self.lexicon()?, self.gateway_config()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Function;

    #[test]
    fn toml_keys() {
        let c = Config::parse(
            r#"
retries = 5
max_in_flight = 2

[triggers]
SUM = ["Totalling"]

[halo]
mode = "relative"
epsilon = 0.05
modifier_width = 0.2
roundness_widths = { "10-ness" = 0.1 }

[backend]
url = "http://localhost:9/v1/completions"
model = "m"
temperature = 0.3
max_tokens = 128

[proof]
max_merge = 2
"#,
            false,
        )
        .unwrap();
        assert_eq!(c.gateway_config().retries, 5);
        assert_eq!(c.gateway_config().max_tokens, 128);
        let p = c.pipeline_config().unwrap();
        assert_eq!(p.max_merge, 2);
        assert_eq!(p.halo.mode, HaloMode::Relative { epsilon: Decimal::from_ratio(5, 100) });
        assert_eq!(p.halo.modifier_width, Decimal::from_ratio(2, 10));
        assert_eq!(p.halo.roundness_widths[&RoundnessClass::Ten], Decimal::from_ratio(1, 10));
        assert_eq!(p.halo.roundness_widths[&RoundnessClass::Five], Decimal::from_ratio(25, 1000));
        assert_eq!(c.lexicon().unwrap().match_prefix("Totalling 1 + 2 = 3").map(|m| m.0), Some(Function::Sum));
        assert_eq!(c.live_config().model.as_deref(), Some("m"));
    }

    #[test]
    fn json_and_defaults() {
        let c = Config::parse("{\"halo\": {\"mode\": \"roundness\"}}", true).unwrap();
        assert_eq!(c.pipeline_config().unwrap().halo.mode, HaloMode::Roundness);
        assert_eq!(Config::parse("", false).unwrap(), Config::default());
        assert_eq!(Config::default().pipeline_config().unwrap(), PipelineConfig::default());
        let bad = Config::parse("[halo]\nmode = \"relative\"", false).unwrap();
        assert!(matches!(bad.pipeline_config(), Err(ConfigError::Invalid(_))));
        assert!(Config::parse("[halo]\nmode = \"wide\"", false).is_err());
    }

    #[test]
    fn unknown_trigger_function() {
        let c = Config::parse("[triggers]\nSPLIT = [\"Splitting\"]", false).unwrap();
        assert!(c.lexicon().is_err());
    }

    #[test]
    fn load_resolves_template_dir() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("t")).unwrap();
        fs::write(dir.path().join("t/decomp.txt"), "Split: {claim}").unwrap();
        fs::write(dir.path().join("engine.toml"), "templates = \"t\"").unwrap();
        let c = Config::load(&dir.path().join("engine.toml")).unwrap();
        let t = c.templates().unwrap();
        assert_eq!(t.text(crate::gateway::Role::Decomposition), "Split: {claim}");
        assert!(matches!(Config::load(&dir.path().join("nope.toml")), Err(ConfigError::Io { .. })));
    }
}
