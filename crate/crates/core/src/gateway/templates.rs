use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    QuestionGeneration,
    QuestionAnswering,
    Decomposition,
    NatopQuery,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::QuestionGeneration, Role::QuestionAnswering, Role::Decomposition, Role::NatopQuery];

    pub fn name(self) -> &'static str {
        match self {
            Role::QuestionGeneration => "question_generation",
            Role::QuestionAnswering => "question_answering",
            Role::Decomposition => "decomposition",
            Role::NatopQuery => "natop_query",
        }
    }

    /// File name of the role's template asset.
    pub fn file_name(self) -> &'static str {
        match self {
            Role::QuestionGeneration => "qg.txt",
            Role::QuestionAnswering => "qa.txt",
            Role::Decomposition => "decomp.txt",
            Role::NatopQuery => "natop.txt",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = TemplateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.name() == s || r.file_name().trim_end_matches(".txt") == s)
            .ok_or_else(|| TemplateError::UnknownRole(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("unknown role {0:?}")]
    UnknownRole(String),
    #[error("template {role} has no value for placeholder {{{name}}}")]
    MissingPlaceholder { role: Role, name: String },
    #[error("template {role} has an unclosed placeholder")]
    Unclosed { role: Role },
    #[error("could not read template {path}: {message}")]
    Io { path: String, message: String },
}

/// Prompt templates with `{name}` placeholders, one per role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Templates {
    texts: BTreeMap<Role, String>,
}

impl Default for Templates {
    fn default() -> Self {
        let texts = [
            (Role::QuestionGeneration, include_str!("../../templates/qg.txt")),
            (Role::QuestionAnswering, include_str!("../../templates/qa.txt")),
            (Role::Decomposition, include_str!("../../templates/decomp.txt")),
            (Role::NatopQuery, include_str!("../../templates/natop.txt")),
        ]
        .into_iter()
        .map(|(r, t)| (r, t.to_string()))
        .collect();
        Templates { texts }
    }
}

impl Templates {
    /// Bundled templates, overridden by any role file present in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, TemplateError> {
        let mut t = Templates::default();
        for role in Role::ALL {
            let path = dir.join(role.file_name());
            if path.exists() {
                let text = fs::read_to_string(&path)
                    .map_err(|e| TemplateError::Io { path: path.display().to_string(), message: e.to_string() })?;
                t.texts.insert(role, text);
            }
        }
        Ok(t)
    }

    pub fn set(&mut self, role: Role, text: impl Into<String>) {
        self.texts.insert(role, text.into());
    }

    pub fn text(&self, role: Role) -> &str {
        &self.texts[&role]
    }

    pub fn render(&self, role: Role, fields: &BTreeMap<&str, String>) -> Result<String, TemplateError> {
        let template = self.text(role);
        let mut out = String::with_capacity(template.len() + 256);
        let mut rest = template;
        while let Some(open) = rest.find('{') {
            out.push_str(&rest[..open]);
            let after = &rest[open + 1..];
            let close = after.find('}').ok_or(TemplateError::Unclosed { role })?;
            let name = &after[..close];
            let value = fields
                .get(name)
                .ok_or_else(|| TemplateError::MissingPlaceholder { role, name: name.to_string() })?;
            out.push_str(value);
            rest = &after[close + 1..];
        }
        out.push_str(rest);
        Ok(out)
    }
}

/// Renders a bundled template.
pub fn render_prompt(role: Role, fields: &BTreeMap<&str, String>) -> Result<String, TemplateError> {
    Templates::default().render(role, fields)
}
