//! Chat-completion backends: a real HTTP client and a deterministic mock.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("endpoint returned status {0}")]
    Status(u16),
    #[error("malformed completion response: {0}")]
    Malformed(String),
    #[error("missing API key: set IWF_API_KEY")]
    MissingApiKey,
    #[error("injected failure: {0}")]
    Injected(String),
}

/// Anything that can turn a prompt into completion text.
pub trait JudgeBackend: Sync {
    fn complete(&self, prompt: &str) -> Result<String, BackendError>;
    fn model(&self) -> &str;
    /// Completions issued so far (cache hits excluded).
    fn calls(&self) -> usize;
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChatMessage,
}

#[derive(Deserialize)]
struct ChatMessage {
    content: String,
}

/// HTTP backend speaking the common chat-completion JSON shape:
/// request `{model, messages:[{role:"user", content}]}`, response text from
/// the first choice's message content. Bearer token from `IWF_API_KEY`.
pub struct HttpBackend {
    endpoint: String,
    model: String,
    api_key: String,
    client: reqwest::blocking::Client,
    calls: AtomicUsize,
}

impl HttpBackend {
    pub fn new(
        endpoint: impl Into<String>,
        model: impl Into<String>,
        api_key: impl Into<String>,
        timeout: Duration,
    ) -> Result<HttpBackend, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        Ok(HttpBackend {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key: api_key.into(),
            client,
            calls: AtomicUsize::new(0),
        })
    }
}

impl JudgeBackend for HttpBackend {
    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let body = json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        let response = self
            .client
            .post(&self.endpoint)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(BackendError::Status(status.as_u16()));
        }
        let parsed: ChatResponse = response
            .json()
            .map_err(|e| BackendError::Malformed(e.to_string()))?;
        parsed
            .choices
            .first()
            .map(|c| c.message.content.clone())
            .ok_or_else(|| BackendError::Malformed("no choices in response".into()))
    }

    fn model(&self) -> &str {
        &self.model
    }

    fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

/// Deterministic offline backend for tests and dry runs.
///
/// Selected by `mock://<mode>` endpoints:
/// - `mock://satisfied` — always answers "Yes, ..."
/// - `mock://violated` — always answers "No, ..."
/// - `mock://indeterminate` — always hedges
/// - `mock://fail-if=<marker>` — errors whenever the prompt contains the
///   marker, otherwise answers "Yes, ..."
pub struct MockBackend {
    mode: MockMode,
    model: String,
    calls: AtomicUsize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MockMode {
    Satisfied,
    Violated,
    Indeterminate,
    FailIf(String),
}

impl MockBackend {
    pub fn new(mode: MockMode, model: impl Into<String>) -> MockBackend {
        MockBackend { mode, model: model.into(), calls: AtomicUsize::new(0) }
    }

    /// Parse a `mock://...` endpoint; `None` for other schemes.
    pub fn from_endpoint(endpoint: &str, model: &str) -> Option<MockBackend> {
        let rest = endpoint.strip_prefix("mock://")?;
        let mode = match rest {
            "satisfied" => MockMode::Satisfied,
            "violated" => MockMode::Violated,
            "indeterminate" => MockMode::Indeterminate,
            _ => MockMode::FailIf(rest.strip_prefix("fail-if=")?.to_string()),
        };
        Some(MockBackend::new(mode, model))
    }
}

impl JudgeBackend for MockBackend {
    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        match &self.mode {
            MockMode::Satisfied => Ok("Yes, the question satisfies the criteria.".to_string()),
            MockMode::Violated => Ok("No, the question violates the criteria.".to_string()),
            MockMode::Indeterminate => Ok("It depends on the context.".to_string()),
            MockMode::FailIf(marker) => {
                if prompt.contains(marker.as_str()) {
                    Err(BackendError::Injected(format!("prompt contains {marker:?}")))
                } else {
                    Ok("Yes, the question satisfies the criteria.".to_string())
                }
            }
        }
    }

    fn model(&self) -> &str {
        &self.model
    }

    fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mock_endpoint_parsing() {
        assert!(matches!(
            MockBackend::from_endpoint("mock://satisfied", "m").map(|b| b.mode),
            Some(MockMode::Satisfied)
        ));
        assert!(matches!(
            MockBackend::from_endpoint("mock://fail-if=XYZ", "m").map(|b| b.mode),
            Some(MockMode::FailIf(s)) if s == "XYZ"
        ));
        assert!(MockBackend::from_endpoint("https://api.example.com", "m").is_none());
        assert!(MockBackend::from_endpoint("mock://bogus", "m").is_none());
    }

    #[test]
    fn mock_counts_calls_and_injects_failures() {
        let b = MockBackend::new(MockMode::FailIf("BAD".into()), "m");
        assert!(b.complete("a fine prompt").is_ok());
        assert!(b.complete("a BAD prompt").is_err());
        assert_eq!(b.calls(), 2);
    }
}
