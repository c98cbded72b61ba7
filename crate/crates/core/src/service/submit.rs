//! Client for posting compiled programs to a remote quantum-computing API.

use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ENDPOINT_VAR: &str = "TUQ_QASM_ENDPOINT";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubmitError {
    #[error("no endpoint: pass one explicitly or set {ENDPOINT_VAR}")]
    NotConfigured,
    #[error("invalid endpoint {0:?}")]
    InvalidEndpoint(String),
    #[error("refusing to submit an empty program")]
    EmptyProgram,
    #[error("transport error: {0}")]
    Transport(String),
}

/// Request body encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Envelope {
    /// The program text as `text/plain`.
    #[default]
    Plain,
    /// `{"qasm": text}` as `application/json`.
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmissionResult {
    pub endpoint: String,
    pub status: u16,
    pub body: String,
    pub submitted_at: DateTime<Utc>,
    /// Set for non-2xx responses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// An explicit endpoint wins over the environment value.
pub fn resolve_endpoint(flag: Option<&str>, env: Option<&str>) -> Result<String, SubmitError> {
    let chosen = flag
        .filter(|s| !s.trim().is_empty())
        .or(env.filter(|s| !s.trim().is_empty()))
        .ok_or(SubmitError::NotConfigured)?;
    let url = reqwest::Url::parse(chosen.trim()).map_err(|_| SubmitError::InvalidEndpoint(chosen.into()))?;
    if !matches!(url.scheme(), "http" | "https") {
        return Err(SubmitError::InvalidEndpoint(chosen.into()));
    }
    Ok(url.to_string())
}

/// [`resolve_endpoint`] against the process environment.
pub fn endpoint_from_env(flag: Option<&str>) -> Result<String, SubmitError> {
    let env = std::env::var(ENDPOINT_VAR).ok();
    resolve_endpoint(flag, env.as_deref())
}

/// Posts the program once. Any HTTP status is a result; only failing to get
/// a response at all is an error.
pub async fn submit(text: &str, endpoint: &str, envelope: Envelope) -> Result<SubmissionResult, SubmitError> {
    if text.trim().is_empty() {
        return Err(SubmitError::EmptyProgram);
    }
    let client = reqwest::Client::builder()
        .timeout(Duration::from_secs(60))
        .build()
        .map_err(|e| SubmitError::Transport(e.to_string()))?;
    let (content_type, body) = match envelope {
        Envelope::Plain => ("text/plain; charset=utf-8", text.to_string()),
        Envelope::Json => (
            "application/json",
            serde_json::json!({ "qasm": text }).to_string(),
        ),
    };
    let submitted_at = Utc::now();
    let response = client
        .post(endpoint)
        .header(reqwest::header::CONTENT_TYPE, content_type)
        .body(body)
        .send()
        .await
        .map_err(|e| SubmitError::Transport(chain(&e)))?;
    let status = response.status();
    let body = response
        .text()
        .await
        .map_err(|e| SubmitError::Transport(chain(&e)))?;
    Ok(SubmissionResult {
        endpoint: endpoint.to_string(),
        status: status.as_u16(),
        body,
        submitted_at,
        warning: (!status.is_success()).then(|| format!("endpoint answered {status}")),
    })
}

fn chain(e: &dyn std::error::Error) -> String {
    let mut s = e.to_string();
    let mut cur = e.source();
    while let Some(c) = cur {
        s.push_str(": ");
        s.push_str(&c.to_string());
        cur = c.source();
    }
    s
}
