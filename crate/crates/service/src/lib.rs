//! HTTP JSON API over the pairrank library.
//!
//! * `POST /v1/rank` scores a batch of comparisons.
//! * `GET /v1/algorithms` lists the algorithms and their parameters.
//! * Anything else is served from the static directory, if one is configured.

use std::path::PathBuf;

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use pairrank::{
    bootstrap_ci, list_algorithms, pairwise_win_rates, rank, rate, Algorithm, AlgorithmParams,
    ComparisonRecord, Error, Index, PairwiseMatrix,
};
use serde::Serialize;
use serde_json::{Map, Value};
use tower_http::services::ServeDir;

pub const DEFAULT_MAX_BODY_BYTES: usize = 50 * 1024 * 1024;
pub const DEFAULT_MAX_RECORDS: usize = 5_000_000;
pub const MAX_BOOTSTRAP_ROUNDS: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct Config {
    pub max_body_bytes: usize,
    pub max_records: usize,
    /// Directory served at `/`; nothing is served when `None`.
    pub static_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            max_body_bytes: DEFAULT_MAX_BODY_BYTES,
            max_records: DEFAULT_MAX_RECORDS,
            static_dir: None,
        }
    }
}

pub fn router(config: Config) -> Router {
    let api = Router::new()
        .route("/v1/rank", post(rank_handler))
        .route("/v1/algorithms", get(algorithms_handler))
        .layer(DefaultBodyLimit::max(config.max_body_bytes));
    let app = match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.with_state(config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

/// A JSON error response.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    details: Vec<FieldError>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
            details: Vec::new(),
        }
    }

    fn invalid(details: Vec<FieldError>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            message: "invalid request body".into(),
            details,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = Map::new();
        body.insert("error".into(), Value::String(self.message));
        if !self.details.is_empty() {
            body.insert("details".into(), serde_json::to_value(self.details).unwrap_or_default());
        }
        (self.status, Json(Value::Object(body))).into_response()
    }
}

/// A request that passed schema validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RankRequest {
    pub records: Vec<ComparisonRecord>,
    pub algorithm: Algorithm,
    pub params: AlgorithmParams,
    pub bootstrap_rounds: Option<usize>,
}

fn field(errors: &mut Vec<FieldError>, name: impl Into<String>, message: impl Into<String>) {
    errors.push(FieldError {
        field: name.into(),
        message: message.into(),
    });
}

fn parse_record(value: &Value, position: usize, errors: &mut Vec<FieldError>) -> Option<ComparisonRecord> {
    let path = |name: &str| format!("records[{position}].{name}");
    let Some(object) = value.as_object() else {
        field(errors, format!("records[{position}]"), "must be an object");
        return None;
    };
    let before = errors.len();
    let mut text = |name: &str| match object.get(name) {
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => {
            field(errors, path(name), "must be a string");
            None
        }
        None => {
            field(errors, path(name), "is required");
            None
        }
    };
    let left = text("left");
    let right = text("right");
    let winner = text("winner").and_then(|label| match label.parse() {
        Ok(w) => Some(w),
        Err(_) => {
            field(errors, path("winner"), "must be one of left, right, tie");
            None
        }
    });
    let weight = match object.get("weight") {
        None | Some(Value::Null) => 1.0,
        Some(Value::Number(n)) => match n.as_f64() {
            Some(w) if w.is_finite() && w >= 0.0 => w,
            _ => {
                field(errors, path("weight"), "must be a finite non-negative number");
                1.0
            }
        },
        Some(_) => {
            field(errors, path("weight"), "must be a number");
            1.0
        }
    };
    for key in object.keys() {
        if !matches!(key.as_str(), "left" | "right" | "winner" | "weight") {
            field(errors, path(key), "unknown field");
        }
    }
    if errors.len() > before {
        return None;
    }
    Some(ComparisonRecord::weighted(left?, right?, winner?, weight))
}

/// Most field errors reported in one response.
const MAX_FIELD_ERRORS: usize = 50;

/// Checks a request body field by field. Unknown algorithms and parameter values
/// that parse but are out of range are reported as 422; schema violations as 400.
pub fn validate_request(body: &Value, config: &Config) -> Result<RankRequest, ApiError> {
    let Some(object) = body.as_object() else {
        return Err(ApiError::invalid(vec![FieldError {
            field: String::new(),
            message: "request body must be a JSON object".into(),
        }]));
    };
    let mut errors = Vec::new();

    for key in object.keys() {
        if !matches!(key.as_str(), "records" | "algorithm" | "params" | "bootstrap_rounds") {
            field(&mut errors, key.clone(), "unknown field");
        }
    }

    let mut records = Vec::new();
    match object.get("records") {
        Some(Value::Array(items)) => {
            if items.len() > config.max_records {
                return Err(ApiError::new(
                    StatusCode::PAYLOAD_TOO_LARGE,
                    format!("{} records exceed the limit of {}", items.len(), config.max_records),
                ));
            }
            records.reserve(items.len());
            for (position, item) in items.iter().enumerate() {
                if let Some(record) = parse_record(item, position, &mut errors) {
                    records.push(record);
                }
                if errors.len() >= MAX_FIELD_ERRORS {
                    break;
                }
            }
        }
        Some(_) => field(&mut errors, "records", "must be an array"),
        None => field(&mut errors, "records", "is required"),
    }

    let algorithm_name = match object.get("algorithm") {
        Some(Value::String(name)) => Some(name.clone()),
        Some(_) => {
            field(&mut errors, "algorithm", "must be a string");
            None
        }
        None => {
            field(&mut errors, "algorithm", "is required");
            None
        }
    };

    let params = match object.get("params") {
        None | Some(Value::Null) => AlgorithmParams::default(),
        Some(value @ Value::Object(_)) => match serde_json::from_value(value.clone()) {
            Ok(params) => params,
            Err(e) => {
                field(&mut errors, "params", e.to_string());
                AlgorithmParams::default()
            }
        },
        Some(_) => {
            field(&mut errors, "params", "must be an object");
            AlgorithmParams::default()
        }
    };

    let bootstrap_rounds = match object.get("bootstrap_rounds") {
        None | Some(Value::Null) => None,
        Some(value) => match value.as_u64() {
            Some(0) => None,
            Some(n) if n <= MAX_BOOTSTRAP_ROUNDS => Some(n as usize),
            _ => {
                field(
                    &mut errors,
                    "bootstrap_rounds",
                    format!("must be an integer between 0 and {MAX_BOOTSTRAP_ROUNDS}"),
                );
                None
            }
        },
    };

    if !errors.is_empty() {
        return Err(ApiError::invalid(errors));
    }
    let name = algorithm_name.unwrap_or_default();
    let algorithm: Algorithm = name.parse().map_err(|_| {
        let valid: Vec<&str> = Algorithm::names().collect();
        ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            format!("unknown algorithm {name:?}; valid names: {}", valid.join(", ")),
        )
    })?;
    if let Err(Error::InvalidParameter { name, reason }) = params.validate(algorithm) {
        return Err(ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: "invalid parameter".into(),
            details: vec![FieldError {
                field: format!("params.{name}"),
                message: reason,
            }],
        });
    }
    Ok(RankRequest {
        records,
        algorithm,
        params,
        bootstrap_rounds,
    })
}

#[derive(Debug, Serialize)]
pub struct RankedItem {
    pub item: String,
    pub score: f64,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Meta {
    pub algorithm: Algorithm,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Omission {
    pub reason: &'static str,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct RankResponse {
    pub items: Vec<RankedItem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairwise: Option<PairwiseMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairwise_omitted: Option<Omission>,
    pub meta: Meta,
}

/// Scores a validated request.
pub fn compute(request: &RankRequest) -> Result<RankResponse, Error> {
    let index = Index::build(&request.records);
    let result = rate(&request.records, Some(&index), request.algorithm, &request.params)?;
    let intervals = match request.bootstrap_rounds {
        Some(rounds) if !request.records.is_empty() => Some(bootstrap_ci(
            &request.records,
            request.algorithm,
            &request.params,
            rounds,
            Some(&index),
        )?),
        _ => None,
    };
    let items = rank(&result.scores)
        .into_iter()
        .map(|r| {
            let interval = intervals.as_ref().and_then(|s| s.get(&r.item));
            RankedItem {
                lower: interval.map(|i| i.lower),
                upper: interval.map(|i| i.upper),
                item: r.item,
                score: r.score,
                rank: r.rank,
            }
        })
        .collect();
    let (pairwise, pairwise_omitted) = match pairwise_win_rates(&result.scores) {
        Ok(matrix) => (Some(matrix), None),
        Err(e) => (
            None,
            Some(Omission {
                reason: "non_positive_score",
                message: e.to_string(),
            }),
        ),
    };
    Ok(RankResponse {
        items,
        pairwise,
        pairwise_omitted,
        meta: Meta {
            algorithm: result.algorithm,
            iterations: result.iterations,
            converged: result.converged,
            nu: result.tie_parameter,
        },
    })
}

async fn rank_handler(
    State(config): State<Config>,
    body: Result<Bytes, BytesRejection>,
) -> Result<Json<RankResponse>, ApiError> {
    let body = body.map_err(|rejection| ApiError::new(rejection.status(), rejection.body_text()))?;
    let value: Value = serde_json::from_slice(&body).map_err(|e| {
        ApiError::invalid(vec![FieldError {
            field: String::new(),
            message: format!("malformed JSON: {e}"),
        }])
    })?;
    let request = validate_request(&value, &config)?;
    let response = tokio::task::spawn_blocking(move || compute(&request))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    Ok(Json(response))
}

async fn algorithms_handler() -> impl IntoResponse {
    Json(list_algorithms())
}
