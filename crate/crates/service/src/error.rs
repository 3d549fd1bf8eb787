use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use lpattack_core::io::IoError;
use serde::Serialize;

/// Error body: `{code, message, pointer}`. 4xx only; validation findings are
/// never reported this way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub pointer: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                code: code.to_string(),
                message: message.into(),
                pointer: None,
            },
        }
    }

    pub fn at(mut self, pointer: impl Into<String>) -> Self {
        self.body.pointer = Some(pointer.into());
        self
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "E_NOT_FOUND", message)
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn unprocessable(code: &str, message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "E_INTERNAL", message)
    }
}

/// Malformed request documents are client errors with the decoder's pointer.
impl From<IoError> for ApiError {
    fn from(err: IoError) -> Self {
        let code = match &err {
            IoError::Syntax { .. } => "E_MALFORMED_JSON",
            IoError::Schema { .. } | IoError::UnsupportedVersion(_) => "E_SCHEMA",
            IoError::DuplicateId { .. } | IoError::Structure { .. } | IoError::EmptyText { .. } => "E_STRUCTURE",
            IoError::Io { .. } => return ApiError::internal(err.to_string()),
        };
        let pointer = err.pointer().map(str::to_string);
        let mut api = ApiError::bad_request(code, err.to_string());
        api.body.pointer = pointer;
        api
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
