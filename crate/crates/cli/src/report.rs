//! Report envelope shared by every command.
//!
//! ```text
//! {
//!   "schema": "crossnorm/1",
//!   "command": "bounds" | "classify" | "gnorm" | "witness",
//!   "input": {"path", "kind", "shape", "trace": [re, im], "hermitian"},
//!   "config": {"seed", "restarts", "max_iters", "tol", "strategies"},
//!   "result": { ... },
//!   "timestamp_unix", "wall_time_s"      (omitted with --no-timestamp)
//! }
//! ```
//!
//! Certificates inside `result` follow the library encoding: matrices are
//! `{"rows","cols","data":[[re,im],..]}` row-major; decompositions are term
//! lists (`weight`/`left`/`right` or `coeff`/`rho`/`sigma`); witnesses carry
//! their generating vector. Every bound can be rechecked from them.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use crossnorm::json::State;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "crossnorm/1";

pub fn input_digest(path: &str, state: &State) -> Value {
    let op = state.operator();
    let tr = op.trace();
    json!({
        "path": path,
        "kind": match state { State::Operator(_) => "operator", State::Vector(_) => "vector" },
        "shape": {"dh": state.shape().dh(), "dj": state.shape().dj()},
        "trace": [tr.re, tr.im],
        "hermitian": op.is_hermitian(),
    })
}

pub struct Envelope {
    started: Instant,
    timestamps: bool,
}

impl Envelope {
    pub fn start(timestamps: bool) -> Self {
        Self {
            started: Instant::now(),
            timestamps,
        }
    }

    pub fn finish(&self, command: &str, input: Value, config: Value, result: Value) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), command.into());
        m.insert("input".into(), input);
        m.insert("config".into(), config);
        m.insert("result".into(), result);
        if self.timestamps {
            let now = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            m.insert("timestamp_unix".into(), now.into());
            m.insert(
                "wall_time_s".into(),
                self.started.elapsed().as_secs_f64().into(),
            );
        }
        Value::Object(m)
    }
}
