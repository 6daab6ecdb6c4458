//! JSON scheme definitions.
//!
//! ```json
//! {
//!   "name": "bit flips",
//!   "qubits": 1,
//!   "key_model": "private",
//!   "keys": [
//!     {"id": "I", "prob": 0.5, "unitary": "pauli:I"},
//!     {"id": "X", "prob": 0.5, "unitary": [[0, 1], [1, 0]], "decrypt": "pauli:X"}
//!   ],
//!   "plaintexts": [
//!     {"name": "zero", "state": "basis:0"},
//!     {"name": "plus", "state": "vector:[0.7071067811865476,0;0.7071067811865476,0]"}
//!   ]
//! }
//! ```
//!
//! Instead of `keys`, a file may name a reference scheme with
//! `"builtin": {"kind": "qotp", "params": []}`. A key carries either `unitary`
//! or `kraus` (a list of matrices); `decrypt` is optional and takes the same
//! forms as `unitary`. Matrix entries are reals or `[re, im]` pairs.

use serde::Serialize;
use serde_json::{Map, Value};

use qindist_core::linalg::{Complex, ComplexMatrix};
use qindist_core::scheme::{builtin, Builtin, Key, KeyModel, Limits, PlaintextSet, Scheme};
use qindist_core::state::{Channel, PauliString, PureState};

use crate::error::{CliError, CliResult};

/// Parsed, normalized scheme file. Serializing it gives the canonical form of the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeFile {
    pub name: String,
    pub qubits: usize,
    pub key_model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keys: Option<Vec<KeySpec>>,
    pub plaintexts: Vec<PlaintextSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuiltinSpec {
    pub kind: String,
    pub params: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeySpec {
    pub id: String,
    pub prob: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<OperatorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixSpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decrypt: Option<OperatorSpec>,
}

/// Row-major complex entries as `[re, im]` pairs.
pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Pauli(String),
    Matrix(MatrixSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaintextSpec {
    pub name: String,
    pub state: String,
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn expected(path: &str, what: &str, got: &Value) -> CliError {
    CliError::field(path, format!("expected {what}, found {}", type_name(got)))
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> CliResult<&'a Map<String, Value>> {
    let map = v
        .as_object()
        .ok_or_else(|| expected(path, "an object", v))?;
    if let Some(unknown) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CliError::field(join(path, unknown), "unknown field"));
    }
    Ok(map)
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn required<'a>(map: &'a Map<String, Value>, path: &str, key: &str) -> CliResult<&'a Value> {
    map.get(key)
        .ok_or_else(|| CliError::field(join(path, key), "missing required field"))
}

fn string(v: &Value, path: &str) -> CliResult<String> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| expected(path, "a string", v))
}

fn number(v: &Value, path: &str) -> CliResult<f64> {
    v.as_f64().ok_or_else(|| expected(path, "a number", v))
}

fn array<'a>(v: &'a Value, path: &str) -> CliResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| expected(path, "an array", v))
}

fn entry(v: &Value, path: &str) -> CliResult<[f64; 2]> {
    match v {
        Value::Number(_) => Ok([number(v, path)?, 0.0]),
        Value::Array(parts) if parts.len() == 2 => Ok([
            number(&parts[0], &format!("{path}[0]"))?,
            number(&parts[1], &format!("{path}[1]"))?,
        ]),
        _ => Err(expected(path, "a number or an [re, im] pair", v)),
    }
}

fn matrix(v: &Value, path: &str) -> CliResult<MatrixSpec> {
    let rows = array(v, path)?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let row_path = format!("{path}[{i}]");
            array(row, &row_path)?
                .iter()
                .enumerate()
                .map(|(j, e)| entry(e, &format!("{row_path}[{j}]")))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<MatrixSpec>>()?;
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(CliError::field(path, "matrix must be square and nonempty"));
    }
    Ok(parsed)
}

fn operator(v: &Value, path: &str) -> CliResult<OperatorSpec> {
    match v {
        Value::String(s) => {
            let body = s.strip_prefix("pauli:").ok_or_else(|| {
                CliError::field(path, format!("expected \"pauli:<STRING>\", found {s:?}"))
            })?;
            let p: PauliString = body.parse().map_err(|e| CliError::field(path, e))?;
            Ok(OperatorSpec::Pauli(format!("pauli:{p}")))
        }
        Value::Array(_) => Ok(OperatorSpec::Matrix(matrix(v, path)?)),
        other => Err(expected(path, "\"pauli:<STRING>\" or a matrix", other)),
    }
}

fn format_vector(amplitudes: &[[f64; 2]]) -> String {
    let body: Vec<String> = amplitudes
        .iter()
        .map(|[re, im]| format!("{re},{im}"))
        .collect();
    format!("vector:[{}]", body.join(";"))
}

fn parse_vector(body: &str, path: &str) -> CliResult<Vec<[f64; 2]>> {
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| CliError::field(path, "vector must be written as [re,im;re,im;...]"))?;
    inner
        .split(';')
        .enumerate()
        .map(|(i, part)| {
            let nums = part
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::field(path, format!("amplitude {i}: {e}")))?;
            match nums[..] {
                [re] => Ok([re, 0.0]),
                [re, im] => Ok([re, im]),
                _ => Err(CliError::field(
                    path,
                    format!("amplitude {i}: expected re or re,im"),
                )),
            }
        })
        .collect()
}

fn state_spec(v: &Value, path: &str) -> CliResult<String> {
    let s = string(v, path)?;
    if let Some(bits) = s.strip_prefix("basis:") {
        PureState::basis(bits).map_err(|e| CliError::field(path, e))?;
        Ok(s)
    } else if let Some(body) = s.strip_prefix("vector:") {
        Ok(format_vector(&parse_vector(body, path)?))
    } else {
        Err(CliError::field(
            path,
            format!("expected \"basis:<bits>\" or \"vector:[re,im;...]\", found {s:?}"),
        ))
    }
}

impl SchemeFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let root: Value = serde_json::from_str(text).map_err(|e| CliError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let map = object(
            &root,
            "",
            &[
                "name",
                "qubits",
                "key_model",
                "builtin",
                "keys",
                "plaintexts",
            ],
        )?;
        let name = string(required(map, "", "name")?, "name")?;
        let qubits_value = required(map, "", "qubits")?;
        let qubits = qubits_value
            .as_u64()
            .filter(|&q| q >= 1)
            .ok_or_else(|| expected("qubits", "a positive integer", qubits_value))?
            as usize;
        let key_model = match map.get("key_model") {
            None => "private".to_string(),
            Some(v) => {
                let s = string(v, "key_model")?;
                if s != "private" && s != "public" {
                    return Err(CliError::field(
                        "key_model",
                        format!("expected \"private\" or \"public\", found {s:?}"),
                    ));
                }
                s
            }
        };

        let builtin = map
            .get("builtin")
            .map(|v| -> CliResult<BuiltinSpec> {
                let b = object(v, "builtin", &["kind", "params"])?;
                let kind = string(required(b, "builtin", "kind")?, "builtin.kind")?;
                let params = match b.get("params") {
                    None => Vec::new(),
                    Some(p) => array(p, "builtin.params")?
                        .iter()
                        .enumerate()
                        .map(|(i, s)| string(s, &format!("builtin.params[{i}]")))
                        .collect::<CliResult<_>>()?,
                };
                Ok(BuiltinSpec { kind, params })
            })
            .transpose()?;

        let keys = map
            .get("keys")
            .map(|v| {
                array(v, "keys")?
                    .iter()
                    .enumerate()
                    .map(|(i, k)| Self::parse_key(k, &format!("keys[{i}]")))
                    .collect::<CliResult<Vec<_>>>()
            })
            .transpose()?;

        match (&builtin, &keys) {
            (Some(_), Some(_)) => {
                return Err(CliError::field(
                    "keys",
                    "give either \"builtin\" or \"keys\", not both",
                ))
            }
            (None, None) => {
                return Err(CliError::field(
                    "keys",
                    "one of \"builtin\" or \"keys\" is required",
                ))
            }
            _ => {}
        }

        let plaintexts = array(required(map, "", "plaintexts")?, "plaintexts")?
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let path = format!("plaintexts[{i}]");
                let m = object(p, &path, &["name", "state"])?;
                Ok(PlaintextSpec {
                    name: string(required(m, &path, "name")?, &join(&path, "name"))?,
                    state: state_spec(required(m, &path, "state")?, &join(&path, "state"))?,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;

        Ok(Self {
            name,
            qubits,
            key_model,
            builtin,
            keys,
            plaintexts,
        })
    }

    fn parse_key(v: &Value, path: &str) -> CliResult<KeySpec> {
        let m = object(v, path, &["id", "prob", "unitary", "kraus", "decrypt"])?;
        let id = string(required(m, path, "id")?, &join(path, "id"))?;
        let prob = number(required(m, path, "prob")?, &join(path, "prob"))?;
        let unitary = m
            .get("unitary")
            .map(|u| operator(u, &join(path, "unitary")))
            .transpose()?;
        let kraus = m
            .get("kraus")
            .map(|k| {
                let kpath = join(path, "kraus");
                array(k, &kpath)?
                    .iter()
                    .enumerate()
                    .map(|(i, op)| matrix(op, &format!("{kpath}[{i}]")))
                    .collect::<CliResult<Vec<_>>>()
            })
            .transpose()?;
        if unitary.is_some() == kraus.is_some() {
            return Err(CliError::field(
                path,
                "key needs exactly one of \"unitary\" or \"kraus\"",
            ));
        }
        let decrypt = m
            .get("decrypt")
            .map(|d| operator(d, &join(path, "decrypt")))
            .transpose()?;
        Ok(KeySpec {
            id,
            prob,
            unitary,
            kraus,
            decrypt,
        })
    }

    /// Canonical JSON form: fixed field order, explicit defaults, complex entries as pairs.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scheme files always serialize");
        s.push('\n');
        s
    }

    fn key_model(&self) -> KeyModel {
        if self.key_model == "public" {
            KeyModel::Public
        } else {
            KeyModel::Private
        }
    }

    /// Validated scheme and plaintexts.
    pub fn build(&self, limits: Limits) -> CliResult<(Scheme, PlaintextSet)> {
        let scheme = match (&self.builtin, &self.keys) {
            (Some(b), _) => {
                let kind = Builtin::from_name(&b.kind, &b.params)
                    .map_err(|e| CliError::field("builtin", e))?;
                builtin(&kind, self.qubits, limits)
                    .map_err(|e| Self::core_error("builtin", e))?
                    .with_key_model(self.key_model())
                    .with_name(&self.name)
            }
            (None, Some(keys)) => {
                let keys = keys
                    .iter()
                    .enumerate()
                    .map(|(i, k)| Self::build_key(k, &format!("keys[{i}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                Scheme::new(&self.name, self.qubits, self.key_model(), keys, limits)
                    .map_err(|e| Self::core_error("keys", e))?
            }
            (None, None) => unreachable!("parse requires builtin or keys"),
        };
        let entries = self
            .plaintexts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let path = format!("plaintexts[{i}].state");
                let state = match p.state.strip_prefix("basis:") {
                    Some(bits) => PureState::basis(bits),
                    None => {
                        let body = p.state.strip_prefix("vector:").unwrap_or(&p.state);
                        let amps = parse_vector(body, &path)?;
                        PureState::new(amps.iter().map(|&[re, im]| Complex::new(re, im)).collect())
                    }
                }
                .map_err(|e| CliError::field(&path, e))?;
                Ok((p.name.clone(), state))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let plaintexts = PlaintextSet::new(entries, self.qubits)
            .map_err(|e| CliError::field("plaintexts", e))?;
        Ok((scheme, plaintexts))
    }

    /// Capacity errors keep their kind so callers can report them as such.
    fn core_error(path: &str, e: qindist_core::Error) -> CliError {
        match e.kind() {
            qindist_core::ErrorKind::Capacity => CliError::Core(e),
            _ => CliError::field(path, e),
        }
    }

    fn build_key(k: &KeySpec, path: &str) -> CliResult<Key> {
        let encrypt = match (&k.unitary, &k.kraus) {
            (Some(u), _) => operator_channel(u, &join(path, "unitary"))?,
            (None, Some(ops)) => {
                let mats = ops
                    .iter()
                    .enumerate()
                    .map(|(i, m)| to_matrix(m, &format!("{path}.kraus[{i}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                Channel::kraus(mats).map_err(|e| CliError::field(join(path, "kraus"), e))?
            }
            (None, None) => unreachable!("parse requires unitary or kraus"),
        };
        let decrypt = k
            .decrypt
            .as_ref()
            .map(|d| operator_channel(d, &join(path, "decrypt")))
            .transpose()?;
        Ok(Key::new(&k.id, k.prob, encrypt, decrypt))
    }
}

fn to_matrix(m: &MatrixSpec, path: &str) -> CliResult<ComplexMatrix> {
    let data = m
        .iter()
        .flat_map(|row| row.iter().map(|&[re, im]| Complex::new(re, im)))
        .collect();
    ComplexMatrix::new(m.len(), data).map_err(|e| CliError::field(path, e))
}

fn operator_channel(op: &OperatorSpec, path: &str) -> CliResult<Channel> {
    match op {
        OperatorSpec::Pauli(s) => {
            let p: PauliString = s
                .trim_start_matches("pauli:")
                .parse()
                .map_err(|e| CliError::field(path, e))?;
            Ok(Channel::pauli(p))
        }
        OperatorSpec::Matrix(m) => {
            Channel::unitary(to_matrix(m, path)?).map_err(|e| CliError::field(path, e))
        }
    }
}

/// Reads and validates a scheme file.
pub fn parse_scheme_file(
    path: &std::path::Path,
    limits: Limits,
) -> CliResult<(Scheme, PlaintextSet)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    SchemeFile::parse(&text)?.build(limits)
}
