//! Loader for textual architecture descriptions.
//!
//! The file is TOML:
//!
//! ```toml
//! neurons = 3
//! edges = [[2, 1], [3, 1], [1, 2], [1, 3], [2, 3]]
//!
//! [[links]]
//! neuron = 1
//! # one gate per input firing pattern, ascending pattern order; a gate is
//! # either a name (I, W, X, Y, Z) or eight numbers
//! # [re00, im00, re01, im01, re10, im10, re11, im11]
//! gates = ["I", "W", "W", "I"]
//! ```

use std::path::Path;

use quann::architecture::{Architecture, Digraph, NeuralLinksFunction};
use quann::neuron::pauli;
use quann::qcore::{Cplx, DenseOperator};

use crate::exit::{CliError, CliResult};

fn named_gate(name: &str) -> CliResult<DenseOperator> {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    match name {
        "I" => Ok(DenseOperator::identity(2)),
        "W" | "H" => Ok(DenseOperator::two_by_two(
            Cplx::new(inv, 0.0),
            Cplx::new(inv, 0.0),
            Cplx::new(inv, 0.0),
            Cplx::new(-inv, 0.0),
        )),
        "X" => Ok(pauli(1).expect("σ₁")),
        "Y" => Ok(pauli(2).expect("σ₂")),
        "Z" => Ok(pauli(3).expect("σ₃")),
        other => Err(CliError::data(format!(
            "unknown gate name `{other}` (use I, W, X, Y, Z or eight numbers)"
        ))),
    }
}

fn numeric_gate(values: &[toml::Value]) -> CliResult<DenseOperator> {
    if values.len() != 8 {
        return Err(CliError::data(format!(
            "a numeric gate needs 8 entries (four complex numbers), got {}",
            values.len()
        )));
    }
    let mut nums = [0.0f64; 8];
    for (slot, v) in nums.iter_mut().zip(values) {
        *slot = match v {
            toml::Value::Float(f) => *f,
            toml::Value::Integer(i) => *i as f64,
            other => {
                return Err(CliError::data(format!(
                    "gate entries must be numbers, got {}",
                    other.type_str()
                )))
            }
        };
    }
    Ok(DenseOperator::two_by_two(
        Cplx::new(nums[0], nums[1]),
        Cplx::new(nums[2], nums[3]),
        Cplx::new(nums[4], nums[5]),
        Cplx::new(nums[6], nums[7]),
    ))
}

fn parse_gate(value: &toml::Value) -> CliResult<DenseOperator> {
    match value {
        toml::Value::String(name) => named_gate(name),
        toml::Value::Array(values) => numeric_gate(values),
        other => Err(CliError::data(format!(
            "gate must be a name or an 8-number array, got {}",
            other.type_str()
        ))),
    }
}

pub fn load_architecture(path: &Path) -> CliResult<Architecture> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::data(format!("bad TOML in {}: {e}", path.display())))?;

    let neurons = table
        .get("neurons")
        .and_then(|v| v.as_integer())
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::data("`neurons` must be a positive integer"))?
        as usize;

    let edges_value = table
        .get("edges")
        .and_then(|v| v.as_array())
        .ok_or_else(|| CliError::data("`edges` must be an array of [from, to] pairs"))?;
    let mut edges = Vec::new();
    for pair in edges_value {
        let arr = pair
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| CliError::data("each edge is a [from, to] pair"))?;
        let from = arr[0].as_integer().filter(|&v| v >= 1).ok_or_else(|| {
            CliError::data("edge endpoints are positive neuron indices")
        })? as usize;
        let to = arr[1]
            .as_integer()
            .filter(|&v| v >= 1)
            .ok_or_else(|| CliError::data("edge endpoints are positive neuron indices"))?
            as usize;
        edges.push((from, to));
    }
    let digraph =
        Digraph::new(neurons, edges).map_err(|e| CliError::data(format!("bad digraph: {e}")))?;

    let links_value = table
        .get("links")
        .and_then(|v| v.as_array())
        .ok_or_else(|| CliError::data("`links` must be an array of tables"))?;
    let mut links = Vec::new();
    for entry in links_value {
        let entry = entry
            .as_table()
            .ok_or_else(|| CliError::data("each links entry is a table"))?;
        let neuron = entry
            .get("neuron")
            .and_then(|v| v.as_integer())
            .filter(|&v| v >= 1)
            .ok_or_else(|| CliError::data("links entry needs a positive `neuron`"))?
            as usize;
        let gates_value = entry
            .get("gates")
            .and_then(|v| v.as_array())
            .ok_or_else(|| CliError::data("links entry needs a `gates` array"))?;
        let gates: CliResult<Vec<DenseOperator>> = gates_value.iter().map(parse_gate).collect();
        let inputs = digraph.inputs_of(neuron);
        let link = NeuralLinksFunction::new(neuron, inputs, gates?)
            .map_err(|e| CliError::data(format!("bad links for neuron {neuron}: {e}")))?;
        links.push(link);
    }

    Architecture::new(digraph, links).map_err(|e| CliError::data(format!("bad architecture: {e}")))
}
