//! JSON Schema (draft 2020-12) for every document the CLI prints.

use serde_json::{json, Value};

use crate::bench::SCHEMA_VERSION;

fn counters(names: &[&str]) -> Value {
    let props: serde_json::Map<String, Value> = names
        .iter()
        .map(|n| (n.to_string(), json!({"type": "integer", "minimum": 0})))
        .collect();
    json!({"type": "object", "required": names, "properties": props})
}

pub fn schema() -> Value {
    let reduce_stats = counters(&["rows_in", "rows_out", "cols", "xor_word_ops", "nanos"]);
    let mut run_stats = counters(&[
        "nodes",
        "width",
        "max_table_rows",
        "max_table_rows_before_reduce",
        "max_slice_rows",
        "max_slice_universe",
        "max_slice_rows_after_reduce",
        "reduce_calls",
        "rows_eliminated",
        "reduce_skipped",
        "peak_memory_bytes",
        "nanos",
    ]);
    let props = run_stats["properties"].as_object_mut().expect("object");
    props.insert("reduce".into(), json!({"$ref": "#/$defs/reduce_stats"}));
    props.insert(
        "node_max_rows".into(),
        json!({"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}}),
    );
    props.insert(
        "per_node_rows".into(),
        json!({"type": "array", "items": {"type": "integer", "minimum": 0}}),
    );
    run_stats["required"]
        .as_array_mut()
        .expect("array")
        .extend([json!("reduce"), json!("node_max_rows")]);

    let answer = json!({
        "oneOf": [
            {"type": "integer", "minimum": 0},
            {"enum": ["yes", "no", "infeasible"]}
        ]
    });
    let policy = json!({"enum": ["never", "always", "threshold"]});
    let version = json!({"const": SCHEMA_VERSION});

    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": format!("twreduce/{SCHEMA_VERSION}"),
        "title": "twreduce output",
        "oneOf": [
            {"$ref": "#/$defs/solve"},
            {"$ref": "#/$defs/bench"},
            {"$ref": "#/$defs/verify"}
        ],
        "$defs": {
            "reduce_stats": reduce_stats,
            "run_stats": run_stats,
            "answer": answer,
            "solve": {
                "type": "object",
                "required": ["schema_version", "kind", "problem", "policy", "answer", "feasible",
                             "n", "m", "width", "decomposition", "stats"],
                "properties": {
                    "schema_version": version,
                    "kind": {"const": "solve"},
                    "problem": {"enum": ["hamilton", "tsp", "steiner"]},
                    "policy": policy,
                    "threshold": {"type": ["integer", "null"], "minimum": 1},
                    "answer": {"$ref": "#/$defs/answer"},
                    "feasible": {"type": "boolean"},
                    "n": {"type": "integer", "minimum": 0},
                    "m": {"type": "integer", "minimum": 0},
                    "width": {"type": "integer", "minimum": 0},
                    "decomposition": {"enum": ["supplied", "min-degree", "min-fill"]},
                    "stats": {"$ref": "#/$defs/run_stats"}
                }
            },
            "bench_record": {
                "type": "object",
                "required": ["instance", "problem", "policy", "n", "m", "status"],
                "properties": {
                    "instance": {"type": "string"},
                    "problem": {"enum": ["hamilton", "tsp", "steiner"]},
                    "policy": policy,
                    "threshold": {"type": ["integer", "null"], "minimum": 1},
                    "n": {"type": "integer", "minimum": 0},
                    "m": {"type": "integer", "minimum": 0},
                    "width": {"type": ["integer", "null"], "minimum": 0},
                    "status": {"enum": ["ok", "timeout", "error"]},
                    "error": {"type": ["string", "null"]},
                    "answer": {"oneOf": [{"$ref": "#/$defs/answer"}, {"type": "null"}]},
                    "naive_ceiling": {"type": ["integer", "null"], "minimum": 1},
                    "reduce_cap": {"type": ["integer", "null"], "minimum": 1},
                    "stats": {"oneOf": [{"$ref": "#/$defs/run_stats"}, {"type": "null"}]}
                }
            },
            "bench": {
                "type": "object",
                "required": ["schema_version", "kind", "records"],
                "properties": {
                    "schema_version": version,
                    "kind": {"const": "bench"},
                    "records": {"type": "array", "items": {"$ref": "#/$defs/bench_record"}}
                }
            },
            "verify": {
                "type": "object",
                "required": ["schema_version", "kind", "seed", "trials", "suites", "passed"],
                "properties": {
                    "schema_version": version,
                    "kind": {"const": "verify"},
                    "seed": {"type": "integer", "minimum": 0},
                    "trials": {"type": "integer", "minimum": 0},
                    "passed": {"type": "boolean"},
                    "suites": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["suite", "trials", "checks", "failures"],
                            "properties": {
                                "suite": {"enum": ["reduce", "hamilton", "steiner"]},
                                "trials": {"type": "integer", "minimum": 0},
                                "checks": {"type": "integer", "minimum": 0},
                                "failures": {"type": "integer", "minimum": 0},
                                "first_failure": {"type": ["string", "null"]}
                            }
                        }
                    }
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_is_versioned() {
        let s = schema();
        assert_eq!(s["$id"], "twreduce/v1");
        assert_eq!(s["$defs"]["solve"]["properties"]["schema_version"]["const"], "v1");
        let req = s["$defs"]["reduce_stats"]["required"].as_array().unwrap();
        assert!(req.contains(&json!("rows_out")));
    }
}
