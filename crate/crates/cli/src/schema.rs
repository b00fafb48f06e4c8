//! JSON Schemas (draft 2020-12) for the input and output of every subcommand.

use serde_json::{json, Value};

use crate::Command;

fn defs() -> Value {
    json!({
        "int": {
            "description": "an integer, preferably as a decimal string",
            "oneOf": [{"type": "string", "pattern": "^\\s*[-+]?[0-9]+\\s*$"}, {"type": "integer"}]
        },
        "rational": {
            "oneOf": [{"type": "string", "pattern": "^\\s*[-+]?[0-9]+(\\s*/\\s*[0-9]+)?\\s*$"}, {"type": "integer"}]
        },
        "intVector": {"type": "array", "items": {"$ref": "#/$defs/int"}},
        "cone": {
            "type": "object",
            "properties": {
                "ambient_dim": {"$ref": "#/$defs/int"},
                "rays": {"type": "array", "items": {"$ref": "#/$defs/intVector"}}
            },
            "required": ["rays"],
            "additionalProperties": false
        },
        "fan": {
            "type": "object",
            "properties": {
                "ambient_dim": {"$ref": "#/$defs/int"},
                "support": {"$ref": "#/$defs/cone"},
                "cones": {"type": "array", "items": {"$ref": "#/$defs/cone"}}
            },
            "required": ["ambient_dim", "support", "cones"],
            "additionalProperties": false
        },
        "polyTerm": {
            "type": "object",
            "properties": {"coeff": {"$ref": "#/$defs/rational"}, "exp": {"$ref": "#/$defs/intVector"}},
            "required": ["coeff", "exp"],
            "additionalProperties": false
        },
        "poly": {
            "oneOf": [{"type": "string"}, {"type": "array", "items": {"$ref": "#/$defs/polyTerm"}}]
        },
        "term": {
            "type": "object",
            "properties": {
                "coeff": {"$ref": "#/$defs/rational"},
                "exp": {"$ref": "#/$defs/intVector"},
                "comp": {"$ref": "#/$defs/int"}
            },
            "required": ["coeff", "exp", "comp"],
            "additionalProperties": false
        },
        "vector": {"type": "array", "items": {"$ref": "#/$defs/term"}},
        "submodule": {
            "type": "object",
            "properties": {
                "nvars": {"$ref": "#/$defs/int"},
                "rank": {"$ref": "#/$defs/int"},
                "generators": {"type": "array", "items": {"$ref": "#/$defs/vector"}}
            },
            "required": ["nvars", "rank", "generators"],
            "additionalProperties": false
        },
        "stratification": {
            "type": "object",
            "properties": {
                "ambient_dim": {"$ref": "#/$defs/int"},
                "nvars": {"$ref": "#/$defs/int"},
                "rank": {"$ref": "#/$defs/int"},
                "support": {"$ref": "#/$defs/cone"},
                "cells": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "pieces": {"type": "array", "items": {"$ref": "#/$defs/cone"}},
                            "initial_module": {"type": "array", "items": {"$ref": "#/$defs/vector"}}
                        },
                        "required": ["pieces", "initial_module"],
                        "additionalProperties": false
                    }
                }
            },
            "required": ["ambient_dim", "nvars", "rank", "support", "cells"],
            "additionalProperties": false
        },
        "presentation": {
            "type": "object",
            "properties": {
                "chart": {"$ref": "#/$defs/cone"},
                "vars": {"type": "array", "items": {"type": "string"}},
                "rows": {"$ref": "#/$defs/int"},
                "cols": {"$ref": "#/$defs/int"},
                "matrix": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/poly"}}}
            },
            "required": ["matrix"],
            "additionalProperties": false
        },
        "torReport": {
            "type": "object",
            "properties": {
                "face": {"$ref": "#/$defs/intVector"},
                "degree": {"$ref": "#/$defs/int"},
                "vanishes": {"type": "boolean"},
                "witness": {
                    "type": "object",
                    "properties": {"rank": {"$ref": "#/$defs/int"}, "vector": {"$ref": "#/$defs/vector"}},
                    "required": ["rank", "vector"],
                    "additionalProperties": false
                }
            },
            "required": ["face", "degree", "vanishes"],
            "additionalProperties": false
        },
        "graph": {
            "type": "object",
            "properties": {
                "vertices": {"$ref": "#/$defs/int"},
                "edges": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/int"}, "minItems": 2, "maxItems": 2}}
            },
            "required": ["vertices", "edges"],
            "additionalProperties": false
        },
        "divisorPair": {
            "type": "object",
            "properties": {
                "graph": {"$ref": "#/$defs/graph"},
                "d1": {"$ref": "#/$defs/intVector"},
                "d2": {"$ref": "#/$defs/intVector"}
            },
            "required": ["graph", "d1", "d2"],
            "additionalProperties": false
        },
        "certificate": {
            "type": "object",
            "properties": {
                "format": {"const": "statikit-cert/1"},
                "input_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                "input": {"$ref": "#/$defs/presentation"},
                "resolution": {"type": "string"},
                "kernel": {"$ref": "#/$defs/submodule"},
                "stratification": {"$ref": "#/$defs/stratification"},
                "fan": {"$ref": "#/$defs/fan"},
                "identity": {"type": "boolean"},
                "complete": {"type": "boolean"},
                "valid": {"type": "boolean"},
                "charts": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "cone": {"$ref": "#/$defs/cone"},
                            "substitution": {"type": "array", "items": {"$ref": "#/$defs/intVector"}},
                            "pullback": {"$ref": "#/$defs/presentation"},
                            "static": {"type": "boolean"},
                            "reports": {"type": "array", "items": {"$ref": "#/$defs/torReport"}}
                        },
                        "required": ["cone", "substitution", "pullback", "static", "reports"],
                        "additionalProperties": false
                    }
                },
                "audit": {
                    "type": "object",
                    "properties": {
                        "resolution": {"type": "string"},
                        "kernel": {"$ref": "#/$defs/submodule"},
                        "refines_primary": {"type": "boolean"},
                        "refines_secondary": {"type": "boolean"},
                        "agree": {"type": "boolean"}
                    },
                    "required": ["resolution", "kernel", "refines_primary", "refines_secondary", "agree"],
                    "additionalProperties": false
                }
            },
            "required": ["format", "input_hash", "input", "resolution", "kernel", "stratification", "fan", "identity", "complete", "valid", "charts"],
            "additionalProperties": false
        }
    })
}

fn object(properties: Value, required: &[&str]) -> Value {
    json!({"type": "object", "properties": properties, "required": required, "additionalProperties": false})
}

fn reference(name: &str) -> Value {
    json!({"$ref": format!("#/$defs/{name}")})
}

fn document(body: Value) -> Value {
    let mut doc = json!({"$schema": "https://json-schema.org/draft/2020-12/schema", "$defs": defs()});
    doc.as_object_mut().unwrap().extend(body.as_object().unwrap().clone());
    doc
}

fn input(command: &Command) -> Value {
    match command {
        Command::Stratify(_) => object(
            json!({
                "vars": {"type": "array", "items": {"type": "string"}},
                "nvars": reference("int"),
                "rank": reference("int"),
                "support": reference("cone"),
                "generators": {
                    "type": "array",
                    "items": {"oneOf": [{"type": "array", "items": reference("poly")}, reference("vector")]}
                }
            }),
            &["generators"],
        ),
        Command::Statify(_) | Command::CheckStatic(_) => reference("presentation"),
        Command::TorDim(_) => object(json!({"presentation": reference("presentation"), "bound": reference("int")}), &["presentation", "bound"]),
        Command::VerifyTheorem(_) => object(json!({"presentation": reference("presentation"), "fan": reference("fan")}), &["presentation", "fan"]),
        Command::Jacobian(_) => reference("graph"),
        Command::ChipEquiv(_) | Command::FiringScript(_) => reference("divisorPair"),
        Command::Replay(_) => reference("certificate"),
    }
}

fn output(command: &Command) -> Value {
    match command {
        Command::Stratify(_) => object(
            json!({"submodule": reference("submodule"), "stratification": reference("stratification"), "smooth_fan": reference("fan")}),
            &["submodule", "stratification", "smooth_fan"],
        ),
        Command::Statify(_) => reference("certificate"),
        Command::CheckStatic(_) => object(
            json!({"static": {"type": "boolean"}, "log_flat": {"type": "boolean"}, "reports": {"type": "array", "items": reference("torReport")}}),
            &["static", "log_flat", "reports"],
        ),
        Command::TorDim(_) => object(
            json!({
                "bound": reference("int"),
                "holds": {"type": "boolean"},
                "log_tor_dimension": reference("int"),
                "reports": {"type": "array", "items": reference("torReport")}
            }),
            &["bound", "holds", "log_tor_dimension", "reports"],
        ),
        Command::VerifyTheorem(_) => object(
            json!({
                "refines": {"type": "boolean"},
                "all_static": {"type": "boolean"},
                "agree": {"type": "boolean"},
                "charts": {
                    "type": "array",
                    "items": object(json!({"cone": reference("cone"), "static": {"type": "boolean"}}), &["cone", "static"])
                }
            }),
            &["refines", "all_static", "agree", "charts"],
        ),
        Command::Jacobian(_) => object(
            json!({"invariant_factors": reference("intVector"), "order": reference("int")}),
            &["invariant_factors", "order"],
        ),
        Command::ChipEquiv(_) => object(
            json!({"equivalent": {"type": "boolean"}, "reduced": {"type": "array", "items": reference("intVector"), "minItems": 2, "maxItems": 2}}),
            &["equivalent", "reduced"],
        ),
        Command::FiringScript(_) => object(json!({"script": {"oneOf": [{"type": "null"}, reference("intVector")]}}), &["script"]),
        Command::Replay(_) => object(
            json!({
                "reproduced": {"type": "boolean"},
                "hash_matches": {"type": "boolean"},
                "kernel_matches": {"type": "boolean"},
                "stratification_matches": {"type": "boolean"},
                "refines": {"type": "boolean"},
                "charts_match": {"type": "array", "items": {"type": "boolean"}},
                "audit_matches": {"type": ["boolean", "null"]}
            }),
            &["reproduced", "hash_matches", "kernel_matches", "stratification_matches", "refines", "charts_match", "audit_matches"],
        ),
    }
}

pub fn input_schema(command: &Command) -> Value {
    document(input(command))
}

pub fn output_schema(command: &Command) -> Value {
    document(output(command))
}

/// The document printed by `--schema`.
pub fn schemas(command: &Command) -> Value {
    json!({"input": input_schema(command), "output": output_schema(command)})
}
