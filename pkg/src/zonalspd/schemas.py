"""JSON Schemas (draft 2020-12) for the reports written by ``--json``."""

_num = {"type": "number"}
_num_or_null = {"type": ["number", "null"]}
_vec = {"type": "array", "items": _num}
_space = {
    "type": "object",
    "required": ["family", "d"],
    "properties": {"family": {"type": "string"}, "d": {"type": "integer", "minimum": 1}},
}
_params = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}


def _report(command: str, props: dict, required: list[str]) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["command", "exit_code", *required],
        "properties": {
            "command": {"const": command},
            "exit_code": {"enum": [0, 1]},
            **props,
        },
    }


_witness = {
    "type": ["object", "null"],
    "required": ["kind"],
    "properties": {"kind": {"enum": ["finite_support", "parity", "missed_progression"]}},
}

CLASSIFY = _report(
    "classify",
    {
        "space": _space,
        "params": _params,
        "support": {"type": "string"},
        "status": {"enum": ["ZeroKernel", "PositiveDefiniteNotStrict", "StrictlyPositiveDefinite"]},
        "reason": {"type": "string"},
        "witness": _witness,
    },
    ["space", "params", "support", "status", "witness"],
)

EVAL = _report(
    "eval",
    {
        "space": _space,
        "eps": _num,
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["t", "value", "bound"],
                "properties": {"t": _num, "value": _num, "bound": _num},
            },
        },
    },
    ["space", "eps", "rows"],
)

GRAM = _report(
    "gram",
    {
        "n": {"type": "integer", "minimum": 1},
        "min_eig": _num,
        "max_eig": _num,
        "psd": {"type": "boolean"},
        "tol": _num,
        "residual": _num_or_null,
        "c": {"type": ["array", "null"], "items": _num},
    },
    ["n", "min_eig", "max_eig", "psd", "residual", "c"],
)

COUNTEREXAMPLE = _report(
    "counterexample",
    {
        "space": _space,
        "witness": _witness,
        "kind": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "points": {"type": "array", "items": {"type": "array", "items": _num}},
        "c": _vec,
        "residual": _num,
        "bound": _num,
        "ok": {"type": "boolean"},
    },
    ["space", "kind", "n", "points", "c", "residual", "bound", "ok"],
)

PROJECT = _report(
    "project",
    {
        "space": _space,
        "params": _params,
        "source": {"type": "string"},
        "N": {"type": "integer", "minimum": 0},
        "nodes": {"type": "integer", "minimum": 1},
        "coeffs": _vec,
        "residual": _num,
        "negative": {"type": "array", "items": {"type": "integer"}},
        "derivative": {"type": ["object", "null"]},
    },
    ["space", "params", "source", "N", "nodes", "coeffs", "residual", "negative"],
)

SELFTEST = _report(
    "selftest",
    {
        "level": {"enum": ["fast", "full"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "max_residual", "tolerance", "passed", "seconds"],
                "properties": {
                    "name": {"type": "string"},
                    "max_residual": _num_or_null,
                    "tolerance": _num,
                    "passed": {"type": "boolean"},
                    "seconds": _num,
                },
            },
        },
    },
    ["level", "checks"],
)

SCHEMAS = {
    "classify": CLASSIFY,
    "eval": EVAL,
    "gram": GRAM,
    "counterexample": COUNTEREXAMPLE,
    "project": PROJECT,
    "selftest": SELFTEST,
}
