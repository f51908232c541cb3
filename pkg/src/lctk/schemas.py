"""JSON Schemas (draft 2020-12) for every JSON document the CLI prints."""

_number_or_null = {"type": ["number", "null"]}
_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

PARAMPOLY = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["coef", "mono"],
        "properties": {
            "coef": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
            "mono": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}},
        },
        "additionalProperties": False,
    },
}

TF = {
    "type": "object",
    "required": ["num", "den", "delay"],
    "properties": {
        "num": {"type": "array", "items": PARAMPOLY},
        "den": {"type": "array", "items": PARAMPOLY, "minItems": 1},
        "delay": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}

TF_OUTPUT = {
    "type": "object",
    "required": ["tf", "tf_json"],
    "properties": {
        "tf": {"type": "string"},
        "tf_json": TF,
        "trace": {
            "type": "object",
            "required": ["unknowns", "equations", "steps"],
            "properties": {
                "unknowns": {"type": "array", "items": {"type": "string"}},
                "equations": {"type": "array", "items": {"type": "string"}},
                "steps": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
}

LAPLACE = {
    "type": "object",
    "required": ["tf", "tf_json", "roc"],
    "properties": {
        "tf": {"type": "string"},
        "tf_json": TF,
        "roc": {"type": "string"},
        "check": {
            "type": "object",
            "required": ["s", "symbolic", "numeric", "abs_diff"],
            "properties": {
                "s": _complex,
                "symbolic": _complex,
                "numeric": _complex,
                "abs_diff": {"type": "number", "minimum": 0},
            },
        },
    },
}

MARGIN_REPORT = {
    "type": "object",
    "required": [
        "gain_crossovers",
        "phase_crossovers",
        "pm_deg",
        "w_gc",
        "gm_db",
        "gm_db_conventional",
        "w_pc",
        "stable_closed_loop",
        "routh_sign_changes",
        "range",
        "ppd",
    ],
    "properties": {
        "gain_crossovers": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "phase_crossovers": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "pm_deg": _number_or_null,
        "w_gc": _number_or_null,
        "gm_db": _number_or_null,
        "gm_db_conventional": _number_or_null,
        "w_pc": _number_or_null,
        "stable_closed_loop": {"enum": ["Stable", "Marginal", "Unstable", None]},
        "routh_sign_changes": {"type": ["integer", "null"], "minimum": 0},
        "range": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "ppd": {"type": "integer", "minimum": 10},
        "selection": {"type": "object"},
    },
}

ORACLE_REPORT = {
    "type": "object",
    "required": ["threshold", "passed", "max_rel_error", "samples"],
    "properties": {
        "threshold": {"type": "number"},
        "passed": {"type": "boolean"},
        "max_rel_error": {"type": "number", "minimum": 0},
        "samples": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["s", "measured", "expected", "rel_error"],
                "properties": {
                    "s": _complex,
                    "measured": _complex,
                    "expected": _complex,
                    "rel_error": {"type": "number", "minimum": 0},
                },
            },
        },
    },
}

UFSS = {
    "type": "object",
    "required": ["K1", "K2", "tf", "tf_json"],
    "properties": {
        "K1": {"type": "string"},
        "K2": {"type": "string"},
        "tf": {"type": "string"},
        "tf_json": TF,
        "open_loop": MARGIN_REPORT,
        "closed_loop": MARGIN_REPORT,
    },
}

#: schema per CLI command that prints JSON
BY_COMMAND = {
    "laplace": LAPLACE,
    "tf": TF_OUTPUT,
    "margins": MARGIN_REPORT,
    "verify": ORACLE_REPORT,
    "case ufss": UFSS,
}
