"""Every CLI payload validates against its versioned schema file."""

import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from symwitt.cli import main

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"

CASES = [
    ("ring-eval", ["ring", "eval", "--ring", "zmod:9", "--op", "inv",
                   "--args", "4", "--seed", "3"]),
    ("ring-eval", ["ring", "eval", "--ring", "f4", "--args", "x+1"]),
    ("ideal-members", ["ideal", "members", "--ring", "zmod:8", "--ideal", "2"]),
    ("nagata", ["poly", "nagata", "--ring", "f3", "--nvars", "2",
                "--poly", "X2", "--phi", "X1^2+X1+1"]),
    ("pfaffian", ["pf", "--ring", "zmod:5", "--matrix", "[[0,1],[-1,0]]"]),
    ("determinant", ["mat", "det", "--ring", "z", "--matrix", "[[1,2],[3,4]]"]),
    ("word-eval", ["word", "eval", "--ring", "z", "--size", "2",
                   "--word", '[{"op":"elem","i":1,"j":2,"a":"1"}]']),
    ("witt-verify", ["witt", "verify", "--ring", "zmod:3", "--ideal", "unit",
                     "--alpha", "[[0,1],[-1,0]]", "--beta", "[[0,1],[-1,0]]",
                     "--cert", '{"t":0,"word":{"size":4,"tokens":[]}}']),
    ("witt-product", ["witt", "product", "--ring", "zmod:3", "--ideal", "unit",
                      "--alpha", "[[0,1],[-1,0]]", "--beta", "[[0,1],[-1,0]]"]),
    ("witt-lift", ["witt", "lift", "--ring", "zmod:8", "--ideal", "2",
                   "--alpha", "[[0,3],[-3,0]]"]),
    ("witt-root", ["witt", "root", "--ring", "zmod:9",
                   "--matrix", "[[1,3],[0,1]]", "--m", "2"]),
    ("um-complete", ["um", "complete", "--ring", "z", "--row", '["3","5","7"]']),
    ("um-complete", ["um", "complete", "--ring", "zmod:4",
                     "--row", '["2","2","2"]']),
    ("um-theta", ["um", "theta", "--ring", "zmod:5",
                  "--a", '["2","1","0"]', "--b", '["3","4","0"]']),
    ("um-symbol", ["um", "symbol", "--ring", "zmod:9", "--ideal", "3",
                   "--row", '["4","3","0"]']),
    ("um-vdk", ["um", "vdk", "--ring", "zmod:5",
                "--u", '["2","0","0"]', "--v", '["1","0","0"]']),
    ("um-lift", ["um", "lift", "--ring", "zmod:8", "--ideal", "2",
                 "--row", '["3","2","2"]']),
    ("orbit-partition", ["orbit", "um", "--ring", "f2", "--n", "3"]),
    ("orbit-partition", ["orbit", "alt", "--ring", "f2", "--size", "2"]),
    ("orbit-partition", ["orbit", "um", "--ring", "zmod:4", "--ideal", "2",
                         "--n", "2"]),
    ("bijectivity-report", ["report", "vaserstein", "--ring", "f3"]),
    ("bijectivity-report", ["report", "vaserstein", "--ring", "zmod:4",
                            "--ideal", "2", "--seed", "11"]),
]


def _load(name):
    with open(SCHEMA_DIR / f"{name}.v1.json") as fh:
        return json.load(fh)


@pytest.mark.parametrize("name", sorted({n for n, _ in CASES}))
def test_schema_files_are_valid_schemas(name):
    Draft202012Validator.check_schema(_load(name))


def test_every_emitted_schema_key_is_documented():
    names = {p.name.removesuffix(".v1.json") for p in SCHEMA_DIR.glob("*.v1.json")}
    emitted = {n for n, _ in CASES}
    assert emitted <= names
    assert len(names) == 17


@pytest.mark.parametrize("name,argv", CASES,
                         ids=[f"{n}-{i}" for i, (n, _) in enumerate(CASES)])
def test_payload_validates(name, argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == f"{name}/1"
    Draft202012Validator(_load(name)).validate(payload)
