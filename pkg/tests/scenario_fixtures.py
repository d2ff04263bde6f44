import copy
import json

QEPS = {
    "basis": ["1", "eps"],
    "products": [["1", "1", {"1": 1}], ["1", "eps", {"eps": 1}], ["eps", "1", {"eps": 1}]],
    "unit": {"1": 1},
}

MINIMAL = {
    "name": "minimal",
    "algebras": {"Qeps": QEPS},
    "morphisms": {
        "neg": {"algebra": "Qeps", "images": {"1": {"1": 1}, "eps": {"eps": -1}}},
        "double": {"algebra": "Qeps", "images": {"1": {"1": 1}, "eps": {"eps": 2}}},
    },
    "signatures": {"Qeps[t;neg]": {"alpha": "neg", "kind": "polynomial"}},
    "modules": {"S": {"algebra": "Qeps", "dim": 1, "action": {"1": [[1]], "eps": [[0]]}}},
    "ore_modules": {"S/T1": {"signature": "Qeps[t;neg]", "module": "S", "T": [[1]]}},
    "seminorms": {"w": {"algebra": "Qeps", "weights": [1, "3/2"]}},
    "actions": {"double": {"alpha1": "double", "expect_tempered": False}},
    "suites": ["ore-axioms", "crossed"],
    "parameters": {"trials": 6, "max_k": 3},
}


def minimal(**changes):
    doc = copy.deepcopy(MINIMAL)
    doc.update(changes)
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2)
